use closedrange_core::classify::{classify_bergman, BergmanOptions, Dimension};
use closedrange_core::geometry::{
    clip_complement, parse_scene, rasterize, scene_to_json, NamedScene, Point, Rect,
};
use closedrange_core::inradius::{capacity_inradius, InradiusOptions, VerdictKind};
use closedrange_core::logcap::{capacity, equilibrium_measure, frostman_check};
use closedrange_core::spectral::{harmonic_extension, lambda1};
use closedrange_core::Error;

#[test]
fn scene_file_to_clip_capacity() {
    let scene = parse_scene(
        r#"{ "mode": "complement",
             "obstacles": [ { "kind": "segment", "a": [-1, 0], "b": [1, 0] },
                            { "kind": "point", "p": [0, 3] } ] }"#,
    )
    .unwrap();
    let k = clip_complement(&scene, Point::ORIGIN, 4.0);
    let c = capacity(&k, 64).unwrap();
    assert!((c.estimate - 0.5).abs() < 1e-2, "{c:?}");
    assert!(c.lower <= 0.5 && 0.5 <= c.upper);
    let m = equilibrium_measure(&k.without_points(), 64).unwrap();
    let samples: Vec<Point> = (0..32)
        .map(|i| Point::new(-3.0 + 0.2 * i as f64, 0.7))
        .collect();
    assert!(frostman_check(&m, &samples).passed());
}

#[test]
fn unknown_fields_are_rejected_with_a_path() {
    let err = parse_scene(r#"{ "mode": "complement", "obstacles": [ { "kind": "disc", "center": [0, 0], "radius": 1, "colour": 3 } ] }"#)
        .unwrap_err();
    assert!(
        matches!(err, Error::Syntax { .. } | Error::Validation { .. }),
        "{err:?}"
    );
}

#[test]
fn named_scenes_round_trip_through_json() {
    for name in [
        "unit_disc",
        "lattice_discs(0.1,1)",
        "lattice_segments(0.5,1)",
        "arctan_lattice",
        "integer_lattice_points",
    ] {
        let scene = name.parse::<NamedScene>().unwrap().build().unwrap();
        assert_eq!(
            parse_scene(&scene_to_json(&scene)).unwrap(),
            scene,
            "{name}"
        );
    }
}

#[test]
fn harmonic_extension_stays_within_boundary_range() {
    let g = rasterize(
        &NamedScene::UnitDisc.build().unwrap(),
        Rect::new(-1.0, -1.0, 1.0, 1.0),
        1.0 / 32.0,
    )
    .unwrap();
    let boundary = g.sample(|z| z.x * z.x - z.y * z.y);
    let u = harmonic_extension(&g, &boundary).unwrap();
    let (lo, hi) = boundary
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    assert!(u.iter().all(|&v| v >= lo - 1e-9 && v <= hi + 1e-9));
    // x² − y² is discretely harmonic, so the extension reproduces it
    let err = u
        .iter()
        .zip(&boundary)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn segment_lattice_has_finite_inradius() {
    let scene = NamedScene::LatticeSegments {
        length: 0.5,
        spacing: 1.0,
    }
    .build()
    .unwrap();
    let v = capacity_inradius(&scene, &InradiusOptions::default()).unwrap();
    match v.kind {
        VerdictKind::Finite { r_star, delta_star } => {
            assert_eq!(r_star, 1.0);
            assert!(delta_star >= 0.1);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(v.evidence.len(), 4);
}

#[test]
fn bounded_scene_has_infinite_bergman_dimension() {
    let r = classify_bergman(
        &NamedScene::UnitDisc.build().unwrap(),
        &BergmanOptions::default(),
    )
    .unwrap();
    assert_eq!(r.dimension, Dimension::Infinite);
    assert!(r.witness.is_some_and(|w| w.pass));
}

#[test]
fn lattice_truncation_eigenvalue_exceeds_empty_box() {
    let bx = Rect::new(-2.0, -2.0, 2.0, 2.0);
    let lattice = NamedScene::LatticeDiscs {
        eps: 0.1,
        spacing: 1.0,
    }
    .build()
    .unwrap();
    let empty = NamedScene::IntegerLatticePoints.build().unwrap();
    let a = lambda1(&rasterize(&lattice, bx, 1.0 / 16.0).unwrap(), 1e-8)
        .unwrap()
        .lambda1;
    let b = lambda1(&rasterize(&empty, bx, 1.0 / 16.0).unwrap(), 1e-8)
        .unwrap()
        .lambda1;
    assert!(a > 4.0 * b, "{a} {b}");
}
