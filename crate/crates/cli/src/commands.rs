use std::fs;

use serde::Serialize;

use closedrange_core::classify::{
    box_truncation, classify_bergman, classify_main, disc_truncation, BergmanOptions, MainOptions,
    LADDER_EIGEN,
};
use closedrange_core::geometry::{
    clip_complement, parse_scene, rasterize, NamedScene, Obstacle, Point, Rect, Scene,
    ARCTAN_ESCAPE_M,
};
use closedrange_core::inradius::InradiusOptions;
use closedrange_core::logcap::{capacity, CompactSet};
use closedrange_core::spectral::{
    closed_range_constant, eigenvalue_stability_experiment, lambda1_with, richardson, scene_box,
    EigenOptions,
};

use crate::error::{CliError, Result};
use crate::output::{csv_text, json_text, write_file, RunConfig};
use crate::{
    BergmanArgs, CapArgs, ClassifyArgs, Format, Lambda1Args, Preset, SceneArgs, SweepArgs,
};

/// First zero of `J₀`, squared.
const J01_SQ: f64 = 5.783185962946784;

pub fn load_scene(args: &SceneArgs) -> Result<Scene> {
    match (&args.scene, &args.named) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(parse_scene(&text)?)
        }
        (None, Some(name)) => Ok(name.parse::<NamedScene>()?.build()?),
        (None, None) => Err(CliError::Usage(
            "one of --scene or --named is required".into(),
        )),
    }
}

/// Parses `1.5`, `-2` or `1/64`.
pub fn parse_number(s: &str) -> Result<f64> {
    let bad = || CliError::Usage(format!("not a number: `{s}`"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            a.trim().parse::<f64>().map_err(|_| bad())?
                / b.trim().parse::<f64>().map_err(|_| bad())?
        }
        None => s.trim().parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_list(s: &str, len: usize) -> Result<Vec<f64>> {
    let v = s.split(',').map(parse_number).collect::<Result<Vec<_>>>()?;
    if v.len() != len {
        return Err(CliError::Usage(format!(
            "expected {len} comma-separated numbers, got `{s}`"
        )));
    }
    Ok(v)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}

#[derive(Serialize)]
struct CapOutput {
    center: Point,
    radius: f64,
    pieces: usize,
    capacity: closedrange_core::logcap::CapacityReport,
}

pub fn cap(config: &RunConfig, a: &CapArgs) -> Result<String> {
    let scene = load_scene(&a.scene)?;
    let c = parse_list(&a.center, 2)?;
    let center = Point::new(c[0], c[1]);
    let radius = positive("radius", a.radius)?;
    let k = clip_complement(&scene, center, radius);
    let out = CapOutput {
        center,
        radius,
        pieces: k.pieces.len(),
        capacity: capacity(&k, a.budget)?,
    };
    json_text(config, &out)
}

#[derive(Serialize)]
struct Lambda1Output {
    #[serde(rename = "box")]
    bx: [f64; 4],
    lambdas: Vec<f64>,
    spectral: closedrange_core::spectral::SpectralResult,
    constant: f64,
}

pub fn lambda1(config: &RunConfig, a: &Lambda1Args) -> Result<String> {
    let scene = load_scene(&a.scene)?;
    let bx = match &a.bx {
        Some(s) => {
            let v = parse_list(s, 4)?;
            if !(v[2] > v[0] && v[3] > v[1]) {
                return Err(CliError::Usage(format!("empty box `{s}`")));
            }
            Rect::new(v[0], v[1], v[2], v[3])
        }
        None => scene_box(&scene)?,
    };
    let hs =
        a.h.iter()
            .map(|s| parse_number(s).and_then(|h| positive("h", h)))
            .collect::<Result<Vec<_>>>()?;
    if hs.is_empty() {
        return Err(CliError::Usage("at least one grid step is required".into()));
    }
    let opts = EigenOptions {
        tol: positive("tol", a.tol)?,
        max_outer: a.max_outer,
        ..EigenOptions::default()
    };
    let mut results = Vec::with_capacity(hs.len());
    let mut grid = None;
    for &h in &hs {
        let g = rasterize(&scene, bx, h)?;
        results.push(lambda1_with(&g, opts)?);
        grid = Some(g);
    }
    let lambdas: Vec<f64> = results.iter().map(|r| r.lambda1).collect();
    let mut fine = results.pop().expect("non-empty");
    if let Some(coarse) = results.last() {
        fine.richardson = Some(richardson(coarse.lambda1, fine.lambda1, coarse.h / fine.h));
    }
    fine.h_list = hs.clone();
    if let (Some(path), Some(g)) = (&a.emit_eigvector, &grid) {
        #[derive(Serialize)]
        struct Row {
            x: f64,
            y: f64,
            value: f64,
        }
        let rows: Vec<Row> = fine
            .eigvector
            .iter()
            .enumerate()
            .map(|(i, &value)| {
                let p = g.node_at(i);
                Row {
                    x: p.x,
                    y: p.y,
                    value,
                }
            })
            .collect();
        write_file(path, &csv_text(&rows)?)?;
    }
    let out = Lambda1Output {
        bx: [bx.x0, bx.y0, bx.x1, bx.y1],
        lambdas,
        constant: closed_range_constant(&fine).constant,
        spectral: fine,
    };
    json_text(config, &out)
}

#[derive(Serialize)]
struct FlatRow {
    key: String,
    value: String,
}

/// One `(key, value)` row per scalar leaf, keys being dotted JSON paths.
fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<FlatRow>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        serde_json::Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        serde_json::Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        serde_json::Value::String(s) => out.push(FlatRow {
            key: prefix.into(),
            value: s.clone(),
        }),
        other => out.push(FlatRow {
            key: prefix.into(),
            value: other.to_string(),
        }),
    }
}

fn report_text<T: Serialize>(config: &RunConfig, format: Format, report: &T) -> Result<String> {
    match format {
        Format::Json => json_text(config, report),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &serde_json::to_value(report)?, &mut rows);
            csv_text(&rows)
        }
    }
}

pub fn classify(config: &RunConfig, a: &ClassifyArgs) -> Result<String> {
    let scene = load_scene(&a.scene)?;
    let opts = MainOptions {
        inradius: InradiusOptions {
            density: a.density,
            budget: a.budget,
            ..InradiusOptions::default()
        },
        shells: a.shells,
        samples_per_side: a.samples,
        ..MainOptions::default()
    };
    report_text(config, a.format, &classify_main(&scene, &opts)?)
}

pub fn bergman(config: &RunConfig, a: &BergmanArgs) -> Result<String> {
    let scene = load_scene(&a.scene)?;
    let opts = BergmanOptions {
        budget: a.budget,
        ..BergmanOptions::default()
    };
    report_text(config, a.format, &classify_bergman(&scene, &opts)?)
}

fn centered_segment(len: f64) -> Obstacle {
    Obstacle::segment(Point::new(-0.5 * len, 0.0), Point::new(0.5 * len, 0.0))
}

pub fn sweep(a: &SweepArgs) -> Result<String> {
    match a.preset {
        Preset::SlitShrink => {
            #[derive(Serialize)]
            struct Row {
                slit_len: f64,
                cap: f64,
                lambda1: f64,
            }
            let lens = [0.5, 0.1, 0.02];
            let slits: Vec<CompactSet> = lens
                .iter()
                .map(|&l| CompactSet::new(vec![centered_segment(l)], 0.0))
                .collect();
            let h = positive("h", parse_number(&a.h)?)?;
            let base = Scene::disc(Point::ORIGIN, 1.0);
            let t = eigenvalue_stability_experiment(&base, &slits, h, J01_SQ, 64)?;
            let rows: Vec<Row> = lens
                .iter()
                .zip(&t.rows)
                .map(|(&slit_len, r)| Row {
                    slit_len,
                    cap: r.capacity,
                    lambda1: r.lambda1,
                })
                .collect();
            csv_text(&rows)
        }
        Preset::ArctanLadder => {
            #[derive(Serialize)]
            struct Row {
                m: f64,
                cap_clip: f64,
                lambda1_truncation: f64,
            }
            let scene = NamedScene::ArctanLattice.build()?;
            let rows = ARCTAN_ESCAPE_M
                .iter()
                .map(|&m| {
                    let c = Point::new(-m, 0.0);
                    Ok(Row {
                        m,
                        cap_clip: capacity(&clip_complement(&scene, c, 2.0), 64)?.estimate,
                        lambda1_truncation: disc_truncation(&scene, c, 2.0, LADDER_EIGEN)?
                            .spectral
                            .best(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            csv_text(&rows)
        }
        Preset::CapacityConvergence => {
            #[derive(Serialize)]
            struct Row {
                set: &'static str,
                n: usize,
                estimate: f64,
                lower: f64,
                upper: f64,
                transfinite: f64,
                exact: f64,
            }
            let square = Obstacle::polygon(vec![
                Point::new(-0.5, -0.5),
                Point::new(0.5, -0.5),
                Point::new(0.5, 0.5),
                Point::new(-0.5, 0.5),
            ]);
            // cap of the unit square: Γ(1/4)² / (4 π^{3/2})
            let square_cap = 0.590_170_299_508_048_7;
            let sets = [
                ("unit_disc", Obstacle::disc(Point::ORIGIN, 1.0), 1.0),
                ("unit_segment", centered_segment(1.0), 0.25),
                ("unit_square", square, square_cap),
            ];
            let mut rows = Vec::new();
            for (set, o, exact) in sets {
                let k = CompactSet::new(vec![o], 0.0);
                for n in [8, 16, 32, 64, 128] {
                    let c = capacity(&k, n)?;
                    rows.push(Row {
                        set,
                        n,
                        estimate: c.estimate,
                        lower: c.lower,
                        upper: c.upper,
                        transfinite: c.transfinite,
                        exact,
                    });
                }
            }
            csv_text(&rows)
        }
        Preset::Exhaustion => {
            #[derive(Serialize)]
            struct Row {
                radius: f64,
                lambda1: f64,
                constant: f64,
                disc_constant: f64,
            }
            let scene = if a.scene.scene.is_none() && a.scene.named.is_none() {
                NamedScene::LatticeDiscs {
                    eps: 0.1,
                    spacing: 1.0,
                }
                .build()?
            } else {
                load_scene(&a.scene)?
            };
            let rows = [1.0, 2.0, 4.0, 8.0]
                .iter()
                .map(|&r| {
                    let e = if scene.base_disc.is_some() {
                        box_truncation(&scene, Point::ORIGIN, 2.0 * r, LADDER_EIGEN)?
                    } else {
                        disc_truncation(&scene, Point::ORIGIN, r, LADDER_EIGEN)?
                    };
                    Ok(Row {
                        radius: r,
                        lambda1: e.spectral.best(),
                        constant: e.constant,
                        disc_constant: 2.0 * r / J01_SQ.sqrt(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            csv_text(&rows)
        }
    }
}
