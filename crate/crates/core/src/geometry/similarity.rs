use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

/// A similarity of the plane: `z -> scale * e^{i rotation} * (reflect ? conj(z) : z) + translation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Similarity {
    #[serde(default)]
    pub translation: Point,
    #[serde(default)]
    pub rotation: f64,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub reflect: bool,
}

fn one() -> f64 {
    1.0
}

impl Default for Similarity {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        translation: Point::ORIGIN,
        rotation: 0.0,
        scale: 1.0,
        reflect: false,
    };

    pub fn translation(t: Point) -> Self {
        Self {
            translation: t,
            ..Self::IDENTITY
        }
    }

    pub fn scaling(r: f64) -> Self {
        Self {
            scale: r,
            ..Self::IDENTITY
        }
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            rotation: theta,
            ..Self::IDENTITY
        }
    }

    /// Reflection across the imaginary axis, `z -> -conj(z)`.
    pub fn reflect_imaginary_axis() -> Self {
        Self {
            rotation: std::f64::consts::PI,
            reflect: true,
            ..Self::IDENTITY
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "similarity scale must be positive, got {}",
                self.scale
            )));
        }
        if !self.translation.is_finite() || !self.rotation.is_finite() {
            return Err(Error::InvalidArgument(
                "similarity has non-finite parameters".into(),
            ));
        }
        Ok(())
    }

    /// Linear part applied to a vector (no translation).
    pub fn apply_linear(&self, v: Point) -> Point {
        let w = if self.reflect {
            Point::new(v.x, -v.y)
        } else {
            v
        };
        let (s, c) = self.rotation.sin_cos();
        Point::new(c * w.x - s * w.y, s * w.x + c * w.y) * self.scale
    }

    pub fn apply(&self, z: Point) -> Point {
        self.apply_linear(z) + self.translation
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &Similarity) -> Similarity {
        // other(self(z)) = s2 R2 F2 (s1 R1 F1 z + t1) + t2
        // R2 F2 R1 F1 = R(θ2 ± θ1) F(f1 xor f2): conjugation flips the sign of θ1.
        let rotation = if other.reflect {
            other.rotation - self.rotation
        } else {
            other.rotation + self.rotation
        };
        Similarity {
            translation: other.apply(self.translation),
            rotation,
            scale: self.scale * other.scale,
            reflect: self.reflect != other.reflect,
        }
    }

    pub fn inverse(&self) -> Similarity {
        // z = s R F w + t  =>  w = F^{-1} R^{-1} (z - t) / s
        let rotation = if self.reflect {
            self.rotation
        } else {
            -self.rotation
        };
        let lin = Similarity {
            translation: Point::ORIGIN,
            rotation,
            scale: 1.0 / self.scale,
            reflect: self.reflect,
        };
        Similarity {
            translation: -lin.apply_linear(self.translation),
            ..lin
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point, b: Point) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn composition_matches_sequential_application() {
        let s1 = Similarity {
            translation: Point::new(0.3, -1.0),
            rotation: 0.7,
            scale: 1.5,
            reflect: true,
        };
        let s2 = Similarity {
            translation: Point::new(-2.0, 0.5),
            rotation: -1.1,
            scale: 0.4,
            reflect: false,
        };
        let z = Point::new(0.9, 2.3);
        assert!(close(s1.then(&s2).apply(z), s2.apply(s1.apply(z))));
        assert!(close(s2.then(&s1).apply(z), s1.apply(s2.apply(z))));
        assert!(close(s1.inverse().apply(s1.apply(z)), z));
        assert!(close(
            s2.then(&s1).inverse().apply(s1.apply(s2.apply(z))),
            z
        ));
    }

    #[test]
    fn reflection_across_imaginary_axis() {
        let r = Similarity::reflect_imaginary_axis();
        assert!(close(r.apply(Point::new(2.0, 3.0)), Point::new(-2.0, 3.0)));
    }

    #[test]
    fn rejects_nonpositive_scale() {
        assert!(Similarity::scaling(0.0).validate().is_err());
        assert!(Similarity::scaling(-1.0).validate().is_err());
    }
}
