use rug::Float;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::matrix::LinearSubstitution;

/// A point of the complex projective line or plane, kept in homogeneous
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint(Vec<BigComplex>);

impl ProjectivePoint {
    pub fn new(coords: Vec<BigComplex>) -> Result<Self> {
        if coords.iter().all(BigComplex::is_zero) {
            return Err(Error::degenerate("projective point", "all coordinates vanish"));
        }
        Ok(Self(coords))
    }

    /// `(x : 1)` on the line.
    pub fn affine_line(x: BigComplex) -> Self {
        let one = BigComplex::one(x.prec());
        Self(vec![x, one])
    }

    /// `(1 : 0)` on the line.
    pub fn line_infinity(prec: u32) -> Self {
        Self(vec![BigComplex::one(prec), BigComplex::zero(prec)])
    }

    pub fn coords(&self) -> &[BigComplex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn prec(&self) -> u32 {
        self.0[0].prec()
    }

    pub fn norm(&self) -> Float {
        let mut s = Float::new(self.prec());
        for c in &self.0 {
            s += c.norm_sqr();
        }
        s.sqrt()
    }

    /// Projective distance `|a ∧ b| / (|a| |b|)`, the sine of the angle
    /// between the two lines in `C^n`.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = &self.0;
        let b = &other.0;
        let prec = self.prec().max(other.prec());
        let mut wedge = Float::new(prec);
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let m = &a[i] * &b[j] - &a[j] * &b[i];
                wedge += m.norm_sqr();
            }
        }
        let d = Float::with_val(prec, wedge.sqrt() / self.norm()) / other.norm();
        d.to_f64()
    }

    pub fn transform(&self, s: &LinearSubstitution) -> Result<Self> {
        Self::new(s.apply(&self.0)?)
    }

    /// Scaled so the first coordinate of largest modulus equals 1.
    pub fn normalized(&self) -> Self {
        let mods: Vec<f64> = self.0.iter().map(BigComplex::abs_f64).collect();
        let m = mods.iter().cloned().fold(0.0, f64::max);
        let k = mods.iter().position(|&x| x >= m * (1.0 - 1e-9)).unwrap_or(0);
        let inv = self.0[k].recip();
        Self(self.0.iter().map(|c| c * &inv).collect())
    }

    /// The affine coordinate `x1 / x2` of a point on the line, `None` at infinity.
    pub fn line_coordinate(&self, tol: f64) -> Option<BigComplex> {
        let scale = self.norm().to_f64();
        if self.0[1].abs_f64() <= tol * scale {
            None
        } else {
            Some(&self.0[0] / &self.0[1])
        }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self(self.0.iter().map(|c| c.with_prec(prec)).collect())
    }
}

/// Hausdorff distance between two finite point sets under the projective metric.
pub fn hausdorff(a: &[ProjectivePoint], b: &[ProjectivePoint]) -> f64 {
    let directed = |x: &[ProjectivePoint], y: &[ProjectivePoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Greedy projective deduplication; the first occurrence of each cluster is kept.
pub fn dedup_points(points: &[ProjectivePoint], tol: f64) -> Vec<ProjectivePoint> {
    let mut out: Vec<ProjectivePoint> = Vec::new();
    for p in points {
        if out.iter().all(|q| q.distance(p) > tol) {
            out.push(p.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_ignores_scaling() {
        let p = ProjectivePoint::new(vec![
            BigComplex::from_f64(256, 1.0, 2.0),
            BigComplex::from_f64(256, -1.0, 0.0),
            BigComplex::from_f64(256, 0.5, 0.5),
        ])
        .unwrap();
        let j = BigComplex::root_of_unity(256, 1, 3).scale_i64(7);
        let q = ProjectivePoint::new(p.coords().iter().map(|c| c * &j).collect()).unwrap();
        assert!(p.distance(&q) < 1e-70);
        assert!(p.normalized().coords().iter().zip(q.normalized().coords()).all(|(a, b)| a.dist_f64(b) < 1e-70));
        let r = ProjectivePoint::line_infinity(256);
        let s = ProjectivePoint::affine_line(BigComplex::zero(256));
        assert!((r.distance(&s) - 1.0).abs() < 1e-15);
    }
}
