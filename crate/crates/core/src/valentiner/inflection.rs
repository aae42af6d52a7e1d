use std::cmp::Ordering;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::form::hessian_form;
use crate::projective::ProjectivePoint;
use crate::resultant::intersect_curves;
use crate::tolerance::ToleranceConfig;

use super::sextic::CubicCovariant;

/// Two inflection points closer than this are taken as one.
pub const DISTINCT_POINTS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct InflectionSet {
    /// The nine points, each scaled so its first coordinate of largest
    /// modulus is 1, sorted lexicographically by `(re, im)` of the coordinates.
    pub points: Vec<ProjectivePoint>,
    /// Index of the chosen point; always the first in the sorted order.
    pub chosen: usize,
    pub branch_log: Vec<String>,
    /// Largest relative value of the cubic or its Hessian at a returned point.
    pub max_residual: f64,
}

impl InflectionSet {
    pub fn chosen_point(&self) -> &ProjectivePoint {
        &self.points[self.chosen]
    }
}

fn chart_cmp(a: &ProjectivePoint, b: &ProjectivePoint) -> Ordering {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| x.lex_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// The nine common zeros of a nondegenerate cubic and its Hessian.
pub fn inflection_points(cubic: &CubicCovariant, cfg: &ToleranceConfig) -> Result<InflectionSet> {
    let tol = cfg.eq_tolerance;
    let form = cubic.form().with_prec(cfg.prec());
    let scale = form.max_abs();
    if scale == 0.0 {
        return Err(Error::degenerate("inflection", "the cubic is zero"));
    }
    let form = form.scale(&BigComplex::from_f64(cfg.prec(), 1.0 / scale, 0.0));
    let hess = hessian_form(&form)?;
    if hess.is_zero_tol(tol) {
        return Err(Error::degenerate("inflection", "the Hessian vanishes identically"));
    }
    let hess = hess.scale(&BigComplex::from_f64(cfg.prec(), 1.0 / hess.max_abs(), 0.0));
    let inter = intersect_curves(&form, &hess, cfg)?;
    if inter.max_residual > tol.sqrt() {
        return Err(Error::verification("inflection points lie on the cubic and its Hessian", inter.max_residual));
    }
    let mut points: Vec<ProjectivePoint> = inter.points.iter().map(ProjectivePoint::normalized).collect();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if points[a].distance(&points[b]) < DISTINCT_POINTS {
                return Err(Error::degenerate("inflection", "fewer than nine distinct inflection points"));
            }
        }
    }
    points.sort_by(chart_cmp);
    let branch_log = vec![
        format!("elimination frame accepted on attempt {}", inter.attempts),
        "points from resultant elimination and Newton polishing; no radical branches taken".to_string(),
        "chosen point: first in lexicographic (re, im) order after scaling the largest coordinate to 1".to_string(),
    ];
    Ok(InflectionSet {
        points,
        chosen: 0,
        branch_log,
        max_residual: inter.max_residual,
    })
}
