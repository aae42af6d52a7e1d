use std::borrow::Cow;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::form::evaluate_form;
use crate::instance::SexticInstance;
use crate::poly;
use crate::projective::ProjectivePoint;
use crate::resultant::{intersect_curves, CurveIntersection};
use crate::tolerance::ToleranceConfig;

use super::context::{build_valentiner_context, ValentinerContext};
use super::inflection::{inflection_points, InflectionSet};
use super::sextic::{omega_cubic, CubicCovariant};

/// Precision of the degree-360 elimination.
pub const ESCALATED_BITS: u32 = 1024;

#[derive(Clone, Debug)]
pub struct NormalproblemInstance {
    pub v: BigComplex,
    pub w: BigComplex,
    pub inflection_point: ProjectivePoint,
    pub cubic: CubicCovariant,
    pub branch_log: Vec<String>,
    /// All nine inflection points, chosen point first.
    pub inflection: InflectionSet,
    /// `(v, w)` at each of the nine points, same order.
    pub values: Vec<(BigComplex, BigComplex)>,
}

/// `(v, w) = (Φ / F⁵, H6 / F²)` at a point of the plane.
pub fn absolute_invariants(ctx: &ValentinerContext, point: &ProjectivePoint) -> Result<(BigComplex, BigComplex)> {
    if point.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: point.dim(),
        });
    }
    let p = point.with_prec(ctx.cfg.prec()).normalized();
    let fv = evaluate_form(&ctx.f, p.coords())?;
    if fv.abs_f64() <= ctx.cfg.eq_tolerance * ctx.f.max_abs() {
        return Err(Error::OnInvariantCurve);
    }
    let hv = evaluate_form(&ctx.h6, p.coords())?;
    let phiv = evaluate_form(&ctx.phi, p.coords())?;
    let f2 = fv.square();
    let v = &phiv / &(&f2.square() * &fv);
    let w = &hv / &f2;
    Ok((v, w))
}

fn forward_from_cubic(cubic: CubicCovariant, ctx: &ValentinerContext) -> Result<NormalproblemInstance> {
    let inflection = inflection_points(&cubic, &ctx.cfg)?;
    let values: Vec<(BigComplex, BigComplex)> = inflection
        .points
        .iter()
        .map(|p| absolute_invariants(ctx, p))
        .collect::<Result<_>>()?;
    let (v, w) = values[inflection.chosen].clone();
    let mut branch_log = inflection.branch_log.clone();
    branch_log.push("invariants scaled so the first significant coefficient is 1".to_string());
    Ok(NormalproblemInstance {
        v,
        w,
        inflection_point: inflection.chosen_point().clone(),
        cubic,
        branch_log,
        inflection,
        values,
    })
}

/// `Ω → inflection points → (v, w)` at the chosen point.
pub fn normalproblem_forward(instance: &SexticInstance, ctx: &ValentinerContext) -> Result<NormalproblemInstance> {
    forward_from_cubic(omega_cubic(instance, ctx)?, ctx)
}

/// As [`normalproblem_forward`] for an arbitrary cubic.
pub fn normalproblem_forward_from_cubic(cubic: &CubicCovariant, ctx: &ValentinerContext) -> Result<NormalproblemInstance> {
    forward_from_cubic(cubic.clone(), ctx)
}

/// Monic polynomial (ascending) whose roots are `v` at the nine inflection
/// points of `Ω`.
pub fn nu_ninth_degree(instance: &SexticInstance, ctx: &ValentinerContext) -> Result<Vec<BigComplex>> {
    nu_ninth_degree_of_cubic(&omega_cubic(instance, ctx)?, ctx)
}

pub fn nu_ninth_degree_of_cubic(cubic: &CubicCovariant, ctx: &ValentinerContext) -> Result<Vec<BigComplex>> {
    let inflection = inflection_points(cubic, &ctx.cfg)?;
    let vs: Vec<BigComplex> = inflection
        .points
        .iter()
        .map(|p| absolute_invariants(ctx, p).map(|(v, _)| v))
        .collect::<Result<_>>()?;
    Ok(poly::from_roots(&vs, ctx.cfg.prec()))
}

/// The points with the given `(v, w)`: common zeros of `Φ − v F⁵` and
/// `H6 − w F²`, computed at no less than [`ESCALATED_BITS`]. A context of
/// lower precision is rebuilt at that precision first.
pub fn solve_normalproblem(ctx: &ValentinerContext, v: &BigComplex, w: &BigComplex) -> Result<CurveIntersection> {
    let hi: Cow<ValentinerContext> = if ctx.cfg.prec() >= ESCALATED_BITS {
        Cow::Borrowed(ctx)
    } else {
        let cfg = ToleranceConfig::escalated().with_seed(ctx.cfg.root_seed);
        Cow::Owned(build_valentiner_context(&cfg)?)
    };
    let prec = hi.cfg.prec();
    let v = v.with_prec(prec);
    let w = w.with_prec(prec);
    let f = &hi.f;
    let curve_30 = hi.phi.try_sub(&f.pow(5).scale(&v))?;
    let curve_12 = hi.h6.try_sub(&f.pow(2).scale(&w))?;
    let out = intersect_curves(&curve_30, &curve_12, &hi.cfg)?;
    if out.max_residual > hi.cfg.eq_tolerance.sqrt() {
        return Err(Error::verification("solutions lie on both curves", out.max_residual));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LineDemo {
    /// Class whose representative `g` gives the line through `p` and `g p`.
    pub class: usize,
    pub image: ProjectivePoint,
    /// `F(p + t · g p)`, ascending powers of `t`.
    pub coefficients: Vec<BigComplex>,
    pub roots: Vec<BigComplex>,
    /// Where the line meets `F = 0`.
    pub points: Vec<ProjectivePoint>,
}

impl LineDemo {
    pub fn degree(&self) -> usize {
        poly::degree(&self.coefficients)
    }
}

/// Restricts `F` to the line joining `p` to its image under the first
/// non-identity class that moves it; the restriction has degree 6.
pub fn covariant_line_demo(ctx: &ValentinerContext, point: &ProjectivePoint) -> Result<LineDemo> {
    let prec = ctx.cfg.prec();
    let tol = ctx.cfg.eq_tolerance;
    let p = point.with_prec(prec).normalized();
    let fp = evaluate_form(&ctx.f, p.coords())?;
    if fp.abs_f64() <= tol * ctx.f.max_abs() {
        return Err(Error::OnInvariantCurve);
    }
    for class in 0..ctx.group.class_count() {
        let g = ctx.group.representative(class);
        let q = p.transform(g)?;
        if q.distance(&p) <= tol.sqrt() {
            continue;
        }
        let along = |t: &BigComplex| -> Vec<BigComplex> {
            p.coords().iter().zip(q.coords()).map(|(a, b)| a + &(b * t)).collect()
        };
        // sample on the 7th roots of unity and interpolate
        let nodes = 7i64;
        let values: Vec<BigComplex> = (0..nodes)
            .map(|k| evaluate_form(&ctx.f, &along(&BigComplex::root_of_unity(prec, k, nodes))))
            .collect::<Result<_>>()?;
        let coefficients: Vec<BigComplex> = (0..nodes)
            .map(|l| {
                let mut acc = BigComplex::zero(prec);
                for (k, v) in values.iter().enumerate() {
                    acc.add_mul(v, &BigComplex::root_of_unity(prec, -(k as i64) * l, nodes));
                }
                acc.div_i64(nodes)
            })
            .collect();
        let scale = coefficients.iter().map(BigComplex::abs_f64).fold(0.0, f64::max);
        if coefficients[6].abs_f64() <= tol * scale {
            continue;
        }
        let roots = crate::roots::find_roots(&coefficients, &ctx.cfg)?;
        let points = roots
            .iter()
            .map(|t| ProjectivePoint::new(along(t)))
            .collect::<Result<_>>()?;
        return Ok(LineDemo {
            class,
            image: q,
            coefficients,
            roots,
            points,
        });
    }
    Err(Error::degenerate("covariant line", "every group element fixes the point"))
}
