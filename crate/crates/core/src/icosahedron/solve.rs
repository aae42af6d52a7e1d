use crate::complex::BigComplex;
use crate::error::Result;
use crate::projective::ProjectivePoint;
use crate::roots::find_roots;

use super::context::IcosaContext;

/// A value of the icosahedral parameter, possibly infinite.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Finite(BigComplex),
    Infinite,
}

/// The 60 solutions of `H³(x) − 1728 X f⁵(x) = 0`, with multiplicity.
///
/// At `X = ∞` the zeros of `f` are returned, `x = ∞` among them.
pub fn solve_icosahedral(ctx: &IcosaContext, value: &ParamValue) -> Result<Vec<ProjectivePoint>> {
    let prec = ctx.cfg.prec();
    match value {
        ParamValue::Infinite => {
            let f5 = ctx.f.pow(5);
            let p = f5.dehomogenize_binary();
            // f(x1, x2) has the factor x2, so f⁵(x, 1) has degree 55
            let trimmed = &p[..=55];
            let mut out: Vec<ProjectivePoint> =
                find_roots(trimmed, &ctx.cfg)?.into_iter().map(ProjectivePoint::affine_line).collect();
            out.extend((0..5).map(|_| ProjectivePoint::line_infinity(prec)));
            Ok(out)
        }
        ParamValue::Finite(x) => {
            let form = ctx.h.pow(3).try_sub(&ctx.f.pow(5).scale(&x.scale_i64(1728)))?;
            let p = form.dehomogenize_binary();
            Ok(find_roots(&p, &ctx.cfg)?.into_iter().map(ProjectivePoint::affine_line).collect())
        }
    }
}
