use crate::complex::BigComplex;
use crate::error::Result;
use crate::instance::QuinticInstance;
use crate::poly;

use super::context::IcosaContext;
use super::quintic::{covariant_quadratic, metacyclic_u};

#[derive(Clone, Debug)]
pub struct JacobiResolvent {
    /// `ζ_a = 5 A₀(τ_a z)²` for the coset representatives `τ_a`, label order.
    pub values: Vec<BigComplex>,
    /// Monic, ascending powers, degree 6.
    pub coefficients: Vec<BigComplex>,
}

pub fn jacobi_resolvent(instance: &QuinticInstance, ctx: &IcosaContext) -> Result<JacobiResolvent> {
    let values: Vec<BigComplex> = ctx
        .coset_reps
        .iter()
        .map(|tau| {
            let u = metacyclic_u(&instance.permuted(tau), ctx)?;
            let a0 = covariant_quadratic(&u).a0;
            Ok(a0.square().scale_i64(5))
        })
        .collect::<Result<_>>()?;
    let coefficients = poly::from_roots(&values, ctx.cfg.prec());
    Ok(JacobiResolvent { values, coefficients })
}
