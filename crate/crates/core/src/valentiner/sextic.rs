use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::form::{evaluate_form, jacobian_det, HomogeneousForm};
use crate::instance::SexticInstance;
use crate::matrix::det_gauss;
use crate::perm::Perm;

use super::context::{mixed_discriminant, ValentinerContext};

/// Ten coefficients of a ternary cubic in the stored monomial order
/// `x1³, x1²x2, x1²x3, x1x2², x1x2x3, x1x3², x2³, x2²x3, x2x3², x3³`.
#[derive(Clone, Debug)]
pub struct CubicCovariant {
    pub phi: Vec<BigComplex>,
}

impl CubicCovariant {
    pub fn from_form(form: &HomogeneousForm) -> Result<Self> {
        if form.num_vars() != 3 || form.degree() != 3 {
            return Err(Error::DegreeMismatch {
                expected: 3,
                found: form.degree(),
            });
        }
        Ok(Self {
            phi: form.coeffs().to_vec(),
        })
    }

    pub fn form(&self) -> HomogeneousForm {
        HomogeneousForm::from_coeffs(3, 3, self.phi.clone()).expect("ten coefficients")
    }

    pub fn prec(&self) -> u32 {
        self.phi[0].prec()
    }

    pub fn max_abs(&self) -> f64 {
        self.phi.iter().map(BigComplex::abs_f64).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, x: &[BigComplex]) -> Result<BigComplex> {
        evaluate_form(&self.form(), x)
    }
}

/// `(J, c)` for conics `i, j, k`: the Jacobian determinant and the mixed
/// discriminant of the three matrices.
pub fn triple_invariants(ctx: &ValentinerContext, i: usize, j: usize, k: usize) -> Result<(HomogeneousForm, BigComplex)> {
    if i == j || j == k || i == k || i.max(j).max(k) >= 6 {
        return Err(Error::InvalidConfig(format!("conic indices ({i}, {j}, {k}) must be distinct and below 6")));
    }
    let c = &ctx.conics;
    let jac = jacobian_det(&c.forms[i], &c.forms[j], &c.forms[k])?;
    let mixed = mixed_discriminant(&c.matrices[i], &c.matrices[j], &c.matrices[k]);
    if mixed.abs_f64() <= ctx.cfg.eq_tolerance {
        return Err(Error::degenerate("triple invariants", "mixed discriminant vanishes"));
    }
    Ok((jac, mixed))
}

/// Sorted image `{p(i), p(j), p(k)}` of an ascending triple and the sign of
/// the sorting permutation.
pub fn triple_image(p: &Perm, t: [usize; 3]) -> ([usize; 3], i8) {
    let mut img = t.map(|x| p.apply(x));
    let mut sign = 1i8;
    for a in 0..3 {
        for b in 0..2 - a {
            if img[b] > img[b + 1] {
                img.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    (img, sign)
}

/// `det [z_i^e, z_j^e, z_k^e]_{e ∈ (a, b, c)}`.
pub fn power_determinant(zi: &BigComplex, zj: &BigComplex, zk: &BigComplex, exps: [u32; 3]) -> BigComplex {
    let mut m = Vec::with_capacity(9);
    for e in exps {
        for z in [zi, zj, zk] {
            m.push(z.pow_u(e));
        }
    }
    det_gauss(3, m)
}

/// `(z_j − z_k)(z_k − z_i)(z_i − z_j)`.
pub fn difference_product3(zi: &BigComplex, zj: &BigComplex, zk: &BigComplex) -> BigComplex {
    let a = zj - zk;
    let b = zk - zi;
    let c = zi - zj;
    &(&a * &b) * &c
}

fn check_instance(instance: &SexticInstance) -> Result<()> {
    if instance.degree() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            found: instance.degree(),
        });
    }
    Ok(())
}

fn combine(ctx: &ValentinerContext, weights: &[BigComplex], scale: f64) -> Result<CubicCovariant> {
    let prec = ctx.cfg.prec();
    let mut phi = vec![BigComplex::zero(prec); 10];
    for (w, q) in weights.iter().zip(&ctx.quotients) {
        for (acc, c) in phi.iter_mut().zip(q.coeffs()) {
            acc.add_mul(w, c);
        }
    }
    let out = CubicCovariant { phi };
    if out.max_abs() <= ctx.cfg.eq_tolerance * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::degenerate("omega", "the covariant cubic vanishes identically"));
    }
    Ok(out)
}

/// `Ω = Σ_{i<j<k} (z_j − z_k)(z_k − z_i)(z_i − z_j) · J_ijk / c_ijk`.
pub fn omega_cubic(instance: &SexticInstance, ctx: &ValentinerContext) -> Result<CubicCovariant> {
    check_instance(instance)?;
    let z: Vec<BigComplex> = instance.roots().iter().map(|r| r.with_prec(ctx.cfg.prec())).collect();
    let weights: Vec<BigComplex> = ctx
        .triples
        .iter()
        .map(|&[i, j, k]| difference_product3(&z[i], &z[j], &z[k]))
        .collect();
    let scale = weights.iter().map(BigComplex::abs_f64).fold(0.0, f64::max);
    combine(ctx, &weights, scale)
}

/// As [`omega_cubic`] with `det [z^a; z^b; z^c]` in place of the difference
/// product; `(0, 1, 2)` gives `Ω` itself.
pub fn generalized_omega(instance: &SexticInstance, ctx: &ValentinerContext, exps: (u32, u32, u32)) -> Result<CubicCovariant> {
    check_instance(instance)?;
    let (a, b, c) = exps;
    if a == b || b == c || a == c {
        return Err(Error::InvalidConfig(format!("exponents ({a}, {b}, {c}) must be distinct")));
    }
    let z: Vec<BigComplex> = instance.roots().iter().map(|r| r.with_prec(ctx.cfg.prec())).collect();
    let weights: Vec<BigComplex> = ctx
        .triples
        .iter()
        .map(|&[i, j, k]| power_determinant(&z[i], &z[j], &z[k], [a, b, c]))
        .collect();
    let scale = weights.iter().map(BigComplex::abs_f64).fold(0.0, f64::max);
    combine(ctx, &weights, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_image_signs() {
        let p = Perm::from_images(vec![1, 0, 2, 3, 4, 5]);
        assert_eq!(triple_image(&p, [0, 1, 2]), ([0, 1, 2], -1));
        assert_eq!(triple_image(&p, [0, 2, 3]), ([1, 2, 3], 1));
    }

    #[test]
    fn vandermonde_matches_difference_product() {
        let z = [3, -1, 7].map(|x| BigComplex::from_i64(128, x));
        let v = power_determinant(&z[0], &z[1], &z[2], [0, 1, 2]);
        assert!(v.dist_f64(&difference_product3(&z[0], &z[1], &z[2])) < 1e-30);
    }
}
