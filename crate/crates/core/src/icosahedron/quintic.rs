use crate::complex::{consts, BigComplex};
use crate::error::{Error, Result};
use crate::instance::QuinticInstance;
use crate::projective::ProjectivePoint;

use super::context::{icosa_parameter, IcosaContext};

/// `u_∞, u_0, ..., u_4` evaluated at an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct MetacyclicVector {
    /// Index 0 is `u_∞`, index `1 + ν` is `u_ν`.
    pub u: [BigComplex; 6],
    /// Signs fixed at context build; `u_a = sign_a · w(τ z)` for the orbit
    /// member `w ∘ τ` matched to label `a`.
    pub sign_pattern: [i8; 6],
}

impl MetacyclicVector {
    pub fn u_infinity(&self) -> &BigComplex {
        &self.u[0]
    }

    pub fn u_nu(&self, nu: usize) -> &BigComplex {
        &self.u[1 + nu]
    }
}

/// Coefficients of `A₁x₁² + 2A₀x₁x₂ − A₂x₂²`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariantQuadratic {
    pub a0: BigComplex,
    pub a1: BigComplex,
    pub a2: BigComplex,
}

#[derive(Clone, Debug)]
pub struct QuinticReduction {
    pub u: MetacyclicVector,
    pub quadratic: CovariantQuadratic,
    /// `A₀² + A₁A₂`.
    pub discriminant: BigComplex,
    pub x: ProjectivePoint,
    pub parameter: BigComplex,
    /// Which algebraic form produced `x`.
    pub branch: &'static str,
}

pub fn metacyclic_u(instance: &QuinticInstance, ctx: &IcosaContext) -> Result<MetacyclicVector> {
    if instance.degree() != 5 {
        return Err(Error::DimensionMismatch {
            expected: 5,
            found: instance.degree(),
        });
    }
    let z = instance.roots();
    let u: Vec<BigComplex> = ctx.u_polys.iter().map(|p| p.eval(z)).collect();
    Ok(MetacyclicVector {
        u: u.try_into().expect("six labels"),
        sign_pattern: ctx.sign_pattern,
    })
}

pub fn covariant_quadratic(u: &MetacyclicVector) -> CovariantQuadratic {
    let prec = u.u[0].prec();
    let mut sum = BigComplex::zero(prec);
    let mut a1 = BigComplex::zero(prec);
    let mut a2 = BigComplex::zero(prec);
    for nu in 0..5i64 {
        let un = &u.u[1 + nu as usize];
        sum += un;
        a1.add_mul(&BigComplex::root_of_unity(prec, nu, 5), un);
        a2.add_mul(&BigComplex::root_of_unity(prec, 4 * nu, 5), un);
    }
    let a0 = (&consts::sqrt5(prec) * &u.u[0] + sum).div_i64(2);
    CovariantQuadratic { a0, a1, a2 }
}

pub fn quadratic_discriminant(q: &CovariantQuadratic) -> BigComplex {
    &q.a0 * &q.a0 + &q.a1 * &q.a2
}

/// The root `(−A₀ + √A) / A₁` of `A₁x² + 2A₀x − A₂ = 0`, principal branch.
///
/// When `A₁` vanishes at tolerance the same root is taken in the form
/// `A₂ / (A₀ + √A)`; the result is a homogeneous point so either form may
/// land at infinity. When `A` vanishes at tolerance the double root
/// `−A₀ / A₁` is returned.
pub fn icosahedral_point(q: &CovariantQuadratic, tol: f64) -> Result<(ProjectivePoint, &'static str)> {
    let scale = q.a0.abs_f64().max(q.a1.abs_f64()).max(q.a2.abs_f64());
    if scale == 0.0 {
        return Err(Error::degenerate("icosahedral point", "covariant quadratic vanishes"));
    }
    let disc = quadratic_discriminant(q);
    // a square quadratic: the square root of rounding noise would cost half the digits
    if disc.abs_f64() <= tol * scale * scale {
        if q.a1.abs_f64() > tol * scale {
            let p = ProjectivePoint::new(vec![-q.a0.clone(), q.a1.clone()])?;
            return Ok((p, "double root"));
        }
        // then A₀ vanishes too and the quadratic is −A₂x₂²
        return Ok((ProjectivePoint::line_infinity(q.a0.prec()), "double root"));
    }
    let root = disc.sqrt();
    if q.a1.abs_f64() > tol * scale {
        let p = ProjectivePoint::new(vec![&root - &q.a0, q.a1.clone()])?;
        return Ok((p, "primary"));
    }
    let den = &q.a0 + &root;
    if den.abs_f64() > tol * scale {
        let p = ProjectivePoint::new(vec![q.a2.clone(), den])?;
        return Ok((p, "alternate"));
    }
    Err(Error::degenerate("icosahedral point", "both forms of the root degenerate"))
}

pub fn reduce_quintic(instance: &QuinticInstance, ctx: &IcosaContext) -> Result<QuinticReduction> {
    let u = metacyclic_u(instance, ctx)?;
    let quadratic = covariant_quadratic(&u);
    let discriminant = quadratic_discriminant(&quadratic);
    let (x, branch) = icosahedral_point(&quadratic, ctx.cfg.eq_tolerance)?;
    let parameter = icosa_parameter(ctx, &x)?;
    Ok(QuinticReduction {
        u,
        quadratic,
        discriminant,
        x,
        parameter,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_u(inf: BigComplex, nu: [BigComplex; 5]) -> MetacyclicVector {
        let [a, b, c, d, e] = nu;
        MetacyclicVector {
            u: [inf, a, b, c, d, e],
            sign_pattern: [1; 6],
        }
    }

    #[test]
    fn quadratic_from_basis_vectors() {
        let z = || BigComplex::zero(256);
        let q = covariant_quadratic(&vec_u(BigComplex::one(256), [z(), z(), z(), z(), z()]));
        assert!(q.a0.dist_f64(&consts::sqrt5(256).div_i64(2)) < 1e-70);
        assert!(q.a1.abs_f64() < 1e-70 && q.a2.abs_f64() < 1e-70);
        assert!(quadratic_discriminant(&q).dist_f64(&BigComplex::from_ratio(256, 5, 4)) < 1e-70);

        let nu: [BigComplex; 5] = std::array::from_fn(|k| BigComplex::root_of_unity(256, -(k as i64), 5));
        let q = covariant_quadratic(&vec_u(z(), nu));
        assert!(q.a1.dist_f64(&BigComplex::from_i64(256, 5)) < 1e-70);
        assert!(q.a0.abs_f64() < 1e-70 && q.a2.abs_f64() < 1e-70);
    }

    #[test]
    fn point_forms_agree() {
        let q = CovariantQuadratic {
            a0: BigComplex::zero(256),
            a1: BigComplex::one(256),
            a2: BigComplex::one(256),
        };
        let (p, branch) = icosahedral_point(&q, 1e-30).unwrap();
        assert_eq!(branch, "primary");
        assert!(p.line_coordinate(1e-30).unwrap().dist_f64(&BigComplex::one(256)) < 1e-70);

        let small = CovariantQuadratic {
            a0: BigComplex::one(256),
            a1: BigComplex::from_f64(256, 1e-10, 0.0),
            a2: BigComplex::from_f64(256, 0.3, 0.2),
        };
        let (p1, _) = icosahedral_point(&small, 1e-30).unwrap();
        let (p2, branch) = icosahedral_point(&small, 1e-5).unwrap();
        assert_eq!(branch, "alternate");
        assert!(p1.distance(&p2) < 1e-60);
    }
}
