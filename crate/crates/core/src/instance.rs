use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::poly;
use crate::roots::find_roots;
use crate::tolerance::ToleranceConfig;

/// A polynomial given by its roots, together with its coefficients and the
/// difference product `prod_{i<j} (z_i - z_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInstance {
    roots: Vec<BigComplex>,
    /// Elementary symmetric values `e_1, ..., e_n`.
    coefficients: Vec<BigComplex>,
    sqrt_discriminant: BigComplex,
}

pub type QuinticInstance = RootInstance;
pub type SexticInstance = RootInstance;

impl RootInstance {
    /// Rejects inputs with two roots closer than the tolerance.
    pub fn from_roots(roots: Vec<BigComplex>, cfg: &ToleranceConfig) -> Result<Self> {
        let prec = cfg.prec();
        let roots: Vec<BigComplex> = roots.iter().map(|r| r.with_prec(prec)).collect();
        let scale = roots.iter().map(BigComplex::abs_f64).fold(1.0, f64::max);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[i].dist_f64(&roots[j]) <= cfg.eq_tolerance * scale {
                    return Err(Error::RepeatedRoots);
                }
            }
        }
        let coefficients = poly::elementary_symmetric(&roots, prec)[1..].to_vec();
        let sqrt_discriminant = difference_product(&roots);
        Ok(Self {
            roots,
            coefficients,
            sqrt_discriminant,
        })
    }

    /// From polynomial coefficients in descending powers, leading first.
    /// Roots are found numerically and sorted lexicographically by `(re, im)`,
    /// which fixes the sign of the difference product.
    pub fn from_coefficients(descending: &[BigComplex], cfg: &ToleranceConfig) -> Result<Self> {
        if descending.len() < 2 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: 0,
            });
        }
        let ascending: Vec<BigComplex> = descending.iter().rev().cloned().collect();
        let mut roots = find_roots(&ascending, cfg)?;
        roots.sort_by(|a, b| a.lex_cmp(b));
        Self::from_roots(roots, cfg)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[BigComplex] {
        &self.roots
    }

    pub fn coefficients(&self) -> &[BigComplex] {
        &self.coefficients
    }

    /// Monic coefficients `t^n - e_1 t^(n-1) + ...` in ascending powers.
    pub fn monic_ascending(&self) -> Vec<BigComplex> {
        let n = self.roots.len();
        let prec = self.roots[0].prec();
        let mut out = vec![BigComplex::zero(prec); n + 1];
        out[n] = BigComplex::one(prec);
        for (k, e) in self.coefficients.iter().enumerate() {
            let k = k + 1;
            out[n - k] = if k % 2 == 0 { e.clone() } else { -e };
        }
        out
    }

    pub fn sqrt_discriminant(&self) -> &BigComplex {
        &self.sqrt_discriminant
    }

    /// The instance with roots rearranged by `σ`, i.e. `σ·z`.
    pub fn permuted(&self, sigma: &Perm) -> Self {
        let roots = sigma.act(&self.roots);
        let sqrt_discriminant = difference_product(&roots);
        Self {
            roots,
            coefficients: self.coefficients.clone(),
            sqrt_discriminant,
        }
    }

    /// `|sqrt_discriminant^2 - disc(coefficients)|`, relative to the larger side.
    pub fn discriminant_residual(&self) -> f64 {
        let d = poly::discriminant(&self.monic_ascending());
        let s = self.sqrt_discriminant.square();
        d.dist_f64(&s) / d.abs_f64().max(s.abs_f64()).max(1e-300)
    }
}

pub fn difference_product(roots: &[BigComplex]) -> BigComplex {
    let prec = roots[0].prec();
    let mut acc = BigComplex::one(prec);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            acc = &acc * &(&roots[i] - &roots[j]);
        }
    }
    acc
}
