//! Dense homogeneous polynomials in two or three variables.
//!
//! Monomials are stored in lexicographic order: the exponent of `x1`
//! descends, then that of `x2`. In two variables the index of
//! `x1^(d-k) x2^k` is `k`; in three variables the index of `x1^a x2^b x3^c`
//! is `T(d - a) + c` with `T(m) = m (m + 1) / 2`.

use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::matrix::LinearSubstitution;

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousForm {
    num_vars: usize,
    degree: u32,
    coeffs: Vec<BigComplex>,
}

fn tri(m: u32) -> usize {
    (m as usize * (m as usize + 1)) / 2
}

/// Number of monomials of degree `d` in `n` variables.
pub fn monomial_count(num_vars: usize, degree: u32) -> usize {
    match num_vars {
        2 => degree as usize + 1,
        _ => tri(degree + 1),
    }
}

/// Exponent vectors in storage order.
pub fn monomials(num_vars: usize, degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(monomial_count(num_vars, degree));
    if num_vars == 2 {
        for k in 0..=degree {
            out.push([degree - k, k, 0]);
        }
    } else {
        for a in (0..=degree).rev() {
            for b in (0..=degree - a).rev() {
                out.push([a, b, degree - a - b]);
            }
        }
    }
    out
}

fn index_of(num_vars: usize, degree: u32, e: [u32; 3]) -> usize {
    if num_vars == 2 {
        e[1] as usize
    } else {
        tri(degree - e[0]) + e[2] as usize
    }
}

fn binomial_row(n: u32) -> Vec<Float> {
    let mut row = vec![Float::with_val(64, 1)];
    for k in 1..=n {
        let prev = row[k as usize - 1].clone();
        let mut next = Float::with_val(256, prev * (n - k + 1));
        next /= k;
        row.push(next);
    }
    row
}

impl HomogeneousForm {
    pub fn zero(num_vars: usize, degree: u32, prec: u32) -> Self {
        Self {
            num_vars,
            degree,
            coeffs: vec![BigComplex::zero(prec); monomial_count(num_vars, degree)],
        }
    }

    pub fn from_coeffs(num_vars: usize, degree: u32, coeffs: Vec<BigComplex>) -> Result<Self> {
        if !(num_vars == 2 || num_vars == 3) {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: num_vars,
            });
        }
        let n = monomial_count(num_vars, degree);
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            num_vars,
            degree,
            coeffs,
        })
    }

    /// Builds a form from `(exponents, coefficient)` pairs; repeated
    /// monomials accumulate.
    pub fn from_terms(
        num_vars: usize,
        degree: u32,
        prec: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, BigComplex)>,
    ) -> Result<Self> {
        let mut f = Self::zero(num_vars, degree, prec);
        for (e, c) in terms {
            let idx = f.checked_index(&e)?;
            f.coeffs[idx] += &c;
        }
        Ok(f)
    }

    /// Integer-coefficient form from `(exponents, coefficient)` pairs.
    pub fn from_int_terms(num_vars: usize, degree: u32, prec: u32, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            num_vars,
            degree,
            prec,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigComplex::from_i64(prec, *c))),
        )
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[BigComplex]) -> Result<Self> {
        let n = coeffs.len();
        // lex order for degree 1 is x1, x2, x3
        Self::from_coeffs(n, 1, coeffs.to_vec())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigComplex> {
        self.coeffs
    }

    pub fn monomials(&self) -> Vec<[u32; 3]> {
        monomials(self.num_vars, self.degree)
    }

    pub fn coeff(&self, exps: &[u32]) -> Result<&BigComplex> {
        let idx = self.checked_index(exps)?;
        Ok(&self.coeffs[idx])
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            num_vars: self.num_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.with_prec(prec)).collect(),
        }
    }

    fn checked_index(&self, exps: &[u32]) -> Result<usize> {
        if exps.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: exps.len(),
            });
        }
        let s: u32 = exps.iter().sum();
        if s != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: s,
            });
        }
        let mut e = [0u32; 3];
        e[..exps.len()].copy_from_slice(exps);
        Ok(index_of(self.num_vars, self.degree, e))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&BigComplex, &BigComplex) -> BigComplex) -> Self {
        Self {
            num_vars: self.num_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        Self {
            num_vars: self.num_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        Self {
            num_vars: self.num_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a.scale_i64(c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let n = self.num_vars;
        let d = self.degree + other.degree;
        let prec = self.prec().max(other.prec());
        let mut out = Self::zero(n, d, prec);
        let ea = self.monomials();
        let eb = other.monomials();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = [ea[i][0] + eb[j][0], ea[i][1] + eb[j][1], ea[i][2] + eb[j][2]];
                out.coeffs[index_of(n, d, e)].add_mul(a, b);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, BigComplex::one(self.prec()));
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Degree-0 form.
    pub fn constant(num_vars: usize, c: BigComplex) -> Self {
        Self {
            num_vars,
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// `(l . x)^d` expanded by the multinomial theorem.
    pub fn linear_power(l: &[BigComplex], d: u32) -> Result<Self> {
        let n = l.len();
        let prec = l[0].prec();
        let mut out = Self::zero(n, d, prec);
        let pows: Vec<Vec<BigComplex>> = l
            .iter()
            .map(|c| {
                let mut v = vec![BigComplex::one(prec)];
                for k in 1..=d as usize {
                    v.push(&v[k - 1] * c);
                }
                v
            })
            .collect();
        let binom: Vec<Vec<Float>> = (0..=d).map(binomial_row).collect();
        for (idx, e) in monomials(n, d).into_iter().enumerate() {
            // d! / (a! b! c!) = C(d, a) * C(d - a, b)
            let mut mult = Float::with_val(prec, &binom[d as usize][e[0] as usize]);
            if n == 3 {
                mult *= &binom[(d - e[0]) as usize][e[1] as usize];
            }
            let mut term = &pows[0][e[0] as usize] * &pows[1][e[1] as usize];
            if n == 3 {
                term = &term * &pows[2][e[2] as usize];
            }
            out.coeffs[idx] = term.scale(&mult);
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `var` (0-based).
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: var + 1,
            });
        }
        let prec = self.prec();
        if self.degree == 0 {
            return Ok(Self::zero(self.num_vars, 0, prec));
        }
        let d = self.degree - 1;
        let mut out = Self::zero(self.num_vars, d, prec);
        for (i, e) in self.monomials().into_iter().enumerate() {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e;
            ne[var] -= 1;
            out.coeffs[index_of(self.num_vars, d, ne)] += self.coeffs[i].scale_i64(e[var] as i64);
        }
        Ok(out)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(BigComplex::abs_f64).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.dist_f64(b))
            .fold(0.0, f64::max))
    }

    /// `max_diff` divided by the larger coefficient scale of the two forms.
    pub fn rel_diff(&self, other: &Self) -> Result<f64> {
        let d = self.max_diff(other)?;
        let s = self.max_abs().max(other.max_abs());
        Ok(if s == 0.0 { d } else { d / s })
    }

    /// True when every coefficient is below `tol` in modulus.
    pub fn is_zero_tol(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.abs_f64() <= tol)
    }

    /// Binary form evaluated at `(t, 1)` read as a univariate polynomial,
    /// coefficients in ascending powers of `t`.
    pub fn dehomogenize_binary(&self) -> Vec<BigComplex> {
        // x1^(d-k) x2^k at x2 = 1: power of t = d - k
        self.coeffs.iter().rev().cloned().collect()
    }
}

/// `sum coeff * monomial(point)`.
pub fn evaluate_form(form: &HomogeneousForm, point: &[BigComplex]) -> Result<BigComplex> {
    if point.len() != form.num_vars {
        return Err(Error::DimensionMismatch {
            expected: form.num_vars,
            found: point.len(),
        });
    }
    let d = form.degree as usize;
    let prec = form.prec().max(point[0].prec());
    let pows: Vec<Vec<BigComplex>> = point
        .iter()
        .map(|x| {
            let mut v = vec![BigComplex::one(prec)];
            for k in 1..=d {
                v.push(&v[k - 1] * x);
            }
            v
        })
        .collect();
    let mut acc = BigComplex::zero(prec);
    for (c, e) in form.coeffs.iter().zip(form.monomials()) {
        if c.is_zero() {
            continue;
        }
        let mut m = &pows[0][e[0] as usize] * &pows[1][e[1] as usize];
        if form.num_vars == 3 {
            m = &m * &pows[2][e[2] as usize];
        }
        acc.add_mul(c, &m);
    }
    Ok(acc)
}

/// The form `x -> form(S x)`.
///
/// Horner in the first image variable `L1 = row 0 of S`, with each
/// coefficient (a form in `x2, x3`) substituted by a nested Horner in `L2`
/// against precomputed powers of `L3`.
pub fn act_on_form(sub: &LinearSubstitution, form: &HomogeneousForm) -> Result<HomogeneousForm> {
    let n = form.num_vars;
    if sub.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sub.dim(),
        });
    }
    let d = form.degree;
    let prec = form.prec().max(sub.prec());
    let lin: Vec<HomogeneousForm> = (0..n)
        .map(|i| HomogeneousForm::linear(&sub.row(i).iter().map(|c| c.with_prec(prec)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    if d == 0 {
        return Ok(form.clone());
    }
    if n == 2 {
        // sum_k c_k L1^(d-k) L2^k, Horner in L1 with L2 powers
        let l2_pows = powers(&lin[1], d);
        let mut acc = HomogeneousForm::constant(2, form.coeffs[0].clone());
        for k in 1..=d {
            acc = &acc * &lin[0];
            acc = acc.add_scaled(&l2_pows[k as usize], &form.coeffs[k as usize]);
        }
        return Ok(acc);
    }
    let l3_pows = powers(&lin[2], d);
    // g_m(L2, L3) for the block of monomials with x1-exponent d - m
    let block = |m: u32| -> HomogeneousForm {
        let base = tri(m);
        // coefficients of x2^b x3^(m-b), b = m..0 stored at base + (m - b)
        let mut acc = HomogeneousForm::constant(3, form.coeffs[base].clone());
        for c in 1..=m {
            acc = &acc * &lin[1];
            acc = acc.add_scaled(&l3_pows[c as usize], &form.coeffs[base + c as usize]);
        }
        acc
    };
    let mut acc = block(0);
    for m in 1..=d {
        acc = &acc * &lin[0];
        acc = acc.try_add(&block(m))?;
    }
    Ok(acc)
}

fn powers(l: &HomogeneousForm, d: u32) -> Vec<HomogeneousForm> {
    let mut v = vec![HomogeneousForm::constant(l.num_vars, BigComplex::one(l.prec()))];
    for k in 1..=d as usize {
        let next = &v[k - 1] * l;
        v.push(next);
    }
    v
}

impl HomogeneousForm {
    /// `self + c * other` for forms of equal shape.
    fn add_scaled(mut self, other: &Self, c: &BigComplex) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        if !c.is_zero() {
            for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
                a.add_mul(b, c);
            }
        }
        self
    }
}

fn det3(m: &[HomogeneousForm; 9]) -> Result<HomogeneousForm> {
    let minor = |a: usize, b: usize, c: usize, d: usize| -> Result<HomogeneousForm> {
        (&m[a] * &m[b]).try_sub(&(&m[c] * &m[d]))
    };
    let t0 = &m[0] * &minor(4, 8, 5, 7)?;
    let t1 = &m[1] * &minor(3, 8, 5, 6)?;
    let t2 = &m[2] * &minor(3, 7, 4, 6)?;
    t0.try_sub(&t1)?.try_add(&t2)
}

/// Hessian determinant of a ternary form of any degree `>= 2`.
pub fn hessian(form: &HomogeneousForm) -> Result<HomogeneousForm> {
    if form.degree < 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: form.degree,
        });
    }
    let n = form.num_vars;
    let first: Vec<HomogeneousForm> = (0..n).map(|i| form.derivative(i)).collect::<Result<_>>()?;
    let second = |i: usize, j: usize| first[i].derivative(j);
    if n == 2 {
        let a = second(0, 0)?;
        let b = second(0, 1)?;
        let c = second(1, 1)?;
        return (&a * &c).try_sub(&(&b * &b));
    }
    let m: [HomogeneousForm; 9] = [
        second(0, 0)?,
        second(0, 1)?,
        second(0, 2)?,
        second(1, 0)?,
        second(1, 1)?,
        second(1, 2)?,
        second(2, 0)?,
        second(2, 1)?,
        second(2, 2)?,
    ];
    det3(&m)
}

/// Hessian of a ternary cubic (degree 3, 3 variables).
pub fn hessian_form(cubic: &HomogeneousForm) -> Result<HomogeneousForm> {
    if cubic.num_vars != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: cubic.num_vars,
        });
    }
    if cubic.degree != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: cubic.degree,
        });
    }
    hessian(cubic)
}

/// Functional determinant of three ternary quadratics.
pub fn jacobian_det(
    f1: &HomogeneousForm,
    f2: &HomogeneousForm,
    f3: &HomogeneousForm,
) -> Result<HomogeneousForm> {
    for f in [f1, f2, f3] {
        if f.num_vars != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: f.num_vars,
            });
        }
        if f.degree != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: f.degree,
            });
        }
    }
    let m: [HomogeneousForm; 9] = [
        f1.derivative(0)?,
        f1.derivative(1)?,
        f1.derivative(2)?,
        f2.derivative(0)?,
        f2.derivative(1)?,
        f2.derivative(2)?,
        f3.derivative(0)?,
        f3.derivative(1)?,
        f3.derivative(2)?,
    ];
    det3(&m)
}

/// Binary Jacobian `f_x1 g_x2 - f_x2 g_x1`.
pub fn binary_jacobian(f: &HomogeneousForm, g: &HomogeneousForm) -> Result<HomogeneousForm> {
    if f.num_vars != 2 || g.num_vars != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.num_vars.max(g.num_vars),
        });
    }
    (&f.derivative(0)? * &g.derivative(1)?).try_sub(&(&f.derivative(1)? * &g.derivative(0)?))
}

impl<'a> Mul<&'a HomogeneousForm> for &'a HomogeneousForm {
    type Output = HomogeneousForm;
    /// Panics on a variable-count mismatch; use `try_mul` to handle it.
    fn mul(self, rhs: &'a HomogeneousForm) -> HomogeneousForm {
        self.try_mul(rhs).expect("forms in the same variables")
    }
}

impl<'a> Add<&'a HomogeneousForm> for &'a HomogeneousForm {
    type Output = HomogeneousForm;
    fn add(self, rhs: &'a HomogeneousForm) -> HomogeneousForm {
        self.try_add(rhs).expect("forms of equal shape")
    }
}

impl<'a> Sub<&'a HomogeneousForm> for &'a HomogeneousForm {
    type Output = HomogeneousForm;
    fn sub(self, rhs: &'a HomogeneousForm) -> HomogeneousForm {
        self.try_sub(rhs).expect("forms of equal shape")
    }
}

impl Neg for &HomogeneousForm {
    type Output = HomogeneousForm;
    fn neg(self) -> HomogeneousForm {
        self.scale_i64(-1)
    }
}
