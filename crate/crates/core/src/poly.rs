//! Univariate polynomials as coefficient vectors in ascending powers.

use rug::Float;

use crate::complex::BigComplex;
use crate::matrix::det_gauss;

pub type Poly = Vec<BigComplex>;

/// Horner evaluation.
pub fn eval(p: &[BigComplex], z: &BigComplex) -> BigComplex {
    let prec = p.first().map_or(z.prec(), BigComplex::prec).max(z.prec());
    let mut acc = BigComplex::zero(prec);
    for c in p.iter().rev() {
        acc = &acc * z;
        acc += c;
    }
    acc
}

/// `(p(z), p'(z))` in one Horner pass.
pub fn eval_with_derivative(p: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = p.first().map_or(z.prec(), BigComplex::prec).max(z.prec());
    let mut val = BigComplex::zero(prec);
    let mut der = BigComplex::zero(prec);
    for c in p.iter().rev() {
        der = &der * z;
        der += &val;
        val = &val * z;
        val += c;
    }
    (val, der)
}

/// `sum |a_i| |z|^i`, the scale against which a residual `|p(z)|` is judged.
pub fn abs_eval(p: &[BigComplex], z: &BigComplex) -> Float {
    let r = Float::with_val(64, z.abs());
    let mut acc = Float::new(64);
    for c in p.iter().rev() {
        acc *= &r;
        acc += Float::with_val(64, c.abs());
    }
    acc
}

pub fn mul(a: &[BigComplex], b: &[BigComplex]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let prec = a[0].prec().max(b[0].prec());
    let mut out = vec![BigComplex::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul(x, y);
        }
    }
    out
}

/// Monic `prod (t - r)`.
pub fn from_roots(roots: &[BigComplex], prec: u32) -> Poly {
    let mut p = vec![BigComplex::one(prec)];
    for r in roots {
        let mut next = vec![BigComplex::zero(prec); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i].sub_mul(c, r);
        }
        p = next;
    }
    p
}

pub fn derivative(p: &[BigComplex]) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale_i64(i as i64))
        .collect()
}

/// Divides by the leading coefficient.
pub fn monic(p: &[BigComplex]) -> Poly {
    let lead = p.last().expect("nonempty polynomial").recip();
    p.iter().map(|c| c * &lead).collect()
}

pub fn degree(p: &[BigComplex]) -> usize {
    p.len().saturating_sub(1)
}

/// Sylvester resultant of `a` and `b` (both with nonzero leading coefficient).
pub fn resultant(a: &[BigComplex], b: &[BigComplex]) -> BigComplex {
    let m = degree(a);
    let n = degree(b);
    let size = m + n;
    let prec = a[0].prec().max(b[0].prec());
    if size == 0 {
        return BigComplex::one(prec);
    }
    let mut s = vec![BigComplex::zero(prec); size * size];
    // rows hold coefficients in descending powers
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s[r * size + r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s[(n + r) * size + r + k] = c.clone();
        }
    }
    det_gauss(size, s)
}

/// Discriminant `(-1)^(n(n-1)/2) Res(p, p') / a_n`; equals `a_n^(2n-2) prod_{i<j} (r_i - r_j)^2`.
pub fn discriminant(p: &[BigComplex]) -> BigComplex {
    let n = degree(p);
    let r = resultant(p, &derivative(p));
    let d = &r / p.last().expect("nonempty");
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Elementary symmetric functions `e_0 = 1, e_1, ..., e_n` of the values.
pub fn elementary_symmetric(values: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let mut e = vec![BigComplex::one(prec)];
    for v in values {
        e.push(BigComplex::zero(prec));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1].clone();
            e[k].add_mul(&prev, v);
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn ints(v: &[i64]) -> Poly {
        v.iter().map(|&x| BigComplex::from_i64(P, x)).collect()
    }

    #[test]
    fn discriminant_of_known_roots() {
        let roots = ints(&[1, 2, 4]);
        let p = from_roots(&roots, P);
        // prod (ri - rj)^2 = 1 * 9 * 4
        assert!(discriminant(&p).dist_f64(&BigComplex::from_i64(P, 36)) < 1e-60);
        let quad = ints(&[1, 0, 1]);
        assert!(discriminant(&quad).dist_f64(&BigComplex::from_i64(P, -4)) < 1e-60);
    }

    #[test]
    fn symmetric_functions_match_expansion() {
        let roots = ints(&[1, -2, 3, 5]);
        let e = elementary_symmetric(&roots, P);
        let p = from_roots(&roots, P);
        for k in 0..=4 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert!(p[4 - k].dist_f64(&e[k].scale_i64(sign)) < 1e-60);
        }
    }

    #[test]
    fn derivative_horner_agrees() {
        let p = ints(&[3, -1, 0, 2, 7]);
        let z = BigComplex::from_f64(P, 0.3, -1.2);
        let (v, d) = eval_with_derivative(&p, &z);
        assert!(v.dist_f64(&eval(&p, &z)) < 1e-60);
        assert!(d.dist_f64(&eval(&derivative(&p), &z)) < 1e-60);
    }
}
