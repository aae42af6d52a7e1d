//! Arbitrary-precision complex scalars backed by MPFR floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// A complex number whose real and imaginary parts carry the same MPFR
/// mantissa precision.
///
/// Binary operations run at the larger of the two operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    re: Float,
    im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        Self {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(prec, 1)
    }

    pub fn i(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::with_val(prec, 1),
        }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        Self {
            re: Float::with_val(prec, n),
            im: Float::new(prec),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        Self {
            re,
            im: Float::new(p),
        }
    }

    /// `num / den` rounded once at the working precision.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        let mut re = Float::with_val(prec, num);
        re /= den;
        Self::from_real(re)
    }

    /// `exp(2 pi i k / n)`, computed from MPFR's pi at full precision.
    pub fn root_of_unity(prec: u32, k: i64, n: i64) -> Self {
        let k = k.rem_euclid(n);
        let mut angle = Float::with_val(prec, Constant::Pi);
        angle *= 2 * k;
        angle /= n;
        let (s, c) = angle.sin_cos(Float::new(prec));
        Self { re: c, im: s }
    }

    /// Principal square root of a real integer (imaginary for negative input).
    pub fn sqrt_int(prec: u32, n: i64) -> Self {
        let r = Float::with_val(prec, n.unsigned_abs()).sqrt();
        if n >= 0 {
            Self::from_real(r)
        } else {
            Self {
                re: Float::new(prec),
                im: r,
            }
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(&self) -> Float {
        let mut n = Float::with_val(self.prec(), &self.re * &self.re);
        n += Float::with_val(self.prec(), &self.im * &self.im);
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Modulus rounded to `f64`; saturates rather than overflowing the exponent.
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn div_i64(&self, s: i64) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re / s),
            im: Float::with_val(p, &self.im / s),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -(Float::with_val(p, &self.im / &n))),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// Principal square root: branch cut on the negative real axis, and
    /// `sqrt(-r) = i sqrt(r)`.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        if self.re >= 0 {
            let t = Float::with_val(p, Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / Float::with_val(p, &t * 2u32));
            Self { re: t, im }
        } else {
            let t = Float::with_val(p, Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let re = Float::with_val(p, self.im.abs_ref()) / Float::with_val(p, &t * 2u32);
            let im = if self.im.is_sign_negative() { -t } else { t };
            Self { re, im }
        }
    }

    /// Principal cube root `|z|^(1/3) exp(i arg(z) / 3)`.
    pub fn cbrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs().cbrt();
        let theta = self.arg() / 3u32;
        let (s, c) = theta.sin_cos(Float::new(p));
        Self {
            re: Float::with_val(p, &r * &c),
            im: Float::with_val(p, &r * &s),
        }
    }

    /// `self += a * b` without intermediate allocation.
    pub fn add_mul(&mut self, a: &BigComplex, b: &BigComplex) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// `self -= a * b` without intermediate allocation.
    pub fn sub_mul(&mut self, a: &BigComplex, b: &BigComplex) {
        self.re -= &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im -= &a.re * &b.im;
        self.im -= &a.im * &b.re;
    }

    /// `|self - other|` as an `f64`.
    pub fn dist_f64(&self, other: &Self) -> f64 {
        (self - other).abs_f64()
    }

    /// Lexicographic order on `(re, im)`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        match self.re.partial_cmp(&other.re) {
            Some(Ordering::Equal) | None => {
                self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal)
            }
            Some(o) => o,
        }
    }

    /// Exact decimal rendering: enough digits that parsing at the same
    /// precision recovers the identical value.
    pub fn to_decimal_pair(&self) -> (String, String) {
        (
            self.re.to_string_radix(10, None),
            self.im.to_string_radix(10, None),
        )
    }

    pub fn from_decimal_pair(prec: u32, re: &str, im: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<Float> {
            Float::parse(s)
                .map(|v| Float::with_val(prec, v))
                .map_err(|e| Error::Parse(format!("bad decimal `{s}`: {e}")))
        };
        Ok(Self {
            re: parse(re)?,
            im: parse(im)?,
        })
    }

    /// Parses a literal of the form `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
    pub fn parse_literal(prec: u32, text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty complex literal".into()));
        }
        let parse_real = |t: &str| -> Result<Float> {
            Float::parse(t)
                .map(|v| Float::with_val(prec, v))
                .map_err(|_| Error::Parse(format!("bad number `{t}` in `{text}`")))
        };
        let parse_imag = |t: &str| -> Result<Float> {
            match t {
                "" | "+" => Ok(Float::with_val(prec, 1)),
                "-" => Ok(Float::with_val(prec, -1)),
                _ => parse_real(t),
            }
        };
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::from_real(parse_real(&s)?));
        };
        // split at the last sign that is not an exponent sign and not leading
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-')
                && !matches!(bytes[k - 1], b'e' | b'E')
            {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => Ok(Self {
                re: parse_real(&body[..k])?,
                im: parse_imag(&body[k..])?,
            }),
            None => Ok(Self {
                re: Float::new(prec),
                im: parse_imag(body)?,
            }),
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_pair();
        write!(f, "{re} {im}")
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -self.clone()
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        BigComplex { re, im }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let n = rhs.norm_sqr();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        re /= &n;
        im /= &n;
        BigComplex { re, im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex { (&self).$m(rhs) }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl<'a> AddAssign<&'a BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &'a BigComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: BigComplex) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl<'a> SubAssign<&'a BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &'a BigComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign<BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: BigComplex) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl<'a> MulAssign<&'a BigComplex> for BigComplex {
    fn mul_assign(&mut self, rhs: &'a BigComplex) {
        *self = &*self * rhs;
    }
}

/// The numerical constants that occur in the two groups, all computed at the
/// requested precision.
pub mod consts {
    use super::BigComplex;

    /// `exp(2 pi i / 5)`
    pub fn epsilon(prec: u32) -> BigComplex {
        BigComplex::root_of_unity(prec, 1, 5)
    }

    /// `exp(2 pi i / 3)`
    pub fn j(prec: u32) -> BigComplex {
        BigComplex::root_of_unity(prec, 1, 3)
    }

    pub fn sqrt5(prec: u32) -> BigComplex {
        BigComplex::sqrt_int(prec, 5)
    }

    /// Principal `sqrt(-15) = i sqrt(15)`.
    pub fn sqrt_m15(prec: u32) -> BigComplex {
        BigComplex::sqrt_int(prec, -15)
    }

    /// `(1 - sqrt(-15)) / 8`
    pub fn alpha(prec: u32) -> BigComplex {
        (BigComplex::one(prec) - sqrt_m15(prec)).div_i64(8)
    }

    /// `(-3 + sqrt(-15)) / 4`
    pub fn beta(prec: u32) -> BigComplex {
        (BigComplex::from_i64(prec, -3) + sqrt_m15(prec)).div_i64(4)
    }

    /// Golden ratio `(1 + sqrt 5) / 2`.
    pub fn golden(prec: u32) -> BigComplex {
        (BigComplex::one(prec) + sqrt5(prec)).div_i64(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn close(a: &BigComplex, b: &BigComplex) -> bool {
        a.dist_f64(b) < 1e-70
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let eps = consts::epsilon(P);
        let mut s = BigComplex::zero(P);
        for k in 0..5 {
            s += &eps.pow_u(k);
        }
        assert!(s.abs_f64() < 1e-70);
        let j = consts::j(P);
        let s = BigComplex::one(P) + &j + j.square();
        assert!(s.abs_f64() < 1e-70);
        assert!(close(&j.pow_u(3), &BigComplex::one(P)));
    }

    #[test]
    fn sqrt_is_principal() {
        let m1 = BigComplex::from_i64(P, -1);
        assert!(close(&m1.sqrt(), &BigComplex::i(P)));
        let z = BigComplex::from_f64(P, -3.0, -4.0);
        let r = z.sqrt();
        assert!(close(&r, &BigComplex::from_f64(P, 1.0, -2.0)));
        assert!(close(&r.square(), &z));
        let w = BigComplex::from_f64(P, 0.3, 0.7);
        assert!(close(&w.cbrt().pow_u(3), &w));
    }

    #[test]
    fn alpha_beta_values() {
        let s = consts::sqrt_m15(P);
        assert!(close(&s.square(), &BigComplex::from_i64(P, -15)));
        let a = consts::alpha(P);
        assert!(close(&(a.scale_i64(8) + &s), &BigComplex::one(P)));
        let b = consts::beta(P);
        assert!(close(&(b.scale_i64(4) - &s), &BigComplex::from_i64(P, -3)));
    }

    #[test]
    fn parse_literals() {
        let cases = [
            ("1", (1.0, 0.0)),
            ("2.5-3i", (2.5, -3.0)),
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("1e-3+2e-4i", (1e-3, 2e-4)),
            ("-4i", (0.0, -4.0)),
            ("-1.5e+2-i", (-150.0, -1.0)),
        ];
        for (s, (re, im)) in cases {
            let z = BigComplex::parse_literal(P, s).unwrap();
            assert_eq!(z.to_c64(), (re, im), "{s}");
        }
        assert!(BigComplex::parse_literal(P, "1+").is_err());
        assert!(BigComplex::parse_literal(P, "abc").is_err());
    }

    #[test]
    fn decimal_pair_round_trip_is_exact() {
        let z = consts::epsilon(P) * consts::sqrt5(P);
        let (re, im) = z.to_decimal_pair();
        let back = BigComplex::from_decimal_pair(P, &re, &im).unwrap();
        assert_eq!(back, z);
    }
}
