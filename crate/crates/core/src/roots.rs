//! Simultaneous root finding by the Aberth–Ehrlich iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::float::Constant;
use rug::Float;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::poly;
use crate::tolerance::ToleranceConfig;

/// All `n` roots of `sum coeffs[i] t^i`, with multiplicity.
///
/// Deterministic for a fixed precision and `root_seed`. Exact zero
/// low-order coefficients are removed as roots at `0` first.
pub fn find_roots(coeffs: &[BigComplex], cfg: &ToleranceConfig) -> Result<Vec<BigComplex>> {
    let prec = cfg.prec();
    let p: Vec<BigComplex> = coeffs.iter().map(|c| c.with_prec(prec)).collect();
    if p.is_empty() {
        return Ok(Vec::new());
    }
    let scale = p.iter().map(BigComplex::abs_f64).fold(0.0, f64::max);
    let lead = p.last().unwrap().abs_f64();
    if scale == 0.0 || lead <= cfg.eq_tolerance * scale {
        return Err(Error::LeadingCoefficientZero);
    }
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    let q = &p[zeros..];
    let mut roots = vec![BigComplex::zero(prec); zeros];
    let n = q.len() - 1;
    match n {
        0 => {}
        1 => roots.push(-(&q[0] / &q[1])),
        _ => roots.extend(aberth(q, cfg)?),
    }
    Ok(roots)
}

fn aberth(p: &[BigComplex], cfg: &ToleranceConfig) -> Result<Vec<BigComplex>> {
    let full = cfg.prec();
    let n = p.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.root_seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut z = initial_guesses(p, &mut rng, full);

    // converge at a lower precision first; the result is a starting point only
    if full >= 512 {
        let low = (full / 4).max(128);
        let pl: Vec<BigComplex> = p.iter().map(|c| c.with_prec(low)).collect();
        let mut zl: Vec<BigComplex> = z.iter().map(|c| c.with_prec(low)).collect();
        let _ = iterate(&pl, &mut zl, low, cfg.root_polish_iterations);
        z = zl.iter().map(|c| c.with_prec(full)).collect();
    }

    let max_iter = cfg.root_polish_iterations;
    if iterate(p, &mut z, full, max_iter) {
        return Ok(z);
    }
    // restart from perturbed positions
    let radius = z.iter().map(BigComplex::abs_f64).fold(0.0, f64::max).max(1.0);
    for zk in z.iter_mut() {
        let dr = rng.gen_range(-1.0..1.0) * 1e-3 * radius;
        let di = rng.gen_range(-1.0..1.0) * 1e-3 * radius;
        *zk = &*zk + &BigComplex::from_f64(full, dr, di);
    }
    if iterate(p, &mut z, full, max_iter) {
        return Ok(z);
    }
    Err(Error::NonConvergence {
        degree: n,
        iterations: 2 * max_iter,
    })
}

/// Runs up to `max_iter` sweeps; returns whether every root met the
/// backward-error stopping rule.
fn iterate(p: &[BigComplex], z: &mut [BigComplex], prec: u32, max_iter: u32) -> bool {
    let n = z.len();
    let dp = poly::derivative(p);
    let u = Float::with_val(64, Float::i_exp(1, 1 - prec as i32));
    let bound_factor = Float::with_val(64, &u * (16 * n as u32));
    let abs_p: Vec<BigComplex> = p.iter().map(|c| BigComplex::from_real(Float::with_val(64, c.abs()))).collect();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let snapshot: Vec<BigComplex> = z.to_vec();
        let updates: Vec<Option<(BigComplex, bool)>> = (0..n)
            .into_par_iter()
            .map(|k| {
                if done[k] {
                    return None;
                }
                let zk = &snapshot[k];
                let val = poly::eval(p, zk);
                let scale = poly::eval(&abs_p, &BigComplex::from_real(Float::with_val(64, zk.abs()))).re().clone();
                if Float::with_val(64, val.abs()) <= Float::with_val(64, &scale * &bound_factor) {
                    return Some((zk.clone(), true));
                }
                let der = poly::eval(&dp, zk);
                let ratio = &val / &der;
                let mut s = BigComplex::zero(prec);
                for (j, zj) in snapshot.iter().enumerate() {
                    if j != k {
                        s += (zk - zj).recip();
                    }
                }
                let denom = BigComplex::one(prec) - &ratio * &s;
                let w = &ratio / &denom;
                let tiny = Float::with_val(64, w.abs()) <= Float::with_val(64, Float::with_val(64, zk.abs()) * &u) * 4u32;
                let next = zk - &w;
                let finite = next.re().is_finite() && next.im().is_finite();
                Some((if finite { next } else { zk.clone() }, tiny))
            })
            .collect();
        for (k, upd) in updates.into_iter().enumerate() {
            if let Some((v, conv)) = upd {
                z[k] = v;
                done[k] = conv;
            }
        }
        if done.iter().all(|&d| d) {
            return true;
        }
    }
    false
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(i, log |a_i|)`, with a seeded angular offset.
fn initial_guesses(p: &[BigComplex], rng: &mut ChaCha8Rng, prec: u32) -> Vec<BigComplex> {
    let n = p.len() - 1;
    let logs: Vec<f64> = p
        .iter()
        .map(|c| {
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                let a = c.abs();
                // log2 via exponent to avoid f64 overflow for huge coefficients
                let (m, e) = a.to_f64_exp();
                m.abs().log2() + e as f64
            }
        })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or below the chord a -> i
            let cross = (b - a) as f64 * (logs[i] - logs[a]) - (i - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let sigma: f64 = rng.gen_range(0.0..1.0);
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let log_r = (logs[i] - logs[j]) / m as f64;
        let r = Float::with_val(prec, log_r).exp2();
        for k in 0..m {
            let frac = k as f64 / m as f64 + 2.0 * i as f64 / n as f64 + sigma / n as f64 + 0.1 * rng.gen_range(0.0..1.0) / m as f64;
            let theta = Float::with_val(prec, &two_pi * frac);
            let (s, c) = theta.sin_cos(Float::new(prec));
            out.push(BigComplex::new(Float::with_val(prec, &r * &c), Float::with_val(prec, &r * &s)));
        }
    }
    debug_assert_eq!(out.len(), n);
    out
}
