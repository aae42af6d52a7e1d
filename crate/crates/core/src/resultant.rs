//! Intersection of two plane curves by elimination: a Sylvester resultant
//! sampled on a circle, interpolated by an inverse DFT, solved, then lifted
//! back and polished by two-variable Newton steps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::form::{act_on_form, evaluate_form, monomials, HomogeneousForm};
use crate::matrix::LinearSubstitution;
use crate::poly;
use crate::projective::ProjectivePoint;
use crate::roots::find_roots;
use crate::tolerance::ToleranceConfig;

/// Frame shifts tried before giving up.
pub const FRAME_ATTEMPTS: usize = 4;

#[derive(Clone, Debug)]
pub struct CurveIntersection {
    /// `deg f · deg g` points with multiplicity.
    pub points: Vec<ProjectivePoint>,
    /// The unimodular frame `M` used: points are `M · (x, y, 1)`.
    pub frame: LinearSubstitution,
    /// Number of frames tried, including the one used.
    pub attempts: usize,
    /// Largest `|f(p)| / max|f|` or `|g(p)| / max|g|` at a normalized point.
    pub max_residual: f64,
}

/// Relative value of `f` at the point scaled to unit largest coordinate.
pub fn relative_residual(f: &HomogeneousForm, p: &ProjectivePoint) -> Result<f64> {
    let v = evaluate_form(f, p.normalized().coords())?;
    Ok(v.abs_f64() / f.max_abs().max(f64::MIN_POSITIVE))
}

fn frame(rng: &mut ChaCha8Rng, prec: u32) -> Result<LinearSubstitution> {
    loop {
        let e: Vec<BigComplex> = (0..9)
            .map(|k| {
                let diag = if k % 4 == 0 { 1.0 } else { 0.0 };
                BigComplex::from_f64(prec, diag + rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
            })
            .collect();
        let m = LinearSubstitution::new(3, e)?;
        if m.determinant().abs_f64() > 0.1 {
            return m.normalized_unimodular();
        }
    }
}

/// `f(x, y, 1)` as coefficients of `y^b`, each a polynomial in `x`.
fn y_coefficients(f: &HomogeneousForm) -> Vec<Vec<BigComplex>> {
    let d = f.degree() as usize;
    let prec = f.prec();
    let mut out = vec![vec![BigComplex::zero(prec); d + 1]; d + 1];
    for (e, c) in monomials(3, f.degree()).into_iter().zip(f.coeffs()) {
        out[e[1] as usize][e[0] as usize] = c.clone();
    }
    for p in out.iter_mut() {
        while p.len() > 1 && p.last().is_some_and(BigComplex::is_zero) {
            p.pop();
        }
    }
    out
}

fn eval_y_poly(coeffs: &[Vec<BigComplex>], x: &BigComplex) -> Vec<BigComplex> {
    coeffs.iter().map(|p| poly::eval(p, x)).collect()
}

/// Hadamard bound `Σ log2 |row|` of the Sylvester matrix of `a`, `b`.
fn sylvester_log_bound(a: &[BigComplex], b: &[BigComplex]) -> f64 {
    let norm = |p: &[BigComplex]| p.iter().map(|c| c.abs_f64().powi(2)).sum::<f64>().sqrt().log2();
    (b.len() - 1) as f64 * norm(a) + (a.len() - 1) as f64 * norm(b)
}

/// Coefficients (ascending) of `Res_y(f, g)`, a polynomial of degree
/// `deg f · deg g` in `x`, and the largest `log2 (|Res| / Hadamard bound)`
/// over the sample nodes.
fn resultant_in_x(fc: &[Vec<BigComplex>], gc: &[Vec<BigComplex>], n_deg: usize, prec: u32) -> (Vec<BigComplex>, f64) {
    let nodes = n_deg + 1;
    let sampled: Vec<(BigComplex, f64)> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let x = BigComplex::root_of_unity(prec, k as i64, nodes as i64);
            let (a, b) = (eval_y_poly(fc, &x), eval_y_poly(gc, &x));
            let r = poly::resultant(&a, &b);
            let rel = log2_abs(&r) - sylvester_log_bound(&a, &b);
            (r, rel)
        })
        .collect();
    let rel = sampled.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let roots: Vec<BigComplex> = (0..nodes)
        .map(|k| BigComplex::root_of_unity(prec, -(k as i64), nodes as i64))
        .collect();
    let coeffs = (0..nodes)
        .into_par_iter()
        .map(|l| {
            let mut acc = BigComplex::zero(prec);
            for (k, (v, _)) in sampled.iter().enumerate() {
                acc.add_mul(v, &roots[(k * l) % nodes]);
            }
            acc.div_i64(nodes as i64)
        })
        .collect();
    (coeffs, rel)
}

/// `log2 |z|` without overflow for huge or tiny values.
fn log2_abs(z: &BigComplex) -> f64 {
    if z.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = z.abs().to_f64_exp();
    m.log2() + e as f64
}

struct Newton {
    f: HomogeneousForm,
    g: HomogeneousForm,
    fx: HomogeneousForm,
    fy: HomogeneousForm,
    gx: HomogeneousForm,
    gy: HomogeneousForm,
}

impl Newton {
    fn new(f: &HomogeneousForm, g: &HomogeneousForm) -> Result<Self> {
        Ok(Self {
            f: f.clone(),
            g: g.clone(),
            fx: f.derivative(0)?,
            fy: f.derivative(1)?,
            gx: g.derivative(0)?,
            gy: g.derivative(1)?,
        })
    }

    fn polish(&self, x: &mut BigComplex, y: &mut BigComplex, prec: u32) -> Result<()> {
        let u = 2f64.powi(32 - prec as i32);
        let mut last = f64::INFINITY;
        for _ in 0..60 {
            let p = [x.clone(), y.clone(), BigComplex::one(prec)];
            let fv = evaluate_form(&self.f, &p)?;
            let gv = evaluate_form(&self.g, &p)?;
            let a = evaluate_form(&self.fx, &p)?;
            let b = evaluate_form(&self.fy, &p)?;
            let c = evaluate_form(&self.gx, &p)?;
            let d = evaluate_form(&self.gy, &p)?;
            let det = &(&a * &d) - &(&b * &c);
            if det.is_zero() {
                return Ok(());
            }
            let dx = &(&(&d * &fv) - &(&b * &gv)) / &det;
            let dy = &(&(&a * &gv) - &(&c * &fv)) / &det;
            *x -= &dx;
            *y -= &dy;
            let size = x.abs_f64().max(y.abs_f64()).max(1.0);
            let step = dx.abs_f64().max(dy.abs_f64());
            // stop at the tolerance, or once rounding stalls the contraction
            if step <= u * size || step > 0.5 * last {
                return Ok(());
            }
            last = step;
        }
        Ok(())
    }
}

/// All common zeros of two ternary forms, `deg f · deg g` of them counted
/// with multiplicity. Retries in a new random frame when the resultant
/// degenerates in the current one.
pub fn intersect_curves(f: &HomogeneousForm, g: &HomogeneousForm, cfg: &ToleranceConfig) -> Result<CurveIntersection> {
    if f.num_vars() != 3 || g.num_vars() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: f.num_vars().min(g.num_vars()),
        });
    }
    let prec = cfg.prec();
    let f = f.with_prec(prec);
    let g = g.with_prec(prec);
    let n_deg = (f.degree() * g.degree()) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.root_seed ^ 0x5EED_F4A3_E000_0000 ^ n_deg as u64);
    let mut last_err = Error::degenerate("intersection", "no frame tried");
    for attempt in 1..=FRAME_ATTEMPTS {
        let m = frame(&mut rng, prec)?;
        match intersect_in_frame(&f, &g, &m, n_deg, cfg) {
            Ok((points, max_residual)) => {
                return Ok(CurveIntersection {
                    points,
                    frame: m,
                    attempts: attempt,
                    max_residual,
                })
            }
            Err(e @ Error::Degenerate { .. }) | Err(e @ Error::LeadingCoefficientZero) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn intersect_in_frame(
    f: &HomogeneousForm,
    g: &HomogeneousForm,
    m: &LinearSubstitution,
    n_deg: usize,
    cfg: &ToleranceConfig,
) -> Result<(Vec<ProjectivePoint>, f64)> {
    let prec = cfg.prec();
    let tol = cfg.eq_tolerance;
    let fs = act_on_form(m, f)?;
    let gs = act_on_form(m, g)?;
    let fc = y_coefficients(&fs);
    let gc = y_coefficients(&gs);
    // full y-degree keeps the Sylvester determinant of the right size
    for (c, form) in [(&fc, &fs), (&gc, &gs)] {
        let lead = c.last().expect("nonempty")[0].abs_f64();
        if lead <= tol * form.max_abs() {
            return Err(Error::degenerate("intersection", "curve passes through the frame's y-direction point"));
        }
    }
    let (res, rel) = resultant_in_x(&fc, &gc, n_deg, prec);
    // a resultant at rounding level against its Sylvester bound vanishes identically
    if rel <= tol.log2() {
        return Err(Error::degenerate("intersection", "curves share a component"));
    }
    // rescale by a power of two: coefficients can leave the f64 range
    let top = res.iter().map(log2_abs).fold(f64::NEG_INFINITY, f64::max);
    if log2_abs(&res[n_deg]) <= top + cfg.unit_roundoff().log2() + 48.0 {
        return Err(Error::degenerate("intersection", "resultant degree drops in this frame"));
    }
    let shift = Float::with_val(prec, Float::i_exp(1, -(top.floor() as i32)));
    let res: Vec<BigComplex> = res.iter().map(|c| c.scale(&shift)).collect();
    let xs = find_roots(&res, cfg)?;

    // lift each x through the lower-degree curve, choosing the y that best
    // satisfies the other one
    let (low_c, high) = if gs.degree() <= fs.degree() { (&gc, &fs) } else { (&fc, &gs) };
    let newton = Newton::new(&fs, &gs)?;
    let lifted: Vec<(BigComplex, BigComplex)> = xs
        .par_iter()
        .map(|x| -> Result<(BigComplex, BigComplex)> {
            let ycoef = eval_y_poly(low_c, x);
            let ys = find_roots(&ycoef, cfg)?;
            let best = ys
                .into_iter()
                .map(|y| {
                    let r = evaluate_form(high, &[x.clone(), y.clone(), BigComplex::one(prec)])
                        .map(|v| v.abs_f64())
                        .unwrap_or(f64::INFINITY);
                    (r, y)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, y)| y)
                .ok_or_else(|| Error::degenerate("intersection", "no y over a resultant root"))?;
            let (mut xx, mut yy) = (x.clone(), best);
            newton.polish(&mut xx, &mut yy, prec)?;
            Ok((xx, yy))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(lifted.len());
    let mut max_residual = 0f64;
    for (x, y) in lifted {
        let p = ProjectivePoint::new(m.apply(&[x, y, BigComplex::one(prec)])?)?;
        max_residual = max_residual.max(relative_residual(f, &p)?).max(relative_residual(g, &p)?);
        points.push(p);
    }
    Ok((points, max_residual))
}
