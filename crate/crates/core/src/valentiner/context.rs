use std::collections::HashMap;

use rayon::prelude::*;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::form::{act_on_form, evaluate_form, jacobian_det, monomials, HomogeneousForm};
use crate::group::{close_group, projectivize, MatrixGroup};
use crate::matrix::{det_gauss, LinearSubstitution};
use crate::perm::Perm;
use crate::projective::ProjectivePoint;
use crate::tolerance::ToleranceConfig;

use super::conics::{gerbaldi_conics, ConicSystem};
use super::generators::{parse_generators, NamedGenerator};

/// `k_i ∘ S = j^{exponents[i]} · k_{perm(i)}` for one group element `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicAction {
    pub perm: Perm,
    pub exponents: [u8; 6],
}

#[derive(Clone, Debug)]
pub struct ValentinerContext {
    pub(crate) cfg: ToleranceConfig,
    pub(crate) group: MatrixGroup,
    pub(crate) generators: Vec<NamedGenerator>,
    pub(crate) conics: ConicSystem,
    /// Per element.
    pub(crate) conic_action: Vec<ConicAction>,
    pub(crate) perm_to_class: HashMap<Perm, usize>,
    pub(crate) triples: Vec<[usize; 3]>,
    pub(crate) jacobians: Vec<HomogeneousForm>,
    pub(crate) mixed: Vec<BigComplex>,
    /// `J_ijk / c_ijk` for the ascending triples.
    pub(crate) quotients: Vec<HomogeneousForm>,
    pub(crate) f: HomogeneousForm,
    pub(crate) h6: HomogeneousForm,
    pub(crate) phi: HomogeneousForm,
    pub(crate) seeds: [[u32; 3]; 3],
}

impl ValentinerContext {
    pub fn config(&self) -> &ToleranceConfig {
        &self.cfg
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn generators(&self) -> &[NamedGenerator] {
        &self.generators
    }

    pub fn conics(&self) -> &ConicSystem {
        &self.conics
    }

    pub fn conic_action(&self, element: usize) -> &ConicAction {
        &self.conic_action[element]
    }

    /// The ascending index triples `(i, j, k)`, `i < j < k < 6`.
    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn triple_index(&self, t: [usize; 3]) -> Option<usize> {
        self.triples.iter().position(|x| *x == t)
    }

    /// Jacobian determinants `J_ijk` of the conic triples.
    pub fn jacobians(&self) -> &[HomogeneousForm] {
        &self.jacobians
    }

    /// Mixed discriminants `c_ijk` of the conic triples.
    pub fn mixed_discriminants(&self) -> &[BigComplex] {
        &self.mixed
    }

    pub fn quotients(&self) -> &[HomogeneousForm] {
        &self.quotients
    }

    /// The sextic invariant.
    pub fn f(&self) -> &HomogeneousForm {
        &self.f
    }

    /// The degree-12 invariant.
    pub fn h6(&self) -> &HomogeneousForm {
        &self.h6
    }

    /// The degree-30 invariant.
    pub fn phi(&self) -> &HomogeneousForm {
        &self.phi
    }

    /// Monomial seeds whose averages produced `F`, `H6`, `Φ`.
    pub fn seeds(&self) -> [[u32; 3]; 3] {
        self.seeds
    }

    /// Even permutation of the six conic labels attached to a class.
    pub fn label_of_class(&self, class: usize) -> &Perm {
        &self.group.labels().expect("labels set at build")[class]
    }

    pub fn class_of_perm(&self, sigma: &Perm) -> Result<usize> {
        self.perm_to_class
            .get(sigma)
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("{sigma} is not an even permutation of 6 symbols")))
    }

    /// A matrix representing the class of `σ`.
    pub fn substitution_of_perm(&self, sigma: &Perm) -> Result<&LinearSubstitution> {
        Ok(self.group.representative(self.class_of_perm(sigma)?))
    }

    /// Labels of the two generator classes.
    pub fn generator_perms(&self) -> Result<Vec<Perm>> {
        self.generators
            .iter()
            .map(|g| {
                let c = self
                    .group
                    .find_class(&g.matrix.with_prec(self.cfg.prec()))
                    .ok_or_else(|| Error::verification("generator lies in the group", f64::INFINITY))?;
                Ok(self.label_of_class(c).clone())
            })
            .collect()
    }

    /// Largest relative change `|φ(S p) − φ(p)| / |φ(p)|` of `F, H6, Φ` over
    /// every group element and the given points.
    pub fn invariance_residual(&self, points: &[ProjectivePoint]) -> Result<f64> {
        let forms = [&self.f, &self.h6, &self.phi];
        let base: Vec<Vec<BigComplex>> = points
            .iter()
            .map(|p| forms.iter().map(|f| evaluate_form(f, p.coords())).collect())
            .collect::<Result<_>>()?;
        let worst = self
            .group
            .elements()
            .par_iter()
            .map(|s| -> Result<f64> {
                let mut w = 0f64;
                for (p, b) in points.iter().zip(&base) {
                    let q = s.apply(p.coords())?;
                    for (f, v) in forms.iter().zip(b) {
                        let r = evaluate_form(f, &q)?.dist_f64(v) / v.abs_f64().max(f64::MIN_POSITIVE);
                        w = w.max(r);
                    }
                }
                Ok(w)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(worst.into_iter().fold(0.0, f64::max))
    }
}

/// The 20 ascending triples of `0..6`.
pub fn ascending_triples() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(20);
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Coefficient of `λμν` in `det(λA + μB + νC)`.
pub fn mixed_discriminant(a: &LinearSubstitution, b: &LinearSubstitution, c: &LinearSubstitution) -> BigComplex {
    let ms = [a, b, c];
    let prec = a.prec();
    let mut acc = BigComplex::zero(prec);
    for tau in Perm::all(3) {
        // column k taken from matrix tau(k)
        let mut e = Vec::with_capacity(9);
        for r in 0..3 {
            for k in 0..3 {
                e.push(ms[tau.apply(k)].get(r, k).clone());
            }
        }
        acc += det_gauss(3, e);
    }
    acc
}

fn conic_action_of(s: &LinearSubstitution, conics: &ConicSystem, tol: f64) -> Result<ConicAction> {
    let prec = s.prec();
    let st = s.transpose();
    let j = BigComplex::root_of_unity(prec, 1, 3);
    let units = [BigComplex::one(prec), j.clone(), j.square()];
    let mut images = [usize::MAX; 6];
    let mut exponents = [0u8; 6];
    for (i, m) in conics.matrices.iter().enumerate() {
        let img = st.mul(m)?.mul(s)?;
        let scale = img.max_entry_abs().max(1.0);
        let mut found = None;
        'search: for (b, mb) in conics.matrices.iter().enumerate() {
            for (e, u) in units.iter().enumerate() {
                if img.max_entry_diff(&mb.scale(u)) <= tol * scale {
                    found = Some((b, e as u8));
                    break 'search;
                }
            }
        }
        let (b, e) = found.ok_or_else(|| Error::verification("element permutes the conics up to cube roots of unity", scale))?;
        if images.contains(&b) {
            return Err(Error::verification("conic action is a permutation", 0.0));
        }
        images[i] = b;
        exponents[i] = e;
    }
    Ok(ConicAction {
        perm: Perm::from_images(images.to_vec()),
        exponents,
    })
}

/// `x^e ∘ S = Π_r (row_r(S) · x)^{e_r}`.
fn monomial_image(s: &LinearSubstitution, e: [u32; 3]) -> Result<HomogeneousForm> {
    let mut acc: Option<HomogeneousForm> = None;
    for (r, &er) in e.iter().enumerate() {
        if er == 0 {
            continue;
        }
        let p = HomogeneousForm::linear_power(s.row(r), er)?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.try_mul(&p)?,
        });
    }
    Ok(acc.expect("positive degree"))
}

/// Group average of the monomial `x^e` over class representatives, with the
/// average size of the individual images.
fn reynolds(reps: &[&LinearSubstitution], e: [u32; 3]) -> Result<(HomogeneousForm, f64)> {
    let images: Vec<HomogeneousForm> = reps.par_iter().map(|s| monomial_image(s, e)).collect::<Result<_>>()?;
    let scale = images.iter().map(HomogeneousForm::max_abs).sum::<f64>() / images.len() as f64;
    let mut acc = images[0].clone();
    for im in &images[1..] {
        acc = acc.try_add(im)?;
    }
    Ok((acc.scale(&BigComplex::from_ratio(acc.prec(), 1, reps.len() as i64)), scale))
}

fn inner(a: &HomogeneousForm, b: &HomogeneousForm) -> BigComplex {
    let mut acc = BigComplex::zero(a.prec());
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        acc.add_mul(x, &y.conj());
    }
    acc
}

/// Removes the components along `basis` under the monomial inner product.
fn orthogonal_part(mut f: HomogeneousForm, basis: &[HomogeneousForm]) -> Result<HomogeneousForm> {
    let mut ortho: Vec<HomogeneousForm> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for o in &ortho {
            let c = &inner(&v, o) / &inner(o, o);
            v = v.try_sub(&o.scale(&c))?;
        }
        ortho.push(v);
    }
    for o in &ortho {
        let c = &inner(&f, o) / &inner(o, o);
        f = f.try_sub(&o.scale(&c))?;
    }
    Ok(f)
}

/// Scales `f` so its first coefficient of significant size, in stored
/// monomial order, equals 1.
fn normalize_leading(f: &HomogeneousForm) -> HomogeneousForm {
    let m = f.max_abs();
    let lead = f
        .coeffs()
        .iter()
        .find(|c| c.abs_f64() > 1e-20 * m)
        .expect("nonzero form")
        .recip();
    f.scale(&lead)
}

/// First monomial seed, in stored order, whose average has a nonzero
/// component orthogonal to `basis`.
fn invariant_of_degree(
    reps: &[&LinearSubstitution],
    degree: u32,
    basis: &[HomogeneousForm],
    tol: f64,
) -> Result<(HomogeneousForm, [u32; 3])> {
    for e in monomials(3, degree) {
        let (avg, scale) = reynolds(reps, e)?;
        if avg.max_abs() <= tol.sqrt() * scale {
            continue;
        }
        let rest = orthogonal_part(avg, basis)?;
        if rest.max_abs() <= tol.sqrt() * scale {
            continue;
        }
        return Ok((normalize_leading(&rest), e));
    }
    Err(Error::degenerate("reynolds", format!("every degree-{degree} seed averages into the known span")))
}

/// Closes the shipped generators and builds conics, labels and invariants,
/// verifying each.
pub fn build_valentiner_context(cfg: &ToleranceConfig) -> Result<ValentinerContext> {
    build_valentiner_context_from(super::generators::GENERATOR_DATA, cfg)
}

/// As [`build_valentiner_context`], from generator data in the shipped text format.
pub fn build_valentiner_context_from(generator_data: &str, cfg: &ToleranceConfig) -> Result<ValentinerContext> {
    let prec = cfg.prec();
    let tol = cfg.eq_tolerance;
    let generators = parse_generators(generator_data, prec)?;
    let mats: Vec<LinearSubstitution> = generators.iter().map(|g| g.matrix.clone()).collect();
    let group = close_group(&mats, 1080, cfg)?;
    if group.order() != 1080 {
        return Err(Error::verification(format!("ternary group order {} != 1080", group.order()), 0.0));
    }
    build_from_group(group, generators, cfg, tol)
}

/// Builds the context around an already closed group, re-verifying it.
pub fn build_from_group(
    mut group: MatrixGroup,
    generators: Vec<NamedGenerator>,
    cfg: &ToleranceConfig,
    tol: f64,
) -> Result<ValentinerContext> {
    let prec = cfg.prec();
    if group.order() != 1080 || group.dim() != 3 {
        return Err(Error::verification(format!("ternary group order {} != 1080", group.order()), 0.0));
    }
    let drift = group.max_determinant_drift();
    if drift > tol {
        return Err(Error::verification("determinants equal 1", drift));
    }
    let (quotient, kernel) = projectivize(&group)?;
    if quotient != 360 || kernel.len() != 3 {
        return Err(Error::verification(format!("projective order {quotient} != 360"), 0.0));
    }

    let conics = gerbaldi_conics(prec)?;
    for m in &conics.matrices {
        let d = m.determinant().dist_f64(&BigComplex::one(prec));
        if d > tol {
            return Err(Error::verification("conic determinant equals 1", d));
        }
    }
    let conic_action: Vec<ConicAction> = group
        .elements()
        .par_iter()
        .map(|s| conic_action_of(s, &conics, tol))
        .collect::<Result<_>>()?;

    // σ = π⁻¹ turns the anti-homomorphism S ↦ π_S into a homomorphism
    let mut labels = Vec::with_capacity(quotient);
    let mut perm_to_class = HashMap::new();
    for (c, class) in group.classes().iter().enumerate() {
        let pi = &conic_action[class[0]].perm;
        if class.iter().any(|&e| conic_action[e].perm != *pi) {
            return Err(Error::verification("scalar multiples permute the conics alike", 0.0));
        }
        let sigma = pi.inverse();
        if !sigma.is_even() {
            return Err(Error::verification(format!("conic permutation {sigma} is even"), 0.0));
        }
        if perm_to_class.insert(sigma.clone(), c).is_some() {
            return Err(Error::verification("conic action is faithful on classes", 0.0));
        }
        labels.push(sigma);
    }
    group.set_labels(labels)?;

    let triples = ascending_triples();
    let mut jacobians = Vec::with_capacity(20);
    let mut mixed = Vec::with_capacity(20);
    let mut quotients = Vec::with_capacity(20);
    for t in &triples {
        let [i, j, k] = *t;
        let jac = jacobian_det(&conics.forms[i], &conics.forms[j], &conics.forms[k])?;
        let c = mixed_discriminant(&conics.matrices[i], &conics.matrices[j], &conics.matrices[k]);
        if c.abs_f64() <= tol {
            return Err(Error::degenerate("triple invariants", format!("mixed discriminant of {t:?} vanishes")));
        }
        quotients.push(jac.scale(&c.recip()));
        jacobians.push(jac);
        mixed.push(c);
    }

    let reps = group.representatives();
    let (f, seed_f) = invariant_of_degree(&reps, 6, &[], tol)?;
    let (h6, seed_h) = invariant_of_degree(&reps, 12, &[f.pow(2)], tol)?;
    let f3 = f.pow(3);
    let (phi, seed_phi) = invariant_of_degree(
        &reps,
        30,
        &[f.pow(5), f3.try_mul(&h6)?, f.try_mul(&h6.pow(2))?],
        tol,
    )?;
    for g in &generators {
        let m = g.matrix.with_prec(prec);
        for form in [&f, &h6, &phi] {
            let r = act_on_form(&m, form)?.rel_diff(form)?;
            if r > tol {
                return Err(Error::verification("invariant fixed by generators", r));
            }
        }
    }

    Ok(ValentinerContext {
        cfg: cfg.clone(),
        group,
        generators,
        conics,
        conic_action,
        perm_to_class,
        triples,
        jacobians,
        mixed,
        quotients,
        f,
        h6,
        phi,
        seeds: [seed_f, seed_h, seed_phi],
    })
}
