use std::collections::{BTreeMap, HashMap};

use crate::complex::{consts, BigComplex};
use crate::error::{Error, Result};
use crate::form::{act_on_form, binary_jacobian, evaluate_form, hessian, HomogeneousForm};
use crate::group::{close_group, projectivize, MatrixGroup};
use crate::matrix::LinearSubstitution;
use crate::perm::Perm;
use crate::projective::ProjectivePoint;
use crate::tolerance::ToleranceConfig;

/// Symbols permuted by the icosahedral group: index 0 is `∞`, index
/// `1 + ν` is `ν` for `ν = 0..4`.
pub const LABELS: [&str; 6] = ["inf", "0", "1", "2", "3", "4"];

/// Integer polynomial in five variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly5(BTreeMap<[u8; 5], i64>);

impl IntPoly5 {
    fn add_term(&mut self, e: [u8; 5], c: i64) {
        let v = self.0.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&e);
        }
    }

    /// `Σ z_i² z_{i+1} − Σ z_i² z_{i−1}`, indices mod 5.
    fn cyclic_cubic() -> Self {
        let mut p = IntPoly5(BTreeMap::new());
        for i in 0..5 {
            let mut e = [0u8; 5];
            e[i] += 2;
            e[(i + 1) % 5] += 1;
            p.add_term(e, 1);
            let mut e = [0u8; 5];
            e[i] += 2;
            e[(i + 4) % 5] += 1;
            p.add_term(e, -1);
        }
        p
    }

    /// `z ↦ p(σ·z)` with `(σ·z)_i = z_{σ⁻¹(i)}`.
    fn act(&self, sigma: &Perm) -> Self {
        let inv = sigma.inverse();
        let mut out = IntPoly5(BTreeMap::new());
        for (e, &c) in &self.0 {
            let mut ne = [0u8; 5];
            for i in 0..5 {
                ne[inv.apply(i)] += e[i];
            }
            out.add_term(ne, c);
        }
        out
    }

    fn neg(&self) -> Self {
        IntPoly5(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }

    fn scaled(&self, s: i8) -> Self {
        if s < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub(crate) fn eval(&self, z: &[BigComplex]) -> BigComplex {
        let prec = z[0].prec();
        let mut acc = BigComplex::zero(prec);
        for (e, &c) in &self.0 {
            let mut m = BigComplex::from_i64(prec, c);
            for i in 0..5 {
                if e[i] > 0 {
                    m = &m * &z[i].pow_u(e[i] as u32);
                }
            }
            acc += m;
        }
        acc
    }
}

/// `q_a ∘ S = sign · q_{target}` for every label `a`.
pub(crate) type SignedPerm = [(usize, i8); 6];

#[derive(Clone, Debug)]
pub struct IcosaContext {
    pub(crate) cfg: ToleranceConfig,
    pub(crate) group: MatrixGroup,
    pub(crate) s: LinearSubstitution,
    pub(crate) t: LinearSubstitution,
    pub(crate) f: HomogeneousForm,
    pub(crate) h: HomogeneousForm,
    pub(crate) t_form: HomogeneousForm,
    pub(crate) quadratics: Vec<HomogeneousForm>,
    /// Per projective class.
    pub(crate) signed_action: Vec<SignedPerm>,
    pub(crate) class_mul: Vec<Vec<usize>>,
    pub(crate) perm_to_class: HashMap<Perm, usize>,
    pub(crate) generator_perms: [Perm; 2],
    /// `u_a` as signed polynomials in the roots.
    pub(crate) u_polys: Vec<IntPoly5>,
    pub(crate) sign_pattern: [i8; 6],
    /// Least even permutation (lexicographically) sending `∞` to each label.
    pub(crate) coset_reps: Vec<Perm>,
    pub(crate) syzygy_residual: f64,
}

impl IcosaContext {
    pub fn config(&self) -> &ToleranceConfig {
        &self.cfg
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    /// The generators `S = diag(ε³, ε²)` and `T`.
    pub fn generators(&self) -> (&LinearSubstitution, &LinearSubstitution) {
        (&self.s, &self.t)
    }

    pub fn f(&self) -> &HomogeneousForm {
        &self.f
    }

    pub fn h(&self) -> &HomogeneousForm {
        &self.h
    }

    pub fn t(&self) -> &HomogeneousForm {
        &self.t_form
    }

    /// The six quadratics `q_∞, q_0, ..., q_4`, permuted up to sign by the group.
    pub fn quadratics(&self) -> &[HomogeneousForm] {
        &self.quadratics
    }

    /// Coefficientwise `max |T² + H³ − 1728 f⁵|` measured at build time.
    pub fn syzygy_residual(&self) -> f64 {
        self.syzygy_residual
    }

    /// The two even permutations `(1 2 3 4 5)` and its paired involution
    /// that correspond to `S` and `T`.
    pub fn generator_perms(&self) -> &[Perm; 2] {
        &self.generator_perms
    }

    pub fn sign_pattern(&self) -> [i8; 6] {
        self.sign_pattern
    }

    /// Projective class assigned to an even permutation of the roots.
    pub fn class_of_perm(&self, sigma: &Perm) -> Result<usize> {
        self.perm_to_class
            .get(sigma)
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("{sigma} is not an even permutation of 5 symbols")))
    }

    /// A matrix representing the class of `σ`.
    pub fn substitution_of_perm(&self, sigma: &Perm) -> Result<&LinearSubstitution> {
        Ok(self.group.representative(self.class_of_perm(sigma)?))
    }

    /// `(target label, sign)` of `q_label ∘ S` for the class of `σ`.
    pub fn signed_label_action(&self, sigma: &Perm, label: usize) -> Result<(usize, i8)> {
        Ok(self.signed_action[self.class_of_perm(sigma)?][label])
    }

    pub fn class_product(&self, a: usize, b: usize) -> usize {
        self.class_mul[a][b]
    }

    pub fn coset_reps(&self) -> &[Perm] {
        &self.coset_reps
    }
}

/// The two binary generators `S` (order 5) and `T` (order 2 projectively).
pub fn icosahedral_generators(prec: u32) -> Result<(LinearSubstitution, LinearSubstitution)> {
    let e = consts::epsilon(prec);
    let e2 = e.pow_u(2);
    let e3 = e.pow_u(3);
    let e4 = e.pow_u(4);
    let zero = BigComplex::zero(prec);
    let s = LinearSubstitution::new(2, vec![e3.clone(), zero.clone(), zero, e2.clone()])?;
    let inv_r5 = consts::sqrt5(prec).recip();
    let a = &e - &e4;
    let b = &e2 - &e3;
    let t = LinearSubstitution::new(2, vec![-(&a * &inv_r5), &b * &inv_r5, &b * &inv_r5, &a * &inv_r5])?;
    Ok((s, t))
}

fn forms(prec: u32) -> Result<(HomogeneousForm, HomogeneousForm, HomogeneousForm)> {
    let f = HomogeneousForm::from_int_terms(2, 12, prec, &[(&[11, 1], 1), (&[6, 6], 11), (&[1, 11], -1)])?;
    let h = hessian(&f)?.scale(&BigComplex::from_ratio(prec, 1, 121));
    let t = binary_jacobian(&f, &h)?.scale(&BigComplex::from_ratio(prec, 1, 20));
    Ok((f, h, t))
}

fn quadratics(prec: u32) -> Result<Vec<HomogeneousForm>> {
    let mut out = vec![HomogeneousForm::from_coeffs(
        2,
        2,
        vec![BigComplex::zero(prec), consts::sqrt5(prec), BigComplex::zero(prec)],
    )?];
    for nu in 0..5 {
        out.push(HomogeneousForm::from_coeffs(
            2,
            2,
            vec![
                BigComplex::root_of_unity(prec, nu, 5),
                BigComplex::one(prec),
                -BigComplex::root_of_unity(prec, 4 * nu, 5),
            ],
        )?);
    }
    Ok(out)
}

fn signed_perm(m: &LinearSubstitution, qs: &[HomogeneousForm], tol: f64) -> Result<SignedPerm> {
    let mut out = [(0usize, 0i8); 6];
    let mut used = [false; 6];
    for (a, q) in qs.iter().enumerate() {
        let img = act_on_form(m, q)?;
        let scale = img.max_abs();
        let mut found = None;
        for (b, qb) in qs.iter().enumerate() {
            for s in [1i8, -1] {
                let target = qb.scale_i64(s as i64);
                if img.max_diff(&target)? <= tol * scale.max(1.0) {
                    found = Some((b, s));
                }
            }
        }
        let (b, s) = found.ok_or_else(|| Error::verification("quadratics permuted up to sign", scale))?;
        if used[b] {
            return Err(Error::verification("signed action is a permutation", 0.0));
        }
        used[b] = true;
        out[a] = (b, s);
    }
    Ok(out)
}

/// Builds the group, forms and correspondence, verifying each.
pub fn build_icosahedral_context(cfg: &ToleranceConfig) -> Result<IcosaContext> {
    let (s, t) = icosahedral_generators(cfg.prec())?;
    let group = close_group(&[s, t], 120, cfg)?;
    build_icosahedral_context_from_group(group, cfg)
}

/// Builds the context around an already closed group, re-verifying it.
pub fn build_icosahedral_context_from_group(mut group: MatrixGroup, cfg: &ToleranceConfig) -> Result<IcosaContext> {
    let prec = cfg.prec();
    let tol = cfg.eq_tolerance;
    let (s, t) = icosahedral_generators(prec)?;
    if group.dim() != 2 || group.order() != 120 {
        return Err(Error::verification(format!("binary group order {} != 120", group.order()), 0.0));
    }
    let drift = group.max_determinant_drift();
    if drift > tol {
        return Err(Error::verification("determinants equal 1", drift));
    }
    let (quotient, kernel) = projectivize(&group)?;
    if quotient != 60 || kernel.len() != 2 {
        return Err(Error::verification(format!("projective order {quotient} != 60"), 0.0));
    }

    let (f, h, t_form) = forms(prec)?;
    let syz = (&t_form * &t_form)
        .try_add(&h.pow(3))?
        .try_sub(&f.pow(5).scale_i64(1728))?;
    let syzygy_residual = syz.max_abs();
    if syzygy_residual > tol {
        return Err(Error::verification("T^2 + H^3 - 1728 f^5 = 0", syzygy_residual));
    }
    for g in [&s, &t] {
        for form in [&f, &h, &t_form] {
            let r = act_on_form(g, form)?.rel_diff(form)?;
            if r > tol {
                return Err(Error::verification("form invariant under generators", r));
            }
        }
    }

    let qs = quadratics(prec)?;
    let signed_action: Vec<SignedPerm> = (0..group.class_count())
        .map(|c| signed_perm(group.representative(c), &qs, tol))
        .collect::<Result<_>>()?;

    let n = group.class_count();
    let mut class_mul = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let p = group.representative(a).mul(group.representative(b))?;
            class_mul[a][b] = group
                .find_class(&p)
                .ok_or_else(|| Error::verification("class product lies in the group", f64::INFINITY))?;
        }
    }
    let class_s = group.find_class(&s).expect("generator in group");
    let class_t = group.find_class(&t).expect("generator in group");

    let (phi, b_perm, u_polys, sign_pattern) = correspondence(class_s, class_t, &class_mul, &signed_action)?;
    let mut labels = vec![Perm::identity(5); n];
    for (p, &c) in &phi {
        labels[c] = p.clone();
    }
    group.set_labels(labels)?;

    let evens = Perm::all_even(5);
    let coset_reps: Vec<Perm> = (0..6)
        .map(|a| {
            evens
                .iter()
                .find(|p| signed_action[phi[*p]][0].0 == a)
                .cloned()
                .expect("transitive on labels")
        })
        .collect();

    Ok(IcosaContext {
        cfg: cfg.clone(),
        group,
        s,
        t,
        f,
        h,
        t_form,
        quadratics: qs,
        signed_action,
        class_mul,
        perm_to_class: phi,
        generator_perms: [Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]), b_perm],
        u_polys,
        sign_pattern,
        coset_reps,
        syzygy_residual,
    })
}

type Correspondence = (HashMap<Perm, usize>, Perm, Vec<IntPoly5>, [i8; 6]);

/// Pins the isomorphism `A5 → PSL(2, 5)-classes` and the signed `u`
/// polynomials at once: `(1 2 3 4 5) ↦ S`, and `T` is paired with the first
/// involution (lexicographic) for which the generator map extends to an
/// isomorphism admitting a consistent sign pattern.
fn correspondence(
    class_s: usize,
    class_t: usize,
    class_mul: &[Vec<usize>],
    signed_action: &[SignedPerm],
) -> Result<Correspondence> {
    let a = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]);
    let evens = Perm::all_even(5);
    let w = IntPoly5::cyclic_cubic();
    for b in evens.iter().filter(|p| !p.is_identity() && p.order() == 2) {
        let Some(phi) = extend_isomorphism(&a, class_s, b, class_t, class_mul) else {
            continue;
        };
        // orbit of w under A5, up to sign, in order of first appearance
        let mut orbit: Vec<IntPoly5> = Vec::new();
        for p in &evens {
            let g = w.act(p);
            if !orbit.iter().any(|o| *o == g || *o == g.neg()) {
                orbit.push(g);
            }
        }
        if orbit.len() != 6 {
            return Err(Error::verification("metacyclic orbit has six members", orbit.len() as f64));
        }
        // match each label to the orbit member sharing its stabilizer
        let mut label_map = [usize::MAX; 6];
        for (lab, slot) in label_map.iter_mut().enumerate() {
            let stab: Vec<&Perm> = evens.iter().filter(|p| signed_action[phi[*p]][lab].0 == lab).collect();
            *slot = orbit
                .iter()
                .position(|o| {
                    stab.iter().all(|p| {
                        let g = o.act(p);
                        g == *o || g == o.neg()
                    })
                })
                .ok_or_else(|| Error::verification("label stabilizer fixes an orbit member", 0.0))?;
        }
        for mask in 0u32..32 {
            let mut signs = [1i8; 6];
            for k in 0..5 {
                if mask >> k & 1 == 1 {
                    signs[k + 1] = -1;
                }
            }
            let u: Vec<IntPoly5> = (0..6).map(|l| orbit[label_map[l]].scaled(signs[l])).collect();
            let consistent = [(&a, class_s), (b, class_t)].iter().all(|(g, c)| {
                (0..6).all(|lab| {
                    let (tgt, sg) = signed_action[*c][lab];
                    u[lab].act(g) == u[tgt].scaled(sg)
                })
            });
            if consistent {
                return Ok((phi, b.clone(), u, signs));
            }
        }
    }
    Err(Error::verification("no consistent correspondence and sign pattern", 0.0))
}

/// Breadth-first extension of `a ↦ ca, b ↦ cb` to all of A5; `None` when it
/// is not a well-defined bijection onto the 60 classes.
fn extend_isomorphism(
    a: &Perm,
    ca: usize,
    b: &Perm,
    cb: usize,
    class_mul: &[Vec<usize>],
) -> Option<HashMap<Perm, usize>> {
    let id = Perm::identity(5);
    let identity_class = (0..class_mul.len()).find(|&c| class_mul[c][c] == c)?;
    let mut phi = HashMap::new();
    phi.insert(id.clone(), identity_class);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for (x, cx) in [(a, ca), (b, cb)] {
                let h = x.compose(g);
                let ch = class_mul[cx][phi[g]];
                match phi.get(&h) {
                    Some(&c) if c != ch => return None,
                    Some(_) => {}
                    None => {
                        phi.insert(h.clone(), ch);
                        next.push(h);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut image: Vec<usize> = phi.values().copied().collect();
    image.sort_unstable();
    image.dedup();
    (phi.len() == 60 && image.len() == 60).then_some(phi)
}

/// `X = H³ / (1728 f⁵)` at a point of the line.
pub fn icosa_parameter(ctx: &IcosaContext, point: &ProjectivePoint) -> Result<BigComplex> {
    if point.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: point.dim(),
        });
    }
    let p = point.normalized();
    let fv = evaluate_form(&ctx.f, p.coords())?;
    let hv = evaluate_form(&ctx.h, p.coords())?;
    if fv.abs_f64() <= ctx.cfg.eq_tolerance {
        return Err(Error::InfiniteParameter);
    }
    let num = hv.pow_u(3);
    let den = fv.pow_u(5).scale_i64(1728);
    Ok(&num / &den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients_pin_normalization() {
        let (_, h, t) = forms(256).unwrap();
        assert!(h.coeff(&[20, 0]).unwrap().dist_f64(&BigComplex::from_i64(256, -1)) < 1e-60);
        assert!(t.coeff(&[30, 0]).unwrap().dist_f64(&BigComplex::from_i64(256, 1)) < 1e-60);
    }

    #[test]
    fn cyclic_cubic_is_cyclic_and_reversal_odd() {
        let w = IntPoly5::cyclic_cubic();
        let c = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]);
        assert_eq!(w.act(&c), w);
        let rev = Perm::from_images(vec![4, 3, 2, 1, 0]);
        assert_eq!(w.act(&rev), w.neg());
    }
}
