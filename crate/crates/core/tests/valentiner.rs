use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resolvent::projective::hausdorff;
use resolvent::valentiner::*;
use resolvent::{
    act_on_form, evaluate_form, projectivize, BigComplex, Error, HomogeneousForm, LinearSubstitution, Perm,
    ProjectivePoint, SexticInstance, ToleranceConfig,
};

const P: u32 = 256;

fn ctx() -> &'static ValentinerContext {
    static CTX: OnceLock<ValentinerContext> = OnceLock::new();
    CTX.get_or_init(|| build_valentiner_context(&ToleranceConfig::default()).unwrap())
}

fn c(re: f64, im: f64) -> BigComplex {
    BigComplex::from_f64(P, re, im)
}

fn random_sextic(rng: &mut ChaCha8Rng) -> SexticInstance {
    let roots = (0..6).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
    SexticInstance::from_roots(roots, ctx().config()).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> ProjectivePoint {
    ProjectivePoint::new((0..3).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).unwrap()
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> LinearSubstitution {
    let e = (0..9).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    LinearSubstitution::new(3, e).unwrap().normalized_unimodular().unwrap()
}

/// `(index, sign)` with `form = sign · candidates[index]`.
fn signed_match(form: &HomogeneousForm, candidates: &[HomogeneousForm]) -> (usize, i8) {
    let scale = form.max_abs();
    for (k, q) in candidates.iter().enumerate() {
        for s in [1i8, -1] {
            if form.max_diff(&q.scale_i64(s as i64)).unwrap() < 1e-60 * scale {
                return (k, s);
            }
        }
    }
    panic!("no signed match");
}

fn signed_value_match(v: &BigComplex, candidates: &[BigComplex]) -> (usize, i8) {
    for (k, q) in candidates.iter().enumerate() {
        for s in [1i8, -1] {
            if v.dist_f64(&q.scale_i64(s as i64)) < 1e-60 * v.abs_f64().max(1.0) {
                return (k, s);
            }
        }
    }
    panic!("no signed match");
}

fn fermat() -> CubicCovariant {
    let f = HomogeneousForm::from_int_terms(3, 3, P, &[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)]).unwrap();
    CubicCovariant::from_form(&f).unwrap()
}

#[test]
fn group_orders_and_scalar_kernel() {
    let g = ctx().group();
    assert_eq!(g.order(), 1080);
    let (q, kernel) = projectivize(g).unwrap();
    assert_eq!(q, 360);
    assert_eq!(kernel.len(), 3);
    for k in &kernel {
        let s = k.as_scalar(1e-60).unwrap();
        assert!(s.pow_u(3).dist_f64(&BigComplex::one(P)) < 1e-60);
    }
    assert!(g.max_determinant_drift() < 1e-70);
}

#[test]
fn conics_are_unimodular_and_permuted_by_every_element() {
    let cx = ctx();
    let conics = cx.conics();
    for m in &conics.matrices {
        assert!(m.determinant().dist_f64(&BigComplex::one(P)) < 2f64.powi(-100));
    }
    let j = BigComplex::root_of_unity(P, 1, 3);
    let mut passed = 0;
    for (e, s) in cx.group().elements().iter().enumerate() {
        let act = cx.conic_action(e);
        let ok = conics.forms.iter().enumerate().all(|(i, k)| {
            let img = act_on_form(s, k).unwrap();
            let want = conics.forms[act.perm.apply(i)].scale(&j.pow_u(act.exponents[i] as u32));
            img.max_diff(&want).unwrap() < 1e-60
        });
        passed += ok as usize;
    }
    assert_eq!(passed, 1080);
}

#[test]
fn labels_form_a_faithful_even_homomorphism() {
    let cx = ctx();
    let g = cx.group();
    let labels = g.labels().unwrap();
    let mut distinct: Vec<&Perm> = labels.iter().collect();
    distinct.sort_by_key(|p| p.images().to_vec());
    distinct.dedup();
    assert_eq!(distinct.len(), 360);
    assert!(labels.iter().all(Perm::is_even));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let a = rng.gen_range(0..1080);
        let b = rng.gen_range(0..1080);
        let ab = g.product_index(a, b).unwrap();
        let la = &labels[g.class_of(a)];
        let lb = &labels[g.class_of(b)];
        assert_eq!(labels[g.class_of(ab)], la.compose(lb));
    }
}

#[test]
fn triple_invariants_are_alternating_with_nonzero_mixed_discriminant() {
    let cx = ctx();
    for &[i, j, k] in cx.triples() {
        let (jac, mixed) = triple_invariants(cx, i, j, k).unwrap();
        let (jac_sw, mixed_sw) = triple_invariants(cx, j, i, k).unwrap();
        assert!(jac.try_add(&jac_sw).unwrap().max_abs() < 1e-60 * jac.max_abs());
        assert!(mixed.dist_f64(&mixed_sw) < 1e-60);
        assert!(mixed.abs_f64() > 1e-3);
    }
    assert!(triple_invariants(cx, 0, 0, 1).is_err());
}

#[test]
fn quotient_signs_follow_difference_products() {
    let cx = ctx();
    let g = cx.group();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inst = random_sextic(&mut rng);
    let z = inst.roots();
    let d: Vec<BigComplex> = cx.triples().iter().map(|&[i, j, k]| difference_product3(&z[i], &z[j], &z[k])).collect();
    let mut elements: Vec<usize> = cx
        .generators()
        .iter()
        .map(|gen| g.find_element(&gen.matrix.with_prec(P)).unwrap().unwrap())
        .collect();
    elements.extend((0..10).map(|_| rng.gen_range(0..1080)));
    for e in elements {
        let s = g.element(e);
        let sigma = cx.label_of_class(g.class_of(e));
        let zs = inst.permuted(sigma);
        let zs = zs.roots();
        for (t, &[i, j, k]) in cx.triples().iter().enumerate() {
            let q_img = act_on_form(s, &cx.quotients()[t]).unwrap();
            let (qt, qs) = signed_match(&q_img, cx.quotients());
            let (dt, ds) = signed_value_match(&difference_product3(&zs[i], &zs[j], &zs[k]), &d);
            assert_eq!((qt, qs), (dt, ds));
            let (pt, ps) = triple_image(&sigma.inverse(), [i, j, k]);
            assert_eq!((cx.triple_index(pt).unwrap(), ps), (qt, qs));
        }
    }
}

#[test]
fn omega_is_invariant_under_simultaneous_action() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gens = cx.generator_perms().unwrap();
    for _ in 0..3 {
        let inst = random_sextic(&mut rng);
        let omega = omega_cubic(&inst, cx).unwrap().form();
        for sigma in gens.iter().cloned().chain((0..2).map(|_| Perm::random_even(6, &mut rng))) {
            let s = cx.substitution_of_perm(&sigma).unwrap();
            let moved = omega_cubic(&inst.permuted(&sigma), cx).unwrap().form();
            let back = act_on_form(s, &moved).unwrap();
            assert!(back.rel_diff(&omega).unwrap() < 1e-60, "{sigma}");
        }
    }
}

#[test]
fn omega_matches_defining_sum_pointwise() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let inst = random_sextic(&mut rng);
    let omega = omega_cubic(&inst, cx).unwrap();
    let z = inst.roots();
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let mut want = BigComplex::zero(P);
        for &[i, j, k] in cx.triples() {
            let (jac, mixed) = triple_invariants(cx, i, j, k).unwrap();
            let term = &evaluate_form(&jac, p.coords()).unwrap() / &mixed;
            want += &term * &difference_product3(&z[i], &z[j], &z[k]);
        }
        assert!(omega.evaluate(p.coords()).unwrap().dist_f64(&want) < 1e-60 * want.abs_f64().max(1.0));
    }
}

#[test]
fn odd_permutation_negates_omega_under_the_conic_relabeling() {
    // a transposition of two roots flips every difference product containing
    // both, so Ω(τz) is Ω(z) with the matching quotients sign-flipped
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let inst = random_sextic(&mut rng);
    let tau = Perm::from_cycles(6, &[&[1, 2]]);
    let swapped = omega_cubic(&inst.permuted(&tau), cx).unwrap();
    let z = inst.roots();
    let mut want = vec![BigComplex::zero(P); 10];
    for (t, &[i, j, k]) in cx.triples().iter().enumerate() {
        let (img, sign) = triple_image(&tau, [i, j, k]);
        let d = difference_product3(&z[img[0]], &z[img[1]], &z[img[2]]).scale_i64(sign as i64);
        for (w, q) in want.iter_mut().zip(cx.quotients()[t].coeffs()) {
            w.add_mul(&d, q);
        }
    }
    for (a, b) in swapped.phi.iter().zip(&want) {
        assert!(a.dist_f64(b) < 1e-60);
    }
}

#[test]
fn generalized_omega_reduces_and_is_equivariant() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inst = random_sextic(&mut rng);
    let a = omega_cubic(&inst, cx).unwrap();
    let b = generalized_omega(&inst, cx, (0, 1, 2)).unwrap();
    for (x, y) in a.phi.iter().zip(&b.phi) {
        assert!(x.dist_f64(y) < 1e-60);
    }
    let g013 = generalized_omega(&inst, cx, (0, 1, 3)).unwrap().form();
    for _ in 0..3 {
        let sigma = Perm::random_even(6, &mut rng);
        let s = cx.substitution_of_perm(&sigma).unwrap();
        let moved = generalized_omega(&inst.permuted(&sigma), cx, (0, 1, 3)).unwrap().form();
        assert!(act_on_form(s, &moved).unwrap().rel_diff(&g013).unwrap() < 1e-60);
    }
    assert!(generalized_omega(&inst, cx, (1, 1, 2)).is_err());
}

#[test]
fn fermat_inflection_points() {
    let cfg = ToleranceConfig::default();
    let set = inflection_points(&fermat(), &cfg).unwrap();
    assert_eq!(set.points.len(), 9);
    assert!(set.max_residual < 1e-60);
    let o = BigComplex::one(P);
    let z = BigComplex::zero(P);
    for want in [
        vec![o.clone(), -o.clone(), z.clone()],
        vec![z.clone(), o.clone(), -o.clone()],
        vec![o.clone(), z.clone(), -o.clone()],
    ] {
        let w = ProjectivePoint::new(want).unwrap();
        assert!(set.points.iter().any(|p| p.distance(&w) < 1e-60));
    }
    // all nine lie on x1 x2 x3 = 0
    for p in &set.points {
        let n = p.normalized();
        let prod = &(&n.coords()[0] * &n.coords()[1]) * &n.coords()[2];
        assert!(prod.abs_f64() < 1e-60);
    }
}

#[test]
fn inflection_points_are_covariant() {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cubic = HomogeneousForm::from_coeffs(3, 3, (0..10).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).unwrap();
    let base = inflection_points(&CubicCovariant::from_form(&cubic).unwrap(), &cfg).unwrap();
    assert_eq!(base.points.len(), 9);
    for _ in 0..5 {
        let s = random_unimodular(&mut rng);
        let moved = inflection_points(&CubicCovariant::from_form(&act_on_form(&s, &cubic).unwrap()).unwrap(), &cfg).unwrap();
        let mapped: Vec<ProjectivePoint> = moved.points.iter().map(|p| p.transform(&s).unwrap()).collect();
        assert!(hausdorff(&mapped, &base.points) < 1e-40);
    }
}

#[test]
fn degenerate_cubics_are_rejected() {
    let cfg = ToleranceConfig::default();
    let cube = HomogeneousForm::from_int_terms(3, 3, P, &[(&[3, 0, 0], 1)]).unwrap();
    let triangle = HomogeneousForm::from_int_terms(3, 3, P, &[(&[1, 1, 1], 1)]).unwrap();
    // nodal cubic y² z = x³ + x² z
    let nodal = HomogeneousForm::from_int_terms(3, 3, P, &[(&[0, 2, 1], 1), (&[3, 0, 0], -1), (&[2, 0, 1], -1)]).unwrap();
    for f in [cube, triangle, nodal] {
        let r = inflection_points(&CubicCovariant::from_form(&f).unwrap(), &cfg);
        assert!(matches!(r, Err(Error::Degenerate { .. })), "{r:?}");
    }
    let zero = CubicCovariant::from_form(&HomogeneousForm::zero(3, 3, P)).unwrap();
    assert!(matches!(inflection_points(&zero, &cfg), Err(Error::Degenerate { .. })));
}

#[test]
fn invariants_have_the_right_degrees_and_are_invariant() {
    let cx = ctx();
    assert_eq!([cx.f().degree(), cx.h6().degree(), cx.phi().degree()], [6, 12, 30]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<ProjectivePoint> = (0..2).map(|_| random_point(&mut rng)).collect();
    assert!(cx.invariance_residual(&pts).unwrap() < 2f64.powi(-80));
    for g in cx.generators() {
        for f in [cx.f(), cx.h6(), cx.phi()] {
            assert!(act_on_form(&g.matrix.with_prec(P), f).unwrap().rel_diff(f).unwrap() < 1e-60);
        }
    }
}

#[test]
fn absolute_invariants_are_orbit_constant_and_scale_free() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = random_point(&mut rng);
    let (v, w) = absolute_invariants(cx, &p).unwrap();
    let mut spread = 0f64;
    for m in cx.group().representatives() {
        let (v2, w2) = absolute_invariants(cx, &p.transform(m).unwrap()).unwrap();
        spread = spread.max(v2.dist_f64(&v) / v.abs_f64()).max(w2.dist_f64(&w) / w.abs_f64());
    }
    assert!(spread < 1e-20);
    let j = BigComplex::root_of_unity(P, 1, 3);
    let jp = ProjectivePoint::new(p.coords().iter().map(|x| x * &j).collect()).unwrap();
    let (vj, wj) = absolute_invariants(cx, &jp).unwrap();
    assert!(vj.dist_f64(&v) < 1e-60 * v.abs_f64() && wj.dist_f64(&w) < 1e-60 * w.abs_f64());
}

#[test]
fn points_of_the_invariant_sextic_are_reported_distinctly() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let demo = covariant_line_demo(cx, &random_point(&mut rng)).unwrap();
    assert!(matches!(absolute_invariants(cx, &demo.points[0]), Err(Error::OnInvariantCurve)));
}

#[test]
fn covariant_line_meets_the_sextic_in_six_points() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let demo = covariant_line_demo(cx, &random_point(&mut rng)).unwrap();
    assert_eq!(demo.degree(), 6);
    assert_eq!(demo.points.len(), 6);
    for p in &demo.points {
        let v = evaluate_form(cx.f(), p.normalized().coords()).unwrap();
        assert!(v.abs_f64() < 1e-60 * cx.f().max_abs());
    }
}

#[test]
fn ninth_degree_equation_is_invariant() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let inst = random_sextic(&mut rng);
    let nu = nu_ninth_degree(&inst, cx).unwrap();
    assert_eq!(nu.len(), 10);
    for _ in 0..4 {
        let sigma = Perm::random_even(6, &mut rng);
        let other = nu_ninth_degree(&inst.permuted(&sigma), cx).unwrap();
        for (a, b) in nu.iter().zip(&other) {
            assert!(a.dist_f64(b) < 1e-15 * a.abs_f64().max(1.0));
        }
    }
    let fw = normalproblem_forward(&inst, cx).unwrap();
    assert!(resolvent::poly::eval(&nu, &fw.v).abs_f64() < 1e-30 * nu.iter().map(BigComplex::abs_f64).fold(0.0, f64::max));
}

#[test]
fn ninth_degree_equation_of_the_fermat_cubic() {
    let cx = ctx();
    let nu = nu_ninth_degree_of_cubic(&fermat(), cx).unwrap();
    let set = inflection_points(&fermat(), cx.config()).unwrap();
    for p in &set.points {
        let (v, _) = absolute_invariants(cx, p).unwrap();
        let scale = nu.iter().map(BigComplex::abs_f64).fold(0.0, f64::max);
        assert!(resolvent::poly::eval(&nu, &v).abs_f64() < 1e-30 * scale);
    }
}

#[test]
fn forward_multiset_is_invariant_and_scale_free() {
    let cx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let inst = random_sextic(&mut rng);
    let fw = normalproblem_forward(&inst, cx).unwrap();
    assert_eq!(fw.values.len(), 9);
    assert!(fw.inflection_point.distance(&fw.inflection.points[0]) < 1e-70);
    let matches = |a: &[(BigComplex, BigComplex)], b: &[(BigComplex, BigComplex)]| {
        a.iter().all(|(v, w)| {
            b.iter().any(|(v2, w2)| v.dist_f64(v2) < 1e-30 * v.abs_f64().max(1.0) && w.dist_f64(w2) < 1e-30 * w.abs_f64().max(1.0))
        })
    };
    for _ in 0..3 {
        let sigma = Perm::random_even(6, &mut rng);
        let other = normalproblem_forward(&inst.permuted(&sigma), cx).unwrap();
        assert!(matches(&fw.values, &other.values) && matches(&other.values, &fw.values));
        assert!(matches(&[(other.v.clone(), other.w.clone())], &fw.values));
    }
    let lambda = c(0.7, -1.3);
    let scaled = SexticInstance::from_roots(inst.roots().iter().map(|z| z * &lambda).collect(), cx.config()).unwrap();
    let fs = normalproblem_forward(&scaled, cx).unwrap();
    assert!(fs.v.dist_f64(&fw.v) < 1e-30 * fw.v.abs_f64() && fs.w.dist_f64(&fw.w) < 1e-30 * fw.w.abs_f64());
}

#[test]
fn generator_data_is_reverified() {
    let bad = GENERATOR_DATA.replacen("1:0:2:0", "1:0:3:0", 1);
    assert!(build_valentiner_context_from(&bad, &ToleranceConfig::default()).is_err());
}
