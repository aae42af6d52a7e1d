use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resolvent::icosahedron::{
    jacobi_resolvent, klein_four_obstruction, reduce_quintic, solve_icosahedral, IcosaContext, ParamValue,
};
use resolvent::projective::hausdorff;
use resolvent::valentiner::{
    normalproblem_forward, nu_ninth_degree_of_cubic, omega_cubic, solve_normalproblem, ValentinerContext,
    ESCALATED_BITS,
};
use resolvent::{
    act_on_form, evaluate_form, poly, BigComplex, HomogeneousForm, Perm, ProjectivePoint, Result, RootInstance, ToleranceConfig,
};

use crate::cache::{self, CacheOutcome};
use crate::report::Report;
use crate::request::{Instance, Params, Pipeline, RunRequest};

/// Permutations in each even sweep.
pub const SWEEP: usize = 20;

/// Runs the requested pipeline. Errors end the run and are recorded in the
/// report against the stage that raised them.
pub fn run(req: &RunRequest, cache_dir: Option<&Path>) -> Report {
    let mut rep = Report::new();
    echo(req, &mut rep);
    let result = match req.pipeline {
        Pipeline::Quintic => quintic(req, cache_dir, &mut rep),
        Pipeline::Sextic => sextic(req, cache_dir, &mut rep),
        Pipeline::IcosaSolve => icosa_solve(req, cache_dir, &mut rep),
        Pipeline::NormalproblemSolve => normalproblem_solve(req, cache_dir, &mut rep),
        Pipeline::Verify => verify(req, cache_dir, &mut rep),
    };
    if let Err(e) = result {
        rep.fail(e);
    }
    rep.finish();
    rep
}

fn echo(req: &RunRequest, rep: &mut Report) {
    rep.put("pipeline", req.pipeline.name());
    rep.put("config.precision_bits", req.config.precision_bits);
    rep.put("config.tolerance", format!("{:e}", req.config.eq_tolerance));
    rep.put("config.seed", req.seed);
    match &req.instance {
        Some(Instance::Roots(r)) => rep.put_list("input.roots", r),
        Some(Instance::Coefficients(c)) => rep.put_list("input.coeffs", c),
        None => {}
    }
    match &req.params {
        Params::None => {}
        Params::Icosa(None) => rep.put("input.X", "inf"),
        Params::Icosa(Some(x)) => rep.put_complex("input.X", x),
        Params::Normal(v, w) => {
            rep.put_complex("input.v", v);
            rep.put_complex("input.w", w);
        }
    }
}

fn note_cache(name: &str, outcome: &CacheOutcome) {
    match outcome {
        CacheOutcome::Disabled => {}
        CacheOutcome::Hit => eprintln!("cache: {name} group loaded and re-verified"),
        CacheOutcome::Rebuilt(None) => eprintln!("cache: {name} group built and stored"),
        CacheOutcome::Rebuilt(Some(why)) => eprintln!("cache: {name} group rejected ({why}); rebuilt"),
    }
}

fn icosa_ctx(cfg: &ToleranceConfig, dir: Option<&Path>, rep: &mut Report) -> Result<IcosaContext> {
    rep.stage("icosahedral context");
    let (ctx, outcome) = cache::icosahedral_context(dir, cfg)?;
    note_cache("icosahedral", &outcome);
    Ok(ctx)
}

fn valentiner_ctx(cfg: &ToleranceConfig, dir: Option<&Path>, rep: &mut Report) -> Result<ValentinerContext> {
    rep.stage("valentiner context");
    let (ctx, outcome) = cache::valentiner_context(dir, cfg)?;
    note_cache("valentiner", &outcome);
    Ok(ctx)
}

fn instance(req: &RunRequest, cfg: &ToleranceConfig, rep: &mut Report) -> Result<RootInstance> {
    rep.stage("instance");
    let inst = match req.instance.as_ref().expect("validated request") {
        Instance::Roots(r) => RootInstance::from_roots(r.clone(), cfg)?,
        Instance::Coefficients(c) => RootInstance::from_coefficients(c, cfg)?,
    };
    rep.put_list("instance.roots", inst.roots());
    rep.put_list("instance.elementary_symmetric", inst.coefficients());
    rep.put_complex("instance.difference_product", inst.sqrt_discriminant());
    rep.residual("instance.discriminant_is_square", inst.discriminant_residual(), cfg.eq_tolerance);
    Ok(inst)
}

fn sweep_rng(req: &RunRequest) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(req.seed ^ 0x05EE_D5EE_D000_0001)
}

fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
    a.dist_f64(b) / a.abs_f64().max(1.0)
}

fn max_rel(a: &[BigComplex], b: &[BigComplex]) -> f64 {
    let scale = a.iter().map(BigComplex::abs_f64).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| x.dist_f64(y) / scale).fold(0.0, f64::max)
}

fn quintic(req: &RunRequest, dir: Option<&Path>, rep: &mut Report) -> Result<()> {
    let cfg = &req.config;
    let tol = cfg.eq_tolerance;
    let ctx = icosa_ctx(cfg, dir, rep)?;
    rep.residual("icosahedral.syzygy", ctx.syzygy_residual(), tol);
    let inst = instance(req, cfg, rep)?;

    rep.stage("reduction");
    let red = reduce_quintic(&inst, &ctx)?;
    rep.put_list("u", &red.u.u);
    let signs: Vec<String> = red.u.sign_pattern.iter().map(i8::to_string).collect();
    rep.put("u.sign_pattern", signs.join(" "));
    rep.put_complex("quadratic.a0", &red.quadratic.a0);
    rep.put_complex("quadratic.a1", &red.quadratic.a1);
    rep.put_complex("quadratic.a2", &red.quadratic.a2);
    rep.put_complex("quadratic.discriminant", &red.discriminant);
    rep.put_points("x", std::slice::from_ref(&red.x));
    rep.put_complex("X", &red.parameter);
    rep.log(format!("icosahedral point from {}", red.branch));

    rep.stage("equivariance");
    let mut gen_err = 0f64;
    for sigma in ctx.generator_perms() {
        let moved = reduce_quintic(&inst.permuted(sigma), &ctx)?;
        let image = red.x.transform(ctx.substitution_of_perm(sigma)?)?;
        gen_err = gen_err.max(moved.x.distance(&image));
    }
    rep.residual("equivariance.x_under_generators", gen_err, tol);

    let mut rng = sweep_rng(req);
    let evens: Vec<Perm> = (0..SWEEP).map(|_| Perm::random_even(5, &mut rng)).collect();
    let (mut x_err, mut d_err, mut pt_err) = (0f64, 0f64, 0f64);
    for sigma in &evens {
        let moved = reduce_quintic(&inst.permuted(sigma), &ctx)?;
        x_err = x_err.max(rel(&red.parameter, &moved.parameter));
        d_err = d_err.max(rel(&red.discriminant, &moved.discriminant));
        let image = red.x.transform(ctx.substitution_of_perm(sigma)?)?;
        pt_err = pt_err.max(moved.x.distance(&image));
    }
    rep.residual("invariance.X_even_sweep", x_err, tol);
    rep.residual("invariance.quadratic_discriminant_even_sweep", d_err, tol);
    rep.residual("equivariance.x_even_sweep", pt_err, tol);
    let swap = Perm::from_cycles(5, &[&[1, 2]]);
    let swapped = reduce_quintic(&inst.permuted(&swap), &ctx)?;
    rep.put(
        "transposition.X_changes",
        rel(&red.parameter, &swapped.parameter) > 1e3 * tol,
    );

    rep.stage("jacobi resolvent");
    let jac = jacobi_resolvent(&inst, &ctx)?;
    rep.put_list("jacobi.coefficients", &jac.coefficients);
    rep.count("jacobi.degree", poly::degree(&jac.coefficients), 6);
    let mut j_err = 0f64;
    for sigma in evens.iter().take(10) {
        let moved = jacobi_resolvent(&inst.permuted(sigma), &ctx)?;
        j_err = j_err.max(max_rel(&jac.coefficients, &moved.coefficients));
    }
    rep.residual("invariance.jacobi_even_sweep", j_err, tol);
    let root_err = jac
        .values
        .iter()
        .map(|v| poly::eval(&jac.coefficients, v).abs_f64())
        .fold(0f64, f64::max)
        / jac.coefficients.iter().map(BigComplex::abs_f64).fold(1.0, f64::max);
    rep.residual("jacobi.values_are_roots", root_err, tol);
    Ok(())
}

/// Multiset distance between two lists of `(v, w)` pairs.
fn pair_multiset_distance(a: &[(BigComplex, BigComplex)], b: &[(BigComplex, BigComplex)]) -> f64 {
    let one_way = |a: &[(BigComplex, BigComplex)], b: &[(BigComplex, BigComplex)]| {
        a.iter()
            .map(|(v, w)| {
                b.iter()
                    .map(|(v2, w2)| rel(v, v2).max(rel(w, w2)))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0f64, f64::max)
    };
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    one_way(a, b).max(one_way(b, a))
}

fn sextic(req: &RunRequest, dir: Option<&Path>, rep: &mut Report) -> Result<()> {
    let cfg = &req.config;
    let tol = cfg.eq_tolerance;
    let ctx = valentiner_ctx(cfg, dir, rep)?;
    let inst = instance(req, cfg, rep)?;

    rep.stage("omega");
    let omega = omega_cubic(&inst, &ctx)?;
    rep.put_list("omega.coefficients", &omega.phi);
    let mut o_err = 0f64;
    for sigma in ctx.generator_perms()? {
        let moved = omega_cubic(&inst.permuted(&sigma), &ctx)?;
        let back = act_on_form(ctx.substitution_of_perm(&sigma)?, &moved.form())?;
        o_err = o_err.max(back.rel_diff(&omega.form())?);
    }
    rep.residual("invariance.omega_under_generators", o_err, tol);

    rep.stage("inflection");
    let fw = normalproblem_forward(&inst, &ctx)?;
    rep.count("inflection.count", fw.inflection.points.len(), 9);
    rep.put_points("inflection.points", &fw.inflection.points);
    rep.put("inflection.chosen", fw.inflection.chosen);
    rep.residual("inflection.on_cubic_and_hessian", fw.inflection.max_residual, tol);
    for entry in &fw.branch_log {
        rep.log(entry.clone());
    }
    rep.put_complex("v", &fw.v);
    rep.put_complex("w", &fw.w);
    let vs: Vec<BigComplex> = fw.values.iter().map(|(v, _)| v.clone()).collect();
    let ws: Vec<BigComplex> = fw.values.iter().map(|(_, w)| w.clone()).collect();
    rep.put_list("values.v", &vs);
    rep.put_list("values.w", &ws);

    rep.stage("ninth-degree equation");
    let nu = nu_ninth_degree_of_cubic(&fw.cubic, &ctx)?;
    rep.put_list("nu.coefficients", &nu);
    rep.count("nu.degree", poly::degree(&nu), 9);

    rep.stage("invariance sweep");
    let mut rng = sweep_rng(req);
    let (mut vw_err, mut nu_err) = (0f64, 0f64);
    for _ in 0..10 {
        let sigma = Perm::random_even(6, &mut rng);
        let moved = normalproblem_forward(&inst.permuted(&sigma), &ctx)?;
        vw_err = vw_err.max(pair_multiset_distance(&fw.values, &moved.values));
        let moved_nu = nu_ninth_degree_of_cubic(&moved.cubic, &ctx)?;
        nu_err = nu_err.max(max_rel(&nu, &moved_nu));
    }
    rep.residual("invariance.vw_multiset_even_sweep", vw_err, tol);
    rep.residual("invariance.nu_even_sweep", nu_err, tol);
    Ok(())
}

/// Groups points lying within `radius` of each other. Returns the mean of
/// each cluster with its size.
pub fn clusters(points: &[ProjectivePoint], radius: f64) -> Vec<(ProjectivePoint, usize)> {
    let normed: Vec<ProjectivePoint> = points.iter().map(ProjectivePoint::normalized).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, p) in normed.iter().enumerate() {
        match groups.iter_mut().find(|g| normed[g[0]].distance(p) <= radius) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let lead = &normed[g[0]];
            // average in the chart of the first member
            let k = lead.coords().iter().position(|c| c.dist_f64(&BigComplex::one(c.prec())) == 0.0).unwrap_or(0);
            let mut acc = vec![BigComplex::zero(lead.prec()); lead.dim()];
            for &i in &g {
                let inv = normed[i].coords()[k].recip();
                for (a, c) in acc.iter_mut().zip(normed[i].coords()) {
                    *a += &(c * &inv);
                }
            }
            let n = g.len() as i64;
            let mean = ProjectivePoint::new(acc.iter().map(|a| a.div_i64(n)).collect()).expect("nonzero mean");
            (mean, g.len())
        })
        .collect()
}

/// Cluster radius for roots of multiplicity up to 5.
fn cluster_radius(tol: f64) -> f64 {
    tol.powf(0.2).max(1e-30)
}

/// Newton on the `(m − 1)`-th derivative in the chart of the point's largest
/// coordinate, where a root of multiplicity `m` is simple.
fn refine(form: &HomogeneousForm, p: &ProjectivePoint, m: usize) -> ProjectivePoint {
    let prec = p.prec();
    let affine_first = p.coords()[1].abs_f64() >= p.coords()[0].abs_f64();
    let pivot = p.coords()[if affine_first { 1 } else { 0 }].recip();
    let q: Vec<BigComplex> = p.coords().iter().map(|c| c * &pivot).collect();
    // coefficient k belongs to x1^(d-k) x2^k
    let mut g = if affine_first {
        form.dehomogenize_binary()
    } else {
        form.coeffs().to_vec()
    };
    for _ in 1..m {
        g = poly::derivative(&g);
    }
    let mut t = if affine_first { q[0].clone() } else { q[1].clone() };
    let floor = 2f64.powi(8 - prec as i32);
    let mut last = f64::INFINITY;
    for _ in 0..100 {
        let (v, d) = poly::eval_with_derivative(&g, &t);
        if d.is_zero() {
            break;
        }
        let step = &v / &d;
        t = &t - &step;
        let size = step.abs_f64();
        if size <= floor * t.abs_f64().max(1.0) || size > 0.5 * last {
            break;
        }
        last = size;
    }
    let one = BigComplex::one(prec);
    let coords = if affine_first { vec![t, one] } else { vec![one, t] };
    ProjectivePoint::new(coords).expect("nonzero point")
}

struct Fibre {
    distinct: usize,
    multiplicity: usize,
    orbit_distance: f64,
    equation_residual: f64,
}

fn icosa_fibre(ctx: &IcosaContext, value: &ParamValue) -> Result<(Vec<ProjectivePoint>, Fibre)> {
    let tol = ctx.config().eq_tolerance;
    let sols = solve_icosahedral(ctx, value)?;
    let cl = clusters(&sols, cluster_radius(tol));
    let multiplicity = cl.iter().map(|c| c.1).max().unwrap_or(0);
    let uniform = cl.iter().all(|c| c.1 == multiplicity);
    let f5 = ctx.f().pow(5);
    let h3 = ctx.h().pow(3);
    let equation = match value {
        ParamValue::Infinite => f5.clone(),
        ParamValue::Finite(x) => h3.try_sub(&f5.scale(&x.scale_i64(1728)))?,
    };
    let centres: Vec<ProjectivePoint> = cl
        .into_iter()
        .map(|(c, m)| if m > 1 { refine(&equation, &c, m) } else { c })
        .collect();
    let orbit: Vec<ProjectivePoint> = ctx
        .group()
        .representatives()
        .into_iter()
        .map(|m| centres[0].transform(m))
        .collect::<Result<_>>()?;
    let orbit_distance = if uniform { hausdorff(&centres, &orbit) } else { f64::INFINITY };
    let equation_residual = sols
        .iter()
        .map(|p| -> Result<f64> {
            let q = p.normalized();
            let fv = evaluate_form(&f5, q.coords())?;
            Ok(match value {
                ParamValue::Infinite => fv.abs_f64() / f5.max_abs(),
                ParamValue::Finite(x) => {
                    let hv = evaluate_form(&h3, q.coords())?;
                    let rhs = &fv * &x.scale_i64(1728);
                    hv.dist_f64(&rhs) / (hv.abs_f64() + rhs.abs_f64()).max(h3.max_abs())
                }
            })
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0f64, f64::max);
    let fibre = Fibre {
        distinct: centres.len(),
        multiplicity,
        orbit_distance,
        equation_residual,
    };
    Ok((sols, fibre))
}

fn icosa_solve(req: &RunRequest, dir: Option<&Path>, rep: &mut Report) -> Result<()> {
    let cfg = &req.config;
    let tol = cfg.eq_tolerance;
    let ctx = icosa_ctx(cfg, dir, rep)?;
    let value = match &req.params {
        Params::Icosa(Some(x)) => ParamValue::Finite(x.clone()),
        _ => ParamValue::Infinite,
    };
    rep.stage("icosahedral equation");
    let (sols, fibre) = icosa_fibre(&ctx, &value)?;
    rep.count("solutions.count", sols.len(), 60);
    rep.put_points("solutions", &sols);
    rep.put("fibre.distinct", fibre.distinct);
    rep.put("fibre.multiplicity", fibre.multiplicity);
    rep.count("fibre.points_with_multiplicity", fibre.distinct * fibre.multiplicity, 60);
    rep.residual("solutions.on_equation", fibre.equation_residual, tol);
    rep.residual("solutions.single_orbit", fibre.orbit_distance, tol);
    if fibre.multiplicity > 1 {
        rep.log(format!(
            "multiplicity-{} fibre; orbit check on clusters within {:e}, refined on the derivative",
            fibre.multiplicity,
            cluster_radius(tol)
        ));
    }
    Ok(())
}

fn normalproblem_solve(req: &RunRequest, dir: Option<&Path>, rep: &mut Report) -> Result<()> {
    let hi_cfg = if req.config.prec() >= ESCALATED_BITS {
        req.config.clone()
    } else {
        ToleranceConfig::escalated().with_seed(req.seed)
    };
    let tol = hi_cfg.eq_tolerance;
    let ctx = valentiner_ctx(&hi_cfg, dir, rep)?;
    rep.put("escalated.precision_bits", hi_cfg.precision_bits);
    rep.put("escalated.tolerance", format!("{tol:e}"));

    let (v, w, origin) = match &req.params {
        Params::Normal(v, w) => (v.with_prec(hi_cfg.prec()), w.with_prec(hi_cfg.prec()), None),
        _ => {
            let inst = instance(req, &hi_cfg, rep)?;
            rep.stage("forward");
            let fw = normalproblem_forward(&inst, &ctx)?;
            rep.put_complex("forward.v", &fw.v);
            rep.put_complex("forward.w", &fw.w);
            rep.put_points("forward.inflection_point", std::slice::from_ref(&fw.inflection_point));
            for entry in &fw.branch_log {
                rep.log(entry.clone());
            }
            (fw.v, fw.w, Some(fw.inflection_point))
        }
    };

    rep.stage("normalproblem");
    let sol = solve_normalproblem(&ctx, &v, &w)?;
    rep.log(format!("normal-problem elimination frame accepted on attempt {}", sol.attempts));
    rep.count("solutions.count", sol.points.len(), 360);
    let points: Vec<ProjectivePoint> = sol.points.iter().map(ProjectivePoint::normalized).collect();
    rep.put_points("solutions", &points);
    rep.residual("solutions.on_both_curves", sol.max_residual, tol);
    let mut closure = 0f64;
    for g in ctx.generators() {
        let image: Vec<ProjectivePoint> = points.iter().map(|p| p.transform(&g.matrix)).collect::<Result<_>>()?;
        closure = closure.max(hausdorff(&image, &points));
    }
    rep.residual("solutions.closed_under_generators", closure, tol);
    if let Some(p) = origin {
        let d = points.iter().map(|q| q.distance(&p)).fold(f64::INFINITY, f64::min);
        rep.residual("roundtrip.contains_inflection_point", d, tol);
    }
    Ok(())
}

fn verify(req: &RunRequest, dir: Option<&Path>, rep: &mut Report) -> Result<()> {
    let cfg = &req.config;
    let tol = cfg.eq_tolerance;

    let ico = icosa_ctx(cfg, dir, rep)?;
    rep.stage("icosahedral checks");
    let (q, kernel) = resolvent::projectivize(ico.group())?;
    rep.count("icosahedral.order", ico.group().order(), 120);
    rep.count("icosahedral.projective_order", q, 60);
    rep.count("icosahedral.kernel", kernel.len(), 2);
    rep.residual("icosahedral.determinants", ico.group().max_determinant_drift(), tol);
    rep.residual("icosahedral.syzygy", ico.syzygy_residual(), tol);
    let mut inv = 0f64;
    for s in ico.group().elements() {
        for f in [ico.f(), ico.h(), ico.t()] {
            inv = inv.max(act_on_form(s, f)?.rel_diff(f)?);
        }
    }
    rep.residual("icosahedral.forms_invariant", inv, tol);
    let cert = klein_four_obstruction(&ico)?;
    rep.flag("icosahedral.four_group_does_not_lift", cert.four_group_obstructed());
    rep.flag("icosahedral.no_isomorphic_subgroup", cert.no_isomorphic_subgroup());
    for (label, value, distinct, mult) in [
        ("0", ParamValue::Finite(BigComplex::zero(cfg.prec())), 20, 3),
        ("1", ParamValue::Finite(BigComplex::one(cfg.prec())), 30, 2),
        ("inf", ParamValue::Infinite, 12, 5),
    ] {
        let (_, fibre) = icosa_fibre(&ico, &value)?;
        rep.count(&format!("icosahedral.fibre_{label}.distinct"), fibre.distinct, distinct);
        rep.count(&format!("icosahedral.fibre_{label}.multiplicity"), fibre.multiplicity, mult);
    }

    let val = valentiner_ctx(cfg, dir, rep)?;
    rep.stage("valentiner checks");
    let (q, kernel) = resolvent::projectivize(val.group())?;
    rep.count("valentiner.order", val.group().order(), 1080);
    rep.count("valentiner.projective_order", q, 360);
    rep.count("valentiner.kernel", kernel.len(), 3);
    rep.residual("valentiner.determinants", val.group().max_determinant_drift(), tol);
    let one = BigComplex::one(cfg.prec());
    let conic_det = val
        .conics()
        .matrices
        .iter()
        .map(|m| m.determinant().dist_f64(&one))
        .fold(0f64, f64::max);
    rep.residual("valentiner.conic_determinants", conic_det, tol);
    let j = BigComplex::root_of_unity(cfg.prec(), 1, 3);
    let forms = &val.conics().forms;
    let mut passing = 0;
    for (e, s) in val.group().elements().iter().enumerate() {
        let act = val.conic_action(e);
        let mut ok = true;
        for (i, k) in forms.iter().enumerate() {
            let want = forms[act.perm.apply(i)].scale(&j.pow_u(act.exponents[i] as u32));
            ok &= act_on_form(s, k)?.max_diff(&want)? <= tol;
        }
        passing += ok as usize;
    }
    rep.count("valentiner.elements_permuting_conics", passing, 1080);
    rep.count("valentiner.degree_F", val.f().degree() as usize, 6);
    rep.count("valentiner.degree_H6", val.h6().degree() as usize, 12);
    rep.count("valentiner.degree_Phi", val.phi().degree() as usize, 30);
    let mut rng = sweep_rng(req);
    let samples: Vec<ProjectivePoint> = (0..2)
        .map(|_| {
            let c: Vec<BigComplex> = (0..3)
                .map(|_| BigComplex::from_f64(cfg.prec(), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            ProjectivePoint::new(c)
        })
        .collect::<Result<_>>()?;
    rep.residual("valentiner.invariants_under_all_elements", val.invariance_residual(&samples)?, tol);
    Ok(())
}
