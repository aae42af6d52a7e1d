//! Exhaustive certificate that the projective icosahedral group has no
//! faithful lift to `GL(2)`: neither its four-group nor the full group
//! lifts homomorphically.

use crate::complex::BigComplex;
use crate::error::Result;
use crate::group::close_group;
use crate::matrix::LinearSubstitution;

use super::context::IcosaContext;

/// One choice of lifts `II', III', IV'` with a common determinant.
#[derive(Clone, Debug)]
pub struct LiftCase {
    pub determinant: String,
    /// Signs of the square roots chosen for `II', III', IV'`.
    pub signs: [i8; 3],
    /// Whether `II' · III' · IV' = I'`.
    pub triple_product_holds: bool,
    /// First relation of the four-group multiplication table that fails,
    /// `None` if the lifts form a group isomorphic to the four-group.
    pub first_failure: Option<String>,
}

/// Closure of one choice of lifts of the generator classes.
#[derive(Clone, Debug)]
pub struct SubgroupCandidate {
    pub signs: [i8; 2],
    pub order: usize,
}

#[derive(Clone, Debug)]
pub struct ObstructionCertificate {
    pub lift_cases: Vec<LiftCase>,
    pub subgroup_candidates: Vec<SubgroupCandidate>,
}

impl ObstructionCertificate {
    /// True when no lift case yields a four-group image.
    pub fn four_group_obstructed(&self) -> bool {
        self.lift_cases.iter().all(|c| c.first_failure.is_some())
    }

    /// True when no lift of the generators closes to an order-60 group.
    pub fn no_isomorphic_subgroup(&self) -> bool {
        self.subgroup_candidates.iter().all(|c| c.order != 60)
    }

    pub fn holds(&self) -> bool {
        self.four_group_obstructed() && self.no_isomorphic_subgroup()
    }
}

/// Determinant values tried for the four-group lifts.
pub const LIFT_DETERMINANTS: [(&str, i64, i64); 6] =
    [("-1", -1, 0), ("1", 1, 0), ("i", 0, 1), ("-i", 0, -1), ("2", 2, 0), ("1+i", 1, 1)];

fn base_matrices(prec: u32) -> [LinearSubstitution; 3] {
    let o = || BigComplex::one(prec);
    let z = || BigComplex::zero(prec);
    let m = |e: [BigComplex; 4]| LinearSubstitution::new(2, e.to_vec()).expect("2x2");
    [
        // ξ → −ξ
        m([-o(), z(), z(), o()]),
        // ξ → 1/ξ
        m([z(), o(), o(), z()]),
        // ξ → −1/ξ
        m([z(), -o(), o(), z()]),
    ]
}

fn four_group_case(prec: u32, det: &BigComplex, label: &str, signs: [i8; 3], tol: f64) -> Result<LiftCase> {
    let base = base_matrices(prec);
    let lifts: Vec<LinearSubstitution> = base
        .iter()
        .zip(signs)
        .map(|(m, s)| {
            let lambda = (det / m.determinant()).sqrt().scale_i64(s as i64);
            m.scale(&lambda)
        })
        .collect();
    let id = LinearSubstitution::identity(2, prec);
    let elems = [id.clone(), lifts[0].clone(), lifts[1].clone(), lifts[2].clone()];
    let names = ["I'", "II'", "III'", "IV'"];
    // four-group table: g_a g_b = g_{a xor b}
    let mut first_failure = None;
    'table: for a in 1..4 {
        for b in 1..4 {
            let prod = elems[a].mul(&elems[b])?;
            let want = &elems[a ^ b];
            if prod.max_entry_diff(want) > tol {
                first_failure = Some(format!("{}·{} = {}", names[a], names[b], names[a ^ b]));
                break 'table;
            }
        }
    }
    let triple = lifts[0].mul(&lifts[1])?.mul(&lifts[2])?;
    Ok(LiftCase {
        determinant: label.to_string(),
        signs,
        triple_product_holds: triple.max_entry_diff(&id) <= tol,
        first_failure,
    })
}

pub fn klein_four_obstruction(ctx: &IcosaContext) -> Result<ObstructionCertificate> {
    let prec = ctx.cfg.prec();
    let tol = ctx.cfg.eq_tolerance;
    let mut lift_cases = Vec::new();
    for (label, re, im) in LIFT_DETERMINANTS {
        let det = BigComplex::from_f64(prec, re as f64, im as f64);
        for mask in 0..8u8 {
            let signs = [0, 1, 2].map(|k| if mask >> k & 1 == 1 { -1 } else { 1 });
            lift_cases.push(four_group_case(prec, &det, label, signs, tol)?);
        }
    }
    // A5 is generated by the classes of S and T, so any subgroup mapping
    // isomorphically onto the quotient is generated by lifts ±S, ±T.
    let (s, t) = (&ctx.s, &ctx.t);
    let mut subgroup_candidates = Vec::new();
    for (ss, ts) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
        let g1 = s.scale(&BigComplex::from_i64(prec, ss as i64));
        let g2 = t.scale(&BigComplex::from_i64(prec, ts as i64));
        let g = close_group(&[g1, g2], 240, &ctx.cfg)?;
        subgroup_candidates.push(SubgroupCandidate {
            signs: [ss, ts],
            order: g.order(),
        });
    }
    Ok(ObstructionCertificate {
        lift_cases,
        subgroup_candidates,
    })
}
