use crate::complex::{consts, BigComplex};
use crate::error::Result;
use crate::form::HomogeneousForm;
use crate::matrix::LinearSubstitution;

/// Six pairwise apolar conics of determinant 1, permuted up to cube roots
/// of unity by the 1080-element group.
#[derive(Clone, Debug)]
pub struct ConicSystem {
    pub forms: Vec<HomogeneousForm>,
    /// Symmetric coefficient matrices, `k(x) = xᵀ M x`.
    pub matrices: Vec<LinearSubstitution>,
}

/// Sign patterns of `(x2 x3, x3 x1, x1 x2)` in the last four conics.
pub const SIGN_PATTERNS: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

/// Coefficient of `x_i x_j` in the last four conics, before the pattern sign:
/// `−(3 + √−15) / 4`.
pub fn cross_coefficient(prec: u32) -> BigComplex {
    -(BigComplex::from_i64(prec, 3) + consts::sqrt_m15(prec)).div_i64(4)
}

fn symmetric(diag: [BigComplex; 3], off: [BigComplex; 3]) -> Result<LinearSubstitution> {
    // off = (m23, m13, m12)
    let [d1, d2, d3] = diag;
    let [m23, m13, m12] = off;
    LinearSubstitution::from_rows(vec![
        vec![d1, m12.clone(), m13.clone()],
        vec![m12, d2, m23.clone()],
        vec![m13, m23, d3],
    ])
}

fn form_of(m: &LinearSubstitution) -> Result<HomogeneousForm> {
    // monomial order: x1², x1x2, x1x3, x2², x2x3, x3²
    let g = |i, j| m.get(i, j).clone();
    HomogeneousForm::from_coeffs(
        3,
        2,
        vec![
            g(0, 0),
            g(0, 1).scale_i64(2),
            g(0, 2).scale_i64(2),
            g(1, 1),
            g(1, 2).scale_i64(2),
            g(2, 2),
        ],
    )
}

/// `k1 = x1² + j x2² + j² x3²`, `k2 = x1² + j² x2² + j x3²`, and
/// `k3..k6 = −α (x1² + x2² + x3²) + c (s1 x2x3 + s2 x3x1 + s3 x1x2)` with
/// `α = (1 − √−15)/8`, `c = −(3 + √−15)/4` and the sign patterns above.
pub fn gerbaldi_conics(prec: u32) -> Result<ConicSystem> {
    let j = consts::j(prec);
    let j2 = j.square();
    let one = BigComplex::one(prec);
    let zero = || BigComplex::zero(prec);
    let mut matrices = vec![
        symmetric([one.clone(), j.clone(), j2.clone()], [zero(), zero(), zero()])?,
        symmetric([one, j2, j], [zero(), zero(), zero()])?,
    ];
    let diag = -consts::alpha(prec);
    let half_cross = cross_coefficient(prec).div_i64(2);
    for s in SIGN_PATTERNS {
        let off = s.map(|x| half_cross.scale_i64(x));
        matrices.push(symmetric([diag.clone(), diag.clone(), diag.clone()], off)?);
    }
    let forms = matrices.iter().map(form_of).collect::<Result<_>>()?;
    Ok(ConicSystem { forms, matrices })
}

/// `tr(adj(A) B)`, which vanishes exactly when the conics are apolar.
pub fn apolarity(a: &LinearSubstitution, b: &LinearSubstitution) -> Result<BigComplex> {
    let adj = a.inverse()?.scale(a.determinant());
    let p = adj.mul(b)?;
    Ok(p.get(0, 0) + p.get(1, 1) + p.get(2, 2))
}
