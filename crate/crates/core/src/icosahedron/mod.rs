//! The binary icosahedral group, its invariant forms `f, H, T`, and the
//! reduction of the quintic to the icosahedral equation.

mod context;
mod jacobi;
mod obstruction;
mod quintic;
mod solve;

pub use context::{
    build_icosahedral_context, build_icosahedral_context_from_group, icosa_parameter, icosahedral_generators, IcosaContext,
    LABELS,
};
pub use jacobi::{jacobi_resolvent, JacobiResolvent};
pub use obstruction::{klein_four_obstruction, LiftCase, ObstructionCertificate, SubgroupCandidate};
pub use quintic::{
    covariant_quadratic, icosahedral_point, metacyclic_u, quadratic_discriminant, reduce_quintic,
    CovariantQuadratic, MetacyclicVector, QuinticReduction,
};
pub use solve::{solve_icosahedral, ParamValue};
