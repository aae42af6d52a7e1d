//! The 1080-element ternary group, its six conics and invariants `F, H6, Φ`,
//! and the reduction of the sextic to the two-parameter normal problem.

mod conics;
mod context;
mod generators;
mod inflection;
mod normal;
mod sextic;

pub use conics::{apolarity, cross_coefficient, gerbaldi_conics, ConicSystem, SIGN_PATTERNS};
pub use context::{
    ascending_triples, build_from_group, build_valentiner_context, build_valentiner_context_from, mixed_discriminant,
    ConicAction, ValentinerContext,
};
pub use generators::{parse_generators, NamedGenerator, GENERATOR_DATA};
pub use inflection::{inflection_points, InflectionSet, DISTINCT_POINTS};
pub use normal::{
    absolute_invariants, covariant_line_demo, normalproblem_forward, normalproblem_forward_from_cubic,
    nu_ninth_degree, nu_ninth_degree_of_cubic, solve_normalproblem, LineDemo, NormalproblemInstance, ESCALATED_BITS,
};
pub use sextic::{
    difference_product3, generalized_omega, omega_cubic, power_determinant, triple_image, triple_invariants,
    CubicCovariant,
};
