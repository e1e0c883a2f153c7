//! The group `Γ_j` generated by rooted `A_j`, `Q̃^α` and `G̃^β`: scenarios,
//! named generators, the wreath identities behind branching, perfectness
//! and finite-order certificates.

mod generators;
mod order;
mod scenario;
mod wreath;

pub use generators::{
    gamma_generator_list, gamma_generators, parse_generator_word, random_generator_word,
    GammaGenerator, GeneratorKind,
};
pub use order::{certify_finite_order, replay_order_certificate, OrderCertificate, ResidualLetter};
pub use scenario::{GammaScenario, ScenarioSpec};
pub use wreath::{
    perfectness, verify_wreath_identities, IdentityCheck, PerfectnessReport, WreathReport,
};
