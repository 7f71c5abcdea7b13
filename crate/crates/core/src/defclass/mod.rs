//! Deformation classes under twisting: the exponential twist by cocycles,
//! stabilization of the nr and ram classes, fibers over nearly small
//! ideals, and the weight and hull-step checks.

mod fiber;
mod hull;
mod stabilize;
mod twist;

pub use fiber::{fiber_enumerate, FiberReport};
pub use hull::{hull_step_check, weight_point, weights_congruent, HullStepReport};
pub use stabilize::{
    conjugation_identity_check, failure_probe, stabilization_check, truncation, IdentityCheck,
    StabilizationCase, StabilizationReport,
};
pub use twist::{
    annihilated_by_maximal_ideal, cocycle_difference, exp_twist, exp_twist_sum, lift_matrix,
    TwistDatum,
};
