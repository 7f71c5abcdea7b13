//! 2x2 matrices over coefficient rings and representations of the tame
//! group `<sigma, tau | sigma tau sigma^-1 = tau^v>`.

mod class;
pub(crate) mod layered;
mod mat2;
mod tame;

pub use class::{
    in_deform_class, sample_y_values, strictly_equivalent, y_in_class, Conjugator, DeformClassSpec, Mode,
    SearchConfig, Variant, Verdict, DEFAULT_SEARCH_BOUND,
};
pub use mat2::Mat2;
pub use tame::{check_trivial_prime, is_trivial_prime, TameRep};
