//! Finite fields, truncated Witt vectors and finite-length coefficient rings.

mod galois;
mod hom;
mod ideal;
pub mod presentation;
mod ring;

pub use galois::{is_prime, FiniteField, GaloisRing, GrElem};
pub use hom::RingHom;
pub use ideal::{filtration_nk, graded_piece, in_category_c, is_nearly_small, maximal_ideal_power, SubmoduleIdeal};
pub use presentation::{parse, parse_elem, parse_experimental, print, ExperimentalPresentation};
pub use ring::{CoefficientRing, Elem, Monomial};

/// Square root of a unit of `O/p^N` with the canonical residue.
pub fn hensel_sqrt(base: &GaloisRing, u: &[u64]) -> crate::Result<GrElem> {
    base.sqrt(u)
}
