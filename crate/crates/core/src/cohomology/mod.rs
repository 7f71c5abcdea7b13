//! Cohomology of the tame group `<sigma, tau | sigma tau sigma^-1 = tau^v>`
//! with coefficients in finite `F_q`-modules.

mod cocycle;
mod module;
mod spaces;

pub use cocycle::{
    coboundary_space, cocycle_space, h1_representatives, h_dims, relator_matrices, trivial_h_dims, Cocycle,
    CocycleSpace, SpaceLabel,
};
pub use module::{GModule, ModuleKind};
pub use spaces::{m_space, n_space, p_space, q_space, ram_scalar, standard_cocycles, twisted_space, StandardCocycles};
