//! Modules over finite-dimensional von Neumann algebras.
//!
//! - [`RightModule`] / [`LeftModule`]: concrete actions on `C^d`.
//! - [`cdim`]: center-valued dimension, by module projection and by the
//!   block formula.
//! - [`induced_trace`]: the trace on `B(H_N)` induced by a trace on `N`.
//! - [`Inclusion`] / [`BasicConstruction`]: Jones projections and `⟨N, e_B⟩`.

mod cdim;
mod induced;
mod jones;
mod module;

pub use cdim::{
    cdim, cdim_block_formula, cdim_from_projection, cdim_left, cdim_left_block_formula, greedy_generators,
    module_projection, module_projection_with, product_norm, CenterElement, ModuleProjection,
};
pub use induced::{induced_trace, induced_trace_on, InducedTrace};
pub use jones::{jones_projection, BasicConstruction, Inclusion, SubalgebraBound};
pub use module::{BoundedOperatorMap, LeftModule, RightModule};
