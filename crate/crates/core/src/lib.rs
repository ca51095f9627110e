//! Gabor systems over finite abelian groups and a finite-dimensional
//! von Neumann algebra engine.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is a pure function of
//! its inputs; randomness only enters through explicit seeds.
//!
//! Layout:
//! - [`groups`]: finite abelian groups, phase space `G × Ĝ`, lattices,
//!   adjoint lattices and covolumes.
//! - [`gabor`]: time-frequency shifts, the 2-cocycle, frame operators and
//!   optimal Bessel bounds.
//! - [`algebra`]: unital `*`-subalgebras of `n × n` matrices, commutants,
//!   centers, traces, GNS spaces, conditional expectations and twisted group
//!   algebras.
//! - [`vnmod`]: right and left modules, center-valued dimension, the Jones
//!   basic construction and induced traces.
//! - [`bimodule`]: bimodules with traces on both sides and bounded vectors.
//! - [`duality`]: the Gabor bimodule and the checks tying the two sides of
//!   Bessel duality together.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod bimodule;
pub mod check;
pub mod duality;
pub mod error;
pub mod gabor;
pub mod groups;
pub mod linalg;
pub mod rng;
pub mod vnmod;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, C64};
