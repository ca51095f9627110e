//! File formats, JSON reports, verification campaigns and the command line
//! for `bessel-core`.

pub mod campaign;
pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
