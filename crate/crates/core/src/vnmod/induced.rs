//! The trace induced on `B(H_N)` by a trace on `N`.
//!
//! With `V = S (S* S)^{-1/2}` the partial isometry from `L²(N)^k` onto `H`
//! and `h_i = V(1̂ in slot i)`, the induced trace is `τ̃(T) = Σ_i ⟨T h_i, h_i⟩`.

use alloc::vec::Vec;

use super::cdim::{module_projection, ModuleProjection};
use super::RightModule;
use crate::algebra::{StarAlgebra, TraceFunctional};
use crate::error::Result;
use crate::linalg::{psd_function, CMat, CVec};

#[derive(Clone, Debug)]
pub struct InducedTrace {
    /// `B(H_N)`, the commutant of the right action.
    pub algebra: StarAlgebra,
    pub trace: TraceFunctional,
    pub vectors: Vec<CVec>,
}

pub fn induced_trace(h: &RightModule) -> Result<InducedTrace> {
    let mp = module_projection(h)?;
    let commutant = h.commutant()?;
    induced_trace_on(&mp, commutant)
}

/// Same as [`induced_trace`] with the projection and commutant supplied.
pub fn induced_trace_on(mp: &ModuleProjection, commutant: StarAlgebra) -> Result<InducedTrace> {
    let s = &mp.synthesis;
    let v = s * psd_function(&(s.adjoint() * s), |lam| 1.0 / libm::sqrt(lam));
    let dn = mp.gns.dim();
    let one = mp.gns.one();
    let d = s.nrows();
    let mut density = CMat::zeros(d, d);
    let mut vectors = Vec::with_capacity(mp.copies());
    for i in 0..mp.copies() {
        let h = v.columns(i * dn, dn) * &one;
        density += &h * h.adjoint();
        vectors.push(h);
    }
    let trace = TraceFunctional::new(&commutant, &density)?;
    Ok(InducedTrace { algebra: commutant, trace, vectors })
}
