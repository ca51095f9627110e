//! Twisted group algebras `W*(Δ, c)` in their left regular representation.

use alloc::vec::Vec;

use super::{StarAlgebra, TraceFunctional};
use crate::error::Result;
use crate::gabor::cocycle;
use crate::groups::Lattice;
use crate::linalg::CMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleFlavor {
    /// `c(z, z')`.
    Plain,
    /// `c^op(z, z') = c(z', z)`.
    Opposite,
}

#[derive(Clone, Debug)]
pub struct TwistedGroupAlgebra {
    pub lattice: Lattice,
    pub flavor: CocycleFlavor,
    pub algebra: StarAlgebra,
    /// `λ(z)` in canonical lattice order.
    pub shifts: Vec<CMat>,
    /// `τ(λ(z)) = [z = 0]`.
    pub trace: TraceFunctional,
}

/// `λ(z) δ_{z'} = c(z, z') δ_{z + z'}` on `ℓ²(Δ)`.
pub fn twisted_group_algebra(lattice: &Lattice, flavor: CocycleFlavor) -> Result<TwistedGroupAlgebra> {
    let space = lattice.space();
    let group = lattice.group();
    let elems = lattice.elements();
    let m = elems.len();
    let mut shifts = Vec::with_capacity(m);
    for z in &elems {
        let mut op = CMat::zeros(m, m);
        for (col, zp) in elems.iter().enumerate() {
            let sum = space.add(z, zp);
            let row = elems.iter().position(|e| *e == sum).expect("lattice is closed under addition");
            op[(row, col)] = match flavor {
                CocycleFlavor::Plain => cocycle(group, z, zp)?,
                CocycleFlavor::Opposite => cocycle(group, zp, z)?,
            };
        }
        shifts.push(op);
    }
    let algebra = StarAlgebra::from_spanning(m, &shifts)?;
    let trace = TraceFunctional::normalized(&algebra);
    Ok(TwistedGroupAlgebra { lattice: lattice.clone(), flavor, algebra, shifts, trace })
}
