//! Time-frequency shifts and Gabor systems on `L²(G) ≅ C^{|G|}`.
//!
//! Coordinates are indexed by the elements of `G` in lexicographic order.
//! Inner products are linear in the first argument:
//! `⟨u, v⟩ = Σ_t u(t) conj(v(t))`.

use alloc::vec::Vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::{FiniteAbelianGroup, Lattice, PhasePoint};
use crate::linalg::{c, gaussian_vector, max_eigenvalue, op_norm_svd, CMat, CVec, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    group: FiniteAbelianGroup,
    values: CVec,
}

impl Window {
    pub fn new(group: FiniteAbelianGroup, values: Vec<C64>) -> Result<Self> {
        if values.len() != group.size() {
            return Err(Error::ShapeMismatch { expected: group.size(), found: values.len() });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidElement { detail: "non-finite window entry".into() });
        }
        Ok(Window { group, values: CVec::from_vec(values) })
    }

    /// The point mass at the identity element.
    pub fn delta0(group: FiniteAbelianGroup) -> Self {
        let mut values = CVec::zeros(group.size());
        values[0] = c(1.0, 0.0);
        Window { group, values }
    }

    pub fn zeros(group: FiniteAbelianGroup) -> Self {
        let values = CVec::zeros(group.size());
        Window { group, values }
    }

    /// Independent standard Gaussian real and imaginary parts.
    pub fn gaussian<R: Rng + ?Sized>(group: FiniteAbelianGroup, rng: &mut R) -> Self {
        let values = gaussian_vector(rng, group.size());
        Window { group, values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &CVec {
        &self.values
    }
}

#[derive(Clone, Debug)]
pub struct GaborSystem {
    pub window: Window,
    pub lattice: Lattice,
}

impl GaborSystem {
    pub fn new(window: Window, lattice: Lattice) -> Result<Self> {
        check_compatible(&window, &lattice)?;
        Ok(GaborSystem { window, lattice })
    }

    /// The vectors `π(z) g`, `z ∈ Δ`, in canonical lattice order.
    pub fn atoms(&self) -> Vec<CVec> {
        let group = self.lattice.group();
        self.lattice.elements().iter().map(|z| shift_matrix(group, z) * &self.window.values).collect()
    }
}

fn check_compatible(window: &Window, lattice: &Lattice) -> Result<()> {
    if window.group != *lattice.group() {
        return Err(Error::ShapeMismatch { expected: lattice.group().size(), found: window.group.size() });
    }
    Ok(())
}

fn shift_matrix(group: &FiniteAbelianGroup, z: &PhasePoint) -> CMat {
    let n = group.size();
    let l = group.exponent();
    let mut m = CMat::zeros(n, n);
    for t in 0..n {
        let te = group.element_at(t);
        let src = group.index_of(&group.sub(&te, &z.x));
        m[(t, src)] = crate::linalg::unit_root(group.pairing(&z.omega, &te), l);
    }
    m
}

/// `π(x, ω)`, acting by `(π(x, ω) f)(t) = ω(t) f(t − x)`.
pub fn tf_shift(group: &FiniteAbelianGroup, z: &PhasePoint) -> Result<CMat> {
    group.validate(&z.x)?;
    group.validate(&z.omega)?;
    Ok(shift_matrix(group, z))
}

/// `c(z, z') = conj(ω'(x))`, so that `π(z)π(z') = c(z, z') π(z + z')`.
pub fn cocycle(group: &FiniteAbelianGroup, z: &PhasePoint, zp: &PhasePoint) -> Result<C64> {
    Ok(group.character_value(&zp.omega, &z.x)?.conj())
}

/// Row `z` is the conjugate transpose of `π(z) g`, so `(C f)(z) = ⟨f, π(z) g⟩`.
pub fn analysis_matrix(window: &Window, lattice: &Lattice) -> Result<CMat> {
    check_compatible(window, lattice)?;
    let n = window.group.size();
    let elems = lattice.elements();
    let mut out = CMat::zeros(elems.len(), n);
    for (row, z) in elems.iter().enumerate() {
        let atom = shift_matrix(lattice.group(), z) * &window.values;
        for t in 0..n {
            out[(row, t)] = atom[t].conj();
        }
    }
    Ok(out)
}

/// Synthesis map `a ↦ Σ_z a(z) π(z) g`, the adjoint of the analysis map.
pub fn synthesis_matrix(window: &Window, lattice: &Lattice) -> Result<CMat> {
    Ok(analysis_matrix(window, lattice)?.adjoint())
}

/// `S = C* C`.
pub fn frame_operator(window: &Window, lattice: &Lattice) -> Result<CMat> {
    let a = analysis_matrix(window, lattice)?;
    Ok(a.adjoint() * a)
}

/// Optimal Bessel bound: the largest eigenvalue of the frame operator.
pub fn bessel_bound_opt(window: &Window, lattice: &Lattice) -> Result<f64> {
    Ok(max_eigenvalue(&frame_operator(window, lattice)?).max(0.0))
}

/// The same bound as the squared largest singular value of the analysis
/// matrix; an independent route used as a self-check.
pub fn bessel_bound_svd(window: &Window, lattice: &Lattice) -> Result<f64> {
    let s = op_norm_svd(&analysis_matrix(window, lattice)?);
    Ok(s * s)
}
