//! Center-valued dimension of finitely generated modules.
//!
//! For generators `g_1, …, g_k` of `H_N`, the synthesis map
//! `S: L²(N)^k → H`, `(v_l) ↦ Σ_l g_l · v_l`, is right `N`-linear, so the
//! projection `p` onto `(ker S)^⊥` lies in `M_k(N)` acting on the left. Then
//! `H ≅ p L²(N)^k` and `cdim(H_N) = Σ_i E_Z(p_ii)`, with `E_Z` the
//! center-valued trace of `N`.

use alloc::vec::Vec;

use super::{LeftModule, RightModule};
use crate::algebra::{center_valued_trace, GnsSpace};
use crate::error::{Error, Result};
use crate::linalg::{c, op_norm, range_projector, trace, CMat, CVec, OrthoBasis};

const SPAN_TOL: f64 = 1e-8;

/// An element `Σ_j c_j z_j` of the center, kept in terms of the minimal
/// central projections `z_j`.
#[derive(Clone, Debug)]
pub struct CenterElement {
    coefficients: Vec<f64>,
    atoms: Vec<CMat>,
    module_atoms: Vec<CMat>,
}

impl CenterElement {
    pub fn new(coefficients: Vec<f64>, atoms: Vec<CMat>, module_atoms: Vec<CMat>) -> Self {
        CenterElement { coefficients, atoms, module_atoms }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The minimal central projections `z_j` inside the algebra.
    pub fn atoms(&self) -> &[CMat] {
        &self.atoms
    }

    /// The images of the `z_j` as operators on the module.
    pub fn module_atoms(&self) -> &[CMat] {
        &self.module_atoms
    }

    /// `Σ_j c_j z_j` in the algebra.
    pub fn element(&self) -> CMat {
        combine(&self.coefficients, &self.atoms)
    }

    /// `Σ_j c_j ρ(z_j)` on the module.
    pub fn on_module(&self) -> CMat {
        combine(&self.coefficients, &self.module_atoms)
    }

    /// Largest `|c_j|`, the operator norm of the element.
    pub fn sup_norm(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest coefficient difference, assuming the same atoms.
    pub fn max_difference(&self, other: &CenterElement) -> f64 {
        self.coefficients.iter().zip(&other.coefficients).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn combine(coeffs: &[f64], atoms: &[CMat]) -> CMat {
    let n = atoms.first().map(|a| a.nrows()).unwrap_or(0);
    let mut out = CMat::zeros(n, n);
    for (&w, a) in coeffs.iter().zip(atoms) {
        out += a * c(w, 0.0);
    }
    out
}

/// `p ∈ M_k(N)` realizing `H_N ≅ p L²(N)^k`.
#[derive(Clone, Debug)]
pub struct ModuleProjection {
    pub gns: GnsSpace,
    pub generators: Vec<CVec>,
    /// `d × kD`; column `l·D + j` is `ρ(u_j) g_l`.
    pub synthesis: CMat,
    /// `kD × kD`, the range projection of `S* S`.
    pub projection: CMat,
}

impl ModuleProjection {
    pub fn copies(&self) -> usize {
        self.generators.len()
    }

    /// `n_ii ∈ N` with `p_ii = L_{n_ii}`.
    pub fn diagonal_entry(&self, i: usize) -> CMat {
        let d = self.gns.dim();
        let block = self.projection.view((i * d, i * d), (d, d)).into_owned();
        self.gns.element(&(block * self.gns.one()))
    }
}

/// Canonical basis vectors, kept when they are not yet in the `N`-span of
/// the earlier picks.
pub fn greedy_generators(h: &RightModule, gns: &GnsSpace) -> Vec<CVec> {
    let d = h.space_dim();
    let actions: Vec<CMat> = gns.units().iter().map(|u| h.act(u)).collect();
    let mut span = OrthoBasis::new(d);
    let mut gens = Vec::new();
    for t in 0..d {
        if span.len() == d {
            break;
        }
        let mut e = CVec::zeros(d);
        e[t] = c(1.0, 0.0);
        if span.relative_distance(&e) > SPAN_TOL {
            for a in &actions {
                span.push(&(a * &e));
            }
            gens.push(e);
        }
    }
    gens
}

pub fn module_projection(h: &RightModule) -> Result<ModuleProjection> {
    let gns = GnsSpace::new(h.algebra(), h.trace())?;
    let gens = greedy_generators(h, &gns);
    module_projection_with(h, gns, gens)
}

/// Same as [`module_projection`] with caller-chosen generators; fails with
/// [`Error::Span`] when they do not generate `H`.
pub fn module_projection_with(h: &RightModule, gns: GnsSpace, generators: Vec<CVec>) -> Result<ModuleProjection> {
    let d = h.space_dim();
    let dn = gns.dim();
    let k = generators.len();
    let actions: Vec<CMat> = gns.units().iter().map(|u| h.act(u)).collect();
    let mut s = CMat::zeros(d, k * dn);
    for (l, g) in generators.iter().enumerate() {
        if g.len() != d {
            return Err(Error::ShapeMismatch { expected: d, found: g.len() });
        }
        for (j, a) in actions.iter().enumerate() {
            s.set_column(l * dn + j, &(a * g));
        }
    }
    let rank = crate::linalg::rank_of(&(0..s.ncols()).map(|j| s.column(j).into_owned()).collect::<Vec<_>>(), SPAN_TOL);
    if rank < d {
        return Err(Error::Span { rank, dim: d });
    }
    let projection = range_projector(&(s.adjoint() * &s));
    Ok(ModuleProjection { gns, generators, synthesis: s, projection })
}

fn central_coefficients(x: &CMat, atoms: &[CMat]) -> Vec<f64> {
    atoms.iter().map(|z| (trace(&(z * x)) / trace(z)).re).collect()
}

/// `cdim(H_N)` through a module projection.
pub fn cdim(h: &RightModule) -> Result<CenterElement> {
    let mp = module_projection(h)?;
    cdim_from_projection(h, &mp)
}

pub fn cdim_from_projection(h: &RightModule, mp: &ModuleProjection) -> Result<CenterElement> {
    let n = h.algebra().ambient_dim();
    let mut acc = CMat::zeros(n, n);
    for i in 0..mp.copies() {
        acc += mp.diagonal_entry(i);
    }
    let central = center_valued_trace(h.algebra())?.apply(&acc);
    let atoms = h.algebra().minimal_central_projections()?;
    let coefficients = central_coefficients(&central, &atoms);
    let module_atoms = atoms.iter().map(|z| h.act(z)).collect();
    Ok(CenterElement { coefficients, atoms, module_atoms })
}

/// `cdim(H_N)` from the block formula `c_j = rank ρ(z_j) / dim(N z_j)`.
pub fn cdim_block_formula(h: &RightModule) -> Result<CenterElement> {
    let atoms = h.algebra().minimal_central_projections()?;
    let module_atoms: Vec<CMat> = atoms.iter().map(|z| h.act(z)).collect();
    let coefficients = atoms
        .iter()
        .zip(&module_atoms)
        .map(|(z, rz)| {
            let rank = libm::round(trace(rz).re);
            rank / h.algebra().compress(z).dim() as f64
        })
        .collect();
    Ok(CenterElement { coefficients, atoms, module_atoms })
}

fn transpose_atoms(e: CenterElement) -> CenterElement {
    let CenterElement { coefficients, atoms, module_atoms } = e;
    CenterElement { coefficients, atoms: atoms.iter().map(|a| a.transpose()).collect(), module_atoms }
}

/// `cdim(_M H)`, computed on `H` as a right `M^op`-module; the atoms are
/// reported inside `M`.
pub fn cdim_left(h: &LeftModule) -> Result<CenterElement> {
    cdim(&h.as_right()).map(transpose_atoms)
}

pub fn cdim_left_block_formula(h: &LeftModule) -> Result<CenterElement> {
    cdim_block_formula(&h.as_right()).map(transpose_atoms)
}

/// `‖cdim(_M H) · cdim(H_N)‖` as an operator on `H`.
pub fn product_norm(left: &CenterElement, right: &CenterElement) -> f64 {
    op_norm(&(left.on_module() * right.on_module()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{StarAlgebra, TraceFunctional};
    use crate::linalg::identity;

    fn transpose_module(blocks: &[(usize, usize)]) -> RightModule {
        let n = StarAlgebra::block_diagonal(blocks);
        let t = TraceFunctional::matrix_trace(&n);
        RightModule::from_transpose(n, t)
    }

    #[test]
    fn column_space_of_a_matrix_algebra() {
        let h = transpose_module(&[(3, 1)]);
        let d = cdim(&h).unwrap();
        assert_eq!(d.coefficients().len(), 1);
        assert!((d.coefficients()[0] - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn standard_module_has_unit_dimension() {
        let n = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        let mut dens = identity(3);
        dens[(2, 2)] = c(4.0, 0.0);
        let t = TraceFunctional::new(&n, &dens).unwrap();
        let h = RightModule::standard(n, t).unwrap();
        let d = cdim(&h).unwrap();
        for w in d.coefficients() {
            assert!((w - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_and_block_formula_agree_with_multiplicities() {
        let h = transpose_module(&[(2, 3), (1, 2), (3, 1)]);
        let a = cdim(&h).unwrap();
        let b = cdim_block_formula(&h).unwrap();
        assert!(a.max_difference(&b) < 1e-10);
        let expected = [3.0 / 2.0, 2.0, 1.0 / 3.0];
        for (w, e) in b.coefficients().iter().zip(expected) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn non_generating_vectors_are_rejected() {
        let h = transpose_module(&[(1, 2)]);
        let gns = GnsSpace::new(h.algebra(), h.trace()).unwrap();
        let mut e = CVec::zeros(2);
        e[0] = c(1.0, 0.0);
        assert!(matches!(module_projection_with(&h, gns, alloc::vec![e]), Err(Error::Span { rank: 1, dim: 2 })));
    }
}
