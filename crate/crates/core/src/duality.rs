//! `L²(G)` as a bimodule over the twisted group algebras of `Δ` and `Δ°`,
//! and the checks relating Bessel bounds over the two lattices.
//!
//! `M = span{π(z) : z ∈ Δ}` acts on the left with `τ(π(z)) = [z = 0]`.
//! `N = span{π(w)ᵀ : w ∈ Δ°}` acts on the right through `ρ(x) = xᵀ`, so
//! `ρ(π(w)ᵀ) = π(w)`, with `κ(π(w)ᵀ) = covol(Δ)·[w = 0]`. `N` is a copy of
//! the twisted group algebra of `Δ°` for the opposite cocycle.

use alloc::vec::Vec;
use num_rational::Ratio;

use crate::algebra::{StarAlgebra, TraceFunctional};
use crate::bimodule::Bimodule;
use crate::check::{Check, Tolerance};
use crate::error::{Error, Result};
use crate::gabor::{bessel_bound_opt, tf_shift, Window};
use crate::groups::{adjoint_lattice, covolume, Lattice};
use crate::linalg::{c, identity, op_norm, CMat};
use crate::vnmod::{cdim, cdim_block_formula, cdim_left, cdim_left_block_formula, LeftModule, RightModule};

/// Default cap on `|G|` for building the Gabor bimodule.
pub const DEFAULT_GABOR_CAP: usize = 16;

#[derive(Clone, Debug)]
pub struct GaborBimodule {
    pub lattice: Lattice,
    pub adjoint: Lattice,
    pub covolume: Ratio<u64>,
    pub bimodule: Bimodule,
}

/// `span{π(z)/√|G| : z ∈ lattice}`, already orthonormal.
pub fn shift_algebra(lattice: &Lattice) -> Result<StarAlgebra> {
    let n = lattice.group().size();
    let scale = c(1.0 / libm::sqrt(n as f64), 0.0);
    let shifts = shifts(lattice)?.into_iter().map(|s| s * scale).collect::<Vec<_>>();
    StarAlgebra::from_spanning(n, &shifts)
}

fn shifts(lattice: &Lattice) -> Result<Vec<CMat>> {
    lattice.elements().iter().map(|z| tf_shift(lattice.group(), z)).collect()
}

pub fn gabor_bimodule(lattice: &Lattice, cap: usize) -> Result<GaborBimodule> {
    let n = lattice.group().size();
    if n > cap {
        return Err(Error::ResourceLimit { what: "group order", limit: cap, requested: n });
    }
    let adjoint = adjoint_lattice(lattice);
    let m_alg = shift_algebra(lattice)?;
    let tau = TraceFunctional::new(&m_alg, &(identity(n) / c(n as f64, 0.0)))?;
    let left = LeftModule::from_inclusion(m_alg, tau);

    let n_alg = shift_algebra(&adjoint)?.transpose();
    let kappa = TraceFunctional::new(&n_alg, &(identity(n) / c(lattice.size() as f64, 0.0)))?;
    let right = RightModule::from_transpose(n_alg, kappa);

    let bimodule = Bimodule::new(left, right)?;
    Ok(GaborBimodule { lattice: lattice.clone(), covolume: covolume(lattice), adjoint, bimodule })
}

impl GaborBimodule {
    pub fn covolume_f64(&self) -> f64 {
        *self.covolume.numer() as f64 / *self.covolume.denom() as f64
    }

    /// `B`, `B°` and the identities `B° = covol·B`, `‖R_g‖² = B`,
    /// `covol·‖L_g‖² = B°`.
    pub fn bessel_duality(&self, g: &Window, tol: f64) -> Result<BesselDualityReport> {
        let bound = bessel_bound_opt(g, &self.lattice)?;
        let dual_bound = bessel_bound_opt(g, &self.adjoint)?;
        let covol = self.covolume_f64();
        let right = op_norm(&self.bimodule.right_bounded_operator(g.values()));
        let left = op_norm(&self.bimodule.left_bounded_operator(g.values()));
        let right_sq = right * right;
        let left_sq = left * left;
        let checks = alloc::vec![
            Check::scaled("dual bound = covol·B", dual_bound, covol * bound, bound, tol),
            Check::relative("‖R_g‖² = B", right_sq, bound, tol),
            Check::relative("covol·‖L_g‖² = B°", covol * left_sq, dual_bound, tol),
        ];
        Ok(BesselDualityReport {
            bound,
            dual_bound,
            covolume: covol,
            right_norm_sq: right_sq,
            left_norm_sq: left_sq,
            checks,
        })
    }

    /// `cdim(_M L²(G)) = covol(Δ)` and `cdim(L²(G)_N) = 1/covol(Δ)` on every
    /// block, both cdim routes, and their product is the identity.
    pub fn cdim_checks(&self, tol: &Tolerance) -> Result<Vec<Check>> {
        let covol = self.covolume_f64();
        let left = cdim_left(self.bimodule.left())?;
        let left_blocks = cdim_left_block_formula(self.bimodule.left())?;
        let right = cdim(self.bimodule.right())?;
        let right_blocks = cdim_block_formula(self.bimodule.right())?;
        let mut checks = Vec::new();
        let target = 1.0 / covol;
        checks.push(Check::absolute("cdim(_M H) = covol", farthest(left.coefficients(), covol), covol, tol.dimension));
        checks.push(Check::absolute(
            "cdim(H_N) = 1/covol",
            farthest(right.coefficients(), target),
            target,
            tol.dimension,
        ));
        checks.push(Check::residual("cdim(_M H) routes agree", left.max_difference(&left_blocks), tol.dimension));
        checks.push(Check::residual("cdim(H_N) routes agree", right.max_difference(&right_blocks), tol.dimension));
        let product = left.on_module() * right.on_module();
        let n = product.nrows();
        checks.push(Check::residual("cdim(_M H)·cdim(H_N) = 1", op_norm(&(product - identity(n))), tol.dimension));
        Ok(checks)
    }

    /// `alg(π(Δ))' = alg(π(Δ°))`, both containments.
    pub fn commutant_checks(&self, tol: &Tolerance) -> Result<Vec<Check>> {
        let m = self.bimodule.left().image_algebra()?;
        let dual = self.bimodule.right().image_algebra()?;
        let comm = m.commutant()?;
        Ok(alloc::vec![
            Check::absolute("dim alg(π(Δ))' = |Δ°|", comm.dim() as f64, self.adjoint.size() as f64, 0.0),
            Check::residual("alg(π(Δ°)) ⊆ alg(π(Δ))'", comm.containment_defect(&dual), tol.span),
            Check::residual("alg(π(Δ))' ⊆ alg(π(Δ°))", dual.containment_defect(&comm), tol.span),
        ])
    }
}

/// The coefficient farthest from `target`.
fn farthest(coeffs: &[f64], target: f64) -> f64 {
    coeffs.iter().copied().fold(target, |best, w| if (w - target).abs() > (best - target).abs() { w } else { best })
}

#[derive(Clone, Debug)]
pub struct BesselDualityReport {
    pub bound: f64,
    pub dual_bound: f64,
    pub covolume: f64,
    pub right_norm_sq: f64,
    pub left_norm_sq: f64,
    pub checks: Vec<Check>,
}

impl BesselDualityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify_commutant(lattice: &Lattice, tol: &Tolerance) -> Result<Vec<Check>> {
    gabor_bimodule(lattice, DEFAULT_GABOR_CAP)?.commutant_checks(tol)
}

pub fn verify_cdim_covolume(lattice: &Lattice, tol: &Tolerance) -> Result<Vec<Check>> {
    gabor_bimodule(lattice, DEFAULT_GABOR_CAP)?.cdim_checks(tol)
}

pub fn verify_bessel_duality(g: &Window, lattice: &Lattice, tol: f64) -> Result<BesselDualityReport> {
    if g.group() != lattice.group() {
        return Err(Error::ShapeMismatch { expected: lattice.group().size(), found: g.group().size() });
    }
    gabor_bimodule(lattice, DEFAULT_GABOR_CAP)?.bessel_duality(g, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{lattice_from_generators, FiniteAbelianGroup, PhasePoint, PhaseSpace};

    fn z4_lattice(gens: &[(u64, u64)]) -> Lattice {
        let s = PhaseSpace::new(FiniteAbelianGroup::cyclic(4).unwrap());
        let gens: Vec<PhasePoint> =
            gens.iter().map(|&(x, w)| PhasePoint::new(alloc::vec![x], alloc::vec![w])).collect();
        lattice_from_generators(&s, &gens).unwrap()
    }

    #[test]
    fn algebra_dimensions_for_reference_lattices() {
        let trivial = gabor_bimodule(&z4_lattice(&[]), DEFAULT_GABOR_CAP).unwrap();
        assert_eq!(trivial.bimodule.left().algebra().dim(), 1);
        assert_eq!(trivial.bimodule.right().algebra().dim(), 16);
        let full = gabor_bimodule(&z4_lattice(&[(1, 0), (0, 1)]), DEFAULT_GABOR_CAP).unwrap();
        assert_eq!(full.bimodule.left().algebra().dim(), 16);
        assert_eq!(full.bimodule.right().algebra().dim(), 1);
        let quarter = gabor_bimodule(&z4_lattice(&[(2, 0), (0, 2)]), DEFAULT_GABOR_CAP).unwrap();
        assert_eq!(quarter.bimodule.left().algebra().dim(), 4);
        assert_eq!(quarter.bimodule.right().algebra().dim(), 4);
    }

    #[test]
    fn reference_lattices_pass_commutant_and_cdim_checks() {
        let tol = Tolerance::default();
        for gens in [&[][..], &[(1, 0), (0, 1)], &[(2, 0), (0, 2)], &[(2, 0), (0, 1)]] {
            let l = z4_lattice(gens);
            assert!(verify_commutant(&l, &tol).unwrap().iter().all(|c| c.passed), "{gens:?}");
            let checks = verify_cdim_covolume(&l, &tol).unwrap();
            assert!(checks.iter().all(|c| c.passed), "{gens:?}: {checks:?}");
        }
    }

    #[test]
    fn bessel_duality_examples() {
        let g = Window::delta0(FiniteAbelianGroup::cyclic(4).unwrap());
        let full = verify_bessel_duality(&g, &z4_lattice(&[(1, 0), (0, 1)]), 1e-8).unwrap();
        assert!((full.bound - 4.0).abs() < 1e-12 && (full.dual_bound - 1.0).abs() < 1e-12);
        assert!(full.passed());
        let half = verify_bessel_duality(&g, &z4_lattice(&[(2, 0), (0, 1)]), 1e-8).unwrap();
        assert!((half.bound - 4.0).abs() < 1e-12 && (half.dual_bound - 2.0).abs() < 1e-12);
        assert!((half.right_norm_sq - 4.0).abs() < 1e-10);
        assert!((half.left_norm_sq - 4.0).abs() < 1e-10);
        assert!(half.passed());
        let zero = Window::zeros(FiniteAbelianGroup::cyclic(4).unwrap());
        let r = verify_bessel_duality(&zero, &z4_lattice(&[(2, 0)]), 1e-8).unwrap();
        assert_eq!(r.bound, 0.0);
        assert!(r.passed());
    }

    #[test]
    fn gabor_traces_are_aligned_and_scaling_breaks_it() {
        let gb = gabor_bimodule(&z4_lattice(&[(2, 0), (0, 1)]), DEFAULT_GABOR_CAP).unwrap();
        assert!(gb.bimodule.check_alignment().unwrap().aligned);
        assert!(gb.bimodule.is_commutant_case().unwrap());
        let off = gb.bimodule.with_scaled_right_trace(2.0).unwrap();
        assert!(!off.check_alignment().unwrap().aligned);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(gabor_bimodule(&z4_lattice(&[]), 3), Err(Error::ResourceLimit { .. })));
    }
}
