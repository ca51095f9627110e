//! Jones projections and the basic construction `⟨N, e_B⟩` on `L²(N, κ)`.

use alloc::format;
use alloc::vec::Vec;

use super::cdim::CenterElement;
use super::induced::induced_trace_on;
use super::{cdim, module_projection, BoundedOperatorMap, RightModule};
use crate::algebra::{
    center_valued_trace, conditional_expectation, ConditionalExpectation, GnsSpace, StarAlgebra, TraceFunctional,
};
use crate::error::{Error, Result};
use crate::linalg::{fro_norm, CMat};
use crate::rng::{derive_seed, rng_from_seed};

const INCLUSION_TOL: f64 = 1e-10;

/// A unital inclusion `B ⊆ N` with a faithful trace `κ` on `N`.
#[derive(Clone, Debug)]
pub struct Inclusion {
    big: StarAlgebra,
    small: StarAlgebra,
    trace: TraceFunctional,
    gns: GnsSpace,
}

impl Inclusion {
    pub fn new(big: StarAlgebra, small: StarAlgebra, trace: TraceFunctional) -> Result<Self> {
        let residual = big.containment_defect(&small);
        if residual > INCLUSION_TOL {
            return Err(Error::Inclusion { residual });
        }
        let gns = GnsSpace::new(&big, &trace)?;
        Ok(Inclusion { big, small, trace, gns })
    }

    pub fn big(&self) -> &StarAlgebra {
        &self.big
    }

    pub fn small(&self) -> &StarAlgebra {
        &self.small
    }

    pub fn trace(&self) -> &TraceFunctional {
        &self.trace
    }

    pub fn gns(&self) -> &GnsSpace {
        &self.gns
    }

    /// `e_B`, the orthogonal projection of `L²(N)` onto `L²(B)`.
    pub fn jones_projection(&self) -> Result<CMat> {
        let sub = GnsSpace::new(&self.small, &self.trace.restrict(&self.small))?;
        let d = self.gns.dim();
        let mut e = CMat::zeros(d, d);
        for w in sub.units() {
            let v = self.gns.coords(w);
            e += &v * v.adjoint();
        }
        Ok(e)
    }

    /// `E_B`, the `κ`-preserving conditional expectation.
    pub fn expectation(&self) -> Result<ConditionalExpectation> {
        conditional_expectation(&self.big, &self.small, &self.trace)
    }

    /// Left multiplication by `n` on `L²(N)`.
    pub fn left(&self, n: &CMat) -> CMat {
        self.gns.left_action(n)
    }

    /// `L²(N)` as a right `B`-module.
    pub fn standard_over_small(&self) -> Result<RightModule> {
        RightModule::standard(self.big.clone(), self.trace.clone())?.restrict(&self.small)
    }

    /// How far `Z(B)` and `Z(N)` are from being equal.
    pub fn center_defect(&self) -> Result<f64> {
        let zb = self.small.center()?;
        let zn = self.big.center()?;
        if zb.dim() != zn.dim() {
            return Ok(f64::INFINITY);
        }
        Ok(zb.containment_defect(&zn).max(zn.containment_defect(&zb)))
    }

    fn require_matching_centers(&self) -> Result<()> {
        let defect = self.center_defect()?;
        if defect > 1e-8 {
            return Err(Error::Precondition { detail: format!("centers of B and N differ (defect {defect:e})") });
        }
        Ok(())
    }

    /// Largest deviation in `cdim(H_B) = cdim(L²(N)_B) · cdim(H_N)`, as
    /// operators on `H`. `h` must be a right `N`-module; needs `Z(B) = Z(N)`.
    pub fn coefficient_change_defect(&self, h: &RightModule) -> Result<f64> {
        self.require_matching_centers()?;
        let over_small = cdim(&h.restrict(&self.small)?)?;
        let over_big = cdim(h)?;
        let standard = cdim(&self.standard_over_small()?)?;
        let product = h.act(&standard.element()) * over_big.on_module();
        Ok(crate::linalg::op_norm(&(over_small.on_module() - product)))
    }

    /// `L_f^N` and `L_f^B` on `H = L²(N, κ)`, with the constant
    /// `‖cdim(L²(N)_B)‖_∞`. Needs `Z(B) = Z(N)`.
    pub fn subalgebra_bound(&self) -> Result<SubalgebraBound> {
        self.require_matching_centers()?;
        let standard = RightModule::standard(self.big.clone(), self.trace.clone())?;
        let over_small = standard.restrict(&self.small)?;
        let constant = cdim(&over_small)?.sup_norm();
        Ok(SubalgebraBound {
            over_big: BoundedOperatorMap::for_right(&standard)?,
            over_small: BoundedOperatorMap::for_right(&over_small)?,
            constant,
        })
    }

    pub fn basic_construction(&self, seed: u64) -> Result<BasicConstruction> {
        BasicConstruction::new(self.clone(), seed)
    }
}

#[derive(Clone, Debug)]
pub struct SubalgebraBound {
    over_big: BoundedOperatorMap,
    over_small: BoundedOperatorMap,
    constant: f64,
}

impl SubalgebraBound {
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// `(‖L_f^N‖, ‖L_f^B‖)` for `f ∈ L²(N)` in GNS coordinates.
    pub fn norms(&self, f: &crate::linalg::CVec) -> (f64, f64) {
        (self.over_big.norm(f), self.over_small.norm(f))
    }

    /// `constant·‖L_f^B‖ − ‖L_f^N‖`; never negative up to rounding.
    pub fn slack(&self, f: &crate::linalg::CVec) -> f64 {
        let (big, small) = self.norms(f);
        self.constant * small - big
    }
}

/// `e_B` for `B ⊆ N`, acting on `L²(N, κ)`.
pub fn jones_projection(big: &StarAlgebra, small: &StarAlgebra, trace: &TraceFunctional) -> Result<CMat> {
    Inclusion::new(big.clone(), small.clone(), trace.clone())?.jones_projection()
}

/// `B̃ = ⟨N, e_B⟩` with the trace induced from `L²(N)_B`.
#[derive(Clone, Debug)]
pub struct BasicConstruction {
    inclusion: Inclusion,
    jones: CMat,
    algebra: StarAlgebra,
    left_copy: StarAlgebra,
    module: RightModule,
    dimension: CenterElement,
    trace: TraceFunctional,
    onto_big: ConditionalExpectation,
}

impl BasicConstruction {
    fn new(inclusion: Inclusion, seed: u64) -> Result<Self> {
        let jones = inclusion.jones_projection()?;
        let d = inclusion.gns.dim();
        let lefts: Vec<CMat> = inclusion.big.basis().iter().map(|b| inclusion.left(b)).collect();
        let left_copy = StarAlgebra::from_spanning(d, &lefts)?;
        let mut rng = rng_from_seed(derive_seed(seed, "basic-construction", 0, 0));
        let mut gens = Vec::new();
        for _ in 0..2 {
            gens.push(inclusion.left(&inclusion.big.random_element(&mut rng)));
        }
        gens.push(jones.clone());
        let algebra = StarAlgebra::generate(d, &gens)?;
        let residual = algebra.containment_defect(&left_copy);
        if residual > 1e-8 {
            return Err(Error::Inclusion { residual });
        }
        let module = inclusion.standard_over_small()?;
        let mp = module_projection(&module)?;
        let dimension = super::cdim::cdim_from_projection(&module, &mp)?;
        let induced = induced_trace_on(&mp, algebra.clone())?;
        let onto_big = conditional_expectation(&algebra, &left_copy, &induced.trace)?;
        Ok(BasicConstruction {
            inclusion,
            jones,
            algebra,
            left_copy,
            module,
            dimension,
            trace: induced.trace,
            onto_big,
        })
    }

    pub fn inclusion(&self) -> &Inclusion {
        &self.inclusion
    }

    pub fn jones(&self) -> &CMat {
        &self.jones
    }

    /// `B̃` as an algebra on `L²(N)`.
    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    /// `N` acting on the left of `L²(N)`.
    pub fn left_copy(&self) -> &StarAlgebra {
        &self.left_copy
    }

    /// `L²(N)_B`.
    pub fn module(&self) -> &RightModule {
        &self.module
    }

    /// `cdim(L²(N)_B)`, an element of `Z(B)`.
    pub fn dimension(&self) -> &CenterElement {
        &self.dimension
    }

    /// The induced trace on `B̃`.
    pub fn trace(&self) -> &TraceFunctional {
        &self.trace
    }

    /// `span{n₁ e_B n₂}`.
    pub fn span_n_e_n(&self) -> Result<StarAlgebra> {
        let lefts: Vec<CMat> = self.inclusion.gns.units().iter().map(|u| self.inclusion.left(u)).collect();
        let mut elements = Vec::with_capacity(lefts.len() * lefts.len());
        for a in &lefts {
            let ae = a * &self.jones;
            for b in &lefts {
                elements.push(&ae * b);
            }
        }
        StarAlgebra::from_spanning(self.jones.nrows(), &elements)
    }

    /// The commutant of the right `B`-action on `L²(N)`.
    pub fn right_commutant(&self) -> Result<StarAlgebra> {
        self.module.commutant()
    }

    /// Deviation in `cdim(L²(N)_B) · E_Z^{B̃}(n₁ e_B n₂) = E_Z^N(n₁ n₂)`,
    /// compared as operators on `L²(N)`.
    pub fn center_trace_defects(&self, pairs: &[(CMat, CMat)]) -> Result<Vec<f64>> {
        let ez_tilde = center_valued_trace(&self.algebra)?;
        let ez_big = center_valued_trace(&self.inclusion.big)?;
        let z = self.dimension.on_module();
        Ok(pairs
            .iter()
            .map(|(n1, n2)| {
                let x = self.inclusion.left(n1) * &self.jones * self.inclusion.left(n2);
                let lhs = &z * ez_tilde.apply(&x);
                let rhs = self.inclusion.left(&ez_big.apply(&(n1 * n2)));
                fro_norm(&(lhs - rhs))
            })
            .collect())
    }

    /// The unique `n ∈ N` with `a e_B = n e_B`, namely
    /// `n = cdim(L²(N)_B) · E_N^{B̃}(a e_B)` read off at `1̂`. Requires
    /// `Z(B) = Z(N)`.
    pub fn push_down(&self, a: &CMat) -> Result<CMat> {
        self.inclusion.require_matching_centers()?;
        if self.dimension.coefficients().iter().any(|&w| w <= 0.0) {
            return Err(Error::Precondition { detail: "cdim(L²(N)_B) is not invertible".into() });
        }
        let x = self.dimension.on_module() * self.onto_big.apply(&(a * &self.jones));
        Ok(self.inclusion.gns.element(&(x * self.inclusion.gns.one())))
    }

    /// `‖a e_B − n e_B‖` for `n = push_down(a)`.
    pub fn push_down_residual(&self, a: &CMat) -> Result<f64> {
        let n = self.push_down(a)?;
        Ok(fro_norm(&(a * &self.jones - self.inclusion.left(&n) * &self.jones)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity};

    fn inclusion(blocks_big: &[(usize, usize)], small: StarAlgebra) -> Inclusion {
        let big = StarAlgebra::block_diagonal(blocks_big);
        let t = TraceFunctional::matrix_trace(&big);
        Inclusion::new(big, small, t).unwrap()
    }

    #[test]
    fn jones_projection_is_a_projection_onto_the_subalgebra() {
        let inc = inclusion(&[(2, 1)], StarAlgebra::diagonal(2));
        let e = inc.jones_projection().unwrap();
        assert!(fro_norm(&(&e * &e - &e)) < 1e-12);
        assert!((crate::linalg::trace(&e) - c(2.0, 0.0)).norm() < 1e-12);
        let exp = inc.expectation().unwrap();
        let x = inc.big().basis()[1].clone() + inc.big().basis()[0].clone();
        let lhs = &e * inc.gns().coords(&x);
        let rhs = inc.gns().coords(&exp.apply(&x));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn basic_construction_of_scalars_in_a_matrix_algebra() {
        let inc = inclusion(&[(2, 1)], StarAlgebra::scalars(2));
        let bc = inc.basic_construction(1).unwrap();
        assert_eq!(bc.algebra().dim(), 16);
        assert!((bc.dimension().coefficients()[0] - 4.0).abs() < 1e-10);
        assert!(bc.span_n_e_n().unwrap().same_span(&bc.right_commutant().unwrap(), 1e-10));
        let mut rng = rng_from_seed(9);
        let a = bc.algebra().random_element(&mut rng);
        assert!(bc.push_down_residual(&a).unwrap() < 1e-9);
        let n1 = inc.big().random_element(&mut rng);
        let n2 = inc.big().random_element(&mut rng);
        assert!(bc.center_trace_defects(&[(n1, n2)]).unwrap()[0] < 1e-9);
    }

    #[test]
    fn subalgebra_bound_for_a_tensor_factor() {
        let big = StarAlgebra::full(4);
        let small = StarAlgebra::full(2).tensor_identity(2);
        let t = TraceFunctional::matrix_trace(&big);
        let inc = Inclusion::new(big, small, t).unwrap();
        let bound = inc.subalgebra_bound().unwrap();
        assert!((bound.constant() - 4.0).abs() < 1e-9);
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let f = crate::linalg::gaussian_vector(&mut rng, inc.gns().dim());
            assert!(bound.slack(&f) > -1e-9);
        }
        let h = RightModule::from_transpose(inc.big().clone(), inc.trace().clone());
        assert!(inc.coefficient_change_defect(&h).unwrap() < 1e-9);
    }

    #[test]
    fn push_down_refuses_mismatched_centers() {
        let inc = inclusion(&[(1, 1), (1, 1)], StarAlgebra::scalars(2));
        let bc = inc.basic_construction(1).unwrap();
        assert!(matches!(bc.push_down(&identity(2)), Err(Error::Precondition { .. })));
    }
}
