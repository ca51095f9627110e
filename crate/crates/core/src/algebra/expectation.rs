//! Trace-preserving conditional expectations.

use alloc::vec::Vec;

use super::{GnsSpace, StarAlgebra, TraceFunctional};
use crate::error::{Error, Result};
use crate::linalg::{hs_inner, CMat};

const INCLUSION_TOL: f64 = 1e-10;

/// `E(n) = Σ_j κ(w_j* n) w_j` over a `κ`-orthonormal basis `w_j` of the
/// subalgebra.
#[derive(Clone, Debug)]
pub struct ConditionalExpectation {
    units: Vec<CMat>,
    density: CMat,
}

impl ConditionalExpectation {
    pub fn apply(&self, x: &CMat) -> CMat {
        let moved = x * &self.density;
        let mut out = CMat::zeros(x.nrows(), x.ncols());
        for u in &self.units {
            out += u * hs_inner(&moved, u);
        }
        out
    }
}

/// The `κ`-preserving conditional expectation from `big` onto `small`.
pub fn conditional_expectation(
    big: &StarAlgebra,
    small: &StarAlgebra,
    kappa: &TraceFunctional,
) -> Result<ConditionalExpectation> {
    let residual = big.containment_defect(small);
    if residual > INCLUSION_TOL {
        return Err(Error::Inclusion { residual });
    }
    let restricted = kappa.restrict(small);
    let space = GnsSpace::new(small, &restricted)?;
    Ok(ConditionalExpectation { units: space.units().to_vec(), density: kappa.density().clone() })
}

/// Expectation onto the center; it does not depend on the choice of faithful
/// trace, so the ambient matrix trace is used.
pub fn center_valued_trace(alg: &StarAlgebra) -> Result<ConditionalExpectation> {
    let z = alg.center()?;
    conditional_expectation(alg, &z, &TraceFunctional::matrix_trace(alg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fro_norm, identity, trace};
    use crate::rng::rng_from_seed;

    #[test]
    fn center_valued_trace_matches_block_averages() {
        let a = StarAlgebra::block_diagonal(&[(2, 1), (1, 2)]);
        let e = center_valued_trace(&a).unwrap();
        let ps = a.minimal_central_projections().unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..5 {
            let x = a.random_element(&mut rng);
            let mut expect = CMat::zeros(4, 4);
            for p in &ps {
                expect += p * (trace(&(p * &x)) / trace(p));
            }
            assert!(fro_norm(&(e.apply(&x) - expect)) < 1e-10);
        }
    }

    #[test]
    fn expectation_is_bimodular_and_trace_preserving() {
        let big = StarAlgebra::full(3);
        let small = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        let kappa = TraceFunctional::matrix_trace(&big);
        let e = conditional_expectation(&big, &small, &kappa).unwrap();
        let mut rng = rng_from_seed(4);
        let x = big.random_element(&mut rng);
        let b1 = small.random_element(&mut rng);
        let b2 = small.random_element(&mut rng);
        let lhs = e.apply(&(&b1 * &x * &b2));
        let rhs = &b1 * e.apply(&x) * &b2;
        assert!(fro_norm(&(lhs - rhs)) < 1e-10);
        assert!((kappa.eval(&e.apply(&x)) - kappa.eval(&x)).norm() < 1e-10);
        assert!(fro_norm(&(e.apply(&b1) - &b1)) < 1e-10);
        assert!(fro_norm(&(e.apply(&identity(3)) - identity(3))) < 1e-10);
    }

    #[test]
    fn non_inclusion_is_reported() {
        let big = StarAlgebra::diagonal(2);
        let small = StarAlgebra::full(2);
        let kappa = TraceFunctional::matrix_trace(&big);
        assert!(matches!(conditional_expectation(&big, &small, &kappa), Err(Error::Inclusion { .. })));
    }
}
