//! Faithful positive traces on a [`StarAlgebra`].

use alloc::format;

use super::StarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{c, commutator, eigh, fro_norm, hs_inner, identity, trace, CMat, C64};

const TRACIAL_TOL: f64 = 1e-10;
const FAITHFUL_TOL: f64 = 1e-10;

/// `τ(x) = Tr(D x)` for a density `D` inside the algebra.
///
/// The density is central and positive definite on the algebra exactly when
/// `τ` is tracial and faithful; both are checked on construction.
#[derive(Clone, Debug)]
pub struct TraceFunctional {
    density: CMat,
}

impl TraceFunctional {
    /// Projects `density` onto the algebra and validates the result.
    pub fn new(alg: &StarAlgebra, density: &CMat) -> Result<Self> {
        if density.nrows() != alg.ambient_dim() || density.ncols() != alg.ambient_dim() {
            return Err(Error::ShapeMismatch { expected: alg.ambient_dim(), found: density.nrows() });
        }
        let t = TraceFunctional { density: alg.project(density) };
        t.validate(alg)?;
        Ok(t)
    }

    /// The functional with `τ(b_i) = values[i]` on the algebra's basis.
    pub fn from_values(alg: &StarAlgebra, values: &[C64]) -> Result<Self> {
        if values.len() != alg.dim() {
            return Err(Error::ShapeMismatch { expected: alg.dim(), found: values.len() });
        }
        let mut d = CMat::zeros(alg.ambient_dim(), alg.ambient_dim());
        for (b, &v) in alg.basis().iter().zip(values) {
            d += b.adjoint() * v;
        }
        let t = TraceFunctional { density: d };
        t.validate(alg)?;
        Ok(t)
    }

    /// The ambient matrix trace restricted to the algebra.
    pub fn matrix_trace(alg: &StarAlgebra) -> Self {
        TraceFunctional { density: identity(alg.ambient_dim()) }
    }

    /// `Tr / n`, the normalized ambient trace.
    pub fn normalized(alg: &StarAlgebra) -> Self {
        let n = alg.ambient_dim();
        TraceFunctional { density: identity(n) / c(n as f64, 0.0) }
    }

    /// Wraps a density already known to be central, positive and inside
    /// the algebra.
    pub(crate) fn from_density_unchecked(density: CMat) -> Self {
        TraceFunctional { density }
    }

    pub fn density(&self) -> &CMat {
        &self.density
    }

    pub fn eval(&self, x: &CMat) -> C64 {
        trace(&(&self.density * x))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TraceFunctional { density: &self.density * c(factor, 0.0) }
    }

    /// The same functional on a subalgebra.
    pub fn restrict(&self, sub: &StarAlgebra) -> Self {
        TraceFunctional { density: sub.project(&self.density) }
    }

    /// `G[j][i] = τ(b_j* b_i)`, the Gram matrix of the basis for
    /// `⟨x, y⟩ = τ(y* x)`.
    pub fn gram(&self, alg: &StarAlgebra) -> CMat {
        let dim = alg.dim();
        let moved: alloc::vec::Vec<CMat> = alg.basis().iter().map(|b| b * &self.density).collect();
        let mut g = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                g[(j, i)] = hs_inner(&moved[i], &alg.basis()[j]);
            }
        }
        g
    }

    /// Largest `‖[D, b_i]‖`; zero exactly when `τ(xy) = τ(yx)` on the
    /// algebra.
    pub fn tracial_defect(&self, alg: &StarAlgebra) -> f64 {
        alg.basis().iter().map(|b| fro_norm(&commutator(&self.density, b))).fold(0.0, f64::max)
    }

    pub fn validate(&self, alg: &StarAlgebra) -> Result<()> {
        let scale = fro_norm(&self.density).max(f64::MIN_POSITIVE);
        let defect = self.tracial_defect(alg) / scale.max(1.0);
        if defect > TRACIAL_TOL {
            return Err(Error::NotTracial { deviation: defect });
        }
        let g = self.gram(alg);
        let hermitian = fro_norm(&(&g - g.adjoint()));
        if hermitian > TRACIAL_TOL * fro_norm(&g).max(1.0) {
            return Err(Error::Precondition { detail: format!("trace is not self-adjoint (defect {hermitian:e})") });
        }
        let (vals, _) = eigh(&g);
        let lo = vals.first().copied().unwrap_or(0.0);
        let hi = vals.last().copied().unwrap_or(0.0);
        if hi.is_nan() || hi <= 0.0 || lo <= FAITHFUL_TOL * hi {
            return Err(Error::NotFaithful { min_eigenvalue: lo });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn matrix_trace_is_faithful_and_tracial() {
        let a = StarAlgebra::full(3);
        let t = TraceFunctional::matrix_trace(&a);
        t.validate(&a).unwrap();
        let x = a.basis()[1].clone();
        let y = a.basis()[3].clone();
        assert!((t.eval(&(&x * &y)) - t.eval(&(&y * &x))).norm() < 1e-14);
    }

    #[test]
    fn weighted_block_trace_is_accepted() {
        let a = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        let mut d = identity(3);
        d[(2, 2)] = c(5.0, 0.0);
        TraceFunctional::new(&a, &d).unwrap();
    }

    #[test]
    fn non_tracial_density_is_rejected() {
        let a = StarAlgebra::full(2);
        let mut d = identity(2);
        d[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(TraceFunctional::new(&a, &d), Err(Error::NotTracial { .. })));
    }

    #[test]
    fn degenerate_weight_is_rejected() {
        let a = StarAlgebra::diagonal(2);
        let d = CMat::from_diagonal(&crate::CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
        assert!(matches!(TraceFunctional::new(&a, &d), Err(Error::NotFaithful { .. })));
    }

    #[test]
    fn values_round_trip() {
        let a = StarAlgebra::block_diagonal(&[(1, 2), (1, 1)]);
        let t = TraceFunctional::normalized(&a);
        let values: alloc::vec::Vec<C64> = a.basis().iter().map(|b| t.eval(b)).collect();
        let again = TraceFunctional::from_values(&a, &values).unwrap();
        for b in a.basis() {
            assert!((again.eval(b) - t.eval(b)).norm() < 1e-14);
        }
    }
}
