//! The GNS space `L²(A, τ)` with `⟨x̂, ŷ⟩ = τ(y* x)`.
//!
//! Vectors are coordinates in a `τ`-orthonormal basis `u_1, …, u_d` of `A`,
//! obtained from the Cholesky factor of the Gram matrix.

use alloc::vec::Vec;

use super::{StarAlgebra, TraceFunctional};
use crate::error::{Error, Result};
use crate::linalg::{hs_inner, identity, CMat, CVec};

#[derive(Clone, Debug)]
pub struct GnsSpace {
    n: usize,
    units: Vec<CMat>,
    density: CMat,
    conjugation: CMat,
}

pub fn gns(alg: &StarAlgebra, trace: &TraceFunctional) -> Result<GnsSpace> {
    GnsSpace::new(alg, trace)
}

impl GnsSpace {
    pub fn new(alg: &StarAlgebra, trace: &TraceFunctional) -> Result<Self> {
        let dim = alg.dim();
        let g = trace.gram(alg);
        let chol = g.cholesky().ok_or(Error::NotFaithful { min_eigenvalue: 0.0 })?;
        let l = chol.l();
        // Columns of L^{-H} are the coefficient vectors of the orthonormal basis.
        let linv_h =
            l.adjoint().solve_upper_triangular(&identity(dim)).ok_or(Error::NotFaithful { min_eigenvalue: 0.0 })?;
        let units: Vec<CMat> = (0..dim)
            .map(|k| {
                let coeffs: Vec<crate::C64> = linv_h.column(k).iter().copied().collect();
                alg.from_coordinates(&coeffs)
            })
            .collect();
        let mut space = GnsSpace {
            n: alg.ambient_dim(),
            units,
            density: trace.density().clone(),
            conjugation: CMat::zeros(dim, dim),
        };
        let mut j = CMat::zeros(dim, dim);
        for (k, u) in space.units.iter().enumerate() {
            j.set_column(k, &space.coords(&u.adjoint()));
        }
        space.conjugation = j;
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.units.len()
    }

    /// The `τ`-orthonormal basis.
    pub fn units(&self) -> &[CMat] {
        &self.units
    }

    /// `x ↦ x̂`, coordinates `τ(u_k* x)`.
    pub fn coords(&self, x: &CMat) -> CVec {
        let moved = x * &self.density;
        CVec::from_iterator(self.units.len(), self.units.iter().map(|u| hs_inner(&moved, u)))
    }

    /// Inverse of [`GnsSpace::coords`].
    pub fn element(&self, v: &CVec) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (u, &w) in self.units.iter().zip(v.iter()) {
            out += u * w;
        }
        out
    }

    /// `1̂`.
    pub fn one(&self) -> CVec {
        self.coords(&identity(self.n))
    }

    /// Left multiplication `ŷ ↦ (xy)^`.
    pub fn left_action(&self, x: &CMat) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (j, u) in self.units.iter().enumerate() {
            out.set_column(j, &self.coords(&(x * u)));
        }
        out
    }

    /// Right multiplication `ŷ ↦ (yx)^`.
    pub fn right_action(&self, x: &CMat) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (j, u) in self.units.iter().enumerate() {
            out.set_column(j, &self.coords(&(u * x)));
        }
        out
    }

    /// The antiunitary `J x̂ = (x*)^`.
    pub fn conjugate(&self, v: &CVec) -> CVec {
        &self.conjugation * v.conjugate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, fro_norm};
    use crate::rng::rng_from_seed;

    fn weighted() -> (StarAlgebra, TraceFunctional) {
        let a = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        let mut d = identity(3);
        d[(2, 2)] = c(3.0, 0.0);
        let t = TraceFunctional::new(&a, &d).unwrap();
        (a, t)
    }

    #[test]
    fn inner_product_matches_trace() {
        let (a, t) = weighted();
        let h = GnsSpace::new(&a, &t).unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..5 {
            let x = a.random_element(&mut rng);
            let y = a.random_element(&mut rng);
            let lhs = h.coords(&y).dotc(&h.coords(&x));
            let rhs = t.eval(&(y.adjoint() * &x));
            assert!((lhs - rhs).norm() < 1e-10);
            assert!(fro_norm(&(h.element(&h.coords(&x)) - &x)) < 1e-10);
        }
    }

    #[test]
    fn actions_are_representations() {
        let (a, t) = weighted();
        let h = GnsSpace::new(&a, &t).unwrap();
        let mut rng = rng_from_seed(2);
        let x = a.random_element(&mut rng);
        let y = a.random_element(&mut rng);
        assert!(fro_norm(&(h.left_action(&(&x * &y)) - h.left_action(&x) * h.left_action(&y))) < 1e-10);
        assert!(fro_norm(&(h.right_action(&(&x * &y)) - h.right_action(&y) * h.right_action(&x))) < 1e-10);
        assert!(fro_norm(&(h.left_action(&x.adjoint()) - h.left_action(&x).adjoint())) < 1e-10);
        let v = h.coords(&x);
        let jv = h.conjugate(&v);
        assert!((h.coords(&x.adjoint()) - &jv).norm() < 1e-10);
        assert!((h.conjugate(&jv) - v).norm() < 1e-10);
    }
}
