//! Unital `*`-subalgebras of `n × n` complex matrices.
//!
//! A [`StarAlgebra`] is stored as a Hilbert–Schmidt orthonormal basis. Every
//! finite-dimensional von Neumann algebra in this crate is represented
//! concretely this way; "generated von Neumann algebra" means the linear span
//! of words in the generators and their adjoints.

mod expectation;
mod gns;
mod structure;
mod trace;
mod twisted;

use alloc::collections::VecDeque;
use alloc::vec::Vec;

pub use expectation::{center_valued_trace, conditional_expectation, ConditionalExpectation};
pub use gns::{gns, GnsSpace};
pub use structure::{Block, Wedderburn};
pub use trace::TraceFunctional;
pub use twisted::{twisted_group_algebra, CocycleFlavor, TwistedGroupAlgebra};

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, fro_norm, hs_inner, identity, unvectorize, vectorize, CMat, OrthoBasis, RANK_TOL};
use crate::rng::ENGINE_SEED;

/// Largest ambient dimension for which the commutant is computed as the
/// null space of the stacked commutator maps (an `n² × n²` eigenproblem).
pub const NULLSPACE_COMMUTANT_MAX_DIM: usize = 16;

#[derive(Clone, Debug)]
pub struct StarAlgebra {
    n: usize,
    basis: Vec<CMat>,
}

impl StarAlgebra {
    /// Orthonormalizes `elements` without closing them up. The caller
    /// guarantees that the span is a unital `*`-algebra; see
    /// [`StarAlgebra::closure_defect`].
    pub fn from_spanning(n: usize, elements: &[CMat]) -> Result<Self> {
        for e in elements {
            check_square(e, n)?;
        }
        let scale = elements.iter().map(fro_norm).fold(0.0, f64::max);
        let mut ob = OrthoBasis::new(n * n).with_reference_scale(scale);
        for e in elements {
            ob.push(&vectorize(e));
        }
        let basis = ob.into_vectors().iter().map(|v| unvectorize(v, n)).collect();
        Ok(StarAlgebra { n, basis })
    }

    /// The smallest unital `*`-subalgebra containing `gens`: the span of
    /// the identity and the generators is closed under left multiplication
    /// by every generator and its adjoint until the dimension stops growing.
    pub fn generate(n: usize, gens: &[CMat]) -> Result<Self> {
        for g in gens {
            check_square(g, n)?;
        }
        let mut mults: Vec<CMat> = Vec::new();
        let mut mult_span = OrthoBasis::new(n * n);
        for g in gens {
            for h in [g.clone(), g.adjoint()] {
                if mult_span.push(&vectorize(&h)) {
                    mults.push(h);
                }
            }
        }
        let mut ob = OrthoBasis::new(n * n);
        let mut basis: Vec<CMat> = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        let push = |m: &CMat, ob: &mut OrthoBasis, basis: &mut Vec<CMat>, queue: &mut VecDeque<usize>| {
            if ob.push(&vectorize(m)) {
                basis.push(unvectorize(ob.vectors().last().unwrap(), n));
                queue.push_back(basis.len() - 1);
            }
        };
        push(&identity(n), &mut ob, &mut basis, &mut queue);
        for h in &mults {
            push(h, &mut ob, &mut basis, &mut queue);
        }
        while let Some(i) = queue.pop_front() {
            if basis.len() == n * n {
                break;
            }
            for h in &mults {
                let prod = h * &basis[i];
                push(&prod, &mut ob, &mut basis, &mut queue);
            }
        }
        Ok(StarAlgebra { n, basis })
    }

    /// All of `M_n`.
    pub fn full(n: usize) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let mut e = CMat::zeros(n, n);
                e[(i, j)] = c(1.0, 0.0);
                basis.push(e);
            }
        }
        StarAlgebra { n, basis }
    }

    /// Scalar multiples of the identity.
    pub fn scalars(n: usize) -> Self {
        StarAlgebra { n, basis: alloc::vec![identity(n) / c(libm::sqrt(n as f64), 0.0)] }
    }

    /// Diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut e = CMat::zeros(n, n);
                e[(i, i)] = c(1.0, 0.0);
                e
            })
            .collect();
        StarAlgebra { n, basis }
    }

    /// `⊕_i M_{k_i} ⊗ 1_{μ_i}` embedded block-diagonally, for pairs
    /// `(k_i, μ_i)`.
    pub fn block_diagonal(blocks: &[(usize, usize)]) -> Self {
        let n: usize = blocks.iter().map(|&(k, mu)| k * mu).sum();
        let mut elements = Vec::new();
        let mut offset = 0;
        for &(k, mu) in blocks {
            for a in 0..k {
                for b in 0..k {
                    let mut e = CMat::zeros(n, n);
                    for r in 0..mu {
                        e[(offset + a * mu + r, offset + b * mu + r)] = c(1.0, 0.0);
                    }
                    elements.push(e);
                }
            }
            offset += k * mu;
        }
        Self::from_spanning(n, &elements).expect("square by construction")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Hilbert–Schmidt coordinates `⟨x, b_i⟩`.
    pub fn coordinates(&self, x: &CMat) -> Vec<crate::C64> {
        self.basis.iter().map(|b| hs_inner(x, b)).collect()
    }

    pub fn from_coordinates(&self, coords: &[crate::C64]) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (b, &w) in self.basis.iter().zip(coords) {
            out += b * w;
        }
        out
    }

    /// Orthogonal (Hilbert–Schmidt) projection onto the algebra.
    pub fn project(&self, x: &CMat) -> CMat {
        self.from_coordinates(&self.coordinates(x))
    }

    /// Distance from the span, relative to `max(1, ‖x‖)`.
    pub fn distance(&self, x: &CMat) -> f64 {
        fro_norm(&(x - self.project(x))) / fro_norm(x).max(1.0)
    }

    pub fn contains(&self, x: &CMat, tol: f64) -> bool {
        x.nrows() == self.n && self.distance(x) <= tol
    }

    /// Largest distance of a basis element of `other` from this span.
    pub fn containment_defect(&self, other: &StarAlgebra) -> f64 {
        if other.n != self.n {
            return f64::INFINITY;
        }
        other.basis.iter().map(|b| self.distance(b)).fold(0.0, f64::max)
    }

    pub fn contains_algebra(&self, other: &StarAlgebra, tol: f64) -> bool {
        self.containment_defect(other) <= tol
    }

    /// Equal dimension and containment both ways.
    pub fn same_span(&self, other: &StarAlgebra, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains_algebra(other, tol) && other.contains_algebra(self, tol)
    }

    /// Largest distance from the span of a product of basis elements, an
    /// adjoint of one, or the identity. Zero for an honest `*`-algebra.
    pub fn closure_defect(&self) -> f64 {
        let mut worst = self.distance(&identity(self.n));
        for a in &self.basis {
            worst = worst.max(self.distance(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(self.distance(&(a * b)));
            }
        }
        worst
    }

    /// `{xᵀ : x ∈ A}`; transposition is a `*`-anti-isomorphism.
    pub fn transpose(&self) -> Self {
        StarAlgebra { n: self.n, basis: self.basis.iter().map(|b| b.transpose()).collect() }
    }

    /// Direct sum `A ⊕ B` acting block-diagonally on `C^{n+m}`.
    pub fn direct_sum(&self, other: &StarAlgebra) -> Self {
        let n = self.n + other.n;
        let mut elements = Vec::new();
        for b in &self.basis {
            let mut e = CMat::zeros(n, n);
            e.view_mut((0, 0), (self.n, self.n)).copy_from(b);
            elements.push(e);
        }
        for b in &other.basis {
            let mut e = CMat::zeros(n, n);
            e.view_mut((self.n, self.n), (other.n, other.n)).copy_from(b);
            elements.push(e);
        }
        StarAlgebra::from_spanning(n, &elements).expect("square by construction")
    }

    /// `A ⊗ 1_m` acting on `C^n ⊗ C^m`.
    pub fn tensor_identity(&self, m: usize) -> Self {
        let id = identity(m);
        let elements: Vec<CMat> = self.basis.iter().map(|b| b.kronecker(&id)).collect();
        StarAlgebra::from_spanning(self.n * m, &elements).expect("square by construction")
    }

    /// A linear combination of the basis with standard complex Gaussian
    /// coefficients.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> CMat {
        let coords: Vec<crate::C64> = (0..self.dim()).map(|_| crate::linalg::gaussian_complex(rng)).collect();
        self.from_coordinates(&coords)
    }

    /// The commutant `A' = {X : Xa = aX for all a ∈ A}` in `M_n`.
    ///
    /// Up to [`NULLSPACE_COMMUTANT_MAX_DIM`] this is the null space of the
    /// stacked commutator maps; above it the Wedderburn matrix units of `A`
    /// are used instead.
    pub fn commutant(&self) -> Result<StarAlgebra> {
        if self.n <= NULLSPACE_COMMUTANT_MAX_DIM {
            Ok(self.commutant_nullspace())
        } else {
            self.commutant_structural()
        }
    }

    /// Null space of `X ↦ ([X, b])_b` over the basis, from the Hermitian
    /// Gram matrix `Q = Σ_b K_b* K_b` with `K_b = bᵀ ⊗ 1 − 1 ⊗ b`.
    pub fn commutant_nullspace(&self) -> StarAlgebra {
        let n = self.n;
        let nn = n * n;
        let mut bbstar = CMat::zeros(n, n);
        let mut bstarb = CMat::zeros(n, n);
        let mut w = CMat::zeros(nn, nn);
        for b in &self.basis {
            bbstar += b * b.adjoint();
            bstarb += b.adjoint() * b;
            for ci in 0..n {
                for ai in 0..n {
                    let bar = b[(ai, ci)].conj();
                    if bar == c(0.0, 0.0) {
                        continue;
                    }
                    for di in 0..n {
                        for bi in 0..n {
                            let v = b[(bi, di)];
                            if v != c(0.0, 0.0) {
                                w[(ai * n + bi, ci * n + di)] += bar * v;
                            }
                        }
                    }
                }
            }
        }
        let id = identity(n);
        let q = bbstar.conjugate().kronecker(&id) + id.kronecker(&bstarb) - &w - w.adjoint();
        let (vals, vecs) = eigh(&q);
        let top = vals.last().copied().unwrap_or(0.0).max(0.0);
        let cut = RANK_TOL * top.max(1.0);
        let basis = vals
            .iter()
            .enumerate()
            .filter(|(_, &lam)| lam <= cut)
            .map(|(j, _)| unvectorize(&vecs.column(j).into_owned(), n))
            .collect();
        StarAlgebra { n, basis }
    }

    /// Commutant from Wedderburn matrix units: on the block with minimal
    /// projection `e_11` and units `e_1j`, the commutant is
    /// `{Σ_j e_1j* Y e_1j : Y ∈ B(e_11 C^n)}`.
    pub fn commutant_structural(&self) -> Result<StarAlgebra> {
        let w = self.wedderburn()?;
        let n = self.n;
        let mut elements = Vec::new();
        for block in w.blocks() {
            let units = block.units();
            let k = units.len();
            let range = block.minimal_range();
            let scale = c(1.0 / libm::sqrt(k as f64), 0.0);
            for s in 0..range.ncols() {
                for t in 0..range.ncols() {
                    let y = range.column(s) * range.column(t).adjoint();
                    let mut x = CMat::zeros(n, n);
                    for u in units {
                        x += u.adjoint() * &y * u;
                    }
                    elements.push(x * scale);
                }
            }
        }
        StarAlgebra::from_spanning(n, &elements)
    }

    /// The center `Z(A) = A ∩ A'`.
    pub fn center(&self) -> Result<StarAlgebra> {
        structure::center(self, ENGINE_SEED)
    }

    /// Minimal central projections, mutually orthogonal and summing to the
    /// identity, in canonical order.
    pub fn minimal_central_projections(&self) -> Result<Vec<CMat>> {
        structure::minimal_central_projections(self, ENGINE_SEED)
    }

    /// Block structure with matrix units.
    pub fn wedderburn(&self) -> Result<Wedderburn> {
        structure::wedderburn(self, ENGINE_SEED)
    }

    /// `span{a z : a ∈ A}` for a central projection `z`.
    pub fn compress(&self, z: &CMat) -> StarAlgebra {
        let elements: Vec<CMat> = self.basis.iter().map(|b| b * z).collect();
        StarAlgebra::from_spanning(self.n, &elements).expect("square by construction")
    }
}

/// Free-function form of [`StarAlgebra::generate`].
pub fn generate_algebra(n: usize, gens: &[CMat]) -> Result<StarAlgebra> {
    StarAlgebra::generate(n, gens)
}

/// Free-function form of [`StarAlgebra::commutant`].
pub fn commutant(a: &StarAlgebra) -> Result<StarAlgebra> {
    a.commutant()
}

fn check_square(m: &CMat, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::ShapeMismatch { expected: n, found: m.nrows().max(m.ncols()) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nilpotent() -> CMat {
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m
    }

    #[test]
    fn generation_examples() {
        assert_eq!(StarAlgebra::generate(3, &[identity(3)]).unwrap().dim(), 1);
        assert_eq!(StarAlgebra::generate(2, &[nilpotent()]).unwrap().dim(), 4);
        assert_eq!(StarAlgebra::generate(4, &[]).unwrap().dim(), 1);
    }

    #[test]
    fn generation_rejects_mismatched_shapes() {
        assert!(StarAlgebra::generate(3, &[identity(2)]).is_err());
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(StarAlgebra::full(3).commutant().unwrap().dim(), 1);
        assert_eq!(StarAlgebra::scalars(3).commutant().unwrap().dim(), 9);
        let d = StarAlgebra::diagonal(4);
        assert!(d.commutant().unwrap().same_span(&d, 1e-10));
    }

    #[test]
    fn structural_and_nullspace_commutants_agree() {
        for blocks in [&[(2, 2)][..], &[(1, 3), (2, 1)], &[(2, 1), (1, 2), (1, 1)]] {
            let a = StarAlgebra::block_diagonal(blocks);
            let null = a.commutant_nullspace();
            let structural = a.commutant_structural().unwrap();
            assert!(null.same_span(&structural, 1e-10), "{blocks:?}");
            let expected: usize = blocks.iter().map(|&(_, mu)| mu * mu).sum();
            assert_eq!(null.dim(), expected);
        }
    }

    #[test]
    fn double_commutant_recovers_algebra() {
        for blocks in [&[(2, 2)][..], &[(1, 2), (2, 1)], &[(3, 1)]] {
            let a = StarAlgebra::block_diagonal(blocks);
            let back = a.commutant().unwrap().commutant().unwrap();
            assert!(back.same_span(&a, 1e-10), "{blocks:?} {} {} {}", a.dim(), back.dim(), a.containment_defect(&back));
        }
    }

    #[test]
    fn closure_is_stable() {
        let a = StarAlgebra::generate(2, &[nilpotent()]).unwrap();
        assert!(a.closure_defect() < 1e-12);
        let b = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        assert!(b.closure_defect() < 1e-12);
    }
}
