use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{GnsSpace, StarAlgebra, TraceFunctional};
use crate::error::{Error, Result};
use crate::linalg::{fro_norm, identity, rank_of, vectorize, CMat, CVec, C64, RANK_TOL};
use crate::rng::{rng_from_seed, ENGINE_SEED};

const ACTION_TOL: f64 = 1e-8;

/// A finite-dimensional right `N`-module `H_N`.
///
/// The action is stored as `ρ(b_i)` for the basis `b_i` of `N`; `ρ` is a
/// unital `*`-anti-homomorphism, so `ξ · n = ρ(n) ξ`.
#[derive(Clone, Debug)]
pub struct RightModule {
    algebra: StarAlgebra,
    trace: TraceFunctional,
    images: Vec<CMat>,
    space_dim: usize,
}

impl RightModule {
    pub fn new(algebra: StarAlgebra, trace: TraceFunctional, images: Vec<CMat>) -> Result<Self> {
        let space_dim = images.first().map(|m| m.nrows()).unwrap_or(0);
        let module = RightModule::unchecked(algebra, trace, images, space_dim)?;
        module.check_action(false)?;
        Ok(module)
    }

    fn unchecked(algebra: StarAlgebra, trace: TraceFunctional, images: Vec<CMat>, space_dim: usize) -> Result<Self> {
        if images.len() != algebra.dim() {
            return Err(Error::ShapeMismatch { expected: algebra.dim(), found: images.len() });
        }
        if let Some(bad) = images.iter().find(|m| m.nrows() != space_dim || m.ncols() != space_dim) {
            return Err(Error::ShapeMismatch { expected: space_dim, found: bad.nrows().max(bad.ncols()) });
        }
        Ok(RightModule { algebra, trace, images, space_dim })
    }

    /// `C^n` as a right module over a concrete algebra `N ⊆ M_n` through
    /// `ξ · x = xᵀ ξ`.
    pub fn from_transpose(algebra: StarAlgebra, trace: TraceFunctional) -> Self {
        let images = algebra.basis().iter().map(|b| b.transpose()).collect();
        let n = algebra.ambient_dim();
        RightModule { algebra, trace, images, space_dim: n }
    }

    /// `L²(N, κ)` with right multiplication.
    pub fn standard(algebra: StarAlgebra, trace: TraceFunctional) -> Result<Self> {
        let gns = GnsSpace::new(&algebra, &trace)?;
        let images: Vec<CMat> = algebra.basis().iter().map(|b| gns.right_action(b)).collect();
        let d = gns.dim();
        RightModule::unchecked(algebra, trace, images, d)
    }

    /// Checks `ρ(1) = 1`, `ρ(x*) = ρ(x)*` and `ρ(xy) = ρ(y)ρ(x)` on seeded
    /// random elements (`ρ(xy) = ρ(x)ρ(y)` when `multiplicative`).
    pub(crate) fn check_action(&self, multiplicative: bool) -> Result<()> {
        let unit = self.act(&identity(self.algebra.ambient_dim()));
        let mut worst = fro_norm(&(unit - identity(self.space_dim)));
        let mut rng = rng_from_seed(ENGINE_SEED);
        for _ in 0..3 {
            let x = self.algebra.random_element(&mut rng);
            let y = self.algebra.random_element(&mut rng);
            let (rx, ry) = (self.act(&x), self.act(&y));
            let prod = if multiplicative { &rx * &ry } else { &ry * &rx };
            let scale = fro_norm(&rx).max(1.0) * fro_norm(&ry).max(1.0);
            worst = worst.max(fro_norm(&(self.act(&(&x * &y)) - prod)) / scale);
            worst = worst.max(fro_norm(&(self.act(&x.adjoint()) - rx.adjoint())) / scale);
        }
        if worst > ACTION_TOL {
            return Err(Error::Precondition { detail: format!("action is not a *-representation (defect {worst:e})") });
        }
        Ok(())
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn trace(&self) -> &TraceFunctional {
        &self.trace
    }

    pub fn images(&self) -> &[CMat] {
        &self.images
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// `ρ(n)`.
    pub fn act(&self, n: &CMat) -> CMat {
        let mut out = CMat::zeros(self.space_dim, self.space_dim);
        for (b, img) in self.algebra.basis().iter().zip(&self.images) {
            out += img * crate::linalg::hs_inner(n, b);
        }
        out
    }

    /// The image `ρ(N)` as a concrete algebra on `H`.
    pub fn image_algebra(&self) -> Result<StarAlgebra> {
        StarAlgebra::from_spanning(self.space_dim, &self.images)
    }

    /// `ρ` is injective.
    pub fn is_faithful(&self) -> bool {
        let vecs: Vec<CVec> = self.images.iter().map(vectorize).collect();
        rank_of(&vecs, RANK_TOL) == self.algebra.dim()
    }

    /// `B(H_N)`, the commutant of `ρ(N)`.
    pub fn commutant(&self) -> Result<StarAlgebra> {
        self.image_algebra()?.commutant()
    }

    /// The same space as a module over a subalgebra `B ⊆ N`, with `κ|_B`.
    pub fn restrict(&self, sub: &StarAlgebra) -> Result<RightModule> {
        let residual = self.algebra.containment_defect(sub);
        if residual > 1e-10 {
            return Err(Error::Inclusion { residual });
        }
        let images = sub.basis().iter().map(|b| self.act(b)).collect();
        RightModule::unchecked(sub.clone(), self.trace.restrict(sub), images, self.space_dim)
    }

    /// `H ⊕ K` over the same algebra and trace.
    pub fn direct_sum(&self, other: &RightModule) -> Result<RightModule> {
        if self.algebra.dim() != other.algebra.dim() || !self.algebra.same_span(&other.algebra, 1e-10) {
            return Err(Error::Precondition { detail: "direct sum of modules over different algebras".into() });
        }
        let images =
            self.algebra.basis().iter().map(|b| crate::linalg::direct_sum(&[self.act(b), other.act(b)])).collect();
        RightModule::unchecked(self.algebra.clone(), self.trace.clone(), images, self.space_dim + other.space_dim)
    }

    /// The faithful quotient: the image `ρ(N)` (as a right module through
    /// `ρ(n) ↦ ρ(n)ᵀ`) with the trace transported from `s N`, where `s` is
    /// the support of `ρ`.
    pub fn reduced(&self) -> Result<RightModule> {
        let (image, trace) = reduce(&self.algebra, &self.trace, &self.images, self.space_dim)?;
        // The image is an anti-copy of N; N₀ := imageᵀ acts by transposition.
        let n0 = image.transpose();
        let t0 = TraceFunctional::new(&n0, &trace.density().transpose())?;
        Ok(RightModule::from_transpose(n0, t0))
    }

    /// The vectors `ρ(u_j) ξ` for a `κ`-orthonormal basis `u_j` of `N`.
    pub fn orbit(&self, gns: &GnsSpace, xi: &CVec) -> Vec<CVec> {
        gns.units().iter().map(|u| self.act(u) * xi).collect()
    }
}

/// A left `M`-module: a unital `*`-homomorphism `π: M → B(H)`.
#[derive(Clone, Debug)]
pub struct LeftModule {
    algebra: StarAlgebra,
    trace: TraceFunctional,
    images: Vec<CMat>,
    space_dim: usize,
}

impl LeftModule {
    pub fn new(algebra: StarAlgebra, trace: TraceFunctional, images: Vec<CMat>) -> Result<Self> {
        let space_dim = images.first().map(|m| m.nrows()).unwrap_or(0);
        let right = RightModule::unchecked(algebra, trace, images, space_dim)?;
        right.check_action(true)?;
        let RightModule { algebra, trace, images, space_dim } = right;
        Ok(LeftModule { algebra, trace, images, space_dim })
    }

    /// The defining representation of a concrete algebra `M ⊆ M_n`.
    pub fn from_inclusion(algebra: StarAlgebra, trace: TraceFunctional) -> Self {
        let images = algebra.basis().to_vec();
        let n = algebra.ambient_dim();
        LeftModule { algebra, trace, images, space_dim: n }
    }

    /// `L²(M, τ)` with left multiplication.
    pub fn standard(algebra: StarAlgebra, trace: TraceFunctional) -> Result<Self> {
        let gns = GnsSpace::new(&algebra, &trace)?;
        let images: Vec<CMat> = algebra.basis().iter().map(|b| gns.left_action(b)).collect();
        let d = gns.dim();
        Ok(LeftModule { algebra, trace, images, space_dim: d })
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn trace(&self) -> &TraceFunctional {
        &self.trace
    }

    pub fn images(&self) -> &[CMat] {
        &self.images
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// `π(m)`.
    pub fn act(&self, m: &CMat) -> CMat {
        let mut out = CMat::zeros(self.space_dim, self.space_dim);
        for (b, img) in self.algebra.basis().iter().zip(&self.images) {
            out += img * crate::linalg::hs_inner(m, b);
        }
        out
    }

    pub fn image_algebra(&self) -> Result<StarAlgebra> {
        StarAlgebra::from_spanning(self.space_dim, &self.images)
    }

    pub fn is_faithful(&self) -> bool {
        self.as_right().is_faithful()
    }

    pub fn commutant(&self) -> Result<StarAlgebra> {
        self.image_algebra()?.commutant()
    }

    /// The same data as a right module over `Mᵀ ≅ M^op`: the basis `b_iᵀ`
    /// keeps the images `π(b_i)`, and the trace density is transposed.
    pub fn as_right(&self) -> RightModule {
        let trace = TraceFunctional::from_density_unchecked(self.trace.density().transpose());
        RightModule { algebra: self.algebra.transpose(), trace, images: self.images.clone(), space_dim: self.space_dim }
    }

    /// The faithful quotient `π(M)` acting on `H`, with `τ₀(π(m)) = τ(s m)`
    /// for the support `s` of `π`.
    pub fn reduced(&self) -> Result<LeftModule> {
        let (image, trace) = reduce(&self.algebra, &self.trace, &self.images, self.space_dim)?;
        Ok(LeftModule::from_inclusion(image, trace))
    }
}

/// The operators `ρ(u_j)` for a trace-orthonormal basis `u_j`; column `j`
/// of the bounded-vector operator of `f` is `ρ(u_j) f`.
///
/// For a right module this is `L_f: L²(N, κ) → H`, `n̂ ↦ f · n`; for a left
/// module it is `R_f: L²(M, τ) → H`, `m̂ ↦ m f`.
#[derive(Clone, Debug)]
pub struct BoundedOperatorMap {
    units: Vec<CMat>,
}

impl BoundedOperatorMap {
    pub fn for_right(h: &RightModule) -> Result<Self> {
        let gns = GnsSpace::new(h.algebra(), h.trace())?;
        Ok(BoundedOperatorMap { units: gns.units().iter().map(|u| h.act(u)).collect() })
    }

    pub fn for_left(h: &LeftModule) -> Result<Self> {
        let gns = GnsSpace::new(h.algebra(), h.trace())?;
        Ok(BoundedOperatorMap { units: gns.units().iter().map(|u| h.act(u)).collect() })
    }

    pub fn operator(&self, f: &CVec) -> CMat {
        let mut out = CMat::zeros(f.len(), self.units.len());
        for (j, op) in self.units.iter().enumerate() {
            out.set_column(j, &(op * f));
        }
        out
    }

    pub fn norm(&self, f: &CVec) -> f64 {
        crate::linalg::op_norm(&self.operator(f))
    }
}

/// Image algebra of a representation and the trace `τ₀(π(m)) = τ(m̃)` where
/// `m̃` is the minimal-norm preimage; it lies in `s M` since the kernel
/// `(1 − s)M` is a Hilbert–Schmidt orthogonal central summand.
fn reduce(
    algebra: &StarAlgebra,
    trace: &TraceFunctional,
    images: &[CMat],
    space_dim: usize,
) -> Result<(StarAlgebra, TraceFunctional)> {
    let image = StarAlgebra::from_spanning(space_dim, images)?;
    let dim = algebra.dim();
    let nn = space_dim * space_dim;
    let mut a = CMat::zeros(nn, dim);
    for (i, img) in images.iter().enumerate() {
        a.set_column(i, &vectorize(img));
    }
    let pinv = a
        .clone()
        .pseudo_inverse(1e-10)
        .map_err(|e| Error::Precondition { detail: format!("pseudo-inverse failed: {e}") })?;
    let values: Vec<C64> = image
        .basis()
        .iter()
        .map(|y| {
            let coeffs = &pinv * vectorize(y);
            let pre: Vec<C64> = coeffs.iter().copied().collect();
            trace.eval(&algebra.from_coordinates(&pre))
        })
        .collect();
    let t0 = TraceFunctional::from_values(&image, &values)?;
    Ok((image, t0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn transpose_module_is_anti_multiplicative() {
        let n = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        let t = TraceFunctional::matrix_trace(&n);
        let h = RightModule::from_transpose(n, t);
        h.check_action(false).unwrap();
        assert!(h.is_faithful());
    }

    #[test]
    fn standard_modules_are_faithful() {
        let n = StarAlgebra::full(2);
        let t = TraceFunctional::matrix_trace(&n);
        let r = RightModule::standard(n.clone(), t.clone()).unwrap();
        r.check_action(false).unwrap();
        let l = LeftModule::standard(n, t).unwrap();
        assert!(l.is_faithful());
        assert_eq!(r.space_dim(), 4);
    }

    #[test]
    fn reduction_drops_the_kernel() {
        // M = C ⊕ M_2 acting on C^2 through the second summand only.
        let m = StarAlgebra::block_diagonal(&[(1, 1), (2, 1)]);
        let mut d = identity(3);
        d[(0, 0)] = c(7.0, 0.0);
        let tau = TraceFunctional::new(&m, &d).unwrap();
        let images: Vec<CMat> = m.basis().iter().map(|b| b.view((1, 1), (2, 2)).into_owned()).collect();
        let left = LeftModule::new(m, tau, images).unwrap();
        assert!(!left.is_faithful());
        let reduced = left.reduced().unwrap();
        assert!(reduced.is_faithful());
        assert_eq!(reduced.algebra().dim(), 4);
        let t0 = reduced.trace();
        assert!((t0.eval(&identity(2)) - c(2.0, 0.0)).norm() < 1e-10);
    }
}
