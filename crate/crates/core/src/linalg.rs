//! Dense complex linear algebra shared by every module.
//!
//! Matrices are `nalgebra` dense matrices over `Complex<f64>`. Matrix spaces
//! carry the Hilbert–Schmidt pairing `⟨A, B⟩ = Tr(B* A)`, which is the
//! Euclidean inner product of the column-major vectorizations.

use alloc::vec::Vec;
use nalgebra::linalg::SymmetricTridiagonal;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = nalgebra::Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative singular-value cut below which a direction counts as zero.
pub const RANK_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// `exp(2πi k / modulus)`, exact on multiples of a quarter turn.
pub fn unit_root(k: u64, modulus: u64) -> C64 {
    let k = k % modulus;
    if k == 0 {
        return c(1.0, 0.0);
    }
    if 4 * k == modulus {
        return c(0.0, 1.0);
    }
    if 2 * k == modulus {
        return c(-1.0, 0.0);
    }
    if 4 * k == 3 * modulus {
        return c(0.0, -1.0);
    }
    let theta = 2.0 * core::f64::consts::PI * (k as f64) / (modulus as f64);
    c(libm::cos(theta), libm::sin(theta))
}

/// Hilbert–Schmidt pairing `Tr(b* a)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum()
}

pub fn fro_norm(a: &CMat) -> f64 {
    libm::sqrt(a.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().copied().sum()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn vectorize(a: &CMat) -> CVec {
    CVec::from_column_slice(a.as_slice())
}

pub fn unvectorize(v: &CVec, n: usize) -> CMat {
    CMat::from_column_slice(n, n, v.as_slice())
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending
/// order; column `j` of the returned matrix belongs to eigenvalue `j`.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    // Householder reduction from nalgebra, then implicit QL with Wilkinson
    // shifts on the real tridiagonal. nalgebra's own QR sweep returns NaN
    // on some sparse Gram matrices that come up in module projections.
    let (mut q, diag, off) = SymmetricTridiagonal::new(hermitian_part(a)).unpack();
    let mut d: Vec<f64> = diag.iter().copied().collect();
    let mut e: Vec<f64> = off.iter().copied().chain([0.0]).collect();
    tridiagonal_ql(&mut d, &mut e, &mut q);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &q.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[..n-1]` (`e[n-1]` is scratch), left in `d`. The plane
/// rotations are applied to the columns of `z`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut CMat) {
    const MAX_SWEEPS: usize = 64;
    let n = d.len();
    for l in 0..n {
        for _ in 0..MAX_SWEEPS {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                let r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let t = (d[i] - g) * s + 2.0 * c * b;
                p = s * t;
                d[i + 1] = g + p;
                g = c * t - b;
                for k in 0..z.nrows() {
                    let zi = z[(k, i)];
                    let zi1 = z[(k, i + 1)];
                    z[(k, i + 1)] = zi * s + zi1 * c;
                    z[(k, i)] = zi * c - zi1 * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

pub fn max_eigenvalue(a: &CMat) -> f64 {
    let (vals, _) = eigh(a);
    vals.last().copied().unwrap_or(0.0)
}

/// Largest singular value, computed from the smaller Gram matrix.
pub fn op_norm(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let gram = if a.nrows() <= a.ncols() { a * a.adjoint() } else { a.adjoint() * a };
    libm::sqrt(max_eigenvalue(&gram).max(0.0))
}

/// Largest singular value from a full SVD; independent of [`op_norm`].
pub fn op_norm_svd(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

/// Orthogonal projection onto the span of the columns of `v`, which must be
/// orthonormal.
pub fn projector_from_columns(v: &CMat) -> CMat {
    v * v.adjoint()
}

/// Orthogonal projection onto the range of a positive semidefinite matrix.
pub fn range_projector(psd: &CMat) -> CMat {
    let (vals, vecs) = eigh(psd);
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let n = psd.nrows();
    let mut p = zeros(n, n);
    for (j, &lam) in vals.iter().enumerate() {
        if top > 0.0 && lam > RANK_TOL * top {
            let col = vecs.column(j);
            p += col * col.adjoint();
        }
    }
    p
}

/// `f(psd)` applied on the range of `psd`, zero on its kernel.
pub fn psd_function(psd: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(psd);
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let n = psd.nrows();
    let mut out = zeros(n, n);
    for (j, &lam) in vals.iter().enumerate() {
        if top > 0.0 && lam > RANK_TOL * top {
            let col = vecs.column(j);
            out += (col * col.adjoint()) * c(f(lam), 0.0);
        }
    }
    out
}

/// Orthonormal basis built one vector at a time by modified Gram–Schmidt
/// with a second re-orthogonalization pass.
///
/// The rank cut is relative to the largest vector offered so far (or a
/// reference scale set up front), so rounding noise in a vector that should
/// vanish is not mistaken for a new direction.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    len: usize,
    vectors: Vec<CVec>,
    tol: f64,
    scale: f64,
}

impl OrthoBasis {
    pub fn new(len: usize) -> Self {
        Self::with_tolerance(len, RANK_TOL)
    }

    pub fn with_tolerance(len: usize, tol: f64) -> Self {
        OrthoBasis { len, vectors: Vec::new(), tol, scale: 0.0 }
    }

    /// Sets the norm the rank cut is measured against.
    pub fn with_reference_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<CVec> {
        self.vectors
    }

    pub fn residual(&self, v: &CVec) -> CVec {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.vectors {
                let coeff = b.dotc(&r);
                r.axpy(-coeff, b, c(1.0, 0.0));
            }
        }
        r
    }

    /// Adds the component of `v` orthogonal to the current span when it is
    /// above the relative tolerance. Returns whether the span grew.
    pub fn push(&mut self, v: &CVec) -> bool {
        if self.vectors.len() >= self.len {
            return false;
        }
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return false;
        }
        self.scale = self.scale.max(norm);
        let r = self.residual(v);
        let rn = r.norm();
        if rn > self.tol * self.scale {
            self.vectors.push(r / c(rn, 0.0));
            true
        } else {
            false
        }
    }

    /// Relative distance of `v` from the span.
    pub fn relative_distance(&self, v: &CVec) -> f64 {
        let scale = v.norm();
        if scale == 0.0 {
            return 0.0;
        }
        self.residual(v).norm() / scale
    }

    pub fn project(&self, v: &CVec) -> CVec {
        let mut out = CVec::zeros(self.len);
        for b in &self.vectors {
            let coeff = b.dotc(v);
            out.axpy(coeff, b, c(1.0, 0.0));
        }
        out
    }
}

/// Rank of a family of vectors at the given relative tolerance.
pub fn rank_of(vectors: &[CVec], tol: f64) -> usize {
    let len = vectors.first().map(|v| v.len()).unwrap_or(0);
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut basis = OrthoBasis::with_tolerance(len, tol).with_reference_scale(scale);
    for v in vectors {
        basis.push(v);
    }
    basis.len()
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| gaussian_complex(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / c(d.norm(), 0.0) } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// A real number drawn uniformly from `[lo, hi)`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[CMat]) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut cc) = (0, 0);
    for b in blocks {
        out.view_mut((r, cc), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        cc += b.ncols();
    }
    out
}

/// Real-valued `f64` matrix to complex.
pub fn real(a: &DMatrix<f64>) -> CMat {
    a.map(|x| c(x, 0.0))
}
