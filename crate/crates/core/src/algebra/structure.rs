//! Center, minimal central projections and Wedderburn matrix units.
//!
//! All three use seeded random elements of the algebra. Each result is
//! verified against the full basis; a failed verification retries with the
//! next seed, at most [`MAX_ATTEMPTS`] times.

use alloc::vec::Vec;

use super::StarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{c, commutator, eigh, fro_norm, gaussian_complex, hs_inner, trace, CMat, RANK_TOL};
use crate::rng::{derive_seed, rng_from_seed};

pub const MAX_ATTEMPTS: usize = 5;

/// Eigenvalues closer than this (relative to the spectral scale) belong to
/// one cluster.
const CLUSTER_TOL: f64 = 1e-8;
/// Distinct clusters must be at least this far apart, or the draw is retried.
const SEPARATION_TOL: f64 = 1e-4;
const VERIFY_TOL: f64 = 1e-8;

pub(super) fn center(alg: &StarAlgebra, seed: u64) -> Result<StarAlgebra> {
    for attempt in 0..MAX_ATTEMPTS {
        let z = center_attempt(alg, derive_seed(seed, "center", attempt as u64, 0));
        if center_verified(alg, &z) {
            return Ok(z);
        }
    }
    Err(Error::SpectralClusters { attempts: MAX_ATTEMPTS })
}

fn center_attempt(alg: &StarAlgebra, seed: u64) -> StarAlgebra {
    let n = alg.ambient_dim();
    let dim = alg.dim();
    let mut rng = rng_from_seed(seed);
    let r1 = alg.random_element(&mut rng);
    let r2 = alg.random_element(&mut rng);
    let probes = [r1.adjoint(), r1, r2.adjoint(), r2];
    let comms: Vec<Vec<CMat>> = alg.basis().iter().map(|b| probes.iter().map(|p| commutator(b, p)).collect()).collect();
    let mut gram = CMat::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v: crate::C64 = comms[i].iter().zip(&comms[j]).map(|(a, b)| hs_inner(b, a)).sum();
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    let (vals, vecs) = eigh(&gram);
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let elements: Vec<CMat> = vals
        .iter()
        .enumerate()
        .filter(|(_, &lam)| lam <= RANK_TOL * top.max(1.0))
        .map(|(j, _)| {
            let coords: Vec<crate::C64> = vecs.column(j).iter().copied().collect();
            alg.from_coordinates(&coords)
        })
        .collect();
    StarAlgebra::from_spanning(n, &elements).expect("square by construction")
}

fn center_verified(alg: &StarAlgebra, z: &StarAlgebra) -> bool {
    if z.dim() == 0 || !z.contains(&crate::linalg::identity(alg.ambient_dim()), VERIFY_TOL) {
        return false;
    }
    z.basis().iter().all(|x| alg.basis().iter().all(|b| fro_norm(&commutator(x, b)) <= VERIFY_TOL))
}

/// Splits the spectrum of a Hermitian matrix into clusters of nearly equal
/// eigenvalues. Returns `None` when two clusters are too close to call.
fn cluster(vals: &[f64]) -> Option<Vec<core::ops::Range<usize>>> {
    if vals.is_empty() {
        return Some(Vec::new());
    }
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..vals.len() {
        let gap = vals[i] - vals[i - 1];
        if gap > CLUSTER_TOL * scale {
            if gap < SEPARATION_TOL * scale {
                return None;
            }
            out.push(start..i);
            start = i;
        }
    }
    out.push(start..vals.len());
    Some(out)
}

fn spectral_projection(vecs: &CMat, range: core::ops::Range<usize>) -> CMat {
    let cols = vecs.columns(range.start, range.len());
    cols * cols.adjoint()
}

/// Canonical order: by the first row index whose column of the projection
/// is non-negligible, ties broken by that diagonal entry.
fn sort_projections(ps: &mut [CMat]) {
    let key = |p: &CMat| {
        let n = p.nrows();
        let first = (0..n).find(|&i| p.column(i).norm() > 1e-6).unwrap_or(n);
        (first, if first < n { -p[(first, first)].re } else { 0.0 })
    };
    ps.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

pub(super) fn minimal_central_projections(alg: &StarAlgebra, seed: u64) -> Result<Vec<CMat>> {
    let z = center(alg, seed)?;
    let n = alg.ambient_dim();
    if z.dim() == 1 {
        return Ok(alloc::vec![crate::linalg::identity(n)]);
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(seed, "central-split", attempt as u64, 0));
        let mut h = CMat::zeros(n, n);
        for b in z.basis() {
            let g = gaussian_complex(&mut rng);
            h += b * g + b.adjoint() * g.conj();
        }
        let (vals, vecs) = eigh(&h);
        let Some(clusters) = cluster(&vals) else { continue };
        if clusters.len() != z.dim() {
            continue;
        }
        let mut ps: Vec<CMat> = clusters.into_iter().map(|r| spectral_projection(&vecs, r)).collect();
        if ps.iter().all(|p| z.contains(p, VERIFY_TOL)) {
            sort_projections(&mut ps);
            return Ok(ps);
        }
    }
    Err(Error::SpectralClusters { attempts: MAX_ATTEMPTS })
}

/// One simple summand `z A ≅ M_k`, acting with multiplicity `μ`.
#[derive(Clone, Debug)]
pub struct Block {
    central_projection: CMat,
    size: usize,
    multiplicity: usize,
    units: Vec<CMat>,
    minimal_range: CMat,
}

impl Block {
    pub fn central_projection(&self) -> &CMat {
        &self.central_projection
    }

    /// `k` with `z A ≅ M_k`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Rank of a minimal projection of the block.
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// Matrix units `e_11, e_12, …, e_1k`.
    pub fn units(&self) -> &[CMat] {
        &self.units
    }

    /// Orthonormal basis (as columns) of the range of `e_11`.
    pub fn minimal_range(&self) -> &CMat {
        &self.minimal_range
    }
}

#[derive(Clone, Debug)]
pub struct Wedderburn {
    blocks: Vec<Block>,
}

impl Wedderburn {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

fn range_basis(p: &CMat) -> CMat {
    let (vals, vecs) = eigh(p);
    let cols: Vec<usize> = vals.iter().enumerate().filter(|(_, &v)| v > 0.5).map(|(j, _)| j).collect();
    let mut out = CMat::zeros(p.nrows(), cols.len());
    for (dst, &j) in cols.iter().enumerate() {
        out.set_column(dst, &vecs.column(j));
    }
    out
}

pub(super) fn wedderburn(alg: &StarAlgebra, seed: u64) -> Result<Wedderburn> {
    let projections = minimal_central_projections(alg, seed)?;
    let mut blocks = Vec::with_capacity(projections.len());
    for (bi, z) in projections.into_iter().enumerate() {
        blocks.push(block_units(alg, z, derive_seed(seed, "wedderburn", bi as u64, 0))?);
    }
    Ok(Wedderburn { blocks })
}

fn block_units(alg: &StarAlgebra, z: CMat, seed: u64) -> Result<Block> {
    let part = alg.compress(&z);
    let k = libm::round(libm::sqrt(part.dim() as f64)) as usize;
    let rank = libm::round(trace(&z).re) as usize;
    if k * k != part.dim() || k == 0 || !rank.is_multiple_of(k) {
        return Err(Error::Precondition {
            detail: alloc::format!("block of dimension {} and rank {} is not a full matrix block", part.dim(), rank),
        });
    }
    let mu = rank / k;
    let range = range_basis(&z);
    if k == 1 {
        return Ok(Block {
            central_projection: z.clone(),
            size: 1,
            multiplicity: mu,
            units: alloc::vec![z],
            minimal_range: range,
        });
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(seed, "units", attempt as u64, 0));
        let x = part.random_element(&mut rng);
        let h = &x + x.adjoint();
        let local = range.adjoint() * &h * &range;
        let (vals, vecs) = eigh(&local);
        let Some(clusters) = cluster(&vals) else { continue };
        if clusters.len() != k || clusters.iter().any(|r| r.len() != mu) {
            continue;
        }
        let minimal: Vec<CMat> = clusters
            .iter()
            .map(|r| {
                let cols = &range * vecs.columns(r.start, r.len());
                &cols * cols.adjoint()
            })
            .collect();
        let first_range = &range * vecs.columns(clusters[0].start, mu);
        let a = part.random_element(&mut rng);
        let mut units = Vec::with_capacity(k);
        units.push(minimal[0].clone());
        let mut ok = true;
        for e in &minimal[1..] {
            let v = &minimal[0] * &a * e;
            let scale = fro_norm(&v) / libm::sqrt(mu as f64);
            if scale < 1e-6 {
                ok = false;
                break;
            }
            units.push(v / c(scale, 0.0));
        }
        if !ok {
            continue;
        }
        let e11 = &units[0];
        let consistent = units.iter().all(|u| fro_norm(&(u * u.adjoint() - e11)) <= VERIFY_TOL);
        if consistent {
            return Ok(Block { central_projection: z, size: k, multiplicity: mu, units, minimal_range: first_range });
        }
    }
    Err(Error::SpectralClusters { attempts: MAX_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    #[test]
    fn center_of_full_algebra_is_scalars() {
        let a = StarAlgebra::full(3);
        assert_eq!(a.center().unwrap().dim(), 1);
        let ps = a.minimal_central_projections().unwrap();
        assert_eq!(ps.len(), 1);
        assert!(fro_norm(&(&ps[0] - identity(3))) < 1e-12);
    }

    #[test]
    fn diagonal_algebra_splits_into_matrix_units() {
        let ps = StarAlgebra::diagonal(3).minimal_central_projections().unwrap();
        assert_eq!(ps.len(), 3);
        for (i, p) in ps.iter().enumerate() {
            let mut e = CMat::zeros(3, 3);
            e[(i, i)] = c(1.0, 0.0);
            assert!(fro_norm(&(p - e)) < 1e-10);
        }
    }

    #[test]
    fn block_sum_has_ranks_two_and_one() {
        let a = StarAlgebra::block_diagonal(&[(2, 1), (1, 1)]);
        let ps = a.minimal_central_projections().unwrap();
        let ranks: Vec<usize> = ps.iter().map(|p| libm::round(trace(p).re) as usize).collect();
        assert_eq!(ranks, alloc::vec![2, 1]);
        let mut sum = CMat::zeros(3, 3);
        for (i, p) in ps.iter().enumerate() {
            sum += p;
            for q in &ps[i + 1..] {
                assert!(fro_norm(&(p * q)) < 1e-10);
            }
        }
        assert!(fro_norm(&(sum - identity(3))) < 1e-10);
    }

    #[test]
    fn wedderburn_reports_sizes_and_multiplicities() {
        let a = StarAlgebra::block_diagonal(&[(2, 3), (1, 2)]);
        let w = a.wedderburn().unwrap();
        let shape: Vec<(usize, usize)> = w.blocks().iter().map(|b| (b.size(), b.multiplicity())).collect();
        assert_eq!(shape, alloc::vec![(2, 3), (1, 2)]);
        for b in w.blocks() {
            for u in b.units() {
                assert!(a.contains(u, 1e-10));
            }
        }
    }

    #[test]
    fn clustering_rejects_ambiguous_gaps() {
        assert!(cluster(&[0.0, 1e-6, 1.0]).is_none());
        assert_eq!(cluster(&[0.0, 1e-15, 1.0]).unwrap().len(), 2);
    }
}
