//! Finite abelian groups `G = Z_{N1} × … × Z_{Nk}`, the phase space `G × Ĝ`,
//! and its subgroups (lattices).
//!
//! The dual group is identified with `G` through the characters
//! `ω(x) = exp(2πi Σ_j ω_j x_j / N_j)`. Phase points are indexed in mixed
//! radix with `x` most significant, so index order is lexicographic order on
//! `(x, ω)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::{unit_root, C64};

/// Default cap on `|G|²` for exhaustive subgroup enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidElement { detail: format!("cyclic factor of order {bad}") });
        }
        Ok(FiniteAbelianGroup { orders })
    }

    /// `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| acc / gcd(acc, n) * n)
    }

    pub fn validate(&self, element: &[u64]) -> Result<()> {
        if element.len() != self.orders.len() {
            return Err(Error::InvalidElement {
                detail: format!("{} components for a group of rank {}", element.len(), self.rank()),
            });
        }
        for (j, (&v, &n)) in element.iter().zip(&self.orders).enumerate() {
            if v >= n {
                return Err(Error::InvalidElement { detail: format!("component {j} is {v}, outside [0, {n})") });
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &n)| (x + y) % n).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &n)| (x + n - y) % n).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect()
    }

    /// Position of `element` in lexicographic order.
    pub fn index_of(&self, element: &[u64]) -> usize {
        element.iter().zip(&self.orders).fold(0usize, |acc, (&v, &n)| acc * n as usize + v as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        for j in (0..self.rank()).rev() {
            let n = self.orders[j] as usize;
            out[j] = (index % n) as u64;
            index /= n;
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.size()).map(|i| self.element_at(i)).collect()
    }

    /// Numerator `k` of `ω(x) = exp(2πi k / exponent)`.
    pub fn pairing(&self, omega: &[u64], x: &[u64]) -> u64 {
        let l = self.exponent();
        omega.iter().zip(x).zip(&self.orders).map(|((&w, &v), &n)| ((w * v) % n) * (l / n)).sum::<u64>() % l
    }

    pub fn character_value(&self, omega: &[u64], x: &[u64]) -> Result<C64> {
        self.validate(omega)?;
        self.validate(x)?;
        Ok(unit_root(self.pairing(omega, x), self.exponent()))
    }
}

/// `ω(x)` for `ω ∈ Ĝ ≅ G` and `x ∈ G`.
pub fn character_value(group: &FiniteAbelianGroup, omega: &[u64], x: &[u64]) -> Result<C64> {
    group.character_value(omega, x)
}

/// A point `(x, ω)` of `G × Ĝ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    pub x: Vec<u64>,
    pub omega: Vec<u64>,
}

impl PhasePoint {
    pub fn new(x: Vec<u64>, omega: Vec<u64>) -> Self {
        PhasePoint { x, omega }
    }
}

/// The phase space `G × Ĝ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseSpace {
    group: FiniteAbelianGroup,
}

impl PhaseSpace {
    pub fn new(group: FiniteAbelianGroup) -> Self {
        PhaseSpace { group }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.group.size() * self.group.size()
    }

    pub fn validate(&self, z: &PhasePoint) -> Result<()> {
        self.group.validate(&z.x)?;
        self.group.validate(&z.omega)
    }

    pub fn index_of(&self, z: &PhasePoint) -> usize {
        self.group.index_of(&z.x) * self.group.size() + self.group.index_of(&z.omega)
    }

    pub fn point_at(&self, index: usize) -> PhasePoint {
        let g = self.group.size();
        PhasePoint::new(self.group.element_at(index / g), self.group.element_at(index % g))
    }

    pub fn zero(&self) -> PhasePoint {
        PhasePoint::new(self.group.zero(), self.group.zero())
    }

    pub fn add(&self, a: &PhasePoint, b: &PhasePoint) -> PhasePoint {
        PhasePoint::new(self.group.add(&a.x, &b.x), self.group.add(&a.omega, &b.omega))
    }

    pub fn neg(&self, a: &PhasePoint) -> PhasePoint {
        PhasePoint::new(self.group.neg(&a.x), self.group.neg(&a.omega))
    }

    /// Whether `π(z)` and `π(w)` commute, i.e. `ω_w(x_z) = ω_z(x_w)`.
    pub fn commute(&self, z: &PhasePoint, w: &PhasePoint) -> bool {
        self.group.pairing(&w.omega, &z.x) == self.group.pairing(&z.omega, &w.x)
    }

    fn add_index(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.add(&self.point_at(a), &self.point_at(b)))
    }
}

/// A subgroup of `G × Ĝ`, stored as its canonically sorted element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    space: PhaseSpace,
    indices: Vec<usize>,
    generators: Vec<PhasePoint>,
}

impl Lattice {
    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.space.group()
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn generators(&self) -> &[PhasePoint] {
        &self.generators
    }

    /// Sorted phase-space indices of the elements.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn elements(&self) -> Vec<PhasePoint> {
        self.indices.iter().map(|&i| self.space.point_at(i)).collect()
    }

    pub fn contains(&self, z: &PhasePoint) -> bool {
        self.indices.binary_search(&self.space.index_of(z)).is_ok()
    }

    /// Same element set (generators may differ).
    pub fn same_elements(&self, other: &Lattice) -> bool {
        self.space == other.space && self.indices == other.indices
    }

    /// Exhaustive check of the subgroup axioms.
    pub fn is_subgroup(&self) -> bool {
        let set: BTreeSet<usize> = self.indices.iter().copied().collect();
        let zero = self.space.index_of(&self.space.zero());
        if !set.contains(&zero) {
            return false;
        }
        self.indices.iter().all(|&a| {
            let pa = self.space.point_at(a);
            set.contains(&self.space.index_of(&self.space.neg(&pa)))
                && self.indices.iter().all(|&b| set.contains(&self.space.add_index(a, b)))
        })
    }

    fn from_indices(space: PhaseSpace, indices: Vec<usize>) -> Self {
        let generators = greedy_generators(&space, &indices);
        Lattice { space, indices, generators }
    }
}

fn closure(space: &PhaseSpace, seed: &[usize], gens: &[usize]) -> Vec<usize> {
    let mut member = vec![false; space.size()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in seed {
        if !member[s] {
            member[s] = true;
            stack.push(s);
        }
    }
    while let Some(e) = stack.pop() {
        for &g in gens {
            let s = space.add_index(e, g);
            if !member[s] {
                member[s] = true;
                stack.push(s);
            }
        }
    }
    member.iter().enumerate().filter_map(|(i, &m)| m.then_some(i)).collect()
}

/// Walks the elements in canonical order and keeps each one that is not
/// already generated by the earlier picks.
fn greedy_generators(space: &PhaseSpace, indices: &[usize]) -> Vec<PhasePoint> {
    let zero = space.index_of(&space.zero());
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![zero];
    for &i in indices {
        if span.binary_search(&i).is_err() {
            gens.push(i);
            span = closure(space, &[zero], &gens);
        }
    }
    gens.into_iter().map(|i| space.point_at(i)).collect()
}

/// The subgroup generated by `gens`; keeps the given generators.
pub fn lattice_from_generators(space: &PhaseSpace, gens: &[PhasePoint]) -> Result<Lattice> {
    for g in gens {
        space.validate(g)?;
    }
    let zero = space.index_of(&space.zero());
    let gen_idx: Vec<usize> = gens.iter().map(|g| space.index_of(g)).collect();
    let indices = closure(space, &[zero], &gen_idx);
    Ok(Lattice { space: space.clone(), indices, generators: gens.to_vec() })
}

/// `Δ° = {z ∈ G × Ĝ : π(z)π(w) = π(w)π(z) for all w ∈ Δ}`.
pub fn adjoint_lattice(lattice: &Lattice) -> Lattice {
    let space = lattice.space.clone();
    let members = lattice.elements();
    let indices: Vec<usize> = (0..space.size())
        .filter(|&i| {
            let z = space.point_at(i);
            members.iter().all(|w| space.commute(&z, w))
        })
        .collect();
    Lattice::from_indices(space, indices)
}

/// `covol(Δ) = |G| / |Δ|` (counting measure on `G`).
pub fn covolume(lattice: &Lattice) -> Ratio<u64> {
    Ratio::new(lattice.group().size() as u64, lattice.size() as u64)
}

pub fn covolume_f64(lattice: &Lattice) -> f64 {
    lattice.group().size() as f64 / lattice.size() as f64
}

/// Every subgroup of `G × Ĝ`, ordered by size and then by element list.
pub fn enumerate_subgroups(space: &PhaseSpace, cap: usize) -> Result<Vec<Lattice>> {
    if space.size() > cap {
        return Err(Error::ResourceLimit { what: "phase-space size", limit: cap, requested: space.size() });
    }
    let zero = space.index_of(&space.zero());
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut work: Vec<Vec<usize>> = vec![vec![zero]];
    seen.insert(vec![zero]);
    while let Some(h) = work.pop() {
        let mut member = vec![false; space.size()];
        for &i in &h {
            member[i] = true;
        }
        for (g, &inside) in member.iter().enumerate() {
            if inside {
                continue;
            }
            let k = closure(space, &h, &[g]);
            if seen.insert(k.clone()) {
                work.push(k);
            }
        }
    }
    let mut all: Vec<Vec<usize>> = seen.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(all.into_iter().map(|idx| Lattice::from_indices(space.clone(), idx)).collect())
}
