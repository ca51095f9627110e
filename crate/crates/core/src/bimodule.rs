//! `M`-`N`-bimodules with traces on both sides, bounded-vector operators and
//! the hypotheses under which left and right bounded vectors coincide.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use crate::algebra::{GnsSpace, StarAlgebra, TraceFunctional};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::linalg::{
    c, commutator, fro_norm, gaussian_vector, identity, kron, op_norm, random_unitary, uniform, CMat, CVec,
};
use crate::rng::{derive_seed, rng_from_seed};
use crate::vnmod::{
    cdim, cdim_block_formula, cdim_left, cdim_left_block_formula, induced_trace_on, module_projection,
    BoundedOperatorMap, CenterElement, LeftModule, RightModule,
};

const COMMUTE_TOL: f64 = 1e-10;
const ALIGN_TOL: f64 = 1e-9;
const CENTER_TOL: f64 = 1e-9;

/// Largest ambient dimension accepted by [`random_instance`].
pub const MAX_INSTANCE_DIM: usize = 64;

#[derive(Clone, Debug)]
pub struct Bimodule {
    left: LeftModule,
    right: RightModule,
    /// Builds `L_f` from `ρ(u_j)`, `u_j` a `κ`-orthonormal basis of `N`.
    left_bounded: BoundedOperatorMap,
    /// Builds `R_f` from `π(v_j)`, `v_j` a `τ`-orthonormal basis of `M`.
    right_bounded: BoundedOperatorMap,
}

impl Bimodule {
    pub fn new(left: LeftModule, right: RightModule) -> Result<Self> {
        if left.space_dim() != right.space_dim() {
            return Err(Error::ShapeMismatch { expected: left.space_dim(), found: right.space_dim() });
        }
        let mut worst: f64 = 0.0;
        for a in left.images() {
            for b in right.images() {
                worst = worst.max(fro_norm(&commutator(a, b)));
            }
        }
        if worst > COMMUTE_TOL {
            return Err(Error::Precondition {
                detail: format!("left and right actions do not commute (defect {worst:e})"),
            });
        }
        let left_bounded = BoundedOperatorMap::for_right(&right)?;
        let right_bounded = BoundedOperatorMap::for_left(&left)?;
        Ok(Bimodule { left, right, left_bounded, right_bounded })
    }

    pub fn left(&self) -> &LeftModule {
        &self.left
    }

    pub fn right(&self) -> &RightModule {
        &self.right
    }

    pub fn space_dim(&self) -> usize {
        self.left.space_dim()
    }

    /// The same bimodule with `τ` replaced by `factor · τ`.
    pub fn with_scaled_left_trace(&self, factor: f64) -> Result<Bimodule> {
        let left = LeftModule::new(
            self.left.algebra().clone(),
            self.left.trace().scaled(factor),
            self.left.images().to_vec(),
        )?;
        Bimodule::new(left, self.right.clone())
    }

    /// The same bimodule with `κ` replaced by `factor · κ`.
    pub fn with_scaled_right_trace(&self, factor: f64) -> Result<Bimodule> {
        let right = RightModule::new(
            self.right.algebra().clone(),
            self.right.trace().scaled(factor),
            self.right.images().to_vec(),
        )?;
        Bimodule::new(self.left.clone(), right)
    }

    /// `L_f: L²(N, κ) → H`, `n̂ ↦ f · n`.
    pub fn left_bounded_operator(&self, f: &CVec) -> CMat {
        self.left_bounded.operator(f)
    }

    /// `R_f: L²(M, τ) → H`, `m̂ ↦ m f`.
    pub fn right_bounded_operator(&self, f: &CVec) -> CMat {
        self.right_bounded.operator(f)
    }

    /// Compares `τ` with the restriction to `M` of the trace induced on
    /// `B(H_N)` by `κ`.
    pub fn check_alignment(&self) -> Result<Alignment> {
        let mp = module_projection(&self.right)?;
        let induced = induced_trace_on(&mp, self.right.commutant()?)?;
        let max_deviation = self
            .left
            .algebra()
            .basis()
            .iter()
            .zip(self.left.images())
            .map(|(m, pm)| (self.left.trace().eval(m) - induced.trace.eval(pm)).norm())
            .fold(0.0, f64::max);
        Ok(Alignment { aligned: max_deviation <= ALIGN_TOL, max_deviation })
    }

    /// Whether `ρ(N)` is all of `π(M)'`.
    pub fn is_commutant_case(&self) -> Result<bool> {
        let rn = self.right.image_algebra()?;
        let mc = self.left.commutant()?;
        Ok(rn.same_span(&mc, 1e-9))
    }

    pub fn check_hypotheses(&self) -> Result<Hypotheses> {
        let left_faithful = self.left.is_faithful();
        let right_faithful = self.right.is_faithful();
        let zm = self.left.image_algebra()?.center()?;
        let zn = self.right.image_algebra()?.center()?;
        let center_defect = if zm.dim() == zn.dim() {
            zm.containment_defect(&zn).max(zn.containment_defect(&zm))
        } else {
            f64::INFINITY
        };
        let alignment = self.check_alignment()?;
        let cdim_left = cdim_left(&self.left)?;
        let cdim_right = cdim(&self.right)?;
        let constant = op_norm(&(cdim_left.on_module() * cdim_right.on_module()));
        Ok(Hypotheses {
            finitely_generated: true,
            left_faithful,
            right_faithful,
            center_defect,
            alignment,
            cdim_left,
            cdim_right,
            constant,
        })
    }

    /// Both cdim routes on both sides; largest coefficient disagreement.
    pub fn cdim_cross_check(&self) -> Result<f64> {
        let l = cdim_left(&self.left)?.max_difference(&cdim_left_block_formula(&self.left)?);
        let r = cdim(&self.right)?.max_difference(&cdim_block_formula(&self.right)?);
        Ok(l.max(r))
    }

    /// `‖cdim(_M H)·cdim(H_N) − cdim(_M L²(Ñ))‖` on `H`, where `Ñ = B(H_N)`
    /// carries the induced trace.
    pub fn proof_identity_defect(&self, hyp: &Hypotheses) -> Result<f64> {
        let mp = module_projection(&self.right)?;
        let induced = induced_trace_on(&mp, self.right.commutant()?)?;
        // M acts on L²(Ñ) through π(M) ⊆ Ñ.
        let gns = GnsSpace::new(&induced.algebra, &induced.trace)?;
        let images: Vec<CMat> = self.left.images().iter().map(|pm| gns.left_action(pm)).collect();
        let on_l2 = LeftModule::new(self.left.algebra().clone(), self.left.trace().clone(), images)?;
        let target = cdim_left(&on_l2)?;
        let lhs = hyp.cdim_left.on_module() * hyp.cdim_right.on_module();
        let rhs = self.left.act(&target.element());
        Ok(fro_norm(&(lhs - rhs)))
    }

    /// Random Gaussian vectors `f`; checks `‖R_f‖ ≤ K‖L_f‖ + tol` and the
    /// mirrored inequality, `K = ‖cdim(_M H)·cdim(H_N)‖`, plus equality in
    /// the commutant case.
    pub fn verify_left_right_bounded(&self, trials: usize, seed: u64, tol: f64) -> Result<BoundedVectorSummary> {
        let hyp = self.check_hypotheses()?;
        if let Some(why) = hyp.failure() {
            return Err(Error::Precondition { detail: why });
        }
        let commutant_case = self.is_commutant_case()?;
        let d = self.space_dim();
        let reports = (0..trials)
            .map(|t| {
                let mut rng = rng_from_seed(derive_seed(seed, "bounded-vector", t as u64, 0));
                let f = gaussian_vector(&mut rng, d);
                self.bounded_vector_report(t, &f, hyp.constant, commutant_case, tol)
            })
            .collect();
        Ok(BoundedVectorSummary { hypotheses: hyp, commutant_case, reports })
    }

    pub fn bounded_vector_report(
        &self,
        index: usize,
        f: &CVec,
        constant: f64,
        commutant_case: bool,
        tol: f64,
    ) -> BoundedVectorReport {
        let left_norm = op_norm(&self.left_bounded_operator(f));
        let right_norm = op_norm(&self.right_bounded_operator(f));
        let slack = constant * left_norm - right_norm;
        let mirrored_slack = constant * right_norm - left_norm;
        let equality_deviation =
            commutant_case.then(|| (left_norm - right_norm).abs() / left_norm.max(right_norm).max(1.0));
        let passed = slack >= -tol && mirrored_slack >= -tol && equality_deviation.is_none_or(|dev| dev <= tol);
        BoundedVectorReport {
            index,
            left_norm,
            right_norm,
            constant,
            slack,
            mirrored_slack,
            equality_deviation,
            passed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alignment {
    pub aligned: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct Hypotheses {
    /// Always true in finite dimension; kept so reports list every hypothesis.
    pub finitely_generated: bool,
    pub left_faithful: bool,
    pub right_faithful: bool,
    /// Distance between `Z(π(M))` and `Z(ρ(N))` in `B(H)`.
    pub center_defect: f64,
    pub alignment: Alignment,
    pub cdim_left: CenterElement,
    pub cdim_right: CenterElement,
    /// `‖cdim(_M H)·cdim(H_N)‖`.
    pub constant: f64,
}

impl Hypotheses {
    pub fn centers_match(&self) -> bool {
        self.center_defect <= CENTER_TOL
    }

    /// The first hypothesis that fails, with its measurement.
    pub fn failure(&self) -> Option<String> {
        if !self.left_faithful {
            return Some("left action is not faithful".into());
        }
        if !self.right_faithful {
            return Some("right action is not faithful".into());
        }
        if !self.centers_match() {
            return Some(format!("centers differ (defect {:e})", self.center_defect));
        }
        if !self.alignment.aligned {
            return Some(format!("traces are not aligned (deviation {:e})", self.alignment.max_deviation));
        }
        None
    }

    pub fn all_hold(&self) -> bool {
        self.failure().is_none()
    }

    pub fn checks(&self) -> Vec<Check> {
        alloc::vec![
            Check::predicate("left action faithful", self.left_faithful, 0.0, 0.0),
            Check::predicate("right action faithful", self.right_faithful, 0.0, 0.0),
            Check::residual("Z(M) = Z(N) in B(H)", self.center_defect, CENTER_TOL),
            Check::residual("traces aligned", self.alignment.max_deviation, ALIGN_TOL),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedVectorReport {
    pub index: usize,
    pub left_norm: f64,
    pub right_norm: f64,
    pub constant: f64,
    /// `K‖L_f‖ − ‖R_f‖`.
    pub slack: f64,
    /// `K‖R_f‖ − ‖L_f‖`.
    pub mirrored_slack: f64,
    /// `|‖L_f‖ − ‖R_f‖|` (relative) when `ρ(N) = π(M)'`.
    pub equality_deviation: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct BoundedVectorSummary {
    pub hypotheses: Hypotheses,
    pub commutant_case: bool,
    pub reports: Vec<BoundedVectorReport>,
}

impl BoundedVectorSummary {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn min_slack(&self) -> f64 {
        self.reports.iter().map(|r| r.slack.min(r.mirrored_slack)).fold(f64::INFINITY, f64::min)
    }

    pub fn max_equality_deviation(&self) -> Option<f64> {
        self.reports.iter().filter_map(|r| r.equality_deviation).reduce(f64::max)
    }

    /// Per vector: `‖R_f‖ ≤ K‖L_f‖`, `‖L_f‖ ≤ K‖R_f‖`, and `‖L_f‖ = ‖R_f‖`
    /// in the commutant case.
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        let mut out = Vec::new();
        for r in &self.reports {
            let i = r.index;
            out.push(Check::at_most(format!("f#{i}: ‖R_f‖ ≤ K‖L_f‖"), r.right_norm, r.constant * r.left_norm, tol));
            out.push(Check::at_most(format!("f#{i}: ‖L_f‖ ≤ K‖R_f‖"), r.left_norm, r.constant * r.right_norm, tol));
            if self.commutant_case {
                out.push(Check::relative(format!("f#{i}: ‖L_f‖ = ‖R_f‖"), r.left_norm, r.right_norm, tol));
            }
        }
        out
    }
}

/// One block of a constructed instance: `N` acts as `M_n` with multiplicity
/// `m` on `C^n ⊗ C^m`, and `M` as a conjugated copy of `M_d ⊗ 1_{m/d}` on
/// the second factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl BlockSpec {
    pub fn space_dim(&self) -> usize {
        self.n * self.m
    }

    /// `‖cdim · cdim‖` restricted to this block.
    pub fn constant(&self) -> f64 {
        let r = (self.m / self.d) as f64;
        r * r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceCaps {
    pub space_dim: usize,
    pub max_n: usize,
    pub max_m: usize,
}

impl Default for InstanceCaps {
    fn default() -> Self {
        InstanceCaps { space_dim: 32, max_n: 3, max_m: 4 }
    }
}

/// Block shapes drawn for [`random_instance`]; deterministic in `seed`.
pub fn random_blocks(seed: u64, block_count: usize, caps: &InstanceCaps) -> Result<Vec<BlockSpec>> {
    if caps.space_dim > MAX_INSTANCE_DIM {
        return Err(Error::ResourceLimit {
            what: "instance space dimension",
            limit: MAX_INSTANCE_DIM,
            requested: caps.space_dim,
        });
    }
    if block_count == 0 || block_count > caps.space_dim || caps.max_n == 0 || caps.max_m == 0 {
        return Err(Error::ResourceLimit { what: "instance blocks", limit: caps.space_dim, requested: block_count });
    }
    let mut rng = rng_from_seed(derive_seed(seed, "instance-shape", block_count as u64, 0));
    let mut blocks = Vec::with_capacity(block_count);
    let mut used = 0;
    for i in 0..block_count {
        let room = caps.space_dim - used - (block_count - i - 1);
        let mut spec = BlockSpec { n: 1, m: 1, d: 1 };
        // The first block gets d < m whenever the caps allow, so π(M) is a
        // proper subalgebra of ρ(N)'.
        let proper = i == 0 && caps.max_m >= 2;
        for _ in 0..16 {
            let n = 1 + rng.random_range(0..caps.max_n);
            let m = if proper { 2 + rng.random_range(0..caps.max_m - 1) } else { 1 + rng.random_range(0..caps.max_m) };
            if n * m <= room {
                let divisors: Vec<usize> = (1..=m).filter(|d| m % d == 0 && (!proper || *d < m)).collect();
                let d = divisors[rng.random_range(0..divisors.len())];
                spec = BlockSpec { n, m, d };
                break;
            }
        }
        used += spec.space_dim();
        blocks.push(spec);
    }
    Ok(blocks)
}

/// A random bimodule satisfying every hypothesis, with `‖cdim · cdim‖ =
/// max_i (m_i/d_i)²`.
pub fn random_instance(seed: u64, block_count: usize, caps: &InstanceCaps) -> Result<Bimodule> {
    let blocks = random_blocks(seed, block_count, caps)?;
    instance_from_blocks(seed, &blocks)
}

pub fn instance_from_blocks(seed: u64, blocks: &[BlockSpec]) -> Result<Bimodule> {
    let total: usize = blocks.iter().map(BlockSpec::space_dim).sum();
    if total > MAX_INSTANCE_DIM {
        return Err(Error::ResourceLimit {
            what: "instance space dimension",
            limit: MAX_INSTANCE_DIM,
            requested: total,
        });
    }
    if let Some(bad) = blocks.iter().find(|b| b.n == 0 || b.m == 0 || b.d == 0 || b.m % b.d != 0) {
        return Err(Error::InvalidElement { detail: format!("block {bad:?} needs positive sizes with d | m") });
    }
    let mut rng = rng_from_seed(derive_seed(seed, "instance", blocks.len() as u64, 0));
    let n_total: usize = blocks.iter().map(|b| b.n).sum();

    // N = ⊕ M_{n_i} on C^{Σ n_i}, κ = ⊕ w_i Tr.
    let mut n_elems = Vec::new();
    let mut kappa = CMat::zeros(n_total, n_total);
    let mut off = 0;
    for b in blocks {
        let w = uniform(&mut rng, 0.5, 2.0);
        for a in 0..b.n {
            kappa[(off + a, off + a)] = c(w, 0.0);
            for bb in 0..b.n {
                let mut e = CMat::zeros(n_total, n_total);
                e[(off + a, off + bb)] = c(1.0, 0.0);
                n_elems.push(e);
            }
        }
        off += b.n;
    }
    let n_alg = StarAlgebra::from_spanning(n_total, &n_elems)?;
    let kappa = TraceFunctional::new(&n_alg, &kappa)?;

    // ρ(x) = ⊕ x_iᵀ ⊗ 1_{m_i}.
    let rho = |x: &CMat| -> CMat {
        let mut parts = Vec::with_capacity(blocks.len());
        let mut off = 0;
        for b in blocks {
            let xi = x.view((off, off), (b.n, b.n)).transpose();
            parts.push(kron(&xi, &identity(b.m)));
            off += b.n;
        }
        crate::linalg::direct_sum(&parts)
    };
    let images: Vec<CMat> = n_alg.basis().iter().map(rho).collect();
    let right = RightModule::new(n_alg, kappa, images)?;

    // M = ⊕ 1_{n_i} ⊗ U_i (M_{d_i} ⊗ 1_{m_i/d_i}) U_i*.
    let mut m_elems = Vec::new();
    let mut off = 0;
    for b in blocks {
        let u = random_unitary(&mut rng, b.m);
        let r = b.m / b.d;
        for a in 0..b.d {
            for bb in 0..b.d {
                let mut e = CMat::zeros(b.d, b.d);
                e[(a, bb)] = c(1.0, 0.0);
                let local = &u * kron(&e, &identity(r)) * u.adjoint();
                let mut full = CMat::zeros(total, total);
                full.view_mut((off, off), (b.space_dim(), b.space_dim())).copy_from(&kron(&identity(b.n), &local));
                m_elems.push(full);
            }
        }
        off += b.space_dim();
    }
    let m_alg = StarAlgebra::from_spanning(total, &m_elems)?;
    let mp = module_projection(&right)?;
    let induced = induced_trace_on(&mp, right.commutant()?)?;
    let tau = TraceFunctional::new(&m_alg, induced.trace.density())?;
    let left = LeftModule::from_inclusion(m_alg, tau);
    Bimodule::new(left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_instance_passes_everything() {
        let bm = instance_from_blocks(1, &[BlockSpec { n: 1, m: 1, d: 1 }]).unwrap();
        let s = bm.verify_left_right_bounded(5, 1, 1e-9).unwrap();
        assert!(s.all_passed());
        assert!((s.hypotheses.constant - 1.0).abs() < 1e-10);
    }

    #[test]
    fn seeded_instance_meets_the_hypotheses() {
        let bm = instance_from_blocks(3, &[BlockSpec { n: 2, m: 4, d: 2 }]).unwrap();
        let hyp = bm.check_hypotheses().unwrap();
        assert!(hyp.all_hold(), "{:?}", hyp.failure());
        assert!((hyp.constant - 4.0).abs() < 1e-9);
        assert!(!bm.is_commutant_case().unwrap());
        let s = bm.verify_left_right_bounded(20, 3, 1e-9).unwrap();
        assert!(s.all_passed());
        assert!(bm.proof_identity_defect(&hyp).unwrap() < 1e-9);
        assert!(bm.cdim_cross_check().unwrap() < 1e-9);
    }

    #[test]
    fn scaled_trace_is_misaligned() {
        let bm = instance_from_blocks(4, &[BlockSpec { n: 2, m: 2, d: 1 }, BlockSpec { n: 1, m: 2, d: 2 }]).unwrap();
        assert!(bm.check_alignment().unwrap().aligned);
        let off = bm.with_scaled_left_trace(1.5).unwrap();
        assert!(!off.check_alignment().unwrap().aligned);
        assert!(matches!(off.verify_left_right_bounded(1, 0, 1e-9), Err(Error::Precondition { .. })));
    }

    #[test]
    fn zero_vector_gives_zero_operators() {
        let bm = instance_from_blocks(5, &[BlockSpec { n: 2, m: 2, d: 2 }]).unwrap();
        let f = CVec::zeros(4);
        assert_eq!(fro_norm(&bm.left_bounded_operator(&f)), 0.0);
        assert_eq!(fro_norm(&bm.right_bounded_operator(&f)), 0.0);
    }

    #[test]
    fn caps_are_enforced() {
        let caps = InstanceCaps { space_dim: 65, ..InstanceCaps::default() };
        assert!(matches!(random_instance(0, 1, &caps), Err(Error::ResourceLimit { .. })));
        let big = [BlockSpec { n: 8, m: 9, d: 3 }];
        assert!(matches!(instance_from_blocks(0, &big), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn random_instances_stay_within_caps() {
        let caps = InstanceCaps::default();
        for seed in 0..10 {
            let blocks = random_blocks(seed, 1 + (seed as usize % 3), &caps).unwrap();
            let total: usize = blocks.iter().map(BlockSpec::space_dim).sum();
            assert!(total <= caps.space_dim);
            assert!(blocks.iter().all(|b| b.m % b.d == 0));
            assert!(blocks[0].d < blocks[0].m);
        }
    }
}
