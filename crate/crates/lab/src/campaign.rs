//! Seeded verification campaigns, one per acceptance criterion.
//!
//! Every random draw comes from `derive_seed(master, tag, item, trial)`:
//! the tag names the campaign, `item` identifies what is being tested (for
//! a lattice `|G| << 32 | index`, with `index` its position in the
//! enumeration) and `trial` counts windows or vectors. Items run in
//! parallel; results are collected in item order, so reports do not depend
//! on scheduling.

use bessel_core::algebra::{StarAlgebra, TraceFunctional};
use bessel_core::bimodule::{random_instance, Bimodule, InstanceCaps};
use bessel_core::check::{Check, Tolerance};
use bessel_core::duality::{gabor_bimodule, GaborBimodule, DEFAULT_GABOR_CAP};
use bessel_core::error::Error;
use bessel_core::gabor::{bessel_bound_opt, Window};
use bessel_core::groups::{
    adjoint_lattice, covolume_f64, enumerate_subgroups, FiniteAbelianGroup, Lattice, PhaseSpace,
    DEFAULT_ENUMERATION_CAP,
};
use bessel_core::linalg::gaussian_vector;
use bessel_core::rng::{derive_seed, rng_from_seed};
use bessel_core::vnmod::{cdim, cdim_block_formula, Inclusion, RightModule};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{labelled, worst_of};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_MAX_ORDER: u64 = 8;

pub const A1_WINDOWS: usize = 20;
pub const A4_ORDERS: [u64; 3] = [2, 4, 6];
pub const A4_WINDOWS: usize = 100;
pub const A5_INSTANCES: usize = 50;
pub const A5_VECTORS: usize = 100;
pub const A5_GABOR_VECTORS: usize = 20;
pub const A6_SAMPLES: usize = 100;
pub const A7_VECTORS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub max_order: u64,
    pub tol: Tolerance,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: DEFAULT_SEED, max_order: DEFAULT_MAX_ORDER, tol: Tolerance::default() }
    }
}

/// The checks for one criterion plus a small summary of what was covered.
#[derive(Clone, Debug)]
pub struct Section {
    pub id: &'static str,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Section {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "passed": self.passed(),
            "checks": self.checks.len(),
            "failed": self.failed(),
            "details": self.details,
        })
    }
}

/// A failed check standing in for an item the engine could not process.
pub fn error_check(label: &str, e: &Error) -> Check {
    Check::predicate(format!("{label}: {e}"), false, 0.0, 0.0)
}

/// One subgroup of `G × Ĝ` from an enumeration.
#[derive(Clone, Debug)]
pub struct LatticeItem {
    pub index: usize,
    pub lattice: Lattice,
}

impl LatticeItem {
    pub fn key(&self) -> u64 {
        ((self.lattice.group().size() as u64) << 32) | self.index as u64
    }

    pub fn label(&self) -> String {
        let orders: Vec<String> = self.lattice.group().orders().iter().map(|n| format!("Z_{n}")).collect();
        format!("{} Δ#{} (|Δ|={})", orders.join("×"), self.index, self.lattice.size())
    }
}

pub fn lattices_of(group: &FiniteAbelianGroup) -> Result<Vec<LatticeItem>, Error> {
    let space = PhaseSpace::new(group.clone());
    Ok(enumerate_subgroups(&space, DEFAULT_ENUMERATION_CAP)?
        .into_iter()
        .enumerate()
        .map(|(index, lattice)| LatticeItem { index, lattice })
        .collect())
}

/// All subgroups of `Z_n × Z_n` for each `n` in `orders`, in order.
pub fn cyclic_sweep(orders: &[u64]) -> Result<Vec<LatticeItem>, Error> {
    let mut out = Vec::new();
    for &n in orders {
        out.extend(lattices_of(&FiniteAbelianGroup::cyclic(n)?)?);
    }
    Ok(out)
}

fn sweep_orders(cfg: &Config) -> Vec<u64> {
    (2..=cfg.max_order).collect()
}

pub fn seeded_window(group: &FiniteAbelianGroup, seed: u64, tag: &str, item: u64, trial: usize) -> Window {
    Window::gaussian(group.clone(), &mut rng_from_seed(derive_seed(seed, tag, item, trial as u64)))
}

/// Runs `f` on every item in parallel and concatenates the checks in item
/// order.
fn per_item<T: Sync>(items: &[T], f: impl Fn(&T) -> Vec<Check> + Sync + Send) -> Vec<Check> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().collect()
}

fn sweep_or_fail(id: &'static str, title: &'static str, orders: &[u64]) -> Result<Vec<LatticeItem>, Section> {
    cyclic_sweep(orders).map_err(|e| Section {
        id,
        title,
        checks: vec![error_check("lattice enumeration", &e)],
        details: Value::Null,
    })
}

fn with_gabor(item: &LatticeItem, f: impl FnOnce(&GaborBimodule) -> Result<Vec<Check>, Error>) -> Vec<Check> {
    let label = item.label();
    match gabor_bimodule(&item.lattice, DEFAULT_GABOR_CAP).and_then(|gb| f(&gb)) {
        Ok(checks) => labelled(&label, checks),
        Err(e) => vec![error_check(&label, &e)],
    }
}

fn sweep_details(items: &[LatticeItem], orders: &[u64], per_lattice: Value) -> Value {
    json!({ "orders": orders, "lattices": items.len(), "per_lattice": per_lattice })
}

/// `|B° − covol·B| ≤ tol·max(1, B)` for seeded Gaussian windows on every
/// lattice of the sweep.
pub fn a1(cfg: &Config) -> Section {
    const ID: &str = "A1";
    const TITLE: &str = "Bessel bound over the adjoint lattice is covol·B";
    let orders = sweep_orders(cfg);
    let items = match sweep_or_fail(ID, TITLE, &orders) {
        Ok(items) => items,
        Err(s) => return s,
    };
    let tol = cfg.tol.spectral;
    let checks = per_item(&items, |it| {
        let adj = adjoint_lattice(&it.lattice);
        let covol = covolume_f64(&it.lattice);
        let mut checks = Vec::with_capacity(A1_WINDOWS);
        for t in 0..A1_WINDOWS {
            let g = seeded_window(it.lattice.group(), cfg.seed, ID, it.key(), t);
            match bessel_bound_opt(&g, &it.lattice).and_then(|b| Ok((b, bessel_bound_opt(&g, &adj)?))) {
                Ok((b, dual)) => checks.push(Check::scaled("B° = covol·B", dual, covol * b, b, tol)),
                Err(e) => return vec![error_check(&it.label(), &e)],
            }
        }
        worst_of(&format!("{}: B° = covol·B", it.label()), &checks).into_iter().collect()
    });
    Section { id: ID, title: TITLE, checks, details: sweep_details(&items, &orders, json!({ "windows": A1_WINDOWS })) }
}

/// `alg(π(Δ))' = alg(π(Δ°))` on every lattice of the sweep.
pub fn a2(cfg: &Config) -> Section {
    const ID: &str = "A2";
    const TITLE: &str = "commutant of the lattice shifts is generated by the adjoint lattice";
    let orders = sweep_orders(cfg);
    let items = match sweep_or_fail(ID, TITLE, &orders) {
        Ok(items) => items,
        Err(s) => return s,
    };
    let checks = per_item(&items, |it| with_gabor(it, |gb| gb.commutant_checks(&cfg.tol)));
    Section { id: ID, title: TITLE, checks, details: sweep_details(&items, &orders, Value::Null) }
}

/// `cdim(_M L²(G)) = covol`, `cdim(L²(G)_N) = 1/covol` and their product
/// is 1, on every lattice of the sweep.
pub fn a3(cfg: &Config) -> Section {
    const ID: &str = "A3";
    const TITLE: &str = "center-valued dimension of L²(G) is the covolume";
    let orders = sweep_orders(cfg);
    let items = match sweep_or_fail(ID, TITLE, &orders) {
        Ok(items) => items,
        Err(s) => return s,
    };
    let checks = per_item(&items, |it| with_gabor(it, |gb| gb.cdim_checks(&cfg.tol)));
    Section { id: ID, title: TITLE, checks, details: sweep_details(&items, &orders, Value::Null) }
}

/// `‖R_g‖² = B` and `covol·‖L_g‖² = B°` for seeded windows.
pub fn a4(cfg: &Config) -> Section {
    const ID: &str = "A4";
    const TITLE: &str = "Bessel bounds are squared norms of the bounded-vector operators";
    let orders: Vec<u64> = A4_ORDERS.iter().copied().filter(|&n| n <= cfg.max_order).collect();
    let items = match sweep_or_fail(ID, TITLE, &orders) {
        Ok(items) => items,
        Err(s) => return s,
    };
    let tol = cfg.tol.spectral;
    let checks = per_item(&items, |it| {
        with_gabor(it, |gb| {
            let mut right = Vec::with_capacity(A4_WINDOWS);
            let mut left = Vec::with_capacity(A4_WINDOWS);
            for t in 0..A4_WINDOWS {
                let g = seeded_window(it.lattice.group(), cfg.seed, ID, it.key(), t);
                let r = gb.bessel_duality(&g, tol)?;
                right.push(r.checks[1].clone());
                left.push(r.checks[2].clone());
            }
            Ok(worst_of("‖R_g‖² = B", &right).into_iter().chain(worst_of("covol·‖L_g‖² = B°", &left)).collect())
        })
    });
    Section { id: ID, title: TITLE, checks, details: sweep_details(&items, &orders, json!({ "windows": A4_WINDOWS })) }
}

pub fn a5_instance(seed: u64, index: usize) -> Result<Bimodule, Error> {
    random_instance(derive_seed(seed, "A5", index as u64, 0), 1 + index % 3, &InstanceCaps::default())
}

/// Hypotheses and both bounded-vector estimates for one bimodule, with the
/// per-vector checks reduced to their worst case.
pub fn bounded_vector_checks(bm: &Bimodule, trials: usize, seed: u64, tol: f64) -> Result<Vec<Check>, Error> {
    let hyp = bm.check_hypotheses()?;
    let mut checks = hyp.checks();
    if !hyp.all_hold() {
        return Ok(checks);
    }
    let summary = bm.verify_left_right_bounded(trials, seed, tol)?;
    let k = summary.hypotheses.constant;
    let reports = &summary.reports;
    let by = |key: fn(&bessel_core::bimodule::BoundedVectorReport) -> f64| {
        reports.iter().min_by(|a, b| key(a).total_cmp(&key(b)))
    };
    let n = reports.len();
    if let Some(r) = by(|r| r.slack) {
        let mut c = Check::at_most(format!("‖R_f‖ ≤ K‖L_f‖ (worst of {n})"), r.right_norm, k * r.left_norm, tol);
        c.passed = reports.iter().all(|r| r.slack >= -tol);
        checks.push(c);
    }
    if let Some(r) = by(|r| r.mirrored_slack) {
        let mut c = Check::at_most(format!("‖L_f‖ ≤ K‖R_f‖ (worst of {n})"), r.left_norm, k * r.right_norm, tol);
        c.passed = reports.iter().all(|r| r.mirrored_slack >= -tol);
        checks.push(c);
    }
    if summary.commutant_case {
        let eq: Vec<Check> =
            reports.iter().map(|r| Check::relative("‖L_f‖ = ‖R_f‖", r.left_norm, r.right_norm, tol)).collect();
        checks.extend(worst_of("‖L_f‖ = ‖R_f‖", &eq));
    }
    Ok(checks)
}

/// The bounded-vector estimate on random non-commutant instances, and
/// equality of the two norms on the Gabor bimodules.
pub fn a5(cfg: &Config) -> Section {
    const ID: &str = "A5";
    const TITLE: &str = "left and right bounded vectors with the dimension constant";
    let tol = cfg.tol.dimension;
    let indices: Vec<usize> = (0..A5_INSTANCES).collect();
    let mut checks = per_item(&indices, |&i| {
        let label = format!("instance #{i}");
        let result = a5_instance(cfg.seed, i).and_then(|bm| {
            let mut cs = bounded_vector_checks(&bm, A5_VECTORS, derive_seed(cfg.seed, "A5-vectors", i as u64, 0), tol)?;
            cs.push(Check::predicate("not a commutant instance", !bm.is_commutant_case()?, 0.0, 0.0));
            Ok(cs)
        });
        match result {
            Ok(cs) => labelled(&label, cs),
            Err(e) => vec![error_check(&label, &e)],
        }
    });
    let orders = sweep_orders(cfg);
    match cyclic_sweep(&orders) {
        Ok(items) => checks.extend(per_item(&items, |it| {
            with_gabor(it, |gb| {
                let seed = derive_seed(cfg.seed, "A5-gabor", it.key(), 0);
                let cs = bounded_vector_checks(&gb.bimodule, A5_GABOR_VECTORS, seed, tol)?;
                let has_equality = cs.iter().any(|c| c.name.starts_with("‖L_f‖ = ‖R_f‖"));
                Ok(cs.into_iter().chain([Check::predicate("commutant case", has_equality, 0.0, 0.0)]).collect())
            })
        })),
        Err(e) => checks.push(error_check("lattice enumeration", &e)),
    }
    Section {
        id: ID,
        title: TITLE,
        checks,
        details: json!({
            "instances": A5_INSTANCES,
            "vectors_per_instance": A5_VECTORS,
            "gabor_orders": orders,
            "vectors_per_gabor_bimodule": A5_GABOR_VECTORS,
        }),
    }
}

/// A named inclusion `B ⊆ N` with `κ = Tr`.
#[derive(Clone, Debug)]
pub struct InclusionCase {
    pub name: &'static str,
    pub inclusion: Inclusion,
}

/// `M_2⊗1 ⊆ M_4`, block scalars `C⊕C ⊆ M_2⊕M_2`, and `M_3⊗1 ⊆ M_6`.
pub fn reference_inclusions() -> Result<Vec<InclusionCase>, Error> {
    let cases = [
        ("M_2⊗1 ⊆ M_4", StarAlgebra::full(4), StarAlgebra::full(2).tensor_identity(2)),
        (
            "C⊕C ⊆ M_2⊕M_2",
            StarAlgebra::block_diagonal(&[(2, 1), (2, 1)]),
            StarAlgebra::block_diagonal(&[(1, 2), (1, 2)]),
        ),
        ("M_3⊗1 ⊆ M_6", StarAlgebra::full(6), StarAlgebra::full(3).tensor_identity(2)),
    ];
    cases
        .into_iter()
        .map(|(name, big, small)| {
            let trace = TraceFunctional::matrix_trace(&big);
            Ok(InclusionCase { name, inclusion: Inclusion::new(big, small, trace)? })
        })
        .collect()
}

fn inclusion_sweep(
    id: &'static str,
    title: &'static str,
    f: impl Fn(usize, &InclusionCase) -> Result<Vec<Check>, Error> + Sync + Send,
) -> Section {
    let cases = match reference_inclusions() {
        Ok(cases) => cases,
        Err(e) => return Section { id, title, checks: vec![error_check("inclusions", &e)], details: Value::Null },
    };
    let indexed: Vec<(usize, &InclusionCase)> = cases.iter().enumerate().collect();
    let checks = per_item(&indexed, |&(i, case)| match f(i, case) {
        Ok(cs) => labelled(case.name, cs),
        Err(e) => vec![error_check(case.name, &e)],
    });
    let names: Vec<&str> = cases.iter().map(|c| c.name).collect();
    Section { id, title, checks, details: json!({ "inclusions": names }) }
}

/// The basic construction: `B̃` equals `span(N e_B N)` and the commutant of
/// the right `B`-action, the weighted center-valued trace identity, and
/// push-down.
pub fn a6(cfg: &Config) -> Section {
    let tol = cfg.tol;
    inclusion_sweep("A6", "basic construction", |i, case| {
        let inc = &case.inclusion;
        let bc = inc.basic_construction(derive_seed(cfg.seed, "A6", i as u64, 0))?;
        let alg = bc.algebra();
        let span = bc.span_n_e_n()?;
        let comm = bc.right_commutant()?;
        let two_way = |a: &StarAlgebra, b: &StarAlgebra| a.containment_defect(b).max(b.containment_defect(a));
        let mut checks = vec![
            Check::absolute("dim B̃ = dim span(N e_B N)", alg.dim() as f64, span.dim() as f64, 0.0),
            Check::residual("B̃ = span(N e_B N)", two_way(alg, &span), tol.span),
            Check::absolute("dim B̃ = dim (right B-action)'", alg.dim() as f64, comm.dim() as f64, 0.0),
            Check::residual("B̃ = (right B-action)'", two_way(alg, &comm), tol.span),
        ];
        let mut rng = rng_from_seed(derive_seed(cfg.seed, "A6-pairs", i as u64, 0));
        let pairs: Vec<_> =
            (0..A6_SAMPLES).map(|_| (inc.big().random_element(&mut rng), inc.big().random_element(&mut rng))).collect();
        let defects = bc.center_trace_defects(&pairs)?;
        let trace_checks: Vec<Check> =
            defects.iter().map(|&d| Check::residual("cdim·E_Z(n₁e_Bn₂) = E_Z(n₁n₂)", d, tol.dimension)).collect();
        checks.extend(worst_of("cdim·E_Z(n₁e_Bn₂) = E_Z(n₁n₂)", &trace_checks));
        let mut rng = rng_from_seed(derive_seed(cfg.seed, "A6-push-down", i as u64, 0));
        let mut push = Vec::with_capacity(A6_SAMPLES);
        for _ in 0..A6_SAMPLES {
            let a = alg.random_element(&mut rng);
            push.push(Check::residual("a e_B = push_down(a) e_B", bc.push_down_residual(&a)?, tol.dimension));
        }
        checks.extend(worst_of("a e_B = push_down(a) e_B", &push));
        Ok(checks)
    })
}

/// Coefficient change for `cdim` and the subalgebra bounded-vector
/// estimate.
pub fn a7(cfg: &Config) -> Section {
    let tol = cfg.tol.dimension;
    inclusion_sweep("A7", "coefficient change and bounded vectors over a subalgebra", |i, case| {
        let inc = &case.inclusion;
        let column = RightModule::from_transpose(inc.big().clone(), inc.trace().clone());
        let standard = RightModule::standard(inc.big().clone(), inc.trace().clone())?;
        let mut checks = vec![
            Check::residual(
                "cdim(H_B) = cdim(L²(N)_B)·cdim(H_N), H = columns",
                inc.coefficient_change_defect(&column)?,
                tol,
            ),
            Check::residual(
                "cdim(H_B) = cdim(L²(N)_B)·cdim(H_N), H = L²(N)",
                inc.coefficient_change_defect(&standard)?,
                tol,
            ),
        ];
        let bound = inc.subalgebra_bound()?;
        let k = bound.constant();
        let dim = inc.gns().dim();
        let mut rng = rng_from_seed(derive_seed(cfg.seed, "A7", i as u64, 0));
        let estimates: Vec<Check> = (0..A7_VECTORS)
            .map(|_| {
                let f = gaussian_vector(&mut rng, dim);
                let (over_big, over_small) = bound.norms(&f);
                Check::at_most("‖L_f^N‖ ≤ K‖L_f^B‖", over_big, k * over_small, tol)
            })
            .collect();
        checks.extend(worst_of(&format!("‖L_f^N‖ ≤ K‖L_f^B‖, K = {k:.6}"), &estimates));
        Ok(checks)
    })
}

fn route_check(name: &str, h: &RightModule, tol: f64) -> Result<Check, Error> {
    let a = cdim(h)?;
    let b = cdim_block_formula(h)?;
    Ok(Check::residual(format!("{name}: projection cdim = block cdim"), a.max_difference(&b), tol))
}

/// Projection-based and block-formula cdim agree on every module the suite
/// builds.
pub fn a8(cfg: &Config) -> Section {
    const ID: &str = "A8";
    const TITLE: &str = "cdim by module projection agrees with the block formula";
    let tol = cfg.tol.dimension;
    let mut modules = 0usize;
    let orders = sweep_orders(cfg);
    let mut checks = match cyclic_sweep(&orders) {
        Ok(items) => {
            modules += 2 * items.len();
            per_item(&items, |it| {
                with_gabor(it, |gb| {
                    let bm = &gb.bimodule;
                    Ok(vec![
                        route_check("left module", &bm.left().as_right(), tol)?,
                        route_check("right module", bm.right(), tol)?,
                    ])
                })
            })
        }
        Err(e) => vec![error_check("lattice enumeration", &e)],
    };
    let indices: Vec<usize> = (0..A5_INSTANCES).collect();
    modules += 2 * A5_INSTANCES;
    checks.extend(per_item(&indices, |&i| {
        let label = format!("instance #{i}");
        match a5_instance(cfg.seed, i).and_then(|bm| {
            Ok(vec![
                route_check("left module", &bm.left().as_right(), tol)?,
                route_check("right module", bm.right(), tol)?,
            ])
        }) {
            Ok(cs) => labelled(&label, cs),
            Err(e) => vec![error_check(&label, &e)],
        }
    }));
    let inclusions = inclusion_sweep(ID, TITLE, |_, case| {
        let inc = &case.inclusion;
        let column = RightModule::from_transpose(inc.big().clone(), inc.trace().clone());
        let standard = RightModule::standard(inc.big().clone(), inc.trace().clone())?;
        Ok(vec![
            route_check("columns over N", &column, tol)?,
            route_check("columns over B", &column.restrict(inc.small())?, tol)?,
            route_check("L²(N) over N", &standard, tol)?,
            route_check("L²(N) over B", &inc.standard_over_small()?, tol)?,
        ])
    });
    modules += 4 * inclusions.details["inclusions"].as_array().map_or(0, |a| a.len());
    checks.extend(inclusions.checks);
    Section { id: ID, title: TITLE, checks, details: json!({ "modules": modules }) }
}

pub type Criterion = fn(&Config) -> Section;

/// A1–A8 in order. A9 (determinism of the whole report) is checked by
/// running the command twice.
pub const CRITERIA: [(&str, Criterion); 8] =
    [("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5), ("A6", a6), ("A7", a7), ("A8", a8)];
