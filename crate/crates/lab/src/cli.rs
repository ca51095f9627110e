//! Argument parsing and the subcommands. Every command prints one JSON
//! report on standard output and a short summary on standard error.
//!
//! Exit status: 0 when every check passes, 1 when some check fails, 2 for
//! usage and input errors.

use std::io::Write;
use std::time::Instant;

use bessel_core::bimodule::random_instance;
use bessel_core::bimodule::InstanceCaps;
use bessel_core::check::{Check, Tolerance};
use bessel_core::duality::{gabor_bimodule, DEFAULT_GABOR_CAP};
use bessel_core::gabor::{bessel_bound_opt, bessel_bound_svd};
use bessel_core::groups::{adjoint_lattice, covolume_f64, FiniteAbelianGroup, Lattice};
use bessel_core::rng::derive_seed;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::campaign::{self, lattices_of, seeded_window, Config, DEFAULT_MAX_ORDER, DEFAULT_SEED};
use crate::error::LabError;
use crate::formats::{parse_lattice, parse_window, read_file, read_json_arg, LatticeOutput};
use crate::report::{labelled, Report};

#[derive(Debug, Parser)]
#[command(name = "bessel-lab", version, about = "Gabor Bessel duality and bimodule dimension checks")]
pub struct Cli {
    /// Use this tolerance for every check instead of the defaults.
    #[arg(long, global = true, value_name = "E")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the subgroups of G × Ĝ.
    Lattices(GroupArgs),
    /// The adjoint lattice of a given lattice.
    Adjoint(LatticeArgs),
    /// Bessel bounds of a window over a lattice and its adjoint.
    Bessel(BesselArgs),
    /// Bessel duality, commutant and dimension checks on lattices.
    Duality(DualityArgs),
    /// Bounded-vector checks on a random bimodule.
    Bimodule(BimoduleArgs),
    /// The full acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Orders of the cyclic factors of G.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub orders: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub orders: Option<Vec<u64>>,
    /// Lattice JSON, inline or as a file path.
    #[arg(long)]
    pub lattice: String,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Window JSON file.
    #[arg(long)]
    pub window: std::path::PathBuf,
}

#[derive(Debug, Args)]
pub struct DualityArgs {
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub orders: Vec<u64>,
    /// Check every subgroup of G × Ĝ.
    #[arg(long, conflicts_with = "lattice")]
    pub all_lattices: bool,
    /// A single lattice, inline JSON or a file path.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Random windows per lattice.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BimoduleArgs {
    /// Build a random instance (the only mode).
    #[arg(long, required = true)]
    pub random: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of central blocks.
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// Random vectors for the bounded-vector estimate.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Largest n for the sweeps over Z_n.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// What a finished command hands back to `main`.
pub struct Outcome {
    pub report: Report,
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.all_passed() {
            0
        } else {
            1
        }
    }
}

fn tolerance(cli_tol: Option<f64>) -> Result<Tolerance, LabError> {
    match cli_tol {
        None => Ok(Tolerance::default()),
        Some(t) if t.is_finite() && t >= 0.0 => Ok(Tolerance::uniform(t)),
        Some(t) => Err(LabError::Usage(format!("--tol must be a non-negative number, got {t}"))),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, LabError> {
    let tol = tolerance(cli.tol)?;
    match &cli.command {
        Command::Lattices(a) => lattices(a, &tol),
        Command::Adjoint(a) => adjoint(a, &tol),
        Command::Bessel(a) => bessel(a, &tol),
        Command::Duality(a) => duality(a, &tol, cli.tol),
        Command::Bimodule(a) => bimodule(a, &tol, cli.tol),
        Command::Selftest(a) => selftest(a, &tol, cli.tol),
    }
}

fn group(orders: &[u64]) -> Result<FiniteAbelianGroup, LabError> {
    FiniteAbelianGroup::new(orders.to_vec()).map_err(|e| LabError::Validation(e.to_string()))
}

fn outcome(report: Report) -> Outcome {
    let s = report.summary;
    let summary = format!("{}: {}/{} checks passed", report.command, s.passed, s.total);
    Outcome { report, summary }
}

fn lattice_checks(l: &Lattice, tol: &Tolerance) -> Vec<Check> {
    let adj = adjoint_lattice(l);
    let n = l.group().size();
    vec![
        Check::predicate("is a subgroup", l.is_subgroup(), 0.0, 0.0),
        Check::absolute("|Δ|·|Δ°| = |G|²", (l.size() * adj.size()) as f64, (n * n) as f64, tol.algebraic),
        Check::predicate("Δ°° = Δ", adjoint_lattice(&adj).same_elements(l), 0.0, 0.0),
    ]
}

fn lattices(a: &GroupArgs, tol: &Tolerance) -> Result<Outcome, LabError> {
    let g = group(&a.orders)?;
    let items = lattices_of(&g)?;
    let mut checks = Vec::new();
    let mut entries = Vec::new();
    for it in &items {
        checks.extend(labelled(&it.label(), lattice_checks(&it.lattice, tol)));
        let adj = adjoint_lattice(&it.lattice);
        entries.push(json!({
            "index": it.index,
            "lattice": LatticeOutput::new(&it.lattice),
            "adjoint_size": adj.size(),
        }));
    }
    let params = json!({ "orders": a.orders });
    let results = json!({ "count": items.len(), "lattices": entries });
    Ok(outcome(Report::new("lattices", None, params, &checks, results)))
}

fn load_lattice(a: &LatticeArgs) -> Result<Lattice, LabError> {
    let (source, text) = read_json_arg(&a.lattice)?;
    parse_lattice(&source, &text, a.orders.as_deref())
}

fn adjoint(a: &LatticeArgs, tol: &Tolerance) -> Result<Outcome, LabError> {
    let l = load_lattice(a)?;
    let checks = lattice_checks(&l, tol);
    let params = json!({ "orders": l.group().orders(), "lattice": LatticeOutput::new(&l).generators });
    let results = json!({
        "lattice": LatticeOutput::new(&l),
        "adjoint": LatticeOutput::new(&adjoint_lattice(&l)),
        "self_adjoint": adjoint_lattice(&l).same_elements(&l),
    });
    Ok(outcome(Report::new("adjoint", None, params, &checks, results)))
}

fn bessel(a: &BesselArgs, tol: &Tolerance) -> Result<Outcome, LabError> {
    let l = load_lattice(&a.lattice)?;
    let text = read_file(&a.window)?;
    let source = a.window.display().to_string();
    let g = parse_window(&source, &text, Some(l.group().orders()))?;
    let adj = adjoint_lattice(&l);
    let b = bessel_bound_opt(&g, &l)?;
    let b_svd = bessel_bound_svd(&g, &l)?;
    let dual = bessel_bound_opt(&g, &adj)?;
    let covol = covolume_f64(&l);
    let checks = vec![
        Check::relative("B by eigenvalue = B by singular value", b, b_svd, tol.spectral),
        Check::scaled("B° = covol·B", dual, covol * b, b, tol.spectral),
    ];
    let params =
        json!({ "orders": l.group().orders(), "lattice": LatticeOutput::new(&l).generators, "window": source });
    let results = json!({
        "bound": b,
        "dual_bound": dual,
        "covolume": LatticeOutput::new(&l).covolume,
        "lattice_size": l.size(),
        "adjoint_size": adj.size(),
    });
    Ok(outcome(Report::new("bessel", None, params, &checks, results)))
}

/// Checks and report entries for one lattice.
type LatticeEntries = (Vec<Check>, Vec<Value>);

fn duality(a: &DualityArgs, tol: &Tolerance, tol_flag: Option<f64>) -> Result<Outcome, LabError> {
    let g = group(&a.orders)?;
    if g.size() > DEFAULT_GABOR_CAP {
        return Err(LabError::Validation(format!("|G| = {} exceeds the cap of {DEFAULT_GABOR_CAP}", g.size())));
    }
    let items = match (&a.lattice, a.all_lattices) {
        (Some(arg), false) => {
            let (source, text) = read_json_arg(arg)?;
            let lattice = parse_lattice(&source, &text, Some(&a.orders))?;
            vec![campaign::LatticeItem { index: 0, lattice }]
        }
        (None, true) => lattices_of(&g)?,
        _ => return Err(LabError::Usage("duality needs --all-lattices or --lattice".into())),
    };
    let per: Vec<Result<LatticeEntries, LabError>> = {
        use rayon::prelude::*;
        items
            .par_iter()
            .map(|it| {
                let label = it.label();
                let gb = gabor_bimodule(&it.lattice, DEFAULT_GABOR_CAP)?;
                let mut checks = labelled(&label, gb.commutant_checks(tol)?);
                checks.extend(labelled(&label, gb.cdim_checks(tol)?));
                let mut entries = Vec::with_capacity(a.trials);
                for t in 0..a.trials {
                    let w = seeded_window(it.lattice.group(), a.seed, "duality", it.key(), t);
                    let r = gb.bessel_duality(&w, tol.spectral)?;
                    checks.extend(labelled(&format!("{label} window {t}"), r.checks.iter().cloned()));
                    entries.push(json!({
                        "lattice": it.index,
                        "window": t,
                        "passed": r.passed(),
                        "bound": r.bound,
                        "dual_bound": r.dual_bound,
                        "covolume": r.covolume,
                        "right_norm_sq": r.right_norm_sq,
                        "left_norm_sq": r.left_norm_sq,
                    }));
                }
                Ok((checks, entries))
            })
            .collect()
    };
    let mut checks = Vec::new();
    let mut entries = Vec::new();
    for r in per {
        let (c, e) = r?;
        checks.extend(c);
        entries.extend(e);
    }
    let lattices: Vec<Value> =
        items.iter().map(|it| json!({ "index": it.index, "lattice": LatticeOutput::new(&it.lattice) })).collect();
    let params = json!({
        "orders": a.orders,
        "all_lattices": a.all_lattices,
        "trials": a.trials,
        "tol": tol_flag,
    });
    let results = json!({ "lattices": lattices, "entries": entries });
    Ok(outcome(Report::new("duality", Some(a.seed), params, &checks, results)))
}

fn bimodule(a: &BimoduleArgs, tol: &Tolerance, tol_flag: Option<f64>) -> Result<Outcome, LabError> {
    let caps = InstanceCaps::default();
    let bm = random_instance(a.seed, a.blocks, &caps)?;
    let blocks = bessel_core::bimodule::random_blocks(a.seed, a.blocks, &caps)?;
    let hyp = bm.check_hypotheses()?;
    let mut checks = hyp.checks();
    checks.push(Check::residual("projection cdim = block cdim", bm.cdim_cross_check()?, tol.dimension));
    let mut results = json!({
        "blocks": blocks.iter().map(|b| json!({ "n": b.n, "m": b.m, "d": b.d })).collect::<Vec<_>>(),
        "space_dim": bm.space_dim(),
        "cdim_left": hyp.cdim_left.coefficients(),
        "cdim_right": hyp.cdim_right.coefficients(),
        "constant": hyp.constant,
    });
    if hyp.all_hold() {
        checks.push(Check::residual("cdim·cdim = cdim(_M L²(Ñ))", bm.proof_identity_defect(&hyp)?, tol.dimension));
        let summary = bm.verify_left_right_bounded(a.trials, derive_seed(a.seed, "bimodule", 0, 0), tol.dimension)?;
        checks.extend(summary.checks(tol.dimension));
        results["commutant_case"] = json!(summary.commutant_case);
        results["min_slack"] = json!(summary.min_slack());
    }
    let params = json!({ "random": a.random, "blocks": a.blocks, "trials": a.trials, "tol": tol_flag });
    Ok(outcome(Report::new("bimodule", Some(a.seed), params, &checks, results)))
}

fn selftest(a: &SelftestArgs, tol: &Tolerance, tol_flag: Option<f64>) -> Result<Outcome, LabError> {
    if !(2..=8).contains(&a.max_order) {
        return Err(LabError::Usage(format!("--max-order must be between 2 and 8, got {}", a.max_order)));
    }
    let cfg = Config { seed: a.seed, max_order: a.max_order, tol: *tol };
    let mut checks = Vec::new();
    let mut sections = Vec::new();
    let mut lines = Vec::new();
    for (id, run) in campaign::CRITERIA {
        let start = Instant::now();
        let s = run(&cfg);
        let status = if s.passed() { "PASS" } else { "FAIL" };
        lines.push(format!(
            "{status} {id} {} ({} checks, {} failed, {:.1}s)",
            s.title,
            s.checks.len(),
            s.failed(),
            start.elapsed().as_secs_f64()
        ));
        sections.push(s.summary_json());
        checks.extend(labelled(id, s.checks));
    }
    let params = json!({ "max_order": a.max_order, "tol": tol_flag });
    let report = Report::new("selftest", Some(a.seed), params, &checks, json!({ "criteria": sections }));
    let mut out = outcome(report);
    lines.push(out.summary.clone());
    out.summary = lines.join("\n");
    Ok(out)
}

/// Parses `args`, runs the command and writes the report; returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let _ = writeln!(stdout, "{}", out.report.to_json());
            let _ = writeln!(stderr, "{}", out.summary);
            out.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
