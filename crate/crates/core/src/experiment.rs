//! Deterministic Monte Carlo sweeps: draw instances per sweep point, run
//! every requested scheduler on the same instances, aggregate per-cell
//! statistics, and render a summary CSV.
//!
//! Seeding is hierarchical (splitmix64 chained over base seed, point, and
//! trial index), so adding schedulers or reordering points never perturbs
//! instance generation, and paired comparisons across schedulers always see
//! identical instances.

use crate::generators;
use crate::instance::StateFeedbackMatrix;
use crate::sched::SchedulerSpec;
use crate::sim::{self, ratio_to_f64, Apdd};
use crate::{Error, Result};
use rayon::prelude::*;
use std::fmt::Write as _;

/// Instance family drawn at each sweep point.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceFamily {
    /// Each receiver wants each packet independently with probability `p`
    /// (empty draws redrawn). The sweep point is the receiver count.
    Bernoulli { p: f64 },
    /// Each receiver wants a uniformly random pair of packets. The sweep
    /// point is the receiver count.
    UniformPairs,
    /// One receiver per packet pair. The sweep point is the block size; the
    /// instance is deterministic, so trials differ only in coefficients.
    CompleteGraph,
    /// Pairwise-intersecting uniform design: the sweep point is the receiver
    /// count r, each wanting r packets out of r(r+1)/2.
    Efl,
    /// A fixed instance reused at every sweep point.
    File(StateFeedbackMatrix),
}

impl InstanceFamily {
    /// Draws the instance for one (point, trial) cell.
    pub fn generate(&self, k: usize, point: usize, seed: u64) -> Result<StateFeedbackMatrix> {
        match self {
            InstanceFamily::Bernoulli { p } => generators::bernoulli(point, k, *p, seed),
            InstanceFamily::UniformPairs => generators::uniform_pairs(point, k, seed),
            InstanceFamily::CompleteGraph => generators::complete_graph(point),
            InstanceFamily::Efl => generators::efl(point, seed),
            InstanceFamily::File(a) => Ok(a.clone()),
        }
    }

    /// Receiver count of instances at `point`, without generating one.
    pub fn receivers_at(&self, point: usize) -> usize {
        match self {
            InstanceFamily::CompleteGraph => point * point.saturating_sub(1) / 2,
            InstanceFamily::File(a) => a.n_receivers(),
            _ => point,
        }
    }
}

/// Full description of one sweep.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub family: InstanceFamily,
    /// Block size for the random families; ignored where the point or the
    /// file fixes it.
    pub k: usize,
    /// Sweep points, reported in this order.
    pub points: Vec<usize>,
    pub schedulers: Vec<SchedulerSpec>,
    /// Instances drawn per (point, scheduler) cell.
    pub trials: usize,
    pub base_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::precondition("sweep needs at least one point"));
        }
        if self.schedulers.is_empty() {
            return Err(Error::precondition("sweep needs at least one scheduler"));
        }
        if self.trials == 0 {
            return Err(Error::precondition("sweep needs at least one trial"));
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Instance seed for one (point, trial) cell.
pub fn trial_seed(base_seed: u64, point: usize, trial: usize) -> u64 {
    let s = splitmix64(base_seed);
    let s = splitmix64(s ^ point as u64);
    splitmix64(s ^ trial as u64)
}

// Arbitrary odd salt so coefficient streams never collide with instance
// generation streams.
const SCHEDULE_SALT: u64 = 0x2545_F491_4F6C_DD1D;

/// Coefficient seed shared by every scheduler on one instance.
pub fn schedule_seed(instance_seed: u64) -> u64 {
    splitmix64(instance_seed ^ SCHEDULE_SALT)
}

/// One (instance, scheduler) outcome.
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub point: usize,
    pub n_receivers: usize,
    pub scheduler: SchedulerSpec,
    pub trial: usize,
    pub instance_seed: u64,
    pub apdd: Apdd,
    pub lower_bound: Apdd,
    pub rlnc_closed_form: Apdd,
    pub schedule_len: usize,
    pub throughput_optimal: bool,
}

/// Aggregated statistics for one (point, scheduler) cell. When `error` is
/// set the numeric fields are meaningless and render as `NA`.
#[derive(Clone, Debug)]
pub struct SummaryRow {
    pub point: usize,
    pub n_receivers: usize,
    pub scheduler: SchedulerSpec,
    pub trials: usize,
    pub mean_apdd: f64,
    pub stderr_apdd: f64,
    pub mean_lower_bound: f64,
    pub mean_schedule_len: f64,
    pub frac_throughput_optimal: f64,
    pub error: Option<String>,
}

/// Everything a sweep produced: one summary row per (point, scheduler) cell
/// in configuration order, plus the raw per-trial records.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub rows: Vec<SummaryRow>,
    pub records: Vec<TrialRecord>,
}

pub const SUMMARY_HEADER: &str =
    "n_receivers,scheduler,mean_apdd,stderr_apdd,mean_lower_bound,mean_schedule_len,frac_throughput_optimal";

impl ExperimentReport {
    pub fn any_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    /// Summary CSV with the stable header; error cells render `NA` columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SUMMARY_HEADER);
        out.push('\n');
        for row in &self.rows {
            if row.error.is_some() {
                let _ = writeln!(
                    out,
                    "{},{},NA,NA,NA,NA,NA",
                    row.n_receivers,
                    row.scheduler.name()
                );
            } else {
                let _ = writeln!(
                    out,
                    "{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                    row.n_receivers,
                    row.scheduler.name(),
                    row.mean_apdd,
                    row.stderr_apdd,
                    row.mean_lower_bound,
                    row.mean_schedule_len,
                    row.frac_throughput_optimal
                );
            }
        }
        out
    }
}

/// Runs the whole sweep. Points run concurrently on up to `workers` threads
/// (0 = one per CPU); rows and records come back in deterministic
/// (point, scheduler, trial) order regardless of completion order. Per-cell
/// failures become error rows rather than aborting the sweep.
pub fn run_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::precondition(format!("worker pool: {e}")))?;
    let per_point: Vec<Vec<CellOutcome>> =
        pool.install(|| cfg.points.par_iter().map(|&p| run_point(cfg, p)).collect());
    Ok(assemble(cfg, per_point))
}

/// Single-threaded `run_sweep` for hosts without thread support (wasm);
/// produces the identical report.
pub fn run_sweep_serial(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let per_point: Vec<Vec<CellOutcome>> =
        cfg.points.iter().map(|&p| run_point(cfg, p)).collect();
    Ok(assemble(cfg, per_point))
}

fn assemble(cfg: &ExperimentConfig, per_point: Vec<Vec<CellOutcome>>) -> ExperimentReport {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (&point, cells) in cfg.points.iter().zip(per_point) {
        for (spec, cell) in cfg.schedulers.iter().zip(cells) {
            match cell {
                Ok(trials) => {
                    rows.push(summarize(point, *spec, &trials, cfg.trials));
                    records.extend(trials);
                }
                Err(msg) => rows.push(SummaryRow {
                    point,
                    n_receivers: cfg.family.receivers_at(point),
                    scheduler: *spec,
                    trials: cfg.trials,
                    mean_apdd: f64::NAN,
                    stderr_apdd: f64::NAN,
                    mean_lower_bound: f64::NAN,
                    mean_schedule_len: f64::NAN,
                    frac_throughput_optimal: f64::NAN,
                    error: Some(msg),
                }),
            }
        }
    }
    ExperimentReport { rows, records }
}

type CellOutcome = std::result::Result<Vec<TrialRecord>, String>;

fn run_point(cfg: &ExperimentConfig, point: usize) -> Vec<CellOutcome> {
    let mut cells: Vec<CellOutcome> = vec![Ok(Vec::with_capacity(cfg.trials)); cfg.schedulers.len()];
    for trial in 0..cfg.trials {
        let seed = trial_seed(cfg.base_seed, point, trial);
        let a = match cfg.family.generate(cfg.k, point, seed) {
            Ok(a) => a,
            Err(e) => {
                let msg = format!("trial {trial}: {e}");
                for cell in &mut cells {
                    if cell.is_ok() {
                        *cell = Err(msg.clone());
                    }
                }
                return cells;
            }
        };
        let lb = sim::lower_bound(&a);
        let rlnc = sim::rlnc_apdd_closed_form(&a);
        for (spec, cell) in cfg.schedulers.iter().zip(&mut cells) {
            let Ok(trials) = cell else { continue };
            match run_cell_trial(&a, *spec, schedule_seed(seed)) {
                Ok((apdd, len, to)) => trials.push(TrialRecord {
                    point,
                    n_receivers: a.n_receivers(),
                    scheduler: *spec,
                    trial,
                    instance_seed: seed,
                    apdd,
                    lower_bound: lb,
                    rlnc_closed_form: rlnc,
                    schedule_len: len,
                    throughput_optimal: to,
                }),
                Err(msg) => *cell = Err(format!("trial {trial}: {msg}")),
            }
        }
    }
    cells
}

fn run_cell_trial(
    a: &StateFeedbackMatrix,
    spec: SchedulerSpec,
    seed: u64,
) -> std::result::Result<(Apdd, usize, bool), String> {
    let s = spec.build(a, seed).map_err(|e| e.to_string())?;
    let report = sim::simulate(a, &s).map_err(|e| e.to_string())?;
    match report.apdd {
        Some(apdd) => Ok((apdd, s.len(), report.throughput_optimal)),
        None => Err("schedule did not complete every receiver".into()),
    }
}

fn summarize(point: usize, spec: SchedulerSpec, trials: &[TrialRecord], t: usize) -> SummaryRow {
    let tf = trials.len() as f64;
    let apdds: Vec<f64> = trials.iter().map(|r| ratio_to_f64(r.apdd)).collect();
    let mean = apdds.iter().sum::<f64>() / tf;
    let stderr = if trials.len() < 2 {
        0.0
    } else {
        let var = apdds.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (tf - 1.0);
        (var / tf).sqrt()
    };
    SummaryRow {
        point,
        n_receivers: trials[0].n_receivers,
        scheduler: spec,
        trials: t,
        mean_apdd: mean,
        stderr_apdd: stderr,
        mean_lower_bound: trials.iter().map(|r| ratio_to_f64(r.lower_bound)).sum::<f64>() / tf,
        mean_schedule_len: trials.iter().map(|r| r.schedule_len as f64).sum::<f64>() / tf,
        frac_throughput_optimal: trials.iter().filter(|r| r.throughput_optimal).count() as f64
            / tf,
        error: None,
    }
}

pub const PRESET_NAMES: [&str; 3] =
    ["sweep-bernoulli-k15", "sweep-bernoulli-k20", "sweep-pairs-k20"];

/// Ready-made sweep configurations covering the standard comparisons:
/// vertex-cover rounds vs RLNC vs G-IDNC on Bernoulli(0.2) demands, and the
/// two-transmission MIS schemes vs RLNC vs G-IDNC on pair demands.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let points: Vec<usize> = (5..=100).step_by(5).collect();
    match name {
        "sweep-bernoulli-k15" | "sweep-bernoulli-k20" => Some(ExperimentConfig {
            family: InstanceFamily::Bernoulli { p: 0.2 },
            k: if name.ends_with("15") { 15 } else { 20 },
            points,
            schedulers: vec![SchedulerSpec::VcAlg1, SchedulerSpec::Rlnc, SchedulerSpec::GIdnc],
            trials: 50,
            base_seed: 1,
        }),
        "sweep-pairs-k20" => Some(ExperimentConfig {
            family: InstanceFamily::UniformPairs,
            k: 20,
            points,
            schedulers: vec![
                SchedulerSpec::Mis(crate::sched::MwisMode::Exact),
                SchedulerSpec::Mis(crate::sched::MwisMode::Greedy),
                SchedulerSpec::Rlnc,
                SchedulerSpec::GIdnc,
            ],
            trials: 50,
            base_seed: 1,
        }),
        _ => None,
    }
}
