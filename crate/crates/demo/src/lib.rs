//! Browser bindings for the delay toolkit.
//!
//! Three JSON-in/JSON-out exports keep the page in `www/` frameworkless:
//! generate an instance, run one scheduler against a pasted instance, and
//! sweep mean delay over a growing receiver population. Failures come back
//! as `{"error": "..."}` instead of thrown exceptions, so the JS side only
//! ever needs `JSON.parse`.

use apdd_core::experiment::{self, ExperimentConfig, InstanceFamily};
use apdd_core::sim::{self, ratio_to_f64};
use apdd_core::{generators, SchedulerSpec, StateFeedbackMatrix};
use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

// Budget guards keeping one wasm call (single thread, blocking the page)
// comfortably interactive. Derived-size families get tighter caps because
// their other dimension grows quadratically.
const MAX_RECEIVERS: usize = 200;
const MAX_BLOCK: usize = 40;
const MAX_COMPLETE_BLOCK: usize = 20;
const MAX_EFL_RECEIVERS: usize = 8;
const MAX_SWEEP_BLOCK: usize = 25;
const MAX_SWEEP_POINT: usize = 100;
const MAX_SWEEP_POINTS: usize = 40;
const MAX_SWEEP_TRIALS: usize = 100;
const MAX_SWEEP_CELLS: usize = 2500;

fn envelope(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(msg) => json!({ "error": msg }).to_string(),
    }
}

fn capped(what: &str, value: usize, max: usize) -> Result<(), String> {
    if value > max {
        Err(format!("{what} = {value}; the demo allows at most {max}"))
    } else {
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateRequest {
    family: String,
    receivers: Option<usize>,
    packets: Option<usize>,
    p: Option<f64>,
    seed: Option<u64>,
}

/// Generates an instance and returns its text form plus summary statistics.
///
/// Request: `{"family", "receivers", "packets", "p", "seed"}` where family
/// is one of `bernoulli`, `uniform-pairs`, `complete-graph`, `efl`.
/// `complete-graph` derives the receiver count from `packets`; `efl`
/// derives the block size from `receivers`.
#[wasm_bindgen]
pub fn generate_instance(request: &str) -> String {
    envelope(generate_payload(request))
}

fn generate_payload(request: &str) -> Result<Value, String> {
    let req: GenerateRequest =
        serde_json::from_str(request).map_err(|e| format!("bad request: {e}"))?;
    let receivers = req.receivers.unwrap_or(20);
    let packets = req.packets.unwrap_or(15);
    let seed = req.seed.unwrap_or(1);
    let a = match req.family.as_str() {
        "bernoulli" => {
            capped("receivers", receivers, MAX_RECEIVERS)?;
            capped("packets", packets, MAX_BLOCK)?;
            generators::bernoulli(receivers, packets, req.p.unwrap_or(0.2), seed)
        }
        "uniform-pairs" => {
            capped("receivers", receivers, MAX_RECEIVERS)?;
            capped("packets", packets, MAX_BLOCK)?;
            generators::uniform_pairs(receivers, packets, seed)
        }
        "complete-graph" => {
            capped("packets", packets, MAX_COMPLETE_BLOCK)?;
            generators::complete_graph(packets)
        }
        "efl" => {
            capped("receivers", receivers, MAX_EFL_RECEIVERS)?;
            generators::efl(receivers, seed)
        }
        other => {
            return Err(format!(
                "unknown family {other:?} (expected bernoulli, uniform-pairs, complete-graph, or efl)"
            ))
        }
    }
    .map_err(|e| e.to_string())?;
    Ok(instance_payload(&a))
}

fn instance_payload(a: &StateFeedbackMatrix) -> Value {
    let mut histogram = vec![0usize; a.max_want_count() + 1];
    for n in 0..a.n_receivers() {
        histogram[a.want_count(n)] += 1;
    }
    let lb = sim::lower_bound(a);
    let rlnc = sim::rlnc_apdd_closed_form(a);
    json!({
        "sfm": a.render(),
        "n_receivers": a.n_receivers(),
        "n_packets": a.n_packets(),
        "total_demands": a.total_demands(),
        "want_histogram": histogram
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(w, &c)| json!([w, c]))
            .collect::<Vec<_>>(),
        "lower_bound": ratio_to_f64(lb),
        "lower_bound_exact": lb.to_string(),
        "rlnc_apdd": ratio_to_f64(rlnc),
        "rlnc_apdd_exact": rlnc.to_string(),
    })
}

/// Builds one scheduler's schedule for the pasted instance, simulates it,
/// and returns the schedule text plus per-receiver decode times.
///
/// `scheduler` is one of `rlnc`, `uncoded`, `sidnc`, `gidnc`, `vc`,
/// `mis-exact`, `mis-greedy`.
#[wasm_bindgen]
pub fn run_scheduler(sfm: &str, scheduler: &str, seed: u32) -> String {
    envelope(run_payload(sfm, scheduler, u64::from(seed)))
}

fn run_payload(sfm: &str, scheduler: &str, seed: u64) -> Result<Value, String> {
    let a = StateFeedbackMatrix::parse(sfm).map_err(|e| e.to_string())?;
    capped("receivers", a.n_receivers(), MAX_RECEIVERS)?;
    capped("packets", a.n_packets(), MAX_BLOCK)?;
    let spec = SchedulerSpec::parse(scheduler).map_err(|e| e.to_string())?;
    let schedule = spec.build(&a, seed).map_err(|e| e.to_string())?;
    let report = sim::simulate(&a, &schedule).map_err(|e| e.to_string())?;
    let wants: Vec<Vec<bool>> = (0..a.n_receivers())
        .map(|n| (0..a.n_packets()).map(|k| a.wants_packet(n, k)).collect())
        .collect();
    let rounds: Vec<Vec<usize>> = schedule
        .coding_sets
        .iter()
        .map(|set| set.iter().map(|&k| k + 1).collect())
        .collect();
    let lb = sim::lower_bound(&a);
    let rlnc = sim::rlnc_apdd_closed_form(&a);
    Ok(json!({
        "scheduler": spec.name(),
        "seed": seed,
        "n_receivers": a.n_receivers(),
        "n_packets": a.n_packets(),
        "schedule": schedule.render(),
        "rounds": rounds,
        "n_transmissions": report.n_transmissions,
        "apdd": report.apdd.map(ratio_to_f64),
        "apdd_exact": report.apdd.map(|d| d.to_string()),
        "lower_bound": ratio_to_f64(lb),
        "lower_bound_exact": lb.to_string(),
        "rlnc_apdd": ratio_to_f64(rlnc),
        "complete": report.complete,
        "throughput_optimal": report.throughput_optimal,
        "wants": wants,
        "decode_times": report.decode_time,
        "completion_times": report.completion_time,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepRequest {
    family: String,
    k: Option<usize>,
    p: Option<f64>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    n_step: Option<usize>,
    schedulers: Vec<String>,
    trials: Option<usize>,
    seed: Option<u64>,
}

/// Runs a receiver-count sweep and returns per-scheduler series aligned to
/// `points`, plus the summary CSV. Identical requests return identical
/// strings; the sweep matches what the `apdd run` binary produces for the
/// same parameters.
#[wasm_bindgen]
pub fn sweep_apdd(request: &str) -> String {
    envelope(sweep_payload(request))
}

fn sweep_payload(request: &str) -> Result<Value, String> {
    let req: SweepRequest =
        serde_json::from_str(request).map_err(|e| format!("bad request: {e}"))?;
    let k = req.k.unwrap_or(15);
    let n_min = req.n_min.unwrap_or(5);
    let n_max = req.n_max.unwrap_or(50);
    let n_step = req.n_step.unwrap_or(5).max(1);
    if n_min == 0 || n_min > n_max {
        return Err(format!("bad sweep range {n_min}..={n_max}"));
    }
    capped("k", k, MAX_SWEEP_BLOCK)?;
    capped("n_max", n_max, MAX_SWEEP_POINT)?;
    let trials = req.trials.unwrap_or(10);
    capped("trials", trials, MAX_SWEEP_TRIALS)?;
    let family = match req.family.as_str() {
        "bernoulli" => InstanceFamily::Bernoulli { p: req.p.unwrap_or(0.2) },
        "uniform-pairs" => InstanceFamily::UniformPairs,
        "complete-graph" => InstanceFamily::CompleteGraph,
        "efl" => InstanceFamily::Efl,
        other => {
            return Err(format!(
                "unknown family {other:?} (expected bernoulli, uniform-pairs, complete-graph, or efl)"
            ))
        }
    };
    if matches!(family, InstanceFamily::CompleteGraph) {
        capped("n_max", n_max, MAX_COMPLETE_BLOCK)?;
    }
    if matches!(family, InstanceFamily::Efl) {
        capped("n_max", n_max, MAX_EFL_RECEIVERS)?;
    }
    let schedulers = req
        .schedulers
        .iter()
        .map(|t| SchedulerSpec::parse(t))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let points: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
    capped("sweep points", points.len(), MAX_SWEEP_POINTS)?;
    capped(
        "points x schedulers x trials",
        points.len() * schedulers.len() * trials,
        MAX_SWEEP_CELLS,
    )?;
    let cfg = ExperimentConfig {
        family,
        k,
        points,
        schedulers,
        trials,
        base_seed: req.seed.unwrap_or(1),
    };
    let report = experiment::run_sweep_serial(&cfg).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    let n_sched = cfg.schedulers.len();
    let series: Vec<Value> = cfg
        .schedulers
        .iter()
        .enumerate()
        .map(|(j, spec)| {
            let mut mean = Vec::new();
            let mut stderr = Vec::new();
            let mut lower = Vec::new();
            let mut optimal = Vec::new();
            for i in 0..cfg.points.len() {
                let row = &report.rows[i * n_sched + j];
                if let Some(msg) = &row.error {
                    errors.push(format!("n={} {}: {msg}", row.n_receivers, spec.name()));
                    mean.push(Value::Null);
                    stderr.push(Value::Null);
                    lower.push(Value::Null);
                    optimal.push(Value::Null);
                } else {
                    mean.push(json!(row.mean_apdd));
                    stderr.push(json!(row.stderr_apdd));
                    lower.push(json!(row.mean_lower_bound));
                    optimal.push(json!(row.frac_throughput_optimal));
                }
            }
            json!({
                "scheduler": spec.name(),
                "mean_apdd": mean,
                "stderr_apdd": stderr,
                "mean_lower_bound": lower,
                "frac_throughput_optimal": optimal,
            })
        })
        .collect();
    let receivers: Vec<usize> = cfg.points.iter().map(|&p| cfg.family.receivers_at(p)).collect();
    Ok(json!({
        "points": cfg.points,
        "receivers": receivers,
        "series": series,
        "errors": errors,
        "csv": report.to_csv(),
    }))
}
