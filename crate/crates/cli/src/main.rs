//! Command-line front end: instance generation, scheduler sweeps with CSV
//! summaries, exact small-instance oracles, and single-schedule replay.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use apdd_core::experiment::{self, ExperimentConfig, InstanceFamily};
use apdd_core::sim::{self, ratio_to_f64};
use apdd_core::{
    generators, oracle, ConflictGraph, MwisMode, Schedule, SchedulerSpec, StateFeedbackMatrix,
};
use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "apdd",
    version,
    about = "Coded broadcast with side information: schedulers, decoding-delay simulation, exact oracles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an instance in the state-feedback text format and print block
    /// statistics.
    Generate(GenerateArgs),
    /// Sweep schedulers over an instance family and write a summary CSV.
    Run(RunArgs),
    /// Run an exact search (dmin, perfect, mwis, efl-check) on an instance.
    Oracle(OracleArgs),
    /// Replay a schedule file against an instance and write decode times.
    Simulate(SimulateArgs),
}

#[derive(Args, Clone)]
struct GenerateArgs {
    /// Instance family: bernoulli | uniform-pairs | complete-graph | efl.
    #[arg(long)]
    family: String,
    /// Block size in packets (complete-graph: the whole instance follows).
    #[arg(long, default_value_t = 15)]
    k: usize,
    /// Receiver count (efl: receivers and want-set size; the block size is
    /// then n(n+1)/2).
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Demand probability for bernoulli.
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instance file to write. Without it the instance goes to stdout and
    /// the summary to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Start from a named sweep preset (see `run --preset help`).
    #[arg(long)]
    preset: Option<String>,
    /// key=value config file; flags given on the command line still win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// bernoulli | uniform-pairs | complete-graph | efl | file.
    #[arg(long, default_value = "bernoulli")]
    family: String,
    /// Instance file for --family file (reused at every sweep point).
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Block size for bernoulli and uniform-pairs.
    #[arg(long, default_value_t = 15)]
    k: usize,
    /// Demand probability for bernoulli.
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    #[arg(long, default_value_t = 5)]
    n_step: usize,
    /// Comma list: rlnc, uncoded, sidnc, gidnc, vc, mis, mis-exact,
    /// mis-greedy. Plain "mis" follows --mwis-mode.
    #[arg(long, default_value = "vc,rlnc,gidnc")]
    schedulers: String,
    /// exact | greedy; picks the solver behind the plain "mis" token.
    #[arg(long, default_value = "exact")]
    mwis_mode: String,
    /// Instances per (point, scheduler) cell.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sweep points (0 = one per CPU).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Summary CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct OracleArgs {
    /// Instance file in the state-feedback text format.
    #[arg(long)]
    instance: PathBuf,
    /// dmin | perfect | mwis | efl-check.
    #[arg(long)]
    oracle: String,
    /// Schedule-length bound for dmin (default: the block size).
    #[arg(long)]
    lmax: Option<usize>,
}

#[derive(Args, Clone)]
struct SimulateArgs {
    /// Instance file in the state-feedback text format.
    #[arg(long)]
    instance: PathBuf,
    /// Schedule file: one transmission per line, tag R (random coefficients)
    /// or S (plain XOR), then 1-based packet indices.
    #[arg(long)]
    schedule: PathBuf,
    /// Coefficient seed for R schedules.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let matches = Cli::command().get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    match &cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Run(a) => cmd_run(a, matches.subcommand_matches("run").expect("run arguments")),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Simulate(a) => cmd_simulate(a),
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let a = match args.family.as_str() {
        "bernoulli" => generators::bernoulli(args.n, args.k, args.p, args.seed)?,
        "uniform-pairs" => generators::uniform_pairs(args.n, args.k, args.seed)?,
        "complete-graph" => generators::complete_graph(args.k)?,
        "efl" => generators::efl(args.n, args.seed)?,
        other => bail!(
            "unknown family {other:?} (expected bernoulli, uniform-pairs, complete-graph, or efl)"
        ),
    };
    let summary = instance_summary(&a);
    match &args.out {
        Some(path) => {
            fs::write(path, a.render()).with_context(|| format!("writing {}", path.display()))?;
            print!("{summary}");
        }
        None => {
            print!("{}", a.render());
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn instance_summary(a: &StateFeedbackMatrix) -> String {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for n in 0..a.n_receivers() {
        *hist.entry(a.want_count(n)).or_default() += 1;
    }
    let hist: Vec<String> = hist.iter().map(|(w, c)| format!("{w}:{c}")).collect();
    let lb = sim::lower_bound(a);
    let rlnc = sim::rlnc_apdd_closed_form(a);
    format!(
        "n_receivers = {}\nn_packets = {}\ntotal_demands = {}\nwant_histogram = {}\nlower_bound = {} ({:.6})\nrlnc_apdd = {} ({:.6})\n",
        a.n_receivers(),
        a.n_packets(),
        a.total_demands(),
        hist.join(" "),
        lb,
        ratio_to_f64(lb),
        rlnc,
        ratio_to_f64(rlnc),
    )
}

fn cmd_run(args: &RunArgs, matches: &ArgMatches) -> Result<()> {
    let (cfg, workers, out) = resolve_run(args, matches)?;
    let report = experiment::run_sweep(&cfg, workers)?;
    write_out(out.as_deref(), &report.to_csv())?;
    let failed: Vec<&experiment::SummaryRow> =
        report.rows.iter().filter(|r| r.error.is_some()).collect();
    if !failed.is_empty() {
        let msgs: BTreeSet<&str> = failed.iter().filter_map(|r| r.error.as_deref()).collect();
        for msg in msgs {
            eprintln!("error: {msg}");
        }
        eprintln!(
            "{} of {} cells failed; their CSV rows carry NA columns",
            failed.len(),
            report.rows.len()
        );
        std::process::exit(1);
    }
    Ok(())
}

/// Working copy of every `run` knob; presets and config files fill it, then
/// flags given explicitly on the command line win.
#[derive(Clone, Debug)]
struct RunSettings {
    family: String,
    instance: Option<PathBuf>,
    k: usize,
    p: f64,
    n_min: usize,
    n_max: usize,
    n_step: usize,
    schedulers: String,
    mwis_mode: String,
    trials: usize,
    seed: u64,
    workers: usize,
    out: Option<PathBuf>,
}

impl From<&RunArgs> for RunSettings {
    fn from(a: &RunArgs) -> Self {
        RunSettings {
            family: a.family.clone(),
            instance: a.instance.clone(),
            k: a.k,
            p: a.p,
            n_min: a.n_min,
            n_max: a.n_max,
            n_step: a.n_step,
            schedulers: a.schedulers.clone(),
            mwis_mode: a.mwis_mode.clone(),
            trials: a.trials,
            seed: a.seed,
            workers: a.workers,
            out: a.out.clone(),
        }
    }
}

fn resolve_run(
    args: &RunArgs,
    matches: &ArgMatches,
) -> Result<(ExperimentConfig, usize, Option<PathBuf>)> {
    let mut s = RunSettings::from(args);
    if let Some(name) = &args.preset {
        let Some(pc) = experiment::preset(name) else {
            bail!(
                "unknown preset {name:?} (available: {})",
                experiment::PRESET_NAMES.join(", ")
            );
        };
        apply_preset(&mut s, &pc);
    }
    if let Some(path) = &args.config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        apply_config(&mut s, &text)?;
    }
    reapply_explicit(&mut s, args, matches);
    build_config(&s)
}

fn apply_preset(s: &mut RunSettings, pc: &ExperimentConfig) {
    match &pc.family {
        InstanceFamily::Bernoulli { p } => {
            s.family = "bernoulli".into();
            s.p = *p;
        }
        InstanceFamily::UniformPairs => s.family = "uniform-pairs".into(),
        InstanceFamily::CompleteGraph => s.family = "complete-graph".into(),
        InstanceFamily::Efl => s.family = "efl".into(),
        InstanceFamily::File(_) => s.family = "file".into(),
    }
    s.k = pc.k;
    if let (Some(&first), Some(&last)) = (pc.points.first(), pc.points.last()) {
        s.n_min = first;
        s.n_max = last;
        s.n_step = if pc.points.len() > 1 { pc.points[1] - pc.points[0] } else { 1 };
    }
    s.schedulers = pc.schedulers.iter().map(|x| x.name()).collect::<Vec<_>>().join(",");
    s.trials = pc.trials;
    s.seed = pc.base_seed;
}

fn apply_config(s: &mut RunSettings, text: &str) -> Result<()> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got {line:?}", idx + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        let ctx = || format!("config line {}: bad value for {key}", idx + 1);
        match key {
            "family" => s.family = value.to_string(),
            "instance" => s.instance = Some(PathBuf::from(value)),
            "k" => s.k = value.parse().with_context(ctx)?,
            "p" => s.p = value.parse().with_context(ctx)?,
            "n-min" => s.n_min = value.parse().with_context(ctx)?,
            "n-max" => s.n_max = value.parse().with_context(ctx)?,
            "n-step" => s.n_step = value.parse().with_context(ctx)?,
            "schedulers" => s.schedulers = value.to_string(),
            "mwis-mode" => s.mwis_mode = value.to_string(),
            "trials" => s.trials = value.parse().with_context(ctx)?,
            "seed" => s.seed = value.parse().with_context(ctx)?,
            "workers" => s.workers = value.parse().with_context(ctx)?,
            "out" => s.out = Some(PathBuf::from(value)),
            other => bail!("config line {}: unknown key {other:?}", idx + 1),
        }
    }
    Ok(())
}

fn reapply_explicit(s: &mut RunSettings, args: &RunArgs, m: &ArgMatches) {
    let from_cli = |id: &str| m.value_source(id) == Some(ValueSource::CommandLine);
    if from_cli("family") {
        s.family = args.family.clone();
    }
    if from_cli("instance") {
        s.instance = args.instance.clone();
    }
    if from_cli("k") {
        s.k = args.k;
    }
    if from_cli("p") {
        s.p = args.p;
    }
    if from_cli("n_min") {
        s.n_min = args.n_min;
    }
    if from_cli("n_max") {
        s.n_max = args.n_max;
    }
    if from_cli("n_step") {
        s.n_step = args.n_step;
    }
    if from_cli("schedulers") {
        s.schedulers = args.schedulers.clone();
    }
    if from_cli("mwis_mode") {
        s.mwis_mode = args.mwis_mode.clone();
    }
    if from_cli("trials") {
        s.trials = args.trials;
    }
    if from_cli("seed") {
        s.seed = args.seed;
    }
    if from_cli("workers") {
        s.workers = args.workers;
    }
    if from_cli("out") {
        s.out = args.out.clone();
    }
}

fn build_config(s: &RunSettings) -> Result<(ExperimentConfig, usize, Option<PathBuf>)> {
    if s.n_step == 0 {
        bail!("--n-step must be at least 1");
    }
    let points: Vec<usize> = (s.n_min..=s.n_max).step_by(s.n_step).collect();
    let mode = parse_mwis_mode(&s.mwis_mode)?;
    let schedulers = parse_scheduler_list(&s.schedulers, mode)?;
    let family = match s.family.as_str() {
        "bernoulli" => InstanceFamily::Bernoulli { p: s.p },
        "uniform-pairs" => InstanceFamily::UniformPairs,
        "complete-graph" => InstanceFamily::CompleteGraph,
        "efl" => InstanceFamily::Efl,
        "file" => {
            let Some(path) = &s.instance else {
                bail!("--family file needs --instance");
            };
            InstanceFamily::File(read_instance(path)?)
        }
        other => bail!(
            "unknown family {other:?} (expected bernoulli, uniform-pairs, complete-graph, efl, or file)"
        ),
    };
    let cfg = ExperimentConfig {
        family,
        k: s.k,
        points,
        schedulers,
        trials: s.trials,
        base_seed: s.seed,
    };
    cfg.validate()?;
    Ok((cfg, s.workers, s.out.clone()))
}

fn parse_mwis_mode(token: &str) -> Result<MwisMode> {
    match token {
        "exact" => Ok(MwisMode::Exact),
        "greedy" => Ok(MwisMode::Greedy),
        other => bail!("unknown MWIS mode {other:?} (expected exact or greedy)"),
    }
}

fn parse_scheduler_list(list: &str, mode: MwisMode) -> Result<Vec<SchedulerSpec>> {
    let mut out = Vec::new();
    for token in list.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        out.push(if token == "mis" {
            SchedulerSpec::Mis(mode)
        } else {
            SchedulerSpec::parse(token)?
        });
    }
    Ok(out)
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let a = read_instance(&args.instance)?;
    let start = Instant::now();
    match args.oracle.as_str() {
        "dmin" => {
            let lmax = args.lmax.unwrap_or_else(|| a.n_packets());
            let r = oracle::dmin_bruteforce(&a, lmax)?;
            match r.value {
                Some(v) => println!("value = {} ({:.6})", v, ratio_to_f64(v)),
                None => println!(
                    "value = unreachable (no schedule of length <= {} completes)",
                    r.search_bound
                ),
            }
            if let Some(w) = &r.witness {
                println!("witness:");
                print!("{}", w.render());
            }
            println!("exhausted = {}", r.exhausted);
            println!("search_bound = {}", r.search_bound);
        }
        "perfect" => {
            let r = oracle::perfect_solution_exists(&a)?;
            println!("value = {}", r.exists);
            if let Some(rounds) = &r.rounds {
                println!("witness:");
                print!("{}", oracle::rounds_to_schedule(rounds)?.render());
            }
            println!("exhausted = true");
        }
        "mwis" => {
            let g = ConflictGraph::from_sfm(&a);
            let r = oracle::mwis_exact(&g)?;
            println!("value = {}", r.weight);
            let set: Vec<String> = r.vertices.iter().map(|k| (k + 1).to_string()).collect();
            println!("witness: {}", set.join(" "));
            println!("exhausted = true");
        }
        "efl-check" => {
            let ok = oracle::check_efl(&a)?;
            println!("value = {ok}");
            println!("exhausted = true");
        }
        other => bail!("unknown oracle {other:?} (expected dmin, perfect, mwis, or efl-check)"),
    }
    println!("wall_time_ms = {:.1}", start.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let a = read_instance(&args.instance)?;
    let text = fs::read_to_string(&args.schedule)
        .with_context(|| format!("reading {}", args.schedule.display()))?;
    let mut s = Schedule::parse(&text)?;
    s.seed = args.seed;
    let report = apdd_core::simulate(&a, &s)?;
    write_out(args.out.as_deref(), &report.to_csv(&a))
}

fn read_instance(path: &Path) -> Result<StateFeedbackMatrix> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(StateFeedbackMatrix::parse(&text)?)
}

fn write_out(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> RunSettings {
        RunSettings {
            family: "bernoulli".into(),
            instance: None,
            k: 15,
            p: 0.2,
            n_min: 5,
            n_max: 100,
            n_step: 5,
            schedulers: "vc,rlnc,gidnc".into(),
            mwis_mode: "exact".into(),
            trials: 50,
            seed: 1,
            workers: 0,
            out: None,
        }
    }

    #[test]
    fn scheduler_lists_parse_with_the_mode_fallback() {
        let specs = parse_scheduler_list("mis, rlnc", MwisMode::Greedy).unwrap();
        assert_eq!(specs, vec![SchedulerSpec::Mis(MwisMode::Greedy), SchedulerSpec::Rlnc]);
        let specs = parse_scheduler_list("mis-exact,vc", MwisMode::Greedy).unwrap();
        assert_eq!(specs, vec![SchedulerSpec::Mis(MwisMode::Exact), SchedulerSpec::VcAlg1]);
        assert!(parse_scheduler_list("nope", MwisMode::Exact).is_err());
    }

    #[test]
    fn config_files_set_fields_and_reject_junk() {
        let mut s = settings();
        apply_config(&mut s, "# comment\n\nk = 7\nn-min=2\nschedulers = rlnc\n").unwrap();
        assert_eq!(s.k, 7);
        assert_eq!(s.n_min, 2);
        assert_eq!(s.schedulers, "rlnc");
        assert!(apply_config(&mut settings(), "frobnicate=1\n").is_err());
        assert!(apply_config(&mut settings(), "just a line\n").is_err());
        assert!(apply_config(&mut settings(), "k = zebra\n").is_err());
    }

    #[test]
    fn presets_round_trip_into_settings() {
        let mut s = settings();
        apply_preset(&mut s, &experiment::preset("sweep-pairs-k20").unwrap());
        assert_eq!(s.family, "uniform-pairs");
        assert_eq!(s.k, 20);
        assert_eq!((s.n_min, s.n_max, s.n_step), (5, 100, 5));
        assert_eq!(s.schedulers, "mis-exact,mis-greedy,rlnc,gidnc");
        let (cfg, _, _) = build_config(&s).unwrap();
        assert_eq!(cfg.points.len(), 20);
    }

    #[test]
    fn summaries_show_exact_and_decimal_delay() {
        let a = generators::complete_graph(4).unwrap();
        let text = instance_summary(&a);
        assert!(text.contains("n_receivers = 6"));
        assert!(text.contains("want_histogram = 2:6"));
        assert!(text.contains("lower_bound = 3/2 (1.500000)"));
        assert!(text.contains("rlnc_apdd = 2 (2.000000)"));
    }
}
