mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hpfold::bench::{
    self, benchmark_instance, export_structure, render_table, run_benchmark, run_single_with_matrix, BenchPlan, Method,
    MethodConfig, Problem, BENCHMARKS,
};
use hpfold::blocks::BlockTable;
use hpfold::oracle::exhaustive_search;
use hpfold::sequence::parse_sequence_file;
use hpfold::{parse_sequence, Budget};
use serde_json::json;

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "hpfold",
    version,
    about = "HP lattice protein folding with block-path metaheuristics"
)]
struct Cli {
    /// TOML file with default values; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (1 gives byte-identical output for a fixed seed).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded multi-run comparison on the embedded benchmark suite.
    Bench(BenchArgs),
    /// Fold one or more sequences with a single method.
    Fold(FoldArgs),
    /// Exhaustively search every block path of a short sequence.
    Oracle(OracleArgs),
    /// List the block alphabet and the six head blocks.
    Blocks,
}

#[derive(Args, Default)]
struct BudgetArgs {
    /// Wall-clock budget per run in seconds.
    #[arg(long)]
    time_budget_secs: Option<f64>,
    /// Iteration budget per run (SA moves, colony generations or climbs).
    #[arg(long)]
    iters: Option<u64>,
    /// Base seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Default)]
struct TuningArgs {
    #[arg(long)]
    ants: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Positions replaced per ant in hmcaco.
    #[arg(long)]
    k_perturb: Option<usize>,
    /// Metropolis temperature of the hmcaco model update.
    #[arg(long)]
    temperature: Option<f64>,
    /// Hill-climbing sweep limit.
    #[arg(long)]
    hc_sweeps: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated methods: hc, sa, aco, hmcaco, oracle.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Comma-separated instance ids (S1..S10) or `all`.
    #[arg(long, value_delimiter = ',')]
    instances: Option<Vec<String>>,
    /// Runs per (method, instance).
    #[arg(long)]
    runs: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Directory for runs.jsonl, summary.csv and table.txt.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the best self-avoiding conformation of every run under `<out>/structures`.
    #[arg(long, requires = "out")]
    structures: bool,
}

#[derive(Args)]
struct FoldArgs {
    /// Sequence of h/p letters.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    seq: Option<String>,
    /// File with one sequence per line; `#` lines are skipped.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value = "hmcaco")]
    method: String,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Write the best self-avoiding conformation here (sequence index appended for multi-sequence files).
    #[arg(long)]
    export: Option<PathBuf>,
    /// Write the final pheromone matrix of colony methods here.
    #[arg(long)]
    dump_pheromone: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    seq: String,
    /// Allow paths longer than three blocks.
    #[arg(long)]
    force: bool,
}

const DEFAULT_BENCH_SECS: f64 = 120.0;
const DEFAULT_FOLD_SECS: f64 = 10.0;

fn main() -> Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = cli.threads.or(file.threads).unwrap_or(1);
    if threads == 0 {
        bail!("--threads must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("starting thread pool")?;

    let table = BlockTable::standard();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Bench(args) => bench_cmd(args, &file, threads, table, &mut out)?,
        Command::Fold(args) => fold_cmd(args, &file, threads, table, &mut out)?,
        Command::Oracle(args) => oracle_cmd(args, &file, table, &mut out)?,
        Command::Blocks => blocks_cmd(table, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn resolve_budget(args: &BudgetArgs, file: &FileConfig, default_secs: f64) -> Budget {
    let iters = args.iters.or(file.iters);
    let secs = args.time_budget_secs.or(file.time_budget_secs);
    match (iters, secs) {
        (None, None) => Budget::seconds(default_secs),
        (iterations, secs) => Budget {
            iterations,
            time: secs.map(std::time::Duration::from_secs_f64),
            target_energy: None,
        },
    }
}

fn resolve_tuning(args: &TuningArgs, file: &FileConfig, threads: usize) -> MethodConfig {
    let mut c = file.method.clone().unwrap_or_default();
    c.n_ants = args.ants.unwrap_or(c.n_ants);
    c.alpha = args.alpha.unwrap_or(c.alpha);
    c.beta = args.beta.unwrap_or(c.beta);
    c.rho = args.rho.unwrap_or(c.rho);
    c.k_perturb = args.k_perturb.unwrap_or(c.k_perturb);
    c.temperature = args.temperature.unwrap_or(c.temperature);
    c.hc_sweeps = args.hc_sweeps.unwrap_or(c.hc_sweeps);
    c.parallel_ants |= threads > 1;
    c
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>> {
    names.iter().map(|m| m.parse::<Method>().map_err(Into::into)).collect()
}

fn bench_cmd(
    args: BenchArgs,
    file: &FileConfig,
    threads: usize,
    table: &BlockTable,
    out: &mut impl Write,
) -> Result<()> {
    let default_methods = || vec!["sa".to_string(), "aco".to_string(), "hmcaco".to_string()];
    let methods = parse_methods(
        &args
            .methods
            .clone()
            .or_else(|| file.methods.clone())
            .unwrap_or_else(default_methods),
    )?;
    let ids = args
        .instances
        .clone()
        .or_else(|| file.instances.clone())
        .unwrap_or_else(|| vec!["all".into()]);
    let problems: Vec<Problem> = if ids.iter().any(|i| i.eq_ignore_ascii_case("all")) {
        BENCHMARKS.iter().map(Problem::from_benchmark).collect()
    } else {
        ids.iter()
            .map(|id| benchmark_instance(id).map(Problem::from_benchmark))
            .collect::<hpfold::Result<_>>()?
    };
    let mut config = resolve_tuning(&args.tuning, file, 1);
    // Runs already spread over the pool; keep each run single-threaded.
    config.parallel_ants = false;
    let plan = BenchPlan {
        methods: methods.clone(),
        problems,
        runs_per_instance: args.runs.or(file.runs).unwrap_or(10),
        budget: resolve_budget(&args.budget, file, DEFAULT_BENCH_SECS),
        base_seed: args.budget.seed.or(file.seed).unwrap_or(0),
        config,
        threads,
    };
    let report = run_benchmark(&plan, table)?;

    bench::write_jsonl(report.records(), &mut *out)?;
    let table_text = render_table(&report, &methods);
    eprint!("{table_text}");

    if let Some(dir) = args.out.as_ref().or(file.out.as_ref()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        bench::write_jsonl(report.records(), BufWriter::new(File::create(dir.join("runs.jsonl"))?))?;
        bench::write_summary_csv(&report.summary, BufWriter::new(File::create(dir.join("summary.csv"))?))?;
        fs::write(dir.join("table.txt"), &table_text)?;
        if args.structures {
            let sdir = dir.join("structures");
            fs::create_dir_all(&sdir)?;
            for r in report.results.iter().filter(|r| r.feasible_path.is_some()) {
                let problem = plan
                    .problems
                    .iter()
                    .find(|p| p.id == r.record.instance)
                    .expect("instance of a run");
                let text = export_structure(r, &problem.sequence, table)?;
                let name = format!("{}_{}_{}.txt", r.record.instance, r.record.method, r.record.run);
                fs::write(sdir.join(name), text)?;
            }
        }
    }
    Ok(())
}

fn fold_cmd(args: FoldArgs, file: &FileConfig, threads: usize, table: &BlockTable, out: &mut impl Write) -> Result<()> {
    let method: Method = args.method.parse()?;
    let sequences = match (&args.seq, &args.file) {
        (Some(s), _) => vec![parse_sequence(s)?],
        (None, Some(p)) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_sequence_file(&text)?
        }
        (None, None) => bail!("either --seq or --file is required"),
    };
    if sequences.is_empty() {
        bail!("no sequences found");
    }
    let mut config = resolve_tuning(&args.tuning, file, threads);
    config.oracle_allow_large = false;
    let budget = resolve_budget(&args.budget, file, DEFAULT_FOLD_SECS);
    let base_seed = args.budget.seed.or(file.seed).unwrap_or(0);
    let multi = sequences.len() > 1;

    for (k, seq) in sequences.into_iter().enumerate() {
        let id = if multi {
            format!("input-{}", k + 1)
        } else {
            "input".to_string()
        };
        let problem = Problem::new(id, seq);
        let seed = bench::run_seed(base_seed, method, 0, k);
        let (result, matrix) = run_single_with_matrix(method, &problem, table, &config, &budget, seed, 0)?;
        serde_json::to_writer(&mut *out, &result.record)?;
        writeln!(out)?;
        if let Some(path) = &args.export {
            let path = suffixed(path, multi, k);
            fs::write(&path, export_structure(&result, &problem.sequence, table)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        if let (Some(path), Some(m)) = (&args.dump_pheromone, &matrix) {
            let path = suffixed(path, multi, k);
            m.dump(BufWriter::new(File::create(&path)?))?;
        }
    }
    Ok(())
}

fn suffixed(path: &std::path::Path, multi: bool, k: usize) -> PathBuf {
    if !multi {
        return path.to_path_buf();
    }
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(format!("-{}", k + 1));
    if let Some(ext) = path.extension() {
        name.push(".");
        name.push(ext);
    }
    path.with_file_name(name)
}

fn oracle_cmd(args: OracleArgs, _file: &FileConfig, table: &BlockTable, out: &mut impl Write) -> Result<()> {
    let seq = parse_sequence(&args.seq)?;
    let r = exhaustive_search(&seq, table, args.force)?;
    let line = json!({
        "sequence": seq.to_string(),
        "best_energy": r.best_energy,
        "best_hh_feasible": r.best_hh_feasible,
        "optimal_paths": r.optimal_paths,
        "enumerated": r.enumerated,
        "best_path": r.best_path.choices(),
        "best_feasible_path": r.best_feasible_path.choices(),
    });
    writeln!(out, "{line}")?;
    Ok(())
}

fn blocks_cmd(table: &BlockTable, out: &mut impl Write) -> Result<()> {
    for (id, b) in table.blocks().iter().enumerate() {
        let line = json!({
            "id": id,
            "steps": b.steps.map(|d| d.symbol()),
            "start": table.is_start(id),
            "class": table.start_ids()[table.class_of(id)],
        });
        writeln!(out, "{line}")?;
    }
    Ok(())
}
