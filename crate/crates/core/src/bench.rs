//! Seeded multi-run benchmark harness and reporting.
//!
//! The embedded suite holds the ten standard 48-residue instances for the
//! cubic lattice together with their known optimal HP energies. Runs report
//! the most H-H contacts over self-avoiding conformations they visited
//! (`best_hh_feasible`, shown as the HP energy `-hh`) next to the internal
//! search objective (`best_internal_energy`).

use std::fmt::{self, Write as _};
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aco::{aco_run_with_matrix, AcoConfig};
use crate::blocks::BlockTable;
use crate::error::{HpError, Result};
use crate::hmcaco::{hmcaco_run_with_matrix, EtaForm, HmcacoConfig};
use crate::local_search::{hc_run, sa_run, CoolingSchedule};
use crate::oracle::exhaustive_search;
use crate::path::{decode, path_len, Path};
use crate::pheromone::PheromoneMatrix;
use crate::run::{mix_seed, Budget, RunOutcome};
use crate::scoring::{energy, ScoreBreakdown};
use crate::sequence::{parse_sequence, HpSequence};

/// Published best (mean) HP energies of one method on one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportedResult {
    pub best: i32,
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkInstance {
    pub id: &'static str,
    pub sequence: &'static str,
    /// Optimal HP energy.
    pub reference_emin: i32,
    pub reported_sa: ReportedResult,
    pub reported_aco: ReportedResult,
    pub reported_hmcaco: ReportedResult,
}

impl BenchmarkInstance {
    pub fn parse(&self) -> HpSequence {
        parse_sequence(self.sequence).expect("embedded benchmark sequences are valid")
    }

    pub fn reported(&self, method: Method) -> Option<ReportedResult> {
        match method {
            Method::Sa => Some(self.reported_sa),
            Method::Aco => Some(self.reported_aco),
            Method::Hmcaco => Some(self.reported_hmcaco),
            Method::Hc | Method::Oracle => None,
        }
    }
}

const fn rep(best: i32, mean: f64) -> ReportedResult {
    ReportedResult { best, mean }
}

pub const BENCHMARKS: [BenchmarkInstance; 10] = [
    BenchmarkInstance {
        id: "S1",
        sequence: "hphhpphhhhphhhpphhpphphhhphphhpphhppphpppppppphh",
        reference_emin: -32,
        reported_sa: rep(-26, -23.7),
        reported_aco: rep(-29, -27.0),
        reported_hmcaco: rep(-31, -28.6),
    },
    BenchmarkInstance {
        id: "S2",
        sequence: "hhhhphhphhhhhpphpphhpphpppppphpphppphpphhpphhhph",
        reference_emin: -34,
        reported_sa: rep(-27, -23.9),
        reported_aco: rep(-29, -26.7),
        reported_hmcaco: rep(-32, -29.2),
    },
    BenchmarkInstance {
        id: "S3",
        sequence: "phphhphhhhhhpphphpphphhphphppphpphhpphhpphphpphp",
        reference_emin: -34,
        reported_sa: rep(-28, -25.1),
        reported_aco: rep(-28, -26.7),
        reported_hmcaco: rep(-32, -29.5),
    },
    BenchmarkInstance {
        id: "S4",
        sequence: "phphhpphphhhpphhphhppphhhhhpphphhphphpppphpphphp",
        reference_emin: -33,
        reported_sa: rep(-28, -24.1),
        reported_aco: rep(-29, -26.6),
        reported_hmcaco: rep(-31, -29.1),
    },
    BenchmarkInstance {
        id: "S5",
        sequence: "pphppphphhhhpphhhhphhphhhpphphphpphpppppphhphhph",
        reference_emin: -32,
        reported_sa: rep(-28, -25.1),
        reported_aco: rep(-29, -26.5),
        reported_hmcaco: rep(-31, -28.5),
    },
    BenchmarkInstance {
        id: "S6",
        sequence: "hhhppphhphphhphhphhphppppppphphpphppphpphhhhhhph",
        reference_emin: -32,
        reported_sa: rep(-24, -23.0),
        reported_aco: rep(-28, -25.7),
        reported_hmcaco: rep(-30, -27.7),
    },
    BenchmarkInstance {
        id: "S7",
        sequence: "phpppphphhhphphhhhphhphhppphphppphhhpphhpphhppph",
        reference_emin: -32,
        reported_sa: rep(-26, -23.6),
        reported_aco: rep(-28, -26.5),
        reported_hmcaco: rep(-31, -28.4),
    },
    BenchmarkInstance {
        id: "S8",
        sequence: "phhphhhphhhhpphhhpppppphphhpphhphppphhphphphhppp",
        reference_emin: -31,
        reported_sa: rep(-27, -24.1),
        reported_aco: rep(-29, -25.9),
        reported_hmcaco: rep(-29, -27.8),
    },
    BenchmarkInstance {
        id: "S9",
        sequence: "phphpppphphphpphphhhhhhpphhhphpphphhpphphhhpppph",
        reference_emin: -34,
        reported_sa: rep(-28, -25.2),
        reported_aco: rep(-30, -27.8),
        reported_hmcaco: rep(-32, -29.7),
    },
    BenchmarkInstance {
        id: "S10",
        sequence: "phhpppppphhppphhhphpphphhpphpphpphhpphhhhhhhpphh",
        reference_emin: -33,
        reported_sa: rep(-27, -24.3),
        reported_aco: rep(-29, -27.0),
        reported_hmcaco: rep(-31, -29.6),
    },
];

pub fn benchmark_instance(id: &str) -> Result<&'static BenchmarkInstance> {
    BENCHMARKS
        .iter()
        .find(|b| b.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| HpError::UnknownInstance(id.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hc,
    Sa,
    Aco,
    Hmcaco,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Hc, Method::Sa, Method::Aco, Method::Hmcaco, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Hc => "hc",
            Method::Sa => "sa",
            Method::Aco => "aco",
            Method::Hmcaco => "hmcaco",
            Method::Oracle => "oracle",
        }
    }

    /// Stable code used for seed derivation.
    pub fn code(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = HpError;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HpError::UnknownMethod(s.to_string()))
    }
}

/// Tunables for every method. Budget and seed are supplied per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MethodConfig {
    pub n_ants: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub k_perturb: usize,
    pub temperature: f64,
    pub temperature_decay: Option<f64>,
    pub hmcaco_eta: EtaForm,
    pub hc_sweeps: usize,
    /// SA start temperature; `None` means `2 * thh`.
    pub sa_t0: Option<f64>,
    pub sa_alpha: f64,
    /// SA iterations per temperature level; `None` means the neighborhood size.
    pub sa_steps_per_level: Option<u64>,
    pub parallel_ants: bool,
    /// Let the oracle enumerate instances beyond three blocks.
    pub oracle_allow_large: bool,
}

impl Default for MethodConfig {
    fn default() -> Self {
        let aco = AcoConfig::default();
        let hm = HmcacoConfig::default();
        Self {
            n_ants: aco.n_ants,
            alpha: aco.alpha,
            beta: aco.beta,
            rho: aco.rho,
            k_perturb: hm.k_perturb,
            temperature: hm.temperature,
            temperature_decay: hm.temperature_decay,
            hmcaco_eta: hm.eta,
            hc_sweeps: aco.hc_sweeps,
            sa_t0: None,
            sa_alpha: 0.98,
            sa_steps_per_level: None,
            parallel_ants: false,
            oracle_allow_large: false,
        }
    }
}

impl MethodConfig {
    pub fn cooling_schedule(&self, seq: &HpSequence) -> CoolingSchedule {
        let d = CoolingSchedule::default_for(seq);
        CoolingSchedule {
            t0: self.sa_t0.unwrap_or(d.t0),
            alpha: self.sa_alpha,
            steps_per_level: self.sa_steps_per_level.unwrap_or(d.steps_per_level),
        }
    }

    pub fn aco(&self, budget: Budget, seed: u64) -> AcoConfig {
        AcoConfig {
            n_ants: self.n_ants,
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            hc_sweeps: self.hc_sweeps,
            budget,
            seed,
            parallel_ants: self.parallel_ants,
        }
    }

    /// Colony settings for a path of `positions` blocks; `k_perturb` is
    /// capped at the path length.
    pub fn hmcaco(&self, budget: Budget, seed: u64, positions: usize) -> HmcacoConfig {
        HmcacoConfig {
            n_ants: self.n_ants,
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            k_perturb: self.k_perturb.min(positions),
            temperature: self.temperature,
            temperature_decay: self.temperature_decay,
            eta: self.hmcaco_eta,
            hc_sweeps: self.hc_sweeps,
            budget,
            seed,
            parallel_ants: self.parallel_ants,
        }
    }
}

/// A named sequence to fold.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub id: String,
    pub sequence: HpSequence,
}

impl Problem {
    pub fn new(id: impl Into<String>, sequence: HpSequence) -> Self {
        Self {
            id: id.into(),
            sequence,
        }
    }

    pub fn from_benchmark(b: &BenchmarkInstance) -> Self {
        Self::new(b.id, b.parse())
    }
}

/// One line of the JSON-lines run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub method: Method,
    pub run: usize,
    pub seed: u64,
    /// Most H-H contacts on a self-avoiding conformation; absent when none was seen.
    pub best_hh_feasible: Option<u32>,
    /// Set when the run never visited a self-avoiding conformation.
    pub infeasible: bool,
    /// Overlaps of the reported conformation: the one behind `best_hh_feasible`
    /// when present (always 0), else the lowest-energy one.
    pub ov_of_best: u32,
    pub best_internal_energy: f64,
    /// Contacts and overlaps of the lowest-energy conformation.
    pub internal_hh: u32,
    pub internal_ov: u32,
    pub iterations: u64,
    /// Omitted (null) for iteration-budgeted runs so their output is reproducible.
    pub wall_time_seconds: Option<f64>,
}

impl RunRecord {
    /// HP energy of the reported conformation (`-hh`).
    pub fn hp_energy(&self) -> Option<i64> {
        self.best_hh_feasible.map(|h| -(h as i64))
    }
}

/// A record with the paths behind it.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub record: RunRecord,
    pub best_path: Path,
    /// Conformation behind `best_hh_feasible`.
    pub feasible_path: Option<Path>,
    pub trace: Vec<crate::run::TracePoint>,
}

/// Seed of run `run` of `method` on instance number `instance`:
/// `mix_seed(base, [method code, run, instance])`.
pub fn run_seed(base_seed: u64, method: Method, run: usize, instance: usize) -> u64 {
    mix_seed(base_seed, &[method.code(), run as u64, instance as u64])
}

/// Execute one run and re-verify the reported conformation by full rescoring.
pub fn run_single(
    method: Method,
    problem: &Problem,
    table: &BlockTable,
    config: &MethodConfig,
    budget: &Budget,
    seed: u64,
    run: usize,
) -> Result<RunResult> {
    run_single_with_matrix(method, problem, table, config, budget, seed, run).map(|(r, _)| r)
}

/// As [`run_single`], also returning the final pheromone matrix of colony methods.
pub fn run_single_with_matrix(
    method: Method,
    problem: &Problem,
    table: &BlockTable,
    config: &MethodConfig,
    budget: &Budget,
    seed: u64,
    run: usize,
) -> Result<(RunResult, Option<PheromoneMatrix>)> {
    let seq = &problem.sequence;
    let (outcome, matrix) = match method {
        Method::Hc => (hc_run(seq, table, config.hc_sweeps, budget, seed)?, None),
        Method::Sa => (sa_run(seq, table, &config.cooling_schedule(seq), budget, seed)?, None),
        Method::Aco => {
            let (o, m) = aco_run_with_matrix(seq, table, &config.aco(*budget, seed))?;
            (o, Some(m))
        }
        Method::Hmcaco => {
            let (o, m) = hmcaco_run_with_matrix(seq, table, &config.hmcaco(*budget, seed, path_len(seq.len())))?;
            (o, Some(m))
        }
        Method::Oracle => (oracle_outcome(seq, table, config.oracle_allow_large)?, None),
    };
    let wall = (!budget.is_deterministic()).then_some(outcome.elapsed.as_secs_f64());
    let result = make_result(problem, method, run, seed, outcome, wall, table)?;
    Ok((result, matrix))
}

fn oracle_outcome(seq: &HpSequence, table: &BlockTable, allow_large: bool) -> Result<RunOutcome> {
    let start = std::time::Instant::now();
    let r = exhaustive_search(seq, table, allow_large)?;
    let mut eval = crate::scoring::Evaluator::new(seq, table);
    let best = eval.evaluate(r.best_path.choices());
    let feasible = eval.evaluate(r.best_feasible_path.choices());
    Ok(RunOutcome {
        best_path: r.best_path,
        best,
        best_feasible: Some((r.best_feasible_path, feasible)),
        trace: Vec::new(),
        iterations: r.enumerated,
        elapsed: start.elapsed(),
    })
}

fn rescore(path: &Path, seq: &HpSequence, table: &BlockTable) -> Result<ScoreBreakdown> {
    energy(&decode(path, table, seq.len())?, seq)
}

fn make_result(
    problem: &Problem,
    method: Method,
    run: usize,
    seed: u64,
    outcome: RunOutcome,
    wall_time_seconds: Option<f64>,
    table: &BlockTable,
) -> Result<RunResult> {
    let seq = &problem.sequence;
    let best = rescore(&outcome.best_path, seq, table)?;
    assert_eq!(best, outcome.best, "tracked best score disagrees with a full rescore");
    let (best_hh_feasible, feasible_path) = match outcome.best_feasible {
        Some((path, tracked)) => {
            let s = rescore(&path, seq, table)?;
            assert!(
                s.is_feasible() && s == tracked,
                "reported conformation failed re-verification"
            );
            (Some(s.hh), Some(path))
        }
        None => (None, None),
    };
    Ok(RunResult {
        record: RunRecord {
            instance: problem.id.clone(),
            method,
            run,
            seed,
            best_hh_feasible,
            infeasible: best_hh_feasible.is_none(),
            ov_of_best: if best_hh_feasible.is_some() { 0 } else { best.ov },
            best_internal_energy: best.energy,
            internal_hh: best.hh,
            internal_ov: best.ov,
            iterations: outcome.iterations,
            wall_time_seconds,
        },
        best_path: outcome.best_path,
        feasible_path,
        trace: outcome.trace,
    })
}

/// Per (instance, method) aggregate in the `best(mean)` layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub instance: String,
    pub method: Method,
    pub runs: usize,
    pub feasible_runs: usize,
    pub best_hh: Option<u32>,
    /// Mean `best_hh_feasible` over runs that found a feasible conformation.
    pub mean_hh: Option<f64>,
    pub mean_internal_energy: f64,
}

impl SummaryRow {
    pub fn cell(&self) -> String {
        match (self.best_hh, self.mean_hh) {
            (Some(b), Some(m)) => format!("-{b}(-{m:.1})"),
            _ => "n/a".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub results: Vec<RunResult>,
    pub summary: Vec<SummaryRow>,
}

impl BenchReport {
    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.results.iter().map(|r| &r.record)
    }

    pub fn row(&self, instance: &str, method: Method) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|r| r.instance == instance && r.method == method)
    }
}

/// Summarize records in first-appearance order of (instance, method).
pub fn summarize<'a>(records: impl IntoIterator<Item = &'a RunRecord>) -> Vec<SummaryRow> {
    let mut groups: Vec<((String, Method), Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let key = (r.instance.clone(), r.method);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|((instance, method), rs)| {
            let hh: Vec<u32> = rs.iter().filter_map(|r| r.best_hh_feasible).collect();
            SummaryRow {
                instance,
                method,
                runs: rs.len(),
                feasible_runs: hh.len(),
                best_hh: hh.iter().copied().max(),
                mean_hh: (!hh.is_empty()).then(|| hh.iter().map(|&h| h as f64).sum::<f64>() / hh.len() as f64),
                mean_internal_energy: rs.iter().map(|r| r.best_internal_energy).sum::<f64>() / rs.len() as f64,
            }
        })
        .collect()
}

/// Execution plan for [`run_benchmark`].
#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub methods: Vec<Method>,
    pub problems: Vec<Problem>,
    pub runs_per_instance: usize,
    pub budget: Budget,
    pub base_seed: u64,
    pub config: MethodConfig,
    /// Worker threads; 1 runs everything on the calling thread.
    pub threads: usize,
}

/// Run every (instance, method, run) job. Results are ordered by instance,
/// then method, then run index regardless of the thread count.
pub fn run_benchmark(plan: &BenchPlan, table: &BlockTable) -> Result<BenchReport> {
    if plan.runs_per_instance == 0 {
        return Err(HpError::InvalidConfig("runs_per_instance must be at least 1".into()));
    }
    if plan.methods.is_empty() || plan.problems.is_empty() {
        return Err(HpError::InvalidConfig(
            "at least one method and one instance are required".into(),
        ));
    }
    let jobs: Vec<(usize, Method, usize)> = plan
        .problems
        .iter()
        .enumerate()
        .flat_map(|(j, _)| {
            plan.methods
                .iter()
                .flat_map(move |&m| (0..plan.runs_per_instance).map(move |i| (j, m, i)))
        })
        .collect();

    let job = |&(j, method, i): &(usize, Method, usize)| {
        let seed = run_seed(plan.base_seed, method, i, j);
        run_single(method, &plan.problems[j], table, &plan.config, &plan.budget, seed, i)
    };

    let results: Result<Vec<RunResult>> = if plan.threads <= 1 {
        jobs.iter().map(job).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.threads)
            .build()
            .map_err(|e| HpError::InvalidConfig(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(job).collect())
    };
    let results = results?;
    let summary = summarize(results.iter().map(|r| &r.record));
    Ok(BenchReport { results, summary })
}

pub fn write_jsonl<'a, W: Write>(records: impl IntoIterator<Item = &'a RunRecord>, mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "instance,method,runs,feasible_runs,best_hh,mean_hh,mean_internal_energy"
    )?;
    for r in rows {
        let opt = |v: Option<String>| v.unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.instance,
            r.method,
            r.runs,
            r.feasible_runs,
            opt(r.best_hh.map(|h| h.to_string())),
            opt(r.mean_hh.map(|m| format!("{m:.4}"))),
            r.mean_internal_energy
        )?;
    }
    Ok(())
}

/// Human-readable comparison table: one row per instance, one `best(mean)`
/// HP-energy column per method, with the known optimum when available.
pub fn render_table(report: &BenchReport, methods: &[Method]) -> String {
    let mut instances: Vec<&str> = Vec::new();
    for row in &report.summary {
        if !instances.contains(&row.instance.as_str()) {
            instances.push(&row.instance);
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{:<8} {:>6}", "ID", "E_min");
    for m in methods {
        let _ = write!(out, " {:>14}", m.name().to_uppercase());
    }
    out.push('\n');
    for inst in instances {
        let emin = benchmark_instance(inst)
            .map(|b| b.reference_emin.to_string())
            .unwrap_or_else(|_| "?".into());
        let _ = write!(out, "{inst:<8} {emin:>6}");
        for &m in methods {
            let cell = report.row(inst, m).map_or_else(|| "-".into(), SummaryRow::cell);
            let _ = write!(out, " {cell:>14}");
        }
        out.push('\n');
    }
    out
}

/// Structure text for the conformation behind a record's `best_hh_feasible`.
pub fn export_structure(result: &RunResult, seq: &HpSequence, table: &BlockTable) -> Result<String> {
    let path = result.feasible_path.as_ref().ok_or_else(|| {
        HpError::InvalidConfig(format!(
            "run {} of {} kept no feasible conformation",
            result.record.run, result.record.instance
        ))
    })?;
    let conf = decode(path, table, seq.len())?;
    let score = energy(&conf, seq)?;
    let r = &result.record;
    let header = [
        ("instance", r.instance.clone()),
        ("method", r.method.to_string()),
        ("seed", r.seed.to_string()),
        ("hh", score.hh.to_string()),
        ("energy", score.energy.to_string()),
    ];
    Ok(conf.to_structure_text(seq, &header))
}
