//! Run classification, parameter sweeps, file output and the command line.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::dynamics::{self, InitialData, RunResult, SimConfig, SimState, Termination};
use crate::grid::RadialGrid;
use crate::operators::{self, Identity, ResidualReport, SmoothRun};
use crate::{Error, Result};

/// Peak-to-initial ratio of `max u` up to which a completed run counts as bounded.
pub const BOUNDED_RATIO: f64 = 10.0;

/// Smallest convergence order accepted by `verify`.
pub const MIN_ORDER: f64 = 1.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    GlobalBounded,
    GrowthSuspected,
    Inconclusive,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::GlobalBounded => "GlobalBounded",
            Label::GrowthSuspected => "GrowthSuspected",
            Label::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    pub reason: String,
    /// Peak `max u` over initial `max u`.
    pub peak_ratio: f64,
    pub final_t: f64,
}

/// What `classify` looks at; stored verbatim in `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub termination: Termination,
    pub initial_max_u: f64,
    pub peak_max_u: f64,
    pub t_end: f64,
    pub final_t: f64,
    /// `max u` at every sample.
    pub max_u_series: Vec<f64>,
}

impl RunSummary {
    pub fn from_records(
        termination: Termination,
        initial_max_u: f64,
        t_end: f64,
        records: &[DiagnosticsRecord],
    ) -> Self {
        let max_u_series: Vec<f64> = records.iter().map(|r| r.max_u).collect();
        let peak_max_u = max_u_series.iter().cloned().fold(initial_max_u, f64::max);
        Self {
            termination,
            initial_max_u,
            peak_max_u,
            t_end,
            final_t: records.last().map_or(0.0, |r| r.t),
            max_u_series,
        }
    }

    /// `max u` strictly increasing over the final quarter of the samples.
    pub fn increasing_tail(&self) -> bool {
        let n = self.max_u_series.len();
        let k = n.div_ceil(4).max(2);
        if n < k {
            return false;
        }
        self.max_u_series[n - k..].windows(2).all(|w| w[1] > w[0])
    }
}

pub fn classify(summary: &RunSummary, config: &SimConfig) -> Classification {
    let peak_ratio = summary.peak_max_u / summary.initial_max_u;
    let (label, reason) = if peak_ratio >= config.blowup_factor
        || summary.termination == Termination::BlowupThreshold
    {
        (
            Label::GrowthSuspected,
            format!(
                "max u exceeded {} x its initial value (ratio {peak_ratio:.4})",
                config.blowup_factor
            ),
        )
    } else if summary.termination == Termination::StepUnderflow && summary.increasing_tail() {
        (
            Label::GrowthSuspected,
            format!(
                "time step underflow at t = {} with max u still increasing",
                summary.final_t
            ),
        )
    } else if summary.termination == Termination::TEndReached && peak_ratio <= BOUNDED_RATIO {
        (
            Label::GlobalBounded,
            format!("reached t_end = {} with peak ratio {peak_ratio:.4}", summary.t_end),
        )
    } else {
        (
            Label::Inconclusive,
            format!(
                "terminated by {:?} at t = {} with peak ratio {peak_ratio:.4}",
                summary.termination, summary.final_t
            ),
        )
    };
    Classification {
        label,
        reason,
        peak_ratio,
        final_t: summary.final_t,
    }
}

// ---------------------------------------------------------------------------
// sweeps

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n: usize,
    pub chis: Vec<f64>,
    pub masses: Vec<f64>,
    #[serde(rename = "R", default = "unit_radius")]
    pub radius: f64,
    #[serde(rename = "N")]
    pub cells: usize,
    pub t_end: f64,
    #[serde(default)]
    pub cfl: Option<f64>,
    #[serde(default)]
    pub blowup_factor: Option<f64>,
    #[serde(default)]
    pub dt_min: Option<f64>,
    #[serde(default)]
    pub sample_stride: Option<usize>,
    /// Shape of the initial data; its mass is replaced per run.
    pub u0: InitialData,
}

fn unit_radius() -> f64 {
    1.0
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.chis.is_empty() || self.masses.is_empty() {
            return Err(Error::validation("sweep needs non-empty chi and mass lists"));
        }
        if let Some(c) = self.chis.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return Err(Error::validation(format!("sweep chi {c} must be > 0")));
        }
        if let Some(m) = self.masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::validation(format!("sweep mass {m} must be > 0")));
        }
        self.config(self.chis[0], self.masses[0]).validate()?;
        RadialGrid::new(self.n, self.radius, self.cells)?;
        Ok(())
    }

    pub fn config(&self, chi: f64, mass: f64) -> SimConfig {
        let u0 = match self.u0 {
            InitialData::Cosine { amplitude, .. } => InitialData::Cosine {
                mass: Some(mass),
                amplitude,
            },
            InitialData::Bump { amplitude, k, .. } => InitialData::Bump {
                mass: Some(mass),
                amplitude,
                k,
            },
        };
        let mut cfg = SimConfig::new(self.n, self.radius, self.cells, chi, u0);
        cfg.t_end = self.t_end;
        if let Some(v) = self.cfl {
            cfg.cfl = v;
        }
        if let Some(v) = self.blowup_factor {
            cfg.blowup_factor = v;
        }
        if let Some(v) = self.dt_min {
            cfg.dt_min = v;
        }
        if let Some(v) = self.sample_stride {
            cfg.sample_stride = v;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub chi: f64,
    pub mass: f64,
    pub m_c: f64,
    pub classification: Label,
    pub peak_ratio: Option<f64>,
    pub t_final: Option<f64>,
    /// Failure message for runs that could not be carried out.
    #[serde(skip)]
    pub error: Option<String>,
}

/// Classified run per `(χ, m)` pair in χ-major order. Runs execute on up to
/// `workers` threads.
pub fn sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let pairs: Vec<(f64, f64)> = spec
        .chis
        .iter()
        .flat_map(|&c| spec.masses.iter().map(move |&m| (c, m)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::validation(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        pairs
            .par_iter()
            .map(|&(chi, mass)| sweep_row(spec, chi, mass))
            .collect()
    }))
}

fn sweep_row(spec: &SweepSpec, chi: f64, mass: f64) -> SweepRow {
    let m_c = diagnostics::critical_mass(chi);
    let base = SweepRow {
        n: spec.n,
        chi,
        mass,
        m_c,
        classification: Label::Inconclusive,
        peak_ratio: None,
        t_final: None,
        error: None,
    };
    match dynamics::run(&spec.config(chi, mass)) {
        Ok(res) => SweepRow {
            classification: res.classification.label,
            peak_ratio: Some(res.classification.peak_ratio),
            t_final: Some(res.classification.final_t),
            ..base
        },
        Err(e) => SweepRow {
            error: Some(e.to_string()),
            ..base
        },
    }
}

// ---------------------------------------------------------------------------
// output

pub const DIAGNOSTICS_HEADER: [&str; 12] = [
    "t",
    "mass",
    "mu",
    "min_u",
    "max_u",
    "min_ur",
    "max_abs_ur",
    "max_z",
    "lower_envelope",
    "lp2",
    "lp4",
    "dt",
];

pub const SWEEP_HEADER: [&str; 7] = [
    "n",
    "chi",
    "mass",
    "m_c",
    "classification",
    "peak_ratio",
    "t_final",
];

pub const VERIFY_HEADER: [&str; 7] = [
    "identity",
    "cells",
    "dt",
    "snapshot_spacing",
    "residual",
    "order",
    "passed",
];

/// 17 significant digits; non-finite values are refused.
pub fn fmt_float(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            context: "output field",
        });
    }
    Ok(format!("{x:.16e}"))
}

fn fmt_mass_threshold(x: f64) -> Result<String> {
    if x == f64::INFINITY {
        Ok("inf".to_string())
    } else {
        fmt_float(x)
    }
}

fn fmt_opt(x: Option<f64>) -> Result<String> {
    x.map_or(Ok(String::new()), fmt_float)
}

pub fn write_diagnostics_csv<W: Write>(out: W, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DIAGNOSTICS_HEADER)?;
    for r in records {
        let row = [
            r.t,
            r.mass,
            r.mu,
            r.min_u,
            r.max_u,
            r.min_ur,
            r.max_abs_ur,
            r.max_z,
            r.lower_envelope,
            r.lp2,
            r.lp4,
            r.dt,
        ]
        .into_iter()
        .map(fmt_float)
        .collect::<Result<Vec<_>>>()?;
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_state_csv<W: Write>(out: W, grid: &RadialGrid, state: &SimState) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "u"])?;
    for (r, u) in grid.centers().iter().zip(&state.u) {
        w.write_record([fmt_float(*r)?, fmt_float(*u)?])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            fmt_float(r.chi)?,
            fmt_float(r.mass)?,
            fmt_mass_threshold(r.m_c)?,
            r.classification.to_string(),
            fmt_opt(r.peak_ratio)?,
            fmt_opt(r.t_final)?,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One line of the `verify` output.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub identity: String,
    pub cells: usize,
    pub dt: f64,
    pub snapshot_spacing: f64,
    pub residual: f64,
    pub order: Option<f64>,
    pub passed: bool,
}

pub fn write_verify_csv<W: Write>(out: W, rows: &[VerifyRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(VERIFY_HEADER)?;
    for r in rows {
        w.write_record([
            r.identity.clone(),
            r.cells.to_string(),
            fmt_float(r.dt)?,
            fmt_float(r.snapshot_spacing)?,
            fmt_float(r.residual)?,
            fmt_opt(r.order)?,
            r.passed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryFile {
    pub classification: Classification,
    pub summary: RunSummary,
    pub steps: u64,
    pub rejected_steps: u64,
    pub wall_clock_secs: f64,
    pub relative_mass_drift: f64,
    pub max_ur_over_zplus_ratio: f64,
    pub max_chem_bound_violation: f64,
    pub config: SimConfig,
}

impl SummaryFile {
    pub fn new(result: &RunResult, config: &SimConfig) -> Self {
        let m0 = result.records.first().map_or(0.0, |r| r.mass);
        let drift = result
            .records
            .iter()
            .map(|r| ((r.mass - m0) / m0).abs())
            .fold(0.0, f64::max);
        let fold = |f: fn(&DiagnosticsRecord) -> f64| {
            result
                .records
                .iter()
                .map(f)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        Self {
            classification: result.classification.clone(),
            summary: result.summary.clone(),
            steps: result.steps,
            rejected_steps: result.rejected_steps,
            wall_clock_secs: result.wall_clock_secs,
            relative_mass_drift: drift,
            max_ur_over_zplus_ratio: fold(|r| r.ur_over_zplus_ratio),
            max_chem_bound_violation: fold(|r| r.chem_bound_violation),
            config: config.clone(),
        }
    }
}

/// Writes `diagnostics.csv`, `final_state.csv` and `summary.json` into `dir`.
pub fn write_run(dir: &Path, config: &SimConfig, result: &RunResult) -> Result<()> {
    fs::create_dir_all(dir)?;
    let grid = config.grid()?;
    write_diagnostics_csv(fs::File::create(dir.join("diagnostics.csv"))?, &result.records)?;
    write_state_csv(
        fs::File::create(dir.join("final_state.csv"))?,
        &grid,
        &result.final_state,
    )?;
    let summary = SummaryFile::new(result, config);
    let file = fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(file, &summary)?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Config {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------------------
// verification

/// Runs the refinement study and the scalar checks.
pub fn verify(levels: usize, dim: usize, chi: f64) -> Result<Vec<VerifyRow>> {
    if levels < 2 {
        return Err(Error::validation("verify needs --levels >= 2"));
    }
    let run = SmoothRun {
        dim,
        chi,
        ..SmoothRun::default()
    };
    let trajectories = (0..levels)
        .into_par_iter()
        .map(|k| operators::smooth_trajectory(&run, VERIFY_BASE_CELLS << k))
        .collect::<Result<Vec<_>>>()?;
    let report = operators::residual_suite(&trajectories)?;
    let mut rows = residual_rows(&report);
    rows.extend(scalar_checks(dim)?);
    Ok(rows)
}

/// Coarsest grid of the `verify` refinement study.
pub const VERIFY_BASE_CELLS: usize = 64;

fn residual_rows(report: &ResidualReport) -> Vec<VerifyRow> {
    Identity::ALL
        .iter()
        .flat_map(|&id| report.rows_for(id))
        .map(|r| VerifyRow {
            identity: r.identity.name().to_string(),
            cells: r.cells,
            dt: r.dt,
            snapshot_spacing: r.snapshot_spacing,
            residual: r.residual,
            order: r.order,
            passed: r.order.is_none_or(|o| o >= MIN_ORDER),
        })
        .collect()
}

fn scalar_row(identity: &str, cells: usize, residual: f64, passed: bool) -> VerifyRow {
    VerifyRow {
        identity: identity.to_string(),
        cells,
        dt: 0.0,
        snapshot_spacing: 0.0,
        residual,
        order: None,
        passed,
    }
}

fn scalar_checks(dim: usize) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();

    // dense scan of φ on [0, 10⁴]
    let samples = 10_000_000usize;
    let (arg, max) = (0..=samples)
        .map(|i| {
            let xi = 1e4 * i as f64 / samples as f64;
            (xi, diagnostics::phi(xi).unwrap_or(f64::NAN))
        })
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let dev = (max - diagnostics::phi_max()).abs();
    rows.push(scalar_row(
        "phi_maximum",
        samples + 1,
        dev,
        dev <= 1e-6 && (arg - 2.0).abs() <= 1e-3,
    ));

    // gap inequality on deterministic pseudo-random fields
    let grid = RadialGrid::new(dim, 1.0, 64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let u: Vec<f64> = (0..grid.cells())
            .map(|_| 10f64.powf(rng.gen_range(-3.0..3.0)))
            .collect();
        let ur = dynamics::gradient(&grid, &u)?;
        for p in [1.0, 2.0, 4.0] {
            let gap = diagnostics::lemma51_gap(&grid, &u, &ur, p)?;
            let scale = grid.integrate(&u.iter().map(|v| v.powf(p)).collect::<Vec<_>>());
            worst = worst.max(-gap / scale);
        }
    }
    rows.push(scalar_row("lemma51_gap", 600, worst.max(0.0), worst <= 1e-12));
    Ok(rows)
}

// ---------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(name = "flimks", about = "Flux-limited Keller-Segel radial simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write diagnostics.csv, final_state.csv, summary.json
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify every (chi, mass) pair of a sweep specification
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Refinement study of the differential identities plus scalar checks
    Verify {
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0.5)]
        chi: f64,
    },
    /// Print the summary of a finished simulation
    Report {
        #[arg(long)]
        run: PathBuf,
    },
}

/// Entry point behind the binary. Returns the process exit status:
/// 0 on success, 1 on invalid input, 2 on internal failure.
pub fn run_cli<S: AsRef<str>>(argv: &[S]) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Simulate { config, out } => {
            let cfg: SimConfig = read_json(&config)?;
            let result = dynamics::run(&cfg)?;
            write_run(&out, &cfg, &result)?;
            println!(
                "{}: {} ({} steps, t = {})",
                result.classification.label,
                result.classification.reason,
                result.steps,
                result.final_state.t
            );
            Ok(0)
        }
        Command::Sweep {
            config,
            out,
            workers,
        } => {
            let spec: SweepSpec = read_json(&config)?;
            let rows = sweep(&spec, workers)?;
            for row in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "run chi = {}, mass = {} failed: {}",
                    row.chi,
                    row.mass,
                    row.error.as_deref().unwrap_or_default()
                );
            }
            write_sweep_csv(fs::File::create(&out)?, &rows)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(0)
        }
        Command::Verify {
            levels,
            out,
            dim,
            chi,
        } => {
            let rows = verify(levels, dim, chi)?;
            write_verify_csv(fs::File::create(&out)?, &rows)?;
            for r in &rows {
                println!(
                    "{} {:<20} N={:<6} residual={:.3e} order={}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.identity,
                    r.cells,
                    r.residual,
                    r.order.map_or("-".to_string(), |o| format!("{o:.3}"))
                );
            }
            Ok(if rows.iter().all(|r| r.passed) { 0 } else { 2 })
        }
        Command::Report { run } => {
            let summary: SummaryFile = read_json(&run.join("summary.json"))?;
            let again = classify(&summary.summary, &summary.config);
            println!("classification : {}", summary.classification.label);
            println!("reason         : {}", summary.classification.reason);
            println!("peak ratio     : {}", summary.classification.peak_ratio);
            println!("final t        : {}", summary.classification.final_t);
            println!("termination    : {:?}", summary.summary.termination);
            println!("steps          : {} ({} rejected)", summary.steps, summary.rejected_steps);
            println!("mass drift     : {:e}", summary.relative_mass_drift);
            println!("max |u_r|/(1+sup z+) : {}", summary.max_ur_over_zplus_ratio);
            if again != summary.classification {
                eprintln!("stored classification does not match the recorded summary");
                return Ok(2);
            }
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> SimConfig {
        SimConfig::new(2, 1.0, 16, 0.5, InitialData::cosine(None, 0.5))
    }

    fn summary(termination: Termination, series: Vec<f64>) -> RunSummary {
        let initial = series[0];
        let peak = series.iter().cloned().fold(initial, f64::max);
        RunSummary {
            termination,
            initial_max_u: initial,
            peak_max_u: peak,
            t_end: 20.0,
            final_t: 20.0,
            max_u_series: series,
        }
    }

    #[test]
    fn bounded_run() {
        let s = summary(Termination::TEndReached, vec![1.0, 1.2, 1.4, 1.3]);
        let c = classify(&s, &config());
        assert_eq!(c.label, Label::GlobalBounded);
        assert!((c.peak_ratio - 1.4).abs() < 1e-15);
        assert!(!c.reason.is_empty());
    }

    #[test]
    fn growth_run() {
        let s = summary(Termination::BlowupThreshold, vec![1.0, 10.0, 100.0, 1000.0]);
        assert_eq!(classify(&s, &config()).label, Label::GrowthSuspected);
        let s = summary(
            Termination::StepUnderflow,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        );
        assert_eq!(classify(&s, &config()).label, Label::GrowthSuspected);
        let s = summary(
            Termination::StepUnderflow,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 7.0],
        );
        assert_eq!(classify(&s, &config()).label, Label::Inconclusive);
    }

    #[test]
    fn large_but_finite_growth_is_inconclusive() {
        let s = summary(Termination::TEndReached, vec![1.0, 20.0, 50.0]);
        assert_eq!(classify(&s, &config()).label, Label::Inconclusive);
    }

    #[test]
    fn summary_round_trips_to_same_label() {
        let s = summary(Termination::TEndReached, vec![1.0, 1.5, 1.2]);
        let c = classify(&s, &config());
        let text = serde_json::to_string(&s).unwrap();
        let back: RunSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(classify(&back, &config()), c);
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(0.1).unwrap(), "1.0000000000000001e-1");
        assert!(fmt_float(f64::NAN).is_err());
        assert_eq!(fmt_mass_threshold(f64::INFINITY).unwrap(), "inf");
    }

    #[test]
    fn sweep_spec_validation() {
        let spec = SweepSpec {
            n: 1,
            chis: vec![],
            masses: vec![0.1],
            radius: 1.0,
            cells: 16,
            t_end: 1.0,
            cfl: None,
            blowup_factor: None,
            dt_min: None,
            sample_stride: None,
            u0: InitialData::cosine(None, 0.3),
        };
        assert!(spec.validate().is_err());
        let spec = SweepSpec {
            chis: vec![2.0, -1.0],
            ..spec
        };
        assert!(spec.validate().is_err());
    }
}
