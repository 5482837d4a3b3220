//! Acceptance criteria 1–12. Each test prints one `PASS`/`FAIL` line.

use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use flimks::chemo;
use flimks::diagnostics::{self, DiagnosticsRecord};
use flimks::driver::Label;
use flimks::dynamics::{self, InitialData, SimConfig, SimState};
use flimks::grid::RadialGrid;
use flimks::operators::{self, Identity, ResidualReport, SmoothRun, BOUNDARY_SKIP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Writes straight to stdout so the line shows without `--nocapture`.
fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let line = format!(
        "[acceptance] criterion {id:>2} {:<4} {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}

fn positive_interior_max(grid: &RadialGrid, a: &[f64], b: &[f64]) -> f64 {
    (BOUNDARY_SKIP..grid.cells() - BOUNDARY_SKIP)
        .map(|i| (a[i] - b[i]).abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// shared runs

struct BoundedRun {
    config: SimConfig,
    label: Label,
    peak_ratio: f64,
    mass: f64,
    records: Vec<DiagnosticsRecord>,
}

fn execute(config: SimConfig) -> BoundedRun {
    let res = dynamics::run(&config).expect("run failed");
    BoundedRun {
        mass: res.records[0].mass,
        label: res.classification.label,
        peak_ratio: res.classification.peak_ratio,
        records: res.records,
        config,
    }
}

const SWEEP_CELLS: usize = 64;

/// Criterion 7 runs: n ∈ {2, 3}, χ ∈ {0.25, 0.5, 0.9}, three amplitudes.
fn higher_dim_runs() -> &'static [BoundedRun] {
    static RUNS: OnceLock<Vec<BoundedRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut configs = Vec::new();
        for n in [2, 3] {
            for chi in [0.25, 0.5, 0.9] {
                for amp in [0.25, 0.5, 0.9] {
                    let mut c =
                        SimConfig::new(n, 1.0, SWEEP_CELLS, chi, InitialData::cosine(None, amp));
                    c.t_end = 20.0;
                    configs.push(c);
                }
            }
        }
        configs.into_par_iter().map(execute).collect()
    })
}

/// Criterion 8 runs: n = 1, χ = 2, m ∈ {0.25, 0.5, 5}·m_c (last one observational).
fn one_dim_runs() -> &'static [BoundedRun] {
    static RUNS: OnceLock<Vec<BoundedRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mc = diagnostics::critical_mass(2.0);
        [0.25, 0.5, 5.0]
            .into_par_iter()
            .map(|f| {
                let mut c = SimConfig::new(
                    1,
                    1.0,
                    SWEEP_CELLS,
                    2.0,
                    InitialData::cosine(Some(f * mc), 0.5),
                );
                c.t_end = 20.0;
                execute(c)
            })
            .collect()
    })
}

fn envelope_run() -> &'static (BoundedRun, f64) {
    static RUN: OnceLock<(BoundedRun, f64)> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut c = SimConfig::new(2, 1.0, 256, 0.5, InitialData::cosine(None, 0.5));
        c.t_end = 5.0;
        let started = Instant::now();
        let run = execute(c);
        (run, started.elapsed().as_secs_f64())
    })
}

fn residual_reports() -> &'static [(usize, ResidualReport)] {
    static REPORTS: OnceLock<Vec<(usize, ResidualReport)>> = OnceLock::new();
    REPORTS.get_or_init(|| {
        [1, 2, 3]
            .into_par_iter()
            .map(|dim| {
                let run = SmoothRun {
                    dim,
                    ..SmoothRun::default()
                };
                let levels = [64, 128, 256]
                    .iter()
                    .map(|&cells| operators::smooth_trajectory(&run, cells).unwrap())
                    .collect::<Vec<_>>();
                (dim, operators::residual_suite(&levels).unwrap())
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// criteria

#[test]
fn criterion_01_steady_state() {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let grid = RadialGrid::new(n, 1.0, 256).unwrap();
        let mu = 1.7;
        let mut state = SimState::new(&grid, vec![mu; 256], 0.0).unwrap();
        for _ in 0..1000 {
            let dt = dynamics::stable_dt(&grid, &state, 0.8, 0.5).unwrap();
            state = dynamics::step(&grid, &state, 0.8, dt).unwrap().state;
        }
        worst = worst.max(state.u.iter().map(|u| (u - mu).abs() / mu).fold(0.0, f64::max));
    }
    let secs = started.elapsed().as_secs_f64();
    let pass = worst <= 1e-12 && secs < 5.0;
    report(
        1,
        "steady state",
        pass,
        &format!("max relative drift {worst:.2e}, {secs:.2} s"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_mass_conservation() {
    let grid = RadialGrid::new(2, 1.0, 256).unwrap();
    let chi = 0.5;
    let u0 = InitialData::cosine(None, 0.5).sample(&grid).unwrap();
    let mut state = SimState::new(&grid, u0, 0.0).unwrap();
    let m0 = grid.mass(&state.u).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let dt = dynamics::stable_dt(&grid, &state, chi, 0.5).unwrap();
        state = dynamics::step(&grid, &state, chi, dt).unwrap().state;
        worst = worst.max((grid.mass(&state.u).unwrap() - m0).abs() / m0);
    }
    let pass = worst <= 1e-10;
    report(
        2,
        "mass conservation",
        pass,
        &format!("max relative drift {worst:.2e} over 10^4 steps"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_form_equivalence() {
    let field = |r: f64| {
        1.5 + 0.5 * (std::f64::consts::PI * r).cos() + 0.2 * (2.0 * std::f64::consts::PI * r).cos()
    };
    let mut orders = Vec::new();
    for n in 1..=3 {
        let err = |cells| {
            let grid = RadialGrid::new(n, 1.0, cells).unwrap();
            let state = SimState::new(&grid, grid.sample(field), 0.0).unwrap();
            let div = dynamics::rhs_divergence(&grid, &state, 0.7).unwrap();
            let exp = dynamics::rhs_expanded(&grid, &state, 0.7).unwrap();
            positive_interior_max(&grid, &div, &exp)
        };
        orders.push((err(128) / err(256)).log2());
    }
    let pass = orders.iter().all(|&o| o >= 1.8);
    report(
        3,
        "form equivalence",
        pass,
        &format!("orders 128->256 for n = 1,2,3: {orders:.3?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_identity_residuals() {
    let identities = [
        Identity::FormEquivalence,
        Identity::ParabolicP,
        Identity::ParabolicQ,
        Identity::ZEquation,
    ];
    let mut min_order = f64::INFINITY;
    for (_, rep) in residual_reports() {
        for id in identities {
            min_order = min_order.min(rep.min_order(id).unwrap());
        }
    }

    let mut const_worst = 0.0f64;
    for n in 1..=3 {
        let grid = RadialGrid::new(n, 1.0, 64).unwrap();
        let traj = operators::constant_trajectory(&grid, 1.3, &[0.0, 0.01, 0.03, 0.04], 1.5);
        for (_, r) in operators::identity_residuals(&traj).unwrap() {
            const_worst = const_worst.max(r);
        }
    }
    let pass = min_order >= 1.8 && const_worst <= 1e-12;
    report(
        4,
        "identity residuals",
        pass,
        &format!("min order {min_order:.3} (N = 64,128,256, n = 1,2,3), constant residual {const_worst:.1e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_05_lower_envelope() {
    let (run, secs) = envelope_run();
    let mu = run.records[0].mu;
    let kappa = diagnostics::kappa(2, 0.5, mu);
    let min_u0 = run.records[0].min_u;
    let worst = run
        .records
        .iter()
        .map(|r| r.min_u / (min_u0 * (-kappa * r.t).exp()))
        .fold(f64::INFINITY, f64::min);
    let reached = run.records.last().unwrap().t;
    let pass = worst >= 0.999 && reached == 5.0 && *secs < 60.0;
    report(
        5,
        "lower envelope",
        pass,
        &format!(
            "min of min_u / envelope = {worst:.4} over {} samples, {secs:.1} s",
            run.records.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_06_chem_field_bounds() {
    // every sample of the long runs
    let mut worst = f64::NEG_INFINITY;
    let mut vr_boundary = 0.0f64;
    let runs = higher_dim_runs()
        .iter()
        .chain(one_dim_runs())
        .chain(std::iter::once(&envelope_run().0));
    for run in runs {
        for r in &run.records {
            worst = worst.max(r.chem_bound_violation);
            vr_boundary = vr_boundary.max(r.vr_boundary.abs() / r.max_u);
        }
    }
    // every accepted step of short runs with steep data
    for n in 1..=3 {
        let grid = RadialGrid::new(n, 1.0, 128).unwrap();
        let u0 = InitialData::Bump {
            mass: None,
            amplitude: 3.0,
            k: 4,
        }
        .sample(&grid)
        .unwrap();
        let mut state = SimState::new(&grid, u0, 0.0).unwrap();
        for _ in 0..2000 {
            let dt = dynamics::stable_dt(&grid, &state, 1.5, 0.5).unwrap();
            state = dynamics::step(&grid, &state, 1.5, dt).unwrap().state;
            let fields = chemo::reconstruct(&grid, &state.u).unwrap();
            let b = chemo::check_bounds(&grid, &state.u, &fields);
            worst = worst.max(b.worst() / b.max_u);
            vr_boundary = vr_boundary.max(b.vr_at_boundary.abs() / b.max_u);
        }
    }
    let pass = worst <= 1e-12 && vr_boundary <= 1e-12;
    report(
        6,
        "chemo-field bounds",
        pass,
        &format!("worst violation {worst:.2e} x max u, |v_r(R)| {vr_boundary:.1e} x max u"),
    );
    assert!(pass);
}

#[test]
fn criterion_07_bounded_higher_dim() {
    let runs = higher_dim_runs();
    let bad: Vec<_> = runs
        .iter()
        .filter(|r| r.label != Label::GlobalBounded || r.peak_ratio > 10.0)
        .map(|r| (r.config.n, r.config.chi, r.label, r.peak_ratio))
        .collect();
    let peak = runs.iter().map(|r| r.peak_ratio).fold(0.0, f64::max);
    let pass = bad.is_empty();
    report(
        7,
        "bounded regime n >= 2",
        pass,
        &format!("{} runs, largest peak ratio {peak:.4}, failures {bad:?}", runs.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_08_bounded_one_dim() {
    let runs = one_dim_runs();
    let mc = diagnostics::critical_mass(2.0);
    let gated = &runs[..2];
    let pass = gated.iter().all(|r| r.label == Label::GlobalBounded);
    let observed = &runs[2];
    report(
        8,
        "subcritical mass n = 1",
        pass,
        &format!(
            "m = 0.25 m_c: {}, m = 0.5 m_c: {}; observed m = 5 m_c: {} (peak ratio {:.4}, t = {})",
            gated[0].label,
            gated[1].label,
            observed.label,
            observed.peak_ratio,
            observed.records.last().unwrap().t
        ),
    );
    assert!((gated[0].mass - 0.25 * mc).abs() < 1e-12 * mc);
    assert!(pass);
}

#[test]
fn criterion_09_phi_maximum() {
    let samples = 10_000_000usize;
    let (arg, max) = (0..=samples)
        .map(|i| {
            let xi = 1e4 * i as f64 / samples as f64;
            (xi, diagnostics::phi(xi).unwrap())
        })
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let dev = (max - 2.0 / (3.0 * 3f64.sqrt())).abs();
    let pass = dev <= 1e-6 && (arg - 2.0).abs() <= 1e-3;
    report(
        9,
        "phi maximum",
        pass,
        &format!("max {max:.15} at xi = {arg}, deviation {dev:.1e}"),
    );
    assert!(pass);
}

fn random_field(rng: &mut ChaCha8Rng, grid: &RadialGrid) -> Vec<f64> {
    if rng.gen_bool(0.5) {
        // smooth: positive cosine series
        let modes: Vec<(f64, f64)> = (0..5).map(|k| (k as f64, rng.gen_range(-1.0..1.0))).collect();
        let base = modes.iter().map(|m| m.1.abs()).sum::<f64>() + rng.gen_range(0.01..1.0);
        grid.sample(|r| {
            base + modes
                .iter()
                .map(|&(k, a)| a * (k * std::f64::consts::PI * r / grid.radius()).cos())
                .sum::<f64>()
        })
    } else {
        // rough: log-uniform over six decades
        (0..grid.cells())
            .map(|_| 10f64.powf(rng.gen_range(-3.0..3.0)))
            .collect()
    }
}

#[test]
fn criterion_10_gap_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=3 {
        let grid = RadialGrid::new(n, 1.0, 64).unwrap();
        for _ in 0..1000 {
            let u = random_field(&mut rng, &grid);
            let ur = dynamics::gradient(&grid, &u).unwrap();
            for p in [1.0, 2.0, 4.0] {
                let gap = diagnostics::lemma51_gap(&grid, &u, &ur, p).unwrap();
                let scale: f64 = grid
                    .cell_measures()
                    .iter()
                    .zip(&u)
                    .map(|(m, v)| m * v.powf(p))
                    .sum();
                worst = worst.max(-gap / scale);
            }
        }
    }
    let pass = worst <= 1e-12;
    report(
        10,
        "gap inequality",
        pass,
        &format!("3000 fields x 3 exponents, worst -gap / int u^p = {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_11_lp_inequality() {
    let mut checked = 0usize;
    let mut worst = f64::INFINITY;
    let bounded = higher_dim_runs().iter().chain(&one_dim_runs()[..2]);
    for run in bounded {
        let lambda = diagnostics::lambda(run.config.n, run.mass);
        assert!(run.config.chi * lambda < 1.0);
        for p in [2, 4] {
            for s in diagnostics::lp_ode_residual(&run.records, p, run.config.chi, lambda).unwrap() {
                checked += 1;
                worst = worst.min(s.residual / s.tol);
            }
        }
    }
    // residual >= -tol  <=>  residual / tol >= -1
    let pass = worst >= -1.0 && checked > 0;
    report(
        11,
        "L^p differential inequality",
        pass,
        &format!("{checked} samples, min residual / tol = {worst:.3e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_12_z_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x12);
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let grid = RadialGrid::new(n, 1.0, 64).unwrap();
        for _ in 0..200 {
            let u = random_field(&mut rng, &grid);
            let chi = rng.gen_range(0.0..3.0);
            worst = worst.max(operators::z_consistency_gap(&grid, &u, chi).unwrap());
        }
    }
    let min_order = residual_reports()
        .iter()
        .map(|(_, rep)| rep.min_order(Identity::ZTimeConsistency).unwrap())
        .fold(f64::INFINITY, f64::min);
    let pass = worst <= 1e-12 && min_order >= 1.8;
    report(
        12,
        "z consistency",
        pass,
        &format!("max |u z - rate| / max |rate| = {worst:.2e}, u_t/u order {min_order:.3}"),
    );
    assert!(pass);
}
