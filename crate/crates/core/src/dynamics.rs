//! Time evolution of the density.
//!
//! The conservative form is
//!
//! ```text
//! u_t = r^{1−n} (r^{n−1} F)_r,   F = u u_r/√(u² + u_r²) − χ u v_r/√(1 + v_r²)
//! ```
//!
//! with `F = 0` at `r = 0` and `r = R`. Face fluxes use the arithmetic mean of
//! the neighbouring cell values for `u`, the adjacent-center difference for
//! `u_r` and the exact face value of `v_r`, so the discrete mass telescopes.
//! Time stepping is the explicit midpoint rule with a step bounded by the
//! effective diffusivity `u³/√(u² + u_r²)³ ≤ 1` and the chemotactic speed.

use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chemo;
use crate::diagnostics::{self, DiagnosticsRecord, History};
use crate::driver::{classify, Classification, RunSummary};
use crate::grid::RadialGrid;
use crate::operators::{expanded_rate, JetField, Site};
use crate::{Error, Result};

/// Step halvings allowed after a positivity failure.
pub const MAX_RETRIES: u32 = 20;

const DT_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub u: Vec<f64>,
    pub mu: f64,
}

impl SimState {
    /// Validates positivity and finiteness and caches the mean.
    pub fn new(grid: &RadialGrid, u: Vec<f64>, t: f64) -> Result<Self> {
        grid.check_len(&u, "density")?;
        if let Some((i, v)) = u.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::validation(format!(
                "density must be positive and finite, cell {i} holds {v}"
            )));
        }
        let mu = chemo::compute_mu(grid, &u)?;
        Ok(Self { t, u, mu })
    }

    pub fn min_u(&self) -> f64 {
        self.u.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_u(&self) -> f64 {
        self.u.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `u u_r / √(u² + u_r²)`, extended by 0 at `u = u_r = 0`.
pub fn diffusive_flux(u: f64, ur: f64) -> f64 {
    let s = (u * u + ur * ur).sqrt();
    if s == 0.0 {
        0.0
    } else {
        u * ur / s
    }
}

/// `χ u v_r / √(1 + v_r²)`.
pub fn chemotactic_flux(u: f64, vr: f64, chi: f64) -> f64 {
    chi * u * vr / (1.0 + vr * vr).sqrt()
}

pub fn total_flux(u: f64, ur: f64, vr: f64, chi: f64) -> f64 {
    diffusive_flux(u, ur) - chemotactic_flux(u, vr, chi)
}

/// Centered `u_r` at cell centers; even reflection supplies the ghost values
/// at both ends, so `u_r` vanishes at `r = 0` and `r = R`.
pub fn gradient(grid: &RadialGrid, u: &[f64]) -> Result<Vec<f64>> {
    grid.check_len(u, "density")?;
    let n = u.len();
    let h = 2.0 * grid.dr();
    Ok((0..n)
        .map(|i| {
            let left = u[i.saturating_sub(1)];
            let right = u[(i + 1).min(n - 1)];
            (right - left) / h
        })
        .collect())
}

/// Centered `u_rr` at cell centers with the same even ghosts as [`gradient`].
pub fn second_derivative(grid: &RadialGrid, u: &[f64]) -> Result<Vec<f64>> {
    grid.check_len(u, "density")?;
    let n = u.len();
    let h2 = grid.dr() * grid.dr();
    Ok((0..n)
        .map(|i| {
            let left = u[i.saturating_sub(1)];
            let right = u[(i + 1).min(n - 1)];
            (right - 2.0 * u[i] + left) / h2
        })
        .collect())
}

fn divergence_rate(grid: &RadialGrid, u: &[f64], vr_faces: &[f64], chi: f64) -> Result<Vec<f64>> {
    let n = u.len();
    let dr = grid.dr();
    let weights = grid.face_weights();
    // weighted flux ω_n f^{n−1} F at faces, zero at both ends
    let mut flux = vec![0.0; n + 1];
    for k in 1..n {
        let uf = 0.5 * (u[k - 1] + u[k]);
        let urf = (u[k] - u[k - 1]) / dr;
        flux[k] = grid.omega() * weights[k] * total_flux(uf, urf, vr_faces[k], chi);
    }
    let rate: Vec<f64> = grid
        .cell_measures()
        .iter()
        .enumerate()
        .map(|(i, m)| (flux[i + 1] - flux[i]) / m)
        .collect();
    if rate.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "divergence right-hand side",
        });
    }
    Ok(rate)
}

/// Conservative right-hand side `du/dt` at every cell.
pub fn rhs_divergence(grid: &RadialGrid, state: &SimState, chi: f64) -> Result<Vec<f64>> {
    grid.check_len(&state.u, "density")?;
    let mu = chemo::compute_mu(grid, &state.u)?;
    divergence_rate(grid, &state.u, &chemo::face_vr(grid, &state.u, mu), chi)
}

/// Expanded right-hand side evaluated pointwise at the cell centers.
pub fn rhs_expanded(grid: &RadialGrid, state: &SimState, chi: f64) -> Result<Vec<f64>> {
    let jets = JetField::from_density(grid, &state.u)?;
    Ok(grid
        .centers()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let site = Site {
                dim: grid.dim(),
                r,
                mu: jets.mu,
                chi,
            };
            expanded_rate(&jets.jet(i), &site)
        })
        .collect())
}

/// Largest stable explicit step for the current state.
pub fn stable_dt(grid: &RadialGrid, state: &SimState, chi: f64, cfl: f64) -> Result<f64> {
    let ur = gradient(grid, &state.u)?;
    let mu = chemo::compute_mu(grid, &state.u)?;
    let max_a1 = state
        .u
        .iter()
        .zip(&ur)
        .map(|(&u, &ur)| {
            let s = (u * u + ur * ur).sqrt();
            (u / s).powi(3)
        })
        .fold(0.0, f64::max);
    let max_w = chemo::compute_vr(grid, &state.u, mu)?
        .centers
        .iter()
        .map(|&vr| (chi * vr / (1.0 + vr * vr).sqrt()).abs())
        .fold(0.0, f64::max);
    let dr = grid.dr();
    Ok(cfl * (dr * dr / (2.0 * max_a1 + DT_GUARD)).min(dr / (max_w + DT_GUARD)))
}

/// [`stable_dt`] with a lower limit.
pub fn checked_dt(
    grid: &RadialGrid,
    state: &SimState,
    chi: f64,
    cfl: f64,
    dt_min: f64,
) -> Result<f64> {
    let dt = stable_dt(grid, state, chi, cfl)?;
    if dt < dt_min || !dt.is_finite() {
        return Err(Error::StepUnderflow { dt, dt_min });
    }
    Ok(dt)
}

/// Accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: SimState,
    pub dt_used: f64,
    pub retries: u32,
}

fn midpoint_rule(grid: &RadialGrid, u: &[f64], chi: f64, dt: f64) -> Result<Vec<f64>> {
    let mu = chemo::compute_mu(grid, u)?;
    let k1 = divergence_rate(grid, u, &chemo::face_vr(grid, u, mu), chi)?;
    let half: Vec<f64> = u.iter().zip(&k1).map(|(u, k)| u + 0.5 * dt * k).collect();
    let mu = chemo::compute_mu(grid, &half)?;
    let k2 = divergence_rate(grid, &half, &chemo::face_vr(grid, &half, mu), chi)?;
    Ok(u.iter().zip(&k2).map(|(u, k)| u + dt * k).collect())
}

/// One explicit midpoint step. A step that produces a nonpositive cell is
/// rejected and retried with half the step, at most [`MAX_RETRIES`] times.
pub fn step(grid: &RadialGrid, state: &SimState, chi: f64, dt: f64) -> Result<StepOutcome> {
    let mut dt = dt;
    for retries in 0..=MAX_RETRIES {
        let u = midpoint_rule(grid, &state.u, chi, dt)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "time step" });
        }
        if u.iter().all(|&v| v > 0.0) {
            let mu = chemo::compute_mu(grid, &u)?;
            return Ok(StepOutcome {
                state: SimState {
                    t: state.t + dt,
                    u,
                    mu,
                },
                dt_used: dt,
                retries,
            });
        }
        dt *= 0.5;
    }
    Err(Error::PositivityLoss {
        t: state.t,
        retries: MAX_RETRIES,
    })
}

/// Radially symmetric positive initial profiles with `u₀'(0) = u₀'(R) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum InitialData {
    /// `c₀ (1 + a cos(πr/R))`, `|a| < 1`.
    Cosine {
        /// Target mass; `c₀ = 1` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
        amplitude: f64,
    },
    /// `c₀ + c₁ (1 + cos(πr/R))^k`, `c₁ = amplitude ≥ 0`, `k ≥ 2`.
    Bump {
        /// Target mass; `c₀ = 1` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
        amplitude: f64,
        k: u32,
    },
}

impl InitialData {
    pub fn cosine(mass: Option<f64>, amplitude: f64) -> Self {
        InitialData::Cosine { mass, amplitude }
    }

    fn validate_shape(&self) -> Result<()> {
        match *self {
            InitialData::Cosine { amplitude, .. } => {
                if !(amplitude.abs() < 1.0) {
                    return Err(Error::validation(format!(
                        "cosine amplitude {amplitude} must satisfy |a| < 1"
                    )));
                }
            }
            InitialData::Bump { amplitude, k, .. } => {
                if !(amplitude >= 0.0 && amplitude.is_finite()) {
                    return Err(Error::validation(format!(
                        "bump amplitude {amplitude} must be nonnegative"
                    )));
                }
                if k < 2 {
                    return Err(Error::validation(format!("bump exponent k = {k} must be >= 2")));
                }
            }
        }
        if let Some(m) = self.mass() {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::validation(format!("target mass {m} must be positive")));
            }
        }
        Ok(())
    }

    pub fn mass(&self) -> Option<f64> {
        match *self {
            InitialData::Cosine { mass, .. } | InitialData::Bump { mass, .. } => mass,
        }
    }

    /// Resolved `(c₀, profile)` on `grid`, with `c₀` chosen so the discrete
    /// mass equals the target.
    pub fn resolve(&self, grid: &RadialGrid) -> Result<Profile> {
        self.validate_shape()?;
        let radius = grid.radius();
        let profile = match *self {
            InitialData::Cosine { mass, amplitude } => {
                let shape = grid.sample(|r| 1.0 + amplitude * (PI * r / radius).cos());
                let c0 = match mass {
                    Some(m) => m / grid.mass(&shape)?,
                    None => 1.0,
                };
                Profile {
                    radius,
                    c0,
                    kind: ProfileKind::Cosine { amplitude },
                }
            }
            InitialData::Bump { mass, amplitude, k } => {
                let shape = grid.sample(|r| (1.0 + (PI * r / radius).cos()).powi(k as i32));
                let c0 = match mass {
                    Some(m) => (m - amplitude * grid.mass(&shape)?) / grid.volume(),
                    None => 1.0,
                };
                if c0 <= 0.0 {
                    return Err(Error::validation(format!(
                        "target mass too small for bump amplitude {amplitude}: baseline c0 = {c0}"
                    )));
                }
                Profile {
                    radius,
                    c0,
                    kind: ProfileKind::Bump { amplitude, k },
                }
            }
        };
        Ok(profile)
    }

    /// Cell-centered initial density, checked for positivity and the
    /// Neumann condition.
    pub fn sample(&self, grid: &RadialGrid) -> Result<Vec<f64>> {
        let profile = self.resolve(grid)?;
        let scale = profile.value(0.0).abs().max(profile.value(grid.radius()).abs());
        for end in [0.0, grid.radius()] {
            let slope = profile.derivative(end);
            if slope.abs() > 1e-10 * scale.max(1.0) {
                return Err(Error::validation(format!(
                    "initial data violates the Neumann condition at r = {end}: u0' = {slope}"
                )));
            }
        }
        let u = grid.sample(|r| profile.value(r));
        if let Some(v) = u.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::validation(format!("initial data not positive: {v}")));
        }
        Ok(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    Cosine { amplitude: f64 },
    Bump { amplitude: f64, k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub radius: f64,
    pub c0: f64,
    pub kind: ProfileKind,
}

impl Profile {
    pub fn value(&self, r: f64) -> f64 {
        let c = (PI * r / self.radius).cos();
        match self.kind {
            ProfileKind::Cosine { amplitude } => self.c0 * (1.0 + amplitude * c),
            ProfileKind::Bump { amplitude, k } => self.c0 + amplitude * (1.0 + c).powi(k as i32),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let w = PI / self.radius;
        let (s, c) = (w * r).sin_cos();
        match self.kind {
            ProfileKind::Cosine { amplitude } => -self.c0 * amplitude * w * s,
            ProfileKind::Bump { amplitude, k } => {
                -amplitude * k as f64 * (1.0 + c).powi(k as i32 - 1) * w * s
            }
        }
    }
}

fn default_t_end() -> f64 {
    20.0
}
fn default_cfl() -> f64 {
    0.5
}
fn default_blowup_factor() -> f64 {
    1e3
}
fn default_dt_min() -> f64 {
    1e-12
}
fn default_sample_stride() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "N")]
    pub cells: usize,
    pub chi: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_blowup_factor")]
    pub blowup_factor: f64,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
    #[serde(default = "default_sample_stride")]
    pub sample_stride: usize,
    pub u0: InitialData,
}

impl SimConfig {
    /// Defaults for everything but geometry, sensitivity and initial data.
    pub fn new(n: usize, radius: f64, cells: usize, chi: f64, u0: InitialData) -> Self {
        Self {
            n,
            radius,
            cells,
            chi,
            t_end: default_t_end(),
            cfl: default_cfl(),
            blowup_factor: default_blowup_factor(),
            dt_min: default_dt_min(),
            sample_stride: default_sample_stride(),
            u0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(self.chi >= 0.0 && self.chi.is_finite()) {
            return Err(Error::validation(format!("chi = {} must be >= 0", self.chi)));
        }
        if !positive(self.t_end) {
            return Err(Error::validation(format!("t_end = {} must be > 0", self.t_end)));
        }
        if !(positive(self.cfl) && self.cfl <= 1.0) {
            return Err(Error::validation(format!("cfl = {} must lie in (0, 1]", self.cfl)));
        }
        if !(self.blowup_factor > 1.0 && self.blowup_factor.is_finite()) {
            return Err(Error::validation(format!(
                "blowup_factor = {} must exceed 1",
                self.blowup_factor
            )));
        }
        if !positive(self.dt_min) {
            return Err(Error::validation(format!("dt_min = {} must be > 0", self.dt_min)));
        }
        if self.sample_stride == 0 {
            return Err(Error::validation("sample_stride must be >= 1"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.n, self.radius, self.cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    TEndReached,
    BlowupThreshold,
    StepUnderflow,
    PositivityLoss,
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub classification: Classification,
    pub summary: RunSummary,
    pub final_state: SimState,
    pub records: Vec<DiagnosticsRecord>,
    pub termination: Termination,
    pub steps: u64,
    pub rejected_steps: u64,
    pub wall_clock_secs: f64,
}

/// Integrates `config` from `t = 0` and classifies the outcome.
pub fn run(config: &SimConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = config.grid()?;
    let u0 = config.u0.sample(&grid)?;
    let state = SimState::new(&grid, u0, 0.0)?;
    run_from(&grid, state, config)
}

/// Integrates from an arbitrary positive state; `config.u0` is ignored.
pub fn run_from(grid: &RadialGrid, initial: SimState, config: &SimConfig) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();
    let chi = config.chi;
    let initial_max = initial.max_u();
    let kappa = diagnostics::kappa(grid.dim(), chi, initial.mu);
    let mut history = History::new(initial.min_u(), kappa);
    let mut state = initial;
    let mut dt = stable_dt(grid, &state, chi, config.cfl)?;
    history.push(grid, &state, chi, dt)?;

    let mut steps = 0u64;
    let mut rejected = 0u64;
    let termination = loop {
        if state.t >= config.t_end {
            break Termination::TEndReached;
        }
        if state.max_u() > config.blowup_factor * initial_max {
            break Termination::BlowupThreshold;
        }
        dt = match checked_dt(grid, &state, chi, config.cfl, config.dt_min) {
            Ok(dt) => dt,
            Err(Error::StepUnderflow { .. }) => break Termination::StepUnderflow,
            Err(Error::NonFinite { .. }) => break Termination::NonFinite,
            Err(e) => return Err(e),
        };
        let remaining = config.t_end - state.t;
        let last = dt >= remaining;
        match step(grid, &state, chi, dt.min(remaining)) {
            Ok(out) => {
                rejected += u64::from(out.retries);
                let landed = last && out.retries == 0;
                state = out.state;
                if landed {
                    state.t = config.t_end;
                }
                dt = out.dt_used;
            }
            Err(Error::PositivityLoss { .. }) => {
                rejected += u64::from(MAX_RETRIES) + 1;
                break Termination::PositivityLoss;
            }
            Err(Error::NonFinite { .. }) => break Termination::NonFinite,
            Err(e) => return Err(e),
        }
        steps += 1;
        if steps.is_multiple_of(config.sample_stride as u64) {
            history.push(grid, &state, chi, dt)?;
        }
    };
    if history.records.last().map(|r| r.t) != Some(state.t) {
        history.push(grid, &state, chi, dt)?;
    }

    let summary = RunSummary::from_records(termination, initial_max, config.t_end, &history.records);
    let classification = classify(&summary, config);
    Ok(RunResult {
        classification,
        summary,
        final_state: state,
        records: history.records,
        termination,
        steps,
        rejected_steps: rejected,
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}
