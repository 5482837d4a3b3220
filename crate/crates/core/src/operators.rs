//! Coefficient fields of the linear equations satisfied by `u_r` and by
//! `z = u_t/u` along radial solutions, and residual checks of those
//! equations on sampled trajectories.
//!
//! For `φ = u_r` the two operators are
//!
//! ```text
//! P φ = φ_t − A1 φ_rr − A2 φ_r − A3 φ − A4
//! Q φ = φ_t − A1 φ_rr − A2 φ_r − Ã3 φ − Ã4
//! ```
//!
//! and `z` solves `z_t = B1 z_rr + B21 z_r + (B22/r) z_r + B3 z + B4`.
//! Everything here is pointwise; the `*_coeffs` functions map the pointwise
//! formulas over cell centers.

use serde::Serialize;

use crate::chemo::{self, ChemFields};
use crate::dynamics::{gradient, rhs_divergence, second_derivative, SimState};
use crate::grid::RadialGrid;
use crate::{Error, Result};

/// Local values of `u` and `v` derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub u: f64,
    pub ur: f64,
    pub urr: f64,
    pub vr: f64,
    pub vrr: f64,
}

/// Where a [`Jet`] is evaluated and the global parameters it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub dim: usize,
    pub r: f64,
    pub mu: f64,
    pub chi: f64,
}

/// Shared powers of the two flux limiters.
struct Limiters {
    /// `√(u² + u_r²)`
    s: f64,
    /// `√(1 + v_r²)`
    q: f64,
    /// `(n − 1)/r`
    g: f64,
}

impl Limiters {
    fn new(j: &Jet, site: &Site) -> Self {
        Self {
            s: (j.u * j.u + j.ur * j.ur).sqrt(),
            q: (1.0 + j.vr * j.vr).sqrt(),
            g: (site.dim as f64 - 1.0) / site.r,
        }
    }
}

/// Right-hand side of the expanded (non-divergence) radial equation for `u_t`.
pub fn expanded_rate(j: &Jet, site: &Site) -> f64 {
    let Limiters { s, q, g } = Limiters::new(j, site);
    let (u, ur, urr, vr) = (j.u, j.ur, j.urr, j.vr);
    let chi = site.chi;
    let s3 = s * s * s;
    let q3 = q * q * q;
    u * u * u * urr / s3 + ur.powi(4) / s3 + g * u * ur / s
        - chi * ur * vr / q
        - chi * u * (site.mu - u) / q3
        - chi * g * u * vr.powi(3) / q3
}

/// `z = u_t/u` from the spatial representation.
pub fn z_point(j: &Jet, site: &Site) -> f64 {
    let Limiters { s, q, g } = Limiters::new(j, site);
    let (u, ur, urr, vr) = (j.u, j.ur, j.urr, j.vr);
    let chi = site.chi;
    let s3 = s * s * s;
    let q3 = q * q * q;
    u * u * urr / s3 + ur.powi(4) / (u * s3) + g * ur / s
        - chi * ur * vr / (u * q)
        - chi * (site.mu - u) / q3
        - chi * g * vr.powi(3) / q3
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabPoint {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

pub fn parab_point(j: &Jet, site: &Site) -> ParabPoint {
    let Limiters { s, q, g } = Limiters::new(j, site);
    let (u, ur, urr, vr, vrr) = (j.u, j.ur, j.urr, j.vr, j.vrr);
    let (chi, mu) = (site.chi, site.mu);
    let g2 = g / site.r;
    let s3 = s.powi(3);
    let s5 = s.powi(5);
    let q3 = q.powi(3);
    let q5 = q.powi(5);
    let u2 = u * u;
    let u3 = u2 * u;
    let ur3 = ur.powi(3);

    let a1 = u3 / s3;
    let a2 = 3.0 * u2 * ur3 / s5 - 3.0 * u3 * ur * urr / s5 + 4.0 * u2 * ur3 / s5
        + ur.powi(5) / s5
        + g * u3 / s3
        - chi * vr / q;
    let a3 = -3.0 * u * ur.powi(4) / s5 - g2 * u / s - chi * mu / q3 + 2.0 * chi * u / q3
        - chi * vrr / q
        + chi * vr * vr * vrr / q3
        - chi * g * vr.powi(3) / q3;
    let a4 = g * ur.powi(4) / s3 + 3.0 * chi * mu * u * vr * vrr / q5
        - 3.0 * chi * u2 * vr * vrr / q5
        + chi * g2 * u * vr.powi(3) / q3
        - 3.0 * chi * g * u * vr * vr * vrr / q5;
    ParabPoint { a1, a2, a3, a4 }
}

/// `(Ã3, Ã4)` of the second grouping of the `u_r` equation.
pub fn qarab_point(j: &Jet, site: &Site) -> (f64, f64) {
    let Limiters { s, q, g } = Limiters::new(j, site);
    let (u, ur, vr, vrr) = (j.u, j.ur, j.vr, j.vrr);
    let (chi, mu) = (site.chi, site.mu);
    let g2 = g / site.r;
    let s3 = s.powi(3);
    let s5 = s.powi(5);
    let q3 = q.powi(3);
    let q5 = q.powi(5);

    let at3 = g * ur.powi(3) / s3 - chi * mu / q3 + 2.0 * chi * u / q3 - chi * vrr / q
        + chi * vr * vr * vrr / q3
        - chi * g * vr.powi(3) / q3;
    // The v_r³ term carries (n−1)/r², as in the expanded u_r equation; it is
    // the same term that A4 holds.
    let at4 = -3.0 * u * ur.powi(5) / s5 - g2 * u * ur / s + 3.0 * chi * mu * u * vr * vrr / q5
        - 3.0 * chi * u * u * vr * vrr / q5
        + chi * g2 * u * vr.powi(3) / q3
        - 3.0 * chi * g * u * vr * vr * vrr / q5;
    (at3, at4)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPoint {
    pub b1: f64,
    pub b21: f64,
    pub b22: f64,
    pub b3: f64,
    pub b4: f64,
}

pub fn z_coeff_point(j: &Jet, site: &Site) -> ZPoint {
    let Limiters { s, q, g } = Limiters::new(j, site);
    let (u, ur, urr, vr) = (j.u, j.ur, j.urr, j.vr);
    let (chi, mu) = (site.chi, site.mu);
    let s3 = s.powi(3);
    let s5 = s.powi(5);
    let q2 = q * q;
    let q3 = q2 * q;
    let q5 = q3 * q2;
    let u3 = u * u * u;
    let gap = mu - u;

    let b1 = u3 / s3;
    let b21 = 2.0 * u * u * ur / s3 - 3.0 * u3 * ur * urr / s5 + 4.0 * ur.powi(3) / s3
        - 3.0 * ur.powi(5) / s5
        - chi * vr / q;
    let b22 = (site.dim as f64 - 1.0) * u3 / s3;
    let b3 = chi * u / q3;
    let b4 = -3.0 * chi * u * gap * ur * vr / (s * q5)
        + 3.0 * chi * chi * u * gap * vr * vr / q2.powi(3)
        + chi * ur * ur / (s * q3)
        - chi * chi * ur * vr / (q2 * q2)
        + 3.0 * chi * g * u * ur * vr * vr / (s * q5)
        - 3.0 * chi * chi * g * u * vr.powi(3) / q2.powi(3);
    ZPoint { b1, b21, b22, b3, b4 }
}

/// Cell-centered jets of a density field.
#[derive(Debug, Clone, PartialEq)]
pub struct JetField {
    pub u: Vec<f64>,
    pub ur: Vec<f64>,
    pub urr: Vec<f64>,
    pub vr: Vec<f64>,
    pub vrr: Vec<f64>,
    pub mu: f64,
}

impl JetField {
    pub fn from_density(grid: &RadialGrid, u: &[f64]) -> Result<Self> {
        let chem = chemo::reconstruct(grid, u)?;
        Self::with_chem(grid, u, chem)
    }

    pub(crate) fn with_chem(grid: &RadialGrid, u: &[f64], chem: ChemFields) -> Result<Self> {
        Ok(Self {
            u: u.to_vec(),
            ur: gradient(grid, u)?,
            urr: second_derivative(grid, u)?,
            vr: chem.vr,
            vrr: chem.vrr,
            mu: chem.mu,
        })
    }

    pub fn jet(&self, i: usize) -> Jet {
        Jet {
            u: self.u[i],
            ur: self.ur[i],
            urr: self.urr[i],
            vr: self.vr[i],
            vrr: self.vrr[i],
        }
    }

    fn map<T>(&self, grid: &RadialGrid, chi: f64, f: impl Fn(&Jet, &Site) -> T) -> Vec<T> {
        grid.centers()
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let site = Site {
                    dim: grid.dim(),
                    r,
                    mu: self.mu,
                    chi,
                };
                f(&self.jet(i), &site)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParabFields {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub a3: Vec<f64>,
    pub a4: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QarabFields {
    pub at3: Vec<f64>,
    pub at4: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZFields {
    pub b1: Vec<f64>,
    pub b21: Vec<f64>,
    pub b22: Vec<f64>,
    pub b3: Vec<f64>,
    pub b4: Vec<f64>,
}

/// All coefficient fields at one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorCoeffs {
    pub parab: ParabFields,
    pub qarab: QarabFields,
    pub z: ZFields,
}

pub fn parab_coeffs(grid: &RadialGrid, jets: &JetField, chi: f64) -> ParabFields {
    let pts = jets.map(grid, chi, parab_point);
    ParabFields {
        a1: pts.iter().map(|p| p.a1).collect(),
        a2: pts.iter().map(|p| p.a2).collect(),
        a3: pts.iter().map(|p| p.a3).collect(),
        a4: pts.iter().map(|p| p.a4).collect(),
    }
}

pub fn qarab_coeffs(grid: &RadialGrid, jets: &JetField, chi: f64) -> QarabFields {
    let (at3, at4) = jets.map(grid, chi, qarab_point).into_iter().unzip();
    QarabFields { at3, at4 }
}

pub fn z_coeffs(grid: &RadialGrid, jets: &JetField, chi: f64) -> ZFields {
    let pts = jets.map(grid, chi, z_coeff_point);
    ZFields {
        b1: pts.iter().map(|p| p.b1).collect(),
        b21: pts.iter().map(|p| p.b21).collect(),
        b22: pts.iter().map(|p| p.b22).collect(),
        b3: pts.iter().map(|p| p.b3).collect(),
        b4: pts.iter().map(|p| p.b4).collect(),
    }
}

pub fn operator_coeffs(grid: &RadialGrid, jets: &JetField, chi: f64) -> OperatorCoeffs {
    OperatorCoeffs {
        parab: parab_coeffs(grid, jets, chi),
        qarab: qarab_coeffs(grid, jets, chi),
        z: z_coeffs(grid, jets, chi),
    }
}

pub fn z_from_formula(grid: &RadialGrid, jets: &JetField, chi: f64) -> Vec<f64> {
    jets.map(grid, chi, z_point)
}

// ---------------------------------------------------------------------------
// residuals

/// Cells excluded at each end of the grid when taking residual norms.
pub const BOUNDARY_SKIP: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
}

/// Densities sampled at (at least three) times on one grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: RadialGrid,
    pub chi: f64,
    pub snapshots: Vec<Snapshot>,
    /// Simulation step used to produce the snapshots (0 for synthetic ones).
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// Divergence form against expanded form of the `u` equation.
    FormEquivalence,
    /// `P u_r = 0`.
    ParabolicP,
    /// `Q u_r = 0`.
    ParabolicQ,
    /// The linear equation for `z`.
    ZEquation,
    /// Time-differenced `u_t/u` against the spatial formula for `z`.
    ZTimeConsistency,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::FormEquivalence,
        Identity::ParabolicP,
        Identity::ParabolicQ,
        Identity::ZEquation,
        Identity::ZTimeConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::FormEquivalence => "form_equivalence",
            Identity::ParabolicP => "parabolic_p",
            Identity::ParabolicQ => "parabolic_q",
            Identity::ZEquation => "z_equation",
            Identity::ZTimeConsistency => "z_time_consistency",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub identity: Identity,
    pub cells: usize,
    pub dt: f64,
    pub snapshot_spacing: f64,
    pub residual: f64,
    /// `log2` of the residual ratio against the previous (coarser) level.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    pub fn rows_for(&self, identity: Identity) -> impl Iterator<Item = &ResidualRow> {
        self.rows.iter().filter(move |r| r.identity == identity)
    }

    /// Smallest measured order of an identity across successive levels.
    pub fn min_order(&self, identity: Identity) -> Option<f64> {
        self.rows_for(identity)
            .filter_map(|r| r.order)
            .reduce(f64::min)
    }
}

/// Three-point derivative at the middle of nonuniformly spaced samples.
pub(crate) fn time_derivative(t: [f64; 3], x: [f64; 3]) -> f64 {
    let h1 = t[1] - t[0];
    let h2 = t[2] - t[1];
    -h2 / (h1 * (h1 + h2)) * x[0] + (h2 - h1) / (h1 * h2) * x[1] + h1 / (h2 * (h1 + h2)) * x[2]
}

fn interior(cells: usize) -> std::ops::Range<usize> {
    BOUNDARY_SKIP..cells.saturating_sub(BOUNDARY_SKIP)
}

/// Centered first and second differences of a field at cell `i` (interior only).
fn centered(field: &[f64], i: usize, dr: f64) -> (f64, f64) {
    let d1 = (field[i + 1] - field[i - 1]) / (2.0 * dr);
    let d2 = (field[i + 1] - 2.0 * field[i] + field[i - 1]) / (dr * dr);
    (d1, d2)
}

/// `u_r`, `u_rr`, `u_rrr` from fourth-order centered stencils, with exact even
/// reflection across the origin. Cells whose stencil would cross `r = R` fall
/// back to second order. The parabolic identities carry `1/r` and `1/r²`
/// factors acting on the odd field `u_r`, so second-order stencils lose an
/// order at the first interior cells.
fn fine_derivatives(u: &[f64], dr: f64) -> [Vec<f64>; 3] {
    let n = u.len() as isize;
    let at = |j: isize| if j < 0 { u[(-1 - j) as usize] } else { u[j as usize] };
    let (h, h2, h3) = (dr, dr * dr, dr * dr * dr);
    let mut d = [vec![0.0; u.len()], vec![0.0; u.len()], vec![0.0; u.len()]];
    for i in 0..n {
        let f = |k: isize| at(i + k);
        let iu = i as usize;
        // symmetric differences, so constant fields cancel exactly
        let odd = |k: isize| f(k) - f(-k);
        let even = |k: isize| (f(k) - f(0)) + (f(-k) - f(0));
        if i + 2 < n {
            d[0][iu] = (8.0 * odd(1) - odd(2)) / (12.0 * h);
            d[1][iu] = (16.0 * even(1) - even(2)) / (12.0 * h2);
        } else if i + 1 < n {
            d[0][iu] = odd(1) / (2.0 * h);
            d[1][iu] = even(1) / h2;
        }
        if i + 3 < n {
            d[2][iu] = (13.0 * odd(1) - 8.0 * odd(2) + odd(3)) / (-8.0 * h3);
        } else if i + 2 < n {
            d[2][iu] = (odd(2) - 2.0 * odd(1)) / (2.0 * h3);
        }
    }
    d
}

struct SnapshotFields {
    jets: JetField,
    z: Vec<f64>,
    fine: [Vec<f64>; 3],
}

/// Interior max-norm residuals of every identity, maximized over the inner
/// snapshots of one trajectory.
pub fn identity_residuals(traj: &Trajectory) -> Result<Vec<(Identity, f64)>> {
    let snaps = &traj.snapshots;
    if snaps.len() < 3 {
        return Err(Error::validation(format!(
            "trajectory has {} snapshots, at least 3 are required",
            snaps.len()
        )));
    }
    let grid = &traj.grid;
    let chi = traj.chi;
    let cells = grid.cells();
    if cells < 2 * BOUNDARY_SKIP + 1 {
        return Err(Error::validation("grid too coarse for interior residuals"));
    }
    let dr = grid.dr();
    let mut fields = Vec::with_capacity(snaps.len());
    for s in snaps {
        grid.check_len(&s.u, "snapshot")?;
        if s.u.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::validation(format!(
                "snapshot at t = {} is not strictly positive",
                s.t
            )));
        }
        let jets = JetField::from_density(grid, &s.u)?;
        let z = z_from_formula(grid, &jets, chi);
        let fine = fine_derivatives(&s.u, dr);
        fields.push(SnapshotFields { jets, z, fine });
    }

    let mut worst = [0.0f64; 5];
    for k in 1..snaps.len() - 1 {
        let times = [snaps[k - 1].t, snaps[k].t, snaps[k + 1].t];
        let (prev, cur, next) = (&fields[k - 1], &fields[k], &fields[k + 1]);
        let state = SimState::new(grid, snaps[k].u.clone(), snaps[k].t)?;
        let div = rhs_divergence(grid, &state, chi)?;
        let jets = &cur.jets;
        for i in interior(cells) {
            let r = grid.centers()[i];
            let site = Site {
                dim: grid.dim(),
                r,
                mu: jets.mu,
                chi,
            };
            let jet = jets.jet(i);
            let expanded = expanded_rate(&jet, &site);
            worst[0] = worst[0].max((div[i] - expanded).abs());

            // φ = u_r
            let [ur, urr, urrr] = &cur.fine;
            let fine_jet = Jet {
                ur: ur[i],
                urr: urr[i],
                ..jet
            };
            let phi_t = time_derivative(times, [prev.fine[0][i], ur[i], next.fine[0][i]]);
            let p = parab_point(&fine_jet, &site);
            let principal = phi_t - p.a1 * urrr[i] - p.a2 * urr[i];
            let res_p = principal - p.a3 * ur[i] - p.a4;
            let (at3, at4) = qarab_point(&fine_jet, &site);
            let res_q = principal - at3 * ur[i] - at4;
            worst[1] = worst[1].max(res_p.abs());
            worst[2] = worst[2].max(res_q.abs());

            let z_t = time_derivative(times, [prev.z[i], cur.z[i], next.z[i]]);
            let (z_r, z_rr) = centered(&cur.z, i, dr);
            let b = z_coeff_point(&jet, &site);
            let res_z = z_t
                - (b.b1 * z_rr + b.b21 * z_r + b.b22 / r * z_r + b.b3 * cur.z[i] + b.b4);
            worst[3] = worst[3].max(res_z.abs());

            let u_t = time_derivative(times, [prev.jets.u[i], jet.u, next.jets.u[i]]);
            worst[4] = worst[4].max((u_t / jet.u - cur.z[i]).abs());
        }
    }
    Ok(Identity::ALL.iter().copied().zip(worst).collect())
}

/// Residuals of every identity across refinement levels (coarsest first),
/// with convergence orders between successive levels.
pub fn residual_suite(levels: &[Trajectory]) -> Result<ResidualReport> {
    if levels.len() < 2 {
        return Err(Error::validation(
            "residual suite needs at least two refinement levels",
        ));
    }
    let per_level = levels
        .iter()
        .map(identity_residuals)
        .collect::<Result<Vec<_>>>()?;
    let mut report = ResidualReport::default();
    for (li, (traj, residuals)) in levels.iter().zip(&per_level).enumerate() {
        let spacing = traj
            .snapshots
            .windows(2)
            .map(|w| w[1].t - w[0].t)
            .fold(0.0, f64::max);
        for (j, &(identity, residual)) in residuals.iter().enumerate() {
            let order = (li > 0).then(|| {
                let coarse = per_level[li - 1][j].1;
                let ratio = levels[li - 1].grid.dr() / traj.grid.dr();
                (coarse / residual).ln() / ratio.ln()
            });
            report.rows.push(ResidualRow {
                identity,
                cells: traj.grid.cells(),
                dt: traj.dt,
                snapshot_spacing: spacing,
                residual,
                order,
            });
        }
    }
    Ok(report)
}

/// A constant density held at the given times.
pub fn constant_trajectory(grid: &RadialGrid, value: f64, times: &[f64], chi: f64) -> Trajectory {
    Trajectory {
        grid: grid.clone(),
        chi,
        snapshots: times
            .iter()
            .map(|&t| Snapshot {
                t,
                u: vec![value; grid.cells()],
            })
            .collect(),
        dt: 0.0,
    }
}

/// Parameters of the smooth reference run used for refinement studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothRun {
    pub dim: usize,
    pub chi: f64,
    pub amplitude: f64,
    /// Center of the snapshot window.
    pub t_center: f64,
    /// Snapshot spacing as a multiple of `dr`.
    pub spacing_per_dr: f64,
    pub cfl: f64,
}

impl Default for SmoothRun {
    fn default() -> Self {
        Self {
            dim: 2,
            chi: 0.5,
            amplitude: 0.3,
            t_center: 0.05,
            spacing_per_dr: 0.5,
            cfl: 0.5,
        }
    }
}

/// Simulates `u₀ = 1 + a·cos(πr)` on the unit ball with `cells` cells and
/// stores snapshots at `t_center − Δ, t_center, t_center + Δ` with
/// `Δ = spacing_per_dr · dr`. The step size is `cfl·dr²/2`, cut to land on the
/// snapshot times.
pub fn smooth_trajectory(run: &SmoothRun, cells: usize) -> Result<Trajectory> {
    let grid = RadialGrid::new(run.dim, 1.0, cells)?;
    let spacing = run.spacing_per_dr * grid.dr();
    if run.t_center <= spacing {
        return Err(Error::validation("snapshot window starts before t = 0"));
    }
    let u0 = grid.sample(|r| 1.0 + run.amplitude * (std::f64::consts::PI * r).cos());
    let mut state = SimState::new(&grid, u0, 0.0)?;
    let dt = run.cfl * grid.dr() * grid.dr() / 2.0;
    let targets = [run.t_center - spacing, run.t_center, run.t_center + spacing];
    let mut snapshots = Vec::with_capacity(3);
    for target in targets {
        while state.t < target {
            let h = dt.min(target - state.t);
            let next = crate::dynamics::step(&grid, &state, run.chi, h)?;
            // land exactly on the target time
            let landed = next.dt_used >= target - state.t;
            state = next.state;
            if landed {
                state.t = target;
            }
        }
        snapshots.push(Snapshot {
            t: state.t,
            u: state.u.clone(),
        });
    }
    Ok(Trajectory {
        grid,
        chi: run.chi,
        snapshots,
        dt,
    })
}

/// `max |u·z − rhs_expanded|` relative to `max |rhs_expanded|` over all cells.
pub fn z_consistency_gap(grid: &RadialGrid, u: &[f64], chi: f64) -> Result<f64> {
    let jets = JetField::from_density(grid, u)?;
    let z = z_from_formula(grid, &jets, chi);
    let state = SimState::new(grid, u.to_vec(), 0.0)?;
    let rate = crate::dynamics::rhs_expanded(grid, &state, chi)?;
    let scale = rate.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    Ok(u.iter()
        .zip(&z)
        .zip(&rate)
        .map(|((u, z), rate)| (u * z - rate).abs())
        .fold(0.0, f64::max)
        / scale)
}
