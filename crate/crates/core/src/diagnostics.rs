//! Scalar formulas and per-sample monitors.

use serde::Serialize;

use crate::chemo;
use crate::dynamics::SimState;
use crate::grid::RadialGrid;
use crate::operators::{time_derivative, z_from_formula, JetField};
use crate::{Error, Result};

/// `2/(3√3)`, the maximum of [`phi`].
pub fn phi_max() -> f64 {
    2.0 / (3.0 * 3f64.sqrt())
}

/// Decay rate of the lower envelope `min u₀ · e^{−κt}`:
/// `κ = χμ + 2(n−1)χμ / (3√3 n)`.
pub fn kappa(n: usize, chi: f64, mu: f64) -> f64 {
    let nf = n as f64;
    chi * mu + 2.0 * (nf - 1.0) * chi * mu / (3.0 * 3f64.sqrt() * nf)
}

/// `φ(ξ) = ξ / √(1+ξ)³`.
pub fn phi(xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::validation(format!("phi is defined for xi >= 0, got {xi}")));
    }
    Ok(xi / (1.0 + xi).powf(1.5))
}

/// One-dimensional critical mass `1/√(χ² − 1)`, infinite for `χ ≤ 1`.
pub fn critical_mass(chi: f64) -> f64 {
    if chi > 1.0 {
        1.0 / (chi * chi - 1.0).sqrt()
    } else {
        f64::INFINITY
    }
}

/// `Λ = m/√(1+m²)` in one dimension, 1 otherwise.
pub fn lambda(n: usize, m: f64) -> f64 {
    if n == 1 {
        m / (1.0 + m * m).sqrt()
    } else {
        1.0
    }
}

/// `∫u^{p−1}u_r²/√(u²+u_r²) + ∫u^p − ∫u^{p−1}|u_r|`, which is nonnegative.
pub fn lemma51_gap(grid: &RadialGrid, u: &[f64], ur: &[f64], p: f64) -> Result<f64> {
    grid.check_len(u, "density")?;
    grid.check_len(ur, "gradient")?;
    if !(p >= 1.0) {
        return Err(Error::validation(format!("exponent p = {p} must be >= 1")));
    }
    let integrand: Vec<f64> = u
        .iter()
        .zip(ur)
        .map(|(&u, &ur)| lemma51_integrand(u, ur, p))
        .collect();
    Ok(grid.integrate(&integrand))
}

pub fn lemma51_integrand(u: f64, ur: f64, p: f64) -> f64 {
    let w = u.powf(p - 1.0);
    let s = (u * u + ur * ur).sqrt();
    let damped = if s == 0.0 { 0.0 } else { w * ur * ur / s };
    damped + w * u - w * ur.abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub mu: f64,
    pub min_u: f64,
    pub max_u: f64,
    pub min_ur: f64,
    pub max_abs_ur: f64,
    pub max_z: f64,
    /// Running maximum of `max(z, 0)` over all samples so far.
    pub max_zplus_history: f64,
    pub lower_envelope: f64,
    /// `‖u‖_{L²}`.
    pub lp2: f64,
    /// `‖u‖_{L⁴}`.
    pub lp4: f64,
    /// `∫u²`, `∫u⁴`.
    pub lp_integrals: [f64; 2],
    /// `∫u|u_r|`, `∫u³|u_r|`.
    pub grad_moments: [f64; 2],
    pub dt: f64,
    pub ur_over_zplus_ratio: f64,
    /// Worst violation of the `v_r`, `v_rr` pointwise bounds divided by `max u`.
    pub chem_bound_violation: f64,
    /// `|v_r(R)|`.
    pub vr_boundary: f64,
}

/// Append-only record list of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub records: Vec<DiagnosticsRecord>,
    pub min_u0: f64,
    pub kappa: f64,
    zplus_sup: f64,
}

impl History {
    pub fn new(min_u0: f64, kappa: f64) -> Self {
        Self {
            records: Vec::new(),
            min_u0,
            kappa,
            zplus_sup: 0.0,
        }
    }

    pub fn zplus_sup(&self) -> f64 {
        self.zplus_sup
    }

    pub fn push(&mut self, grid: &RadialGrid, state: &SimState, chi: f64, dt: f64) -> Result<()> {
        let rec = record(grid, state, chi, dt, self)?;
        self.zplus_sup = rec.max_zplus_history;
        self.records.push(rec);
        Ok(())
    }
}

/// Evaluates every monitor at `state`; `history` supplies the envelope
/// parameters and the running `z₊` supremum.
pub fn record(
    grid: &RadialGrid,
    state: &SimState,
    chi: f64,
    dt: f64,
    history: &History,
) -> Result<DiagnosticsRecord> {
    let chem = chemo::reconstruct(grid, &state.u)?;
    let bounds = chemo::check_bounds(grid, &state.u, &chem);
    let jets = JetField::with_chem(grid, &state.u, chem)?;
    let z = z_from_formula(grid, &jets, chi);
    let u = &jets.u;
    let ur = &jets.ur;

    let fold_max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let fold_min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_z = fold_max(&z);
    let max_zplus_history = history.zplus_sup.max(max_z.max(0.0));
    let max_abs_ur = ur.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let pow_integral = |p: i32| grid.integrate(&u.iter().map(|v| v.powi(p)).collect::<Vec<_>>());
    let grad_moment = |p: i32| {
        grid.integrate(
            &u.iter()
                .zip(ur)
                .map(|(v, d)| v.powi(p - 1) * d.abs())
                .collect::<Vec<_>>(),
        )
    };
    let lp_integrals = [pow_integral(2), pow_integral(4)];
    Ok(DiagnosticsRecord {
        t: state.t,
        mass: grid.integrate(u),
        mu: jets.mu,
        min_u: fold_min(u),
        max_u: fold_max(u),
        min_ur: fold_min(ur),
        max_abs_ur,
        max_z,
        max_zplus_history,
        lower_envelope: history.min_u0 * (-history.kappa * state.t).exp(),
        lp2: lp_integrals[0].sqrt(),
        lp4: lp_integrals[1].powf(0.25),
        lp_integrals,
        grad_moments: [grad_moment(2), grad_moment(4)],
        dt,
        ur_over_zplus_ratio: max_abs_ur / (1.0 + max_zplus_history),
        chem_bound_violation: bounds.worst() / bounds.max_u,
        vr_boundary: bounds.vr_at_boundary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdiSample {
    pub t: f64,
    /// `p²∫u^p − [d/dt∫u^p + ∫u^p + p(p−1)(1−χΛ)∫u^{p−1}|u_r|]`
    pub residual: f64,
    /// `1e−6 · p² ∫u^p`
    pub tol: f64,
}

impl OdiSample {
    pub fn holds(&self) -> bool {
        self.residual >= -self.tol
    }
}

/// Slack in the differential inequality for `∫u^p` at every inner sample.
pub fn lp_ode_residual(
    records: &[DiagnosticsRecord],
    p: u32,
    chi: f64,
    lambda: f64,
) -> Result<Vec<OdiSample>> {
    let slot = match p {
        2 => 0,
        4 => 1,
        _ => return Err(Error::validation(format!("p = {p} not monitored, use 2 or 4"))),
    };
    if !(chi * lambda < 1.0) {
        return Err(Error::validation(format!(
            "chi * Lambda = {} must be < 1",
            chi * lambda
        )));
    }
    if records.len() < 3 {
        return Err(Error::validation(format!(
            "{} samples given, at least 3 are required",
            records.len()
        )));
    }
    let pf = p as f64;
    Ok(records
        .windows(3)
        .filter(|w| w[0].t < w[1].t && w[1].t < w[2].t)
        .map(|w| {
            let ip = w[1].lp_integrals[slot];
            let deriv = time_derivative(
                [w[0].t, w[1].t, w[2].t],
                [w[0].lp_integrals[slot], ip, w[2].lp_integrals[slot]],
            );
            let lhs = deriv + ip + pf * (pf - 1.0) * (1.0 - chi * lambda) * w[1].grad_moments[slot];
            OdiSample {
                t: w[1].t,
                residual: pf * pf * ip - lhs,
                tol: 1e-6 * pf * pf * ip,
            }
        })
        .collect())
}
