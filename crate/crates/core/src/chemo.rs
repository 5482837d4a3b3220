//! Chemoattractant gradient fields.
//!
//! Integrating `(r^{n-1} v_r)_r = r^{n-1}(μ − u)` from the origin gives
//!
//! ```text
//! v_r  = μr/n − r^{1−n} ∫₀^r ρ^{n−1} u dρ
//! v_rr = μ/n − u + (n−1) r^{−n} ∫₀^r ρ^{n−1} u dρ
//! ```
//!
//! so `v` never has to be solved for. The integral is accumulated over whole
//! cells using the exact cell measures and closed with a half-cell term at the
//! centers. With `μ` computed by the same quadrature, `v_r(R)` vanishes to
//! roundoff.

use crate::grid::RadialGrid;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ChemFields {
    /// `v_r` at all faces `f_0..f_N`; `f_0` is pinned to zero.
    pub vr_faces: Vec<f64>,
    /// `v_r` at cell centers.
    pub vr: Vec<f64>,
    /// `v_rr` at cell centers.
    pub vrr: Vec<f64>,
    pub mu: f64,
}

/// `v_r` sampled at faces and centers.
#[derive(Debug, Clone, PartialEq)]
pub struct VrField {
    pub faces: Vec<f64>,
    pub centers: Vec<f64>,
}

/// Spatial mean `μ = ∫u / |Ω|` with both integrals from the grid quadrature.
pub fn compute_mu(grid: &RadialGrid, u: &[f64]) -> Result<f64> {
    Ok(grid.mass(u)? / grid.volume())
}

/// `∫₀^r ρ^{n−1} u dρ` at faces (length N+1) and centers (length N).
fn radial_primitives(grid: &RadialGrid, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let inv_omega = 1.0 / grid.omega();
    let mut at_faces = Vec::with_capacity(u.len() + 1);
    let mut at_centers = Vec::with_capacity(u.len());
    let mut acc = 0.0;
    at_faces.push(0.0);
    for ((&ui, &mi), &half) in u.iter().zip(grid.cell_measures()).zip(grid.inner_halves()) {
        at_centers.push(acc + ui * half);
        acc += ui * mi * inv_omega;
        at_faces.push(acc);
    }
    (at_faces, at_centers)
}

/// `v_r` at faces only, the part the conservative flux needs.
pub(crate) fn face_vr(grid: &RadialGrid, u: &[f64], mu: f64) -> Vec<f64> {
    let nf = grid.dim() as f64;
    let inv_omega = 1.0 / grid.omega();
    let weights = grid.face_weights();
    let mut out = Vec::with_capacity(u.len() + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for (k, (&ui, &mi)) in u.iter().zip(grid.cell_measures()).enumerate() {
        acc += ui * mi * inv_omega;
        let f = grid.faces()[k + 1];
        out.push(mu * f / nf - acc / weights[k + 1]);
    }
    out
}

fn vr_from_primitive(n: usize, mu: f64, r: f64, primitive: f64) -> f64 {
    mu * r / n as f64 - primitive / r.powi(n as i32 - 1)
}

fn vrr_from_primitive(n: usize, mu: f64, u: f64, r: f64, primitive: f64) -> f64 {
    let nf = n as f64;
    mu / nf - u + (nf - 1.0) * primitive / r.powi(n as i32)
}

pub fn compute_vr(grid: &RadialGrid, u: &[f64], mu: f64) -> Result<VrField> {
    grid.check_len(u, "density")?;
    let (pf, pc) = radial_primitives(grid, u);
    let n = grid.dim();
    let mut faces: Vec<f64> = grid
        .faces()
        .iter()
        .zip(&pf)
        .map(|(&f, &p)| if f > 0.0 { vr_from_primitive(n, mu, f, p) } else { 0.0 })
        .collect();
    faces[0] = 0.0;
    let nf = n as f64;
    let centers = grid
        .centers()
        .iter()
        .zip(grid.center_weights())
        .zip(&pc)
        .map(|((&r, &w), &p)| mu * r / nf - p / w)
        .collect();
    Ok(VrField { faces, centers })
}

pub fn compute_vrr(grid: &RadialGrid, u: &[f64], mu: f64) -> Result<Vec<f64>> {
    grid.check_len(u, "density")?;
    let (_, pc) = radial_primitives(grid, u);
    let n = grid.dim();
    Ok(grid
        .centers()
        .iter()
        .zip(u.iter().zip(&pc))
        .map(|(&r, (&ui, &p))| vrr_from_primitive(n, mu, ui, r, p))
        .collect())
}

/// `v_rt = −u u_r/√(u² + u_r²) + χ u v_r/√(1 + v_r²)`, pointwise.
pub fn vrt_point(u: f64, ur: f64, vr: f64, chi: f64) -> f64 {
    -crate::dynamics::diffusive_flux(u, ur) + chi * u * vr / (1.0 + vr * vr).sqrt()
}

pub fn compute_vrt(u: &[f64], ur: &[f64], vr: &[f64], chi: f64) -> Vec<f64> {
    u.iter()
        .zip(ur)
        .zip(vr)
        .map(|((&u, &ur), &vr)| vrt_point(u, ur, vr, chi))
        .collect()
}

/// All chemoattractant fields of `u`, sharing one pass over the primitive.
pub fn reconstruct(grid: &RadialGrid, u: &[f64]) -> Result<ChemFields> {
    let mu = compute_mu(grid, u)?;
    Ok(reconstruct_with_mu(grid, u, mu))
}

pub(crate) fn reconstruct_with_mu(grid: &RadialGrid, u: &[f64], mu: f64) -> ChemFields {
    let n = grid.dim();
    let (pf, pc) = radial_primitives(grid, u);
    let mut vr_faces = Vec::with_capacity(pf.len());
    vr_faces.push(0.0);
    for (&f, &p) in grid.faces().iter().zip(&pf).skip(1) {
        vr_faces.push(vr_from_primitive(n, mu, f, p));
    }
    let mut vr = Vec::with_capacity(u.len());
    let mut vrr = Vec::with_capacity(u.len());
    for ((&r, &ui), &p) in grid.centers().iter().zip(u).zip(&pc) {
        vr.push(vr_from_primitive(n, mu, r, p));
        vrr.push(vrr_from_primitive(n, mu, ui, r, p));
    }
    ChemFields {
        vr_faces,
        vr,
        vrr,
        mu,
    }
}

/// Largest violations of the pointwise bounds on `v_r` and `v_rr`.
///
/// Each entry is `max(lhs − rhs)` over all sample points for an inequality
/// `lhs ≤ rhs`; a nonpositive value means the bound holds everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    /// `v_r ≤ μr/n`.
    pub vr_upper: f64,
    /// `−μRⁿ/n · r^{1−n} ≤ v_r`.
    pub vr_lower: f64,
    /// `|v_r| ≤ (max u)/n · r`.
    pub vr_abs: f64,
    /// `|v_rr| ≤ max u`.
    pub vrr_abs: f64,
    /// `|v_r(R)|`.
    pub vr_at_boundary: f64,
    pub max_u: f64,
}

impl BoundsReport {
    pub fn worst(&self) -> f64 {
        self.vr_upper
            .max(self.vr_lower)
            .max(self.vr_abs)
            .max(self.vrr_abs)
    }

    /// All bounds hold with absolute slack `tol_rel · max u`.
    pub fn holds(&self, tol_rel: f64) -> bool {
        self.worst() <= tol_rel * self.max_u
    }
}

pub fn check_bounds(grid: &RadialGrid, u: &[f64], fields: &ChemFields) -> BoundsReport {
    let n = grid.dim();
    let nf = n as f64;
    let mu = fields.mu;
    let max_u = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lower_scale = mu * grid.radius().powi(n as i32) / nf;
    let mut report = BoundsReport {
        vr_upper: f64::NEG_INFINITY,
        vr_lower: f64::NEG_INFINITY,
        vr_abs: f64::NEG_INFINITY,
        vrr_abs: f64::NEG_INFINITY,
        vr_at_boundary: fields.vr_faces.last().copied().unwrap_or(0.0).abs(),
        max_u,
    };
    let mut visit = |r: f64, vr: f64| {
        report.vr_upper = report.vr_upper.max(vr - mu * r / nf);
        report.vr_lower = report
            .vr_lower
            .max(-lower_scale * r.powi(1 - n as i32) - vr);
        report.vr_abs = report.vr_abs.max(vr.abs() - max_u * r / nf);
    };
    for (&r, &vr) in grid.centers().iter().zip(&fields.vr) {
        visit(r, vr);
    }
    for (&f, &vr) in grid.faces().iter().zip(&fields.vr_faces).skip(1) {
        visit(f, vr);
    }
    report.vrr_abs = fields
        .vrr
        .iter()
        .map(|v| v.abs() - max_u)
        .fold(f64::NEG_INFINITY, f64::max);
    report
}
