//! Uniform cell-centered grid on the radial coordinate of `B_R(0) ⊂ ℝⁿ`.
//!
//! Cell `i` covers `[f_i, f_{i+1}]` with center `r_i = (i + 1/2)·dr`, so the
//! origin is a face and never a sample point. Cell measures are the exact
//! n-dimensional shell volumes, which makes the mass of a piecewise-constant
//! field exact.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Surface measure of the unit sphere `S^{n-1} ⊂ ℝⁿ`.
///
/// Uses `ω_1 = 2`, `ω_2 = 2π` and the recursion `ω_{n+2} = 2π/n · ω_n`.
pub fn unit_sphere_measure(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be at least 1");
    let (mut k, mut omega) = if n % 2 == 1 { (1, 2.0) } else { (2, 2.0 * PI) };
    while k < n {
        omega *= 2.0 * PI / k as f64;
        k += 2;
    }
    omega
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: usize,
    radius: f64,
    dr: f64,
    faces: Vec<f64>,
    centers: Vec<f64>,
    omega: f64,
    measures: Vec<f64>,
    volume: f64,
    /// `f_i^{n-1}` at every face.
    face_weights: Vec<f64>,
    /// `r_i^{n-1}` at every center.
    center_weights: Vec<f64>,
    /// `(r_i^n − f_i^n)/n`, the inner half of cell `i` without `ω_n`.
    inner_halves: Vec<f64>,
}

impl RadialGrid {
    pub fn new(dim: usize, radius: f64, cells: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::validation(format!("dimension n = {dim} must be >= 1")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::validation(format!("radius R = {radius} must be positive")));
        }
        if cells < 2 {
            return Err(Error::validation(format!("cell count N = {cells} must be >= 2")));
        }
        let dr = radius / cells as f64;
        let mut faces: Vec<f64> = (0..=cells).map(|i| i as f64 * dr).collect();
        faces[cells] = radius;
        let centers: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * dr).collect();
        let omega = unit_sphere_measure(dim);
        let p = dim as i32;
        let measures: Vec<f64> = faces
            .windows(2)
            .map(|w| omega * (w[1].powi(p) - w[0].powi(p)) / dim as f64)
            .collect();
        let volume = measures.iter().sum();
        let face_weights = faces.iter().map(|f| f.powi(p - 1)).collect();
        let center_weights = centers.iter().map(|r| r.powi(p - 1)).collect();
        let inner_halves = centers
            .iter()
            .zip(&faces)
            .map(|(r, f)| (r.powi(p) - f.powi(p)) / dim as f64)
            .collect();
        Ok(Self {
            dim,
            radius,
            dr,
            faces,
            centers,
            omega,
            measures,
            volume,
            face_weights,
            center_weights,
            inner_halves,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cells(&self) -> usize {
        self.centers.len()
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn cell_measures(&self) -> &[f64] {
        &self.measures
    }

    pub(crate) fn face_weights(&self) -> &[f64] {
        &self.face_weights
    }

    pub(crate) fn center_weights(&self) -> &[f64] {
        &self.center_weights
    }

    pub(crate) fn inner_halves(&self) -> &[f64] {
        &self.inner_halves
    }

    /// `|Ω|` as the sum of the discrete cell measures.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `|Ω| = ω_n Rⁿ / n` in closed form.
    pub fn exact_volume(&self) -> f64 {
        self.omega * self.radius.powi(self.dim as i32) / self.dim as f64
    }

    pub fn check_len(&self, field: &[f64], what: &str) -> Result<()> {
        if field.len() != self.cells() {
            return Err(Error::validation(format!(
                "{what} has length {}, grid has {} cells",
                field.len(),
                self.cells()
            )));
        }
        Ok(())
    }

    /// Samples `f` at the cell centers.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.centers.iter().map(|&r| f(r)).collect()
    }

    /// `∫_Ω u = Σ u_i μ_i`.
    pub fn mass(&self, u: &[f64]) -> Result<f64> {
        self.check_len(u, "field")?;
        Ok(self.integrate(u))
    }

    /// Midpoint quadrature `Σ g_i μ_i`; callers guarantee the length.
    pub(crate) fn integrate(&self, g: &[f64]) -> f64 {
        debug_assert_eq!(g.len(), self.cells());
        g.iter().zip(&self.measures).map(|(g, m)| g * m).sum()
    }
}

/// Free-function form of [`RadialGrid::new`].
pub fn make_grid(dim: usize, radius: f64, cells: usize) -> Result<RadialGrid> {
    RadialGrid::new(dim, radius, cells)
}

/// Free-function form of [`RadialGrid::mass`].
pub fn mass(grid: &RadialGrid, u: &[f64]) -> Result<f64> {
    grid.mass(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn sphere_measures() {
        assert_eq!(unit_sphere_measure(1), 2.0);
        assert_relative_eq!(unit_sphere_measure(2), 2.0 * PI);
        assert_relative_eq!(unit_sphere_measure(3), 4.0 * PI);
        assert_relative_eq!(unit_sphere_measure(4), 2.0 * PI * PI);
        assert_relative_eq!(unit_sphere_measure(5), 8.0 * PI * PI / 3.0);
    }

    #[test]
    fn one_dimensional_layout() {
        let g = make_grid(1, 1.0, 4).unwrap();
        assert_eq!(g.faces(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.centers(), &[0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn annulus_areas() {
        let g = make_grid(2, 2.0, 2).unwrap();
        assert_eq!(g.faces(), &[0.0, 1.0, 2.0]);
        assert_relative_eq!(g.cell_measures()[0], PI, max_relative = 1e-15);
        assert_relative_eq!(g.cell_measures()[1], 3.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_grid(1, 1.0, 0), Err(Error::Validation(_))));
        assert!(matches!(make_grid(1, 1.0, 1), Err(Error::Validation(_))));
        assert!(matches!(make_grid(0, 1.0, 8), Err(Error::Validation(_))));
        assert!(matches!(make_grid(2, 0.0, 8), Err(Error::Validation(_))));
        assert!(matches!(make_grid(2, -1.0, 8), Err(Error::Validation(_))));
    }

    #[test]
    fn mass_of_constants() {
        let g1 = make_grid(1, 1.0, 16).unwrap();
        assert_relative_eq!(mass(&g1, &[3.0; 16]).unwrap(), 6.0, max_relative = 1e-14);
        let g2 = make_grid(2, 1.0, 16).unwrap();
        assert_relative_eq!(mass(&g2, &[1.0; 16]).unwrap(), PI, max_relative = 1e-14);
        let g3 = make_grid(3, 1.0, 16).unwrap();
        assert_relative_eq!(
            mass(&g3, &[1.0; 16]).unwrap(),
            4.0 * PI / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn mass_length_mismatch() {
        let g = make_grid(2, 1.0, 8).unwrap();
        assert!(matches!(g.mass(&[1.0; 7]), Err(Error::Validation(_))));
    }

    #[test]
    fn volume_matches_closed_form_across_sizes() {
        for dim in 1..=3 {
            let mut cells = 4;
            while cells <= 4096 {
                let g = make_grid(dim, 1.7, cells).unwrap();
                let ones = vec![1.0; cells];
                let rel = (g.mass(&ones).unwrap() - g.exact_volume()).abs() / g.exact_volume();
                assert!(rel <= 1e-12, "n={dim} N={cells} rel={rel:e}");
                cells *= 2;
            }
        }
    }

    proptest! {
        #[test]
        fn grid_invariants(dim in 1usize..=5, radius in 0.01f64..50.0, cells in 2usize..600) {
            let g = make_grid(dim, radius, cells).unwrap();
            prop_assert_eq!(g.faces()[0], 0.0);
            prop_assert_eq!(g.faces()[cells], radius);
            prop_assert!(g.faces().windows(2).all(|w| w[1] > w[0]));
            prop_assert!(g.centers().iter().all(|&r| r > 0.0));
            let rel = (g.volume() - g.exact_volume()).abs() / g.exact_volume();
            prop_assert!(rel <= 1e-12);
        }

        #[test]
        fn mass_is_linear(
            dim in 1usize..=3,
            a in -5.0f64..5.0,
            b in -5.0f64..5.0,
            seed in proptest::collection::vec(0.1f64..10.0, 32),
        ) {
            let g = make_grid(dim, 1.0, 16).unwrap();
            let u = &seed[..16];
            let w = &seed[16..];
            let combo: Vec<f64> = u.iter().zip(w).map(|(u, w)| a * u + b * w).collect();
            let lhs = g.mass(&combo).unwrap();
            let rhs = a * g.mass(u).unwrap() + b * g.mass(w).unwrap();
            let scale = (a.abs() + b.abs()) * g.mass(&seed[..16]).unwrap().max(g.mass(w).unwrap());
            prop_assert!((lhs - rhs).abs() <= 1e-13 * scale.max(1.0));
        }
    }
}
