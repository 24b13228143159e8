//! Two-beam dynamical diffraction in a perfect crystal slab, symmetric Laue
//! case, no absorption.
//!
//! A plane wave at deviation parameter `y` from the exact Bragg condition
//! excites both branches of the dispersion surface. With reduced thickness
//! `A = π t / Δ_H` the diffracted amplitude is
//!
//! ```text
//! D_G(y) = (e^{iA√(1+y²)} - e^{-iA√(1+y²)}) / (2i √(1+y²)) = sin(A√(1+y²)) / √(1+y²)
//! ```
//!
//! and a pencil beam is the superposition of all plane-wave components. Across
//! the exit face the component at `y` picks up the phase `e^{iAΓy}`, where
//! `Γ = tan Ω / tan Θ_B` runs from -1 to 1 over the Borrmann fan.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaueCrystal {
    pub bragg_angle: f64,
    /// Crystal thickness over Pendellösung length, times π.
    pub reduced_thickness: f64,
}

impl LaueCrystal {
    pub fn new(bragg_angle: f64, reduced_thickness: f64) -> Result<Self> {
        let c = Self {
            bragg_angle,
            reduced_thickness,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bragg_angle > 0.0 && self.bragg_angle < FRAC_PI_2) {
            return Err(SimError::domain(format!(
                "Bragg angle must lie in (0, π/2), got {}",
                self.bragg_angle
            )));
        }
        if !(self.reduced_thickness > 0.0 && self.reduced_thickness.is_finite()) {
            return Err(SimError::domain(format!(
                "reduced thickness must be positive, got {}",
                self.reduced_thickness
            )));
        }
        Ok(())
    }
}

/// Plane-wave diffracted and forward intensities `(I_G, I_O)` with `I_G + I_O = 1`.
pub fn rocking_curve(crystal: &LaueCrystal, y: f64) -> (f64, f64) {
    let s2 = 1.0 + y * y;
    let ig = if s2.is_finite() {
        (crystal.reduced_thickness * s2.sqrt()).sin().powi(2) / s2
    } else {
        0.0
    };
    (ig, 1.0 - ig)
}

/// A sampled 1D profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D {
    pub coords: Vec<f64>,
    pub values: Vec<f64>,
}

impl Profile1D {
    /// Trapezoid-rule integral over the sampled range.
    pub fn integral(&self) -> f64 {
        self.coords
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(c, v)| 0.5 * (c[1] - c[0]) * (v[0] + v[1]))
            .sum()
    }
}

/// Quadrature settings for [`fan_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanQuadrature {
    /// Smallest truncation point of the y-integral.
    pub y_max: f64,
    /// The truncation point is pushed out until the slowest branch phase
    /// advances by at least this many radians per unit y times y_max, which keeps the
    /// asymptotic tail correction accurate near the fan edges.
    pub tail_phase: f64,
    /// Simpson nodes per period of the fastest oscillation.
    pub points_per_period: usize,
}

impl Default for FanQuadrature {
    fn default() -> Self {
        Self {
            y_max: 50.0,
            tail_phase: 200.0,
            points_per_period: 32,
        }
    }
}

/// Diffracted intensity across the exit face for pencil-beam incidence.
///
/// `I(Γ) = (A / 2π) |∫ D_G(y) e^{iAΓy} dy|²`, normalised so that
/// `∫ I(Γ) dΓ = ∫ I_G(y) dy`.
pub fn fan_profile(crystal: &LaueCrystal, gammas: &[f64]) -> Result<Profile1D> {
    fan_profile_with(crystal, gammas, &FanQuadrature::default())
}

pub fn fan_profile_with(
    crystal: &LaueCrystal,
    gammas: &[f64],
    quad: &FanQuadrature,
) -> Result<Profile1D> {
    crystal.validate()?;
    if let Some(g) = gammas.iter().find(|g| !(g.abs() < 1.0)) {
        return Err(SimError::domain(format!(
            "Γ = {g} lies outside the Borrmann fan (-1, 1)"
        )));
    }
    let a = crystal.reduced_thickness;
    let values = gammas
        .par_iter()
        .map(|&g| {
            let amp = fan_amplitude(a, g, quad);
            a / TAU * amp * amp
        })
        .collect();
    Ok(fan_result(gammas, values))
}

fn fan_result(gammas: &[f64], values: Vec<f64>) -> Profile1D {
    Profile1D {
        coords: gammas.to_vec(),
        values,
    }
}

/// `∫ D_G(y) e^{iAΓy} dy`, real because D_G is even in y.
fn fan_amplitude(a: f64, gamma: f64, quad: &FanQuadrature) -> f64 {
    // the integrand is even in Γ as well; fold so both signs take identical paths
    let g = gamma.abs();
    let slowest = a * (1.0 - g);
    let y_end = quad.y_max.max(quad.tail_phase / slowest);
    let fastest = a * (1.0 + g);
    let h_target = (TAU / fastest / quad.points_per_period as f64).min(0.05);
    let mut n = (y_end / h_target).ceil() as usize;
    n += n % 2;
    let h = y_end / n as f64;

    // 2 ∫_0^∞ sin(A s)/s cos(AΓy) dy, split into the branch phases A(s ± Γy)
    let integrand = |y: f64| {
        let s = (1.0 + y * y).sqrt();
        ((a * (s + g * y)).sin() + (a * (s - g * y)).sin()) / s
    };
    let mut acc = integrand(0.0) + integrand(y_end);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * integrand(k as f64 * h);
    }
    let body = acc * h / 3.0;
    body + branch_tail(a, g, y_end) + branch_tail(a, -g, y_end)
}

/// `∫_Y^∞ sin(A(s + Γy)) / s dy` by two rounds of integration by parts.
fn branch_tail(a: f64, g: f64, y: f64) -> f64 {
    let s = (1.0 + y * y).sqrt();
    let phase = a * (s + g * y);
    let dphase = a * (y / s + g);
    let ddphase = a / (s * s * s);
    let u = 1.0 / (s * dphase);
    let du = -(y / s * dphase + s * ddphase) / (s * dphase).powi(2);
    u * phase.cos() - du / dphase * phase.sin()
}

/// `n` uniformly spaced Γ samples strictly inside the fan: `Γ_k = -1 + (k + ½)·2/n`.
pub fn gamma_samples(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -1.0 + (k as f64 + 0.5) * 2.0 / n as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn crystal(a: f64) -> LaueCrystal {
        LaueCrystal::new(0.4466, a).unwrap()
    }

    #[test]
    fn full_pendelloesung_transfer() {
        let (g, o) = rocking_curve(&crystal(PI / 2.0), 0.0);
        assert!((g - 1.0).abs() < 1e-15);
        assert!(o.abs() < 1e-15);
    }

    #[test]
    fn off_bragg_limit() {
        let c = crystal(3.0);
        assert!(rocking_curve(&c, 1e6).0 < 1e-11);
        assert_eq!(rocking_curve(&c, f64::INFINITY), (0.0, 1.0));
    }

    #[test]
    fn crystal_validation() {
        assert!(LaueCrystal::new(0.0, 1.0).is_err());
        assert!(LaueCrystal::new(FRAC_PI_2, 1.0).is_err());
        assert!(LaueCrystal::new(0.3, 0.0).is_err());
    }

    #[test]
    fn fan_rejects_points_outside_the_delta() {
        assert!(fan_profile(&crystal(5.0), &[0.0, 1.0]).is_err());
        assert!(fan_profile(&crystal(5.0), &[-1.2]).is_err());
    }

    #[test]
    fn fan_is_symmetric() {
        let gs: Vec<f64> = (1..40).map(|k| k as f64 / 40.0).collect();
        let neg: Vec<f64> = gs.iter().map(|g| -g).collect();
        let c = crystal(10.0);
        let p = fan_profile(&c, &gs).unwrap();
        let m = fan_profile(&c, &neg).unwrap();
        for (a, b) in p.values.iter().zip(&m.values) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn fan_is_edge_enhanced() {
        let c = crystal(10.0);
        // average over one local oscillation period near the centre and the edge
        let centre: Vec<f64> = (0..41).map(|k| -0.15 + 0.3 * k as f64 / 40.0).collect();
        let edge: Vec<f64> = (0..41).map(|k| 0.985 + 0.01 * k as f64 / 40.0).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let ic = mean(&fan_profile(&c, &centre).unwrap().values);
        let ie = mean(&fan_profile(&c, &edge).unwrap().values);
        assert!(ie > ic, "edge {ie} vs centre {ic}");
    }

    #[test]
    fn thickness_averaged_rocking_curve_is_lorentzian() {
        // many Pendellösung periods in A average sin² to ½
        for &y in &[0.0, 0.5, 1.3, 3.0] {
            let (a0, span, n) = (2.0, 400.0 * PI, 400_000);
            let mean = (0..n)
                .map(|k| rocking_curve(&crystal(a0 + span * (k as f64 + 0.5) / n as f64), y).0)
                .sum::<f64>()
                / n as f64;
            let want = 0.5 / (1.0 + y * y);
            assert!((mean - want).abs() < 1e-3, "y = {y}: {mean} vs {want}");
        }
    }

    proptest! {
        #[test]
        fn rocking_curve_conserves_intensity(y in -1e3f64..1e3, a in 1e-3f64..1e3) {
            let (g, o) = rocking_curve(&crystal(a), y);
            prop_assert_eq!(g + o, 1.0);
            prop_assert!((0.0..=1.0).contains(&g));
        }
    }
}
