//! Fringe-dislocation analysis: phase retrieval by four-step phase stepping and
//! phase unwinding along a closed circle.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Result, SimError};
use crate::field::ScalarField2D;
use crate::interferogram::ideal_interferogram;

/// Flag offsets of the four phase-stepped frames.
pub const PHASE_STEPS: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];

/// Interferograms of one thickness map at `φ₀ + {0, π/2, π, 3π/2}`.
pub fn phase_stepped_frames(
    thickness: &ScalarField2D,
    d_lambda: f64,
    phi0: f64,
) -> Result<[ScalarField2D; 4]> {
    let frame = |k: usize| ideal_interferogram(thickness, d_lambda, phi0 + PHASE_STEPS[k]);
    Ok([frame(0)?, frame(1)?, frame(2)?, frame(3)?])
}

/// Wrapped phase from four intensities `I_k = ½(1 + cos(Φ + k π/2))`.
pub fn four_step_phase(i: [f64; 4]) -> f64 {
    (i[3] - i[1]).atan2(i[0] - i[2])
}

/// Points `(x, z)` on a circle, counter-clockwise from the +x direction.
pub fn circle_points(
    center: (f64, f64),
    radius: f64,
    samples: usize,
) -> impl Iterator<Item = (f64, f64)> {
    (0..samples).map(move |k| {
        let t = TAU * k as f64 / samples as f64;
        (center.0 + radius * t.cos(), center.1 + radius * t.sin())
    })
}

/// Bilinear samples of a field along a circle.
pub fn sample_circle(
    field: &ScalarField2D,
    center: (f64, f64),
    radius: f64,
    samples: usize,
) -> Vec<f64> {
    circle_points(center, radius, samples)
        .map(|(x, z)| field.sample(x, z))
        .collect()
}

/// Result of unwinding the retrieved phase once around a circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Winding {
    /// Sum of wrapped phase increments over 2π. Integral for any closed loop.
    pub total: f64,
    /// `total` rounded to the nearest integer.
    pub number: i64,
    /// Winding implied by the regular increments alone, extrapolated to the full circle.
    /// Equals `number` for smooth spirals; fractional across a radial phase step.
    pub fractional: f64,
    /// Angles (radians from +x) of increments that break the local phase rate.
    pub discontinuities: Vec<f64>,
}

impl Winding {
    pub fn has_discontinuity(&self) -> bool {
        !self.discontinuities.is_empty()
    }
}

/// Unwind a closed sequence of wrapped phases sampled uniformly around a circle.
pub fn unwind(phases: &[f64]) -> Result<Winding> {
    let n = phases.len();
    if n < 8 {
        return Err(SimError::Resolution(format!(
            "need at least 8 phase samples, got {n}"
        )));
    }
    let increments: Vec<f64> = (0..n)
        .map(|k| wrap_pi(phases[(k + 1) % n] - phases[k]))
        .collect();
    let total: f64 = increments.iter().sum::<f64>() / TAU;

    let mut sorted = increments.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[n / 2];
    let mut regular_sum = 0.0;
    let mut regular = 0usize;
    let mut flagged = vec![false; n];
    for (k, &d) in increments.iter().enumerate() {
        if (d - median).abs() > FRAC_PI_2 {
            flagged[k] = true;
        } else {
            regular_sum += d;
            regular += 1;
        }
    }
    let fractional = regular_sum / TAU * n as f64 / regular.max(1) as f64;
    Ok(Winding {
        total,
        number: total.round() as i64,
        fractional,
        discontinuities: merge_runs(&flagged),
    })
}

/// Angles of runs of adjacent flagged increments, treating the sequence as circular.
/// A step that falls between samples is often split over two increments.
fn merge_runs(flagged: &[bool]) -> Vec<f64> {
    let n = flagged.len();
    let Some(start) = (0..n).find(|&k| !flagged[k]) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for i in 1..=n {
        let k = (start + i) % n;
        if flagged[k] {
            run.push(k);
        } else if !run.is_empty() {
            let (s, c) = run.iter().fold((0.0, 0.0), |(s, c), &k| {
                let a = TAU * (k as f64 + 0.5) / n as f64;
                (s + a.sin(), c + a.cos())
            });
            let a = f64::atan2(s, c).rem_euclid(TAU);
            out.push(if TAU - a < 1e-12 { 0.0 } else { a });
            run.clear();
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Phase winding of an interferogram series around a circle, from four phase-stepped frames.
pub fn winding_around(
    frames: &[ScalarField2D; 4],
    center: (f64, f64),
    radius: f64,
    samples: usize,
) -> Result<Winding> {
    let rings: Vec<Vec<f64>> = frames
        .iter()
        .map(|f| sample_circle(f, center, radius, samples))
        .collect();
    let phases: Vec<f64> = (0..samples)
        .map(|k| four_step_phase([rings[0][k], rings[1][k], rings[2][k], rings[3][k]]))
        .collect();
    unwind(&phases)
}

fn wrap_pi(d: f64) -> f64 {
    let w = (d + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_step_recovers_phase() {
        for k in 0..16 {
            let phi = -3.0 + 0.37 * k as f64;
            let i = PHASE_STEPS.map(|s| 0.5 * (1.0 + (phi + s).cos()));
            let got = four_step_phase(i);
            assert!(wrap_pi(got - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn unwind_counts_integer_spirals() {
        for l in -4i64..=4 {
            let phases: Vec<f64> = (0..64)
                .map(|k| wrap_pi(l as f64 * TAU * k as f64 / 64.0 + 0.3))
                .collect();
            let w = unwind(&phases).unwrap();
            assert_eq!(w.number, l);
            assert!(!w.has_discontinuity());
            assert!((w.fractional - l as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn unwind_detects_fractional_step() {
        let n = 240;
        let phases: Vec<f64> = (0..n)
            .map(|k| wrap_pi(7.5 * TAU * k as f64 / n as f64))
            .collect();
        let w = unwind(&phases).unwrap();
        assert_eq!(w.discontinuities.len(), 1);
        assert!((w.fractional - 7.5).abs() < 0.05);
        assert!(w.number == 7 || w.number == 8);
    }

    #[test]
    fn step_split_over_two_increments_counts_once() {
        let mut flagged = vec![false; 16];
        flagged[15] = true;
        flagged[0] = true;
        flagged[7] = true;
        let merged = merge_runs(&flagged);
        assert_eq!(merged.len(), 2);
        assert!(merged[0].abs() < 1e-12);
        assert!((merged[1] - 7.5 * TAU / 16.0).abs() < 1e-12);
        assert!(merge_runs(&[true; 8]).is_empty());
    }

    #[test]
    fn too_few_samples_is_an_error() {
        assert!(unwind(&[0.0; 4]).is_err());
    }
}
