//! Reference observable of quantised orbital angular momentum: the ring formed
//! by superposing `|+l⟩` and `|-l⟩`, with exactly `2l` azimuthal maxima, and an
//! analyser that counts maxima along a circle.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::field::{Grid, ScalarField2D, Unit};
use crate::winding::sample_circle;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OamSuperposition {
    pub l: u32,
    pub ring_radius: f64,
    /// Gaussian 1σ width of the radial envelope.
    pub ring_width: f64,
    pub relative_phase: f64,
}

impl OamSuperposition {
    pub fn new(l: u32, ring_radius: f64, ring_width: f64) -> Self {
        Self {
            l,
            ring_radius,
            ring_width,
            relative_phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 1 {
            return Err(SimError::domain("OAM superposition needs l >= 1"));
        }
        if !(self.ring_radius > 0.0 && self.ring_width > 0.0) {
            return Err(SimError::domain(format!(
                "ring radius and width must be positive, got {} and {}",
                self.ring_radius, self.ring_width
            )));
        }
        Ok(())
    }

    /// `R(r) cos²(lθ + relative_phase/2)` at polar coordinates about the origin.
    pub fn intensity(&self, r: f64, theta: f64) -> f64 {
        let envelope = (-0.5 * ((r - self.ring_radius) / self.ring_width).powi(2)).exp();
        envelope
            * (self.l as f64 * theta + 0.5 * self.relative_phase)
                .cos()
                .powi(2)
    }
}

/// Ring pattern of the `|+l⟩ + |-l⟩` superposition sampled on a grid centred on the ring.
pub fn superposition_intensity(s: &OamSuperposition, grid: &Grid) -> Result<ScalarField2D> {
    s.validate()?;
    let pitch = grid.dx().max(grid.dz());
    if s.ring_width < 4.0 * pitch {
        return Err(SimError::Resolution(format!(
            "ring width {} m spans fewer than 4 pixels of {} m",
            s.ring_width, pitch
        )));
    }
    ScalarField2D::from_fn(*grid, Unit::IntensityNorm, |x, z| {
        s.intensity(x.hypot(z), z.atan2(x))
    })
}

/// Settings for [`count_azimuthal_maxima_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximaCounter {
    pub center: (f64, f64),
    /// Samples along the circle. Raised to `16 * expected_l` by callers that know l.
    pub samples: usize,
    /// Minimum prominence as a fraction of the ring peak.
    pub prominence: f64,
}

impl Default for MaximaCounter {
    fn default() -> Self {
        Self {
            center: (0.0, 0.0),
            samples: 720,
            prominence: 0.1,
        }
    }
}

/// Count prominent azimuthal maxima on the circle of `ring_radius` about the grid centre.
pub fn count_azimuthal_maxima(field: &ScalarField2D, ring_radius: f64) -> usize {
    count_azimuthal_maxima_with(field, ring_radius, &MaximaCounter::default())
}

pub fn count_azimuthal_maxima_with(
    field: &ScalarField2D,
    ring_radius: f64,
    counter: &MaximaCounter,
) -> usize {
    let ring = sample_circle(field, counter.center, ring_radius, counter.samples.max(16));
    count_circular_peaks(&ring, counter.prominence)
}

/// Strict local maxima of a periodic sequence whose topographic prominence is at
/// least `rel_prominence` times the largest sample. Plateaus count once.
pub fn count_circular_peaks(ring: &[f64], rel_prominence: f64) -> usize {
    let n = ring.len();
    let peak = ring.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if n < 3 || !(peak > 0.0) {
        return 0;
    }
    let threshold = rel_prominence * peak;
    let at = |i: isize| ring[i.rem_euclid(n as isize) as usize];

    let mut count = 0;
    let mut i = 0isize;
    while i < n as isize {
        // extent of the plateau starting at i
        let mut j = i;
        while j - i < n as isize - 1 && at(j + 1) == at(i) {
            j += 1;
        }
        if j - i == n as isize - 1 {
            return 0; // flat ring
        }
        let v = at(i);
        let is_max = at(i - 1) < v && at(j + 1) < v;
        // a plateau wrapping past index 0 is handled where it starts
        let starts_here = i > 0 || at(-1) != v;
        if is_max && starts_here && prominence(ring, i, j, v) >= threshold {
            count += 1;
        }
        i = j + 1;
    }
    count
}

/// Height of `v` above the higher of the two lowest points reached before climbing above `v`.
fn prominence(ring: &[f64], start: isize, end: isize, v: f64) -> f64 {
    let n = ring.len() as isize;
    let at = |i: isize| ring[i.rem_euclid(n) as usize];
    let walk = |from: isize, step: isize| {
        let mut lowest = v;
        let mut k = from;
        for _ in 0..n {
            k += step;
            let w = at(k);
            if w > v {
                break;
            }
            lowest = lowest.min(w);
        }
        lowest
    };
    let left = walk(start, -1);
    let right = walk(end, 1);
    v - left.max(right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn grid() -> Grid {
        Grid::square(256, 12e-3).unwrap()
    }

    #[test]
    fn counts_two_l_maxima() {
        for l in 1..=8 {
            let s = OamSuperposition::new(l, 3e-3, 0.6e-3);
            let f = superposition_intensity(&s, &grid()).unwrap();
            let counter = MaximaCounter {
                samples: (16 * l as usize).max(720),
                ..Default::default()
            };
            assert_eq!(
                count_azimuthal_maxima_with(&f, 3e-3, &counter),
                2 * l as usize,
                "l = {l}"
            );
        }
    }

    #[test]
    fn dipole_maxima_are_antipodal() {
        let s = OamSuperposition::new(1, 3e-3, 0.6e-3);
        assert!((s.intensity(3e-3, 0.0) - 1.0).abs() < 1e-15);
        assert!((s.intensity(3e-3, PI) - 1.0).abs() < 1e-15);
        assert!(s.intensity(3e-3, PI / 2.0) < 1e-30);
    }

    #[test]
    fn full_relative_phase_turn_returns_pattern() {
        let mut s = OamSuperposition::new(3, 3e-3, 0.6e-3);
        let a = superposition_intensity(&s, &grid()).unwrap();
        s.relative_phase = TAU;
        let b = superposition_intensity(&s, &grid()).unwrap();
        // cos² is π-periodic, and cos(x + π)² agrees with cos(x)² to rounding
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn relative_phase_rotates_maxima() {
        let l = 3;
        let mut s = OamSuperposition::new(l, 3e-3, 0.6e-3);
        s.relative_phase = 0.9;
        let shift = 0.9 / (2.0 * l as f64);
        // maxima at θ = -shift + kπ/l
        for k in 0..6 {
            let t = -shift + k as f64 * PI / l as f64;
            assert!((s.intensity(3e-3, t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn discrete_rotational_symmetry() {
        let g = Grid::square(512, 12e-3).unwrap();
        for l in 1..=4u32 {
            let s = OamSuperposition::new(l, 3e-3, 0.8e-3);
            let f = superposition_intensity(&s, &g).unwrap();
            let step = PI / l as f64;
            for k in 0..200 {
                let t = TAU * k as f64 / 200.0;
                for r in [2.4e-3, 3e-3, 3.6e-3] {
                    let a = f.sample(r * t.cos(), r * t.sin());
                    let b = f.sample(r * (t + step).cos(), r * (t + step).sin());
                    assert!((a - b).abs() < 1e-3, "l = {l}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn uniform_field_has_no_maxima() {
        let f = ScalarField2D::constant(grid(), Unit::IntensityNorm, 0.7).unwrap();
        assert_eq!(count_azimuthal_maxima(&f, 3e-3), 0);
    }

    #[test]
    fn under_resolved_ring_is_rejected() {
        let s = OamSuperposition::new(2, 3e-3, 0.1e-3);
        assert!(matches!(
            superposition_intensity(&s, &grid()),
            Err(SimError::Resolution(_))
        ));
    }

    #[test]
    fn peak_counter_edge_cases() {
        assert_eq!(count_circular_peaks(&[0.0; 10], 0.1), 0);
        assert_eq!(count_circular_peaks(&[1.0, 0.0, 0.0, 0.0], 0.1), 1);
        // plateau straddling the wrap point counts once
        assert_eq!(
            count_circular_peaks(&[1.0, 1.0, 0.0, 0.0, 0.0, 1.0], 0.1),
            1
        );
        // small ripple below the prominence threshold is ignored
        assert_eq!(
            count_circular_peaks(&[1.0, 0.5, 0.52, 0.5, 0.0, 0.0], 0.1),
            1
        );
        assert_eq!(count_circular_peaks(&[1.0, 0.2, 0.9, 0.2], 0.1), 2);
    }
}
