//! Interferogram synthesis from thickness maps.
//!
//! The G-detector intensity is `I = ½ (1 + V cos(φ₀ + 2π T / D_λ))`, where `T`
//! is the beam-path thickness difference between the arms, `φ₀` the global
//! phase set by the phase flag, and `V` the local fringe visibility. The
//! O-detector sees `1 - I`.

use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Diagnosed, Result, SimError, Warning};
use crate::field::{Grid, ScalarField2D, Unit};

/// Default relative Gaussian noise level for simulated detector images.
pub const DEFAULT_NOISE_SIGMA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    None,
    Gaussian { sigma_rel: f64 },
    Poisson { counts_per_pixel: f64 },
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::Gaussian {
            sigma_rel: DEFAULT_NOISE_SIGMA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub nu: usize,
    pub nv: usize,
    pub pixel_pitch: f64,
    pub noise: NoiseModel,
    pub seed: u64,
}

impl DetectorSpec {
    /// `n x n` detector whose pixels tile a square field of side `extent`.
    pub fn covering(n: usize, extent: f64) -> Self {
        Self {
            nu: n,
            nv: n,
            pixel_pitch: extent / n as f64,
            noise: NoiseModel::None,
            seed: 0,
        }
    }

    pub fn with_noise(mut self, noise: NoiseModel, seed: u64) -> Self {
        self.noise = noise;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 || self.nv == 0 {
            return Err(SimError::domain(
                "detector needs at least one pixel per axis",
            ));
        }
        if !(self.pixel_pitch > 0.0 && self.pixel_pitch.is_finite()) {
            return Err(SimError::domain(format!(
                "pixel pitch must be positive, got {}",
                self.pixel_pitch
            )));
        }
        match self.noise {
            NoiseModel::Gaussian { sigma_rel } if !(sigma_rel >= 0.0) => Err(SimError::domain(
                format!("gaussian sigma_rel must be >= 0, got {sigma_rel}"),
            )),
            NoiseModel::Poisson { counts_per_pixel } if !(counts_per_pixel > 0.0) => {
                Err(SimError::domain(format!(
                    "poisson counts_per_pixel must be > 0, got {counts_per_pixel}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(
            self.nu,
            self.nv,
            self.nu as f64 * self.pixel_pitch,
            self.nv as f64 * self.pixel_pitch,
        )
    }
}

/// Transverse Gaussian widths of the neutron wave packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceModel {
    pub sigma_x: f64,
    pub sigma_z: f64,
}

impl CoherenceModel {
    /// σ_z = 60 nm vertically, σ_x = 3 µm in the scattering plane.
    pub fn neutron_interferometer() -> Self {
        Self {
            sigma_x: 3e-6,
            sigma_z: 60e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_x > 0.0 && self.sigma_z > 0.0) {
            return Err(SimError::domain(format!(
                "coherence widths must be positive, got ({}, {})",
                self.sigma_x, self.sigma_z
            )));
        }
        Ok(())
    }

    /// Width of the intensity kernel along each axis. The packet amplitude has
    /// width σ; its autocorrelation has width σ√2.
    pub fn kernel_widths(&self) -> (f64, f64) {
        (self.sigma_x * SQRT_2, self.sigma_z * SQRT_2)
    }
}

/// Phase map `2π T / D_λ`.
pub fn phase_map(thickness: &ScalarField2D, d_lambda: f64) -> Result<ScalarField2D> {
    check_d_lambda(d_lambda)?;
    thickness.map(Unit::PhaseRad, |t| TAU * t / d_lambda)
}

fn check_d_lambda(d_lambda: f64) -> Result<()> {
    if d_lambda > 0.0 && d_lambda.is_finite() {
        Ok(())
    } else {
        Err(SimError::domain(format!(
            "lambda-thickness must be positive, got {d_lambda}"
        )))
    }
}

fn fringe(phi0: f64, phase: f64, visibility: f64) -> f64 {
    0.5 * (1.0 + visibility * (phi0 + phase).cos())
}

/// Fully coherent G-detector interferogram of a thickness map.
pub fn ideal_interferogram(
    thickness: &ScalarField2D,
    d_lambda: f64,
    phi0: f64,
) -> Result<ScalarField2D> {
    check_d_lambda(d_lambda)?;
    thickness.map(Unit::IntensityNorm, |t| {
        fringe(phi0, TAU * t / d_lambda, 1.0)
    })
}

/// O-detector counterpart `1 - I` of a G-detector interferogram.
pub fn complementary_interferogram(g: &ScalarField2D) -> Result<ScalarField2D> {
    if g.values().iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(SimError::domain(
            "complementary interferogram needs values in [0, 1]",
        ));
    }
    g.map(Unit::IntensityNorm, |v| 1.0 - v)
}

/// Local fringe visibility `|<exp(iΦ)>|` under an anisotropic Gaussian average.
///
/// Axes where σ is below a tenth of the pixel pitch are not averaged; if both
/// are, the result is identically 1 and a [`Warning::CoherenceUnresolved`] is raised.
pub fn visibility_map(
    phase: &ScalarField2D,
    coh: &CoherenceModel,
) -> Result<Diagnosed<ScalarField2D>> {
    coh.validate()?;
    let grid = *phase.grid();
    let (kx, kz) = coh.kernel_widths();
    let resolved_x = coh.sigma_x >= 0.1 * grid.dx();
    let resolved_z = coh.sigma_z >= 0.1 * grid.dz();

    if !resolved_x && !resolved_z {
        let (sigma_m, pitch_m) = if coh.sigma_x / grid.dx() >= coh.sigma_z / grid.dz() {
            (coh.sigma_x, grid.dx())
        } else {
            (coh.sigma_z, grid.dz())
        };
        return Ok(Diagnosed {
            value: ScalarField2D::constant(grid, Unit::Visibility, 1.0)?,
            warnings: vec![Warning::CoherenceUnresolved { sigma_m, pitch_m }],
        });
    }

    let mut field: Vec<Complex64> = phase
        .values()
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    if resolved_x {
        let kernel = gaussian_kernel(kx / grid.dx());
        field = convolve_rows(&field, grid.nx, grid.nz, &kernel);
    }
    if resolved_z {
        let kernel = gaussian_kernel(kz / grid.dz());
        field = transpose(&field, grid.nx, grid.nz);
        field = convolve_rows(&field, grid.nz, grid.nx, &kernel);
        field = transpose(&field, grid.nz, grid.nx);
    }
    let values = field.iter().map(|c| c.norm().min(1.0)).collect();
    Ok(Diagnosed::clean(ScalarField2D::from_values(
        grid,
        Unit::Visibility,
        values,
    )?))
}

/// Sampled Gaussian of standard deviation `sigma_px` pixels, truncated at 6σ.
fn gaussian_kernel(sigma_px: f64) -> Vec<f64> {
    let half = (6.0 * sigma_px).ceil() as usize;
    (0..=2 * half)
        .map(|i| {
            let d = i as f64 - half as f64;
            (-0.5 * (d / sigma_px).powi(2)).exp()
        })
        .collect()
}

/// Normalised 1D convolution along each row; weights falling off the grid are dropped.
fn convolve_rows(
    data: &[Complex64],
    width: usize,
    height: usize,
    kernel: &[f64],
) -> Vec<Complex64> {
    let half = (kernel.len() / 2) as isize;
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    out.par_chunks_mut(width)
        .enumerate()
        .for_each(|(row, out_row)| {
            let src = &data[row * width..(row + 1) * width];
            for (i, o) in out_row.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut wsum = 0.0;
                for (k, &w) in kernel.iter().enumerate() {
                    let j = i as isize + k as isize - half;
                    if j < 0 || j >= width as isize {
                        continue;
                    }
                    acc += src[j as usize] * w;
                    wsum += w;
                }
                *o = acc / wsum;
            }
        });
    debug_assert_eq!(out.len(), width * height);
    out
}

fn transpose(data: &[Complex64], width: usize, height: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for r in 0..height {
        for c in 0..width {
            out[c * height + r] = data[r * width + c];
        }
    }
    out
}

/// Interferogram with the fringe term weighted by the local visibility.
pub fn coherent_interferogram(
    thickness: &ScalarField2D,
    d_lambda: f64,
    phi0: f64,
    coh: &CoherenceModel,
) -> Result<Diagnosed<ScalarField2D>> {
    let phase = phase_map(thickness, d_lambda)?;
    let vis = visibility_map(&phase, coh)?;
    let values = phase
        .values()
        .iter()
        .zip(vis.value.values())
        .map(|(&p, &v)| fringe(phi0, p, v))
        .collect();
    Ok(Diagnosed {
        value: ScalarField2D::from_values(*phase.grid(), Unit::IntensityNorm, values)?,
        warnings: vis.warnings,
    })
}

/// Interferogram for a given visibility map (the incoherent limit is `V ≡ 0`).
pub fn interferogram_with_visibility(
    thickness: &ScalarField2D,
    d_lambda: f64,
    phi0: f64,
    visibility: &ScalarField2D,
) -> Result<ScalarField2D> {
    check_d_lambda(d_lambda)?;
    thickness.check_same_grid(visibility)?;
    let values = thickness
        .values()
        .iter()
        .zip(visibility.values())
        .map(|(&t, &v)| fringe(phi0, TAU * t / d_lambda, v))
        .collect();
    ScalarField2D::from_values(*thickness.grid(), Unit::IntensityNorm, values)
}

/// Area-weighted average of a field onto the detector pixel grid, centred on the field.
pub fn bin_to_detector(field: &ScalarField2D, det: &DetectorSpec) -> Result<ScalarField2D> {
    det.validate()?;
    let src = *field.grid();
    let dst = det.grid()?;
    let slack = 1e-9;
    if dst.extent_x > src.extent_x * (1.0 + slack) || dst.extent_z > src.extent_z * (1.0 + slack) {
        return Err(SimError::domain(format!(
            "detector {} x {} m exceeds field extent {} x {} m",
            dst.extent_x, dst.extent_z, src.extent_x, src.extent_z
        )));
    }
    if det.pixel_pitch < src.dx() * (1.0 - slack) || det.pixel_pitch < src.dz() * (1.0 - slack) {
        return Err(SimError::domain(format!(
            "detector pitch {} m is finer than the field pixels ({} x {} m)",
            det.pixel_pitch,
            src.dx(),
            src.dz()
        )));
    }
    if dst.nx == src.nx && dst.nz == src.nz {
        return ScalarField2D::from_values(dst, field.unit(), field.values().to_vec());
    }

    let wx = overlaps(src.nx, src.extent_x, dst.nx, dst.extent_x);
    let wz = overlaps(src.nz, src.extent_z, dst.nz, dst.extent_z);
    let clamp = matches!(field.unit(), Unit::IntensityNorm | Unit::Visibility);
    let mut values = Vec::with_capacity(dst.len());
    for row in &wz {
        for col in &wx {
            let mut acc = 0.0;
            let mut wsum = 0.0;
            for &(iz, w_z) in row {
                for &(ix, w_x) in col {
                    let w = w_x * w_z;
                    acc += w * field.get(ix, iz);
                    wsum += w;
                }
            }
            let v = acc / wsum;
            values.push(if clamp { v.clamp(0.0, 1.0) } else { v });
        }
    }
    ScalarField2D::from_values(dst, field.unit(), values)
}

/// For each destination cell, the overlapping source cells and overlap lengths.
fn overlaps(n_src: usize, ext_src: f64, n_dst: usize, ext_dst: f64) -> Vec<Vec<(usize, f64)>> {
    let ds = ext_src / n_src as f64;
    let dd = ext_dst / n_dst as f64;
    let tiny = 1e-12 * ds;
    (0..n_dst)
        .map(|u| {
            let a = -0.5 * ext_dst + u as f64 * dd;
            let b = a + dd;
            let first = (((a + 0.5 * ext_src) / ds).floor().max(0.0)) as usize;
            let mut cells = Vec::new();
            for i in first.min(n_src - 1)..n_src {
                let c = -0.5 * ext_src + i as f64 * ds;
                if c >= b {
                    break;
                }
                let w = b.min(c + ds) - a.max(c);
                if w > tiny {
                    cells.push((i, w));
                }
            }
            cells
        })
        .collect()
}

/// Detector noise. Each pixel draws from its own ChaCha stream keyed by
/// `(seed, pixel index)`, so the result does not depend on evaluation order.
pub fn apply_noise(field: &ScalarField2D, det: &DetectorSpec) -> Result<ScalarField2D> {
    det.validate()?;
    let noisy: Vec<f64> = match det.noise {
        NoiseModel::None => return Ok(field.clone()),
        NoiseModel::Gaussian { sigma_rel } => {
            let normal =
                Normal::new(0.0, sigma_rel).map_err(|e| SimError::domain(e.to_string()))?;
            field
                .values()
                .par_iter()
                .enumerate()
                .map(|(i, &v)| {
                    let mut rng = pixel_rng(det.seed, i);
                    (v + normal.sample(&mut rng)).max(0.0)
                })
                .collect()
        }
        NoiseModel::Poisson { counts_per_pixel } => field
            .values()
            .par_iter()
            .enumerate()
            .map(|(i, &v)| {
                let mean = v * counts_per_pixel;
                if mean <= 0.0 {
                    return 0.0;
                }
                let mut rng = pixel_rng(det.seed, i);
                let poisson = Poisson::new(mean).expect("positive finite mean");
                let k: f64 = poisson.sample(&mut rng);
                k / counts_per_pixel
            })
            .collect(),
    };
    Ok(ScalarField2D::from_values_unchecked(
        *field.grid(),
        field.unit(),
        noisy,
    ))
}

fn pixel_rng(seed: u64, pixel: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pixel as u64);
    rng
}
