//! Phase-shifting solids and their beam-path thickness maps.
//!
//! The beam travels along `y`, the plate axis. A spiral phase plate (SPP) is a
//! disk in the `(x, z)` plane whose height grows linearly with the azimuth
//! `θ = atan2(z - z_c, x - x_c)`. Its thickness map is computed two ways:
//! point evaluation of the height function ([`thickness_map_direct`]) and a
//! slice-by-slice single-angle Radon projection of the rasterised solid
//! ([`thickness_map_radon`]).

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Diagnosed, Result, SimError, Warning};
use crate::field::{Grid, ScalarField2D, Unit};

/// Minimum number of z-slices for the Radon path.
pub const MIN_SLICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiralPhasePlate {
    pub diameter: f64,
    /// Height gained over one full turn. Negative values give the mirrored
    /// plate, whose height falls from `base + |h_s|` to `base` as θ grows.
    pub step_height: f64,
    pub base_thickness: f64,
    /// Number of z-slices used by the Radon projection.
    pub n_slices: usize,
    pub center_x: f64,
    pub center_z: f64,
}

impl SpiralPhasePlate {
    /// Centred plate with zero base thickness and 256 slices.
    pub fn new(diameter: f64, step_height: f64) -> Self {
        Self {
            diameter,
            step_height,
            base_thickness: 0.0,
            n_slices: 256,
            center_x: 0.0,
            center_z: 0.0,
        }
    }

    /// Plate whose step is `l` lambda-thicknesses.
    pub fn with_effective_momentum(diameter: f64, l: f64, d_lambda: f64) -> Self {
        Self::new(diameter, l * d_lambda)
    }

    pub fn base(mut self, base_thickness: f64) -> Self {
        self.base_thickness = base_thickness;
        self
    }

    pub fn centered_at(mut self, x: f64, z: f64) -> Self {
        self.center_x = x;
        self.center_z = z;
        self
    }

    pub fn slices(mut self, n_slices: usize) -> Self {
        self.n_slices = n_slices;
        self
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.diameter
    }

    pub fn max_height(&self) -> f64 {
        self.base_thickness + self.step_height.abs()
    }

    /// Analytic solid volume `π R² (base + |h_s|/2)`.
    pub fn volume(&self) -> f64 {
        std::f64::consts::PI
            * self.radius().powi(2)
            * (self.base_thickness + 0.5 * self.step_height.abs())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diameter > 0.0 && self.diameter.is_finite()) {
            return Err(SimError::domain(format!(
                "SPP diameter must be positive, got {}",
                self.diameter
            )));
        }
        if !(self.base_thickness >= 0.0 && self.base_thickness.is_finite()) {
            return Err(SimError::domain(format!(
                "SPP base thickness must be >= 0, got {}",
                self.base_thickness
            )));
        }
        if !self.step_height.is_finite() {
            return Err(SimError::domain("SPP step height must be finite"));
        }
        if self.n_slices < MIN_SLICES {
            return Err(SimError::domain(format!(
                "SPP needs at least {MIN_SLICES} slices, got {}",
                self.n_slices
            )));
        }
        Ok(())
    }

    /// Height at polar coordinates about the plate centre. `theta` is wrapped into `[0, 2π)`.
    pub fn height(&self, r: f64, theta: f64) -> f64 {
        if r > self.radius() {
            return 0.0;
        }
        let theta = wrap_angle(theta);
        // seam convention: θ = 0 takes the low side
        if theta == 0.0 {
            return self.base_thickness;
        }
        let frac = theta / TAU;
        if self.step_height >= 0.0 {
            self.base_thickness + self.step_height * frac
        } else {
            self.base_thickness - self.step_height * (1.0 - frac)
        }
    }

    /// Height at a point of the `(x, z)` plane.
    pub fn height_at(&self, x: f64, z: f64) -> f64 {
        let dx = x - self.center_x;
        let dz = z - self.center_z;
        self.height(dx.hypot(dz), dz.atan2(dx))
    }

    /// Distance from `(x, z)` to the seam segment running from the centre to the rim along +x.
    pub fn distance_to_seam(&self, x: f64, z: f64) -> f64 {
        let dx = x - self.center_x;
        let dz = z - self.center_z;
        if dx < 0.0 {
            dx.hypot(dz)
        } else if dx > self.radius() {
            (dx - self.radius()).hypot(dz)
        } else {
            dz.abs()
        }
    }
}

/// Height of a spiral phase plate, as a free function over polar coordinates.
pub fn spp_height(spp: &SpiralPhasePlate, r: f64, theta: f64) -> f64 {
    spp.height(r, theta)
}

fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Thickness map by point-sampling the plate height at pixel centres.
pub fn thickness_map_direct(spp: &SpiralPhasePlate, grid: &Grid) -> Result<ScalarField2D> {
    thickness_map_direct_supersampled(spp, grid, 1)
}

/// Like [`thickness_map_direct`], averaging `s x s` sub-samples per pixel to anti-alias the seam and rim.
pub fn thickness_map_direct_supersampled(
    spp: &SpiralPhasePlate,
    grid: &Grid,
    supersample: usize,
) -> Result<ScalarField2D> {
    spp.validate()?;
    if supersample == 0 {
        return Err(SimError::domain("supersampling factor must be >= 1"));
    }
    if supersample == 1 {
        return ScalarField2D::from_fn(*grid, Unit::ThicknessM, |x, z| spp.height_at(x, z));
    }
    let s = supersample as f64;
    let (dx, dz) = (grid.dx(), grid.dz());
    ScalarField2D::from_fn(*grid, Unit::ThicknessM, |x, z| {
        let mut acc = 0.0;
        for j in 0..supersample {
            let sz = z - 0.5 * dz + (j as f64 + 0.5) * dz / s;
            for i in 0..supersample {
                let sx = x - 0.5 * dx + (i as f64 + 0.5) * dx / s;
                acc += spp.height_at(sx, sz);
            }
        }
        acc / (s * s)
    })
}

/// Single-angle Radon projection parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadonConfig {
    /// Projection angle in the slice plane. Only `0` (rays along the beam) is supported.
    pub scan_angle: f64,
    /// Rays per slice; also the number of depth cells of the slice raster.
    pub sampling_p: usize,
}

impl RadonConfig {
    pub fn new(sampling_p: usize) -> Self {
        Self {
            scan_angle: 0.0,
            sampling_p,
        }
    }
}

/// Thickness map from the single-projection Radon transform of the sliced solid.
///
/// For each of `spp.n_slices` horizontal slices the slice indicator
/// `SPP_z(x, y)` is rasterised on a `p x p` grid (x across the grid extent, y
/// across the plate depth) and integrated along the rays `p = x cos α + y sin α`
/// with `α = 0`, i.e. along `y`, by the midpoint rule. Ray integrals are then
/// binned onto the target grid columns and slices onto its rows.
pub fn thickness_map_radon(
    spp: &SpiralPhasePlate,
    cfg: &RadonConfig,
    grid: &Grid,
) -> Result<Diagnosed<ScalarField2D>> {
    spp.validate()?;
    if cfg.scan_angle != 0.0 {
        return Err(SimError::domain(format!(
            "only the single projection at α = 0 is supported, got α = {}",
            cfg.scan_angle
        )));
    }
    let p = cfg.sampling_p;
    if p < grid.nx {
        return Err(SimError::domain(format!(
            "sampling_p = {p} must be >= grid nx = {}",
            grid.nx
        )));
    }

    let depth = spp.max_height();
    if depth == 0.0 {
        return Ok(Diagnosed::clean(ScalarField2D::constant(
            *grid,
            Unit::ThicknessM,
            0.0,
        )?));
    }
    let dy = depth / p as f64;
    let mut warnings = Vec::new();
    if spp.step_height != 0.0 && spp.step_height.abs() < 2.0 * dy {
        warnings.push(Warning::StepUnresolved {
            step_m: spp.step_height.abs(),
            sample_m: dy,
        });
    }

    let ray_x: Vec<f64> = centers(p, grid.extent_x);
    let slice_z: Vec<f64> = centers(spp.n_slices, grid.extent_z);

    // one row of ray integrals per slice
    let projections: Vec<Vec<f64>> = slice_z
        .par_iter()
        .map(|&z| {
            let raster = rasterize_slice(spp, z, &ray_x, p, dy);
            project_along_y(&raster, p, dy)
        })
        .collect();

    let cols = bin_sources(p, grid.nx);
    let rows = bin_sources(spp.n_slices, grid.nz);
    let mut values = Vec::with_capacity(grid.len());
    for row in &rows {
        for col in &cols {
            let mut acc = 0.0;
            for &k in row {
                for &j in col {
                    acc += projections[k][j];
                }
            }
            values.push(acc / (row.len() * col.len()) as f64);
        }
    }
    Ok(Diagnosed {
        value: ScalarField2D::from_values(*grid, Unit::ThicknessM, values)?,
        warnings,
    })
}

/// Occupancy raster of one z-slice, indexed `[iy * p + ix]`.
fn rasterize_slice(spp: &SpiralPhasePlate, z: f64, ray_x: &[f64], p: usize, dy: f64) -> Vec<bool> {
    let mut cells = vec![false; p * p];
    for (ix, &x) in ray_x.iter().enumerate() {
        let h = spp.height_at(x, z);
        for iy in 0..p {
            let y = (iy as f64 + 0.5) * dy;
            cells[iy * p + ix] = y < h;
        }
    }
    cells
}

fn project_along_y(raster: &[bool], p: usize, dy: f64) -> Vec<f64> {
    (0..p)
        .map(|ix| (0..p).filter(|&iy| raster[iy * p + ix]).count() as f64 * dy)
        .collect()
}

fn centers(n: usize, extent: f64) -> Vec<f64> {
    let step = extent / n as f64;
    (0..n)
        .map(|i| -0.5 * extent + (i as f64 + 0.5) * step)
        .collect()
}

/// For each of `n_dst` equal cells, the indices of the `n_src` sample centres inside it
/// (nearest sample if none falls inside).
fn bin_sources(n_src: usize, n_dst: usize) -> Vec<Vec<usize>> {
    let mut bins = vec![Vec::new(); n_dst];
    for j in 0..n_src {
        // centre (j + 0.5) / n_src in units of the extent
        let k = ((2 * j + 1) * n_dst) / (2 * n_src);
        bins[k.min(n_dst - 1)].push(j);
    }
    for (k, bin) in bins.iter_mut().enumerate() {
        if bin.is_empty() {
            let j = ((2 * k + 1) * n_src) / (2 * n_dst);
            bin.push(j.min(n_src - 1));
        }
    }
    bins
}

/// Pixelwise sum of thickness maps for plates placed in series in one beam path.
pub fn stack_thickness(maps: &[ScalarField2D]) -> Result<ScalarField2D> {
    let first = maps
        .first()
        .ok_or_else(|| SimError::Shape("cannot stack an empty list of maps".into()))?;
    let mut acc = vec![0.0; first.grid().len()];
    for m in maps {
        m.check_same_grid(first)?;
        if m.unit() != Unit::ThicknessM {
            return Err(SimError::Shape(format!(
                "cannot stack a {} map",
                m.unit().tag()
            )));
        }
        for (a, v) in acc.iter_mut().zip(m.values()) {
            *a += v;
        }
    }
    ScalarField2D::from_values(*first.grid(), Unit::ThicknessM, acc)
}

/// Boolean mask of pixels within `band_px` pixels of the plate seam.
pub fn seam_band(spp: &SpiralPhasePlate, grid: &Grid, band_px: f64) -> Vec<bool> {
    let width = band_px * grid.dx().max(grid.dz());
    let mut mask = Vec::with_capacity(grid.len());
    for iz in 0..grid.nz {
        for ix in 0..grid.nx {
            mask.push(spp.distance_to_seam(grid.x_center(ix), grid.z_center(iz)) <= width);
        }
    }
    mask
}

/// Rotatable slab in one interferometer arm, used to tune the global phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFlag {
    pub slab_thickness: f64,
    /// Rotation away from the symmetric position, radians.
    pub rotation: f64,
    pub bragg_angle: f64,
}

impl PhaseFlag {
    pub fn validate(&self) -> Result<()> {
        if !(self.slab_thickness > 0.0) {
            return Err(SimError::domain(format!(
                "flag thickness must be positive, got {}",
                self.slab_thickness
            )));
        }
        if !(self.bragg_angle > 0.0 && self.bragg_angle < FRAC_PI_2) {
            return Err(SimError::domain(format!(
                "Bragg angle must lie in (0, π/2), got {}",
                self.bragg_angle
            )));
        }
        if !(self.rotation.abs() < FRAC_PI_2 - self.bragg_angle) {
            return Err(SimError::domain(format!(
                "|rotation| = {} must be < π/2 - Θ_B = {}",
                self.rotation.abs(),
                FRAC_PI_2 - self.bragg_angle
            )));
        }
        Ok(())
    }

    /// Path-length difference between the two arms through the rotated slab:
    /// `ΔD = D₀ [1/cos(Θ_B - φ₀) - 1/cos(Θ_B + φ₀)]`.
    pub fn delta_thickness(&self) -> Result<f64> {
        self.validate()?;
        let d0 = self.slab_thickness;
        Ok(d0
            * ((self.bragg_angle - self.rotation).cos().recip()
                - (self.bragg_angle + self.rotation).cos().recip()))
    }
}

pub fn flag_delta_thickness(flag: &PhaseFlag) -> Result<f64> {
    flag.delta_thickness()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const HS: f64 = 112e-6;

    #[test]
    fn height_examples() {
        let spp = SpiralPhasePlate::new(15e-3, HS);
        assert!((spp.height(1e-3, PI) - 56e-6).abs() < 1e-18);
        let near_full = spp.height(1e-3, TAU - 1e-9);
        assert!((near_full - HS * (1.0 - 1e-9 / TAU)).abs() < 1e-18);
        assert_eq!(spp.height(8e-3, 1.0), 0.0);
        assert_eq!(spp.height(1e-3, 0.0), 0.0);
        assert_eq!(spp.height(1e-3, TAU), 0.0);
        assert!((spp.height(1e-3, -PI / 2.0) - 0.75 * HS).abs() < 1e-18);
    }

    #[test]
    fn mirrored_plate_descends() {
        let spp = SpiralPhasePlate::new(15e-3, -HS).base(10e-6);
        assert!((spp.height(1e-3, 1e-9) - (10e-6 + HS)).abs() < 1e-12);
        assert!((spp.height(1e-3, PI) - (10e-6 + 0.5 * HS)).abs() < 1e-18);
        assert_eq!(spp.height(1e-3, 0.0), 10e-6);
    }

    #[test]
    fn uniform_disk_direct_map() {
        let spp = SpiralPhasePlate::new(10e-3, 0.0).base(50e-6);
        let grid = Grid::square(64, 16e-3).unwrap();
        let map = thickness_map_direct(&spp, &grid).unwrap();
        for iz in 0..64 {
            for ix in 0..64 {
                let r = grid.x_center(ix).hypot(grid.z_center(iz));
                let want = if r <= 5e-3 { 50e-6 } else { 0.0 };
                assert_eq!(map.get(ix, iz), want);
            }
        }
    }

    #[test]
    fn quarter_turn_pixel() {
        let spp = SpiralPhasePlate::new(15e-3, HS).base(5e-6);
        // a grid with a pixel centre on the +z axis
        let grid = Grid::new(5, 5, 10e-3, 10e-3).unwrap();
        let map = thickness_map_direct(&spp, &grid).unwrap();
        assert_eq!(grid.x_center(2), 0.0);
        assert!((map.get(2, 3) - (5e-6 + 28e-6)).abs() < 1e-18);
    }

    #[test]
    fn opposite_chirality_plates_sum_to_constant() {
        let grid = Grid::square(96, 16e-3).unwrap();
        let a = SpiralPhasePlate::new(15e-3, HS).base(3e-6);
        let b = SpiralPhasePlate::new(15e-3, -HS).base(7e-6);
        let ma = thickness_map_direct(&a, &grid).unwrap();
        let mb = thickness_map_direct(&b, &grid).unwrap();
        let sum = stack_thickness(&[ma.clone(), mb.clone()]).unwrap();
        let seam = seam_band(&a, &grid, 1.0);
        for (i, &v) in sum.values().iter().enumerate() {
            let (ix, iz) = (i % grid.nx, i / grid.nx);
            let r = grid.x_center(ix).hypot(grid.z_center(iz));
            if r > 7.5e-3 || seam[i] {
                continue;
            }
            // pixelwise oracle from the two individual samples
            assert_eq!(v, ma.values()[i] + mb.values()[i]);
            assert!((v - (10e-6 + HS)).abs() < 1e-15, "pixel {i}: {v}");
        }
    }

    #[test]
    fn radon_empty_solid_is_zero() {
        let spp = SpiralPhasePlate::new(10e-3, 0.0).slices(32);
        let grid = Grid::square(32, 16e-3).unwrap();
        let out = thickness_map_radon(&spp, &RadonConfig::new(32), &grid).unwrap();
        assert!(out.value.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn radon_rejects_other_angles_and_coarse_sampling() {
        let spp = SpiralPhasePlate::new(10e-3, HS).slices(32);
        let grid = Grid::square(32, 16e-3).unwrap();
        let tilted = RadonConfig {
            scan_angle: 0.1,
            sampling_p: 32,
        };
        assert!(thickness_map_radon(&spp, &tilted, &grid).is_err());
        assert!(thickness_map_radon(&spp, &RadonConfig::new(16), &grid).is_err());
        assert!(thickness_map_radon(&spp.clone().slices(8), &RadonConfig::new(32), &grid).is_err());
    }

    #[test]
    fn radon_warns_on_unresolved_step() {
        let spp = SpiralPhasePlate::new(10e-3, 1e-6).base(100e-6).slices(32);
        let grid = Grid::square(32, 16e-3).unwrap();
        let out = thickness_map_radon(&spp, &RadonConfig::new(32), &grid).unwrap();
        assert!(matches!(out.warnings[..], [Warning::StepUnresolved { .. }]));
    }

    #[test]
    fn radon_uniform_disk_matches_direct() {
        let spp = SpiralPhasePlate::new(12e-3, 0.0).base(40e-6);
        let grid = Grid::square(256, 16e-3).unwrap();
        let direct = thickness_map_direct(&spp, &grid).unwrap();
        let radon = thickness_map_radon(&spp, &RadonConfig::new(256), &grid)
            .unwrap()
            .value;
        let rms = rms_diff(direct.values(), radon.values(), None);
        assert!(rms < 0.01 * 40e-6, "rms = {rms}");
    }

    #[test]
    fn radon_with_oversampled_rays_and_sparse_slices() {
        let spp = SpiralPhasePlate::new(12e-3, HS).slices(64);
        let grid = Grid::square(128, 16e-3).unwrap();
        let direct = thickness_map_direct_supersampled(&spp, &grid, 4).unwrap();
        let radon = thickness_map_radon(&spp, &RadonConfig::new(256), &grid)
            .unwrap()
            .value;
        let mask = seam_band(&spp, &grid, 2.0);
        let rms = rms_diff(direct.values(), radon.values(), Some(&mask));
        // coarse slices and the anti-aliased rim keep this loose
        assert!(rms < 0.1 * HS, "rms = {rms}");
    }

    #[test]
    fn stack_identity_commutativity_and_errors() {
        let grid = Grid::square(48, 16e-3).unwrap();
        let a = thickness_map_direct(&SpiralPhasePlate::new(15e-3, HS), &grid).unwrap();
        let b = thickness_map_direct(
            &SpiralPhasePlate::new(10e-3, 2.0 * HS).centered_at(1e-3, 0.0),
            &grid,
        )
        .unwrap();
        let zero = ScalarField2D::constant(grid, Unit::ThicknessM, 0.0).unwrap();
        assert_eq!(stack_thickness(&[a.clone(), zero]).unwrap(), a);
        assert_eq!(
            stack_thickness(&[a.clone(), b.clone()]).unwrap(),
            stack_thickness(&[b, a.clone()]).unwrap()
        );
        let other =
            ScalarField2D::constant(Grid::square(47, 16e-3).unwrap(), Unit::ThicknessM, 0.0)
                .unwrap();
        assert!(matches!(
            stack_thickness(&[a.clone(), other]),
            Err(SimError::Shape(_))
        ));
        assert!(stack_thickness(&[]).is_err());
    }

    #[test]
    fn map_volume_matches_solid_volume() {
        let spp = SpiralPhasePlate::new(15e-3, HS).base(20e-6);
        let grid = Grid::square(400, 16e-3).unwrap();
        let map = thickness_map_direct(&spp, &grid).unwrap();
        let rel = (map.integral() - spp.volume()).abs() / spp.volume();
        assert!(rel < 0.01, "relative volume error {rel}");
    }

    #[test]
    fn azimuthal_profile_is_affine() {
        let spp = SpiralPhasePlate::new(15e-3, 3.0 * HS).base(2e-6);
        let r = 4e-3;
        let n = 360;
        // least-squares line through h(θ) on (0, 2π)
        let pts: Vec<(f64, f64)> = (1..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                (t, spp.height_at(r * t.cos(), r * t.sin()))
            })
            .collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let (mx, my) = (sx / m, sy / m);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!((slope - 3.0 * HS / TAU).abs() / (3.0 * HS / TAU) < 1e-9);
    }

    #[test]
    fn flag_examples() {
        let theta_b = 0.4466;
        let flag = |rot| PhaseFlag {
            slab_thickness: 1e-3,
            rotation: rot,
            bragg_angle: theta_b,
        };
        assert_eq!(flag(0.0).delta_thickness().unwrap(), 0.0);
        let small = flag(0.5f64.to_radians()).delta_thickness().unwrap();
        assert!(small.abs() < 0.2 * HS, "ΔD = {small}");
        assert!(small != 0.0);
        assert!(flag(1.2).delta_thickness().is_err());
        let bad = PhaseFlag {
            slab_thickness: 0.0,
            ..flag(0.0)
        };
        assert!(bad.delta_thickness().is_err());
    }

    pub(crate) fn rms_diff(a: &[f64], b: &[f64], exclude: Option<&[bool]>) -> f64 {
        let mut acc = 0.0;
        let mut n = 0usize;
        for i in 0..a.len() {
            if exclude.is_some_and(|m| m[i]) {
                continue;
            }
            acc += (a[i] - b[i]).powi(2);
            n += 1;
        }
        (acc / n as f64).sqrt()
    }

    proptest! {
        #[test]
        fn flag_is_antisymmetric(rot in -0.8f64..0.8, d0 in 1e-5f64..1e-2) {
            let f = PhaseFlag { slab_thickness: d0, rotation: rot, bragg_angle: 0.4466 };
            let g = PhaseFlag { rotation: -rot, ..f };
            prop_assert_eq!(f.delta_thickness().unwrap(), -g.delta_thickness().unwrap());
        }

        #[test]
        fn stacking_is_linear_in_plate_scale(c in 0.0f64..4.0) {
            let grid = Grid::square(24, 16e-3).unwrap();
            let a = thickness_map_direct(&SpiralPhasePlate::new(15e-3, HS).base(1e-6), &grid).unwrap();
            let b = thickness_map_direct(&SpiralPhasePlate::new(9e-3, -HS).centered_at(2e-3, -1e-3), &grid).unwrap();
            let lhs = stack_thickness(&[a.scaled(c), b.scaled(c)]).unwrap();
            let rhs = stack_thickness(&[a, b]).unwrap().scaled(c);
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-18);
        }
    }
}
