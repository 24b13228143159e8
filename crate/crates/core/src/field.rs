//! Sampled real-valued maps over the detector (x, z) plane.
//!
//! A [`Grid`] is centred on the beam axis: pixel `(ix, iz)` has its centre at
//! `x = -extent_x/2 + (ix + 0.5) * dx`, and likewise for `z`. Values are stored
//! row by row with `iz = 0` at the lowest `z`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Physical meaning of the values held by a [`ScalarField2D`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    ThicknessM,
    PhaseRad,
    IntensityNorm,
    Visibility,
    Dimensionless,
}

impl Unit {
    pub fn tag(self) -> &'static str {
        match self {
            Unit::ThicknessM => "thickness_m",
            Unit::PhaseRad => "phase_rad",
            Unit::IntensityNorm => "intensity_norm",
            Unit::Visibility => "visibility",
            Unit::Dimensionless => "dimensionless",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "thickness_m" => Unit::ThicknessM,
            "phase_rad" => Unit::PhaseRad,
            "intensity_norm" => Unit::IntensityNorm,
            "visibility" => Unit::Visibility,
            "dimensionless" => Unit::Dimensionless,
            _ => return None,
        })
    }
}

/// Sample counts and physical extent of a centred rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub nz: usize,
    pub extent_x: f64,
    pub extent_z: f64,
}

impl Grid {
    pub fn new(nx: usize, nz: usize, extent_x: f64, extent_z: f64) -> Result<Self> {
        if nx == 0 || nz == 0 {
            return Err(SimError::domain(format!(
                "grid needs nx, nz >= 1, got {nx}x{nz}"
            )));
        }
        if !(extent_x > 0.0 && extent_z > 0.0) || !extent_x.is_finite() || !extent_z.is_finite() {
            return Err(SimError::domain(format!(
                "grid extent must be positive and finite, got {extent_x} x {extent_z}"
            )));
        }
        Ok(Self {
            nx,
            nz,
            extent_x,
            extent_z,
        })
    }

    /// Square grid of `n x n` pixels spanning `extent` along both axes.
    pub fn square(n: usize, extent: f64) -> Result<Self> {
        Self::new(n, n, extent, extent)
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.extent_x / self.nx as f64
    }

    pub fn dz(&self) -> f64 {
        self.extent_z / self.nz as f64
    }

    pub fn x_center(&self, ix: usize) -> f64 {
        -0.5 * self.extent_x + (ix as f64 + 0.5) * self.dx()
    }

    pub fn z_center(&self, iz: usize) -> f64 {
        -0.5 * self.extent_z + (iz as f64 + 0.5) * self.dz()
    }

    pub fn index(&self, ix: usize, iz: usize) -> usize {
        iz * self.nx + ix
    }

    /// Fractional pixel coordinates of a physical point (pixel centres are integers).
    pub fn to_pixel(&self, x: f64, z: f64) -> (f64, f64) {
        (
            (x + 0.5 * self.extent_x) / self.dx() - 0.5,
            (z + 0.5 * self.extent_z) / self.dz() - 0.5,
        )
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }
}

/// A sampled 2D real-valued map with physical extent and a unit tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    grid: Grid,
    unit: Unit,
    values: Vec<f64>,
}

impl ScalarField2D {
    pub fn from_values(grid: Grid, unit: Unit, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SimError::Shape(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.nz
            )));
        }
        if matches!(unit, Unit::IntensityNorm | Unit::Visibility)
            && values.iter().any(|v| !(0.0..=1.0).contains(v))
        {
            return Err(SimError::domain(format!(
                "{} field has values outside [0, 1]",
                unit.tag()
            )));
        }
        Ok(Self { grid, unit, values })
    }

    /// Build a field by evaluating `f(x, z)` at every pixel centre.
    pub fn from_fn(grid: Grid, unit: Unit, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for iz in 0..grid.nz {
            let z = grid.z_center(iz);
            for ix in 0..grid.nx {
                values.push(f(grid.x_center(ix), z));
            }
        }
        Self::from_values(grid, unit, values)
    }

    pub fn constant(grid: Grid, unit: Unit, value: f64) -> Result<Self> {
        Self::from_values(grid, unit, vec![value; grid.len()])
    }

    /// Field values that skip the unit range check (noisy intensities may exceed 1).
    pub(crate) fn from_values_unchecked(grid: Grid, unit: Unit, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, unit, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn nx(&self) -> usize {
        self.grid.nx
    }

    pub fn nz(&self) -> usize {
        self.grid.nz
    }

    pub fn get(&self, ix: usize, iz: usize) -> f64 {
        self.values[self.grid.index(ix, iz)]
    }

    /// Same grid and values, different unit tag. Range checks apply to the new unit.
    pub fn relabel(self, unit: Unit) -> Result<Self> {
        Self::from_values(self.grid, unit, self.values)
    }

    pub fn map(&self, unit: Unit, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values(self.grid, unit, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_values_unchecked(
            self.grid,
            self.unit,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sum of values times pixel area.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx() * self.grid.dz()
    }

    pub fn max_abs_diff(&self, other: &ScalarField2D) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_grid(&self, other: &ScalarField2D) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(SimError::Shape(format!(
                "grid {:?} does not match {:?}",
                self.grid, other.grid
            )))
        }
    }

    /// Bilinear interpolation at a physical point, clamping to the edge pixels.
    pub fn sample(&self, x: f64, z: f64) -> f64 {
        let (px, pz) = self.grid.to_pixel(x, z);
        let max_x = (self.grid.nx - 1) as f64;
        let max_z = (self.grid.nz - 1) as f64;
        let px = px.clamp(0.0, max_x);
        let pz = pz.clamp(0.0, max_z);
        let ix0 = px.floor() as usize;
        let iz0 = pz.floor() as usize;
        let ix1 = (ix0 + 1).min(self.grid.nx - 1);
        let iz1 = (iz0 + 1).min(self.grid.nz - 1);
        let fx = px - ix0 as f64;
        let fz = pz - iz0 as f64;
        let v00 = self.get(ix0, iz0);
        let v10 = self.get(ix1, iz0);
        let v01 = self.get(ix0, iz1);
        let v11 = self.get(ix1, iz1);
        (v00 * (1.0 - fx) + v10 * fx) * (1.0 - fz) + (v01 * (1.0 - fx) + v11 * fx) * fz
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_degenerate_shapes() {
        assert!(Grid::new(0, 4, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 4, 0.0, 1.0).is_err());
        assert!(Grid::new(4, 4, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn pixel_centres_are_symmetric() {
        let g = Grid::square(4, 2.0).unwrap();
        assert_eq!(g.x_center(0), -0.75);
        assert_eq!(g.x_center(3), 0.75);
        assert_eq!(g.to_pixel(-0.75, 0.75), (0.0, 3.0));
    }

    #[test]
    fn intensity_range_is_enforced() {
        let g = Grid::square(2, 1.0).unwrap();
        assert!(ScalarField2D::constant(g, Unit::IntensityNorm, 1.2).is_err());
        assert!(ScalarField2D::constant(g, Unit::Visibility, -0.1).is_err());
        assert!(ScalarField2D::constant(g, Unit::ThicknessM, -0.1).is_ok());
    }

    #[test]
    fn bilinear_sampling_is_exact_for_affine_maps() {
        let g = Grid::square(16, 1.0).unwrap();
        let f =
            ScalarField2D::from_fn(g, Unit::Dimensionless, |x, z| 2.0 * x - 3.0 * z + 0.5).unwrap();
        let v = f.sample(0.1234, -0.2);
        assert!((v - (2.0 * 0.1234 + 0.6 + 0.5)).abs() < 1e-12);
    }
}
