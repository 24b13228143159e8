//! Run configuration: a versioned JSON document describing one experiment.
//!
//! ```json
//! {
//!   "schema": "neutron-spp/run/v1",
//!   "experiment": "interferogram",
//!   "plates": [{ "diameter": 0.015, "step": { "lambda_units": 1.0 } }],
//!   "detector": { "nu": 100, "nv": 100, "noise": { "kind": "gaussian", "sigma_rel": 0.05 } },
//!   "seed": 0
//! }
//! ```
//!
//! Every other key has a default. Dotted `key value` overrides (as passed on
//! the command line) are applied to the JSON tree before it is decoded.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dyndiff::FanQuadrature;
use crate::error::{Result, SimError, Violation};
use crate::geometry::{SpiralPhasePlate, MIN_SLICES};
use crate::interferogram::{CoherenceModel, DetectorSpec, NoiseModel};
use crate::material::{BeamConfig, Material, DEFAULT_DEFLECTION_CUTOFF};

pub const SCHEMA: &str = "neutron-spp/run/v1";

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SPP_SIM_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SppMap,
    Interferogram,
    Stack,
    FlagSeries,
    Coherence,
    Borrmann,
    OamRing,
    Deflection,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::SppMap,
        Experiment::Interferogram,
        Experiment::Stack,
        Experiment::FlagSeries,
        Experiment::Coherence,
        Experiment::Borrmann,
        Experiment::OamRing,
        Experiment::Deflection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SppMap => "spp-map",
            Experiment::Interferogram => "interferogram",
            Experiment::Stack => "stack",
            Experiment::FlagSeries => "flag-series",
            Experiment::Coherence => "coherence",
            Experiment::Borrmann => "borrmann",
            Experiment::OamRing => "oam-ring",
            Experiment::Deflection => "deflection",
        }
    }

    fn needs_plates(self) -> bool {
        !matches!(self, Experiment::Borrmann | Experiment::OamRing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Pgm,
    Csv,
}

/// Step height either in lambda-thicknesses (the effective L) or in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    LambdaUnits(f64),
    Meters(f64),
}

impl Step {
    pub fn meters(self, d_lambda: f64) -> f64 {
        match self {
            Step::LambdaUnits(l) => l * d_lambda,
            Step::Meters(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateSpec {
    pub diameter: f64,
    pub step: Step,
    #[serde(default)]
    pub base: f64,
    #[serde(default)]
    pub center: [f64; 2],
    #[serde(default = "default_slices")]
    pub n_slices: usize,
}

impl PlateSpec {
    pub fn lambda_units(diameter: f64, l: f64) -> Self {
        Self {
            diameter,
            step: Step::LambdaUnits(l),
            base: 0.0,
            center: [0.0, 0.0],
            n_slices: default_slices(),
        }
    }

    pub fn build(&self, d_lambda: f64) -> SpiralPhasePlate {
        SpiralPhasePlate {
            diameter: self.diameter,
            step_height: self.step.meters(d_lambda),
            base_thickness: self.base,
            n_slices: self.n_slices,
            center_x: self.center[0],
            center_z: self.center[1],
        }
    }
}

fn default_slices() -> usize {
    256
}

/// Square simulation grid: `n x n` pixels over `extent` metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub extent: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: 400,
            extent: 16e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub nu: usize,
    pub nv: usize,
    /// Defaults to tiling the simulation grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pixel_pitch: Option<f64>,
    #[serde(default = "no_noise")]
    pub noise: NoiseModel,
}

fn no_noise() -> NoiseModel {
    NoiseModel::None
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            nu: 100,
            nv: 100,
            pixel_pitch: None,
            noise: NoiseModel::default(),
        }
    }
}

/// Phase flag slab; the rotation comes from `phi0_list`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagConfig {
    pub slab_thickness: f64,
    pub bragg_angle: f64,
}

impl Default for FlagConfig {
    fn default() -> Self {
        Self {
            slab_thickness: 1e-3,
            bragg_angle: si_111_bragg_angle(),
        }
    }
}

/// Bragg angle of Si(111), d = 0.3135 nm, at 0.271 nm.
pub fn si_111_bragg_angle() -> f64 {
    (2.71e-10f64 / (2.0 * 3.135e-10)).asin()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalConfig {
    pub bragg_angle: f64,
    pub reduced_thickness: f64,
    pub gamma_samples: usize,
    /// Rocking curve is sampled on `[-y_range, y_range]`.
    pub y_range: f64,
    pub y_samples: usize,
    #[serde(default)]
    pub quadrature: FanQuadrature,
}

impl Default for CrystalConfig {
    fn default() -> Self {
        Self {
            bragg_angle: si_111_bragg_angle(),
            reduced_thickness: 10.0,
            gamma_samples: 400,
            y_range: 10.0,
            y_samples: 401,
            quadrature: FanQuadrature::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OamConfig {
    pub l: u32,
    pub ring_radius: f64,
    pub ring_width: f64,
    #[serde(default)]
    pub relative_phase: f64,
}

impl Default for OamConfig {
    fn default() -> Self {
        Self {
            l: 3,
            ring_radius: 4e-3,
            ring_width: 1e-3,
            relative_phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub experiment: Experiment,
    #[serde(default = "default_material")]
    pub material: String,
    #[serde(default = "default_wavelength")]
    pub wavelength: f64,
    #[serde(default)]
    pub plates: Vec<PlateSpec>,
    #[serde(default)]
    pub phi0: f64,
    #[serde(default)]
    pub phi0_list: Vec<f64>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub radon_sampling: Option<usize>,
    #[serde(default)]
    pub detector: DetectorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "CoherenceModel::neutron_interferometer")]
    pub coherence: CoherenceModel,
    #[serde(default)]
    pub flag: FlagConfig,
    #[serde(default)]
    pub crystal: CrystalConfig,
    #[serde(default)]
    pub oam: OamConfig,
    #[serde(default = "default_cutoff")]
    pub deflection_cutoff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_material() -> String {
    "aluminum".into()
}

fn default_wavelength() -> f64 {
    BeamConfig::default().wavelength
}

fn default_cutoff() -> f64 {
    DEFAULT_DEFLECTION_CUTOFF
}

fn default_formats() -> Vec<Format> {
    vec![Format::Pgm, Format::Csv]
}

impl RunConfig {
    /// Minimal configuration for an experiment with every other field at its default.
    pub fn new(experiment: Experiment) -> Self {
        Self {
            schema: SCHEMA.into(),
            experiment,
            material: default_material(),
            wavelength: default_wavelength(),
            plates: Vec::new(),
            phi0: 0.0,
            phi0_list: Vec::new(),
            grid: GridSpec::default(),
            radon_sampling: None,
            detector: DetectorConfig::default(),
            seed: None,
            coherence: CoherenceModel::neutron_interferometer(),
            flag: FlagConfig::default(),
            crystal: CrystalConfig::default(),
            oam: OamConfig::default(),
            deflection_cutoff: default_cutoff(),
            output_dir: None,
            formats: default_formats(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(json_violation)?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        serde_json::from_value(value).map_err(json_violation)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serialises")
    }

    pub fn material(&self) -> Option<Material> {
        Material::preset(&self.material)
    }

    pub fn beam(&self) -> Result<BeamConfig> {
        BeamConfig::new(self.wavelength)
    }

    pub fn has_noise(&self) -> bool {
        self.detector.noise != NoiseModel::None
    }

    pub fn detector_spec(&self) -> DetectorSpec {
        DetectorSpec {
            nu: self.detector.nu,
            nv: self.detector.nv,
            pixel_pitch: self
                .detector
                .pixel_pitch
                .unwrap_or(self.grid.extent / self.detector.nu.max(1) as f64),
            noise: self.detector.noise,
            seed: self.seed.unwrap_or(0),
        }
    }

    /// Output directory: the configured one, else `$SPP_SIM_OUT_DIR`, else `./out`.
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Check every field and report all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        let mut bad = |field: &str, msg: String| v.push(Violation::new(field, msg));

        if self.schema != SCHEMA {
            bad(
                "schema",
                format!("expected {SCHEMA:?}, got {:?}", self.schema),
            );
        }
        if self.material().is_none() {
            bad("material", format!("unknown preset {:?}", self.material));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            bad(
                "wavelength",
                format!("must be positive, got {}", self.wavelength),
            );
        }
        if !(self.grid.n >= 1) {
            bad("grid.n", "must be >= 1".into());
        }
        if !(self.grid.extent > 0.0 && self.grid.extent.is_finite()) {
            bad(
                "grid.extent",
                format!("must be positive, got {}", self.grid.extent),
            );
        }
        if let Some(p) = self.radon_sampling {
            if p < self.grid.n {
                bad(
                    "radon_sampling",
                    format!("must be >= grid.n = {}", self.grid.n),
                );
            }
        }
        for (i, p) in self.plates.iter().enumerate() {
            if !(p.diameter > 0.0 && p.diameter.is_finite()) {
                bad(
                    &format!("plates[{i}].diameter"),
                    format!("must be positive, got {}", p.diameter),
                );
            }
            let step = match p.step {
                Step::LambdaUnits(x) | Step::Meters(x) => x,
            };
            if !step.is_finite() {
                bad(&format!("plates[{i}].step"), "must be finite".into());
            }
            if !(p.base >= 0.0) {
                bad(
                    &format!("plates[{i}].base"),
                    format!("must be >= 0, got {}", p.base),
                );
            }
            if p.n_slices < MIN_SLICES {
                bad(
                    &format!("plates[{i}].n_slices"),
                    format!("must be >= {MIN_SLICES}"),
                );
            }
        }
        let d = &self.detector;
        if d.nu == 0 || d.nv == 0 {
            bad("detector", "nu and nv must be >= 1".into());
        } else {
            let det = self.detector_spec();
            if let Err(e) = det.validate() {
                bad("detector", e.to_string());
            }
            if det.nu as f64 * det.pixel_pitch > self.grid.extent * (1.0 + 1e-9) {
                bad(
                    "detector",
                    "detector is larger than the simulation grid".into(),
                );
            }
            if self.grid.n > 0
                && det.pixel_pitch < self.grid.extent / self.grid.n as f64 * (1.0 - 1e-9)
            {
                bad(
                    "detector.pixel_pitch",
                    "detector is finer than the simulation grid".into(),
                );
            }
        }
        if self.has_noise() && self.seed.is_none() {
            bad("seed", "required when detector noise is enabled".into());
        }
        if !(self.coherence.sigma_x > 0.0 && self.coherence.sigma_z > 0.0) {
            bad("coherence", "sigma_x and sigma_z must be positive".into());
        }
        if self.formats.is_empty() {
            bad("formats", "at least one of pgm, csv".into());
        }

        let exp = self.experiment;
        if exp.needs_plates() && self.plates.is_empty() {
            bad("plates", format!("{} needs at least one plate", exp.name()));
        }
        match exp {
            Experiment::Stack if self.plates.len() < 2 => {
                bad("plates", "stack needs at least two plates".into());
            }
            Experiment::FlagSeries => {
                if self.phi0_list.is_empty() {
                    bad(
                        "phi0_list",
                        "flag-series needs at least one rotation".into(),
                    );
                }
                let f = &self.flag;
                if !(f.slab_thickness > 0.0) {
                    bad("flag.slab_thickness", "must be positive".into());
                }
                if !(f.bragg_angle > 0.0 && f.bragg_angle < PI / 2.0) {
                    bad("flag.bragg_angle", "must lie in (0, π/2)".into());
                }
                for (i, r) in self.phi0_list.iter().enumerate() {
                    if !(r.abs() < PI / 2.0 - f.bragg_angle) {
                        bad(
                            &format!("phi0_list[{i}]"),
                            "|rotation| must be < π/2 - bragg_angle".into(),
                        );
                    }
                }
            }
            Experiment::Borrmann => {
                let c = &self.crystal;
                if !(c.bragg_angle > 0.0 && c.bragg_angle < PI / 2.0) {
                    bad("crystal.bragg_angle", "must lie in (0, π/2)".into());
                }
                if !(c.reduced_thickness > 0.0) {
                    bad("crystal.reduced_thickness", "must be positive".into());
                }
                if c.gamma_samples < 2 {
                    bad("crystal.gamma_samples", "must be >= 2".into());
                }
                if c.y_samples < 2 || !(c.y_range > 0.0) {
                    bad(
                        "crystal.y_range",
                        "need y_range > 0 and y_samples >= 2".into(),
                    );
                }
            }
            Experiment::OamRing => {
                let o = &self.oam;
                if o.l < 1 {
                    bad("oam.l", "must be >= 1".into());
                }
                if !(o.ring_radius > 0.0 && o.ring_width > 0.0) {
                    bad("oam", "ring_radius and ring_width must be positive".into());
                }
            }
            Experiment::Deflection => {
                if let Some(p) = self.plates.first() {
                    if !(self.deflection_cutoff > 0.0 && self.deflection_cutoff < 0.5 * p.diameter)
                    {
                        bad(
                            "deflection_cutoff",
                            "must lie inside the first plate".into(),
                        );
                    }
                }
            }
            _ => {}
        }

        if v.is_empty() {
            Ok(())
        } else {
            Err(SimError::Validation(v))
        }
    }

    /// Named configurations reproducing the figure suite.
    pub fn preset(name: &str) -> Option<Self> {
        let fig5 = |l: f64| {
            let mut c = RunConfig::new(Experiment::Interferogram);
            c.plates = vec![PlateSpec::lambda_units(15e-3, l)];
            c.seed = Some(0);
            c
        };
        Some(match name {
            "fig5-l1" => fig5(1.0),
            "fig5-l2" => fig5(2.0),
            "fig5-l3" => fig5(3.0),
            "fig5-l4" => fig5(4.0),
            "fig5-l7.5" => fig5(7.5),
            "fig6-stack" => {
                let mut c = RunConfig::new(Experiment::Stack);
                c.plates = vec![
                    PlateSpec::lambda_units(15e-3, 1.0),
                    PlateSpec::lambda_units(15e-3, 2.0),
                ];
                c.seed = Some(0);
                c
            }
            "fig7-flag" => {
                let mut c = RunConfig::new(Experiment::FlagSeries);
                c.plates = vec![PlateSpec::lambda_units(15e-3, 3.0)];
                c.phi0_list = [-1.0f64, -0.5, 0.0, 0.5, 1.0]
                    .iter()
                    .map(|d| d.to_radians())
                    .collect();
                c.seed = Some(0);
                c
            }
            "spp-map" => {
                let mut c = RunConfig::new(Experiment::SppMap);
                c.plates = vec![PlateSpec::lambda_units(15e-3, 1.0)];
                c.grid = GridSpec {
                    n: 256,
                    extent: 16e-3,
                };
                c
            }
            "coherence" => {
                let mut c = RunConfig::new(Experiment::Coherence);
                c.plates = vec![PlateSpec::lambda_units(15e-3, 1.0)];
                c.grid = GridSpec {
                    n: 100,
                    extent: 15e-3,
                };
                c.detector.noise = NoiseModel::None;
                c
            }
            "borrmann" => RunConfig::new(Experiment::Borrmann),
            "oam-ring" => {
                let mut c = RunConfig::new(Experiment::OamRing);
                c.grid = GridSpec {
                    n: 256,
                    extent: 16e-3,
                };
                c.formats = vec![Format::Pgm, Format::Csv];
                c
            }
            "deflection" => {
                let mut c = RunConfig::new(Experiment::Deflection);
                c.plates = vec![PlateSpec::lambda_units(15e-3, 1.0)];
                c
            }
            _ => return None,
        })
        .map(|mut c: RunConfig| {
            // every preset is reproducible as shipped
            c.seed.get_or_insert(0);
            c
        })
    }

    pub const PRESETS: [&'static str; 12] = [
        "fig5-l1",
        "fig5-l2",
        "fig5-l3",
        "fig5-l4",
        "fig5-l7.5",
        "fig6-stack",
        "fig7-flag",
        "spp-map",
        "coherence",
        "borrmann",
        "oam-ring",
        "deflection",
    ];
}

fn json_violation(e: serde_json::Error) -> SimError {
    SimError::Validation(vec![Violation::new("config", e.to_string())])
}

/// Set a dotted key (`detector.noise.sigma_rel`) in a JSON tree. The raw value is
/// parsed as JSON when possible and kept as a string otherwise.
pub fn apply_override(root: &mut Value, key: &str, raw: &str) -> Result<()> {
    let parsed =
        serde_json::from_str::<Value>(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), parsed);
                    return Ok(());
                }
                map.entry(part.to_string())
                    .or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = part.parse().map_err(|_| {
                    SimError::Validation(vec![Violation::new(key, "expected an array index")])
                })?;
                let slot = items.get_mut(idx).ok_or_else(|| {
                    SimError::Validation(vec![Violation::new(key, "array index out of range")])
                })?;
                if last {
                    *slot = parsed;
                    return Ok(());
                }
                slot
            }
            _ => {
                return Err(SimError::Validation(vec![Violation::new(
                    key,
                    "cannot descend into a scalar",
                )]))
            }
        };
    }
    Ok(())
}
