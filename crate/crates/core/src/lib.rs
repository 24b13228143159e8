//! Simulation of neutron interferograms behind spiral phase plates (SPPs).
//!
//! A plate of step height `h_s` shifts the phase of the neutron wave by
//! `2π T(x, z) / D_λ`, where `T` is the local transmission length and `D_λ`
//! the lambda-thickness of the plate material. The crate covers the whole chain:
//!
//! - material constants and derived scales ([`material`]),
//! - plate geometry and thickness maps, including the sliced Radon path ([`geometry`]),
//! - interferograms, coherence, detector binning and noise ([`interferogram`]),
//! - fringe-dislocation analysis ([`winding`]),
//! - two-beam Laue diffraction and the Borrmann fan ([`dyndiff`]),
//! - the `|+l⟩ + |-l⟩` reference ring ([`oam`]),
//! - configuration, file formats and the experiment driver ([`config`], [`io`], [`run`]).
//!
//! ```
//! use neutron_spp::{lambda_thickness, BeamConfig, Material};
//!
//! let d = lambda_thickness(&Material::aluminum(), &BeamConfig::default()).unwrap();
//! assert!((d - 112e-6).abs() < 2e-6);
//! ```

// `!(x > 0.0)` is used throughout so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dyndiff;
pub mod error;
pub mod field;
pub mod geometry;
pub mod interferogram;
pub mod io;
pub mod material;
pub mod oam;
pub mod run;
pub mod winding;

pub use config::{Experiment, Format, PlateSpec, RunConfig, Step};
pub use dyndiff::{fan_profile, gamma_samples, rocking_curve, LaueCrystal, Profile1D};
pub use error::{Diagnosed, Result, SimError, Violation, Warning};
pub use field::{Grid, ScalarField2D, Unit};
pub use geometry::{
    flag_delta_thickness, spp_height, stack_thickness, thickness_map_direct, thickness_map_radon,
    PhaseFlag, RadonConfig, SpiralPhasePlate,
};
pub use interferogram::{
    apply_noise, bin_to_detector, coherent_interferogram, complementary_interferogram,
    ideal_interferogram, phase_map, visibility_map, CoherenceModel, DetectorSpec, NoiseModel,
};
pub use io::{read_csv, read_pgm, write_csv, write_pgm};
pub use material::{
    disk_averaged_deflection, effective_momentum, fringe_spacing, lambda_thickness,
    prism_deflection, refractive_decrement, BeamConfig, Material,
};
pub use oam::{count_azimuthal_maxima, superposition_intensity, OamSuperposition};
pub use run::{run, RunOutput, RunSummary};
pub use winding::{phase_stepped_frames, winding_around, Winding};
