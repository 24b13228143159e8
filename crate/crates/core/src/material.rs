//! Neutron-optical material constants and the scalar phase formulas built on them.
//!
//! All lengths are SI metres.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::geometry::SpiralPhasePlate;

/// Number density and coherent scattering length of a phase-shifting material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Atoms per m³.
    pub number_density: f64,
    /// Bound coherent scattering length in metres. May be negative.
    pub coherent_length: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, number_density: f64, coherent_length: f64) -> Result<Self> {
        if !(number_density > 0.0 && number_density.is_finite()) {
            return Err(SimError::domain(format!(
                "number density must be positive, got {number_density}"
            )));
        }
        if !coherent_length.is_finite() {
            return Err(SimError::domain(
                "coherent scattering length must be finite",
            ));
        }
        Ok(Self {
            name: name.into(),
            number_density,
            coherent_length,
        })
    }

    /// Aluminium at room temperature: rho = 2.699 g/cm³, M = 26.98 g/mol, b_c = 3.449 fm.
    pub fn aluminum() -> Self {
        Self {
            name: "aluminum".to_string(),
            number_density: 6.024e28,
            coherent_length: 3.449e-15,
        }
    }

    /// Natural silicon, rho = 2.329 g/cm³, b_c = 4.1491 fm.
    pub fn silicon() -> Self {
        Self {
            name: "silicon".to_string(),
            number_density: 4.994e28,
            coherent_length: 4.1491e-15,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "aluminum" | "aluminium" | "al" => Some(Self::aluminum()),
            "silicon" | "si" => Some(Self::silicon()),
            _ => None,
        }
    }

    /// N * b_c * lambda, the phase accumulated per metre of material.
    fn phase_per_metre(&self, beam: &BeamConfig) -> f64 {
        self.number_density * self.coherent_length * beam.wavelength
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    /// Neutron wavelength in metres.
    pub wavelength: f64,
}

impl BeamConfig {
    pub fn new(wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(SimError::domain(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        Ok(Self { wavelength })
    }
}

impl Default for BeamConfig {
    /// 0.271 nm thermal neutrons.
    fn default() -> Self {
        Self {
            wavelength: 2.71e-10,
        }
    }
}

/// Thickness of material that shifts the neutron phase by 2π: `2π / (N b_c λ)`.
pub fn lambda_thickness(material: &Material, beam: &BeamConfig) -> Result<f64> {
    let d = TAU / material.phase_per_metre(beam);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(SimError::domain(format!(
            "lambda-thickness is not finite for {} (b_c = {})",
            material.name, material.coherent_length
        )))
    }
}

/// Step height in units of the lambda-thickness, `h_s / D_λ`. Any real value.
pub fn effective_momentum(step_height: f64, d_lambda: f64) -> Result<f64> {
    if !(d_lambda > 0.0) {
        return Err(SimError::domain(format!(
            "lambda-thickness must be positive, got {d_lambda}"
        )));
    }
    Ok(step_height / d_lambda)
}

/// `1 - n = λ² N b_c / 2π`, which equals `λ / D_λ`.
pub fn refractive_decrement(material: &Material, beam: &BeamConfig) -> Result<f64> {
    let delta = beam.wavelength * material.phase_per_metre(beam) / TAU;
    if delta.is_finite() {
        Ok(delta)
    } else {
        Err(SimError::domain("refractive decrement is not finite"))
    }
}

/// First-order Bragg spacing `λ / (2 sin Θ_B)`, the crystal-scale fringe period.
pub fn fringe_spacing(beam: &BeamConfig, bragg_angle: f64) -> Result<f64> {
    if !(bragg_angle > 0.0 && bragg_angle <= PI / 2.0) {
        return Err(SimError::domain(format!(
            "Bragg angle must lie in (0, π/2], got {bragg_angle}"
        )));
    }
    Ok(beam.wavelength / (2.0 * bragg_angle.sin()))
}

/// Refraction angle of a neutron crossing the plate at `radius`.
///
/// The plate acts locally as a prism whose thickness gradient along the
/// azimuth is `h_s / (2π r)`, giving a deflection `(1 - n) h_s / (2π r)`.
pub fn prism_deflection(
    spp: &SpiralPhasePlate,
    material: &Material,
    beam: &BeamConfig,
    radius: f64,
) -> Result<f64> {
    if radius == 0.0 {
        return Err(SimError::Singularity { radius });
    }
    if !(radius > 0.0 && radius <= spp.radius()) {
        return Err(SimError::domain(format!(
            "radius {radius} outside (0, {}]",
            spp.radius()
        )));
    }
    let delta = refractive_decrement(material, beam)?;
    Ok(delta * spp.step_height.abs() / (TAU * radius))
}

/// Area-weighted mean of [`prism_deflection`] over the annulus `inner_cutoff <= r <= R`.
///
/// The mean of `1/r` over that annulus is `2 / (R + r_in)`.
pub fn disk_averaged_deflection(
    spp: &SpiralPhasePlate,
    material: &Material,
    beam: &BeamConfig,
    inner_cutoff: f64,
) -> Result<f64> {
    let outer = spp.radius();
    if !(inner_cutoff > 0.0 && inner_cutoff < outer) {
        return Err(SimError::domain(format!(
            "inner cutoff must lie in (0, {outer}), got {inner_cutoff}"
        )));
    }
    let delta = refractive_decrement(material, beam)?;
    Ok(delta * spp.step_height.abs() / TAU * 2.0 / (outer + inner_cutoff))
}

/// Default inner cutoff for [`disk_averaged_deflection`].
pub const DEFAULT_DEFLECTION_CUTOFF: f64 = 0.5e-3;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn beam() -> BeamConfig {
        BeamConfig::default()
    }

    #[test]
    fn aluminum_lambda_thickness_is_112_um() {
        let d = lambda_thickness(&Material::aluminum(), &beam()).unwrap();
        assert!((d - 112e-6).abs() / 112e-6 < 0.02, "D_λ = {d}");
    }

    #[test]
    fn lambda_thickness_unit_normalisation() {
        let m = Material::new("unit", 1.0, 1.0).unwrap();
        let b = BeamConfig::new(TAU).unwrap();
        assert_eq!(lambda_thickness(&m, &b).unwrap(), 1.0);
    }

    #[test]
    fn doubling_density_halves_lambda_thickness() {
        let al = Material::aluminum();
        let dense = Material::new("al2", 2.0 * al.number_density, al.coherent_length).unwrap();
        let d1 = lambda_thickness(&al, &beam()).unwrap();
        let d2 = lambda_thickness(&dense, &beam()).unwrap();
        assert_eq!(d1, 2.0 * d2);
    }

    #[test]
    fn zero_scattering_length_is_a_domain_error() {
        let m = Material::new("null", 1e28, 0.0).unwrap();
        assert!(matches!(
            lambda_thickness(&m, &beam()),
            Err(SimError::Domain(_))
        ));
    }

    #[test]
    fn effective_momentum_examples() {
        assert_eq!(effective_momentum(112e-6, 112e-6).unwrap(), 1.0);
        assert_eq!(effective_momentum(0.0, 112e-6).unwrap(), 0.0);
        assert_eq!(effective_momentum(840e-6, 112e-6).unwrap(), 7.5);
        assert!(effective_momentum(1.0, 0.0).is_err());
        assert!(effective_momentum(1.0, -1.0).is_err());
    }

    #[test]
    fn refractive_decrement_matches_lambda_over_d() {
        // independent route: λ / 112 µm
        let oracle = 2.71e-10 / 112e-6;
        let delta = refractive_decrement(&Material::aluminum(), &beam()).unwrap();
        assert!((delta - oracle).abs() / oracle < 0.02, "δ = {delta}");
        assert!((delta - 2.4e-6).abs() < 0.05e-6);
        let tiny = BeamConfig::new(1e-30).unwrap();
        assert!(refractive_decrement(&Material::aluminum(), &tiny).unwrap() < 1e-30);
    }

    #[test]
    fn fringe_spacing_examples() {
        let d = 0.314e-9;
        let theta = (2.71e-10f64 / (2.0 * d)).asin();
        let f = fringe_spacing(&beam(), theta).unwrap();
        assert!((f - d).abs() < 1e-22);
        assert_eq!(fringe_spacing(&beam(), PI / 2.0).unwrap(), 2.71e-10 / 2.0);
        let long = BeamConfig::new(5.42e-10).unwrap();
        assert_eq!(
            fringe_spacing(&long, 0.3).unwrap(),
            2.0 * fringe_spacing(&beam(), 0.3).unwrap()
        );
        assert!(fringe_spacing(&beam(), 0.0).is_err());
        assert!(fringe_spacing(&beam(), 2.0).is_err());
    }

    #[test]
    fn deflection_of_unit_plate_at_rim() {
        let al = Material::aluminum();
        let d = lambda_thickness(&al, &beam()).unwrap();
        let spp = SpiralPhasePlate::new(15e-3, d);
        // oracle: δ h_s / (2π r) with δ = λ / D_λ and h_s = D_λ collapses to λ / (2π r)
        let oracle = 2.71e-10 / (TAU * 7.5e-3);
        let got = prism_deflection(&spp, &al, &beam(), 7.5e-3).unwrap();
        assert!((got - oracle).abs() / oracle < 1e-12);
        assert!((got - 5.8e-9).abs() < 0.1e-9);
        let half = prism_deflection(&spp, &al, &beam(), 3.75e-3).unwrap();
        assert_eq!(half, 2.0 * got);
        assert!(matches!(
            prism_deflection(&spp, &al, &beam(), 0.0),
            Err(SimError::Singularity { .. })
        ));
        assert!(prism_deflection(&spp, &al, &beam(), 8e-3).is_err());
    }

    #[test]
    fn flat_plate_does_not_deflect() {
        let spp = SpiralPhasePlate::new(15e-3, 0.0);
        assert_eq!(
            prism_deflection(&spp, &Material::aluminum(), &beam(), 1e-3).unwrap(),
            0.0
        );
    }

    #[test]
    fn disk_average_matches_annulus_quadrature() {
        let al = Material::aluminum();
        let spp = SpiralPhasePlate::new(15e-3, 112e-6);
        let avg = disk_averaged_deflection(&spp, &al, &beam(), 0.5e-3).unwrap();
        // midpoint-rule area average of the point deflection
        let n = 200_000;
        let (r0, r1) = (0.5e-3, 7.5e-3);
        let h = (r1 - r0) / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            let r = r0 + (i as f64 + 0.5) * h;
            num += prism_deflection(&spp, &al, &beam(), r).unwrap() * r;
            den += r;
        }
        assert!((avg - num / den).abs() / avg < 1e-6);
        assert!(disk_averaged_deflection(&spp, &al, &beam(), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn lambda_thickness_is_homogeneous_of_degree_minus_one(
            n in 1e26f64..1e30, b in 1e-16f64..1e-13, lam in 1e-11f64..1e-9, k in 0.1f64..10.0
        ) {
            let base = lambda_thickness(&Material::new("m", n, b).unwrap(), &BeamConfig::new(lam).unwrap()).unwrap();
            for scaled in [
                lambda_thickness(&Material::new("m", k * n, b).unwrap(), &BeamConfig::new(lam).unwrap()).unwrap(),
                lambda_thickness(&Material::new("m", n, k * b).unwrap(), &BeamConfig::new(lam).unwrap()).unwrap(),
                lambda_thickness(&Material::new("m", n, b).unwrap(), &BeamConfig::new(k * lam).unwrap()).unwrap(),
            ] {
                prop_assert!((scaled * k - base).abs() <= 1e-14 * base);
            }
        }

        #[test]
        fn decrement_times_lambda_thickness_is_wavelength(
            n in 1e26f64..1e30, b in 1e-16f64..1e-13, lam in 1e-11f64..1e-9
        ) {
            let m = Material::new("m", n, b).unwrap();
            let beam = BeamConfig::new(lam).unwrap();
            let prod = refractive_decrement(&m, &beam).unwrap() * lambda_thickness(&m, &beam).unwrap();
            let ulp = lam * f64::EPSILON;
            prop_assert!((prod - lam).abs() <= 4.0 * ulp, "prod {} lam {}", prod, lam);
        }

        #[test]
        fn deflection_decreases_with_radius(r1 in 1e-5f64..7.5e-3, r2 in 1e-5f64..7.5e-3) {
            prop_assume!(r1 < r2);
            let spp = SpiralPhasePlate::new(15e-3, 112e-6);
            let al = Material::aluminum();
            let b = BeamConfig::default();
            prop_assert!(prism_deflection(&spp, &al, &b, r1).unwrap() > prism_deflection(&spp, &al, &b, r2).unwrap());
        }

        #[test]
        fn formulas_are_pure(n in 1e26f64..1e30, b in -1e-13f64..1e-13, lam in 1e-11f64..1e-9) {
            prop_assume!(b != 0.0);
            let m = Material::new("m", n, b).unwrap();
            let beam = BeamConfig::new(lam).unwrap();
            prop_assert_eq!(
                lambda_thickness(&m, &beam).unwrap().to_bits(),
                lambda_thickness(&m, &beam).unwrap().to_bits()
            );
        }
    }
}
