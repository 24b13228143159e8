//! The |+l⟩ + |-l⟩ ring has exactly 2l azimuthal maxima. The same counter
//! applied to a plate interferogram gives a count that moves with the global phase.

use std::f64::consts::PI;

use neutron_spp::oam::{count_azimuthal_maxima_with, MaximaCounter};
use neutron_spp::{
    count_azimuthal_maxima, ideal_interferogram, lambda_thickness, superposition_intensity,
    thickness_map_direct, BeamConfig, Grid, Material, OamSuperposition, SpiralPhasePlate,
};

fn main() -> neutron_spp::Result<()> {
    let grid = Grid::square(256, 12e-3)?;
    for l in 1..=6 {
        let ring = superposition_intensity(&OamSuperposition::new(l, 3e-3, 0.6e-3), &grid)?;
        println!("l = {l}: {} maxima", count_azimuthal_maxima(&ring, 3e-3));
    }

    let dl = lambda_thickness(&Material::aluminum(), &BeamConfig::default())?;
    let grid = Grid::square(256, 16e-3)?;
    let t = thickness_map_direct(
        &SpiralPhasePlate::with_effective_momentum(15e-3, 4.0, dl),
        &grid,
    )?;
    let counter = MaximaCounter {
        center: (3e-3, 0.0),
        ..Default::default()
    };
    let counts = (0..8)
        .map(|k| {
            Ok(count_azimuthal_maxima_with(
                &ideal_interferogram(&t, dl, k as f64 * PI / 4.0)?,
                2e-3,
                &counter,
            ))
        })
        .collect::<neutron_spp::Result<Vec<_>>>()?;
    println!("L = 4 plate, off-axis circle, φ0 = kπ/4: {counts:?}");
    Ok(())
}
