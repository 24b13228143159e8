//! Rotating the phase flag shifts the whole interferogram by a global phase.
//! The path difference stays a small fraction of D_λ.

use std::f64::consts::TAU;

use neutron_spp::config::si_111_bragg_angle;
use neutron_spp::{
    ideal_interferogram, lambda_thickness, thickness_map_direct, BeamConfig, Grid, Material,
    PhaseFlag, SpiralPhasePlate,
};

fn main() -> neutron_spp::Result<()> {
    let dl = lambda_thickness(&Material::aluminum(), &BeamConfig::default())?;
    let grid = Grid::square(200, 16e-3)?;
    let t = thickness_map_direct(
        &SpiralPhasePlate::with_effective_momentum(15e-3, 3.0, dl),
        &grid,
    )?;

    println!(
        "{:>10} {:>12} {:>8} {:>10}",
        "rot (deg)", "ΔD (µm)", "ΔD/D_λ", "I(centre)"
    );
    for deg in [-1.0f64, -0.5, 0.0, 0.5, 1.0] {
        let flag = PhaseFlag {
            slab_thickness: 1e-3,
            rotation: deg.to_radians(),
            bragg_angle: si_111_bragg_angle(),
        };
        let dd = flag.delta_thickness()?;
        let i = ideal_interferogram(&t, dl, TAU * dd / dl)?;
        println!(
            "{deg:>10.2} {:>12.3} {:>8.4} {:>10.4}",
            dd * 1e6,
            dd / dl,
            i.sample(2e-3, 0.0)
        );
    }
    Ok(())
}
