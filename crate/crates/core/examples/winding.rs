//! Phase retrieval by four-step phase stepping, unwound along a circle around
//! the plate centre. Integer plates wind cleanly; L = 7.5 leaves a radial step.

use neutron_spp::{
    lambda_thickness, phase_stepped_frames, thickness_map_direct, winding_around, BeamConfig, Grid,
    Material, SpiralPhasePlate,
};

fn main() -> neutron_spp::Result<()> {
    let dl = lambda_thickness(&Material::aluminum(), &BeamConfig::default())?;
    let grid = Grid::square(400, 16e-3)?;
    for l in [1.0, 2.0, 3.0, 4.0, -2.0, 7.5] {
        let t = thickness_map_direct(
            &SpiralPhasePlate::with_effective_momentum(15e-3, l, dl),
            &grid,
        )?;
        let w = winding_around(
            &phase_stepped_frames(&t, dl, 0.0)?,
            (0.0, 0.0),
            3.75e-3,
            720,
        )?;
        println!(
            "L = {l:>4}: winding {:>2}, regular-rate estimate {:>6.3}, steps at {:?}",
            w.number,
            w.fractional,
            w.discontinuities
                .iter()
                .map(|a| format!("{:.0}°", a.to_degrees()))
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
