//! Two plates in series act as one plate with the summed step height.

use neutron_spp::geometry::seam_band;
use neutron_spp::{
    ideal_interferogram, lambda_thickness, phase_stepped_frames, stack_thickness,
    thickness_map_direct, winding_around, BeamConfig, Grid, Material, SpiralPhasePlate,
};

fn main() -> neutron_spp::Result<()> {
    let dl = lambda_thickness(&Material::aluminum(), &BeamConfig::default())?;
    let grid = Grid::square(400, 16e-3)?;
    let plate = |l: f64| SpiralPhasePlate::with_effective_momentum(15e-3, l, dl);

    let stacked = stack_thickness(&[
        thickness_map_direct(&plate(1.0), &grid)?,
        thickness_map_direct(&plate(2.0), &grid)?,
    ])?;
    let single = thickness_map_direct(&plate(3.0), &grid)?;

    let band = seam_band(&plate(3.0), &grid, 2.0);
    let i_stacked = ideal_interferogram(&stacked, dl, 0.0)?;
    let i_single = ideal_interferogram(&single, dl, 0.0)?;
    let worst = (0..grid.len())
        .filter(|&k| !band[k])
        .map(|k| (i_stacked.values()[k] - i_single.values()[k]).abs())
        .fold(0.0, f64::max);
    println!("L1 + L2 vs L3, off the seam: max |ΔI| = {worst:.1e}");

    for (name, t) in [("L1 + L2", &stacked), ("L3", &single)] {
        let frames = phase_stepped_frames(t, dl, 0.0)?;
        let w = winding_around(&frames, (0.0, 0.0), 4e-3, 720)?;
        println!("{name:<8} winding {}", w.number);
    }
    Ok(())
}
