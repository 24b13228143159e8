//! Thickness map of an L = 1 aluminium plate, computed directly and through the
//! sliced single-angle projection, written as PGM images in units of D_λ.

use neutron_spp::geometry::seam_band;
use neutron_spp::{
    lambda_thickness, thickness_map_direct, thickness_map_radon, write_pgm, BeamConfig, Grid,
    Material, RadonConfig, SpiralPhasePlate, Unit,
};

fn main() -> neutron_spp::Result<()> {
    let d_lambda = lambda_thickness(&Material::aluminum(), &BeamConfig::default())?;
    let spp = SpiralPhasePlate::with_effective_momentum(15e-3, 1.0, d_lambda);
    let grid = Grid::square(256, 16e-3)?;

    let direct = thickness_map_direct(&spp, &grid)?;
    let projected = thickness_map_radon(&spp, &RadonConfig::new(256), &grid)?;
    for w in &projected.warnings {
        eprintln!("warning: {w}");
    }

    let band = seam_band(&spp, &grid, 2.0);
    let (mut acc, mut n) = (0.0, 0);
    for (k, skip) in band.iter().enumerate() {
        if !skip {
            acc += (direct.values()[k] - projected.value.values()[k]).powi(2);
            n += 1;
        }
    }
    println!("D_λ                 {:.2} µm", d_lambda * 1e6);
    println!("max thickness       {:.2} µm", direct.max() * 1e6);
    println!(
        "radon vs direct RMS {:.4} % of h_s",
        100.0 * (acc / n as f64).sqrt() / spp.step_height
    );

    let dir = std::env::temp_dir().join("spp_thickness");
    std::fs::create_dir_all(&dir).map_err(|e| neutron_spp::SimError::Io {
        path: dir.clone(),
        source: e,
    })?;
    write_pgm(
        &direct.scaled(1.0 / d_lambda).relabel(Unit::Dimensionless)?,
        dir.join("direct.pgm"),
    )?;
    write_pgm(
        &projected
            .value
            .scaled(1.0 / d_lambda)
            .relabel(Unit::Dimensionless)?,
        dir.join("radon.pgm"),
    )?;
    println!("wrote {}", dir.display());
    Ok(())
}
