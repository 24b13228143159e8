//! G-detector interferograms for L = 1, 2, 3, 4 and 7.5, binned to a 100 x 100
//! detector with 5 % Gaussian noise.

use neutron_spp::{
    apply_noise, bin_to_detector, complementary_interferogram, ideal_interferogram,
    lambda_thickness, thickness_map_direct, write_pgm, BeamConfig, DetectorSpec, Grid, Material,
    NoiseModel, SpiralPhasePlate,
};

fn main() -> neutron_spp::Result<()> {
    let d_lambda = lambda_thickness(&Material::aluminum(), &BeamConfig::default())?;
    let grid = Grid::square(400, 16e-3)?;
    let det =
        DetectorSpec::covering(100, 16e-3).with_noise(NoiseModel::Gaussian { sigma_rel: 0.05 }, 0);
    let dir = std::env::temp_dir().join("interferogram_series");
    std::fs::create_dir_all(&dir).expect("temp dir");

    for l in [1.0, 2.0, 3.0, 4.0, 7.5] {
        let spp = SpiralPhasePlate::with_effective_momentum(15e-3, l, d_lambda);
        let t = thickness_map_direct(&spp, &grid)?;
        let g = ideal_interferogram(&t, d_lambda, 0.0)?;
        let o = complementary_interferogram(&g)?;
        let image = apply_noise(&bin_to_detector(&g, &det)?, &det)?;
        let path = dir.join(format!("l{l}.pgm"));
        write_pgm(&image, &path)?;
        println!(
            "L = {l:<4} mean G {:.4}  mean O {:.4}  -> {}",
            g.mean(),
            o.mean(),
            path.display()
        );
    }
    Ok(())
}
