use neutron_spp::material::DEFAULT_DEFLECTION_CUTOFF;
use neutron_spp::{
    disk_averaged_deflection, lambda_thickness, prism_deflection, refractive_decrement, BeamConfig,
    Material, SpiralPhasePlate,
};

fn main() -> neutron_spp::Result<()> {
    let (al, beam) = (Material::aluminum(), BeamConfig::default());
    let spp = SpiralPhasePlate::with_effective_momentum(15e-3, 1.0, lambda_thickness(&al, &beam)?);
    println!("1 - n = {:.3e}", refractive_decrement(&al, &beam)?);
    for r in [0.5e-3, 1e-3, 2.5e-3, 5e-3, 7.5e-3] {
        println!(
            "r = {:>4.1} mm  deflection {:.2e} rad",
            r * 1e3,
            prism_deflection(&spp, &al, &beam, r)?
        );
    }
    println!(
        "disk average (r > {} mm): {:.2e} rad",
        DEFAULT_DEFLECTION_CUTOFF * 1e3,
        disk_averaged_deflection(&spp, &al, &beam, DEFAULT_DEFLECTION_CUTOFF)?
    );
    Ok(())
}
