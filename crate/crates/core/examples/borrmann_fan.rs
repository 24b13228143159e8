//! Plane-wave rocking curve and pencil-beam intensity across the Borrmann fan
//! of a symmetric Laue crystal.

use neutron_spp::{fan_profile, gamma_samples, rocking_curve, LaueCrystal};

fn main() -> neutron_spp::Result<()> {
    let crystal = LaueCrystal::new(0.4466, 10.0)?;

    println!("rocking curve");
    for y in [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0] {
        let (g, o) = rocking_curve(&crystal, y);
        println!("  y = {y:>5.1}  I_G = {g:.4}  I_O = {o:.4}");
    }

    let fine = fan_profile(&crystal, &gamma_samples(2000))?;
    println!(
        "fan integral {:.4}",
        fine.values.iter().sum::<f64>() * 2.0 / 2000.0
    );

    let fan = fan_profile(&crystal, &gamma_samples(40))?;
    let peak = fan.values.iter().copied().fold(0.0, f64::max);
    println!("fan profile, Γ from -1 to 1");
    for (g, v) in fan.coords.iter().zip(&fan.values) {
        let bar = "#".repeat((50.0 * v / peak).round() as usize);
        println!("  {g:>6.3} {bar}");
    }
    Ok(())
}
