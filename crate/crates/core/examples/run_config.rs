//! Drive a full experiment from a JSON document, as the command-line tool does.

use neutron_spp::RunConfig;

const DOC: &str = r#"{
  "schema": "neutron-spp/run/v1",
  "experiment": "stack",
  "plates": [
    { "diameter": 0.015, "step": { "lambda_units": 1.0 } },
    { "diameter": 0.015, "step": { "lambda_units": 2.0 } }
  ],
  "grid": { "n": 200, "extent": 0.016 },
  "detector": { "nu": 100, "nv": 100, "noise": { "kind": "poisson", "counts_per_pixel": 400 } },
  "seed": 42
}"#;

fn main() -> neutron_spp::Result<()> {
    let mut cfg = RunConfig::from_json(DOC)?;
    cfg.output_dir = Some(std::env::temp_dir().join("run_config"));
    let out = neutron_spp::run(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&out.summary).unwrap());
    Ok(())
}
