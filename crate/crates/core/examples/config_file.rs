//! Build a configuration from a key=value file and run it.

use truncation_lab::harness::{run, ConfigOverrides, ExperimentConfig};

const CONFIG: &str = "
# spectrum at m/n = 1/4
kind = spectrum
n = 120
m = 30
trials = 40
seed = 5
radius-grid = 1.05, 1.1
format = json
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::default();
    cfg.apply(&ConfigOverrides::parse(CONFIG)?)?;
    let outcome = run(&cfg)?;
    println!("{}", outcome.summary_json()?);
    Ok(())
}
