//! Scatter plots and radial histograms for three aspect ratios, as SVG.

use truncation_lab::harness::{reproduce_figure, ExperimentConfig, ExperimentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("trunclab-figure"));
    let cfg = ExperimentConfig {
        trials: 20,
        seed: 3,
        ..ExperimentConfig::new(ExperimentKind::Figure, 200, 50)
    };
    let outcome = reproduce_figure(&cfg)?;
    for path in outcome.write(&dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
