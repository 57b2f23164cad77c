//! Distance-to-limit campaign: quantiles, delta_m and concentration bounds.

use truncation_lab::harness::{run, ExperimentConfig, ExperimentKind, Summary};
use truncation_lab::transport::Metric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for m in [25, 50, 100] {
        let cfg = ExperimentConfig {
            trials: 20,
            seed: 12,
            metric: Metric::BoundedLipschitz,
            ..ExperimentConfig::new(ExperimentKind::Distance, 4 * m, m)
        };
        let outcome = run(&cfg)?;
        if let Summary::Distance(s) = &outcome.summary {
            let q = &s.quantiles;
            println!(
                "m = {m}: d_BL median {:.4}, q90 {:.4}, max {:.4}; delta_m {:?}",
                q.median,
                q.q90,
                q.max,
                s.delta_m.as_ref().map(|d| d.value)
            );
        }
    }
    Ok(())
}
