//! Run the edge experiment through the harness and write its outputs.

use truncation_lab::harness::{run, ExperimentConfig, ExperimentKind, Summary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig {
        trials: 500,
        seed: 11,
        workers: 2,
        radius_grid: vec![1.05, 1.1, 1.2, 1.5],
        out: std::env::temp_dir().join("trunclab-edge"),
        ..ExperimentConfig::new(ExperimentKind::Edge, 100, 25)
    };
    let outcome = run(&cfg)?;
    if let Summary::Edge(s) = &outcome.summary {
        for row in &s.rows {
            println!(
                "r {}: mean count {:.4} (kernel {:.4}), P[max > r] = {:.4}, bound {:?}",
                row.radius,
                row.mean_count,
                row.expected,
                row.max_exceedance,
                row.edge_bound.as_ref().map(|b| b.value)
            );
        }
    }
    for a in &outcome.assertions {
        println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
    }
    for path in outcome.write(&cfg.out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
