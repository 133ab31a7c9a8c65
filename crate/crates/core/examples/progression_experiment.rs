//! How often S_A contains an AP of length n for random A ⊆ {1..n}, and the
//! decomposition pipeline on random composite moduli.
//!
//! cargo run --release --example progression_experiment

use zn_complete::experiments::{corollary_experiment, pipeline_experiment, ExperimentConfig, PipelineConfig, SizeRule};

fn main() -> zn_complete::Result<()> {
    let cfg = ExperimentConfig::new(7, 50, SizeRule::All);
    for row in corollary_experiment(400, &[1.0, 2.0, 4.0, 8.0], &cfg)? {
        println!(
            "n = {} c = {} |A| = {}: {}/{} trials, shortest best AP {}",
            row.n, row.c, row.size, row.successes, row.trials, row.min_longest
        );
    }

    let report = pipeline_experiment(&PipelineConfig {
        seed: 1,
        cases: 10,
        ..PipelineConfig::default()
    })?;
    println!(
        "pipeline: {}/{} targets, {} reachable",
        report.pipeline_ok, report.total_targets, report.reachable
    );
    Ok(())
}
