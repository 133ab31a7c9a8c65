//! Exact and sampled completeness thresholds.
//!
//! cargo run --release --example threshold_search

use zn_complete::experiments::{exact_threshold, sampled_threshold, ExactConfig, ExperimentConfig, Restriction, SizeRule};
use zn_complete::Modulus;

fn main() -> zn_complete::Result<()> {
    for n in [7, 11, 13] {
        let record = exact_threshold(Modulus::new(n)?, Restriction::Nonzero, ExactConfig::default())?;
        println!(
            "n = {n}: threshold {:?}, largest incomplete {:?}, {} DP steps",
            record.m_star, record.max_incomplete, record.evaluations
        );
    }

    let mut seen = 0;
    let mut cfg = ExactConfig::default();
    cfg.checkpoint_every = 500;
    let mut on_checkpoint = |cp: &zn_complete::experiments::Checkpoint| seen = cp.evaluations;
    cfg.on_checkpoint = Some(&mut on_checkpoint);
    exact_threshold(Modulus::new(17)?, Restriction::Coprime, cfg)?;
    println!("last checkpoint for n = 17 after {seen} DP steps");

    let cfg = ExperimentConfig::new(42, 2000, SizeRule::AboveTwoSqrt);
    let record = sampled_threshold(Modulus::new(101)?, Restriction::Nonzero, &cfg)?;
    for t in &record.sizes {
        println!("n = 101, size {}: {} of {} samples complete", t.size, t.complete, t.checked);
    }
    Ok(())
}
