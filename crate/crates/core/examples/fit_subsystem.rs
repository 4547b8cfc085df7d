//! Fit a small RBM to a subsystem code state and print the convergence
//! trace.

use stabrbm::optimize::{fit_subsystem, OptimizerConfig};
use stabrbm::{lattice, oracle};

fn main() -> anyhow::Result<()> {
    let g = lattice::build_shor();
    let sub = oracle::subsystem_state(&g, &[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4], 1 << 10)?;
    println!("subsystem rank {} free {}", sub.rank, sub.free);
    let cfg = OptimizerConfig { restarts: 2, max_iterations: 500, gradient_check: true, ..Default::default() };
    let (rbm, report) = fit_subsystem(&sub.state, &cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("fitted {} hidden units", rbm.m());
    Ok(())
}
