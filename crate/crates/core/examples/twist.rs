//! Fit the 13-spin twist region and compose it with the analytic rest of
//! the lattice. Takes a few minutes per core.
//!
//! cargo run --release --example twist -- [restarts] [trace.csv]

use stabrbm::lattice;
use stabrbm::optimize::{fit_twist_lattice, OptimizerConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let restarts = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);
    let code = lattice::build_twist(&lattice::twist_preset_spec())?;
    println!("{code}; Q = {}", code.term("Q").expect("twist term").op);
    let cfg = OptimizerConfig { restarts, ..Default::default() };
    let fit = fit_twist_lattice(&code, &cfg, 1 << 24)?;
    for r in &fit.report.restarts {
        println!("restart {}: {:.4} -> {:.2e} in {} iterations", r.index, r.initial_distance, r.final_distance, r.iterations);
    }
    println!("best distance {:.2e}, fidelity {:.8}", fit.report.final_distance, fit.report.final_fidelity);
    println!("composed rbm: {} visible, {} hidden", fit.rbm.n(), fit.rbm.m());
    if let Some(path) = args.next() {
        std::fs::write(path, fit.report.trace_csv())?;
    }
    Ok(())
}
