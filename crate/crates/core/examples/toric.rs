//! Toric code on an R x C torus (default 3x3) with both parameter forms.
//!
//! cargo run --release --example toric -- 3 3

use stabrbm::{analytic, lattice, oracle};

fn main() -> anyhow::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let (r, c) = (*args.first().unwrap_or(&3), *args.get(1).unwrap_or(&3));
    let code = lattice::build_toric(r, c)?;
    println!("{code}, {} logical qubits", code.group.encoded()?);
    for (name, rbm) in [("incidence", analytic::construct_planar(&code)?), ("per-term", analytic::toric_uniform(&code)?)] {
        let s = rbm.full_state(1 << 24)?;
        let worst = code
            .hamiltonian()
            .generators()
            .iter()
            .map(|t| oracle::expectation(t, &s).map(|e| (e - 1.0).norm()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("{name:10} m={:2} max |<T> - 1| = {worst:.2e}", rbm.m());
    }
    Ok(())
}
