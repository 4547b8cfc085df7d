//! Shor's nine-qubit code: print the analytic parameters and check the
//! state against the code projector.

use stabrbm::{analytic, lattice, oracle};

fn main() -> anyhow::Result<()> {
    let g = lattice::build_shor();
    let (rbm, recipe) = analytic::construct(&g)?;
    for c in &recipe.contributions {
        println!("{:4} {:?} hidden={:?}", c.label, c.kind, c.hidden);
    }
    for (q, a) in rbm.a.iter().enumerate() {
        println!("a_{q} = {:.4}i pi", a.im / std::f64::consts::PI);
    }
    let state = rbm.full_state(1 << 10)?;
    println!("nonzero amplitudes: {}", state.nonzero_count(1e-10));
    println!("code-space overlap: {:.12}", oracle::code_projector_overlap(&g, &state)?);
    Ok(())
}
