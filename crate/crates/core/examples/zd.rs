//! D(Z_d) plaquette construction on a 2x2 torus (default d = 3).

use stabrbm::rbm::index_values;
use stabrbm::{analytic, lattice, oracle};

fn main() -> anyhow::Result<()> {
    let d = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let code = lattice::build_zd(2, 2, d)?;
    let rbm = analytic::construct_zd(&code)?;
    let s = rbm.full_state(1 << 24)?;
    for (t, l) in code.group.generators().iter().zip(code.group.labels()) {
        let e = oracle::expectation(t, &s)?;
        println!("<{l}> = {:.6}{:+.6}i", e.re, e.im);
    }
    let allowed = (0..s.amplitudes().len())
        .filter(|&k| {
            let v = index_values(k, code.n(), d);
            code.terms.iter().filter(|t| t.label.starts_with('B')).all(|t| {
                t.signs.iter().map(|&(q, sign)| sign as i64 * v[q] as i64).sum::<i64>().rem_euclid(d as i64) == 0
            })
        })
        .count();
    println!("{allowed} of {} configurations satisfy every plaquette", s.amplitudes().len());
    println!("nonzero amplitudes: {}", s.nonzero_count(1e-10));
    Ok(())
}
