//! Electric and magnetic strings on a rough-boundary code.

use stabrbm::lattice::{self, Boundary, LatticeSpec, Side};
use stabrbm::{analytic, oracle};

fn main() -> anyhow::Result<()> {
    let code = lattice::build_planar(&LatticeSpec::planar(3, 3, Boundary::all(Side::Rough)))?;
    let rbm = analytic::construct_planar(&code)?;
    let paths: [(&str, &[[usize; 2]]); 3] =
        [("from the left boundary", &[[2, 1], [2, 3]]), ("bulk", &[[2, 3], [3, 4]]), ("boundary to boundary", &[[2, 1], [2, 3], [2, 5]])];
    for (name, coords) in paths {
        let path: Vec<usize> = coords.iter().filter_map(|&c| code.qudit(c)).collect();
        let s = rbm.apply_string_z(&path)?.full_state(1 << 20)?;
        let flipped: Vec<&str> = code
            .terms
            .iter()
            .filter(|t| oracle::expectation(&t.op, &s).map(|e| e.re < -0.5).unwrap_or(false))
            .map(|t| t.label.as_str())
            .collect();
        println!("z-string {name}: flips {flipped:?}");
    }
    let s = rbm.apply_string_x(&[code.qudit([2, 3]).unwrap()])?.full_state(1 << 20)?;
    let flipped = code.terms.iter().filter(|t| oracle::expectation(&t.op, &s).map(|e| e.re < -0.5).unwrap_or(false)).count();
    println!("single x on a bulk edge flips {flipped} plaquettes");
    Ok(())
}
