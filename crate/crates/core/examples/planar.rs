//! Parameter tables for the 4x4 planar codes, printed on the medial grid:
//! each edge shows its visible bias in units of i pi/4.

use stabrbm::lattice::{self, Boundary, LatticeSpec, Side};
use stabrbm::{analytic, oracle};

fn main() -> anyhow::Result<()> {
    for (name, b) in [("smooth", Boundary::all(Side::Smooth)), ("rough", Boundary::all(Side::Rough)), ("mixed", Boundary::mixed())] {
        let code = lattice::build_planar(&LatticeSpec::planar(4, 4, b))?;
        let rbm = analytic::construct_planar(&code)?;
        println!("{name}: {code}");
        for i in 0..=8 {
            let row: String = (0..=8)
                .map(|j| match code.qudit([i, j]) {
                    Some(q) => format!("{:2}", (rbm.a[q].im / (std::f64::consts::PI / 4.0)).round()),
                    None => " .".into(),
                })
                .collect();
            println!("  {row}");
        }
        let mut kinds: Vec<String> =
            rbm.hidden_labels.iter().zip(&rbm.b).map(|(l, b)| format!("{}:{:.0}", &l[..1], b.im / (std::f64::consts::PI / 4.0))).collect();
        kinds.sort();
        kinds.dedup();
        println!("  hidden biases (i pi/4 units): {}", kinds.join(" "));
    }
    // the full 4x4 smooth lattice has 40 qubits; check a 3x3 one densely
    let small = lattice::build_planar(&LatticeSpec::planar(3, 3, Boundary::all(Side::Smooth)))?;
    let s = analytic::construct_planar(&small)?.full_state(1 << 24)?;
    println!("3x3 smooth overlap: {:.12}", oracle::code_projector_overlap(&small.group, &s)?);
    Ok(())
}
