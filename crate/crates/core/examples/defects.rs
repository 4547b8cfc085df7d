//! Smooth and rough holes in a torus.

use stabrbm::lattice::{self, GeometryTag, LatticeSpec, Side};
use stabrbm::{analytic, oracle};

fn main() -> anyhow::Result<()> {
    let specs = [
        ("smooth hole", LatticeSpec::torus(3, 4).with_defect(Side::Smooth, [2, 2, 4, 6])),
        ("rough hole", LatticeSpec::torus(3, 5).with_defect(Side::Rough, [2, 2, 4, 8])),
    ];
    for (name, spec) in specs {
        let code = lattice::build_defect(&spec)?;
        println!("{name}: {code}, k = {}", code.group.encoded()?);
        for t in code.terms.iter().filter(|t| t.tag == GeometryTag::Defect) {
            println!("  {} {}", t.label, t.op);
        }
        let rbm = analytic::construct_planar(&code)?;
        let ov = oracle::code_projector_overlap(&code.group, &rbm.full_state(1 << 24)?)?;
        println!("  overlap {ov:.12}");
    }
    Ok(())
}
