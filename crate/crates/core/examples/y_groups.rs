//! Groups with `Y` generators: a `Y+Z` toric variant built directly, and an
//! `X+Y` variant built in the rotated basis.

use stabrbm::pauli::PauliString;
use stabrbm::{analytic, lattice, oracle, StabilizerGroup};

fn relabel(g: &StabilizerGroup, x_as: char, z_as: char) -> anyhow::Result<StabilizerGroup> {
    let gens = g
        .generators()
        .iter()
        .map(|t| {
            let s: String = (0..t.n())
                .map(|q| match (t.x()[q], t.z()[q]) {
                    (0, 0) => 'I',
                    (_, 0) => x_as,
                    _ => z_as,
                })
                .collect();
            PauliString::parse(&s)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StabilizerGroup::from_terms(g.n(), 2, gens, g.labels().to_vec())?)
}

fn main() -> anyhow::Result<()> {
    let toric = lattice::build_toric(2, 3)?;
    let h = toric.hamiltonian();
    for (x_as, z_as) in [('Y', 'Z'), ('X', 'Y')] {
        let g = relabel(&h, x_as, z_as)?;
        let (rbm, recipe) = analytic::construct(&g)?;
        let mut s = rbm.full_state(1 << 20)?;
        if recipe.basis == analytic::Basis::Y {
            let all: Vec<usize> = (0..g.n()).collect();
            s = oracle::y_basis_change(&s, &all, false)?;
        }
        println!("{}: basis {:?}, overlap {:.12}", g.classify(), recipe.basis, oracle::code_projector_overlap(&g, &s)?);
    }
    Ok(())
}
