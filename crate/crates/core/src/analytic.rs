//! Closed-form RBM constructions for composable stabilizer groups.
//!
//! Each `Z`-type generator of weight `l` becomes one hidden unit with
//! `b = -l i pi/4` and weights `i pi/4` on its support, and adds `i pi/4`
//! to the visible bias of every qubit it touches. `X`-type generators add
//! nothing. `Y`-type generators shift the bias of each qubit they touch by
//! `-i pi/4`; for `X+Y` groups the construction runs in the frame where
//! `sigma_y` becomes `sigma_z`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeCode;
use crate::pauli::{GeneratorType, GroupClass, PauliString, StabilizerGroup};
use crate::rbm::{i_pi, RbmState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Z,
    /// The RBM describes `V^{(x)n} |Psi>` with `V = (1 - i sigma_x)/sqrt 2`;
    /// see [`crate::oracle::y_basis_change`].
    Y,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub generator: usize,
    pub label: String,
    pub kind: GeneratorType,
    pub hidden: Option<usize>,
    /// `(qudit, increment)` with complex values as `[re, im]`.
    pub a_increments: Vec<(usize, [f64; 2])>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRecipe {
    pub source_group: StabilizerGroup,
    pub class: GroupClass,
    pub basis: Basis,
    pub contributions: Vec<Contribution>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Exact RBM for a group of class `S_X`, `S_Y`, `S_Z`, `X+Z`, `Y+Z` or `X+Y`
/// on qubits.
pub fn construct(g: &StabilizerGroup) -> Result<(RbmState, AnalyticRecipe)> {
    let class = g.classify();
    if class == GroupClass::Mixed {
        return Err(Error::RequiresVariational(class));
    }
    if g.d() != 2 {
        return Err(Error::Unsupported("qudit groups go through construct_zd".into()));
    }
    if let Some(j) = g.generators().iter().position(|t| t.sign_exponent() != 0) {
        return Err(Error::Unsupported(format!("generator {} carries a nontrivial sign", g.labels()[j])));
    }
    let basis = if class == GroupClass::XY { Basis::Y } else { Basis::Z };
    let n = g.n();
    let mut rbm = RbmState::new(n, 2);
    let mut contributions = Vec::with_capacity(g.len());
    let mut y_touched = BTreeSet::new();
    let quarter = i_pi(1.0, 4.0);

    for (j, t) in g.generators().iter().enumerate() {
        let kind = t.generator_type();
        // in the rotated frame every Y factor reads as Z
        let acts_as_z = kind == GeneratorType::Z || (basis == Basis::Y && kind == GeneratorType::Y);
        let mut c = Contribution { generator: j, label: g.labels()[j].clone(), kind, hidden: None, a_increments: vec![] };
        let support = t.support();
        if acts_as_z {
            let l = support.len() as f64;
            let weights: Vec<_> = support.iter().map(|&q| (q, quarter)).collect();
            c.hidden = Some(rbm.push_hidden(i_pi(-l, 4.0), &weights, c.label.clone())?);
            for &q in &support {
                rbm.a[q] += quarter;
                c.a_increments.push((q, pair(quarter)));
            }
        } else if kind == GeneratorType::Y {
            for &q in &support {
                if y_touched.insert(q) {
                    rbm.a[q] -= quarter;
                    c.a_increments.push((q, pair(-quarter)));
                }
            }
        }
        contributions.push(c);
    }
    Ok((rbm, AnalyticRecipe { source_group: g.clone(), class, basis, contributions }))
}

/// [`construct`] over every term of a lattice code, dependent ones
/// included, so that each plaquette carries its own hidden unit.
pub fn construct_planar(code: &LatticeCode) -> Result<RbmState> {
    let g = code.hamiltonian();
    if g.classify() != GroupClass::XZ && g.classify() != GroupClass::SZ && g.classify() != GroupClass::SX {
        return Err(Error::Unsupported(format!("lattice code of class {}", g.classify())));
    }
    Ok(construct(&g)?.0)
}

/// The per-term toric assignment: hidden units on every vertex and
/// plaquette, with each plaquette adding `i pi/4` to the bias of its edges
/// and carrying `b = -i pi`, `W = i pi/4`. Vertex units have all-zero
/// parameters and only scale the amplitude by 2.
pub fn toric_uniform(code: &LatticeCode) -> Result<RbmState> {
    let mut rbm = RbmState::new(code.n(), 2);
    for t in &code.terms {
        let support = t.op.support();
        match t.op.generator_type() {
            GeneratorType::Z => {
                let weights: Vec<_> = support.iter().map(|&q| (q, i_pi(1.0, 4.0))).collect();
                rbm.push_hidden(i_pi(-1.0, 1.0), &weights, t.label.clone())?;
                for q in support {
                    rbm.a[q] += i_pi(1.0, 4.0);
                }
            }
            GeneratorType::X => {
                rbm.push_hidden(Complex64::default(), &[], t.label.clone())?;
            }
            other => return Err(Error::Unsupported(format!("toric term {} of type {other:?}", t.label))),
        }
    }
    Ok(rbm)
}

/// Qudit plaquette construction: `d - 1` hidden units per plaquette with
/// `b_l = i pi l/d - i pi/2` and `W = s_e i pi/d`, and `a_e` summing
/// `s_e i pi/d` over the plaquettes containing `e`. Amplitudes vanish
/// unless every plaquette's signed sum is `0 mod d`. Uses every term of the
/// code, dependent ones included.
pub fn construct_zd(code: &LatticeCode) -> Result<RbmState> {
    if code.spec.d == 2 {
        return construct_planar(code);
    }
    construct_qudit(&code.hamiltonian())
}

/// [`construct_zd`] from generators alone. Diagonal generators must have
/// exponents in `{0, 1, d - 1}`, read as edge signs `+1` and `-1`; shift-only
/// generators add nothing.
pub fn construct_qudit(g: &StabilizerGroup) -> Result<RbmState> {
    let d = g.d();
    if d < 3 {
        return Err(Error::Unsupported("qubit groups go through construct".into()));
    }
    let df = d as f64;
    let mut rbm = RbmState::new(g.n(), d);
    for (t, label) in g.generators().iter().zip(g.labels()) {
        if t.sign_exponent() != 0 {
            return Err(Error::Unsupported(format!("generator {label} carries a nontrivial phase")));
        }
        let diagonal = t.x().iter().all(|&x| x == 0);
        let shift = t.z().iter().all(|&z| z == 0);
        if shift {
            continue;
        }
        if !diagonal {
            return Err(Error::RequiresVariational(GroupClass::Mixed));
        }
        let mut signs = Vec::new();
        for (q, &z) in t.z().iter().enumerate() {
            match z {
                0 => {}
                1 => signs.push((q, 1.0)),
                z if z == d - 1 => signs.push((q, -1.0)),
                _ => return Err(Error::Unsupported(format!("generator {label} has exponent {z} on qudit {q}"))),
            }
        }
        for &(q, s) in &signs {
            rbm.a[q] += i_pi(s, df);
        }
        let weights: Vec<_> = signs.iter().map(|&(q, s)| (q, i_pi(s, df))).collect();
        for l in 1..d {
            let b = i_pi(l as f64, df) - i_pi(1.0, 2.0);
            rbm.push_hidden(b, &weights, format!("{label}^{l}"))?;
        }
    }
    Ok(rbm)
}

/// Replace every `sigma_y` factor by `sigma_z`, which is conjugation by
/// `V` on each qubit.
pub fn rotate_y_to_z(g: &StabilizerGroup) -> Result<StabilizerGroup> {
    let gens = g
        .generators()
        .iter()
        .map(|t| {
            let z: Vec<u32> = (0..t.n()).map(|q| if t.x()[q] == 1 && t.z()[q] == 1 { 1 } else { t.z()[q] }).collect();
            let x: Vec<u32> = (0..t.n()).map(|q| if t.z()[q] == 1 { 0 } else { t.x()[q] }).collect();
            PauliString::new(2, x, z, 0)
        })
        .collect::<Result<Vec<_>>>()?;
    StabilizerGroup::from_terms(g.n(), 2, gens, g.labels().to_vec())
}
