//! Brute-force dense states: code states from projector products,
//! expectation values, fidelity and distance.

use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, StabilizerGroup};
use crate::rbm::{index_digits, state_dimension};

const BLOCK: usize = 1 << 12;
pub const STRB_MAGIC: &[u8; 4] = b"STRB";

/// Amplitudes over `d^n` basis states, qudit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    d: u32,
    amps: Vec<Complex64>,
}

/// Sum in fixed blocks so the result does not depend on thread count.
fn block_sum<F>(len: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let partial: Vec<Complex64> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| (b * BLOCK..((b + 1) * BLOCK).min(len)).map(&f).sum())
        .collect();
    partial.into_iter().sum()
}

impl DenseState {
    pub fn new(n: usize, d: u32, amps: Vec<Complex64>) -> Result<Self> {
        let dim = state_dimension(n, d, u128::MAX)?;
        if amps.len() != dim {
            return Err(Error::ShapeMismatch { expected: dim, found: amps.len() });
        }
        Ok(DenseState { n, d, amps })
    }

    pub fn basis(n: usize, d: u32, index: usize, cap: u128) -> Result<Self> {
        let dim = state_dimension(n, d, cap)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, n: dim });
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, d, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        block_sum(self.amps.len(), |k| Complex64::new(self.amps[k].norm_sqr(), 0.0)).re
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(block_sum(self.amps.len(), |k| self.amps[k].conj() * other.amps[k]))
    }

    pub fn normalized(&self) -> Result<DenseState> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, s: Complex64) -> DenseState {
        DenseState { n: self.n, d: self.d, amps: self.amps.par_iter().map(|a| a * s).collect() }
    }

    /// Rotate the global phase so the largest-modulus amplitude is real
    /// and positive.
    pub fn phase_aligned(&self) -> DenseState {
        let (mut best, mut k) = (-1.0, 0);
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > best * (1.0 + 1e-12) {
                best = a.norm();
                k = i;
            }
        }
        if best <= 0.0 {
            return self.clone();
        }
        self.scaled(self.amps[k].conj() / best)
    }

    pub fn nonzero_count(&self, tol: f64) -> usize {
        self.amps.iter().filter(|a| a.norm() > tol).count()
    }

    pub fn digits(&self, index: usize) -> Vec<u32> {
        index_digits(index, self.n, self.d)
    }

    fn check_shape(&self, other: &DenseState) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::DimensionMismatch(self.n, self.d, other.n, other.d));
        }
        Ok(())
    }

    fn check_op(&self, p: &PauliString) -> Result<()> {
        if p.n() != self.n || p.d() != self.d {
            return Err(Error::DimensionMismatch(p.n(), p.d(), self.n, self.d));
        }
        Ok(())
    }

    /// Binary dump: magic `STRB`, `u32 n`, `u32 d`, four reserved zero
    /// bytes, then little-endian `(re, im)` pairs.
    pub fn write_strb<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(STRB_MAGIC)?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&self.d.to_le_bytes())?;
        w.write_all(&[0u8; 4])?;
        let mut buf = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_strb<R: Read>(mut r: R) -> Result<DenseState> {
        let mut head = [0u8; 16];
        r.read_exact(&mut head)?;
        if &head[..4] != STRB_MAGIC {
            return Err(Error::Format("missing STRB magic".into()));
        }
        let n = u32::from_le_bytes(head[4..8].try_into().unwrap()) as usize;
        let d = u32::from_le_bytes(head[8..12].try_into().unwrap());
        let mut body = Vec::new();
        r.read_to_end(&mut body)?;
        let dim = state_dimension(n, d, u128::MAX)?;
        if body.len() != dim * 16 {
            return Err(Error::ShapeMismatch { expected: dim * 16, found: body.len() });
        }
        let amps = body
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap()))
            })
            .collect();
        DenseState::new(n, d, amps)
    }
}

/// Bit masks for a qubit string; qudit `q` sits at bit `n - 1 - q`.
fn masks(p: &PauliString) -> (usize, usize) {
    let n = p.n();
    let (mut xm, mut zm) = (0, 0);
    for q in 0..n {
        if p.x()[q] == 1 {
            xm |= 1 << (n - 1 - q);
        }
        if p.z()[q] == 1 {
            zm |= 1 << (n - 1 - q);
        }
    }
    (xm, zm)
}

const QUARTER: [Complex64; 4] =
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];

/// Scalar with `P|j> = lambda_j |j ^ xm>` for qubits.
#[inline]
fn qubit_factor(phase: u32, zm: usize, j: usize) -> Complex64 {
    QUARTER[((phase + 2 * (j & zm).count_ones()) % 4) as usize]
}

/// Mixed-radix action for `d > 2`: target index and phase exponent.
fn qudit_action(p: &PauliString, j: usize) -> (usize, u32) {
    let (n, d) = (p.n(), p.d() as usize);
    let mut k = j;
    let mut target = 0;
    let mut stride = 1;
    let mut e = p.phase() as usize;
    for q in (0..n).rev() {
        let v = k % d;
        k /= d;
        e += 2 * ((p.z()[q] as usize * v) % d);
        target += ((v + p.x()[q] as usize) % d) * stride;
        stride *= d;
    }
    (target, (e % (2 * d)) as u32)
}

fn tau_power(d: u32, e: u32) -> Complex64 {
    crate::pauli::Phase { exponent: e, d }.to_complex()
}

/// `P|s>`.
pub fn apply_pauli(p: &PauliString, s: &DenseState) -> Result<DenseState> {
    s.check_op(p)?;
    let mut out = vec![Complex64::default(); s.amps.len()];
    if s.d == 2 {
        let (xm, zm) = masks(p);
        let ph = p.phase();
        out.par_iter_mut().enumerate().for_each(|(k, o)| {
            let j = k ^ xm;
            *o = qubit_factor(ph, zm, j) * s.amps[j];
        });
    } else {
        for j in 0..s.amps.len() {
            let (t, e) = qudit_action(p, j);
            out[t] = tau_power(s.d, e) * s.amps[j];
        }
    }
    Ok(DenseState { n: s.n, d: s.d, amps: out })
}

/// Apply `(1/d) sum_h T^h` in place.
pub fn project(p: &PauliString, s: &mut DenseState) -> Result<()> {
    s.check_op(p)?;
    if s.d == 2 {
        let (xm, zm) = masks(p);
        let ph = p.phase();
        if xm == 0 {
            s.amps.par_iter_mut().enumerate().for_each(|(j, a)| *a = (*a + qubit_factor(ph, zm, j) * *a) * 0.5);
            return Ok(());
        }
        let top = usize::BITS - 1 - xm.leading_zeros();
        let chunk = 1usize << (top + 1);
        let half = chunk >> 1;
        s.amps.par_chunks_mut(chunk).enumerate().for_each(|(c, block)| {
            let base = c * chunk;
            for l in 0..half {
                let m = l ^ xm;
                let (j, k) = (base + l, base + m);
                let (u, v) = (block[l], block[m]);
                // (T s)[l] = lambda_k s[k], (T s)[m] = lambda_j s[j]
                block[l] = (u + qubit_factor(ph, zm, k) * v) * 0.5;
                block[m] = (v + qubit_factor(ph, zm, j) * u) * 0.5;
            }
        });
    } else {
        let mut acc = s.amps.clone();
        let mut cur = s.clone();
        for _ in 1..s.d {
            cur = apply_pauli(p, &cur)?;
            acc.par_iter_mut().zip(&cur.amps).for_each(|(a, b)| *a += b);
        }
        let inv = 1.0 / s.d as f64;
        s.amps = acc.into_iter().map(|a| a * inv).collect();
    }
    Ok(())
}

/// Apply the code-space projector for every generator of `g`.
pub fn project_all(g: &StabilizerGroup, s: &mut DenseState) -> Result<()> {
    for t in g.generators() {
        project(t, s)?;
    }
    Ok(())
}

/// `P_C|r>` normalized, with `|r>` the first basis state in index order
/// whose projection is nonzero.
pub fn code_state(g: &StabilizerGroup, cap: u128) -> Result<DenseState> {
    let dim = state_dimension(g.n(), g.d(), cap)?;
    for r in 0..dim {
        let mut s = DenseState::basis(g.n(), g.d(), r, cap)?;
        project_all(g, &mut s)?;
        if s.norm_sqr() > 1e-20 {
            return s.normalized();
        }
    }
    Err(Error::Internal("every basis state projects to zero".into()))
}

/// `<s|P_C|s> / <s|s>`.
pub fn code_projector_overlap(g: &StabilizerGroup, s: &DenseState) -> Result<f64> {
    let norm = s.norm_sqr();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let mut p = s.clone();
    project_all(g, &mut p)?;
    // P_C is a projector, so <s|P|s> = <Ps|Ps>
    Ok(p.norm_sqr() / norm)
}

/// `<s|T|s> / <s|s>`.
pub fn expectation(t: &PauliString, s: &DenseState) -> Result<Complex64> {
    s.check_op(t)?;
    let norm = s.norm_sqr();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let val = if s.d == 2 {
        let (xm, zm) = masks(t);
        let ph = t.phase();
        block_sum(s.amps.len(), |k| {
            let j = k ^ xm;
            s.amps[k].conj() * qubit_factor(ph, zm, j) * s.amps[j]
        })
    } else {
        s.inner(&apply_pauli(t, s)?)?
    };
    Ok(val / norm)
}

pub fn fidelity(s1: &DenseState, s2: &DenseState) -> Result<f64> {
    let (n1, n2) = (s1.norm_sqr(), s2.norm_sqr());
    if n1 == 0.0 || n2 == 0.0 || !n1.is_finite() || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let f = s1.inner(s2)?.norm_sqr() / (n1 * n2);
    Ok(f.clamp(0.0, 1.0))
}

/// `arccos sqrt(F)`, in `[0, pi/2]`.
pub fn distance_from_fidelity(f: f64) -> f64 {
    f.clamp(0.0, 1.0).sqrt().acos()
}

pub fn distance(s1: &DenseState, s2: &DenseState) -> Result<f64> {
    Ok(distance_from_fidelity(fidelity(s1, s2)?))
}

/// A restricted code state and how far it is from unique.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub spins: Vec<usize>,
    pub group: StabilizerGroup,
    pub state: DenseState,
    pub rank: usize,
    /// `log_d` of the restricted code-space dimension; nonzero means the
    /// returned state is one of several.
    pub free: usize,
}

/// Restrict the chosen generators to `spins` and return the code state of
/// the restricted group.
pub fn subsystem_state(g: &StabilizerGroup, spins: &[usize], stabs: &[usize], cap: u128) -> Result<Subsystem> {
    let mut gens = Vec::with_capacity(stabs.len());
    let mut labels = Vec::with_capacity(stabs.len());
    for &j in stabs {
        let t = g.generators().get(j).ok_or(Error::IndexOutOfRange { index: j, n: g.len() })?;
        gens.push(t.restrict(spins)?);
        labels.push(g.labels()[j].clone());
    }
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if !gens[a].commutes(&gens[b])? {
                return Err(Error::SubsystemNotClosed(stabs[a], stabs[b]));
            }
        }
    }
    let group = StabilizerGroup::from_terms(spins.len(), g.d(), gens, labels)?;
    let rank = group.independent_rank()?;
    let state = code_state(&group, cap)?;
    Ok(Subsystem { spins: spins.to_vec(), free: spins.len() - rank, group, state, rank })
}

/// Apply `V` (`forward`) or `V^dagger` on each listed qubit, where
/// `V = (1 - i sigma_x)/sqrt(2)` maps `sigma_y` to `sigma_z` by conjugation
/// and fixes `sigma_x`.
pub fn y_basis_change(s: &DenseState, qubits: &[usize], forward: bool) -> Result<DenseState> {
    if s.d != 2 {
        return Err(Error::Unsupported("basis change needs qubits".into()));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let off = Complex64::new(0.0, if forward { -r } else { r });
    let diag = Complex64::new(r, 0.0);
    let mut amps = s.amps.clone();
    for &q in qubits {
        if q >= s.n {
            return Err(Error::IndexOutOfRange { index: q, n: s.n });
        }
        let bit = 1usize << (s.n - 1 - q);
        let chunk = bit << 1;
        amps.par_chunks_mut(chunk).for_each(|block| {
            for l in 0..bit {
                let (u, v) = (block[l], block[l + bit]);
                block[l] = diag * u + off * v;
                block[l + bit] = off * u + diag * v;
            }
        });
    }
    Ok(DenseState { n: s.n, d: s.d, amps })
}
