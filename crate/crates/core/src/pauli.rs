//! Generalized Pauli strings over qudits and stabilizer groups.
//!
//! A [`PauliString`] is `tau^phase * prod_j X_j^{x_j} Z_j^{z_j}` with
//! `tau = exp(i pi / d)`, so `tau^2 = omega`. Exponents live in `Z_d`, the
//! phase in `Z_{2d}`; all algebra is exact integer arithmetic.
//!
//! For `d = 2`, `sigma_y = i sigma_x sigma_z`, so a literal `sigma_y` factor is
//! stored as `x = 1, z = 1` with one unit of phase.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A root of unity `exp(i pi k / d)`, kept as the integer `k mod 2d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub exponent: u32,
    pub d: u32,
}

impl Phase {
    pub fn one(d: u32) -> Self {
        Phase { exponent: 0, d }
    }

    pub fn mul(self, other: Phase) -> Phase {
        debug_assert_eq!(self.d, other.d);
        Phase { exponent: (self.exponent + other.exponent) % (2 * self.d), d: self.d }
    }

    /// Quarter turns are returned exactly so that `+-1, +-i` carry no rounding.
    pub fn to_complex(self) -> Complex64 {
        let order = 2 * self.d as u64;
        let k = self.exponent as u64 % order;
        if (4 * k) % order == 0 {
            return match 4 * k / order {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / self.d as f64)
    }
}

/// Single-qubit factor letters, used for construction and classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'X' | 'x' => Some(Letter::X),
            'Y' | 'y' => Some(Letter::Y),
            'Z' | 'z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Map a configuration value to its `Z_d` digit.
///
/// For `d = 2` configurations are spins: `+1 -> 0`, `-1 -> 1`. For `d > 2`
/// they are the digits `0..d` themselves.
pub fn value_to_digit(d: u32, value: i32) -> Result<u32> {
    if d == 2 {
        match value {
            1 => Ok(0),
            -1 => Ok(1),
            _ => Err(Error::InvalidValue { value, d }),
        }
    } else if value >= 0 && (value as u32) < d {
        Ok(value as u32)
    } else {
        Err(Error::InvalidValue { value, d })
    }
}

/// Inverse of [`value_to_digit`].
pub fn digit_to_value(d: u32, digit: u32) -> i32 {
    if d == 2 {
        1 - 2 * (digit as i32 & 1)
    } else {
        (digit % d) as i32
    }
}

pub(crate) fn is_prime(d: u32) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| d % k != 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    d: u32,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

impl PauliString {
    pub fn identity(n: usize, d: u32) -> Self {
        PauliString { d, x: vec![0; n], z: vec![0; n], phase: 0 }
    }

    /// Build from raw exponents, reducing everything into range.
    pub fn new(d: u32, x: Vec<u32>, z: Vec<u32>, phase: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if x.len() != z.len() {
            return Err(Error::ShapeMismatch { expected: x.len(), found: z.len() });
        }
        Ok(PauliString {
            d,
            x: x.into_iter().map(|e| e % d).collect(),
            z: z.into_iter().map(|e| e % d).collect(),
            phase: phase % (2 * d),
        })
    }

    /// Literal tensor product of qubit Pauli matrices, e.g. `[(0, X), (3, Y)]`.
    pub fn from_letters(n: usize, factors: &[(usize, Letter)]) -> Result<Self> {
        let mut p = PauliString::identity(n, 2);
        for &(q, letter) in factors {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            let single = match letter {
                Letter::X => PauliString::single(n, 2, q, 1, 0)?,
                Letter::Z => PauliString::single(n, 2, q, 0, 1)?,
                Letter::Y => {
                    let mut y = PauliString::single(n, 2, q, 1, 1)?;
                    y.phase = 1;
                    y
                }
            };
            p = p.mul(&single)?;
        }
        Ok(p)
    }

    /// Parse a dense letter string such as `"XIZY"`.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut factors = Vec::new();
        for (q, c) in chars.iter().enumerate() {
            if *c == 'I' || *c == '_' {
                continue;
            }
            let l = Letter::from_char(*c).ok_or_else(|| Error::Format(format!("bad Pauli letter {c:?}")))?;
            factors.push((q, l));
        }
        PauliString::from_letters(chars.len(), &factors)
    }

    /// `X^x Z^z` on a single qudit.
    pub fn single(n: usize, d: u32, q: usize, x: u32, z: u32) -> Result<Self> {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
        let mut p = PauliString::identity(n, d);
        p.x[q] = x % d;
        p.z[q] = z % d;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn x(&self) -> &[u32] {
        &self.x
    }
    pub fn z(&self) -> &[u32] {
        &self.z
    }
    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.x[j] != 0 || self.z[j] != 0).collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    /// The factor letter on qudit `j`; both parts nonzero counts as `Y`.
    pub fn letter(&self, j: usize) -> Option<Letter> {
        match (self.x[j] != 0, self.z[j] != 0) {
            (false, false) => None,
            (true, false) => Some(Letter::X),
            (false, true) => Some(Letter::Z),
            (true, true) => Some(Letter::Y),
        }
    }

    /// Phase relative to the product of Weyl-ordered single-qudit factors
    /// `tau^{x z} X^x Z^z`. Zero means a literal product of Hermitian
    /// qubit Paulis for `d = 2`, and `d` means an overall minus sign.
    pub fn sign_exponent(&self) -> u32 {
        let m = 2 * self.d;
        let weyl: u32 = self.x.iter().zip(&self.z).map(|(a, b)| (a * b) % m).sum::<u32>() % m;
        (self.phase + m - weyl) % m
    }

    fn check_compatible(&self, other: &PauliString) -> Result<()> {
        if self.n() != other.n() || self.d != other.d {
            return Err(Error::DimensionMismatch(self.n(), self.d, other.n(), other.d));
        }
        Ok(())
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        self.check_compatible(other)?;
        let d = self.d;
        let m = 2 * d;
        // (X^a Z^b)(X^c Z^e) = omega^{b c} X^{a+c} Z^{b+e}, and omega = tau^2
        let mut phase = (self.phase + other.phase) % m;
        for j in 0..self.n() {
            phase = (phase + 2 * ((self.z[j] * other.x[j]) % d)) % m;
        }
        Ok(PauliString {
            d,
            x: self.x.iter().zip(&other.x).map(|(a, c)| (a + c) % d).collect(),
            z: self.z.iter().zip(&other.z).map(|(b, e)| (b + e) % d).collect(),
            phase,
        })
    }

    pub fn pow(&self, h: u32) -> PauliString {
        let mut out = PauliString::identity(self.n(), self.d);
        for _ in 0..h {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// Exponent `c` in `Q P = omega^c P Q` for `P = self`, `Q = other`.
    pub fn commutation_exponent(&self, other: &PauliString) -> Result<u32> {
        self.check_compatible(other)?;
        let d = self.d as u64;
        let mut s: u64 = 0;
        for j in 0..self.n() {
            s += (self.x[j] as u64 * other.z[j] as u64) % d;
            s += d - (self.z[j] as u64 * other.x[j] as u64) % d;
        }
        Ok((s % d) as u32)
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        Ok(self.commutation_exponent(other)? == 0)
    }

    /// Action on a basis state given by `Z_d` digits: `P|v> = lambda |v'>`.
    pub fn apply_to_digits(&self, v: &[u32]) -> Result<(Vec<u32>, Phase)> {
        if v.len() != self.n() {
            return Err(Error::ShapeMismatch { expected: self.n(), found: v.len() });
        }
        let d = self.d;
        let m = 2 * d;
        let mut e = self.phase;
        let mut out = Vec::with_capacity(v.len());
        for j in 0..v.len() {
            if v[j] >= d {
                return Err(Error::InvalidValue { value: v[j] as i32, d });
            }
            e = (e + 2 * ((self.z[j] * v[j]) % d)) % m;
            out.push((v[j] + self.x[j]) % d);
        }
        Ok((out, Phase { exponent: e, d }))
    }

    /// Action on a configuration in API values (spins for `d = 2`).
    pub fn apply_to_basis(&self, v: &[i32]) -> Result<(Vec<i32>, Complex64)> {
        let digits = v.iter().map(|&s| value_to_digit(self.d, s)).collect::<Result<Vec<_>>>()?;
        let (out, phase) = self.apply_to_digits(&digits)?;
        Ok((out.into_iter().map(|g| digit_to_value(self.d, g)).collect(), phase.to_complex()))
    }

    /// Restrict to the qudits `keep` (in that order), preserving the sign.
    pub fn restrict(&self, keep: &[usize]) -> Result<PauliString> {
        let m = 2 * self.d;
        let mut x = Vec::with_capacity(keep.len());
        let mut z = Vec::with_capacity(keep.len());
        for &q in keep {
            if q >= self.n() {
                return Err(Error::IndexOutOfRange { index: q, n: self.n() });
            }
            x.push(self.x[q]);
            z.push(self.z[q]);
        }
        let weyl: u32 = x.iter().zip(&z).map(|(a, b)| (a * b) % m).sum::<u32>() % m;
        let phase = (self.sign_exponent() + weyl) % m;
        Ok(PauliString { d: self.d, x, z, phase })
    }

    /// Embed into `n` qudits, mapping local qudit `i` to `map[i]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> Result<PauliString> {
        if map.len() != self.n() {
            return Err(Error::ShapeMismatch { expected: self.n(), found: map.len() });
        }
        let mut out = PauliString::identity(n, self.d);
        for (i, &q) in map.iter().enumerate() {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            out.x[q] = self.x[i];
            out.z[q] = self.z[i];
        }
        out.phase = self.phase;
        Ok(out)
    }

    pub fn generator_type(&self) -> GeneratorType {
        let letters: BTreeSet<Letter> = (0..self.n()).filter_map(|j| self.letter(j)).collect();
        match letters.len() {
            0 => GeneratorType::Identity,
            1 => match letters.into_iter().next().unwrap() {
                Letter::X => GeneratorType::X,
                Letter::Y => GeneratorType::Y,
                Letter::Z => GeneratorType::Z,
            },
            _ => GeneratorType::Mixed,
        }
    }

    fn symplectic_row(&self) -> Vec<u32> {
        self.x.iter().chain(self.z.iter()).copied().collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 2 {
            let sign = match self.sign_exponent() {
                0 => "+",
                1 => "+i",
                2 => "-",
                _ => "-i",
            };
            write!(f, "{sign}")?;
            for j in 0..self.n() {
                let c = match self.letter(j) {
                    None => 'I',
                    Some(Letter::X) => 'X',
                    Some(Letter::Y) => 'Y',
                    Some(Letter::Z) => 'Z',
                };
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            write!(f, "tau^{}", self.phase)?;
            for j in 0..self.n() {
                if self.x[j] != 0 || self.z[j] != 0 {
                    write!(f, " [{j}:X^{}Z^{}]", self.x[j], self.z[j])?;
                }
            }
            Ok(())
        }
    }
}

/// Type of a single generator from the set of its factor letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorType {
    Identity,
    X,
    Y,
    Z,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupClass {
    #[serde(rename = "S_X")]
    SX,
    #[serde(rename = "S_Y")]
    SY,
    #[serde(rename = "S_Z")]
    SZ,
    #[serde(rename = "X+Z")]
    XZ,
    #[serde(rename = "Y+Z")]
    YZ,
    #[serde(rename = "X+Y")]
    XY,
    #[serde(rename = "MIXED")]
    Mixed,
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupClass::SX => "S_X",
            GroupClass::SY => "S_Y",
            GroupClass::SZ => "S_Z",
            GroupClass::XZ => "X⊔Z",
            GroupClass::YZ => "Y⊔Z",
            GroupClass::XY => "X⊔Y",
            GroupClass::Mixed => "MIXED",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    d: u32,
    generators: Vec<PauliString>,
    labels: Vec<String>,
}

impl StabilizerGroup {
    /// A commuting, independent generator list. Independence is checked for
    /// prime `d`; for composite `d` only commutation is enforced.
    pub fn new(n: usize, d: u32, generators: Vec<PauliString>, labels: Vec<String>) -> Result<Self> {
        let g = StabilizerGroup::from_terms(n, d, generators, labels)?;
        if is_prime(d) {
            g.check_independent()?;
        }
        Ok(g)
    }

    /// Commuting term list that may be overcomplete, e.g. every star and
    /// plaquette of a closed surface.
    pub fn from_terms(n: usize, d: u32, generators: Vec<PauliString>, labels: Vec<String>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let labels = if labels.is_empty() {
            (0..generators.len()).map(|i| format!("T_{}", i + 1)).collect()
        } else {
            labels
        };
        if labels.len() != generators.len() {
            return Err(Error::ShapeMismatch { expected: generators.len(), found: labels.len() });
        }
        for g in &generators {
            if g.n() != n || g.d() != d {
                return Err(Error::DimensionMismatch(n, d, g.n(), g.d()));
            }
        }
        for i in 0..generators.len() {
            for j in 0..i {
                if !generators[i].commutes(&generators[j])? {
                    return Err(Error::NonCommuting(j, i));
                }
            }
        }
        Ok(StabilizerGroup { n, d, generators, labels })
    }

    fn check_independent(&self) -> Result<()> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            rows.push(g.symplectic_row());
            if rank_mod(rows.clone(), self.d)? < rows.len() {
                return Err(Error::Dependent(i));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn len(&self) -> usize {
        self.generators.len()
    }
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn find(&self, label: &str) -> Option<&PauliString> {
        self.labels.iter().position(|l| l == label).map(|i| &self.generators[i])
    }

    pub fn classify(&self) -> GroupClass {
        classify_generators(&self.generators)
    }

    pub fn independent_rank(&self) -> Result<usize> {
        rank_mod(self.generators.iter().map(|g| g.symplectic_row()).collect(), self.d)
    }

    /// Logical qudit count `n - rank`.
    pub fn encoded(&self) -> Result<usize> {
        Ok(self.n - self.independent_rank()?)
    }

    /// Number of generators of type `filter` acting on each qudit.
    pub fn count_incidence(&self, filter: GeneratorType) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for g in self.generators.iter().filter(|g| g.generator_type() == filter) {
            for q in g.support() {
                counts[q] += 1;
            }
        }
        counts
    }

    /// Keep generators in order, dropping any that is a product of kept ones.
    pub fn independent_subset(&self) -> Result<StabilizerGroup> {
        let mut kept = Vec::new();
        let mut labels = Vec::new();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (g, l) in self.generators.iter().zip(&self.labels) {
            rows.push(g.symplectic_row());
            if rank_mod(rows.clone(), self.d)? == rows.len() {
                kept.push(g.clone());
                labels.push(l.clone());
            } else {
                rows.pop();
            }
        }
        Ok(StabilizerGroup { n: self.n, d: self.d, generators: kept, labels })
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            n: self.n,
            d: self.d,
            generators: self
                .generators
                .iter()
                .zip(&self.labels)
                .map(|(g, l)| GeneratorJson { x: g.x.clone(), z: g.z.clone(), phase: g.phase, label: l.clone() })
                .collect(),
        }
    }

    /// Load a group file; the list must commute but may be overcomplete.
    pub fn from_json(j: GroupJson) -> Result<Self> {
        let mut gens = Vec::new();
        let mut labels = Vec::new();
        for g in j.generators {
            if g.x.len() != j.n || g.z.len() != j.n {
                return Err(Error::ShapeMismatch { expected: j.n, found: g.x.len().max(g.z.len()) });
            }
            gens.push(PauliString::new(j.d, g.x, g.z, g.phase)?);
            labels.push(g.label);
        }
        StabilizerGroup::from_terms(j.n, j.d, gens, labels)
    }
}

pub fn classify_generators(gens: &[PauliString]) -> GroupClass {
    let types: BTreeSet<GeneratorType> =
        gens.iter().map(|g| g.generator_type()).filter(|t| *t != GeneratorType::Identity).collect();
    let has = |t| types.contains(&t);
    if has(GeneratorType::Mixed) || (has(GeneratorType::X) && has(GeneratorType::Y) && has(GeneratorType::Z)) {
        return GroupClass::Mixed;
    }
    match (has(GeneratorType::X), has(GeneratorType::Y), has(GeneratorType::Z)) {
        (true, true, false) => GroupClass::XY,
        (true, false, true) => GroupClass::XZ,
        (false, true, true) => GroupClass::YZ,
        (false, true, false) => GroupClass::SY,
        (false, false, true) => GroupClass::SZ,
        // an empty group stabilizes everything, including the uniform state
        _ => GroupClass::SX,
    }
}

fn inverse_mod(a: u32, d: u32) -> Option<u32> {
    (1..d).find(|&b| (a as u64 * b as u64) % d as u64 == 1)
}

/// Row rank over `Z_d` by Gaussian elimination with unit pivots.
pub fn rank_mod(mut rows: Vec<Vec<u32>>, d: u32) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    let cols = rows[0].len();
    let dd = d as u64;
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let unit = (r..rows.len()).find(|&i| inverse_mod(rows[i][c] % d, d).is_some());
        let Some(p) = unit else {
            if (r..rows.len()).any(|i| rows[i][c] % d != 0) {
                return Err(Error::CompositeRank(d));
            }
            continue;
        };
        rows.swap(r, p);
        let inv = inverse_mod(rows[r][c] % d, d).unwrap() as u64;
        for v in rows[r].iter_mut() {
            *v = ((*v as u64 * inv) % dd) as u32;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] % d == 0 {
                continue;
            }
            let f = row[c] as u64 % dd;
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v = ((*v as u64 + dd * dd - f * *pv as u64 % dd) % dd) as u32;
            }
        }
        r += 1;
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub x: Vec<u32>,
    pub z: Vec<u32>,
    pub phase: u32,
    #[serde(default)]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub n: usize,
    pub d: u32,
    pub generators: Vec<GeneratorJson>,
}

impl Serialize for StabilizerGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StabilizerGroup {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = GroupJson::deserialize(de)?;
        StabilizerGroup::from_json(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn anticommuting_single_site() {
        assert!(!p("XI").commutes(&p("ZI")).unwrap());
        assert!(p("ZZ").commutes(&p("XX")).unwrap());
    }

    #[test]
    fn qutrit_commutation_phase() {
        let x = PauliString::single(1, 3, 0, 1, 0).unwrap();
        let z = PauliString::single(1, 3, 0, 0, 1).unwrap();
        assert_eq!(x.commutation_exponent(&z).unwrap(), 1);
        // Z X = omega X Z
        let zx = z.mul(&x).unwrap();
        let xz = x.mul(&z).unwrap();
        let omega = PauliString::new(3, vec![0], vec![0], 2).unwrap();
        assert_eq!(zx, omega.mul(&xz).unwrap());
    }

    #[test]
    fn y_is_i_x_z() {
        let y = p("Y");
        assert_eq!((y.x()[0], y.z()[0], y.phase()), (1, 1, 1));
        assert_eq!(y.sign_exponent(), 0);
        assert_eq!(y.mul(&y).unwrap(), PauliString::identity(1, 2));
    }

    #[test]
    fn basis_action_examples() {
        let (v, l) = p("Z").apply_to_basis(&[-1]).unwrap();
        assert_eq!((v, l), (vec![-1], Complex64::new(-1.0, 0.0)));
        let (v, l) = p("Y").apply_to_basis(&[1]).unwrap();
        assert_eq!((v, l), (vec![-1], Complex64::new(0.0, 1.0)));
        let x3 = PauliString::single(1, 3, 0, 1, 0).unwrap();
        let (v, l) = x3.apply_to_basis(&[2]).unwrap();
        assert_eq!((v, l), (vec![0], Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn dimension_mismatch_is_error() {
        assert!(p("XX").commutes(&p("X")).is_err());
    }

    #[test]
    fn rank_examples() {
        let g = StabilizerGroup::from_terms(3, 2, vec![p("ZZI"), p("IZZ"), p("ZIZ")], vec![]).unwrap();
        assert_eq!(g.independent_rank().unwrap(), 2);
        assert!(StabilizerGroup::new(3, 2, vec![p("ZZI"), p("IZZ"), p("ZIZ")], vec![]).is_err());
        let e = StabilizerGroup::new(3, 2, vec![], vec![]).unwrap();
        assert_eq!(e.independent_rank().unwrap(), 0);
    }

    #[test]
    fn composite_rank_errors() {
        let g = PauliString::single(1, 4, 0, 2, 0).unwrap();
        let grp = StabilizerGroup::from_terms(1, 4, vec![g], vec![]).unwrap();
        assert!(matches!(grp.independent_rank(), Err(Error::CompositeRank(4))));
    }

    #[test]
    fn classification() {
        let q = p("YZZXZ");
        assert_eq!(classify_generators(&[q]), GroupClass::Mixed);
        assert_eq!(classify_generators(&[p("XX"), p("ZZ")]), GroupClass::XZ);
        assert_eq!(classify_generators(&[p("YY"), p("ZZ")]), GroupClass::YZ);
        assert_eq!(classify_generators(&[p("XX"), p("YY")]), GroupClass::XY);
        assert_eq!(classify_generators(&[p("XXI"), p("YYI"), p("IZZ")]), GroupClass::Mixed);
        assert_eq!(classify_generators(&[]), GroupClass::SX);
    }

    #[test]
    fn restrict_keeps_sign() {
        let q = p("XYZ");
        let r = q.restrict(&[1, 2]).unwrap();
        assert_eq!(r, p("YZ"));
        let minus = PauliString::new(2, vec![0, 0], vec![1, 1], 2).unwrap();
        assert_eq!(minus.restrict(&[0]).unwrap().sign_exponent(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = StabilizerGroup::new(2, 2, vec![p("XX"), p("ZZ")], vec!["A".into(), "B".into()]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"label\":\"A\""));
        let back: StabilizerGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
