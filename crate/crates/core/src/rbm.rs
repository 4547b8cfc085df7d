//! Complex restricted Boltzmann machine wavefunctions.
//!
//! `Psi(v) = exp(sum_i a_i v_i) * prod_j 2 cosh(b_j + sum_i W_ji v_i)`, left
//! unnormalized. Visible values are spins `+-1` for `d = 2` and digits
//! `0..d` otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::DenseState;
use crate::pauli::{digit_to_value, value_to_digit};

pub const RBM_VERSION: &str = "stabrbm-rbm-v1";

/// Default enumeration cap, in amplitudes.
pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct RbmState {
    n: usize,
    d: u32,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    /// Row-major `m x n`.
    pub w: Vec<Complex64>,
    pub hidden_labels: Vec<String>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `i * pi * num / den` exactly as stored parameters expect.
pub fn i_pi(num: f64, den: f64) -> Complex64 {
    c(0.0, PI * num / den)
}

#[inline]
fn two_cosh(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    c(2.0 * x.cosh() * y.cos(), 2.0 * x.sinh() * y.sin())
}

impl RbmState {
    /// `n` visible units and no hidden units, all biases zero.
    pub fn new(n: usize, d: u32) -> Self {
        RbmState { n, d, a: vec![Complex64::default(); n], b: vec![], w: vec![], hidden_labels: vec![] }
    }

    pub fn from_parts(n: usize, d: u32, a: Vec<Complex64>, b: Vec<Complex64>, w: Vec<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if a.len() != n {
            return Err(Error::ShapeMismatch { expected: n, found: a.len() });
        }
        if w.len() != b.len() * n {
            return Err(Error::ShapeMismatch { expected: b.len() * n, found: w.len() });
        }
        let m = b.len();
        Ok(RbmState { n, d, a, b, w, hidden_labels: vec![String::new(); m] })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.b.len()
    }
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn weight(&self, j: usize, i: usize) -> Complex64 {
        self.w[j * self.n + i]
    }

    pub fn weight_mut(&mut self, j: usize, i: usize) -> &mut Complex64 {
        &mut self.w[j * self.n + i]
    }

    /// Append a hidden unit with bias `b` and sparse weights.
    pub fn push_hidden(&mut self, b: Complex64, weights: &[(usize, Complex64)], label: impl Into<String>) -> Result<usize> {
        let mut row = vec![Complex64::default(); self.n];
        for &(i, w) in weights {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
            row[i] += w;
        }
        self.b.push(b);
        self.w.extend(row);
        self.hidden_labels.push(label.into());
        Ok(self.m() - 1)
    }

    /// Hidden pre-activations `theta_j = b_j + sum_i W_ji v_i`.
    pub fn thetas(&self, v: &[f64]) -> Vec<Complex64> {
        (0..self.m())
            .map(|j| {
                let row = &self.w[j * self.n..(j + 1) * self.n];
                row.iter().zip(v).fold(self.b[j], |acc, (w, x)| acc + w * x)
            })
            .collect()
    }

    fn check_config(&self, v: &[i32]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: v.len() });
        }
        for &x in v {
            value_to_digit(self.d, x)?;
        }
        Ok(v.iter().map(|&x| x as f64).collect())
    }

    pub fn amplitude(&self, v: &[i32]) -> Result<Complex64> {
        let v = self.check_config(v)?;
        Ok(self.amplitude_unchecked(&v))
    }

    pub(crate) fn amplitude_unchecked(&self, v: &[f64]) -> Complex64 {
        let lin: Complex64 = self.a.iter().zip(v).map(|(a, x)| a * x).sum();
        self.thetas(v).into_iter().fold(lin.exp(), |acc, t| acc * two_cosh(t))
    }

    /// Number of amplitudes `d^n`, or an error if above `cap`.
    pub fn dimension(&self, cap: u128) -> Result<usize> {
        state_dimension(self.n, self.d, cap)
    }

    /// Dense amplitudes by direct evaluation of every configuration.
    pub fn full_state_naive(&self, cap: u128) -> Result<DenseState> {
        let dim = self.dimension(cap)?;
        let amps = (0..dim)
            .into_par_iter()
            .map(|k| self.amplitude_unchecked(&index_values(k, self.n, self.d)))
            .collect();
        DenseState::new(self.n, self.d, amps)
    }

    /// Dense amplitudes enumerated in reflected Gray-code order, updating
    /// the hidden pre-activations incrementally. The index space is split
    /// into independent segments by the leading digits; each segment starts
    /// from a direct evaluation.
    pub fn full_state(&self, cap: u128) -> Result<DenseState> {
        let dim = self.dimension(cap)?;
        let mut lead = 0;
        while lead < self.n && (self.d as usize).pow(lead as u32 + 1) <= 256 && self.n - lead > 8 {
            lead += 1;
        }
        let seg = dim / (self.d as usize).pow(lead as u32);
        let mut amps = vec![Complex64::default(); dim];
        amps.par_chunks_mut(seg).enumerate().for_each(|(s, chunk)| self.gray_segment(s * seg, lead, chunk));
        DenseState::new(self.n, self.d, amps)
    }

    fn gray_segment(&self, start: usize, lead: usize, out: &mut [Complex64]) {
        let (n, d) = (self.n, self.d as usize);
        let free = n - lead;
        let mut digits = index_digits(start, n, self.d);
        let mut v: Vec<f64> = digits.iter().map(|&g| digit_to_value(self.d, g) as f64).collect();
        let mut theta = self.thetas(&v);
        let mut lin: Complex64 = self.a.iter().zip(&v).map(|(a, x)| a * x).sum();
        let mut dir = vec![1i64; free];
        let mut index = start;
        let eval = |lin: Complex64, theta: &[Complex64]| theta.iter().fold(lin.exp(), |acc, t| acc * two_cosh(*t));
        out[0] = eval(lin, &theta);
        let mut stride = vec![1usize; free];
        for p in 1..free {
            stride[p] = stride[p - 1] * d;
        }
        for k in 1..out.len() {
            // position (from least significant) that moves at step k
            let mut p = 0;
            let mut kk = k;
            while kk % d == 0 {
                kk /= d;
                p += 1;
            }
            let q = n - 1 - p;
            let old = digits[q] as i64;
            let new = old + dir[p];
            if new == 0 || new == d as i64 - 1 {
                dir[p] = -dir[p];
            }
            digits[q] = new as u32;
            index = (index as i64 + (new - old) * stride[p] as i64) as usize;
            let nv = digit_to_value(self.d, new as u32) as f64;
            let dv = nv - v[q];
            v[q] = nv;
            lin += self.a[q] * dv;
            for (j, t) in theta.iter_mut().enumerate() {
                *t += self.w[j * n + q] * dv;
            }
            out[index - start] = eval(lin, &theta);
        }
    }

    /// Embed parts into one machine: visible biases add, hidden units are
    /// stacked. `map[i]` is the global index of a part's visible unit `i`.
    pub fn compose(n: usize, parts: &[(&RbmState, &[usize])]) -> Result<RbmState> {
        let d = parts.first().map(|p| p.0.d).unwrap_or(2);
        let mut out = RbmState::new(n, d);
        for (part, map) in parts {
            if part.d != d {
                return Err(Error::DimensionMismatch(part.n, part.d, n, d));
            }
            if map.len() != part.n {
                return Err(Error::ShapeMismatch { expected: part.n, found: map.len() });
            }
            if let Some(&bad) = map.iter().find(|&&g| g >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            for (i, &g) in map.iter().enumerate() {
                out.a[g] += part.a[i];
            }
            for j in 0..part.m() {
                let weights: Vec<_> = map.iter().enumerate().map(|(i, &g)| (g, part.weight(j, i))).collect();
                out.push_hidden(part.b[j], &weights, part.hidden_labels[j].clone())?;
            }
        }
        Ok(out)
    }

    fn check_path(&self, path: &[usize]) -> Result<()> {
        if self.d != 2 {
            return Err(Error::Unsupported("string operators need qubits".into()));
        }
        match path.iter().find(|&&q| q >= self.n) {
            Some(&q) => Err(Error::IndexOutOfRange { index: q, n: self.n }),
            None => Ok(()),
        }
    }

    /// Multiply by `prod_{j in path} sigma_z^j`: one hidden unit per site
    /// with `b = -i pi/2`, `W = i pi/2`, giving the factor `2 v_j`.
    pub fn apply_string_z(&self, path: &[usize]) -> Result<RbmState> {
        self.check_path(path)?;
        let mut out = self.clone();
        for &q in path {
            out.push_hidden(i_pi(-1.0, 2.0), &[(q, i_pi(1.0, 2.0))], format!("Sz_{q}"))?;
        }
        Ok(out)
    }

    /// Multiply by `prod_{j in path} sigma_x^j` by negating every parameter
    /// attached to those visible units.
    pub fn apply_string_x(&self, path: &[usize]) -> Result<RbmState> {
        self.check_path(path)?;
        let mut out = self.clone();
        for &q in path {
            out.a[q] = -out.a[q];
            for j in 0..out.m() {
                let w = out.weight_mut(j, q);
                *w = -*w;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> RbmJson {
        RbmJson {
            version: RBM_VERSION.to_string(),
            n: self.n,
            m: self.m(),
            d: self.d,
            a: self.a.iter().map(|z| [z.re, z.im]).collect(),
            b: self.b.iter().map(|z| [z.re, z.im]).collect(),
            w: (0..self.m()).map(|j| (0..self.n).map(|i| [self.weight(j, i).re, self.weight(j, i).im]).collect()).collect(),
            hidden_labels: self.hidden_labels.clone(),
        }
    }

    pub fn from_json(j: RbmJson) -> Result<RbmState> {
        if j.version != RBM_VERSION {
            return Err(Error::Format(format!("unsupported RBM version {:?}, expected {RBM_VERSION:?}", j.version)));
        }
        if j.b.len() != j.m || j.w.len() != j.m {
            return Err(Error::ShapeMismatch { expected: j.m, found: j.b.len().min(j.w.len()) });
        }
        let mut w = Vec::with_capacity(j.m * j.n);
        for row in &j.w {
            if row.len() != j.n {
                return Err(Error::ShapeMismatch { expected: j.n, found: row.len() });
            }
            w.extend(row.iter().map(|p| c(p[0], p[1])));
        }
        let mut s = RbmState::from_parts(
            j.n,
            j.d,
            j.a.iter().map(|p| c(p[0], p[1])).collect(),
            j.b.iter().map(|p| c(p[0], p[1])).collect(),
            w,
        )?;
        if !j.hidden_labels.is_empty() {
            if j.hidden_labels.len() != j.m {
                return Err(Error::ShapeMismatch { expected: j.m, found: j.hidden_labels.len() });
            }
            s.hidden_labels = j.hidden_labels;
        }
        Ok(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data")
    }

    pub fn from_json_str(s: &str) -> Result<RbmState> {
        RbmState::from_json(serde_json::from_str(s)?)
    }
}

/// On-disk form; complex numbers are `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbmJson {
    pub version: String,
    pub n: usize,
    pub m: usize,
    pub d: u32,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    pub w: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub hidden_labels: Vec<String>,
}

pub fn state_dimension(n: usize, d: u32, cap: u128) -> Result<usize> {
    let mut required: u128 = 1;
    for _ in 0..n {
        required = required.saturating_mul(d as u128);
    }
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(required as usize)
}

/// Digits of basis index `k`, qudit 0 most significant.
pub fn index_digits(mut k: usize, n: usize, d: u32) -> Vec<u32> {
    let mut out = vec![0; n];
    for q in (0..n).rev() {
        out[q] = (k % d as usize) as u32;
        k /= d as usize;
    }
    out
}

pub fn index_values(k: usize, n: usize, d: u32) -> Vec<f64> {
    index_digits(k, n, d).into_iter().map(|g| digit_to_value(d, g) as f64).collect()
}

/// Visits every `n`-digit base-`d` word so that consecutive words differ in
/// one digit by `+-1`. Yields `(qudit, new_digit)` for each move.
pub struct GrayCode {
    n: usize,
    d: u32,
    digits: Vec<u32>,
    dir: Vec<i64>,
    step: u128,
    total: u128,
}

impl GrayCode {
    pub fn new(n: usize, d: u32) -> Self {
        GrayCode { n, d, digits: vec![0; n], dir: vec![1; n], step: 0, total: (d as u128).pow(n as u32) }
    }
}

impl Iterator for GrayCode {
    type Item = (usize, u32);

    fn next(&mut self) -> Option<Self::Item> {
        self.step += 1;
        if self.step >= self.total {
            return None;
        }
        let mut p = 0;
        let mut k = self.step;
        while k % self.d as u128 == 0 {
            k /= self.d as u128;
            p += 1;
        }
        let q = self.n - 1 - p;
        let new = self.digits[q] as i64 + self.dir[p];
        if new == 0 || new == self.d as i64 - 1 {
            self.dir[p] = -self.dir[p];
        }
        self.digits[q] = new as u32;
        Some((q, new as u32))
    }
}
