//! Fitting a dense complex RBM to a target state by maximizing fidelity.
//!
//! The loss is `1 - F` with `F = |<t|Psi>|^2 / (<t|t><Psi|Psi>)`, minimized
//! over the real and imaginary parts of every parameter with L-BFGS. The
//! reported distance is `arccos sqrt(F)`.

use std::sync::{Arc, Mutex};

use argmin::core::observers::{Observe, ObserverMode};
use argmin::core::{CostFunction, Executor, Gradient, IterState, State, KV};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::lattice::{twist_subsystem, LatticeCode};
use crate::oracle::{distance_from_fidelity, subsystem_state, DenseState, Subsystem};
use crate::pauli::{GeneratorType, StabilizerGroup};
use crate::rbm::RbmState;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub max_iterations: u64,
    pub restarts: usize,
    pub rng_seed: u64,
    /// Standard deviation of the real and imaginary parts at init.
    pub init_scale: f64,
    /// Stop once the distance is below this.
    pub convergence_tol: f64,
    pub gradient_tol: f64,
    pub gradient_check: bool,
    /// Defaults to the number of visible units.
    pub hidden_count: Option<usize>,
    pub memory: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 5000,
            restarts: 8,
            rng_seed: 0,
            init_scale: 0.5,
            convergence_tol: 1e-4,
            gradient_tol: 1e-9,
            gradient_check: false,
            hidden_count: None,
            memory: 10,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iterations > 0
            && self.restarts >= 1
            && self.init_scale > 0.0
            && self.convergence_tol > 0.0
            && self.gradient_tol >= 0.0
            && self.memory > 0
            && self.hidden_count != Some(0);
        if ok {
            Ok(())
        } else {
            Err(Error::Format(format!("invalid optimizer config {self:?}")))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParameterNorms {
    pub a: f64,
    pub b: f64,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub index: usize,
    pub initial_distance: f64,
    pub final_distance: f64,
    pub iterations: u64,
    pub termination: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub restart: usize,
    pub iteration: u64,
    pub distance: f64,
    pub best_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub final_distance: f64,
    pub final_fidelity: f64,
    pub iterations_used: u64,
    pub restart_index: usize,
    pub gradient_check_max_rel_err: Option<f64>,
    pub parameter_norms: ParameterNorms,
    pub restarts: Vec<RestartSummary>,
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
}

impl FitReport {
    /// CSV with a header line; `best_distance` never increases within a
    /// restart.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("restart,iteration,distance,best_distance\n");
        for p in &self.trace {
            out.push_str(&format!("{},{},{:e},{:e}\n", p.restart, p.iteration, p.distance, p.best_distance));
        }
        out
    }
}

/// Normalized target amplitudes over `s` qubits plus the RBM shape.
#[derive(Clone, Debug)]
pub struct FitProblem {
    n: usize,
    m: usize,
    target: Vec<Complex64>,
}

#[cfg(test)]
fn log_two_cosh(z: Complex64) -> Complex64 {
    // log(2 cosh z) = s + log(1 + exp(-2s)) with s = +-z, Re s >= 0
    let s = if z.re >= 0.0 { z } else { -z };
    s + (Complex64::new(1.0, 0.0) + (-2.0 * s).exp()).ln()
}

/// `(log 2cosh z, tanh z)` sharing one exponential.
#[inline]
fn log_cosh_tanh(z: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let (s, sign) = if z.re >= 0.0 { (z, 1.0) } else { (-z, -1.0) };
    let e = (-2.0 * s).exp();
    ((one + e).ln() + s, (one - e) / (one + e) * sign)
}

/// Complex parameters unpacked from the real vector.
struct Params {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    w: Vec<Complex64>,
}

/// Hidden pre-activations and visible sums split over the high and low
/// halves of the configuration index, so each configuration costs `O(m)`.
struct Tables {
    low_bits: usize,
    /// `[kh * (m + 1) + j]`, entry `m` is the visible sum.
    hi: Vec<Complex64>,
    lo: Vec<Complex64>,
}

/// Amplitudes normalized to their largest modulus, with tanh of every
/// pre-activation when it is cheap to keep.
struct Evaluation {
    psi: Vec<Complex64>,
    tanh: Option<Vec<Complex64>>,
}

const TANH_CACHE: usize = 1 << 24;

impl FitProblem {
    pub fn new(target: &DenseState, hidden: usize) -> Result<Self> {
        if target.d() != 2 {
            return Err(Error::Unsupported("fitting needs qubits".into()));
        }
        if target.n() > 20 {
            return Err(Error::CapExceeded { required: 1u128 << target.n(), cap: 1 << 20 });
        }
        let t = target.normalized()?;
        Ok(FitProblem { n: target.n(), m: hidden, target: t.into_amplitudes() })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }

    /// Length of the real parameter vector, `2 (n + m + m n)`.
    pub fn dim(&self) -> usize {
        2 * (self.n + self.m + self.m * self.n)
    }

    /// Parameters are stored `[a, b, W]`, each complex entry as `(re, im)`.
    pub fn to_rbm(&self, x: &[f64]) -> RbmState {
        let p = self.unpack(x);
        RbmState::from_parts(self.n, 2, p.a, p.b, p.w).expect("shapes follow from the problem")
    }

    pub fn from_rbm(rbm: &RbmState) -> Vec<f64> {
        rbm.a.iter().chain(&rbm.b).chain(&rbm.w).flat_map(|z| [z.re, z.im]).collect()
    }

    fn unpack(&self, x: &[f64]) -> Params {
        let c = |k: usize| Complex64::new(x[2 * k], x[2 * k + 1]);
        let (n, m) = (self.n, self.m);
        Params {
            a: (0..n).map(c).collect(),
            b: (n..n + m).map(c).collect(),
            w: (n + m..n + m + m * n).map(c).collect(),
        }
    }

    #[inline]
    fn spin(&self, k: usize, q: usize) -> f64 {
        if (k >> (self.n - 1 - q)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn tables(&self, p: &Params) -> Tables {
        let (n, m) = (self.n, self.m);
        let low_bits = n / 2;
        let width = m + 1;
        let half = |qs: std::ops::Range<usize>, count: usize, shift: usize, with_bias: bool| {
            let mut out = vec![Complex64::default(); count * width];
            for k in 0..count {
                let row = &mut out[k * width..(k + 1) * width];
                if with_bias {
                    row[..m].copy_from_slice(&p.b);
                }
                for q in qs.clone() {
                    let v = self.spin(k << shift, q);
                    for j in 0..m {
                        row[j] += p.w[j * n + q] * v;
                    }
                    row[m] += p.a[q] * v;
                }
            }
            out
        };
        Tables {
            low_bits,
            hi: half(0..n - low_bits, 1 << (n - low_bits), low_bits, true),
            lo: half(n - low_bits..n, 1 << low_bits, 0, false),
        }
    }

    fn evaluate(&self, p: &Params, want_tanh: bool) -> Result<Evaluation> {
        let m = self.m;
        let t = self.tables(p);
        let width = m + 1;
        let mask = (1usize << t.low_bits) - 1;
        let dim = self.target.len();
        let keep = want_tanh && dim * m <= TANH_CACHE;
        let mut tanh = if keep { vec![Complex64::default(); dim * m] } else { vec![] };
        let mut logs = Vec::with_capacity(dim);
        for k in 0..dim {
            let hi = &t.hi[(k >> t.low_bits) * width..][..width];
            let lo = &t.lo[(k & mask) * width..][..width];
            let mut la = hi[m] + lo[m];
            for j in 0..m {
                let (lc, th) = log_cosh_tanh(hi[j] + lo[j]);
                la += lc;
                if keep {
                    tanh[k * m + j] = th;
                }
            }
            logs.push(la);
        }
        let shift = logs.iter().map(|l| l.re).filter(|r| r.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        if !shift.is_finite() || logs.iter().any(|l| l.re.is_nan() || l.im.is_nan()) {
            return Err(Error::NonFinite);
        }
        let psi = logs.into_iter().map(|l| (l - shift).exp()).collect();
        Ok(Evaluation { psi, tanh: keep.then_some(tanh) })
    }

    fn overlap_terms(&self, psi: &[Complex64]) -> (Complex64, f64) {
        let s: Complex64 = self.target.iter().zip(psi).map(|(t, p)| t.conj() * p).sum();
        let norm: f64 = psi.iter().map(|p| p.norm_sqr()).sum();
        (s, norm)
    }

    pub fn fidelity(&self, x: &[f64]) -> Result<f64> {
        let e = self.evaluate(&self.unpack(x), false)?;
        let (s, norm) = self.overlap_terms(&e.psi);
        Ok((s.norm_sqr() / norm).clamp(0.0, 1.0))
    }

    /// `(1 - F, d(1 - F)/dx)`.
    pub fn loss_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        if x.len() != self.dim() {
            return Err(Error::ShapeMismatch { expected: self.dim(), found: x.len() });
        }
        let (n, m) = (self.n, self.m);
        let p = self.unpack(x);
        let e = self.evaluate(&p, true)?;
        let (s, norm) = self.overlap_terms(&e.psi);
        let s2 = s.norm_sqr();
        let f = (s2 / norm).clamp(0.0, 1.0);
        let mut grad = vec![0.0; x.len()];
        if s2 == 0.0 {
            return Ok((1.0 - f, grad));
        }
        // G_p = sum_k w_k O_p(k) with O_p = d log Psi / dp
        let mut g = vec![Complex64::default(); n + m + m * n];
        let recompute = if e.tanh.is_none() { Some(self.tables(&p)) } else { None };
        let mut th = vec![Complex64::default(); m];
        let cs = s.conj() / s2;
        for (k, psi) in e.psi.iter().enumerate() {
            let wk = cs * self.target[k].conj() * psi - psi.norm_sqr() / norm;
            if wk == Complex64::default() {
                continue;
            }
            match (&e.tanh, &recompute) {
                (Some(cache), _) => th.copy_from_slice(&cache[k * m..(k + 1) * m]),
                (None, Some(t)) => {
                    let width = m + 1;
                    let hi = &t.hi[(k >> t.low_bits) * width..][..width];
                    let lo = &t.lo[(k & ((1 << t.low_bits) - 1)) * width..][..width];
                    for j in 0..m {
                        th[j] = (hi[j] + lo[j]).tanh();
                    }
                }
                _ => unreachable!(),
            }
            for q in 0..n {
                let v = self.spin(k, q);
                g[q] += wk * v;
            }
            for j in 0..m {
                let c = wk * th[j];
                g[n + j] += c;
                let row = &mut g[n + m + j * n..n + m + (j + 1) * n];
                for (q, r) in row.iter_mut().enumerate() {
                    if (k >> (n - 1 - q)) & 1 == 0 {
                        *r += c;
                    } else {
                        *r -= c;
                    }
                }
            }
        }
        for (i, gp) in g.iter().enumerate() {
            grad[2 * i] = -2.0 * f * gp.re;
            grad[2 * i + 1] = 2.0 * f * gp.im;
        }
        if !grad.iter().all(|g| g.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok((1.0 - f, grad))
    }

    /// Largest relative deviation of the analytic gradient from central
    /// differences with step `h`.
    pub fn gradient_check(&self, x: &[f64], h: f64) -> Result<f64> {
        let (_, g) = self.loss_and_gradient(x)?;
        let mut worst: f64 = 0.0;
        let mut y = x.to_vec();
        for p in 0..x.len() {
            y[p] = x[p] + h;
            let up = 1.0 - self.fidelity(&y)?;
            y[p] = x[p] - h;
            let down = 1.0 - self.fidelity(&y)?;
            y[p] = x[p];
            let fd = (up - down) / (2.0 * h);
            let denom = g[p].abs().max(fd.abs()).max(1e-6);
            worst = worst.max((g[p] - fd).abs() / denom);
        }
        Ok(worst)
    }

    pub fn random_init(&self, scale: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, scale).expect("positive scale");
        (0..self.dim()).map(|_| normal.sample(&mut rng)).collect()
    }
}

/// Line searches ask for the cost and then the gradient at the same point,
/// so the last evaluation is kept.
struct Cost<'a> {
    problem: &'a FitProblem,
    last: Mutex<Option<(Vec<f64>, f64, Vec<f64>)>>,
}

impl Cost<'_> {
    fn eval(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut last = self.last.lock().unwrap();
        if let Some((px, c, g)) = last.as_ref() {
            if px.as_slice() == x {
                return Ok((*c, g.clone()));
            }
        }
        let (c, g) = self.problem.loss_and_gradient(x)?;
        *last = Some((x.to_vec(), c, g.clone()));
        Ok((c, g))
    }
}

impl CostFunction for Cost<'_> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(x)?.0)
    }
}

impl Gradient for Cost<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;
    fn gradient(&self, x: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        Ok(self.eval(x)?.1)
    }
}

type LState = IterState<Vec<f64>, Vec<f64>, (), (), (), f64>;

struct Recorder {
    restart: usize,
    points: Arc<Mutex<Vec<TracePoint>>>,
    best: Arc<Mutex<Option<Vec<f64>>>>,
}

impl Observe<LState> for Recorder {
    fn observe_iter(&mut self, state: &LState, _kv: &KV) -> std::result::Result<(), argmin::core::Error> {
        let mut pts = self.points.lock().unwrap();
        let best_prev = pts.last().map(|p| p.best_distance).unwrap_or(f64::INFINITY);
        let distance = distance_from_fidelity(1.0 - state.get_cost());
        pts.push(TracePoint {
            restart: self.restart,
            iteration: state.get_iter(),
            distance,
            best_distance: best_prev.min(distance),
        });
        if let Some(p) = state.get_best_param() {
            *self.best.lock().unwrap() = Some(p.clone());
        }
        Ok(())
    }
}

struct RestartOutcome {
    summary: RestartSummary,
    params: Vec<f64>,
    trace: Vec<TracePoint>,
}

fn run_restart(problem: &FitProblem, cfg: &OptimizerConfig, index: usize) -> Result<RestartOutcome> {
    let x0 = problem.random_init(cfg.init_scale, cfg.rng_seed.wrapping_add(index as u64));
    let initial_distance = distance_from_fidelity(problem.fidelity(&x0)?);
    let points = Arc::new(Mutex::new(Vec::new()));
    let best = Arc::new(Mutex::new(None));
    let solver = LBFGS::new(MoreThuenteLineSearch::new(), cfg.memory)
        .with_tolerance_grad(cfg.gradient_tol)
        .and_then(|s| s.with_tolerance_cost(0.0))
        .map_err(|e| Error::Internal(e.to_string()))?;
    let target_cost = cfg.convergence_tol.sin().powi(2);
    let run = Executor::new(Cost { problem, last: Mutex::new(None) }, solver)
        .configure(|state| state.param(x0.clone()).max_iters(cfg.max_iterations).target_cost(target_cost))
        .add_observer(Recorder { restart: index, points: points.clone(), best: best.clone() }, ObserverMode::Always)
        .run();
    let trace = std::mem::take(&mut *points.lock().unwrap());
    let (params, iterations, termination) = match run {
        Ok(res) => {
            let state = res.state();
            let best = state.get_best_param().cloned().unwrap_or(x0.clone());
            (best, state.get_iter(), state.get_termination_status().to_string())
        }
        Err(e) => {
            // a failed line search still leaves the best point seen so far
            let seen = best.lock().unwrap().take();
            match seen {
                Some(p) => (p, trace.len() as u64, format!("aborted: {e}")),
                None if e.to_string().contains("non-finite") => return Err(Error::NonFinite),
                None => (x0.clone(), 0, format!("aborted: {e}")),
            }
        }
    };
    let final_distance = distance_from_fidelity(problem.fidelity(&params)?);
    Ok(RestartOutcome {
        summary: RestartSummary { index, initial_distance, final_distance, iterations, termination },
        params,
        trace,
    })
}

fn norms(rbm: &RbmState) -> ParameterNorms {
    let l2 = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ParameterNorms { a: l2(&rbm.a), b: l2(&rbm.b), w: l2(&rbm.w) }
}

/// Fit a fully connected RBM to `target`, keeping the best of
/// `cfg.restarts` independent L-BFGS runs. Restart `r` is seeded with
/// `rng_seed + r`.
pub fn fit_subsystem(target: &DenseState, cfg: &OptimizerConfig) -> Result<(RbmState, FitReport)> {
    cfg.validate()?;
    let hidden = cfg.hidden_count.unwrap_or(target.n());
    let problem = FitProblem::new(target, hidden)?;
    let gradient_check_max_rel_err = if cfg.gradient_check {
        Some(problem.gradient_check(&problem.random_init(cfg.init_scale, cfg.rng_seed), 1e-5)?)
    } else {
        None
    };
    let outcomes: Vec<Result<RestartOutcome>> =
        (0..cfg.restarts).into_par_iter().map(|r| run_restart(&problem, cfg, r)).collect();
    let mut finished = Vec::new();
    for o in outcomes {
        match o {
            Ok(o) => finished.push(o),
            Err(Error::NonFinite) => {}
            Err(e) => return Err(e),
        }
    }
    if finished.is_empty() {
        return Err(Error::NonFinite);
    }
    let best = finished
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.summary.final_distance.total_cmp(&b.1.summary.final_distance).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap();
    let rbm = problem.to_rbm(&finished[best].params);
    let final_fidelity = problem.fidelity(&finished[best].params)?;
    let s = &finished[best].summary;
    let report = FitReport {
        final_distance: distance_from_fidelity(final_fidelity),
        final_fidelity,
        iterations_used: s.iterations,
        restart_index: s.index,
        gradient_check_max_rel_err,
        parameter_norms: norms(&rbm),
        restarts: finished.iter().map(|o| o.summary.clone()).collect(),
        trace: finished.iter().flat_map(|o| o.trace.iter().cloned()).collect(),
    };
    let stalled = report.final_distance > cfg.convergence_tol
        && finished.iter().all(|o| o.summary.final_distance > o.summary.initial_distance - 0.01);
    if stalled {
        return Err(Error::Stalled(Box::new(report)));
    }
    Ok((rbm, report))
}

#[derive(Clone, Debug)]
pub struct TwistFit {
    pub rbm: RbmState,
    pub report: FitReport,
    pub subsystem: Subsystem,
    pub residual: StabilizerGroup,
}

/// The twist subsystem state: mixed generators plus the `X` checks that
/// touch them, restricted to their joint support. Errors unless the
/// restricted group pins down a single state.
pub fn twist_target(group: &StabilizerGroup, cap: u128) -> Result<Subsystem> {
    let (spins, stabs) = twist_subsystem(group)?;
    let sub = subsystem_state(group, &spins, &stabs, cap)?;
    if sub.free > 0 {
        return Err(Error::SubsystemDimension { spins: spins.len(), rank: sub.rank, free: sub.free });
    }
    Ok(sub)
}

/// Fit the twist subsystem, build the remaining generators analytically
/// and multiply the two.
pub fn fit_twist_group(g: &StabilizerGroup, cfg: &OptimizerConfig, cap: u128) -> Result<TwistFit> {
    let subsystem = twist_target(g, cap)?;
    let (fitted, report) = fit_subsystem(&subsystem.state, cfg)?;
    let keep: Vec<usize> = (0..g.len()).filter(|&j| g.generators()[j].generator_type() != GeneratorType::Mixed).collect();
    let residual = StabilizerGroup::from_terms(
        g.n(),
        g.d(),
        keep.iter().map(|&j| g.generators()[j].clone()).collect(),
        keep.iter().map(|&j| g.labels()[j].clone()).collect(),
    )?;
    let (res_rbm, _) = analytic::construct(&residual)?;
    let all: Vec<usize> = (0..g.n()).collect();
    let rbm = RbmState::compose(g.n(), &[(&fitted, &subsystem.spins), (&res_rbm, &all)])?;
    Ok(TwistFit { rbm, report, subsystem, residual })
}

pub fn fit_twist_lattice(code: &LatticeCode, cfg: &OptimizerConfig, cap: u128) -> Result<TwistFit> {
    fit_twist_group(&code.group, cfg, cap)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> DenseState {
        DenseState::new(n, 2, vec![Complex64::new(1.0, 0.0); 1 << n]).unwrap()
    }

    #[test]
    fn zero_parameters_fit_uniform() {
        let p = FitProblem::new(&uniform(3), 3).unwrap();
        let (loss, grad) = p.loss_and_gradient(&vec![0.0; p.dim()]).unwrap();
        assert!(loss.abs() < 1e-15);
        assert!(grad.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn uniform_target_converges() {
        let cfg = OptimizerConfig { restarts: 2, ..Default::default() };
        let (_, report) = fit_subsystem(&uniform(4), &cfg).unwrap();
        assert!(report.final_distance < 1e-4, "{report:?}");
    }

    #[test]
    fn basis_target_converges() {
        let t = DenseState::basis(4, 2, 0, 1 << 10).unwrap();
        let cfg = OptimizerConfig { restarts: 2, ..Default::default() };
        let (_, report) = fit_subsystem(&t, &cfg).unwrap();
        assert!(report.final_distance < 1e-4, "{report:?}");
        assert!((report.final_fidelity - report.final_distance.cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let t = DenseState::new(
            4,
            2,
            (0..16).map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())).collect(),
        )
        .unwrap();
        let p = FitProblem::new(&t, 3).unwrap();
        let x = p.random_init(0.3, 7);
        assert!(p.gradient_check(&x, 1e-5).unwrap() < 1e-5);
    }

    #[test]
    fn uncached_gradient_path_agrees() {
        let t = DenseState::new(3, 2, (0..8).map(|k| Complex64::new(1.0 + k as f64, -0.5 * k as f64)).collect()).unwrap();
        let p = FitProblem::new(&t, 2).unwrap();
        let x = p.random_init(0.4, 3);
        let params = p.unpack(&x);
        let with = p.evaluate(&params, true).unwrap();
        let without = p.evaluate(&params, false).unwrap();
        assert_eq!(with.psi, without.psi);
        let rbm = p.to_rbm(&x);
        let direct = rbm.full_state_naive(1 << 10).unwrap();
        let ours = DenseState::new(3, 2, with.psi).unwrap();
        assert!(crate::oracle::fidelity(&direct, &ours).unwrap() > 1.0 - 1e-13);
    }

    #[test]
    fn log_two_cosh_is_stable() {
        let z = Complex64::new(800.0, 0.3);
        let l = log_two_cosh(z);
        assert!((l - z).norm() < 1e-12);
        let small = Complex64::new(0.2, -0.4);
        assert!((log_two_cosh(small) - (2.0 * small.cosh()).ln()).norm() < 1e-14);
    }
}
