//! Optimal covariant cloners by semidefinite programming.
//!
//! The feasible set is `{c00 ≥ 0, B ⪰ 0, c00 + c11 + c22 + c33 = 1}` where `B`
//! is the 3×3 block of the family. The single-copy fidelity is linear in the
//! seven parameters, so each problem is a tiny SDP. It is solved with a
//! log-barrier path-following method: the equality (and optional symmetry)
//! constraints are eliminated by an affine parametrization, each centering
//! step is a damped Newton iteration, and the barrier parameter shrinks by a
//! constant factor until it falls below the target.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{
    choi_for_variant, family_matrix_for_variant, fidelity_functional, ChannelError, ChoiOperator, CloneSlot,
    CovariantParams, PureQubit, Variant,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("angle xi = {0} outside [0, pi/2]")]
    Domain(f64),

    #[error("starting point is not strictly feasible")]
    Infeasible,

    #[error("barrier method did not converge within {iterations} Newton steps (best objective {best_objective})")]
    NonConvergence {
        iterations: usize,
        best_objective: f64,
        best_params: CovariantParams,
    },

    #[error(transparent)]
    Channel(#[from] ChannelError),
}

pub type Result<T> = std::result::Result<T, OptimizerError>;

/// Weighted set of pure input states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(PureQubit, f64)>,
}

impl Ensemble {
    pub fn new(members: Vec<(PureQubit, f64)>) -> Result<Self> {
        if members.is_empty() {
            return Err(OptimizerError::InvalidEnsemble("no members".into()));
        }
        if let Some((_, w)) = members.iter().find(|(_, w)| !(*w > 0.0)) {
            return Err(OptimizerError::InvalidEnsemble(format!("non-positive weight {w}")));
        }
        let total: f64 = members.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(OptimizerError::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn singleton(q: PureQubit) -> Self {
        Self {
            members: vec![(q, 1.0)],
        }
    }

    pub fn uniform(states: &[PureQubit]) -> Result<Self> {
        let w = 1.0 / states.len() as f64;
        Self::new(states.iter().map(|&q| (q, w)).collect())
    }

    pub fn members(&self) -> &[(PureQubit, f64)] {
        &self.members
    }
}

/// Linear functional `Σ gᵢ cᵢ` over `(c00, c11, c22, c33, c24, Re c12, Im c12)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearForm(pub [f64; 7]);

impl LinearForm {
    pub fn evaluate(&self, p: &CovariantParams) -> f64 {
        self.0.iter().zip(p.to_array()).map(|(g, c)| g * c).sum()
    }

    fn average(&self, other: &Self) -> Self {
        let mut g = [0.0; 7];
        for (k, slot) in g.iter_mut().enumerate() {
            *slot = 0.5 * (self.0[k] + other.0[k]);
        }
        Self(g)
    }
}

/// Ensemble-averaged fidelity of `slot` as a linear form on the family.
pub fn objective_coefficients(e: &Ensemble, variant: Variant, slot: CloneSlot) -> LinearForm {
    let mut g = [0.0; 7];
    for (k, gk) in g.iter_mut().enumerate() {
        let r = family_matrix_for_variant(&CovariantParams::unit(k), variant);
        *gk = e
            .members
            .iter()
            .map(|(q, w)| w * fidelity_functional(&r, q, variant, slot))
            .sum();
    }
    LinearForm(g)
}

/// Mean of the two clones' fidelities; the objective of the symmetric cloner.
pub fn symmetric_objective(e: &Ensemble, variant: Variant) -> LinearForm {
    objective_coefficients(e, variant, CloneSlot::First).average(&objective_coefficients(e, variant, CloneSlot::Second))
}

/// Optional extra linear constraints on the family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryFlags {
    /// Output-swap invariance: `c22 = c33`.
    pub output_swap: bool,
    /// Invariance of the operator under transposition of the input slot: `c12 = 0`.
    pub input_transpose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Stop once the barrier parameter is at or below this value.
    pub mu_final: f64,
    /// Barrier parameter reduction per outer iteration.
    pub reduction: f64,
    /// Cap on Newton steps summed over all centerings.
    pub max_newton_steps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            mu_final: 1e-10,
            reduction: 10.0,
            max_newton_steps: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpResult {
    pub optimum: f64,
    pub params: CovariantParams,
    /// Duality-gap bound `ν·μ` of the last centered point.
    pub gap: f64,
    /// Newton steps over all centerings.
    pub iterations: usize,
    pub constraint_flags: SymmetryFlags,
    /// Objective at each centered point, in order of decreasing barrier parameter.
    pub history: Vec<f64>,
}

impl SdpResult {
    /// Operator of the optimal map in the form used by `variant`.
    pub fn choi(&self, variant: Variant) -> Result<ChoiOperator> {
        Ok(choi_for_variant(&self.params, variant)?)
    }
}

/// Maximizes the mean single-copy fidelity over `e` within the covariant family.
pub fn optimize_fidelity(e: &Ensemble, variant: Variant, flags: SymmetryFlags) -> Result<SdpResult> {
    maximize_linear(&symmetric_objective(e, variant), flags, &SolverSettings::default())
}

/// Affine map `x = offset + Σ yⱼ columnⱼ` from free coordinates to the 7 parameters.
struct Parametrization {
    offset: [f64; 7],
    columns: Vec<[f64; 7]>,
    start: Vec<f64>,
}

const C00: usize = 0;
const C11: usize = 1;
const C22: usize = 2;
const C33: usize = 3;
const C24: usize = 4;
const C12A: usize = 5;
const C12B: usize = 6;

fn unit(k: usize) -> [f64; 7] {
    let mut e = [0.0; 7];
    e[k] = 1.0;
    e
}

fn combo(terms: &[(usize, f64)]) -> [f64; 7] {
    let mut e = [0.0; 7];
    for &(k, w) in terms {
        e[k] += w;
    }
    e
}

impl Parametrization {
    fn new(flags: SymmetryFlags) -> Self {
        let mut columns = Vec::new();
        let mut start = Vec::new();
        let offset;
        if flags.output_swap {
            // c33 = c22, c11 = 1 − c00 − 2 c22
            offset = unit(C11);
            columns.push(combo(&[(C00, 1.0), (C11, -1.0)]));
            columns.push(combo(&[(C22, 1.0), (C33, 1.0), (C11, -2.0)]));
            start.extend([0.25, 0.25]);
        } else {
            // c33 = 1 − c00 − c11 − c22
            offset = unit(C33);
            for k in [C00, C11, C22] {
                columns.push(combo(&[(k, 1.0), (C33, -1.0)]));
                start.push(0.25);
            }
        }
        columns.push(unit(C24));
        start.push(0.0);
        if !flags.input_transpose {
            columns.push(unit(C12A));
            columns.push(unit(C12B));
            start.extend([0.0, 0.0]);
        }
        Self { offset, columns, start }
    }

    fn dim(&self) -> usize {
        self.columns.len()
    }

    fn point(&self, y: &[f64]) -> [f64; 7] {
        let mut x = self.offset;
        for (col, &yj) in self.columns.iter().zip(y) {
            for k in 0..7 {
                x[k] += yj * col[k];
            }
        }
        x
    }

    /// `Nᵀ v`.
    fn pull_back(&self, v: &[f64; 7]) -> Vec<f64> {
        self.columns
            .iter()
            .map(|col| col.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Nᵀ H N`.
    fn pull_back_hessian(&self, h: &[[f64; 7]; 7]) -> Vec<Vec<f64>> {
        let m = self.dim();
        let mut out = vec![vec![0.0; m]; m];
        for (i, ci) in self.columns.iter().enumerate() {
            for (j, cj) in self.columns.iter().enumerate() {
                let mut s = 0.0;
                for a in 0..7 {
                    if ci[a] == 0.0 {
                        continue;
                    }
                    for b in 0..7 {
                        s += ci[a] * h[a][b] * cj[b];
                    }
                }
                out[i][j] = s;
            }
        }
        out
    }
}

/// Squared Newton decrement at which a centering step is considered done.
const NEWTON_TOL: f64 = 1e-12;

/// Barrier parameter ν: one scalar cone plus a 3×3 semidefinite cone.
const BARRIER_DEGREE: f64 = 4.0;

/// Derivative of the block `B` with respect to parameter `k` (zero for `c00`).
fn block_derivative(k: usize) -> [[Complex64; 3]; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut h = [[z; 3]; 3];
    match k {
        C11 => h[0][0] = one,
        C22 => h[1][1] = one,
        C33 => h[2][2] = one,
        C24 => {
            h[1][2] = one;
            h[2][1] = one;
        }
        C12A => {
            h[0][1] = one;
            h[0][2] = one;
            h[1][0] = one;
            h[2][0] = one;
        }
        C12B => {
            h[0][1] = i;
            h[0][2] = i;
            h[1][0] = -i;
            h[2][0] = -i;
        }
        _ => {}
    }
    h
}

type Mat3 = [[Complex64; 3]; 3];

fn block_of(x: &[f64; 7]) -> Mat3 {
    let r = |v: f64| Complex64::new(v, 0.0);
    let c12 = Complex64::new(x[C12A], x[C12B]);
    [
        [r(x[C11]), c12, c12],
        [c12.conj(), r(x[C22]), r(x[C24])],
        [c12.conj(), r(x[C24]), r(x[C33])],
    ]
}

/// Cholesky factor of a Hermitian 3×3 matrix, or `None` unless positive definite.
fn cholesky3(a: &Mat3) -> Option<Mat3> {
    let z = Complex64::new(0.0, 0.0);
    let mut l = [[z; 3]; 3];
    for j in 0..3 {
        let mut d = a[j][j].re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[j][j] = Complex64::new(djj, 0.0);
        for i in j + 1..3 {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / djj;
        }
    }
    Some(l)
}

/// Inverse from a Cholesky factor.
fn inverse_from_cholesky(l: &Mat3) -> Mat3 {
    let z = Complex64::new(0.0, 0.0);
    let mut inv = [[z; 3]; 3];
    for col in 0..3 {
        // L y = e_col
        let mut y = [z; 3];
        for i in 0..3 {
            let mut s = if i == col { Complex64::new(1.0, 0.0) } else { z };
            for k in 0..i {
                s -= l[i][k] * y[k];
            }
            y[i] = s / l[i][i];
        }
        // L† x = y
        let mut x = [z; 3];
        for i in (0..3).rev() {
            let mut s = y[i];
            for k in i + 1..3 {
                s -= l[k][i].conj() * x[k];
            }
            x[i] = s / l[i][i];
        }
        for i in 0..3 {
            inv[i][col] = x[i];
        }
    }
    inv
}

fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let z = Complex64::new(0.0, 0.0);
    let mut c = [[z; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn trace3(a: &Mat3) -> Complex64 {
    a[0][0] + a[1][1] + a[2][2]
}

/// Barrier value `−ln c00 − ln det B`, or `None` outside the open feasible set.
fn barrier_value(x: &[f64; 7]) -> Option<f64> {
    if !(x[C00] > 0.0) {
        return None;
    }
    let l = cholesky3(&block_of(x))?;
    let logdet: f64 = (0..3).map(|i| l[i][i].re.ln()).sum::<f64>() * 2.0;
    Some(-x[C00].ln() - logdet)
}

/// Gradient and Hessian of the barrier in the 7 parameters.
fn barrier_derivatives(x: &[f64; 7]) -> Option<([f64; 7], [[f64; 7]; 7])> {
    let l = cholesky3(&block_of(x))?;
    let inv = inverse_from_cholesky(&l);
    let mut grad = [0.0; 7];
    let mut hess = [[0.0; 7]; 7];
    grad[C00] = -1.0 / x[C00];
    hess[C00][C00] = 1.0 / (x[C00] * x[C00]);

    let ks = [C11, C22, C33, C24, C12A, C12B];
    let prods: Vec<Mat3> = ks.iter().map(|&k| mat3_mul(&inv, &block_derivative(k))).collect();
    for (a, &ka) in ks.iter().enumerate() {
        grad[ka] = -trace3(&prods[a]).re;
        for (b, &kb) in ks.iter().enumerate().skip(a) {
            let v = trace3(&mat3_mul(&prods[a], &prods[b])).re;
            hess[ka][kb] = v;
            hess[kb][ka] = v;
        }
    }
    Some((grad, hess))
}

/// Solves `H d = b` for symmetric positive definite `H` (with a tiny ridge on failure).
fn solve_spd(h: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let scale = (0..n).map(|i| h[i][i].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut ridge = 0.0;
    loop {
        if let Some(l) = cholesky_real(h, ridge) {
            let mut y = vec![0.0; n];
            for i in 0..n {
                let mut s = b[i];
                for k in 0..i {
                    s -= l[i][k] * y[k];
                }
                y[i] = s / l[i][i];
            }
            let mut x = vec![0.0; n];
            for i in (0..n).rev() {
                let mut s = y[i];
                for k in i + 1..n {
                    s -= l[k][i] * x[k];
                }
                x[i] = s / l[i][i];
            }
            return x;
        }
        ridge = if ridge == 0.0 { 1e-14 * scale } else { ridge * 10.0 };
    }
}

fn cholesky_real(h: &[Vec<f64>], ridge: f64) -> Option<Vec<Vec<f64>>> {
    let n = h.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = h[j][j] + ridge;
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in j + 1..n {
            let mut s = h[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    Some(l)
}

fn dot7(a: &[f64; 7], b: &[f64; 7]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximizes `objective` over the family with the barrier method.
pub fn maximize_linear(objective: &LinearForm, flags: SymmetryFlags, settings: &SolverSettings) -> Result<SdpResult> {
    solve(std::slice::from_ref(objective), flags, settings)
}

/// Maximizes the smallest of `objectives` over the family.
///
/// Solved in epigraph form: maximize `s` subject to `gᵢ·x ≥ s` for every form.
pub fn maximize_worst_case(
    objectives: &[LinearForm],
    flags: SymmetryFlags,
    settings: &SolverSettings,
) -> Result<SdpResult> {
    if objectives.is_empty() {
        return Err(OptimizerError::InvalidEnsemble("no objectives".into()));
    }
    solve(objectives, flags, settings)
}

/// Penalized problem in the free coordinates `w = (y, [s])`.
struct Problem<'a> {
    param: Parametrization,
    forms: &'a [LinearForm],
    epigraph: bool,
}

impl Problem<'_> {
    fn split(&self, w: &[f64]) -> ([f64; 7], Option<f64>) {
        let m = self.param.dim();
        (self.param.point(&w[..m]), self.epigraph.then(|| w[m]))
    }

    fn value(&self, w: &[f64]) -> f64 {
        match self.split(w) {
            (_, Some(s)) => s,
            (x, None) => dot7(&self.forms[0].0, &x),
        }
    }

    /// Worst (or only) objective at the current point.
    fn achieved(&self, w: &[f64]) -> f64 {
        let (x, _) = self.split(w);
        self.forms.iter().map(|g| dot7(&g.0, &x)).fold(f64::INFINITY, f64::min)
    }

    fn barrier(&self, w: &[f64]) -> Option<f64> {
        let (x, s) = self.split(w);
        let mut b = barrier_value(&x)?;
        if let Some(s) = s {
            for g in self.forms {
                let slack = dot7(&g.0, &x) - s;
                if !(slack > 0.0) {
                    return None;
                }
                b -= slack.ln();
            }
        }
        Some(b)
    }

    /// Gradient and Hessian of `−t·value + barrier`.
    fn derivatives(&self, w: &[f64], t: f64) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        let m = self.param.dim();
        let (x, s) = self.split(w);
        let (bg, bh) = barrier_derivatives(&x)?;
        let mut grad = self.param.pull_back(&bg);
        let mut hess = self.param.pull_back_hessian(&bh);
        match s {
            None => {
                let c = self.param.pull_back(&self.forms[0].0);
                for (gi, ci) in grad.iter_mut().zip(c) {
                    *gi -= t * ci;
                }
            }
            Some(s) => {
                grad.push(-t);
                for row in hess.iter_mut() {
                    row.push(0.0);
                }
                hess.push(vec![0.0; m + 1]);
                for g in self.forms {
                    let slack = dot7(&g.0, &x) - s;
                    let mut a = self.param.pull_back(&g.0);
                    a.push(-1.0);
                    for i in 0..=m {
                        grad[i] -= a[i] / slack;
                        for j in 0..=m {
                            hess[i][j] += a[i] * a[j] / (slack * slack);
                        }
                    }
                }
            }
        }
        Some((grad, hess))
    }
}

fn solve(forms: &[LinearForm], flags: SymmetryFlags, settings: &SolverSettings) -> Result<SdpResult> {
    let epigraph = forms.len() > 1;
    let problem = Problem {
        param: Parametrization::new(flags),
        forms,
        epigraph,
    };
    let mut w = problem.param.start.clone();
    if epigraph {
        let x = problem.param.point(&w);
        let lowest = forms.iter().map(|g| dot7(&g.0, &x)).fold(f64::INFINITY, f64::min);
        w.push(lowest - 1.0);
    }
    if problem.barrier(&w).is_none() {
        return Err(OptimizerError::Infeasible);
    }
    let degree = BARRIER_DEGREE + if epigraph { forms.len() as f64 } else { 0.0 };

    let mut level = 0i32;
    let mut mu = 1.0;
    let mut iterations = 0usize;
    let mut history = Vec::new();

    loop {
        let t = 1.0 / mu;
        loop {
            let (grad, hess) = problem.derivatives(&w, t).ok_or(OptimizerError::Infeasible)?;
            let neg: Vec<f64> = grad.iter().map(|v| -v).collect();
            let step = solve_spd(&hess, &neg);
            let decrement_sq: f64 = -grad.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
            if !(decrement_sq > NEWTON_TOL) {
                break;
            }
            iterations += 1;
            if iterations > settings.max_newton_steps {
                let (x, _) = problem.split(&w);
                return Err(OptimizerError::NonConvergence {
                    iterations,
                    best_objective: problem.achieved(&w),
                    best_params: CovariantParams::from_array(x),
                });
            }

            let current_barrier = problem.barrier(&w).expect("current iterate is strictly feasible");
            let current_value = problem.value(&w);
            let mut s = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<f64> = w.iter().zip(&step).map(|(a, d)| a + s * d).collect();
                if let Some(b) = problem.barrier(&trial) {
                    let change = -t * (problem.value(&trial) - current_value) + (b - current_barrier);
                    if change <= -0.25 * s * decrement_sq {
                        accepted = Some(trial);
                        break;
                    }
                }
                s *= 0.5;
            }
            match accepted {
                Some(next) => {
                    let moved = next.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    w = next;
                    if moved < 1e-15 {
                        break;
                    }
                }
                // no representable descent left at this barrier level
                None => break,
            }
        }

        history.push(problem.achieved(&w));
        if mu <= settings.mu_final * (1.0 + 1e-9) {
            break;
        }
        level += 1;
        mu = settings.reduction.powi(-level);
    }

    let (x, _) = problem.split(&w);
    Ok(SdpResult {
        optimum: problem.achieved(&w),
        params: CovariantParams::from_array(x),
        gap: degree * mu,
        iterations,
        constraint_flags: flags,
        history,
    })
}

fn check_domain(xi: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&xi) {
        return Err(OptimizerError::Domain(xi));
    }
    Ok(())
}

fn root_term(xi: f64) -> (f64, f64, f64) {
    let (s, c) = xi.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let root = (2.0 * s2 * s2 + c2 * c2).sqrt();
    (s2, c2, root)
}

/// Closed-form optimal fidelity of the real-state variant.
pub fn analytic_f1(xi: f64) -> Result<f64> {
    check_domain(xi)?;
    let (s2, c2, root) = root_term(xi);
    Ok(0.5 * (1.0 + 0.5 * c2 * (1.0 + c2 / root) + s2 * s2 / root))
}

/// Closed-form optimal fidelity of the general-state variant.
pub fn analytic_f2(xi: f64) -> Result<f64> {
    check_domain(xi)?;
    let (s2, c2, root) = root_term(xi);
    let first = 0.25 * ((2.0 * xi).cos() + 3.0);
    let second = 0.5 * (1.0 + 0.5 * c2 * (-1.0 + c2 / root) + s2 * s2 / root);
    Ok(first.max(second))
}

pub fn analytic_fidelity(variant: Variant, xi: f64) -> Result<f64> {
    match variant {
        Variant::Real => analytic_f1(xi),
        Variant::General => analytic_f2(xi),
    }
}

/// SDP optimum for the single real state at angle `xi` (phase `phi`).
pub fn sdp_fidelity(variant: Variant, xi: f64, phi: f64) -> Result<SdpResult> {
    let q = PureQubit::new(xi, phi)?;
    optimize_fidelity(&Ensemble::singleton(q), variant, SymmetryFlags::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveMode {
    Analytic,
    Sdp,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub xi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_sdp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<f64>,
}

/// `steps` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a grid needs at least two points");
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

fn curve_row(variant: Variant, xi: f64, mode: CurveMode) -> Result<CurveRow> {
    check_domain(xi)?;
    let analytic = match mode {
        CurveMode::Analytic | CurveMode::Both => Some(analytic_fidelity(variant, xi)?),
        CurveMode::Sdp => None,
    };
    let sdp = match mode {
        CurveMode::Sdp | CurveMode::Both => Some(sdp_fidelity(variant, xi, 0.0)?.optimum),
        CurveMode::Analytic => None,
    };
    let discrepancy = match (analytic, sdp) {
        (Some(a), Some(s)) => Some(s - a),
        _ => None,
    };
    Ok(CurveRow {
        xi,
        f_analytic: analytic,
        f_sdp: sdp,
        discrepancy,
    })
}

/// Fidelity table over `grid`; SDP rows solve the single-state problem at φ = 0.
///
/// Grid points are split across threads; rows come back in grid order.
pub fn fidelity_curve(variant: Variant, grid: &[f64], mode: CurveMode) -> Result<Vec<CurveRow>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = grid.len().div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<CurveRow>>> = std::thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&xi| curve_row(variant, xi, mode)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("curve worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(grid.len());
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

/// Search bracket for the curve minimum.
pub const MINIMUM_BRACKET: (f64, f64) = (0.1, FRAC_PI_2 - 0.1);

/// Golden-section minimization of `f` on `[lo, hi]` down to width `tol`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Location and value of the minimum of the closed-form curve.
pub fn find_minimum(variant: Variant) -> (f64, f64) {
    let (lo, hi) = MINIMUM_BRACKET;
    golden_section_min(
        |xi| analytic_fidelity(variant, xi).expect("bracket lies inside the domain"),
        lo,
        hi,
        1e-10,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn xi_min() -> f64 {
        2f64.sqrt().atan()
    }

    #[test]
    fn analytic_anchor_values() {
        assert!((analytic_f1(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((analytic_f1(FRAC_PI_2).unwrap() - (0.5 + 0.125f64.sqrt())).abs() < 1e-12);
        assert!((analytic_f1(xi_min()).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!((analytic_f1(FRAC_PI_4).unwrap() - (5.0 + 3f64.sqrt()) / 8.0).abs() < 1e-12);

        assert!((analytic_f2(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((analytic_f2(FRAC_PI_4).unwrap() - 0.75).abs() < 1e-12);
        assert!((analytic_f2(xi_min()).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((analytic_f2(FRAC_PI_2).unwrap() - 0.853_553_390_593_273_8).abs() < 1e-12);
    }

    #[test]
    fn both_branches_meet_at_the_minimum() {
        let xi = xi_min();
        let (s2, c2, root) = root_term(xi);
        let first = 0.25 * ((2.0 * xi).cos() + 3.0);
        let second = 0.5 * (1.0 + 0.5 * c2 * (-1.0 + c2 / root) + s2 * s2 / root);
        assert!((first - 2.0 / 3.0).abs() < 1e-14);
        assert!((second - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn analytic_domain_errors() {
        assert_eq!(analytic_f1(-0.01), Err(OptimizerError::Domain(-0.01)));
        assert!(analytic_f2(FRAC_PI_2 + 1e-9).is_err());
    }

    #[test]
    fn ensemble_validation() {
        let q = PureQubit::real(0.3).unwrap();
        assert!(Ensemble::new(vec![(q, 0.5), (q, 0.4)]).is_err());
        assert!(Ensemble::new(vec![(q, 1.5), (q, -0.5)]).is_err());
        assert!(Ensemble::new(vec![]).is_err());
        assert!(Ensemble::uniform(&[q, q, q]).is_ok());
    }

    #[test]
    fn maximally_mixed_reproduces_the_form() {
        for v in Variant::ALL {
            let e = Ensemble::singleton(PureQubit::real(0.0).unwrap());
            let g = objective_coefficients(&e, v, CloneSlot::First);
            assert!((g.evaluate(&CovariantParams::maximally_mixed()) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_covariant_value_at_the_equator() {
        let r = sdp_fidelity(Variant::Real, FRAC_PI_2, 0.0).unwrap();
        assert!((r.optimum - (0.5 + 0.125f64.sqrt())).abs() < 1e-7, "{}", r.optimum);
    }

    #[test]
    fn sdp_known_values() {
        let r = sdp_fidelity(Variant::Real, xi_min(), 0.0).unwrap();
        assert!((r.optimum - 5.0 / 6.0).abs() < 1e-6, "{r:?}");
        let r = sdp_fidelity(Variant::General, FRAC_PI_4, 0.0).unwrap();
        assert!((r.optimum - 0.75).abs() < 1e-6, "{r:?}");
        let vals: Vec<f64> = [0.0, 1.0, 2.5]
            .iter()
            .map(|&phi| sdp_fidelity(Variant::General, xi_min(), phi).unwrap().optimum)
            .collect();
        for v in &vals {
            assert!((v - 2.0 / 3.0).abs() < 1e-6);
        }
        assert!((vals[0] - vals[1]).abs() <= 1e-7 && (vals[1] - vals[2]).abs() <= 1e-7);
    }

    #[test]
    fn result_consistency() {
        let r = sdp_fidelity(Variant::Real, 0.7, 0.0).unwrap();
        r.params.validate(1e-9).unwrap();
        let e = Ensemble::singleton(PureQubit::real(0.7).unwrap());
        let direct = symmetric_objective(&e, Variant::Real).evaluate(&r.params);
        assert!((direct - r.optimum).abs() < 1e-10);
        assert!(r.gap <= 1e-9);
        assert!(r.history.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{:?}", r.history);
    }

    #[test]
    fn flags_shrink_the_feasible_set() {
        let xi = 1.0;
        let free = sdp_fidelity(Variant::General, xi, 0.0).unwrap();
        let e = Ensemble::singleton(PureQubit::real(xi).unwrap());
        let swap = optimize_fidelity(&e, Variant::General, SymmetryFlags { output_swap: true, input_transpose: false }).unwrap();
        assert!((swap.params.c22 - swap.params.c33).abs() < 1e-15);
        assert!(swap.optimum <= free.optimum + 1e-9);
        let tr = optimize_fidelity(&e, Variant::General, SymmetryFlags { output_swap: false, input_transpose: true }).unwrap();
        assert_eq!(tr.params.c12, (0.0, 0.0));
        assert!(tr.optimum <= free.optimum + 1e-9);
        assert!(tr.constraint_flags.input_transpose);
    }

    #[test]
    fn golden_section_on_a_parabola() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn minima() {
        for (v, f) in [(Variant::Real, 5.0 / 6.0), (Variant::General, 2.0 / 3.0)] {
            let (xi, fmin) = find_minimum(v);
            assert!((xi - 0.955_316_618_124_509_3).abs() < 1e-6, "{xi}");
            assert!((fmin - f).abs() < 1e-7);
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = uniform_grid(0.0, FRAC_PI_2, 3);
        assert_eq!(g, vec![0.0, FRAC_PI_4, FRAC_PI_2]);
        let rows = fidelity_curve(Variant::General, &g, CurveMode::Analytic).unwrap();
        assert!((rows[0].f_analytic.unwrap() - 1.0).abs() < 1e-15);
        assert!((rows[1].f_analytic.unwrap() - 0.75).abs() < 1e-12);
        assert!(rows[2].f_sdp.is_none());
        assert!(fidelity_curve(Variant::Real, &[PI], CurveMode::Analytic).is_err());
    }
}
