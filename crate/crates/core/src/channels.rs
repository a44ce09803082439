//! Choi operators of symmetric 1→2 qubit cloning maps.
//!
//! Basis states of the 8-dimensional operator space are `|m⟩` with
//! `m = 4a + 2b + c`, where `a` is the first clone, `b` the second clone and
//! `c` the input qubit. A map is recovered from its operator by
//! `M(ρ) = Tr_in[(I ⊗ τ) R]` with `τ = ρᵀ` for [`Variant::Real`] and `τ = ρ`
//! for [`Variant::General`].
//!
//! Under `P_θ ⊗ P_θ ⊗ P_θ` the space splits into weight blocks
//! `{0}`, `{1,2,4}`, `{3,5,6}` and `{7}`. The covariant family lives on those
//! blocks and additionally pairs `m ↔ 7 − m` (bit flip of all three qubits).

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{kron_all, pauli_x, pauli_y, ComplexMatrix, LinalgError};
use crate::sampling;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default feasibility tolerance for Choi operators.
pub const CHOI_TOL: f64 = 1e-9;

/// Weight blocks of `P_θ^{⊗3}`.
pub const WEIGHT_BLOCKS: [&[usize]; 4] = [&[0], &[1, 2, 4], &[3, 5, 6], &[7]];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("covariant parameters violate {0}")]
    InvalidParams(String),

    #[error("invalid Choi operator: {0}")]
    InvalidChoi(String),

    #[error("invalid input state: {0}")]
    InvalidState(String),

    #[error("clone index must be 1 or 2, got {0}")]
    InvalidClone(usize),

    #[error("variant must be 1 or 2, got {0}")]
    InvalidVariant(usize),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, ChannelError>;

/// Which covariance requirement the map satisfies.
///
/// `Real` (index 1): covariance under `P_θ` and `P_θσX` for real inputs; the
/// operator is the ordinary Choi matrix (input transposed on application).
/// `General` (index 2): covariance under `P_θ` and `P_θ Γ σX` for arbitrary
/// pure inputs; the input is inserted without transposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Variant {
    Real,
    General,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Real, Variant::General];

    pub fn from_index(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Variant::Real),
            2 => Ok(Variant::General),
            other => Err(ChannelError::InvalidVariant(other)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Variant::Real => 1,
            Variant::General => 2,
        }
    }

    fn transposes_input(self) -> bool {
        matches!(self, Variant::Real)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Output slot of a clone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CloneSlot {
    First,
    Second,
}

impl CloneSlot {
    pub const BOTH: [CloneSlot; 2] = [CloneSlot::First, CloneSlot::Second];

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            1 => Ok(CloneSlot::First),
            2 => Ok(CloneSlot::Second),
            other => Err(ChannelError::InvalidClone(other)),
        }
    }
}

/// `cos(ξ/2)|0⟩ + e^{iφ} sin(ξ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    xi: f64,
    phi: f64,
}

impl PureQubit {
    /// `xi` must lie in `[0, π]`; `phi` is wrapped into `[0, 2π)`.
    pub fn new(xi: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&xi) || !phi.is_finite() {
            return Err(ChannelError::InvalidState(format!(
                "pure qubit angles (xi = {xi}, phi = {phi}) out of domain"
            )));
        }
        Ok(Self {
            xi,
            phi: phi.rem_euclid(std::f64::consts::TAU),
        })
    }

    /// Real state on the xz meridian.
    pub fn real(xi: f64) -> Result<Self> {
        Self::new(xi, 0.0)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ket(&self) -> [Complex64; 2] {
        let (s, c) = (self.xi / 2.0).sin_cos();
        [Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi)]
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.ket())
    }

    /// `P_θ |ψ⟩`, which shifts the relative phase by `θ`.
    pub fn phase_rotated(&self, theta: f64) -> Self {
        Self {
            xi: self.xi,
            phi: (self.phi + theta).rem_euclid(std::f64::consts::TAU),
        }
    }
}

/// `P_θ = diag(1, e^{iθ})`.
pub fn phase_operator(theta: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&[ONE, Complex64::from_polar(1.0, theta)])
}

/// The seven real degrees of freedom of the covariant family.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CovariantParams {
    pub c00: f64,
    pub c11: f64,
    pub c22: f64,
    pub c33: f64,
    pub c24: f64,
    /// Stored as (re, im).
    pub c12: (f64, f64),
}

impl CovariantParams {
    pub const DIM: usize = 7;

    /// The `I₈/4` channel: every output is maximally mixed.
    pub fn maximally_mixed() -> Self {
        Self {
            c00: 0.25,
            c11: 0.25,
            c22: 0.25,
            c33: 0.25,
            c24: 0.0,
            c12: (0.0, 0.0),
        }
    }

    /// Order: `(c00, c11, c22, c33, c24, Re c12, Im c12)`.
    pub fn to_array(&self) -> [f64; 7] {
        [self.c00, self.c11, self.c22, self.c33, self.c24, self.c12.0, self.c12.1]
    }

    pub fn from_array(x: [f64; 7]) -> Self {
        Self {
            c00: x[0],
            c11: x[1],
            c22: x[2],
            c33: x[3],
            c24: x[4],
            c12: (x[5], x[6]),
        }
    }

    pub fn c12(&self) -> Complex64 {
        Complex64::new(self.c12.0, self.c12.1)
    }

    pub fn diagonal_sum(&self) -> f64 {
        self.c00 + self.c11 + self.c22 + self.c33
    }

    /// The 3×3 block on `{1, 2, 4}`.
    pub fn block(&self) -> ComplexMatrix {
        let c12 = self.c12();
        let r = |x: f64| Complex64::new(x, 0.0);
        ComplexMatrix::from_vec(
            3,
            3,
            vec![
                r(self.c11),
                c12,
                c12,
                c12.conj(),
                r(self.c22),
                r(self.c24),
                c12.conj(),
                r(self.c24),
                r(self.c33),
            ],
        )
    }

    /// Checks the trace-preserving sum and positivity of `c00` and the 3×3 block.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.to_array().iter().any(|x| !x.is_finite()) {
            return Err(ChannelError::InvalidParams("finiteness".into()));
        }
        let sum = self.diagonal_sum();
        if (sum - 1.0).abs() > tol.max(1e-10) {
            return Err(ChannelError::InvalidParams(format!(
                "trace preservation: c00 + c11 + c22 + c33 = {sum}"
            )));
        }
        if self.c00 < -tol {
            return Err(ChannelError::InvalidParams(format!("positivity: c00 = {}", self.c00)));
        }
        let min = self.block().min_eigenvalue()?;
        if min < -tol {
            return Err(ChannelError::InvalidParams(format!(
                "positivity: block {{1,2,4}} has eigenvalue {min}"
            )));
        }
        Ok(())
    }

    /// The operator in the `General` form, without any validation. Linear in the parameters.
    pub fn family_matrix(&self) -> ComplexMatrix {
        let mut r = ComplexMatrix::zeros(8, 8);
        let diag = [
            (0, self.c00),
            (7, self.c00),
            (1, self.c11),
            (6, self.c11),
            (2, self.c22),
            (5, self.c22),
            (3, self.c33),
            (4, self.c33),
        ];
        for (i, v) in diag {
            r[(i, i)] = Complex64::new(v, 0.0);
        }
        for (i, j) in C24_ENTRIES {
            r[(i, j)] = Complex64::new(self.c24, 0.0);
            r[(j, i)] = Complex64::new(self.c24, 0.0);
        }
        let c12 = self.c12();
        for (i, j) in C12_ENTRIES {
            r[(i, j)] = c12;
            r[(j, i)] = c12.conj();
        }
        r
    }

    /// Basis direction `k` of the linear span (not a valid channel on its own).
    pub fn unit(k: usize) -> Self {
        let mut x = [0.0; 7];
        x[k] = 1.0;
        Self::from_array(x)
    }
}

const C24_ENTRIES: [(usize, usize); 2] = [(2, 4), (3, 5)];
const C12_ENTRIES: [(usize, usize); 4] = [(1, 2), (1, 4), (3, 6), (5, 6)];

/// Positive operator representing a trace-preserving 1→2 map.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator {
    r: ComplexMatrix,
}

impl ChoiOperator {
    /// Validates Hermiticity, positivity and `Tr_out R = I₂` at [`CHOI_TOL`].
    pub fn new(r: ComplexMatrix) -> Result<Self> {
        if r.rows() != 8 || r.cols() != 8 {
            return Err(ChannelError::InvalidChoi(format!(
                "expected 8x8, got {}x{}",
                r.rows(),
                r.cols()
            )));
        }
        if !r.is_hermitian() {
            return Err(ChannelError::InvalidChoi(format!(
                "not Hermitian ({:e})",
                r.hermitian_deviation()
            )));
        }
        let min = r.min_eigenvalue()?;
        if min < -CHOI_TOL {
            return Err(ChannelError::InvalidChoi(format!("min eigenvalue {min}")));
        }
        let op = Self { r };
        let tp = op.tp_residual();
        if tp > CHOI_TOL {
            return Err(ChannelError::InvalidChoi(format!("Tr_out R deviates from I by {tp:e}")));
        }
        Ok(op)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.r
    }

    /// `max |Tr_out R − I₂|`.
    pub fn tp_residual(&self) -> f64 {
        tp_residual(&self.r)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.r.min_eigenvalue().expect("Choi operators are Hermitian by construction")
    }
}

/// `max |Tr_clones R − I₂|` for any 8×8 matrix.
pub fn tp_residual(r: &ComplexMatrix) -> f64 {
    let red = r.partial_trace(&[2, 2, 2], &[2]).expect("8x8 operator");
    red.max_abs_diff(&ComplexMatrix::identity(2))
}

/// Operator of the covariant family, in the `General` form.
pub fn build_covariant_choi(p: &CovariantParams) -> Result<ChoiOperator> {
    p.validate(CHOI_TOL)?;
    ChoiOperator::new(p.family_matrix())
}

fn yy_i() -> ComplexMatrix {
    kron_all(&[&pauli_y(), &pauli_y(), &ComplexMatrix::identity(2)])
}

/// `(σY ⊗ σY ⊗ I) R (σY ⊗ σY ⊗ I)†`, mapping the family into the `Real` form.
pub fn to_real_variant(r: &ChoiOperator) -> ChoiOperator {
    ChoiOperator {
        r: conjugate_clones_by_y(&r.r),
    }
}

fn conjugate_clones_by_y(r: &ComplexMatrix) -> ComplexMatrix {
    let u = yy_i();
    &(&u * r) * &u.dagger()
}

/// Family member for `params` in the operator form used by `variant`.
pub fn choi_for_variant(params: &CovariantParams, variant: Variant) -> Result<ChoiOperator> {
    let base = build_covariant_choi(params)?;
    Ok(match variant {
        Variant::General => base,
        Variant::Real => to_real_variant(&base),
    })
}

/// Unvalidated operator of the linear span for `variant`.
pub fn family_matrix_for_variant(params: &CovariantParams, variant: Variant) -> ComplexMatrix {
    let m = params.family_matrix();
    match variant {
        Variant::General => m,
        Variant::Real => conjugate_clones_by_y(&m),
    }
}

fn check_density(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(ChannelError::InvalidState(format!(
            "expected 2x2 density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if !rho.is_hermitian() {
        return Err(ChannelError::InvalidState("not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(ChannelError::InvalidState(format!("trace {tr}")));
    }
    if rho.min_eigenvalue()? < -1e-10 {
        return Err(ChannelError::InvalidState("not positive semidefinite".into()));
    }
    Ok(())
}

fn insert_input(rho_in: &ComplexMatrix, variant: Variant) -> ComplexMatrix {
    if variant.transposes_input() {
        rho_in.transpose()
    } else {
        rho_in.clone()
    }
}

/// Two-clone output state `Tr_in[(I ⊗ τ) R]`.
pub fn apply_channel(r: &ChoiOperator, rho_in: &ComplexMatrix, variant: Variant) -> Result<ComplexMatrix> {
    check_density(rho_in)?;
    let tau = insert_input(rho_in, variant);
    let lifted = ComplexMatrix::identity(4).kron(&tau);
    Ok((&lifted * &r.r).partial_trace(&[4, 2], &[0])?)
}

/// Reduced state of one clone.
pub fn clone_state(output: &ComplexMatrix, slot: CloneSlot) -> Result<ComplexMatrix> {
    let keep = match slot {
        CloneSlot::First => 0,
        CloneSlot::Second => 1,
    };
    Ok(output.partial_trace(&[2, 2], &[keep])?)
}

/// `Tr[(Π ⊗ I ⊗ τ(Π)) R]` (or the mirrored slot order) for any 8×8 `r`.
pub fn fidelity_functional(r: &ComplexMatrix, q: &PureQubit, variant: Variant, slot: CloneSlot) -> f64 {
    let proj = q.density();
    let id = ComplexMatrix::identity(2);
    let input = insert_input(&proj, variant);
    let op = match slot {
        CloneSlot::First => kron_all(&[&proj, &id, &input]),
        CloneSlot::Second => kron_all(&[&id, &proj, &input]),
    };
    (&op * r).trace().re
}

/// Overlap of one clone with the pure input.
pub fn single_copy_fidelity(r: &ChoiOperator, q: &PureQubit, variant: Variant, slot: CloneSlot) -> f64 {
    fidelity_functional(&r.r, q, variant, slot)
}

/// Residuals of the symmetry checks on an operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceReport {
    /// `max_θ ‖[R, U_θ]‖` with the variant's phase representation.
    pub phase: f64,
    /// `‖[R, σX ⊗ σX ⊗ σX]‖`. Vanishes on family members with real `c12`.
    pub bit_flip: f64,
    /// `‖R − X̄ R̄ X̄‖` with `X̄ = σX ⊗ σX ⊗ σX`: bit flip combined with
    /// transposition. Vanishes on every family member.
    pub bit_flip_conjugate: f64,
}

impl CovarianceReport {
    /// Largest of the phase and unitary bit-flip residuals.
    pub fn max(&self) -> f64 {
        self.phase.max(self.bit_flip)
    }
}

/// Phase representation under which the `variant` operator must be invariant.
pub fn phase_representation(theta: f64, variant: Variant) -> ComplexMatrix {
    match variant {
        Variant::General => {
            let p = phase_operator(theta);
            kron_all(&[&p, &p, &p])
        }
        Variant::Real => {
            let p = phase_operator(-theta);
            kron_all(&[&p, &p, &p.conj()])
        }
    }
}

fn xxx() -> ComplexMatrix {
    let x = pauli_x();
    kron_all(&[&x, &x, &x])
}

/// Operator-norm commutator residuals against the phase and bit-flip symmetries.
pub fn verify_covariance(r: &ComplexMatrix, variant: Variant, thetas: &[f64]) -> CovarianceReport {
    let phase = thetas
        .iter()
        .map(|&t| r.commutator(&phase_representation(t, variant)).operator_norm())
        .fold(0.0, f64::max);
    let flip = xxx();
    let conjugated = &(&flip * &r.conj()) * &flip;
    CovarianceReport {
        phase,
        bit_flip: r.commutator(&flip).operator_norm(),
        bit_flip_conjugate: (r - &conjugated).operator_norm(),
    }
}

/// Orthogonal (Frobenius) projection of a Hermitian 8×8 matrix onto the real
/// span of the family, in `General` form.
pub fn symmetry_project(h: &ComplexMatrix) -> CovariantParams {
    assert_eq!((h.rows(), h.cols()), (8, 8), "projection acts on 8x8 operators");
    let re = |i: usize, j: usize| h[(i, j)].re;
    let c24 = C24_ENTRIES.iter().map(|&(i, j)| re(i, j) + re(j, i)).sum::<f64>() / 4.0;
    let c12: Complex64 = C12_ENTRIES
        .iter()
        .map(|&(i, j)| h[(i, j)] + h[(j, i)].conj())
        .sum::<Complex64>()
        / 8.0;
    CovariantParams {
        c00: (re(0, 0) + re(7, 7)) / 2.0,
        c11: (re(1, 1) + re(6, 6)) / 2.0,
        c22: (re(2, 2) + re(5, 5)) / 2.0,
        c33: (re(3, 3) + re(4, 4)) / 2.0,
        c24,
        c12: (c12.re, c12.im),
    }
}

/// Projector onto the symmetric subspace of two qubits.
pub fn symmetric_projector() -> ComplexMatrix {
    let mut swap = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            swap[(2 * a + b, 2 * b + a)] = ONE;
        }
    }
    (&ComplexMatrix::identity(4) + &swap).scale_real(0.5)
}

/// Choi operator (in `Real` form) of the universal symmetric cloner
/// `ρ ↦ (2/3) Π_sym (ρ ⊗ I) Π_sym`.
pub fn universal_cloner_choi() -> ChoiOperator {
    let pi = symmetric_projector();
    let mut r = ComplexMatrix::zeros(8, 8);
    for i in 0..2 {
        for j in 0..2 {
            let mut e = ComplexMatrix::zeros(2, 2);
            e[(i, j)] = ONE;
            let out = (&(&pi * &e.kron(&ComplexMatrix::identity(2))) * &pi).scale_real(2.0 / 3.0);
            r = &r + &out.kron(&e);
        }
    }
    ChoiOperator::new(r).expect("universal cloner is a valid channel")
}

/// Same operator with the input slot transposed, i.e. the representation of
/// the same map for the other variant. The result need not be positive.
pub fn transpose_input(r: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(8, 8);
    for i in 0..8 {
        for j in 0..8 {
            let (ci, cj) = (i & 1, j & 1);
            out[((i & !1) | cj, (j & !1) | ci)] = r[(i, j)];
        }
    }
    out
}

// Superoperators act on row-major vectorized 2×2 matrices.

/// Matrix of a linear map on 2×2 matrices.
pub fn superoperator(f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(4, 4);
    for col in 0..4 {
        let mut e = ComplexMatrix::zeros(2, 2);
        e[(col / 2, col % 2)] = ONE;
        let img = f(&e);
        for row in 0..4 {
            s[(row, col)] = img[(row / 2, row % 2)];
        }
    }
    s
}

/// `Ad U: ρ ↦ U ρ U⁻¹` for unitary `U`.
pub fn adjoint_action(u: &ComplexMatrix) -> ComplexMatrix {
    let ud = u.dagger();
    superoperator(|rho| &(u * rho) * &ud)
}

/// Transposition in the logical basis.
pub fn transposition() -> ComplexMatrix {
    superoperator(|rho| rho.transpose())
}

fn apply_superoperator(s: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let v = s.matvec(rho.entries());
    ComplexMatrix::from_vec(2, 2, v)
}

/// `P_θ σX` and `σX P_{−θ}` differ by the global phase `e^{iθ}`; the residual
/// compares their adjoint actions.
pub fn phase_flip_residual(theta: f64) -> f64 {
    let x = pauli_x();
    let lhs = adjoint_action(&(&phase_operator(theta) * &x));
    let rhs = adjoint_action(&(&x * &phase_operator(-theta)));
    lhs.max_abs_diff(&rhs)
}

/// Residuals of the transposition identity
/// `Ad P_θ ∘ Γ ∘ Ad σX = Γ ∘ Ad(σX P_θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranspositionIdentityReport {
    /// Operator norm of the difference of both sides as superoperators.
    pub superoperator: f64,
    /// Operator norm of `[Ad P_θ, Γ ∘ Ad σX]`.
    pub commutator: f64,
    /// Largest entrywise difference of both sides on random density matrices.
    pub states: f64,
}

impl TranspositionIdentityReport {
    pub fn max(&self) -> f64 {
        self.superoperator.max(self.commutator).max(self.states)
    }
}

pub fn identity_check_transposition(theta: f64, trials: usize, rng: &mut impl Rng) -> TranspositionIdentityReport {
    let x = pauli_x();
    let p = phase_operator(theta);
    let gamma = transposition();
    let ad_p = adjoint_action(&p);
    let gamma_ad_x = &gamma * &adjoint_action(&x);
    let lhs = &ad_p * &gamma_ad_x;
    let rhs = &gamma * &adjoint_action(&(&x * &p));
    let superop = (&lhs - &rhs).operator_norm();
    let commutator = ad_p.commutator(&gamma_ad_x).operator_norm();

    let mut states = 0.0f64;
    for _ in 0..trials {
        let rho = sampling::ginibre_density(rng, 2);
        // direct matrix arithmetic, independent of the superoperator matrices
        let left = {
            let inner = (&(&x * &rho) * &x).transpose();
            &(&p * &inner) * &p.dagger()
        };
        let xp = &x * &p;
        let right = (&(&xp * &rho) * &xp.dagger()).transpose();
        states = states.max(left.max_abs_diff(&right));
        let via_super = apply_superoperator(&lhs, &rho);
        states = states.max(via_super.max_abs_diff(&left));
    }
    TranspositionIdentityReport {
        superoperator: superop,
        commutator,
        states,
    }
}

/// `‖Γ ∘ Ad(C σX) − Ad(σX C) ∘ Γ‖` for a diagonal unitary `C`.
pub fn transposition_lemma_residual(c: &ComplexMatrix) -> f64 {
    let x = pauli_x();
    let gamma = transposition();
    let lhs = &gamma * &adjoint_action(&(c * &x));
    let rhs = &adjoint_action(&(&x * c)) * &gamma;
    (&lhs - &rhs).operator_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_params() -> CovariantParams {
        CovariantParams {
            c00: 0.1,
            c11: 0.4,
            c22: 0.3,
            c33: 0.2,
            c24: 0.1,
            c12: (0.12, -0.07),
        }
    }

    #[test]
    fn phase_operator_examples() {
        assert!(phase_operator(0.0).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-16);
        assert!(phase_operator(PI).max_abs_diff(&crate::linalg::pauli_z()) < 1e-15);
        for t in [0.3, FRAC_PI_2, 2.1] {
            assert!(phase_flip_residual(t) <= 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_family_member() {
        let r = build_covariant_choi(&CovariantParams::maximally_mixed()).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(8).scale_real(0.25)) < 1e-16);
        let rho = PureQubit::new(1.0, 0.4).unwrap().density();
        for v in Variant::ALL {
            let out = apply_channel(&r, &rho, v).unwrap();
            assert!(out.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
        }
        assert!(to_real_variant(&r).matrix().max_abs_diff(r.matrix()) < 1e-15);
    }

    #[test]
    fn family_layout_and_blocks() {
        let m = sample_params().family_matrix();
        assert_eq!(m[(0, 0)], c(0.1, 0.0));
        assert_eq!(m[(7, 7)], c(0.1, 0.0));
        assert_eq!(m[(4, 4)], c(0.2, 0.0));
        assert_eq!(m[(5, 3)], c(0.1, 0.0));
        assert_eq!(m[(1, 4)], c(0.12, -0.07));
        assert_eq!(m[(6, 5)], c(0.12, 0.07));
        // cross-block entries vanish
        for (bi, a) in WEIGHT_BLOCKS.iter().enumerate() {
            for (bj, b) in WEIGHT_BLOCKS.iter().enumerate() {
                if bi == bj {
                    continue;
                }
                for &i in a.iter() {
                    for &j in b.iter() {
                        assert_eq!(m[(i, j)], ZERO, "({i},{j})");
                    }
                }
            }
        }
    }

    fn sub_block(m: &ComplexMatrix, idx: &[usize]) -> ComplexMatrix {
        let n = idx.len();
        let mut s = ComplexMatrix::zeros(n, n);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                s[(a, b)] = m[(i, j)];
            }
        }
        s
    }

    #[test]
    fn three_dimensional_blocks_share_spectrum() {
        let m = sample_params().family_matrix();
        let b1 = sub_block(&m, &[1, 2, 4]).hermitian_eigenvalues().unwrap();
        let b2 = sub_block(&m, &[3, 5, 6]).hermitian_eigenvalues().unwrap();
        for (x, y) in b1.iter().zip(&b2) {
            assert!((x - y).abs() < 1e-12);
        }
        let direct = sample_params().block().hermitian_eigenvalues().unwrap();
        for (x, y) in b1.iter().zip(&direct) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn measure_and_prepare_member_is_valid() {
        // c00 = 1: R = |0⟩⟨0| + |7⟩⟨7|, Tr_out R = I₂ via the two corners
        let p = CovariantParams {
            c00: 1.0,
            c11: 0.0,
            c22: 0.0,
            c33: 0.0,
            c24: 0.0,
            c12: (0.0, 0.0),
        };
        let r = build_covariant_choi(&p).unwrap();
        assert!(r.tp_residual() < 1e-15);
        let out = apply_channel(&r, &ComplexMatrix::from_real_diag(&[1.0, 0.0]), Variant::General).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn invalid_params_are_named() {
        let mut p = CovariantParams::maximally_mixed();
        p.c00 = 0.5;
        let err = build_covariant_choi(&p).unwrap_err();
        assert!(err.to_string().contains("trace preservation"), "{err}");

        let p = CovariantParams {
            c00: -0.1,
            c11: 0.4,
            c22: 0.4,
            c33: 0.3,
            c24: 0.0,
            c12: (0.0, 0.0),
        };
        assert!(build_covariant_choi(&p).unwrap_err().to_string().contains("c00"));

        let p = CovariantParams {
            c12: (0.4, 0.0),
            ..CovariantParams::maximally_mixed()
        };
        assert!(build_covariant_choi(&p).unwrap_err().to_string().contains("block"));
    }

    #[test]
    fn real_variant_conjugation() {
        let r = build_covariant_choi(&sample_params()).unwrap();
        let r1 = to_real_variant(&r);
        let a = r.matrix().hermitian_eigenvalues().unwrap();
        let b = r1.matrix().hermitian_eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(r1.tp_residual() < 1e-15);
        for t in [0.0, 0.4, 1.7, 3.0, -2.2] {
            let u = phase_representation(t, Variant::Real);
            assert!(r1.matrix().commutator(&u).max_abs() < 1e-12);
        }
    }

    #[test]
    fn channel_output_is_a_state() {
        let r = choi_for_variant(&sample_params(), Variant::Real).unwrap();
        let rho = PureQubit::new(0.9, 2.0).unwrap().density();
        let out = apply_channel(&r, &rho, Variant::Real).unwrap();
        assert!(out.is_hermitian());
        assert!((out.trace().re - 1.0).abs() < 1e-10);
        assert!(out.is_psd(1e-9).unwrap());
    }

    #[test]
    fn apply_channel_rejects_bad_input() {
        let r = universal_cloner_choi();
        let bad = ComplexMatrix::from_real_diag(&[0.7, 0.7]);
        assert!(matches!(apply_channel(&r, &bad, Variant::Real), Err(ChannelError::InvalidState(_))));
        let bad = ComplexMatrix::from_real_diag(&[1.2, -0.2]);
        assert!(apply_channel(&r, &bad, Variant::Real).is_err());
        assert!(apply_channel(&r, &ComplexMatrix::identity(4), Variant::Real).is_err());
    }

    #[test]
    fn universal_cloner_fidelity() {
        let r = universal_cloner_choi();
        let out = apply_channel(&r, &ComplexMatrix::from_real_diag(&[1.0, 0.0]), Variant::Real).unwrap();
        for slot in CloneSlot::BOTH {
            let c1 = clone_state(&out, slot).unwrap();
            assert!((c1[(0, 0)].re - 5.0 / 6.0).abs() < 1e-12);
        }
        let q = PureQubit::new(0.0, 0.0).unwrap();
        assert!((single_copy_fidelity(&r, &q, Variant::Real, CloneSlot::First) - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn universal_cloner_is_a_real_family_member() {
        let params = CovariantParams {
            c00: 0.0,
            c11: 2.0 / 3.0,
            c22: 1.0 / 6.0,
            c33: 1.0 / 6.0,
            c24: 1.0 / 6.0,
            c12: (-1.0 / 3.0, 0.0),
        };
        let fam = choi_for_variant(&params, Variant::Real).unwrap();
        assert!(fam.matrix().max_abs_diff(universal_cloner_choi().matrix()) < 1e-15);
    }

    #[test]
    fn maximally_mixed_fidelity_is_half() {
        let r = build_covariant_choi(&CovariantParams::maximally_mixed()).unwrap();
        for (xi, phi) in [(0.0, 0.0), (0.7, 1.1), (PI, 4.0)] {
            let q = PureQubit::new(xi, phi).unwrap();
            for v in Variant::ALL {
                for s in CloneSlot::BOTH {
                    assert!((single_copy_fidelity(&r, &q, v, s) - 0.5).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn clone_and_variant_indices() {
        assert_eq!(CloneSlot::from_index(3), Err(ChannelError::InvalidClone(3)));
        assert_eq!(CloneSlot::from_index(2), Ok(CloneSlot::Second));
        assert_eq!(Variant::from_index(0), Err(ChannelError::InvalidVariant(0)));
        assert_eq!(Variant::from_index(1).unwrap().index(), 1);
    }

    #[test]
    fn pure_qubit_domain() {
        assert!(PureQubit::new(-0.1, 0.0).is_err());
        assert!(PureQubit::new(PI + 1e-9, 0.0).is_err());
        let q = PureQubit::new(1.0, -1.0).unwrap();
        assert!((q.phi() - (2.0 * PI - 1.0)).abs() < 1e-15);
        let k = q.ket();
        assert!((k[0].norm_sqr() + k[1].norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_of_family_members() {
        let thetas = [0.0, 0.5, 1.3, 2.9, 4.4];
        let r2 = build_covariant_choi(&sample_params()).unwrap();
        let rep = verify_covariance(r2.matrix(), Variant::General, &thetas);
        assert!(rep.phase <= 1e-13 && rep.bit_flip_conjugate <= 1e-13, "{rep:?}");
        // an imaginary c12 is invisible to the antiunitary flip only
        assert!(rep.bit_flip > 0.1);
        let r1 = to_real_variant(&r2);
        let rep = verify_covariance(r1.matrix(), Variant::Real, &thetas);
        assert!(rep.phase <= 1e-12 && rep.bit_flip_conjugate <= 1e-12, "{rep:?}");

        let real_c12 = CovariantParams { c12: (0.12, 0.0), ..sample_params() };
        for v in Variant::ALL {
            let r = choi_for_variant(&real_c12, v).unwrap();
            assert!(verify_covariance(r.matrix(), v, &thetas).max() <= 1e-12);
        }
    }

    #[test]
    fn universal_cloner_covariance_in_both_forms() {
        let thetas = [0.3, 1.0, 2.5, 5.0];
        let r = universal_cloner_choi();
        assert!(verify_covariance(r.matrix(), Variant::Real, &thetas).max() <= 1e-12);
        let general = transpose_input(r.matrix());
        assert!(verify_covariance(&general, Variant::General, &thetas).max() <= 1e-12);
    }

    #[test]
    fn transpose_input_is_an_involution() {
        let m = sample_params().family_matrix();
        let t = transpose_input(&m);
        assert!(transpose_input(&t).max_abs_diff(&m) < 1e-16);
        // (1,2) = (00,1)-(01,0) moves to (00,0)-(01,1) = (0,3)
        assert_eq!(t[(0, 3)], m[(1, 2)]);
    }

    #[test]
    fn projection_fixes_family() {
        let p = sample_params();
        let back = symmetry_project(&p.family_matrix());
        for (a, b) in p.to_array().iter().zip(back.to_array()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_kills_cross_block_coherence() {
        // map ρ ↦ ρ ⊗ |0⟩⟨0|
        let mut h = ComplexMatrix::zeros(8, 8);
        for (i, j) in [(0, 0), (5, 5), (0, 5), (5, 0)] {
            h[(i, j)] = ONE;
        }
        let p = symmetry_project(&h);
        let back = p.family_matrix();
        assert_eq!(back[(0, 5)], ZERO);
        assert!((p.c00 - 0.5).abs() < 1e-15 && (p.c22 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn transposition_identity_at_zero_is_exact() {
        let mut rng = sampling::rng(1);
        let rep = identity_check_transposition(0.0, 10, &mut rng);
        assert_eq!(rep.superoperator, 0.0);
        assert_eq!(rep.commutator, 0.0);
    }

    #[test]
    fn superoperator_of_transposition_is_a_permutation() {
        let g = transposition();
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        );
        assert_eq!(g, expected);
    }
}
