//! Lorentz transformations of light-like momenta and the Wigner phase of
//! photon helicity states.
//!
//! The little group of the standard momentum `k = ω₀(1, 0, 0, 1)` is ISO(2).
//! A helicity state `|p, σ⟩` picks up `exp(iσϑ)` under `Λ`, where `ϑ` is the
//! rotation angle of `W(Λ, p) = L(Λp)⁻¹ Λ L(p)`. Metric signature is
//! (+, −, −, −) and components are ordered (t, x, y, z).

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::ComplexMatrix;

/// Relative light-cone tolerance `|p·p| ≤ LIGHT_LIKE_TOL · (p.t)²`.
pub const LIGHT_LIKE_TOL: f64 = 1e-9;
const METRIC_TOL: f64 = 1e-10;
const DET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelativityError {
    #[error("momentum is not light-like: p·p = {dot:e} with p.t = {t}")]
    NotLightLike { dot: f64, t: f64 },

    #[error("momentum is not future-pointing: p.t = {0}")]
    NotFuturePointing(f64),

    #[error("not a proper orthochronous Lorentz transformation: {0}")]
    InvalidTransform(String),

    #[error("boost speed {0} is not below the speed of light")]
    Superluminal(f64),

    #[error("invalid wave packet: {0}")]
    InvalidWavePacket(String),

    #[error("invalid polarization state: {0}")]
    InvalidState(String),

    #[error("transformed frequency {0} is not positive")]
    NonPositiveFrequency(f64),
}

pub type Result<T> = std::result::Result<T, RelativityError>;

fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    /// Light-like momentum `ω(1, sinθcosφ, sinθsinφ, cosθ)`.
    pub fn light_like(omega: f64, theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(omega, omega * st * cp, omega * st * sp, omega * ct)
    }

    /// Minkowski product with signature (+, −, −, −).
    pub fn dot(&self, other: &Self) -> f64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn is_light_like(&self) -> bool {
        self.dot(self).abs() <= LIGHT_LIKE_TOL * self.t * self.t
    }

    /// Fails unless the vector is light-like and future-pointing.
    pub fn check_photon_momentum(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(RelativityError::NotFuturePointing(self.t));
        }
        if !self.is_light_like() {
            return Err(RelativityError::NotLightLike {
                dot: self.dot(self),
                t: self.t,
            });
        }
        Ok(())
    }

    /// Polar and azimuthal angle of the spatial part. The azimuth is 0 on the z axis.
    pub fn direction_angles(&self) -> (f64, f64) {
        let r = self.spatial().norm();
        let rho = self.x.hypot(self.y);
        let theta = rho.atan2(self.z);
        let phi = if rho <= 1e-15 * r { 0.0 } else { self.y.atan2(self.x) };
        (theta, phi)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.as_vector() - other.as_vector()).norm()
    }

    fn as_vector(&self) -> Vector4<f64> {
        Vector4::new(self.t, self.x, self.y, self.z)
    }

    fn from_vector(v: Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// Proper orthochronous Lorentz transformation acting on column four-vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTransform {
    m: Matrix4<f64>,
}

impl LorentzTransform {
    /// Validates `ΛᵀηΛ = η`, `det Λ = 1` and `Λ.tt ≥ 1`.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let eta = metric();
        let defect = (m.transpose() * eta * m - eta).abs().max();
        if defect > METRIC_TOL {
            return Err(RelativityError::InvalidTransform(format!(
                "metric defect {defect:e}"
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > DET_TOL {
            return Err(RelativityError::InvalidTransform(format!("determinant {det}")));
        }
        if m[(0, 0)] < 1.0 - METRIC_TOL {
            return Err(RelativityError::InvalidTransform(format!(
                "time-time component {} < 1",
                m[(0, 0)]
            )));
        }
        Ok(Self { m })
    }

    fn from_trusted(m: Matrix4<f64>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self::from_trusted(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Active rotation by `angle` about the z axis.
    pub fn rotation_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = Matrix4::identity();
        m[(1, 1)] = c;
        m[(1, 2)] = -s;
        m[(2, 1)] = s;
        m[(2, 2)] = c;
        Self::from_trusted(m)
    }

    /// Active rotation by `angle` about the y axis.
    pub fn rotation_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = Matrix4::identity();
        m[(1, 1)] = c;
        m[(1, 3)] = s;
        m[(3, 1)] = -s;
        m[(3, 3)] = c;
        Self::from_trusted(m)
    }

    /// Active rotation by `angle` about an arbitrary axis (Rodrigues formula).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = Vector3::from(axis);
        let norm = n.norm();
        if !(norm > 0.0) || !norm.is_finite() || !angle.is_finite() {
            return Err(RelativityError::InvalidTransform(format!(
                "rotation axis {axis:?} / angle {angle} invalid"
            )));
        }
        let n = n / norm;
        let (s, c) = angle.sin_cos();
        let mut m = Matrix4::identity();
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                // [n]× entries
                let cross = if i == j {
                    0.0
                } else {
                    let sign = if (i + 1) % 3 == j { -1.0 } else { 1.0 };
                    sign * n[3 - i - j]
                };
                m[(i + 1, j + 1)] = c * delta + (1.0 - c) * n[i] * n[j] + s * cross;
            }
        }
        Ok(Self::from_trusted(m))
    }

    /// `R_z(φ)·R_y(θ)·R_z(−φ)`: takes ẑ to (sinθcosφ, sinθsinφ, cosθ).
    pub fn direction_rotation(theta: f64, phi: f64) -> Self {
        Self::rotation_z(phi)
            .compose(&Self::rotation_y(theta))
            .compose(&Self::rotation_z(-phi))
    }

    /// Boost along z with rapidity `chi`: `k = (1,0,0,1) ↦ e^χ k`.
    pub fn boost_z(chi: f64) -> Self {
        let (sh, ch) = (chi.sinh(), chi.cosh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        m[(0, 3)] = sh;
        m[(3, 0)] = sh;
        m[(3, 3)] = ch;
        Self::from_trusted(m)
    }

    /// Pure boost giving a particle at rest the velocity `v` (units of c).
    pub fn boost(v: [f64; 3]) -> Result<Self> {
        let v = Vector3::from(v);
        let beta = v.norm();
        if !(beta < 1.0) {
            return Err(RelativityError::Superluminal(beta));
        }
        if beta == 0.0 {
            return Ok(Self::identity());
        }
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let n = v / beta;
        let mut m = Matrix4::identity();
        m[(0, 0)] = gamma;
        for i in 0..3 {
            m[(0, i + 1)] = gamma * v[i];
            m[(i + 1, 0)] = gamma * v[i];
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                m[(i + 1, j + 1)] = delta + (gamma - 1.0) * n[i] * n[j];
            }
        }
        Ok(Self::from_trusted(m))
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_trusted(self.m * other.m)
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let eta = metric();
        Self::from_trusted(eta * self.m.transpose() * eta)
    }

    pub fn apply(&self, p: &FourVector) -> FourVector {
        FourVector::from_vector(self.m * p.as_vector())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).abs().max()
    }
}

/// Wigner rotation angle, normalized to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerAngle(f64);

impl WignerAngle {
    pub fn new(theta: f64) -> Self {
        assert!(theta.is_finite(), "Wigner angle must be finite");
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        Self(t)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.0 + other.0)
    }

    /// Shortest circular distance to `other`, in `[0, π]`.
    pub fn distance(self, other: Self) -> f64 {
        let d = (self.0 - other.0).rem_euclid(TAU);
        d.min(TAU - d)
    }
}

/// Little-group machinery for the standard momentum `k = ω₀(1, 0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LittleGroup {
    omega0: f64,
}

impl Default for LittleGroup {
    fn default() -> Self {
        Self { omega0: 1.0 }
    }
}

impl LittleGroup {
    pub fn new(omega0: f64) -> Self {
        assert!(omega0 > 0.0 && omega0.is_finite(), "reference frequency must be positive");
        Self { omega0 }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn standard_momentum(&self) -> FourVector {
        FourVector::new(self.omega0, 0.0, 0.0, self.omega0)
    }

    /// The standard transform `L(p) = R(θ_p, φ_p) · B_z(ln(p.t/ω₀))` with `L(p) k = p`.
    pub fn standard_transform(&self, p: &FourVector) -> Result<LorentzTransform> {
        p.check_photon_momentum()?;
        let (theta, phi) = p.direction_angles();
        let rapidity = (p.t / self.omega0).ln();
        Ok(LorentzTransform::direction_rotation(theta, phi).compose(&LorentzTransform::boost_z(rapidity)))
    }

    /// `W(Λ, p) = L(Λp)⁻¹ Λ L(p)`, an element of the stabilizer of `k`.
    pub fn element(&self, lambda: &LorentzTransform, p: &FourVector) -> Result<LorentzTransform> {
        let lp = self.standard_transform(p)?;
        let q = lambda.apply(p);
        let lq = self.standard_transform(&q)?;
        Ok(lq.inverse().compose(lambda).compose(&lp))
    }

    /// Rotation angle of the little-group element. `R_z(γ)` acting on `k` gives `−γ`.
    pub fn wigner_phase(&self, lambda: &LorentzTransform, p: &FourVector) -> Result<WignerAngle> {
        let w = self.element(lambda, p)?;
        let m = w.matrix();
        // xy block of an ISO(2) element is exactly the rotation part
        let theta = (m[(1, 2)] - m[(2, 1)]).atan2(m[(1, 1)] + m[(2, 2)]);
        Ok(WignerAngle::new(theta))
    }

    /// `‖W k − k‖` for the little-group element of `(Λ, p)`.
    pub fn stabilizer_residual(&self, lambda: &LorentzTransform, p: &FourVector) -> Result<f64> {
        let w = self.element(lambda, p)?;
        let k = self.standard_momentum();
        Ok(w.apply(&k).distance(&k))
    }

    /// Transforms every sample of the packet: frequencies follow `Λp`, helicity
    /// amplitudes pick up `e^{±iϑ}`; quadrature weights are invariant.
    pub fn transform_wavepacket(&self, lambda: &LorentzTransform, wp: &WavePacket) -> Result<WavePacket> {
        let d = wp.direction;
        let mut samples = Vec::with_capacity(wp.samples.len());
        let mut new_direction = None;
        for s in &wp.samples {
            let p = FourVector::new(s.omega, s.omega * d[0], s.omega * d[1], s.omega * d[2]);
            let q = lambda.apply(&p);
            if !(q.t > 0.0) {
                return Err(RelativityError::NonPositiveFrequency(q.t));
            }
            let theta = self.wigner_phase(lambda, &p)?.radians();
            let phase = Complex64::from_polar(1.0, theta);
            if new_direction.is_none() {
                let sp = q.spatial() / q.spatial().norm();
                new_direction = Some([sp[0], sp[1], sp[2]]);
            }
            samples.push(Sample {
                omega: q.t,
                weight: s.weight,
                f_plus: s.f_plus * phase,
                f_minus: s.f_minus * phase.conj(),
            });
        }
        let direction = new_direction.unwrap_or(d);
        WavePacket::new(direction, samples)
    }
}

/// One quadrature node of a wave packet along a fixed direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub omega: f64,
    pub weight: f64,
    /// Amplitude of helicity +1 (logical |0⟩).
    pub f_plus: Complex64,
    /// Amplitude of helicity −1 (logical |1⟩).
    pub f_minus: Complex64,
}

/// Photon wave packet with sharp direction and a frequency spread.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    direction: [f64; 3],
    samples: Vec<Sample>,
}

impl WavePacket {
    pub fn new(direction: [f64; 3], samples: Vec<Sample>) -> Result<Self> {
        let n = Vector3::from(direction).norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(RelativityError::InvalidWavePacket(format!(
                "direction norm {n} is not 1"
            )));
        }
        if samples.is_empty() {
            return Err(RelativityError::InvalidWavePacket("no samples".into()));
        }
        if let Some(s) = samples.iter().find(|s| !(s.omega > 0.0)) {
            return Err(RelativityError::InvalidWavePacket(format!(
                "non-positive frequency {}",
                s.omega
            )));
        }
        if let Some(s) = samples.iter().find(|s| !(s.weight > 0.0)) {
            return Err(RelativityError::InvalidWavePacket(format!(
                "non-positive weight {}",
                s.weight
            )));
        }
        let wp = Self { direction, samples };
        let norm = wp.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(RelativityError::InvalidWavePacket(format!(
                "normalization {norm} is not 1"
            )));
        }
        Ok(wp)
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// `Σ w (|f₊|² + |f₋|²)`.
    pub fn norm_sqr(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.weight * (s.f_plus.norm_sqr() + s.f_minus.norm_sqr()))
            .sum()
    }

    /// Reduced 2×2 polarization matrix after tracing out the frequencies.
    pub fn polarization_density(&self) -> Result<PolarizationState> {
        let mut r00 = 0.0;
        let mut r11 = 0.0;
        let mut r01 = Complex64::new(0.0, 0.0);
        for s in &self.samples {
            r00 += s.weight * s.f_plus.norm_sqr();
            r11 += s.weight * s.f_minus.norm_sqr();
            r01 += s.f_plus * s.f_minus.conj() * s.weight;
        }
        let rho = ComplexMatrix::from_vec(
            2,
            2,
            vec![Complex64::new(r00, 0.0), r01, r01.conj(), Complex64::new(r11, 0.0)],
        );
        PolarizationState::new(rho)
    }
}

/// Polarization density matrix in the helicity basis {|0⟩ = σ₊, |1⟩ = σ₋}.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationState {
    rho: ComplexMatrix,
}

impl PolarizationState {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.rows() != 2 || rho.cols() != 2 {
            return Err(RelativityError::InvalidState(format!(
                "expected 2x2, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        if !rho.is_hermitian() {
            return Err(RelativityError::InvalidState("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(RelativityError::InvalidState(format!("trace {tr}")));
        }
        let (a, b, c) = (rho[(0, 0)].re, rho[(1, 1)].re, rho[(0, 1)].norm_sqr());
        if a < -1e-10 || b < -1e-10 || c > a * b + 1e-12 {
            return Err(RelativityError::InvalidState(format!(
                "not positive: diag ({a}, {b}), |ρ01|² = {c}"
            )));
        }
        Ok(Self { rho })
    }

    /// State of the pure qubit `α|0⟩ + β|1⟩` (normalized internally).
    pub fn pure(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        Self::new(ComplexMatrix::outer(&[alpha / n, beta / n]))
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Multiplies the coherence `ρ₀₁` by `e^{2iϑ}`.
    pub fn apply_wigner_phase(&self, theta: WignerAngle) -> Self {
        let phase = Complex64::from_polar(1.0, 2.0 * theta.radians());
        let mut rho = self.rho.clone();
        rho[(0, 1)] *= phase;
        rho[(1, 0)] *= phase.conj();
        Self { rho }
    }
}

/// Direction from polar/azimuthal angles.
pub fn unit_direction(theta: f64, phi: f64) -> [f64; 3] {
    let p = FourVector::light_like(1.0, theta, phi);
    [p.x, p.y, p.z]
}

/// Wraps an angle to (−π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: FourVector = FourVector {
        t: 1.0,
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn direction_rotation_examples() {
        assert!(LorentzTransform::direction_rotation(0.0, 1.234).max_abs_diff(&LorentzTransform::identity()) < 1e-15);
        let q = LorentzTransform::direction_rotation(PI / 2.0, 0.0).apply(&K);
        assert!(q.distance(&FourVector::new(1.0, 1.0, 0.0, 0.0)) < 1e-15);
        let (th, ph) = (0.8, 2.2);
        let q = LorentzTransform::direction_rotation(th, ph).apply(&K);
        assert!(q.distance(&FourVector::light_like(1.0, th, ph)) < 1e-15);
    }

    #[test]
    fn rotations_are_proper() {
        let mut s = 0.37f64;
        for _ in 0..100 {
            s = (s * 7919.0).fract();
            let th = s * PI;
            s = (s * 104729.0).fract();
            let ph = s * TAU;
            let r = LorentzTransform::direction_rotation(th, ph);
            assert!(LorentzTransform::new(*r.matrix()).is_ok());
            let sp = r.matrix().fixed_view::<3, 3>(1, 1).into_owned();
            assert!((sp.transpose() * sp - nalgebra::Matrix3::identity()).abs().max() < 1e-14);
            assert!((sp.determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn boost_z_examples() {
        assert_eq!(LorentzTransform::boost_z(0.0), LorentzTransform::identity());
        let chi = 0.9;
        let q = LorentzTransform::boost_z(chi).apply(&K);
        let e = chi.exp();
        assert!(q.distance(&FourVector::new(e, 0.0, 0.0, e)) < 1e-14);
        let ab = LorentzTransform::boost_z(0.4).compose(&LorentzTransform::boost_z(-1.3));
        assert!(ab.max_abs_diff(&LorentzTransform::boost_z(-0.9)) < 1e-14);
    }

    #[test]
    fn general_boost_matches_boost_z() {
        let b = LorentzTransform::boost([0.0, 0.0, 0.5]).unwrap();
        assert!(b.max_abs_diff(&LorentzTransform::boost_z(0.5f64.atanh())) < 1e-14);
        assert!(matches!(
            LorentzTransform::boost([0.6, 0.0, 0.8]),
            Err(RelativityError::Superluminal(_))
        ));
        let b = LorentzTransform::boost([0.3, -0.2, 0.4]).unwrap();
        assert!(LorentzTransform::new(*b.matrix()).is_ok());
    }

    #[test]
    fn axis_rotation_matches_elementary_rotations() {
        let r = LorentzTransform::rotation([0.0, 0.0, 2.0], 0.7).unwrap();
        assert!(r.max_abs_diff(&LorentzTransform::rotation_z(0.7)) < 1e-15);
        let r = LorentzTransform::rotation([0.0, 1.0, 0.0], -1.1).unwrap();
        assert!(r.max_abs_diff(&LorentzTransform::rotation_y(-1.1)) < 1e-15);
        let r = LorentzTransform::rotation([1.0, 0.0, 0.0], PI / 2.0).unwrap();
        // x-rotation by π/2 takes ŷ to ẑ
        let q = r.apply(&FourVector::new(1.0, 0.0, 1.0, 0.0));
        assert!(q.distance(&FourVector::new(1.0, 0.0, 0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn lorentz_validation_rejects_bad_matrices() {
        let mut m = Matrix4::identity();
        m[(1, 1)] = -1.0;
        assert!(LorentzTransform::new(m).is_err()); // parity
        let m = -Matrix4::<f64>::identity();
        assert!(LorentzTransform::new(m).is_err()); // time reversal
        let mut m = Matrix4::identity();
        m[(0, 1)] = 0.1;
        assert!(LorentzTransform::new(m).is_err());
    }

    #[test]
    fn standard_transform_examples() {
        let lg = LittleGroup::default();
        let l = lg.standard_transform(&K).unwrap();
        assert!(l.max_abs_diff(&LorentzTransform::identity()) < 1e-15);
        let l = lg.standard_transform(&FourVector::new(2.0, 0.0, 0.0, 2.0)).unwrap();
        assert!(l.max_abs_diff(&LorentzTransform::boost_z(2f64.ln())) < 1e-15);
        let p = FourVector::new(1.0, 1.0, 0.0, 0.0);
        let l = lg.standard_transform(&p).unwrap();
        assert!(l.max_abs_diff(&LorentzTransform::direction_rotation(PI / 2.0, 0.0)) < 1e-15);
        assert!(l.apply(&K).distance(&p) < 1e-9);
        // south pole: azimuth convention
        let p = FourVector::new(3.0, 0.0, 0.0, -3.0);
        assert!(lg.standard_transform(&p).unwrap().apply(&K).distance(&p) < 1e-9);
    }

    #[test]
    fn standard_transform_respects_reference_frequency() {
        let lg = LittleGroup::new(2.5);
        let p = FourVector::light_like(0.7, 1.9, -0.4);
        let l = lg.standard_transform(&p).unwrap();
        assert!(l.apply(&lg.standard_momentum()).distance(&p) < 1e-9);
    }

    #[test]
    fn standard_transform_errors() {
        let lg = LittleGroup::default();
        assert!(matches!(
            lg.standard_transform(&FourVector::new(1.0, 0.0, 0.0, 0.5)),
            Err(RelativityError::NotLightLike { .. })
        ));
        assert!(matches!(
            lg.standard_transform(&FourVector::new(-1.0, 0.0, 0.0, 1.0)),
            Err(RelativityError::NotFuturePointing(_))
        ));
    }

    #[test]
    fn wigner_phase_trivial_cases() {
        let lg = LittleGroup::default();
        let ph = lg.wigner_phase(&LorentzTransform::rotation_z(0.7), &K).unwrap();
        assert!((ph.radians() - (TAU - 0.7)).abs() < 1e-12);
        let ph = lg.wigner_phase(&LorentzTransform::boost_z(1.3), &K).unwrap();
        assert!(ph.distance(WignerAngle::new(0.0)) < 1e-12);
        let w = lg.element(&LorentzTransform::boost_z(1.3), &K).unwrap();
        assert!(w.max_abs_diff(&LorentzTransform::identity()) < 1e-12);
        let w = lg.element(&LorentzTransform::identity(), &FourVector::light_like(2.0, 0.4, 0.3)).unwrap();
        assert!(w.max_abs_diff(&LorentzTransform::identity()) < 1e-12);
    }

    #[test]
    fn wigner_angle_normalization() {
        assert_eq!(WignerAngle::new(-0.5).radians(), TAU - 0.5);
        assert_eq!(WignerAngle::new(TAU).radians(), 0.0);
        assert!(WignerAngle::new(1e-17 - TAU).radians() < TAU);
        assert!((WignerAngle::new(0.1).distance(WignerAngle::new(TAU - 0.1)) - 0.2).abs() < 1e-15);
    }

    fn packet_z() -> WavePacket {
        WavePacket::new(
            [0.0, 0.0, 1.0],
            vec![
                Sample { omega: 1.0, weight: 0.5, f_plus: c(0.8, 0.0), f_minus: c(0.0, 0.6) },
                Sample { omega: 2.0, weight: 0.5, f_plus: c(0.0, 0.8), f_minus: c(0.6, 0.0) },
            ],
        )
        .unwrap()
    }

    #[test]
    fn wavepacket_identity_transform() {
        let wp = packet_z();
        let out = LittleGroup::default().transform_wavepacket(&LorentzTransform::identity(), &wp).unwrap();
        assert_eq!(out.direction(), wp.direction());
        for (a, b) in out.samples().iter().zip(wp.samples()) {
            assert!((a.omega - b.omega).abs() < 1e-15);
            assert!((a.f_plus - b.f_plus).norm() < 1e-15 && (a.f_minus - b.f_minus).norm() < 1e-15);
        }
    }

    #[test]
    fn wavepacket_boost_and_rotation() {
        let lg = LittleGroup::default();
        let wp = packet_z();
        let chi = 0.6;
        let out = lg.transform_wavepacket(&LorentzTransform::boost_z(chi), &wp).unwrap();
        for (a, b) in out.samples().iter().zip(wp.samples()) {
            let expected = LorentzTransform::boost_z(chi).apply(&FourVector::new(b.omega, 0.0, 0.0, b.omega)).t;
            assert!((a.omega - expected).abs() < 1e-14);
            assert!((a.omega - chi.exp() * b.omega).abs() < 1e-13);
            assert!((a.f_plus - b.f_plus).norm() < 1e-12);
        }
        let g = 1.1;
        let out = lg.transform_wavepacket(&LorentzTransform::rotation_z(g), &wp).unwrap();
        for (a, b) in out.samples().iter().zip(wp.samples()) {
            assert!((a.omega - b.omega).abs() < 1e-14);
            assert!((a.f_plus - b.f_plus * Complex64::from_polar(1.0, -g)).norm() < 1e-12);
            assert!((a.f_minus - b.f_minus * Complex64::from_polar(1.0, g)).norm() < 1e-12);
        }
    }

    #[test]
    fn wavepacket_validation() {
        let s = Sample { omega: 1.0, weight: 1.0, f_plus: c(1.0, 0.0), f_minus: c(0.0, 0.0) };
        assert!(WavePacket::new([0.0, 0.0, 1.0], vec![s]).is_ok());
        assert!(WavePacket::new([0.0, 0.0, 2.0], vec![s]).is_err());
        assert!(WavePacket::new([0.0, 0.0, 1.0], vec![Sample { omega: 0.0, ..s }]).is_err());
        assert!(WavePacket::new([0.0, 0.0, 1.0], vec![Sample { weight: 0.5, ..s }]).is_err());
    }

    #[test]
    fn polarization_density_examples() {
        let one = |fp: Complex64, fm: Complex64| {
            WavePacket::new([0.0, 0.0, 1.0], vec![Sample { omega: 1.0, weight: 1.0, f_plus: fp, f_minus: fm }])
                .unwrap()
                .polarization_density()
                .unwrap()
        };
        let rho = one(c(1.0, 0.0), c(0.0, 0.0));
        assert!(rho.rho().max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
        let h = 0.5f64.sqrt();
        let rho = one(c(h, 0.0), c(h, 0.0));
        assert!((rho.rho()[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-14);

        let wp = WavePacket::new(
            [0.0, 0.0, 1.0],
            vec![
                Sample { omega: 1.0, weight: 0.5, f_plus: c(1.0, 0.0), f_minus: c(0.0, 0.0) },
                Sample { omega: 3.0, weight: 0.5, f_plus: c(0.0, 0.0), f_minus: c(1.0, 0.0) },
            ],
        )
        .unwrap();
        let rho = wp.polarization_density().unwrap();
        assert!(rho.rho().max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn apply_wigner_phase_examples() {
        let rho = PolarizationState::pure(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let same = rho.apply_wigner_phase(WignerAngle::new(0.0));
        assert!(same.rho().max_abs_diff(rho.rho()) < 1e-15);
        let same = rho.apply_wigner_phase(WignerAngle::new(PI));
        assert!(same.rho().max_abs_diff(rho.rho()) < 1e-15);
        let neg = rho.apply_wigner_phase(WignerAngle::new(PI / 2.0));
        assert!((neg.rho()[(0, 1)] + rho.rho()[(0, 1)]).norm() < 1e-15);
        assert_eq!(neg.rho()[(0, 0)], rho.rho()[(0, 0)]);
        assert!((neg.purity() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn polarization_state_validation() {
        let bad = ComplexMatrix::from_real(2, 2, &[0.5, 0.6, 0.6, 0.5]);
        assert!(PolarizationState::new(bad).is_err());
        let bad = ComplexMatrix::from_real_diag(&[0.7, 0.7]);
        assert!(PolarizationState::new(bad).is_err());
    }

    #[test]
    fn wrap_pi_range() {
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), PI);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}
