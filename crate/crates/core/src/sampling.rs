//! Seeded random test objects: Haar pure states, Ginibre density matrices,
//! random Lorentz transformations and photon momenta.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::channels::PureQubit;
use crate::linalg::ComplexMatrix;
use crate::relativity::{FourVector, LorentzTransform};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure qubit.
pub fn haar_qubit(rng: &mut impl Rng) -> PureQubit {
    let a = gaussian_complex(rng);
    let b = gaussian_complex(rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let xi = 2.0 * (a.norm() / n).clamp(0.0, 1.0).acos();
    let phi = b.arg() - a.arg();
    PureQubit::new(xi, phi).expect("Haar sample lies in the parameter domain")
}

/// Full-rank mixed state `G G† / Tr(G G†)` with Gaussian `G`.
pub fn ginibre_density(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_vec(dim, dim, (0..dim * dim).map(|_| gaussian_complex(rng)).collect());
    let w = &g * &g.dagger();
    let tr = w.trace().re;
    let mut rho = w.scale_real(1.0 / tr);
    // exact Hermitian symmetry
    for i in 0..dim {
        rho[(i, i)] = Complex64::new(rho[(i, i)].re, 0.0);
        for j in i + 1..dim {
            let z = rho[(i, j)];
            rho[(j, i)] = z.conj();
        }
    }
    rho
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in i + 1..dim {
            let z = gaussian_complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Diagonal unitary `diag(e^{ia}, e^{ib})` with uniform phases.
pub fn random_diagonal_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let a: f64 = rng.random_range(0.0..TAU);
    let b: f64 = rng.random_range(0.0..TAU);
    ComplexMatrix::from_diag(&[Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b)])
}

fn random_unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Boost with speed below `max_speed` in a random direction after a random rotation.
pub fn random_lorentz(rng: &mut impl Rng, max_speed: f64) -> LorentzTransform {
    let axis = random_unit_vector(rng);
    let angle: f64 = rng.random_range(-PI..PI);
    let rot = LorentzTransform::rotation(axis, angle).expect("unit axis");
    let n = random_unit_vector(rng);
    let speed: f64 = rng.random_range(0.0..max_speed);
    let boost = LorentzTransform::boost([n[0] * speed, n[1] * speed, n[2] * speed]).expect("subluminal");
    boost.compose(&rot)
}

/// Light-like future-pointing momentum with frequency in `[0.2, 5)`.
pub fn random_photon_momentum(rng: &mut impl Rng) -> FourVector {
    let omega: f64 = rng.random_range(0.2..5.0);
    let d = random_unit_vector(rng);
    FourVector::new(omega, omega * d[0], omega * d[1], omega * d[2])
}
