//! Residual table for `covclone verify`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;

use covclone::bb84;
use covclone::channels::{
    identity_check_transposition, phase_flip_residual, single_copy_fidelity, transposition_lemma_residual,
    universal_cloner_choi, verify_covariance, CloneSlot, Variant,
};
use covclone::optimizer::{analytic_fidelity, sdp_fidelity, uniform_grid};
use covclone::relativity::{FourVector, LittleGroup, LorentzTransform};
use covclone::sampling::{haar_qubit, random_diagonal_unitary, random_lorentz, random_photon_momentum, rng};
use rand::Rng;

const SEED: u64 = 0x5eed_c10e;

pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn phase_angles() -> Vec<f64> {
    (0..16).map(|k| TAU * k as f64 / 16.0 + 0.1).collect()
}

pub fn checks() -> Vec<Check> {
    let mut r = rng(SEED);
    let mut out = Vec::new();

    // optimizer outputs must be valid covariant channels
    let grid = uniform_grid(0.0, FRAC_PI_2, 41);
    let thetas = phase_angles();
    let (mut psd, mut tp, mut cov, mut agree) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for v in Variant::ALL {
        for &xi in &grid {
            let res = sdp_fidelity(v, xi, 0.0).expect("grid point solves");
            let choi = res.choi(v).expect("optimizer output is a valid operator");
            psd = psd.max(-choi.min_eigenvalue());
            tp = tp.max(choi.tp_residual());
            cov = cov.max(verify_covariance(choi.matrix(), v, &thetas).max());
            agree = agree.max((res.optimum - analytic_fidelity(v, xi).expect("grid in domain")).abs());
        }
    }
    out.push(Check { name: "optimum_psd_violation", residual: psd.max(0.0), tolerance: 1e-9 });
    out.push(Check { name: "optimum_trace_preservation", residual: tp, tolerance: 1e-9 });
    out.push(Check { name: "optimum_covariance", residual: cov, tolerance: 1e-9 });
    out.push(Check { name: "curve_agreement", residual: agree, tolerance: 1e-6 });

    // P_θ σX = σX P_−θ (adjoint form) and the transposition identities
    let (mut flip, mut transposition, mut lemma) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let theta = r.random_range(0.0..TAU);
        flip = flip.max(phase_flip_residual(theta));
        transposition = transposition.max(identity_check_transposition(theta, 1, &mut r).max());
        lemma = lemma.max(transposition_lemma_residual(&random_diagonal_unitary(&mut r)));
    }
    out.push(Check { name: "phase_flip_identity", residual: flip, tolerance: 1e-13 });
    out.push(Check { name: "transposition_identity", residual: transposition, tolerance: 1e-13 });
    out.push(Check { name: "transposition_lemma", residual: lemma, tolerance: 1e-13 });

    let uqcm = universal_cloner_choi();
    let mut universal = 0.0f64;
    for _ in 0..50 {
        let q = haar_qubit(&mut r);
        for slot in CloneSlot::BOTH {
            universal = universal.max((single_copy_fidelity(&uqcm, &q, Variant::Real, slot) - 5.0 / 6.0).abs());
        }
    }
    out.push(Check { name: "universal_cloner_fidelity", residual: universal, tolerance: 1e-10 });

    // little-group cocycle and stabilizer
    let lg = LittleGroup::default();
    let (mut stab, mut cocycle) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let l1 = random_lorentz(&mut r, 0.9);
        let l2 = random_lorentz(&mut r, 0.9);
        let p = random_photon_momentum(&mut r);
        stab = stab.max(lg.stabilizer_residual(&l1, &p).expect("valid momentum"));
        let whole = lg.wigner_phase(&l2.compose(&l1), &p).expect("valid momentum");
        let first = lg.wigner_phase(&l1, &p).expect("valid momentum");
        let second = lg.wigner_phase(&l2, &l1.apply(&p)).expect("valid momentum");
        cocycle = cocycle.max(whole.distance(first.add(second)));
    }
    out.push(Check { name: "stabilizer_residual", residual: stab, tolerance: 1e-8 });
    out.push(Check { name: "cocycle_additivity", residual: cocycle, tolerance: 1e-9 });

    let k = FourVector::light_like(1.0, 0.0, 0.0);
    let gamma = 0.7;
    let rot = lg.wigner_phase(&LorentzTransform::rotation_z(gamma), &k).expect("standard momentum");
    let boost = lg.wigner_phase(&LorentzTransform::boost_z(0.8), &k).expect("standard momentum");
    let trivial = rot.distance(covclone::relativity::WignerAngle::new(-gamma)).max(boost.radians().min(TAU - boost.radians()));
    out.push(Check { name: "trivial_wigner_cases", residual: trivial, tolerance: 1e-12 });

    let report = bb84::report().expect("quadruple solves");
    let published = [
        (bb84::QuadrupleKind::MeridianPi4, Variant::Real, (5.0 + 3f64.sqrt()) / 8.0),
        (bb84::QuadrupleKind::MeridianPi4, Variant::General, 0.75),
        (bb84::QuadrupleKind::Mub, Variant::Real, 5.0 / 6.0),
    ];
    let bb = published
        .iter()
        .map(|&(kind, v, f)| (report.fidelity(kind, v).expect("present") - f).abs())
        .fold(0.0, f64::max);
    out.push(Check { name: "bb84_values", residual: bb, tolerance: 1e-6 });
    out.push(Check {
        name: "bb84_ordering",
        residual: if report.ordering_check { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });
    out
}

/// Prints the residual table; true iff every check passes.
pub fn run(w: &mut impl Write) -> bool {
    let all = checks();
    let _ = writeln!(w, "{:<28} {:>14} {:>10}  status", "check", "residual", "tolerance");
    let mut ok = true;
    for c in &all {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        ok &= c.passed();
        let _ = writeln!(w, "{:<28} {:>14.3e} {:>10.0e}  {status}", c.name, c.residual, c.tolerance);
    }
    let _ = writeln!(w, "{}", if ok { "all checks passed" } else { "verification FAILED" });
    ok
}
