//! Eavesdropper cloning fidelities for four-state key-distribution quadruples.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::channels::{PureQubit, Variant};
use crate::optimizer::{
    maximize_worst_case, optimize_fidelity, symmetric_objective, Ensemble, Result, SdpResult, SolverSettings,
    SymmetryFlags,
};

/// Tolerance attached to every reported fidelity.
pub const REPORT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadrupleKind {
    /// Four states at 45° from the poles on a single meridian.
    MeridianPi4,
    /// The two mutually unbiased bases `{|0⟩, |1⟩}` and `{|+⟩, |−⟩}`.
    Mub,
}

impl QuadrupleKind {
    pub const ALL: [QuadrupleKind; 2] = [QuadrupleKind::MeridianPi4, QuadrupleKind::Mub];

    pub fn name(self) -> &'static str {
        match self {
            QuadrupleKind::MeridianPi4 => "meridian_pi4",
            QuadrupleKind::Mub => "mub",
        }
    }
}

fn qubit(xi: f64, phi: f64) -> PureQubit {
    PureQubit::new(xi, phi).expect("fixed quadruple angles are in range")
}

/// The four protocol states with equal weights.
pub fn quadruple_states(kind: QuadrupleKind) -> Ensemble {
    let states = match kind {
        QuadrupleKind::MeridianPi4 => [
            qubit(FRAC_PI_4, 0.0),
            qubit(FRAC_PI_4, PI),
            qubit(3.0 * FRAC_PI_4, 0.0),
            qubit(3.0 * FRAC_PI_4, PI),
        ],
        QuadrupleKind::Mub => [
            qubit(0.0, 0.0),
            qubit(PI, 0.0),
            qubit(FRAC_PI_2, 0.0),
            qubit(FRAC_PI_2, PI),
        ],
    };
    Ensemble::uniform(&states).expect("four equal weights")
}

/// One representative per symmetry orbit of the quadruple, weighted by orbit size.
pub fn orbit_representatives(kind: QuadrupleKind) -> Ensemble {
    match kind {
        QuadrupleKind::MeridianPi4 => Ensemble::singleton(qubit(FRAC_PI_4, 0.0)),
        QuadrupleKind::Mub => Ensemble::uniform(&[qubit(0.0, 0.0), qubit(FRAC_PI_2, 0.0)]).expect("two equal weights"),
    }
}

/// Optimal cloner for `kind`: the largest fidelity guaranteed on every state of the quadruple.
pub fn eavesdropper_cloner(kind: QuadrupleKind, variant: Variant) -> Result<SdpResult> {
    let forms: Vec<_> = orbit_representatives(kind)
        .members()
        .iter()
        .map(|&(q, _)| symmetric_objective(&Ensemble::singleton(q), variant))
        .collect();
    maximize_worst_case(&forms, SymmetryFlags::default(), &SolverSettings::default())
}

pub fn eavesdropper_fidelity(kind: QuadrupleKind, variant: Variant) -> Result<f64> {
    Ok(eavesdropper_cloner(kind, variant)?.optimum)
}

/// Ensemble-averaged optimum over the quadruple, for comparison with the guaranteed value.
pub fn average_fidelity(kind: QuadrupleKind, variant: Variant) -> Result<f64> {
    Ok(optimize_fidelity(&quadruple_states(kind), variant, SymmetryFlags::default())?.optimum)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bb84Entry {
    pub quadruple: String,
    pub variant: usize,
    pub fidelity: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bb84Report {
    pub results: Vec<Bb84Entry>,
    /// `F(meridian, general) < F(mub, real) < F(meridian, real)` with margin.
    pub ordering_check: bool,
}

impl Bb84Report {
    pub fn fidelity(&self, kind: QuadrupleKind, variant: Variant) -> Option<f64> {
        self.results
            .iter()
            .find(|e| e.quadruple == kind.name() && e.variant == variant.index())
            .map(|e| e.fidelity)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// All (quadruple, variant) fidelities and the ordering check.
pub fn report() -> Result<Bb84Report> {
    let pairs: Vec<(QuadrupleKind, Variant)> = QuadrupleKind::ALL
        .iter()
        .flat_map(|&k| Variant::ALL.iter().map(move |&v| (k, v)))
        .collect();
    let values: Vec<Result<f64>> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(k, v)| s.spawn(move || eavesdropper_fidelity(k, v)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });

    let mut results = Vec::with_capacity(pairs.len());
    for (&(k, v), f) in pairs.iter().zip(values) {
        results.push(Bb84Entry {
            quadruple: k.name().to_string(),
            variant: v.index(),
            fidelity: f?,
            tolerance: REPORT_TOLERANCE,
        });
    }
    let mut report = Bb84Report {
        results,
        ordering_check: false,
    };
    let get = |k, v| report.fidelity(k, v).expect("every pair is present");
    let low = get(QuadrupleKind::MeridianPi4, Variant::General);
    let mid = get(QuadrupleKind::Mub, Variant::Real);
    let high = get(QuadrupleKind::MeridianPi4, Variant::Real);
    report.ordering_check = low + REPORT_TOLERANCE < mid && mid + REPORT_TOLERANCE < high;
    Ok(report)
}
