use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use covclone::bb84;
use covclone::channels::{apply_channel, clone_state, CloneSlot, PureQubit, Variant};
use covclone::linalg::ComplexMatrix;
use covclone::optimizer::{fidelity_curve, optimize_fidelity, uniform_grid, Ensemble, SymmetryFlags};
use covclone::relativity::{FourVector, LittleGroup, LorentzTransform, PolarizationState, WignerAngle};

use crate::output::{emit, sig9};
use crate::{Bb84Args, CliError, CloneArgs, CurveArgs, Format, WignerArgs};

const MAX_STEPS: usize = 10_000;

fn variant(n: usize) -> Result<Variant, CliError> {
    Variant::from_index(n).map_err(|_| CliError::Input(format!("variant must be 1 or 2, got {n}")))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("{what}: cannot parse '{t}'")))
        })
        .collect()
}

fn parse_triple(s: &str, what: &str) -> Result<[f64; 3], CliError> {
    match parse_list(s, what)?.as_slice() {
        &[a, b, c] => Ok([a, b, c]),
        _ => Err(CliError::Input(format!("{what}: expected three comma-separated numbers"))),
    }
}

/// `x|y|z,angle` or `ax,ay,az,angle`.
pub fn parse_rotation(s: &str) -> Result<LorentzTransform, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let (axis, angle) = match parts.as_slice() {
        [name, angle] => {
            let axis = match name.to_ascii_lowercase().as_str() {
                "x" => [1.0, 0.0, 0.0],
                "y" => [0.0, 1.0, 0.0],
                "z" => [0.0, 0.0, 1.0],
                other => return Err(CliError::Input(format!("rotate: unknown axis '{other}'"))),
            };
            (axis, parse_list(angle, "rotate")?[0])
        }
        [_, _, _, _] => {
            let v = parse_list(s, "rotate")?;
            ([v[0], v[1], v[2]], v[3])
        }
        _ => return Err(CliError::Input("rotate: expected axis,angle".into())),
    };
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(norm > 0.0) {
        return Err(CliError::Input("rotate: zero axis".into()));
    }
    Ok(LorentzTransform::rotation([axis[0] / norm, axis[1] / norm, axis[2] / norm], angle)?)
}

fn matrix_lines(m: &ComplexMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                format!("{}{}{}i", sig9(z.re), if z.im.is_sign_negative() { "-" } else { "+" }, sig9(z.im.abs()))
            })
            .collect();
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    s
}

pub fn curve(a: &CurveArgs) -> Result<(), CliError> {
    let v = variant(a.variant)?;
    if !(2..=MAX_STEPS).contains(&a.steps) {
        return Err(CliError::Input(format!("steps must be in [2, {MAX_STEPS}], got {}", a.steps)));
    }
    if !(0.0 <= a.xi_min && a.xi_min < a.xi_max && a.xi_max <= FRAC_PI_2) {
        return Err(CliError::Input(format!(
            "need 0 <= xi-min < xi-max <= pi/2, got [{}, {}]",
            a.xi_min, a.xi_max
        )));
    }
    let rows = fidelity_curve(v, &uniform_grid(a.xi_min, a.xi_max, a.steps), a.mode.into())?;
    let body = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows are plain data") + "\n",
        Format::Csv => {
            let first = rows.first().expect("at least two rows");
            let mut header = vec!["xi"];
            if first.f_analytic.is_some() {
                header.push("f_analytic");
            }
            if first.f_sdp.is_some() {
                header.push("f_sdp");
            }
            if first.discrepancy.is_some() {
                header.push("discrepancy");
            }
            let mut s = header.join(",") + "\n";
            for r in &rows {
                let fields: Vec<String> = [Some(r.xi), r.f_analytic, r.f_sdp, r.discrepancy]
                    .into_iter()
                    .flatten()
                    .map(sig9)
                    .collect();
                s.push_str(&fields.join(","));
                s.push('\n');
            }
            s
        }
    };
    emit(a.out.as_deref(), &body)
}

#[derive(Debug)]
struct WignerOutput {
    theta_w: f64,
    stabilizer_residual: f64,
    transformed_momentum: [f64; 4],
    little_group_element: [[f64; 4]; 4],
}

pub fn wigner(a: &WignerArgs) -> Result<(), CliError> {
    let [omega, theta, phi] = parse_triple(&a.p, "p")?;
    if !(omega > 0.0) {
        return Err(CliError::Input(format!("p: frequency must be positive, got {omega}")));
    }
    let p = FourVector::light_like(omega, theta, phi);
    p.check_photon_momentum()?;
    let mut lambda = LorentzTransform::identity();
    if let Some(r) = &a.rotate {
        lambda = parse_rotation(r)?;
    }
    if let Some(b) = &a.boost {
        let boost = LorentzTransform::boost(parse_triple(b, "boost")?)?;
        lambda = boost.compose(&lambda);
    }
    let lg = LittleGroup::default();
    let w = lg.element(&lambda, &p)?;
    let out = WignerOutput {
        theta_w: lg.wigner_phase(&lambda, &p)?.radians(),
        stabilizer_residual: lg.stabilizer_residual(&lambda, &p)?,
        transformed_momentum: {
            let q = lambda.apply(&p);
            [q.t, q.x, q.y, q.z]
        },
        little_group_element: std::array::from_fn(|i| std::array::from_fn(|j| w.matrix()[(i, j)])),
    };

    let mut s = String::new();
    let _ = writeln!(s, "theta_w = {}", sig9(out.theta_w));
    let _ = writeln!(s, "stabilizer_residual = {}", sig9(out.stabilizer_residual));
    let q = out.transformed_momentum;
    let _ = writeln!(s, "transformed_p = {},{},{},{}", sig9(q[0]), sig9(q[1]), sig9(q[2]), sig9(q[3]));
    let _ = writeln!(s, "W =");
    for row in &out.little_group_element {
        let cells: Vec<String> = row.iter().map(|&x| sig9(x)).collect();
        let _ = writeln!(s, "  [{}]", cells.join(", "));
    }
    emit(a.out.as_deref(), &s)
}

pub fn clone(a: &CloneArgs) -> Result<(), CliError> {
    let v = variant(a.variant)?;
    if !(0.0..=FRAC_PI_2).contains(&a.xi) {
        return Err(CliError::Input(format!("xi must lie in [0, pi/2], got {}", a.xi)));
    }
    if !a.phi.is_finite() || !a.theta_w.is_finite() {
        return Err(CliError::Input("phi and theta-w must be finite".into()));
    }
    let q = PureQubit::new(a.xi, a.phi)?;
    let result = optimize_fidelity(&Ensemble::singleton(q), v, SymmetryFlags::default())?;
    let choi = result.choi(v)?;

    let input = PolarizationState::new(q.density())?.apply_wigner_phase(WignerAngle::new(a.theta_w));
    let rho = input.rho();
    let joint = apply_channel(&choi, rho, v)?;

    let mut s = String::new();
    let _ = writeln!(s, "sdp_optimum = {}", sig9(result.optimum));
    let _ = writeln!(s, "input =");
    s.push_str(&matrix_lines(rho));
    for slot in CloneSlot::BOTH {
        let clone = clone_state(&joint, slot)?;
        let fidelity = (rho * &clone).trace().re;
        let n = match slot {
            CloneSlot::First => 1,
            CloneSlot::Second => 2,
        };
        let _ = writeln!(s, "clone_{n} =");
        s.push_str(&matrix_lines(&clone));
        let _ = writeln!(s, "fidelity_{n} = {}", sig9(fidelity));
    }
    emit(a.out.as_deref(), &s)
}

pub fn bb84(a: &Bb84Args) -> Result<(), CliError> {
    let report = bb84::report()?;
    emit(a.out.as_deref(), &(report.to_json() + "\n"))
}
