//! `fueter`: lattice identities, kernel and spectrum of D, and spectral
//! flow of operator families read from files.

use crate::{input_error, read_input, Finished, RunConfig, PASS, SCHEMA_ERROR, VERIFICATION_FAILED};
use holokernel::fueter::{
    kernel_dimension, spectral_flow, units, FlowReport, FueterError, FueterOperator, Operator, QuaternionField,
};
use holokernel::io::{from_json, FamilyFile};
use nalgebra::SymmetricEigen;
use serde_json::{json, Value};
use std::f64::consts::PI;

pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Largest lattice whose dense spectrum is computed.
pub const DENSE_LIMIT: usize = 7;
/// Relative agreement of the dense spectrum with the discrete symbol.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

/// ±|s(k)| with s_a(k) = sin(2πk_a/N)/h, each sign twice per mode.
fn symbol_spectrum(n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let s: Vec<f64> = (0..n).map(|k| (2.0 * PI * k as f64 / n as f64).sin() / h).collect();
    let mut out = Vec::with_capacity(4 * n * n * n);
    for a in &s {
        for b in &s {
            for c in &s {
                let m = (a * a + b * b + c * c).sqrt();
                out.extend([m, m, -m, -m]);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn flow_json(r: &FlowReport) -> Value {
    json!({
        "flow": r.flow,
        "subdivisions": r.subdivisions,
        "crossings": r.crossings.iter().map(|c| json!({"t": c.t, "change": c.change})).collect::<Vec<_>>(),
    })
}

pub(crate) fn fueter(cfg: &RunConfig, n: usize) -> Finished {
    let samples = cfg.samples_or(DEFAULT_SAMPLES);
    let tolerance = cfg.tolerance_or(DEFAULT_TOLERANCE);
    let config = cfg.echo(samples, tolerance);
    let kernel = match kernel_dimension(n) {
        Ok(k) => k,
        Err(e) => return input_error(config, e),
    };
    let [i, j, k] = units();
    let op = FueterOperator::with_units(if cfg.mutate { [i, j, j] } else { [i, j, k] });
    let mut pass = true;

    let worst = (0..samples as u64)
        .map(|s| {
            let f = QuaternionField::random(n, cfg.seed.wrapping_add(s)).expect("odd lattice");
            op.square_residual(&f) / f.sup_norm()
        })
        .fold(0.0, f64::max);
    let square_ok = worst <= tolerance;
    pass &= square_ok;

    let dense = if n <= DENSE_LIMIT {
        let m = op.matrix(n).expect("odd lattice");
        let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let scale = eig.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let nullity = eig.iter().filter(|x| x.abs() <= SPECTRUM_TOLERANCE * scale).count();
        let deviation = eig
            .iter()
            .zip(symbol_spectrum(n))
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()))
            / scale;
        let ok = nullity == kernel && deviation <= SPECTRUM_TOLERANCE;
        pass &= ok;
        let mut smallest: Vec<f64> = eig
            .iter()
            .map(|x| x.abs())
            .filter(|x| *x > SPECTRUM_TOLERANCE * scale)
            .collect();
        smallest.sort_by(f64::total_cmp);
        smallest.dedup_by(|a, b| (*a - *b).abs() <= SPECTRUM_TOLERANCE * scale);
        smallest.truncate(3);
        json!({
            "nullity": nullity,
            "symbol_deviation": deviation,
            "smallest_nonzero_moduli": smallest,
            "largest_modulus": scale,
            "pass": ok,
        })
    } else {
        Value::Null
    };

    let mut families = Vec::new();
    for path in &cfg.inputs {
        let family = match read_input(path)
            .and_then(|t| from_json::<FamilyFile>(&t).map_err(|e| e.to_string()))
            .and_then(|f| f.into_family().map_err(|e| e.to_string()))
        {
            Ok(f) => f,
            Err(e) => return input_error(config, e),
        };
        let complex = matches!(family.operators()[0], Operator::Complex(_));
        let mut entry = json!({ "input": path.display().to_string(), "complex": complex });
        match spectral_flow(&family) {
            Ok(r) => entry["spectral_flow"] = flow_json(&r),
            Err(e @ FueterError::NonSimple { .. }) => {
                pass = false;
                entry["error"] = json!(e.to_string());
            }
            Err(e) => {
                return Finished::new(
                    SCHEMA_ERROR,
                    json!({ "config": config, "verdict": "schema error", "error": e.to_string() }),
                )
            }
        }
        if complex {
            match spectral_flow(&family.realified()) {
                Ok(r) => entry["realified"] = flow_json(&r),
                Err(e) => entry["realified_error"] = json!(e.to_string()),
            }
        }
        families.push(entry);
    }

    let report = json!({
        "config": config,
        "verdict": if pass { "pass" } else { "fail" },
        "lattice": n,
        "units": op.units.iter().map(|u| [u.w, u.i, u.j, u.k]).collect::<Vec<_>>(),
        "kernel_dimension": kernel,
        "square_identity": { "fields": samples, "max_relative_residual": worst, "pass": square_ok },
        "dense_spectrum": dense,
        "families": families,
    });
    Finished::new(if pass { PASS } else { VERIFICATION_FAILED }, report)
}
