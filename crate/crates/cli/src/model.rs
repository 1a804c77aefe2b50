//! `model-run`: twisted Betti numbers over an α grid, with the cellular
//! oracle and the convergence profile.

use crate::report::{complex, parse_complex};
use crate::{input_error, read_input, Finished, RunConfig, DIVERGED, PASS, VERIFICATION_FAILED};
use holokernel::io::{from_json, FlowModelFile, Rational};
use holokernel::novikov::fixtures::oracle as named_oracle;
use holokernel::novikov::model::{betti_numbers, RANK_TOLERANCE};
use holokernel::novikov::NovikovError;
use holokernel::par::stream_rng;
use holokernel::scalar;
use num::complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};
use std::f64::consts::PI;

pub const DEFAULT_SAMPLES: usize = 100;

struct GridPoint {
    label: String,
    alpha: Vec<Complex64>,
    /// Unit monodromy: the untwisted values are expected here.
    special: bool,
}

fn grid(rank: usize, extra: &[Vec<Complex64>], samples: usize, seed: u64) -> Vec<GridPoint> {
    let mut points = vec![GridPoint {
        label: "trivial".into(),
        alpha: vec![Complex64::new(0.0, 0.0); rank],
        special: true,
    }];
    for k in 0..rank {
        let mut alpha = vec![Complex64::new(0.0, 0.0); rank];
        alpha[k] = Complex64::new(0.0, 2.0 * PI);
        points.push(GridPoint {
            label: format!("unit_monodromy_{k}"),
            alpha,
            special: true,
        });
    }
    for (i, alpha) in extra.iter().enumerate() {
        points.push(GridPoint {
            label: format!("given_{i}"),
            alpha: alpha.clone(),
            special: false,
        });
    }
    for i in 0..samples {
        let mut rng = stream_rng(seed, i as u64);
        let alpha = (0..rank)
            .map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-PI..PI)))
            .collect();
        points.push(GridPoint {
            label: format!("random_{i}"),
            alpha,
            special: false,
        });
    }
    points
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x + 0.0)
    } else {
        Value::Null
    }
}

pub(crate) fn model_run(cfg: &RunConfig, oracle: Option<&str>, alpha: &[String]) -> Finished {
    let samples = cfg.samples_or(DEFAULT_SAMPLES);
    let tolerance = cfg.tolerance_or(RANK_TOLERANCE);
    let config = cfg.echo(samples, tolerance);
    let [path] = cfg.inputs.as_slice() else {
        return input_error(config, "model-run takes exactly one --input flow model");
    };
    let mut file: FlowModelFile = match read_input(path).and_then(|t| from_json(&t).map_err(|e| e.to_string())) {
        Ok(f) => f,
        Err(e) => return input_error(config, e),
    };
    if let Some(h) = &cfg.horizon {
        match scalar::parse(h) {
            Ok(t) => file.horizon = Some(Rational(t)),
            Err(e) => return input_error(config, format!("--horizon: {e}")),
        }
    }
    let model = match file.into_model() {
        Ok(m) => m,
        Err(e) => return input_error(config, e),
    };
    let rank = model.lattice_rank();
    let oracle = match oracle.map(|name| (name, named_oracle(name))) {
        None => None,
        Some((name, None)) => return input_error(config, format!("unknown oracle `{name}`")),
        Some((name, Some(k))) if k.rank() != rank => {
            return input_error(
                config,
                format!("oracle `{name}` has lattice rank {}, the model {rank}", k.rank()),
            )
        }
        Some((name, Some(k))) => Some((name, k)),
    };
    let mut extra = Vec::new();
    for a in alpha {
        match parse_complex(a) {
            Ok(v) if v.len() == rank => extra.push(v),
            Ok(v) => {
                return input_error(
                    config,
                    format!("--alpha has {} components, the model rank is {rank}", v.len()),
                )
            }
            Err(e) => return input_error(config, format!("--alpha: {e}")),
        }
    }

    let cells = model.cell_counts();
    let points = grid(rank, &extra, samples, cfg.seed);
    let mut rows = Vec::with_capacity(points.len());
    let (mut diverged, mut mismatched) = (None, None);
    for p in &points {
        let mut row = json!({
            "label": p.label,
            "alpha": p.alpha.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
            "decay_rate": finite(model.decay_rate(&p.alpha)),
        });
        let betti = match model.novikov_differential(&p.alpha) {
            Ok(d) => betti_numbers(&cells, &d, tolerance),
            Err(e @ (NovikovError::Divergent { .. } | NovikovError::Overflow(..))) => {
                row["refused"] = json!(e.to_string());
                diverged.get_or_insert_with(|| row.clone());
                rows.push(row);
                continue;
            }
            Err(e) => return input_error(config, e),
        };
        row["betti"] = json!(betti);
        let compare = !(p.special && model.is_generic_only());
        if let (Some((_, k)), true) = (&oracle, compare) {
            match k.betti(&p.alpha) {
                Ok(expected) => {
                    let agree = expected == betti;
                    row["oracle_betti"] = json!(expected);
                    row["agree"] = json!(agree);
                    if !agree {
                        mismatched.get_or_insert_with(|| row.clone());
                    }
                }
                Err(e) => row["oracle_refused"] = json!(e.to_string()),
            }
        }
        rows.push(row);
    }

    let profile = model.convergence();
    let (code, verdict, first) = match (&diverged, &mismatched) {
        (Some(d), _) => (DIVERGED, "diverged", d.clone()),
        (None, Some(m)) => (VERIFICATION_FAILED, "oracle mismatch", m.clone()),
        (None, None) => (PASS, "pass", Value::Null),
    };
    let report = json!({
        "config": config,
        "verdict": verdict,
        "model": {
            "lattice_rank": rank,
            "cells": cells,
            "euler_characteristic": model.euler_characteristic(),
            "generic_only": model.is_generic_only(),
        },
        "oracle": oracle.as_ref().map(|(name, k)| json!({
            "name": name,
            "cells": k.cells(),
            "euler_characteristic": k.euler_characteristic(),
        })),
        "convergence": {
            "complete": profile.complete,
            "rho_hat": profile.rho_hat,
            "shells": profile.shells,
        },
        "grid": rows,
        "first_failure": first,
    });
    Finished::new(code, report)
}
