//! `atlas-check` and `glue`.

use crate::report::{complex, rat, rats};
use crate::{input_error, read_input, Finished, RunConfig, DIVERGED, PASS, VERIFICATION_FAILED};
use holokernel::bundles::{
    assemble_bundle, check_cocycle, pair_sections, Atlas, BundleError, CocycleReport, TransitionRecord,
};
use holokernel::io::{from_json, AtlasFile, Rational, SectionsFile};
use holokernel::par::stream_rng;
use holokernel::scalar::{self, Scalar};
use holokernel::Execution;
use num::complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const DEFAULT_SAMPLES: usize = 20;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn load_atlas(cfg: &RunConfig, path: &PathBuf) -> Result<Atlas, String> {
    let text = read_input(path)?;
    let mut file: AtlasFile = from_json(&text).map_err(|e| e.to_string())?;
    if let Some(h) = &cfg.horizon {
        let t = scalar::parse(h).map_err(|e| format!("--horizon: {e}"))?;
        match file.horizon.as_mut() {
            Some(horizon) => horizon.bound = Rational(t),
            None => return Err("--horizon needs a horizon direction in the atlas file".into()),
        }
    }
    file.into_atlas().map_err(|e| e.to_string())
}

fn random_psi(seed: u64, stream: u64, rank: usize) -> Vec<Complex64> {
    let mut rng = stream_rng(seed, stream);
    (0..rank)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-3.0..3.0)))
        .collect()
}

fn error_code(e: &BundleError) -> i32 {
    match e {
        BundleError::Overflow(..) | BundleError::BeyondHorizon { .. } => DIVERGED,
        BundleError::OutsideCone { .. } => VERIFICATION_FAILED,
        _ => crate::SCHEMA_ERROR,
    }
}

fn failed(config: Value, e: BundleError) -> Finished {
    Finished::new(
        error_code(&e),
        json!({ "config": config, "verdict": "error", "error": e.to_string() }),
    )
}

fn cocycle_json(r: &CocycleReport) -> Value {
    json!({
        "verified": r.verified,
        "pairs_checked": r.pairs_checked,
        "triples_checked": r.triples_checked,
        "failure": r.failure.as_ref().map(|f| json!({
            "route": f.route,
            "s": f.s,
            "s_prime": f.s_prime,
            "class": rats(&f.class),
            "expected": rat(&f.expected),
            "found": rat(&f.found),
        })),
    })
}

/// Adds one to the first count of the first stored family.
fn mutate(atlas: &mut Atlas) -> Option<Value> {
    let f = atlas.families().next()?.clone();
    let s = atlas.chart(&f.from).ok()?.solutions.first()?.name.clone();
    let s_prime = atlas.chart(&f.to).ok()?.solutions.first()?.name.clone();
    let rank = atlas.rank();
    let family = atlas.family_mut(&f.from, &f.to)?;
    match family.records.first_mut() {
        Some(r) => r.count += scalar::one(),
        None => family.records.push(TransitionRecord::new(
            &s,
            &s_prime,
            vec![scalar::zero(); rank],
            scalar::one(),
        )),
    }
    Some(json!({ "from": f.from, "to": f.to }))
}

pub(crate) fn atlas_check(cfg: &RunConfig) -> Finished {
    let samples = cfg.samples_or(DEFAULT_SAMPLES);
    let tolerance = cfg.tolerance_or(DEFAULT_TOLERANCE);
    let config = cfg.echo(samples, tolerance);
    let [path] = cfg.inputs.as_slice() else {
        return input_error(config, "atlas-check takes exactly one --input atlas");
    };
    let mut atlas = match load_atlas(cfg, path) {
        Ok(a) => a,
        Err(e) => return input_error(config, e),
    };
    let mutated = if cfg.mutate { mutate(&mut atlas) } else { None };

    let cocycle = match check_cocycle(&atlas) {
        Ok(r) => r,
        Err(e) => return failed(config, e),
    };
    let mut rng = stream_rng(cfg.seed, u64::MAX);
    let lambda: BTreeMap<String, Scalar> = atlas
        .charts()
        .iter()
        .map(|c| {
            (
                c.label.clone(),
                scalar::frac(rng.random_range(-4..=4), rng.random_range(1..=3)),
            )
        })
        .collect();
    let gauged = match check_cocycle(&atlas.gauge_transform(&lambda)) {
        Ok(r) => r,
        Err(e) => return failed(config, e),
    };
    let psis: Vec<Vec<Complex64>> = (0..samples)
        .map(|i| random_psi(cfg.seed, i as u64, atlas.rank()))
        .collect();
    let bundle = match assemble_bundle(&atlas, &psis, Execution::default()) {
        Ok(b) => b,
        Err(e) => return failed(config, e),
    };
    let consistent = bundle.consistent(tolerance);
    let gauge_agrees = gauged.verified == cocycle.verified;
    let pass = cocycle.verified && gauge_agrees && consistent;
    let report = json!({
        "config": config,
        "verdict": if pass { "pass" } else { "fail" },
        "charts": atlas.charts().iter().map(|c| json!({"label": c.label, "solutions": c.len()})).collect::<Vec<_>>(),
        "mutated_family": mutated,
        "cocycle": cocycle_json(&cocycle),
        "gauge": {
            "lambda": lambda.iter().map(|(k, v)| (k.clone(), rat(v))).collect::<serde_json::Map<_, _>>(),
            "verified": gauged.verified,
            "verdict_preserved": gauge_agrees,
        },
        "bundle": {
            "expected_rank": bundle.expected_rank,
            "evaluated": bundle.evaluated(),
            "consistent": consistent,
            "samples": bundle.samples.iter().zip(&psis).map(|(s, psi)| json!({
                "psi": psi.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                "rank": s.rank,
                "frame_residual": s.frame_residual,
                "skipped": s.skipped,
            })).collect::<Vec<_>>(),
        },
    });
    Finished::new(if pass { PASS } else { VERIFICATION_FAILED }, report)
}

pub(crate) fn glue(cfg: &RunConfig) -> Finished {
    let samples = cfg.samples_or(DEFAULT_SAMPLES);
    let tolerance = cfg.tolerance_or(DEFAULT_TOLERANCE);
    let config = cfg.echo(samples, tolerance);
    let [atlas_path, sections_path] = cfg.inputs.as_slice() else {
        return input_error(config, "glue takes --input ATLAS --input SECTIONS");
    };
    let atlas = match load_atlas(cfg, atlas_path) {
        Ok(a) => a,
        Err(e) => return input_error(config, e),
    };
    let file: SectionsFile = match read_input(sections_path).and_then(|t| from_json(&t).map_err(|e| e.to_string())) {
        Ok(f) => f,
        Err(e) => return input_error(config, e),
    };
    let phi: Vec<Scalar> = file.phi.into_iter().map(|r| r.0).collect();
    let (g1, g2) = match (file.first.into_section(&atlas), file.second.into_section(&atlas)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return input_error(config, e),
    };
    let f = match pair_sections(&g1, &g2, &atlas, &phi) {
        Ok(f) => f,
        Err(e) => return failed(config, e),
    };

    let psis: Vec<Vec<Complex64>> = (0..samples)
        .map(|i| random_psi(cfg.seed, i as u64, atlas.rank()))
        .collect();
    let mut transports = Vec::new();
    let mut invariant = true;
    if g1.chart == g2.chart {
        for chart in atlas.charts().iter().filter(|c| c.label != g1.chart) {
            let (Ok(fwd), Ok(back)) = (
                atlas.family(&g1.chart, &chart.label),
                atlas.family(&chart.label, &g1.chart),
            ) else {
                continue;
            };
            let moved = g1
                .transport(&atlas, &fwd)
                .and_then(|h1| Ok((h1, g2.transport_dual(&atlas, &back)?)));
            let (h1, h2) = match moved {
                Ok(h) => h,
                Err(e) => return failed(config, e),
            };
            let exact = pair_sections(&h1, &h2, &atlas, &phi).as_ref() == Ok(&f);
            let mut worst = 0.0f64;
            for psi in &psis {
                let direct = match f.evaluate(psi) {
                    Ok(z) => z,
                    Err(e) => return failed(config, e),
                };
                let moved: Complex64 = h1.evaluate(psi).iter().zip(h2.evaluate(psi)).map(|(x, y)| x * y).sum();
                worst = worst.max((direct - moved).norm() / (1.0 + direct.norm()));
            }
            let ok = exact && worst <= tolerance;
            invariant &= ok;
            transports.push(json!({
                "chart": chart.label,
                "exact": exact,
                "max_relative_deviation": worst,
                "pass": ok,
            }));
        }
    }

    let terms: Vec<Value> = f
        .terms()
        .map(|(class, n)| json!({ "class": rats(class), "count": rat(n) }))
        .collect();
    let artifact =
        serde_json::to_string_pretty(&json!({ "phi": rats(&phi), "terms": terms })).expect("serializes") + "\n";
    let report = json!({
        "config": config,
        "verdict": if invariant { "pass" } else { "fail" },
        "chart": g1.chart,
        "phi": rats(&phi),
        "generating_function": terms,
        "transport": transports,
    });
    Finished {
        code: if invariant { PASS } else { VERIFICATION_FAILED },
        report,
        artifact: Some(artifact),
    }
}
