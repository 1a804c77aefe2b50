//! `forms-verify`: the exact identity suite over the standard models.

use crate::report::rat;
use crate::{Finished, RunConfig, PASS, VERIFICATION_FAILED};
use holokernel::holonomy::standard::{kahler0, omega0, omega_squared_factor, phi0, rho1_0, sigma0};
use holokernel::holonomy::{
    calibration_sampling, cylinder_lift_6to7, cylinder_lift_7to8, gl_action_rank, orbit_rank_g2, orbit_rank_spin7,
    orbit_rank_su3, su3_check, taming_check, G2Model, SU3Model, SamplingConfig, Spin7Model,
};
use holokernel::linalg::RatMatrix;
use holokernel::par::stream_rng;
use holokernel::scalar::{self, Scalar};
use holokernel::{Execution, KForm};
use rand::Rng;
use serde_json::{json, Value};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Random 2-forms tested against the energy identity.
pub const IDENTITY_SAMPLES: usize = 500;
/// Constructed Cayley planes checked for exact equality.
pub const EXACT_PLANES: usize = 20;

/// The flat 4-form with the dx1234 coefficient negated.
pub fn mutated_omega() -> KForm {
    let c = omega0().coeff(&[1, 2, 3, 4]);
    &omega0() - &KForm::monomial(8, &[1, 2, 3, 4], c * scalar::int(2)).expect("valid blade")
}

/// A 2-form on R⁸ with small random rational coefficients.
pub fn random_two_form(seed: u64, index: u64) -> KForm {
    let mut rng = stream_rng(seed, index);
    let v: Vec<Scalar> = (0..28)
        .map(|_| scalar::frac(rng.random_range(-6..=6), rng.random_range(1..=5)))
        .collect();
    KForm::from_vector(8, 2, &v)
}

fn form_json(f: &KForm) -> Value {
    let mut m = serde_json::Map::new();
    for (idx, c) in f.terms() {
        let name: String = idx.iter().map(|i| i.to_string()).collect();
        m.insert(format!("dx{name}"), rat(&c));
    }
    Value::Object(m)
}

#[derive(Default)]
struct Suite {
    checks: Vec<Value>,
    first_failure: Option<Value>,
}

impl Suite {
    fn check(&mut self, name: &str, expected: Value, found: Value, witness: Option<Value>) {
        let pass = expected == found;
        let mut entry = json!({ "name": name, "pass": pass, "expected": expected, "found": found });
        if let Some(w) = witness {
            entry["witness"] = w;
        }
        if !pass && self.first_failure.is_none() {
            self.first_failure = Some(entry.clone());
        }
        self.checks.push(entry);
    }
}

pub(crate) fn forms_verify(cfg: &RunConfig) -> Finished {
    let samples = cfg.samples_or(DEFAULT_SAMPLES);
    let tolerance = cfg.tolerance_or(DEFAULT_TOLERANCE);
    let omega = if cfg.mutate { mutated_omega() } else { omega0() };
    let (s7, g2, su3) = (Spin7Model::standard(), G2Model::standard(), SU3Model::standard());
    let mut suite = Suite::default();

    let d8 = s7.decomposition();
    let d7 = g2.decomposition();
    let d6 = su3.decomposition();
    for (name, d, expected) in [
        ("lambda2_dim8", &d8, json!([7, 21])),
        ("lambda2_dim7", &d7, json!([7, 14])),
        ("lambda2_dim6", &d6, json!([1, 6, 8])),
    ] {
        suite.check(name, expected, json!(d.ranks()), None);
        suite.check(
            &format!("{name}_projectors"),
            json!(true),
            json!(d.is_complete_orthogonal()),
            None,
        );
    }

    let spin7_rank = gl_action_rank(&omega);
    suite.check("orbit_rank_spin7", json!(43), json!(spin7_rank), None);
    let o7 = orbit_rank_g2(&g2);
    suite.check(
        "orbit_rank_g2",
        json!([35, true]),
        json!([o7.action_rank, o7.is_open()]),
        None,
    );
    let o6 = orbit_rank_su3(&su3);
    suite.check(
        "orbit_rank_su3",
        json!([20, true]),
        json!([o6.action_rank, o6.is_open()]),
        None,
    );
    let o8 = orbit_rank_spin7(&s7);
    suite.check("cayley_linearization_rank", json!(4), json!(o8.cayley_rank), None);
    suite.check("cayley_locus_dim", json!(12), json!(o8.cayley_locus_dim), None);

    let vol = s7.volume_form();
    let residuals = Execution::default().map_range(IDENTITY_SAMPLES, |i| {
        let alpha = random_two_form(cfg.seed, i as u64);
        let a = d8.project(&alpha).expect("2-form on R⁸").remove(1);
        let n = s7.metric().inner(&a, &a);
        let r = &a.wedge(&a).unwrap().wedge(&omega).unwrap() + &vol.scale(&n);
        (a, r)
    });
    let failures: Vec<&(KForm, KForm)> = residuals.iter().filter(|(_, r)| !r.is_zero()).collect();
    let witness = failures
        .first()
        .map(|(a, r)| json!({ "alpha": form_json(a), "residual": form_json(r) }));
    suite.check("energy_identity_failures", json!(0), json!(failures.len()), witness);

    suite.check(
        "star_phi0_is_sigma0",
        json!(true),
        json!(g2.star(&phi0()) == sigma0()),
        None,
    );
    let lift8 = cylinder_lift_7to8(&g2).map(|m| m.omega() == &omega);
    suite.check("lift_7_to_8", json!(true), json!(lift8 == Ok(true)), None);
    let lift7 = cylinder_lift_6to7(&su3).map(|m| m.phi() == &phi0() && m.sigma() == &sigma0());
    suite.check("lift_6_to_7", json!(true), json!(lift7 == Ok(true)), None);
    suite.check(
        "su3_data",
        json!(true),
        json!(su3_check(&kahler0(), &rho1_0()).passes()),
        None,
    );

    let sampling = SamplingConfig {
        samples,
        seed: cfg.seed,
        execution: Execution::default(),
    };
    let minus_id = RatMatrix::identity(21).scale(&scalar::int(-1));
    let perturbed = &omega0() + &KForm::monomial(8, &[1, 2, 3, 4], scalar::frac(1, 100)).expect("valid blade");
    let mut taming = serde_json::Map::new();
    for (name, form, expect_tamed) in [
        ("self", &omega, true),
        ("negated", &-&omega0(), false),
        ("perturbed", &perturbed, true),
    ] {
        let cert = taming_check(form, &s7, &sampling).expect("4-form on R⁸");
        suite.check(&format!("taming_{name}"), json!(expect_tamed), json!(cert.tamed), None);
        if name == "self" {
            suite.check("taming_self_gram", json!(true), json!(cert.relative == minus_id), None);
        }
        taming.insert(
            name.into(),
            json!({
                "tamed": cert.tamed,
                "negative_definite": cert.negative_definite,
                "positive_samples": cert.positive_samples,
                "min_margin": cert.min_margin,
                "max_margin": cert.max_margin,
            }),
        );
    }

    let cal = calibration_sampling(&s7, &sampling, EXACT_PLANES, tolerance);
    suite.check("calibration_violations", json!(0), json!(cal.violations), None);
    suite.check(
        "calibration_exact_equalities",
        json!(EXACT_PLANES),
        json!(cal.exact_equalities),
        None,
    );

    let square_sum = s7.seven_part_square_sum(&d8);
    let c = square_sum.coeff(&[1, 2, 3, 4]) / omega0().coeff(&[1, 2, 3, 4]);
    let proportional = square_sum == omega0().scale(&c);

    let verdict = if suite.first_failure.is_none() { "pass" } else { "fail" };
    let code = if suite.first_failure.is_none() {
        PASS
    } else {
        VERIFICATION_FAILED
    };
    let report = json!({
        "config": cfg.echo(samples, tolerance),
        "verdict": verdict,
        "ranks": {
            "lambda2_dim8": d8.ranks(),
            "lambda2_dim7": d7.ranks(),
            "lambda2_dim6": d6.ranks(),
            "orbit_spin7": spin7_rank,
            "orbit_g2": o7.action_rank,
            "orbit_su3": o6.action_rank,
            "cayley_locus": o8.cayley_locus_dim,
        },
        "normalizations": {
            "omega_squared_factor": rat(&omega_squared_factor()),
            "seven_part_square_sum_over_omega": if proportional { rat(&c) } else { Value::Null },
        },
        "identity_samples": IDENTITY_SAMPLES,
        "taming": taming,
        "calibration": {
            "samples": cal.samples,
            "max_ratio": cal.max_ratio,
            "violations": cal.violations,
            "exact_planes": cal.exact_planes,
            "exact_equalities": cal.exact_equalities,
        },
        "checks": suite.checks,
        "counterexample": suite.first_failure,
        "omega_under_test": if cfg.mutate { form_json(&omega) } else { Value::Null },
    });
    Finished::new(code, report)
}
