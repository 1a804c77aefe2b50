//! `slag`: the weighted multiset count at κ.

use crate::report::{parse_rationals, rat, rats};
use crate::{input_error, read_input, Finished, RunConfig, PASS};
use holokernel::bundles::slag_count;
use holokernel::io::{from_json, SlagFile};
use serde_json::json;

pub(crate) fn slag(cfg: &RunConfig, kappa: Option<&str>) -> Finished {
    let config = cfg.echo(0, 0.0);
    let [path] = cfg.inputs.as_slice() else {
        return input_error(config, "slag takes exactly one --input weights file");
    };
    let input = match read_input(path)
        .and_then(|t| from_json::<SlagFile>(&t).map_err(|e| e.to_string()))
        .and_then(|f| f.into_input().map_err(|e| e.to_string()))
    {
        Ok(i) => i,
        Err(e) => return input_error(config, e),
    };
    let kappa = match kappa.map(parse_rationals) {
        Some(Ok(k)) => k,
        Some(Err(e)) => return input_error(config, format!("--kappa: {e}")),
        None => match input.kappa {
            Some(k) => k,
            None => return input_error(config, "no κ in the file and no --kappa given"),
        },
    };
    let value = match slag_count(&input.weights, &input.classes, &kappa, input.positivity.as_deref()) {
        Ok(v) => v,
        Err(e) => return input_error(config, e),
    };
    let report = json!({
        "config": config,
        "verdict": "pass",
        "classes": input.classes.iter().map(|c| rats(c)).collect::<Vec<_>>(),
        "positivity": input.positivity.as_deref().map(rats),
        "kappa": rats(&kappa),
        "value": rat(&value),
    });
    Finished::new(PASS, report)
}
