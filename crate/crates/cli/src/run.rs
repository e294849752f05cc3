use std::collections::BTreeMap;
use std::time::Instant;

use gca_core::ca::InverseSearch;
use gca_core::deciders::{
    ball_windows, certify_post_surjective, decide_preinjective, decide_surjective, star_preinjective,
    starstar_preinjective, verify_witness, PropertyVerdict,
};
use gca_core::mdim::mdim_estimate;
use gca_core::{CellularAutomaton, Hom, VerdictStatus};
use serde_json::{json, Value};

use crate::implications::implication_violations;
use crate::report::{CheckResult, Report};
use crate::scenario::{CheckSpec, Scenario};
use crate::CliError;

pub fn describe(ca: &CellularAutomaton) -> String {
    let memory: Vec<String> = ca.memory().iter().map(ToString::to_string).collect();
    format!("{} over {}, memory {{{}}}", ca.alphabet(), ca.universe(), memory.join(", "))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("witness serializes")
}

/// Runs one decider. Certified-false witnesses are replayed before they are
/// reported; a witness that does not replay is an internal error.
pub fn decide(ca: &CellularAutomaton, property: &str, check: &CheckSpec) -> Result<PropertyVerdict, CliError> {
    let verdict = match property {
        "preinjective" => decide_preinjective(ca, check.radius_max)?,
        "surjective" => decide_surjective(ca, check.radius_max)?,
        "post_surjective" => certify_post_surjective(ca, check.radius_max)?.0,
        "star" => star_preinjective(ca, &ball_windows(ca, check.window_radius))?,
        "starstar" => starstar_preinjective(ca, &ball_windows(ca, check.window_radius))?,
        other => return Err(CliError::Validation(format!("`{other}` is not a decidable property"))),
    };
    if let (VerdictStatus::CertifiedFalse, Some(w)) = (verdict.status, &verdict.witness) {
        if !verify_witness(ca, w) {
            return Err(CliError::Internal(format!("{property}: witness does not replay: {w:?}")));
        }
    }
    Ok(verdict)
}

fn verdict_result(name: &str, v: &PropertyVerdict) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        status: v.status.to_string(),
        certificate: v.certificate.clone(),
        witness: v.witness.as_ref().map(to_value),
        bound: v.bound,
        ms: None,
    }
}

fn inverse_result(ca: &CellularAutomaton, radius_max: usize) -> Result<CheckResult, CliError> {
    let (status, certificate, witness) = match ca.find_inverse(radius_max)? {
        InverseSearch::Found { inverse, radius } => {
            let left = CellularAutomaton::compose(&inverse, ca)?;
            let right = CellularAutomaton::compose(ca, &inverse)?;
            if !(left.is_identity_map() && right.is_identity_map()) {
                return Err(CliError::Internal("inverse does not replay".into()));
            }
            let Hom::Finite(rule) = inverse.rule() else {
                return Err(CliError::Internal("inverse of a finite automaton is not finite".into()));
            };
            let w = json!({ "radius": radius, "memory": to_value(&inverse.memory()), "rule_table": rule.table });
            ("certified-true", Some("both composites normalize to the identity".to_string()), Some(w))
        }
        InverseSearch::NoneWithinRadius {
            radius,
            exhausted,
            witness,
        } => {
            if let Some(w) = &witness {
                if !w.verify(ca) {
                    return Err(CliError::Internal("non-injectivity witness does not replay".into()));
                }
            }
            let w = json!({ "radius": radius, "non_injectivity": witness.as_ref().map(to_value) });
            if exhausted {
                ("certified-false", Some("not surjective".to_string()), Some(w))
            } else {
                ("none-within-radius", None, Some(w))
            }
        }
    };
    Ok(CheckResult {
        name: "inverse".into(),
        status: status.into(),
        certificate,
        witness,
        bound: Some(radius_max),
        ms: None,
    })
}

fn mdim_result(ca: &CellularAutomaton, boxes: u32) -> Result<CheckResult, CliError> {
    let est = mdim_estimate(ca, boxes)?;
    let ratio = |r: num_rational::Ratio<usize>| format!("{}/{}", r.numer(), r.denom());
    let witness = json!({
        "estimate": est.estimate().map(ratio),
        "entropy": if est.alphabet_dim == 0 { est.entropy_estimate() } else { None },
        "full_dimensional": est.is_full_dimensional(),
        "windows": to_value(&est.windows),
    });
    Ok(CheckResult {
        name: "mdim".into(),
        status: "estimated".into(),
        certificate: Some("value on the largest Følner box; no limit is extrapolated".into()),
        witness: Some(witness),
        bound: Some(boxes as usize),
        ms: None,
    })
}

/// Runs every requested check of `scn` in order, then the implication matrix
/// and the `[expect]` table.
pub fn run_scenario(scn: &Scenario, name: &str, timings: bool) -> Result<Report, CliError> {
    let ca = scn.automaton()?;
    let props = &scn.check.properties;
    for key in scn.expect.keys() {
        if !props.contains(key) {
            return Err(CliError::Validation(format!("expectation for unrequested check `{key}`")));
        }
    }
    let mut checks = Vec::with_capacity(props.len());
    let mut verdicts = BTreeMap::new();
    for p in props {
        let start = Instant::now();
        let mut result = match p.as_str() {
            "inverse" => inverse_result(&ca, scn.check.radius_max)?,
            "mdim" => mdim_result(&ca, scn.check.folner_boxes)?,
            _ => {
                let v = decide(&ca, p, &scn.check)?;
                let r = verdict_result(p, &v);
                verdicts.insert(p.clone(), v);
                r
            }
        };
        if timings {
            result.ms = Some(start.elapsed().as_millis() as u64);
        }
        checks.push(result);
    }
    let mut violations: Vec<String> = implication_violations(&ca, &verdicts)
        .into_iter()
        .map(|r| format!("implication broken: {r}"))
        .collect();
    for c in &checks {
        if let Some(want) = scn.expect.get(&c.name) {
            if *want != c.status {
                violations.push(format!("{}: expected {want}, got {}", c.name, c.status));
            }
        }
    }
    Ok(Report {
        scenario: name.to_string(),
        seed: scn.seed,
        automaton: describe(&ca),
        checks,
        violations,
        verdicts,
    })
}
