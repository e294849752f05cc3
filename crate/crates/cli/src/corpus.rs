use std::collections::BTreeMap;
use std::time::Instant;

use gca_core::corpus::{generate, CorpusSpec};
use gca_core::VerdictStatus;
use serde::Serialize;

use crate::implications::{implication_violations, RULES};
use crate::run::{decide, describe};
use crate::scenario::Scenario;
use crate::CliError;

pub const CORPUS_PROPERTIES: &[&str] = &["preinjective", "surjective", "post_surjective", "star", "starstar"];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub certified_true: usize,
    pub certified_false: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub automaton: String,
    pub blocks: Vec<String>,
    pub rules: Vec<&'static str>,
    pub statuses: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub scenario: String,
    pub universe: String,
    pub spec: CorpusSpec,
    pub instances: usize,
    pub tallies: BTreeMap<String, Tally>,
    /// Violation count per implication rule; every rule is listed.
    pub rules: BTreeMap<String, usize>,
    pub violations: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("corpus {}: {} automata over {}\n", self.scenario, self.instances, self.universe);
        for (p, t) in &self.tallies {
            out += &format!(
                "  {:<16} true {:>4}  false {:>4}  unknown {:>4}\n",
                p, t.certified_true, t.certified_false, t.unknown
            );
        }
        for (r, n) in &self.rules {
            out += &format!("  {r:<34} {n} violations\n");
        }
        for v in &self.violations {
            out += &format!("VIOLATION #{} {}: {}\n", v.index, v.automaton, v.rules.join(", "));
        }
        out
    }
}

/// Sweeps the corpus described by `[corpus]` over the universe of `[group]`
/// and evaluates the implication matrix on each automaton.
pub fn run_corpus(scn: &Scenario, name: &str, timings: bool) -> Result<CorpusReport, CliError> {
    let spec = scn
        .corpus
        .clone()
        .ok_or_else(|| CliError::Validation("missing `[corpus]`".into()))?;
    let universe = scn.group.build()?;
    if !universe.is_amenable() {
        return Err(CliError::Validation(format!(
            "the Garden of Eden checks need an amenable universe, got {universe}"
        )));
    }
    let start = Instant::now();
    let automata = generate(&universe, &spec)?;
    let mut tallies: BTreeMap<String, Tally> =
        CORPUS_PROPERTIES.iter().map(|p| (p.to_string(), Tally::default())).collect();
    let mut rules: BTreeMap<String, usize> = RULES.iter().map(|r| (r.name.to_string(), 0)).collect();
    let mut violations = Vec::new();
    for (index, ca) in automata.iter().enumerate() {
        let mut verdicts = BTreeMap::new();
        for &p in CORPUS_PROPERTIES {
            let v = decide(ca, p, &scn.check)?;
            let t = tallies.get_mut(p).expect("listed");
            match v.status {
                VerdictStatus::CertifiedTrue => t.certified_true += 1,
                VerdictStatus::CertifiedFalse => t.certified_false += 1,
                VerdictStatus::UnknownAfterBound => t.unknown += 1,
            }
            verdicts.insert(p.to_string(), v);
        }
        let broken = implication_violations(ca, &verdicts);
        for r in &broken {
            *rules.get_mut(*r).expect("listed") += 1;
        }
        if !broken.is_empty() {
            violations.push(Counterexample {
                index,
                automaton: describe(ca),
                blocks: ca
                    .linear_blocks()
                    .unwrap_or_default()
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                rules: broken,
                statuses: verdicts.iter().map(|(k, v)| (k.clone(), v.status.to_string())).collect(),
            });
        }
    }
    Ok(CorpusReport {
        scenario: name.to_string(),
        universe: universe.to_string(),
        spec,
        instances: automata.len(),
        tallies,
        rules,
        violations,
        ms: timings.then(|| start.elapsed().as_millis() as u64),
    })
}
