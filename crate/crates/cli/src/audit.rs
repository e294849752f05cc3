use std::str::FromStr;

use gca_core::sofic::{counting_audit, AuditReport};
use gca_core::LabeledGraph;
use num_rational::BigRational;
use serde::Serialize;

use crate::scenario::Scenario;
use crate::CliError;

/// A graph file, or one of the shorthands `cycle:N` and `torus:N:D`.
pub fn load_graph(arg: &str) -> Result<LabeledGraph, CliError> {
    let parts: Vec<&str> = arg.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::Parse(format!("`{s}` in `{arg}` is not a number")))
    };
    match parts.as_slice() {
        ["cycle", n] => Ok(LabeledGraph::cycle(num(n)?)?),
        ["torus", n, d] => Ok(LabeledGraph::torus(num(n)?, num(d)?)?),
        _ => {
            let text =
                std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("cannot read `{arg}`: {e}")))?;
            Ok(LabeledGraph::parse(&text)?)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SoficReport {
    pub scenario: String,
    pub graph_vertices: usize,
    pub graph_labels: usize,
    pub audit: AuditReport,
}

impl SoficReport {
    /// Every instance line holds and the packing passes both checks.
    pub fn passed(&self) -> bool {
        self.audit.all_instance_lines_hold() && self.audit.packing_disjoint && self.audit.packing_covering
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let a = &self.audit;
        let mut out = format!(
            "audit {}: |V| = {}, r = {}, ε = {}, |V(3r)| = {}, packing {} (disjoint {}, covering {})\n",
            self.scenario, a.vertices, a.radius, a.epsilon, a.v3r, a.packing, a.packing_disjoint, a.packing_covering
        );
        for l in &a.lines {
            let mark = match (l.holds, l.hypothesis_dependent) {
                (true, _) => "ok  ",
                (false, true) => "refuted",
                (false, false) => "FAIL",
            };
            out += &format!("  {mark:<7} {}[{}] {} {} {}\n", l.chain, l.step, l.lhs, l.relation, l.rhs);
        }
        for n in &a.notes {
            out += &format!("  note: {n}\n");
        }
        out
    }
}

pub fn run_audit(graph: &LabeledGraph, scn: &Scenario, name: &str) -> Result<SoficReport, CliError> {
    let spec = scn
        .audit
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing `[audit]`".into()))?;
    let eps = BigRational::from_str(spec.epsilon.trim())
        .map_err(|_| CliError::Validation(format!("`{}` is not a rational", spec.epsilon)))?;
    let ca = scn.automaton()?;
    let audit = counting_audit(&ca, graph, spec.radius, &eps)?;
    Ok(SoficReport {
        scenario: name.to_string(),
        graph_vertices: graph.vertex_count(),
        graph_labels: graph.label_count(),
        audit,
    })
}
