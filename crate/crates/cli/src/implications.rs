//! The implication matrix checked on every run. A rule is violated only when
//! its premise is certified true and its conclusion certified false.

use std::collections::BTreeMap;

use gca_core::deciders::PropertyVerdict;
use gca_core::CellularAutomaton;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    Amenable,
    FiniteAlphabet,
    FiniteAlphabetOnZ,
}

#[derive(Debug, Clone, Copy)]
pub struct Rule {
    pub name: &'static str,
    pub premise: &'static str,
    pub conclusion: &'static str,
    pub scope: Scope,
    /// Both directions are checked.
    pub equivalence: bool,
}

const fn rule(name: &'static str, premise: &'static str, conclusion: &'static str, scope: Scope) -> Rule {
    Rule {
        name,
        premise,
        conclusion,
        scope,
        equivalence: false,
    }
}

pub const RULES: &[Rule] = &[
    rule("post_surjective => surjective", "post_surjective", "surjective", Scope::All),
    rule("post_surjective => star", "post_surjective", "star", Scope::All),
    rule("post_surjective => starstar", "post_surjective", "starstar", Scope::All),
    rule("star => starstar", "star", "starstar", Scope::All),
    rule("surjective => star", "surjective", "star", Scope::Amenable),
    rule("surjective => starstar", "surjective", "starstar", Scope::Amenable),
    rule("preinjective => surjective", "preinjective", "surjective", Scope::Amenable),
    rule("post_surjective => preinjective", "post_surjective", "preinjective", Scope::FiniteAlphabet),
    Rule {
        name: "preinjective <=> surjective",
        premise: "preinjective",
        conclusion: "surjective",
        scope: Scope::FiniteAlphabetOnZ,
        equivalence: true,
    },
];

impl Rule {
    pub fn applies(&self, ca: &CellularAutomaton) -> bool {
        let finite = ca.finite_group().is_some();
        match self.scope {
            Scope::All => true,
            Scope::Amenable => ca.universe().is_amenable(),
            Scope::FiniteAlphabet => finite,
            Scope::FiniteAlphabetOnZ => finite && ca.universe().is_integers(),
        }
    }

    pub fn violated(&self, ca: &CellularAutomaton, verdicts: &BTreeMap<String, PropertyVerdict>) -> bool {
        if !self.applies(ca) {
            return false;
        }
        let is = |name: &str, want: bool| {
            verdicts
                .get(name)
                .is_some_and(|v| if want { v.is_true() } else { v.is_false() })
        };
        let forward = is(self.premise, true) && is(self.conclusion, false);
        let backward = self.equivalence && is(self.conclusion, true) && is(self.premise, false);
        forward || backward
    }
}

/// Names of the violated rules, in [`RULES`] order.
pub fn implication_violations(ca: &CellularAutomaton, verdicts: &BTreeMap<String, PropertyVerdict>) -> Vec<&'static str> {
    RULES.iter().filter(|r| r.violated(ca, verdicts)).map(|r| r.name).collect()
}
