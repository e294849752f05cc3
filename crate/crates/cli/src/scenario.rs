//! Scenario files: TOML with `[group]`, `[alphabet]`, `[ca]`, `[check]` and
//! optional `[expect]`, `[audit]` and `[corpus]` sections.

use std::collections::BTreeMap;

use gca_core::alphabet::{FiniteGroup, FiniteHom, SymbolicAlphabet};
use gca_core::corpus::CorpusSpec;
use gca_core::group::{parse_word, FiniteUniverse};
use gca_core::lattice::{IntMatrix, TorsionProfile};
use gca_core::{Alphabet, CellularAutomaton, GroupElement, GroupUniverse, Hom};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub group: GroupSpec,
    pub alphabet: Option<AlphabetSpec>,
    pub ca: Option<CaSpec>,
    #[serde(default)]
    pub check: CheckSpec,
    /// Expected statuses by check name, e.g. `star = "certified-false"`.
    #[serde(default)]
    pub expect: BTreeMap<String, String>,
    pub audit: Option<AuditSpec>,
    pub corpus: Option<CorpusSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// `Z`, `lattice` (alias `Z^d`), `cyclic`, `free` or `table`.
    pub kind: String,
    pub dim: Option<usize>,
    pub n: Option<usize>,
    pub rank: Option<usize>,
    pub table: Option<Vec<Vec<usize>>>,
    pub generators: Option<Vec<toml::Value>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    /// `finite_abelian`, `finite_table` or `symbolic`.
    pub kind: String,
    #[serde(default)]
    pub factors: Vec<u64>,
    pub table: Option<Vec<Vec<usize>>>,
    /// `torus`, `elliptic` or `vector` for symbolic alphabets.
    pub profile: Option<String>,
    pub rank: Option<usize>,
    #[serde(default)]
    pub components: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaSpec {
    pub memory: Vec<toml::Value>,
    /// `k × k·|M|` integer matrix: one block per memory element.
    pub rule_matrix: Option<Vec<Vec<i64>>>,
    /// Explicit table indexed by encoded memory tuples.
    pub rule_table: Option<Vec<usize>>,
    /// Block matrix of the component rule for symbolic alphabets.
    pub component_matrix: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    #[serde(default = "default_properties")]
    pub properties: Vec<String>,
    #[serde(default = "default_radius")]
    pub radius_max: usize,
    /// Radius of the ball windows used by the (•) and (••) checks.
    #[serde(default = "default_window_radius")]
    pub window_radius: usize,
    /// Number of Følner boxes for the `mdim` check.
    #[serde(default = "default_boxes")]
    pub folner_boxes: u32,
}

impl Default for CheckSpec {
    fn default() -> Self {
        CheckSpec {
            properties: default_properties(),
            radius_max: default_radius(),
            window_radius: default_window_radius(),
            folner_boxes: default_boxes(),
        }
    }
}

fn default_properties() -> Vec<String> {
    ["preinjective", "surjective", "post_surjective", "star", "starstar"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn default_radius() -> usize {
    4
}

fn default_window_radius() -> usize {
    2
}

fn default_boxes() -> u32 {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSpec {
    pub radius: usize,
    /// A rational such as `"1/100"`.
    pub epsilon: String,
}

pub const PROPERTIES: &[&str] = &[
    "preinjective",
    "surjective",
    "post_surjective",
    "star",
    "starstar",
    "inverse",
    "mdim",
];

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    for p in &scenario.check.properties {
        if !PROPERTIES.contains(&p.as_str()) {
            return Err(CliError::Validation(format!("unknown property `{p}`")));
        }
    }
    Ok(scenario)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupUniverse, CliError> {
        let u = match self.kind.as_str() {
            "Z" => GroupUniverse::integers(),
            "lattice" | "Z^d" => GroupUniverse::lattice(self.dim.ok_or_else(|| invalid("`lattice` needs `dim`"))?),
            "cyclic" => GroupUniverse::cyclic(self.n.ok_or_else(|| invalid("`cyclic` needs `n`"))?)?,
            "free" => GroupUniverse::free(self.rank.ok_or_else(|| invalid("`free` needs `rank`"))?),
            "table" => {
                let table = self.table.clone().ok_or_else(|| invalid("`table` group needs `table`"))?;
                let g = FiniteUniverse::from_table("G", table)?;
                let gens = (0..g.order()).map(GroupElement::Index).collect();
                GroupUniverse::finite(g, gens)?
            }
            other => return Err(invalid(format!("unknown group kind `{other}`"))),
        };
        match &self.generators {
            Some(gens) => {
                let gens = gens.iter().map(|v| element(&u, v)).collect::<Result<_, _>>()?;
                Ok(u.with_generators(gens)?)
            }
            None => Ok(u),
        }
    }
}

/// Reads a group element: an integer on `Z`, an integer array on `Z^d`, a
/// word such as `"aB"` on free groups, an index on finite groups.
pub fn element(u: &GroupUniverse, v: &toml::Value) -> Result<GroupElement, CliError> {
    let g = match v {
        toml::Value::Integer(i) if u.lattice_dim().is_some() => GroupElement::Vector(vec![*i]),
        toml::Value::Integer(i) if *i >= 0 => GroupElement::Index(*i as usize),
        toml::Value::Array(xs) => GroupElement::Vector(
            xs.iter()
                .map(|x| x.as_integer().ok_or_else(|| invalid(format!("`{x}` is not an integer"))))
                .collect::<Result<_, _>>()?,
        ),
        toml::Value::String(s) => {
            GroupElement::Word(parse_word(s).ok_or_else(|| invalid(format!("`{s}` is not a reduced word")))?)
        }
        other => return Err(invalid(format!("`{other}` is not a group element"))),
    };
    u.check(&g)?;
    Ok(g)
}

fn profile(name: &str) -> Result<TorsionProfile, CliError> {
    match name {
        "torus" => Ok(TorsionProfile::Torus),
        "elliptic" => Ok(TorsionProfile::Elliptic),
        "vector" => Ok(TorsionProfile::Vector),
        other => Err(invalid(format!("unknown torsion profile `{other}`"))),
    }
}

fn component_group(factors: &[u64]) -> Result<FiniteGroup, CliError> {
    Ok(if factors.is_empty() {
        FiniteGroup::trivial()
    } else {
        FiniteGroup::abelian(factors)?
    })
}

impl AlphabetSpec {
    pub fn build(&self) -> Result<Alphabet, CliError> {
        match self.kind.as_str() {
            "finite_abelian" => Ok(Alphabet::Finite(FiniteGroup::abelian(&self.factors)?)),
            "finite_table" => {
                let table = self.table.clone().ok_or_else(|| invalid("`finite_table` needs `table`"))?;
                Ok(Alphabet::Finite(FiniteGroup::from_table("A", table)?))
            }
            "symbolic" => {
                let kind = profile(self.profile.as_deref().ok_or_else(|| invalid("symbolic alphabet needs `profile`"))?)?;
                let rank = self.rank.ok_or_else(|| invalid("symbolic alphabet needs `rank`"))?;
                Ok(Alphabet::Symbolic(SymbolicAlphabet::new(kind, rank, component_group(&self.components)?)?))
            }
            other => Err(invalid(format!("unknown alphabet kind `{other}`"))),
        }
    }
}

fn split_blocks(rows: &[Vec<i64>], k: usize, m: usize, what: &str) -> Result<Vec<IntMatrix>, CliError> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k * m) {
        return Err(invalid(format!("{what} must be {k}×{} (one {k}×{k} block per memory element)", k * m)));
    }
    Ok((0..m)
        .map(|j| {
            let block: Vec<Vec<i64>> = rows.iter().map(|r| r[j * k..(j + 1) * k].to_vec()).collect();
            if k == 0 {
                IntMatrix::zeros(0, 0)
            } else {
                IntMatrix::from_rows(&block)
            }
        })
        .collect())
}

impl CaSpec {
    pub fn build(&self, universe: &GroupUniverse, alphabet: &Alphabet) -> Result<CellularAutomaton, CliError> {
        let memory: Vec<GroupElement> = self.memory.iter().map(|v| element(universe, v)).collect::<Result<_, _>>()?;
        let m = memory.len();
        match alphabet {
            Alphabet::Finite(group) => match (&self.rule_matrix, &self.rule_table) {
                (Some(rows), None) => {
                    let k = group
                        .factors()
                        .ok_or_else(|| invalid("`rule_matrix` needs a finite abelian alphabet"))?
                        .len();
                    let blocks = split_blocks(rows, k, m, "rule_matrix")?;
                    Ok(CellularAutomaton::finite_linear(universe.clone(), group.clone(), memory, &blocks)?)
                }
                (None, Some(table)) => {
                    let rule = FiniteHom::new(group, m, 1, table.clone())?;
                    Ok(CellularAutomaton::new(universe.clone(), alphabet.clone(), memory, Hom::Finite(rule))?)
                }
                _ => Err(invalid("give exactly one of `rule_matrix` and `rule_table`")),
            },
            Alphabet::Symbolic(s) => {
                let rows = self.rule_matrix.as_ref().ok_or_else(|| invalid("symbolic rules need `rule_matrix`"))?;
                let blocks = split_blocks(rows, s.rank, m, "rule_matrix")?;
                let pi = &s.components;
                let k = pi.factors().map_or(0, <[u64]>::len);
                let comp = match &self.component_matrix {
                    Some(rows) if k > 0 => FiniteHom::from_blocks(pi, &split_blocks(rows, k, m, "component_matrix")?)?,
                    _ => FiniteHom::trivial(pi, m, 1)?,
                };
                Ok(CellularAutomaton::symbolic(universe.clone(), s.clone(), memory, &blocks, comp)?)
            }
        }
    }
}

impl Scenario {
    pub fn display_name(&self, fallback: &str) -> String {
        self.name.clone().unwrap_or_else(|| fallback.to_string())
    }

    pub fn automaton(&self) -> Result<CellularAutomaton, CliError> {
        let universe = self.group.build()?;
        let alphabet = self.alphabet.as_ref().ok_or_else(|| invalid("missing `[alphabet]`"))?.build()?;
        self.ca.as_ref().ok_or_else(|| invalid("missing `[ca]`"))?.build(&universe, &alphabet)
    }
}

/// Scenarios shipped with the binary.
pub const EMBEDDED: &[(&str, &str, &str)] = &[
    ("prop44", "Z/4 doubling: (••) true, (•) false, not surjective", include_str!("../scenarios/prop44.scn")),
    ("ex62", "multiplication by 2 on an elliptic curve: post-surjective, not pre-injective", include_str!("../scenarios/ex62.scn")),
    ("identity", "identity over Z/2: every property holds", include_str!("../scenarios/identity.scn")),
    ("xor", "x(0) + x(1) over Z/2: surjective, not post-surjective", include_str!("../scenarios/xor.scn")),
    ("triple", "x ↦ 3x over Z/4: invertible at radius 0", include_str!("../scenarios/triple.scn")),
    ("corpus", "200 random group CA over Z with small alphabets", include_str!("../scenarios/corpus.scn")),
];

/// An embedded scenario by name, also accepting `examples/<name>.scn`.
pub fn embedded(name: &str) -> Option<&'static str> {
    let stem = name.trim_start_matches("examples/").trim_end_matches(".scn");
    EMBEDDED.iter().find(|(n, _, _)| *n == stem).map(|(_, _, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(s: &str) -> toml::Value {
        toml::from_str::<toml::Table>(&format!("x = {s}")).unwrap()["x"].clone()
    }

    #[test]
    fn elements_by_universe() {
        let z2 = GroupUniverse::lattice(2);
        assert_eq!(element(&z2, &value("[1, -2]")).unwrap(), GroupElement::Vector(vec![1, -2]));
        assert!(element(&z2, &value("[1]")).is_err());
        assert_eq!(element(&GroupUniverse::integers(), &value("-3")).unwrap(), GroupUniverse::int(-3));
        let f2 = GroupUniverse::free(2);
        assert!(matches!(element(&f2, &value("\"aB\"")).unwrap(), GroupElement::Word(w) if w.len() == 2));
        let c5 = GroupUniverse::cyclic(5).unwrap();
        assert_eq!(element(&c5, &value("3")).unwrap(), GroupElement::Index(3));
        assert!(element(&c5, &value("7")).is_err());
    }

    #[test]
    fn every_embedded_scenario_builds() {
        for (name, _, text) in EMBEDDED {
            let scn = parse(text).unwrap();
            if scn.corpus.is_none() {
                scn.automaton().unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
        assert_eq!(embedded("examples/ex62.scn"), embedded("ex62"));
    }

    #[test]
    fn block_shapes_are_validated() {
        let text = "[group]\nkind = \"Z\"\n[alphabet]\nkind = \"finite_abelian\"\nfactors = [2, 2]\n\
                    [ca]\nmemory = [0, 1]\nrule_matrix = [[1, 0, 1], [0, 1, 0]]\n";
        assert!(matches!(parse(text).unwrap().automaton(), Err(CliError::Validation(_))));
        assert!(matches!(parse("[group]\nkind = \"Z\"\nextra = 1\n"), Err(CliError::Parse(_))));
    }
}
