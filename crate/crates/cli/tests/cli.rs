use std::io::Write as _;
use std::process::{Command, Output};

use gca_cli::scenario::{self, EMBEDDED};
use gca_cli::{exit, run_scenario};
use gca_core::deciders::verify_witness;
use proptest::prelude::*;

fn gca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gca")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".scn").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn embedded_scenarios_pass() {
    for (name, _, _) in EMBEDDED.iter().filter(|(n, _, _)| *n != "corpus") {
        let out = gca(&["run", name]);
        assert_eq!(code(&out), exit::OK, "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
    assert_eq!(code(&gca(&["run", "examples/prop44.scn"])), exit::OK);
}

#[test]
fn json_report_schema() {
    let out = gca(&["run", "prop44", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scenario"], "prop44");
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    for c in checks {
        for key in ["name", "status", "witness", "bound", "ms"] {
            assert!(c.get(key).is_some(), "missing `{key}` in {c}");
        }
    }
    let star = checks.iter().find(|c| c["name"] == "star").unwrap();
    assert_eq!(star["status"], "certified-false");
    assert_eq!(star["witness"]["kind"], "proper_subset");
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn reports_are_byte_identical_without_timings() {
    for args in [["run", "ex62", "--json", "--no-timings"], ["corpus", "corpus", "--json", "--no-timings"]] {
        let a = gca(&args);
        let b = gca(&args);
        assert_eq!(code(&a), exit::OK);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn unmet_expectation_exits_one() {
    let text = scenario::embedded("prop44").unwrap().replace(r#"star = "certified-false""#, r#"star = "certified-true""#);
    let f = temp_file(&text);
    let out = gca(&["run", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), exit::CHECK_FAILED);
    assert!(String::from_utf8_lossy(&out.stdout).contains("VIOLATION star"));
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(code(&gca(&["run", "/nonexistent/x.scn"])), exit::PARSE);
    let f = temp_file("[group\nkind = \"Z\"\n");
    assert_eq!(code(&gca(&["run", f.path().to_str().unwrap()])), exit::PARSE);
    let g = temp_file("graph 3 2\n0 0 1\n0 0 2 2\n");
    assert_eq!(code(&gca(&["audit-sofic", g.path().to_str().unwrap(), "identity"])), exit::PARSE);
}

#[test]
fn validation_errors_exit_three() {
    let free = temp_file("[group]\nkind = \"free\"\nrank = 2\n\n[corpus]\ncount = 3\nseed = 1\nalphabets = [[2]]\n");
    let out = gca(&["corpus", free.path().to_str().unwrap()]);
    assert_eq!(code(&out), exit::VALIDATION);
    assert!(String::from_utf8_lossy(&out.stderr).contains("amenable"));
    // Z/3 has no homomorphism x ↦ x + 1.
    let bad_rule = temp_file(
        "[group]\nkind = \"Z\"\n[alphabet]\nkind = \"finite_abelian\"\nfactors = [3]\n[ca]\nmemory = [0]\nrule_table = [1, 2, 0]\n",
    );
    assert_eq!(code(&gca(&["run", bad_rule.path().to_str().unwrap()])), exit::VALIDATION);
    let unknown = temp_file("[group]\nkind = \"Z\"\n[alphabet]\nkind = \"finite_abelian\"\nfactors = [2]\n[ca]\nmemory = [0]\nrule_matrix = [[1]]\n[check]\nproperties = [\"bogus\"]\n");
    assert_eq!(code(&gca(&["run", unknown.path().to_str().unwrap()])), exit::VALIDATION);
    // Two generators on Z, four labels on the torus.
    assert_eq!(code(&gca(&["audit-sofic", "torus:7:2", "identity"])), exit::VALIDATION);
}

#[test]
fn empty_corpus_is_an_empty_report() {
    let f = temp_file("[group]\nkind = \"Z\"\n[corpus]\ncount = 0\nseed = 1\nalphabets = []\n");
    let out = gca(&["corpus", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), exit::OK);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["instances"], 0);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn audit_sofic_on_cycles() {
    let out = gca(&["audit-sofic", "cycle:7", "identity", "--json"]);
    assert_eq!(code(&out), exit::OK);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["audit"]["v3r"], 7);
    assert_eq!(v["audit"]["cardinality_contradiction"], true);
    let g = temp_file("# a 7-cycle\ngraph 7 2\n0 0 1\n1 0 2\n2 0 3\n3 0 4\n4 0 5\n5 0 6\n6 0 0\n0 1 6\n1 1 0\n2 1 1\n3 1 2\n4 1 3\n5 1 4\n6 1 5\n");
    let from_file = gca(&["audit-sofic", g.path().to_str().unwrap(), "identity", "--json"]);
    assert_eq!(code(&from_file), exit::OK);
    let w: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(v["audit"], w["audit"]);
}

#[test]
fn examples_list_and_show() {
    let out = gca(&["examples", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for (name, _, _) in EMBEDDED {
        assert!(text.lines().any(|l| l.starts_with(name)));
    }
    let show = gca(&["examples", "show", "triple"]);
    assert_eq!(show.stdout, scenario::embedded("triple").unwrap().as_bytes());
    assert_eq!(code(&gca(&["examples", "show", "nope"])), exit::VALIDATION);
}

fn linear_scenario(modulus: u64, memory: &[i64], coeffs: &[i64]) -> String {
    format!(
        "seed = 5\n[group]\nkind = \"Z\"\n[alphabet]\nkind = \"finite_abelian\"\nfactors = [{modulus}]\n\
         [ca]\nmemory = {memory:?}\nrule_matrix = [{coeffs:?}]\n[check]\nradius_max = 3\n"
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Same scenario, same report; every certified-false witness replays; no
    /// implication is broken.
    #[test]
    fn reports_are_deterministic_and_replay(
        modulus in 2u64..7,
        (memory, coeffs) in (1usize..=3).prop_flat_map(|k| (
            prop::sample::subsequence(vec![-1i64, 0, 1], k),
            prop::collection::vec(0i64..7, k),
        )),
    ) {
        let scn = scenario::parse(&linear_scenario(modulus, &memory, &coeffs)).unwrap();
        let a = run_scenario(&scn, "random", false).unwrap();
        let b = run_scenario(&scn, "random", false).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert!(a.passed(), "{:?}", a.violations);
        let ca = scn.automaton().unwrap();
        for v in a.verdicts.values() {
            if let (true, Some(w)) = (v.is_false(), &v.witness) {
                prop_assert!(verify_witness(&ca, w));
            }
        }
    }
}
