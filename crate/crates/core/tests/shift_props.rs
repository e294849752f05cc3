mod common;

use common::finite_ca_strategy;
use gca_core::shift::{preimage_counts, ImageAutomaton, Rule1d, Sft};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Surjective rules are balanced; others have an orphan word.
    #[test]
    fn balance_or_orphan(ca in finite_ca_strategy()) {
        let rule = Rule1d::from_ca(&ca).unwrap();
        let automaton = ImageAutomaton::from_ca(&ca).unwrap();
        let q = rule.alphabet_size() as u64;
        for n in 1..=8usize {
            if q.pow((n + rule.width - 1) as u32) > 1 << 16 {
                break;
            }
            let counts = preimage_counts(&rule, n).unwrap();
            if automaton.is_universal() {
                let expected = q.pow((rule.width - 1) as u32);
                prop_assert!(counts.iter().all(|&c| c == expected), "n = {}", n);
            } else if n >= automaton.orphan().unwrap().len() {
                prop_assert!(counts.contains(&0));
            }
            let accepted = counts.iter().filter(|&&c| c > 0).count();
            prop_assert_eq!(automaton.word_count(n), accepted.into());
        }
    }

    #[test]
    fn word_counts_are_monotone_and_submultiplicative(ca in finite_ca_strategy()) {
        let automaton = ImageAutomaton::from_ca(&ca).unwrap();
        let w: Vec<_> = (0..=10).map(|n| automaton.word_count(n)).collect();
        for n in 0..10 {
            prop_assert!(w[n] <= w[n + 1]);
            for m in 0..=(10 - n) {
                prop_assert!(w[n + m] <= &w[n] * &w[m]);
            }
        }
    }

    /// Gluing at the computed gap always yields an admissible word.
    #[test]
    fn gluing_at_the_gap(u in prop::collection::vec(0usize..2, 1..5), v in prop::collection::vec(0usize..2, 1..5), extra in 0usize..3) {
        let sft = Sft::golden_mean();
        prop_assume!(sft.is_admissible(&u) && sft.is_admissible(&v));
        let gap = sft.strong_irreducibility_gap().0.unwrap();
        let w = sft.glue(&u, &v, gap + extra).unwrap();
        prop_assert!(sft.is_admissible(&w));
        prop_assert_eq!(&w[..u.len()], &u[..]);
        prop_assert_eq!(&w[w.len() - v.len()..], &v[..]);
    }
}
