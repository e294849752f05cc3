use std::collections::BTreeSet;

use gca_core::alphabet::FiniteGroup;
use gca_core::sofic::{compute_vr, counting_audit, greedy_tiling, packing_subset};
use gca_core::{Alphabet, CellularAutomaton, GroupElement, GroupUniverse, LabeledGraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// A torus with some edges removed.
fn damaged_torus() -> impl Strategy<Value = (LabeledGraph, usize)> {
    (3usize..9, 1usize..=2, prop::collection::vec(any::<prop::sample::Index>(), 0..4)).prop_map(|(n, d, cuts)| {
        let t = LabeledGraph::torus(n, d).unwrap();
        let mut edges = t.edges().to_vec();
        for c in cuts {
            if !edges.is_empty() {
                edges.remove(c.index(edges.len()));
            }
        }
        (LabeledGraph::new(t.vertex_count(), t.label_count(), edges).unwrap(), d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vr_is_monotone((g, d) in damaged_torus()) {
        let u = GroupUniverse::lattice(d);
        let sets: Vec<BTreeSet<usize>> = (0..4).map(|r| compute_vr(&g, &u, r).unwrap().vertices.into_iter().collect()).collect();
        for w in sets.windows(2) {
            prop_assert!(w[1].is_subset(&w[0]));
        }
    }

    /// `v ∈ V((k+1)r)` implies `B_G(v, r) ⊆ V(kr)`.
    #[test]
    fn balls_around_good_vertices_are_good((g, d) in damaged_torus(), r in 1usize..=2, k in 1usize..=2) {
        let u = GroupUniverse::lattice(d);
        let outer = compute_vr(&g, &u, (k + 1) * r).unwrap();
        let inner: BTreeSet<usize> = compute_vr(&g, &u, k * r).unwrap().vertices.into_iter().collect();
        for &v in &outer.vertices {
            prop_assert!(g.ball(v, r).is_subset(&inner));
        }
    }

    #[test]
    fn packings_are_disjoint_and_covering((g, _) in damaged_torus(), mask in any::<u64>(), r in 0usize..=2) {
        let subset: Vec<usize> = (0..g.vertex_count()).filter(|v| mask >> (v % 64) & 1 == 1).collect();
        let p = packing_subset(&g, &subset, r);
        prop_assert!(p.disjoint && p.covering);
    }

    #[test]
    fn tilings_are_exact(
        shape in prop::collection::btree_set((0i64..3, 0i64..3), 1..5),
        (w, h) in (1i64..9, 1i64..9),
    ) {
        let u = GroupUniverse::lattice(2);
        let shape: Vec<GroupElement> = shape.into_iter().map(|(x, y)| GroupElement::Vector(vec![x, y])).collect();
        let region: Vec<GroupElement> = (0..w).flat_map(|x| (0..h).map(move |y| GroupElement::Vector(vec![x, y]))).collect();
        let t = greedy_tiling(&u, &shape, &region).unwrap();
        prop_assert!(t.disjoint && t.interior_covered);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Under the sofic, packing and `ε` conditions every line computed from
    /// instance data holds.
    #[test]
    fn audit_lines_follow_from_the_conditions(
        n in 7usize..14,
        cuts in prop::collection::vec(any::<prop::sample::Index>(), 0..2),
        den in 10u32..400,
        doubling in any::<bool>(),
    ) {
        let t = LabeledGraph::cycle(n).unwrap();
        let mut edges = t.edges().to_vec();
        for c in cuts {
            edges.remove(c.index(edges.len()));
        }
        let g = LabeledGraph::new(n, 2, edges).unwrap();
        let u = GroupUniverse::integers();
        let group = FiniteGroup::cyclic(4).unwrap();
        let ca = if doubling {
            CellularAutomaton::finite_from_fn(u, group, vec![GroupUniverse::int(0)], |x| 2 * x[0] % 4).unwrap()
        } else {
            CellularAutomaton::identity(u, Alphabet::Finite(group)).unwrap()
        };
        let eps = BigRational::new(BigInt::from(1), BigInt::from(den));
        let rep = counting_audit(&ca, &g, 1, &eps).unwrap();
        if rep.sofic_condition && rep.epsilon_conditions.holds() && rep.packing_covering {
            prop_assert!(rep.all_instance_lines_hold(), "{:#?}", rep.lines);
        }
        prop_assert_eq!(rep.phi_surjective, !doubling || rep.v3r == 0);
    }
}

#[test]
fn identity_audit_on_tori() {
    for (n, d, den) in [(7, 1, 100), (9, 1, 100), (7, 2, 1000)] {
        let eps = BigRational::new(BigInt::from(1), BigInt::from(den));
        let g = LabeledGraph::torus(n, d).unwrap();
        let u = GroupUniverse::lattice(d);
        let id = CellularAutomaton::identity(u, Alphabet::Finite(FiniteGroup::cyclic(2).unwrap())).unwrap();
        let rep = counting_audit(&id, &g, 1, &eps).unwrap();
        assert_eq!(rep.v3r, g.vertex_count());
        assert!(rep.sofic_condition && rep.packing_disjoint && rep.packing_covering);
        assert!(rep.epsilon_conditions.holds());
        assert!(rep.all_instance_lines_hold(), "{:#?}", rep.lines);
        // The hypothesis line is the premise refuted by the actual image.
        assert_eq!(rep.cardinality_contradiction, Some(true));
    }
}
