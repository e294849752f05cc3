#![allow(dead_code)]

use gca_core::alphabet::{FiniteGroup, FiniteHom, SymbolicAlphabet};
use gca_core::corpus::{generate, CorpusSpec};
use gca_core::lattice::{IntMatrix, TorsionProfile};
use gca_core::{CellularAutomaton, GroupElement, GroupUniverse};
use proptest::prelude::*;

pub fn z() -> GroupUniverse {
    GroupUniverse::integers()
}

pub fn int(n: i64) -> GroupElement {
    GroupUniverse::int(n)
}

/// One corpus automaton per seed.
pub fn finite_ca(seed: u64) -> CellularAutomaton {
    let spec = CorpusSpec { count: 1, ..CorpusSpec::standard(seed) };
    generate(&z(), &spec).unwrap().pop().unwrap()
}

pub fn finite_ca_strategy() -> impl Strategy<Value = CellularAutomaton> {
    any::<u64>().prop_map(finite_ca)
}

/// Two automata over the same alphabet.
pub fn finite_pair(seed: u64) -> (CellularAutomaton, CellularAutomaton) {
    let spec = CorpusSpec { count: 64, ..CorpusSpec::standard(seed) };
    let all = generate(&z(), &spec).unwrap();
    let first = all[0].clone();
    let second = all[1..]
        .iter()
        .find(|c| c.finite_group() == first.finite_group())
        .cloned()
        .unwrap_or_else(|| first.clone());
    (first, second)
}

pub fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|r| entries[r * cols..(r + 1) * cols].to_vec()).collect();
    if rows == 0 {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_rows(&data)
}

pub fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max, 0..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

/// A symbolic automaton over `Z` with rank `g`, memory a nonempty subset of
/// `{-1, 0, 1}` and component group `Π`.
pub fn symbolic_ca(
    kind: TorsionProfile,
    g: usize,
    memory_mask: u8,
    entries: &[i64],
    pi: &[u64],
    comp_entries: &[u64],
) -> CellularAutomaton {
    let memory: Vec<GroupElement> = (-1..=1).filter(|i| memory_mask >> (i + 1) & 1 == 1).map(int).collect();
    let memory = if memory.is_empty() { vec![int(0)] } else { memory };
    let blocks: Vec<IntMatrix> = (0..memory.len())
        .map(|j| matrix(g, g, &entries[j * g * g..(j + 1) * g * g]))
        .collect();
    let pi_group = if pi.is_empty() { FiniteGroup::trivial() } else { FiniteGroup::abelian(pi).unwrap() };
    let alphabet = SymbolicAlphabet::new(kind, g, pi_group.clone()).unwrap();
    let k = pi.len();
    let comp_blocks: Vec<IntMatrix> = (0..memory.len())
        .map(|j| {
            let mut b = IntMatrix::zeros(k, k);
            for r in 0..k {
                for l in 0..k {
                    let (nr, nl) = (pi[r], pi[l]);
                    let step = nr / gcd(nr, nl);
                    b[(r, l)] = (comp_entries[(j * 9 + r * 3 + l) % comp_entries.len()] % nr * step % nr).into();
                }
            }
            b
        })
        .collect();
    let comp = if k == 0 {
        FiniteHom::trivial(&pi_group, memory.len(), 1).unwrap()
    } else {
        FiniteHom::from_blocks(&pi_group, &comp_blocks).unwrap()
    };
    CellularAutomaton::symbolic(z(), alphabet, memory, &blocks, comp).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn symbolic_ca_strategy() -> impl Strategy<Value = CellularAutomaton> {
    (
        prop_oneof![Just(TorsionProfile::Torus), Just(TorsionProfile::Elliptic), Just(TorsionProfile::Vector)],
        1usize..=2,
        1u8..8,
        prop::collection::vec(-2i64..=2, 12),
        prop_oneof![Just(vec![]), Just(vec![2]), Just(vec![2, 2]), Just(vec![3])],
        prop::collection::vec(0u64..6, 1..8),
    )
        .prop_map(|(kind, g, mask, e, pi, ce)| symbolic_ca(kind, g, mask, &e, &pi, &ce))
}
