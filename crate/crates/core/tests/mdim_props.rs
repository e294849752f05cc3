mod common;

use common::{finite_ca_strategy, int, symbolic_ca_strategy, z};
use gca_core::alphabet::{FiniteGroup, SymbolicAlphabet};
use gca_core::deciders::{ball_windows, starstar_preinjective};
use gca_core::lattice::TorsionProfile;
use gca_core::mdim::{mdim_estimate, window_dim, WindowMethod};
use gca_core::{Alphabet, CellularAutomaton, GroupElement, GroupUniverse};
use num_bigint::BigUint;
use proptest::prelude::*;

fn interval(n: i64) -> Vec<GroupElement> {
    (0..n).map(int).collect()
}

#[test]
fn full_shift_calibration() {
    for factors in [vec![2], vec![3], vec![4], vec![2, 2], vec![6]] {
        let g = FiniteGroup::abelian(&factors).unwrap();
        let q = g.order();
        let id = CellularAutomaton::identity(z(), Alphabet::Finite(g)).unwrap();
        let est = mdim_estimate(&id, 5).unwrap();
        assert!(est.windows.iter().all(|w| w.entropy_is_log_of(q) && w.dim == 0));
    }
    for g in 1..=3 {
        let a = SymbolicAlphabet::connected(TorsionProfile::Elliptic, g).unwrap();
        let id = CellularAutomaton::identity(z(), Alphabet::Symbolic(a)).unwrap();
        assert!(mdim_estimate(&id, 5).unwrap().is_full_dimensional());
    }
    let z2 = GroupUniverse::lattice(2);
    let id = CellularAutomaton::identity(z2, Alphabet::Finite(FiniteGroup::cyclic(2).unwrap())).unwrap();
    assert!(mdim_estimate(&id, 3).unwrap().windows.iter().all(|w| w.entropy_is_log_of(2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// (••)-pre-injective images have full dimension on every window.
    #[test]
    fn starstar_gives_full_dimension(ca in symbolic_ca_strategy()) {
        let v = starstar_preinjective(&ca, &ball_windows(&ca, 2)).unwrap();
        let rank = ca.alphabet().dim();
        for n in 1..=8 {
            let w = window_dim(&ca, &interval(n)).unwrap();
            prop_assert!(w.dim <= rank * w.sites);
            if v.is_true() {
                prop_assert_eq!(w.dim, rank * w.sites);
            }
        }
        if v.is_true() {
            prop_assert!(mdim_estimate(&ca, 4).unwrap().is_full_dimensional());
        }
    }

    /// Restriction `Γ_{[0,n+1)} → Γ_{[0,n)}` is onto and windows never
    /// exceed the full shift.
    #[test]
    fn windows_are_monotone_and_bounded(ca in finite_ca_strategy()) {
        let q = ca.alphabet().pi0().order();
        let mut prev = BigUint::from(1u32);
        for n in 1..=8 {
            let w = window_dim(&ca, &interval(n)).unwrap();
            prop_assert!(w.count >= prev);
            prop_assert!(w.count <= BigUint::from(q).pow(n as u32));
            prev = w.count;
        }
    }

    /// Far-apart parts of a window have independent dependency regions, so
    /// the window-map count factors into image-automaton counts.
    #[test]
    fn window_methods_agree(ca in finite_ca_strategy(), n in 1i64..6, m in 1i64..4) {
        let mut split = interval(n);
        split.extend((0..m).map(|i| int(n + 5 + i)));
        let whole = window_dim(&ca, &split).unwrap();
        prop_assert_eq!(whole.method, WindowMethod::WindowMap);
        let left = window_dim(&ca, &interval(n)).unwrap();
        let right = window_dim(&ca, &interval(m)).unwrap();
        prop_assert_eq!(right.method, WindowMethod::ImageAutomaton);
        prop_assert_eq!(whole.count, left.count * right.count);
    }
}
