mod common;

use common::{finite_ca_strategy, matrix};
use gca_core::alphabet::{image_and_kernel, pi0_hom, FiniteGroup, FiniteHom, SymbolicAlphabet, SymbolicHom};
use gca_core::lattice::TorsionProfile;
use gca_core::{Alphabet, Hom};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = TorsionProfile> {
    prop_oneof![Just(TorsionProfile::Torus), Just(TorsionProfile::Elliptic), Just(TorsionProfile::Vector)]
}

fn connected_hom(alphabet: &SymbolicAlphabet, k: usize, m: usize, e: &[i64]) -> SymbolicHom {
    let g = alphabet.rank;
    let comp = FiniteHom::trivial(&alphabet.components, m, k).unwrap();
    SymbolicHom::new(alphabet, matrix(g * k, g * m, e), comp).unwrap()
}

proptest! {
    /// For a finite group every connected component is a point, so the
    /// component of `f(x)` is `π₀(f)` of the components of `x`.
    #[test]
    fn component_map_is_compatible(ca in finite_ca_strategy()) {
        let group = ca.finite_group().unwrap();
        let f = ca.finite_rule().unwrap();
        let f0 = pi0_hom(ca.rule());
        let m = f.domain_arity;
        for i in 0..group.power_size(m).unwrap() {
            let x = group.decode(i, m);
            prop_assert_eq!(f.apply(group, &x), f0.apply(&ca.alphabet().pi0(), &x));
        }
    }

    #[test]
    fn fiber_dimension_identity(
        kind in kind(),
        g in 1usize..=3,
        (k, m) in (1usize..=3, 1usize..=3),
        e in prop::collection::vec(-3i64..=3, 81),
    ) {
        let alphabet = SymbolicAlphabet::connected(kind, g).unwrap();
        let h = connected_hom(&alphabet, k, m, &e);
        let s = image_and_kernel(&Hom::Symbolic(h), &Alphabet::Symbolic(alphabet.clone())).unwrap();
        prop_assert_eq!(s.image_dim + s.kernel_dim, g * m);
        prop_assert!(s.image_dim <= g * k);
    }

    #[test]
    fn surjective_composites_are_surjective(
        g in 1usize..=2,
        (k, m, l) in (1usize..=2, 1usize..=3, 1usize..=3),
        e1 in prop::collection::vec(-2i64..=2, 36),
        e2 in prop::collection::vec(-2i64..=2, 36),
    ) {
        let alphabet = SymbolicAlphabet::connected(TorsionProfile::Torus, g).unwrap();
        let outer = connected_hom(&alphabet, k, m, &e1);
        let inner = connected_hom(&alphabet, m, l, &e2);
        let a = Alphabet::Symbolic(alphabet.clone());
        let so = image_and_kernel(&Hom::Symbolic(outer.clone()), &a).unwrap();
        let si = image_and_kernel(&Hom::Symbolic(inner.clone()), &a).unwrap();
        let comp = connected_hom(&alphabet, k, l, &vec![0; g * g * k * l]);
        let composite = SymbolicHom { connected: outer.connected.mul(&inner.connected), ..comp };
        let sc = image_and_kernel(&Hom::Symbolic(composite), &a).unwrap();
        if so.surjective && si.surjective {
            prop_assert!(sc.surjective);
        }
        prop_assert!(sc.image_dim <= so.image_dim.min(si.image_dim));
    }

    #[test]
    fn finite_image_kernel_orders_multiply(ca in finite_ca_strategy()) {
        let group: &FiniteGroup = ca.finite_group().unwrap();
        let f = ca.finite_rule().unwrap();
        let (img, ker) = f.image_and_kernel_orders();
        prop_assert_eq!(img * ker, group.power_size(f.domain_arity).unwrap());
        prop_assert!(f.is_hom(group));
    }
}
