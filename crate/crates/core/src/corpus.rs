//! Seeded random linear group cellular automata over finite abelian alphabets.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::FiniteGroup;
use crate::ca::CellularAutomaton;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupUniverse};
use crate::lattice::IntMatrix;

/// Parameters of a corpus: `count` automata with alphabets drawn uniformly
/// from `alphabets` (invariant factors) and memory a random nonempty subset of
/// the radius-`memory_radius` ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub seed: u64,
    pub alphabets: Vec<Vec<u64>>,
    #[serde(default = "default_radius")]
    pub memory_radius: usize,
}

fn default_radius() -> usize {
    1
}

impl CorpusSpec {
    /// 200 automata over `Z/2, Z/3, Z/4, Z/2 × Z/2` with memory in
    /// `{-1, 0, 1}`.
    pub fn standard(seed: u64) -> Self {
        CorpusSpec {
            count: 200,
            seed,
            alphabets: vec![vec![2], vec![3], vec![4], vec![2, 2]],
            memory_radius: 1,
        }
    }
}

/// A random endomorphism block of `Z/n_1 × ... × Z/n_k`: entry `(r, l)`
/// is a multiple of `n_r / gcd(n_r, n_l)`, which makes `Z/n_l → Z/n_r`
/// well defined.
fn random_block(rng: &mut ChaCha8Rng, factors: &[u64]) -> IntMatrix {
    let k = factors.len();
    let mut b = IntMatrix::zeros(k, k);
    for (r, &nr) in factors.iter().enumerate() {
        for (l, &nl) in factors.iter().enumerate() {
            let a = rng.random_range(0..nr);
            b[(r, l)] = BigInt::from(a * (nr / nr.gcd(&nl)) % nr);
        }
    }
    b
}

pub fn generate(universe: &GroupUniverse, spec: &CorpusSpec) -> Result<Vec<CellularAutomaton>> {
    if spec.count > 0 && spec.alphabets.is_empty() {
        return Err(Error::InvalidArgument("corpus needs at least one alphabet".into()));
    }
    let groups: Vec<FiniteGroup> = spec.alphabets.iter().map(|f| FiniteGroup::abelian(f)).collect::<Result<_>>()?;
    let pool: Vec<GroupElement> = universe.ball(spec.memory_radius).elements().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let i = rng.random_range(0..groups.len());
        let memory: Vec<GroupElement> = loop {
            let pick: Vec<GroupElement> = pool.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
            if !pick.is_empty() {
                break pick;
            }
        };
        let blocks: Vec<IntMatrix> = memory.iter().map(|_| random_block(&mut rng, &spec.alphabets[i])).collect();
        out.push(CellularAutomaton::finite_linear(universe.clone(), groups[i].clone(), memory, &blocks)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let z = GroupUniverse::integers();
        let spec = CorpusSpec { count: 30, ..CorpusSpec::standard(7) };
        let a = generate(&z, &spec).unwrap();
        let b = generate(&z, &spec).unwrap();
        assert_eq!(a.len(), 30);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.same_map(y));
            assert!(!x.memory().is_empty());
            assert!(x.memory().iter().all(|m| matches!(m, GroupElement::Vector(v) if v[0].abs() <= 1)));
            assert!(x.finite_rule().unwrap().is_hom(x.finite_group().unwrap()));
        }
        assert!(generate(&z, &CorpusSpec { count: 0, ..spec }).unwrap().is_empty());
    }

    #[test]
    fn mixed_factor_blocks_are_homomorphisms() {
        let z = GroupUniverse::integers();
        let spec = CorpusSpec {
            count: 40,
            seed: 3,
            alphabets: vec![vec![2, 4], vec![3, 6]],
            memory_radius: 1,
        };
        for ca in generate(&z, &spec).unwrap() {
            assert!(ca.finite_rule().unwrap().is_hom(ca.finite_group().unwrap()));
        }
    }
}
