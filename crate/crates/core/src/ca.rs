//! Group cellular automata: `τ(c)(g) = μ((g⁻¹c)|_M)`, i.e. the output at `g`
//! reads the input at `g·m` for each memory element `m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::alphabet::{pi0_hom, Alphabet, FiniteGroup, FiniteHom, Hom, SymbolicAlphabet, SymbolicHom};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupUniverse};
use crate::lattice::IntMatrix;

/// A finite pattern: alphabet values on a finite set of sites.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Patch(pub BTreeMap<GroupElement, usize>);

impl Serialize for Patch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(&GroupElement, &usize)> = self.0.iter().collect();
        pairs.serialize(s)
    }
}

impl Patch {
    pub fn new() -> Self {
        Patch(BTreeMap::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (GroupElement, usize)>) -> Self {
        Patch(pairs.into_iter().collect())
    }

    /// Values on consecutive integers starting at `start`.
    pub fn on_integers(start: i64, values: &[usize]) -> Self {
        Patch(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (GroupUniverse::int(start + i as i64), v))
                .collect(),
        )
    }

    pub fn get(&self, g: &GroupElement) -> Option<usize> {
        self.0.get(g).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = &GroupElement> {
        self.0.keys()
    }

    pub fn values(&self) -> Vec<usize> {
        self.0.values().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A configuration on `Z^d` periodic under `p_1 Z × ... × p_d Z`, stored on
/// the fundamental box in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicConfig {
    pub periods: Vec<usize>,
    pub values: Vec<usize>,
}

impl PeriodicConfig {
    pub fn new(periods: Vec<usize>, values: Vec<usize>) -> Result<Self> {
        let size: usize = periods.iter().product();
        if periods.is_empty() || periods.contains(&0) || size != values.len() {
            return Err(Error::InvalidArgument("periodic configuration shape mismatch".into()));
        }
        Ok(PeriodicConfig { periods, values })
    }

    pub fn constant(periods: Vec<usize>, value: usize) -> Self {
        let size = periods.iter().product();
        PeriodicConfig {
            periods,
            values: vec![value; size],
        }
    }

    fn offset(&self, v: &[i64]) -> usize {
        v.iter()
            .zip(&self.periods)
            .fold(0, |acc, (&x, &p)| acc * p + x.rem_euclid(p as i64) as usize)
    }

    fn site(&self, mut idx: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.periods.len()];
        for i in (0..self.periods.len()).rev() {
            v[i] = (idx % self.periods[i]) as i64;
            idx /= self.periods[i];
        }
        v
    }

    pub fn get(&self, g: &GroupElement) -> usize {
        match g {
            GroupElement::Vector(v) => self.values[self.offset(v)],
            _ => panic!("periodic configurations live on lattices"),
        }
    }

    /// `(t·c)(h) = c(t⁻¹ h)`.
    pub fn translate(&self, t: &[i64]) -> PeriodicConfig {
        let values = (0..self.values.len())
            .map(|i| {
                let h = self.site(i);
                let src: Vec<i64> = h.iter().zip(t).map(|(a, b)| a - b).collect();
                self.values[self.offset(&src)]
            })
            .collect();
        PeriodicConfig {
            periods: self.periods.clone(),
            values,
        }
    }
}

/// A cellular automaton whose local rule is a group homomorphism `A^M → A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularAutomaton {
    universe: GroupUniverse,
    alphabet: Alphabet,
    memory: Vec<GroupElement>,
    rule: Hom,
}

impl CellularAutomaton {
    pub fn new(universe: GroupUniverse, alphabet: Alphabet, memory: Vec<GroupElement>, rule: Hom) -> Result<Self> {
        if memory.is_empty() {
            return Err(Error::InvalidMemory("memory set is empty".into()));
        }
        for m in &memory {
            universe.check(m)?;
        }
        let distinct: BTreeSet<&GroupElement> = memory.iter().collect();
        if distinct.len() != memory.len() {
            return Err(Error::InvalidMemory("memory elements are not distinct".into()));
        }
        if rule.domain_arity() != memory.len() || rule.codomain_arity() != 1 {
            return Err(Error::InvalidMemory(format!(
                "rule has arity {} → {}, memory has {} elements",
                rule.domain_arity(),
                rule.codomain_arity(),
                memory.len()
            )));
        }
        rule.check_alphabet(&alphabet)?;
        Ok(CellularAutomaton {
            universe,
            alphabet,
            memory,
            rule,
        })
    }

    /// The identity automaton with memory `{1_G}`.
    pub fn identity(universe: GroupUniverse, alphabet: Alphabet) -> Result<Self> {
        let memory = vec![universe.identity()];
        let rule = match &alphabet {
            Alphabet::Finite(g) => Hom::Finite(FiniteHom::identity(g, 1)?),
            Alphabet::Symbolic(s) => Hom::Symbolic(SymbolicHom::new(
                s,
                IntMatrix::identity(s.rank),
                FiniteHom::identity(&s.components, 1)?,
            )?),
        };
        Self::new(universe, alphabet, memory, rule)
    }

    /// A finite-alphabet automaton from an arbitrary local function; fails
    /// unless it is a homomorphism.
    pub fn finite_from_fn(
        universe: GroupUniverse,
        group: FiniteGroup,
        memory: Vec<GroupElement>,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let rule = FiniteHom::from_fn(&group, memory.len(), 1, |x| vec![f(x)])?;
        Self::new(universe, Alphabet::Finite(group), memory, Hom::Finite(rule))
    }

    /// A linear automaton over `Z/n_1 × ... × Z/n_k` with one `k × k` integer
    /// block per memory element.
    pub fn finite_linear(
        universe: GroupUniverse,
        group: FiniteGroup,
        memory: Vec<GroupElement>,
        blocks: &[IntMatrix],
    ) -> Result<Self> {
        if blocks.len() != memory.len() {
            return Err(Error::InvalidMemory("one block per memory element required".into()));
        }
        let rule = FiniteHom::from_blocks(&group, blocks)?;
        Self::new(universe, Alphabet::Finite(group), memory, Hom::Finite(rule))
    }

    /// A symbolic automaton with one `g × g` block per memory element and a
    /// component rule `Π^M → Π`.
    pub fn symbolic(
        universe: GroupUniverse,
        alphabet: SymbolicAlphabet,
        memory: Vec<GroupElement>,
        blocks: &[IntMatrix],
        components: FiniteHom,
    ) -> Result<Self> {
        if blocks.len() != memory.len() {
            return Err(Error::InvalidMemory("one block per memory element required".into()));
        }
        let g = alphabet.rank;
        let mut connected = IntMatrix::zeros(g, g * blocks.len());
        for (j, b) in blocks.iter().enumerate() {
            if b.rows() != g || b.cols() != g {
                return Err(Error::InvalidAlphabet(format!("rule blocks must be {g}×{g}")));
            }
            for r in 0..g {
                for c in 0..g {
                    connected[(r, j * g + c)] = b[(r, c)].clone();
                }
            }
        }
        let rule = SymbolicHom::new(&alphabet, connected, components)?;
        Self::new(universe, Alphabet::Symbolic(alphabet), memory, Hom::Symbolic(rule))
    }

    pub fn universe(&self) -> &GroupUniverse {
        &self.universe
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn memory(&self) -> &[GroupElement] {
        &self.memory
    }

    pub fn rule(&self) -> &Hom {
        &self.rule
    }

    pub fn finite_group(&self) -> Option<&FiniteGroup> {
        self.alphabet.as_finite()
    }

    pub fn finite_rule(&self) -> Option<&FiniteHom> {
        match &self.rule {
            Hom::Finite(f) => Some(f),
            Hom::Symbolic(_) => None,
        }
    }

    pub fn symbolic_rule(&self) -> Option<&SymbolicHom> {
        match &self.rule {
            Hom::Symbolic(f) => Some(f),
            Hom::Finite(_) => None,
        }
    }

    fn require_finite(&self) -> Result<(&FiniteGroup, &FiniteHom)> {
        match (&self.alphabet, &self.rule) {
            (Alphabet::Finite(g), Hom::Finite(f)) => Ok((g, f)),
            _ => Err(Error::SymbolicEvaluation),
        }
    }

    /// Whether the memory is the single element `1_G`.
    pub fn is_pointwise(&self) -> bool {
        self.memory.len() == 1 && self.memory[0] == self.universe.identity()
    }

    /// Integer blocks of the local rule, one per memory element: `g × g` for
    /// symbolic alphabets, `k × k` over the invariant factors for finite
    /// abelian ones. `None` for non-abelian finite alphabets.
    pub fn linear_blocks(&self) -> Option<Vec<IntMatrix>> {
        match (&self.alphabet, &self.rule) {
            (Alphabet::Symbolic(s), Hom::Symbolic(f)) => {
                Some((0..self.memory.len()).map(|j| f.block(s.rank, 0, j)).collect())
            }
            (Alphabet::Finite(g), Hom::Finite(f)) => {
                let map = f.abelian_map(g)?;
                let nf = g.factors()?.len();
                Some(
                    (0..self.memory.len())
                        .map(|j| map.matrix.select_cols(&(j * nf..(j + 1) * nf).collect::<Vec<_>>()))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Output of the local rule at `g` when the input is read through `read`.
    fn local_value(&self, g: &GroupElement, read: impl Fn(&GroupElement) -> Option<usize>) -> Result<usize> {
        let (group, rule) = self.require_finite()?;
        let mut x = Vec::with_capacity(self.memory.len());
        for m in &self.memory {
            let site = self.universe.mul(g, m);
            x.push(read(&site).ok_or_else(|| Error::DomainTooSmall(site.to_string()))?);
        }
        Ok(rule.apply_scalar(group, &x))
    }

    /// Evaluates `τ` on `region`, reading inputs from `c`, which must contain
    /// `g·m` for every `g` in the region and `m` in the memory.
    pub fn apply_patch(&self, c: &Patch, region: &[GroupElement]) -> Result<Patch> {
        let mut out = BTreeMap::new();
        for g in region {
            self.universe.check(g)?;
            out.insert(g.clone(), self.local_value(g, |s| c.get(s))?);
        }
        Ok(Patch(out))
    }

    /// The largest region on which `c` determines `τ(c)`.
    pub fn output_region(&self, c: &Patch) -> Vec<GroupElement> {
        let mut candidates = BTreeSet::new();
        for d in c.domain() {
            for m in &self.memory {
                candidates.insert(self.universe.mul(d, &self.universe.inverse(m)));
            }
        }
        candidates
            .into_iter()
            .filter(|g| self.memory.iter().all(|m| c.get(&self.universe.mul(g, m)).is_some()))
            .collect()
    }

    /// `τ(c)` on [`Self::output_region`].
    pub fn apply_patch_max(&self, c: &Patch) -> Result<Patch> {
        let region = self.output_region(c);
        self.apply_patch(c, &region)
    }

    /// `τ` on a periodic configuration of `Z^d`.
    pub fn apply_periodic(&self, c: &PeriodicConfig) -> Result<PeriodicConfig> {
        let dim = self.universe.lattice_dim().ok_or_else(|| Error::UnsupportedUniverse {
            required: "Z^d".into(),
            found: self.universe.to_string(),
        })?;
        if c.periods.len() != dim {
            return Err(Error::InvalidArgument("period dimension mismatch".into()));
        }
        let values = (0..c.values.len())
            .map(|i| {
                let g = GroupElement::Vector(c.site(i));
                self.local_value(&g, |s| Some(c.get(s)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PeriodicConfig {
            periods: c.periods.clone(),
            values,
        })
    }

    /// `τ` on a full configuration of a finite universe, indexed by element
    /// index.
    pub fn apply_total(&self, c: &[usize]) -> Result<Vec<usize>> {
        let fin = self.universe.as_finite().ok_or_else(|| Error::UnsupportedUniverse {
            required: "finite group".into(),
            found: self.universe.to_string(),
        })?;
        if c.len() != fin.order() {
            return Err(Error::InvalidArgument("configuration length differs from group order".into()));
        }
        (0..fin.order())
            .map(|i| {
                self.local_value(&GroupElement::Index(i), |s| match s {
                    GroupElement::Index(j) => Some(c[*j]),
                    _ => None,
                })
            })
            .collect()
    }

    fn check_compatible(&self, other: &CellularAutomaton) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::AlphabetMismatch(format!(
                "universes differ: {} vs {}",
                self.universe, other.universe
            )));
        }
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "alphabets differ: {} vs {}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    /// `outer ∘ inner`, with memory `{m·m′}` in canonical order.
    pub fn compose(outer: &CellularAutomaton, inner: &CellularAutomaton) -> Result<CellularAutomaton> {
        outer.check_compatible(inner)?;
        let u = &outer.universe;
        let memory: Vec<GroupElement> = outer
            .memory
            .iter()
            .flat_map(|m| inner.memory.iter().map(move |m2| u.mul(m, m2)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos: HashMap<&GroupElement, usize> = memory.iter().enumerate().map(|(i, g)| (g, i)).collect();
        // reads[i][j]: position in the new memory of outer.m_i · inner.m_j
        let reads: Vec<Vec<usize>> = outer
            .memory
            .iter()
            .map(|m| inner.memory.iter().map(|m2| pos[&u.mul(m, m2)]).collect())
            .collect();

        let compose_finite = |group: &FiniteGroup, fo: &FiniteHom, fi: &FiniteHom| {
            FiniteHom::from_fn(group, memory.len(), 1, |x| {
                let y: Vec<usize> = reads
                    .iter()
                    .map(|row| {
                        let inp: Vec<usize> = row.iter().map(|&p| x[p]).collect();
                        fi.apply_scalar(group, &inp)
                    })
                    .collect();
                vec![fo.apply_scalar(group, &y)]
            })
        };

        let rule = match (&outer.alphabet, &outer.rule, &inner.rule) {
            (Alphabet::Finite(g), Hom::Finite(fo), Hom::Finite(fi)) => Hom::Finite(compose_finite(g, fo, fi)?),
            (Alphabet::Symbolic(s), Hom::Symbolic(fo), Hom::Symbolic(fi)) => {
                let g = s.rank;
                let mut connected = IntMatrix::zeros(g, g * memory.len());
                for (i, row) in reads.iter().enumerate() {
                    let bo = fo.block(g, 0, i);
                    for (j, &p) in row.iter().enumerate() {
                        let prod = bo.mul(&fi.block(g, 0, j));
                        for r in 0..g {
                            for c in 0..g {
                                connected[(r, p * g + c)] += &prod[(r, c)];
                            }
                        }
                    }
                }
                let components = compose_finite(&s.components, &fo.components, &fi.components)?;
                Hom::Symbolic(SymbolicHom::new(s, connected, components)?)
            }
            _ => return Err(Error::AlphabetMismatch("rule kinds differ".into())),
        };
        CellularAutomaton::new(outer.universe.clone(), outer.alphabet.clone(), memory, rule)
    }

    /// Whether the rule ignores memory coordinate `j`.
    fn ignores(&self, j: usize) -> bool {
        match (&self.alphabet, &self.rule) {
            (Alphabet::Finite(g), Hom::Finite(f)) => f.ignores_coordinate(g, j),
            (Alphabet::Symbolic(s), Hom::Symbolic(f)) => {
                f.block(s.rank, 0, j).is_zero() && f.components.ignores_coordinate(&s.components, j)
            }
            _ => false,
        }
    }

    /// The same map with a minimal memory set in canonical order. A rule that
    /// is identically `e` normalises to memory `{1_G}`.
    pub fn normalize(&self) -> CellularAutomaton {
        let mut keep: Vec<usize> = (0..self.memory.len()).filter(|&j| !self.ignores(j)).collect();
        keep.sort_by(|&a, &b| self.memory[a].cmp(&self.memory[b]));
        if keep.is_empty() {
            return self.constant_identity();
        }
        let memory: Vec<GroupElement> = keep.iter().map(|&j| self.memory[j].clone()).collect();
        let rule = match (&self.alphabet, &self.rule) {
            (Alphabet::Finite(g), Hom::Finite(f)) => Hom::Finite(f.project_inputs(g, &keep).expect("smaller table")),
            (Alphabet::Symbolic(s), Hom::Symbolic(f)) => {
                let g = s.rank;
                let cols: Vec<usize> = keep.iter().flat_map(|&j| j * g..(j + 1) * g).collect();
                Hom::Symbolic(SymbolicHom {
                    domain_arity: keep.len(),
                    codomain_arity: 1,
                    connected: f.connected.select_cols(&cols),
                    components: f.components.project_inputs(&s.components, &keep).expect("smaller table"),
                })
            }
            _ => unreachable!("validated at construction"),
        };
        CellularAutomaton {
            universe: self.universe.clone(),
            alphabet: self.alphabet.clone(),
            memory,
            rule,
        }
    }

    fn constant_identity(&self) -> CellularAutomaton {
        let rule = match &self.alphabet {
            Alphabet::Finite(g) => Hom::Finite(FiniteHom::trivial(g, 1, 1).expect("small")),
            Alphabet::Symbolic(s) => Hom::Symbolic(SymbolicHom {
                domain_arity: 1,
                codomain_arity: 1,
                connected: IntMatrix::zeros(s.rank, s.rank),
                components: FiniteHom::trivial(&s.components, 1, 1).expect("small"),
            }),
        };
        CellularAutomaton {
            universe: self.universe.clone(),
            alphabet: self.alphabet.clone(),
            memory: vec![self.universe.identity()],
            rule,
        }
    }

    /// Equality of the induced global maps.
    pub fn same_map(&self, other: &CellularAutomaton) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn is_identity_map(&self) -> bool {
        CellularAutomaton::identity(self.universe.clone(), self.alphabet.clone())
            .map(|id| self.same_map(&id))
            .unwrap_or(false)
    }

    /// Whether the normalised rule is identically `e`.
    pub fn is_constant_identity(&self) -> bool {
        self.normalize() == self.constant_identity()
    }

    /// `τ₀` on the component group, with local rule `π₀(μ)`.
    pub fn induced_component_ca(&self) -> CellularAutomaton {
        let pi0 = self.alphabet.pi0();
        CellularAutomaton {
            universe: self.universe.clone(),
            alphabet: Alphabet::Finite(pi0),
            memory: self.memory.clone(),
            rule: Hom::Finite(pi0_hom(&self.rule)),
        }
    }

    /// Searches for an inverse automaton with memory inside `B_S(r)` for
    /// `r = 0..=radius_max`. Finite alphabets only.
    pub fn find_inverse(&self, radius_max: usize) -> Result<InverseSearch> {
        let (group, _) = self.require_finite()?;
        let id = self.universe.identity();
        for r in 0..=radius_max {
            let ball = self.universe.ball(r);
            let inputs: Vec<GroupElement> = ball
                .elements()
                .iter()
                .flat_map(|g| self.memory.iter().map(move |m| self.universe.mul(g, m)))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let Some(space) = group.power_size(inputs.len()) else {
                return Ok(InverseSearch::NoneWithinRadius {
                    radius: r.saturating_sub(1),
                    exhausted: false,
                    witness: crate::deciders::non_injectivity_witness(self),
                });
            };
            // The value at 1_G is free unless some ball element reads it.
            let Some(centre) = inputs.iter().position(|g| *g == id) else {
                continue;
            };
            let out_size = group.power_size(ball.len()).expect("ball no larger than inputs");
            let mut table = vec![usize::MAX; out_size];
            let mut consistent = true;
            for idx in 0..space {
                let x = group.decode(idx, inputs.len());
                let c = Patch(inputs.iter().cloned().zip(x.iter().copied()).collect());
                let y = self.apply_patch(&c, ball.elements())?.values();
                let slot = &mut table[group.encode(&y)];
                if *slot == usize::MAX {
                    *slot = x[centre];
                } else if *slot != x[centre] {
                    consistent = false;
                    break;
                }
            }
            if !consistent {
                continue;
            }
            if table.contains(&usize::MAX) {
                // Some window is not in the image, so τ is not surjective and
                // cannot be invertible at any radius.
                return Ok(InverseSearch::NoneWithinRadius {
                    radius: radius_max,
                    exhausted: true,
                    witness: crate::deciders::non_injectivity_witness(self),
                });
            }
            let rule = FiniteHom::new(group, ball.len(), 1, table)?;
            if !rule.is_hom(group) {
                continue;
            }
            let sigma = CellularAutomaton::new(
                self.universe.clone(),
                self.alphabet.clone(),
                ball.elements().to_vec(),
                Hom::Finite(rule),
            )?
            .normalize();
            let left = CellularAutomaton::compose(&sigma, self)?;
            let right = CellularAutomaton::compose(self, &sigma)?;
            if left.is_identity_map() && right.is_identity_map() {
                return Ok(InverseSearch::Found {
                    inverse: Box::new(sigma),
                    radius: r,
                });
            }
        }
        Ok(InverseSearch::NoneWithinRadius {
            radius: radius_max,
            exhausted: false,
            witness: crate::deciders::non_injectivity_witness(self),
        })
    }
}

/// Outcome of [`CellularAutomaton::find_inverse`].
#[derive(Debug, Clone)]
pub enum InverseSearch {
    /// `σ ∘ τ = τ ∘ σ = id`, checked by normalising both composites.
    Found { inverse: Box<CellularAutomaton>, radius: usize },
    /// No inverse with memory in the searched balls. `exhausted` is set when
    /// non-surjectivity rules out an inverse at every radius.
    NoneWithinRadius {
        radius: usize,
        exhausted: bool,
        witness: Option<NonInjectivityWitness>,
    },
}

/// Two distinct configurations with the same image, given as a nontrivial
/// kernel element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonInjectivityWitness {
    /// Finitely supported kernel element (support listed, `e` elsewhere).
    FiniteSupport(Patch),
    /// Periodic kernel element of `Z^d`.
    Periodic(PeriodicConfig),
    /// Kernel element of a finite universe, indexed by element index.
    Total(Vec<usize>),
}

impl NonInjectivityWitness {
    /// Replays the witness: it is not the identity configuration and `τ`
    /// sends it to the identity configuration.
    pub fn verify(&self, ca: &CellularAutomaton) -> bool {
        let Some(group) = ca.finite_group() else { return false };
        let e = group.identity();
        match self {
            NonInjectivityWitness::FiniteSupport(p) => {
                p.0.values().any(|&v| v != e) && crate::deciders::kernel_patch_holds(ca, p)
            }
            NonInjectivityWitness::Periodic(c) => {
                c.values.iter().any(|&v| v != e)
                    && ca.apply_periodic(c).map(|y| y.values.iter().all(|&v| v == e)).unwrap_or(false)
            }
            NonInjectivityWitness::Total(c) => {
                c.iter().any(|&v| v != e) && ca.apply_total(c).map(|y| y.iter().all(|&v| v == e)).unwrap_or(false)
            }
        }
    }
}

/// Block matrix of a linear window map: rows are `(output site, coordinate)`,
/// columns `(input site, coordinate)`. Input sites outside `inputs` carry the
/// identity and contribute nothing.
pub fn window_matrix(
    universe: &GroupUniverse,
    memory: &[GroupElement],
    blocks: &[IntMatrix],
    inputs: &[GroupElement],
    outputs: &[GroupElement],
) -> IntMatrix {
    let w = blocks.first().map_or(0, |b| b.rows());
    let pos: HashMap<&GroupElement, usize> = inputs.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut mat = IntMatrix::zeros(outputs.len() * w, inputs.len() * w);
    for (o, g) in outputs.iter().enumerate() {
        for (m, b) in memory.iter().zip(blocks) {
            if let Some(&p) = pos.get(&universe.mul(g, m)) {
                for r in 0..w {
                    for c in 0..w {
                        let v = &b[(r, c)];
                        if !v.is_zero() {
                            mat[(o * w + r, p * w + c)] += v;
                        }
                    }
                }
            }
        }
    }
    mat
}

/// Sites `{g·m⁻¹ : g ∈ Ω, m ∈ M}`: where an input supported in `Ω` can
/// change the output.
pub fn influence_region(ca: &CellularAutomaton, omega: &[GroupElement]) -> Vec<GroupElement> {
    let u = ca.universe();
    omega
        .iter()
        .flat_map(|g| ca.memory().iter().map(move |m| u.mul(g, &u.inverse(m))))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Sites `{g·m : g ∈ F, m ∈ M}` read when computing the output on `F`.
pub fn dependency_region(ca: &CellularAutomaton, window: &[GroupElement]) -> Vec<GroupElement> {
    let u = ca.universe();
    window
        .iter()
        .flat_map(|g| ca.memory().iter().map(move |m| u.mul(g, m)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// The `1 × 1` block `[x]`.
pub fn scalar_block(x: i64) -> IntMatrix {
    IntMatrix::from_rows(&[vec![BigInt::from(x)]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TorsionProfile;

    fn z() -> GroupUniverse {
        GroupUniverse::integers()
    }

    fn int(n: i64) -> GroupElement {
        GroupUniverse::int(n)
    }

    pub(crate) fn xor() -> CellularAutomaton {
        CellularAutomaton::finite_from_fn(z(), FiniteGroup::cyclic(2).unwrap(), vec![int(0), int(1)], |x| {
            (x[0] + x[1]) % 2
        })
        .unwrap()
    }

    fn times(k: usize, n: u64) -> CellularAutomaton {
        CellularAutomaton::finite_from_fn(z(), FiniteGroup::cyclic(n).unwrap(), vec![int(0)], move |x| {
            (k * x[0]) % n as usize
        })
        .unwrap()
    }

    #[test]
    fn identity_fixes_patches() {
        let id = CellularAutomaton::identity(z(), Alphabet::Finite(FiniteGroup::cyclic(3).unwrap())).unwrap();
        let c = Patch::on_integers(-1, &[2, 0, 1]);
        assert_eq!(id.apply_patch_max(&c).unwrap(), c);
    }

    #[test]
    fn xor_patch() {
        let c = Patch::on_integers(0, &[1, 0, 1, 1]);
        assert_eq!(xor().apply_patch_max(&c).unwrap(), Patch::on_integers(0, &[1, 1, 0]));
    }

    #[test]
    fn doubling_patch() {
        let c = Patch::on_integers(0, &[1, 2, 3]);
        assert_eq!(times(2, 4).apply_patch_max(&c).unwrap(), Patch::on_integers(0, &[2, 0, 2]));
    }

    #[test]
    fn domain_too_small() {
        let c = Patch::on_integers(0, &[1, 0]);
        assert!(matches!(xor().apply_patch(&c, &[int(1)]), Err(Error::DomainTooSmall(_))));
    }

    #[test]
    fn composition_examples() {
        let id = CellularAutomaton::identity(z(), Alphabet::Finite(FiniteGroup::cyclic(2).unwrap())).unwrap();
        assert!(CellularAutomaton::compose(&id, &xor()).unwrap().same_map(&xor()));

        let dd = CellularAutomaton::compose(&times(2, 4), &times(2, 4)).unwrap();
        assert!(dd.is_constant_identity());

        let xx = CellularAutomaton::compose(&xor(), &xor()).unwrap();
        assert_eq!(xx.memory(), &[int(0), int(1), int(2)]);
        let g = xx.finite_group().unwrap().clone();
        // Oracle: c0 + c2 on every assignment.
        for i in 0..8 {
            let x = g.decode(i, 3);
            assert_eq!(xx.finite_rule().unwrap().apply_scalar(&g, &x), (x[0] + x[2]) % 2);
        }
        assert_eq!(xx.normalize().memory(), &[int(0), int(2)]);
    }

    #[test]
    fn composition_rejects_mismatched_alphabets() {
        assert!(matches!(
            CellularAutomaton::compose(&times(1, 3), &times(1, 4)),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let sigma = CellularAutomaton::finite_from_fn(
            z(),
            FiniteGroup::cyclic(3).unwrap(),
            vec![int(-1), int(1)],
            |x| (x[0] + 2 * x[1]) % 3,
        )
        .unwrap();
        let tau = CellularAutomaton::finite_from_fn(
            z(),
            FiniteGroup::cyclic(3).unwrap(),
            vec![int(0), int(1)],
            |x| (2 * x[0] + x[1]) % 3,
        )
        .unwrap();
        let both = CellularAutomaton::compose(&sigma, &tau).unwrap();
        let c = Patch::on_integers(-3, &[0, 1, 2, 2, 1, 0, 1, 1, 2]);
        let direct = both.apply_patch_max(&c).unwrap();
        let stepwise = sigma.apply_patch_max(&tau.apply_patch_max(&c).unwrap()).unwrap();
        assert_eq!(direct, stepwise);
    }

    #[test]
    fn periodic_equivariance() {
        let tau = xor();
        let c = PeriodicConfig::new(vec![5], vec![1, 0, 1, 1, 0]).unwrap();
        for t in -3..4 {
            let lhs = tau.apply_periodic(&c.translate(&[t])).unwrap();
            let rhs = tau.apply_periodic(&c).unwrap().translate(&[t]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn induced_component_automata() {
        assert_eq!(times(2, 4).induced_component_ca(), times(2, 4));

        let e = SymbolicAlphabet::connected(TorsionProfile::Elliptic, 1).unwrap();
        let triv = FiniteHom::identity(&e.components, 1).unwrap();
        let tau = CellularAutomaton::symbolic(z(), e, vec![int(0)], &[scalar_block(2)], triv).unwrap();
        let t0 = tau.induced_component_ca();
        assert_eq!(t0.finite_group().unwrap().order(), 1);
        assert!(t0.is_identity_map());

        let t = SymbolicAlphabet::new(TorsionProfile::Torus, 1, FiniteGroup::cyclic(2).unwrap()).unwrap();
        let id2 = FiniteHom::identity(&t.components, 1).unwrap();
        let tau = CellularAutomaton::symbolic(z(), t, vec![int(0)], &[scalar_block(3)], id2).unwrap();
        let t0 = tau.induced_component_ca();
        assert_eq!(t0.finite_group().unwrap().order(), 2);
        assert!(t0.is_identity_map());
    }

    #[test]
    fn inverse_search() {
        let id = CellularAutomaton::identity(z(), Alphabet::Finite(FiniteGroup::cyclic(2).unwrap())).unwrap();
        match id.find_inverse(2).unwrap() {
            InverseSearch::Found { inverse, radius } => {
                assert_eq!(radius, 0);
                assert!(inverse.is_identity_map());
            }
            other => panic!("{other:?}"),
        }
        match times(3, 4).find_inverse(2).unwrap() {
            InverseSearch::Found { inverse, radius } => {
                assert_eq!(radius, 0);
                assert!(inverse.same_map(&times(3, 4)));
            }
            other => panic!("{other:?}"),
        }
        match xor().find_inverse(3).unwrap() {
            InverseSearch::NoneWithinRadius { witness: Some(w), .. } => assert!(w.verify(&xor())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_inverse_needs_nonzero_radius() {
        let shift = CellularAutomaton::finite_from_fn(z(), FiniteGroup::cyclic(2).unwrap(), vec![int(1)], |x| x[0])
            .unwrap();
        match shift.find_inverse(2).unwrap() {
            InverseSearch::Found { inverse, radius } => {
                assert_eq!(radius, 1);
                assert_eq!(inverse.memory(), &[int(-1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symbolic_composition_multiplies_blocks() {
        let t = SymbolicAlphabet::connected(TorsionProfile::Torus, 1).unwrap();
        let comp = FiniteHom::trivial(&t.components, 2, 1).unwrap();
        let tau = CellularAutomaton::symbolic(z(), t, vec![int(0), int(1)], &[scalar_block(1), scalar_block(1)], comp)
            .unwrap();
        let tt = CellularAutomaton::compose(&tau, &tau).unwrap();
        let blocks = tt.linear_blocks().unwrap();
        let coeffs: Vec<i64> = blocks.iter().map(|b| b.to_i64_rows().unwrap()[0][0]).collect();
        assert_eq!(coeffs, [1, 2, 1]);
    }

    #[test]
    fn memory_validation() {
        let g = FiniteGroup::cyclic(2).unwrap();
        assert!(CellularAutomaton::finite_from_fn(z(), g.clone(), vec![int(0), int(0)], |x| x[0]).is_err());
        assert!(matches!(
            CellularAutomaton::finite_from_fn(z(), g, vec![int(0)], |x| (x[0] + 1) % 2),
            Err(Error::NotHomomorphism)
        ));
    }
}
