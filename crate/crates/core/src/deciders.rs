//! Deciders and semi-deciders for pre-injectivity, surjectivity,
//! post-surjectivity and the weak pre-injectivity notions (•) and (••).
//!
//! For a group cellular automaton everything reduces to kernels and images of
//! restriction homomorphisms `c ↦ τ(c_e)|_{ΩM⁻¹}`, where `c_e` extends a
//! pattern on `Ω` by the identity.

use std::collections::{BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::alphabet::{FiniteGroup, FiniteHom};
use crate::ca::{dependency_region, influence_region, window_matrix, CellularAutomaton, NonInjectivityWitness, Patch, PeriodicConfig};
use crate::error::{Error, Result};
use crate::group::{GroupElement, UniverseKind};
use crate::lattice::{kernel_basis, kernel_invariants, AbelianMap, IntMatrix};
use crate::shift::{ImageAutomaton, Rule1d};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    CertifiedTrue,
    CertifiedFalse,
    UnknownAfterBound,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictStatus::CertifiedTrue => "certified-true",
            VerdictStatus::CertifiedFalse => "certified-false",
            VerdictStatus::UnknownAfterBound => "unknown-after-bound",
        })
    }
}

/// Checkable evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A nontrivial configuration in the kernel.
    Kernel { configuration: NonInjectivityWitness },
    /// Kernel invariants of the restriction homomorphism on `omega`.
    KernelInvariants {
        omega: Vec<GroupElement>,
        kernel_dim: usize,
        #[serde(serialize_with = "crate::serialize_biguint")]
        kernel_components: BigUint,
    },
    /// A pattern that no configuration maps onto.
    Orphan { pattern: Patch },
    /// An orphan of the induced automaton on component groups.
    ComponentOrphan { pattern: Patch },
    /// `τ((A^Ω)_e) = τ(H_e)` for `H = A^Ω \ {e}`, shown by a nontrivial
    /// kernel element supported in `Ω`.
    ProperSubset {
        omega: Vec<GroupElement>,
        h: String,
        kernel_element: Patch,
    },
    /// The connected part of a window map loses dimension.
    DimensionDrop {
        omega: Vec<GroupElement>,
        rank: usize,
        full: usize,
    },
    /// A non-identity component tuple on `omega` killed by the component map.
    RemovableComponent {
        omega: Vec<GroupElement>,
        component_kernel_element: Patch,
    },
    /// Every single-site deviation is corrected inside `E_index`.
    Correction {
        index: usize,
        correction_set: Vec<GroupElement>,
    },
    /// A single-site deviation with no finitely supported correction.
    Deviation {
        symbol: usize,
        correctable: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub status: VerdictStatus,
    pub certificate: Option<String>,
    pub witness: Option<Witness>,
    pub bound: Option<usize>,
}

impl PropertyVerdict {
    pub fn certified_true(certificate: impl Into<String>, witness: Option<Witness>, bound: Option<usize>) -> Self {
        PropertyVerdict {
            status: VerdictStatus::CertifiedTrue,
            certificate: Some(certificate.into()),
            witness,
            bound,
        }
    }

    pub fn certified_false(witness: Witness, bound: Option<usize>) -> Self {
        PropertyVerdict {
            status: VerdictStatus::CertifiedFalse,
            certificate: None,
            witness: Some(witness),
            bound,
        }
    }

    pub fn unknown(bound: usize) -> Self {
        PropertyVerdict {
            status: VerdictStatus::UnknownAfterBound,
            certificate: None,
            witness: None,
            bound: Some(bound),
        }
    }

    pub fn is_true(&self) -> bool {
        self.status == VerdictStatus::CertifiedTrue
    }

    pub fn is_false(&self) -> bool {
        self.status == VerdictStatus::CertifiedFalse
    }
}

/// The restriction homomorphism `A^Ω → A^{ΩM⁻¹}`.
#[derive(Debug, Clone)]
pub struct RestrictionHom {
    pub domain: Vec<GroupElement>,
    pub codomain: Vec<GroupElement>,
    pub map: RestrictionMap,
}

#[derive(Debug, Clone)]
pub enum RestrictionMap {
    /// Finite abelian alphabet: integer matrix over the invariant factors.
    Abelian(AbelianMap),
    /// Other finite alphabets: explicit table.
    Table(FiniteHom),
    /// Symbolic alphabet: banded block matrix on the connected part and the
    /// component map.
    Symbolic { connected: IntMatrix, components: AbelianMap },
}

/// Integer window map of a finite abelian or component automaton.
fn abelian_window(ca: &CellularAutomaton, inputs: &[GroupElement], outputs: &[GroupElement]) -> Result<AbelianMap> {
    let group = ca.finite_group().ok_or(Error::SymbolicEvaluation)?;
    let factors = group
        .factors()
        .ok_or_else(|| Error::InvalidAlphabet("not an abelian factor group".into()))?;
    let blocks = ca.linear_blocks().expect("abelian factor group");
    let matrix = window_matrix(ca.universe(), ca.memory(), &blocks, inputs, outputs);
    let rep = |n: usize| factors.iter().copied().cycle().take(n * factors.len()).collect();
    Ok(AbelianMap::new(matrix, rep(inputs.len()), rep(outputs.len())))
}

/// Explicit table of the window map `A^inputs → A^outputs`.
fn table_window(ca: &CellularAutomaton, inputs: &[GroupElement], outputs: &[GroupElement]) -> Result<FiniteHom> {
    let group = ca.finite_group().ok_or(Error::SymbolicEvaluation)?;
    let e = group.identity();
    let reads = dependency_region(ca, outputs);
    group
        .power_size(outputs.len())
        .ok_or_else(|| Error::TooLarge(format!("{}^{}", group.order(), outputs.len())))?;
    let mut err = None;
    let hom = FiniteHom::from_fn(group, inputs.len(), outputs.len(), |x| {
        let mut c = Patch(reads.iter().map(|g| (g.clone(), e)).collect());
        for (g, &v) in inputs.iter().zip(x) {
            c.0.insert(g.clone(), v);
        }
        match ca.apply_patch(&c, outputs) {
            Ok(p) => p.values(),
            Err(e2) => {
                err = Some(e2);
                vec![e; outputs.len()]
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(hom),
    }
}

/// Window map `A^inputs → A^outputs` in the best available representation.
pub(crate) fn window_map(ca: &CellularAutomaton, inputs: &[GroupElement], outputs: &[GroupElement]) -> Result<RestrictionMap> {
    if let Some(s) = ca.alphabet().as_symbolic() {
        let blocks = ca.linear_blocks().expect("symbolic rules are linear");
        let connected = window_matrix(ca.universe(), ca.memory(), &blocks, inputs, outputs);
        let comp_ca = ca.induced_component_ca();
        let components = abelian_window(&comp_ca, inputs, outputs)?;
        debug_assert_eq!(connected.cols(), s.rank * inputs.len());
        return Ok(RestrictionMap::Symbolic { connected, components });
    }
    let group = ca.finite_group().expect("finite");
    if group.factors().is_some() {
        Ok(RestrictionMap::Abelian(abelian_window(ca, inputs, outputs)?))
    } else {
        Ok(RestrictionMap::Table(table_window(ca, inputs, outputs)?))
    }
}

/// `c ↦ τ(c_e)|_{ΩM⁻¹}` for a pattern `c` on `Ω`.
pub fn restriction_hom(ca: &CellularAutomaton, omega: &[GroupElement]) -> Result<RestrictionHom> {
    for g in omega {
        ca.universe().check(g)?;
    }
    let domain: Vec<GroupElement> = omega.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let codomain = influence_region(ca, &domain);
    let map = window_map(ca, &domain, &codomain)?;
    Ok(RestrictionHom { domain, codomain, map })
}

/// Element indices of a coordinate vector over repeated invariant factors.
fn elements_from_coords(group: &FiniteGroup, v: &[u64]) -> Vec<usize> {
    let nf = group.factors().map_or(0, |f| f.len());
    if nf == 0 {
        return vec![group.identity(); if v.is_empty() { 0 } else { v.len() }];
    }
    v.chunks(nf).map(|c| group.from_coords(c).expect("reduced")).collect()
}

fn patch_on(sites: &[GroupElement], values: &[usize]) -> Patch {
    Patch(sites.iter().cloned().zip(values.iter().copied()).collect())
}

impl RestrictionHom {
    /// A nontrivial kernel element as a pattern on the domain (finite
    /// alphabets and component groups).
    pub fn kernel_element(&self, group: &FiniteGroup) -> Option<Patch> {
        match &self.map {
            RestrictionMap::Abelian(m) => {
                let v = m.kernel_generators().into_iter().next()?;
                Some(patch_on(&self.domain, &self.expand(group, &v)))
            }
            RestrictionMap::Table(t) => {
                let e = group.identity_tuple(self.domain.len());
                let k = t.kernel(group).into_iter().find(|&k| k != e)?;
                Some(patch_on(&self.domain, &group.decode(k, self.domain.len())))
            }
            RestrictionMap::Symbolic { components, .. } => {
                let v = components.kernel_generators().into_iter().next()?;
                Some(patch_on(&self.domain, &self.expand(group, &v)))
            }
        }
    }

    fn expand(&self, group: &FiniteGroup, v: &[u64]) -> Vec<usize> {
        if group.factors().is_some_and(|f| f.is_empty()) {
            return vec![group.identity(); self.domain.len()];
        }
        elements_from_coords(group, v)
    }

    /// Kernel dimension and total kernel component count.
    pub fn kernel_invariants(&self, ca: &CellularAutomaton) -> (usize, BigUint) {
        match (&self.map, ca.alphabet().as_symbolic()) {
            (RestrictionMap::Symbolic { connected, components }, Some(s)) => {
                let inv = kernel_invariants(connected, s.kind);
                (inv.dim, inv.component_order * components.kernel_order())
            }
            (RestrictionMap::Abelian(m), _) => (0, m.kernel_order()),
            (RestrictionMap::Table(t), _) => (0, BigUint::from(t.image_and_kernel_orders().1)),
            _ => unreachable!("representation follows the alphabet"),
        }
    }

    /// Rank of the connected part (symbolic only).
    pub fn connected_rank(&self) -> Option<usize> {
        match &self.map {
            RestrictionMap::Symbolic { connected, .. } => Some(connected.rank()),
            _ => None,
        }
    }
}

/// Balls `B_S(0), ..., B_S(r)`.
pub fn ball_windows(ca: &CellularAutomaton, r: usize) -> Vec<Vec<GroupElement>> {
    (0..=r).map(|i| ca.universe().ball(i).elements().to_vec()).collect()
}

/// `τ` sends the pattern (identity elsewhere) to the identity configuration.
pub fn kernel_patch_holds(ca: &CellularAutomaton, p: &Patch) -> bool {
    let Some(group) = ca.finite_group() else { return false };
    let support: Vec<GroupElement> = p.domain().cloned().collect();
    let region = influence_region(ca, &support);
    let reads = dependency_region(ca, &region);
    let mut c = Patch(reads.into_iter().map(|g| (g, group.identity())).collect());
    for (g, &v) in &p.0 {
        c.0.insert(g.clone(), v);
    }
    ca.apply_patch(&c, &region)
        .map(|y| y.0.values().all(|&v| v == group.identity()))
        .unwrap_or(false)
}

/// Searches for a nontrivial kernel configuration of a finite-alphabet
/// automaton: exact on `Z` and on finite universes, bounded elsewhere.
pub fn non_injectivity_witness(ca: &CellularAutomaton) -> Option<NonInjectivityWitness> {
    let group = ca.finite_group()?;
    if ca.universe().is_integers() {
        let graph = Rule1d::from_ca(ca).ok()?.de_bruijn();
        if let Some(path) = graph.finite_kernel_path() {
            return Some(NonInjectivityWitness::FiniteSupport(Patch::on_integers(0, &path)));
        }
        let cycle = graph.periodic_kernel_cycle()?;
        let period = cycle.len();
        return PeriodicConfig::new(vec![period], cycle)
            .ok()
            .map(NonInjectivityWitness::Periodic);
    }
    if let Some(fin) = ca.universe().as_finite() {
        let all = ca.universe().ball(fin.order()).elements().to_vec();
        let k = restriction_hom(ca, &all).ok()?.kernel_element(group)?;
        let mut total = vec![group.identity(); fin.order()];
        for (g, v) in &k.0 {
            if let GroupElement::Index(i) = g {
                total[*i] = *v;
            }
        }
        return Some(NonInjectivityWitness::Total(total));
    }
    for r in 0..=2 {
        let ball = ca.universe().ball(r).elements().to_vec();
        if let Ok(rh) = restriction_hom(ca, &ball) {
            if let Some(k) = rh.kernel_element(group) {
                return Some(NonInjectivityWitness::FiniteSupport(k));
            }
        }
    }
    if let UniverseKind::Lattice { dim } = ca.universe().kind() {
        for p in 1..=3 {
            if let Some(c) = periodic_kernel_element(ca, *dim, p) {
                return Some(NonInjectivityWitness::Periodic(c));
            }
        }
    }
    None
}

/// A nontrivial `(pZ)^d`-periodic kernel element of a finite abelian
/// automaton on `Z^d`.
fn periodic_kernel_element(ca: &CellularAutomaton, dim: usize, p: usize) -> Option<PeriodicConfig> {
    let group = ca.finite_group()?;
    let factors = group.factors()?;
    let nf = factors.len();
    let blocks = ca.linear_blocks()?;
    let sites = p.checked_pow(dim as u32).filter(|&s| s * nf <= 256)?;
    let index = |v: &[i64]| v.iter().fold(0usize, |acc, &x| acc * p + x.rem_euclid(p as i64) as usize);
    let site = |mut i: usize| {
        let mut v = vec![0i64; dim];
        for c in (0..dim).rev() {
            v[c] = (i % p) as i64;
            i /= p;
        }
        v
    };
    let mut matrix = IntMatrix::zeros(sites * nf, sites * nf);
    for o in 0..sites {
        let g = site(o);
        for (m, b) in ca.memory().iter().zip(&blocks) {
            let GroupElement::Vector(mv) = m else { return None };
            let target: Vec<i64> = g.iter().zip(mv).map(|(a, b)| a + b).collect();
            let t = index(&target);
            for r in 0..nf {
                for c in 0..nf {
                    matrix[(o * nf + r, t * nf + c)] += &b[(r, c)];
                }
            }
        }
    }
    let moduli: Vec<u64> = factors.iter().copied().cycle().take(sites * nf).collect();
    let map = AbelianMap::new(matrix, moduli.clone(), moduli);
    let v = map.kernel_generators().into_iter().next()?;
    PeriodicConfig::new(vec![p; dim], elements_from_coords(group, &v)).ok()
}

/// Pre-injectivity, i.e. triviality of the finitely supported kernel.
pub fn decide_preinjective(ca: &CellularAutomaton, radius_max: usize) -> Result<PropertyVerdict> {
    if let Some(s) = ca.alphabet().as_symbolic() {
        let norm = ca.normalize();
        let windows = if norm.is_pointwise() {
            vec![vec![ca.universe().identity()]]
        } else {
            ball_windows(ca, radius_max)
        };
        for omega in windows {
            let rh = restriction_hom(&norm, &omega)?;
            let (kernel_dim, kernel_components) = rh.kernel_invariants(&norm);
            if kernel_dim > 0 || !kernel_components.is_one() {
                return Ok(PropertyVerdict::certified_false(
                    Witness::KernelInvariants {
                        omega: rh.domain,
                        kernel_dim,
                        kernel_components,
                    },
                    Some(radius_max),
                ));
            }
        }
        if norm.is_pointwise() {
            let _ = s;
            return Ok(PropertyVerdict::certified_true(
                "pointwise rule with injective single-site homomorphism",
                None,
                None,
            ));
        }
        return Ok(PropertyVerdict::unknown(radius_max));
    }

    let group = ca.finite_group().expect("finite");
    if ca.universe().is_integers() {
        let graph = Rule1d::from_ca(ca)?.de_bruijn();
        return Ok(match graph.finite_kernel_path() {
            Some(path) => PropertyVerdict::certified_false(
                Witness::Kernel {
                    configuration: NonInjectivityWitness::FiniteSupport(Patch::on_integers(0, &path)),
                },
                None,
            ),
            None => PropertyVerdict::certified_true("de Bruijn kernel graph has no identity-asymptotic loop", None, None),
        });
    }
    if let Some(fin) = ca.universe().as_finite() {
        let all = ca.universe().ball(fin.order()).elements().to_vec();
        let rh = restriction_hom(ca, &all)?;
        return Ok(match rh.kernel_element(group) {
            Some(k) => PropertyVerdict::certified_false(
                Witness::Kernel {
                    configuration: NonInjectivityWitness::FiniteSupport(k),
                },
                None,
            ),
            None => PropertyVerdict::certified_true("injective on the whole finite universe", None, None),
        });
    }
    let norm = ca.normalize();
    for omega in ball_windows(ca, radius_max) {
        let rh = restriction_hom(&norm, &omega)?;
        if let Some(k) = rh.kernel_element(group) {
            return Ok(PropertyVerdict::certified_false(
                Witness::Kernel {
                    configuration: NonInjectivityWitness::FiniteSupport(k),
                },
                Some(radius_max),
            ));
        }
    }
    if norm.is_pointwise() {
        return Ok(PropertyVerdict::certified_true(
            "pointwise rule with injective single-site homomorphism",
            None,
            None,
        ));
    }
    Ok(PropertyVerdict::unknown(radius_max))
}

/// Image check on the window map `A^{FM} → A^F`; returns an orphan pattern
/// on `F` if one exists.
fn window_orphan(ca: &CellularAutomaton, window: &[GroupElement]) -> Result<Option<Patch>> {
    let group = ca.finite_group().ok_or(Error::SymbolicEvaluation)?;
    let inputs = dependency_region(ca, window);
    match window_map(ca, &inputs, window)? {
        RestrictionMap::Abelian(m) => Ok(m
            .missing_basis_vector()
            .map(|v| patch_on(window, &elements_from_coords(group, &v)))),
        RestrictionMap::Table(t) => {
            let image: HashSet<usize> = t.table.iter().copied().collect();
            Ok((0..group.power_size(window.len()).expect("table exists"))
                .find(|y| !image.contains(y))
                .map(|y| patch_on(window, &group.decode(y, window.len()))))
        }
        RestrictionMap::Symbolic { .. } => unreachable!("finite alphabet"),
    }
}

/// Surjectivity of the global map.
pub fn decide_surjective(ca: &CellularAutomaton, bound: usize) -> Result<PropertyVerdict> {
    if let Some(s) = ca.alphabet().as_symbolic() {
        let norm = ca.normalize();
        let comp = norm.induced_component_ca();
        let comp_verdict = decide_surjective(&comp, bound)?;
        if comp_verdict.is_false() {
            if let Some(Witness::Orphan { pattern }) = comp_verdict.witness {
                return Ok(PropertyVerdict::certified_false(
                    Witness::ComponentOrphan { pattern },
                    Some(bound),
                ));
            }
        }
        for window in ball_windows(ca, bound) {
            let inputs = dependency_region(&norm, &window);
            let blocks = norm.linear_blocks().expect("symbolic rules are linear");
            let mat = window_matrix(norm.universe(), norm.memory(), &blocks, &inputs, &window);
            let rank = mat.rank();
            if rank < s.rank * window.len() {
                return Ok(PropertyVerdict::certified_false(
                    Witness::DimensionDrop {
                        full: s.rank * window.len(),
                        omega: window,
                        rank,
                    },
                    Some(bound),
                ));
            }
            if norm.is_pointwise() && comp_verdict.is_true() {
                return Ok(PropertyVerdict::certified_true(
                    "pointwise rule with surjective single-site homomorphism",
                    None,
                    None,
                ));
            }
        }
        if comp_verdict.is_true() && ca.universe().is_amenable() && decide_preinjective(ca, bound)?.is_true() {
            return Ok(PropertyVerdict::certified_true("pre-injective on an amenable universe", None, Some(bound)));
        }
        return Ok(PropertyVerdict::unknown(bound));
    }

    let group = ca.finite_group().expect("finite");
    if ca.universe().is_integers() {
        let automaton = ImageAutomaton::from_ca(ca)?;
        return Ok(match automaton.orphan() {
            Some(word) => PropertyVerdict::certified_false(
                Witness::Orphan {
                    pattern: Patch::on_integers(0, &word),
                },
                None,
            ),
            None => PropertyVerdict::certified_true("image automaton is universal", None, None),
        });
    }
    if let Some(fin) = ca.universe().as_finite() {
        let all = ca.universe().ball(fin.order()).elements().to_vec();
        return Ok(match window_orphan(ca, &all)? {
            Some(p) => PropertyVerdict::certified_false(Witness::Orphan { pattern: p }, None),
            None => PropertyVerdict::certified_true("bijective on the whole finite universe", None, None),
        });
    }
    for window in ball_windows(ca, bound) {
        match window_orphan(ca, &window) {
            Ok(Some(p)) => return Ok(PropertyVerdict::certified_false(Witness::Orphan { pattern: p }, Some(bound))),
            Ok(None) => {}
            Err(Error::TooLarge(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let _ = group;
    if ca.universe().is_amenable() && decide_preinjective(ca, bound)?.is_true() {
        return Ok(PropertyVerdict::certified_true("pre-injective on an amenable universe", None, Some(bound)));
    }
    Ok(PropertyVerdict::unknown(bound))
}

/// One step of the single-site correction chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    pub n: usize,
    pub ball_size: usize,
    /// `Z_n` (finite alphabets) or its component image (symbolic).
    pub subgroup: Vec<usize>,
    /// `T_n = A \ Z_n` for finite alphabets.
    pub deviations: Vec<usize>,
    /// Dimension of the connected part of `Z_n` (symbolic only).
    pub dim: usize,
    pub full: bool,
}

/// `Z_n = τ(V_n)_{1_G}` for `n = 0, 1, ...` where `V_n` collects the patterns
/// on `E_n = B_S(n)` whose identity extension has image trivial off `1_G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostSurjChain {
    pub entries: Vec<ChainEntry>,
}

impl PostSurjChain {
    pub fn first_full(&self) -> Option<&ChainEntry> {
        self.entries.iter().find(|e| e.full)
    }

    /// `Z_n ⊆ Z_{n+1}` throughout.
    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| {
            let next: HashSet<usize> = w[1].subgroup.iter().copied().collect();
            w[0].subgroup.iter().all(|x| next.contains(x)) && w[0].dim <= w[1].dim
        })
    }
}

/// `Z_n` on `Z` by dynamic programming over de Bruijn states.
pub fn single_site_chain_1d(rule: &Rule1d, n: usize) -> BTreeSet<usize> {
    let g = &rule.group;
    let q = g.order();
    let e = g.identity();
    let w = rule.width as i64;
    let n = n as i64;
    let lo = (-n).min(rule.offset) - w - 1;
    let hi = n.max(rule.offset + w) + w + 1;
    let vcount = q.pow(rule.width as u32 - 1);
    // state: vertex · (q + 1) + (z + 1), z = −1 meaning not yet read
    let mut current: BTreeSet<(usize, usize)> = BTreeSet::from([(g.identity_tuple(rule.width - 1), q)]);
    for p in lo..=hi {
        let symbols: Vec<usize> = if p.abs() <= n { (0..q).collect() } else { vec![e] };
        let j = p - w + 1 - rule.offset;
        let mut next = BTreeSet::new();
        for &(v, z) in &current {
            for &a in &symbols {
                let label = rule.table[v * q + a];
                let t = (v * q + a) % vcount;
                if j == 0 {
                    next.insert((t, label));
                } else if label == e {
                    next.insert((t, z));
                }
            }
        }
        current = next;
    }
    current.into_iter().filter(|&(_, z)| z < q).map(|(_, z)| z).collect()
}

fn chain_entry_finite(ca: &CellularAutomaton, n: usize) -> Result<ChainEntry> {
    let group = ca.finite_group().expect("finite");
    let ball = ca.universe().ball(n);
    let z: BTreeSet<usize> = if ca.universe().is_integers() {
        single_site_chain_1d(&Rule1d::from_ca(ca)?, n)
    } else {
        let id = ca.universe().identity();
        let rh = restriction_hom(ca, ball.elements())?;
        let Some(centre) = rh.codomain.iter().position(|g| *g == id) else {
            return Ok(finish_entry(group, n, ball.len(), BTreeSet::from([group.identity()]), 0, true));
        };
        match &rh.map {
            RestrictionMap::Abelian(m) => {
                let nf = group.factors().expect("abelian").len();
                let others: Vec<usize> = (0..rh.codomain.len() * nf).filter(|r| r / nf.max(1) != centre).collect();
                let centre_rows: Vec<usize> = (centre * nf..(centre + 1) * nf).collect();
                let k = AbelianMap::new(
                    m.matrix.select_rows(&others),
                    m.domain_moduli.clone(),
                    others.iter().map(|&r| m.codomain_moduli[r]).collect(),
                );
                let p0 = AbelianMap::new(
                    m.matrix.select_rows(&centre_rows),
                    m.domain_moduli.clone(),
                    centre_rows.iter().map(|&r| m.codomain_moduli[r]).collect(),
                );
                let gens: Vec<usize> = k
                    .kernel_generators()
                    .iter()
                    .map(|v| group.from_coords(&p0.apply(v)).expect("reduced"))
                    .collect();
                group.generated_subgroup(&gens).into_iter().collect()
            }
            RestrictionMap::Table(t) => {
                let len = rh.codomain.len();
                (0..t.table.len())
                    .filter_map(|x| {
                        let y = group.decode(t.table[x], len);
                        y.iter()
                            .enumerate()
                            .all(|(i, &v)| i == centre || v == group.identity())
                            .then_some(y[centre])
                    })
                    .collect()
            }
            RestrictionMap::Symbolic { .. } => unreachable!("finite alphabet"),
        }
    };
    let full = z.len() == group.order();
    Ok(finish_entry(group, n, ball.len(), z, 0, full))
}

fn finish_entry(group: &FiniteGroup, n: usize, ball_size: usize, z: BTreeSet<usize>, dim: usize, full: bool) -> ChainEntry {
    ChainEntry {
        n,
        ball_size,
        deviations: (0..group.order()).filter(|a| !z.contains(a)).collect(),
        subgroup: z.into_iter().collect(),
        dim,
        full,
    }
}

fn chain_entry_symbolic(ca: &CellularAutomaton, n: usize) -> Result<ChainEntry> {
    let s = ca.alphabet().as_symbolic().expect("symbolic");
    let g = s.rank;
    let ball = ca.universe().ball(n);
    let id = ca.universe().identity();
    let rh = restriction_hom(ca, ball.elements())?;
    let RestrictionMap::Symbolic { connected, components } = &rh.map else {
        unreachable!("symbolic alphabet")
    };
    let Some(centre) = rh.codomain.iter().position(|x| *x == id) else {
        let pi = &s.components;
        return Ok(finish_entry(pi, n, ball.len(), BTreeSet::from([pi.identity()]), 0, false));
    };
    let others: Vec<usize> = (0..rh.codomain.len() * g).filter(|r| r / g != centre).collect();
    let centre_rows: Vec<usize> = (centre * g..(centre + 1) * g).collect();
    let basis = kernel_basis(&connected.select_rows(&others));
    let dim = connected.select_rows(&centre_rows).mul(&basis).rank();

    let pi = &s.components;
    let z: BTreeSet<usize> = match pi.factors() {
        Some(f) if !f.is_empty() => {
            let nf = f.len();
            let others: Vec<usize> = (0..rh.codomain.len() * nf).filter(|r| r / nf != centre).collect();
            let centre_rows: Vec<usize> = (centre * nf..(centre + 1) * nf).collect();
            let k = AbelianMap::new(
                components.matrix.select_rows(&others),
                components.domain_moduli.clone(),
                others.iter().map(|&r| components.codomain_moduli[r]).collect(),
            );
            let p0 = AbelianMap::new(
                components.matrix.select_rows(&centre_rows),
                components.domain_moduli.clone(),
                centre_rows.iter().map(|&r| components.codomain_moduli[r]).collect(),
            );
            let gens: Vec<usize> = k
                .kernel_generators()
                .iter()
                .map(|v| pi.from_coords(&p0.apply(v)).expect("reduced"))
                .collect();
            pi.generated_subgroup(&gens).into_iter().collect()
        }
        _ => BTreeSet::from([pi.identity()]),
    };
    let full = dim == g && z.len() == pi.order();
    Ok(finish_entry(pi, n, ball.len(), z, dim, full))
}

pub fn chain_entry(ca: &CellularAutomaton, n: usize) -> Result<ChainEntry> {
    if ca.alphabet().as_symbolic().is_some() {
        chain_entry_symbolic(ca, n)
    } else {
        chain_entry_finite(ca, n)
    }
}

/// Post-surjectivity through the single-site correction chain.
///
/// Certified true once some `Z_N` is the whole alphabet. Certified false on
/// `Z` with a finite alphabet when a symbol has no finitely supported
/// correction at all, and on finite universes once `E_n` is the whole group.
pub fn certify_post_surjective(ca: &CellularAutomaton, n_max: usize) -> Result<(PropertyVerdict, PostSurjChain)> {
    let mut chain = PostSurjChain { entries: Vec::new() };
    let correction = |n: usize| Witness::Correction {
        index: n,
        correction_set: ca.universe().ball(n).elements().to_vec(),
    };
    for n in 0..=n_max {
        let entry = chain_entry(ca, n)?;
        let full = entry.full;
        chain.entries.push(entry);
        if full {
            return Ok((
                PropertyVerdict::certified_true("single-site corrections", Some(correction(n)), Some(n_max)),
                chain,
            ));
        }
    }
    if ca.finite_group().is_some() && ca.universe().is_integers() {
        let graph = Rule1d::from_ca(ca)?.de_bruijn();
        let reachable = graph.single_site_image();
        let q = ca.finite_group().expect("finite").order();
        if let Some(symbol) = (0..q).find(|a| !reachable.contains(a)) {
            return Ok((
                PropertyVerdict::certified_false(
                    Witness::Deviation {
                        symbol,
                        correctable: reachable.into_iter().collect(),
                    },
                    Some(n_max),
                ),
                chain,
            ));
        }
        // Every symbol is correctable, so the chain reaches the alphabet; a
        // correction path needs at most two traversals of the graph.
        let limit = n_max + 2 * graph.vertex_count + graph.width + 2;
        for n in n_max + 1..=limit {
            let entry = chain_entry(ca, n)?;
            let full = entry.full;
            chain.entries.push(entry);
            if full {
                return Ok((
                    PropertyVerdict::certified_true("single-site corrections", Some(correction(n)), Some(n)),
                    chain,
                ));
            }
        }
        return Err(Error::InvalidArgument("correction chain failed to reach the alphabet".into()));
    }
    if let (Some(fin), Some(group)) = (ca.universe().as_finite(), ca.finite_group()) {
        let last = chain.entries.last().expect("n_max ≥ 0");
        if last.ball_size == fin.order() {
            let symbol = last.deviations[0];
            let correctable = last.subgroup.clone();
            let _ = group;
            return Ok((
                PropertyVerdict::certified_false(Witness::Deviation { symbol, correctable }, Some(n_max)),
                chain,
            ));
        }
    }
    Ok((PropertyVerdict::unknown(n_max), chain))
}

/// (•)-pre-injectivity over the windows `omegas`.
pub fn star_preinjective(ca: &CellularAutomaton, omegas: &[Vec<GroupElement>]) -> Result<PropertyVerdict> {
    let bound = omegas.len().saturating_sub(1);
    if let Some(s) = ca.alphabet().as_symbolic() {
        let pi = &s.components;
        for omega in omegas {
            let rh = restriction_hom(ca, omega)?;
            let rank = rh.connected_rank().expect("symbolic");
            let full = s.rank * rh.domain.len();
            if rank < full {
                return Ok(PropertyVerdict::certified_false(
                    Witness::DimensionDrop {
                        omega: rh.domain,
                        rank,
                        full,
                    },
                    Some(bound),
                ));
            }
            if let Some(k) = rh.kernel_element(pi) {
                return Ok(PropertyVerdict::certified_false(
                    Witness::RemovableComponent {
                        omega: rh.domain.clone(),
                        component_kernel_element: k,
                    },
                    Some(bound),
                ));
            }
        }
        let norm = ca.normalize();
        if norm.is_pointwise() {
            let rh = restriction_hom(&norm, &[ca.universe().identity()])?;
            if rh.connected_rank() == Some(s.rank) && rh.kernel_element(pi).is_none() {
                return Ok(PropertyVerdict::certified_true(
                    "pointwise rule: full-rank connected part and injective component map",
                    None,
                    None,
                ));
            }
        }
        if decide_preinjective(ca, bound)?.is_true() {
            return Ok(PropertyVerdict::certified_true("pre-injective", None, None));
        }
        return Ok(PropertyVerdict::unknown(bound));
    }

    let group = ca.finite_group().expect("finite");
    let proper = |omega: Vec<GroupElement>, k: Patch| Witness::ProperSubset {
        omega,
        h: "A^Ω \\ {e}".into(),
        kernel_element: k,
    };
    for omega in omegas {
        let rh = restriction_hom(ca, omega)?;
        if let Some(k) = rh.kernel_element(group) {
            return Ok(PropertyVerdict::certified_false(proper(rh.domain, k), Some(bound)));
        }
    }
    let exact = ca.universe().is_integers() || ca.universe().as_finite().is_some();
    let pre = decide_preinjective(ca, bound)?;
    if pre.is_true() {
        return Ok(PropertyVerdict::certified_true("pre-injective", None, None));
    }
    if exact && pre.is_false() {
        if let Some(Witness::Kernel {
            configuration: NonInjectivityWitness::FiniteSupport(k),
        }) = pre.witness
        {
            let omega: Vec<GroupElement> = k.domain().cloned().collect();
            return Ok(PropertyVerdict::certified_false(proper(omega, k), None));
        }
    }
    Ok(PropertyVerdict::unknown(bound))
}

/// `det(Σ_j B_j t^{m_j − min})` vanishes identically (symbolic rules on `Z`).
fn laurent_determinant_vanishes(ca: &CellularAutomaton, g: usize) -> bool {
    let blocks = ca.linear_blocks().expect("symbolic rules are linear");
    let offsets: Vec<i64> = ca
        .memory()
        .iter()
        .map(|m| match m {
            GroupElement::Vector(v) => v[0],
            _ => 0,
        })
        .collect();
    let lo = *offsets.iter().min().expect("nonempty");
    let span = (offsets.iter().max().expect("nonempty") - lo) as usize;
    let degree = g * span;
    (1..=degree as i64 + 1).all(|t| {
        let mut p = IntMatrix::zeros(g, g);
        for (b, &o) in blocks.iter().zip(&offsets) {
            let w = BigInt::from(t).pow((o - lo) as u32);
            for r in 0..g {
                for c in 0..g {
                    p[(r, c)] += &b[(r, c)] * &w;
                }
            }
        }
        p.det().is_zero()
    })
}

/// (••)-pre-injectivity over the windows `omegas`.
pub fn starstar_preinjective(ca: &CellularAutomaton, omegas: &[Vec<GroupElement>]) -> Result<PropertyVerdict> {
    let bound = omegas.len().saturating_sub(1);
    let Some(s) = ca.alphabet().as_symbolic() else {
        return Ok(PropertyVerdict::certified_true(
            "finite alphabet: all window dimensions are 0",
            None,
            None,
        ));
    };
    for omega in omegas {
        let rh = restriction_hom(ca, omega)?;
        let rank = rh.connected_rank().expect("symbolic");
        let full = s.rank * rh.domain.len();
        if rank < full {
            return Ok(PropertyVerdict::certified_false(
                Witness::DimensionDrop {
                    omega: rh.domain,
                    rank,
                    full,
                },
                Some(bound),
            ));
        }
    }
    let norm = ca.normalize();
    if norm.is_pointwise() {
        let rh = restriction_hom(&norm, &[ca.universe().identity()])?;
        if rh.connected_rank() == Some(s.rank) {
            return Ok(PropertyVerdict::certified_true("pointwise full-rank rule", None, None));
        }
    }
    if ca.universe().is_integers() {
        if !laurent_determinant_vanishes(&norm, s.rank) {
            return Ok(PropertyVerdict::certified_true("Laurent determinant is nonzero", None, None));
        }
        for len in 1..=64i64 {
            let omega: Vec<GroupElement> = (0..len).map(crate::group::GroupUniverse::int).collect();
            let rh = restriction_hom(ca, &omega)?;
            let rank = rh.connected_rank().expect("symbolic");
            if rank < s.rank * omega.len() {
                return Ok(PropertyVerdict::certified_false(
                    Witness::DimensionDrop {
                        omega,
                        rank,
                        full: s.rank * len as usize,
                    },
                    Some(bound),
                ));
            }
        }
    }
    Ok(PropertyVerdict::unknown(bound))
}

/// Replays a witness against the automaton it was produced for.
pub fn verify_witness(ca: &CellularAutomaton, witness: &Witness) -> bool {
    match witness {
        Witness::Kernel { configuration } => configuration.verify(ca),
        Witness::KernelInvariants {
            omega,
            kernel_dim,
            kernel_components,
        } => restriction_hom(ca, omega)
            .map(|rh| rh.kernel_invariants(ca) == (*kernel_dim, kernel_components.clone()))
            .unwrap_or(false),
        Witness::Orphan { pattern } => orphan_holds(ca, pattern),
        Witness::ComponentOrphan { pattern } => orphan_holds(&ca.induced_component_ca(), pattern),
        Witness::ProperSubset { omega, kernel_element, .. } => {
            let Some(group) = ca.finite_group() else { return false };
            let e = group.identity();
            kernel_element.domain().all(|g| omega.contains(g))
                && kernel_element.0.values().any(|&v| v != e)
                && kernel_patch_holds(ca, kernel_element)
        }
        Witness::DimensionDrop { omega, rank, full } => {
            let Some(s) = ca.alphabet().as_symbolic() else { return false };
            // Either the restriction or the dependency window map of `omega`.
            let restriction = restriction_hom(ca, omega).ok().and_then(|rh| rh.connected_rank());
            let blocks = ca.linear_blocks().expect("symbolic");
            let inputs = dependency_region(ca, omega);
            let dependency = window_matrix(ca.universe(), ca.memory(), &blocks, &inputs, omega).rank();
            *full == s.rank * omega.len() && rank < full && (restriction == Some(*rank) || dependency == *rank)
        }
        Witness::RemovableComponent {
            omega,
            component_kernel_element,
        } => {
            let comp = ca.induced_component_ca();
            let e = comp.finite_group().expect("finite").identity();
            component_kernel_element.domain().all(|g| omega.contains(g))
                && component_kernel_element.0.values().any(|&v| v != e)
                && kernel_patch_holds(&comp, component_kernel_element)
        }
        Witness::Correction { index, .. } => chain_entry(ca, *index).map(|e| e.full).unwrap_or(false),
        Witness::Deviation { symbol, .. } => {
            if let Some(fin) = ca.universe().as_finite() {
                return chain_entry(ca, fin.order())
                    .map(|e| e.deviations.contains(symbol))
                    .unwrap_or(false);
            }
            Rule1d::from_ca(ca)
                .map(|r| !r.de_bruijn().single_site_image().contains(symbol))
                .unwrap_or(false)
        }
    }
}

/// No configuration maps onto `pattern`.
fn orphan_holds(ca: &CellularAutomaton, pattern: &Patch) -> bool {
    let Some(group) = ca.finite_group() else { return false };
    if ca.universe().is_integers() {
        let word = pattern.values();
        let contiguous = pattern
            .domain()
            .zip(pattern.domain().skip(1))
            .all(|(a, b)| match (a, b) {
                (GroupElement::Vector(x), GroupElement::Vector(y)) => y[0] == x[0] + 1,
                _ => false,
            });
        if contiguous {
            return ImageAutomaton::from_ca(ca).map(|a| !a.accepts(&word)).unwrap_or(false);
        }
    }
    let window: Vec<GroupElement> = pattern.domain().cloned().collect();
    let inputs = dependency_region(ca, &window);
    match window_map(ca, &inputs, &window) {
        Ok(RestrictionMap::Abelian(m)) => {
            let coords: Vec<u64> = pattern
                .values()
                .into_iter()
                .flat_map(|v| group.coords(v).expect("abelian"))
                .collect();
            !m.image_contains(&coords)
        }
        Ok(RestrictionMap::Table(t)) => {
            let target = group.encode(&pattern.values());
            !t.table.contains(&target)
        }
        _ => false,
    }
}
