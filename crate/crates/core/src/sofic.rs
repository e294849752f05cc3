//! Finite labeled graphs as sofic approximations: `V(r)` with its ball
//! isomorphisms, packings, the pulled-back rule `Φ`, the counting audit of the
//! dual surjunctivity argument, and greedy tilings.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::alphabet::FiniteHom;
use crate::ca::CellularAutomaton;
use crate::deciders::RestrictionMap;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupUniverse};
use crate::lattice::{AbelianMap, IntMatrix};

/// A finite graph with edges `(v, s, w)` labelled by generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertex_count: usize,
    label_count: usize,
    edges: Vec<(usize, usize, usize)>,
}

impl LabeledGraph {
    pub fn new(vertex_count: usize, label_count: usize, edges: Vec<(usize, usize, usize)>) -> Result<Self> {
        for &(v, s, w) in &edges {
            if v >= vertex_count || w >= vertex_count || s >= label_count {
                return Err(Error::InvalidArgument(format!("edge ({v}, {s}, {w}) out of range")));
            }
        }
        let edges: Vec<_> = edges.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(LabeledGraph {
            vertex_count,
            label_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// Successor table `v·labels + s → w`, failing at the first vertex and
    /// label with two outgoing edges.
    pub fn successors(&self) -> Result<Vec<Option<usize>>> {
        let mut succ = vec![None; self.vertex_count * self.label_count];
        for &(v, s, w) in &self.edges {
            let slot = &mut succ[v * self.label_count + s];
            if slot.is_some() {
                return Err(Error::NondeterministicGraph { vertex: v, label: s });
            }
            *slot = Some(w);
        }
        Ok(succ)
    }

    pub fn is_deterministic(&self) -> bool {
        self.successors().is_ok()
    }

    /// Undirected neighbour lists.
    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(v, _, w) in &self.edges {
            adj[v].push(w);
            adj[w].push(v);
        }
        adj
    }

    /// `B_G(v, r)` in the path metric.
    pub fn ball(&self, v: usize, r: usize) -> BTreeSet<usize> {
        ball_with(&self.neighbours(), v, r)
    }

    /// `(Z/n)^d` with labels `e_1, -e_1, e_2, -e_2, ...` in the order used by
    /// [`GroupUniverse::lattice`]; vertices are in lexicographic order.
    pub fn torus(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument("torus needs n, d ≥ 1".into()));
        }
        let count = n
            .checked_pow(d as u32)
            .filter(|&c| c <= 1 << 20)
            .ok_or_else(|| Error::TooLarge(format!("{n}^{d}")))?;
        let stride = |axis: usize| n.pow((d - 1 - axis) as u32);
        let mut edges = Vec::with_capacity(count * 2 * d);
        for v in 0..count {
            for axis in 0..d {
                let coord = v / stride(axis) % n;
                let up = v - coord * stride(axis) + (coord + 1) % n * stride(axis);
                let down = v - coord * stride(axis) + (coord + n - 1) % n * stride(axis);
                edges.push((v, 2 * axis, up));
                edges.push((v, 2 * axis + 1, down));
            }
        }
        LabeledGraph::new(count, 2 * d, edges)
    }

    /// The cycle `C_n` labelled as an approximation of `Z`.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::torus(n, 1)
    }

    /// Parses the line format: a header `graph <vertices> <labels>` followed
    /// by one edge `v s w` per line. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "graph" {
            return Err(parse_err(hline, format!("expected `graph <V> <S>`, found `{header}`")));
        }
        let num = |line: usize, s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line, format!("`{s}` is not a nonnegative integer")))
        };
        let vertices = num(hline, fields[1])?;
        let labels = num(hline, fields[2])?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(parse_err(line, format!("expected `v s w`, found `{l}`")));
            }
            let (v, s, w) = (num(line, f[0])?, num(line, f[1])?, num(line, f[2])?);
            if v >= vertices || w >= vertices || s >= labels {
                return Err(parse_err(line, format!("edge `{l}` out of range")));
            }
            edges.push((v, s, w));
        }
        LabeledGraph::new(vertices, labels, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("graph {} {}\n", self.vertex_count, self.label_count);
        for (v, s, w) in &self.edges {
            out.push_str(&format!("{v} {s} {w}\n"));
        }
        out
    }
}

fn ball_with(adj: &[Vec<usize>], v: usize, r: usize) -> BTreeSet<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    let mut out = BTreeSet::from([v]);
    while let Some(x) = queue.pop_front() {
        if dist[x] == r {
            continue;
        }
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                out.insert(y);
                queue.push_back(y);
            }
        }
    }
    out
}

/// `V(r)` together with the isomorphisms `ψ_{v,r}: B_S(r) → B_G(v, r)`,
/// stored as vertex images of the ball elements in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoficWitness {
    pub radius: usize,
    pub vertex_count: usize,
    pub vertices: Vec<usize>,
    #[serde(skip)]
    pub isomorphisms: Vec<Vec<usize>>,
}

impl SoficWitness {
    pub fn isomorphism(&self, v: usize) -> Option<&[usize]> {
        self.vertices.binary_search(&v).ok().map(|i| self.isomorphisms[i].as_slice())
    }

    /// `|V(r)| ≥ (1 − ε)|V|`.
    pub fn satisfies(&self, epsilon: &BigRational) -> bool {
        let lhs = BigRational::from_integer(BigInt::from(self.vertices.len()));
        let rhs = (BigRational::one() - epsilon) * BigRational::from_integer(BigInt::from(self.vertex_count));
        lhs >= rhs
    }
}

/// Vertices whose `r`-ball is label-isomorphic to the Cayley ball, found by
/// walking the labels from `v` along a spanning tree of `B_S(r)`.
pub fn compute_vr(graph: &LabeledGraph, universe: &GroupUniverse, r: usize) -> Result<SoficWitness> {
    if graph.label_count() != universe.generators().len() {
        return Err(Error::InvalidArgument(format!(
            "graph has {} labels, universe has {} generators",
            graph.label_count(),
            universe.generators().len()
        )));
    }
    let succ = graph.successors()?;
    let labels = graph.label_count();
    let adj = graph.neighbours();
    let mut pred: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph.vertex_count()];
    for &(x, s, w) in graph.edges() {
        pred[w].push((x, s));
    }
    let ball = universe.ball(r);
    let tree = ball.spanning_tree(universe);
    let order = ball.bfs_order();
    let root = ball.position(&universe.identity()).expect("ball contains 1_G");
    // neighbour[i][s]: position of g_i·s in the ball
    let neighbour: Vec<Vec<Option<usize>>> = ball
        .elements()
        .iter()
        .map(|g| universe.generators().iter().map(|s| ball.position(&universe.mul(g, s))).collect())
        .collect();

    let mut vertices = Vec::new();
    let mut isomorphisms = Vec::new();
    'vertex: for v in 0..graph.vertex_count() {
        let mut psi = vec![usize::MAX; ball.len()];
        psi[root] = v;
        for &i in &order {
            if let Some((p, s)) = tree[i] {
                match succ[psi[p] * labels + s] {
                    Some(w) => psi[i] = w,
                    None => continue 'vertex,
                }
            }
        }
        let image: HashMap<usize, usize> = psi.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        if image.len() != psi.len() || image.len() != ball_with(&adj, v, r).len() {
            continue;
        }
        // The ball subgraph consists of the edges on walks of length ≤ r from
        // the centre: every edge at a vertex of distance < r.
        for i in (0..ball.len()).filter(|&i| ball.distance(i) < r) {
            for s in 0..labels {
                let j = neighbour[i][s].expect("interior neighbours stay in the ball");
                if succ[psi[i] * labels + s] != Some(psi[j]) {
                    continue 'vertex;
                }
            }
            if pred[psi[i]].len() != labels {
                continue 'vertex;
            }
            for &(x, s) in &pred[psi[i]] {
                match image.get(&x) {
                    Some(&j) if neighbour[j][s] == Some(i) => {}
                    _ => continue 'vertex,
                }
            }
        }
        vertices.push(v);
        isomorphisms.push(psi);
    }
    Ok(SoficWitness {
        radius: r,
        vertex_count: graph.vertex_count(),
        vertices,
        isomorphisms,
    })
}

/// Greedy packing inside `V(3r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub radius: usize,
    pub centres: Vec<usize>,
    pub disjoint: bool,
    pub covering: bool,
}

/// Greedy maximal `V′ ⊆ V(3r)` in vertex order with pairwise disjoint
/// `B(v, r)`; both packing properties are re-checked on the result.
pub fn packing_subset(graph: &LabeledGraph, v3r: &[usize], r: usize) -> Packing {
    let adj = graph.neighbours();
    let mut used = HashSet::new();
    let mut centres = Vec::new();
    let mut sorted = v3r.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        let b = ball_with(&adj, v, r);
        if b.iter().all(|x| !used.contains(x)) {
            used.extend(b);
            centres.push(v);
        }
    }
    let balls: Vec<BTreeSet<usize>> = centres.iter().map(|&v| ball_with(&adj, v, r)).collect();
    let total: usize = balls.iter().map(BTreeSet::len).sum();
    let union: HashSet<usize> = balls.iter().flatten().copied().collect();
    let disjoint = total == union.len();
    let cover: HashSet<usize> = centres.iter().flat_map(|&v| ball_with(&adj, v, 2 * r)).collect();
    let covering = v3r.iter().all(|v| cover.contains(v));
    Packing {
        radius: r,
        centres,
        disjoint,
        covering,
    }
}

/// `Φ: A^V → A^{V(3r)}`, `Φ(x)(v) = f(ψ_{v,r}(x|_{B(v,r)}))`.
#[derive(Debug, Clone)]
pub struct Phi {
    pub vertices: Vec<usize>,
    pub domain_size: usize,
    /// For each output vertex, the vertices read for the memory elements.
    pub reads: Vec<Vec<usize>>,
    pub map: RestrictionMap,
}

fn linear_phi(blocks: &[IntMatrix], reads: &[Vec<usize>], domain: usize, w: usize) -> IntMatrix {
    let mut mat = IntMatrix::zeros(reads.len() * w, domain * w);
    for (o, row) in reads.iter().enumerate() {
        for (b, &x) in blocks.iter().zip(row) {
            for r in 0..w {
                for c in 0..w {
                    mat[(o * w + r, x * w + c)] += &b[(r, c)];
                }
            }
        }
    }
    mat
}

fn abelian_phi(ca: &CellularAutomaton, reads: &[Vec<usize>], domain: usize) -> Result<AbelianMap> {
    let group = ca.finite_group().ok_or(Error::SymbolicEvaluation)?;
    let factors = group
        .factors()
        .ok_or_else(|| Error::InvalidAlphabet("not an abelian factor group".into()))?;
    let blocks = ca.linear_blocks().expect("abelian");
    let mat = linear_phi(&blocks, reads, domain, factors.len());
    let rep = |n: usize| factors.iter().copied().cycle().take(n * factors.len()).collect();
    Ok(AbelianMap::new(mat, rep(domain), rep(reads.len())))
}

pub fn build_phi(ca: &CellularAutomaton, graph: &LabeledGraph, r: usize) -> Result<Phi> {
    let u = ca.universe();
    let ball = u.ball(r);
    let positions: Vec<usize> = ca
        .memory()
        .iter()
        .map(|m| ball.position(m).ok_or(Error::MemoryExceedsRadius(r)))
        .collect::<Result<_>>()?;
    let outer = compute_vr(graph, u, 3 * r)?;
    let inner = compute_vr(graph, u, r)?;
    let reads: Vec<Vec<usize>> = outer
        .vertices
        .iter()
        .map(|&v| {
            let psi = inner.isomorphism(v).expect("V(3r) ⊆ V(r)");
            positions.iter().map(|&p| psi[p]).collect()
        })
        .collect();
    let domain = graph.vertex_count();
    let map = if let Some(s) = ca.alphabet().as_symbolic() {
        let blocks = ca.linear_blocks().expect("symbolic");
        RestrictionMap::Symbolic {
            connected: linear_phi(&blocks, &reads, domain, s.rank),
            components: abelian_phi(&ca.induced_component_ca(), &reads, domain)?,
        }
    } else {
        let group = ca.finite_group().expect("finite");
        if group.factors().is_some() {
            RestrictionMap::Abelian(abelian_phi(ca, &reads, domain)?)
        } else {
            let rule = ca.finite_rule().expect("finite");
            RestrictionMap::Table(FiniteHom::from_fn(group, domain, reads.len(), |x| {
                reads
                    .iter()
                    .map(|row| {
                        let inp: Vec<usize> = row.iter().map(|&i| x[i]).collect();
                        rule.apply_scalar(group, &inp)
                    })
                    .collect()
            })?)
        }
    };
    Ok(Phi {
        vertices: outer.vertices,
        domain_size: domain,
        reads,
        map,
    })
}

impl Phi {
    /// Table-free evaluation for finite alphabets.
    pub fn evaluate(&self, ca: &CellularAutomaton, x: &[usize]) -> Result<Vec<usize>> {
        let (Some(group), Some(rule)) = (ca.finite_group(), ca.finite_rule()) else {
            return Err(Error::SymbolicEvaluation);
        };
        Ok(self
            .reads
            .iter()
            .map(|row| {
                let inp: Vec<usize> = row.iter().map(|&i| x[i]).collect();
                rule.apply_scalar(group, &inp)
            })
            .collect())
    }

    /// Order of `Φ(A^V)` (finite) or of `Φ₀(X₀^V)` (symbolic).
    pub fn component_image_order(&self) -> BigUint {
        match &self.map {
            RestrictionMap::Abelian(m) => m.image_order(),
            RestrictionMap::Table(t) => BigUint::from(t.image_and_kernel_orders().0),
            RestrictionMap::Symbolic { components, .. } => components.image_order(),
        }
    }

    /// `dim Φ(A^V)`; zero for finite alphabets.
    pub fn image_dim(&self) -> usize {
        match &self.map {
            RestrictionMap::Symbolic { connected, .. } => connected.rank(),
            _ => 0,
        }
    }

    pub fn components_surjective(&self, component_order: usize) -> bool {
        self.component_image_order() == BigUint::from(component_order).pow(self.vertices.len() as u32)
    }

    pub fn is_surjective(&self, ca: &CellularAutomaton) -> bool {
        let g = ca.alphabet().dim();
        self.image_dim() == g * self.vertices.len() && self.components_surjective(ca.alphabet().pi0().order())
    }
}

/// The two smallness conditions on `ε`. The second is `None` when
/// `dim A = 0`, where it is not needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonConditions {
    pub cardinality: bool,
    pub dimension: Option<bool>,
}

impl EpsilonConditions {
    pub fn holds(&self) -> bool {
        self.cardinality && self.dimension.unwrap_or(true)
    }
}

const POWER_BIT_LIMIT: u64 = 1 << 26;

fn checked_pow(base: &BigUint, exp: &BigInt) -> Result<BigUint> {
    let e = exp
        .to_u64()
        .filter(|&e| e.saturating_mul(base.bits().max(1)) <= POWER_BIT_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{base}^{exp}")))?;
    Ok(base.pow(e as u32))
}

/// `|X₀|^ε (1 − |X₀|^{−|B(r)|})^{1/(2|B(2r)|)} < 1` and
/// `(1 − ε)^{−1} < 1 + 1/(|B(2r)| dim A)`, decided exactly.
pub fn epsilon_conditions(
    x0_size: usize,
    dim_a: usize,
    ball_r: usize,
    ball_2r: usize,
    epsilon: &BigRational,
) -> Result<EpsilonConditions> {
    if !epsilon.is_positive() || *epsilon >= BigRational::one() {
        return Err(Error::InvalidArgument("ε must lie in (0, 1)".into()));
    }
    let num = epsilon.numer().clone();
    let den = epsilon.denom().clone();
    // Raised to the power 2·|B(2r)|·den and multiplied by Q^den, Q = q^{|B(r)|}:
    // q^{2·|B(2r)|·num} (Q − 1)^den < Q^den.
    let q = BigUint::from(x0_size);
    let big_q = checked_pow(&q, &BigInt::from(ball_r))?;
    let lhs = checked_pow(&q, &(BigInt::from(2 * ball_2r) * &num))?
        * checked_pow(&(big_q.clone() - BigUint::one().min(big_q.clone())), &den)?;
    let rhs = checked_pow(&big_q, &den)?;
    let cardinality = lhs < rhs;
    let dimension = (dim_a > 0).then(|| {
        let bd = BigInt::from(ball_2r * dim_a);
        &den * &bd < (&den - &num) * (bd + 1)
    });
    Ok(EpsilonConditions { cardinality, dimension })
}

/// `Π base_i^{exp_i}` with positive rational bases and rational exponents.
#[derive(Debug, Clone)]
struct PowerProduct(Vec<(BigRational, BigRational)>);

impl PowerProduct {
    fn single(base: BigRational, exp: BigRational) -> Self {
        PowerProduct(vec![(base, exp)])
    }

    fn times(mut self, base: BigRational, exp: BigRational) -> Self {
        self.0.push((base, exp));
        self
    }

    /// Exact comparison after clearing exponent denominators.
    fn compare(&self, other: &PowerProduct) -> Result<Ordering> {
        let d = self
            .0
            .iter()
            .chain(&other.0)
            .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()));
        let mut left = BigRational::one();
        let mut right = BigRational::one();
        let mut bits = 0u64;
        let mut push = |base: &BigRational, e: &BigRational, flip: bool| -> Result<()> {
            let k = (e * BigRational::from_integer(d.clone())).to_integer();
            let mag = k.abs().to_u64().ok_or_else(|| Error::TooLarge("exponent".into()))?;
            bits = bits.saturating_add(mag.saturating_mul(base.numer().bits() + base.denom().bits()));
            if bits > POWER_BIT_LIMIT {
                return Err(Error::TooLarge("power product".into()));
            }
            let p = num_traits::pow(base.clone(), mag as usize);
            if k.is_negative() != flip {
                right *= p;
            } else {
                left *= p;
            }
            Ok(())
        };
        for (b, e) in &self.0 {
            push(b, e, false)?;
        }
        for (b, e) in &other.0 {
            push(b, e, true)?;
        }
        Ok(left.cmp(&right))
    }
}

/// One recomputed line of an inequality chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditLine {
    pub chain: String,
    pub step: usize,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub holds: bool,
    /// Lines that follow from the contradiction hypothesis rather than from
    /// the instance data.
    pub hypothesis_dependent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub radius: usize,
    pub epsilon: String,
    pub vertices: usize,
    pub v3r: usize,
    pub packing: usize,
    pub ball_r: usize,
    pub ball_2r: usize,
    pub dim_a: usize,
    pub x0_size: usize,
    pub sofic_condition: bool,
    pub epsilon_conditions: EpsilonConditions,
    pub packing_disjoint: bool,
    pub packing_covering: bool,
    pub phi_surjective: bool,
    pub phi0_surjective: bool,
    pub lines: Vec<AuditLine>,
    /// Whether the chain, started from the contradiction hypothesis, ends
    /// strictly below the actual image. `None` when the chain is skipped.
    pub dimension_contradiction: Option<bool>,
    pub cardinality_contradiction: Option<bool>,
    pub notes: Vec<String>,
}

impl AuditReport {
    /// Every line that depends only on the instance data holds.
    pub fn all_instance_lines_hold(&self) -> bool {
        self.lines.iter().filter(|l| !l.hypothesis_dependent).all(|l| l.holds)
    }
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn line(chain: &str, step: usize, lhs: String, relation: &str, rhs: String, holds: bool, hyp: bool) -> AuditLine {
    AuditLine {
        chain: chain.into(),
        step,
        lhs,
        relation: relation.into(),
        rhs,
        holds,
        hypothesis_dependent: hyp,
    }
}

/// Recomputes both inequality chains of the dual surjunctivity argument with
/// the numbers of a concrete graph, radius and `ε`.
pub fn counting_audit(ca: &CellularAutomaton, graph: &LabeledGraph, r: usize, epsilon: &BigRational) -> Result<AuditReport> {
    let u = ca.universe();
    let phi = build_phi(ca, graph, r)?;
    let v3r = compute_vr(graph, u, 3 * r)?;
    let packing = packing_subset(graph, &v3r.vertices, r);
    let ball_r = u.ball(r).len();
    let ball_2r = u.ball(2 * r).len();
    let dim_a = ca.alphabet().dim();
    let x0 = ca.alphabet().pi0().order();
    let eps_cond = epsilon_conditions(x0, dim_a, ball_r, ball_2r, epsilon)?;
    let (nv, nw, np) = (graph.vertex_count(), v3r.vertices.len(), packing.centres.len());
    let eps = epsilon.clone();
    let one = BigRational::one();
    let mut lines = Vec::new();
    let mut notes = Vec::new();

    let dimension_contradiction = if dim_a > 0 {
        let d = rat(dim_a);
        let rank = phi.image_dim();
        let ker = nv * dim_a - rank;
        let inv = one.clone() / (one.clone() - &eps);
        let c = "dimension";
        lines.push(line(
            c,
            0,
            format!("dim Φ(A^V) = {rank}"),
            "=",
            format!("dim A^V − dim Ker Φ = {} − {ker}", nv * dim_a),
            rank + ker == nv * dim_a,
            false,
        ));
        let step1 = rank + np <= nv * dim_a;
        lines.push(line(c, 1, format!("{rank}"), "≤", format!("|V| dim A − |V′| = {}", nv * dim_a - np.min(nv * dim_a)), step1, true));
        let a2 = rat(nv) * &d - rat(np);
        let b2 = &inv * rat(nw) * &d - rat(nw) / rat(ball_2r);
        lines.push(line(c, 2, format!("{a2}"), "≤", format!("(1−ε)^−1 |V(3r)| dim A − |V(3r)|/|B(2r)| = {b2}"), a2 <= b2, false));
        let b3 = rat(nw) * &d * (&inv - one.clone() / (rat(ball_2r) * &d));
        lines.push(line(c, 3, format!("{b2}"), "=", format!("|V(3r)| dim A ((1−ε)^−1 − 1/(|B(2r)| dim A)) = {b3}"), b2 == b3, false));
        let b4 = rat(nw) * &d;
        lines.push(line(c, 4, format!("{b3}"), "<", format!("|V(3r)| dim A = {b4}"), b3 < b4, false));
        lines.push(line(c, 5, format!("{b4}"), "=", format!("dim A^V(3r) = {}", nw * dim_a), b4 == rat(nw * dim_a), false));
        Some(phi.image_dim() == nw * dim_a && !step1)
    } else {
        notes.push("dim A = 0: the dimension chain is not needed; the finite-alphabet case follows from dual surjunctivity for finite alphabets".into());
        None
    };

    let cardinality_contradiction = if x0 > 1 {
        let q = rat(x0);
        let c = "cardinality";
        let base = one.clone() - one.clone() / num_traits::pow(q.clone(), ball_r);
        let actual = phi.component_image_order();
        let bound = BigUint::from(x0).pow((nv - np * ball_r) as u32)
            * (BigUint::from(x0).pow(ball_r as u32) - BigUint::one()).pow(np as u32);
        let step0 = actual <= bound;
        lines.push(line(c, 0, format!("|Φ₀(X₀^V)| = {actual}"), "≤", format!("|X₀|^(|V|−|V′||B(r)|) (|X₀|^|B(r)| − 1)^|V′| = {bound}"), step0, true));
        let p1 = PowerProduct::single(q.clone(), rat(nv)).times(base.clone(), rat(np));
        let eq1 = BigRational::from_integer(BigInt::from(bound.clone())) == num_traits::pow(q.clone(), nv) * num_traits::pow(base.clone(), np);
        lines.push(line(c, 1, format!("{bound}"), "=", format!("{x0}^{nv} (1 − {x0}^−{ball_r})^{np}"), eq1, false));
        let p2 = PowerProduct::single(q.clone(), rat(nv)).times(base.clone(), rat(nw) / rat(ball_2r));
        lines.push(line(c, 2, format!("{x0}^{nv} (1 − {x0}^−{ball_r})^{np}"), "≤", format!("{x0}^{nv} (1 − {x0}^−{ball_r})^({nw}/{ball_2r})"), p1.compare(&p2)? != Ordering::Greater, false));
        let p3 = PowerProduct::single(q.clone(), rat(nv)).times(base.clone(), rat(nv) / rat(2 * ball_2r));
        lines.push(line(c, 3, format!("{x0}^{nv} (1 − {x0}^−{ball_r})^({nw}/{ball_2r})"), "<", format!("{x0}^{nv} (1 − {x0}^−{ball_r})^({nv}/{})", 2 * ball_2r), p2.compare(&p3)? == Ordering::Less, false));
        let p4 = PowerProduct::single(q.clone(), rat(nv) - &eps * rat(nv));
        lines.push(line(c, 4, format!("{x0}^{nv} (1 − {x0}^−{ball_r})^({nv}/{})", 2 * ball_2r), "<", format!("{x0}^{nv} {x0}^(−{eps}·{nv})"), p3.compare(&p4)? == Ordering::Less, false));
        lines.push(line(c, 5, format!("{x0}^{nv} {x0}^(−{eps}·{nv})"), "=", format!("{x0}^((1−{eps})·{nv})"), true, false));
        let p6 = PowerProduct::single(q.clone(), rat(nw));
        lines.push(line(c, 6, format!("{x0}^((1−{eps})·{nv})"), "<", format!("|X₀|^|V(3r)| = {x0}^{nw}"), p4.compare(&p6)? == Ordering::Less, false));
        Some(phi.components_surjective(x0) && !step0)
    } else {
        notes.push("|X₀| = 1: the cardinality chain is vacuous".into());
        None
    };

    Ok(AuditReport {
        radius: r,
        epsilon: epsilon.to_string(),
        vertices: nv,
        v3r: nw,
        packing: np,
        ball_r,
        ball_2r,
        dim_a,
        x0_size: x0,
        sofic_condition: v3r.satisfies(epsilon),
        epsilon_conditions: eps_cond,
        packing_disjoint: packing.disjoint,
        packing_covering: packing.covering,
        phi_surjective: phi.is_surjective(ca),
        phi0_surjective: phi.components_surjective(x0),
        lines,
        dimension_contradiction,
        cardinality_contradiction,
        notes,
    })
}

/// An `(E, E′)`-tiling of a finite region with `E′ = E E⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tiling {
    pub shape: Vec<GroupElement>,
    pub enlarged: Vec<GroupElement>,
    pub centres: Vec<GroupElement>,
    pub region: Vec<GroupElement>,
    pub interior: Vec<GroupElement>,
    /// The translates `gE`, `g ∈ T`, are pairwise disjoint.
    pub disjoint: bool,
    /// The interior is covered by the translates `gE′`.
    pub interior_covered: bool,
}

/// Greedy scan of `region` in canonical order, keeping a centre whenever its
/// `E`-translate misses all earlier translates.
pub fn greedy_tiling(universe: &GroupUniverse, shape: &[GroupElement], region: &[GroupElement]) -> Result<Tiling> {
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    for g in shape.iter().chain(region) {
        universe.check(g)?;
    }
    let shape: Vec<GroupElement> = shape.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let region: Vec<GroupElement> = region.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let enlarged: Vec<GroupElement> = shape
        .iter()
        .flat_map(|a| shape.iter().map(move |b| universe.mul(a, &universe.inverse(b))))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let translate = |g: &GroupElement, set: &[GroupElement]| -> Vec<GroupElement> {
        set.iter().map(|e| universe.mul(g, e)).collect()
    };
    let mut used: HashSet<GroupElement> = HashSet::new();
    let mut centres = Vec::new();
    for g in &region {
        let tile = translate(g, &shape);
        if tile.iter().all(|x| !used.contains(x)) {
            used.extend(tile);
            centres.push(g.clone());
        }
    }
    let inside: HashSet<&GroupElement> = region.iter().collect();
    let interior: Vec<GroupElement> = region
        .iter()
        .filter(|h| translate(h, &enlarged).iter().all(|x| inside.contains(x)))
        .cloned()
        .collect();
    let total: usize = centres.len() * shape.len();
    let union: HashSet<GroupElement> = centres.iter().flat_map(|g| translate(g, &shape)).collect();
    let cover: HashSet<GroupElement> = centres.iter().flat_map(|g| translate(g, &enlarged)).collect();
    Ok(Tiling {
        disjoint: total == union.len(),
        interior_covered: interior.iter().all(|h| cover.contains(h)),
        shape,
        enlarged,
        centres,
        region,
        interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{FiniteGroup, SymbolicAlphabet};
    use crate::ca::scalar_block;
    use crate::lattice::TorsionProfile;

    fn z() -> GroupUniverse {
        GroupUniverse::integers()
    }

    fn v2(x: i64, y: i64) -> GroupElement {
        GroupElement::Vector(vec![x, y])
    }

    fn rule(n: u64, memory: &[i64], f: impl Fn(&[usize]) -> usize) -> CellularAutomaton {
        let mem = memory.iter().map(|&m| GroupUniverse::int(m)).collect();
        CellularAutomaton::finite_from_fn(z(), FiniteGroup::cyclic(n).unwrap(), mem, f).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let g = LabeledGraph::cycle(5).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("graph 5 2\n"));
        assert_eq!(LabeledGraph::parse(&text).unwrap(), g);
        assert!(matches!(LabeledGraph::parse("graph 2 1\n0 0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(LabeledGraph::parse("grph 2 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(LabeledGraph::parse("graph 2 1\n0 x 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn nondeterministic_rejected() {
        let g = LabeledGraph::new(2, 2, vec![(0, 0, 1), (0, 0, 0), (1, 1, 0)]).unwrap();
        assert!(matches!(compute_vr(&g, &z(), 1), Err(Error::NondeterministicGraph { vertex: 0, label: 0 })));
    }

    #[test]
    fn vr_on_cycles_and_tori() {
        for n in 3..10 {
            let g = LabeledGraph::cycle(n).unwrap();
            for r in 0..4 {
                let w = compute_vr(&g, &z(), r).unwrap();
                let expected = if n > 2 * r || r == 0 { n } else { 0 };
                assert_eq!(w.vertices.len(), expected, "n = {n}, r = {r}");
            }
        }
        let t = LabeledGraph::torus(5, 2).unwrap();
        assert_eq!(compute_vr(&t, &GroupUniverse::lattice(2), 2).unwrap().vertices.len(), 25);
        assert!(compute_vr(&t, &GroupUniverse::lattice(2), 3).unwrap().vertices.is_empty());
    }

    #[test]
    fn vr_detects_local_defects() {
        // A path 0-1-2-3-4 labelled like Z: only the middle looks like B(1)...
        let mut edges = Vec::new();
        for i in 0..4 {
            edges.push((i, 0, i + 1));
            edges.push((i + 1, 1, i));
        }
        let g = LabeledGraph::new(5, 2, edges).unwrap();
        assert_eq!(compute_vr(&g, &z(), 1).unwrap().vertices, vec![1, 2, 3]);
        assert_eq!(compute_vr(&g, &z(), 2).unwrap().vertices, vec![2]);
    }

    #[test]
    fn packing_examples() {
        let g = LabeledGraph::cycle(12).unwrap();
        let v3 = compute_vr(&g, &z(), 3).unwrap();
        let p = packing_subset(&g, &v3.vertices, 1);
        assert_eq!(p.centres, vec![0, 3, 6, 9]);
        assert!(p.disjoint && p.covering);

        let single = LabeledGraph::new(1, 2, vec![(0, 0, 0), (0, 1, 0)]).unwrap();
        assert_eq!(packing_subset(&single, &[0], 0).centres, vec![0]);

        let t = LabeledGraph::torus(8, 2).unwrap();
        let v = compute_vr(&t, &GroupUniverse::lattice(2), 3).unwrap();
        let p = packing_subset(&t, &v.vertices, 1);
        assert!(p.disjoint && p.covering);
    }

    #[test]
    fn phi_examples() {
        let g8 = LabeledGraph::cycle(8).unwrap();
        let id = rule(3, &[0], |x| x[0]);
        assert!(build_phi(&id, &g8, 1).unwrap().is_surjective(&id));

        let dbl = rule(4, &[0], |x| 2 * x[0] % 4);
        let phi = build_phi(&dbl, &g8, 1).unwrap();
        assert_eq!(phi.component_image_order(), BigUint::from(2u32).pow(8));
        assert!(!phi.is_surjective(&dbl));
        // Exhaustive oracle over all 4^8 inputs.
        let g = FiniteGroup::cyclic(4).unwrap();
        let image: HashSet<Vec<usize>> = (0..4usize.pow(8))
            .map(|i| phi.evaluate(&dbl, &g.decode(i, 8)).unwrap())
            .collect();
        assert_eq!(image.len(), 256);

        let xor = rule(2, &[0, 1], |x| (x[0] + x[1]) % 2);
        let phi = build_phi(&xor, &g8, 1).unwrap();
        // On the full cycle the XOR map has rank n − 1 over F_2.
        assert_eq!(phi.component_image_order(), BigUint::from(2u32).pow(7));
        let phi6 = build_phi(&xor, &LabeledGraph::cycle(6).unwrap(), 1).unwrap();
        assert!(phi6.vertices.is_empty());
        assert!(phi6.is_surjective(&xor));

        let far = rule(2, &[2], |x| x[0]);
        assert!(matches!(build_phi(&far, &g8, 1), Err(Error::MemoryExceedsRadius(1))));
    }

    #[test]
    fn epsilon_examples() {
        let eps = BigRational::new(BigInt::from(1), BigInt::from(100));
        assert!(epsilon_conditions(1, 0, 3, 5, &eps).unwrap().cardinality);
        let c = epsilon_conditions(2, 0, 3, 5, &eps).unwrap();
        // Oracle in floating point: 2^(1/100) (7/8)^(1/10) ≈ 0.9937.
        let float = 2f64.powf(0.01) * (7.0f64 / 8.0).powf(0.1);
        assert_eq!(c.cardinality, float < 1.0);
        assert_eq!(c.dimension, None);
        assert_eq!(epsilon_conditions(2, 1, 3, 5, &eps).unwrap().dimension, Some(true));
        let big = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(epsilon_conditions(2, 1, 3, 5, &big).unwrap().dimension, Some(false));
    }

    #[test]
    fn audit_identity() {
        let eps = BigRational::new(BigInt::from(1), BigInt::from(100));
        let id = rule(2, &[0], |x| x[0]);
        let rep = counting_audit(&id, &LabeledGraph::cycle(12).unwrap(), 1, &eps).unwrap();
        assert!(rep.phi_surjective);
        assert!(rep.all_instance_lines_hold(), "{:#?}", rep.lines);
        assert_eq!(rep.cardinality_contradiction, Some(true));
        assert_eq!(rep.dimension_contradiction, None);
    }

    #[test]
    fn audit_doubling_and_torus() {
        let eps = BigRational::new(BigInt::from(1), BigInt::from(100));
        let dbl = rule(4, &[0], |x| 2 * x[0] % 4);
        let rep = counting_audit(&dbl, &LabeledGraph::cycle(8).unwrap(), 1, &eps).unwrap();
        assert!(!rep.phi_surjective);
        assert_eq!(rep.cardinality_contradiction, Some(false));

        let t = SymbolicAlphabet::connected(TorsionProfile::Torus, 1).unwrap();
        let comp = FiniteHom::trivial(&t.components, 1, 1).unwrap();
        let tau = CellularAutomaton::symbolic(z(), t, vec![GroupUniverse::int(0)], &[scalar_block(2)], comp).unwrap();
        let rep = counting_audit(&tau, &LabeledGraph::cycle(8).unwrap(), 1, &eps).unwrap();
        assert!(rep.phi_surjective);
        assert_eq!(rep.lines.iter().filter(|l| l.chain == "dimension").count(), 6);
        assert!(rep.all_instance_lines_hold(), "{:#?}", rep.lines);
        assert_eq!(rep.dimension_contradiction, Some(true));
    }

    #[test]
    fn tilings() {
        let ints: Vec<GroupElement> = (0..10).map(GroupUniverse::int).collect();
        let t = greedy_tiling(&z(), &[GroupUniverse::int(0), GroupUniverse::int(1)], &ints).unwrap();
        assert_eq!(t.centres, (0..10).step_by(2).map(GroupUniverse::int).collect::<Vec<_>>());
        assert!(t.disjoint && t.interior_covered);

        let z2 = GroupUniverse::lattice(2);
        let region: Vec<GroupElement> = (0..10).flat_map(|x| (0..10).map(move |y| v2(x, y))).collect();
        let shape = [v2(0, 0), v2(0, 1), v2(1, 0), v2(1, 1)];
        let t = greedy_tiling(&z2, &shape, &region).unwrap();
        let evens: Vec<GroupElement> = (0..10)
            .step_by(2)
            .flat_map(|x| (0..10).step_by(2).map(move |y| v2(x, y)))
            .collect();
        assert_eq!(t.centres, evens);
        assert!(t.disjoint && t.interior_covered);

        let t = greedy_tiling(&z(), &[GroupUniverse::int(0)], &ints).unwrap();
        assert_eq!(t.centres, ints);
        assert!(matches!(greedy_tiling(&z(), &[], &ints), Err(Error::EmptyShape)));
    }
}
