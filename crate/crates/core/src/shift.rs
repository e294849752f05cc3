//! One-dimensional machinery over `Z`: the interval form of a local rule, its
//! de Bruijn graph, the image automaton, and shifts of finite type with their
//! gluing gaps.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::alphabet::{FiniteGroup, TABLE_LIMIT};
use crate::ca::{CellularAutomaton, Patch};
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Limit on subset-construction states.
pub const AUTOMATON_STATE_LIMIT: usize = 1 << 18;

/// A finite-alphabet rule on `Z` in interval form: the output at `i` is
/// `table[c[i+offset], ..., c[i+offset+width-1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule1d {
    pub group: FiniteGroup,
    pub offset: i64,
    pub width: usize,
    pub table: Vec<usize>,
}

impl Rule1d {
    pub fn from_ca(ca: &CellularAutomaton) -> Result<Self> {
        if !ca.universe().is_integers() {
            return Err(Error::UnsupportedUniverse {
                required: "Z".into(),
                found: ca.universe().to_string(),
            });
        }
        let (Some(group), Some(rule)) = (ca.finite_group(), ca.finite_rule()) else {
            return Err(Error::SymbolicEvaluation);
        };
        let offsets: Vec<i64> = ca
            .memory()
            .iter()
            .map(|m| match m {
                GroupElement::Vector(v) => v[0],
                _ => unreachable!("Z elements are vectors"),
            })
            .collect();
        let lo = *offsets.iter().min().expect("memory is nonempty");
        let hi = *offsets.iter().max().expect("memory is nonempty");
        let width = (hi - lo + 1) as usize;
        let size = group
            .power_size(width)
            .ok_or_else(|| Error::TooLarge(format!("{}^{}", group.order(), width)))?;
        let table = (0..size)
            .map(|w| {
                let word = group.decode(w, width);
                let x: Vec<usize> = offsets.iter().map(|&o| word[(o - lo) as usize]).collect();
                rule.apply_scalar(group, &x)
            })
            .collect();
        Ok(Rule1d {
            group: group.clone(),
            offset: lo,
            width,
            table,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.group.order()
    }

    /// Outputs of all complete windows of `word`.
    pub fn apply_word(&self, word: &[usize]) -> Vec<usize> {
        if word.len() < self.width {
            return Vec::new();
        }
        word.windows(self.width).map(|w| self.table[self.group.encode(w)]).collect()
    }

    pub fn de_bruijn(&self) -> DeBruijnGraph {
        DeBruijnGraph::new(self)
    }
}

/// Vertices are words of length `width − 1`; the edge from `v` with symbol
/// `a` reads the window `v·a` and leads to its suffix.
#[derive(Debug, Clone)]
pub struct DeBruijnGraph {
    pub alphabet_size: usize,
    pub width: usize,
    pub vertex_count: usize,
    /// The all-identity vertex.
    pub zero: usize,
    pub identity: usize,
    labels: Vec<usize>,
}

impl DeBruijnGraph {
    pub fn new(rule: &Rule1d) -> Self {
        let q = rule.alphabet_size();
        let vertex_count = q.pow(rule.width as u32 - 1);
        DeBruijnGraph {
            alphabet_size: q,
            width: rule.width,
            vertex_count,
            zero: rule.group.identity_tuple(rule.width - 1),
            identity: rule.group.identity(),
            labels: rule.table.clone(),
        }
    }

    pub fn target(&self, v: usize, a: usize) -> usize {
        (v * self.alphabet_size + a) % self.vertex_count
    }

    pub fn label(&self, v: usize, a: usize) -> usize {
        self.labels[v * self.alphabet_size + a]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.alphabet_size).filter(|&a| self.target(v, a) < self.vertex_count).count()
    }

    /// Vertices reachable from `from` along edges whose label is `label`.
    fn forward_closure(&self, from: usize, label: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for a in 0..self.alphabet_size {
                if self.label(v, a) == label {
                    let t = self.target(v, a);
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// Vertices from which `to` is reachable along edges labelled `label`.
    fn backward_closure(&self, to: usize, label: usize) -> Vec<bool> {
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for v in 0..self.vertex_count {
            for a in 0..self.alphabet_size {
                if self.label(v, a) == label {
                    preds[self.target(v, a)].push(v);
                }
            }
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([to]);
        seen[to] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &preds[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Shortest nonempty symbol sequence leading `zero → zero` along
    /// identity-labelled edges and containing a non-identity symbol.
    pub fn finite_kernel_path(&self) -> Option<Vec<usize>> {
        let e = self.identity;
        let n = self.vertex_count;
        // state = vertex + n·flag
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; 2 * n];
        let start = self.zero;
        let goal = self.zero + n;
        let mut seen = vec![false; 2 * n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            let (v, flag) = (s % n, s / n);
            for a in 0..self.alphabet_size {
                if self.label(v, a) != e {
                    continue;
                }
                let t = self.target(v, a) + n * usize::from(flag == 1 || a != e);
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((s, a));
                    if t == goal {
                        let mut word = Vec::new();
                        let mut cur = t;
                        while let Some((p, a)) = prev[cur] {
                            word.push(a);
                            cur = p;
                        }
                        word.reverse();
                        return Some(word);
                    }
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A cycle of identity-labelled edges other than the identity loop at
    /// `zero`, as the symbol sequence read around it.
    pub fn periodic_kernel_cycle(&self) -> Option<Vec<usize>> {
        let e = self.identity;
        for u in 0..self.vertex_count {
            for a in 0..self.alphabet_size {
                if self.label(u, a) != e || (u == self.zero && a == e) {
                    continue;
                }
                let v = self.target(u, a);
                if let Some(mut path) = self.path_with_label(v, u, e) {
                    path.insert(0, a);
                    return Some(path);
                }
            }
        }
        None
    }

    /// Symbols of a shortest path `from → to` along edges labelled `label`.
    fn path_with_label(&self, from: usize, to: usize, label: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut word = Vec::new();
                let mut cur = v;
                while let Some((p, a)) = prev[cur] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..self.alphabet_size {
                if self.label(v, a) == label {
                    let t = self.target(v, a);
                    if !seen[t] {
                        seen[t] = true;
                        prev[t] = Some((v, a));
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    /// Values `τ(c)(0)` over finitely supported `c` with `τ(c)` equal to the
    /// identity off `0`: labels of edges `u → v` with `u` reachable from
    /// `zero` and `zero` reachable from `v` along identity-labelled edges.
    pub fn single_site_image(&self) -> BTreeSet<usize> {
        let e = self.identity;
        let fwd = self.forward_closure(self.zero, e);
        let bwd = self.backward_closure(self.zero, e);
        let mut out = BTreeSet::from([e]);
        for u in (0..self.vertex_count).filter(|&u| fwd[u]) {
            for a in 0..self.alphabet_size {
                if bwd[self.target(u, a)] {
                    out.insert(self.label(u, a));
                }
            }
        }
        out
    }
}

/// Deterministic automaton for the image language, obtained by the subset
/// construction on the de Bruijn graph started from all vertices.
#[derive(Debug, Clone)]
pub struct ImageAutomaton {
    pub alphabet_size: usize,
    /// `transitions[state][symbol]`.
    pub transitions: Vec<Vec<usize>>,
    /// The empty-subset state, if reachable.
    pub dead: Option<usize>,
}

impl ImageAutomaton {
    pub fn new(graph: &DeBruijnGraph) -> Result<Self> {
        let q = graph.alphabet_size;
        let words = graph.vertex_count.div_ceil(64);
        let mut start = vec![0u64; words];
        for v in 0..graph.vertex_count {
            start[v / 64] |= 1 << (v % 64);
        }
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        index.insert(start, 0);
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let mut next = vec![vec![0u64; words]; q];
            let s = states[i].clone();
            for v in (0..graph.vertex_count).filter(|v| s[v / 64] >> (v % 64) & 1 == 1) {
                for a in 0..q {
                    let t = graph.target(v, a);
                    next[graph.label(v, a)][t / 64] |= 1 << (t % 64);
                }
            }
            let mut row = Vec::with_capacity(q);
            for set in next {
                let id = match index.get(&set) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= AUTOMATON_STATE_LIMIT {
                            return Err(Error::TooLarge(format!(
                                "image automaton beyond {AUTOMATON_STATE_LIMIT} states"
                            )));
                        }
                        index.insert(set.clone(), states.len());
                        states.push(set);
                        states.len() - 1
                    }
                };
                row.push(id);
            }
            transitions.push(row);
            i += 1;
        }
        let dead = states.iter().position(|s| s.iter().all(|&w| w == 0));
        Ok(ImageAutomaton {
            alphabet_size: q,
            transitions,
            dead,
        })
    }

    pub fn from_ca(ca: &CellularAutomaton) -> Result<Self> {
        Self::new(&Rule1d::from_ca(ca)?.de_bruijn())
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut s = 0;
        for &a in word {
            s = self.transitions[s][a];
        }
        Some(s) != self.dead
    }

    /// Number of length-`n` words in the image language.
    pub fn word_count(&self, n: usize) -> BigUint {
        let mut counts = vec![BigUint::zero(); self.state_count()];
        counts[0] = BigUint::one();
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.state_count()];
            for (s, c) in counts.iter().enumerate() {
                if c.is_zero() || Some(s) == self.dead {
                    continue;
                }
                for &t in &self.transitions[s] {
                    next[t] += c;
                }
            }
            counts = next;
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|(s, _)| Some(*s) != self.dead)
            .map(|(_, c)| c)
            .sum()
    }

    /// Every word is in the image.
    pub fn is_universal(&self) -> bool {
        self.dead.is_none()
    }

    /// A shortest word outside the image language.
    pub fn orphan(&self) -> Option<Vec<usize>> {
        let dead = self.dead?;
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.state_count()];
        let mut seen = vec![false; self.state_count()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(s) = queue.pop_front() {
            if s == dead {
                let mut word = Vec::new();
                let mut cur = s;
                while let Some((p, a)) = prev[cur] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for (a, &t) in self.transitions[s].iter().enumerate() {
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((s, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }
}

/// Preimage counts of every length-`n` output word under the window map
/// `A^{n+w−1} → A^n`, indexed by encoded output word.
pub fn preimage_counts(rule: &Rule1d, n: usize) -> Result<Vec<u64>> {
    let g = &rule.group;
    let len = n + rule.width - 1;
    let inputs = g
        .power_size(len)
        .ok_or_else(|| Error::TooLarge(format!("{}^{}", g.order(), len)))?;
    let outputs = g.power_size(n).expect("no larger than inputs");
    let mut counts = vec![0u64; outputs];
    for i in 0..inputs {
        counts[g.encode(&rule.apply_word(&g.decode(i, len)))] += 1;
    }
    Ok(counts)
}

/// An orphan word as a patch on `[0, n)`.
pub fn orphan_patch(word: &[usize]) -> Patch {
    Patch::on_integers(0, word)
}

/// A one-dimensional shift of finite type: points whose length-`window`
/// factors all lie in `allowed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sft {
    pub alphabet_size: usize,
    pub window: usize,
    pub allowed: BTreeSet<Vec<usize>>,
}

/// Gluing gap `Δ`; `None` stands for infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GluingGap(pub Option<usize>);

impl std::fmt::Display for GluingGap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "infinity"),
        }
    }
}

impl Sft {
    pub fn new(alphabet_size: usize, window: usize, allowed: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if alphabet_size == 0 || window == 0 {
            return Err(Error::InvalidArgument("alphabet and window must be nonempty".into()));
        }
        let allowed: BTreeSet<Vec<usize>> = allowed.into_iter().collect();
        for w in &allowed {
            if w.len() != window || w.iter().any(|&a| a >= alphabet_size) {
                return Err(Error::InvalidArgument(format!("allowed word {w:?} does not fit the window")));
            }
        }
        alphabet_size
            .checked_pow(window as u32)
            .filter(|&s| s <= TABLE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("{alphabet_size}^{window}")))?;
        Ok(Sft {
            alphabet_size,
            window,
            allowed,
        })
    }

    /// The full shift on `q` symbols.
    pub fn full(q: usize) -> Self {
        Sft::new(q, 1, (0..q).map(|a| vec![a])).expect("valid")
    }

    /// Binary words without `11`.
    pub fn golden_mean() -> Self {
        Sft::new(2, 2, [vec![0, 0], vec![0, 1], vec![1, 0]]).expect("valid")
    }

    fn memory(&self) -> usize {
        self.window - 1
    }

    fn vertex_count(&self) -> usize {
        self.alphabet_size.pow(self.memory() as u32)
    }

    fn encode(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &a| acc * self.alphabet_size + a)
    }

    /// Target vertex of `v·a`, if the window is allowed.
    fn step(&self, v: usize, a: usize, allowed: &HashSet<usize>) -> Option<usize> {
        let word = v * self.alphabet_size + a;
        allowed.contains(&word).then(|| word % self.vertex_count())
    }

    fn allowed_codes(&self) -> HashSet<usize> {
        self.allowed.iter().map(|w| self.encode(w)).collect()
    }

    /// Vertices lying on bi-infinite paths.
    fn essential_vertices(&self) -> Vec<bool> {
        let n = self.vertex_count();
        let allowed = self.allowed_codes();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let has_out =
                    (0..self.alphabet_size).any(|a| self.step(v, a, &allowed).is_some_and(|t| alive[t]));
                let has_in = (0..n).any(|u| {
                    alive[u] && (0..self.alphabet_size).any(|a| self.step(u, a, &allowed) == Some(v))
                });
                if !has_out || !has_in {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    /// Boolean adjacency matrix of the essential graph.
    fn essential_adjacency(&self) -> (Vec<usize>, Vec<Vec<bool>>) {
        let alive = self.essential_vertices();
        let allowed = self.allowed_codes();
        let verts: Vec<usize> = (0..self.vertex_count()).filter(|&v| alive[v]).collect();
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![vec![false; verts.len()]; verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            for a in 0..self.alphabet_size {
                if let Some(j) = self.step(v, a, &allowed).and_then(|t| pos.get(&t)) {
                    adj[i][*j] = true;
                }
            }
        }
        (verts, adj)
    }

    /// `Δ = max(k₀ − (window − 1), 0)` where `k₀` is the least exponent from
    /// which every power of the essential adjacency matrix is positive.
    /// Infinite when the matrix is not primitive or the shift is empty.
    pub fn strong_irreducibility_gap(&self) -> GluingGap {
        let (verts, adj) = self.essential_adjacency();
        let n = verts.len();
        if n == 0 {
            return GluingGap(None);
        }
        let positive = |m: &Vec<Vec<bool>>| m.iter().all(|r| r.iter().all(|&b| b));
        let mul = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
                .collect::<Vec<Vec<bool>>>()
        };
        let identity: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        // Wielandt: a primitive n×n matrix has a positive power at exponent
        // (n−1)²+1, and positivity then persists.
        let bound = (n - 1) * (n - 1) + 1;
        let mut power = identity;
        let mut first_positive = None;
        for k in 0..=bound {
            if positive(&power) {
                first_positive = Some(k);
                break;
            }
            power = mul(&power, &adj);
        }
        let Some(k0) = first_positive else {
            return GluingGap(None);
        };
        GluingGap(Some(k0.saturating_sub(self.memory())))
    }

    /// Whether `word` occurs in some point of the shift.
    pub fn is_admissible(&self, word: &[usize]) -> bool {
        self.fill(word.iter().map(|&a| Some(a)).collect::<Vec<_>>().as_slice())
            .is_some()
    }

    /// Lexicographically least completion of a word with free positions,
    /// extendable to a bi-infinite point.
    fn fill(&self, pattern: &[Option<usize>]) -> Option<Vec<usize>> {
        if pattern.iter().any(|s| s.is_some_and(|a| a >= self.alphabet_size)) {
            return None;
        }
        let alive = self.essential_vertices();
        let allowed = self.allowed_codes();
        let n = self.vertex_count();
        let len = pattern.len();
        let symbols = |i: usize| -> Vec<usize> {
            match pattern[i] {
                Some(a) => vec![a],
                None => (0..self.alphabet_size).collect(),
            }
        };
        // feasible[i][v]: from vertex v before position i the rest can be read.
        let mut feasible = vec![vec![false; n]; len + 1];
        feasible[len] = alive.clone();
        for i in (0..len).rev() {
            for v in (0..n).filter(|&v| alive[v]) {
                feasible[i][v] = symbols(i)
                    .into_iter()
                    .any(|a| self.step(v, a, &allowed).is_some_and(|t| alive[t] && feasible[i + 1][t]));
            }
        }
        // The starting vertex carries the symbols before position 0; choose
        // greedily symbol by symbol, keeping the set of consistent vertices.
        let mut current: Vec<usize> = (0..n).filter(|&v| feasible[0][v]).collect();
        if current.is_empty() {
            return None;
        }
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let choice = symbols(i).into_iter().find(|&a| {
                current
                    .iter()
                    .any(|&v| self.step(v, a, &allowed).is_some_and(|t| alive[t] && feasible[i + 1][t]))
            })?;
            out.push(choice);
            current = current
                .iter()
                .filter_map(|&v| self.step(v, choice, &allowed))
                .filter(|&t| alive[t] && feasible[i + 1][t])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
        }
        Some(out)
    }

    /// An admissible word `u·m·v` with `|m| = k`, choosing `m`
    /// lexicographically least.
    pub fn glue(&self, u: &[usize], v: &[usize], k: usize) -> Result<Vec<usize>> {
        let gap = self.strong_irreducibility_gap();
        match gap.0 {
            Some(d) if k >= d => {}
            _ => {
                return Err(Error::GapBelowThreshold {
                    gap: k,
                    threshold: gap.to_string(),
                })
            }
        }
        for w in [u, v] {
            if !self.is_admissible(w) {
                return Err(Error::NotAdmissible(w.to_vec()));
            }
        }
        let pattern: Vec<Option<usize>> = u
            .iter()
            .map(|&a| Some(a))
            .chain(std::iter::repeat_n(None, k))
            .chain(v.iter().map(|&a| Some(a)))
            .collect();
        self.fill(&pattern)
            .ok_or_else(|| Error::InvalidArgument("gluing failed although the gap is respected".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupUniverse;

    fn z() -> GroupUniverse {
        GroupUniverse::integers()
    }

    fn rule(n: u64, memory: &[i64], f: impl Fn(&[usize]) -> usize) -> CellularAutomaton {
        let mem = memory.iter().map(|&m| GroupUniverse::int(m)).collect();
        CellularAutomaton::finite_from_fn(z(), FiniteGroup::cyclic(n).unwrap(), mem, f).unwrap()
    }

    #[test]
    fn image_languages() {
        let id = rule(3, &[0], |x| x[0]);
        let a = ImageAutomaton::from_ca(&id).unwrap();
        assert!(a.is_universal());
        assert_eq!(a.word_count(4), BigUint::from(81u32));

        let dbl = rule(4, &[0], |x| 2 * x[0] % 4);
        let a = ImageAutomaton::from_ca(&dbl).unwrap();
        for n in 0..8 {
            assert_eq!(a.word_count(n), BigUint::from(2u32).pow(n as u32));
        }
        let orphan = a.orphan().unwrap();
        assert_eq!(orphan.len(), 1);
        assert_eq!(orphan[0] % 2, 1);

        let xor = rule(2, &[0, 1], |x| (x[0] + x[1]) % 2);
        let a = ImageAutomaton::from_ca(&xor).unwrap();
        assert!(a.is_universal());
        let r = Rule1d::from_ca(&xor).unwrap();
        for n in 1..=8 {
            assert!(preimage_counts(&r, n).unwrap().iter().all(|&c| c == 2));
        }
    }

    #[test]
    fn image_language_matches_enumeration() {
        let tau = rule(3, &[-1, 1], |x| (x[0] + 2 * x[1]) % 3);
        let r = Rule1d::from_ca(&tau).unwrap();
        let a = ImageAutomaton::from_ca(&tau).unwrap();
        for n in 0..6 {
            let counts = preimage_counts(&r, n).unwrap();
            let images = counts.iter().filter(|&&c| c > 0).count();
            assert_eq!(a.word_count(n), BigUint::from(images));
        }
    }

    #[test]
    fn de_bruijn_degrees() {
        let xor = rule(2, &[-1, 0, 1], |x| (x[0] + x[2]) % 2);
        let g = Rule1d::from_ca(&xor).unwrap().de_bruijn();
        assert_eq!(g.vertex_count, 4);
        assert!((0..4).all(|v| g.out_degree(v) == 2));
    }

    #[test]
    fn kernel_paths() {
        let xor = rule(2, &[0, 1], |x| (x[0] + x[1]) % 2);
        let g = Rule1d::from_ca(&xor).unwrap().de_bruijn();
        assert!(g.finite_kernel_path().is_none());
        assert_eq!(g.periodic_kernel_cycle(), Some(vec![1]));

        let dbl = rule(4, &[0], |x| 2 * x[0] % 4);
        let g = Rule1d::from_ca(&dbl).unwrap().de_bruijn();
        assert_eq!(g.finite_kernel_path(), Some(vec![2]));
    }

    #[test]
    fn gaps() {
        assert_eq!(Sft::full(2).strong_irreducibility_gap(), GluingGap(Some(0)));
        assert_eq!(Sft::golden_mean().strong_irreducibility_gap(), GluingGap(Some(1)));
        let fixed = Sft::new(2, 2, [vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(fixed.strong_irreducibility_gap(), GluingGap(None));
        let full2 = Sft::new(2, 2, [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(full2.strong_irreducibility_gap(), GluingGap(Some(0)));
    }

    #[test]
    fn gluing() {
        assert_eq!(Sft::full(2).glue(&[0, 1], &[1, 0], 0).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(Sft::golden_mean().glue(&[1], &[1], 1).unwrap(), vec![1, 0, 1]);
        assert!(matches!(
            Sft::golden_mean().glue(&[1], &[1], 0),
            Err(Error::GapBelowThreshold { .. })
        ));
        assert!(matches!(
            Sft::golden_mean().glue(&[1, 1], &[0], 3),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn gluing_over_longer_windows() {
        // No "11" and no "101": runs of zeros between ones have length ≥ 2.
        let words = (0..8usize)
            .map(|i| vec![i >> 2 & 1, i >> 1 & 1, i & 1])
            .filter(|w| !(w[0] == 1 && w[1] == 1 || w[1] == 1 && w[2] == 1 || *w == [1, 0, 1]));
        let sft = Sft::new(2, 3, words).unwrap();
        let gap = sft.strong_irreducibility_gap().0.unwrap();
        assert_eq!(gap, 2);
        for k in gap..gap + 4 {
            let w = sft.glue(&[1], &[1], k).unwrap();
            assert_eq!(w.len(), k + 2);
            assert!(sft.is_admissible(&w));
        }
        assert!(sft.glue(&[1], &[1], 1).is_err());
    }
}
