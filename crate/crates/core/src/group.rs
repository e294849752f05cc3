//! Finitely generated universes: integer lattices, explicit finite groups and
//! free groups, with word-metric balls, Cayley ball graphs and Følner boxes.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sofic::LabeledGraph;

/// Canonical form of a group element.
///
/// Lattice elements are integer vectors, free-group elements are freely
/// reduced words over the letters `±1..=±rank`, and finite-group elements
/// are indices into the multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Vector(Vec<i64>),
    Word(Vec<i32>),
    Index(usize),
}

fn letter_key(l: i32) -> (i32, bool) {
    (l.abs(), l < 0)
}

impl Ord for GroupElement {
    /// Lexicographic on vectors, shortlex on words (a < a⁻¹ < b < b⁻¹ ...),
    /// numeric on finite indices.
    fn cmp(&self, other: &Self) -> Ordering {
        use GroupElement::*;
        match (self, other) {
            (Vector(a), Vector(b)) => a.cmp(b),
            (Word(a), Word(b)) => a.len().cmp(&b.len()).then_with(|| {
                a.iter()
                    .map(|&l| letter_key(l))
                    .cmp(b.iter().map(|&l| letter_key(l)))
            }),
            (Index(a), Index(b)) => a.cmp(b),
            (Vector(_), _) => Ordering::Less,
            (_, Vector(_)) => Ordering::Greater,
            (Word(_), _) => Ordering::Less,
            (_, Word(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Vector(v) if v.len() == 1 => write!(f, "{}", v[0]),
            GroupElement::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Word(w) if w.is_empty() => write!(f, "1"),
            GroupElement::Word(w) => write!(f, "{}", word_to_string(w)),
            GroupElement::Index(i) => write!(f, "#{i}"),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupElement::Vector(v) if v.len() == 1 => s.serialize_i64(v[0]),
            GroupElement::Vector(v) => v.serialize(s),
            GroupElement::Word(w) => s.serialize_str(&word_to_string(w)),
            GroupElement::Index(i) => s.serialize_u64(*i as u64),
        }
    }
}

/// Letters `a, b, c, ...` for generators and upper case for their inverses.
pub fn word_to_string(w: &[i32]) -> String {
    w.iter()
        .map(|&l| {
            let c = (b'a' + (l.unsigned_abs() as u8 - 1)) as char;
            if l < 0 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

/// Parses the inverse of [`word_to_string`]; `"1"` and `""` are the identity.
pub fn parse_word(s: &str) -> Option<Vec<i32>> {
    if s == "1" {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    for c in s.chars() {
        if !c.is_ascii_alphabetic() {
            return None;
        }
        let idx = (c.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
        out.push(if c.is_ascii_uppercase() { -idx } else { idx });
    }
    Some(free_reduce(out))
}

fn free_reduce(word: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteUniverse {
    pub name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
}

impl FiniteUniverse {
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidGroup("table must be square and nonempty".into()));
        }
        if table.iter().flatten().any(|&x| x >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for x in 0..order {
            inverse[x] = (0..order)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteUniverse {
            name: name.into(),
            order,
            table: table.into_iter().flatten().collect(),
            inverse,
            identity,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z/{n}"), table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }
}

/// The shape of a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniverseKind {
    /// `Z^dim`; `dim = 1` is the integers.
    Lattice { dim: usize },
    Finite(Arc<FiniteUniverse>),
    Free { rank: usize },
}

/// A finitely generated group with a fixed symmetric generating list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupUniverse {
    kind: UniverseKind,
    generators: Vec<GroupElement>,
}

impl fmt::Display for GroupUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            UniverseKind::Lattice { dim: 1 } => write!(f, "Z"),
            UniverseKind::Lattice { dim } => write!(f, "Z^{dim}"),
            UniverseKind::Finite(g) => write!(f, "{}", g.name),
            UniverseKind::Free { rank } => write!(f, "F_{rank}"),
        }
    }
}

impl GroupUniverse {
    /// `Z` with generators `[1, -1]`.
    pub fn integers() -> Self {
        Self::lattice(1)
    }

    /// `Z^d` with generators `e_1, -e_1, e_2, -e_2, ...`.
    pub fn lattice(dim: usize) -> Self {
        let mut generators = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for sign in [1, -1] {
                let mut v = vec![0; dim];
                v[i] = sign;
                generators.push(GroupElement::Vector(v));
            }
        }
        GroupUniverse {
            kind: UniverseKind::Lattice { dim },
            generators,
        }
    }

    /// `Z/n` as a finite universe with generators `[1, n-1]`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let g = FiniteUniverse::cyclic(n)?;
        let gens = if n <= 2 {
            vec![GroupElement::Index(1 % n)]
        } else {
            vec![GroupElement::Index(1), GroupElement::Index(n - 1)]
        };
        Self::finite(g, gens)
    }

    /// A finite universe with a caller-supplied generating list, which must be
    /// closed under inverses and generate the group.
    pub fn finite(group: FiniteUniverse, generators: Vec<GroupElement>) -> Result<Self> {
        let u = GroupUniverse {
            kind: UniverseKind::Finite(Arc::new(group)),
            generators,
        };
        u.validate_generators()?;
        let g = u.as_finite().unwrap();
        if u.ball(g.order).len() != g.order {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        Ok(u)
    }

    /// Free group of the given rank with generators `a, A, b, B, ...`.
    pub fn free(rank: usize) -> Self {
        let mut generators = Vec::with_capacity(2 * rank);
        for i in 1..=rank as i32 {
            generators.push(GroupElement::Word(vec![i]));
            generators.push(GroupElement::Word(vec![-i]));
        }
        GroupUniverse {
            kind: UniverseKind::Free { rank },
            generators,
        }
    }

    /// Replace the generating list of a lattice or free universe. The list
    /// must be symmetric.
    pub fn with_generators(mut self, generators: Vec<GroupElement>) -> Result<Self> {
        self.generators = generators;
        self.validate_generators()?;
        Ok(self)
    }

    fn validate_generators(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidGroup("empty generating set".into()));
        }
        for s in &self.generators {
            self.check(s)?;
            if !self.generators.contains(&self.inverse(s)) {
                return Err(Error::InvalidGroup(format!("generating set is not symmetric at {s}")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &UniverseKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn as_finite(&self) -> Option<&FiniteUniverse> {
        match &self.kind {
            UniverseKind::Finite(g) => Some(g),
            _ => None,
        }
    }

    /// Dimension of `Z^d`, or `None` for other universes.
    pub fn lattice_dim(&self) -> Option<usize> {
        match self.kind {
            UniverseKind::Lattice { dim } => Some(dim),
            _ => None,
        }
    }

    pub fn is_integers(&self) -> bool {
        self.lattice_dim() == Some(1)
    }

    /// Lattices, finite groups and the rank-one free group.
    pub fn is_amenable(&self) -> bool {
        !matches!(self.kind, UniverseKind::Free { rank } if rank >= 2)
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            UniverseKind::Lattice { dim } => GroupElement::Vector(vec![0; *dim]),
            UniverseKind::Finite(g) => GroupElement::Index(g.identity),
            UniverseKind::Free { .. } => GroupElement::Word(Vec::new()),
        }
    }

    /// Shorthand for the integer `n` in `Z`.
    pub fn int(n: i64) -> GroupElement {
        GroupElement::Vector(vec![n])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.kind, g) {
            (UniverseKind::Lattice { dim }, GroupElement::Vector(v)) => v.len() == *dim,
            (UniverseKind::Finite(f), GroupElement::Index(i)) => *i < f.order,
            (UniverseKind::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                element: format!("{g:?}"),
                universe: self.to_string(),
            })
        }
    }

    /// Product in canonical form.
    pub fn try_mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Product of two elements already known to belong to this universe.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (&self.kind, a, b) {
            (UniverseKind::Lattice { .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (UniverseKind::Finite(f), GroupElement::Index(x), GroupElement::Index(y)) => {
                GroupElement::Index(f.mul(*x, *y))
            }
            (UniverseKind::Free { .. }, GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut w = x.clone();
                for &l in y {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                GroupElement::Word(w)
            }
            _ => panic!("mul: elements {a:?} and {b:?} do not belong to {self}"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match (&self.kind, a) {
            (UniverseKind::Lattice { .. }, GroupElement::Vector(x)) => {
                GroupElement::Vector(x.iter().map(|p| -p).collect())
            }
            (UniverseKind::Finite(f), GroupElement::Index(x)) => GroupElement::Index(f.inverse[*x]),
            (UniverseKind::Free { .. }, GroupElement::Word(x)) => {
                GroupElement::Word(x.iter().rev().map(|l| -l).collect())
            }
            _ => panic!("inverse: element {a:?} does not belong to {self}"),
        }
    }

    /// `B_S(r)`: elements at word distance at most `r` from the identity, in
    /// canonical order.
    pub fn ball(&self, radius: usize) -> Ball {
        let mut dist: HashMap<GroupElement, usize> = HashMap::new();
        let id = self.identity();
        dist.insert(id.clone(), 0);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let d = dist[&g];
            if d == radius {
                continue;
            }
            for s in &self.generators {
                let h = self.mul(&g, s);
                if !dist.contains_key(&h) {
                    dist.insert(h.clone(), d + 1);
                    queue.push_back(h);
                }
            }
        }
        let mut elements: Vec<GroupElement> = dist.keys().cloned().collect();
        elements.sort();
        let distance = elements.iter().map(|g| dist[g]).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ball {
            radius,
            elements,
            index,
            distance,
        }
    }

    /// The Cayley graph restricted to `B_S(r)`: edges `(g, s, gs)` whenever
    /// both endpoints lie in the ball. Vertices are ball positions and labels
    /// are generator indices.
    pub fn cayley_ball_graph(&self, radius: usize) -> LabeledGraph {
        let ball = self.ball(radius);
        let mut edges = Vec::new();
        for (i, g) in ball.elements.iter().enumerate() {
            for (s_idx, s) in self.generators.iter().enumerate() {
                if let Some(j) = ball.position(&self.mul(g, s)) {
                    edges.push((i, s_idx, j));
                }
            }
        }
        LabeledGraph::new(ball.len(), self.generators.len(), edges)
            .expect("Cayley graph edges are within range")
    }

    /// The `i`-th set of the fixed Følner sequence: `[0, 2^i)^d` on lattices,
    /// `{a^k : 0 <= k < 2^i}` on the rank-one free group, and the whole group
    /// for finite universes.
    pub fn folner_box(&self, i: u32) -> Result<FolnerBox> {
        let side = 1usize
            .checked_shl(i)
            .filter(|s| *s <= 1 << 24)
            .ok_or_else(|| Error::InvalidArgument(format!("Følner index {i} too large")))?;
        let elements = match &self.kind {
            UniverseKind::Lattice { dim } => {
                let total = side
                    .checked_pow(*dim as u32)
                    .filter(|t| *t <= 1 << 24)
                    .ok_or_else(|| Error::InvalidArgument(format!("Følner index {i} too large")))?;
                (0..total)
                    .map(|mut k| {
                        let mut v = vec![0i64; *dim];
                        for c in (0..*dim).rev() {
                            v[c] = (k % side) as i64;
                            k /= side;
                        }
                        GroupElement::Vector(v)
                    })
                    .collect()
            }
            UniverseKind::Finite(f) => (0..f.order).map(GroupElement::Index).collect(),
            UniverseKind::Free { rank: 1 } => (0..side).map(|k| GroupElement::Word(vec![1; k])).collect(),
            UniverseKind::Free { .. } => return Err(Error::NotAmenable(self.to_string())),
        };
        Ok(FolnerBox { index: i, elements })
    }
}

/// A word-metric ball with an element → position index.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: usize,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    distance: Vec<usize>,
}

impl Ball {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Word length of the element at position `i`.
    pub fn distance(&self, i: usize) -> usize {
        self.distance[i]
    }

    /// Positions sorted by distance, then canonically.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.distance[i], i));
        order
    }

    /// A deterministic shortest-path tree: for each non-identity position, its
    /// parent position and the generator index `s` with `parent * s = element`.
    pub fn spanning_tree(&self, universe: &GroupUniverse) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.len()];
        for q in self.bfs_order() {
            for (s_idx, s) in universe.generators().iter().enumerate() {
                if let Some(p) = self.position(&universe.mul(&self.elements[q], s)) {
                    if self.distance[p] == self.distance[q] + 1 && parent[p].is_none() {
                        parent[p] = Some((q, s_idx));
                    }
                }
            }
        }
        parent
    }
}

/// One member of the Følner sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerBox {
    pub index: u32,
    pub elements: Vec<GroupElement>,
}

impl FolnerBox {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `(|F \ Fg|, |F|)`.
    pub fn boundary_ratio(&self, universe: &GroupUniverse, g: &GroupElement) -> (usize, usize) {
        let translated: std::collections::HashSet<GroupElement> =
            self.elements.iter().map(|f| universe.mul(f, g)).collect();
        let outside = self.elements.iter().filter(|f| !translated.contains(*f)).count();
        (outside, self.elements.len())
    }
}
