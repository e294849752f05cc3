//! Alphabets and homomorphisms between their powers.
//!
//! A finite alphabet is an explicit finite group. A symbolic alphabet models
//! a split algebraic group `D^g × Π` where `D` is a connected divisible group
//! (torus, elliptic curve or vector group) known only through its torsion
//! profile and `Π` is a finite abelian component group. Symbolic
//! homomorphisms act on `D`-coordinates through an integer matrix and on
//! components through a finite homomorphism.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{kernel_invariants, AbelianMap, IntMatrix, TorsionProfile};

/// Largest `|A|^m` for which tables are materialised.
pub const TABLE_LIMIT: usize = 1 << 22;

/// A finite group on `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    /// Invariant factors when built as `Z/n_1 × ... × Z/n_k`.
    factors: Option<Vec<u64>>,
    generators: Vec<usize>,
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FiniteGroup {
    /// `Z/n_1 × ... × Z/n_k`. Elements are mixed-radix coordinate vectors,
    /// first factor most significant; the empty list is the trivial group.
    pub fn abelian(factors: &[u64]) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::InvalidAlphabet("factor 0 is not a finite group".into()));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= 1 << 12)
            .ok_or_else(|| Error::InvalidAlphabet("alphabet too large".into()))?;
        let decode = |mut x: usize| -> Vec<u64> {
            let mut c = vec![0u64; factors.len()];
            for i in (0..factors.len()).rev() {
                c[i] = (x % factors[i] as usize) as u64;
                x /= factors[i] as usize;
            }
            c
        };
        let encode = |c: &[u64]| -> usize { c.iter().zip(factors).fold(0, |acc, (&v, &n)| acc * n as usize + v as usize) };
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let ca = decode(a);
            for b in 0..order {
                let cb = decode(b);
                let c: Vec<u64> = ca.iter().zip(&cb).zip(factors).map(|((x, y), n)| (x + y) % n).collect();
                table.push(encode(&c));
            }
        }
        let inverse = (0..order)
            .map(|a| {
                let c: Vec<u64> = decode(a).iter().zip(factors).map(|(x, n)| (n - x) % n).collect();
                encode(&c)
            })
            .collect();
        let generators = (0..factors.len())
            .filter(|&i| factors[i] > 1)
            .map(|i| {
                let mut c = vec![0u64; factors.len()];
                c[i] = 1;
                encode(&c)
            })
            .collect();
        let name = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join("×")
        };
        Ok(FiniteGroup {
            name,
            order,
            table,
            inverse,
            identity: 0,
            factors: Some(factors.to_vec()),
            generators,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::abelian(&[n])
    }

    pub fn trivial() -> Self {
        Self::abelian(&[]).expect("trivial group")
    }

    /// A group from an explicit multiplication table; the group axioms are
    /// checked exhaustively.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 || rows.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidAlphabet("table must be square and nonempty".into()));
        }
        if order > 1 << 12 {
            return Err(Error::InvalidAlphabet("alphabet too large".into()));
        }
        if rows.iter().flatten().any(|&x| x >= order) {
            return Err(Error::InvalidAlphabet("table entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::InvalidAlphabet("no identity element".into()))?;
        let inverse = rows
            .iter()
            .enumerate()
            .map(|(x, row)| {
                (0..order)
                    .find(|&y| row[y] == identity && rows[y][x] == identity)
                    .ok_or_else(|| Error::InvalidAlphabet(format!("element {x} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]] {
                        return Err(Error::InvalidAlphabet("multiplication is not associative".into()));
                    }
                }
            }
        }
        let mut g = FiniteGroup {
            name: name.into(),
            order,
            table: rows.into_iter().flatten().collect(),
            inverse,
            identity,
            factors: None,
            generators: Vec::new(),
        };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: HashSet<usize> = HashSet::from([self.identity]);
        for x in 0..self.order {
            if !span.contains(&x) {
                gens.push(x);
                span = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    /// The subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> HashSet<usize> {
        let mut span: HashSet<usize> = HashSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if span.insert(y) {
                    frontier.push(y);
                }
            }
        }
        span
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn factors(&self) -> Option<&[u64]> {
        self.factors.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        self.factors.is_some()
            || (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A generating set (unit vectors for abelian factor groups).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Coordinates of an element of a factor group.
    pub fn coords(&self, mut x: usize) -> Option<Vec<u64>> {
        let f = self.factors.as_ref()?;
        let mut c = vec![0u64; f.len()];
        for i in (0..f.len()).rev() {
            c[i] = (x % f[i] as usize) as u64;
            x /= f[i] as usize;
        }
        Some(c)
    }

    pub fn from_coords(&self, c: &[u64]) -> Option<usize> {
        let f = self.factors.as_ref()?;
        Some(c.iter().zip(f).fold(0, |acc, (&v, &n)| acc * n as usize + (v % n) as usize))
    }

    /// `|A|^m`, or `None` beyond [`TABLE_LIMIT`].
    pub fn power_size(&self, m: usize) -> Option<usize> {
        let mut s = 1usize;
        for _ in 0..m {
            s = s.checked_mul(self.order)?;
            if s > TABLE_LIMIT {
                return None;
            }
        }
        Some(s)
    }

    /// Index of a tuple in `A^m`, coordinate 0 most significant.
    pub fn encode(&self, xs: &[usize]) -> usize {
        xs.iter().fold(0, |acc, &x| acc * self.order + x)
    }

    pub fn decode(&self, mut idx: usize, m: usize) -> Vec<usize> {
        let mut out = vec![0; m];
        for i in (0..m).rev() {
            out[i] = idx % self.order;
            idx /= self.order;
        }
        out
    }

    pub fn identity_tuple(&self, m: usize) -> usize {
        self.encode(&vec![self.identity; m])
    }

    pub fn mul_tuples(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&a, &b)| self.mul(a, b)).collect()
    }
}

/// A homomorphism `A^m → A^k` of a finite group's powers stored as a table
/// indexed by encoded tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteHom {
    pub domain_arity: usize,
    pub codomain_arity: usize,
    pub table: Vec<usize>,
}

impl FiniteHom {
    /// Wraps a table after checking totality and range. The homomorphism law
    /// is checked separately by [`hom_check`].
    pub fn new(group: &FiniteGroup, domain_arity: usize, codomain_arity: usize, table: Vec<usize>) -> Result<Self> {
        let expected = group
            .power_size(domain_arity)
            .ok_or_else(|| Error::TooLarge(format!("{}^{}", group.order(), domain_arity)))?;
        if table.len() != expected {
            return Err(Error::TableNotTotal {
                expected,
                found: table.len(),
            });
        }
        let range = group
            .power_size(codomain_arity)
            .ok_or_else(|| Error::TooLarge(format!("{}^{}", group.order(), codomain_arity)))?;
        if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v >= range) {
            return Err(Error::TableEntryOutOfRange { position, value });
        }
        Ok(FiniteHom {
            domain_arity,
            codomain_arity,
            table,
        })
    }

    pub fn from_fn(
        group: &FiniteGroup,
        domain_arity: usize,
        codomain_arity: usize,
        mut f: impl FnMut(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        let size = group
            .power_size(domain_arity)
            .ok_or_else(|| Error::TooLarge(format!("{}^{}", group.order(), domain_arity)))?;
        let table = (0..size)
            .map(|i| {
                let y = f(&group.decode(i, domain_arity));
                debug_assert_eq!(y.len(), codomain_arity);
                group.encode(&y)
            })
            .collect();
        Ok(FiniteHom {
            domain_arity,
            codomain_arity,
            table,
        })
    }

    pub fn identity(group: &FiniteGroup, arity: usize) -> Result<Self> {
        Self::from_fn(group, arity, arity, |x| x.to_vec())
    }

    /// The map `A^m → A^k` sending everything to the identity.
    pub fn trivial(group: &FiniteGroup, domain_arity: usize, codomain_arity: usize) -> Result<Self> {
        let e = vec![group.identity(); codomain_arity];
        Self::from_fn(group, domain_arity, codomain_arity, |_| e.clone())
    }

    /// A linear map of a factor group given by integer blocks: block `j` is a
    /// `nf × nf` matrix giving the contribution of input coordinate `j` to a
    /// single output coordinate.
    pub fn from_blocks(group: &FiniteGroup, blocks: &[IntMatrix]) -> Result<Self> {
        let factors = group
            .factors()
            .ok_or_else(|| Error::InvalidAlphabet("linear rules need an abelian factor group".into()))?
            .to_vec();
        let nf = factors.len();
        if blocks.iter().any(|b| b.rows() != nf || b.cols() != nf) {
            return Err(Error::InvalidAlphabet(format!("rule blocks must be {nf}×{nf}")));
        }
        let m = blocks.len();
        Self::from_fn(group, m, 1, |x| {
            let mut acc = vec![BigInt::from(0); nf];
            for (j, b) in blocks.iter().enumerate() {
                let c = group.coords(x[j]).unwrap();
                for r in 0..nf {
                    for (l, &cl) in c.iter().enumerate() {
                        acc[r] += &b[(r, l)] * BigInt::from(cl);
                    }
                }
            }
            let reduced: Vec<u64> = acc
                .iter()
                .zip(&factors)
                .map(|(v, &n)| v.mod_floor(&BigInt::from(n)).to_u64().unwrap())
                .collect();
            vec![group.from_coords(&reduced).unwrap()]
        })
    }

    pub fn apply(&self, group: &FiniteGroup, x: &[usize]) -> Vec<usize> {
        group.decode(self.table[group.encode(x)], self.codomain_arity)
    }

    /// Single-output maps only.
    pub fn apply_scalar(&self, group: &FiniteGroup, x: &[usize]) -> usize {
        debug_assert_eq!(self.codomain_arity, 1);
        self.table[group.encode(x)]
    }

    pub fn is_hom(&self, group: &FiniteGroup) -> bool {
        hom_check(&self.table, group, self.domain_arity, self.codomain_arity).unwrap_or(false)
    }

    /// Exhaustive image and kernel sizes.
    pub fn image_and_kernel_orders(&self) -> (usize, usize) {
        let image: HashSet<usize> = self.table.iter().copied().collect();
        (image.len(), self.table.len() / image.len())
    }

    /// Kernel elements as encoded tuples, in index order.
    pub fn kernel(&self, group: &FiniteGroup) -> Vec<usize> {
        let e = group.identity_tuple(self.codomain_arity);
        (0..self.table.len()).filter(|&i| self.table[i] == e).collect()
    }

    /// Whether output ignores input coordinate `j`.
    pub fn ignores_coordinate(&self, group: &FiniteGroup, j: usize) -> bool {
        let e = group.identity();
        let e_out = group.identity_tuple(self.codomain_arity);
        (0..group.order()).all(|a| {
            let mut x = vec![e; self.domain_arity];
            x[j] = a;
            self.table[group.encode(&x)] == e_out
        })
    }

    /// The same map with inputs permuted/dropped: new coordinate `i` reads old
    /// coordinate `keep[i]`; dropped coordinates are set to the identity.
    pub fn project_inputs(&self, group: &FiniteGroup, keep: &[usize]) -> Result<FiniteHom> {
        let e = group.identity();
        FiniteHom::from_fn(group, keep.len(), self.codomain_arity, |x| {
            let mut full = vec![e; self.domain_arity];
            for (i, &old) in keep.iter().enumerate() {
                full[old] = x[i];
            }
            self.apply(group, &full)
        })
    }

    /// Integer matrix of a map between powers of a factor group.
    pub fn abelian_map(&self, group: &FiniteGroup) -> Option<AbelianMap> {
        let factors = group.factors()?.to_vec();
        let nf = factors.len();
        let e = group.identity();
        let mut matrix = IntMatrix::zeros(self.codomain_arity * nf, self.domain_arity * nf);
        for j in 0..self.domain_arity {
            for l in 0..nf {
                if factors[l] == 1 {
                    continue;
                }
                let mut unit = vec![0u64; nf];
                unit[l] = 1;
                let mut x = vec![e; self.domain_arity];
                x[j] = group.from_coords(&unit)?;
                let y = self.apply(group, &x);
                for (i, &yi) in y.iter().enumerate() {
                    for (r, c) in group.coords(yi)?.into_iter().enumerate() {
                        matrix[(i * nf + r, j * nf + l)] = BigInt::from(c);
                    }
                }
            }
        }
        let dom = factors.iter().copied().cycle().take(self.domain_arity * nf).collect();
        let cod = factors.iter().copied().cycle().take(self.codomain_arity * nf).collect();
        Some(AbelianMap::new(matrix, dom, cod))
    }
}

/// Whether `table`, read as a map `A^m → A^k`, satisfies
/// `f(x·y) = f(x)·f(y)` for all `x, y`.
///
/// Checked on a generating set of `A^m` together with `f(e) = e`, which is
/// equivalent for finite groups.
pub fn hom_check(table: &[usize], group: &FiniteGroup, m: usize, k: usize) -> Result<bool> {
    let f = FiniteHom::new(group, m, k, table.to_vec())?;
    let e_out = group.identity_tuple(k);
    if f.table[group.identity_tuple(m)] != e_out {
        return Ok(false);
    }
    let e = group.identity();
    for j in 0..m {
        for &s in group.generators() {
            let mut sx = vec![e; m];
            sx[j] = s;
            let fs = f.apply(group, &sx);
            for yi in 0..f.table.len() {
                let y = group.decode(yi, m);
                let lhs = f.table[group.encode(&group.mul_tuples(&sx, &y))];
                let rhs = group.encode(&group.mul_tuples(&fs, &group.decode(f.table[yi], k)));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `D^rank × Π` for a connected divisible group `D` with the given torsion
/// profile and finite abelian component group `Π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicAlphabet {
    pub kind: TorsionProfile,
    pub rank: usize,
    pub components: FiniteGroup,
}

impl SymbolicAlphabet {
    pub fn new(kind: TorsionProfile, rank: usize, components: FiniteGroup) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidAlphabet("symbolic rank must be positive".into()));
        }
        if components.factors().is_none() {
            return Err(Error::InvalidAlphabet("component group must be given by invariant factors".into()));
        }
        Ok(SymbolicAlphabet { kind, rank, components })
    }

    pub fn connected(kind: TorsionProfile, rank: usize) -> Result<Self> {
        Self::new(kind, rank, FiniteGroup::trivial())
    }
}

/// A symbolic homomorphism `(D^g × Π)^m → (D^g × Π)^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicHom {
    pub domain_arity: usize,
    pub codomain_arity: usize,
    /// `g·k × g·m` matrix on the divisible coordinates.
    pub connected: IntMatrix,
    /// Action on component tuples `Π^m → Π^k`.
    pub components: FiniteHom,
}

impl SymbolicHom {
    pub fn new(alphabet: &SymbolicAlphabet, connected: IntMatrix, components: FiniteHom) -> Result<Self> {
        let g = alphabet.rank;
        let m = components.domain_arity;
        let k = components.codomain_arity;
        if connected.rows() != g * k || connected.cols() != g * m {
            return Err(Error::InvalidAlphabet(format!(
                "connected matrix must be {}×{}, found {}×{}",
                g * k,
                g * m,
                connected.rows(),
                connected.cols()
            )));
        }
        if !components.is_hom(&alphabet.components) {
            return Err(Error::NotHomomorphism);
        }
        Ok(SymbolicHom {
            domain_arity: m,
            codomain_arity: k,
            connected,
            components,
        })
    }

    /// `g × g` block for input coordinate `j` and output coordinate `i`.
    pub fn block(&self, g: usize, i: usize, j: usize) -> IntMatrix {
        let rows: Vec<usize> = (i * g..(i + 1) * g).collect();
        let cols: Vec<usize> = (j * g..(j + 1) * g).collect();
        self.connected.select_rows(&rows).select_cols(&cols)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alphabet {
    Finite(FiniteGroup),
    Symbolic(SymbolicAlphabet),
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Finite(g) => write!(f, "{g}"),
            Alphabet::Symbolic(s) => {
                let d = match s.kind {
                    TorsionProfile::Torus => "Gm",
                    TorsionProfile::Elliptic => "E",
                    TorsionProfile::Vector => "Ga",
                };
                write!(f, "{d}^{} × {}", s.rank, s.components)
            }
        }
    }
}

impl Alphabet {
    pub fn dim(&self) -> usize {
        match self {
            Alphabet::Finite(_) => 0,
            Alphabet::Symbolic(s) => s.rank,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match self {
            Alphabet::Finite(g) => Some(g),
            Alphabet::Symbolic(_) => None,
        }
    }

    pub fn as_symbolic(&self) -> Option<&SymbolicAlphabet> {
        match self {
            Alphabet::Symbolic(s) => Some(s),
            Alphabet::Finite(_) => None,
        }
    }

    /// The group of connected components.
    pub fn pi0(&self) -> FiniteGroup {
        match self {
            Alphabet::Finite(g) => g.clone(),
            Alphabet::Symbolic(s) => s.components.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Hom {
    Finite(FiniteHom),
    Symbolic(SymbolicHom),
}

impl Hom {
    pub fn domain_arity(&self) -> usize {
        match self {
            Hom::Finite(f) => f.domain_arity,
            Hom::Symbolic(f) => f.domain_arity,
        }
    }

    pub fn codomain_arity(&self) -> usize {
        match self {
            Hom::Finite(f) => f.codomain_arity,
            Hom::Symbolic(f) => f.codomain_arity,
        }
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match (self, alphabet) {
            (Hom::Finite(f), Alphabet::Finite(g)) => {
                FiniteHom::new(g, f.domain_arity, f.codomain_arity, f.table.clone())?;
                if f.is_hom(g) {
                    Ok(())
                } else {
                    Err(Error::NotHomomorphism)
                }
            }
            (Hom::Symbolic(f), Alphabet::Symbolic(s)) => {
                SymbolicHom::new(s, f.connected.clone(), f.components.clone()).map(|_| ())
            }
            _ => Err(Error::AlphabetMismatch("homomorphism and alphabet kinds differ".into())),
        }
    }
}

/// Dimension and component data of a homomorphism's image and kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomSummary {
    pub image_dim: usize,
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub image_components: BigUint,
    pub kernel_dim: usize,
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub kernel_components: BigUint,
    pub surjective: bool,
}

/// Image and kernel invariants: exhaustive for finite alphabets, Smith normal
/// form calculus for symbolic ones.
pub fn image_and_kernel(f: &Hom, alphabet: &Alphabet) -> Result<HomSummary> {
    f.check_alphabet(alphabet)?;
    match (f, alphabet) {
        (Hom::Finite(h), Alphabet::Finite(g)) => {
            let (img, ker) = h.image_and_kernel_orders();
            let full = g.power_size(h.codomain_arity).unwrap_or(usize::MAX);
            Ok(HomSummary {
                image_dim: 0,
                image_components: BigUint::from(img),
                kernel_dim: 0,
                kernel_components: BigUint::from(ker),
                surjective: img == full,
            })
        }
        (Hom::Symbolic(h), Alphabet::Symbolic(s)) => {
            let rank = h.connected.rank();
            let inv = kernel_invariants(&h.connected, s.kind);
            let (img_pi, ker_pi) = h.components.image_and_kernel_orders();
            let full_pi = s.components.power_size(h.codomain_arity).unwrap_or(usize::MAX);
            Ok(HomSummary {
                image_dim: rank,
                image_components: BigUint::from(img_pi),
                kernel_dim: inv.dim,
                kernel_components: inv.component_order * BigUint::from(ker_pi),
                surjective: rank == s.rank * h.codomain_arity && img_pi == full_pi,
            })
        }
        _ => unreachable!("checked by check_alphabet"),
    }
}

/// The induced map on component groups.
pub fn pi0_hom(f: &Hom) -> FiniteHom {
    match f {
        Hom::Finite(h) => h.clone(),
        Hom::Symbolic(h) => h.components.clone(),
    }
}

/// `|A^m|` as a big integer, used in reports.
pub fn power_order(group: &FiniteGroup, m: usize) -> BigUint {
    BigUint::from(group.order()).pow(m as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    /// Oracle: literal pairwise check.
    fn hom_check_exhaustive(table: &[usize], g: &FiniteGroup, m: usize) -> bool {
        (0..table.len()).all(|x| {
            (0..table.len()).all(|y| {
                let xy = g.encode(&g.mul_tuples(&g.decode(x, m), &g.decode(y, m)));
                table[xy] == g.mul(table[x], table[y])
            })
        })
    }

    #[test]
    fn hom_check_examples() {
        let z4 = z(4);
        let doubling: Vec<usize> = (0..4).map(|x| (2 * x) % 4).collect();
        assert!(hom_check(&doubling, &z4, 1, 1).unwrap());

        let z2 = z(2);
        let sum: Vec<usize> = (0..4).map(|i| (i / 2 + i % 2) % 2).collect();
        assert!(hom_check(&sum, &z2, 2, 1).unwrap());

        let z3 = z(3);
        let shift: Vec<usize> = (0..3).map(|x| (x + 1) % 3).collect();
        assert!(!hom_check(&shift, &z3, 1, 1).unwrap());

        assert!(matches!(
            hom_check(&[0, 1], &z3, 1, 1),
            Err(Error::TableNotTotal { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn generator_check_agrees_with_pairwise_check() {
        let s3 = FiniteGroup::from_table(
            "S3",
            vec![
                vec![0, 1, 2, 3, 4, 5],
                vec![1, 2, 0, 4, 5, 3],
                vec![2, 0, 1, 5, 3, 4],
                vec![3, 5, 4, 0, 2, 1],
                vec![4, 3, 5, 1, 0, 2],
                vec![5, 4, 3, 2, 1, 0],
            ],
        )
        .unwrap();
        // Every self-map of S3 fixing the identity with values in {0, 3}.
        for mask in 0..32usize {
            let mut t = vec![0usize; 6];
            for (i, slot) in t.iter_mut().enumerate().skip(1) {
                *slot = if mask >> (i - 1) & 1 == 1 { 3 } else { 0 };
            }
            assert_eq!(hom_check(&t, &s3, 1, 1).unwrap(), hom_check_exhaustive(&t, &s3, 1), "{t:?}");
        }
        let z2z2 = FiniteGroup::abelian(&[2, 2]).unwrap();
        for mask in 0..256usize {
            let t: Vec<usize> = (0..16).map(|i| if i == 0 { 0 } else { (mask >> (i % 8)) & 3 }).collect();
            assert_eq!(hom_check(&t, &z2z2, 2, 1).unwrap(), hom_check_exhaustive(&t, &z2z2, 2));
        }
    }

    #[test]
    fn finite_image_and_kernel() {
        let z4 = z(4);
        let f = Hom::Finite(FiniteHom::from_fn(&z4, 1, 1, |x| vec![(2 * x[0]) % 4]).unwrap());
        let s = image_and_kernel(&f, &Alphabet::Finite(z4)).unwrap();
        assert_eq!(s.image_components, BigUint::from(2u32));
        assert_eq!(s.kernel_components, BigUint::from(2u32));
        assert!(!s.surjective);
    }

    #[test]
    fn symbolic_image_and_kernel() {
        let e = SymbolicAlphabet::connected(TorsionProfile::Elliptic, 1).unwrap();
        let pi = FiniteHom::identity(&e.components, 1).unwrap();
        let f = Hom::Symbolic(SymbolicHom::new(&e, IntMatrix::from_rows(&[vec![2i64]]), pi).unwrap());
        let s = image_and_kernel(&f, &Alphabet::Symbolic(e)).unwrap();
        assert!(s.surjective);
        assert_eq!(s.kernel_dim, 0);
        assert_eq!(s.kernel_components, BigUint::from(4u32));

        let t = SymbolicAlphabet::connected(TorsionProfile::Torus, 1).unwrap();
        let pi = FiniteHom::trivial(&t.components, 2, 1).unwrap();
        let f = Hom::Symbolic(SymbolicHom::new(&t, IntMatrix::from_rows(&[vec![1i64, 1]]), pi).unwrap());
        let s = image_and_kernel(&f, &Alphabet::Symbolic(t)).unwrap();
        assert!(s.surjective);
        assert_eq!(s.kernel_dim, 1);
        assert_eq!(s.kernel_components, BigUint::from(1u32));
        assert_eq!(s.image_dim + s.kernel_dim, 2);
    }

    #[test]
    fn pi0_of_alphabets() {
        assert_eq!(Alphabet::Finite(z(4)).pi0(), z(4));
        let t = SymbolicAlphabet::connected(TorsionProfile::Torus, 2).unwrap();
        assert_eq!(Alphabet::Symbolic(t).pi0().order(), 1);
        let e = SymbolicAlphabet::new(TorsionProfile::Elliptic, 1, z(2)).unwrap();
        assert_eq!(Alphabet::Symbolic(e).pi0(), z(2));
    }

    #[test]
    fn pi0_of_homs() {
        let z4 = z(4);
        let d = FiniteHom::from_fn(&z4, 1, 1, |x| vec![(2 * x[0]) % 4]).unwrap();
        assert_eq!(pi0_hom(&Hom::Finite(d.clone())), d);

        let t = SymbolicAlphabet::new(TorsionProfile::Torus, 1, z(2)).unwrap();
        let id = FiniteHom::identity(&t.components, 1).unwrap();
        let f = SymbolicHom::new(&t, IntMatrix::from_rows(&[vec![3i64]]), id.clone()).unwrap();
        assert_eq!(pi0_hom(&Hom::Symbolic(f)), id);
    }

    #[test]
    fn component_compatibility_is_exhaustive_for_finite_alphabets() {
        // Components of a finite group are points, so i ∘ f = f₀ ∘ i reduces
        // to f = pi0_hom(f) pointwise.
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let f = FiniteHom::from_fn(&g, 2, 1, |x| vec![g.mul(x[0], x[1])]).unwrap();
        let f0 = pi0_hom(&Hom::Finite(f.clone()));
        for i in 0..f.table.len() {
            let x = g.decode(i, 2);
            assert_eq!(f.apply(&g, &x), f0.apply(&g, &x));
        }
    }

    #[test]
    fn abelian_matrix_reproduces_table() {
        let g = FiniteGroup::abelian(&[2, 4]).unwrap();
        let blocks = vec![
            IntMatrix::from_rows(&[vec![1i64, 0], vec![2, 3]]),
            IntMatrix::from_rows(&[vec![0i64, 1], vec![0, 2]]),
        ];
        let f = FiniteHom::from_blocks(&g, &blocks).unwrap();
        assert!(f.is_hom(&g));
        let a = f.abelian_map(&g).unwrap();
        for i in 0..f.table.len() {
            let x = g.decode(i, 2);
            let coords: Vec<u64> = x.iter().flat_map(|&v| g.coords(v).unwrap()).collect();
            let y = a.apply(&coords);
            assert_eq!(g.from_coords(&y).unwrap(), f.table[i]);
        }
    }

    #[test]
    fn invalid_tables() {
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 0], vec![0, 0]]).is_err());
        let z3 = z(3);
        assert!(matches!(
            FiniteHom::new(&z3, 1, 1, vec![0, 1, 5]),
            Err(Error::TableEntryOutOfRange { position: 2, value: 5 })
        ));
    }
}
