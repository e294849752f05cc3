//! Exact integer linear algebra: Smith normal form, rank, integer kernels and
//! the finite abelian image/kernel computations built on them.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            write!(f, "{}[{}]", if r > 0 { ", " } else { "" }, row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have the
    /// same length; an empty slice gives the 0×0 matrix.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|x| x.clone().into()).collect(),
        }
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].to_i64()).collect())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| &self[(r, c)] * &v[c]).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    /// The submatrix on the given rows and all columns.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out[(i, c)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// The submatrix on the given columns and all rows.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            self[(dst, c)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    pub fn smith_normal_form(&self) -> SmithDecomposition {
        smith_normal_form(self)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }
}

/// `U · B · V = diag(d_1, ..., d_k, 0, ...)` with `d_1 | d_2 | ... | d_k`,
/// all `d_i > 0`, and `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// The diagonal matrix `U · B · V` described by the divisors.
    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, x) in self.divisors.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

/// Smith normal form by alternating row and column Euclidean reduction with
/// a minimal-absolute-value pivot.
pub fn smith_normal_form(b: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (b.rows, b.cols);
    let mut a = b.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut divisors = Vec::new();

    for t in 0..m.min(n) {
        // Pivot: smallest nonzero |entry| in the trailing block.
        let Some((pr, pc)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);

        loop {
            let mut changed = false;
            for i in t + 1..m {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !a[(i, t)].is_zero() {
                    changed = true;
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !a[(t, j)].is_zero() {
                    changed = true;
                }
            }
            if changed {
                // A nonzero remainder is smaller than the pivot; move it up.
                let (pr, pc) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pr);
                u.swap_rows(t, pr);
                a.swap_cols(t, pc);
                v.swap_cols(t, pc);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let pivot = a[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        divisors.push(a[(t, t)].clone());
    }
    SmithDecomposition { u, v, divisors }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs = a[(t, t)].abs();
    let mut consider = |i: usize, j: usize, best: &mut (usize, usize)| {
        let x = a[(i, j)].abs();
        if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
            best_abs = x;
            *best = (i, j);
        }
    };
    for i in t..a.rows {
        consider(i, t, &mut best);
    }
    for j in t..a.cols {
        consider(t, j, &mut best);
    }
    best
}

/// Basis of the integer kernel `{x ∈ Z^cols : B x = 0}` as the columns of the
/// returned `cols × (cols − rank)` matrix.
pub fn kernel_basis(b: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(b);
    let free: Vec<usize> = (snf.rank()..b.cols).collect();
    snf.v.select_cols(&free)
}

/// Size of the torsion subgroup `D[n]` of one copy of a divisible group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionProfile {
    /// `t(n) = n`, the multiplicative group.
    Torus,
    /// `t(n) = n²`, an elliptic curve.
    Elliptic,
    /// `t(n) = 1`, the additive group in characteristic zero.
    Vector,
}

impl TorsionProfile {
    pub fn torsion(self, n: &BigInt) -> BigUint {
        let n = n.magnitude().clone();
        match self {
            TorsionProfile::Torus => n,
            TorsionProfile::Elliptic => &n * &n,
            TorsionProfile::Vector => BigUint::one(),
        }
    }
}

/// Dimension and number of connected components of the kernel of the map
/// `D^cols → D^rows` induced by `B` on a divisible group with the given
/// torsion profile.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct KernelInvariants {
    pub dim: usize,
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub component_order: BigUint,
}

pub fn kernel_invariants(b: &IntMatrix, profile: TorsionProfile) -> KernelInvariants {
    let snf = smith_normal_form(b);
    let component_order = snf
        .divisors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| profile.torsion(d))
        .product();
    KernelInvariants {
        dim: b.cols - snf.rank(),
        component_order,
    }
}

/// A homomorphism `⊕_c Z/n_c → ⊕_r Z/m_r` of finite abelian groups given by
/// an integer matrix acting on coordinate vectors.
///
/// Each coordinate uses the representative range `0..modulus`.
#[derive(Debug, Clone)]
pub struct AbelianMap {
    pub matrix: IntMatrix,
    pub domain_moduli: Vec<u64>,
    pub codomain_moduli: Vec<u64>,
}

impl AbelianMap {
    pub fn new(matrix: IntMatrix, domain_moduli: Vec<u64>, codomain_moduli: Vec<u64>) -> Self {
        assert_eq!(matrix.rows(), codomain_moduli.len());
        assert_eq!(matrix.cols(), domain_moduli.len());
        AbelianMap {
            matrix,
            domain_moduli,
            codomain_moduli,
        }
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.matrix
            .mul_vec(&xs)
            .into_iter()
            .zip(&self.codomain_moduli)
            .map(|(y, &m)| y.mod_floor(&BigInt::from(m)).to_u64().unwrap())
            .collect()
    }

    /// `[M | diag(codomain moduli)]`, whose integer column span is the
    /// preimage in `Z^rows` of the image subgroup.
    fn relation_matrix(&self) -> IntMatrix {
        let moduli: Vec<BigInt> = self.codomain_moduli.iter().map(|&m| BigInt::from(m)).collect();
        self.matrix.hstack(&IntMatrix::diagonal(&moduli))
    }

    pub fn codomain_order(&self) -> BigUint {
        self.codomain_moduli.iter().map(|&m| BigUint::from(m)).product()
    }

    pub fn domain_order(&self) -> BigUint {
        self.domain_moduli.iter().map(|&m| BigUint::from(m)).product()
    }

    /// Order of the image subgroup.
    pub fn image_order(&self) -> BigUint {
        let snf = smith_normal_form(&self.relation_matrix());
        let coker: BigUint = snf.divisors.iter().map(|d| d.magnitude().clone()).product();
        self.codomain_order() / coker
    }

    pub fn kernel_order(&self) -> BigUint {
        self.domain_order() / self.image_order()
    }

    pub fn is_surjective(&self) -> bool {
        smith_normal_form(&self.relation_matrix())
            .divisors
            .iter()
            .all(One::is_one)
    }

    /// Membership of `y` in the image.
    pub fn image_contains(&self, y: &[u64]) -> bool {
        let snf = smith_normal_form(&self.relation_matrix());
        let ys: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
        let uy = snf.u.mul_vec(&ys);
        uy.iter().enumerate().all(|(i, val)| match snf.divisors.get(i) {
            Some(d) => val.is_multiple_of(d),
            None => val.is_zero(),
        })
    }

    /// Generators of the kernel subgroup, as reduced coordinate vectors,
    /// nonzero ones only. Empty iff the kernel is trivial.
    pub fn kernel_generators(&self) -> Vec<Vec<u64>> {
        let rel = self.relation_matrix();
        let basis = kernel_basis(&rel);
        let mut gens = Vec::new();
        for j in 0..basis.cols() {
            let v: Vec<u64> = (0..self.matrix.cols())
                .map(|c| {
                    basis[(c, j)]
                        .mod_floor(&BigInt::from(self.domain_moduli[c]))
                        .to_u64()
                        .unwrap()
                })
                .collect();
            if v.iter().any(|&x| x != 0) {
                gens.push(v);
            }
        }
        gens
    }

    /// The first standard basis vector of the codomain (coordinate order)
    /// that is not in the image, if the map is not surjective.
    pub fn missing_basis_vector(&self) -> Option<Vec<u64>> {
        (0..self.codomain_moduli.len())
            .filter(|&i| self.codomain_moduli[i] > 1)
            .map(|i| {
                let mut e = vec![0u64; self.codomain_moduli.len()];
                e[i] = 1;
                e
            })
            .find(|e| !self.image_contains(e))
    }
}

/// Signed big integer from a machine integer; handy in tests and builders.
pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(rows))
            .divisors
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn worked_divisors() {
        assert_eq!(divisors(&[vec![1]]), [1]);
        assert_eq!(divisors(&[vec![2, 4], vec![6, 8]]), [2, 4]);
        assert_eq!(divisors(&[vec![1, 2], vec![2, 4]]), [1]);
        assert_eq!(divisors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(divisors(&[vec![2, 0], vec![0, 3]]), [1, 6]);
    }

    #[test]
    fn ranks() {
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(IntMatrix::identity(5).rank(), 5);
        assert_eq!(IntMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]).rank(), 2);
    }

    #[test]
    fn kernel_invariant_examples() {
        let b = IntMatrix::from_rows(&[vec![2i64]]);
        let k = kernel_invariants(&b, TorsionProfile::Elliptic);
        assert_eq!((k.dim, k.component_order), (0, BigUint::from(4u32)));
        let k = kernel_invariants(&b, TorsionProfile::Torus);
        assert_eq!((k.dim, k.component_order), (0, BigUint::from(2u32)));
        let k = kernel_invariants(&b, TorsionProfile::Vector);
        assert_eq!((k.dim, k.component_order), (0, BigUint::one()));
        let k = kernel_invariants(&IntMatrix::from_rows(&[vec![1i64, 1]]), TorsionProfile::Torus);
        assert_eq!((k.dim, k.component_order), (1, BigUint::one()));
    }

    #[test]
    fn determinant() {
        assert_eq!(IntMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]).det(), big(-8));
        assert_eq!(IntMatrix::from_rows(&[vec![0i64, 1], vec![1, 0]]).det(), big(-1));
        assert_eq!(IntMatrix::zeros(0, 0).det(), big(1));
    }

    #[test]
    fn kernel_basis_is_annihilated() {
        let b = IntMatrix::from_rows(&[vec![1i64, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&b);
        assert_eq!(k.cols(), 2);
        assert!(b.mul(&k).is_zero());
    }

    #[test]
    fn abelian_doubling_on_z4() {
        let f = AbelianMap::new(IntMatrix::from_rows(&[vec![2i64]]), vec![4], vec![4]);
        assert_eq!(f.image_order(), BigUint::from(2u32));
        assert_eq!(f.kernel_order(), BigUint::from(2u32));
        assert!(!f.is_surjective());
        assert_eq!(f.kernel_generators(), vec![vec![2]]);
        assert_eq!(f.missing_basis_vector(), Some(vec![1]));
        assert!(f.image_contains(&[2]));
        assert!(!f.image_contains(&[3]));
    }

    #[test]
    fn abelian_sum_map_is_surjective() {
        let f = AbelianMap::new(IntMatrix::from_rows(&[vec![1i64, 1]]), vec![2, 2], vec![2]);
        assert!(f.is_surjective());
        assert_eq!(f.kernel_order(), BigUint::from(2u32));
        assert_eq!(f.apply(&[1, 1]), vec![0]);
    }
}
