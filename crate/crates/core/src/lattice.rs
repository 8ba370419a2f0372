//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Dense row-major
//! storage is plenty for the matrix sizes that show up in fan computations
//! (a few dozen rows at most).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns<C: AsRef<[i64]>>(rows: usize, columns: &[C]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Multiplies a column vector of machine integers.
    pub fn apply(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, &b)| a * b).sum())
            .collect()
    }

    /// Converts to machine integers, failing if any entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>, Error> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            for i in rank + 1..a.rows {
                for j in col + 1..a.cols {
                    let v = (&a[(i, j)] * &a[(rank, col)] - &a[(i, col)] * &a[(rank, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, col)] = BigInt::zero();
            }
            prev = a[(rank, col)].clone();
            rank += 1;
        }
        rank
    }

    /// Inverse of a unimodular matrix, `None` if the matrix is not invertible over ℤ.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if !self.is_square() {
            return None;
        }
        let inv = rational_inverse(self)?;
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &inv[i][j];
                if !x.is_integer() {
                    return None;
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Some(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

fn rational_inverse(a: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = a.rows;
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        let piv = m[k][k].clone();
        for x in m[k].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in 0..2 * n {
                    let v = &m[k][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `a · x = b` for square invertible `a` over ℚ.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows, b.len());
    let inv = rational_inverse(a)?;
    Some(
        inv.iter()
            .map(|row| {
                row.iter().zip(b).map(|(x, y)| x * BigRational::from_integer(y.clone())).sum()
            })
            .collect(),
    )
}

/// Smith normal form `A = U · S · V` together with the inverse transforms.
///
/// `left · A · right = S` where `left = U⁻¹` and `right = V⁻¹`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `S`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct SnfState {
    a: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.left.add_row_multiple(dst, src, k);
        self.left_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.right.add_col_multiple(dst, src, k);
        self.right_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }

    /// Smallest nonzero |entry| in the trailing block, first in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Computes the Smith normal form of `a`.
///
/// Pivots are chosen as the smallest nonzero absolute value, ties broken by
/// row-major position, so the decomposition is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut st = SnfState {
        a: a.clone(),
        left: IntMatrix::identity(rows),
        left_inv: IntMatrix::identity(rows),
        right: IntMatrix::identity(cols),
        right_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = st.pivot(t) {
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);
            let p = st.a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if st.a[(i, t)].is_zero() {
                    continue;
                }
                let q = st.a[(i, t)].div_floor(&p);
                st.add_row(i, t, &-q);
                dirty |= !st.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if st.a[(t, j)].is_zero() {
                    continue;
                }
                let q = st.a[(t, j)].div_floor(&p);
                st.add_col(j, t, &-q);
                dirty |= !st.a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility on the remaining block.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !st.a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a[(t, t)].is_negative() {
            st.negate_row(t);
        }
    }
    SmithDecomposition { u: st.left_inv, s: st.a, v: st.right_inv, left: st.left, right: st.right }
}

/// Basis (as columns) of the saturated integer kernel `{x ∈ ℤⁿ : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let mut k = IntMatrix::zeros(a.cols, a.cols - r);
    for j in r..a.cols {
        for i in 0..a.cols {
            k[(i, j - r)] = snf.right[(i, j)].clone();
        }
    }
    k
}

/// A vector of exact rationals. Fractions are always kept reduced with
/// positive denominators (guaranteed by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn dot(&self, normal: &[BigRational]) -> BigRational {
        self.0.iter().zip(normal).map(|(x, a)| x * a).sum()
    }
}

/// `⟨x, normal⟩ ≥ bound`, or `> bound` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub normal: Vec<BigRational>,
    pub bound: BigRational,
    pub strict: bool,
}

impl LinearConstraint {
    pub fn new(normal: Vec<BigRational>, bound: BigRational, strict: bool) -> Self {
        LinearConstraint { normal, bound, strict }
    }

    /// Integer-coefficient convenience constructor.
    pub fn integral(normal: &[i64], bound: i64, strict: bool) -> Self {
        LinearConstraint {
            normal: normal.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
            bound: BigRational::from_integer(bound.into()),
            strict,
        }
    }

    pub fn is_satisfied(&self, x: &RationalVector) -> bool {
        let v = x.dot(&self.normal);
        if self.strict {
            v > self.bound
        } else {
            v >= self.bound
        }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.normal.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in self.normal.iter_mut() {
                *x /= &lead;
            }
            self.bound /= &lead;
        }
        self
    }
}

/// Drops exact duplicates and keeps only the tightest of parallel constraints.
fn prune(constraints: Vec<LinearConstraint>) -> Vec<LinearConstraint> {
    let mut out: Vec<LinearConstraint> = Vec::with_capacity(constraints.len());
    for c in constraints.into_iter().map(LinearConstraint::normalized) {
        match out.iter_mut().find(|o| o.normal == c.normal) {
            Some(o) => {
                if c.bound > o.bound || (c.bound == o.bound && c.strict) {
                    *o = c;
                }
            }
            None => out.push(c),
        }
    }
    out
}

/// Picks a point of the (possibly half-open) interval described by
/// `lower`/`upper` bounds; each bound carries its strictness.
fn pick_in_interval(
    lower: Option<(BigRational, bool)>,
    upper: Option<(BigRational, bool)>,
) -> Option<BigRational> {
    let one = BigRational::one();
    match (lower, upper) {
        (None, None) => Some(BigRational::zero()),
        (Some((lo, false)), None) => Some(lo),
        (Some((lo, true)), None) => Some(lo + one),
        (None, Some((hi, false))) => Some(hi),
        (None, Some((hi, true))) => Some(hi - one),
        (Some((lo, ls)), Some((hi, hs))) => {
            if lo > hi || (lo == hi && (ls || hs)) {
                None
            } else if !ls {
                Some(lo)
            } else if !hs {
                Some(hi)
            } else {
                Some((lo + hi) / BigRational::from_integer(2.into()))
            }
        }
    }
}

/// Finds a rational point satisfying every constraint, or `None` if the
/// system is infeasible.
///
/// Exact Fourier–Motzkin elimination, eliminating variables in ascending
/// index order, followed by back-substitution. Deterministic for a fixed input.
pub fn rational_feasible(constraints: &[LinearConstraint]) -> Result<Option<RationalVector>, Error> {
    let Some(dim) = constraints.first().map(|c| c.normal.len()) else {
        return Ok(Some(RationalVector(Vec::new())));
    };
    if constraints.iter().any(|c| c.normal.len() != dim) {
        return Err(Error::DimensionMismatch);
    }
    // stages[k] holds the constraints that are live when x_k is eliminated.
    let mut stages: Vec<Vec<LinearConstraint>> = Vec::with_capacity(dim);
    let mut current = prune(constraints.to_vec());
    for k in 0..dim {
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in &current {
            if c.normal[k].is_positive() {
                pos.push(c);
            } else if c.normal[k].is_negative() {
                neg.push(c);
            } else {
                next.push(c.clone());
            }
        }
        for p in &pos {
            for q in &neg {
                let (pk, qk) = (&p.normal[k], -&q.normal[k]);
                let normal: Vec<BigRational> =
                    p.normal.iter().zip(&q.normal).map(|(a, b)| a / pk + b / &qk).collect();
                let bound = &p.bound / pk + &q.bound / &qk;
                next.push(LinearConstraint { normal, bound, strict: p.strict || q.strict });
            }
        }
        stages.push(current);
        current = prune(next);
        // Constant constraints can be decided immediately.
        let mut kept = Vec::with_capacity(current.len());
        for c in current {
            if c.normal.iter().all(Zero::is_zero) {
                let ok = if c.strict { BigRational::zero() > c.bound } else { BigRational::zero() >= c.bound };
                if !ok {
                    return Ok(None);
                }
            } else {
                kept.push(c);
            }
        }
        current = kept;
    }
    let mut x = vec![BigRational::zero(); dim];
    for k in (0..dim).rev() {
        let mut lower: Option<(BigRational, bool)> = None;
        let mut upper: Option<(BigRational, bool)> = None;
        for c in &stages[k] {
            let a = &c.normal[k];
            if a.is_zero() {
                continue;
            }
            let rest: BigRational =
                (k + 1..dim).map(|j| &c.normal[j] * &x[j]).sum();
            let b = (&c.bound - rest) / a;
            if a.is_positive() {
                let tighter = match &lower {
                    None => true,
                    Some((lo, ls)) => b > *lo || (b == *lo && c.strict && !ls),
                };
                if tighter {
                    lower = Some((b, c.strict));
                }
            } else {
                let tighter = match &upper {
                    None => true,
                    Some((hi, hs)) => b < *hi || (b == *hi && c.strict && !hs),
                };
                if tighter {
                    upper = Some((b, c.strict));
                }
            }
        }
        match pick_in_interval(lower, upper) {
            Some(v) => x[k] = v,
            None => return Ok(None),
        }
    }
    let point = RationalVector(x);
    debug_assert!(constraints.iter().all(|c| c.is_satisfied(&point)));
    Ok(Some(point))
}

/// Greatest common divisor of a list of machine integers (0 for the empty list).
pub fn gcd_all(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}
