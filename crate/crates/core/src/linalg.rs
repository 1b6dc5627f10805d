//! Exact linear algebra over integral domains.
//!
//! [`RingMatrix`] is generic over a [`Domain`]; the two instances used in
//! this crate are rationals and Laurent polynomials. Ranks are taken over
//! the fraction field and computed by fraction-free (Bareiss) elimination,
//! so intermediate entries stay inside the ring.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Rational};

/// An integral domain with exact division.
pub trait Domain: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// Data needed to build constants (e.g. the variable count).
    type Context: Clone + PartialEq + fmt::Debug;

    fn zero_in(ctx: &Self::Context) -> Self;
    fn one_in(ctx: &Self::Context) -> Self;
    fn context(&self) -> Self::Context;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other` when the quotient lies in the ring.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Size measure used for pivot selection; smaller is cheaper.
    fn weight(&self) -> usize;
}

impl Domain for Rational {
    type Context = ();

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn context(&self) {}
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Domain for LaurentPoly {
    type Context = usize;

    fn zero_in(n: &usize) -> Self {
        LaurentPoly::zero(*n)
    }
    fn one_in(n: &usize) -> Self {
        LaurentPoly::one(*n)
    }
    fn context(&self) -> usize {
        self.nvars()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.exact_div(other)
    }
    fn weight(&self) -> usize {
        self.term_count()
    }
}

/// Dense row-major matrix over a domain. Zero-dimensional shapes are legal.
#[derive(Debug, Clone, PartialEq)]
pub struct RingMatrix<R: Domain> {
    rows: usize,
    cols: usize,
    ctx: R::Context,
    entries: Vec<R>,
}

pub type QMatrix = RingMatrix<Rational>;
pub type LaurentMatrix = RingMatrix<LaurentPoly>;

impl<R: Domain> RingMatrix<R> {
    pub fn new(rows: usize, cols: usize, ctx: R::Context, entries: Vec<R>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.context() != ctx) {
            return Err(Error::ShapeMismatch(format!(
                "entry {bad} lives in {:?}, matrix in {ctx:?}",
                bad.context()
            )));
        }
        Ok(RingMatrix { rows, cols, ctx, entries })
    }

    pub fn zeros(rows: usize, cols: usize, ctx: R::Context) -> Self {
        let z = R::zero_in(&ctx);
        RingMatrix { rows, cols, entries: vec![z; rows * cols], ctx }
    }

    pub fn identity(n: usize, ctx: R::Context) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.entries[i * n + i] = R::one_in(&m.ctx);
        }
        m
    }

    /// Builds from rows; `cols` is needed to give empty row lists a shape.
    pub fn from_rows(cols: usize, ctx: R::Context, rows: Vec<Vec<R>>) -> Result<Self> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            entries.extend(r);
        }
        Self::new(nrows, cols, ctx, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn context(&self) -> &R::Context {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        assert!(v.context() == self.ctx, "entry context mismatch");
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Domain::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        RingMatrix { rows: self.cols, cols: self.rows, ctx: self.ctx.clone(), entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.ctx != other.ctx {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.ctx.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols || self.ctx != other.ctx {
            return Err(Error::ShapeMismatch("matrix sum of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(RingMatrix { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), entries })
    }

    pub fn map<S: Domain, F: Fn(&R) -> S>(&self, ctx: S::Context, f: F) -> Result<RingMatrix<S>> {
        RingMatrix::new(self.rows, self.cols, ctx, self.entries.iter().map(f).collect())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        RingMatrix { rows: rows.len(), cols: cols.len(), ctx: self.ctx.clone(), entries }
    }

    /// Block matrix `[[a, b], [c, d]]`-style horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row mismatch".into()));
        }
        let rows = (0..self.rows).map(|i| [self.row(i), other.row(i)].concat()).collect();
        Self::from_rows(self.cols + other.cols, self.ctx.clone(), rows)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack column mismatch".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::new(self.rows + other.rows, self.cols, self.ctx.clone(), entries)
    }
}

impl<R: Domain> fmt::Display for RingMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Rank over the fraction field of the entry ring.
///
/// Bareiss elimination with complete pivoting; the pivot is the nonzero
/// entry of smallest weight in the remaining block.
pub fn rank_over_fractions<R: Domain>(m: &RingMatrix<R>) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.entries.clone();
    let mut prev = R::one_in(&m.ctx);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let e = &a[i * cols + j];
                if !e.is_zero() {
                    let w = e.weight();
                    if best.is_none_or(|(_, _, bw)| w < bw) {
                        best = Some((i, j, w));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        if pi != k {
            for j in 0..cols {
                a.swap(k * cols + j, pi * cols + j);
            }
        }
        if pj != k {
            for i in 0..rows {
                a.swap(i * cols + k, i * cols + pj);
            }
        }
        let pivot = a[k * cols + k].clone();
        for i in k + 1..rows {
            let lead = a[i * cols + k].clone();
            for j in k + 1..cols {
                let num = pivot.mul(&a[i * cols + j]).sub(&lead.mul(&a[k * cols + j]));
                a[i * cols + j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i * cols + k] = R::zero_in(&m.ctx);
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn det<R: Domain>(m: &RingMatrix<R>) -> Result<R> {
    if m.rows != m.cols {
        return Err(Error::ShapeMismatch(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(R::one_in(&m.ctx));
    }
    let mut a = m.entries.clone();
    let mut prev = R::one_in(&m.ctx);
    let mut negate = false;
    for k in 0..n {
        let pivot_row = (k..n)
            .filter(|&i| !a[i * n + k].is_zero())
            .min_by_key(|&i| a[i * n + k].weight());
        let Some(pi) = pivot_row else {
            return Ok(R::zero_in(&m.ctx));
        };
        if pi != k {
            for j in 0..n {
                a.swap(k * n + j, pi * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let num = pivot.mul(&a[i * n + j]).sub(&lead.mul(&a[k * n + j]));
                a[i * n + j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Determinants of all `r x r` submatrices: row subsets in lexicographic
/// order on the outside, column subsets on the inside.
pub fn minors<R: Domain>(m: &RingMatrix<R>, r: usize) -> Result<Vec<R>> {
    if r == 0 || r > m.rows.min(m.cols) {
        return Err(Error::OutOfRange(format!(
            "minor size {r} for a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let row_sets = combinations(m.rows, r);
    let col_sets = combinations(m.cols, r);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            out.push(det(&m.submatrix(rs, cs))?);
        }
    }
    Ok(out)
}

/// Rank as the largest size of a nonzero minor. Exponential; a reference
/// for cross-checking [`rank_over_fractions`].
pub fn rank_by_minors<R: Domain>(m: &RingMatrix<R>) -> usize {
    let mut rank = 0;
    for r in 1..=m.rows.min(m.cols) {
        let any = minors(m, r).map(|v| v.iter().any(|x| !x.is_zero())).unwrap_or(false);
        if any {
            rank = r;
        } else {
            break;
        }
    }
    rank
}

impl QMatrix {
    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|&x| crate::laurent::rat(x)).collect()).collect();
        Self::from_rows(cols, (), rows)
    }

    pub fn qzeros(rows: usize, cols: usize) -> Self {
        Self::zeros(rows, cols, ())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !Zero::is_zero(&a[i * cols + c])) else {
                continue;
            };
            for j in 0..cols {
                a.swap(r * cols + j, p * cols + j);
            }
            let inv = a[r * cols + c].recip();
            for j in c..cols {
                a[r * cols + j] = &a[r * cols + j] * &inv;
            }
            for i in 0..rows {
                if i == r || Zero::is_zero(&a[i * cols + c]) {
                    continue;
                }
                let f = a[i * cols + c].clone();
                for j in c..cols {
                    let sub = &f * &a[r * cols + j];
                    a[i * cols + j] = &a[i * cols + j] - sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (RingMatrix { rows, cols, ctx: (), entries: a }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Matrix whose columns are the given vectors of length `n`.
    pub fn from_columns(n: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::qzeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), n, "column length");
            for (i, x) in c.iter().enumerate() {
                m.entries[i * columns.len() + j] = x.clone();
            }
        }
        m
    }
}

/// Dimension of the span of `vectors` inside `Q^n`.
pub fn span_dim(n: usize, vectors: &[Vec<Rational>]) -> usize {
    QMatrix::from_columns(n, vectors).rank()
}

/// Extracts a basis of the span of `vectors`, keeping the earliest
/// independent ones.
pub fn independent_subset(n: usize, vectors: &[Vec<Rational>]) -> Vec<usize> {
    QMatrix::from_columns(n, vectors).rref().1
}

/// Coefficients `c` with `sum c_i basis_i = v`, if `v` lies in the span.
/// When `basis` is dependent an arbitrary solution is returned.
pub fn solve_in_span(n: usize, basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let mut cols: Vec<Vec<Rational>> = basis.to_vec();
    cols.push(v.to_vec());
    let (r, pivots) = QMatrix::from_columns(n, &cols).rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::zero(); k];
    for (row, &pc) in pivots.iter().enumerate() {
        c[pc] = r.get(row, k).clone();
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;
    use proptest::prelude::*;

    fn lp(terms: &[(&[i64], i64)], n: usize) -> LaurentPoly {
        LaurentPoly::from_int_terms(n, terms)
    }

    fn t_minus_1() -> LaurentPoly {
        lp(&[(&[1, 0], 1), (&[0, 0], -1)], 2)
    }

    fn s_minus_1() -> LaurentPoly {
        lp(&[(&[0, 1], 1), (&[0, 0], -1)], 2)
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_fractions(&LaurentMatrix::zeros(2, 3, 2)), 0);
        let t1 = lp(&[(&[1], 1), (&[0], -1)], 1);
        assert_eq!(rank_over_fractions(&LaurentMatrix::from_rows(1, 1, vec![vec![t1]]).unwrap()), 1);
        let m = LaurentMatrix::from_rows(2, 2, vec![vec![t_minus_1(), s_minus_1()]]).unwrap();
        assert_eq!(rank_over_fractions(&m), 1);
        assert_eq!(rank_over_fractions(&LaurentMatrix::zeros(0, 4, 1)), 0);
    }

    #[test]
    fn minor_examples() {
        let m = LaurentMatrix::from_rows(2, 2, vec![vec![t_minus_1(), s_minus_1()]]).unwrap();
        assert_eq!(minors(&m, 1).unwrap(), vec![t_minus_1(), s_minus_1()]);

        let id = QMatrix::identity(2, ());
        assert_eq!(minors(&id, 2).unwrap(), vec![rat(1)]);

        let one_minus_s = lp(&[(&[0, 0], 1), (&[0, 1], -1)], 2);
        let d2 = LaurentMatrix::from_rows(1, 2, vec![vec![one_minus_s.clone()], vec![t_minus_1()]]).unwrap();
        assert_eq!(minors(&d2, 1).unwrap(), vec![one_minus_s, t_minus_1()]);

        assert!(matches!(minors(&d2, 2), Err(Error::OutOfRange(_))));
        assert!(matches!(minors(&d2, 0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&LaurentMatrix::identity(3, 2)).unwrap(), LaurentPoly::one(2));
        let t = lp(&[(&[1], 1)], 1);
        let one = LaurentPoly::one(1);
        let m = LaurentMatrix::from_rows(2, 1, vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]]).unwrap();
        assert_eq!(det(&m).unwrap(), lp(&[(&[2], 1), (&[0], -1)], 1));
        let rep = LaurentMatrix::from_rows(2, 1, vec![vec![t.clone(), one.clone()], vec![t, one]]).unwrap();
        assert!(det(&rep).unwrap().is_zero());
        assert!(det(&LaurentMatrix::zeros(2, 3, 1)).is_err());
        assert_eq!(det(&QMatrix::qzeros(0, 0)).unwrap(), rat(1));
    }

    #[test]
    fn det_needs_row_swap() {
        let m = QMatrix::from_i64_rows(3, &[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).unwrap();
        // cofactor expansion by hand: 0*(0+9) - 1*(8-12) + 2*(-3-0) = -2
        assert_eq!(det(&m).unwrap(), rat(-2));
    }

    #[test]
    fn kernel_and_solve() {
        let m = QMatrix::from_i64_rows(3, &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let basis = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        assert_eq!(solve_in_span(2, &basis, &[rat(3), rat(2)]).unwrap(), vec![rat(1), rat(2)]);
        assert!(solve_in_span(2, &basis[..1], &[rat(0), rat(1)]).is_none());
    }

    fn arb_small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec(-1i64..=1, 2), -2i64..=2), 0..3).prop_map(|ts| {
            LaurentPoly::from_terms(2, ts.into_iter().map(|(e, c)| (e, rat(c)))).unwrap()
        })
    }

    fn arb_laurent_matrix() -> impl Strategy<Value = LaurentMatrix> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(arb_small_poly(), c), r)
                .prop_map(move |rows| LaurentMatrix::from_rows(c, 2, rows).unwrap())
        })
    }

    fn arb_qsquare(n: usize) -> impl Strategy<Value = QMatrix> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)
            .prop_map(move |rows| QMatrix::from_i64_rows(n, &rows).unwrap())
    }

    fn low_rank_laurent() -> impl Strategy<Value = LaurentMatrix> {
        (prop::collection::vec(arb_small_poly(), 3), prop::collection::vec(arb_small_poly(), 3)).prop_map(|(u, v)| {
            let rows = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
            LaurentMatrix::from_rows(3, 2, rows).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_agrees_with_minor_search(m in arb_laurent_matrix()) {
            prop_assert_eq!(rank_over_fractions(&m), rank_by_minors(&m));
        }

        #[test]
        fn rank_of_outer_product(m in low_rank_laurent()) {
            prop_assert!(rank_over_fractions(&m) <= 1);
            prop_assert_eq!(rank_over_fractions(&m), rank_by_minors(&m));
        }

        #[test]
        fn det_is_multiplicative(a in arb_qsquare(3), b in arb_qsquare(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(det(&ab).unwrap(), det(&a).unwrap() * det(&b).unwrap());
        }

        #[test]
        fn rank_invariant_under_permutation_and_row_ops(m in arb_laurent_matrix(), f in arb_small_poly()) {
            let r = rank_over_fractions(&m);
            let rev_rows: Vec<usize> = (0..m.rows()).rev().collect();
            let rev_cols: Vec<usize> = (0..m.cols()).rev().collect();
            prop_assert_eq!(rank_over_fractions(&m.submatrix(&rev_rows, &rev_cols)), r);
            if m.rows() >= 2 {
                let mut rows = m.to_rows();
                let src = rows[1].clone();
                for (x, y) in rows[0].iter_mut().zip(&src) {
                    *x = &*x + &(&f * y);
                }
                let m2 = LaurentMatrix::from_rows(m.cols(), 2, rows).unwrap();
                prop_assert_eq!(rank_over_fractions(&m2), r);
            }
        }

        #[test]
        fn bareiss_det_matches_cofactor_laurent(rows in prop::collection::vec(prop::collection::vec(arb_small_poly(), 3), 3)) {
            let m = LaurentMatrix::from_rows(3, 2, rows.clone()).unwrap();
            let cof = |i: usize, j: usize| &rows[1][i] * &rows[2][j];
            let minor = |a: usize, b: usize| &cof(a, b) - &cof(b, a);
            let expected = &(&(&rows[0][0] * &minor(1, 2)) - &(&rows[0][1] * &minor(0, 2))) + &(&rows[0][2] * &minor(0, 1));
            prop_assert_eq!(det(&m).unwrap(), expected);
        }
    }
}
