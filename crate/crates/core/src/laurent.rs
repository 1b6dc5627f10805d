//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! A [`LaurentPoly`] in `n` variables is a finite map from exponent vectors
//! in `Z^n` to nonzero rational coefficients. Zero coefficients are never
//! stored, so two polynomials are equal exactly when their term maps are.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent of a monomial `t_1^{e_1} ... t_n^{e_n}`. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    fn plus(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn minus(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn monomial(exp: ExponentVector, c: Rational) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `t_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, i), Rational::one())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::VariableCountMismatch { left: nvars, right: exp.len() });
            }
            p.add_term(ExponentVector(exp), c);
        }
        Ok(p)
    }

    /// Convenience constructor for integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))))
            .expect("exponent length matches nvars")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.0.iter().all(|&x| x == 0) && c.is_one())
                .unwrap_or(false)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Exponent vectors carrying a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Sum of all coefficients, i.e. the image under `t_i -> 1`.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    fn add_term(&mut self, exp: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.plus(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.plus(shift), x.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Lexicographically smallest term.
    pub fn trailing_term(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().next()
    }

    /// Scales to leading coefficient one and shifts the trailing exponent to
    /// the origin. Two polynomials with the same normal form differ by a
    /// unit of the Laurent ring, so they vanish under the same specializations.
    pub fn unit_normal(&self) -> Self {
        match (self.leading_term(), self.trailing_term()) {
            (Some((_, lc)), Some((low, _))) => {
                let inv = lc.recip();
                let neg = ExponentVector(low.0.iter().map(|x| -x).collect());
                self.scale(&inv).shift(&neg)
            }
            _ => self.clone(),
        }
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    ///
    /// Any exact quotient has every exponent inside the coordinate box
    /// `[min(self) - min(divisor), max(self) - max(divisor)]`, which bounds
    /// the lexicographic long division and guarantees termination.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if self.nvars != divisor.nvars || divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (lo_f, hi_f) = self.bounding_box();
        let (lo_g, hi_g) = divisor.bounding_box();
        let lo: Vec<i64> = lo_f.iter().zip(&lo_g).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = hi_f.iter().zip(&hi_g).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return None;
        }
        let (g_exp, g_coef) = divisor.leading_term().expect("nonzero divisor");
        let (g_exp, g_coef) = (g_exp.clone(), g_coef.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((r_exp, r_coef)) = rem.leading_term() {
            let e = r_exp.minus(&g_exp);
            if e.0.iter().enumerate().any(|(i, &x)| x < lo[i] || x > hi[i]) {
                return None;
            }
            let c = r_coef / &g_coef;
            let step = divisor.shift(&e).scale(&c);
            rem = &rem - &step;
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Coordinatewise minimum and maximum exponents. Panics on zero.
    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.nvars];
        let mut hi = vec![i64::MIN; self.nvars];
        for e in self.terms.keys() {
            for (i, &x) in e.0.iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        (lo, hi)
    }

    /// Pushes the polynomial forward along `p: Z^n -> Z^m`.
    pub fn apply_hom(&self, p: &MonoidHom) -> Result<Self> {
        if p.source_rank() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "homomorphism has {} columns, polynomial has {} variables",
                p.source_rank(),
                self.nvars
            )));
        }
        let mut out = Self::zero(p.target_rank());
        for (e, c) in &self.terms {
            out.add_term(p.apply(e), c.clone());
        }
        Ok(out)
    }

    fn var_name(nvars: usize, i: usize) -> String {
        if nvars <= 3 {
            ["t", "s", "u"][i].to_string()
        } else {
            format!("t{}", i + 1)
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    let v = Self::var_name(self.nvars, i);
                    if x == 1 {
                        v
                    } else {
                        format!("{v}^{x}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable count mismatch in add")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("variable count mismatch in sub")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable count mismatch in mul")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// A group homomorphism `p: Z^n -> Z^m`, stored as an `m x n` integer matrix.
///
/// Rows are the coordinates `p_i: Z^n -> Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonoidHom {
    matrix: IntMatrix,
}

impl MonoidHom {
    pub fn new(matrix: IntMatrix) -> Self {
        MonoidHom { matrix }
    }

    pub fn from_rows(source_rank: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Ok(MonoidHom { matrix: IntMatrix::from_rows_with_cols(source_rank, rows)? })
    }

    pub fn identity(n: usize) -> Self {
        MonoidHom { matrix: IntMatrix::identity(n) }
    }

    /// The homomorphism to the trivial group `Z^0`.
    pub fn trivial(n: usize) -> Self {
        MonoidHom { matrix: IntMatrix::zeros(0, n) }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        MonoidHom { matrix: IntMatrix::zeros(m, n) }
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn coordinates(&self) -> impl Iterator<Item = &[i64]> {
        self.matrix.row_iter()
    }

    pub fn apply(&self, g: &ExponentVector) -> ExponentVector {
        ExponentVector(self.matrix.mul_vec(&g.0))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonoidHom) -> Result<MonoidHom> {
        Ok(MonoidHom { matrix: self.matrix.mul(&inner.matrix)? })
    }
}

/// Free-function form of [`LaurentPoly::checked_add`].
pub fn add(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
    f.checked_add(g)
}

/// Free-function form of [`LaurentPoly::checked_mul`].
pub fn mul(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
    f.checked_mul(g)
}

pub fn apply_hom(p: &MonoidHom, f: &LaurentPoly) -> Result<LaurentPoly> {
    f.apply_hom(p)
}

pub fn support(f: &LaurentPoly) -> BTreeSet<ExponentVector> {
    f.support()
}
