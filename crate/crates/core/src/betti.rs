//! Betti numbers over fraction fields: generic, specialized along a lattice
//! homomorphism, and twisted Novikov Betti numbers of a real class.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::laurent::{MonoidHom, Rational};
use crate::lattice::{saturate, IntMatrix};
use crate::linalg::{rank_over_fractions, QMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Alternating sum.
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &BettiVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl std::ops::Index<usize> for BettiVector {
    type Output = usize;
    fn index(&self, k: usize) -> &usize {
        &self.0[k]
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `b_k = r_k - rk ∂_k - rk ∂_{k+1}` from precomputed boundary ranks.
pub(crate) fn betti_from_ranks(ranks: &[usize], boundary_ranks: &[usize]) -> BettiVector {
    let rk = |k: usize| if k == 0 { 0 } else { boundary_ranks.get(k - 1).copied().unwrap_or(0) };
    BettiVector((0..ranks.len()).map(|k| ranks[k] - rk(k) - rk(k + 1)).collect())
}

fn boundary_ranks(c: &FreeComplex) -> Vec<usize> {
    c.boundaries().iter().map(rank_over_fractions).collect()
}

fn ensure_valid(c: &FreeComplex) -> Result<()> {
    let report = c.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidComplex(report.to_string()))
    }
}

/// Betti numbers over the fraction field of `L_n`.
pub fn betti(c: &FreeComplex) -> Result<BettiVector> {
    ensure_valid(c)?;
    Ok(betti_from_ranks(c.ranks(), &boundary_ranks(c)))
}

/// Betti numbers of `C ⊗_p Q_m`; for `m = 0` the field is `Q`.
pub fn betti_specialized(c: &FreeComplex, p: &MonoidHom) -> Result<BettiVector> {
    ensure_valid(c)?;
    betti_specialized_unchecked(c, p)
}

/// Skips the `∂∂ = 0` check; for callers that already validated `c`.
pub(crate) fn betti_specialized_unchecked(c: &FreeComplex, p: &MonoidHom) -> Result<BettiVector> {
    let s = c.specialize(p)?;
    Ok(betti_from_ranks(s.ranks(), &boundary_ranks(&s)))
}

/// Same as [`betti`]: specialization along the identity.
pub fn generic_betti(c: &FreeComplex) -> Result<BettiVector> {
    betti(c)
}

/// A homomorphism `ξ: Z^n -> R` written as `ξ(g) = Σ_j α_j (A g)_j` for an
/// `m0 x n` rational matrix `A` and reals `α_1, ..., α_{m0}` that the caller
/// declares linearly independent over `Q`. The reals are never evaluated;
/// `refs` only labels them.
#[derive(Debug, Clone, PartialEq)]
pub struct RealHom {
    matrix: QMatrix,
    refs: Vec<String>,
}

impl RealHom {
    pub fn new(matrix: QMatrix, refs: Vec<String>) -> Result<Self> {
        if matrix.rows() == 0 {
            return Err(Error::ShapeMismatch("a real homomorphism needs at least one reference real".into()));
        }
        let refs = if refs.is_empty() {
            (1..=matrix.rows()).map(|i| format!("α{i}")).collect()
        } else {
            refs
        };
        if refs.len() != matrix.rows() {
            return Err(Error::ShapeMismatch(format!(
                "{} reference reals for {} rows",
                refs.len(),
                matrix.rows()
            )));
        }
        Ok(RealHom { matrix, refs })
    }

    /// A rational-valued homomorphism (single reference real `1`).
    pub fn rational(values: Vec<Rational>) -> Self {
        let n = values.len();
        let matrix = QMatrix::from_rows(n, (), vec![values]).expect("one row");
        RealHom { matrix, refs: vec!["1".into()] }
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn refs(&self) -> &[String] {
        &self.refs
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Multiplies `ξ` by a rational scalar.
    pub fn scaled(&self, c: &Rational) -> RealHom {
        let matrix = self.matrix.map((), |x| x * c).expect("same shape");
        RealHom { matrix, refs: self.refs.clone() }
    }
}

impl fmt::Display for RealHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = (0..self.matrix.cols())
            .map(|j| {
                let parts: Vec<String> = (0..self.matrix.rows())
                    .filter(|&i| !self.matrix.get(i, j).is_zero())
                    .map(|i| {
                        let c = self.matrix.get(i, j);
                        if c.is_one() {
                            self.refs[i].clone()
                        } else {
                            format!("{c}*{}", self.refs[i])
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            })
            .collect();
        write!(f, "({})", coords.join(", "))
    }
}

/// Rank of the image group `ξ(Z^n) ⊂ R`.
pub fn irrationality_degree(xi: &RealHom) -> usize {
    xi.matrix.rank()
}

/// `ξ = ξ̃ ∘ p` with `p: Z^n -> Z^m` onto and `ξ̃: Z^m -> R` injective.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub p: MonoidHom,
    pub reduced: RealHom,
}

/// Multiplies a rational matrix by the lcm of its denominators.
fn clear_denominators(a: &QMatrix) -> Result<IntMatrix> {
    let lcm = a.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let rows = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| {
                    (x.numer() * (&lcm / x.denom()))
                        .to_i64()
                        .ok_or_else(|| Error::OutOfRange("coefficient exceeds 64 bits".into()))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows_with_cols(a.cols(), &rows)
}

/// Factors `ξ` through its image lattice.
///
/// The coordinates of `p` form the canonical (Hermite) basis of the
/// saturated lattice spanned by the rows of `A`; `p` is then onto with
/// kernel `ker ξ`, and `ξ̃` is the unique rational solution of `B p = A`.
/// For `ξ = 0` the factorization is through `Z^0`.
pub fn factor_hom(xi: &RealHom) -> Result<Factorization> {
    let n = xi.source_rank();
    let a_int = clear_denominators(&xi.matrix)?;
    let basis = saturate(&a_int.transpose());
    let p_mat = basis.transpose();
    let m = p_mat.rows();
    let p = MonoidHom::new(p_mat.clone());

    let p_q = QMatrix::from_i64_rows(n, &p_mat.to_rows())?;
    let gram = p_q.mul(&p_q.transpose())?;
    let gram_inv = {
        let aug = gram.hstack(&QMatrix::identity(m, ()))?;
        let (r, _) = aug.rref();
        QMatrix::from_rows(m, (), (0..m).map(|i| r.row(i)[m..].to_vec()).collect())?
    };
    let b = xi.matrix.mul(&p_q.transpose())?.mul(&gram_inv)?;
    if b.mul(&p_q)? != xi.matrix {
        return Err(Error::InvariantViolation("factorization does not reproduce ξ".into()));
    }
    let reduced = RealHom { matrix: b, refs: xi.refs.clone() };
    Ok(Factorization { p, reduced })
}

/// Twisted Novikov Betti numbers, reduced to specialized Betti numbers along
/// the factorization of `ξ`.
pub fn novikov_betti(c: &FreeComplex, xi: &RealHom) -> Result<BettiVector> {
    if xi.source_rank() != c.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "ξ is defined on Z^{}, complex lives over L_{}",
            xi.source_rank(),
            c.nvars()
        )));
    }
    let f = factor_hom(xi)?;
    betti_specialized(c, &f.p)
}
