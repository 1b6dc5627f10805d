//! Jump loci of specialized Betti numbers.
//!
//! An integral homomorphism `p: Z^n -> Z^m` kills a Laurent polynomial `Δ`
//! exactly when the fibres of `p` on `support(Δ)` partition it into blocks
//! with zero coefficient sum. Each such partition `σ` gives the lattice
//! `L(σ)` of functionals constant on its blocks, and `p` kills `Δ` iff every
//! coordinate of `p` lies in one common `L(σ)`. A rank drop of a boundary
//! matrix is the simultaneous vanishing of its minors of one size, so the
//! locus where `b_k` jumps by `q` is a finite union of intersections of such
//! lattices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::betti::{betti, betti_specialized, RealHom};
use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly, MonoidHom, Rational};
use crate::lattice::{canonical_column_basis, is_saturated, kernel_lattice, IntMatrix};
use crate::linalg::{minors, rank_over_fractions, QMatrix};

use num_traits::Zero;

/// A saturated sublattice of `Hom(Z^n, Z) = Z^n`, stored by a canonical
/// column basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FullSubgroup {
    n: usize,
    basis: IntMatrix,
}

impl FullSubgroup {
    /// Fails unless the columns of `basis` span a saturated lattice.
    pub fn new(basis: IntMatrix) -> Result<Self> {
        if !is_saturated(&basis) {
            return Err(Error::InvariantViolation("basis does not span a saturated lattice".into()));
        }
        let n = basis.rows();
        Ok(FullSubgroup { n, basis: canonical_column_basis(&basis) })
    }

    pub fn zero(n: usize) -> Self {
        FullSubgroup { n, basis: IntMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        FullSubgroup { n, basis: IntMatrix::identity(n) }
    }

    /// `{h : c·h = 0 for every row c}`.
    pub fn from_constraints(n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let a = IntMatrix::from_rows_with_cols(n, rows)?;
        Ok(FullSubgroup { n, basis: kernel_lattice(&a) })
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_proper(&self) -> bool {
        self.rank() < self.n
    }

    /// Rows spanning the annihilator, in canonical form.
    pub fn constraints(&self) -> Vec<Vec<i64>> {
        kernel_lattice(&self.basis.transpose()).columns()
    }

    /// Membership of an integral or rational vector in `G ⊗ Q`. For integral
    /// vectors this is membership in `G`, since `G` is saturated.
    fn spans_rational(&self, v: &[Rational]) -> bool {
        let mut columns: Vec<Vec<Rational>> = self
            .basis
            .columns()
            .iter()
            .map(|c| c.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        columns.push(v.to_vec());
        QMatrix::from_columns(self.n, &columns).rank() == self.rank()
    }

    pub fn contains_vector(&self, v: &[i64]) -> bool {
        let q: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        v.len() == self.n && self.spans_rational(&q)
    }

    pub fn contains(&self, other: &FullSubgroup) -> bool {
        other.n == self.n && other.basis.columns().iter().all(|c| self.contains_vector(c))
    }

    pub fn intersect(&self, other: &FullSubgroup) -> FullSubgroup {
        let mut rows = self.constraints();
        rows.extend(other.constraints());
        FullSubgroup::from_constraints(self.n, &rows).expect("constraints share a length")
    }

    /// Human-readable defining equations, e.g. `h(e1)=h(e3), h(e2)=0`.
    pub fn description(&self) -> String {
        if self.rank() == 0 {
            return "{0}".into();
        }
        let constraints = self.constraints();
        if constraints.is_empty() {
            return "all h".into();
        }
        constraints.iter().map(|c| equation(c)).collect::<Vec<_>>().join(", ")
    }
}

fn equation(c: &[i64]) -> String {
    let side = |sign: i64| -> String {
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x * sign > 0)
            .map(|(j, &x)| {
                let a = x.abs();
                if a == 1 {
                    format!("h(e{})", j + 1)
                } else {
                    format!("{a}h(e{})", j + 1)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    };
    format!("{}={}", side(1), side(-1))
}

impl fmt::Display for FullSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description())
    }
}

/// Whether every coordinate of `p` lies in `g`. Always true for `m = 0`.
pub fn subordinate(p: &MonoidHom, g: &FullSubgroup) -> bool {
    p.source_rank() == g.ambient_rank() && p.coordinates().all(|row| g.contains_vector(row))
}

/// A partition of `support(Δ)` into blocks of at least two exponents whose
/// coefficients sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittedSubdivision {
    pub delta: LaurentPoly,
    pub blocks: Vec<Vec<ExponentVector>>,
}

impl fmt::Display for FittedSubdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let parts: Vec<String> = b
                    .iter()
                    .map(|e| LaurentPoly::monomial(e.clone(), Rational::from_integer(1.into())).to_string())
                    .collect();
                format!("{{{}}}", parts.join(", "))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(", "))
    }
}

/// Caps on the combinatorial search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpLociLimits {
    pub max_support: usize,
    pub max_assignments: usize,
}

impl Default for JumpLociLimits {
    fn default() -> Self {
        JumpLociLimits { max_support: 12, max_assignments: 1_000_000 }
    }
}

/// All fitted subdivisions of `Δ`, in restricted-growth order over the
/// lex-sorted support.
pub fn fitted_subdivisions(delta: &LaurentPoly) -> Result<Vec<FittedSubdivision>> {
    fitted_subdivisions_with_limits(delta, &JumpLociLimits::default())
}

pub fn fitted_subdivisions_with_limits(delta: &LaurentPoly, limits: &JumpLociLimits) -> Result<Vec<FittedSubdivision>> {
    if delta.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let terms: Vec<(ExponentVector, Rational)> = delta.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    if terms.len() > limits.max_support {
        return Err(Error::ResourceLimit(format!(
            "support of size {} exceeds the cap of {}",
            terms.len(),
            limits.max_support
        )));
    }
    let mut out = Vec::new();
    let mut assignment = Vec::with_capacity(terms.len());
    let mut sums: Vec<Rational> = Vec::new();
    search(&terms, &mut assignment, &mut sums, &mut |assignment, nblocks| {
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in assignment.iter().enumerate() {
            blocks[b].push(terms[i].0.clone());
        }
        out.push(FittedSubdivision { delta: delta.clone(), blocks });
    });
    Ok(out)
}

fn search<F: FnMut(&[usize], usize)>(
    terms: &[(ExponentVector, Rational)],
    assignment: &mut Vec<usize>,
    sums: &mut Vec<Rational>,
    emit: &mut F,
) {
    let i = assignment.len();
    let open = sums.iter().filter(|s| !s.is_zero()).count();
    // every block with a nonzero sum still needs another element
    if open > terms.len() - i {
        return;
    }
    if i == terms.len() {
        emit(assignment, sums.len());
        return;
    }
    let c = &terms[i].1;
    for b in 0..=sums.len() {
        let fresh = b == sums.len();
        if fresh {
            sums.push(c.clone());
        } else {
            sums[b] += c;
        }
        assignment.push(b);
        search(terms, assignment, sums, emit);
        assignment.pop();
        if fresh {
            sums.pop();
        } else {
            sums[b] -= c;
        }
    }
}

/// `L(σ)`: functionals constant on every block.
pub fn subgroup_of_subdivision(sigma: &FittedSubdivision) -> FullSubgroup {
    let n = sigma.delta.nvars();
    let rows: Vec<Vec<i64>> = sigma
        .blocks
        .iter()
        .flat_map(|b| b.windows(2).map(|w| w[1].as_slice().iter().zip(w[0].as_slice()).map(|(x, y)| x - y).collect()))
        .collect();
    FullSubgroup::from_constraints(n, &rows).expect("differences live in Z^n")
}

/// Deduplicated `L(σ)` over all fitted subdivisions of `Δ`.
pub fn vanishing_family(delta: &LaurentPoly) -> Result<Vec<FullSubgroup>> {
    vanishing_family_with_limits(delta, &JumpLociLimits::default())
}

pub fn vanishing_family_with_limits(delta: &LaurentPoly, limits: &JumpLociLimits) -> Result<Vec<FullSubgroup>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for sigma in fitted_subdivisions_with_limits(delta, limits)? {
        let g = subgroup_of_subdivision(&sigma);
        if seen.insert(g.basis.to_rows()) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Keeps the inclusion-maximal members, without duplicates, in a canonical
/// order (larger rank first, then by basis).
fn maximal(family: Vec<FullSubgroup>) -> Vec<FullSubgroup> {
    let mut uniq: Vec<FullSubgroup> = Vec::new();
    for g in family {
        if !uniq.contains(&g) {
            uniq.push(g);
        }
    }
    let mut out: Vec<FullSubgroup> = uniq
        .iter()
        .filter(|g| !uniq.iter().any(|h| h != *g && h.contains(g)))
        .cloned()
        .collect();
    out.sort_by(|a, b| b.rank().cmp(&a.rank()).then_with(|| a.basis.to_rows().cmp(&b.basis.to_rows())));
    out
}

/// What one split `rank drop of ∂_k ≥ i`, `rank drop of ∂_{k+1} ≥ q - i`
/// contributed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSummary {
    pub split: usize,
    /// `None` when one of the required drops exceeds the rank.
    pub minors: Option<usize>,
    pub subgroups: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpLocusResult {
    pub degree: usize,
    pub jump: usize,
    pub baseline: usize,
    pub family: Vec<FullSubgroup>,
    pub splits: Vec<SplitSummary>,
}

impl JumpLocusResult {
    /// Whether `p` lies in the locus.
    pub fn contains(&self, p: &MonoidHom) -> bool {
        self.family.iter().any(|g| subordinate(p, g))
    }
}

struct Search<'a> {
    n: usize,
    limits: &'a JumpLociLimits,
    memo: HashMap<LaurentPoly, Vec<FullSubgroup>>,
    assignments: usize,
}

impl Search<'_> {
    fn family(&mut self, delta: &LaurentPoly) -> Result<Vec<FullSubgroup>> {
        if let Some(f) = self.memo.get(delta) {
            return Ok(f.clone());
        }
        let f = vanishing_family_with_limits(delta, self.limits)?;
        self.memo.insert(delta.clone(), f.clone());
        Ok(f)
    }

    /// Maximal lattices on which every polynomial in `deltas` vanishes.
    fn common_zeros(&mut self, deltas: &[LaurentPoly]) -> Result<Vec<FullSubgroup>> {
        let mut current = vec![FullSubgroup::full(self.n)];
        for delta in deltas {
            let options = self.family(delta)?;
            let mut next = Vec::new();
            for g in &current {
                for l in &options {
                    self.assignments += 1;
                    if self.assignments > self.limits.max_assignments {
                        return Err(Error::ResourceLimit(format!(
                            "more than {} lattice intersections",
                            self.limits.max_assignments
                        )));
                    }
                    next.push(g.intersect(l));
                }
            }
            current = maximal(next);
            if current.is_empty() {
                break;
            }
        }
        Ok(current)
    }
}

/// Nonzero `size`-minors up to units, or `None` if a drop of `drop` is
/// impossible for a matrix of rank `rank`.
fn required_minors(m: Option<&crate::linalg::LaurentMatrix>, rank: usize, drop: usize) -> Result<Option<Vec<LaurentPoly>>> {
    if drop == 0 {
        return Ok(Some(Vec::new()));
    }
    if drop > rank {
        return Ok(None);
    }
    let m = m.expect("positive rank implies the matrix exists");
    let polys = minors(m, rank - drop + 1)?;
    Ok(Some(polys.into_iter().filter(|d| !d.is_zero()).map(|d| d.unit_normal()).collect()))
}

/// The family of full subgroups `G_i` with `b_k(C, p) ≥ b_k(C) + q` iff `p ⊏ G_i`
/// for some `i`.
pub fn jump_loci(c: &FreeComplex, k: usize, q: usize) -> Result<JumpLocusResult> {
    jump_loci_with_limits(c, k, q, &JumpLociLimits::default())
}

pub fn jump_loci_with_limits(c: &FreeComplex, k: usize, q: usize, limits: &JumpLociLimits) -> Result<JumpLocusResult> {
    if k > c.top_degree() {
        return Err(Error::OutOfRange(format!("degree {k} exceeds the top degree {}", c.top_degree())));
    }
    if q == 0 {
        return Err(Error::OutOfRange("the jump must be positive".into()));
    }
    let baseline = betti(c)?[k];
    let lower = if k == 0 { None } else { c.boundary(k) };
    let upper = c.boundary(k + 1);
    let rank_lower = lower.map(rank_over_fractions).unwrap_or(0);
    let rank_upper = upper.map(rank_over_fractions).unwrap_or(0);

    let mut search = Search { n: c.nvars(), limits, memo: HashMap::new(), assignments: 0 };
    let mut collected = Vec::new();
    let mut splits = Vec::new();
    for i in 0..=q {
        let a = required_minors(lower, rank_lower, i)?;
        let b = required_minors(upper, rank_upper, q - i)?;
        let (Some(a), Some(b)) = (a, b) else {
            splits.push(SplitSummary { split: i, minors: None, subgroups: 0 });
            continue;
        };
        let mut deltas: Vec<LaurentPoly> = Vec::new();
        for d in a.into_iter().chain(b) {
            if !deltas.contains(&d) {
                deltas.push(d);
            }
        }
        // fewer terms first keeps intermediate families small
        deltas.sort_by_key(|d| d.term_count());
        let found = search.common_zeros(&deltas)?;
        splits.push(SplitSummary { split: i, minors: Some(deltas.len()), subgroups: found.len() });
        collected.extend(found);
    }
    Ok(JumpLocusResult { degree: k, jump: q, baseline, family: maximal(collected), splits })
}

/// Direct check `b_k(C, p) ≥ b_k(C) + q`.
pub fn test_jump(c: &FreeComplex, k: usize, q: usize, p: &MonoidHom) -> Result<bool> {
    if k > c.top_degree() {
        return Err(Error::OutOfRange(format!("degree {k} exceeds the top degree {}", c.top_degree())));
    }
    Ok(betti_specialized(c, p)?[k] >= betti(c)?[k] + q)
}

/// Whether all rows of `ξ`'s rational matrix lie in `G ⊗ Q` for one member `G`.
pub fn membership_real(xi: &RealHom, family: &[FullSubgroup]) -> Result<bool> {
    if let Some(g) = family.iter().find(|g| g.ambient_rank() != xi.source_rank()) {
        return Err(Error::ShapeMismatch(format!(
            "ξ is defined on Z^{}, subgroup lives in Z^{}",
            xi.source_rank(),
            g.ambient_rank()
        )));
    }
    let rows = xi.matrix().to_rows();
    Ok(family.iter().any(|g| rows.iter().all(|r| g.spans_rational(r))))
}
