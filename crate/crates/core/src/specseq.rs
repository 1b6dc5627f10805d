//! The deformation spectral sequence of a cochain complex `(N, d)` with a
//! degree-one operator `e` satisfying `e² = 0` and `de + ed = 0`.
//!
//! An r-chain in degree k is a tuple `(ω₁, …, ω_r)` with `dω₁ = 0` and
//! `dω_{i+1} = eω_i`. Page r is `MZ_(r) / MB_(r)`, where `MZ_(r)` holds the
//! classes that start an r-chain and `MB_(r)` the classes `eω_{r-1}` of
//! (r−1)-chains one degree lower. The differential sends `[ω₁]` to
//! `[eω_r]`.
//!
//! Chains are tracked incrementally. Whether an r-chain extends depends only
//! on its first and last entries, so each degree keeps a family of chains
//! whose (first, last) pairs form a basis of all such pairs.

use std::fmt;

use num_traits::Zero;

use crate::betti::{betti_specialized, BettiVector};
use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, MonoidHom, Rational};
use crate::linalg::{independent_subset, rank_over_fractions, solve_in_span, span_dim, LaurentMatrix, QMatrix};

type Vector = Vec<Rational>;

/// Cochain complex `N⁰ → … → N^K` with differential `d` and operator `e`,
/// both given by `m_{k+1} x m_k` rational matrices for `k < K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationModel {
    dims: Vec<usize>,
    d: Vec<QMatrix>,
    e: Vec<QMatrix>,
}

impl DeformationModel {
    pub fn new(dims: Vec<usize>, d: Vec<QMatrix>, e: Vec<QMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidModel("a model needs at least one degree".into()));
        }
        let maps = dims.len() - 1;
        if d.len() != maps || e.len() != maps {
            return Err(Error::InvalidModel(format!(
                "{} degrees need {maps} maps, got {} for d and {} for e",
                dims.len(),
                d.len(),
                e.len()
            )));
        }
        for k in 0..maps {
            for (name, m) in [("d", &d[k]), ("e", &e[k])] {
                if m.rows() != dims[k + 1] || m.cols() != dims[k] {
                    return Err(Error::InvalidModel(format!(
                        "{name}_{k} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        dims[k + 1],
                        dims[k]
                    )));
                }
            }
        }
        Ok(DeformationModel { dims, d, e })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// `d_k: N^k → N^{k+1}`; the zero map into `0` at the top degree.
    pub fn d(&self, k: usize) -> QMatrix {
        self.d.get(k).cloned().unwrap_or_else(|| QMatrix::qzeros(0, self.dims[k]))
    }

    pub fn e(&self, k: usize) -> QMatrix {
        self.e.get(k).cloned().unwrap_or_else(|| QMatrix::qzeros(0, self.dims[k]))
    }

    pub fn d_maps(&self) -> &[QMatrix] {
        &self.d
    }

    pub fn e_maps(&self) -> &[QMatrix] {
        &self.e
    }

    pub fn validate(&self) -> ModelReport {
        validate_model(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelViolation {
    /// `"d∘d"`, `"e∘e"` or `"d∘e+e∘d"`.
    pub identity: &'static str,
    /// Source degree of the composite.
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub failure: Option<ModelViolation>,
}

impl ModelReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for ModelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "valid"),
            Some(v) => write!(
                f,
                "{} ≠ 0 on degree {}: entry ({}, {}) = {}",
                v.identity, v.degree, v.row, v.col, v.value
            ),
        }
    }
}

fn first_nonzero(m: &QMatrix) -> Option<(usize, usize, Rational)> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !m.get(i, j).is_zero())
        .map(|(i, j)| (i, j, m.get(i, j).clone()))
}

/// Checks `d∘d = 0`, `e∘e = 0` and `d∘e + e∘d = 0`, degree by degree.
pub fn validate_model(m: &DeformationModel) -> ModelReport {
    for k in 0..m.top_degree().saturating_sub(1) {
        let dd = m.d[k + 1].mul(&m.d[k]).expect("shapes checked");
        let ee = m.e[k + 1].mul(&m.e[k]).expect("shapes checked");
        let de = m.d[k + 1]
            .mul(&m.e[k])
            .and_then(|x| x.add(&m.e[k + 1].mul(&m.d[k])?))
            .expect("shapes checked");
        for (identity, prod) in [("d∘d", dd), ("e∘e", ee), ("d∘e+e∘d", de)] {
            if let Some((row, col, value)) = first_nonzero(&prod) {
                return ModelReport {
                    failure: Some(ModelViolation { identity, degree: k, row, col, value: value.to_string() }),
                };
            }
        }
    }
    ModelReport { failure: None }
}

fn ensure_valid(m: &DeformationModel) -> Result<()> {
    let report = validate_model(m);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidModel(report.to_string()))
    }
}

/// An r-chain `(ω₁, …, ω_r)` in one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainWitness {
    pub degree: usize,
    pub omegas: Vec<Vector>,
}

impl ChainWitness {
    pub fn first(&self) -> &Vector {
        &self.omegas[0]
    }

    pub fn last(&self) -> &Vector {
        self.omegas.last().expect("chains are nonempty")
    }

    /// Checks `dω₁ = 0` and `dω_{i+1} = eω_i`.
    pub fn is_valid_for(&self, m: &DeformationModel) -> bool {
        let d = m.d(self.degree);
        let e = m.e(self.degree);
        d.mul_vec(&self.omegas[0]).iter().all(Zero::is_zero)
            && self.omegas.windows(2).all(|w| d.mul_vec(&w[1]) == e.mul_vec(&w[0]))
    }
}

fn combine(chains: &[ChainWitness], coeffs: &[Rational], degree: usize, len: usize, dim: usize) -> ChainWitness {
    let mut omegas = vec![vec![Rational::zero(); dim]; len];
    for (c, x) in chains.iter().zip(coeffs) {
        if x.is_zero() {
            continue;
        }
        for (acc, w) in omegas.iter_mut().zip(&c.omegas) {
            for (a, b) in acc.iter_mut().zip(w) {
                *a += x * b;
            }
        }
    }
    ChainWitness { degree, omegas }
}

/// One page: dimensions, chain representatives of a basis per degree, and
/// the differential `Δ_r: MH^k → MH^{k+1}` as a `dim_{k+1} x dim_k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPage {
    pub r: usize,
    pub dims: Vec<usize>,
    pub representatives: Vec<Vec<ChainWitness>>,
    pub deltas: Vec<QMatrix>,
}

impl SpectralPage {
    pub fn dims_vector(&self) -> BettiVector {
        BettiVector(self.dims.clone())
    }
}

/// Iterator over the pages of a model, starting at page 1.
#[derive(Debug, Clone)]
pub struct SpectralSequence<'a> {
    model: &'a DeformationModel,
    r: usize,
    /// Per degree, chains of length `r` with independent (first, last) pairs.
    chains: Vec<Vec<ChainWitness>>,
    /// Same for length `r - 1`; empty at `r = 1`.
    previous: Vec<Vec<ChainWitness>>,
}

impl<'a> SpectralSequence<'a> {
    pub fn new(model: &'a DeformationModel) -> Result<Self> {
        ensure_valid(model)?;
        let chains = (0..=model.top_degree())
            .map(|k| {
                model
                    .d(k)
                    .kernel()
                    .into_iter()
                    .map(|z| ChainWitness { degree: k, omegas: vec![z] })
                    .collect()
            })
            .collect();
        Ok(SpectralSequence { model, r: 1, chains, previous: vec![Vec::new(); model.dims.len()] })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Moves from chains of length `r` to length `r + 1`.
    pub fn advance(&mut self) {
        let next = (0..=self.model.top_degree()).map(|k| self.extend(k)).collect();
        self.previous = std::mem::replace(&mut self.chains, next);
        self.r += 1;
    }

    fn extend(&self, k: usize) -> Vec<ChainWitness> {
        let m = self.model;
        let dim = m.dims[k];
        let chains = &self.chains[k];
        let d = m.d(k);
        let e = m.e(k);
        let rows = d.rows();
        // unknowns (x, w): d w = e (Σ x_j last_j)
        let mut cols: Vec<Vector> = chains.iter().map(|c| e.mul_vec(c.last()).into_iter().map(|x| -x).collect()).collect();
        cols.extend(d.transpose().to_rows());
        let system = QMatrix::from_columns(rows, &cols);
        let j = chains.len();
        let extended: Vec<ChainWitness> = system
            .kernel()
            .into_iter()
            .map(|sol| {
                let mut c = combine(chains, &sol[..j], k, self.r, dim);
                c.omegas.push(sol[j..].to_vec());
                c
            })
            .collect();
        let pairs: Vec<Vector> = extended.iter().map(|c| [c.first().clone(), c.last().clone()].concat()).collect();
        independent_subset(2 * dim, &pairs).into_iter().map(|i| extended[i].clone()).collect()
    }

    fn coboundaries(&self, k: usize) -> Vec<Vector> {
        if k == 0 {
            return Vec::new();
        }
        let cols = self.model.d(k - 1).transpose().to_rows();
        independent_subset(self.model.dims[k], &cols).into_iter().map(|i| cols[i].clone()).collect()
    }

    /// Vectors `eω_{r-1}` spanning `MB_(r)^k` before reduction mod `B`.
    fn boundary_generators(&self, k: usize) -> Vec<Vector> {
        if k == 0 || self.r == 1 {
            return Vec::new();
        }
        let e = self.model.e(k - 1);
        self.previous[k - 1].iter().map(|c| e.mul_vec(c.last())).collect()
    }

    /// Basis of `MB_(r)^k + B^k`.
    fn floor(&self, k: usize) -> Vec<Vector> {
        let mut v = self.coboundaries(k);
        v.extend(self.boundary_generators(k));
        let idx = independent_subset(self.model.dims[k], &v);
        idx.into_iter().map(|i| v[i].clone()).collect()
    }

    /// Cocycles representing a basis of `MZ_(r)^k` inside `H^k`.
    pub fn mz_basis(&self, k: usize) -> Vec<Vector> {
        extend_basis(self.model.dims[k], &self.coboundaries(k), self.chains[k].iter().map(|c| c.first().clone()))
            .into_iter()
            .map(|i| self.chains[k][i].first().clone())
            .collect()
    }

    /// Cocycles representing a basis of `MB_(r)^k` inside `H^k`.
    pub fn mb_basis(&self, k: usize) -> Vec<Vector> {
        let gens = self.boundary_generators(k);
        extend_basis(self.model.dims[k], &self.coboundaries(k), gens.iter().cloned())
            .into_iter()
            .map(|i| gens[i].clone())
            .collect()
    }

    /// The current page, with its differential checked for well-definedness
    /// and `Δ² = 0`.
    pub fn page(&self) -> Result<SpectralPage> {
        let m = self.model;
        let top = m.top_degree();
        let floors: Vec<Vec<Vector>> = (0..=top).map(|k| self.floor(k)).collect();
        let mut reps: Vec<Vec<ChainWitness>> = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let firsts: Vec<Vector> = self.chains[k].iter().map(|c| c.first().clone()).collect();
            let mut span = firsts.clone();
            span.extend(self.coboundaries(k));
            if span_dim(m.dims[k], &span) != span_dim(m.dims[k], &[span.clone(), floors[k].clone()].concat()) {
                return Err(Error::InvariantViolation(format!("MB not contained in MZ in degree {k} on page {}", self.r)));
            }
            let chosen = extend_basis(m.dims[k], &floors[k], firsts.into_iter());
            reps.push(chosen.into_iter().map(|i| self.chains[k][i].clone()).collect());
        }

        let mut deltas = Vec::with_capacity(top);
        for k in 0..top {
            let target: Vec<Vector> = reps[k + 1].iter().map(|c| c.first().clone()).chain(floors[k + 1].iter().cloned()).collect();
            let e = m.e(k);
            let nt = reps[k + 1].len();
            let mut delta = QMatrix::qzeros(nt, reps[k].len());
            for (j, c) in reps[k].iter().enumerate() {
                let v = e.mul_vec(c.last());
                let coords = solve_in_span(m.dims[k + 1], &target, &v).ok_or_else(|| {
                    Error::InvariantViolation(format!("eω_r leaves MZ in degree {} on page {}", k + 1, self.r))
                })?;
                for (i, x) in coords.into_iter().take(nt).enumerate() {
                    delta.set(i, j, x);
                }
            }
            self.check_well_defined(k, &floors[k], &floors[k + 1])?;
            deltas.push(delta);
        }
        for k in 0..deltas.len().saturating_sub(1) {
            if !deltas[k + 1].mul(&deltas[k])?.is_zero() {
                return Err(Error::InvariantViolation(format!("Δ_{}² ≠ 0 on degree {k}", self.r)));
            }
        }
        let dims = reps.iter().map(Vec::len).collect();
        Ok(SpectralPage { r: self.r, dims, representatives: reps, deltas })
    }

    /// Every chain starting in the floor must end, after `e`, in the floor.
    fn check_well_defined(&self, k: usize, floor: &[Vector], floor_next: &[Vector]) -> Result<()> {
        let dim = self.model.dims[k];
        let chains = &self.chains[k];
        // unknowns (x, y): Σ x_j first_j − Σ y_i floor_i = 0
        let mut cols: Vec<Vector> = chains.iter().map(|c| c.first().clone()).collect();
        cols.extend(floor.iter().map(|f| f.iter().map(|x| -x).collect()));
        let e = self.model.e(k);
        for sol in QMatrix::from_columns(dim, &cols).kernel() {
            let c = combine(chains, &sol[..chains.len()], k, self.r, dim);
            let v = e.mul_vec(c.last());
            if solve_in_span(self.model.dims[k + 1], floor_next, &v).is_none() {
                return Err(Error::InvariantViolation(format!(
                    "Δ_{} depends on the chain witness in degree {k}",
                    self.r
                )));
            }
        }
        Ok(())
    }
}

/// Indices of `candidates` that extend `base` greedily to a basis of the
/// joint span.
fn extend_basis(n: usize, base: &[Vector], candidates: impl Iterator<Item = Vector>) -> Vec<usize> {
    let mut span: Vec<Vector> = base.to_vec();
    let mut dim = span_dim(n, &span);
    let mut out = Vec::new();
    for (i, v) in candidates.enumerate() {
        span.push(v);
        let next = span_dim(n, &span);
        if next > dim {
            dim = next;
            out.push(i);
        } else {
            span.pop();
        }
    }
    out
}

fn sequence_at(m: &DeformationModel, r: usize) -> Result<SpectralSequence<'_>> {
    if r == 0 {
        return Err(Error::OutOfRange("pages start at r = 1".into()));
    }
    let mut s = SpectralSequence::new(m)?;
    while s.r() < r {
        s.advance();
    }
    Ok(s)
}

/// Basis of `MZ_(r)^k` as cocycle representatives independent modulo
/// coboundaries.
pub fn mz_space(m: &DeformationModel, r: usize, k: usize) -> Result<Vec<Vector>> {
    check_degree(m, k)?;
    Ok(sequence_at(m, r)?.mz_basis(k))
}

/// Basis of `MB_(r)^k`, likewise.
pub fn mb_space(m: &DeformationModel, r: usize, k: usize) -> Result<Vec<Vector>> {
    check_degree(m, k)?;
    Ok(sequence_at(m, r)?.mb_basis(k))
}

fn check_degree(m: &DeformationModel, k: usize) -> Result<()> {
    if k > m.top_degree() {
        return Err(Error::OutOfRange(format!("degree {k} exceeds the top degree {}", m.top_degree())));
    }
    Ok(())
}

/// Page `r ≥ 1`. Page 1 is cohomology with `Δ₁` the map induced by `e`.
pub fn page(m: &DeformationModel, r: usize) -> Result<SpectralPage> {
    sequence_at(m, r)?.page()
}

/// `D = d + t·e` as matrices over `Q[t^{±1}]`.
fn deformed_differentials(m: &DeformationModel) -> Vec<LaurentMatrix> {
    (0..m.top_degree())
        .map(|k| {
            let d = &m.d[k];
            let e = &m.e[k];
            let entries = (0..d.rows())
                .flat_map(|i| (0..d.cols()).map(move |j| (i, j)))
                .map(|(i, j)| {
                    LaurentPoly::from_terms(
                        1,
                        [(vec![0], d.get(i, j).clone()), (vec![1], e.get(i, j).clone())],
                    )
                    .expect("one variable")
                })
                .collect();
            LaurentMatrix::new(d.rows(), d.cols(), 1, entries).expect("shape of d")
        })
        .collect()
}

/// `b_k = m_k − rank D_k − rank D_{k−1}` with ranks over `Q(t)`.
pub fn generic_betti_truncated(m: &DeformationModel) -> Result<BettiVector> {
    ensure_valid(m)?;
    let ranks: Vec<usize> = deformed_differentials(m).iter().map(rank_over_fractions).collect();
    let rk = |k: isize| if k < 0 { 0 } else { ranks.get(k as usize).copied().unwrap_or(0) };
    Ok(BettiVector((0..m.dims.len()).map(|k| m.dims[k] - rk(k as isize) - rk(k as isize - 1)).collect()))
}

/// Ordinary cohomology dimensions of `(N, d)`.
pub fn cohomology_dims(m: &DeformationModel) -> BettiVector {
    let ranks: Vec<usize> = m.d.iter().map(QMatrix::rank).collect();
    let rk = |k: isize| if k < 0 { 0 } else { ranks.get(k as usize).copied().unwrap_or(0) };
    BettiVector((0..m.dims.len()).map(|k| m.dims[k] - rk(k as isize) - rk(k as isize - 1)).collect())
}

/// Outcome of running the sequence to its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub e_infinity: BettiVector,
    /// Smallest `r ≥ 2` with `MH_(r) = E∞` dimensionwise.
    pub stable_at: usize,
    /// Last page computed.
    pub last_page: usize,
    pub pages: Vec<SpectralPage>,
}

/// Last page that needs computing. A class dies on page `r` only through a
/// `t`-torsion summand of order `r − 1` in the cohomology of `D` over
/// `Q[[t]]`, and such orders are bounded by the rank of `D`; the count of
/// nested subspaces gives the second term.
fn page_bound(m: &DeformationModel) -> usize {
    let max_rank = deformed_differentials(m).iter().map(rank_over_fractions).max().unwrap_or(0);
    let h: usize = cohomology_dims(m).0.iter().sum();
    (max_rank + 2).max(2 * h + 2)
}

/// Pages `2..` up to a certified bound, checked against the rank of
/// `d + t·e` over `Q(t)`.
pub fn converge(m: &DeformationModel) -> Result<Convergence> {
    let bound = page_bound(m);
    let mut s = SpectralSequence::new(m)?;
    s.advance();
    let mut pages = Vec::new();
    while s.r() <= bound + 1 {
        pages.push(s.page()?);
        s.advance();
    }
    let last = pages.last().expect("at least one page");
    let before = &pages[pages.len() - 2];
    if last.dims != before.dims {
        return Err(Error::InvariantViolation(format!("pages still change at r = {}", last.r)));
    }
    let e_inf = last.dims_vector();
    let generic = generic_betti_truncated(m)?;
    if e_inf != generic {
        return Err(Error::InvariantViolation(format!(
            "E∞ = {e_inf} differs from the generic Betti numbers {generic}"
        )));
    }
    let stable_at = pages.iter().find(|p| p.dims == last.dims).map(|p| p.r).expect("last page matches");
    Ok(Convergence { e_infinity: e_inf, stable_at, last_page: last.r, pages })
}

/// Limit page dimensions; equal to [`generic_betti_truncated`] or an error.
pub fn e_infinity(m: &DeformationModel) -> Result<BettiVector> {
    Ok(converge(m)?.e_infinity)
}

/// `dim ker L_k / im L_{k−1}` for maps `L_k: H^k → H^{k+1}`.
pub fn theta_cohomology(maps: &[QMatrix]) -> Result<BettiVector> {
    if maps.is_empty() {
        return Err(Error::ShapeMismatch("at least one map is needed to fix the degrees".into()));
    }
    for k in 0..maps.len() - 1 {
        if maps[k + 1].cols() != maps[k].rows() {
            return Err(Error::ShapeMismatch(format!("L_{} and L_{} do not compose", k, k + 1)));
        }
        if !maps[k + 1].mul(&maps[k])?.is_zero() {
            return Err(Error::InvalidModel(format!("L_{} ∘ L_{} ≠ 0", k + 1, k)));
        }
    }
    let mut dims: Vec<usize> = maps.iter().map(QMatrix::cols).collect();
    dims.push(maps.last().expect("nonempty").rows());
    let ranks: Vec<usize> = maps.iter().map(QMatrix::rank).collect();
    let rk = |k: isize| if k < 0 { 0 } else { ranks.get(k as usize).copied().unwrap_or(0) };
    Ok(BettiVector((0..dims.len()).map(|k| dims[k] - rk(k as isize) - rk(k as isize - 1)).collect()))
}

/// Side-by-side Betti numbers of a Laurent complex and a deformation model
/// claimed to describe the same space and class.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub laurent: BettiVector,
    pub deformation: BettiVector,
    pub agree: bool,
    pub convention: String,
}

impl fmt::Display for ModelComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "laurent (homological):      {}", self.laurent)?;
        writeln!(f, "deformation (cohomological): {}", self.deformation)?;
        writeln!(f, "convention: {}", self.convention)?;
        write!(f, "{}", if self.agree { "agree" } else { "differ" })
    }
}

pub fn compare_models(c: &FreeComplex, m: &DeformationModel, p: &MonoidHom) -> Result<ModelComparison> {
    let laurent = betti_specialized(c, p)?;
    let deformation = e_infinity(m)?;
    let agree = laurent == deformation;
    Ok(ModelComparison {
        laurent,
        deformation,
        agree,
        convention: "homological degree k ↔ cohomological degree k".into(),
    })
}
