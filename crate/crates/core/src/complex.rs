//! Finite free chain complexes over Laurent polynomial rings, and their
//! construction from group presentations by Fox calculus.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly, MonoidHom, Rational};
use crate::lattice::{kernel_lattice, IntMatrix};
use crate::linalg::{det, LaurentMatrix, QMatrix};

/// `0 -> C_K -> ... -> C_1 -> C_0 -> 0` with `C_k = L_n^{r_k}`.
///
/// `boundaries[k - 1]` holds `∂_k : C_k -> C_{k-1}` as an `r_{k-1} x r_k`
/// matrix acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeComplex {
    nvars: usize,
    ranks: Vec<usize>,
    boundaries: Vec<LaurentMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryViolation {
    /// The product `∂_k ∂_{k+1}` is nonzero.
    pub k: usize,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub failure: Option<BoundaryViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "valid"),
            Some(v) => write!(
                f,
                "invalid: (∂_{} ∂_{})[{}, {}] = {} ≠ 0",
                v.k,
                v.k + 1,
                v.row,
                v.col,
                v.value
            ),
        }
    }
}

impl FreeComplex {
    /// Checks shapes and ring sizes; `∂∂ = 0` is checked by [`FreeComplex::validate`].
    pub fn new(nvars: usize, ranks: Vec<usize>, boundaries: Vec<LaurentMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidComplex("a complex needs at least one module".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} ranks need {} boundary matrices, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (idx, b) in boundaries.iter().enumerate() {
            let k = idx + 1;
            if *b.context() != nvars {
                return Err(Error::VariableCountMismatch { left: nvars, right: *b.context() });
            }
            if b.rows() != ranks[k - 1] || b.cols() != ranks[k] {
                return Err(Error::InvalidComplex(format!(
                    "∂_{k} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    ranks[k - 1],
                    ranks[k]
                )));
            }
        }
        Ok(FreeComplex { nvars, ranks, boundaries })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Top degree `K`.
    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `∂_k` for `1 <= k <= K`.
    pub fn boundary(&self, k: usize) -> Option<&LaurentMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    pub fn boundaries(&self) -> &[LaurentMatrix] {
        &self.boundaries
    }

    pub fn validate(&self) -> ValidationReport {
        for k in 1..self.boundaries.len() {
            let prod = self.boundaries[k - 1]
                .mul(&self.boundaries[k])
                .expect("shapes checked at construction");
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    let v = prod.get(i, j);
                    if !v.is_zero() {
                        return ValidationReport {
                            failure: Some(BoundaryViolation { k, row: i, col: j, value: v.to_string() }),
                        };
                    }
                }
            }
        }
        ValidationReport { failure: None }
    }

    /// Applies `p: Z^n -> Z^m` to every entry.
    pub fn specialize(&self, p: &MonoidHom) -> Result<FreeComplex> {
        if p.source_rank() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "homomorphism has source rank {}, complex has {} variables",
                p.source_rank(),
                self.nvars
            )));
        }
        let m = p.target_rank();
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| {
                let entries = b.entries().iter().map(|e| e.apply_hom(p)).collect::<Result<Vec<_>>>()?;
                LaurentMatrix::new(b.rows(), b.cols(), m, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        FreeComplex::new(m, self.ranks.clone(), boundaries)
    }
}

/// Free-function form of [`FreeComplex::validate`].
pub fn validate(c: &FreeComplex) -> ValidationReport {
    c.validate()
}

/// A finite group presentation. Letters are signed one-based generator
/// indices: `2` is `x_2`, `-2` is `x_2^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relators: Vec<Vec<i64>>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i64>>) -> Result<Self> {
        for (ri, r) in relators.iter().enumerate() {
            for &letter in r {
                if letter == 0 || letter.unsigned_abs() as usize > generators {
                    return Err(Error::OutOfRange(format!(
                        "relator {ri} uses letter {letter}, only {generators} generators"
                    )));
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Vec<i64>] {
        &self.relators
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_sums(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0; self.generators];
                for &l in r {
                    row[l.unsigned_abs() as usize - 1] += l.signum();
                }
                row
            })
            .collect();
        IntMatrix::from_rows_with_cols(self.generators, &rows).expect("rows built with generator count")
    }
}

/// `ρ: G -> GL(l, Q)`, given on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    dim: usize,
    images: Vec<QMatrix>,
    inverses: Vec<QMatrix>,
}

impl Representation {
    pub fn new(dim: usize, images: Vec<QMatrix>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(images.len());
        for (g, a) in images.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "image of generator {} is {}x{}, expected {dim}x{dim}",
                    g + 1,
                    a.rows(),
                    a.cols()
                )));
            }
            inverses.push(invert(a).ok_or(Error::NonInvertible(g + 1))?);
        }
        Ok(Representation { dim, images, inverses })
    }

    pub fn trivial(generators: usize) -> Self {
        let id = QMatrix::identity(1, ());
        Representation { dim: 1, images: vec![id.clone(); generators], inverses: vec![id; generators] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[QMatrix] {
        &self.images
    }

    /// `ρ(w)` for a word.
    pub fn evaluate(&self, word: &[i64]) -> QMatrix {
        word.iter().fold(QMatrix::identity(self.dim, ()), |acc, &l| {
            let g = l.unsigned_abs() as usize - 1;
            let m = if l > 0 { &self.images[g] } else { &self.inverses[g] };
            acc.mul(m).expect("square matrices of equal size")
        })
    }

    /// Checks `ρ(r) = 1` for every relator.
    pub fn check_relations(&self, p: &Presentation) -> Result<()> {
        let id = QMatrix::identity(self.dim, ());
        for (i, r) in p.relators().iter().enumerate() {
            if self.evaluate(r) != id {
                return Err(Error::RelationViolated(i));
            }
        }
        Ok(())
    }
}

fn invert(a: &QMatrix) -> Option<QMatrix> {
    if det(a).ok()?.is_zero() {
        return None;
    }
    let n = a.rows();
    let aug = a.hstack(&QMatrix::identity(n, ())).ok()?;
    let (r, _) = aug.rref();
    let rows = (0..n).map(|i| r.row(i)[n..].to_vec()).collect();
    QMatrix::from_rows(n, (), rows).ok()
}

/// `φ: G -> Z^n` on generators; must kill every relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianizationMap {
    nvars: usize,
    images: Vec<ExponentVector>,
}

impl AbelianizationMap {
    pub fn new(nvars: usize, images: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(bad) = images.iter().find(|v| v.len() != nvars) {
            return Err(Error::VariableCountMismatch { left: nvars, right: bad.len() });
        }
        Ok(AbelianizationMap { nvars, images: images.into_iter().map(ExponentVector).collect() })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn images(&self) -> &[ExponentVector] {
        &self.images
    }

    pub fn image_of_word(&self, word: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.nvars];
        for &l in word {
            let g = &self.images[l.unsigned_abs() as usize - 1];
            for (o, x) in out.iter_mut().zip(&g.0) {
                *o += l.signum() * x;
            }
        }
        out
    }

    pub fn check(&self, p: &Presentation) -> Result<()> {
        if self.images.len() != p.generators() {
            return Err(Error::ShapeMismatch(format!(
                "φ given on {} generators, presentation has {}",
                self.images.len(),
                p.generators()
            )));
        }
        for (i, r) in p.relators().iter().enumerate() {
            let image = self.image_of_word(r);
            if image.iter().any(|&x| x != 0) {
                return Err(Error::InconsistentAbelianization { relator: i, image });
            }
        }
        Ok(())
    }
}

/// Projection of `G` onto `G/Tors`, the free part of its abelianization.
///
/// Offered as a helper; [`fox_complex`] never computes `φ` on its own.
pub fn free_abelianization(p: &Presentation) -> AbelianizationMap {
    let g = p.generators();
    // homomorphisms Z^g -> Z vanishing on all relator exponent sums
    let k = kernel_lattice(&p.exponent_sums());
    let images = (0..g).map(|j| k.row(j).to_vec()).collect();
    AbelianizationMap::new(k.cols(), images).expect("rows have kernel rank entries")
}

/// `ρ∘(g) = ρ(g) t^{φ(g)}` for letters, as `l x l` Laurent matrices.
struct TwistedRep<'a> {
    rho: &'a Representation,
    phi: &'a AbelianizationMap,
}

impl TwistedRep<'_> {
    fn letter(&self, l: i64) -> LaurentMatrix {
        let g = l.unsigned_abs() as usize - 1;
        let (m, shift) = if l > 0 {
            (&self.rho.images[g], self.phi.images[g].clone())
        } else {
            (&self.rho.inverses[g], ExponentVector(self.phi.images[g].0.iter().map(|x| -x).collect()))
        };
        let n = self.phi.nvars;
        m.map(n, |c: &Rational| LaurentPoly::monomial(shift.clone(), c.clone()))
            .expect("monomials live in L_n")
    }

    fn identity(&self) -> LaurentMatrix {
        LaurentMatrix::identity(self.rho.dim, self.phi.nvars)
    }

    /// Images of the left Fox derivatives `∂w/∂x_j` for every generator.
    fn fox_derivatives(&self, word: &[i64], generators: usize) -> Vec<LaurentMatrix> {
        let l = self.rho.dim;
        let n = self.phi.nvars;
        let mut out = vec![LaurentMatrix::zeros(l, l, n); generators];
        let mut prefix = self.identity();
        for &letter in word {
            let g = letter.unsigned_abs() as usize - 1;
            let step = self.letter(letter);
            if letter > 0 {
                // ∂(u x)/∂x = ∂u/∂x + u
                out[g] = out[g].add(&prefix).expect("same shape");
                prefix = prefix.mul(&step).expect("same shape");
            } else {
                // ∂(u x^{-1})/∂x = ∂u/∂x - u x^{-1}
                prefix = prefix.mul(&step).expect("same shape");
                let neg = prefix.map(n, |e| -e).expect("same ring");
                out[g] = out[g].add(&neg).expect("same shape");
            }
        }
        out
    }
}

/// Cellular chain complex of the presentation 2-complex, twisted by
/// `ρ∘ = ρ ⊗ φ`.
///
/// Blocks are written in the row-vector convention of the tensor product
/// `Q^l ⊗_{Z[G]} C_*(X̃)`: the column of `∂_1` for a generator `x` is
/// `ρ∘(x)^T - 1`, and the block of `∂_2` in row `x`, column `r` is
/// `ρ∘(∂r/∂x)^T`. For `l = 1` the transposes are invisible. Presentations
/// without relators produce a complex with no `C_2`.
pub fn fox_complex(p: &Presentation, rho: &Representation, phi: &AbelianizationMap) -> Result<FreeComplex> {
    if rho.images.len() != p.generators() {
        return Err(Error::ShapeMismatch(format!(
            "representation given on {} generators, presentation has {}",
            rho.images.len(),
            p.generators()
        )));
    }
    phi.check(p)?;
    let twisted = TwistedRep { rho, phi };
    let l = rho.dim;
    let n = phi.nvars;
    let g = p.generators();

    let mut d1 = LaurentMatrix::zeros(l, l * g, n);
    let one = LaurentPoly::one(n);
    for x in 0..g {
        let block = twisted.letter(x as i64 + 1).transpose();
        for a in 0..l {
            for b in 0..l {
                let mut e = block.get(a, b).clone();
                if a == b {
                    e = &e - &one;
                }
                d1.set(a, x * l + b, e);
            }
        }
    }

    let mut ranks = vec![l, l * g];
    let mut boundaries = vec![d1];
    if !p.relators().is_empty() {
        let nrel = p.relators().len();
        let mut d2 = LaurentMatrix::zeros(l * g, l * nrel, n);
        for (ri, r) in p.relators().iter().enumerate() {
            for (x, deriv) in twisted.fox_derivatives(r, g).into_iter().enumerate() {
                let block = deriv.transpose();
                for a in 0..l {
                    for b in 0..l {
                        d2.set(x * l + a, ri * l + b, block.get(a, b).clone());
                    }
                }
            }
        }
        ranks.push(l * nrel);
        boundaries.push(d2);
    }
    FreeComplex::new(n, ranks, boundaries)
}

/// Like [`fox_complex`], but first checks that `ρ` satisfies the relators.
pub fn fox_complex_checked(p: &Presentation, rho: &Representation, phi: &AbelianizationMap) -> Result<FreeComplex> {
    rho.check_relations(p)?;
    fox_complex(p, rho, phi)
}
