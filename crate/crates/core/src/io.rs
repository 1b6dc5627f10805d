//! JSON input documents and compact command-line encodings.
//!
//! A document has a `version` (currently 1), exactly one of `complex`,
//! `presentation` or `deformation`, and an optional `query`. Rationals are
//! written `{"num": a, "den": b}` or as bare integers; integers that do not
//! fit in 64 bits are written as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::betti::RealHom;
use crate::complex::{fox_complex, free_abelianization, AbelianizationMap, FreeComplex, Presentation, Representation};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, MonoidHom, Rational};
use crate::linalg::{LaurentMatrix, QMatrix};
use crate::specseq::DeformationModel;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntRepr::Small(x) => Ok(BigInt::from(*x)),
            IntRepr::Big(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }

    fn from_bigint(x: &BigInt) -> Self {
        x.to_i64().map(IntRepr::Small).unwrap_or_else(|| IntRepr::Big(x.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(IntRepr),
    Frac { num: IntRepr, den: IntRepr },
}

impl RationalRepr {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalRepr::Int(n) => Ok(Rational::from_integer(n.to_bigint()?)),
            RationalRepr::Frac { num, den } => {
                let den = den.to_bigint()?;
                if den == BigInt::from(0) {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Rational::new(num.to_bigint()?, den))
            }
        }
    }

    fn from_rational(x: &Rational) -> Self {
        if x.denom().is_one() {
            RationalRepr::Int(IntRepr::from_bigint(x.numer()))
        } else {
            RationalRepr::Frac { num: IntRepr::from_bigint(x.numer()), den: IntRepr::from_bigint(x.denom()) }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    exp: Vec<i64>,
    num: IntRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    den: Option<IntRepr>,
}

type PolyRepr = Vec<TermRepr>;
type PolyMatrixRepr = Vec<Vec<PolyRepr>>;
type QMatrixRepr = Vec<Vec<RationalRepr>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    n: usize,
    ranks: Vec<usize>,
    /// Keyed by degree `k ≥ 1`; missing entries are zero.
    #[serde(default)]
    boundaries: BTreeMap<String, PolyMatrixRepr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepresentationRepr {
    dim: usize,
    images: Vec<QMatrixRepr>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationRepr {
    generators: usize,
    #[serde(default)]
    relators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    representation: Option<RepresentationRepr>,
    #[serde(default = "default_true")]
    check_relations: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeformationRepr {
    dims: Vec<usize>,
    d: Vec<QMatrixRepr>,
    e: Vec<QMatrixRepr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XiRepr {
    matrix: QMatrixRepr,
    #[serde(default)]
    refs: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<XiRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_page: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complex: Option<ComplexRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    presentation: Option<PresentationRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deformation: Option<DeformationRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    query: Option<QueryRepr>,
}

/// A group presentation with the data needed for its Fox complex.
#[derive(Debug, Clone)]
pub struct PresentationData {
    pub presentation: Presentation,
    pub representation: Representation,
    pub phi: AbelianizationMap,
    pub check_relations: bool,
}

#[derive(Debug, Clone)]
pub enum Body {
    Complex(FreeComplex),
    Presentation(PresentationData),
    Deformation(DeformationModel),
}

/// Optional parameters stored alongside the data. `p` is kept as rows since
/// its source rank depends on the body.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Query {
    pub p: Option<Vec<Vec<i64>>>,
    pub xi: Option<RealHom>,
    pub k: Option<usize>,
    pub q: Option<usize>,
    pub max_page: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub body: Body,
    pub query: Query,
}

impl Document {
    /// The Laurent complex described by the body; presentations go through
    /// the Fox construction.
    pub fn complex(&self) -> Result<FreeComplex> {
        match &self.body {
            Body::Complex(c) => Ok(c.clone()),
            Body::Presentation(p) => {
                if p.check_relations {
                    p.representation.check_relations(&p.presentation)?;
                    p.phi.check(&p.presentation)?;
                }
                fox_complex(&p.presentation, &p.representation, &p.phi)
            }
            Body::Deformation(_) => Err(Error::Parse("document holds a deformation model, not a complex".into())),
        }
    }

    pub fn model(&self) -> Result<&DeformationModel> {
        match &self.body {
            Body::Deformation(m) => Ok(m),
            _ => Err(Error::Parse("document holds no deformation model".into())),
        }
    }
}

fn parse_qmatrix(rows: usize, cols: usize, m: &QMatrixRepr, what: &str) -> Result<QMatrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::ShapeMismatch(format!("{what} must be {rows}x{cols}")));
    }
    let entries = m.iter().flatten().map(RationalRepr::to_rational).collect::<Result<Vec<_>>>()?;
    QMatrix::new(rows, cols, (), entries)
}

fn write_qmatrix(m: &QMatrix) -> QMatrixRepr {
    m.to_rows().iter().map(|r| r.iter().map(RationalRepr::from_rational).collect()).collect()
}

fn parse_poly(n: usize, p: &PolyRepr) -> Result<LaurentPoly> {
    let terms = p
        .iter()
        .map(|t| {
            let num = t.num.to_bigint()?;
            let den = t.den.as_ref().map(IntRepr::to_bigint).transpose()?.unwrap_or_else(BigInt::one);
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok((t.exp.clone(), Rational::new(num, den)))
        })
        .collect::<Result<Vec<_>>>()?;
    LaurentPoly::from_terms(n, terms)
}

fn write_poly(f: &LaurentPoly) -> PolyRepr {
    f.terms()
        .map(|(e, c)| TermRepr {
            exp: e.as_slice().to_vec(),
            num: IntRepr::from_bigint(c.numer()),
            den: (!c.denom().is_one()).then(|| IntRepr::from_bigint(c.denom())),
        })
        .collect()
}

fn parse_complex(c: &ComplexRepr) -> Result<FreeComplex> {
    if c.ranks.is_empty() {
        return Err(Error::ShapeMismatch("a complex needs at least one rank".into()));
    }
    for key in c.boundaries.keys() {
        match key.parse::<usize>() {
            Ok(k) if k >= 1 && k < c.ranks.len() => {}
            _ => return Err(Error::Parse(format!("boundary key {key:?} is not a degree in 1..{}", c.ranks.len() - 1))),
        }
    }
    let boundaries = (1..c.ranks.len())
        .map(|k| {
            let (rows, cols) = (c.ranks[k - 1], c.ranks[k]);
            match c.boundaries.get(&k.to_string()) {
                None => Ok(LaurentMatrix::zeros(rows, cols, c.n)),
                Some(m) => {
                    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                        return Err(Error::ShapeMismatch(format!("boundary {k} must be {rows}x{cols}")));
                    }
                    let entries = m.iter().flatten().map(|p| parse_poly(c.n, p)).collect::<Result<Vec<_>>>()?;
                    LaurentMatrix::new(rows, cols, c.n, entries)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FreeComplex::new(c.n, c.ranks.clone(), boundaries)
}

fn write_complex(c: &FreeComplex) -> ComplexRepr {
    let boundaries = c
        .boundaries()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let rows = m.to_rows().iter().map(|r| r.iter().map(write_poly).collect()).collect();
            ((i + 1).to_string(), rows)
        })
        .collect();
    ComplexRepr { n: c.nvars(), ranks: c.ranks().to_vec(), boundaries }
}

fn parse_presentation(p: &PresentationRepr) -> Result<PresentationData> {
    let presentation = Presentation::new(p.generators, p.relators.clone())?;
    let phi = match &p.phi {
        Some(images) => {
            let n = images.first().map(Vec::len).unwrap_or(0);
            if images.len() != p.generators {
                return Err(Error::ShapeMismatch(format!("phi needs one image per generator ({})", p.generators)));
            }
            AbelianizationMap::new(n, images.clone())?
        }
        None => free_abelianization(&presentation),
    };
    let representation = match &p.representation {
        None => Representation::trivial(p.generators),
        Some(r) => {
            if r.images.len() != p.generators {
                return Err(Error::ShapeMismatch(format!("representation needs {} images", p.generators)));
            }
            let images = r
                .images
                .iter()
                .enumerate()
                .map(|(i, m)| parse_qmatrix(r.dim, r.dim, m, &format!("image of generator {}", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            Representation::new(r.dim, images)?
        }
    };
    Ok(PresentationData { presentation, representation, phi, check_relations: p.check_relations })
}

fn write_presentation(p: &PresentationData) -> PresentationRepr {
    let representation = (p.representation.dim() != 1
        || p.representation.images().iter().any(|m| !m.get(0, 0).is_one()))
    .then(|| RepresentationRepr {
        dim: p.representation.dim(),
        images: p.representation.images().iter().map(write_qmatrix).collect(),
    });
    PresentationRepr {
        generators: p.presentation.generators(),
        relators: p.presentation.relators().to_vec(),
        phi: Some(p.phi.images().iter().map(|e| e.as_slice().to_vec()).collect()),
        representation,
        check_relations: p.check_relations,
    }
}

fn parse_deformation(d: &DeformationRepr) -> Result<DeformationModel> {
    let maps = d.dims.len().saturating_sub(1);
    if d.d.len() != maps || d.e.len() != maps {
        return Err(Error::ShapeMismatch(format!("{} degrees need {maps} maps each for d and e", d.dims.len())));
    }
    let read = |ms: &[QMatrixRepr], name: &str| {
        ms.iter()
            .enumerate()
            .map(|(k, m)| parse_qmatrix(d.dims[k + 1], d.dims[k], m, &format!("{name}_{k}")))
            .collect::<Result<Vec<_>>>()
    };
    DeformationModel::new(d.dims.clone(), read(&d.d, "d")?, read(&d.e, "e")?)
}

fn write_deformation(m: &DeformationModel) -> DeformationRepr {
    DeformationRepr {
        dims: m.dims().to_vec(),
        d: m.d_maps().iter().map(write_qmatrix).collect(),
        e: m.e_maps().iter().map(write_qmatrix).collect(),
    }
}

fn parse_xi(x: &XiRepr) -> Result<RealHom> {
    let cols = x.matrix.first().map(Vec::len).unwrap_or(0);
    RealHom::new(parse_qmatrix(x.matrix.len(), cols, &x.matrix, "xi")?, x.refs.clone())
}

fn write_xi(xi: &RealHom) -> XiRepr {
    XiRepr { matrix: write_qmatrix(xi.matrix()), refs: xi.refs().to_vec() }
}

/// Parses and schema-checks a document.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: DocumentRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {}", raw.version)));
    }
    let present = [raw.complex.is_some(), raw.presentation.is_some(), raw.deformation.is_some()];
    if present.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::Parse("exactly one of complex, presentation, deformation is required".into()));
    }
    let body = if let Some(c) = &raw.complex {
        Body::Complex(parse_complex(c)?)
    } else if let Some(p) = &raw.presentation {
        Body::Presentation(parse_presentation(p)?)
    } else {
        Body::Deformation(parse_deformation(raw.deformation.as_ref().expect("checked above"))?)
    };
    let q = raw.query.unwrap_or_default();
    let query = Query { p: q.p, xi: q.xi.as_ref().map(parse_xi).transpose()?, k: q.k, q: q.q, max_page: q.max_page };
    Ok(Document { body, query })
}

/// Pretty-printed JSON; parsing it back yields an equal document.
pub fn write_document(doc: &Document) -> String {
    let q = &doc.query;
    let query = (*q != Query::default()).then(|| QueryRepr {
        p: q.p.clone(),
        xi: q.xi.as_ref().map(write_xi),
        k: q.k,
        q: q.q,
        max_page: q.max_page,
    });
    let mut raw = DocumentRepr { version: FORMAT_VERSION, complex: None, presentation: None, deformation: None, query };
    match &doc.body {
        Body::Complex(c) => raw.complex = Some(write_complex(c)),
        Body::Presentation(p) => raw.presentation = Some(write_presentation(p)),
        Body::Deformation(m) => raw.deformation = Some(write_deformation(m)),
    }
    serde_json::to_string_pretty(&raw).expect("documents serialize")
}

pub fn complex_to_json(c: &FreeComplex) -> String {
    write_document(&Document { body: Body::Complex(c.clone()), query: Query::default() })
}

pub fn model_to_json(m: &DeformationModel) -> String {
    write_document(&Document { body: Body::Deformation(m.clone()), query: Query::default() })
}

/// Exact rational from `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
        Some((a, b)) => {
            let den: BigInt = b.trim().parse().map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(a.trim().parse().map_err(|_| bad())?, den))
        }
    }
}

/// `p` from rows separated by `;` and entries by `,`; the empty string is
/// the map to `Z^0`.
pub fn parse_monoid_hom(source_rank: usize, s: &str) -> Result<MonoidHom> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(MonoidHom::trivial(source_rank));
    }
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not an integer: {x:?}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != source_rank) {
        return Err(Error::ShapeMismatch(format!("every row of p needs {source_rank} entries")));
    }
    MonoidHom::from_rows(source_rank, &rows)
}

/// Rows of `p` as stored in a query block.
pub fn monoid_hom_from_rows(source_rank: usize, rows: &[Vec<i64>]) -> Result<MonoidHom> {
    if rows.iter().any(|r| r.len() != source_rank) {
        return Err(Error::ShapeMismatch(format!("every row of p needs {source_rank} entries")));
    }
    MonoidHom::from_rows(source_rank, rows)
}

/// `ξ` from rows separated by `;`, each `label:c1,…,cn` or just `c1,…,cn`.
/// Row `i` holds the coefficients of the `i`-th reference real; entries are
/// rationals such as `1/2`. Example: `1:1,0;sqrt2:0,1` is `(1, √2)`.
pub fn parse_real_hom(source_rank: usize, s: &str) -> Result<RealHom> {
    let mut refs = Vec::new();
    let mut rows = Vec::new();
    for (i, row) in s.split(';').enumerate() {
        let (label, entries) = match row.split_once(':') {
            Some((l, e)) => (l.trim().to_string(), e),
            None => (format!("α{}", i + 1), row),
        };
        let entries = entries.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        if entries.len() != source_rank {
            return Err(Error::ShapeMismatch(format!("every row of ξ needs {source_rank} entries")));
        }
        refs.push(label);
        rows.push(entries);
    }
    RealHom::new(QMatrix::from_rows(source_rank, (), rows)?, refs)
}
