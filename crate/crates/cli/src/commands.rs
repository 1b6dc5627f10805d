//! Command implementations. Each returns the text report, the JSON block
//! and the exit code; errors carry their own exit class.

use std::fmt::Write as _;
use std::path::Path;

use nvk_core::io::{monoid_hom_from_rows, parse_document, parse_monoid_hom, parse_real_hom, Body, Document};
use nvk_core::{
    betti_specialized, compare_models, converge, factor_hom, jump_loci, novikov_betti, page, validate_model,
    BettiVector, Error, FreeComplex, MonoidHom, RealHom,
};
use serde_json::{json, Value};

pub enum Failure {
    Invariant(String),
    Parse(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_) | Error::ShapeMismatch(_) | Error::VariableCountMismatch { .. } | Error::OutOfRange(_) => {
                Failure::Parse(msg)
            }
            Error::ResourceLimit(_) => Failure::Resource(msg),
            _ => Failure::Invariant(msg),
        }
    }
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

type Outcome = Result<Output, Failure>;

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn tuple(v: &[usize]) -> String {
    BettiVector(v.to_vec()).to_string()
}

fn rows_of(p: &MonoidHom) -> Vec<Vec<i64>> {
    p.coordinates().map(<[i64]>::to_vec).collect()
}

pub fn validate(path: &Path) -> Outcome {
    let doc = load(path)?;
    match &doc.body {
        Body::Deformation(m) => {
            let report = validate_model(m);
            let text = format!("deformation model: dims {}\n{report}\n", tuple(m.dims()));
            let failure = report.failure.as_ref().map(|v| {
                json!({"identity": v.identity, "degree": v.degree, "row": v.row, "col": v.col, "value": v.value})
            });
            let code = if report.is_valid() { 0 } else { 1 };
            Ok(Output {
                text,
                json: json!({"ok": code == 0, "command": "validate", "kind": "deformation", "dims": m.dims(),
                             "valid": report.is_valid(), "failure": failure}),
                code,
            })
        }
        Body::Complex(_) | Body::Presentation(_) => {
            let kind = if matches!(doc.body, Body::Complex(_)) { "complex" } else { "presentation" };
            let c = match doc.complex() {
                Ok(c) => c,
                Err(e @ (Error::RelationViolated(_) | Error::InconsistentAbelianization { .. })) => {
                    let msg = e.to_string();
                    return Ok(Output {
                        text: format!("{kind}: invalid: {msg}\n"),
                        json: json!({"ok": false, "command": "validate", "kind": kind, "valid": false,
                                     "failure": {"message": msg}}),
                        code: 1,
                    });
                }
                Err(e) => return Err(e.into()),
            };
            let report = c.validate();
            let text = format!("{kind}: n = {}, ranks {}\n{report}\n", c.nvars(), tuple(c.ranks()));
            let failure = report
                .failure
                .as_ref()
                .map(|v| json!({"k": v.k, "row": v.row, "col": v.col, "value": v.value}));
            let code = if report.is_valid() { 0 } else { 1 };
            Ok(Output {
                text,
                json: json!({"ok": code == 0, "command": "validate", "kind": kind, "n": c.nvars(),
                             "ranks": c.ranks(), "valid": report.is_valid(), "failure": failure}),
                code,
            })
        }
    }
}

enum Twist {
    None,
    P(MonoidHom),
    Xi(RealHom),
}

fn choose_twist(doc: &Document, n: usize, p: Option<&str>, xi: Option<&str>) -> Result<Twist, Failure> {
    Ok(match (p, xi) {
        (Some(s), _) => Twist::P(parse_monoid_hom(n, s)?),
        (None, Some(s)) => Twist::Xi(parse_real_hom(n, s)?),
        (None, None) => match (&doc.query.p, &doc.query.xi) {
            (Some(rows), _) => Twist::P(monoid_hom_from_rows(n, rows)?),
            (None, Some(xi)) => Twist::Xi(xi.clone()),
            (None, None) => Twist::None,
        },
    })
}

fn betti_table(c: &FreeComplex, b: &BettiVector) -> String {
    let mut s = String::from("  k  rank  b_k\n");
    for (k, (r, x)) in c.ranks().iter().zip(b.as_slice()).enumerate() {
        let _ = writeln!(s, "{k:>3}  {r:>4}  {x:>3}");
    }
    s
}

pub fn betti(path: &Path, p: Option<&str>, xi: Option<&str>) -> Outcome {
    let doc = load(path)?;
    let c = doc.complex()?;
    let n = c.nvars();
    let (mode, header, b, extra) = match choose_twist(&doc, n, p, xi)? {
        Twist::None => ("laurent", format!("Betti numbers over Q(Z^{n})"), nvk_core::betti(&c)?, json!({})),
        Twist::P(p) => {
            let b = betti_specialized(&c, &p)?;
            let rows = rows_of(&p);
            let header = format!("specialized along p = {rows:?} (m = {})", p.target_rank());
            (
                "specialized",
                header,
                b,
                json!({"p": rows}),
            )
        }
        Twist::Xi(xi) => {
            let f = factor_hom(&xi)?;
            let b = novikov_betti(&c, &xi)?;
            let rows = rows_of(&f.p);
            let header = format!(
                "Novikov Betti numbers for xi = {xi}: irrationality degree {}, p = {rows:?}",
                f.p.target_rank()
            );
            let extra = json!({"xi": xi.to_string(), "irrationality_degree": f.p.target_rank(), "p": rows});
            ("novikov", header, b, extra)
        }
    };
    let text = format!("{header}\n{}b = {b}\n", betti_table(&c, &b));
    let mut json = json!({"ok": true, "command": "betti", "mode": mode, "n": n, "ranks": c.ranks(),
                          "betti": b.as_slice(), "euler_characteristic": b.euler_characteristic()});
    if let (Some(obj), Value::Object(extra)) = (json.as_object_mut(), extra) {
        obj.extend(extra);
    }
    Ok(Output { text, json, code: 0 })
}

pub fn jumploci(path: &Path, k: Option<usize>, q: Option<usize>) -> Outcome {
    let doc = load(path)?;
    let c = doc.complex()?;
    let k = k.or(doc.query.k).ok_or_else(|| Failure::Parse("the degree -k is required".into()))?;
    let q = q.or(doc.query.q).unwrap_or(1);
    let result = jump_loci(&c, k, q)?;
    let mut text = format!(
        "jump locus: k = {k}, q = {q}, baseline b_{k} = {} (locus: b_{k}(p) >= {})\n",
        result.baseline,
        result.baseline + q
    );
    let branch = |i: usize| -> String {
        if i == 0 {
            format!("∂_{} branch", k + 1)
        } else if i == q {
            format!("∂_{k} branch")
        } else {
            format!("mixed branch {i}+{}", q - i)
        }
    };
    let mut notes = Vec::new();
    let mut splits = Vec::new();
    for s in &result.splits {
        let i = s.split;
        let status = match s.minors {
            None => "impossible (drop exceeds rank)".to_string(),
            Some(m) => format!("{m} minor(s), {} subgroup(s)", s.subgroups),
        };
        let _ = writeln!(text, "  split {i}: drop ∂_{k} >= {i}, drop ∂_{} >= {}: {status}", k + 1, q - i);
        if s.minors.is_some() && s.subgroups == 0 {
            notes.push(format!("the {} is empty", branch(i)));
        }
        splits.push(json!({"split": i, "drops": [i, q - i], "minors": s.minors, "subgroups": s.subgroups}));
    }
    for note in &notes {
        let _ = writeln!(text, "note: {note}");
    }
    let _ = writeln!(text, "family ({} subgroup(s)):", result.family.len());
    for g in &result.family {
        let _ = writeln!(text, "  {g}");
    }
    let family: Vec<Value> = result
        .family
        .iter()
        .map(|g| {
            json!({"rank": g.rank(), "basis": g.basis().columns(), "constraints": g.constraints(),
                   "description": g.description()})
        })
        .collect();
    Ok(Output {
        text,
        json: json!({"ok": true, "command": "jumploci", "n": c.nvars(), "degree": k, "jump": q,
                     "baseline": result.baseline, "family": family, "splits": splits, "notes": notes}),
        code: 0,
    })
}

pub fn specseq(path: &Path, max_page: Option<usize>) -> Outcome {
    let doc = load(path)?;
    let m = doc.model()?;
    let report = validate_model(m);
    if !report.is_valid() {
        return Err(Failure::Invariant(format!("invalid model: {report}")));
    }
    let conv = converge(m)?;
    let limit = max_page.or(doc.query.max_page).unwrap_or(conv.stable_at).min(conv.last_page).max(1);
    let mut pages = vec![page(m, 1)?];
    pages.extend(conv.pages.iter().filter(|p| p.r <= limit).cloned());
    pages.truncate(limit);
    let mut text = format!("deformation model: dims {}\n", tuple(m.dims()));
    let mut page_json = Vec::new();
    for p in &pages {
        let ranks: Vec<usize> = p.deltas.iter().map(|d| d.rank()).collect();
        let _ = writeln!(text, "r={}  dims {}  Δ_{} ranks {}", p.r, tuple(&p.dims), p.r, tuple(&ranks));
        page_json.push(json!({"r": p.r, "dims": p.dims, "delta_ranks": ranks}));
    }
    if limit < conv.stable_at {
        let _ = writeln!(text, "stopped at r={limit}; pages change until r={}", conv.stable_at);
    }
    let _ = writeln!(text, "stable at r={}", conv.stable_at);
    let _ = writeln!(text, "E∞ = {}; Q(t) ranks of d + t·e give {}: cross-check OK", conv.e_infinity, conv.e_infinity);
    Ok(Output {
        text,
        json: json!({"ok": true, "command": "specseq", "dims": m.dims(), "pages": page_json,
                     "stable_at": conv.stable_at, "e_infinity": conv.e_infinity.as_slice(),
                     "generic_betti": conv.e_infinity.as_slice(), "cross_check": "ok"}),
        code: 0,
    })
}

pub fn compare(complex_path: &Path, model_path: &Path, p: Option<&str>) -> Outcome {
    let cdoc = load(complex_path)?;
    let mdoc = load(model_path)?;
    let c = cdoc.complex()?;
    let m = mdoc.model()?;
    let n = c.nvars();
    let p = match (p, &cdoc.query.p) {
        (Some(s), _) => parse_monoid_hom(n, s)?,
        (None, Some(rows)) => monoid_hom_from_rows(n, rows)?,
        (None, None) => MonoidHom::identity(n),
    };
    let report = compare_models(&c, m, &p)?;
    let rows = rows_of(&p);
    let text = format!("p = {rows:?}\n{report}\n");
    Ok(Output {
        text,
        json: json!({"ok": true, "command": "compare", "p": rows, "laurent": report.laurent.as_slice(),
                     "deformation": report.deformation.as_slice(), "agree": report.agree,
                     "convention": report.convention}),
        code: 0,
    })
}
