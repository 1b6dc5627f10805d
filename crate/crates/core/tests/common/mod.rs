//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nvk_core::laurent::{rat, ratio};
use nvk_core::{
    DeformationModel, ExponentVector, FreeComplex, LaurentMatrix, LaurentPoly, MonoidHom, QMatrix, Rational,
};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_exponent<R: Rng>(rng: &mut R, n: usize, range: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-range..=range)).collect()
}

pub fn monomial<R: Rng>(rng: &mut R, n: usize) -> LaurentPoly {
    let c = [1, -1, 2][rng.gen_range(0..3)];
    LaurentPoly::monomial(ExponentVector(random_exponent(rng, n, 1)), rat(c))
}

/// `t^u − t^v` with `u ≠ v`.
pub fn binomial<R: Rng>(rng: &mut R, n: usize) -> LaurentPoly {
    loop {
        let u = random_exponent(rng, n, 1);
        let v = random_exponent(rng, n, 1);
        if u != v {
            return LaurentPoly::from_terms(n, [(u, rat(1)), (v, rat(-1))]).unwrap();
        }
    }
}

/// A polynomial with at most four terms, biased towards zero coefficient sum.
pub fn small_poly<R: Rng>(rng: &mut R, n: usize) -> LaurentPoly {
    match rng.gen_range(0..6) {
        0 => LaurentPoly::zero(n),
        1 => monomial(rng, n),
        2 | 3 => binomial(rng, n),
        4 => binomial(rng, n).checked_add(&binomial(rng, n)).unwrap(),
        _ => {
            let terms: Vec<(Vec<i64>, Rational)> =
                (0..rng.gen_range(1..=3)).map(|_| (random_exponent(rng, n, 1), rat(rng.gen_range(-2..=2)))).collect();
            LaurentPoly::from_terms(n, terms).unwrap()
        }
    }
}

fn matrix_from(rows: usize, cols: usize, n: usize, f: impl FnMut(usize, usize) -> LaurentPoly) -> LaurentMatrix {
    let mut f = f;
    let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
    LaurentMatrix::new(rows, cols, n, entries).unwrap()
}

/// Valid complexes over `L_n` with `n ≤ 2`, ranks `≤ 3` and entry supports
/// `≤ 4`: either a single random boundary or a Koszul-type three-term
/// complex `u·(a, b)`, `(b, −a)ᵀ·w`.
pub fn random_complex<R: Rng>(rng: &mut R) -> FreeComplex {
    let n = rng.gen_range(1..=2);
    if rng.gen_bool(0.5) {
        let (r0, r1) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let d1 = matrix_from(r0, r1, n, |_, _| small_poly(rng, n));
        FreeComplex::new(n, vec![r0, r1], vec![d1]).unwrap()
    } else {
        let (r0, r2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a = binomial(rng, n);
        let b = if rng.gen_bool(0.3) { LaurentPoly::zero(n) } else { binomial(rng, n) };
        let u: Vec<LaurentPoly> = (0..r0).map(|_| monomial(rng, n)).collect();
        let w: Vec<LaurentPoly> = (0..r2).map(|_| if rng.gen_bool(0.8) { monomial(rng, n) } else { binomial(rng, n) }).collect();
        let ab = [a.clone(), b.clone()];
        let ba = [b, -&a];
        let d1 = matrix_from(r0, 2, n, |i, j| &u[i] * &ab[j]);
        let d2 = matrix_from(2, r2, n, |i, j| &ba[i] * &w[j]);
        let c = FreeComplex::new(n, vec![r0, 2, r2], vec![d1, d2]).unwrap();
        assert!(c.validate().is_valid());
        c
    }
}

/// Every `p: Z^n -> Z^m` with `m ≤ 2` and entries in `[-3, 3]`.
pub fn p_grid(n: usize) -> Vec<MonoidHom> {
    let mut out = vec![MonoidHom::trivial(n)];
    let rows: Vec<Vec<i64>> = (0..7i64.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let x = code % 7 - 3;
                    code /= 7;
                    x
                })
                .collect()
        })
        .collect();
    for r in &rows {
        out.push(MonoidHom::from_rows(n, std::slice::from_ref(r)).unwrap());
    }
    for r1 in &rows {
        for r2 in &rows {
            out.push(MonoidHom::from_rows(n, &[r1.clone(), r2.clone()]).unwrap());
        }
    }
    out
}

/// A unimodular `n x n` integer matrix as a product of elementary moves.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> MonoidHom {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let c = rng.gen_range(-2..=2);
            for k in 0..n {
                m[i][k] += c * m[j][k];
            }
        } else if rng.gen_bool(0.5) {
            m[i].iter_mut().for_each(|x| *x = -*x);
        }
    }
    MonoidHom::from_rows(n, &m).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Evaluates `f` at a point of `(Q^*)^n`.
pub fn evaluate(f: &LaurentPoly, point: &[Rational]) -> Rational {
    f.terms().fold(Rational::zero(), |acc, (e, c)| {
        let mut m = c.clone();
        for (x, &k) in point.iter().zip(e.as_slice()) {
            let pow = if k >= 0 { num_traits::pow(x.clone(), k as usize) } else { num_traits::pow(x.recip(), (-k) as usize) };
            m *= pow;
        }
        acc + m
    })
}

/// Gaussian elimination over `Q`, written independently of the library.
pub fn rank_q(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let cols = a.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let s = &f * &a[rank][j];
                    a[i][j] -= s;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Generic rank of a Laurent matrix as the maximum rank over several
/// random evaluation points. Exact with overwhelming probability.
pub fn generic_rank_by_evaluation(m: &LaurentMatrix, seed: u64) -> usize {
    let mut rng = rng(seed);
    let n = *m.context();
    (0..6)
        .map(|_| {
            let point: Vec<Rational> = (0..n)
                .map(|_| loop {
                    let x = ratio(rng.gen_range(-97..=97), rng.gen_range(1..=89));
                    if !x.is_zero() && x != rat(1) && x != rat(-1) {
                        break x;
                    }
                })
                .collect();
            let rows: Vec<Vec<Rational>> =
                (0..m.rows()).map(|i| (0..m.cols()).map(|j| evaluate(m.get(i, j), &point)).collect()).collect();
            rank_q(&rows)
        })
        .max()
        .unwrap_or(0)
}

/// Betti numbers from evaluation ranks.
pub fn betti_by_evaluation(c: &FreeComplex, seed: u64) -> Vec<usize> {
    let ranks: Vec<usize> = c.boundaries().iter().map(|m| generic_rank_by_evaluation(m, seed)).collect();
    let rk = |k: usize| if k == 0 { 0 } else { ranks.get(k - 1).copied().unwrap_or(0) };
    (0..c.ranks().len()).map(|k| c.ranks()[k] - rk(k) - rk(k + 1)).collect()
}

/// All set partitions of `0..len` as block-index vectors in restricted
/// growth form, built by counting in mixed radix and discarding
/// non-canonical labels.
pub fn all_partitions(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = len.pow(len as u32).max(1);
    for mut code in 0..total {
        let labels: Vec<usize> = (0..len)
            .map(|_| {
                let x = code % len.max(1);
                code /= len.max(1);
                x
            })
            .collect();
        let canonical = labels.iter().enumerate().all(|(i, &l)| l <= labels[..i].iter().copied().max().map_or(0, |m| m + 1));
        if canonical {
            out.push(labels);
        }
    }
    out
}

// ---------------------------------------------------------- deformation models

fn q_zeros(rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); cols]; rows]
}

fn to_q(m: &[Vec<Rational>], rows: usize, cols: usize) -> QMatrix {
    QMatrix::from_rows(cols, (), if rows == 0 { vec![] } else { m.to_vec() }).unwrap()
}

/// Dense description used while assembling models.
#[derive(Clone, Debug)]
pub struct RawModel {
    pub dims: Vec<usize>,
    pub d: Vec<Vec<Vec<Rational>>>,
    pub e: Vec<Vec<Vec<Rational>>>,
}

impl RawModel {
    pub fn empty(top: usize) -> Self {
        RawModel { dims: vec![0; top + 1], d: vec![vec![]; top], e: vec![vec![]; top] }
    }

    pub fn build(&self) -> DeformationModel {
        let top = self.dims.len() - 1;
        let fix = |m: &Vec<Vec<Rational>>, k: usize| -> QMatrix {
            let (rows, cols) = (self.dims[k + 1], self.dims[k]);
            if m.is_empty() {
                QMatrix::qzeros(rows, cols)
            } else {
                to_q(m, rows, cols)
            }
        };
        DeformationModel::new(
            self.dims.clone(),
            (0..top).map(|k| fix(&self.d[k], k)).collect(),
            (0..top).map(|k| fix(&self.e[k], k)).collect(),
        )
        .unwrap()
    }

    fn dense(m: &DeformationModel) -> Self {
        RawModel {
            dims: m.dims().to_vec(),
            d: m.d_maps().iter().map(|x| x.to_rows()).collect(),
            e: m.e_maps().iter().map(|x| x.to_rows()).collect(),
        }
    }
}

fn block_diag(a: &[Vec<Rational>], ar: usize, ac: usize, b: &[Vec<Rational>], br: usize, bc: usize) -> Vec<Vec<Rational>> {
    let mut out = q_zeros(ar + br, ac + bc);
    for i in 0..ar {
        for j in 0..ac {
            out[i][j] = a.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Rational::zero);
        }
    }
    for i in 0..br {
        for j in 0..bc {
            out[ar + i][ac + j] = b.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Rational::zero);
        }
    }
    out
}

/// Direct sum, degree by degree.
pub fn direct_sum(a: &DeformationModel, b: &DeformationModel) -> DeformationModel {
    let top = a.top_degree().max(b.top_degree());
    let pad = |m: &DeformationModel| {
        let mut r = RawModel::dense(m);
        while r.dims.len() < top + 1 {
            r.dims.push(0);
            r.d.push(vec![]);
            r.e.push(vec![]);
        }
        r
    };
    let (ra, rb) = (pad(a), pad(b));
    let mut out = RawModel::empty(top);
    for k in 0..=top {
        out.dims[k] = ra.dims[k] + rb.dims[k];
    }
    for k in 0..top {
        out.d[k] = block_diag(&ra.d[k], ra.dims[k + 1], ra.dims[k], &rb.d[k], rb.dims[k + 1], rb.dims[k]);
        out.e[k] = block_diag(&ra.e[k], ra.dims[k + 1], ra.dims[k], &rb.e[k], rb.dims[k + 1], rb.dims[k]);
    }
    out.build()
}

/// Degree `k` basis `a_1..a_j`, degree `k+1` basis `b_1..b_j`,
/// `d a_{i+1} = b_i`, `e a_i = b_i`. The class `[a_1]` survives to page
/// `j` and is killed by `Δ_j [a_1] = [b_j]`.
pub fn massey_chain(top: usize, k: usize, j: usize) -> DeformationModel {
    let mut r = RawModel::empty(top);
    r.dims[k] = j;
    r.dims[k + 1] = j;
    let mut d = q_zeros(j, j);
    let mut e = q_zeros(j, j);
    for i in 0..j {
        e[i][i] = rat(1);
        if i + 1 < j {
            d[i][i + 1] = rat(1);
        }
    }
    r.d[k] = d;
    r.e[k] = e;
    r.build()
}

/// One class in degree `k`.
pub fn free_class(top: usize, k: usize) -> DeformationModel {
    let mut r = RawModel::empty(top);
    r.dims[k] = 1;
    r.build()
}

/// `d x = y` with `x` in degree `k`.
pub fn acyclic_pair(top: usize, k: usize) -> DeformationModel {
    let mut r = RawModel::empty(top);
    r.dims[k] = 1;
    r.dims[k + 1] = 1;
    r.d[k] = vec![vec![rat(1)]];
    r.build()
}

/// Graded tensor product with `D = d⊗1 + σ⊗d'` and `E = e⊗1 + σ⊗e'`,
/// `σ = (−1)^deg`.
pub fn tensor(a: &DeformationModel, b: &DeformationModel) -> DeformationModel {
    let top = a.top_degree() + b.top_degree();
    let mut offsets = vec![vec![0usize; b.dims().len()]; a.dims().len()];
    let mut dims = vec![0usize; top + 1];
    for (i, &da) in a.dims().iter().enumerate() {
        for (j, &db) in b.dims().iter().enumerate() {
            offsets[i][j] = dims[i + j];
            dims[i + j] += da * db;
        }
    }
    let mut raw = RawModel::empty(top);
    raw.dims = dims.clone();
    for k in 0..top {
        raw.d[k] = q_zeros(dims[k + 1], dims[k]);
        raw.e[k] = q_zeros(dims[k + 1], dims[k]);
    }
    for (i, &da) in a.dims().iter().enumerate() {
        for (j, &db) in b.dims().iter().enumerate() {
            if i + j >= top {
                continue;
            }
            let src = offsets[i][j];
            let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
            for x in 0..da {
                for y in 0..db {
                    let col = src + x * db + y;
                    if i < a.top_degree() {
                        let dst = offsets[i + 1][j];
                        for x2 in 0..a.dims()[i + 1] {
                            let row = dst + x2 * db + y;
                            raw.d[i + j][row][col] += a.d(i).get(x2, x).clone();
                            raw.e[i + j][row][col] += a.e(i).get(x2, x).clone();
                        }
                    }
                    if j < b.top_degree() {
                        let dst = offsets[i][j + 1];
                        for y2 in 0..b.dims()[j + 1] {
                            let row = dst + x * b.dims()[j + 1] + y2;
                            raw.d[i + j][row][col] += &sign * b.d(j).get(y2, y);
                            raw.e[i + j][row][col] += &sign * b.e(j).get(y2, y);
                        }
                    }
                }
            }
        }
    }
    raw.build()
}

/// Invertible integer matrix and its inverse over `Q`.
fn random_gl<R: Rng>(rng: &mut R, n: usize) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let id = |n: usize| (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect::<Vec<Vec<Rational>>>();
    let (mut p, mut inv) = (id(n), id(n));
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = rat(rng.gen_range(-2..=2));
        // P <- E P with E = I + c e_ij; P^{-1} <- P^{-1} E^{-1}
        for k in 0..n {
            let s = &c * &p[j][k];
            p[i][k] += s;
        }
        for row in inv.iter_mut() {
            let s = &c * &row[i];
            row[j] -= s;
        }
    }
    (p, inv)
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>], inner: usize, cols: usize) -> Vec<Vec<Rational>> {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// `P_{k+1} d_k P_k^{-1}` and likewise for `e`.
pub fn conjugate<R: Rng>(rng: &mut R, m: &DeformationModel) -> DeformationModel {
    let gl: Vec<_> = m.dims().iter().map(|&n| random_gl(rng, n)).collect();
    let raw = RawModel::dense(m);
    let mut out = RawModel::empty(m.top_degree());
    out.dims = m.dims().to_vec();
    for k in 0..m.top_degree() {
        let (rows, cols) = (m.dims()[k + 1], m.dims()[k]);
        if rows == 0 || cols == 0 {
            continue;
        }
        let conj = |x: &Vec<Vec<Rational>>| mat_mul(&mat_mul(&gl[k + 1].0, x, rows, cols), &gl[k].1, cols, cols);
        out.d[k] = conj(&raw.d[k]);
        out.e[k] = conj(&raw.e[k]);
    }
    out.build()
}

/// Random valid model with total dimension `≤ 12` and top degree `≤ 3`.
pub fn random_model<R: Rng>(rng: &mut R) -> DeformationModel {
    let top = rng.gen_range(1..=3);
    let mut m = RawModel::empty(top).build();
    let total = |m: &DeformationModel| m.dims().iter().sum::<usize>();
    let blocks = rng.gen_range(1..=4);
    for _ in 0..blocks {
        let k = rng.gen_range(0..top);
        let piece = match rng.gen_range(0..5) {
            0 | 1 => massey_chain(top, k, rng.gen_range(1..=3)),
            2 => free_class(top, rng.gen_range(0..=top)),
            3 => acyclic_pair(top, k),
            _ => {
                let a = [massey_chain(1, 0, 1), free_class(1, rng.gen_range(0..=1))].choose(rng).unwrap().clone();
                let b = massey_chain(1, 0, rng.gen_range(1..=2));
                let t = tensor(&a, &b);
                if t.top_degree() > top {
                    free_class(top, k)
                } else {
                    t
                }
            }
        };
        if total(&m) + total(&piece) <= 12 {
            m = direct_sum(&m, &piece);
        }
    }
    if total(&m) == 0 {
        m = massey_chain(top, 0, 1);
    }
    conjugate(rng, &m)
}

/// Page dimensions computed from the full stacked system of an r-chain,
/// independently of the library's incremental chain tracking.
pub fn page_dims_by_stacking(m: &DeformationModel, r: usize) -> Vec<usize> {
    let dims = m.dims();
    let span = |vs: &[Vec<Rational>]| rank_q(vs);
    // ω₁ parts of all r-chains in degree k
    let starts = |k: usize, r: usize| -> Vec<Vec<Rational>> {
        if r == 0 {
            return vec![];
        }
        let mk = dims[k];
        let d = m.d(k);
        let e = m.e(k);
        let mk1 = d.rows();
        let rows_total = r * mk1;
        let cols_total = r * mk;
        let mut sys = vec![vec![Rational::zero(); cols_total]; rows_total];
        for blk in 0..r {
            for i in 0..mk1 {
                for j in 0..mk {
                    sys[blk * mk1 + i][blk * mk + j] = d.get(i, j).clone();
                    if blk > 0 {
                        sys[blk * mk1 + i][(blk - 1) * mk + j] = -e.get(i, j).clone();
                    }
                }
            }
        }
        let kernel = QMatrix::from_rows(cols_total, (), sys).unwrap().kernel();
        kernel.into_iter().collect()
    };
    (0..dims.len())
        .map(|k| {
            let mk = dims[k];
            let b: Vec<Vec<Rational>> = if k == 0 { vec![] } else { m.d(k - 1).transpose().to_rows() };
            let w: Vec<Vec<Rational>> = starts(k, r).into_iter().map(|v| v[..mk].to_vec()).collect();
            let mb: Vec<Vec<Rational>> = if k == 0 || r < 2 {
                vec![]
            } else {
                let e = m.e(k - 1);
                let mprev = dims[k - 1];
                starts(k - 1, r - 1).into_iter().map(|v| e.mul_vec(&v[(r - 2) * mprev..(r - 1) * mprev])).collect()
            };
            let top = span(&[w.clone(), b.clone()].concat());
            let floor = span(&[mb, b].concat());
            top - floor
        })
        .collect()
}
