//! Workloads shared by the benchmarks.

use nvk_core::{LaurentMatrix, LaurentPoly};

/// `k×k` matrix with entries `t1^i t2^j - 1`; generic rank `k`.
pub fn binomial_matrix(k: usize) -> LaurentMatrix {
    let entries = (0..k * k)
        .map(|idx| {
            let (i, j) = ((idx / k) as i64, (idx % k) as i64);
            LaurentPoly::from_int_terms(2, &[(&[i + 1, j], 1), (&[0, 0], -1)])
        })
        .collect();
    LaurentMatrix::new(k, k, 2, entries).expect("square shape")
}
