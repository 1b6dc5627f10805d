//! Randomized invariants. Complexes and models come from seeded generators so
//! shrinking acts on the seed.

mod common;

use nvk_core::io::{complex_to_json, model_to_json, parse_document};
use nvk_core::laurent::ratio;
use nvk_core::lattice::is_saturated;
use nvk_core::specseq::SpectralSequence;
use nvk_core::{
    betti, betti_specialized, e_infinity, generic_betti, jump_loci, novikov_betti, page, theta_cohomology, MonoidHom,
    QMatrix, Rational, RealHom,
};
use proptest::prelude::*;
use rand::Rng;

type Basis = Vec<Vec<Rational>>;

fn random_p<R: Rng>(rng: &mut R, n: usize) -> MonoidHom {
    let m = rng.gen_range(0..=2);
    if m == 0 {
        return MonoidHom::trivial(n);
    }
    let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    MonoidHom::from_rows(n, &rows).unwrap()
}

fn random_xi<R: Rng>(rng: &mut R, n: usize) -> RealHom {
    let m0 = rng.gen_range(1..=2);
    let rows: Vec<Vec<Rational>> =
        (0..m0).map(|_| (0..n).map(|_| ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect()).collect();
    RealHom::new(QMatrix::from_rows(n, (), rows).unwrap(), vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn specialization_never_lowers_betti_numbers(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_complex(&mut rng);
        let p = random_p(&mut rng, c.nvars());
        let b = betti_specialized(&c, &p).unwrap();
        prop_assert!(b.dominates(&betti(&c).unwrap()));
        prop_assert_eq!(b.euler_characteristic(), betti(&c).unwrap().euler_characteristic());
    }

    #[test]
    fn unimodular_specialization_preserves_betti_numbers(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_complex(&mut rng);
        let p = common::unimodular(&mut rng, c.nvars());
        prop_assert_eq!(betti_specialized(&c, &p).unwrap(), betti(&c).unwrap());
    }

    #[test]
    fn novikov_betti_is_invariant_under_positive_rescaling(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_complex(&mut rng);
        let xi = random_xi(&mut rng, c.nvars());
        let s = ratio(rng.gen_range(1..=7), rng.gen_range(1..=7));
        prop_assert_eq!(novikov_betti(&c, &xi).unwrap(), novikov_betti(&c, &xi.scaled(&s)).unwrap());
    }

    #[test]
    fn novikov_betti_dominates_generic_betti(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_complex(&mut rng);
        let xi = random_xi(&mut rng, c.nvars());
        prop_assert!(novikov_betti(&c, &xi).unwrap().dominates(&generic_betti(&c).unwrap()));
    }

    #[test]
    fn jump_loci_are_proper_saturated_and_nested(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_complex(&mut rng);
        for k in 0..=c.top_degree() {
            let (q1, q2) = match (jump_loci(&c, k, 1), jump_loci(&c, k, 2)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(nvk_core::Error::ResourceLimit(_)), _) | (_, Err(nvk_core::Error::ResourceLimit(_))) => continue,
                (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
            };
            for g in q1.family.iter().chain(&q2.family) {
                prop_assert!(g.is_proper());
                prop_assert!(is_saturated(g.basis()));
            }
            for (i, g) in q1.family.iter().enumerate() {
                for (j, h) in q1.family.iter().enumerate() {
                    prop_assert!(i == j || !h.contains(g));
                }
            }
            for g in &q2.family {
                prop_assert!(q1.family.iter().any(|h| h.contains(g)));
            }
        }
    }

    #[test]
    fn complex_documents_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_complex(&mut rng);
        let back = parse_document(&complex_to_json(&c)).unwrap().complex().unwrap();
        prop_assert_eq!(back, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mz_shrinks_and_mb_grows(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::random_model(&mut rng);
        let mut s = SpectralSequence::new(&m).unwrap();
        let top = m.top_degree();
        let mut prev: Option<(Vec<Basis>, Vec<Basis>)> = None;
        for _ in 0..5 {
            let mz: Vec<_> = (0..=top).map(|k| s.mz_basis(k)).collect();
            let mb: Vec<_> = (0..=top).map(|k| s.mb_basis(k)).collect();
            if let Some((pz, pb)) = &prev {
                for k in 0..=top {
                    let n = m.dims()[k];
                    let b: Vec<Vec<Rational>> = if k == 0 { vec![] } else { m.d(k - 1).transpose().to_rows() };
                    let dim = |v: &[Vec<Rational>]| nvk_core::linalg::span_dim(n, &[v, &b].concat());
                    // MZ_(r+1) ⊆ MZ_(r), MB_(r) ⊆ MB_(r+1) and MB ⊆ MZ, all modulo coboundaries
                    prop_assert_eq!(dim(&[pz[k].clone(), mz[k].clone()].concat()), dim(&pz[k]));
                    prop_assert_eq!(dim(&[pb[k].clone(), mb[k].clone()].concat()), dim(&mb[k]));
                    prop_assert_eq!(dim(&[mz[k].clone(), mb[k].clone()].concat()), dim(&mz[k]));
                }
            }
            prev = Some((mz, mb));
            s.advance();
        }
    }

    #[test]
    fn page_two_is_theta_cohomology_of_page_one(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::random_model(&mut rng);
        let p1 = page(&m, 1).unwrap();
        prop_assume!(!p1.deltas.is_empty());
        prop_assert_eq!(theta_cohomology(&p1.deltas).unwrap().0, page(&m, 2).unwrap().dims);
    }

    #[test]
    fn chain_witnesses_are_chains(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::random_model(&mut rng);
        for r in 1..=4 {
            let p = page(&m, r).unwrap();
            for reps in &p.representatives {
                for w in reps {
                    prop_assert_eq!(w.omegas.len(), r);
                    prop_assert!(w.is_valid_for(&m));
                }
            }
        }
    }

    #[test]
    fn limit_is_invariant_under_change_of_basis(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::random_model(&mut rng);
        let c = common::conjugate(&mut rng, &m);
        prop_assert_eq!(e_infinity(&m).unwrap(), e_infinity(&c).unwrap());
        for r in 1..=3 {
            prop_assert_eq!(page(&m, r).unwrap().dims, page(&c, r).unwrap().dims);
        }
    }

    #[test]
    fn model_documents_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::random_model(&mut rng);
        let back = parse_document(&model_to_json(&m)).unwrap();
        prop_assert_eq!(back.model().unwrap(), &m);
    }
}
