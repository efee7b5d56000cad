use itm_certificates::*;
use itm_numkernel::{a_mat, b_mat, HighFloat, IBig, Mat3};
use itm_renorm::KSeqSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn explicit(ks: &[u64]) -> KSeqSpec {
    KSeqSpec::Explicit { ks: ks.to_vec() }
}

fn ib(n: u64) -> IBig {
    IBig::from(n)
}

#[test]
fn path_weight_examples() {
    let s = explicit(&[1, 3]);
    assert_eq!(path_weight(&"bc".parse().unwrap(), Version::A, &s).unwrap(), ib(2));
    let s = explicit(&[1, 2, 1, 3]);
    let bcdd: EdgeWord = "bcdd".parse().unwrap();
    assert_eq!(path_weight(&bcdd, Version::A, &s).unwrap(), ib(1));
    assert_eq!(path_weight(&bcdd, Version::B, &s).unwrap(), ib(3));
    assert_eq!(path_weight(&"bebc".parse().unwrap(), Version::A, &s).unwrap(), ib(4));
    // position offset: "dd" over k_3, k_4
    assert_eq!(path_weight(&"dd@3".parse().unwrap(), Version::B, &s).unwrap(), ib(3));
}

#[test]
fn edge_words_reject_bad_input() {
    assert!(matches!("bd".parse::<EdgeWord>(), Err(CertError::NonComposable { at: 2, .. })));
    assert_eq!("bx".parse::<EdgeWord>(), Err(CertError::BadEdge('x')));
    assert_eq!("".parse::<EdgeWord>(), Err(CertError::EmptyWord));
    assert_eq!("b@0".parse::<EdgeWord>(), Err(CertError::OutOfRange(0)));
    let s = explicit(&[1, 2]);
    assert!(matches!(path_weight(&"bcd".parse().unwrap(), Version::A, &s), Err(CertError::OutOfRange(_))));
    assert_eq!("bebc@2".parse::<EdgeWord>().unwrap().to_string(), "bebc@2");
}

/// The transition graph of A_k: an edge u → v for every non-zero entry
/// (A_k)_{u,v}, with that multiplicity; B_k likewise.
#[test]
fn single_edge_weights_match_the_matrices() {
    for k in 1..=7u64 {
        let s = KSeqSpec::constant(k);
        for (label, e) in [('a', Edge::A), ('b', Edge::B), ('c', Edge::C), ('d', Edge::D), ('e', Edge::E)] {
            let (from, to) = e.ends();
            let w: EdgeWord = label.to_string().parse().unwrap();
            for (v, m) in [(Version::A, a_mat(k)), (Version::B, b_mat(k))] {
                let want = m.get(from as usize - 1, to as usize - 1).clone();
                assert_eq!(path_weight(&w, v, &s).unwrap(), want, "{label} k={k} {v:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn a_and_b_weights_swap_on_d_and_e(k in 1u64..50) {
        for e in [Edge::A, Edge::B, Edge::C] {
            prop_assert_eq!(e.weight(Version::A, k), e.weight(Version::B, k));
        }
        prop_assert_eq!(Edge::E.weight(Version::A, k), Edge::D.weight(Version::B, k));
        prop_assert_eq!(Edge::D.weight(Version::A, k), Edge::E.weight(Version::B, k));
        prop_assert_eq!(Edge::E.weight(Version::A, k), k);
        prop_assert_eq!(Edge::D.weight(Version::A, k), 1);
    }

    /// Weights of a word count the paths it labels: summing over all words
    /// of a given length and endpoints gives the matrix product entry.
    #[test]
    fn words_count_product_entries(ks in prop::collection::vec(1u64..5, 1..6)) {
        let s = explicit(&ks);
        let n = ks.len();
        let edges = [Edge::A, Edge::B, Edge::C, Edge::D, Edge::E];
        let mut totals = [[IBig::ZERO, IBig::ZERO, IBig::ZERO], [IBig::ZERO, IBig::ZERO, IBig::ZERO], [IBig::ZERO, IBig::ZERO, IBig::ZERO]];
        let mut stack: Vec<Vec<Edge>> = edges.iter().map(|&e| vec![e]).collect();
        while let Some(w) = stack.pop() {
            if w.len() == n {
                let word = EdgeWord::new(w.clone(), 1).unwrap();
                let (u, v) = (w[0].ends().0, w[n - 1].ends().1);
                totals[u as usize - 1][v as usize - 1] += path_weight(&word, Version::A, &s).unwrap();
                continue;
            }
            let end = w.last().unwrap().ends().1;
            for &e in &edges {
                if e.ends().0 == end {
                    let mut x = w.clone();
                    x.push(e);
                    stack.push(x);
                }
            }
        }
        // paths u → v over positions 1..n count entry (u, v) of A_{k_1}⋯A_{k_n}
        let m = ks.iter().fold(Mat3::identity(), |acc, &k| &acc * &a_mat(k));
        for (u, row) in totals.iter().enumerate() {
            for (v, t) in row.iter().enumerate() {
                prop_assert_eq!(t, m.get(u, v));
            }
        }
    }
}

#[test]
fn loop_sum_examples() {
    let r = loop_sum_check(&explicit(&[1, 2, 1, 3]), 2).unwrap();
    assert_eq!((r.lhs_a.clone(), r.closed_form.clone(), r.rhs_b.clone(), r.strict), (ib(5), ib(5), ib(5), false));
    let r = loop_sum_check(&explicit(&[1, 2, 2, 3]), 2).unwrap();
    assert_eq!((r.lhs_a.clone(), r.rhs_b.clone(), r.strict, r.odd_witness), (ib(5), ib(8), true, Some(3)));
    for k2 in 1..=9u64 {
        let r = loop_sum_check(&explicit(&[4, k2]), 1).unwrap();
        assert_eq!(r.lhs_a, ib(k2 - 1));
    }
    // k_3 = 2 alone does not make the sum strict when k_2 = 1
    let r = loop_sum_check(&explicit(&[1, 1, 2, 3]), 2).unwrap();
    assert_eq!((r.lhs_a.clone(), r.rhs_b.clone(), r.strict, r.odd_witness), (ib(2), ib(2), false, None));
    assert!(matches!(loop_sum_check(&explicit(&[1, 2, 1]), 2), Err(CertError::OutOfRange(_))));
}

/// Σ_j (k_{2j+2} − 1) Π_{i > 2j+2} k_i: every term of the B-sum written out.
fn rhs_oracle(ks: &[u64], n: usize) -> IBig {
    (0..n)
        .map(|j| ib(ks[2 * j + 1] - 1) * ks[2 * j + 2..2 * n].iter().map(|&k| ib(k)).product::<IBig>())
        .sum()
}

#[test]
fn loop_sum_identity_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let ks: Vec<u64> = (0..2 * n).map(|_| if rng.gen_bool(0.4) { 1 } else { rng.gen_range(1..=6) }).collect();
        let r = loop_sum_check(&explicit(&ks), n).unwrap();
        let evens: IBig = ks.iter().skip(1).step_by(2).map(|&k| ib(k)).product();
        assert_eq!(r.lhs_a, evens - IBig::ONE, "{ks:?}");
        assert_eq!(r.closed_form, r.lhs_a);
        assert_eq!(r.rhs_b, rhs_oracle(&ks, n), "{ks:?}");
        assert!(r.rhs_b >= r.lhs_a);
        assert_eq!(r.strict, r.odd_witness.is_some(), "{ks:?}");
        if ks.iter().skip(2).step_by(2).all(|&k| k == 1) {
            assert!(!r.strict);
        }
    }
}

#[test]
fn constant_two_domination_fails_at_four() {
    let d = ab_domination(&KSeqSpec::constant(2), 60).unwrap();
    let a4 = Mat3::from_i64([[5, 5, 4], [1, 5, 3], [3, 4, 3]]);
    let b4 = Mat3::from_i64([[3, 6, 11], [1, 3, 5], [5, 11, 20]]);
    let a = a_mat(2);
    let b = b_mat(2);
    assert_eq!(&(&a * &a) * &(&a * &a), a4);
    assert_eq!(&(&b * &b) * &(&b * &b), b4);
    let s4 = d.at(4).unwrap();
    assert_eq!((s4.sup_a.clone(), s4.inf_b.clone(), s4.holds), (ib(5), ib(1), false));
    assert_eq!(d.claimed_n0, Some(4));
    assert_eq!(d.claimed_n0_holds, Some(false));
    let n_star = d.n_star.unwrap();
    assert!(n_star <= 30);
    let d = ab_domination(&KSeqSpec::constant(2), n_star + 20).unwrap();
    assert_eq!(d.n_star, Some(n_star));
    assert!(d.steps[n_star - 1..].iter().all(|s| s.holds));
    assert!(!d.steps[n_star - 2].holds);

    assert!(ab_domination(&KSeqSpec::constant(3), 60).unwrap().n_star.unwrap() <= 30);
    assert_eq!(ab_domination(&KSeqSpec::periodic(vec![2, 1]), 60).unwrap_err(), CertError::ViolatesK2);
    assert!(matches!(ab_domination(&KSeqSpec::constant(2), 9), Err(CertError::Precondition(_))));
}

#[test]
fn domination_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 50 {
        let ks: Vec<u64> = (0..60).map(|_| rng.gen_range(1..=5)).collect();
        let both = |par: usize| ks.iter().skip(par).step_by(2).any(|&k| k > 1);
        if !(both(0) && both(1)) {
            continue;
        }
        let d = ab_domination(&explicit(&ks), 60).unwrap();
        assert!(d.n_star.is_some(), "{ks:?}");
        tested += 1;
    }
}

fn close(x: &HighFloat, want: f64, tol: f64) -> bool {
    (x.to_f64() - want).abs() < tol
}

#[test]
fn lyapunov_constant_two() {
    let r = lyapunov_report(&KSeqSpec::constant(2), 20, 192).unwrap();
    assert!(close(&r.exponents[0], 0.589, 0.01));
    assert!(close(&r.exponents[1], 0.221, 0.01));
    assert!(close(&r.exponents[2], -0.810, 0.01));
    assert!(r.pattern_ok());
    assert!(r.sum.abs() < HighFloat::from_f64(1e-20, 192).unwrap());
    // the limits are the logs of |eigenvalues| of A_2
    let r = lyapunov_report(&KSeqSpec::constant(2), 400, 192).unwrap();
    for (x, want) in r.exponents.iter().zip([1.8019377358f64.ln(), 1.2469796037f64.ln(), 0.4450418679f64.ln()]) {
        assert!(close(x, want, 2e-3));
    }
}

#[test]
fn lyapunov_sum_vanishes_and_signs_settle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..40 {
        let ks: Vec<u64> = (0..60).map(|_| rng.gen_range(1..=5)).collect();
        let spec = explicit(&ks);
        let first_block = itm_sadic::telescope_ks(&ks).first().filter(|b| b.full).map(|b| b.end);
        for n in [10, 25, 40, 60] {
            let r = lyapunov_report(&spec, n, 192).unwrap();
            assert!(r.sum.abs() < HighFloat::from_f64(1e-20, 192).unwrap(), "{ks:?} n={n}");
            if first_block.is_some_and(|e| n > e) {
                assert!(r.pattern_ok(), "{ks:?} n={n}: {:?}", r.signs);
            }
        }
    }
    for n in 10..=30 {
        assert!(lyapunov_report(&KSeqSpec::periodic(vec![1, 1, 2]), n, 128).unwrap().pattern_ok());
    }
    let r = lyapunov_report(&KSeqSpec::periodic(vec![2, 1]), 10, 128).unwrap();
    assert_eq!(r.k2, Some(false));
}
