use itm_numkernel::{HighFloat, IBig, RBig, Scalar};
use itm_renorm::*;
use itm_sim::Params;
use proptest::prelude::*;

fn q(n: i64, d: u64) -> RBig {
    RBig::from_parts(IBig::from(n), d.into())
}

#[test]
fn fixed_points_are_fixed_and_constant() {
    let tol = HighFloat::from_f64(1e-30, 192).unwrap();
    for k in 2..=10u64 {
        let p = fixed_params(k, 192).unwrap();
        assert!(g_fixed_residual(&p).unwrap() < tol, "k={k}");
        assert!((p.beta.clone() - p.alpha.clone() * p.alpha.clone()).abs() < tol);
        let v = k_sequence_adaptive(192, 100, |prec| fixed_params(k, prec)).unwrap();
        assert_eq!(v.status, TypeStatus::InfiniteToDepth(100), "k={k} at {:?} bits", v.precision_bits);
        assert_eq!(v.k_prefix, vec![k; 100]);
    }
}

#[test]
fn radius_tracking_stops_before_the_orbit_is_lost() {
    // At 192 bits the expansion along the k = 10 fixed orbit exceeds the
    // available precision well before 100 steps.
    let v = k_sequence(&fixed_params(10, 192).unwrap(), 100);
    let TypeStatus::PrecisionExhausted(m) = v.status else { panic!("{v:?}") };
    assert!(m > 10);
    assert!(v.k_prefix.iter().all(|&k| k == 10));
}

#[test]
fn cylinder_point_for_constant_two_is_the_fixed_point() {
    let c = params_from_kseq(&KSeqSpec::constant(2), 10, 192).unwrap();
    let f = fixed_params(2, 192).unwrap();
    let tol = HighFloat::from_f64(1e-30, 192).unwrap();
    assert!((c.params.alpha.clone() - f.alpha).abs() < tol);
    assert!((c.params.beta.clone() - f.beta).abs() < tol);
}

#[test]
fn cylinder_points_reproduce_their_sequence() {
    for (s, n) in [("3+(2)", 40), ("(2,1,1,2)", 40), ("(1,3)+(2,1,1)", 40), ("(5,1,2)", 40)] {
        let spec: KSeqSpec = s.replace("(1,3)+", "1,3+").parse().unwrap();
        let c = params_from_kseq(&spec, n, 192).unwrap();
        let want = spec.prefix(n).unwrap();
        let exact = k_sequence(&c.exact, n);
        assert_eq!(exact.status, TypeStatus::InfiniteToDepth(n), "{s}");
        assert_eq!(exact.k_prefix, want, "{s}");
        let v = k_sequence_adaptive(192, n, |prec| Ok(params_from_kseq(&spec, n, prec)?.params)).unwrap();
        assert_eq!(v.k_prefix, want, "{s}");
    }
}

#[test]
fn cylinder_requires_k2() {
    assert_eq!(params_from_kseq(&KSeqSpec::periodic(vec![2, 1]), 5, 192).unwrap_err(), RenormError::ViolatesK2);
    assert_eq!(
        params_from_kseq(&KSeqSpec::Explicit { ks: vec![2, 2] }, 5, 192).unwrap_err(),
        RenormError::FiniteSpec
    );
}

fn interior_rational() -> impl Strategy<Value = Params<RBig>> {
    (2u64..4000, 1u64..4000).prop_filter_map("inside U°", |(a, b)| {
        (b < a && a < 4000).then(|| Params::new(q(a as i64, 4000), q(b as i64, 4000)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inverse_branch_undoes_g(p in interior_rational()) {
        let (g, k) = g_step(&p).unwrap();
        let k = u64::try_from(k).unwrap();
        prop_assert_eq!(g_inverse_branch(k, &g).unwrap(), p);
    }

    #[test]
    fn g_maps_u_into_u_union_l(p in interior_rational()) {
        let (g, _) = g_step(&p).unwrap();
        prop_assert!(g.alpha > q(0, 1) && g.alpha <= q(1, 1));
        prop_assert!(g.beta > g.alpha.clone() - q(1, 1) && g.beta <= g.alpha);
    }

    #[test]
    fn g_after_inverse_branch_is_identity(k in 1u64..=6, a in 1u64..500, b in 1u64..500) {
        let (a, b) = if b > a { (b, a) } else { (a, b) };
        let p = Params::new(q(a as i64, 500), q(b as i64, 500));
        let pre = g_inverse_branch(k, &p).unwrap();
        let (g, kk) = g_step(&pre).unwrap();
        prop_assert_eq!(g, p);
        prop_assert_eq!(kk, IBig::from(k));
    }

    #[test]
    fn float_verdicts_agree_with_exact_ones(p in interior_rational()) {
        let exact = k_sequence(&p, 12);
        let fl = k_sequence(&Params::new(p.alpha.to_high(192), p.beta.to_high(192)), 12);
        match fl.status {
            TypeStatus::PrecisionExhausted(m) => prop_assert_eq!(&fl.k_prefix[..], &exact.k_prefix[..fl.k_prefix.len().min(m)]),
            _ => prop_assert_eq!(fl, TypeVerdict { precision_bits: Some(192), ..exact }),
        }
    }
}

#[test]
fn exact_ties_are_exits() {
    // β = α is on the boundary of U°.
    let v = k_sequence(&Params::new(q(1, 3), q(1, 3)), 4);
    assert_eq!(v.status, TypeStatus::FiniteAtStep(1));
}
