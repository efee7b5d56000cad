use itm_numkernel::{a_product, HighFloat, IBig, RBig};
use itm_renorm::KSeqSpec;
use itm_spectral::*;
use proptest::prelude::*;

const PREC: usize = 192;

fn q(n: i64, d: u64) -> RBig {
    RBig::from_parts(IBig::from(n), d.into())
}

fn tiny(e: f64) -> HighFloat {
    HighFloat::from_f64(e, PREC).unwrap()
}

fn target() -> HighFloat {
    HighFloat::pow2(-110, PREC)
}

fn close(a: &StableDir, b: &StableDir, tol: f64) -> bool {
    let t = tiny(tol);
    (a.u.clone() - &b.u).abs() < t && (a.v.clone() - &b.v).abs() < t && (a.w.clone() - &b.w).abs() < t
}

/// ‖x·M − λx‖_∞ / ‖x‖_∞ for a float row vector.
fn eigen_residual(x: &[HighFloat; 3], ks: &[u64], lambda: &HighFloat) -> HighFloat {
    let m = a_product(ks);
    let prec = lambda.precision();
    let mut worst = HighFloat::zero(prec);
    let mut norm = HighFloat::zero(prec);
    for j in 0..3 {
        let mut acc = HighFloat::zero(prec);
        for (i, xi) in x.iter().enumerate() {
            acc = acc + xi.clone() * HighFloat::from_ibig(m.get(i, j), prec);
        }
        worst = worst.max((acc - lambda.clone() * &x[j]).abs());
        norm = norm.max(x[j].abs());
    }
    worst / norm
}

#[test]
fn constant_two_b_iteration_matches_the_eigenvector() {
    let it = stable_direction(&KSeqSpec::constant(2), &target(), 5000, PREC).unwrap();
    let ex = stable_dir_periodic_exact(&[2], PREC).unwrap();
    assert!(it.reached_target);
    assert!(close(&it, &ex.dir, 1e-30));
    for (x, want) in [(&it.u, 0.13706), (&it.v, 0.30797), (&it.w, 0.55497)] {
        assert!((x.to_f64() - want).abs() < 2e-5);
    }
    let h = h_forward(2, &it.point()).unwrap();
    assert!((h.u - &it.u).abs() < tiny(1e-30) && (h.v - &it.v).abs() < tiny(1e-30));
    // D = 1/λ_3 at the fixed point
    let d = HighFloat::from_i64(2, PREC) * (HighFloat::one(PREC) - &it.v) + HighFloat::one(PREC) - &it.u;
    assert!((d * &ex.lambda3 - HighFloat::one(PREC)).abs() < tiny(1e-30));
}

#[test]
fn periodic_eigenvector_residuals() {
    for period in [vec![2], vec![1, 1, 2], vec![2, 3], vec![3, 1, 1]] {
        let ps = stable_dir_periodic_exact(&period, 256).unwrap();
        let x = ps.dir.a_stable_vector();
        let r = eigen_residual(&x, &period, &ps.lambda3);
        assert!(r < HighFloat::from_f64(1e-40, 256).unwrap(), "{period:?}: {r:?}");
        assert!(ps.dir.u > HighFloat::zero(256) && ps.dir.v > HighFloat::zero(256) && ps.dir.w > HighFloat::zero(256));
        let cp = ps.period_product.charpoly();
        assert!(cp.eval_float(&ps.lambda3.with_precision(256)).abs() < HighFloat::from_f64(1e-60, 256).unwrap());
    }
    assert_eq!(stable_dir_periodic_exact(&[1], PREC).unwrap_err(), SpectralError::ViolatesK2);
    assert_eq!(stable_dir_periodic_exact(&[1, 2], PREC).unwrap_err(), SpectralError::ViolatesK2);
}

#[test]
fn periodic_specs_agree_with_their_oracles() {
    for period in [vec![2, 3], vec![2, 1, 1], vec![5, 1, 4], vec![1, 1, 3], vec![4, 4]] {
        let spec = KSeqSpec::periodic(period.clone());
        let it = stable_direction(&spec, &target(), 20_000, PREC).unwrap();
        let ex = stable_dir_periodic_exact(&period, PREC).unwrap();
        assert!(it.reached_target, "{period:?}");
        assert!(close(&it, &ex.dir, 1e-30), "{period:?}");
        // conjugacy: (v, u, u + v − 1) from the B side is a λ_3 row eigenvector
        let r = eigen_residual(&it.a_stable_vector(), &period, &ex.lambda3);
        assert!(r < tiny(1e-25), "{period:?}");
    }
}

#[test]
fn seeds_agree_within_the_certificate() {
    let spec: KSeqSpec = "1,3+(2,1,1)".parse().unwrap();
    let loose = HighFloat::pow2(-60, PREC);
    let a = stable_direction_seeded(&spec, [1, 1, 1], &loose, 5000, PREC).unwrap();
    let b = stable_direction_seeded(&spec, [1, 2, 5], &loose, 5000, PREC).unwrap();
    let diam = a.certified_diameter.clone().unwrap().to_f64();
    assert!(diam < 1e-18);
    assert!(close(&a, &b, 2.0 * diam));
}

#[test]
fn eventually_periodic_point_is_pushed_forward() {
    let ps = stable_dir_eventually_periodic(&[3], &[2], PREC).unwrap();
    let it = stable_direction(&"3+(2)".parse().unwrap(), &target(), 5000, PREC).unwrap();
    assert!(close(&it, &ps.dir, 1e-30));
}

#[test]
fn line_search_finds_the_planted_point_only() {
    let t = LineTriple::new(2, 1, 0).unwrap();
    let xi = HighFloat::from_rational(&q(1, 2), PREC);
    let planted = uv_from_xi(&t, &xi).unwrap();
    let zero = HighFloat::zero(PREC);
    let hits = line_search(&planted, &zero, 50, &tiny(1e-25));
    let h = hits.iter().find(|h| h.triple == t).expect("planted triple");
    assert!((h.xi.clone() - &xi).abs() < tiny(1e-40));
    assert!(line_search(&planted, &zero, 0, &tiny(1e-25)).is_empty());

    let it = stable_direction(&KSeqSpec::constant(2), &target(), 5000, PREC).unwrap();
    let diam = it.certified_diameter.clone().unwrap();
    assert!(line_search(&it.point(), &diam, 50, &tiny(1e-25)).is_empty());
}

proptest! {
    #[test]
    fn xi_and_uv_round_trip(p in -20i64..=20, qq in -20i64..=20, r in -20i64..=20, n in 1i64..1000) {
        prop_assume!(!(p == qq && qq == r));
        let t = LineTriple::new(p, qq, r).unwrap();
        let xi = q(n, 1000);
        prop_assume!(xi.clone() + RBig::from(r - p - qq) != RBig::ZERO);
        let pt = uv_from_xi(&t, &xi).unwrap();
        prop_assert_eq!(line_residual(&pt, &t), RBig::ZERO);
        if pt.u != RBig::ONE {
            prop_assert_eq!(xi_from_line(&t, &pt).unwrap(), xi);
        }
    }
}

#[test]
fn rational_xi_gives_rational_points_and_conversely() {
    let t = LineTriple::new(2, 1, 0).unwrap();
    // rational ξ: exact rational coordinates
    let pt = uv_from_xi(&t, &q(3, 7)).unwrap();
    assert_eq!(xi_from_line(&t, &pt).unwrap(), q(3, 7));
    // irrational ξ = √2 − 1: u has no good rational approximation with small
    // denominator, while ξ is recovered from the float point
    let xi = HighFloat::from_i64(2, PREC).sqrt() - HighFloat::one(PREC);
    let pt = uv_from_xi(&t, &xi).unwrap();
    assert!((xi_from_line(&t, &pt).unwrap() - &xi).abs() < tiny(1e-50));
    for b in 1..=2000i64 {
        let scaled = pt.u.clone() * HighFloat::from_i64(b, PREC);
        assert!(scaled.dist_to_int() > tiny(1e-12), "u ≈ a/{b}");
    }
}

#[test]
fn h_vectors_and_host_terms() {
    let c2 = KSeqSpec::constant(2);
    let h = |n| h_vector(&c2, n).unwrap().map(|x| x.to_string());
    assert_eq!(h(1), ["1", "3", "2"]);
    assert_eq!(h(2), ["3", "4", "3"]);

    let rep = host_sums(&c2, &q(1, 2), 40).unwrap();
    assert_eq!(rep.wm_terms[0], q(1, 2));
    assert_eq!(rep.wm_terms[1], q(1, 2));
    assert_eq!(rep.simplified_terms[0], q(1, 2));
    for (n, s) in rep.wm_partial.iter().enumerate() {
        assert!(*s >= q(2, 5) * RBig::from(n as i64 + 1));
    }
    assert!(rep.wm_partial.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(rep.growth, GrowthClass::Linear);
    for xi in [q(0, 1), q(1, 1)] {
        let rep = host_sums(&c2, &xi, 30).unwrap();
        assert!(rep.wm_partial.iter().chain(&rep.simplified_partial).all(|s| *s == RBig::ZERO));
        assert_eq!(rep.growth, GrowthClass::Bounded);
    }
}

#[test]
fn weak_mixing_verdicts() {
    let tol = tiny(1e-25);
    for s in ["(2)", "(2,1,1,2)", "3+(2,1,1,2)"] {
        let v = wm_verdict(&s.parse().unwrap(), 50, 20, &tol, PREC);
        assert_eq!(v.status, WMStatus::WeakMixingPeriodic, "{s}");
        assert_eq!(v.evidence.irreducible, Some(true), "{s}");
        assert!(v.evidence.line_search.as_ref().unwrap().hits.is_empty());
    }
    let v = wm_verdict(&KSeqSpec::Explicit { ks: vec![2, 3, 2] }, 50, 20, &tol, PREC);
    assert_eq!(v.status, WMStatus::Inconclusive { reason: "undeclared tail".into() });
    let v = wm_verdict(&"gen:sparse".parse().unwrap(), 20, 20, &tol, PREC);
    assert!(matches!(v.status, WMStatus::WeakMixingCertified { p: 20 } | WMStatus::Inconclusive { .. }), "{v:?}");
}
