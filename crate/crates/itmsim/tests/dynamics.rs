use itm_numkernel::{real_root_in_unit, Cubic, HighFloat, IBig, RBig, Scalar};
use itm_sim::*;
use proptest::prelude::*;

fn q(n: i64, d: u64) -> RBig {
    RBig::from_parts(IBig::from(n), d.into())
}

fn fixed(k: u64, prec: usize) -> Params<HighFloat> {
    let a = real_root_in_unit(&Cubic::p_k(k), prec).unwrap();
    Params::new(a.clone(), a.clone() * a)
}

#[test]
fn fixed_point_first_return_from_one() {
    let p = fixed(2, 192);
    let r = first_return(&p, &HighFloat::one(192), 10).unwrap();
    assert_eq!(r.time, 2);
    assert!((r.y.to_f64() - 0.6431041321).abs() < 1e-9);
}

#[test]
fn fixed_point_itinerary_prefix() {
    let p = fixed(2, 192);
    let w = itinerary(&p, &HighFloat::one(192), 10).unwrap();
    assert_eq!(w.to_string(), "3123113122");
}

#[test]
fn conjugacy_is_orientation_preserving() {
    for k in [2u64, 3] {
        let rep = renorm_conjugacy_residual(&fixed(k, 192), 100, 7, 10_000).unwrap();
        assert!(rep.preserving_f64 < 1e-25, "k={k} {}", rep.residual_preserving);
        assert_eq!(rep.orientation, "preserving");
    }
    let rep = renorm_conjugacy_residual(&Params::new(q(1, 2), q(1, 4)), 100, 7, 10_000).unwrap();
    assert_eq!(rep.preserving_f64, 0.0);
    assert_eq!(rep.k, "2");
}

#[test]
fn zero_samples_give_zero() {
    let rep = renorm_conjugacy_residual(&Params::new(q(1, 2), q(1, 4)), 0, 0, 10).unwrap();
    assert_eq!(rep.preserving_f64, 0.0);
    assert_eq!(rep.orientation, "undetermined");
}

#[test]
fn fixed_point_cover_measure_strictly_decreases() {
    let p = fixed(2, 192);
    let m = cover_measures(&p, 20, DEFAULT_INTERVAL_CAP).unwrap();
    for w in m.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn finite_type_cover_stabilizes() {
    // (2/3, 1/3) renormalizes to β' = 0: the map is an exchange after finitely many steps.
    let p = Params::new(q(2, 3), q(1, 3));
    let m = cover_measures(&p, 12, DEFAULT_INTERVAL_CAP).unwrap();
    assert_eq!(m[10], m[11]);
}

#[test]
fn cover_cap_is_enforced() {
    let p = fixed(2, 128);
    assert_eq!(attractor_cover(&p, 30, 4), Err(SimError::TooManyIntervals { cap: 4 }));
}

fn rational_params() -> impl Strategy<Value = Params<RBig>> {
    (1u64..1000, 1u64..1000).prop_map(|(a, b)| {
        let (a, b) = if b > a { (b, a) } else { (a, b) };
        Params::new(q(a as i64, 1000), q(b as i64, 1000))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exactly_one_branch_holds(p in rational_params(), x in 0u64..=10_000) {
        let x = q(x as i64, 10_000);
        let one = q(1, 1);
        let c1 = one.clone() - p.alpha.clone();
        let c2 = one.clone() - p.beta.clone();
        let preds = [x < c1, c1 <= x && x < c2, c2 <= x && x <= one];
        prop_assert_eq!(preds.iter().filter(|&&b| b).count(), 1);
        let b = branch(&p, &x) as usize;
        prop_assert!(preds[b - 1]);
        let y = itm_eval(&p, &x).unwrap();
        prop_assert!(y >= q(0, 1) && y <= q(1, 1));
    }

    #[test]
    fn cover_measure_never_increases(p in rational_params()) {
        let m = cover_measures(&p, 8, DEFAULT_INTERVAL_CAP).unwrap();
        prop_assert!(m[0] <= q(1, 1));
        for w in m.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn covers_nest(p in rational_params()) {
        let a = attractor_cover(&p, 4, DEFAULT_INTERVAL_CAP).unwrap();
        let b = attractor_cover(&p, 5, DEFAULT_INTERVAL_CAP).unwrap();
        prop_assert!(b.is_subset_of(&a));
    }

    #[test]
    fn return_lands_in_window(p in rational_params(), u in 0u64..=1000) {
        let x = q(1, 1) - p.alpha.clone() + p.alpha.clone() * q(u as i64, 1000);
        let r = first_return(&p, &x, 100_000).unwrap();
        prop_assert!(r.y >= q(1, 1) - p.alpha.clone());
        prop_assert!(r.time >= 1);
    }
}

#[test]
fn float_guard_band_triggers_near_boundary() {
    let p = Params::new(HighFloat::from_i64(1, 64) / HighFloat::from_i64(2, 64), HighFloat::from_i64(1, 64) / HighFloat::from_i64(4, 64));
    let x = p.alpha.rational_like(&q(1, 2));
    assert_eq!(itinerary(&p, &x, 3), Err(SimError::PrecisionExhausted { step: 0 }));
}
