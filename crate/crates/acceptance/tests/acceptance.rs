//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use itm_certificates::{ab_domination, host_telescope_inequality, loop_sum_check, state_machine_run};
use itm_numkernel::{
    a_mat, a_product, b_mat, b_tilde, make_matrix, mat_product, matrix_invariants, Cubic, HighFloat, IBig, Mat3,
    MatrixKind, RBig,
};
use itm_renorm::{
    fixed_params, g_fixed_residual, k_sequence_adaptive, period_k2, pixel_col, pixel_row, raster_omega, KSeqSpec,
    PixelFate, RasterConfig, TypeStatus,
};
use itm_sadic::{compose_ks, rho_prefix};
use itm_sim::{itinerary, renorm_conjugacy_residual, Params};
use itm_spectral::{
    h_forward, h_inverse, host_sums, line_search, rational_descent, slope_report, stable_dir_periodic_exact,
    stable_direction, uv_from_xi, wm_verdict, LineTriple, SimplexPoint, WMStatus,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const PREC: usize = 192;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: u64) -> RBig {
    RBig::from_parts(IBig::from(n), d.into())
}

fn tol(x: f64) -> HighFloat {
    HighFloat::from_f64(x, PREC).unwrap()
}

fn explicit(ks: &[u64]) -> KSeqSpec {
    KSeqSpec::Explicit { ks: ks.to_vec() }
}

/// Periods of length 1..=3 over 1..=5 satisfying (k2).
fn k2_periods() -> Vec<Vec<u64>> {
    let mut all: Vec<Vec<u64>> = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..3 {
        layer = layer.iter().flat_map(|p| (1..=5u64).map(move |k| [p.clone(), vec![k]].concat())).collect();
        all.extend(layer.iter().cloned());
    }
    all.retain(|p| period_k2(0, p));
    all
}

fn c1_exact_algebra() -> Outcome {
    let t = Instant::now();
    let u = make_matrix(MatrixKind::U).unwrap();
    ensure(&u * &u == Mat3::identity(), || "U is not an involution".into())?;
    for k in 1..=1000u64 {
        let a = a_mat(k);
        let ainv = make_matrix(MatrixKind::AInv(k)).unwrap();
        ensure(&a * &ainv == Mat3::identity(), || format!("A_{k}·A_{k}^-1 ≠ I"))?;
        ensure(a.det() == IBig::NEG_ONE, || format!("det A_{k} ≠ -1"))?;
        let want = Cubic::new(IBig::ONE, IBig::NEG_ONE, -IBig::from(k), IBig::ONE);
        ensure(a.charpoly() == want, || format!("charpoly of A_{k}"))?;
        ensure(mat_product(&[u.clone(), ainv, u.clone()]).unwrap() == b_mat(k), || format!("B_{k} ≠ U·A^-1·U^-1"))?;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3}s"))?;
    Ok(format!("k = 1..1000 in {secs:.3}s"))
}

fn c2_abelianization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let m = rng.gen_range(1..=12);
        let ks: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=6)).collect();
        let s = compose_ks(&ks).map_err(|e| e.to_string())?;
        ensure(s.abelianization() == a_product(&ks), || format!("chain {ks:?}"))?;
    }
    Ok("200 random chains, m ≤ 12, k ≤ 6".into())
}

fn c3_b_tilde() -> Outcome {
    let instance = b_tilde(2, 2, 1, 1).unwrap();
    ensure(instance == Mat3::from_i64([[2, 5, 3], [1, 1, 1], [4, 9, 6]]), || format!("instance {instance:?}"))?;
    let mut cases = 0;
    for a in 2..=6 {
        for b in 2..=6 {
            for c in 1..=6 {
                for r in 0..=5u64 {
                    let mut direct = b_mat(a);
                    for _ in 0..2 * r {
                        direct = &direct * &b_mat(1);
                    }
                    direct = mat_product(&[direct, b_mat(b), b_mat(c)]).unwrap();
                    ensure(b_tilde(a, b, c, r).unwrap() == direct, || format!("a={a} b={b} c={c} r={r}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases (a,b ∈ [2,6], c ∈ [1,6], r ∈ [0,5]) and the [[2,5,3],[1,1,1],[4,9,6]] instance"))
}

fn c4_fixed_points() -> Outcome {
    let mut worst = 0f64;
    for k in 2..=10u64 {
        let p = fixed_params(k, PREC).map_err(|e| e.to_string())?;
        let res = g_fixed_residual(&p).map_err(|e| e.to_string())?;
        ensure(res < tol(1e-30), || format!("k={k}: residual {}", res.to_sci(5)))?;
        worst = worst.max(res.to_f64());
        let v = k_sequence_adaptive(PREC, 100, |prec| fixed_params(k, prec)).map_err(|e| e.to_string())?;
        ensure(v.status == TypeStatus::InfiniteToDepth(100) && v.k_prefix == vec![k; 100], || {
            format!("k={k}: {:?}", v.status)
        })?;
    }
    Ok(format!("k = 2..10, max residual {worst:.2e}, 100 constant indices each"))
}

fn c5_conjugacy() -> Outcome {
    let mut worst = 0f64;
    for k in [2u64, 3] {
        let rep = renorm_conjugacy_residual(&fixed_params(k, PREC).unwrap(), 100, 7, 10_000).map_err(|e| e.to_string())?;
        ensure(rep.samples == 100 && rep.preserving_f64 < 1e-25, || format!("k={k}: {}", rep.residual_preserving))?;
        worst = worst.max(rep.preserving_f64);
    }
    let rep = renorm_conjugacy_residual(&Params::new(q(1, 2), q(1, 4)), 100, 7, 10_000).map_err(|e| e.to_string())?;
    ensure(rep.preserving_f64 < 1e-25, || format!("(1/2,1/4): {}", rep.residual_preserving))?;
    Ok(format!("100 samples each, max residual {worst:.2e}, (1/2,1/4) residual {:.2e}", rep.preserving_f64))
}

fn c6_loop_sum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut strict = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let ks: Vec<u64> = (0..2 * n).map(|_| if rng.gen_bool(0.4) { 1 } else { rng.gen_range(1..=6) }).collect();
        let r = loop_sum_check(&explicit(&ks), n).map_err(|e| e.to_string())?;
        let evens: IBig = ks.iter().skip(1).step_by(2).map(|&k| IBig::from(k)).product();
        ensure(r.lhs_a == evens - IBig::ONE, || format!("lhs for {ks:?}"))?;
        let rhs: IBig = (0..n)
            .map(|j| IBig::from(ks[2 * j + 1] - 1) * ks[2 * j + 2..].iter().map(|&k| IBig::from(k)).product::<IBig>())
            .sum();
        ensure(r.rhs_b == rhs && r.rhs_b >= r.lhs_a, || format!("rhs for {ks:?}"))?;
        // an odd position is used when it follows some even position 2j+2
        // whose term has a non-zero coefficient k_{2j+2} − 1
        let used_odd = (0..n).any(|j| ks[2 * j + 1] >= 2 && (2 * j + 3..=2 * n).step_by(2).any(|i| ks[i - 1] >= 2));
        ensure(r.strict == used_odd && (r.rhs_b > r.lhs_a) == used_odd, || format!("strictness for {ks:?}"))?;
        strict += usize::from(r.strict);
    }
    Ok(format!("200 random specs, n ≤ 8, {strict} strict"))
}

fn c7_domination() -> Outcome {
    let d = ab_domination(&KSeqSpec::constant(2), 60).map_err(|e| e.to_string())?;
    let s4 = d.at(4).unwrap();
    ensure(s4.sup_a == IBig::from(5) && s4.inf_b == IBig::ONE && !s4.holds, || format!("n=4: {s4:?}"))?;
    let n_star = d.n_star.ok_or("no n_star for const-2")?;
    ensure(n_star <= 30, || format!("n_star = {n_star}"))?;
    let d = ab_domination(&KSeqSpec::constant(2), n_star + 20).map_err(|e| e.to_string())?;
    ensure(d.n_star == Some(n_star), || "const-2 domination does not persist".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    let mut worst = 0;
    while tested < 50 {
        let ks: Vec<u64> = (0..60).map(|_| rng.gen_range(1..=5)).collect();
        let both = |par: usize| ks.iter().skip(par).step_by(2).any(|&k| k > 1);
        if !(both(0) && both(1)) {
            continue;
        }
        let d = ab_domination(&explicit(&ks), 60).map_err(|e| e.to_string())?;
        worst = worst.max(d.n_star.ok_or_else(|| format!("no n_star for {ks:?}"))?);
        tested += 1;
    }
    Ok(format!("const-2 fails at 4 (5 vs 1), n_star = {n_star} persisting to {}; 50 random specs, largest n_star {worst}", n_star + 20))
}

fn c8_state_machine() -> Outcome {
    let run = state_machine_run(&KSeqSpec::constant(2), 2, 1, 3).map_err(|e| e.to_string())?;
    let int = |n: i64| RBig::from(n);
    let cols = run.column_ratios.clone().ok_or("A_2³ not positive")?;
    ensure(cols == [int(2), int(5), int(3)] && cols.iter().all(|r| *r <= int(8)), || format!("{cols:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases: Vec<(u64, Vec<u64>)> = (0..1000)
        .map(|_| {
            let c = rng.gen_range(2..=6);
            let len = rng.gen_range(1..=40usize);
            loop {
                let p1 = rng.gen_range(0.2..0.8);
                let ks: Vec<u64> =
                    (0..len).map(|_| if rng.gen_bool(p1) { 1 } else { rng.gen_range(2..=c) }).collect();
                if ks[len - 1] >= 2 || (len >= 2 && ks[len - 2] >= 2) {
                    break (c, ks);
                }
            }
        })
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(c, ks)| match state_machine_run(&explicit(ks), *c, 1, ks.len()) {
            Ok(r) if r.final_ok => None,
            Ok(_) => Some(format!("{ks:?} C={c}: final bound fails")),
            Err(e) => Some(format!("{ks:?} C={c}: {e}")),
        })
        .collect();
    ensure(failures.is_empty(), || format!("{} violations, first {}", failures.len(), failures[0]))?;
    Ok("1000 random admissible spans, 0 violations; A_2³ column ratios (2,5,3)".into())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn c9_simplex() -> Outcome {
    let s = SimplexPoint::new(q(1, 3), q(1, 3));
    ensure(h_forward(2, &s).map_err(|e| e.to_string())? == SimplexPoint::new(q(1, 6), q(1, 3)), || "H_2(1/3,1/3)".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut trips = 0;
    while trips < 1000 {
        let den = rng.gen_range(2..=10_000u64);
        let (a, b) = (rng.gen_range(1..den as i64), rng.gen_range(1..den as i64));
        if a + b >= den as i64 {
            continue;
        }
        let k = rng.gen_range(1..=6);
        let p = SimplexPoint::new(q(a, den), q(b, den));
        let back = h_inverse(k, &h_forward(k, &p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(back == p, || format!("round trip k={k} at ({a}/{den}, {b}/{den})"))?;
        trips += 1;
    }
    let mut points = 0;
    for den in 2..=50i64 {
        for x in 1..den {
            for y in 1..den - x {
                if gcd(gcd(x, y), den) != 1 {
                    continue;
                }
                let d = rational_descent(&q(x, den as u64), &q(y, den as u64)).map_err(|e| e.to_string())?;
                ensure(d.steps.len() < den as usize, || format!("({x}/{den}, {y}/{den}) took {}", d.steps.len()))?;
                points += 1;
            }
        }
    }
    let mut chains: Vec<Vec<u64>> = vec![vec![]];
    let mut layer = chains.clone();
    for _ in 0..4 {
        layer = layer.iter().flat_map(|c| (1..=4u64).map(move |k| [c.clone(), vec![k]].concat())).collect();
        chains.extend(layer.iter().cloned());
    }
    for c in &chains {
        ensure(slope_report(c).map_err(|e| e.to_string())?.ok, || format!("slopes for {c:?}"))?;
    }
    Ok(format!("1000 round trips, {points} descents, {} chains with negative slopes", chains.len()))
}

fn c10_stable_direction() -> Outcome {
    let target = HighFloat::pow2(-110, PREC);
    let it = stable_direction(&KSeqSpec::constant(2), &target, 5000, PREC).map_err(|e| e.to_string())?;
    let ex = stable_dir_periodic_exact(&[2], PREC).map_err(|e| e.to_string())?;
    let close = |a: &HighFloat, b: &HighFloat| (a.clone() - b).abs() < tol(1e-30);
    ensure(close(&it.u, &ex.dir.u) && close(&it.v, &ex.dir.v) && close(&it.w, &ex.dir.w), || "const-2 vs eigenvector".into())?;
    for (x, want) in [(&it.u, 0.13706), (&it.v, 0.30797), (&it.w, 0.55497)] {
        ensure((x.to_f64() - want).abs() < 2e-5, || format!("{} vs {want}", x.to_f64()))?;
    }
    let h = h_forward(2, &it.point()).map_err(|e| e.to_string())?;
    ensure(close(&h.u, &it.u) && close(&h.v, &it.v), || "not an H_2 fixed point".into())?;
    let periods = k2_periods();
    let bad: Vec<String> = periods
        .par_iter()
        .filter_map(|p| {
            let it = stable_direction(&KSeqSpec::periodic(p.clone()), &target, 20_000, PREC).ok()?;
            let ex = stable_dir_periodic_exact(p, PREC).ok()?;
            let ok = it.reached_target && close(&it.u, &ex.dir.u) && close(&it.v, &ex.dir.v) && close(&it.w, &ex.dir.w);
            (!ok).then(|| format!("{p:?}"))
        })
        .collect();
    ensure(bad.is_empty(), || format!("periods disagree: {bad:?}"))?;
    Ok(format!(
        "const-2 ({:.5}, {:.5}, {:.5}) to 1e-30; {} (k2) periods of length ≤ 3 agree",
        it.u.to_f64(),
        it.v.to_f64(),
        it.w.to_f64(),
        periods.len()
    ))
}

fn c11_weak_mixing() -> Outcome {
    let periods = k2_periods();
    let t = tol(1e-25);
    let bad: Vec<String> = periods
        .par_iter()
        .filter_map(|p| {
            let inv = matrix_invariants(&a_product(p)).ok()?;
            let v = wm_verdict(&KSeqSpec::periodic(p.clone()), 50, 20, &t, PREC);
            let hits = v.evidence.line_search.as_ref().map_or(usize::MAX, |l| l.hits.len());
            let ok = inv.rational_roots.is_empty() && v.status == WMStatus::WeakMixingPeriodic && hits == 0;
            (!ok).then(|| format!("{p:?}: roots {:?}, {:?}, {hits} hits", inv.rational_roots, v.status))
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let triple = LineTriple::new(2, 1, 0).map_err(|e| e.to_string())?;
    let planted = uv_from_xi(&triple, &q(1, 2)).map_err(|e| e.to_string())?;
    ensure(planted == SimplexPoint::new(q(1, 5), q(3, 5)), || format!("planted point {planted:?}"))?;
    let pf = SimplexPoint::new(HighFloat::from_rational(&planted.u, PREC), HighFloat::from_rational(&planted.v, PREC));
    let hits = line_search(&pf, &HighFloat::zero(PREC), 50, &t);
    ensure(hits.iter().any(|h| h.triple == triple), || "planted control not found".into())?;
    Ok(format!("{} (k2) periods: irreducible, no line hits at P = 50; planted (1/5, 3/5) found", periods.len()))
}

fn c12_host() -> Outcome {
    let c2 = KSeqSpec::constant(2);
    let rep = host_sums(&c2, &q(1, 2), 40).map_err(|e| e.to_string())?;
    ensure(rep.wm_terms[0] == q(1, 2) && rep.wm_terms[1] == q(1, 2), || "first two terms".into())?;
    for (i, s) in rep.wm_partial.iter().enumerate() {
        let n = i as i64 + 1;
        ensure(*s >= q(2, 5) * RBig::from(n), || format!("S_{n} = {s}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut groups = 0;
    for _ in 0..100 {
        let len = rng.gen_range(6..=24);
        let ks: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        let den = rng.gen_range(2..=500u64);
        let xi = q(rng.gen_range(1..den as i64), den);
        let r = host_telescope_inequality(&explicit(&ks), &xi, len).map_err(|e| e.to_string())?;
        ensure(r.ok && r.groups.iter().all(|g| g.raw >= g.telescoped), || format!("{ks:?} ξ = {xi}"))?;
        groups += r.groups.len();
    }
    for xi in [q(0, 1), q(1, 1)] {
        let rep = host_sums(&c2, &xi, 40).map_err(|e| e.to_string())?;
        let tel = host_telescope_inequality(&c2, &xi, 40).map_err(|e| e.to_string())?;
        let zero = rep.wm_partial.iter().chain(&rep.simplified_partial).chain(&tel.raw_partial).chain(&tel.telescoped_partial);
        ensure(zero.into_iter().all(|s| *s == RBig::ZERO), || format!("ξ = {xi} gives non-zero sums"))?;
    }
    Ok(format!("terms 1/2, 1/2; S_N ≥ 0.4·N for N ≤ 40; {groups} groups on 100 random cases; ξ ∈ {{0,1}} zero"))
}

fn c13_raster() -> Outcome {
    let cfg = |depth| RasterConfig { width: 100, height: 100, depth, precision: PREC, workers: Some(4), ..RasterConfig::default() };
    let t = Instant::now();
    let r = raster_omega(&cfg(12)).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    let p = fixed_params(2, PREC).unwrap();
    let fate = r.fate(pixel_col(p.alpha.to_f64(), 100), pixel_row(p.beta.to_f64(), 100));
    ensure(fate == PixelFate::Survivor, || format!("fixed-point pixel: {fate:?}"))?;
    let fate = r.fate(pixel_col(0.9, 100), pixel_row(0.1, 100));
    ensure(matches!(fate, PixelFate::Dead(1, _)), || format!("(0.9, 0.1) pixel: {fate:?}"))?;
    let masks: Vec<Vec<bool>> = [4, 8]
        .iter()
        .map(|&d| raster_omega(&cfg(d)).map(|r| r.survivor_mask()))
        .chain(std::iter::once(Ok(r.survivor_mask())))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for w in masks.windows(2) {
        ensure(w[1].iter().zip(&w[0]).all(|(deep, shallow)| !deep || *shallow), || "survivors do not nest".into())?;
    }
    Ok(format!("100x100 depth 12 in {secs:.2}s, {} survivors; nested over depths 4/8/12", r.summary.survivors))
}

fn c14_itinerary() -> Outcome {
    let p = fixed_params(2, PREC).unwrap();
    let itin = itinerary(&p, &HighFloat::one(PREC), 200).map_err(|e| e.to_string())?;
    let rho = rho_prefix(&KSeqSpec::constant(2), 200).map_err(|e| e.to_string())?;
    ensure(itin == rho, || "itinerary and rho differ".into())?;
    let s = itin.to_string();
    ensure(s.starts_with("3123113122") && s.len() == 200, || format!("prefix {}", &s[..10.min(s.len())]))?;
    Ok("200 symbols agree, prefix 3123113122".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 14] = [
        ("exact algebra suite", c1_exact_algebra),
        ("abelianization homomorphism", c2_abelianization),
        ("telescoped B block formula", c3_b_tilde),
        ("G fixed points", c4_fixed_points),
        ("renormalization conjugacy", c5_conjugacy),
        ("loop-sum identity", c6_loop_sum),
        ("A/B domination", c7_domination),
        ("state machine", c8_state_machine),
        ("simplex suite", c9_simplex),
        ("stable direction", c10_stable_direction),
        ("weak mixing for periodic sequences", c11_weak_mixing),
        ("Host sums", c12_host),
        ("raster", c13_raster),
        ("itinerary oracle", c14_itinerary),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
