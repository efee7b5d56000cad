use itm_numkernel::{HighFloat, IBig, RBig, Scalar, UBig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{IntervalSet, Params, SimError, Word};

/// Partition cell of `x`: 1 on [0, 1−α), 2 on [1−α, 1−β), 3 on [1−β, 1].
/// No domain or guard checks.
pub fn branch<S: Scalar>(p: &Params<S>, x: &S) -> u8 {
    let one = x.one_like();
    if *x < one.clone() - p.alpha.clone() {
        1
    } else if *x < one - p.beta.clone() {
        2
    } else {
        3
    }
}

fn apply_branch<S: Scalar>(p: &Params<S>, x: &S, b: u8) -> S {
    match b {
        1 => x.clone() + p.alpha.clone(),
        2 => x.clone() + p.beta.clone(),
        _ => x.clone() - x.one_like() + p.beta.clone(),
    }
}

fn check_domain<S: Scalar>(x: &S) -> Result<(), SimError> {
    if *x < x.zero_like() || *x > x.one_like() {
        return Err(SimError::OutOfDomain(x.describe()));
    }
    Ok(())
}

/// Branch selection with the float guard band: a float point closer than
/// the guard to 1−α or 1−β is refused.
fn guarded_branch<S: Scalar>(p: &Params<S>, x: &S, step: usize) -> Result<u8, SimError> {
    let one = x.one_like();
    if x.within_guard(&(one.clone() - p.alpha.clone())) || x.within_guard(&(one - p.beta.clone())) {
        return Err(SimError::PrecisionExhausted { step });
    }
    Ok(branch(p, x))
}

/// One application of T_{α,β}.
pub fn itm_eval<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, SimError> {
    check_domain(x)?;
    Ok(apply_branch(p, x, branch(p, x)))
}

/// Symbols of the first `n` points of the orbit of `x`, each read before
/// the map is applied.
pub fn itinerary<S: Scalar>(p: &Params<S>, x: &S, n: usize) -> Result<Word, SimError> {
    if n == 0 {
        return Err(SimError::ZeroSteps);
    }
    check_domain(x)?;
    let mut out = Vec::with_capacity(n);
    let mut y = x.clone();
    for step in 0..n {
        let b = guarded_branch(p, &y, step)?;
        out.push(b);
        if step + 1 < n {
            y = apply_branch(p, &y, b);
        }
    }
    Ok(Word::from_symbols(out).expect("symbols are 1..=3"))
}

/// Image of a union of intervals under the three translations.
pub fn push_forward<S: Scalar>(p: &Params<S>, s: &IntervalSet<S>) -> IntervalSet<S> {
    let Some((first, _)) = s.intervals().first() else {
        return IntervalSet::empty();
    };
    let one = first.one_like();
    let zero = first.zero_like();
    let c1 = one.clone() - p.alpha.clone();
    let c2 = one.clone() - p.beta.clone();
    let cells = [
        (zero, c1.clone(), p.alpha.clone()),
        (c1, c2.clone(), p.beta.clone()),
        (c2, one.clone(), p.beta.clone() - one),
    ];
    let mut pieces = Vec::with_capacity(3 * s.len());
    for (l, r) in s.intervals() {
        for (cl, cr, shift) in &cells {
            let lo = if l > cl { l.clone() } else { cl.clone() };
            let hi = if r < cr { r.clone() } else { cr.clone() };
            if lo < hi {
                pieces.push((lo + shift.clone(), hi + shift.clone()));
            }
        }
    }
    IntervalSet::from_pieces(pieces)
}

/// Closure of Tⁿ([0,1]); fails once the union has more than `cap`
/// components.
pub fn attractor_cover<S: Scalar>(p: &Params<S>, depth: usize, cap: usize) -> Result<IntervalSet<S>, SimError> {
    if depth == 0 {
        return Err(SimError::ZeroSteps);
    }
    let mut s = IntervalSet::unit(&p.alpha);
    for _ in 0..depth {
        s = push_forward(p, &s);
        if s.len() > cap {
            return Err(SimError::TooManyIntervals { cap });
        }
    }
    Ok(s)
}

/// Measures of T^1([0,1]), …, T^depth([0,1]).
pub fn cover_measures<S: Scalar>(p: &Params<S>, depth: usize, cap: usize) -> Result<Vec<S>, SimError> {
    let mut s = IntervalSet::unit(&p.alpha);
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        s = push_forward(p, &s);
        if s.len() > cap {
            return Err(SimError::TooManyIntervals { cap });
        }
        out.push(s.measure().unwrap_or_else(|| p.alpha.zero_like()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Return<S> {
    pub y: S,
    pub time: u64,
}

/// First return of `x ∈ [1−α, 1]` to the window [1−α, 1].
pub fn first_return<S: Scalar>(p: &Params<S>, x: &S, max_steps: u64) -> Result<Return<S>, SimError> {
    let lo = x.one_like() - p.alpha.clone();
    if *x < lo || *x > x.one_like() {
        return Err(SimError::NotInWindow(x.describe()));
    }
    let mut y = x.clone();
    for t in 1..=max_steps {
        let b = guarded_branch(p, &y, t as usize - 1)?;
        y = apply_branch(p, &y, b);
        if y >= lo {
            return Ok(Return { y, time: t });
        }
    }
    Err(SimError::MaxStepsExceeded(max_steps))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub samples: usize,
    pub k: String,
    /// max |h(R(x)) − T'(h(x))| with h(x) = (x − (1−α))/α.
    pub residual_preserving: String,
    /// Same with h(x) = (1 − x)/α.
    pub residual_reversing: String,
    pub orientation: &'static str,
    #[serde(skip)]
    pub preserving_f64: f64,
    #[serde(skip)]
    pub reversing_f64: f64,
}

const CONJ_TOLERANCE: f64 = 1e-25;

/// Samples x uniformly in [1−α, 1] and compares the rescaled first-return
/// map with T at G(α, β), for both affine identifications of the window
/// with [0, 1].
pub fn renorm_conjugacy_residual<S: Scalar>(
    p: &Params<S>,
    samples: usize,
    seed: u64,
    max_steps: u64,
) -> Result<ConjugacyReport, SimError> {
    let (g, k) = p.renormalized()?;
    let zero = p.alpha.zero_like();
    let one = p.alpha.one_like();
    let lo = one.clone() - p.alpha.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut res_p, mut res_r) = (zero.clone(), zero.clone());
    let denom = UBig::ONE << 53;
    for _ in 0..samples {
        let u: u64 = rng.gen_range(0..(1u64 << 53));
        let u = p.alpha.rational_like(&RBig::from_parts(IBig::from(u), denom.clone()));
        let x = lo.clone() + p.alpha.clone() * u;
        let r = first_return(p, &x, max_steps)?;

        let hx = (x.clone() - lo.clone()) / p.alpha.clone();
        let hy = (r.y.clone() - lo.clone()) / p.alpha.clone();
        let e = (hy - itm_eval(&g, &clamp01(hx))?).abs_val();
        if e > res_p {
            res_p = e;
        }

        let hx = (one.clone() - x) / p.alpha.clone();
        let hy = (one.clone() - r.y) / p.alpha.clone();
        let e = (hy - itm_eval(&g, &clamp01(hx))?).abs_val();
        if e > res_r {
            res_r = e;
        }
    }
    let (fp, fr) = (res_p.to_f64(), res_r.to_f64());
    let orientation = match (fp < CONJ_TOLERANCE, fr < CONJ_TOLERANCE) {
        _ if samples == 0 => "undetermined",
        (true, false) => "preserving",
        (false, true) => "reversing",
        (true, true) => "both",
        (false, false) => "neither",
    };
    Ok(ConjugacyReport {
        samples,
        k: k.to_string(),
        residual_preserving: res_p.describe(),
        residual_reversing: res_r.describe(),
        orientation,
        preserving_f64: fp,
        reversing_f64: fr,
    })
}

fn clamp01<S: Scalar>(x: S) -> S {
    if x < x.zero_like() {
        x.zero_like()
    } else if x > x.one_like() {
        x.one_like()
    } else {
        x
    }
}

/// Runs `f` at `start` bits, doubling the precision on
/// [`SimError::PrecisionExhausted`] until `cap`. Returns the value and the
/// precision that produced it.
pub fn with_adaptive_precision<T>(
    start: usize,
    cap: usize,
    mut f: impl FnMut(usize) -> Result<T, SimError>,
) -> Result<(T, usize), SimError> {
    let mut prec = start;
    loop {
        match f(prec) {
            Err(SimError::PrecisionExhausted { step }) => {
                if prec >= cap {
                    return Err(SimError::PrecisionExhausted { step });
                }
                prec = (prec * 2).min(cap);
            }
            other => return other.map(|v| (v, prec)),
        }
    }
}

/// Rounds exact parameters to floats.
pub fn params_to_high<S: Scalar>(p: &Params<S>, prec: usize) -> Params<HighFloat> {
    Params::new(p.alpha.to_high(prec), p.beta.to_high(prec))
}
