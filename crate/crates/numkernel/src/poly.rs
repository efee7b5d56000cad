//! Integer cubics, exact rational root tests and certified real-root
//! isolation (Sturm sequences plus dyadic bisection).

use dashu::base::UnsignedAbs;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use serde::{Serialize, Serializer};

use crate::{HighFloat, NumError};

/// Largest |coefficient| accepted by the divisor enumeration in
/// [`Cubic::rational_roots`].
pub const RATIONAL_ROOT_COEFF_CAP: u64 = 1_000_000_000_000;

/// c3·λ³ + c2·λ² + c1·λ + c0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cubic {
    pub c3: IBig,
    pub c2: IBig,
    pub c1: IBig,
    pub c0: IBig,
}

impl Serialize for Cubic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [&self.c3, &self.c2, &self.c1, &self.c0].map(|c| c.to_string()).serialize(s)
    }
}

impl Cubic {
    pub fn new(c3: IBig, c2: IBig, c1: IBig, c0: IBig) -> Self {
        assert!(c3 != IBig::ZERO, "leading coefficient must be non-zero");
        Cubic { c3, c2, c1, c0 }
    }

    pub fn from_i64(c3: i64, c2: i64, c1: i64, c0: i64) -> Self {
        Self::new(c3.into(), c2.into(), c1.into(), c0.into())
    }

    /// P_k(λ) = λ³ − λ² − kλ + 1.
    pub fn p_k(k: u64) -> Self {
        Self::new(IBig::ONE, IBig::NEG_ONE, -IBig::from(k), IBig::ONE)
    }

    pub fn coeffs(&self) -> [&IBig; 4] {
        [&self.c3, &self.c2, &self.c1, &self.c0]
    }

    pub fn eval_rational(&self, x: &RBig) -> RBig {
        let acc = RBig::from(self.c3.clone()) * x + RBig::from(self.c2.clone());
        let acc = acc * x + RBig::from(self.c1.clone());
        acc * x + RBig::from(self.c0.clone())
    }

    pub fn eval_float(&self, x: &HighFloat) -> HighFloat {
        let p = x.precision();
        let c = |v: &IBig| HighFloat::from_ibig(v, p);
        let acc = c(&self.c3) * x + c(&self.c2);
        let acc = acc * x + c(&self.c1);
        acc * x + c(&self.c0)
    }

    fn as_poly(&self) -> Poly {
        Poly::new(vec![
            RBig::from(self.c0.clone()),
            RBig::from(self.c1.clone()),
            RBig::from(self.c2.clone()),
            RBig::from(self.c3.clone()),
        ])
    }

    /// Distinct rational roots in increasing order (rational-root theorem).
    pub fn rational_roots(&self) -> Result<Vec<RBig>, NumError> {
        let mut coeffs = vec![self.c0.clone(), self.c1.clone(), self.c2.clone(), self.c3.clone()];
        let mut roots = Vec::new();
        // Strip factors of λ.
        if coeffs[0] == IBig::ZERO {
            roots.push(RBig::ZERO);
            while coeffs[0] == IBig::ZERO {
                coeffs.remove(0);
            }
        }
        let lead = coeffs.last().expect("non-zero leading").clone().unsigned_abs();
        let tail = coeffs[0].clone().unsigned_abs();
        let cap = UBig::from(RATIONAL_ROOT_COEFF_CAP);
        if lead > cap || tail > cap {
            return Err(NumError::CoefficientTooLarge);
        }
        if coeffs.len() > 1 {
            let ps = divisors(u64::try_from(&tail).expect("capped"));
            let qs = divisors(u64::try_from(&lead).expect("capped"));
            let poly = Poly::new(coeffs.iter().cloned().map(RBig::from).collect());
            for &p in &ps {
                for &q in &qs {
                    for sign in [1i64, -1] {
                        let x = RBig::from_parts(IBig::from(sign) * IBig::from(p), UBig::from(q));
                        if poly.eval(&x) == RBig::ZERO {
                            roots.push(x);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Poly(Vec<RBig>);

impl Poly {
    pub(crate) fn new(mut c: Vec<RBig>) -> Self {
        while c.len() > 1 && c.last() == Some(&RBig::ZERO) {
            c.pop();
        }
        Poly(c)
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == RBig::ZERO)
    }

    fn lead(&self) -> &RBig {
        self.0.last().expect("non-empty")
    }

    pub(crate) fn eval(&self, x: &RBig) -> RBig {
        self.0.iter().rev().fold(RBig::ZERO, |acc, c| acc * x + c)
    }

    fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::new(vec![RBig::ZERO]);
        }
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * RBig::from(i as u64)).collect())
    }

    fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        if self.degree() < dd || self.is_zero() {
            return (Poly::new(vec![RBig::ZERO]), self.clone());
        }
        let mut q = vec![RBig::ZERO; self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] / d.lead();
            if coef != RBig::ZERO {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] = &r[i + j] - &coef * dc;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd.max(1));
        (Poly::new(q), Poly::new(r))
    }

    fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        let l = a.lead().clone();
        Poly::new(a.0.into_iter().map(|c| c / &l).collect())
    }

    fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.clone()
        } else {
            self.divmod(&g).0
        }
    }
}

/// Sturm chain of a square-free polynomial.
struct Sturm(Vec<Poly>);

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divmod(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Poly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        Sturm(chain)
    }

    fn variations(&self, x: &RBig) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.0 {
            let v = p.eval(x);
            let s = if v > RBig::ZERO {
                1
            } else if v < RBig::ZERO {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in the half-open interval (a, b].
    fn count(&self, a: &RBig, b: &RBig) -> usize {
        self.variations(a) - self.variations(b)
    }
}

fn sign(x: &RBig) -> i8 {
    if *x > RBig::ZERO {
        1
    } else if *x < RBig::ZERO {
        -1
    } else {
        0
    }
}

/// Bisects an isolating interval (lo, hi] of a simple root of the
/// square-free `p` until its width is below |root|·2^{-(prec+2)}.
fn refine(p: &Poly, mut lo: RBig, mut hi: RBig, prec: usize) -> RBig {
    if p.eval(&hi) == RBig::ZERO {
        return hi;
    }
    let s_hi = sign(&p.eval(&hi));
    let two = RBig::from(2u8);
    let scale = RBig::from_parts(IBig::ONE, UBig::ONE << (prec + 2));
    let mut steps = 0usize;
    loop {
        let width = &hi - &lo;
        let mag = if lo > RBig::ZERO {
            lo.clone()
        } else if hi < RBig::ZERO {
            -hi.clone()
        } else {
            RBig::ZERO
        };
        if mag > RBig::ZERO && width <= &mag * &scale {
            break;
        }
        // A root at (or extremely near) zero: stop at an absolute bound.
        if steps > 4 * prec + 4096 {
            break;
        }
        let mid = (&lo + &hi) / &two;
        let s = sign(&p.eval(&mid));
        if s == 0 {
            return mid;
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    (lo + hi) / two
}

fn cauchy_bound(p: &Poly) -> RBig {
    let lead = p.lead().clone();
    let lead = if lead < RBig::ZERO { -lead } else { lead };
    let m = p.0[..p.0.len() - 1]
        .iter()
        .map(|c| if *c < RBig::ZERO { -c.clone() } else { c.clone() })
        .max()
        .unwrap_or(RBig::ZERO);
    RBig::ONE + m / lead
}

/// Distinct real roots of `c`, ascending, as certified isolating intervals
/// refined to relative accuracy 2^{-(prec+2)}.
pub fn real_roots(c: &Cubic, prec: usize) -> Vec<HighFloat> {
    real_roots_exact(&c.as_poly(), prec).into_iter().map(|r| HighFloat::from_rational(&r, prec)).collect()
}

fn real_roots_exact(p: &Poly, prec: usize) -> Vec<RBig> {
    let sf = p.square_free();
    let sturm = Sturm::new(&sf);
    let b = cauchy_bound(&sf);
    let mut stack = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            isolated.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / RBig::from(2u8);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    let mut roots: Vec<RBig> = isolated.into_iter().map(|(lo, hi)| refine(&sf, lo, hi, prec)).collect();
    roots.sort();
    roots
}

/// Real roots with multiplicity, ascending (length equals the number of
/// real roots counted with multiplicity).
pub fn real_roots_with_multiplicity(c: &Cubic, prec: usize) -> Vec<HighFloat> {
    let p = c.as_poly();
    let g = p.gcd(&p.derivative());
    let simple = real_roots_exact(&p, prec);
    let mut out = Vec::new();
    for r in simple {
        let mut mult = 1;
        let mut q = g.clone();
        while q.degree() > 0 && q.eval(&r) == RBig::ZERO {
            mult += 1;
            q = q.divmod(&Poly::new(vec![-r.clone(), RBig::ONE])).0;
        }
        for _ in 0..mult {
            out.push(HighFloat::from_rational(&r, prec));
        }
    }
    out
}

/// The unique real root in the open interval (0, 1).
pub fn real_root_in_unit(c: &Cubic, prec: usize) -> Result<HighFloat, NumError> {
    if prec < crate::float::MIN_PRECISION {
        return Err(NumError::PrecisionTooLow(prec));
    }
    let sf = c.as_poly().square_free();
    let sturm = Sturm::new(&sf);
    let (zero, one) = (RBig::ZERO, RBig::ONE);
    let at_one = usize::from(sf.eval(&one) == RBig::ZERO);
    let n = sturm.count(&zero, &one) - at_one;
    match n {
        0 => Err(NumError::NoRootInInterval),
        1 => {
            // Shrink (0, 1] to an interval not touching 1 if 1 is a root.
            let mut hi = one;
            if at_one == 1 {
                let two = RBig::from(2u8);
                let mut lo = RBig::ZERO;
                loop {
                    let mid = (&lo + &hi) / &two;
                    match sturm.count(&zero, &mid) {
                        1 => {
                            hi = mid;
                            break;
                        }
                        _ => lo = mid,
                    }
                }
            }
            Ok(HighFloat::from_rational(&refine(&sf, zero, hi, prec), prec))
        }
        _ => Err(NumError::MultipleRootsInInterval(n)),
    }
}
