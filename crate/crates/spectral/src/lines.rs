use std::fmt;

use itm_numkernel::{HighFloat, Scalar};
use rayon::prelude::*;
use serde::Serialize;

use crate::{SimplexPoint, SpectralError};

/// Integer triple (p, q, r) naming the line u(q − r) = v(p − r) + q − p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LineTriple {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl LineTriple {
    pub fn new(p: i64, q: i64, r: i64) -> Result<Self, SpectralError> {
        if p == q && q == r {
            return Err(SpectralError::DegenerateTriple);
        }
        Ok(LineTriple { p, q, r })
    }
}

impl fmt::Display for LineTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// |u(q − r) − v(p − r) − (q − p)|.
pub fn line_residual<S: Scalar>(s: &SimplexPoint<S>, t: &LineTriple) -> S {
    let i = |n: i64| s.u.int_like(n);
    (s.u.clone() * i(t.q - t.r) - s.v.clone() * i(t.p - t.r) - i(t.q - t.p)).abs_val()
}

/// ξ = (r − p)/(1 − u) + p + q − r.
pub fn xi_from_line<S: Scalar>(t: &LineTriple, s: &SimplexPoint<S>) -> Result<S, SpectralError> {
    let den = s.u.one_like() - s.u.clone();
    if den == s.u.zero_like() {
        return Err(SpectralError::ZeroDenominator);
    }
    Ok(s.u.int_like(t.r - t.p) / den + s.u.int_like(t.p + t.q - t.r))
}

/// u = (ξ − q)/(ξ + r − p − q), v = (ξ − p)/(ξ + r − p − q).
pub fn uv_from_xi<S: Scalar>(t: &LineTriple, xi: &S) -> Result<SimplexPoint<S>, SpectralError> {
    let den = xi.clone() + xi.int_like(t.r - t.p - t.q);
    if den == xi.zero_like() {
        return Err(SpectralError::ZeroDenominator);
    }
    Ok(SimplexPoint::new((xi.clone() - xi.int_like(t.q)) / den.clone(), (xi.clone() - xi.int_like(t.p)) / den))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineHit {
    pub triple: LineTriple,
    pub xi: HighFloat,
    pub residual: HighFloat,
}

/// All non-degenerate triples with |p|, |q|, |r| ≤ `bound` whose line passes
/// within `tol + 3·bound·diam` of `s`, with ξ ∈ (0, 1) and the recovered
/// point in Δ. For fixed (p, q) the residual is |c + r(v − u)|, so only the
/// one or two integers r next to −c/(v − u) need checking.
pub fn line_search(s: &SimplexPoint<HighFloat>, diam: &HighFloat, bound: i64, tol: &HighFloat) -> Vec<LineHit> {
    if bound < 1 {
        return Vec::new();
    }
    let prec = s.u.precision();
    let eff = tol.clone() + HighFloat::from_i64(3 * bound, prec) * diam;
    let slope = s.v.clone() - &s.u;
    let flat = slope.abs() * HighFloat::from_i64(2 * bound + 1, prec) <= eff;
    let mut hits: Vec<LineHit> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut out = Vec::new();
            for q in -bound..=bound {
                let c = s.u.clone() * HighFloat::from_i64(q, prec) - s.v.clone() * HighFloat::from_i64(p, prec)
                    + HighFloat::from_i64(p - q, prec);
                let rs: Vec<i64> = if flat {
                    (-bound..=bound).collect()
                } else {
                    let r0 = (-(c.clone()) / &slope).floor();
                    let r0 = i64::try_from(&r0).unwrap_or(i64::MAX / 2);
                    vec![r0, r0.saturating_add(1)]
                };
                for r in rs.into_iter().filter(|r| r.abs() <= bound) {
                    if let Some(hit) = check(s, p, q, r, &eff) {
                        out.push(hit);
                    }
                }
            }
            out
        })
        .collect();
    hits.sort_by_key(|h| h.triple);
    hits
}

fn check(s: &SimplexPoint<HighFloat>, p: i64, q: i64, r: i64, eff: &HighFloat) -> Option<LineHit> {
    let t = LineTriple::new(p, q, r).ok()?;
    let residual = line_residual(s, &t);
    if residual >= *eff {
        return None;
    }
    let xi = xi_from_line(&t, s).ok()?;
    let (z, one) = (xi.zero_like(), xi.one_like());
    if xi <= z || xi >= one {
        return None;
    }
    uv_from_xi(&t, &xi).ok().filter(|pt| pt.in_delta())?;
    Some(LineHit { triple: t, xi, residual })
}
