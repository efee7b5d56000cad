use std::fmt;

use dashu::base::Gcd;
use itm_numkernel::{IBig, RBig, Scalar, UBig};
use serde::Serialize;

use crate::SpectralError;

/// A point (u, v) of the plane; [`SimplexPoint::in_delta`] tests membership
/// in Δ = {0 ≤ u ≤ 1 − v, v ≥ 0}.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SimplexPoint<S: Scalar> {
    #[serde(serialize_with = "crate::ser_scalar")]
    pub u: S,
    #[serde(serialize_with = "crate::ser_scalar")]
    pub v: S,
}

impl<S: Scalar> SimplexPoint<S> {
    pub fn new(u: S, v: S) -> Self {
        SimplexPoint { u, v }
    }

    fn w(&self) -> S {
        self.u.one_like() - self.u.clone() - self.v.clone()
    }

    pub fn in_delta(&self) -> bool {
        let z = self.u.zero_like();
        self.u >= z && self.v >= z && self.w() >= z
    }

    pub fn in_interior(&self) -> bool {
        let z = self.u.zero_like();
        self.u > z && self.v > z && self.w() > z
    }

    /// Interior with a margin of the guard band (plain interior for exact
    /// values).
    fn clearly_interior(&self) -> bool {
        let z = self.u.zero_like();
        let w = self.w();
        self.in_interior() && !self.u.within_guard(&z) && !self.v.within_guard(&z) && !w.within_guard(&z)
    }
}

impl<S: Scalar> fmt::Display for SimplexPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u.describe(), self.v.describe())
    }
}

impl SimplexPoint<RBig> {
    pub fn from_ratios(u: (i64, u64), v: (i64, u64)) -> Self {
        let q = |(n, d): (i64, u64)| RBig::from_parts(IBig::from(n), d.into());
        SimplexPoint::new(q(u), q(v))
    }
}

fn check_k(k: u64) -> Result<(), SpectralError> {
    if k == 0 {
        Err(SpectralError::ZeroIndex)
    } else {
        Ok(())
    }
}

/// H_k(u, v) = (v, 1 − v)/D_k with D_k = k(1 − v) + 1 − u.
pub fn h_forward<S: Scalar>(k: u64, s: &SimplexPoint<S>) -> Result<SimplexPoint<S>, SpectralError> {
    check_k(k)?;
    if !s.in_delta() {
        return Err(SpectralError::OutsideSimplex(s.to_string()));
    }
    let one = s.u.one_like();
    let d = s.u.int_like(k as i64) * (one.clone() - s.v.clone()) + one.clone() - s.u.clone();
    Ok(SimplexPoint::new(s.v.clone() / d.clone(), (one - s.v.clone()) / d))
}

/// Membership in Δ_k, the triangle with vertices (0, 1/k), (0, 1/(k+1)), (1, 0).
fn in_delta_k<S: Scalar>(k: u64, s: &SimplexPoint<S>) -> bool {
    let z = s.u.zero_like();
    let rest = s.u.one_like() - s.u.clone();
    s.u >= z && s.v.int_like(k as i64) * s.v.clone() <= rest && s.v.int_like(k as i64 + 1) * s.v.clone() >= rest
}

/// H_k^{-1}(x, y) = ((x + (k+1)y − 1)/(x + y), x/(x + y)), defined on Δ_k.
pub fn h_inverse<S: Scalar>(k: u64, s: &SimplexPoint<S>) -> Result<SimplexPoint<S>, SpectralError> {
    check_k(k)?;
    if !in_delta_k(k, s) {
        return Err(SpectralError::OutsideDeltaK { k, point: s.to_string() });
    }
    let sum = s.u.clone() + s.v.clone();
    let num = s.u.clone() + s.u.int_like(k as i64 + 1) * s.v.clone() - s.u.one_like();
    Ok(SimplexPoint::new(num / sum.clone(), s.u.clone() / sum))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Location {
    pub k: u64,
    /// On the edge shared by Δ_k and Δ_{k−1}.
    pub boundary: bool,
}

/// The Δ_k containing `s`, read off the fan coordinate t = v/(1 − u):
/// s ∈ Δ_k exactly when 1/t ∈ [k, k + 1].
pub fn locate_delta_k<S: Scalar>(s: &SimplexPoint<S>) -> Result<Location, SpectralError> {
    if !s.in_delta() {
        return Err(SpectralError::OutsideSimplex(s.to_string()));
    }
    let z = s.u.zero_like();
    let rest = s.u.one_like() - s.u.clone();
    if rest <= z {
        return Err(SpectralError::CommonVertex);
    }
    if s.v <= z {
        return Err(SpectralError::BottomEdge(s.to_string()));
    }
    let inv = rest / s.v.clone();
    let fl = inv.floor_int();
    let near = if inv.within_guard(&inv.ibig_like(&(&fl + IBig::ONE))) { &fl + IBig::ONE } else { fl.clone() };
    let on_edge = inv == inv.ibig_like(&near) || inv.within_guard(&inv.ibig_like(&near));
    let k = u64::try_from(&near).map_err(|_| SpectralError::BottomEdge(s.to_string()))?;
    Ok(Location { k, boundary: on_edge && k >= 2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ItineraryStatus {
    Completed,
    /// The point at this step lies on ∂Δ or on an edge shared by two Δ_k.
    Boundary { step: usize },
    /// A float point came within the guard band of an edge.
    PrecisionLimited { step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexItinerary {
    pub ks: Vec<u64>,
    pub status: ItineraryStatus,
}

/// k_i with H^{1−i}(s) ∈ Δ_{k_i}°, for i = 1..n.
pub fn simplex_itinerary<S: Scalar>(s: &SimplexPoint<S>, n: usize) -> Result<SimplexItinerary, SpectralError> {
    let mut p = s.clone();
    let mut ks = Vec::new();
    for step in 0..n {
        if !p.in_interior() {
            return Ok(SimplexItinerary { ks, status: ItineraryStatus::Boundary { step } });
        }
        if !p.clearly_interior() {
            return Ok(SimplexItinerary { ks, status: ItineraryStatus::PrecisionLimited { step } });
        }
        let loc = locate_delta_k(&p)?;
        if loc.boundary {
            let status = if p.u.is_exact() {
                ItineraryStatus::Boundary { step }
            } else {
                ItineraryStatus::PrecisionLimited { step }
            };
            return Ok(SimplexItinerary { ks, status });
        }
        ks.push(loc.k);
        p = h_inverse(loc.k, &p)?;
    }
    Ok(SimplexItinerary { ks, status: ItineraryStatus::Completed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentStep {
    pub k: u64,
    /// The point after applying H_k^{-1}.
    pub point: SimplexPoint<RBig>,
    /// Common (unreduced) denominator of the new point.
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub denominator: IBig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Descent {
    pub start: SimplexPoint<RBig>,
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub start_denominator: IBig,
    pub steps: Vec<DescentStep>,
}

/// Pulls a rational point of Δ back by H_k^{-1} until it reaches ∂Δ. Writing
/// the point as (p/q, p'/q), one step gives numerators p + (k+1)p' − q and p
/// over the common denominator p + p' < q, so the descent takes fewer than
/// q steps. On an edge shared by Δ_{k−1} and Δ_k the larger k is used.
pub fn rational_descent(x: &RBig, y: &RBig) -> Result<Descent, SpectralError> {
    let start = SimplexPoint::new(x.clone(), y.clone());
    if !start.in_delta() {
        return Err(SpectralError::OutsideSimplex(start.to_string()));
    }
    let q0 = lcm(x.denominator(), y.denominator());
    let to_int = |r: &RBig| r.numerator() * IBig::from(&q0 / r.denominator());
    let (mut p, mut pp, mut q) = (to_int(x), to_int(y), IBig::from(q0));
    let start_denominator = q.clone();
    let mut steps = Vec::new();
    loop {
        let z = IBig::ZERO;
        if p == z || pp == z || &p + &pp == q {
            break;
        }
        let point = frac_point(&p, &pp, &q);
        let k = locate_delta_k(&point)?.k;
        let next_q = &p + &pp;
        let next_p = &p + IBig::from(k + 1) * &pp - &q;
        assert!(next_q < q, "denominator did not decrease");
        pp = p;
        p = next_p;
        q = next_q;
        let point = frac_point(&p, &pp, &q);
        steps.push(DescentStep { k, point, denominator: q.clone() });
    }
    Ok(Descent { start, start_denominator, steps })
}

fn frac_point(p: &IBig, pp: &IBig, q: &IBig) -> SimplexPoint<RBig> {
    SimplexPoint::new(RBig::from_parts_signed(p.clone(), q.clone()), RBig::from_parts_signed(pp.clone(), q.clone()))
}

fn lcm(a: &UBig, b: &UBig) -> UBig {
    a * b / a.gcd(b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeReport {
    pub chain: Vec<u64>,
    pub vertices: [SimplexPoint<RBig>; 3],
    /// Side slopes, `None` for a vertical side.
    #[serde(serialize_with = "ser_slopes")]
    pub slopes: [Option<RBig>; 3],
    pub ok: bool,
}

fn ser_slopes<S: serde::Serializer>(xs: &[Option<RBig>; 3], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.as_ref().map_or("vertical".to_string(), |r| r.to_string())))
}

/// Vertices and side slopes of H_{k_1} ∘ ⋯ ∘ H_{k_n}(Δ). All sides must
/// have negative slope; the empty chain passes by convention and a single
/// map keeps the one vertical side on u = 0.
pub fn slope_report(chain: &[u64]) -> Result<SlopeReport, SpectralError> {
    let mut vertices = [
        SimplexPoint::from_ratios((0, 1), (0, 1)),
        SimplexPoint::from_ratios((1, 1), (0, 1)),
        SimplexPoint::from_ratios((0, 1), (1, 1)),
    ];
    for &k in chain.iter().rev() {
        for p in vertices.iter_mut() {
            *p = h_forward(k, p)?;
        }
    }
    let slopes: [Option<RBig>; 3] = std::array::from_fn(|i| {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % 3]);
        (a.u != b.u).then(|| (b.v.clone() - a.v.clone()) / (b.u.clone() - a.u.clone()))
    });
    let verticals = slopes.iter().filter(|s| s.is_none()).count();
    let negative = slopes.iter().flatten().all(|s| *s < RBig::ZERO);
    let ok = match chain.len() {
        0 => true,
        1 => negative && verticals == 1,
        _ => negative && verticals == 0,
    };
    Ok(SlopeReport { chain: chain.to_vec(), vertices, slopes, ok })
}

pub fn slope_check(spec: &itm_renorm::KSeqSpec, n: usize) -> Result<bool, SpectralError> {
    let chain = spec.prefix(n).map_err(SpectralError::ShortSequence)?;
    Ok(slope_report(&chain)?.ok)
}
