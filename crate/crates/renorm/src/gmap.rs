use dashu::base::Abs;
use itm_numkernel::{real_root_in_unit, Cubic, HighFloat, IBig, Mat3, RBig, Scalar, UBig};
use itm_sim::{Params, PRECISION_CAP};
use serde::Serialize;

use crate::{KSeqSpec, RenormError};

/// One step of G: k = ⌊1/α⌋ and (β/α, (β − 1)/α + k).
pub fn g_step<S: Scalar>(p: &Params<S>) -> Result<(Params<S>, IBig), RenormError> {
    p.renormalized().map_err(RenormError::from)
}

/// The branch of G⁻¹ on the strip k: α = 1/(k + α' − β'), β = α'α.
pub fn g_inverse_branch<S: Scalar>(k: u64, p: &Params<S>) -> Result<Params<S>, RenormError> {
    if k == 0 {
        return Err(RenormError::ZeroIndex);
    }
    let d = p.alpha.int_like(k as i64) + p.alpha.clone() - p.beta.clone();
    if d <= d.zero_like() {
        return Err(RenormError::OutsideBranch);
    }
    let alpha = d.one_like() / d;
    let beta = p.alpha.clone() * alpha.clone();
    Ok(Params::new(alpha, beta))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "step")]
pub enum TypeStatus {
    InfiniteToDepth(usize),
    FiniteAtStep(usize),
    PrecisionExhausted(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeVerdict {
    #[serde(flatten)]
    pub status: TypeStatus,
    pub k_prefix: Vec<u64>,
    pub precision_bits: Option<usize>,
}

impl TypeVerdict {
    /// Number of G-steps that stayed in U°.
    pub fn survived(&self) -> usize {
        match self.status {
            TypeStatus::InfiniteToDepth(n) => n,
            TypeStatus::FiniteAtStep(m) => m - 1,
            TypeStatus::PrecisionExhausted(m) => m - 1,
        }
    }
}

/// Outcome of testing a value against a threshold with an uncertainty radius.
#[derive(PartialEq)]
enum Side {
    Above,
    Below,
    Unsure,
}

fn side(x: &HighFloat, r: &HighFloat) -> Side {
    if x > r {
        Side::Above
    } else if -x.clone() >= *r {
        Side::Below
    } else {
        Side::Unsure
    }
}

const RADIUS_BITS: usize = 64;

/// Iterates G up to `depth` times and classifies (α, β).
///
/// Floats carry an error radius (initially `2^{2−p}` at precision `p`)
/// that is propagated through each step; a branch or exit decision that the
/// radius cannot settle ends with [`TypeStatus::PrecisionExhausted`].
/// Exact inputs are decided exactly, ties counting as exits.
pub fn k_sequence<S: Scalar>(p: &Params<S>, depth: usize) -> TypeVerdict {
    let r0 = p.alpha.precision_bits().map(|b| HighFloat::pow2(2 - b as isize, RADIUS_BITS));
    k_sequence_with_radius(p, depth, r0)
}

pub fn k_sequence_with_radius<S: Scalar>(p: &Params<S>, depth: usize, radius: Option<HighFloat>) -> TypeVerdict {
    let prec = p.alpha.precision_bits();
    let mut prefix = Vec::new();
    let mut cur = p.clone();
    let mut r = radius;
    let verdict = |status, prefix| TypeVerdict { status, k_prefix: prefix, precision_bits: prec };
    for step in 1..=depth {
        let a = &cur.alpha;
        let zero = a.zero_like();
        let one = a.one_like();
        if *a <= zero || *a > one {
            return verdict(TypeStatus::FiniteAtStep(step), prefix);
        }
        let inv = one.clone() / a.clone();
        let k = inv.floor_int();
        let next_r = match &r {
            None => None,
            Some(r) => {
                let ah = a.to_high(RADIUS_BITS);
                let slack = ah.clone() - r.clone();
                if slack <= HighFloat::zero(RADIUS_BITS) {
                    return verdict(TypeStatus::PrecisionExhausted(step), prefix);
                }
                let rnd = HighFloat::pow2(3 - prec.unwrap() as isize, RADIUS_BITS);
                let r_inv = r.clone() / (ah.clone() * slack.clone()) + rnd.clone() * inv.to_high(RADIUS_BITS);
                if inv.to_high(RADIUS_BITS).dist_to_int() <= r_inv {
                    return verdict(TypeStatus::PrecisionExhausted(step), prefix);
                }
                Some((r.clone(), slack, rnd))
            }
        };
        let alpha2 = cur.beta.clone() / a.clone();
        let beta2 = (cur.beta.clone() - one.clone()) / a.clone() + a.ibig_like(&k);
        let k_u64 = u64::try_from(k.clone()).unwrap_or(u64::MAX);
        prefix.push(k_u64);
        match next_r {
            None => {
                if beta2 <= zero || beta2 >= alpha2 || alpha2 >= one {
                    return verdict(TypeStatus::FiniteAtStep(step), prefix);
                }
            }
            Some((r_old, slack, rnd)) => {
                let a2 = alpha2.to_high(RADIUS_BITS);
                let b2 = beta2.to_high(RADIUS_BITS);
                let kf = HighFloat::from_ibig(&k, RADIUS_BITS);
                let growth = HighFloat::one(RADIUS_BITS) + a2.clone().max((b2.clone() - kf.clone()).abs());
                let inflate = HighFloat::one(RADIUS_BITS) + HighFloat::pow2(-40, RADIUS_BITS);
                let r2 = (r_old * growth / slack + rnd * (kf + HighFloat::from_i64(2, RADIUS_BITS))) * inflate;
                let one_h = HighFloat::one(RADIUS_BITS);
                let two_r = r2.clone() + r2.clone();
                let tests = [side(&b2, &r2), side(&(a2.clone() - b2.clone()), &two_r), side(&(one_h - a2), &r2)];
                if tests.contains(&Side::Below) {
                    return verdict(TypeStatus::FiniteAtStep(step), prefix);
                }
                if tests.contains(&Side::Unsure) {
                    return verdict(TypeStatus::PrecisionExhausted(step), prefix);
                }
                r = Some(r2);
            }
        }
        cur = Params::new(alpha2, beta2);
    }
    verdict(TypeStatus::InfiniteToDepth(depth), prefix)
}

/// Re-runs `k_sequence` on parameters produced by `make(prec)`, doubling the
/// precision on an unsettled step up to the global cap.
pub fn k_sequence_adaptive(
    start_prec: usize,
    depth: usize,
    make: impl Fn(usize) -> Result<Params<HighFloat>, RenormError>,
) -> Result<TypeVerdict, RenormError> {
    let mut prec = start_prec;
    loop {
        let v = k_sequence(&make(prec)?, depth);
        if !matches!(v.status, TypeStatus::PrecisionExhausted(_)) || prec >= PRECISION_CAP {
            return Ok(v);
        }
        prec = (prec * 2).min(PRECISION_CAP);
    }
}

/// The G-fixed point with constant index k: α the root of P_k in (0, 1),
/// β = α².
pub fn fixed_params(k: u64, prec: usize) -> Result<Params<HighFloat>, RenormError> {
    if k == 0 {
        return Err(RenormError::ZeroIndex);
    }
    let a = real_root_in_unit(&Cubic::p_k(k), prec)?;
    Ok(Params::new(a.clone(), a.clone() * a))
}

/// ‖G(p) − p‖_∞.
pub fn g_fixed_residual(p: &Params<HighFloat>) -> Result<HighFloat, RenormError> {
    let (g, _) = g_step(p)?;
    Ok((g.alpha - p.alpha.clone()).abs().max((g.beta - p.beta.clone()).abs()))
}

/// Homogeneous form of the inverse branch F_k acting on row vectors
/// (X, Y, Z) with α = X/Z, β = Y/Z: (X, Y, Z) ↦ (Z, X, X − Y + kZ).
pub fn inverse_branch_matrix(k: u64) -> Mat3 {
    let k = k as i64;
    Mat3::from_i64([[0, 1, 1], [0, 0, -1], [1, 0, k]])
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderPoint {
    /// Centroid of the innermost cylinder triangle.
    pub exact: Params<RBig>,
    pub params: Params<HighFloat>,
    /// Length of the cylinder word used.
    pub steps: usize,
    pub diameter: HighFloat,
}

fn dehomogenize(v: &[IBig; 3]) -> (RBig, RBig) {
    let z = v[2].clone();
    let f = |x: &IBig| RBig::from_parts_signed(x.clone(), z.clone());
    (f(&v[0]), f(&v[1]))
}

/// Maximum number of cylinder steps tried by [`params_from_kseq`].
pub const MAX_CYLINDER_STEPS: usize = 20_000;

/// Parameters realizing an infinite k-sequence: the closure of U is pushed
/// through F_{k_1} ∘ ⋯ ∘ F_{k_n} exactly, with n ≥ `depth` chosen so that
/// the cylinder triangle has ℓ∞-diameter below 2^{−3p/4}; its centroid is
/// returned. The centroid lies in the open cylinder, so its first n indices
/// are k_1, …, k_n exactly.
pub fn params_from_kseq(spec: &KSeqSpec, depth: usize, prec: usize) -> Result<CylinderPoint, RenormError> {
    if !spec.is_infinite() {
        return Err(RenormError::FiniteSpec);
    }
    if spec.satisfies_k2() == Some(false) {
        return Err(RenormError::ViolatesK2);
    }
    let target = RBig::from_parts(IBig::ONE, UBig::ONE << (prec - prec / 4));
    let verts = [[0i64, 0, 1], [1, 0, 1], [1, 1, 1]].map(|v| v.map(IBig::from));
    let mut comp = Mat3::identity();
    let mut n = 0;
    let mut diam = RBig::ONE;
    while n < depth || diam >= target {
        if n >= MAX_CYLINDER_STEPS {
            return Err(RenormError::NonContracting { steps: n, diameter: HighFloat::from_rational(&diam, 64).to_sci(6) });
        }
        n += 1;
        let k = spec.get(n).ok_or(RenormError::FiniteSpec)?;
        comp = &inverse_branch_matrix(k) * &comp;
        let pts: Vec<(RBig, RBig)> = verts.iter().map(|v| dehomogenize(&comp.left_apply(v))).collect();
        diam = RBig::ZERO;
        for i in 0..3 {
            for j in i + 1..3 {
                let da = (pts[i].0.clone() - pts[j].0.clone()).abs();
                let db = (pts[i].1.clone() - pts[j].1.clone()).abs();
                for d in [da, db] {
                    if d > diam {
                        diam = d;
                    }
                }
            }
        }
    }
    let pts: Vec<(RBig, RBig)> = verts.iter().map(|v| dehomogenize(&comp.left_apply(v))).collect();
    let third = RBig::from_parts(IBig::ONE, UBig::from(3u8));
    let ca = (pts[0].0.clone() + pts[1].0.clone() + pts[2].0.clone()) * third.clone();
    let cb = (pts[0].1.clone() + pts[1].1.clone() + pts[2].1.clone()) * third;
    let params = Params::new(HighFloat::from_rational(&ca, prec), HighFloat::from_rational(&cb, prec));
    Ok(CylinderPoint {
        exact: Params::new(ca, cb),
        params,
        steps: n,
        diameter: HighFloat::from_rational(&diam, prec),
    })
}
