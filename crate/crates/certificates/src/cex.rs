use itm_numkernel::{a_mat, HighFloat, IBig, Vec3};
use itm_renorm::KSeqSpec;
use serde::Serialize;

use crate::CertError;

/// Largest r tried for a single block.
pub const CEX_R_MAX: u64 = 1_000_000;

/// Last factor of every block A_1^r A_2 A_2 A_{k_3}.
const K3: u64 = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CexBlock {
    /// Block number, from 1.
    pub block: usize,
    /// The term must land in [1/window, 1/2].
    pub window: usize,
    pub r: u64,
    pub ks: Vec<u64>,
    /// |||r ξ h̃(1)||| for h̃ = (1, 1, 1)Ã_1⋯Ã_{block−1}.
    pub term: HighFloat,
    pub in_window: bool,
    /// |||ξ (1, 1, 1)Ã_1⋯Ã_{block−1}|||.
    pub eps: HighFloat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CexReport {
    pub xi: HighFloat,
    pub spec: KSeqSpec,
    pub blocks: Vec<CexBlock>,
    /// Blocks where no r ≤ CEX_R_MAX reached the window; r = 0 was used.
    pub failures: Vec<usize>,
    /// The same construction with every r forced to 0.
    pub control: Vec<CexBlock>,
}

fn centred(x: HighFloat) -> HighFloat {
    let prec = x.precision();
    let half = HighFloat::one(prec) / HighFloat::from_i64(2, prec);
    let n = (x.clone() + half).floor();
    x - HighFloat::from_ibig(&n, prec)
}

fn lattice_dist(xi: &HighFloat, h: &Vec3) -> HighFloat {
    h.iter()
        .map(|e| (xi.clone() * HighFloat::from_ibig(e, xi.precision())).dist_to_int())
        .fold(HighFloat::zero(xi.precision()), HighFloat::max)
}

/// Smallest r ≥ 1 with r|c| ≥ 1/w, by doubling then bisection.
fn search_r(c: &HighFloat, w: usize) -> Option<u64> {
    let prec = c.precision();
    let target = HighFloat::one(prec) / HighFloat::from_i64(w as i64, prec);
    let reach = |r: u64| c.abs() * HighFloat::from_i64(r as i64, prec) >= target;
    if c.is_zero() {
        return None;
    }
    let mut hi = 1u64;
    while !reach(hi) {
        hi *= 2;
        if hi > 2 * CEX_R_MAX {
            return None;
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reach(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi <= CEX_R_MAX).then_some(hi)
}

fn build(xi: &HighFloat, i_max: usize, force_zero: bool) -> (Vec<CexBlock>, Vec<u64>, Vec<usize>) {
    let prec = xi.precision();
    let mut h: Vec3 = [IBig::ONE, IBig::ONE, IBig::ONE];
    let (mut blocks, mut ks, mut failures) = (Vec::new(), Vec::new(), Vec::new());
    for b in 1..=i_max {
        let window = b + 2;
        let h1 = HighFloat::from_ibig(&h[0], prec);
        let c = centred(xi.clone() * h1);
        let r = if force_zero {
            0
        } else {
            search_r(&c, window).unwrap_or_else(|| {
                failures.push(b);
                0
            })
        };
        let term = (c * HighFloat::from_i64(r as i64, prec)).dist_to_int();
        let lo = HighFloat::one(prec) / HighFloat::from_i64(window as i64, prec);
        let half = HighFloat::one(prec) / HighFloat::from_i64(2, prec);
        let in_window = term >= lo && term <= half;
        let block_ks: Vec<u64> = std::iter::repeat_n(1, r as usize).chain([2, 2, K3]).collect();
        let eps = lattice_dist(xi, &h);
        for &k in &block_ks {
            h = a_mat(k).left_apply(&h);
        }
        ks.extend(&block_ks);
        let shown = if r <= 64 { block_ks } else { vec![1, 2, 2, K3] };
        blocks.push(CexBlock { block: b, window, r, ks: shown, term, in_window, eps });
    }
    (blocks, ks, failures)
}

/// Sequence of blocks A_1^r A_2 A_2 A_2 where block b picks the least r
/// putting the monitored Host term |||⟨(r, 0, 0), ξ⃗Ã_1⋯Ã_{b−1}⟩||| into
/// [1/(b+2), 1/2]. The windows start at 1/3 because [1/1, 1/2] is empty and
/// [1/2, 1/2] is hit only by ξ h̃(1) ∈ ½ + ℤ.
///
/// ξ is fixed in advance and is not tied to the stable line of the emitted
/// sequence; the report carries ε_b = |||ξ⃗Ã_1⋯Ã_{b−1}||| so this can be read
/// off.
pub fn cex_sequence(i_max: usize, xi: &HighFloat) -> Result<CexReport, CertError> {
    if i_max < 2 {
        return Err(CertError::Precondition("i_max must be at least 2".into()));
    }
    let (blocks, ks, failures) = build(xi, i_max, false);
    let (control, _, _) = build(xi, i_max, true);
    Ok(CexReport { xi: xi.clone(), spec: KSeqSpec::Explicit { ks }, blocks, failures, control })
}
