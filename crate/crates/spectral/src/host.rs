use itm_numkernel::{a_mat, IBig, Scalar, Vec3};
use itm_renorm::KSeqSpec;
use serde::Serialize;

use crate::SpectralError;

/// h_n = (1, 1, 1)·A_{k_1}⋯A_{k_n}, the path counts of the Bratteli diagram.
pub fn h_vector(spec: &KSeqSpec, n: usize) -> Result<Vec3, SpectralError> {
    let ks = spec.prefix(n).map_err(SpectralError::ShortSequence)?;
    Ok(h_vectors(&ks).pop().expect("h_0 is always present"))
}

/// h_0, …, h_n.
pub(crate) fn h_vectors(ks: &[u64]) -> Vec<Vec3> {
    let mut h: Vec3 = [IBig::ONE, IBig::ONE, IBig::ONE];
    let mut out = vec![h.clone()];
    for &k in ks {
        h = a_mat(k).left_apply(&h);
        out.push(h.clone());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthClass {
    Bounded,
    Logarithmic,
    Linear,
}

/// Host summability terms along a finite horizon. Vector terms use
/// |||x||| = max_i dist(x_i, ℤ).
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct HostReport<S: Scalar> {
    pub norm: &'static str,
    pub horizon: usize,
    /// |||ξ·h_n||| for n = 1..N.
    #[serde(serialize_with = "crate::ser_scalars")]
    pub wm_terms: Vec<S>,
    #[serde(serialize_with = "crate::ser_scalars")]
    pub wm_partial: Vec<S>,
    /// max_{0 ≤ r ≤ k_n} |||ξ·r·h_n(1)|||.
    #[serde(serialize_with = "crate::ser_scalars")]
    pub simplified_terms: Vec<S>,
    #[serde(serialize_with = "crate::ser_scalars")]
    pub simplified_partial: Vec<S>,
    pub growth: GrowthClass,
    /// S_N / N for the vector terms.
    pub mean_term: f64,
}

pub const SUP_NORM_TAG: &str = "sup-distance-to-lattice";

pub(crate) fn dist_vec<S: Scalar>(xi: &S, h: &Vec3) -> S {
    h.iter().map(|e| (xi.clone() * xi.ibig_like(e)).dist_to_int()).fold(xi.zero_like(), |a, b| if b > a { b } else { a })
}

pub(crate) fn simplified_term<S: Scalar>(xi: &S, k: u64, h1: &IBig) -> S {
    (0..=k as i64)
        .map(|r| (xi.clone() * xi.ibig_like(&(h1 * IBig::from(r)))).dist_to_int())
        .fold(xi.zero_like(), |a, b| if b > a { b } else { a })
}

fn partial<S: Scalar>(xs: &[S], zero: S) -> Vec<S> {
    xs.iter()
        .scan(zero, |acc, x| {
            *acc = acc.clone() + x.clone();
            Some(acc.clone())
        })
        .collect()
}

fn growth(partial: &[f64]) -> GrowthClass {
    let n = partial.len();
    if n < 4 {
        return GrowthClass::Bounded;
    }
    let (full, half) = (partial[n - 1], partial[n / 2 - 1]);
    if full - half <= 1e-12 * (1.0 + full) {
        GrowthClass::Bounded
    } else if full >= 1.5 * half {
        GrowthClass::Linear
    } else {
        GrowthClass::Logarithmic
    }
}

pub fn host_sums<S: Scalar>(spec: &KSeqSpec, xi: &S, horizon: usize) -> Result<HostReport<S>, SpectralError> {
    let ks = spec.prefix(horizon).map_err(SpectralError::ShortSequence)?;
    let hs = h_vectors(&ks);
    let wm_terms: Vec<S> = hs[1..].iter().map(|h| dist_vec(xi, h)).collect();
    let simplified_terms: Vec<S> = ks.iter().zip(&hs[1..]).map(|(&k, h)| simplified_term(xi, k, &h[0])).collect();
    let wm_partial = partial(&wm_terms, xi.zero_like());
    let simplified_partial = partial(&simplified_terms, xi.zero_like());
    let floats: Vec<f64> = wm_partial.iter().map(|x| x.to_f64()).collect();
    let mean_term = floats.last().map_or(0.0, |s| s / horizon as f64);
    Ok(HostReport {
        norm: SUP_NORM_TAG,
        horizon,
        growth: growth(&floats),
        wm_terms,
        wm_partial,
        simplified_terms,
        simplified_partial,
        mean_term,
    })
}
