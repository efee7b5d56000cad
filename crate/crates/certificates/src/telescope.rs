use std::collections::BTreeSet;

use itm_numkernel::{a_mat, IBig, RBig, Scalar, UBig, Vec3};
use itm_renorm::KSeqSpec;
use itm_sadic::telescope_ks;
use serde::Serialize;

use crate::{ks_of, CertError};

/// Cap on the number of distinct integers Σ r_j h_j(1) enumerated per block.
pub const MAX_BLOCK_SUMS: usize = 1 << 20;

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TelescopeGroup<S: Scalar> {
    pub start: usize,
    pub end: usize,
    pub full: bool,
    /// Sum of the raw terms over the block.
    #[serde(serialize_with = "ser")]
    pub raw: S,
    /// max over (r_j) of |||ξ Σ_j r_j h_j(1)|||.
    #[serde(serialize_with = "ser")]
    pub telescoped: S,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TelescopeReport<S: Scalar> {
    pub horizon: usize,
    #[serde(serialize_with = "ser_all")]
    pub raw_terms: Vec<S>,
    #[serde(serialize_with = "ser_all")]
    pub raw_partial: Vec<S>,
    pub groups: Vec<TelescopeGroup<S>>,
    #[serde(serialize_with = "ser_all")]
    pub telescoped_partial: Vec<S>,
    pub ok: bool,
}

fn ser<T: Scalar, S: serde::Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.describe())
}

fn ser_all<T: Scalar, S: serde::Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.describe()))
}

fn max_of<S: Scalar>(zero: S, xs: impl Iterator<Item = S>) -> S {
    xs.fold(zero, |a, b| if b > a { b } else { a })
}

/// Raw terms max_{r ≤ k_j} |||ξ r h_j(1)||| against their telescoped
/// regrouping, block by block, with h_j = (1, 1, 1)A_{k_1}⋯A_{k_j}.
///
/// Within a block the r_j are treated as independent, so the telescoped term
/// is a maximum over the full product set {0..k_j}; this only enlarges it.
pub fn host_telescope_inequality<S: Scalar>(spec: &KSeqSpec, xi: &S, horizon: usize) -> Result<TelescopeReport<S>, CertError> {
    let ks = ks_of(spec, horizon)?;
    let mut h: Vec3 = [IBig::ONE, IBig::ONE, IBig::ONE];
    let mut h1 = Vec::with_capacity(horizon);
    for &k in &ks {
        h = a_mat(k).left_apply(&h);
        h1.push(h[0].clone());
    }
    let zero = xi.zero_like();
    let dist = |n: &IBig| (xi.clone() * xi.ibig_like(n)).dist_to_int();
    let raw_terms: Vec<S> = ks
        .iter()
        .zip(&h1)
        .map(|(&k, hj)| max_of(zero.clone(), (0..=k).map(|r| dist(&(hj * IBig::from(r))))))
        .collect();

    let mut groups = Vec::new();
    for b in telescope_ks(&ks) {
        let mut sums: BTreeSet<IBig> = BTreeSet::from([IBig::ZERO]);
        for j in b.start..=b.end {
            let mut next = BTreeSet::new();
            for s in &sums {
                for r in 0..=ks[j - 1] {
                    next.insert(s + &h1[j - 1] * IBig::from(r));
                }
            }
            if next.len() > MAX_BLOCK_SUMS {
                return Err(CertError::TooManySums(MAX_BLOCK_SUMS));
            }
            sums = next;
        }
        let telescoped = max_of(zero.clone(), sums.iter().map(dist));
        let raw = raw_terms[b.start - 1..b.end].iter().fold(zero.clone(), |a, x| a + x.clone());
        let ok = match xi.precision_bits() {
            None => raw >= telescoped,
            Some(p) => {
                // each product ξ·n carries an error of about |n|·2^{-p}
                let mass: IBig = (b.start..=b.end).map(|j| &h1[j - 1] * IBig::from(ks[j - 1] + 1)).sum();
                let slack = RBig::from_parts(mass * IBig::from(4), UBig::ONE << p);
                raw.clone() + xi.rational_like(&slack) >= telescoped
            }
        };
        groups.push(TelescopeGroup { start: b.start, end: b.end, full: b.full, ok, raw, telescoped });
    }

    let partial = |xs: &mut dyn Iterator<Item = S>| {
        xs.scan(zero.clone(), |acc, x| {
            *acc = acc.clone() + x;
            Some(acc.clone())
        })
        .collect::<Vec<S>>()
    };
    let raw_partial = partial(&mut raw_terms.iter().cloned());
    let telescoped_partial = partial(&mut groups.iter().map(|g| g.telescoped.clone()));
    let ok = groups.iter().all(|g| g.ok);
    Ok(TelescopeReport { horizon, raw_terms, raw_partial, groups, telescoped_partial, ok })
}
