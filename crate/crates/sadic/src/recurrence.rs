use std::collections::HashMap;

use itm_numkernel::{a_mat, IBig, Mat3, RBig};
use itm_renorm::{GenRule, KSeqSpec};
use itm_sim::Word;
use rayon::prelude::*;
use serde::Serialize;

use crate::{SadicError, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    /// First and last index (from 1, inclusive).
    pub start: usize,
    pub end: usize,
    pub matrix: Mat3,
    pub full: bool,
}

/// Splits k_1, …, k_horizon greedily into blocks
/// A_1^{r_1} A_{k_{i,1}} ⋯ A_{k_{i,m+1}} A_{k_{i,m+2}}: each block runs from
/// its first index past the first k ≥ 2 (at position p) to the first later
/// k ≥ 2 at odd distance from p, plus one more factor. A block that cannot
/// close within the horizon is returned last with `full = false`.
pub fn telescope_blocks(spec: &KSeqSpec, horizon: usize) -> Result<Vec<Block>, SadicError> {
    let ks = spec.prefix(horizon).map_err(|_| SadicError::OutOfRange { i: 1, j: horizon })?;
    Ok(telescope_ks(&ks))
}

pub fn telescope_ks(ks: &[u64]) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < ks.len() {
        let end = block_end(ks, start);
        let stop = end.map_or(ks.len(), |e| e + 1);
        let matrix = ks[start..stop].iter().fold(Mat3::identity(), |acc, &k| &acc * &a_mat(k));
        let full = end.is_some();
        if full {
            assert!(matrix.is_positive(), "telescoped block {}..{} is not positive", start + 1, stop);
        }
        blocks.push(Block { start: start + 1, end: stop, matrix, full });
        start = stop;
    }
    blocks
}

/// 0-based index of the last factor of the block starting at `start`.
fn block_end(ks: &[u64], start: usize) -> Option<usize> {
    let p = (start..ks.len()).find(|&i| ks[i] >= 2)?;
    let q = (p + 1..ks.len()).find(|&i| ks[i] >= 2 && (i - p) % 2 == 1)?;
    (q + 1 < ks.len()).then_some(q + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotLrReason {
    UnboundedK,
    UnboundedEvenParityGaps,
    UnboundedOddParityGaps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LrStatus {
    LinearlyRecurrent,
    NotLr { reasons: Vec<NotLrReason> },
    UndecidedPrefix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LrVerdict {
    #[serde(flatten)]
    pub status: LrStatus,
    /// Largest k seen (whole period, or the inspected prefix).
    pub max_k: Option<u64>,
    /// Largest gap in {i : k_{2i} > 1} and {i : k_{2i−1} > 1}; `None` when
    /// unbounded.
    pub even_gap: Option<usize>,
    pub odd_gap: Option<usize>,
    pub inspected: usize,
}

/// Largest gap between consecutive members of {i : k_{2i+parity} > 1} over
/// positions `1..=ks.len()`; gaps before the first hit count from 0.
fn parity_gap(ks: &[u64], even: bool) -> Option<usize> {
    let idx: Vec<usize> = (1..=ks.len()).filter(|&i| (i % 2 == 0) == even && ks[i - 1] > 1).map(|i| i.div_ceil(2)).collect();
    let first = *idx.first()?;
    Some(idx.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0).max(first))
}

/// Linear recurrence per the bounded-k / bounded-parity-gap criterion.
/// Eventually periodic specs and the named generators are decided; explicit
/// sequences report prefix statistics only.
pub fn lr_verdict(spec: &KSeqSpec) -> LrVerdict {
    const INSPECT: usize = 4096;
    match spec {
        KSeqSpec::EventuallyPeriodic { prefix, period } => {
            let off = prefix.len();
            // parity classes hit by two copies of the period
            let has = |even: bool| {
                (0..2 * period.len()).any(|j| ((off + j + 1) % 2 == 0) == even && period[j % period.len()] > 1)
            };
            let mut reasons = Vec::new();
            if !has(true) {
                reasons.push(NotLrReason::UnboundedEvenParityGaps);
            }
            if !has(false) {
                reasons.push(NotLrReason::UnboundedOddParityGaps);
            }
            let cyc = spec.prefix(off + 4 * period.len() + 4).expect("infinite");
            LrVerdict {
                status: if reasons.is_empty() { LrStatus::LinearlyRecurrent } else { LrStatus::NotLr { reasons } },
                max_k: spec.max_k(),
                even_gap: has(true).then(|| parity_gap(&cyc, true)).flatten(),
                odd_gap: has(false).then(|| parity_gap(&cyc, false)).flatten(),
                inspected: cyc.len(),
            }
        }
        KSeqSpec::Generator { rule, bound } => {
            let ks = spec.prefix(INSPECT).expect("infinite");
            let stats = |status| LrVerdict {
                status,
                max_k: spec.max_k(),
                even_gap: parity_gap(&ks, true),
                odd_gap: parity_gap(&ks, false),
                inspected: ks.len(),
            };
            let mut reasons = Vec::new();
            match (rule, bound) {
                (_, Some(1)) => {
                    reasons.push(NotLrReason::UnboundedEvenParityGaps);
                    reasons.push(NotLrReason::UnboundedOddParityGaps);
                }
                (GenRule::Linear, None) => reasons.push(NotLrReason::UnboundedK),
                (GenRule::Linear, Some(_)) => {}
                (GenRule::Sparse, _) => {
                    reasons.push(NotLrReason::UnboundedEvenParityGaps);
                    reasons.push(NotLrReason::UnboundedOddParityGaps);
                }
                (GenRule::Random { .. }, _) => return stats(LrStatus::UndecidedPrefix),
            }
            let mut v = stats(if reasons.is_empty() { LrStatus::LinearlyRecurrent } else { LrStatus::NotLr { reasons } });
            if matches!(rule, GenRule::Sparse) || *bound == Some(1) {
                v.even_gap = None;
                v.odd_gap = None;
            }
            v
        }
        KSeqSpec::Explicit { ks } => LrVerdict {
            status: LrStatus::UndecidedPrefix,
            max_k: ks.iter().copied().max(),
            even_gap: parity_gap(ks, true),
            odd_gap: parity_gap(ks, false),
            inspected: ks.len(),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub len: usize,
    /// Distinct factors of this length occurring at least twice.
    pub factors: usize,
    pub max_gap: usize,
    /// max_gap / len.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapStats {
    pub rows: Vec<GapRow>,
    /// Largest ratio over all lengths.
    pub envelope: f64,
}

/// For every length ℓ ≤ `max_len`, the largest distance between
/// consecutive occurrences of a factor of length ℓ.
pub fn return_gap_stats(w: &Word, max_len: usize) -> Result<GapStats, SadicError> {
    if max_len == 0 || w.len() < 100 * max_len {
        return Err(SadicError::TooShort { len: w.len(), needed: 100 * max_len.max(1) });
    }
    let s = w.symbols();
    let rows: Vec<GapRow> = (1..=max_len)
        .into_par_iter()
        .map(|l| {
            let mut last: HashMap<&[u8], (usize, usize)> = HashMap::new();
            for i in 0..=s.len() - l {
                let e = last.entry(&s[i..i + l]).or_insert((i, 0));
                if e.0 != i {
                    e.1 = e.1.max(i - e.0);
                    e.0 = i;
                }
            }
            let repeated = last.values().filter(|(_, g)| *g > 0);
            let (factors, max_gap) = repeated.fold((0, 0), |(n, m), (_, g)| (n + 1, m.max(*g)));
            GapRow { len: l, factors, max_gap, ratio: max_gap as f64 / l as f64 }
        })
        .collect();
    let envelope = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(GapStats { rows, envelope })
}

/// sup over letters v and images w, w' of f_v(w') / f_v(w), where f_v(w) is
/// the frequency of v in the image of w.
pub fn frequency_ratio(s: &Substitution) -> Result<RBig, SadicError> {
    let m = s.abelianization();
    if !m.is_positive() {
        return Err(SadicError::NotPositive);
    }
    let sums: Vec<IBig> = (0..3).map(|j| m.col(j).iter().cloned().sum()).collect();
    let mut best = RBig::ONE;
    for v in 0..3 {
        let f: Vec<RBig> = (0..3).map(|j| RBig::from_parts_signed(m.get(v, j).clone(), sums[j].clone())).collect();
        for a in &f {
            for b in &f {
                let r = a.clone() / b.clone();
                if r > best {
                    best = r;
                }
            }
        }
    }
    Ok(best)
}

/// True iff no period p ≤ `p_max` has a p-periodic suffix covering at least
/// half of `w`.
pub fn aperiodicity_scan(w: &Word, p_max: usize) -> Result<bool, SadicError> {
    if p_max == 0 || w.len() < 4 * p_max {
        return Err(SadicError::TooShort { len: w.len(), needed: 4 * p_max.max(1) });
    }
    let s = w.symbols();
    let n = s.len();
    for p in 1..=p_max {
        // length of the maximal suffix with s[i] = s[i + p]
        let mut start = n - p;
        while start > 0 && s[start - 1] == s[start - 1 + p] {
            start -= 1;
        }
        if n - start >= n / 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{chi, compose_ks, rho_prefix};

    #[test]
    fn constant_two_blocks_have_length_three() {
        let b = telescope_blocks(&KSeqSpec::constant(2), 9).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|b| b.full && b.end - b.start == 2));
        assert_eq!(b[0].matrix, Mat3::from_i64([[1, 5, 3], [2, 1, 1], [1, 3, 2]]));
    }

    #[test]
    fn first_block_closes_after_odd_distance() {
        let b = telescope_ks(&[1, 2, 1, 1, 3, 2, 1, 1]);
        assert_eq!((b[0].start, b[0].end, b[0].full), (1, 6, true));
        let ones = telescope_ks(&[1; 10]);
        assert_eq!(ones.len(), 1);
        assert!(!ones[0].full);
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_verdict(&KSeqSpec::constant(2)).status, LrStatus::LinearlyRecurrent);
        assert_eq!(
            lr_verdict(&KSeqSpec::periodic(vec![2, 1])).status,
            LrStatus::NotLr { reasons: vec![NotLrReason::UnboundedEvenParityGaps] }
        );
        assert_eq!(
            lr_verdict(&"gen:linear".parse().unwrap()).status,
            LrStatus::NotLr { reasons: vec![NotLrReason::UnboundedK] }
        );
        let v = lr_verdict(&KSeqSpec::Explicit { ks: vec![2, 1, 1, 1, 2, 2] });
        assert_eq!(v.status, LrStatus::UndecidedPrefix);
        assert_eq!((v.max_k, v.odd_gap, v.even_gap), (Some(2), Some(2), Some(3)));
    }

    #[test]
    fn gap_stats() {
        let periodic: Word = "123".repeat(1000).parse().unwrap();
        let g = return_gap_stats(&periodic, 10).unwrap();
        assert!(g.rows.iter().all(|r| r.ratio <= 3.0));
        assert!(return_gap_stats(&periodic, 100).is_err());
        let rho = rho_prefix(&KSeqSpec::constant(2), 20_000).unwrap();
        assert!(return_gap_stats(&rho, 20).unwrap().envelope < 20.0);
    }

    #[test]
    fn frequency_examples() {
        let r = frequency_ratio(&compose_ks(&[2, 2, 2]).unwrap()).unwrap();
        assert!(r >= RBig::from_parts(IBig::from(20), 9u8.into()));
        assert!(frequency_ratio(&chi(2).unwrap()).is_err());
        let same = Substitution { images: ["123".parse().unwrap(), "321".parse().unwrap(), "213".parse().unwrap()] };
        assert_eq!(frequency_ratio(&same).unwrap(), RBig::ONE);
    }

    #[test]
    fn aperiodicity() {
        let rho = rho_prefix(&KSeqSpec::constant(2), 10_000).unwrap();
        assert!(aperiodicity_scan(&rho, 100).unwrap());
        let per: Word = "12".repeat(200).parse().unwrap();
        assert!(!aperiodicity_scan(&per, 2).unwrap());
        assert!(aperiodicity_scan(&per, 200).is_err());
    }
}
