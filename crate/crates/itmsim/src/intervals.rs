use itm_numkernel::Scalar;
use serde::Serialize;

/// Finite union of half-open intervals `[l, r)`, sorted and pairwise
/// disjoint, with `l < r` for every member. The closure of the set is the
/// union of the `[l, r]`; both have the same endpoints, so the closure is
/// read off the same data.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<S> {
    ivs: Vec<(S, S)>,
}

impl<S: Scalar> IntervalSet<S> {
    pub fn empty() -> Self {
        IntervalSet { ivs: Vec::new() }
    }

    pub fn unit(like: &S) -> Self {
        IntervalSet {
            ivs: vec![(like.zero_like(), like.one_like())],
        }
    }

    /// Normalizes arbitrary pieces: drops empty ones, sorts, merges
    /// overlapping or touching intervals.
    pub fn from_pieces(mut pieces: Vec<(S, S)>) -> Self {
        pieces.retain(|(l, r)| l < r);
        pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable"));
        let mut out: Vec<(S, S)> = Vec::with_capacity(pieces.len());
        for (l, r) in pieces {
            match out.last_mut() {
                Some(last) if l <= last.1 => {
                    if r > last.1 {
                        last.1 = r;
                    }
                }
                _ => out.push((l, r)),
            }
        }
        IntervalSet { ivs: out }
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.ivs
    }

    pub fn len(&self) -> usize {
        self.ivs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> Option<S> {
        let mut it = self.ivs.iter();
        let (l, r) = it.next()?;
        Some(it.fold(r.clone() - l.clone(), |acc, (l, r)| acc + (r.clone() - l.clone())))
    }

    pub fn contains(&self, x: &S) -> bool {
        self.ivs.iter().any(|(l, r)| l <= x && x < r)
    }

    /// True when every interval of `self` lies inside some interval of
    /// `other`.
    pub fn is_subset_of(&self, other: &IntervalSet<S>) -> bool {
        self.ivs.iter().all(|(l, r)| other.ivs.iter().any(|(ol, or)| ol <= l && r <= or))
    }
}

#[derive(Serialize)]
pub struct IntervalReport {
    pub intervals: Vec<(String, String)>,
    pub measure: String,
}

impl<S: Scalar> IntervalSet<S> {
    pub fn report(&self) -> IntervalReport {
        IntervalReport {
            intervals: self.ivs.iter().map(|(l, r)| (l.describe(), r.describe())).collect(),
            measure: self.measure().map(|m| m.describe()).unwrap_or_else(|| "0".into()),
        }
    }
}
