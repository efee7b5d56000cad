use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Named rules for infinite index sequences (indices start at 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum GenRule {
    /// k_i = i.
    Linear,
    /// k_i = 2 when i or i − 1 is a power of two, else 1. Satisfies (k2)
    /// with unbounded gaps.
    Sparse,
    /// Independent uniform k_i in [1, bound] from a seeded stream.
    Random { seed: u64 },
}

/// How the sequence (k_i)_{i≥1} is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum KSeqSpec {
    Explicit { ks: Vec<u64> },
    EventuallyPeriodic { prefix: Vec<u64>, period: Vec<u64> },
    /// k_i = min(rule(i), bound) when a bound is set.
    Generator { rule: GenRule, bound: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KSeqError {
    #[error("empty sequence")]
    Empty,
    #[error("entry {0:?} is not a positive integer")]
    BadEntry(String),
    #[error("periodic part must be non-empty")]
    EmptyPeriod,
    #[error("malformed spec {0:?}")]
    Syntax(String),
    #[error("random generator needs a bound")]
    MissingBound,
}

impl KSeqSpec {
    pub fn constant(k: u64) -> Self {
        KSeqSpec::EventuallyPeriodic { prefix: vec![], period: vec![k] }
    }

    pub fn periodic(period: Vec<u64>) -> Self {
        KSeqSpec::EventuallyPeriodic { prefix: vec![], period }
    }

    fn validate(self) -> Result<Self, KSeqError> {
        let zero = |v: &[u64]| v.contains(&0);
        match &self {
            KSeqSpec::Explicit { ks } if ks.is_empty() => Err(KSeqError::Empty),
            KSeqSpec::Explicit { ks } if zero(ks) => Err(KSeqError::BadEntry("0".into())),
            KSeqSpec::EventuallyPeriodic { period, .. } if period.is_empty() => Err(KSeqError::EmptyPeriod),
            KSeqSpec::EventuallyPeriodic { prefix, period } if zero(prefix) || zero(period) => {
                Err(KSeqError::BadEntry("0".into()))
            }
            KSeqSpec::Generator { bound: Some(0), .. } => Err(KSeqError::BadEntry("0".into())),
            KSeqSpec::Generator { rule: GenRule::Random { .. }, bound: None } => Err(KSeqError::MissingBound),
            _ => Ok(self),
        }
    }

    /// Number of available entries; `None` for infinite sequences.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match self {
            KSeqSpec::Explicit { ks } => Some(ks.len()),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.len().is_none()
    }

    /// k_i for `i ≥ 1`.
    pub fn get(&self, i: usize) -> Option<u64> {
        if i == 0 {
            return None;
        }
        match self {
            KSeqSpec::Explicit { ks } => ks.get(i - 1).copied(),
            KSeqSpec::EventuallyPeriodic { prefix, period } => Some(if i <= prefix.len() {
                prefix[i - 1]
            } else {
                period[(i - 1 - prefix.len()) % period.len()]
            }),
            KSeqSpec::Generator { rule, bound } => {
                let raw = match rule {
                    GenRule::Linear => i as u64,
                    GenRule::Sparse => {
                        if i.is_power_of_two() || (i > 1 && (i - 1).is_power_of_two()) {
                            2
                        } else {
                            1
                        }
                    }
                    GenRule::Random { .. } => return self.prefix(i).ok().and_then(|v| v.last().copied()),
                };
                Some(bound.map_or(raw, |b| raw.min(b)))
            }
        }
    }

    /// k_1, …, k_n; fails if an explicit sequence is shorter than `n`.
    pub fn prefix(&self, n: usize) -> Result<Vec<u64>, usize> {
        match self {
            KSeqSpec::Generator { rule: GenRule::Random { seed }, bound } => {
                let b = bound.unwrap_or(1);
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..n).map(|_| rng.gen_range(1..=b)).collect())
            }
            KSeqSpec::Explicit { ks } if ks.len() < n => Err(ks.len()),
            _ => Ok((1..=n).map(|i| self.get(i).expect("in range")).collect()),
        }
    }

    /// Condition (k2): k_i > 1 for infinitely many even i and infinitely many
    /// odd i. `None` when the spec does not determine the tail.
    pub fn satisfies_k2(&self) -> Option<bool> {
        match self {
            KSeqSpec::Explicit { .. } => None,
            KSeqSpec::EventuallyPeriodic { prefix, period } => Some(period_k2(prefix.len(), period)),
            KSeqSpec::Generator { rule, bound } => match (rule, bound) {
                (_, Some(1)) => Some(false),
                (GenRule::Random { .. }, _) => None,
                _ => Some(true),
            },
        }
    }

    /// Largest k_i, `None` if unbounded.
    pub fn max_k(&self) -> Option<u64> {
        match self {
            KSeqSpec::Explicit { ks } => ks.iter().copied().max(),
            KSeqSpec::EventuallyPeriodic { prefix, period } => prefix.iter().chain(period).copied().max(),
            KSeqSpec::Generator { rule, bound } => match rule {
                GenRule::Sparse => Some(bound.map_or(2, |b| b.min(2))),
                _ => *bound,
            },
        }
    }
}

/// (k2) for the tail of an eventually periodic sequence whose period starts
/// at index `offset + 1`.
pub fn period_k2(offset: usize, period: &[u64]) -> bool {
    let mut parity_hit = [false; 2];
    for (j, &k) in period.iter().enumerate() {
        if k > 1 {
            if period.len() % 2 == 1 {
                return true;
            }
            parity_hit[(offset + j + 1) % 2] = true;
        }
    }
    parity_hit[0] && parity_hit[1]
}

fn parse_list(s: &str) -> Result<Vec<u64>, KSeqError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u64>() {
                Ok(k) if k >= 1 && t.bytes().all(|b| b.is_ascii_digit()) => Ok(k),
                _ => Err(KSeqError::BadEntry(t.to_string())),
            }
        })
        .collect()
}

/// Grammar: `const:k` | `k1,k2,…` | `k1,…+(p1,…)` | `(p1,…)` |
/// `gen:linear[:bound]` | `gen:sparse[:bound]` | `gen:random:bound[:seed]`.
impl FromStr for KSeqSpec {
    type Err = KSeqError;
    fn from_str(s: &str) -> Result<Self, KSeqError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(KSeqError::Empty);
        }
        let syntax = || KSeqError::Syntax(s.to_string());
        if let Some(k) = s.strip_prefix("const:") {
            let k = parse_list(k)?;
            if k.len() != 1 {
                return Err(syntax());
            }
            return KSeqSpec::constant(k[0]).validate();
        }
        if let Some(rest) = s.strip_prefix("gen:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let num = |t: &str| t.parse::<u64>().map_err(|_| KSeqError::BadEntry(t.to_string()));
            let spec = match parts.as_slice() {
                ["linear"] => KSeqSpec::Generator { rule: GenRule::Linear, bound: None },
                ["linear", b] => KSeqSpec::Generator { rule: GenRule::Linear, bound: Some(num(b)?) },
                ["sparse"] => KSeqSpec::Generator { rule: GenRule::Sparse, bound: None },
                ["sparse", b] => KSeqSpec::Generator { rule: GenRule::Sparse, bound: Some(num(b)?) },
                ["random", b] => KSeqSpec::Generator { rule: GenRule::Random { seed: 0 }, bound: Some(num(b)?) },
                ["random", b, seed] => {
                    KSeqSpec::Generator { rule: GenRule::Random { seed: num(seed)? }, bound: Some(num(b)?) }
                }
                _ => return Err(syntax()),
            };
            return spec.validate();
        }
        let (head, tail) = match s.find('(') {
            Some(i) => {
                let tail = s[i..].strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(syntax)?;
                let head = s[..i].trim();
                let head = if head.is_empty() {
                    head
                } else {
                    let h = head.strip_suffix('+').ok_or_else(syntax)?.trim();
                    if h.is_empty() {
                        return Err(syntax());
                    }
                    h
                };
                (head, Some(tail))
            }
            None => (s, None),
        };
        let prefix = if head.is_empty() { vec![] } else { parse_list(head)? };
        match tail {
            Some(t) if t.trim().is_empty() => Err(KSeqError::EmptyPeriod),
            Some(t) => KSeqSpec::EventuallyPeriodic { prefix, period: parse_list(t)? }.validate(),
            None => KSeqSpec::Explicit { ks: prefix }.validate(),
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for KSeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSeqSpec::Explicit { ks } => f.write_str(&join(ks)),
            KSeqSpec::EventuallyPeriodic { prefix, period } if prefix.is_empty() && period.len() == 1 => {
                write!(f, "const:{}", period[0])
            }
            KSeqSpec::EventuallyPeriodic { prefix, period } if prefix.is_empty() => write!(f, "({})", join(period)),
            KSeqSpec::EventuallyPeriodic { prefix, period } => write!(f, "{}+({})", join(prefix), join(period)),
            KSeqSpec::Generator { rule, bound } => {
                let name = match rule {
                    GenRule::Linear => "linear",
                    GenRule::Sparse => "sparse",
                    GenRule::Random { .. } => "random",
                };
                write!(f, "gen:{name}")?;
                if let Some(b) = bound {
                    write!(f, ":{b}")?;
                }
                if let GenRule::Random { seed } = rule {
                    write!(f, ":{seed}")?;
                }
                Ok(())
            }
        }
    }
}
