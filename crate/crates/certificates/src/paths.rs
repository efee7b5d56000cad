use std::fmt;
use std::str::FromStr;

use itm_numkernel::IBig;
use itm_renorm::KSeqSpec;
use serde::Serialize;

use crate::{ks_of, CertError};

/// Edge of the common transition graph of A_k and B_k on vertices 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    A,
    B,
    C,
    D,
    E,
}

impl Edge {
    /// (source, target).
    pub fn ends(self) -> (u8, u8) {
        match self {
            Edge::A => (3, 2),
            Edge::B => (2, 1),
            Edge::C => (1, 3),
            Edge::D => (3, 3),
            Edge::E => (1, 2),
        }
    }

    /// Multiplicity at a position carrying k.
    pub fn weight(self, version: Version, k: u64) -> u64 {
        match (self, version) {
            (Edge::A | Edge::B, _) => 1,
            (Edge::C, _) => k - 1,
            (Edge::E, Version::A) | (Edge::D, Version::B) => k,
            (Edge::D, Version::A) | (Edge::E, Version::B) => 1,
        }
    }

    fn label(self) -> char {
        match self {
            Edge::A => 'a',
            Edge::B => 'b',
            Edge::C => 'c',
            Edge::D => 'd',
            Edge::E => 'e',
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl TryFrom<char> for Edge {
    type Error = CertError;

    fn try_from(c: char) -> Result<Self, CertError> {
        match c {
            'a' => Ok(Edge::A),
            'b' => Ok(Edge::B),
            'c' => Ok(Edge::C),
            'd' => Ok(Edge::D),
            'e' => Ok(Edge::E),
            _ => Err(CertError::BadEdge(c)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Version {
    A,
    B,
}

/// A composable edge path whose first edge sits at position `start` (from 1)
/// of the k-sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeWord {
    edges: Vec<Edge>,
    start: usize,
}

impl EdgeWord {
    pub fn new(edges: Vec<Edge>, start: usize) -> Result<Self, CertError> {
        if edges.is_empty() {
            return Err(CertError::EmptyWord);
        }
        if start == 0 {
            return Err(CertError::OutOfRange(0));
        }
        for (i, w) in edges.windows(2).enumerate() {
            if w[0].ends().1 != w[1].ends().0 {
                return Err(CertError::NonComposable { at: start + i + 1, prev: w[0], next: w[1] });
            }
        }
        Ok(EdgeWord { edges, start })
    }

    /// Parses labels such as "bcdd" placed from position `start`.
    pub fn parse_at(s: &str, start: usize) -> Result<Self, CertError> {
        let edges = s.trim().chars().map(Edge::try_from).collect::<Result<Vec<_>, _>>()?;
        EdgeWord::new(edges, start)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Position of the last edge.
    pub fn end(&self) -> usize {
        self.start + self.edges.len() - 1
    }
}

/// "bcdd" or "bcdd@3" (default start 1).
impl FromStr for EdgeWord {
    type Err = CertError;

    fn from_str(s: &str) -> Result<Self, CertError> {
        match s.split_once('@') {
            Some((w, p)) => {
                let start = p.trim().parse::<usize>().map_err(|_| CertError::OutOfRange(0))?;
                EdgeWord::parse_at(w, start)
            }
            None => EdgeWord::parse_at(s, 1),
        }
    }
}

impl fmt::Display for EdgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            write!(f, "{e}")?;
        }
        write!(f, "@{}", self.start)
    }
}

fn weight_on(w: &EdgeWord, version: Version, ks: &[u64]) -> IBig {
    w.edges
        .iter()
        .enumerate()
        .map(|(i, e)| IBig::from(e.weight(version, ks[w.start + i - 1])))
        .product()
}

/// Product of the position-dependent edge weights.
pub fn path_weight(w: &EdgeWord, version: Version, spec: &KSeqSpec) -> Result<IBig, CertError> {
    let ks = ks_of(spec, w.end())?;
    Ok(weight_on(w, version, &ks))
}

/// (be)^j bc d^{2(n−j−1)}, placed at position 1.
pub fn loop_word(n: usize, j: usize) -> EdgeWord {
    assert!(j < n);
    let mut edges = Vec::with_capacity(2 * n);
    for _ in 0..j {
        edges.extend([Edge::B, Edge::E]);
    }
    edges.extend([Edge::B, Edge::C]);
    edges.extend(std::iter::repeat_n(Edge::D, 2 * (n - j - 1)));
    EdgeWord::new(edges, 1).expect("loop words are composable")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopSum {
    pub n: usize,
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub lhs_a: IBig,
    /// k_2 k_4 ⋯ k_{2n} − 1.
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub closed_form: IBig,
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub rhs_b: IBig,
    pub strict: bool,
    /// An odd position i ≥ 3 with k_i ≥ 2 that sits under a d-edge of a
    /// term with non-zero weight, i.e. after some even position carrying
    /// k ≥ 2. Such a witness exists exactly when the inequality is strict.
    pub odd_witness: Option<usize>,
}

/// Both sides of Σ_j w((be)^j bc d^{2(n−j−1)}) over positions 1..2n.
pub fn loop_sum_check(spec: &KSeqSpec, n: usize) -> Result<LoopSum, CertError> {
    if n == 0 {
        return Err(CertError::Precondition("n must be at least 1".into()));
    }
    let ks = ks_of(spec, 2 * n)?;
    let (mut lhs_a, mut rhs_b) = (IBig::ZERO, IBig::ZERO);
    for j in 0..n {
        let w = loop_word(n, j);
        lhs_a += weight_on(&w, Version::A, &ks);
        rhs_b += weight_on(&w, Version::B, &ks);
    }
    let closed_form = ks.iter().skip(1).step_by(2).map(|&k| IBig::from(k)).product::<IBig>() - IBig::ONE;
    let first_even = (2..=2 * n).step_by(2).find(|&i| ks[i - 1] >= 2);
    let odd_witness = first_even.and_then(|e| (e + 1..2 * n).step_by(2).find(|&i| ks[i - 1] >= 2));
    Ok(LoopSum { n, strict: rhs_b > lhs_a, lhs_a, closed_form, rhs_b, odd_witness })
}
