use std::fmt;

use itm_numkernel::{a_mat, IBig, Mat3, RBig};
use itm_renorm::KSeqSpec;
use serde::Serialize;

use crate::{ks_of, CertError};

/// Shape of 𝔸^m = A_{k_m}⋯A_{k_n} while it is built from the right end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state")]
pub enum StateTag {
    /// Rows (0, k_n, k_n − 1), (1, 0, 0), (r, r k_n + 1, r(k_n − 1) + 1).
    S1 {
        #[serde(serialize_with = "itm_numkernel::ser_ibig")]
        r: IBig,
    },
    /// First row (0, k_n, k_n − 1); rows Q and R with max < 3C·min − C.
    S2,
    /// Middle row (q, 1 − q, 0); rows P and R with max < 3C·min.
    S3 { q: u8 },
    /// Positive, every row has max ≤ 4C·min.
    S4,
    /// Result of a trailing single multiplication that fits no template.
    Unclassified,
}

impl fmt::Display for StateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateTag::S1 { r } => write!(f, "S1(r={r})"),
            StateTag::S2 => write!(f, "S2"),
            StateTag::S3 { q } => write!(f, "S3(q={q})"),
            StateTag::S4 => write!(f, "S4"),
            StateTag::Unclassified => write!(f, "unclassified"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    /// m in 𝔸^m.
    pub index: usize,
    pub state: StateTag,
    pub matrix: Mat3,
    pub checks: Vec<String>,
    /// Set on the extra single multiplication absorbing an odd leftover.
    pub leftover: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateRun {
    pub c: u64,
    pub span: (usize, usize),
    pub trace: Vec<TraceStep>,
    pub reached_s4: bool,
    /// max/min of each row of the final matrix (None unless positive).
    #[serde(serialize_with = "ser_opt_ratios")]
    pub row_ratios: Option<[RBig; 3]>,
    /// max/min of each column of the final matrix (None unless positive).
    #[serde(serialize_with = "ser_opt_ratios")]
    pub column_ratios: Option<[RBig; 3]>,
    /// Every row ratio is at most 4C once S4 is reached.
    pub final_ok: bool,
}

fn ser_opt_ratios<S: serde::Serializer>(x: &Option<[RBig; 3]>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(r) => itm_numkernel::ser_rationals(r, s),
        None => s.serialize_none(),
    }
}

/// One JSON object per line: {"step","state","matrix","checks"}.
pub fn trace_json_lines(run: &StateRun) -> String {
    let mut out = String::new();
    for t in &run.trace {
        let line = serde_json::json!({
            "step": t.step,
            "state": t.state.to_string(),
            "matrix": t.matrix,
            "checks": t.checks,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

fn ratio(v: &[IBig]) -> Option<RBig> {
    let min = v.iter().min()?;
    if *min <= IBig::ZERO {
        return None;
    }
    Some(RBig::from_parts_signed(v.iter().max()?.clone(), min.clone()))
}

fn row_vec(m: &Mat3, i: usize) -> Vec<IBig> {
    m.row(i).to_vec()
}

fn ratios(m: &Mat3, by_row: bool) -> Option<[RBig; 3]> {
    let pick = |i| if by_row { row_vec(m, i) } else { m.col(i).to_vec() };
    Some([ratio(&pick(0))?, ratio(&pick(1))?, ratio(&pick(2))?])
}

fn is_row(m: &Mat3, i: usize, want: [i64; 3]) -> bool {
    (0..3).all(|j| *m.get(i, j) == IBig::from(want[j]))
}

/// 1 ≤ min ≤ max < 3C·min − slack.
fn bounded_row(m: &Mat3, i: usize, c: u64, slack: u64, name: &str, checks: &mut Vec<String>) -> Result<(), String> {
    let v = row_vec(m, i);
    let (min, max) = (v.iter().min().unwrap(), v.iter().max().unwrap());
    let bound = IBig::from(3 * c) * min - IBig::from(slack);
    if *min < IBig::ONE {
        return Err(format!("{name} row has minimum {min}"));
    }
    if *max >= bound {
        return Err(format!("{name} row: max {max} ≥ {bound}"));
    }
    checks.push(format!("{name}: 1 ≤ {min} ≤ {max} < {bound}"));
    Ok(())
}

fn check_s1(m: &Mat3, kn: u64, checks: &mut Vec<String>) -> Result<IBig, String> {
    let k = kn as i64;
    if !is_row(m, 0, [0, k, k - 1]) || !is_row(m, 1, [1, 0, 0]) {
        return Err("first two rows differ from the template".into());
    }
    let r = m.get(2, 0).clone();
    let kb = IBig::from(kn);
    let want = [r.clone(), &r * &kb + IBig::ONE, &r * (&kb - IBig::ONE) + IBig::ONE];
    if r < IBig::ZERO || (0..3).any(|j| *m.get(2, j) != want[j]) {
        return Err("third row is not (r, r k_n + 1, r(k_n − 1) + 1)".into());
    }
    checks.push(format!("template with r = {r}"));
    Ok(r)
}

fn check_s2(m: &Mat3, kn: u64, c: u64, checks: &mut Vec<String>) -> Result<(), String> {
    let k = kn as i64;
    if !is_row(m, 0, [0, k, k - 1]) {
        return Err("first row is not (0, k_n, k_n − 1)".into());
    }
    checks.push("first row (0, k_n, k_n − 1)".into());
    bounded_row(m, 1, c, c, "Q", checks)?;
    bounded_row(m, 2, c, c, "R", checks)
}

fn check_s3(m: &Mat3, c: u64, checks: &mut Vec<String>) -> Result<u8, String> {
    let q = if is_row(m, 1, [0, 1, 0]) {
        0
    } else if is_row(m, 1, [1, 0, 0]) {
        1
    } else {
        return Err("middle row is not (q, 1 − q, 0)".into());
    };
    checks.push(format!("middle row with q = {q}"));
    bounded_row(m, 0, c, 0, "P", checks)?;
    bounded_row(m, 2, c, 0, "R", checks)?;
    Ok(q)
}

fn check_s4(m: &Mat3, c: u64, checks: &mut Vec<String>) -> Result<(), String> {
    if !m.is_positive() {
        return Err("matrix is not positive".into());
    }
    let rr = ratios(m, true).expect("positive");
    let bound = RBig::from(4 * c);
    for (u, r) in rr.iter().enumerate() {
        if *r > bound {
            return Err(format!("row {} has max/min = {r} > 4C", u + 1));
        }
    }
    checks.push(format!("positive, row ratios {} {} {} ≤ {}", rr[0], rr[1], rr[2], 4 * c));
    Ok(())
}

/// Verifies that `m` has the shape of `expected`, returning the refined tag.
fn verify(expected: &StateTag, m: &Mat3, kn: u64, c: u64, checks: &mut Vec<String>) -> Result<StateTag, String> {
    match expected {
        StateTag::S1 { .. } => check_s1(m, kn, checks).map(|r| StateTag::S1 { r }),
        StateTag::S2 => check_s2(m, kn, c, checks).map(|_| StateTag::S2),
        StateTag::S3 { .. } => check_s3(m, c, checks).map(|q| StateTag::S3 { q }),
        StateTag::S4 => check_s4(m, c, checks).map(|_| StateTag::S4),
        StateTag::Unclassified => Ok(StateTag::Unclassified),
    }
}

/// Arrow of the diagram taken by left multiplication with
/// 𝔻 = A_{k_{m−2}} A_{k_{m−1}}.
fn transition(from: &StateTag, k2: u64, k1: u64) -> StateTag {
    match from {
        StateTag::S1 { .. } => match (k2 > 1, k1 > 1) {
            (false, false) => StateTag::S1 { r: IBig::ZERO },
            (false, true) => StateTag::S2,
            (true, false) => StateTag::S3 { q: 1 },
            (true, true) => StateTag::S4,
        },
        StateTag::S2 if k2 == 1 => StateTag::S2,
        StateTag::S3 { .. } if k1 == 1 => StateTag::S3 { q: 0 },
        _ => StateTag::S4,
    }
}

/// Classifies the result of a lone multiplication by A_{k_m}.
fn classify(m: &Mat3, kn: u64, c: u64) -> (StateTag, Vec<String>) {
    let candidates = [StateTag::S4, StateTag::S1 { r: IBig::ZERO }, StateTag::S2, StateTag::S3 { q: 0 }];
    for cand in candidates {
        let mut checks = Vec::new();
        if let Ok(tag) = verify(&cand, m, kn, c, &mut checks) {
            return (tag, checks);
        }
    }
    (StateTag::Unclassified, vec!["fits no template".into()])
}

/// Builds 𝔸^m for the span m..n (indices from 1) by left multiplication
/// with 𝔻-pairs, asserting the state inequalities after every step.
///
/// When k_n = 1 the walk enters at 𝔸^{n−1} = A_{k_{n−1}} A_1, which has the
/// S3 shape with q = 0; A_1 alone fits no template.
pub fn state_machine_run(spec: &KSeqSpec, c: u64, m: usize, n: usize) -> Result<StateRun, CertError> {
    if m == 0 || m > n {
        return Err(CertError::Precondition(format!("bad span {m}..{n}")));
    }
    if c < 2 {
        return Err(CertError::Precondition("C must be at least 2".into()));
    }
    let ks = ks_of(spec, n)?;
    let k = |i: usize| ks[i - 1];
    if let Some(i) = (m..=n).find(|&i| k(i) > c) {
        return Err(CertError::Precondition(format!("k_{i} = {} exceeds C = {c}", k(i))));
    }
    let kn = k(n);
    let (mut mat, mut cur, mut state) = if kn >= 2 {
        (a_mat(kn), n, StateTag::S1 { r: IBig::ZERO })
    } else if n > m && k(n - 1) >= 2 {
        (&a_mat(k(n - 1)) * &a_mat(1), n - 1, StateTag::S3 { q: 0 })
    } else {
        return Err(CertError::Precondition("need k_n ≥ 2, or k_n = 1 and k_{n−1} ≥ 2 inside the span".into()));
    };
    let mut trace = Vec::new();
    let violation = |step: usize, index: usize, expected: &StateTag, matrix: &Mat3, detail: String| CertError::StateViolation {
        step,
        index,
        expected: expected.to_string(),
        matrix: Box::new(matrix.clone()),
        detail,
    };
    let mut checks = Vec::new();
    state = verify(&state, &mat, kn, c, &mut checks).map_err(|d| violation(0, cur, &state, &mat, d))?;
    trace.push(TraceStep { step: 0, index: cur, state: state.clone(), matrix: mat.clone(), checks, leftover: false });

    while cur >= m + 2 {
        let (k2, k1) = (k(cur - 2), k(cur - 1));
        mat = &(&a_mat(k2) * &a_mat(k1)) * &mat;
        cur -= 2;
        let expected = transition(&state, k2, k1);
        let mut checks = Vec::new();
        let step = trace.len();
        state = verify(&expected, &mat, kn, c, &mut checks).map_err(|d| violation(step, cur, &expected, &mat, d))?;
        trace.push(TraceStep { step, index: cur, state: state.clone(), matrix: mat.clone(), checks, leftover: false });
    }
    if cur == m + 1 {
        mat = &a_mat(k(m)) * &mat;
        cur = m;
        let step = trace.len();
        let (tag, checks) = if state == StateTag::S4 {
            let mut checks = Vec::new();
            check_s4(&mat, c, &mut checks).map_err(|d| violation(step, cur, &StateTag::S4, &mat, d))?;
            (StateTag::S4, checks)
        } else {
            classify(&mat, kn, c)
        };
        state = tag;
        trace.push(TraceStep { step, index: cur, state: state.clone(), matrix: mat.clone(), checks, leftover: true });
    }

    let reached_s4 = trace.iter().any(|t| t.state == StateTag::S4);
    let row_ratios = ratios(&mat, true);
    let column_ratios = ratios(&mat, false);
    let bound = RBig::from(4 * c);
    let final_ok = !reached_s4 || row_ratios.as_ref().is_some_and(|r| r.iter().all(|x| *x <= bound));
    Ok(StateRun { c, span: (m, n), trace, reached_s4, row_ratios, column_ratios, final_ok })
}
