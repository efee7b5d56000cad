use itm_numkernel::{a_mat, b_mat, real_roots_with_multiplicity, Cubic, HighFloat, IBig, Mat3};
use itm_renorm::KSeqSpec;
use serde::Serialize;

use crate::{ks_of, CertError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationStep {
    pub n: usize,
    /// Largest entry of A_{k_1}⋯A_{k_n}.
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub sup_a: IBig,
    /// Smallest entry of B_{k_n}⋯B_{k_1}.
    #[serde(serialize_with = "itm_numkernel::ser_ibig")]
    pub inf_b: IBig,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Domination {
    pub steps: Vec<DominationStep>,
    /// Smallest n from which sup A < inf B holds up to `persists_to`.
    pub n_star: Option<usize>,
    pub persists_to: usize,
    /// One more than the first odd j ≥ 3 with k_j ≥ 2.
    pub claimed_n0: Option<usize>,
    /// Whether the inequality holds on [claimed_n0, n_max].
    pub claimed_n0_holds: Option<bool>,
}

impl Domination {
    pub fn at(&self, n: usize) -> Option<&DominationStep> {
        self.steps.get(n.checked_sub(1)?)
    }
}

fn check_k2(spec: &KSeqSpec) -> Result<(), CertError> {
    match spec.satisfies_k2() {
        Some(false) => Err(CertError::ViolatesK2),
        _ => Ok(()),
    }
}

/// Exact comparison of sup(A_{k_1}⋯A_{k_n}) with inf(B_{k_n}⋯B_{k_1}) for
/// n = 1..n_max.
pub fn ab_domination(spec: &KSeqSpec, n_max: usize) -> Result<Domination, CertError> {
    check_k2(spec)?;
    if n_max < 10 {
        return Err(CertError::Precondition("n_max must be at least 10".into()));
    }
    let ks = ks_of(spec, n_max)?;
    let (mut a, mut b) = (Mat3::identity(), Mat3::identity());
    let mut steps = Vec::with_capacity(n_max);
    for (i, &k) in ks.iter().enumerate() {
        a = &a * &a_mat(k);
        b = &b_mat(k) * &b;
        let (sup_a, inf_b) = (a.max_entry(), b.min_entry());
        steps.push(DominationStep { n: i + 1, holds: sup_a < inf_b, sup_a, inf_b });
    }
    let n_star = match steps.iter().rposition(|s| !s.holds) {
        None => Some(1),
        Some(i) if i + 1 < n_max => Some(i + 2),
        Some(_) => None,
    };
    let claimed_n0 = (3..=n_max).step_by(2).find(|&j| ks[j - 1] >= 2).map(|j| j + 1);
    let claimed_n0_holds = claimed_n0.filter(|&n0| n0 <= n_max).map(|n0| steps[n0 - 1..].iter().all(|s| s.holds));
    Ok(Domination { steps, n_star, persists_to: n_max, claimed_n0, claimed_n0_holds })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapReport {
    pub n: usize,
    /// ln σ_i / n for the singular values σ_1 ≥ σ_2 ≥ σ_3 of A_{k_1}⋯A_{k_n}.
    pub exponents: [HighFloat; 3],
    pub sum: HighFloat,
    pub signs: [i8; 3],
    pub domination: DominationStep,
    /// (k2) status of the spec; the exponents are reported either way.
    pub k2: Option<bool>,
}

impl LyapReport {
    /// Two expanding directions and one contracting.
    pub fn pattern_ok(&self) -> bool {
        self.signs == [1, 1, -1]
    }
}

fn sign(x: &HighFloat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Finite-time exponents from the exact product: the squared singular values
/// are the roots of the characteristic polynomial of MᵀM, isolated exactly
/// and refined to relative accuracy 2^{-prec}.
pub fn lyapunov_report(spec: &KSeqSpec, n: usize, prec: usize) -> Result<LyapReport, CertError> {
    if n < 10 {
        return Err(CertError::Precondition("n must be at least 10".into()));
    }
    let ks = ks_of(spec, n)?;
    let (mut a, mut b) = (Mat3::identity(), Mat3::identity());
    for &k in &ks {
        a = &a * &a_mat(k);
        b = &b_mat(k) * &b;
    }
    let gram = &a.transpose() * &a;
    let cp: Cubic = gram.charpoly();
    let roots = real_roots_with_multiplicity(&cp, prec + 32);
    assert_eq!(roots.len(), 3, "MᵀM is symmetric positive definite");
    let len = HighFloat::from_i64(n as i64, prec);
    // ln σ = ½ ln σ², descending
    let mut exps: Vec<HighFloat> = roots.iter().rev().map(|r| r.ln().with_precision(prec) / &len / HighFloat::from_i64(2, prec)).collect();
    exps.truncate(3);
    let exponents: [HighFloat; 3] = exps.try_into().expect("three roots");
    let sum = exponents.iter().fold(HighFloat::zero(prec), |s, e| s + e);
    let signs = [sign(&exponents[0]), sign(&exponents[1]), sign(&exponents[2])];
    let (sup_a, inf_b) = (a.max_entry(), b.min_entry());
    let domination = DominationStep { n, holds: sup_a < inf_b, sup_a, inf_b };
    Ok(LyapReport { n, exponents, sum, signs, domination, k2: spec.satisfies_k2() })
}
