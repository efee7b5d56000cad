use itm_numkernel::HighFloat;
use itm_renorm::{GenRule, KSeqSpec};
use itm_sadic::{lr_verdict, LrStatus};
use serde::Serialize;

use crate::{host_sums, line_search, stable_dir_eventually_periodic, stable_direction, LineHit, LineTriple, StableDir};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum WMStatus {
    WeakMixingPeriodic,
    /// No eigenvalue line with |p|, |q|, |r| ≤ P.
    WeakMixingCertified { p: i64 },
    EigenvalueCandidate { xi: HighFloat, triple: LineTriple },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineEvidence {
    #[serde(rename = "P")]
    pub p: i64,
    pub tol: HighFloat,
    pub hits: Vec<LineHit>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HostEvidence {
    pub horizon: usize,
    pub partial_sums: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Evidence {
    pub line_search: Option<LineEvidence>,
    pub irreducible: Option<bool>,
    pub host: Option<HostEvidence>,
    pub linearly_recurrent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WMVerdict {
    pub spec: String,
    pub status: WMStatus,
    pub evidence: Evidence,
    pub stable_dir: Option<StableDir>,
}

/// Steps allowed to the B-iteration of non-periodic specs.
const STABLE_STEPS: usize = 20_000;

/// Weak-mixing decision:
/// eventually periodic (k2) specs are weakly mixing, backed by an
/// irreducible period polynomial and an empty line search; specs with a
/// finite liminf are certified up to the search bound when the line search
/// is empty; a line hit yields a candidate with its Host sums and the LR
/// flag; everything else is inconclusive.
pub fn wm_verdict(spec: &KSeqSpec, bound: i64, horizon: usize, tol: &HighFloat, prec: usize) -> WMVerdict {
    let mut out = WMVerdict {
        spec: spec.to_string(),
        status: WMStatus::Inconclusive { reason: String::new() },
        evidence: Evidence::default(),
        stable_dir: None,
    };
    let inconclusive = |mut v: WMVerdict, reason: &str| {
        v.status = WMStatus::Inconclusive { reason: reason.to_string() };
        v
    };
    if spec.satisfies_k2() == Some(false) {
        return inconclusive(out, "sequence violates (k2)");
    }
    match spec {
        KSeqSpec::Explicit { .. } => inconclusive(out, "undeclared tail"),
        KSeqSpec::EventuallyPeriodic { prefix, period } => {
            let ps = match stable_dir_eventually_periodic(prefix, period, prec) {
                Ok(ps) => ps,
                Err(e) => return inconclusive(out, &e.to_string()),
            };
            let diam = ps.dir.certified_diameter.clone().unwrap_or_else(|| HighFloat::zero(prec));
            let hits = line_search(&ps.dir.point(), &diam, bound, tol);
            out.evidence.irreducible = ps.irreducible;
            out.evidence.line_search = Some(LineEvidence { p: bound, tol: tol.clone(), hits: hits.clone() });
            out.stable_dir = Some(ps.dir);
            if hits.is_empty() {
                out.status = WMStatus::WeakMixingPeriodic;
                out
            } else {
                inconclusive(out, "line hit for a periodic sequence")
            }
        }
        KSeqSpec::Generator { rule, bound: kb } => {
            let finite_liminf = match rule {
                GenRule::Linear => kb.is_some(),
                GenRule::Sparse | GenRule::Random { .. } => true,
            };
            if !finite_liminf {
                return inconclusive(out, "liminf k_n is infinite");
            }
            if spec.satisfies_k2().is_none() {
                return inconclusive(out, "(k2) is not decidable for this rule");
            }
            let target = HighFloat::pow2(-((prec as isize) * 3 / 4), prec);
            let dir = match stable_direction(spec, &target, STABLE_STEPS, prec) {
                Ok(d) => d,
                Err(e) => return inconclusive(out, &e.to_string()),
            };
            let Some(diam) = dir.certified_diameter.clone() else {
                out.stable_dir = Some(dir);
                return inconclusive(out, "no positive block within the step budget");
            };
            let hits = line_search(&dir.point(), &diam, bound, tol);
            out.evidence.line_search = Some(LineEvidence { p: bound, tol: tol.clone(), hits: hits.clone() });
            out.evidence.linearly_recurrent = Some(lr_verdict(spec).status == LrStatus::LinearlyRecurrent);
            out.stable_dir = Some(dir);
            match hits.first() {
                None => {
                    out.status = WMStatus::WeakMixingCertified { p: bound };
                    out
                }
                Some(h) => {
                    if let Ok(rep) = host_sums(spec, &h.xi, horizon) {
                        out.evidence.host = Some(HostEvidence {
                            horizon,
                            partial_sums: rep.wm_partial.iter().map(|x| x.to_sci(12)).collect(),
                        });
                    }
                    out.status = WMStatus::EigenvalueCandidate { xi: h.xi.clone(), triple: h.triple };
                    out
                }
            }
        }
    }
}
