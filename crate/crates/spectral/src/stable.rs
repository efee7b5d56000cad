use itm_numkernel::{a_product, b_mat, hilbert_rho, real_root_in_unit, HighFloat, IBig, Mat3, Vec3};
use itm_renorm::{period_k2, KSeqSpec};
use serde::Serialize;

use crate::{h_forward, SimplexPoint, SpectralError};

/// Normalized direction (u, v, w), u + v + w = 1, of the B-cocycle limit.
/// The stable direction of A_{k_1}A_{k_2}⋯ is (v, u, −w).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StableDir {
    pub u: HighFloat,
    pub v: HighFloat,
    pub w: HighFloat,
    /// Bound on the Hilbert-metric diameter of the cone known to contain the
    /// true direction; `None` when no positive block was completed.
    pub certified_diameter: Option<HighFloat>,
    pub steps: usize,
    pub blocks: usize,
    pub reached_target: bool,
}

impl StableDir {
    pub fn point(&self) -> SimplexPoint<HighFloat> {
        SimplexPoint::new(self.u.clone(), self.v.clone())
    }

    /// (v, u, u + v − 1), a row vector contracted by the A-cocycle.
    pub fn a_stable_vector(&self) -> [HighFloat; 3] {
        let one = HighFloat::one(self.u.precision());
        [self.v.clone(), self.u.clone(), self.u.clone() + &self.v - one]
    }

    fn from_vector(x: &[HighFloat; 3]) -> (HighFloat, HighFloat, HighFloat) {
        let s = x[0].clone() + &x[1] + &x[2];
        (x[0].clone() / &s, x[1].clone() / &s, x[2].clone() / &s)
    }
}

pub fn stable_direction(
    spec: &KSeqSpec,
    target_diam: &HighFloat,
    n_max: usize,
    prec: usize,
) -> Result<StableDir, SpectralError> {
    stable_direction_seeded(spec, [1, 1, 1], target_diam, n_max, prec)
}

/// Iterates seed·B_{k_n}⋯B_{k_1}. The product is cut into consecutive blocks
/// that are strictly positive; the image of the positive octant then has
/// Hilbert diameter at most diam(last block rows) times the contraction
/// factors of the earlier blocks, and iteration stops once that bound is
/// below `target_diam`.
pub fn stable_direction_seeded(
    spec: &KSeqSpec,
    seed: [u64; 3],
    target_diam: &HighFloat,
    n_max: usize,
    prec: usize,
) -> Result<StableDir, SpectralError> {
    if spec.satisfies_k2() == Some(false) {
        return Err(SpectralError::ViolatesK2);
    }
    let avail = spec.len().map_or(n_max, |l| l.min(n_max));
    let ks = spec.prefix(avail).map_err(SpectralError::ShortSequence)?;
    let mut total = Mat3::identity();
    let mut block = Mat3::identity();
    let mut factor = HighFloat::one(prec);
    let mut best: Option<HighFloat> = None;
    let (mut blocks, mut steps) = (0, 0);
    for &k in &ks {
        if k == 0 {
            return Err(SpectralError::ZeroIndex);
        }
        let b = b_mat(k);
        total = &b * &total;
        block = &b * &block;
        steps += 1;
        if block.is_positive() {
            let rho = hilbert_rho(&block, prec)?;
            let diam = HighFloat::from_rational(&rho.rho_squared, prec).ln() * &factor;
            best = Some(match best {
                Some(b) => b.min(diam),
                None => diam,
            });
            factor = factor * &rho.contraction;
            blocks += 1;
            block = Mat3::identity();
            if best.as_ref().is_some_and(|d| d < target_diam) {
                break;
            }
        }
    }
    let seed: Vec3 = seed.map(IBig::from);
    let row = total.left_apply(&seed);
    let x = row.map(|e| HighFloat::from_ibig(&e, prec));
    let (u, v, w) = StableDir::from_vector(&x);
    let reached_target = best.as_ref().is_some_and(|d| d < target_diam);
    Ok(StableDir { u, v, w, certified_diameter: best, steps, blocks, reached_target })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicStable {
    pub dir: StableDir,
    /// The eigenvalue of the period product in (0, 1).
    pub lambda3: HighFloat,
    pub period_product: Mat3,
    /// No rational root of the characteristic polynomial; `None` if the
    /// coefficients are too large to decide.
    pub irreducible: Option<bool>,
}

/// Stable direction of a purely periodic sequence from the row eigenvector
/// of the period product for its eigenvalue in (0, 1).
pub fn stable_dir_periodic_exact(period: &[u64], prec: usize) -> Result<PeriodicStable, SpectralError> {
    if period.is_empty() {
        return Err(SpectralError::EmptyPeriod);
    }
    if period.contains(&0) {
        return Err(SpectralError::ZeroIndex);
    }
    if !period_k2(0, period) {
        return Err(SpectralError::ViolatesK2);
    }
    let work = prec + 64;
    let m = a_product(period);
    let cp = m.charpoly();
    let lambda = real_root_in_unit(&cp, work)?;
    let irreducible = cp.rational_roots().ok().map(|r| r.is_empty());
    // x (M − λI) = 0: x is orthogonal to every column of M − λI.
    let cols: Vec<[HighFloat; 3]> = (0..3)
        .map(|j| {
            std::array::from_fn(|i| {
                let e = HighFloat::from_ibig(m.get(i, j), work);
                if i == j {
                    e - &lambda
                } else {
                    e
                }
            })
        })
        .collect();
    let cross = |a: &[HighFloat; 3], b: &[HighFloat; 3]| -> [HighFloat; 3] {
        [
            a[1].clone() * &b[2] - a[2].clone() * &b[1],
            a[2].clone() * &b[0] - a[0].clone() * &b[2],
            a[0].clone() * &b[1] - a[1].clone() * &b[0],
        ]
    };
    let norm = |x: &[HighFloat; 3]| x.iter().fold(HighFloat::zero(work), |acc, e| acc.max(e.abs()));
    let x = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| cross(&cols[a], &cols[b]))
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).expect("finite"))
        .expect("three pairs");
    // x ∝ (v, u, −w)
    let (v, u, w) = StableDir::from_vector(&[x[1].clone(), x[0].clone(), -x[2].clone()]);
    let (u, v) = (v, u);
    let dir = StableDir {
        u: u.with_precision(prec),
        v: v.with_precision(prec),
        w: w.with_precision(prec),
        certified_diameter: Some(HighFloat::pow2(-(prec as isize) + 8, prec)),
        steps: 0,
        blocks: 0,
        reached_target: true,
    };
    Ok(PeriodicStable { dir, lambda3: lambda.with_precision(prec), period_product: m, irreducible })
}

/// Stable direction of prefix + periodic tail: the periodic point pushed
/// forward by H_{p_1} ∘ ⋯ ∘ H_{p_j}.
pub fn stable_dir_eventually_periodic(
    prefix: &[u64],
    period: &[u64],
    prec: usize,
) -> Result<PeriodicStable, SpectralError> {
    let mut ps = stable_dir_periodic_exact(period, prec)?;
    let mut p = ps.dir.point();
    for &k in prefix.iter().rev() {
        p = h_forward(k, &p)?;
    }
    let one = HighFloat::one(prec);
    ps.dir.w = one - &p.u - &p.v;
    ps.dir.u = p.u;
    ps.dir.v = p.v;
    Ok(ps)
}
