use std::path::PathBuf;

use dashu::base::{Abs, Gcd};
use itm_numkernel::{HighFloat, IBig, RBig, UBig};
use itm_sim::Params;
use rayon::prelude::*;
use serde::Serialize;

use crate::{k_sequence_adaptive, Pgm, RenormError, TypeStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RasterMode {
    /// A pixel's value is the best death step over all of its points,
    /// computed exactly on polygons.
    Region,
    /// A pixel's value is the death step of its center.
    Center,
}

#[derive(Clone, Debug)]
pub struct RasterConfig {
    pub width: usize,
    pub height: usize,
    pub depth: usize,
    pub precision: usize,
    pub mode: RasterMode,
    /// Thread count; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Largest number of strips α ∈ (1/(k+1), 1/k] followed from one polygon.
    pub strip_cap: usize,
    pub output: Option<PathBuf>,
}

impl Default for RasterConfig {
    fn default() -> Self {
        RasterConfig {
            width: 100,
            height: 100,
            depth: 12,
            precision: itm_numkernel::DEFAULT_PRECISION,
            mode: RasterMode::Region,
            workers: None,
            strip_cap: 256,
            output: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RasterSummary {
    pub width: usize,
    pub height: usize,
    pub depth: usize,
    pub survivors: usize,
    pub dead: usize,
    pub outside: usize,
    pub precision_exhausted: usize,
    pub mode: RasterMode,
}

#[derive(Clone, Debug, Copy, PartialEq, Eq)]
pub enum PixelFate {
    Outside,
    Survivor,
    /// Death step m ≥ 1; the flag marks an incomplete search.
    Dead(usize, bool),
}

#[derive(Clone, Debug)]
pub struct Raster {
    pub fates: Vec<PixelFate>,
    pub image: Pgm,
    pub summary: RasterSummary,
}

impl Raster {
    pub fn fate(&self, col: usize, row: usize) -> PixelFate {
        self.fates[row * self.summary.width + col]
    }

    pub fn survivor_mask(&self) -> Vec<bool> {
        self.fates.iter().map(|f| *f == PixelFate::Survivor).collect()
    }
}

/// Column of the pixel containing α: columns cover (i/w, (i+1)/w].
pub fn pixel_col(alpha: f64, width: usize) -> usize {
    ((alpha * width as f64).ceil() as usize).clamp(1, width) - 1
}

/// Row of the pixel containing β: row j covers (1 − (j+1)/h, 1 − j/h].
pub fn pixel_row(beta: f64, height: usize) -> usize {
    (((1.0 - beta) * height as f64).floor() as usize).min(height - 1)
}

pub fn pixel_value(fate: PixelFate, depth: usize) -> u8 {
    match fate {
        PixelFate::Outside => 0,
        PixelFate::Survivor => 255,
        PixelFate::Dead(m, _) => (255 * m / depth).clamp(1, 254) as u8,
    }
}

/// Renders the depth-n approximation of Ω_∞ over the square (0,1]².
pub fn raster_omega(cfg: &RasterConfig) -> Result<Raster, RenormError> {
    if cfg.width == 0 || cfg.height == 0 || cfg.depth == 0 {
        return Err(RenormError::BadConfig("width, height and depth must be at least 1".into()));
    }
    let run = || -> Vec<PixelFate> {
        (0..cfg.width * cfg.height)
            .into_par_iter()
            .map(|idx| {
                let (col, row) = (idx % cfg.width, idx / cfg.width);
                match cfg.mode {
                    RasterMode::Region => region_fate(cfg, col, row),
                    RasterMode::Center => center_fate(cfg, col, row),
                }
            })
            .collect()
    };
    let fates = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RenormError::BadConfig(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut summary = RasterSummary {
        width: cfg.width,
        height: cfg.height,
        depth: cfg.depth,
        survivors: 0,
        dead: 0,
        outside: 0,
        precision_exhausted: 0,
        mode: cfg.mode,
    };
    for f in &fates {
        match f {
            PixelFate::Outside => summary.outside += 1,
            PixelFate::Survivor => summary.survivors += 1,
            PixelFate::Dead(_, incomplete) => {
                summary.dead += 1;
                if *incomplete {
                    summary.precision_exhausted += 1;
                }
            }
        }
    }
    let image = Pgm {
        width: cfg.width,
        height: cfg.height,
        comments: vec![
            format!("itm-lab omega raster depth={}", cfg.depth),
            format!(
                "orientation: column i covers alpha in (i/{w},(i+1)/{w}], row j covers beta in (1-(j+1)/{h},1-j/{h}]; \
                 top row is beta near 1, the diagonal beta = alpha runs from bottom-left to top-right",
                w = cfg.width,
                h = cfg.height
            ),
            format!("mode={}", if cfg.mode == RasterMode::Region { "region" } else { "center" }),
        ],
        pixels: fates.iter().map(|&f| pixel_value(f, cfg.depth)).collect(),
    };
    if let Some(path) = &cfg.output {
        std::fs::write(path, image.to_bytes()).map_err(|e| RenormError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(Raster { fates, image, summary })
}

fn center_fate(cfg: &RasterConfig, col: usize, row: usize) -> PixelFate {
    let a = RBig::from_parts(IBig::from(2 * col + 1), UBig::from(2 * cfg.width));
    let b = RBig::ONE - RBig::from_parts(IBig::from(2 * row + 1), UBig::from(2 * cfg.height));
    if b > a {
        return PixelFate::Outside;
    }
    let v = k_sequence_adaptive(cfg.precision, cfg.depth, |prec| {
        Ok(Params::new(HighFloat::from_rational(&a, prec), HighFloat::from_rational(&b, prec)))
    })
    .expect("center parameters are valid");
    match v.status {
        TypeStatus::InfiniteToDepth(_) => PixelFate::Survivor,
        TypeStatus::FiniteAtStep(m) => PixelFate::Dead(m, false),
        TypeStatus::PrecisionExhausted(m) => PixelFate::Dead(m, true),
    }
}

/// Homogeneous point (X, Y, Z) with α = X/Z, β = Y/Z, Z > 0.
type HPt = [IBig; 3];
type Functional = [IBig; 3];

fn dot(f: &Functional, v: &HPt) -> IBig {
    &f[0] * &v[0] + &f[1] * &v[1] + &f[2] * &v[2]
}

fn gcd(a: &IBig, b: &IBig) -> IBig {
    if *a == IBig::ZERO {
        return b.clone().abs();
    }
    if *b == IBig::ZERO {
        return a.clone().abs();
    }
    IBig::from(a.gcd(b))
}

fn normalize(mut v: HPt) -> HPt {
    let g = gcd(&gcd(&v[0], &v[1]), &v[2]);
    if g > IBig::ONE {
        for x in &mut v {
            *x = &*x / &g;
        }
    }
    v
}

/// Keeps the part of a convex polygon where f ≥ 0.
fn clip(poly: &[HPt], f: &Functional) -> Vec<HPt> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let vals: Vec<IBig> = poly.iter().map(|v| dot(f, v)).collect();
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        let (fp, fq) = (&vals[i], &vals[j]);
        if *fp >= IBig::ZERO {
            out.push(poly[i].clone());
        }
        if (*fp > IBig::ZERO && *fq < IBig::ZERO) || (*fp < IBig::ZERO && *fq > IBig::ZERO) {
            let (ap, aq) = (fp.clone().abs(), fq.clone().abs());
            let r = [0, 1, 2].map(|c| &ap * &poly[j][c] + &aq * &poly[i][c]);
            out.push(normalize(r));
        }
    }
    out
}

fn det3(a: &HPt, b: &HPt, c: &HPt) -> IBig {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn has_area(poly: &[HPt]) -> bool {
    poly.len() >= 3 && (1..poly.len() - 1).any(|i| det3(&poly[0], &poly[i], &poly[i + 1]) != IBig::ZERO)
}

fn func(a: i64, b: i64, c: i64) -> Functional {
    [IBig::from(a), IBig::from(b), IBig::from(c)]
}

/// Clips to the closure of U°: β ≥ 0, α − β ≥ 0, 1 − α ≥ 0.
fn clip_u(poly: &[HPt]) -> Vec<HPt> {
    let p = clip(poly, &func(0, 1, 0));
    let p = clip(&p, &func(1, -1, 0));
    clip(&p, &func(-1, 0, 1))
}

fn g_homogeneous(v: &HPt, k: u64) -> HPt {
    let k = IBig::from(k);
    normalize([v[1].clone(), &v[1] - &v[2] + k * &v[0], v[0].clone()])
}

/// Range of ⌊1/α⌋ over the polygon; the upper end is `None` if α reaches 0.
fn strip_range(poly: &[HPt]) -> (u64, Option<u64>) {
    let inv = |v: &HPt| -> Option<u64> {
        if v[0] == IBig::ZERO {
            None
        } else {
            Some(u64::try_from(&v[2] / &v[0]).unwrap_or(u64::MAX))
        }
    };
    let lo = poly.iter().filter_map(inv).min().unwrap_or(u64::MAX).max(1);
    let hi = if poly.iter().any(|v| v[0] == IBig::ZERO) { None } else { poly.iter().filter_map(inv).max() };
    (lo, hi)
}

struct Search {
    depth: usize,
    strip_cap: usize,
    truncated: bool,
}

impl Search {
    /// Largest number of further G-steps some positive-area part of
    /// `poly` (already inside U°) stays in U°, capped at `depth − done`.
    fn run(&mut self, poly: &[HPt], done: usize) -> usize {
        if done == self.depth {
            return done;
        }
        let (lo, hi) = strip_range(poly);
        let last = match hi {
            Some(h) if h - lo < self.strip_cap as u64 => h,
            _ => {
                self.truncated = true;
                lo + self.strip_cap as u64 - 1
            }
        };
        let mut best = done;
        for k in lo..=last {
            let piece = clip(poly, &func(k as i64 + 1, 0, -1));
            let piece = clip(&piece, &func(-(k as i64), 0, 1));
            if !has_area(&piece) {
                continue;
            }
            let image: Vec<HPt> = piece.iter().map(|v| g_homogeneous(v, k)).collect();
            let image = clip_u(&image);
            if !has_area(&image) {
                continue;
            }
            best = best.max(self.run(&image, done + 1));
            if best == self.depth {
                break;
            }
        }
        best
    }
}

fn region_fate(cfg: &RasterConfig, col: usize, row: usize) -> PixelFate {
    let (w, h) = (cfg.width as i64, cfg.height as i64);
    let (col, row) = (col as i64, row as i64);
    // α ∈ [col/w, (col+1)/w], β ∈ [1 − (row+1)/h, 1 − row/h]
    let (a0, a1) = (col * h, (col + 1) * h);
    let (b0, b1) = ((h - row - 1) * w, (h - row) * w);
    let z = w * h;
    let square: Vec<HPt> = [[a0, b0], [a1, b0], [a1, b1], [a0, b1]]
        .iter()
        .map(|&[a, b]| normalize([IBig::from(a), IBig::from(b), IBig::from(z)]))
        .collect();
    let poly = clip_u(&square);
    if !has_area(&poly) {
        return PixelFate::Outside;
    }
    let mut s = Search { depth: cfg.depth, strip_cap: cfg.strip_cap, truncated: false };
    let survived = s.run(&poly, 0);
    if survived == cfg.depth {
        PixelFate::Survivor
    } else {
        PixelFate::Dead(survived + 1, s.truncated)
    }
}
