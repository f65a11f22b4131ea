//! The `delta`-independence ratio: the largest `||h||_1` over block functions
//! `h: [0,1] -> [0,1]` such that the restriction `W[h]`, rescaled to a
//! graphon, has density at most `delta`.
//!
//! With `x_b = mu_b h_b` the rescaled density is `x^T M x / (sum x)^2`, so the
//! feasible set is `{x in prod [0, mu_b] : x^T M x <= delta (sum x)^2}` and the
//! objective is `sum x`. The search combines a grid over `h` with exact
//! coordinate-wise line searches.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{BlockFunction, Kind, StepFunction};
use crate::par::map_indexed;

/// Largest number of grid points visited before the resolution is reduced.
pub const GRID_LIMIT: usize = 2_000_000;
const FEASIBILITY_SLACK: f64 = 1e-12;
const SWEEPS: usize = 200;

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceRatio {
    pub alpha: f64,
    pub h: BlockFunction,
    /// Grid resolution actually used (may be below the request).
    pub resolution: usize,
}

fn quad(m: &StepFunction, x: &[f64]) -> f64 {
    let k = x.len();
    let mut s = 0.0;
    for a in 0..k {
        for b in 0..k {
            s += x[a] * m.value(a, b) * x[b];
        }
    }
    s
}

fn feasible(w: &StepFunction, x: &[f64], delta: f64) -> bool {
    let total: f64 = x.iter().sum();
    total > 0.0 && quad(w, x) <= delta * total * total + FEASIBILITY_SLACK * total * total
}

/// Largest `x_b` in `[x_b, mu_b]` keeping `x` feasible, assuming the current
/// value is feasible.
fn line_search(w: &StepFunction, x: &mut [f64], b: usize, delta: f64) {
    let mu = w.measures()[b];
    let current = x[b];
    let k = x.len();
    let s: f64 = (0..k).filter(|&a| a != b).map(|a| x[a]).sum();
    let r: f64 = (0..k).filter(|&a| a != b).map(|a| w.value(a, b) * x[a]).sum();
    let mut c = 0.0;
    for a in (0..k).filter(|&a| a != b) {
        for d in (0..k).filter(|&d| d != b) {
            c += x[a] * w.value(a, d) * x[d];
        }
    }
    // q(t) = A t^2 + B t + D <= 0
    let qa = w.value(b, b) - delta;
    let qb = 2.0 * (r - delta * s);
    let qd = c - delta * s * s;
    let q = |t: f64| qa * t * t + qb * t + qd;
    if q(mu) <= 0.0 {
        x[b] = mu;
        return;
    }
    let mut best = current;
    if qa.abs() < 1e-15 {
        if qb > 0.0 {
            best = (-qd / qb).min(mu);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qd;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let r1 = (-qb - sq) / (2.0 * qa);
            let r2 = (-qb + sq) / (2.0 * qa);
            let (lo, hi) = (r1.min(r2), r1.max(r2));
            best = if qa > 0.0 {
                hi.min(mu)
            } else {
                // feasible set is (-inf, lo] u [hi, inf); mu is infeasible
                lo.min(mu)
            };
        }
    }
    if best > current {
        let old = x[b];
        x[b] = best;
        if !feasible(w, x, delta) {
            x[b] = old;
        }
    }
}

/// `delta`-independence ratio of a graphon using a grid of `resolution`
/// steps per block plus local refinement. Returns `alpha = 0` (and `h = 0`)
/// when no restriction meets the density bound.
pub fn independence_ratio(w: &StepFunction, delta: f64, resolution: usize) -> Result<IndependenceRatio> {
    if w.kind() != Kind::Graphon {
        return Err(Error::param("the independence ratio is defined for graphons"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::param("delta must lie in [0, 1]"));
    }
    if resolution == 0 {
        return Err(Error::param("resolution must be positive"));
    }
    let k = w.blocks();
    let mu = w.measures();
    let mut res = resolution;
    while res > 1 && (res + 1).checked_pow(k as u32).is_none_or(|n| n > GRID_LIMIT) {
        res -= 1;
    }
    let base = res + 1;
    let points = match base.checked_pow(k as u32) {
        Some(n) if n <= GRID_LIMIT => n,
        _ => {
            return Err(Error::budget(format!(
                "{k} blocks exceed the independence-ratio grid even at resolution 1"
            )))
        }
    };
    let step = (base - 1) as f64;
    let chunk = 4096;
    let chunks = points.div_ceil(chunk);
    let grid_best: Vec<Option<(f64, usize)>> = map_indexed(chunks, |c| {
        let lo = c * chunk;
        let hi = (lo + chunk).min(points);
        let mut best: Option<(f64, usize)> = None;
        let mut x = vec![0.0; k];
        for i in lo..hi {
            let mut rem = i;
            for b in 0..k {
                x[b] = mu[b] * (rem % base) as f64 / step;
                rem /= base;
            }
            if feasible(w, &x, delta) {
                let total: f64 = x.iter().sum();
                if best.is_none_or(|(t, _)| total > t) {
                    best = Some((total, i));
                }
            }
        }
        best
    });
    let mut best: Option<(f64, usize)> = None;
    for (t, i) in grid_best.into_iter().flatten() {
        if best.is_none_or(|(bt, _)| t > bt) {
            best = Some((t, i));
        }
    }
    let Some((_, index)) = best else {
        return Ok(IndependenceRatio {
            alpha: 0.0,
            h: BlockFunction::constant(k, 0.0),
            resolution: base - 1,
        });
    };
    let mut x = vec![0.0; k];
    let mut rem = index;
    for b in 0..k {
        x[b] = mu[b] * (rem % base) as f64 / step;
        rem /= base;
    }
    for _ in 0..SWEEPS {
        let before: f64 = x.iter().sum();
        for b in 0..k {
            line_search(w, &mut x, b, delta);
        }
        let after: f64 = x.iter().sum();
        if after - before <= 1e-15 {
            break;
        }
    }
    let h: Vec<f64> = (0..k).map(|b| (x[b] / mu[b]).clamp(0.0, 1.0)).collect();
    let alpha = (0..k).map(|b| mu[b] * h[b]).sum();
    Ok(IndependenceRatio {
        alpha,
        h: BlockFunction::new(h),
        resolution: base - 1,
    })
}

/// Rescaled density of `W[h]`: `x^T M x / (sum x)^2` with `x_b = mu_b h_b`.
pub fn restricted_density(w: &StepFunction, h: &BlockFunction) -> Result<f64> {
    if h.len() != w.blocks() {
        return Err(Error::invalid("restriction has the wrong number of blocks"));
    }
    let x: Vec<f64> = (0..h.len()).map(|b| w.measures()[b] * h.get(b)).collect();
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return Err(Error::param("the restriction has zero mass"));
    }
    Ok(quad(w, &x) / (total * total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_above_delta_has_no_sparse_part() {
        let w = StepFunction::constant(0.5).unwrap();
        assert_eq!(independence_ratio(&w, 0.1, 20).unwrap().alpha, 0.0);
        assert!((independence_ratio(&w, 0.5, 20).unwrap().alpha - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_block_is_found() {
        let w = StepFunction::graphon(&[0.3, 0.7], &[vec![0.0, 0.8], vec![0.8, 0.9]]).unwrap();
        let r = independence_ratio(&w, 0.01, 20).unwrap();
        assert!(r.alpha >= 0.3 - 1e-12);
        assert!(restricted_density(&w, &r.h).unwrap() <= 0.01 + 1e-9);
    }

    #[test]
    fn refinement_goes_past_the_grid() {
        // bipartite: taking all of one side plus some of the other
        let w = StepFunction::uniform(Kind::Graphon, &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = independence_ratio(&w, 0.2, 3).unwrap();
        assert!(restricted_density(&w, &r.h).unwrap() <= 0.2 + 1e-9);
        assert!(r.alpha > 0.5);
    }
}
