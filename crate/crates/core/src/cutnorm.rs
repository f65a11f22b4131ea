//! Exact cut norm of step kernels and the inequalities that tie it to
//! homomorphism densities.
//!
//! For a step kernel `U` the quantity `\int_{S x T} U` depends on `S` and `T`
//! only through the fractions `s_a = |S cap I_a| / mu_a` and
//! `t_b = |T cap I_b| / mu_b`, and is bilinear in them:
//! `sum_{a,b} s_a t_b mu_a mu_b U_ab`. A bilinear function on a product of
//! cubes attains its maximum and its minimum at vertices, so the supremum of
//! the absolute value is attained by unions of whole blocks. For fixed `S`,
//! the best `T` for the positive side takes every block with nonnegative row
//! sum `r_b = sum_{a in S} mu_a mu_b U_ab`, and for the negative side every
//! block with nonpositive row sum. Enumerating `S` therefore gives the exact
//! value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::{Kind, StepFunction};
use crate::hom::hom_density;
use crate::numeric::KahanSum;
use crate::par::map_indexed;
use crate::report::InequalityCheck;

/// Largest block count accepted by [`cut_norm_exact`].
pub const MAX_CUT_BLOCKS: usize = 24;
const CUT_CHUNK: usize = 1 << 12;
/// Objective values closer than this are ties, resolved by the smaller `S`.
const TIE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutWitness {
    pub value: f64,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(rename = "T")]
    pub t: Vec<usize>,
}

/// `|sum_{a in S, b in T} mu_a mu_b U_ab|`.
pub fn cut_value(u: &StepFunction, s: &[usize], t: &[usize]) -> f64 {
    let mu = u.measures();
    let mut acc = KahanSum::new();
    for &a in s {
        for &b in t {
            acc.add(mu[a] * mu[b] * u.value(a, b));
        }
    }
    acc.value().abs()
}

fn mask_to_list(mask: u32, k: usize) -> Vec<usize> {
    (0..k).filter(|&i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    s: u32,
    t: u32,
}

impl Candidate {
    /// Whether `self` should replace `best`.
    fn beats(&self, best: &Candidate, k: usize) -> bool {
        if self.value > best.value + TIE {
            return true;
        }
        if self.value < best.value - TIE {
            return false;
        }
        mask_to_list(self.s, k) < mask_to_list(best.s, k)
    }
}

/// Exact cut norm with a maximising pair of block sets.
pub fn cut_norm_exact(u: &StepFunction) -> Result<CutWitness> {
    let k = u.blocks();
    if k > MAX_CUT_BLOCKS {
        return Err(Error::budget(format!(
            "exact cut norm enumerates 2^k block sets; k = {k} exceeds {MAX_CUT_BLOCKS}"
        )));
    }
    let mu = u.measures();
    let weight: Vec<f64> = (0..k * k)
        .map(|i| mu[i / k] * mu[i % k] * u.value(i / k, i % k))
        .collect();
    let total: usize = 1 << k;
    let chunks = total.div_ceil(CUT_CHUNK);
    let bests: Vec<Candidate> = map_indexed(chunks, |c| {
        let lo = c * CUT_CHUNK;
        let hi = (lo + CUT_CHUNK).min(total);
        let gray = |i: usize| (i ^ (i >> 1)) as u32;
        let mut s = gray(lo);
        let mut rows = vec![0.0; k];
        for a in 0..k {
            if s >> a & 1 == 1 {
                for b in 0..k {
                    rows[b] += weight[a * k + b];
                }
            }
        }
        let mut best = Candidate {
            value: f64::NEG_INFINITY,
            s: 0,
            t: 0,
        };
        for i in lo..hi {
            if i > lo {
                let next = gray(i);
                let a = (s ^ next).trailing_zeros() as usize;
                let sign = if next >> a & 1 == 1 { 1.0 } else { -1.0 };
                for b in 0..k {
                    rows[b] += sign * weight[a * k + b];
                }
                s = next;
            }
            let (mut pos, mut neg) = (0.0, 0.0);
            let (mut tpos, mut tneg) = (0u32, 0u32);
            for (b, &r) in rows.iter().enumerate() {
                if r >= 0.0 {
                    pos += r;
                    tpos |= 1 << b;
                }
                if r <= 0.0 {
                    neg -= r;
                    tneg |= 1 << b;
                }
            }
            let cand = if pos >= neg {
                Candidate { value: pos, s, t: tpos }
            } else {
                Candidate { value: neg, s, t: tneg }
            };
            if cand.beats(&best, k) {
                best = cand;
            }
        }
        best
    });
    let mut best = bests[0];
    for cand in &bests[1..] {
        if cand.beats(&best, k) {
            best = *cand;
        }
    }
    let s = mask_to_list(best.s, k);
    let t = mask_to_list(best.t, k);
    Ok(CutWitness {
        value: cut_value(u, &s, &t),
        s,
        t,
    })
}

/// `sup |\int_{S x T} U|` by brute force over all pairs of block sets; the
/// reference for [`cut_norm_exact`].
pub fn cut_norm_pairs(u: &StepFunction) -> Result<f64> {
    let k = u.blocks();
    if k > 14 {
        return Err(Error::budget("pairwise enumeration is limited to 14 blocks"));
    }
    let mut best: f64 = 0.0;
    for s in 0u32..1 << k {
        let sl = mask_to_list(s, k);
        for t in 0u32..1 << k {
            best = best.max(cut_value(u, &sl, &mask_to_list(t, k)));
        }
    }
    Ok(best)
}

fn ensure_bounded(u: &StepFunction) -> Result<()> {
    if u.values().iter().any(|x| x.abs() > 1.0) {
        return Err(Error::param("the cut-norm bounds need |U| <= 1"));
    }
    Ok(())
}

/// `||U||^4 <= t(C_4, U) <= 4 ||U||` and `t(P_2, U) <= 2 ||U||`.
pub fn sandwich_check(u: &StepFunction) -> Result<Vec<InequalityCheck>> {
    ensure_bounded(u)?;
    let cut = cut_norm_exact(u)?.value;
    let c4 = hom_density(&Graph::cycle(4)?, u)?;
    let p2 = hom_density(&Graph::path(2), u)?;
    Ok(vec![
        InequalityCheck::le("cut4_below_c4", cut.powi(4), c4),
        InequalityCheck::le("c4_below_4cut", c4, 4.0 * cut),
        InequalityCheck::le("p2_below_2cut", p2, 2.0 * cut),
    ])
}

/// `p^4 + ||W - p||^4 / 8 <= t(C_4, W) <= p^4 + 4 ||W - p||`.
pub fn c4_deviation_bound(w: &StepFunction) -> Result<Vec<InequalityCheck>> {
    if w.kind() != Kind::Graphon {
        return Err(Error::param("the C4 deviation bound is stated for graphons"));
    }
    let (p, u) = w.deviation()?;
    let eps = cut_norm_exact(&u)?.value;
    let c4 = hom_density(&Graph::cycle(4)?, w)?;
    let p4 = p.powi(4);
    Ok(vec![
        InequalityCheck::le("c4_lower", p4 + eps.powi(4) / 8.0, c4),
        InequalityCheck::le("c4_upper", c4, p4 + 4.0 * eps),
        InequalityCheck::le("deviation_below_2p", eps, 2.0 * p),
    ])
}

/// `|t(H, W1) - t(H, W2)| <= |E(H)| ||W1 - W2||`, on a common refinement.
pub fn counting_lemma_bound(h: &Graph, w1: &StepFunction, w2: &StepFunction) -> Result<Vec<InequalityCheck>> {
    let diff = w1.difference(w2)?;
    let cut = cut_norm_exact(&diff)?.value;
    let t1 = hom_density(h, w1)?;
    let t2 = hom_density(h, w2)?;
    Ok(vec![InequalityCheck::le(
        "counting",
        (t1 - t2).abs(),
        h.edge_count() as f64 * cut,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkerboard() {
        let u = StepFunction::kernel(&[0.5, 0.5], &[vec![0.3, -0.3], vec![-0.3, 0.3]]).unwrap();
        let c = cut_norm_exact(&u).unwrap();
        assert!((c.value - 0.075).abs() < 1e-15);
        assert_eq!(c.s, vec![0]);
        assert_eq!(c.t, vec![0]);
        assert!(sandwich_check(&u).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn constant_and_zero() {
        let u = StepFunction::kernel(&[0.2, 0.8], &[vec![-0.4, -0.4], vec![-0.4, -0.4]]).unwrap();
        let c = cut_norm_exact(&u).unwrap();
        assert!((c.value - 0.4).abs() < 1e-15);
        assert_eq!(c.s, vec![0, 1]);
        assert_eq!(c.t, vec![0, 1]);
        let z = StepFunction::kernel(&[1.0, 1.0], &[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(cut_norm_exact(&z).unwrap().value, 0.0);
    }

    #[test]
    fn agrees_with_pairs() {
        let u = StepFunction::kernel(
            &[0.1, 0.2, 0.3, 0.4],
            &[
                vec![0.5, -0.2, 0.1, -0.7],
                vec![-0.2, 0.9, -0.4, 0.3],
                vec![0.1, -0.4, -0.6, 0.2],
                vec![-0.7, 0.3, 0.2, 0.05],
            ],
        )
        .unwrap();
        let a = cut_norm_exact(&u).unwrap().value;
        let b = cut_norm_pairs(&u).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn deviation_bound_at_constant() {
        let w = StepFunction::constant(0.3).unwrap();
        assert!(c4_deviation_bound(&w).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn witness_json_keys() {
        let c = CutWitness { value: 0.5, s: vec![0], t: vec![1] };
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"value":0.5,"S":[0],"T":[1]}"#);
    }
}
