//! Expansion of `t(H, p + U)` over edge subsets:
//! `t(H, W) = sum_{F subset E(H)} p^{|E(H)| - |F|} t(H<F>, U)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::{Kind, StepFunction};
use crate::hom::{DensityOptions, HomPlan};
use crate::numeric::KahanSum;
use crate::par::map_indexed;
use crate::witness::{Group, PathedWitness};

/// Largest edge count expanded by default (`2^20` terms).
pub const MAX_EXPANSION_EDGES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionTerm {
    pub edges: Vec<[usize; 2]>,
    pub coefficient: f64,
    /// `t(H<F>, U)`.
    pub density: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<Group>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub p: f64,
    /// The `F = {}` term, `p^{|E(H)|}`.
    pub empty_term: f64,
    /// Nonempty subsets, in increasing order of their edge bitmask.
    pub terms: Vec<ExpansionTerm>,
    pub total: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ExpansionOptions<'a> {
    pub max_edges: usize,
    /// Label each term with its group; `h` must then be the graph of this
    /// witness.
    pub groups: Option<&'a PathedWitness>,
    pub density: DensityOptions,
}

impl Default for ExpansionOptions<'_> {
    fn default() -> Self {
        ExpansionOptions {
            max_edges: MAX_EXPANSION_EDGES,
            groups: None,
            density: DensityOptions::default(),
        }
    }
}

pub fn subset_expansion(h: &Graph, w: &StepFunction) -> Result<ExpansionReport> {
    subset_expansion_with(h, w, &ExpansionOptions::default())
}

pub fn subset_expansion_with(h: &Graph, w: &StepFunction, opts: &ExpansionOptions) -> Result<ExpansionReport> {
    if w.kind() != Kind::Graphon {
        return Err(Error::param("the subset expansion takes a graphon"));
    }
    let m = h.edge_count();
    if m > opts.max_edges || m > 63 {
        return Err(Error::budget(format!(
            "{m} edges give 2^{m} subsets; the limit is {} edges",
            opts.max_edges.min(63)
        )));
    }
    if let Some(hl) = opts.groups {
        if hl.graph() != h {
            return Err(Error::param("the graph does not match the witness used for grouping"));
        }
    }
    let (p, u) = w.deviation()?;
    let count = 1usize << m;
    let terms: Vec<Result<ExpansionTerm>> = map_indexed(count - 1, |i| {
        let mask = (i + 1) as u64;
        let sub = h.edge_subgraph_mask(mask);
        let size = mask.count_ones() as usize;
        let density = HomPlan::new(&sub).density(&u, &opts.density)?;
        let group = match opts.groups {
            Some(hl) => {
                let flags: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
                Some(hl.classify_mask(&flags)?)
            }
            None => None,
        };
        Ok(ExpansionTerm {
            edges: sub.edges().iter().map(|&(a, b)| [a, b]).collect(),
            coefficient: p.powi((m - size) as i32),
            density,
            group,
        })
    });
    let terms: Vec<ExpansionTerm> = terms.into_iter().collect::<Result<_>>()?;
    let empty_term = p.powi(m as i32);
    let mut acc = KahanSum::new();
    acc.add(empty_term);
    for t in &terms {
        acc.add(t.coefficient * t.density);
    }
    Ok(ExpansionReport {
        p,
        empty_term,
        terms,
        total: acc.value(),
    })
}

impl ExpansionReport {
    /// Sum of `coefficient * density` over the terms of one group.
    pub fn group_total(&self, group: Group) -> f64 {
        let mut acc = KahanSum::new();
        for t in self.terms.iter().filter(|t| t.group == Some(group)) {
            acc.add(t.coefficient * t.density);
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_density;

    #[test]
    fn total_matches_direct_density() {
        let w = StepFunction::graphon(&[0.3, 0.7], &[vec![0.8, 0.1], vec![0.1, 0.6]]).unwrap();
        for h in [Graph::complete(4), Graph::cycle(5).unwrap(), Graph::path(4)] {
            let r = subset_expansion(&h, &w).unwrap();
            let t = hom_density(&h, &w).unwrap();
            assert!((r.total - t).abs() <= 1e-12 * t.max(1e-300), "{} vs {t}", r.total);
            assert_eq!(r.terms.len(), (1 << h.edge_count()) - 1);
        }
    }

    #[test]
    fn single_edges_vanish() {
        let w = StepFunction::graphon(&[0.5, 0.5], &[vec![0.9, 0.2], vec![0.2, 0.4]]).unwrap();
        let r = subset_expansion(&Graph::complete(3), &w).unwrap();
        for t in r.terms.iter().filter(|t| t.edges.len() == 1) {
            assert!(t.density.abs() < 1e-15);
        }
    }

    #[test]
    fn too_many_edges() {
        let w = StepFunction::constant(0.5).unwrap();
        assert!(matches!(
            subset_expansion(&Graph::complete(7), &w),
            Err(Error::Budget(_))
        ));
    }
}
