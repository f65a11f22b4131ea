//! Random graphs of large girth and the local density check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chromatic::independence_upper_bound;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::map_indexed;

/// Node cap for the exact independence-number search in the girth report.
const INDEPENDENCE_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct HighGirthReport {
    pub requested_vertices: usize,
    pub edge_probability: f64,
    pub vertices: usize,
    pub edges: usize,
    /// `None` when the result is a forest.
    pub girth: Option<usize>,
    pub independence_upper: usize,
    pub independence_exact: bool,
    /// `ceil(n' / alpha_upper)`, a lower bound on the chromatic number.
    pub chromatic_lower_bound: usize,
}

/// Samples `G(n, p)` with `p = n^{1/(g-1) - 1}` and deletes a vertex on a
/// shortest cycle until no cycle shorter than `g` remains.
pub fn random_high_girth(n: usize, g: usize, seed: u64) -> Result<(Graph, HighGirthReport)> {
    if g < 3 {
        return Err(Error::param(format!("girth target must be at least 3, got {g}")));
    }
    let p = if n <= 1 {
        0.0
    } else {
        (n as f64).powf(1.0 / (g as f64 - 1.0) - 1.0).min(1.0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let mut graph = Graph::new(n, &edges)?;
    while let Some((len, v)) = graph.shortest_cycle_through() {
        if len >= g {
            break;
        }
        graph = graph.remove_vertex(v);
    }
    let bound = independence_upper_bound(&graph, INDEPENDENCE_NODE_BUDGET);
    let chromatic_lower_bound = if bound.value == 0 {
        0
    } else {
        graph.vertex_count().div_ceil(bound.value)
    };
    let report = HighGirthReport {
        requested_vertices: n,
        edge_probability: p,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        girth: graph.girth(),
        independence_upper: bound.value,
        independence_exact: bound.exact,
        chromatic_lower_bound,
    };
    Ok((graph, report))
}

/// Largest graph checked over all vertex subsets.
pub const EXACT_DENSE_LIMIT: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct LocalDensityReport {
    pub dense: bool,
    /// A qualifying subset whose induced density is below `d`.
    pub witness: Option<Vec<usize>>,
    pub exact: bool,
    pub subsets_checked: u64,
    /// For sampled runs: with 95% confidence the fraction of violating
    /// qualifying subsets is below this value (rule of three).
    pub violation_rate_bound: Option<f64>,
}

/// Density of `A` in `g`: `2 e(A) / |A|^2`, the edge density of the
/// induced subgraph's step graphon.
fn subset_density(adj: &[u32], set: u32) -> f64 {
    let size = set.count_ones() as f64;
    let mut twice_edges = 0u32;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        twice_edges += (adj[v] & set).count_ones();
    }
    twice_edges as f64 / (size * size)
}

/// Whether every subset of at least `rho |G|` vertices induces density at
/// least `d`. Exhaustive for `|G| <= 25`; otherwise `samples` random subsets
/// per admissible size class are drawn from `seed`.
pub fn is_locally_dense(g: &Graph, rho: f64, d: f64, samples: usize, seed: u64) -> Result<LocalDensityReport> {
    if !(0.0..=1.0).contains(&rho) || rho == 0.0 {
        return Err(Error::param("rho must lie in (0, 1]"));
    }
    let n = g.vertex_count();
    let min_size = ((rho * n as f64) - 1e-12).ceil().max(1.0) as usize;
    if n == 0 || min_size > n {
        return Ok(LocalDensityReport {
            dense: true,
            witness: None,
            exact: true,
            subsets_checked: 0,
            violation_rate_bound: None,
        });
    }
    if n <= EXACT_DENSE_LIMIT {
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
            .collect();
        let total: u64 = 1 << n;
        let chunk: u64 = 1 << 14;
        let chunks = total.div_ceil(chunk) as usize;
        let found: Vec<(Option<u32>, u64)> = map_indexed(chunks, |c| {
            let lo = c as u64 * chunk;
            let hi = (lo + chunk).min(total);
            let mut checked = 0;
            for s in lo..hi {
                let set = s as u32;
                if (set.count_ones() as usize) < min_size {
                    continue;
                }
                checked += 1;
                if subset_density(&adj, set) < d {
                    return (Some(set), checked);
                }
            }
            (None, checked)
        });
        let witness = found.iter().find_map(|(w, _)| *w);
        let checked = found.iter().map(|(_, c)| c).sum();
        return Ok(LocalDensityReport {
            dense: witness.is_none(),
            witness: witness.map(|set| (0..n).filter(|&v| set >> v & 1 == 1).collect()),
            exact: true,
            subsets_checked: checked,
            violation_rate_bound: None,
        });
    }
    if samples == 0 {
        return Err(Error::param("sampled mode needs a positive sample count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0u64;
    let mut order: Vec<usize> = (0..n).collect();
    for size in min_size..=n {
        for _ in 0..samples {
            // partial Fisher-Yates for a uniform subset of this size
            for i in 0..size {
                let j = rng.random_range(i..n);
                order.swap(i, j);
            }
            let mut set: Vec<usize> = order[..size].to_vec();
            set.sort_unstable();
            checked += 1;
            let sub = g.induced(&set);
            let density = 2.0 * sub.edge_count() as f64 / (size * size) as f64;
            if density < d {
                return Ok(LocalDensityReport {
                    dense: false,
                    witness: Some(set),
                    exact: false,
                    subsets_checked: checked,
                    violation_rate_bound: None,
                });
            }
        }
    }
    Ok(LocalDensityReport {
        dense: true,
        witness: None,
        exact: false,
        subsets_checked: checked,
        violation_rate_bound: Some(3.0 / checked as f64),
    })
}
