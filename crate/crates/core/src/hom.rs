//! Homomorphism densities of finite graphs in step functions.
//!
//! Two evaluation routes are available: direct enumeration of all block
//! assignments, and variable elimination along a greedy min-fill order. Both
//! use compensated summation; `Method::Auto` picks whichever has the smaller
//! estimated operation count.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph};
use crate::graphon::{BlockFunction, Kind, StepFunction};
use crate::numeric::{saturating_pow, KahanSum};
use crate::par::map_indexed;

/// Default cap on the estimated number of multiply-adds per evaluation.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

static BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_BUDGET);

/// Replaces the budget used by `DensityOptions::default()` for the rest of
/// the process.
pub fn set_default_budget(budget: u64) {
    BUDGET.store(budget, Ordering::Relaxed);
}

pub fn default_budget() -> u64 {
    BUDGET.load(Ordering::Relaxed)
}

/// Assignments processed per parallel task during enumeration. Fixed so the
/// summation order does not depend on the thread count.
const ENUM_CHUNK: usize = 1 << 12;
/// Output entries per parallel task during elimination.
const ELIM_CHUNK: usize = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    Enumerate,
    Eliminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityOptions {
    pub budget: u64,
    pub method: Method,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            budget: default_budget(),
            method: Method::Auto,
        }
    }
}

impl DensityOptions {
    pub fn with_method(method: Method) -> Self {
        DensityOptions {
            method,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
struct Step {
    eliminate: usize,
    consumed: Vec<usize>,
    scope: Vec<usize>,
}

/// A precomputed elimination order for one (rooted) pattern graph; reusable
/// across step functions.
#[derive(Debug, Clone)]
pub struct HomPlan {
    n: usize,
    edges: Vec<(usize, usize)>,
    roots: Vec<usize>,
    /// Non-isolated free vertices followed by roots, the variables enumerated.
    active_vertices: usize,
    steps: Vec<Step>,
    /// Scopes of every factor ever created (edges first, then step outputs).
    scopes: Vec<Vec<usize>>,
    final_factors: Vec<usize>,
}

impl HomPlan {
    /// Plan for `t(H, .)`.
    pub fn new(h: &Graph) -> Self {
        Self::build(h, &[])
    }

    /// Plan for the rooted density of `h`.
    pub fn rooted(h: &RootedGraph) -> Self {
        Self::build(h.graph(), h.roots())
    }

    fn build(h: &Graph, roots: &[usize]) -> Self {
        let n = h.vertex_count();
        let is_root = |v: usize| roots.contains(&v);
        let mut nbrs: Vec<Vec<bool>> = vec![vec![false; n]; n];
        for &(u, v) in h.edges() {
            nbrs[u][v] = true;
            nbrs[v][u] = true;
        }
        let mut scopes: Vec<Vec<usize>> = h.edges().iter().map(|&(u, v)| vec![u, v]).collect();
        let mut active: Vec<usize> = (0..scopes.len()).collect();
        let mut pending: Vec<usize> = (0..n).filter(|&v| !is_root(v) && h.degree(v) > 0).collect();
        let active_vertices = pending.len() + roots.len();
        let mut steps = Vec::new();
        while !pending.is_empty() {
            // greedy min-fill, ties broken by degree then index
            let mut best = 0;
            let mut best_key = (usize::MAX, usize::MAX, usize::MAX);
            for (i, &v) in pending.iter().enumerate() {
                let ns: Vec<usize> = (0..n).filter(|&w| nbrs[v][w]).collect();
                let mut fill = 0;
                for a in 0..ns.len() {
                    for b in a + 1..ns.len() {
                        if !nbrs[ns[a]][ns[b]] {
                            fill += 1;
                        }
                    }
                }
                let key = (fill, ns.len(), v);
                if key < best_key {
                    best_key = key;
                    best = i;
                }
            }
            let v = pending.remove(best);
            let ns: Vec<usize> = (0..n).filter(|&w| nbrs[v][w]).collect();
            for &a in &ns {
                for &b in &ns {
                    if a != b {
                        nbrs[a][b] = true;
                    }
                }
                nbrs[a][v] = false;
                nbrs[v][a] = false;
            }
            let consumed: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&f| scopes[f].contains(&v))
                .collect();
            active.retain(|f| !consumed.contains(f));
            let mut scope: Vec<usize> = consumed
                .iter()
                .flat_map(|&f| scopes[f].iter().copied())
                .filter(|&w| w != v)
                .collect();
            scope.sort_unstable();
            scope.dedup();
            active.push(scopes.len());
            scopes.push(scope.clone());
            steps.push(Step {
                eliminate: v,
                consumed,
                scope,
            });
        }
        HomPlan {
            n,
            edges: h.edges().to_vec(),
            roots: roots.to_vec(),
            active_vertices,
            steps,
            scopes,
            final_factors: active,
        }
    }

    /// Estimated multiply-adds for variable elimination with `k` blocks.
    pub fn elimination_cost(&self, k: usize) -> u64 {
        let k = k as u64;
        let mut total: u64 = 0;
        for s in &self.steps {
            let size = saturating_pow(k, s.scope.len() + 1);
            total = total.saturating_add(size.saturating_mul(s.consumed.len() as u64 + 1));
        }
        let fin = saturating_pow(k, self.roots.len());
        total.saturating_add(fin.saturating_mul(self.final_factors.len() as u64 + 1))
    }

    /// Estimated multiply-adds for full enumeration with `k` blocks.
    pub fn enumeration_cost(&self, k: usize) -> u64 {
        saturating_pow(k as u64, self.active_vertices)
            .saturating_mul((self.active_vertices + self.edges.len()) as u64 + 1)
    }

    fn choose(&self, k: usize, opts: &DensityOptions) -> Result<Method> {
        let dp = self.elimination_cost(k);
        let en = self.enumeration_cost(k);
        let (method, cost) = match opts.method {
            Method::Auto if dp <= en => (Method::Eliminate, dp),
            Method::Auto => (Method::Enumerate, en),
            Method::Eliminate => (Method::Eliminate, dp),
            Method::Enumerate => (Method::Enumerate, en),
        };
        if cost > opts.budget {
            return Err(Error::budget(format!(
                "estimated {cost} operations for a {}-vertex pattern with {k} blocks exceeds the budget of {}; \
                 use fewer blocks, a smaller pattern, or raise the budget",
                self.n, opts.budget
            )));
        }
        Ok(method)
    }

    /// `t(H, W)` for an unrooted plan.
    pub fn density(&self, w: &StepFunction, opts: &DensityOptions) -> Result<f64> {
        if !self.roots.is_empty() {
            return Err(Error::param("plan is rooted; use rooted_values"));
        }
        Ok(self.rooted_values(w, opts)?[0])
    }

    /// Tensor of rooted densities indexed by root blocks (first root most
    /// significant). Unrooted plans return a single entry.
    pub fn rooted_values(&self, w: &StepFunction, opts: &DensityOptions) -> Result<Vec<f64>> {
        let k = w.blocks();
        match self.choose(k, opts)? {
            Method::Enumerate => Ok(self.enumerate(w)),
            _ => Ok(self.eliminate(w)),
        }
    }

    fn eliminate(&self, w: &StepFunction) -> Vec<f64> {
        let k = w.blocks();
        let mu = w.measures();
        let mut tables: Vec<Option<Vec<f64>>> = vec![None; self.scopes.len()];
        let m = self.edges.len();
        for t in tables.iter_mut().take(m) {
            *t = Some(w.values().to_vec());
        }
        for (si, step) in self.steps.iter().enumerate() {
            let s = step.scope.len();
            // positions of each consumed factor's variables within scope ++ [v]
            let layouts: Vec<Vec<usize>> = step
                .consumed
                .iter()
                .map(|&f| {
                    self.scopes[f]
                        .iter()
                        .map(|&x| {
                            if x == step.eliminate {
                                s
                            } else {
                                step.scope.binary_search(&x).unwrap()
                            }
                        })
                        .collect()
                })
                .collect();
            let inputs: Vec<&[f64]> = step
                .consumed
                .iter()
                .map(|&f| tables[f].as_deref().unwrap())
                .collect();
            let size = k.pow(s as u32);
            let entry = |o: usize| -> f64 {
                let mut digits = vec![0usize; s + 1];
                let mut rem = o;
                for d in (0..s).rev() {
                    digits[d] = rem % k;
                    rem /= k;
                }
                let mut acc = KahanSum::new();
                for b in 0..k {
                    digits[s] = b;
                    let mut prod = mu[b];
                    for (t, lay) in inputs.iter().zip(&layouts) {
                        let mut idx = 0;
                        for &p in lay {
                            idx = idx * k + digits[p];
                        }
                        prod *= t[idx];
                    }
                    acc.add(prod);
                }
                acc.value()
            };
            let table: Vec<f64> = if size >= 2 * ELIM_CHUNK {
                let chunks = size.div_ceil(ELIM_CHUNK);
                map_indexed(chunks, |c| {
                    let lo = c * ELIM_CHUNK;
                    let hi = (lo + ELIM_CHUNK).min(size);
                    (lo..hi).map(entry).collect::<Vec<f64>>()
                })
                .into_iter()
                .flatten()
                .collect()
            } else {
                (0..size).map(entry).collect()
            };
            tables[m + si] = Some(table);
            for &f in &step.consumed {
                tables[f] = None;
            }
        }
        let r = self.roots.len();
        let size = k.pow(r as u32);
        let layouts: Vec<Vec<usize>> = self
            .final_factors
            .iter()
            .map(|&f| {
                self.scopes[f]
                    .iter()
                    .map(|x| self.roots.iter().position(|y| y == x).unwrap())
                    .collect()
            })
            .collect();
        (0..size)
            .map(|o| {
                let mut digits = vec![0usize; r];
                let mut rem = o;
                for d in (0..r).rev() {
                    digits[d] = rem % k;
                    rem /= k;
                }
                let mut prod = 1.0;
                for (&f, lay) in self.final_factors.iter().zip(&layouts) {
                    let t = tables[f].as_deref().unwrap();
                    let mut idx = 0;
                    for &p in lay {
                        idx = idx * k + digits[p];
                    }
                    prod *= t[idx];
                }
                prod
            })
            .collect()
    }

    fn enumerate(&self, w: &StepFunction) -> Vec<f64> {
        let k = w.blocks();
        let mu = w.measures();
        let r = self.roots.len();
        // variables: roots first, then non-isolated free vertices
        let mut order: Vec<usize> = self.roots.clone();
        let touched: Vec<bool> = {
            let mut t = vec![false; self.n];
            for &(u, v) in &self.edges {
                t[u] = true;
                t[v] = true;
            }
            t
        };
        order.extend((0..self.n).filter(|&v| !self.roots.contains(&v) && touched[v]));
        let nv = order.len();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
        let free = nv - r;
        let free_size = k.pow(free as u32);
        let total = k.pow(nv as u32);
        let chunks = total.div_ceil(ENUM_CHUNK);
        let partials: Vec<Vec<(usize, KahanSum)>> = map_indexed(chunks, |c| {
            let lo = c * ENUM_CHUNK;
            let hi = (lo + ENUM_CHUNK).min(total);
            let mut digits = vec![0usize; nv];
            let mut rem = lo;
            for d in (0..nv).rev() {
                digits[d] = rem % k;
                rem /= k;
            }
            let mut out: Vec<(usize, KahanSum)> = Vec::new();
            for i in lo..hi {
                let root_idx = i / free_size;
                let mut prod = 1.0;
                for &d in &digits[r..] {
                    prod *= mu[d];
                }
                for &(a, b) in &edges {
                    prod *= w.value(digits[a], digits[b]);
                }
                match out.last_mut() {
                    Some((ri, acc)) if *ri == root_idx => acc.add(prod),
                    _ => {
                        let mut acc = KahanSum::new();
                        acc.add(prod);
                        out.push((root_idx, acc));
                    }
                }
                for d in (0..nv).rev() {
                    digits[d] += 1;
                    if digits[d] < k {
                        break;
                    }
                    digits[d] = 0;
                }
            }
            out
        });
        let mut result = vec![KahanSum::new(); k.pow(r as u32)];
        for chunk in partials {
            for (ri, acc) in chunk {
                result[ri].add(acc.value());
            }
        }
        result.iter().map(|a| a.value()).collect()
    }
}

/// `t(H, W)` with default options.
pub fn hom_density(h: &Graph, w: &StepFunction) -> Result<f64> {
    hom_density_with(h, w, &DensityOptions::default())
}

pub fn hom_density_with(h: &Graph, w: &StepFunction, opts: &DensityOptions) -> Result<f64> {
    HomPlan::new(h).density(w, opts)
}

/// Rooted density `t_{x_1..x_r}(H, W)` as a function of the root blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedDensity {
    blocks: usize,
    roots: usize,
    values: Vec<f64>,
}

impl RootedDensity {
    pub fn root_count(&self) -> usize {
        self.roots
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Row-major tensor, first root most significant.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, root_blocks: &[usize]) -> f64 {
        let idx = root_blocks.iter().fold(0, |acc, &b| acc * self.blocks + b);
        self.values[idx]
    }

    /// Integrates out the roots, giving `t(H, W)`.
    pub fn contract(&self, measures: &[f64]) -> f64 {
        let k = self.blocks;
        let mut acc = KahanSum::new();
        for (i, &x) in self.values.iter().enumerate() {
            let mut rem = i;
            let mut weight = 1.0;
            for _ in 0..self.roots {
                weight *= measures[rem % k];
                rem /= k;
            }
            acc.add(weight * x);
        }
        acc.value()
    }

    /// The single-root density as a block function.
    pub fn to_block_function(&self) -> Result<BlockFunction> {
        if self.roots != 1 {
            return Err(Error::param("only single-root densities are block functions"));
        }
        Ok(BlockFunction::new(self.values.clone()))
    }
}

pub fn rooted_density(h: &RootedGraph, w: &StepFunction) -> Result<RootedDensity> {
    rooted_density_with(h, w, &DensityOptions::default())
}

pub fn rooted_density_with(
    h: &RootedGraph,
    w: &StepFunction,
    opts: &DensityOptions,
) -> Result<RootedDensity> {
    let values = HomPlan::rooted(h).rooted_values(w, opts)?;
    Ok(RootedDensity {
        blocks: w.blocks(),
        roots: h.roots().len(),
        values,
    })
}

/// The step graphon of a finite graph: uniform blocks, 0/1 adjacency values.
pub fn graph_step_function(g: &Graph) -> Result<StepFunction> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::param("host graph has no vertices"));
    }
    let mut values = vec![0.0; n * n];
    for &(u, v) in g.edges() {
        values[u * n + v] = 1.0;
        values[v * n + u] = 1.0;
    }
    StepFunction::from_flat(Kind::Graphon, &vec![1.0; n], values)
}

/// `t(H, G)`: the probability that a uniformly random map `V(H) -> V(G)` is
/// a homomorphism.
pub fn hom_density_graph(h: &Graph, g: &Graph) -> Result<f64> {
    hom_density(h, &graph_step_function(g)?)
}
