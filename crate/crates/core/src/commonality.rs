//! The commonality functionals `t(H, W) + t(H, 1 - W)` and
//! `t(H, W_1) + ... + t(H, W_k)`, their exact gradients in the block values,
//! a projected-gradient search for colourings below the random threshold,
//! and an empirical probe of the target-graph conclusion inequality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cutnorm::{cut_norm_exact, MAX_CUT_BLOCKS};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph};
use crate::graphon::{validate_coloring, Kind, StepFunction};
use crate::hom::{DensityOptions, HomPlan, Method};
use crate::indep::independence_ratio;
use crate::lemmas::dirichlet;
use crate::numeric::{kahan_sum, mix_seed};
use crate::par::map_indexed;
use crate::report::InequalityCheck;
use crate::witness::{build_target, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommonalityValue {
    pub value: f64,
    pub threshold: f64,
    /// `value - threshold`; negative means the colouring beats the random one.
    pub margin: f64,
}

/// `k^{1 - |E(H)|}`.
pub fn threshold(h: &Graph, colours: usize) -> f64 {
    (colours as f64).powi(1 - h.edge_count() as i32)
}

pub fn commonality_value(h: &Graph, w: &StepFunction) -> Result<CommonalityValue> {
    commonality_value_with(h, w, &DensityOptions::default())
}

pub fn commonality_value_with(h: &Graph, w: &StepFunction, opts: &DensityOptions) -> Result<CommonalityValue> {
    if w.kind() != Kind::Graphon {
        return Err(Error::param("commonality is defined for graphons"));
    }
    let plan = HomPlan::new(h);
    let value = plan.density(w, opts)? + plan.density(&w.complement()?, opts)?;
    let threshold = threshold(h, 2);
    Ok(CommonalityValue {
        value,
        threshold,
        margin: value - threshold,
    })
}

pub fn k_common_value(h: &Graph, colours: &[StepFunction]) -> Result<CommonalityValue> {
    k_common_value_with(h, colours, &DensityOptions::default())
}

pub fn k_common_value_with(h: &Graph, colours: &[StepFunction], opts: &DensityOptions) -> Result<CommonalityValue> {
    validate_coloring(colours)?;
    let plan = HomPlan::new(h);
    let densities = colours.iter().map(|w| plan.density(w, opts)).collect::<Result<Vec<_>>>()?;
    let value = kahan_sum(densities);
    let threshold = threshold(h, colours.len());
    Ok(CommonalityValue {
        value,
        threshold,
        margin: value - threshold,
    })
}

/// Precomputed plans for `t(H, .)` and its gradient.
#[derive(Debug, Clone)]
pub struct GradientPlan {
    value: HomPlan,
    /// `H - uv` rooted at `(u, v)`, one per edge.
    edges: Vec<HomPlan>,
}

impl GradientPlan {
    pub fn new(h: &Graph) -> Result<Self> {
        let mut edges = Vec::with_capacity(h.edge_count());
        for &(u, v) in h.edges() {
            let rest: Vec<(usize, usize)> = h.edges().iter().copied().filter(|&e| e != (u, v)).collect();
            let minus = Graph::new(h.vertex_count(), &rest)?;
            edges.push(HomPlan::rooted(&RootedGraph::new(minus, vec![u, v])?));
        }
        Ok(GradientPlan {
            value: HomPlan::new(h),
            edges,
        })
    }

    pub fn density(&self, w: &StepFunction, opts: &DensityOptions) -> Result<f64> {
        self.value.density(w, opts)
    }

    /// Partial derivatives of `t(H, W)` in the symmetric block values, as a
    /// row-major `k x k` matrix. Entry `(a, b)` with `a != b` moves both
    /// `W(a, b)` and `W(b, a)`.
    pub fn gradient(&self, w: &StepFunction, opts: &DensityOptions) -> Result<Vec<f64>> {
        let k = w.blocks();
        let mu = w.measures();
        let mut grad = vec![0.0; k * k];
        for plan in &self.edges {
            let r = plan.rooted_values(w, opts)?;
            for a in 0..k {
                grad[a * k + a] += mu[a] * mu[a] * r[a * k + a];
                for b in a + 1..k {
                    let g = mu[a] * mu[b] * (r[a * k + b] + r[b * k + a]);
                    grad[a * k + b] += g;
                    grad[b * k + a] += g;
                }
            }
        }
        Ok(grad)
    }
}

/// Gradient of `t(H, .)` at `w`; see [`GradientPlan::gradient`].
pub fn gradient(h: &Graph, w: &StepFunction) -> Result<Vec<f64>> {
    GradientPlan::new(h)?.gradient(w, &DensityOptions::default())
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|&x| (x - theta).clamp(0.0, 1.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub colours: usize,
    pub blocks: usize,
    pub seed: u64,
    pub restarts: usize,
    pub iters: usize,
    pub step: f64,
    /// Block-measure vectors tried per restart; the first is uniform, the
    /// rest are Dirichlet samples.
    pub measure_samples: usize,
    pub tolerance: f64,
    pub density: DensityOptions,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            colours: 2,
            blocks: 3,
            seed: 0,
            restarts: 20,
            iters: 2000,
            step: 0.05,
            measure_samples: 4,
            tolerance: 1e-9,
            density: DensityOptions::default(),
        }
    }
}

/// Best colouring found by [`search_counterexample`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    pub k: usize,
    pub coloring: Vec<StepFunction>,
    pub target: Graph,
    pub value: f64,
    pub threshold: f64,
    pub margin: f64,
    /// One row-major block matrix per colour.
    pub gradient: Vec<Vec<f64>>,
    pub seed: u64,
    pub restart: usize,
    pub iteration: usize,
    pub step: f64,
    /// True when the step size collapsed before the iteration limit.
    pub converged: bool,
    /// The value recomputed by compensated enumeration.
    pub verified_value: f64,
    pub counterexample_found: bool,
}

struct Run {
    values: Vec<Vec<f64>>,
    measures: Vec<f64>,
    value: f64,
    iteration: usize,
    step: f64,
    converged: bool,
}

fn colouring(measures: &[f64], values: &[Vec<f64>]) -> Result<Vec<StepFunction>> {
    values
        .iter()
        .map(|v| StepFunction::from_flat(Kind::Graphon, measures, v.clone()))
        .collect()
}

fn total(plan: &GradientPlan, cs: &[StepFunction], opts: &DensityOptions) -> Result<f64> {
    Ok(kahan_sum(cs.iter().map(|w| plan.density(w, opts)).collect::<Result<Vec<_>>>()?))
}

fn descend(plan: &GradientPlan, cfg: &SearchConfig, measures: Vec<f64>, mut values: Vec<Vec<f64>>) -> Result<Run> {
    let k = cfg.blocks;
    let c = cfg.colours;
    let mut cs = colouring(&measures, &values)?;
    let mut value = total(plan, &cs, &cfg.density)?;
    let mut step = cfg.step;
    let mut iteration = 0;
    let mut converged = false;
    while iteration < cfg.iters {
        if step < 1e-12 {
            converged = true;
            break;
        }
        iteration += 1;
        let grads = cs.iter().map(|w| plan.gradient(w, &cfg.density)).collect::<Result<Vec<_>>>()?;
        let mut next = values.clone();
        for a in 0..k {
            for b in a..k {
                let scale = measures[a] * measures[b] * if a == b { 1.0 } else { 2.0 };
                let y: Vec<f64> = (0..c)
                    .map(|i| values[i][a * k + b] - step * grads[i][a * k + b] / scale)
                    .collect();
                for (i, x) in project_simplex(&y).into_iter().enumerate() {
                    next[i][a * k + b] = x;
                    next[i][b * k + a] = x;
                }
            }
        }
        let next_cs = colouring(&measures, &next)?;
        let next_value = total(plan, &next_cs, &cfg.density)?;
        if next_value < value {
            values = next;
            cs = next_cs;
            value = next_value;
        } else {
            step *= 0.5;
        }
    }
    Ok(Run {
        values,
        measures,
        value,
        iteration,
        step,
        converged,
    })
}

fn restart(plan: &GradientPlan, cfg: &SearchConfig, index: usize) -> Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, index as u64));
    let k = cfg.blocks;
    let mut best: Option<Run> = None;
    for s in 0..cfg.measure_samples.max(1) {
        let measures = if s == 0 {
            vec![1.0 / k as f64; k]
        } else {
            dirichlet(&mut rng, k)
        };
        let mut values = vec![vec![0.0; k * k]; cfg.colours];
        for a in 0..k {
            for b in a..k {
                let point = dirichlet(&mut rng, cfg.colours);
                for (i, x) in point.into_iter().enumerate() {
                    values[i][a * k + b] = x;
                    values[i][b * k + a] = x;
                }
            }
        }
        let run = descend(plan, cfg, measures, values)?;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one measure sample"))
}

/// Minimises `t(H, W_1) + ... + t(H, W_k)` over `k`-colourings with
/// `blocks` blocks by projected gradient descent. Restarts run in parallel
/// from sub-seeds of `seed` and are reduced in index order, so the result
/// does not depend on the thread count.
pub fn search_counterexample(h: &Graph, cfg: &SearchConfig) -> Result<SearchState> {
    if cfg.colours < 2 {
        return Err(Error::param("the search needs at least two colours"));
    }
    if cfg.blocks == 0 || cfg.restarts == 0 {
        return Err(Error::param("blocks and restarts must be positive"));
    }
    if cfg.step.is_nan() || cfg.step <= 0.0 || cfg.tolerance.is_nan() || cfg.tolerance <= 0.0 {
        return Err(Error::param("step and tolerance must be positive"));
    }
    if h.edge_count() == 0 {
        return Err(Error::param("the target graph has no edges"));
    }
    let plan = GradientPlan::new(h)?;
    // fail on budget before spawning restarts
    let probe = StepFunction::uniform(Kind::Graphon, &vec![vec![0.5; cfg.blocks]; cfg.blocks])?;
    plan.gradient(&probe, &cfg.density)?;

    let runs: Vec<Result<Run>> = map_indexed(cfg.restarts, |r| restart(&plan, cfg, r));
    let mut best: Option<(usize, Run)> = None;
    for (i, run) in runs.into_iter().enumerate() {
        let run = run?;
        if best.as_ref().is_none_or(|(_, b)| run.value < b.value) {
            best = Some((i, run));
        }
    }
    let (index, run) = best.expect("at least one restart");
    let coloring = colouring(&run.measures, &run.values)?;
    let gradient = coloring
        .iter()
        .map(|w| plan.gradient(w, &cfg.density))
        .collect::<Result<Vec<_>>>()?;
    let threshold = threshold(h, cfg.colours);
    let margin = run.value - threshold;
    let enumerate = DensityOptions {
        method: Method::Enumerate,
        ..cfg.density
    };
    let verified_value = match k_common_value_with(h, &coloring, &enumerate) {
        Ok(v) => v.value,
        Err(Error::Budget(_)) => k_common_value_with(h, &coloring, &cfg.density)?.value,
        Err(e) => return Err(e),
    };
    let counterexample_found = margin < -10.0 * cfg.tolerance && verified_value - threshold < -10.0 * cfg.tolerance;
    Ok(SearchState {
        k: cfg.colours,
        coloring,
        target: h.clone(),
        value: run.value,
        threshold,
        margin,
        gradient,
        seed: cfg.seed,
        restart: index,
        iteration: run.iteration,
        step: run.step,
        converged: run.converged,
        verified_value,
        counterexample_found,
    })
}

impl SearchState {
    /// Recomputes the value of the stored colouring from scratch.
    pub fn reverify(&self) -> Result<CommonalityValue> {
        k_common_value_with(&self.target, &self.coloring, &DensityOptions::with_method(Method::Enumerate))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub regime: Regime,
    /// Largest `t(C_4, W) - p^4` counted as close to constant.
    pub gamma0: f64,
    /// Smallest `||W - p||_cut` counted as far from constant.
    pub eps0: f64,
}

impl RegimeParams {
    pub fn new(m: usize, n: usize, ell: usize, regime: Regime) -> Self {
        RegimeParams {
            m,
            n,
            ell,
            regime,
            gamma0: 1e-4,
            eps0: 1e-2,
        }
    }
}

/// Result of [`theorem_regime_check`]. This is an empirical probe: it
/// evaluates the conclusion on one instance and says whether the
/// hypothesis side looked satisfied. It proves nothing.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub label: &'static str,
    pub regime: Regime,
    pub target_vertices: usize,
    pub target_edges: usize,
    pub p: f64,
    /// `p^{|E(target)|} <= t(target, W)`.
    pub conclusion: InequalityCheck,
    /// `t(C_4, W) - p^4`.
    pub gamma: f64,
    /// `||W - p||_cut` when the block count allows exact evaluation.
    pub cut_norm: Option<f64>,
    /// Mass of the largest part of density at most `p / 10`.
    pub sparse_mass: f64,
    pub sparse_part_present: bool,
    /// `None` for the unconstrained regime.
    pub hypothesis_held: Option<bool>,
    pub notes: Vec<String>,
}

const PROBE_LABEL: &str = "empirical probe of the conclusion inequality; not a proof check";

/// Builds `H . K_{m|l,n}` for the regime and evaluates
/// `t(target, W) >= p^{|E(target)|}`, reporting the hypothesis-side
/// quantities alongside.
pub fn theorem_regime_check(h: &RootedGraph, w: &StepFunction, params: &RegimeParams) -> Result<RegimeReport> {
    theorem_regime_check_with(h, w, params, &DensityOptions::default())
}

pub fn theorem_regime_check_with(
    h: &RootedGraph,
    w: &StepFunction,
    params: &RegimeParams,
    opts: &DensityOptions,
) -> Result<RegimeReport> {
    if w.kind() != Kind::Graphon {
        return Err(Error::param("the regime probe takes a graphon"));
    }
    let target = build_target(h, params.m, params.n, params.ell, params.regime)?.into_graph();
    let (p, u) = w.deviation()?;
    let e = target.edge_count();
    let t = HomPlan::new(&target).density(w, opts)?;
    let conclusion = InequalityCheck::le("conclusion", p.powi(e as i32), t);
    let c4 = HomPlan::new(&Graph::cycle(4)?).density(w, opts)?;
    let gamma = c4 - p.powi(4);
    let cut_norm = if u.blocks() <= MAX_CUT_BLOCKS {
        Some(cut_norm_exact(&u)?.value)
    } else {
        None
    };
    let sparse_mass = independence_ratio(w, p / 10.0, 16)?.alpha;
    let sparse_part_present = sparse_mass > 0.0;
    let mut notes = Vec::new();
    if sparse_part_present {
        notes.push("sparse part present, hypothesis void".to_string());
    }
    let close = gamma <= params.gamma0;
    let far = cut_norm.is_some_and(|c| c >= params.eps0);
    let hypothesis_held = match params.regime {
        Regime::Local | Regime::KCommon => Some(close),
        Regime::NonLocal => Some(far && !sparse_part_present),
        Regime::Unconstrained => None,
    };
    if cut_norm.is_none() {
        notes.push(format!("cut norm skipped: more than {MAX_CUT_BLOCKS} blocks"));
    }
    Ok(RegimeReport {
        label: PROBE_LABEL,
        regime: params.regime,
        target_vertices: target.vertex_count(),
        target_edges: e,
        p,
        conclusion,
        gamma,
        cut_norm,
        sparse_mass,
        sparse_part_present,
        hypothesis_held,
        notes,
    })
}

/// Random `k`-colouring on `blocks` blocks with Dirichlet measures and
/// Dirichlet colour splits per block pair.
pub fn random_colouring<R: Rng>(rng: &mut R, colours: usize, blocks: usize) -> Vec<StepFunction> {
    let measures = dirichlet(rng, blocks);
    let mut values = vec![vec![0.0; blocks * blocks]; colours];
    for a in 0..blocks {
        for b in a..blocks {
            for (i, x) in dirichlet(rng, colours).into_iter().enumerate() {
                values[i][a * blocks + b] = x;
                values[i][b * blocks + a] = x;
            }
        }
    }
    colouring(&measures, &values).expect("valid colouring")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pathed_bipartite;

    #[test]
    fn goodman_equality() {
        let half = StepFunction::constant(0.5).unwrap();
        let v = commonality_value(&Graph::complete(3), &half).unwrap();
        assert!((v.value - 0.25).abs() < 1e-15);
        assert!(v.margin.abs() < 1e-15);
        let v = commonality_value(&Graph::complete(4), &half).unwrap();
        assert!((v.value - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn edge_gradient_is_measure_product() {
        let w = StepFunction::graphon(&[0.2, 0.8], &[vec![0.1, 0.5], vec![0.5, 0.9]]).unwrap();
        let g = gradient(&Graph::complete(2), &w).unwrap();
        assert!((g[0] - 0.04).abs() < 1e-15);
        assert!((g[1] - 2.0 * 0.16).abs() < 1e-15);
        assert!((g[3] - 0.64).abs() < 1e-15);
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5]);
        assert_eq!(p, vec![0.5, 0.5]);
        let p = project_simplex(&[2.0, 0.0, -1.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = project_simplex(&[0.6, 0.6]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn k_common_edge_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let cs = random_colouring(&mut rng, 3, 3);
            let v = k_common_value(&Graph::complete(2), &cs).unwrap();
            assert!(v.margin >= -1e-15);
        }
    }

    #[test]
    fn paw_is_not_common() {
        let paw = Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let cfg = SearchConfig {
            blocks: 2,
            restarts: 4,
            iters: 300,
            seed: 1,
            ..Default::default()
        };
        let s = search_counterexample(&paw, &cfg).unwrap();
        assert!(s.counterexample_found, "margin {}", s.margin);
        let json = serde_json::to_string(&s).unwrap();
        let back: SearchState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn constant_graphon_meets_the_conclusion() {
        let h = RootedGraph::new(Graph::complete(2), vec![0]).unwrap();
        let w = StepFunction::constant(0.6).unwrap();
        let r = theorem_regime_check(&h, &w, &RegimeParams::new(4, 2, 2, Regime::NonLocal)).unwrap();
        assert!(r.conclusion.pass);
        assert!(r.conclusion.margin.abs() < 1e-14);
        assert!(!r.sparse_part_present);
        assert_eq!(r.target_edges, 1 + 8 + 2);
        assert!(pathed_bipartite(4, 2, 2).is_ok());
    }

    #[test]
    fn zero_block_flags_sparse_part() {
        let h = RootedGraph::new(Graph::complete(2), vec![0]).unwrap();
        let w = StepFunction::graphon(&[0.5, 0.5], &[vec![0.0, 0.9], vec![0.9, 0.8]]).unwrap();
        let r = theorem_regime_check(&h, &w, &RegimeParams::new(4, 2, 2, Regime::NonLocal)).unwrap();
        assert!(r.sparse_part_present);
        assert_eq!(r.hypothesis_held, Some(false));
    }
}
