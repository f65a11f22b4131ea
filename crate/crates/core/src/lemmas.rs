//! Numerical checks of the standard density inequalities for graphons and
//! kernels, random instance generators for each, and a seeded suite runner.
//!
//! Conventions: `P_n` is the path on `n` vertices, so `t(P_3, U)` equals
//! `t(K_{1,2}, U)`; kernels are bounded by 1 in absolute value.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::cutnorm::cut_norm_exact;
use crate::error::{Error, Result};
use crate::graph::{pathed_bipartite, Graph};
use crate::graphon::{BlockFunction, Kind, StepFunction};
use crate::hom::{hom_density, hom_density_graph};
use crate::indep::independence_ratio;
use crate::numeric::{kahan_sum, mix_seed};
use crate::par::map_indexed;
use crate::report::{worst_margin, InequalityCheck};

/// The inequalities available to [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// `t(K_{m,n}, W) >= t(K_{m',n}, W)^{m/m'}` for `m >= m'`.
    JensenRows,
    /// `t(K_{m,n}, W) >= t(C_4, W)^{mn/4}` for `m, n >= 2`.
    KmnC4,
    /// `0 <= t(K_{1,2}, U) <= t(C_4, U)^{1/2}`.
    CsP3,
    /// `|t(K_{1,k}, U)| <= t(K_{1,2}, U)` and `|t(K_{2,k}, U)| <= t(C_4, U)`
    /// for `k >= 2`. The sharper `t(K_{1,2}, U)^{k/2}` bound does not hold in
    /// general (power means run the other way) and is not checked.
    StarBounds,
    /// `int prod f_i <= prod ||f_i||_2` when every variable occurs in at most
    /// two of the functions.
    GenCs,
    /// `t(C_{2k}, U) <= t(C_4, U)^{k/2}`.
    EvenCycle,
    /// `t(P_{k+3}, U)^4 <= t(P_3, U)^4 t(C_4, U)^k <= t(C_4, U)^{k+2}`.
    LongPath,
    /// `|t(G, U)| <= t(C_4, U)^{5/4}` for bipartite `G` of minimum degree 2
    /// that is neither a cycle nor complete bipartite.
    Girth4Bip,
    /// `|t(T, U)| <= t(P_3, U) t(C_4, U)^{1/4}` for trees that are not stars.
    TreeNotStar,
    /// `|t(G, U)| <= (t(C_4, U) + t(P_3, U)) t(C_4, U)^{1/8} / 2` for
    /// bipartite `G` with exactly one vertex of degree one.
    OneLeaf,
    /// `t(K_{a|l,b}, G) >= t(K_{1,2}, G)^{(ab+l)/2}` for a finite graph `G`
    /// and positive even `a, b, l`.
    EntropyKab,
    /// `t(K_{a|l,b}, W) >= p^{ab+l} (1 + 1e-9 eps^16)^{ab/4 + l/4}` with
    /// `eps = ||W - p||`, for positive even `a, b, l` with `l <= ab/4`.
    KabQuant,
}

impl LemmaId {
    pub const ALL: [LemmaId; 12] = [
        LemmaId::JensenRows,
        LemmaId::KmnC4,
        LemmaId::CsP3,
        LemmaId::StarBounds,
        LemmaId::GenCs,
        LemmaId::EvenCycle,
        LemmaId::LongPath,
        LemmaId::Girth4Bip,
        LemmaId::TreeNotStar,
        LemmaId::OneLeaf,
        LemmaId::EntropyKab,
        LemmaId::KabQuant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::JensenRows => "jensen_rows",
            LemmaId::KmnC4 => "kmn_c4",
            LemmaId::CsP3 => "cs_p3",
            LemmaId::StarBounds => "star_bounds",
            LemmaId::GenCs => "gen_cs",
            LemmaId::EvenCycle => "even_cycle",
            LemmaId::LongPath => "long_path",
            LemmaId::Girth4Bip => "girth4_bip",
            LemmaId::TreeNotStar => "tree_not_star",
            LemmaId::OneLeaf => "one_leaf",
            LemmaId::EntropyKab => "entropy_kab",
            LemmaId::KabQuant => "kab_quant",
        }
    }

    pub fn parse(s: &str) -> Result<LemmaId> {
        LemmaId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::param(format!("unknown lemma id {s:?}")))
    }

    /// Parses `all` or a comma-separated list of ids.
    pub fn parse_set(s: &str) -> Result<Vec<LemmaId>> {
        if s == "all" {
            return Ok(LemmaId::ALL.to_vec());
        }
        s.split(',').map(|t| LemmaId::parse(t.trim())).collect()
    }

    fn index(self) -> u64 {
        LemmaId::ALL.iter().position(|&x| x == self).unwrap() as u64
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A function of some of the variables of an integral, constant on blocks:
/// `values` is indexed row-major by the blocks of `vars` in listed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockTensor {
    pub vars: Vec<usize>,
    pub values: Vec<f64>,
}

/// Inputs for [`verify`]; each lemma reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graphon: Option<StepFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<StepFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Graph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_prime: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// Block measures shared by every variable of `functions`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<BlockTensor>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub checks: Vec<InequalityCheck>,
}

impl LemmaReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst_margin(&self) -> f64 {
        worst_margin(&self.checks)
    }
}

fn need<T: Clone>(id: LemmaId, field: &Option<T>, name: &str) -> Result<T> {
    field
        .clone()
        .ok_or_else(|| Error::hypothesis(id.name(), format!("input field `{name}` is required")))
}

fn kernel_input(id: LemmaId, input: &LemmaInput) -> Result<StepFunction> {
    let u = need(id, &input.kernel, "kernel")?;
    if u.values().iter().any(|x| x.abs() > 1.0) {
        return Err(Error::hypothesis(id.name(), "the kernel must satisfy |U| <= 1"));
    }
    Ok(u)
}

fn graphon_input(id: LemmaId, input: &LemmaInput) -> Result<StepFunction> {
    let w = need(id, &input.graphon, "graphon")?;
    if w.kind() != Kind::Graphon {
        return Err(Error::hypothesis(id.name(), "a graphon with values in [0, 1] is required"));
    }
    Ok(w)
}

fn even_positive(id: LemmaId, name: &str, x: usize) -> Result<()> {
    if x == 0 || x % 2 == 1 {
        return Err(Error::hypothesis(id.name(), format!("{name} = {x} must be a positive even integer")));
    }
    Ok(())
}

fn c4() -> Graph {
    Graph::cycle(4).expect("C4")
}

/// Checks one inequality on a concrete instance. Hypotheses are validated
/// first; a violated hypothesis is an error, not a failed check.
pub fn verify(id: LemmaId, input: &LemmaInput) -> Result<LemmaReport> {
    let checks = match id {
        LemmaId::JensenRows => {
            let w = graphon_input(id, input)?;
            let m = need(id, &input.m, "m")?;
            let mp = need(id, &input.m_prime, "m_prime")?;
            let n = need(id, &input.n, "n")?;
            if mp == 0 || n == 0 || m < mp {
                return Err(Error::hypothesis(id.name(), "need m >= m' >= 1 and n >= 1"));
            }
            let big = hom_density(&Graph::complete_bipartite(m, n), &w)?;
            let small = hom_density(&Graph::complete_bipartite(mp, n), &w)?;
            vec![InequalityCheck::le("jensen", small.powf(m as f64 / mp as f64), big)]
        }
        LemmaId::KmnC4 => {
            let w = graphon_input(id, input)?;
            let m = need(id, &input.m, "m")?;
            let n = need(id, &input.n, "n")?;
            if m < 2 || n < 2 {
                return Err(Error::hypothesis(id.name(), "need m, n >= 2"));
            }
            let t = hom_density(&Graph::complete_bipartite(m, n), &w)?;
            let c = hom_density(&c4(), &w)?;
            vec![InequalityCheck::le("kmn_above_c4_power", c.powf((m * n) as f64 / 4.0), t)]
        }
        LemmaId::CsP3 => {
            let u = kernel_input(id, input)?;
            let p3 = hom_density(&Graph::path(3), &u)?;
            let c = hom_density(&c4(), &u)?;
            vec![
                InequalityCheck::le("p3_nonnegative", 0.0, p3),
                InequalityCheck::le("p3_below_sqrt_c4", p3, c.max(0.0).sqrt()),
            ]
        }
        LemmaId::StarBounds => {
            let u = kernel_input(id, input)?;
            let k = need(id, &input.k, "k")?;
            if k < 2 {
                return Err(Error::hypothesis(id.name(), "need k >= 2"));
            }
            let p3 = hom_density(&Graph::path(3), &u)?;
            let c = hom_density(&c4(), &u)?;
            let s1 = hom_density(&Graph::complete_bipartite(1, k), &u)?;
            let s2 = hom_density(&Graph::complete_bipartite(2, k), &u)?;
            vec![
                InequalityCheck::le("star1", s1.abs(), p3),
                InequalityCheck::le("star2", s2.abs(), c),
            ]
        }
        LemmaId::GenCs => gen_cs(input)?,
        LemmaId::EvenCycle => {
            let u = kernel_input(id, input)?;
            let k = need(id, &input.k, "k")?;
            if k < 2 {
                return Err(Error::hypothesis(id.name(), "need k >= 2"));
            }
            let t = hom_density(&Graph::cycle(2 * k)?, &u)?;
            let c = hom_density(&c4(), &u)?;
            vec![InequalityCheck::le("even_cycle", t, c.max(0.0).powf(k as f64 / 2.0))]
        }
        LemmaId::LongPath => {
            let u = kernel_input(id, input)?;
            let k = need(id, &input.k, "k")?;
            if k < 1 {
                return Err(Error::hypothesis(id.name(), "need k >= 1"));
            }
            let t = hom_density(&Graph::path(k + 3), &u)?;
            let p3 = hom_density(&Graph::path(3), &u)?;
            let c = hom_density(&c4(), &u)?.max(0.0);
            let middle = p3.powi(4) * c.powi(k as i32);
            vec![
                InequalityCheck::le("path_power", t.powi(4), middle),
                InequalityCheck::le("path_power_c4", middle, c.powi(k as i32 + 2)),
            ]
        }
        LemmaId::Girth4Bip => {
            let u = kernel_input(id, input)?;
            let g = need(id, &input.graph, "graph")?;
            girth4_hypotheses(&g).map_err(|r| Error::hypothesis(id.name(), r))?;
            let t = hom_density(&g, &u)?;
            let c = hom_density(&c4(), &u)?.max(0.0);
            vec![InequalityCheck::le("girth4_bipartite", t.abs(), c.powf(1.25))]
        }
        LemmaId::TreeNotStar => {
            let u = kernel_input(id, input)?;
            let g = need(id, &input.graph, "graph")?;
            if !g.is_tree() {
                return Err(Error::hypothesis(id.name(), "the graph must be a tree"));
            }
            if g.is_star() || g.edge_count() == 0 {
                return Err(Error::hypothesis(id.name(), "the tree must not be a star"));
            }
            let t = hom_density(&g, &u)?;
            let p3 = hom_density(&Graph::path(3), &u)?;
            let c = hom_density(&c4(), &u)?.max(0.0);
            vec![InequalityCheck::le("tree", t.abs(), p3 * c.powf(0.25))]
        }
        LemmaId::OneLeaf => {
            let u = kernel_input(id, input)?;
            let g = need(id, &input.graph, "graph")?;
            one_leaf_hypotheses(&g).map_err(|r| Error::hypothesis(id.name(), r))?;
            let t = hom_density(&g, &u)?;
            let p3 = hom_density(&Graph::path(3), &u)?;
            let c = hom_density(&c4(), &u)?.max(0.0);
            vec![InequalityCheck::le("one_leaf", t.abs(), (c + p3) * c.powf(0.125) / 2.0)]
        }
        LemmaId::EntropyKab => {
            let g = need(id, &input.graph, "graph")?;
            let a = need(id, &input.a, "a")?;
            let b = need(id, &input.b, "b")?;
            let ell = need(id, &input.ell, "ell")?;
            even_positive(id, "a", a)?;
            even_positive(id, "b", b)?;
            even_positive(id, "l", ell)?;
            if g.vertex_count() == 0 {
                return Err(Error::hypothesis(id.name(), "the host graph must have a vertex"));
            }
            let target = pathed_bipartite(a, ell, b)?.into_graph();
            let t = hom_density_graph(&target, &g)?;
            let cherry = hom_density_graph(&Graph::path(3), &g)?;
            vec![InequalityCheck::le(
                "entropy",
                cherry.powf((a * b + ell) as f64 / 2.0),
                t,
            )]
        }
        LemmaId::KabQuant => {
            let w = graphon_input(id, input)?;
            let a = need(id, &input.a, "a")?;
            let b = need(id, &input.b, "b")?;
            let ell = need(id, &input.ell, "ell")?;
            even_positive(id, "a", a)?;
            even_positive(id, "b", b)?;
            even_positive(id, "l", ell)?;
            if 4 * ell > a * b {
                return Err(Error::hypothesis(id.name(), format!("need l <= ab/4, got l = {ell}")));
            }
            let (p, u) = w.deviation()?;
            let eps = cut_norm_exact(&u)?.value;
            let target = pathed_bipartite(a, ell, b)?.into_graph();
            let t = hom_density(&target, &w)?;
            let gain = (1.0 + 1e-9 * eps.powi(16)).powf((a * b + ell) as f64 / 4.0);
            vec![InequalityCheck::le(
                "kab_quantitative",
                p.powi((a * b + ell) as i32) * gain,
                t,
            )]
        }
    };
    Ok(LemmaReport { lemma: id, checks })
}

fn girth4_hypotheses(g: &Graph) -> std::result::Result<(), String> {
    if !g.is_bipartite() {
        return Err("the graph must be bipartite".into());
    }
    if g.vertex_count() == 0 || g.min_degree() < 2 {
        return Err("the graph must have minimum degree at least 2".into());
    }
    if g.is_cycle() {
        return Err("the graph must not be a single cycle".into());
    }
    if g.is_complete_bipartite() {
        return Err("the graph must not be complete bipartite".into());
    }
    Ok(())
}

fn one_leaf_hypotheses(g: &Graph) -> std::result::Result<(), String> {
    if !g.is_bipartite() {
        return Err("the graph must be bipartite".into());
    }
    let leaves = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).count();
    if leaves != 1 {
        return Err(format!("the graph must have exactly one vertex of degree one, found {leaves}"));
    }
    Ok(())
}

fn gen_cs(input: &LemmaInput) -> Result<Vec<InequalityCheck>> {
    let id = LemmaId::GenCs;
    let measures = need(id, &input.measures, "measures")?;
    let nv = need(id, &input.variables, "variables")?;
    let functions = need(id, &input.functions, "functions")?;
    if measures.is_empty() || measures.iter().any(|m| !m.is_finite() || *m <= 0.0) {
        return Err(Error::hypothesis(id.name(), "block measures must be positive"));
    }
    let total: f64 = measures.iter().sum();
    let mu: Vec<f64> = measures.iter().map(|m| m / total).collect();
    let k = mu.len();
    let mut uses = vec![0usize; nv];
    for (i, f) in functions.iter().enumerate() {
        let mut vars = f.vars.clone();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() != f.vars.len() || f.vars.iter().any(|&v| v >= nv) {
            return Err(Error::hypothesis(id.name(), format!("function {i} has invalid variables")));
        }
        if f.values.len() != k.pow(f.vars.len() as u32) || f.values.iter().any(|x| !x.is_finite()) {
            return Err(Error::hypothesis(id.name(), format!("function {i} has a malformed value table")));
        }
        for &v in &f.vars {
            uses[v] += 1;
        }
    }
    if let Some(v) = uses.iter().position(|&c| c > 2) {
        return Err(Error::hypothesis(
            id.name(),
            format!("variable {v} occurs in {} functions; at most two are allowed", uses[v]),
        ));
    }
    let total_points = k.checked_pow(nv as u32).filter(|&n| n <= 50_000_000).ok_or_else(|| {
        Error::budget("the generalised Cauchy-Schwarz check enumerates k^variables points")
    })?;
    let index = |f: &BlockTensor, digits: &[usize]| f.vars.iter().fold(0, |acc, &v| acc * k + digits[v]);
    let mut digits = vec![0usize; nv];
    let lhs = kahan_sum((0..total_points).map(|p| {
        let mut rem = p;
        for d in digits.iter_mut().rev() {
            *d = rem % k;
            rem /= k;
        }
        let weight: f64 = digits.iter().map(|&d| mu[d]).product();
        weight * functions.iter().map(|f| f.values[index(f, &digits)]).product::<f64>()
    }));
    let rhs: f64 = functions
        .iter()
        .map(|f| {
            let r = f.vars.len();
            kahan_sum((0..f.values.len()).map(|i| {
                let mut rem = i;
                let mut w = 1.0;
                for _ in 0..r {
                    w *= mu[rem % k];
                    rem /= k;
                }
                w * f.values[i] * f.values[i]
            }))
            .sqrt()
        })
        .product();
    Ok(vec![InequalityCheck::le("integral_below_norms", lhs, rhs)])
}

/// Random graphon with `1..=max_blocks` blocks, Dirichlet(1) measures and
/// independent uniform values.
pub fn random_graphon<R: Rng>(rng: &mut R, max_blocks: usize) -> StepFunction {
    let k = rng.random_range(1..=max_blocks.max(1));
    random_graphon_with_blocks(rng, k)
}

pub fn random_graphon_with_blocks<R: Rng>(rng: &mut R, k: usize) -> StepFunction {
    let measures = dirichlet(rng, k);
    let mut values = vec![0.0; k * k];
    for a in 0..k {
        for b in a..k {
            let x: f64 = rng.random();
            values[a * k + b] = x;
            values[b * k + a] = x;
        }
    }
    StepFunction::from_flat(Kind::Graphon, &measures, values).expect("valid random graphon")
}

/// Uniform point of the simplex (normalised exponential samples).
pub fn dirichlet<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1).max(1e-9)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// `W - p` for a random graphon `W`.
pub fn random_kernel<R: Rng>(rng: &mut R, max_blocks: usize) -> StepFunction {
    random_graphon(rng, max_blocks).deviation().expect("graphon").1
}

fn random_bipartite_min2<R: Rng>(rng: &mut R) -> Graph {
    for _ in 0..1000 {
        let a = rng.random_range(2..=4);
        let b = rng.random_range(2..=4);
        let p = rng.random_range(0.4..0.9);
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(a + b, &edges).expect("bipartite");
        if g.min_degree() >= 2 {
            return g;
        }
    }
    Graph::complete_bipartite(2, 3)
}

fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    // decode a random Pruefer sequence
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, &edges).expect("tree")
}

/// A random instance satisfying the hypotheses of `id`.
pub fn random_instance<R: Rng>(id: LemmaId, rng: &mut R) -> LemmaInput {
    let mut input = LemmaInput::default();
    match id {
        LemmaId::JensenRows => {
            input.graphon = Some(random_graphon(rng, 4));
            let mp = rng.random_range(1..=3);
            input.m_prime = Some(mp);
            input.m = Some(rng.random_range(mp..=4));
            input.n = Some(rng.random_range(1..=3));
        }
        LemmaId::KmnC4 => {
            input.graphon = Some(random_graphon(rng, 4));
            input.m = Some(rng.random_range(2..=4));
            input.n = Some(rng.random_range(2..=4));
        }
        LemmaId::CsP3 => input.kernel = Some(random_kernel(rng, 5)),
        LemmaId::StarBounds => {
            input.kernel = Some(random_kernel(rng, 4));
            input.k = Some(rng.random_range(2..=6));
        }
        LemmaId::GenCs => {
            let nv: usize = rng.random_range(1..=4);
            let k: usize = rng.random_range(1..=3);
            let nf = rng.random_range(1..=4);
            let mut uses = vec![0usize; nv];
            let mut functions = Vec::new();
            for _ in 0..nf {
                let arity = rng.random_range(1..=2usize);
                let mut vars = Vec::new();
                for _ in 0..arity {
                    let free: Vec<usize> = (0..nv).filter(|&v| uses[v] < 2 && !vars.contains(&v)).collect();
                    if free.is_empty() {
                        break;
                    }
                    let v = free[rng.random_range(0..free.len())];
                    uses[v] += 1;
                    vars.push(v);
                }
                let values = (0..k.pow(vars.len() as u32)).map(|_| rng.random_range(-1.0..=1.0)).collect();
                functions.push(BlockTensor { vars, values });
            }
            input.measures = Some(dirichlet(rng, k));
            input.variables = Some(nv);
            input.functions = Some(functions);
        }
        LemmaId::EvenCycle => {
            input.kernel = Some(random_kernel(rng, 4));
            input.k = Some(rng.random_range(2..=5));
        }
        LemmaId::LongPath => {
            input.kernel = Some(random_kernel(rng, 4));
            input.k = Some(rng.random_range(1..=6));
        }
        LemmaId::Girth4Bip => {
            input.kernel = Some(random_kernel(rng, 4));
            let mut g = random_bipartite_min2(rng);
            for _ in 0..1000 {
                if girth4_hypotheses(&g).is_ok() {
                    break;
                }
                g = random_bipartite_min2(rng);
            }
            if girth4_hypotheses(&g).is_err() {
                // two 4-cycles sharing a vertex
                g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (4, 5), (5, 6), (0, 6)]).unwrap();
            }
            input.graph = Some(g);
        }
        LemmaId::TreeNotStar => {
            input.kernel = Some(random_kernel(rng, 4));
            let mut g = Graph::star(3);
            while g.is_star() {
                let n = rng.random_range(4..=9);
                g = random_tree(rng, n);
            }
            input.graph = Some(g);
        }
        LemmaId::OneLeaf => {
            input.kernel = Some(random_kernel(rng, 4));
            let base = random_bipartite_min2(rng);
            let n = base.vertex_count();
            let anchor = rng.random_range(0..n);
            let mut edges = base.edges().to_vec();
            edges.push((anchor, n));
            input.graph = Some(Graph::new(n + 1, &edges).unwrap());
        }
        LemmaId::EntropyKab => {
            let n = rng.random_range(2..=10);
            let p = rng.random_range(0.2..0.95);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            input.graph = Some(Graph::new(n, &edges).unwrap());
            input.a = Some(if rng.random() { 2 } else { 4 });
            input.b = Some(if rng.random() { 2 } else { 4 });
            input.ell = Some(if rng.random() { 2 } else { 4 });
        }
        LemmaId::KabQuant => {
            input.graphon = Some(random_graphon(rng, 4));
            let (a, b) = match rng.random_range(0..4) {
                0 => (2, 4),
                1 => (4, 2),
                2 => (4, 4),
                _ => (2, 6),
            };
            let max_ell = a * b / 4;
            let ell = 2 * rng.random_range(1..=max_ell / 2);
            input.a = Some(a);
            input.b = Some(b);
            input.ell = Some(ell);
        }
    }
    input
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub lemma: LemmaId,
    pub trials: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub seed: u64,
}

/// Sub-seed for one trial of one lemma.
pub fn trial_seed(seed: u64, id: LemmaId, trial: usize) -> u64 {
    mix_seed(mix_seed(seed, id.index()), trial as u64)
}

/// Runs `trials` random instances of each lemma. Trials run in parallel and
/// are reduced in trial order, so the summary depends only on the seed.
pub fn random_suite(seed: u64, trials: usize, ids: &[LemmaId]) -> Result<Vec<SuiteSummary>> {
    if trials == 0 {
        return Err(Error::param("the suite needs at least one trial"));
    }
    ids.iter()
        .map(|&id| {
            let outcomes: Vec<Result<LemmaReport>> = map_indexed(trials, |t| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, id, t));
                verify(id, &random_instance(id, &mut rng))
            });
            let mut failures = 0;
            let mut worst = f64::INFINITY;
            for o in outcomes {
                let r = o?;
                if !r.pass() {
                    failures += 1;
                }
                worst = worst.min(r.worst_margin());
            }
            Ok(SuiteSummary {
                lemma: id,
                trials,
                failures,
                worst_margin: worst,
                seed,
            })
        })
        .collect()
}

/// The constants `omega_r`, `alpha_r` of the dichotomy "dense in `K_r` or
/// containing a large `delta`-sparse part".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaAlphaConstants {
    pub delta: f64,
    pub rows: Vec<OmegaAlphaRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaAlphaRow {
    pub r: usize,
    pub omega: f64,
    pub alpha: f64,
}

/// `omega_1 = alpha_1 = 1`, `omega_r = (1 - delta) delta^{r-1} omega_{r-1}`,
/// `alpha_r = delta alpha_{r-1}`.
pub fn omega_alpha(delta: f64, r_max: usize) -> Result<OmegaAlphaConstants> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    if r_max == 0 {
        return Err(Error::param("r_max must be at least 1"));
    }
    let mut rows = vec![OmegaAlphaRow {
        r: 1,
        omega: 1.0,
        alpha: 1.0,
    }];
    for r in 2..=r_max {
        let prev = rows[r - 2];
        rows.push(OmegaAlphaRow {
            r,
            omega: (1.0 - delta) * delta.powi(r as i32 - 1) * prev.omega,
            alpha: delta * prev.alpha,
        });
    }
    Ok(OmegaAlphaConstants { delta, rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaAlphaReport {
    pub delta: f64,
    pub density: f64,
    pub omega: f64,
    pub alpha_ratio: f64,
    pub alpha: f64,
    pub restriction: BlockFunction,
    pub dense_side: bool,
    pub sparse_side: bool,
    pub resolution: usize,
    pub pass: bool,
}

/// Grid resolutions tried by [`omega_alpha_check`], coarse first.
const OMEGA_ALPHA_RESOLUTIONS: [usize; 2] = [24, 96];

/// Checks that `t(H, W) >= omega_{|H|}` or `alpha_delta(W) >= alpha_{|H|}`.
pub fn omega_alpha_check(w: &StepFunction, h: &Graph, delta: f64) -> Result<OmegaAlphaReport> {
    let r = h.vertex_count().max(1);
    let table = omega_alpha(delta, r)?;
    let row = table.rows[r - 1];
    let t = hom_density(h, w)?;
    let dense_side = t >= row.omega;
    let mut last = None;
    for &res in &OMEGA_ALPHA_RESOLUTIONS {
        let ratio = independence_ratio(w, delta, res)?;
        let sparse_side = ratio.alpha >= row.alpha;
        let report = OmegaAlphaReport {
            delta,
            density: t,
            omega: row.omega,
            alpha_ratio: ratio.alpha,
            alpha: row.alpha,
            restriction: ratio.h,
            dense_side,
            sparse_side,
            resolution: ratio.resolution,
            pass: dense_side || sparse_side,
        };
        if report.pass {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("at least one resolution"))
}
