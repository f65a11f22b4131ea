//! The rooted witness graph built around a host graph `G`, the long-path
//! extension `H_l = H . P_l` used in the subset expansion, the classification
//! of edge subsets of `H_l` into eight groups, and the target graphs
//! `H . K_{m|l,n}` together with their parameter regimes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pathed_bipartite, rooted_sum, Graph, RootedGraph};

/// Edges on the long path attached at the second attachment vertex.
pub const LONG_PATH_EDGES: usize = 12;
/// Vertices added to `G` by [`build_witness`].
pub const ADDED_VERTICES: usize = 18;
/// Edges added to `G` by [`build_witness`].
pub const ADDED_EDGES: usize = 19;
/// Smallest path length for which the groups are defined (`v_8` must exist).
pub const MIN_PATH_LENGTH: usize = 9;

/// `G` with a 3-edge path hanging off `attach_a` (its far end is the root), a
/// 12-edge path hanging off `attach_b`, and a 4-cycle glued to the far end of
/// the 12-edge path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    rooted: RootedGraph,
    base_vertices: usize,
    attach: (usize, usize),
    square: [(usize, usize); 4],
}

/// Builds the witness on `g`. With `None` the two lowest-index vertices are
/// used as attachment points.
pub fn build_witness(g: &Graph, attach: Option<(usize, usize)>) -> Result<Witness> {
    let n = g.vertex_count();
    let (a, b) = match attach {
        Some(p) => p,
        None if n >= 2 => (0, 1),
        None => return Err(Error::param("the host graph needs at least two vertices")),
    };
    if a >= n || b >= n {
        return Err(Error::param(format!("attachment vertices must lie in 0..{n}")));
    }
    if a == b {
        return Err(Error::param("the two attachment vertices must differ"));
    }
    let mut edges = g.edges().to_vec();
    // v_{-2} = n, v_{-1} = n + 1, root v_0 = n + 2
    edges.extend([(a, n), (n, n + 1), (n + 1, n + 2)]);
    let mut prev = b;
    for i in 0..LONG_PATH_EDGES {
        let v = n + 3 + i;
        edges.push((prev, v));
        prev = v;
    }
    let end = prev;
    let (q1, q2, q3) = (end + 1, end + 2, end + 3);
    let square = [(end, q1), (q1, q2), (q2, q3), (end, q3)];
    edges.extend(square);
    let graph = Graph::new(n + ADDED_VERTICES, &edges)?;
    let rooted = RootedGraph::new(graph, vec![n + 2])?;
    Ok(Witness {
        rooted,
        base_vertices: n,
        attach: (a, b),
        square,
    })
}

impl Witness {
    pub fn rooted(&self) -> &RootedGraph {
        &self.rooted
    }

    pub fn into_rooted(self) -> RootedGraph {
        self.rooted
    }

    pub fn base_vertices(&self) -> usize {
        self.base_vertices
    }

    pub fn attachments(&self) -> (usize, usize) {
        self.attach
    }

    pub fn root(&self) -> usize {
        self.rooted.roots()[0]
    }

    /// The four edges of the attached 4-cycle.
    pub fn square(&self) -> [(usize, usize); 4] {
        self.square
    }

    /// `H_l = H . P_l`, with the path rooted at one end.
    pub fn with_path(&self, ell: usize) -> Result<PathedWitness> {
        if ell < MIN_PATH_LENGTH {
            return Err(Error::param(format!(
                "path length {ell} is too short; the groups need vertex v_8, so l >= {MIN_PATH_LENGTH}"
            )));
        }
        let path = RootedGraph::new(Graph::path(ell), vec![0])?;
        let sum = rooted_sum(&self.rooted, &path)?;
        let n_h = self.rooted.graph().vertex_count();
        let path_vertices: Vec<usize> = std::iter::once(self.root())
            .chain((1..ell).map(|i| n_h + i - 1))
            .collect();
        Ok(PathedWitness {
            witness: self.clone(),
            graph: sum.into_graph(),
            path_vertices,
        })
    }
}

/// `H_l` with its decomposition into witness edges and path edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathedWitness {
    witness: Witness,
    graph: Graph,
    /// `v_0, .., v_{l-1}`; `v_0` is the witness root.
    path_vertices: Vec<usize>,
}

/// The eight groups of nonempty edge subsets of `H_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::A,
        Group::B,
        Group::C,
        Group::D,
        Group::E,
        Group::F,
        Group::G,
        Group::H,
    ];

    pub fn letter(self) -> char {
        (b'a' + self as u8) as char
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone)]
struct Component {
    edges: Vec<usize>,
    vertices: usize,
    core: bool,
    has_v8: bool,
    base_cycle: bool,
    exact_square: bool,
    contains_square: bool,
    star: bool,
}

impl Component {
    fn acyclic(&self) -> bool {
        self.edges.len() + 1 == self.vertices
    }
}

impl PathedWitness {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn path_length(&self) -> usize {
        self.path_vertices.len()
    }

    /// Vertex `v_i` of the attached path.
    pub fn path_vertex(&self, i: usize) -> usize {
        self.path_vertices[i]
    }

    /// Whether edge `e` (an index into `graph().edges()`) belongs to the
    /// witness rather than the attached path.
    pub fn is_witness_edge(&self, e: usize) -> bool {
        let (u, v) = self.graph.edges()[e];
        let n_h = self.witness.rooted.graph().vertex_count();
        u < n_h && v < n_h
    }

    /// Index of `{u, v}` in `graph().edges()`.
    pub fn edge_index(&self, u: usize, v: usize) -> Result<usize> {
        self.graph
            .edge_index(u, v)
            .ok_or_else(|| Error::invalid(format!("({u}, {v}) is not an edge of H_l")))
    }

    /// Group of the edge subset `f`, given as vertex pairs.
    pub fn classify(&self, f: &[(usize, usize)]) -> Result<Group> {
        let mut mask = vec![false; self.graph.edge_count()];
        for &(u, v) in f {
            mask[self.edge_index(u, v)?] = true;
        }
        self.classify_mask(&mask)
    }

    /// Group of the edge subset selected by `mask` (one flag per edge).
    pub fn classify_mask(&self, mask: &[bool]) -> Result<Group> {
        let verdicts = self.predicates(mask)?;
        let hits: Vec<Group> = Group::ALL
            .iter()
            .zip(verdicts)
            .filter(|(_, hit)| *hit)
            .map(|(g, _)| *g)
            .collect();
        match hits.as_slice() {
            [g] => Ok(*g),
            _ => Err(Error::invalid(format!(
                "edge subset satisfies {} group predicates ({hits:?}); expected exactly one",
                hits.len()
            ))),
        }
    }

    /// Evaluates the eight group predicates independently, in order a..h.
    pub fn predicates(&self, mask: &[bool]) -> Result<[bool; 8]> {
        if mask.len() != self.graph.edge_count() {
            return Err(Error::invalid("edge mask length does not match H_l"));
        }
        if !mask.iter().any(|&x| x) {
            return Err(Error::param("the edge subset must be nonempty"));
        }
        let comps = self.components(mask);
        let core: Vec<&Component> = comps.iter().filter(|c| c.core).collect();
        let total_cycles: usize = comps.iter().map(|c| c.edges.len() + 1 - c.vertices).sum();
        let square_in_f = self
            .witness
            .square
            .iter()
            .all(|&(u, v)| mask[self.graph.edge_index(u, v).unwrap()]);
        let v8_core = core.iter().any(|c| c.has_v8);

        let a = core.is_empty();
        let b = core.len() == 1 && core[0].exact_square;
        let c = core.len() == 1 && core[0].star;
        let d = v8_core;
        let e = !v8_core && core.iter().any(|c| c.base_cycle);
        let f = !v8_core
            && total_cycles == 1
            && square_in_f
            && core.iter().any(|c| c.contains_square && !c.exact_square);
        let g = !v8_core
            && core.iter().all(|c| c.acyclic() || c.exact_square)
            && core.iter().any(|c| c.acyclic() && !c.star);
        let h = !v8_core
            && core.iter().all(|c| c.star || c.exact_square)
            && core.len() >= 2;
        Ok([a, b, c, d, e, f, g, h])
    }

    fn components(&self, mask: &[bool]) -> Vec<Component> {
        let n = self.graph.vertex_count();
        let edges = self.graph.edges();
        let mut uf = UnionFind::new(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask[i] {
                uf.union(u, v);
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut comps: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (i, &(u, _)) in edges.iter().enumerate() {
            if !mask[i] {
                continue;
            }
            let r = uf.find(u);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push((Vec::new(), Vec::new()));
            }
            comps[index[r]].0.push(i);
        }
        for v in 0..n {
            let r = uf.find(v);
            if index[r] != usize::MAX {
                comps[index[r]].1.push(v);
            }
        }
        let n_g = self.witness.base_vertices;
        let v8 = self.path_vertices[8];
        let square: Vec<usize> = self
            .witness
            .square
            .iter()
            .map(|&(u, v)| self.graph.edge_index(u, v).unwrap())
            .collect();
        comps
            .into_iter()
            .map(|(es, vs)| {
                let sub: Vec<(usize, usize)> = es.iter().map(|&i| edges[i]).collect();
                let acyclic = es.len() + 1 == vs.len();
                // a cycle using only edges of G
                let mut guf = UnionFind::new(n);
                let mut base_cycle = false;
                for &(u, v) in &sub {
                    if u < n_g && v < n_g && !guf.union(u, v) {
                        base_cycle = true;
                    }
                }
                let star = acyclic && Graph::new(n, &sub).map(|g| g.is_star()).unwrap_or(false);
                let contains_square = square.iter().all(|s| es.contains(s));
                let exact_square = contains_square && es.len() == 4;
                Component {
                    core: es.iter().any(|&i| self.is_witness_edge(i)),
                    has_v8: vs.contains(&v8),
                    vertices: vs.len(),
                    edges: es,
                    base_cycle,
                    exact_square,
                    contains_square,
                    star,
                }
            })
            .collect()
    }
}

/// Group of a nonempty edge subset of `H_l`.
pub fn classify_subset(hl: &PathedWitness, f: &[(usize, usize)]) -> Result<Group> {
    hl.classify(f)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Parameter regimes for the target graph `H . K_{m|l,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Graphons close to constant: `m, n, l` even, `5 | m`, `l >= n + |E(H)|`.
    Local,
    /// Graphons far from constant in cut norm: `m, n` even, `l <= mn/4`.
    NonLocal,
    /// The k-colour variant: `m, n` even, `5 | m`, `l = n + |E(H)|`.
    KCommon,
    /// No constraint beyond positive part sizes.
    Unconstrained,
}

impl Regime {
    pub fn parse(s: &str) -> Result<Regime> {
        match s {
            "local" => Ok(Regime::Local),
            "nonlocal" | "non-local" => Ok(Regime::NonLocal),
            "k-common" | "kcommon" => Ok(Regime::KCommon),
            "none" | "unconstrained" => Ok(Regime::Unconstrained),
            _ => Err(Error::param(format!(
                "unknown regime {s:?}; expected local, nonlocal, k-common or none"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Local => "local",
            Regime::NonLocal => "nonlocal",
            Regime::KCommon => "k-common",
            Regime::Unconstrained => "none",
        }
    }

    /// Checks `(m, n, l)` against the regime for a witness with `h_edges` edges.
    pub fn check(self, h_edges: usize, m: usize, n: usize, ell: usize) -> Result<()> {
        let fail = |constraint: String| {
            Err(Error::Regime {
                regime: self.name().to_string(),
                constraint,
            })
        };
        if m == 0 || n == 0 {
            return fail("m and n must be positive".into());
        }
        let even = |x: usize, name: &str| -> std::result::Result<(), String> {
            if x.is_multiple_of(2) {
                Ok(())
            } else {
                Err(format!("{name} = {x} must be even"))
            }
        };
        let result: std::result::Result<(), String> = (|| match self {
            Regime::Local => {
                even(m, "m")?;
                even(n, "n")?;
                even(ell, "l")?;
                if !m.is_multiple_of(5) {
                    return Err(format!("m = {m} must be divisible by 5"));
                }
                if ell < n + h_edges {
                    return Err(format!("l = {ell} must be at least n + |E(H)| = {}", n + h_edges));
                }
                Ok(())
            }
            Regime::NonLocal => {
                even(m, "m")?;
                even(n, "n")?;
                if 4 * ell > m * n {
                    return Err(format!("l = {ell} must be at most mn/4 = {}", m * n / 4));
                }
                Ok(())
            }
            Regime::KCommon => {
                even(m, "m")?;
                even(n, "n")?;
                if !m.is_multiple_of(5) {
                    return Err(format!("m = {m} must be divisible by 5"));
                }
                if ell != n + h_edges {
                    return Err(format!("l = {ell} must equal n + |E(H)| = {}", n + h_edges));
                }
                Ok(())
            }
            Regime::Unconstrained => Ok(()),
        })();
        match result {
            Ok(()) => Ok(()),
            Err(c) => fail(c),
        }
    }
}

/// `H . K_{m|l,n}`: the rooted witness glued at its root to the far end of
/// the path of `K_{m|l,n}`. Roots of `h` are kept.
pub fn build_target(h: &RootedGraph, m: usize, n: usize, ell: usize, regime: Regime) -> Result<RootedGraph> {
    if h.roots().len() != 1 {
        return Err(Error::param("the target construction needs a single root"));
    }
    regime.check(h.graph().edge_count(), m, n, ell)?;
    let tail = pathed_bipartite(m, ell, n)?;
    rooted_sum(h, &tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_counts() {
        let g = Graph::cycle(5).unwrap();
        let w = build_witness(&g, None).unwrap();
        let h = w.rooted().graph();
        assert_eq!(h.vertex_count(), 23);
        assert_eq!(h.edge_count(), 24);
        assert_eq!(h.degree(w.root()), 1);
        assert_eq!(h.girth(), Some(4));
        assert!(build_witness(&g, Some((2, 2))).is_err());
    }

    #[test]
    fn witness_contains_host_as_induced_subgraph() {
        let g = Graph::complete(4);
        let w = build_witness(&g, Some((1, 3))).unwrap();
        let induced = w.rooted().graph().induced(&[0, 1, 2, 3]);
        assert_eq!(induced, g);
    }

    #[test]
    fn named_subsets() {
        let g = Graph::cycle(5).unwrap();
        let hl = build_witness(&g, None).unwrap().with_path(10).unwrap();
        let path: Vec<(usize, usize)> = (0..3)
            .map(|i| (hl.path_vertex(i + 1), hl.path_vertex(i + 2)))
            .collect();
        assert_eq!(hl.classify(&path).unwrap(), Group::A);
        let sq = hl.witness().square();
        assert_eq!(hl.classify(&sq).unwrap(), Group::B);
        assert_eq!(hl.classify(&[(0, 1), (1, 2)]).unwrap(), Group::C);
        let c5: Vec<_> = g.edges().to_vec();
        assert_eq!(hl.classify(&c5).unwrap(), Group::E);
        assert!(hl.classify(&[]).is_err());
        assert!(build_witness(&g, None).unwrap().with_path(8).is_err());
    }

    #[test]
    fn reaching_v8_is_group_d() {
        let g = Graph::cycle(5).unwrap();
        let w = build_witness(&g, None).unwrap();
        let hl = w.with_path(9).unwrap();
        let n = g.vertex_count();
        let mut f = vec![(n + 1, n + 2)];
        f.extend((0..8).map(|i| (hl.path_vertex(i), hl.path_vertex(i + 1))));
        assert_eq!(hl.classify(&f).unwrap(), Group::D);
    }

    #[test]
    fn target_arithmetic() {
        let k2 = RootedGraph::new(Graph::path(2), vec![0]).unwrap();
        let t = build_target(&k2, 10, 4, 6, Regime::Local).unwrap();
        assert_eq!(t.graph().edge_count(), 1 + 40 + 6);
        assert_eq!(t.graph().vertex_count(), 2 + 10 + 4 + 6 - 1);
        assert!(matches!(
            build_target(&k2, 10, 4, 4, Regime::KCommon),
            Err(Error::Regime { .. })
        ));
        assert!(build_target(&k2, 10, 4, 5, Regime::KCommon).is_ok());
        assert!(build_target(&k2, 4, 4, 4, Regime::NonLocal).is_ok());
        assert!(build_target(&k2, 4, 4, 5, Regime::NonLocal).is_err());
        assert!(build_target(&k2, 6, 4, 6, Regime::Local).is_err());
    }
}
