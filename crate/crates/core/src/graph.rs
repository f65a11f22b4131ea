//! Finite simple graphs, rooted graphs, and the standard families used as
//! pattern graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple graph on vertices `0..n`. Edges are stored as `(u, v)`
/// with `u < v`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, repeated edges and out-of-range
    /// endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) listed twice",
                    w[0].0, w[0].1
                )));
            }
        }
        Ok(Self::from_sorted(n, norm))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// A proper 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for &w in &self.adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            stack.push(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// `|E| - |V| + #components`; zero exactly for forests.
    pub fn cyclomatic_number(&self) -> usize {
        self.edges.len() + self.components().len() - self.n
    }

    /// True if some vertex is incident to every edge (one edge counts).
    pub fn is_star(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let (u, v) = self.edges[0];
        [u, v]
            .iter()
            .any(|&c| self.edges.iter().all(|&(a, b)| a == c || b == c))
    }

    /// A cycle `C_n` on all its vertices.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3
            && self.edges.len() == self.n
            && (0..self.n).all(|v| self.degree(v) == 2)
            && self.is_connected()
    }

    /// Complete bipartite with both sides nonempty and no isolated vertices.
    pub fn is_complete_bipartite(&self) -> bool {
        if !self.is_connected() || self.edges.is_empty() {
            return false;
        }
        match self.bipartition() {
            Some(side) => {
                let a = side.iter().filter(|&&s| s).count();
                let b = self.n - a;
                self.edges.len() == a * b
            }
            None => false,
        }
    }

    /// Subgraph on all vertices keeping the listed edges. Every listed pair
    /// must be an edge of `self`.
    pub fn edge_subgraph(&self, keep: &[(usize, usize)]) -> Result<Graph> {
        for &(u, v) in keep {
            if !self.has_edge(u, v) {
                return Err(Error::invalid(format!("({u}, {v}) is not an edge")));
            }
        }
        Graph::new(self.n, keep)
    }

    /// Subgraph on all vertices keeping the edges whose bit is set in `mask`
    /// (bit `i` refers to `edges()[i]`).
    pub fn edge_subgraph_mask(&self, mask: u64) -> Graph {
        let kept = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_sorted(self.n, kept)
    }

    /// Induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u].min(pos[v]), pos[u].max(pos[v])))
            .collect();
        edges.sort_unstable();
        Graph::from_sorted(vertices.len(), edges)
    }

    /// Drops isolated vertices, relabelling the rest in increasing order.
    pub fn without_isolated(&self) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        self.induced(&keep)
    }

    /// Removes vertex `v`; vertices above it shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Girth, or `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        self.shortest_cycle_through().map(|(len, _)| len)
    }

    /// Length of a shortest cycle together with a vertex lying on one.
    pub fn shortest_cycle_through(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = Vec::with_capacity(self.n);
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            parent.iter_mut().for_each(|p| *p = usize::MAX);
            queue.clear();
            dist[s] = 0;
            queue.push(s);
            let mut head = 0;
            let mut found: Option<usize> = None;
            'bfs: while head < queue.len() {
                let u = queue[head];
                head += 1;
                if let Some(f) = found {
                    if 2 * dist[u] + 1 >= f {
                        break 'bfs;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if found.is_none_or(|f| len < f) {
                            found = Some(len);
                        }
                    }
                }
            }
            if let Some(len) = found {
                if best.is_none_or(|(b, _)| len < b) {
                    best = Some((len, s));
                }
            }
        }
        best
    }

    pub fn path(n: usize) -> Graph {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_sorted(n, edges)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::param(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        edges.sort_unstable();
        Ok(Graph::from_sorted(n, edges))
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_sorted(n, edges)
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::from_sorted(a + b, edges)
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Graph {
        Graph::complete_bipartite(1, k)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        edges.sort_unstable();
        Graph::from_sorted(self.n + other.n, edges)
    }

    /// Complement graph.
    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_sorted(self.n, edges)
    }
}

/// A graph with a nonempty independent set of distinguished roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedGraph {
    graph: Graph,
    roots: Vec<usize>,
}

impl RootedGraph {
    pub fn new(graph: Graph, roots: Vec<usize>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::invalid("a rooted graph needs at least one root"));
        }
        for (i, &r) in roots.iter().enumerate() {
            if r >= graph.vertex_count() {
                return Err(Error::invalid(format!("root {r} is not a vertex")));
            }
            if roots[..i].contains(&r) {
                return Err(Error::invalid(format!("root {r} listed twice")));
            }
            for &s in &roots[..i] {
                if graph.has_edge(r, s) {
                    return Err(Error::invalid(format!(
                        "roots {s} and {r} are adjacent; roots must be independent"
                    )));
                }
            }
        }
        Ok(RootedGraph { graph, roots })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.roots.contains(&v)
    }
}

/// Glues `g` and `h` along their roots (matched in listed order). The result
/// keeps the vertices of `g` as `0..|g|` followed by the non-root vertices of
/// `h` in increasing order; the roots of `g` stay roots.
pub fn rooted_sum(g: &RootedGraph, h: &RootedGraph) -> Result<RootedGraph> {
    if g.roots.len() != h.roots.len() {
        return Err(Error::invalid(format!(
            "root counts differ: {} vs {}",
            g.roots.len(),
            h.roots.len()
        )));
    }
    let n_g = g.graph.vertex_count();
    let mut map = vec![usize::MAX; h.graph.vertex_count()];
    for (i, &r) in h.roots.iter().enumerate() {
        map[r] = g.roots[i];
    }
    let mut next = n_g;
    for (v, slot) in map.iter_mut().enumerate() {
        if !h.roots.contains(&v) {
            *slot = next;
            next += 1;
        }
    }
    let mut edges = g.graph.edges.clone();
    for &(u, v) in &h.graph.edges {
        let (a, b) = (map[u], map[v]);
        edges.push((a.min(b), a.max(b)));
    }
    let graph = Graph::new(next, &edges)?;
    RootedGraph::new(graph, g.roots.clone())
}

/// Named graph families with their canonical root conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    /// Path on `n` vertices rooted at an endpoint.
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    /// `K_{a,b}` rooted at vertex 0 of the `a`-part.
    CompleteBipartite { a: usize, b: usize },
    /// `K_{a,b}` with a path of `ell` new vertices hanging off vertex 0,
    /// rooted at the far end of the path.
    PathedBipartite { a: usize, ell: usize, b: usize },
}

impl Family {
    /// Parses names like `P5`, `C4`, `K3`, `K2,3` and `K4|2,4`.
    pub fn parse(s: &str) -> Result<Family> {
        let bad = || Error::param(format!("unrecognised family {s:?}"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('P') {
            return Ok(Family::Path { n: num(rest)? });
        }
        if let Some(rest) = s.strip_prefix('C') {
            return Ok(Family::Cycle { n: num(rest)? });
        }
        if let Some(rest) = s.strip_prefix('K') {
            if let Some((left, b)) = rest.split_once(',') {
                return match left.split_once('|') {
                    Some((a, ell)) => Ok(Family::PathedBipartite {
                        a: num(a)?,
                        ell: num(ell)?,
                        b: num(b)?,
                    }),
                    None => Ok(Family::CompleteBipartite {
                        a: num(left)?,
                        b: num(b)?,
                    }),
                };
            }
            return Ok(Family::Complete { n: num(rest)? });
        }
        Err(bad())
    }
}

/// Builds a member of a standard family, rooted per its convention.
pub fn construct_family(family: Family) -> Result<RootedGraph> {
    match family {
        Family::Path { n } => {
            if n == 0 {
                return Err(Error::param("path needs at least one vertex"));
            }
            RootedGraph::new(Graph::path(n), vec![0])
        }
        Family::Cycle { n } => RootedGraph::new(Graph::cycle(n)?, vec![0]),
        Family::Complete { n } => {
            if n == 0 {
                return Err(Error::param("complete graph needs at least one vertex"));
            }
            RootedGraph::new(Graph::complete(n), vec![0])
        }
        Family::CompleteBipartite { a, b } => {
            if a == 0 || b == 0 {
                return Err(Error::param("both parts of K_{a,b} must be nonempty"));
            }
            RootedGraph::new(Graph::complete_bipartite(a, b), vec![0])
        }
        Family::PathedBipartite { a, ell, b } => pathed_bipartite(a, ell, b),
    }
}

/// `K_{a|ell,b}`: `K_{a,b}` plus path vertices `a+b .. a+b+ell-1`, the first
/// adjacent to vertex 0, rooted at the last one.
pub fn pathed_bipartite(a: usize, ell: usize, b: usize) -> Result<RootedGraph> {
    if a == 0 || b == 0 {
        return Err(Error::param("both parts of K_{a,b} must be nonempty"));
    }
    let base = Graph::complete_bipartite(a, b);
    if ell == 0 {
        return RootedGraph::new(base, vec![0]);
    }
    let n = a + b + ell;
    let mut edges = base.edges.clone();
    let mut prev = 0;
    for v in a + b..n {
        edges.push((prev, v));
        prev = v;
    }
    RootedGraph::new(Graph::new(n, &edges)?, vec![n - 1])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    roots: Option<Vec<usize>>,
}

impl Graph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serialises")
    }

    /// Parses `{"n": .., "edges": [[u, v], ..]}`; a `roots` field is ignored.
    pub fn from_json_str(s: &str) -> Result<Graph> {
        let g: GraphJson = serde_json::from_str(s)?;
        let edges: Vec<_> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(g.n, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            roots: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GraphJson::deserialize(d)?;
        let edges: Vec<_> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(g.n, &edges).map_err(serde::de::Error::custom)
    }
}

impl RootedGraph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            n: self.graph.n,
            edges: self.graph.edges.iter().map(|&(u, v)| [u, v]).collect(),
            roots: Some(self.roots.clone()),
        })
        .expect("graph serialises")
    }

    /// Parses a graph with a `roots` field; missing roots default to `[0]`.
    pub fn from_json_str(s: &str) -> Result<RootedGraph> {
        let g: GraphJson = serde_json::from_str(s)?;
        let edges: Vec<_> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = Graph::new(g.n, &edges)?;
        RootedGraph::new(graph, g.roots.unwrap_or_else(|| vec![0]))
    }
}
