//! Exact chromatic number (DSATUR branch and bound) and independence-number
//! bounds for small graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count accepted by [`chromatic_number`] unless overridden.
pub const DEFAULT_CHROMATIC_VERTEX_LIMIT: usize = 40;
/// Search-node cap for the exact branch and bound routines.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy)]
pub struct ChromaticOptions {
    pub vertex_limit: usize,
    pub node_budget: u64,
}

impl Default for ChromaticOptions {
    fn default() -> Self {
        ChromaticOptions {
            vertex_limit: DEFAULT_CHROMATIC_VERTEX_LIMIT,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Exact chromatic number with the default vertex limit.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with(g, ChromaticOptions::default())
}

pub fn chromatic_number_with(g: &Graph, opts: ChromaticOptions) -> Result<usize> {
    let n = g.vertex_count();
    if n > opts.vertex_limit {
        return Err(Error::budget(format!(
            "chromatic number of a {n}-vertex graph exceeds the {}-vertex limit",
            opts.vertex_limit
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    if g.edge_count() == 0 {
        return Ok(1);
    }
    let mut search = Dsatur::new(g, opts.node_budget);
    search.run()
}

struct Dsatur<'a> {
    g: &'a Graph,
    colour: Vec<usize>,
    best: usize,
    nodes: u64,
    budget: u64,
    lower: usize,
}

const NONE: usize = usize::MAX;

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, budget: u64) -> Self {
        Dsatur {
            g,
            colour: vec![NONE; g.vertex_count()],
            best: usize::MAX,
            nodes: 0,
            budget,
            lower: 1,
        }
    }

    fn run(&mut self) -> Result<usize> {
        let clique = greedy_clique(self.g);
        self.lower = clique.len().max(2);
        self.best = greedy_dsatur(self.g);
        if self.best <= self.lower {
            return Ok(self.best);
        }
        // colouring a clique first removes colour-permutation symmetry
        for (c, &v) in clique.iter().enumerate() {
            self.colour[v] = c;
        }
        self.branch(clique.len())?;
        Ok(self.best)
    }

    fn saturation(&self, v: usize) -> (usize, usize) {
        let mut seen: u64 = 0;
        let mut extra: Vec<usize> = Vec::new();
        let mut uncoloured = 0;
        for &w in self.g.neighbors(v) {
            let c = self.colour[w];
            if c == NONE {
                uncoloured += 1;
            } else if c < 64 {
                seen |= 1 << c;
            } else if !extra.contains(&c) {
                extra.push(c);
            }
        }
        (seen.count_ones() as usize + extra.len(), uncoloured)
    }

    fn branch(&mut self, used: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::budget(format!(
                "chromatic number search exceeded {} nodes",
                self.budget
            )));
        }
        let mut pick = NONE;
        let mut key = (0, 0);
        for v in 0..self.g.vertex_count() {
            if self.colour[v] != NONE {
                continue;
            }
            let k = self.saturation(v);
            if pick == NONE || k > key {
                pick = v;
                key = k;
            }
        }
        if pick == NONE {
            self.best = self.best.min(used);
            return Ok(());
        }
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.g.neighbors(pick).iter().any(|&w| self.colour[w] == c) {
                continue;
            }
            self.colour[pick] = c;
            self.branch(used.max(c + 1))?;
            self.colour[pick] = NONE;
            if self.best <= self.lower {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Number of colours used by plain greedy DSATUR.
pub fn greedy_dsatur(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut colour = vec![NONE; n];
    let mut used = 0;
    for _ in 0..n {
        let mut pick = NONE;
        let mut key = (0, 0);
        for v in 0..n {
            if colour[v] != NONE {
                continue;
            }
            let mut cs: Vec<usize> = g
                .neighbors(v)
                .iter()
                .filter_map(|&w| (colour[w] != NONE).then_some(colour[w]))
                .collect();
            cs.sort_unstable();
            cs.dedup();
            let k = (cs.len(), g.degree(v));
            if pick == NONE || k > key {
                pick = v;
                key = k;
            }
        }
        let c = (0..)
            .find(|c| g.neighbors(pick).iter().all(|&w| colour[w] != *c))
            .unwrap();
        colour[pick] = c;
        used = used.max(c + 1);
    }
    used
}

/// A maximal clique grown greedily from each vertex; the largest one found.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for s in 0..g.vertex_count() {
        let mut clique = vec![s];
        let mut cand: Vec<usize> = g.neighbors(s).to_vec();
        cand.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in cand {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Upper bound on the independence number, and whether it is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependenceBound {
    pub value: usize,
    pub exact: bool,
}

/// Exact independence number if the branch and bound finishes within
/// `node_budget` nodes, otherwise `n - |greedy maximal matching|`.
pub fn independence_upper_bound(g: &Graph, node_budget: u64) -> IndependenceBound {
    let n = g.vertex_count();
    let words = n.div_ceil(64).max(1);
    let adj: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut row = vec![0u64; words];
            for &w in g.neighbors(v) {
                row[w / 64] |= 1 << (w % 64);
            }
            row
        })
        .collect();
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut search = MisSearch {
        adj: &adj,
        best: 0,
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    search.best = greedy_independent(g);
    search.expand(all, 0);
    if !search.aborted {
        return IndependenceBound {
            value: search.best,
            exact: true,
        };
    }
    let mut matched = vec![false; n];
    let mut m = 0;
    for &(u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            m += 1;
        }
    }
    IndependenceBound {
        value: n - m,
        exact: false,
    }
}

fn greedy_independent(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| g.degree(v));
    let mut blocked = vec![false; g.vertex_count()];
    let mut size = 0;
    for v in order {
        if !blocked[v] {
            size += 1;
            blocked[v] = true;
            for &w in g.neighbors(v) {
                blocked[w] = true;
            }
        }
    }
    size
}

struct MisSearch<'a> {
    adj: &'a [Vec<u64>],
    best: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

fn popcount(s: &[u64]) -> usize {
    s.iter().map(|w| w.count_ones() as usize).sum()
}

fn first_bit(s: &[u64]) -> Option<usize> {
    s.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

impl MisSearch<'_> {
    fn expand(&mut self, cand: Vec<u64>, size: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let remaining = popcount(&cand);
        if remaining == 0 {
            self.best = self.best.max(size);
            return;
        }
        if size + remaining <= self.best {
            return;
        }
        // branch on a vertex of maximum remaining degree
        let mut pick = first_bit(&cand).unwrap();
        let mut pick_deg = 0;
        let mut pick_min = pick;
        let mut min_deg = usize::MAX;
        for (wi, &word) in cand.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let v = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                let d: usize = self.adj[v]
                    .iter()
                    .zip(&cand)
                    .map(|(a, c)| (a & c).count_ones() as usize)
                    .sum();
                if d > pick_deg {
                    pick = v;
                    pick_deg = d;
                }
                if d < min_deg {
                    min_deg = d;
                    pick_min = v;
                }
            }
        }
        if min_deg <= 1 {
            // a vertex of degree at most one belongs to some maximum independent set
            let mut next = cand.clone();
            next[pick_min / 64] &= !(1 << (pick_min % 64));
            for (n, a) in next.iter_mut().zip(&self.adj[pick_min]) {
                *n &= !a;
            }
            self.expand(next, size + 1);
            return;
        }
        let mut with = cand.clone();
        with[pick / 64] &= !(1 << (pick % 64));
        let without = with.clone();
        for (n, a) in with.iter_mut().zip(&self.adj[pick]) {
            *n &= !a;
        }
        self.expand(with, size + 1);
        self.expand(without, size);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chromatic_numbers_of_families() {
        assert_eq!(chromatic_number(&Graph::complete(5)).unwrap(), 5);
        assert_eq!(chromatic_number(&Graph::cycle(7).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::cycle(8).unwrap()).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::empty(3)).unwrap(), 1);
    }

    #[test]
    fn petersen_and_grotzsch() {
        let petersen = Graph::new(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
            ],
        )
        .unwrap();
        assert_eq!(chromatic_number(&petersen).unwrap(), 3);
        // Mycielskian of C5: triangle-free with chromatic number 4
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
        for i in 0..5 {
            for &(a, b) in &[(0usize, 1usize), (1, 2), (2, 3), (3, 4), (0, 4)] {
                if a == i {
                    edges.push((5 + i, b));
                }
                if b == i {
                    edges.push((5 + i, a));
                }
            }
            edges.push((5 + i, 10));
        }
        let grotzsch = Graph::new(11, &edges).unwrap();
        assert_eq!(grotzsch.girth(), Some(4));
        assert_eq!(chromatic_number(&grotzsch).unwrap(), 4);
    }

    #[test]
    fn too_large_is_loud() {
        let g = Graph::path(41);
        assert!(matches!(chromatic_number(&g), Err(Error::Budget(_))));
    }

    #[test]
    fn independence_of_cycle() {
        let b = independence_upper_bound(&Graph::cycle(9).unwrap(), 1_000_000);
        assert_eq!(b, IndependenceBound { value: 4, exact: true });
        let b = independence_upper_bound(&Graph::complete(6), 1_000_000);
        assert_eq!(b.value, 1);
    }
}
