use graphonlab::commonality::{commonality_value, k_common_value, search_counterexample, SearchConfig, SearchState};
use graphonlab::cutnorm::cut_norm_exact;
use graphonlab::expansion::subset_expansion;
use graphonlab::{hom_density, hom_density_with, DensityOptions, Graph, Kind, Method, StepFunction};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn symmetric(k: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(lo..hi, k * (k + 1) / 2).prop_map(move |upper| {
        let mut v = vec![0.0; k * k];
        let mut it = upper.into_iter();
        for a in 0..k {
            for b in a..k {
                let x = it.next().unwrap();
                v[a * k + b] = x;
                v[b * k + a] = x;
            }
        }
        v
    })
}

fn step(kind: Kind, max_k: usize) -> impl Strategy<Value = StepFunction> {
    let (lo, hi) = match kind {
        Kind::Graphon => (0.0, 1.0),
        Kind::Kernel => (-1.0, 1.0),
    };
    (1..=max_k).prop_flat_map(move |k| {
        (proptest::collection::vec(0.05f64..1.0, k), symmetric(k, lo, hi))
            .prop_map(move |(mu, v)| StepFunction::from_flat(kind, &mu, v).unwrap())
    })
}

fn permuted(w: &StepFunction, perm: &[usize]) -> StepFunction {
    let k = w.blocks();
    let mu: Vec<f64> = perm.iter().map(|&a| w.measures()[a]).collect();
    let v: Vec<f64> = (0..k * k).map(|i| w.value(perm[i / k], perm[i % k])).collect();
    StepFunction::from_flat(w.kind(), &mu, v).unwrap()
}

fn brute_bipartite(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0u32..1 << n).any(|c| g.edges().iter().all(|&(u, v)| (c >> u & 1) != (c >> v & 1)))
}

fn brute_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    // Connected iff no proper nonempty vertex subset is closed under adjacency.
    (1u32..(1 << n) - 1).all(|s| g.edges().iter().any(|&(u, v)| (s >> u & 1) != (s >> v & 1)))
}

/// Shortest cycles are induced, so look for the smallest vertex set whose
/// induced subgraph is connected and 2-regular.
fn brute_girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    (1u32..1 << n)
        .filter(|s| s.count_ones() >= 3)
        .filter(|&s| {
            let vs: Vec<usize> = (0..n).filter(|v| s >> v & 1 == 1).collect();
            let sub = g.induced(&vs);
            sub.is_connected() && (0..sub.vertex_count()).all(|v| sub.degree(v) == 2)
        })
        .map(|s| s.count_ones() as usize)
        .min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_agrees_with_elimination(h in graph(6), w in step(Kind::Kernel, 3)) {
        let a = hom_density_with(&h, &w, &DensityOptions::with_method(Method::Enumerate)).unwrap();
        let b = hom_density_with(&h, &w, &DensityOptions::with_method(Method::Eliminate)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-3));
    }

    #[test]
    fn density_ignores_block_order(h in graph(5), w in step(Kind::Graphon, 4), seed in any::<u64>()) {
        let k = w.blocks();
        let mut perm: Vec<usize> = (0..k).collect();
        perm.rotate_left((seed % k as u64) as usize);
        let a = hom_density(&h, &w).unwrap();
        let b = hom_density(&h, &permuted(&w, &perm)).unwrap();
        prop_assert!((a - b).abs() <= 1e-13);
    }

    #[test]
    fn commonality_is_symmetric_under_complement(h in graph(5), w in step(Kind::Graphon, 3)) {
        let a = commonality_value(&h, &w).unwrap();
        let b = commonality_value(&h, &w.complement().unwrap()).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-14);
        prop_assert!(a.margin == a.value - a.threshold);
    }

    #[test]
    fn k_common_ignores_colour_order(h in graph(4), w in step(Kind::Graphon, 3), split in 0.0f64..1.0) {
        let k = w.blocks();
        let first: Vec<f64> = w.values().iter().map(|x| x * split).collect();
        let second: Vec<f64> = w.values().iter().map(|x| x * (1.0 - split)).collect();
        let rest: Vec<f64> = w.values().iter().map(|x| 1.0 - x).collect();
        let mk = |v: Vec<f64>| StepFunction::from_flat(Kind::Graphon, w.measures(), v).unwrap();
        let colours = vec![mk(first), mk(second), mk(rest)];
        let a = k_common_value(&h, &colours).unwrap();
        let reversed: Vec<_> = colours.iter().rev().cloned().collect();
        let b = k_common_value(&h, &reversed).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-14);
        prop_assert_eq!(a.threshold, b.threshold);
        prop_assert_eq!(k * k, w.values().len());
    }

    #[test]
    fn expansion_sums_to_direct_density(h in graph(5), w in step(Kind::Graphon, 3)) {
        let r = subset_expansion(&h, &w).unwrap();
        let direct = hom_density(&h, &w).unwrap();
        prop_assert!((r.total - direct).abs() <= 1e-12 * direct.max(1e-3));
        let sum: f64 = r.empty_term + r.terms.iter().map(|t| t.coefficient * t.density).sum::<f64>();
        prop_assert!((sum - r.total).abs() <= 1e-12);
    }

    #[test]
    fn cut_norm_is_between_integral_and_l1(u in step(Kind::Kernel, 5)) {
        let k = u.blocks();
        let mu = u.measures();
        let mut integral = 0.0;
        let mut l1 = 0.0;
        for a in 0..k {
            for b in 0..k {
                integral += mu[a] * mu[b] * u.value(a, b);
                l1 += mu[a] * mu[b] * u.value(a, b).abs();
            }
        }
        let c = cut_norm_exact(&u).unwrap().value;
        prop_assert!(c + 1e-14 >= integral.abs());
        prop_assert!(c <= l1 + 1e-14);
    }

    #[test]
    fn predicates_match_brute_force(g in graph(8)) {
        prop_assert_eq!(g.is_bipartite(), brute_bipartite(&g));
        prop_assert_eq!(g.is_connected(), brute_connected(&g));
        prop_assert_eq!(g.girth(), brute_girth(&g));
        let m = g.edge_count();
        let n = g.vertex_count();
        prop_assert_eq!(g.is_tree(), brute_connected(&g) && m + 1 == n);
        let cycle = n >= 3 && m == n && brute_connected(&g) && (0..n).all(|v| g.degree(v) == 2);
        prop_assert_eq!(g.is_cycle(), cycle);
    }

    #[test]
    fn graph_json_round_trips(g in graph(7)) {
        let back = Graph::from_json_str(&g.to_json().to_string()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn step_json_round_trips(w in step(Kind::Kernel, 4)) {
        let back = StepFunction::from_json_str(&w.to_json().to_string()).unwrap();
        prop_assert_eq!(back, w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let cfg = SearchConfig { blocks: 2, restarts: 2, iters: 60, seed, ..Default::default() };
        let h = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let a = search_counterexample(&h, &cfg).unwrap();
        let b = search_counterexample(&h, &cfg).unwrap();
        prop_assert_eq!(&a, &b);
        let text = serde_json::to_string(&a).unwrap();
        let back: SearchState = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }
}
