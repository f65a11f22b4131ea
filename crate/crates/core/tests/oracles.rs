//! Library results against independent brute-force computations and known values.

use graphonlab::chromatic::chromatic_number;
use graphonlab::commonality::GradientPlan;
use graphonlab::cutnorm::cut_norm_exact;
use graphonlab::graph::pathed_bipartite;
use graphonlab::lemmas::{dirichlet, omega_alpha_check, random_graphon, random_kernel, verify, LemmaId, LemmaInput};
use graphonlab::spectral::decompose;
use graphonlab::{
    hom_density_graph, hom_density_with, rooted_density, DensityOptions, Graph, Kind, Method, RootedGraph,
    StepFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Calls `f` on every assignment of `n` variables to `0..k`.
fn for_each_assignment(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut x = vec![0; n];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            x[i] += 1;
            if x[i] < k {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn brute_density(h: &Graph, w: &StepFunction, fixed: &[(usize, usize)]) -> f64 {
    let n = h.vertex_count();
    let mu = w.measures();
    let mut total = 0.0;
    for_each_assignment(n, w.blocks(), |x| {
        if fixed.iter().any(|&(v, b)| x[v] != b) {
            return;
        }
        let mut term = 1.0;
        for v in 0..n {
            if !fixed.iter().any(|&(r, _)| r == v) {
                term *= mu[x[v]];
            }
        }
        for &(u, v) in h.edges() {
            term *= w.value(x[u], x[v]);
        }
        total += term;
    });
    total
}

fn brute_hom_count(h: &Graph, g: &Graph) -> u64 {
    let mut count = 0;
    for_each_assignment(h.vertex_count(), g.vertex_count(), |x| {
        if h.edges().iter().all(|&(u, v)| g.has_edge(x[u], x[v])) {
            count += 1;
        }
    });
    count
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.random_range(1..=max_n);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.45) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::new(10, &edges).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn densities_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..150 {
        let h = random_graph(&mut rng, 6);
        let w = if rng.random_bool(0.5) { random_graphon(&mut rng, 3) } else { random_kernel(&mut rng, 3) };
        let want = brute_density(&h, &w, &[]);
        for method in [Method::Enumerate, Method::Eliminate] {
            let got = hom_density_with(&h, &w, &DensityOptions::with_method(method)).unwrap();
            assert!(close(got, want, 1e-10) || (got - want).abs() < 1e-15, "{method:?}: {got} vs {want}");
        }
    }
}

#[test]
fn rooted_densities_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..60 {
        let h = random_graph(&mut rng, 5);
        let n = h.vertex_count();
        let roots: Vec<usize> = if n >= 2 && !h.has_edge(0, 1) && rng.random_bool(0.5) { vec![1, 0] } else { vec![0] };
        let rh = RootedGraph::new(h.clone(), roots.clone()).unwrap();
        let w = random_graphon(&mut rng, 3);
        let k = w.blocks();
        let r = rooted_density(&rh, &w).unwrap();
        for_each_assignment(roots.len(), k, |blocks| {
            let fixed: Vec<(usize, usize)> = roots.iter().copied().zip(blocks.iter().copied()).collect();
            let want = brute_density(&h, &w, &fixed);
            let got = r.get(blocks);
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
        });
    }
}

#[test]
fn finite_host_densities_count_homomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..40 {
        let h = random_graph(&mut rng, 4);
        let g = random_graph(&mut rng, 6);
        let want = brute_hom_count(&h, &g) as f64 / (g.vertex_count() as f64).powi(h.vertex_count() as i32);
        let got = hom_density_graph(&h, &g).unwrap();
        assert!((got - want).abs() <= 1e-14, "{got} vs {want}");
    }
}

#[test]
fn known_chromatic_numbers() {
    let grotzsch = {
        // Mycielskian of C5.
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i + 5, (i + 1) % 5));
            edges.push(((i + 1) % 5 + 5, i));
            edges.push((i + 5, 10));
        }
        Graph::new(11, &edges).unwrap()
    };
    let cases = [
        (Graph::empty(4), 1),
        (Graph::path(6), 2),
        (Graph::cycle(5).unwrap(), 3),
        (Graph::cycle(8).unwrap(), 2),
        (Graph::complete(5), 5),
        (Graph::complete_bipartite(3, 4), 2),
        (petersen(), 3),
        (grotzsch, 4),
    ];
    for (g, chi) in cases {
        assert_eq!(chromatic_number(&g).unwrap(), chi, "{g:?}");
    }
}

#[test]
fn known_girths() {
    assert_eq!(petersen().girth(), Some(5));
    assert_eq!(Graph::complete(4).girth(), Some(3));
    assert_eq!(Graph::cycle(7).unwrap().girth(), Some(7));
    assert_eq!(Graph::complete_bipartite(3, 3).girth(), Some(4));
    assert_eq!(Graph::star(5).girth(), None);
    assert_eq!(Graph::path(4).girth(), None);
}

fn mat_mul(a: &[f64], b: &[f64], k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            c[i * k + j] = (0..k).map(|l| a[i * k + l] * b[l * k + j]).sum();
        }
    }
    c
}

#[test]
fn spectral_sums_match_matrix_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..50 {
        let w = random_kernel(&mut rng, 5);
        let k = w.blocks();
        let mu = w.measures();
        // Symmetric operator matrix sqrt(mu_a) W_ab sqrt(mu_b).
        let m: Vec<f64> = (0..k * k)
            .map(|i| mu[i / k].sqrt() * w.value(i / k, i % k) * mu[i % k].sqrt())
            .collect();
        let s = decompose(&w);
        let mut power = m.clone();
        for n in 2..=8u32 {
            power = mat_mul(&power, &m, k);
            let trace: f64 = (0..k).map(|i| power[i * k + i]).sum();
            assert!((s.power_sum(n) - trace).abs() <= 1e-10 * (1.0 + trace.abs()), "C{n}");
        }
        let mut v: Vec<f64> = mu.iter().map(|x| x.sqrt()).collect();
        let root = v.clone();
        for n in 2..=8u32 {
            v = (0..k).map(|i| (0..k).map(|j| m[i * k + j] * v[j]).sum()).collect();
            let quad: f64 = v.iter().zip(&root).map(|(a, b)| a * b).sum();
            assert!((s.path_sum(n) - quad).abs() <= 1e-10 * (1.0 + quad.abs()), "P{n}");
        }
    }
}

#[test]
fn gradient_matches_brute_force_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let step = 1e-6;
    for _ in 0..20 {
        let h = random_graph(&mut rng, 5);
        if h.edge_count() == 0 {
            continue;
        }
        let w = random_graphon(&mut rng, 3);
        let k = w.blocks();
        let g = GradientPlan::new(&h).unwrap().gradient(&w, &DensityOptions::default()).unwrap();
        for a in 0..k {
            for b in a..k {
                let shift = |d: f64| {
                    let mut v = w.values().to_vec();
                    v[a * k + b] += d;
                    if a != b {
                        v[b * k + a] += d;
                    }
                    StepFunction::from_flat(Kind::Kernel, w.measures(), v).unwrap()
                };
                let fd = (brute_density(&h, &shift(step), &[]) - brute_density(&h, &shift(-step), &[])) / (2.0 * step);
                assert!((g[a * k + b] - fd).abs() <= 1e-6, "({a},{b}): {} vs {fd}", g[a * k + b]);
            }
        }
    }
}

fn brute_cut_norm(u: &StepFunction) -> f64 {
    let k = u.blocks();
    let mu = u.measures();
    let mut best: f64 = 0.0;
    for s in 0u32..1 << k {
        for t in 0u32..1 << k {
            let mut sum = 0.0;
            for a in (0..k).filter(|a| s >> a & 1 == 1) {
                for b in (0..k).filter(|b| t >> b & 1 == 1) {
                    sum += mu[a] * mu[b] * u.value(a, b);
                }
            }
            best = best.max(sum.abs());
        }
    }
    best
}

#[test]
fn cut_norm_matches_enumeration_and_is_a_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..60 {
        let k = rng.random_range(1..=6);
        let mu = dirichlet(&mut rng, k);
        let sym = |rng: &mut ChaCha8Rng| {
            let mut v = vec![0.0; k * k];
            for a in 0..k {
                for b in a..k {
                    let x = rng.random_range(-1.0..1.0);
                    v[a * k + b] = x;
                    v[b * k + a] = x;
                }
            }
            v
        };
        let (x, y) = (sym(&mut rng), sym(&mut rng));
        let u = StepFunction::from_flat(Kind::Kernel, &mu, x.clone()).unwrap();
        let v = StepFunction::from_flat(Kind::Kernel, &mu, y.clone()).unwrap();
        let nu = cut_norm_exact(&u).unwrap().value;
        assert!((nu - brute_cut_norm(&u)).abs() <= 1e-13);
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (a + b) / 2.0).collect();
        let half_sum = StepFunction::from_flat(Kind::Kernel, &mu, sum).unwrap();
        let nv = cut_norm_exact(&v).unwrap().value;
        assert!(2.0 * cut_norm_exact(&half_sum).unwrap().value <= nu + nv + 1e-12);
        let c = rng.random_range(-1.0..1.0);
        let scaled = StepFunction::from_flat(Kind::Kernel, &mu, x.iter().map(|a| c * a).collect()).unwrap();
        assert!((cut_norm_exact(&scaled).unwrap().value - c.abs() * nu).abs() <= 1e-13);
    }
}

#[test]
fn quantitative_bipartite_bound_is_tight_on_constants() {
    for p in [0.1, 0.5, 0.9] {
        let input = LemmaInput {
            graphon: Some(StepFunction::constant(p).unwrap()),
            a: Some(2),
            b: Some(4),
            ell: Some(2),
            ..Default::default()
        };
        let r = verify(LemmaId::KabQuant, &input).unwrap();
        assert!(r.pass());
        let c = &r.checks[0];
        // Both sides are p^{ab + l} when the deviation vanishes.
        assert!(close(c.lhs, c.rhs, 1e-12), "{c:?}");
        assert!(close(c.lhs.max(c.rhs), p.powi(10), 1e-12));
    }
}

#[test]
fn entropy_bound_on_petersen() {
    let g = petersen();
    let input = LemmaInput {
        graph: Some(g.clone()),
        a: Some(2),
        b: Some(2),
        ell: Some(2),
        ..Default::default()
    };
    let r = verify(LemmaId::EntropyKab, &input).unwrap();
    assert!(r.pass());
    let c = &r.checks[0];
    // 3-regular on 10 vertices: t(P3) = 10 * 9 / 1000.
    assert!(close(c.lhs, 0.09f64.powi(3), 1e-12));
    let target = pathed_bipartite(2, 2, 2).unwrap().into_graph();
    assert_eq!(target.edge_count(), 6);
    let count = brute_hom_count(&target, &g) as f64 / 10f64.powi(target.vertex_count() as i32);
    assert!(close(c.rhs, count, 1e-12), "{} vs {count}", c.rhs);
}

#[test]
fn empty_graphon_is_all_sparse() {
    let w = StepFunction::constant(0.0).unwrap();
    for delta in [0.1, 0.5] {
        let r = omega_alpha_check(&w, &Graph::complete(3), delta).unwrap();
        assert_eq!(r.density, 0.0);
        assert!(!r.dense_side);
        assert!(r.sparse_side && r.pass);
        assert_eq!(r.alpha_ratio, 1.0);
    }
}
