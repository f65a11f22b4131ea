//! Which subcommand exposes each library operation, with a runnable example.
//! Example paths are relative to the crate's `tests/data` directory.

pub struct Operation {
    pub name: &'static str,
    pub subcommand: &'static str,
    pub example: &'static [&'static str],
}

macro_rules! op {
    ($name:literal, $sub:literal, [$($arg:literal),* $(,)?]) => {
        Operation {
            name: $name,
            subcommand: $sub,
            example: &[$sub, $($arg),*],
        }
    };
}

pub const OPERATIONS: &[Operation] = &[
    // graphs
    op!("construct_family", "construct", ["--family", "K2,3"]),
    op!("rooted_sum", "construct", ["--sum", "p3_rooted.json", "k2_rooted.json"]),
    op!("build_witness", "construct", ["--witness", "c5.json", "--attach", "0,2"]),
    op!("build_target", "construct", ["--target", "k2_rooted.json", "--m", "4", "--n", "4", "--ell", "4", "--regime", "nonlocal"]),
    op!("edge_subgraph", "construct", ["--edge-subgraph", "k4.json", "--edges", "k4_subset.json"]),
    op!("random_high_girth", "construct", ["--random-girth", "40", "--girth", "5", "--seed", "1"]),
    op!("girth", "classify", ["--graph", "c5.json", "--girth"]),
    op!("chromatic_number", "classify", ["--graph", "c5.json", "--chromatic"]),
    op!("is_locally_dense", "classify", ["--graph", "k4.json", "--locally-dense", "--rho", "0.5", "--d", "0.3", "--seed", "1"]),
    op!("classify_subset", "classify", ["--base", "c5.json", "--ell", "10", "--subset", "witness_subset.json"]),
    op!("hom_density_graph", "density", ["--graph", "k3.json", "--host", "k4.json"]),
    // step functions
    op!("density", "density", ["--graphon", "two_block.json"]),
    op!("hom_density", "density", ["--graph", "k3.json", "--graphon", "half.json"]),
    op!("rooted_density", "rooted", ["--graph", "p3_rooted.json", "--graphon", "two_block.json"]),
    op!("restrict", "construct", ["--restrict", "two_block.json", "--weights", "weights.json"]),
    op!("complement", "construct", ["--complement", "two_block.json"]),
    op!("deviation", "construct", ["--deviation", "two_block.json"]),
    op!("subset_expansion", "expand", ["--graph", "k3.json", "--graphon", "two_block.json"]),
    op!("independence_ratio", "indep-ratio", ["--graphon", "two_block.json", "--delta", "0.1"]),
    op!("validate_coloring", "verify", ["--coloring", "two_block.json", "two_block_complement.json"]),
    // spectra
    op!("decompose", "spectrum", ["--graphon", "two_block.json"]),
    op!("cycle_density_spectral", "spectrum", ["--graphon", "two_block.json", "--cycle", "5"]),
    op!("path_density_spectral", "spectrum", ["--graphon", "two_block.json", "--path", "4"]),
    op!("project", "spectrum", ["--graphon", "two_block.json", "--project", "weights.json"]),
    op!("estimate_report", "spectrum", ["--graphon", "two_block.json", "--estimates"]),
    // cut norm
    op!("cut_norm_exact", "cutnorm", ["--kernel", "checkerboard.json"]),
    op!("sandwich_check", "cutnorm", ["--kernel", "checkerboard.json", "--sandwich"]),
    op!("c4_deviation_bound", "cutnorm", ["--graphon", "two_block.json", "--c4-deviation"]),
    op!("counting_lemma_bound", "cutnorm", ["--graphon", "two_block.json", "--other", "half.json", "--counting", "c5.json"]),
    // lemmas
    op!("verify", "verify", ["--lemma", "entropy_kab", "--input", "entropy_petersen.json"]),
    op!("random_suite", "suite", ["--seed", "1", "--trials", "20", "--lemmas", "all"]),
    op!("omega_alpha", "verify", ["--omega-alpha", "--delta", "0.1", "--rmax", "6"]),
    op!("omega_alpha_check", "verify", ["--omega-alpha-check", "--graphon", "two_block.json", "--graph", "k3.json", "--delta", "0.1"]),
    // commonality
    op!("commonality_value", "density", ["--graph", "k3.json", "--graphon", "half.json", "--commonality"]),
    op!("k_common_value", "density", ["--graph", "k3.json", "--coloring", "two_block.json", "two_block_complement.json"]),
    op!("gradient", "density", ["--graph", "k3.json", "--graphon", "two_block.json", "--gradient"]),
    op!("search_counterexample", "search", ["--graph", "paw.json", "--k", "2", "--blocks", "2", "--seed", "1", "--restarts", "2", "--iters", "200"]),
    op!("theorem_regime_check", "regime", ["--graph", "k2_rooted.json", "--graphon", "two_block.json", "--m", "4", "--n", "4", "--ell", "4", "--regime", "nonlocal"]),
];

pub const SUBCOMMANDS: [&str; 12] = [
    "density",
    "rooted",
    "cutnorm",
    "spectrum",
    "expand",
    "classify",
    "construct",
    "verify",
    "suite",
    "search",
    "regime",
    "indep-ratio",
];
