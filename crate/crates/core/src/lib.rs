//! Exact computation on step graphons.
//!
//! Homomorphism densities (plain and rooted), spectral decompositions, exact
//! cut norms, numerical checks of the standard density inequalities, the
//! subset expansion of `t(H, p + U)`, and a projected-gradient search for
//! colourings that beat the random-colouring threshold.

pub mod chromatic;
pub mod commonality;
pub mod cutnorm;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod graphon;
pub mod hom;
pub mod indep;
pub mod lemmas;
pub mod numeric;
pub mod par;
pub mod random_graph;
pub mod report;
pub mod spectral;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{construct_family, rooted_sum, Family, Graph, RootedGraph};
pub use graphon::{common_refinement, validate_coloring, BlockFunction, Kind, StepFunction};
pub use hom::{
    hom_density, hom_density_graph, hom_density_with, rooted_density, rooted_density_with,
    DensityOptions, HomPlan, Method, RootedDensity,
};
