//! Spectral decomposition of step graphons and kernels as integral operators
//! on `L^2[0,1]`.
//!
//! For a step function with measures `mu` and values `M`, the nonzero
//! spectrum of the operator equals that of `D^{1/2} M D^{1/2}` with
//! `D = diag(mu)`, and eigenvector `v` corresponds to the step eigenfunction
//! `f = D^{-1/2} v`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::{BlockFunction, Kind, StepFunction};
use crate::hom::hom_density;
use crate::numeric::kahan_sum;
use crate::report::InequalityCheck;

/// Eigenvalues with absolute value below this are dropped.
pub const ZERO_EIGENVALUE: f64 = 1e-12;
/// Relative gap under which two eigenvalues are treated as one eigenspace.
const CLUSTER_TOLERANCE: f64 = 1e-11;

/// Eigenvalues sorted by decreasing absolute value (positive first on ties),
/// orthonormal step eigenfunctions, and their overlaps `<j, f_i>` with the
/// constant function. Overlaps are non-negative. Inside a repeated
/// eigenvalue the basis is rotated so that only its first vector overlaps
/// `j`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDecomposition {
    pub measures: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub eigenfunctions: Vec<BlockFunction>,
    pub overlaps: Vec<f64>,
    /// `1 - <j, f_1>`; equals 1 when the spectrum is empty.
    pub delta: f64,
}

/// Computes the spectral decomposition.
pub fn decompose(w: &StepFunction) -> SpectralDecomposition {
    let k = w.blocks();
    let mu = w.measures();
    let sq: Vec<f64> = mu.iter().map(|m| m.sqrt()).collect();
    let a = DMatrix::from_fn(k, k, |i, j| sq[i] * w.value(i, j) * sq[j]);
    let eig = SymmetricEigen::new(a);
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..k)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let j = DVector::from_vec(sq.clone());

    // group numerically equal eigenvalues
    let mut clusters: Vec<Vec<(f64, DVector<f64>)>> = Vec::new();
    for pair in pairs {
        match clusters.last_mut() {
            Some(c) if (pair.0 - c[0].0).abs() <= CLUSTER_TOLERANCE * c[0].0.abs().max(1.0) => c.push(pair),
            _ => clusters.push(vec![pair]),
        }
    }
    let mut ordered: Vec<(f64, Vec<(f64, DVector<f64>)>)> = clusters
        .into_iter()
        .map(|c| {
            let rep = c.iter().map(|p| p.0).sum::<f64>() / c.len() as f64;
            (rep, canonical_basis(c, &j))
        })
        .filter(|(rep, _)| rep.abs() >= ZERO_EIGENVALUE)
        .collect();
    ordered.sort_by(|x, y| {
        let (ax, ay) = (x.0.abs(), y.0.abs());
        if (ax - ay).abs() <= CLUSTER_TOLERANCE * ax.max(1.0) {
            y.0.total_cmp(&x.0)
        } else {
            ay.total_cmp(&ax)
        }
    });

    let mut eigenvalues = Vec::new();
    let mut eigenfunctions = Vec::new();
    let mut overlaps = Vec::new();
    for (_, members) in ordered {
        for (lambda, v) in members {
            if lambda.abs() < ZERO_EIGENVALUE {
                continue;
            }
            let f: Vec<f64> = (0..k).map(|b| v[b] / sq[b]).collect();
            let mut c = kahan_sum((0..k).map(|b| sq[b] * v[b]));
            if c.abs() <= ZERO_EIGENVALUE {
                // rounding noise on a vector orthogonal to j
                c = c.abs();
            }
            eigenvalues.push(lambda);
            eigenfunctions.push(BlockFunction::new(f));
            overlaps.push(c);
        }
    }
    let delta = 1.0 - overlaps.first().copied().unwrap_or(0.0);
    SpectralDecomposition {
        measures: mu.to_vec(),
        eigenvalues,
        eigenfunctions,
        overlaps,
        delta,
    }
}

/// Rotates an eigenspace so that its first vector is the normalised
/// projection of `j` (when nonzero), then fixes signs.
fn canonical_basis(cluster: Vec<(f64, DVector<f64>)>, j: &DVector<f64>) -> Vec<(f64, DVector<f64>)> {
    let mut vectors: Vec<DVector<f64>> = cluster.iter().map(|p| p.1.clone()).collect();
    let values: Vec<f64> = cluster.iter().map(|p| p.0).collect();
    if vectors.len() > 1 {
        let mut proj = DVector::zeros(j.len());
        for v in &vectors {
            proj += v * v.dot(j);
        }
        if proj.norm() > ZERO_EIGENVALUE {
            let mut basis: Vec<DVector<f64>> = vec![proj.normalize()];
            for v in &vectors {
                if basis.len() == vectors.len() {
                    break;
                }
                let mut r = v.clone();
                for b in &basis {
                    r -= b * b.dot(&r);
                }
                // second pass for numerical orthogonality
                for b in &basis {
                    r -= b * b.dot(&r);
                }
                if r.norm() > 1e-8 {
                    basis.push(r.normalize());
                }
            }
            vectors = basis;
        }
    }
    values
        .into_iter()
        .zip(vectors)
        .map(|(lambda, mut v)| {
            let c = v.dot(j);
            if c < -ZERO_EIGENVALUE {
                v = -v;
            } else if c.abs() <= ZERO_EIGENVALUE {
                if let Some(x) = v.iter().find(|x| x.abs() > ZERO_EIGENVALUE) {
                    if *x < 0.0 {
                        v = -v;
                    }
                }
            }
            (lambda, v)
        })
        .collect()
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest eigenvalue in absolute value, or 0.
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `sum_i lambda_i^n`, which equals `t(C_n, W)` for `n >= 3`.
    pub fn power_sum(&self, n: u32) -> f64 {
        kahan_sum(self.eigenvalues.iter().map(|l| l.powi(n as i32)))
    }

    /// `sum_i lambda_i^{n-1} <j, f_i>^2`, which equals `t(P_n, W)` for `n >= 2`.
    pub fn path_sum(&self, n: u32) -> f64 {
        kahan_sum(
            self.eigenvalues
                .iter()
                .zip(&self.overlaps)
                .map(|(l, c)| l.powi(n as i32 - 1) * c * c),
        )
    }

    /// Coefficients `<g, f_i>` of `g` in the eigenbasis.
    pub fn project(&self, g: &BlockFunction) -> Result<Vec<f64>> {
        if g.len() != self.measures.len() {
            return Err(Error::invalid(format!(
                "function has {} blocks, decomposition has {}",
                g.len(),
                self.measures.len()
            )));
        }
        Ok(self
            .eigenfunctions
            .iter()
            .map(|f| g.inner(f, &self.measures))
            .collect())
    }

    /// `<g, W^ell h>` computed as `sum_i sigma_i kappa_i lambda_i^ell`.
    /// Only the range of `W` is represented, so `ell` must be at least 1.
    pub fn bilinear(&self, g: &BlockFunction, h: &BlockFunction, ell: u32) -> Result<f64> {
        if ell == 0 {
            return Err(Error::param("the eigen-expansion of <g, W^l h> needs l >= 1"));
        }
        let sigma = self.project(g)?;
        let kappa = self.project(h)?;
        Ok(kahan_sum(
            self.eigenvalues
                .iter()
                .zip(sigma.iter().zip(&kappa))
                .map(|(l, (s, k))| s * k * l.powi(ell as i32)),
        ))
    }
}

/// Spectral quantities of a graphon together with the standard estimates
/// relating them to `p` and `gamma = t(C_4, W) - p^4`.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub p: f64,
    pub gamma: f64,
    pub lambda1: f64,
    pub delta: f64,
    pub checks: Vec<InequalityCheck>,
}

/// Evaluates the estimates for a graphon with positive density.
pub fn estimate_report(s: &SpectralDecomposition, w: &StepFunction) -> Result<EstimateReport> {
    if w.kind() != Kind::Graphon {
        return Err(Error::param("the spectral estimates are stated for graphons"));
    }
    let p = w.density();
    if p <= 0.0 {
        return Err(Error::param("the spectral estimates need positive density"));
    }
    let t_c4 = hom_density(&Graph::cycle(4)?, w)?;
    let gamma = (t_c4 - p.powi(4)).max(0.0);
    let lambda1 = s.lambda1();
    let delta = s.delta;
    let rest = || s.eigenvalues.iter().skip(1);
    let g4 = gamma.powf(0.25);
    let mut checks = vec![
        InequalityCheck::le("lambda1_at_least_p", p, lambda1),
        InequalityCheck::le("overlap_mass", kahan_sum(s.overlaps.iter().map(|c| c * c)), 1.0),
        InequalityCheck::le("lambda1_upper", lambda1, p + gamma / (4.0 * p.powi(3))),
        InequalityCheck::le(
            "lambda_rest",
            rest().map(|l| l.abs()).fold(0.0, f64::max),
            g4,
        ),
    ];
    for m in 4..=12 {
        checks.push(InequalityCheck::le(
            format!("power_sum_rest_m{m}"),
            kahan_sum(rest().map(|l| l.powi(m))),
            gamma.powf(m as f64 / 4.0),
        ));
    }
    for m in 1..=12u32 {
        let t = hom_density(&Graph::path(m as usize + 1), w)?;
        let main = lambda1.powi(m as i32) * (1.0 - delta).powi(2);
        let err = gamma.powf(m as f64 / 4.0);
        checks.push(InequalityCheck::le(format!("path_lower_m{m}"), main - err, t));
        checks.push(InequalityCheck::le(format!("path_upper_m{m}"), t, main + err));
    }
    checks.push(InequalityCheck::le("delta_upper", delta, gamma / p.powi(4)));
    checks.push(InequalityCheck::le(
        "overlap_rest",
        kahan_sum(s.overlaps.iter().skip(1).map(|c| c * c)),
        2.0 * delta,
    ));
    checks.push(InequalityCheck::le(
        "lambda1_lower",
        p * (1.0 + 2.0 * delta) - 8.0 * delta * g4,
        lambda1,
    ));
    Ok(EstimateReport {
        p,
        gamma,
        lambda1,
        delta,
        checks,
    })
}
