//! Step graphons and step kernels: symmetric functions on `[0,1]^2` that are
//! constant on products of the blocks of a finite partition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::kahan_sum;

/// Smallest block measure accepted after normalisation.
pub const MIN_MEASURE: f64 = 1e-12;
/// Allowed asymmetry between `M[a][b]` and `M[b][a]` on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Values in `[0, 1]`.
    Graphon,
    /// Values in `[-1, 1]`.
    Kernel,
}

/// A step function given by block measures and a symmetric block matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    kind: Kind,
    measures: Vec<f64>,
    /// Row-major `k x k`.
    values: Vec<f64>,
}

impl StepFunction {
    /// Validates and builds a step function. Measures are normalised to sum
    /// to one; values must be finite, in range for `kind`, and symmetric.
    pub fn new(kind: Kind, measures: &[f64], values: &[Vec<f64>]) -> Result<Self> {
        let k = measures.len();
        if k == 0 {
            return Err(Error::invalid("at least one block is required"));
        }
        if values.len() != k || values.iter().any(|r| r.len() != k) {
            return Err(Error::invalid(format!(
                "value matrix must be {k} x {k} to match the measures"
            )));
        }
        let flat: Vec<f64> = values.iter().flatten().copied().collect();
        Self::from_flat(kind, measures, flat)
    }

    /// Like [`StepFunction::new`] with a row-major value vector.
    pub fn from_flat(kind: Kind, measures: &[f64], values: Vec<f64>) -> Result<Self> {
        let k = measures.len();
        if k == 0 {
            return Err(Error::invalid("at least one block is required"));
        }
        if values.len() != k * k {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                k * k,
                values.len()
            )));
        }
        let measures = normalise_measures(measures)?;
        let (lo, hi) = match kind {
            Kind::Graphon => (0.0, 1.0),
            Kind::Kernel => (-1.0, 1.0),
        };
        for a in 0..k {
            for b in 0..k {
                let x = values[a * k + b];
                if !x.is_finite() || x < lo || x > hi {
                    return Err(Error::invalid(format!(
                        "value {x} at ({a}, {b}) is outside [{lo}, {hi}]"
                    )));
                }
                if (x - values[b * k + a]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "values at ({a}, {b}) and ({b}, {a}) differ"
                    )));
                }
            }
        }
        let mut values = values;
        // store an exactly symmetric matrix
        for a in 0..k {
            for b in a + 1..k {
                values[b * k + a] = values[a * k + b];
            }
        }
        Ok(StepFunction {
            kind,
            measures,
            values,
        })
    }

    pub fn graphon(measures: &[f64], values: &[Vec<f64>]) -> Result<Self> {
        Self::new(Kind::Graphon, measures, values)
    }

    pub fn kernel(measures: &[f64], values: &[Vec<f64>]) -> Result<Self> {
        Self::new(Kind::Kernel, measures, values)
    }

    /// The constant graphon `p` on a single block.
    pub fn constant(p: f64) -> Result<Self> {
        Self::from_flat(Kind::Graphon, &[1.0], vec![p])
    }

    /// Uniform block measures `1/k`.
    pub fn uniform(kind: Kind, values: &[Vec<f64>]) -> Result<Self> {
        let k = values.len();
        Self::new(kind, &vec![1.0 / k as f64; k], values)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn blocks(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    /// Row-major block values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.measures.len() + b]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.blocks())
            .map(|r| r.to_vec())
            .collect()
    }

    /// Edge density `t(K_2, W)`.
    pub fn density(&self) -> f64 {
        let k = self.blocks();
        kahan_sum((0..k * k).map(|i| {
            self.measures[i / k] * self.measures[i % k] * self.values[i]
        }))
    }

    /// Degree function `x -> \int W(x, y) dy`.
    pub fn degrees(&self) -> BlockFunction {
        let k = self.blocks();
        BlockFunction::new(
            (0..k)
                .map(|a| kahan_sum((0..k).map(|b| self.measures[b] * self.value(a, b))))
                .collect(),
        )
    }

    /// `1 - W`.
    pub fn complement(&self) -> Result<Self> {
        if self.kind != Kind::Graphon {
            return Err(Error::param("complement is defined for graphons only"));
        }
        Ok(StepFunction {
            kind: Kind::Graphon,
            measures: self.measures.clone(),
            values: self.values.iter().map(|x| 1.0 - x).collect(),
        })
    }

    /// Edge density `p` and the kernel `W - p`.
    pub fn deviation(&self) -> Result<(f64, StepFunction)> {
        if self.kind != Kind::Graphon {
            return Err(Error::param("deviation is defined for graphons only"));
        }
        let p = self.density();
        Ok((
            p,
            StepFunction {
                kind: Kind::Kernel,
                measures: self.measures.clone(),
                values: self.values.iter().map(|x| x - p).collect(),
            },
        ))
    }

    /// `W[h](x, y) = h(x) W(x, y) h(y)` for `h` with values in `[0, 1]`.
    pub fn restrict(&self, h: &BlockFunction) -> Result<Self> {
        let k = self.blocks();
        if h.len() != k {
            return Err(Error::invalid(format!(
                "restriction has {} blocks, step function has {k}",
                h.len()
            )));
        }
        if h.values().iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::invalid("restriction values must lie in [0, 1]"));
        }
        let mut values = self.values.clone();
        for a in 0..k {
            for b in 0..k {
                values[a * k + b] *= h.get(a) * h.get(b);
            }
        }
        Ok(StepFunction {
            kind: self.kind,
            measures: self.measures.clone(),
            values,
        })
    }

    /// Same kind and values, viewed as a kernel.
    pub fn as_kernel(&self) -> StepFunction {
        StepFunction {
            kind: Kind::Kernel,
            ..self.clone()
        }
    }

    pub fn same_partition(&self, other: &StepFunction) -> bool {
        self.measures == other.measures
    }

    /// `self - other` as a kernel on a common refinement of both partitions.
    pub fn difference(&self, other: &StepFunction) -> Result<StepFunction> {
        let (a, b) = common_refinement(self, other);
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
        let diff = StepFunction {
            kind: Kind::Kernel,
            measures: a.measures,
            values,
        };
        if diff.values.iter().any(|x| x.abs() > 1.0 + 1e-12) {
            return Err(Error::invalid("difference leaves [-1, 1]"));
        }
        Ok(diff)
    }

    /// Splits each block into `parts` equal pieces; the function is unchanged.
    pub fn split_blocks(&self, parts: usize) -> StepFunction {
        let k = self.blocks();
        let kk = k * parts;
        let measures: Vec<f64> = (0..kk).map(|i| self.measures[i / parts] / parts as f64).collect();
        let mut values = vec![0.0; kk * kk];
        for i in 0..kk {
            for j in 0..kk {
                values[i * kk + j] = self.value(i / parts, j / parts);
            }
        }
        StepFunction {
            kind: self.kind,
            measures,
            values,
        }
    }

    /// Tensor product `W1 (x) W2` on `k1 * k2` blocks; block `(a, b)` has
    /// index `a * k2 + b`.
    pub fn tensor(&self, other: &StepFunction) -> StepFunction {
        let (k1, k2) = (self.blocks(), other.blocks());
        let k = k1 * k2;
        let mut measures = vec![0.0; k];
        let mut values = vec![0.0; k * k];
        for a in 0..k1 {
            for b in 0..k2 {
                measures[a * k2 + b] = self.measures[a] * other.measures[b];
            }
        }
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = self.value(i / k2, j / k2) * other.value(i % k2, j % k2);
            }
        }
        let kind = if self.kind == Kind::Graphon && other.kind == Kind::Graphon {
            Kind::Graphon
        } else {
            Kind::Kernel
        };
        StepFunction {
            kind,
            measures,
            values,
        }
    }
}

fn normalise_measures(measures: &[f64]) -> Result<Vec<f64>> {
    if measures.iter().any(|m| !m.is_finite() || *m <= 0.0) {
        return Err(Error::invalid("block measures must be finite and positive"));
    }
    let total = kahan_sum(measures.iter().copied());
    // Already normalised up to rounding: keep the exact bits so that
    // serialised step functions load back unchanged.
    let out: Vec<f64> = if (total - 1.0).abs() <= 8.0 * measures.len() as f64 * f64::EPSILON {
        measures.to_vec()
    } else {
        measures.iter().map(|m| m / total).collect()
    };
    if out.iter().any(|&m| m < MIN_MEASURE) {
        return Err(Error::invalid(format!(
            "a normalised block measure is below {MIN_MEASURE}"
        )));
    }
    Ok(out)
}

/// Re-expresses both step functions on the common refinement of their
/// partitions (blocks are consecutive intervals in listed order).
pub fn common_refinement(a: &StepFunction, b: &StepFunction) -> (StepFunction, StepFunction) {
    if a.same_partition(b) {
        return (a.clone(), b.clone());
    }
    let cuts_a = cumulative(&a.measures);
    let cuts_b = cumulative(&b.measures);
    let mut cuts: Vec<f64> = cuts_a.iter().chain(&cuts_b).copied().collect();
    cuts.sort_by(f64::total_cmp);
    // breakpoints closer than the minimum block measure are the same point
    let mut merged: Vec<f64> = Vec::new();
    for c in cuts {
        if merged.last().is_none_or(|&l| c - l > MIN_MEASURE) {
            merged.push(c);
        }
    }
    *merged.last_mut().unwrap() = 1.0;
    let mut measures = Vec::with_capacity(merged.len());
    let mut mids = Vec::with_capacity(merged.len());
    let mut prev = 0.0;
    for &c in &merged {
        measures.push(c - prev);
        mids.push(0.5 * (prev + c));
        prev = c;
    }
    let block_of = |cuts: &[f64], x: f64| cuts.iter().position(|&c| x < c).unwrap_or(cuts.len() - 1);
    let ia: Vec<usize> = mids.iter().map(|&x| block_of(&cuts_a, x)).collect();
    let ib: Vec<usize> = mids.iter().map(|&x| block_of(&cuts_b, x)).collect();
    let lift = |f: &StepFunction, idx: &[usize]| {
        let k = idx.len();
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = f.value(idx[i], idx[j]);
            }
        }
        StepFunction {
            kind: f.kind,
            measures: measures.clone(),
            values,
        }
    };
    (lift(a, &ia), lift(b, &ib))
}

fn cumulative(measures: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = measures
        .iter()
        .map(|m| {
            acc += m;
            acc
        })
        .collect();
    *out.last_mut().unwrap() = 1.0;
    out
}

/// A function on `[0,1]` that is constant on each block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockFunction(Vec<f64>);

impl BlockFunction {
    pub fn new(values: Vec<f64>) -> Self {
        BlockFunction(values)
    }

    pub fn constant(k: usize, c: f64) -> Self {
        BlockFunction(vec![c; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn get(&self, b: usize) -> f64 {
        self.0[b]
    }

    /// `\int f g` with respect to the block measures.
    pub fn inner(&self, other: &BlockFunction, measures: &[f64]) -> f64 {
        kahan_sum((0..self.len()).map(|b| measures[b] * self.0[b] * other.0[b]))
    }

    pub fn integral(&self, measures: &[f64]) -> f64 {
        kahan_sum((0..self.len()).map(|b| measures[b] * self.0[b]))
    }
}

/// Checks that `colours` share one partition and sum to 1 pointwise
/// (within `1e-10`).
pub fn validate_coloring(colours: &[StepFunction]) -> Result<()> {
    let first = colours
        .first()
        .ok_or_else(|| Error::invalid("a colouring needs at least one colour"))?;
    for (i, w) in colours.iter().enumerate() {
        if w.kind != Kind::Graphon {
            return Err(Error::invalid(format!("colour {i} is not a graphon")));
        }
        if w.blocks() != first.blocks()
            || w.measures.iter().zip(&first.measures).any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(Error::invalid(format!(
                "colour {i} uses a different block partition"
            )));
        }
    }
    let k = first.blocks();
    for a in 0..k {
        for b in 0..k {
            let s = kahan_sum(colours.iter().map(|w| w.value(a, b)));
            if (s - 1.0).abs() > 1e-10 {
                return Err(Error::invalid(format!(
                    "colours sum to {s} on block ({a}, {b}), expected 1"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<Kind>,
    measures: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl StepFunction {
    /// `{"measures": [..], "values": [[..], ..]}`; kernels also carry
    /// `"kind": "kernel"`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("step function serialises")
    }

    /// Parses the JSON form; the kind defaults to graphon.
    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let s: StepJson = serde_json::from_value(v)?;
        Self::new(s.kind.unwrap_or(Kind::Graphon), &s.measures, &s.values)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let s: StepJson = serde_json::from_str(text)?;
        Self::new(s.kind.unwrap_or(Kind::Graphon), &s.measures, &s.values)
    }
}

impl Serialize for StepFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepJson {
            kind: (self.kind == Kind::Kernel).then_some(Kind::Kernel),
            measures: self.measures.clone(),
            values: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = StepJson::deserialize(d)?;
        StepFunction::new(s.kind.unwrap_or(Kind::Graphon), &s.measures, &s.values)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures_are_normalised() {
        let w = StepFunction::graphon(&[1.0, 3.0], &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(w.measures(), &[0.25, 0.75]);
        assert!((w.density() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn normalised_measures_are_kept() {
        let mu = [0.47971866176067546, 0.5202813382393244];
        let w = StepFunction::kernel(&mu, &[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(w.measures(), &mu);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(StepFunction::graphon(&[1.0], &[vec![1.5]]).is_err());
        assert!(StepFunction::graphon(&[0.5, 0.5], &[vec![0.0, 1.0], vec![0.5, 0.0]]).is_err());
        assert!(StepFunction::graphon(&[0.0, 1.0], &[vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(StepFunction::graphon(&[1.0, 1e-14], &[vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(StepFunction::kernel(&[1.0], &[vec![-1.0]]).is_ok());
    }

    #[test]
    fn deviation_integrates_to_zero() {
        let w = StepFunction::graphon(&[0.2, 0.8], &[vec![0.9, 0.1], vec![0.1, 0.4]]).unwrap();
        let (p, u) = w.deviation().unwrap();
        assert!((p - w.density()).abs() < 1e-15);
        assert!(u.density().abs() < 1e-15);
        assert_eq!(u.kind(), Kind::Kernel);
    }

    #[test]
    fn refinement_preserves_density() {
        let a = StepFunction::graphon(&[0.3, 0.7], &[vec![0.9, 0.1], vec![0.1, 0.4]]).unwrap();
        let b = StepFunction::graphon(&[0.5, 0.5], &[vec![0.2, 0.6], vec![0.6, 0.0]]).unwrap();
        let (ra, rb) = common_refinement(&a, &b);
        assert_eq!(ra.blocks(), 3);
        assert!((ra.density() - a.density()).abs() < 1e-14);
        assert!((rb.density() - b.density()).abs() < 1e-14);
    }

    #[test]
    fn colouring_validation() {
        let w = StepFunction::graphon(&[0.5, 0.5], &[vec![0.3, 0.6], vec![0.6, 0.1]]).unwrap();
        let c = w.complement().unwrap();
        assert!(validate_coloring(&[w.clone(), c]).is_ok());
        assert!(validate_coloring(&[w.clone(), w]).is_err());
    }

    #[test]
    fn json_shape() {
        let w = StepFunction::kernel(&[1.0, 1.0], &[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        let text = w.to_json().to_string();
        assert_eq!(
            text,
            r#"{"kind":"kernel","measures":[0.5,0.5],"values":[[0.5,-0.5],[-0.5,0.5]]}"#
        );
        assert_eq!(StepFunction::from_json_str(&text).unwrap(), w);
        assert!(StepFunction::from_json_str(r#"{"measures":[1,1],"values":[[0,1],[0,0]]}"#).is_err());
    }
}
