//! Grids of transform values over the scale-shift plane.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{CwtError, Result};

pub(crate) const NAN_C: Complex64 = Complex64::new(f64::NAN, f64::NAN);

/// Transform values sampled on a rectangular scale-shift grid.
///
/// Row `i` holds scale `a_values[i]`, column `j` holds shift `b_values[j]`.
/// Cells that were never evaluated (a node failed, or lies outside a region
/// of interest) carry NaN in both parts.
#[derive(Debug, Clone)]
pub struct TransformField {
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    /// Full transform values, shape `(a_values.len(), b_values.len())`.
    pub w: Array2<Complex64>,
    /// First-component values when the method computes the split.
    pub w1: Option<Array2<Complex64>>,
    /// Second-component values when the method computes the split.
    pub w2: Option<Array2<Complex64>>,
}

impl TransformField {
    /// Allocates a field of NaN markers over the given axes.
    pub fn unevaluated(
        a_values: Vec<f64>,
        b_values: Vec<f64>,
        with_components: bool,
    ) -> Result<Self> {
        validate_axis("a_values", &a_values)?;
        validate_axis("b_values", &b_values)?;
        let shape = (a_values.len(), b_values.len());
        let nan = Array2::from_elem(shape, NAN_C);
        Ok(TransformField {
            a_values,
            b_values,
            w: nan.clone(),
            w1: with_components.then(|| nan.clone()),
            w2: with_components.then_some(nan),
        })
    }

    /// Whether cell `(i, j)` holds an actual value.
    pub fn is_evaluated(&self, i: usize, j: usize) -> bool {
        let v = self.w[(i, j)];
        !(v.re.is_nan() || v.im.is_nan())
    }
}

/// Checks an axis is non-empty, finite, and strictly increasing.
pub fn validate_axis(name: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(CwtError::invalid(name, "axis must be non-empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CwtError::invalid(name, "axis values must be finite"));
    }
    if values.windows(2).any(|p| p[0] >= p[1]) {
        return Err(CwtError::invalid(
            name,
            "axis values must be strictly increasing",
        ));
    }
    Ok(())
}

/// Inclusive uniform axis from `min` to `max` with `count` points.
///
/// `count == 1` is allowed only when `min == max`.
pub fn linspace(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() {
        return Err(CwtError::invalid("axis", "endpoints must be finite"));
    }
    if count == 0 {
        return Err(CwtError::invalid("axis", "count must be at least 1"));
    }
    if count == 1 {
        if min != max {
            return Err(CwtError::invalid(
                "axis",
                "count 1 requires equal endpoints",
            ));
        }
        return Ok(vec![min]);
    }
    if !(min < max) {
        return Err(CwtError::invalid("axis", "min must be below max"));
    }
    let step = (max - min) / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count).map(|j| min + j as f64 * step).collect();
    // Pin the last node to the exact endpoint; accumulation may round past it.
    out[count - 1] = max;
    Ok(out)
}
