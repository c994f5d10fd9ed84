//! Finite-difference residual checks, field comparison statistics, and the
//! operation-count model comparing direct grid evaluation against
//! line-data propagation.
//!
//! The component transforms satisfy `u_ab + (R/a) u_a = 0` and the
//! propagation kernel satisfies the conjugated equation
//! `v_ab - (R/a) v_a + (R/a^2) v = 0`; both residuals are sampled with
//! order-2 central stencils (4-point cross for the mixed derivative,
//! 2-point central for the first derivative), so on smooth fields the
//! reported residual shrinks as `h^2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CwtError, Result};
use crate::field::TransformField;
use crate::quadrature::QuadratureSpec;
use crate::riemann::RiemannKernel;
use crate::signal::ScaleShiftPoint;

/// Aggregate of |residual| over a probe set at one step size.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub h: f64,
    pub n_points: usize,
}

/// Node-evaluation counts for filling a grid directly versus building line
/// data once and propagating to each target.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OpCountReport {
    pub direct_ops: u64,
    pub propagation_ops: u64,
    pub targets: u64,
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(CwtError::invalid("h", "step must be finite and positive"));
    }
    Ok(())
}

fn aggregate(mut values: Vec<f64>, h: f64) -> ResidualReport {
    let n = values.len();
    let mut max_abs = 0.0f64;
    let mut sum = 0.0f64;
    for v in values.drain(..) {
        max_abs = max_abs.max(v);
        sum += v;
    }
    ResidualReport {
        max_abs,
        mean_abs: if n == 0 { 0.0 } else { sum / n as f64 },
        h,
        n_points: n,
    }
}

/// Mixed derivative by the 4-point cross and first scale-derivative by the
/// 2-point central stencil.
fn stencil(
    field_eval: &mut impl FnMut(f64, f64) -> Result<Complex64>,
    a: f64,
    b: f64,
    h: f64,
) -> Result<(Complex64, Complex64)> {
    let upp = field_eval(a + h, b + h)?;
    let upm = field_eval(a + h, b - h)?;
    let ump = field_eval(a - h, b + h)?;
    let umm = field_eval(a - h, b - h)?;
    let up = field_eval(a + h, b)?;
    let um = field_eval(a - h, b)?;
    // Pairing along the shift axis first keeps the cross difference exact
    // for fields independent of scale: the paired operands are then
    // bitwise equal and cancel completely.
    let d_ab = ((upp - upm) - (ump - umm)) / (4.0 * h * h);
    let d_a = (up - um) / (2.0 * h);
    Ok((d_ab, d_a))
}

/// Samples `|u_ab + (R/a) u_a|` at each probe by central differences.
pub fn residual_hyperbolic(
    mut field_eval: impl FnMut(f64, f64) -> Result<Complex64>,
    r: Complex64,
    probes: &[ScaleShiftPoint],
    h: f64,
) -> Result<ResidualReport> {
    check_step(h)?;
    let mut values = Vec::with_capacity(probes.len());
    for p in probes {
        if p.a <= h {
            return Err(CwtError::InvalidScale(p.a));
        }
        let (d_ab, d_a) = stencil(&mut field_eval, p.a, p.b, h)?;
        values.push((d_ab + r / p.a * d_a).norm());
    }
    Ok(aggregate(values, h))
}

/// Samples `|v_ab - (R/a) v_a + (R/a^2) v|` of each probe's kernel by
/// central differences. The kernel solves this equation identically, so the
/// report measures pure stencil truncation and shrinks as `h^2`.
pub fn residual_conjugate(
    mut kr_family: impl FnMut(ScaleShiftPoint) -> Result<RiemannKernel>,
    probes: &[ScaleShiftPoint],
    h: f64,
) -> Result<ResidualReport> {
    check_step(h)?;
    let mut values = Vec::with_capacity(probes.len());
    for p in probes {
        if p.a <= h {
            return Err(CwtError::InvalidScale(p.a));
        }
        let kr = kr_family(*p)?;
        let mut eval = |a: f64, b: f64| kr.value(ScaleShiftPoint { a, b });
        let (d_ab, d_a) = stencil(&mut eval, p.a, p.b, h)?;
        let v = kr.value(*p)?;
        values.push((d_ab - kr.r / p.a * d_a + kr.r / (p.a * p.a) * v).norm());
    }
    Ok(aggregate(values, h))
}

/// Elementwise complex-difference statistics `(max_abs_diff, rms_diff)`
/// over `w`, restricted to nodes evaluated in both fields. The rms
/// denominator is the number of compared nodes.
pub fn compare_fields(f: &TransformField, g: &TransformField) -> Result<(f64, f64)> {
    if f.a_values != g.a_values || f.b_values != g.b_values {
        return Err(CwtError::ShapeMismatch(format!(
            "axes differ: {}x{} vs {}x{}",
            f.a_values.len(),
            f.b_values.len(),
            g.a_values.len(),
            g.b_values.len()
        )));
    }
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut n = 0u64;
    for i in 0..f.a_values.len() {
        for j in 0..f.b_values.len() {
            if f.is_evaluated(i, j) && g.is_evaluated(i, j) {
                let d = (f.w[(i, j)] - g.w[(i, j)]).norm();
                max_abs = max_abs.max(d);
                sum_sq += d * d;
                n += 1;
            }
        }
    }
    let rms = if n == 0 { 0.0 } else { (sum_sq / n as f64).sqrt() };
    Ok((max_abs, rms))
}

/// Cost model in quadrature-node evaluations: filling `targets` points
/// directly costs one full quadrature per point; propagation costs three
/// full quadratures per line node (value and both partials) once, then at
/// most one path-quadrature pass over the line nodes per target.
pub fn op_count_compare(targets: u64, q: &QuadratureSpec, ld_nodes: u64) -> OpCountReport {
    let per_point = q.pv_node_count();
    OpCountReport {
        direct_ops: targets * per_point,
        propagation_ops: 3 * ld_nodes * per_point + targets * ld_nodes,
        targets,
    }
}
