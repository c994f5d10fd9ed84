//! Direct evaluation of the transform and its scale-shift derivatives.
//!
//! Every integral is taken in the scaled argument `xi = (t - b)/a`, where the
//! transform reads `W(a, b) = (1/pi) * integral f(b + a xi) conj(psi(xi)) dxi`.
//! This form keeps the quadrature lattice independent of the target point, so
//! shift covariance of harmonics holds to rounding and grids reuse one window.
//!
//! The component split turns the kernel into `exp(i mu xi)/xi` principal
//! values; the scale derivative of a component collapses to a smooth integral
//! `-(K/(2 pi a)) * integral f(b + a xi) exp(i mu xi) dxi` with `K` the
//! component's derivative scale. All integrands carry the window taper.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{CwtError, Result};
use crate::field::TransformField;
use crate::fourier::fourier_grid;
use crate::quadrature::{pv_half_offset, trapezoid, QuadratureSpec};
use crate::signal::{ScaleShiftPoint, Signal};
use crate::wavelet::{check_scale, eval_psi, WaveletComponent};

/// Step used for centered shift-difference derivatives of sampled signals.
pub const PARTIAL_B_FD_STEP: f64 = 1e-3;

/// Signal support mapped into `xi` at the given target, when finite.
fn support_xi(signal: &Signal, p: ScaleShiftPoint) -> Option<(f64, f64)> {
    signal
        .support()
        .map(|(lo, hi)| ((lo - p.b) / p.a, (hi - p.b) / p.a))
}

/// Full transform by plain quadrature of the whole wavelet.
pub fn cwt_direct(signal: &Signal, spec: &QuadratureSpec, p: ScaleShiftPoint) -> Result<Complex64> {
    spec.validate()?;
    check_scale(p.a)?;
    let (lo, hi) = spec.clip_window(support_xi(signal, p))?;
    let v = trapezoid(lo, hi, spec.step(), |xi| {
        // conj(psi) = sinc(xi) * exp(+2 pi i xi)
        signal.eval(p.b + p.a * xi)
            * eval_psi(xi).conj()
            * spec.taper(xi)
    });
    Ok(v / PI)
}

/// One component of the transform as a principal value.
pub fn cwt_component_pv(
    signal: &Signal,
    component: WaveletComponent,
    spec: &QuadratureSpec,
    p: ScaleShiftPoint,
) -> Result<Complex64> {
    spec.validate()?;
    check_scale(p.a)?;
    let mu = component.modulation();
    let (lo, hi) = spec.clip_window(support_xi(signal, p))?;
    let v = pv_half_offset(spec, lo, hi, |xi| {
        signal.eval(p.b + p.a * xi)
            * Complex64::from_polar(spec.taper(xi), mu * xi)
    })?;
    Ok(Complex64::new(0.0, -1.0 / (2.0 * PI * PI)) * v)
}

/// Scale derivative of one component: a smooth (pole-free) quadrature.
pub fn partial_a_component(
    signal: &Signal,
    component: WaveletComponent,
    spec: &QuadratureSpec,
    p: ScaleShiftPoint,
) -> Result<Complex64> {
    spec.validate()?;
    check_scale(p.a)?;
    let mu = component.modulation();
    let (lo, hi) = spec.clip_window(support_xi(signal, p))?;
    let v = trapezoid(lo, hi, spec.step(), |xi| {
        signal.eval(p.b + p.a * xi)
            * Complex64::from_polar(spec.taper(xi), mu * xi)
    });
    Ok(v * (-component.derivative_scale() / (2.0 * PI * p.a)))
}

/// Shift derivative of one component.
///
/// A harmonic has the exact derivative `i omega` under the integral; sampled
/// signals fall back to a centered difference of the component transform.
pub fn partial_b_component(
    signal: &Signal,
    component: WaveletComponent,
    spec: &QuadratureSpec,
    p: ScaleShiftPoint,
) -> Result<Complex64> {
    match signal {
        Signal::Harmonic { omega } => {
            let w = cwt_component_pv(signal, component, spec, p)?;
            Ok(Complex64::new(0.0, *omega) * w)
        }
        Signal::Sampled { .. } => {
            let d = PARTIAL_B_FD_STEP;
            let hi = cwt_component_pv(
                signal,
                component,
                spec,
                ScaleShiftPoint { a: p.a, b: p.b + d },
            )?;
            let lo = cwt_component_pv(
                signal,
                component,
                spec,
                ScaleShiftPoint { a: p.a, b: p.b - d },
            )?;
            Ok((hi - lo) / (2.0 * d))
        }
    }
}

/// How a grid of transform values is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMethod {
    /// Component principal values per node; fills the split and their
    /// difference.
    PvSplit,
    /// Whole-wavelet quadrature per node; fills only the full transform.
    DirectTime,
    /// Spectral evaluation over the sample lattice; sampled signals only,
    /// shifts must sit on sample instants.
    Fourier,
}

/// A node the grid evaluation could not fill.
#[derive(Debug)]
pub struct NodeFailure {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub b: f64,
    pub error: CwtError,
}

/// A filled grid plus the nodes that failed (left as NaN).
#[derive(Debug)]
pub struct GridFill {
    pub field: TransformField,
    pub failures: Vec<NodeFailure>,
}

/// Evaluates the transform over the cartesian grid of the two axes.
///
/// Node-level failures (say, a shift outside a sampled signal's reach) mark
/// the cell NaN and are reported; they do not abort the remaining nodes.
pub fn evaluate_grid(
    signal: &Signal,
    spec: &QuadratureSpec,
    a_values: &[f64],
    b_values: &[f64],
    method: GridMethod,
) -> Result<GridFill> {
    spec.validate()?;
    if method == GridMethod::Fourier {
        let field = fourier_grid(signal, a_values, b_values)?;
        return Ok(GridFill {
            field,
            failures: Vec::new(),
        });
    }
    let with_components = method == GridMethod::PvSplit;
    let mut field =
        TransformField::unevaluated(a_values.to_vec(), b_values.to_vec(), with_components)?;

    type Cell = std::result::Result<(Complex64, Option<(Complex64, Complex64)>), CwtError>;
    let rows: Vec<Vec<Cell>> = a_values
        .par_iter()
        .map(|&a| {
            b_values
                .iter()
                .map(|&b| {
                    let p = ScaleShiftPoint::new(a, b)?;
                    match method {
                        GridMethod::DirectTime => Ok((cwt_direct(signal, spec, p)?, None)),
                        GridMethod::PvSplit => {
                            let w1 =
                                cwt_component_pv(signal, WaveletComponent::Component1, spec, p)?;
                            let w2 =
                                cwt_component_pv(signal, WaveletComponent::Component2, spec, p)?;
                            Ok((w1 - w2, Some((w1, w2))))
                        }
                        GridMethod::Fourier => unreachable!("handled above"),
                    }
                })
                .collect()
        })
        .collect();

    let mut failures = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            match cell {
                Ok((w, split)) => {
                    field.w[(i, j)] = w;
                    if let Some((w1, w2)) = split {
                        field.w1.as_mut().expect("split allocated")[(i, j)] = w1;
                        field.w2.as_mut().expect("split allocated")[(i, j)] = w2;
                    }
                }
                Err(error) => failures.push(NodeFailure {
                    i,
                    j,
                    a: a_values[i],
                    b: b_values[j],
                    error,
                }),
            }
        }
    }
    Ok(GridFill { field, failures })
}
