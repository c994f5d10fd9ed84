//! Closed-form transforms of the complex harmonic `exp(i*omega*t)`.
//!
//! For a harmonic input the principal-value integrals collapse to signs:
//! each component equals `sign(omega*a + mu) * exp(i*omega*b)/(2*pi)` with
//! `mu` the component modulation, so the full transform is `exp(i*omega*b)/pi`
//! inside the spectrum band `(-3*pi/a, -pi/a)` and zero outside. The sign
//! flips exactly where `omega*a + mu = 0`; the closed forms refuse those
//! thresholds rather than pick a side.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CwtError, Result};
use crate::riemann::{LineData, LineSegmentSpec};
use crate::signal::ScaleShiftPoint;
use crate::wavelet::{check_scale, WaveletComponent};

/// Sign branch of a component at scale `a`: `+1` when `omega*a + mu > 0`,
/// `-1` when negative, threshold error at exact zero.
fn branch_sign(component: WaveletComponent, omega: f64, a: f64) -> Result<f64> {
    let mu = component.modulation();
    let s = omega * a + mu;
    if s == 0.0 {
        return Err(CwtError::OnThreshold { modulation: mu, a });
    }
    Ok(s.signum())
}

/// Component transform of the harmonic: `±exp(i*omega*b)/(2*pi)`.
pub fn harmonic_component(
    component: WaveletComponent,
    omega: f64,
    p: ScaleShiftPoint,
) -> Result<Complex64> {
    check_scale(p.a)?;
    let sign = branch_sign(component, omega, p.a)?;
    Ok(Complex64::from_polar(sign / (2.0 * PI), omega * p.b))
}

/// Shift derivative of the component transform: `i*omega` times the value.
pub fn harmonic_partial_b(
    component: WaveletComponent,
    omega: f64,
    p: ScaleShiftPoint,
) -> Result<Complex64> {
    Ok(Complex64::new(0.0, omega) * harmonic_component(component, omega, p)?)
}

/// Scale derivative of the component transform: identically zero off the
/// thresholds (the closed form does not depend on `a` within a branch).
pub fn harmonic_partial_a(
    component: WaveletComponent,
    omega: f64,
    p: ScaleShiftPoint,
) -> Result<Complex64> {
    check_scale(p.a)?;
    branch_sign(component, omega, p.a)?;
    Ok(Complex64::new(0.0, 0.0))
}

/// Full transform of the harmonic: `exp(i*omega*b)/pi` when `omega` lies in
/// the open spectrum band at scale `a`, zero outside, threshold error on a
/// band edge.
pub fn harmonic_full(omega: f64, p: ScaleShiftPoint) -> Result<Complex64> {
    let s1 = branch_sign(WaveletComponent::Component1, omega, p.a)?;
    let s2 = branch_sign(WaveletComponent::Component2, omega, p.a)?;
    check_scale(p.a)?;
    if s1 > 0.0 && s2 < 0.0 {
        Ok(Complex64::from_polar(1.0 / PI, omega * p.b))
    } else {
        Ok(Complex64::new(0.0, 0.0))
    }
}

/// Closed-form line data for one component along the segment of `spec`.
///
/// The whole segment must sit inside a single sign branch; a segment whose
/// scale range straddles `a = -mu/omega` gets a branch-crossing error naming
/// the crossing scale.
pub fn harmonic_line_data(
    omega: f64,
    spec: LineSegmentSpec,
    component: WaveletComponent,
) -> Result<LineData> {
    let mu = component.modulation();
    let s_lo = omega * spec.a_min + mu;
    let s_hi = omega * spec.a_max + mu;
    if s_lo == 0.0 || s_hi == 0.0 || (s_lo > 0.0) != (s_hi > 0.0) {
        return Err(CwtError::BranchCrossing { a: -mu / omega });
    }
    LineData::build(spec, component, |a, b| {
        let p = ScaleShiftPoint { a, b };
        Ok((
            harmonic_component(component, omega, p)?,
            harmonic_partial_a(component, omega, p)?,
            harmonic_partial_b(component, omega, p)?,
        ))
    })
}
