//! The complex Shannon analyzing wavelet and its two singular components.
//!
//! The wavelet is `psi(xi) = sinc(xi) * exp(-2*pi*i*xi)` with the normalized
//! sinc `sin(pi*xi)/(pi*xi)`. It splits exactly into a difference of two
//! modulated poles,
//!
//! ```text
//! psi(xi) = psi1(xi) - psi2(xi),    psi_m(xi) = i * exp(-i*mu_m*xi) / (2*pi*xi),
//! ```
//!
//! with modulation frequencies `mu_1 = 3*pi` and `mu_2 = pi`. Each component
//! obeys a first-order relation in the scale-shift plane whose coefficient is
//! `R = i*mu_m`; that coefficient drives the hyperbolic propagation in
//! [`crate::riemann`].

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CwtError, Result};

/// Below this |xi| the removable singularity of sinc is evaluated by series.
const SINC_SERIES_THRESHOLD: f64 = 1e-10;

/// One of the two singular components of the Shannon wavelet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WaveletComponent {
    /// `i * exp(-3*pi*i*xi) / (2*pi*xi)`
    Component1,
    /// `i * exp(-pi*i*xi) / (2*pi*xi)`
    Component2,
}

impl WaveletComponent {
    pub const BOTH: [WaveletComponent; 2] =
        [WaveletComponent::Component1, WaveletComponent::Component2];

    /// Modulation frequency of the component's complex exponential.
    pub fn modulation(self) -> f64 {
        match self {
            WaveletComponent::Component1 => 3.0 * PI,
            WaveletComponent::Component2 => PI,
        }
    }

    /// Coefficient `R = i * modulation` of the component's hyperbolic PDE.
    pub fn pde_coefficient(self) -> Complex64 {
        Complex64::new(0.0, self.modulation())
    }

    /// Numerator constant of the scale derivative: 3 for component 1, 1 for
    /// component 2 (the `K` in `-K/(2*pi*a^2) * integral`).
    pub fn derivative_scale(self) -> f64 {
        match self {
            WaveletComponent::Component1 => 3.0,
            WaveletComponent::Component2 => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WaveletComponent::Component1 => "component1",
            WaveletComponent::Component2 => "component2",
        }
    }
}

/// Normalized sinc `sin(pi*xi)/(pi*xi)`, with `sinc(0) = 1`.
pub fn eval_sinc(xi: f64) -> f64 {
    let p = PI * xi;
    if xi.abs() < SINC_SERIES_THRESHOLD {
        1.0 - p * p / 6.0
    } else {
        p.sin() / p
    }
}

/// The full wavelet `sinc(xi) * exp(-2*pi*i*xi)`.
pub fn eval_psi(xi: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * xi) * eval_sinc(xi)
}

/// One singular component, `i * exp(-i*mu*xi) / (2*pi*xi)`.
///
/// Errors with [`CwtError::SingularArgument`] at the pole `xi = 0`.
pub fn eval_component(component: WaveletComponent, xi: f64) -> Result<Complex64> {
    if xi == 0.0 {
        return Err(CwtError::SingularArgument);
    }
    let mu = component.modulation();
    Ok(Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -mu * xi) / (2.0 * PI * xi))
}

/// Amplitude normalization `C(a) = 1/(pi*a)` of the transform.
pub fn amplitude_norm(a: f64) -> Result<f64> {
    check_scale(a)?;
    Ok(1.0 / (PI * a))
}

/// Open support interval `(-3*pi/a, -pi/a)` of the wavelet's spectrum at
/// scale `a` (angular frequency).
pub fn spectrum_band(a: f64) -> Result<(f64, f64)> {
    check_scale(a)?;
    Ok((-3.0 * PI / a, -PI / a))
}

/// True when a harmonic of angular frequency `omega` analyzed at scale `a`
/// sits close to one of the component sign thresholds, where no pointwise
/// quadrature tolerance applies.
pub fn near_band_edge(omega: f64, a: f64, component: WaveletComponent) -> bool {
    (omega * a + component.modulation()).abs() < 0.05
}

pub(crate) fn check_scale(a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(CwtError::InvalidScale(a));
    }
    Ok(())
}
