//! Input signals and points of the scale-shift plane.

use num_complex::Complex64;

use crate::error::{CwtError, Result};
use crate::wavelet::check_scale;

/// A point `(a, b)` of the scale-shift plane; `a` is the scale, `b` the shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleShiftPoint {
    pub a: f64,
    pub b: f64,
}

impl ScaleShiftPoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_scale(a)?;
        if !b.is_finite() {
            return Err(CwtError::invalid("shift", format!("b = {b} is not finite")));
        }
        Ok(ScaleShiftPoint { a, b })
    }
}

/// An analyzed signal: either an exact complex harmonic or uniformly sampled
/// complex data interpolated linearly and treated as zero outside its range.
#[derive(Clone, Debug)]
pub enum Signal {
    /// `f(t) = exp(i*omega*t)` with angular frequency `omega`.
    Harmonic { omega: f64 },
    /// Samples `values[j]` at `t = t0 + j*dt`.
    Sampled {
        t0: f64,
        dt: f64,
        values: Vec<Complex64>,
    },
}

impl Signal {
    pub fn harmonic(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(CwtError::invalid(
                "harmonic frequency",
                format!("omega = {omega}"),
            ));
        }
        Ok(Signal::Harmonic { omega })
    }

    pub fn sampled(t0: f64, dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !t0.is_finite() {
            return Err(CwtError::invalid("sample origin", format!("t0 = {t0}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CwtError::invalid("sample spacing", format!("dt = {dt}")));
        }
        if values.len() < 2 {
            return Err(CwtError::invalid(
                "sample count",
                format!("{} samples; need at least 2", values.len()),
            ));
        }
        if let Some(bad) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(CwtError::invalid(
                "sample value",
                format!("non-finite sample at index {bad}"),
            ));
        }
        Ok(Signal::Sampled { t0, dt, values })
    }

    /// `[t_first, t_last]` for sampled signals; `None` for harmonics (whole
    /// real line).
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Signal::Harmonic { .. } => None,
            Signal::Sampled { t0, dt, values } => {
                Some((*t0, t0 + dt * (values.len() - 1) as f64))
            }
        }
    }

    /// Pointwise value; sampled signals interpolate linearly between nodes
    /// and return zero outside their range.
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Signal::Harmonic { omega } => Complex64::from_polar(1.0, omega * t),
            Signal::Sampled { t0, dt, values } => {
                let x = (t - t0) / dt;
                if x < 0.0 || x > (values.len() - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let j = (x.floor() as usize).min(values.len() - 2);
                let frac = x - j as f64;
                values[j] * (1.0 - frac) + values[j + 1] * frac
            }
        }
    }
}
