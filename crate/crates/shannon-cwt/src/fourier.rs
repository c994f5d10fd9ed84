//! Spectral evaluation of the full transform for sampled signals.
//!
//! The wavelet's spectrum at scale `a` is the indicator of the open band
//! `a * omega` in `(-3 pi, -pi)` (up to the `1/pi` normalization), so the
//! transform along the sample lattice is a band-pass: forward DFT, zero the
//! bins outside the band, inverse DFT, divide by `pi`. Discrete frequencies
//! take the signed convention `k` in `(-N/2, N/2]`; a bin landing exactly on
//! a band edge is excluded by the strict inequalities. Requested shifts must
//! sit on sample instants, since the DFT only produces values there.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{CwtError, Result};
use crate::field::{validate_axis, TransformField};
use crate::signal::Signal;
use crate::wavelet::check_scale;

/// Relative slack when matching a requested shift to a sample instant.
const LATTICE_MATCH_RTOL: f64 = 1e-9;

/// Full transform over a grid, by band-passing the sampled spectrum.
pub fn fourier_grid(
    signal: &Signal,
    a_values: &[f64],
    b_values: &[f64],
) -> Result<TransformField> {
    let Signal::Sampled { t0, dt, values } = signal else {
        return Err(CwtError::UnsupportedInput(
            "spectral evaluation requires a sampled signal",
        ));
    };
    validate_axis("a_values", a_values)?;
    validate_axis("b_values", b_values)?;
    for &a in a_values {
        check_scale(a)?;
    }
    let n = values.len();
    let column_sample: Vec<usize> = b_values
        .iter()
        .map(|&b| {
            let x = (b - t0) / dt;
            let m = x.round();
            if (x - m).abs() > LATTICE_MATCH_RTOL * x.abs().max(1.0) {
                return Err(CwtError::invalid(
                    "b_values",
                    "shifts must lie on sample instants for the spectral method",
                ));
            }
            if m < 0.0 || m >= n as f64 {
                return Err(CwtError::invalid(
                    "b_values",
                    "shifts must lie inside the sampled record",
                ));
            }
            Ok(m as usize)
        })
        .collect::<Result<_>>()?;

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut spectrum = values.clone();
    forward.process(&mut spectrum);

    let mut field = TransformField::unevaluated(a_values.to_vec(), b_values.to_vec(), false)?;
    let mut masked = vec![Complex64::new(0.0, 0.0); n];
    for (i, &a) in a_values.iter().enumerate() {
        for (k, slot) in masked.iter_mut().enumerate() {
            let signed_k = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
            let scaled = a * 2.0 * PI * signed_k / (n as f64 * dt);
            *slot = if -3.0 * PI < scaled && scaled < -PI {
                spectrum[k]
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        inverse.process(&mut masked);
        let norm = 1.0 / (PI * n as f64);
        for (j, &m) in column_sample.iter().enumerate() {
            field.w[(i, j)] = masked[m] * norm;
        }
    }
    Ok(field)
}
