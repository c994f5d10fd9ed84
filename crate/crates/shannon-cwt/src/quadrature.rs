//! Quadrature engines on the scaled-argument axis `xi = (t - b)/a`.
//!
//! All transform integrals run over the fixed window `[-H, H]` on a uniform
//! lattice with `nodes_per_unit_xi` nodes per unit. Two engines cover every
//! integrand in the crate:
//!
//! * plain inclusive trapezoid for smooth integrands, and
//! * a half-offset trapezoid for principal values, whose lattice
//!   `xi = (k - 1/2) h` never touches the pole at zero. The innermost
//!   `pv_exclusion_pairs` symmetric pairs are accumulated in the explicitly
//!   cancelled form `(g(s) - g(-s))/s` so the large near-pole magnitudes
//!   never enter the running sum individually.
//!
//! A cosine-squared end taper over the outer `taper_fraction` of the window
//! regularizes truncation: the wavelet components only decay like `1/xi`, so
//! a bare cutoff at `|xi| = H` leaves an oscillatory error far above the
//! lattice error. The taper is a function of global `xi` only; windows
//! clipped to a signal's support keep the same taper.

use num_complex::Complex64;

use crate::error::{CwtError, Result};

/// Lattice and window parameters shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Half-width `H` of the integration window in `xi`.
    pub halfwidth_xi: f64,
    /// Lattice density: nodes per unit of `xi` (step is its reciprocal).
    pub nodes_per_unit_xi: u32,
    /// Innermost symmetric pairs accumulated in cancelled form around the
    /// principal-value pole.
    pub pv_exclusion_pairs: u32,
    /// Fraction of the half-width occupied by the cosine-squared end taper.
    pub taper_fraction: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            halfwidth_xi: 400.0,
            nodes_per_unit_xi: 64,
            pv_exclusion_pairs: 8,
            taper_fraction: 0.125,
        }
    }
}

impl QuadratureSpec {
    /// Checks the parameters describe a usable lattice.
    pub fn validate(&self) -> Result<()> {
        if !self.halfwidth_xi.is_finite() || self.halfwidth_xi <= 0.0 {
            return Err(CwtError::invalid(
                "halfwidth_xi",
                "must be finite and positive",
            ));
        }
        if self.nodes_per_unit_xi == 0 {
            return Err(CwtError::invalid("nodes_per_unit_xi", "must be at least 1"));
        }
        if !self.taper_fraction.is_finite() || !(0.0..=0.5).contains(&self.taper_fraction) {
            return Err(CwtError::invalid("taper_fraction", "must lie in [0, 0.5]"));
        }
        if self.halfwidth_xi * f64::from(self.nodes_per_unit_xi) < 2.0 {
            return Err(CwtError::invalid(
                "halfwidth_xi * nodes_per_unit_xi",
                "window must span at least two lattice steps",
            ));
        }
        Ok(())
    }

    /// Lattice step `h = 1 / nodes_per_unit_xi`.
    pub fn step(&self) -> f64 {
        1.0 / f64::from(self.nodes_per_unit_xi)
    }

    /// Node count of the unclipped principal-value lattice,
    /// `2 * ceil(H * nodes_per_unit_xi)`.
    pub fn pv_node_count(&self) -> u64 {
        2 * (self.halfwidth_xi * f64::from(self.nodes_per_unit_xi)).ceil() as u64
    }

    /// Cosine-squared end taper: `1` on the inner window, rolling off to `0`
    /// at `|xi| = H` over the outer `taper_fraction` of the half-width.
    pub fn taper(&self, xi: f64) -> f64 {
        let h = self.halfwidth_xi;
        let edge = self.taper_fraction * h;
        let x = xi.abs();
        if x >= h {
            0.0
        } else if x <= h - edge {
            1.0
        } else {
            let c = (std::f64::consts::FRAC_PI_2 * (x - (h - edge)) / edge).cos();
            c * c
        }
    }

    /// Intersects the window `[-H, H]` with an optional support interval in
    /// `xi`; errors when the intersection is empty.
    pub(crate) fn clip_window(&self, support_xi: Option<(f64, f64)>) -> Result<(f64, f64)> {
        let mut lo = -self.halfwidth_xi;
        let mut hi = self.halfwidth_xi;
        if let Some((s_lo, s_hi)) = support_xi {
            lo = lo.max(s_lo);
            hi = hi.min(s_hi);
        }
        if !(lo < hi) {
            return Err(CwtError::InsufficientSupport { lo, hi });
        }
        Ok((lo, hi))
    }
}

/// Inclusive trapezoid of `g` over `[lo, hi]` with step at most `step_target`.
pub(crate) fn trapezoid(
    lo: f64,
    hi: f64,
    step_target: f64,
    mut g: impl FnMut(f64) -> Complex64,
) -> Complex64 {
    let n = ((hi - lo) / step_target).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let mut acc = 0.5 * (g(lo) + g(hi));
    for j in 1..n {
        acc += g(lo + j as f64 * h);
    }
    acc * h
}

/// Principal value of `g(xi)/xi` over the clipped window `[lo, hi]` on the
/// global half-offset lattice `xi = (k - 1/2) h`.
///
/// The lattice is uniform with step `h` and holds no node at the pole; node
/// weights are trapezoid weights (halved at the two window ends). When the
/// window straddles the pole, the innermost symmetric pairs are summed as
/// `(g(s) - g(-s))/s`, which is an exact regrouping of the same trapezoid
/// sum. Every retained node is evaluated exactly once.
pub(crate) fn pv_half_offset(
    spec: &QuadratureSpec,
    lo: f64,
    hi: f64,
    mut g: impl FnMut(f64) -> Complex64,
) -> Result<Complex64> {
    let h = spec.step();
    let k_lo = (lo / h + 0.5).ceil() as i64;
    let k_hi = (hi / h + 0.5).floor() as i64;
    if k_hi < k_lo + 1 {
        return Err(CwtError::InsufficientSupport { lo, hi });
    }
    let node = |k: i64| (k as f64 - 0.5) * h;
    let right = k_hi.max(0);
    let left = (1 - k_lo).max(0);
    // Pairing may consume the window-edge nodes: symmetric cancellation
    // near the pole outweighs the half-weight edge trim they would get
    // in the plain sum.
    let pairs = if right >= 1 && left >= 1 {
        i64::from(spec.pv_exclusion_pairs).min(right).min(left)
    } else {
        0
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..=pairs {
        let s = node(j);
        acc += (g(s) - g(-s)) / s;
    }
    for k in k_lo..=k_hi {
        if pairs > 0 && k >= 1 - pairs && k <= pairs {
            continue;
        }
        let s = node(k);
        let w = if k == k_lo || k == k_hi { 0.5 } else { 1.0 };
        acc += w * g(s) / s;
    }
    Ok(acc * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::cell::Cell;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn default_lattice_matches_documented_size() {
        let spec = QuadratureSpec::default();
        assert_eq!(spec.pv_node_count(), 51_200);
        assert_abs_diff_eq!(spec.step(), 1.0 / 64.0, epsilon = 0.0);
    }

    #[test]
    fn validate_rejects_bad_parameters() {
        let ok = QuadratureSpec::default();
        assert!(ok.validate().is_ok());
        for bad in [
            QuadratureSpec { halfwidth_xi: 0.0, ..ok },
            QuadratureSpec { halfwidth_xi: f64::NAN, ..ok },
            QuadratureSpec { nodes_per_unit_xi: 0, ..ok },
            QuadratureSpec { taper_fraction: 0.6, ..ok },
            QuadratureSpec { taper_fraction: -0.1, ..ok },
            QuadratureSpec { halfwidth_xi: 0.5, nodes_per_unit_xi: 1, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn taper_profile() {
        let spec = QuadratureSpec::default();
        let h = spec.halfwidth_xi;
        let edge = spec.taper_fraction * h;
        assert_eq!(spec.taper(0.0), 1.0);
        assert_eq!(spec.taper(h - edge), 1.0);
        assert_eq!(spec.taper(-(h - edge)), 1.0);
        assert_abs_diff_eq!(spec.taper(h), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(spec.taper(h - edge / 2.0), 0.5, epsilon = 1e-15);
        assert_eq!(spec.taper(h + 1.0), 0.0);
        for xi in [3.0, 151.7, 399.9] {
            assert_eq!(spec.taper(xi), spec.taper(-xi));
        }
    }

    #[test]
    fn taper_disabled_at_zero_fraction() {
        let spec = QuadratureSpec {
            taper_fraction: 0.0,
            ..QuadratureSpec::default()
        };
        assert_eq!(spec.taper(399.999_999), 1.0);
        assert_eq!(spec.taper(400.0), 0.0);
    }

    #[test]
    fn clip_window_intersects_and_rejects_empty() {
        let spec = QuadratureSpec::default();
        assert_eq!(spec.clip_window(None).unwrap(), (-400.0, 400.0));
        assert_eq!(spec.clip_window(Some((-3.0, 7.0))).unwrap(), (-3.0, 7.0));
        assert_eq!(
            spec.clip_window(Some((-900.0, 2.0))).unwrap(),
            (-400.0, 2.0)
        );
        assert!(matches!(
            spec.clip_window(Some((500.0, 600.0))),
            Err(CwtError::InsufficientSupport { .. })
        ));
    }

    #[test]
    fn trapezoid_integrates_polynomial() {
        // Quadratic over [0, 1]; composite trapezoid error is h^2/12 * f''.
        let v = trapezoid(0.0, 1.0, 1e-3, |x| re(x * x));
        assert_abs_diff_eq!(v.re, 1.0 / 3.0, epsilon = 1e-6);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn trapezoid_handles_tiny_window() {
        let v = trapezoid(0.0, 1e-6, 1.0, |_| re(2.0));
        assert_abs_diff_eq!(v.re, 2e-6, epsilon = 1e-18);
    }

    #[test]
    fn pv_lattice_covers_window_and_visits_each_node_once() {
        let spec = QuadratureSpec::default();
        let calls = Cell::new(0u64);
        let v = pv_half_offset(&spec, -400.0, 400.0, |_| {
            calls.set(calls.get() + 1);
            re(0.0)
        })
        .unwrap();
        assert_eq!(calls.get(), spec.pv_node_count());
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pv_even_numerator_cancels() {
        let spec = QuadratureSpec {
            halfwidth_xi: 1.0,
            nodes_per_unit_xi: 1024,
            ..QuadratureSpec::default()
        };
        // g even means g/xi is odd: the principal value is zero.
        let v = pv_half_offset(&spec, -1.0, 1.0, |x| re((3.0 * x).cos())).unwrap();
        assert!(v.norm() < 1e-9, "|v| = {}", v.norm());
    }

    #[test]
    fn pv_converges_to_sine_integral() {
        // PV of exp(i*l*x)/x over [-L, L] equals 2i Si(l*L).
        let lambda = 3.0;
        let reference = 2.0 * trapezoid(0.0, lambda, 1e-5, |u| {
            re(if u < 1e-9 { 1.0 } else { u.sin() / u })
        });
        let err = |n: u32| {
            let spec = QuadratureSpec {
                halfwidth_xi: 1.0,
                nodes_per_unit_xi: n,
                ..QuadratureSpec::default()
            };
            let v = pv_half_offset(&spec, -1.0, 1.0, |x| {
                Complex64::from_polar(1.0, lambda * x)
            })
            .unwrap();
            (v - Complex64::new(0.0, reference.re)).norm()
        };
        let coarse = err(512);
        let fine = err(8192);
        assert!(coarse < 4e-3, "coarse error {coarse}");
        assert!(fine < coarse / 4.0, "no convergence: {coarse} -> {fine}");
    }

    #[test]
    fn pv_pairing_is_pure_regrouping() {
        let g = |x: f64| Complex64::from_polar(1.0, 2.0 * x) * (1.0 + 0.1 * x);
        let with = QuadratureSpec {
            halfwidth_xi: 2.0,
            nodes_per_unit_xi: 256,
            pv_exclusion_pairs: 8,
            ..QuadratureSpec::default()
        };
        let without = QuadratureSpec {
            pv_exclusion_pairs: 0,
            ..with
        };
        let a = pv_half_offset(&with, -2.0, 2.0, g).unwrap();
        let b = pv_half_offset(&without, -2.0, 2.0, g).unwrap();
        assert!((a - b).norm() < 1e-11, "regrouping changed value: {}", (a - b).norm());
    }

    #[test]
    fn pv_one_sided_window_is_plain_quadrature() {
        let spec = QuadratureSpec {
            halfwidth_xi: 8.0,
            nodes_per_unit_xi: 512,
            ..QuadratureSpec::default()
        };
        // Window [2, 3] excludes the pole: integral of 1/x is ln(3/2).
        // The global lattice trims up to half a step at each window edge,
        // so the tolerance is O(h), not the trapezoid O(h^2).
        let v = pv_half_offset(&spec, 2.0, 3.0, |_| re(1.0)).unwrap();
        assert_abs_diff_eq!(v.re, (1.5f64).ln(), epsilon = 2e-3);
    }

    #[test]
    fn pv_rejects_window_without_nodes() {
        let spec = QuadratureSpec::default();
        let err = pv_half_offset(&spec, 3.0, 3.001, |_| re(1.0)).unwrap_err();
        assert!(matches!(err, CwtError::InsufficientSupport { .. }));
    }

    #[test]
    fn pv_shrinks_pairing_near_window_edge() {
        // Pole barely inside the window: pairing must clamp, not panic,
        // and the value must still approximate the principal value.
        let spec = QuadratureSpec {
            halfwidth_xi: 4.0,
            nodes_per_unit_xi: 1024,
            pv_exclusion_pairs: 8,
            ..QuadratureSpec::default()
        };
        // PV over [-d, L] of 1/x is ln(L/d).
        let d = 3.0 / 1024.0;
        let v = pv_half_offset(&spec, -d, 1.0, |_| re(1.0)).unwrap();
        assert_abs_diff_eq!(v.re, (1.0 / d).ln(), epsilon = 0.05);
    }
}
