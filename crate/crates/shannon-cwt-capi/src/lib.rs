//! C ABI over the transform and propagation routines.
//!
//! Every object crosses the boundary as an opaque handle created and freed
//! here; data comes back through out-pointers. Functions return
//! [`ScwtStatus`]; on any status other than `Ok` the out-pointers are left
//! untouched and [`scwt_last_error_message`] returns a description valid
//! on the calling thread until its next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use num_complex::Complex64;
use shannon_cwt::{
    cwt_component_pv, cwt_direct, fill_triangle, harmonic_line_data,
    line_data_from_signal, propagate_general, CwtError, LineData, LineSegmentSpec,
    QuadratureSpec, ScaleShiftPoint, Signal, TransformField, WaveletComponent,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScwtStatus {
    /// The call succeeded and its out-pointers are filled.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments were malformed: bad shapes, non-finite values,
    /// unsupported combinations.
    InvalidInput = 2,
    /// Arguments were well formed but the requested point is outside the
    /// domain where the answer exists: out of the determinacy triangle,
    /// on a spectrum threshold, or astride a branch change.
    OutOfDomain = 3,
    /// An internal invariant failed.
    Internal = 4,
}

/// Complex value crossing the boundary.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ScwtComplex {
    pub re: f64,
    pub im: f64,
}

/// Opaque signal handle.
pub struct ScwtSignal {
    inner: Signal,
}

/// Opaque handle holding both components' values and first partials
/// sampled along one oblique line segment.
pub struct ScwtLineData {
    first: LineData,
    second: LineData,
}

/// Opaque scale-shift grid of transform values.
pub struct ScwtField {
    inner: TransformField,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn classify(e: &CwtError) -> ScwtStatus {
    match e {
        CwtError::OnThreshold { .. }
        | CwtError::BranchCrossing { .. }
        | CwtError::OutOfDeterminacy { .. }
        | CwtError::SingularArgument => ScwtStatus::OutOfDomain,
        CwtError::AtNode { source, .. } => classify(source),
        _ => ScwtStatus::InvalidInput,
    }
}

fn fail(e: &CwtError) -> ScwtStatus {
    let message = CString::new(e.to_string())
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    classify(e)
}

fn fail_internal(what: &str) -> ScwtStatus {
    let message = CString::new(what).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    ScwtStatus::Internal
}

fn guarded(body: impl FnOnce() -> ScwtStatus) -> ScwtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail_internal("internal panic"),
    }
}

fn complex_out(v: Complex64) -> ScwtComplex {
    ScwtComplex { re: v.re, im: v.im }
}

/// Message for the most recent failing call on this thread. Never null;
/// empty before the first failure. The pointer stays valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn scwt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates the pure harmonic signal `exp(i omega t)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn scwt_signal_harmonic(
    omega: f64,
    out: *mut *mut ScwtSignal,
) -> ScwtStatus {
    if out.is_null() {
        return ScwtStatus::NullArgument;
    }
    guarded(|| match Signal::harmonic(omega) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(ScwtSignal { inner })) };
            ScwtStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Creates a uniformly sampled signal starting at `t0` with step `dt`.
/// `im` may be null for a real record. The samples are copied.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` readable doubles and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn scwt_signal_sampled(
    t0: f64,
    dt: f64,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut ScwtSignal,
) -> ScwtStatus {
    if re.is_null() || out.is_null() {
        return ScwtStatus::NullArgument;
    }
    let re = unsafe { slice::from_raw_parts(re, len) };
    let im = if im.is_null() {
        None
    } else {
        Some(unsafe { slice::from_raw_parts(im, len) })
    };
    guarded(|| {
        let values = re
            .iter()
            .enumerate()
            .map(|(j, &x)| Complex64::new(x, im.map_or(0.0, |im| im[j])))
            .collect();
        match Signal::sampled(t0, dt, values) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(ScwtSignal { inner })) };
                ScwtStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a signal handle. Null is ignored.
///
/// # Safety
/// `signal` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn scwt_signal_free(signal: *mut ScwtSignal) {
    if !signal.is_null() {
        drop(unsafe { Box::from_raw(signal) });
    }
}

/// Evaluates the transform at one scale-shift point by direct quadrature
/// with the default integration window.
///
/// # Safety
/// `signal` and `w` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn scwt_transform(
    signal: *const ScwtSignal,
    a: f64,
    b: f64,
    w: *mut ScwtComplex,
) -> ScwtStatus {
    if signal.is_null() || w.is_null() {
        return ScwtStatus::NullArgument;
    }
    let signal = unsafe { &*signal };
    guarded(
        || match cwt_direct(
            &signal.inner,
            &QuadratureSpec::default(),
            ScaleShiftPoint { a, b },
        ) {
            Ok(v) => {
                unsafe { *w = complex_out(v) };
                ScwtStatus::Ok
            }
            Err(e) => fail(&e),
        },
    )
}

/// Evaluates both principal-value components at one scale-shift point.
/// The transform itself is their difference.
///
/// # Safety
/// `signal`, `w1`, and `w2` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn scwt_transform_split(
    signal: *const ScwtSignal,
    a: f64,
    b: f64,
    w1: *mut ScwtComplex,
    w2: *mut ScwtComplex,
) -> ScwtStatus {
    if signal.is_null() || w1.is_null() || w2.is_null() {
        return ScwtStatus::NullArgument;
    }
    let signal = unsafe { &*signal };
    guarded(|| {
        let quad = QuadratureSpec::default();
        let p = ScaleShiftPoint { a, b };
        let first = cwt_component_pv(&signal.inner, WaveletComponent::Component1, &quad, p);
        let second = cwt_component_pv(&signal.inner, WaveletComponent::Component2, &quad, p);
        match (first, second) {
            (Ok(v1), Ok(v2)) => {
                unsafe {
                    *w1 = complex_out(v1);
                    *w2 = complex_out(v2);
                }
                ScwtStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => fail(&e),
        }
    })
}

fn build_line_data(
    spec: LineSegmentSpec,
    build: impl Fn(WaveletComponent) -> shannon_cwt::Result<LineData>,
    out: *mut *mut ScwtLineData,
) -> ScwtStatus {
    match (
        build(WaveletComponent::Component1),
        build(WaveletComponent::Component2),
    ) {
        (Ok(first), Ok(second)) => {
            debug_assert_eq!(first.spec, spec);
            unsafe { *out = Box::into_raw(Box::new(ScwtLineData { first, second })) };
            ScwtStatus::Ok
        }
        (Err(e), _) | (_, Err(e)) => fail(&e),
    }
}

/// Builds both components' line data from harmonic closed forms along the
/// segment b = intercept_c - k a, a in [a_min, a_max], with n_nodes
/// uniformly spaced nodes.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn scwt_line_data_harmonic(
    omega: f64,
    k: f64,
    intercept_c: f64,
    a_min: f64,
    a_max: f64,
    n_nodes: usize,
    out: *mut *mut ScwtLineData,
) -> ScwtStatus {
    if out.is_null() {
        return ScwtStatus::NullArgument;
    }
    guarded(|| {
        let spec = match LineSegmentSpec::new(k, intercept_c, a_min, a_max, n_nodes) {
            Ok(spec) => spec,
            Err(e) => return fail(&e),
        };
        build_line_data(spec, |c| harmonic_line_data(omega, spec, c), out)
    })
}

/// Builds both components' line data by quadrature against an arbitrary
/// signal, using the default integration window.
///
/// # Safety
/// `signal` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn scwt_line_data_sample(
    signal: *const ScwtSignal,
    k: f64,
    intercept_c: f64,
    a_min: f64,
    a_max: f64,
    n_nodes: usize,
    out: *mut *mut ScwtLineData,
) -> ScwtStatus {
    if signal.is_null() || out.is_null() {
        return ScwtStatus::NullArgument;
    }
    let signal = unsafe { &*signal };
    guarded(|| {
        let spec = match LineSegmentSpec::new(k, intercept_c, a_min, a_max, n_nodes) {
            Ok(spec) => spec,
            Err(e) => return fail(&e),
        };
        let quad = QuadratureSpec::default();
        build_line_data(
            spec,
            |c| line_data_from_signal(&signal.inner, c, &quad, spec),
            out,
        )
    })
}

/// Releases a line-data handle. Null is ignored.
///
/// # Safety
/// `ld` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn scwt_line_data_free(ld: *mut ScwtLineData) {
    if !ld.is_null() {
        drop(unsafe { Box::from_raw(ld) });
    }
}

/// Propagates the line data to one target inside its determinacy triangle
/// and returns the full transform there (first component minus second).
///
/// # Safety
/// `ld` and `w` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn scwt_propagate(
    ld: *const ScwtLineData,
    a: f64,
    b: f64,
    w: *mut ScwtComplex,
) -> ScwtStatus {
    if ld.is_null() || w.is_null() {
        return ScwtStatus::NullArgument;
    }
    let ld = unsafe { &*ld };
    guarded(|| {
        let target = ScaleShiftPoint { a, b };
        match (
            propagate_general(&ld.first, target),
            propagate_general(&ld.second, target),
        ) {
            (Ok(v1), Ok(v2)) => {
                unsafe { *w = complex_out(v1 - v2) };
                ScwtStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => fail(&e),
        }
    })
}

/// Propagates the line data onto an `na` by `nb` grid covering its
/// determinacy triangle. Grid nodes outside the triangle stay unevaluated.
///
/// # Safety
/// `ld` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn scwt_fill_triangle(
    ld: *const ScwtLineData,
    na: usize,
    nb: usize,
    out: *mut *mut ScwtField,
) -> ScwtStatus {
    if ld.is_null() || out.is_null() {
        return ScwtStatus::NullArgument;
    }
    let ld = unsafe { &*ld };
    guarded(|| match fill_triangle(&ld.first, &ld.second, na, nb) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(ScwtField { inner })) };
            ScwtStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Reports the grid shape: `na` scale nodes by `nb` shift nodes.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scwt_field_shape(
    field: *const ScwtField,
    na: *mut usize,
    nb: *mut usize,
) -> ScwtStatus {
    if field.is_null() || na.is_null() || nb.is_null() {
        return ScwtStatus::NullArgument;
    }
    let field = unsafe { &*field };
    unsafe {
        *na = field.inner.a_values.len();
        *nb = field.inner.b_values.len();
    }
    ScwtStatus::Ok
}

/// Reads grid node `(i, j)`: its scale, shift, transform value, and
/// whether the node was evaluated. Unevaluated nodes report `w = 0` with
/// `evaluated = false`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scwt_field_node(
    field: *const ScwtField,
    i: usize,
    j: usize,
    a: *mut f64,
    b: *mut f64,
    w: *mut ScwtComplex,
    evaluated: *mut bool,
) -> ScwtStatus {
    if field.is_null() || a.is_null() || b.is_null() || w.is_null() || evaluated.is_null()
    {
        return ScwtStatus::NullArgument;
    }
    let field = unsafe { &*field };
    let f = &field.inner;
    if i >= f.a_values.len() || j >= f.b_values.len() {
        return fail(&CwtError::InvalidInput {
            what: "grid index",
            why: format!(
                "({i}, {j}) outside {} by {} grid",
                f.a_values.len(),
                f.b_values.len()
            ),
        });
    }
    let ok = f.is_evaluated(i, j);
    let value = if ok {
        f.w[(i, j)]
    } else {
        Complex64::new(0.0, 0.0)
    };
    unsafe {
        *a = f.a_values[i];
        *b = f.b_values[j];
        *w = complex_out(value);
        *evaluated = ok;
    }
    ScwtStatus::Ok
}

/// Releases a field handle. Null is ignored.
///
/// # Safety
/// `field` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn scwt_field_free(field: *mut ScwtField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::f64::consts::PI;
    use std::ptr;

    fn harmonic_handle(omega: f64) -> *mut ScwtSignal {
        let mut signal = ptr::null_mut();
        let status = unsafe { scwt_signal_harmonic(omega, &mut signal) };
        assert_eq!(status, ScwtStatus::Ok);
        signal
    }

    #[test]
    fn transform_round_trip_matches_closed_form() {
        let omega = -2.0 * PI;
        let signal = harmonic_handle(omega);
        let mut w = ScwtComplex { re: 0.0, im: 0.0 };
        let status = unsafe { scwt_transform(signal, 1.2, 0.3, &mut w) };
        assert_eq!(status, ScwtStatus::Ok);
        let want = shannon_cwt::harmonic_full(
            omega,
            ScaleShiftPoint { a: 1.2, b: 0.3 },
        )
        .unwrap();
        assert!((w.re - want.re).abs() < 1e-2);
        assert!((w.im - want.im).abs() < 1e-2);
        unsafe { scwt_signal_free(signal) };
    }

    #[test]
    fn split_components_reconstruct_the_transform() {
        let signal = harmonic_handle(-2.0 * PI);
        let mut w = ScwtComplex { re: 0.0, im: 0.0 };
        let mut w1 = w;
        let mut w2 = w;
        unsafe {
            assert_eq!(
                scwt_transform(signal, 1.25, 0.0, &mut w),
                ScwtStatus::Ok
            );
            assert_eq!(
                scwt_transform_split(signal, 1.25, 0.0, &mut w1, &mut w2),
                ScwtStatus::Ok
            );
            scwt_signal_free(signal);
        }
        assert!((w.re - (w1.re - w2.re)).abs() < 1e-3);
        assert!((w.im - (w1.im - w2.im)).abs() < 1e-3);
    }

    #[test]
    fn sampled_signals_cross_the_boundary() {
        let n = 512;
        let dt = 1.0 / 32.0;
        let omega = -2.0 * PI;
        let (re, im): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|j| {
                let t = j as f64 * dt;
                ((omega * t).cos(), (omega * t).sin())
            })
            .unzip();
        let mut signal = ptr::null_mut();
        let status = unsafe {
            scwt_signal_sampled(0.0, dt, re.as_ptr(), im.as_ptr(), n, &mut signal)
        };
        assert_eq!(status, ScwtStatus::Ok);
        let mut w = ScwtComplex { re: 0.0, im: 0.0 };
        assert_eq!(
            unsafe { scwt_transform(signal, 1.25, 8.0, &mut w) },
            ScwtStatus::Ok
        );
        assert!((w.re * w.re + w.im * w.im).sqrt() > 0.2);
        unsafe { scwt_signal_free(signal) };
    }

    #[test]
    fn propagation_agrees_with_direct_evaluation() {
        // The segment stays inside (0.5, 1.5), the in-band scales for
        // omega = -2 pi, so neither component changes branch along it.
        let omega = -2.0 * PI;
        let mut ld = ptr::null_mut();
        let status = unsafe {
            scwt_line_data_harmonic(omega, 2.0, 10.0, 0.6, 1.4, 201, &mut ld)
        };
        assert_eq!(status, ScwtStatus::Ok);
        let mut w = ScwtComplex { re: 0.0, im: 0.0 };
        assert_eq!(
            unsafe { scwt_propagate(ld, 1.0, 8.5, &mut w) },
            ScwtStatus::Ok
        );
        let want =
            shannon_cwt::harmonic_full(omega, ScaleShiftPoint { a: 1.0, b: 8.5 })
                .unwrap();
        assert!((w.re - want.re).abs() < 1e-4);
        assert!((w.im - want.im).abs() < 1e-4);

        let mut field = ptr::null_mut();
        assert_eq!(
            unsafe { scwt_fill_triangle(ld, 8, 8, &mut field) },
            ScwtStatus::Ok
        );
        let (mut na, mut nb) = (0usize, 0usize);
        assert_eq!(
            unsafe { scwt_field_shape(field, &mut na, &mut nb) },
            ScwtStatus::Ok
        );
        assert_eq!((na, nb), (8, 8));
        let mut seen_evaluated = false;
        for i in 0..na {
            for j in 0..nb {
                let (mut a, mut b) = (0.0, 0.0);
                let mut node = ScwtComplex { re: 0.0, im: 0.0 };
                let mut evaluated = false;
                assert_eq!(
                    unsafe {
                        scwt_field_node(
                            field, i, j, &mut a, &mut b, &mut node, &mut evaluated,
                        )
                    },
                    ScwtStatus::Ok
                );
                seen_evaluated |= evaluated;
            }
        }
        assert!(seen_evaluated);
        unsafe {
            scwt_field_free(field);
            scwt_line_data_free(ld);
        }
    }

    #[test]
    fn failures_classify_and_describe() {
        let mut signal = ptr::null_mut();
        assert_eq!(
            unsafe { scwt_signal_harmonic(f64::NAN, &mut signal) },
            ScwtStatus::InvalidInput
        );
        let message = unsafe { CStr::from_ptr(scwt_last_error_message()) };
        assert!(!message.to_bytes().is_empty());

        assert_eq!(
            unsafe { scwt_signal_harmonic(1.0, ptr::null_mut()) },
            ScwtStatus::NullArgument
        );

        let mut ld = ptr::null_mut();
        assert_eq!(
            unsafe { scwt_line_data_harmonic(1.0, 2.0, 10.0, 1.0, 4.0, 201, &mut ld) },
            ScwtStatus::Ok
        );
        let mut w = ScwtComplex { re: 0.0, im: 0.0 };
        assert_eq!(
            unsafe { scwt_propagate(ld, 0.5, 7.0, &mut w) },
            ScwtStatus::OutOfDomain
        );
        unsafe { scwt_line_data_free(ld) };
    }

    #[test]
    fn generated_header_declares_the_api() {
        let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/shannon_cwt.h");
        let text = std::fs::read_to_string(header).expect("header generated at build");
        for symbol in [
            "scwt_signal_harmonic",
            "scwt_signal_sampled",
            "scwt_transform_split",
            "scwt_line_data_harmonic",
            "scwt_propagate",
            "scwt_fill_triangle",
            "scwt_field_node",
            "scwt_last_error_message",
            "typedef struct ScwtSignal ScwtSignal",
        ] {
            assert!(text.contains(symbol), "missing {symbol}");
        }
    }
}
