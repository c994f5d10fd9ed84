//! Continuous wavelet transform with the complex Shannon wavelet, computed
//! two independent ways.
//!
//! The direct route evaluates the transform integral by quadrature, either
//! against the whole wavelet or split into two principal-value components
//! whose difference reconstructs it; a spectral route multiplies the
//! signal's discrete spectrum by the wavelet's band indicator. The second
//! route never integrates against the wavelet at all: each component
//! satisfies a hyperbolic equation in the scale-shift plane, so values and
//! first partials sampled along one oblique line segment determine the
//! component everywhere in that segment's determinacy triangle, and
//! [`riemann`] carries them there along characteristics.
//!
//! [`verify`] closes the loop: finite-difference residuals confirm fields
//! satisfy the governing equation, the propagation kernel satisfies its
//! conjugate, and [`verify::compare_fields`] measures route-against-route
//! agreement. [`oracle`] supplies harmonic closed forms both routes must
//! reproduce.

pub mod cli;
pub mod error;
pub mod field;
pub mod fourier;
pub mod io;
pub mod oracle;
pub mod quadrature;
pub mod riemann;
pub mod signal;
pub mod transform;
pub mod verify;
pub mod wavelet;

pub use error::{CwtError, Result};
pub use field::{linspace, TransformField};
pub use fourier::fourier_grid;
pub use oracle::{
    harmonic_component, harmonic_full, harmonic_line_data, harmonic_partial_a,
    harmonic_partial_b,
};
pub use quadrature::QuadratureSpec;
pub use riemann::{
    fill_triangle, line_data_from_signal, propagate_general, propagate_simplified,
    triangle_of, DeterminacyTriangle, LineData, LineSegmentSpec, RiemannKernel,
};
pub use signal::{ScaleShiftPoint, Signal};
pub use transform::{
    cwt_component_pv, cwt_direct, evaluate_grid, partial_a_component,
    partial_b_component, GridFill, GridMethod, NodeFailure,
};
pub use verify::{
    compare_fields, op_count_compare, residual_conjugate, residual_hyperbolic,
    OpCountReport, ResidualReport,
};
pub use wavelet::WaveletComponent;
