//! Riemann-method propagation of component transforms on the scale-shift
//! plane.
//!
//! Each component `u = W_m` satisfies the hyperbolic equation
//! `u_ab + (R/a) u_a = 0` with `R` the component's imaginary modulation
//! coefficient. Cauchy data (`u`, `u_a`, `u_b`) on a sloped segment
//! `b = -k a + c` determines `u` on the right triangle bounded by the
//! segment and the characteristics `a = a_max`, `b = c - k a_min`; the value
//! at a target follows from Green's identity with the kernel
//! `v = exp(R (b - b0)/a)`, which solves the conjugate equation
//! `v_ab - (R/a) v_a + (R/a^2) v = 0` and is `1` on `b = b0`.
//!
//! Targets at ordinate `b0 = c` make the kernel constant along the whole
//! line (`v = exp(-R k)`, which is `1` when `k` is an even integer). That
//! row lies outside the strict triangle (its `Q` corner sits at `a = 0`),
//! and near the corner the kernel terms cancel only analytically; both
//! propagators therefore treat the row by the reduced integrand
//! `(u_a + k u_b)/2`, in which the singular `R/a` contributions have been
//! cancelled exactly, with the data continued as constant over the short
//! head interval `[0, a_min]`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CwtError, Result};
use crate::field::{linspace, TransformField};
use crate::quadrature::QuadratureSpec;
use crate::signal::{ScaleShiftPoint, Signal};
use crate::transform::{cwt_component_pv, partial_a_component, partial_b_component};
use crate::wavelet::{check_scale, WaveletComponent};

/// Interpolation positions this close to a lattice node snap onto it, so
/// node-aligned endpoints carry exactly-zero weight for outside neighbors.
const NODE_SNAP: f64 = 1e-9;

/// Slack for recognizing `k` as an even positive integer.
const EVEN_SLOPE_TOL: f64 = 1e-12;

/// A sloped data segment `b = -k a + intercept_c` with a uniform node
/// lattice in `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegmentSpec {
    /// Slope magnitude of the line (the line descends in `b` as `a` grows).
    pub k: f64,
    /// Ordinate of the line at `a = 0`.
    pub intercept_c: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub n_nodes: usize,
}

impl LineSegmentSpec {
    pub fn new(k: f64, intercept_c: f64, a_min: f64, a_max: f64, n_nodes: usize) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(CwtError::invalid("k", "slope must be finite and positive"));
        }
        if !intercept_c.is_finite() {
            return Err(CwtError::invalid("intercept_c", "must be finite"));
        }
        if !(a_min.is_finite() && a_min > 0.0) {
            return Err(CwtError::invalid("a_min", "must be finite and positive"));
        }
        if !(a_max.is_finite() && a_max > a_min) {
            return Err(CwtError::invalid("a_max", "must exceed a_min"));
        }
        if n_nodes < 3 {
            return Err(CwtError::invalid("n_nodes", "need at least 3 nodes"));
        }
        Ok(LineSegmentSpec {
            k,
            intercept_c,
            a_min,
            a_max,
            n_nodes,
        })
    }

    /// Node spacing `(a_max - a_min)/(n_nodes - 1)`.
    pub fn spacing(&self) -> f64 {
        (self.a_max - self.a_min) / (self.n_nodes - 1) as f64
    }

    /// Scale of lattice node `j`.
    pub fn node_a(&self, j: usize) -> f64 {
        self.a_min + j as f64 * self.spacing()
    }

    /// Ordinate of the line at scale `a`.
    pub fn line_b(&self, a: f64) -> f64 {
        self.intercept_c - self.k * a
    }

    /// Lattice coordinate of scale `a` (node `j` sits at coordinate `j`).
    fn x_of(&self, a: f64) -> f64 {
        (a - self.a_min) / self.spacing()
    }

    /// Scale at lattice coordinate `x`.
    fn a_of_x(&self, x: f64) -> f64 {
        self.a_min + x * self.spacing()
    }

    /// Lattice coordinate of `a`, snapped onto a node when within rounding
    /// reach, and clamped to the segment.
    fn snap_x(&self, a: f64) -> f64 {
        let x = self.x_of(a).clamp(0.0, (self.n_nodes - 1) as f64);
        let j = x.floor();
        let frac = x - j;
        if frac < NODE_SNAP {
            j
        } else if frac > 1.0 - NODE_SNAP {
            j + 1.0
        } else {
            x
        }
    }
}

/// Cauchy data for one component along a segment: values and both first
/// partials at each lattice node.
#[derive(Debug, Clone)]
pub struct LineData {
    pub spec: LineSegmentSpec,
    pub component: WaveletComponent,
    pub u: Vec<Complex64>,
    pub u_a: Vec<Complex64>,
    pub u_b: Vec<Complex64>,
}

impl LineData {
    /// Samples `source(a, b) -> (u, u_a, u_b)` at every lattice node.
    pub fn build(
        spec: LineSegmentSpec,
        component: WaveletComponent,
        mut source: impl FnMut(f64, f64) -> Result<(Complex64, Complex64, Complex64)>,
    ) -> Result<Self> {
        let n = spec.n_nodes;
        let mut u = Vec::with_capacity(n);
        let mut u_a = Vec::with_capacity(n);
        let mut u_b = Vec::with_capacity(n);
        for j in 0..n {
            let a = spec.node_a(j);
            let b = spec.line_b(a);
            let (val, da, db) = source(a, b).map_err(|e| CwtError::AtNode {
                index: j,
                a,
                b,
                source: Box::new(e),
            })?;
            for z in [val, da, db] {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(CwtError::AtNode {
                        index: j,
                        a,
                        b,
                        source: Box::new(CwtError::invalid("line data", "non-finite sample")),
                    });
                }
            }
            u.push(val);
            u_a.push(da);
            u_b.push(db);
        }
        Ok(LineData {
            spec,
            component,
            u,
            u_a,
            u_b,
        })
    }

    /// Linear interpolation at lattice coordinate `x`. At integer `x` the
    /// off-node neighbor enters with weight exactly `0.0`.
    fn sample_x(&self, x: f64) -> (Complex64, Complex64, Complex64) {
        let j = (x.floor() as usize).min(self.spec.n_nodes - 2);
        let frac = x - j as f64;
        let lerp = |v: &[Complex64]| v[j] * (1.0 - frac) + v[j + 1] * frac;
        (lerp(&self.u), lerp(&self.u_a), lerp(&self.u_b))
    }
}

/// Builds line data for a component of a signal's transform by direct
/// quadrature: principal values for `u`, the smooth scale-derivative
/// integral for `u_a`, and the shift derivative for `u_b`.
pub fn line_data_from_signal(
    signal: &Signal,
    component: WaveletComponent,
    quad: &QuadratureSpec,
    spec: LineSegmentSpec,
) -> Result<LineData> {
    LineData::build(spec, component, |a, b| {
        let p = ScaleShiftPoint::new(a, b)?;
        Ok((
            cwt_component_pv(signal, component, quad, p)?,
            partial_a_component(signal, component, quad, p)?,
            partial_b_component(signal, component, quad, p)?,
        ))
    })
}

/// The closed region determined by a segment's Cauchy data.
#[derive(Debug, Clone, Copy)]
pub struct DeterminacyTriangle {
    pub spec: LineSegmentSpec,
}

/// Determinacy region of a segment: the right triangle bounded by the
/// segment itself, the vertical characteristic `a = a_max`, and the
/// horizontal characteristic `b = intercept_c - k a_min`.
pub fn triangle_of(spec: LineSegmentSpec) -> DeterminacyTriangle {
    DeterminacyTriangle { spec }
}

impl DeterminacyTriangle {
    /// Closed membership: `a_min <= a <= a_max` and
    /// `intercept_c - k a <= b <= intercept_c - k a_min`.
    pub fn contains(&self, a: f64, b: f64) -> bool {
        let s = &self.spec;
        s.a_min <= a && a <= s.a_max && s.line_b(a) <= b && b <= s.line_b(s.a_min)
    }

    /// Corners: the segment ends and the right-angle corner.
    pub fn vertices(&self) -> [(f64, f64); 3] {
        let s = &self.spec;
        [
            (s.a_min, s.line_b(s.a_min)),
            (s.a_max, s.line_b(s.a_max)),
            (s.a_max, s.line_b(s.a_min)),
        ]
    }
}

/// The propagation kernel anchored at a target point: `exp(R (b - b0)/a)`.
#[derive(Debug, Clone, Copy)]
pub struct RiemannKernel {
    /// Imaginary coefficient of the hyperbolic equation.
    pub r: Complex64,
    /// The anchor `(a0, b0)` the kernel propagates to.
    pub target: ScaleShiftPoint,
}

impl RiemannKernel {
    /// Kernel for a component's equation (`r` is the component's `i mu`).
    pub fn for_component(component: WaveletComponent, target: ScaleShiftPoint) -> Result<Self> {
        check_scale(target.a)?;
        Ok(RiemannKernel {
            r: component.pde_coefficient(),
            target,
        })
    }

    /// `exp(R (b - b0)/a)`; exactly `1` on the row `b = b0`.
    pub fn value(&self, p: ScaleShiftPoint) -> Result<Complex64> {
        check_scale(p.a)?;
        Ok((self.r * ((p.b - self.target.b) / p.a)).exp())
    }

    /// `(dv/da, dv/db) = (-R (b - b0)/a^2 v, R/a v)`.
    pub fn partials(&self, p: ScaleShiftPoint) -> Result<(Complex64, Complex64)> {
        let v = self.value(p)?;
        let da = self.r * (-(p.b - self.target.b) / (p.a * p.a)) * v;
        let db = self.r / p.a * v;
        Ok((da, db))
    }
}

/// Trapezoid of `g` along the lattice between coordinates `x_from` and
/// `x_to`: interpolated endpoints plus every node strictly between them.
fn path_trapezoid(
    spec: &LineSegmentSpec,
    x_from: f64,
    x_to: f64,
    mut g: impl FnMut(f64) -> Complex64,
) -> Complex64 {
    if x_from >= x_to {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut x_prev = x_from;
    let mut g_prev = g(x_from);
    let mut xj = x_from.floor() + 1.0;
    while xj < x_to {
        let gj = g(xj);
        acc += (g_prev + gj) * (0.5 * (spec.a_of_x(xj) - spec.a_of_x(x_prev)));
        x_prev = xj;
        g_prev = gj;
        xj += 1.0;
    }
    let g_end = g(x_to);
    acc += (g_prev + g_end) * (0.5 * (spec.a_of_x(x_to) - spec.a_of_x(x_prev)));
    acc
}

/// Shared evaluation for targets on the intercept row `b0 = intercept_c`.
///
/// On this row the kernel is the constant `exp(-R k)` along the whole line
/// and the kernel terms of the path integrand cancel exactly, leaving
/// `(u_a + k u_b)/2`. `Q` degenerates to `a = 0`; the data is continued as
/// constant over the head interval `[0, a_min]` and `u_Q` is read from the
/// first node. `kernel_factor` is that constant for the general route and
/// `1` for the simplified route; it cancels algebraically and is kept only
/// so the two routes remain distinct computations.
fn propagate_intercept_row(
    ld: &LineData,
    target: ScaleShiftPoint,
    kernel_factor: Complex64,
) -> Result<Complex64> {
    let spec = &ld.spec;
    if !(spec.a_min <= target.a && target.a <= spec.a_max) {
        return Err(CwtError::OutOfDeterminacy {
            a: target.a,
            b: target.b,
        });
    }
    let x_p = spec.snap_x(target.a);
    let g = |x: f64| {
        let (_, ua, ub) = ld.sample_x(x);
        (ua + spec.k * ub) * 0.5 * kernel_factor
    };
    let head = spec.a_min * g(0.0);
    let integral = head + path_trapezoid(spec, 0.0, x_p, g);
    let u_q = ld.u[0];
    let (u_p, _, _) = ld.sample_x(x_p);
    Ok(((u_p + u_q) * 0.5 * kernel_factor + integral) / kernel_factor)
}

/// Propagates one component to a target by the general path formula
///
/// `u(M) = [(uv)_P + (uv)_Q]/2
///        + (1/2) integral over QP of
///          (v u_a - u v_a) da - (v u_b - u v_b + (2R/a) u v) db`
///
/// with `db = -k da` along the line and composite trapezoid over the data
/// lattice. Targets must lie in the closed determinacy triangle; the only
/// exception is the intercept row `b0 = intercept_c` (see module docs).
pub fn propagate_general(ld: &LineData, target: ScaleShiftPoint) -> Result<Complex64> {
    let spec = &ld.spec;
    check_scale(target.a)?;
    let kr = RiemannKernel::for_component(ld.component, target)?;
    if target.b == spec.intercept_c {
        let factor = (kr.r * (-spec.k)).exp();
        return propagate_intercept_row(ld, target, factor);
    }
    if !triangle_of(*spec).contains(target.a, target.b) {
        return Err(CwtError::OutOfDeterminacy {
            a: target.a,
            b: target.b,
        });
    }
    let a_q = (spec.intercept_c - target.b) / spec.k;
    let x_q = spec.snap_x(a_q);
    let x_p = spec.snap_x(target.a);
    if x_q >= x_p {
        // Target on the segment itself: P and Q coincide.
        return Ok(ld.sample_x(x_p).0);
    }

    let half_k = 0.5 * spec.k;
    let g = |x: f64| {
        let a = spec.a_of_x(x);
        let b = spec.line_b(a);
        let (u, ua, ub) = ld.sample_x(x);
        let p = ScaleShiftPoint { a, b };
        let v = kr.value(p).expect("positive scale on segment");
        let (va, vb) = kr.partials(p).expect("positive scale on segment");
        (v * ua - u * va) * 0.5 + (v * ub - u * vb) * half_k + u * v * (spec.k * kr.r / a)
    };
    let integral = path_trapezoid(spec, x_q, x_p, g);

    let a_p = spec.a_of_x(x_p);
    let v_p = kr.value(ScaleShiftPoint {
        a: a_p,
        b: spec.line_b(a_p),
    })?;
    let (u_p, _, _) = ld.sample_x(x_p);
    let u_q = ld.sample_x(x_q).0;
    // v at Q is exactly 1: Q sits on the target's row b = b0.
    Ok((u_p * v_p + u_q) * 0.5 + integral)
}

/// Propagates by the even-slope shortcut: for `k = 2n` the kernel is `1` on
/// the path for intercept-row targets, and the formula reduces to
///
/// `u(M) = (u_P + u_Q)/2
///        + (1/2) integral of (u_a - (2Rn/a) u) da - (u_b + (R/a) u) db`.
///
/// Requires `k` to be an even positive integer and the target ordinate to
/// equal the segment intercept; elsewhere the kernel is not constant and
/// the shortcut does not apply.
pub fn propagate_simplified(ld: &LineData, target: ScaleShiftPoint) -> Result<Complex64> {
    let spec = &ld.spec;
    check_scale(target.a)?;
    let half = spec.k / 2.0;
    if !(half.round() >= 1.0 && (half - half.round()).abs() <= EVEN_SLOPE_TOL) {
        return Err(CwtError::SimplificationInapplicable(format!(
            "slope k = {} is not an even positive integer",
            spec.k
        )));
    }
    if target.b != spec.intercept_c {
        return Err(CwtError::SimplificationInapplicable(format!(
            "target ordinate {} is off the intercept row {}",
            target.b, spec.intercept_c
        )));
    }
    propagate_intercept_row(ld, target, Complex64::new(1.0, 0.0))
}

/// Fills the determinacy triangle of a shared segment from both components'
/// line data: `na` by `nb` lattice over the triangle's bounding box, inside
/// nodes propagated per component and combined as `w = w1 - w2`, outside
/// nodes left unevaluated.
pub fn fill_triangle(
    ld1: &LineData,
    ld2: &LineData,
    na: usize,
    nb: usize,
) -> Result<TransformField> {
    if ld1.spec != ld2.spec {
        return Err(CwtError::InconsistentLineData);
    }
    if ld1.component != WaveletComponent::Component1
        || ld2.component != WaveletComponent::Component2
    {
        return Err(CwtError::InconsistentLineData);
    }
    if na < 2 || nb < 2 {
        return Err(CwtError::invalid("na/nb", "triangle fill needs at least 2x2"));
    }
    let spec = &ld1.spec;
    let a_values = linspace(spec.a_min, spec.a_max, na)?;
    let b_values = linspace(spec.line_b(spec.a_max), spec.line_b(spec.a_min), nb)?;
    let tri = triangle_of(*spec);

    let rows: Vec<Vec<Option<(Complex64, Complex64)>>> = a_values
        .par_iter()
        .map(|&a| {
            b_values
                .iter()
                .map(|&b| {
                    if !tri.contains(a, b) {
                        return Ok(None);
                    }
                    let p = ScaleShiftPoint { a, b };
                    Ok(Some((
                        propagate_general(ld1, p)?,
                        propagate_general(ld2, p)?,
                    )))
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut field = TransformField::unevaluated(a_values, b_values, true)?;
    let w1 = field.w1.as_mut().expect("split allocated");
    let w2 = field.w2.as_mut().expect("split allocated");
    for (i, row) in rows.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            if let Some((v1, v2)) = cell {
                field.w[(i, j)] = v1 - v2;
                w1[(i, j)] = v1;
                w2[(i, j)] = v2;
            }
        }
    }
    Ok(field)
}
