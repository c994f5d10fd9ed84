//! File formats: signal and line-data CSV, transform-grid CSV, and PPM
//! heatmaps.
//!
//! Floats are written in Rust's shortest round-trip decimal form, so
//! identical inputs produce byte-identical files and finite values survive
//! a write/read cycle bitwise. Unevaluated grid nodes are written as empty
//! cells. Sample instants are regenerated as `t0 + j dt`; the reader
//! recovers the spacing from the first pair of rows and enforces uniformity
//! to a relative 1e-9.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{CwtError, Result};
use crate::field::TransformField;
use crate::riemann::{LineData, LineSegmentSpec};
use crate::signal::Signal;
use crate::wavelet::WaveletComponent;

const SIGNAL_HEADER: &str = "t,re,im";
const FIELD_HEADER: &str = "a,b,w_re,w_im,w1_re,w1_im,w2_re,w2_im";
const LINE_DATA_HEADER: &str = "a,b,component,u_re,u_im,ua_re,ua_im,ub_re,ub_im";

/// Relative slack when checking uniform spacing of parsed lattices.
const SPACING_RTOL: f64 = 1e-9;

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn format_err(path: &Path, line: usize, why: impl Into<String>) -> CwtError {
    CwtError::Format {
        path: path_str(path),
        line,
        why: why.into(),
    }
}

fn parse_field(path: &Path, line: usize, name: &str, raw: &str) -> Result<f64> {
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| format_err(path, line, format!("cannot parse {name} from {raw:?}")))?;
    if !value.is_finite() {
        return Err(format_err(path, line, format!("{name} is not finite")));
    }
    Ok(value)
}

/// Reads a sampled signal from CSV columns `t,re,im` with uniformly spaced
/// time stamps.
pub fn read_signal_csv(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == SIGNAL_HEADER => {}
        Some((_, header)) => {
            return Err(format_err(
                path,
                1,
                format!("expected header {SIGNAL_HEADER:?}, found {header:?}"),
            ))
        }
        None => return Err(format_err(path, 1, "empty file")),
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(format_err(
                path,
                line,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        times.push((parse_field(path, line, "t", fields[0])?, line));
        values.push(Complex64::new(
            parse_field(path, line, "re", fields[1])?,
            parse_field(path, line, "im", fields[2])?,
        ));
    }
    if times.len() < 2 {
        return Err(format_err(
            path,
            times.last().map_or(1, |&(_, line)| line),
            "need at least 2 samples to fix the spacing",
        ));
    }
    let t0 = times[0].0;
    let dt = times[1].0 - t0;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(format_err(path, times[1].1, "time stamps must increase"));
    }
    for w in times.windows(2).skip(1) {
        let step = w[1].0 - w[0].0;
        if (step - dt).abs() > SPACING_RTOL * dt.abs() {
            return Err(CwtError::NonUniformSpacing {
                path: path_str(path),
                line: w[1].1,
                step,
                expected: dt,
            });
        }
    }
    Signal::sampled(t0, dt, values)
}

/// Writes a sampled signal as CSV columns `t,re,im`.
pub fn write_signal_csv(path: impl AsRef<Path>, signal: &Signal) -> Result<()> {
    fs::write(path, signal_csv_bytes(signal)?)?;
    Ok(())
}

/// CSV bytes for a sampled signal; harmonic signals have no file form.
pub fn signal_csv_bytes(signal: &Signal) -> Result<Vec<u8>> {
    let Signal::Sampled { t0, dt, values } = signal else {
        return Err(CwtError::UnsupportedInput(
            "harmonic signals have no sample rows to write",
        ));
    };
    let mut out = String::with_capacity(24 * values.len() + 16);
    out.push_str(SIGNAL_HEADER);
    out.push('\n');
    for (j, v) in values.iter().enumerate() {
        let t = t0 + j as f64 * dt;
        writeln!(out, "{},{},{}", t, v.re, v.im).expect("string write");
    }
    Ok(out.into_bytes())
}

fn push_complex_cells(out: &mut String, z: Complex64) {
    if z.re.is_finite() && z.im.is_finite() {
        write!(out, ",{},{}", z.re, z.im).expect("string write");
    } else {
        out.push_str(",,");
    }
}

/// Grid CSV bytes: one row per `(a, b)` node, `b` varying fastest. The
/// split columns stay empty unless the field carries components, and every
/// cell of an unevaluated node is empty. `with_inside` appends the 0/1
/// `inside` column used by triangle fills.
pub fn field_csv_bytes(field: &TransformField, with_inside: bool) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(FIELD_HEADER);
    if with_inside {
        out.push_str(",inside");
    }
    out.push('\n');
    for (i, &a) in field.a_values.iter().enumerate() {
        for (j, &b) in field.b_values.iter().enumerate() {
            write!(out, "{},{}", a, b).expect("string write");
            push_complex_cells(&mut out, field.w[(i, j)]);
            match (&field.w1, &field.w2) {
                (Some(w1), Some(w2)) => {
                    push_complex_cells(&mut out, w1[(i, j)]);
                    push_complex_cells(&mut out, w2[(i, j)]);
                }
                _ => out.push_str(",,,,"),
            }
            if with_inside {
                out.push_str(if field.is_evaluated(i, j) { ",1" } else { ",0" });
            }
            out.push('\n');
        }
    }
    out.into_bytes()
}

/// Writes a transform grid as CSV (no `inside` column).
pub fn write_field_csv(path: impl AsRef<Path>, field: &TransformField) -> Result<()> {
    fs::write(path, field_csv_bytes(field, false))?;
    Ok(())
}

/// Writes a triangle fill as CSV with the `inside` column.
pub fn write_triangle_csv(path: impl AsRef<Path>, field: &TransformField) -> Result<()> {
    fs::write(path, field_csv_bytes(field, true))?;
    Ok(())
}

/// Line-data CSV bytes: all nodes of the first component, then all nodes of
/// the second, sharing one segment.
pub fn line_data_csv_bytes(ld1: &LineData, ld2: &LineData) -> Result<Vec<u8>> {
    if ld1.spec != ld2.spec
        || ld1.component != WaveletComponent::Component1
        || ld2.component != WaveletComponent::Component2
    {
        return Err(CwtError::InconsistentLineData);
    }
    let mut out = String::new();
    out.push_str(LINE_DATA_HEADER);
    out.push('\n');
    for (tag, ld) in [("1", ld1), ("2", ld2)] {
        let spec = &ld.spec;
        for j in 0..spec.n_nodes {
            let a = spec.node_a(j);
            let b = spec.line_b(a);
            write!(out, "{},{},{}", a, b, tag).expect("string write");
            for z in [ld.u[j], ld.u_a[j], ld.u_b[j]] {
                write!(out, ",{},{}", z.re, z.im).expect("string write");
            }
            out.push('\n');
        }
    }
    Ok(out.into_bytes())
}

/// Writes both components' line data into one CSV.
pub fn write_line_data_csv(
    path: impl AsRef<Path>,
    ld1: &LineData,
    ld2: &LineData,
) -> Result<()> {
    fs::write(path, line_data_csv_bytes(ld1, ld2)?)?;
    Ok(())
}

struct RawLineRows {
    a: Vec<f64>,
    b: Vec<f64>,
    lines: Vec<usize>,
    u: Vec<Complex64>,
    u_a: Vec<Complex64>,
    u_b: Vec<Complex64>,
}

impl RawLineRows {
    fn new() -> Self {
        RawLineRows {
            a: Vec::new(),
            b: Vec::new(),
            lines: Vec::new(),
            u: Vec::new(),
            u_a: Vec::new(),
            u_b: Vec::new(),
        }
    }

    /// Recovers the segment from the node rows: slope and intercept from
    /// the end rows, uniform spacing and collinearity enforced row-wise.
    fn into_line_data(self, path: &Path, component: WaveletComponent) -> Result<LineData> {
        let n = self.a.len();
        if n < 3 {
            return Err(format_err(
                path,
                self.lines.last().copied().unwrap_or(1),
                format!("component {} needs at least 3 nodes", component.label()),
            ));
        }
        let spacing = (self.a[n - 1] - self.a[0]) / (n - 1) as f64;
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(format_err(path, self.lines[n - 1], "scales must increase"));
        }
        for j in 1..n {
            let step = self.a[j] - self.a[j - 1];
            if (step - spacing).abs() > SPACING_RTOL * spacing {
                return Err(CwtError::NonUniformSpacing {
                    path: path_str(path),
                    line: self.lines[j],
                    step,
                    expected: spacing,
                });
            }
        }
        let k = (self.b[0] - self.b[n - 1]) / (self.a[n - 1] - self.a[0]);
        let intercept = self.b[0] + k * self.a[0];
        let spec = LineSegmentSpec::new(k, intercept, self.a[0], self.a[n - 1], n)?;
        for j in 0..n {
            let expected = spec.line_b(self.a[j]);
            if (self.b[j] - expected).abs() > SPACING_RTOL * (1.0 + intercept.abs()) {
                return Err(format_err(
                    path,
                    self.lines[j],
                    format!("ordinate {} is off the segment line", self.b[j]),
                ));
            }
        }
        Ok(LineData {
            spec,
            component,
            u: self.u,
            u_a: self.u_a,
            u_b: self.u_b,
        })
    }
}

/// Reads both components' line data from one CSV written by
/// `write_line_data_csv` (rows may interleave components).
pub fn read_line_data_csv(path: impl AsRef<Path>) -> Result<(LineData, LineData)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == LINE_DATA_HEADER => {}
        Some((_, header)) => {
            return Err(format_err(
                path,
                1,
                format!("expected header {LINE_DATA_HEADER:?}, found {header:?}"),
            ))
        }
        None => return Err(format_err(path, 1, "empty file")),
    }

    let mut raw1 = RawLineRows::new();
    let mut raw2 = RawLineRows::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 9 {
            return Err(format_err(
                path,
                line,
                format!("expected 9 fields, found {}", fields.len()),
            ));
        }
        let raw = match fields[2].trim() {
            "1" => &mut raw1,
            "2" => &mut raw2,
            other => {
                return Err(format_err(
                    path,
                    line,
                    format!("component must be 1 or 2, found {other:?}"),
                ))
            }
        };
        raw.a.push(parse_field(path, line, "a", fields[0])?);
        raw.b.push(parse_field(path, line, "b", fields[1])?);
        raw.lines.push(line);
        raw.u.push(Complex64::new(
            parse_field(path, line, "u_re", fields[3])?,
            parse_field(path, line, "u_im", fields[4])?,
        ));
        raw.u_a.push(Complex64::new(
            parse_field(path, line, "ua_re", fields[5])?,
            parse_field(path, line, "ua_im", fields[6])?,
        ));
        raw.u_b.push(Complex64::new(
            parse_field(path, line, "ub_re", fields[7])?,
            parse_field(path, line, "ub_im", fields[8])?,
        ));
    }
    let ld1 = raw1.into_line_data(path, WaveletComponent::Component1)?;
    let ld2 = raw2.into_line_data(path, WaveletComponent::Component2)?;
    if ld1.spec != ld2.spec {
        return Err(CwtError::InconsistentLineData);
    }
    Ok((ld1, ld2))
}

/// Five-stop color ramp from black through purple, crimson, and orange to
/// white; `t` is clamped to [0, 1].
fn ramp(t: f64) -> [u8; 3] {
    const STOPS: [[f64; 3]; 5] = [
        [0.0, 0.0, 0.0],
        [64.0, 0.0, 128.0],
        [192.0, 32.0, 64.0],
        [255.0, 160.0, 32.0],
        [255.0, 255.0, 255.0],
    ];
    let s = t.clamp(0.0, 1.0) * 4.0;
    let i = (s.floor() as usize).min(3);
    let frac = s - i as f64;
    let mut px = [0u8; 3];
    for c in 0..3 {
        px[c] = (STOPS[i][c] + (STOPS[i + 1][c] - STOPS[i][c]) * frac).round() as u8;
    }
    px
}

/// PPM P6 bytes for `|w|`: magnitudes map linearly from 0 to the field
/// maximum onto the ramp; unevaluated nodes render black. Image rows follow
/// the `a` axis top to bottom, columns the `b` axis left to right.
pub fn heatmap_ppm_bytes(field: &TransformField) -> Vec<u8> {
    let height = field.a_values.len();
    let width = field.b_values.len();
    let mut max = 0.0f64;
    for i in 0..height {
        for j in 0..width {
            if field.is_evaluated(i, j) {
                max = max.max(field.w[(i, j)].norm());
            }
        }
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(3 * width * height);
    for i in 0..height {
        for j in 0..width {
            let px = if field.is_evaluated(i, j) && max > 0.0 {
                ramp(field.w[(i, j)].norm() / max)
            } else {
                [0, 0, 0]
            };
            out.extend_from_slice(&px);
        }
    }
    out
}

/// Writes the `|w|` heatmap as binary PPM.
pub fn write_heatmap_ppm(path: impl AsRef<Path>, field: &TransformField) -> Result<()> {
    fs::write(path, heatmap_ppm_bytes(field))?;
    Ok(())
}
