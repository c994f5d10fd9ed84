//! Command-line front end: grid transforms, Riemann propagation, and the
//! verification battery with its JSON report.
//!
//! Exit codes: 0 success, 1 input or configuration error, 2 verification
//! failure. Output files are computed in full before anything touches the
//! filesystem, and a failed write removes files already written, so a
//! non-zero exit never leaves partial outputs behind.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CwtError, Result};
use crate::field::{linspace, TransformField};
use crate::io;
use crate::oracle;
use crate::quadrature::QuadratureSpec;
use crate::riemann::{
    fill_triangle, propagate_simplified, LineData, LineSegmentSpec,
};
use crate::signal::{ScaleShiftPoint, Signal};
use crate::transform::{evaluate_grid, GridFill, GridMethod};
use crate::verify::{
    compare_fields, op_count_compare, residual_conjugate, residual_hyperbolic,
    ResidualReport,
};
use crate::riemann::RiemannKernel;
use crate::wavelet::WaveletComponent::{Component1, Component2};

/// Conjugate-equation residual bound at h = 1e-3; rescaled by (h/1e-3)^2
/// for other steps since the stencils are order 2.
const CONJUGATE_RESIDUAL_TOL: f64 = 1e-4;
/// Reference step the conjugate tolerance is quoted at.
const CONJUGATE_TOL_STEP: f64 = 1e-3;
/// Acceptable range for the coarse/fine residual ratio when h halves.
const ORDER_RATIO_LO: f64 = 3.0;
const ORDER_RATIO_HI: f64 = 5.0;
/// The closed-form harmonic field is constant in scale, so its residual is
/// exact zero up to rounding.
const HARMONIC_RESIDUAL_TOL: f64 = 1e-10;
/// The kernel is identically 1 on the target row; no rounding enters.
const KERNEL_ROW_TOL: f64 = 0.0;
/// Kernel constancy along an even-slope line through the target ordinate.
const KERNEL_CONSTANCY_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "scwt",
    version,
    about = "Continuous wavelet transform with the complex Shannon wavelet",
    long_about = "Evaluates the transform by direct quadrature, spectral \
                  multiplication, or principal-value component splitting, \
                  and propagates component data across the scale-shift \
                  plane along characteristics.\n\nAxes are written \
                  min:max:count with inclusive endpoints."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the transform on a scale-shift grid and write it as CSV.
    Transform(TransformArgs),
    /// Propagate line data across its determinacy triangle and write the
    /// fill as CSV.
    Propagate(PropagateArgs),
    /// Run the residual and boundary check battery and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct QuadArgs {
    /// Half-width of the integration window in wavelet argument units.
    #[arg(long, default_value_t = 400.0)]
    halfwidth: f64,
    /// Quadrature nodes per unit of the wavelet argument.
    #[arg(long = "nodes-per-unit", default_value_t = 64)]
    nodes_per_unit: u32,
    /// Innermost node pairs accumulated as symmetric differences around
    /// the principal-value point.
    #[arg(long = "pv-pairs", default_value_t = 8)]
    pv_pairs: u32,
    /// Fraction of the window tapered to zero at each end.
    #[arg(long, default_value_t = 0.125)]
    taper: f64,
}

impl QuadArgs {
    fn to_spec(&self) -> Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            halfwidth_xi: self.halfwidth,
            nodes_per_unit_xi: self.nodes_per_unit,
            pv_exclusion_pairs: self.pv_pairs,
            taper_fraction: self.taper,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Principal-value component split (fills w1, w2, and w = w1 - w2).
    PvSplit,
    /// Whole-wavelet time-domain quadrature.
    DirectTime,
    /// Spectral multiplication over the sample lattice (sampled signals).
    Fourier,
}

impl From<MethodArg> for GridMethod {
    fn from(m: MethodArg) -> GridMethod {
        match m {
            MethodArg::PvSplit => GridMethod::PvSplit,
            MethodArg::DirectTime => GridMethod::DirectTime,
            MethodArg::Fourier => GridMethod::Fourier,
        }
    }
}

#[derive(Args)]
struct TransformArgs {
    /// Signal descriptor: harmonic:<omega> or csv:<path>.
    #[arg(long)]
    signal: String,
    #[arg(long, value_enum, default_value_t = MethodArg::PvSplit)]
    method: MethodArg,
    /// Scale axis as min:max:count.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Shift axis as min:max:count.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional PPM heatmap of |w|.
    #[arg(long)]
    heatmap: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct PropagateArgs {
    /// Harmonic source for closed-form line data: harmonic:<omega>.
    #[arg(long)]
    signal: Option<String>,
    /// Previously written line-data CSV (alternative to --signal).
    #[arg(long = "line-data")]
    line_data: Option<PathBuf>,
    /// Segment slope (with --signal).
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Segment intercept at a = 0 (with --signal).
    #[arg(long, allow_negative_numbers = true)]
    intercept: Option<f64>,
    /// Segment scale lattice as min:max:count (with --signal).
    #[arg(long = "line-a", allow_hyphen_values = true)]
    line_a: Option<String>,
    /// Scale nodes of the output grid.
    #[arg(long, default_value_t = 16)]
    na: usize,
    /// Shift nodes of the output grid.
    #[arg(long, default_value_t = 16)]
    nb: usize,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional PPM heatmap of |w|.
    #[arg(long)]
    heatmap: Option<PathBuf>,
    /// Propagate along the intercept row by the even-slope shortcut
    /// instead of filling the triangle.
    #[arg(long)]
    simplified: bool,
    /// Compare the propagated values against a direct principal-value run
    /// and print the difference statistics.
    #[arg(long)]
    check: bool,
    /// Also write the line data used as CSV.
    #[arg(long = "dump-line-data")]
    dump_line_data: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Harmonic frequency for the closed-form field checks.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    /// Finite-difference step for the residual checks.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// Grid size assumed by the operation-count model.
    #[arg(long, default_value_t = 4096)]
    targets: u64,
    /// Line nodes assumed by the operation-count model.
    #[arg(long = "ld-nodes", default_value_t = 201)]
    ld_nodes: u64,
    /// JSON report path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Corrupt the checked field to prove the battery can fail.
    #[arg(long = "inject-error")]
    inject_error: bool,
    #[command(flatten)]
    quad: QuadArgs,
}

/// Parses arguments and runs the selected command, returning the process
/// exit code.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    let outcome = match cli.cmd {
        Cmd::Transform(args) => cmd_transform(args),
        Cmd::Propagate(args) => cmd_propagate(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn parse_axis_parts(raw: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = |why: String| CwtError::invalid("axis", why);
    if parts.len() != 3 {
        return Err(bad(format!("expected min:max:count, found {raw:?}")));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| bad(format!("cannot parse {:?}", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| bad(format!("cannot parse {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| bad(format!("cannot parse {:?}", parts[2])))?;
    if count == 0 || (count > 1 && !(max > min)) {
        return Err(bad(format!("empty axis {raw:?}")));
    }
    Ok((min, max, count))
}

fn parse_axis(raw: &str) -> Result<Vec<f64>> {
    let (min, max, count) = parse_axis_parts(raw)?;
    linspace(min, max, count)
}

fn parse_signal(raw: &str) -> Result<Signal> {
    if let Some(omega) = raw.strip_prefix("harmonic:") {
        let omega: f64 = omega.parse().map_err(|_| {
            CwtError::invalid("signal", format!("cannot parse frequency {omega:?}"))
        })?;
        return Signal::harmonic(omega);
    }
    if let Some(path) = raw.strip_prefix("csv:") {
        return io::read_signal_csv(path);
    }
    Err(CwtError::invalid(
        "signal",
        format!("expected harmonic:<omega> or csv:<path>, found {raw:?}"),
    ))
}

/// Writes every output, removing all of them again if any write fails.
fn write_outputs(files: Vec<(PathBuf, Vec<u8>)>) -> Result<()> {
    let mut written: Vec<PathBuf> = Vec::new();
    for (path, bytes) in files {
        match fs::write(&path, bytes) {
            Ok(()) => written.push(path),
            Err(e) => {
                for w in written {
                    let _ = fs::remove_file(w);
                }
                return Err(CwtError::from(e));
            }
        }
    }
    Ok(())
}

fn report_failures(fill: &GridFill) -> bool {
    for f in fill.failures.iter().take(5) {
        eprintln!(
            "error: node ({}, {}) at (a = {}, b = {}): {}",
            f.i, f.j, f.a, f.b, f.error
        );
    }
    if fill.failures.len() > 5 {
        eprintln!("error: {} more nodes failed", fill.failures.len() - 5);
    }
    !fill.failures.is_empty()
}

fn cmd_transform(args: TransformArgs) -> Result<i32> {
    let quad = args.quad.to_spec()?;
    let signal = parse_signal(&args.signal)?;
    let a_values = parse_axis(&args.a)?;
    let b_values = parse_axis(&args.b)?;
    let fill = evaluate_grid(&signal, &quad, &a_values, &b_values, args.method.into())?;
    if report_failures(&fill) {
        return Ok(1);
    }
    let mut files = vec![(args.out, io::field_csv_bytes(&fill.field, false))];
    if let Some(path) = args.heatmap {
        files.push((path, io::heatmap_ppm_bytes(&fill.field)));
    }
    write_outputs(files)?;
    Ok(0)
}

fn load_propagation_inputs(
    args: &PropagateArgs,
) -> Result<(LineData, LineData, Option<f64>)> {
    if let Some(path) = &args.line_data {
        if args.signal.is_some() {
            return Err(CwtError::invalid(
                "propagate inputs",
                "--signal and --line-data are mutually exclusive",
            ));
        }
        let (ld1, ld2) = io::read_line_data_csv(path)?;
        return Ok((ld1, ld2, None));
    }
    let Some(signal) = &args.signal else {
        return Err(CwtError::invalid(
            "propagate inputs",
            "either --signal or --line-data is required",
        ));
    };
    let Signal::Harmonic { omega } = parse_signal(signal)? else {
        return Err(CwtError::invalid(
            "propagate inputs",
            "closed-form line data needs a harmonic signal; \
             use --line-data for sampled sources",
        ));
    };
    let (Some(k), Some(intercept), Some(line_a)) =
        (args.k, args.intercept, args.line_a.as_deref())
    else {
        return Err(CwtError::invalid(
            "propagate inputs",
            "--k, --intercept, and --line-a are required with --signal",
        ));
    };
    let (a_min, a_max, n_nodes) = parse_axis_parts(line_a)?;
    let spec = LineSegmentSpec::new(k, intercept, a_min, a_max, n_nodes)?;
    let ld1 = oracle::harmonic_line_data(omega, spec, Component1)?;
    let ld2 = oracle::harmonic_line_data(omega, spec, Component2)?;
    Ok((ld1, ld2, Some(omega)))
}

/// Propagates both components to `na` targets along the intercept row by
/// the even-slope shortcut and assembles them as a one-column field.
fn simplified_row_field(
    ld1: &LineData,
    ld2: &LineData,
    na: usize,
) -> Result<TransformField> {
    let spec = &ld1.spec;
    let a_values = linspace(spec.a_min, spec.a_max, na)?;
    let b_values = vec![spec.intercept_c];
    let mut field = TransformField::unevaluated(a_values.clone(), b_values, true)?;
    for (i, &a) in a_values.iter().enumerate() {
        let p = ScaleShiftPoint { a, b: spec.intercept_c };
        let v1 = propagate_simplified(ld1, p)?;
        let v2 = propagate_simplified(ld2, p)?;
        field.w[(i, 0)] = v1 - v2;
        field.w1.as_mut().expect("split allocated")[(i, 0)] = v1;
        field.w2.as_mut().expect("split allocated")[(i, 0)] = v2;
    }
    Ok(field)
}

fn cmd_propagate(args: PropagateArgs) -> Result<i32> {
    let quad = args.quad.to_spec()?;
    let (ld1, ld2, omega) = load_propagation_inputs(&args)?;
    let field = if args.simplified {
        simplified_row_field(&ld1, &ld2, args.na)?
    } else {
        fill_triangle(&ld1, &ld2, args.na, args.nb)?
    };

    if args.check {
        let Some(omega) = omega else {
            return Err(CwtError::invalid(
                "propagate inputs",
                "--check needs a harmonic --signal to rerun directly",
            ));
        };
        let signal = Signal::harmonic(omega)?;
        let direct = evaluate_grid(
            &signal,
            &quad,
            &field.a_values,
            &field.b_values,
            GridMethod::PvSplit,
        )?;
        let (max_abs_diff, rms_diff) = compare_fields(&field, &direct.field)?;
        println!("check: max_abs_diff={max_abs_diff} rms_diff={rms_diff}");
    }

    let mut files = Vec::new();
    if let Some(path) = &args.dump_line_data {
        files.push((path.clone(), io::line_data_csv_bytes(&ld1, &ld2)?));
    }
    files.push((args.out.clone(), io::field_csv_bytes(&field, true)));
    if let Some(path) = &args.heatmap {
        files.push((path.clone(), io::heatmap_ppm_bytes(&field)));
    }
    write_outputs(files)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyConfig {
    omega: f64,
    h: f64,
    targets: u64,
    ld_nodes: u64,
    halfwidth_xi: f64,
    nodes_per_unit_xi: u32,
    pv_exclusion_pairs: u32,
    taper_fraction: f64,
    inject_error: bool,
}

#[derive(Serialize)]
struct ResidualCheck {
    name: &'static str,
    #[serde(flatten)]
    report: ResidualReport,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct BoundaryCheck {
    name: &'static str,
    value: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct OpCounts {
    direct_ops: u64,
    propagation_ops: u64,
    targets: u64,
    propagation_cheaper: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    config: VerifyConfig,
    residuals: Vec<ResidualCheck>,
    boundary_checks: Vec<BoundaryCheck>,
    op_counts: OpCounts,
    wall_clock_ms: u128,
    pass: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let start = Instant::now();
    let quad = args.quad.to_spec()?;
    if !(args.h.is_finite() && args.h > 0.0) {
        return Err(CwtError::invalid("h", "step must be finite and positive"));
    }
    let omega = args.omega;
    let inject = args.inject_error;

    let mut residuals = Vec::new();
    let mut boundary_checks = Vec::new();

    // Conjugate equation on the kernel, anchored at each probe, at h and
    // h/2 for the order check. Probes start at 1.5 because the truncation
    // constant grows like |R|^3/a^4.
    let conj_probes: Vec<ScaleShiftPoint> = (0..20)
        .map(|i| ScaleShiftPoint {
            a: 1.5 + 2.5 * i as f64 / 19.0,
            b: 2.0,
        })
        .collect();
    let family = |p: ScaleShiftPoint| RiemannKernel::for_component(Component1, p);
    let conj = residual_conjugate(family, &conj_probes, args.h)?;
    let conj_half = residual_conjugate(family, &conj_probes, args.h / 2.0)?;
    let conj_tol =
        CONJUGATE_RESIDUAL_TOL * (args.h / CONJUGATE_TOL_STEP).powi(2);
    residuals.push(ResidualCheck {
        name: "conjugate_kernel_residual",
        report: conj,
        tolerance: conj_tol,
        pass: conj.max_abs < conj_tol,
    });
    residuals.push(ResidualCheck {
        name: "conjugate_kernel_residual_half_step",
        report: conj_half,
        tolerance: conj_tol / 4.0 * 1.25,
        pass: conj_half.max_abs < conj_tol / 4.0 * 1.25,
    });
    let ratio = if conj_half.max_abs > 0.0 {
        conj.max_abs / conj_half.max_abs
    } else {
        f64::INFINITY
    };
    boundary_checks.push(BoundaryCheck {
        name: "conjugate_order_two_ratio",
        value: ratio,
        tolerance: ORDER_RATIO_HI,
        pass: (ORDER_RATIO_LO..=ORDER_RATIO_HI).contains(&ratio),
    });

    // Closed-form harmonic component field: constant in scale, so the
    // hyperbolic residual vanishes identically. Optional injection adds a
    // bilinear violator to prove the check can fail.
    let field_probes: Vec<ScaleShiftPoint> = (0..20)
        .map(|i| ScaleShiftPoint {
            a: 0.7 + 1.3 * (i % 10) as f64 / 9.0,
            b: if i < 10 { 0.0 } else { 0.4 },
        })
        .collect();
    let r1 = Component1.pde_coefficient();
    let harmonic = residual_hyperbolic(
        |a, b| {
            let mut u =
                oracle::harmonic_component(Component1, omega, ScaleShiftPoint { a, b })?;
            if inject {
                u += Complex64::new(0.01 * a * b, 0.0);
            }
            Ok(u)
        },
        r1,
        &field_probes,
        args.h,
    )?;
    residuals.push(ResidualCheck {
        name: "harmonic_field_residual",
        report: harmonic,
        tolerance: HARMONIC_RESIDUAL_TOL,
        pass: harmonic.max_abs < HARMONIC_RESIDUAL_TOL,
    });

    // Kernel boundary identities.
    let target = ScaleShiftPoint { a: 1.0, b: 0.7 };
    let kr = RiemannKernel::for_component(Component1, target)?;
    let mut row_dev = 0.0f64;
    for i in 0..15 {
        let a = 0.5 + 3.5 * i as f64 / 14.0;
        let v = kr.value(ScaleShiftPoint { a, b: target.b })?;
        row_dev = row_dev.max((v - Complex64::new(1.0, 0.0)).norm());
    }
    boundary_checks.push(BoundaryCheck {
        name: "kernel_unit_on_target_row",
        value: row_dev,
        tolerance: KERNEL_ROW_TOL,
        pass: row_dev <= KERNEL_ROW_TOL,
    });
    let constant = (kr.r * (-2.0)).exp();
    let mut line_dev = 0.0f64;
    for i in 0..11 {
        let a = 0.5 + 2.5 * i as f64 / 10.0;
        let v = kr.value(ScaleShiftPoint {
            a,
            b: target.b - 2.0 * a,
        })?;
        line_dev = line_dev.max((v - constant).norm());
    }
    boundary_checks.push(BoundaryCheck {
        name: "kernel_constant_on_even_slope_line",
        value: line_dev,
        tolerance: KERNEL_CONSTANCY_TOL,
        pass: line_dev <= KERNEL_CONSTANCY_TOL,
    });

    let counts = op_count_compare(args.targets, &quad, args.ld_nodes);
    let op_counts = OpCounts {
        direct_ops: counts.direct_ops,
        propagation_ops: counts.propagation_ops,
        targets: counts.targets,
        propagation_cheaper: counts.propagation_ops < counts.direct_ops,
    };

    let pass = residuals.iter().all(|c| c.pass) && boundary_checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        config: VerifyConfig {
            omega,
            h: args.h,
            targets: args.targets,
            ld_nodes: args.ld_nodes,
            halfwidth_xi: quad.halfwidth_xi,
            nodes_per_unit_xi: quad.nodes_per_unit_xi,
            pv_exclusion_pairs: quad.pv_exclusion_pairs,
            taper_fraction: quad.taper_fraction,
            inject_error: inject,
        },
        residuals,
        boundary_checks,
        op_counts,
        wall_clock_ms: start.elapsed().as_millis(),
        pass,
    };

    for check in &report.residuals {
        println!(
            "residual {}: max_abs={} tol={} {}",
            check.name,
            check.report.max_abs,
            check.tolerance,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    for check in &report.boundary_checks {
        println!(
            "check {}: value={} tol={} {}",
            check.name,
            check.value,
            check.tolerance,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "op counts: direct={} propagation={} for {} targets",
        report.op_counts.direct_ops,
        report.op_counts.propagation_ops,
        report.op_counts.targets
    );

    if let Some(path) = args.json {
        let mut bytes = serde_json::to_vec_pretty(&report)
            .map_err(|e| CwtError::invalid("report", e.to_string()))?;
        bytes.push(b'\n');
        write_outputs(vec![(path, bytes)])?;
    }

    if report.pass {
        println!("verify: PASS");
        Ok(0)
    } else {
        for check in report.residuals.iter().filter(|c| !c.pass) {
            eprintln!("verification failed: {}", check.name);
        }
        for check in report.boundary_checks.iter().filter(|c| !c.pass) {
            eprintln!("verification failed: {}", check.name);
        }
        println!("verify: FAIL");
        Ok(2)
    }
}
