//! Command-line front end: kernel grids, verification suites and tables as CSV/JSON.

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::Vector;
use crate::error::{Error, Result};
use crate::exact::qc_to_c64;
use crate::kernel::{
    build_kernel, pde_residual, verify_recursion_all, verify_structural_identities, IdentityReport, KernelId, Sign,
};
use crate::monogenic::Parity;
use crate::series::{
    check_cf_constraint, eigenvalues_exact, inverse_coefficients, series_coefficients, truncation_bound,
    write_coefficients_csv, SeriesCoefficients, SeriesEvaluator,
};
use crate::transform::{
    eigenvalue_base_exact, l2_bound_scan, verify_diff_relations, verify_eigen_bochner, verify_eigen_full_grid,
    verify_inversion, CheckResult, QuadratureScheme, DEFAULT_NODES_PER_AXIS, MAX_FULL_GRID_DIMENSION,
};

/// Verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pde,
    Recursion,
    Structural,
    Series,
    Eigen,
    Inversion,
    Diff,
    L2,
    Constraint,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Complex number written `re,im` (or just `re`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexArg(pub [f64; 2]);

impl FromStr for ComplexArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        match parts.as_slice() {
            [re] => Ok(Self([parse(re)?, 0.0])),
            [re, im] => Ok(Self([parse(re)?, parse(im)?])),
            _ => Err(format!("expected RE or RE,IM, got {s:?}")),
        }
    }
}

impl ComplexArg {
    pub fn value(self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }
}

/// Tolerances applied by the suites; all are recorded in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub pde_relative: f64,
    pub series_abs: f64,
    pub eigen_grid_abs: f64,
    pub eigen_radial_abs: f64,
    pub inversion_abs: f64,
    pub diff_abs: f64,
    pub constraint_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pde_relative: 1e-6,
            series_abs: 1e-8,
            eigen_grid_abs: 1e-6,
            eigen_radial_abs: 1e-8,
            inversion_abs: 1e-5,
            diff_abs: 1e-5,
            constraint_relative: 1e-10,
        }
    }
}

/// Sampling parameters shared by the suites.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteDefaults {
    pub random_points: usize,
    pub point_radius: f64,
    pub seed: u64,
    pub fd_step: f64,
    pub eigen_j_max: usize,
    pub eigen_k_max: usize,
    pub inversion_k_max: usize,
    pub l2_k_max: usize,
    pub constraint_k_max: usize,
}

impl Default for SuiteDefaults {
    fn default() -> Self {
        Self {
            random_points: 200,
            point_radius: 3.0,
            seed: 2024,
            fd_step: 1e-4,
            eigen_j_max: 1,
            eigen_k_max: 2,
            inversion_k_max: 100,
            l2_k_max: 200,
            constraint_k_max: 50,
        }
    }
}

/// Fully resolved run parameters, validated before dispatch and echoed in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub m: usize,
    /// `None` means every admissible index.
    pub i: Option<usize>,
    pub sign: Sign,
    pub e_i: Complex64,
    pub truncation_eps: f64,
    pub tolerances: Tolerances,
    pub defaults: SuiteDefaults,
    pub format: Format,
    pub parallel: bool,
}

impl RunConfig {
    pub fn new(command: impl Into<String>, m: usize) -> Self {
        Self {
            command: command.into(),
            m,
            i: None,
            sign: Sign::Plus,
            e_i: Complex64::new(1.0, 0.0),
            truncation_eps: 1e-9,
            tolerances: Tolerances::default(),
            defaults: SuiteDefaults::default(),
            format: Format::Json,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.i {
            Some(i) => KernelId::new(self.m, i).map(|_| ()),
            None => KernelId::new(self.m, 0).map(|_| ()),
        }
    }

    fn indices(&self) -> Vec<usize> {
        match self.i {
            Some(i) => vec![i],
            None => (0..=self.m - 2).collect(),
        }
    }

    fn kernel_id(&self, i: usize) -> Result<KernelId> {
        Ok(KernelId::new(self.m, i)?.with_sign(self.sign).with_e_i(self.e_i))
    }
}

/// JSON report of one suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: RunConfig,
    pub pass: bool,
    pub cases: Vec<CheckResult>,
}

fn exact_cases(report: &IdentityReport, prefix: &str) -> Vec<CheckResult> {
    report
        .checks
        .iter()
        .map(|c| CheckResult {
            case: format!("{prefix}{}", c.name),
            expected: 0.0,
            got: if c.pass { 0.0 } else { 1.0 },
            abs_error: if c.pass { 0.0 } else { 1.0 },
            pass: c.pass,
        })
        .collect()
}

fn random_vector(rng: &mut ChaCha8Rng, m: usize, radius: f64) -> Vector {
    loop {
        let c: Vec<f64> = (0..m).map(|_| rng.gen_range(-radius..radius)).collect();
        let v = Vector::new(c).expect("nonempty");
        if v.norm() <= radius {
            return v;
        }
    }
}

/// Runs one verification suite.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let m = cfg.m;
    let d = &cfg.defaults;
    let tol = &cfg.tolerances;
    let mut cases = Vec::new();
    match suite {
        Suite::Pde => {
            let mut rng = ChaCha8Rng::seed_from_u64(d.seed);
            for i in cfg.indices() {
                let k = build_kernel(&cfg.kernel_id(i)?.with_sign(Sign::Plus))?;
                let mut worst: f64 = 0.0;
                for _ in 0..d.random_points {
                    let x = random_vector(&mut rng, m, d.point_radius);
                    let y = random_vector(&mut rng, m, d.point_radius);
                    worst = worst.max(pde_residual(&k, &x, &y, d.fd_step)?.relative());
                }
                cases.push(CheckResult::new(format!("pde m={m} i={i}"), 0.0, worst, tol.pde_relative));
            }
        }
        Suite::Recursion => {
            cases.extend(exact_cases(&verify_recursion_all(m)?, &format!("m={m} ")));
        }
        Suite::Structural => {
            cases.extend(exact_cases(&verify_structural_identities(m)?, &format!("m={m} ")));
        }
        Suite::Series => {
            let mut rng = ChaCha8Rng::seed_from_u64(d.seed);
            for i in cfg.indices() {
                let id = cfg.kernel_id(i)?;
                let k = build_kernel(&id)?.compile();
                let c = series_coefficients(&id)?;
                let n = truncation_bound(&c, d.point_radius * d.point_radius, cfg.truncation_eps);
                let series = SeriesEvaluator::new(&c, n);
                let mut worst: f64 = 0.0;
                for _ in 0..d.random_points {
                    let x = random_vector(&mut rng, m, d.point_radius);
                    let y = random_vector(&mut rng, m, d.point_radius);
                    let a = k.eval(&x, &y).to_multivector();
                    let b = series.eval(&x, &y).to_multivector();
                    worst = worst.max(a.max_abs_diff(&b));
                }
                cases.push(CheckResult::new(format!("series {id} N={n}"), 0.0, worst, tol.series_abs));
            }
        }
        Suite::Eigen => {
            let grid = QuadratureScheme::full_grid(m.min(MAX_FULL_GRID_DIMENSION), DEFAULT_NODES_PER_AXIS)?
                .with_parallel(cfg.parallel);
            for i in cfg.indices() {
                let id = cfg.kernel_id(i)?;
                for j in 0..=d.eigen_j_max {
                    for k in 0..=d.eigen_k_max {
                        let (r, t) = if m <= MAX_FULL_GRID_DIMENSION {
                            (verify_eigen_full_grid(&id, j, k, 1, &grid)?, tol.eigen_grid_abs)
                        } else {
                            (verify_eigen_bochner(&id, j, k, 1, 1e-13)?, tol.eigen_radial_abs)
                        };
                        let err = r.abs_error.max(r.residual);
                        cases.push(CheckResult {
                            case: format!("eigen {id} psi_({j},{k},1) [{:?}]", r.method),
                            expected: r.closed_form.norm(),
                            got: r.numeric.norm(),
                            abs_error: err,
                            pass: err <= t,
                        });
                    }
                }
            }
        }
        Suite::Inversion => {
            for i in cfg.indices() {
                let r = verify_inversion(m, i, d.inversion_k_max, tol.inversion_abs)?;
                cases.push(CheckResult {
                    case: format!("exact products m={m} i={i} k<={}", d.inversion_k_max),
                    expected: 1.0,
                    got: if r.exact_products_are_one { 1.0 } else { 0.0 },
                    abs_error: if r.exact_products_are_one { 0.0 } else { 1.0 },
                    pass: r.exact_products_are_one,
                });
                cases.extend(r.numeric);
            }
        }
        Suite::Diff => {
            for i in cfg.indices() {
                cases.extend(verify_diff_relations(m, i, d.fd_step, tol.diff_abs)?);
            }
        }
        Suite::L2 => {
            for i in cfg.indices() {
                let r = l2_bound_scan(m, i, d.l2_k_max)?;
                let label = match (r.expected_bounded, r.witness) {
                    (true, _) => "bounded".to_string(),
                    (false, Some((k, p, _))) => format!("unbounded, witness k={k} {p}"),
                    (false, None) => "unbounded, no witness".to_string(),
                };
                cases.push(CheckResult {
                    case: format!("l2 m={m} i={i} ({label})"),
                    expected: if r.expected_bounded { 1.0 } else { f64::INFINITY },
                    got: r.max_abs_eigenvalue,
                    abs_error: if r.pass { 0.0 } else { 1.0 },
                    pass: r.pass,
                });
            }
        }
        Suite::Constraint => {
            for i in cfg.indices() {
                let id = cfg.kernel_id(i)?.with_sign(Sign::Plus);
                let r = check_cf_constraint(&series_coefficients(&id)?, d.constraint_k_max);
                let worst = r.residuals.iter().map(|v| v.residual / v.scale).fold(0.0, f64::max);
                cases.push(CheckResult::new(format!("constraint {id}"), 0.0, worst, tol.constraint_relative));
            }
        }
    }
    let pass = !cases.is_empty() && cases.iter().all(|c| c.pass);
    Ok(SuiteReport { suite, config: cfg.clone(), pass, cases })
}

/// Writes the verification report as JSON (or CSV rows) and returns whether every case passed.
pub fn cmd_verify<W: Write>(suite: Suite, cfg: &RunConfig, out: W) -> Result<bool> {
    let report = run_suite(suite, cfg)?;
    match cfg.format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["case", "expected", "got", "abs_error", "pass"]).map_err(csv_error)?;
            for c in &report.cases {
                w.write_record([
                    c.case.clone(),
                    fmt_f64(c.expected),
                    fmt_f64(c.got),
                    fmt_f64(c.abs_error),
                    c.pass.to_string(),
                ])
                .map_err(csv_error)?;
            }
            w.flush()?;
        }
    }
    Ok(report.pass)
}

/// Evenly spaced grid `lo..=hi` with `count` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n).map(|k| self.lo + (self.hi - self.lo) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

/// Writes kernel values on an `(s, t)` grid:
/// `s,t,scalar_re,scalar_im,g_re,g_im` plus `series_abs_diff` when `compare_series` is set.
/// The series is evaluated at `x = e_1`, `y = s e_1 + t e_2`, which realizes the pair `(s, t)`.
pub fn cmd_kernel_eval<W: Write>(cfg: &RunConfig, s: Range, t: Range, compare_series: bool, out: W) -> Result<f64> {
    cfg.validate()?;
    let id = cfg.kernel_id(cfg.i.unwrap_or(0))?;
    if t.points().iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidArgument("t = |x ∧ y| must be nonnegative".into()));
    }
    let kernel = build_kernel(&id)?.compile();
    let series = if compare_series {
        let c = series_coefficients(&id)?;
        let z_max = s.lo.abs().max(s.hi.abs()).hypot(t.lo.abs().max(t.hi.abs()));
        Some(SeriesEvaluator::new(&c, truncation_bound(&c, z_max, cfg.truncation_eps)))
    } else {
        None
    };
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["s", "t", "scalar_re", "scalar_im", "g_re", "g_im"];
    if compare_series {
        header.push("series_abs_diff");
    }
    w.write_record(&header).map_err(csv_error)?;
    let mut worst: f64 = 0.0;
    let x = unit_vector(id.m, 0);
    for &sv in &s.points() {
        for &tv in &t.points() {
            let (scalar, g) = kernel.eval_st(sv, tv);
            let mut row = vec![fmt_f64(sv), fmt_f64(tv), fmt_f64(scalar.re), fmt_f64(scalar.im), fmt_f64(g.re), fmt_f64(g.im)];
            if let Some(series) = &series {
                let mut yc = vec![0.0; id.m];
                yc[0] = sv;
                yc[1] = tv;
                let y = Vector::new(yc)?;
                let diff = kernel.eval(&x, &y).to_multivector().max_abs_diff(&series.eval(&x, &y).to_multivector());
                worst = worst.max(diff);
                row.push(fmt_f64(diff));
            }
            w.write_record(&row).map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(worst)
}

fn unit_vector(m: usize, j: usize) -> Vector {
    let mut c = vec![0.0; m];
    c[j] = 1.0;
    Vector::new(c).expect("nonempty")
}

/// Closed-form eigenvalue table `m,i,k,parity,branch_factor,re,im,abs` for `F^i_{+,m}`;
/// `re,im` are the `p = 0` value and the `(-1)^p` dependence is recorded symbolically.
pub fn cmd_eigentable<W: Write>(
    m: usize,
    i_range: (usize, usize),
    k_range: (usize, usize),
    e_i: Complex64,
    out: W,
) -> Result<()> {
    KernelId::new(m, 0)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "i", "k", "parity", "branch_factor", "re", "im", "abs"]).map_err(csv_error)?;
    for i in i_range.0..=i_range.1.min(m - 2) {
        if i_range.0 > i_range.1 {
            break;
        }
        for k in k_range.0..=k_range.1 {
            if k_range.0 > k_range.1 {
                break;
            }
            for parity in [Parity::Even, Parity::Odd] {
                let v = qc_to_c64(&eigenvalue_base_exact(m, i, k, parity, e_i)?);
                w.write_record([
                    m.to_string(),
                    i.to_string(),
                    k.to_string(),
                    parity.to_string(),
                    "(-1)^p".to_string(),
                    fmt_f64(v.re),
                    fmt_f64(v.im),
                    fmt_f64(v.norm()),
                ])
                .map_err(csv_error)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Series coefficients `k,alpha_re,alpha_im,beta_re,beta_im`; with `inverse`, the inverse kernel's
/// coefficients and the eigenvalue products (which equal 1 on invertible degrees).
pub fn cmd_coeffs<W: Write>(cfg: &RunConfig, k_max: usize, inverse: bool, out: W) -> Result<()> {
    cfg.validate()?;
    let id = cfg.kernel_id(cfg.i.unwrap_or(0))?;
    let c = series_coefficients(&id)?;
    if !inverse {
        return write_coefficients_csv(&c, k_max, out);
    }
    let (inv, singular) = inverse_coefficients(&c, k_max);
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "k", "alpha_re", "alpha_im", "beta_re", "beta_im", "inv_alpha_re", "inv_alpha_im", "inv_beta_re",
        "inv_beta_im", "product_even", "product_odd",
    ])
    .map_err(csv_error)?;
    let alpha = |c: &SeriesCoefficients, k| c.alpha(k).unwrap_or_else(|| c.zonal_alpha(k));
    for k in 0..=k_max {
        let (a, b, ia, ib) = (alpha(&c, k), c.beta(k), alpha(&inv, k), inv.beta(k));
        let (fwd, bwd) = (eigenvalues_exact(&c, k), eigenvalues_exact(&inv, k));
        let (pe, po) = if singular.contains(&k) {
            (f64::NAN, f64::NAN)
        } else {
            (
                qc_to_c64(&(fwd.even_branch * bwd.even_branch)).re,
                qc_to_c64(&(fwd.odd_branch * bwd.odd_branch)).re,
            )
        };
        w.write_record([
            k.to_string(),
            fmt_f64(a.re),
            fmt_f64(a.im),
            fmt_f64(b.re),
            fmt_f64(b.im),
            fmt_f64(ia.re),
            fmt_f64(ia.im),
            fmt_f64(ib.re),
            fmt_f64(ib.im),
            fmt_f64(pe),
            fmt_f64(po),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "clifft", version, about = "Clifford–Fourier kernels: evaluation, verification suites and tables")]
pub struct Cli {
    /// Run grids and suites on the rayon pool (thread count from CLIFFT_THREADS).
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Dimension.
    #[arg(long)]
    pub m: usize,
    /// Kernel index `0 ≤ i ≤ m-2`.
    #[arg(long)]
    pub i: Option<usize>,
    /// Kernel sign: plus or minus.
    #[arg(long, default_value = "plus", value_parser = parse_sign)]
    pub sign: Sign,
    /// Complex constant of the odd family, as RE or RE,IM.
    #[arg(long, default_value = "1,0")]
    pub e_i: ComplexArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel values on an (s, t) grid as CSV.
    KernelEval {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        s_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        s_max: f64,
        #[arg(long, default_value_t = 50)]
        s_count: usize,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 50)]
        t_count: usize,
        /// Add a column with the distance to the truncated series.
        #[arg(long)]
        compare_series: bool,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Run a verification suite; exits nonzero if any case fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Random points per kernel for the pde and series suites.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Closed-form eigenvalue table as CSV.
    Eigentable {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        i_min: usize,
        #[arg(long)]
        i_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        k_min: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long, default_value = "1,0")]
        e_i: ComplexArg,
    },
    /// Series coefficients as CSV.
    Coeffs {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        /// Add the inverse kernel's coefficients and the eigenvalue products.
        #[arg(long)]
        inverse: bool,
    },
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn config(command: &str, k: &KernelArgs, parallel: bool) -> RunConfig {
    RunConfig {
        i: k.i,
        sign: k.sign,
        e_i: k.e_i.value(),
        parallel,
        ..RunConfig::new(command, k.m)
    }
}

/// Runs a parsed command; `Ok(false)` means a verification case failed.
pub fn run(cli: Cli) -> Result<bool> {
    if cli.parallel {
        let threads = std::env::var("CLIFFT_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(0);
        // an already-initialized pool is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match cli.command {
        Command::KernelEval { kernel, s_min, s_max, s_count, t_min, t_max, t_count, compare_series, eps } => {
            let cfg = RunConfig { truncation_eps: eps, ..config("kernel-eval", &kernel, cli.parallel) };
            let s = Range { lo: s_min, hi: s_max, count: s_count };
            let t = Range { lo: t_min, hi: t_max, count: t_count };
            cmd_kernel_eval(&cfg, s, t, compare_series, out)?;
            Ok(true)
        }
        Command::Verify { suite, kernel, format, points } => {
            let mut cfg = RunConfig { format, ..config("verify", &kernel, cli.parallel) };
            if let Some(p) = points {
                cfg.defaults.random_points = p;
            }
            cmd_verify(suite, &cfg, out)
        }
        Command::Eigentable { m, i_min, i_max, k_min, k_max, e_i } => {
            let i_max = i_max.unwrap_or(m.saturating_sub(2));
            cmd_eigentable(m, (i_min, i_max), (k_min, k_max), e_i.value(), out)?;
            Ok(true)
        }
        Command::Coeffs { kernel, k_max, inverse } => {
            cmd_coeffs(&config("coeffs", &kernel, cli.parallel), k_max, inverse, out)?;
            Ok(true)
        }
    }
}

/// Entry point of the binary: exit code 0 on success, 1 on a failed case, 2 on a usage error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
