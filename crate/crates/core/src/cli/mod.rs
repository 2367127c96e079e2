//! The `hyperkernel` command line. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//!
//! * `0`: success,
//! * `1`: a check ran and failed (`verify`, `mellin-check`),
//! * `2`: invalid input,
//! * `3`: a mathematical precondition does not hold.

pub mod output;
pub mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::continuation::{self as cont, AreaOptions, BesselSpaceParams, ContinuationError, SampledFunction};
use crate::meijer_g::{self, GError, GSpec};
use crate::rk_space::{self, Geometry, HypParams, Index, RkError, SpaceClass, SpaceSignature};
use crate::specfun::gamma;
use crate::topology::{self, TopologyError, WrightParams};

pub use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<RkError> for CliError {
    fn from(e: RkError) -> Self {
        match e {
            RkError::NonPositiveInteger(_)
            | RkError::InvalidTheta(_)
            | RkError::NonFinite
            | RkError::Geometry(_)
            | RkError::CapTooSmall { .. }
            | RkError::NotAdmissible(_)
            | RkError::Unsupported(_) => CliError::Input(e.to_string()),
            RkError::G(g) => g.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GError> for CliError {
    fn from(e: GError) -> Self {
        match e {
            GError::InvalidOrder { .. }
            | GError::NonFinite
            | GError::NonPositiveX(_)
            | GError::OutsideUnitInterval(_)
            | GError::MultiplicityTooHigh(_) => CliError::Input(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TopologyError> for CliError {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::Unsupported(_) | TopologyError::Spec(_) => CliError::Precondition(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ContinuationError> for CliError {
    fn from(e: ContinuationError) -> Self {
        match e {
            ContinuationError::InvalidParams(_)
            | ContinuationError::InvalidSamples(_)
            | ContinuationError::Csv(_)
            | ContinuationError::TooManyTerms(_) => CliError::Input(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperkernel", version, about = "Hypergeometric kernel spaces, Meijer-G weights and analytic continuation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; `continue` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pontryagin indices from the closed form and from counting signs.
    Index(IndexArgs),
    /// Weight moments against the inner-product coefficients.
    Moments(MomentsArgs),
    /// Evaluate a Meijer G weight.
    GfunEval(GArgs),
    /// Mellin moments of a G weight against the gamma-ratio closed form.
    MellinCheck(MellinArgs),
    /// The invariants (alpha, mu, nu) and the model space.
    Topology(TopologyArgs),
    /// Evaluate a reproducing kernel on a grid.
    KernelEval(KernelArgs),
    /// Continue sampled half-line data to the plane.
    Continue(ContinueArgs),
    /// Run the identity suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct HypArgs {
    /// Upper parameter; repeat for several.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Vec<f64>,
    /// Lower parameter; repeat for several.
    #[arg(long = "b", allow_negative_numbers = true)]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Entire functions (the default).
    #[arg(long, conflicts_with = "disk")]
    pub plane: bool,
    /// Functions in the disk of radius sqrt(theta).
    #[arg(long)]
    pub disk: bool,
}

impl HypArgs {
    fn geometry(&self) -> Geometry {
        if self.disk {
            Geometry::Disk
        } else {
            Geometry::Plane
        }
    }

    fn params(&self) -> Result<HypParams, CliError> {
        Ok(HypParams::new(self.a.clone(), self.b.clone(), self.theta, self.geometry())?)
    }
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[command(flatten)]
    pub hyp: HypArgs,
    /// Last coefficient inspected by the sign oracle.
    #[arg(long, default_value_t = 64)]
    pub kmax: usize,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    /// Gauss-Legendre nodes per radial panel.
    #[arg(long, default_value_t = 16)]
    pub radial_nodes: usize,
    /// Angular nodes (even, at least 16).
    #[arg(long, default_value_t = 128)]
    pub angular_nodes: usize,
}

impl AreaArgs {
    fn options(&self) -> AreaOptions {
        AreaOptions { radial_nodes: self.radial_nodes, angular_nodes: self.angular_nodes }
    }
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub hyp: HypArgs,
    #[arg(long, default_value_t = 20)]
    pub kmax: usize,
    /// Stability tolerance for the radial quadrature.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GArgs {
    /// Upper parameter; repeat for several.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Vec<f64>,
    /// Lower parameter; repeat for several.
    #[arg(long = "b", required = true, allow_negative_numbers = true)]
    pub b: Vec<f64>,
    /// Evaluation point; repeat for several.
    #[arg(long = "x", required = true, allow_negative_numbers = true)]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct MellinArgs {
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Vec<f64>,
    #[arg(long = "b", required = true, allow_negative_numbers = true)]
    pub b: Vec<f64>,
    /// Mellin exponent; repeat for several (default 1, 1.5, 2, 3).
    #[arg(long = "s", allow_negative_numbers = true)]
    pub s: Vec<f64>,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct TopologyArgs {
    /// Upper parameter `a`, or `A:a` for a Wright pair; repeat for several.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Vec<String>,
    /// Lower parameter `b`, or `B:b` for a Wright pair; repeat for several.
    #[arg(long = "b", allow_negative_numbers = true)]
    pub b: Vec<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, conflicts_with = "disk")]
    pub plane: bool,
    #[arg(long)]
    pub disk: bool,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub hyp: HypArgs,
    /// Use the Bessel kernel with this alpha instead of a hypergeometric one.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    /// Points `re:im,re:im,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Second argument `u` as `re:im`; defaults to each grid point.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
}

#[derive(Debug, Args)]
pub struct ContinueArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub nu: f64,
    /// CSV with header `t,re[,im]`; `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Target points `re:im,re:im,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Criterion report path; defaults to `<output>.criterion.json`, or stderr.
    #[arg(long)]
    pub criterion: Option<PathBuf>,
    #[command(flatten)]
    pub area: AreaArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single identity.
    #[arg(long)]
    pub only: Option<String>,
    /// Replace every tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub area: AreaArgs,
}

/// Parses `re:im,re:im,...`; a bare number is real.
pub fn parse_grid(s: &str) -> Result<Vec<Complex64>, CliError> {
    let pts: Result<Vec<Complex64>, CliError> = s.split(',').map(|p| parse_point(p.trim())).collect();
    let pts = pts?;
    if pts.is_empty() {
        return Err(CliError::Input("empty grid".into()));
    }
    Ok(pts)
}

fn parse_point(s: &str) -> Result<Complex64, CliError> {
    let num = |t: &str| {
        t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CliError::Input(format!("bad number {t:?} in point {s:?}")))
    };
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

/// A report plus the exit code it carries.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
    pub format: Format,
}

fn ok(report: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { report, code: EXIT_OK, format: Format::Json })
}

fn index_json(i: Index) -> Value {
    match i {
        Index::Finite(n) => json!(n),
        Index::Infinite => json!("infinite"),
    }
}

/// `hilbert` for positive spaces without negative squares, the class name otherwise.
pub fn class_label(sig: &SpaceSignature) -> &'static str {
    if sig.space_class == SpaceClass::PositivePontryagin && sig.neg_index == Index::Finite(0) {
        "hilbert"
    } else {
        sig.space_class.as_str()
    }
}

fn signature_json(sig: &SpaceSignature) -> Value {
    json!({ "class": class_label(sig), "pos_index": index_json(sig.pos_index), "neg_index": index_json(sig.neg_index) })
}

pub fn cmd_index(args: &IndexArgs) -> Result<Outcome, CliError> {
    let h = args.hyp.params()?;
    let formula = rk_space::pontryagin_index_formula(&h);
    let oracle = rk_space::pontryagin_index_oracle(&h, args.kmax)?;
    let s = rk_space::NegativeParamSummary::new(&h);
    ok(json!({
        "class": class_label(&formula),
        "pos_index": index_json(formula.pos_index),
        "neg_index": index_json(formula.neg_index),
        "formula_result": signature_json(&formula),
        "oracle_result": signature_json(&oracle),
        "agree": formula.agrees_with(&oracle),
        "m": s.m,
        "d": s.d,
        "nu": s.nu,
    }))
}

pub fn cmd_moments(args: &MomentsArgs) -> Result<Outcome, CliError> {
    let h = args.hyp.params()?;
    let w = rk_space::WeightSpec::unshifted(&h)?;
    let m = rk_space::moments_from_weight(&w, args.kmax, args.tol)?;
    let want = h.inner_coefficients(args.kmax + 1);
    let rows: Vec<Value> = (0..=args.kmax)
        .map(|k| {
            json!({
                "k": k,
                "moment": m.c[k],
                "abs_moment": m.a[k],
                "coefficient": want[k],
                "rel_err": (m.c[k] - want[k]).abs() / want[k].abs(),
            })
        })
        .collect();
    let comp = rk_space::completeness_check(&m)?;
    let sig = rk_space::signature_from_moments(&m);
    ok(json!({
        "moments": rows,
        "completeness": { "verdict": format!("{:?}", comp.verdict).to_lowercase(), "sup_ratio": comp.sup_ratio, "slope": comp.slope },
        "signature": signature_json(&sig),
    }))
}

pub fn cmd_gfun_eval(args: &GArgs) -> Result<Outcome, CliError> {
    let g = GSpec::new(args.a.clone(), args.b.clone())?;
    let rows: Result<Vec<Value>, CliError> = args
        .x
        .iter()
        .map(|&x| {
            let v = meijer_g::g_weight(&g, x)?;
            let regime = format!("{:?}", meijer_g::regime(&g, x)).to_lowercase();
            Ok(json!({ "x": x, "value": v, "regime": regime }))
        })
        .collect();
    ok(Value::Array(rows?))
}

pub fn cmd_mellin_check(args: &MellinArgs) -> Result<Outcome, CliError> {
    let g = GSpec::new(args.a.clone(), args.b.clone())?;
    let s_list = if args.s.is_empty() { verify::MELLIN_S.to_vec() } else { args.s.clone() };
    let mut all = true;
    let mut rows = Vec::with_capacity(s_list.len());
    for s in s_list {
        if let Some(&b) = args.b.iter().find(|&&b| b + s <= 0.0) {
            return Err(CliError::Input(format!("the Mellin moment needs b + s > 0, got b = {b}, s = {s}")));
        }
        let closed = args.b.iter().map(|v| gamma(v + s)).product::<f64>() / args.a.iter().map(|v| gamma(v + s)).product::<f64>();
        let quad = meijer_g::mellin_moment(&g, s, 1e-10)?;
        let residual = (quad - closed).abs() / closed.abs();
        let pass = residual <= args.tol;
        all &= pass;
        rows.push(json!({ "s": s, "quadrature": quad, "closed_form": closed, "residual": residual, "pass": pass }));
    }
    Ok(Outcome { report: Value::Array(rows), code: if all { EXIT_OK } else { EXIT_CHECK_FAILED }, format: Format::Json })
}

fn parse_list(v: &[String]) -> Result<Vec<f64>, CliError> {
    v.iter().map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad number {s:?}")))).collect()
}

fn parse_pairs(v: &[String]) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut scales = Vec::with_capacity(v.len());
    let mut shifts = Vec::with_capacity(v.len());
    for s in v {
        let (x, y) = s.split_once(':').ok_or_else(|| CliError::Input(format!("expected A:a, got {s:?}")))?;
        scales.extend(parse_list(&[x.to_string()])?);
        shifts.extend(parse_list(&[y.to_string()])?);
    }
    Ok((scales, shifts))
}

pub fn cmd_topology(args: &TopologyArgs) -> Result<Outcome, CliError> {
    let wright = args.a.iter().chain(&args.b).any(|s| s.contains(':'));
    let (w, theta) = if wright {
        let (big_a, a) = parse_pairs(&args.a)?;
        let (big_b, b) = parse_pairs(&args.b)?;
        (WrightParams::new(big_a, a, big_b, b)?, args.theta)
    } else {
        let geometry = if args.disk { Geometry::Disk } else { Geometry::Plane };
        let h = HypParams::new(parse_list(&args.a)?, parse_list(&args.b)?, args.theta, geometry)?;
        h.validate_geometry()?;
        WrightParams::from_hyp(&h)?
    };
    let inv = topology::invariants(&w).with_theta(theta);
    ok(json!({
        "alpha": inv.alpha,
        "mu": inv.mu,
        "nu": inv.nu,
        "l": inv.l,
        "model": inv.model().as_str(),
        "kernel-available": inv.kernel_available(),
    }))
}

pub fn cmd_kernel_eval(args: &KernelArgs) -> Result<Outcome, CliError> {
    let grid = parse_grid(&args.grid)?;
    let u = args.u.as_deref().map(parse_point).transpose()?;
    let eval: Box<dyn Fn(Complex64, Complex64) -> Result<Complex64, CliError>> = match args.alpha {
        Some(alpha) => {
            let p = BesselSpaceParams::new(alpha, args.nu)?;
            Box::new(move |z, uc| Ok(cont::bessel_kernel(&p, z, uc)))
        }
        None => {
            let h = args.hyp.params()?;
            h.validate_geometry()?;
            Box::new(move |z, uc| Ok(rk_space::kernel_eval(&h, z, uc)?))
        }
    };
    let rows: Result<Vec<Value>, CliError> = grid
        .iter()
        .map(|&z| {
            let u = u.unwrap_or(z);
            let k = eval(z, u.conj())?;
            Ok(json!({ "re_z": z.re, "im_z": z.im, "re_u": u.re, "im_u": u.im, "re_k": k.re, "im_k": k.im }))
        })
        .collect();
    ok(Value::Array(rows?))
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    let res = if path == Path::new("-") { io::stdin().read_to_end(&mut buf).map(|_| ()) } else { fs::read(path).map(|b| buf = b) };
    res.map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(buf)
}

fn write_criterion(args: &ContinueArgs, output: Option<&Path>, report: &cont::CriterionReport) -> Result<(), CliError> {
    let text = output::to_json(&json!({
        "value": report.value,
        "finite": report.finite,
        "doubling_ratio": report.doubling_ratio,
    })) + "\n";
    let path = args.criterion.clone().or_else(|| output.map(|o| PathBuf::from(format!("{}.criterion.json", o.display()))));
    match path {
        Some(p) => fs::write(&p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_continue(args: &ContinueArgs, output: Option<&Path>) -> Result<Outcome, CliError> {
    let p = BesselSpaceParams::new(args.alpha, args.nu)?;
    let grid = parse_grid(&args.grid)?;
    let f = SampledFunction::from_csv(read_input(&args.input)?.as_slice())?;
    let res = match cont::continue_function(&p, &f, &grid, &args.area.options()) {
        Ok(r) => r,
        Err(ContinuationError::CriterionNotFinite(report)) => {
            write_criterion(args, output, &report)?;
            return Err(CliError::Precondition(ContinuationError::CriterionNotFinite(report).to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    write_criterion(args, output, &res.criterion)?;
    let rows: Vec<Value> = res
        .targets
        .iter()
        .zip(&res.values)
        .zip(&res.errors)
        .map(|((z, v), e)| json!({ "re_z": z.re, "im_z": z.im, "re_f": v.re, "im_f": v.im, "err_est": e }))
        .collect();
    Ok(Outcome { report: Value::Array(rows), code: EXIT_OK, format: Format::Csv })
}

pub fn cmd_verify(args: &VerifyArgs, seed: u64) -> Result<Outcome, CliError> {
    let cfg = verify::SuiteConfig { area: args.area.options(), seed };
    let rows = verify::run_suite(args.only.as_deref(), args.tol, &cfg)?;
    let all = rows.iter().all(|r| r.pass);
    let report = serde_json::to_value(&rows).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Outcome { report, code: if all { EXIT_OK } else { EXIT_CHECK_FAILED }, format: Format::Json })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Index(a) => cmd_index(a),
        Command::Moments(a) => cmd_moments(a),
        Command::GfunEval(a) => cmd_gfun_eval(a),
        Command::MellinCheck(a) => cmd_mellin_check(a),
        Command::Topology(a) => cmd_topology(a),
        Command::KernelEval(a) => cmd_kernel_eval(a),
        Command::Continue(a) => cmd_continue(a, output),
        Command::Verify(a) => cmd_verify(a, cli.seed),
    }
}

/// Entry point for the binary: parse, run, print, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let text = output::render(&out.report, cli.format.unwrap_or(out.format));
            let written = match &cli.output {
                Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return EXIT_INPUT;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hyperkernel").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0.5, 1:2,-3:-0.25").unwrap();
        assert_eq!(g, vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 2.0), Complex64::new(-3.0, -0.25)]);
        assert!(parse_grid("1:x").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn index_examples() {
        let Command::Index(a) = parse(&["index", "--plane", "--a", "-1.5", "--theta", "1"]).command else { panic!() };
        let r = cmd_index(&a).unwrap().report;
        assert_eq!(r["neg_index"], 1);
        assert_eq!(r["agree"], true);
        let Command::Index(a) = parse(&["index", "--disk", "--a", "2", "--theta", "1"]).command else { panic!() };
        let r = cmd_index(&a).unwrap().report;
        assert_eq!(r["class"], "hilbert");
        assert_eq!(r["neg_index"], 0);
        let Command::Index(a) = parse(&["index", "--plane", "--a", "-0.5"]).command else { panic!() };
        let r = cmd_index(&a).unwrap().report;
        assert_eq!(r["pos_index"], 1);
        assert_eq!(r["class"], "negative-pontryagin");
    }

    #[test]
    fn topology_examples() {
        for args in [&["topology", "--plane"][..], &["topology", "--b", "1:1"][..]] {
            let Command::Topology(a) = parse(args).command else { panic!() };
            let r = cmd_topology(&a).unwrap().report;
            assert_eq!(r["alpha"], 0.5);
            assert_eq!(r["mu"], 1.0);
            assert_eq!(r["nu"], 1.0);
            assert_eq!(r["l"], 0);
            assert_eq!(r["model"], "mittag-leffler");
        }
        let Command::Topology(a) = parse(&["topology", "--disk", "--a", "2"]).command else { panic!() };
        let r = cmd_topology(&a).unwrap().report;
        assert_eq!((r["alpha"].as_f64(), r["mu"].as_f64()), (Some(-1.0), Some(0.0)));
        assert_eq!(r["model"], "bergman-selberg");
        let Command::Topology(a) = parse(&["topology", "--a", "2:1", "--b", "1:1"]).command else { panic!() };
        assert_eq!(cmd_topology(&a).unwrap_err().exit_code(), EXIT_INPUT);
    }

    #[test]
    fn gfun_and_mellin() {
        let Command::GfunEval(a) = parse(&["gfun-eval", "--b", "0.5", "--x", "2"]).command else { panic!() };
        let r = cmd_gfun_eval(&a).unwrap().report;
        let want = 2f64.sqrt() * (-2f64).exp();
        assert!((r[0]["value"].as_f64().unwrap() - want).abs() < 1e-14);
        let Command::MellinCheck(a) = parse(&["mellin-check", "--a", "2.5", "--b", "0.5"]).command else { panic!() };
        let out = cmd_mellin_check(&a).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.report.as_array().unwrap().len(), 4);
    }

    #[test]
    fn kernel_eval_fock() {
        let Command::KernelEval(a) = parse(&["kernel-eval", "--grid", "1:1", "--u", "0.5"]).command else { panic!() };
        let r = cmd_kernel_eval(&a).unwrap().report;
        let want = Complex64::new(0.5, 0.5).exp();
        assert!((r[0]["re_k"].as_f64().unwrap() - want.re).abs() < 1e-14);
        assert!((r[0]["im_k"].as_f64().unwrap() - want.im).abs() < 1e-14);
        let Command::KernelEval(a) = parse(&["kernel-eval", "--disk", "--a", "2", "--grid", "2"]).command else { panic!() };
        assert_eq!(cmd_kernel_eval(&a).unwrap_err().exit_code(), EXIT_PRECONDITION);
    }
}
