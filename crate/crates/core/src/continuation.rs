//! The Bessel kernel space on the plane, restriction to the weighted
//! half-line `L2(R+; e^(-alpha t) t^nu)`, and analytic continuation from the
//! half-line back to the plane.
//!
//! Every pairing `w^(-nu/2) I_nu(c sqrt w)` is evaluated as the entire
//! function `(c/2)^nu 0F1(; nu+1; c^2 w / 4) / Gamma(nu+1)` of `w`, so no
//! fractional power of a complex number is ever taken except in the printed
//! normalizations of `phi*_k` and the identity left-hand sides.
//!
//! The half-line transform of the data,
//! `g(u) = e^(-alpha u/4) int F(t) w^(-nu/2) I_nu(alpha sqrt(t u)) t^nu e^(-alpha t) dt`,
//! is computed once per area node and shared by the criterion, the
//! continuation integral and the Fourier coefficients. Polynomial and Bessel
//! closures have exact transforms; sampled data go through Gamma-density
//! moments of the piecewise-linear interpolant.

use std::f64::consts::PI;
use std::io::Read;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quad::{
    gauss_legendre, integrate_radial, pairwise_sum, AreaRule, Decay, QuadError, RadialRule, GRADING_RATIO,
};
use crate::specfun::{
    bessel_i_scaled, bessel_j, bessel_k_scaled, gamma, gamma_pq, hyp0f1_regularized, laguerre_complex,
    pochhammer, SpecError,
};

/// Fraction of the true exponential rate used to place radial nodes.
const DECAY_MARGIN: f64 = 0.8;
const PLANE_LEVELS: usize = 24;
const DISK_LEVELS: usize = 12;
/// Outer truncation radii as multiples of `1/alpha`. Sampled data lose
/// `e^(alpha |u| / 2)` to cancellation on the negative axis, which caps
/// how far out their transform is trustworthy in double precision.
const OUTER_REACH_EXACT: f64 = 240.0;
const OUTER_REACH_SAMPLED: f64 = 72.0;
/// The truncation error is estimated from the disk of this fraction of the radius.
const TRUNCATION_PROBE: f64 = 5.0 / 6.0;
/// Inner radius `R` of the criterion sweep over `R..2R`.
const CRITERION_REACH_EXACT: f64 = 120.0;
const CRITERION_REACH_SAMPLED: f64 = 36.0;
/// Largest extrapolated tail of the criterion integral, relative to its value.
pub const DOUBLING_TOL: f64 = 0.05;
pub const SAMPLE_TAIL_TOL: f64 = 1e-6;
pub const INNER_TOL: f64 = 1e-6;
pub const OUTER_TOL: f64 = 1e-4;
pub const MAX_FOURIER_N: usize = 12;
const MAX_SERIES_TERMS: usize = 600;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuationError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("sample range too short: weight mass beyond the last node is {tail_mass:e} > {tol:e}")]
    SampleRangeTooShort { tail_mass: f64, tol: f64 },
    #[error("continuation criterion not finite: value {:e}, doubling ratio {}", .0.value, .0.doubling_ratio)]
    CriterionNotFinite(CriterionReport),
    #[error("N = {0} exceeds the supported maximum {MAX_FOURIER_N}")]
    TooManyTerms(usize),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("csv: {0}")]
    Csv(String),
}

type Result<T> = std::result::Result<T, ContinuationError>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesselSpaceParams {
    pub alpha: f64,
    pub nu: f64,
}

impl BesselSpaceParams {
    pub fn new(alpha: f64, nu: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(ContinuationError::InvalidParams(format!("alpha must be positive, got {alpha}")));
        }
        if !(nu > -1.0 && nu.is_finite()) {
            return Err(ContinuationError::InvalidParams(format!("nu must exceed -1, got {nu}")));
        }
        Ok(BesselSpaceParams { alpha, nu })
    }

    /// `W(t) = e^(-alpha t) t^nu`.
    pub fn weight(&self, t: f64) -> f64 {
        (-self.alpha * t).exp() * t.powf(self.nu)
    }

    /// `int_0^inf W = Gamma(nu+1) / alpha^(nu+1)`.
    pub fn weight_mass(&self) -> f64 {
        gamma(self.nu + 1.0) / self.alpha.powf(self.nu + 1.0)
    }
}

/// Node counts for area integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaOptions {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for AreaOptions {
    fn default() -> Self {
        AreaOptions { radial_nodes: 16, angular_nodes: 128 }
    }
}

impl AreaOptions {
    fn coarse(&self) -> Self {
        AreaOptions { radial_nodes: (self.radial_nodes / 2).max(4), angular_nodes: (self.angular_nodes / 2).max(16) }
    }
}

fn check_angular(m: usize) -> Result<()> {
    if m < 16 || m % 2 != 0 {
        return Err(QuadError::InvalidRule(format!("angular node count must be even and at least 16, got {m}")).into());
    }
    Ok(())
}

fn plane_points(rate: f64, opts: &AreaOptions) -> Result<Vec<(Complex64, f64)>> {
    check_angular(opts.angular_nodes)?;
    let radial = RadialRule::with_grading(
        Decay::KBessel { rate: rate * DECAY_MARGIN },
        opts.radial_nodes,
        PLANE_LEVELS,
        GRADING_RATIO,
    )?;
    Ok(AreaRule { radial, angular_nodes: opts.angular_nodes }.points())
}

fn disk_points(radius: f64, opts: &AreaOptions) -> Result<Vec<(Complex64, f64)>> {
    check_angular(opts.angular_nodes)?;
    let radial = RadialRule::with_grading(Decay::Cutoff { radius }, opts.radial_nodes, DISK_LEVELS, GRADING_RATIO)?;
    Ok(AreaRule { radial, angular_nodes: opts.angular_nodes }.points())
}

fn area_sum(pts: &[(Complex64, f64)], f: impl Fn(Complex64) -> Complex64 + Sync) -> Complex64 {
    let terms: Vec<Complex64> = pts.par_iter().map(|&(z, w)| f(z) * w).collect();
    pairwise_sum(&terms, Complex64::new(0.0, 0.0))
}

/// `w^(-nu/2) I_nu(c sqrt w)`, entire in `w`.
pub fn reduced_bessel_i(nu: f64, c: f64, w: Complex64) -> Complex64 {
    hyp0f1_regularized(nu + 1.0, w * (0.25 * c * c)) * (0.5 * c).powf(nu)
}

/// `K_{alpha,nu}(z, u_conj) = sum_k alpha^(2k) (z u_conj)^k / (4^k Gamma(k+nu+1) k!)`.
pub fn bessel_kernel(p: &BesselSpaceParams, z: Complex64, u_conj: Complex64) -> Complex64 {
    hyp0f1_regularized(p.nu + 1.0, z * u_conj * (0.25 * p.alpha * p.alpha))
}

/// Taylor coefficients of `K(., u_conj)`, whose series inner product with a
/// polynomial reproduces its value at `u`.
pub fn kernel_coefficient(p: &BesselSpaceParams, k: usize) -> f64 {
    let kf = k as f64;
    (p.alpha * p.alpha / 4.0).powi(k as i32) / (gamma(kf + p.nu + 1.0) * gamma(kf + 1.0))
}

/// `<f, g>` in the Bessel kernel space from Taylor coefficients.
pub fn series_inner_product(p: &BesselSpaceParams, f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).enumerate().map(|(k, (a, b))| a * b.conj() / kernel_coefficient(p, k)).sum()
}

/// `|z|^nu K_nu(alpha |z|)` style weight, returned with the exponential
/// `e^(shift re z)` folded in before scaling to avoid overflow.
fn k_weight(nu: f64, c: f64, shift: f64, z: Complex64) -> f64 {
    let r = z.norm();
    let x = c * r;
    match bessel_k_scaled(nu.abs(), x) {
        Ok(k) => r.powf(nu) * k * (shift * z.re - x).exp(),
        Err(_) => 0.0,
    }
}

/// Squared norm `(alpha^(nu+2) / (2^(nu+1) pi)) int |f|^2 |z|^nu K_nu(alpha |z|) dsigma`.
pub fn space_norm_sq(
    p: &BesselSpaceParams,
    f: impl Fn(Complex64) -> Complex64 + Sync,
    opts: &AreaOptions,
) -> Result<f64> {
    let pts = plane_points(p.alpha, opts)?;
    let s = area_sum(&pts, |z| Complex64::new(f(z).norm_sqr() * k_weight(p.nu, p.alpha, 0.0, z), 0.0));
    Ok(p.alpha.powf(p.nu + 2.0) / (2.0f64.powf(p.nu + 1.0) * PI) * s.re)
}

/// A computed left side, the closed-form right side and their relative gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let scale = rhs.norm().max(lhs.norm());
        let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale };
        IdentityCheck { lhs, rhs, residual }
    }

    /// Absolute residual, for identities whose sides may vanish.
    fn absolute(lhs: Complex64, rhs: Complex64) -> Self {
        let residual = (lhs - rhs).norm() / rhs.norm().max(1.0);
        IdentityCheck { lhs, rhs, residual }
    }
}

/// `int_0^inf J_nu(z t) J_nu(u t) e^(-gamma t^2) t dt` against
/// `(1/(2 gamma)) exp(-(z^2+u^2)/(4 gamma)) I_nu(z u / (2 gamma))`.
///
/// The residual is absolute once the right side drops below 1.
pub fn verify_key_identity(nu: f64, z: f64, u: f64, gamma_: f64) -> Result<IdentityCheck> {
    if !(gamma_ > 0.0) || z < 0.0 || u < 0.0 || !(nu > -1.0) {
        return Err(ContinuationError::InvalidParams(format!(
            "need gamma > 0, z, u >= 0 and nu > -1; got gamma {gamma_}, z {z}, u {u}, nu {nu}"
        )));
    }
    let f = |t: f64| -> f64 {
        let (a, b) = (bessel_j(nu, z * t).unwrap_or(f64::NAN), bessel_j(nu, u * t).unwrap_or(f64::NAN));
        a * b * (-gamma_ * t * t).exp() * t
    };
    let lhs = integrate_radial(f, Decay::Gaussian { rate: gamma_ * DECAY_MARGIN }, 1e-12)?;
    let x = z * u / (2.0 * gamma_);
    let rhs = (-(z - u).powi(2) / (4.0 * gamma_)).exp() * bessel_i_scaled(nu, x)? / (2.0 * gamma_);
    Ok(IdentityCheck::absolute(Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RestrictionBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `int_0^inf |f|^2 W <= 4 (2/alpha)^nu ||f||^2`.
pub fn restriction_norm_bound(
    p: &BesselSpaceParams,
    f: impl Fn(Complex64) -> Complex64 + Sync,
    opts: &AreaOptions,
) -> Result<RestrictionBound> {
    let lhs = integrate_radial(
        |t| f(Complex64::new(t, 0.0)).norm_sqr() * p.weight(t),
        Decay::KBessel { rate: p.alpha * DECAY_MARGIN },
        1e-10,
    )?;
    let rhs = 4.0 * (2.0 / p.alpha).powf(p.nu) * space_norm_sq(p, &f, opts)?;
    Ok(RestrictionBound { lhs, rhs, holds: lhs <= rhs })
}

/// Named functions with exact half-line transforms.
#[derive(Clone, Debug, PartialEq)]
pub enum Closure {
    /// `F(t) = sum_n c_n t^n`.
    Polynomial(Vec<Complex64>),
    /// `F(t) = t^(-nu/2) I_nu(sqrt t)`.
    BesselI { nu: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Interpolation {
    /// Linear between nodes, the first segment extended down to 0, zero past the last.
    PiecewiseLinear,
    Analytic(Closure),
}

/// Data on the half-line.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    interpolation: Interpolation,
}

impl SampledFunction {
    pub fn from_samples(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(ContinuationError::InvalidSamples(format!(
                "need at least two samples with matching lengths, got {} nodes and {} values",
                nodes.len(),
                values.len()
            )));
        }
        if !(nodes[0] > 0.0) || nodes.windows(2).any(|w| !(w[1] > w[0])) || nodes.iter().any(|t| !t.is_finite()) {
            return Err(ContinuationError::InvalidSamples("nodes must be positive and strictly increasing".into()));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(ContinuationError::InvalidSamples("values must be finite".into()));
        }
        Ok(SampledFunction { nodes, values, interpolation: Interpolation::PiecewiseLinear })
    }

    /// Reads `t,re[,im]` with a header row.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| ContinuationError::Csv(e.to_string()))?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let (Some(ti), Some(ri)) = (col("t"), col("re")) else {
            return Err(ContinuationError::Csv("header must contain t and re".into()));
        };
        let ii = col("im");
        let (mut nodes, mut values) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| ContinuationError::Csv(e.to_string()))?;
            let num = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| ContinuationError::Csv(format!("missing column in row {rec:?}")))?
                    .parse::<f64>()
                    .map_err(|e| ContinuationError::Csv(format!("{e} in row {rec:?}")))
            };
            nodes.push(num(ti)?);
            let im = match ii {
                Some(i) if rec.get(i).is_some_and(|s| !s.is_empty()) => num(i)?,
                _ => 0.0,
            };
            values.push(Complex64::new(num(ri)?, im));
        }
        Self::from_samples(nodes, values)
    }

    pub fn analytic(closure: Closure) -> Self {
        SampledFunction { nodes: Vec::new(), values: Vec::new(), interpolation: Interpolation::Analytic(closure) }
    }

    pub fn constant(c: f64) -> Self {
        Self::analytic(Closure::Polynomial(vec![Complex64::new(c, 0.0)]))
    }

    /// `F(t) = t^n`.
    pub fn power(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::analytic(Closure::Polynomial(c))
    }

    pub fn bessel_i(nu: f64) -> Self {
        Self::analytic(Closure::BesselI { nu })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn interpolation(&self) -> &Interpolation {
        &self.interpolation
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.interpolation, Interpolation::PiecewiseLinear)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match &self.interpolation {
            Interpolation::Analytic(Closure::Polynomial(c)) => {
                c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * t + ck)
            }
            Interpolation::Analytic(Closure::BesselI { nu }) => reduced_bessel_i(*nu, 1.0, Complex64::new(t, 0.0)),
            Interpolation::PiecewiseLinear => {
                let (x, v) = (&self.nodes, &self.values);
                if t <= x[0] {
                    return v[0] + (v[1] - v[0]) * ((t - x[0]) / (x[1] - x[0]));
                }
                if t > x[x.len() - 1] {
                    return Complex64::new(0.0, 0.0);
                }
                let i = x.partition_point(|&xi| xi < t).max(1);
                let s = (t - x[i - 1]) / (x[i] - x[i - 1]);
                v[i - 1] + (v[i] - v[i - 1]) * s
            }
        }
    }

    /// Fraction of the weight mass lying beyond the last node.
    pub fn tail_mass(&self, p: &BesselSpaceParams) -> f64 {
        match self.nodes.last() {
            Some(&t) if self.is_sampled() => gamma_pq(p.nu + 1.0, p.alpha * t).1,
            _ => 0.0,
        }
    }

    /// `|F(t_max)| (int_{t_max}^inf W)^(1/2)`: the weighted norm lost by
    /// extending with zero instead of the last value.
    pub fn tail_bias(&self, p: &BesselSpaceParams) -> f64 {
        match self.values.last() {
            Some(v) if self.is_sampled() => v.norm() * (self.tail_mass(p) * p.weight_mass()).sqrt(),
            _ => 0.0,
        }
    }

    fn check_params(&self, p: &BesselSpaceParams) -> Result<()> {
        if let Interpolation::Analytic(Closure::BesselI { nu }) = self.interpolation {
            if (nu - p.nu).abs() > 1e-14 {
                return Err(ContinuationError::InvalidParams(format!(
                    "Bessel closure has nu = {nu} but the space has nu = {}",
                    p.nu
                )));
            }
        }
        Ok(())
    }

    /// Half-line nodes and weights adapted to the interpolant's kinks.
    /// With `tail` the region past the last node is included.
    fn halfline_nodes(&self, p: &BesselSpaceParams, n: usize, tail: bool) -> Result<Vec<(f64, f64)>> {
        let rate = p.alpha * DECAY_MARGIN;
        if !self.is_sampled() {
            let r = RadialRule::with_grading(Decay::KBessel { rate }, n, PLANE_LEVELS, GRADING_RATIO)?;
            return Ok(r.nodes.into_iter().zip(r.weights).collect());
        }
        let x = &self.nodes;
        let head = RadialRule::with_grading(Decay::Cutoff { radius: x[0] }, n, DISK_LEVELS, GRADING_RATIO)?;
        let mut out: Vec<(f64, f64)> = head.nodes.into_iter().zip(head.weights).collect();
        let gl = gauss_legendre(n);
        for w in x.windows(2) {
            let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            out.extend(gl.0.iter().zip(gl.1.iter()).map(|(&s, &wt)| (c + h * s, h * wt)));
        }
        if tail {
            let last = x[x.len() - 1];
            let r = RadialRule::with_grading(Decay::KBessel { rate }, n, PLANE_LEVELS, GRADING_RATIO)?;
            out.extend(r.nodes.into_iter().zip(r.weights).map(|(t, w)| (last + t, w)));
        }
        Ok(out)
    }

    /// `(int |F|^2 W)^(1/2)`.
    pub fn weighted_norm(&self, p: &BesselSpaceParams) -> Result<f64> {
        let pts = self.halfline_nodes(p, 16, false)?;
        let s: f64 = pts.iter().map(|&(t, w)| w * self.eval(t).norm_sqr() * p.weight(t)).sum();
        Ok(s.sqrt())
    }
}

/// `(T* F)(u) = int_0^inf F(t) K(t, u) W(t) dt` by quadrature.
pub struct AdjointT<'a> {
    p: BesselSpaceParams,
    f: &'a SampledFunction,
    tol: f64,
}

pub fn adjoint_t<'a>(p: &BesselSpaceParams, f: &'a SampledFunction) -> Result<AdjointT<'a>> {
    f.check_params(p)?;
    let tail_mass = f.tail_mass(p);
    if tail_mass > SAMPLE_TAIL_TOL {
        return Err(ContinuationError::SampleRangeTooShort { tail_mass, tol: SAMPLE_TAIL_TOL });
    }
    Ok(AdjointT { p: *p, f, tol: INNER_TOL * 1e-2 })
}

impl AdjointT<'_> {
    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        let integrand = |t: f64| self.f.eval(t) * bessel_kernel(&self.p, Complex64::new(t, 0.0), u) * self.p.weight(t);
        let apply = |n: usize| -> Result<Complex64> {
            let pts = self.f.halfline_nodes(&self.p, n, false)?;
            let terms: Vec<Complex64> = pts.iter().map(|&(t, w)| integrand(t) * w).collect();
            Ok(pairwise_sum(&terms, Complex64::new(0.0, 0.0)))
        };
        let mut prev = apply(8)?;
        let mut diff = f64::INFINITY;
        for n in [16, 32, 64] {
            let cur = apply(n)?;
            diff = (cur - prev).norm();
            if diff <= self.tol * cur.norm() {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(QuadError::NonConvergence { value: prev.norm(), diff }.into())
    }
}

/// `int_0^inf f` on exponentially mapped panels, doubling the panel order
/// until two values agree to `tol`. Unlike `integrate_radial` there is no
/// tail probe: kernel products peak far out before their `e^(-alpha t)` decay wins.
fn converge_radial(f: impl Fn(f64) -> Complex64, rate: f64, tol: f64) -> Result<Complex64> {
    let apply = |n: usize| -> Result<Complex64> {
        Ok(RadialRule::with_grading(Decay::KBessel { rate }, n, PLANE_LEVELS, GRADING_RATIO)?.apply(&f))
    };
    let mut prev = apply(8)?;
    let mut diff = f64::INFINITY;
    for n in [16, 32, 64] {
        let cur = apply(n)?;
        diff = (cur - prev).norm();
        if diff <= tol * cur.norm() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(QuadError::NonConvergence { value: prev.norm(), diff }.into())
}

/// `int_0^inf K(t, a) K(t, b) W(t) dt`.
fn kernel_product_integral(p: &BesselSpaceParams, a: Complex64, b: Complex64, tol: f64) -> Result<Complex64> {
    let f = |t: f64| {
        let tc = Complex64::new(t, 0.0);
        bessel_kernel(p, tc, a) * bessel_kernel(p, tc, b) * p.weight(t)
    };
    converge_radial(f, 0.5 * p.alpha, tol)
}

/// `(T T* T K(., z_conj))(s) = alpha^(-nu-1) e^(alpha (z_conj + s)/4) K_{alpha/2,nu}(s, z_conj)`.
pub fn chain_ttstar_tk(p: &BesselSpaceParams, s: f64, z: Complex64) -> Complex64 {
    let zc = z.conj();
    let half = BesselSpaceParams { alpha: 0.5 * p.alpha, nu: p.nu };
    ((zc + s) * (0.25 * p.alpha)).exp() * bessel_kernel(&half, Complex64::new(s, 0.0), zc) * p.alpha.powf(-p.nu - 1.0)
}

/// The chain as the half-line integral `int K(t, z_conj) K(t, s) W(t) dt`.
pub fn chain_ttstar_tk_quadrature(p: &BesselSpaceParams, s: f64, z: Complex64) -> Result<Complex64> {
    kernel_product_integral(p, z.conj(), Complex64::new(s, 0.0), 1e-12)
}

/// `r(z, u_conj) = alpha^(-nu-1) e^(alpha z/4) e^(alpha u_conj/4) K_{alpha/2,nu}(z, u_conj)`.
pub fn r_kernel(p: &BesselSpaceParams, z: Complex64, u_conj: Complex64) -> Complex64 {
    let half = BesselSpaceParams { alpha: 0.5 * p.alpha, nu: p.nu };
    ((z + u_conj) * (0.25 * p.alpha)).exp() * bessel_kernel(&half, z, u_conj) * p.alpha.powf(-p.nu - 1.0)
}

/// `r(z, u_conj) = int K(t, u_conj) K(z, t) W(t) dt` by quadrature.
pub fn r_kernel_quadrature(p: &BesselSpaceParams, z: Complex64, u_conj: Complex64) -> Result<Complex64> {
    kernel_product_integral(p, u_conj, z, 1e-12)
}

/// `k(z, u_conj) = (4/3)^(nu+1) alpha^(-2nu-2) e^(alpha z/3) e^(alpha u_conj/3) K_{alpha/3,nu}(z, u_conj)`.
pub fn kernel_k(p: &BesselSpaceParams, z: Complex64, u_conj: Complex64) -> Complex64 {
    let third = BesselSpaceParams { alpha: p.alpha / 3.0, nu: p.nu };
    ((z + u_conj) * (p.alpha / 3.0)).exp()
        * bessel_kernel(&third, z, u_conj)
        * ((4.0f64 / 3.0).powf(p.nu + 1.0) * p.alpha.powf(-2.0 * p.nu - 2.0))
}

/// `k(z, u_conj)` from its definition as an inner product of kernel chains:
/// `int_0^inf K(s, u_conj) [int_0^inf K(t, z) K(t, s) W(t) dt] W(s) ds`,
/// with both integrals done by quadrature.
pub fn kernel_k_quadrature(p: &BesselSpaceParams, z: Complex64, u_conj: Complex64) -> Result<Complex64> {
    // Inner rules are shared across outer nodes; K(t, z) W(t) is tabulated once per rule.
    let inner_rule = |n: usize| -> Result<(Vec<f64>, Vec<Complex64>)> {
        let rule = RadialRule::with_grading(Decay::KBessel { rate: 0.5 * p.alpha }, n, PLANE_LEVELS, GRADING_RATIO)?;
        let kz = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| bessel_kernel(p, Complex64::new(t, 0.0), z) * (p.weight(t) * w))
            .collect();
        Ok((rule.nodes, kz))
    };
    let inners = [inner_rule(24)?, inner_rule(32)?];
    let inner = |s: Complex64| -> Result<Complex64> {
        let [a, b] = inners.each_ref().map(|(nodes, kz)| {
            let terms: Vec<Complex64> =
                nodes.iter().zip(kz).map(|(&t, &k)| bessel_kernel(p, Complex64::new(t, 0.0), s) * k).collect();
            pairwise_sum(&terms, Complex64::new(0.0, 0.0))
        });
        let diff = (a - b).norm();
        if diff > 1e-10 * b.norm() {
            return Err(QuadError::NonConvergence { value: b.norm(), diff }.into());
        }
        Ok(b)
    };
    let outer = |n: usize| -> Result<Complex64> {
        let rule =
            RadialRule::with_grading(Decay::KBessel { rate: 0.75 * p.alpha * DECAY_MARGIN }, n, PLANE_LEVELS, GRADING_RATIO)?;
        let terms: Vec<Result<Complex64>> = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&s, &w)| {
                let sc = Complex64::new(s, 0.0);
                Ok(bessel_kernel(p, sc, u_conj) * inner(sc)? * (p.weight(s) * w))
            })
            .collect();
        let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&terms, Complex64::new(0.0, 0.0)))
    };
    let (a, b) = (outer(12)?, outer(16)?);
    let diff = (a - b).norm();
    if diff > 1e-8 * b.norm().max(1e-300) {
        return Err(QuadError::NonConvergence { value: b.norm(), diff }.into());
    }
    Ok(b)
}

/// The exact half-line transform `g(u)` described in the module docs.
enum Transform {
    Polynomial(Vec<Complex64>),
    Bessel,
    /// Coefficients of `e^(-x) sum_k c_k x^k` in `x = alpha u / 4`.
    Series(Vec<Complex64>),
}

impl Transform {
    fn new(p: &BesselSpaceParams, f: &SampledFunction, reach: f64) -> Result<Self> {
        f.check_params(p)?;
        Ok(match &f.interpolation {
            Interpolation::Analytic(Closure::Polynomial(c)) => Transform::Polynomial(c.clone()),
            Interpolation::Analytic(Closure::BesselI { .. }) => Transform::Bessel,
            Interpolation::PiecewiseLinear => Transform::Series(gamma_moment_series(p, f, reach)),
        })
    }

    fn eval(&self, p: &BesselSpaceParams, u: Complex64) -> Complex64 {
        let (a, nu) = (p.alpha, p.nu);
        match self {
            Transform::Polynomial(c) => {
                // T* t^n = alpha^(-n-nu-1) n! e^(alpha u/4) L_n^nu(-alpha u/4)
                let x = -u * (0.25 * a);
                let mut fact = 1.0;
                let mut s = Complex64::new(0.0, 0.0);
                for (n, cn) in c.iter().enumerate() {
                    if n > 0 {
                        fact *= n as f64;
                    }
                    if *cn != Complex64::new(0.0, 0.0) {
                        s += cn * laguerre_complex(n, nu, x) * (fact * a.powi(-(n as i32) - 1));
                    }
                }
                s * 2.0f64.powf(-nu)
            }
            Transform::Bessel => reduced_bessel_i(nu, 0.5, u) * ((0.25 / a).exp() / a),
            Transform::Series(c) => {
                let x = u * (0.25 * a);
                let s = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * x + ck);
                s * (-x).exp()
            }
        }
    }
}

/// `c_k = 2^(-nu) alpha^(-1) mu_k / k!` where `mu_k = E[F(T)]` for `T` Gamma
/// distributed with shape `k + nu + 1` and rate `alpha`.
fn gamma_moment_series(p: &BesselSpaceParams, f: &SampledFunction, reach: f64) -> Vec<Complex64> {
    let (a, nu) = (p.alpha, p.nu);
    let kmax = ((std::f64::consts::E * reach / 4.0).ceil() as usize + 50).min(MAX_SERIES_TERMS);
    let (x, v) = (&f.nodes, &f.values);
    let front = 2.0f64.powf(-nu) / a;
    let mut inv_fact = 1.0;
    (0..kmax)
        .map(|k| {
            if k > 0 {
                inv_fact /= k as f64;
            }
            let s = k as f64 + nu + 1.0;
            let pq0: Vec<(f64, f64)> = x.iter().map(|&t| gamma_pq(s, a * t)).collect();
            let pq1: Vec<(f64, f64)> = x.iter().map(|&t| gamma_pq(s + 1.0, a * t)).collect();
            let delta = |pq: &[(f64, f64)], i: usize| {
                let ((pa, qa), (pb, qb)) = (pq[i], pq[i + 1]);
                if pa > 0.5 { qa - qb } else { pb - pa }
            };
            // the first segment extended linearly down to 0
            let slope0 = (v[1] - v[0]) / (x[1] - x[0]);
            let mut mu = v[0] * pq0[0].0 + slope0 * (s / a * pq1[0].0 - x[0] * pq0[0].0);
            for i in 0..x.len() - 1 {
                let slope = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
                let d0 = delta(&pq0, i);
                let d1 = delta(&pq1, i);
                mu += v[i] * d0 + slope * (s / a * d1 - x[i] * d0);
            }
            mu * (front * inv_fact)
        })
        .collect()
}

/// `|u|^nu e^(-(alpha/6) re u) K_nu(alpha |u| / 3)`.
fn outer_weight(p: &BesselSpaceParams, u: Complex64) -> f64 {
    k_weight(p.nu, p.alpha / 3.0, -p.alpha / 6.0, u)
}

fn outer_reach(f: &SampledFunction) -> f64 {
    if f.is_sampled() { OUTER_REACH_SAMPLED } else { OUTER_REACH_EXACT }
}

/// Area nodes carrying `weight * |u|^nu e^(-(alpha/6) re u) K_nu(alpha|u|/3) g(u)`.
struct OuterSum {
    u: Vec<Complex64>,
    w: Vec<Complex64>,
}

impl OuterSum {
    fn new(
        p: &BesselSpaceParams,
        radius: f64,
        opts: &AreaOptions,
        g: impl Fn(Complex64) -> Complex64 + Sync,
    ) -> Result<Self> {
        let pts = disk_points(radius, opts)?;
        let w = pts.par_iter().map(|&(u, wt)| g(u) * (wt * outer_weight(p, u))).collect();
        Ok(OuterSum { u: pts.into_iter().map(|(u, _)| u).collect(), w })
    }

    /// `int S(z u_conj; alpha/2) |u|^nu e^(-(alpha/6) re u) K_nu(alpha|u|/3) g(u) dsigma`.
    fn eval(&self, p: &BesselSpaceParams, z: Complex64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .u
            .par_iter()
            .zip(&self.w)
            .map(|(&u, &w)| w * reduced_bessel_i(p.nu, 0.5 * p.alpha, z * u.conj()))
            .collect();
        pairwise_sum(&terms, Complex64::new(0.0, 0.0))
    }
}

/// Outer integral with `g` on the default and the coarsened rule: `(value, |fine - coarse|)`.
fn outer_integral(
    p: &BesselSpaceParams,
    z: Complex64,
    opts: &AreaOptions,
    g: impl Fn(Complex64) -> Complex64 + Sync,
) -> Result<(Complex64, f64)> {
    let radius = OUTER_REACH_EXACT / p.alpha;
    let fine = OuterSum::new(p, radius, opts, &g)?.eval(p, z);
    let coarse = OuterSum::new(p, radius, &opts.coarse(), &g)?.eval(p, z);
    Ok((fine, (fine - coarse).norm()))
}

/// Finiteness proxy for the continuation criterion integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    /// Integral over the disk of radius `2R`.
    pub value: f64,
    pub finite: bool,
    /// Value on the disk of radius `2R` over the value on radius `R`.
    pub doubling_ratio: f64,
    #[serde(skip)]
    pub radius: f64,
}

/// `int |int F(t) I_nu(alpha sqrt(t z)) e^(-alpha t) t^(nu/2) dt|^2 e^(-(2/3) alpha re z) K_nu(alpha|z|/3) dsigma`
/// truncated to four disks with radii from `R` to `2R`; finite when the
/// increments shrink and their geometric tail is below [`DOUBLING_TOL`]
/// times the value.
pub fn criterion(p: &BesselSpaceParams, f: &SampledFunction, opts: &AreaOptions) -> Result<CriterionReport> {
    let reach = if f.is_sampled() { CRITERION_REACH_SAMPLED } else { CRITERION_REACH_EXACT };
    let radius = reach / p.alpha;
    let tr = Transform::new(p, f, 2.0 * reach)?;
    let value_on = |r: f64| -> Result<f64> {
        let pts = disk_points(r, opts)?;
        Ok(area_sum(&pts, |u| Complex64::new(tr.eval(p, u).norm_sqr() * outer_weight(p, u), 0.0)).re)
    };
    let mut v = [0.0; 4];
    for (slot, s) in v.iter_mut().zip([1.0, 4.0 / 3.0, 5.0 / 3.0, 2.0]) {
        *slot = value_on(s * radius)?;
    }
    let value = v[3];
    let doubling_ratio = if v[0] == 0.0 && value == 0.0 { 1.0 } else { value / v[0] };
    let finite = v.iter().all(|x| x.is_finite()) && extrapolated_tail(&v) <= DOUBLING_TOL * value;
    Ok(CriterionReport { value, finite, doubling_ratio, radius: 2.0 * radius })
}

/// Geometric extrapolation of the increments of a nondecreasing sequence;
/// infinite unless the increments shrink.
fn extrapolated_tail(v: &[f64; 4]) -> f64 {
    let noise = 1e-9 * v[3].abs();
    let d = [v[1] - v[0], v[2] - v[1], v[3] - v[2]];
    if d.iter().any(|&x| x < -noise) {
        return f64::INFINITY;
    }
    if d[2] <= noise {
        return 0.0;
    }
    if !(d[1] > d[2]) {
        return f64::INFINITY;
    }
    let r = d[2] / d[1];
    d[2] * r / (1.0 - r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationResult {
    pub targets: Vec<Complex64>,
    pub values: Vec<Complex64>,
    /// The larger of the change under halving the nodes and the change
    /// under shrinking the outer disk to 5/6 of its radius.
    pub errors: Vec<f64>,
    pub criterion: CriterionReport,
    /// See [`SampledFunction::tail_bias`]; zero for closures.
    pub tail_bias: f64,
}

/// The entire function on the plane whose restriction to the half-line is `F`:
/// `f(z) = (alpha^3/(24 pi)) e^(alpha z/4) int S(z u_conj; alpha/2) |u|^nu e^(-(alpha/6) re u) K_nu(alpha|u|/3) g(u) dsigma`.
///
/// Refuses to run unless [`criterion`] reports a finite value.
pub fn continue_function(
    p: &BesselSpaceParams,
    f: &SampledFunction,
    targets: &[Complex64],
    opts: &AreaOptions,
) -> Result<ContinuationResult> {
    let crit = criterion(p, f, opts)?;
    if !crit.finite {
        return Err(ContinuationError::CriterionNotFinite(crit));
    }
    let reach = outer_reach(f);
    let radius = reach / p.alpha;
    let tr = Transform::new(p, f, reach)?;
    let g = |u: Complex64| tr.eval(p, u);
    let fine = OuterSum::new(p, radius, opts, g)?;
    let coarse = OuterSum::new(p, radius, &opts.coarse(), g)?;
    let short = OuterSum::new(p, TRUNCATION_PROBE * radius, opts, g)?;
    let pref = p.alpha.powi(3) / (24.0 * PI);
    let (mut values, mut errors) = (Vec::with_capacity(targets.len()), Vec::with_capacity(targets.len()));
    for &z in targets {
        let scale = (z * (0.25 * p.alpha)).exp() * pref;
        let v = fine.eval(p, z) * scale;
        let rule = (v - coarse.eval(p, z) * scale).norm();
        let truncation = (v - short.eval(p, z) * scale).norm();
        errors.push(rule.max(truncation));
        values.push(v);
    }
    Ok(ContinuationResult { targets: targets.to_vec(), values, errors, criterion: crit, tail_bias: f.tail_bias(p) })
}

/// `e^(-alpha z/4) z^(nu/2)` against its area-integral representation.
pub fn verify_constant_identity(p: &BesselSpaceParams, z: Complex64, opts: &AreaOptions) -> Result<IdentityCheck> {
    let zn = z.powf(0.5 * p.nu);
    let (o, _) = outer_integral(p, z, opts, |_| Complex64::new(1.0, 0.0))?;
    let rhs = o * zn * (p.alpha * p.alpha / (24.0 * PI * 2.0f64.powf(p.nu)));
    Ok(IdentityCheck::new((-z * (0.25 * p.alpha)).exp() * zn, rhs))
}

/// `z^(n+nu/2) e^(-alpha z/4)` against the Laguerre-weighted area integral.
pub fn verify_lag2power(p: &BesselSpaceParams, n: usize, z: Complex64, opts: &AreaOptions) -> Result<IdentityCheck> {
    let (a, nu) = (p.alpha, p.nu);
    let (o, _) = outer_integral(p, z, opts, |u| laguerre_complex(n, nu, -u * (0.25 * a)))?;
    let c = gamma(n as f64 + 1.0) / (3.0 * PI * 2.0f64.powf(nu + 3.0) * a.powi(n as i32 - 2));
    let lhs = z.powf(n as f64 + 0.5 * nu) * (-z * (0.25 * a)).exp();
    Ok(IdentityCheck::new(lhs, o * z.powf(0.5 * nu) * c))
}

/// `int u^(n+nu/2) I_nu((alpha/2) sqrt(z u_conj)) e^(-alpha re u/6) K_nu(alpha|u|/3) dsigma`
/// against `(-1)^n 3 pi 2^(nu+3) 4^n n! alpha^(-n-2) z^(nu/2) e^(-alpha z/4) L_n^nu(alpha z)`.
///
/// The residual is relative to the right side with `|L_n^nu|` floored at 1.
pub fn verify_power2lag(p: &BesselSpaceParams, n: usize, z: Complex64, opts: &AreaOptions) -> Result<IdentityCheck> {
    let (a, nu) = (p.alpha, p.nu);
    let (o, _) = outer_integral(p, z, opts, |u| u.powi(n as i32))?;
    let zn = z.powf(0.5 * nu);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let c = sign * 3.0 * PI * 2.0f64.powf(nu + 3.0) * 4.0f64.powi(n as i32) * gamma(n as f64 + 1.0)
        / a.powi(n as i32 + 2);
    let envelope = zn * (-z * (0.25 * a)).exp() * c;
    let lag = laguerre_complex(n, nu, z * a);
    let (lhs, rhs) = (o * zn, envelope * lag);
    // scaled by the envelope so zeros of the Laguerre factor are not singular
    let residual = (lhs - rhs).norm() / (envelope.norm() * lag.norm().max(1.0));
    Ok(IdentityCheck { lhs, rhs, residual })
}

/// `e^(-alpha z/4) I_nu(sqrt z)` against its representation with `I_nu(sqrt u / 2)`
/// and the prefactor `alpha^2 e^(1/(4 alpha)) / (24 pi)`.
pub fn verify_bessel_case(p: &BesselSpaceParams, z: Complex64, opts: &AreaOptions) -> Result<IdentityCheck> {
    let (a, nu) = (p.alpha, p.nu);
    let (o, _) = outer_integral(p, z, opts, |u| reduced_bessel_i(nu, 0.5, u))?;
    let zn = z.powf(0.5 * nu);
    let lhs = (-z * (0.25 * a)).exp() * zn * reduced_bessel_i(nu, 1.0, z);
    Ok(IdentityCheck::new(lhs, o * zn * (a * a * (0.25 / a).exp() / (24.0 * PI))))
}

/// Coefficients `c_k` with `u^n = sum_k c_k L_k^nu(-alpha u / 4)`.
pub fn monomial_to_laguerre(p: &BesselSpaceParams, n: usize) -> Vec<f64> {
    let (a, nu) = (p.alpha, p.nu);
    let lead = 4.0f64.powi(n as i32) * gamma(n as f64 + 1.0) * pochhammer(nu + 1.0, n) / a.powi(n as i32);
    (0..=n)
        .map(|k| {
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            lead * sign / (gamma((n - k) as f64 + 1.0) * pochhammer(nu + 1.0, k))
        })
        .collect()
}

/// Largest monomial-coefficient error of `sum_k c_k L_k^nu(-alpha u/4) - u^n`,
/// relative to the largest intermediate coefficient.
pub fn monomial_laguerre_residual(p: &BesselSpaceParams, n: usize) -> f64 {
    let (a, nu) = (p.alpha, p.nu);
    let c = monomial_to_laguerre(p, n);
    let mut coef = vec![0.0f64; n + 1];
    let mut scale = 0.0f64;
    for (k, ck) in c.iter().enumerate() {
        // L_k^nu(-a u/4) = sum_j (j+nu+1)_{k-j} / ((k-j)! j!) (a/4)^j u^j
        for (j, cj) in coef.iter_mut().enumerate().take(k + 1) {
            let t = ck * pochhammer(j as f64 + nu + 1.0, k - j) / (gamma((k - j) as f64 + 1.0) * gamma(j as f64 + 1.0))
                * (0.25 * a).powi(j as i32);
            *cj += t;
            scale = scale.max(t.abs());
        }
    }
    coef[n] -= 1.0;
    coef.iter().fold(0.0f64, |m, x| m.max(x.abs())) / scale.max(1.0)
}

/// `phi_k(z) = alpha^k e^(alpha z/4) z^k / (4^k (alpha^(nu+1) Gamma(k+nu+1) k!)^(1/2))`.
pub fn phi_k(p: &BesselSpaceParams, k: usize, z: Complex64) -> Complex64 {
    let kf = k as f64;
    let norm = (p.alpha.powf(p.nu + 1.0) * gamma(kf + p.nu + 1.0) * gamma(kf + 1.0)).sqrt();
    (z * (0.25 * p.alpha)).exp() * (z * (0.25 * p.alpha)).powi(k as i32) / norm
}

/// `phi*_k(z) = alpha^(1/2) (alpha z)^(-nu/2) (-1)^k (k!)^(1/2) Gamma(k+nu+1)^(-1/2) L_k(alpha z)`,
/// principal branch.
pub fn phi_star_k(p: &BesselSpaceParams, k: usize, z: Complex64) -> Complex64 {
    let kf = k as f64;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let c = sign * p.alpha.sqrt() * (gamma(kf + 1.0) / gamma(kf + p.nu + 1.0)).sqrt();
    (z * p.alpha).powf(-0.5 * p.nu) * laguerre_complex(k, 0.0, z * p.alpha) * c
}

/// `(alpha^(2nu+3) / (2^(2nu+3) pi)) int f g_conj e^(-(alpha/2) re z) |z|^nu K_nu(alpha|z|/2) dsigma`.
pub fn hr_inner_product(
    p: &BesselSpaceParams,
    f: impl Fn(Complex64) -> Complex64 + Sync,
    g: impl Fn(Complex64) -> Complex64 + Sync,
    opts: &AreaOptions,
) -> Result<Complex64> {
    let (a, nu) = (p.alpha, p.nu);
    let pts = plane_points(0.5 * a, opts)?;
    let s = area_sum(&pts, |z| f(z) * g(z).conj() * k_weight(nu, 0.5 * a, -0.5 * a, z));
    Ok(s * (a.powf(2.0 * nu + 3.0) / (2.0f64.powf(2.0 * nu + 3.0) * PI)))
}

/// `int phi*_k conj(phi*_m) exp(2 alpha re z/(theta-1)) |z|^nu K_0(2 alpha sqrt(theta) |z|/(theta-1)) dsigma`
/// against `delta_km pi (theta-1) theta^k (-1)^(m+k) (m! k!)^(1/2) / (2 alpha^(nu+1) (Gamma(m+nu+1) Gamma(k+nu+1))^(1/2))`.
///
/// The residual is absolute relative to the diagonal scale so that
/// off-diagonal entries are meaningful.
pub fn theta_orthogonality(
    p: &BesselSpaceParams,
    k: usize,
    m: usize,
    theta: f64,
    opts: &AreaOptions,
) -> Result<IdentityCheck> {
    if !(theta > 1.0) {
        return Err(ContinuationError::InvalidParams(format!("theta must exceed 1, got {theta}")));
    }
    let (a, nu) = (p.alpha, p.nu);
    let c = 2.0 * a * theta.sqrt() / (theta - 1.0);
    let shift = 2.0 * a / (theta - 1.0);
    let pts = plane_points(c - shift, opts)?;
    let lhs = area_sum(&pts, |z| {
        phi_star_k(p, k, z) * phi_star_k(p, m, z).conj() * (z.norm().powf(nu) * k_weight(0.0, c, shift, z))
    });
    let diag = |j: usize| {
        let jf = j as f64;
        PI * (theta - 1.0) * theta.powi(j as i32) * gamma(jf + 1.0) / (2.0 * a.powf(nu + 1.0) * gamma(jf + nu + 1.0))
    };
    let scale = (diag(k) * diag(m)).sqrt();
    let rhs = if k == m { diag(k) } else { 0.0 };
    let rhs = Complex64::new(rhs, 0.0);
    Ok(IdentityCheck { lhs, rhs, residual: (lhs - rhs).norm() / scale })
}

/// Truncated expansion `f*_N = sum_k a_k phi*_k` with its weighted residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierResult {
    pub params: BesselSpaceParams,
    pub coefficients: Vec<Complex64>,
    /// `||f*_n - F||` in `L2(W)` for `n = 0..=N`.
    pub residuals: Vec<f64>,
    /// Whether the residuals decrease strictly in `n`.
    pub decreasing: bool,
}

impl FourierResult {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients.iter().enumerate().map(|(k, a)| a * phi_star_k(&self.params, k, z)).sum()
    }
}

/// The coefficients
/// `a_k = alpha^(k+nu/2+5/2) / (2^(nu+3) pi 4^k (Gamma(k+nu+1) k!)^(1/2)) int F(t) e^(-alpha t) t^(nu/2) A_k(t) dt`
/// with `A_k(t) = int e^(-alpha u/4) u_conj^k u^(-nu/2) I_nu(alpha sqrt(t u)) |u|^nu K_nu(alpha|u|/2) dsigma`.
///
/// The half-line integral is done first, per area node, so the area rule
/// is shared by every `k`.
pub fn fourier_approx(
    p: &BesselSpaceParams,
    f: &SampledFunction,
    n_max: usize,
    opts: &AreaOptions,
) -> Result<FourierResult> {
    if n_max > MAX_FOURIER_N {
        return Err(ContinuationError::TooManyTerms(n_max));
    }
    let (a, nu) = (p.alpha, p.nu);
    let reach = OUTER_REACH_EXACT;
    let tr = Transform::new(p, f, reach)?;
    let pts = disk_points(reach / a, opts)?;
    let base: Vec<(Complex64, Complex64)> =
        pts.par_iter().map(|&(u, w)| (u, tr.eval(p, u) * (w * k_weight(nu, 0.5 * a, 0.0, u)))).collect();
    let coefficients: Vec<Complex64> = (0..=n_max)
        .map(|k| {
            let kf = k as f64;
            let terms: Vec<Complex64> = base.iter().map(|&(u, b)| b * u.conj().powi(k as i32)).collect();
            let c = a.powf(kf + 0.5 * nu + 2.5)
                / (2.0f64.powf(nu + 3.0) * PI * 4.0f64.powi(k as i32) * (gamma(kf + nu + 1.0) * gamma(kf + 1.0)).sqrt());
            pairwise_sum(&terms, Complex64::new(0.0, 0.0)) * c
        })
        .collect();
    let nodes = f.halfline_nodes(p, 16, true)?;
    let mut partial: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); nodes.len()];
    let target: Vec<Complex64> = nodes.iter().map(|&(t, _)| f.eval(t)).collect();
    let mut residuals = Vec::with_capacity(n_max + 1);
    for (k, ak) in coefficients.iter().enumerate() {
        for (s, &(t, _)) in partial.iter_mut().zip(&nodes) {
            *s += ak * phi_star_k(p, k, Complex64::new(t, 0.0));
        }
        let sq: f64 = nodes
            .iter()
            .zip(&partial)
            .zip(&target)
            .map(|((&(t, w), s), ft)| w * (s - ft).norm_sqr() * p.weight(t))
            .sum();
        residuals.push(sq.sqrt());
    }
    let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);
    Ok(FourierResult { params: *p, coefficients, residuals, decreasing })
}
