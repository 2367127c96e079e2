//! Deterministic quadrature on the half-line, the plane and disks.
//!
//! Radial integrals use composite Gauss-Legendre panels on `s in [0, 1]`
//! after the substitution `r = -ln(1 - s) / rate` (or `r = R s` on a disk).
//! Panels are graded geometrically toward both ends of `[0, 1]`, which keeps
//! high order in the presence of algebraic or logarithmic endpoint
//! singularities. Angles use the periodic trapezoid rule.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

pub const DEFAULT_HALFLINE_TOL: f64 = 1e-8;
pub const DEFAULT_AREA_TOL: f64 = 1e-6;
pub const DEFAULT_NESTED_TOL: f64 = 1e-4;

const HALFLINE_LEVELS: usize = 24;
const AREA_LEVELS: usize = 12;
pub const GRADING_RATIO: f64 = 0.15;

/// Node counts above this are evaluated on the rayon pool.
const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand does not decay as declared: |f| e^(rate r) grows from {at_near:e} to {at_far:e}")]
    TailBoundViolation { at_near: f64, at_far: f64 },
    #[error("no convergence: last value {value:e}, last difference {diff:e}")]
    NonConvergence { value: f64, diff: f64 },
    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),
}

/// How the integrand decays in the radial variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    /// `|f(r)| <~ r^c exp(-rate r)`, the tail of a `K`-Bessel weight.
    KBessel { rate: f64 },
    /// `|f(r)| <~ exp(-rate r^2)`.
    Gaussian { rate: f64 },
    /// `|f(r)| <~ exp(-rate r^power)` for `0 < power`.
    Stretched { rate: f64, power: f64 },
    /// Integration stops at `radius`; the integrand may be singular there.
    Cutoff { radius: f64 },
}

impl Decay {
    fn validate(&self) -> Result<(), QuadError> {
        let ok = match *self {
            Decay::KBessel { rate } | Decay::Gaussian { rate } => rate > 0.0 && rate.is_finite(),
            Decay::Stretched { rate, power } => rate > 0.0 && rate.is_finite() && power > 0.0 && power.is_finite(),
            Decay::Cutoff { radius } => radius > 0.0 && radius.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidRule(format!("bad decay descriptor {self:?}")))
        }
    }

    fn map_rate(&self) -> Option<f64> {
        match *self {
            Decay::KBessel { rate } => Some(rate),
            Decay::Gaussian { rate } => Some(rate.sqrt()),
            Decay::Stretched { rate, .. } => Some(rate),
            Decay::Cutoff { .. } => None,
        }
    }

    /// `(r(s), r'(s))` given `s` and `u = 1 - s`, the latter exact near 1.
    fn map(&self, s: f64, u: f64) -> (f64, f64) {
        let neg_log = if s < 0.5 { -(-s).ln_1p() } else { -u.ln() };
        if let Decay::Stretched { rate, power } = *self {
            // r = y^(1/power) with y = -ln(1 - s) / rate
            let y = neg_log / rate;
            let dy = 1.0 / (rate * u);
            let r = y.powf(1.0 / power);
            return (r, r / (power * y) * dy);
        }
        match self.map_rate() {
            Some(rate) => (neg_log / rate, 1.0 / (rate * u)),
            None => {
                let Decay::Cutoff { radius } = *self else { unreachable!() };
                (radius * s, radius)
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, cached by order.
pub fn gauss_legendre(m: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }
    let rule = Arc::new(compute_gauss_legendre(m));
    cache.lock().unwrap().insert(m, rule.clone());
    rule
}

fn compute_gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else if m == 1 { z } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// Sum in a fixed binary tree so the result does not depend on how the
/// terms were produced.
pub fn pairwise_sum<T: Copy + Add<Output = T>>(xs: &[T], zero: T) -> T {
    match xs.len() {
        0 => zero,
        1 => xs[0],
        n if n <= 8 => xs[1..].iter().fold(xs[0], |a, &b| a + b),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l, zero) + pairwise_sum(r, zero)
        }
    }
}

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A fixed radial rule: nodes `r_i` and weights `w_i` approximating
/// `int f(r) dr` over the half-line or `[0, R]`.
#[derive(Clone, Debug)]
pub struct RadialRule {
    pub decay: Decay,
    pub nodes_per_panel: usize,
    pub levels: usize,
    pub ratio: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    pub fn new(decay: Decay, nodes_per_panel: usize) -> Result<Self, QuadError> {
        Self::with_grading(decay, nodes_per_panel, HALFLINE_LEVELS, GRADING_RATIO)
    }

    pub fn with_grading(decay: Decay, nodes_per_panel: usize, levels: usize, ratio: f64) -> Result<Self, QuadError> {
        decay.validate()?;
        if nodes_per_panel == 0 || !(ratio > 0.0 && ratio < 1.0) {
            return Err(QuadError::InvalidRule(format!(
                "nodes per panel {nodes_per_panel}, grading ratio {ratio}"
            )));
        }
        let gl = gauss_legendre(nodes_per_panel);
        // breaks carried as (s, 1 - s) so both ends keep full relative precision
        let mut breaks = vec![(0.0, 1.0)];
        for j in (0..=levels).rev() {
            let s = 0.5 * ratio.powi(j as i32);
            breaks.push((s, 1.0 - s));
        }
        for j in 1..=levels {
            let u = 0.5 * ratio.powi(j as i32);
            breaks.push((1.0 - u, u));
        }
        breaks.push((1.0, 0.0));
        let mut nodes = Vec::with_capacity(breaks.len() * nodes_per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let ((a, ua), (b, ub)) = (pair[0], pair[1]);
            let (c, h) = (0.5 * (a + b), if a < 0.5 { 0.5 * (b - a) } else { 0.5 * (ua - ub) });
            let uc = 0.5 * (ua + ub);
            for (x, w) in gl.0.iter().zip(gl.1.iter()) {
                let s = c + h * x;
                let (r, dr) = decay.map(s, uc - h * x);
                if dr.is_finite() && r.is_finite() {
                    nodes.push(r);
                    weights.push(w * h * dr);
                }
            }
        }
        Ok(RadialRule { decay, nodes_per_panel, levels, ratio, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn refined(&self) -> Result<Self, QuadError> {
        Self::with_grading(self.decay, 2 * self.nodes_per_panel, self.levels, self.ratio)
    }

    pub fn apply<T: QuadValue>(&self, f: impl Fn(f64) -> T) -> T {
        let terms: Vec<T> = self.nodes.iter().zip(&self.weights).map(|(&r, &w)| f(r) * w).collect();
        pairwise_sum(&terms, T::zero())
    }

    pub fn apply_par<T: QuadValue>(&self, f: impl Fn(f64) -> T + Sync) -> T {
        let terms: Vec<T> = self.nodes.par_iter().zip(&self.weights).map(|(&r, &w)| f(r) * w).collect();
        pairwise_sum(&terms, T::zero())
    }
}

/// Spot-check the declared decay at three radii far in the tail.
pub fn check_tail<T: QuadValue>(f: &impl Fn(f64) -> T, decay: Decay) -> Result<(), QuadError> {
    let Some(rate) = decay.map_rate() else { return Ok(()) };
    let envelope = |r: f64| match decay {
        Decay::Gaussian { rate } => f(r).magnitude() * (rate * r * r).min(700.0).exp(),
        Decay::Stretched { rate, power } => f(r).magnitude() * (rate * r.powf(power)).min(700.0).exp() / (1.0 + r),
        _ => f(r).magnitude() * (rate * r).min(700.0).exp() / (1.0 + r),
    };
    let radii = match decay {
        Decay::Stretched { power, .. } => [25.0, 50.0, 100.0].map(|y: f64| (y / rate).powf(1.0 / power)),
        _ => [25.0 / rate, 50.0 / rate, 100.0 / rate],
    };
    let vals: Vec<f64> = radii.iter().map(|&r| envelope(r)).collect();
    if vals.iter().any(|v| v.is_nan()) || vals[2] > 1e6 * vals[0].max(f64::MIN_POSITIVE) && vals[2] > vals[1] {
        return Err(QuadError::TailBoundViolation { at_near: vals[0], at_far: vals[2] });
    }
    Ok(())
}

/// `int_0^inf f(r) dr` to relative tolerance `tol`.
pub fn integrate_halfline(f: impl Fn(f64) -> f64, decay: Decay, tol: f64) -> Result<f64, QuadError> {
    integrate_radial(f, decay, tol)
}

pub fn integrate_radial<T: QuadValue>(f: impl Fn(f64) -> T, decay: Decay, tol: f64) -> Result<T, QuadError> {
    check_tail(&f, decay)?;
    let mut rule = RadialRule::new(decay, 8)?;
    let mut prev = rule.apply(&f);
    let mut diff = f64::INFINITY;
    for _ in 0..4 {
        rule = rule.refined()?;
        let cur = rule.apply(&f);
        diff = (cur + prev * -1.0).magnitude();
        prev = cur;
        if diff <= tol * cur.magnitude() || diff <= 1e-300 {
            return Ok(cur);
        }
    }
    Err(QuadError::NonConvergence { value: prev.magnitude(), diff })
}

/// Radial times angular tensor rule for `int f dsigma` over the plane or a disk.
#[derive(Clone, Debug)]
pub struct AreaRule {
    pub radial: RadialRule,
    pub angular_nodes: usize,
}

impl AreaRule {
    pub fn new(decay: Decay, radial_nodes: usize, angular_nodes: usize) -> Result<Self, QuadError> {
        if angular_nodes < 16 || angular_nodes % 2 != 0 {
            return Err(QuadError::InvalidRule(format!(
                "angular node count must be even and at least 16, got {angular_nodes}"
            )));
        }
        let radial = RadialRule::with_grading(decay, radial_nodes, AREA_LEVELS, GRADING_RATIO)?;
        Ok(AreaRule { radial, angular_nodes })
    }

    pub fn refined(&self) -> Result<Self, QuadError> {
        Ok(AreaRule { radial: self.radial.refined()?, angular_nodes: 2 * self.angular_nodes })
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.angular_nodes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All nodes `z` with weights, ordered radius-major.
    pub fn points(&self) -> Vec<(Complex64, f64)> {
        let n = self.angular_nodes;
        let dphi = 2.0 * PI / n as f64;
        let mut out = Vec::with_capacity(self.len());
        for (&r, &w) in self.radial.nodes.iter().zip(&self.radial.weights) {
            for j in 0..n {
                out.push((Complex64::from_polar(r, j as f64 * dphi), r * w * dphi));
            }
        }
        out
    }
}

/// `int f dsigma`, evaluating nodes in parallel for large rules.
pub fn integrate_area<T: QuadValue>(f: impl Fn(Complex64) -> T + Sync, rule: &AreaRule) -> T {
    let pts = rule.points();
    let terms: Vec<T> = if pts.len() >= PAR_THRESHOLD {
        pts.par_iter().map(|&(z, w)| f(z) * w).collect()
    } else {
        pts.iter().map(|&(z, w)| f(z) * w).collect()
    };
    pairwise_sum(&terms, T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Refined<T> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
    pub refinements: usize,
}

/// Double the radial and angular node counts until two successive values
/// differ by less than `tol` (absolute) or `max_refinements` is reached.
pub fn refine_until<T: QuadValue>(
    f: impl Fn(Complex64) -> T + Sync,
    rule: &AreaRule,
    tol: f64,
    max_refinements: usize,
) -> Result<Refined<T>, QuadError> {
    let mut value = integrate_area(&f, rule);
    if tol.is_infinite() {
        return Ok(Refined { value, error: f64::INFINITY, converged: true, refinements: 0 });
    }
    let mut current = rule.clone();
    let mut error = f64::INFINITY;
    for k in 1..=max_refinements {
        current = current.refined()?;
        let next = integrate_area(&f, &current);
        error = (next + value * -1.0).magnitude();
        value = next;
        if error < tol {
            return Ok(Refined { value, error, converged: true, refinements: k });
        }
    }
    Ok(Refined { value, error, converged: false, refinements: max_refinements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun;

    #[test]
    fn gauss_legendre_exactness() {
        for m in [1usize, 2, 5, 16, 33] {
            let g = gauss_legendre(m);
            for deg in 0..2 * m {
                let got: f64 = g.0.iter().zip(&g.1).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-14, "m={m} deg={deg}");
            }
        }
    }

    #[test]
    fn halfline_examples() {
        let d = Decay::KBessel { rate: 1.0 };
        let v = integrate_halfline(|t| (-t).exp(), d, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        let v = integrate_halfline(|t| t * t * (-t).exp(), d, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 2e-13);
        let v = integrate_halfline(|t| (-t * t).exp(), Decay::Gaussian { rate: 1.0 }, 1e-12).unwrap();
        assert!((v - 0.5 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn halfline_endpoint_singularities() {
        let d = Decay::KBessel { rate: 1.0 };
        // int t^{-1/2} e^{-t} = sqrt(pi)
        let v = integrate_halfline(|t| (-t).exp() / t.sqrt(), d, 1e-12).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-11);
        // int K_0(t) = pi/2
        let v = integrate_halfline(|t| specfun::bessel_k(0.0, t).unwrap_or(0.0), d, 1e-10).unwrap();
        assert!((v - 0.5 * PI).abs() < 1e-10);
        // int_0^1 ln(1/t) = 1 on a cutoff
        let v = integrate_halfline(|t| -t.ln(), Decay::Cutoff { radius: 1.0 }, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn key_identity_example() {
        // int_0^inf e^{-t^2} J_nu(zt) J_nu(ut) t dt at nu=1/2, z=u=1, gamma=1
        let v = integrate_halfline(
            |t| {
                if t > 40.0 {
                    return 0.0;
                }
                let j = specfun::bessel_j(0.5, t).unwrap();
                (-t * t).exp() * j * j * t
            },
            Decay::Gaussian { rate: 1.0 },
            1e-12,
        )
        .unwrap();
        let want = 0.5 * (-0.5f64).exp() * specfun::bessel_i(0.5, 0.5).unwrap();
        assert!((v - want).abs() < 1e-12 * want);
    }

    #[test]
    fn stretched_decay() {
        // int_0^inf exp(-r^(1/2)) dr = 2
        let v = integrate_halfline(|r| (-r.sqrt()).exp(), Decay::Stretched { rate: 1.0, power: 0.5 }, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        // int_0^inf r exp(-2 r^(2/3)) dr = (3/2) Gamma(3) / 2^3
        let v = integrate_halfline(|r| r * (-2.0 * r.powf(2.0 / 3.0)).exp(), Decay::Stretched { rate: 2.0, power: 2.0 / 3.0 }, 1e-12)
            .unwrap();
        assert!((v - 1.5 * 2.0 / 8.0).abs() < 1e-11);
    }

    #[test]
    fn tail_violation_detected() {
        let r = integrate_halfline(|t| (0.5 * t).exp() * (-0.1 * t).exp(), Decay::KBessel { rate: 1.0 }, 1e-8);
        assert!(matches!(r, Err(QuadError::TailBoundViolation { .. })));
    }

    #[test]
    fn area_examples() {
        let rule = AreaRule::new(Decay::Gaussian { rate: 1.0 }, 16, 16).unwrap();
        let v: f64 = integrate_area(|z| (-z.norm_sqr()).exp(), &rule);
        assert!((v / PI - 1.0).abs() < 1e-13);
        let v: f64 = integrate_area(|z| z.norm_sqr() * (-z.norm_sqr()).exp(), &rule);
        assert!((v / PI - 1.0).abs() < 1e-13);
    }

    #[test]
    fn knorm_moment_example() {
        // alpha = 2, nu = 1/2 weight against |z|^2 gives 4 Gamma(5/2) / 4
        let (alpha, nu) = (2.0f64, 0.5f64);
        let pre = alpha.powf(nu + 2.0) / (PI * 2f64.powf(nu + 1.0));
        let rule = AreaRule::new(Decay::KBessel { rate: alpha }, 16, 16).unwrap();
        let v: f64 = integrate_area(
            |z| {
                let r = z.norm();
                pre * r.powf(nu) * specfun::bessel_k(nu, alpha * r).unwrap() * r * r
            },
            &rule,
        );
        let want = 4.0 * specfun::gamma(2.5) / alpha.powi(2);
        assert!((v - want).abs() < 1e-9 * want, "{v} {want}");
    }

    #[test]
    fn rotation_invariance_and_angular_exactness() {
        let rule = AreaRule::new(Decay::KBessel { rate: 1.0 }, 12, 16).unwrap();
        let f = |r: f64| (-r).exp() * (1.0 + r * r);
        let area: f64 = integrate_area(|z| f(z.norm()), &rule);
        let radial = 2.0 * PI * rule.radial.apply(|r| r * f(r));
        assert!((area - radial).abs() < 1e-12 * radial);
        for (m, n) in [(1i32, 0i32), (3, 1), (0, 7), (5, 10)] {
            let v: Complex64 = integrate_area(|z| z.powi(m) * z.conj().powi(n) * (-z.norm()).exp(), &rule);
            let scale: f64 = integrate_area(|z| z.norm().powi(m + n) * (-z.norm()).exp(), &rule);
            assert!(v.norm() < 1e-14 * scale, "m={m} n={n} {v}");
        }
    }

    #[test]
    fn refinement_behaviour() {
        let rule = AreaRule::new(Decay::Gaussian { rate: 1.0 }, 8, 16).unwrap();
        let r = refine_until(|z| (-z.norm_sqr()).exp(), &rule, 1e-8, 6).unwrap();
        assert!(r.converged && r.refinements <= 3);
        assert!((r.value - PI).abs() < 1e-10);
        let once = refine_until(|z| (-z.norm_sqr()).exp(), &rule, f64::INFINITY, 6).unwrap();
        assert_eq!(once.refinements, 0);
        assert_eq!(once.value, integrate_area(|z| (-z.norm_sqr()).exp(), &rule));
        // indicator of |z| < 0.7 inside the unit disk: jump not aligned with panels
        let disk = AreaRule::new(Decay::Cutoff { radius: 1.0 }, 4, 16).unwrap();
        let slow = refine_until(|z| if z.norm() < 0.7 { 1.0 } else { 0.0 }, &disk, 1e-12, 2).unwrap();
        assert!(!slow.converged);
    }

    #[test]
    fn parallel_is_bit_stable() {
        let rule = AreaRule::new(Decay::KBessel { rate: 1.0 }, 16, 256).unwrap();
        assert!(rule.len() >= PAR_THRESHOLD);
        let f = |z: Complex64| (-z.norm()).exp() * (1.0 + z.re * z.im);
        let a: f64 = integrate_area(f, &rule);
        let pts = rule.points();
        let terms: Vec<f64> = pts.iter().map(|&(z, w)| f(z) * w).collect();
        assert_eq!(a.to_bits(), pairwise_sum(&terms, 0.0).to_bits());
    }
}
