//! Topological classification of Wright-psi kernel spaces.
//!
//! The coefficient sequence `prod Gamma(B_i k + b_i) / prod Gamma(A_i k + a_i)`
//! is the norm weight of `z^k`; the kernel has the reciprocal coefficients.
//! Up to norm equivalence the space depends only on `(alpha, mu, nu)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::quad::Decay;
use crate::rk_space::{Geometry, HypParams, WeightSpec};
use crate::specfun::{self, SpecError};

/// Tolerance for comparing user-entered real invariants.
pub const INVARIANT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("numerator and denominator lists must pair up: {0}")]
    Shape(String),
    #[error("all A, a, B, b must be positive and finite, got {0}")]
    NonPositive(f64),
    #[error("mu = {0} is negative")]
    NegativeMu(f64),
    #[error("k must be at least 1")]
    SmallK,
    #[error("no closed-form kernel: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// `(A_i, a_i)` in the denominator, `(B_i, b_i)` in the numerator.
#[derive(Clone, Debug, PartialEq)]
pub struct WrightParams {
    pub big_a: Vec<f64>,
    pub a: Vec<f64>,
    pub big_b: Vec<f64>,
    pub b: Vec<f64>,
}

impl WrightParams {
    pub fn new(big_a: Vec<f64>, a: Vec<f64>, big_b: Vec<f64>, b: Vec<f64>) -> Result<Self, TopologyError> {
        if big_a.len() != a.len() || big_b.len() != b.len() {
            return Err(TopologyError::Shape(format!(
                "|A| = {}, |a| = {}, |B| = {}, |b| = {}",
                big_a.len(),
                a.len(),
                big_b.len(),
                b.len()
            )));
        }
        if let Some(&bad) = big_a.iter().chain(&a).chain(&big_b).chain(&b).find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(TopologyError::NonPositive(bad));
        }
        let w = Self { big_a, a, big_b, b };
        let mu = w.mu();
        if mu < -INVARIANT_TOL {
            return Err(TopologyError::NegativeMu(mu));
        }
        Ok(w)
    }

    /// The Wright form of a positive-parameter plane or disk space; the
    /// returned `theta` rescales `z conj(u)` and is absorbed into `nu` by
    /// [`TopologyInvariants::with_theta`].
    pub fn from_hyp(h: &HypParams) -> Result<(Self, f64), TopologyError> {
        // c_k = Gamma(a) / Gamma(b) * Gamma(k + b) Gamma(k + 1) / Gamma(k + a) * theta^(-k) in the plane
        let ones = |n: usize| vec![1.0; n];
        let mut b = h.b.clone();
        b.push(1.0);
        let w = Self::new(ones(h.a.len()), h.a.clone(), ones(b.len()), b)?;
        let theta = match h.geometry {
            Geometry::Plane => h.theta,
            Geometry::Disk => 1.0 / h.theta,
        };
        Ok((w, theta))
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn alpha(&self) -> f64 {
        self.b.iter().sum::<f64>() - self.a.iter().sum::<f64>() + (self.p() as f64 - self.q() as f64) / 2.0
    }

    pub fn mu(&self) -> f64 {
        self.big_b.iter().sum::<f64>() - self.big_a.iter().sum::<f64>()
    }

    pub fn nu(&self) -> f64 {
        let ln = self.big_b.iter().map(|&x| x * x.ln()).sum::<f64>() - self.big_a.iter().map(|&x| x * x.ln()).sum::<f64>();
        ln.exp()
    }

    /// `ln c_k` for the coefficient `prod Gamma(B k + b) / prod Gamma(A k + a)`.
    pub fn log_coefficient(&self, k: usize) -> f64 {
        let kf = k as f64;
        let num: f64 = self.big_b.iter().zip(&self.b).map(|(&bb, &b)| specfun::log_gamma_signed(bb * kf + b).0).sum();
        let den: f64 = self.big_a.iter().zip(&self.a).map(|(&aa, &a)| specfun::log_gamma_signed(aa * kf + a).0).sum();
        num - den
    }

    /// Appends `(1, c)` to both the numerator and the denominator.
    pub fn with_cancelling_pair(&self, c: f64) -> Result<Self, TopologyError> {
        let mut w = self.clone();
        w.big_a.push(1.0);
        w.a.push(c);
        w.big_b.push(1.0);
        w.b.push(c);
        Self::new(w.big_a, w.a, w.big_b, w.b)
    }

    /// Limit of `c_k` over the asymptote: `(2 pi)^((q-p)/2) prod B^(b-1/2) / prod A^(a-1/2)`.
    pub fn asymptote_constant(&self) -> f64 {
        let ln = 0.5 * (self.q() as f64 - self.p() as f64) * (2.0 * std::f64::consts::PI).ln()
            + self.big_b.iter().zip(&self.b).map(|(&bb, &b)| (b - 0.5) * bb.ln()).sum::<f64>()
            - self.big_a.iter().zip(&self.a).map(|(&aa, &a)| (a - 0.5) * aa.ln()).sum::<f64>();
        ln.exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Entire functions, Mittag-Leffler kernel.
    Plane,
    /// Functions in the disk of radius `sqrt(nu)`, binomial kernel.
    Disk,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Plane => "mittag-leffler",
            Model::Disk => "bergman-selberg",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopologyInvariants {
    pub alpha: f64,
    pub mu: f64,
    pub nu: f64,
    /// Derivative order of the model norm.
    pub l: u32,
}

impl TopologyInvariants {
    pub fn model(&self) -> Model {
        if self.mu.abs() <= INVARIANT_TOL {
            Model::Disk
        } else {
            Model::Plane
        }
    }

    /// Whether a closed-form model kernel exists (the `l = 0` cases).
    pub fn kernel_available(&self) -> bool {
        match self.model() {
            Model::Plane => self.alpha > -0.5,
            Model::Disk => self.alpha < 0.0,
        }
    }

    /// Invariants of the space with kernel argument `theta z conj(u)`.
    pub fn with_theta(&self, theta: f64) -> Self {
        Self { nu: self.nu / theta, ..*self }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= INVARIANT_TOL * (1.0 + x.abs().max(y.abs()));
        close(self.alpha, other.alpha) && close(self.mu, other.mu) && close(self.nu, other.nu)
    }
}

pub fn invariants(w: &WrightParams) -> TopologyInvariants {
    let (alpha, mu, nu) = (w.alpha(), w.mu().max(0.0), w.nu());
    let l = if mu > INVARIANT_TOL {
        (((-alpha - 0.5) / mu).floor() + 1.0).max(0.0)
    } else {
        (alpha.floor() + 1.0).max(0.0)
    };
    let mu = if mu <= INVARIANT_TOL { 0.0 } else { mu };
    TopologyInvariants { alpha, mu, nu, l: l as u32 }
}

/// `ln(k^alpha e^(-mu k) k^(mu k) nu^k)`.
pub fn log_gamma_ratio_asymptote(w: &WrightParams, k: usize) -> Result<f64, TopologyError> {
    if k == 0 {
        return Err(TopologyError::SmallK);
    }
    let inv = invariants(w);
    let kf = k as f64;
    let lk = kf.ln();
    Ok(inv.alpha * lk - inv.mu * kf + inv.mu * kf * lk + kf * inv.nu.ln())
}

pub fn gamma_ratio_asymptote(w: &WrightParams, k: usize) -> Result<f64, TopologyError> {
    Ok(log_gamma_ratio_asymptote(w, k)?.exp())
}

/// `c_k` divided by its asymptote, formed in log space.
pub fn asymptote_ratio(w: &WrightParams, k: usize) -> Result<f64, TopologyError> {
    Ok((w.log_coefficient(k) - log_gamma_ratio_asymptote(w, k)?).exp())
}

/// `E_{mu, alpha+1/2}(mu^mu z conj(u) / nu)` or `(1 - z conj(u) / nu)^(alpha-1)`.
pub fn model_kernel(inv: &TopologyInvariants, z: Complex64, u_conj: Complex64) -> Result<Complex64, TopologyError> {
    let t = z * u_conj;
    match inv.model() {
        Model::Plane => {
            if !inv.kernel_available() {
                return Err(TopologyError::Unsupported(format!("alpha = {} <= -1/2 needs derivative order l = {}", inv.alpha, inv.l)));
            }
            Ok(specfun::mittag_leffler_complex(inv.mu, inv.alpha + 0.5, t * inv.mu.powf(inv.mu) / inv.nu)?)
        }
        Model::Disk => {
            if !inv.kernel_available() {
                return Err(TopologyError::Unsupported(format!("alpha = {} >= 0 needs derivative order l = {}", inv.alpha, inv.l)));
            }
            if t.norm() >= inv.nu {
                return Err(TopologyError::Unsupported(format!("|z u| = {} outside the disk of radius {}", t.norm(), inv.nu)));
            }
            Ok((Complex64::new(1.0, 0.0) - t / inv.nu).powf(inv.alpha - 1.0))
        }
    }
}

/// `ln` of the `k`-th Taylor coefficient of [`model_kernel`] in `z conj(u)`.
pub fn log_model_kernel_coefficient(inv: &TopologyInvariants, k: usize) -> f64 {
    let kf = k as f64;
    match inv.model() {
        Model::Plane => kf * (inv.mu * inv.mu.ln() - inv.nu.ln()) - specfun::log_gamma_signed(inv.mu * kf + inv.alpha + 0.5).0,
        Model::Disk => {
            let c = 1.0 - inv.alpha;
            specfun::log_gamma_signed(c + kf).0 - specfun::log_gamma_signed(c).0 - specfun::log_gamma_signed(kf + 1.0).0 - kf * inv.nu.ln()
        }
    }
}

/// The radial weight of the `l = 0` model norm, normalized so that its
/// moments are exactly the reciprocal model-kernel coefficients.
pub fn model_weight(inv: &TopologyInvariants) -> Result<WeightSpec, TopologyError> {
    if !inv.kernel_available() {
        return Err(TopologyError::Unsupported(format!("model norm with l = {}", inv.l)));
    }
    let (alpha, mu, nu) = (inv.alpha, inv.mu, inv.nu);
    match inv.model() {
        Model::Plane => {
            // exp(-mu nu^(-1/mu) r^(2/mu)) r^((2 alpha + 1)/mu - 2)
            let lambda = mu * nu.powf(-1.0 / mu);
            let scale = lambda.powf(alpha + 0.5) / (std::f64::consts::PI * mu);
            let w = move |r: f64| scale * (-lambda * r.powf(2.0 / mu)).exp() * r.powf((2.0 * alpha + 1.0) / mu - 2.0);
            Ok(WeightSpec::explicit(w, f64::INFINITY, Decay::Stretched { rate: lambda, power: 2.0 / mu }))
        }
        Model::Disk => {
            let scale = -alpha / (std::f64::consts::PI * nu);
            let w = move |r: f64| scale * (1.0 - r * r / nu).powf(-alpha - 1.0);
            Ok(WeightSpec::explicit(w, nu.sqrt(), Decay::Cutoff { radius: nu.sqrt() }))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub invariants_agree: bool,
    /// `ln(c1_k / c2_k)` for `k = 0..=K`.
    pub log_ratios: Vec<f64>,
    /// Smallest `C` with every ratio in `[1/C, C]`.
    pub bound: f64,
    /// Mean growth of the log ratio per step over the second half.
    pub divergence_rate: f64,
}

pub fn norm_equivalence_report(w1: &WrightParams, w2: &WrightParams, k: usize) -> EquivalenceReport {
    let log_ratios: Vec<f64> = (0..=k).map(|j| w1.log_coefficient(j) - w2.log_coefficient(j)).collect();
    let bound = log_ratios.iter().fold(0.0f64, |m, v| m.max(v.abs())).exp();
    let half = k / 2;
    let divergence_rate = if k > half { (log_ratios[k] - log_ratios[half]) / (k - half) as f64 } else { 0.0 };
    let invariants_agree = invariants(w1).agrees_with(&invariants(w2));
    // bounded: the log ratio must have settled over the second half
    let spread = log_ratios[half..].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let settled = spread.1 - spread.0 <= 1.0 && divergence_rate.abs() * (k.max(1) as f64) <= 1.0;
    EquivalenceReport { equivalent: invariants_agree && settled && bound.is_finite(), invariants_agree, log_ratios, bound, divergence_rate }
}
