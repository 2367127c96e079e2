//! Spaces of entire or disk-holomorphic functions with a radial, possibly
//! sign-changing weight: moment sequences, completeness, Pontryagin
//! indices, reproducing kernels and the integral forms of the inner
//! product for hypergeometric kernels.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::meijer_g::{self, GError, GSpec};
use crate::quad::{self, Decay, QuadError, RadialRule};
use crate::specfun::{self, SpecError};

pub type ComplexPoint = Complex64;
/// Taylor coefficients at the origin, index = degree.
pub type TaylorCoeffs = Vec<Complex64>;

const GRADING_LEVELS: usize = 40;
const SIGN_SCAN_NODES: usize = 8;
/// `|c_k| <= ZERO_MOMENT_REL * a_k` counts as `c_k = 0`.
const ZERO_MOMENT_REL: f64 = 1e-12;
const MIN_COMPLETENESS_K: usize = 16;
/// Fraction of the nominal decay rate used by the radial map.
const DECAY_MARGIN: f64 = 0.8;
const MAX_RADIAL_DOUBLINGS: usize = 3;
/// Decay exponent past the moment peak that the graded panels must reach.
const TAIL_EXPONENT: f64 = 60.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RkError {
    #[error("parameter {0} is a non-positive integer")]
    NonPositiveInteger(f64),
    #[error("theta must be positive and finite, got {0}")]
    InvalidTheta(f64),
    #[error("parameters must be finite")]
    NonFinite,
    #[error("{0}")]
    Geometry(String),
    #[error("|z u| = {value} lies outside the disk of holomorphy of radius {radius}")]
    OutsideDisk { value: f64, radius: f64 },
    #[error("K_cap = {k_cap} is too small; signs settle only after {needed}")]
    CapTooSmall { k_cap: usize, needed: usize },
    #[error("all moments vanish")]
    AllMomentsZero,
    #[error("weight is not admissible: {0}")]
    NotAdmissible(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    G(#[from] GError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Entire functions, `p <= q`.
    Plane,
    /// Functions holomorphic in the disk of radius `sqrt(theta)`, `p = q + 1`.
    Disk,
}

/// Parameters of the kernels `pFq(a; b; theta z conj(u))` (plane) and
/// `pF_{p-1}(a; b; z conj(u) / theta)` (disk).
#[derive(Clone, Debug, PartialEq)]
pub struct HypParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub theta: f64,
    pub geometry: Geometry,
}

impl HypParams {
    /// Checks the parameter invariants. The counts `p`, `q` are checked by
    /// [`HypParams::validate_geometry`] only where a kernel or weight is built,
    /// so sign counting also works for formal series.
    pub fn new(a: Vec<f64>, b: Vec<f64>, theta: f64, geometry: Geometry) -> Result<Self, RkError> {
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(RkError::NonFinite);
        }
        if let Some(&bad) = a.iter().chain(&b).find(|&&v| specfun::is_nonpositive_integer(v)) {
            return Err(RkError::NonPositiveInteger(bad));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(RkError::InvalidTheta(theta));
        }
        Ok(Self { a, b, theta, geometry })
    }

    pub fn plane(a: Vec<f64>, b: Vec<f64>, theta: f64) -> Result<Self, RkError> {
        Self::new(a, b, theta, Geometry::Plane)
    }

    pub fn disk(a: Vec<f64>, b: Vec<f64>, theta: f64) -> Result<Self, RkError> {
        Self::new(a, b, theta, Geometry::Disk)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn validate_geometry(&self) -> Result<(), RkError> {
        match self.geometry {
            Geometry::Plane if self.p() > self.q() => Err(RkError::Geometry(format!(
                "plane spaces need p <= q, got p = {}, q = {}",
                self.p(),
                self.q()
            ))),
            Geometry::Disk if self.p() != self.q() + 1 => Err(RkError::Geometry(format!(
                "disk spaces need p = q + 1, got p = {}, q = {}",
                self.p(),
                self.q()
            ))),
            _ => Ok(()),
        }
    }

    /// `c_{k+1} / c_k` for the inner-product coefficients.
    fn coefficient_step(&self, k: usize) -> f64 {
        let kf = k as f64;
        let num: f64 = self.b.iter().map(|&v| v + kf).product::<f64>() * (kf + 1.0);
        let den: f64 = self.a.iter().map(|&v| v + kf).product();
        match self.geometry {
            Geometry::Plane => num / (den * self.theta),
            Geometry::Disk => num * self.theta / den,
        }
    }

    /// The first `n` inner-product coefficients: `(b)_k k! / ((a)_k theta^k)`
    /// in the plane, `(b)_k k! theta^k / (a)_k` in the disk.
    pub fn inner_coefficients(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut c = 1.0;
        for k in 0..n {
            out.push(c);
            c *= self.coefficient_step(k);
        }
        out
    }

    pub fn inner_coefficient(&self, k: usize) -> f64 {
        (0..k).map(|j| self.coefficient_step(j)).product()
    }

    /// `Gamma(a_1)...Gamma(a_p) / (Gamma(b_1)...Gamma(b_q))`.
    pub fn gamma_ratio(&self) -> f64 {
        let (mut log, mut sign) = (0.0, 1.0);
        for &v in &self.a {
            let (l, s) = specfun::log_gamma_signed(v);
            log += l;
            sign *= s;
        }
        for &v in &self.b {
            let (l, s) = specfun::log_gamma_signed(v);
            log -= l;
            sign *= s;
        }
        sign * log.exp()
    }
}

/// The negative parameters of a [`HypParams`] sorted by absolute value.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativeParamSummary {
    pub m: usize,
    pub d: Vec<f64>,
    pub floors: Vec<i64>,
    pub nu: i64,
}

impl NegativeParamSummary {
    pub fn new(h: &HypParams) -> Self {
        let mut d: Vec<f64> = h.a.iter().chain(&h.b).copied().filter(|&v| v < 0.0).collect();
        d.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
        let floors: Vec<i64> = d.iter().map(|v| v.floor() as i64).collect();
        let nu = floors.iter().sum();
        Self { m: d.len(), d, floors, nu }
    }

    /// Number of negative factors in `prod (a)_k prod (b)_k`.
    pub fn negative_factors(&self, k: usize) -> u64 {
        self.floors.iter().map(|f| (k as u64).min(f.unsigned_abs())).sum()
    }

    /// Largest `|[d_i]|`; all coefficient signs are settled past it.
    pub fn settle_index(&self) -> usize {
        self.floors.iter().map(|f| f.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

/// How the plane shift `l` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShiftRule {
    /// `l = max(0, -[min b_i])`, the smallest shift that keeps the weight admissible.
    #[default]
    Corrected,
    /// `l = min(0, [min b_i])` literally; non-positive, so no derivative shift happens.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shifts {
    pub l1: i64,
    /// Disk only: the least `k >= 0` with `sum(b) + 1 < sum(a) + 2k`.
    pub l2: Option<i64>,
    pub l: i64,
}

fn is_cancelled(b: f64, a: &[f64]) -> bool {
    a.iter().any(|&aj| {
        let k = (b - aj).round();
        k >= 0.0 && (b - aj - k).abs() <= meijer_g::SNAP_TOL
    })
}

pub fn shifts(h: &HypParams, rule: ShiftRule) -> Shifts {
    let min_b = h.b.iter().copied().filter(|&v| !is_cancelled(v, &h.a)).fold(f64::INFINITY, f64::min);
    let floor = if min_b.is_finite() { min_b.floor() as i64 } else { 0 };
    let l1 = match rule {
        ShiftRule::Corrected => (-floor).max(0),
        ShiftRule::AsPrinted => floor.min(0),
    };
    match h.geometry {
        Geometry::Plane => Shifts { l1, l2: None, l: l1 },
        Geometry::Disk => {
            let sa: f64 = h.a.iter().sum();
            let sb: f64 = h.b.iter().sum();
            let l2 = ((sb + 1.0 - sa) / 2.0).floor() as i64 + 1;
            let l2 = l2.max(0);
            Shifts { l1, l2: Some(l2), l: l1.max(l2) }
        }
    }
}

/// A description of where the two readings of the plane shift disagree.
pub fn shift_discrepancy(h: &HypParams) -> Option<String> {
    let c = shifts(h, ShiftRule::Corrected);
    let p = shifts(h, ShiftRule::AsPrinted);
    (c.l1 != p.l1).then(|| {
        format!(
            "corrected shift l1 = {} differs from the literal reading l1 = {}; the literal one leaves the weight non-integrable at the origin",
            c.l1, p.l1
        )
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    EventuallyPositive,
    EventuallyNegative,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceClass {
    PositivePontryagin,
    NegativePontryagin,
    Krein,
    NonComplete,
}

impl SpaceClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpaceClass::PositivePontryagin => "positive-pontryagin",
            SpaceClass::NegativePontryagin => "negative-pontryagin",
            SpaceClass::Krein => "krein",
            SpaceClass::NonComplete => "non-complete",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSignature {
    pub i_plus: Vec<usize>,
    pub i_minus: Vec<usize>,
    pub i_zero: Vec<usize>,
    /// Last index inspected.
    pub k_max: usize,
    pub tail: Tail,
    pub pos_index: Index,
    pub neg_index: Index,
    pub space_class: SpaceClass,
}

impl SpaceSignature {
    /// Same class and indices; the inspected ranges may differ.
    pub fn agrees_with(&self, other: &SpaceSignature) -> bool {
        self.space_class == other.space_class && self.pos_index == other.pos_index && self.neg_index == other.neg_index
    }
}

/// Partition indices by sign; the side selected by `tail` is infinite.
pub fn signature_from_coefficients(signs: &[i8], tail: Tail) -> SpaceSignature {
    let (mut i_plus, mut i_minus, mut i_zero) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &s) in signs.iter().enumerate() {
        match s.signum() {
            1 => i_plus.push(k),
            -1 => i_minus.push(k),
            _ => i_zero.push(k),
        }
    }
    let (pos_index, neg_index, space_class) = match tail {
        Tail::EventuallyPositive => (Index::Infinite, Index::Finite(i_minus.len()), SpaceClass::PositivePontryagin),
        Tail::EventuallyNegative => (Index::Finite(i_plus.len()), Index::Infinite, SpaceClass::NegativePontryagin),
        Tail::Undetermined => (Index::Infinite, Index::Infinite, SpaceClass::Krein),
    };
    SpaceSignature {
        i_plus,
        i_minus,
        i_zero,
        k_max: signs.len().saturating_sub(1),
        tail,
        pos_index,
        neg_index,
        space_class,
    }
}

/// Indices from the closed-form counts over the negative parameters.
pub fn pontryagin_index_formula(h: &HypParams) -> SpaceSignature {
    let s = NegativeParamSummary::new(h);
    let m = s.m as i64;
    let bound = |i: usize| if i == 0 { 0 } else { s.floors[i - 1].abs() };
    let mut neg = 0i64;
    let mut pos = 0i64;
    let mut prefix = 0i64;
    for i in 0..s.m {
        if i > 0 {
            prefix += s.floors[i - 1];
        }
        for k in bound(i) + 1..=bound(i + 1) {
            let parity = (prefix + k * (m - i as i64)).rem_euclid(2);
            neg += parity;
            pos += 1 - parity;
        }
    }
    let positive = s.nu.rem_euclid(2) == 0;
    let k_max = s.settle_index();
    let signs: Vec<i8> = (0..=k_max).map(|k| if s.negative_factors(k) % 2 == 0 { 1 } else { -1 }).collect();
    let mut sig = signature_from_coefficients(&signs, if positive { Tail::EventuallyPositive } else { Tail::EventuallyNegative });
    if positive {
        sig.neg_index = Index::Finite(neg as usize);
    } else {
        sig.pos_index = Index::Finite(pos as usize + 1);
    }
    sig
}

/// Indices by counting kernel-coefficient signs up to `k_cap`.
pub fn pontryagin_index_oracle(h: &HypParams, k_cap: usize) -> Result<SpaceSignature, RkError> {
    let needed = h.a.iter().chain(&h.b).filter(|&&v| v < 0.0).map(|v| v.abs().ceil() as usize).max().unwrap_or(0) + 1;
    if k_cap <= needed {
        return Err(RkError::CapTooSmall { k_cap, needed });
    }
    let signs: Vec<i8> = (0..=k_cap)
        .map(|k| {
            let s: i8 = h.a.iter().chain(&h.b).map(|&v| specfun::pochhammer_sign(v, k)).product();
            s
        })
        .collect();
    let tail = if signs[k_cap] > 0 { Tail::EventuallyPositive } else { Tail::EventuallyNegative };
    Ok(signature_from_coefficients(&signs, tail))
}

/// The reproducing kernel `K(z, u)` given `z` and `conj(u)`.
pub fn kernel_eval(h: &HypParams, z: ComplexPoint, u_conj: ComplexPoint) -> Result<Complex64, RkError> {
    h.validate_geometry()?;
    let w = z * u_conj;
    match h.geometry {
        Geometry::Plane => Ok(specfun::hyper_pfq(&h.a, &h.b, w * h.theta)?),
        Geometry::Disk => {
            if w.norm() >= h.theta {
                return Err(RkError::OutsideDisk { value: w.norm(), radius: h.theta });
            }
            Ok(specfun::hyper_pfq(&h.a, &h.b, w / h.theta)?)
        }
    }
}

/// Taylor coefficients of `z -> K(z, u)` up to `degree`.
pub fn kernel_section(h: &HypParams, u: ComplexPoint, degree: usize) -> TaylorCoeffs {
    let c = h.inner_coefficients(degree + 1);
    let uc = u.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    c.iter()
        .map(|&ck| {
            let t = pow / ck;
            pow *= uc;
            t
        })
        .collect()
}

/// `sum c_k f_k conj(g_k)`; may be negative or zero for nonzero `f = g`.
pub fn series_inner_product(h: &HypParams, f: &[Complex64], g: &[Complex64]) -> Result<Complex64, RkError> {
    let n = f.len().min(g.len());
    let c = h.inner_coefficients(n);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        if f[k] == Complex64::new(0.0, 0.0) || g[k] == Complex64::new(0.0, 0.0) {
            continue;
        }
        sum += f[k] * g[k].conj() * c[k];
    }
    if !(sum.re.is_finite() && sum.im.is_finite()) {
        return Err(RkError::Divergent("coefficient sum is not finite".into()));
    }
    Ok(sum)
}

pub fn poly_eval(f: &[Complex64], z: Complex64) -> Complex64 {
    f.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Coefficients of the `l`-th derivative.
pub fn poly_derivative(f: &[Complex64], l: usize) -> TaylorCoeffs {
    f.iter()
        .enumerate()
        .skip(l)
        .map(|(n, &c)| c * ((n - l + 1..=n).map(|j| j as f64).product::<f64>()))
        .collect()
}

/// `f^{(k)}(0) = k! f_k`.
fn derivative_at_zero(f: &[Complex64], k: usize) -> Complex64 {
    f.get(k).copied().unwrap_or_default() * (1..=k).map(|j| j as f64).product::<f64>()
}

pub fn taylor_to_json(f: &[Complex64]) -> String {
    serde_json::to_string(f).expect("complex numbers serialize")
}

pub fn taylor_from_json(s: &str) -> Result<TaylorCoeffs, serde_json::Error> {
    serde_json::from_str(s)
}

/// A radial weight `w(r)` on `(0, R)`.
#[derive(Clone)]
pub enum WeightSpec {
    Explicit {
        w: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        /// Support radius; `f64::INFINITY` for the whole plane.
        radius: f64,
        /// Tail behaviour; ignored for finite radius.
        decay: Decay,
        /// Known sign changes, or `None` to locate them by scanning.
        sign_changes: Option<Vec<f64>>,
    },
    /// `scale * G(theta r^2)` for `p < q`, `scale * G(r^2 / theta)` for `p = q`.
    MeijerG { g: GSpec, theta: f64, scale: f64, sign_changes: Option<Vec<f64>> },
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Explicit { radius, decay, sign_changes, .. } => f
                .debug_struct("Explicit")
                .field("radius", radius)
                .field("decay", decay)
                .field("sign_changes", sign_changes)
                .finish_non_exhaustive(),
            WeightSpec::MeijerG { g, theta, scale, sign_changes } => f
                .debug_struct("MeijerG")
                .field("g", g)
                .field("theta", theta)
                .field("scale", scale)
                .field("sign_changes", sign_changes)
                .finish(),
        }
    }
}

impl WeightSpec {
    pub fn explicit(w: impl Fn(f64) -> f64 + Send + Sync + 'static, radius: f64, decay: Decay) -> Self {
        WeightSpec::Explicit { w: Arc::new(w), radius, decay, sign_changes: None }
    }

    pub fn with_sign_changes(mut self, points: Vec<f64>) -> Self {
        match &mut self {
            WeightSpec::Explicit { sign_changes, .. } | WeightSpec::MeijerG { sign_changes, .. } => {
                *sign_changes = Some(points)
            }
        }
        self
    }

    pub fn meijer(g: GSpec, theta: f64) -> Self {
        WeightSpec::MeijerG { g, theta, scale: 1.0, sign_changes: None }
    }

    /// The weight of the `[f, g] = int f conj(g) w dA` representation with no
    /// derivative shift; fails when that representation needs `l > 0`.
    pub fn unshifted(h: &HypParams) -> Result<Self, RkError> {
        h.validate_geometry()?;
        let s = shifts(h, ShiftRule::Corrected);
        if s.l > 0 {
            return Err(RkError::NotAdmissible(format!("this space needs a derivative shift l = {}", s.l)));
        }
        let g = GSpec::new(h.a.iter().map(|v| v - 1.0).collect(), std::iter::once(0.0).chain(h.b.iter().map(|v| v - 1.0)).collect())?;
        let scale = match h.geometry {
            Geometry::Plane => h.theta / std::f64::consts::PI,
            Geometry::Disk => 1.0 / (h.theta * std::f64::consts::PI),
        } * h.gamma_ratio();
        Ok(WeightSpec::MeijerG { g, theta: h.theta, scale, sign_changes: None })
    }

    pub fn eval(&self, r: f64) -> Result<f64, RkError> {
        match self {
            WeightSpec::Explicit { w, radius, .. } => Ok(if r > 0.0 && r < *radius { w(r) } else { 0.0 }),
            WeightSpec::MeijerG { g, theta, scale, .. } => {
                if r <= 0.0 {
                    return Ok(0.0);
                }
                let x = if g.p() == g.q() { r * r / theta } else { theta * r * r };
                if x >= 1.0 && g.p() == g.q() {
                    return Ok(0.0);
                }
                Ok(scale * meijer_g::g_weight(g, x)?)
            }
        }
    }

    fn decay(&self) -> Decay {
        match self {
            WeightSpec::Explicit { decay, radius, .. } => {
                if radius.is_finite() {
                    Decay::Cutoff { radius: *radius }
                } else {
                    *decay
                }
            }
            WeightSpec::MeijerG { g, theta, .. } => g_decay(g, *theta),
        }
    }

    /// Admissible: a finite set of sign changes on the support.
    pub fn is_admissible(&self) -> bool {
        match self {
            WeightSpec::Explicit { sign_changes, .. } => sign_changes.as_ref().is_none_or(|s| s.iter().all(|v| v.is_finite())),
            WeightSpec::MeijerG { g, theta, .. } => meijer_g::is_admissible_weight(g, *theta).admissible,
        }
    }
}

/// Decay class of `r -> G(theta r^2)`, or the cutoff for `p = q`.
fn g_decay(g: &GSpec, theta: f64) -> Decay {
    if g.p() == g.q() {
        return Decay::Cutoff { radius: theta.sqrt() };
    }
    let mu = g.mu() as f64;
    match g.mu() {
        1 => Decay::Gaussian { rate: DECAY_MARGIN * theta },
        2 => Decay::KBessel { rate: DECAY_MARGIN * 2.0 * theta.sqrt() },
        _ => Decay::Stretched { rate: DECAY_MARGIN * mu * theta.powf(1.0 / mu), power: 2.0 / mu },
    }
}

pub fn radius_from_weight(w: &WeightSpec) -> f64 {
    match w {
        WeightSpec::Explicit { radius, .. } => *radius,
        WeightSpec::MeijerG { g, theta, .. } => {
            if g.p() == g.q() {
                theta.sqrt()
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Quadrature nodes on `(0, R)`, split at the given interior points.
#[derive(Clone, Debug)]
struct RadialNodes {
    r: Vec<f64>,
    wt: Vec<f64>,
}

/// Slows the radial map so that `r^(2k+1)` times the weight is resolved
/// well inside the graded panels for every `k <= k_max`.
fn moment_decay(decay: Decay, k_max: usize) -> Decay {
    let t_end = 2f64.ln() + GRADING_LEVELS as f64 * (1.0 / quad::GRADING_RATIO).ln();
    let shrink = |power: f64| (t_end / ((2 * k_max + 2) as f64 / power + TAIL_EXPONENT)).min(1.0);
    match decay {
        Decay::KBessel { rate } => Decay::KBessel { rate: rate * shrink(1.0) },
        Decay::Stretched { rate, power } => Decay::Stretched { rate: rate * shrink(power), power },
        other => other,
    }
}

fn radial_nodes(radius: f64, decay: Decay, breaks: &[f64], n: usize) -> Result<RadialNodes, RkError> {
    let mut edges: Vec<f64> = std::iter::once(0.0).chain(breaks.iter().copied().filter(|&b| b > 0.0 && b < radius)).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut out = RadialNodes { r: Vec::new(), wt: Vec::new() };
    for (i, &lo) in edges.iter().enumerate() {
        let hi = edges.get(i + 1).copied().unwrap_or(radius);
        let rule = if hi.is_finite() {
            RadialRule::with_grading(Decay::Cutoff { radius: hi - lo }, n, GRADING_LEVELS, quad::GRADING_RATIO)?
        } else {
            RadialRule::with_grading(decay, n, GRADING_LEVELS, quad::GRADING_RATIO)?
        };
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            out.r.push(lo + t);
            out.wt.push(w);
        }
    }
    Ok(out)
}

fn eval_weight_par(w: &WeightSpec, r: &[f64]) -> Result<Vec<f64>, RkError> {
    r.par_iter().map(|&x| w.eval(x)).collect()
}

/// Sign changes of `w`, located on a coarse rule and refined by bisection.
pub fn locate_sign_changes(w: &WeightSpec) -> Result<Vec<f64>, RkError> {
    if let WeightSpec::Explicit { sign_changes: Some(s), .. } | WeightSpec::MeijerG { sign_changes: Some(s), .. } = w {
        return Ok(s.clone());
    }
    let nodes = radial_nodes(radius_from_weight(w), w.decay(), &[], SIGN_SCAN_NODES)?;
    let vals = eval_weight_par(w, &nodes.r)?;
    let mut out = Vec::new();
    for i in 1..vals.len() {
        if vals[i - 1] == 0.0 || vals[i] == 0.0 || (vals[i - 1] > 0.0) == (vals[i] > 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (nodes.r[i - 1], nodes.r[i]);
        let lo_pos = vals[i - 1] > 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if (w.eval(mid)? > 0.0) == lo_pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// `c_k = 2 pi int r^(2k+1) w` and `a_k = 2 pi int r^(2k+1) |w|`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSeq {
    pub c: Vec<f64>,
    pub a: Vec<f64>,
    pub k_max: usize,
}

impl MomentSeq {
    pub fn new(c: Vec<f64>, a: Vec<f64>) -> Result<Self, RkError> {
        if c.len() != a.len() || c.is_empty() {
            return Err(RkError::Geometry("c and a must be nonempty and of equal length".into()));
        }
        if c.iter().zip(&a).any(|(c, a)| !(c.is_finite() && a.is_finite()) || *a < c.abs() * (1.0 - 1e-9)) {
            return Err(RkError::Divergent("moments must be finite with a_k >= |c_k|".into()));
        }
        let k_max = c.len() - 1;
        Ok(Self { c, a, k_max })
    }

    pub fn signs(&self) -> Vec<i8> {
        self.c
            .iter()
            .zip(&self.a)
            .map(|(&c, &a)| {
                if c.abs() <= ZERO_MOMENT_REL * a {
                    0
                } else if c > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }
}

/// Moments up to `k_max`; node counts double until every moment is stable to `tol`.
pub fn moments_from_weight(w: &WeightSpec, k_max: usize, tol: f64) -> Result<MomentSeq, RkError> {
    let breaks = locate_sign_changes(w)?;
    let radius = radius_from_weight(w);
    let compute = |n: usize| -> Result<(Vec<f64>, Vec<f64>), RkError> {
        let nodes = radial_nodes(radius, moment_decay(w.decay(), k_max), &breaks, n)?;
        let vals = eval_weight_par(w, &nodes.r)?;
        let mut c = Vec::with_capacity(k_max + 1);
        let mut a = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let p = 2 * k as i32 + 1;
            let tc: Vec<f64> = nodes.r.iter().zip(&nodes.wt).zip(&vals).map(|((r, wt), v)| wt * r.powi(p) * v).collect();
            let ta: Vec<f64> = tc.iter().map(|v| v.abs()).collect();
            let two_pi = 2.0 * std::f64::consts::PI;
            c.push(two_pi * quad::pairwise_sum(&tc, 0.0));
            a.push(two_pi * quad::pairwise_sum(&ta, 0.0));
        }
        Ok((c, a))
    };
    let mut n = 16;
    let mut prev = compute(n)?;
    for _ in 0..MAX_RADIAL_DOUBLINGS {
        n *= 2;
        let next = compute(n)?;
        let stable = next.1.iter().zip(&prev.1).zip(next.0.iter().zip(&prev.0)).all(|((a1, a0), (c1, c0))| {
            (a1 - a0).abs() <= tol * a1.abs() && (c1 - c0).abs() <= tol * a1.abs()
        });
        prev = next;
        if stable {
            let (c, a) = prev;
            if c.iter().chain(&a).any(|v| !v.is_finite()) {
                return Err(RkError::Divergent("a moment is not finite".into()));
            }
            return MomentSeq::new(c, a);
        }
    }
    Err(RkError::Quad(QuadError::NonConvergence { value: prev.0[k_max], diff: f64::NAN }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Complete,
    NotComplete,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletenessReport {
    pub verdict: Verdict,
    /// Largest observed `a_k / |c_k|`.
    pub sup_ratio: f64,
    /// Least-squares slope of `ln(a_k / |c_k|)` over the last half.
    pub slope: f64,
    pub slope_stderr: f64,
}

/// Finite-data verdict on the boundedness of `a_k / |c_k|` over `k` with `c_k != 0`.
pub fn completeness_check(m: &MomentSeq) -> Result<CompletenessReport, RkError> {
    let signs = m.signs();
    let pts: Vec<(f64, f64)> = (0..=m.k_max).filter(|&k| signs[k] != 0).map(|k| (k as f64, (m.a[k] / m.c[k].abs()).ln())).collect();
    if pts.is_empty() {
        return Err(RkError::AllMomentsZero);
    }
    let sup_ratio = pts.iter().map(|p| p.1.exp()).fold(0.0, f64::max);
    let tail = &pts[pts.len() / 2..];
    let (slope, slope_stderr) = regression(tail);
    let verdict = if m.k_max < MIN_COMPLETENESS_K || tail.len() < 3 {
        Verdict::Inconclusive
    } else if slope - 2.0 * slope_stderr <= 1e-12 {
        Verdict::Complete
    } else if tail.windows(2).all(|w| w[1].1 > w[0].1) {
        Verdict::NotComplete
    } else {
        Verdict::Inconclusive
    };
    Ok(CompletenessReport { verdict, sup_ratio, slope, slope_stderr })
}

fn regression(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (0.0, f64::INFINITY);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    if pts.len() < 3 {
        return (slope, f64::INFINITY);
    }
    let rss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (rss / (n - 2.0) / sxx).sqrt())
}

/// Signature read off a moment sequence; the tail is the sign of the last
/// quarter when constant there.
pub fn signature_from_moments(m: &MomentSeq) -> SpaceSignature {
    let signs = m.signs();
    let last: Vec<i8> = signs[signs.len() * 3 / 4..].iter().copied().filter(|&s| s != 0).collect();
    let tail = if !last.is_empty() && last.iter().all(|&s| s > 0) {
        Tail::EventuallyPositive
    } else if !last.is_empty() && last.iter().all(|&s| s < 0) {
        Tail::EventuallyNegative
    } else {
        Tail::Undetermined
    };
    signature_from_coefficients(&signs, tail)
}

/// `int_xi^R w(r) dr > 0`.
pub fn weight_condition_holds(w: &WeightSpec, xi: f64) -> Result<bool, RkError> {
    let radius = radius_from_weight(w);
    if !(xi >= 0.0 && xi < radius) {
        return Err(RkError::Geometry(format!("xi = {xi} must lie in [0, {radius})")));
    }
    let nodes = radial_nodes(radius, w.decay(), &[xi], 32)?;
    let vals = eval_weight_par(w, &nodes.r)?;
    let terms: Vec<f64> = nodes.r.iter().zip(&nodes.wt).zip(&vals).filter(|((r, _), _)| **r >= xi).map(|((_, wt), v)| wt * v).collect();
    Ok(quad::pairwise_sum(&terms, 0.0) > 0.0)
}

/// Which disk representation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DiskForm {
    /// Derivatives of order `l` plus a correction sum at the origin.
    #[default]
    Derivative,
    /// Powers of `D z`; only when `l1 = 0` and `l <= 1`.
    DzPower,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralOptions {
    /// Gauss nodes per radial panel before refinement.
    pub radial_nodes: usize,
    /// Minimum angular node count; raised as needed for exactness.
    pub angular_nodes: usize,
    pub shift_rule: ShiftRule,
    pub disk_form: DiskForm,
    /// Relative tolerance for radial refinement.
    pub tol: f64,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self { radial_nodes: 16, angular_nodes: 16, shift_rule: ShiftRule::Corrected, disk_form: DiskForm::Derivative, tol: 1e-9 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Plane,
    PlaneShifted,
    Disk,
    DiskShifted,
    DiskDzPower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralInnerProduct {
    pub value: Complex64,
    pub l: i64,
    pub representation: Representation,
    /// The finite sum at the origin, included in `value`.
    pub correction: Complex64,
    pub error_estimate: f64,
    pub weight: GSpec,
}

/// The area integral `scale * int F(z) conj(G(z)) W(|z|) |z|^(-2 inv) dA`
/// with radial refinement.
fn area_integral(
    w: &WeightSpec,
    f: &[Complex64],
    g: &[Complex64],
    inverse_r2: bool,
    opts: &IntegralOptions,
) -> Result<(Complex64, f64), RkError> {
    let degree = f.len() + g.len();
    let mut n_ang = opts.angular_nodes.max(16).max(degree + 2);
    n_ang += n_ang % 2;
    let roots: Vec<Complex64> = (0..n_ang).map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n_ang as f64)).collect();
    let breaks = locate_sign_changes(w)?;
    let radius = radius_from_weight(w);
    let compute = |n: usize| -> Result<Complex64, RkError> {
        let nodes = radial_nodes(radius, moment_decay(w.decay(), degree / 2), &breaks, n)?;
        let vals = eval_weight_par(w, &nodes.r)?;
        let terms: Vec<Complex64> = (0..nodes.r.len())
            .into_par_iter()
            .map(|i| {
                let r = nodes.r[i];
                if vals[i] == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let ring: Vec<Complex64> = roots.iter().map(|&e| poly_eval(f, e * r) * poly_eval(g, e * r).conj()).collect();
                let mean = quad::pairwise_sum(&ring, Complex64::new(0.0, 0.0)) / n_ang as f64;
                let jac = if inverse_r2 { 1.0 / r } else { r };
                mean * (2.0 * std::f64::consts::PI * nodes.wt[i] * jac * vals[i])
            })
            .collect();
        Ok(quad::pairwise_sum(&terms, Complex64::new(0.0, 0.0)))
    };
    let mut n = opts.radial_nodes.max(4);
    let mut prev = compute(n)?;
    let mut err = f64::INFINITY;
    for _ in 0..MAX_RADIAL_DOUBLINGS {
        n *= 2;
        let next = compute(n)?;
        err = (next - prev).norm();
        prev = next;
        if err <= opts.tol * (1.0 + prev.norm()) {
            break;
        }
    }
    if !(prev.re.is_finite() && prev.im.is_finite()) {
        return Err(RkError::Divergent("area integral is not finite".into()));
    }
    Ok((prev, err))
}

/// `[f, g]` through its area-integral representation with a Meijer-G weight.
pub fn integral_inner_product(
    h: &HypParams,
    f: &[Complex64],
    g: &[Complex64],
    opts: &IntegralOptions,
) -> Result<IntegralInnerProduct, RkError> {
    h.validate_geometry()?;
    let sh = shifts(h, opts.shift_rule);
    let pi = std::f64::consts::PI;
    let theta = h.theta;
    let shifted = |l: f64| -> Result<GSpec, GError> {
        GSpec::new(
            h.a.iter().map(|v| v + l - 1.0).chain(std::iter::once(l)).collect(),
            h.b.iter().map(|v| v + l - 1.0).chain([0.0, 0.0]).collect(),
        )
    };
    let unshifted = || GSpec::new(h.a.iter().map(|v| v - 1.0).collect(), std::iter::once(0.0).chain(h.b.iter().map(|v| v - 1.0)).collect());

    let (gspec, scale, representation, l, fw, gw, inverse_r2) = match (h.geometry, opts.disk_form) {
        (Geometry::Disk, DiskForm::DzPower) => {
            if sh.l1 > 0 {
                return Err(RkError::Unsupported(format!("the D z form needs l1 = 0, got {}", sh.l1)));
            }
            let l = sh.l2.unwrap_or(0);
            if l > 1 {
                return Err(RkError::Unsupported(format!("the D z form with l = {l} has poles of multiplicity {}", 2 * l + 1)));
            }
            let lu = l as usize;
            let gspec = GSpec::new(
                h.a.iter().copied().chain(std::iter::repeat_n(2.0, 2 * lu)).collect(),
                h.b.iter().copied().chain(std::iter::repeat_n(1.0, 2 * lu + 1)).collect(),
            )?;
            let dz = |f: &[Complex64]| -> TaylorCoeffs { f.iter().enumerate().map(|(n, &c)| c * ((n + 1) as f64).powi(l as i32)).collect() };
            (gspec, h.gamma_ratio() / pi, Representation::DiskDzPower, l, dz(f), dz(g), true)
        }
        (geometry, _) => {
            let l = sh.l.max(0);
            let lf = l as f64;
            let gspec = if l == 0 { unshifted()? } else { shifted(lf)? };
            let scale = h.gamma_ratio()
                * match geometry {
                    Geometry::Plane => theta.powf(1.0 - lf) / pi,
                    Geometry::Disk => theta.powf(lf - 1.0) / pi,
                };
            let representation = match (geometry, l) {
                (Geometry::Plane, 0) => Representation::Plane,
                (Geometry::Plane, _) => Representation::PlaneShifted,
                (Geometry::Disk, 0) => Representation::Disk,
                (Geometry::Disk, _) => Representation::DiskShifted,
            };
            (gspec, scale, representation, l, poly_derivative(f, l as usize), poly_derivative(g, l as usize), false)
        }
    };

    let adm = meijer_g::is_admissible_weight(&gspec, theta);
    if !adm.admissible {
        let mut msg = adm.diagnostics.join("; ");
        if let Some(d) = shift_discrepancy(h).filter(|_| opts.shift_rule == ShiftRule::AsPrinted) {
            msg = format!("{msg}; {d}");
        }
        return Err(RkError::NotAdmissible(msg));
    }

    let mut correction = Complex64::new(0.0, 0.0);
    if representation != Representation::DiskDzPower {
        for k in 0..l.max(0) as usize {
            let ak: f64 = h.a.iter().map(|&v| specfun::pochhammer(v, k)).product();
            let bk: f64 = h.b.iter().map(|&v| specfun::pochhammer(v, k)).product();
            let kf: f64 = (1..=k).map(|j| j as f64).product();
            let t = match h.geometry {
                Geometry::Plane => theta.powi(-(k as i32)),
                Geometry::Disk => theta.powi(k as i32),
            };
            correction += derivative_at_zero(f, k) * derivative_at_zero(g, k).conj() * (bk * t / (ak * kf));
        }
    }

    let weight = WeightSpec::MeijerG { g: gspec.clone(), theta, scale, sign_changes: None };
    let (integral, err) =
        if fw.iter().all(|c| c.norm() == 0.0) || gw.iter().all(|c| c.norm() == 0.0) { (Complex64::new(0.0, 0.0), 0.0) } else { area_integral(&weight, &fw, &gw, inverse_r2, opts)? };
    Ok(IntegralInnerProduct { value: integral + correction, l, representation, correction, error_estimate: err, weight: gspec })
}

/// `int f conj(g) w(|z|) dA` for an arbitrary radial weight.
pub fn weight_inner_product(w: &WeightSpec, f: &[Complex64], g: &[Complex64], opts: &IntegralOptions) -> Result<(Complex64, f64), RkError> {
    area_integral(w, f, g, false, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn monomial(n: usize) -> TaylorCoeffs {
        let mut v = vec![c(0.0); n + 1];
        v[n] = c(1.0);
        v
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|j| j as f64).product()
    }

    #[test]
    fn index_examples() {
        let hilbert = HypParams::plane(vec![1.5], vec![2.5, 0.5], 1.0).unwrap();
        let s = pontryagin_index_formula(&hilbert);
        assert_eq!(s.neg_index, Index::Finite(0));
        assert_eq!(s.space_class, SpaceClass::PositivePontryagin);

        let h = HypParams::plane(vec![-1.5], vec![], 1.0).unwrap();
        let sm = NegativeParamSummary::new(&h);
        assert_eq!((sm.floors.clone(), sm.nu), (vec![-2], -2));
        let s = pontryagin_index_formula(&h);
        assert_eq!(s.space_class, SpaceClass::PositivePontryagin);
        assert_eq!(s.neg_index, Index::Finite(1));
        assert_eq!(s.i_minus, vec![1]);
        assert!(s.agrees_with(&pontryagin_index_oracle(&h, 10).unwrap()));

        let h = HypParams::plane(vec![-0.5], vec![], 1.0).unwrap();
        let s = pontryagin_index_formula(&h);
        assert_eq!(s.space_class, SpaceClass::NegativePontryagin);
        assert_eq!(s.pos_index, Index::Finite(1));
        let o = pontryagin_index_oracle(&h, 10).unwrap();
        assert_eq!(o.i_plus, vec![0]);
        assert!(s.agrees_with(&o));
    }

    #[test]
    fn oracle_cap_checked() {
        let h = HypParams::plane(vec![-4.5], vec![], 1.0).unwrap();
        assert_eq!(pontryagin_index_oracle(&h, 6), Err(RkError::CapTooSmall { k_cap: 6, needed: 6 }));
        assert!(pontryagin_index_oracle(&h, 7).is_ok());
    }

    #[test]
    fn parameter_validation() {
        assert_eq!(HypParams::plane(vec![-2.0], vec![], 1.0), Err(RkError::NonPositiveInteger(-2.0)));
        assert_eq!(HypParams::plane(vec![], vec![0.0], 1.0), Err(RkError::NonPositiveInteger(0.0)));
        assert_eq!(HypParams::plane(vec![], vec![], 0.0), Err(RkError::InvalidTheta(0.0)));
        assert!(HypParams::plane(vec![1.5], vec![], 1.0).unwrap().validate_geometry().is_err());
        assert!(HypParams::disk(vec![1.5], vec![], 1.0).unwrap().validate_geometry().is_ok());
    }

    #[test]
    fn kernels() {
        let z = Complex64::new(0.3, -0.2);
        let u = Complex64::new(-0.1, 0.4);
        let w = z * u;
        let fock = HypParams::plane(vec![], vec![], 1.0).unwrap();
        assert!((kernel_eval(&fock, z, u).unwrap() - w.exp()).norm() < 1e-15);
        let bergman = HypParams::disk(vec![2.0], vec![], 1.0).unwrap();
        assert!((kernel_eval(&bergman, z, u).unwrap() - (c(1.0) - w).powi(-2)).norm() < 1e-14);
        let hardy = HypParams::disk(vec![1.0], vec![], 1.0).unwrap();
        assert!((kernel_eval(&hardy, z, u).unwrap() - (c(1.0) - w).inv()).norm() < 1e-14);
        assert!(matches!(kernel_eval(&hardy, c(1.0), c(1.5)), Err(RkError::OutsideDisk { .. })));
        let scaled = HypParams::plane(vec![], vec![], 2.5).unwrap();
        assert!((kernel_eval(&scaled, z, u).unwrap() - (w * 2.5).exp()).norm() < 1e-15);
    }

    #[test]
    fn series_examples() {
        let fock = HypParams::plane(vec![], vec![], 1.0).unwrap();
        assert_eq!(series_inner_product(&fock, &monomial(1), &monomial(1)).unwrap(), c(1.0));
        let h = HypParams::plane(vec![-0.5], vec![], 1.0).unwrap();
        assert!((series_inner_product(&h, &monomial(1), &monomial(1)).unwrap() - c(-2.0)).norm() < 1e-15);
        for theta in [0.5, 3.0] {
            let b = HypParams::disk(vec![2.0], vec![], theta).unwrap();
            for k in 0..6 {
                let v = series_inner_product(&b, &monomial(k), &monomial(k)).unwrap();
                assert!((v.re - theta.powi(k as i32) / (k as f64 + 1.0)).abs() < 1e-14 * v.re);
            }
        }
    }

    #[test]
    fn theta_exponent_by_geometry() {
        let plane = HypParams::plane(vec![], vec![], 2.0).unwrap();
        let disk = HypParams::disk(vec![1.0], vec![], 2.0).unwrap();
        assert_eq!(plane.inner_coefficient(3), 6.0 / 8.0);
        assert_eq!(disk.inner_coefficient(3), 8.0);
    }

    #[test]
    fn reproducing_property() {
        let u = Complex64::new(0.4, -0.3);
        let f: TaylorCoeffs = (0..7).map(|k| Complex64::new(1.0 / (k as f64 + 1.0), 0.3 * k as f64 - 0.5)).collect();
        for h in [
            HypParams::plane(vec![-0.5, 2.2], vec![1.3, -1.7, 0.4], 1.7).unwrap(),
            HypParams::disk(vec![2.5, -0.3], vec![1.2], 0.8).unwrap(),
        ] {
            let k = kernel_section(&h, u, 6);
            let v = series_inner_product(&h, &f, &k).unwrap();
            assert!((v - poly_eval(&f, u)).norm() < 1e-10);
        }
    }

    #[test]
    fn taylor_json() {
        let f = vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.0)];
        let s = taylor_to_json(&f);
        assert_eq!(s, "[[1.0,-2.0],[0.5,0.0]]");
        assert_eq!(taylor_from_json(&s).unwrap(), f);
    }

    #[test]
    fn radii() {
        assert_eq!(radius_from_weight(&WeightSpec::explicit(|r| (-r).exp(), f64::INFINITY, Decay::KBessel { rate: 1.0 })), f64::INFINITY);
        assert_eq!(radius_from_weight(&WeightSpec::explicit(|_| 1.0, 1.0, Decay::Cutoff { radius: 1.0 })), 1.0);
        let g = GSpec::new(vec![1.0], vec![0.0]).unwrap();
        assert_eq!(radius_from_weight(&WeightSpec::meijer(g, 4.0)), 2.0);
    }

    #[test]
    fn gaussian_moments() {
        let w = WeightSpec::explicit(|r| (-r * r).exp(), f64::INFINITY, Decay::Gaussian { rate: 1.0 });
        let m = moments_from_weight(&w, 12, 1e-10).unwrap();
        for k in 0..=12 {
            let want = std::f64::consts::PI * factorial(k);
            assert!((m.c[k] - want).abs() < 1e-8 * want, "k={k}");
            assert_eq!(m.a[k], m.c[k]);
        }
        assert_eq!(completeness_check(&m).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn bessel_weight_moments() {
        let (alpha, nu) = (2.0f64, 0.5f64);
        let norm = alpha.powf(nu + 2.0) / (2f64.powf(nu + 1.0) * std::f64::consts::PI);
        let w = WeightSpec::explicit(move |r| norm * r.powf(nu) * specfun::bessel_k(nu, alpha * r).unwrap_or(0.0), f64::INFINITY, Decay::KBessel { rate: alpha });
        let m = moments_from_weight(&w, 6, 1e-10).unwrap();
        for n in 0..=6 {
            let want = 4f64.powi(n as i32) * factorial(n) * specfun::gamma(n as f64 + nu + 1.0) / alpha.powi(2 * n as i32);
            assert!((m.c[n] - want).abs() < 1e-8 * want, "n={n}: {} vs {want}", m.c[n]);
        }
    }

    #[test]
    fn alternating_weight_moments() {
        let w = WeightSpec::explicit(|r| 1.0 - 2.0 * r, 1.0, Decay::Cutoff { radius: 1.0 });
        assert_eq!(locate_sign_changes(&w).unwrap().len(), 1);
        let m = moments_from_weight(&w, 8, 1e-12).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        for k in 0..=8 {
            let kf = k as f64;
            let want = two_pi * (1.0 / (2.0 * kf + 2.0) - 2.0 / (2.0 * kf + 3.0));
            // |1 - 2r| integrated piecewise
            let h = 0.5f64;
            let inner = h.powf(2.0 * kf + 2.0) / (2.0 * kf + 2.0) - 2.0 * h.powf(2.0 * kf + 3.0) / (2.0 * kf + 3.0);
            let want_a = two_pi * (2.0 * inner - (1.0 / (2.0 * kf + 2.0) - 2.0 / (2.0 * kf + 3.0)));
            assert!((m.c[k] - want).abs() < 1e-12, "k={k}");
            assert!((m.a[k] - want_a).abs() < 1e-12, "k={k}");
        }
        assert!(m.c[0] < 0.0);
    }

    #[test]
    fn completeness_examples() {
        let pi = std::f64::consts::PI;
        let c: Vec<f64> = (0..=20).map(|k| pi * factorial(k)).collect();
        let r = completeness_check(&MomentSeq::new(c.clone(), c).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Complete);
        assert!((r.sup_ratio - 1.0).abs() < 1e-15);

        let c: Vec<f64> = (0..=20).map(|k| factorial(k) / 2f64.powi(k as i32)).collect();
        let a: Vec<f64> = (0..=20).map(factorial).collect();
        let r = completeness_check(&MomentSeq::new(c, a).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::NotComplete);
        assert!((r.slope - 2f64.ln()).abs() < 1e-12);

        let c = vec![1.0, -0.5, 0.8, 0.3, 1.1];
        let a = vec![1.0, 0.9, 1.7, 0.4, 1.5];
        assert_eq!(completeness_check(&MomentSeq::new(c, a).unwrap()).unwrap().verdict, Verdict::Inconclusive);

        assert_eq!(completeness_check(&MomentSeq::new(vec![0.0; 3], vec![1.0; 3]).unwrap()), Err(RkError::AllMomentsZero));
    }

    #[test]
    fn signature_examples() {
        let s = signature_from_coefficients(&[1; 8], Tail::EventuallyPositive);
        assert_eq!((s.pos_index, s.neg_index, s.space_class), (Index::Infinite, Index::Finite(0), SpaceClass::PositivePontryagin));
        let s = signature_from_coefficients(&[1, -1, 1, 1], Tail::EventuallyPositive);
        assert_eq!(s.neg_index, Index::Finite(1));
        let s = signature_from_coefficients(&[1, -1, 1, 0, 1], Tail::EventuallyPositive);
        assert_eq!(s.i_zero, vec![3]);
        assert_eq!(s.i_plus, vec![0, 2, 4]);
        assert_eq!(s.neg_index, Index::Finite(1));
    }

    #[test]
    fn fock_integral() {
        let fock = HypParams::plane(vec![], vec![], 1.0).unwrap();
        for n in 0..=8 {
            let v = integral_inner_product(&fock, &monomial(n), &monomial(n), &IntegralOptions::default()).unwrap();
            assert_eq!(v.representation, Representation::Plane);
            assert!((v.value.re - factorial(n)).abs() < 1e-9 * factorial(n), "n={n}: {}", v.value);
            assert!(v.value.im.abs() < 1e-9 * factorial(n));
        }
    }

    #[test]
    fn shifted_plane_integral() {
        let h = HypParams::plane(vec![], vec![-0.5], 1.0).unwrap();
        let s = shifts(&h, ShiftRule::Corrected);
        assert_eq!(s.l, 1);
        let one = integral_inner_product(&h, &monomial(0), &monomial(0), &IntegralOptions::default()).unwrap();
        assert_eq!(one.representation, Representation::PlaneShifted);
        assert_eq!(one.value, c(1.0));
        for n in 1..=5 {
            let want = series_inner_product(&h, &monomial(n), &monomial(n)).unwrap();
            let got = integral_inner_product(&h, &monomial(n), &monomial(n), &IntegralOptions::default()).unwrap();
            assert!((got.value - want).norm() < 1e-6 * (1.0 + want.norm()), "n={n}: {} vs {}", got.value, want);
        }
        assert!(shift_discrepancy(&h).is_some());
        let printed = IntegralOptions { shift_rule: ShiftRule::AsPrinted, ..Default::default() };
        assert!(matches!(integral_inner_product(&h, &monomial(1), &monomial(1), &printed), Err(RkError::NotAdmissible(_))));
    }

    #[test]
    fn hardy_and_bergman_integrals() {
        let hardy = HypParams::disk(vec![1.0], vec![], 1.0).unwrap();
        assert_eq!(shifts(&hardy, ShiftRule::Corrected).l, 1);
        let bergman = HypParams::disk(vec![2.0], vec![], 2.0).unwrap();
        assert_eq!(shifts(&bergman, ShiftRule::Corrected).l, 0);
        for h in [hardy, bergman] {
            for n in 0..=6 {
                let want = series_inner_product(&h, &monomial(n), &monomial(n)).unwrap();
                let got = integral_inner_product(&h, &monomial(n), &monomial(n), &IntegralOptions::default()).unwrap();
                assert!((got.value - want).norm() < 1e-7 * (1.0 + want.norm()), "{h:?} n={n}: {} vs {}", got.value, want);
            }
        }
    }

    #[test]
    fn unshifted_weight_moments_match_coefficients() {
        let h = HypParams::plane(vec![1.5], vec![2.5, 0.7], 1.3).unwrap();
        let w = WeightSpec::unshifted(&h).unwrap();
        let m = moments_from_weight(&w, 8, 1e-10).unwrap();
        let want = h.inner_coefficients(9);
        for k in 0..=8 {
            assert!((m.c[k] - want[k]).abs() < 1e-6 * want[k].abs(), "k={k}: {} vs {}", m.c[k], want[k]);
        }
    }

    #[test]
    fn weight_condition_for_nonnegative_weights() {
        let w = WeightSpec::explicit(|r| (-r * r).exp(), f64::INFINITY, Decay::Gaussian { rate: 1.0 });
        for xi in [0.0, 0.5, 2.0, 5.0] {
            assert!(weight_condition_holds(&w, xi).unwrap());
        }
        let w = WeightSpec::explicit(|r| 1.0 - 2.0 * r, 1.0, Decay::Cutoff { radius: 1.0 });
        assert!(!weight_condition_holds(&w, 0.6).unwrap());
    }
}
