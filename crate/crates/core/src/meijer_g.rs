//! Meijer G-functions of order `(q, 0, p, q)`, the weights behind the
//! hypergeometric kernel spaces.
//!
//! Evaluation is by the residue series at the poles of
//! `h(s) = prod Gamma(b_j + s) / prod Gamma(a_i + s)`. Poles are grouped by
//! the class of `b_j` modulo 1; inside a class the multiplicity at
//! `s = -beta - K` is the number of lower parameters with offset `<= K` minus
//! the number of upper parameters with offset `<= K`. The Laurent data at each
//! pole (value, first and second log-derivatives) are advanced from one pole to
//! the next by exact recurrences, so no numerical differentiation is needed.
//!
//! For `p < q` and large `x` the series cancels heavily; the sum is then
//! recomputed in [`XFloat`] arithmetic with enough bits to absorb the loss.

use std::any::Any;
use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::quad::{self, Decay, QuadError};
use crate::specfun;
use crate::xprec::XFloat;

/// Parameters closer than this to an integer offset are treated as coincident.
pub const SNAP_TOL: f64 = 1e-8;
pub const DEFAULT_K_MAX: usize = 200;
/// Beyond this many estimated series terms the large-`x` asymptote is used.
pub const SERIES_TERM_LIMIT: f64 = 400.0;
pub const MAX_MULTIPLICITY: i64 = 3;

const NEAR_ONE_SWITCH: f64 = 0.5;
const F64_LOST_BITS_OK: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GError {
    #[error("order p = {p} exceeds q = {q}")]
    InvalidOrder { p: usize, q: usize },
    #[error("parameters must be finite")]
    NonFinite,
    #[error("x must be positive, got {0}")]
    NonPositiveX(f64),
    #[error("the residue series for p = q needs x < 1, got {0}")]
    OutsideUnitInterval(f64),
    #[error("series not converged within k_max = {k_max} at x = {x}")]
    Truncation { k_max: usize, x: f64 },
    #[error("pole of multiplicity {0} at a single point; at most 3 is supported")]
    MultiplicityTooHigh(i64),
    #[error("vanishing outside the unit interval needs sum(b) < sum(a), got {sum_b} >= {sum_a}")]
    VanishingHypothesis { sum_a: f64, sum_b: f64 },
    #[error("p = q has no exponential large-x regime")]
    NoExponentialRegime,
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// `G^{q,0}_{p,q}(x | a; b)` with `p = a.len() <= q = b.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct GSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl GSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, GError> {
        if a.len() > b.len() {
            return Err(GError::InvalidOrder { p: a.len(), q: b.len() });
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(GError::NonFinite);
        }
        Ok(GSpec { a, b })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// `q - p`.
    pub fn mu(&self) -> usize {
        self.q() - self.p()
    }

    /// `sum(a) - sum(b) + (q - p + 1) / 2`.
    pub fn alpha(&self) -> f64 {
        self.a.iter().sum::<f64>() - self.b.iter().sum::<f64>() + 0.5 * (self.mu() as f64 + 1.0)
    }

    fn key(&self) -> Vec<u64> {
        let mut k: Vec<u64> = vec![self.a.len() as u64];
        k.extend(self.a.iter().chain(&self.b).map(|v| v.to_bits()));
        k
    }
}

// ---------------------------------------------------------------------------
// scalar arithmetic

/// Field operations and the gamma family in the two precisions the residue
/// sums run in.
pub trait Scalar: Clone + Send + Sync + 'static {
    fn lift(v: f64, prec: u32) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn log2_abs(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn gamma(&self) -> Self;
    fn digamma(&self) -> Self;
    fn trigamma(&self) -> Self;
}

/// `f64` mantissa with an unbounded binary exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wide {
    m: f64,
    e: i64,
}

fn frexp(v: f64) -> (f64, i64) {
    if v == 0.0 || !v.is_finite() {
        return (v, 0);
    }
    let bits = v.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        let (m, e) = frexp(v * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, exp - 1022)
}

fn ldexp(mut f: f64, mut k: i64) -> f64 {
    while k > 1000 {
        f *= 2f64.powi(1000);
        k -= 1000;
        if f.is_infinite() {
            return f;
        }
    }
    while k < -1000 {
        f *= 2f64.powi(-1000);
        k += 1000;
        if f == 0.0 {
            return f;
        }
    }
    f * 2f64.powi(k as i32)
}

impl Wide {
    fn norm(m: f64, e: i64) -> Wide {
        let (mm, de) = frexp(m);
        if mm == 0.0 { Wide { m: 0.0, e: 0 } } else { Wide { m: mm, e: e + de } }
    }
}

impl Scalar for Wide {
    fn lift(v: f64, _prec: u32) -> Self {
        Wide::norm(v, 0)
    }
    fn add(&self, o: &Self) -> Self {
        if self.m == 0.0 {
            return *o;
        }
        if o.m == 0.0 {
            return *self;
        }
        let d = self.e - o.e;
        if d > 64 {
            *self
        } else if d < -64 {
            *o
        } else if d >= 0 {
            Wide::norm(self.m + ldexp(o.m, -d), self.e)
        } else {
            Wide::norm(ldexp(self.m, d) + o.m, o.e)
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&Wide { m: -o.m, e: o.e })
    }
    fn mul(&self, o: &Self) -> Self {
        Wide::norm(self.m * o.m, self.e + o.e)
    }
    fn div(&self, o: &Self) -> Self {
        Wide::norm(self.m / o.m, self.e - o.e)
    }
    fn to_f64(&self) -> f64 {
        ldexp(self.m, self.e)
    }
    fn log2_abs(&self) -> f64 {
        if self.m == 0.0 { f64::NEG_INFINITY } else { self.m.abs().log2() + self.e as f64 }
    }
    fn is_zero(&self) -> bool {
        self.m == 0.0
    }
    fn ln(&self) -> Self {
        Wide::lift(self.m.ln() + self.e as f64 * LN_2, 0)
    }
    fn exp(&self) -> Self {
        let y = self.to_f64();
        let k = (y / LN_2).floor();
        let r = y - k * LN_2;
        Wide::norm(r.exp(), k as i64)
    }
    fn gamma(&self) -> Self {
        let x = self.to_f64();
        let (lg, sg) = specfun::log_gamma_signed(x);
        if lg < 700.0 {
            Wide::lift(specfun::gamma(x), 0)
        } else {
            Wide::lift(lg, 0).exp().mul(&Wide::lift(sg, 0))
        }
    }
    fn digamma(&self) -> Self {
        Wide::lift(specfun::digamma(self.to_f64()), 0)
    }
    fn trigamma(&self) -> Self {
        Wide::lift(specfun::trigamma(self.to_f64()), 0)
    }
}

impl Scalar for XFloat {
    fn lift(v: f64, prec: u32) -> Self {
        XFloat::from_f64(v, prec)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn to_f64(&self) -> f64 {
        XFloat::to_f64(self)
    }
    fn log2_abs(&self) -> f64 {
        XFloat::log2_abs(self)
    }
    fn is_zero(&self) -> bool {
        XFloat::is_zero(self)
    }
    fn ln(&self) -> Self {
        XFloat::ln(self)
    }
    fn exp(&self) -> Self {
        XFloat::exp(self)
    }
    fn gamma(&self) -> Self {
        XFloat::gamma(self)
    }
    fn digamma(&self) -> Self {
        XFloat::digamma(self)
    }
    fn trigamma(&self) -> Self {
        XFloat::trigamma(self)
    }
}

// ---------------------------------------------------------------------------
// pole structure

fn int_offset(v: f64) -> Option<i64> {
    let r = v.round();
    if (v - r).abs() < SNAP_TOL { Some(r as i64) } else { None }
}

#[derive(Clone, Debug)]
struct PoleClass {
    beta: f64,
    /// `(index into b, integer offset from beta)`.
    b_members: Vec<(usize, i64)>,
    a_members: Vec<(usize, i64)>,
}

impl PoleClass {
    fn multiplicity(&self, k: i64) -> i64 {
        let p = self.b_members.iter().filter(|m| m.1 <= k).count() as i64;
        let z = self.a_members.iter().filter(|m| m.1 <= k).count() as i64;
        p - z
    }

    /// Beyond this shift the multiplicity no longer changes.
    fn settled_after(&self) -> i64 {
        self.b_members.iter().chain(&self.a_members).map(|m| m.1).max().unwrap_or(0)
    }
}

fn pole_classes(g: &GSpec) -> Vec<PoleClass> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (j, &bj) in g.b.iter().enumerate() {
        match groups.iter_mut().find(|grp| int_offset(bj - g.b[grp[0]]).is_some()) {
            Some(grp) => grp.push(j),
            None => groups.push(vec![j]),
        }
    }
    groups
        .into_iter()
        .map(|grp| {
            let beta = grp.iter().map(|&j| g.b[j]).fold(f64::INFINITY, f64::min);
            let b_members = grp.iter().map(|&j| (j, int_offset(g.b[j] - beta).unwrap())).collect();
            let a_members = g
                .a
                .iter()
                .enumerate()
                .filter_map(|(i, &ai)| int_offset(ai - beta).map(|t| (i, t)))
                .collect();
            PoleClass { beta, b_members, a_members }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleEntry {
    /// Index of a lower parameter producing the pole.
    pub j: usize,
    /// Shift with `location = -b_j - k`.
    pub k: usize,
    pub location: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleTable {
    pub entries: Vec<PoleEntry>,
}

/// Poles `s = -b_j - k` with `k <= k_max`, merged by location, cancelled
/// poles dropped.
pub fn build_pole_table(g: &GSpec, k_max: usize) -> PoleTable {
    let mut entries = Vec::new();
    for class in pole_classes(g) {
        let top = class.b_members.iter().map(|m| m.1).min().unwrap_or(0) + k_max as i64;
        for big_k in 0..=top {
            let mult = class.multiplicity(big_k);
            if mult <= 0 {
                continue;
            }
            let &(j, nj) = class.b_members.iter().filter(|m| m.1 <= big_k).min_by_key(|m| m.0).unwrap();
            let k = (big_k - nj) as usize;
            if k > k_max {
                continue;
            }
            entries.push(PoleEntry { j, k, location: -class.beta - big_k as f64, multiplicity: mult as usize });
        }
    }
    entries.sort_by(|x, y| y.location.total_cmp(&x.location));
    PoleTable { entries }
}

/// `h(s) = prod Gamma(b_j + s) / prod Gamma(a_i + s)`.
pub fn h_ratio(g: &GSpec, s: f64) -> f64 {
    let mut log = 0.0;
    let mut sign = 1.0;
    for &b in &g.b {
        if specfun::is_nonpositive_integer(b + s) {
            return f64::NAN;
        }
        let (l, sg) = specfun::log_gamma_signed(b + s);
        log += l;
        sign *= sg;
    }
    for &a in &g.a {
        if specfun::is_nonpositive_integer(a + s) {
            return 0.0;
        }
        let (l, sg) = specfun::log_gamma_signed(a + s);
        log -= l;
        sign *= sg;
    }
    sign * log.exp()
}

// ---------------------------------------------------------------------------
// residue data

/// Laurent data of one gamma factor `Gamma(c + eps)` at the current pole:
/// `eps^[c <= 0] Gamma(c + eps) = v exp(l1 eps + l2 eps^2 / 2 + ...)`.
#[derive(Clone)]
struct Factor<S> {
    c: S,
    int: Option<i64>,
    v: S,
    l1: S,
    l2: S,
}

impl<S: Scalar> Factor<S> {
    fn new(c: S, int: Option<i64>, prec: u32) -> Self {
        let one = S::lift(1.0, prec);
        match int {
            Some(ci) if ci <= 0 => {
                let m = -ci;
                let mut fact = one.clone();
                for i in 1..=m {
                    fact = fact.mul(&S::lift(i as f64, prec));
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let arg = S::lift(1.0 + m as f64, prec);
                let two_t1 = one.trigamma().add(&one.trigamma());
                Factor {
                    c,
                    int,
                    v: S::lift(sign, prec).div(&fact),
                    l1: arg.digamma(),
                    l2: two_t1.sub(&arg.trigamma()),
                }
            }
            _ => Factor { v: c.gamma(), l1: c.digamma(), l2: c.trigamma(), c, int },
        }
    }

    fn step_down(&mut self, prec: u32) {
        let one = S::lift(1.0, prec);
        if self.int == Some(1) {
            self.int = Some(0);
            self.c = S::lift(0.0, prec);
            return;
        }
        let d = self.c.sub(&one);
        let inv = one.div(&d);
        self.v = self.v.div(&d);
        self.l1 = self.l1.sub(&inv);
        self.l2 = self.l2.add(&inv.mul(&inv));
        self.c = d;
        self.int = self.int.map(|i| i - 1);
    }
}

#[derive(Clone)]
struct PoleData<S> {
    mult: i64,
    phi0: S,
    l1: S,
    l2: S,
}

struct ClassSeries<S> {
    beta: f64,
    settled_after: i64,
    poles: Vec<PoleData<S>>,
}

fn build_class_series<S: Scalar>(g: &GSpec, class: &PoleClass, len: usize, prec: u32) -> ClassSeries<S> {
    let beta = S::lift(class.beta, prec);
    let mk = |param: f64, member: Option<i64>| -> Factor<S> {
        match member {
            Some(t) => Factor::new(S::lift(t as f64, prec), Some(t), prec),
            None => Factor::new(S::lift(param, prec).sub(&beta), None, prec),
        }
    };
    let member = |list: &[(usize, i64)], idx: usize| list.iter().find(|m| m.0 == idx).map(|m| m.1);
    let mut num: Vec<Factor<S>> = g.b.iter().enumerate().map(|(j, &b)| mk(b, member(&class.b_members, j))).collect();
    let mut den: Vec<Factor<S>> = g.a.iter().enumerate().map(|(i, &a)| mk(a, member(&class.a_members, i))).collect();
    let mut poles = Vec::with_capacity(len);
    for big_k in 0..len {
        if big_k > 0 {
            num.iter_mut().chain(den.iter_mut()).for_each(|f| f.step_down(prec));
        }
        let mult = class.multiplicity(big_k as i64);
        let mut phi0 = S::lift(1.0, prec);
        let mut l1 = S::lift(0.0, prec);
        let mut l2 = S::lift(0.0, prec);
        if mult > 0 {
            for f in &num {
                phi0 = phi0.mul(&f.v);
                l1 = l1.add(&f.l1);
                l2 = l2.add(&f.l2);
            }
            for f in &den {
                phi0 = phi0.div(&f.v);
                l1 = l1.sub(&f.l1);
                l2 = l2.sub(&f.l2);
            }
        }
        poles.push(PoleData { mult, phi0, l1, l2 });
    }
    ClassSeries { beta: class.beta, settled_after: class.settled_after(), poles }
}

type TableKey = (Vec<u64>, u32, usize);

fn class_tables<S: Scalar>(g: &GSpec, len: usize, prec: u32) -> Arc<Vec<ClassSeries<S>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<dyn Any + Send + Sync>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (g.key(), prec, len);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        if let Ok(t) = hit.clone().downcast::<Vec<ClassSeries<S>>>() {
            return t;
        }
    }
    let tables: Arc<Vec<ClassSeries<S>>> =
        Arc::new(pole_classes(g).iter().map(|c| build_class_series(g, c, len, prec)).collect());
    let mut guard = cache.lock().unwrap();
    if guard.len() > 512 {
        guard.clear();
    }
    guard.insert(key, tables.clone());
    tables
}

struct SeriesResult {
    value: f64,
    lost_bits: f64,
}

fn residue_sum<S: Scalar>(g: &GSpec, x: f64, k_max: usize, prec: u32) -> Result<SeriesResult, GError> {
    let tables = class_tables::<S>(g, k_max + 1, prec);
    for t in tables.iter() {
        if let Some(m) = t.poles.iter().map(|p| p.mult).max() {
            if m > MAX_MULTIPLICITY {
                return Err(GError::MultiplicityTooHigh(m));
            }
        }
    }
    let xs = S::lift(x, prec);
    let lnx = xs.ln();
    let mut xpow: Vec<S> = tables.iter().map(|t| S::lift(t.beta, prec).mul(&lnx).exp()).collect();
    let settled = tables.iter().map(|t| t.settled_after).max().unwrap_or(0);
    let half = S::lift(0.5, prec);
    let mut sum = S::lift(0.0, prec);
    let mut max_log2 = f64::NEG_INFINITY;
    let mut small = 0;
    let mut prev_mag = f64::INFINITY;
    for big_k in 0..=k_max {
        let mut mag = f64::NEG_INFINITY;
        for (t, xp) in tables.iter().zip(xpow.iter_mut()) {
            let pd = &t.poles[big_k];
            if pd.mult > 0 {
                let y = pd.l1.sub(&lnx);
                let poly = match pd.mult {
                    1 => S::lift(1.0, prec),
                    2 => y,
                    _ => y.mul(&y).add(&pd.l2).mul(&half),
                };
                let term = xp.mul(&pd.phi0).mul(&poly);
                let l2 = term.log2_abs();
                mag = mag.max(l2);
                max_log2 = max_log2.max(l2);
                sum = sum.add(&term);
            }
            *xp = xp.mul(&xs);
        }
        let sum_log2 = sum.log2_abs();
        if big_k as i64 > settled {
            if mag < sum_log2 - 56.0 && mag <= prev_mag {
                small += 1;
                if small >= 3 {
                    return Ok(SeriesResult { value: sum.to_f64(), lost_bits: (max_log2 - sum_log2).max(0.0) });
                }
            } else {
                small = 0;
            }
        }
        prev_mag = mag;
    }
    Err(GError::Truncation { k_max, x })
}

/// Residue-series value of `G^{q,0}_{p,q}(x | a; b)` with at most `k_max`
/// shifts per pole class. Precision is raised until the cancellation in the
/// sum is absorbed.
pub fn g_eval(g: &GSpec, x: f64, k_max: usize) -> Result<f64, GError> {
    if !(x > 0.0) {
        return Err(GError::NonPositiveX(x));
    }
    if g.p() == g.q() && x >= 1.0 {
        return Err(GError::OutsideUnitInterval(x));
    }
    let estimate = expected_lost_bits(g, x);
    if estimate <= F64_LOST_BITS_OK {
        let r = residue_sum::<Wide>(g, x, k_max, 0)?;
        if r.lost_bits <= F64_LOST_BITS_OK && r.value.is_finite() {
            return Ok(r.value);
        }
    }
    let mut prec = round_prec(estimate.max(8.0) + 96.0);
    for _ in 0..4 {
        let r = residue_sum::<XFloat>(g, x, k_max, prec)?;
        if r.lost_bits + 70.0 <= prec as f64 {
            return Ok(r.value);
        }
        prec = round_prec(r.lost_bits + 96.0);
    }
    Err(GError::Truncation { k_max, x })
}

fn round_prec(bits: f64) -> u32 {
    ((bits / 64.0).ceil() as u32).max(2) * 64
}

/// Cancellation in the residue sum, in bits: the largest terms are about
/// `exp(mu x^(1/mu))` while the value is about `exp(-mu x^(1/mu))`.
fn expected_lost_bits(g: &GSpec, x: f64) -> f64 {
    if g.p() == g.q() {
        return 0.0;
    }
    let mu = g.mu() as f64;
    let y = mu * x.powf(1.0 / mu);
    if y < 2.0 { 0.0 } else { 2.0 * y / LN_2 }
}

/// Rough number of residue terms needed at `x`.
pub fn estimated_terms(g: &GSpec, x: f64) -> f64 {
    if g.p() == g.q() {
        return 200.0;
    }
    let mu = g.mu() as f64;
    std::f64::consts::E * mu * x.powf(1.0 / mu) + 50.0
}

/// Exactly zero for `p = q`, `x > 1` and `sum(b) < sum(a)`.
pub fn g_eval_unit_interval(g: &GSpec, x: f64) -> Result<f64, GError> {
    let sum_a: f64 = g.a.iter().sum();
    let sum_b: f64 = g.b.iter().sum();
    if g.p() != g.q() || !(x > 1.0) {
        return Err(GError::OutsideUnitInterval(x));
    }
    if sum_b >= sum_a {
        return Err(GError::VanishingHypothesis { sum_a, sum_b });
    }
    Ok(0.0)
}

/// Leading large-`x` behaviour for `p < q`.
pub fn g_asymptotic_large(g: &GSpec, x: f64) -> Result<f64, GError> {
    if g.p() == g.q() {
        return Err(GError::NoExponentialRegime);
    }
    if !(x > 0.0) {
        return Err(GError::NonPositiveX(x));
    }
    let mu = g.mu() as f64;
    let alpha = g.alpha();
    let log = 0.5 * (mu - 1.0) * (2.0 * PI).ln() - 0.5 * mu.ln() + (1.0 - alpha) / mu * x.ln()
        - mu * x.powf(1.0 / mu);
    Ok(log.exp())
}

// ---------------------------------------------------------------------------
// p = q near x = 1

/// Action of the G-function differential operator on `(1-x)^c`, as
/// coefficients of `(1-x)^(c-d)` for `d = -1..=q` (index `d + 1`).
fn operator_action(g: &GSpec, c: f64) -> Vec<f64> {
    let q = g.q();
    let apply = |v: &[f64], shift: f64| -> Vec<f64> {
        // (theta - shift) (1-x)^(c-d) = (c-d-shift) (1-x)^(c-d) - (c-d) (1-x)^(c-d-1)
        let mut out = vec![0.0; v.len()];
        for d in 0..v.len() {
            if v[d] == 0.0 {
                continue;
            }
            let cd = c - d as f64;
            out[d] += (cd - shift) * v[d];
            if d + 1 < v.len() {
                out[d + 1] -= cd * v[d];
            }
        }
        out
    };
    let mut lhs = vec![0.0; q + 1];
    lhs[0] = 1.0;
    let mut rhs = lhs.clone();
    for &b in &g.b {
        lhs = apply(&lhs, b);
    }
    for &a in &g.a {
        rhs = apply(&rhs, a - 1.0);
    }
    let mut out = vec![0.0; q + 2];
    for d in 0..=q {
        out[d + 1] += lhs[d];
        // x (1-x)^(c-d) = (1-x)^(c-d) - (1-x)^(c-d+1)
        out[d + 1] -= rhs[d];
        out[d] += rhs[d];
    }
    out
}

/// Coefficients `c_n` with `G(x) = (1-x)^(S-1) sum c_n (1-x)^n`, `S = sum(a) - sum(b)`.
fn near_one_coefficients(g: &GSpec, n_max: usize) -> Option<Vec<f64>> {
    let q = g.q();
    let s = g.a.iter().sum::<f64>() - g.b.iter().sum::<f64>();
    let lambda = s - 1.0;
    let mut coef = vec![specfun::rgamma(s)];
    let actions: Vec<Vec<f64>> = (0..=n_max).map(|n| operator_action(g, lambda + n as f64)).collect();
    for big_n in 1..=n_max {
        let lead = actions[big_n][q];
        let scale = actions[big_n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if lead.abs() <= 1e-9 * scale {
            return None;
        }
        let mut acc = 0.0;
        for n in big_n.saturating_sub(q)..big_n {
            let d = n as i64 - big_n as i64 + q as i64 - 1;
            acc += coef[n] * actions[n][(d + 1) as usize];
        }
        coef.push(-acc / lead);
    }
    Some(coef)
}

fn near_one_sum(g: &GSpec, x: f64) -> Option<f64> {
    let w = 1.0 - x;
    let s = g.a.iter().sum::<f64>() - g.b.iter().sum::<f64>();
    let coef = near_one_coefficients(g, 400)?;
    let mut sum = 0.0;
    let mut wn = 1.0;
    let mut small = 0;
    for c in coef {
        let t = c * wn;
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small >= 3 {
                return Some(sum * w.powf(s - 1.0));
            }
        } else {
            small = 0;
        }
        wn *= w;
    }
    None
}

/// `G^{p,0}_{p,p}(x)` for `1/2 <= x < 1` by the expansion in powers of `1 - x`.
pub fn g_eval_near_one(g: &GSpec, x: f64) -> Result<f64, GError> {
    let sum_a: f64 = g.a.iter().sum();
    let sum_b: f64 = g.b.iter().sum();
    if g.p() != g.q() || !(x > 0.0 && x < 1.0) {
        return Err(GError::OutsideUnitInterval(x));
    }
    if sum_b >= sum_a {
        return Err(GError::VanishingHypothesis { sum_a, sum_b });
    }
    if let Some(v) = near_one_sum(g, x) {
        return Ok(v);
    }
    // resonant exponents: average two nearby parameter sets
    let eps = 1e-5;
    let mut lo = g.clone();
    let mut hi = g.clone();
    *lo.b.last_mut().unwrap() -= eps;
    *hi.b.last_mut().unwrap() += eps;
    match (near_one_sum(&lo, x), near_one_sum(&hi, x)) {
        (Some(u), Some(v)) => Ok(0.5 * (u + v)),
        _ => Err(GError::Truncation { k_max: 400, x }),
    }
}

// ---------------------------------------------------------------------------
// combined evaluator

/// Which route [`g_weight`] takes at a given `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Series,
    NearOne,
    Asymptotic,
    Vanishing,
}

pub fn regime(g: &GSpec, x: f64) -> Regime {
    if g.p() == g.q() {
        if x >= 1.0 {
            Regime::Vanishing
        } else if x >= NEAR_ONE_SWITCH {
            Regime::NearOne
        } else {
            Regime::Series
        }
    } else if estimated_terms(g, x) > SERIES_TERM_LIMIT {
        Regime::Asymptotic
    } else {
        Regime::Series
    }
}

/// The weight value at any `x > 0`: residue series, the expansion at 1,
/// the asymptote, or zero past 1, whichever applies.
pub fn g_weight(g: &GSpec, x: f64) -> Result<f64, GError> {
    if !(x > 0.0) {
        return Err(GError::NonPositiveX(x));
    }
    match regime(g, x) {
        Regime::Vanishing => {
            if x == 1.0 {
                let s = g.a.iter().sum::<f64>() - g.b.iter().sum::<f64>();
                return Ok(if s > 1.0 { 0.0 } else if s == 1.0 { 1.0 } else { f64::INFINITY });
            }
            g_eval_unit_interval(g, x)
        }
        Regime::NearOne => g_eval_near_one(g, x),
        Regime::Asymptotic => g_asymptotic_large(g, x),
        Regime::Series => {
            let k_max = DEFAULT_K_MAX.max((1.5 * estimated_terms(g, x)) as usize);
            g_eval(g, x, k_max)
        }
    }
}

/// `int_0^inf x^(s-1) G(x) dx` by quadrature (upper limit 1 when `p = q`).
pub fn mellin_moment(g: &GSpec, s: f64, tol: f64) -> Result<f64, GError> {
    if g.p() == g.q() {
        let f = |x: f64| if x <= 0.0 || x >= 1.0 { 0.0 } else { x.powf(s - 1.0) * g_weight(g, x).unwrap_or(f64::NAN) };
        return Ok(quad::integrate_halfline(f, Decay::Cutoff { radius: 1.0 }, tol)?);
    }
    // x = y^mu turns the stretched exponential into a plain one
    let mu = g.mu() as f64;
    let f = |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        let x = y.powf(mu);
        if x.is_infinite() {
            return 0.0;
        }
        mu * y.powf(mu * s - 1.0) * g_weight(g, x).unwrap_or(f64::NAN)
    };
    Ok(quad::integrate_halfline(f, Decay::KBessel { rate: mu }, tol)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub diagnostics: Vec<String>,
}

/// Conditions under which `G(theta x^2)` is an admissible weight on the
/// half-line (`p < q`) or on `(0, 1)` (`p = q`).
pub fn is_admissible_weight(g: &GSpec, theta: f64) -> Admissibility {
    let mut diagnostics = Vec::new();
    if !(theta > 0.0) {
        diagnostics.push(format!("theta must be positive, got {theta}"));
    }
    for (i, &b) in g.b.iter().enumerate() {
        if b > -1.0 {
            continue;
        }
        let exempt = g.a.iter().any(|&a| int_offset(b - a).is_some_and(|k| k >= 0));
        if !exempt {
            diagnostics.push(format!("b[{i}] = {b} is not above -1 and not of the form a_j + k"));
        }
    }
    if g.p() == g.q() {
        let sum_a: f64 = g.a.iter().sum();
        let sum_b: f64 = g.b.iter().sum();
        if sum_b >= sum_a {
            diagnostics.push(format!("p = q needs sum(b) < sum(a), got {sum_b} >= {sum_a}"));
        }
    }
    Admissibility { admissible: diagnostics.is_empty(), diagnostics }
}
