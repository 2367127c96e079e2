//! The identity suite behind `hyperkernel verify`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::continuation::{self as cont, AreaOptions, BesselSpaceParams, SampledFunction};
use crate::meijer_g::{self, GSpec};
use crate::rk_space::{self, Geometry, HypParams};
use crate::specfun::{gamma, is_nonpositive_integer};
use crate::topology::{self, WrightParams};

use super::CliError;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub area: AreaOptions,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { area: AreaOptions::default(), seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRow {
    pub identity: String,
    pub parameters: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

type Check = Result<(String, f64), CliError>;

pub struct Identity {
    pub key: &'static str,
    pub tolerance: f64,
    run: fn(&SuiteConfig) -> Check,
}

impl Identity {
    pub fn run(&self, cfg: &SuiteConfig, tol: Option<f64>) -> VerifyRow {
        let tolerance = tol.unwrap_or(self.tolerance);
        let (parameters, residual) = match (self.run)(cfg) {
            Ok(r) => r,
            Err(e) => (format!("error: {e}"), f64::INFINITY),
        };
        VerifyRow { identity: self.key.to_string(), parameters, residual, tolerance, pass: residual <= tolerance }
    }
}

pub const IDENTITIES: &[Identity] = &[
    Identity { key: "key", tolerance: 1e-8, run: key },
    Identity { key: "constant", tolerance: 1e-4, run: constant },
    Identity { key: "lag2power", tolerance: 1e-4, run: lag2power },
    Identity { key: "power2lag", tolerance: 1e-4, run: power2lag },
    Identity { key: "bessel-case", tolerance: 1e-4, run: bessel_case },
    Identity { key: "monomial-laguerre", tolerance: 1e-12, run: monomial_laguerre },
    Identity { key: "chain", tolerance: 1e-5, run: chain },
    Identity { key: "r-kernel", tolerance: 1e-5, run: r_kernel },
    Identity { key: "kernel-k", tolerance: 1e-5, run: kernel_k },
    Identity { key: "knorm", tolerance: 1e-6, run: knorm },
    Identity { key: "phi-orthonormal", tolerance: 1e-6, run: phi_orthonormal },
    Identity { key: "theta-orthogonality", tolerance: 1e-4, run: theta_orthogonality },
    Identity { key: "g-closed-form", tolerance: 1e-10, run: g_closed_form },
    Identity { key: "mellin", tolerance: 1e-5, run: mellin },
    Identity { key: "g-vanishing", tolerance: 0.0, run: g_vanishing },
    Identity { key: "index-formula", tolerance: 0.0, run: index_formula },
    Identity { key: "fock-invariants", tolerance: 0.0, run: fock_invariants },
    Identity { key: "asymptote-ratio", tolerance: 0.02, run: asymptote_ratio },
    Identity { key: "pair-invariance", tolerance: 1e-12, run: pair_invariance },
];

pub fn identity(key: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.key == key)
}

/// Runs the whole suite, or the single identity `only`, with every tolerance
/// replaced by `tol` when given.
pub fn run_suite(only: Option<&str>, tol: Option<f64>, cfg: &SuiteConfig) -> Result<Vec<VerifyRow>, CliError> {
    match only {
        Some(k) => {
            let id = identity(k).ok_or_else(|| {
                let keys: Vec<&str> = IDENTITIES.iter().map(|i| i.key).collect();
                CliError::Input(format!("unknown identity {k:?}; expected one of {}", keys.join(", ")))
            })?;
            Ok(vec![id.run(cfg, tol)])
        }
        None => Ok(IDENTITIES.iter().map(|i| i.run(cfg, tol)).collect()),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn bessel(alpha: f64, nu: f64) -> Result<BesselSpaceParams, CliError> {
    Ok(BesselSpaceParams::new(alpha, nu)?)
}

fn max_of(it: impl IntoIterator<Item = Result<f64, CliError>>) -> Result<f64, CliError> {
    it.into_iter().try_fold(0.0f64, |m, r| Ok(m.max(r?)))
}

const KEY_POINTS: [(f64, f64, f64, f64); 5] =
    [(0.5, 1.0, 1.0, 1.0), (0.0, 2.0, 1.0, 0.5), (1.5, 0.5, 2.0, 1.0), (2.0, 3.0, 2.5, 2.0), (0.25, 1.0, 1.5, 0.8)];

fn key(_: &SuiteConfig) -> Check {
    let r = max_of(KEY_POINTS.iter().map(|&(nu, z, u, g)| Ok(cont::verify_key_identity(nu, z, u, g)?.residual)))?;
    Ok(("(nu, z, u, gamma) in 5-point sweep".into(), r))
}

fn constant(cfg: &SuiteConfig) -> Check {
    let p = bessel(2.0, 0.5)?;
    let zs = [c(0.5, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
    let res = cont::continue_function(&p, &SampledFunction::constant(1.0), &zs, &cfg.area)?;
    let r = res.values.iter().fold(0.0f64, |m, v| m.max((v - 1.0).norm()));
    Ok(("alpha=2 nu=0.5 F=1 z in {0.5,1,2}".into(), r))
}

const LAGUERRE_ZS: [(f64, f64); 2] = [(0.5, 0.0), (1.0, 0.5)];

fn laguerre_sweep(
    cfg: &SuiteConfig,
    f: fn(&BesselSpaceParams, usize, Complex64, &AreaOptions) -> Result<cont::IdentityCheck, cont::ContinuationError>,
) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for nu in [0.0, 0.5] {
        let p = bessel(2.0, nu)?;
        for n in 0..=3 {
            for &(re, im) in &LAGUERRE_ZS {
                worst = worst.max(f(&p, n, c(re, im), &cfg.area)?.residual);
            }
        }
    }
    Ok(worst)
}

fn lag2power(cfg: &SuiteConfig) -> Check {
    Ok(("alpha=2 nu in {0,0.5} n<=3 z in {0.5,1+0.5i}".into(), laguerre_sweep(cfg, cont::verify_lag2power)?))
}

fn power2lag(cfg: &SuiteConfig) -> Check {
    Ok(("alpha=2 nu in {0,0.5} n<=3 z in {0.5,1+0.5i}".into(), laguerre_sweep(cfg, cont::verify_power2lag)?))
}

fn bessel_case(cfg: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for nu in [0.0, 0.5] {
        let p = bessel(2.0, nu)?;
        for z in [c(0.5, 0.0), c(2.0, 0.0), c(1.0, 1.0)] {
            worst = worst.max(cont::verify_bessel_case(&p, z, &cfg.area)?.residual);
        }
    }
    Ok(("alpha=2 nu in {0,0.5} z in {0.5,2,1+i}".into(), worst))
}

fn monomial_laguerre(_: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for nu in [0.0, 0.5] {
        let p = bessel(2.0, nu)?;
        for n in 0..=6 {
            worst = worst.max(cont::monomial_laguerre_residual(&p, n));
        }
    }
    Ok(("alpha=2 nu in {0,0.5} n<=6".into(), worst))
}

const GRID_A: [f64; 3] = [0.5, 1.0, 2.0];
const GRID_B: [(f64, f64); 3] = [(0.5, 0.0), (1.0, 1.0), (-1.0, 0.5)];

fn chain(_: &SuiteConfig) -> Check {
    let p = bessel(2.0, 0.5)?;
    let r = max_of(GRID_A.iter().flat_map(|&s| {
        GRID_B.iter().map(move |&(re, im)| {
            let z = c(re, im);
            Ok(rel(cont::chain_ttstar_tk_quadrature(&p, s, z)?, cont::chain_ttstar_tk(&p, s, z)))
        })
    }))?;
    Ok(("alpha=2 nu=0.5 s in {0.5,1,2} x z in {0.5,1+i,-1+0.5i}".into(), r))
}

fn r_kernel(_: &SuiteConfig) -> Check {
    let p = bessel(2.0, 0.5)?;
    let r = max_of(GRID_A.iter().flat_map(|&z| {
        GRID_B.iter().map(move |&(re, im)| {
            let (z, uc) = (c(z, 0.0), c(re, -im));
            Ok(rel(cont::r_kernel_quadrature(&p, z, uc)?, cont::r_kernel(&p, z, uc)))
        })
    }))?;
    Ok(("alpha=2 nu=0.5 z in {0.5,1,2} x u in {0.5,1+i,-1+0.5i}".into(), r))
}

fn kernel_k(_: &SuiteConfig) -> Check {
    let p = bessel(2.0, 0.5)?;
    let r = max_of(GRID_A.iter().flat_map(|&z| {
        GRID_B.iter().map(move |&(re, im)| {
            let (z, uc) = (c(z, 0.0), c(re, -im));
            Ok(rel(cont::kernel_k_quadrature(&p, z, uc)?, cont::kernel_k(&p, z, uc)))
        })
    }))?;
    Ok(("alpha=2 nu=0.5 z in {0.5,1,2} x u in {0.5,1+i,-1+0.5i}".into(), r))
}

fn knorm(cfg: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for (alpha, nu) in [(2.0, 0.5), (1.0, 0.0), (3.0, 1.5)] {
        let p = bessel(alpha, nu)?;
        for n in 0..=6 {
            let got = cont::space_norm_sq(&p, |z| z.powi(n as i32), &cfg.area)?;
            let nf = n as f64;
            let want = 4f64.powi(n as i32) * gamma(nf + 1.0) * gamma(nf + nu + 1.0) / alpha.powi(2 * n as i32);
            worst = worst.max((got - want).abs() / want);
        }
    }
    Ok(("(alpha, nu) in {(2,0.5),(1,0),(3,1.5)} n<=6".into(), worst))
}

fn phi_orthonormal(cfg: &SuiteConfig) -> Check {
    let p = bessel(2.0, 0.5)?;
    let mut worst = 0.0f64;
    for j in 0..=4 {
        for k in 0..=4 {
            let ip = cont::hr_inner_product(&p, |z| cont::phi_k(&p, j, z), |z| cont::phi_k(&p, k, z), &cfg.area)?;
            let want = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((ip - want).norm());
        }
    }
    Ok(("alpha=2 nu=0.5 j,k<=4".into(), worst))
}

fn theta_orthogonality(cfg: &SuiteConfig) -> Check {
    let p = bessel(2.0, 0.5)?;
    let mut worst = 0.0f64;
    for k in 0..=3 {
        for m in 0..=3 {
            worst = worst.max(cont::theta_orthogonality(&p, k, m, 2.0, &cfg.area)?.residual);
        }
    }
    Ok(("alpha=2 nu=0.5 theta=2 k,m<=3".into(), worst))
}

fn g_closed_form(_: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for b in [0.0, 0.5, 2.0] {
        let g = GSpec::new(vec![], vec![b])?;
        for x in [0.1f64, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0] {
            let want = x.powf(b) * (-x).exp();
            worst = worst.max((meijer_g::g_weight(&g, x)? - want).abs() / want);
        }
    }
    Ok(("G^{1,0}_{0,1}(x|b) b in {0,0.5,2} x in [0.1,30]".into(), worst))
}

/// Specs and exponents for the Mellin-moment check.
pub const MELLIN_SPECS: [(&[f64], &[f64]); 5] =
    [(&[], &[0.0]), (&[], &[0.5]), (&[], &[0.0, 0.5]), (&[2.5], &[0.5]), (&[1.5], &[0.3, 1.0])];
pub const MELLIN_S: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

fn mellin(_: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for (a, b) in MELLIN_SPECS {
        let g = GSpec::new(a.to_vec(), b.to_vec())?;
        for s in MELLIN_S {
            let want = b.iter().map(|v| gamma(v + s)).product::<f64>() / a.iter().map(|v| gamma(v + s)).product::<f64>();
            let got = meijer_g::mellin_moment(&g, s, 1e-10)?;
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    Ok(("5 specs x s in {1,1.5,2,3}".into(), worst))
}

fn g_vanishing(_: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for (a, b) in [(vec![2.5], vec![0.5]), (vec![3.0, 2.2], vec![0.5, 1.0])] {
        let g = GSpec::new(a, b)?;
        for x in [1.5, 2.0, 10.0] {
            worst = worst.max(meijer_g::g_weight(&g, x)?.abs());
        }
    }
    Ok(("p=q specs at x in {1.5,2,10}".into(), worst))
}

fn non_integer(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let v: f64 = rng.random_range(lo..hi);
        if (v - v.round()).abs() > 1e-3 {
            return v;
        }
    }
}

/// Random parameters with at most three negative entries, `|d_i| <= 5`
/// and no integer entries, in either geometry.
pub fn random_hyp_params(rng: &mut impl Rng) -> HypParams {
    let geometry = if rng.random_bool(0.5) { Geometry::Plane } else { Geometry::Disk };
    let q = rng.random_range(0..=3usize);
    let p = match geometry {
        Geometry::Plane => rng.random_range(0..=q),
        Geometry::Disk => q + 1,
    };
    let m = rng.random_range(0..=3usize.min(p + q));
    let mut all: Vec<f64> = (0..p + q).map(|_| non_integer(rng, 0.05, 5.0)).collect();
    for v in all.iter_mut().take(m) {
        *v = -non_integer(rng, 0.05, 5.0);
    }
    for i in (1..all.len()).rev() {
        all.swap(i, rng.random_range(0..=i));
    }
    let b = all.split_off(p);
    let theta = rng.random_range(0.5..2.0);
    HypParams::new(all, b, theta, geometry).expect("non-integer finite parameters")
}

pub const INDEX_SWEEP: usize = 200;

fn index_formula(cfg: &SuiteConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = 0usize;
    for _ in 0..INDEX_SWEEP {
        let h = random_hyp_params(&mut rng);
        debug_assert!(h.a.iter().chain(&h.b).all(|&v| !is_nonpositive_integer(v)));
        let oracle = rk_space::pontryagin_index_oracle(&h, 64)?;
        if !rk_space::pontryagin_index_formula(&h).agrees_with(&oracle) {
            bad += 1;
        }
    }
    Ok((format!("{INDEX_SWEEP} random parameter sets, seed {}", cfg.seed), bad as f64))
}

fn fock() -> Result<WrightParams, CliError> {
    Ok(WrightParams::new(vec![], vec![], vec![1.0], vec![1.0])?)
}

fn fock_invariants(_: &SuiteConfig) -> Check {
    let inv = topology::invariants(&fock()?);
    let r = (inv.alpha - 0.5).abs().max((inv.mu - 1.0).abs()).max((inv.nu - 1.0).abs()).max(inv.l as f64);
    Ok(("B=(1), b=(1)".into(), r))
}

/// Parameter sets for the coefficient asymptote.
pub fn asymptote_sets() -> Vec<WrightParams> {
    let w = |big_a: &[f64], a: &[f64], big_b: &[f64], b: &[f64]| {
        WrightParams::new(big_a.to_vec(), a.to_vec(), big_b.to_vec(), b.to_vec()).expect("valid Wright parameters")
    };
    vec![
        w(&[], &[], &[1.0], &[1.0]),
        w(&[1.0], &[2.5], &[1.0], &[0.5]),
        w(&[0.5], &[1.2], &[2.0], &[0.4]),
        w(&[0.5, 1.5], &[1.2, 0.7], &[2.0, 1.0], &[0.4, 2.2]),
        w(&[1.0], &[0.3], &[1.0, 1.0], &[1.5, 1.0]),
    ]
}

fn asymptote_ratio(_: &SuiteConfig) -> Check {
    let r = max_of(
        asymptote_sets().iter().map(|w| Ok((topology::asymptote_ratio(w, 200)? / w.asymptote_constant() - 1.0).abs())),
    )?;
    Ok(("5 parameter sets at k=200".into(), r))
}

fn pair_invariance(_: &SuiteConfig) -> Check {
    let mut worst = 0.0f64;
    for w in asymptote_sets() {
        let base = topology::invariants(&w);
        for cpar in [0.3, 1.7, 4.0] {
            let inv = topology::invariants(&w.with_cancelling_pair(cpar)?);
            let d = (inv.alpha - base.alpha).abs().max((inv.mu - base.mu).abs()).max((inv.nu - base.nu).abs());
            worst = worst.max(d);
        }
    }
    Ok(("5 sets with (1,c)/(1,c) appended, c in {0.3,1.7,4}".into(), worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_params_respect_the_sweep_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let h = random_hyp_params(&mut rng);
            let neg: Vec<f64> = h.a.iter().chain(&h.b).copied().filter(|v| *v < 0.0).collect();
            assert!(neg.len() <= 3 && neg.iter().all(|v| v.abs() <= 5.0));
            assert!(h.validate_geometry().is_ok());
        }
    }

    #[test]
    fn cheap_rows_pass() {
        let cfg = SuiteConfig::default();
        for k in ["key", "monomial-laguerre", "g-closed-form", "g-vanishing", "index-formula", "fock-invariants", "pair-invariance"] {
            let row = identity(k).unwrap().run(&cfg, None);
            assert!(row.pass, "{row:?}");
        }
        let row = identity("key").unwrap().run(&cfg, Some(1e-30));
        assert!(!row.pass);
    }
}
