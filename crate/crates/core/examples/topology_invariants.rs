//! The three invariants that fix a Wright-type space up to norm equivalence.

use hyperkernel::rk_space::HypParams;
use hyperkernel::topology::{self, WrightParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fock = WrightParams::new(vec![], vec![], vec![1.0], vec![1.0])?;
    let inv = topology::invariants(&fock);
    println!("Fock: alpha={} mu={} nu={} l={} model={}", inv.alpha, inv.mu, inv.nu, inv.l, inv.model().as_str());

    let (w, theta) = WrightParams::from_hyp(&HypParams::disk(vec![2.0], vec![], 1.0)?)?;
    let inv = topology::invariants(&w).with_theta(theta);
    println!("Bergman: alpha={} mu={} nu={} model={}", inv.alpha, inv.mu, inv.nu, inv.model().as_str());

    let w = WrightParams::new(vec![0.5], vec![1.2], vec![2.0], vec![0.4])?;
    for k in [10, 50, 200] {
        let r = topology::asymptote_ratio(&w, k)? / w.asymptote_constant();
        println!("coefficient over asymptote at k={k}: {r:.6}");
    }
    let padded = w.with_cancelling_pair(1.7)?;
    let eq = topology::norm_equivalence_report(&w, &padded, 100);
    println!("with (1,1.7)/(1,1.7) appended: equivalent {} (bound {:.3})", eq.equivalent, eq.bound);
    println!("negative mu: {:?}", WrightParams::new(vec![2.0], vec![1.0], vec![1.0], vec![1.0]).unwrap_err());
    Ok(())
}
