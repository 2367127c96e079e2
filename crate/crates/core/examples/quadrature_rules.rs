//! Graded radial rules for half-line integrals with known decay.

use hyperkernel::quad::{self, Decay, RadialRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // int_0^inf t^2 e^(-t) dt = 2
    let v = quad::integrate_halfline(|t| t * t * (-t).exp(), Decay::KBessel { rate: 1.0 }, 1e-12)?;
    println!("int t^2 e^-t      = {v:.16}");
    // int_0^inf e^(-t^2) dt = sqrt(pi)/2
    let v = quad::integrate_halfline(|t| (-t * t).exp(), Decay::Gaussian { rate: 1.0 }, 1e-12)?;
    println!("int e^-t^2        = {v:.16} (want {:.16})", std::f64::consts::PI.sqrt() / 2.0);
    // an integrable endpoint singularity on (0, 1)
    let v = quad::integrate_halfline(|t| t.powf(-0.5), Decay::Cutoff { radius: 1.0 }, 1e-10)?;
    println!("int_0^1 t^-1/2    = {v:.12}");
    let rule = RadialRule::new(Decay::KBessel { rate: 2.0 }, 8)?;
    println!("{} nodes, largest {:.3}", rule.len(), rule.nodes.last().copied().unwrap_or(0.0));
    let slow = quad::integrate_halfline(|t| (-t).exp(), Decay::KBessel { rate: 10.0 }, 1e-10);
    println!("declared decay too fast: {slow:?}");
    Ok(())
}
