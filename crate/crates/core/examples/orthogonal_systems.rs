//! The orthonormal system phi_k, the biorthogonal phi*_k and the truncated
//! expansion of half-line data in the phi*_k.

use hyperkernel::continuation::{self as cont, AreaOptions, BesselSpaceParams, SampledFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = BesselSpaceParams::new(2.0, 0.5)?;
    let opts = AreaOptions::default();
    for j in 0..3 {
        let row: Vec<String> = (0..3)
            .map(|k| {
                let ip = cont::hr_inner_product(&p, |z| cont::phi_k(&p, j, z), |z| cont::phi_k(&p, k, z), &opts);
                ip.map(|v| format!("{:+.2e}", v.re)).unwrap_or_else(|e| e.to_string())
            })
            .collect();
        println!("<phi_{j}, phi_k> = {}", row.join(" "));
    }
    for k in 0..3 {
        let c = cont::theta_orthogonality(&p, k, k, 2.0, &opts)?;
        println!("theta=2 diagonal k={k}: {:.10} vs {:.10}", c.lhs.re, c.rhs.re);
    }
    for nu in [0.0, 0.5] {
        let p = BesselSpaceParams::new(2.0, nu)?;
        let r = cont::fourier_approx(&p, &SampledFunction::constant(1.0), 6, &opts)?;
        println!("F=1, nu={nu}: a_0 = {:.6}, residuals {:?}", r.coefficients[0].re, r.residuals);
    }
    Ok(())
}
