//! Laguerre expansions and the area integrals that turn powers into
//! Laguerre polynomials and back.

use hyperkernel::continuation::{self as cont, AreaOptions, BesselSpaceParams};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = AreaOptions::default();
    for nu in [0.0, 0.5] {
        let p = BesselSpaceParams::new(2.0, nu)?;
        println!("u^3 in Laguerre terms (nu={nu}): {:?}", cont::monomial_to_laguerre(&p, 3));
        for n in 0..=3 {
            let z = Complex64::new(1.0, 0.5);
            let a = cont::verify_lag2power(&p, n, z, &opts)?;
            let b = cont::verify_power2lag(&p, n, z, &opts)?;
            println!("  n={n}: residuals {:.1e} {:.1e}", a.residual, b.residual);
        }
        let bc = cont::verify_bessel_case(&p, Complex64::new(2.0, 0.0), &opts)?;
        println!("  Bessel case at z=2: {:.12} vs {:.12}", bc.lhs.re, bc.rhs.re);
    }
    Ok(())
}
