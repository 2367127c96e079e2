//! Gamma, Bessel, Laguerre, Mittag-Leffler and pFq values.

use hyperkernel::specfun;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Gamma(4.5)          = {:.15}", specfun::gamma(4.5));
    println!("(-1.5)_3 sign       = {}", specfun::pochhammer_sign(-1.5, 3));
    println!("I_0.5(2)            = {:.15}", specfun::bessel_i(0.5, 2.0)?);
    println!("K_1(3)              = {:.15e}", specfun::bessel_k(1.0, 3.0)?);
    println!("J_2(7.5)            = {:.15}", specfun::bessel_j(2.0, 7.5)?);
    println!("L_4^0.5(1.2)        = {:.15}", specfun::laguerre(4, 0.5, 1.2));
    println!("E_(1,1)(2) = e^2    : {:.15}", specfun::mittag_leffler(1.0, 1.0, 2.0)?);
    let z = Complex64::new(0.3, 0.4);
    println!("2F1(1, 1; 2; z)     = {:.15}", specfun::hyper_pfq(&[1.0, 1.0], &[2.0], z)?);
    println!("-log(1 - z) / z     = {:.15}", -(1.0 - z).ln() / z);
    println!("P(2.5, 3), Q(2.5, 3) = {:?}", specfun::gamma_pq(2.5, 3.0));
    Ok(())
}
