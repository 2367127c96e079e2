//! The Bessel kernel space on the plane: norms, the Gaussian Bessel integral
//! and the kernels obtained by chaining the restriction map with its adjoint.

use hyperkernel::continuation::{self as cont, AreaOptions, BesselSpaceParams};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = BesselSpaceParams::new(2.0, 0.5)?;
    let opts = AreaOptions::default();
    for n in 0..4 {
        let got = cont::space_norm_sq(&p, |z| z.powi(n), &opts)?;
        println!("||z^{n}||^2 = {got:.12}  1/c_k = {:.12}", 1.0 / cont::kernel_coefficient(&p, n as usize));
    }
    let key = cont::verify_key_identity(0.5, 1.0, 1.5, 0.8)?;
    println!("Bessel-J Gaussian integral: {:.15} vs {:.15}", key.lhs.re, key.rhs.re);
    let (z, uc) = (Complex64::new(1.0, 0.5), Complex64::new(0.5, -1.0));
    println!("r kernel:  closed {:.12}  quadrature {:.12}", cont::r_kernel(&p, z, uc), cont::r_kernel_quadrature(&p, z, uc)?);
    println!("k kernel:  closed {:.12}  quadrature {:.12}", cont::kernel_k(&p, z, uc), cont::kernel_k_quadrature(&p, z, uc)?);
    let bound = cont::restriction_norm_bound(&p, |z| Complex64::new(1.0, 0.0) + z * 0.5, &opts)?;
    println!("restriction bound {:.6} <= {:.6}: {}", bound.lhs, bound.rhs, bound.holds);
    Ok(())
}
