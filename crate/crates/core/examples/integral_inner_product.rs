//! The series inner product against its area-integral representation.

use hyperkernel::rk_space::{self, HypParams, IntegralOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25), Complex64::new(0.0, 0.3)];
    let g = vec![Complex64::new(0.2, 0.1), Complex64::new(-1.0, 0.0), Complex64::new(0.7, 0.0)];
    let spaces = [
        HypParams::plane(vec![1.5], vec![2.5, 0.7], 1.3)?,
        HypParams::plane(vec![], vec![0.4], 1.0)?,
        HypParams::disk(vec![2.5, 1.2], vec![0.9], 1.0)?,
    ];
    for h in &spaces {
        let series = rk_space::series_inner_product(h, &f, &g)?;
        let integral = rk_space::integral_inner_product(h, &f, &g, &IntegralOptions::default())?;
        println!(
            "a={:?} b={:?}: series {:.12}  integral {:.12} ({:?}, l={})",
            h.a, h.b, series, integral.value, integral.representation, integral.l
        );
    }
    Ok(())
}
