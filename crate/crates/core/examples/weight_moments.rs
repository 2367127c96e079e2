//! Moments of a Meijer G weight reproduce the inner-product coefficients.

use hyperkernel::rk_space::{self, HypParams, WeightSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = HypParams::plane(vec![1.5], vec![2.5, 0.7], 1.3)?;
    let w = WeightSpec::unshifted(&h)?;
    let m = rk_space::moments_from_weight(&w, 20, 1e-9)?;
    let want = h.inner_coefficients(21);
    for k in [0, 1, 5, 10, 20] {
        println!("k={k:>2}: moment {:.12e}  coefficient {:.12e}", m.c[k], want[k]);
    }
    let report = rk_space::completeness_check(&m)?;
    println!("completeness: {:?} (sup a_k/|c_k| = {:.3})", report.verdict, report.sup_ratio);
    Ok(())
}
