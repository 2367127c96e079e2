//! Signatures of indefinite kernel spaces: closed form against sign counting.

use hyperkernel::rk_space::{self, HypParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        HypParams::plane(vec![-1.5], vec![], 1.0)?,
        HypParams::plane(vec![-0.5], vec![], 1.0)?,
        HypParams::plane(vec![-2.3], vec![-0.7, 1.5], 2.0)?,
        HypParams::disk(vec![2.0], vec![], 1.0)?,
        HypParams::disk(vec![-3.2, 1.1], vec![-4.6], 0.5)?,
    ];
    for h in &cases {
        let f = rk_space::pontryagin_index_formula(h);
        let o = rk_space::pontryagin_index_oracle(h, 64)?;
        println!(
            "a={:?} b={:?}: {} (+{}, -{}) oracle agrees: {}",
            h.a,
            h.b,
            f.space_class.as_str(),
            f.pos_index,
            f.neg_index,
            f.agrees_with(&o)
        );
    }
    Ok(())
}
