//! Meijer G weights across their evaluation regimes, and their Mellin moments.

use hyperkernel::meijer_g::{self, GSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exp = GSpec::new(vec![], vec![0.5])?;
    for x in [0.1, 1.0, 10.0, 30.0] {
        let g = meijer_g::g_weight(&exp, x)?;
        println!("G(x|;0.5) at {x:>4}: {g:.15e}  x^0.5 e^-x = {:.15e}", x.sqrt() * (-x).exp());
    }
    let two = GSpec::new(vec![], vec![0.0, 0.5])?;
    for x in [0.5, 50.0, 5000.0] {
        println!("G^(2,0)_(0,2) at {x:>6}: {:.12e} via {:?}", meijer_g::g_weight(&two, x)?, meijer_g::regime(&two, x));
    }
    let unit = GSpec::new(vec![2.5], vec![0.5])?;
    for x in [0.3, 0.9, 1.5] {
        println!("G^(1,0)_(1,1) at {x}: {:.12e} via {:?}", meijer_g::g_weight(&unit, x)?, meijer_g::regime(&unit, x));
    }
    for s in [1.0, 2.0, 3.0] {
        let m = meijer_g::mellin_moment(&two, s, 1e-10)?;
        println!("Mellin moment s={s}: {m:.12}  closed form {:.12}", meijer_g::h_ratio(&two, s));
    }
    let bad = GSpec::new(vec![], vec![-1.5])?;
    println!("admissible b=-1.5: {:?}", meijer_g::is_admissible_weight(&bad, 1.0));
    Ok(())
}
