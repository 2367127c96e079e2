//! Analytic continuation of half-line data: closures and sampled CSV input.

use hyperkernel::continuation::{self as cont, AreaOptions, BesselSpaceParams, SampledFunction};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = BesselSpaceParams::new(2.0, 0.5)?;
    let opts = AreaOptions::default();
    let targets = [Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0)];

    let one = cont::continue_function(&p, &SampledFunction::constant(1.0), &targets, &opts)?;
    println!("F = 1, criterion {:?}", one.criterion);
    for (z, v) in targets.iter().zip(&one.values) {
        println!("  f({z}) = {v:.10}");
    }

    let csv: String = std::iter::once("t,re\n".to_string())
        .chain((1..=1200).map(|i| {
            let t = i as f64 * 0.05;
            format!("{t},{t}\n")
        }))
        .collect();
    let lin = SampledFunction::from_csv(csv.as_bytes())?;
    let res = cont::continue_function(&p, &lin, &targets, &opts)?;
    println!("F = t sampled, tail bias {:.1e}", res.tail_bias);
    for ((z, v), e) in targets.iter().zip(&res.values).zip(&res.errors) {
        println!("  f({z}) = {v:.8} (estimate {e:.1e})");
    }

    let grow = SampledFunction::from_samples(
        (1..=1000).map(|i| i as f64 * 0.04).collect(),
        (1..=1000).map(|i| Complex64::new((i as f64 * 0.04).exp(), 0.0)).collect(),
    )?;
    println!("F = e^t: {}", cont::continue_function(&p, &grow, &targets, &opts).unwrap_err());
    Ok(())
}
