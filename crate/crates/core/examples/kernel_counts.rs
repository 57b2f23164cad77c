//! Exact kernel quantities: normalizers, expected counts outside a radius,
//! and the binomial sum identity in rational arithmetic.

use truncation_lab::dpp::{hockey_stick_sum, KernelSpec};
use truncation_lab::ensemble::TruncationEnsemble;
use truncation_lab::quadrature::QuadOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ens = TruncationEnsemble::new(100, 25)?;
    let k = KernelSpec::new(ens);
    println!("N_1 = {:.6}, N_2 = {:.6}, log N_25 = {:.6}", k.normalizer(1)?, k.normalizer(2)?, k.log_normalizer(25)?);
    for r in [0.0, 1.0, 1.05, 1.1, 1.2, 1.5] {
        let beta = k.expected_count_outside(r)?;
        let quad = k.expected_count_outside_quadrature(r, QuadOptions::default())?;
        println!("E #{{|z| > {r}}} = {beta:.8} (quadrature {quad:.8})");
    }

    let small = TruncationEnsemble::new(6, 3)?;
    println!("N_2 / pi at (6, 3) = {}", KernelSpec::new(small).normalizer_exact_over_pi(2)?);
    let h = hockey_stick_sum(small)?;
    println!("binomial sum at (6, 3): {} = {} -> {}", h.lhs, h.rhs, h.holds());
    Ok(())
}
