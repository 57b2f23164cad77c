//! Radial chi-square fits of simulated eigenvalues, against the limit law and
//! against the exact finite-size law.

use truncation_lab::ensemble::{simulate_spectrum, TruncationEnsemble};
use truncation_lab::harness::{exact_radial_chi_square, limit_radial_chi_square};
use truncation_lab::rng::{stream, Purpose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, m) in [(40, 10), (400, 100)] {
        let ens = TruncationEnsemble::new(n, m)?;
        let mut radii = Vec::new();
        for t in 0..(10_000 / m as u64) {
            radii.extend(simulate_spectrum(ens, &mut stream(9, Purpose::Matrix, t))?.iter().map(|z| z.norm()));
        }
        let limit = limit_radial_chi_square(&radii, ens.alpha(), 20)?;
        let exact = exact_radial_chi_square(&radii, ens, 20)?;
        println!(
            "({n},{m}), {} points: limit p = {:.3e}, exact p = {:.3}",
            radii.len(),
            limit.p_value,
            exact.p_value
        );
    }
    Ok(())
}
