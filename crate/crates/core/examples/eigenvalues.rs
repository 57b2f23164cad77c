//! Eigenvalues of a truncated unitary, with the trace and determinant as checks.

use num_complex::Complex64;
use truncation_lab::ensemble::{sample_truncation, TruncationEnsemble};
use truncation_lab::linalg::{eigenvalues, eigenvalues_with, EigenOptions};
use truncation_lab::rng::{stream, Purpose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ens = TruncationEnsemble::new(200, 50)?;
    let a = sample_truncation(ens, &mut stream(1, Purpose::Matrix, 0))?;
    let z = eigenvalues(&a)?;

    let sum: Complex64 = z.iter().sum();
    let prod: Complex64 = z.iter().product();
    println!("trace error {:.2e}", (sum - a.trace()).norm());
    println!("det relative error {:.2e}", (prod - a.determinant()?).norm() / prod.norm());

    let mut moduli: Vec<f64> = z.iter().map(|p| p.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    println!("largest moduli: {:?}", &moduli[moduli.len() - 5..]);
    println!("support radius {}", ens.scale());

    // A zero iteration budget reports non-convergence instead of looping.
    let capped = eigenvalues_with(&a, EigenOptions { iterations_per_dim: 0 });
    println!("capped solve: {}", capped.unwrap_err());
    Ok(())
}
