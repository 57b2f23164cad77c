//! Coulomb-gas view of the spectrum: potential, Hamiltonian, equilibrium
//! energy, and the mollified energy inequality on one simulated sample.

use num_complex::Complex64;
use truncation_lab::coulomb::*;
use truncation_lab::ensemble::{simulate_spectrum, TruncationEnsemble};
use truncation_lab::limit::LimitMeasure;
use truncation_lab::rng::{stream, Purpose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ens = TruncationEnsemble::new(60, 30)?;
    let spec = PotentialSpec::finite(ens);
    println!("V(0.5) = {}, V(2) = {}", potential(&spec, Complex64::new(0.5, 0.0)), potential(&spec, Complex64::new(2.0, 0.0)));

    let z = simulate_spectrum(ens, &mut stream(2, Purpose::Matrix, 0))?;
    println!("H(spectrum) = {}", hamiltonian(ens, &z)?);
    println!("log c = {:.6}, lower bound {:.6}", log_normalizing_constant(ens), z_lower_bound(ens)?.value);

    let a = ens.alpha();
    let mu = LimitMeasure::new(a)?;
    let lim = PotentialSpec::limiting(a)?;
    println!("E(mu_alpha) = {:.8} (closed form {:.8})", limit_energy(a)?, limit_energy_candidate(a)?);
    println!("E_V(mu_alpha) = {}", modified_energy_radial(&mu, &lim)?);
    println!("E(disc of radius 1) = {:.8}", coulomb_energy_radial(&UniformDisc::new(1.0)?)?);

    let eps = 0.5 * (a / (4.0 + 2.0 * a.sqrt())).powi(2);
    let check = lemma_reg_check(ens, &z, eps)?;
    println!("regularization at eps = {eps:.4e}: H = {} >= {:.6}, gap {:.6}", check.lhs, check.rhs, check.gap());
    Ok(())
}
