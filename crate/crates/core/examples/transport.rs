//! W1 and bounded-Lipschitz distances between discrete measures, and from a
//! simulated spectrum to the limit law.

use num_complex::Complex64;
use truncation_lab::ensemble::{simulate_spectrum, spectral_measure, EmpiricalMeasure, TruncationEnsemble};
use truncation_lab::limit::LimitMeasure;
use truncation_lab::rng::{stream, Purpose};
use truncation_lab::transport::{dbl_discrete, distance_to_limit, w1_discrete, LimitDistanceOptions, Metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;
    let mu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0), c(1.0, 0.0)])?;
    let nu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0), c(0.0, 1.0)])?;
    println!("W1 = {:.6}, d_BL = {:.6}", w1_discrete(&mu, &nu)?.value, dbl_discrete(&mu, &nu)?.value);

    // Far apart: W1 keeps growing, d_BL saturates at 2.
    let far = EmpiricalMeasure::uniform(vec![c(10.0, 0.0)])?;
    let origin = EmpiricalMeasure::uniform(vec![c(0.0, 0.0)])?;
    println!("far: W1 = {}, d_BL = {}", w1_discrete(&origin, &far)?.value, dbl_discrete(&origin, &far)?.value);

    let ens = TruncationEnsemble::new(200, 100)?;
    let z = simulate_spectrum(ens, &mut stream(5, Purpose::Matrix, 0))?;
    let limit = LimitMeasure::new(ens.alpha())?;
    for metric in [Metric::BoundedLipschitz, Metric::W1] {
        let est = distance_to_limit(
            &spectral_measure(&z)?,
            &limit,
            &LimitDistanceOptions::new(metric, 1000),
            &mut stream(5, Purpose::LimitSample, 0),
        )?;
        println!("{metric:?} to the limit: {:.4} +- {:.4} ({} reference points)", est.value, est.standard_error, est.samples);
    }
    Ok(())
}
