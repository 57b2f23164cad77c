//! The limiting radial law: density, CDF, quantiles and a KS check of the sampler.

use num_complex::Complex64;
use truncation_lab::limit::LimitMeasure;
use truncation_lab::quadrature::QuadOptions;
use truncation_lab::rng::{stream, Purpose};
use truncation_lab::stats::ks_one_sample;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for alpha in [0.1, 0.5, 0.9] {
        let mu = LimitMeasure::new(alpha)?;
        let median = mu.inverse_cdf(0.5);
        let m2 = mu.quadrature_expectation(|z| z.norm_sqr(), &[], QuadOptions::default())?;
        println!(
            "alpha {alpha}: f(0) = {:.5}, F(0.5) = {:.5}, median radius {median:.5}, E|z|^2 = {:.6}",
            mu.density(Complex64::new(0.0, 0.0)),
            mu.radial_cdf(0.5)?,
            m2.value
        );
    }

    let mu = LimitMeasure::new(0.75)?;
    let radii: Vec<f64> = mu.sample_n(20_000, &mut stream(3, Purpose::LimitSample, 0)).iter().map(|z| z.norm()).collect();
    let ks = ks_one_sample(&radii, |r| mu.radial_cdf(r.max(0.0)).unwrap())?;
    println!("sampler KS: D = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
    Ok(())
}
