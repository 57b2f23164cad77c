//! Draw a Haar unitary, check it, and cut out a scaled truncation.

use truncation_lab::ensemble::{sample_haar_isometry, sample_haar_unitary, truncate_and_scale, TruncationEnsemble};
use truncation_lab::rng::{stream, Purpose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let mut rng = stream(7, Purpose::Matrix, 0);
    let u = sample_haar_unitary(n, &mut rng)?;
    println!("n = {n}: |U*U - I|_max = {:.2e}, |det U| = {:.12}", u.unitarity_defect(), u.determinant()?.norm());

    let ens = TruncationEnsemble::new(n, 16)?;
    let a = truncate_and_scale(&u, ens)?;
    println!(
        "m = {}: alpha = {}, scale = {}, operator norm <= {:.6}",
        ens.m(),
        ens.alpha(),
        ens.scale(),
        a.operator_norm_estimate(100)
    );

    // Only the first m columns are needed; the stream gives the same ones.
    let thin = sample_haar_isometry(n, 16, &mut stream(7, Purpose::Matrix, 0))?;
    println!("isometry agrees with the full draw to {:.1e}", u.top_left(n, 16)?.max_abs_diff(&thin));
    Ok(())
}
