//! Explicit probability bounds and constants, evaluated in log space.

use truncation_lab::bounds::*;
use truncation_lab::ensemble::TruncationEnsemble;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ens = TruncationEnsemble::new(1000, 500)?;
    let a = ens.alpha();
    println!("C = {:.6e}, C' = {:.6}, eta = {:.6}", c_alpha(a)?, c_prime_alpha(a)?, eta_alpha(a)?);
    for r in [0.1, 0.3, 1.0] {
        let b = concentration_bound(ens, r)?;
        println!("P[d_BL >= {r}] <= exp({:.3}) vacuous = {}", b.log_value, b.vacuous);
    }

    let edge = TruncationEnsemble::new(100, 50)?;
    println!("eps* = {:.6}", epsilon_threshold(edge.alpha())?);
    for eps in [0.1, 0.3, 0.5] {
        let b = edge_bound(edge, eps)?;
        println!("P[max |z| > 1 + {eps}] <= {:.4e}", b.value);
    }
    println!("simplified tail {:.4e}", simplified_tail_bound(edge).value);

    let d = delta_m(400, 200)?;
    println!("delta_m(400, 200) = {:.4} via {:?}", d.value, d.branch);
    let moll = mollifier_epsilon_choice(ens)?;
    println!("mollifier eps = {:.4e}, binding term {}", moll.epsilon, moll.binding);
    Ok(())
}
