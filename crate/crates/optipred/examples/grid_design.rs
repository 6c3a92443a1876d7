//! Optimal design on a fine candidate grid.
//!
//! The solver minimizes the prediction variance K(w) = pᵗG(w)⁻¹p over all
//! probability weights on the candidates, by reducing to the linear program
//! min ‖c‖₁ subject to Vᵗc = p. The optimal measure concentrates on very few
//! points — at most N = dim Π_n of them — so on a fine grid nearly every
//! weight comes back zero, and the interesting output is the support.
//!
//! Here: degree 2, external point z₀ = 2, and 33 equispaced candidates on
//! [−1, 1]. The support picks out exactly {−1, 0, 1} with weights
//! (1/7, 3/7, 3/7); adding the 30 other candidates changes nothing, because
//! those three points already support the optimal measure of the whole
//! interval.

use optipred::basis::{BasisKind, PolyBasis};
use optipred::design::{optimal_design, CandidateSet, ExternalPoint};
use optipred::simplex::SimplexConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = 33;
    let z0 = 2.0;
    let points: Vec<Vec<f64>> = (0..m)
        .map(|i| vec![-1.0 + 2.0 * i as f64 / (m as f64 - 1.0)])
        .collect();

    let basis = PolyBasis::new(BasisKind::Chebyshev, 2, 1)?;
    let candidates = CandidateSet::new(points, ExternalPoint::real(&[z0]))?;
    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8)?;

    println!("{m} candidates, degree 2, z0 = {z0}");
    println!("support: {} of {m} candidates\n", od.design.support.len());
    println!("{:>6} {:>10} {:>22} {:>26}", "index", "x", "weight", "exact");
    let exact = [1.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0];
    for (k, &i) in od.design.support.iter().enumerate() {
        println!(
            "{i:>6} {:>10.4} {:>22.16} {:>26}",
            candidates.points()[i][0],
            od.design.weights[i],
            format!("{:.16}", exact[k]),
        );
    }

    println!("\nK      = {:.16e}  (exact 49)", od.design.christoffel);
    println!("growth = {:.16e}  (exact 7 = T_2(2))", od.design.growth());
    println!("verdict: {:?}", od.certificate.verdict);

    // Every off-support weight is exactly zero in the LP solution.
    let max_off = (0..candidates.len())
        .filter(|i| !od.design.support.contains(i))
        .map(|i| od.design.weights[i])
        .fold(0.0f64, f64::max);
    println!("largest off-support weight: {max_off:.1e}");
    Ok(())
}
