//! Trust, but enumerate: brute-force confirmation of the LP optimum.
//!
//! The solver's claim — these weights minimize K(w) = pᵗG(w)⁻¹p over the
//! probability simplex — can be checked without any duality theory by
//! evaluating K on a dense lattice {k/r} of the simplex and refining around
//! the best lattice point. The lattice minimum must land within a fraction
//! of a percent of ‖c‖₁², and can never fall below it: ‖c‖₁² is a lower
//! bound for K at *every* probability vector, optimal or not.
//!
//! Two cheap analytic identities round out the check:
//!   gradient:    ∂K/∂wₖ = −(R_k G⁻¹p)², confirmed against finite differences,
//!   homogeneity: K(tw) = K(w)/t exactly, for any scaling t > 0.

use nalgebra::DVector;
use optipred::basis::{BasisKind, PolyBasis};
use optipred::design::{
    christoffel_real, gram, optimal_design, vandermonde, CandidateSet, ExternalPoint,
    ExternalValues,
};
use optipred::oracle::{fd_gradient_check, grid_min_christoffel, GridSpec};
use optipred::simplex::SimplexConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Five candidates, cubic space: a strict subset of the candidates will
    // carry the optimal measure.
    let xs = [-1.0, -0.4, 0.1, 0.7, 1.0];
    let z0 = 1.6;
    let points: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    let basis = PolyBasis::new(BasisKind::Chebyshev, 3, 1)?;
    let candidates = CandidateSet::new(points, ExternalPoint::real(&[z0]))?;

    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8)?;
    let lower = od.solution.value * od.solution.value;
    println!("LP optimum:     K = {:.12e}  (‖c‖₁² = {lower:.12e})", od.design.christoffel);

    let v = vandermonde(&basis, &candidates)?;
    let p = ExternalValues::new(&basis, candidates.external())?;

    // Lattice search at resolution 200 with refinement.
    let spec = GridSpec::new(200, 4);
    let min = grid_min_christoffel(&v.matrix, &p, &spec)?;
    println!(
        "lattice search: K = {:.12e}  ({} evaluations, final step {:.1e})",
        min.value, min.evaluations, min.final_step
    );
    println!("  above the ℓ1 lower bound by {:.3e}", min.value - lower);
    println!("  relative gap to the LP optimum {:.3e}", (min.value - od.design.christoffel) / od.design.christoffel);
    println!("  lattice minimizer {:?}", min.weights.iter().map(|w| format!("{w:.4}")).collect::<Vec<_>>());

    // Finite-difference gradient agreement at a generic interior point.
    let w = DVector::from_vec(vec![0.3, 0.15, 0.2, 0.1, 0.25]);
    let worst = fd_gradient_check(&v.matrix, &p, &w, 1e-6)?;
    println!("\ngradient check: worst finite-difference deviation {worst:.3e}");

    // Homogeneity: scaling all weights by t divides K by t, exactly the
    // reason the unnormalized ℓ1 solution can be renormalized afterwards.
    let k1 = christoffel_real(&gram(&v.matrix, &w)?, p.re())?;
    for t in [0.5, 2.0, 10.0] {
        let kt = christoffel_real(&gram(&v.matrix, &(&w * t))?, p.re())?;
        println!("homogeneity t = {t:>4}: K(tw)·t = {:.12e} vs K(w) = {k1:.12e}", kt * t);
    }
    Ok(())
}
