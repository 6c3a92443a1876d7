//! Prediction at a complex point.
//!
//! Nothing in K(w) = p*G(w)⁻¹p requires z₀ to be real — the information
//! matrix G stays real (the data sit on real points), only the target
//! vector p = (P_j(z₀))_j turns complex, and K splits exactly into
//! K = Re(p)ᵗG⁻¹Re(p) + Im(p)ᵗG⁻¹Im(p).
//!
//! With exactly N = n+1 candidates the optimal weights are still
//! |ℓᵢ(z₀)|/Σ|ℓⱼ(z₀)| with the complex Lagrange values, and the modulus
//! stationarity |tₖ|² = K certifies them. With more candidates than basis
//! functions the real ℓ1 reduction no longer applies verbatim; the solver
//! minimizes ‖Re c‖₁ + ‖Im c‖₁ over the stacked real system instead, keeps
//! the result as a surrogate, and says so in a caveat rather than claiming
//! a certificate.

use optipred::basis::{BasisKind, PolyBasis, C64};
use optipred::design::{hoel_levine_design, optimal_design, CandidateSet, ExternalPoint, Verdict};
use optipred::simplex::SimplexConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Degree 1 at z0 = i: the two candidates ±1 split the weight evenly
    // (|1−i| = |1+i|), and K = |1|² + |i|² = 2.
    let z0 = C64::new(0.0, 1.0);
    let hl = hoel_levine_design(1, z0)?;
    println!("degree 1, z0 = i:");
    for (i, &x) in hl.points.iter().enumerate() {
        println!("  x = {x:>4}: w = {:.16}, ℓ(z0) = {:.4}", hl.design.weights[i], hl.lagrange[i]);
    }
    println!("  K = {:.16e} (exact 2)\n", hl.design.christoffel);

    // Degree 2 at z0 = 1 + i on its three extreme points: still square,
    // still certified.
    let z0 = C64::new(1.0, 1.0);
    let basis = PolyBasis::new(BasisKind::Chebyshev, 2, 1)?;
    let points = vec![vec![-1.0], vec![0.0], vec![1.0]];
    let candidates = CandidateSet::new(points, ExternalPoint::complex(vec![z0]))?;
    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8)?;
    println!("degree 2, z0 = 1+i, candidates {{−1, 0, 1}}:");
    for (i, w) in od.design.weights.iter().enumerate() {
        println!("  w[{i}] = {w:.16}   c = {:.6}", od.coefficients[i]);
    }
    println!("  K = {:.16e}", od.design.christoffel);
    println!("  verdict: {:?} (modulus stationarity applies)\n", od.certificate.verdict);
    assert_eq!(od.certificate.verdict, Verdict::Certified);

    // Same degree and point, but five candidates: the surrogate path.
    let points = vec![vec![-1.0], vec![-0.5], vec![0.0], vec![0.5], vec![1.0]];
    let candidates = CandidateSet::new(points, ExternalPoint::complex(vec![z0]))?;
    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8)?;
    println!("degree 2, z0 = 1+i, five candidates:");
    println!("  support {:?}, K = {:.16e}", od.design.support, od.design.christoffel);
    println!("  verdict: {:?}", od.certificate.verdict);
    for c in &od.caveats {
        println!("  caveat: {c}");
    }
    Ok(())
}
