//! A genuinely multivariate design: linear prediction from triangle corners.
//!
//! For degree 1 in two variables the candidate corners (0,0), (0,1), (1,0)
//! are unisolvent, and for an external point z₀ = (x₀, y₀) with
//! x₀ + y₀ ≥ 1, x₀ ≥ 0, y₀ ≥ 0 the optimal weights have a closed form
//!
//!   w = ((x₀+y₀−1)/Λ, y₀/Λ, x₀/Λ),   Λ = 2(x₀+y₀) − 1,
//!
//! with prediction variance K = Λ². The corner (0,0) carries the Lagrange
//! polynomial 1 − x − y, which vanishes on the line x + y = 1: move z₀ onto
//! that line and the first weight hits zero, the remaining two points cannot
//! determine a plane, and the information matrix turns singular — the
//! solver reports the degenerate case instead of a certificate.

use optipred::basis::{BasisKind, PolyBasis};
use optipred::design::{optimal_design, CandidateSet, ExternalPoint, Verdict};
use optipred::simplex::SimplexConfig;

fn corners() -> Vec<Vec<f64>> {
    vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]
}

fn solve(x0: f64, y0: f64) -> Result<(), Box<dyn std::error::Error>> {
    let basis = PolyBasis::new(BasisKind::TotalDegreeMonomial, 1, 2)?;
    let candidates = CandidateSet::new(corners(), ExternalPoint::real(&[x0, y0]))?;
    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8)?;

    let lambda = 2.0 * (x0 + y0) - 1.0;
    let exact = [(x0 + y0 - 1.0) / lambda, y0 / lambda, x0 / lambda];

    println!("z0 = ({x0}, {y0}):  Λ = {lambda}");
    for (i, w) in od.design.weights.iter().enumerate() {
        println!("  w[{i}] = {w:.16}   closed form {:.16}", exact[i]);
    }
    match od.certificate.verdict {
        Verdict::Certified => {
            println!("  K = {:.16e} = Λ² (certified)\n", od.design.christoffel)
        }
        Verdict::NotApplicable => {
            println!("  K = {:.16e} = Λ², no certificate:", od.design.christoffel);
            for c in &od.caveats {
                println!("    {c}");
            }
            println!();
        }
        Verdict::Failed => println!("  unexpected certification failure\n"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Strictly above the critical line x + y = 1: all three corners carry
    // weight and the stationarity certificate applies.
    solve(1.0, 1.0)?;
    solve(2.0, 0.5)?;

    // Exactly on the extended edge x + y = 1: the (0,0) weight vanishes and
    // the optimal measure is supported on a set too small to be unisolvent.
    // K = Λ² = 1 still — prediction there is pure interpolation along the
    // edge — but no inverse information matrix exists to certify with.
    solve(0.3, 0.7)?;
    Ok(())
}
