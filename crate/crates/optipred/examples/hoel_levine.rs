//! The classical minimum-variance extrapolation design, two ways.
//!
//! For degree-n polynomial regression on [−1, 1] with a prediction target
//! z₀ outside the interval, the optimal measure sits on the n+1 Chebyshev
//! extreme points cos(kπ/n) with weights proportional to |ℓᵢ(z₀)|, and the
//! prediction variance comes out as K = T_n(z₀)² — the squared Chebyshev
//! polynomial, the fastest-growing polynomial bounded by 1 on the interval.
//!
//! This example computes the design twice: from the closed form, and from
//! scratch by ℓ1 minimization over the same candidate points. The two must
//! agree to machine precision, and the second route also produces a
//! stationarity certificate of optimality.

use optipred::basis::{BasisKind, PolyBasis, C64};
use optipred::design::{hoel_levine_design, optimal_design, CandidateSet, ExternalPoint, Verdict};
use optipred::simplex::SimplexConfig;

fn chebyshev(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let degree = 5;
    let z0 = 1.25;

    println!("degree {degree} extrapolation to z0 = {z0}\n");

    // Route 1: the closed form.
    let hl = hoel_levine_design(degree, C64::new(z0, 0.0))?;

    // Route 2: ℓ1 minimization over the same candidates, certificate included.
    let basis = PolyBasis::new(BasisKind::Chebyshev, degree, 1)?;
    let points: Vec<Vec<f64>> = hl.points.iter().map(|&x| vec![x]).collect();
    let candidates = CandidateSet::new(points, ExternalPoint::real(&[z0]))?;
    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8)?;

    println!("{:>10}  {:>22}  {:>22}", "point", "closed-form weight", "l1 weight");
    for (i, &x) in hl.points.iter().enumerate() {
        println!(
            "{x:>10.6}  {:>22.16}  {:>22.16}",
            hl.design.weights[i], od.design.weights[i]
        );
    }

    let target = chebyshev(degree, z0).powi(2);
    println!("\nK (closed form)     = {:.16e}", hl.design.christoffel);
    println!("K (l1 pipeline)     = {:.16e}", od.design.christoffel);
    println!("T_{degree}(z0)^2          = {target:.16e}");

    let worst = (0..hl.points.len())
        .map(|i| (hl.design.weights[i] - od.design.weights[i]).abs())
        .fold(0.0f64, f64::max);
    println!("\nmax weight deviation between routes: {worst:.3e}");

    match od.certificate.verdict {
        Verdict::Certified => println!(
            "certificate: optimal (duality gap {:.3e}, stationarity residual {:.3e})",
            od.certificate.duality_gap.unwrap_or(f64::NAN),
            od.certificate.stationarity_residual,
        ),
        other => println!("certificate: unexpected verdict {other:?}"),
    }
    Ok(())
}
