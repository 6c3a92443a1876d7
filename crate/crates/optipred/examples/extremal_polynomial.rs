//! The dual object: the polynomial of extremal growth.
//!
//! The linear program dual to min{‖c‖₁ : Vᵗc = p} is
//!
//!   max pᵗz   subject to   ‖Vz‖∞ ≤ 1,
//!
//! and its solution z is the coefficient vector of the polynomial Q that
//! grows fastest at z₀ among all degree-n polynomials bounded by 1 on the
//! candidate set. Strong duality gives Q(z₀) = ‖c‖₁ = √K: the best possible
//! prediction variance and the worst possible polynomial growth are the
//! same number. On the support of the optimal design Q attains ±1 with the
//! signs of c — the equioscillation pattern that makes both optimal at once.
//!
//! On Chebyshev extreme points with real z₀ > 1 the extremal polynomial is
//! the Chebyshev polynomial itself, which this example confirms for n = 3.

use nalgebra::DVector;
use optipred::basis::{BasisKind, PolyBasis};
use optipred::design::{extremal_polynomial, vandermonde, CandidateSet, ExternalPoint, ExternalValues};
use optipred::l1::solve_l1_dual;
use optipred::simplex::SimplexConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let degree = 3;
    let z0 = 2.0;

    let basis = PolyBasis::new(BasisKind::Chebyshev, degree, 1)?;
    let points: Vec<Vec<f64>> = optipred::basis::chebyshev_extreme_points(degree)?
        .into_iter()
        .map(|x| vec![x])
        .collect();
    let candidates = CandidateSet::new(points, ExternalPoint::real(&[z0]))?;
    let v = vandermonde(&basis, &candidates)?;
    let p = ExternalValues::new(&basis, candidates.external())?;

    let sol = solve_l1_dual(&v.matrix.transpose(), p.re(), &SimplexConfig::default())?;
    let q = extremal_polynomial(&v, &sol)?;

    println!("degree {degree}, z0 = {z0}, candidates = Chebyshev extreme points\n");
    println!("coefficients of Q in the Chebyshev basis:");
    for (k, c) in q.coefficients.iter().enumerate() {
        println!("  T_{k}: {c:>20.16}");
    }
    println!("\nQ(z0)    = {:.16e}   (T_3(2) = 26)", q.external_value);
    println!("sup |Q|  = {:.16e}   (over the candidates)", q.sup_norm);
    println!("‖c‖₁     = {:.16e}   (duality: equals Q(z0))", sol.value);

    println!("\nequioscillation on the support:");
    for &i in &sol.support {
        let x = candidates.points()[i][0];
        println!(
            "  x = {x:>9.6}: Q(x) = {:>9.6}, sgn(c) = {:+}",
            q.candidate_values[i],
            sol.coefficients[i].signum() as i64
        );
    }

    // Q evaluated off the support stays strictly inside [−1, 1]; sample it.
    let samples = DVector::from_fn(9, |i, _| -1.0 + 0.25 * i as f64);
    println!("\nQ between the nodes:");
    for &x in samples.iter() {
        let row = basis.eval_real(&[x])?;
        let value: f64 = row.iter().zip(q.coefficients.iter()).map(|(a, b)| a * b).sum();
        println!("  Q({x:>6.3}) = {value:>9.6}");
    }
    Ok(())
}
