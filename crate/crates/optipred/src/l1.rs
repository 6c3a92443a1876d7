//! ℓ1 minimization subject to interpolation-style equality constraints.
//!
//! The core problem is
//!
//! > minimize ‖c‖₁  subject to  Vᵗc = p,
//!
//! where V is the M×N candidate matrix (rows = basis evaluated at candidate
//! points) and p the basis evaluated at the external point. Its linear
//! programming dual is
//!
//! > maximize pᵗz  subject to  ‖Vz‖∞ ≤ 1,
//!
//! whose optimizer z is the coefficient vector of the extremal "growth"
//! polynomial: sup-norm at most 1 on the candidates, value ‖c‖₁ at the
//! external point, and (Vz)ᵢ = sgn(cᵢ) wherever cᵢ ≠ 0. Both directions are
//! reduced to equality-form LPs and handed to [`crate::simplex`]; each
//! solver reconstructs the other side's variable from the simplex duals, so
//! callers always get a matched primal/dual pair.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::simplex::{self, LinearProgram, SimplexConfig};

/// Solution quality: both variants are optimal; the degenerate one means the
/// optimizer is not unique (ties among vertices), which callers surface as a
/// warning rather than an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L1Status {
    Optimal,
    DegenerateOptimal,
}

/// A matched optimal pair for the ℓ1 problem and its dual.
#[derive(Debug, Clone)]
pub struct L1Solution {
    /// Primal minimizer c (length M).
    pub coefficients: DVector<f64>,
    /// Dual maximizer z (length N), coefficients of the extremal polynomial.
    pub dual: DVector<f64>,
    /// Shared optimal value ‖c‖₁ = pᵗz.
    pub value: f64,
    pub status: L1Status,
    /// Indices i with |cᵢ| above the support threshold, ascending.
    pub support: Vec<usize>,
    /// Simplex pivots spent.
    pub iterations: usize,
}

/// Checks that Vᵗ (N×M) has full row rank before solving; the equality
/// system is otherwise inconsistent for generic p and certificates would be
/// meaningless.
fn check_rank(vt: &DMatrix<f64>) -> Result<()> {
    let n = vt.nrows();
    let svals = vt.clone().singular_values();
    let max_sv = svals.max();
    let rank = if max_sv > 0.0 {
        svals.iter().filter(|&&s| s > 1e-12 * max_sv).count()
    } else {
        0
    };
    if rank < n {
        return Err(Error::RankDeficient { rank, required: n });
    }
    Ok(())
}

fn trivial_solution(m: usize, n: usize) -> L1Solution {
    L1Solution {
        coefficients: DVector::zeros(m),
        dual: DVector::zeros(n),
        value: 0.0,
        status: L1Status::Optimal,
        support: Vec::new(),
        iterations: 0,
    }
}

/// Minimizes ‖c‖₁ subject to Vᵗc = p via the standard positive/negative
/// split c = c⁺ − c⁻.
///
/// The dual vector is recovered from the simplex multipliers of the equality
/// rows, and both sides are re-solved from a factorization of the final
/// basis, so for nondegenerate problems the pair is accurate to machine
/// precision rather than tableau precision.
pub fn solve_l1_primal(
    vt: &DMatrix<f64>,
    p: &DVector<f64>,
    config: &SimplexConfig,
) -> Result<L1Solution> {
    let n = vt.nrows();
    let m = vt.ncols();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    check_rank(vt)?;

    // Solve against p/‖p‖∞ so every tolerance is relative; c scales back,
    // the dual z is scale-free.
    let scale = p.amax();
    if scale == 0.0 {
        return Ok(trivial_solution(m, n));
    }
    let p_hat = p / scale;

    let mut constraints = DMatrix::<f64>::zeros(n, 2 * m);
    for i in 0..n {
        for j in 0..m {
            constraints[(i, j)] = vt[(i, j)];
            constraints[(i, m + j)] = -vt[(i, j)];
        }
    }
    let lp = LinearProgram {
        constraints,
        rhs: p_hat,
        objective: DVector::from_element(2 * m, 1.0),
    };
    let sol = simplex::solve(&lp, config)?;

    let mut c_hat = DVector::<f64>::zeros(m);
    for j in 0..m {
        c_hat[j] = sol.x[j] - sol.x[m + j];
    }
    let support: Vec<usize> = (0..m)
        .filter(|&j| c_hat[j].abs() > config.support_threshold)
        .collect();
    let value = scale * c_hat.iter().map(|v| v.abs()).sum::<f64>();

    let status = if sol.degenerate {
        L1Status::DegenerateOptimal
    } else {
        L1Status::Optimal
    };
    Ok(L1Solution {
        coefficients: c_hat * scale,
        dual: sol.duals,
        value,
        status,
        support,
        iterations: sol.iterations,
    })
}

/// Maximizes pᵗz subject to ‖Vz‖∞ ≤ 1 and recovers c from the multipliers
/// of the box constraints.
///
/// Formulation: z = z⁺ − z⁻ with row slacks s, t ≥ 0 for Vz ≤ 1 and
/// −Vz ≤ 1. The simplex multipliers u (upper rows) and v (lower rows)
/// satisfy Vᵗ(v − u) = p with u, v ≤ 0, and c = v − u attains ‖c‖₁ = pᵗz.
/// When the recovered support is small enough the coefficients are polished
/// by re-solving the equality system restricted to it.
pub fn solve_l1_dual(
    vt: &DMatrix<f64>,
    p: &DVector<f64>,
    config: &SimplexConfig,
) -> Result<L1Solution> {
    let n = vt.nrows();
    let m = vt.ncols();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    check_rank(vt)?;

    let scale = p.amax();
    if scale == 0.0 {
        return Ok(trivial_solution(m, n));
    }
    let p_hat = &(p / scale);

    // Variables [z⁺ z⁻ s t]; rows: V z + s = 1 then −V z + t = 1.
    let cols = 2 * n + 2 * m;
    let mut constraints = DMatrix::<f64>::zeros(2 * m, cols);
    for i in 0..m {
        for j in 0..n {
            let vij = vt[(j, i)];
            constraints[(i, j)] = vij;
            constraints[(i, n + j)] = -vij;
            constraints[(m + i, j)] = -vij;
            constraints[(m + i, n + j)] = vij;
        }
        constraints[(i, 2 * n + i)] = 1.0;
        constraints[(m + i, 2 * n + m + i)] = 1.0;
    }
    let mut objective = DVector::<f64>::zeros(cols);
    for j in 0..n {
        objective[j] = -p_hat[j];
        objective[n + j] = p_hat[j];
    }
    let lp = LinearProgram {
        constraints,
        rhs: DVector::from_element(2 * m, 1.0),
        objective,
    };
    let sol = simplex::solve(&lp, config)?;

    let z = DVector::<f64>::from_fn(n, |j, _| sol.x[j] - sol.x[n + j]);
    let value_hat = -sol.value;

    let mut c_hat = DVector::<f64>::from_fn(m, |i, _| sol.duals[m + i] - sol.duals[i]);
    let support: Vec<usize> = (0..m)
        .filter(|&i| c_hat[i].abs() > config.support_threshold)
        .collect();

    // Multiplier arithmetic is exact on the basis but can smear round-off
    // across the support; re-solving Vᵗ restricted to the support tightens c
    // to machine precision. Keep the raw multipliers if the polish fails.
    if !support.is_empty() && support.len() <= n {
        let vt_s = DMatrix::<f64>::from_fn(n, support.len(), |r, k| vt[(r, support[k])]);
        let lsq = vt_s.svd(true, true).solve(p_hat, 1e-14);
        if let Ok(c_s) = lsq {
            let mut candidate = DVector::<f64>::zeros(m);
            for (k, &i) in support.iter().enumerate() {
                candidate[i] = c_s[k];
            }
            let residual = (vt * &candidate - p_hat).amax();
            if residual <= 1e-9 * (1.0 + p_hat.amax()) {
                c_hat = candidate;
            }
        }
    }

    let status = if sol.degenerate {
        L1Status::DegenerateOptimal
    } else {
        L1Status::Optimal
    };
    Ok(L1Solution {
        coefficients: c_hat * scale,
        dual: z,
        value: scale * value_hat,
        status,
        support,
        iterations: sol.iterations,
    })
}
