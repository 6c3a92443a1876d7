//! A dense two-phase simplex solver for small equality-form LPs.
//!
//! Solves  min cᵗx  s.t.  Ax = b, x ≥ 0  on a dense tableau with Bland's
//! anti-cycling pivot rule. The problems this crate generates are small
//! (tens of rows, at most a few thousand columns) and frequently degenerate —
//! optimal designs put zero weight on most candidates — so a dense tableau
//! with Bland's rule is the right trade: no cycling, trivial to audit, and
//! fast enough that sparse machinery would be pure overhead.
//!
//! Beyond the optimal point itself the solver reports the final basis, the
//! dual vector computed from a fresh factorization of the basis matrix (not
//! from accumulated tableau arithmetic), and a degeneracy flag, because the
//! callers use those to build optimality certificates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// An equality-form linear program: minimize `objective · x` subject to
/// `constraints · x = rhs`, `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub constraints: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub objective: DVector<f64>,
}

/// Numerical knobs shared by the simplex and the ℓ1 layer above it.
#[derive(Debug, Clone)]
pub struct SimplexConfig {
    /// Reduced costs within this of zero count as zero (pivot selection and
    /// the degeneracy flag).
    pub pivot_tol: f64,
    /// Column entries must exceed this to be eligible in the ratio test.
    pub ratio_tol: f64,
    /// Phase-1 objective above `feasibility_tol · (1 + ‖b‖∞)` means
    /// infeasible.
    pub feasibility_tol: f64,
    /// Coefficients with |cᵢ| above this count as support in ℓ1 solutions.
    pub support_threshold: f64,
    /// Hard iteration cap per phase.
    pub max_iterations: usize,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        SimplexConfig {
            pivot_tol: 1e-9,
            ratio_tol: 1e-10,
            feasibility_tol: 1e-9,
            support_threshold: 1e-10,
            max_iterations: 10_000,
        }
    }
}

/// Optimal point plus the certificate ingredients the callers need.
#[derive(Debug, Clone)]
pub struct SimplexSolution {
    /// Primal optimum x ≥ 0.
    pub x: DVector<f64>,
    /// Objective value cᵗx.
    pub value: f64,
    /// Column indices of the final basis, one per surviving constraint row.
    pub basis: Vec<usize>,
    /// Dual vector y with A_Bᵗ y = c_B, solved fresh from the input data.
    /// Entries for dropped (redundant) rows are zero.
    pub duals: DVector<f64>,
    /// Rows found linearly dependent during phase 1 and removed.
    pub dropped_rows: Vec<usize>,
    /// True when a nonbasic column has zero reduced cost at optimality, i.e.
    /// the optimal vertex is not unique.
    pub degenerate: bool,
    /// Pivot count over both phases.
    pub iterations: usize,
}

/// Solves the LP. Errors: [`Error::Infeasible`], [`Error::Unbounded`],
/// [`Error::IterationLimit`].
pub fn solve(lp: &LinearProgram, config: &SimplexConfig) -> Result<SimplexSolution> {
    let m = lp.constraints.nrows();
    let n = lp.constraints.ncols();
    assert_eq!(lp.rhs.len(), m, "rhs length must match constraint rows");
    assert_eq!(lp.objective.len(), n, "objective length must match columns");

    let mut tableau = Tableau::new(lp, config);
    tableau.phase_one()?;
    tableau.extract(lp, config)
}

/// Dense tableau: one row per (surviving) constraint plus an objective row.
/// Columns are the n structural variables, m artificials, and the rhs.
struct Tableau {
    rows: DMatrix<f64>,
    /// Pristine copy of the initial rows (same layout): the reference data
    /// for re-pricing and rebuilding after numerical drift.
    init: DMatrix<f64>,
    /// Basis column index per tableau row.
    basis: Vec<usize>,
    /// Original constraint-row index per tableau row.
    row_ids: Vec<usize>,
    dropped_rows: Vec<usize>,
    n: usize,
    iterations: usize,
    pivot_tol: f64,
    ratio_tol: f64,
    feasibility_tol: f64,
    max_iterations: usize,
    /// Columns past this are artificial and barred from entering in phase 2.
    phase_two: bool,
}

impl Tableau {
    fn new(lp: &LinearProgram, config: &SimplexConfig) -> Tableau {
        let m = lp.constraints.nrows();
        let n = lp.constraints.ncols();
        // Layout: [structural | artificial | rhs], with rhs made nonnegative
        // by flipping row signs.
        let mut rows = DMatrix::<f64>::zeros(m, n + m + 1);
        for i in 0..m {
            let sign = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                rows[(i, j)] = sign * lp.constraints[(i, j)];
            }
            rows[(i, n + i)] = 1.0;
            rows[(i, n + m)] = sign * lp.rhs[i];
        }
        Tableau {
            init: rows.clone(),
            rows,
            basis: (n..n + m).collect(),
            row_ids: (0..m).collect(),
            dropped_rows: Vec::new(),
            n,
            iterations: 0,
            pivot_tol: config.pivot_tol,
            ratio_tol: config.ratio_tol,
            feasibility_tol: config.feasibility_tol,
            max_iterations: config.max_iterations,
            phase_two: false,
        }
    }

    fn rhs_col(&self) -> usize {
        self.rows.ncols() - 1
    }

    /// Columns eligible to enter: structural always, artificial only in
    /// phase 1.
    fn enterable_cols(&self) -> usize {
        if self.phase_two {
            self.n
        } else {
            self.rows.ncols() - 1
        }
    }

    fn pivot(&mut self, row: usize, col: usize, objective: &mut DVector<f64>, obj_rhs: &mut f64) {
        let pivot_value = self.rows[(row, col)];
        let width = self.rows.ncols();
        for j in 0..width {
            self.rows[(row, j)] /= pivot_value;
        }
        for i in 0..self.rows.nrows() {
            if i == row {
                continue;
            }
            let factor = self.rows[(i, col)];
            if factor == 0.0 {
                continue;
            }
            for j in 0..width {
                self.rows[(i, j)] -= factor * self.rows[(row, j)];
            }
        }
        let factor = objective[col];
        if factor != 0.0 {
            for j in 0..width - 1 {
                objective[j] -= factor * self.rows[(row, j)];
            }
            *obj_rhs -= factor * self.rows[(row, self.rhs_col())];
        }
        self.basis[row] = col;
        self.iterations += 1;
    }

    /// Bland's rule: enter the lowest-index column with negative reduced
    /// cost; leave by the minimum ratio, ties broken by lowest basis index.
    /// Monotone objective + anti-cycling gives termination.
    fn run(&mut self, objective: &mut DVector<f64>, obj_rhs: &mut f64) -> Result<()> {
        loop {
            let entering = (0..self.enterable_cols())
                .find(|&j| objective[j] < -self.pivot_tol);
            let Some(col) = entering else { return Ok(()) };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows.nrows() {
                let a = self.rows[(i, col)];
                if a <= self.ratio_tol {
                    continue;
                }
                let ratio = self.rows[(i, self.rhs_col())] / a;
                match leaving {
                    None => leaving = Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < best - self.ratio_tol
                            || (ratio <= best + self.ratio_tol
                                && self.basis[i] < self.basis[best_i])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(Error::Unbounded);
            };
            if self.iterations >= self.max_iterations {
                return Err(Error::IterationLimit(self.max_iterations));
            }
            self.pivot(row, col, objective, obj_rhs);
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        // Phase 1 minimizes Σ artificials: unit cost on the artificial
        // block, zero on structural columns.
        let m = self.rows.ncols() - 1 - self.n;
        let mut cost = DVector::<f64>::zeros(self.n + m);
        for i in 0..m {
            cost[self.n + i] = 1.0;
        }
        self.run_protected(&cost)?;

        let rhs_scale = 1.0
            + (0..self.rows.nrows())
                .map(|i| self.rows[(i, self.rhs_col())].abs())
                .fold(0.0, f64::max);
        // Residual infeasibility = value of any artificials still basic.
        let infeasibility: f64 = (0..self.rows.nrows())
            .filter(|&i| self.basis[i] >= self.n)
            .map(|i| self.rows[(i, self.rhs_col())])
            .sum();
        if infeasibility > self.feasibility_tol * rhs_scale {
            return Err(Error::Infeasible(infeasibility));
        }

        // Drive artificials out of the basis; rows that offer no structural
        // pivot are linearly dependent and get dropped.
        let mut row = 0;
        while row < self.rows.nrows() {
            if self.basis[row] < self.n {
                row += 1;
                continue;
            }
            let pivot_col =
                (0..self.n).find(|&j| self.rows[(row, j)].abs() > self.pivot_tol);
            match pivot_col {
                Some(col) => {
                    let mut dummy = DVector::<f64>::zeros(self.rows.ncols() - 1);
                    let mut dummy_rhs = 0.0;
                    self.pivot(row, col, &mut dummy, &mut dummy_rhs);
                    row += 1;
                }
                None => {
                    self.dropped_rows.push(self.row_ids[row]);
                    self.rows = self.rows.clone().remove_row(row);
                    self.basis.remove(row);
                    self.row_ids.remove(row);
                }
            }
        }
        Ok(())
    }

    /// Reduced costs priced through the accumulated tableau rows. `cost`
    /// covers all n + m columns.
    fn body_objective_row(&self, cost: &DVector<f64>) -> (DVector<f64>, f64) {
        let width = self.rows.ncols();
        let mut objective = DVector::<f64>::zeros(width - 1);
        let mut obj_rhs = 0.0;
        for j in 0..self.enterable_cols() {
            let mut r = cost[j];
            for i in 0..self.rows.nrows() {
                r -= cost[self.basis[i]] * self.rows[(i, j)];
            }
            objective[j] = r;
        }
        for i in 0..self.rows.nrows() {
            obj_rhs -= cost[self.basis[i]] * self.rows[(i, self.rhs_col())];
        }
        (objective, obj_rhs)
    }

    /// Reduced costs from a fresh dual solve of the current basis against
    /// the pristine data, bypassing any tableau drift. None when the basis
    /// matrix cannot be factored.
    fn fresh_objective_row(&self, cost: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
        let k = self.row_ids.len();
        let a_basis = DMatrix::<f64>::from_fn(k, k, |r, c| {
            self.init[(self.row_ids[r], self.basis[c])]
        });
        let c_basis = DVector::<f64>::from_fn(k, |r, _| cost[self.basis[r]]);
        let y = a_basis.transpose().lu().solve(&c_basis)?;

        let mut objective = DVector::<f64>::zeros(self.rows.ncols() - 1);
        for j in 0..self.enterable_cols() {
            let mut r = cost[j];
            for (row, &orig) in self.row_ids.iter().enumerate() {
                r -= y[row] * self.init[(orig, j)];
            }
            objective[j] = r;
        }
        let rhs_col = self.rhs_col();
        let obj_rhs =
            -(0..k).map(|row| y[row] * self.init[(self.row_ids[row], rhs_col)]).sum::<f64>();
        Some((objective, obj_rhs))
    }

    /// Rebuilds the whole tableau as B⁻¹ applied to the pristine data at the
    /// current basis, discarding accumulated round-off. False when the basis
    /// cannot be factored or the rebuilt point is infeasible beyond
    /// tolerance (both mean the state is beyond repair).
    fn rebuild_body(&mut self) -> bool {
        let k = self.row_ids.len();
        let width = self.rows.ncols();
        let a_basis = DMatrix::<f64>::from_fn(k, k, |r, c| {
            self.init[(self.row_ids[r], self.basis[c])]
        });
        let lu = a_basis.lu();
        let kept =
            DMatrix::<f64>::from_fn(k, width, |r, j| self.init[(self.row_ids[r], j)]);
        let Some(body) = lu.solve(&kept) else { return false };

        let rhs_scale = 1.0
            + (0..k).map(|r| self.init[(self.row_ids[r], width - 1)].abs()).fold(0.0, f64::max);
        let mut rows = body;
        for r in 0..k {
            let v = rows[(r, width - 1)];
            if v < -self.feasibility_tol * rhs_scale {
                return false;
            }
            rows[(r, width - 1)] = v.max(0.0);
        }
        self.rows = rows;
        true
    }

    /// Runs one simplex phase with drift protection. Long degenerate runs
    /// erode the incrementally updated rows, which can surface as a false
    /// "unbounded" (an apparently improving column with no positive entries)
    /// or a premature optimum; both are caught by re-pricing against the
    /// pristine data, rebuilding the body, and resuming. Genuine
    /// unboundedness survives any number of rebuilds, so it still errors
    /// out.
    fn run_protected(&mut self, cost: &DVector<f64>) -> Result<()> {
        let attempts = 4;
        for attempt in 0..attempts {
            let (mut objective, mut obj_rhs) = self
                .fresh_objective_row(cost)
                .unwrap_or_else(|| self.body_objective_row(cost));
            match self.run(&mut objective, &mut obj_rhs) {
                Ok(()) => {
                    let confirmed = match self.fresh_objective_row(cost) {
                        Some((fresh, _)) => {
                            (0..self.enterable_cols()).all(|j| fresh[j] >= -self.pivot_tol)
                        }
                        // Unverifiable basis: let the caller's certificate
                        // logic judge the point.
                        None => true,
                    };
                    if confirmed || attempt + 1 == attempts || !self.rebuild_body() {
                        return Ok(());
                    }
                }
                Err(Error::Unbounded) => {
                    if attempt + 1 == attempts || !self.rebuild_body() {
                        return Err(Error::Unbounded);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        unreachable!("retry loop returns from within");
    }

    fn extract(mut self, lp: &LinearProgram, config: &SimplexConfig) -> Result<SimplexSolution> {
        self.phase_two = true;
        let m = self.rows.ncols() - 1 - self.n;
        let mut cost = DVector::<f64>::zeros(self.n + m);
        for j in 0..self.n {
            cost[j] = lp.objective[j];
        }
        self.run_protected(&cost)?;

        let n = self.n;
        let kept = self.row_ids.clone();
        let k = kept.len();

        // Recompute basic values and duals from the original data through a
        // fresh LU of A_B, discarding any drift the tableau accumulated.
        let a_basis = DMatrix::<f64>::from_fn(k, k, |r, c| {
            lp.constraints[(kept[r], self.basis[c])]
        });
        let b_kept = DVector::<f64>::from_fn(k, |r, _| lp.rhs[kept[r]]);
        let c_basis = DVector::<f64>::from_fn(k, |r, _| lp.objective[self.basis[r]]);
        let lu = a_basis.clone().lu();

        let mut x = DVector::<f64>::zeros(n);
        match lu.solve(&b_kept) {
            Some(xb) => {
                for (i, &col) in self.basis.iter().enumerate() {
                    x[col] = xb[i];
                }
            }
            None => {
                // Singular only through extreme ill-conditioning; fall back
                // to the tableau's own values.
                for (i, &col) in self.basis.iter().enumerate() {
                    x[col] = self.rows[(i, self.rhs_col())];
                }
            }
        }
        // The polish can push a degenerate basic variable a hair negative;
        // clamp noise, but keep genuine violations visible.
        for v in x.iter_mut() {
            if *v < 0.0 && *v > -config.feasibility_tol {
                *v = 0.0;
            }
        }

        let mut duals = DVector::<f64>::zeros(lp.constraints.nrows());
        if let Some(y_kept) = a_basis.transpose().lu().solve(&c_basis) {
            for (i, &orig_row) in kept.iter().enumerate() {
                duals[orig_row] = y_kept[i];
            }
        }

        // Degeneracy: some nonbasic column prices out to zero.
        let mut degenerate = false;
        for j in 0..n {
            if self.basis.contains(&j) {
                continue;
            }
            let reduced = lp.objective[j] - duals.dot(&lp.constraints.column(j));
            if reduced.abs() <= config.pivot_tol {
                degenerate = true;
                break;
            }
        }

        let value = lp.objective.dot(&x);
        Ok(SimplexSolution {
            x,
            value,
            basis: self.basis,
            duals,
            dropped_rows: self.dropped_rows,
            degenerate,
            iterations: self.iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn program(a: &[&[f64]], b: &[f64], c: &[f64]) -> LinearProgram {
        let m = a.len();
        let n = a[0].len();
        LinearProgram {
            constraints: DMatrix::from_fn(m, n, |i, j| a[i][j]),
            rhs: DVector::from_column_slice(b),
            objective: DVector::from_column_slice(c),
        }
    }

    #[test]
    fn two_variable_optimum() {
        // min −x − 2y s.t. x + y + s1 = 4, x + 3y + s2 = 6 → x = 3, y = 1.
        let lp = program(
            &[&[1.0, 1.0, 1.0, 0.0], &[1.0, 3.0, 0.0, 1.0]],
            &[4.0, 6.0],
            &[-1.0, -2.0, 0.0, 0.0],
        );
        let sol = solve(&lp, &SimplexConfig::default()).unwrap();
        assert_relative_eq!(sol.x[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(sol.x[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sol.value, -5.0, epsilon = 1e-12);
    }

    #[test]
    fn duals_satisfy_complementary_slackness() {
        let lp = program(
            &[&[1.0, 1.0, 1.0, 0.0], &[1.0, 3.0, 0.0, 1.0]],
            &[4.0, 6.0],
            &[-1.0, -2.0, 0.0, 0.0],
        );
        let sol = solve(&lp, &SimplexConfig::default()).unwrap();
        // Strong duality: bᵗy = cᵗx.
        assert_relative_eq!(lp.rhs.dot(&sol.duals), sol.value, epsilon = 1e-12);
        // Reduced costs nonnegative everywhere, zero on the basis.
        for j in 0..lp.constraints.ncols() {
            let reduced = lp.objective[j] - sol.duals.dot(&lp.constraints.column(j));
            assert!(reduced >= -1e-10, "column {j} prices out to {reduced}");
            if sol.basis.contains(&j) {
                assert_relative_eq!(reduced, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn negative_rhs_is_handled() {
        // x − y = −2, x + y = 4 → x = 1, y = 3.
        let lp = program(
            &[&[1.0, -1.0], &[1.0, 1.0]],
            &[-2.0, 4.0],
            &[1.0, 1.0],
        );
        let sol = solve(&lp, &SimplexConfig::default()).unwrap();
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sol.x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_is_reported() {
        // x + y = 1 and x + y = 3 cannot both hold.
        let lp = program(&[&[1.0, 1.0], &[1.0, 1.0]], &[1.0, 3.0], &[1.0, 1.0]);
        assert!(matches!(
            solve(&lp, &SimplexConfig::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn unbounded_is_reported() {
        // min −x s.t. x − y = 1: push x with y.
        let lp = program(&[&[1.0, -1.0]], &[1.0], &[-1.0, 0.0]);
        assert!(matches!(
            solve(&lp, &SimplexConfig::default()),
            Err(Error::Unbounded)
        ));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // Second row is twice the first.
        let lp = program(
            &[&[1.0, 1.0], &[2.0, 2.0], &[1.0, -1.0]],
            &[2.0, 4.0, 0.0],
            &[1.0, 2.0],
        );
        let sol = solve(&lp, &SimplexConfig::default()).unwrap();
        assert_eq!(sol.dropped_rows, vec![1]);
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sol.x[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_optimum_is_flagged() {
        // min x + y on x + y = 1: every feasible point is optimal.
        let lp = program(&[&[1.0, 1.0]], &[1.0], &[1.0, 1.0]);
        let sol = solve(&lp, &SimplexConfig::default()).unwrap();
        assert!(sol.degenerate);
        assert_relative_eq!(sol.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn iteration_limit_is_enforced() {
        let lp = program(
            &[&[1.0, 1.0, 1.0, 0.0], &[1.0, 3.0, 0.0, 1.0]],
            &[4.0, 6.0],
            &[-1.0, -2.0, 0.0, 0.0],
        );
        let config = SimplexConfig { max_iterations: 1, ..Default::default() };
        assert!(matches!(solve(&lp, &config), Err(Error::IterationLimit(1))));
    }
}
