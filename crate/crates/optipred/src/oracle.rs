//! Independent verification oracles.
//!
//! Nothing here shares machinery with the LP path: the grid oracle evaluates
//! K(w) = pᵗG(w)⁻¹p directly on a lattice of weight vectors and refines
//! locally, and the derivative check compares finite differences of K
//! against the closed-form gradient ∂K/∂w_k = −|t_k|². Agreement between
//! these and the ℓ1 solution is evidence against a shared bug, which is the
//! entire point of an oracle.
//!
//! K is convex on the simplex (w ↦ G(w)⁻¹ is matrix-convex), so a coarse
//! global pass plus local refinement around the incumbent converges to the
//! global minimum.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::basis::chebyshev_table;
use crate::design::{gram, ExternalValues, SpdFactor};
use crate::error::{Error, Result};

/// Lattice description for the grid oracle: weights w = k/resolution with k
/// a nonnegative integer vector summing to `resolution`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    /// Target lattice denominator r; the effective local step after
    /// refinement is at most 1/r.
    pub resolution: usize,
    /// Minimum number of local refinement rounds around the incumbent.
    pub refinement_rounds: usize,
    /// Hard ceiling on full-enumeration size. When C(r+M−1, M−1) exceeds it
    /// the initial pass runs on the largest resolution that fits and extra
    /// refinement rounds make up the difference.
    pub cap: u128,
}

impl GridSpec {
    pub fn new(resolution: usize, refinement_rounds: usize) -> GridSpec {
        GridSpec { resolution, refinement_rounds, cap: 10_000_000 }
    }

    /// Number of lattice points for m weights at the given resolution:
    /// C(r + m − 1, m − 1), saturating on overflow.
    pub fn count(resolution: usize, m: usize) -> u128 {
        if m == 0 {
            return 0;
        }
        let mut value: u128 = 1;
        // C(r + m − 1, m − 1) multiplicatively, dividing early to stay exact.
        for i in 1..m {
            let Some(next) = value.checked_mul((resolution + i) as u128) else {
                return u128::MAX;
            };
            value = next / i as u128;
        }
        value
    }
}

/// Result of a grid minimization.
#[derive(Debug, Clone)]
pub struct GridMinimum {
    /// Best lattice weights found, normalized to sum exactly 1.
    pub weights: DVector<f64>,
    /// K at those weights.
    pub value: f64,
    /// Incumbent K after the initial pass and after each refinement round;
    /// nonincreasing by construction.
    pub round_values: Vec<f64>,
    /// Total K evaluations attempted (singular lattice points included).
    pub evaluations: u64,
    /// Resolution of the initial full enumeration (≤ `resolution` when the
    /// cap forced coarsening).
    pub initial_resolution: usize,
    /// Lattice step after the last refinement round.
    pub final_step: f64,
}

/// Allocation-free K evaluator used in the hot loop: builds G = VᵗWV into a
/// scratch buffer, factors it in place, and accumulates the quadratic form
/// during the forward solve. Returns `None` on singular G (lattice points
/// concentrated on too few candidates).
struct KEval<'a> {
    v: &'a DMatrix<f64>,
    p_re: &'a DVector<f64>,
    p_im: Option<&'a DVector<f64>>,
    g: DMatrix<f64>,
    y: DVector<f64>,
}

impl<'a> KEval<'a> {
    fn new(v: &'a DMatrix<f64>, p: &'a ExternalValues) -> KEval<'a> {
        let n = v.ncols();
        KEval {
            v,
            p_re: p.re(),
            p_im: p.im(),
            g: DMatrix::zeros(n, n),
            y: DVector::zeros(n),
        }
    }

    fn eval(&mut self, weights: &[f64]) -> Option<f64> {
        let n = self.v.ncols();
        let m = self.v.nrows();
        // Lower triangle of G = Σᵢ wᵢ RᵢRᵢᵗ.
        for a in 0..n {
            for b in 0..=a {
                self.g[(a, b)] = 0.0;
            }
        }
        for i in 0..m {
            let w = weights[i];
            if w == 0.0 {
                continue;
            }
            for a in 0..n {
                let va = w * self.v[(i, a)];
                for b in 0..=a {
                    self.g[(a, b)] += va * self.v[(i, b)];
                }
            }
        }
        // In-place Cholesky with the same relative pivot floor as the
        // library path.
        let max_diag = (0..n).map(|i| self.g[(i, i)]).fold(0.0f64, f64::max);
        if !(max_diag > 0.0) {
            return None;
        }
        let floor = 1e-12 * max_diag;
        for j in 0..n {
            let mut d = self.g[(j, j)];
            for k in 0..j {
                d -= self.g[(j, k)] * self.g[(j, k)];
            }
            if !(d > floor) {
                return None;
            }
            let root = d.sqrt();
            self.g[(j, j)] = root;
            for i in j + 1..n {
                let mut s = self.g[(i, j)];
                for k in 0..j {
                    s -= self.g[(i, k)] * self.g[(j, k)];
                }
                self.g[(i, j)] = s / root;
            }
        }
        let mut total = self.forward_form_re();
        if self.p_im.is_some() {
            total += self.forward_form_im();
        }
        Some(total)
    }

    fn forward_form_re(&mut self) -> f64 {
        let n = self.v.ncols();
        let mut total = 0.0;
        for i in 0..n {
            let mut s = self.p_re[i];
            for k in 0..i {
                s -= self.g[(i, k)] * self.y[k];
            }
            let yi = s / self.g[(i, i)];
            self.y[i] = yi;
            total += yi * yi;
        }
        total
    }

    fn forward_form_im(&mut self) -> f64 {
        let im = self.p_im.unwrap();
        let n = self.v.ncols();
        let mut total = 0.0;
        for i in 0..n {
            let mut s = im[i];
            for k in 0..i {
                s -= self.g[(i, k)] * self.y[k];
            }
            let yi = s / self.g[(i, i)];
            self.y[i] = yi;
            total += yi * yi;
        }
        total
    }
}

/// Candidate for the running minimum with a total order: smaller K wins,
/// exact ties go to the lexicographically smaller weight vector. Total order
/// makes the parallel reduction associative, hence deterministic.
#[derive(Debug, Clone)]
struct Incumbent {
    value: f64,
    weights: Vec<f64>,
    evaluations: u64,
}

impl Incumbent {
    fn empty() -> Incumbent {
        Incumbent { value: f64::INFINITY, weights: Vec::new(), evaluations: 0 }
    }

    fn offer(&mut self, value: f64, weights: &[f64]) {
        if value < self.value
            || (value == self.value && lex_less(weights, &self.weights))
        {
            self.value = value;
            self.weights.clear();
            self.weights.extend_from_slice(weights);
        }
    }

    fn merge(mut self, other: Incumbent) -> Incumbent {
        self.evaluations += other.evaluations;
        if other.value < self.value
            || (other.value == self.value && lex_less(&other.weights, &self.weights))
        {
            self.value = other.value;
            self.weights = other.weights;
        }
        self
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    if b.is_empty() {
        return !a.is_empty();
    }
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Minimizes K over the weight simplex by full lattice enumeration plus
/// local refinement.
///
/// The initial pass enumerates every composition of r₀ into M parts (r₀ the
/// largest resolution within the cap); refinement rounds then halve the step
/// and scan the ±2-step zero-sum neighborhood of the incumbent until the
/// step is at most 1/resolution and at least `refinement_rounds` rounds have
/// run. The result is deterministic: the enumeration order is fixed and the
/// parallel reduction uses a total order.
pub fn grid_min_christoffel(
    v: &DMatrix<f64>,
    p: &ExternalValues,
    spec: &GridSpec,
) -> Result<GridMinimum> {
    let m = v.nrows();
    let n = v.ncols();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    if spec.resolution == 0 {
        return Err(Error::InvalidInput("grid resolution must be at least 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("candidate matrix has no rows".into()));
    }

    // Auto-coarsen: largest r0 ≤ resolution whose lattice fits the cap.
    if GridSpec::count(1, m) > spec.cap {
        return Err(Error::GridCapExceeded { points: GridSpec::count(1, m), cap: spec.cap });
    }
    let mut r0 = spec.resolution;
    while GridSpec::count(r0, m) > spec.cap {
        r0 /= 2;
    }
    while r0 < spec.resolution && GridSpec::count(r0 + 1, m) <= spec.cap {
        r0 += 1;
    }

    // Initial pass: parallel over the first coordinate, sequential
    // enumeration of the remaining compositions inside each branch.
    let best = (0..=r0 as u32)
        .into_par_iter()
        .map(|k0| {
            let mut eval = KEval::new(v, p);
            let mut local = Incumbent::empty();
            let mut counts = vec![0u32; m];
            let mut weights = vec![0.0f64; m];
            counts[0] = k0;
            enumerate_rest(
                1,
                r0 as u32 - k0,
                r0 as f64,
                &mut counts,
                &mut weights,
                &mut eval,
                &mut local,
            );
            local
        })
        .reduce(Incumbent::empty, Incumbent::merge);

    if best.weights.is_empty() {
        return Err(Error::DegenerateDesign);
    }

    let mut evaluations = best.evaluations;
    let mut current = best.weights;
    let mut value = best.value;
    let mut round_values = vec![value];

    // Refinement: halve the step, scan zero-sum integer offsets in
    // {−2, …, 2}^M around the incumbent.
    let mut eval = KEval::new(v, p);
    let mut step = 1.0 / r0 as f64;
    let target = 1.0 / spec.resolution as f64;
    let mut rounds = 0usize;
    while rounds < spec.refinement_rounds || step > target {
        step /= 2.0;
        let mut offsets = vec![0i32; m];
        let mut trial = vec![0.0f64; m];
        let mut round_best = value;
        let mut round_weights: Option<Vec<f64>> = None;
        refine_neighborhood(
            0,
            0,
            step,
            &current,
            &mut offsets,
            &mut trial,
            &mut eval,
            &mut evaluations,
            &mut round_best,
            &mut round_weights,
        );
        if let Some(w) = round_weights {
            value = round_best;
            current = w;
        }
        round_values.push(value);
        rounds += 1;
        if rounds > 80 {
            break; // step is far below machine precision by now
        }
    }

    // Exact unit sum for the caller: the zero-sum offsets keep Σw at 1 up to
    // accumulated round-off only.
    let total: f64 = current.iter().sum();
    let weights = DVector::from_iterator(m, current.iter().map(|&w| w / total));

    Ok(GridMinimum {
        weights,
        value,
        round_values,
        evaluations,
        initial_resolution: r0,
        final_step: step,
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rest(
    coord: usize,
    remaining: u32,
    scale: f64,
    counts: &mut [u32],
    weights: &mut [f64],
    eval: &mut KEval<'_>,
    local: &mut Incumbent,
) {
    let m = counts.len();
    if coord + 1 == m {
        counts[coord] = remaining;
        for i in 0..m {
            weights[i] = counts[i] as f64 / scale;
        }
        local.evaluations += 1;
        if let Some(k) = eval.eval(weights) {
            local.offer(k, weights);
        }
        return;
    }
    for k in 0..=remaining {
        counts[coord] = k;
        enumerate_rest(coord + 1, remaining - k, scale, counts, weights, eval, local);
    }
}

#[allow(clippy::too_many_arguments)]
fn refine_neighborhood(
    coord: usize,
    offset_sum: i32,
    step: f64,
    current: &[f64],
    offsets: &mut [i32],
    trial: &mut [f64],
    eval: &mut KEval<'_>,
    evaluations: &mut u64,
    round_best: &mut f64,
    round_weights: &mut Option<Vec<f64>>,
) {
    let m = current.len();
    if coord + 1 == m {
        let last = -offset_sum;
        if last.abs() > 2 {
            return;
        }
        offsets[coord] = last;
        for i in 0..m {
            let w = current[i] + step * offsets[i] as f64;
            if w < 0.0 {
                return;
            }
            trial[i] = w;
        }
        *evaluations += 1;
        if let Some(k) = eval.eval(trial) {
            let better = k < *round_best
                || (k == *round_best
                    && round_weights.as_deref().is_some_and(|w| lex_less(trial, w)));
            if better {
                *round_best = k;
                *round_weights = Some(trial.to_vec());
            }
        }
        return;
    }
    // Prune: the remaining coordinates can absorb at most 2 each.
    let slots_left = (m - coord - 1) as i32;
    for d in -2i32..=2 {
        let s = offset_sum + d;
        if s.abs() > 2 * slots_left {
            continue;
        }
        offsets[coord] = d;
        refine_neighborhood(
            coord + 1,
            s,
            step,
            current,
            offsets,
            trial,
            eval,
            evaluations,
            round_best,
            round_weights,
        );
    }
}

/// Central-difference check of ∂K/∂w_k = −|t_k|² at strictly positive
/// weights. Returns the worst coordinate deviation
/// |fd − analytic| / (1 + |analytic|).
///
/// The step must leave every perturbed weight positive; K is evaluated on
/// the raw (unnormalized) perturbations, matching the gradient formula,
/// which holds at any positive weight vector.
pub fn fd_gradient_check(
    v: &DMatrix<f64>,
    p: &ExternalValues,
    weights: &DVector<f64>,
    step: f64,
) -> Result<f64> {
    let m = v.nrows();
    if weights.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: weights.len() });
    }
    let min_w = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_w > 0.0) {
        return Err(Error::InvalidWeights(
            "derivative check requires strictly positive weights".into(),
        ));
    }
    if !(step > 0.0) || step >= min_w {
        return Err(Error::InvalidInput(format!(
            "step {step} must be positive and below the smallest weight {min_w}"
        )));
    }

    // Analytic side: t = VG⁻¹p, gradient −|t_k|².
    let g = gram(v, weights)?;
    let factor = SpdFactor::new(&g).ok_or(Error::DegenerateDesign)?;
    let g_re = factor.solve(p.re());
    let g_im = p.im().map(|im| factor.solve(im));
    let t_re = v * g_re;
    let t_im = g_im.map(|gi| v * gi);

    let mut eval = KEval::new(v, p);
    let mut worst = 0.0f64;
    let mut perturbed: Vec<f64> = weights.iter().cloned().collect();
    for k in 0..m {
        let w0 = perturbed[k];
        perturbed[k] = w0 + step;
        let k_plus = eval.eval(&perturbed).ok_or(Error::DegenerateDesign)?;
        perturbed[k] = w0 - step;
        let k_minus = eval.eval(&perturbed).ok_or(Error::DegenerateDesign)?;
        perturbed[k] = w0;

        let fd = (k_plus - k_minus) / (2.0 * step);
        let analytic = -(t_re[k] * t_re[k]
            + t_im.as_ref().map_or(0.0, |ti| ti[k] * ti[k]));
        let deviation = (fd - analytic).abs() / (1.0 + analytic.abs());
        worst = worst.max(deviation);
    }
    Ok(worst)
}

/// Chebyshev growth reference for the univariate acceptance checks:
/// T_n(z₀)², the minimal K for degree-n extrapolation from [−1, 1] to a real
/// z₀ with |z₀| > 1.
pub fn growth_oracle_univariate(degree: usize, z0: f64) -> Result<f64> {
    if degree == 0 {
        return Err(Error::InvalidDegree);
    }
    if z0.abs() <= 1.0 {
        return Err(Error::ExternalPointInside(format!("|z0| = {} must exceed 1", z0.abs())));
    }
    let t = chebyshev_table(z0, degree);
    Ok(t[degree] * t[degree])
}
