//! Optimal prediction measures on finite candidate sets.
//!
//! Setting: observations live at design points drawn from a finite candidate
//! set X = {x₁, …, x_M} ⊂ ℝ^d, the regression model is polynomial of total
//! degree ≤ n, and predictions are wanted at an external point z₀ ∉ X. A
//! design is a probability vector w on X; its information matrix is
//! G(w) = VᵗWV with V the candidate matrix, and the prediction variance at
//! z₀ is proportional to
//!
//! > K(w) = p(z₀)ᵗ G(w)⁻¹ p(z₀),
//!
//! the reciprocal Christoffel function of the discrete measure. An optimal
//! prediction measure minimizes K over the simplex.
//!
//! The solver rests on an exact reduction to ℓ1 minimization: with
//! c* = argmin { ‖c‖₁ : Vᵗc = p(z₀) }, the weights w = |c*|/‖c*‖₁ are
//! optimal and min K = ‖c*‖₁². The minimizing c is found by linear
//! programming ([`crate::l1`]), and optimality is certified independently
//! through two characterizations that the LP never sees:
//!
//! * stationarity — t_k = R_kᵗG⁻¹p satisfies |t_k|² = K on the support and
//!   |t_k|² ≤ K off it (R_k = row k of V);
//! * duality — the LP dual value pᵗz equals √K, with ‖Vz‖∞ ≤ 1, so z is the
//!   coefficient vector of a polynomial growth certificate.
//!
//! On the Chebyshev extreme points with the full simplex of weights this
//! reproduces the classical minimum-variance extrapolation design, available
//! here in closed form as [`hoel_levine_design`].

use nalgebra::{DMatrix, DVector};

use crate::basis::{lagrange_values, PolyBasis, C64};
use crate::error::{Error, Result};
use crate::l1::{self, L1Solution, L1Status};
use crate::simplex::SimplexConfig;

/// Where predictions are wanted. Complex coordinates are accepted (the
/// classical univariate theory extends to z₀ ∈ ℂ); candidates themselves are
/// always real.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalPoint {
    coords: Vec<C64>,
}

impl ExternalPoint {
    pub fn real(coords: &[f64]) -> ExternalPoint {
        ExternalPoint {
            coords: coords.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn complex(coords: Vec<C64>) -> ExternalPoint {
        ExternalPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    /// True when every coordinate has exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coords.iter().all(|c| c.im == 0.0)
    }

    pub fn real_coords(&self) -> Option<Vec<f64>> {
        self.is_real()
            .then(|| self.coords.iter().map(|c| c.re).collect())
    }
}

/// A finite candidate set plus the external point, with the geometry checks
/// done once at construction.
///
/// Externality policy: in one variable a real z₀ must lie strictly outside
/// the interval spanned by the candidates — prediction inside the data is
/// not extrapolation and the characterization below does not apply there.
/// In higher dimension no usable hull test exists at this generality, so
/// only coincidence with a candidate is rejected; a complex z₀ is always
/// external.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    points: Vec<Vec<f64>>,
    external: ExternalPoint,
    dim: usize,
}

impl CandidateSet {
    pub fn new(points: Vec<Vec<f64>>, external: ExternalPoint) -> Result<CandidateSet> {
        if points.is_empty() {
            return Err(Error::InvalidInput("candidate set is empty".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidDimension("candidate points must have coordinates".into()));
        }
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: pt.len() });
            }
            if !pt.iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidInput(format!("candidate {i} is not finite")));
            }
        }
        if external.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: external.dim() });
        }
        for (i, pt) in points.iter().enumerate() {
            for (j, other) in points.iter().enumerate().skip(i + 1) {
                if pt == other {
                    return Err(Error::DuplicateCandidate(i, j));
                }
            }
        }

        if dim == 1 {
            if let Some(z) = external.real_coords() {
                let z0 = z[0];
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                if z0 >= lo && z0 <= hi {
                    return Err(Error::ExternalPointInside(format!(
                        "z0 = {z0} lies in the candidate interval [{lo}, {hi}]"
                    )));
                }
            }
        } else if let Some(z) = external.real_coords() {
            if points.iter().any(|p| p.iter().zip(&z).all(|(a, b)| a == b)) {
                return Err(Error::ExternalPointInside(
                    "z0 coincides with a candidate point".into(),
                ));
            }
        }

        Ok(CandidateSet { points, external, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn external(&self) -> &ExternalPoint {
        &self.external
    }
}

/// The M×N candidate matrix: row i is the basis evaluated at candidate i.
#[derive(Debug, Clone)]
pub struct VandermondeMatrix {
    pub matrix: DMatrix<f64>,
    pub rank: usize,
    pub basis: PolyBasis,
}

impl VandermondeMatrix {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.basis.dimension()
    }
}

/// Builds the candidate matrix and records its numerical rank. Fewer
/// candidates than basis functions can never carry an invertible design, so
/// that is rejected here; a rank defect with M ≥ N is only recorded (the
/// solvers reject it with [`Error::RankDeficient`]).
pub fn vandermonde(basis: &PolyBasis, candidates: &CandidateSet) -> Result<VandermondeMatrix> {
    let n = basis.dimension();
    let m = candidates.len();
    if candidates.dim() != basis.spatial_dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.spatial_dim(),
            got: candidates.dim(),
        });
    }
    if m < n {
        return Err(Error::TooFewCandidates { required: n, got: m });
    }
    let mut matrix = DMatrix::<f64>::zeros(m, n);
    for (i, pt) in candidates.points().iter().enumerate() {
        let row = basis.eval_real(pt)?;
        for (j, value) in row.into_iter().enumerate() {
            matrix[(i, j)] = value;
        }
    }
    let svals = matrix.clone().singular_values();
    let max_sv = svals.max();
    let rank = if max_sv > 0.0 {
        svals.iter().filter(|&&s| s > 1e-12 * max_sv).count()
    } else {
        0
    };
    Ok(VandermondeMatrix { matrix, rank, basis: basis.clone() })
}

/// Basis values at the external point, split into real and imaginary parts.
/// A complex point whose basis values come out purely real (possible off the
/// real axis only in contrived cases, but trivially when im = 0) collapses
/// to the real representation.
#[derive(Debug, Clone)]
pub struct ExternalValues {
    re: DVector<f64>,
    im: Option<DVector<f64>>,
}

impl ExternalValues {
    pub fn new(basis: &PolyBasis, point: &ExternalPoint) -> Result<ExternalValues> {
        let values = basis.eval_complex(point.coords())?;
        let re = DVector::from_iterator(values.len(), values.iter().map(|c| c.re));
        let any_im = values.iter().any(|c| c.im != 0.0);
        let im = any_im
            .then(|| DVector::from_iterator(values.len(), values.iter().map(|c| c.im)));
        Ok(ExternalValues { re, im })
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.len() == 0
    }

    pub fn is_real(&self) -> bool {
        self.im.is_none()
    }

    pub fn re(&self) -> &DVector<f64> {
        &self.re
    }

    pub fn im(&self) -> Option<&DVector<f64>> {
        self.im.as_ref()
    }

    pub fn to_complex(&self) -> Vec<C64> {
        (0..self.len())
            .map(|i| C64::new(self.re[i], self.im.as_ref().map_or(0.0, |v| v[i])))
            .collect()
    }
}

/// Information matrix G = VᵗWV for nonnegative weights. The weights need not
/// be normalized — K is homogeneous of degree −1 in w, and callers exploit
/// that — but negative entries are rejected.
pub fn gram(v: &DMatrix<f64>, weights: &DVector<f64>) -> Result<DMatrix<f64>> {
    let m = v.nrows();
    if weights.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: weights.len() });
    }
    if let Some(bad) = weights.iter().find(|&&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidWeights(format!("negative or non-finite weight {bad}")));
    }
    let mut scaled = v.clone();
    for i in 0..m {
        let w = weights[i];
        for j in 0..v.ncols() {
            scaled[(i, j)] *= w;
        }
    }
    Ok(v.transpose() * scaled)
}

/// Cholesky factor with a relative pivot floor: a diagonal pivot below
/// 1e−12 times the largest diagonal of the input counts as singular. No
/// regularization — a degenerate design must surface as an error, not as a
/// slightly wrong number.
pub(crate) struct SpdFactor {
    l: DMatrix<f64>,
}

impl SpdFactor {
    pub(crate) fn new(g: &DMatrix<f64>) -> Option<SpdFactor> {
        let n = g.nrows();
        if g.ncols() != n {
            return None;
        }
        let max_diag = (0..n).map(|i| g[(i, i)]).fold(0.0f64, f64::max);
        if !(max_diag > 0.0) {
            return None;
        }
        let floor = 1e-12 * max_diag;
        let mut l = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut d = g[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > floor) {
                return None;
            }
            let root = d.sqrt();
            l[(j, j)] = root;
            for i in j + 1..n {
                let mut s = g[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / root;
            }
        }
        Some(SpdFactor { l })
    }

    pub(crate) fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let n = self.l.nrows();
        let mut y = rhs.clone();
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[(i, k)];
                y[i] -= lik * y[k];
            }
            y[i] /= self.l[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let lki = self.l[(k, i)];
                y[i] -= lki * y[k];
            }
            y[i] /= self.l[(i, i)];
        }
        y
    }

    /// ‖L⁻¹rhs‖², i.e. rhsᵗG⁻¹rhs without the backward pass.
    pub(crate) fn quadratic_form(&self, rhs: &DVector<f64>) -> f64 {
        let n = self.l.nrows();
        let mut y = rhs.clone();
        let mut total = 0.0;
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[(i, k)];
                y[i] -= lik * y[k];
            }
            y[i] /= self.l[(i, i)];
            total += y[i] * y[i];
        }
        total
    }
}

/// K = pᵗG⁻¹p, extended to complex p by conjugate pairing:
/// K = Re(p)ᵗG⁻¹Re(p) + Im(p)ᵗG⁻¹Im(p). Errors with
/// [`Error::DegenerateDesign`] when G is numerically singular.
pub fn christoffel(g: &DMatrix<f64>, p: &ExternalValues) -> Result<f64> {
    if g.nrows() != p.len() {
        return Err(Error::DimensionMismatch { expected: g.nrows(), got: p.len() });
    }
    let factor = SpdFactor::new(g).ok_or(Error::DegenerateDesign)?;
    let mut k = factor.quadratic_form(p.re());
    if let Some(im) = p.im() {
        k += factor.quadratic_form(im);
    }
    Ok(k)
}

/// Real-p convenience wrapper around [`christoffel`].
pub fn christoffel_real(g: &DMatrix<f64>, p: &DVector<f64>) -> Result<f64> {
    christoffel(g, &ExternalValues { re: p.clone(), im: None })
}

/// A probability measure on the candidate set together with its Christoffel
/// value at the external point.
#[derive(Debug, Clone)]
pub struct DesignMeasure {
    /// Nonnegative, sums to 1 within 1e−12.
    pub weights: DVector<f64>,
    /// Indices carrying weight above the support threshold, ascending.
    pub support: Vec<usize>,
    /// K = pᵗG(w)⁻¹p.
    pub christoffel: f64,
}

impl DesignMeasure {
    /// Validates the weights and evaluates K from a fresh Gram matrix.
    pub fn from_weights(
        weights: DVector<f64>,
        v: &VandermondeMatrix,
        p: &ExternalValues,
        support_threshold: f64,
    ) -> Result<DesignMeasure> {
        let mut weights = weights;
        if weights.len() != v.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: v.matrix.nrows(),
                got: weights.len(),
            });
        }
        for w in weights.iter_mut() {
            if !w.is_finite() || *w < -1e-12 {
                return Err(Error::InvalidWeights(format!("weight {w} is negative")));
            }
            // Round-off from |c|/‖c‖₁ may leave −1e−17s behind.
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        let support: Vec<usize> = (0..weights.len())
            .filter(|&i| weights[i] > support_threshold)
            .collect();
        let g = gram(&v.matrix, &weights)?;
        let christoffel = christoffel(&g, p)?;
        Ok(DesignMeasure { weights, support, christoffel })
    }

    /// √K, the growth factor of the design: the value at z₀ of the extremal
    /// polynomial bounded by 1 on the support.
    pub fn growth(&self) -> f64 {
        self.christoffel.sqrt()
    }
}

/// Sensitivities of K with respect to the weights:
/// t_k = R_kᵗG⁻¹p and ∂K/∂w_k = −|t_k|². For complex p the entries are
/// complex; `|t_k|²` is then the squared modulus.
#[derive(Debug, Clone)]
pub struct Stationarity {
    pub t: Vec<C64>,
    pub christoffel: f64,
}

impl Stationarity {
    pub fn squared(&self, k: usize) -> f64 {
        self.t[k].norm_sqr()
    }
}

/// Evaluates the stationarity data of a weight vector (any nonnegative
/// scale). Fails on a singular information matrix.
pub fn stationarity(
    v: &VandermondeMatrix,
    weights: &DVector<f64>,
    p: &ExternalValues,
) -> Result<Stationarity> {
    let g = gram(&v.matrix, weights)?;
    let factor = SpdFactor::new(&g).ok_or(Error::DegenerateDesign)?;
    let g_re = factor.solve(p.re());
    let g_im = p.im().map(|im| factor.solve(im));
    let mut k = p.re().dot(&g_re);
    if let (Some(im), Some(gi)) = (p.im(), g_im.as_ref()) {
        k += im.dot(gi);
    }
    let t_re = &v.matrix * g_re;
    let t_im = g_im.map(|gi| &v.matrix * gi);
    let t = (0..v.matrix.nrows())
        .map(|i| C64::new(t_re[i], t_im.as_ref().map_or(0.0, |ti| ti[i])))
        .collect();
    Ok(Stationarity { t, christoffel: k })
}

/// Outcome of an optimality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// All residuals within tolerance: the design is optimal for this
    /// candidate set and external point.
    Certified,
    /// Some condition failed quantitatively.
    Failed,
    /// The checks do not apply (singular information matrix, or the complex
    /// multi-candidate surrogate).
    NotApplicable,
}

/// Quantitative optimality certificate. All residuals are relative.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    /// |√K − ‖c‖₁| / (1 + ‖c‖₁), when an ℓ1 value was supplied.
    pub duality_gap: Option<f64>,
    /// max over the support of ||t_k|² − K| / K.
    pub stationarity_residual: f64,
    /// max over non-support of (|t_k|² − K) / K, clamped at 0.
    pub off_support_excess: f64,
    /// |Σ_k w_k|t_k|² − K| / K; an algebraic identity, so a large value
    /// flags numerical breakdown rather than suboptimality.
    pub euler_residual: f64,
    pub tolerance: f64,
    pub explanation: Option<String>,
}

impl Certificate {
    fn not_applicable(reason: String, tolerance: f64) -> Certificate {
        Certificate {
            verdict: Verdict::NotApplicable,
            duality_gap: None,
            stationarity_residual: f64::NAN,
            off_support_excess: f64::NAN,
            euler_residual: f64::NAN,
            tolerance,
            explanation: Some(reason),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

/// Checks the optimality conditions of a design independently of how it was
/// found: stationarity of the Christoffel value in the weights, and (when an
/// ℓ1 optimum is supplied) the duality gap between √K and ‖c‖₁.
///
/// Never errors: a design that cannot be checked gets `NotApplicable`, a
/// design that fails gets `Failed` with the explanation naming the first
/// violated condition.
pub fn certify(
    design: &DesignMeasure,
    v: &VandermondeMatrix,
    p: &ExternalValues,
    l1_value: Option<f64>,
    tolerance: f64,
) -> Certificate {
    let st = match stationarity(v, &design.weights, p) {
        Ok(st) => st,
        Err(_) => {
            return Certificate::not_applicable(
                "information matrix is singular on this design".into(),
                tolerance,
            )
        }
    };
    let k = st.christoffel;

    let mut stationarity_residual = 0.0f64;
    for &i in &design.support {
        stationarity_residual = stationarity_residual.max((st.squared(i) - k).abs() / k);
    }
    let mut off_support_excess = 0.0f64;
    for i in 0..design.weights.len() {
        if !design.support.contains(&i) {
            off_support_excess = off_support_excess.max((st.squared(i) - k) / k);
        }
    }
    off_support_excess = off_support_excess.max(0.0);

    let weighted: f64 = (0..design.weights.len())
        .map(|i| design.weights[i] * st.squared(i))
        .sum();
    let euler_residual = (weighted - k).abs() / k;

    let duality_gap = l1_value.map(|value| (k.sqrt() - value).abs() / (1.0 + value));

    let mut explanation = None;
    let mut verdict = Verdict::Certified;
    if stationarity_residual > tolerance {
        verdict = Verdict::Failed;
        explanation = Some(format!(
            "stationarity fails on the support: residual {stationarity_residual:.3e}"
        ));
    } else if off_support_excess > tolerance {
        verdict = Verdict::Failed;
        explanation = Some(format!(
            "sensitivity exceeds K off the support by {off_support_excess:.3e}"
        ));
    } else if euler_residual > tolerance {
        verdict = Verdict::Failed;
        explanation = Some(format!(
            "weighted sensitivity identity violated: residual {euler_residual:.3e}"
        ));
    } else if let Some(gap) = duality_gap {
        if gap > tolerance {
            verdict = Verdict::Failed;
            explanation = Some(format!("duality gap {gap:.3e} exceeds tolerance"));
        }
    }

    Certificate {
        verdict,
        duality_gap,
        stationarity_residual,
        off_support_excess,
        euler_residual,
        tolerance,
        explanation,
    }
}

/// The classical minimum-variance extrapolation design in closed form.
#[derive(Debug, Clone)]
pub struct HoelLevineDesign {
    /// The n+1 Chebyshev extreme points, ascending.
    pub points: Vec<f64>,
    pub design: DesignMeasure,
    /// Lagrange values ℓᵢ(z₀) for the extreme points.
    pub lagrange: Vec<C64>,
    pub degree: usize,
    pub z0: C64,
}

/// Optimal prediction measure for degree-n regression on [−1, 1] at an
/// external z₀: supported on the extreme points of the Chebyshev polynomial
/// T_n with weights |ℓᵢ(z₀)| / Σⱼ|ℓⱼ(z₀)|, giving K = (Σⱼ|ℓⱼ(z₀)|)². For
/// real z₀ the sum telescopes to |T_n(z₀)| and K = T_n(z₀)².
///
/// Real z₀ must satisfy |z₀| > 1; complex z₀ is accepted whenever im ≠ 0.
pub fn hoel_levine_design(degree: usize, z0: C64) -> Result<HoelLevineDesign> {
    let points = crate::basis::chebyshev_extreme_points(degree)?;
    if z0.im == 0.0 && z0.re.abs() <= 1.0 {
        return Err(Error::ExternalPointInside(format!(
            "z0 = {} lies in [-1, 1]",
            z0.re
        )));
    }
    let basis = PolyBasis::new(crate::basis::BasisKind::Chebyshev, degree, 1)?;
    let nodes: Vec<Vec<f64>> = points.iter().map(|&x| vec![x]).collect();
    let lagrange = lagrange_values(&basis, &nodes, &[z0])?;
    let moduli: Vec<f64> = lagrange.iter().map(|l| l.norm()).collect();
    let total: f64 = moduli.iter().sum();
    let weights = DVector::from_iterator(moduli.len(), moduli.iter().map(|&m| m / total));

    // The closed form gives K directly, but evaluate it from the Gram matrix
    // anyway: the constructor's number is then the same object the
    // certificate checks, not a formula transcription.
    let external = ExternalPoint::complex(vec![z0]);
    let candidates = CandidateSet::new(nodes, external)?;
    let v = vandermonde(&basis, &candidates)?;
    let p = ExternalValues::new(&basis, candidates.external())?;
    let design = DesignMeasure::from_weights(weights, &v, &p, 1e-10)?;

    debug_assert!((design.christoffel - total * total).abs() <= 1e-8 * total * total);

    Ok(HoelLevineDesign { points, design, lagrange, degree, z0 })
}

/// An optimal design found by ℓ1 minimization, with its certificate.
#[derive(Debug, Clone)]
pub struct OptimalDesign {
    pub design: DesignMeasure,
    /// The ℓ1 solution behind the weights. In complex mode this is the
    /// solution of the stacked real system (coefficients of length 2M laid
    /// out [Re; Im], dual of length 2N) — see `complex_mode`.
    pub solution: L1Solution,
    /// Candidate coefficients as complex numbers (imaginary parts zero in
    /// real mode).
    pub coefficients: Vec<C64>,
    pub certificate: Certificate,
    /// True when the external point produced genuinely complex basis values,
    /// which routes the solve through the stacked real surrogate.
    pub complex_mode: bool,
    pub caveats: Vec<String>,
}

const CANDIDATE_SET_CAVEAT: &str = "weights are optimal among measures supported on the \
     supplied candidate set; optimality over a continuum holds only if the candidates \
     contain the support of an optimal design for it";

const COMPLEX_SURROGATE_CAVEAT: &str = "complex external point with more candidates than \
     basis functions: the solver minimizes ‖Re c‖₁ + ‖Im c‖₁, a surrogate for the complex \
     ℓ1 norm, and the result is not certified optimal";

const SINGULAR_FALLBACK_CAVEAT: &str = "information matrix is singular on the optimal \
     weights; the Christoffel value is taken from the ℓ1 optimum and stationarity \
     cannot be checked";

/// Computes the optimal prediction measure for a candidate set by ℓ1
/// minimization and certifies it.
///
/// Real external point: solve min ‖c‖₁ s.t. Vᵗc = p, set w = |c|/‖c‖₁; then
/// K(w) = ‖c‖₁², checked by the certificate. A complex external point is
/// handled through the real stacking diag(Vᵗ, Vᵗ)[a; b] = [Re p; Im p] with
/// weights from the moduli |aⱼ + i bⱼ|. With exactly N candidates the
/// stacked system is square, so c equals the complex Lagrange values, the
/// weights are the classical generalization w ∝ |ℓⱼ(z₀)|, and the
/// certificate applies; with M > N the stacked objective is only a
/// surrogate and the certificate is `NotApplicable`.
pub fn optimal_design(
    basis: &PolyBasis,
    candidates: &CandidateSet,
    config: &SimplexConfig,
    tolerance: f64,
) -> Result<OptimalDesign> {
    let v = vandermonde(basis, candidates)?;
    let n = basis.dimension();
    let m = candidates.len();
    if v.rank < n {
        return Err(Error::RankDeficient { rank: v.rank, required: n });
    }
    let p = ExternalValues::new(basis, candidates.external())?;
    let mut caveats = vec![CANDIDATE_SET_CAVEAT.to_string()];

    let vt = v.matrix.transpose();
    let (solution, coefficients, complex_mode) = if let Some(p_im) = p.im() {
        let mut stacked = DMatrix::<f64>::zeros(2 * n, 2 * m);
        stacked.view_mut((0, 0), (n, m)).copy_from(&vt);
        stacked.view_mut((n, m), (n, m)).copy_from(&vt);
        let mut rhs = DVector::<f64>::zeros(2 * n);
        rhs.rows_mut(0, n).copy_from(p.re());
        rhs.rows_mut(n, n).copy_from(p_im);
        let sol = l1::solve_l1_primal(&stacked, &rhs, config)?;
        let coeffs: Vec<C64> = (0..m)
            .map(|j| C64::new(sol.coefficients[j], sol.coefficients[m + j]))
            .collect();
        (sol, coeffs, true)
    } else {
        let sol = l1::solve_l1_primal(&vt, p.re(), config)?;
        let coeffs: Vec<C64> = sol.coefficients.iter().map(|&c| C64::new(c, 0.0)).collect();
        (sol, coeffs, false)
    };

    let moduli: Vec<f64> = coefficients.iter().map(|c| c.norm()).collect();
    let total: f64 = moduli.iter().sum();
    if total == 0.0 {
        return Err(Error::InvalidInput(
            "external point produced a zero coefficient vector".into(),
        ));
    }
    let weights = DVector::from_iterator(m, moduli.iter().map(|&x| x / total));

    // For a complex point, ‖c‖₁ means Σ moduli, not the stacked LP value.
    let l1_value = if complex_mode { total } else { solution.value };

    let (design, certificate) = match DesignMeasure::from_weights(
        weights.clone(),
        &v,
        &p,
        config.support_threshold,
    ) {
        Ok(design) => {
            let certificate = if complex_mode && m > n {
                caveats.push(COMPLEX_SURROGATE_CAVEAT.to_string());
                Certificate::not_applicable(
                    "stacked surrogate solution for a complex external point".into(),
                    tolerance,
                )
            } else {
                certify(&design, &v, &p, Some(l1_value), tolerance)
            };
            (design, certificate)
        }
        Err(Error::DegenerateDesign) => {
            // p lies in the range of the singular G (it is Vᵗc by
            // construction), so K is still the ℓ1 bound; report it with the
            // caveat instead of failing the whole solve.
            caveats.push(SINGULAR_FALLBACK_CAVEAT.to_string());
            let support: Vec<usize> = (0..m)
                .filter(|&i| weights[i] > config.support_threshold)
                .collect();
            let design = DesignMeasure {
                weights,
                support,
                christoffel: l1_value * l1_value,
            };
            let certificate = Certificate::not_applicable(
                "information matrix is singular on this design".into(),
                tolerance,
            );
            (design, certificate)
        }
        Err(e) => return Err(e),
    };

    if solution.status == L1Status::DegenerateOptimal {
        caveats.push(
            "the ℓ1 minimizer is not unique; ties were broken by the pivot rule".into(),
        );
    }

    Ok(OptimalDesign {
        design,
        solution,
        coefficients,
        certificate,
        complex_mode,
        caveats,
    })
}

/// The dual optimizer as a polynomial: coefficients in the working basis of
/// the polynomial attaining the maximal growth |Q(z₀)| = √K subject to
/// ‖Q‖ ≤ 1 on the candidate set.
#[derive(Debug, Clone)]
pub struct GrowthPolynomial {
    /// Coefficients in the working basis (the dual vector z).
    pub coefficients: DVector<f64>,
    /// Q at every candidate point, i.e. Vz.
    pub candidate_values: DVector<f64>,
    /// max |Q(xᵢ)| — at most 1 up to solver tolerance.
    pub sup_norm: f64,
    /// Q(z₀) = pᵗz = ‖c‖₁ by strong duality.
    pub external_value: f64,
}

/// Builds the growth polynomial from a real ℓ1 solution. On the support of c
/// the candidate values are exactly ±1 with the signs of c.
pub fn extremal_polynomial(v: &VandermondeMatrix, solution: &L1Solution) -> Result<GrowthPolynomial> {
    if solution.dual.len() != v.matrix.ncols() {
        return Err(Error::DimensionMismatch {
            expected: v.matrix.ncols(),
            got: solution.dual.len(),
        });
    }
    let candidate_values = &v.matrix * &solution.dual;
    let sup_norm = candidate_values.amax();
    Ok(GrowthPolynomial {
        coefficients: solution.dual.clone(),
        candidate_values,
        sup_norm,
        external_value: solution.value,
    })
}

/// Restriction of the problem to the support of a design: rows of V and the
/// weights at the support indices (renormalized to sum 1). Useful for
/// derivative checks, which need strictly positive weights.
pub fn restrict_to_support(
    v: &VandermondeMatrix,
    design: &DesignMeasure,
) -> (DMatrix<f64>, DVector<f64>, Vec<usize>) {
    let idx = design.support.clone();
    let sub = DMatrix::<f64>::from_fn(idx.len(), v.matrix.ncols(), |r, c| {
        v.matrix[(idx[r], c)]
    });
    let total: f64 = idx.iter().map(|&i| design.weights[i]).sum();
    let w = DVector::from_iterator(idx.len(), idx.iter().map(|&i| design.weights[i] / total));
    (sub, w, idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisKind;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn points1(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    fn univariate(
        xs: &[f64],
        z0: f64,
        degree: usize,
        kind: BasisKind,
    ) -> (PolyBasis, CandidateSet, VandermondeMatrix, ExternalValues) {
        let basis = PolyBasis::new(kind, degree, 1).unwrap();
        let candidates = CandidateSet::new(points1(xs), ExternalPoint::real(&[z0])).unwrap();
        let v = vandermonde(&basis, &candidates).unwrap();
        let p = ExternalValues::new(&basis, candidates.external()).unwrap();
        (basis, candidates, v, p)
    }

    #[test]
    fn external_point_policy() {
        // Univariate: anything in the candidate interval is rejected.
        let inside = CandidateSet::new(points1(&[-1.0, 1.0]), ExternalPoint::real(&[0.0]));
        assert!(matches!(inside, Err(Error::ExternalPointInside(_))));
        let boundary = CandidateSet::new(points1(&[-1.0, 1.0]), ExternalPoint::real(&[1.0]));
        assert!(matches!(boundary, Err(Error::ExternalPointInside(_))));
        assert!(CandidateSet::new(points1(&[-1.0, 1.0]), ExternalPoint::real(&[1.5])).is_ok());
        // Off the real axis is always external.
        let complex = ExternalPoint::complex(vec![C64::new(0.0, 1.0)]);
        assert!(CandidateSet::new(points1(&[-1.0, 1.0]), complex).is_ok());

        // Bivariate: only coincidence is rejected.
        let square = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let coincides = CandidateSet::new(square.clone(), ExternalPoint::real(&[0.0, 1.0]));
        assert!(matches!(coincides, Err(Error::ExternalPointInside(_))));
        assert!(CandidateSet::new(square, ExternalPoint::real(&[0.4, 0.4])).is_ok());
    }

    #[test]
    fn candidate_set_shape_errors() {
        assert!(CandidateSet::new(vec![], ExternalPoint::real(&[2.0])).is_err());
        let dup = CandidateSet::new(points1(&[1.0, -1.0, 1.0]), ExternalPoint::real(&[2.0]));
        assert!(matches!(dup, Err(Error::DuplicateCandidate(0, 2))));
        let ragged = CandidateSet::new(
            vec![vec![0.0, 0.0], vec![1.0]],
            ExternalPoint::real(&[2.0, 2.0]),
        );
        assert!(matches!(ragged, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn vandermonde_rows_and_rank() {
        let (_, _, v, _) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Chebyshev);
        let expected = [[1.0, -1.0, 1.0], [1.0, 0.0, -1.0], [1.0, 1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(v.matrix[(i, j)], expected[i][j]);
            }
        }
        assert_eq!(v.rank, 3);
        assert!(v.is_full_rank());

        // Too few candidates for the space.
        let basis = PolyBasis::new(BasisKind::Chebyshev, 3, 1).unwrap();
        let candidates =
            CandidateSet::new(points1(&[-1.0, 0.0, 1.0]), ExternalPoint::real(&[2.0])).unwrap();
        assert!(matches!(
            vandermonde(&basis, &candidates),
            Err(Error::TooFewCandidates { required: 4, got: 3 })
        ));
    }

    #[test]
    fn gram_uniform_three_points() {
        let (_, _, v, _) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Monomial);
        let w = DVector::from_element(3, 1.0 / 3.0);
        let g = gram(&v.matrix, &w).unwrap();
        let expected = [
            [1.0, 0.0, 2.0 / 3.0],
            [0.0, 2.0 / 3.0, 0.0],
            [2.0 / 3.0, 0.0, 2.0 / 3.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(g[(i, j)], expected[i][j], epsilon = 1e-15);
            }
        }
        // Negative weights are rejected.
        let bad = DVector::from_column_slice(&[0.5, -0.1, 0.6]);
        assert!(matches!(gram(&v.matrix, &bad), Err(Error::InvalidWeights(_))));
    }

    #[test]
    fn christoffel_values_by_hand() {
        // Uniform on {−1, 1}, degree 1, z0 = 2: G = I, K = 1 + 4.
        let (_, _, v, p) = univariate(&[-1.0, 1.0], 2.0, 1, BasisKind::Monomial);
        let g = gram(&v.matrix, &DVector::from_element(2, 0.5)).unwrap();
        assert_relative_eq!(christoffel(&g, &p).unwrap(), 5.0, epsilon = 1e-12);

        // The optimal weights (1/4, 3/4) reach T₁(2)² = 4.
        let g = gram(&v.matrix, &DVector::from_column_slice(&[0.25, 0.75])).unwrap();
        assert_relative_eq!(christoffel(&g, &p).unwrap(), 4.0, epsilon = 1e-12);

        // Uniform on {−1, 0, 1}, degree 2, z0 = 2: solving G g = p by hand
        // gives g = (−9, 3, 15) and K = 57.
        let (_, _, v, p) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Monomial);
        let g = gram(&v.matrix, &DVector::from_element(3, 1.0 / 3.0)).unwrap();
        assert_relative_eq!(christoffel(&g, &p).unwrap(), 57.0, epsilon = 1e-12);
    }

    #[test]
    fn stationarity_sensitivities_by_hand() {
        // Same uniform design: t = VG⁻¹p = (3, −9, 9), so ∂K/∂w = −(9, 81, 81).
        let (_, _, v, p) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Monomial);
        let w = DVector::from_element(3, 1.0 / 3.0);
        let st = stationarity(&v, &w, &p).unwrap();
        assert_relative_eq!(st.christoffel, 57.0, epsilon = 1e-12);
        assert_relative_eq!(st.t[0].re, 3.0, epsilon = 1e-12);
        assert_relative_eq!(st.t[1].re, -9.0, epsilon = 1e-12);
        assert_relative_eq!(st.t[2].re, 9.0, epsilon = 1e-12);
        // Σ w_k t_k² = K is an identity whatever the design.
        let weighted: f64 = (0..3).map(|k| w[k] * st.squared(k)).sum();
        assert_relative_eq!(weighted, st.christoffel, epsilon = 1e-12);
    }

    #[test]
    fn christoffel_homogeneity_on_random_weights() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (_, _, v, p) = univariate(&[-1.0, -0.3, 0.2, 0.9, 1.0], 1.7, 3, BasisKind::Chebyshev);
        for _ in 0..20 {
            let w = DVector::from_fn(5, |_, _| rng.random_range(0.05..1.0));
            let k1 = christoffel(&gram(&v.matrix, &w).unwrap(), &p).unwrap();
            for scale in [0.3, 2.5] {
                let k2 = christoffel(&gram(&v.matrix, &(&w * scale)).unwrap(), &p).unwrap();
                assert_relative_eq!(k2, k1 / scale, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_gram_is_an_error() {
        let (_, _, v, p) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Monomial);
        // All weight on one point cannot support a quadratic.
        let w = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        let g = gram(&v.matrix, &w).unwrap();
        assert!(matches!(christoffel(&g, &p), Err(Error::DegenerateDesign)));
    }

    #[test]
    fn hoel_levine_quadratic_at_two() {
        let hl = hoel_levine_design(2, C64::new(2.0, 0.0)).unwrap();
        assert_eq!(hl.points, vec![-1.0, 0.0, 1.0]);
        assert_relative_eq!(hl.design.weights[0], 1.0 / 7.0, epsilon = 1e-12);
        assert_relative_eq!(hl.design.weights[1], 3.0 / 7.0, epsilon = 1e-12);
        assert_relative_eq!(hl.design.weights[2], 3.0 / 7.0, epsilon = 1e-12);
        assert_relative_eq!(hl.design.christoffel, 49.0, epsilon = 1e-9);
        assert_eq!(hl.design.support, vec![0, 1, 2]);
    }

    #[test]
    fn hoel_levine_matches_chebyshev_growth() {
        // K = T_n(z0)² for real z0; T₃(2.5) = 4·2.5³ − 3·2.5 = 55.
        let hl = hoel_levine_design(3, C64::new(2.5, 0.0)).unwrap();
        assert_relative_eq!(hl.design.christoffel, 55.0 * 55.0, max_relative = 1e-10);
        // Lagrange signs alternate for z0 right of the interval.
        for pair in hl.lagrange.windows(2) {
            assert!(pair[0].re * pair[1].re < 0.0);
        }
        // And the negative side mirrors it.
        let neg = hoel_levine_design(3, C64::new(-2.5, 0.0)).unwrap();
        assert_relative_eq!(neg.design.christoffel, 55.0 * 55.0, max_relative = 1e-10);
    }

    #[test]
    fn hoel_levine_complex_point() {
        let hl = hoel_levine_design(1, C64::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(hl.design.weights[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(hl.design.weights[1], 0.5, epsilon = 1e-12);
        assert_relative_eq!(hl.design.christoffel, 2.0, epsilon = 1e-12);
        // |T₁(i)|² = 1 < 2 = K: for complex z0 the growth strictly exceeds
        // |T_n(z0)|² unless the Lagrange phases align.
    }

    #[test]
    fn hoel_levine_rejects_interior() {
        assert!(matches!(
            hoel_levine_design(2, C64::new(1.0, 0.0)),
            Err(Error::ExternalPointInside(_))
        ));
        assert!(matches!(
            hoel_levine_design(2, C64::new(-0.4, 0.0)),
            Err(Error::ExternalPointInside(_))
        ));
        assert!(matches!(hoel_levine_design(0, C64::new(2.0, 0.0)), Err(Error::InvalidDegree)));
    }

    #[test]
    fn optimal_design_square_case() {
        let basis = PolyBasis::new(BasisKind::Monomial, 1, 1).unwrap();
        let candidates =
            CandidateSet::new(points1(&[-1.0, 1.0]), ExternalPoint::real(&[2.0])).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        assert_relative_eq!(od.design.weights[0], 0.25, epsilon = 1e-12);
        assert_relative_eq!(od.design.weights[1], 0.75, epsilon = 1e-12);
        assert_relative_eq!(od.design.christoffel, 4.0, epsilon = 1e-10);
        assert_relative_eq!(od.solution.value, 2.0, epsilon = 1e-12);
        assert!(od.certificate.is_certified());
        assert!(!od.complex_mode);
    }

    #[test]
    fn optimal_design_on_a_superset_finds_chebyshev_support() {
        let basis = PolyBasis::new(BasisKind::Monomial, 2, 1).unwrap();
        let candidates = CandidateSet::new(
            points1(&[-1.0, -0.5, 0.0, 0.5, 1.0]),
            ExternalPoint::real(&[2.0]),
        )
        .unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        assert_eq!(od.design.support, vec![0, 2, 4]);
        assert_relative_eq!(od.design.weights[0], 1.0 / 7.0, epsilon = 1e-10);
        assert_relative_eq!(od.design.weights[2], 3.0 / 7.0, epsilon = 1e-10);
        assert_relative_eq!(od.design.weights[4], 3.0 / 7.0, epsilon = 1e-10);
        assert_relative_eq!(od.design.christoffel, 49.0, max_relative = 1e-10);
        assert!(od.certificate.is_certified());
        assert!(od.certificate.duality_gap.unwrap() <= 1e-10);

        // The dual side is the quadratic growth polynomial: ±1 with the signs
        // of c on the support, inside the unit band elsewhere.
        let v = vandermonde(&basis, &candidates).unwrap();
        let q = extremal_polynomial(&v, &od.solution).unwrap();
        assert!(q.sup_norm <= 1.0 + 1e-9);
        assert_relative_eq!(q.external_value, 7.0, epsilon = 1e-10);
        for (i, &ci) in od.solution.coefficients.iter().enumerate() {
            if ci.abs() > 1e-9 {
                assert_relative_eq!(q.candidate_values[i], ci.signum(), epsilon = 1e-9);
            }
        }
        // Monomial coefficients of T₂.
        assert_relative_eq!(q.coefficients[0], -1.0, epsilon = 1e-9);
        assert_relative_eq!(q.coefficients[1], 0.0, epsilon = 1e-9);
        assert_relative_eq!(q.coefficients[2], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn triangle_vertices_give_closed_form_weights() {
        let basis = PolyBasis::new(BasisKind::TotalDegreeMonomial, 1, 2).unwrap();
        let vertices = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];

        // z0 = (1, 1): Lagrange values (−1, 1, 1), so uniform weights and
        // K = (Σ|ℓ|)² = 9 = (2(x₀+y₀) − 1)².
        let candidates =
            CandidateSet::new(vertices.clone(), ExternalPoint::real(&[1.0, 1.0])).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        for k in 0..3 {
            assert_relative_eq!(od.design.weights[k], 1.0 / 3.0, epsilon = 1e-12);
        }
        assert_relative_eq!(od.design.christoffel, 9.0, max_relative = 1e-10);
        assert!(od.certificate.is_certified());

        // z0 = (2, 0.5): ℓ = (−1.5, 0.5, 2), weights |ℓ|/4, K = 16.
        let candidates =
            CandidateSet::new(vertices, ExternalPoint::real(&[2.0, 0.5])).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        assert_relative_eq!(od.design.weights[0], 0.375, epsilon = 1e-12);
        assert_relative_eq!(od.design.weights[1], 0.125, epsilon = 1e-12);
        assert_relative_eq!(od.design.weights[2], 0.5, epsilon = 1e-12);
        assert_relative_eq!(od.design.christoffel, 16.0, max_relative = 1e-10);
        assert!(od.certificate.is_certified());
    }

    #[test]
    fn triangle_degenerate_direction_falls_back() {
        // z0 on the segment between two vertices: the optimal measure drops
        // the third vertex, the information matrix degenerates, and K comes
        // from the ℓ1 value with a caveat instead of a certificate.
        let basis = PolyBasis::new(BasisKind::TotalDegreeMonomial, 1, 2).unwrap();
        let vertices = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let candidates =
            CandidateSet::new(vertices, ExternalPoint::real(&[0.3, 0.7])).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        assert_relative_eq!(od.design.weights[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(od.design.weights[1], 0.7, epsilon = 1e-12);
        assert_relative_eq!(od.design.weights[2], 0.3, epsilon = 1e-12);
        assert_relative_eq!(od.design.christoffel, 1.0, epsilon = 1e-10);
        assert_eq!(od.certificate.verdict, Verdict::NotApplicable);
        assert!(od.caveats.iter().any(|c| c.contains("singular")));
    }

    #[test]
    fn complex_square_case_is_certified() {
        let basis = PolyBasis::new(BasisKind::Chebyshev, 1, 1).unwrap();
        let external = ExternalPoint::complex(vec![C64::new(0.0, 1.0)]);
        let candidates = CandidateSet::new(points1(&[-1.0, 1.0]), external).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        assert!(od.complex_mode);
        assert_relative_eq!(od.design.weights[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(od.design.weights[1], 0.5, epsilon = 1e-12);
        assert_relative_eq!(od.design.christoffel, 2.0, epsilon = 1e-10);
        assert!(od.certificate.is_certified());
        // c must be the complex Lagrange values (1 ∓ i)/2.
        assert_relative_eq!(od.coefficients[0].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(od.coefficients[0].im, -0.5, epsilon = 1e-12);
        assert_relative_eq!(od.coefficients[1].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(od.coefficients[1].im, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn complex_surrogate_is_not_certified() {
        let basis = PolyBasis::new(BasisKind::Chebyshev, 1, 1).unwrap();
        let external = ExternalPoint::complex(vec![C64::new(0.0, 1.0)]);
        let candidates = CandidateSet::new(points1(&[-1.0, 0.0, 1.0]), external).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        assert!(od.complex_mode);
        assert_eq!(od.certificate.verdict, Verdict::NotApplicable);
        assert!(od.caveats.iter().any(|c| c.contains("surrogate")));
        assert_relative_eq!(od.design.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn certify_flags_a_suboptimal_design() {
        let (_, _, v, p) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Monomial);
        let design = DesignMeasure::from_weights(
            DVector::from_element(3, 1.0 / 3.0),
            &v,
            &p,
            1e-10,
        )
        .unwrap();
        assert_relative_eq!(design.christoffel, 57.0, epsilon = 1e-12);
        let cert = certify(&design, &v, &p, Some(7.0), 1e-8);
        assert_eq!(cert.verdict, Verdict::Failed);
        // t² = (9, 81, 81) against K = 57: the worst deviation is |9 − 57|/57.
        assert_relative_eq!(cert.stationarity_residual, 48.0 / 57.0, epsilon = 1e-10);
        assert!(cert.explanation.unwrap().contains("stationarity"));
        assert!(cert.duality_gap.unwrap() > 1e-2);
        // The Euler identity still holds — it is weight-independent.
        assert!(cert.euler_residual < 1e-12);
    }

    #[test]
    fn invalid_weights_are_rejected() {
        let (_, _, v, p) = univariate(&[-1.0, 0.0, 1.0], 2.0, 2, BasisKind::Monomial);
        let unnormalized = DVector::from_column_slice(&[0.5, 0.5, 0.5]);
        assert!(matches!(
            DesignMeasure::from_weights(unnormalized, &v, &p, 1e-10),
            Err(Error::InvalidWeights(_))
        ));
        let negative = DVector::from_column_slice(&[-0.5, 0.75, 0.75]);
        assert!(matches!(
            DesignMeasure::from_weights(negative, &v, &p, 1e-10),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn support_restriction_renormalizes() {
        let basis = PolyBasis::new(BasisKind::Monomial, 2, 1).unwrap();
        let candidates = CandidateSet::new(
            points1(&[-1.0, -0.5, 0.0, 0.5, 1.0]),
            ExternalPoint::real(&[2.0]),
        )
        .unwrap();
        let v = vandermonde(&basis, &candidates).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8).unwrap();
        let (sub, w, idx) = restrict_to_support(&v, &od.design);
        assert_eq!(idx, vec![0, 2, 4]);
        assert_eq!(sub.nrows(), 3);
        assert_relative_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(w[0], 1.0 / 7.0, epsilon = 1e-10);
    }

    #[test]
    fn rank_deficient_candidates_are_rejected() {
        // Collinear points cannot span the bivariate linear space.
        let basis = PolyBasis::new(BasisKind::TotalDegreeMonomial, 1, 2).unwrap();
        let collinear = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        let candidates =
            CandidateSet::new(collinear, ExternalPoint::real(&[5.0, 0.0])).unwrap();
        let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), 1e-8);
        assert!(matches!(od, Err(Error::RankDeficient { rank: 2, required: 3 })));
    }
}
