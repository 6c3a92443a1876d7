//! Polynomial bases on ℝ^d.
//!
//! A [`PolyBasis`] fixes the space of polynomials of total degree ≤ n in d
//! variables together with a concrete ordered basis for it. Everything
//! downstream (candidate matrices, Christoffel values, the ℓ1 solve) works
//! with coordinates relative to that ordering, so the ordering is frozen:
//! degree-graded, and within a degree class lexicographic with earlier
//! coordinates dominant — for d = 2: 1, x, y, x², xy, y².
//!
//! Evaluation is generic over the scalar so the same code serves real
//! candidate points and complex external points.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, DVector};
use num_traits::One;

use crate::error::{Error, Result};

/// Complex scalar used for external-point evaluation.
pub type C64 = Complex<f64>;

/// Scalar rings the basis evaluators accept: `f64` and [`C64`].
pub trait Ring:
    Copy + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}
impl<T> Ring for T where
    T: Copy + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

/// Which concrete basis spans the polynomial space.
///
/// The univariate kinds reject d ≠ 1; the total-degree kinds work for any
/// d ≥ 1 (and coincide with the univariate kinds when d = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// 1, x, x², … (univariate only).
    Monomial,
    /// Chebyshev polynomials of the first kind T₀, T₁, … (univariate only).
    Chebyshev,
    /// Monomials xᵅ with |α| ≤ n in graded order.
    TotalDegreeMonomial,
    /// Products Π T_{αᵢ}(xᵢ) with |α| ≤ n in graded order.
    TotalDegreeChebyshevProduct,
}

impl BasisKind {
    fn uses_chebyshev(self) -> bool {
        matches!(self, BasisKind::Chebyshev | BasisKind::TotalDegreeChebyshevProduct)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BasisKind::Monomial => "monomial",
            BasisKind::Chebyshev => "chebyshev",
            BasisKind::TotalDegreeMonomial => "total-degree-monomial",
            BasisKind::TotalDegreeChebyshevProduct => "total-degree-chebyshev-product",
        };
        f.write_str(name)
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" => Ok(BasisKind::Monomial),
            "chebyshev" => Ok(BasisKind::Chebyshev),
            "total-degree-monomial" => Ok(BasisKind::TotalDegreeMonomial),
            "total-degree-chebyshev-product" => Ok(BasisKind::TotalDegreeChebyshevProduct),
            other => Err(Error::InvalidInput(format!("unknown basis kind {other:?}"))),
        }
    }
}

/// An ordered basis for polynomials of total degree ≤ `degree` in
/// `spatial_dim` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBasis {
    kind: BasisKind,
    degree: usize,
    spatial_dim: usize,
    exponents: Vec<Vec<u32>>,
}

impl PolyBasis {
    /// Builds a basis, validating that the kind supports the dimension.
    /// Degree 0 is rejected: a constant regression has no design problem.
    pub fn new(kind: BasisKind, degree: usize, spatial_dim: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree);
        }
        if spatial_dim == 0 {
            return Err(Error::InvalidDimension("dimension must be at least 1".into()));
        }
        let univariate_only =
            matches!(kind, BasisKind::Monomial | BasisKind::Chebyshev);
        if univariate_only && spatial_dim != 1 {
            return Err(Error::InvalidDimension(format!(
                "basis {kind} is univariate, got dimension {spatial_dim}"
            )));
        }
        let exponents = graded_exponents(degree, spatial_dim);
        Ok(PolyBasis { kind, degree, spatial_dim, exponents })
    }

    /// The conventional default: Chebyshev in one variable, graded monomials
    /// otherwise.
    pub fn default_for(degree: usize, spatial_dim: usize) -> Result<Self> {
        let kind = if spatial_dim == 1 {
            BasisKind::Chebyshev
        } else {
            BasisKind::TotalDegreeMonomial
        };
        PolyBasis::new(kind, degree, spatial_dim)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    /// Number of basis polynomials, N = C(n + d, d).
    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    /// The exponent multi-indices in the frozen graded order.
    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    /// Evaluates all N basis polynomials at a real point.
    pub fn eval_real(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.eval_generic(point)
    }

    /// Evaluates all N basis polynomials at a complex point.
    pub fn eval_complex(&self, point: &[C64]) -> Result<Vec<C64>> {
        self.eval_generic(point)
    }

    fn eval_generic<T: Ring>(&self, point: &[T]) -> Result<Vec<T>> {
        if point.len() != self.spatial_dim {
            return Err(Error::DimensionMismatch {
                expected: self.spatial_dim,
                got: point.len(),
            });
        }
        // One table of 1-d basis values per coordinate, then products per
        // multi-index.
        let tables: Vec<Vec<T>> = point
            .iter()
            .map(|&x| {
                if self.kind.uses_chebyshev() {
                    chebyshev_table(x, self.degree)
                } else {
                    power_table(x, self.degree)
                }
            })
            .collect();
        let values = self
            .exponents
            .iter()
            .map(|alpha| {
                alpha
                    .iter()
                    .zip(&tables)
                    .fold(T::one(), |acc, (&a, table)| acc * table[a as usize])
            })
            .collect();
        Ok(values)
    }
}

/// All multi-indices with |α| ≤ degree, graded by total degree and within a
/// degree class ordered with earlier coordinates dominant.
fn graded_exponents(degree: usize, dim: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; dim];
    for total in 0..=degree as u32 {
        push_class(total, 0, &mut current, &mut out);
    }
    out
}

fn push_class(remaining: u32, coord: usize, current: &mut [u32], out: &mut Vec<Vec<u32>>) {
    if coord + 1 == current.len() {
        current[coord] = remaining;
        out.push(current.to_vec());
        return;
    }
    for a in (0..=remaining).rev() {
        current[coord] = a;
        push_class(remaining - a, coord + 1, current, out);
    }
}

/// 1, x, x², …, xⁿ.
fn power_table<T: Ring>(x: T, degree: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(degree + 1);
    table.push(T::one());
    for k in 0..degree {
        table.push(table[k] * x);
    }
    table
}

/// T₀(x), …, T_n(x) by the three-term recurrence T_{k+1} = 2x·T_k − T_{k−1}.
/// The recurrence (unlike cos·arccos) is valid off [−1, 1] and for complex x.
pub(crate) fn chebyshev_table<T: Ring>(x: T, degree: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(degree + 1);
    table.push(T::one());
    if degree >= 1 {
        table.push(x);
    }
    let two_x = x + x;
    for k in 1..degree {
        let next = two_x * table[k] - table[k - 1];
        table.push(next);
    }
    table
}

/// The n + 1 extreme points of T_n on [−1, 1], ascending:
/// cos(kπ/n) for k = n, …, 0.
///
/// Computed through sin so that the endpoints are exactly ±1 and (for even n)
/// the midpoint is exactly 0; the acceptance checks downstream rely on exact
/// symmetry of this set.
pub fn chebyshev_extreme_points(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    let points = (0..=n)
        .map(|j| {
            // −cos(jπ/n) = sin(π(2j − n)/(2n)), and sin is exact at 0, ±π/2.
            let num = 2 * j as i64 - n as i64;
            (std::f64::consts::PI * num as f64 / (2.0 * n as f64)).sin()
        })
        .collect();
    Ok(points)
}

/// Values ℓᵢ(z₀) of the Lagrange fundamental polynomials for `nodes` at a
/// point, i.e. the unique weights with q(z₀) = Σᵢ ℓᵢ(z₀) q(xᵢ) for every q in
/// the span. Requires exactly N nodes that are unisolvent for the basis.
///
/// They always sum to 1 (take q ≡ 1), whatever the basis or point.
pub fn lagrange_values(basis: &PolyBasis, nodes: &[Vec<f64>], z0: &[C64]) -> Result<Vec<C64>> {
    let n = basis.dimension();
    if nodes.len() != n {
        return Err(Error::NotUnisolvent(format!(
            "need exactly {n} nodes, got {}",
            nodes.len()
        )));
    }
    // Rows of V are the basis evaluated at each node; the Lagrange values
    // solve Vᵗ ℓ = p with p the basis at z₀.
    let mut v = DMatrix::<f64>::zeros(n, n);
    for (i, node) in nodes.iter().enumerate() {
        let row = basis.eval_real(node)?;
        for (j, value) in row.into_iter().enumerate() {
            v[(i, j)] = value;
        }
    }
    let p = basis.eval_complex(z0)?;

    // Unisolvence check before solving: a tiny relative singular value means
    // the nodes fail to determine interpolation in this space.
    let svals = v.clone().singular_values();
    let max_sv = svals.max();
    if !(max_sv > 0.0) || svals.min() <= 1e-12 * max_sv {
        return Err(Error::NotUnisolvent(
            "interpolation matrix is numerically singular".into(),
        ));
    }

    let lu = v.transpose().lu();
    let p_re = DVector::from_iterator(n, p.iter().map(|c| c.re));
    let p_im = DVector::from_iterator(n, p.iter().map(|c| c.im));
    let sol_re = lu.solve(&p_re).ok_or_else(|| {
        Error::NotUnisolvent("interpolation matrix is numerically singular".into())
    })?;
    let sol_im = lu.solve(&p_im).ok_or_else(|| {
        Error::NotUnisolvent("interpolation matrix is numerically singular".into())
    })?;
    Ok((0..n).map(|i| C64::new(sol_re[i], sol_im[i])).collect())
}

/// Real-point convenience wrapper around [`lagrange_values`].
pub fn lagrange_values_real(
    basis: &PolyBasis,
    nodes: &[Vec<f64>],
    z0: &[f64],
) -> Result<Vec<f64>> {
    let z0c: Vec<C64> = z0.iter().map(|&x| C64::new(x, 0.0)).collect();
    let values = lagrange_values(basis, nodes, &z0c)?;
    Ok(values.into_iter().map(|c| c.re).collect())
}
