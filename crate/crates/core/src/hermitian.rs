//! Complex and hermitian matrices, the Hilbert–Schmidt orthogonal basis, and
//! the coordinate map `φ(A) = (Tr(A τ_μ))_μ` into `ℝ^{d²}`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::cone::ConeVector;
use crate::error::{ConalError, Result};

/// Entrywise tolerance on `A - A†` accepted when building a [`HermitianMatrix`].
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Eigenvalues in `[-PSD_TOL, 0)` count as zero for square roots.
pub const PSD_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_square(m: &DMatrix<Complex64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(ConalError::Malformed(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let d = m.nrows();
    if d < 2 {
        return Err(ConalError::InvalidDimension(d));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(ConalError::Malformed("non-finite matrix entry".into()));
    }
    Ok(d)
}

fn rows_to_matrix(rows: &[Vec<Complex64>]) -> Result<DMatrix<Complex64>> {
    let d = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
        return Err(ConalError::Malformed(format!(
            "row {i} has {} entries, expected {d}",
            r.len()
        )));
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

/// A square complex matrix of dimension `d ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        check_square(&m)?;
        Ok(Self(m))
    }

    /// Builds from row-major rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(rows_to_matrix(rows)?)
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self(&self.0 * z)
    }

    /// `M† M`, which is hermitian PSD by construction.
    pub fn gram(&self) -> HermitianMatrix {
        HermitianMatrix::symmetrized(self.0.adjoint() * &self.0)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim();
        max_abs_diff(&(self.0.adjoint() * &self.0), &DMatrix::identity(d, d)) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        max_abs_diff(&self.0, &self.0.adjoint()) <= tol
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// A `d × d` hermitian matrix. The stored entries are exactly hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(DMatrix<Complex64>);

impl HermitianMatrix {
    /// Accepts `m` if `|m - m†| ≤ HERMITICITY_TOL` entrywise, then stores
    /// `(m + m†)/2`.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        check_square(&m)?;
        let dev = max_abs_diff(&m, &m.adjoint());
        if dev > HERMITICITY_TOL {
            return Err(ConalError::Malformed(format!(
                "matrix is not hermitian (max |A - A†| = {dev:.3e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(rows_to_matrix(rows)?)
    }

    fn symmetrized(m: DMatrix<Complex64>) -> Self {
        let adj = m.adjoint();
        Self((m + adj) * Complex64::new(0.5, 0.0))
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(DMatrix::zeros(d, d))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// The (generalized pure) outer product `|v⟩⟨v|`, not normalized.
    pub fn outer(v: &[Complex64]) -> Self {
        let d = v.len();
        Self(DMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.clone())
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 + &other.0)
    }

    /// `A²`, exactly hermitian.
    pub fn square(&self) -> Self {
        Self::symmetrized(&self.0 * &self.0)
    }

    /// `X A X†` for any complex `X`.
    pub fn conjugate_by(&self, x: &ComplexMatrix) -> Self {
        Self::symmetrized(&x.0 * &self.0 * x.0.adjoint())
    }

    /// Eigenvalues in ascending order with matching unit eigenvectors as
    /// columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let eig = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().0
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.to_complex().rows()
    }
}

/// `max_ij |a_ij - b_ij|`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// The `d²` Hilbert–Schmidt orthogonal hermitian matrices `τ_μ` with
/// `τ_0 = 𝕀` and `Tr(τ_μ τ_ν) = d δ_μν`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    dim: usize,
    matrices: Vec<HermitianMatrix>,
}

impl BasisSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn get(&self, mu: usize) -> &HermitianMatrix {
        &self.matrices[mu]
    }

    /// The `d² × d²` matrix `Tr(τ_μ τ_ν)`.
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |mu, nu| {
            hs_inner_unchecked(&self.matrices[mu], &self.matrices[nu])
        })
    }
}

/// Builds `τ_0 = 𝕀` followed by the generalized Gell-Mann matrices scaled by
/// `√(d/2)`: all symmetric off-diagonal ones (`j < k` in row-major order),
/// then the antisymmetric ones, then the `d - 1` diagonal ones.
///
/// For `d = 2` this is `[𝕀, X, Y, Z]`.
pub fn build_basis(d: usize) -> Result<BasisSet> {
    if d < 2 {
        return Err(ConalError::InvalidDimension(d));
    }
    let scale = (d as f64 / 2.0).sqrt();
    let mut matrices = Vec::with_capacity(d * d);
    matrices.push(HermitianMatrix::identity(d));

    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = DMatrix::zeros(d, d);
        m[(j, k)] = ONE * scale;
        m[(k, j)] = ONE * scale;
        matrices.push(HermitianMatrix(m));
    }
    for &(j, k) in &pairs {
        let mut m = DMatrix::zeros(d, d);
        m[(j, k)] = -I * scale;
        m[(k, j)] = I * scale;
        matrices.push(HermitianMatrix(m));
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt() * scale;
        let mut diag = vec![0.0; d];
        diag[..l].iter_mut().for_each(|x| *x = norm);
        diag[l] = -(l as f64) * norm;
        matrices.push(HermitianMatrix::from_diagonal(&diag));
    }
    Ok(BasisSet { dim: d, matrices })
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(ConalError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Re Tr(AB)` without dimension checks.
fn hs_inner_unchecked(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    let (a, b) = (&a.0, &b.0);
    let d = a.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// `φ(A)`: component `μ` is `Tr(A τ_μ)`.
pub fn embed(a: &HermitianMatrix, basis: &BasisSet) -> Result<ConeVector> {
    check_dims(basis.dim(), a.dim())?;
    let comps = basis.matrices.iter().map(|t| hs_inner_unchecked(a, t)).collect();
    ConeVector::new(basis.dim(), comps)
}

/// `φ⁻¹(v) = (1/d) Σ_μ v_μ τ_μ`.
pub fn unembed(v: &ConeVector, basis: &BasisSet) -> Result<HermitianMatrix> {
    let d = basis.dim();
    if v.components().len() != d * d {
        return Err(ConalError::LengthMismatch {
            expected: d * d,
            found: v.components().len(),
        });
    }
    check_dims(d, v.dim())?;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for (c, t) in v.components().iter().zip(&basis.matrices) {
        if *c != 0.0 {
            m += &t.0 * Complex64::new(*c / d as f64, 0.0);
        }
    }
    Ok(HermitianMatrix(m))
}

/// Hilbert–Schmidt inner product `Tr(AB)` (real for hermitian arguments).
pub fn hs_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(hs_inner_unchecked(a, b))
}

/// True iff every eigenvalue of `a` is `≥ -tol`.
pub fn is_positive(a: &HermitianMatrix, tol: f64) -> bool {
    a.eigenvalues().first().is_some_and(|&l| l >= -tol)
}

/// The unique PSD square root. Eigenvalues in `[-PSD_TOL, 0)` are clamped.
pub fn sqrt_psd(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (values, vectors) = a.eigen();
    if let Some(&min) = values.first() {
        if min < -PSD_TOL {
            return Err(ConalError::Domain(format!(
                "square root of a non-PSD matrix (min eigenvalue {min:.3e})"
            )));
        }
    }
    let roots = DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| Complex64::new(l.max(0.0).sqrt(), 0.0)),
    );
    let m = &vectors * DMatrix::from_diagonal(&roots) * vectors.adjoint();
    Ok(HermitianMatrix::symmetrized(m))
}

/// Polar decomposition `M = U P` with `U` unitary and `P = √(M†M)`.
///
/// Computed through the SVD `M = W Σ V†`: `U = W V†`, `P = V Σ V†`. For
/// singular `M` the columns of `W` spanning the cokernel complete `U` to a
/// unitary.
pub fn polar_decompose(m: &ComplexMatrix) -> (ComplexMatrix, HermitianMatrix) {
    let svd = m.0.clone().svd(true, true);
    let w = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let sigma = DMatrix::from_diagonal(&svd.singular_values.map(|s| Complex64::new(s, 0.0)));
    let u = &w * &v_t;
    let p = v_t.adjoint() * sigma * &v_t;
    (ComplexMatrix(u), HermitianMatrix::symmetrized(p))
}
