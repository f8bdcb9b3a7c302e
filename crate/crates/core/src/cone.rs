//! Real geometry of `ℝ^{d²}`: cone vectors, the Minkowski metric
//! `diag(d-1, -1, …, -1)`, the cone of revolution Γ, and the real matrix
//! `ψ(A)` representing `ρ ↦ AρA†`.
//!
//! The image `C` of the PSD cone sits inside Γ, and equals it only for
//! `d = 2`. Membership in `C` is decided pointwise by an eigenvalue test on
//! the unembedded matrix.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{ConalError, Result};
use crate::hermitian::{embed, is_positive, unembed, BasisSet, ComplexMatrix, HermitianMatrix, PSD_TOL};

/// Default tolerance for boolean geometric predicates.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// Coordinates `(Tr(Aτ_μ))_μ` of a hermitian matrix; component 0 is the
/// trace, or height in the cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeVectorRepr")]
pub struct ConeVector {
    dim: usize,
    components: Vec<f64>,
}

#[derive(Deserialize)]
struct ConeVectorRepr {
    dim: usize,
    components: Vec<f64>,
}

impl TryFrom<ConeVectorRepr> for ConeVector {
    type Error = ConalError;

    fn try_from(r: ConeVectorRepr) -> Result<Self> {
        ConeVector::new(r.dim, r.components)
    }
}

impl ConeVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(ConalError::InvalidDimension(dim));
        }
        if components.len() != dim * dim {
            return Err(ConalError::LengthMismatch {
                expected: dim * dim,
                found: components.len(),
            });
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(ConalError::Malformed("non-finite cone vector component".into()));
        }
        Ok(Self { dim, components })
    }

    /// `(d, 0, …, 0)`, the image of the identity.
    pub fn identity(dim: usize) -> Self {
        let mut components = vec![0.0; dim * dim];
        components[0] = dim as f64;
        Self { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn height(&self) -> f64 {
        self.components[0]
    }

    /// Components `1 … d²-1`.
    pub fn restricted(&self) -> &[f64] {
        &self.components[1..]
    }

    fn same_dim(&self, other: &ConeVector) -> Result<()> {
        if self.dim != other.dim {
            return Err(ConalError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Euclidean dot product.
    pub fn dot(&self, other: &ConeVector) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            components: self.components.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &ConeVector) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &ConeVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.components)
    }

    fn from_dvector(dim: usize, v: &DVector<f64>) -> Self {
        Self {
            dim,
            components: v.iter().copied().collect(),
        }
    }
}

/// The diagonal metric `(d-1, -1, …, -1)` of signature `(1, d²-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinkowskiMetric {
    dim: usize,
    diagonal: Vec<f64>,
}

impl MinkowskiMetric {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(ConalError::InvalidDimension(dim));
        }
        let mut diagonal = vec![-1.0; dim * dim];
        diagonal[0] = dim as f64 - 1.0;
        Ok(Self { dim, diagonal })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
}

/// `Σ_μ η_μμ u_μ v_μ`.
pub fn minkowski_product(u: &ConeVector, v: &ConeVector, eta: &MinkowskiMetric) -> Result<f64> {
    u.same_dim(v)?;
    if eta.dim != u.dim {
        return Err(ConalError::DimensionMismatch {
            expected: eta.dim,
            found: u.dim,
        });
    }
    Ok(eta
        .diagonal
        .iter()
        .zip(u.components.iter().zip(&v.components))
        .map(|(g, (a, b))| g * a * b)
        .sum())
}

/// Minkowski norm `η(v, v)` under the metric of `v`'s own dimension.
pub fn minkowski_norm(v: &ConeVector) -> f64 {
    let d = v.dim as f64;
    let r2: f64 = v.restricted().iter().map(|x| x * x).sum();
    (d - 1.0) * v.height() * v.height() - r2
}

/// Membership in Γ: `Σ_{i≥1} v_i² ≤ (d-1) v_0² + tol` and `v_0 ≥ -tol`.
///
/// Necessary for positivity; sufficient only for `d = 2`.
pub fn cone_contains(v: &ConeVector, tol: f64) -> bool {
    v.height() >= -tol && minkowski_norm(v) >= -tol
}

fn check_basis(v: &ConeVector, basis: &BasisSet) -> Result<()> {
    if v.dim != basis.dim() {
        return Err(ConalError::DimensionMismatch {
            expected: basis.dim(),
            found: v.dim,
        });
    }
    Ok(())
}

/// Membership in `C`: the unembedded matrix has no eigenvalue below `-tol`.
pub fn is_positive_vec(v: &ConeVector, basis: &BasisSet, tol: f64) -> Result<bool> {
    check_basis(v, basis)?;
    Ok(is_positive(&unembed(v, basis)?, tol))
}

/// Generalized pure state: PSD and rank one, i.e. the largest eigenvalue
/// equals the trace to within `tol · trace`.
pub fn is_generalized_pure(v: &ConeVector, basis: &BasisSet, tol: f64) -> Result<bool> {
    check_basis(v, basis)?;
    let trace = v.height();
    if trace <= tol {
        return Ok(false);
    }
    let values = unembed(v, basis)?.eigenvalues();
    let (min, max) = (values[0], values[values.len() - 1]);
    Ok(min >= -tol && (trace - max).abs() <= tol * trace)
}

/// `p(m) = (1/d) φ(E_m) · φ(ρ)`.
pub fn outcome_probability(e: &ConeVector, rho: &ConeVector) -> Result<f64> {
    Ok(e.dot(rho)? / e.dim as f64)
}

/// What kind of operator generated an [`AdjointMap`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// The real `d² × d²` matrix `ψ(A)` with `φ(AρA†) = ψ(A) φ(ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointMap {
    dim: usize,
    matrix: DMatrix<f64>,
    source: OperatorKind,
}

impl AdjointMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn source(&self) -> OperatorKind {
        self.source
    }

    pub fn apply(&self, v: &ConeVector) -> Result<ConeVector> {
        if v.dim != self.dim {
            return Err(ConalError::DimensionMismatch {
                expected: self.dim,
                found: v.dim,
            });
        }
        Ok(ConeVector::from_dvector(self.dim, &(&self.matrix * v.to_dvector())))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// `ψ(A)_μν = (1/d) Tr(A τ_ν A† τ_μ)`.
pub fn psi_matrix(a: &ComplexMatrix, basis: &BasisSet) -> Result<AdjointMap> {
    let d = basis.dim();
    if a.dim() != d {
        return Err(ConalError::DimensionMismatch {
            expected: d,
            found: a.dim(),
        });
    }
    let n = d * d;
    let mut matrix = DMatrix::zeros(n, n);
    for (nu, tau) in basis.matrices().iter().enumerate() {
        let column = embed(&tau.conjugate_by(a), basis)?;
        for (mu, x) in column.components().iter().enumerate() {
            matrix[(mu, nu)] = x / d as f64;
        }
    }
    let source = if a.is_hermitian(1e-12) {
        OperatorKind::Hermitian
    } else if a.is_unitary(1e-12) {
        OperatorKind::Unitary
    } else {
        OperatorKind::General
    };
    Ok(AdjointMap { dim: d, matrix, source })
}

/// `φ(AρA)` for cone vectors of any dimension, computed densely. This is the
/// general-`d` counterpart of the closed-form qubit sandwich.
pub fn sandwich_dense(a: &ConeVector, rho: &ConeVector, basis: &BasisSet) -> Result<ConeVector> {
    let am = unembed(a, basis)?.to_complex();
    let r = unembed(rho, basis)?;
    embed(&r.conjugate_by(&am), basis)
}

/// An eigenpair of `ψ(√E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedState {
    pub eigenvalue: f64,
    pub vector: ConeVector,
}

/// The `d²` eigenpairs of `ψ(√E)`, largest eigenvalue first. An eigenvector
/// lying in `C` is a state left unchanged (after rescaling) by outcome `m`.
pub fn fixed_states(e_sqrt: &HermitianMatrix, basis: &BasisSet) -> Result<Vec<FixedState>> {
    if !is_positive(e_sqrt, PSD_TOL) {
        return Err(ConalError::Domain("fixed states need a PSD measurement element".into()));
    }
    let psi = psi_matrix(&e_sqrt.to_complex(), basis)?;
    let m = &psi.matrix;
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let d = basis.dim();
    let mut states: Vec<FixedState> = (0..d * d)
        .map(|k| FixedState {
            eigenvalue: eig.eigenvalues[k],
            vector: ConeVector::from_dvector(d, &eig.eigenvectors.column(k).into_owned()),
        })
        .collect();
    states.sort_by(|a, b| b.eigenvalue.total_cmp(&a.eigenvalue));
    Ok(states)
}
