//! Generalized measurements `{M_m}` with `Σ M_m† M_m = 𝕀`, their POVMs,
//! polar splitting `M_m = U_m √E_m`, and per-outcome post-measurement
//! states in cone coordinates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::cone::{ConeVector, OperatorKind};
use crate::error::{ConalError, Result};
use crate::exec::{self, Execution};
use crate::hermitian::{
    embed, is_positive, max_abs_diff, polar_decompose, sqrt_psd, BasisSet, ComplexMatrix, HermitianMatrix,
};

/// Outcomes with probability at or below this have no rescaled state.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Acceptance thresholds for measurement validation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// Entrywise bound on `Σ E_m - 𝕀`.
    pub completeness: f64,
    /// Lower bound on every effect eigenvalue is `-psd`.
    pub psd: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            completeness: 1e-9,
            psd: 1e-10,
        }
    }
}

/// Outcome of [`validate_kraus`] / [`validate_effects`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `max |Σ_m E_m - 𝕀|` entrywise.
    pub completeness_residual: f64,
    /// Smallest eigenvalue of each effect.
    pub min_eigenvalues: Vec<f64>,
    /// `Σ_m φ(E_m)`, which should be `(d, 0, …, 0)`.
    pub conal_sum: ConeVector,
    pub passed: bool,
}

impl ValidationReport {
    fn describe(&self) -> String {
        format!(
            "completeness residual {:.3e}, min effect eigenvalue {:.3e}",
            self.completeness_residual,
            self.min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
        )
    }
}

fn check_uniform_dim(dims: impl Iterator<Item = usize>) -> Result<usize> {
    let mut dims = dims.peekable();
    let d = *dims
        .peek()
        .ok_or_else(|| ConalError::Malformed("measurement has no elements".into()))?;
    for found in dims {
        if found != d {
            return Err(ConalError::DimensionMismatch { expected: d, found });
        }
    }
    Ok(d)
}

/// Validates a POVM.
pub fn validate_effects(effects: &[HermitianMatrix], th: &Thresholds) -> Result<ValidationReport> {
    let d = check_uniform_dim(effects.iter().map(|e| e.dim()))?;
    let basis = crate::hermitian::build_basis(d)?;
    let mut sum = DMatrix::<Complex64>::zeros(d, d);
    let mut conal_sum = vec![0.0; d * d];
    let mut min_eigenvalues = Vec::with_capacity(effects.len());
    for e in effects {
        sum += e.matrix();
        for (acc, x) in conal_sum.iter_mut().zip(embed(e, &basis)?.components()) {
            *acc += x;
        }
        min_eigenvalues.push(e.eigenvalues()[0]);
    }
    let completeness_residual = max_abs_diff(&sum, &DMatrix::identity(d, d));
    let passed = completeness_residual <= th.completeness && min_eigenvalues.iter().all(|&l| l >= -th.psd);
    Ok(ValidationReport {
        completeness_residual,
        min_eigenvalues,
        conal_sum: ConeVector::new(d, conal_sum)?,
        passed,
    })
}

/// Validates Kraus operators through their effects `M_m† M_m`.
pub fn validate_kraus(kraus: &[ComplexMatrix], th: &Thresholds) -> Result<ValidationReport> {
    check_uniform_dim(kraus.iter().map(|k| k.dim()))?;
    let effects: Vec<HermitianMatrix> = kraus.iter().map(ComplexMatrix::gram).collect();
    validate_effects(&effects, th)
}

/// A validated set of Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedMeasurement {
    kraus: Vec<ComplexMatrix>,
}

impl GeneralizedMeasurement {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_thresholds(kraus, &Thresholds::default())
    }

    pub fn with_thresholds(kraus: Vec<ComplexMatrix>, th: &Thresholds) -> Result<Self> {
        let report = validate_kraus(&kraus, th)?;
        if !report.passed {
            return Err(ConalError::Validation(report.describe()));
        }
        Ok(Self { kraus })
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn effects(&self) -> Vec<HermitianMatrix> {
        self.kraus.iter().map(ComplexMatrix::gram).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_kraus(&self.kraus, &Thresholds::default()).expect("validated at construction")
    }
}

/// A validated POVM `{E_m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianMatrix>) -> Result<Self> {
        Self::with_thresholds(effects, &Thresholds::default())
    }

    pub fn with_thresholds(effects: Vec<HermitianMatrix>, th: &Thresholds) -> Result<Self> {
        let report = validate_effects(&effects, th)?;
        if !report.passed {
            return Err(ConalError::Validation(report.describe()));
        }
        Ok(Self { effects })
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    /// The measurement `{√E_m}` (all repair unitaries trivial).
    pub fn to_measurement(&self) -> Result<GeneralizedMeasurement> {
        let kraus = self
            .effects
            .iter()
            .map(|e| sqrt_psd(e).map(|r| r.to_complex()))
            .collect::<Result<Vec<_>>>()?;
        GeneralizedMeasurement::new(kraus)
    }
}

/// `M_m = U_m √E_m` for every element.
pub fn split(meas: &GeneralizedMeasurement) -> Vec<(ComplexMatrix, HermitianMatrix)> {
    meas.kraus.iter().map(polar_decompose).collect()
}

/// One outcome of a measurement applied to a state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub index: usize,
    pub probability: f64,
    /// `φ(M_m ρ M_m†)`; its height is the probability.
    pub unrescaled: ConeVector,
    /// `unrescaled / probability`, absent for zero-probability outcomes.
    pub rescaled: Option<ConeVector>,
}

impl OutcomeRecord {
    pub fn is_defined(&self) -> bool {
        self.rescaled.is_some()
    }
}

fn check_state(rho: &HermitianMatrix, basis: &BasisSet) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(ConalError::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    if (rho.trace() - 1.0).abs() > 1e-9 {
        return Err(ConalError::Domain(format!(
            "state trace is {}, expected 1",
            rho.trace()
        )));
    }
    if !is_positive(rho, 1e-10) {
        return Err(ConalError::Domain("state is not positive semidefinite".into()));
    }
    Ok(())
}

fn outcome_unchecked(
    index: usize,
    m: &ComplexMatrix,
    rho: &HermitianMatrix,
    basis: &BasisSet,
) -> Result<OutcomeRecord> {
    if m.dim() != basis.dim() {
        return Err(ConalError::DimensionMismatch {
            expected: basis.dim(),
            found: m.dim(),
        });
    }
    let post = rho.conjugate_by(m);
    let unrescaled = embed(&post, basis)?;
    let probability = post.trace();
    let rescaled = (probability > ZERO_PROBABILITY).then(|| unrescaled.scale(1.0 / probability));
    Ok(OutcomeRecord {
        index,
        probability,
        unrescaled,
        rescaled,
    })
}

/// Applies a single Kraus element `M_m` to a unit-trace PSD `rho`.
pub fn apply_outcome(m: &ComplexMatrix, rho: &HermitianMatrix, basis: &BasisSet) -> Result<OutcomeRecord> {
    check_state(rho, basis)?;
    outcome_unchecked(0, m, rho, basis)
}

/// Applies every element of `meas` to `rho`.
pub fn apply_all(meas: &GeneralizedMeasurement, rho: &HermitianMatrix, basis: &BasisSet) -> Result<Vec<OutcomeRecord>> {
    apply_all_with(meas, rho, basis, Execution::Sequential)
}

/// As [`apply_all`], evaluating outcomes under `exec`.
pub fn apply_all_with(
    meas: &GeneralizedMeasurement,
    rho: &HermitianMatrix,
    basis: &BasisSet,
    exec: Execution,
) -> Result<Vec<OutcomeRecord>> {
    check_state(rho, basis)?;
    exec::map_indexed(exec, meas.kraus.len(), |i| {
        outcome_unchecked(i, &meas.kraus[i], rho, basis)
    })
    .into_iter()
    .collect()
}

/// Sum of the unrescaled vectors: `φ` of the non-selective post-state.
pub fn coarse_grain(records: &[OutcomeRecord]) -> Result<ConeVector> {
    let first = records
        .first()
        .ok_or_else(|| ConalError::Malformed("no outcome records".into()))?;
    records[1..]
        .iter()
        .try_fold(first.unrescaled.clone(), |acc, r| acc.add(&r.unrescaled))
}

/// Classifies the unitary factor of a split element (useful in reports).
pub fn repair_kind(u: &ComplexMatrix) -> OperatorKind {
    if max_abs_diff(u.matrix(), &DMatrix::identity(u.dim(), u.dim())) <= 1e-10 {
        OperatorKind::Hermitian
    } else if u.is_unitary(1e-10) {
        OperatorKind::Unitary
    } else {
        OperatorKind::General
    }
}
