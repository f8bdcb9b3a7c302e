//! Conal (cone-coordinate) representation of qubit and qudit operators.
//!
//! Hermitian `d×d` matrices are mapped to real vectors in `ℝ^{d²}` by
//! `φ(A)_μ = Tr(A τ_μ)` over a scaled generalized Gell-Mann basis. Positive
//! matrices land inside a Minkowski cone, conjugations become real linear
//! maps, and generalized measurements become geometry. The [`tradeoff`]
//! module applies this to the information/disturbance tradeoff for two pure
//! qubit states.

pub mod cone;
pub mod error;
pub mod exec;
pub mod hermitian;
pub mod io;
pub mod measurement;
pub mod optimize;
pub mod qubit;
pub mod random;
pub mod selftest;
pub mod tradeoff;

pub use cone::{ConeVector, MinkowskiMetric};
pub use error::{ConalError, Result};
pub use exec::Execution;
pub use hermitian::{build_basis, embed, unembed, BasisSet, ComplexMatrix, HermitianMatrix};
pub use measurement::{GeneralizedMeasurement, OutcomeRecord, Povm};
pub use qubit::QubitVector;
pub use tradeoff::{Scenario, TradeoffPoint};
