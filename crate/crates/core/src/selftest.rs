//! Seeded property suite. Case `i` of every check draws from its own stream
//! `rng_for(seed, i)`, so a report is bit-identical for a given seed no
//! matter how cases are scheduled.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::cone::{cone_contains, minkowski_norm, psi_matrix, GEOMETRY_TOL};
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::hermitian::{build_basis, embed, hs_inner, sqrt_psd, unembed, BasisSet};
use crate::measurement::{apply_all, apply_outcome, split};
use crate::optimize::golden_section;
use crate::qubit::{sandwich, sqrt_vec, QubitVector};
use crate::random::{self, rng_for};
use crate::tradeoff::{closed_form_point, optimal_repair, pipeline_point, repaired_disturbance, stationarity_check};

/// Outcome of one named property over a batch of random cases.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckSummary {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
}

impl SelftestReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.ok()).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }
}

type Case = fn(&mut ChaCha8Rng, &Bases) -> Result<f64>;

struct Bases(Vec<BasisSet>);

impl Bases {
    fn new() -> Self {
        Self((2..=5).map(|d| build_basis(d).expect("d >= 2")).collect())
    }

    fn get(&self, d: usize) -> &BasisSet {
        &self.0[d - 2]
    }
}

fn qubit_dense(b: &BasisSet, v: &QubitVector) -> Result<crate::hermitian::HermitianMatrix> {
    unembed(&v.to_cone(), b)
}

fn isometry(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=5);
    let (a, b) = (random::hermitian(rng, d), random::hermitian(rng, d));
    let basis = bases.get(d);
    let lhs = hs_inner(&a, &b)?;
    let rhs = embed(&a, basis)?.dot(&embed(&b, basis)?)? / d as f64;
    Ok((lhs - rhs).abs())
}

fn homomorphism(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=3);
    let basis = bases.get(d);
    let (a, b) = (random::complex_matrix(rng, d), random::complex_matrix(rng, d));
    let lhs = psi_matrix(&a.mul(&b), basis)?;
    let rhs = psi_matrix(&a, basis)?.matrix() * psi_matrix(&b, basis)?.matrix();
    Ok((lhs.matrix() - rhs).abs().max())
}

fn unitary_is_rotation(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=3);
    let psi = psi_matrix(&random::unitary(rng, d), bases.get(d))?;
    let m = psi.matrix();
    let n = m.nrows();
    let orth = (m.transpose() * m - nalgebra::DMatrix::<f64>::identity(n, n))
        .abs()
        .max();
    Ok(orth.max((m.determinant() - 1.0).abs()))
}

fn psd_in_cone(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=5);
    let v = embed(&random::psd(rng, d), bases.get(d))?;
    Ok(if cone_contains(&v, GEOMETRY_TOL) { 0.0 } else { 1.0 })
}

fn pure_light_like(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=5);
    let v = embed(&random::pure(rng, d), bases.get(d))?;
    Ok(minkowski_norm(&v).abs().max((v.height() - 1.0).abs()))
}

fn qubit_sandwich(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let b = bases.get(2);
    let (a, r) = (random::qubit_cone(rng), random::qubit_cone(rng));
    let dense = qubit_dense(b, &r)?.conjugate_by(&qubit_dense(b, &a)?.to_complex());
    Ok(QubitVector::from_cone(&embed(&dense, b)?)?.max_abs_diff(&sandwich(&a, &r)))
}

fn qubit_sqrt(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let b = bases.get(2);
    let a = random::qubit_cone(rng);
    let dense = sqrt_psd(&qubit_dense(b, &a)?)?;
    Ok(QubitVector::from_cone(&embed(&dense, b)?)?.max_abs_diff(&sqrt_vec(&a)?))
}

fn born_rule(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=4);
    let outcomes = rng.random_range(1..=4);
    let m = random::measurement(rng, d, outcomes);
    let rho = random::density(rng, d);
    let recs = apply_all(&m, &rho, bases.get(d))?;
    let total = recs.iter().map(|r| r.probability).sum::<f64>();
    let heights = recs
        .iter()
        .map(|r| (r.unrescaled.height() - r.probability).abs())
        .fold(0.0, f64::max);
    Ok((total - 1.0).abs().max(heights))
}

fn rotation_equivalence(rng: &mut ChaCha8Rng, bases: &Bases) -> Result<f64> {
    let d = rng.random_range(2..=3);
    let basis = bases.get(d);
    let m = random::measurement(rng, d, 2);
    let rho = random::density(rng, d);
    let mut worst: f64 = 0.0;
    for ((u, e), k) in split(&m).iter().zip(m.kraus()) {
        let full = apply_outcome(k, &rho, basis)?;
        let bare = apply_outcome(&e.to_complex(), &rho, basis)?;
        worst = worst.max((full.probability - bare.probability).abs());
        if let (Some(f), Some(b)) = (&full.rescaled, &bare.rescaled) {
            worst = worst.max(psi_matrix(u, basis)?.apply(b)?.max_abs_diff(f));
        }
    }
    Ok(worst)
}

fn tradeoff_agreement(rng: &mut ChaCha8Rng, _: &Bases) -> Result<f64> {
    let (c, beta) = (rng.random::<f64>(), rng.random::<f64>());
    let (cf, pipe) = (closed_form_point(c, beta)?, pipeline_point(c, beta)?);
    Ok((cf.info - pipe.info)
        .abs()
        .max((cf.disturbance - pipe.disturbance).abs()))
}

fn repair_angle(rng: &mut ChaCha8Rng, _: &Bases) -> Result<f64> {
    let p = rng.random_range(0.01..0.5);
    let q = rng.random_range(0.01..0.5);
    let delta = rng.random_range(0.0..0.98 * PI);
    let r = optimal_repair(p, q, delta)?;
    let m = golden_section(
        |w| repaired_disturbance(p, q, 0.5 * delta, w),
        -0.5 * PI,
        0.5 * PI,
        1e-12,
    );
    Ok((m.x - r.omega).abs())
}

fn stationarity(rng: &mut ChaCha8Rng, _: &Bases) -> Result<f64> {
    let c = rng.random_range(0.05..0.95);
    let beta = rng.random_range(0.05..0.95);
    Ok(stationarity_check(c, beta, 1e-5)?.constrained_residual)
}

const CHECKS: &[(&str, Case, usize, f64)] = &[
    ("hilbert-schmidt isometry", isometry, 200, 1e-12),
    ("adjoint map homomorphism", homomorphism, 100, 1e-10),
    ("unitary adjoint is a rotation", unitary_is_rotation, 100, 1e-10),
    ("psd matrices lie in the cone", psd_in_cone, 200, 0.0),
    ("pure states are light-like", pure_light_like, 200, 1e-12),
    ("qubit sandwich closed form", qubit_sandwich, 200, 1e-10),
    ("qubit square root closed form", qubit_sqrt, 200, 1e-10),
    ("born rule and heights", born_rule, 200, 1e-10),
    ("repair rotation equivalence", rotation_equivalence, 100, 1e-9),
    ("tradeoff closed form vs pipeline", tradeoff_agreement, 50, 1e-9),
    ("repair angle vs golden section", repair_angle, 200, 1e-6),
    ("symmetric attack stationarity", stationarity, 20, 1e-5),
];

/// Runs every check; a case that errors counts as failed with residual ∞.
pub fn run(seed: u64, exec: Execution) -> SelftestReport {
    let bases = Bases::new();
    let mut stream = 0u64;
    let checks = CHECKS
        .iter()
        .map(|&(name, case, cases, tolerance)| {
            let base = stream;
            stream += cases as u64;
            let residuals = exec::map_indexed(exec, cases, |i| {
                let mut rng = rng_for(seed, base + i as u64);
                case(&mut rng, &bases).unwrap_or(f64::INFINITY)
            });
            CheckSummary {
                name,
                cases,
                passed: residuals.iter().filter(|&&r| r <= tolerance).count(),
                worst: residuals.iter().copied().fold(0.0, f64::max),
                tolerance,
            }
        })
        .collect();
    SelftestReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_reproducible() {
        let a = run(11, Execution::Parallel);
        assert_eq!(
            a.failed(),
            0,
            "{:#?}",
            a.checks.iter().filter(|c| !c.ok()).collect::<Vec<_>>()
        );
        let b = run(11, Execution::Sequential);
        assert_eq!(a, b);
    }
}
