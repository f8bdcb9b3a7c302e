//! Seeded generators for property checks.
//!
//! * hermitian: `(G + G†)/2`, `G` with i.i.d. complex standard-normal entries
//! * PSD: `G†G`
//! * density: PSD scaled to unit trace
//! * pure: `|v⟩⟨v|` for a normalized complex Gaussian `v`
//! * unitary: Haar, via QR of `G` with the phase of `diag(R)` removed

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hermitian::{sqrt_psd, ComplexMatrix, HermitianMatrix};
use crate::measurement::GeneralizedMeasurement;
use crate::qubit::QubitVector;

/// Independent, reproducible stream `stream` under `seed`. Batch jobs use
/// their index as the stream so results do not depend on scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| complex_normal(rng))
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::new(gaussian(rng, d)).expect("d >= 2")
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
    let g = gaussian(rng, d);
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianMatrix::new(h).expect("hermitian by construction")
}

pub fn psd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
    complex_matrix(rng, d).gram()
}

pub fn density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
    let p = psd(rng, d);
    p.scale(1.0 / p.trace())
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| complex_normal(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn pure<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
    HermitianMatrix::outer(&unit_vector(rng, d))
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let qr = gaussian(rng, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ComplexMatrix::new(q * phases).expect("d >= 2")
}

/// A random `outcomes`-element measurement: `M_m = G_m S^{-1/2}` with
/// `S = Σ G_m† G_m`, so that `Σ M_m† M_m = 𝕀`.
pub fn measurement<R: Rng + ?Sized>(rng: &mut R, d: usize, outcomes: usize) -> GeneralizedMeasurement {
    let gs: Vec<DMatrix<Complex64>> = (0..outcomes).map(|_| gaussian(rng, d)).collect();
    let s = gs
        .iter()
        .fold(DMatrix::<Complex64>::zeros(d, d), |acc, g| acc + g.adjoint() * g);
    let s = HermitianMatrix::new(s).expect("gram sum is hermitian");
    let root = sqrt_psd(&s).expect("gram sum is PSD");
    let inv = root
        .matrix()
        .clone()
        .try_inverse()
        .expect("gaussian gram sum is invertible");
    let kraus = gs
        .into_iter()
        .map(|g| ComplexMatrix::new(g * &inv).expect("square"))
        .collect();
    GeneralizedMeasurement::new(kraus).expect("complete by construction")
}

/// A qubit cone vector: height uniform in `(0, 2]` and spatial part uniform
/// in the ball of that radius.
pub fn qubit_cone<R: Rng + ?Sized>(rng: &mut R) -> QubitVector {
    let a0 = 2.0 * (1.0 - rng.random::<f64>());
    let dir = unit_direction(rng);
    let r = a0 * rng.random::<f64>().cbrt();
    QubitVector::new([a0, r * dir[0], r * dir[1], r * dir[2]])
}

/// A light-like qubit vector (generalized pure state) of height in `(0, 2]`.
pub fn qubit_light_like<R: Rng + ?Sized>(rng: &mut R) -> QubitVector {
    let a0 = 2.0 * (1.0 - rng.random::<f64>());
    let dir = unit_direction(rng);
    QubitVector::new([a0, a0 * dir[0], a0 * dir[1], a0 * dir[2]])
}

/// Uniform point on the unit 2-sphere.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::is_positive;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = rng_for(1, 0);
        for d in 2..=4 {
            assert!(is_positive(&psd(&mut rng, d), 1e-12));
            assert!((density(&mut rng, d).trace() - 1.0).abs() < 1e-12);
            let p = pure(&mut rng, d);
            assert!((p.square().max_abs_diff(&p)) < 1e-12);
            assert!(unitary(&mut rng, d).is_unitary(1e-12));
            let m = measurement(&mut rng, d, 3);
            assert_eq!(m.kraus().len(), 3);
        }
        for _ in 0..100 {
            assert!(qubit_cone(&mut rng).is_positive(0.0));
            assert!(qubit_light_like(&mut rng).minkowski_norm().abs() < 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = rng_for(7, 3).random();
        let b: f64 = rng_for(7, 3).random();
        let c: f64 = rng_for(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
