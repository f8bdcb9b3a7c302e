//! Closed-form qubit (`d = 2`) geometry in Pauli coordinates.
//!
//! A qubit hermitian matrix is `A = ½ (a τ_0 + x X + y Y + z Z)` and is
//! represented by the four-vector `(a, x, y, z)`. The metric is
//! `η = diag(1, -1, -1, -1)`. Everything here works on four-vectors only;
//! the dense matrix route in [`crate::hermitian`] is the cross-check.

use serde::{Deserialize, Serialize};

use crate::cone::ConeVector;
use crate::error::{ConalError, Result};

/// Coefficient of `(a·ρ) a` in the compact sandwich.
pub const SANDWICH_K1: f64 = 0.5;
/// Coefficient of `η(a,a) (ρ - ρ_0 φ(𝕀))` in the compact sandwich.
pub const SANDWICH_K2: f64 = 0.25;

/// Post-measurement heights at or below this count as zero probability.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// A qubit four-vector `(a, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitVector(pub [f64; 4]);

impl QubitVector {
    /// `φ(𝕀) = (2, 0, 0, 0)`.
    pub const IDENTITY: QubitVector = QubitVector([2.0, 0.0, 0.0, 0.0]);
    pub const ZERO: QubitVector = QubitVector([0.0; 4]);

    pub const fn new(c: [f64; 4]) -> Self {
        Self(c)
    }

    pub fn components(&self) -> [f64; 4] {
        self.0
    }

    pub fn height(&self) -> f64 {
        self.0[0]
    }

    /// The Bloch part `(x, y, z)`.
    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn dot(&self, o: &QubitVector) -> f64 {
        self.0.iter().zip(&o.0).map(|(a, b)| a * b).sum()
    }

    /// `η(self, o) = a₀b₀ - a⃗·b⃗`.
    pub fn eta(&self, o: &QubitVector) -> f64 {
        self.0[0] * o.0[0] - self.0[1] * o.0[1] - self.0[2] * o.0[2] - self.0[3] * o.0[3]
    }

    pub fn minkowski_norm(&self) -> f64 {
        self.eta(self)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }

    pub fn add(&self, o: &QubitVector) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn sub(&self, o: &QubitVector) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs_diff(&self, o: &QubitVector) -> f64 {
        (0..4).map(|i| (self.0[i] - o.0[i]).abs()).fold(0.0, f64::max)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        qubit_positive(self, tol)
    }

    pub fn to_cone(&self) -> ConeVector {
        ConeVector::new(2, self.0.to_vec()).expect("four finite components")
    }

    pub fn from_cone(v: &ConeVector) -> Result<Self> {
        if v.dim() != 2 {
            return Err(ConalError::DimensionMismatch {
                expected: 2,
                found: v.dim(),
            });
        }
        let c = v.components();
        Ok(Self([c[0], c[1], c[2], c[3]]))
    }
}

/// `A ≥ 0` iff `η(a,a) ≥ 0` and `a₀ ≥ 0`; the eigenvalues are
/// `½(a₀ ± |a⃗|)`.
pub fn qubit_positive(v: &QubitVector, tol: f64) -> bool {
    v.minkowski_norm() >= -tol && v.height() >= -tol
}

/// `φ(AρA)` for `a = φ(A)`, `rho = φ(ρ)`, component by component:
///
/// ```text
/// out_0 = ¼ [ a₀·(α²+β²+γ²+δ²) + 2α(βx+γy+δz) ]
/// out_i = ¼ [ ρ_i·η(A,A) + 2A_i (A·ρ) ]        (i = 1, 2, 3)
/// ```
///
/// with `A = (α, β, γ, δ)` and `ρ = (a, x, y, z)`.
pub fn sandwich(a: &QubitVector, rho: &QubitVector) -> QubitVector {
    let [al, be, ga, de] = a.0;
    let [r0, x, y, z] = rho.0;
    let (al2, be2, ga2, de2) = (al * al, be * be, ga * ga, de * de);
    QubitVector([
        0.25 * (r0 * (al2 + be2 + ga2 + de2) + 2.0 * al * (be * x + ga * y + de * z)),
        0.25 * (x * (al2 + be2 - ga2 - de2) + 2.0 * be * (al * r0 + ga * y + de * z)),
        0.25 * (y * (al2 - be2 + ga2 - de2) + 2.0 * ga * (al * r0 + be * x + de * z)),
        0.25 * (z * (al2 - be2 - ga2 + de2) + 2.0 * de * (al * r0 + be * x + ga * y)),
    ])
}

/// `AρA` as a combination of `A`, `ρ` and `𝕀`:
/// `φ(AρA) = k₁ (a·ρ) a + k₂ η(a,a) (ρ - ρ₀ φ(𝕀))`.
///
/// Equivalently the height gets `-ρ₀ η(a,a)` and the spatial part
/// `+ρ_i η(a,a)` inside the bracket of [`sandwich`].
pub fn sandwich_compact(a: &QubitVector, rho: &QubitVector) -> QubitVector {
    let shifted = rho.sub(&QubitVector::IDENTITY.scale(rho.height()));
    a.scale(SANDWICH_K1 * a.dot(rho))
        .add(&shifted.scale(SANDWICH_K2 * a.minkowski_norm()))
}

/// `φ(A²) = a₀ a - ¼ η(a,a) φ(𝕀)`.
pub fn square_vec(a: &QubitVector) -> QubitVector {
    a.scale(a.height())
        .sub(&QubitVector::IDENTITY.scale(0.25 * a.minkowski_norm()))
}

fn sqrt_parts(a: &QubitVector) -> Result<(f64, f64)> {
    let root_eta = a.minkowski_norm().max(0.0).sqrt();
    let r2 = a.height() + root_eta;
    if r2 <= 0.0 {
        return Err(ConalError::Domain("square root of the zero cone vector".into()));
    }
    Ok((root_eta, r2.sqrt()))
}

/// `φ(√A) = (1/r)(a + ½√η(a,a) φ(𝕀))` with `r = √(a₀ + √η(a,a))`.
///
/// Light-like inputs (generalized pure) give `√A = A/√a₀`.
pub fn sqrt_vec(a: &QubitVector) -> Result<QubitVector> {
    let (root_eta, r) = sqrt_parts(a)?;
    Ok(a.add(&QubitVector::IDENTITY.scale(0.5 * root_eta)).scale(1.0 / r))
}

/// Scalars relating `a`, `√a`, `a²` and a state `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossRelations {
    /// `η(√a, √a) = 2 √η(a,a)`
    pub eta_sqrt: f64,
    /// `a²·ρ = a₀ (a·ρ) - ½ ρ₀ η(a,a)`
    pub sq_dot: f64,
    /// `√a·ρ = (1/r)(a·ρ + ρ₀ √η(a,a))`
    pub sqrt_dot: f64,
}

pub fn cross_relations(a: &QubitVector, rho: &QubitVector) -> Result<CrossRelations> {
    let (root_eta, r) = sqrt_parts(a)?;
    let eta = a.minkowski_norm();
    let a_rho = a.dot(rho);
    Ok(CrossRelations {
        eta_sqrt: 2.0 * root_eta,
        sq_dot: a.height() * a_rho - 0.5 * rho.height() * eta,
        sqrt_dot: (a_rho + rho.height() * root_eta) / r,
    })
}

/// Inner products of the post-measurement states of `r0`, `r1` under the
/// element `√E`, expressed through `e = φ(E)` only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostInnerProducts {
    full4: f64,
    bloch3: f64,
    e_r0: f64,
    e_r1: f64,
    eta_term: f64,
}

impl PostInnerProducts {
    /// `φ(ρ⁰_m)·φ(ρ¹_m) = ¼[2(e·r0)(e·r1) - η(e,e)η(r0,r1)]`.
    pub fn full4(&self) -> f64 {
        self.full4
    }

    /// Spatial part of the unrescaled states: `¼[(e·r0)(e·r1) - η(e,e)η(r0,r1)]`.
    pub fn bloch3(&self) -> f64 {
        self.bloch3
    }

    fn rescaled_ratio(&self) -> Result<f64> {
        // Unrescaled heights are ½(e·r).
        if 0.5 * self.e_r0.min(self.e_r1) <= PROBABILITY_FLOOR {
            return Err(ConalError::Domain("zero outcome probability".into()));
        }
        Ok(self.eta_term / (self.e_r0 * self.e_r1))
    }

    /// `2 - η(e,e)η(r0,r1) / ((e·r0)(e·r1))`.
    pub fn rescaled4(&self) -> Result<f64> {
        Ok(2.0 - self.rescaled_ratio()?)
    }

    /// `1 - η(e,e)η(r0,r1) / ((e·r0)(e·r1))`: the cosine of the angle between
    /// the rescaled post-states when the inputs are pure.
    pub fn rescaled3(&self) -> Result<f64> {
        Ok(1.0 - self.rescaled_ratio()?)
    }
}

pub fn post_inner_products(e: &QubitVector, r0: &QubitVector, r1: &QubitVector) -> Result<PostInnerProducts> {
    let (e0, e1) = (e.dot(r0), e.dot(r1));
    if e0 < -PROBABILITY_FLOOR || e1 < -PROBABILITY_FLOOR {
        return Err(ConalError::Domain(
            "negative outcome probability: inputs outside the cone".into(),
        ));
    }
    let eta_term = e.minkowski_norm() * r0.eta(r1);
    let product = e0 * e1;
    Ok(PostInnerProducts {
        full4: 0.25 * (2.0 * product - eta_term),
        bloch3: 0.25 * (product - eta_term),
        e_r0: e0,
        e_r1: e1,
        eta_term,
    })
}

/// Squared norms of the post-measurement state of `rho`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostNorms(PostInnerProducts);

impl PostNorms {
    pub fn n4(&self) -> f64 {
        self.0.full4()
    }

    pub fn n3(&self) -> f64 {
        self.0.bloch3()
    }

    pub fn n4p(&self) -> Result<f64> {
        self.0.rescaled4()
    }

    /// Equals 1 exactly when `rho` or `e` is light-like.
    pub fn n3p(&self) -> Result<f64> {
        self.0.rescaled3()
    }
}

pub fn post_norms(e: &QubitVector, rho: &QubitVector) -> Result<PostNorms> {
    post_inner_products(e, rho, rho).map(PostNorms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{build_basis, embed, sqrt_psd, unembed};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(c: [f64; 4]) -> QubitVector {
        QubitVector(c)
    }

    fn dense_sandwich(a: &QubitVector, rho: &QubitVector) -> QubitVector {
        let b = build_basis(2).unwrap();
        let am = unembed(&a.to_cone(), &b).unwrap();
        let rm = unembed(&rho.to_cone(), &b).unwrap();
        QubitVector::from_cone(&embed(&rm.conjugate_by(&am.to_complex()), &b).unwrap()).unwrap()
    }

    #[test]
    fn positivity_examples() {
        assert!(qubit_positive(&q([1.0, 0.0, 0.0, 1.0]), 1e-12));
        assert!(!qubit_positive(&q([1.0, 0.0, 0.0, 1.01]), 1e-12));
        assert!(!qubit_positive(&q([-1.0, 0.0, 0.0, 0.0]), 1e-12));
    }

    #[test]
    fn sandwich_examples() {
        let rho = q([0.7, 0.1, -0.3, 0.2]);
        assert!(sandwich(&QubitVector::IDENTITY, &rho).max_abs_diff(&rho) < 1e-15);
        assert!(
            sandwich(&q([0.0, 0.0, 0.0, 2.0]), &q([1.0, 1.0, 0.0, 0.0])).max_abs_diff(&q([1.0, -1.0, 0.0, 0.0]))
                < 1e-15
        );
        assert_eq!(
            sandwich(&q([1.0, 0.0, 0.0, 1.0]), &q([1.0, 0.0, 0.0, -1.0])),
            QubitVector::ZERO
        );
    }

    #[test]
    fn compact_constants_and_examples() {
        assert_eq!(SANDWICH_K1 / SANDWICH_K2, 2.0);
        assert_eq!(
            sandwich_compact(&QubitVector::IDENTITY, &q([1.0, 0.0, 0.0, 0.0])),
            q([1.0, 0.0, 0.0, 0.0])
        );
        // Constants pinned by the two simplest conjugations:
        // A = 𝕀 leaves ρ unchanged; A = Z flips x and y.
        let rho = q([1.0, 0.3, -0.2, 0.5]);
        let z = q([0.0, 0.0, 0.0, 2.0]);
        assert!(sandwich_compact(&QubitVector::IDENTITY, &rho).max_abs_diff(&rho) < 1e-15);
        assert!(sandwich_compact(&z, &rho).max_abs_diff(&dense_sandwich(&z, &rho)) < 1e-15);
    }

    #[test]
    fn printed_corollary_constants_fail_identity_check() {
        // With k₁ = 1/16, k₂ = 1/32 the identity conjugation would shrink ρ.
        let rho = q([1.0, 0.0, 0.0, 0.0]);
        let a = QubitVector::IDENTITY;
        let shifted = rho.sub(&QubitVector::IDENTITY.scale(rho.height()));
        let printed = a
            .scale(a.dot(&rho) / 16.0)
            .add(&shifted.scale(a.minkowski_norm() / 32.0));
        assert!(printed.max_abs_diff(&rho) > 0.1);
    }

    #[test]
    fn square_and_root_examples() {
        assert_eq!(square_vec(&QubitVector::IDENTITY), QubitVector::IDENTITY);
        assert_eq!(square_vec(&q([3.0, 0.0, 0.0, 1.0])), q([5.0, 0.0, 0.0, 3.0]));
        assert_eq!(square_vec(&q([1.0, 0.0, 0.0, 1.0])), q([1.0, 0.0, 0.0, 1.0]));

        assert!(
            sqrt_vec(&q([5.0, 0.0, 0.0, 3.0]))
                .unwrap()
                .max_abs_diff(&q([3.0, 0.0, 0.0, 1.0]))
                < 1e-15
        );
        assert_eq!(sqrt_vec(&QubitVector::IDENTITY).unwrap(), QubitVector::IDENTITY);
        assert_eq!(sqrt_vec(&q([1.0, 0.0, 0.0, 1.0])).unwrap(), q([1.0, 0.0, 0.0, 1.0]));
        assert!(matches!(sqrt_vec(&QubitVector::ZERO), Err(ConalError::Domain(_))));
    }

    #[test]
    fn cross_relation_examples() {
        let r = cross_relations(&QubitVector::IDENTITY, &q([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(r.eta_sqrt, 4.0);
        let a = q([5.0, 0.0, 0.0, 3.0]);
        let rho = q([1.0, 0.0, 0.0, 0.0]);
        let r = cross_relations(&a, &rho).unwrap();
        assert_eq!(r.eta_sqrt, 8.0);
        assert!((r.sqrt_dot - 3.0).abs() < 1e-15);
        assert!((r.sq_dot - square_vec(&a).dot(&rho)).abs() < 1e-12);
        assert!(cross_relations(&QubitVector::ZERO, &rho).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let r0 = q([1.0, 0.3, 0.4, 0.1]);
        let r1 = q([1.0, -0.2, 0.5, 0.6]);
        let ip = post_inner_products(&QubitVector::IDENTITY, &r0, &r1).unwrap();
        assert!((ip.full4() - r0.dot(&r1)).abs() < 1e-14);

        let e = q([1.0, 0.0, 0.0, 1.0]);
        let dn = q([1.0, 0.0, 0.0, -1.0]);
        let ip = post_inner_products(&e, &dn, &dn).unwrap();
        assert_eq!(ip.full4(), 0.0);
        assert!(ip.rescaled3().is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let e = random::qubit_light_like(&mut rng);
            let s = random::qubit_light_like(&mut rng);
            let s = s.scale(1.0 / s.height());
            let ip = post_inner_products(&e, &s, &s).unwrap();
            assert!((ip.rescaled3().unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn norm_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let pure = random::qubit_light_like(&mut rng);
        let pure = pure.scale(1.0 / pure.height());
        assert!((post_norms(&QubitVector::IDENTITY, &pure).unwrap().n3p().unwrap() - 1.0).abs() < 1e-12);
        let e = random::qubit_light_like(&mut rng);
        assert!((post_norms(&e, &q([1.0, 0.0, 0.0, 0.0])).unwrap().n3p().unwrap() - 1.0).abs() < 1e-12);

        let e = q([1.0, 0.5, 0.0, 0.0]);
        let rho = q([1.0, 0.0, 0.0, 0.5]);
        let post = sandwich(&sqrt_vec(&e).unwrap(), &rho);
        let n = post_norms(&e, &rho).unwrap();
        assert!((n.n4() - post.dot(&post)).abs() < 1e-12);
        let [_, x, y, z] = post.0;
        assert!((n.n3() - (x * x + y * y + z * z)).abs() < 1e-12);
        let h = post.height();
        assert!((n.n4p().unwrap() - post.dot(&post) / (h * h)).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_dense() {
        let b = build_basis(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let a = random::qubit_cone(&mut rng);
            let rho = random::qubit_cone(&mut rng);
            assert!(sandwich(&a, &rho).max_abs_diff(&dense_sandwich(&a, &rho)) < 1e-12);
            assert!(sandwich_compact(&a, &rho).max_abs_diff(&sandwich(&a, &rho)) < 1e-12);
            let am = unembed(&a.to_cone(), &b).unwrap();
            let sq = QubitVector::from_cone(&embed(&am.square(), &b).unwrap()).unwrap();
            assert!(square_vec(&a).max_abs_diff(&sq) < 1e-12);
            let rt = QubitVector::from_cone(&embed(&sqrt_psd(&am).unwrap(), &b).unwrap()).unwrap();
            assert!(sqrt_vec(&a).unwrap().max_abs_diff(&rt) < 1e-10);
            assert!(square_vec(&sqrt_vec(&a).unwrap()).max_abs_diff(&a) < 1e-10);
        }
    }
}
