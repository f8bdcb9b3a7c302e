//! Information/disturbance tradeoff for two equiprobable pure qubit states
//! probed by a two-outcome measurement.
//!
//! States sit at `v0 = (1, c, s, 0)` and `v1 = (1, -c, s, 0)` with
//! `s = √(1-c²)`; their Bloch vectors are separated by `θ = arccos(1-2c²)`.
//! An outcome `m` with effect vector `ε_m` has joint probabilities
//! `p_m = ε_m·v0 / 4`, `q_m = ε_m·v1 / 4`, and leaves post-states separated
//! by `θ_m`. Each post-state is then misaligned from its original by half of
//! the gap `θ - θ_m` after the best in-plane repair rotation.
//!
//! Information is in bits.

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{ConalError, Result};
use crate::exec::{self, Execution};
use crate::optimize::scan_then_golden;
use crate::qubit::{post_inner_products, qubit_positive, sandwich, sqrt_vec, QubitVector, PROBABILITY_FLOOR};

/// Tolerance for cone membership of attack elements.
pub const ATTACK_TOL: f64 = 1e-12;
/// Agreement demanded between closed form and pipeline in verify mode.
pub const VERIFY_TOL: f64 = 1e-9;

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(ConalError::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

/// The pair of states to be distinguished.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub c: f64,
    /// Overlap `|⟨ψ₀|ψ₁⟩| = √(1-c²)`.
    pub s: f64,
    pub v0: QubitVector,
    pub v1: QubitVector,
}

impl Scenario {
    /// Bloch angle between the two states.
    pub fn theta(&self) -> f64 {
        2.0 * self.c.min(1.0).asin()
    }

    /// `η(v0, v1) = 2c²`.
    pub fn eta01(&self) -> f64 {
        self.v0.eta(&self.v1)
    }
}

pub fn make_scenario(c: f64) -> Result<Scenario> {
    unit_interval("c", c)?;
    let s = (1.0 - c * c).max(0.0).sqrt();
    Ok(Scenario {
        c,
        s,
        v0: QubitVector::new([1.0, c, s, 0.0]),
        v1: QubitVector::new([1.0, -c, s, 0.0]),
    })
}

/// One effect `ε = φ(E)` of an attack.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AttackElement(QubitVector);

impl AttackElement {
    pub fn new(eps: QubitVector) -> Result<Self> {
        if !qubit_positive(&eps, ATTACK_TOL) {
            return Err(ConalError::Domain(format!(
                "attack element {:?} is not positive",
                eps.0
            )));
        }
        Ok(Self(eps))
    }

    pub fn vector(&self) -> QubitVector {
        self.0
    }

    /// The other element of a two-outcome attack: `(2,0,0,0) - ε`.
    pub fn complement(&self) -> Result<Self> {
        Self::new(QubitVector::IDENTITY.sub(&self.0))
    }
}

/// `ε₀ = (1, β, 0, 0)`, `ε₁ = (1, -β, 0, 0)`.
pub fn symmetric_attack(beta: f64) -> Result<[AttackElement; 2]> {
    unit_interval("beta", beta)?;
    Ok([
        AttackElement::new(QubitVector::new([1.0, beta, 0.0, 0.0]))?,
        AttackElement::new(QubitVector::new([1.0, -beta, 0.0, 0.0]))?,
    ])
}

/// Joint probabilities `(p(0, m), p(1, m))`.
pub fn joint_probs(eps: &AttackElement, sc: &Scenario) -> (f64, f64) {
    (0.25 * eps.0.dot(&sc.v0), 0.25 * eps.0.dot(&sc.v1))
}

fn check_joint(p: f64, q: f64) -> Result<()> {
    if p.is_nan() || q.is_nan() || p < 0.0 || q < 0.0 || p + q <= 0.0 {
        return Err(ConalError::Domain(format!(
            "joint probabilities ({p}, {q}) must be non-negative, not both zero"
        )));
    }
    Ok(())
}

fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Information contribution of an outcome with joint probabilities `p`, `q`:
/// `-(p+q)log₂(p+q) + p log₂(2p) + q log₂(2q)`.
pub fn info_contribution(p: f64, q: f64) -> Result<f64> {
    check_joint(p, q)?;
    // p log₂(2p) = p + p log₂ p
    Ok(p + q + xlog2x(p) + xlog2x(q) - xlog2x(p + q))
}

/// Angles describing one outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleSet {
    /// Bloch angle between the prepared states.
    pub theta: f64,
    /// Bloch angle between the post-measurement states.
    pub theta_m: f64,
    /// `theta - theta_m`.
    pub delta_m: f64,
    /// Angle of the repaired bisector towards `v0`.
    pub omega_m: f64,
}

/// `cos θ_m = 1 - η(ε,ε)η(v0,v1) / ((ε·v0)(ε·v1))`.
pub fn post_angle(eps: &AttackElement, sc: &Scenario) -> Result<AngleSet> {
    let (p, q) = joint_probs(eps, sc);
    if p.min(q) <= PROBABILITY_FLOOR {
        return Err(ConalError::Domain(
            "post angle undefined: an input state is never mapped to this outcome".into(),
        ));
    }
    let cos_m = 1.0 - eps.0.minkowski_norm() * sc.eta01() / (16.0 * p * q);
    let theta = sc.theta();
    let theta_m = cos_m.clamp(-1.0, 1.0).acos();
    let delta_m = theta - theta_m;
    let repair = optimal_repair(p, q, delta_m)?;
    Ok(AngleSet {
        theta,
        theta_m,
        delta_m,
        omega_m: repair.omega,
    })
}

/// Best in-plane repair of one outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Repair {
    pub omega: f64,
    pub disturbance: f64,
}

/// Disturbance of an outcome repaired with bisector angle `omega`, each state
/// being misaligned by `half_gap` before repair:
/// `p sin²((h-ω)/2) + q sin²((h+ω)/2)`.
pub fn repaired_disturbance(p: f64, q: f64, half_gap: f64, omega: f64) -> f64 {
    p * (0.5 * (half_gap - omega)).sin().powi(2) + q * (0.5 * (half_gap + omega)).sin().powi(2)
}

/// Minimizes [`repaired_disturbance`] in closed form.
///
/// `delta_m` is the full gap `θ - θ_m`; each state is off by `h = delta_m/2`.
/// With `R = √(p² + q² + 2pq cos 2h)`: `sin ω = (p-q) sin h / R` and
/// `D_m = (p + q - R)/2`. A vanishing `R` gives `ω = 0`.
pub fn optimal_repair(p: f64, q: f64, delta_m: f64) -> Result<Repair> {
    check_joint(p, q)?;
    let h = 0.5 * delta_m;
    let y = (p - q) * h.sin();
    let x = (p + q) * h.cos();
    let r = x.hypot(y);
    let omega = if r == 0.0 { 0.0 } else { y.atan2(x) };
    // p + q - R loses digits when the repair is nearly perfect; evaluate the
    // residual directly instead.
    Ok(Repair {
        omega,
        disturbance: repaired_disturbance(p, q, h, omega),
    })
}

/// Per-outcome terms of a tradeoff point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutcomeTerms {
    pub p: f64,
    pub q: f64,
    pub info: f64,
    pub disturbance: f64,
    pub angles: AngleSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub c: f64,
    pub beta: f64,
    /// Bits.
    pub info: f64,
    pub disturbance: f64,
    pub per_outcome: Vec<OutcomeTerms>,
}

/// Terms for one outcome from the analytic route. An outcome that one of
/// the states never reaches is perfectly repairable and collapses to
/// `θ_m = 0`.
pub fn outcome_terms(eps: &AttackElement, sc: &Scenario) -> Result<OutcomeTerms> {
    let (p, q) = joint_probs(eps, sc);
    let info = info_contribution(p.max(0.0), q.max(0.0))?;
    let angles = if p.min(q) <= PROBABILITY_FLOOR {
        let theta = sc.theta();
        AngleSet {
            theta,
            theta_m: 0.0,
            delta_m: theta,
            omega_m: optimal_repair(p.max(0.0), q.max(0.0), theta)?.omega,
        }
    } else {
        post_angle(eps, sc)?
    };
    let repair = optimal_repair(p.max(0.0), q.max(0.0), angles.delta_m)?;
    Ok(OutcomeTerms {
        p,
        q,
        info,
        disturbance: repair.disturbance,
        angles,
    })
}

/// Closed-form disturbance of the symmetric attack.
pub fn closed_form_disturbance(c: f64, beta: f64) -> f64 {
    let c2 = c * c;
    let b2 = beta * beta;
    let inner = (c2 - c2 * c2) * (b2 - 2.0 + 2.0 * (1.0 - b2).max(0.0).sqrt());
    (0.5 - 0.5 * (1.0 + inner).sqrt()).max(0.0)
}

/// Closed-form information (bits) of the symmetric attack.
pub fn closed_form_info(c: f64, beta: f64) -> f64 {
    let bc = beta * c;
    0.5 * (xlog2x(1.0 + bc) + xlog2x(1.0 - bc))
}

pub fn closed_form_point(c: f64, beta: f64) -> Result<TradeoffPoint> {
    let sc = make_scenario(c)?;
    let attack = symmetric_attack(beta)?;
    let per_outcome = attack
        .iter()
        .map(|e| outcome_terms(e, &sc))
        .collect::<Result<Vec<_>>>()?;
    Ok(TradeoffPoint {
        c,
        beta,
        info: closed_form_info(c, beta),
        disturbance: closed_form_disturbance(c, beta),
        per_outcome,
    })
}

/// Two prepared Bloch vectors, their post-measurement images, and the joint
/// probabilities of one outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepairGeometry {
    pub p: f64,
    pub q: f64,
    pub b0: Vector3<f64>,
    pub b1: Vector3<f64>,
    pub r0: Vector3<f64>,
    pub r1: Vector3<f64>,
}

fn unit_or_perpendicular(v: Vector3<f64>, other: &Vector3<f64>) -> Vector3<f64> {
    let n = v.norm();
    if n > 1e-9 {
        return v / n;
    }
    // Any unit vector orthogonal to `other`, preferring the axis it leans on
    // least so the choice is stable.
    let axis = (0..3)
        .min_by(|&i, &j| other[i].abs().total_cmp(&other[j].abs()))
        .unwrap_or(0);
    let mut e = Vector3::zeros();
    e[axis] = 1.0;
    let on = other.norm_squared();
    let w = if on > 0.0 { e - other * (other.dot(&e) / on) } else { e };
    w.normalize()
}

/// Orthonormal in-plane frame: bisector of `a`, `b` and the unit difference.
fn frame(a: &Vector3<f64>, b: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let diff = unit_or_perpendicular(a - b, &(a + b));
    let bis = unit_or_perpendicular(a + b, &diff);
    // Re-orthogonalize so both are exact even in fallback branches.
    let diff = unit_or_perpendicular(diff - bis * bis.dot(&diff), &bis);
    (bis, diff)
}

impl RepairGeometry {
    /// Disturbance after applying `rot` to the post-measurement states.
    pub fn disturbance(&self, rot: &Matrix3<f64>) -> f64 {
        0.5 * (self.p * (1.0 - self.b0.dot(&(rot * self.r0))) + self.q * (1.0 - self.b1.dot(&(rot * self.r1))))
    }

    /// Rotation taking the post-state bisector to angle `omega` from the
    /// prepared bisector, towards `b0`, within the prepared plane.
    pub fn in_plane_rotation(&self, omega: f64) -> Matrix3<f64> {
        let (e1, e2) = frame(&self.b0, &self.b1);
        let (rb, rn) = frame(&self.r0, &self.r1);
        let (c, s) = (omega.cos(), omega.sin());
        let f1 = e1 * c + e2 * s;
        let f2 = e2 * c - e1 * s;
        let target = Matrix3::from_columns(&[f1, f2, f1.cross(&f2)]);
        let source = Matrix3::from_columns(&[rb, rn, rb.cross(&rn)]);
        target * source.transpose()
    }

    /// Numerically optimal in-plane repair.
    pub fn in_plane_optimum(&self) -> Repair {
        let m = scan_then_golden(|w| self.disturbance(&self.in_plane_rotation(w)), -PI, PI, 72, 1e-11);
        Repair {
            omega: m.x,
            disturbance: m.value,
        }
    }

    /// Smallest disturbance over a `n × n/2 × n` grid of ZYZ Euler angles.
    pub fn so3_scan(&self, n: usize) -> f64 {
        let n = n.max(4);
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = 2.0 * PI * i as f64 / n as f64;
            for j in 0..=n / 2 {
                let b = PI * j as f64 / (n / 2) as f64;
                for k in 0..n {
                    let g = 2.0 * PI * k as f64 / n as f64;
                    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), a)
                        * Rotation3::from_axis_angle(&Vector3::y_axis(), b)
                        * Rotation3::from_axis_angle(&Vector3::z_axis(), g);
                    best = best.min(self.disturbance(rot.matrix()));
                }
            }
        }
        best
    }
}

fn bloch(v: &QubitVector) -> Vector3<f64> {
    Vector3::from(v.spatial())
}

/// End-to-end evaluation of one outcome: `√E` by the qubit closed form,
/// post-states by sandwiching, repair by numeric minimization over the
/// in-plane rotation angle.
pub fn pipeline_outcome(eps: &AttackElement, sc: &Scenario) -> Result<Option<OutcomeTerms>> {
    let root = sqrt_vec(&eps.0)?;
    let u0 = sandwich(&root, &sc.v0);
    let u1 = sandwich(&root, &sc.v1);
    // Unrescaled heights are p(m|x); priors are ½.
    let (p, q) = (0.5 * u0.height(), 0.5 * u1.height());
    if p + q <= PROBABILITY_FLOOR {
        return Ok(None);
    }
    let rescale = |u: &QubitVector, joint: f64| (joint > PROBABILITY_FLOOR).then(|| bloch(u) / u.height());
    let (r0, r1) = match (rescale(&u0, p), rescale(&u1, q)) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a, a),
        (None, Some(b)) => (b, b),
        (None, None) => unreachable!("p + q above the floor"),
    };
    let geom = RepairGeometry {
        p: p.max(0.0),
        q: q.max(0.0),
        b0: bloch(&sc.v0),
        b1: bloch(&sc.v1),
        r0,
        r1,
    };
    let repair = geom.in_plane_optimum();
    let theta = sc.theta();
    let theta_m = match post_inner_products(&eps.0, &sc.v0, &sc.v1).and_then(|ip| ip.rescaled3()) {
        Ok(cos_m) => cos_m.clamp(-1.0, 1.0).acos(),
        Err(_) => 0.0,
    };
    Ok(Some(OutcomeTerms {
        p,
        q,
        info: info_contribution(geom.p, geom.q)?,
        disturbance: repair.disturbance,
        angles: AngleSet {
            theta,
            theta_m,
            delta_m: theta - theta_m,
            omega_m: repair.omega,
        },
    }))
}

fn assemble(c: f64, beta: f64, per_outcome: Vec<OutcomeTerms>) -> TradeoffPoint {
    TradeoffPoint {
        c,
        beta,
        info: per_outcome.iter().map(|t| t.info).sum(),
        disturbance: per_outcome.iter().map(|t| t.disturbance).sum(),
        per_outcome,
    }
}

/// The symmetric attack evaluated through the end-to-end pipeline.
pub fn pipeline_point(c: f64, beta: f64) -> Result<TradeoffPoint> {
    let sc = make_scenario(c)?;
    let attack = symmetric_attack(beta)?;
    let mut terms = Vec::with_capacity(2);
    for e in &attack {
        if let Some(t) = pipeline_outcome(e, &sc)? {
            terms.push(t);
        }
    }
    Ok(assemble(c, beta, terms))
}

/// Total `(I, D)` of the two-outcome attack `{ε₀, (2,0,0,0) - ε₀}` via the
/// analytic per-outcome route.
pub fn attack_totals(eps0: &QubitVector, sc: &Scenario) -> Result<(f64, f64)> {
    let e0 = AttackElement::new(*eps0)?;
    let e1 = e0.complement()?;
    let t0 = outcome_terms(&e0, sc)?;
    let t1 = outcome_terms(&e1, sc)?;
    Ok((t0.info + t1.info, t0.disturbance + t1.disturbance))
}

/// `(I_m, D_m)` of a single outcome as a function of its own effect.
fn single_outcome(eps: &QubitVector, sc: &Scenario) -> Result<(f64, f64)> {
    let t = outcome_terms(&AttackElement::new(*eps)?, sc)?;
    Ok((t.info, t.disturbance))
}

/// Central-difference gradient of `f` at `x`, halving the step whenever a
/// probe leaves the domain.
fn gradient<F>(f: F, x: &QubitVector, h: f64) -> Result<([[f64; 4]; 2], f64)>
where
    F: Fn(&QubitVector) -> Result<(f64, f64)>,
{
    let mut step = h;
    'retry: for _ in 0..20 {
        let mut g = [[0.0; 4]; 2];
        for mu in 0..4 {
            let mut plus = x.0;
            let mut minus = x.0;
            plus[mu] += step;
            minus[mu] -= step;
            let (Ok(fp), Ok(fm)) = (f(&QubitVector::new(plus)), f(&QubitVector::new(minus))) else {
                step *= 0.5;
                continue 'retry;
            };
            g[0][mu] = (fp.0 - fm.0) / (2.0 * step);
            g[1][mu] = (fp.1 - fm.1) / (2.0 * step);
        }
        return Ok((g, step));
    }
    Err(ConalError::Domain(
        "no admissible finite-difference step: attack sits on the cone boundary".into(),
    ))
}

/// Sign relating the single-outcome gradients at `ε` and its mirror image:
/// flipping the component along the state-separation axis swaps `p` and `q`.
pub const MIRROR_SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationarityReport {
    pub c: f64,
    pub beta: f64,
    /// Step actually used.
    pub h: f64,
    /// `∂D/∂ε₀` with `ε₁ = (2,0,0,0) - ε₀`.
    pub grad_d: [f64; 4],
    /// `∂I/∂ε₀` under the same coupling.
    pub grad_i: [f64; 4],
    /// Norm of `grad_d` after projecting out `grad_i`.
    pub constrained_residual: f64,
    /// Largest `|∂I₀/∂ε₀_μ - s_μ ∂I₁/∂ε₁_μ|`.
    pub mirror_info_residual: f64,
    /// Largest `|∂D₀/∂ε₀_μ - s_μ ∂D₁/∂ε₁_μ|`.
    pub mirror_disturbance_residual: f64,
    /// Largest component of `grad_i` off the separation axis, relative to its
    /// norm; zero means the constant-I constraint pins that one component.
    pub info_off_axis: f64,
}

impl StationarityReport {
    pub fn passes(&self, derivative_tol: f64, mirror_tol: f64) -> bool {
        self.constrained_residual <= derivative_tol
            && self.mirror_info_residual <= mirror_tol
            && self.mirror_disturbance_residual <= mirror_tol
    }
}

/// Checks that the symmetric attack is a stationary point of `D` at fixed
/// `I`, under perturbations `δε₀ = -δε₁`.
pub fn stationarity_check(c: f64, beta: f64, h: f64) -> Result<StationarityReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(ConalError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must lie strictly inside (0, 1)",
        });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(ConalError::InvalidParameter {
            name: "h",
            value: h,
            reason: "step must be positive",
        });
    }
    let sc = make_scenario(c)?;
    let [e0, e1] = symmetric_attack(beta)?;

    let (total, step_total) = gradient(|x| attack_totals(x, &sc), &e0.vector(), h)?;
    let (g0, step0) = gradient(|x| single_outcome(x, &sc), &e0.vector(), h)?;
    let (g1, step1) = gradient(|x| single_outcome(x, &sc), &e1.vector(), h)?;

    let grad_i = total[0];
    let grad_d = total[1];
    let ni = grad_i.iter().map(|x| x * x).sum::<f64>().sqrt();
    let constrained_residual = if ni > 0.0 {
        let along = grad_d.iter().zip(&grad_i).map(|(d, i)| d * i).sum::<f64>() / ni;
        grad_d
            .iter()
            .zip(&grad_i)
            .map(|(d, i)| (d - along * i / ni).powi(2))
            .sum::<f64>()
            .sqrt()
    } else {
        grad_d.iter().map(|x| x * x).sum::<f64>().sqrt()
    };
    let mirror = |k: usize| {
        (0..4)
            .map(|mu| (g0[k][mu] - MIRROR_SIGNS[mu] * g1[k][mu]).abs())
            .fold(0.0, f64::max)
    };
    let info_off_axis = if ni > 0.0 {
        [0, 2, 3].iter().map(|&mu| grad_i[mu].abs()).fold(0.0, f64::max) / ni
    } else {
        0.0
    };
    Ok(StationarityReport {
        c,
        beta,
        h: step_total.min(step0).min(step1),
        grad_d,
        grad_i,
        constrained_residual,
        mirror_info_residual: mirror(0),
        mirror_disturbance_residual: mirror(1),
        info_off_axis,
    })
}

/// Result of a β sweep at fixed `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    /// Closed-form points, sorted by β.
    pub points: Vec<TradeoffPoint>,
    /// Largest closed-form/pipeline disagreement in `I` or `D`, when verified.
    pub worst_residual: Option<f64>,
}

impl Sweep {
    pub fn verified(&self, tol: f64) -> bool {
        self.worst_residual.is_none_or(|r| r <= tol)
    }
}

/// Closed-form points over `betas`, each optionally cross-checked against
/// [`pipeline_point`].
pub fn sweep(c: f64, betas: &[f64], verify: bool, exec: Execution) -> Result<Sweep> {
    let rows = exec::map_slice(exec, betas, |&beta| -> Result<(TradeoffPoint, f64)> {
        let point = closed_form_point(c, beta)?;
        let residual = if verify {
            let pipe = pipeline_point(c, beta)?;
            (point.info - pipe.info)
                .abs()
                .max((point.disturbance - pipe.disturbance).abs())
        } else {
            0.0
        };
        Ok((point, residual))
    });
    let mut points = Vec::with_capacity(rows.len());
    let mut worst: f64 = 0.0;
    for row in rows {
        let (p, r) = row?;
        worst = worst.max(r);
        points.push(p);
    }
    points.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    Ok(Sweep {
        points,
        worst_residual: verify.then_some(worst),
    })
}
