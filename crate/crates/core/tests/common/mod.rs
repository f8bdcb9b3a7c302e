//! Reference computations that avoid the library's own routes: explicit
//! Pauli matrices, loop-based traces, and a spectral 2×2 square root.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const PAULI: [M2; 4] = [
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
    [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
];

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &M2, b: &M2) -> M2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(a: &M2, s: f64) -> M2 {
    let mut out = *a;
    for row in out.iter_mut() {
        for z in row.iter_mut() {
            *z *= s;
        }
    }
    out
}

pub fn trace(a: &M2) -> Complex64 {
    a[0][0] + a[1][1]
}

/// `½ Σ v_μ σ_μ`.
pub fn from_vec(v: [f64; 4]) -> M2 {
    (0..4).fold([[c(0.0, 0.0); 2]; 2], |acc, mu| {
        add(&acc, &scale(&PAULI[mu], 0.5 * v[mu]))
    })
}

/// `Tr(A σ_μ)`.
pub fn to_vec(a: &M2) -> [f64; 4] {
    std::array::from_fn(|mu| trace(&mul(a, &PAULI[mu])).re)
}

/// Spectral square root of a PSD 2×2 matrix given in Pauli coordinates.
pub fn sqrt_vec_spectral(v: [f64; 4]) -> M2 {
    let r = (v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt();
    if r < 1e-300 {
        return scale(&PAULI[0], (0.5 * v[0]).sqrt());
    }
    let (hi, lo) = (0.5 * (v[0] + r), (0.5 * (v[0] - r)).max(0.0));
    let n = [v[1] / r, v[2] / r, v[3] / r];
    // P± = ½(𝕀 ± n·σ)
    let proj = |sign: f64| from_vec([1.0, sign * n[0], sign * n[1], sign * n[2]]);
    add(&scale(&proj(1.0), hi.sqrt()), &scale(&proj(-1.0), lo.sqrt()))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn eta(a: &[f64], b: &[f64]) -> f64 {
    let d = (a.len() as f64).sqrt();
    (d - 1.0) * a[0] * b[0] - dot(&a[1..], &b[1..])
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `Tr(AB)` by explicit index loops.
pub fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let d = a.nrows();
    let mut t = c(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            t += a[(i, k)] * b[(k, i)];
        }
    }
    t
}

/// Purity `Tr(ρ²)` from explicit entries.
pub fn purity(rho: &DMatrix<Complex64>) -> f64 {
    trace_product(rho, rho).re
}

/// Closed forms for the symmetric attack, retyped from the analytic result.
pub fn reference_info(c: f64, beta: f64) -> f64 {
    let f = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    0.5 * (f(1.0 + beta * c) + f(1.0 - beta * c))
}

pub fn reference_disturbance(c: f64, beta: f64) -> f64 {
    let k = c * c - c.powi(4);
    0.5 - 0.5 * (1.0 + k * (beta * beta - 2.0 + 2.0 * (1.0 - beta * beta).sqrt())).sqrt()
}
