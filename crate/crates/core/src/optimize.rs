//! Derivative-free scalar minimization.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a one-dimensional minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `x_tol` or stops shrinking in
/// floating point.
pub fn golden_section(f: impl Fn(f64) -> f64, a: f64, b: f64, x_tol: f64) -> Minimum {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 2;

    while b - a > x_tol && evaluations < 500 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
        if !(x1 > a && x2 < b && x1 <= x2) {
            break;
        }
    }

    let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Minimum { x, value, evaluations }
}

/// Global-ish minimization on `[a, b]`: a uniform scan with `grid` cells
/// locates the best cell, then golden-section refines inside the bracket
/// formed by its neighbours.
///
/// Suitable for smooth functions with few local minima (e.g. sinusoids).
pub fn scan_then_golden(f: impl Fn(f64) -> f64, a: f64, b: f64, grid: usize, x_tol: f64) -> Minimum {
    let grid = grid.max(2);
    let step = (b - a) / grid as f64;
    let (best, _) = (0..=grid)
        .map(|i| (i, f(a + step * i as f64)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let lo = a + step * (best.saturating_sub(1)) as f64;
    let hi = a + step * ((best + 1).min(grid)) as f64;
    let mut m = golden_section(&f, lo, hi, x_tol);
    m.evaluations += grid + 1;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let m = golden_section(|x| (x - 0.3).powi(2), -2.0, 5.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-9);
        // An offset caps location accuracy near √ε but not the value.
        let m = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minimum_at_bracket_edge() {
        let m = golden_section(|x| x, 1.0, 2.0, 1e-12);
        assert!((m.x - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_bracket() {
        let m = golden_section(|x| (x + 1.0).powi(2), 3.0, -4.0, 1e-10);
        assert!((m.x + 1.0).abs() < 1e-8);
    }

    #[test]
    fn scan_finds_global_minimum_of_cosine() {
        // -cos(x - 2.5) on [-pi, pi] has its minimum at 2.5.
        let m = scan_then_golden(
            |x| -(x - 2.5).cos(),
            -std::f64::consts::PI,
            std::f64::consts::PI,
            64,
            1e-12,
        );
        assert!((m.x - 2.5).abs() < 1e-7, "{}", m.x);
    }
}
