//! Uniform-grid quadrature helpers and the lifetime-regularized Fourier
//! integral.

/// Symmetric grid `[-half_width, half_width]` with `n` points and trapezoid
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl TimeGrid {
    pub fn symmetric(half_width: f64, n: usize) -> Self {
        assert!(n >= 2, "a grid needs two points");
        let h = 2.0 * half_width / (n - 1) as f64;
        let points = (0..n).map(|i| -half_width + i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        TimeGrid { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Weight of the pair `(i, j)` restricted to `t_i ≤ t_j`, with the
    /// diagonal split evenly so that the ordered sum plus its transpose gives
    /// back the full product rule.
    pub fn ordered_weight(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.weights[i] * self.weights[j],
            Equal => 0.5 * self.weights[i] * self.weights[i],
            Greater => 0.0,
        }
    }
}

/// `∫ e^{−iΔω t} e^{−|t|/Γ} dt = (2/Γ) / ((1/Γ)² + Δω²)`.
pub fn regularized_integral(delta_omega: f64, gamma: f64) -> f64 {
    let r = 1.0 / gamma;
    2.0 * r / (r * r + delta_omega * delta_omega)
}

/// Composite Simpson rule on `[a, b]` with `n` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// Direct quadrature of the regularized integral. The integrand is even in
/// `t` up to conjugation, so only the cosine half-line is needed.
pub fn regularized_integral_numeric(delta_omega: f64, gamma: f64) -> f64 {
    let upper = 50.0 * gamma;
    let cycles = delta_omega.abs() * upper / (2.0 * std::f64::consts::PI);
    let n = (4000.0 + 200.0 * cycles) as usize;
    2.0 * simpson(|t| (delta_omega * t).cos() * (-t / gamma).exp(), 0.0, upper, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_is_two_gamma() {
        assert!((regularized_integral(0.0, 400.0) - 800.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let g = 400.0;
        for dw in [0.0, 1.0 / g, 10.0 / g] {
            let exact = regularized_integral(dw, g);
            let num = regularized_integral_numeric(dw, g);
            assert!((num - exact).abs() / exact < 1e-6, "Δω={dw}: {num} vs {exact}");
        }
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = TimeGrid::symmetric(3.0, 11);
        let s: f64 = g.points.iter().zip(&g.weights).map(|(t, w)| w * (2.0 * t + 1.0)).sum();
        assert!((s - 6.0).abs() < 1e-13);
    }

    #[test]
    fn ordered_weights_sum_to_half() {
        let g = TimeGrid::symmetric(1.0, 9);
        let mut ordered = 0.0;
        let mut full = 0.0;
        for i in 0..9 {
            for j in 0..9 {
                ordered += g.ordered_weight(i, j);
                full += g.weights[i] * g.weights[j];
            }
        }
        assert!((2.0 * ordered - full).abs() < 1e-14);
    }
}
