//! Gauss–Legendre quadrature: fixed rules, composite panels, and a
//! tangent-substituted rule for integrals over the whole real line.

use crate::C64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre polynomial from the Chebyshev
/// initial guess; accurate to machine precision for the orders used here.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Initial guess: Chebyshev-like approximation to the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_prev = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn_prev) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `panels`
/// equal subintervals of an `order`-point rule each.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for &(x, w) in &rule {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    total * 0.5 * h
}

/// Complex-valued variant of [`integrate`].
pub fn integrate_c<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> C64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = C64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for &(x, w) in &rule {
            total += f(mid + 0.5 * h * x) * w;
        }
    }
    total * C64::new(0.5 * h, 0.0)
}

/// Integral of `f` over the whole real line via the substitution `p = tan u`,
/// `u ∈ (-π/2, π/2)`. Suitable for integrands decaying at least like `1/p²`
/// without oscillation at infinity; the substituted integrand is then smooth
/// and the composite rule converges spectrally.
pub fn integrate_real_line_c<F: FnMut(f64) -> C64>(mut f: F, panels: usize, order: usize) -> C64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    integrate_c(
        |u| {
            let c = u.cos();
            f(u.tan()) / C64::new(c * c, 0.0)
        },
        -half_pi + 1e-14,
        half_pi - 1e-14,
        panels,
        order,
    )
}

/// Half-line variant: integral of `f` over `[0, ∞)` via `s = tan u`.
pub fn integrate_half_line_c<F: FnMut(f64) -> C64>(mut f: F, panels: usize, order: usize) -> C64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    integrate_c(
        |u| {
            let c = u.cos();
            f(u.tan()) / C64::new(c * c, 0.0)
        },
        0.0,
        half_pi - 1e-14,
        panels,
        order,
    )
}
