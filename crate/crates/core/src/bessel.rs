//! Modified Bessel function of the second kind for real order.

/// `K_nu(x)` for `x > 0`.
///
/// Uses the integral `e^x K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt`.
/// The integrand is smooth and decays doubly exponentially, so the
/// trapezoid rule converges geometrically in the step size.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0, "bessel_k needs x > 0, got {x}");
    let nu = nu.abs();
    let h = (0.5 / x.sqrt()).min(0.1);
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        sum += f(t);
        if x * (t.cosh() - 1.0) - nu * t > 45.0 {
            break;
        }
        k += 1;
    }
    sum * h * (-x).exp()
}
