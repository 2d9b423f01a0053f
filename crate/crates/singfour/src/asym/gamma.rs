use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::problem::is_branch_exponent;
use crate::{Error, Result};

/// `I(μ) = ∫ w^μ e^{iw} dw` along the real line passed below the origin,
/// with `arg w ∈ (−3π/2, π/2]`.
pub fn gamma_factor(mu: f64) -> Result<Complex64> {
    if mu == -1.0 {
        return Ok(Complex64::new(0.0, 2.0 * PI));
    }
    if !mu.is_finite() || !is_branch_exponent(mu) {
        return Err(Error::UnsupportedExponent(mu));
    }
    let phase = Complex64::from_polar(1.0, PI * (mu + 1.0) / 2.0);
    let jump = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * PI * mu);
    Ok(phase * jump * gamma(1.0 + mu))
}

/// `w^μ` on the branch used by [`gamma_factor`].
pub fn lower_branch_power(w: Complex64, mu: f64) -> Complex64 {
    let mut arg = w.arg();
    if arg > PI / 2.0 {
        arg -= 2.0 * PI;
    }
    Complex64::from_polar(w.norm().powf(mu), mu * arg)
}
