use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::deformed::{QuadResult, Window};
use super::gauss::panel_rule;
use crate::{Error, Result};

/// Grid parameters of the residue-reduced wake oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct KelvinOracleSpec {
    /// Half-width of the `(ξ1, ξ2)` box.
    pub radius: f64,
    /// Separate half-width in `ξ2`; points near the axis put the
    /// transverse-family stationary point far out in `ξ2`.
    pub radius2: Option<f64>,
    pub window: Window,
    /// The disc `|ξ| < origin_cutoff / 2` is left out, with a smooth
    /// transition out to `origin_cutoff`; `0` keeps the origin.
    pub origin_cutoff: f64,
    pub panel_order: usize,
    /// Panel width is `min(max_panel, phase_per_panel / f)` with `f` the
    /// local phase rate along the axis.
    pub phase_per_panel: f64,
    pub max_panel: f64,
}

impl Default for KelvinOracleSpec {
    fn default() -> Self {
        KelvinOracleSpec {
            radius: 12.0,
            radius2: None,
            window: Window::Smooth { fraction: 0.5 },
            origin_cutoff: 0.3,
            panel_order: 16,
            phase_per_panel: 24.0,
            max_panel: 0.5,
        }
    }
}

const COLLISION_TOL: f64 = 1e-8;

/// Panels on `[−R, R]`, symmetric about `0`, narrowing towards the origin
/// where `e^{−iΛτ√|ξ|}` oscillates fastest.
fn graded_breaks(spec: &KelvinOracleSpec, radius: f64, rate: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut pos = vec![0.0];
    let mut x: f64 = 0.0;
    while x < radius {
        x += spec.max_panel.min(spec.phase_per_panel / rate(x));
        pos.push(x.min(radius));
    }
    let n = pos.len();
    if n > 2 && pos[n - 1] - pos[n - 2] < 0.25 * (pos[n - 2] - pos[n - 3]) {
        pos.remove(n - 2);
    }
    let mut breaks: Vec<f64> = pos[1..].iter().rev().map(|x| -x).collect();
    breaks.extend(pos);
    breaks
}

fn axis_rule(spec: &KelvinOracleSpec, radius: f64, breaks: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, mut w) = panel_rule(breaks, order);
    for (wi, xi) in w.iter_mut().zip(&x) {
        *wi *= spec.window.weight(*xi, radius);
    }
    (x, w)
}

/// Sum of `−2πi·Res` over the real poles in `ϖ`, divided by `−2πi`:
/// `ξ1 e^{−iΛξ1τ}/(ξ1² − k) + Σ_± e^{∓iΛ√k τ}/(2(±√k − ξ1))`, `k = |ξ|`.
fn residue_sum(x1: f64, x2: f64, lt: f64) -> Option<Complex64> {
    let k = x1.hypot(x2);
    let sk = k.sqrt();
    if (x1.abs() - sk).abs() <= COLLISION_TOL {
        return None;
    }
    let e1 = Complex64::from_polar(1.0, -lt * x1);
    let ek = Complex64::from_polar(1.0, -lt * sk);
    Some(e1 * (x1 / (x1 * x1 - k)) + ek / (2.0 * (sk - x1)) + ek.conj() / (2.0 * (-sk - x1)))
}

fn grid_sum(
    z: (f64, f64),
    lambda: f64,
    lt: f64,
    cutoff: f64,
    r1: &(Vec<f64>, Vec<f64>),
    r2: &(Vec<f64>, Vec<f64>),
) -> Result<(Complex64, f64)> {
    let (z1, z2) = z;
    let hole = Window::Smooth { fraction: 0.5 };
    let (x1, w1) = r1;
    let (x2, w2) = r2;
    let col: Vec<Complex64> = x2
        .iter()
        .zip(w2)
        .map(|(&x, &w)| Complex64::from_polar(w, lambda * z2 * x))
        .collect();
    let rows: Vec<Result<(Complex64, f64)>> = (0..x1.len())
        .into_par_iter()
        .map(|i| {
            if w1[i] == 0.0 {
                return Ok((Complex64::new(0.0, 0.0), 0.0));
            }
            let mut s = Complex64::new(0.0, 0.0);
            let mut a = 0.0;
            for (j, &c) in col.iter().enumerate() {
                if w2[j] == 0.0 {
                    continue;
                }
                let mut chi = 1.0;
                if cutoff > 0.0 {
                    let r = x1[i].hypot(x2[j]);
                    if r < cutoff {
                        chi = 1.0 - hole.weight(r, cutoff);
                        if chi == 0.0 {
                            continue;
                        }
                    }
                }
                let mut xi1 = x1[i];
                let d = match residue_sum(xi1, x2[j], lt) {
                    Some(d) => d,
                    None => {
                        xi1 += 16.0 * COLLISION_TOL;
                        residue_sum(xi1, x2[j], lt).ok_or(Error::PoleCollision)?
                    }
                };
                let v = c * d * (xi1 * chi);
                s += v;
                a += v.norm();
            }
            let e = Complex64::from_polar(w1[i], lambda * z1 * x1[i]);
            Ok((s * e, a * w1[i]))
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for r in rows {
        let (s, a) = r?;
        total += s;
        abs += a;
    }
    Ok((total, abs))
}

/// Dimensionless wake integral at `(z1, z2, τ)`, prefactor included.
///
/// The `ϖ` integral is closed around its real poles, leaving a windowed
/// two-dimensional quadrature over `(ξ1, ξ2)`.
pub fn kelvin_oracle(z1: f64, z2: f64, tau: f64, lambda: f64, spec: &KelvinOracleSpec) -> Result<QuadResult> {
    if !(lambda > 0.0) || ![z1, z2, tau].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidSpec("wake oracle needs finite z and Λ > 0".into()));
    }
    if !(spec.radius > 0.0 && spec.radius2.map_or(true, |r| r > 0.0)) {
        return Err(Error::InvalidSpec("wake oracle radius must be positive".into()));
    }
    if spec.panel_order < 2 || spec.panel_order % 2 != 0 {
        return Err(Error::InvalidSpec("panel order must be even".into()));
    }
    // All poles are real and Γ passes above them. For τ ≤ 0 the contour
    // closes upward and encloses none.
    if tau <= 0.0 {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    if !(spec.origin_cutoff >= 0.0) {
        return Err(Error::InvalidSpec("origin cutoff must be non-negative".into()));
    }
    // linear phase rates along each axis, plus the rate of τ√|ξ|
    let a1 = (tau - z1).abs().max(z1.abs()) + 2.0;
    let a2 = z2.abs() + 2.0;
    let floor = (spec.origin_cutoff / 4.0).max(1e-3);
    let radial = |x: f64| tau / (2.0 * x.max(floor).sqrt());
    let (r1, r2) = (spec.radius, spec.radius2.unwrap_or(spec.radius));
    let b1 = graded_breaks(spec, r1, |x| lambda * (a1 + radial(x)));
    let b2 = graded_breaks(spec, r2, |x| lambda * (a2 + radial(x)));
    let lt = lambda * tau;
    let sum = |order: usize| {
        grid_sum(
            (z1, z2),
            lambda,
            lt,
            spec.origin_cutoff,
            &axis_rule(spec, r1, &b1, order),
            &axis_rule(spec, r2, &b2, order),
        )
    };
    let fine = sum(spec.panel_order)?;
    let coarse = sum(spec.panel_order / 2)?;
    let scale = 1.0 / (4.0 * PI * PI);
    let value = fine.0 * scale;
    let error = (fine.0 - coarse.0).norm() * scale + 64.0 * f64::EPSILON * fine.1 * scale;
    Ok(QuadResult { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_sum_is_finite_near_merges() {
        // ξ1 = √k on ξ1⁴ = ξ1² + ξ2²; approach it from both sides
        let x1: f64 = 1.3;
        let x2 = (x1.powi(4) - x1 * x1).sqrt();
        let a = residue_sum(x1 + 1e-5, x2, 7.0).unwrap();
        let b = residue_sum(x1 - 1e-5, x2, 7.0).unwrap();
        assert!((a - b).norm() < 1e-3 * a.norm().max(1.0));
        assert!(residue_sum(x1, x2, 7.0).is_none());
    }

    #[test]
    fn negative_time_is_silent() {
        let r = kelvin_oracle(2.0, 0.5, -10.0, 20.0, &KelvinOracleSpec::default()).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }
}
