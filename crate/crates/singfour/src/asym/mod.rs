//! Leading-order contributions of special points.

pub mod frame;
mod gamma;

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

pub use frame::{local_frame, local_frame_cone, local_frame_double, local_frame_interior, local_frame_single, local_frame_triple, LocalFrame};
pub use gamma::{gamma_factor, lower_branch_power};

use crate::detect::{eval_real, Detection, PointKind, SpecialPoint};
use crate::geometry::to_complex;
use crate::problem::{real_power, AmplitudeSpec, DomainShift, ProblemSpec, Side};
use crate::{Error, Result};

/// `A · Λ^p · e^{iΛ·phase0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticTerm {
    pub coeff: Complex64,
    pub power: f64,
    pub phase0: f64,
    pub source: SpecialPoint,
}

impl AsymptoticTerm {
    pub fn eval(&self, lambda: f64) -> Complex64 {
        self.coeff * lambda.powf(self.power) * Complex64::from_polar(1.0, lambda * self.phase0)
    }
}

fn quarter_turns(signs: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI / 4.0 * signs)
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `α^{−μ}`, the scale picked up by `g^μ` under `w = α·g`; for `α < 0` the
/// branch is the one continuous with the shifted domain below `w = 0`.
pub fn alpha_power(alpha: f64, mu: f64) -> Complex64 {
    if mu == -1.0 {
        return Complex64::new(alpha, 0.0);
    }
    let m = alpha.abs().powf(-mu);
    if alpha > 0.0 {
        Complex64::new(m, 0.0)
    } else {
        Complex64::from_polar(m, PI * mu)
    }
}

/// Interior stationary point: `F·e^{iπ/4 Σ sgn β}(2π)^{3/2}|J|/√|β1β2β3|`.
pub fn interior_coefficient(f: Complex64, betas: [f64; 3], jacobian: f64) -> Complex64 {
    let s: f64 = betas.iter().map(|&b| sign(b)).sum();
    let det = betas.iter().product::<f64>().abs();
    f * quarter_turns(s) * (2.0 * PI).powf(1.5) * jacobian.abs() / det.sqrt()
}

/// Stationary point on one surface.
pub fn surface_coefficient(c: Complex64, mu: f64, betas: [f64; 2], jacobian: f64) -> Result<Complex64> {
    let s = sign(betas[0]) + sign(betas[1]);
    let det = (betas[0] * betas[1]).abs();
    Ok(c * gamma_factor(mu)? * quarter_turns(s) * 2.0 * PI * jacobian.abs() / det.sqrt())
}

/// Stationary point on a crossing line.
pub fn crossing_coefficient(c: Complex64, mus: [f64; 2], beta: f64, jacobian: f64) -> Result<Complex64> {
    Ok(c * gamma_factor(mus[0])? * gamma_factor(mus[1])? * quarter_turns(sign(beta)) * (2.0 * PI).sqrt()
        * jacobian.abs()
        / beta.abs().sqrt())
}

/// Triple crossing.
pub fn triple_coefficient(c: Complex64, mus: [f64; 3], jacobian: f64) -> Result<Complex64> {
    let mut a = c * jacobian.abs();
    for mu in mus {
        a *= gamma_factor(mu)?;
    }
    Ok(a)
}

/// Conical point of a simple pole on the quadric; `None` when `∇G` lies
/// outside the cone.
pub fn cone_coefficient(c: Complex64, alphas: [f64; 3], jacobian: f64) -> Result<Option<Complex64>> {
    let q = alphas[2] * alphas[2] - alphas[0] * alphas[0] - alphas[1] * alphas[1];
    let scale = alphas.iter().map(|a| a * a).sum::<f64>();
    if q.abs() <= 1e-9 * scale {
        return Err(Error::Indeterminate("α3² − α1² − α2²"));
    }
    if q < 0.0 {
        return Ok(None);
    }
    Ok(Some(c * 4.0 * PI * PI * jacobian.abs() / q.sqrt()))
}

/// Local coefficient `C`: the amplitude with the incident factors replaced by
/// their canonical powers `w_k^{μ_k}`.
pub fn local_coefficient(amplitude: &AmplitudeSpec, shift: &DomainShift, frame: &LocalFrame) -> Result<Complex64> {
    let x = frame.location;
    let mut c = amplitude.smooth.value(&to_complex(&x));
    for (k, comp) in amplitude.components.iter().enumerate() {
        if let Some(pos) = frame.components.iter().position(|&j| j == k) {
            if frame.kind == PointKind::Conical {
                if comp.mu != -1.0 {
                    return Err(Error::UnsupportedExponent(comp.mu));
                }
                c *= frame.quadric_sign;
            } else {
                c *= alpha_power(frame.alphas[pos], comp.mu);
            }
        } else {
            let l = eval_real(comp.g.as_ref(), &x);
            let side = Side::from_sign(shift.eta().dot(&l.grad));
            c *= real_power(l.value, comp.mu, side);
        }
    }
    Ok(c)
}

fn mus(amplitude: &AmplitudeSpec, frame: &LocalFrame) -> Vec<f64> {
    frame.components.iter().map(|&k| amplitude.components[k].mu).collect()
}

fn check_verdict(sp: &SpecialPoint) -> Result<bool> {
    sp.verdict.as_ref().map(|v| v.contributes).ok_or(Error::MissingVerdict)
}

fn term(sp: &SpecialPoint, frame: &LocalFrame, coeff: Complex64, power: f64) -> AsymptoticTerm {
    AsymptoticTerm { coeff, power, phase0: frame.phase0, source: sp.clone() }
}

pub fn term_sp_interior(sp: &SpecialPoint, frame: &LocalFrame, amplitude: &AmplitudeSpec) -> Result<Option<AsymptoticTerm>> {
    if !check_verdict(sp)? {
        return Ok(None);
    }
    let f = amplitude.eval(&to_complex(&frame.location));
    if f.norm() == 0.0 {
        warn!("amplitude vanishes at interior point {:?}", frame.location);
    }
    let b = [frame.betas[0], frame.betas[1], frame.betas[2]];
    Ok(Some(term(sp, frame, interior_coefficient(f, b, frame.jacobian), -1.5)))
}

pub fn term_sp_surface(
    sp: &SpecialPoint,
    frame: &LocalFrame,
    amplitude: &AmplitudeSpec,
    shift: &DomainShift,
) -> Result<Option<AsymptoticTerm>> {
    if !check_verdict(sp)? {
        return Ok(None);
    }
    let mu = mus(amplitude, frame)[0];
    let c = local_coefficient(amplitude, shift, frame)?;
    let a = surface_coefficient(c, mu, [frame.betas[0], frame.betas[1]], frame.jacobian)?;
    Ok(Some(term(sp, frame, a, -mu - 2.0)))
}

pub fn term_sp_crossing(
    sp: &SpecialPoint,
    frame: &LocalFrame,
    amplitude: &AmplitudeSpec,
    shift: &DomainShift,
) -> Result<Option<AsymptoticTerm>> {
    if !check_verdict(sp)? {
        return Ok(None);
    }
    let m = mus(amplitude, frame);
    let c = local_coefficient(amplitude, shift, frame)?;
    let a = crossing_coefficient(c, [m[0], m[1]], frame.betas[0], frame.jacobian)?;
    Ok(Some(term(sp, frame, a, -m[0] - m[1] - 2.5)))
}

pub fn term_triple(
    sp: &SpecialPoint,
    frame: &LocalFrame,
    amplitude: &AmplitudeSpec,
    shift: &DomainShift,
) -> Result<Option<AsymptoticTerm>> {
    if !check_verdict(sp)? {
        return Ok(None);
    }
    let m = mus(amplitude, frame);
    let c = local_coefficient(amplitude, shift, frame)?;
    let a = triple_coefficient(c, [m[0], m[1], m[2]], frame.jacobian)?;
    Ok(Some(term(sp, frame, a, -m.iter().sum::<f64>() - 3.0)))
}

pub fn term_cone(
    sp: &SpecialPoint,
    frame: &LocalFrame,
    amplitude: &AmplitudeSpec,
    shift: &DomainShift,
) -> Result<Option<AsymptoticTerm>> {
    if !check_verdict(sp)? {
        return Ok(None);
    }
    let c = local_coefficient(amplitude, shift, frame)?;
    let al = [frame.alphas[0], frame.alphas[1], frame.alphas[2]];
    Ok(cone_coefficient(c, al, frame.jacobian)?.map(|a| term(sp, frame, a, -1.0)))
}

/// Term of one special point (`None` if it does not contribute).
pub fn term_for(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<Option<AsymptoticTerm>> {
    if !check_verdict(sp)? {
        return Ok(None);
    }
    let frame = local_frame(problem, sp)?;
    let (amp, shift) = (&problem.amplitude, &problem.shift);
    match sp.kind {
        PointKind::SpInterior => term_sp_interior(sp, &frame, amp),
        PointKind::SpOnSurface => term_sp_surface(sp, &frame, amp, shift),
        PointKind::SpOnCrossing => term_sp_crossing(sp, &frame, amp, shift),
        PointKind::TripleCrossing => term_triple(sp, &frame, amp, shift),
        PointKind::Conical => term_cone(sp, &frame, amp, shift),
        PointKind::NonSpecial => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    Complex,
    /// Points at `±ξ*` are summed as `2·Re` of one of them.
    RealField,
}

#[derive(Debug, Clone)]
pub struct AsymptoticSum {
    pub estimate: Complex64,
    pub terms: Vec<AsymptoticTerm>,
}

/// The terms of all contributing points, in location order.
pub fn collect_terms(problem: &ProblemSpec, detection: &Detection) -> Result<Vec<AsymptoticTerm>> {
    let flagged = detection.contributing().filter(|p| p.is_degenerate()).count();
    if flagged > 0 {
        return Err(Error::DegenerateConfiguration(flagged));
    }
    let mut terms = Vec::new();
    for sp in detection.contributing() {
        if let Some(t) = term_for(problem, sp)? {
            terms.push(t);
        }
    }
    Ok(terms)
}

/// Sum of precomputed terms at one Λ.
pub fn sum_terms(prefactor: Complex64, terms: &[AsymptoticTerm], lambda: f64, mode: SumMode) -> Complex64 {
    let eval = |t: &AsymptoticTerm| prefactor * t.eval(lambda);
    match mode {
        SumMode::Complex => terms.iter().map(eval).sum(),
        SumMode::RealField => {
            let mut used = vec![false; terms.len()];
            let mut total = Complex64::new(0.0, 0.0);
            for i in 0..terms.len() {
                if used[i] {
                    continue;
                }
                used[i] = true;
                let xi = terms[i].source.location.vector();
                let partner = (i + 1..terms.len()).find(|&j| {
                    !used[j] && terms[j].source.kind == terms[i].source.kind && (terms[j].source.location.vector() + xi).norm() <= 1e-6 * (1.0 + xi.norm())
                });
                match partner {
                    Some(j) => {
                        used[j] = true;
                        // keep the representative with the larger location
                        let rep = if lex_greater(terms[j].source.location.vector(), xi) { j } else { i };
                        total += 2.0 * eval(&terms[rep]).re;
                    }
                    None => total += eval(&terms[i]),
                }
            }
            total
        }
    }
}

fn lex_greater(a: &nalgebra::Vector3<f64>, b: &nalgebra::Vector3<f64>) -> bool {
    (0..3)
        .map(|k| a[k].total_cmp(&b[k]))
        .find(|o| o.is_ne())
        .map_or(false, |o| o.is_gt())
}

/// `prefactor · Σ A_ν Λ^{p_ν} e^{iΛ G_ν}` over contributing points.
pub fn sum_asymptotics(problem: &ProblemSpec, detection: &Detection, lambda: f64, mode: SumMode) -> Result<AsymptoticSum> {
    let terms = collect_terms(problem, detection)?;
    let estimate = sum_terms(problem.prefactor, &terms, lambda, mode);
    Ok(AsymptoticSum { estimate, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn interior_formula() {
        let one = Complex64::new(1.0, 0.0);
        let a = interior_coefficient(one, [1.0, 1.0, 1.0], 1.0);
        assert!(close(a, (2.0 * PI).powf(1.5) * Complex64::from_polar(1.0, 0.75 * PI), 1e-15));
        let a2 = interior_coefficient(one, [1.0, 1.0, 1.0], 2.0);
        assert!(close(a2, a * 2.0, 1e-15));
        let saddle = interior_coefficient(one, [1.0, 1.0, -1.0], 1.0);
        assert!(close(saddle, (2.0 * PI).powf(1.5) * Complex64::from_polar(1.0, 0.25 * PI), 1e-15));
    }

    #[test]
    fn surface_formula_pole_plane() {
        let a = surface_coefficient(Complex64::new(1.0, 0.0), -1.0, [1.0, 1.0], 1.0).unwrap();
        let want = Complex64::new(0.0, 2.0 * PI) * 2.0 * PI * Complex64::i();
        assert!(close(a, want, 1e-15));
    }

    #[test]
    fn crossing_formula_canonical() {
        let a = crossing_coefficient(Complex64::new(1.0, 0.0), [-1.0, -1.0], 1.0, 1.0).unwrap();
        let want = Complex64::new(0.0, 2.0 * PI).powi(2) * (2.0 * PI).sqrt() * Complex64::from_polar(1.0, PI / 4.0);
        assert!(close(a, want, 1e-15));
    }

    #[test]
    fn triple_formula_mixed_exponents() {
        let a = triple_coefficient(Complex64::new(1.0, 0.0), [-1.0, -0.5, -0.5], 1.0).unwrap();
        let half = Complex64::from_polar(2.0 * PI.sqrt(), PI / 4.0);
        assert!(close(a, Complex64::new(0.0, 2.0 * PI) * half * half, 1e-14));
    }

    #[test]
    fn cone_formula_cases() {
        let one = Complex64::new(1.0, 0.0);
        let a = cone_coefficient(one, [0.0, 0.0, 1.0], 1.0).unwrap().unwrap();
        assert!(close(a, Complex64::new(4.0 * PI * PI, 0.0), 1e-15));
        let b = cone_coefficient(one, [0.6, 0.0, 1.0], 1.0).unwrap().unwrap();
        assert!(close(b, Complex64::new(4.0 * PI * PI / 0.8, 0.0), 1e-14));
        assert_eq!(cone_coefficient(one, [1.0, 0.0, 0.5], 1.0).unwrap(), None);
        assert!(cone_coefficient(one, [1.0, 0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn alpha_power_branches() {
        assert_eq!(alpha_power(-2.0, -1.0), Complex64::new(-2.0, 0.0));
        assert!(close(alpha_power(4.0, -0.5), Complex64::new(2.0, 0.0), 1e-15));
        assert!(close(alpha_power(-4.0, -0.5), Complex64::new(0.0, -2.0), 1e-15));
    }
}
