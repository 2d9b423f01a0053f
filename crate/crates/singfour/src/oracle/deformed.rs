use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use super::gauss::composite_rule;
use crate::geometry::{volume_form, CVec3};
use crate::problem::{DomainShift, ProblemSpec};
use crate::{Error, Result};

/// Minimum admissible `|g_j|` on the shifted grid.
pub const SINGULARITY_MARGIN: f64 = 1e-3;

/// Truncation window applied per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    None,
    /// Raised-cosine roll-off over the outer `fraction` of `[−R, R]`.
    Cosine { fraction: f64 },
    /// C^∞ roll-off `1/(1 + e^{1/s − 1/(1−s)})` over the outer `fraction`.
    Smooth { fraction: f64 },
}

impl Window {
    pub fn fraction(&self) -> f64 {
        match *self {
            Window::None => 0.0,
            Window::Cosine { fraction } | Window::Smooth { fraction } => fraction,
        }
    }

    pub fn weight(&self, x: f64, radius: f64) -> f64 {
        let t = self.fraction();
        let ax = x.abs();
        if ax >= radius {
            return if matches!(self, Window::None) { 1.0 } else { 0.0 };
        }
        let x0 = radius * (1.0 - t);
        if t == 0.0 || ax <= x0 {
            return 1.0;
        }
        let u = (ax - x0) / (radius - x0);
        match self {
            Window::None => 1.0,
            Window::Cosine { .. } => 0.5 * (1.0 + (std::f64::consts::PI * u).cos()),
            Window::Smooth { .. } => {
                let s = 1.0 - u;
                1.0 / (1.0 + (1.0 / s - 1.0 / u).exp())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub radius: f64,
    /// Nodes per axis.
    pub nodes: usize,
    /// Gauss–Legendre order of each panel; `nodes / panel_order` panels.
    pub panel_order: usize,
    pub window: Window,
    pub shift: Option<DomainShift>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radius: 8.0,
            nodes: 128,
            panel_order: 16,
            window: Window::Cosine { fraction: 0.15 },
            shift: None,
        }
    }
}

impl QuadratureSpec {
    pub fn new(radius: f64, nodes: usize, panel_order: usize, window: Window) -> Result<Self> {
        let spec = QuadratureSpec { radius, nodes, panel_order, window, shift: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_shift(mut self, shift: DomainShift) -> Self {
        self.shift = Some(shift);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad("quadrature radius must be positive");
        }
        if self.nodes < 16 || self.nodes % 2 != 0 {
            return bad("quadrature needs an even node count of at least 16");
        }
        if self.panel_order < 2 || self.panel_order % 2 != 0 || self.nodes % self.panel_order != 0 {
            return bad("panel order must be even and divide the node count");
        }
        let t = self.window.fraction();
        if !(0.0..=0.5).contains(&t) {
            return bad("taper fraction must lie in [0, 0.5]");
        }
        Ok(())
    }

    fn rule(&self, order: usize) -> (Vec<f64>, Vec<f64>) {
        let panels = self.nodes / self.panel_order;
        let (x, mut w) = composite_rule(-self.radius, self.radius, panels, order);
        for (wi, xi) in w.iter_mut().zip(&x) {
            *wi *= self.window.weight(*xi, self.radius);
        }
        (x, w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Difference to the half-order grid plus a roundoff floor.
    pub error: f64,
}

/// Sum over a tensor grid, parallel over the first axis, reduced in order.
/// Also returns the weighted 1-norm of the integrand and the minimum of the
/// second output of `f`.
fn tensor_sum<F>(x: &[f64], w: &[f64], f: &F) -> (Complex64, f64, f64)
where
    F: Fn(&Vector3<f64>) -> (Complex64, f64) + Sync,
{
    let slabs: Vec<(Complex64, f64, f64)> = (0..x.len())
        .into_par_iter()
        .map(|i| {
            let mut s = Complex64::new(0.0, 0.0);
            let mut a = 0.0;
            let mut gmin = f64::INFINITY;
            if w[i] == 0.0 {
                return (s, a, gmin);
            }
            for j in 0..x.len() {
                if w[j] == 0.0 {
                    continue;
                }
                let mut row = Complex64::new(0.0, 0.0);
                let mut arow = 0.0;
                for k in 0..x.len() {
                    if w[k] == 0.0 {
                        continue;
                    }
                    let (v, g) = f(&Vector3::new(x[i], x[j], x[k]));
                    row += v * w[k];
                    arow += (v.re.abs() + v.im.abs()) * w[k];
                    gmin = gmin.min(g);
                }
                s += row * w[j];
                a += arow * w[j];
            }
            (s * w[i], a * w[i], gmin)
        })
        .collect();
    slabs.iter().fold((Complex64::new(0.0, 0.0), 0.0, f64::INFINITY), |acc, s| {
        (acc.0 + s.0, acc.1 + s.1, acc.2.min(s.2))
    })
}

/// `prefactor · ∫_{ℝ³+iη} F e^{iΛG} dξ` by tensor-product Gauss–Legendre
/// on the truncated, windowed, shifted cube.
pub fn quad_deformed_3d(problem: &ProblemSpec, lambda: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let shift = spec.shift.unwrap_or(problem.shift);
    let eta = *shift.eta();
    let ieta = CVec3::from_fn(|k, _| Complex64::new(0.0, eta[k]));
    // ξ = x + iη: the mapped tangent vectors are the unit basis.
    let e = |k: usize| CVec3::from_fn(|r, _| Complex64::new(if r == k { 1.0 } else { 0.0 }, 0.0));
    let vol = volume_form(&e(0), &e(1), &e(2));
    let amp = &problem.amplitude;
    let phase = problem.phase.field.as_ref();
    let il = Complex64::new(0.0, lambda);
    // largest distance from a point of the box to the nearest fine node
    let panels = spec.nodes / spec.panel_order;
    let reach = 3f64.sqrt() / 2.0 * (2.0 * spec.radius / panels as f64) * std::f64::consts::PI / (2.0 * spec.panel_order as f64);
    let integrand = |x: &Vector3<f64>| {
        let xi = CVec3::from_fn(|k, _| Complex64::new(x[k], 0.0)) + ieta;
        let mut f = amp.smooth.value(&xi);
        let mut gmin = f64::INFINITY;
        for c in &amp.components {
            let g = c.g.value(&xi);
            let mut d = g.norm();
            // between nodes |g| drops to |Im g| where the real trace passes
            if d >= SINGULARITY_MARGIN && g.im.abs() < SINGULARITY_MARGIN && g.re.abs() <= c.g.gradient(&xi).norm() * reach {
                d = g.im.abs();
            }
            gmin = gmin.min(d);
            f *= if c.mu == -1.0 { g.inv() } else { g.powf(c.mu) };
        }
        (f * (il * phase.value(&xi)).exp(), gmin)
    };
    let (xf, wf) = spec.rule(spec.panel_order);
    let (fine, abs_sum, gmin) = tensor_sum(&xf, &wf, &integrand);
    if gmin < SINGULARITY_MARGIN {
        return Err(Error::SingularityTooClose(gmin));
    }
    let (xc, wc) = spec.rule(spec.panel_order / 2);
    let (coarse, _, _) = tensor_sum(&xc, &wc, &integrand);
    let scale = problem.prefactor * vol;
    let value = fine * scale;
    let error = ((fine - coarse) * scale).norm() + 64.0 * f64::EPSILON * abs_sum * scale.norm();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("quadrature value"));
    }
    // near-total cancellation is judged against the integrand's size
    let floor = 1e-9 * abs_sum * scale.norm();
    if error > (1e-3 * value.norm()).max(floor) {
        return Err(Error::NonConvergent { value: value.norm(), error });
    }
    Ok(QuadResult { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_shape() {
        let c = Window::Cosine { fraction: 0.5 };
        let s = Window::Smooth { fraction: 0.5 };
        for w in [c, s] {
            assert_eq!(w.weight(0.0, 10.0), 1.0);
            assert_eq!(w.weight(4.9, 10.0), 1.0);
            assert!((w.weight(7.5, 10.0) - 0.5).abs() < 1e-12);
            assert!(w.weight(9.999, 10.0) < 1e-3);
            assert_eq!(w.weight(10.0, 10.0), 0.0);
        }
        assert_eq!(Window::None.weight(9.9, 10.0), 1.0);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(8.0, 128, 16, Window::Cosine { fraction: 0.15 }).is_ok());
        assert!(QuadratureSpec::new(8.0, 15, 16, Window::None).is_err());
        assert!(QuadratureSpec::new(8.0, 120, 16, Window::None).is_err());
        assert!(QuadratureSpec::new(-1.0, 128, 16, Window::None).is_err());
        assert!(QuadratureSpec::new(8.0, 128, 16, Window::Cosine { fraction: 0.7 }).is_err());
    }
}
