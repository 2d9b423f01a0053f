use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::field::SharedField;
use crate::geometry::{real_part, CVec3, RPoint3};
use crate::{Error, Result};

/// Absolute tolerance for `|g| ≈ 0` on a singular surface.
pub const SURFACE_TOL: f64 = 1e-10;
/// Relative threshold below which a scalar product counts as tangential.
pub const TANGENCY_TOL: f64 = 1e-12;
/// Largest admissible imaginary shift.
pub const MAX_SHIFT: f64 = 1.0;

/// Whether `mu` is a non-integer, up to roundoff.
pub fn is_branch_exponent(mu: f64) -> bool {
    (mu - mu.round()).abs() > 1e-12
}

/// One factor `g^μ` of the amplitude.
#[derive(Debug, Clone)]
pub struct SingularityComponent {
    pub g: SharedField,
    pub mu: f64,
    pub label: String,
}

impl SingularityComponent {
    pub fn new(label: impl Into<String>, g: SharedField, mu: f64) -> Result<Self> {
        let label = label.into();
        if !mu.is_finite() || !(mu == -1.0 || is_branch_exponent(mu)) {
            return Err(Error::UnsupportedExponent(mu));
        }
        if !g.is_real() {
            return Err(Error::InvalidSpec(format!("component {label} lacks the real property")));
        }
        Ok(SingularityComponent { g, mu, label })
    }

    /// `g(x)^μ` on the principal branch.
    pub fn power(&self, x: &CVec3) -> Complex64 {
        let g = self.g.value(x);
        if self.mu == -1.0 {
            g.inv()
        } else {
            g.powf(self.mu)
        }
    }
}

/// Amplitude `F = N · ∏ g_j^{μ_j}`.
#[derive(Debug, Clone)]
pub struct AmplitudeSpec {
    pub smooth: SharedField,
    pub components: Vec<SingularityComponent>,
}

impl AmplitudeSpec {
    pub fn new(smooth: SharedField, components: Vec<SingularityComponent>) -> Self {
        AmplitudeSpec { smooth, components }
    }

    pub fn eval(&self, x: &CVec3) -> Complex64 {
        self.components
            .iter()
            .fold(self.smooth.value(x), |acc, c| acc * c.power(x))
    }
}

/// Phase `G(ξ; z)` for a fixed parameter triple `z`.
#[derive(Debug, Clone)]
pub struct PhaseSpec {
    pub field: SharedField,
    pub z: [f64; 3],
}

impl PhaseSpec {
    pub fn new(field: SharedField, z: [f64; 3]) -> Self {
        PhaseSpec { field, z }
    }

    pub fn real_gradient(&self, p: &RPoint3) -> Vector3<f64> {
        real_part(&self.field.gradient(p.complex().vector()))
    }
}

/// Constant imaginary shift `Γ = ℝ³ + iη`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainShift {
    eta: Vector3<f64>,
}

impl DomainShift {
    pub fn new(eta: Vector3<f64>) -> Result<Self> {
        if !eta.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("DomainShift"));
        }
        let n = eta.norm();
        if n > MAX_SHIFT {
            return Err(Error::InvalidSpec(format!("shift magnitude {n} exceeds {MAX_SHIFT}")));
        }
        Ok(DomainShift { eta })
    }

    /// The undeformed domain, for integrands without singularities.
    pub fn zero() -> Self {
        DomainShift { eta: Vector3::zeros() }
    }

    pub fn eta(&self) -> &Vector3<f64> {
        &self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.eta.norm()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        DomainShift::new(self.eta * c)
    }
}

/// Side of a singular surface on which the shifted domain passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Towards increasing `g`.
    Above,
    Below,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Side {
        if s > 0.0 {
            Side::Above
        } else {
            Side::Below
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Above => "above",
            Side::Below => "below",
        })
    }
}

/// Axis-aligned box, optionally with a ball removed.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchRegion {
    pub lo: Vector3<f64>,
    pub hi: Vector3<f64>,
    pub excluded_ball: Option<(Vector3<f64>, f64)>,
}

impl SearchRegion {
    pub fn new(lo: Vector3<f64>, hi: Vector3<f64>) -> Result<Self> {
        if (0..3).any(|k| !(lo[k] < hi[k])) {
            return Err(Error::InvalidSpec("empty search region".into()));
        }
        Ok(SearchRegion { lo, hi, excluded_ball: None })
    }

    pub fn cube(half_width: f64) -> Result<Self> {
        SearchRegion::new(Vector3::repeat(-half_width), Vector3::repeat(half_width))
    }

    pub fn excluding_ball(mut self, center: Vector3<f64>, radius: f64) -> Self {
        self.excluded_ball = Some((center, radius));
        self
    }

    pub fn contains(&self, p: &Vector3<f64>) -> bool {
        let in_box = (0..3).all(|k| p[k] >= self.lo[k] - 1e-12 && p[k] <= self.hi[k] + 1e-12);
        let in_ball = self
            .excluded_ball
            .map_or(false, |(c, r)| (p - c).norm() < r);
        in_box && !in_ball
    }

    /// Uniform `n³` grid of box nodes lying in the region.
    pub fn grid(&self, n: usize) -> Vec<RPoint3> {
        let n = n.max(2);
        let mut out = Vec::with_capacity(n * n * n);
        let at = |k: usize, i: usize| self.lo[k] + (self.hi[k] - self.lo[k]) * i as f64 / (n - 1) as f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let v = Vector3::new(at(0, i), at(1, j), at(2, l));
                    if self.contains(&v) {
                        out.push(RPoint3::from_vector(v).expect("finite grid node"));
                    }
                }
            }
        }
        out
    }
}

/// A complete integral `prefactor · ∫_Γ F e^{iΛG} dξ`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub amplitude: AmplitudeSpec,
    pub phase: PhaseSpec,
    pub shift: DomainShift,
    pub region: SearchRegion,
    pub prefactor: Complex64,
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        amplitude: AmplitudeSpec,
        phase: PhaseSpec,
        shift: DomainShift,
        region: SearchRegion,
        prefactor: Complex64,
    ) -> Result<Self> {
        if amplitude.components.iter().any(|c| !c.g.is_real()) {
            return Err(Error::InvalidSpec("singularity without the real property".into()));
        }
        if !(prefactor.re.is_finite() && prefactor.im.is_finite()) {
            return Err(Error::NonFinite("prefactor"));
        }
        Ok(ProblemSpec {
            name: name.into(),
            amplitude,
            phase,
            shift,
            region,
            prefactor,
        })
    }

    pub fn with_shift(&self, shift: DomainShift) -> Self {
        ProblemSpec { shift, ..self.clone() }
    }

    pub fn component_index(&self, label: &str) -> Option<usize> {
        self.amplitude.components.iter().position(|c| c.label == label)
    }
}

/// Whether the shift makes `Im G` grow at `p`, i.e. `∇G·η > 0`.
pub fn is_desired(shift: &DomainShift, phase: &PhaseSpec, p: &RPoint3) -> Result<bool> {
    let grad = phase.real_gradient(p);
    let d = grad.dot(shift.eta());
    if d.abs() <= TANGENCY_TOL * grad.norm() * shift.epsilon() {
        return Err(Error::Indeterminate("∇G·η"));
    }
    Ok(d > 0.0)
}

/// Side of `σ = {g = 0}` on which the shifted domain passes near `p`.
pub fn bypass_side(shift: &DomainShift, comp: &SingularityComponent, p: &RPoint3) -> Result<Side> {
    let x = p.complex();
    let g = comp.g.value(x.vector());
    if g.norm() > SURFACE_TOL {
        return Err(Error::InvalidSpec(format!(
            "point is not on {} (|g| = {:.3e})",
            comp.label,
            g.norm()
        )));
    }
    let grad = real_part(&comp.g.gradient(x.vector()));
    if grad.norm() == 0.0 {
        return Err(Error::Indeterminate("∇g"));
    }
    let d = shift.eta().dot(&grad);
    if d.abs() <= TANGENCY_TOL * shift.epsilon() * grad.norm() {
        return Err(Error::TangentialShift(comp.label.clone()));
    }
    Ok(Side::from_sign(d))
}

/// `g^μ` at a real point off the surface, using the side of Γ when `g < 0`
/// and the exponent is fractional.
pub fn real_power(g: f64, mu: f64, side: Side) -> Complex64 {
    if mu == -1.0 {
        return Complex64::new(1.0 / g, 0.0);
    }
    if g >= 0.0 {
        return Complex64::new(g.powf(mu), 0.0);
    }
    Complex64::from_polar(g.abs().powf(mu), side.sign() * PI * mu)
}
