//! The shipped test problems and their independent reference values.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::field::{Gaussian, Quadratic};
use crate::kelvin;
use crate::oracle::{integrate_path, quad_contour_1d, Contour1D, QuadratureSpec, Window};
use crate::problem::{AmplitudeSpec, DomainShift, PhaseSpec, ProblemSpec, SearchRegion, Side, SingularityComponent};
use crate::{Error, Result};

/// Shift magnitude of the singular test problems.
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_LAMBDA: f64 = 20.0;
/// `(z1, z2, τ)` of the wake problem when none is given.
pub const DEFAULT_KELVIN_Z: [f64; 3] = [2.0, 0.5, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemName {
    GaussianSp,
    PoleSp,
    DoubleCross,
    TripleCross,
    Cone,
    Kelvin,
}

impl ProblemName {
    pub const ALL: [ProblemName; 6] = [
        ProblemName::GaussianSp,
        ProblemName::PoleSp,
        ProblemName::DoubleCross,
        ProblemName::TripleCross,
        ProblemName::Cone,
        ProblemName::Kelvin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemName::GaussianSp => "gaussian-sp",
            ProblemName::PoleSp => "pole-sp",
            ProblemName::DoubleCross => "double-cross",
            ProblemName::TripleCross => "triple-cross",
            ProblemName::Cone => "cone",
            ProblemName::Kelvin => "kelvin",
        }
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown problem '{s}'")))
    }
}

fn shift(eta: [f64; 3]) -> Result<DomainShift> {
    DomainShift::new(Vector3::from(eta))
}

fn linear(c: f64, b: [f64; 3]) -> Arc<Quadratic> {
    Arc::new(Quadratic::affine(c, Vector3::from(b)))
}

fn gaussian() -> Arc<Gaussian> {
    Arc::new(Gaussian::standard())
}

fn pole(label: &str, g: Arc<Quadratic>) -> Result<SingularityComponent> {
    SingularityComponent::new(label, g, -1.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `∫ e^{−|ξ|²} e^{iΛ|ξ|²/2} dξ`: one interior stationary point.
pub fn gaussian_sp() -> Result<ProblemSpec> {
    ProblemSpec::new(
        "gaussian-sp",
        AmplitudeSpec::new(gaussian(), vec![]),
        PhaseSpec::new(Arc::new(Quadratic::diagonal(0.0, Vector3::zeros(), [1.0; 3])), [0.0; 3]),
        DomainShift::zero(),
        SearchRegion::cube(2.0)?,
        one(),
    )
}

/// Pole on the plane `ξ1 = 1`, passed below; stationary point on it at
/// `(1, 0, 0)`.
pub fn pole_sp(epsilon: f64) -> Result<ProblemSpec> {
    ProblemSpec::new(
        "pole-sp",
        AmplitudeSpec::new(
            Arc::new(Gaussian::new(Vector3::new(1.0, 0.0, 0.0), 1.0)),
            vec![pole("g", linear(-1.0, [1.0, 0.0, 0.0]))?],
        ),
        PhaseSpec::new(Arc::new(Quadratic::diagonal(0.0, Vector3::new(1.0, 0.0, 0.0), [0.0, 1.0, 1.0])), [0.0; 3]),
        shift([-epsilon, 0.0, 0.0])?,
        SearchRegion::cube(2.0)?,
        one(),
    )
}

/// Poles on `ξ1 = 0` and `ξ2 = 0`, both passed below.
pub fn double_cross(epsilon: f64) -> Result<ProblemSpec> {
    ProblemSpec::new(
        "double-cross",
        AmplitudeSpec::new(
            gaussian(),
            vec![
                pole("gA", linear(0.0, [1.0, 0.0, 0.0]))?,
                pole("gB", linear(0.0, [0.0, 1.0, 0.0]))?,
            ],
        ),
        PhaseSpec::new(Arc::new(Quadratic::diagonal(0.0, Vector3::new(1.0, 1.0, 0.0), [0.0, 0.0, 1.0])), [0.0; 3]),
        shift([-epsilon, -epsilon, 0.0])?,
        SearchRegion::cube(2.0)?,
        one(),
    )
}

/// Poles on the three coordinate planes with a linear phase.
pub fn triple_cross(epsilon: f64) -> Result<ProblemSpec> {
    ProblemSpec::new(
        "triple-cross",
        AmplitudeSpec::new(
            gaussian(),
            vec![
                pole("g1", linear(0.0, [1.0, 0.0, 0.0]))?,
                pole("g2", linear(0.0, [0.0, 1.0, 0.0]))?,
                pole("g3", linear(0.0, [0.0, 0.0, 1.0]))?,
            ],
        ),
        PhaseSpec::new(linear(0.0, [1.0, 1.0, 1.0]), [1.0, 1.0, 1.0]),
        shift([-epsilon; 3])?,
        SearchRegion::cube(2.0)?,
        one(),
    )
}

/// Pole on the cone `ξ1² + ξ2² = ξ3²` with phase `ξ3`, domain shifted
/// into the lower cone.
pub fn cone(epsilon: f64) -> Result<ProblemSpec> {
    ProblemSpec::new(
        "cone",
        AmplitudeSpec::new(
            gaussian(),
            vec![SingularityComponent::new(
                "g",
                Arc::new(Quadratic::diagonal(0.0, Vector3::zeros(), [2.0, 2.0, -2.0])),
                -1.0,
            )?],
        ),
        PhaseSpec::new(linear(0.0, [0.0, 0.0, 1.0]), [0.0, 0.0, 1.0]),
        shift([0.0, 0.0, -epsilon])?,
        SearchRegion::cube(1.0)?,
        one(),
    )
}

/// The problem by name with default parameters; `z` sets the wake
/// observation point `(z1, z2, τ)`.
pub fn build(name: ProblemName, z: Option<[f64; 3]>) -> Result<ProblemSpec> {
    match name {
        ProblemName::GaussianSp => gaussian_sp(),
        ProblemName::PoleSp => pole_sp(DEFAULT_EPSILON),
        ProblemName::DoubleCross => double_cross(DEFAULT_EPSILON),
        ProblemName::TripleCross => triple_cross(DEFAULT_EPSILON),
        ProblemName::Cone => cone(DEFAULT_EPSILON),
        ProblemName::Kelvin => {
            let [z1, z2, tau] = z.unwrap_or(DEFAULT_KELVIN_Z);
            kelvin::kelvin_problem(z1, z2, tau)
        }
    }
}

/// Quadrature grid resolving the problem at its default `Λ` (`Λ ≤ 60` for
/// the cone). Unused for the wake, which has its own oracle.
pub fn default_quadrature(name: ProblemName) -> QuadratureSpec {
    let spec = |nodes, panel_order| QuadratureSpec {
        radius: 4.5,
        nodes,
        panel_order,
        window: Window::Cosine { fraction: 0.15 },
        shift: None,
    };
    match name {
        ProblemName::GaussianSp => spec(288, 24),
        ProblemName::PoleSp | ProblemName::DoubleCross | ProblemName::TripleCross => spec(288, 16),
        ProblemName::Cone => spec(576, 24),
        ProblemName::Kelvin => QuadratureSpec::default(),
    }
}

/// `(π/(1 − iΛ/2))^{3/2}`.
pub fn gaussian_exact(lambda: f64) -> Complex64 {
    (Complex64::new(PI, 0.0) / Complex64::new(1.0, -lambda / 2.0)).powf(1.5)
}

/// `∫ e^{−w²} w^{−1} e^{iΛw} dw` along the real line passed below `0`.
pub fn pole_factor(lambda: f64) -> Result<Complex64> {
    let r = (1.0 / lambda).min(0.5);
    let c = Contour1D::indented(8.0, r, Side::Below)?;
    quad_contour_1d(|w| (-w * w).exp() / w, &c, lambda)
}

/// `∫ e^{−w²} e^{iΛw²/2} dw` along the real line turned by `π/4`.
pub fn gaussian_factor(lambda: f64) -> Result<Complex64> {
    let c = Contour1D::tilted(8.0, Side::Above)?;
    let a = Complex64::new(1.0, -lambda / 2.0);
    integrate_path(|w| (-a * w * w).exp(), &c)
}

/// Reference value from a closed form or a product of 1D contour
/// integrals; `None` where only the 3D quadrature (or the wake oracle) can
/// serve as reference.
pub fn reference_value(name: ProblemName, lambda: f64) -> Result<Option<Complex64>> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidSpec("Λ must be positive".into()));
    }
    Ok(match name {
        ProblemName::GaussianSp => Some(gaussian_exact(lambda)),
        ProblemName::PoleSp => {
            let g = gaussian_factor(lambda)?;
            Some(Complex64::from_polar(1.0, lambda) * pole_factor(lambda)? * g * g)
        }
        ProblemName::DoubleCross => {
            let p = pole_factor(lambda)?;
            Some(p * p * gaussian_factor(lambda)?)
        }
        ProblemName::TripleCross => Some(pole_factor(lambda)?.powi(3)),
        ProblemName::Cone | ProblemName::Kelvin => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in ProblemName::ALL {
            assert_eq!(p.as_str().parse::<ProblemName>().unwrap(), p);
        }
        assert!("saddle".parse::<ProblemName>().is_err());
    }

    #[test]
    fn factors_match_closed_forms() {
        for l in [5.0, 20.0, 80.0] {
            let p = pole_factor(l).unwrap();
            let want = Complex64::new(0.0, PI * (1.0 + statrs::function::erf::erf(l / 2.0)));
            assert!((p - want).norm() < 1e-11, "Λ={l}: {p} vs {want}");
            let g = gaussian_factor(l).unwrap();
            assert!((g * g * g - gaussian_exact(l)).norm() < 1e-11 * gaussian_exact(l).norm());
        }
    }

    #[test]
    fn all_problems_build() {
        for p in ProblemName::ALL {
            build(p, None).unwrap();
            default_quadrature(p).validate().unwrap();
        }
    }
}
