use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::integrate_adaptive;
use crate::problem::Side;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// Arc of `center + radius·e^{iθ}`, θ running from `from` to `to`.
    Arc { center: Complex64, radius: f64, from: f64, to: f64 },
}

impl Segment {
    /// Point and derivative at parameter `t ∈ [0, 1]`.
    fn at(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Segment::Line { from, to } => (from + (to - from) * t, to - from),
            Segment::Arc { center, radius, from, to } => {
                let th = from + (to - from) * t;
                let e = Complex64::from_polar(radius, th);
                (center + e, Complex64::i() * e * (to - from))
            }
        }
    }

    fn start(&self) -> Complex64 {
        self.at(0.0).0
    }

    fn end(&self) -> Complex64 {
        self.at(1.0).0
    }
}

/// Continuous piecewise path in one complex variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour1D {
    segments: Vec<Segment>,
}

impl Contour1D {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSpec("empty contour".into()));
        }
        for w in segments.windows(2) {
            if (w[0].end() - w[1].start()).norm() > 1e-12 * (1.0 + w[0].end().norm()) {
                return Err(Error::InvalidSpec("contour is not continuous".into()));
            }
        }
        Ok(Contour1D { segments })
    }

    pub fn polyline(points: &[Complex64]) -> Result<Self> {
        let segs = points
            .windows(2)
            .map(|w| Segment::Line { from: w[0], to: w[1] })
            .collect();
        Contour1D::new(segs)
    }

    /// Real segment `[−R, R]` rotated about the origin by `±π/4`.
    pub fn tilted(radius: f64, side: Side) -> Result<Self> {
        let d = Complex64::from_polar(radius, side.sign() * PI / 4.0);
        Contour1D::polyline(&[-d, d])
    }

    /// `[−R, R]` with the origin passed on a semicircle of radius `r`
    /// on the given side.
    pub fn indented(radius: f64, r: f64, side: Side) -> Result<Self> {
        if !(r > 0.0 && r < radius / 10.0) {
            return Err(Error::InvalidSpec(format!("indentation radius {r} outside (0, R/10)")));
        }
        let re = |x: f64| Complex64::new(x, 0.0);
        Contour1D::new(vec![
            Segment::Line { from: re(-radius), to: re(-r) },
            Segment::Arc { center: re(0.0), radius: r, from: PI, to: PI - side.sign() * PI },
            Segment::Line { from: re(r), to: re(radius) },
        ])
    }

    /// Positively oriented circle.
    pub fn circle(center: Complex64, r: f64) -> Result<Self> {
        Contour1D::new(vec![Segment::Arc { center, radius: r, from: 0.0, to: 2.0 * PI }])
    }

    /// The below-indented real line with both tails swung up to `+i·height`
    /// on either side of the positive imaginary axis.
    pub fn hankel_lower(height: f64) -> Result<Self> {
        Contour1D::polyline(&[
            Complex64::new(-1.0, height),
            Complex64::new(-1.0, -1.0),
            Complex64::new(1.0, -1.0),
            Complex64::new(1.0, height),
        ])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }
}

const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-13;
const MAX_INTERVALS: usize = 4000;

/// `∫ f(w) dw` along the contour.
pub fn integrate_path<F: Fn(Complex64) -> Complex64>(f: F, contour: &Contour1D) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for seg in contour.segments() {
        let (v, _) = integrate_adaptive(
            |t| {
                let (w, dw) = seg.at(t);
                f(w) * dw
            },
            0.0,
            1.0,
            ABS_TOL,
            REL_TOL,
            MAX_INTERVALS,
        )?;
        total += v;
    }
    Ok(total)
}

/// `∫ f(w) e^{iΛw} dw` along the contour.
pub fn quad_contour_1d<F: Fn(Complex64) -> Complex64>(f: F, contour: &Contour1D, lambda: f64) -> Result<Complex64> {
    integrate_path(|w| f(w) * (Complex64::i() * lambda * w).exp(), contour)
}
