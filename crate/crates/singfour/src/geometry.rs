use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CVec3 = Vector3<Complex64>;
pub type CMat3 = Matrix3<Complex64>;

/// Point of complex 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPoint3(CVec3);

impl CPoint3 {
    pub fn new(x1: Complex64, x2: Complex64, x3: Complex64) -> Result<Self> {
        Self::from_vector(CVec3::new(x1, x2, x3))
    }

    pub fn from_vector(v: CVec3) -> Result<Self> {
        if v.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(CPoint3(v))
        } else {
            Err(Error::NonFinite("CPoint3"))
        }
    }

    /// `x + i·y`
    pub fn shifted(x: &Vector3<f64>, y: &Vector3<f64>) -> Result<Self> {
        Self::from_vector(CVec3::from_fn(|k, _| Complex64::new(x[k], y[k])))
    }

    pub fn vector(&self) -> &CVec3 {
        &self.0
    }

    pub fn re(&self) -> Vector3<f64> {
        self.0.map(|c| c.re)
    }

    pub fn im(&self) -> Vector3<f64> {
        self.0.map(|c| c.im)
    }
}

/// Point of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RPoint3(Vector3<f64>);

impl RPoint3 {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x1, x2, x3))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        if v.iter().all(|x| x.is_finite()) {
            Ok(RPoint3(v))
        } else {
            Err(Error::NonFinite("RPoint3"))
        }
    }

    pub fn origin() -> Self {
        RPoint3(Vector3::zeros())
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn complex(&self) -> CPoint3 {
        CPoint3(to_complex(&self.0))
    }

    pub fn distance(&self, other: &RPoint3) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl From<RPoint3> for CPoint3 {
    fn from(p: RPoint3) -> Self {
        p.complex()
    }
}

pub fn to_complex(v: &Vector3<f64>) -> CVec3 {
    v.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(v: &CVec3) -> Vector3<f64> {
    v.map(|c| c.re)
}

pub fn real_matrix(m: &CMat3) -> Matrix3<f64> {
    m.map(|c| c.re)
}

/// Determinant of the matrix with rows `v1, v2, v3`: the complex volume of
/// the parallelepiped they span.
pub fn volume_form(v1: &CVec3, v2: &CVec3, v3: &CVec3) -> Complex64 {
    v1.dot(&v2.cross(v3))
}
