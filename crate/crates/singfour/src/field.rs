use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::geometry::{to_complex, CMat3, CVec3};

/// Analytic function of three complex variables with closed-form derivatives.
///
/// Implementations must be reentrant; they are shared across quadrature
/// workers.
pub trait ScalarField3: Send + Sync + fmt::Debug {
    fn value(&self, x: &CVec3) -> Complex64;
    fn gradient(&self, x: &CVec3) -> CVec3;
    fn hessian(&self, x: &CVec3) -> CMat3;

    /// Whether the field is real on real arguments.
    fn is_real(&self) -> bool {
        true
    }
}

pub type SharedField = Arc<dyn ScalarField3>;

/// `c + b·x + ½ xᵀ A x` with real coefficients and symmetric `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub constant: f64,
    pub linear: Vector3<f64>,
    pub matrix: Matrix3<f64>,
}

impl Quadratic {
    pub fn new(constant: f64, linear: Vector3<f64>, matrix: Matrix3<f64>) -> Self {
        let matrix = (matrix + matrix.transpose()) * 0.5;
        Quadratic { constant, linear, matrix }
    }

    pub fn affine(constant: f64, linear: Vector3<f64>) -> Self {
        Quadratic { constant, linear, matrix: Matrix3::zeros() }
    }

    /// `c + ½ Σ d_k x_k²`
    pub fn diagonal(constant: f64, linear: Vector3<f64>, diag: [f64; 3]) -> Self {
        Quadratic {
            constant,
            linear,
            matrix: Matrix3::from_diagonal(&Vector3::from(diag)),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Quadratic {
            constant: self.constant * c,
            linear: self.linear * c,
            matrix: self.matrix * c,
        }
    }
}

/// `M x` for real `M`, without promoting `M` to complex.
fn real_mul(m: &Matrix3<f64>, x: &CVec3) -> CVec3 {
    CVec3::from_fn(|i, _| x[0] * m[(i, 0)] + x[1] * m[(i, 1)] + x[2] * m[(i, 2)])
}

impl ScalarField3 for Quadratic {
    fn value(&self, x: &CVec3) -> Complex64 {
        let lin = x[0] * self.linear[0] + x[1] * self.linear[1] + x[2] * self.linear[2];
        Complex64::new(self.constant, 0.0) + lin + 0.5 * x.dot(&real_mul(&self.matrix, x))
    }

    fn gradient(&self, x: &CVec3) -> CVec3 {
        to_complex(&self.linear) + real_mul(&self.matrix, x)
    }

    fn hessian(&self, _x: &CVec3) -> CMat3 {
        self.matrix.map(|a| Complex64::new(a, 0.0))
    }
}

/// `scale · exp(−|x − center|²)` (bilinear square, analytic in x).
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub center: Vector3<f64>,
    pub scale: f64,
}

impl Gaussian {
    pub fn new(center: Vector3<f64>, scale: f64) -> Self {
        Gaussian { center, scale }
    }

    pub fn standard() -> Self {
        Gaussian::new(Vector3::zeros(), 1.0)
    }
}

impl ScalarField3 for Gaussian {
    fn value(&self, x: &CVec3) -> Complex64 {
        let c = &self.center;
        let (a, b, e) = (x[0] - c[0], x[1] - c[1], x[2] - c[2]);
        self.scale * (-(a * a + b * b + e * e)).exp()
    }

    fn gradient(&self, x: &CVec3) -> CVec3 {
        let d = x - to_complex(&self.center);
        d * (-2.0 * self.value(x))
    }

    fn hessian(&self, x: &CVec3) -> CMat3 {
        let d = x - to_complex(&self.center);
        let v = self.value(x);
        (d * d.transpose() * Complex64::from(4.0) - CMat3::identity() * Complex64::from(2.0)) * v
    }
}

/// Positive multiple of another field.
#[derive(Debug, Clone)]
pub struct Scaled {
    pub inner: SharedField,
    pub factor: f64,
}

impl ScalarField3 for Scaled {
    fn value(&self, x: &CVec3) -> Complex64 {
        self.inner.value(x) * self.factor
    }

    fn gradient(&self, x: &CVec3) -> CVec3 {
        self.inner.gradient(x) * Complex64::new(self.factor, 0.0)
    }

    fn hessian(&self, x: &CVec3) -> CMat3 {
        self.inner.hessian(x) * Complex64::new(self.factor, 0.0)
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }
}

type ValueFn = dyn Fn(&CVec3) -> Complex64 + Send + Sync;
type GradFn = dyn Fn(&CVec3) -> CVec3 + Send + Sync;
type HessFn = dyn Fn(&CVec3) -> CMat3 + Send + Sync;

/// Field assembled from closures.
#[derive(Clone)]
pub struct FnField {
    name: &'static str,
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
    hessian: Arc<HessFn>,
    real: bool,
}

impl FnField {
    pub fn new(
        name: &'static str,
        value: impl Fn(&CVec3) -> Complex64 + Send + Sync + 'static,
        gradient: impl Fn(&CVec3) -> CVec3 + Send + Sync + 'static,
        hessian: impl Fn(&CVec3) -> CMat3 + Send + Sync + 'static,
    ) -> Self {
        FnField {
            name,
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            hessian: Arc::new(hessian),
            real: true,
        }
    }

    pub fn not_real(mut self) -> Self {
        self.real = false;
        self
    }
}

impl fmt::Debug for FnField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnField({})", self.name)
    }
}

impl ScalarField3 for FnField {
    fn value(&self, x: &CVec3) -> Complex64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &CVec3) -> CVec3 {
        (self.gradient)(x)
    }

    fn hessian(&self, x: &CVec3) -> CMat3 {
        (self.hessian)(x)
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

/// Failure of [`check_derivatives`].
#[derive(Debug, Clone, PartialEq)]
pub enum DerivativeMismatch {
    Gradient { component: usize, got: Complex64, fd: Complex64 },
    Hessian { row: usize, col: usize, got: Complex64, fd: Complex64 },
    Asymmetric { row: usize, col: usize },
    NotReal(Complex64),
}

/// Cross-checks the closed-form derivatives of `f` at the real point `x`
/// against central differences with step `1e-5·scale`.
pub fn check_derivatives(
    f: &dyn ScalarField3,
    x: &Vector3<f64>,
    scale: f64,
) -> Result<(), DerivativeMismatch> {
    let h = 1e-5 * scale;
    let xc = to_complex(x);
    let v = f.value(&xc);
    if f.is_real() && v.im.abs() > 1e-14 * (1.0 + v.re.abs()) {
        return Err(DerivativeMismatch::NotReal(v));
    }
    let grad = f.gradient(&xc);
    let hess = f.hessian(&xc);
    let gscale = grad.norm() + v.norm() / scale + 1e-300;
    let hscale = hess.norm() + gscale / scale;
    for k in 0..3 {
        let mut e = CVec3::zeros();
        e[k] = Complex64::new(h, 0.0);
        let fd = (f.value(&(xc + e)) - f.value(&(xc - e))) / (2.0 * h);
        if (fd - grad[k]).norm() > 1e-6 * gscale {
            return Err(DerivativeMismatch::Gradient { component: k, got: grad[k], fd });
        }
        let gfd = (f.gradient(&(xc + e)) - f.gradient(&(xc - e))) / Complex64::new(2.0 * h, 0.0);
        for r in 0..3 {
            if (gfd[r] - hess[(r, k)]).norm() > 1e-6 * hscale {
                return Err(DerivativeMismatch::Hessian { row: r, col: k, got: hess[(r, k)], fd: gfd[r] });
            }
        }
    }
    for r in 0..3 {
        for c in 0..r {
            if (hess[(r, c)] - hess[(c, r)]).norm() > 1e-12 * (hess.norm() + 1e-300) {
                return Err(DerivativeMismatch::Asymmetric { row: r, col: c });
            }
        }
    }
    Ok(())
}
