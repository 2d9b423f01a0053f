//! Local canonical coordinates at special points.

use nalgebra::{Matrix2, Matrix3, Matrix3x2, Vector3};

use crate::detect::{eval_real, PointKind, SpecialPoint};
use crate::linalg::{sym_eigen2, sym_eigen3, tangent_basis};
use crate::problem::ProblemSpec;
use crate::{Error, Result};

/// Coordinates `w = axes · (ξ − ξ*)` (to first order) in which the
/// integrand takes its canonical local form.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFrame {
    pub kind: PointKind,
    pub location: Vector3<f64>,
    pub components: Vec<usize>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `det ∂ξ/∂w` at the point.
    pub jacobian: f64,
    /// Rows are `∇w_k` in ξ coordinates.
    pub axes: Matrix3<f64>,
    pub phase0: f64,
    /// `g = quadric_sign · (w1² + w2² − w3²)` near a conical point; 1 otherwise.
    pub quadric_sign: f64,
}

impl LocalFrame {
    fn assemble(sp: &SpecialPoint, problem: &ProblemSpec, alphas: Vec<f64>, betas: Vec<f64>, axes: Matrix3<f64>) -> Self {
        let x = *sp.location.vector();
        LocalFrame {
            kind: sp.kind,
            location: x,
            components: sp.components.clone(),
            alphas,
            betas,
            jacobian: 1.0 / axes.determinant(),
            axes,
            phase0: eval_real(problem.phase.field.as_ref(), &x).value,
            quadric_sign: 1.0,
        }
    }
}

fn expect_kind(sp: &SpecialPoint, kind: PointKind, n_alpha: usize) -> Result<()> {
    if sp.kind != kind {
        return Err(Error::InvalidSpec(format!("expected {kind}, got {}", sp.kind)));
    }
    if sp.alphas.len() != n_alpha {
        return Err(Error::MissingFrame);
    }
    Ok(())
}

fn right_handed(mut axes: Matrix3<f64>) -> Matrix3<f64> {
    if axes.determinant() < 0.0 {
        let r = -axes.row(2);
        axes.set_row(2, &r);
    }
    axes
}

/// Hessian of `G` restricted to `σ` at a surface point, in an orthonormal
/// tangent basis `P` (columns).
pub(crate) fn restricted_hessian(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<(Matrix2<f64>, Matrix3x2<f64>)> {
    let x = *sp.location.vector();
    let alpha = *sp.alphas.first().ok_or(Error::MissingFrame)?;
    let g = eval_real(problem.amplitude.components[sp.components[0]].g.as_ref(), &x);
    let ph = eval_real(problem.phase.field.as_ref(), &x);
    let (t1, t2) = tangent_basis(&g.grad);
    let p = Matrix3x2::from_columns(&[t1, t2]);
    let m = p.transpose() * (ph.hess - g.hess * alpha) * p;
    if m.determinant().abs() <= 1e-10 {
        return Err(Error::DegenerateRestrictedHessian);
    }
    Ok((m, p))
}

/// Second derivative of `G` along the crossing line, by arclength.
pub(crate) fn crossing_curvature(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<f64> {
    let (beta, _) = crossing_geometry(problem, sp)?;
    if beta.abs() <= 1e-6 {
        return Err(Error::DegenerateCurvature(beta));
    }
    Ok(beta)
}

fn crossing_geometry(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<(f64, Vector3<f64>)> {
    let x = *sp.location.vector();
    let comps = &problem.amplitude.components;
    let a = eval_real(comps[sp.components[0]].g.as_ref(), &x);
    let b = eval_real(comps[sp.components[1]].g.as_ref(), &x);
    let ph = eval_real(problem.phase.field.as_ref(), &x);
    let t = a.grad.cross(&b.grad);
    if t.norm() <= 1e-10 {
        return Err(Error::NonTransversal(
            comps[sp.components[0]].label.clone(),
            comps[sp.components[1]].label.clone(),
        ));
    }
    let t = t.normalize();
    // Differentiate g_A(γ(s)) = g_B(γ(s)) = 0 and |γ'| = 1 twice.
    let m = Matrix3::from_rows(&[a.grad.transpose(), b.grad.transpose(), t.transpose()]);
    let rhs = Vector3::new(-t.dot(&(a.hess * t)), -t.dot(&(b.hess * t)), 0.0);
    let gamma2 = m.lu().solve(&rhs).ok_or(Error::SingularGradientMatrix)?;
    Ok((t.dot(&(ph.hess * t)) + ph.grad.dot(&gamma2), t))
}

pub fn local_frame_interior(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<LocalFrame> {
    expect_kind(sp, PointKind::SpInterior, 0)?;
    let h = eval_real(problem.phase.field.as_ref(), sp.location.vector()).hess;
    let (vals, vecs) = sym_eigen3(&h);
    if vals.iter().product::<f64>().abs() <= 1e-10 {
        return Err(Error::DegenerateHessian);
    }
    let axes = right_handed(vecs.transpose());
    Ok(LocalFrame::assemble(sp, problem, vec![], vals.iter().copied().collect(), axes))
}

pub fn local_frame_single(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<LocalFrame> {
    expect_kind(sp, PointKind::SpOnSurface, 1)?;
    let (m, p) = restricted_hessian(problem, sp)?;
    let (vals, vecs) = sym_eigen2(&m);
    if (vals[0] * vals[1]).abs() <= 1e-10 {
        return Err(Error::DegenerateRestrictedHessian);
    }
    let alpha = sp.alphas[0];
    let grad = eval_real(problem.amplitude.components[sp.components[0]].g.as_ref(), sp.location.vector()).grad;
    let t2 = p * vecs.column(0);
    let t3 = p * vecs.column(1);
    let axes = right_handed(Matrix3::from_rows(&[(grad * alpha).transpose(), t2.transpose(), t3.transpose()]));
    Ok(LocalFrame::assemble(sp, problem, vec![alpha], vec![vals[0], vals[1]], axes))
}

pub fn local_frame_double(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<LocalFrame> {
    expect_kind(sp, PointKind::SpOnCrossing, 2)?;
    let beta = crossing_curvature(problem, sp)?;
    let (_, t) = crossing_geometry(problem, sp)?;
    let x = sp.location.vector();
    let comps = &problem.amplitude.components;
    let ga = eval_real(comps[sp.components[0]].g.as_ref(), x).grad * sp.alphas[0];
    let gb = eval_real(comps[sp.components[1]].g.as_ref(), x).grad * sp.alphas[1];
    let axes = right_handed(Matrix3::from_rows(&[ga.transpose(), gb.transpose(), t.transpose()]));
    Ok(LocalFrame::assemble(sp, problem, sp.alphas.clone(), vec![beta], axes))
}

pub fn local_frame_triple(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<LocalFrame> {
    expect_kind(sp, PointKind::TripleCrossing, 3)?;
    let x = sp.location.vector();
    let rows: Vec<_> = sp
        .components
        .iter()
        .zip(&sp.alphas)
        .map(|(&k, &a)| (eval_real(problem.amplitude.components[k].g.as_ref(), x).grad * a).transpose())
        .collect();
    let axes = Matrix3::from_rows(&rows);
    if axes.determinant().abs() <= 1e-10 {
        return Err(Error::SingularGradientMatrix);
    }
    Ok(LocalFrame::assemble(sp, problem, sp.alphas.clone(), vec![], axes))
}

/// Cone coordinates at a conical point: scaled Hessian eigenvectors with
/// the odd-signed direction last.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCoordinates {
    pub axes: Matrix3<f64>,
    /// `∇G` in cone coordinates.
    pub alphas: [f64; 3],
    pub quadric_sign: f64,
}

pub(crate) fn cone_coordinates(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<ConeCoordinates> {
    let x = sp.location.vector();
    let comp = sp.components.first().ok_or(Error::MissingFrame)?;
    let h = eval_real(problem.amplitude.components[*comp].g.as_ref(), x).hess;
    let (vals, vecs) = sym_eigen3(&h);
    let pos = vals.iter().filter(|&&v| v >= 1e-8).count();
    let neg = vals.iter().filter(|&&v| v <= -1e-8).count();
    let (order, sign) = match (pos, neg) {
        (2, 1) => ([0, 1, 2], 1.0),
        (1, 2) => ([1, 2, 0], -1.0),
        sig => return Err(Error::WrongSignature(sig)),
    };
    let rows: Vec<_> = order
        .iter()
        .map(|&k| (vecs.column(k) * (vals[k].abs() / 2.0).sqrt()).transpose())
        .collect();
    let axes = right_handed(Matrix3::from_rows(&rows));
    let grad = eval_real(problem.phase.field.as_ref(), x).grad;
    let inv_t = axes.transpose().try_inverse().ok_or(Error::SingularGradientMatrix)?;
    let a = inv_t * grad;
    Ok(ConeCoordinates { axes, alphas: [a[0], a[1], a[2]], quadric_sign: sign })
}

pub fn local_frame_cone(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<LocalFrame> {
    if sp.kind != PointKind::Conical {
        return Err(Error::InvalidSpec(format!("expected CONICAL, got {}", sp.kind)));
    }
    let cone = cone_coordinates(problem, sp)?;
    let mut f = LocalFrame::assemble(sp, problem, cone.alphas.to_vec(), vec![], cone.axes);
    f.quadric_sign = cone.quadric_sign;
    Ok(f)
}

/// Frame for any special kind.
pub fn local_frame(problem: &ProblemSpec, sp: &SpecialPoint) -> Result<LocalFrame> {
    match sp.kind {
        PointKind::SpInterior => local_frame_interior(problem, sp),
        PointKind::SpOnSurface => local_frame_single(problem, sp),
        PointKind::SpOnCrossing => local_frame_double(problem, sp),
        PointKind::TripleCrossing => local_frame_triple(problem, sp),
        PointKind::Conical => local_frame_cone(problem, sp),
        PointKind::NonSpecial => Err(Error::MissingFrame),
    }
}
