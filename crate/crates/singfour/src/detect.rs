//! Location and classification of special points.

use std::cmp::Ordering;
use std::fmt;

use log::{debug, warn};
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::asym::frame;
use crate::field::ScalarField3;
use crate::geometry::{real_matrix, real_part, to_complex, RPoint3};
use crate::linalg::{newton, sym_eigen3};
use crate::problem::{bypass_side, ProblemSpec, SURFACE_TOL};
use crate::{Error, Result};

/// Quantities at or below this (relative) size make a point special.
const SPECIAL_TOL: f64 = 1e-11;
/// Quantities between `SPECIAL_TOL` and this are reported as indeterminate.
const INDETERMINATE_TOL: f64 = 1e-9;
const TRANSVERSAL_TOL: f64 = 1e-10;
const DECOMPOSITION_TOL: f64 = 1e-9;
const CONE_EIG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    SpInterior,
    SpOnSurface,
    SpOnCrossing,
    TripleCrossing,
    Conical,
    NonSpecial,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::SpInterior => "SP_INTERIOR",
            PointKind::SpOnSurface => "SP_ON_SURFACE",
            PointKind::SpOnCrossing => "SP_ON_CROSSING",
            PointKind::TripleCrossing => "TRIPLE_CROSSING",
            PointKind::Conical => "CONICAL",
            PointKind::NonSpecial => "NON_SPECIAL",
        })
    }
}

/// Degeneracies that keep a point out of the asymptotic sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointFlag {
    DegenerateHessian,
    DegenerateRestrictedHessian,
    NearDegenerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub contributes: bool,
    pub reason: String,
}

impl Verdict {
    fn yes(reason: impl Into<String>) -> Self {
        Verdict { contributes: true, reason: reason.into() }
    }

    fn no(reason: impl Into<String>) -> Self {
        Verdict { contributes: false, reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPoint {
    pub location: RPoint3,
    pub kind: PointKind,
    /// Indices into the problem's singularity components.
    pub components: Vec<usize>,
    pub labels: Vec<String>,
    /// Coefficients of `∇G` along the component gradients (`∇G = Σ α_k ∇g_k`).
    pub alphas: Vec<f64>,
    /// Deformation direction proving a point is not special.
    pub witness: Option<Vector3<f64>>,
    pub verdict: Option<Verdict>,
    pub flags: Vec<PointFlag>,
}

impl SpecialPoint {
    fn new(problem: &ProblemSpec, location: Vector3<f64>, kind: PointKind, components: Vec<usize>) -> Result<Self> {
        let labels = components
            .iter()
            .map(|&k| problem.amplitude.components[k].label.clone())
            .collect();
        Ok(SpecialPoint {
            location: RPoint3::from_vector(location)?,
            kind,
            components,
            labels,
            alphas: Vec::new(),
            witness: None,
            verdict: None,
            flags: Vec::new(),
        })
    }

    pub fn contributes(&self) -> bool {
        self.verdict.as_ref().map_or(false, |v| v.contributes)
    }

    pub fn is_degenerate(&self) -> bool {
        !self.flags.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct DetectOptions {
    /// Seed grid nodes per axis over the search region.
    pub grid: usize,
    pub seeds: Vec<RPoint3>,
    /// Residual tolerance for Newton.
    pub tol: f64,
    pub max_iter: usize,
    pub dedup_radius: f64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            grid: 9,
            seeds: Vec::new(),
            tol: 1e-11,
            max_iter: 50,
            dedup_radius: 1e-6,
        }
    }
}

impl DetectOptions {
    pub fn seeds_for(&self, problem: &ProblemSpec) -> Vec<RPoint3> {
        let mut s = problem.region.grid(self.grid);
        s.extend(self.seeds.iter().copied());
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct Detection {
    pub points: Vec<SpecialPoint>,
}

impl Detection {
    pub fn contributing(&self) -> impl Iterator<Item = &SpecialPoint> {
        self.points.iter().filter(|p| p.contributes())
    }
}

pub(crate) struct Local {
    pub value: f64,
    pub grad: Vector3<f64>,
    pub hess: Matrix3<f64>,
}

pub(crate) fn eval_real(f: &dyn ScalarField3, x: &Vector3<f64>) -> Local {
    let xc = to_complex(x);
    Local {
        value: f.value(&xc).re,
        grad: real_part(&f.gradient(&xc)),
        hess: real_matrix(&f.hessian(&xc)),
    }
}

fn det3(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    a.dot(&b.cross(c))
}

fn vec3(x: &DVector<f64>) -> Vector3<f64> {
    Vector3::new(x[0], x[1], x[2])
}

fn dedup(mut pts: Vec<SpecialPoint>, radius: f64) -> Vec<SpecialPoint> {
    pts.sort_by(location_order);
    let mut out: Vec<SpecialPoint> = Vec::new();
    for p in pts {
        let dup = out.iter().any(|q| {
            q.kind == p.kind && q.components == p.components && q.location.distance(&p.location) <= radius
        });
        if !dup {
            out.push(p);
        }
    }
    out
}

fn location_order(a: &SpecialPoint, b: &SpecialPoint) -> Ordering {
    let (u, v) = (a.location.vector(), b.location.vector());
    (0..3)
        .map(|k| u[k].total_cmp(&v[k]))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
        .then(a.kind.cmp(&b.kind))
        .then(a.components.cmp(&b.components))
}

fn run_seeds<F>(seeds: &[RPoint3], what: &str, mut solve: F) -> Result<Vec<SpecialPoint>>
where
    F: FnMut(&Vector3<f64>) -> Result<Option<SpecialPoint>>,
{
    let mut found = Vec::new();
    let mut dropped = 0usize;
    for s in seeds {
        match solve(s.vector()) {
            Ok(Some(p)) => found.push(p),
            Ok(None) => {}
            Err(Error::NoConvergence(_)) => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    if dropped > 0 {
        debug!("{what}: {dropped} of {} seeds did not converge", seeds.len());
    }
    Ok(found)
}

/// Stationary points of `G` off all singularities.
pub fn find_sp_interior(problem: &ProblemSpec, seeds: &[RPoint3], tol: f64) -> Result<Vec<SpecialPoint>> {
    let g = problem.phase.field.as_ref();
    let found = run_seeds(seeds, "interior", |s| {
        let sys = |x: &DVector<f64>| {
            let l = eval_real(g, &vec3(x));
            (DVector::from_column_slice(l.grad.as_slice()), DMatrix::from_column_slice(3, 3, l.hess.as_slice()))
        };
        let x = vec3(&newton(sys, DVector::from_column_slice(s.as_slice()), tol, 50)?);
        if !problem.region.contains(&x) {
            return Ok(None);
        }
        let on_surface = problem
            .amplitude
            .components
            .iter()
            .any(|c| eval_real(c.g.as_ref(), &x).value.abs() <= SURFACE_TOL);
        if on_surface {
            return Ok(None);
        }
        let mut sp = SpecialPoint::new(problem, x, PointKind::SpInterior, vec![])?;
        if eval_real(g, &x).hess.determinant().abs() <= 1e-10 {
            sp.flags.push(PointFlag::DegenerateHessian);
        }
        sp.verdict = Some(contribution_verdict(&sp, problem)?);
        Ok(Some(sp))
    })?;
    Ok(dedup(found, 1e-6))
}

/// Stationary points of `G` restricted to `σ_comp`.
pub fn find_sp_on_surface(problem: &ProblemSpec, comp: usize, seeds: &[RPoint3], tol: f64) -> Result<Vec<SpecialPoint>> {
    let gf = problem.amplitude.components[comp].g.as_ref();
    let phase = problem.phase.field.as_ref();
    let found = run_seeds(seeds, "surface", |s| {
        let l0 = eval_real(gf, s);
        let lg0 = eval_real(phase, s);
        let n2 = l0.grad.norm_squared();
        if n2 == 0.0 {
            return Err(Error::NoConvergence(0));
        }
        let a0 = lg0.grad.dot(&l0.grad) / n2;
        let sys = |y: &DVector<f64>| {
            let x = vec3(y);
            let a = y[3];
            let lg = eval_real(gf, &x);
            let lp = eval_real(phase, &x);
            let mut r = DVector::zeros(4);
            r[0] = lg.value;
            let d = lp.grad - lg.grad * a;
            r.rows_mut(1, 3).copy_from(&d);
            let mut j = DMatrix::zeros(4, 4);
            for k in 0..3 {
                j[(0, k)] = lg.grad[k];
                j[(k + 1, 3)] = -lg.grad[k];
                for m in 0..3 {
                    j[(k + 1, m)] = lp.hess[(k, m)] - a * lg.hess[(k, m)];
                }
            }
            (r, j)
        };
        let y = newton(sys, DVector::from_vec(vec![s[0], s[1], s[2], a0]), tol, 50)?;
        let x = vec3(&y);
        let alpha = y[3];
        if !problem.region.contains(&x) || alpha.abs() <= SPECIAL_TOL * (1.0 + eval_real(phase, &x).grad.norm()) {
            return Ok(None);
        }
        let mut sp = SpecialPoint::new(problem, x, PointKind::SpOnSurface, vec![comp])?;
        sp.alphas = vec![alpha];
        if let Err(Error::DegenerateRestrictedHessian) = frame::restricted_hessian(problem, &sp) {
            sp.flags.push(PointFlag::DegenerateRestrictedHessian);
        }
        sp.verdict = Some(contribution_verdict(&sp, problem)?);
        Ok(Some(sp))
    })?;
    Ok(dedup(found, 1e-6))
}

fn decompose2(ga: &Vector3<f64>, gb: &Vector3<f64>, grad: &Vector3<f64>) -> Result<[f64; 2]> {
    let m = nalgebra::Matrix3x2::from_columns(&[*ga, *gb]);
    let sol = (m.transpose() * m)
        .try_inverse()
        .ok_or(Error::SingularGradientMatrix)?
        * (m.transpose() * grad);
    let res = (m * sol - grad).norm();
    if res > DECOMPOSITION_TOL * grad.norm().max(1.0) {
        return Err(Error::DecompositionResidual(res));
    }
    Ok([sol[0], sol[1]])
}

/// Stationary points of `G` along the crossing line of two singularities.
pub fn find_sp_on_crossing(
    problem: &ProblemSpec,
    a: usize,
    b: usize,
    seeds: &[RPoint3],
    tol: f64,
) -> Result<Vec<SpecialPoint>> {
    let ca = &problem.amplitude.components[a];
    let cb = &problem.amplitude.components[b];
    let phase = problem.phase.field.as_ref();
    let found = run_seeds(seeds, "crossing", |s| {
        let sys = |y: &DVector<f64>| {
            let x = vec3(y);
            let la = eval_real(ca.g.as_ref(), &x);
            let lb = eval_real(cb.g.as_ref(), &x);
            let lp = eval_real(phase, &x);
            let r = DVector::from_vec(vec![la.value, lb.value, det3(&la.grad, &lb.grad, &lp.grad)]);
            let mut j = DMatrix::zeros(3, 3);
            for k in 0..3 {
                j[(0, k)] = la.grad[k];
                j[(1, k)] = lb.grad[k];
                let ha: Vector3<f64> = la.hess.column(k).into();
                let hb: Vector3<f64> = lb.hess.column(k).into();
                let hp: Vector3<f64> = lp.hess.column(k).into();
                j[(2, k)] = det3(&ha, &lb.grad, &lp.grad) + det3(&la.grad, &hb, &lp.grad) + det3(&la.grad, &lb.grad, &hp);
            }
            (r, j)
        };
        let x = vec3(&newton(sys, DVector::from_column_slice(s.as_slice()), tol, 50)?);
        if !problem.region.contains(&x) {
            return Ok(None);
        }
        let la = eval_real(ca.g.as_ref(), &x);
        let lb = eval_real(cb.g.as_ref(), &x);
        if la.grad.cross(&lb.grad).norm() <= TRANSVERSAL_TOL {
            return Err(Error::NonTransversal(ca.label.clone(), cb.label.clone()));
        }
        let grad = eval_real(phase, &x).grad;
        let alphas = decompose2(&la.grad, &lb.grad, &grad)?;
        let mut sp = SpecialPoint::new(problem, x, PointKind::SpOnCrossing, vec![a, b])?;
        sp.alphas = alphas.to_vec();
        match frame::crossing_curvature(problem, &sp) {
            Ok(beta) if beta.abs() <= 1e-6 => sp.flags.push(PointFlag::NearDegenerate),
            Err(Error::DegenerateCurvature(_)) => sp.flags.push(PointFlag::NearDegenerate),
            _ => {}
        }
        sp.verdict = Some(contribution_verdict(&sp, problem)?);
        Ok(Some(sp))
    })?;
    Ok(dedup(found, 1e-6))
}

/// Points where three singularities meet.
pub fn find_triple_crossings(
    problem: &ProblemSpec,
    a: usize,
    b: usize,
    c: usize,
    seeds: &[RPoint3],
    tol: f64,
) -> Result<Vec<SpecialPoint>> {
    if a == b || b == c || a == c {
        return Err(Error::InvalidSpec("triple crossing needs three distinct components".into()));
    }
    let comps = [a, b, c].map(|k| problem.amplitude.components[k].g.clone());
    let phase = problem.phase.field.as_ref();
    let found = run_seeds(seeds, "triple", |s| {
        let sys = |y: &DVector<f64>| {
            let x = vec3(y);
            let ls: Vec<Local> = comps.iter().map(|g| eval_real(g.as_ref(), &x)).collect();
            let r = DVector::from_iterator(3, ls.iter().map(|l| l.value));
            let j = DMatrix::from_fn(3, 3, |r, c| ls[r].grad[c]);
            (r, j)
        };
        let x = vec3(&newton(sys, DVector::from_column_slice(s.as_slice()), tol, 50)?);
        if !problem.region.contains(&x) {
            return Ok(None);
        }
        let grads: Vec<Vector3<f64>> = comps.iter().map(|g| eval_real(g.as_ref(), &x).grad).collect();
        let m = Matrix3::from_columns(&grads);
        if m.determinant().abs() <= 1e-10 {
            return Err(Error::SingularGradientMatrix);
        }
        let grad = eval_real(phase, &x).grad;
        let alphas = m.lu().solve(&grad).ok_or(Error::SingularGradientMatrix)?;
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let t = grads[i].cross(&grads[j]);
            if t.dot(&grad).abs() <= SPECIAL_TOL * t.norm() * grad.norm().max(1e-300) {
                debug!("triple point is stationary on a crossing line; excluded");
                return Ok(None);
            }
        }
        let mut sp = SpecialPoint::new(problem, x, PointKind::TripleCrossing, vec![a, b, c])?;
        sp.alphas = alphas.iter().copied().collect();
        sp.verdict = Some(contribution_verdict(&sp, problem)?);
        Ok(Some(sp))
    })?;
    Ok(dedup(found, 1e-6))
}

/// Hessian inertia `(positive, negative)` with a magnitude floor.
fn signature(h: &Matrix3<f64>) -> (usize, usize) {
    let (vals, _) = sym_eigen3(h);
    let pos = vals.iter().filter(|&&v| v >= CONE_EIG_TOL).count();
    let neg = vals.iter().filter(|&&v| v <= -CONE_EIG_TOL).count();
    (pos, neg)
}

/// Conical points of `σ_comp`.
pub fn find_conical_points(problem: &ProblemSpec, comp: usize, seeds: &[RPoint3], tol: f64) -> Result<Vec<SpecialPoint>> {
    let gf = problem.amplitude.components[comp].g.as_ref();
    let found = run_seeds(seeds, "conical", |s| {
        let sys = |y: &DVector<f64>| {
            let l = eval_real(gf, &vec3(y));
            (DVector::from_column_slice(l.grad.as_slice()), DMatrix::from_column_slice(3, 3, l.hess.as_slice()))
        };
        let x = vec3(&newton(sys, DVector::from_column_slice(s.as_slice()), tol, 50)?);
        let l = eval_real(gf, &x);
        if !problem.region.contains(&x) || l.value.abs() > SURFACE_TOL {
            return Ok(None);
        }
        let sig = signature(&l.hess);
        if !matches!(sig, (2, 1) | (1, 2)) {
            warn!("critical point of {} with signature {:?} is not conical", problem.amplitude.components[comp].label, sig);
            return Ok(None);
        }
        let mut sp = SpecialPoint::new(problem, x, PointKind::Conical, vec![comp])?;
        sp.alphas = frame::cone_coordinates(problem, &sp)?.alphas.to_vec();
        sp.verdict = Some(contribution_verdict(&sp, problem)?);
        Ok(Some(sp))
    })?;
    Ok(dedup(found, 1e-6))
}

/// Runs every finder over the default seed set.
pub fn detect_all(problem: &ProblemSpec, opts: &DetectOptions) -> Result<Detection> {
    let seeds = opts.seeds_for(problem);
    let n = problem.amplitude.components.len();
    let tol = opts.tol;
    let mut pts = find_sp_interior(problem, &seeds, tol)?;
    for a in 0..n {
        pts.extend(find_sp_on_surface(problem, a, &seeds, tol)?);
        pts.extend(find_conical_points(problem, a, &seeds, tol)?);
        for b in a + 1..n {
            pts.extend(find_sp_on_crossing(problem, a, b, &seeds, tol)?);
            for c in b + 1..n {
                pts.extend(find_triple_crossings(problem, a, b, c, &seeds, tol)?);
            }
        }
    }
    Ok(Detection { points: dedup(pts, opts.dedup_radius) })
}

fn classify_tol(q: f64, what: &'static str) -> Result<bool> {
    if q <= SPECIAL_TOL {
        Ok(true)
    } else if q <= INDETERMINATE_TOL {
        Err(Error::Indeterminate(what))
    } else {
        Ok(false)
    }
}

/// Classifies an arbitrary real point.
pub fn classify_point(problem: &ProblemSpec, p: &RPoint3) -> Result<SpecialPoint> {
    let x = *p.vector();
    let incident: Vec<usize> = problem
        .amplitude
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| eval_real(c.g.as_ref(), &x).value.abs() <= SURFACE_TOL)
        .map(|(k, _)| k)
        .collect();
    let grad = eval_real(problem.phase.field.as_ref(), &x).grad;
    let grads: Vec<Vector3<f64>> = incident
        .iter()
        .map(|&k| eval_real(problem.amplitude.components[k].g.as_ref(), &x).grad)
        .collect();
    let mut sp = match incident.len() {
        0 => {
            if classify_tol(grad.norm(), "∇G")? {
                let mut sp = SpecialPoint::new(problem, x, PointKind::SpInterior, vec![])?;
                if eval_real(problem.phase.field.as_ref(), &x).hess.determinant().abs() <= 1e-10 {
                    sp.flags.push(PointFlag::DegenerateHessian);
                }
                sp
            } else {
                let mut sp = SpecialPoint::new(problem, x, PointKind::NonSpecial, vec![])?;
                sp.witness = Some(grad);
                sp
            }
        }
        1 => {
            let gg = grads[0];
            if gg.norm() <= INDETERMINATE_TOL {
                let h = eval_real(problem.amplitude.components[incident[0]].g.as_ref(), &x).hess;
                let sig = signature(&h);
                if !matches!(sig, (2, 1) | (1, 2)) {
                    return Err(Error::WrongSignature(sig));
                }
                let mut sp = SpecialPoint::new(problem, x, PointKind::Conical, incident)?;
                sp.alphas = frame::cone_coordinates(problem, &sp)?.alphas.to_vec();
                sp
            } else {
                if grad.norm() <= INDETERMINATE_TOL {
                    return Err(Error::Indeterminate("∇G on a singular surface"));
                }
                let q = gg.cross(&grad).norm() / (gg.norm() * grad.norm());
                if classify_tol(q, "∇g×∇G")? {
                    let mut sp = SpecialPoint::new(problem, x, PointKind::SpOnSurface, incident)?;
                    sp.alphas = vec![grad.dot(&gg) / gg.norm_squared()];
                    if let Err(Error::DegenerateRestrictedHessian) = frame::restricted_hessian(problem, &sp) {
                        sp.flags.push(PointFlag::DegenerateRestrictedHessian);
                    }
                    sp
                } else {
                    let mut sp = SpecialPoint::new(problem, x, PointKind::NonSpecial, incident)?;
                    sp.witness = Some(gg.cross(&gg.cross(&grad)));
                    sp
                }
            }
        }
        2 => {
            let t = grads[0].cross(&grads[1]);
            if t.norm() <= TRANSVERSAL_TOL {
                let c = &problem.amplitude.components;
                return Err(Error::NonTransversal(c[incident[0]].label.clone(), c[incident[1]].label.clone()));
            }
            let q = t.dot(&grad).abs() / (t.norm() * grad.norm().max(1e-300));
            if grad.norm() > INDETERMINATE_TOL && !classify_tol(q, "t·∇G")? {
                let mut sp = SpecialPoint::new(problem, x, PointKind::NonSpecial, incident)?;
                sp.witness = Some(t);
                sp
            } else {
                let mut sp = SpecialPoint::new(problem, x, PointKind::SpOnCrossing, incident)?;
                sp.alphas = decompose2(&grads[0], &grads[1], &grad)?.to_vec();
                if frame::crossing_curvature(problem, &sp).map_or(true, |b| b.abs() <= 1e-6) {
                    sp.flags.push(PointFlag::NearDegenerate);
                }
                sp
            }
        }
        3 => {
            let m = Matrix3::from_columns(&grads);
            if m.determinant().abs() <= 1e-10 {
                return Err(Error::SingularGradientMatrix);
            }
            let alphas = m.lu().solve(&grad).ok_or(Error::SingularGradientMatrix)?;
            let mut sp = SpecialPoint::new(problem, x, PointKind::TripleCrossing, incident)?;
            sp.alphas = alphas.iter().copied().collect();
            sp
        }
        n => return Err(Error::InvalidSpec(format!("{n} singularities meet at one point"))),
    };
    sp.verdict = Some(contribution_verdict(&sp, problem)?);
    Ok(sp)
}

/// Whether a special point contributes, from the sides on which Γ bypasses
/// the singularities through it.
pub fn contribution_verdict(sp: &SpecialPoint, problem: &ProblemSpec) -> Result<Verdict> {
    let (n_comp, n_alpha) = match sp.kind {
        PointKind::NonSpecial => return Ok(Verdict::no("non-special")),
        PointKind::SpInterior => return Ok(Verdict::yes("interior")),
        PointKind::SpOnSurface => (1, 1),
        PointKind::SpOnCrossing => (2, 2),
        PointKind::TripleCrossing => (3, 3),
        PointKind::Conical => (1, 3),
    };
    if sp.components.len() != n_comp || sp.alphas.len() != n_alpha {
        return Err(Error::MissingFrame);
    }
    if sp.kind == PointKind::Conical {
        return cone_verdict(sp, problem);
    }
    for (&k, &alpha) in sp.components.iter().zip(&sp.alphas) {
        let comp = &problem.amplitude.components[k];
        let side = bypass_side(&problem.shift, comp, &sp.location)?;
        if alpha * side.sign() >= 0.0 {
            return Ok(Verdict::no(format!("bypass-above:{}", comp.label)));
        }
    }
    Ok(Verdict::yes("bypass-below"))
}

fn cone_verdict(sp: &SpecialPoint, problem: &ProblemSpec) -> Result<Verdict> {
    let cone = frame::cone_coordinates(problem, sp)?;
    let e = cone.axes * problem.shift.eta();
    let a = cone.alphas;
    let er = (e[0] * e[0] + e[1] * e[1]).sqrt();
    let ar = (a[0] * a[0] + a[1] * a[1]).sqrt();
    let label = &problem.amplitude.components[sp.components[0]].label;
    if e[2].abs() <= er * (1.0 + 1e-12) {
        return Err(Error::TangentialShift(label.clone()));
    }
    let in_minus = e[2] < 0.0;
    Ok(if in_minus && a[2] > ar {
        Verdict::yes("cone:K-")
    } else if !in_minus && a[2] < -ar {
        Verdict::yes("cone:K+")
    } else {
        Verdict::no("cone:deformable")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnField, Gaussian, Quadratic, SharedField};
    use crate::geometry::{CMat3, CVec3};
    use crate::problem::{AmplitudeSpec, DomainShift, PhaseSpec, SearchRegion, SingularityComponent};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn problem(phase: SharedField, comps: Vec<(SharedField, f64)>, eta: Vector3<f64>) -> ProblemSpec {
        let comps = comps
            .into_iter()
            .enumerate()
            .map(|(k, (g, mu))| SingularityComponent::new(format!("g{k}"), g, mu).unwrap())
            .collect();
        ProblemSpec::new(
            "t",
            AmplitudeSpec::new(Arc::new(Gaussian::standard()), comps),
            PhaseSpec::new(phase, [0.0; 3]),
            DomainShift::new(eta).unwrap(),
            SearchRegion::cube(2.0).unwrap(),
            Complex64::new(1.0, 0.0),
        )
        .unwrap()
    }

    fn lin(c: f64, v: [f64; 3]) -> SharedField {
        Arc::new(Quadratic::affine(c, Vector3::from(v)))
    }

    fn seeds() -> Vec<RPoint3> {
        SearchRegion::cube(2.0).unwrap().grid(5)
    }

    #[test]
    fn interior_saddle_found_at_origin() {
        let p = problem(
            Arc::new(Quadratic::diagonal(0.0, Vector3::zeros(), [1.0, 1.0, -1.0])),
            vec![],
            Vector3::new(0.0, 0.0, 0.1),
        );
        let s = [RPoint3::new(0.3, -0.2, 0.1).unwrap()];
        let pts = find_sp_interior(&p, &s, 1e-11).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].location.vector().norm() < 1e-12);
        assert!(pts[0].flags.is_empty());
        assert!(pts[0].contributes());
    }

    #[test]
    fn linear_phase_has_no_interior_point() {
        let p = problem(lin(0.0, [1.0, 2.0, -3.0]), vec![], Vector3::new(0.0, 0.0, 0.1));
        assert!(find_sp_interior(&p, &seeds(), 1e-11).unwrap().is_empty());
    }

    #[test]
    fn quartic_phase_is_flagged_degenerate() {
        let quartic = FnField::new(
            "quartic",
            |x: &CVec3| x.dot(x) * x.dot(x) / 4.0,
            |x: &CVec3| x * x.dot(x),
            |x: &CVec3| CMat3::identity() * x.dot(x) + x * x.transpose() * Complex64::new(2.0, 0.0),
        );
        let p = problem(Arc::new(quartic), vec![], Vector3::new(0.0, 0.0, 0.1));
        let s = [RPoint3::new(0.01, 0.0, 0.0).unwrap()];
        let pts = find_sp_interior(&p, &s, 1e-11).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].flags, vec![PointFlag::DegenerateHessian]);
    }

    #[test]
    fn surface_point_on_plane() {
        let p = problem(
            Arc::new(Quadratic::diagonal(0.0, Vector3::x(), [0.0, 1.0, 1.0])),
            vec![(lin(-1.0, [1.0, 0.0, 0.0]), -1.0)],
            Vector3::new(-0.1, 0.0, 0.0),
        );
        let pts = find_sp_on_surface(&p, 0, &seeds(), 1e-11).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0].location.vector() - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((pts[0].alphas[0] - 1.0).abs() < 1e-12);
        assert!(pts[0].contributes());
        let flipped = p.with_shift(DomainShift::new(Vector3::new(0.1, 0.0, 0.0)).unwrap());
        let v = contribution_verdict(&pts[0], &flipped).unwrap();
        assert!(!v.contributes);
    }

    #[test]
    fn surface_point_on_paraboloid() {
        let c = 2.5;
        let g = Quadratic::diagonal(0.0, Vector3::z(), [-2.0, -2.0, 0.0]);
        let p = problem(lin(0.0, [0.0, 0.0, c]), vec![(Arc::new(g), -0.5)], Vector3::new(0.0, 0.0, -0.1));
        let pts = find_sp_on_surface(&p, 0, &seeds(), 1e-11).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].location.vector().norm() < 1e-12);
        assert!((pts[0].alphas[0] - c).abs() < 1e-12);
    }

    #[test]
    fn crossing_point_canonical_and_swapped() {
        let p = problem(
            Arc::new(Quadratic::diagonal(0.0, Vector3::new(1.0, 1.0, 0.0), [0.0, 0.0, 1.0])),
            vec![(lin(0.0, [1.0, 0.0, 0.0]), -1.0), (lin(0.0, [0.0, 2.0, 0.0]), -1.0)],
            Vector3::new(-0.1, -0.1, 0.0),
        );
        let ab = find_sp_on_crossing(&p, 0, 1, &seeds(), 1e-11).unwrap();
        let ba = find_sp_on_crossing(&p, 1, 0, &seeds(), 1e-11).unwrap();
        assert_eq!(ab.len(), 1);
        assert_eq!(ba.len(), 1);
        assert!(ab[0].location.vector().norm() < 1e-12);
        assert!((ab[0].alphas[0] - 1.0).abs() < 1e-12 && (ab[0].alphas[1] - 0.5).abs() < 1e-12);
        assert!((ba[0].alphas[0] - 0.5).abs() < 1e-12 && (ba[0].alphas[1] - 1.0).abs() < 1e-12);
        assert_eq!(ab[0].contributes(), ba[0].contributes());
        assert!(ab[0].contributes());
    }

    #[test]
    fn parallel_planes_are_not_transversal() {
        let p = problem(
            lin(0.0, [0.0, 0.0, 1.0]),
            vec![(lin(0.0, [1.0, 0.0, 0.0]), -1.0), (lin(0.0, [1.0, 0.0, 0.0]), -0.5)],
            Vector3::new(-0.1, 0.0, 0.0),
        );
        let err = classify_point(&p, &RPoint3::origin()).unwrap_err();
        assert!(matches!(err, Error::NonTransversal(..)));
    }

    #[test]
    fn triple_crossing_alphas() {
        let p = problem(
            lin(0.0, [2.0, 3.0, 5.0]),
            vec![
                (lin(0.0, [1.0, 0.0, 0.0]), -1.0),
                (lin(0.0, [0.0, 1.0, 0.0]), -1.0),
                (lin(0.0, [0.0, 0.0, 1.0]), -1.0),
            ],
            Vector3::new(-0.1, -0.1, -0.1),
        );
        let pts = find_triple_crossings(&p, 0, 1, 2, &seeds(), 1e-11).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].alphas, vec![2.0, 3.0, 5.0]);
        assert!(pts[0].contributes());
        let above = p.with_shift(DomainShift::new(Vector3::new(-0.1, 0.1, -0.1)).unwrap());
        assert_eq!(contribution_verdict(&pts[0], &above).unwrap().reason, "bypass-above:g1");
    }

    #[test]
    fn conical_points_by_signature() {
        let phase = lin(0.0, [0.0, 0.0, 1.0]);
        let eta = Vector3::new(0.0, 0.0, -0.1);
        let cone = |d: [f64; 3], c: f64| -> SharedField { Arc::new(Quadratic::diagonal(c, Vector3::zeros(), d)) };
        let p21 = problem(phase.clone(), vec![(cone([2.0, 2.0, -2.0], 0.0), -1.0)], eta);
        let p12 = problem(phase.clone(), vec![(cone([2.0, -2.0, -2.0], 0.0), -1.0)], Vector3::new(-0.1, 0.0, 0.0));
        let sphere = problem(phase, vec![(cone([2.0, 2.0, 2.0], -1.0), -1.0)], eta);
        let a = find_conical_points(&p21, 0, &seeds(), 1e-11).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].contributes());
        let b = find_conical_points(&p12, 0, &seeds(), 1e-11).unwrap();
        assert_eq!(b.len(), 1);
        assert!(find_conical_points(&sphere, 0, &seeds(), 1e-11).unwrap().is_empty());
    }

    #[test]
    fn classify_witnesses() {
        let p = problem(
            lin(0.0, [1.0, 2.0, 0.5]),
            vec![(lin(0.0, [1.0, 0.0, 0.0]), -1.0), (lin(0.0, [0.0, 1.0, 0.0]), -1.0)],
            Vector3::new(-0.1, -0.1, 0.0),
        );
        let off = classify_point(&p, &RPoint3::new(0.5, 0.5, 0.0).unwrap()).unwrap();
        assert_eq!(off.kind, PointKind::NonSpecial);
        assert_eq!(off.witness, Some(Vector3::new(1.0, 2.0, 0.5)));
        let one = classify_point(&p, &RPoint3::new(0.0, 0.5, 0.0).unwrap()).unwrap();
        let a = one.witness.unwrap();
        assert_eq!(one.kind, PointKind::NonSpecial);
        assert!(a.x.abs() < 1e-15 && a.dot(&Vector3::new(1.0, 2.0, 0.5)).abs() > 0.1);
        let two = classify_point(&p, &RPoint3::new(0.0, 0.0, 0.3).unwrap()).unwrap();
        assert_eq!(two.kind, PointKind::NonSpecial);
        assert_eq!(two.witness, Some(Vector3::new(0.0, 0.0, 1.0)));
        assert!(!two.contributes());
    }
}
