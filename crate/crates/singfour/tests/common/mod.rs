#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use singfour::detect::PointKind;
use singfour::field::{Gaussian, Quadratic, SharedField};
use singfour::{AmplitudeSpec, DomainShift, PhaseSpec, ProblemSpec, RPoint3, SearchRegion, SingularityComponent};

pub const EXPONENTS: [f64; 4] = [-1.0, -0.5, 0.5, 1.5];

/// A random problem built so that `point` is of the requested kind.
#[derive(Debug, Clone)]
pub struct RandomCase {
    pub problem: ProblemSpec,
    pub point: RPoint3,
    pub kind: PointKind,
}

pub fn symmetric<R: Rng>(rng: &mut R, scale: f64) -> Matrix3<f64> {
    let m = Matrix3::from_fn(|_, _| rng.gen_range(-scale..scale));
    (m + m.transpose()) * 0.5
}

pub fn unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.2 && n <= 1.0 {
            return v / n;
        }
    }
}

/// `c + b·(x − p) + ½ (x − p)ᵀ A (x − p)` as a [`Quadratic`].
pub fn centered(p: &Vector3<f64>, c: f64, b: Vector3<f64>, a: Matrix3<f64>) -> Quadratic {
    Quadratic::new(c - b.dot(p) + 0.5 * p.dot(&(a * p)), b - a * p, a)
}

fn nonzero<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let v = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn random_case<R: Rng>(rng: &mut R, kind: PointKind) -> RandomCase {
    let p = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    let n_incident = match kind {
        PointKind::SpInterior => 0,
        PointKind::SpOnSurface => 1,
        PointKind::SpOnCrossing => 2,
        PointKind::TripleCrossing => 3,
        PointKind::NonSpecial => rng.gen_range(0..3),
        PointKind::Conical => panic!("conical cases are not generated"),
    };
    // well-conditioned normals
    let normals: Vec<Vector3<f64>> = loop {
        let v: Vec<_> = (0..n_incident).map(|_| unit(rng) * rng.gen_range(0.5..2.0)).collect();
        let ok = match n_incident {
            2 => v[0].cross(&v[1]).norm() > 0.3 * v[0].norm() * v[1].norm(),
            3 => Matrix3::from_columns(&v).determinant().abs() > 0.3 * v.iter().map(|x| x.norm()).product::<f64>(),
            _ => true,
        };
        if ok {
            break v;
        }
    };
    let mut comps: Vec<SingularityComponent> = normals
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let g: SharedField = Arc::new(centered(&p, 0.0, *b, symmetric(rng, 0.5)));
            SingularityComponent::new(format!("g{k}"), g, EXPONENTS[rng.gen_range(0..4)]).unwrap()
        })
        .collect();
    if rng.gen_bool(0.5) {
        // a component away from the point
        let c = nonzero(rng, 0.5, 2.0);
        let g: SharedField = Arc::new(centered(&p, c, unit(rng), symmetric(rng, 0.3)));
        comps.push(SingularityComponent::new("far", g, EXPONENTS[rng.gen_range(0..4)]).unwrap());
    }
    let grad = match kind {
        PointKind::SpInterior => Vector3::zeros(),
        PointKind::SpOnSurface => normals[0] * nonzero(rng, 0.3, 2.0),
        PointKind::SpOnCrossing => normals[0] * nonzero(rng, 0.3, 2.0) + normals[1] * nonzero(rng, 0.3, 2.0),
        _ => unit(rng) * rng.gen_range(0.5..2.0),
    };
    let hess = if kind == PointKind::SpInterior {
        // keep the Hessian away from singular
        let q = nalgebra::Rotation3::new(unit(rng) * rng.gen_range(0.0..3.0));
        let d = Vector3::from_fn(|_, _| nonzero(rng, 0.5, 2.0));
        q.matrix() * Matrix3::from_diagonal(&d) * q.matrix().transpose()
    } else {
        symmetric(rng, 1.0)
    };
    let phase = centered(&p, rng.gen_range(-1.0..1.0), grad, hess);
    let eta = unit(rng) * rng.gen_range(0.05..0.5);
    let problem = ProblemSpec::new(
        "random",
        AmplitudeSpec::new(Arc::new(Gaussian::new(Vector3::from_fn(|_, _| rng.gen_range(-0.5..0.5)), 1.0)), comps),
        PhaseSpec::new(Arc::new(phase), [0.0; 3]),
        DomainShift::new(eta).unwrap(),
        SearchRegion::cube(3.0).unwrap(),
        num_complex::Complex64::new(1.0, 0.0),
    )
    .unwrap();
    RandomCase { problem, point: RPoint3::from_vector(p).unwrap(), kind }
}

/// The same problem with `g_k → c_k g_k`.
pub fn rescaled(problem: &ProblemSpec, factors: &[f64]) -> ProblemSpec {
    let comps = problem
        .amplitude
        .components
        .iter()
        .zip(factors)
        .map(|(c, &f)| {
            let g: SharedField = Arc::new(singfour::field::Scaled { inner: c.g.clone(), factor: f });
            SingularityComponent::new(c.label.clone(), g, c.mu).unwrap()
        })
        .collect();
    let mut out = problem.clone();
    out.amplitude = AmplitudeSpec::new(problem.amplitude.smooth.clone(), comps);
    out
}

pub fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
