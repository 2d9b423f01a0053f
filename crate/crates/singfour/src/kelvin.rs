//! The ship-wake integral of a body that starts at `τ = 0` and then moves
//! uniformly along `−z1`, in the frame of the body.
//!
//! Coordinates are `(ξ1, ξ2, ϖ)`. The amplitude is `ξ1ϖ / (g1 g2)` with
//! `g1 = ϖ − ξ1` and the dispersion cone `g2 = ϖ² − |ξ|`; the phase is
//! `ξ1 z1 + ξ2 z2 − ϖτ` and the domain is lifted to `Im ϖ = 10⁻³`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::asym::{term_sp_crossing, term_sp_surface, AsymptoticTerm, LocalFrame};
use crate::detect::{contribution_verdict, PointKind, SpecialPoint};
use crate::field::{FnField, Quadratic};
use crate::geometry::{CMat3, CVec3, RPoint3};
use crate::oracle::{KelvinOracleSpec, Window};
use crate::problem::{AmplitudeSpec, DomainShift, PhaseSpec, ProblemSpec, SearchRegion, SingularityComponent};
use crate::{Error, Result};

pub const SHIFT: f64 = 1e-3;
pub const ORIGIN_EXCLUSION: f64 = 0.05;
/// Samples with `|z2|` below this are masked in field maps.
pub const AXIS_MASK: f64 = 0.05;
/// Margin in `λ` kept clear of the wedge boundary in field maps.
pub const WEDGE_MARGIN: f64 = 0.02;
/// Minimum `|τ cos φ − 2r|` for the transient term.
pub const MERGE_TOL: f64 = 1e-3;
pub const MIN_CURVATURE: f64 = 1e-6;

/// `λ` on the wedge boundary, `1/(2√2)`.
pub fn lambda_max() -> f64 {
    0.125f64.sqrt()
}

/// Half-angle of the wake.
pub fn kelvin_angle() -> f64 {
    lambda_max().atan()
}

/// Dimensionless prefactor of the wake integral.
pub fn prefactor() -> Complex64 {
    Complex64::new(0.0, 1.0 / (8.0 * PI.powi(3)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KelvinParams {
    pub z1: f64,
    pub z2: f64,
    pub tau: f64,
    /// Large parameter `Λ`.
    pub big_lambda: f64,
}

impl KelvinParams {
    pub fn new(z1: f64, z2: f64, tau: f64, big_lambda: f64) -> Result<Self> {
        if ![z1, z2, tau, big_lambda].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("KelvinParams"));
        }
        if big_lambda <= 0.0 {
            return Err(Error::InvalidSpec("Λ must be positive".into()));
        }
        Ok(KelvinParams { z1, z2, tau, big_lambda })
    }

    /// `z2 / (τ − z1)`.
    pub fn lambda(&self) -> Option<f64> {
        (self.tau != self.z1).then(|| self.z2 / (self.tau - self.z1))
    }

    pub fn in_wedge(&self) -> bool {
        wedge_test(self.z1, self.z2, self.tau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `g2 = ϖ² − √(ξ1² + ξ2²)`.
pub fn dispersion_field() -> FnField {
    let k = |x: &CVec3| (x[0] * x[0] + x[1] * x[1]).sqrt();
    FnField::new(
        "dispersion",
        move |x| x[2] * x[2] - k(x),
        move |x| {
            let r = k(x);
            CVec3::new(-x[0] / r, -x[1] / r, x[2] * 2.0)
        },
        move |x| {
            let r = k(x);
            let r3 = r * r * r;
            let mut h = CMat3::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    let d = if i == j { r.inv() } else { Complex64::new(0.0, 0.0) };
                    h[(i, j)] = -(d - x[i] * x[j] / r3);
                }
            }
            h[(2, 2)] = Complex64::new(2.0, 0.0);
            h
        },
    )
}

/// The wake integral at `(z1, z2, τ)`.
pub fn kelvin_problem(z1: f64, z2: f64, tau: f64) -> Result<ProblemSpec> {
    let mut n = Matrix3::zeros();
    n[(0, 2)] = 1.0;
    n[(2, 0)] = 1.0;
    let smooth = Arc::new(Quadratic::new(0.0, Vector3::zeros(), n));
    let g1 = Arc::new(Quadratic::affine(0.0, Vector3::new(-1.0, 0.0, 1.0)));
    let g2 = Arc::new(dispersion_field());
    let comps = vec![
        SingularityComponent::new("g1", g1, -1.0)?,
        SingularityComponent::new("g2", g2, -1.0)?,
    ];
    let phase = Arc::new(Quadratic::affine(0.0, Vector3::new(z1, z2, -tau)));
    // large enough to hold the transverse-family points, which run off
    // along L as λ → 0
    let mut w = 8.0f64;
    if wedge_test(z1, z2, tau) {
        if let Some((w1, _)) = stationary_frequencies(z2 / (tau - z1)) {
            w = w.max(1.5 * w1);
        }
    }
    let region = SearchRegion::new(Vector3::new(-w * w, -w * w, -w), Vector3::new(w * w, w * w, w))?
        .excluding_ball(Vector3::zeros(), ORIGIN_EXCLUSION);
    ProblemSpec::new(
        "kelvin",
        AmplitudeSpec::new(smooth, comps),
        PhaseSpec::new(phase, [z1, z2, tau]),
        DomainShift::new(Vector3::new(0.0, 0.0, SHIFT))?,
        region,
        prefactor(),
    )
}

fn check_omega(w: f64) -> Result<()> {
    if !w.is_finite() || w.abs() < 1.0 {
        return Err(Error::OutOfRange(w));
    }
    Ok(())
}

/// Point of the crossing curve `σ'1 ∩ σ'2` at frequency `ϖ`.
pub fn curve_l(w: f64, branch: Branch) -> Result<RPoint3> {
    check_omega(w)?;
    let w2 = w * w;
    RPoint3::new(w, branch.sign() * (w2 * w2 - w2).sqrt(), w)
}

/// `dξ/dϖ` along the crossing curve; vertical at `|ϖ| = 1`.
pub fn curve_l_tangent(w: f64, branch: Branch) -> Result<Vector3<f64>> {
    check_omega(w)?;
    if w.abs() == 1.0 {
        return Err(Error::OutOfRange(w));
    }
    let q = (w * w - 1.0).sqrt();
    Ok(Vector3::new(1.0, branch.sign() * w.signum() * (2.0 * w * w - 1.0) / q, 1.0))
}

/// The two positive stationary frequencies `ϖ*,1 ≥ ϖ*,2` for `λ`, or `None`
/// outside the wedge.
pub fn stationary_frequencies(lambda: f64) -> Option<(f64, f64)> {
    let l2 = lambda * lambda;
    let d = 1.0 - 8.0 * l2;
    // tolerate the rounding of λ² on the boundary itself
    if !(d >= -4.0 * f64::EPSILON) || lambda == 0.0 {
        return None;
    }
    let s = d.max(0.0).sqrt();
    let w1 = ((4.0 * l2 + 1.0 + s) / (8.0 * l2)).sqrt();
    // (1 − s)/(8λ²) = 1/(1 + s), free of cancellation as λ → 0
    let w2 = (0.5 + 1.0 / (1.0 + s)).sqrt();
    Some((w1, w2))
}

/// `λ` at which `ϖ` is stationary: `√(ϖ² − 1)/(2ϖ² − 1)`.
pub fn lambda_of_frequency(w: f64) -> f64 {
    (w * w - 1.0).sqrt() / (2.0 * w * w - 1.0)
}

pub fn wedge_test(z1: f64, z2: f64, tau: f64) -> bool {
    let d = tau - z1;
    d > 0.0 && (z2 / d).abs() <= lambda_max()
}

/// Closed-form frame data at the stationary point of family `j` on `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingGeometry {
    pub family: usize,
    pub omega: f64,
    pub location: Vector3<f64>,
    pub alphas: [f64; 2],
    /// `d²G/dϖ²` along `L`.
    pub beta: f64,
    /// `det ∂ξ/∂w` for `w = (α1 g1, α2 g2, ϖ)`.
    pub jacobian: f64,
    pub phase0: f64,
    /// Rows `∇w_k`.
    pub axes: Matrix3<f64>,
}

/// Frame of the crossing point of family `j ∈ {1, 2}`; `z2 < 0` uses the
/// mirror branch.
pub fn crossing_geometry(z1: f64, z2: f64, tau: f64, family: usize) -> Result<CrossingGeometry> {
    if !(family == 1 || family == 2) {
        return Err(Error::InvalidSpec(format!("unknown wave family {family}")));
    }
    if !wedge_test(z1, z2, tau) {
        return Err(Error::InvalidSpec("point outside the wedge".into()));
    }
    let d = tau - z1;
    let lambda = z2.abs() / d;
    let (w1, w2) = stationary_frequencies(lambda).ok_or(Error::DegenerateFamily(family))?;
    let w = if family == 1 { w1 } else { w2 };
    let m = 2.0 * w * w - 1.0;
    let q = (w * w - 1.0).sqrt();
    let s = if z2 < 0.0 { -1.0 } else { 1.0 };
    let a1 = -z1 + d / m;
    // −|z2|ϖ/q, written without the vanishing ratio at λ → 0
    let a2 = -d * w / m;
    let beta = z2.abs() * w * (2.0 * w * w - 3.0) / q.powi(3);
    let location = Vector3::new(w, s * w * q, w);
    let grad2 = Vector3::new(-1.0 / w, -s * q / w, 2.0 * w);
    let axes = Matrix3::from_rows(&[
        (Vector3::new(-1.0, 0.0, 1.0) * a1).transpose(),
        (grad2 * a2).transpose(),
        Vector3::new(0.0, 0.0, 1.0).transpose(),
    ]);
    Ok(CrossingGeometry {
        family,
        omega: w,
        location,
        alphas: [a1, a2],
        beta,
        jacobian: 1.0 / axes.determinant(),
        phase0: w.powi(3) * (z1 - tau) / m,
        axes,
    })
}

fn term_from_frame(
    problem: &ProblemSpec,
    kind: PointKind,
    components: Vec<usize>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    location: Vector3<f64>,
    axes: Matrix3<f64>,
    phase0: f64,
) -> Result<Option<AsymptoticTerm>> {
    let mut sp = SpecialPoint {
        location: RPoint3::from_vector(location)?,
        kind,
        labels: components.iter().map(|&k| problem.amplitude.components[k].label.clone()).collect(),
        components: components.clone(),
        alphas: alphas.clone(),
        witness: None,
        verdict: None,
        flags: vec![],
    };
    sp.verdict = Some(contribution_verdict(&sp, problem)?);
    let frame = LocalFrame {
        kind,
        location,
        components,
        alphas,
        betas,
        jacobian: 1.0 / axes.determinant(),
        axes,
        phase0,
        quadric_sign: 1.0,
    };
    match kind {
        PointKind::SpOnCrossing => term_sp_crossing(&sp, &frame, &problem.amplitude, &problem.shift),
        _ => term_sp_surface(&sp, &frame, &problem.amplitude, &problem.shift),
    }
}

/// Crossing-point terms per family; `None` where the trace has not formed.
fn wave_terms_by_family(params: &KelvinParams) -> Result<[Option<AsymptoticTerm>; 2]> {
    let KelvinParams { z1, z2, tau, .. } = *params;
    if !wedge_test(z1, z2, tau) {
        return Ok([None, None]);
    }
    if z2 == 0.0 {
        return Err(Error::DegenerateFamily(1));
    }
    let problem = kelvin_problem(z1, z2, tau)?;
    let mut out = [None, None];
    for family in [1, 2] {
        let g = crossing_geometry(z1, z2, tau, family)?;
        if g.beta.abs() <= MIN_CURVATURE {
            return Err(Error::DegenerateFamily(family));
        }
        out[family - 1] = term_from_frame(
            &problem,
            PointKind::SpOnCrossing,
            vec![0, 1],
            g.alphas.to_vec(),
            vec![g.beta],
            g.location,
            g.axes,
            g.phase0,
        )?;
    }
    Ok(out)
}

/// Terms of the stationary points on `L` at `+ξ*` that contribute; their
/// mirror images at `−ξ*` are the complex conjugates.
pub fn kelvin_wave_terms(params: &KelvinParams) -> Result<Vec<AsymptoticTerm>> {
    Ok(wave_terms_by_family(params)?.into_iter().flatten().collect())
}

/// Closed-form frame at the stationary point on the dispersion cone.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientGeometry {
    pub omega: f64,
    pub location: Vector3<f64>,
    pub alpha: f64,
    pub betas: [f64; 2],
    pub jacobian: f64,
    pub phase0: f64,
    pub axes: Matrix3<f64>,
}

pub fn transient_geometry(z1: f64, z2: f64, tau: f64) -> Result<TransientGeometry> {
    let r = z1.hypot(z2);
    if r == 0.0 || tau == 0.0 {
        return Err(Error::InvalidSpec("transient needs z ≠ 0 and τ ≠ 0".into()));
    }
    let phi = z2.atan2(z1);
    let (s, c) = phi.sin_cos();
    if (tau * c - 2.0 * r).abs() < MERGE_TOL {
        return Err(Error::MergeProximity);
    }
    let w = tau / (2.0 * r);
    let alpha = -r;
    let r3 = r.powi(3);
    let axes = Matrix3::from_rows(&[
        (Vector3::new(-c, -s, 2.0 * w) * alpha).transpose(),
        Vector3::new(c, s, 0.0).transpose(),
        Vector3::new(s, -c, 0.0).transpose(),
    ]);
    Ok(TransientGeometry {
        omega: w,
        location: Vector3::new(w * w * c, w * w * s, w),
        alpha,
        betas: [2.0 * r3 / (tau * tau), -4.0 * r3 / (tau * tau)],
        jacobian: 1.0 / axes.determinant(),
        phase0: -tau * tau / (4.0 * r),
        axes,
    })
}

/// Cylindrical wave from the onset of motion; `None` for `τ < 0`.
pub fn transient_term(params: &KelvinParams) -> Result<Option<AsymptoticTerm>> {
    let KelvinParams { z1, z2, tau, .. } = *params;
    let g = transient_geometry(z1, z2, tau)?;
    let problem = kelvin_problem(z1, z2, tau)?;
    term_from_frame(
        &problem,
        PointKind::SpOnSurface,
        vec![1],
        vec![g.alpha],
        g.betas.to_vec(),
        g.location,
        g.axes,
        g.phase0,
    )
}

/// Per-sample status bits of a field map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct SampleMask(pub u16);

impl SampleMask {
    pub const NEAR_AXIS: u16 = 1;
    pub const OUTSIDE_WEDGE: u16 = 1 << 1;
    pub const WEDGE_MARGIN: u16 = 1 << 2;
    pub const DEGENERATE: u16 = 1 << 3;
    pub const MERGE: u16 = 1 << 4;
    pub const NOT_CAUSAL: u16 = 1 << 5;
    pub const FAMILY1: u16 = 1 << 6;
    pub const FAMILY2: u16 = 1 << 7;
    pub const TRANSIENT: u16 = 1 << 8;
    pub const UNFORMED1: u16 = 1 << 9;
    pub const UNFORMED2: u16 = 1 << 10;

    const NAMES: [(u16, &'static str); 11] = [
        (Self::NEAR_AXIS, "near-axis"),
        (Self::OUTSIDE_WEDGE, "outside-wedge"),
        (Self::WEDGE_MARGIN, "wedge-margin"),
        (Self::DEGENERATE, "degenerate"),
        (Self::MERGE, "merge"),
        (Self::NOT_CAUSAL, "not-causal"),
        (Self::FAMILY1, "f1"),
        (Self::FAMILY2, "f2"),
        (Self::TRANSIENT, "transient"),
        (Self::UNFORMED1, "f1-unformed"),
        (Self::UNFORMED2, "f2-unformed"),
    ];

    pub fn has(self, bit: u16) -> bool {
        self.0 & bit != 0
    }

    fn set(&mut self, bit: u16) {
        self.0 |= bit;
    }

    /// Whether the sample carries no value.
    pub fn is_masked(self) -> bool {
        self.has(Self::NEAR_AXIS) || self.has(Self::MERGE)
    }
}

impl fmt::Display for SampleMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Self::NAMES.iter().filter(|(b, _)| self.has(*b)).map(|(_, n)| *n).collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join("|"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub value: Option<Complex64>,
    pub mask: SampleMask,
}

/// Uniform `n1 × n2` grid over `(z1, z2)`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub z1: (f64, f64),
    pub z2: (f64, f64),
    pub n1: usize,
    pub n2: usize,
}

impl GridSpec {
    pub fn new(z1: (f64, f64), z2: (f64, f64), n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidSpec("empty grid".into()));
        }
        if ![z1.0, z1.1, z2.0, z2.1].iter().all(|v| v.is_finite()) || z1.0 > z1.1 || z2.0 > z2.1 {
            return Err(Error::InvalidSpec("grid ranges must be finite and ordered".into()));
        }
        Ok(GridSpec { z1, z2, n1, n2 })
    }

    fn coord(range: (f64, f64), n: usize, i: usize) -> f64 {
        if n == 1 {
            range.0
        } else {
            range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
        }
    }

    pub fn z1_at(&self, i: usize) -> f64 {
        Self::coord(self.z1, self.n1, i)
    }

    pub fn z2_at(&self, j: usize) -> f64 {
        Self::coord(self.z2, self.n2, j)
    }
}

/// Field samples, row `j` (fixed `z2`) after row `j − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub grid: GridSpec,
    pub tau: f64,
    pub big_lambda: f64,
    pub samples: Vec<FieldSample>,
}

impl FieldGrid {
    pub fn at(&self, i1: usize, i2: usize) -> &FieldSample {
        &self.samples[i2 * self.grid.n1 + i1]
    }
}

/// Wake oracle grid whose untapered part holds every real stationary point
/// for `(z1, z2, τ)` with a margin of 2, and whose origin cutoff stays
/// clear of them.
pub fn oracle_spec_for(z1: f64, z2: f64, tau: f64) -> KelvinOracleSpec {
    let base = KelvinOracleSpec::default();
    let mut ext = [0.0f64; 2];
    let mut nearest = f64::INFINITY;
    let mut cover = |v: Vector3<f64>| {
        ext[0] = ext[0].max(v.x.abs());
        ext[1] = ext[1].max(v.y.abs());
        nearest = nearest.min(v.xy().norm());
    };
    if z2 != 0.0 {
        for family in [1, 2] {
            if let Ok(c) = crossing_geometry(z1, z2.abs(), tau, family) {
                cover(c.location);
            }
        }
    }
    if let Ok(t) = transient_geometry(z1, z2.abs(), tau) {
        cover(t.location);
    }
    let flat = match base.window {
        Window::None => 1.0,
        Window::Cosine { fraction } | Window::Smooth { fraction } => 1.0 - fraction,
    };
    // the wave terms decay slowly in |ξ|; below about 24 the taper still shows at 1e-4
    let floor = 2.0 * base.radius;
    let r1 = floor.max((ext[0] + 2.0) / flat);
    let r2 = floor.max((ext[1] + 2.0) / flat);
    let origin_cutoff = base.origin_cutoff.min(0.5 * nearest);
    KelvinOracleSpec { radius: r1, radius2: (r2 > r1).then_some(r2), origin_cutoff, ..base }
}

/// Leading-order field at one point: `2 Re` of each contributing term,
/// with `z2 < 0` taken from the mirror point.
pub fn field_at(z1: f64, z2: f64, tau: f64, big_lambda: f64) -> Result<FieldSample> {
    let mut mask = SampleMask::default();
    if z2.abs() < AXIS_MASK {
        mask.set(SampleMask::NEAR_AXIS);
        return Ok(FieldSample { value: None, mask });
    }
    let params = KelvinParams::new(z1, z2.abs(), tau, big_lambda)?;
    let pre = prefactor();
    let mut total = 0.0;
    if !params.in_wedge() {
        mask.set(SampleMask::OUTSIDE_WEDGE);
    } else if params.lambda().is_some_and(|l| l > lambda_max() - WEDGE_MARGIN) {
        mask.set(SampleMask::WEDGE_MARGIN);
    } else {
        match wave_terms_by_family(&params) {
            Ok(terms) => {
                let bits = [(SampleMask::FAMILY1, SampleMask::UNFORMED1), (SampleMask::FAMILY2, SampleMask::UNFORMED2)];
                for (t, (on, off)) in terms.iter().zip(bits) {
                    match t {
                        Some(t) => {
                            total += 2.0 * (pre * t.eval(big_lambda)).re;
                            mask.set(on);
                        }
                        None => mask.set(off),
                    }
                }
            }
            Err(Error::DegenerateFamily(_)) => mask.set(SampleMask::DEGENERATE),
            Err(e) => return Err(e),
        }
    }
    match transient_term(&params) {
        Ok(Some(t)) => {
            total += 2.0 * (pre * t.eval(big_lambda)).re;
            mask.set(SampleMask::TRANSIENT);
        }
        Ok(None) => mask.set(SampleMask::NOT_CAUSAL),
        Err(Error::MergeProximity) => {
            mask.set(SampleMask::MERGE);
            return Ok(FieldSample { value: None, mask });
        }
        Err(Error::InvalidSpec(_)) if tau == 0.0 => mask.set(SampleMask::NOT_CAUSAL),
        Err(e) => return Err(e),
    }
    Ok(FieldSample { value: Some(Complex64::new(total, 0.0)), mask })
}

/// Leading-order field over a grid; failures become masks.
pub fn field_map(grid: &GridSpec, tau: f64, big_lambda: f64) -> Result<FieldGrid> {
    KelvinParams::new(0.0, 0.0, tau, big_lambda)?;
    let rows: Vec<Result<Vec<FieldSample>>> = (0..grid.n2)
        .into_par_iter()
        .map(|j| (0..grid.n1).map(|i| field_at(grid.z1_at(i), grid.z2_at(j), tau, big_lambda)).collect())
        .collect();
    let mut samples = Vec::with_capacity(grid.n1 * grid.n2);
    for row in rows {
        samples.extend(row?);
    }
    Ok(FieldGrid { grid: *grid, tau, big_lambda, samples })
}

/// `cos(Λ G(ξ*,j))` over the grid; `None` outside the wedge.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefrontImage {
    pub grid: GridSpec,
    pub family: usize,
    pub values: Vec<Option<f64>>,
}

impl WavefrontImage {
    pub fn at(&self, i1: usize, i2: usize) -> Option<f64> {
        self.values[i2 * self.grid.n1 + i1]
    }
}

fn front_phase(z1: f64, z2: f64, tau: f64, family: usize) -> Option<f64> {
    if !wedge_test(z1, z2, tau) {
        return None;
    }
    let lambda = z2.abs() / (tau - z1);
    let w = if lambda == 0.0 {
        // only the transverse family survives on the axis, at ϖ = 1
        (family == 2).then_some(1.0)?
    } else {
        let (w1, w2) = stationary_frequencies(lambda)?;
        if family == 1 {
            w1
        } else {
            w2
        }
    };
    Some(w.powi(3) * (z1 - tau) / (2.0 * w * w - 1.0))
}

pub fn render_wavefronts(grid: &GridSpec, tau: f64, big_lambda: f64, family: usize) -> Result<WavefrontImage> {
    if !(family == 1 || family == 2) {
        return Err(Error::InvalidSpec(format!("unknown wave family {family}")));
    }
    KelvinParams::new(0.0, 0.0, tau, big_lambda)?;
    let mut values = Vec::with_capacity(grid.n1 * grid.n2);
    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            let p = front_phase(grid.z1_at(i), grid.z2_at(j), tau, family);
            values.push(p.map(|p| (big_lambda * p).cos()));
        }
    }
    Ok(WavefrontImage { grid: *grid, family, values })
}
