use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of `panels` equal Gauss–Legendre panels on `[a, b]`.
pub fn composite_rule(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(order);
    let h = (b - a) / panels as f64;
    let mut x = Vec::with_capacity(panels * order);
    let mut w = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let c = a + h * (p as f64 + 0.5);
        for (t, wt) in gl.nodes.iter().zip(&gl.weights) {
            x.push(c + 0.5 * h * t);
            w.push(0.5 * h * wt);
        }
    }
    (x, w)
}

/// Gauss–Legendre nodes and weights on the panels between consecutive
/// breakpoints.
pub fn panel_rule(breaks: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(order);
    let n = breaks.len().saturating_sub(1) * order;
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for p in breaks.windows(2) {
        let (c, h) = (0.5 * (p[0] + p[1]), p[1] - p[0]);
        for (t, wt) in gl.nodes.iter().zip(&gl.weights) {
            x.push(c + 0.5 * h * t);
            w.push(0.5 * h * wt);
        }
    }
    (x, w)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WEIGHTS[7];
    let mut g = fc * G7_WEIGHTS[3];
    for i in 0..7 {
        let s = f(c - h * GK_NODES[i]) + f(c + h * GK_NODES[i]);
        k += s * GK_WEIGHTS[i];
        if i % 2 == 1 {
            g += s * G7_WEIGHTS[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Interval {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand.
/// Returns the value and an error estimate.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<(Complex64, f64)> {
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);
    while !(err <= abs_tol.max(rel_tol * total.norm())) {
        if heap.len() >= max_intervals || !err.is_finite() {
            return Err(Error::NonConvergent { value: total.norm(), error: err });
        }
        let worst = heap.pop().expect("non-empty heap");
        let m = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&f, worst.a, m);
        let (v2, e2) = gk15(&f, m, worst.b);
        heap.push(Interval { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Interval { a: m, b: worst.b, value: v2, error: e2 });
        // Running updates cancel badly once a huge interval is retired.
        total = heap.iter().map(|i| i.value).sum();
        err = heap.iter().map(|i| i.error).sum();
    }
    Ok((total, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        for n in [1, 2, 5, 16, 33] {
            let gl = GaussLegendre::new(n);
            let w: f64 = gl.weights.iter().sum();
            assert!((w - 2.0).abs() < 1e-14, "n={n}");
            let deg = 2 * n - 1;
            let s: f64 = gl.nodes.iter().zip(&gl.weights).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn composite_rule_integrates_exp() {
        let (x, w) = composite_rule(0.0, 3.0, 5, 8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert!((s - (3f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_oscillation_and_peaks() {
        let (v, _) = integrate_adaptive(|x| Complex64::from_polar(1.0, 50.0 * x), 0.0, 1.0, 1e-14, 1e-12, 1000).unwrap();
        let want = (Complex64::from_polar(1.0, 50.0) - 1.0) / Complex64::new(0.0, 50.0);
        assert!((v - want).norm() < 1e-12);
        let (v, _) = integrate_adaptive(|x| Complex64::new(1.0 / (1e-4 + x * x), 0.0), -1.0, 1.0, 1e-14, 1e-12, 1000).unwrap();
        assert!((v.re - 2.0 * 100.0 * (100.0f64).atan()).abs() < 1e-9);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let r = integrate_adaptive(|x| Complex64::new(1.0 / x.abs().sqrt().max(1e-300), 0.0), -1.0, 1.0, 0.0, 1e-15, 20);
        assert!(matches!(r, Err(Error::NonConvergent { .. })));
    }
}
