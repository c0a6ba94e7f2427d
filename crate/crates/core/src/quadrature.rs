//! Gauss–Hermite and Gauss–Legendre rules plus a few integration drivers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Hermite,
    Legendre,
}

fn cache() -> &'static Mutex<HashMap<(Kind, usize), Arc<Rule>>> {
    static C: OnceLock<Mutex<HashMap<(Kind, usize), Arc<Rule>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: Kind, n: usize, build: fn(usize) -> Rule) -> Arc<Rule> {
    if let Some(r) = cache().lock().expect("rule cache poisoned").get(&(kind, n)) {
        return r.clone();
    }
    let r = Arc::new(build(n));
    cache().lock().expect("rule cache poisoned").insert((kind, n), r.clone());
    r
}

/// Nodes/weights for ∫ e^{-x²} f(x) dx.
pub fn gauss_hermite(n: usize) -> Arc<Rule> {
    cached(Kind::Hermite, n, build_hermite)
}

/// Nodes/weights for ∫_{-1}^{1} f(x) dx.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    cached(Kind::Legendre, n, build_legendre)
}

fn build_hermite(n: usize) -> Rule {
    assert!(n >= 1);
    // Golub–Welsch seeds, then Newton on the orthonormal recursion
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let jac = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            ((i.max(j)) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut seeds: Vec<f64> = nalgebra::SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    seeds.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for (k, &z0) in seeds.iter().enumerate() {
        let mut z = z0;
        let mut pp = 1.0;
        for it in 0..8 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let step = p1 / pp;
            if it > 0 && step.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
            z -= step;
        }
        x[k] = z;
        w[k] = 2.0 / (pp * pp);
    }
    // enforce exact symmetry
    for k in 0..n / 2 {
        let z = 0.5 * (x[n - 1 - k] - x[k]);
        let wk = 0.5 * (w[k] + w[n - 1 - k]);
        x[k] = -z;
        x[n - 1 - k] = z;
        w[k] = wk;
        w[n - 1 - k] = wk;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    Rule { nodes: x, weights: w }
}

fn build_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    Rule { nodes: x, weights: w }
}

/// Result of a quadrature with an error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    /// Σ w|f|, used to bound roundoff from cancellation.
    pub abs_mass: f64,
}

/// ∫ e^{-n (s - center)²} h(s) ds with an N-node Gauss–Hermite rule.
pub fn hermite_integral<F: Fn(f64) -> Complex64>(h: &F, n: f64, center: f64, nodes: usize) -> (Complex64, f64) {
    let rule = gauss_hermite(nodes);
    let sc = 1.0 / n.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = h(center + x * sc);
        acc += v * *w;
        mass += w * v.norm();
    }
    (acc * sc, mass * sc)
}

/// Fixed composite Gauss–Legendre on [a, b].
pub fn composite_legendre<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, panels: usize, order: usize) -> (Complex64, f64) {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for k in 0..panels {
        let lo = a + h * k as f64;
        let mid = lo + 0.5 * h;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let v = f(mid + 0.5 * h * x);
            acc += v * (0.5 * h * w);
            mass += 0.5 * h * w * v.norm();
        }
    }
    (acc, mass)
}

fn gl_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, rule: &Rule) -> (Complex64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = f(mid + half * x);
        acc += v * (half * w);
        mass += half * w * v.norm();
    }
    (acc, mass)
}

/// Adaptive bisection with a 20-point Gauss–Legendre panel compared against
/// the sum over its two halves.
pub fn adaptive_legendre<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, abs_tol: f64, max_depth: usize) -> Estimate {
    let rule = gauss_legendre(20);
    let whole = gl_panel(f, a, b, &rule);
    let mut out = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, abs_mass: 0.0 };
    refine(f, a, b, whole, abs_tol, max_depth, &rule, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    whole: (Complex64, f64),
    tol: f64,
    depth: usize,
    rule: &Rule,
    out: &mut Estimate,
) {
    let m = 0.5 * (a + b);
    let left = gl_panel(f, a, m, rule);
    let right = gl_panel(f, m, b, rule);
    let split = left.0 + right.0;
    let diff = (split - whole.0).norm();
    let floor = 64.0 * f64::EPSILON * (left.1 + right.1);
    if diff <= tol.max(floor) || depth == 0 {
        out.value += split;
        out.error += diff;
        out.abs_mass += left.1 + right.1;
        return;
    }
    refine(f, a, m, left, 0.5 * tol, depth - 1, rule, out);
    refine(f, m, b, right, 0.5 * tol, depth - 1, rule, out);
}

/// Vector-valued variant of [`adaptive_legendre`]; a panel is accepted when
/// every component meets the tolerance. Returns values and per-component
/// error estimates.
pub fn adaptive_legendre_vec<F: Fn(f64) -> Vec<Complex64>>(
    f: &F,
    a: f64,
    b: f64,
    dim: usize,
    abs_tol: f64,
    max_depth: usize,
) -> (Vec<Complex64>, Vec<f64>) {
    let rule = gauss_legendre(20);
    let whole = gl_panel_vec(f, a, b, &rule, dim);
    let mut val = vec![Complex64::new(0.0, 0.0); dim];
    let mut err = vec![0.0; dim];
    refine_vec(f, a, b, whole, abs_tol, max_depth, &rule, &mut val, &mut err);
    (val, err)
}

/// Panel sums followed by the matching Σ w|f| masses.
fn gl_panel_vec<F: Fn(f64) -> Vec<Complex64>>(f: &F, a: f64, b: f64, rule: &Rule, dim: usize) -> Vec<Complex64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = vec![Complex64::new(0.0, 0.0); 2 * dim];
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = f(mid + half * x);
        for (k, z) in v.into_iter().enumerate() {
            acc[k] += z * (half * w);
            acc[dim + k] += half * w * z.norm();
        }
    }
    acc
}

#[allow(clippy::too_many_arguments)]
fn refine_vec<F: Fn(f64) -> Vec<Complex64>>(
    f: &F,
    a: f64,
    b: f64,
    whole: Vec<Complex64>,
    tol: f64,
    depth: usize,
    rule: &Rule,
    val: &mut [Complex64],
    err: &mut [f64],
) {
    let dim = val.len();
    let m = 0.5 * (a + b);
    let left = gl_panel_vec(f, a, m, rule, dim);
    let right = gl_panel_vec(f, m, b, rule, dim);
    let diffs: Vec<f64> = (0..dim).map(|k| (left[k] + right[k] - whole[k]).norm()).collect();
    let ok = |k: usize| diffs[k] <= tol.max(64.0 * f64::EPSILON * (left[dim + k].re + right[dim + k].re));
    if (0..dim).all(ok) || depth == 0 {
        for k in 0..dim {
            val[k] += left[k] + right[k];
            err[k] += diffs[k];
        }
        return;
    }
    refine_vec(f, a, m, left, 0.5 * tol, depth - 1, rule, val, err);
    refine_vec(f, m, b, right, 0.5 * tol, depth - 1, rule, val, err);
}
