//! Relative entropy, Petz–Rényi entropies, quasi-entropies, L^p norms on the
//! commutant and Araki–Masuda divergences.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ensemble::{gaussian_matrix, rng, sub_seed};
use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::linalg::{c, fro, herm_eig, mat_fn, mat_pow, op_norm, unvec, vec_of, vnorm, CMat, CVec};
use crate::standard_form::{
    algebra_density, cone_representative, relative_modular, side_dim, CommutantElement, Side, StandardForm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ArakiSpectral,
    MatrixOracle,
    QuasiEntropy,
    LpVariational,
    LpClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceValue {
    pub value: Ext,
    pub method: Method,
    pub alpha: Option<f64>,
}

impl DivergenceValue {
    fn new(value: Ext, method: Method, alpha: Option<f64>) -> Self {
        Self { value, method, alpha }
    }

    /// Numerical negatives down to −1e−10 are reported as 0.
    fn clamped(value: f64, method: Method, alpha: Option<f64>) -> Self {
        let v = if (-1e-10..0.0).contains(&value) { 0.0 } else { value };
        Self::new(Ext::Finite(v), method, alpha)
    }

    pub fn finite(&self) -> Option<f64> {
        self.value.finite()
    }
}

/// Weight below this on a kernel eigenvalue is ignored.
const KERNEL_WEIGHT: f64 = 1e-14;

fn check_normalized(v: &CVec) -> Result<()> {
    let nv = vnorm(v);
    if (nv - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(nv));
    }
    Ok(())
}

/// Tr ρ(ln ρ − ln σ), +∞ when supp ρ ⊄ supp σ. Inputs need not be normalized.
pub fn relative_entropy_oracle(rho: &CMat, sigma: &CMat) -> Result<Ext> {
    if !support_contained(rho, sigma)? {
        return Ok(Ext::Infinite);
    }
    let rl = mat_fn(rho, |x| x * x.ln(), true)?;
    let ls = mat_fn(sigma, f64::ln, true)?;
    Ok(Ext::Finite(rl.trace().re - (rho * ls).trace().re))
}

/// (α−1)⁻¹ ln Tr ρ^α σ^{1−α}
pub fn petz_renyi_oracle(rho: &CMat, sigma: &CMat, alpha: f64) -> Result<Ext> {
    if alpha > 1.0 && !support_contained(rho, sigma)? {
        return Ok(Ext::Infinite);
    }
    let a = mat_fn(rho, |x| x.powf(alpha), true)?;
    let b = mat_fn(sigma, |x| x.powf(1.0 - alpha), true)?;
    Ok(Ext::Finite((a * b).trace().re.ln() / (alpha - 1.0)))
}

/// (α−1)⁻¹ ln Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α]
pub fn sandwiched_renyi_oracle(rho: &CMat, sigma: &CMat, alpha: f64) -> Result<Ext> {
    if !support_contained(rho, sigma)? {
        return Ok(Ext::Infinite);
    }
    let g = (1.0 - alpha) / (2.0 * alpha);
    let s = mat_pow(sigma, g)?;
    let inner = &s * rho * &s;
    let inner = (&inner + inner.adjoint()) * c(0.5, 0.0);
    let q = mat_fn(&inner, |x| x.powf(alpha), true)?.trace().re;
    Ok(Ext::Finite(q.ln() / (alpha - 1.0)))
}

fn support_contained(rho: &CMat, sigma: &CMat) -> Result<bool> {
    let sp = herm_eig(sigma)?;
    let kernel = crate::linalg::identity(sigma.nrows()) - sp.support_projector();
    let leak = (&kernel * rho * &kernel).trace().re;
    Ok(leak <= KERNEL_WEIGHT * rho.trace().re.abs().max(1e-300))
}

/// Araki relative entropy −(Ψ⁺, ln Δ_{Φ,Ψ⁺} Ψ⁺) = S(ψ‖φ) for arbitrary
/// (possibly unnormalized) Ψ, with Ψ⁺ the cone representative of ψ.
pub fn araki_relative_entropy(phi: &CVec, psi: &CVec) -> Result<DivergenceValue> {
    let (_, psi_plus) = cone_representative(psi)?;
    let rm = relative_modular(phi, &psi_plus, Side::Algebra)?;
    let lmax = rm.spectrum.max_abs();
    let total = vnorm(&psi_plus).powi(2);
    let mut acc = 0.0;
    for (lam, w) in rm.spectral_weights(&psi_plus) {
        if lam == 0.0 {
            if w > KERNEL_WEIGHT * total {
                return Ok(DivergenceValue::new(Ext::Infinite, Method::ArakiSpectral, None));
            }
            continue;
        }
        if lam < 1e-10 * lmax && w > 1e-8 * total {
            return Err(Error::NumericalKernel { eigenvalue: lam, weight: w });
        }
        acc -= w * lam.ln();
    }
    let oracle = relative_entropy_oracle(&algebra_density(psi)?, &algebra_density(phi)?)?;
    if let Ext::Finite(o) = oracle {
        let dev = (o - acc).abs();
        if dev > 1e-8 * acc.abs().max(1.0) {
            return Err(Error::OracleMismatch(dev));
        }
    }
    Ok(DivergenceValue::clamped(acc, Method::ArakiSpectral, None))
}

/// S(ψ‖ω) for a unit vector Ψ.
pub fn relative_entropy(sf: &StandardForm, psi: &CVec) -> Result<DivergenceValue> {
    check_normalized(psi)?;
    araki_relative_entropy(&sf.omega, psi)
}

/// f_a(λ) = (λ^{1+a} − λ)/a, with λ ln λ at a = 0.
pub fn f_a(a: f64, lam: f64) -> f64 {
    if a == 0.0 {
        if lam == 0.0 {
            0.0
        } else {
            lam * lam.ln()
        }
    } else {
        (lam.powf(1.0 + a) - lam) / a
    }
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum QuasiEntropySpec {
    Fa(f64),
    Custom { name: String, f: RealFn },
}

impl std::fmt::Debug for QuasiEntropySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuasiEntropySpec::Fa(a) => write!(f, "Fa({a})"),
            QuasiEntropySpec::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl QuasiEntropySpec {
    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(name: &str, f: F) -> Self {
        QuasiEntropySpec::Custom { name: name.to_string(), f: Arc::new(f) }
    }

    pub fn eval(&self, lam: f64) -> f64 {
        match self {
            QuasiEntropySpec::Fa(a) => f_a(*a, lam),
            QuasiEntropySpec::Custom { f, .. } => f(lam),
        }
    }

    /// f̂(λ) = λ f(1/λ)
    pub fn dual(&self) -> QuasiEntropySpec {
        let me = self.clone();
        QuasiEntropySpec::custom("dual", move |lam| if lam > 0.0 { lam * me.eval(1.0 / lam) } else { f64::NAN })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            QuasiEntropySpec::Fa(a) if *a < -1.0 || !a.is_finite() => Err(Error::ConvexityViolated(*a, *a)),
            QuasiEntropySpec::Fa(_) => Ok(()),
            QuasiEntropySpec::Custom { .. } => {
                let grid: Vec<f64> = (0..41).map(|k| 10f64.powf(-4.0 + 0.2 * k as f64)).collect();
                for (i, &x) in grid.iter().enumerate() {
                    for &y in &grid[i + 1..] {
                        let (fx, fy, fm) = (self.eval(x), self.eval(y), self.eval(0.5 * (x + y)));
                        let slack = 0.5 * (fx + fy) - fm;
                        if slack < -1e-10 * (fx.abs() + fy.abs()).max(1.0) {
                            return Err(Error::ConvexityViolated(x, y));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Q_f(φ|ψ) = Σ f(λ) |(e_λ, Ψ)|² over the spectrum of Δ_{Φ,Ψ}.
pub fn quasi_entropy(phi: &CVec, psi: &CVec, spec: &QuasiEntropySpec) -> Result<DivergenceValue> {
    spec.validate()?;
    let rm = relative_modular(phi, psi, Side::Algebra)?;
    let total = vnorm(psi).powi(2);
    let mut acc = 0.0;
    for (lam, w) in rm.spectral_weights(psi) {
        if w <= KERNEL_WEIGHT * total && lam == 0.0 {
            continue;
        }
        let f = spec.eval(lam);
        if !f.is_finite() {
            return Ok(DivergenceValue::new(Ext::Infinite, Method::QuasiEntropy, None));
        }
        acc += f * w;
    }
    Ok(DivergenceValue::new(Ext::Finite(acc), Method::QuasiEntropy, None))
}

/// Petz–Rényi S_α(ψ‖ω).
pub fn petz_renyi(sf: &StandardForm, psi: &CVec, alpha: f64) -> Result<DivergenceValue> {
    check_normalized(psi)?;
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let rho_psi = algebra_density(psi)?;
    if alpha < 1.0 {
        let (_, psi_plus) = cone_representative(psi)?;
        let rm = relative_modular(&sf.omega, &psi_plus, Side::Algebra)?;
        let moment: f64 = rm
            .spectral_weights(&psi_plus)
            .iter()
            .map(|&(lam, w)| if lam > 0.0 { lam.powf(1.0 - alpha) * w } else { 0.0 })
            .sum();
        return Ok(DivergenceValue::clamped(moment.ln() / (alpha - 1.0), Method::ArakiSpectral, Some(alpha)));
    }
    if !support_contained(&rho_psi, &sf.rho)? {
        return Ok(DivergenceValue::new(Ext::Infinite, Method::QuasiEntropy, Some(alpha)));
    }
    let a = alpha - 1.0;
    let q = quasi_entropy(psi, &sf.omega, &QuasiEntropySpec::Fa(a))?;
    match q.value {
        Ext::Finite(q) => Ok(DivergenceValue::clamped((1.0 + a * q).ln() / a, Method::QuasiEntropy, Some(alpha))),
        Ext::Infinite => Ok(DivergenceValue::new(Ext::Infinite, Method::QuasiEntropy, Some(alpha))),
    }
}

/// Input of an L^p evaluation: a bare vector or b′Ω with b′ = 1⊗m.
#[derive(Clone, Debug)]
pub enum Excitation {
    Vector(CVec),
    Commutant(CommutantElement),
}

impl Excitation {
    pub fn vector(&self, sf: &StandardForm) -> CVec {
        match self {
            Excitation::Vector(v) => v.clone(),
            Excitation::Commutant(m) => sf.excite_commutant(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpMethod {
    ClosedForm,
    Variational,
}

#[derive(Clone, Debug)]
pub struct VariationalOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Add the analytic p = 4 maximizer as an extra starting point.
    pub analytic_seed: bool,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self { restarts: 8, seed: 0x5eed, max_iter: 20_000, grad_tol: 1e-9, analytic_seed: true }
    }
}

#[derive(Clone, Debug)]
pub enum LpMode {
    ClosedForm,
    Variational(VariationalOptions),
}

#[derive(Clone, Debug)]
pub struct LpNormResult {
    pub p: f64,
    pub value: Ext,
    /// Cone representative of the maximizing ξ.
    pub maximizer: Option<CVec>,
    pub method: LpMethod,
    pub grad_norm: f64,
    pub iterations: usize,
}

/// ‖Ψ‖_{p,Ω} for the commutant, p ∈ [2, ∞].
pub fn lp_norm(sf: &StandardForm, psi: &Excitation, p: f64, mode: &LpMode) -> Result<LpNormResult> {
    if !(p >= 2.0) {
        return Err(Error::DegenerateInput(format!("p = {p} below 2")));
    }
    match mode {
        LpMode::ClosedForm => lp_closed_form(sf, psi, p),
        LpMode::Variational(opts) => lp_variational(sf, psi, p, opts),
    }
}

fn lp_closed_form(sf: &StandardForm, psi: &Excitation, p: f64) -> Result<LpNormResult> {
    let done = |value: f64| LpNormResult {
        p,
        value: Ext::Finite(value),
        maximizer: None,
        method: LpMethod::ClosedForm,
        grad_norm: 0.0,
        iterations: 0,
    };
    if p == 2.0 {
        return Ok(done(vnorm(&psi.vector(sf))));
    }
    let m = match psi {
        Excitation::Commutant(m) => m,
        Excitation::Vector(_) => {
            return Err(Error::ClosedFormUnavailable("vector not presented as b'Ω".into()));
        }
    };
    if p == 4.0 {
        return Ok(done(l4_closed_form(sf, m)));
    }
    if p.is_infinite() {
        return Ok(done(op_norm(&m.0)));
    }
    Err(Error::ClosedFormUnavailable(format!("p = {p}")))
}

/// ‖Δ^{−1/4} b′†b′ Ω‖^{1/2}
pub fn l4_closed_form(sf: &StandardForm, m: &CommutantElement) -> f64 {
    let mm = CommutantElement(m.0.adjoint() * &m.0);
    let v = sf.delta_pow(-0.25) * sf.excite_commutant(&mm);
    vnorm(&v).sqrt()
}

/// b′Jb′JΩ, the analytic L⁴ maximizer up to normalization.
pub fn l4_maximizer(sf: &StandardForm, m: &CommutantElement) -> CVec {
    let jo = sf.j.apply(&sf.omega);
    m.apply(&sf.j.apply(&m.apply(&jo)))
}

/// B = Y† ρ^{−2r} Y with r = 1/2 − 1/p; ‖Ψ‖_p² = sup Tr(B σ^{1−2/p}).
fn lp_gram(sf: &StandardForm, psi: &CVec, p: f64) -> Result<CMat> {
    let n = side_dim(psi)?;
    let y = unvec(psi, n);
    let r = 0.5 - if p.is_infinite() { 0.0 } else { 1.0 / p };
    let rp = sf.rho_spectrum.apply_support(|x| x.powf(-2.0 * r));
    let b = y.adjoint() * rp * &y;
    Ok((&b + b.adjoint()) * c(0.5, 0.0))
}

/// Objective ‖(Δ′_{ξ,Ω})^{1/2−1/p} Ψ‖² for ξ = vec(X), evaluated from B.
pub fn lp_objective(b: &CMat, x: &CMat, s: f64) -> Result<f64> {
    let sigma = x.adjoint() * x;
    let sigma = (&sigma + sigma.adjoint()) * c(0.5, 0.0);
    let fs = mat_fn(&sigma, |m| if m > 0.0 { m.powf(s) } else { 0.0 }, false)?;
    Ok((b * fs).trace().re)
}

struct Eval {
    f: f64,
    grad: CMat,
}

fn evaluate(b: &CMat, x: &CMat, s: f64) -> Result<Eval> {
    let sigma = x.adjoint() * x;
    let sigma = (&sigma + sigma.adjoint()) * c(0.5, 0.0);
    let sp = herm_eig(&sigma)?;
    let n = sp.dim();
    let mu: Vec<f64> = sp.values.iter().map(|&m| m.max(1e-300)).collect();
    let fv: Vec<f64> = mu.iter().map(|m| m.powf(s)).collect();
    let v = &sp.vectors;
    let bt = v.adjoint() * b * v;
    let f: f64 = (0..n).map(|k| fv[k] * bt[(k, k)].re).sum();
    let scale = mu.iter().fold(0.0f64, |a, &m| a.max(m));
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = mu[i] - mu[j];
            let gamma = if d.abs() > 1e-12 * scale {
                (fv[i] - fv[j]) / d
            } else {
                s * (0.5 * (mu[i] + mu[j])).powf(s - 1.0)
            };
            g[(i, j)] = bt[(i, j)] * gamma;
        }
    }
    let gs = v * g * v.adjoint();
    Ok(Eval { f, grad: x * gs * c(2.0, 0.0) })
}

fn re_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn riemannian(x: &CMat, g: &CMat) -> CMat {
    g - x * c(re_inner(x, g), 0.0)
}

fn normalized(x: CMat) -> CMat {
    let n = fro(&x);
    x / c(n, 0.0)
}

struct Ascent {
    x: CMat,
    f: f64,
    grad_norm: f64,
    iterations: usize,
}

/// Projected gradient ascent on the unit sphere with BB steps and backtracking.
fn ascend(b: &CMat, x0: CMat, s: f64, opts: &VariationalOptions) -> Result<Ascent> {
    let bscale = op_norm(b).max(1e-300);
    let mut x = normalized(x0);
    let mut e = evaluate(b, &x, s)?;
    let mut g = riemannian(&x, &e.grad);
    let mut gn = fro(&g);
    let mut eta = 1.0 / bscale;
    let mut it = 0;
    while it < opts.max_iter && gn > opts.grad_tol * bscale {
        it += 1;
        let mut step = eta;
        let mut accepted = None;
        for _ in 0..60 {
            let xn = normalized(&x + &g * c(step, 0.0));
            let en = evaluate(b, &xn, s)?;
            let noise = 8.0 * f64::EPSILON * e.f.abs().max(bscale);
            if en.f >= e.f + 1e-4 * step * gn * gn - noise {
                accepted = Some((xn, en));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, en)) = accepted else { break };
        let gnew = riemannian(&xn, &en.grad);
        let dx = &xn - &x;
        let dg = &gnew - &g;
        let denom = re_inner(&dx, &dg);
        eta = if denom < 0.0 { (re_inner(&dx, &dx) / -denom).clamp(1e-6 / bscale, 1e6 / bscale) } else { 2.0 * step };
        x = xn;
        e = en;
        g = gnew;
        gn = fro(&g);
    }
    Ok(Ascent { f: e.f, x, grad_norm: gn, iterations: it })
}

fn lp_variational(sf: &StandardForm, psi: &Excitation, p: f64, opts: &VariationalOptions) -> Result<LpNormResult> {
    if !sf.faithful {
        return Err(Error::NotFaithful(sf.rho_spectrum.values[0]));
    }
    let v = psi.vector(sf);
    let b = lp_gram(sf, &v, p)?;
    let s = if p.is_infinite() { 1.0 } else { 1.0 - 2.0 / p };
    let n = sf.n;
    if s == 0.0 {
        let value = b.trace().re.max(0.0).sqrt();
        return Ok(LpNormResult {
            p,
            value: Ext::Finite(value),
            maximizer: Some(sf.omega.clone()),
            method: LpMethod::Variational,
            grad_norm: 0.0,
            iterations: 0,
        });
    }
    let mut starts: Vec<CMat> = Vec::new();
    if opts.analytic_seed && p == 4.0 {
        if let Excitation::Commutant(m) = psi {
            starts.push(unvec(&l4_maximizer(sf, m), n));
        }
    }
    for k in 0..opts.restarts {
        let mut r = rng(sub_seed(opts.seed, k as u64));
        starts.push(gaussian_matrix(&mut r, n));
    }
    let mut best: Option<Ascent> = None;
    for x0 in starts {
        if fro(&x0) == 0.0 {
            continue;
        }
        let a = ascend(&b, x0, s, opts)?;
        if best.as_ref().map_or(true, |bb| a.f > bb.f) {
            best = Some(a);
        }
    }
    let best = best.ok_or_else(|| Error::DegenerateInput("no starting point".into()))?;
    let sigma = best.x.adjoint() * &best.x;
    let root = mat_fn(&((&sigma + sigma.adjoint()) * c(0.5, 0.0)), f64::sqrt, false)?;
    let cone = vec_of(&root);
    let cone = &cone / c(vnorm(&cone), 0.0);
    Ok(LpNormResult {
        p,
        value: Ext::Finite(best.f.max(0.0).sqrt()),
        maximizer: Some(cone),
        method: LpMethod::Variational,
        grad_norm: best.grad_norm,
        iterations: best.iterations,
    })
}

/// Angle between the rays of u and v, after optimal phase alignment.
pub fn ray_angle(u: &CVec, v: &CVec) -> f64 {
    let uh = u / c(vnorm(u), 0.0);
    let vh = v / c(vnorm(v), 0.0);
    let ov = uh.dotc(&vh);
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1.0, 0.0) };
    let chord = vnorm(&(vh - uh * phase));
    2.0 * (0.5 * chord).min(1.0).asin()
}

/// D_α(ψ‖ω) = (α−1)⁻¹ ln ‖Ψ‖^{2α}_{2α,Ω}.
pub fn araki_masuda(sf: &StandardForm, psi: &Excitation, alpha: f64, mode: &LpMode) -> Result<DivergenceValue> {
    check_normalized(&psi.vector(sf))?;
    if !(alpha > 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let lp = lp_norm(sf, psi, 2.0 * alpha, mode)?;
    let method = match lp.method {
        LpMethod::ClosedForm => Method::LpClosedForm,
        LpMethod::Variational => Method::LpVariational,
    };
    Ok(match lp.value {
        Ext::Finite(v) => DivergenceValue::clamped(2.0 * alpha * v.ln() / (alpha - 1.0), method, Some(alpha)),
        Ext::Infinite => DivergenceValue::new(Ext::Infinite, method, Some(alpha)),
    })
}

/// Neville extrapolation of samples (h, value) to h = 0.
pub fn extrapolate_to_zero(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len();
    let mut p: Vec<f64> = samples.iter().map(|s| s.1).collect();
    for k in 1..n {
        for i in 0..n - k {
            let (hi, hk) = (samples[i].0, samples[i + k].0);
            p[i] = (hk * p[i] - hi * p[i + 1]) / (hk - hi);
        }
    }
    p[0]
}

/// α-offsets used for the α → 1⁺ extrapolations.
pub const RICHARDSON_OFFSETS: [f64; 3] = [0.1, 0.05, 0.025];

pub fn araki_masuda_limit(sf: &StandardForm, psi: &Excitation, mode: &LpMode) -> Result<f64> {
    let mut samples = Vec::new();
    for h in RICHARDSON_OFFSETS {
        let d = araki_masuda(sf, psi, 1.0 + h, mode)?;
        samples.push((h, d.finite().ok_or_else(|| Error::DegenerateInput("infinite divergence".into()))?));
    }
    Ok(extrapolate_to_zero(&samples))
}

pub fn petz_renyi_limit(sf: &StandardForm, psi: &CVec) -> Result<f64> {
    let mut samples = Vec::new();
    for h in RICHARDSON_OFFSETS {
        let d = petz_renyi(sf, psi, 1.0 + h)?;
        samples.push((h, d.finite().ok_or_else(|| Error::DegenerateInput("infinite divergence".into()))?));
    }
    Ok(extrapolate_to_zero(&samples))
}
