//! Chiral current on a light ray: modular-smeared test functions, their
//! Fourier transforms, the one-particle scalar product and the Wick
//! four-point norm entering the single-particle entropy bound.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_legendre, adaptive_legendre_vec, hermite_integral};
use crate::report::{Case, VerificationReport};

/// Largest n·(Im t)² accepted by the direct method.
pub const CANCELLATION_GUARD: f64 = 40.0;
/// Default constant of the expansion error envelope.
pub const DEFAULT_ENVELOPE_K: f64 = 1e3;
/// Smallest n for which the expansion is used outside of cross-validation.
pub const EXPANSION_MIN_N: f64 = 100.0;
/// Largest n accepted by the direct Wick evaluation.
pub const DIRECT_MAX_N: f64 = 64.0;

pub type FourierFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum RayFamily {
    /// f(u) = u e^{−αu} on u ≥ 0
    ExpMonomial,
    /// user supplied Fourier transform, evaluated on the real axis only
    Custom { name: String, fourier: FourierFn },
}

impl fmt::Debug for RayFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayFamily::ExpMonomial => write!(f, "ExpMonomial"),
            RayFamily::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RayTestFunction {
    pub family: RayFamily,
    pub alpha: f64,
}

impl RayTestFunction {
    pub fn exp_monomial(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::DomainError(alpha));
        }
        Ok(Self { family: RayFamily::ExpMonomial, alpha })
    }

    pub fn custom(name: impl Into<String>, alpha: f64, fourier: FourierFn) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::DomainError(alpha));
        }
        Ok(Self { family: RayFamily::Custom { name: name.into(), fourier }, alpha })
    }

    /// Registry lookup by family name.
    pub fn from_registry(name: &str, alpha: f64) -> Result<Self> {
        match name {
            "exp-monomial" => Self::exp_monomial(alpha),
            other => Err(Error::ConfigError(format!("unknown ray family '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        match &self.family {
            RayFamily::ExpMonomial => "exp-monomial",
            RayFamily::Custom { name, .. } => name,
        }
    }

    /// f(u); only available in closed form for the built-in family.
    pub fn value(&self, u: f64) -> Option<f64> {
        match self.family {
            RayFamily::ExpMonomial => Some(if u >= 0.0 { u * (-self.alpha * u).exp() } else { 0.0 }),
            RayFamily::Custom { .. } => None,
        }
    }

    /// (𝓕f)(p) = ∫ f(u) e^{ipu} du.
    pub fn fourier(&self, p: f64) -> Complex64 {
        match &self.family {
            RayFamily::ExpMonomial => (Complex64::new(self.alpha, -p)).powi(-2),
            RayFamily::Custom { fourier, .. } => fourier(p),
        }
    }

    fn fourier_c(&self, q: Complex64) -> Complex64 {
        match &self.family {
            RayFamily::ExpMonomial => (self.alpha - Complex64::i() * q).powi(-2),
            RayFamily::Custom { fourier, .. } => fourier(q.re),
        }
    }

    /// Strip of analyticity in s of e^{−2πs}(𝓕f)(p e^{−2πs}), if known.
    fn strip(&self, p: f64) -> Option<(f64, f64)> {
        match self.family {
            RayFamily::ExpMonomial if p > 0.0 => Some((-0.75, 0.25)),
            RayFamily::ExpMonomial if p < 0.0 => Some((-0.25, 0.75)),
            RayFamily::ExpMonomial => Some((f64::NEG_INFINITY, f64::INFINITY)),
            RayFamily::Custom { .. } => None,
        }
    }
}

/// α_t f_n: the base function smeared over the dilation flow with width n
/// and flowed to (possibly complex) parameter t.
#[derive(Clone, Debug)]
pub struct SmearedRayFunction {
    pub base: RayTestFunction,
    pub n: f64,
    pub t: Complex64,
}

impl SmearedRayFunction {
    pub fn new(base: RayTestFunction, n: f64, t: Complex64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::DomainError(n));
        }
        if t.im.abs() > 0.75 + 1e-15 {
            return Err(Error::DomainError(t.im));
        }
        Ok(Self { base, n, t })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadratureBudget {
    pub hermite_nodes: usize,
    /// None means 50α
    pub p_cutoff: Option<f64>,
    /// maximal bisection depth of the adaptive p panels
    pub p_nodes: usize,
    /// absolute tolerance for p integrals
    pub tolerance: f64,
    /// largest error estimate seen so far
    pub error_estimate: f64,
}

impl Default for QuadratureBudget {
    fn default() -> Self {
        Self { hermite_nodes: 128, p_cutoff: None, p_nodes: 40, tolerance: 1e-11, error_estimate: 0.0 }
    }
}

impl QuadratureBudget {
    fn record(&mut self, e: f64) {
        if e.is_nan() || e > self.error_estimate {
            self.error_estimate = e;
        }
    }

    fn cutoff(&self, alpha: f64) -> f64 {
        self.p_cutoff.unwrap_or(50.0 * alpha)
    }
}

/// sqrt(n/π) ∫_ℝ e^{−n(s−c)²} h(s) ds for complex c. Gauss–Hermite with node
/// doubling; falls back to adaptive Gauss–Legendre when the two disagree.
pub(crate) fn gaussian_integral<H: Fn(f64) -> Complex64>(h: &H, n: f64, c: Complex64, nodes: usize) -> (Complex64, f64) {
    let amp = (n * c.im * c.im).exp();
    let osc = |s: f64| h(s) * Complex64::from_polar(amp, 2.0 * n * c.im * (s - c.re));
    let norm = (n / PI).sqrt();
    let (a, mass) = hermite_integral(&osc, n, c.re, nodes);
    let (b, _) = hermite_integral(&osc, n, c.re, 2 * nodes);
    let roundoff = 1e-15 * mass * norm;
    let diff = (a - b).norm() * norm;
    if diff <= 1e-13 * (b.norm() * norm).max(1e-3) + roundoff {
        return (b * norm, diff + roundoff);
    }
    let g = |s: f64| h(s) * (-n * Complex64::new(s, 0.0).powi(2) + 2.0 * n * c * s - n * c * c).exp();
    let half = (50.0 / n).sqrt() + 2.0 * PI / n;
    let tol = 1e-14 * (b.norm() * norm).max(1e-3) / norm;
    let est = adaptive_legendre(&g, c.re - half, c.re + half, tol, 40);
    (est.value * norm, est.error * norm + 1e-15 * est.abs_mass * norm)
}

fn check_guard(n: f64, im: f64) -> Result<()> {
    let load = n * im * im;
    if load > CANCELLATION_GUARD {
        return Err(Error::CancellationGuard(load));
    }
    Ok(())
}

/// Direct evaluation for any real p. The integration contour is moved inside
/// the strip of analyticity as close to Im t as allowed, which keeps the
/// oscillatory amplification at e^{n(Im t − τ)²}.
fn direct_fourier(base: &RayTestFunction, n: f64, t: Complex64, p: f64, budget: &mut QuadratureBudget) -> Complex64 {
    let tau = match base.strip(p) {
        Some((lo, hi)) => t.im.clamp(lo + 0.25, hi - 0.25),
        None => 0.0,
    };
    let h = |x: f64| {
        let s = Complex64::new(x, tau);
        let e = (-2.0 * PI * s).exp();
        e * base.fourier_c(e * p)
    };
    let (v, err) = gaussian_integral(&h, n, t - Complex64::new(0.0, tau), budget.hermite_nodes);
    budget.record(err);
    v
}

/// (𝓕α_t f_n)(p) by direct quadrature of sqrt(n/π)∫e^{−n(s−t)²−2πs}(𝓕f)(pe^{−2πs})ds.
pub fn smeared_fourier(srf: &SmearedRayFunction, p: f64, budget: &mut QuadratureBudget) -> Result<Complex64> {
    if !(p >= 0.0) {
        return Err(Error::DomainError(p));
    }
    check_guard(srf.n, srf.t.im)?;
    let v = direct_fourier(&srf.base, srf.n, srf.t, p, budget);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::QuadratureBudgetExceeded { estimate: f64::INFINITY, limit: budget.tolerance });
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ExpansionOptions {
    pub k: f64,
    /// permit n < 100, used only to cross-validate against direct quadrature
    pub allow_small_n: bool,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        Self { k: DEFAULT_ENVELOPE_K, allow_small_n: false }
    }
}

/// Large-n expansion of (𝓕α_t f_n)(p) for the exp-monomial family together
/// with its error envelope K n^{−3/2}|α − ip|^{−2}.
pub fn expansion_fourier(srf: &SmearedRayFunction, p: f64, opts: ExpansionOptions) -> Result<(Complex64, f64)> {
    if !matches!(srf.base.family, RayFamily::ExpMonomial) {
        return Err(Error::ExpansionOutOfRange(format!("no expansion for family {}", srf.base.name())));
    }
    if srf.t.norm() > 1.0 {
        return Err(Error::ExpansionOutOfRange(format!("|t| = {} > 1", srf.t.norm())));
    }
    if srf.n < EXPANSION_MIN_N && !opts.allow_small_n {
        return Err(Error::ExpansionOutOfRange(format!("n = {} < {EXPANSION_MIN_N}", srf.n)));
    }
    Ok(expansion_value(srf.base.alpha, srf.n, srf.t, p, opts.k))
}

fn expansion_value(alpha: f64, n: f64, t: Complex64, p: f64, k: f64) -> (Complex64, f64) {
    let d = Complex64::new(alpha, -p);
    let num = Complex64::new(alpha * alpha - p * p, 4.0 * alpha * p);
    let bracket = 1.0 + 2.0 * t / (PI * n).sqrt() + PI * PI / n * num / (d * d);
    let inv = 1.0 / (d * d);
    (inv * bracket, k * n.powf(-1.5) * inv.norm())
}

/// Integrates p·h(p)/(4π) over [0, ∞) componentwise: adaptive panels on
/// [0, p_cutoff] and the tail through p = p_cutoff/x.
fn p_integral<H>(h: &H, dim: usize, alpha: f64, budget: &mut QuadratureBudget) -> Result<(Vec<Complex64>, f64)>
where
    H: Fn(f64) -> Result<Vec<Complex64>>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |p: f64| -> Vec<Complex64> {
        if failure.borrow().is_some() {
            return vec![Complex64::new(0.0, 0.0); dim];
        }
        match h(p) {
            Ok(v) => v.into_iter().map(|z| z * (p / (4.0 * PI))).collect(),
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                vec![Complex64::new(0.0, 0.0); dim]
            }
        }
    };
    let pc = budget.cutoff(alpha);
    let mut breaks = vec![0.0];
    for f in [0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 32.0] {
        if f * alpha < pc {
            breaks.push(f * alpha);
        }
    }
    breaks.push(pc);
    let pieces = breaks.len() as f64;
    let tol = budget.tolerance / pieces;
    let mut total = vec![Complex64::new(0.0, 0.0); dim];
    let mut err = 0.0f64;
    for w in breaks.windows(2) {
        let (v, e) = adaptive_legendre_vec(&wrapped, w[0], w[1], dim, tol, budget.p_nodes);
        for k in 0..dim {
            total[k] += v[k];
        }
        err += e.iter().cloned().fold(0.0, f64::max);
    }
    let tail = |x: f64| -> Vec<Complex64> {
        let p = pc / x;
        wrapped(p).into_iter().map(|z| z * (pc / (x * x))).collect()
    };
    let (tv, te) = adaptive_legendre_vec(&tail, 0.0, 1.0, dim, tol, budget.p_nodes);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let tail_err = te.iter().cloned().fold(0.0, f64::max);
    if tail_err > 0.1 * budget.tolerance {
        return Err(Error::TailBoundTooLarge { tail: tail_err, tolerance: budget.tolerance });
    }
    for k in 0..dim {
        total[k] += tv[k];
    }
    err += tail_err;
    budget.record(err);
    Ok((total, err))
}

/// (F, G) = (1/(4π)) ∫₀^∞ p conj(F(p)) G(p) dp.
pub fn one_particle_inner<F, G>(f: &F, g: &G, alpha: f64, budget: &mut QuadratureBudget) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
    G: Fn(f64) -> Result<Complex64>,
{
    let h = |p: f64| -> Result<Vec<Complex64>> { Ok(vec![f(p)?.conj() * g(p)?]) };
    Ok(p_integral(&h, 1, alpha, budget)?.0[0])
}

/// Compares 𝓕f_n with the Fourier transform of the swapping partner
/// −sqrt(n/π)∫e^{−n(s−i/2)²} f(−e^{2πs}u) ds on a momentum grid.
pub fn ray_swap_check(
    base: &RayTestFunction,
    n: f64,
    p_grid: &[f64],
    budget: &mut QuadratureBudget,
) -> Result<VerificationReport> {
    check_guard(n, 0.5)?;
    let tol = if n <= 16.0 { 1e-8 } else { 1e-5 };
    let mut rep = VerificationReport::new("ray-swap-check", 0);
    let mut worst = 0.0f64;
    for &p in p_grid {
        if p < 0.0 {
            // the identity only holds for positive frequencies
            let direct = direct_fourier(base, n, Complex64::new(0.0, 0.0), p, budget);
            let swapped = swapped_fourier(base, n, p, budget);
            rep.push(
                Case::info(format!("swap_p={p}"), (direct - swapped).norm(), 0.0, "expected: negative frequency")
                    .param("n", n)
                    .param("p", p),
            );
            continue;
        }
        if !p.is_finite() {
            return Err(Error::DomainError(p));
        }
        let direct = smeared_fourier(&SmearedRayFunction::new(base.clone(), n, Complex64::new(0.0, 0.0))?, p, budget)?;
        let swapped = swapped_fourier(base, n, p, budget);
        let d = (direct - swapped).norm();
        worst = worst.max(d);
        rep.push(
            Case::identity(format!("swap_p={p}"), d, 0.0, tol)
                .param("n", n)
                .param("p", p)
                .param("direct_re", direct.re)
                .param("direct_im", direct.im),
        );
    }
    rep.push(Case::identity("max_difference", worst, 0.0, tol).param("n", n));
    let pneg = -base.alpha;
    let direct = direct_fourier(base, n, Complex64::new(0.0, 0.0), pneg, budget);
    let swapped = swapped_fourier(base, n, pneg, budget);
    rep.push(
        Case::info(
            "negative_frequency_discrepancy",
            (direct - swapped).norm(),
            0.0,
            "expected: the two functions differ off the positive frequencies",
        )
        .param("p", pneg),
    );
    Ok(rep)
}

/// Swapping-partner side, integrated on the real line with the Gaussian
/// centred at i/2: −sqrt(n/π)∫e^{−n(s−i/2)²−2πs}(𝓕f)(−pe^{−2πs})ds.
pub fn swapped_fourier(base: &RayTestFunction, n: f64, p: f64, budget: &mut QuadratureBudget) -> Complex64 {
    let h = |s: f64| {
        let e = (-2.0 * PI * s).exp();
        -e * base.fourier(-p * e)
    };
    let (v, err) = gaussian_integral(&h, n, Complex64::new(0.0, 0.5), budget.hermite_nodes);
    budget.record(err);
    v
}

/// ‖j(f_n)Ω‖², computed numerically.
pub fn jfn_norm_sq(base: &RayTestFunction, n: f64, budget: &mut QuadratureBudget) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(Error::DomainError(n));
    }
    let srf = SmearedRayFunction::new(base.clone(), n, Complex64::new(0.0, 0.0))?;
    let inner = RefCell::new(budget.clone());
    let h = |p: f64| -> Result<Vec<Complex64>> {
        let f = smeared_fourier(&srf, p, &mut inner.borrow_mut())?;
        Ok(vec![Complex64::new(f.norm_sqr(), 0.0)])
    };
    let (v, _) = p_integral(&h, 1, base.alpha, budget)?;
    let pointwise = inner.into_inner().error_estimate;
    budget.record(pointwise);
    Ok(v[0].re)
}

/// Two-term large-n form 1/(8πα²) − π/(4nα²).
pub fn jfn_norm_sq_expansion(alpha: f64, n: f64) -> f64 {
    1.0 / (8.0 * PI * alpha * alpha) - PI / (4.0 * n * alpha * alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WickMethod {
    Expansion,
    Direct,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WickBound {
    pub n: f64,
    pub method: WickMethod,
    pub c_n: f64,
    /// c_n⁴ times each of the three Wick terms
    pub terms: [f64; 3],
    /// ‖σ_{i/4}(j(c_n f_n))[σ_{3i/4}(j(c_n f_n))]*Ω‖²
    pub norm_sq: f64,
    /// 2 ln norm_sq, the convention under which the limit is 2 ln 3
    pub bound: f64,
    /// ln norm_sq = 2 ln of the norm itself
    pub sharp_bound: f64,
    /// error budget on norm_sq; for the expansion this propagates the K envelope
    pub error_budget: f64,
}

/// Wick four-point norm at flow parameters −3i/4, −i/4, i/4.
pub fn wick_bound(
    base: &RayTestFunction,
    n: f64,
    method: WickMethod,
    opts: ExpansionOptions,
    budget: &mut QuadratureBudget,
) -> Result<WickBound> {
    let ts = [Complex64::new(0.0, -0.75), Complex64::new(0.0, -0.25), Complex64::new(0.0, 0.25)];
    let srfs: Vec<SmearedRayFunction> =
        ts.iter().map(|t| SmearedRayFunction::new(base.clone(), n, *t)).collect::<Result<_>>()?;
    match method {
        WickMethod::Direct => {
            check_guard(n, 0.75)?;
            if n > DIRECT_MAX_N {
                return Err(Error::CancellationGuard(n * 0.5625));
            }
        }
        WickMethod::Expansion => {
            for s in &srfs {
                expansion_fourier(s, 0.0, opts)?;
            }
        }
    }
    let norm0 = jfn_norm_sq(base, n, budget)?;
    let c4 = 1.0 / (norm0 * norm0);
    let eval = |s: &SmearedRayFunction, p: f64, b: &mut QuadratureBudget| -> Result<(Complex64, f64)> {
        match method {
            WickMethod::Direct => Ok((smeared_fourier(s, p, b)?, 0.0)),
            WickMethod::Expansion => expansion_fourier(s, p, opts),
        }
    };
    // components: (A,B) (A,C) (A,A) (C,C), then ∫p|X|e and ∫p e² for the budget
    let inner = RefCell::new(budget.clone());
    let h = |p: f64| -> Result<Vec<Complex64>> {
        let b = &mut inner.borrow_mut();
        let (a, ea) = eval(&srfs[0], p, b)?;
        let (bb, eb) = eval(&srfs[1], p, b)?;
        let (cc, ec) = eval(&srfs[2], p, b)?;
        let r = |x: f64| Complex64::new(x, 0.0);
        Ok(vec![
            a.conj() * bb,
            a.conj() * cc,
            r(a.norm_sqr()),
            r(cc.norm_sqr()),
            r(a.norm() * eb + ea * bb.norm() + ea * eb),
            r(a.norm() * ec + ea * cc.norm() + ea * ec),
            r(2.0 * a.norm() * ea + ea * ea),
            r(2.0 * cc.norm() * ec + ec * ec),
        ])
    };
    let (v, qerr) = p_integral(&h, 8, base.alpha, budget)?;
    budget.record(inner.into_inner().error_estimate);
    let ab = v[0].norm();
    let ac = v[1].norm();
    let aa = v[2].re;
    let cc = v[3].re;
    let (e_ab, e_ac, e_aa, e_cc) = (v[4].re + qerr, v[5].re + qerr, v[6].re + qerr, v[7].re + qerr);
    let terms = [c4 * ab * ab, c4 * ac * ac, c4 * aa * cc];
    let norm_sq = terms.iter().sum::<f64>();
    let err = c4
        * ((2.0 * ab * e_ab + e_ab * e_ab) + (2.0 * ac * e_ac + e_ac * e_ac) + (aa * e_cc + e_aa * cc + e_aa * e_cc));
    Ok(WickBound {
        n,
        method,
        c_n: norm0.powf(-0.5),
        terms,
        norm_sq,
        bound: 2.0 * norm_sq.ln(),
        sharp_bound: norm_sq.ln(),
        error_budget: err,
    })
}
