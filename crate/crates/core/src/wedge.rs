//! Free scalar field in the right wedge of 1+1 dimensional Minkowski space:
//! boost-smeared test functions, the H function and agreement of a smeared
//! function with its swapping partner on the positive mass shell.
//!
//! Test functions factorize in light-cone coordinates u± = x¹ ± x⁰ and
//! Fourier transforms use e^{ipx} with px = −p⁰x⁰ + p¹x¹.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lightray::{gaussian_integral, QuadratureBudget, RayTestFunction, CANCELLATION_GUARD};
use crate::quadrature::{adaptive_legendre_vec, composite_legendre};

/// Agreement required between factorized and 2D-quadrature transforms.
pub const CALIBRATION_TOL: f64 = 1e-6;
/// Momenta used to fix the factorization convention.
pub const CALIBRATION_MOMENTA: [f64; 3] = [-1.3, 0.4, 2.1];

#[derive(Clone, Debug)]
pub struct WedgeFunction {
    /// factor in u₊ = x¹ + x⁰
    pub gplus: RayTestFunction,
    /// factor in u₋ = x¹ − x⁰
    pub gminus: RayTestFunction,
    pub mass: f64,
}

impl WedgeFunction {
    pub fn new(gplus: RayTestFunction, gminus: RayTestFunction, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::DomainError(mass));
        }
        Ok(Self { gplus, gminus, mass })
    }

    /// g₊ = g₋ = u e^{−u}.
    pub fn standard(mass: f64) -> Result<Self> {
        let g = RayTestFunction::exp_monomial(1.0)?;
        Self::new(g.clone(), g, mass)
    }

    pub fn omega(&self, p1: f64) -> f64 {
        (p1 * p1 + self.mass * self.mass).sqrt()
    }

    /// f(x⁰, x¹), when both factors have closed forms.
    pub fn value(&self, x0: f64, x1: f64) -> Option<f64> {
        Some(self.gplus.value(x1 + x0)? * self.gminus.value(x1 - x0)?)
    }
}

/// Λ_t x for complex rapidity t.
pub fn boost(t: Complex64, x: [f64; 2]) -> [Complex64; 2] {
    let ch = (2.0 * PI * t).cosh();
    let sh = (2.0 * PI * t).sinh();
    [ch * x[0] + sh * x[1], sh * x[0] + ch * x[1]]
}

pub fn in_right_wedge(x: [f64; 2]) -> bool {
    x[1] >= x[0].abs()
}

/// H(x, z, p) = cosh(2πz)(ωx⁰ − p¹x¹) + sinh(2πz)(ωx¹ − p¹x⁰).
pub fn h_function(x: [f64; 2], z: Complex64, p1: f64, mass: f64) -> Complex64 {
    let w = (p1 * p1 + mass * mass).sqrt();
    (2.0 * PI * z).cosh() * (w * x[0] - p1 * x[1]) + (2.0 * PI * z).sinh() * (w * x[1] - p1 * x[0])
}

/// Factorization (𝓕f)(ω, p¹) = scale·(𝓕g₊)(a₊)(𝓕g₋)(a₋) with a± built from
/// k₊ = (p¹ − ω)/2 and k₋ = (p¹ + ω)/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellConvention {
    pub scale: f64,
    pub sign_plus: f64,
    pub sign_minus: f64,
    /// g₊ takes k₋ and g₋ takes k₊
    pub swap_roles: bool,
    /// worst deviation from the 2D oracle at the calibration momenta
    pub deviation: f64,
}

impl ShellConvention {
    fn args(&self, p1: f64, w: f64) -> (f64, f64) {
        let (kp, km) = ((p1 - w) / 2.0, (p1 + w) / 2.0);
        let (a, b) = if self.swap_roles { (km, kp) } else { (kp, km) };
        (self.sign_plus * a, self.sign_minus * b)
    }

    /// Gaussian centre of the swapping partner. The boosted integrand is
    /// bounded on the strip where both Fourier arguments have Im ≥ 0; the
    /// centre is minus the far edge of that strip.
    pub fn swap_center(&self, p1: f64, mass: f64) -> Result<Complex64> {
        let (a, b) = self.args(p1, (p1 * p1 + mass * mass).sqrt());
        // Im(a e^{−2πiy}) = −a sin 2πy and Im(b e^{2πiy}) = b sin 2πy
        match (a < 0.0, b > 0.0) {
            (true, true) => Ok(Complex64::new(0.0, -0.5)),
            (false, false) => Ok(Complex64::new(0.0, 0.5)),
            _ => Err(Error::ConventionMismatch(f64::NAN)),
        }
    }
}

/// ∫∫ f(x) e^{i(−ωx⁰ + p¹x¹)} d²x over the right wedge by composite
/// Gauss–Legendre.
pub fn shell_fourier_2d(wf: &WedgeFunction, p1: f64) -> Result<Complex64> {
    if wf.value(0.0, 1.0).is_none() {
        return Err(Error::ConfigError("2D oracle needs closed-form factors".into()));
    }
    let w = wf.omega(p1);
    let decay = wf.gplus.alpha.min(wf.gminus.alpha);
    let len = 40.0 / decay;
    let outer = |x1: f64| {
        let inner = |x0: f64| {
            let f = wf.value(x0, x1).unwrap_or(0.0);
            Complex64::from_polar(f, -w * x0 + p1 * x1)
        };
        let panels = ((2.0 * x1 / 0.5).ceil() as usize).max(1);
        composite_legendre(&inner, -x1, x1, panels, 16).0
    };
    let panels = (len / 0.5).ceil() as usize;
    Ok(composite_legendre(&outer, 0.0, len, panels, 16).0)
}

static CONVENTION: OnceLock<std::result::Result<ShellConvention, f64>> = OnceLock::new();

/// Fixes the factorization convention against the 2D oracle, once.
pub fn calibrated_convention() -> Result<ShellConvention> {
    CONVENTION.get_or_init(calibrate).map_err(Error::ConventionMismatch)
}

fn calibrate() -> std::result::Result<ShellConvention, f64> {
    let reference = WedgeFunction::new(
        RayTestFunction::exp_monomial(1.0).unwrap(),
        RayTestFunction::exp_monomial(1.7).unwrap(),
        1.0,
    )
    .unwrap();
    let oracle: Vec<Complex64> =
        CALIBRATION_MOMENTA.iter().map(|p| shell_fourier_2d(&reference, *p).unwrap()).collect();
    let mut best = f64::INFINITY;
    for scale in [0.5, 1.0, 2.0] {
        for sign_plus in [1.0, -1.0] {
            for sign_minus in [1.0, -1.0] {
                for swap_roles in [false, true] {
                    let mut conv = ShellConvention { scale, sign_plus, sign_minus, swap_roles, deviation: 0.0 };
                    let dev = CALIBRATION_MOMENTA
                        .iter()
                        .zip(&oracle)
                        .map(|(p, o)| (factorized(&reference, &conv, *p) - o).norm())
                        .fold(0.0, f64::max);
                    best = best.min(dev);
                    if dev <= CALIBRATION_TOL {
                        conv.deviation = dev;
                        return Ok(conv);
                    }
                }
            }
        }
    }
    Err(best)
}

fn factorized(wf: &WedgeFunction, conv: &ShellConvention, p1: f64) -> Complex64 {
    let (a, b) = conv.args(p1, wf.omega(p1));
    conv.scale * wf.gplus.fourier(a) * wf.gminus.fourier(b)
}

/// (𝓕f)(ω_p, p¹) from the light-cone factorization.
pub fn shell_fourier(wf: &WedgeFunction, p1: f64) -> Result<Complex64> {
    let conv = calibrated_convention()?;
    Ok(factorized(wf, &conv, p1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WedgeSide {
    Direct,
    Swapped,
}

/// Boosted integrand scale·(𝓕g₊)(σa₊e^{−2πs})(𝓕g₋)(σa₋e^{2πs}).
fn boosted<'a>(
    wf: &'a WedgeFunction,
    conv: &ShellConvention,
    p1: f64,
    sigma: f64,
) -> impl Fn(f64) -> Complex64 + 'a {
    let (a, b) = conv.args(p1, wf.omega(p1));
    let scale = conv.scale;
    move |s: f64| {
        let e = (2.0 * PI * s).exp();
        scale * wf.gplus.fourier(sigma * a / e) * wf.gminus.fourier(sigma * b * e)
    }
}

/// Fourier transform of f_n (direct) or of its swapping partner (swapped)
/// on the positive mass shell.
pub fn wedge_smeared_shell_fourier(
    wf: &WedgeFunction,
    n: f64,
    p1: f64,
    side: WedgeSide,
    budget: &mut QuadratureBudget,
) -> Result<Complex64> {
    let conv = calibrated_convention()?;
    match side {
        WedgeSide::Direct => smeared(wf, &conv, n, p1, 1.0, Complex64::new(0.0, 0.0), budget),
        WedgeSide::Swapped => {
            let c = conv.swap_center(p1, wf.mass)?;
            smeared(wf, &conv, n, p1, -1.0, c, budget)
        }
    }
}

/// Swapping-partner transform with an explicitly chosen Gaussian centre.
pub fn swapped_with_center(
    wf: &WedgeFunction,
    n: f64,
    p1: f64,
    center: Complex64,
    budget: &mut QuadratureBudget,
) -> Result<Complex64> {
    let conv = calibrated_convention()?;
    smeared(wf, &conv, n, p1, -1.0, center, budget)
}

fn smeared(
    wf: &WedgeFunction,
    conv: &ShellConvention,
    n: f64,
    p1: f64,
    sigma: f64,
    center: Complex64,
    budget: &mut QuadratureBudget,
) -> Result<Complex64> {
    if !(n > 0.0) {
        return Err(Error::DomainError(n));
    }
    let load = n * center.im * center.im;
    if load > CANCELLATION_GUARD {
        return Err(Error::CancellationGuard(load));
    }
    let h = boosted(wf, conv, p1, sigma);
    let (v, err) = gaussian_integral(&h, n, center, budget.hermite_nodes);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::QuadratureBudgetExceeded { estimate: f64::INFINITY, limit: budget.tolerance });
    }
    if err > 1e-3 * v.norm().max(1e-6) {
        return Err(Error::QuadratureBudgetExceeded { estimate: err, limit: 1e-3 * v.norm() });
    }
    if err > budget.error_estimate {
        budget.error_estimate = err;
    }
    Ok(v)
}

/// ω₂(h, h) − ω₂(f_n, f_n) for the swapping partner h, i.e. the exponent of
/// the rescaling relating W(h)Ω to W(f_n)Ω. The quadratic form pairs the
/// negative-shell transform with the positive-shell one and is integrated
/// over p¹ with measure dp¹/(4πω).
pub fn weyl_rescaling_exponent(wf: &WedgeFunction, n: f64, budget: &mut QuadratureBudget) -> Result<f64> {
    let conv = calibrated_convention()?;
    let failure = std::cell::RefCell::new(None);
    let inner = std::cell::RefCell::new(budget.clone());
    let integrand = |v: f64| -> Vec<Complex64> {
        let p1 = v.sinh();
        let jac = v.cosh() / (4.0 * PI * wf.omega(p1));
        let eval = || -> Result<(Complex64, Complex64)> {
            let b = &mut inner.borrow_mut();
            let c = conv.swap_center(p1, wf.mass)?;
            let pos = smeared(wf, &conv, n, p1, 1.0, Complex64::new(0.0, 0.0), b)?;
            // negative shell: arguments flip sign, so the swapped partner
            // there is the direct integrand with the shifted centre
            let neg_swap = smeared(wf, &conv, n, p1, 1.0, c, b)?;
            Ok((pos, neg_swap))
        };
        match eval() {
            Ok((pos, neg_swap)) => vec![Complex64::new(pos.norm_sqr() * jac, 0.0), neg_swap * pos * jac],
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                vec![Complex64::new(0.0, 0.0); 2]
            }
        }
    };
    let (vals, errs) = adaptive_legendre_vec(&integrand, -12.0, 12.0, 2, budget.tolerance, budget.p_nodes);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let pointwise = inner.into_inner().error_estimate;
    budget.error_estimate = budget.error_estimate.max(pointwise).max(errs[0] + errs[1]);
    Ok((vals[1] - vals[0]).re)
}

/// Norm square ω₂(f_n, f_n) of the smeared function.
pub fn smeared_norm_sq(wf: &WedgeFunction, n: f64, budget: &mut QuadratureBudget) -> Result<f64> {
    let conv = calibrated_convention()?;
    let failure = std::cell::RefCell::new(None);
    let inner = std::cell::RefCell::new(budget.clone());
    let integrand = |v: f64| -> Vec<Complex64> {
        let p1 = v.sinh();
        let jac = v.cosh() / (4.0 * PI * wf.omega(p1));
        match smeared(wf, &conv, n, p1, 1.0, Complex64::new(0.0, 0.0), &mut inner.borrow_mut()) {
            Ok(pos) => vec![Complex64::new(pos.norm_sqr() * jac, 0.0)],
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                vec![Complex64::new(0.0, 0.0)]
            }
        }
    };
    let (vals, errs) = adaptive_legendre_vec(&integrand, -12.0, 12.0, 1, budget.tolerance, budget.p_nodes);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    budget.error_estimate = budget.error_estimate.max(errs[0]);
    Ok(vals[0].re)
}
