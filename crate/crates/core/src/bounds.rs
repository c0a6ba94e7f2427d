//! Relative entropy bounds for excitations by commutant and algebra elements.

use serde::{Deserialize, Serialize};

use crate::divergences::{araki_relative_entropy, l4_closed_form, relative_entropy, DivergenceValue};
use crate::ensemble::{faithful_density, gaussian_matrix, rng, Rng};
use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::linalg::{c, fro, identity, kron, op_norm, partial_trace_first, real_diag, vnorm, CMat, CVec};
use crate::quadrature::gauss_hermite;
use crate::report::{Case, VerificationReport};
use crate::standard_form::{
    algebra_density, commutant_density, make_standard_form, AlgebraElement, CommutantElement, StandardForm,
};

/// Slack allowed in the bound chain.
pub const CHAIN_TOL: f64 = 1e-8;

fn check_unit(v: &CVec) -> Result<()> {
    let nv = vnorm(v);
    if (nv - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(nv));
    }
    Ok(())
}

/// b′ / ‖b′Ω‖ together with ‖b′Ω‖.
pub fn normalize_commutant(sf: &StandardForm, b: &CommutantElement) -> Result<(CommutantElement, f64)> {
    let nv = vnorm(&sf.excite_commutant(b));
    if nv < 1e-12 {
        return Err(Error::DegenerateInput("b'Ω vanishes".into()));
    }
    Ok((CommutantElement(&b.0 / c(nv, 0.0)), nv))
}

pub fn normalize_algebra(sf: &StandardForm, a: &AlgebraElement) -> Result<(AlgebraElement, f64)> {
    let nv = vnorm(&sf.excite_algebra(a));
    if nv < 1e-12 {
        return Err(Error::DegenerateInput("aΩ vanishes".into()));
    }
    Ok((AlgebraElement(&a.0 / c(nv, 0.0)), nv))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundChain {
    pub s_rel: DivergenceValue,
    /// 2 ln ‖Δ^{−1/4} b′†b′ Ω‖
    pub mid_l4: f64,
    /// 2 ln ‖b′‖_op
    pub right_opnorm: Ext,
    /// (mid − s_rel, right − mid)
    pub slacks: (f64, f64),
}

impl BoundChain {
    pub fn holds(&self, tol: f64) -> bool {
        let s = self.s_rel.value.finite().unwrap_or(f64::INFINITY);
        s >= -tol && self.slacks.0 >= -tol && self.slacks.1 >= -tol
    }

    pub fn max_abs_member(&self) -> f64 {
        let s = self.s_rel.value.finite().unwrap_or(f64::INFINITY).abs();
        let r = self.right_opnorm.finite().unwrap_or(f64::INFINITY).abs();
        s.max(self.mid_l4.abs()).max(r)
    }
}

pub fn thm1_bound(sf: &StandardForm, b: &CommutantElement) -> Result<BoundChain> {
    let psi = sf.excite_commutant(b);
    check_unit(&psi)?;
    let s_rel = relative_entropy(sf, &psi)?;
    let mid_l4 = 4.0 * l4_closed_form(sf, b).ln();
    let right_opnorm = Ext::Finite(2.0 * op_norm(&b.0).ln());
    let s = s_rel.value.finite().unwrap_or(f64::INFINITY);
    let r = right_opnorm.unwrap();
    Ok(BoundChain { s_rel, mid_l4, right_opnorm, slacks: (mid_l4 - s, r - mid_l4) })
}

#[derive(Clone, Debug)]
pub struct SwapPartner {
    pub element: CommutantElement,
    /// J[σ_{i/2}(a)]†J as an operator on the full space
    pub raw: CMat,
    /// distance of `raw` from 1 ⊗ (extracted element)
    pub residual: f64,
}

/// b′ = J[σ_{i/2}(a)]†J.
pub fn swapping_partner(sf: &StandardForm, a: &AlgebraElement) -> Result<SwapPartner> {
    if !sf.faithful {
        return Err(Error::NotFaithful(sf.rho_spectrum.values[0]));
    }
    let flowed = sf.modular_flow(a, c(0.0, 0.5));
    let raw = sf.conjugate_by_j(&flowed.adjoint().on_space());
    let n = sf.n;
    let m = partial_trace_first(&raw, n, n) / c(n as f64, 0.0);
    let residual = fro(&(&raw - kron(&identity(n), &m)));
    Ok(SwapPartner { element: CommutantElement(m), raw, residual })
}

/// max over matrix units E of ‖[E ⊗ 1, X]‖.
pub fn commutation_defect(n: usize, x: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            let mut e = CMat::zeros(n, n);
            e[(k, l)] = c(1.0, 0.0);
            let a = kron(&e, &identity(n));
            worst = worst.max(fro(&(&a * x - x * &a)));
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cor2Bound {
    pub s_rel: DivergenceValue,
    /// 2 ln ‖σ_{i/4}(a)[σ_{3i/4}(a)]†Ω‖
    pub middle: f64,
    /// 2 ln ‖Δ^{−1/4} a Δ a† Ω‖, the same quantity written without the flow
    pub middle_alt: f64,
    /// 2 ln ‖σ_{i/2}(a)‖_op
    pub right: f64,
}

pub fn cor2_bound(sf: &StandardForm, a: &AlgebraElement) -> Result<Cor2Bound> {
    let psi = sf.excite_algebra(a);
    check_unit(&psi)?;
    let q = sf.modular_flow(a, c(0.0, 0.25));
    let tq = sf.modular_flow(a, c(0.0, 0.75));
    let v = AlgebraElement(&q.0 * tq.0.adjoint()).apply(&sf.omega);
    let middle = 2.0 * vnorm(&v).ln();
    let alt = sf.delta_pow(-0.25) * a.on_space() * &sf.delta * a.adjoint().on_space() * &sf.omega;
    let middle_alt = 2.0 * vnorm(&alt).ln();
    let right = 2.0 * op_norm(&sf.modular_flow(a, c(0.0, 0.5)).0).ln();
    Ok(Cor2Bound { s_rel: relative_entropy(sf, &psi)?, middle, middle_alt, right })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmearMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Debug)]
pub struct SmearedElement {
    pub base: AlgebraElement,
    pub n: f64,
    pub smeared: AlgebraElement,
    pub closed_form_used: bool,
    /// ‖a_nΩ − aΩ‖
    pub distance: f64,
}

/// Gauss–Hermite nodes for the quadrature smear.
pub const SMEAR_NODES: usize = 128;

/// a_n = √(n/π) ∫ e^{−ns²} σ_s(a) ds.
pub fn smear(sf: &StandardForm, a: &AlgebraElement, n: f64, method: SmearMethod) -> Result<SmearedElement> {
    if !(n > 0.0) {
        return Err(Error::DegenerateInput(format!("smearing width {n}")));
    }
    if !sf.faithful {
        return Err(Error::NotFaithful(sf.rho_spectrum.values[0]));
    }
    let smeared = match method {
        SmearMethod::ClosedForm => {
            let v = &sf.rho_spectrum.vectors;
            let lp: Vec<f64> = sf.rho_spectrum.values.iter().map(|p| p.ln()).collect();
            let mut t = v.adjoint() * &a.0 * v;
            for i in 0..sf.n {
                for j in 0..sf.n {
                    let d = lp[i] - lp[j];
                    t[(i, j)] *= (-d * d / (4.0 * n)).exp();
                }
            }
            v * t * v.adjoint()
        }
        SmearMethod::Quadrature => {
            let q = quad_smear(sf, a, n, SMEAR_NODES);
            let q2 = quad_smear(sf, a, n, 2 * SMEAR_NODES);
            let est = fro(&(&q - &q2));
            let limit = 1e-10 * fro(&a.0).max(1.0);
            if est > limit {
                return Err(Error::QuadratureBudgetExceeded { estimate: est, limit });
            }
            q2
        }
    };
    let smeared = AlgebraElement(smeared);
    let distance = vnorm(&(sf.excite_algebra(&smeared) - sf.excite_algebra(a)));
    Ok(SmearedElement { base: a.clone(), n, smeared, closed_form_used: method == SmearMethod::ClosedForm, distance })
}

fn quad_smear(sf: &StandardForm, a: &AlgebraElement, n: f64, nodes: usize) -> CMat {
    let rule = gauss_hermite(nodes);
    let mut acc = CMat::zeros(sf.n, sf.n);
    let sc = 1.0 / n.sqrt();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let s = x * sc;
        acc += sf.modular_flow(a, c(s, 0.0)).0 * c(*w, 0.0);
    }
    acc / c(std::f64::consts::PI.sqrt(), 0.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cor3Row {
    pub n: f64,
    pub bound: f64,
    pub running_min: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cor3Result {
    pub rows: Vec<Cor3Row>,
    /// set when the bound sequence is not monotone on the grid
    pub non_monotone: bool,
}

impl Cor3Result {
    pub fn liminf_estimate(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.running_min)
    }
}

pub fn cor3_bound(sf: &StandardForm, a: &AlgebraElement, n_grid: &[f64]) -> Result<Cor3Result> {
    check_unit(&sf.excite_algebra(a))?;
    let mut rows: Vec<Cor3Row> = Vec::new();
    let mut run = f64::INFINITY;
    for &n in n_grid {
        let sm = smear(sf, a, n, SmearMethod::ClosedForm)?;
        let (an, _) = normalize_algebra(sf, &sm.smeared)?;
        let b = cor2_bound(sf, &an)?.middle;
        run = run.min(b);
        rows.push(Cor3Row { n, bound: b, running_min: run, distance: sm.distance });
    }
    let inc = rows.windows(2).all(|w| w[1].bound >= w[0].bound - 1e-12);
    let dec = rows.windows(2).all(|w| w[1].bound <= w[0].bound + 1e-12);
    Ok(Cor3Result { non_monotone: !(inc || dec), rows })
}

/// C = ‖b′‖²/‖b′Ω‖² and the largest sampled ω_{b′}(c†c)/ω(c†c).
pub fn controlled_constant(sf: &StandardForm, b: &CommutantElement, trials: usize, seed: u64) -> Result<(f64, f64)> {
    let psi = sf.excite_commutant(b);
    let norm_sq = vnorm(&psi).powi(2);
    if norm_sq < 1e-24 {
        return Err(Error::DegenerateInput("b'Ω vanishes".into()));
    }
    let cst = op_norm(&b.0).powi(2) / norm_sq;
    let rho_b = algebra_density(&psi)? / c(norm_sq, 0.0);
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g = gaussian_matrix(&mut r, sf.n);
        let pos = g.adjoint() * &g;
        let num = (&rho_b * &pos).trace().re;
        let den = (&sf.rho * &pos).trace().re;
        worst = worst.max(num / den);
    }
    Ok((cst, worst))
}

/// S(v) against ‖v‖²S(v̂) + ‖v‖² ln ‖v‖² for an unnormalized vector v.
pub fn rescaling_identity(sf: &StandardForm, v: &CVec) -> Result<(f64, f64)> {
    let nv = vnorm(v);
    let lhs = araki_relative_entropy(&sf.omega, v)?;
    let unit = araki_relative_entropy(&sf.omega, &(v / c(nv, 0.0)))?;
    let (Some(l), Some(u)) = (lhs.finite(), unit.finite()) else {
        return Err(Error::DegenerateInput("infinite relative entropy".into()));
    };
    let n2 = nv * nv;
    Ok((l, n2 * u + n2 * n2.ln()))
}

/// Random faithful form of dimension n and a normalized commutant excitation.
pub fn random_instance(r: &mut Rng, n: usize) -> Result<(StandardForm, CommutantElement)> {
    let sf = make_standard_form(&faithful_density(r, n), true)?;
    let m = CommutantElement(gaussian_matrix(r, n));
    let (m, _) = normalize_commutant(&sf, &m)?;
    Ok((sf, m))
}

pub fn random_algebra_instance(r: &mut Rng, n: usize) -> Result<(StandardForm, AlgebraElement)> {
    let sf = make_standard_form(&faithful_density(r, n), true)?;
    let a = AlgebraElement(gaussian_matrix(r, n));
    let (a, _) = normalize_algebra(&sf, &a)?;
    Ok((sf, a))
}

fn pauli_z() -> CMat {
    real_diag(&[1.0, -1.0])
}

/// Two-qubit example: U = σ_z ⊗ 1 and U′ = 1 ⊗ σ_z on the maximally entangled Ω.
pub fn qubit_demo() -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("qubit-demo", 0);
    let sf = make_standard_form(&real_diag(&[0.5, 0.5]), true)?;
    let u = AlgebraElement(pauli_z());
    let up = CommutantElement(pauli_z());
    let uo = sf.excite_algebra(&u);
    let upo = sf.excite_commutant(&up);
    rep.push(Case::identity("U_omega_equals_Uprime_omega", vnorm(&(&uo - &upo)), 0.0, 1e-12));

    let half = real_diag(&[0.5, 0.5]);
    let max_dev = |m: &CMat| m.iter().zip(half.iter()).fold(0.0f64, |w, (a, b)| w.max((a - b).norm()));
    let rho1 = algebra_density(&upo)?;
    let sigma1 = commutant_density(&upo)?;
    let (d_rho, d_sigma) = (max_dev(&rho1), max_dev(&sigma1));
    rep.push(
        Case::identity("reduced_densities_half_identity", d_rho.max(d_sigma), 0.0, 1e-12)
            .param("rho1_max_dev", d_rho)
            .param("sigma1_max_dev", d_sigma),
    );

    // S_rel and every member of the bound chain must vanish
    let s = relative_entropy(&sf, &upo)?.finite().unwrap_or(f64::INFINITY);
    let chain = thm1_bound(&sf, &up)?.max_abs_member();
    rep.push(
        Case::le("relative_entropy_vanishes", Ext::Finite(s.abs().max(chain)), Ext::Finite(1e-10), 0.0)
            .param("s_rel", s)
            .param("chain_max_abs", chain),
    );
    Ok(rep)
}
