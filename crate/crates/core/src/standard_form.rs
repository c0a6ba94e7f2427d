//! Standard form of the n×n matrix algebra on C^n ⊗ C^n ≅ n×n matrices.
//!
//! A vector ξ is the row-major vectorization of a matrix X. The algebra acts
//! by X ↦ aX and the commutant 1⊗m by X ↦ X mᵀ. Then Ω = vec(ρ^{1/2}),
//! Δ: X ↦ ρXρ⁻¹, J: X ↦ X† and the positive cone is the PSD matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    c, conj_mat, fro, herm_eig, identity, kron, mat_pow, mat_sqrt, pinv, projector_basis, range_projector, unvec,
    vec_of, vnorm, AntilinearMap, CMat, CVec, Spectrum, ZERO,
};

/// An element a of the algebra, acting as a ⊗ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement(pub CMat);

/// An element of the commutant, 1 ⊗ m, stored as m.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutantElement(pub CMat);

impl AlgebraElement {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
    pub fn on_space(&self) -> CMat {
        kron(&self.0, &identity(self.dim()))
    }
    pub fn apply(&self, v: &CVec) -> CVec {
        vec_of(&(&self.0 * unvec(v, self.dim())))
    }
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }
}

impl CommutantElement {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
    pub fn on_space(&self) -> CMat {
        kron(&identity(self.dim()), &self.0)
    }
    pub fn apply(&self, v: &CVec) -> CVec {
        vec_of(&(unvec(v, self.dim()) * self.0.transpose()))
    }
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }
}

/// Which algebra a relative modular object refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Algebra,
    Commutant,
}

pub fn side_dim(v: &CVec) -> Result<usize> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() || n == 0 {
        return Err(Error::DimensionMismatch(format!("length {} is not a square", v.len())));
    }
    Ok(n)
}

/// Matrix units E_kl.
fn matrix_units(n: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let mut e = CMat::zeros(n, n);
            e[(k, l)] = c(1.0, 0.0);
            out.push(e);
        }
    }
    out
}

/// Basis of the chosen side's algebra as operators on C^{n²}.
fn side_basis(n: usize, side: Side) -> Vec<CMat> {
    let id = identity(n);
    matrix_units(n)
        .into_iter()
        .map(|e| match side {
            Side::Algebra => kron(&e, &id),
            Side::Commutant => kron(&id, &e),
        })
        .collect()
}

fn other(side: Side) -> Side {
    match side {
        Side::Algebra => Side::Commutant,
        Side::Commutant => Side::Algebra,
    }
}

const SPAN_REL: f64 = 1e-10;

/// Support projection of the vector state of Ψ on the given side: the
/// projector onto the closure of (other side)·Ψ.
pub fn support(psi: &CVec, side: Side) -> Result<CMat> {
    let n = side_dim(psi)?;
    let ops = side_basis(n, other(side));
    let mut cols = CMat::zeros(psi.len(), ops.len());
    for (k, o) in ops.iter().enumerate() {
        cols.set_column(k, &(o * psi));
    }
    Ok(range_projector(&cols, SPAN_REL))
}

/// Density matrix of the vector state on the algebra: Y Y†.
pub fn algebra_density(v: &CVec) -> Result<CMat> {
    let y = unvec(v, side_dim(v)?);
    Ok(&y * y.adjoint())
}

/// Density matrix (for 1⊗m) of the vector state on the commutant: (Y†Y)ᵀ.
pub fn commutant_density(v: &CVec) -> Result<CMat> {
    let y = unvec(v, side_dim(v)?);
    Ok((y.adjoint() * &y).transpose())
}

#[derive(Clone, Debug)]
pub struct StandardForm {
    pub n: usize,
    pub rho: CMat,
    pub rho_spectrum: Spectrum,
    pub omega: CVec,
    pub delta: CMat,
    pub j: AntilinearMap,
    pub faithful: bool,
}

/// Linear part of X ↦ X† under row-major vectorization.
pub fn dagger_map(n: usize) -> AntilinearMap {
    let nn = n * n;
    let mut l = CMat::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            l[(i * n + j, j * n + i)] = c(1.0, 0.0);
        }
    }
    AntilinearMap::new(l)
}

pub fn make_standard_form(rho: &CMat, require_full_rank: bool) -> Result<StandardForm> {
    let n = rho.nrows();
    if n == 0 || rho.ncols() != n {
        return Err(Error::NotDensity("not a nonempty square matrix".into()));
    }
    let sp = herm_eig(rho).map_err(|e| Error::NotDensity(e.to_string()))?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    if sp.values[0] < -1e-12 {
        return Err(Error::NotDensity(format!("negative eigenvalue {:.3e}", sp.values[0])));
    }
    let faithful = sp.values[0] > 1e-10;
    if require_full_rank && !faithful {
        return Err(Error::NotFaithful(sp.values[0]));
    }
    let root = sp.apply(|x| x.max(0.0).sqrt());
    let inv = sp.apply_support(|x| 1.0 / x);
    Ok(StandardForm {
        n,
        rho: rho.clone(),
        omega: vec_of(&root),
        delta: kron(rho, &inv.transpose()),
        j: dagger_map(n),
        rho_spectrum: sp,
        faithful,
    })
}

impl StandardForm {
    pub fn hilbert_dim(&self) -> usize {
        self.n * self.n
    }

    /// Δ^z for real z, on the support of Δ.
    pub fn delta_pow(&self, z: f64) -> CMat {
        let a = self.rho_spectrum.apply_support(|x| x.powf(z));
        let b = self.rho_spectrum.apply_support(|x| x.powf(-z));
        kron(&a, &b.transpose())
    }

    /// ρ^{w} for complex w, spectrally (faithful forms only).
    pub fn rho_power_c(&self, w: Complex64) -> CMat {
        let thr = self.rho_spectrum.kernel_threshold();
        self.rho_spectrum.apply_c(|x| if x > thr { (w * x.ln()).exp() } else { ZERO })
    }

    /// σ_t(a) = ρ^{it} a ρ^{-it} for complex t.
    pub fn modular_flow(&self, a: &AlgebraElement, t: Complex64) -> AlgebraElement {
        if t == ZERO {
            return a.clone();
        }
        let it = Complex64::i() * t;
        AlgebraElement(self.rho_power_c(it) * &a.0 * self.rho_power_c(-it))
    }

    /// Tomita operator S = J Δ^{1/2}.
    pub fn tomita(&self) -> AntilinearMap {
        self.j.after_linear(&self.delta_pow(0.5))
    }

    pub fn excite_algebra(&self, a: &AlgebraElement) -> CVec {
        a.apply(&self.omega)
    }

    pub fn excite_commutant(&self, m: &CommutantElement) -> CVec {
        m.apply(&self.omega)
    }

    /// J A J for a linear operator A on the Hilbert space.
    pub fn conjugate_by_j(&self, a: &CMat) -> CMat {
        &self.j.linear * conj_mat(a) * conj_mat(&self.j.linear)
    }
}

#[derive(Clone, Debug)]
pub struct RelativeModular {
    pub side: Side,
    pub delta: CMat,
    pub spectrum: Spectrum,
    /// s^𝔐(Φ) (algebra side) or s^{𝔐′}(Φ) (commutant side)
    pub support_left: CMat,
    /// s^{𝔐′}(Ψ) (algebra side) or s^𝔐(Ψ) (commutant side)
    pub support_right: CMat,
    pub tomita: AntilinearMap,
    pub j_rel: AntilinearMap,
}

impl RelativeModular {
    pub fn support(&self) -> CMat {
        self.spectrum.support_projector()
    }

    /// Δ^r on the support.
    pub fn power(&self, r: f64) -> CMat {
        self.spectrum.apply_support(|x| x.powf(r))
    }

    /// Spectral measure weights |(e_k, ξ)|² paired with eigenvalues.
    pub fn spectral_weights(&self, xi: &CVec) -> Vec<(f64, f64)> {
        let thr = self.spectrum.kernel_threshold();
        (0..self.spectrum.dim())
            .map(|k| {
                let lam = self.spectrum.values[k];
                let lam = if lam <= thr { 0.0 } else { lam };
                (lam, self.spectrum.vectors.column(k).dotc(xi).norm_sqr())
            })
            .collect()
    }
}

fn check_nonzero(v: &CVec, what: &str) -> Result<()> {
    if vnorm(v) < 1e-12 {
        return Err(Error::DegenerateInput(format!("{what} has norm below 1e-12")));
    }
    Ok(())
}

/// Closed form Δ_{Φ,Ψ} from the vectorization model.
pub fn relative_modular_oracle(phi: &CVec, psi: &CVec, side: Side) -> Result<CMat> {
    let n = side_dim(phi)?;
    let x = unvec(phi, n);
    let y = unvec(psi, n);
    Ok(match side {
        // Z ↦ (XX†) Z (Y†Y)^+
        Side::Algebra => kron(&(&x * x.adjoint()), &mat_pow(&(y.adjoint() * &y), -1.0)?.transpose()),
        // Z ↦ (YY†)^+ Z (X†X)
        Side::Commutant => kron(&mat_pow(&(&y * y.adjoint()), -1.0)?, &(x.adjoint() * &x).transpose()),
    })
}

/// Relative modular data built from the defining equation
/// S(AΨ + (1 − s_other(Ψ))ζ) = s_side(Ψ) A* Φ for A in the chosen side.
pub fn relative_modular(phi: &CVec, psi: &CVec, side: Side) -> Result<RelativeModular> {
    check_nonzero(phi, "Φ")?;
    check_nonzero(psi, "Ψ")?;
    let n = side_dim(phi)?;
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch("Φ and Ψ live in different spaces".into()));
    }
    let nn = n * n;
    let ops = side_basis(n, side);
    // s_other(Ψ): projector onto the closure of side·Ψ
    let s_other_psi = support(psi, other(side))?;
    let s_side_psi = support(psi, side)?;
    let kernel = projector_basis(&(identity(nn) - &s_other_psi))?;

    let cols = ops.len() + kernel.ncols();
    let mut v = CMat::zeros(nn, cols);
    let mut w = CMat::zeros(nn, cols);
    for (k, a) in ops.iter().enumerate() {
        v.set_column(k, &(a * psi));
        w.set_column(k, &(&s_side_psi * (a.adjoint() * phi)));
    }
    for k in 0..kernel.ncols() {
        v.set_column(ops.len() + k, &kernel.column(k));
    }
    // L conj(V) = W
    let l = &w * pinv(&conj_mat(&v), 1e-13);
    let tomita = AntilinearMap::new(l);
    let raw = tomita.adjoint().compose(&tomita);
    let delta = (&raw + raw.adjoint()) * c(0.5, 0.0);
    let spectrum = herm_eig(&delta)?;
    let inv_root = spectrum.apply_support(|x| 1.0 / x.sqrt());
    let j_rel = tomita.after_linear(&inv_root);

    let faithful = |v: &CVec| -> Result<bool> {
        let d = herm_eig(&algebra_density(v)?)?;
        Ok(d.values[0] > 1e-8 * d.values[d.dim() - 1])
    };
    if faithful(phi)? && faithful(psi)? {
        let oracle = relative_modular_oracle(phi, psi, side)?;
        let dev = fro(&(&oracle - &delta)) / fro(&oracle).max(1.0);
        if dev > 1e-8 {
            return Err(Error::OracleMismatch(dev));
        }
    }
    Ok(RelativeModular {
        side,
        delta,
        spectrum,
        support_left: support(phi, side)?,
        support_right: s_other_psi,
        tomita,
        j_rel,
    })
}

#[derive(Clone, Debug)]
pub struct RepresentativeChange {
    pub u_prime: CommutantElement,
    pub v_prime: CommutantElement,
    pub phi_plus: CVec,
    pub psi_plus: CVec,
}

/// Cone representative of the algebra state of ξ, with ξ = (1⊗w)ξ⁺.
pub fn cone_representative(xi: &CVec) -> Result<(CommutantElement, CVec)> {
    check_nonzero(xi, "vector")?;
    let n = side_dim(xi)?;
    let x = unvec(xi, n);
    let z = mat_sqrt(&(&x * x.adjoint()))?;
    let z = (&z + z.adjoint()) * c(0.5, 0.0);
    // X = Z wᵀ with wᵀ = Z⁺ X
    let wt = mat_pow(&z, -1.0)? * &x;
    Ok((CommutantElement(wt.transpose()), vec_of(&z)))
}

pub fn representative_change(phi: &CVec, psi: &CVec) -> Result<RepresentativeChange> {
    let (u_prime, phi_plus) = cone_representative(phi)?;
    let (v_prime, psi_plus) = cone_representative(psi)?;
    Ok(RepresentativeChange { u_prime, v_prime, phi_plus, psi_plus })
}

#[derive(Clone, Debug)]
pub struct PolarVector {
    pub isometry: AlgebraElement,
    pub cone_part: CVec,
}

/// Ψ = (u ⊗ 1)|Ψ| with u a partial isometry of the algebra and |Ψ| in the cone.
pub fn polar_vector(psi: &CVec) -> Result<PolarVector> {
    check_nonzero(psi, "Ψ")?;
    let n = side_dim(psi)?;
    let y = unvec(psi, n);
    let a = mat_sqrt(&(y.adjoint() * &y))?;
    let a = (&a + a.adjoint()) * c(0.5, 0.0);
    let u = &y * mat_pow(&a, -1.0)?;
    Ok(PolarVector { isometry: AlgebraElement(u), cone_part: vec_of(&a) })
}

#[derive(Clone, Copy, Debug)]
pub struct ConeTest {
    pub member: bool,
    /// Frobenius distance to the PSD cone
    pub distance: f64,
}

pub fn cone_membership(xi: &CVec) -> Result<ConeTest> {
    let n = side_dim(xi)?;
    let x = unvec(xi, n);
    let h = (&x + x.adjoint()) * c(0.5, 0.0);
    let sp = herm_eig(&h)?;
    let pos = sp.apply(|v| v.max(0.0));
    let distance = fro(&(&x - pos));
    let scale = fro(&x).max(1e-300);
    Ok(ConeTest { member: distance <= 1e-10 * scale.max(1.0), distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{faithful_density, gaussian_matrix, haar_unitary, rng};
    use crate::linalg::{inner, real_diag};

    fn sf_diag() -> StandardForm {
        make_standard_form(&real_diag(&[2.0 / 3.0, 1.0 / 3.0]), true).unwrap()
    }

    #[test]
    fn maximally_mixed_qubit() {
        let sf = make_standard_form(&real_diag(&[0.5, 0.5]), true).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = CVec::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]);
        assert!(vnorm(&(&sf.omega - expect)) < 1e-15);
        assert!(fro(&(&sf.delta - identity(4))) < 1e-15);
    }

    #[test]
    fn delta_spectrum_ratios() {
        let sf = sf_diag();
        let mut v = herm_eig(&sf.delta).unwrap().values;
        v.iter_mut().for_each(|x| *x = (*x * 1e12).round() / 1e12);
        assert_eq!(v, vec![0.5, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn rank_deficient_rejected() {
        let r = make_standard_form(&real_diag(&[1.0, 0.0]), true);
        assert!(matches!(r, Err(Error::NotFaithful(_))));
        assert!(make_standard_form(&real_diag(&[0.5, 0.6]), false).is_err());
    }

    #[test]
    fn invariants_of_the_form() {
        let rho = faithful_density(&mut rng(12), 3);
        let sf = make_standard_form(&rho, true).unwrap();
        assert!((vnorm(&sf.omega) - 1.0).abs() < 1e-12);
        assert!(vnorm(&(sf.j.apply(&sf.omega) - &sf.omega)) < 1e-12);
        assert!(vnorm(&(&sf.delta * &sf.omega - &sf.omega)) < 1e-12);
        let jdj = sf.conjugate_by_j(&sf.delta);
        let dinv = sf.delta_pow(-1.0);
        assert!(fro(&(jdj - &dinv)) < 1e-10 * fro(&dinv));
    }

    #[test]
    fn non_relative_case_matches_delta_and_j() {
        let rho = faithful_density(&mut rng(14), 2);
        let sf = make_standard_form(&rho, true).unwrap();
        let rm = relative_modular(&sf.omega, &sf.omega, Side::Algebra).unwrap();
        assert!(fro(&(&rm.delta - &sf.delta)) < 1e-10);
        assert!(fro(&(&rm.j_rel.linear - &sf.j.linear)) < 1e-10);
    }

    #[test]
    fn excited_state_matches_vectorization_oracle() {
        let mut r = rng(5);
        let rho = faithful_density(&mut r, 2);
        let sf = make_standard_form(&rho, true).unwrap();
        let a = AlgebraElement(gaussian_matrix(&mut r, 2));
        let phi = sf.excite_algebra(&a);
        let rm = relative_modular(&phi, &sf.omega, Side::Algebra).unwrap();
        // X ↦ ρ_φ X ρ_ω⁻¹ with ρ_φ = a ρ a†
        let rho_phi = &a.0 * &rho * a.0.adjoint();
        let inv = mat_pow(&rho, -1.0).unwrap();
        let oracle = kron(&rho_phi, &inv.transpose());
        assert!(fro(&(&rm.delta - oracle)) < 1e-8);
    }

    #[test]
    fn polar_identity_and_supports_for_rank_deficient_vectors() {
        let mut r = rng(15);
        // rank one Ψ, full rank Φ
        let u = gaussian_matrix(&mut r, 3);
        let v = crate::ensemble::gaussian_vector(&mut r, 3);
        let psi = vec_of(&(&v * v.adjoint() * &u));
        let phi = vec_of(&gaussian_matrix(&mut r, 3));
        for side in [Side::Algebra, Side::Commutant] {
            let rm = relative_modular(&phi, &psi, side).unwrap();
            // S̄ = J Δ^{1/2}
            let rebuilt = rm.j_rel.after_linear(&rm.power(0.5));
            assert!(fro(&(&rebuilt.linear - &rm.tomita.linear)) < 1e-8);
            let expect = &rm.support_left * &rm.support_right;
            assert!(fro(&(rm.support() - expect)) < 1e-8);
            let oracle = relative_modular_oracle(&phi, &psi, side).unwrap();
            assert!(fro(&(&rm.delta - oracle)) < 1e-8 * fro(&rm.delta).max(1.0));
        }
    }

    #[test]
    fn commutant_relation_on_cone_vectors() {
        let mut r = rng(16);
        let (_, phi) = cone_representative(&vec_of(&gaussian_matrix(&mut r, 3))).unwrap();
        let (_, psi) = cone_representative(&vec_of(&gaussian_matrix(&mut r, 3))).unwrap();
        let d = relative_modular(&phi, &psi, Side::Algebra).unwrap();
        let dp = relative_modular(&psi, &phi, Side::Commutant).unwrap();
        let prod = &dp.delta * &d.delta;
        let supp = support(&psi, Side::Commutant).unwrap() * support(&phi, Side::Algebra).unwrap();
        assert!(fro(&(prod - supp)) < 1e-8);
    }

    #[test]
    fn exchange_relations() {
        let mut r = rng(17);
        let (_, phi) = cone_representative(&vec_of(&gaussian_matrix(&mut r, 2))).unwrap();
        let psi = vec_of(&gaussian_matrix(&mut r, 2));
        let pq = relative_modular(&phi, &psi, Side::Algebra).unwrap();
        let qp = relative_modular(&psi, &phi, Side::Algebra).unwrap();
        // J_{Φ,Ψ}† = J_{Ψ,Φ}
        assert!(fro(&(pq.j_rel.adjoint().linear - &qp.j_rel.linear)) < 1e-8);
        // J_{Φ,Ψ} f(Δ_{Φ,Ψ}) J_{Ψ,Φ} = f(Δ_{Ψ,Φ}^{-1}) on the support, f = λ^{1/3}
        let f = pq.power(1.0 / 3.0);
        let lhs = pq.j_rel.after_linear(&f).compose(&qp.j_rel);
        let rhs = qp.power(-1.0 / 3.0);
        assert!(fro(&(lhs - rhs)) < 1e-8);
    }

    #[test]
    fn representative_change_recovers_delta() {
        let mut r = rng(13);
        let phi = vec_of(&gaussian_matrix(&mut r, 3));
        let psi = vec_of(&gaussian_matrix(&mut r, 3));
        let rc = representative_change(&phi, &psi).unwrap();
        assert!(vnorm(&(rc.u_prime.apply(&rc.phi_plus) - &phi)) < 1e-10);
        assert!(vnorm(&(rc.v_prime.apply(&rc.psi_plus) - &psi)) < 1e-10);
        let d = relative_modular(&phi, &psi, Side::Algebra).unwrap();
        let dp = relative_modular(&rc.phi_plus, &rc.psi_plus, Side::Algebra).unwrap();
        let v = rc.v_prime.on_space();
        let rebuilt = &v * &dp.delta * v.adjoint();
        assert!(fro(&(rebuilt - &d.delta)) < 1e-8 * fro(&d.delta));
    }

    #[test]
    fn representative_of_commutant_unitary_excitation_is_omega() {
        let mut r = rng(9);
        let sf = make_standard_form(&faithful_density(&mut r, 3), true).unwrap();
        let w = CommutantElement(haar_unitary(&mut r, 3));
        let (u, plus) = cone_representative(&sf.excite_commutant(&w)).unwrap();
        assert!(vnorm(&(&plus - &sf.omega)) < 1e-10);
        assert!(fro(&(u.0 - w.0)) < 1e-10);
        assert!(cone_membership(&plus).unwrap().member);
    }

    #[test]
    fn cone_vector_has_trivial_change() {
        let sf = sf_diag();
        let (u, plus) = cone_representative(&sf.omega).unwrap();
        assert!(vnorm(&(plus - &sf.omega)) < 1e-12);
        assert!(fro(&(u.0 - identity(2))) < 1e-12);
    }

    #[test]
    fn polar_vectors() {
        let mut r = rng(21);
        let psi = vec_of(&gaussian_matrix(&mut r, 2));
        let pv = polar_vector(&psi).unwrap();
        assert!(vnorm(&(pv.isometry.apply(&pv.cone_part) - &psi)) < 1e-10);
        let u = &pv.isometry.0;
        assert!(fro(&(u * u.adjoint() * u - u)) < 1e-10);
        assert!(cone_membership(&pv.cone_part).unwrap().member);

        let sf = make_standard_form(&faithful_density(&mut r, 2), true).unwrap();
        let v = AlgebraElement(haar_unitary(&mut r, 2));
        let pv = polar_vector(&sf.excite_algebra(&v)).unwrap();
        assert!(vnorm(&(pv.cone_part - &sf.omega)) < 1e-10);

        let pv = polar_vector(&sf.omega).unwrap();
        assert!(vnorm(&(pv.cone_part - &sf.omega)) < 1e-12);
    }

    #[test]
    fn cone_tests() {
        let sf = sf_diag();
        let t = cone_membership(&sf.omega).unwrap();
        assert!(t.member && t.distance < 1e-15);
        let t = cone_membership(&(-&sf.omega)).unwrap();
        assert!(!t.member && t.distance > 0.5);
        let mut r = rng(4);
        let b = CommutantElement(gaussian_matrix(&mut r, 2));
        let jbj = b.apply(&sf.j.apply(&b.apply(&sf.j.apply(&sf.omega))));
        assert!(cone_membership(&jbj).unwrap().member);
    }

    #[test]
    fn modular_flow_examples() {
        let sf = sf_diag();
        let mut e12 = CMat::zeros(2, 2);
        e12[(0, 1)] = c(1.0, 0.0);
        let a = AlgebraElement(e12);
        let f = sf.modular_flow(&a, c(0.0, 0.5));
        assert!((f.0[(0, 1)] - c(2f64.powf(-0.5), 0.0)).norm() < 1e-14);
        assert_eq!(sf.modular_flow(&a, ZERO), a);
        let d = AlgebraElement(real_diag(&[1.0, -3.0]));
        assert!(fro(&(sf.modular_flow(&d, c(0.7, -0.2)).0 - &d.0)) < 1e-14);
    }

    #[test]
    fn tomita_maps_a_omega_to_a_star_omega() {
        let mut r = rng(18);
        let sf = make_standard_form(&faithful_density(&mut r, 3), true).unwrap();
        let a = AlgebraElement(gaussian_matrix(&mut r, 3));
        let lhs = sf.tomita().apply(&sf.excite_algebra(&a));
        assert!(vnorm(&(lhs - sf.excite_algebra(&a.adjoint()))) < 1e-10);
    }

    #[test]
    fn densities_of_vector_states() {
        let mut r = rng(19);
        let x = gaussian_matrix(&mut r, 3);
        let v = vec_of(&x);
        let a = gaussian_matrix(&mut r, 3);
        let m = gaussian_matrix(&mut r, 3);
        let ea = AlgebraElement(a.clone()).apply(&v);
        let em = CommutantElement(m.clone()).apply(&v);
        let ra = algebra_density(&v).unwrap();
        let rc = commutant_density(&v).unwrap();
        assert!((inner(&v, &ea) - (&ra * &a).trace()).norm() < 1e-10);
        assert!((inner(&v, &em) - (&rc * &m).trace()).norm() < 1e-10);
    }
}
