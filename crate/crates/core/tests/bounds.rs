use modbound::bounds::*;
use modbound::ensemble::{faithful_density, gaussian_matrix, haar_unitary, rng};
use modbound::linalg::{c, fro, identity, kron, real_diag, vnorm, CMat};
use modbound::standard_form::{make_standard_form, AlgebraElement, CommutantElement, StandardForm};
use modbound::Error;

fn e12() -> AlgebraElement {
    let mut m = CMat::zeros(2, 2);
    m[(0, 1)] = c(1.0, 0.0);
    AlgebraElement(m)
}

fn qubit_form() -> StandardForm {
    make_standard_form(&real_diag(&[2.0 / 3.0, 1.0 / 3.0]), true).unwrap()
}

#[test]
fn unitary_and_identity_chains_vanish() {
    let mut r = rng(5);
    let sf = make_standard_form(&faithful_density(&mut r, 3), true).unwrap();
    for m in [identity(3), haar_unitary(&mut r, 3)] {
        let ch = thm1_bound(&sf, &CommutantElement(m)).unwrap();
        assert!(ch.max_abs_member() < 1e-10, "{ch:?}");
    }
}

#[test]
fn chain_ordering_seed_31() {
    let mut r = rng(31);
    let (sf, b) = random_instance(&mut r, 3).unwrap();
    let ch = thm1_bound(&sf, &b).unwrap();
    assert!(ch.holds(1e-8), "{ch:?}");
    // mid member evaluated directly from ‖Δ^{-1/4} b′†b′Ω‖
    let bb = CommutantElement(b.0.adjoint() * &b.0);
    let direct = 2.0 * vnorm(&(sf.delta_pow(-0.25) * sf.excite_commutant(&bb))).ln();
    assert!((direct - ch.mid_l4).abs() < 1e-12);
}

#[test]
fn chain_requires_normalization() {
    let sf = qubit_form();
    let b = CommutantElement(identity(2) * c(2.0, 0.0));
    assert!(matches!(thm1_bound(&sf, &b), Err(Error::NotNormalized(_))));
    let (bn, scale) = normalize_commutant(&sf, &b).unwrap();
    assert!((scale - 2.0).abs() < 1e-12);
    assert!(thm1_bound(&sf, &bn).unwrap().max_abs_member() < 1e-12);
}

#[test]
fn swapping_partner_matrix_unit() {
    let sf = qubit_form();
    let a = e12();
    let sp = swapping_partner(&sf, &a).unwrap();
    assert!(sp.residual < 1e-12);
    let diff = vnorm(&(sf.excite_commutant(&sp.element) - sf.excite_algebra(&a)));
    assert!(diff < 1e-12, "{diff}");
    assert!(commutation_defect(2, &sp.raw) < 1e-12);
    // σ_{i/2}(e₁₂) = (p₁/p₂)^{-1/2} e₁₂, so b′ acts as X ↦ X·(scale e₁₂)
    let scale = (1.0f64 / 2.0).sqrt();
    let mut expect = CMat::zeros(2, 2);
    expect[(1, 0)] = c(scale, 0.0);
    assert!(fro(&(&sp.element.0 - expect)) < 1e-12, "{}", sp.element.0);
}

#[test]
fn swapping_partner_identity_and_commuting() {
    let mut r = rng(9);
    let sf = make_standard_form(&faithful_density(&mut r, 3), true).unwrap();
    let sp = swapping_partner(&sf, &AlgebraElement(identity(3))).unwrap();
    assert!(fro(&(sp.element.0 - identity(3))) < 1e-10);
    // a = polynomial in ρ commutes with ρ
    let a = AlgebraElement(&sf.rho * &sf.rho * c(0.3, 1.2) + identity(3));
    let sp = swapping_partner(&sf, &a).unwrap();
    let jaj = sf.conjugate_by_j(&a.adjoint().on_space());
    assert!(fro(&(sp.raw - &jaj)) < 1e-10);
    assert!(fro(&(kron(&identity(3), &sp.element.0) - jaj)) < 1e-10);
}

#[test]
fn swapping_partner_random_instances() {
    for seed in 0..10 {
        let mut r = rng(100 + seed);
        let n = 2 + (seed as usize % 3);
        let (sf, a) = random_algebra_instance(&mut r, n).unwrap();
        let sp = swapping_partner(&sf, &a).unwrap();
        let d = vnorm(&(sf.excite_commutant(&sp.element) - sf.excite_algebra(&a)));
        assert!(d < 1e-10 && sp.residual < 1e-10 && commutation_defect(n, &sp.raw) < 1e-10);
        // the two middle members coincide
        let cor = cor2_bound(&sf, &a).unwrap();
        let ch = thm1_bound(&sf, &sp.element).unwrap();
        assert!((cor.middle - ch.mid_l4).abs() < 1e-8, "{} {}", cor.middle, ch.mid_l4);
        assert!((cor.middle - cor.middle_alt).abs() < 1e-10);
        let s = cor.s_rel.value.unwrap();
        assert!(s <= cor.middle + 1e-8 && cor.middle <= cor.right + 1e-8);
    }
}

#[test]
fn cor2_seed_37_and_trivial_cases() {
    let mut r = rng(37);
    let (sf, a) = random_algebra_instance(&mut r, 2).unwrap();
    let cor = cor2_bound(&sf, &a).unwrap();
    assert!((cor.middle - cor.middle_alt).abs() < 1e-10);

    let one = cor2_bound(&sf, &AlgebraElement(identity(2))).unwrap();
    assert!(one.middle.abs() < 1e-12 && one.right.abs() < 1e-12);

    // diagonal unitary commuting with diagonal ρ
    let sf = qubit_form();
    let u = AlgebraElement(real_diag(&[1.0, -1.0]) * c(0.0, 1.0));
    let cor = cor2_bound(&sf, &u).unwrap();
    assert!(cor.middle.abs() < 1e-12);
}

#[test]
fn smear_damping_factor() {
    let sf = qubit_form();
    let a = e12();
    let cf = smear(&sf, &a, 1.0, SmearMethod::ClosedForm).unwrap();
    let expect = (-(2f64.ln()).powi(2) / 4.0).exp();
    assert!((expect - 0.886820).abs() < 1e-6);
    assert!((cf.smeared.0[(0, 1)].re - expect).abs() < 1e-12);
    assert!(cf.smeared.0[(1, 0)].norm() < 1e-15);
    let q = smear(&sf, &a, 1.0, SmearMethod::Quadrature).unwrap();
    assert!(fro(&(q.smeared.0 - cf.smeared.0)) < 1e-10);
}

#[test]
fn smear_limits_and_random_agreement() {
    let mut r = rng(12);
    let sf = make_standard_form(&faithful_density(&mut r, 3), true).unwrap();
    let comm = AlgebraElement(&sf.rho * c(2.0, -1.0));
    for n in [0.5, 3.0, 50.0] {
        let s = smear(&sf, &comm, n, SmearMethod::ClosedForm).unwrap();
        assert!(fro(&(s.smeared.0 - &comm.0)) < 1e-12);
    }
    let a = AlgebraElement(gaussian_matrix(&mut r, 3));
    let big = smear(&sf, &a, 1e8, SmearMethod::ClosedForm).unwrap();
    assert!(fro(&(big.smeared.0 - &a.0)) < 1e-6);
    let mut last = f64::INFINITY;
    for n in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let cf = smear(&sf, &a, n, SmearMethod::ClosedForm).unwrap();
        let q = smear(&sf, &a, n, SmearMethod::Quadrature).unwrap();
        assert!(fro(&(q.smeared.0 - &cf.smeared.0)) < 1e-8);
        assert!(cf.distance < last);
        last = cf.distance;
    }
    assert!(matches!(smear(&sf, &a, 0.0, SmearMethod::ClosedForm), Err(Error::DegenerateInput(_))));
}

#[test]
fn cor3_distances_decrease() {
    let sf = qubit_form();
    let (a, _) = normalize_algebra(&sf, &e12()).unwrap();
    let res = cor3_bound(&sf, &a, &[1.0, 4.0, 16.0, 64.0]).unwrap();
    for w in res.rows.windows(2) {
        assert!(w[1].distance < w[0].distance);
        assert!(w[1].running_min <= w[0].running_min);
    }
    let target = cor2_bound(&sf, &a).unwrap().middle;
    let dense = cor3_bound(&sf, &a, &[1e6]).unwrap();
    assert!((dense.rows[0].bound - target).abs() < 1e-4);
}

#[test]
fn cor3_unitary_partner_gives_zero() {
    let sf = make_standard_form(&real_diag(&[0.5, 0.5]), true).unwrap();
    let u = AlgebraElement(real_diag(&[1.0, -1.0]));
    let res = cor3_bound(&sf, &u, &[1.0, 4.0, 16.0]).unwrap();
    assert!(res.rows.iter().all(|r| r.bound.abs() < 1e-12));
    assert!(!res.non_monotone);
}

#[test]
fn controlled_constant_cases() {
    let mut r = rng(41);
    let sf = make_standard_form(&faithful_density(&mut r, 2), true).unwrap();
    let (cst, worst) = controlled_constant(&sf, &CommutantElement(identity(2)), 50, 1).unwrap();
    assert!((cst - 1.0).abs() < 1e-12 && worst <= 1.0 + 1e-10);
    let u = haar_unitary(&mut r, 2);
    let (cst, _) = controlled_constant(&sf, &CommutantElement(u), 10, 2).unwrap();
    assert!((cst - 1.0).abs() < 1e-10);
    let b = CommutantElement(gaussian_matrix(&mut r, 2));
    let (cst, worst) = controlled_constant(&sf, &b, 500, 41).unwrap();
    assert!(worst <= cst + 1e-10, "{worst} {cst}");
}

#[test]
fn qubit_demo_passes() {
    let rep = qubit_demo().unwrap();
    assert_eq!(rep.cases.len(), 3);
    assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
}

#[test]
fn rescaling_identity_holds() {
    for seed in 0..5 {
        let mut r = rng(900 + seed);
        let sf = make_standard_form(&faithful_density(&mut r, 3), true).unwrap();
        let v = sf.excite_commutant(&CommutantElement(gaussian_matrix(&mut r, 3)));
        let (lhs, rhs) = rescaling_identity(&sf, &v).unwrap();
        assert!((lhs - rhs).abs() < 1e-8, "{lhs} {rhs}");
    }
}
