use modbound::bounds::{random_algebra_instance, random_instance, swapping_partner, thm1_bound, CHAIN_TOL};
use modbound::divergences::{
    araki_masuda, petz_renyi, quasi_entropy, Excitation, LpMode, QuasiEntropySpec, VariationalOptions,
};
use modbound::ensemble::{faithful_density, gaussian_matrix, gaussian_vector, random_hermitian, rng};
use modbound::ext::Ext;
use modbound::linalg::{c, fro, inner, kron, mat_pow, op_norm, vec_of, vnorm, AntilinearMap};
use modbound::quadrature::gauss_hermite;
use modbound::report::{Case, VerificationReport};
use modbound::standard_form::{algebra_density, commutant_density, cone_representative, make_standard_form, AlgebraElement};
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn matrix_powers_add(seed in any::<u64>(), n in 2usize..5, a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let rho = faithful_density(&mut rng(seed), n);
        let lhs = mat_pow(&rho, a).unwrap() * mat_pow(&rho, b).unwrap();
        let rhs = mat_pow(&rho, a + b).unwrap();
        prop_assert!(fro(&(&lhs - &rhs)) <= 1e-8 * fro(&rhs).max(1.0));
    }

    #[test]
    fn op_norm_is_multiplicative_on_kron(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let a = gaussian_matrix(&mut r, n);
        let b = gaussian_matrix(&mut r, m);
        let k = op_norm(&kron(&a, &b));
        prop_assert!((k - op_norm(&a) * op_norm(&b)).abs() <= 1e-10 * k.max(1.0));
    }

    #[test]
    fn inner_product_is_hermitian(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let u = gaussian_vector(&mut r, n);
        let v = gaussian_vector(&mut r, n);
        prop_assert!((inner(&u, &v) - inner(&v, &u).conj()).norm() <= 1e-12 * (vnorm(&u) * vnorm(&v)).max(1.0));
    }

    #[test]
    fn antilinear_composition_is_linear(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let j = AntilinearMap::new(gaussian_matrix(&mut r, n));
        let k = AntilinearMap::new(gaussian_matrix(&mut r, n));
        let v = gaussian_vector(&mut r, n);
        let w = gaussian_vector(&mut r, n);
        let z = c(0.3, -1.7);
        let comp = j.compose(&k);
        prop_assert!(vnorm(&(&comp * &v - j.apply(&k.apply(&v)))) <= 1e-10 * vnorm(&v).max(1.0) * fro(&comp).max(1.0));
        // antilinearity of a single map
        let lhs = j.apply(&(&v * z + &w));
        let rhs = j.apply(&v) * z.conj() + j.apply(&w);
        prop_assert!(vnorm(&(lhs - rhs)) <= 1e-10 * fro(&j.linear).max(1.0) * (vnorm(&v) + vnorm(&w)));
        // (ξ, Sη) = conj((S*ξ, η))
        let s = j.adjoint();
        prop_assert!((inner(&v, &j.apply(&w)) - inner(&s.apply(&v), &w).conj()).norm() <= 1e-10 * fro(&j.linear).max(1.0) * vnorm(&v) * vnorm(&w));
    }

    #[test]
    fn gauss_hermite_is_exact_on_polynomials(nodes in 2usize..40, k in 0usize..6) {
        let rule = gauss_hermite(nodes);
        let deg = 2 * k;
        prop_assume!(deg < 2 * nodes);
        let sum: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
        // ∫x^{2k}e^{−x²} = Γ(k + 1/2)
        let mut exact = std::f64::consts::PI.sqrt();
        for j in 0..k {
            exact *= j as f64 + 0.5;
        }
        prop_assert!((sum - exact).abs() <= 1e-10 * exact);
    }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn bound_chain_is_ordered(seed in any::<u64>(), n in 2usize..5) {
        let (sf, m) = random_instance(&mut rng(seed), n).unwrap();
        let ch = thm1_bound(&sf, &m).unwrap();
        prop_assert!(ch.holds(CHAIN_TOL), "{:?}", ch);
    }

    #[test]
    fn swapping_partner_reproduces_the_excitation(seed in any::<u64>(), n in 2usize..5) {
        let (sf, a) = random_algebra_instance(&mut rng(seed), n).unwrap();
        let sp = swapping_partner(&sf, &a).unwrap();
        prop_assert!(vnorm(&(sf.excite_commutant(&sp.element) - sf.excite_algebra(&a))) <= 1e-10);
        prop_assert!(sp.residual <= 1e-10);
    }

    #[test]
    fn self_adjoint_partner_preserves_the_pairing(seed in any::<u64>(), n in 2usize..5) {
        // (b′*Ω, b′Ω) = ‖aΩ‖² when a = a*
        let mut r = rng(seed);
        let sf = make_standard_form(&faithful_density(&mut r, n), true).unwrap();
        let a = AlgebraElement(random_hermitian(&mut r, n));
        let b = swapping_partner(&sf, &a).unwrap().element;
        let lhs = inner(&sf.excite_commutant(&b.adjoint()), &sf.excite_commutant(&b));
        let rhs = vnorm(&sf.excite_algebra(&a)).powi(2);
        prop_assert!((lhs - c(rhs, 0.0)).norm() <= 1e-10 * rhs.max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn reduced_densities_of_unit_excitations(seed in any::<u64>(), n in 2usize..5) {
        let (sf, m) = random_instance(&mut rng(seed), n).unwrap();
        let psi = sf.excite_commutant(&m);
        let rho = algebra_density(&psi).unwrap();
        let sigma = commutant_density(&psi).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-10);
        prop_assert!((sigma.trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn sandwich_holds(seed in any::<u64>(), n in 2usize..4, k in 0usize..4) {
        let alpha = [1.25, 1.5, 2.0, 3.0][k];
        let (sf, m) = random_instance(&mut rng(seed), n).unwrap();
        let psi = sf.excite_commutant(&m);
        let mode = LpMode::Variational(VariationalOptions { seed, ..Default::default() });
        let d = araki_masuda(&sf, &Excitation::Commutant(m), alpha, &mode).unwrap().finite().unwrap();
        let lo = petz_renyi(&sf, &psi, 2.0 - 1.0 / alpha).unwrap().finite().unwrap();
        let hi = petz_renyi(&sf, &psi, alpha).unwrap().finite().unwrap();
        prop_assert!(lo <= d + 1e-7 && d <= hi + 1e-7, "{} {} {}", lo, d, hi);
    }

    #[test]
    fn quasi_entropy_duality(seed in any::<u64>(), n in 2usize..4, a in -0.9f64..1.0) {
        let mut r = rng(seed);
        let (_, phi) = cone_representative(&vec_of(&gaussian_matrix(&mut r, n))).unwrap();
        let (_, psi) = cone_representative(&vec_of(&gaussian_matrix(&mut r, n))).unwrap();
        let spec = QuasiEntropySpec::Fa(a);
        let lhs = quasi_entropy(&phi, &psi, &spec).unwrap().finite().unwrap();
        let rhs = quasi_entropy(&psi, &phi, &spec.dual()).unwrap().finite().unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0));
    }

    #[test]
    fn standard_form_of_random_density(seed in any::<u64>(), n in 2usize..5) {
        let rho = faithful_density(&mut rng(seed), n);
        let sf = make_standard_form(&rho, true).unwrap();
        prop_assert!((vnorm(&sf.omega) - 1.0).abs() <= 1e-12);
        prop_assert!(fro(&(algebra_density(&sf.omega).unwrap() - &rho)) <= 1e-12);
    }
}

fn arb_f64() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(f64::INFINITY),
        Just(f64::NEG_INFINITY),
    ]
}

proptest! {
    #[test]
    fn report_json_round_trips(vals in prop::collection::vec((arb_f64(), arb_f64(), 0.0f64..1.0), 0..8), seed in any::<u64>()) {
        let mut rep = VerificationReport::new("prop", seed);
        for (i, (l, r, t)) in vals.iter().enumerate() {
            let cs = if i % 2 == 0 {
                Case::identity(format!("c{i}"), *l, *r, *t)
            } else {
                let ext = |x: f64| if x == f64::INFINITY { Ext::Infinite } else { Ext::Finite(x) };
                Case::le(format!("c{i}"), ext(*l), ext(*r), *t)
            };
            rep.push(cs.param("i", i));
        }
        let back = VerificationReport::from_json(&rep.to_json()).unwrap();
        prop_assert_eq!(back.cases.len(), rep.cases.len());
        for (a, b) in back.cases.iter().zip(&rep.cases) {
            prop_assert_eq!(a.lhs.to_bits(), b.lhs.to_bits());
            prop_assert_eq!(a.rhs.to_bits(), b.rhs.to_bits());
            prop_assert_eq!(a.slack.to_bits(), b.slack.to_bits());
            prop_assert_eq!(a.pass, b.pass);
        }
    }

    #[test]
    fn pass_rules_follow_slack(l in -10.0f64..10.0, r in -10.0f64..10.0, t in 0.0f64..1.0) {
        let id = Case::identity("i", l, r, t);
        prop_assert_eq!(id.pass, (l - r).abs() <= t);
        let le = Case::le("l", Ext::Finite(l), Ext::Finite(r), t);
        prop_assert_eq!(le.pass, r - l >= -t);
    }
}
