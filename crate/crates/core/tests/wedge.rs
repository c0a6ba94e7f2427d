use modbound::lightray::{QuadratureBudget, RayTestFunction};
use modbound::wedge::*;
use modbound::Error;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn calibration_finds_light_cone_factorization() {
    let conv = calibrated_convention().unwrap();
    assert_eq!(conv.scale, 0.5);
    assert!(!conv.swap_roles && conv.sign_plus == 1.0 && conv.sign_minus == 1.0, "{conv:?}");
    assert!(conv.deviation < 1e-9);
}

#[test]
fn shell_fourier_matches_2d_oracle() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    for p in [-2.0, 0.0, 1.0, 3.0] {
        let a = shell_fourier(&wf, p).unwrap();
        let b = shell_fourier_2d(&wf, p).unwrap();
        assert!((a - b).norm() < 1e-6, "{p}: {a} {b}");
    }
    // p¹ = 0, m = 1: ½(1 − i(−½))^{−2}(1 − i/2)^{−2} = ½·(16/25)
    let v = shell_fourier(&wf, 0.0).unwrap();
    assert!((v - c(0.32, 0.0)).norm() < 1e-14);
}

#[test]
fn symmetric_factors_reflect_to_conjugate() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    for p in [0.3, 1.0, 2.5] {
        let a = shell_fourier(&wf, p).unwrap();
        let b = shell_fourier(&wf, -p).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }
}

#[test]
fn large_mass_decays() {
    let wf = WedgeFunction::standard(50.0).unwrap();
    let mut last = f64::INFINITY;
    for p in [0.0, 5.0, 20.0, 80.0] {
        let v = shell_fourier(&wf, p).unwrap().norm();
        assert!(v < last);
        last = v;
    }
}

#[test]
fn boosts_preserve_the_wedge() {
    let pts = [[0.0, 1.0], [0.5, 0.7], [-0.9, 1.0], [0.2, 3.0]];
    for t in [-1.0, -0.3, 0.3, 1.0] {
        for x in pts {
            let y = boost(c(t, 0.0), x);
            assert!(in_right_wedge([y[0].re, y[1].re]));
            let plus = (y[1] + y[0]).re;
            let minus = (y[1] - y[0]).re;
            assert!((plus - (2.0 * std::f64::consts::PI * t).exp() * (x[1] + x[0])).abs() < 1e-12 * plus.abs().max(1.0));
            assert!((minus - (-2.0 * std::f64::consts::PI * t).exp() * (x[1] - x[0])).abs() < 1e-12 * minus.abs().max(1.0));
        }
    }
}

#[test]
fn im_h_sign_property() {
    let pts = [[0.0, 1.0], [0.5, 0.7], [-0.9, 1.0], [0.2, 3.0]];
    for x in pts {
        for re in [-1.0, 0.0, 1.0] {
            for im in [-0.4, 0.2] {
                for p in [-2.0, 0.0, 1.5] {
                    let h = h_function(x, c(re, im), p, 1.0);
                    assert_eq!(h.im.signum(), im.signum(), "x={x:?} z={re}+{im}i p={p}");
                }
            }
        }
    }
}

#[test]
fn mass_shell_agreement() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    let mut b = QuadratureBudget::default();
    for n in [1.0, 4.0, 16.0] {
        for p in [-2.0, 0.0, 1.0, 3.0] {
            let d = wedge_smeared_shell_fourier(&wf, n, p, WedgeSide::Direct, &mut b).unwrap();
            let s = wedge_smeared_shell_fourier(&wf, n, p, WedgeSide::Swapped, &mut b).unwrap();
            assert!((d - s).norm() <= 1e-6, "n={n} p={p}: {d} {s}");
        }
    }
}

#[test]
fn smeared_reference_values() {
    // 30-digit quadrature of the boost-smeared factorized integrand
    let wf = WedgeFunction::standard(1.0).unwrap();
    let mut b = QuadratureBudget::default();
    let v = wedge_smeared_shell_fourier(&wf, 4.0, 1.0, WedgeSide::Direct, &mut b).unwrap();
    assert!((v - c(0.049036889721998246, 0.011046828870970667)).norm() < 1e-10, "{v}");
    let v = wedge_smeared_shell_fourier(&wf, 4.0, 0.0, WedgeSide::Direct, &mut b).unwrap();
    assert!((v - c(0.053498648305137265, 0.0)).norm() < 1e-10, "{v}");
}

#[test]
fn opposite_centre_disagrees() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    let mut b = QuadratureBudget::default();
    let d = wedge_smeared_shell_fourier(&wf, 4.0, 1.0, WedgeSide::Direct, &mut b).unwrap();
    let centre = calibrated_convention().unwrap().swap_center(1.0, 1.0).unwrap();
    assert_eq!(centre, c(0.0, -0.5));
    let wrong = swapped_with_center(&wf, 4.0, 1.0, -centre, &mut b).unwrap();
    assert!((d - wrong).norm() > 1e-2);
}

#[test]
fn delta_limit() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    let mut b = QuadratureBudget::default();
    // at n = 1e6 the leading correction h''(0)/(4n) is still −1.2128e−5 for p¹ = 0
    let d = wedge_smeared_shell_fourier(&wf, 1e6, 0.0, WedgeSide::Direct, &mut b).unwrap();
    let f = shell_fourier(&wf, 0.0).unwrap();
    assert!((d - f - c(-1.21277698880586e-5, 0.0)).norm() < 1e-8, "{d} {f}");
    for p in [-2.0, 0.0, 1.0] {
        let d = wedge_smeared_shell_fourier(&wf, 1e7, p, WedgeSide::Direct, &mut b).unwrap();
        let f = shell_fourier(&wf, p).unwrap();
        assert!((d - f).norm() < 1e-5, "{p}: {d} {f}");
    }
}

#[test]
fn swapped_guard() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    let r = wedge_smeared_shell_fourier(&wf, 400.0, 1.0, WedgeSide::Swapped, &mut QuadratureBudget::default());
    assert!(matches!(r, Err(Error::CancellationGuard(_))));
}

#[test]
fn weyl_exponent_vanishes_and_scales() {
    let wf = WedgeFunction::standard(1.0).unwrap();
    let mut b = QuadratureBudget::default();
    let norm = smeared_norm_sq(&wf, 4.0, &mut b).unwrap();
    assert!((norm - 0.0010087966826753726).abs() < 1e-12, "{norm}");
    let e = weyl_rescaling_exponent(&wf, 4.0, &mut b).unwrap();
    assert!(e.abs() < 1e-10 * norm.max(1.0), "{e}");
    // scaling both factors by 2 multiplies a quadratic form by 16
    let g2 = RayTestFunction::custom("twice", 1.0, std::sync::Arc::new(|p: f64| 2.0 * c(1.0, -p).powi(-2))).unwrap();
    let wf2 = WedgeFunction::new(g2.clone(), g2, 1.0).unwrap();
    let norm2 = smeared_norm_sq(&wf2, 4.0, &mut b).unwrap();
    assert!((norm2 - 16.0 * norm).abs() < 1e-11);
    let e2 = weyl_rescaling_exponent(&wf2, 4.0, &mut b).unwrap();
    assert!(e2.abs() < 1e-9);
}
