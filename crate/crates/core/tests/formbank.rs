use std::f64::consts::PI;

use geomod_core::formbank::{
    builtin_letters, builtin_letters_truncated, eisenstein_gamma0_11_coefficients, eta_product_coefficients,
    modular_lambda, theta2_fourth_coefficients, theta4_fourth_coefficients, FormLetter, LetterKind, ModularLambda,
    OneForm, Potential,
};
use geomod_core::modgroup::{GroupPreset, PresetName};
use geomod_core::Error;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Naive expansion of q ∏_{m<n}(1−qᵐ)²(1−q^{11m})² one factor at a time.
fn eta_oracle(n: usize) -> Vec<f64> {
    let mut s = vec![0.0; n];
    s[0] = 1.0;
    let mut times = |m: usize| {
        for i in (m..n).rev() {
            s[i] -= s[i - m];
        }
    };
    for m in 1..n {
        times(m);
        times(m);
        if 11 * m < n {
            times(11 * m);
            times(11 * m);
        }
    }
    let mut out = vec![0.0; n];
    out[1..].copy_from_slice(&s[..n - 1]);
    out
}

fn sigma(n: u64) -> f64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d as f64).sum()
}

#[test]
fn eta_product_matches_naive_expansion() {
    let a = eta_product_coefficients(200);
    assert_eq!(a, eta_oracle(200));
    assert_eq!(&a[1..6], &[1.0, -2.0, -1.0, 2.0, 1.0]);
    // a_p for small primes of the conductor-11 curve
    assert_eq!(a[7], -2.0);
    assert_eq!(a[11], 1.0);
    assert_eq!(a[13], 4.0);
}

#[test]
fn eta_coefficients_are_multiplicative() {
    let a = eta_product_coefficients(200);
    for (m, n) in [(2usize, 3usize), (3, 5), (4, 7), (5, 9), (2, 13)] {
        assert_eq!(a[m * n], a[m] * a[n], "a({m}·{n})");
    }
}

#[test]
fn theta_fourth_powers_match_divisor_formulas() {
    let t4 = theta4_fourth_coefficients(300);
    let t2 = theta2_fourth_coefficients(300);
    assert_eq!(t4[0], 1.0);
    for n in 1..300u64 {
        let s: f64 = (1..=n).filter(|d| n % d == 0 && d % 4 != 0).map(|d| d as f64).sum();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(t4[n as usize], sign * 8.0 * s, "theta4^4 at {n}");
        let expect = if n % 2 == 1 { 16.0 * sigma(n) } else { 0.0 };
        assert_eq!(t2[n as usize], expect, "theta2^4 at {n}");
    }
}

#[test]
fn eisenstein_constant_term_and_level_structure() {
    let e = eisenstein_gamma0_11_coefficients(50);
    assert_eq!(e[0], 1.0);
    assert!((e[1] - 2.4).abs() < 1e-12);
    assert!((e[11] - 2.4 * (12.0 - 11.0)).abs() < 1e-12);
}

#[test]
fn builtin_catalog_shape() {
    let g = GroupPreset::gamma0_11();
    let letters = builtin_letters(&g);
    let labels: Vec<_> = letters.iter().map(|l| l.label.as_str()).collect();
    assert_eq!(labels, ["f", "fbar", "E"]);
    assert_eq!(letters[0].kind, LetterKind::HolomorphicCusp);
    assert_eq!(letters[1].kind, LetterKind::AntiholomorphicCusp);
    assert_eq!(letters[2].kind, LetterKind::Eisenstein);
    for (a, b) in letters[0].coefficients().iter().zip(letters[1].coefficients()) {
        assert_eq!(*b, a.conj());
    }
    assert_eq!((letters[0].hodge_p(), letters[0].log_weight_l()), (1, 0));
    assert_eq!((letters[1].hodge_p(), letters[1].log_weight_l()), (0, 0));
    assert_eq!((letters[2].hodge_p(), letters[2].log_weight_l()), (1, 1));
    assert_eq!(letters[0].coefficients().len(), 512);

    let g2 = GroupPreset::gamma2();
    let w = builtin_letters(&g2);
    assert_eq!(w.len(), 2);
    assert!(w.iter().all(|l| l.kind == LetterKind::Eisenstein && l.step == 0.5));
    assert_eq!(w[0].width(), 2.0);
}

/// Direct evaluation of q ∏(1−qⁿ)²(1−q^{11n})² as a truncated infinite product.
fn eta_direct(z: Complex64) -> Complex64 {
    let q = (c(0.0, 2.0 * PI) * z).exp();
    let mut p = q;
    let mut qn = c(1.0, 0.0);
    for n in 1..4000 {
        qn *= q;
        let q11 = qn.powi(11);
        p *= (c(1.0, 0.0) - qn).powi(2) * (c(1.0, 0.0) - q11).powi(2);
        if qn.norm() < 1e-20 {
            break;
        }
        let _ = n;
    }
    p
}

#[test]
fn cusp_form_matches_direct_product() {
    let f = &builtin_letters(&GroupPreset::gamma0_11())[0];
    for z in [c(0.1, 0.3), c(-0.37, 0.05), c(0.45, 1.2)] {
        let v = f.evaluate(z, 1e-13).unwrap();
        assert!((v - eta_direct(z)).norm() < 1e-10, "{z}: {v} vs {}", eta_direct(z));
    }
}

#[test]
fn antiholomorphic_letter_is_conjugate() {
    let l = builtin_letters(&GroupPreset::gamma0_11());
    let z = c(0.2, 0.4);
    let f = l[0].evaluate(z, 1e-12).unwrap();
    let fb = l[1].evaluate(z, 1e-12).unwrap();
    assert!((fb - f.conj()).norm() < 1e-14);
    let (a, b) = l[1].components(z, 1e-12).unwrap();
    assert_eq!(a, c(0.0, 0.0));
    assert!((b - (c(0.0, 2.0 * PI) * f).conj()).norm() < 1e-12);
    let dz = c(0.3, -0.7);
    let pb = l[1].pullback(z, dz, 1e-12).unwrap();
    assert!((pb - (c(0.0, 2.0 * PI) * f * dz).conj()).norm() < 1e-12);
}

#[test]
fn cusp_forms_decay() {
    let f = &builtin_letters(&GroupPreset::gamma0_11())[0];
    assert!(f.evaluate(c(0.3, 6.0), 1e-14).unwrap().norm() < 1e-8);
    // at the cusp 0: f|S is (−1/(11 z²)) times an Atkin–Lehner image, still a cusp form
    for y in [2.0, 4.0] {
        let z = c(0.1, y);
        let w = -1.0 / z;
        let v = f.evaluate(w, 1e-12).unwrap() / (z * z);
        assert!(v.norm() < 10.0 * (-2.0 * PI * y / 11.0).exp(), "y={y}: {v}");
    }
    let e = &builtin_letters(&GroupPreset::gamma0_11())[2];
    assert!((e.evaluate(c(0.3, 6.0), 1e-14).unwrap() - 1.0).norm() < 1e-12);
}

#[test]
fn periodicity() {
    for preset in [GroupPreset::gamma0_11(), GroupPreset::gamma2()] {
        for l in builtin_letters(&preset) {
            let z = c(0.123, 0.21);
            let a = l.evaluate(z, 1e-12).unwrap();
            let b = l.evaluate(z + l.width(), 1e-12).unwrap();
            assert!((a - b).norm() < 1e-10, "{}", l.label);
        }
    }
}

#[test]
fn weight_two_modularity() {
    for preset in [GroupPreset::gamma0_11(), GroupPreset::gamma2()] {
        let letters = builtin_letters(&preset);
        let gens: Vec<_> = preset.generators().iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        for (i, l) in letters.iter().enumerate() {
            for k in 0..20 {
                let z = c(-0.5 + 0.05 * k as f64, 0.6 + 0.03 * k as f64);
                for g in &gens {
                    let gz = g.apply(z).unwrap();
                    if gz.im < 0.05 {
                        continue;
                    }
                    let j = g.automorphy(z);
                    let jj = if l.kind == LetterKind::AntiholomorphicCusp { j.conj() } else { j };
                    let lhs = l.evaluate(gz, 1e-12).unwrap() / (jj * jj);
                    let rhs = l.evaluate(z, 1e-12).unwrap();
                    assert!((lhs - rhs).norm() < 1e-9, "letter {i} gen {g} z {z}: {lhs} vs {rhs}");
                }
            }
        }
    }
}

#[test]
fn insufficient_precision_is_reported() {
    let short = builtin_letters_truncated(PresetName::Gamma0_11, 20);
    let err = short[0].evaluate(c(0.0, 0.05), 1e-12).unwrap_err();
    match err {
        Error::InsufficientPrecision { required, available } => {
            assert!(required > 20);
            assert_eq!(available, 20);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        short[0].evaluate(c(0.0, 0.01), 1e-6),
        Err(Error::NotInUpperHalfPlane { .. })
    ));
}

#[test]
fn json_round_trip() {
    let l = builtin_letters(&GroupPreset::gamma2());
    let s = l[1].to_json();
    let back = FormLetter::from_json(&s).unwrap();
    assert_eq!(back, l[1]);
    assert!(FormLetter::from_json("{\"label\":1}").is_err());
}

#[test]
fn lambda_letters_are_logarithmic_derivatives() {
    let letters = builtin_letters(&GroupPreset::gamma2());
    let pot = ModularLambda;
    for z in [c(0.1, 0.9), c(-0.4, 0.35), c(0.8, 1.7)] {
        let lam = modular_lambda(z).unwrap();
        let h = 1e-5;
        let fd = (modular_lambda(z + h).unwrap() - modular_lambda(z - h).unwrap()) / (2.0 * h);
        let d = pot.derivative(z).unwrap();
        assert!((fd - d).norm() < 1e-6 * d.norm().max(1.0));
        let (a0, _) = letters[0].components(z, 1e-13).unwrap();
        let (a1, _) = letters[1].components(z, 1e-13).unwrap();
        assert!((a0 - d / lam).norm() < 1e-9, "w0 at {z}");
        assert!((a1 - d / (lam - 1.0)).norm() < 1e-9, "w1 at {z}");
    }
    // λ(i) = 1/2
    assert!((modular_lambda(c(0.0, 1.0)).unwrap() - 0.5).norm() < 1e-14);
}

#[test]
fn single_letter_integral_matches_riemann_sum() {
    // ∫ over a straight segment of 2πi f(z) dz equals the termwise antiderivative Σ aₙ qⁿ / n.
    let f = &builtin_letters(&GroupPreset::gamma0_11())[0];
    let (z0, z1) = (c(-0.2, 0.3), c(0.35, 0.5));
    let anti = |z: Complex64| -> Complex64 {
        let q = (c(0.0, 2.0 * PI) * z).exp();
        f.coefficients().iter().enumerate().skip(1).map(|(n, a)| a * q.powu(n as u32) / n as f64).sum()
    };
    let exact = anti(z1) - anti(z0);
    let m = 200_000;
    let dz = (z1 - z0) / m as f64;
    let mut s = c(0.0, 0.0);
    for k in 0..m {
        let z = z0 + dz * (k as f64 + 0.5);
        s += f.pullback(z, dz, 1e-15).unwrap();
    }
    assert!((s - exact).norm() < 1e-9, "{s} vs {exact}");
}
