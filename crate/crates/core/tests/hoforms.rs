mod common;

use std::sync::Arc;

use common::{c, rng};
use geomod_core::chen::{rewrite_functional, ExactLetter, IteratedIntegral, LoopCache};
use geomod_core::formbank::{builtin_letters, Alphabet, ModularLambda, OneForm, Potential};
use geomod_core::groupring::GroupRingElement;
use geomod_core::hoforms::{random_tuples, sample_points, HigherOrderForm};
use geomod_core::modgroup::GroupPreset;

fn setup(preset: GroupPreset, order: usize) -> (Alphabet, Arc<LoopCache>) {
    let alphabet = Alphabet::from_letters(builtin_letters(&preset));
    let z0 = preset.basepoint;
    let cache = Arc::new(LoopCache::new(Arc::new(preset), alphabet.clone(), z0, order, 1e-11));
    (alphabet, cache)
}

#[test]
fn constant_and_basepoint_values() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 2);
    let k = HigherOrderForm::new(IteratedIntegral::constant(&a, c(2.5, -1.0)), cache.clone()).unwrap();
    assert_eq!(k.claimed_order(), 1);
    assert_eq!(k.evaluate(c(0.3, 0.9)).unwrap(), c(2.5, -1.0));
    let f = HigherOrderForm::new(
        IteratedIntegral::word(&a, &[0, 2]).with_term(&[], c(0.5, 0.0)),
        cache.clone(),
    )
    .unwrap();
    assert_eq!(f.claimed_order(), 3);
    assert_eq!(f.evaluate(cache.basepoint()).unwrap(), c(0.5, 0.0));
}

#[test]
fn eichler_integral_periods() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 1);
    let f = HigherOrderForm::new(IteratedIntegral::word(&a, &[0]), cache.clone()).unwrap();
    let z0 = cache.basepoint();
    for (i, g) in cache.preset().generators().iter().enumerate() {
        let direct = f.evaluate(g.apply(z0).unwrap()).unwrap() - f.evaluate(z0).unwrap();
        let period = cache.generator_loop(i).unwrap().get(&[0]);
        assert!((direct - period).norm() < 1e-10);
    }
}

#[test]
fn translates_agree_with_direct_paths() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 3);
    let i = IteratedIntegral::word(&a, &[0, 2, 0]).with_term(&[2], c(0.0, 1.0));
    let f = HigherOrderForm::new(i, cache.clone()).unwrap();
    let preset = cache.preset();
    let mut r = rng(2);
    let mut compared = 0;
    for _ in 0..40 {
        let g = geomod_core::hoforms::random_element(preset, &mut r, 3).unwrap();
        let z = sample_points(&mut r, 1, (-0.4, 0.4), (0.4, 1.0))[0];
        let gz = g.apply(z).unwrap();
        if gz.im < 0.1 {
            continue;
        }
        let via = f.evaluate_translate(&g, &f.signature_to(z).unwrap()).unwrap();
        let direct = f.evaluate(gz).unwrap();
        assert!((via - direct).norm() < 1e-7 * direct.norm().max(1.0), "{g}: {via} vs {direct}");
        compared += 1;
    }
    assert!(compared >= 5);
}

#[test]
fn order_two_and_three_checks() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 3);
    let preset = cache.preset().clone();
    let mut r = rng(4);
    let pts = sample_points(&mut r, 5, (-0.4, 0.4), (0.3, 1.0));
    // s = 1: ω closed is killed by J²
    let f1 = HigherOrderForm::new(IteratedIntegral::word(&a, &[0]), cache.clone()).unwrap();
    let t1 = random_tuples(&preset, &mut r, 1, 4, 3).unwrap();
    let t2 = random_tuples(&preset, &mut r, 2, 4, 3).unwrap();
    let rep = f1.verify_order(&t1, &t2, &pts, 1e-7).unwrap();
    assert!(rep.passed, "{rep}");
    // s = 2, holomorphic word
    let f2 = HigherOrderForm::new(IteratedIntegral::word(&a, &[0, 2]), cache.clone()).unwrap();
    let t3 = random_tuples(&preset, &mut r, 3, 4, 2).unwrap();
    let rep = f2.verify_order(&t2, &t3, &pts, 1e-6).unwrap();
    assert!(rep.passed, "{rep}");
    assert!(rep.constancy.iter().all(|c| c.spread < 1e-6));
    // constant: killed by J¹
    let k = HigherOrderForm::new(IteratedIntegral::constant(&a, c(1.0, 0.0)), cache.clone()).unwrap();
    let rep = k.verify_order(&[vec![]], &t1, &pts, 1e-12).unwrap();
    assert!(rep.passed);
    // a claimed order that is too small is caught
    let rep = f2.verify_order(&t1, &t2, &pts, 1e-6).unwrap();
    assert!(!rep.passed);
    assert!(format!("{rep}").contains("FAIL"));
}

#[test]
fn cuspidality() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 2);
    let mut r = rng(8);
    let pts = sample_points(&mut r, 6, (-0.5, 0.5), (0.3, 1.0));
    let f = HigherOrderForm::new(IteratedIntegral::word(&a, &[0]), cache.clone()).unwrap();
    assert!(f.cuspidal_flag());
    let rep = f.verify_cuspidal(&pts, 1e-7).unwrap();
    assert!(rep.passed, "{rep}");
    let g = HigherOrderForm::new(IteratedIntegral::word(&a, &[1, 1]).with_term(&[0, 0], c(0.0, 2.0)), cache.clone())
        .unwrap();
    assert!(g.verify_cuspidal(&pts, 1e-7).unwrap().passed);
    let e = HigherOrderForm::new(IteratedIntegral::word(&a, &[2]), cache.clone()).unwrap();
    assert!(!e.cuspidal_flag());
    let rep = e.verify_cuspidal(&pts, 1e-7).unwrap();
    assert!(!rep.passed);
    let k = HigherOrderForm::new(IteratedIntegral::constant(&a, c(3.0, 0.0)), cache).unwrap();
    let rep = k.verify_cuspidal(&pts, 1e-7).unwrap();
    assert!(rep.cusps.iter().all(|c| c.max_residual == 0.0));
}

#[test]
fn products_add_orders() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 1);
    let f = HigherOrderForm::new(IteratedIntegral::word(&a, &[0]), cache.clone()).unwrap();
    let e = HigherOrderForm::new(IteratedIntegral::word(&a, &[2]).with_term(&[], c(1.0, 0.0)), cache.clone()).unwrap();
    let p = f.product(&e).unwrap();
    assert_eq!(p.claimed_order(), 3);
    let mut r = rng(6);
    for z in sample_points(&mut r, 5, (-0.4, 0.4), (0.3, 1.0)) {
        let lhs = f.evaluate(z).unwrap() * e.evaluate(z).unwrap();
        assert!((lhs - p.evaluate(z).unwrap()).norm() < 1e-8);
    }
    let one = HigherOrderForm::new(IteratedIntegral::constant(&a, c(1.0, 0.0)), cache.clone()).unwrap();
    assert_eq!(f.product(&one).unwrap().functional(), f.functional());
    let (_, other) = setup(GroupPreset::gamma2(), 1);
    let w = HigherOrderForm::new(IteratedIntegral::constant(other.alphabet(), c(1.0, 0.0)), other).unwrap();
    assert!(f.product(&w).is_err());
}

#[test]
fn injectivity_probe() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 1);
    let f = HigherOrderForm::new(IteratedIntegral::word(&a, &[0]), cache.clone()).unwrap();
    assert!(f.verify_injectivity_probe(4, 1e-6).unwrap());
    let z = HigherOrderForm::new(IteratedIntegral::zero(&a), cache).unwrap();
    assert!(!z.verify_injectivity_probe(4, 1e-6).unwrap());

    // [dλ w0] − [dλ] + λ(z0)[w0] integrates to 0 along every path from z0
    let preset = GroupPreset::gamma2();
    let lam: Arc<dyn Potential> = Arc::new(ModularLambda);
    let mut letters: Vec<Arc<dyn OneForm>> =
        builtin_letters(&preset).into_iter().map(|l| Arc::new(l) as Arc<dyn OneForm>).collect();
    letters.push(Arc::new(ExactLetter::new(lam)));
    let alphabet = Alphabet::new(letters);
    let z0 = preset.basepoint;
    let rhs = rewrite_functional(&alphabet, &[0], 0, ModularLambda.value(z0).unwrap(), |i| {
        (i == 0).then(|| vec![(2, c(1.0, 0.0))])
    })
    .unwrap();
    let i = IteratedIntegral::word(&alphabet, &[2, 0]).sub(&rhs).unwrap();
    let cache = Arc::new(LoopCache::new(Arc::new(preset), alphabet, z0, 2, 1e-11));
    let f = HigherOrderForm::new(i, cache).unwrap();
    assert!(!f.verify_injectivity_probe(4, 1e-6).unwrap());
}

#[test]
fn basepoint_change_by_deconcatenation() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 3);
    let i = IteratedIntegral::word(&a, &[0, 2, 0]).with_term(&[2, 2], c(0.3, 0.0)).with_term(&[], c(1.0, 0.0));
    let f = HigherOrderForm::new(i, cache).unwrap();
    for (z1, z) in [(c(0.1, 0.6), c(-0.3, 0.4)), (c(-0.2, 1.1), c(0.45, 0.2))] {
        let (direct, via) = f.basepoint_change(z1, z).unwrap();
        assert!((direct - via).norm() < 1e-8);
    }
}

#[test]
fn slash_by_group_ring_elements() {
    let (a, cache) = setup(GroupPreset::gamma0_11(), 1);
    let f = HigherOrderForm::new(IteratedIntegral::word(&a, &[0]), cache.clone()).unwrap();
    let z = c(0.1, 0.7);
    let one = GroupRingElement::one();
    assert!((f.slash_at(&one, z).unwrap() - f.evaluate(z).unwrap()).norm() < 1e-14);
}
