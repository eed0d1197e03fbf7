mod common;

use std::sync::Arc;

use common::{c, rng};
use geomod_core::chen::{IteratedIntegral, LoopCache};
use geomod_core::chen::words::words_of_length;
use geomod_core::formbank::{builtin_letters, theta_constants, Alphabet};
use geomod_core::groupring::{j_power_element, parse_group_ring, GroupRingElement};
use geomod_core::hoforms::random_element;
use geomod_core::modgroup::GroupPreset;
use rand::Rng;

#[test]
fn degree_vanishes_on_augmentation_ideal() {
    let preset = GroupPreset::gamma0_11();
    let mut r = rng(5);
    for _ in 0..100 {
        let n = r.gen_range(1..4);
        let factors: Vec<_> = (0..n).map(|_| random_element(&preset, &mut r, 4).unwrap()).collect();
        let x = j_power_element(&factors).unwrap().scale(c(r.gen_range(-2.0..2.0), 1.0));
        assert!(x.degree().norm() < 1e-12);
        let y = GroupRingElement::from_element(random_element(&preset, &mut r, 3).unwrap()).add(&GroupRingElement::one());
        let xy = x.multiply(&y).unwrap();
        assert!((xy.degree() - x.degree() * y.degree()).norm() < 1e-12);
    }
}

#[test]
fn weight_four_eisenstein_on_gamma2_is_invariant() {
    // θ₄⁸ spans part of the weight-4 Eisenstein space of Γ(2)
    let f = |z| theta_constants(z).map(|(_, _, t4)| t4.powi(8));
    let preset = GroupPreset::gamma2();
    let mut r = rng(6);
    let mut checked = 0;
    while checked < 10 {
        let z = c(r.gen_range(-1.0..1.0), r.gen_range(0.5..1.5));
        let g = random_element(&preset, &mut r, 3).unwrap();
        if g.apply(z).unwrap().im < 0.05 {
            continue;
        }
        let xi = GroupRingElement::augmented(&g);
        let v = xi.slash_at(f, 4, z).unwrap();
        assert!(v.norm() < 1e-6, "{g} at {z}: {}", v.norm());
        checked += 1;
    }
    // a weight-2 form slashed with the wrong weight is not invariant
    let g = preset.generators()[1].clone();
    let wrong = GroupRingElement::augmented(&g).slash_at(f, 2, c(0.1, 1.0)).unwrap();
    assert!(wrong.norm() > 1e-3);
}

#[test]
fn powers_of_j_multiply_and_annihilate() {
    let preset = GroupPreset::gamma0_11();
    let letters = builtin_letters(&preset);
    let a = Alphabet::from_letters(letters);
    let cache = LoopCache::new(Arc::new(preset.clone()), a.clone(), preset.basepoint, 3, 1e-11);
    let gens = preset.generators();
    let x = parse_group_ring("(g1-1)", &preset).unwrap();
    let y = parse_group_ring("(g3-1)(g1^-1-1)", &preset).unwrap();
    let xy = x.multiply(&y).unwrap();
    assert_eq!(xy, j_power_element(&[gens[0].clone(), gens[2].clone(), gens[0].inverse()]).unwrap());
    assert!(xy.degree().norm() == 0.0);
    let mut biggest_short = 0.0f64;
    for len in 0..3 {
        for w in words_of_length(3, len) {
            let v = cache.pair(&IteratedIntegral::word(&a, &w), &xy).unwrap();
            biggest_short = biggest_short.max(v.norm());
        }
    }
    assert!(biggest_short < 1e-8, "{biggest_short}");
    let full = cache.pair(&IteratedIntegral::word(&a, &[0, 0, 0]), &xy).unwrap();
    assert!(full.norm() > 1e-6);
}
