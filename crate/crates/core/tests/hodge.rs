mod common;

use common::c;
use geomod_core::chen::words::all_words;
use geomod_core::chen::IteratedIntegral;
use geomod_core::formbank::{builtin_letters, Alphabet, FormLetter};
use geomod_core::hodge::{
    functional_degree, primitive_space_table, word_degree, FiltrationDegree, SeriesLabel, TwistBucket,
};
use geomod_core::modgroup::GroupPreset;

use SeriesLabel::{PBar, E, P};
use TwistBucket::{Hodge, Length};

fn g11() -> (GroupPreset, Vec<FormLetter>, Alphabet) {
    let preset = GroupPreset::gamma0_11();
    let letters = builtin_letters(&preset);
    let a = Alphabet::from_letters(letters.clone());
    (preset, letters, a)
}

fn deg(p: u32, l: u32, r: u32) -> FiltrationDegree {
    FiltrationDegree { hodge_p: p, weight_l: l, length_r: r }
}

#[test]
fn word_degrees() {
    let (_, letters, _) = g11();
    let (f, fbar, e) = (&letters[0], &letters[1], &letters[2]);
    assert_eq!(word_degree(&[]), deg(0, 0, 0));
    assert_eq!(word_degree(&[f, fbar]), deg(1, 2, 2));
    assert_eq!(word_degree(&[e]), deg(1, 2, 1));
    assert_eq!(word_degree(&[f, e, e]), deg(3, 5, 3));
}

#[test]
fn functional_degrees() {
    let (_, _, a) = g11();
    assert_eq!(functional_degree(&IteratedIntegral::constant(&a, c(2.0, 0.0))).unwrap(), deg(0, 0, 0));
    let mixed = IteratedIntegral::word(&a, &[0, 0]).with_term(&[1], c(1.0, 0.0)).with_term(&[2], c(0.5, 0.0));
    assert_eq!(functional_degree(&mixed).unwrap(), deg(0, 2, 2));
    // zero coefficients do not count
    let z = IteratedIntegral::word(&a, &[0, 0]).with_term(&[1], c(0.0, 0.0));
    assert_eq!(functional_degree(&z).unwrap(), deg(2, 2, 2));
}

#[test]
fn degree_invariants_and_compact_coincidence() {
    let (_, letters, _) = g11();
    for w in all_words(3, 4) {
        let ls: Vec<&FormLetter> = w.iter().map(|&i| &letters[i]).collect();
        let d = word_degree(&ls);
        assert_eq!(d.length_r as usize, w.len());
        assert!(d.hodge_p <= d.length_r);
        assert!(d.length_r <= d.weight_l && d.weight_l <= 2 * d.length_r);
        let cusp_only = w.iter().all(|&i| i < 2);
        assert_eq!(cusp_only, d.weight_l == d.length_r, "{w:?}");
    }
}

#[test]
fn shuffle_respects_filtrations() {
    let (_, _, a) = g11();
    let words: Vec<Vec<usize>> = all_words(3, 2).collect();
    for (i, u) in words.iter().enumerate() {
        for v in words.iter().skip(i) {
            let x = IteratedIntegral::word(&a, u).with_term(&[1], c(0.3, 0.0));
            let y = IteratedIntegral::word(&a, v);
            let (dx, dy) = (functional_degree(&x).unwrap(), functional_degree(&y).unwrap());
            let d = functional_degree(&x.shuffle(&y).unwrap()).unwrap();
            assert!(d.hodge_p >= dx.hodge_p + dy.hodge_p);
            assert!(d.weight_l <= dx.weight_l + dy.weight_l);
        }
    }
}

#[test]
fn exact_letters_have_no_degree() {
    use geomod_core::chen::ExactLetter;
    use geomod_core::formbank::ModularLambda;
    use std::sync::Arc;
    let preset = GroupPreset::gamma2();
    let mut letters: Vec<Arc<dyn geomod_core::formbank::OneForm>> =
        builtin_letters(&preset).into_iter().map(|l| Arc::new(l) as _).collect();
    letters.push(Arc::new(ExactLetter::new(Arc::new(ModularLambda))));
    let a = Alphabet::new(letters);
    assert!(functional_degree(&IteratedIntegral::word(&a, &[2])).is_err());
}

fn items(list: &[geomod_core::hodge::StratumItem]) -> Vec<(SeriesLabel, TwistBucket)> {
    let mut v: Vec<_> = list.iter().map(|i| (i.series, i.twist)).collect();
    v.sort();
    v
}

fn sorted(mut v: Vec<(SeriesLabel, TwistBucket)>) -> Vec<(SeriesLabel, TwistBucket)> {
    v.sort();
    v
}

#[test]
fn golden_weight_four_length_two() {
    let (preset, _, _) = g11();
    let t = primitive_space_table(4, 2, &preset).unwrap();
    let w: Vec<Vec<(SeriesLabel, TwistBucket)>> = vec![
        vec![],
        vec![],
        vec![],
        vec![(P, Length(0)), (PBar, Length(0))],
        vec![(E, Length(0)), (P, Length(1)), (PBar, Length(1))],
        vec![(P, Length(2)), (PBar, Length(2)), (E, Length(1))],
        vec![(P, Length(2)), (PBar, Length(2)), (E, Length(2))],
    ];
    assert_eq!(t.weight.len(), 7);
    for (l, want) in w.into_iter().enumerate() {
        assert_eq!(items(t.weight_items(l as u32)), sorted(want), "W_{l}");
    }
    let full = Length(2);
    let f: Vec<Vec<(SeriesLabel, TwistBucket)>> = vec![
        vec![(P, full), (PBar, full), (E, full)],
        vec![(PBar, Hodge(1)), (P, full), (E, full)],
        vec![(PBar, Hodge(2)), (P, full), (E, full)],
        vec![(P, full), (E, Hodge(1))],
        vec![(P, Hodge(1)), (E, Hodge(2))],
        vec![(P, Hodge(2))],
        vec![],
    ];
    assert_eq!(t.hodge.len(), 7);
    for (p, want) in f.into_iter().enumerate() {
        assert_eq!(items(t.hodge_items(p as u32)), sorted(want), "F^{p}");
    }
    assert!(t.hodge_items(9).is_empty());
    t.check_nesting().unwrap();
    let text = t.to_text();
    for line in [
        "W_2 = 0",
        "W_3 = P_{m,a}(z); Pbar_{m,a}(z)",
        "W_4 = P_{m,a}(z,I) I in H0(B_1); Pbar_{m,a}(z,I) I in H0(B_1); E_a(z)",
        "F^5 = P_{m,a}(z,I) I in F^2 H0(B_2)",
        "F^6 = 0",
    ] {
        assert!(text.lines().any(|x| x == line), "missing `{line}` in\n{text}");
    }
    let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(json["weight"][4]["items"].as_array().unwrap().len(), 3);
    assert_eq!(json["hodge"][5]["items"][0]["twist"]["kind"], "Hodge");
}

#[test]
fn trivial_twist_is_classical() {
    for preset in [GroupPreset::gamma2(), GroupPreset::gamma0_11()] {
        for k in [4u32, 6, 8] {
            let t = primitive_space_table(k, 0, &preset).unwrap();
            for l in 0..k - 1 {
                assert!(t.weight_items(l).is_empty());
            }
            assert_eq!(items(t.weight_items(k - 1)), sorted(vec![(P, Length(0)), (PBar, Length(0))]));
            assert_eq!(items(t.weight_items(k)).len(), 3);
            t.check_nesting().unwrap();
        }
    }
}

#[test]
fn nesting_holds_up_to_length_four() {
    for preset in [GroupPreset::gamma2(), GroupPreset::gamma0_11()] {
        for k in [4u32, 6, 8, 10] {
            for s in 0..=4 {
                let t = primitive_space_table(k, s, &preset).unwrap();
                t.check_nesting().unwrap();
                assert_eq!(t.weight.len() as u32, s + k + 1);
                let cells: Vec<usize> = t.weight.iter().map(|st| st.cells).collect();
                assert!(cells.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
    assert!(primitive_space_table(3, 1, &GroupPreset::gamma2()).is_err());
}
