mod common;

use datawords::ltl::{holds, nonce_formula};
use datawords::ltl2ra::ltl_to_ara;
use datawords::ra::accepts;
use datawords::words::enumerate_data_words;

#[test]
fn translation_preserves_the_language() {
    let ab = common::ab();
    let words: Vec<_> = enumerate_data_words(&ab, 4).collect();
    let mut r = common::rng(31);
    let mut formulas = vec![nonce_formula()];
    formulas.extend((0..100).map(|_| common::xu_sentence(&mut r, 10)));
    for phi in formulas {
        let a = ltl_to_ara(&phi, &ab).unwrap();
        assert!(a.check().is_ok(), "{phi}");
        assert!(a.classify().one_way, "{phi}");
        assert!(a.registers <= 1);
        for w in &words {
            assert_eq!(accepts(&a, w).unwrap(), holds(w, &phi), "{phi} on {w}");
        }
    }
}

#[test]
fn past_operators_give_two_way_automata() {
    let words: Vec<_> = enumerate_data_words(&common::ab(), 4).collect();
    for text in ["F (b & Xp a)", "G (b -> Fp (a & ~up1))", "store1 X F (b & Fp (a & up1) & Xp Xp true)", "F (a Up b)"] {
        let phi = datawords::ltl::parse_ltl(text, None).unwrap();
        let phi = if phi.is_sentence() { phi } else { datawords::ltl::Ltl::store(1, phi) };
        let a = ltl_to_ara(&phi, &common::ab()).unwrap();
        assert!(a.check().is_ok());
        assert!(!a.classify().one_way, "{phi}");
        for w in &words {
            assert_eq!(accepts(&a, w).unwrap(), holds(w, &phi), "{phi} on {w}");
        }
    }
}
