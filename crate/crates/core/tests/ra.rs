mod common;

use datawords::ltl::{holds, nonce_formula};
use datawords::ra::{accepts, nonce_ra, product_1nra};
use datawords::words::enumerate_data_words;

#[test]
fn nonce_automaton_recognises_the_nonce_property() {
    let a = nonce_ra();
    let phi = nonce_formula();
    for w in enumerate_data_words(&a.alphabet, 4) {
        assert_eq!(accepts(&a, &w).unwrap(), holds(&w, &phi), "{w}");
    }
}

#[test]
fn dual_complements_and_product_intersects() {
    let mut r = common::rng(21);
    let words: Vec<_> = enumerate_data_words(&common::ab(), 3).collect();
    for _ in 0..60 {
        let a = common::random_1nra(&mut r, 5);
        let b = common::random_1nra(&mut r, 4);
        assert!(a.check().is_ok() && a.is_1nra());
        let d = a.dual();
        assert!(d.check().is_ok());
        let p = product_1nra(&a, &b).unwrap();
        assert!(p.is_1nra());
        for w in &words {
            let (x, y) = (accepts(&a, w).unwrap(), accepts(&b, w).unwrap());
            assert_eq!(accepts(&d, w).unwrap(), !x, "{w}");
            assert_eq!(accepts(&p, w).unwrap(), x && y, "{w}");
        }
    }
}
