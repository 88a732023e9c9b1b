mod common;

use datawords::fo::{fo2_to_simple_ltl, holds_at as fo_at, nonce_formula_fo, simple_ltl_to_fo2};
use datawords::ltl::{holds_at, is_simple_in, nonce_formula};
use datawords::words::enumerate_data_words;

#[test]
fn nonce_property_has_the_same_meaning_in_both_logics() {
    let phi = nonce_formula();
    let fo = nonce_formula_fo();
    let mut count = 0;
    for w in enumerate_data_words(&common::ab(), 4) {
        count += 1;
        for i in 0..w.len() {
            assert_eq!(holds_at(&w, i, &phi), fo_at(&w, 0, i, &fo), "{w} at {i}");
        }
    }
    assert_eq!(count, 290);
}

#[test]
fn simple_sentences_survive_the_round_trip_through_two_variables() {
    let mut r = common::rng(11);
    for _ in 0..150 {
        let phi = common::simple_sentence(&mut r, 8);
        for j in [0, 1] {
            let fo = simple_ltl_to_fo2(&phi, j).unwrap();
            assert!(fo.is_two_variable());
            assert!(fo.free_vars().iter().all(|&x| x == j), "{fo}");
            for w in enumerate_data_words(&common::ab(), 3) {
                for i in 0..w.len() {
                    assert_eq!(holds_at(&w, i, &phi), fo_at(&w, j, i, &fo), "{phi} vs {fo} on {w} at {i}");
                }
            }
        }
    }
}

#[test]
fn two_variable_formulas_survive_the_round_trip_through_simple_ltl() {
    let mut r = common::rng(12);
    for _ in 0..80 {
        let fo = common::fo2_formula(&mut r, 2);
        let phi = fo2_to_simple_ltl(&fo, 0).unwrap();
        assert!(is_simple_in(&phi, fo.max_offset() as usize), "{fo} ↦ {phi}");
        for w in enumerate_data_words(&common::ab(), 3) {
            for i in 0..w.len() {
                assert_eq!(holds_at(&w, i, &phi), fo_at(&w, 0, i, &fo), "{fo} vs {phi} on {w} at {i}");
            }
        }
    }
}
