use std::collections::BTreeSet;
use std::sync::Arc;

use datawords::ca::{accepts_word, plain_words, CounterAutomaton, Instr, Semantics, TriState};
use datawords::ltl::holds;
use datawords::ra::accepts;
use datawords::reductions::*;
use datawords::words::enumerate_data_words;
use datawords::{Alphabet, DataWord, Sym};

fn language(ca: &CounterAutomaton, sem: Semantics, max_len: usize) -> BTreeSet<Vec<Sym>> {
    plain_words(ca.alphabet.len(), max_len)
        .into_iter()
        .filter(|w| matches!(accepts_word(ca, w, sem, 100_000), TriState::Nonempty(_)))
        .collect()
}

fn two_step() -> CounterAutomaton {
    let mut c = CounterAutomaton::new(Alphabet::from_chars("ab"), 1, "q0", false);
    let q1 = c.add_location("q1", false);
    let q2 = c.add_location("q2", true);
    c.add(0, Some(0), Instr::inc(1), q1);
    c.add(q1, Some(1), Instr::dec(1), q2);
    c
}

/// inc, then either a zero test or a decrement, on one letter per step.
fn zero_test_machine() -> CounterAutomaton {
    let mut c = CounterAutomaton::new(Alphabet::from_chars("ab"), 1, "p", false);
    let q = c.add_location("q", true);
    c.add(0, Some(0), Instr::inc(1), 0);
    c.add(0, Some(1), Instr::ifz(1), q);
    c.add(0, Some(1), Instr::dec(1), 0);
    c
}

fn two_counter_machine() -> CounterAutomaton {
    let mut c = CounterAutomaton::new(Alphabet::from_chars("ab"), 2, "p", false);
    let q = c.add_location("q", true);
    c.add(0, Some(0), Instr::inc(1), 0);
    c.add(0, Some(1), Instr::inc(2), 0);
    c.add(0, Some(0), Instr::ifz(2), q);
    c.add(0, Some(1), Instr::dec(1), q);
    c
}

/// Projections of the models of `phi` among data words of length ≤ `max_len`.
fn model_projections(sigma: &TransitionAlphabet, max_len: usize, keep: impl Fn(&DataWord) -> bool) -> BTreeSet<Vec<Sym>> {
    enumerate_data_words(&sigma.alphabet, max_len).filter(|w| keep(w)).map(|w| sigma.project(&w)).collect()
}

#[test]
fn incrementing_encoding_matches_language() {
    for c in [two_step(), zero_test_machine(), two_counter_machine()] {
        let sigma = transition_alphabet(&c);
        let phi = ca_to_ltl_finite(&c);
        let ura = ca_to_ura1(&c);
        assert!(ura.check().is_ok());
        for w in enumerate_data_words(&sigma.alphabet, 3) {
            assert_eq!(holds(&w, &phi), accepts(&ura, &w).unwrap(), "{w:?}");
        }
        let models = model_projections(&sigma, 3, |w| holds(w, &phi));
        assert_eq!(models, language(&c, Semantics::Incrementing, 3), "{c}");
    }
}

#[test]
fn past_operator_encoding_matches_minsky_language() {
    for c in [two_step(), zero_test_machine(), two_counter_machine()] {
        let sigma = transition_alphabet(&c);
        let phi = minsky_to_ltl_xffp(&c);
        let models = model_projections(&sigma, 3, |w| holds(w, &phi));
        assert_eq!(models, language(&c, Semantics::Minsky, 3), "{c}");
    }
}

#[test]
fn minsky_language_is_strictly_smaller_here() {
    let c = two_step();
    let inc = language(&c, Semantics::Incrementing, 3);
    let min = language(&c, Semantics::Minsky, 3);
    assert!(min.is_subset(&inc));
    let mut c = CounterAutomaton::new(Alphabet::from_chars("a"), 1, "p", false);
    let q = c.add_location("q", true);
    c.add(0, Some(0), Instr::dec(1), q);
    assert!(language(&c, Semantics::Minsky, 2).is_empty());
    assert_eq!(language(&c, Semantics::Incrementing, 2).len(), 1);
}

/// All set partitions of `n` positions as restricted growth strings.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let m = cur.iter().max().map_or(0, |&x| x + 1);
        for c in 0..=m {
            cur.push(c);
            go(n, cur, out);
            cur.pop();
        }
    }
    go(n, &mut cur, &mut out);
    out
}

/// Models of the two-register encoding made of `blocks` complete blocks.
fn block_models(c: &CounterAutomaton, blocks: usize) -> BTreeSet<Vec<Sym>> {
    let sigma = block_alphabet(c);
    let phi = minsky_to_ltl_2reg(c);
    let n = c.counters as usize;
    let trans = sigma.letters(|_| true);
    let parts = partitions(blocks * (2 * n + 1));
    let mut out = BTreeSet::new();
    let mut seqs: Vec<Vec<Sym>> = vec![vec![]];
    for _ in 0..blocks {
        seqs = seqs.into_iter().flat_map(|s| trans.iter().map(move |&t| [s.clone(), vec![t]].concat())).collect();
    }
    for seq in seqs {
        let mut letters = Vec::new();
        for &t in &seq {
            letters.extend(0..2 * n as Sym);
            letters.push(t);
        }
        for p in &parts {
            let w = DataWord::from_labels(sigma.alphabet.clone(), letters.clone(), p);
            if holds(&w, &phi) {
                out.insert(sigma.project(&w));
            }
        }
    }
    out
}

fn exact_length(lang: &BTreeSet<Vec<Sym>>, len: usize) -> BTreeSet<Vec<Sym>> {
    lang.iter().filter(|w| w.len() == len).cloned().collect()
}

#[test]
fn two_register_encoding_matches_minsky_language() {
    for c in [two_step(), zero_test_machine()] {
        let lang = language(&c, Semantics::Minsky, 3);
        for blocks in 1..=3 {
            assert_eq!(block_models(&c, blocks), exact_length(&lang, blocks), "{c} with {blocks} blocks");
        }
    }
}

#[test]
fn two_register_encoding_rejects_bad_shapes() {
    let c = two_step();
    let sigma = block_alphabet(&c);
    let phi = minsky_to_ltl_2reg(&c);
    let a: &Arc<Alphabet> = &sigma.alphabet;
    let word = |names: &[&str], labels: &[usize]| {
        let letters = names.iter().map(|n| a.lookup(n).unwrap()).collect();
        DataWord::from_labels(a.clone(), letters, labels)
    };
    let good = word(&["hi1", "lo1", "q0.a.inc1.q1", "hi1", "lo1", "q1.b.dec1.q2"], &[0, 0, 1, 2, 0, 3]);
    assert!(holds(&good, &phi));
    let missing_lo = word(&["hi1", "q0.a.inc1.q1", "hi1", "lo1", "q1.b.dec1.q2"], &[0, 1, 2, 0, 3]);
    assert!(!holds(&missing_lo, &phi));
    let split_start = word(&["hi1", "lo1", "q0.a.inc1.q1", "hi1", "lo1", "q1.b.dec1.q2"], &[0, 4, 1, 2, 4, 3]);
    assert!(!holds(&split_start, &phi));
}

#[test]
fn untouched_counter_keeps_its_zero() {
    // inc 2 then ifz 1: counter 1 stays zero across the block.
    let mut c = CounterAutomaton::new(Alphabet::from_chars("a"), 2, "p", false);
    let q = c.add_location("q", false);
    let r = c.add_location("r", true);
    c.add(0, Some(0), Instr::inc(2), q);
    c.add(q, Some(0), Instr::ifz(1), r);
    let sigma = block_alphabet(&c);
    let phi = minsky_to_ltl_2reg(&c);
    let a = &sigma.alphabet;
    let names = ["hi1", "lo1", "hi2", "lo2", "p.a.inc2.q", "hi1", "lo1", "hi2", "lo2", "q.a.ifz1.r"];
    let letters: Vec<Sym> = names.iter().map(|n| a.lookup(n).unwrap()).collect();
    // classes: D0 for counter 1 throughout, counter 2 moves hi to a fresh class
    let w = DataWord::from_labels(a.clone(), letters.clone(), &[0, 0, 1, 1, 2, 0, 0, 3, 1, 4]);
    assert!(holds(&w, &phi));
    // the same run with counter 2 tested instead must fail
    let mut d = c.clone();
    d.delta[1] = datawords::ca::CaTrans { from: q, letter: Some(0), instr: Instr::ifz(2), to: r };
    assert_eq!(block_models(&d, 2), BTreeSet::new());
    assert_eq!(block_models(&c, 2).len(), 1);
}

#[test]
fn recurrence_gadget_has_one_accepting_location() {
    let mut c = CounterAutomaton::new(Alphabet::from_chars("a"), 2, "p", false);
    let q = c.add_location("q", true);
    c.add(0, Some(0), Instr::inc(1), q);
    let g = minsky_to_incrementing_fig4(&c).unwrap();
    assert_eq!(g.accepting.iter().filter(|&&b| b).count(), 1);
    assert_eq!(g.counters, 5);
}


#[test]
fn untouched_counter_cannot_be_reset() {
    // inc 1; inc 2; ifz 1 has no Minsky run. Resetting hi1/lo1 to a fresh
    // common class in the last block would fake the zero test.
    let mut c = CounterAutomaton::new(Alphabet::from_chars("a"), 2, "p", false);
    let q = c.add_location("q", false);
    let r = c.add_location("r", false);
    let s = c.add_location("s", true);
    c.add(0, Some(0), Instr::inc(1), q);
    c.add(q, Some(0), Instr::inc(2), r);
    c.add(r, Some(0), Instr::ifz(1), s);
    let sigma = block_alphabet(&c);
    let a = &sigma.alphabet;
    let mut names = Vec::new();
    for t in ["p.a.inc1.q", "q.a.inc2.r", "r.a.ifz1.s"] {
        names.extend(["hi1", "lo1", "hi2", "lo2", t]);
    }
    let letters: Vec<Sym> = names.iter().map(|n| a.lookup(n).unwrap()).collect();
    let labels = [0, 0, 1, 1, 2, 3, 0, 1, 1, 4, 5, 5, 6, 1, 7];
    let w = DataWord::from_labels(a.clone(), letters, &labels);
    assert!(!holds(&w, &minsky_to_ltl_2reg(&c)));
}

#[test]
fn circle_closes_on_small_machines() {
    use datawords::ca::{accepts_incrementing, nonempty_finite_incrementing};
    use datawords::ltl::sat_bounded;
    use datawords::ltl2ra::ltl_to_ara;
    use datawords::ra2ca::build_ca_finite;

    let mut never = CounterAutomaton::new(Alphabet::from_chars("ab"), 1, "p", false);
    // the accepting location has no incoming transition
    never.add_location("q", true);
    never.add(0, Some(0), Instr::inc(1), 0);
    never.add(0, Some(1), Instr::ifz(1), 0);
    never.add(0, Some(0), Instr::dec(1), 0);
    for c in [two_step(), zero_test_machine(), never, two_counter_machine()] {
        let direct = nonempty_finite_incrementing(&c);
        let sigma = transition_alphabet(&c);
        let phi = ca_to_ltl_finite(&c);
        let bound = direct.as_ref().map_or(3, |w| w.len());
        let model = sat_bounded(&phi, &sigma.alphabet, bound);
        assert_eq!(model.is_some(), direct.is_some(), "{c}");
        if let Some(m) = &model {
            assert!(accepts_incrementing(&c, &sigma.project(m)));
        }
        let ara = ltl_to_ara(&phi, &sigma.alphabet).unwrap();
        let back = build_ca_finite(&ara).unwrap();
        assert_eq!(nonempty_finite_incrementing(&back).is_some(), direct.is_some(), "{c}");
    }
}

#[test]
fn encodings_print_as_parseable_text() {
    use datawords::ca::fig_ca_fin;
    use datawords::ltl::parse_ltl;
    let c = fig_ca_fin();
    let sigma = transition_alphabet(&c);
    for phi in [ca_to_ltl_finite(&c), ca_to_ltl_infinite(&c), minsky_to_ltl_xffp(&c)] {
        assert_eq!(parse_ltl(&phi.to_string(), Some(&sigma.alphabet)).unwrap(), phi);
    }
    let b = block_alphabet(&c);
    let phi = minsky_to_ltl_2reg(&c);
    assert_eq!(parse_ltl(&phi.to_string(), Some(&b.alphabet)).unwrap(), phi);
}
