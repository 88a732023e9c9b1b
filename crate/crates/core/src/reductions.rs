//! Reductions from counter automata back into logic and register automata,
//! and the recurrence gadget used as a hard instance generator.
//!
//! A run of a counter automaton is written as a data word over its
//! transitions; data classes pair each increment with the decrement that
//! cancels it.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ca::{recurrence_gadget, CaError, CaTrans, CounterAutomaton, Op};
use crate::ltl::Ltl;
use crate::ra::{Loc, RegisterAutomaton, Test, Trans};
use crate::words::{Alphabet, DataWord, Sym};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error(transparent)]
    Ca(#[from] CaError),
}

/// Letters standing for the transitions of a counter automaton, optionally
/// extended with the `hi c` / `lo c` markers of the block encoding.
#[derive(Debug, Clone)]
pub struct TransitionAlphabet {
    pub alphabet: Arc<Alphabet>,
    /// Transition named by each letter; `None` for block markers.
    pub trans: Vec<Option<CaTrans>>,
    source: Arc<Alphabet>,
}

impl TransitionAlphabet {
    /// The letter of a transition.
    pub fn letter(&self, t: &CaTrans) -> Option<Sym> {
        self.trans.iter().position(|u| u.as_ref() == Some(t)).map(|i| i as Sym)
    }

    /// Letters whose transition satisfies `pred`.
    pub fn letters(&self, pred: impl Fn(&CaTrans) -> bool) -> Vec<Sym> {
        (0..self.trans.len()).filter(|&s| self.trans[s].as_ref().is_some_and(&pred)).map(|s| s as Sym).collect()
    }

    /// Second component of the letter: the source letter read, if any.
    pub fn project_letter(&self, s: Sym) -> Option<Sym> {
        self.trans[s as usize].and_then(|t| t.letter)
    }

    /// The word read along the encoded run (ε and markers dropped).
    pub fn project(&self, w: &DataWord) -> Vec<Sym> {
        w.letters().iter().filter_map(|&s| self.project_letter(s)).collect()
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }
}

/// Renders a transition as a single token such as `q0.a.inc1.q1`.
pub fn transition_name(ca: &CounterAutomaton, t: &CaTrans) -> String {
    let letter = t.letter.map_or("eps", |s| ca.alphabet.name(s));
    let op = match t.instr.op {
        Op::Inc => "inc",
        Op::Dec => "dec",
        Op::Ifz => "ifz",
    };
    format!("{}.{}.{}{}.{}", ca.names[t.from], letter, op, t.instr.counter, ca.names[t.to])
}

fn distinct_transitions(ca: &CounterAutomaton) -> Vec<CaTrans> {
    let mut out: Vec<CaTrans> = Vec::new();
    for t in &ca.delta {
        if !out.contains(t) {
            out.push(*t);
        }
    }
    out
}

/// Σ̂: one letter per (distinct) transition, in δ order.
pub fn transition_alphabet(ca: &CounterAutomaton) -> TransitionAlphabet {
    let trans = distinct_transitions(ca);
    let names: Vec<String> = trans.iter().map(|t| transition_name(ca, t)).collect();
    let alphabet = Alphabet::new(&names).expect("transition names are distinct");
    TransitionAlphabet { alphabet, trans: trans.into_iter().map(Some).collect(), source: ca.alphabet.clone() }
}

/// Σ̃: the markers `hi1 lo1 … hin lon` followed by the transition letters.
pub fn block_alphabet(ca: &CounterAutomaton) -> TransitionAlphabet {
    let hat = transition_alphabet(ca);
    let mut names = Vec::new();
    for c in 1..=ca.counters {
        names.push(format!("hi{c}"));
        names.push(format!("lo{c}"));
    }
    let mut trans = vec![None; names.len()];
    names.extend(hat.alphabet.names().iter().cloned());
    trans.extend(hat.trans);
    let alphabet = Alphabet::new(&names).expect("marker names do not clash with transition names");
    TransitionAlphabet { alphabet, trans, source: ca.alphabet.clone() }
}

// ------------------------------------------------------------------ logic

fn any_of(sigma: &TransitionAlphabet, letters: &[Sym]) -> Ltl {
    Ltl::big_or(letters.iter().map(|&s| Ltl::atom(sigma.alphabet.name(s))))
}

fn with_instr(sigma: &TransitionAlphabet, op: Op, c: u32) -> Vec<Sym> {
    sigma.letters(|t| t.instr.op == op && t.instr.counter == c)
}

fn has_next() -> Ltl {
    Ltl::x(Ltl::True)
}

/// Conditions (1)–(7) with the end condition supplied by the caller.
fn run_conditions(ca: &CounterAutomaton, sigma: &TransitionAlphabet, end: Ltl) -> Vec<Ltl> {
    let all = sigma.letters(|_| true);
    let in_delta = sigma.letters(|t| ca.delta.contains(t));
    let mut out = Vec::new();
    // (1) every letter is a transition of C
    let _ = &all;
    out.push(Ltl::g(any_of(sigma, &in_delta)));
    // (2) start in q_I and chain consecutive transitions
    let chain = all.iter().map(|&s| {
        let t = sigma.trans[s as usize].unwrap();
        let next = sigma.letters(|u| u.from == t.to);
        Ltl::implies(Ltl::and(Ltl::atom(sigma.alphabet.name(s)), has_next()), Ltl::x(any_of(sigma, &next)))
    });
    out.push(Ltl::and(any_of(sigma, &sigma.letters(|t| t.from == ca.init)), Ltl::g(Ltl::big_and(chain))));
    // (3) / (3')
    out.push(end);
    // (4), (5): each class holds at most one increment and one decrement
    for op in [Op::Inc, Op::Dec] {
        let bad = (1..=ca.counters).filter_map(|c| {
            let l = with_instr(sigma, op, c);
            (!l.is_empty()).then(|| {
                let f = any_of(sigma, &l);
                Ltl::f(Ltl::and(f.clone(), Ltl::store(1, Ltl::x(Ltl::f(Ltl::and(f, Ltl::Reg(1)))))))
            })
        });
        out.push(Ltl::not(Ltl::big_or(bad)));
    }
    // (6) an increment followed by a zero test must be cancelled somewhere
    // (7) ... and not only after the zero test
    let relevant: Vec<(Ltl, Ltl, Ltl)> = (1..=ca.counters)
        .filter_map(|c| {
            let inc = with_instr(sigma, Op::Inc, c);
            let ifz = with_instr(sigma, Op::Ifz, c);
            (!inc.is_empty() && !ifz.is_empty()).then(|| {
                (any_of(sigma, &inc), any_of(sigma, &with_instr(sigma, Op::Dec, c)), any_of(sigma, &ifz))
            })
        })
        .collect();
    let uncancelled = relevant.iter().map(|(inc, dec, ifz)| {
        Ltl::f(Ltl::and(
            inc.clone(),
            Ltl::store(
                1,
                Ltl::and(
                    Ltl::x(Ltl::f(ifz.clone())),
                    Ltl::not(Ltl::x(Ltl::f(Ltl::and(dec.clone(), Ltl::Reg(1))))),
                ),
            ),
        ))
    });
    out.push(Ltl::not(Ltl::big_or(uncancelled)));
    let late = relevant.iter().map(|(inc, dec, ifz)| {
        Ltl::f(Ltl::and(
            inc.clone(),
            Ltl::store(
                1,
                Ltl::x(Ltl::f(Ltl::and(ifz.clone(), Ltl::x(Ltl::f(Ltl::and(dec.clone(), Ltl::Reg(1))))))),
            ),
        ))
    });
    out.push(Ltl::not(Ltl::big_or(late)));
    out
}

fn final_condition(ca: &CounterAutomaton, sigma: &TransitionAlphabet) -> Ltl {
    let into_f = sigma.letters(|t| ca.accepting[t.to]);
    Ltl::f(Ltl::and(Ltl::not(has_next()), any_of(sigma, &into_f)))
}

fn recurrence_condition(ca: &CounterAutomaton, sigma: &TransitionAlphabet) -> Ltl {
    let from_f = sigma.letters(|t| ca.accepting[t.from]);
    Ltl::g(Ltl::f(any_of(sigma, &from_f)))
}

/// A sentence over Σ̂ whose finite models project exactly onto the finite
/// language of `ca` under incrementing semantics.
pub fn ca_to_ltl_finite(ca: &CounterAutomaton) -> Ltl {
    let sigma = transition_alphabet(ca);
    Ltl::big_and(run_conditions(ca, &sigma, final_condition(ca, &sigma)))
}

/// The ω-version: the end condition becomes "infinitely often in F".
pub fn ca_to_ltl_infinite(ca: &CounterAutomaton) -> Ltl {
    let sigma = transition_alphabet(ca);
    Ltl::big_and(run_conditions(ca, &sigma, recurrence_condition(ca, &sigma)))
}

/// Every decrement is preceded by an increment of its class.
fn no_faulty_decrement(sigma: &TransitionAlphabet, counters: u32) -> Ltl {
    Ltl::big_and((1..=counters).filter_map(|c| {
        let dec = with_instr(sigma, Op::Dec, c);
        (!dec.is_empty()).then(|| {
            let inc = any_of(sigma, &with_instr(sigma, Op::Inc, c));
            Ltl::g(Ltl::implies(any_of(sigma, &dec), Ltl::store(1, Ltl::finv(Ltl::and(inc, Ltl::Reg(1))))))
        })
    }))
}

/// Finite-word encoding of a Minsky automaton with one register and past
/// eventualities: the incrementing conditions plus "no faulty decrement".
pub fn minsky_to_ltl_xffp(ca: &CounterAutomaton) -> Ltl {
    let sigma = transition_alphabet(ca);
    let mut parts = run_conditions(ca, &sigma, final_condition(ca, &sigma));
    parts.push(no_faulty_decrement(&sigma, ca.counters));
    Ltl::big_and(parts)
}

/// Finite-word encoding of a Minsky automaton over Σ̃ with two registers
/// and only future operators (see [`block_alphabet`]).
pub fn minsky_to_ltl_2reg(ca: &CounterAutomaton) -> Ltl {
    minsky_to_ltl_2reg_kind(ca, false)
}

/// As [`minsky_to_ltl_2reg`], with "infinitely often in F" as end condition.
pub fn minsky_to_ltl_2reg_infinite(ca: &CounterAutomaton) -> Ltl {
    minsky_to_ltl_2reg_kind(ca, true)
}

fn minsky_to_ltl_2reg_kind(ca: &CounterAutomaton, infinite: bool) -> Ltl {
    let sigma = block_alphabet(ca);
    let n = ca.counters as i64;
    let len = 2 * n + 1;
    let hi = |c: i64| Ltl::atom(&format!("hi{c}"));
    let lo = |c: i64| Ltl::atom(&format!("lo{c}"));
    let trans = sigma.letters(|_| true);
    let is_trans = any_of(&sigma, &trans);
    let instr = |op: Op, c: i64| any_of(&sigma, &with_instr(&sigma, op, c as u32));
    let next_block = || Ltl::x_pow(len, Ltl::True);
    let counters = 1..=n;
    let mut parts = Vec::new();

    // (i) complete blocks hi1 lo1 … hin lon t
    let first = if n == 0 { is_trans.clone() } else { hi(1) };
    let mut shape = vec![first];
    for c in counters.clone() {
        shape.push(Ltl::g(Ltl::implies(hi(c), Ltl::x(lo(c)))));
        let after = if c < n { hi(c + 1) } else { is_trans.clone() };
        shape.push(Ltl::g(Ltl::implies(lo(c), Ltl::x(after))));
    }
    let restart = if n == 0 { is_trans.clone() } else { hi(1) };
    shape.push(Ltl::g(Ltl::implies(Ltl::and(is_trans.clone(), has_next()), Ltl::x(restart))));
    parts.push(Ltl::big_and(shape));
    // (ii) transition letters are in δ
    parts.push(Ltl::g(Ltl::implies(is_trans.clone(), any_of(&sigma, &sigma.letters(|t| ca.delta.contains(t))))));
    // (iii) start in q_I and chain consecutive transitions
    let chain = trans.iter().map(|&s| {
        let t = sigma.trans[s as usize].unwrap();
        let next = sigma.letters(|u| u.from == t.to);
        Ltl::implies(Ltl::and(Ltl::atom(sigma.alphabet.name(s)), has_next()), Ltl::x_pow(len, any_of(&sigma, &next)))
    });
    parts.push(Ltl::and(
        Ltl::x_pow(len - 1, any_of(&sigma, &sigma.letters(|t| t.from == ca.init))),
        Ltl::g(Ltl::big_and(chain)),
    ));
    // (iv)
    parts.push(if infinite {
        Ltl::g(Ltl::f(any_of(&sigma, &sigma.letters(|t| ca.accepting[t.from]))))
    } else {
        Ltl::f(Ltl::and(Ltl::not(has_next()), any_of(&sigma, &sigma.letters(|t| ca.accepting[t.to]))))
    });
    // (v) all counters start at zero
    parts.push(Ltl::big_and(counters.clone().map(|c| Ltl::x_pow(2 * (c - 1), Ltl::store(1, Ltl::x(Ltl::Reg(1)))))));
    // Offsets from hi c / lo c to the transition letter of their block.
    let hi_to_t = |c: i64| 2 * (n - c) + 2;
    let lo_to_t = |c: i64| 2 * (n - c) + 1;
    let guarded_next = |cond: Ltl, then: Ltl| {
        Ltl::implies(Ltl::and(cond, next_block()), Ltl::x_pow(len, then))
    };
    // (vi) increment: fresh hi, same lo
    for c in counters.clone() {
        parts.push(Ltl::g(Ltl::implies(
            hi(c),
            Ltl::store(1, Ltl::not(Ltl::f(Ltl::and(instr(Op::Inc, c), Ltl::x_pow(2 * c - 1, Ltl::Reg(1)))))),
        )));
        parts.push(Ltl::g(Ltl::implies(
            lo(c),
            Ltl::store(1, guarded_next(Ltl::x_pow(lo_to_t(c), instr(Op::Inc, c)), Ltl::Reg(1))),
        )));
    }
    // (vii) decrement needs a nonzero counter
    for c in counters.clone() {
        parts.push(Ltl::g(Ltl::implies(
            hi(c),
            Ltl::store(1, Ltl::implies(Ltl::x_pow(hi_to_t(c), instr(Op::Dec, c)), Ltl::not(Ltl::x(Ltl::Reg(1))))),
        )));
    }
    // (viii) decrement: same hi, lo moves one class up
    for c in counters.clone() {
        parts.push(Ltl::g(Ltl::implies(
            hi(c),
            Ltl::store(1, guarded_next(Ltl::x_pow(hi_to_t(c), instr(Op::Dec, c)), Ltl::Reg(1))),
        )));
        let moved = Ltl::and(Ltl::and(lo(c), Ltl::Reg(1)), Ltl::x_pow(lo_to_t(c), instr(Op::Dec, c)));
        parts.push(Ltl::g(Ltl::implies(
            hi(c),
            Ltl::store(
                1,
                guarded_next(
                    Ltl::True,
                    Ltl::implies(
                        Ltl::not(Ltl::Reg(1)),
                        Ltl::store(2, Ltl::g(guarded_next(moved, Ltl::Reg(2)))),
                    ),
                ),
            ),
        )));
    }
    // (ix) zero test
    for c in counters.clone() {
        parts.push(Ltl::g(Ltl::implies(
            hi(c),
            Ltl::store(1, Ltl::implies(Ltl::x_pow(hi_to_t(c), instr(Op::Ifz, c)), Ltl::x(Ltl::Reg(1)))),
        )));
    }
    // Frame: hi c only moves on inc c, lo c only on dec c.
    for c in counters {
        let other = |op: Op| {
            any_of(&sigma, &sigma.letters(|t| !(t.instr.op == op && t.instr.counter == c as u32)))
        };
        parts.push(Ltl::g(Ltl::implies(
            hi(c),
            Ltl::store(1, guarded_next(Ltl::x_pow(hi_to_t(c), other(Op::Inc)), Ltl::Reg(1))),
        )));
        parts.push(Ltl::g(Ltl::implies(
            lo(c),
            Ltl::store(1, guarded_next(Ltl::x_pow(lo_to_t(c), other(Op::Dec)), Ltl::Reg(1))),
        )));
    }
    Ltl::big_and(parts)
}

// -------------------------------------------------------------- automata

/// Small builder for one-way nondeterministic automata. Search loops get
/// rank 1 (an endless search is lost), `true`/`false` rank 0; heights are
/// computed at the end.
struct Builder {
    alphabet: Arc<Alphabet>,
    names: Vec<String>,
    delta: Vec<Trans>,
}

impl Builder {
    fn new(alphabet: Arc<Alphabet>) -> Self {
        let mut b = Builder { alphabet, names: Vec::new(), delta: Vec::new() };
        b.add("true", Trans::True);
        b.add("false", Trans::False);
        b
    }
    const TRUE: Loc = 0;
    const FALSE: Loc = 1;

    fn add(&mut self, name: &str, t: Trans) -> Loc {
        self.names.push(format!("{name}{}", self.names.len()));
        self.delta.push(t);
        self.delta.len() - 1
    }

    /// A location to be defined later with [`Builder::set`].
    fn hole(&mut self, name: &str) -> Loc {
        self.add(name, Trans::False)
    }

    fn set(&mut self, q: Loc, t: Trans) {
        self.delta[q] = t;
    }

    /// Branches on membership of the current letter in `set`.
    fn member(&mut self, set: &[Sym], yes: Loc, no: Loc) -> Loc {
        set.iter().rev().fold(no, |acc, &s| self.add("in", Trans::If(Test::Letter(s), yes, acc)))
    }

    /// Some position from here on satisfies `check`.
    fn somewhere(&mut self, check: Loc) -> Loc {
        let q = self.hole("seek");
        let step = self.add("step", Trans::X(q));
        self.set(q, Trans::Or(step, check));
        q
    }

    fn any(&mut self, qs: &[Loc]) -> Loc {
        match qs.split_first() {
            None => Self::FALSE,
            Some((&q, rest)) => {
                let r = self.any(rest);
                if r == Self::FALSE {
                    q
                } else {
                    self.add("or", Trans::Or(q, r))
                }
            }
        }
    }

    fn finish(self, root: Loc, registers: u32) -> RegisterAutomaton {
        let n = self.delta.len();
        let mut height = vec![None; n];
        fn h(q: Loc, delta: &[Trans], memo: &mut [Option<u32>]) -> u32 {
            if let Some(v) = memo[q] {
                return v;
            }
            let t = delta[q];
            let v = if t.moves() || t.targets().is_empty() {
                0
            } else {
                1 + t.targets().into_iter().map(|p| h(p, delta, memo)).max().unwrap_or(0)
            };
            memo[q] = Some(v);
            v
        }
        for q in 0..n {
            h(q, &self.delta, &mut height);
        }
        let rank = self.delta.iter().map(|t| u32::from(!matches!(t, Trans::True | Trans::False))).collect();
        RegisterAutomaton {
            alphabet: self.alphabet,
            names: self.names,
            init: root,
            registers,
            delta: self.delta,
            rank,
            height: height.into_iter().map(|v| v.unwrap()).collect(),
        }
    }
}

/// 1NRA₁ accepting the data words over Σ̂ that violate one of (1)–(7);
/// the zero-test conditions are recognised together as a wrong zero test.
pub fn ca_violations_1nra(ca: &CounterAutomaton) -> RegisterAutomaton {
    let sigma = transition_alphabet(ca);
    let mut b = Builder::new(sigma.alphabet.clone());
    let mut roots = Vec::new();
    let (t, f) = (Builder::TRUE, Builder::FALSE);
    // (1)
    let foreign = sigma.letters(|u| !ca.delta.contains(u));
    let check = b.member(&foreign, t, f);
    roots.push(b.somewhere(check));
    // (2)
    roots.push(b.member(&sigma.letters(|u| u.from != ca.init), t, f));
    let mut dispatch = f;
    for s in (0..sigma.trans.len() as Sym).rev() {
        let u = sigma.trans[s as usize].unwrap();
        let broken = sigma.letters(|v| v.from != u.to);
        let test = b.member(&broken, t, f);
        let next = b.add("next", Trans::X(test));
        dispatch = b.add("is", Trans::If(Test::Letter(s), next, dispatch));
    }
    roots.push(b.somewhere(dispatch));
    // (3)
    let outside = sigma.letters(|u| !ca.accepting[u.to]);
    let last = b.member(&outside, t, f);
    let at_end = b.add("end", Trans::If(Test::End, last, f));
    roots.push(b.somewhere(at_end));
    // (4), (5)
    for op in [Op::Inc, Op::Dec] {
        for c in 1..=ca.counters {
            let l = with_instr(&sigma, op, c);
            if l.is_empty() {
                continue;
            }
            let same = b.add("up", Trans::If(Test::Reg(1), t, f));
            let again = b.member(&l, same, f);
            let later = b.somewhere(again);
            let step = b.add("next", Trans::X(later));
            let store = b.add("store", Trans::Store(1, step));
            let first = b.member(&l, store, f);
            roots.push(b.somewhere(first));
        }
    }
    // wrong zero test: inc c, then ifz c with no decrement of its class
    // strictly in between
    for c in 1..=ca.counters {
        let inc = with_instr(&sigma, Op::Inc, c);
        let ifz = with_instr(&sigma, Op::Ifz, c);
        if inc.is_empty() || ifz.is_empty() {
            continue;
        }
        let dec = with_instr(&sigma, Op::Dec, c);
        let scan = b.hole("scan");
        let step = b.add("next", Trans::X(scan));
        let cancelled = b.add("up", Trans::If(Test::Reg(1), f, step));
        let no_dec = b.member(&ifz, t, step);
        let body = b.member(&dec, cancelled, no_dec);
        b.set(scan, b.delta[body]);
        let first_step = b.add("next", Trans::X(scan));
        let store = b.add("store", Trans::Store(1, first_step));
        let first = b.member(&inc, store, f);
        roots.push(b.somewhere(first));
    }
    let root = b.any(&roots);
    b.finish(root, 1)
}

/// 1URA₁ accepting exactly the data words over Σ̂ satisfying (1)–(7).
pub fn ca_to_ura1(ca: &CounterAutomaton) -> RegisterAutomaton {
    ca_violations_1nra(ca).dual()
}

/// Checks the source shape and builds the recurrence gadget: an
/// incrementing automaton with an infinite accepting run iff the source's
/// run never accepts.
pub fn minsky_to_incrementing_fig4(ca: &CounterAutomaton) -> Result<CounterAutomaton, ReductionError> {
    ca.validate()?;
    recurrence_gadget(ca).map_err(|e| match e {
        CaError::NotGadgetSource(m) => ReductionError::PreconditionViolation(m),
        other => other.into(),
    })
}

/// Groups the positions of a transition sequence into classes the way the
/// one-register encoding does under Minsky semantics: each decrement joins
/// the class of the oldest pending increment of its counter.
pub fn encode_run(sigma: &TransitionAlphabet, run: &[CaTrans]) -> Option<DataWord> {
    let mut letters = Vec::new();
    let mut labels = Vec::new();
    let mut pending: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, t) in run.iter().enumerate() {
        letters.push(sigma.letter(t)?);
        let c = t.instr.counter;
        let label = match t.instr.op {
            Op::Dec => {
                let q = pending.entry(c).or_default();
                if q.is_empty() {
                    i
                } else {
                    q.remove(0)
                }
            }
            Op::Inc => {
                pending.entry(c).or_default().push(i);
                i
            }
            Op::Ifz => i,
        };
        labels.push(label);
    }
    Some(DataWord::from_labels(sigma.alphabet.clone(), letters, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::Instr;
    use crate::ltl::holds;
    use crate::ra::accepts;
    use crate::words::make_data_word;

    fn two_step() -> CounterAutomaton {
        let mut c = CounterAutomaton::new(Alphabet::from_chars("ab"), 1, "q0", false);
        let q1 = c.add_location("q1", false);
        let q2 = c.add_location("q2", true);
        c.add(0, Some(0), Instr::inc(1), q1);
        c.add(q1, Some(1), Instr::dec(1), q2);
        c
    }

    #[test]
    fn letter_names() {
        let s = transition_alphabet(&two_step());
        assert_eq!(s.alphabet.names(), ["q0.a.inc1.q1", "q1.b.dec1.q2"]);
        assert_eq!(s.project_letter(1), Some(1));
    }

    #[test]
    fn two_step_models() {
        let c = two_step();
        let s = transition_alphabet(&c);
        let phi = ca_to_ltl_finite(&c);
        let xffp = minsky_to_ltl_xffp(&c);
        let names = ["q0.a.inc1.q1", "q1.b.dec1.q2"];
        let same = make_data_word(&s.alphabet, &names, &[vec![0, 1]]).unwrap();
        let apart = make_data_word(&s.alphabet, &names, &[vec![0], vec![1]]).unwrap();
        assert!(holds(&same, &phi) && holds(&apart, &phi));
        assert!(holds(&same, &xffp) && !holds(&apart, &xffp));
        let ura = ca_to_ura1(&c);
        assert!(ura.check().is_ok());
        assert_eq!(crate::ra::parse_ra(&ura.to_string()).unwrap(), ura);
        assert!(accepts(&ura, &same).unwrap() && accepts(&ura, &apart).unwrap());
    }

    #[test]
    fn late_decrement_is_rejected() {
        let mut c = CounterAutomaton::new(Alphabet::from_chars("a"), 1, "p", false);
        let q = c.add_location("q", false);
        let r = c.add_location("r", false);
        let s = c.add_location("s", true);
        c.add(0, Some(0), Instr::inc(1), q);
        c.add(q, Some(0), Instr::ifz(1), r);
        c.add(r, Some(0), Instr::dec(1), s);
        let sigma = transition_alphabet(&c);
        let names: Vec<&str> = sigma.alphabet.names().iter().map(String::as_str).collect();
        let w = make_data_word(&sigma.alphabet, &names, &[vec![0, 2], vec![1]]).unwrap();
        assert!(!holds(&w, &ca_to_ltl_finite(&c)));
        assert!(accepts(&ca_violations_1nra(&c), &w).unwrap());
        assert!(!accepts(&ca_to_ura1(&c), &w).unwrap());
    }

    #[test]
    fn no_zero_tests_no_zero_conditions() {
        let c = two_step();
        let s = transition_alphabet(&c);
        let parts = run_conditions(&c, &s, Ltl::True);
        assert_eq!(parts[5], Ltl::not(Ltl::False));
        assert_eq!(parts[6], Ltl::not(Ltl::False));
        let inf = ca_to_ltl_infinite(&c);
        let Ltl::And(_, rest) = &inf else { panic!() };
        let Ltl::And(_, rest) = &**rest else { panic!() };
        let Ltl::And(end, _) = &**rest else { panic!() };
        assert_eq!(**end, Ltl::g(Ltl::f(Ltl::False)));
    }

    #[test]
    fn recurrence_gadget_preconditions() {
        let c = two_step();
        assert!(matches!(minsky_to_incrementing_fig4(&c), Err(ReductionError::PreconditionViolation(_))));
    }
}
