//! Translation of LTL↓ sentences into equivalent alternating register
//! automata, one location per formula of the closure.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ltl::{nnf, Ltl};
use crate::ra::{Loc, RegisterAutomaton, Test, Trans};
use crate::words::Alphabet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Ltl2RaError {
    #[error("formula has free register occurrences")]
    NotASentence,
    #[error("atom `{0}` is not in the alphabet")]
    UnknownAtom(String),
}

/// The automaton together with the closure formula of each location.
pub struct Translation {
    pub automaton: RegisterAutomaton,
    pub closure: Vec<Ltl>,
}

pub fn ltl_to_ara(phi: &Ltl, alphabet: &Arc<Alphabet>) -> Result<RegisterAutomaton, Ltl2RaError> {
    Ok(ltl_to_ara_with_closure(phi, alphabet)?.automaton)
}

fn unfolding(f: &Ltl) -> Option<Ltl> {
    let b = |f: &Ltl| Box::new(f.clone());
    Some(match f {
        Ltl::U(a, _) => Ltl::And(b(a), Box::new(Ltl::X(b(f)))),
        Ltl::Uinv(a, _) => Ltl::And(b(a), Box::new(Ltl::Xinv(b(f)))),
        Ltl::NU(a, _) => Ltl::Or(b(a), Box::new(Ltl::WX(b(f)))),
        Ltl::NUinv(a, _) => Ltl::Or(b(a), Box::new(Ltl::WXinv(b(f)))),
        _ => return None,
    })
}

struct Builder<'a> {
    alphabet: &'a Alphabet,
    index: HashMap<Ltl, Loc>,
    closure: Vec<Ltl>,
    /// Rank override for unfolding formulas and their next-step parts.
    rank_of: HashMap<Ltl, u32>,
}

impl Builder<'_> {
    fn add(&mut self, f: &Ltl) {
        if self.index.contains_key(f) {
            return;
        }
        self.index.insert(f.clone(), self.closure.len());
        self.closure.push(f.clone());
        for c in f.children() {
            self.add(c);
        }
        if let Some(u) = unfolding(f) {
            let rank = base_rank(f);
            if let Ltl::And(_, next) | Ltl::Or(_, next) = &u {
                self.rank_of.insert((**next).clone(), rank);
            }
            self.rank_of.insert(u.clone(), rank);
            self.add(&u);
        }
    }

    fn delta(&self, f: &Ltl) -> Result<Trans, Ltl2RaError> {
        let q = |f: &Ltl| self.index[f];
        let top = q(&Ltl::True);
        let bot = q(&Ltl::False);
        let letter = |a: &str| self.alphabet.lookup(a).ok_or_else(|| Ltl2RaError::UnknownAtom(a.to_string()));
        Ok(match f {
            Ltl::True => Trans::True,
            Ltl::False => Trans::False,
            Ltl::Atom(a) => Trans::If(Test::Letter(letter(a)?), top, bot),
            Ltl::NAtom(a) => Trans::If(Test::Letter(letter(a)?), bot, top),
            Ltl::Reg(r) => Trans::If(Test::Reg(*r), top, bot),
            Ltl::NReg(r) => Trans::If(Test::Reg(*r), bot, top),
            Ltl::And(a, b) => Trans::And(q(a), q(b)),
            Ltl::Or(a, b) => Trans::Or(q(a), q(b)),
            Ltl::X(a) => Trans::X(q(a)),
            Ltl::Xinv(a) => Trans::Xinv(q(a)),
            Ltl::WX(a) => Trans::WX(q(a)),
            Ltl::WXinv(a) => Trans::WXinv(q(a)),
            Ltl::Store(r, a) => Trans::Store(*r, q(a)),
            Ltl::U(_, c) | Ltl::Uinv(_, c) => Trans::Or(q(c), q(&unfolding(f).expect("until"))),
            Ltl::NU(_, c) | Ltl::NUinv(_, c) => Trans::And(q(c), q(&unfolding(f).expect("until"))),
            Ltl::Not(_) | Ltl::Implies(..) | Ltl::F(_) | Ltl::Finv(_) | Ltl::G(_) | Ltl::Ginv(_) => {
                unreachable!("input is in negation normal form")
            }
        })
    }
}

/// 2|ψ|, plus one for (past) until so that staying in it forever rejects.
fn base_rank(f: &Ltl) -> u32 {
    let r = 2 * f.size() as u32;
    if matches!(f, Ltl::U(..) | Ltl::Uinv(..)) {
        r + 1
    } else {
        r
    }
}

pub fn ltl_to_ara_with_closure(phi: &Ltl, alphabet: &Arc<Alphabet>) -> Result<Translation, Ltl2RaError> {
    if !phi.is_sentence() {
        return Err(Ltl2RaError::NotASentence);
    }
    let phi = nnf(phi);
    let mut b = Builder { alphabet, index: HashMap::new(), closure: Vec::new(), rank_of: HashMap::new() };
    b.add(&phi);
    b.add(&Ltl::True);
    b.add(&Ltl::False);
    let delta = b.closure.iter().map(|f| b.delta(f)).collect::<Result<Vec<_>, _>>()?;
    let rank = b.closure.iter().map(|f| b.rank_of.get(f).copied().unwrap_or_else(|| base_rank(f))).collect();

    // Height: longest chain of non-moving transitions below a location.
    let mut height: Vec<Option<u32>> = vec![None; delta.len()];
    fn h(q: Loc, delta: &[Trans], memo: &mut Vec<Option<u32>>) -> u32 {
        if let Some(v) = memo[q] {
            return v;
        }
        let t = delta[q];
        let v = if t.moves() {
            0
        } else {
            t.targets().into_iter().map(|p| h(p, delta, memo) + 1).max().unwrap_or(0)
        };
        memo[q] = Some(v);
        v
    }
    for q in 0..delta.len() {
        h(q, &delta, &mut height);
    }

    let automaton = RegisterAutomaton {
        alphabet: alphabet.clone(),
        names: (0..delta.len()).map(|i| format!("q{i}")).collect(),
        init: 0,
        registers: phi.max_register(),
        delta,
        rank,
        height: height.into_iter().map(|h| h.expect("computed")).collect(),
    };
    debug_assert!(automaton.validate().is_empty(), "{:?}", automaton.validate());
    Ok(Translation { automaton, closure: b.closure })
}
