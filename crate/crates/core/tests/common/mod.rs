//! Seeded random generators shared by the property suites and the
//! acceptance harness.
#![allow(dead_code)]

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use std::collections::HashSet;

use datawords::ca::{leq, step_dagger, step_incrementing, CaState, CounterAutomaton, Instr};
use datawords::fo::Fo;
use datawords::games::{Player, WeakGame};
use datawords::ltl::{classify, Ltl};
use datawords::ra::{RegisterAutomaton, Test, Trans};
use datawords::Alphabet;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ab() -> Arc<Alphabet> {
    Alphabet::from_chars("ab")
}

fn letter(r: &mut StdRng) -> Ltl {
    Ltl::atom(if r.random_bool(0.5) { "a" } else { "b" })
}

// ------------------------------------------------------------ formulas

/// A simple LTL↓₁(O_1) formula; `inside` allows ↑₁ leaves.
fn simple(r: &mut StdRng, depth: u32, inside: bool) -> Ltl {
    if depth == 0 || r.random_bool(0.3) {
        return match r.random_range(0..if inside { 4 } else { 3 }) {
            0 | 1 => letter(r),
            2 => Ltl::True,
            _ => Ltl::Reg(1),
        };
    }
    match r.random_range(0..5) {
        0 => Ltl::not(simple(r, depth - 1, inside)),
        1 => Ltl::and(simple(r, depth - 1, inside), simple(r, depth - 1, inside)),
        2 => Ltl::or(simple(r, depth - 1, inside), simple(r, depth - 1, inside)),
        _ => {
            let body = simple(r, depth - 1, true);
            let inner = match r.random_range(0..5) {
                0 => body,
                1 => Ltl::x(body),
                2 => Ltl::xinv(body),
                3 => Ltl::x_pow(2, Ltl::f(body)),
                _ => Ltl::x_pow(-2, Ltl::finv(body)),
            };
            Ltl::store(1, inner)
        }
    }
}

/// Simple LTL↓₁(O_1) sentences of size ≤ `max_size` mentioning a register.
pub fn simple_sentence(r: &mut StdRng, max_size: usize) -> Ltl {
    loop {
        let f = simple(r, 3, false);
        let info = classify(&f);
        if f.size() <= max_size && info.is_sentence && info.simple_m.is_some_and(|m| m <= 1) && info.max_register == 1
        {
            return f;
        }
    }
}

fn future(r: &mut StdRng, depth: u32, stored: bool) -> Ltl {
    if depth == 0 || r.random_bool(0.25) {
        return match r.random_range(0..if stored { 5 } else { 3 }) {
            0 | 1 => letter(r),
            2 => Ltl::True,
            _ => Ltl::Reg(1),
        };
    }
    match r.random_range(0..7) {
        0 => Ltl::not(future(r, depth - 1, stored)),
        1 => Ltl::and(future(r, depth - 1, stored), future(r, depth - 1, stored)),
        2 => Ltl::or(future(r, depth - 1, stored), future(r, depth - 1, stored)),
        3 => Ltl::x(future(r, depth - 1, stored)),
        4 => Ltl::u(future(r, depth - 1, stored), future(r, depth - 1, stored)),
        _ => Ltl::store(1, future(r, depth - 1, true)),
    }
}

/// LTL↓₁(X,U) sentences of size ≤ `max_size` (F and G appear as U and ¬).
pub fn xu_sentence(r: &mut StdRng, max_size: usize) -> Ltl {
    loop {
        let f = future(r, 4, false);
        if f.size() <= max_size && f.is_sentence() {
            return f;
        }
    }
}

fn fo_atom(r: &mut StdRng, vars: &[u32]) -> Fo {
    let x = vars[r.random_range(0..vars.len())];
    let y = vars[r.random_range(0..vars.len())];
    match r.random_range(0..6) {
        0 | 1 => Fo::Letter(if r.random_bool(0.5) { "a" } else { "b" }.into(), x),
        2 => Fo::Sim(x, y),
        3 => Fo::Lt(x, y),
        4 => Fo::Succ(x, y, 1),
        _ => Fo::Succ(x, y, 0),
    }
}

fn fo(r: &mut StdRng, depth: u32, bound: &[u32]) -> Fo {
    if r.random_bool(0.3) {
        return fo_atom(r, bound);
    }
    match r.random_range(0..5) {
        0 => Fo::not(fo(r, depth, bound)),
        1 => Fo::and(fo(r, depth, bound), fo(r, depth, bound)),
        2 => Fo::or(fo(r, depth, bound), fo(r, depth, bound)),
        _ if depth == 0 => fo_atom(r, bound),
        _ => {
            // the other variable is re-bound
            let x = if bound.contains(&1) && r.random_bool(0.5) { 0 } else { 1 };
            let inner = [0, 1];
            let body = fo(r, depth - 1, &inner);
            if r.random_bool(0.5) {
                Fo::exists(x, body)
            } else {
                Fo::forall(x, body)
            }
        }
    }
}

/// Two-variable formulas with free variable x0 only, quantifier depth ≤
/// `depth`, offsets ≤ 1 and at least one quantifier.
pub fn fo2_formula(r: &mut StdRng, depth: usize) -> Fo {
    loop {
        let f = fo(r, depth as u32, &[0]);
        let free_ok = f.free_vars().iter().all(|&x| x == 0);
        if free_ok && f.quantifier_depth() >= 1 && f.quantifier_depth() <= depth && f.size() <= 14 {
            return f;
        }
    }
}

// ------------------------------------------------------------ automata

/// Random valid one-register one-way nondeterministic automata over {a,b}:
/// ranks 1..=3 and heights 1..=3, every edge respecting both orders.
pub fn random_1nra(r: &mut StdRng, size: usize) -> RegisterAutomaton {
    let n = size + 2;
    let mut rank = vec![0u32, 0];
    // true/false sit below everything so every location has a target
    let mut height = vec![0u32, 0];
    for _ in 2..n {
        rank.push(r.random_range(1..=3));
        height.push(r.random_range(1..=3));
    }
    let mut delta = vec![Trans::True, Trans::False];
    for q in 2..n {
        let moving: Vec<usize> = (0..n).filter(|&p| rank[p] <= rank[q]).collect();
        let still: Vec<usize> = (0..n).filter(|&p| rank[p] <= rank[q] && height[p] < height[q]).collect();
        let pick = |r: &mut StdRng, c: &[usize]| c[r.random_range(0..c.len())];
        let kind = if still.is_empty() { r.random_range(0..2) } else { r.random_range(0..6) };
        let t = match kind {
            0 => Trans::X(pick(r, &moving)),
            1 => Trans::WX(pick(r, &moving)),
            2 => Trans::If(Test::Letter(r.random_range(0..2)), pick(r, &still), pick(r, &still)),
            3 => Trans::If(if r.random_bool(0.5) { Test::Reg(1) } else { Test::End }, pick(r, &still), pick(r, &still)),
            4 => Trans::Store(1, pick(r, &still)),
            _ => Trans::Or(pick(r, &still), pick(r, &still)),
        };
        delta.push(t);
    }
    RegisterAutomaton {
        alphabet: ab(),
        names: (0..n).map(|q| format!("q{q}")).collect(),
        init: r.random_range(2..n),
        registers: 1,
        delta,
        rank,
        height,
    }
}

/// Random counter automata over {a,b} with ε-transitions never entering
/// accepting locations.
pub fn random_ca(r: &mut StdRng, counters: u32, locations: usize, transitions: usize) -> CounterAutomaton {
    let mut c = CounterAutomaton::new(ab(), counters, "l0", r.random_bool(0.3));
    for q in 1..locations {
        c.add_location(format!("l{q}"), r.random_bool(0.4));
    }
    for _ in 0..transitions {
        let from = r.random_range(0..locations);
        let to = r.random_range(0..locations);
        let counter = r.random_range(1..=counters);
        let instr = match r.random_range(0..3) {
            0 => Instr::inc(counter),
            1 => Instr::dec(counter),
            _ => Instr::ifz(counter),
        };
        let letter = if c.accepting[to] || r.random_bool(0.8) { Some(r.random_range(0..2)) } else { None };
        c.add(from, letter, instr, to);
    }
    c
}

/// Random weak games whose ranks never increase along edges.
pub fn random_game(r: &mut StdRng, n: usize) -> WeakGame {
    let mut g = WeakGame::new();
    let ranks: Vec<u32> = (0..n).map(|_| r.random_range(0..4)).collect();
    for (p, &k) in ranks.iter().enumerate() {
        let owner = if r.random_bool(0.5) { Player::P1 } else { Player::P2 };
        g.add_position(owner, k, format!("p{p}"));
    }
    for p in 0..n {
        let ok: Vec<usize> = (0..n).filter(|&q| ranks[q] <= ranks[p]).collect();
        for _ in 0..r.random_range(0..=2) {
            g.add_edge(p, ok[r.random_range(0..ok.len())]);
        }
    }
    g
}

/// The machines of the semantic suites: 1–2 counters, ≤ 3 locations.
pub fn small_cas(n: u64) -> impl Iterator<Item = CounterAutomaton> {
    (0..n).map(|seed| {
        let mut r = rng(seed);
        let counters = r.random_range(1..=2);
        let locations = r.random_range(1..=3);
        let transitions = r.random_range(1..=5);
        random_ca(&mut r, counters, locations, transitions)
    })
}

fn valuations(counters: u32, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..counters {
        out = out.into_iter().flat_map(|p: Vec<u32>| (0..=cap).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

fn states(ca: &CounterAutomaton, cap: u32) -> Vec<CaState> {
    (0..ca.num_locations()).flat_map(|loc| valuations(ca.counters, cap).into_iter().map(move |v| CaState { loc, v })).collect()
}

/// Smaller valuations can take every erroneous step larger ones can.
pub fn simulates_downwards(ca: &CounterAutomaton, cap: u32) -> bool {
    states(ca, cap).iter().all(|s1| {
        let big = step_dagger(ca, s1, cap);
        valuations(ca.counters, cap)
            .into_iter()
            .filter(|v2| leq(v2, &s1.v))
            .all(|v| big.is_subset(&step_dagger(ca, &CaState { loc: s1.loc, v }, cap)))
    })
}

/// Erroneous steps are exactly the upward closure of minimal-error steps.
pub fn minimal_errors_suffice(ca: &CounterAutomaton, cap: u32) -> bool {
    states(ca, cap).iter().all(|s| {
        let mut closure = HashSet::new();
        for (l, i, t) in step_incrementing(ca, s) {
            if t.v.iter().all(|&x| x <= cap) {
                for v in valuations(ca.counters, cap).into_iter().filter(|v| leq(&t.v, v)) {
                    closure.insert((l, i, CaState { loc: t.loc, v }));
                }
            }
        }
        step_dagger(ca, s, cap) == closure
    })
}
