//! Counter automata with ε-transitions and zero tests, under exact (Minsky)
//! or incrementing semantics.
//!
//! Incrementing steps are explored in minimal-error form: `dec` on zero
//! leaves the counter at zero, and no counter is ever bumped spontaneously.
//! Every incrementing successor is at or above a minimal-error successor, and
//! smaller states simulate the futures of larger ones, so searching the
//! minimal-error graph with subsumption is complete.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::words::{Alphabet, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("ε-transition from {from} enters accepting location {to}")]
    EpsilonIntoAccepting { from: String, to: String },
    #[error("counter {0} out of range")]
    CounterOutOfRange(u32),
    #[error("location index {0} out of range")]
    UnknownLocation(usize),
    #[error("gadget source must be a deterministic ε-free 2-counter automaton over one letter: {0}")]
    NotGadgetSource(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Inc,
    Dec,
    Ifz,
}

/// An instruction on a 1-based counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instr {
    pub op: Op,
    pub counter: u32,
}

impl Instr {
    pub fn inc(c: u32) -> Self {
        Instr { op: Op::Inc, counter: c }
    }
    pub fn dec(c: u32) -> Self {
        Instr { op: Op::Dec, counter: c }
    }
    pub fn ifz(c: u32) -> Self {
        Instr { op: Op::Ifz, counter: c }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Op::Inc => "inc",
            Op::Dec => "dec",
            Op::Ifz => "ifz",
        };
        write!(f, "{op} {}", self.counter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaTrans {
    pub from: usize,
    pub letter: Option<Sym>,
    pub instr: Instr,
    pub to: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    Minsky,
    Incrementing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaState {
    pub loc: usize,
    pub v: Vec<u32>,
}

/// An ultimately periodic word `stem cycle^ω` with the state the cycle
/// returns below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<Sym>,
    pub cycle: Vec<Sym>,
    pub anchor: CaState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Word(Vec<Sym>),
    Lasso(Lasso),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    /// The whole (subsumption-reduced) search space was explored.
    Exhausted,
    /// The tree procedure for recurrence terminated.
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriState {
    Empty(EmptyReason),
    Nonempty(Witness),
    Unknown,
}

impl TriState {
    pub fn is_empty(&self) -> bool {
        matches!(self, TriState::Empty(_))
    }
    pub fn is_nonempty(&self) -> bool {
        matches!(self, TriState::Nonempty(_))
    }
}

#[derive(Debug, Clone)]
pub struct CounterAutomaton {
    pub alphabet: Arc<Alphabet>,
    pub names: Vec<String>,
    pub init: usize,
    pub counters: u32,
    pub delta: Vec<CaTrans>,
    pub accepting: Vec<bool>,
}

impl CounterAutomaton {
    /// An automaton with a single initial location named `init`.
    pub fn new(alphabet: Arc<Alphabet>, counters: u32, init: &str, init_accepting: bool) -> Self {
        CounterAutomaton {
            alphabet,
            names: vec![init.to_string()],
            init: 0,
            counters,
            delta: Vec::new(),
            accepting: vec![init_accepting],
        }
    }

    pub fn add_location(&mut self, name: impl Into<String>, accepting: bool) -> usize {
        self.names.push(name.into());
        self.accepting.push(accepting);
        self.names.len() - 1
    }

    pub fn loc(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn add(&mut self, from: usize, letter: Option<Sym>, instr: Instr, to: usize) {
        self.delta.push(CaTrans { from, letter, instr, to });
    }

    /// Test for nonzero: a decrement followed by an ε-increment through a
    /// fresh intermediate location.
    pub fn add_ifnz(&mut self, from: usize, letter: Option<Sym>, c: u32, to: usize) {
        let mid = self.add_location(format!("{}_{}", self.names[from], self.delta.len()), false);
        self.add(from, letter, Instr::dec(c), mid);
        self.add(mid, None, Instr::inc(c), to);
    }

    pub fn num_locations(&self) -> usize {
        self.names.len()
    }

    pub fn validate(&self) -> Result<(), CaError> {
        let n = self.num_locations();
        if self.init >= n {
            return Err(CaError::UnknownLocation(self.init));
        }
        for t in &self.delta {
            for q in [t.from, t.to] {
                if q >= n {
                    return Err(CaError::UnknownLocation(q));
                }
            }
            if t.instr.counter == 0 || t.instr.counter > self.counters {
                return Err(CaError::CounterOutOfRange(t.instr.counter));
            }
            if t.letter.is_none() && self.accepting[t.to] {
                return Err(CaError::EpsilonIntoAccepting {
                    from: self.names[t.from].clone(),
                    to: self.names[t.to].clone(),
                });
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> CaState {
        CaState { loc: self.init, v: vec![0; self.counters as usize] }
    }

    fn outgoing(&self) -> Vec<Vec<CaTrans>> {
        let mut out = vec![Vec::new(); self.num_locations()];
        for t in &self.delta {
            out[t.from].push(*t);
        }
        out
    }

    pub fn word_string(&self, w: &[Sym]) -> String {
        w.iter().map(|&s| self.alphabet.name(s)).collect::<Vec<_>>().join(" ")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ca {\n  rankdir=LR;\n");
        for (q, name) in self.names.iter().enumerate() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            out.push_str(&format!("  n{q} [label=\"{}\", shape={shape}];\n", name.replace('"', "\\\"")));
        }
        out.push_str(&format!("  start [shape=point];\n  start -> n{};\n", self.init));
        for t in &self.delta {
            let letter = t.letter.map_or("ε", |s| self.alphabet.name(s));
            out.push_str(&format!("  n{} -> n{} [label=\"{letter} / {}\"];\n", t.from, t.to, t.instr));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for CounterAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet.names().join(" "))?;
        writeln!(f, "counters: {}", self.counters)?;
        writeln!(f, "init: {}", self.names[self.init])?;
        let acc: Vec<&str> =
            (0..self.num_locations()).filter(|&q| self.accepting[q]).map(|q| self.names[q].as_str()).collect();
        writeln!(f, "accepting: {}", acc.join(" "))?;
        for t in &self.delta {
            let letter = t.letter.map_or("eps", |s| self.alphabet.name(s));
            writeln!(f, "{} {} {} {}", self.names[t.from], letter, t.instr, self.names[t.to])?;
        }
        Ok(())
    }
}

/// Parses the line format `from letter|eps inc|dec|ifz|ifnz counter to`
/// under `alphabet:`, `counters:`, `init:` and `accepting:` headers.
pub fn parse_ca(text: &str) -> Result<CounterAutomaton, CaError> {
    let mut alphabet = None;
    let mut counters = None;
    let mut init = None;
    let mut accepting: Vec<String> = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CaError::Syntax { line: i + 1, msg };
        if let Some((key, rest)) = line.split_once(':') {
            let rest = rest.trim();
            match key.trim() {
                "alphabet" => {
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    alphabet = Some(Alphabet::new(&names).map_err(|e| err(e.to_string()))?);
                }
                "counters" => counters = Some(rest.parse::<u32>().map_err(|e| err(e.to_string()))?),
                "init" => init = Some(rest.to_string()),
                "accepting" => accepting = rest.split_whitespace().map(str::to_string).collect(),
                other => return Err(err(format!("unknown header `{other}`"))),
            }
        } else {
            lines.push((i + 1, line.to_string()));
        }
    }
    let missing = |what: &str| CaError::Syntax { line: 0, msg: format!("missing `{what}:` header") };
    let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    let counters = counters.ok_or_else(|| missing("counters"))?;
    let init = init.ok_or_else(|| missing("init"))?;
    let mut ca = CounterAutomaton::new(alphabet.clone(), counters, &init, accepting.contains(&init));
    let loc = |ca: &mut CounterAutomaton, name: &str| match ca.loc(name) {
        Some(q) => q,
        None => ca.add_location(name, accepting.iter().any(|a| a == name)),
    };
    for (line, text) in lines {
        let err = |msg: &str| CaError::Syntax { line, msg: msg.to_string() };
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [from, letter, op, c, to] = parts[..] else {
            return Err(err("expected `from letter op counter to`"));
        };
        let letter = match letter {
            "eps" | "ε" => None,
            l => Some(alphabet.lookup(l).ok_or_else(|| err(&format!("unknown letter `{l}`")))?),
        };
        let c: u32 = c.parse().map_err(|_| err("bad counter index"))?;
        let (from, to) = (loc(&mut ca, from), loc(&mut ca, to));
        match op {
            "inc" => ca.add(from, letter, Instr::inc(c), to),
            "dec" => ca.add(from, letter, Instr::dec(c), to),
            "ifz" => ca.add(from, letter, Instr::ifz(c), to),
            "ifnz" => ca.add_ifnz(from, letter, c, to),
            _ => return Err(err("unknown instruction")),
        }
    }
    for a in &accepting {
        if ca.loc(a).is_none() {
            ca.add_location(a.clone(), true);
        }
    }
    ca.validate()?;
    Ok(ca)
}

fn apply(instr: Instr, v: &[u32], sem: Semantics) -> Option<Vec<u32>> {
    let c = instr.counter as usize - 1;
    let mut v = v.to_vec();
    match instr.op {
        Op::Inc => v[c] += 1,
        Op::Dec => match sem {
            Semantics::Minsky if v[c] == 0 => return None,
            _ => v[c] = v[c].saturating_sub(1),
        },
        Op::Ifz => {
            if v[c] != 0 {
                return None;
            }
        }
    }
    Some(v)
}

fn step_with(ca: &CounterAutomaton, s: &CaState, sem: Semantics) -> Vec<(Option<Sym>, Instr, CaState)> {
    ca.delta
        .iter()
        .filter(|t| t.from == s.loc)
        .filter_map(|t| apply(t.instr, &s.v, sem).map(|v| (t.letter, t.instr, CaState { loc: t.to, v })))
        .collect()
}

pub fn step_minsky(ca: &CounterAutomaton, s: &CaState) -> Vec<(Option<Sym>, Instr, CaState)> {
    step_with(ca, s, Semantics::Minsky)
}

/// Minimal-error incrementing successors.
pub fn step_incrementing(ca: &CounterAutomaton, s: &CaState) -> Vec<(Option<Sym>, Instr, CaState)> {
    step_with(ca, s, Semantics::Incrementing)
}

fn below_cap(cap: u32, lo: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &l in lo {
        out = out
            .into_iter()
            .flat_map(|p| {
                (l..=cap.max(l)).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// The full erroneous step relation, with every valuation involved capped.
pub fn step_dagger(ca: &CounterAutomaton, s: &CaState, cap: u32) -> HashSet<(Option<Sym>, Instr, CaState)> {
    let mut out = HashSet::new();
    for vd in below_cap(cap, &s.v) {
        if vd.iter().any(|&x| x > cap) {
            continue;
        }
        for (letter, instr, t) in step_minsky(ca, &CaState { loc: s.loc, v: vd }) {
            if t.v.iter().any(|&x| x > cap) {
                continue;
            }
            for v2 in below_cap(cap, &t.v) {
                out.insert((letter, instr, CaState { loc: t.loc, v: v2 }));
            }
        }
    }
    out
}

pub fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Per-key sets of ≤-minimal valuations.
struct Antichain<K> {
    store: HashMap<K, Vec<Vec<u32>>>,
}

impl<K: std::hash::Hash + Eq> Antichain<K> {
    fn new() -> Self {
        Antichain { store: HashMap::new() }
    }

    /// Inserts `v` unless something recorded under `k` lies below it.
    fn insert(&mut self, k: K, v: &[u32]) -> bool {
        let set = self.store.entry(k).or_default();
        if set.iter().any(|u| leq(u, v)) {
            return false;
        }
        set.retain(|u| !leq(v, u));
        set.push(v.to_vec());
        true
    }
}

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Whether the automaton accepts the finite word. Complete for incrementing
/// semantics; for Minsky semantics `Unknown` when the budget runs out.
pub fn accepts_word(ca: &CounterAutomaton, w: &[Sym], sem: Semantics, budget: usize) -> TriState {
    if w.is_empty() {
        // A run is a nonempty sequence of transitions and ε never enters F.
        return TriState::Empty(EmptyReason::Exhausted);
    }
    let out = ca.outgoing();
    let mut anti: Antichain<(usize, usize)> = Antichain::new();
    let mut exact: HashSet<(usize, CaState)> = HashSet::new();
    let mut fresh = |pos: usize, s: &CaState| match sem {
        Semantics::Incrementing => anti.insert((pos, s.loc), &s.v),
        Semantics::Minsky => exact.insert((pos, s.clone())),
    };
    let start = ca.initial_state();
    fresh(0, &start);
    let mut queue = VecDeque::from([(0usize, start)]);
    let mut seen = 0usize;
    while let Some((pos, s)) = queue.pop_front() {
        seen += 1;
        if seen > budget {
            return TriState::Unknown;
        }
        for t in &out[s.loc] {
            let next_pos = match t.letter {
                None => pos,
                Some(l) if pos < w.len() && w[pos] == l => pos + 1,
                Some(_) => continue,
            };
            let Some(v) = apply(t.instr, &s.v, sem) else { continue };
            if next_pos == w.len() && ca.accepting[t.to] && t.letter.is_some() {
                return TriState::Nonempty(Witness::Word(w.to_vec()));
            }
            let n = CaState { loc: t.to, v };
            if fresh(next_pos, &n) {
                queue.push_back((next_pos, n));
            }
        }
    }
    TriState::Empty(EmptyReason::Exhausted)
}

/// Incrementing acceptance of a finite word (always decided).
pub fn accepts_incrementing(ca: &CounterAutomaton, w: &[Sym]) -> bool {
    accepts_word(ca, w, Semantics::Incrementing, usize::MAX).is_nonempty()
}

/// Complete nonemptiness over finite words for incrementing semantics, with
/// a shortest (then lexicographically least) witness.
pub fn nonempty_finite_incrementing(ca: &CounterAutomaton) -> Option<Vec<Sym>> {
    let out = ca.outgoing();
    let mut anti: Antichain<usize> = Antichain::new();
    // (state, parent, letter read on the way in)
    let mut nodes: Vec<(CaState, Option<usize>, Option<Sym>)> = Vec::new();
    let start = ca.initial_state();
    anti.insert(start.loc, &start.v);
    nodes.push((start, None, None));
    let mut layer = vec![0usize];
    let word_of = |nodes: &Vec<(CaState, Option<usize>, Option<Sym>)>, mut i: usize| {
        let mut w = Vec::new();
        loop {
            if let Some(l) = nodes[i].2 {
                w.push(l);
            }
            match nodes[i].1 {
                Some(p) => i = p,
                None => break,
            }
        }
        w.reverse();
        w
    };
    while !layer.is_empty() {
        let mut queue: VecDeque<usize> = layer.into_iter().collect();
        let mut next = Vec::new();
        let mut hits: Vec<Vec<Sym>> = Vec::new();
        while let Some(i) = queue.pop_front() {
            let s = nodes[i].0.clone();
            for t in &out[s.loc] {
                let Some(v) = apply(t.instr, &s.v, Semantics::Incrementing) else { continue };
                if let (Some(l), true) = (t.letter, ca.accepting[t.to]) {
                    let mut w = word_of(&nodes, i);
                    w.push(l);
                    hits.push(w);
                }
                if anti.insert(t.to, &v) {
                    nodes.push((CaState { loc: t.to, v }, Some(i), t.letter));
                    let j = nodes.len() - 1;
                    if t.letter.is_none() {
                        queue.push_back(j);
                    } else {
                        next.push(j);
                    }
                }
            }
        }
        if let Some(w) = hits.into_iter().min() {
            debug_assert!(accepts_incrementing(ca, &w));
            return Some(w);
        }
        layer = next;
    }
    None
}

/// All words over `k` letters of length 1..=max_len, shortest first.
pub fn plain_words(k: usize, max_len: usize) -> Vec<Vec<Sym>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Sym>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut w = w.clone();
                    w.push(a as Sym);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Checks a lasso under incrementing semantics: the stem reaches a state at
/// or below the anchor, and the cycle leads from the anchor back to or below
/// it through an accepting location.
pub fn verify_lasso(ca: &CounterAutomaton, lasso: &Lasso) -> bool {
    if lasso.cycle.is_empty() {
        return false;
    }
    let out = ca.outgoing();
    // Minimal states after the stem.
    let mut anti: Antichain<(usize, usize)> = Antichain::new();
    let start = ca.initial_state();
    anti.insert((0, start.loc), &start.v);
    let mut queue = VecDeque::from([(0usize, start)]);
    let mut reached = false;
    while let Some((pos, s)) = queue.pop_front() {
        if pos == lasso.stem.len() && s.loc == lasso.anchor.loc && leq(&s.v, &lasso.anchor.v) {
            reached = true;
            break;
        }
        for t in &out[s.loc] {
            let np = match t.letter {
                None => pos,
                Some(l) if pos < lasso.stem.len() && lasso.stem[pos] == l => pos + 1,
                Some(_) => continue,
            };
            let Some(v) = apply(t.instr, &s.v, Semantics::Incrementing) else { continue };
            if anti.insert((np, t.to), &v) {
                queue.push_back((np, CaState { loc: t.to, v }));
            }
        }
    }
    if !reached {
        return false;
    }
    let mut anti: Antichain<(usize, usize, bool)> = Antichain::new();
    let start = lasso.anchor.clone();
    anti.insert((0, start.loc, false), &start.v);
    let mut queue = VecDeque::from([(0usize, start, false)]);
    while let Some((pos, s, seen_f)) = queue.pop_front() {
        for t in &out[s.loc] {
            let np = match t.letter {
                None => pos,
                Some(l) if pos < lasso.cycle.len() && lasso.cycle[pos] == l => pos + 1,
                Some(_) => continue,
            };
            let Some(v) = apply(t.instr, &s.v, Semantics::Incrementing) else { continue };
            let f = seen_f || ca.accepting[t.to];
            if np == lasso.cycle.len() && f && t.to == lasso.anchor.loc && leq(&v, &lasso.anchor.v) {
                return true;
            }
            if anti.insert((np, t.to, f), &v) {
                queue.push_back((np, CaState { loc: t.to, v }, f));
            }
        }
    }
    false
}

/// The tree procedure: explore all minimal-error runs, cutting a branch at an
/// accepting location or above an ancestor, and restarting from every
/// accepting leaf. `Some(true)` when it terminates, `None` on budget.
pub fn recurrence_refuted(ca: &CounterAutomaton, budget: usize) -> Option<bool> {
    let out = ca.outgoing();
    // (state, parent, whether this node roots a tree)
    let mut nodes: Vec<(CaState, Option<usize>, bool)> = vec![(ca.initial_state(), None, true)];
    let mut stack = vec![0usize];
    while let Some(n) = stack.pop() {
        let s = nodes[n].0.clone();
        for t in &out[s.loc] {
            let Some(v) = apply(t.instr, &s.v, Semantics::Incrementing) else { continue };
            let child = CaState { loc: t.to, v };
            let root = ca.accepting[t.to] && t.letter.is_some();
            if !root {
                let mut a = Some(n);
                let mut subsumed = false;
                while let Some(i) = a {
                    let (st, parent, is_root) = &nodes[i];
                    if st.loc == child.loc && leq(&st.v, &child.v) {
                        subsumed = true;
                        break;
                    }
                    a = if *is_root { None } else { *parent };
                }
                if subsumed {
                    continue;
                }
            }
            if nodes.len() >= budget {
                return None;
            }
            nodes.push((child, Some(n), root));
            stack.push(nodes.len() - 1);
        }
    }
    Some(true)
}

fn capped_reach(
    ca: &CounterAutomaton,
    out: &[Vec<CaTrans>],
    start: (CaState, bool),
    cap: u32,
    mut goal: impl FnMut(&CaState, bool) -> bool,
    budget: &mut usize,
) -> Option<Option<Vec<Sym>>> {
    let mut parent: HashMap<(CaState, bool), ((CaState, bool), Option<Sym>)> = HashMap::new();
    let mut seen: HashSet<(CaState, bool)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some((s, f)) = queue.pop_front() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        for t in &out[s.loc] {
            let Some(v) = apply(t.instr, &s.v, Semantics::Incrementing) else { continue };
            if v.iter().any(|&x| x > cap) {
                continue;
            }
            let n = (CaState { loc: t.to, v }, f || ca.accepting[t.to]);
            let done = goal(&n.0, n.1);
            if seen.insert(n.clone()) || done {
                parent.entry(n.clone()).or_insert(((s.clone(), f), t.letter));
                if done {
                    let mut w = vec![t.letter];
                    let mut at = (s.clone(), f);
                    while at != start {
                        let (p, l) = parent[&at].clone();
                        w.push(l);
                        at = p;
                    }
                    w.reverse();
                    return Some(Some(w.into_iter().flatten().collect()));
                }
                queue.push_back(n);
            }
        }
    }
    Some(None)
}

/// Sound search for a pumpable accepting cycle with counters bounded by `cap`.
pub fn find_lasso(ca: &CounterAutomaton, cap: u32, budget: &mut usize) -> Option<Option<Lasso>> {
    let out = ca.outgoing();
    let start = ca.initial_state();
    let mut reach = vec![(start.clone(), Vec::new())];
    let mut parent: HashMap<CaState, (CaState, Option<Sym>)> = HashMap::new();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(s) = queue.pop_front() {
        for t in &out[s.loc] {
            let Some(v) = apply(t.instr, &s.v, Semantics::Incrementing) else { continue };
            if v.iter().any(|&x| x > cap) {
                continue;
            }
            let n = CaState { loc: t.to, v };
            if seen.insert(n.clone()) {
                parent.insert(n.clone(), (s.clone(), t.letter));
                let mut w = Vec::new();
                let mut at = n.clone();
                while let Some((p, l)) = parent.get(&at) {
                    w.extend(l);
                    at = p.clone();
                }
                w.reverse();
                reach.push((n.clone(), w));
                queue.push_back(n);
            }
        }
    }
    for (anchor, stem) in reach {
        let (loc, v) = (anchor.loc, anchor.v.clone());
        let found = capped_reach(ca, &out, (anchor.clone(), false), cap, |s, f| f && s.loc == loc && leq(&s.v, &v), budget)?;
        if let Some(cycle) = found {
            return Some(Some(Lasso { stem, cycle, anchor }));
        }
    }
    Some(None)
}

/// Büchi nonemptiness for incrementing semantics: `Empty` when the tree
/// procedure terminates, `Nonempty` with a lasso when one is found with small
/// counters, `Unknown` otherwise.
pub fn nonempty_infinite_incrementing(ca: &CounterAutomaton, budget: usize) -> TriState {
    let mut spent = budget / 4;
    for cap in 0..=2 {
        match find_lasso(ca, cap, &mut spent) {
            Some(Some(l)) => return TriState::Nonempty(Witness::Lasso(l)),
            Some(None) => {}
            None => break,
        }
    }
    if recurrence_refuted(ca, budget / 2).is_some() {
        return TriState::Empty(EmptyReason::Refuted);
    }
    let mut spent = budget / 4;
    for cap in 3.. {
        match find_lasso(ca, cap, &mut spent) {
            Some(Some(l)) => return TriState::Nonempty(Witness::Lasso(l)),
            Some(None) => {}
            None => break,
        }
    }
    TriState::Unknown
}

/// Exact search under Minsky semantics; never answers `Empty`.
pub fn nonempty_minsky_bounded(ca: &CounterAutomaton, kind: WordKind, budget: usize) -> TriState {
    let out = ca.outgoing();
    let start = ca.initial_state();
    let mut parent: HashMap<CaState, (CaState, Option<Sym>)> = HashMap::new();
    let mut order = vec![start.clone()];
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let path = |parent: &HashMap<CaState, (CaState, Option<Sym>)>, s: &CaState| {
        let mut w = Vec::new();
        let mut at = s.clone();
        while let Some((p, l)) = parent.get(&at) {
            w.extend(l);
            at = p.clone();
        }
        w.reverse();
        w
    };
    while let Some(s) = queue.pop_front() {
        if seen.len() > budget {
            break;
        }
        for t in &out[s.loc] {
            let Some(v) = apply(t.instr, &s.v, Semantics::Minsky) else { continue };
            let n = CaState { loc: t.to, v };
            if kind == WordKind::Finite && ca.accepting[t.to] && t.letter.is_some() {
                let mut w = path(&parent, &s);
                w.extend(t.letter);
                return TriState::Nonempty(Witness::Word(w));
            }
            if seen.insert(n.clone()) {
                parent.insert(n.clone(), (s.clone(), t.letter));
                order.push(n.clone());
                queue.push_back(n);
            }
        }
    }
    if kind == WordKind::Infinite {
        for anchor in order.iter().filter(|s| ca.accepting[s.loc]) {
            // Exact return to the anchor: pumpable without errors.
            let mut local: HashMap<CaState, (CaState, Option<Sym>)> = HashMap::new();
            let mut seen = HashSet::new();
            let mut queue = VecDeque::from([anchor.clone()]);
            while let Some(s) = queue.pop_front() {
                if seen.len() > budget {
                    break;
                }
                for t in &out[s.loc] {
                    let Some(v) = apply(t.instr, &s.v, Semantics::Minsky) else { continue };
                    let n = CaState { loc: t.to, v };
                    if n == *anchor {
                        let mut cycle = if s == *anchor { Vec::new() } else { path(&local, &s) };
                        cycle.extend(t.letter);
                        let stem = path(&parent, anchor);
                        return TriState::Nonempty(Witness::Lasso(Lasso { stem, cycle, anchor: anchor.clone() }));
                    }
                    if seen.insert(n.clone()) {
                        local.insert(n.clone(), (s.clone(), t.letter));
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    TriState::Unknown
}

/// Every `a` is followed by a separate later `b`; finite words.
pub fn fig_ca_fin() -> CounterAutomaton {
    let ab = Alphabet::from_chars("ab");
    let mut c = CounterAutomaton::new(ab, 1, "z", true);
    let z = 0;
    let i = c.add_location("i", false);
    let n = c.add_location("n", false);
    let (a, b) = (Some(0), Some(1));
    c.add(z, a, Instr::inc(1), n);
    c.add(z, b, Instr::ifz(1), z);
    c.add(n, a, Instr::inc(1), n);
    c.add_ifnz(n, b, 1, n);
    c.add(n, None, Instr::dec(1), i);
    c.add(i, b, Instr::ifz(1), z);
    c.add_ifnz(i, b, 1, n);
    c
}

/// The same property over infinite words, with two counters.
pub fn fig_ca_inf() -> CounterAutomaton {
    let ab = Alphabet::from_chars("ab");
    let mut c = CounterAutomaton::new(ab, 2, "1", false);
    let one = 0;
    let two = c.add_location("2", false);
    let (a, b) = (Some(0), Some(1));
    for (p, x, y, name) in [(one, 1u32, 2u32, "1"), (two, 2, 1, "2")] {
        let q = if p == one { two } else { one };
        let inc = c.add_location(format!("{name}i"), false);
        let dec = c.add_location(format!("{name}d"), false);
        let acc = c.add_location(format!("{x}{y}"), true);
        c.add(p, None, Instr::inc(x), inc);
        c.add_ifnz(inc, a, y, p);
        c.add(inc, a, Instr::ifz(y), acc);
        c.add(p, None, Instr::dec(x), dec);
        c.add(p, None, Instr::dec(y), dec);
        c.add_ifnz(dec, b, y, p);
        c.add(dec, b, Instr::ifz(y), acc);
        c.add_ifnz(p, b, y, p);
        c.add(p, b, Instr::ifz(y), acc);
        c.add(acc, None, Instr::ifz(y), q);
    }
    c
}

/// From a deterministic ε-free 2-counter Minsky automaton over one letter,
/// an incrementing 5-counter automaton that has an infinite accepting run
/// iff the source's unique run never reaches an accepting location.
///
/// It repeatedly simulates the source with a shrinking step allowance: `D`
/// counts rounds, `D'` is the allowance, and `C'` counts simulated steps.
pub fn recurrence_gadget(src: &CounterAutomaton) -> Result<CounterAutomaton, CaError> {
    let bad = |m: &str| Err(CaError::NotGadgetSource(m.to_string()));
    if src.counters != 2 || src.alphabet.len() != 1 {
        return bad("needs two counters and one letter");
    }
    if src.delta.iter().any(|t| t.letter.is_none()) {
        return bad("ε-transitions");
    }
    let out = src.outgoing();
    for (q, ts) in out.iter().enumerate() {
        let ok = match ts.as_slice() {
            [] => src.accepting[q],
            [t] => t.instr.op == Op::Inc,
            [s, t] => {
                s.instr.counter == t.instr.counter
                    && matches!((s.instr.op, t.instr.op), (Op::Dec, Op::Ifz) | (Op::Ifz, Op::Dec))
            }
            _ => false,
        };
        if !ok {
            return bad(&format!("location {} is not deterministic", src.names[q]));
        }
    }
    const C1: u32 = 1;
    const C2: u32 = 2;
    const CP: u32 = 3;
    const D: u32 = 4;
    const DP: u32 = 5;
    let a = Some(0);
    let mut g = CounterAutomaton::new(src.alphabet.clone(), 5, "top", false);
    let top = 0;
    let fresh = |g: &mut CounterAutomaton, n: &str| g.add_location(n, false);
    // D' := 0, then D' := D via C'.
    let copy = fresh(&mut g, "copy");
    g.add(top, a, Instr::dec(DP), top);
    g.add(top, a, Instr::ifz(DP), copy);
    let (c1, c2) = (fresh(&mut g, "copy1"), fresh(&mut g, "copy2"));
    g.add(copy, a, Instr::dec(D), c1);
    g.add(c1, a, Instr::inc(DP), c2);
    g.add(c2, a, Instr::inc(CP), copy);
    let back = fresh(&mut g, "back");
    g.add(copy, a, Instr::ifz(D), back);
    let b1 = fresh(&mut g, "back1");
    g.add(back, a, Instr::dec(CP), b1);
    g.add(b1, a, Instr::inc(D), back);
    let while_ = fresh(&mut g, "while");
    g.add(back, a, Instr::ifz(CP), while_);
    // Round over: D := D + 1 through the accepting location.
    let round = fresh(&mut g, "round");
    g.add(while_, a, Instr::ifz(DP), round);
    let acc = g.add_location("acc", true);
    g.add(round, a, Instr::inc(D), acc);
    g.add(acc, a, Instr::ifz(DP), top);
    // Simulation locations, one per source location.
    let sim: Vec<usize> = (0..src.num_locations()).map(|q| fresh(&mut g, &format!("sim.{}", src.names[q]))).collect();
    g.add_ifnz(while_, a, DP, sim[src.init]);
    let exit = fresh(&mut g, "exit");
    for (q, ts) in out.iter().enumerate() {
        // Accepting source locations have no successors: the gadget stops.
        if src.accepting[q] {
            continue;
        }
        for t in ts {
            let mut at = sim[q];
            // A spent allowance ends the simulation instead of blocking.
            let mut emit = |g: &mut CounterAutomaton, i: Instr| {
                if i == Instr::dec(DP) {
                    g.add(at, a, Instr::ifz(DP), exit);
                }
                let n = g.add_location(format!("s{}", g.num_locations()), false);
                g.add(at, a, i, n);
                at = n;
            };
            match t.instr.op {
                Op::Inc => {
                    emit(&mut g, t.instr);
                    emit(&mut g, Instr::dec(DP));
                }
                Op::Dec => {
                    emit(&mut g, t.instr);
                    emit(&mut g, Instr::inc(DP));
                }
                Op::Ifz => emit(&mut g, t.instr),
            }
            emit(&mut g, Instr::dec(DP));
            emit(&mut g, Instr::inc(CP));
            g.add(at, a, Instr::ifz(DP), exit);
            g.add_ifnz(at, a, DP, sim[t.to]);
        }
    }
    // D' := D' + C1 + C2 + C' - 1 and clear the three.
    let mut at = exit;
    for c in [C1, C2, CP] {
        let m = fresh(&mut g, &format!("drain{c}"));
        let next = fresh(&mut g, &format!("drained{c}"));
        g.add(at, a, Instr::dec(c), m);
        g.add(m, a, Instr::inc(DP), at);
        g.add(at, a, Instr::ifz(c), next);
        at = next;
    }
    g.add(at, a, Instr::dec(DP), while_);
    g.validate()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ca: &CounterAutomaton, s: &str) -> Vec<Sym> {
        s.chars().map(|c| ca.alphabet.lookup(&c.to_string()).unwrap()).collect()
    }

    #[test]
    fn step_examples() {
        let ab = Alphabet::from_chars("a");
        let mut c = CounterAutomaton::new(ab, 1, "q", false);
        c.add(0, Some(0), Instr::dec(1), 0);
        c.add(0, Some(0), Instr::ifz(1), 0);
        let zero = CaState { loc: 0, v: vec![0] };
        let m = step_minsky(&c, &zero);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].1, Instr::ifz(1));
        let i = step_incrementing(&c, &zero);
        assert_eq!(i.len(), 2);
        assert!(i.iter().all(|(_, _, s)| s.v == vec![0]));
        let one = CaState { loc: 0, v: vec![1] };
        assert!(step_incrementing(&c, &one).iter().all(|(_, i, _)| i.op != Op::Ifz));
        c.add(0, Some(0), Instr::inc(1), 0);
        let two = CaState { loc: 0, v: vec![2] };
        assert!(step_minsky(&c, &two).iter().any(|(_, i, s)| i.op == Op::Inc && s.v == vec![3]));
    }

    #[test]
    fn text_round_trip() {
        let c = fig_ca_fin();
        let text = c.to_string();
        let d = parse_ca(&text).unwrap();
        assert_eq!(d.to_string(), text);
        let e = parse_ca("alphabet: a\ncounters: 1\ninit: p\naccepting: q\np eps inc 1 q\n");
        assert!(matches!(e, Err(CaError::EpsilonIntoAccepting { .. })));
    }

    #[test]
    fn fin_examples() {
        let c = fig_ca_fin();
        let inc = Semantics::Incrementing;
        assert!(accepts_word(&c, &w(&c, "ab"), inc, DEFAULT_BUDGET).is_nonempty());
        assert!(accepts_word(&c, &w(&c, "a"), inc, DEFAULT_BUDGET).is_empty());
        assert!(accepts_word(&c, &w(&c, "b"), inc, DEFAULT_BUDGET).is_nonempty());
        assert_eq!(nonempty_finite_incrementing(&c), Some(w(&c, "b")));
        assert!(nonempty_minsky_bounded(&c, WordKind::Finite, 100).is_nonempty());
    }

    #[test]
    fn ifz_after_genuine_increment_is_empty() {
        let ab = Alphabet::from_chars("a");
        let mut c = CounterAutomaton::new(ab, 1, "p", false);
        let q = c.add_location("q", false);
        let f = c.add_location("f", true);
        c.add(0, Some(0), Instr::inc(1), q);
        c.add(q, Some(0), Instr::ifz(1), f);
        assert_eq!(nonempty_finite_incrementing(&c), None);
        assert!(!nonempty_minsky_bounded(&c, WordKind::Finite, 1000).is_nonempty());
    }

    #[test]
    fn minsky_depth_three() {
        let ab = Alphabet::from_chars("a");
        let mut c = CounterAutomaton::new(ab, 2, "p", false);
        let q = c.add_location("q", false);
        let r = c.add_location("r", false);
        let f = c.add_location("f", true);
        c.add(0, Some(0), Instr::inc(2), q);
        c.add(q, Some(0), Instr::dec(2), r);
        c.add(r, Some(0), Instr::ifz(2), f);
        assert_eq!(nonempty_minsky_bounded(&c, WordKind::Finite, 100), TriState::Nonempty(Witness::Word(vec![0; 3])));
        let mut none = c.clone();
        none.accepting = vec![false; 4];
        assert_eq!(nonempty_minsky_bounded(&none, WordKind::Finite, 100), TriState::Unknown);
    }

    #[test]
    fn inf_has_lasso() {
        let c = fig_ca_inf();
        match nonempty_infinite_incrementing(&c, 200_000) {
            TriState::Nonempty(Witness::Lasso(l)) => assert!(verify_lasso(&c, &l)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unreachable_accepting_is_refuted() {
        let ab = Alphabet::from_chars("a");
        let mut c = CounterAutomaton::new(ab, 1, "p", false);
        c.add_location("f", true);
        c.add(0, Some(0), Instr::inc(1), 0);
        assert_eq!(nonempty_infinite_incrementing(&c, 10_000), TriState::Empty(EmptyReason::Refuted));
    }
}

#[cfg(test)]
mod gadget_tests {
    use super::*;

    fn accepting_source() -> CounterAutomaton {
        // inc 1; then dec 1 reaches the accepting location.
        let a = Alphabet::from_chars("a");
        let mut c = CounterAutomaton::new(a, 2, "p0", false);
        let p1 = c.add_location("p1", false);
        let p2 = c.add_location("p2", true);
        c.add(0, Some(0), Instr::inc(1), p1);
        c.add(p1, Some(0), Instr::dec(1), p2);
        c.add(p1, Some(0), Instr::ifz(1), p1);
        c
    }

    #[test]
    fn gadget_of_accepting_machine_is_empty() {
        let g = recurrence_gadget(&accepting_source()).unwrap();
        let t = std::time::Instant::now();
        let r = nonempty_infinite_incrementing(&g, 2_000_000);
        eprintln!("{r:?} in {:?}", t.elapsed());
        assert_eq!(r, TriState::Empty(EmptyReason::Refuted));
    }

    #[test]
    fn gadget_of_looping_machine_is_not_refuted() {
        let a = Alphabet::from_chars("a");
        let mut c = CounterAutomaton::new(a, 2, "p0", false);
        c.add(0, Some(0), Instr::inc(1), 0);
        let g = recurrence_gadget(&c).unwrap();
        assert!(!nonempty_infinite_incrementing(&g, 200_000).is_empty());
    }
}
