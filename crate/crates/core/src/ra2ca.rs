//! One-way alternating automata with one register, compiled into
//! incrementing counter automata recognising the string projections of
//! their languages.
//!
//! A position's obligations are abstracted as the letter, whether the
//! position is last, the locations whose register holds the current class,
//! those with an empty register, and for every other class the set of
//! locations remembering it, counted per location set. The counter automaton
//! guesses a sequence of such abstract sets, each one a big-step successor
//! of the previous, keeping the counts in counters.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::ca::{CounterAutomaton, Instr};
use crate::ra::{AraState, Loc, RegisterAutomaton, Test, Trans};
use crate::words::{DataWord, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Ra2CaError {
    #[error("automaton must be one-way alternating with at most one register and no `beg` test")]
    ClassMismatch,
    #[error("automaton has more than {0} locations")]
    TooManyLocations(u32),
    #[error("a class count exceeds the cap {0}")]
    CapExceeded(u32),
}

/// Location sets are bitmasks over location indices.
pub type LocSet = u128;

fn bit(q: Loc) -> LocSet {
    1 << q
}

fn members(mut s: LocSet) -> impl Iterator<Item = Loc> {
    std::iter::from_fn(move || {
        (s != 0).then(|| {
            let q = s.trailing_zeros() as Loc;
            s &= s - 1;
            q
        })
    })
}

pub fn loc_set_string(a: &RegisterAutomaton, s: LocSet) -> String {
    let names: Vec<&str> = members(s).map(|q| a.names[q].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn check(a: &RegisterAutomaton) -> Result<(), Ra2CaError> {
    let c = a.classify();
    let beg = a.delta.iter().any(|t| matches!(t, Trans::If(Test::Beg, ..)));
    if !c.one_way || a.registers > 1 || beg {
        return Err(Ra2CaError::ClassMismatch);
    }
    if a.delta.len() > LocSet::BITS as usize {
        return Err(Ra2CaError::TooManyLocations(LocSet::BITS));
    }
    Ok(())
}

/// Big-step successor pairs ⟨next positions keeping the register, next
/// positions whose register holds the current class⟩, by recursion on height.
pub struct SuccTable<'a> {
    a: &'a RegisterAutomaton,
    memo: HashMap<(Sym, bool, bool, Loc), BTreeSet<(LocSet, LocSet)>>,
}

impl<'a> SuccTable<'a> {
    pub fn new(a: &'a RegisterAutomaton) -> Result<Self, Ra2CaError> {
        check(a)?;
        Ok(SuccTable { a, memo: HashMap::new() })
    }

    pub fn get(&mut self, letter: Sym, ee: bool, uu: bool, q: Loc) -> BTreeSet<(LocSet, LocSet)> {
        if let Some(s) = self.memo.get(&(letter, ee, uu, q)) {
            return s.clone();
        }
        let out = match self.a.delta[q] {
            Trans::If(t, y, n) => {
                let holds = match t {
                    Test::Letter(l) => l == letter,
                    Test::End => ee,
                    Test::Reg(_) => uu,
                    Test::Beg => unreachable!("rejected up front"),
                };
                self.get(letter, ee, uu, if holds { y } else { n })
            }
            Trans::Store(_, p) => self.get(letter, ee, true, p),
            Trans::And(p, r) => {
                let (x, y) = (self.get(letter, ee, uu, p), self.get(letter, ee, uu, r));
                x.iter().flat_map(|&(a1, a2)| y.iter().map(move |&(b1, b2)| (a1 | b1, a2 | b2))).collect()
            }
            Trans::Or(p, r) => {
                let mut x = self.get(letter, ee, uu, p);
                x.extend(self.get(letter, ee, uu, r));
                x
            }
            Trans::True => BTreeSet::from([(0, 0)]),
            Trans::False => BTreeSet::new(),
            Trans::X(p) | Trans::WX(p) if !ee => {
                BTreeSet::from([if uu { (0, bit(p)) } else { (bit(p), 0) }])
            }
            Trans::X(_) => BTreeSet::new(),
            Trans::WX(_) => BTreeSet::from([(0, 0)]),
            Trans::Xinv(_) | Trans::WXinv(_) => unreachable!("rejected up front"),
        };
        self.memo.insert((letter, ee, uu, q), out.clone());
        out
    }

    /// ⟨∪₁f, ∪₂f⟩ over all maps f choosing a successor pair for each member.
    pub fn unions(&mut self, letter: Sym, ee: bool, uu: bool, qs: LocSet) -> BTreeSet<(LocSet, LocSet)> {
        let mut acc = BTreeSet::from([(0, 0)]);
        for q in members(qs) {
            let s = self.get(letter, ee, uu, q);
            acc = acc.iter().flat_map(|&(a1, a2)| s.iter().map(move |&(b1, b2)| (a1 | b1, a2 | b2))).collect();
        }
        acc
    }
}

pub fn succ_table(
    a: &RegisterAutomaton,
    letter: Sym,
    ee: bool,
    uu: bool,
    q: Loc,
) -> Result<BTreeSet<(LocSet, LocSet)>, Ra2CaError> {
    Ok(SuccTable::new(a)?.get(letter, ee, uu, q))
}

/// A nonempty abstract set ⟨a, ee, Q_=, Q_∅, ♯⟩; `None` stands for ∅.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractSet {
    pub letter: Sym,
    pub end: bool,
    pub q_eq: LocSet,
    pub q_none: LocSet,
    /// Zero counts are omitted.
    pub sharp: BTreeMap<LocSet, u32>,
}

impl AbstractSet {
    fn is_valid(&self) -> bool {
        self.q_eq != 0 || self.q_none != 0 || self.sharp.values().any(|&n| n > 0)
    }
}

/// The abstraction of a set of states all at the same position.
pub fn abstraction(w: &DataWord, states: &[AraState]) -> Option<AbstractSet> {
    let first = states.first()?;
    let i = first.pos;
    let here = w.class_of(i);
    let mut h = AbstractSet { letter: w.letter(i), end: i + 1 == w.len(), q_eq: 0, q_none: 0, sharp: BTreeMap::new() };
    let mut by_class: BTreeMap<crate::words::ClassId, LocSet> = BTreeMap::new();
    for s in states {
        assert_eq!(s.pos, i, "states must share a position");
        match s.regs.first().copied().flatten() {
            None => h.q_none |= bit(s.loc),
            Some(c) if c == here => h.q_eq |= bit(s.loc),
            Some(c) => *by_class.entry(c).or_default() |= bit(s.loc),
        }
    }
    for qs in by_class.into_values() {
        *h.sharp.entry(qs).or_default() += 1;
    }
    Some(h)
}

fn multisets<T: Clone>(items: &[T], n: u32) -> Vec<Vec<T>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], n - 1) {
            rest.push(x.clone());
            out.push(rest);
        }
    }
    out
}

/// Every h′ with h ⇒ h′ whose counts stay within `cap`.
pub fn big_step_successors(
    a: &RegisterAutomaton,
    h: &AbstractSet,
    cap: u32,
) -> Result<BTreeSet<Option<AbstractSet>>, Ra2CaError> {
    if h.sharp.values().any(|&n| n > cap) {
        return Err(Ra2CaError::CapExceeded(cap));
    }
    let mut t = SuccTable::new(a)?;
    let (l, ee) = (h.letter, h.end);
    // For every class group: the multiset of union pairs its members take.
    let mut group_choices: Vec<Vec<(LocSet, LocSet)>> = vec![Vec::new()];
    for (&qs, &n) in &h.sharp {
        let u: Vec<_> = t.unions(l, ee, false, qs).into_iter().collect();
        let opts = multisets(&u, n);
        group_choices =
            group_choices.iter().flat_map(|g| opts.iter().map(move |o| [g.clone(), o.clone()].concat())).collect();
    }
    let eq = t.unions(l, ee, true, h.q_eq);
    let none = t.unions(l, ee, false, h.q_none);
    let mut out = BTreeSet::new();
    for g in &group_choices {
        for &(_, e2) in &eq {
            for &(n1, n2) in &none {
                let mut sharp: BTreeMap<LocSet, u32> = BTreeMap::new();
                let mut u2 = e2 | n2;
                for &(g1, g2) in g {
                    if g1 != 0 {
                        *sharp.entry(g1).or_default() += 1;
                    }
                    u2 |= g2;
                }
                if u2 != 0 {
                    *sharp.entry(u2).or_default() += 1;
                }
                if n1 == 0 && sharp.is_empty() {
                    out.insert(None);
                }
                for letter in a.alphabet.symbols() {
                    for end in [false, true] {
                        let fresh = AbstractSet { letter, end, q_eq: 0, q_none: n1, sharp: sharp.clone() };
                        if fresh.is_valid() && fresh.sharp.values().all(|&n| n <= cap) {
                            out.insert(Some(fresh));
                        }
                        for (&qs, &n) in &sharp {
                            let mut s = sharp.clone();
                            if n == 1 {
                                s.remove(&qs);
                            } else {
                                s.insert(qs, n - 1);
                            }
                            if s.values().all(|&n| n <= cap) {
                                out.insert(Some(AbstractSet { letter, end, q_eq: qs, q_none: n1, sharp: s }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn big_step(a: &RegisterAutomaton, h: &AbstractSet, target: &Option<AbstractSet>) -> Result<bool, Ra2CaError> {
    let cap = h.sharp.values().copied().max().unwrap_or(0);
    let need = target.as_ref().map_or(0, |t| t.sharp.values().copied().max().unwrap_or(0));
    // ♯′ is at most the number of class groups plus one.
    let total: u32 = h.sharp.values().sum::<u32>() + 1;
    if need > total {
        return Ok(false);
    }
    Ok(big_step_successors(a, h, cap.max(total))?.contains(target))
}

// ---------------------------------------------------------------------------
// Counter automaton construction.

/// A location set whose members may be marked as same-rank descendants of
/// obligation-tracked states (only used over infinite words).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
struct TSet {
    locs: LocSet,
    marks: LocSet,
}

impl TSet {
    fn union(self, o: TSet) -> TSet {
        TSet { locs: self.locs | o.locs, marks: self.marks | o.marks }
    }
    fn is_empty(self) -> bool {
        self.locs == 0
    }
}

/// The finite part of a stored abstract set. `fresh` (infinite words only)
/// means no mark survived the last step, so every odd-rank location carries
/// an obligation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Cs {
    a: Sym,
    ee: bool,
    qe: TSet,
    q0: TSet,
    fresh: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Pt {
    Init,
    Enter(Cs),
    Drain(Cs, usize),
    DrainDec(Cs, usize),
    Maps(Cs),
    Aux { cs: Cs, n0: TSet, qdd: TSet, nat: bool, k: usize },
    AuxMid { cs: Cs, n0: TSet, qdd: TSet, nat: bool, k: usize },
    Bump { cs: Cs, n0: TSet, qdd: TSet, nat: bool },
    Refill { cs: Cs, n0: TSet, nat: bool, k: usize },
    RefillMid { cs: Cs, n0: TSet, nat: bool, k: usize },
    Choose { cs: Cs, n0: TSet, nat: bool },
    Zero { cs: Cs, k: usize },
    Reuse { cs: Cs, n0: TSet, nat: bool, target: usize },
    Acc,
    More,
    Tail,
}

/// Size figures for the construction.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub locations: usize,
    pub transitions: usize,
    pub class_counters: usize,
    pub pair_counters: usize,
    pub succ_entries: usize,
    pub rounds: usize,
}

pub struct Compiled {
    pub automaton: CounterAutomaton,
    /// Description of each counter, index 0 being counter 1.
    pub counter_labels: Vec<String>,
    pub report: Report,
}

struct Builder<'a> {
    a: &'a RegisterAutomaton,
    succ: SuccTable<'a>,
    infinite: bool,
    unions: HashMap<(Sym, bool, bool, TSet, bool), Vec<(TSet, TSet)>>,
}

impl<'a> Builder<'a> {
    /// Union pairs over a tagged set; successors of obligation-tracked
    /// members with equal rank get marked.
    fn unions(&mut self, l: Sym, ee: bool, uu: bool, s: TSet, fresh: bool) -> Vec<(TSet, TSet)> {
        let key = (l, ee, uu, s, fresh);
        if let Some(v) = self.unions.get(&key) {
            return v.clone();
        }
        let mut acc: BTreeSet<(TSet, TSet)> = BTreeSet::from([(TSet::default(), TSet::default())]);
        for q in members(s.locs) {
            let flat = self.infinite && if fresh { self.a.rank[q] % 2 == 1 } else { s.marks & bit(q) != 0 };
            let rank = self.a.rank[q];
            let mark = |m: LocSet| {
                if flat {
                    members(m).filter(|&p| self.a.rank[p] == rank).fold(0, |x, p| x | bit(p))
                } else {
                    0
                }
            };
            let pairs: Vec<(TSet, TSet)> = self
                .succ
                .get(l, ee, uu, q)
                .into_iter()
                .map(|(x, y)| (TSet { locs: x, marks: mark(x) }, TSet { locs: y, marks: mark(y) }))
                .collect();
            acc = acc.iter().flat_map(|&(a1, a2)| pairs.iter().map(move |&(b1, b2)| (a1.union(b1), a2.union(b2)))).collect();
        }
        let v: Vec<_> = acc.into_iter().collect();
        self.unions.insert(key, v.clone());
        v
    }

    fn letters(&self) -> Vec<(Sym, bool)> {
        let ends: &[bool] = if self.infinite { &[false] } else { &[true, false] };
        self.a.alphabet.symbols().flat_map(|l| ends.iter().map(move |&e| (l, e))).collect()
    }
}

fn pt_name(a: &RegisterAutomaton, p: &Pt) -> String {
    let set = |s: TSet| {
        let names: Vec<String> = members(s.locs)
            .map(|q| if s.marks & bit(q) != 0 { format!("{}'", a.names[q]) } else { a.names[q].clone() })
            .collect();
        format!("{{{}}}", names.join(","))
    };
    let cs = |c: &Cs| {
        format!(
            "{}.{}.{}.{}{}",
            a.alphabet.name(c.a),
            if c.ee { "end" } else { "mid" },
            set(c.qe),
            set(c.q0),
            if c.fresh { ".fresh" } else { "" }
        )
    };
    match p {
        Pt::Init => "init".into(),
        Pt::Enter(c) => format!("enter[{}]", cs(c)),
        Pt::Drain(c, k) => format!("drain{k}[{}]", cs(c)),
        Pt::DrainDec(c, k) => format!("pick{k}[{}]", cs(c)),
        Pt::Maps(c) => format!("maps[{}]", cs(c)),
        Pt::Aux { cs: c, n0, qdd, nat, k } => format!("aux{k}[{}|{}|{}|{}]", cs(c), set(*n0), set(*qdd), *nat as u8),
        Pt::AuxMid { cs: c, n0, qdd, nat, k } => {
            format!("auxnz{k}[{}|{}|{}|{}]", cs(c), set(*n0), set(*qdd), *nat as u8)
        }
        Pt::Bump { cs: c, n0, qdd, nat } => format!("bump[{}|{}|{}|{}]", cs(c), set(*n0), set(*qdd), *nat as u8),
        Pt::Refill { cs: c, n0, nat, k } => format!("refill{k}[{}|{}|{}]", cs(c), set(*n0), *nat as u8),
        Pt::RefillMid { cs: c, n0, nat, k } => format!("move{k}[{}|{}|{}]", cs(c), set(*n0), *nat as u8),
        Pt::Choose { cs: c, n0, nat } => format!("choose[{}|{}|{}]", cs(c), set(*n0), *nat as u8),
        Pt::Zero { cs: c, k } => format!("zero{k}[{}]", cs(c)),
        Pt::Reuse { cs: c, n0, nat, target } => format!("reuse{target}[{}|{}|{}]", cs(c), set(*n0), *nat as u8),
        Pt::Acc => "accept".into(),
        Pt::More => "more".into(),
        Pt::Tail => "tail".into(),
    }
}

fn compile(a: &RegisterAutomaton, infinite: bool) -> Result<Compiled, Ra2CaError> {
    check(a)?;
    let mut b = Builder { a, succ: SuccTable::new(a)?, infinite, unions: HashMap::new() };
    let mut sets: BTreeSet<TSet> = BTreeSet::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let s: Vec<TSet> = sets.iter().copied().collect();
        // Pair counters: every union pair a class group can produce.
        let mut pairs: BTreeSet<(TSet, TSet)> = BTreeSet::new();
        for &g in &s {
            for (l, ee) in b.letters() {
                for fresh in [false, true] {
                    pairs.extend(b.unions(l, ee, false, g, fresh));
                }
            }
        }
        let ap: Vec<(TSet, TSet)> = pairs.into_iter().collect();
        let (ca, labels, produced) = emit(&mut b, &s, &ap)?;
        if produced.is_subset(&sets) {
            let report = Report {
                locations: ca.num_locations(),
                transitions: ca.delta.len(),
                class_counters: s.len(),
                pair_counters: ap.len(),
                succ_entries: b.succ.memo.len(),
                rounds,
            };
            return Ok(Compiled { automaton: ca, counter_labels: labels, report });
        }
        sets.extend(produced);
    }
}

/// Builds the automaton for fixed class-set and pair counters; also returns
/// the class sets it would need counters for.
fn emit(
    b: &mut Builder,
    s: &[TSet],
    ap: &[(TSet, TSet)],
) -> Result<(CounterAutomaton, Vec<String>, BTreeSet<TSet>), Ra2CaError> {
    let a = b.a;
    let infinite = b.infinite;
    let z = 1u32;
    let class_counter: HashMap<TSet, u32> = s.iter().enumerate().map(|(i, &t)| (t, 2 + i as u32)).collect();
    let pair_counter: Vec<u32> = (0..ap.len()).map(|i| 2 + s.len() as u32 + i as u32).collect();
    let counters = 1 + s.len() as u32 + ap.len() as u32;
    let mut labels = vec!["scratch".to_string()];
    let tname = |t: TSet| pt_name(a, &Pt::Zero { cs: Cs { a: 0, ee: false, qe: t, q0: TSet::default(), fresh: false }, k: 0 });
    for &t in s {
        labels.push(format!("classes{}", tname(t)));
    }
    for &(u1, u2) in ap {
        labels.push(format!("pair{}{}", tname(u1), tname(u2)));
    }

    let mut ca = CounterAutomaton::new(a.alphabet.clone(), counters, "init", false);
    let mut index: HashMap<Pt, usize> = HashMap::from([(Pt::Init, 0)]);
    let mut queue = VecDeque::from([Pt::Init]);
    let mut produced = BTreeSet::new();
    let letters = b.letters();
    let nop = Instr::ifz(z);

    let accepting = |p: &Pt| match p {
        Pt::Acc | Pt::Tail => true,
        Pt::Enter(cs) => infinite && cs.fresh,
        _ => false,
    };
    // Edges are collected as (from, letter, instr, to) on points.
    while let Some(p) = queue.pop_front() {
        let mut edges: Vec<(Option<Sym>, Instr, Pt)> = Vec::new();
        let drain_or_maps = |cs: &Cs, k: usize| if k < s.len() { Pt::Drain(cs.clone(), k) } else { Pt::Maps(cs.clone()) };
        match &p {
            Pt::Init => {
                for &(l, ee) in &letters {
                    let cs = Cs { a: l, ee, qe: TSet::default(), q0: TSet { locs: bit(a.init), marks: 0 }, fresh: infinite };
                    edges.push((None, nop, drain_or_maps(&cs, 0)));
                }
            }
            Pt::Enter(cs) => edges.push((None, nop, drain_or_maps(cs, 0))),
            Pt::Drain(cs, k) => {
                let c = class_counter[&s[*k]];
                edges.push((None, Instr::ifz(c), drain_or_maps(cs, k + 1)));
                edges.push((None, Instr::dec(c), Pt::DrainDec(cs.clone(), *k)));
            }
            Pt::DrainDec(cs, k) => {
                for pair in b.unions(cs.a, cs.ee, false, s[*k], cs.fresh) {
                    let i = ap.binary_search(&pair).expect("pair counters cover class groups");
                    edges.push((None, Instr::inc(pair_counter[i]), Pt::Drain(cs.clone(), *k)));
                }
            }
            Pt::Maps(cs) => {
                let eq = b.unions(cs.a, cs.ee, true, cs.qe, cs.fresh);
                let none = b.unions(cs.a, cs.ee, false, cs.q0, cs.fresh);
                for &(_, e2) in &eq {
                    for &(n1, n2) in &none {
                        let qdd = e2.union(n2);
                        let nat = (n1.marks | qdd.marks) != 0;
                        let next = if ap.is_empty() {
                            Pt::Bump { cs: cs.clone(), n0: n1, qdd, nat }
                        } else {
                            Pt::Aux { cs: cs.clone(), n0: n1, qdd, nat, k: 0 }
                        };
                        edges.push((None, nop, next));
                    }
                }
            }
            Pt::Aux { cs, n0, qdd, nat, k } => {
                let c = pair_counter[*k];
                let after = |qdd: TSet, nat: bool| {
                    if k + 1 < ap.len() {
                        Pt::Aux { cs: cs.clone(), n0: *n0, qdd, nat, k: k + 1 }
                    } else {
                        Pt::Bump { cs: cs.clone(), n0: *n0, qdd, nat }
                    }
                };
                edges.push((None, Instr::ifz(c), after(*qdd, *nat)));
                edges.push((None, Instr::dec(c), Pt::AuxMid { cs: cs.clone(), n0: *n0, qdd: *qdd, nat: *nat, k: *k }));
            }
            Pt::AuxMid { cs, n0, qdd, nat, k } => {
                let (u1, u2) = ap[*k];
                let qdd2 = qdd.union(u2);
                let nat2 = *nat || (u1.marks | u2.marks) != 0;
                let next = if k + 1 < ap.len() {
                    Pt::Aux { cs: cs.clone(), n0: *n0, qdd: qdd2, nat: nat2, k: k + 1 }
                } else {
                    Pt::Bump { cs: cs.clone(), n0: *n0, qdd: qdd2, nat: nat2 }
                };
                edges.push((None, Instr::inc(pair_counter[*k]), next));
            }
            Pt::Bump { cs, n0, qdd, nat } => {
                let next = if ap.is_empty() {
                    Pt::Choose { cs: cs.clone(), n0: *n0, nat: *nat }
                } else {
                    Pt::Refill { cs: cs.clone(), n0: *n0, nat: *nat, k: 0 }
                };
                if qdd.is_empty() {
                    edges.push((None, nop, next));
                } else {
                    produced.insert(*qdd);
                    if let Some(&c) = class_counter.get(qdd) {
                        edges.push((None, Instr::inc(c), next));
                    }
                }
            }
            Pt::Refill { cs, n0, nat, k } => {
                let c = pair_counter[*k];
                let next = if k + 1 < ap.len() {
                    Pt::Refill { cs: cs.clone(), n0: *n0, nat: *nat, k: k + 1 }
                } else {
                    Pt::Choose { cs: cs.clone(), n0: *n0, nat: *nat }
                };
                edges.push((None, Instr::ifz(c), next));
                edges.push((None, Instr::dec(c), Pt::RefillMid { cs: cs.clone(), n0: *n0, nat: *nat, k: *k }));
            }
            Pt::RefillMid { cs, n0, nat, k } => {
                let (u1, _) = ap[*k];
                let back = Pt::Refill { cs: cs.clone(), n0: *n0, nat: *nat, k: *k };
                if u1.is_empty() {
                    edges.push((None, nop, back));
                } else {
                    produced.insert(u1);
                    if let Some(&c) = class_counter.get(&u1) {
                        edges.push((None, Instr::inc(c), back));
                    }
                }
            }
            Pt::Choose { cs, n0, nat } => {
                if n0.is_empty() {
                    edges.push((None, nop, Pt::Zero { cs: cs.clone(), k: 0 }));
                }
                if !cs.ee {
                    let fresh = infinite && !*nat;
                    for &(l, ee) in &letters {
                        let next = Cs { a: l, ee, qe: TSet::default(), q0: *n0, fresh };
                        edges.push((Some(cs.a), nop, Pt::Enter(next)));
                    }
                    for (t, &q) in s.iter().enumerate() {
                        edges.push((
                            None,
                            Instr::dec(class_counter[&q]),
                            Pt::Reuse { cs: cs.clone(), n0: *n0, nat: *nat, target: t },
                        ));
                    }
                }
            }
            Pt::Reuse { cs, n0, nat, target } => {
                let fresh = infinite && !*nat;
                for &(l, ee) in &letters {
                    let next = Cs { a: l, ee, qe: s[*target], q0: *n0, fresh };
                    edges.push((Some(cs.a), nop, Pt::Enter(next)));
                }
            }
            Pt::Zero { cs, k } => {
                if *k < s.len() {
                    edges.push((None, Instr::ifz(class_counter[&s[*k]]), Pt::Zero { cs: cs.clone(), k: k + 1 }));
                } else {
                    edges.push((Some(cs.a), nop, finish(cs, infinite)));
                }
            }
            Pt::Acc => {}
            Pt::More | Pt::Tail => {
                for l in a.alphabet.symbols() {
                    edges.push((Some(l), nop, Pt::Tail));
                }
            }
        }
        let from = index[&p];
        for (letter, instr, to) in edges {
            let to = match index.get(&to) {
                Some(&i) => i,
                None => {
                    let i = ca.add_location(pt_name(a, &to), accepting(&to));
                    index.insert(to.clone(), i);
                    queue.push_back(to);
                    i
                }
            };
            ca.add(from, letter, instr, to);
        }
    }
    debug_assert!(ca.validate().is_ok(), "{:?}", ca.validate());
    Ok((ca, labels, produced))
}

/// Where a run goes once every obligation is discharged.
fn finish(cs: &Cs, infinite: bool) -> Pt {
    if cs.ee {
        Pt::Acc
    } else if infinite {
        Pt::Tail
    } else {
        Pt::More
    }
}

/// Finite words: accepts exactly the string projections of the automaton's
/// finite-word language.
pub fn build_ca_finite(a: &RegisterAutomaton) -> Result<CounterAutomaton, Ra2CaError> {
    Ok(compile(a, false)?.automaton)
}

/// Infinite words (Büchi): accepts exactly the string projections of the
/// automaton's infinite-word language.
pub fn build_ca_infinite(a: &RegisterAutomaton) -> Result<CounterAutomaton, Ra2CaError> {
    Ok(compile(a, true)?.automaton)
}

pub fn compile_finite(a: &RegisterAutomaton) -> Result<Compiled, Ra2CaError> {
    compile(a, false)
}

pub fn compile_infinite(a: &RegisterAutomaton) -> Result<Compiled, Ra2CaError> {
    compile(a, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ra::parse_ra;

    fn ra(body: &str) -> RegisterAutomaton {
        parse_ra(&format!("alphabet: a b\nregisters: 1\ninit: q0\n{body}")).unwrap()
    }

    #[test]
    fn succ_rows() {
        let a = ra("q0 rank=0 height=0 : X q1\nq1 rank=0 height=0 : wX q1\nq2 rank=0 height=1 : and q0 q1\n");
        assert_eq!(succ_table(&a, 0, false, true, 0).unwrap(), BTreeSet::from([(0, bit(1))]));
        assert_eq!(succ_table(&a, 0, true, false, 0).unwrap(), BTreeSet::new());
        assert_eq!(succ_table(&a, 0, true, false, 1).unwrap(), BTreeSet::from([(0, 0)]));
        assert_eq!(succ_table(&a, 0, false, false, 2).unwrap(), BTreeSet::from([(bit(1) | bit(1), 0)]));
    }

    #[test]
    fn big_step_examples() {
        let top = ra("q0 rank=0 height=0 : true\n");
        let h = AbstractSet { letter: 0, end: false, q_eq: 0, q_none: bit(0), sharp: BTreeMap::new() };
        assert!(big_step(&top, &h, &None).unwrap());

        let x = ra("q0 rank=0 height=0 : X q1\nq1 rank=0 height=0 : true\n");
        let target = AbstractSet { letter: 1, end: true, q_eq: 0, q_none: bit(1), sharp: BTreeMap::new() };
        assert!(big_step(&x, &h, &Some(target)).unwrap());
        let reuse = AbstractSet { letter: 1, end: true, q_eq: bit(1), q_none: bit(1), sharp: BTreeMap::new() };
        assert!(!big_step(&x, &h, &Some(reuse)).unwrap());
    }

    #[test]
    fn rejects_two_registers() {
        let two = parse_ra("alphabet: a\nregisters: 2\ninit: q0\nq0 rank=0 height=0 : true\n").unwrap();
        assert!(matches!(build_ca_finite(&two), Err(Ra2CaError::ClassMismatch)));
    }

    #[test]
    fn false_initial_gives_empty_language() {
        let bot = ra("q0 rank=0 height=0 : false\n");
        let c = build_ca_finite(&bot).unwrap();
        assert_eq!(crate::ca::nonempty_finite_incrementing(&c), None);
    }
}
