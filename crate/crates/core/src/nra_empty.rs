//! Nonemptiness of one-way nondeterministic register automata by search in
//! a finite graph of abstract states.
//!
//! An abstract state keeps the current letter, whether the position is the
//! last one, the location, which registers hold equal classes, and which of
//! them hold the current class.

use std::collections::{BTreeSet, HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::ra::{accepts, AraState, Loc, RaError, RegisterAutomaton, Test, Trans};
use crate::words::{DataWord, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NraError {
    #[error("automaton is not one-way nondeterministic")]
    NotOneWayNondeterministic,
    #[error("reconstructed witness {0} was not accepted")]
    WitnessRejected(String),
    #[error(transparent)]
    Ra(#[from] RaError),
}

/// ⟨a, ee, R, q, E⟩ with E and R encoded by register labels: registers with
/// equal nonzero labels hold the same class, label 0 means undefined, and
/// `cur` is the label of the current class (0 if no register holds it).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbsState {
    pub letter: Sym,
    pub end: bool,
    pub loc: Loc,
    pub cur: u8,
    pub labels: Vec<u8>,
}

impl AbsState {
    fn canonical(mut self) -> Self {
        let mut map: HashMap<u8, u8> = HashMap::new();
        for l in self.labels.iter_mut() {
            if *l != 0 {
                let next = map.len() as u8 + 1;
                *l = *map.entry(*l).or_insert(next);
            }
        }
        self.cur = map.get(&self.cur).copied().unwrap_or(0);
        self
    }

    /// R: registers holding the current class (1-based).
    pub fn current_registers(&self) -> BTreeSet<u32> {
        if self.cur == 0 {
            return BTreeSet::new();
        }
        (0..self.labels.len()).filter(|&r| self.labels[r] == self.cur).map(|r| r as u32 + 1).collect()
    }

    /// E: pairs of defined registers holding equal classes (1-based).
    pub fn equalities(&self) -> BTreeSet<(u32, u32)> {
        let mut out = BTreeSet::new();
        for (r, &l) in self.labels.iter().enumerate() {
            for (s, &m) in self.labels.iter().enumerate() {
                if l != 0 && l == m {
                    out.insert((r as u32 + 1, s as u32 + 1));
                }
            }
        }
        out
    }

    fn distinct_labels(&self) -> Vec<u8> {
        let set: BTreeSet<u8> = self.labels.iter().copied().filter(|&l| l != 0).collect();
        set.into_iter().collect()
    }
}

/// The abstraction of a concrete automaton state on a word.
pub fn abstract_state(a: &RegisterAutomaton, w: &DataWord, s: &AraState) -> AbsState {
    let mut labels = Vec::with_capacity(a.registers as usize);
    let mut seen: Vec<crate::words::ClassId> = Vec::new();
    for c in &s.regs {
        labels.push(match c {
            None => 0,
            Some(c) => match seen.iter().position(|d| d == c) {
                Some(i) => i as u8 + 1,
                None => {
                    seen.push(*c);
                    seen.len() as u8
                }
            },
        });
    }
    let here = w.class_of(s.pos);
    let cur = seen.iter().position(|d| *d == here).map_or(0, |i| i as u8 + 1);
    AbsState { letter: w.letter(s.pos), end: s.pos + 1 == w.len(), loc: s.loc, cur, labels }.canonical()
}

/// How the next position's class relates to the registers on a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassChoice {
    /// The class held by registers with this label (before the move).
    Existing(u8),
    Fresh,
}

/// The edge label needed to replay an abstract path concretely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    InPlace,
    Move { letter: Sym, end: bool, class: ClassChoice },
}

fn check_class(a: &RegisterAutomaton) -> Result<(), NraError> {
    if a.is_1nra() {
        Ok(())
    } else {
        Err(NraError::NotOneWayNondeterministic)
    }
}

pub fn initial_states(a: &RegisterAutomaton) -> Vec<AbsState> {
    let mut out = Vec::new();
    for letter in a.alphabet.symbols() {
        for end in [true, false] {
            out.push(AbsState { letter, end, loc: a.init, cur: 0, labels: vec![0; a.registers as usize] });
        }
    }
    out
}

/// Player 2 owns it and it has no successors: a finite accepting play ends here.
pub fn is_winning(a: &RegisterAutomaton, h: &AbsState) -> bool {
    match a.delta[h.loc] {
        Trans::True => true,
        Trans::WX(_) => h.end,
        _ => false,
    }
}

pub fn abs_successors(a: &RegisterAutomaton, h: &AbsState) -> Result<Vec<(AbsState, Step)>, NraError> {
    check_class(a)?;
    Ok(successors(a, h))
}

fn successors(a: &RegisterAutomaton, h: &AbsState) -> Vec<(AbsState, Step)> {
    let stay = |loc: Loc, h: &AbsState| (AbsState { loc, ..h.clone() }, Step::InPlace);
    match a.delta[h.loc] {
        Trans::If(t, y, n) => {
            let holds = match t {
                Test::Letter(l) => h.letter == l,
                Test::End => h.end,
                Test::Reg(r) => h.cur != 0 && h.labels[r as usize - 1] == h.cur,
                Test::Beg => unreachable!("one-way"),
            };
            vec![stay(if holds { y } else { n }, h)]
        }
        Trans::Store(r, q) => {
            let mut next = h.clone();
            if next.cur == 0 {
                next.cur = u8::MAX;
            }
            next.labels[r as usize - 1] = next.cur;
            next.loc = q;
            vec![(next.canonical(), Step::InPlace)]
        }
        Trans::Or(p, q) => vec![stay(p, h), stay(q, h)],
        Trans::True | Trans::False => vec![],
        Trans::X(q) | Trans::WX(q) => {
            if h.end {
                return vec![];
            }
            let mut choices: Vec<ClassChoice> = h.distinct_labels().into_iter().map(ClassChoice::Existing).collect();
            choices.push(ClassChoice::Fresh);
            let mut out = Vec::new();
            for letter in a.alphabet.symbols() {
                for end in [true, false] {
                    for &class in &choices {
                        let cur = match class {
                            ClassChoice::Existing(l) => l,
                            ClassChoice::Fresh => 0,
                        };
                        let next = AbsState { letter, end, loc: q, cur, labels: h.labels.clone() }.canonical();
                        out.push((next, Step::Move { letter, end, class }));
                    }
                }
            }
            out
        }
        Trans::And(..) | Trans::Xinv(_) | Trans::WXinv(_) => unreachable!("one-way nondeterministic"),
    }
}

struct Graph {
    states: Vec<AbsState>,
    parent: Vec<Option<(usize, Step)>>,
    succ: Vec<Vec<usize>>,
}

fn explore(a: &RegisterAutomaton, stop: impl Fn(&AbsState) -> bool) -> (Graph, Option<usize>) {
    let mut g = Graph { states: Vec::new(), parent: Vec::new(), succ: Vec::new() };
    let mut index: HashMap<AbsState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for h in initial_states(a) {
        if !index.contains_key(&h) {
            index.insert(h.clone(), g.states.len());
            g.states.push(h);
            g.parent.push(None);
            g.succ.push(Vec::new());
            queue.push_back(g.states.len() - 1);
        }
    }
    while let Some(i) = queue.pop_front() {
        if stop(&g.states[i]) {
            return (g, Some(i));
        }
        for (h, step) in successors(a, &g.states[i].clone()) {
            let j = match index.get(&h) {
                Some(&j) => j,
                None => {
                    index.insert(h.clone(), g.states.len());
                    g.states.push(h);
                    g.parent.push(Some((i, step)));
                    g.succ.push(Vec::new());
                    queue.push_back(g.states.len() - 1);
                    g.states.len() - 1
                }
            };
            g.succ[i].push(j);
        }
    }
    (g, None)
}

/// Replays an abstract path, choosing concrete classes for each move.
fn replay(a: &RegisterAutomaton, g: &Graph, last: usize) -> DataWord {
    let mut path = vec![last];
    let mut edges = Vec::new();
    let mut at = last;
    while let Some((p, step)) = g.parent[at] {
        edges.push(step);
        path.push(p);
        at = p;
    }
    path.reverse();
    edges.reverse();

    let mut letters = vec![g.states[path[0]].letter];
    let mut classes = vec![0usize];
    let mut fresh = 1usize;
    let mut regs: Vec<Option<usize>> = vec![None; a.registers as usize];
    for (k, step) in edges.iter().enumerate() {
        let h = &g.states[path[k]];
        match step {
            Step::InPlace => {
                if let Trans::Store(r, _) = a.delta[h.loc] {
                    regs[r as usize - 1] = Some(*classes.last().unwrap());
                }
            }
            Step::Move { letter, class, .. } => {
                let c = match class {
                    ClassChoice::Existing(l) => {
                        let r = h.labels.iter().position(|x| x == l).expect("label present");
                        regs[r].expect("labelled register is defined")
                    }
                    ClassChoice::Fresh => {
                        fresh += 1;
                        fresh - 1
                    }
                };
                letters.push(*letter);
                classes.push(c);
            }
        }
    }
    if !g.states[last].end {
        // More positions follow the winning state; any will do.
        letters.push(0);
        classes.push(fresh);
    }
    DataWord::from_labels(a.alphabet.clone(), letters, &classes)
}

/// Finite-word nonemptiness; on success returns a shortest witness,
/// already checked by concrete membership.
pub fn nonempty_finite(a: &RegisterAutomaton) -> Result<Option<DataWord>, NraError> {
    check_class(a)?;
    let (g, hit) = explore(a, |h| is_winning(a, h));
    let Some(last) = hit else { return Ok(None) };
    let w = replay(a, &g, last);
    if !accepts(a, &w)? {
        return Err(NraError::WitnessRejected(w.to_string()));
    }
    Ok(Some(w))
}

/// Infinite-word nonemptiness: a reachable winning state that is not at a
/// last position, or a reachable cycle at even rank.
pub fn nonempty_infinite(a: &RegisterAutomaton) -> Result<bool, NraError> {
    check_class(a)?;
    // Words without end: only abstract states with ee = ⊥ are relevant.
    let (g, _) = explore(a, |_| false);
    let live = |i: usize| !g.states[i].end;
    if (0..g.states.len()).any(|i| live(i) && matches!(a.delta[g.states[i].loc], Trans::True)) {
        return Ok(true);
    }
    let mut graph: DiGraph<usize, ()> = DiGraph::new();
    let nodes: Vec<_> = (0..g.states.len()).map(|i| graph.add_node(i)).collect();
    for i in 0..g.states.len() {
        for &j in &g.succ[i] {
            if live(i) && live(j) {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    for scc in tarjan_scc(&graph) {
        let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        if cyclic && a.rank[g.states[graph[scc[0]]].loc].is_multiple_of(2) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The reachable abstract graph in DOT; winning states are doubly circled.
pub fn abstract_graph_dot(a: &RegisterAutomaton) -> Result<String, NraError> {
    check_class(a)?;
    let (g, _) = explore(a, |_| false);
    let mut out = String::from("digraph abstract {\n");
    for (i, h) in g.states.iter().enumerate() {
        let shape = if is_winning(a, h) { "doublecircle" } else { "ellipse" };
        let eqs: Vec<String> = h.equalities().iter().map(|(r, s)| format!("{r}={s}")).collect();
        let cur: Vec<String> = h.current_registers().iter().map(u32::to_string).collect();
        out.push_str(&format!(
            "  s{i} [shape={shape}, label=\"{} {} {}\\ncur {{{}}} eq {{{}}}\"];\n",
            a.alphabet.name(h.letter),
            if h.end { "end" } else { "mid" },
            a.names[h.loc],
            cur.join(","),
            eqs.join(","),
        ));
    }
    for (i, succ) in g.succ.iter().enumerate() {
        for j in succ {
            out.push_str(&format!("  s{i} -> s{j};\n"));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
