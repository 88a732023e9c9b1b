//! Two-way alternating register automata with weak acceptance.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::games::{solve_all, Player, Pos, Solution, WeakGame};
use crate::words::{Alphabet, ClassId, DataWord, Sym};

pub type Loc = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RaError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("acceptance game exceeds the budget of {0} states")]
    StateSpaceBudgetExceeded(usize),
    #[error("operation needs one-way nondeterministic automata")]
    ClassMismatch,
    #[error("the requested combination leaves the class of its inputs")]
    UnsupportedClassCombination,
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("invalid automaton: {0}")]
    Invalid(String),
}

/// Boolean tests of `if` transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Test {
    Letter(Sym),
    Beg,
    End,
    Reg(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trans {
    If(Test, Loc, Loc),
    Store(u32, Loc),
    And(Loc, Loc),
    Or(Loc, Loc),
    True,
    False,
    X(Loc),
    /// X̄: accepting when there is no next position.
    WX(Loc),
    Xinv(Loc),
    WXinv(Loc),
}

impl Trans {
    pub fn targets(&self) -> Vec<Loc> {
        match *self {
            Trans::If(_, a, b) | Trans::And(a, b) | Trans::Or(a, b) => vec![a, b],
            Trans::Store(_, a) | Trans::X(a) | Trans::WX(a) | Trans::Xinv(a) | Trans::WXinv(a) => vec![a],
            Trans::True | Trans::False => vec![],
        }
    }

    pub fn moves(&self) -> bool {
        matches!(self, Trans::X(_) | Trans::WX(_) | Trans::Xinv(_) | Trans::WXinv(_))
    }

    pub fn dual(&self) -> Trans {
        match *self {
            Trans::If(..) | Trans::Store(..) => *self,
            Trans::And(a, b) => Trans::Or(a, b),
            Trans::Or(a, b) => Trans::And(a, b),
            Trans::True => Trans::False,
            Trans::False => Trans::True,
            Trans::X(a) => Trans::WX(a),
            Trans::WX(a) => Trans::X(a),
            Trans::Xinv(a) => Trans::WXinv(a),
            Trans::WXinv(a) => Trans::Xinv(a),
        }
    }

    pub fn map_locs(&self, mut f: impl FnMut(Loc) -> Loc) -> Trans {
        match *self {
            Trans::If(t, a, b) => Trans::If(t, f(a), f(b)),
            Trans::Store(r, a) => Trans::Store(r, f(a)),
            Trans::And(a, b) => Trans::And(f(a), f(b)),
            Trans::Or(a, b) => Trans::Or(f(a), f(b)),
            Trans::True => Trans::True,
            Trans::False => Trans::False,
            Trans::X(a) => Trans::X(f(a)),
            Trans::WX(a) => Trans::WX(f(a)),
            Trans::Xinv(a) => Trans::Xinv(f(a)),
            Trans::WXinv(a) => Trans::WXinv(f(a)),
        }
    }

    fn shift_registers(&self, by: u32) -> Trans {
        match *self {
            Trans::If(Test::Reg(r), a, b) => Trans::If(Test::Reg(r + by), a, b),
            Trans::Store(r, a) => Trans::Store(r + by, a),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterAutomaton {
    pub alphabet: Arc<Alphabet>,
    pub names: Vec<String>,
    pub init: Loc,
    pub registers: u32,
    pub delta: Vec<Trans>,
    pub rank: Vec<u32>,
    pub height: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Rank { from: Loc, to: Loc },
    Height { from: Loc, to: Loc },
    Register { at: Loc, register: u32 },
    MissingLocation { at: Loc, target: Loc },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RaClass {
    pub one_way: bool,
    pub nondeterministic: bool,
    pub universal: bool,
    pub deterministic: bool,
}

impl RegisterAutomaton {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn loc(&self, name: &str) -> Option<Loc> {
        self.names.iter().position(|n| n == name)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for q in 0..self.len() {
            let t = &self.delta[q];
            for q2 in t.targets() {
                if q2 >= self.len() {
                    out.push(Violation::MissingLocation { at: q, target: q2 });
                    continue;
                }
                if self.rank[q2] > self.rank[q] {
                    out.push(Violation::Rank { from: q, to: q2 });
                }
                if !t.moves() && !matches!(t, Trans::True | Trans::False) && self.height[q2] >= self.height[q] {
                    out.push(Violation::Height { from: q, to: q2 });
                }
            }
            let reg = match t {
                Trans::If(Test::Reg(r), ..) | Trans::Store(r, _) => Some(*r),
                _ => None,
            };
            if let Some(r) = reg {
                if r == 0 || r > self.registers {
                    out.push(Violation::Register { at: q, register: r });
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), RaError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(RaError::Invalid(format!("{v:?}")))
        }
    }

    pub fn classify(&self) -> RaClass {
        let one_way = !self
            .delta
            .iter()
            .any(|t| matches!(t, Trans::If(Test::Beg, ..) | Trans::Xinv(_) | Trans::WXinv(_)));
        let nondeterministic = !self.delta.iter().any(|t| matches!(t, Trans::And(..)));
        let universal = !self.delta.iter().any(|t| matches!(t, Trans::Or(..)));
        RaClass { one_way, nondeterministic, universal, deterministic: nondeterministic && universal }
    }

    pub fn is_1nra(&self) -> bool {
        let c = self.classify();
        c.one_way && c.nondeterministic
    }

    pub fn dual(&self) -> RegisterAutomaton {
        RegisterAutomaton {
            delta: self.delta.iter().map(Trans::dual).collect(),
            rank: self.rank.iter().map(|r| r + 1).collect(),
            ..self.clone()
        }
    }

    fn test_name(&self, t: Test) -> String {
        match t {
            Test::Letter(a) => self.alphabet.name(a).to_string(),
            Test::Beg => "beg".into(),
            Test::End => "end".into(),
            Test::Reg(r) => format!("up{r}"),
        }
    }

    pub fn trans_text(&self, t: &Trans) -> String {
        let n = |q: Loc| self.names[q].as_str();
        match *t {
            Trans::If(b, p, q) => format!("if {} then {} else {}", self.test_name(b), n(p), n(q)),
            Trans::Store(r, p) => format!("store{r} {}", n(p)),
            Trans::And(p, q) => format!("and {} {}", n(p), n(q)),
            Trans::Or(p, q) => format!("or {} {}", n(p), n(q)),
            Trans::True => "true".into(),
            Trans::False => "false".into(),
            Trans::X(p) => format!("X {}", n(p)),
            Trans::WX(p) => format!("wX {}", n(p)),
            Trans::Xinv(p) => format!("Xp {}", n(p)),
            Trans::WXinv(p) => format!("wXp {}", n(p)),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ra {\n  rankdir=LR;\n");
        for q in 0..self.len() {
            let sym = match self.delta[q] {
                Trans::If(b, ..) => self.test_name(b),
                Trans::Store(r, _) => format!("↓{r}"),
                Trans::And(..) => "∧".into(),
                Trans::Or(..) => "∨".into(),
                Trans::True => "⊤".into(),
                Trans::False => "⊥".into(),
                Trans::X(_) => "X".into(),
                Trans::WX(_) => "X̄".into(),
                Trans::Xinv(_) => "X⁻¹".into(),
                Trans::WXinv(_) => "X̄⁻¹".into(),
            };
            let init = if q == self.init { ", penwidth=2" } else { "" };
            let _ = writeln!(
                out,
                "  q{q} [shape=circle{init}, label=\"{sym}\", xlabel=\"{} ρ={} γ={}\"];",
                self.names[q], self.rank[q], self.height[q]
            );
        }
        for q in 0..self.len() {
            match self.delta[q] {
                Trans::If(_, y, n) => {
                    let _ = writeln!(out, "  q{q} -> q{y} [label=\"y\"];\n  q{q} -> q{n} [label=\"n\"];");
                }
                t => {
                    for p in t.targets() {
                        let _ = writeln!(out, "  q{q} -> q{p};");
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn parse(text: &str) -> Result<RegisterAutomaton, RaError> {
        parse_ra(text)
    }
}

impl fmt::Display for RegisterAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet.names().join(" "))?;
        writeln!(f, "registers: {}", self.registers)?;
        writeln!(f, "init: {}", self.names[self.init])?;
        for q in 0..self.len() {
            writeln!(
                f,
                "{} rank={} height={} : {}",
                self.names[q],
                self.rank[q],
                self.height[q],
                self.trans_text(&self.delta[q])
            )?;
        }
        Ok(())
    }
}

/// Parses the line-based text format (see `Display`). `#` starts a comment.
pub fn parse_ra(text: &str) -> Result<RegisterAutomaton, RaError> {
    let mut alphabet = None;
    let mut registers = 0;
    let mut init_name = None;
    let mut rows: Vec<(usize, String, u32, u32, Vec<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| RaError::Syntax { line: line_no, msg: msg.to_string() };
        if let Some(rest) = line.strip_prefix("alphabet:") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            alphabet = Some(Alphabet::new(&names).map_err(|e| err(&e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("registers:") {
            registers = rest.trim().parse().map_err(|_| err("bad register count"))?;
        } else if let Some(rest) = line.strip_prefix("init:") {
            init_name = Some(rest.trim().to_string());
        } else {
            let (head, body) = line.split_once(" : ").ok_or_else(|| err("expected `name rank=R height=H : formula`"))?;
            let mut parts = head.split_whitespace();
            let name = parts.next().ok_or_else(|| err("missing location name"))?.to_string();
            let (mut rank, mut height) = (None, None);
            for p in parts {
                if let Some(v) = p.strip_prefix("rank=") {
                    rank = Some(v.parse().map_err(|_| err("bad rank"))?);
                } else if let Some(v) = p.strip_prefix("height=") {
                    height = Some(v.parse().map_err(|_| err("bad height"))?);
                } else {
                    return Err(err(&format!("unexpected `{p}`")));
                }
            }
            let words = body.split_whitespace().map(str::to_string).collect();
            rows.push((
                line_no,
                name,
                rank.ok_or_else(|| err("missing rank"))?,
                height.ok_or_else(|| err("missing height"))?,
                words,
            ));
        }
    }
    let alphabet = alphabet.ok_or(RaError::Syntax { line: 0, msg: "missing `alphabet:` header".into() })?;
    let names: Vec<String> = rows.iter().map(|r| r.1.clone()).collect();
    let index: HashMap<&str, Loc> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != names.len() {
        return Err(RaError::Syntax { line: 0, msg: "duplicate location".into() });
    }
    let mut delta = Vec::new();
    for (line, _, _, _, words) in &rows {
        let err = |msg: String| RaError::Syntax { line: *line, msg };
        let loc = |w: &str| index.get(w).copied().ok_or_else(|| err(format!("unknown location `{w}`")));
        let w: Vec<&str> = words.iter().map(String::as_str).collect();
        let t = match w.as_slice() {
            ["true"] => Trans::True,
            ["false"] => Trans::False,
            ["and", p, q] => Trans::And(loc(p)?, loc(q)?),
            ["or", p, q] => Trans::Or(loc(p)?, loc(q)?),
            ["X", p] => Trans::X(loc(p)?),
            ["wX", p] => Trans::WX(loc(p)?),
            ["Xp", p] => Trans::Xinv(loc(p)?),
            ["wXp", p] => Trans::WXinv(loc(p)?),
            ["if", b, "then", p, "else", q] => {
                let test = match *b {
                    "beg" => Test::Beg,
                    "end" => Test::End,
                    b => match b.strip_prefix("up").and_then(|r| r.parse().ok()) {
                        Some(r) => Test::Reg(r),
                        None => Test::Letter(alphabet.lookup(b).ok_or_else(|| err(format!("unknown letter `{b}`")))?),
                    },
                };
                Trans::If(test, loc(p)?, loc(q)?)
            }
            [s, p] if s.starts_with("store") => {
                let r = s["store".len()..].parse().map_err(|_| err(format!("bad register in `{s}`")))?;
                Trans::Store(r, loc(p)?)
            }
            _ => return Err(err(format!("cannot parse transition `{}`", w.join(" ")))),
        };
        delta.push(t);
    }
    let init = match init_name {
        Some(n) => *index.get(n.as_str()).ok_or(RaError::Syntax { line: 0, msg: format!("unknown initial `{n}`") })?,
        None => return Err(RaError::Syntax { line: 0, msg: "missing `init:` header".into() }),
    };
    Ok(RegisterAutomaton {
        alphabet,
        names,
        init,
        registers,
        delta,
        rank: rows.iter().map(|r| r.2).collect(),
        height: rows.iter().map(|r| r.3).collect(),
    })
}

// ------------------------------------------------------- acceptance games

/// Register contents of one game state; index r−1 holds register r.
pub type Regs = Vec<Option<ClassId>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AraState {
    pub pos: usize,
    pub loc: Loc,
    pub regs: Regs,
}

pub struct AcceptanceGame {
    pub game: WeakGame,
    pub states: Vec<AraState>,
    pub initial: Pos,
}

impl AcceptanceGame {
    pub fn position_of(&self, s: &AraState) -> Option<Pos> {
        self.states.iter().position(|t| t == s)
    }
}

pub const DEFAULT_STATE_BUDGET: usize = 2_000_000;

fn test_holds(w: &DataWord, i: usize, regs: &Regs, t: Test) -> bool {
    match t {
        Test::Letter(a) => w.letter(i) == a,
        Test::Beg => i == 0,
        Test::End => i + 1 == w.len(),
        Test::Reg(r) => regs[r as usize - 1] == Some(w.class_of(i)),
    }
}

fn state_label(a: &RegisterAutomaton, w: &DataWord, s: &AraState) -> String {
    let regs: Vec<String> = s
        .regs
        .iter()
        .map(|c| match c {
            None => "-".into(),
            Some(c) => format!("{:?}", w.block(*c)).replace('[', "{").replace(']', "}"),
        })
        .collect();
    let regs = if regs.is_empty() { "-".to_string() } else { regs.join(",") };
    format!("{}, {}, {}", s.pos, a.names[s.loc], regs)
}

/// Builds the part of the acceptance game reachable from ⟨0, q_I, ∅⟩.
/// States with a unique successor are given to player 1.
pub fn acceptance_game(a: &RegisterAutomaton, w: &DataWord, budget: usize) -> Result<AcceptanceGame, RaError> {
    if w.alphabet().names() != a.alphabet.names() {
        return Err(RaError::AlphabetMismatch);
    }
    let mut game = WeakGame::new();
    let mut states: Vec<AraState> = Vec::new();
    let mut index: HashMap<AraState, Pos> = HashMap::new();
    let start = AraState { pos: 0, loc: a.init, regs: vec![None; a.registers as usize] };
    let mut stack: Vec<Pos> = Vec::new();
    let mut intern = |s: AraState, game: &mut WeakGame, states: &mut Vec<AraState>, stack: &mut Vec<Pos>| {
        if let Some(&p) = index.get(&s) {
            return Ok(p);
        }
        if states.len() >= budget {
            return Err(RaError::StateSpaceBudgetExceeded(budget));
        }
        let owner = match a.delta[s.loc] {
            Trans::And(..) | Trans::True => Player::P2,
            Trans::WX(_) if s.pos + 1 == w.len() => Player::P2,
            Trans::WXinv(_) if s.pos == 0 => Player::P2,
            _ => Player::P1,
        };
        let p = game.add_position(owner, a.rank[s.loc], state_label(a, w, &s));
        index.insert(s.clone(), p);
        states.push(s);
        stack.push(p);
        Ok(p)
    };
    let initial = intern(start, &mut game, &mut states, &mut stack)?;
    while let Some(p) = stack.pop() {
        let s = states[p].clone();
        let at = |loc: Loc, pos: usize, regs: &Regs| AraState { pos, loc, regs: regs.clone() };
        let succs: Vec<AraState> = match a.delta[s.loc] {
            Trans::If(t, y, n) => {
                vec![at(if test_holds(w, s.pos, &s.regs, t) { y } else { n }, s.pos, &s.regs)]
            }
            Trans::Store(r, q) => {
                let mut regs = s.regs.clone();
                regs[r as usize - 1] = Some(w.class_of(s.pos));
                vec![at(q, s.pos, &regs)]
            }
            Trans::And(q1, q2) | Trans::Or(q1, q2) => vec![at(q1, s.pos, &s.regs), at(q2, s.pos, &s.regs)],
            Trans::True | Trans::False => vec![],
            Trans::X(q) | Trans::WX(q) => {
                if s.pos + 1 < w.len() {
                    vec![at(q, s.pos + 1, &s.regs)]
                } else {
                    vec![]
                }
            }
            Trans::Xinv(q) | Trans::WXinv(q) => {
                if s.pos > 0 {
                    vec![at(q, s.pos - 1, &s.regs)]
                } else {
                    vec![]
                }
            }
        };
        for t in succs {
            let q = intern(t, &mut game, &mut states, &mut stack)?;
            game.add_edge(p, q);
        }
    }
    debug_assert!(game.rank_violations().is_empty());
    Ok(AcceptanceGame { game, states, initial })
}

/// Solves the acceptance game; player 1 winning from the initial state means acceptance.
pub fn solve_acceptance(a: &RegisterAutomaton, w: &DataWord, budget: usize) -> Result<(AcceptanceGame, Solution), RaError> {
    let g = acceptance_game(a, w, budget)?;
    let sol = solve_all(&g.game);
    Ok((g, sol))
}

pub fn accepts_with_budget(a: &RegisterAutomaton, w: &DataWord, budget: usize) -> Result<bool, RaError> {
    let (g, sol) = solve_acceptance(a, w, budget)?;
    Ok(sol.winner[g.initial] == Player::P1)
}

pub fn accepts(a: &RegisterAutomaton, w: &DataWord) -> Result<bool, RaError> {
    accepts_with_budget(a, w, DEFAULT_STATE_BUDGET)
}

// ------------------------------------------------------------ closure

/// Product of two one-way nondeterministic automata accepting the
/// intersection; registers of the second are shifted past the first's.
pub fn product_1nra(a1: &RegisterAutomaton, a2: &RegisterAutomaton) -> Result<RegisterAutomaton, RaError> {
    if a1.alphabet.names() != a2.alphabet.names() {
        return Err(RaError::AlphabetMismatch);
    }
    if !a1.is_1nra() || !a2.is_1nra() {
        return Err(RaError::ClassMismatch);
    }
    let n1 = a1.registers;
    let mut index: HashMap<(Loc, Loc), Loc> = HashMap::new();
    let mut pairs: Vec<(Loc, Loc)> = Vec::new();
    let mut delta: Vec<Option<Trans>> = Vec::new();
    let mut todo = vec![(a1.init, a2.init)];
    index.insert((a1.init, a2.init), 0);
    pairs.push((a1.init, a2.init));
    delta.push(None);
    while let Some((q1, q2)) = todo.pop() {
        let here = index[&(q1, q2)];
        let d1 = a1.delta[q1];
        let d2 = a2.delta[q2].shift_registers(n1);
        let left = |t: Trans| -> Trans { t.map_locs(|p| encode(p, q2)) };
        let right = |t: Trans| -> Trans { t.map_locs(|p| encode(q1, p)) };
        use Trans::*;
        let t = match (d1, d2) {
            (False, _) | (_, False) => False,
            (If(..) | Store(..) | Or(..), _) => left(d1),
            (True, True) => True,
            (True, _) => right(d2),
            (X(_) | WX(_), If(..) | Store(..) | Or(..)) => right(d2),
            (X(_) | WX(_), True) => left(d1),
            (X(p1), X(p2) | WX(p2)) | (WX(p1), X(p2)) => X(encode(p1, p2)),
            (WX(p1), WX(p2)) => WX(encode(p1, p2)),
            _ => unreachable!("inputs are one-way nondeterministic"),
        };
        // Resolve the placeholder encoding into real product locations.
        let t = t.map_locs(|code| {
            let key = decode(code);
            *index.entry(key).or_insert_with(|| {
                pairs.push(key);
                delta.push(None);
                todo.push(key);
                pairs.len() - 1
            })
        });
        delta[here] = Some(t);
    }
    let names = pairs.iter().map(|&(p, q)| format!("({},{})", a1.names[p], a2.names[q])).collect();
    Ok(RegisterAutomaton {
        alphabet: a1.alphabet.clone(),
        names,
        init: 0,
        registers: n1 + a2.registers,
        delta: delta.into_iter().map(|t| t.expect("every reached pair is expanded")).collect(),
        rank: pairs.iter().map(|&(p, q)| (a1.rank[p] + 1) * (a2.rank[q] + 1) + 1).collect(),
        height: pairs.iter().map(|&(p, q)| a1.height[p] + a2.height[q]).collect(),
    })
}

// Pair encoding used while building the product: both components are kept
// in one usize so `map_locs` can carry them.
const SHIFT: u32 = 32;
fn encode(p1: Loc, p2: Loc) -> Loc {
    (p1 << SHIFT) | p2
}
fn decode(code: Loc) -> (Loc, Loc) {
    (code >> SHIFT, code & ((1 << SHIFT) - 1))
}

fn disjoint_root(a1: &RegisterAutomaton, a2: &RegisterAutomaton, conj: bool) -> Result<RegisterAutomaton, RaError> {
    if a1.alphabet.names() != a2.alphabet.names() {
        return Err(RaError::AlphabetMismatch);
    }
    let off = a1.len() + 1;
    let mut names = vec![if conj { "and" } else { "or" }.to_string()];
    names.extend(a1.names.iter().map(|n| format!("L.{n}")));
    names.extend(a2.names.iter().map(|n| format!("R.{n}")));
    let root = if conj { Trans::And(a1.init + 1, a2.init + off) } else { Trans::Or(a1.init + 1, a2.init + off) };
    let mut delta = vec![root];
    delta.extend(a1.delta.iter().map(|t| t.map_locs(|q| q + 1)));
    delta.extend(a2.delta.iter().map(|t| t.map_locs(|q| q + off)));
    let rank_root = a1.rank[a1.init].max(a2.rank[a2.init]);
    let height_root = a1.height[a1.init].max(a2.height[a2.init]) + 1;
    let mut rank = vec![rank_root];
    rank.extend(&a1.rank);
    rank.extend(&a2.rank);
    let mut height = vec![height_root];
    height.extend(&a1.height);
    height.extend(&a2.height);
    Ok(RegisterAutomaton {
        alphabet: a1.alphabet.clone(),
        names,
        init: 0,
        registers: a1.registers.max(a2.registers),
        delta,
        rank,
        height,
    })
}

pub fn complement(a: &RegisterAutomaton) -> RegisterAutomaton {
    a.dual()
}

/// Intersection staying inside the least class containing both inputs.
pub fn intersect(a1: &RegisterAutomaton, a2: &RegisterAutomaton) -> Result<RegisterAutomaton, RaError> {
    let (c1, c2) = (a1.classify(), a2.classify());
    let one_way = c1.one_way && c2.one_way;
    let nondet = c1.nondeterministic && c2.nondeterministic;
    let universal = c1.universal && c2.universal;
    if one_way && nondet {
        product_1nra(a1, a2)
    } else if nondet && !universal {
        Err(RaError::UnsupportedClassCombination)
    } else if nondet && universal && !one_way {
        // Two-way deterministic automata: a conjunction leaves the class.
        Err(RaError::UnsupportedClassCombination)
    } else {
        disjoint_root(a1, a2, true)
    }
}

/// Union staying inside the least class containing both inputs.
pub fn union(a1: &RegisterAutomaton, a2: &RegisterAutomaton) -> Result<RegisterAutomaton, RaError> {
    let (c1, c2) = (a1.classify(), a2.classify());
    let one_way = c1.one_way && c2.one_way;
    let nondet = c1.nondeterministic && c2.nondeterministic;
    let universal = c1.universal && c2.universal;
    if universal && one_way {
        Ok(product_1nra(&a1.dual(), &a2.dual())?.dual())
    } else if universal {
        Err(RaError::UnsupportedClassCombination)
    } else {
        let _ = nondet;
        disjoint_root(a1, a2, false)
    }
}

/// The automaton of the running example: it accepts exactly the data words
/// in which no two `a` share a class and each `a` has a later `b` in its class.
pub const NONCE_RA: &str = "\
alphabet: a b
registers: 1
init: q1
q1 rank=4 height=3 : and q2 q3
q2 rank=4 height=0 : wX q1
q3 rank=4 height=2 : if a then q4 else q15
q4 rank=4 height=1 : store1 q5
q5 rank=4 height=0 : X q6
q6 rank=4 height=4 : and q7 q11
q7 rank=2 height=3 : and q8 q9
q8 rank=2 height=0 : wX q7
q9 rank=2 height=2 : if a then q10 else q15
q10 rank=2 height=1 : if up1 then q16 else q15
q11 rank=3 height=3 : or q12 q13
q12 rank=3 height=0 : X q11
q13 rank=3 height=2 : if b then q14 else q16
q14 rank=3 height=1 : if up1 then q15 else q16
q15 rank=0 height=0 : true
q16 rank=0 height=0 : false
";

pub fn nonce_ra() -> RegisterAutomaton {
    parse_ra(NONCE_RA).expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::make_data_word;

    fn aab() -> DataWord {
        make_data_word(&Alphabet::from_chars("ab"), &["a", "a", "b"], &[vec![0, 2], vec![1]]).unwrap()
    }

    #[test]
    fn nonce_automaton_is_valid_and_classified() {
        let a = nonce_ra();
        assert!(a.validate().is_empty());
        let c = a.classify();
        assert!(c.one_way && !c.nondeterministic && !c.universal && !c.deterministic);
        assert_eq!(parse_ra(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn validation_reports_violations() {
        let bad_height = "alphabet: a\nregisters: 0\ninit: q\nq rank=0 height=0 : and q q\n";
        let a = parse_ra(bad_height).unwrap();
        assert_eq!(a.validate(), vec![Violation::Height { from: 0, to: 0 }, Violation::Height { from: 0, to: 0 }]);
        let bad_rank = "alphabet: a\nregisters: 1\ninit: p\np rank=0 height=1 : store1 q\nq rank=1 height=0 : true\n";
        let a = parse_ra(bad_rank).unwrap();
        assert_eq!(a.validate(), vec![Violation::Rank { from: 0, to: 1 }]);
    }

    #[test]
    fn membership_examples() {
        let a = nonce_ra();
        assert!(!accepts(&a, &aab()).unwrap());
        let ab = make_data_word(&a.alphabet, &["a", "b"], &[vec![0, 1]]).unwrap();
        assert!(accepts(&a, &ab).unwrap());
        assert!(accepts(&a.dual(), &aab()).unwrap());
    }

    #[test]
    fn trivial_games() {
        let top = parse_ra("alphabet: a\nregisters: 0\ninit: q\nq rank=0 height=0 : true\n").unwrap();
        let w = make_data_word(&top.alphabet, &["a"], &[vec![0]]).unwrap();
        let g = acceptance_game(&top, &w, 10).unwrap();
        assert_eq!(g.game.len(), 1);
        assert_eq!(g.game.owner[0], Player::P2);
        assert!(accepts(&top, &w).unwrap());
        let next = parse_ra("alphabet: a\nregisters: 0\ninit: q\nq rank=0 height=0 : X p\np rank=0 height=0 : true\n").unwrap();
        let g = acceptance_game(&next, &w, 10).unwrap();
        assert_eq!((g.game.owner[0], g.game.succ[0].len()), (Player::P1, 0));
        assert!(!accepts(&next, &w).unwrap());
    }

    #[test]
    fn dual_table() {
        assert_eq!(Trans::True.dual(), Trans::False);
        assert_eq!(Trans::X(3).dual(), Trans::WX(3));
        assert_eq!(Trans::Store(1, 2).dual(), Trans::Store(1, 2));
        let a = nonce_ra();
        let dd = a.dual().dual();
        assert_eq!(dd.delta, a.delta);
        assert!(dd.rank.iter().zip(&a.rank).all(|(x, y)| *x == y + 2));
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(accepts_with_budget(&nonce_ra(), &aab(), 3), Err(RaError::StateSpaceBudgetExceeded(3)));
    }
}
