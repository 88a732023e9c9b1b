//! First-order logic over data words with ∼, <, and +k, and the two
//! translations between its two-variable fragment and simple LTL↓₁(O_m).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ltl::{classify, split_simple_operator, Ltl};
use crate::words::DataWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{0} is free but unassigned")]
    UnboundVariable(u32),
    #[error("position {pos} out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("formula uses variables other than x0 and x1")]
    NotTwoVariable,
    #[error("formula has a free variable other than x{0}")]
    WrongFreeVariable(u32),
    #[error("formula is not in the simple one-register fragment")]
    NotSimpleFragment,
}

pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fo {
    True,
    False,
    /// P_a(x)
    Letter(String, Var),
    /// x ∼ y
    Sim(Var, Var),
    /// x < y
    Lt(Var, Var),
    /// x = y + k
    Succ(Var, Var, u32),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Implies(Box<Fo>, Box<Fo>),
    Exists(Var, Box<Fo>),
    Forall(Var, Box<Fo>),
}

fn bx(f: Fo) -> Box<Fo> {
    Box::new(f)
}

impl Fo {
    pub fn not(f: Fo) -> Fo {
        Fo::Not(bx(f))
    }
    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(bx(a), bx(b))
    }
    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(bx(a), bx(b))
    }
    pub fn implies(a: Fo, b: Fo) -> Fo {
        Fo::Implies(bx(a), bx(b))
    }
    pub fn exists(x: Var, f: Fo) -> Fo {
        Fo::Exists(x, bx(f))
    }
    pub fn forall(x: Var, f: Fo) -> Fo {
        Fo::Forall(x, bx(f))
    }

    /// Right-nested conjunction; ⊤ when empty, the sole item when singleton.
    pub fn big_and(items: impl IntoIterator<Item = Fo>) -> Fo {
        let mut v: Vec<Fo> = items.into_iter().collect();
        match v.pop() {
            None => Fo::True,
            Some(last) => v.into_iter().rev().fold(last, |acc, f| Fo::and(f, acc)),
        }
    }

    pub fn children(&self) -> Vec<&Fo> {
        match self {
            Fo::True | Fo::False | Fo::Letter(..) | Fo::Sim(..) | Fo::Lt(..) | Fo::Succ(..) => vec![],
            Fo::Not(a) | Fo::Exists(_, a) | Fo::Forall(_, a) => vec![a],
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => vec![a, b],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            Fo::Letter(_, x) => BTreeSet::from([*x]),
            Fo::Sim(x, y) | Fo::Lt(x, y) | Fo::Succ(x, y, _) => BTreeSet::from([*x, *y]),
            Fo::Exists(x, a) | Fo::Forall(x, a) => {
                let mut s = a.free_vars();
                s.remove(x);
                s
            }
            _ => self.children().into_iter().flat_map(Fo::free_vars).collect(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = match self {
            Fo::Exists(x, _) | Fo::Forall(x, _) => BTreeSet::from([*x]),
            _ => BTreeSet::new(),
        };
        s.extend(self.free_vars());
        for c in self.children() {
            s.extend(c.vars());
        }
        s
    }

    pub fn is_two_variable(&self) -> bool {
        self.vars().iter().all(|&x| x <= 1)
    }

    /// Largest `k` in a `+k` atom.
    pub fn max_offset(&self) -> u32 {
        let own = if let Fo::Succ(_, _, k) = self { *k } else { 0 };
        self.children().into_iter().map(Fo::max_offset).fold(own, u32::max)
    }

    pub fn quantifier_depth(&self) -> usize {
        let own = usize::from(matches!(self, Fo::Exists(..) | Fo::Forall(..)));
        own + self.children().into_iter().map(Fo::quantifier_depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Fo::size).sum::<usize>()
    }

    /// Exchanges x0 and x1 throughout.
    pub fn swap01(&self) -> Fo {
        let s = |x: &Var| match *x {
            0 => 1,
            1 => 0,
            other => other,
        };
        match self {
            Fo::True => Fo::True,
            Fo::False => Fo::False,
            Fo::Letter(a, x) => Fo::Letter(a.clone(), s(x)),
            Fo::Sim(x, y) => Fo::Sim(s(x), s(y)),
            Fo::Lt(x, y) => Fo::Lt(s(x), s(y)),
            Fo::Succ(x, y, k) => Fo::Succ(s(x), s(y), *k),
            Fo::Not(a) => Fo::not(a.swap01()),
            Fo::And(a, b) => Fo::and(a.swap01(), b.swap01()),
            Fo::Or(a, b) => Fo::or(a.swap01(), b.swap01()),
            Fo::Implies(a, b) => Fo::implies(a.swap01(), b.swap01()),
            Fo::Exists(x, a) => Fo::exists(s(x), a.swap01()),
            Fo::Forall(x, a) => Fo::forall(s(x), a.swap01()),
        }
    }
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fo::True => write!(f, "true"),
            Fo::False => write!(f, "false"),
            Fo::Letter(a, x) => write!(f, "P{a}(x{x})"),
            Fo::Sim(x, y) => write!(f, "x{x} ~ x{y}"),
            Fo::Lt(x, y) => write!(f, "x{x} < x{y}"),
            Fo::Succ(x, y, 0) => write!(f, "x{x} = x{y}"),
            Fo::Succ(x, y, k) => write!(f, "x{x} = x{y} + {k}"),
            Fo::Not(a) => write!(f, "!({a})"),
            Fo::And(a, b) => write!(f, "({a} & {b})"),
            Fo::Or(a, b) => write!(f, "({a} | {b})"),
            Fo::Implies(a, b) => write!(f, "({a} -> {b})"),
            Fo::Exists(x, a) => write!(f, "exists x{x} ({a})"),
            Fo::Forall(x, a) => write!(f, "forall x{x} ({a})"),
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u32),
    Sym(&'static str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, FoError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1).map(|p| p.1) == Some('>') {
            out.push((pos, Tok::Sym("->")));
            i += 2;
            continue;
        }
        let sym = match c {
            '(' => Some("("),
            ')' => Some(")"),
            '!' => Some("!"),
            '&' => Some("&"),
            '|' => Some("|"),
            '~' => Some("~"),
            '<' => Some("<"),
            '=' => Some("="),
            '+' => Some("+"),
            _ => None,
        };
        if let Some(s) = sym {
            out.push((pos, Tok::Sym(s)));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut n = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                n.push(chars[i].1);
                i += 1;
            }
            let v = n.parse().map_err(|_| FoError::Syntax { pos, msg: "number too large".into() })?;
            out.push((pos, Tok::Num(v)));
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_alphanumeric() || matches!(chars[i].1, '_' | '.' | '\'' | '#')) {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((pos, Tok::Ident(s)));
            continue;
        }
        return Err(FoError::Syntax { pos, msg: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

fn var_name(s: &str) -> Option<Var> {
    let rest = s.strip_prefix('x')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FoError> {
        let pos = self.toks.get(self.at).map_or(self.end, |(p, _)| *p);
        Err(FoError::Syntax { pos, msg: msg.into() })
    }
    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(t)) if *t == s) {
            self.at += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, s: &str) -> Result<(), FoError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }
    fn var(&mut self) -> Result<Var, FoError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if let Some(v) = var_name(s) {
                self.at += 1;
                return Ok(v);
            }
        }
        self.err("expected a variable")
    }

    fn imp(&mut self) -> Result<Fo, FoError> {
        let lhs = self.or()?;
        if self.eat("->") {
            return Ok(Fo::implies(lhs, self.imp()?));
        }
        Ok(lhs)
    }
    fn or(&mut self) -> Result<Fo, FoError> {
        let mut f = self.and()?;
        while self.eat("|") {
            f = Fo::or(f, self.and()?);
        }
        Ok(f)
    }
    fn and(&mut self) -> Result<Fo, FoError> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Fo::and(f, self.unary()?);
        }
        Ok(f)
    }
    fn unary(&mut self) -> Result<Fo, FoError> {
        if self.eat("!") {
            return Ok(Fo::not(self.unary()?));
        }
        if let Some(Tok::Ident(s)) = self.peek() {
            let quant = match s.as_str() {
                "exists" => Some(true),
                "forall" => Some(false),
                _ => None,
            };
            if let Some(ex) = quant {
                self.at += 1;
                let x = self.var()?;
                let body = self.unary()?;
                return Ok(if ex { Fo::exists(x, body) } else { Fo::forall(x, body) });
            }
        }
        self.primary()
    }
    fn primary(&mut self) -> Result<Fo, FoError> {
        if self.eat("(") {
            let f = self.imp()?;
            self.expect(")")?;
            return Ok(f);
        }
        let Some(Tok::Ident(word)) = self.peek().cloned() else {
            return self.err("expected a formula");
        };
        match word.as_str() {
            "true" => {
                self.at += 1;
                return Ok(Fo::True);
            }
            "false" => {
                self.at += 1;
                return Ok(Fo::False);
            }
            _ => {}
        }
        if let Some(x) = var_name(&word) {
            self.at += 1;
            if self.eat("~") {
                return Ok(Fo::Sim(x, self.var()?));
            }
            if self.eat("<") {
                return Ok(Fo::Lt(x, self.var()?));
            }
            if self.eat("=") {
                let y = self.var()?;
                let k = if self.eat("+") {
                    match self.peek() {
                        Some(Tok::Num(k)) => {
                            let k = *k;
                            self.at += 1;
                            k
                        }
                        _ => return self.err("expected a number"),
                    }
                } else {
                    0
                };
                return Ok(Fo::Succ(x, y, k));
            }
            return self.err("expected `~`, `<` or `=`");
        }
        if let Some(letter) = word.strip_prefix('P') {
            if !letter.is_empty() {
                self.at += 1;
                self.expect("(")?;
                let x = self.var()?;
                self.expect(")")?;
                return Ok(Fo::Letter(letter.to_string(), x));
            }
        }
        self.err(format!("unexpected `{word}`"))
    }
}

pub fn parse_fo(text: &str) -> Result<Fo, FoError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let f = p.imp()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

// -------------------------------------------------------------- semantics

/// Assignment of positions to variables, indexed by variable number.
pub type Assignment = Vec<Option<usize>>;

pub fn eval_fo(w: &DataWord, asg: &[Option<usize>], phi: &Fo) -> Result<bool, FoError> {
    for x in phi.free_vars() {
        match asg.get(x as usize).copied().flatten() {
            None => return Err(FoError::UnboundVariable(x)),
            Some(p) if p >= w.len() => return Err(FoError::PositionOutOfRange { pos: p, len: w.len() }),
            _ => {}
        }
    }
    let width = phi.vars().iter().max().map_or(0, |&m| m as usize + 1).max(asg.len());
    let mut env: Vec<usize> = (0..width).map(|i| asg.get(i).copied().flatten().unwrap_or(0)).collect();
    Ok(sat(w, &mut env, phi))
}

/// Convenience: evaluates with `x_j ↦ i`.
pub fn holds_at(w: &DataWord, j: Var, i: usize, phi: &Fo) -> bool {
    let mut asg = vec![None; j as usize + 1];
    asg[j as usize] = Some(i);
    eval_fo(w, &asg, phi).expect("assignment covers the free variable")
}

fn sat(w: &DataWord, env: &mut Vec<usize>, phi: &Fo) -> bool {
    let at = |env: &Vec<usize>, x: &Var| env[*x as usize];
    match phi {
        Fo::True => true,
        Fo::False => false,
        Fo::Letter(a, x) => w.letter_name(at(env, x)) == a,
        Fo::Sim(x, y) => w.class_of(at(env, x)) == w.class_of(at(env, y)),
        Fo::Lt(x, y) => at(env, x) < at(env, y),
        Fo::Succ(x, y, k) => at(env, x) == at(env, y) + *k as usize,
        Fo::Not(a) => !sat(w, env, a),
        Fo::And(a, b) => sat(w, env, a) && sat(w, env, b),
        Fo::Or(a, b) => sat(w, env, a) || sat(w, env, b),
        Fo::Implies(a, b) => !sat(w, env, a) || sat(w, env, b),
        Fo::Exists(x, a) | Fo::Forall(x, a) => {
            let exists = matches!(phi, Fo::Exists(..));
            let saved = env[*x as usize];
            let mut result = !exists;
            for p in 0..w.len() {
                env[*x as usize] = p;
                if sat(w, env, a) == exists {
                    result = exists;
                    break;
                }
            }
            env[*x as usize] = saved;
            result
        }
    }
}

// ------------------------------------------------------------ translations

/// χ^j_k: the position of x_{1−j} relative to x_j is exactly `k` for
/// |k| ≤ m, and beyond m in the direction of `k` for |k| = m+1.
pub fn chi(j: Var, k: i64, m: u32) -> Fo {
    assert!(j <= 1 && k.unsigned_abs() <= m as u64 + 1, "χ index out of range");
    let (xj, xo) = (j, 1 - j);
    let lim = m as i64;
    if k == 0 {
        Fo::Succ(xo, xj, 0)
    } else if (1..=lim).contains(&k) {
        Fo::Succ(xo, xj, k as u32)
    } else if (-lim..=-1).contains(&k) {
        Fo::Succ(xj, xo, (-k) as u32)
    } else if k > 0 {
        Fo::big_and(
            std::iter::once(Fo::Lt(xj, xo)).chain((1..=m).map(|kk| Fo::not(Fo::Succ(xo, xj, kk)))),
        )
    } else {
        Fo::big_and(
            std::iter::once(Fo::Lt(xo, xj)).chain((1..=m).map(|kk| Fo::not(Fo::Succ(xj, xo, kk)))),
        )
    }
}

/// T_j: simple LTL↓₁(O_m) to two-variable FO with at most x_j free.
pub fn simple_ltl_to_fo2(phi: &Ltl, j: Var) -> Result<Fo, FoError> {
    let m = classify(phi).simple_m.ok_or(FoError::NotSimpleFragment)?;
    simple_ltl_to_fo2_with(phi, j, m)
}

/// T_j for an explicitly chosen `m`.
pub fn simple_ltl_to_fo2_with(phi: &Ltl, j: Var, m: usize) -> Result<Fo, FoError> {
    if !crate::ltl::is_simple_in(phi, m) || j > 1 {
        return Err(FoError::NotSimpleFragment);
    }
    Ok(t(phi, j, m))
}

fn t(phi: &Ltl, j: Var, m: usize) -> Fo {
    match phi {
        Ltl::True => Fo::True,
        Ltl::False => Fo::False,
        Ltl::Atom(a) => Fo::Letter(a.clone(), j),
        Ltl::NAtom(a) => Fo::not(Fo::Letter(a.clone(), j)),
        Ltl::Reg(_) => Fo::Sim(1 - j, j),
        Ltl::NReg(_) => Fo::not(Fo::Sim(1 - j, j)),
        Ltl::Not(a) => Fo::not(t(a, j, m)),
        Ltl::And(a, b) => Fo::and(t(a, j, m), t(b, j, m)),
        Ltl::Or(a, b) => Fo::or(t(a, j, m), t(b, j, m)),
        Ltl::Implies(a, b) => Fo::implies(t(a, j, m), t(b, j, m)),
        Ltl::Store(..) => {
            let (k, body) = split_simple_operator(phi, m).expect("checked simple");
            Fo::exists(1 - j, Fo::and(chi(j, k, m as u32), t(body, 1 - j, m)))
        }
        _ => unreachable!("checked simple"),
    }
}

/// T'_j: two-variable FO with at most x_j free to simple LTL↓₁(O_m), where
/// m is the largest offset in the formula.
pub fn fo2_to_simple_ltl(phi: &Fo, j: Var) -> Result<Ltl, FoError> {
    if !phi.is_two_variable() || j > 1 {
        return Err(FoError::NotTwoVariable);
    }
    if let Some(&x) = phi.free_vars().iter().find(|&&x| x != j) {
        return Err(FoError::WrongFreeVariable(x));
    }
    let mut tr = Translator { m: phi.max_offset() as i64, memo: HashMap::new() };
    Ok(tr.run(phi, j))
}

struct Translator {
    m: i64,
    memo: HashMap<(Fo, Var), Ltl>,
}

// Constant-folding constructors keep the exponential disjunctions small.
fn s_not(f: Ltl) -> Ltl {
    match f {
        Ltl::True => Ltl::False,
        Ltl::False => Ltl::True,
        Ltl::Not(a) => *a,
        other => Ltl::not(other),
    }
}
fn s_and(a: Ltl, b: Ltl) -> Ltl {
    match (a, b) {
        (Ltl::False, _) | (_, Ltl::False) => Ltl::False,
        (Ltl::True, x) | (x, Ltl::True) => x,
        (x, y) => Ltl::and(x, y),
    }
}
fn s_or(a: Ltl, b: Ltl) -> Ltl {
    match (a, b) {
        (Ltl::True, _) | (_, Ltl::True) => Ltl::True,
        (Ltl::False, x) | (x, Ltl::False) => x,
        (x, y) => Ltl::or(x, y),
    }
}

enum Unit {
    Alpha(Fo),
    Xi(usize),
    Zeta(Fo),
}

impl Translator {
    fn run(&mut self, phi: &Fo, j: Var) -> Ltl {
        if let Some(hit) = self.memo.get(&(phi.clone(), j)) {
            return hit.clone();
        }
        let out = self.translate(phi, j);
        self.memo.insert((phi.clone(), j), out.clone());
        out
    }

    fn translate(&mut self, phi: &Fo, j: Var) -> Ltl {
        match phi {
            Fo::True => Ltl::True,
            Fo::False => Ltl::False,
            Fo::Letter(a, _) => Ltl::atom(a),
            // Atoms over x_j alone.
            Fo::Sim(..) => Ltl::True,
            Fo::Lt(..) => Ltl::False,
            Fo::Succ(_, _, k) => {
                if *k == 0 {
                    Ltl::True
                } else {
                    Ltl::False
                }
            }
            Fo::Not(a) => s_not(self.run(a, j)),
            Fo::And(a, b) => s_and(self.run(a, j), self.run(b, j)),
            Fo::Or(a, b) => s_or(self.run(a, j), self.run(b, j)),
            Fo::Implies(a, b) => s_or(s_not(self.run(a, j)), self.run(b, j)),
            Fo::Forall(x, a) => s_not(self.run(&Fo::exists(*x, Fo::not((**a).clone())), j)),
            Fo::Exists(x, body) if *x == j => {
                // A sentence: rename so the bound variable is x_{1−j}.
                let renamed = body.swap01();
                self.exists_other(&renamed, j)
            }
            Fo::Exists(_, body) => self.exists_other(body, j),
        }
    }

    /// Translates ∃x_{1−j} body, where body has at most x0, x1 free.
    fn exists_other(&mut self, body: &Fo, j: Var) -> Ltl {
        let o = 1 - j;
        let mut xis: Vec<Fo> = Vec::new();
        let skeleton = self.skeleton(body, j, &mut xis);
        let xi_tr: Vec<Ltl> = xis.iter().map(|f| self.run(f, j)).collect();
        // ζ translations are shared by all disjuncts.
        let mut zeta_tr: HashMap<Fo, Ltl> = HashMap::new();
        collect_zetas(&skeleton, &mut |z| {
            zeta_tr.entry(z.clone()).or_insert_with(|| Ltl::True);
        });
        for z in zeta_tr.keys().cloned().collect::<Vec<_>>() {
            let tr = self.run(&z, o);
            zeta_tr.insert(z, tr);
        }
        let m = self.m;
        let mut disjuncts = Ltl::False;
        for k in -(m + 1)..=(m + 1) {
            for b in [true, false] {
                // x_j and x_{1−j} at the same position share a class.
                if k == 0 && !b {
                    continue;
                }
                for set in 0u64..(1u64 << xis.len()) {
                    let beta = eval_skeleton(&skeleton, &|f: &Fo| alpha_value(f, j, k, b, m), set, &zeta_tr);
                    if beta == Ltl::False {
                        continue;
                    }
                    let reg = if b { Ltl::Reg(1) } else { Ltl::NReg(1) };
                    let inner = s_and(reg, beta);
                    let op = o_k(k, m, inner);
                    let guards = xi_tr.iter().enumerate().fold(Ltl::True, |acc, (i, tr)| {
                        let lit = if set >> i & 1 == 1 { tr.clone() } else { s_not(tr.clone()) };
                        s_and(acc, lit)
                    });
                    disjuncts = s_or(disjuncts, s_and(guards, op));
                }
            }
        }
        disjuncts
    }

    fn skeleton(&mut self, f: &Fo, j: Var, xis: &mut Vec<Fo>) -> Skel {
        match f {
            Fo::True => Skel::Const(true),
            Fo::False => Skel::Const(false),
            Fo::Not(a) => Skel::Not(Box::new(self.skeleton(a, j, xis))),
            Fo::And(a, b) => Skel::And(Box::new(self.skeleton(a, j, xis)), Box::new(self.skeleton(b, j, xis))),
            Fo::Or(a, b) => Skel::Or(Box::new(self.skeleton(a, j, xis)), Box::new(self.skeleton(b, j, xis))),
            Fo::Implies(a, b) => Skel::Or(
                Box::new(Skel::Not(Box::new(self.skeleton(a, j, xis)))),
                Box::new(self.skeleton(b, j, xis)),
            ),
            unit => {
                let fv = unit.free_vars();
                let u = if fv.len() == 2 {
                    Unit::Alpha(unit.clone())
                } else if fv.iter().all(|&x| x == j) {
                    let idx = xis.iter().position(|x| x == unit).unwrap_or_else(|| {
                        xis.push(unit.clone());
                        xis.len() - 1
                    });
                    Unit::Xi(idx)
                } else {
                    Unit::Zeta(unit.clone())
                };
                Skel::Unit(u)
            }
        }
    }
}

enum Skel {
    Const(bool),
    Unit(Unit),
    Not(Box<Skel>),
    And(Box<Skel>, Box<Skel>),
    Or(Box<Skel>, Box<Skel>),
}

fn collect_zetas(s: &Skel, f: &mut dyn FnMut(&Fo)) {
    match s {
        Skel::Const(_) | Skel::Unit(Unit::Alpha(_)) | Skel::Unit(Unit::Xi(_)) => {}
        Skel::Unit(Unit::Zeta(z)) => f(z),
        Skel::Not(a) => collect_zetas(a, f),
        Skel::And(a, b) | Skel::Or(a, b) => {
            collect_zetas(a, f);
            collect_zetas(b, f);
        }
    }
}

fn eval_skeleton(s: &Skel, alpha: &dyn Fn(&Fo) -> bool, set: u64, zetas: &HashMap<Fo, Ltl>) -> Ltl {
    let c = |b: bool| if b { Ltl::True } else { Ltl::False };
    match s {
        Skel::Const(b) => c(*b),
        Skel::Unit(Unit::Alpha(f)) => c(alpha(f)),
        Skel::Unit(Unit::Xi(i)) => c(set >> i & 1 == 1),
        Skel::Unit(Unit::Zeta(z)) => zetas[z].clone(),
        Skel::Not(a) => s_not(eval_skeleton(a, alpha, set, zetas)),
        Skel::And(a, b) => s_and(eval_skeleton(a, alpha, set, zetas), eval_skeleton(b, alpha, set, zetas)),
        Skel::Or(a, b) => s_or(eval_skeleton(a, alpha, set, zetas), eval_skeleton(b, alpha, set, zetas)),
    }
}

/// Truth of a two-variable atom given the offset class `k` of x_{1−j}
/// relative to x_j and whether the two positions share a class.
fn alpha_value(f: &Fo, j: Var, k: i64, same_class: bool, m: i64) -> bool {
    // Offset d = pos(x_{1−j}) − pos(x_j); exact for |k| ≤ m, otherwise only
    // its sign is known and |d| > m.
    let offset_is = |d: i64| if k.abs() <= m { k == d } else { false };
    let pos = |x: Var| if x == j { 0i64 } else { 1 };
    match f {
        Fo::Sim(..) => same_class,
        Fo::Lt(x, y) => {
            // pos(x) < pos(y) ⇔ sign of (pos(y) − pos(x)) in units of d.
            let dir = pos(*y) - pos(*x);
            (dir > 0 && k > 0) || (dir < 0 && k < 0)
        }
        Fo::Succ(x, y, kk) => {
            let dir = pos(*x) - pos(*y);
            let need = dir * *kk as i64;
            offset_is(need)
        }
        _ => unreachable!("only two-variable atoms are α units"),
    }
}

fn o_k(k: i64, m: i64, body: Ltl) -> Ltl {
    let inner = if k.abs() == m + 1 {
        let f = if k > 0 { Ltl::f(body) } else { Ltl::finv(body) };
        Ltl::x_pow(k, f)
    } else {
        Ltl::x_pow(k, body)
    };
    Ltl::store(1, inner)
}

/// The nonce property written with two variables.
pub fn nonce_formula_fo() -> Fo {
    parse_fo(
        "forall x1 ((!(x1 < x0) & Pa(x1)) -> \
           (forall x0 ((x1 < x0 & Pa(x0)) -> !(x1 ~ x0)) & \
            exists x0 (x1 < x0 & Pb(x0) & x1 ~ x0)))",
    )
    .expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{holds_at as ltl_at, is_simple_in, parse_ltl};
    use crate::words::{enumerate_data_words, make_data_word, Alphabet};

    fn aab() -> DataWord {
        make_data_word(&Alphabet::from_chars("ab"), &["a", "a", "b"], &[vec![0, 2], vec![1]]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f = nonce_formula_fo();
        assert_eq!(parse_fo(&f.to_string()).unwrap(), f);
        assert_eq!(f.free_vars(), BTreeSet::from([0]));
        assert!(f.is_two_variable());
        assert_eq!(parse_fo("x1 = x0 + 2").unwrap(), Fo::Succ(1, 0, 2));
        assert!(parse_fo("x1 = ").is_err());
    }

    #[test]
    fn evaluation_examples() {
        assert!(!eval_fo(&aab(), &[Some(0)], &nonce_formula_fo()).unwrap());
        assert!(eval_fo(&aab(), &[Some(1)], &parse_fo("x0 = x0 + 0").unwrap()).unwrap());
        let ab = make_data_word(&Alphabet::from_chars("ab"), &["a", "b"], &[vec![0, 1]]).unwrap();
        assert!(eval_fo(&ab, &[Some(0)], &parse_fo("exists x1 (x0 < x1 & x0 ~ x1)").unwrap()).unwrap());
        assert_eq!(eval_fo(&ab, &[], &parse_fo("Pa(x0)").unwrap()), Err(FoError::UnboundVariable(0)));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0, 0, 3), Fo::Succ(1, 0, 0));
        assert_eq!(chi(0, 1, 1), Fo::Succ(1, 0, 1));
        assert_eq!(chi(1, 1, 0), Fo::Lt(1, 0));
        assert_eq!(chi(0, -2, 1), Fo::and(Fo::Lt(1, 0), Fo::not(Fo::Succ(0, 1, 1))));
    }

    #[test]
    fn forward_translation_examples() {
        let s = |t: &str| parse_ltl(t, None).unwrap();
        assert_eq!(simple_ltl_to_fo2(&s("a"), 0).unwrap(), Fo::Letter("a".into(), 0));
        assert_eq!(simple_ltl_to_fo2_with(&s("up1"), 1, 0).unwrap(), Fo::Sim(0, 1));
        let f = simple_ltl_to_fo2(&s("store1 X (b & up1)"), 0).unwrap();
        assert_eq!(f, parse_fo("exists x1 (x1 = x0 + 1 & (Pb(x1) & x0 ~ x1))").unwrap());
        assert_eq!(simple_ltl_to_fo2(&s("G a"), 0), Err(FoError::NotSimpleFragment));
    }

    #[test]
    fn backward_translation_matches_on_small_words() {
        let ab = Alphabet::from_chars("ab");
        let cases = ["Pa(x0)", "exists x1 (x1 = x0 & Pa(x1))", "exists x1 (x1 = x0 + 1 & !(x0 ~ x1))"];
        for text in cases {
            let f = parse_fo(text).unwrap();
            let g = fo2_to_simple_ltl(&f, 0).unwrap();
            assert!(is_simple_in(&g, f.max_offset() as usize), "{g}");
            for w in enumerate_data_words(&ab, 3) {
                for i in 0..w.len() {
                    assert_eq!(holds_at(&w, 0, i, &f), ltl_at(&w, i, &g), "{text} on {w} at {i}");
                }
            }
        }
        assert_eq!(fo2_to_simple_ltl(&parse_fo("Pa(x0)").unwrap(), 0).unwrap(), Ltl::atom("a"));
        assert_eq!(fo2_to_simple_ltl(&parse_fo("Pa(x2)").unwrap(), 0), Err(FoError::NotTwoVariable));
        assert_eq!(fo2_to_simple_ltl(&parse_fo("Pa(x1)").unwrap(), 0), Err(FoError::WrongFreeVariable(1)));
    }
}
