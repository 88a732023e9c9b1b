//! LTL with the freeze quantifier: syntax, parser, satisfaction relation,
//! negation normal form and fragment classification.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::words::{enumerate_data_words, Alphabet, ClassId, DataWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtlError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("atom `{0}` is not in the alphabet")]
    UnknownAtom(String),
    #[error("position {pos} out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("register {0} holds a class that does not belong to the word")]
    ForeignValuation(u32),
    #[error("register indices start at 1")]
    ZeroRegister,
}

/// Formulas. `F`, `G`, their past versions and `Implies` are surface sugar;
/// the `N*`/`W*` variants are the duals produced by [`nnf`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    /// ā: the current letter is not `a`.
    NAtom(String),
    /// ↑r
    Reg(u32),
    /// ¬↑r
    NReg(u32),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    X(Box<Ltl>),
    Xinv(Box<Ltl>),
    /// Weak next X̄: true at the last position.
    WX(Box<Ltl>),
    /// Weak previous X̄⁻¹: true at position 0.
    WXinv(Box<Ltl>),
    F(Box<Ltl>),
    Finv(Box<Ltl>),
    G(Box<Ltl>),
    Ginv(Box<Ltl>),
    U(Box<Ltl>, Box<Ltl>),
    Uinv(Box<Ltl>, Box<Ltl>),
    /// ψ Ū χ ≡ ¬(¬ψ U ¬χ)
    NU(Box<Ltl>, Box<Ltl>),
    NUinv(Box<Ltl>, Box<Ltl>),
    /// ↓r
    Store(u32, Box<Ltl>),
}

use Ltl::*;

fn bx(f: Ltl) -> Box<Ltl> {
    Box::new(f)
}

impl Ltl {
    pub fn atom(a: &str) -> Ltl {
        Atom(a.to_string())
    }
    pub fn not(f: Ltl) -> Ltl {
        Not(bx(f))
    }
    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        And(bx(a), bx(b))
    }
    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Or(bx(a), bx(b))
    }
    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Implies(bx(a), bx(b))
    }
    pub fn x(f: Ltl) -> Ltl {
        X(bx(f))
    }
    pub fn xinv(f: Ltl) -> Ltl {
        Xinv(bx(f))
    }
    pub fn f(f: Ltl) -> Ltl {
        F(bx(f))
    }
    pub fn finv(f: Ltl) -> Ltl {
        Finv(bx(f))
    }
    pub fn g(f: Ltl) -> Ltl {
        G(bx(f))
    }
    pub fn u(a: Ltl, b: Ltl) -> Ltl {
        U(bx(a), bx(b))
    }
    pub fn store(r: u32, f: Ltl) -> Ltl {
        Store(r, bx(f))
    }
    /// X applied `k` times (X⁻¹ for negative `k`).
    pub fn x_pow(k: i64, f: Ltl) -> Ltl {
        let mut out = f;
        for _ in 0..k.unsigned_abs() {
            out = if k > 0 { Ltl::x(out) } else { Ltl::xinv(out) };
        }
        out
    }

    /// Right-nested conjunction; ⊤ when empty.
    pub fn big_and(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut v: Vec<Ltl> = items.into_iter().collect();
        match v.pop() {
            None => True,
            Some(last) => v.into_iter().rev().fold(last, |acc, f| Ltl::and(f, acc)),
        }
    }

    /// Right-nested disjunction; ⊥ when empty.
    pub fn big_or(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut v: Vec<Ltl> = items.into_iter().collect();
        match v.pop() {
            None => False,
            Some(last) => v.into_iter().rev().fold(last, |acc, f| Ltl::or(f, acc)),
        }
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            True | False | Atom(_) | NAtom(_) | Reg(_) | NReg(_) => vec![],
            Not(a) | X(a) | Xinv(a) | WX(a) | WXinv(a) | F(a) | Finv(a) | G(a) | Ginv(a) | Store(_, a) => {
                vec![a]
            }
            And(a, b) | Or(a, b) | Implies(a, b) | U(a, b) | Uinv(a, b) | NU(a, b) | NUinv(a, b) => vec![a, b],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Ltl::size).sum::<usize>()
    }

    pub fn free_registers(&self) -> BTreeSet<u32> {
        match self {
            Reg(r) | NReg(r) => BTreeSet::from([*r]),
            Store(r, a) => {
                let mut s = a.free_registers();
                s.remove(r);
                s
            }
            _ => self.children().into_iter().flat_map(Ltl::free_registers).collect(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_registers().is_empty()
    }

    pub fn max_register(&self) -> u32 {
        let own = match self {
            Reg(r) | NReg(r) | Store(r, _) => *r,
            _ => 0,
        };
        self.children().into_iter().map(Ltl::max_register).fold(own, u32::max)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        match self {
            Atom(a) | NAtom(a) => BTreeSet::from([a.clone()]),
            _ => self.children().into_iter().flat_map(Ltl::atoms).collect(),
        }
    }

    fn temporal_op(&self) -> Option<TemporalOp> {
        Some(match self {
            X(_) => TemporalOp::X,
            Xinv(_) => TemporalOp::Xinv,
            WX(_) => TemporalOp::WX,
            WXinv(_) => TemporalOp::WXinv,
            F(_) => TemporalOp::F,
            Finv(_) => TemporalOp::Finv,
            G(_) => TemporalOp::G,
            Ginv(_) => TemporalOp::Ginv,
            U(..) => TemporalOp::U,
            Uinv(..) => TemporalOp::Uinv,
            NU(..) => TemporalOp::NU,
            NUinv(..) => TemporalOp::NUinv,
            _ => return None,
        })
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            NAtom(a) => write!(f, "~{a}"),
            Reg(r) => write!(f, "up{r}"),
            NReg(r) => write!(f, "~up{r}"),
            Not(a) => write!(f, "!{a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            X(a) => write!(f, "X {a}"),
            Xinv(a) => write!(f, "Xp {a}"),
            WX(a) => write!(f, "wX {a}"),
            WXinv(a) => write!(f, "wXp {a}"),
            F(a) => write!(f, "F {a}"),
            Finv(a) => write!(f, "Fp {a}"),
            G(a) => write!(f, "G {a}"),
            Ginv(a) => write!(f, "Gp {a}"),
            U(a, b) => write!(f, "({a} U {b})"),
            Uinv(a, b) => write!(f, "({a} Up {b})"),
            NU(a, b) => write!(f, "({a} nU {b})"),
            NUinv(a, b) => write!(f, "({a} nUp {b})"),
            Store(r, a) => write!(f, "store{r} {a}"),
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Bang,
    Tilde,
    Amp,
    Bar,
    Arrow,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '#' | '$')
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, LtlError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' => Tok::Bang,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '-' => {
                it.next();
                match it.peek() {
                    Some(&(_, '>')) => Tok::Arrow,
                    _ => return Err(LtlError::Syntax { pos, msg: "expected `->`".into() }),
                }
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    it.next();
                }
                out.push((pos, Tok::Ident(s)));
                continue;
            }
            other => return Err(LtlError::Syntax { pos, msg: format!("unexpected character `{other}`") }),
        };
        it.next();
        out.push((pos, tok));
    }
    Ok(out)
}

fn numbered(word: &str, prefix: &str) -> Option<u32> {
    let rest = word.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    alphabet: Option<&'a Alphabet>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LtlError> {
        Err(LtlError::Syntax { pos: self.pos(), msg: msg.into() })
    }
    fn ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    fn imp(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let rhs = self.imp()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ltl, LtlError> {
        let mut items = vec![self.and()?];
        while self.peek() == Some(&Tok::Bar) {
            self.at += 1;
            items.push(self.and()?);
        }
        Ok(left_fold(items, Ltl::or))
    }

    fn and(&mut self) -> Result<Ltl, LtlError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Tok::Amp) {
            self.at += 1;
            items.push(self.unary()?);
        }
        Ok(left_fold(items, Ltl::and))
    }

    fn unary(&mut self) -> Result<Ltl, LtlError> {
        if self.peek() == Some(&Tok::Bang) {
            self.at += 1;
            return Ok(Ltl::not(self.unary()?));
        }
        if let Some(word) = self.ident() {
            let prefix: Option<fn(Box<Ltl>) -> Ltl> = match word {
                "X" => Some(X),
                "Xp" => Some(Xinv),
                "wX" => Some(WX),
                "wXp" => Some(WXinv),
                "F" => Some(F),
                "Fp" => Some(Finv),
                "G" => Some(G),
                "Gp" => Some(Ginv),
                _ => None,
            };
            if let Some(op) = prefix {
                self.at += 1;
                return Ok(op(bx(self.unary()?)));
            }
            if let Some(r) = numbered(word, "store") {
                if r == 0 {
                    return self.err("register indices start at 1");
                }
                self.at += 1;
                return Ok(Ltl::store(r, self.unary()?));
            }
        }
        self.until()
    }

    fn until(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.primary()?;
        let op: Option<fn(Box<Ltl>, Box<Ltl>) -> Ltl> = match self.ident() {
            Some("U") => Some(U),
            Some("Up") => Some(Uinv),
            Some("nU") => Some(NU),
            Some("nUp") => Some(NUinv),
            _ => None,
        };
        if let Some(op) = op {
            self.at += 1;
            let rhs = self.unary()?;
            return Ok(op(bx(lhs), bx(rhs)));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Ltl, LtlError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.imp()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(f)
            }
            Some(Tok::Tilde) => {
                self.at += 1;
                match self.primary()? {
                    Atom(a) => Ok(NAtom(a)),
                    Reg(r) => Ok(NReg(r)),
                    _ => self.err("`~` applies only to letters and register tests"),
                }
            }
            Some(Tok::Ident(word)) => {
                let f = match word.as_str() {
                    "true" => True,
                    "false" => False,
                    "X" | "Xp" | "wX" | "wXp" | "F" | "Fp" | "G" | "Gp" | "U" | "Up" | "nU" | "nUp" => {
                        return self.err(format!("operator `{word}` where a formula was expected"))
                    }
                    w => {
                        if let Some(r) = numbered(w, "up") {
                            if r == 0 {
                                return self.err("register indices start at 1");
                            }
                            Reg(r)
                        } else if numbered(w, "store").is_some() {
                            return self.err("`store` needs a body");
                        } else {
                            if let Some(alpha) = self.alphabet {
                                if alpha.lookup(w).is_none() {
                                    return Err(LtlError::UnknownAtom(w.to_string()));
                                }
                            }
                            Atom(w.to_string())
                        }
                    }
                };
                self.at += 1;
                Ok(f)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn left_fold(items: Vec<Ltl>, op: fn(Ltl, Ltl) -> Ltl) -> Ltl {
    let mut it = items.into_iter();
    let first = it.next().expect("at least one operand");
    it.fold(first, op)
}

/// Parses a formula. When an alphabet is given, atoms are checked against it.
pub fn parse_ltl(text: &str, alphabet: Option<&Alphabet>) -> Result<Ltl, LtlError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), alphabet };
    let f = p.imp()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

// -------------------------------------------------------------- semantics

/// Partial map from registers (1-based) to classes of one data word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Valuation(Vec<Option<ClassId>>);

impl Valuation {
    pub fn empty() -> Self {
        Valuation(Vec::new())
    }
    pub fn get(&self, r: u32) -> Option<ClassId> {
        self.0.get(r as usize - 1).copied().flatten()
    }
    pub fn set(&mut self, r: u32, c: ClassId) {
        let idx = r as usize - 1;
        if self.0.len() <= idx {
            self.0.resize(idx + 1, None);
        }
        self.0[idx] = Some(c);
    }
    pub fn with(&self, r: u32, c: ClassId) -> Self {
        let mut v = self.clone();
        v.set(r, c);
        v
    }
    pub fn entries(&self) -> impl Iterator<Item = (u32, ClassId)> + '_ {
        self.0.iter().enumerate().filter_map(|(i, c)| c.map(|c| (i as u32 + 1, c)))
    }
}

/// σ, i ⊨_v φ
pub fn eval(w: &DataWord, i: usize, v: &Valuation, phi: &Ltl) -> Result<bool, LtlError> {
    if i >= w.len() {
        return Err(LtlError::PositionOutOfRange { pos: i, len: w.len() });
    }
    if let Some((r, _)) = v.entries().find(|(_, c)| c.0 >= w.num_classes()) {
        return Err(LtlError::ForeignValuation(r));
    }
    if uses_register_zero(phi) {
        return Err(LtlError::ZeroRegister);
    }
    Ok(sat(w, i, v, phi))
}

fn uses_register_zero(phi: &Ltl) -> bool {
    matches!(phi, Reg(0) | NReg(0) | Store(0, _)) || phi.children().into_iter().any(uses_register_zero)
}

fn sat(w: &DataWord, i: usize, v: &Valuation, phi: &Ltl) -> bool {
    let n = w.len();
    match phi {
        True => true,
        False => false,
        Atom(a) => w.letter_name(i) == a,
        NAtom(a) => w.letter_name(i) != a,
        Reg(r) => v.get(*r) == Some(w.class_of(i)),
        NReg(r) => v.get(*r) != Some(w.class_of(i)),
        Not(a) => !sat(w, i, v, a),
        And(a, b) => sat(w, i, v, a) && sat(w, i, v, b),
        Or(a, b) => sat(w, i, v, a) || sat(w, i, v, b),
        Implies(a, b) => !sat(w, i, v, a) || sat(w, i, v, b),
        X(a) => i + 1 < n && sat(w, i + 1, v, a),
        Xinv(a) => i > 0 && sat(w, i - 1, v, a),
        WX(a) => i + 1 >= n || sat(w, i + 1, v, a),
        WXinv(a) => i == 0 || sat(w, i - 1, v, a),
        F(a) => (i..n).any(|j| sat(w, j, v, a)),
        Finv(a) => (0..=i).any(|j| sat(w, j, v, a)),
        G(a) => (i..n).all(|j| sat(w, j, v, a)),
        Ginv(a) => (0..=i).all(|j| sat(w, j, v, a)),
        U(a, b) => {
            for j in i..n {
                if sat(w, j, v, b) {
                    return true;
                }
                if !sat(w, j, v, a) {
                    return false;
                }
            }
            false
        }
        Uinv(a, b) => {
            for j in (0..=i).rev() {
                if sat(w, j, v, b) {
                    return true;
                }
                if !sat(w, j, v, a) {
                    return false;
                }
            }
            false
        }
        NU(a, b) => {
            for j in i..n {
                if !sat(w, j, v, b) {
                    return false;
                }
                if sat(w, j, v, a) {
                    return true;
                }
            }
            true
        }
        NUinv(a, b) => {
            for j in (0..=i).rev() {
                if !sat(w, j, v, b) {
                    return false;
                }
                if sat(w, j, v, a) {
                    return true;
                }
            }
            true
        }
        Store(r, a) => sat(w, i, &v.with(*r, w.class_of(i)), a),
    }
}

/// Evaluates a sentence at position 0 under the empty valuation.
pub fn holds(w: &DataWord, phi: &Ltl) -> bool {
    sat(w, 0, &Valuation::empty(), phi)
}

/// Evaluates at an arbitrary position under the empty valuation.
pub fn holds_at(w: &DataWord, i: usize, phi: &Ltl) -> bool {
    sat(w, i, &Valuation::empty(), phi)
}

/// The first enumerated data word (length ≤ max_len) satisfying a sentence.
pub fn sat_bounded(phi: &Ltl, alphabet: &Arc<Alphabet>, max_len: usize) -> Option<DataWord> {
    enumerate_data_words(alphabet, max_len).find(|w| holds(w, phi))
}

// ------------------------------------------------------- normal forms

/// Negation normal form over the dual operators; also removes F, G,
/// their past versions and implication.
pub fn nnf(phi: &Ltl) -> Ltl {
    pos(phi)
}

fn pos(phi: &Ltl) -> Ltl {
    match phi {
        True | False | Atom(_) | NAtom(_) | Reg(_) | NReg(_) => phi.clone(),
        Not(a) => neg(a),
        And(a, b) => Ltl::and(pos(a), pos(b)),
        Or(a, b) => Ltl::or(pos(a), pos(b)),
        Implies(a, b) => Ltl::or(neg(a), pos(b)),
        X(a) => X(bx(pos(a))),
        Xinv(a) => Xinv(bx(pos(a))),
        WX(a) => WX(bx(pos(a))),
        WXinv(a) => WXinv(bx(pos(a))),
        F(a) => U(bx(True), bx(pos(a))),
        Finv(a) => Uinv(bx(True), bx(pos(a))),
        G(a) => NU(bx(False), bx(pos(a))),
        Ginv(a) => NUinv(bx(False), bx(pos(a))),
        U(a, b) => U(bx(pos(a)), bx(pos(b))),
        Uinv(a, b) => Uinv(bx(pos(a)), bx(pos(b))),
        NU(a, b) => NU(bx(pos(a)), bx(pos(b))),
        NUinv(a, b) => NUinv(bx(pos(a)), bx(pos(b))),
        Store(r, a) => Store(*r, bx(pos(a))),
    }
}

fn neg(phi: &Ltl) -> Ltl {
    match phi {
        True => False,
        False => True,
        Atom(a) => NAtom(a.clone()),
        NAtom(a) => Atom(a.clone()),
        Reg(r) => NReg(*r),
        NReg(r) => Reg(*r),
        Not(a) => pos(a),
        And(a, b) => Ltl::or(neg(a), neg(b)),
        Or(a, b) => Ltl::and(neg(a), neg(b)),
        Implies(a, b) => Ltl::and(pos(a), neg(b)),
        X(a) => WX(bx(neg(a))),
        Xinv(a) => WXinv(bx(neg(a))),
        WX(a) => X(bx(neg(a))),
        WXinv(a) => Xinv(bx(neg(a))),
        F(a) => NU(bx(False), bx(neg(a))),
        Finv(a) => NUinv(bx(False), bx(neg(a))),
        G(a) => U(bx(True), bx(neg(a))),
        Ginv(a) => Uinv(bx(True), bx(neg(a))),
        U(a, b) => NU(bx(neg(a)), bx(neg(b))),
        Uinv(a, b) => NUinv(bx(neg(a)), bx(neg(b))),
        NU(a, b) => U(bx(neg(a)), bx(neg(b))),
        NUinv(a, b) => Uinv(bx(neg(a)), bx(neg(b))),
        Store(r, a) => Store(*r, bx(neg(a))),
    }
}

/// Rewrites sugar (F, G, past versions, implication) into U/Ū without
/// pushing negations.
pub fn desugar(phi: &Ltl) -> Ltl {
    let d = |f: &Ltl| bx(desugar(f));
    match phi {
        True | False | Atom(_) | NAtom(_) | Reg(_) | NReg(_) => phi.clone(),
        Not(a) => Not(d(a)),
        And(a, b) => And(d(a), d(b)),
        Or(a, b) => Or(d(a), d(b)),
        Implies(a, b) => Or(bx(Not(d(a))), d(b)),
        X(a) => X(d(a)),
        Xinv(a) => Xinv(d(a)),
        WX(a) => WX(d(a)),
        WXinv(a) => WXinv(d(a)),
        F(a) => U(bx(True), d(a)),
        Finv(a) => Uinv(bx(True), d(a)),
        G(a) => Not(bx(U(bx(True), bx(Not(d(a)))))),
        Ginv(a) => Not(bx(Uinv(bx(True), bx(Not(d(a)))))),
        U(a, b) => U(d(a), d(b)),
        Uinv(a, b) => Uinv(d(a), d(b)),
        NU(a, b) => NU(d(a), d(b)),
        NUinv(a, b) => NUinv(d(a), d(b)),
        Store(r, a) => Store(*r, d(a)),
    }
}

pub fn is_nnf(phi: &Ltl) -> bool {
    !matches!(phi, Not(_) | Implies(..) | F(_) | Finv(_) | G(_) | Ginv(_))
        && phi.children().into_iter().all(is_nnf)
}

// ------------------------------------------------------- classification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemporalOp {
    X,
    Xinv,
    WX,
    WXinv,
    F,
    Finv,
    G,
    Ginv,
    U,
    Uinv,
    NU,
    NUinv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentInfo {
    pub operators: BTreeSet<TemporalOp>,
    pub max_register: u32,
    pub is_sentence: bool,
    /// Least `m` such that the formula is simple in LTL↓₁(O_m).
    pub simple_m: Option<usize>,
}

pub fn classify(phi: &Ltl) -> FragmentInfo {
    let mut operators = BTreeSet::new();
    collect_ops(phi, &mut operators);
    let bound = longest_x_chain(phi);
    let simple_m = (0..=bound).find(|&m| is_simple_in(phi, m));
    FragmentInfo { operators, max_register: phi.max_register(), is_sentence: phi.is_sentence(), simple_m }
}

fn collect_ops(phi: &Ltl, out: &mut BTreeSet<TemporalOp>) {
    if let Some(op) = phi.temporal_op() {
        out.insert(op);
    }
    for c in phi.children() {
        collect_ops(c, out);
    }
}

fn longest_x_chain(phi: &Ltl) -> usize {
    let here = match phi {
        X(_) | Xinv(_) => x_chain(phi).0.unsigned_abs() as usize,
        _ => 0,
    };
    phi.children().into_iter().map(longest_x_chain).fold(here, usize::max)
}

/// Maximal run of X (positive) or X⁻¹ (negative) and what follows it.
fn x_chain(phi: &Ltl) -> (i64, &Ltl) {
    let mut k = 0i64;
    let mut cur = phi;
    loop {
        match cur {
            X(a) if k >= 0 => {
                k += 1;
                cur = a;
            }
            Xinv(a) if k <= 0 => {
                k -= 1;
                cur = a;
            }
            _ => return (k, cur),
        }
    }
}

/// One `O^k` prefix of a simple formula: the offset `k` (|k| = m+1 means
/// "strictly beyond m, in that direction") and its body.
pub fn split_simple_operator(phi: &Ltl, m: usize) -> Option<(i64, &Ltl)> {
    let Store(1, body) = phi else { return None };
    let (k, rest) = x_chain(body);
    let lim = m as i64;
    if k.abs() <= lim {
        return Some((k, rest));
    }
    if k.abs() == lim + 1 {
        match rest {
            F(b) if k > 0 => return Some((k, b)),
            Finv(b) if k < 0 => return Some((k, b)),
            _ => {}
        }
    }
    None
}

/// Simple LTL↓₁(O_m): every temporal operator sits in an O^k block that
/// starts with ↓₁, and ↓₁ occurs nowhere else. With m = 0 a lone X is not
/// an operator of O_0.
pub fn is_simple_in(phi: &Ltl, m: usize) -> bool {
    match phi {
        True | False | Atom(_) | NAtom(_) | Reg(1) | NReg(1) => true,
        Reg(_) | NReg(_) => false,
        Not(a) => is_simple_in(a, m),
        And(a, b) | Or(a, b) | Implies(a, b) => is_simple_in(a, m) && is_simple_in(b, m),
        Store(1, _) => match split_simple_operator(phi, m) {
            Some((_, body)) => is_simple_in(body, m),
            None => false,
        },
        _ => false,
    }
}

/// The running example: no two `a` share a class, and each `a` is followed
/// by a `b` in its class.
pub fn nonce_formula() -> Ltl {
    parse_ltl("G (a -> store1 X ((G (a -> !up1)) & F (b & up1)))", None).expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::make_data_word;

    fn aab() -> DataWord {
        make_data_word(&Alphabet::from_chars("ab"), &["a", "a", "b"], &[vec![0, 2], vec![1]]).unwrap()
    }

    fn p(s: &str) -> Ltl {
        parse_ltl(s, None).unwrap()
    }

    #[test]
    fn nonce_formula_shape() {
        let phi = nonce_formula();
        let expected = Ltl::g(Ltl::implies(
            Ltl::atom("a"),
            Ltl::store(
                1,
                Ltl::x(Ltl::and(
                    Ltl::g(Ltl::implies(Ltl::atom("a"), Ltl::not(Reg(1)))),
                    Ltl::f(Ltl::and(Ltl::atom("b"), Reg(1))),
                )),
            ),
        ));
        assert_eq!(phi, expected);
        assert!(phi.is_sentence());
    }

    #[test]
    fn parse_basics() {
        assert_eq!(p("true"), True);
        let up = p("up1");
        assert!(!up.is_sentence());
        assert_eq!(p("a U b U c"), Ltl::u(Ltl::atom("a"), Ltl::u(Ltl::atom("b"), Ltl::atom("c"))));
        assert_eq!(p("a & b | c"), Ltl::or(Ltl::and(Ltl::atom("a"), Ltl::atom("b")), Ltl::atom("c")));
        assert!(matches!(parse_ltl("a &", None), Err(LtlError::Syntax { .. })));
        assert!(matches!(parse_ltl("(a", None), Err(LtlError::Syntax { .. })));
        let ab = Alphabet::from_chars("ab");
        assert_eq!(parse_ltl("c", Some(&ab)), Err(LtlError::UnknownAtom("c".into())));
    }

    #[test]
    fn display_round_trips() {
        for s in ["G (a -> store1 X ((G (a -> !up1)) & F (b & up1)))", "~a nU (wXp ~up2 & Fp b)", "a Up Gp true"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
    }

    #[test]
    fn nonce_formula_fails_on_aab() {
        assert!(!eval(&aab(), 0, &Valuation::empty(), &nonce_formula()).unwrap());
    }

    #[test]
    fn simple_examples() {
        let w = aab();
        let v = Valuation::empty();
        assert!(eval(&w, 0, &v, &True).unwrap());
        assert!(eval(&w, 0, &v, &p("store1 X X up1")).unwrap());
        assert!(!eval(&w, 0, &v, &p("store1 X up1")).unwrap());
        assert!(!eval(&w, 2, &v, &p("X true")).unwrap());
        assert!(eval(&w, 2, &v, &p("wX false")).unwrap());
        assert!(!eval(&w, 0, &v, &p("Xp true")).unwrap());
        assert!(!eval(&w, 0, &v, &p("up1")).unwrap());
        assert!(matches!(eval(&w, 3, &v, &True), Err(LtlError::PositionOutOfRange { .. })));
        let foreign = Valuation::empty().with(1, ClassId(5));
        assert_eq!(eval(&w, 0, &foreign, &True), Err(LtlError::ForeignValuation(1)));
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(nnf(&p("!(a & b)")), Ltl::or(NAtom("a".into()), NAtom("b".into())));
        assert_eq!(nnf(&p("!X a")), WX(bx(NAtom("a".into()))));
        assert_eq!(nnf(&p("!(a U up1)")), NU(bx(NAtom("a".into())), bx(NReg(1))));
    }

    #[test]
    fn classification() {
        let info = classify(&nonce_formula());
        assert_eq!(info.operators, BTreeSet::from([TemporalOp::X, TemporalOp::F, TemporalOp::G]));
        assert_eq!(info.max_register, 1);
        assert_eq!(info.simple_m, None);
        assert_eq!(classify(&p("store1 X a")).simple_m, Some(1));
        assert!(!is_simple_in(&p("store1 X a"), 0));
        assert!(is_simple_in(&p("store1 X F a"), 0));
        assert!(!is_simple_in(&p("store1 X F a"), 1));
        assert_eq!(classify(&p("a")).simple_m, Some(0));
        assert_eq!(classify(&p("store1 Xp Xp Fp (b & up1)")).simple_m, Some(1));
        assert!(classify(&p("store2 X a")).simple_m.is_none());
    }

    #[test]
    fn bounded_satisfiability() {
        let ab = Alphabet::from_chars("ab");
        // A lone `b` satisfies the nonce property vacuously and comes first.
        let w = sat_bounded(&nonce_formula(), &ab, 2).unwrap();
        assert_eq!(w.to_string(), "b ; 0");
        let with_a = Ltl::and(nonce_formula(), Ltl::f(Ltl::atom("a")));
        assert_eq!(sat_bounded(&with_a, &ab, 2).unwrap().to_string(), "a b ; 0 1");
        assert!(sat_bounded(&False, &Alphabet::from_chars("a"), 3).is_none());
        let w = sat_bounded(&p("a & store1 F (b & up1)"), &ab, 2).unwrap();
        assert_eq!(w.to_string(), "a b ; 0 1");
    }
}
