//! `datawords` command-line front end.
//!
//! Exit codes: 0 = false / empty, 1 = true / nonempty, 2 = usage or an
//! input outside the operation's domain, 3 = parse error, 4 = budget
//! exhausted before a verdict.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use datawords::ca::{
    accepts_word, nonempty_finite_incrementing, nonempty_infinite_incrementing, nonempty_minsky_bounded, parse_ca,
    CounterAutomaton, EmptyReason, Semantics, TriState, Witness, WordKind, DEFAULT_BUDGET,
};
use datawords::fo::{self, parse_fo, Fo};
use datawords::ltl::{self, classify, parse_ltl, sat_bounded, Ltl};
use datawords::ltl2ra::ltl_to_ara;
use datawords::nra_empty::{abstract_graph_dot, nonempty_finite, nonempty_infinite};
use datawords::ra::{acceptance_game, accepts_with_budget, parse_ra, RaError, RegisterAutomaton, DEFAULT_STATE_BUDGET};
use datawords::ra2ca::{compile_finite, compile_infinite, Compiled};
use datawords::reductions::{
    ca_to_ltl_finite, ca_to_ltl_infinite, ca_to_ura1, minsky_to_incrementing_fig4, minsky_to_ltl_2reg,
    minsky_to_ltl_2reg_infinite, minsky_to_ltl_xffp,
};
use datawords::words::{enumerate_data_words, enumerate_data_words_of_len};
use datawords::{Alphabet, DataWord};

#[derive(Parser)]
#[command(name = "datawords", version, about = "Logics and automata over data words")]
struct Cli {
    /// Output style: human-readable text or one JSON object per line.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    #[value(name = "json-lines")]
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ltl,
    Fo,
    Ra,
    Ca,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Words {
    Finite,
    Infinite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sem {
    Minsky,
    Incrementing,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Translation {
    Ltl2ra,
    Ra2ca,
    Ltl2fo,
    Fo2ltl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineKind {
    Nra,
    Ca,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduction {
    Ca2ltl,
    Ca2ura,
    Minsky2ltl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Xffp,
    #[value(name = "2reg")]
    TwoReg,
    Fig4,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotKind {
    Ra,
    Ca,
    Game,
    Abstract,
}

/// Inputs naming an existing file are read from it, `-` reads stdin, and
/// anything else is taken as literal text.
#[derive(Subcommand)]
enum Cmd {
    /// Parse an input and print its normal text form.
    Parse {
        #[arg(value_enum)]
        kind: Kind,
        input: String,
    },
    /// Evaluate a formula on a data word.
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long, conflicts_with = "fo", required_unless_present = "fo")]
        ltl: Option<String>,
        #[arg(long)]
        fo: Option<String>,
        /// Position (LTL) or value of the free variable (FO).
        #[arg(long, default_value_t = 0)]
        pos: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Search all data words up to a length for a model.
    SatBounded {
        #[arg(long, conflicts_with = "fo", required_unless_present = "fo")]
        ltl: Option<String>,
        #[arg(long)]
        fo: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Translate between formalisms.
    Translate {
        #[arg(value_enum)]
        what: Translation,
        input: String,
        #[arg(long, value_enum, default_value_t = Words::Finite)]
        words: Words,
        #[arg(long)]
        alphabet: Option<String>,
        /// Output file; ra2ca also writes `<file>.report`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Membership of a word.
    Accepts {
        #[arg(long, conflicts_with = "ca", required_unless_present = "ca")]
        ra: Option<String>,
        #[arg(long)]
        ca: Option<String>,
        /// `a a b ; 0 2 | 1` for register automata, `a b a` for counter automata.
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Sem::Incrementing)]
        semantics: Sem,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Language emptiness.
    Empty {
        #[arg(value_enum)]
        engine: EngineKind,
        input: String,
        /// Shorthand for `--words=infinite`.
        #[arg(long)]
        infinite: bool,
        #[arg(long, value_enum, default_value_t = Words::Finite)]
        words: Words,
        #[arg(long, value_enum, default_value_t = Sem::Incrementing)]
        semantics: Sem,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Reductions from counter automata.
    Reduce {
        #[arg(value_enum)]
        what: Reduction,
        input: String,
        #[arg(long, value_enum, default_value_t = Variant::Xffp)]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = Words::Finite)]
        words: Words,
    },
    /// Run a sentence around the translation circle and compare verdicts.
    Circle {
        #[arg(long)]
        ltl: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Graphviz output.
    ExportDot {
        #[arg(value_enum)]
        kind: DotKind,
        input: String,
        /// Data word for the acceptance game.
        #[arg(long)]
        word: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Parse(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Parse(_) => 3,
            Failure::Budget(_) => 4,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Budget(m) => m,
        }
    }
}

type Res<T> = Result<T, Failure>;

fn parse_err(e: impl std::fmt::Display) -> Failure {
    Failure::Parse(e.to_string())
}

fn usage_err(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn ra_err(e: RaError) -> Failure {
    match e {
        RaError::StateSpaceBudgetExceeded(_) => Failure::Budget(e.to_string()),
        RaError::Syntax { .. } | RaError::Invalid(_) => parse_err(e),
        other => usage_err(other),
    }
}

fn read_input(arg: &str) -> Res<String> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage_err)?;
        return Ok(s);
    }
    let path = std::path::Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| usage_err(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn read_ra(arg: &str) -> Res<RegisterAutomaton> {
    let a = parse_ra(&read_input(arg)?).map_err(ra_err)?;
    a.check().map_err(ra_err)?;
    Ok(a)
}

fn read_ca(arg: &str) -> Res<CounterAutomaton> {
    parse_ca(&read_input(arg)?).map_err(parse_err)
}

fn read_ltl(arg: &str) -> Res<Ltl> {
    parse_ltl(read_input(arg)?.trim(), None).map_err(parse_err)
}

fn read_fo(arg: &str) -> Res<Fo> {
    parse_fo(read_input(arg)?.trim()).map_err(parse_err)
}

fn fo_letters(f: &Fo, out: &mut BTreeSet<String>) {
    if let Fo::Letter(a, _) = f {
        out.insert(a.clone());
    }
    for c in f.children() {
        fo_letters(c, out);
    }
}

fn word_letters(word: &str) -> Vec<String> {
    word.split(';').next().unwrap_or("").split_whitespace().map(str::to_string).collect()
}

/// The explicit alphabet, or the letters mentioned by the inputs.
fn alphabet_for(explicit: Option<&str>, mentioned: BTreeSet<String>) -> Res<Arc<Alphabet>> {
    let names: Vec<String> = match explicit {
        Some(s) => s.split_whitespace().map(str::to_string).collect(),
        None => mentioned.into_iter().collect(),
    };
    if names.is_empty() {
        return Err(usage_err("empty alphabet: pass --alphabet"));
    }
    Alphabet::new(&names).map_err(parse_err)
}

struct Out {
    format: Format,
}

impl Out {
    /// Prints a result: the human text, or the JSON object.
    fn emit(&self, human: impl AsRef<str>, value: Value) {
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = match self.format {
            Format::Human => writeln!(io::stdout(), "{}", human.as_ref()),
            Format::Json => writeln!(io::stdout(), "{value}"),
        };
    }
}

fn verdict(b: bool) -> u8 {
    u8::from(b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { format: cli.format };
    match run(cli.cmd, &out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            match out.format {
                Format::Human => eprintln!("error: {}", f.message()),
                Format::Json => println!("{}", json!({"error": f.message(), "exit": f.code()})),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Cmd, out: &Out) -> Res<u8> {
    match cmd {
        Cmd::Parse { kind, input } => parse_cmd(kind, &input, out),
        Cmd::Eval { word, ltl, fo, pos, alphabet } => eval_cmd(&word, ltl, fo, pos, alphabet.as_deref(), out),
        Cmd::SatBounded { ltl, fo, max_len, alphabet } => sat_cmd(ltl, fo, max_len, alphabet.as_deref(), out),
        Cmd::Translate { what, input, words, alphabet, output } => {
            translate_cmd(what, &input, words, alphabet.as_deref(), output, out)
        }
        Cmd::Accepts { ra, ca, word, semantics, budget } => accepts_cmd(ra, ca, &word, semantics, budget, out),
        Cmd::Empty { engine, input, infinite, words, semantics, budget } => {
            let words = if infinite { Words::Infinite } else { words };
            empty_cmd(engine, &input, words, semantics, budget, out)
        }
        Cmd::Reduce { what, input, variant, words } => reduce_cmd(what, &input, variant, words, out),
        Cmd::Circle { ltl, max_len, alphabet } => circle_cmd(&ltl, max_len, alphabet.as_deref(), out),
        Cmd::ExportDot { kind, input, word } => dot_cmd(kind, &input, word.as_deref()),
    }
}

fn parse_cmd(kind: Kind, input: &str, out: &Out) -> Res<u8> {
    match kind {
        Kind::Ltl => {
            let f = read_ltl(input)?;
            let info = classify(&f);
            let ops: Vec<String> = info.operators.iter().map(|o| format!("{o:?}")).collect();
            out.emit(
                format!(
                    "{f}\noperators: {}\nregisters: {}\nsentence: {}\nsimple: {}",
                    ops.join(" "),
                    info.max_register,
                    info.is_sentence,
                    info.simple_m.map_or("no".to_string(), |m| format!("m = {m}"))
                ),
                json!({"formula": f.to_string(), "operators": ops, "registers": info.max_register,
                       "sentence": info.is_sentence, "simple_m": info.simple_m}),
            );
        }
        Kind::Fo => {
            let f = read_fo(input)?;
            out.emit(
                format!("{f}\ntwo-variable: {}\ndepth: {}", f.is_two_variable(), f.quantifier_depth()),
                json!({"formula": f.to_string(), "two_variable": f.is_two_variable(), "depth": f.quantifier_depth()}),
            );
        }
        Kind::Ra => {
            let a = read_ra(input)?;
            let c = a.classify();
            out.emit(
                format!(
                    "{a}# one-way: {} nondeterministic: {} universal: {}",
                    c.one_way, c.nondeterministic, c.universal
                ),
                json!({"automaton": a.to_string(), "one_way": c.one_way,
                       "nondeterministic": c.nondeterministic, "universal": c.universal}),
            );
        }
        Kind::Ca => {
            let c = read_ca(input)?;
            c.validate().map_err(parse_err)?;
            out.emit(c.to_string().trim_end(), json!({"automaton": c.to_string()}));
        }
    }
    Ok(0)
}

fn eval_cmd(word: &str, ltl: Option<String>, fo: Option<String>, pos: usize, alpha: Option<&str>, out: &Out) -> Res<u8> {
    let mut mentioned: BTreeSet<String> = word_letters(word).into_iter().collect();
    let holds = if let Some(src) = ltl {
        let f = read_ltl(&src)?;
        mentioned.extend(f.atoms());
        let sigma = alphabet_for(alpha, mentioned)?;
        let w = DataWord::parse(&sigma, word).map_err(parse_err)?;
        ltl::eval(&w, pos, &ltl::Valuation::empty(), &f).map_err(usage_err)?
    } else {
        let f = read_fo(&fo.expect("clap requires one formula"))?;
        fo_letters(&f, &mut mentioned);
        let sigma = alphabet_for(alpha, mentioned)?;
        let w = DataWord::parse(&sigma, word).map_err(parse_err)?;
        let free: Vec<_> = f.free_vars().into_iter().collect();
        let mut asg = vec![None; free.iter().max().map_or(0, |&m| m as usize + 1)];
        for x in free {
            asg[x as usize] = Some(pos);
        }
        fo::eval_fo(&w, &asg, &f).map_err(usage_err)?
    };
    out.emit(format!("{holds}"), json!({"holds": holds}));
    Ok(verdict(holds))
}

fn sat_cmd(ltl: Option<String>, fo: Option<String>, max_len: usize, alpha: Option<&str>, out: &Out) -> Res<u8> {
    let found = if let Some(src) = ltl {
        let f = read_ltl(&src)?;
        if !f.is_sentence() {
            return Err(usage_err("formula has free registers"));
        }
        let sigma = alphabet_for(alpha, f.atoms())?;
        sat_bounded(&f, &sigma, max_len)
    } else {
        let f = read_fo(&fo.expect("clap requires one formula"))?;
        if !f.free_vars().is_empty() {
            return Err(usage_err("formula has free variables"));
        }
        let mut mentioned = BTreeSet::new();
        fo_letters(&f, &mut mentioned);
        let sigma = alphabet_for(alpha, mentioned)?;
        enumerate_data_words(&sigma, max_len).find(|w| fo::eval_fo(w, &[], &f).unwrap_or(false))
    };
    match &found {
        Some(w) => out.emit(format!("satisfiable: {w}"), json!({"satisfiable": true, "witness": w.to_string()})),
        None => out.emit(
            format!("no model of length ≤ {max_len}"),
            json!({"satisfiable": false, "max_len": max_len}),
        ),
    }
    Ok(verdict(found.is_some()))
}

fn write_or_print(path: &Option<PathBuf>, text: &str, out: &Out, value: Value) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage_err(format!("{}: {e}", p.display()))),
        None => {
            out.emit(text.trim_end(), value);
            Ok(())
        }
    }
}

fn report_text(c: &Compiled) -> String {
    let r = &c.report;
    let mut s = format!(
        "locations: {}\ntransitions: {}\ncounters: {}\nclass counters: {}\npair counters: {}\nsucc entries: {}\nrounds: {}\n",
        r.locations,
        r.transitions,
        c.automaton.counters,
        r.class_counters,
        r.pair_counters,
        r.succ_entries,
        r.rounds
    );
    for (i, l) in c.counter_labels.iter().enumerate() {
        s.push_str(&format!("counter {}: {l}\n", i + 1));
    }
    s
}

fn translate_cmd(
    what: Translation,
    input: &str,
    words: Words,
    alpha: Option<&str>,
    output: Option<PathBuf>,
    out: &Out,
) -> Res<u8> {
    match what {
        Translation::Ltl2ra => {
            let f = read_ltl(input)?;
            let sigma = alphabet_for(alpha, f.atoms())?;
            let a = ltl_to_ara(&f, &sigma).map_err(usage_err)?;
            write_or_print(&output, &a.to_string(), out, json!({"automaton": a.to_string()}))?;
        }
        Translation::Ra2ca => {
            let a = read_ra(input)?;
            let compiled = match words {
                Words::Finite => compile_finite(&a),
                Words::Infinite => compile_infinite(&a),
            }
            .map_err(usage_err)?;
            let text = compiled.automaton.to_string();
            let report = report_text(&compiled);
            match &output {
                Some(p) => {
                    fs::write(p, &text).map_err(|e| usage_err(format!("{}: {e}", p.display())))?;
                    let mut rp = p.clone().into_os_string();
                    rp.push(".report");
                    fs::write(&rp, &report).map_err(usage_err)?;
                }
                None => {
                    out.emit(text.trim_end(), json!({"automaton": text, "report": report}));
                    if out.format == Format::Human {
                        eprint!("{report}");
                    }
                }
            }
        }
        Translation::Ltl2fo => {
            let f = read_ltl(input)?;
            let g = fo::simple_ltl_to_fo2(&f, 0).map_err(usage_err)?;
            write_or_print(&output, &g.to_string(), out, json!({"formula": g.to_string()}))?;
        }
        Translation::Fo2ltl => {
            let f = read_fo(input)?;
            let g = fo::fo2_to_simple_ltl(&f, 0).map_err(usage_err)?;
            write_or_print(&output, &g.to_string(), out, json!({"formula": g.to_string()}))?;
        }
    }
    Ok(0)
}

fn semantics(s: Sem) -> Semantics {
    match s {
        Sem::Minsky => Semantics::Minsky,
        Sem::Incrementing => Semantics::Incrementing,
    }
}

fn ca_word(ca: &CounterAutomaton, word: &str) -> Res<Vec<u32>> {
    word.split_whitespace()
        .map(|l| ca.alphabet.lookup(l).ok_or_else(|| parse_err(format!("letter `{l}` is not in the alphabet"))))
        .collect()
}

fn accepts_cmd(ra: Option<String>, ca: Option<String>, word: &str, sem: Sem, budget: usize, out: &Out) -> Res<u8> {
    let ok = if let Some(src) = ra {
        let a = read_ra(&src)?;
        let w = DataWord::parse(&a.alphabet, word).map_err(parse_err)?;
        accepts_with_budget(&a, &w, budget.max(DEFAULT_STATE_BUDGET)).map_err(ra_err)?
    } else {
        let c = read_ca(&ca.expect("clap requires one automaton"))?;
        let w = ca_word(&c, word)?;
        match accepts_word(&c, &w, semantics(sem), budget) {
            TriState::Unknown => return Err(Failure::Budget(format!("search budget of {budget} states exhausted"))),
            t => t.is_nonempty(),
        }
    };
    out.emit(format!("{ok}"), json!({"accepts": ok}));
    Ok(verdict(ok))
}

fn tri_report(ca: &CounterAutomaton, t: &TriState, budget: usize, out: &Out) -> Res<u8> {
    match t {
        TriState::Empty(reason) => {
            let why = match reason {
                EmptyReason::Exhausted => "search space exhausted",
                EmptyReason::Refuted => "recurrence refuted",
            };
            out.emit(format!("empty ({why})"), json!({"empty": true, "reason": why}));
            Ok(0)
        }
        TriState::Nonempty(Witness::Word(w)) => {
            let s = ca.word_string(w);
            out.emit(format!("nonempty: {s}"), json!({"empty": false, "witness": s}));
            Ok(1)
        }
        TriState::Nonempty(Witness::Lasso(l)) => {
            let (stem, cycle) = (ca.word_string(&l.stem), ca.word_string(&l.cycle));
            out.emit(
                format!("nonempty: {stem} ( {cycle} )^ω"),
                json!({"empty": false, "stem": stem, "cycle": cycle}),
            );
            Ok(1)
        }
        TriState::Unknown => Err(Failure::Budget(format!("unknown: search budget of {budget} states exhausted"))),
    }
}

fn empty_cmd(engine: EngineKind, input: &str, words: Words, sem: Sem, budget: usize, out: &Out) -> Res<u8> {
    match engine {
        EngineKind::Nra => {
            let a = read_ra(input)?;
            match words {
                Words::Finite => {
                    let w = nonempty_finite(&a).map_err(usage_err)?;
                    match &w {
                        Some(w) => out.emit(format!("nonempty: {w}"), json!({"empty": false, "witness": w.to_string()})),
                        None => out.emit("empty", json!({"empty": true})),
                    }
                    Ok(verdict(w.is_some()))
                }
                Words::Infinite => {
                    let ne = nonempty_infinite(&a).map_err(usage_err)?;
                    out.emit(if ne { "nonempty" } else { "empty" }, json!({"empty": !ne}));
                    Ok(verdict(ne))
                }
            }
        }
        EngineKind::Ca => {
            let c = read_ca(input)?;
            c.validate().map_err(parse_err)?;
            let t = match (sem, words) {
                (Sem::Incrementing, Words::Finite) => match nonempty_finite_incrementing(&c) {
                    Some(w) => TriState::Nonempty(Witness::Word(w)),
                    None => TriState::Empty(EmptyReason::Exhausted),
                },
                (Sem::Incrementing, Words::Infinite) => nonempty_infinite_incrementing(&c, budget),
                (Sem::Minsky, Words::Finite) => nonempty_minsky_bounded(&c, WordKind::Finite, budget),
                (Sem::Minsky, Words::Infinite) => nonempty_minsky_bounded(&c, WordKind::Infinite, budget),
            };
            tri_report(&c, &t, budget, out)
        }
    }
}

fn reduce_cmd(what: Reduction, input: &str, variant: Variant, words: Words, out: &Out) -> Res<u8> {
    let c = read_ca(input)?;
    c.validate().map_err(parse_err)?;
    let infinite = words == Words::Infinite;
    let text = match (what, variant) {
        (Reduction::Ca2ltl, _) if infinite => ca_to_ltl_infinite(&c).to_string(),
        (Reduction::Ca2ltl, _) => ca_to_ltl_finite(&c).to_string(),
        (Reduction::Ca2ura, _) => ca_to_ura1(&c).to_string(),
        (Reduction::Minsky2ltl, Variant::Xffp) if infinite => {
            return Err(usage_err("the past-operator encoding is for finite words"))
        }
        (Reduction::Minsky2ltl, Variant::Xffp) => minsky_to_ltl_xffp(&c).to_string(),
        (Reduction::Minsky2ltl, Variant::TwoReg) if infinite => minsky_to_ltl_2reg_infinite(&c).to_string(),
        (Reduction::Minsky2ltl, Variant::TwoReg) => minsky_to_ltl_2reg(&c).to_string(),
        (Reduction::Minsky2ltl, Variant::Fig4) => minsky_to_incrementing_fig4(&c).map_err(usage_err)?.to_string(),
    };
    out.emit(text.trim_end(), json!({"output": text}));
    Ok(0)
}

fn circle_cmd(src: &str, max_len: usize, alpha: Option<&str>, out: &Out) -> Res<u8> {
    let f = read_ltl(src)?;
    if !f.is_sentence() {
        return Err(usage_err("formula has free registers"));
    }
    let sigma = alphabet_for(alpha, f.atoms())?;
    let by_formula = sat_bounded(&f, &sigma, max_len);
    let ara = ltl_to_ara(&f, &sigma).map_err(usage_err)?;
    let mut by_automaton = None;
    for w in enumerate_data_words(&sigma, max_len) {
        if accepts_with_budget(&ara, &w, DEFAULT_STATE_BUDGET).map_err(ra_err)? {
            by_automaton = Some(w);
            break;
        }
    }
    let compiled = compile_finite(&ara).map_err(usage_err)?;
    let ca = &compiled.automaton;
    let by_counters = nonempty_finite_incrementing(ca);
    // A counter-automaton witness is a string; look for a matching model.
    let realised = by_counters.as_ref().map(|w| {
        let names: Vec<&str> = w.iter().map(|&s| ca.alphabet.name(s)).collect();
        enumerate_data_words_of_len(&sigma, w.len()).any(|d| d.string() == names && ltl::holds(&d, &f))
    });
    let short = by_counters.as_ref().is_some_and(|w| w.len() <= max_len);
    let agree = by_formula.is_some() == by_automaton.is_some()
        // the counter witness is a shortest one
        && by_formula.is_some() == short
        && realised != Some(false);
    let back = ca_to_ltl_finite(ca);
    let show = |w: &Option<DataWord>| w.as_ref().map_or("none".to_string(), |w| w.to_string());
    let ca_str = by_counters.as_ref().map_or("empty".to_string(), |w| ca.word_string(w));
    out.emit(
        format!(
            "formula (length ≤ {max_len}): {}\nautomaton (length ≤ {max_len}): {}\ncounter automaton: {}\n\
             counter automaton size: {} locations, {} counters\nback-translation size: {}\nagree: {agree}",
            show(&by_formula),
            show(&by_automaton),
            ca_str,
            ca.num_locations(),
            ca.counters,
            back.size()
        ),
        json!({"formula": by_formula.as_ref().map(|w| w.to_string()),
               "automaton": by_automaton.as_ref().map(|w| w.to_string()),
               "counter_automaton": by_counters.as_ref().map(|w| ca.word_string(w)),
               "locations": ca.num_locations(), "counters": ca.counters,
               "back_translation_size": back.size(), "agree": agree}),
    );
    if !agree {
        return Err(usage_err("verdicts disagree"));
    }
    Ok(verdict(by_counters.is_some()))
}

fn dot_cmd(kind: DotKind, input: &str, word: Option<&str>) -> Res<u8> {
    let text = match kind {
        DotKind::Ra => read_ra(input)?.to_dot(),
        DotKind::Ca => read_ca(input)?.to_dot(),
        DotKind::Abstract => abstract_graph_dot(&read_ra(input)?).map_err(usage_err)?,
        DotKind::Game => {
            let a = read_ra(input)?;
            let word = word.ok_or_else(|| usage_err("export-dot game needs --word"))?;
            let w = DataWord::parse(&a.alphabet, word).map_err(parse_err)?;
            let g = acceptance_game(&a, &w, DEFAULT_STATE_BUDGET).map_err(ra_err)?;
            g.game.to_dot(&[g.initial])
        }
    };
    let _ = io::stdout().write_all(text.as_bytes());
    Ok(0)
}
