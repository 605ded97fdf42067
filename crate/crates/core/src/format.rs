//! Text formats: automaton files, pipeline descriptors, slice files and traces.
//!
//! An automaton file is line oriented:
//!
//! ```text
//! alphabet a b
//! labels *
//! states q0 q1 q2
//! initial q0
//! final q2
//! restriction 1
//! trans q0 a eq @ push 1 * q1
//! trans q1 b eq * down q2
//! ```
//!
//! States and labels may be s-expressions. Lines starting with `#` are
//! comments, except the metadata lines `# claimed_k K`, `# degree D` and
//! `# note TEXT`.

use std::fmt::Write;

use crate::automaton::{Automaton, Meta, Transition};
use crate::error::ParseError;
use crate::label::{Label, Sym};
use crate::oracle::{LanguageSlice, Permutation};
use crate::runner::{RunTrace, Word};
use crate::sexpr::{tokenize, Token};
use crate::state::State;
use crate::tree::{Instruction, Predicate};

/// Which pipeline a descriptor stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// The hash automaton.
    Hash,
    /// The erased permutation automaton for one permutation.
    Perm,
    /// The permutation closure.
    Closure,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Hash => "hash",
            Stage::Perm => "perm",
            Stage::Closure => "closure",
        }
    }
}

/// A construction recorded by its inputs instead of its transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineDescriptor {
    pub stage: Stage,
    /// Base automaton file, relative to the descriptor.
    pub base: String,
    pub n: u32,
    pub sigma: Option<Permutation>,
    pub claimed_k: Option<u32>,
    pub degree: Option<u32>,
}

/// Either kind of file.
#[derive(Clone, Debug)]
pub enum Document {
    Automaton(Automaton),
    Pipeline(PipelineDescriptor),
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, col, msg)
}

fn number(line: usize, tok: &Token) -> Result<u32, ParseError> {
    tok.expr
        .as_atom()
        .and_then(|a| a.parse::<u32>().ok())
        .ok_or_else(|| err(line, tok.col, format!("expected a number, found `{}`", tok.expr)))
}

fn label(line: usize, tok: &Token) -> Result<Label, ParseError> {
    Label::from_sexpr(&tok.expr).map_err(|m| err(line, tok.col, m))
}

fn state(line: usize, tok: &Token) -> Result<State, ParseError> {
    State::from_sexpr(&tok.expr).map_err(|m| err(line, tok.col, m))
}

fn letter(line: usize, tok: &Token) -> Result<Sym, ParseError> {
    match tok.expr.as_atom() {
        Some("eps") | Some("-") | None => Err(err(line, tok.col, format!("`{}` is not a letter", tok.expr))),
        Some(a) => Ok(Sym::from(a)),
    }
}

/// Parses metadata comments; returns true when the line was one.
fn meta_line(n: usize, body: &str, meta: &mut Meta) -> Result<bool, ParseError> {
    let body = body.trim_start();
    if let Some(rest) = body.strip_prefix("note ") {
        meta.notes.push(rest.trim().to_string());
        return Ok(true);
    }
    let mut words = body.split_whitespace();
    let key = words.next();
    let slot = match key {
        Some("claimed_k") => &mut meta.claimed_k,
        Some("degree") => &mut meta.declared_degree,
        _ => return Ok(false),
    };
    let value = words.next().and_then(|v| v.parse::<u32>().ok());
    match (value, words.next()) {
        (Some(v), None) => {
            *slot = Some(v);
            Ok(true)
        }
        _ => Err(err(n, 1, format!("bad metadata line `# {body}`"))),
    }
}

/// Parses an automaton file or a pipeline descriptor.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.split_whitespace().next() == Some("pipeline") {
        parse_descriptor(text).map(Document::Pipeline)
    } else {
        parse_automaton(text).map(Document::Automaton)
    }
}

/// Parses an automaton file.
pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let mut meta = Meta::default();
    let mut states = Vec::new();
    let mut labels = Vec::new();
    let mut terminals = Vec::new();
    let mut initial: Option<State> = None;
    let mut finals = Vec::new();
    let mut transitions = Vec::new();
    let mut restriction: Option<u32> = None;
    let mut lines = 0;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        lines = n;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            meta_line(n, body, &mut meta)?;
            continue;
        }
        let toks = tokenize(raw).map_err(|(col, m)| err(n, col, m))?;
        let (head, rest) = toks.split_first().expect("non-empty line");
        let keyword = head.expr.as_atom().unwrap_or("");
        match keyword {
            "alphabet" => {
                for t in rest {
                    terminals.push(letter(n, t)?);
                }
            }
            "labels" => {
                for t in rest {
                    labels.push(label(n, t)?);
                }
            }
            "states" => {
                for t in rest {
                    states.push(state(n, t)?);
                }
            }
            "initial" => {
                if initial.is_some() {
                    return Err(err(n, head.col, "duplicate `initial` line"));
                }
                match rest {
                    [t] => initial = Some(state(n, t)?),
                    _ => return Err(err(n, head.col, "`initial` takes exactly one state")),
                }
            }
            "final" => {
                for t in rest {
                    finals.push(state(n, t)?);
                }
            }
            "restriction" => match rest {
                [t] => restriction = Some(number(n, t)?),
                _ => return Err(err(n, head.col, "`restriction` takes one number")),
            },
            "trans" => transitions.push(parse_transition(n, head, rest)?),
            _ => return Err(err(n, head.col, format!("unknown keyword `{}`", head.expr))),
        }
    }
    let Some(initial) = initial else {
        return Err(err(lines + 1, 1, "missing `initial` line"));
    };
    if let Some(k) = restriction {
        if meta.claimed_k.is_some_and(|c| c != k) {
            return Err(err(1, 1, "`restriction` disagrees with `# claimed_k`"));
        }
        meta.claimed_k = Some(k);
    }
    let mut aut = Automaton::explicit(states, labels, terminals, initial, finals, transitions);
    aut.meta = meta;
    Ok(aut)
}

fn parse_transition(n: usize, head: &Token, rest: &[Token]) -> Result<Transition, ParseError> {
    let mut it = rest.iter();
    let mut next = |what: &str| it.next().ok_or_else(|| err(n, head.col, format!("transition is missing {what}")));
    let src = state(n, next("its source")?)?;
    let x = next("its input")?;
    let input = match x.expr.as_atom() {
        Some("eps") => None,
        _ => Some(letter(n, x)?),
    };
    let p = next("its predicate")?;
    let pred = match p.expr.as_atom() {
        Some("true") => Predicate::True,
        Some("eq") => Predicate::Eq(label(n, next("the predicate label")?)?),
        _ => return Err(err(n, p.col, format!("unknown predicate `{}`", p.expr))),
    };
    let f = next("its instruction")?;
    let instr = match f.expr.as_atom() {
        Some("id") => Instruction::Id,
        Some("down") => Instruction::Down,
        Some("up") => Instruction::Up(number(n, next("the up index")?)?),
        Some("push") => {
            let idx = number(n, next("the push index")?)?;
            Instruction::Push(idx, label(n, next("the push label")?)?)
        }
        Some("set") => Instruction::Set(label(n, next("the set label")?)?),
        _ => return Err(err(n, f.col, format!("unknown instruction `{}`", f.expr))),
    };
    let dst = state(n, next("its target")?)?;
    if let Some(extra) = it.next() {
        return Err(err(n, extra.col, "trailing tokens after the target state"));
    }
    Ok(Transition { src, input, pred, instr, dst })
}

/// Renders a transition as a `trans` line.
pub fn render_transition(t: &Transition) -> String {
    let x = t.input.as_deref().unwrap_or("eps");
    format!("trans {} {} {} {} {}", t.src, x, t.pred, t.instr, t.dst)
}

/// Renders an explicit automaton in canonical form.
///
/// # Panics
///
/// Panics on a schematic source; materialize first.
pub fn render_automaton(aut: &Automaton) -> String {
    let list = aut.transitions().expect("render_automaton needs explicit transitions");
    let mut out = String::new();
    write_meta(&mut out, &aut.meta);
    let join = |items: Vec<String>| items.iter().map(|s| format!(" {s}")).collect::<String>();
    writeln!(out, "alphabet{}", join(aut.terminals.iter().map(|x| x.to_string()).collect())).unwrap();
    writeln!(out, "labels{}", join(aut.labels.iter().map(|l| l.to_string()).collect())).unwrap();
    writeln!(out, "states{}", join(aut.states.iter().map(|q| q.to_string()).collect())).unwrap();
    writeln!(out, "initial {}", aut.initial).unwrap();
    writeln!(out, "final{}", join(aut.finals.iter().map(|q| q.to_string()).collect())).unwrap();
    if let Some(k) = aut.meta.claimed_k {
        writeln!(out, "restriction {k}").unwrap();
    }
    for t in list {
        writeln!(out, "{}", render_transition(t)).unwrap();
    }
    out
}

fn write_meta(out: &mut String, meta: &Meta) {
    if let Some(k) = meta.claimed_k {
        writeln!(out, "# claimed_k {k}").unwrap();
    }
    if let Some(d) = meta.declared_degree {
        writeln!(out, "# degree {d}").unwrap();
    }
    for note in &meta.notes {
        writeln!(out, "# note {note}").unwrap();
    }
}

/// Parses a pipeline descriptor.
pub fn parse_descriptor(text: &str) -> Result<PipelineDescriptor, ParseError> {
    let mut meta = Meta::default();
    let mut stage = None;
    let mut base = None;
    let mut n = None;
    let mut sigma = None;
    let mut lines = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        lines = ln;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            meta_line(ln, body, &mut meta)?;
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let value = value.trim();
        let col = raw.len() - raw.trim_start().len() + 1;
        match key {
            "pipeline" => {
                stage = Some(match value {
                    "hash" => Stage::Hash,
                    "perm" => Stage::Perm,
                    "closure" => Stage::Closure,
                    _ => return Err(err(ln, col, format!("unknown stage `{value}`"))),
                })
            }
            "base" if !value.is_empty() => base = Some(value.to_string()),
            "n" => n = Some(value.parse::<u32>().map_err(|_| err(ln, col, format!("bad N `{value}`")))?),
            "sigma" => sigma = Some(value.parse::<Permutation>().map_err(|m| err(ln, col, m.to_string()))?),
            _ => return Err(err(ln, col, format!("unknown descriptor line `{line}`"))),
        }
    }
    let missing = |what: &str| err(lines + 1, 1, format!("descriptor is missing `{what}`"));
    let stage = stage.ok_or_else(|| missing("pipeline"))?;
    let base = base.ok_or_else(|| missing("base"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    if stage == Stage::Perm && sigma.is_none() {
        return Err(missing("sigma"));
    }
    if let Some(s) = &sigma {
        if s.len() as u32 != n {
            return Err(err(lines, 1, "sigma length differs from N"));
        }
    }
    Ok(PipelineDescriptor { stage, base, n, sigma, claimed_k: meta.claimed_k, degree: meta.declared_degree })
}

/// Renders a pipeline descriptor.
pub fn render_descriptor(d: &PipelineDescriptor) -> String {
    let mut out = String::new();
    writeln!(out, "pipeline {}", d.stage.name()).unwrap();
    writeln!(out, "base {}", d.base).unwrap();
    writeln!(out, "n {}", d.n).unwrap();
    if let Some(s) = &d.sigma {
        writeln!(out, "sigma {s}").unwrap();
    }
    write_meta(&mut out, &Meta { claimed_k: d.claimed_k, declared_degree: d.degree, notes: Vec::new() });
    out
}

/// A word as whitespace-separated letters, `-` for ε.
pub fn render_word(w: &[Sym]) -> String {
    if w.is_empty() {
        "-".to_string()
    } else {
        w.iter().map(|x| &**x).collect::<Vec<_>>().join(" ")
    }
}

/// Parses whitespace-separated letters; `-` stands for ε.
pub fn parse_word(s: &str) -> Word {
    s.split_whitespace().filter(|t| *t != "-").map(Sym::from).collect()
}

/// Renders a slice: the header, then one word per line, shortest first.
pub fn render_slice(slice: &LanguageSlice, extra_header: &[String]) -> String {
    let mut out = format!("# max_len {} complete {}\n", slice.max_len, slice.complete);
    for h in extra_header {
        writeln!(out, "# {h}").unwrap();
    }
    for w in slice.sorted_words() {
        writeln!(out, "{}", render_word(w)).unwrap();
    }
    out
}

/// Parses a slice file.
pub fn parse_slice(text: &str) -> Result<LanguageSlice, ParseError> {
    let mut header = None;
    let mut words = std::collections::BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if let Some(body) = line.strip_prefix('#') {
            let parts: Vec<&str> = body.split_whitespace().collect();
            if let ["max_len", l, "complete", c] = parts.as_slice() {
                let l = l.parse::<usize>().map_err(|_| err(n, 1, "bad max_len"))?;
                let c = c.parse::<bool>().map_err(|_| err(n, 1, "bad complete flag"))?;
                header = Some((l, c));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        words.insert(parse_word(line));
    }
    let (max_len, complete) = header.ok_or_else(|| err(1, 1, "missing `# max_len L complete BOOL` header"))?;
    if let Some(w) = words.iter().find(|w| w.len() > max_len) {
        return Err(err(1, 1, format!("word `{}` is longer than max_len", render_word(w))));
    }
    Ok(LanguageSlice { words, max_len, complete })
}

/// One line per step: index, transition, cursor address, cursor label.
pub fn render_trace(trace: &RunTrace) -> String {
    let mut out = String::new();
    for (i, (t, c)) in trace.transitions.iter().zip(&trace.configurations[1..]).enumerate() {
        writeln!(out, "{}\t{}\t{}\t{}", i + 1, t, c.ts.cursor, c.ts.cursor_label()).unwrap();
    }
    out
}
