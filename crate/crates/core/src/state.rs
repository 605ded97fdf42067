//! Automaton states. User automata use plain names; constructions build
//! structured states that serialize as s-expressions.

use std::fmt;
use std::sync::Arc;

use crate::label::{Label, Sym};
use crate::sexpr::SExpr;

/// The data `(i, q, q', c)` shared by special labels and gadget states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpecialKey {
    pub index: u32,
    pub from: State,
    pub to: State,
    pub under: Label,
}

impl SpecialKey {
    pub fn label(&self) -> Label {
        Label::Special(Arc::new(self.clone()))
    }

    pub fn gadget(&self, step: u8) -> State {
        State::Gadget(Arc::new(self.clone()), step)
    }
}

/// A state id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Name(Sym),
    /// Product state `(pair Q P)`.
    Pair(Arc<(State, State)>),
    /// Gadget state `(gad I Q Q' C J)`.
    Gadget(Arc<SpecialKey>, u8),
    /// Union component state `(tag N Q)`.
    Tagged(u32, Arc<State>),
    /// Control state of the permutation automaton.
    Sigma(Arc<SigmaState>),
}

/// Control states of the permutation automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SigmaState {
    /// `(aleph-start)`
    Start,
    /// `(aleph-start J)`, J in 1..=4
    StartStep(u8),
    /// `(bin B)`: which special vertices exist, digit i for special i.
    Binary(Bits),
    /// `(bin-push B L)`: child set updated, about to push child L.
    PendingPush(Bits, u32),
    /// `(aleph I)`: locate the I-th special vertex.
    Locate(u32),
    /// `(beth I)`: block I finished, cursor at address 1.
    Done(u32),
    /// `(sim Q I)`: simulating the hash automaton in state Q during block I.
    Sim(State, u32),
    /// `(sim-step T I J)`: intermediate step J of simulated transition T.
    SimStep(u32, u32, u8),
    /// `(p3 ...)`
    Check(CheckState),
}

/// States of the final depth-first check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckState {
    Enter,
    Next,
    Up(u32),
    Leave,
    Accept,
}

/// A fixed-length bit string, digit i (1-based) stored at bit i-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    pub len: u32,
    pub bits: u32,
}

impl Bits {
    pub fn get(self, i: u32) -> bool {
        self.bits & (1 << (i - 1)) != 0
    }

    pub fn set(self, i: u32) -> Bits {
        Bits { bits: self.bits | (1 << (i - 1)), ..self }
    }

    pub fn all(self) -> bool {
        self.bits == (1u32 << self.len) - 1
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Bits {
    type Err = String;

    fn from_str(s: &str) -> Result<Bits, String> {
        if s.is_empty() || s.len() > 31 {
            return Err(format!("bad bit string `{s}`"));
        }
        let mut out = Bits { len: s.len() as u32, bits: 0 };
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => out = out.set(i as u32 + 1),
                _ => return Err(format!("bad bit string `{s}`")),
            }
        }
        Ok(out)
    }
}

impl State {
    pub fn name(s: &str) -> State {
        State::Name(Sym::from(s))
    }

    pub fn pair(a: State, b: State) -> State {
        State::Pair(Arc::new((a, b)))
    }

    pub fn tagged(n: u32, s: State) -> State {
        State::Tagged(n, Arc::new(s))
    }

    pub fn sigma(s: SigmaState) -> State {
        State::Sigma(Arc::new(s))
    }

    pub fn as_sigma(&self) -> Option<&SigmaState> {
        match self {
            State::Sigma(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_sexpr(&self) -> SExpr {
        let atom = |s: String| SExpr::Atom(s);
        match self {
            State::Name(s) => SExpr::atom(&**s),
            State::Pair(p) => SExpr::List(vec![SExpr::atom("pair"), p.0.to_sexpr(), p.1.to_sexpr()]),
            State::Gadget(key, j) => key.to_sexpr("gad", Some(*j)),
            State::Tagged(n, s) => SExpr::List(vec![SExpr::atom("tag"), atom(n.to_string()), s.to_sexpr()]),
            State::Sigma(s) => SExpr::List(match &**s {
                SigmaState::Start => vec![SExpr::atom("aleph-start")],
                SigmaState::StartStep(j) => vec![SExpr::atom("aleph-start"), atom(j.to_string())],
                SigmaState::Binary(b) => vec![SExpr::atom("bin"), atom(b.to_string())],
                SigmaState::PendingPush(b, l) => {
                    vec![SExpr::atom("bin-push"), atom(b.to_string()), atom(l.to_string())]
                }
                SigmaState::Locate(i) => vec![SExpr::atom("aleph"), atom(i.to_string())],
                SigmaState::Done(i) => vec![SExpr::atom("beth"), atom(i.to_string())],
                SigmaState::Sim(q, i) => vec![SExpr::atom("sim"), q.to_sexpr(), atom(i.to_string())],
                SigmaState::SimStep(t, i, j) => {
                    vec![SExpr::atom("sim-step"), atom(t.to_string()), atom(i.to_string()), atom(j.to_string())]
                }
                SigmaState::Check(c) => {
                    let mut v = vec![SExpr::atom("p3")];
                    match c {
                        CheckState::Enter => v.push(SExpr::atom("enter")),
                        CheckState::Next => v.push(SExpr::atom("next")),
                        CheckState::Up(l) => {
                            v.push(SExpr::atom("up"));
                            v.push(atom(l.to_string()));
                        }
                        CheckState::Leave => v.push(SExpr::atom("leave")),
                        CheckState::Accept => v.push(SExpr::atom("accept")),
                    }
                    v
                }
            }),
        }
    }

    pub fn from_sexpr(e: &SExpr) -> Result<State, String> {
        if let SExpr::Atom(a) = e {
            return Ok(State::Name(Sym::from(a.as_str())));
        }
        let Some((head, args)) = e.as_form() else {
            return Err(format!("bad state `{e}`"));
        };
        let num = |x: &SExpr| -> Result<u32, String> {
            x.as_atom()
                .and_then(|a| a.parse::<u32>().ok())
                .ok_or_else(|| format!("expected a number, found `{x}`"))
        };
        let arity = |n: usize| -> Result<(), String> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`{head}` takes {n} arguments"))
            }
        };
        let sigma = |s: SigmaState| Ok(State::sigma(s));
        match head {
            "pair" => {
                arity(2)?;
                Ok(State::pair(State::from_sexpr(&args[0])?, State::from_sexpr(&args[1])?))
            }
            "gad" => {
                let (key, rest) = SpecialKey::from_args(args)?;
                match rest {
                    [j] => Ok(State::Gadget(Arc::new(key), num(j)? as u8)),
                    _ => Err("`gad` takes five arguments".into()),
                }
            }
            "tag" => {
                arity(2)?;
                Ok(State::tagged(num(&args[0])?, State::from_sexpr(&args[1])?))
            }
            "aleph-start" => match args {
                [] => sigma(SigmaState::Start),
                [j] => sigma(SigmaState::StartStep(num(j)? as u8)),
                _ => Err("`aleph-start` takes at most one argument".into()),
            },
            "bin" => {
                arity(1)?;
                sigma(SigmaState::Binary(args[0].as_atom().unwrap_or("").parse()?))
            }
            "bin-push" => {
                arity(2)?;
                sigma(SigmaState::PendingPush(args[0].as_atom().unwrap_or("").parse()?, num(&args[1])?))
            }
            "aleph" => {
                arity(1)?;
                sigma(SigmaState::Locate(num(&args[0])?))
            }
            "beth" => {
                arity(1)?;
                sigma(SigmaState::Done(num(&args[0])?))
            }
            "sim" => {
                arity(2)?;
                sigma(SigmaState::Sim(State::from_sexpr(&args[0])?, num(&args[1])?))
            }
            "sim-step" => {
                arity(3)?;
                sigma(SigmaState::SimStep(num(&args[0])?, num(&args[1])?, num(&args[2])? as u8))
            }
            "p3" => {
                let check = match args {
                    [a] if a.as_atom() == Some("enter") => CheckState::Enter,
                    [a] if a.as_atom() == Some("next") => CheckState::Next,
                    [a] if a.as_atom() == Some("leave") => CheckState::Leave,
                    [a] if a.as_atom() == Some("accept") => CheckState::Accept,
                    [a, l] if a.as_atom() == Some("up") => CheckState::Up(num(l)?),
                    _ => return Err(format!("bad check state `{e}`")),
                };
                sigma(SigmaState::Check(check))
            }
            _ => Err(format!("unknown state form `{head}`")),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Name(s) => f.write_str(s),
            _ => write!(f, "{}", self.to_sexpr()),
        }
    }
}

impl std::str::FromStr for State {
    type Err = String;

    fn from_str(s: &str) -> Result<State, String> {
        State::from_sexpr(&crate::sexpr::parse(s)?)
    }
}
