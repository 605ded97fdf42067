//! Transitions, transition sources and automata.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::label::{Label, Sym};
use crate::state::State;
use crate::tree::{apply_instruction, Instruction, Predicate, TreeStack};

/// A transition `(q, x, p, f, q')`; `input == None` is ε.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: State,
    pub input: Option<Sym>,
    pub pred: Predicate,
    pub instr: Instruction,
    pub dst: State,
}

impl Transition {
    pub fn new(src: State, input: Option<&str>, pred: Predicate, instr: Instruction, dst: State) -> Transition {
        Transition { src, input: input.map(Sym::from), pred, instr, dst }
    }
}

/// `q,x,pred,instr,q'` with `eps` for ε.
impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.input.as_deref().unwrap_or("eps");
        write!(f, "{},{},{},{},{}", self.src, x, self.pred, self.instr, self.dst)
    }
}

/// A finite set of labels a pushed or written label is chosen from.
pub type Choice = Arc<[Label]>;

/// Instruction part of a [`Rule`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleInstr {
    Id,
    Up(u32),
    Down,
    Push(u32, Choice),
    Set(Choice),
}

/// A family of transitions out of one `(state, cursor label)` pair that
/// differ only in the pushed or written label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub input: Option<Sym>,
    pub pred: Predicate,
    pub instr: RuleInstr,
    pub dst: State,
}

impl Rule {
    pub fn new(input: Option<Sym>, pred: Predicate, instr: RuleInstr, dst: State) -> Rule {
        Rule { input, pred, instr, dst }
    }

    fn of_transition(t: &Transition) -> Rule {
        let instr = match &t.instr {
            Instruction::Id => RuleInstr::Id,
            Instruction::Up(n) => RuleInstr::Up(*n),
            Instruction::Down => RuleInstr::Down,
            Instruction::Push(n, c) => RuleInstr::Push(*n, Arc::from([c.clone()])),
            Instruction::Set(c) => RuleInstr::Set(Arc::from([c.clone()])),
        };
        Rule { input: t.input.clone(), pred: t.pred.clone(), instr, dst: t.dst.clone() }
    }

    /// The instruction obtained by choosing `label` (ignored for id/up/down).
    pub fn instruction(&self, label: Option<&Label>) -> Instruction {
        match &self.instr {
            RuleInstr::Id => Instruction::Id,
            RuleInstr::Up(n) => Instruction::Up(*n),
            RuleInstr::Down => Instruction::Down,
            RuleInstr::Push(n, _) => Instruction::Push(*n, label.expect("push label").clone()),
            RuleInstr::Set(_) => Instruction::Set(label.expect("set label").clone()),
        }
    }

    pub fn choice(&self) -> Option<&Choice> {
        match &self.instr {
            RuleInstr::Push(_, c) | RuleInstr::Set(c) => Some(c),
            _ => None,
        }
    }

    /// Expands the family into concrete transitions.
    pub fn transitions(&self, src: &State) -> Vec<Transition> {
        let make = |label: Option<&Label>| Transition {
            src: src.clone(),
            input: self.input.clone(),
            pred: self.pred.clone(),
            instr: self.instruction(label),
            dst: self.dst.clone(),
        };
        match self.choice() {
            Some(c) => c.iter().map(|l| make(Some(l))).collect(),
            None => vec![make(None)],
        }
    }
}

/// A generator of transitions keyed on `(state, cursor label)`.
///
/// `rules` must push exactly the rule families whose predicate holds on
/// `label`, deterministically.
pub trait Schema: Send + Sync + fmt::Debug {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>);

    /// Every push index that some rule may use.
    fn push_indices(&self) -> BTreeSet<u32>;

    /// Upper bound on `|states| * |labels|` for materialization.
    fn universe_size(&self) -> u128;

    /// All states and labels, for materialization.
    fn universe(&self) -> (Vec<State>, Vec<Label>);
}

/// An explicit transition list with a per-state index.
#[derive(Clone, Debug)]
pub struct Explicit {
    list: Vec<Transition>,
    index: HashMap<State, Vec<u32>>,
}

impl Explicit {
    pub fn new(list: Vec<Transition>) -> Explicit {
        let mut index: HashMap<State, Vec<u32>> = HashMap::new();
        for (i, t) in list.iter().enumerate() {
            index.entry(t.src.clone()).or_default().push(i as u32);
        }
        Explicit { list, index }
    }

    pub fn list(&self) -> &[Transition] {
        &self.list
    }

    /// Transitions leaving `state`, in list order.
    pub fn from_state<'a>(&'a self, state: &State) -> impl Iterator<Item = &'a Transition> + 'a {
        self.index.get(state).into_iter().flatten().map(|&i| &self.list[i as usize])
    }

    /// Indices into [`Explicit::list`] of the transitions leaving `state`.
    pub fn indices_from(&self, state: &State) -> &[u32] {
        self.index.get(state).map_or(&[], |v| v.as_slice())
    }
}

impl PartialEq for Explicit {
    fn eq(&self, other: &Explicit) -> bool {
        self.list == other.list
    }
}

/// Where an automaton's transitions come from.
#[derive(Clone, Debug)]
pub enum TransitionSource {
    Explicit(Explicit),
    Schematic(Arc<dyn Schema>),
}

/// Metadata carried alongside an automaton.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    pub claimed_k: Option<u32>,
    pub declared_degree: Option<u32>,
    /// Free-form notes, rendered as comment lines.
    pub notes: Vec<String>,
}

/// A tree-stack automaton.
///
/// For schematic sources `states` and `labels` list only the members known
/// up front (initial, finals and inherited alphabets); the full sets are
/// implicit in the schema.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub states: BTreeSet<State>,
    pub labels: BTreeSet<Label>,
    pub terminals: BTreeSet<Sym>,
    pub initial: State,
    pub finals: BTreeSet<State>,
    pub source: TransitionSource,
    pub meta: Meta,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Automaton) -> bool {
        let same_source = match (&self.source, &other.source) {
            (TransitionSource::Explicit(a), TransitionSource::Explicit(b)) => a == b,
            (TransitionSource::Schematic(a), TransitionSource::Schematic(b)) => Arc::ptr_eq(a, b),
            _ => false,
        };
        same_source
            && self.states == other.states
            && self.labels == other.labels
            && self.terminals == other.terminals
            && self.initial == other.initial
            && self.finals == other.finals
            && self.meta == other.meta
    }
}

impl Automaton {
    /// An automaton with an explicit transition list.
    pub fn explicit(
        states: impl IntoIterator<Item = State>,
        labels: impl IntoIterator<Item = Label>,
        terminals: impl IntoIterator<Item = Sym>,
        initial: State,
        finals: impl IntoIterator<Item = State>,
        transitions: Vec<Transition>,
    ) -> Automaton {
        Automaton {
            states: states.into_iter().collect(),
            labels: labels.into_iter().collect(),
            terminals: terminals.into_iter().collect(),
            initial,
            finals: finals.into_iter().collect(),
            source: TransitionSource::Explicit(Explicit::new(transitions)),
            meta: Meta::default(),
        }
    }

    /// The explicit transition list, if any.
    pub fn transitions(&self) -> Option<&[Transition]> {
        match &self.source {
            TransitionSource::Explicit(e) => Some(e.list()),
            TransitionSource::Schematic(_) => None,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.source, TransitionSource::Explicit(_))
    }

    /// Replaces the transition list, keeping everything else.
    pub fn with_transitions(&self, transitions: Vec<Transition>) -> Automaton {
        Automaton { source: TransitionSource::Explicit(Explicit::new(transitions)), ..self.clone() }
    }

    /// Rule families enabled by the label at the cursor, ignoring input and
    /// instruction applicability.
    pub fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        match &self.source {
            TransitionSource::Explicit(e) => {
                out.extend(e.from_state(state).filter(|t| t.pred.holds_on(label)).map(Rule::of_transition));
            }
            TransitionSource::Schematic(s) => s.rules(state, label, out),
        }
    }

    /// Distinct push indices.
    pub fn push_indices(&self) -> BTreeSet<u32> {
        match &self.source {
            TransitionSource::Explicit(e) => e.list().iter().filter_map(push_index).collect(),
            TransitionSource::Schematic(s) => s.push_indices(),
        }
    }

    /// A state name with the reserved `$` sigil not yet used in `states`.
    pub fn fresh_name(&self, hint: &str) -> State {
        let mut n = 0;
        loop {
            let name = if n == 0 { format!("${hint}") } else { format!("${hint}{n}") };
            let st = State::name(&name);
            if !self.states.contains(&st) {
                return st;
            }
            n += 1;
        }
    }

    /// Materializes a schematic source when it is small enough.
    pub fn materialize(&self, threshold: u128) -> Result<Automaton, u128> {
        let TransitionSource::Schematic(schema) = &self.source else {
            return Ok(self.clone());
        };
        let size = schema.universe_size();
        if size > threshold {
            return Err(size);
        }
        let (states, labels) = schema.universe();
        let mut seen = indexmap::IndexSet::new();
        let mut buf = Vec::new();
        for q in &states {
            for l in &labels {
                buf.clear();
                schema.rules(q, l, &mut buf);
                for r in &buf {
                    seen.extend(r.transitions(q));
                }
            }
        }
        if seen.len() as u128 > threshold {
            return Err(seen.len() as u128);
        }
        let mut out = self.with_transitions(seen.into_iter().collect());
        out.states.extend(states);
        out.labels.extend(labels.into_iter().filter(|l| !l.is_root()));
        Ok(out)
    }
}

fn push_index(t: &Transition) -> Option<u32> {
    match t.instr {
        Instruction::Push(n, _) => Some(n),
        _ => None,
    }
}

/// Applies `t` if it is enabled at `(state, ts)` reading `next_input`.
pub fn step(
    _aut: &Automaton,
    state: &State,
    ts: &TreeStack,
    t: &Transition,
    next_input: Option<&Sym>,
) -> Option<(State, TreeStack)> {
    if &t.src != state || t.input.as_ref() != next_input || !t.pred.holds_on(ts.cursor_label()) {
        return None;
    }
    apply_instruction(ts, &t.instr).map(|ts| (t.dst.clone(), ts))
}

/// Every transition `step` accepts at `(state, ts, next_input)`, in source order.
pub fn enabled_transitions(
    aut: &Automaton,
    state: &State,
    ts: &TreeStack,
    next_input: Option<&Sym>,
) -> Vec<Transition> {
    let mut rules = Vec::new();
    aut.rules(state, ts.cursor_label(), &mut rules);
    rules
        .iter()
        .filter(|r| r.input.as_ref() == next_input)
        .flat_map(|r| r.transitions(state))
        .filter(|t| apply_instruction(ts, &t.instr).is_some())
        .collect()
}

/// `|Δ|`, the number of distinct push indices.
pub fn degree(aut: &Automaton) -> u32 {
    aut.push_indices().len() as u32
}

/// One validation finding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Result of [`validate`]. Only errors make an automaton invalid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks that every component is declared and every index positive.
///
/// Schematic sources are checked for their declared parts only.
pub fn validate(aut: &Automaton) -> Report {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let diag = |location: &str, message: String| Diagnostic { location: location.to_string(), message };
    if !aut.states.contains(&aut.initial) {
        errors.push(diag("initial", format!("undeclared state `{}`", aut.initial)));
    }
    for f in &aut.finals {
        if !aut.states.contains(f) {
            errors.push(diag("final", format!("undeclared state `{f}`")));
        }
    }
    if aut.labels.contains(&Label::Root) {
        errors.push(diag("labels", "`@` may not be declared as a label".into()));
    }
    if let Some(list) = aut.transitions() {
        let pushed = aut.push_indices();
        for (i, t) in list.iter().enumerate() {
            let loc = format!("transition {}", i + 1);
            let loc = loc.as_str();
            for q in [&t.src, &t.dst] {
                if !aut.states.contains(q) {
                    errors.push(diag(loc, format!("undeclared state `{q}`")));
                }
            }
            if let Some(x) = &t.input {
                if !aut.terminals.contains(x) {
                    errors.push(diag(loc, format!("undeclared letter `{x}`")));
                }
            }
            if let Predicate::Eq(l) = &t.pred {
                if !l.is_root() && !aut.labels.contains(l) {
                    errors.push(diag(loc, format!("undeclared label `{l}`")));
                }
            }
            match &t.instr {
                Instruction::Push(n, l) => {
                    if *n == 0 {
                        errors.push(diag(loc, "push index must be positive".into()));
                    }
                    check_written(aut, l, loc, &mut errors);
                }
                Instruction::Set(l) => check_written(aut, l, loc, &mut errors),
                Instruction::Up(0) => errors.push(diag(loc, "up index must be positive".into())),
                Instruction::Up(n) if !pushed.contains(n) => {
                    warnings.push(diag(loc, format!("up {n} is dead: no push uses index {n}")))
                }
                _ => {}
            }
        }
    }
    Report { errors, warnings }
}

fn check_written(aut: &Automaton, l: &Label, loc: &str, errors: &mut Vec<Diagnostic>) {
    let message = if l.is_root() {
        "`@` may not be written".to_string()
    } else if !aut.labels.contains(l) {
        format!("undeclared label `{l}`")
    } else {
        return;
    };
    errors.push(Diagnostic { location: loc.to_string(), message });
}

/// A schematic source extended by a few explicit transitions.
#[derive(Debug)]
struct Overlay {
    base: Arc<dyn Schema>,
    extra: Explicit,
}

impl Schema for Overlay {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        self.base.rules(state, label, out);
        out.extend(self.extra.from_state(state).filter(|t| t.pred.holds_on(label)).map(Rule::of_transition));
    }

    fn push_indices(&self) -> BTreeSet<u32> {
        let mut out = self.base.push_indices();
        out.extend(self.extra.list().iter().filter_map(push_index));
        out
    }

    fn universe_size(&self) -> u128 {
        let (s, l) = (self.extra.list().len() as u128 * 2, self.extra.list().len() as u128);
        self.base.universe_size() + s * l + s + l
    }

    fn universe(&self) -> (Vec<State>, Vec<Label>) {
        let (mut states, mut labels) = self.base.universe();
        for t in self.extra.list() {
            states.extend([t.src.clone(), t.dst.clone()]);
            if let Predicate::Eq(l) = &t.pred {
                labels.push(l.clone());
            }
        }
        states.sort();
        states.dedup();
        labels.sort();
        labels.dedup();
        (states, labels)
    }
}

impl Automaton {
    /// Adds transitions after the existing ones, for either kind of source.
    pub fn with_extra(&self, extra: Vec<Transition>) -> Automaton {
        match &self.source {
            TransitionSource::Explicit(e) => {
                let mut list = e.list().to_vec();
                list.extend(extra);
                self.with_transitions(list)
            }
            TransitionSource::Schematic(base) => Automaton {
                source: TransitionSource::Schematic(Arc::new(Overlay {
                    base: base.clone(),
                    extra: Explicit::new(extra),
                })),
                ..self.clone()
            },
        }
    }
}
