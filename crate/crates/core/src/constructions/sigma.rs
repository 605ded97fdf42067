//! The permutation automaton: guesses a copy of the hash automaton's final
//! tree, then replays the hash automaton block by block in permuted order
//! on that tree, then checks the tree depth-first.
//!
//! Transitions are generated by schemas keyed on the control state and the
//! cursor label. Labels written or pushed are drawn from precomputed (or
//! lazily cached) choice sets, so rule generation is stateless.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::automaton::{Automaton, Choice, Explicit, Meta, Rule, RuleInstr, Schema, Transition, TransitionSource};
use crate::error::ConstructionError;
use crate::label::{product, ChildSet, Column, Compass, Composite, Heading, HistoryArray, Label, Status, Third};
use crate::state::{Bits, CheckState, SigmaState, SpecialKey, State};
use crate::tree::{Instruction, Predicate};

use super::{hash_index, hash_letter, PipelineMeta};

/// Data shared by all schemas of one permutation automaton.
pub struct SigmaContext {
    pub meta: PipelineMeta,
    plain: Vec<Label>,
    delta_n: Explicit,
    states_n: Vec<State>,
    /// Special labels by index, `specials[i - 1]` for index `i`.
    specials: Vec<Choice>,
    root_choice: Choice,
    /// Child label sets keyed by the mask of inherited compass coordinates.
    child_choices: Vec<OnceLock<Choice>>,
}

impl fmt::Debug for SigmaContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigmaContext").field("meta", &self.meta).finish_non_exhaustive()
    }
}

/// Phase One histories: every block still unvisited, except that the root
/// copy is visited when block 1 starts.
fn unvisited(h: &HistoryArray) -> bool {
    h.0.iter().enumerate().all(|(j, c)| match c {
        Column::Percent => true,
        Column::Entry { status, exit } => *status == if j == 0 && exit.is_root() { Status::Open } else { Status::Fresh },
    })
}

fn st(s: SigmaState) -> State {
    State::sigma(s)
}

fn one(label: Label) -> Choice {
    Arc::from([label])
}

fn eq(label: &Label) -> Predicate {
    Predicate::Eq(label.clone())
}

impl SigmaContext {
    /// `a` is the framed automaton, `a_n` the hash automaton built from it.
    pub fn new(a: &Automaton, a_n: &Automaton, meta: PipelineMeta) -> Result<SigmaContext, ConstructionError> {
        let Some(list) = a_n.transitions() else {
            return Err(ConstructionError::NotExplicit("build_a_sigma"));
        };
        if meta.n == 0 || meta.sigma.len() != meta.n as usize {
            return Err(ConstructionError::InconsistentMeta(format!(
                "permutation `{}` does not act on 1..={}",
                meta.sigma, meta.n
            )));
        }
        if meta.n + 1 > 31 || meta.degree + meta.n + 1 > 63 {
            return Err(ConstructionError::InconsistentMeta("N or degree too large".into()));
        }
        if a.meta.declared_degree != Some(meta.degree) {
            return Err(ConstructionError::InconsistentMeta(format!(
                "recorded degree {:?} differs from {}",
                a.meta.declared_degree, meta.degree
            )));
        }
        let n = meta.n;
        let plain: Vec<Label> = a.labels.iter().filter(|l| matches!(l, Label::Plain(_))).cloned().collect();
        let mut specials = vec![Vec::new(); n as usize + 1];
        for l in &a_n.labels {
            if let Some(key) = l.as_special() {
                let i = key.index;
                if (1..=n + 1).contains(&i) && (!(i == 1 || i == n + 1) || key.under.is_root()) {
                    specials[i as usize - 1].push(l.clone());
                }
            }
        }
        let mut ctx = SigmaContext {
            plain,
            delta_n: Explicit::new(list.to_vec()),
            states_n: a_n.states.iter().cloned().collect(),
            specials: specials.into_iter().map(Choice::from).collect(),
            root_choice: Arc::from([]),
            child_choices: (0..1u32 << (n + 1)).map(|_| OnceLock::new()).collect(),
            meta,
        };
        ctx.root_choice = ctx.root_labels().into();
        Ok(ctx)
    }

    fn n(&self) -> u32 {
        self.meta.n
    }

    fn d(&self) -> u32 {
        self.meta.degree
    }

    /// Compass values for coordinate `i` below the root copy: a child index
    /// of the base, or the special slot `D+i`.
    fn headings(&self, i: u32) -> Vec<Heading> {
        (1..=self.d()).chain([self.d() + i]).map(Heading::Child).collect()
    }

    fn root_labels(&self) -> Vec<Label> {
        let (n, d) = (self.n(), self.d());
        let mut coords = vec![vec![Heading::Child(d + 1)]];
        coords.extend((2..=n).map(|i| self.headings(i)));
        coords.push(vec![Heading::Child(d + n + 1)]);
        let compasses = product(&coords);
        let mut out = Vec::new();
        for h in HistoryArray::all_root(n).into_iter().filter(unvisited) {
            for c in &compasses {
                out.push(
                    Composite { history: h.clone(), compass: Compass(c.clone()), third: Third::Root, kids: ChildSet::empty() }
                        .into_label(),
                );
            }
        }
        out
    }

    /// Labels a type-3 push may write below a parent whose compass points
    /// through the new child exactly at the coordinates in `mask`.
    fn child_choice(&self, mask: u32) -> &Choice {
        self.child_choices[mask as usize].get_or_init(|| {
            let coords: Vec<Vec<Heading>> = (1..=self.n() + 1)
                .map(|i| if mask & (1 << (i - 1)) != 0 { self.headings(i) } else { vec![Heading::South] })
                .collect();
            let compasses = product(&coords);
            let mut out = Vec::new();
            for h in HistoryArray::all_plain(self.n(), &self.plain).into_iter().filter(unvisited) {
                for c in &compasses {
                    out.push(
                        Composite { history: h.clone(), compass: Compass(c.clone()), third: Third::Dash, kids: ChildSet::empty() }
                            .into_label(),
                    );
                }
            }
            out.into()
        })
    }

    fn specials(&self, i: u32) -> &Choice {
        &self.specials[i as usize - 1]
    }

    fn all_bits(&self) -> Vec<Bits> {
        let len = self.n() + 1;
        (0..1u32 << len).map(|bits| Bits { len, bits }).collect()
    }

    fn kid_sets(&self) -> Vec<ChildSet> {
        let mut out = vec![ChildSet::empty()];
        for l in 1..=self.d() {
            out = out.into_iter().flat_map(|s| [s, s.insert(l)]).collect();
        }
        out
    }

    fn states(&self) -> Vec<State> {
        let (n, d) = (self.n(), self.d());
        let mut out = vec![st(SigmaState::Start)];
        out.extend((1..=4).map(|j| st(SigmaState::StartStep(j))));
        for b in self.all_bits() {
            out.push(st(SigmaState::Binary(b)));
            out.extend((1..=d).map(|l| st(SigmaState::PendingPush(b, l))));
        }
        for i in 1..=n {
            out.push(st(SigmaState::Locate(i)));
            out.push(st(SigmaState::Done(i)));
            out.extend(self.states_n.iter().map(|q| st(SigmaState::Sim(q.clone(), i))));
            for t in 0..self.delta_n.list().len() as u32 {
                out.extend((1..=6).map(|j| st(SigmaState::SimStep(t, i, j))));
            }
        }
        for l in self.specials.iter().flat_map(|c| c.iter()) {
            let key = l.as_special().expect("special label");
            out.extend((1..=4).map(|j| key.gadget(j)));
        }
        out.extend([CheckState::Enter, CheckState::Next, CheckState::Leave, CheckState::Accept].map(|c| st(SigmaState::Check(c))));
        out.extend((1..=d).map(|l| st(SigmaState::Check(CheckState::Up(l)))));
        out
    }

    fn state_count(&self) -> u128 {
        let (n, d) = (self.n() as u128, self.d() as u128);
        let bits = 1u128 << (n + 1);
        let specials: u128 = self.specials.iter().map(|c| c.len() as u128).sum();
        5 + bits * (1 + d)
            + n * (2 + self.states_n.len() as u128 + 6 * self.delta_n.list().len() as u128)
            + 4 * specials
            + 4
            + d
    }

    fn labels(&self) -> Vec<Label> {
        let mut out = vec![Label::Root, Label::Box];
        out.extend(self.specials.iter().flat_map(|c| c.iter().cloned()));
        let kids = self.kid_sets();
        for l in self.root_choice.iter() {
            let c = l.as_composite().expect("composite");
            out.extend(kids.iter().map(|&k| c.with_kids(k).into_label()));
        }
        let coords: Vec<Vec<Heading>> = (1..=self.n() + 1)
            .map(|i| {
                let mut v = self.headings(i);
                v.push(Heading::South);
                v
            })
            .collect();
        let compasses = product(&coords);
        let thirds: Vec<Third> = std::iter::once(Third::Dash).chain(self.plain.iter().map(Third::of)).collect();
        for h in HistoryArray::all_plain(self.n(), &self.plain) {
            for c in &compasses {
                for t in &thirds {
                    for &k in &kids {
                        out.push(
                            Composite { history: h.clone(), compass: Compass(c.clone()), third: t.clone(), kids: k }
                                .into_label(),
                        );
                    }
                }
            }
        }
        out
    }

    fn label_count(&self) -> u128 {
        let (n, d) = (self.n(), self.d() as u128);
        let kids = 1u128 << d;
        let cells = 3 * self.plain.len() as u128;
        let plain_forms: u128 = (1..=n).map(|f| cells.pow(n - f + 1)).sum();
        let specials: u128 = self.specials.iter().map(|c| c.len() as u128).sum();
        2 + specials
            + self.root_choice.len() as u128 * kids
            + plain_forms * (d + 2).pow(n + 1) * (self.plain.len() as u128 + 1) * kids
    }

    fn universe_size(&self) -> u128 {
        self.state_count().saturating_mul(self.label_count())
    }

    fn universe(&self) -> (Vec<State>, Vec<Label>) {
        (self.states(), self.labels())
    }

    fn push_indices(&self) -> BTreeSet<u32> {
        (1..=self.d() + self.n() + 1).collect()
    }
}

macro_rules! delegate_universe {
    () => {
        fn push_indices(&self) -> BTreeSet<u32> {
            self.ctx.push_indices()
        }

        fn universe_size(&self) -> u128 {
            self.ctx.universe_size()
        }

        fn universe(&self) -> (Vec<State>, Vec<Label>) {
            self.ctx.universe()
        }
    };
}

/// Phase One: build the copy of the final tree with guessed annotations.
#[derive(Debug)]
pub struct PhaseOne {
    ctx: Arc<SigmaContext>,
}

impl Schema for PhaseOne {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        let ctx = &*self.ctx;
        let (n, d) = (ctx.n(), ctx.d());
        let Some(s) = state.as_sigma() else { return };
        let rule = |instr, dst| Rule::new(None, eq(label), instr, st(dst));
        let mut push = |idx: u32, choice: &Choice, dst: SigmaState| {
            if !choice.is_empty() {
                out.push(rule(RuleInstr::Push(idx, choice.clone()), dst));
            }
        };
        let comp = label.as_composite();
        let root_copy = comp.is_some_and(|c| c.is_root_copy());
        match s {
            SigmaState::Start if label.is_root() => push(1, &ctx.root_choice, SigmaState::StartStep(1)),
            SigmaState::StartStep(1) if root_copy => push(d + 1, ctx.specials(1), SigmaState::StartStep(2)),
            SigmaState::StartStep(3) if root_copy => push(d + n + 1, ctx.specials(n + 1), SigmaState::StartStep(4)),
            SigmaState::StartStep(2) if label.as_special().is_some() => {
                out.push(rule(RuleInstr::Down, SigmaState::StartStep(3)))
            }
            SigmaState::StartStep(4) if label.as_special().is_some() => {
                let b = Bits { len: n + 1, bits: 0 }.set(1).set(n + 1);
                out.push(rule(RuleInstr::Down, SigmaState::Binary(b)))
            }
            SigmaState::Binary(b) if label.as_special().is_some() => {
                out.push(rule(RuleInstr::Down, SigmaState::Binary(*b)))
            }
            SigmaState::Binary(b) => {
                let Some(c) = comp else { return };
                for i in 2..=n {
                    if !b.get(i) && c.compass.get(i) == Heading::Child(d + i) {
                        push(d + i, ctx.specials(i), SigmaState::Binary(b.set(i)));
                    }
                }
                for l in (1..=d).filter(|&l| !c.kids.contains(l)) {
                    let parent = c.with_kids(c.kids.insert(l)).into_label();
                    out.push(rule(RuleInstr::Set(one(parent)), SigmaState::PendingPush(*b, l)));
                }
                if !c.is_root_copy() {
                    out.push(rule(RuleInstr::Down, SigmaState::Binary(*b)));
                } else if b.all() {
                    out.push(rule(RuleInstr::Id, SigmaState::Locate(ctx.meta.sigma.image(1))));
                }
            }
            SigmaState::PendingPush(b, l) => {
                let Some(c) = comp else { return };
                let mask = (1..=n + 1)
                    .filter(|&i| c.compass.get(i) == Heading::Child(*l))
                    .fold(0u32, |m, i| m | 1 << (i - 1));
                push(*l, ctx.child_choice(mask), SigmaState::Binary(*b));
            }
            _ => {}
        }
    }

    delegate_universe!();
}

/// Subroutine for block `i`: locate the `i`-th special vertex, simulate the
/// hash automaton reading `#i w_i #i+1`, and return to the root copy.
#[derive(Debug)]
pub struct Subroutine {
    ctx: Arc<SigmaContext>,
    i: u32,
}

fn status(c: &Composite, i: u32) -> Option<Status> {
    c.history.col(i).status()
}

fn set_col(c: &Composite, i: u32, status: Status, exit: &Label) -> Composite {
    c.with_history(c.history.with(i, Column::entry(status, exit.clone())))
}

impl Subroutine {
    /// A first visit while reading block `i`: column 0 becomes 1 and the
    /// third component takes the label the previous block left behind.
    fn first_visit(&self, c: &Composite) -> Option<Label> {
        let i = self.i;
        let Column::Entry { status: Status::Fresh, exit } = c.history.col(i) else { return None };
        if i == 1 {
            return None;
        }
        let before = c.history.col(i - 1).exit()?;
        Some(set_col(c, i, Status::Open, exit).with_third(Third::of(before)).into_label())
    }

    /// The label after a guessed last exit, if the guess is consistent.
    fn last_exit(&self, c: &Composite, current: &Label) -> Option<Label> {
        match c.history.col(self.i) {
            Column::Entry { status: Status::Open, exit } if exit == current => {
                Some(set_col(c, self.i, Status::Closed, exit).into_label())
            }
            _ => None,
        }
    }

    fn simulate(&self, q: &State, label: &Label, out: &mut Vec<Rule>) {
        let i = self.i;
        let Some(c) = label.as_composite() else { return };
        if status(c, i) != Some(Status::Open) {
            return;
        }
        let Some(current) = c.third.label() else { return };
        let list = self.ctx.delta_n.list();
        for &t in self.ctx.delta_n.indices_from(q) {
            let tr = &list[t as usize];
            if tr.input.as_deref().is_some_and(|x| hash_index(x).is_some()) || !tr.pred.holds_on(&current) {
                continue;
            }
            if let State::Gadget(key, _) = &tr.dst {
                if key.index != i + 1 {
                    continue;
                }
            }
            let rule = |instr, dst| Rule::new(tr.input.clone(), eq(label), instr, dst);
            let step = |j| st(SigmaState::SimStep(t, i, j));
            let sim = st(SigmaState::Sim(tr.dst.clone(), i));
            let exit = self.last_exit(c, &current);
            match &tr.instr {
                Instruction::Id => out.push(rule(RuleInstr::Id, sim)),
                Instruction::Set(x) => {
                    out.push(rule(RuleInstr::Set(one(c.with_third(Third::of(x)).into_label())), sim))
                }
                Instruction::Down | Instruction::Up(_) => {
                    let (via, to, instr) = match tr.instr {
                        Instruction::Down => (1, 2, RuleInstr::Down),
                        Instruction::Up(l) => (3, 4, RuleInstr::Up(l)),
                        _ => unreachable!(),
                    };
                    out.push(rule(instr, step(to)));
                    if let Some(e) = exit {
                        out.push(rule(RuleInstr::Set(one(e)), step(via)));
                    }
                }
                Instruction::Push(l, g) => {
                    let special = g.as_special().is_some();
                    if !special {
                        out.push(rule(RuleInstr::Up(*l), step(6)));
                    }
                    if let Some(e) = exit {
                        out.push(rule(RuleInstr::Set(one(e)), step(5)));
                    }
                }
            }
        }
    }

    fn sim_step(&self, t: u32, j: u8, label: &Label, out: &mut Vec<Rule>) {
        let i = self.i;
        let tr = &self.ctx.delta_n.list()[t as usize];
        let rule = |instr, dst| Rule::new(None, eq(label), instr, dst);
        let sim = st(SigmaState::Sim(tr.dst.clone(), i));
        let comp = label.as_composite();
        match (j, &tr.instr) {
            (1, _) if comp.is_some() => out.push(rule(RuleInstr::Down, st(SigmaState::SimStep(t, i, 2)))),
            (3, Instruction::Up(l)) | (5, Instruction::Push(l, _)) if comp.is_some() => {
                out.push(rule(RuleInstr::Up(*l), st(SigmaState::SimStep(t, i, j + 1))))
            }
            (2 | 4, _) => {
                let Some(c) = comp else { return };
                match status(c, i) {
                    Some(Status::Open) => out.push(rule(RuleInstr::Id, sim)),
                    Some(Status::Fresh) => {
                        if let Some(m) = self.first_visit(c) {
                            out.push(rule(RuleInstr::Set(one(m)), sim));
                        }
                    }
                    _ => {}
                }
            }
            (6, Instruction::Push(_, g)) => {
                if let Some(key) = g.as_special() {
                    if label == g {
                        out.push(rule(RuleInstr::Id, key.gadget(1)));
                    }
                    return;
                }
                let Some(c) = comp.filter(|c| !c.is_root_copy()) else { return };
                let Column::Entry { status: Status::Fresh, exit } = c.history.col(i) else { return };
                if i > 1 && *c.history.col(i - 1) != Column::Percent {
                    return;
                }
                let m = set_col(c, i, Status::Open, exit).with_third(Third::of(g)).into_label();
                out.push(rule(RuleInstr::Set(one(m)), sim));
            }
            _ => {}
        }
    }

    fn gadget(&self, key: &SpecialKey, j: u8, label: &Label, out: &mut Vec<Rule>) {
        let i = self.i;
        let ctx = &*self.ctx;
        let rule = |input: Option<_>, instr, dst| Rule::new(input, eq(label), instr, dst);
        match j {
            1 | 2 if label.as_special() == Some(key) => {
                out.push(rule(Some(hash_letter(key.index)), RuleInstr::Down, key.gadget(if j == 1 { 4 } else { 3 })))
            }
            4 => match label.as_composite() {
                Some(c) if c.is_root_copy() => out.push(rule(None, RuleInstr::Id, st(SigmaState::Done(i)))),
                Some(_) => out.push(rule(None, RuleInstr::Down, key.gadget(4))),
                None => {}
            },
            3 => {
                let Some(c) = label.as_composite() else { return };
                let sim = st(SigmaState::Sim(key.to.clone(), i));
                if i == 1 {
                    if c.is_root_copy() {
                        let m = set_col(c, 1, Status::Open, &Label::Root).into_label();
                        out.push(rule(None, RuleInstr::Set(one(m)), sim));
                    }
                    return;
                }
                if c.compass.get(i) != Heading::Child(ctx.d() + i) || c.history.col(i - 1).exit() != Some(&key.under) {
                    return;
                }
                if let Some(m) = self.first_visit(c) {
                    out.push(rule(None, RuleInstr::Set(one(m)), sim));
                }
            }
            _ => {}
        }
    }
}

impl Schema for Subroutine {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        let i = self.i;
        match state {
            State::Gadget(key, j) if (key.index == i && matches!(j, 2 | 3)) || (key.index == i + 1 && matches!(j, 1 | 4)) => {
                self.gadget(key, *j, label, out)
            }
            State::Sigma(s) => match &**s {
                SigmaState::Locate(x) if *x == i => match label {
                    Label::Composite(c) => {
                        if let Heading::Child(l) = c.compass.get(i) {
                            out.push(Rule::new(None, eq(label), RuleInstr::Up(l), state.clone()));
                        }
                    }
                    Label::Special(key) if key.index == i => {
                        out.push(Rule::new(None, eq(label), RuleInstr::Id, key.gadget(2)))
                    }
                    _ => {}
                },
                SigmaState::Sim(q, x) if *x == i => self.simulate(q, label, out),
                SigmaState::SimStep(t, x, j) if *x == i => self.sim_step(*t, *j, label, out),
                _ => {}
            },
            _ => {}
        }
    }

    delegate_universe!();
}

/// Explicit transitions exposed as a schema.
#[derive(Debug)]
pub struct Glue {
    ctx: Arc<SigmaContext>,
    list: Explicit,
}

impl Schema for Glue {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        for t in self.list.from_state(state).filter(|t| t.pred.holds_on(label)) {
            out.push(Rule::new(t.input.clone(), t.pred.clone(), RuleInstr::Id, t.dst.clone()));
        }
    }

    delegate_universe!();
}

/// Phase Three: depth-first check of every recorded child, boxing each
/// checked vertex, ending at the root.
#[derive(Debug)]
pub struct PhaseThree {
    ctx: Arc<SigmaContext>,
}

/// Every column 0 or 2, the first one 2, and untouched blocks pass the
/// previous block's exit label through.
fn history_closed(h: &HistoryArray) -> bool {
    let Some(first) = h.first_entry() else { return false };
    if h.col(first).status() != Some(Status::Closed) {
        return false;
    }
    (first + 1..=h.len() as u32).all(|j| match h.col(j).status() {
        Some(Status::Closed) => true,
        Some(Status::Fresh) => h.col(j).exit() == h.col(j - 1).exit(),
        _ => false,
    })
}

impl Schema for PhaseThree {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        let Some(s) = state.as_sigma() else { return };
        let check = |c| st(SigmaState::Check(c));
        let rule = |instr, dst| Rule::new(None, eq(label), instr, dst);
        match s {
            SigmaState::Done(i) if *i == self.ctx.meta.sigma.image(self.ctx.n()) => {
                out.push(Rule::new(None, Predicate::True, RuleInstr::Id, check(CheckState::Enter)))
            }
            SigmaState::Check(CheckState::Enter) => {
                if label.as_composite().is_some_and(|c| history_closed(&c.history)) {
                    out.push(rule(RuleInstr::Id, check(CheckState::Next)));
                }
            }
            SigmaState::Check(CheckState::Next) => match label {
                Label::Root => out.push(rule(RuleInstr::Id, check(CheckState::Accept))),
                Label::Composite(c) => match c.kids.min() {
                    Some(l) => {
                        let m = c.with_kids(c.kids.remove(l)).into_label();
                        out.push(rule(RuleInstr::Set(one(m)), check(CheckState::Up(l))));
                    }
                    None => out.push(rule(RuleInstr::Set(one(Label::Box)), check(CheckState::Leave))),
                },
                _ => {}
            },
            SigmaState::Check(CheckState::Up(l)) if label.as_composite().is_some() => {
                out.push(rule(RuleInstr::Up(*l), check(CheckState::Enter)))
            }
            SigmaState::Check(CheckState::Leave) if *label == Label::Box => {
                out.push(rule(RuleInstr::Down, check(CheckState::Next)))
            }
            _ => {}
        }
    }

    delegate_universe!();
}

/// A union of schemas over one context.
#[derive(Debug)]
pub struct SchemaSet {
    ctx: Arc<SigmaContext>,
    parts: Vec<Arc<dyn Schema>>,
}

impl SchemaSet {
    pub fn new(ctx: Arc<SigmaContext>, parts: Vec<Arc<dyn Schema>>) -> SchemaSet {
        SchemaSet { ctx, parts }
    }

    pub fn parts(&self) -> &[Arc<dyn Schema>] {
        &self.parts
    }
}

impl Schema for SchemaSet {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        for p in &self.parts {
            p.rules(state, label, out);
        }
    }

    delegate_universe!();
}

pub fn phase_one_schemas(ctx: &Arc<SigmaContext>) -> SchemaSet {
    SchemaSet::new(ctx.clone(), vec![Arc::new(PhaseOne { ctx: ctx.clone() })])
}

pub fn subroutine_schemas(ctx: &Arc<SigmaContext>, i: u32) -> SchemaSet {
    SchemaSet::new(ctx.clone(), vec![Arc::new(Subroutine { ctx: ctx.clone(), i })])
}

/// `Done(σ(p)) -> Locate(σ(p+1))` for `p < N`.
pub fn phase_two_glue(meta: &PipelineMeta) -> Vec<Transition> {
    let s = &meta.sigma;
    (1..meta.n)
        .map(|p| Transition {
            src: st(SigmaState::Done(s.image(p))),
            input: None,
            pred: Predicate::True,
            instr: Instruction::Id,
            dst: st(SigmaState::Locate(s.image(p + 1))),
        })
        .collect()
}

pub fn phase_three_schemas(ctx: &Arc<SigmaContext>) -> SchemaSet {
    SchemaSet::new(ctx.clone(), vec![Arc::new(PhaseThree { ctx: ctx.clone() })])
}

/// Notes recorded on every permutation automaton.
const NOTES: &[&str] = &[
    "root push written as (q, x, pred, instr, q')",
    "root-copy compass is (D+1, x_2..x_N, D+N+1)",
    "simulation steps carry the simulated transition index",
    "a first visit sets the third component from the previous block's exit",
    "the end-of-block special read moves down, then down to the root copy",
    "composite labels carry the set of pushed children for the final check",
];

/// Assembles the permutation automaton for `meta.sigma`.
pub fn build_a_sigma(a: &Automaton, a_n: &Automaton, meta: &PipelineMeta) -> Result<Automaton, ConstructionError> {
    let ctx = Arc::new(SigmaContext::new(a, a_n, meta.clone())?);
    let mut parts: Vec<Arc<dyn Schema>> = vec![Arc::new(PhaseOne { ctx: ctx.clone() })];
    for i in 1..=meta.n {
        parts.push(Arc::new(Subroutine { ctx: ctx.clone(), i }));
    }
    parts.push(Arc::new(Glue { ctx: ctx.clone(), list: Explicit::new(phase_two_glue(meta)) }));
    parts.push(Arc::new(PhaseThree { ctx: ctx.clone() }));
    let accept = st(SigmaState::Check(CheckState::Accept));
    let start = st(SigmaState::Start);
    let mut notes = vec![format!("permutation {}", meta.sigma)];
    notes.extend(NOTES.iter().map(|s| s.to_string()));
    Ok(Automaton {
        states: [start.clone(), accept.clone()].into(),
        labels: BTreeSet::new(),
        terminals: a_n.terminals.clone(),
        initial: start,
        finals: [accept].into(),
        source: TransitionSource::Schematic(Arc::new(SchemaSet::new(ctx, parts))),
        meta: Meta {
            claimed_k: Some(meta.k + meta.n + 3),
            declared_degree: Some(meta.degree + meta.n + 1),
            notes,
        },
    })
}
