//! Breadth-first search over configurations whose vertices carry sets of
//! candidate labels.
//!
//! A pushed or written label is often chosen from a large family. Instead of
//! branching on every member, the vertex keeps the whole family as a set and
//! the set is narrowed only when a predicate or rule choice distinguishes its
//! members. Labels at distinct vertices are independent, so a symbolic
//! configuration stands exactly for the product of its concrete ones.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::rc::Rc;

use indexmap::IndexSet;

use crate::address::Address;
use crate::automaton::{Automaton, Choice, Rule, RuleInstr, Transition};
use crate::label::{Label, Sym};
use crate::state::State;

use super::Budget;

/// Input id 0 is ε; letter ids start at 1.
type Input = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Id,
    Up(u32),
    Down,
    Push(u32, u32),
    Set,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Key {
    input: Input,
    kind: Kind,
    dst: u32,
}

struct IRule {
    key: Key,
    /// Label set of the choice, for push and set.
    choice: Option<u32>,
    rule: Rule,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Group {
    key: Key,
    /// Narrowed cursor set, or the written set for `Set`.
    set: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    set: u32,
    idx: u32,
    depth: u8,
    visits: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Config {
    state: u32,
    cursor: u16,
    pos: u16,
    nodes: Box<[Node]>,
    /// Letters read so far; kept only when enumerating.
    consumed: Box<[u32]>,
}

pub(crate) enum Mode<'w> {
    Word(&'w [Sym]),
    Enumerate(usize),
}

pub(crate) struct Engine<'a> {
    aut: &'a Automaton,
    k: u32,
    budget: Budget,
    states: IndexSet<State>,
    finals: Vec<bool>,
    labels: IndexSet<Label>,
    sets: IndexSet<Box<[u32]>>,
    letters: IndexSet<Sym>,
    choices: HashMap<usize, (Choice, u32)>,
    label_rules: HashMap<(u32, u32), Rc<[IRule]>>,
    groups: HashMap<(u32, u32), Rc<[Group]>>,
    configs: IndexSet<Config>,
    parents: Vec<(u32, u32)>,
    steps: Vec<u32>,
    rule_buf: Vec<Rule>,
}

/// Result of a search.
pub(crate) struct Outcome {
    /// Accepting configurations in discovery order.
    pub accepting: Vec<u32>,
    pub capped: bool,
}

enum Succ {
    Dead,
    Capped,
    Next(Config),
}

impl<'a> Engine<'a> {
    pub fn new(aut: &'a Automaton, k: u32, budget: Budget) -> Engine<'a> {
        let mut e = Engine {
            aut,
            k: k.min(u16::MAX as u32),
            budget,
            states: IndexSet::new(),
            finals: Vec::new(),
            labels: IndexSet::new(),
            sets: IndexSet::new(),
            letters: IndexSet::new(),
            choices: HashMap::new(),
            label_rules: HashMap::new(),
            groups: HashMap::new(),
            configs: IndexSet::new(),
            parents: Vec::new(),
            steps: Vec::new(),
            rule_buf: Vec::new(),
        };
        for x in &aut.terminals {
            e.letters.insert(x.clone());
        }
        e
    }

    fn state_id(&mut self, q: &State) -> u32 {
        if let Some(i) = self.states.get_index_of(q) {
            return i as u32;
        }
        let (i, _) = self.states.insert_full(q.clone());
        self.finals.push(self.aut.finals.contains(q));
        i as u32
    }

    fn label_id(&mut self, l: &Label) -> u32 {
        if let Some(i) = self.labels.get_index_of(l) {
            return i as u32;
        }
        self.labels.insert_full(l.clone()).0 as u32
    }

    fn set_id(&mut self, mut members: Vec<u32>) -> u32 {
        members.sort_unstable();
        members.dedup();
        self.sets.insert_full(members.into_boxed_slice()).0 as u32
    }

    fn choice_id(&mut self, c: &Choice) -> u32 {
        let ptr = Choice::as_ptr(c) as *const () as usize;
        if let Some((_, id)) = self.choices.get(&ptr) {
            return *id;
        }
        let members: Vec<u32> = c.iter().map(|l| self.label_id(l)).collect();
        let id = self.set_id(members);
        self.choices.insert(ptr, (c.clone(), id));
        id
    }

    fn input_id(&mut self, x: &Option<Sym>) -> Input {
        match x {
            None => 0,
            Some(x) => self.letters.insert_full(x.clone()).0 as u32 + 1,
        }
    }

    fn rules_at(&mut self, state: u32, label: u32) -> Rc<[IRule]> {
        if let Some(r) = self.label_rules.get(&(state, label)) {
            return r.clone();
        }
        let mut buf = std::mem::take(&mut self.rule_buf);
        buf.clear();
        let q = self.states[state as usize].clone();
        let l = self.labels[label as usize].clone();
        self.aut.rules(&q, &l, &mut buf);
        let mut out = Vec::with_capacity(buf.len());
        for rule in buf.drain(..) {
            let input = self.input_id(&rule.input);
            let dst = self.state_id(&rule.dst);
            let (kind, choice) = match &rule.instr {
                RuleInstr::Id => (Kind::Id, None),
                RuleInstr::Up(n) => (Kind::Up(*n), None),
                RuleInstr::Down => (Kind::Down, None),
                RuleInstr::Push(n, c) => {
                    let id = self.choice_id(c);
                    (Kind::Push(*n, id), Some(id))
                }
                RuleInstr::Set(c) => (Kind::Set, Some(self.choice_id(c))),
            };
            out.push(IRule { key: Key { input, kind, dst }, choice, rule });
        }
        self.rule_buf = buf;
        let out: Rc<[IRule]> = out.into();
        self.label_rules.insert((state, label), out.clone());
        out
    }

    fn groups_at(&mut self, state: u32, set: u32) -> Rc<[Group]> {
        if let Some(g) = self.groups.get(&(state, set)) {
            return g.clone();
        }
        let members = self.sets[set as usize].clone();
        let mut order: Vec<Key> = Vec::new();
        let mut acc: HashMap<Key, Vec<u32>> = HashMap::new();
        for &l in members.iter() {
            let rules = self.rules_at(state, l);
            for r in rules.iter() {
                let slot = acc.entry(r.key).or_insert_with(|| {
                    order.push(r.key);
                    Vec::new()
                });
                match r.key.kind {
                    Kind::Set => slot.extend_from_slice(&self.sets[r.choice.unwrap() as usize]),
                    _ => {
                        if slot.last() != Some(&l) {
                            slot.push(l)
                        }
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(order.len());
        for key in order {
            let members = acc.remove(&key).unwrap();
            let set = self.set_id(members);
            out.push(Group { key, set });
        }
        let out: Rc<[Group]> = out.into();
        self.groups.insert((state, set), out.clone());
        out
    }

    fn accepting(&self, c: &Config, mode: &Mode) -> bool {
        self.finals[c.state as usize]
            && match mode {
                Mode::Word(w) => c.pos as usize == w.len(),
                Mode::Enumerate(_) => true,
            }
    }

    /// Runs the search. With `first_only`, stops at the first accepting
    /// configuration.
    pub fn search(&mut self, mode: &Mode, first_only: bool) -> Outcome {
        let word: Vec<Input> = match mode {
            Mode::Word(w) => w.iter().map(|x| self.input_id(&Some(x.clone()))).collect(),
            Mode::Enumerate(_) => Vec::new(),
        };
        let init = self.state_id(&self.aut.initial.clone());
        let root = self.label_id(&Label::Root);
        let root_set = self.set_id(vec![root]);
        let start = Config {
            state: init,
            cursor: 0,
            pos: 0,
            nodes: Box::new([Node { set: root_set, idx: 0, depth: 0, visits: 0 }]),
            consumed: Box::new([]),
        };
        let mut out = Outcome { accepting: Vec::new(), capped: false };
        if self.accepting(&start, mode) {
            out.accepting.push(0);
        }
        self.configs.insert(start);
        self.parents.push((u32::MAX, u32::MAX));
        self.steps.push(0);
        if first_only && !out.accepting.is_empty() {
            return out;
        }
        let mut queue = VecDeque::from([0u32]);
        while let Some(ci) = queue.pop_front() {
            let c = self.configs[ci as usize].clone();
            let depth = self.steps[ci as usize];
            let groups = self.groups_at(c.state, c.nodes[c.cursor as usize].set);
            for (gi, g) in groups.iter().enumerate() {
                let next = match self.successor(&c, g, mode, &word) {
                    Succ::Dead => continue,
                    Succ::Capped => {
                        out.capped = true;
                        continue;
                    }
                    Succ::Next(n) => n,
                };
                if depth as usize >= self.budget.max_steps {
                    out.capped = true;
                    break;
                }
                if self.configs.contains(&next) {
                    continue;
                }
                if self.configs.len() >= self.budget.max_configs {
                    out.capped = true;
                    return out;
                }
                let acc = self.accepting(&next, mode);
                let (ni, _) = self.configs.insert_full(next);
                self.parents.push((ci, gi as u32));
                self.steps.push(depth + 1);
                if acc {
                    out.accepting.push(ni as u32);
                    if first_only {
                        return out;
                    }
                }
                queue.push_back(ni as u32);
            }
        }
        out
    }

    fn successor(&self, c: &Config, g: &Group, mode: &Mode, word: &[Input]) -> Succ {
        let mut pos = c.pos;
        let mut consumed = None;
        if g.key.input != 0 {
            match mode {
                Mode::Word(_) => {
                    if word.get(pos as usize) != Some(&g.key.input) {
                        return Succ::Dead;
                    }
                }
                Mode::Enumerate(max) => {
                    if pos as usize >= *max {
                        return Succ::Dead;
                    }
                    let mut v = c.consumed.to_vec();
                    v.push(g.key.input);
                    consumed = Some(v.into_boxed_slice());
                }
            }
            pos += 1;
        }
        let cur = c.cursor as usize;
        let mut nodes = c.nodes.to_vec();
        let cursor = match g.key.kind {
            Kind::Id => {
                nodes[cur].set = g.set;
                cur
            }
            Kind::Up(n) => {
                let Some(child) = find_child(&nodes, cur, n) else { return Succ::Dead };
                if nodes[child].visits as u32 >= self.k {
                    return Succ::Dead;
                }
                nodes[cur].set = g.set;
                nodes[child].visits += 1;
                child
            }
            Kind::Down => {
                if cur == 0 {
                    return Succ::Dead;
                }
                nodes[cur].set = g.set;
                parent(&nodes, cur)
            }
            Kind::Push(n, child_set) => {
                if find_child(&nodes, cur, n).is_some() || self.k == 0 {
                    return Succ::Dead;
                }
                if nodes.len() >= self.budget.max_nodes || nodes[cur].depth == u8::MAX {
                    return if self.budget.node_bound { Succ::Dead } else { Succ::Capped };
                }
                nodes[cur].set = g.set;
                let at = insert_point(&nodes, cur, n);
                let depth = nodes[cur].depth + 1;
                nodes.insert(at, Node { set: child_set, idx: n, depth, visits: 1 });
                at
            }
            Kind::Set => {
                if cur == 0 {
                    return Succ::Dead;
                }
                nodes[cur].set = g.set;
                cur
            }
        };
        Succ::Next(Config {
            state: g.key.dst,
            cursor: cursor as u16,
            pos,
            nodes: nodes.into_boxed_slice(),
            consumed: consumed.unwrap_or_else(|| c.consumed.clone()),
        })
    }

    /// Letters read on the way to configuration `ci`.
    pub fn word_of(&self, ci: u32) -> Vec<Sym> {
        self.configs[ci as usize]
            .consumed
            .iter()
            .map(|&x| self.letters[x as usize - 1].clone())
            .collect()
    }

    /// Number of vertices of configuration `ci`.
    pub fn tree_size(&self, ci: u32) -> usize {
        self.configs[ci as usize].nodes.len()
    }

    pub fn explored(&self) -> usize {
        self.configs.len()
    }

    /// A concrete transition sequence reaching configuration `ci`.
    pub fn witness(&mut self, ci: u32) -> Vec<Transition> {
        let mut path = vec![ci];
        while self.parents[*path.last().unwrap() as usize].0 != u32::MAX {
            path.push(self.parents[*path.last().unwrap() as usize].0);
        }
        path.reverse();
        let last = self.configs[ci as usize].clone();
        let mut assign: BTreeMap<Address, u32> = addresses(&last.nodes)
            .into_iter()
            .zip(last.nodes.iter())
            .map(|(a, n)| (a, self.sets[n.set as usize][0]))
            .collect();
        let mut out = Vec::with_capacity(path.len());
        for j in (1..path.len()).rev() {
            let prev = self.configs[path[j - 1] as usize].clone();
            let gi = self.parents[path[j] as usize].1 as usize;
            let prev_set = prev.nodes[prev.cursor as usize].set;
            let g = self.groups_at(prev.state, prev_set)[gi];
            let here = addresses(&prev.nodes)[prev.cursor as usize].clone();
            let src = self.states[prev.state as usize].clone();
            let t = match g.key.kind {
                Kind::Set => {
                    let written = assign[&here];
                    let candidates = self.sets[prev_set as usize].clone();
                    let mut found = None;
                    for &l in candidates.iter() {
                        let rules = self.rules_at(prev.state, l);
                        if let Some(r) = rules.iter().find(|r| {
                            r.key == g.key && self.sets[r.choice.unwrap() as usize].contains(&written)
                        }) {
                            found = Some((l, r.rule.clone()));
                            break;
                        }
                    }
                    let (l, rule) = found.expect("a set rule explains the written label");
                    assign.insert(here, l);
                    concrete(&rule, &src, Some(&self.labels[written as usize]))
                }
                Kind::Push(n, _) => {
                    let child = assign.remove(&here.child(n)).expect("pushed child");
                    let l = assign[&here];
                    let rules = self.rules_at(prev.state, l);
                    let r = rules.iter().find(|r| r.key == g.key).expect("a push rule");
                    concrete(&r.rule, &src, Some(&self.labels[child as usize]))
                }
                _ => {
                    let l = assign[&here];
                    let rules = self.rules_at(prev.state, l);
                    let r = rules.iter().find(|r| r.key == g.key).expect("a rule for the group");
                    concrete(&r.rule, &src, None)
                }
            };
            out.push(t);
        }
        out.reverse();
        out
    }
}

fn concrete(rule: &Rule, src: &State, label: Option<&Label>) -> Transition {
    Transition {
        src: src.clone(),
        input: rule.input.clone(),
        pred: rule.pred.clone(),
        instr: rule.instruction(label),
        dst: rule.dst.clone(),
    }
}

fn find_child(nodes: &[Node], p: usize, n: u32) -> Option<usize> {
    let d = nodes[p].depth;
    for (i, node) in nodes.iter().enumerate().skip(p + 1) {
        if node.depth <= d {
            break;
        }
        if node.depth == d + 1 && node.idx == n {
            return Some(i);
        }
    }
    None
}

fn parent(nodes: &[Node], p: usize) -> usize {
    let d = nodes[p].depth;
    (0..p).rev().find(|&i| nodes[i].depth < d).expect("non-root node has a parent")
}

fn insert_point(nodes: &[Node], p: usize, n: u32) -> usize {
    let d = nodes[p].depth;
    for (i, node) in nodes.iter().enumerate().skip(p + 1) {
        if node.depth <= d || (node.depth == d + 1 && node.idx > n) {
            return i;
        }
    }
    nodes.len()
}

fn addresses(nodes: &[Node]) -> Vec<Address> {
    let mut out: Vec<Address> = Vec::with_capacity(nodes.len());
    let mut stack: Vec<Address> = Vec::new();
    for node in nodes {
        stack.truncate(node.depth as usize);
        let addr = match stack.last() {
            None => Address::root(),
            Some(p) => p.child(node.idx),
        };
        stack.push(addr.clone());
        out.push(addr);
    }
    out
}
