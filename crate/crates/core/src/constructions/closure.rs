//! Erasure, union and the full closure pipeline.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::automaton::{Automaton, Meta, Rule, RuleInstr, Schema, Transition, TransitionSource};
use crate::error::ConstructionError;
use crate::label::{Label, Sym};
use crate::oracle::Permutation;
use crate::runner::{enumerate_witnesses, Budget};
use crate::state::State;
use crate::tree::Predicate;

use super::{build_a_sigma, hash_index, hash_pipeline, PipelineMeta};

/// Default bound on `N` for [`permutation_closure`].
pub const DEFAULT_PERMUTATION_CAP: u32 = 4;

fn is_hash(x: &Option<Sym>) -> bool {
    x.as_deref().is_some_and(|x| hash_index(x).is_some())
}

#[derive(Debug)]
struct Erased(Arc<dyn Schema>);

impl Schema for Erased {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        let start = out.len();
        self.0.rules(state, label, out);
        for r in &mut out[start..] {
            if is_hash(&r.input) {
                r.input = None;
            }
        }
    }

    fn push_indices(&self) -> BTreeSet<u32> {
        self.0.push_indices()
    }

    fn universe_size(&self) -> u128 {
        self.0.universe_size()
    }

    fn universe(&self) -> (Vec<State>, Vec<Label>) {
        self.0.universe()
    }
}

/// Turns every hash-reading transition into an ε-move.
pub fn erase_hashes(aut: &Automaton) -> Automaton {
    let source = match &aut.source {
        TransitionSource::Explicit(e) => {
            let list = e
                .list()
                .iter()
                .map(|t| Transition { input: if is_hash(&t.input) { None } else { t.input.clone() }, ..t.clone() })
                .collect();
            aut.with_transitions(list).source
        }
        TransitionSource::Schematic(s) => TransitionSource::Schematic(Arc::new(Erased(s.clone()))),
    };
    Automaton {
        terminals: aut.terminals.iter().filter(|x| hash_index(x).is_none()).cloned().collect(),
        source,
        ..aut.clone()
    }
}

#[derive(Debug)]
struct Union {
    initial: State,
    parts: Vec<Automaton>,
}

impl Schema for Union {
    fn rules(&self, state: &State, label: &Label, out: &mut Vec<Rule>) {
        if *state == self.initial {
            for (n, a) in self.parts.iter().enumerate() {
                let dst = State::tagged(n as u32, a.initial.clone());
                out.push(Rule::new(None, Predicate::True, RuleInstr::Id, dst));
            }
            return;
        }
        let State::Tagged(n, q) = state else { return };
        let Some(a) = self.parts.get(*n as usize) else { return };
        let start = out.len();
        a.rules(q, label, out);
        for r in &mut out[start..] {
            r.dst = State::tagged(*n, r.dst.clone());
        }
    }

    fn push_indices(&self) -> BTreeSet<u32> {
        self.parts.iter().flat_map(|a| a.push_indices()).collect()
    }

    fn universe_size(&self) -> u128 {
        let mut states = 1u128;
        let mut labels = 0u128;
        for a in &self.parts {
            let size = match &a.source {
                TransitionSource::Explicit(e) => {
                    let s = a.states.len() as u128;
                    (s, (e.list().len() as u128).max(a.labels.len() as u128 + 1))
                }
                TransitionSource::Schematic(s) => {
                    let u = s.universe_size();
                    (u, u)
                }
            };
            states = states.saturating_add(size.0);
            labels = labels.saturating_add(size.1);
        }
        states.saturating_mul(labels)
    }

    fn universe(&self) -> (Vec<State>, Vec<Label>) {
        let mut states = vec![self.initial.clone()];
        let mut labels = vec![Label::Root];
        for (n, a) in self.parts.iter().enumerate() {
            let (s, l) = match &a.source {
                TransitionSource::Explicit(_) => (a.states.iter().cloned().collect(), a.labels.iter().cloned().collect()),
                TransitionSource::Schematic(s) => s.universe(),
            };
            states.extend(s.into_iter().map(|q| State::tagged(n as u32, q)));
            labels.extend(l);
        }
        labels.sort();
        labels.dedup();
        (states, labels)
    }
}

/// Union with component-tagged states and a fresh initial state.
pub fn union_automata(list: &[Automaton]) -> Automaton {
    let initial = State::name("$union");
    let tag = |n: usize, q: &State| State::tagged(n as u32, q.clone());
    let mut states: BTreeSet<State> = [initial.clone()].into();
    let mut finals = BTreeSet::new();
    let mut labels = BTreeSet::new();
    let mut terminals = BTreeSet::new();
    let mut meta = Meta::default();
    for (n, a) in list.iter().enumerate() {
        states.extend(a.states.iter().map(|q| tag(n, q)));
        finals.extend(a.finals.iter().map(|q| tag(n, q)));
        labels.extend(a.labels.iter().cloned());
        terminals.extend(a.terminals.iter().cloned());
        meta.claimed_k = meta.claimed_k.max(a.meta.claimed_k);
        meta.declared_degree = meta.declared_degree.max(a.meta.declared_degree);
        meta.notes.extend(a.meta.notes.iter().cloned());
    }
    let source = if list.iter().all(Automaton::is_explicit) {
        let mut transitions: Vec<Transition> = list
            .iter()
            .enumerate()
            .map(|(n, a)| Transition {
                src: initial.clone(),
                input: None,
                pred: Predicate::True,
                instr: crate::tree::Instruction::Id,
                dst: tag(n, &a.initial),
            })
            .collect();
        for (n, a) in list.iter().enumerate() {
            for t in a.transitions().expect("explicit") {
                transitions.push(Transition { src: tag(n, &t.src), dst: tag(n, &t.dst), ..t.clone() });
            }
        }
        TransitionSource::Explicit(crate::automaton::Explicit::new(transitions))
    } else {
        TransitionSource::Schematic(Arc::new(Union { initial: initial.clone(), parts: list.to_vec() }))
    };
    Automaton { states, labels, terminals, initial, finals, source, meta }
}

/// An automaton for the `n`-th permutation closure of the language of
/// `base`, refusing `n > cap`.
pub fn permutation_closure(base: &Automaton, n: u32, cap: u32) -> Result<Automaton, ConstructionError> {
    if n > cap {
        return Err(ConstructionError::TooManyPermutations { n, cap });
    }
    let k = base.meta.claimed_k.ok_or(ConstructionError::MissingRestriction)?;
    let pipe = hash_pipeline(base, n)?;
    let mut parts = Vec::new();
    for sigma in Permutation::all(n) {
        let meta = PipelineMeta { n, k, degree: pipe.degree, sigma };
        parts.push(erase_hashes(&build_a_sigma(&pipe.framed, &pipe.hashed, &meta)?));
    }
    let mut out = union_automata(&parts);
    out.meta.claimed_k = Some(k + n + 3);
    Ok(out)
}

/// A node budget that cannot cut off accepting runs of pipeline automata
/// on words up to `max_len`: the root, the root copy of the base tree, and
/// the `N+1` special vertices.
///
/// `k` is the restriction the pipeline automaton is run at; the base runs
/// it simulates are no more restricted, so the base's largest final tree is
/// measured by enumeration at `k`. `None` when that enumeration is
/// incomplete.
pub fn derived_node_cap(base: &Automaton, n: u32, max_len: usize, k: u32, budget: Budget) -> Option<usize> {
    let e = enumerate_witnesses(base, max_len, k, budget);
    e.complete.then_some(1 + e.max_final_tree.max(1) + n as usize + 1)
}
