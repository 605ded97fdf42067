//! Hash insertion: from an automaton for `L` to one for
//! `#1 w1 #2 ... #N wN #N+1` with `w1 ... wN` in `L`, where each hash read
//! leaves a special vertex behind.

use std::collections::{BTreeMap, BTreeSet};

use crate::automaton::{degree, Automaton, Transition};
use crate::error::ConstructionError;
use crate::label::{Label, Sym};
use crate::normalize::{normalize_degree, normalize_root_accept};
use crate::state::{SpecialKey, State};
use crate::tree::{Instruction, Predicate};

use super::{hash_letter, hash_index, HashAlphabet};

fn collision(aut: &Automaton, letters: &[Sym]) -> Result<(), ConstructionError> {
    match letters.iter().find(|x| aut.terminals.contains(*x)) {
        Some(x) => Err(ConstructionError::LetterCollision(x.to_string())),
        None => Ok(()),
    }
}

/// Adds `(q, x, true, id, q)` for every state `q` and new letter `x`, so
/// the new letters may appear anywhere.
pub fn lift_inverse_erasing(aut: &Automaton, new_letters: &[Sym]) -> Result<Automaton, ConstructionError> {
    collision(aut, new_letters)?;
    let mut extra = Vec::new();
    for q in &aut.states {
        for x in new_letters {
            extra.push(Transition {
                src: q.clone(),
                input: Some(x.clone()),
                pred: Predicate::True,
                instr: Instruction::Id,
                dst: q.clone(),
            });
        }
    }
    let mut out = aut.with_extra(extra);
    out.terminals.extend(new_letters.iter().cloned());
    Ok(out)
}

/// A deterministic finite acceptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub states: Vec<State>,
    pub alphabet: BTreeSet<Sym>,
    pub initial: State,
    pub finals: BTreeSet<State>,
    pub delta: BTreeMap<(State, Sym), State>,
}

impl Dfa {
    pub fn accepts(&self, word: &[Sym]) -> bool {
        let mut q = self.initial.clone();
        for x in word {
            match self.delta.get(&(q, x.clone())) {
                Some(p) => q = p.clone(),
                None => return false,
            }
        }
        self.finals.contains(&q)
    }
}

/// The acceptor for `Σ* #2 Σ* #3 ... #N Σ*`.
pub fn hash_order_dfa(n: u32, sigma: &BTreeSet<Sym>) -> Dfa {
    let states: Vec<State> = (1..=n).map(|j| State::name(&format!("$p{j}"))).collect();
    let mut alphabet = sigma.clone();
    let mut delta = BTreeMap::new();
    for (j, p) in states.iter().enumerate() {
        for x in sigma {
            delta.insert((p.clone(), x.clone()), p.clone());
        }
        if let Some(next) = states.get(j + 1) {
            let h = hash_letter(j as u32 + 2);
            alphabet.insert(h.clone());
            delta.insert((p.clone(), h), next.clone());
        }
    }
    Dfa {
        initial: states[0].clone(),
        finals: [states[n as usize - 1].clone()].into(),
        states,
        alphabet,
        delta,
    }
}

/// Intersection with a regular language: states are pairs, letters advance
/// the acceptor, ε-moves keep it fixed.
pub fn product_with_dfa(aut: &Automaton, dfa: &Dfa) -> Result<Automaton, ConstructionError> {
    let Some(list) = aut.transitions() else {
        return Err(ConstructionError::NotExplicit("product_with_dfa"));
    };
    let mut transitions = Vec::new();
    for t in list {
        for p in &dfa.states {
            let p2 = match &t.input {
                None => p.clone(),
                Some(x) => match dfa.delta.get(&(p.clone(), x.clone())) {
                    Some(p2) => p2.clone(),
                    None => continue,
                },
            };
            transitions.push(Transition {
                src: State::pair(t.src.clone(), p.clone()),
                input: t.input.clone(),
                pred: t.pred.clone(),
                instr: t.instr.clone(),
                dst: State::pair(t.dst.clone(), p2),
            });
        }
    }
    let states = aut.states.iter().flat_map(|q| dfa.states.iter().map(move |p| State::pair(q.clone(), p.clone())));
    let finals = aut.finals.iter().flat_map(|q| dfa.finals.iter().map(move |p| State::pair(q.clone(), p.clone())));
    let mut out = Automaton::explicit(
        states,
        aut.labels.iter().cloned(),
        aut.terminals.iter().cloned(),
        State::pair(aut.initial.clone(), dfa.initial.clone()),
        finals,
        transitions,
    );
    out.meta = aut.meta.clone();
    Ok(out)
}

/// Root-normalizes, then frames the language with `#1` and `#N+1`.
pub fn wrap_endmarkers(aut: &Automaton, n: u32) -> Result<Automaton, ConstructionError> {
    let first = hash_letter(1);
    let last = hash_letter(n + 1);
    collision(aut, &[first.clone(), last.clone()])?;
    let norm = normalize_root_accept(aut);
    let q0 = norm.fresh_name("q0");
    let qf = norm.fresh_name("qf");
    let mark = |src: State, x: &Sym, dst: State| Transition {
        src,
        input: Some(x.clone()),
        pred: Predicate::Eq(Label::Root),
        instr: Instruction::Id,
        dst,
    };
    let mut extra = vec![mark(q0.clone(), &first, norm.initial.clone())];
    for f in &norm.finals {
        extra.push(mark(f.clone(), &last, qf.clone()));
    }
    let mut out = norm.with_extra(extra);
    out.states.extend([q0.clone(), qf.clone()]);
    out.terminals.extend([first, last]);
    out.initial = q0;
    out.finals = [qf].into();
    Ok(out)
}

/// Replaces every `#i` transition by the three-step gadget that pushes a
/// special vertex at child index `D+i`, reads `#i` on it, and returns.
pub fn specialize_hashes(aut: &Automaton, n: u32) -> Result<Automaton, ConstructionError> {
    let d = aut.meta.declared_degree.ok_or(ConstructionError::MissingDegree)?;
    let Some(list) = aut.transitions() else {
        return Err(ConstructionError::NotExplicit("specialize_hashes"));
    };
    let under: Vec<Label> = std::iter::once(Label::Root).chain(aut.labels.iter().cloned()).collect();
    let mut states = aut.states.clone();
    let mut labels = aut.labels.clone();
    let mut transitions = Vec::new();
    for t in list {
        if matches!(t.instr, Instruction::Up(j) if j > d) {
            continue;
        }
        let Some(i) = t.input.as_deref().and_then(hash_index).filter(|&i| i <= n + 1) else {
            transitions.push(t.clone());
            continue;
        };
        for c in &under {
            let key = SpecialKey { index: i, from: t.src.clone(), to: t.dst.clone(), under: c.clone() };
            let (g1, g2, special) = (key.gadget(1), key.gadget(2), key.label());
            transitions.push(Transition {
                src: t.src.clone(),
                input: None,
                pred: t.pred.clone(),
                instr: t.instr.clone(),
                dst: g1.clone(),
            });
            transitions.push(Transition {
                src: g1.clone(),
                input: None,
                pred: Predicate::Eq(c.clone()),
                instr: Instruction::Push(d + i, special.clone()),
                dst: g2.clone(),
            });
            transitions.push(Transition {
                src: g2.clone(),
                input: t.input.clone(),
                pred: Predicate::Eq(special.clone()),
                instr: Instruction::Down,
                dst: t.dst.clone(),
            });
            states.extend([g1, g2]);
            labels.insert(special);
        }
    }
    let mut out = aut.with_transitions(transitions);
    out.states = states;
    out.labels = labels;
    out.meta.declared_degree = Some(degree(&out));
    Ok(out)
}

/// The intermediate automata of the hash pipeline.
#[derive(Clone, Debug)]
pub struct HashPipeline {
    pub alphabet: HashAlphabet,
    /// The framed automaton, before specialization.
    pub framed: Automaton,
    /// The hash automaton.
    pub hashed: Automaton,
    /// Degree of the degree-normalized base.
    pub degree: u32,
}

/// Normalize, allow inner hashes anywhere, force their order, frame, and
/// specialize.
pub fn hash_pipeline(base: &Automaton, n: u32) -> Result<HashPipeline, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InconsistentMeta("N must be positive".into()));
    }
    if let Some(x) = base.terminals.iter().find(|x| hash_index(x).is_some()) {
        return Err(ConstructionError::LetterCollision(x.to_string()));
    }
    let alphabet = HashAlphabet::new(base.terminals.clone(), n);
    let sharp = normalize_degree(base)?;
    let d = degree(&sharp);
    let inner: Vec<Sym> = (2..=n).map(hash_letter).collect();
    let lifted = lift_inverse_erasing(&sharp, &inner)?;
    let ordered = product_with_dfa(&lifted, &hash_order_dfa(n, &base.terminals))?;
    let mut framed = wrap_endmarkers(&ordered, n)?;
    framed.meta.declared_degree = Some(d);
    let hashed = specialize_hashes(&framed, n)?;
    Ok(HashPipeline { alphabet, framed, hashed, degree: d })
}
