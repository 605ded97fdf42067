//! Structural normalizations: sharp degree and root-return acceptance.

use crate::automaton::{degree, Automaton, Transition};
use crate::error::ConstructionError;
use crate::label::Label;
use crate::tree::{Instruction, Predicate};

/// Compacts push indices to `1..=degree(aut)`.
///
/// Each step moves the smallest pushed index `j` whose predecessor is
/// unused down to `j - 1` by swapping the two indices everywhere, so a dead
/// `up (j-1)` stays dead.
pub fn normalize_degree(aut: &Automaton) -> Result<Automaton, ConstructionError> {
    let Some(list) = aut.transitions() else {
        return Err(ConstructionError::NotExplicit("normalize_degree"));
    };
    let mut list = list.to_vec();
    loop {
        let pushed = Automaton::explicit([], [], [], aut.initial.clone(), [], list.clone()).push_indices();
        let Some(&j) = pushed.iter().find(|&&j| j >= 2 && !pushed.contains(&(j - 1))) else {
            break;
        };
        let swap = |n: u32| match n {
            n if n == j => j - 1,
            n if n == j - 1 => j,
            n => n,
        };
        for t in &mut list {
            t.instr = match &t.instr {
                Instruction::Push(n, c) => Instruction::Push(swap(*n), c.clone()),
                Instruction::Up(n) => Instruction::Up(swap(*n)),
                other => other.clone(),
            };
        }
    }
    let mut out = aut.with_transitions(list);
    out.meta.declared_degree = Some(degree(&out));
    Ok(out)
}

/// Makes every accepting run end at the root in one fresh final state.
pub fn normalize_root_accept(aut: &Automaton) -> Automaton {
    let r = aut.fresh_name("ret");
    let acc = aut.fresh_name("acc");
    let down = |q| Transition { src: q, input: None, pred: Predicate::True, instr: Instruction::Down, dst: r.clone() };
    let done = |q| Transition {
        src: q,
        input: None,
        pred: Predicate::Eq(Label::Root),
        instr: Instruction::Id,
        dst: acc.clone(),
    };
    let mut extra = Vec::new();
    for f in &aut.finals {
        extra.push(down(f.clone()));
        extra.push(done(f.clone()));
    }
    extra.push(down(r.clone()));
    extra.push(done(r.clone()));
    let mut out = aut.with_extra(extra);
    out.states.insert(r.clone());
    out.states.insert(acc.clone());
    out.finals = [acc].into();
    out
}
