//! Fixture automata shipped with the crate.

use crate::automaton::{Automaton, Transition};
use crate::format::parse_automaton;
use crate::label::Sym;
use crate::state::State;
use crate::tree::{Instruction, Predicate};

pub const EXAMPLE: &str = include_str!("../fixtures/example.tsa");
pub const ANBN: &str = include_str!("../fixtures/anbn.tsa");
pub const ABC_STAR: &str = include_str!("../fixtures/abc-star.tsa");

fn load(text: &str) -> Automaton {
    parse_automaton(text).expect("fixture parses")
}

/// The 17-transition automaton for `a^n b^m c^n d^m` (2-restricted).
pub fn example() -> Automaton {
    load(EXAMPLE)
}

/// `a^n b^n`, `n >= 1` (1-restricted).
pub fn anbn() -> Automaton {
    load(ANBN)
}

/// `(abc)*` (1-restricted, no tree operations).
pub fn abc_star() -> Automaton {
    load(ABC_STAR)
}

/// A chain automaton accepting exactly `word`.
pub fn singleton(word: &[Sym]) -> Automaton {
    let states: Vec<State> = (0..=word.len()).map(|i| State::name(&format!("s{i}"))).collect();
    let transitions = word
        .iter()
        .enumerate()
        .map(|(i, x)| Transition {
            src: states[i].clone(),
            input: Some(x.clone()),
            pred: Predicate::True,
            instr: Instruction::Id,
            dst: states[i + 1].clone(),
        })
        .collect();
    let last = states[word.len()].clone();
    let mut aut =
        Automaton::explicit(states.clone(), [], word.iter().cloned(), states[0].clone(), [last], transitions);
    aut.meta.claimed_k = Some(1);
    aut
}

/// Fixture automata paired with their oracle names and restriction.
pub fn all() -> Vec<(&'static str, Automaton, u32)> {
    let abc: Vec<Sym> = ["a", "b", "c"].into_iter().map(Sym::from).collect();
    vec![
        ("anbmcndm", example(), 2),
        ("anbn", anbn(), 1),
        ("abc-star", abc_star(), 1),
        ("singleton(abc)", singleton(&abc), 1),
    ]
}
