//! Tree-stack automata: a runner with `k`-restriction, and the constructions
//! that take a `k`-restricted automaton for `L` to automata for the
//! permutation closure `C^N(L)`.
//!
//! ```
//! use treestack::{fixtures, runner::{enumerate_slice, Budget}, word};
//!
//! let (words, complete) = enumerate_slice(&fixtures::anbn(), 5, 1, Budget::default());
//! assert!(complete);
//! assert_eq!(words, [word("a b"), word("a a b b")].into());
//! ```

pub mod address;
pub mod automaton;
pub mod constructions;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod label;
pub mod normalize;
pub mod oracle;
pub mod runner;
pub mod sexpr;
pub mod state;
pub mod tree;

pub use address::Address;
pub use automaton::{degree, enabled_transitions, step, validate, Automaton, Rule, RuleInstr, Schema, Transition, TransitionSource};
pub use label::{Label, Sym};
pub use normalize::{normalize_degree, normalize_root_accept};
pub use state::State;
pub use tree::{apply_instruction, predicate_holds, Instruction, LabeledTree, Predicate, TreeStack};
pub use runner::{accepting_runs, accepts, enumerate_slice, enumerate_witnesses, Budget, RunTrace, Verdict, Word};

/// Parses a word of whitespace-separated letters; `-` is ε.
pub fn word(s: &str) -> runner::Word {
    format::parse_word(s)
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tree-stacks.md")]
    mod tree_stacks {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/running.md")]
    mod running {}
    #[doc = include_str!("../../../book/src/hashes.md")]
    mod hashes {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
}
