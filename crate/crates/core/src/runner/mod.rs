//! Budgeted nondeterministic execution.
//!
//! Searches are breadth-first by step count, prune branches in which some
//! vertex is visited from below more than `k` times, and deduplicate
//! identical configurations. Witness runs are therefore shortest.
//!
//! ```
//! use treestack::{fixtures, runner::{accepts, Budget, Verdict}, word};
//!
//! let aut = fixtures::example();
//! match accepts(&aut, &word("a a b c c d"), 2, Budget::default()).unwrap() {
//!     Verdict::Accepted(trace) => assert_eq!(trace.transitions.len(), 21),
//!     other => panic!("{other:?}"),
//! }
//! ```

mod engine;
mod trace;

use std::collections::{BTreeMap, BTreeSet};

use crate::address::Address;
use crate::automaton::{Automaton, Transition};
use crate::error::RunError;
use crate::label::Sym;
use crate::state::State;
use crate::tree::TreeStack;

pub use trace::{check_add_root, check_add_root_domains, final_tree, replay, restriction_degree, try_replay, visit_counts};

use engine::{Engine, Mode};

/// A word: a sequence of terminal letters.
pub type Word = Vec<Sym>;

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Longest run explored.
    pub max_steps: usize,
    /// Largest tree built.
    pub max_nodes: usize,
    /// Size of the deduplication table.
    pub max_configs: usize,
    /// `max_nodes` is a proven bound on accepting runs: larger trees are
    /// pruned without marking the search incomplete.
    pub node_bound: bool,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_steps: 10_000, max_nodes: 200, max_configs: 1_000_000, node_bound: false }
    }
}

impl Budget {
    pub fn with_max_nodes(self, max_nodes: usize) -> Budget {
        Budget { max_nodes, node_bound: false, ..self }
    }

    /// Like [`Budget::with_max_nodes`] for a bound known to hold on every
    /// accepting run, such as [`derived_node_cap`](crate::constructions::derived_node_cap).
    pub fn with_node_bound(self, max_nodes: usize) -> Budget {
        Budget { max_nodes, node_bound: true, ..self }
    }

    pub fn with_max_configs(self, max_configs: usize) -> Budget {
        Budget { max_configs, ..self }
    }
}

/// A machine snapshot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub state: State,
    pub ts: TreeStack,
    /// Visits from below per non-root address.
    pub visits: BTreeMap<Address, u32>,
    pub consumed: Word,
}

impl Configuration {
    pub fn initial(aut: &Automaton) -> Configuration {
        Configuration { state: aut.initial.clone(), ts: TreeStack::fresh(), visits: BTreeMap::new(), consumed: Vec::new() }
    }
}

/// A run and the configurations it passes through, starting with the
/// initial one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub transitions: Vec<Transition>,
    pub configurations: Vec<Configuration>,
}

impl RunTrace {
    pub fn last(&self) -> &Configuration {
        self.configurations.last().expect("a trace has an initial configuration")
    }

    /// The letters read, in order.
    pub fn word(&self) -> Word {
        self.transitions.iter().filter_map(|t| t.input.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted(RunTrace),
    Rejected,
    BudgetExhausted,
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }
}

fn check_word(aut: &Automaton, word: &[Sym]) -> Result<(), RunError> {
    match word.iter().find(|x| !aut.terminals.contains(*x)) {
        Some(x) => Err(RunError::UnknownLetter(x.to_string())),
        None => Ok(()),
    }
}

/// Searches for a `k`-restricted accepting run on `word`.
pub fn accepts(aut: &Automaton, word: &[Sym], k: u32, budget: Budget) -> Result<Verdict, RunError> {
    check_word(aut, word)?;
    let mut engine = Engine::new(aut, k, budget);
    let out = engine.search(&Mode::Word(word), true);
    Ok(match out.accepting.first() {
        Some(&ci) => Verdict::Accepted(replay(aut, &engine.witness(ci))),
        None if out.capped => Verdict::BudgetExhausted,
        None => Verdict::Rejected,
    })
}

/// One shortest witness per distinct accepting configuration on `word`,
/// and whether the search was exhaustive.
pub fn accepting_runs(
    aut: &Automaton,
    word: &[Sym],
    k: u32,
    budget: Budget,
) -> Result<(Vec<RunTrace>, bool), RunError> {
    check_word(aut, word)?;
    let mut engine = Engine::new(aut, k, budget);
    let out = engine.search(&Mode::Word(word), false);
    let runs = out.accepting.iter().map(|&ci| replay(aut, &engine.witness(ci))).collect();
    Ok((runs, !out.capped))
}

/// Everything [`enumerate_witnesses`] finds.
#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Each accepted word with a shortest witness.
    pub witnesses: BTreeMap<Word, RunTrace>,
    pub complete: bool,
    /// Largest tree over all accepting configurations found.
    pub max_final_tree: usize,
    /// Configurations explored.
    pub explored: usize,
}

impl Enumeration {
    pub fn words(&self) -> BTreeSet<Word> {
        self.witnesses.keys().cloned().collect()
    }
}

/// Every word of length at most `max_len` with a `k`-restricted accepting
/// run, plus the completeness flag.
pub fn enumerate_slice(aut: &Automaton, max_len: usize, k: u32, budget: Budget) -> (BTreeSet<Word>, bool) {
    let e = enumerate_witnesses(aut, max_len, k, budget);
    (e.words(), e.complete)
}

/// Like [`enumerate_slice`], also returning witnesses and statistics.
pub fn enumerate_witnesses(aut: &Automaton, max_len: usize, k: u32, budget: Budget) -> Enumeration {
    let mut engine = Engine::new(aut, k, budget);
    let out = engine.search(&Mode::Enumerate(max_len), false);
    let mut found: BTreeMap<Word, u32> = BTreeMap::new();
    let mut max_final_tree = 0;
    for &ci in &out.accepting {
        max_final_tree = max_final_tree.max(engine.tree_size(ci));
        found.entry(engine.word_of(ci)).or_insert(ci);
    }
    let witnesses = found
        .into_iter()
        .map(|(w, ci)| (w, replay(aut, &engine.witness(ci))))
        .collect();
    Enumeration { witnesses, complete: !out.capped, max_final_tree, explored: engine.explored() }
}
