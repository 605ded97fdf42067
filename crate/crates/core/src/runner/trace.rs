use std::collections::{BTreeMap, BTreeSet};

use crate::address::Address;
use crate::automaton::{step, Automaton, Transition};
use crate::error::TraceError;
use crate::tree::LabeledTree;

use super::{Configuration, RunTrace};

/// Replays `transitions` from the initial configuration.
///
/// # Panics
///
/// Panics if some transition is not applicable.
pub fn replay(aut: &Automaton, transitions: &[Transition]) -> RunTrace {
    try_replay(aut, transitions).expect("every transition of the run applies")
}

/// Replays `transitions`, or `None` if some step is undefined.
pub fn try_replay(aut: &Automaton, transitions: &[Transition]) -> Option<RunTrace> {
    let mut configurations = vec![Configuration::initial(aut)];
    for t in transitions {
        let cur = configurations.last().unwrap();
        let (state, ts) = step(aut, &cur.state, &cur.ts, t, t.input.as_ref())?;
        let mut visits = cur.visits.clone();
        if let Some(n) = t.instr.index() {
            *visits.entry(cur.ts.cursor.child(n)).or_insert(0) += 1;
        }
        let mut consumed = cur.consumed.clone();
        consumed.extend(t.input.clone());
        configurations.push(Configuration { state, ts, visits, consumed });
    }
    Some(RunTrace { transitions: transitions.to_vec(), configurations })
}

/// How often each vertex is visited from below along the run.
pub fn visit_counts(trace: &RunTrace) -> BTreeMap<Address, u32> {
    let mut out = BTreeMap::new();
    for (t, c) in trace.transitions.iter().zip(&trace.configurations) {
        if let Some(n) = t.instr.index() {
            *out.entry(c.ts.cursor.child(n)).or_insert(0) += 1;
        }
    }
    out
}

/// The largest visit count, 0 for a run without push or up.
pub fn restriction_degree(trace: &RunTrace) -> u32 {
    visit_counts(trace).into_values().max().unwrap_or(0)
}

/// The tree of the last configuration; the cursor must be at the root.
pub fn final_tree(trace: &RunTrace) -> Result<LabeledTree, TraceError> {
    let last = trace.last();
    if !last.ts.cursor.is_root() {
        return Err(TraceError::NotAtRoot(last.ts.cursor.to_string()));
    }
    Ok(last.ts.tree.clone())
}

/// Whether `t1` is `t0` with a fresh root grafted below the old one,
/// comparing domains only.
pub fn check_add_root(t0: &LabeledTree, t1: &LabeledTree) -> bool {
    let d0: BTreeSet<Address> = t0.domain().cloned().collect();
    let d1: BTreeSet<Address> = t1.domain().cloned().collect();
    check_add_root_domains(&d0, &d1)
}

/// [`check_add_root`] on bare domains.
pub fn check_add_root_domains(d0: &BTreeSet<Address>, d1: &BTreeSet<Address>) -> bool {
    let mut expected: BTreeSet<Address> = d0.iter().map(|a| a.prepend(1)).collect();
    expected.insert(Address::root());
    d0.contains(&Address::root()) && *d1 == expected
}
