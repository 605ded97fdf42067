//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line and then
//! asserts the same condition. Run with `--nocapture` to see the lines.

mod support;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use support::*;
use treestack::constructions::{erase_hashes, permutation_closure, DEFAULT_PERMUTATION_CAP};
use treestack::label::{Column, Status};
use treestack::runner::{restriction_degree, visit_counts};
use treestack::state::{CheckState, SigmaState};
use treestack::tree::{Instruction, LabeledTree, TreeStack};
use treestack::{
    accepting_runs, accepts, degree, enabled_transitions, enumerate_slice, enumerate_witnesses, fixtures, Address,
    Budget, Label, State, Verdict,
};

/// Laptop runtime limit for the example enumeration.
const EXAMPLE_TIME: Duration = Duration::from_secs(60);
/// Runtime limit for the permutation and closure runs.
const PIPELINE_TIME: Duration = Duration::from_secs(600);
/// Length of the printed example run.
const PRINTED_RUN_LEN: usize = 19;
/// Cases per property in criterion 7.
const PROPERTY_CASES: u32 = 64;

fn report(n: u32, name: &str, ok: bool, detail: impl std::fmt::Display) -> bool {
    println!("criterion {n} {name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    ok
}

/// Transition numbers (1-based) of a run of the example automaton.
fn numbers(run: &[treestack::Transition]) -> Vec<usize> {
    let list = fixtures::example();
    let list = list.transitions().unwrap().to_vec();
    run.iter().map(|t| list.iter().position(|u| u == t).unwrap() + 1).collect()
}

/// The printed run `s1 s2^(p-1) s3 s4^(p+1) s5 s6^(q-1) s7 s8^(q+1) s9
/// s10^p s11 s12^p s13 s14^q s15 s16^q s17`.
fn printed_run(p: usize, q: usize) -> Vec<usize> {
    let mut out = vec![1];
    out.extend([2].repeat(p - 1));
    out.push(3);
    out.extend([4].repeat(p + 1));
    out.push(5);
    out.extend([6].repeat(q - 1));
    out.push(7);
    out.extend([8].repeat(q + 1));
    out.push(9);
    out.extend([10].repeat(p));
    out.push(11);
    out.extend([12].repeat(p));
    out.push(13);
    out.extend([14].repeat(q));
    out.push(15);
    out.extend([16].repeat(q));
    out.push(17);
    out
}

#[test]
fn criterion_1_example_fidelity() {
    let aut = fixtures::example();
    let t = Instant::now();
    let verdict = accepts(&aut, &w("a a b c c d"), 2, Budget::default()).unwrap();
    let Verdict::Accepted(trace) = verdict else { panic!("a a b c c d rejected: {verdict:?}") };
    let run = numbers(&trace.transitions);
    let shape = run == printed_run(2, 1);
    let (slice, complete) = enumerate_slice(&aut, 12, 2, Budget::default());
    let expected = formula("anbmcndm", 12);
    let elapsed = t.elapsed();
    let ok = shape
        && trace.transitions.len() == PRINTED_RUN_LEN
        && complete
        && expected.len() == 15
        && slice == expected
        && elapsed < EXAMPLE_TIME;
    report(
        1,
        "example fidelity",
        ok,
        format!(
            "witness {} transitions, printed shape {shape}, expected {PRINTED_RUN_LEN}; slice {} words, complete {complete}, equal {}; {elapsed:.2?}",
            trace.transitions.len(),
            slice.len(),
            slice == expected
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_2_example_restriction() {
    let aut = fixtures::example();
    let mut worst = 0;
    let mut itemized = 0;
    let mut total = 0;
    for p in 1..=3 {
        for q in 1..=3 {
            total += 1;
            let word = w(&format!("{}{}{}{}", "a ".repeat(p), "b ".repeat(q), "c ".repeat(p), "d ".repeat(q)));
            let (runs, complete) = accepting_runs(&aut, &word, 2, Budget::default()).unwrap();
            assert!(complete && !runs.is_empty(), "p {p} q {q}");
            worst = runs.iter().map(restriction_degree).max().unwrap().max(worst);
            let found = runs.iter().any(|r| {
                let mut expected = BTreeMap::new();
                for i in 1..=p + 1 {
                    expected.insert(Address::new(vec![1; i]), 2);
                }
                for j in 0..=q {
                    let mut d = vec![2];
                    d.extend(vec![1; j]);
                    expected.insert(Address::new(d), 2);
                }
                // one visit by a push and one by an up per vertex
                let mut kinds: BTreeMap<Address, (u32, u32)> = BTreeMap::new();
                for (t, c) in r.transitions.iter().zip(&r.configurations) {
                    let slot = match &t.instr {
                        Instruction::Push(n, _) => (c.ts.cursor.child(*n), true),
                        Instruction::Up(n) => (c.ts.cursor.child(*n), false),
                        _ => continue,
                    };
                    let e = kinds.entry(slot.0).or_default();
                    if slot.1 {
                        e.0 += 1
                    } else {
                        e.1 += 1
                    }
                }
                visit_counts(r) == expected && kinds.values().all(|&k| k == (1, 1))
            });
            itemized += usize::from(found);
        }
    }
    let ok = worst <= 2 && itemized == total;
    report(2, "2-restriction of the example", ok, format!("max restriction {worst}, itemized witnesses {itemized}/{total}"));
    assert!(ok);
}

#[test]
fn criterion_3_hash_automaton() {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["anbn", "anbmcndm"] {
        let (aut, k) = base(name);
        for n in 1..=2u32 {
            let run = SigmaRun::new(&aut, k, n, &(1..=n).collect::<Vec<_>>());
            let a_n = &run.pipe.hashed;
            let lang = formula(name, 8);
            let expected: std::collections::BTreeSet<_> = lang
                .iter()
                .flat_map(|word| factorizations(word, n as usize))
                .map(|parts| hashed_word(&parts))
                .collect();
            let e = enumerate_witnesses(a_n, 8 + n as usize + 1, k, Budget::default());
            let equal = e.complete && e.words() == expected;
            let deg = degree(a_n) == degree(&aut) + n + 1;
            let mut law = true;
            for word in &expected {
                let (runs, complete) = accepting_runs(a_n, word, k, Budget::default()).unwrap();
                law &= complete && !runs.is_empty();
                law &= runs.iter().all(|r| special_vertex_law(r, n, run.pipe.degree).is_ok());
            }
            ok &= equal && deg && law;
            lines.push(format!("{name} N={n}: {} words equal {equal}, degree {deg}, specials {law}", expected.len()));
        }
    }
    report(3, "hash automaton", ok, lines.join("; "));
    assert!(ok);
}

fn anbn_sigma_runs() -> Vec<(Vec<u32>, SigmaRun, treestack::runner::Enumeration, Duration)> {
    let (aut, k) = base("anbn");
    [vec![1, 2], vec![2, 1]]
        .into_iter()
        .map(|images| {
            let run = SigmaRun::new(&aut, k, 2, &images);
            let t = Instant::now();
            let e = enumerate_witnesses(&run.erased(), 6, run.k, run.budget(&aut, 6));
            (images, run, e, t.elapsed())
        })
        .collect()
}

#[test]
fn criterion_4_permutation_automaton() {
    let lang = formula("anbn", 6);
    let frozen = words(&[
        "a b", "b a", "a a b b", "a b b a", "b b a a", "b a a b", "a a a b b b", "a a b b b a", "a b b b a a",
        "b b b a a a", "b b a a a b", "b a a a b b",
    ]);
    let mut ok = true;
    let mut lines = Vec::new();
    let mut union = std::collections::BTreeSet::new();
    for (images, run, e, elapsed) in anbn_sigma_runs() {
        let expected = reorder(&lang, 2, &images);
        let equal = e.complete && e.words() == expected;
        ok &= equal && elapsed < PIPELINE_TIME && run.k == 6;
        union.extend(e.words());
        lines.push(format!("sigma {images:?}: {} words equal {equal}, {elapsed:.2?}", e.witnesses.len()));
    }
    ok &= union == frozen;
    report(4, "permutation automaton", ok, format!("{}; union is the 12-word set {}", lines.join("; "), union == frozen));
    assert!(ok);
}

#[test]
fn criterion_5_restriction_bound() {
    let (aut, _) = base("anbn");
    let mut worst = 0;
    let mut runs = 0;
    let mut deg_ok = true;
    for (_, run, e, _) in anbn_sigma_runs() {
        let d = degree(&aut) + 2 + 1;
        deg_ok &= run.a_sigma.meta.declared_degree == Some(d) && degree(&run.a_sigma) == d;
        for word in e.words() {
            let (all, complete) = accepting_runs(&run.erased(), &word, run.k, run.budget(&aut, 6)).unwrap();
            assert!(complete);
            runs += all.len();
            worst = all.iter().map(restriction_degree).max().unwrap_or(0).max(worst);
        }
    }
    let ok = worst <= 6 && runs > 0 && deg_ok;
    report(5, "restriction bound", ok, format!("max restriction {worst} over {runs} runs, bound 6; degree {deg_ok}"));
    assert!(ok);
}

#[test]
fn criterion_6_closure_of_singleton() {
    let (aut, k) = base("singleton(abc)");
    let t = Instant::now();
    let closure = permutation_closure(&aut, 3, DEFAULT_PERMUTATION_CAP).unwrap();
    let claimed = closure.meta.claimed_k.unwrap();
    let cap = treestack::constructions::derived_node_cap(&aut, 3, 3, claimed, Budget::default()).unwrap();
    let (slice, complete) = enumerate_slice(&closure, 3, claimed, Budget::default().with_node_bound(cap));
    let elapsed = t.elapsed();
    let mut expected = std::collections::BTreeSet::new();
    for p in permutations(3) {
        expected.extend(reorder(&formula("singleton(abc)", 3), 3, &p));
    }
    let frozen = words(&["a b c", "a c b", "b a c", "b c a", "c a b", "c b a"]);
    let ok = complete && slice == expected && expected == frozen && claimed == k + 6 && elapsed < PIPELINE_TIME;
    report(6, "closure of {abc}", ok, format!("{} words, complete {complete}, {elapsed:.2?}", slice.len()));
    assert!(ok);
}

fn run_property<S: proptest::strategy::Strategy>(
    name: &str,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), String>,
) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&strategy, |v| check(v).map_err(proptest::test_runner::TestCaseError::fail))
        .map_err(|e| format!("{name}: {e}"))
}

#[test]
fn criterion_7_property_suites() {
    use proptest::prelude::*;
    let instr = (0u8..5, 1u32..4, 0u8..2).prop_map(|(kind, n, l)| {
        let label = Label::plain(if l == 0 { "x" } else { "y" });
        match kind {
            0 => Instruction::Id,
            1 => Instruction::Push(n, label),
            2 => Instruction::Up(n),
            3 => Instruction::Down,
            _ => Instruction::Set(label),
        }
    });
    let automaton = (proptest::collection::vec(any::<(u8, u8, u8, u8, u8)>(), 1..8), proptest::collection::vec(0u8..4, 0..3));
    let (anbn, _) = base("anbn");
    let sigma = [SigmaRun::new(&anbn, 1, 2, &[1, 2]), SigmaRun::new(&anbn, 1, 2, &[2, 1])];
    let results = [
        run_property("instruction algebra", (proptest::collection::vec(instr.clone(), 0..12), instr), |(ops, op)| {
            instruction_laws(&grow(&ops), &op)
        }),
        run_property("normalization invariance", automaton.clone(), |(trans, finals)| {
            let aut = small_automaton(&trans, &finals);
            let budget = Budget::default().with_node_bound(5);
            let (s, c) = enumerate_slice(&aut, 3, 2, budget);
            let (s1, c1) = enumerate_slice(&treestack::normalize_degree(&aut).unwrap(), 3, 2, budget);
            let (s2, c2) = enumerate_slice(&treestack::normalize_root_accept(&aut), 3, 2, budget);
            if c && c1 && c2 && s == s1 && s == s2 {
                Ok(())
            } else {
                Err(format!("{s:?} / {s1:?} / {s2:?}"))
            }
        }),
        run_property("trace replay", automaton, |(trans, finals)| {
            let aut = small_automaton(&trans, &finals);
            let e = enumerate_witnesses(&aut, 3, 2, Budget::default().with_node_bound(5));
            e.witnesses.iter().try_for_each(|(word, trace)| trace_laws(&aut, trace, word, 2))
        }),
        run_property("property P", (1usize..=3, 0usize..=6, 0usize..2), |(m, cut, s)| {
            let word = [vec![treestack::label::Sym::from("a"); m], vec![treestack::label::Sym::from("b"); m]].concat();
            let cut = cut.min(word.len());
            let parts = vec![word[..cut].to_vec(), word[cut..].to_vec()];
            matched_runs(&sigma[s], &anbn, &parts)
        }),
    ];
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let ok = failures.is_empty();
    report(7, "property suites", ok, if ok { format!("4 suites x {PROPERTY_CASES} cases") } else { format!("{failures:?}") });
    assert!(ok);
}

#[test]
fn criterion_8_negative_control() {
    let (aut, k) = base("anbn");
    let run = SigmaRun::new(&aut, k, 2, &[2, 1]);
    let (_, _, e, _) = anbn_sigma_runs().into_iter().find(|r| r.0 == [2, 1]).unwrap();
    let trace = &e.witnesses[&w("b a")];
    // the configuration entering the final check
    let at = trace.configurations.iter().position(|c| c.state == State::sigma(SigmaState::Check(CheckState::Enter))).unwrap();
    let cfg = &trace.configurations[at];
    let erased = erase_hashes(&run.a_sigma);
    let clean = check_from(&erased, cfg.ts.clone());
    let mut injected = 0;
    let mut rejected = 0;
    for (addr, label) in cfg.ts.tree.iter() {
        let Some(c) = label.as_composite() else { continue };
        for (j, col) in c.history.0.iter().enumerate() {
            let Column::Entry { exit, .. } = col else { continue };
            let history = c.history.with(j as u32 + 1, Column::entry(Status::Open, exit.clone()));
            let bad = c.with_history(history).into_label();
            let tree = LabeledTree::from_assignment(
                cfg.ts.tree.iter().map(|(a, l)| (a.clone(), if a == addr { bad.clone() } else { l.clone() })),
            )
            .unwrap();
            let reaches = check_from(&erased, TreeStack::new(tree, cfg.ts.cursor.clone()));
            injected += 1;
            rejected += usize::from(!reaches);
        }
    }
    let ok = clean && injected > 0 && rejected == injected;
    report(8, "negative control", ok, format!("unaltered tree accepted {clean}; {rejected}/{injected} injected open columns rejected"));
    assert!(ok);
}

/// Runs the deterministic final check to the end; true if it accepts.
fn check_from(aut: &treestack::Automaton, ts: TreeStack) -> bool {
    let mut state = State::sigma(SigmaState::Check(CheckState::Enter));
    let mut ts = ts;
    for _ in 0..10_000 {
        if aut.finals.contains(&state) {
            return final_tree_ok(&ts);
        }
        let next = enabled_transitions(aut, &state, &ts, None);
        let [t] = next.as_slice() else { return false };
        let (s, n) = treestack::step(aut, &state, &ts, t, None).unwrap();
        state = s;
        ts = n;
    }
    false
}

/// Cursor at the root and every composite label replaced by the box.
fn final_tree_ok(ts: &TreeStack) -> bool {
    ts.cursor.is_root() && ts.tree.iter().all(|(_, l)| l.as_composite().is_none())
}
