mod support;

use std::collections::BTreeMap;

use support::*;
use treestack::error::RunError;
use treestack::runner::{check_add_root, final_tree, replay, restriction_degree, visit_counts};
use treestack::tree::LabeledTree;
use treestack::{accepts, enumerate_slice, enumerate_witnesses, fixtures, Address, Budget, Label, Verdict};

fn addr(digits: &[u32]) -> Address {
    Address::new(digits.to_vec())
}

fn run(word: &str) -> treestack::RunTrace {
    match accepts(&fixtures::example(), &w(word), 2, Budget::default()).unwrap() {
        Verdict::Accepted(t) => t,
        other => panic!("{word}: {other:?}"),
    }
}

#[test]
fn membership_examples() {
    let ex = fixtures::example();
    assert!(accepts(&ex, &w("a a b c c d"), 2, Budget::default()).unwrap().is_accepted());
    assert_eq!(accepts(&ex, &w("-"), 2, Budget::default()).unwrap(), Verdict::Rejected);
    assert_eq!(accepts(&ex, &w("a b d c"), 2, Budget::default()).unwrap(), Verdict::Rejected);
    assert_eq!(accepts(&ex, &w("a x"), 2, Budget::default()).unwrap_err(), RunError::UnknownLetter("x".into()));
    let tiny = Budget { max_steps: 3, ..Budget::default() };
    assert_eq!(accepts(&ex, &w("a a b c c d"), 2, tiny).unwrap(), Verdict::BudgetExhausted);
}

#[test]
fn enumeration_examples() {
    let ex = fixtures::example();
    assert_eq!(enumerate_slice(&ex, 4, 2, Budget::default()), (words(&["a b c d"]), true));
    assert_eq!(enumerate_slice(&ex, 0, 2, Budget::default()), (words(&[]), true));
    assert_eq!(enumerate_slice(&fixtures::abc_star(), 0, 1, Budget::default()), (words(&["-"]), true));
    let (_, complete) = enumerate_slice(&ex, 12, 2, Budget::default().with_max_configs(10));
    assert!(!complete);
}

#[test]
fn example_agrees_with_its_formula() {
    let ex = fixtures::example();
    for len in 0..=12 {
        assert_eq!(enumerate_slice(&ex, len, 2, Budget::default()), (formula("anbmcndm", len), true), "{len}");
    }
}

#[test]
fn fixtures_agree_with_their_formulas() {
    for (name, aut, k) in fixtures::all() {
        for len in 0..=10 {
            let (slice, complete) = enumerate_slice(&aut, len, k, Budget::default());
            assert!(complete, "{name} {len}");
            assert_eq!(slice, formula(name, len), "{name} {len}");
            assert_eq!(slice, treestack::oracle::fixture(name, len).unwrap().words, "{name} {len}");
        }
    }
}

#[test]
fn visit_count_examples() {
    let r = run("a a b c c d");
    let counts = visit_counts(&r);
    assert!(counts.values().all(|&c| c <= 2));
    assert_eq!(counts[&addr(&[1])], 2);
    assert_eq!(restriction_degree(&r), 2);
    assert!(visit_counts(&replay(&fixtures::example(), &[])).is_empty());
    assert_eq!(restriction_degree(&replay(&fixtures::example(), &[])), 0);
    let list = fixtures::example().transitions().unwrap().to_vec();
    let first = replay(&fixtures::example(), &list[..1]);
    assert_eq!(visit_counts(&first), BTreeMap::from([(addr(&[1]), 1)]));
    let two = replay(&fixtures::example(), &list[..2]);
    assert_eq!(restriction_degree(&two), 1);
    assert!(final_tree(&first).is_err());
}

#[test]
fn final_tree_of_the_printed_run() {
    let t = final_tree(&run("a a b c c d")).unwrap();
    let expected = LabeledTree::from_assignment(
        [
            (Address::root(), "@"),
            (addr(&[1]), "*"),
            (addr(&[1, 1]), "*"),
            (addr(&[1, 1, 1]), "#"),
            (addr(&[2]), "*"),
            (addr(&[2, 1]), "#"),
        ]
        .map(|(a, l)| (a, l.parse::<Label>().unwrap())),
    )
    .unwrap();
    assert_eq!(t, expected);
    let eps = fixtures::abc_star();
    let e = enumerate_witnesses(&eps, 0, 1, Budget::default());
    assert_eq!(final_tree(&e.witnesses[&w("-")]).unwrap(), LabeledTree::fresh());
}

fn domain(addrs: &[&[u32]]) -> LabeledTree {
    LabeledTree::from_assignment(
        addrs.iter().map(|a| (addr(a), if a.is_empty() { Label::Root } else { Label::plain("x") })),
    )
    .unwrap()
}

#[test]
fn add_root_examples() {
    assert!(check_add_root(&domain(&[&[]]), &domain(&[&[], &[1]])));
    let t0 = domain(&[&[], &[1], &[2], &[3], &[4], &[2, 1]]);
    let t1 = domain(&[&[], &[1], &[1, 1], &[1, 2], &[1, 3], &[1, 4], &[1, 2, 1]]);
    assert!(check_add_root(&t0, &t1));
    assert!(!check_add_root(&domain(&[&[]]), &domain(&[&[], &[1], &[2]])));
    assert!(!check_add_root(&t0, &domain(&[&[], &[1], &[1, 1]])));
}

#[test]
fn budgets_only_grow_answers() {
    let ex = fixtures::example();
    let word = w("a a b b c c d d");
    let mut seen_accept = false;
    for steps in [5, 10, 20, 40, 80, 10_000] {
        let v = accepts(&ex, &word, 2, Budget { max_steps: steps, ..Budget::default() }).unwrap();
        if seen_accept {
            assert!(v.is_accepted(), "{steps}");
        }
        seen_accept |= v.is_accepted();
    }
    assert!(seen_accept);
    for configs in [1_000, 100_000, 1_000_000] {
        let v = accepts(&ex, &w("a b d c"), 2, Budget::default().with_max_configs(configs)).unwrap();
        assert_eq!(v, Verdict::Rejected);
    }
}

#[test]
fn tighter_restriction_rejects() {
    let ex = fixtures::example();
    assert_eq!(accepts(&ex, &w("a b c d"), 1, Budget::default()).unwrap(), Verdict::Rejected);
    let e = enumerate_witnesses(&ex, 8, 2, Budget::default());
    for (word, trace) in &e.witnesses {
        trace_laws(&ex, trace, word, 2).unwrap();
    }
}
