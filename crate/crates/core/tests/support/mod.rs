//! Shared helpers for integration tests: an independent brute-force
//! oracle, word builders for the hash and permutation automata, and the
//! property checks run both by the proptest suite and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use treestack::constructions::{
    build_a_sigma, derived_node_cap, erase_hashes, hash_letter, hash_pipeline, HashPipeline, PipelineMeta,
};
use treestack::label::Sym;
use treestack::oracle::Permutation;
use treestack::runner::{final_tree, replay, restriction_degree, visit_counts, RunTrace};
use treestack::state::SigmaState;
use treestack::tree::{apply_instruction, Instruction, LabeledTree, Predicate, TreeStack};
use treestack::{accepting_runs, accepts, Address, Automaton, Budget, Label, State, Transition, Verdict, Word};

pub fn w(s: &str) -> Word {
    treestack::word(s)
}

pub fn words(list: &[&str]) -> BTreeSet<Word> {
    list.iter().map(|s| w(s)).collect()
}

/// Every split of `word` into `n` possibly empty factors, by recursion.
pub fn factorizations(word: &[Sym], n: usize) -> Vec<Vec<Word>> {
    if n == 1 {
        return vec![vec![word.to_vec()]];
    }
    let mut out = Vec::new();
    for cut in 0..=word.len() {
        for mut rest in factorizations(&word[cut..], n - 1) {
            rest.insert(0, word[..cut].to_vec());
            out.push(rest);
        }
    }
    out
}

/// All permutations of `1..=n` as image vectors, by recursion.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n);
            out.push(q);
        }
    }
    out
}

/// `{ w_σ(1) ... w_σ(N) : w_1 ... w_N in lang }` for the given images.
pub fn reorder(lang: &BTreeSet<Word>, n: usize, images: &[u32]) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for word in lang {
        for parts in factorizations(word, n) {
            out.insert(images.iter().flat_map(|&i| parts[i as usize - 1].clone()).collect());
        }
    }
    out
}

/// Formula slices, written independently of the library oracle.
pub fn formula(name: &str, max_len: usize) -> BTreeSet<Word> {
    let rep = |x: &str, n: usize| vec![Sym::from(x); n];
    let mut out = BTreeSet::new();
    match name {
        "anbn" => {
            for n in 1..=max_len / 2 {
                out.insert([rep("a", n), rep("b", n)].concat());
            }
        }
        "anbmcndm" => {
            for n in 1..=max_len {
                for m in 1..=max_len {
                    if 2 * (n + m) <= max_len {
                        out.insert([rep("a", n), rep("b", m), rep("c", n), rep("d", m)].concat());
                    }
                }
            }
        }
        "abc-star" => {
            for n in 0..=max_len / 3 {
                out.insert(w(&"a b c ".repeat(n)));
            }
        }
        "singleton(abc)" => {
            if max_len >= 3 {
                out.insert(w("a b c"));
            }
        }
        other => panic!("no formula for {other}"),
    }
    out
}

/// `#1 w1 #2 ... #N wN #N+1`.
pub fn hashed_word(parts: &[Word]) -> Word {
    let mut out = vec![hash_letter(1)];
    for (i, p) in parts.iter().enumerate() {
        out.extend(p.iter().cloned());
        out.push(hash_letter(i as u32 + 2));
    }
    out
}

/// The block order read by the permutation automaton: `#i wi #i+1` for
/// `i = σ(1), ..., σ(N)`.
pub fn sigma_word(parts: &[Word], images: &[u32]) -> Word {
    let mut out = Vec::new();
    for &i in images {
        out.push(hash_letter(i));
        out.extend(parts[i as usize - 1].iter().cloned());
        out.push(hash_letter(i + 1));
    }
    out
}

/// The fixture automata by oracle name, with their restriction.
pub fn base(name: &str) -> (Automaton, u32) {
    treestack::fixtures::all()
        .into_iter()
        .find(|f| f.0 == name)
        .map(|f| (f.1, f.2))
        .unwrap_or_else(|| panic!("unknown fixture {name}"))
}

/// A built permutation automaton with everything needed to run it.
pub struct SigmaRun {
    pub pipe: HashPipeline,
    pub meta: PipelineMeta,
    pub a_sigma: Automaton,
    pub k: u32,
}

impl SigmaRun {
    pub fn new(base: &Automaton, k: u32, n: u32, images: &[u32]) -> SigmaRun {
        let pipe = hash_pipeline(base, n).expect("hash pipeline");
        let meta = PipelineMeta { n, k, degree: pipe.degree, sigma: Permutation::new(images.to_vec()).unwrap() };
        let a_sigma = build_a_sigma(&pipe.framed, &pipe.hashed, &meta).expect("permutation automaton");
        SigmaRun { pipe, meta, a_sigma, k: k + n + 3 }
    }

    pub fn erased(&self) -> Automaton {
        erase_hashes(&self.a_sigma)
    }

    /// The derived node cap for base words up to `max_len`.
    pub fn budget(&self, base: &Automaton, max_len: usize) -> Budget {
        let cap = derived_node_cap(base, self.meta.n, max_len, self.k, Budget::default()).expect("base enumerates");
        Budget::default().with_node_bound(cap)
    }
}

/// Final-tree vertices carrying special labels, by special index.
pub fn specials(tree: &LabeledTree) -> BTreeMap<u32, Vec<(Address, Label)>> {
    let mut out: BTreeMap<u32, Vec<(Address, Label)>> = BTreeMap::new();
    for (a, l) in tree.iter() {
        if let Some(key) = l.as_special() {
            out.entry(key.index).or_default().push((a.clone(), l.clone()));
        }
    }
    out
}

/// Exactly one `i`-th special vertex per `i`, each a `D+i` child visited
/// from below once.
pub fn special_vertex_law(trace: &RunTrace, n: u32, d: u32) -> Result<(), String> {
    let tree = final_tree(trace).map_err(|e| e.to_string())?;
    let found = specials(&tree);
    let visits = visit_counts(trace);
    if found.keys().copied().collect::<Vec<_>>() != (1..=n + 1).collect::<Vec<_>>() {
        return Err(format!("special indices {:?}", found.keys().collect::<Vec<_>>()));
    }
    for (i, list) in &found {
        let [(addr, _)] = list.as_slice() else {
            return Err(format!("{} vertices for special {i}", list.len()));
        };
        if addr.last() != Some(d + i) {
            return Err(format!("special {i} at {addr}"));
        }
        if visits.get(addr) != Some(&1) {
            return Err(format!("special {i} at {addr} visited {:?} times", visits.get(addr)));
        }
    }
    Ok(())
}

/// `T1` is `T0` under a fresh root, and the specials correspond.
pub fn property_p(t0: &LabeledTree, t1: &LabeledTree) -> Result<(), String> {
    if !treestack::runner::check_add_root(t0, t1) {
        return Err("domains not related by adding a root".into());
    }
    for (a, l) in t0.iter() {
        let copy = t1.get(&a.prepend(1));
        if l.as_special().is_some() != copy.is_some_and(|c| c == l) {
            return Err(format!("special correspondence fails at {a}"));
        }
    }
    for (a, l) in t1.iter() {
        if l.as_special().is_some() && a.strip_first(1).and_then(|b| t0.get(&b).cloned()).as_ref() != Some(l) {
            return Err(format!("stray special at {a}"));
        }
    }
    Ok(())
}

/// No push after the first `Locate(σ(1))` state.
pub fn phase_separation(trace: &RunTrace, first: u32) -> Result<(), String> {
    let start = State::sigma(SigmaState::Locate(first));
    let Some(from) = trace.transitions.iter().position(|t| t.dst == start) else {
        return Err("never reaches the first block".into());
    };
    match trace.transitions[from..].iter().position(|t| matches!(t.instr, Instruction::Push(..))) {
        Some(p) => Err(format!("push at step {}", from + p + 1)),
        None => Ok(()),
    }
}

/// Checks Property P and the accompanying laws for one base word split.
pub fn matched_runs(run: &SigmaRun, base: &Automaton, parts: &[Word]) -> Result<(), String> {
    let images = run.meta.sigma.images().to_vec();
    let n = run.meta.n;
    let total: usize = parts.iter().map(Vec::len).sum();
    let budget = run.budget(base, total);
    let word = sigma_word(parts, &images);
    let trace = match accepts(&run.a_sigma, &word, run.k, budget).map_err(|e| e.to_string())? {
        Verdict::Accepted(t) => t,
        other => return Err(format!("permutation automaton: {other:?}")),
    };
    if restriction_degree(&trace) > run.k {
        return Err(format!("restriction {} above {}", restriction_degree(&trace), run.k));
    }
    phase_separation(&trace, images[0])?;
    let t1 = final_tree(&trace).map_err(|e| e.to_string())?;
    let (runs, complete) =
        accepting_runs(&run.pipe.hashed, &hashed_word(parts), run.meta.k, Budget::default()).map_err(|e| e.to_string())?;
    if !complete || runs.is_empty() {
        return Err("hash automaton has no complete accepting search".into());
    }
    let mut last = String::new();
    for r in &runs {
        special_vertex_law(r, n, run.pipe.degree)?;
        let t0 = final_tree(r).map_err(|e| e.to_string())?;
        match property_p(&t0, &t1) {
            Ok(()) => return Ok(()),
            Err(e) => last = e,
        }
    }
    Err(format!("no matching hash-automaton run: {last}"))
}

/// A tree stack reached by applying `ops` from the fresh one, skipping
/// undefined steps.
pub fn grow(ops: &[Instruction]) -> TreeStack {
    let mut ts = TreeStack::fresh();
    for op in ops {
        if let Some(next) = apply_instruction(&ts, op) {
            ts = next;
        }
    }
    ts
}

pub fn instruction_laws(ts: &TreeStack, op: &Instruction) -> Result<(), String> {
    let Some(next) = apply_instruction(ts, op) else { return Ok(()) };
    for a in ts.tree.domain() {
        if !next.tree.contains(a) {
            return Err(format!("{op} removed {a}"));
        }
    }
    for a in next.tree.domain() {
        if let Some(p) = a.parent() {
            if !next.tree.contains(&p) {
                return Err(format!("{op} broke prefix closure at {a}"));
            }
        }
    }
    let added = next.tree.len() - ts.tree.len();
    if added != usize::from(matches!(op, Instruction::Push(..))) {
        return Err(format!("{op} added {added} vertices"));
    }
    match op {
        Instruction::Push(..) | Instruction::Up(_) => {
            let back = apply_instruction(&next, &Instruction::Down).ok_or("down after a move away from the root")?;
            if back.cursor != ts.cursor || back.tree != next.tree {
                return Err(format!("down does not undo {op}"));
            }
            if matches!(op, Instruction::Up(_)) && next.tree != ts.tree {
                return Err("up changed the tree".into());
            }
        }
        Instruction::Set(_) if apply_instruction(&next, op).as_ref() != Some(&next) => {
            return Err("set is not idempotent".into());
        }
        _ => {}
    }
    Ok(())
}

/// Replay reproduces the trace, the word is the letters read, visits grow
/// along prefixes, and the restriction is respected.
pub fn trace_laws(aut: &Automaton, trace: &RunTrace, word: &[Sym], k: u32) -> Result<(), String> {
    if replay(aut, &trace.transitions) != *trace {
        return Err("replay differs".into());
    }
    if trace.word() != word {
        return Err("word differs from letters read".into());
    }
    if !aut.finals.contains(&trace.last().state) || trace.last().consumed != word {
        return Err("trace does not end accepting".into());
    }
    let full = visit_counts(trace);
    for cut in 0..trace.transitions.len() {
        let prefix = replay(aut, &trace.transitions[..cut]);
        for (a, c) in visit_counts(&prefix) {
            if full.get(&a).copied().unwrap_or(0) < c {
                return Err(format!("visits at {a} shrink"));
            }
        }
    }
    if restriction_degree(trace) > k {
        return Err(format!("restriction {} above {k}", restriction_degree(trace)));
    }
    Ok(())
}

/// A small explicit automaton from generated parts.
pub fn small_automaton(trans: &[(u8, u8, u8, u8, u8)], finals: &[u8]) -> Automaton {
    let q = |i: u8| State::name(&format!("q{}", i % 4));
    let label = |i: u8| Label::plain(if i.is_multiple_of(2) { "x" } else { "y" });
    let list = trans
        .iter()
        .map(|&(src, input, pred, instr, dst)| Transition {
            src: q(src),
            input: match input % 3 {
                0 => None,
                1 => Some(Sym::from("a")),
                _ => Some(Sym::from("b")),
            },
            pred: match pred % 4 {
                0 | 1 => Predicate::True,
                2 => Predicate::Eq(Label::Root),
                _ => Predicate::Eq(label(pred / 4)),
            },
            instr: match instr % 6 {
                0 => Instruction::Id,
                1 => Instruction::Down,
                2 => Instruction::Up(1 + u32::from(instr / 6) % 3),
                3 | 4 => Instruction::Push(1 + u32::from(instr / 6) % 3, label(instr / 18)),
                _ => Instruction::Set(label(instr / 6)),
            },
            dst: q(dst),
        })
        .collect();
    let mut aut = Automaton::explicit(
        (0..4).map(q),
        [Label::plain("x"), Label::plain("y")],
        [Sym::from("a"), Sym::from("b")],
        q(0),
        finals.iter().map(|&f| q(f)),
        list,
    );
    aut.meta.claimed_k = Some(2);
    aut
}
