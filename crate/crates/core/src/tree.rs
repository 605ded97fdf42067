//! Labeled trees, tree stacks, predicates and instructions.

use std::collections::BTreeMap;
use std::fmt;

use crate::address::Address;
use crate::label::Label;

/// A finite, prefix-closed labeled tree whose root carries `@`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree(BTreeMap<Address, Label>);

impl LabeledTree {
    /// The one-vertex tree `{ε ↦ @}`.
    pub fn fresh() -> LabeledTree {
        LabeledTree(BTreeMap::from([(Address::root(), Label::Root)]))
    }

    /// Builds a tree from an assignment, checking the tree invariants.
    pub fn from_assignment(
        assignment: impl IntoIterator<Item = (Address, Label)>,
    ) -> Result<LabeledTree, String> {
        let map: BTreeMap<Address, Label> = assignment.into_iter().collect();
        match map.get(&Address::root()) {
            Some(Label::Root) => {}
            _ => return Err("the root must be labeled `@`".into()),
        }
        for (addr, label) in &map {
            if let Some(parent) = addr.parent() {
                if !map.contains_key(&parent) {
                    return Err(format!("domain is not prefix-closed at {addr}"));
                }
                if label.is_root() {
                    return Err(format!("non-root vertex {addr} labeled `@`"));
                }
            }
        }
        Ok(LabeledTree(map))
    }

    pub fn get(&self, addr: &Address) -> Option<&Label> {
        self.0.get(addr)
    }

    pub fn contains(&self, addr: &Address) -> bool {
        self.0.contains_key(addr)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Vertices in lexicographic (preorder) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Address, &Label)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Address> {
        self.0.keys()
    }

    /// Child indices of `addr`, ascending.
    pub fn children(&self, addr: &Address) -> Vec<u32> {
        self.0
            .keys()
            .filter(|a| a.depth() == addr.depth() + 1 && a.parent().as_ref() == Some(addr))
            .filter_map(Address::last)
            .collect()
    }
}

/// A tree plus a cursor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeStack {
    pub tree: LabeledTree,
    pub cursor: Address,
}

impl TreeStack {
    /// `({ε ↦ @}, ε)`.
    pub fn fresh() -> TreeStack {
        TreeStack { tree: LabeledTree::fresh(), cursor: Address::root() }
    }

    /// # Panics
    ///
    /// Panics if the cursor is outside the tree.
    pub fn new(tree: LabeledTree, cursor: Address) -> TreeStack {
        assert!(tree.contains(&cursor), "cursor {cursor} outside the tree");
        TreeStack { tree, cursor }
    }

    pub fn cursor_label(&self) -> &Label {
        self.tree.get(&self.cursor).expect("cursor inside the tree")
    }
}

/// A predicate on the cursor label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    True,
    Eq(Label),
}

impl Predicate {
    pub fn holds_on(&self, label: &Label) -> bool {
        match self {
            Predicate::True => true,
            Predicate::Eq(c) => c == label,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::True => f.write_str("true"),
            Predicate::Eq(c) => write!(f, "eq {c}"),
        }
    }
}

/// A tree-stack instruction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instruction {
    Id,
    Push(u32, Label),
    Up(u32),
    Down,
    Set(Label),
}

impl Instruction {
    /// The child index of a push or up.
    pub fn index(&self) -> Option<u32> {
        match self {
            Instruction::Push(n, _) | Instruction::Up(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Id => f.write_str("id"),
            Instruction::Push(n, c) => write!(f, "push {n} {c}"),
            Instruction::Up(n) => write!(f, "up {n}"),
            Instruction::Down => f.write_str("down"),
            Instruction::Set(c) => write!(f, "set {c}"),
        }
    }
}

/// Whether `p` holds at the cursor of `ts`.
pub fn predicate_holds(ts: &TreeStack, p: &Predicate) -> bool {
    p.holds_on(ts.cursor_label())
}

/// Applies `instr`, or returns `None` where the instruction is undefined.
///
/// ```
/// use treestack::{apply_instruction, Address, Instruction, Label, TreeStack};
///
/// let ts = apply_instruction(&TreeStack::fresh(), &Instruction::Push(1, Label::plain("*"))).unwrap();
/// assert_eq!(ts.cursor, Address::new([1]));
/// assert!(apply_instruction(&TreeStack::fresh(), &Instruction::Down).is_none());
/// ```
pub fn apply_instruction(ts: &TreeStack, instr: &Instruction) -> Option<TreeStack> {
    match instr {
        Instruction::Id => Some(ts.clone()),
        Instruction::Push(n, c) => {
            let child = ts.cursor.child(*n);
            if ts.tree.contains(&child) || c.is_root() {
                return None;
            }
            let mut out = ts.clone();
            out.tree.0.insert(child.clone(), c.clone());
            out.cursor = child;
            Some(out)
        }
        Instruction::Up(n) => {
            let child = ts.cursor.child(*n);
            ts.tree.contains(&child).then(|| TreeStack { tree: ts.tree.clone(), cursor: child })
        }
        Instruction::Down => {
            let parent = ts.cursor.parent()?;
            Some(TreeStack { tree: ts.tree.clone(), cursor: parent })
        }
        Instruction::Set(c) => {
            if ts.cursor.is_root() || c.is_root() {
                return None;
            }
            let mut out = ts.clone();
            out.tree.0.insert(ts.cursor.clone(), c.clone());
            Some(out)
        }
    }
}
