//! Tree labels, including the composite labels of the permutation automaton.

use std::fmt;
use std::sync::Arc;

use crate::sexpr::SExpr;
use crate::state::{SpecialKey, State};

/// Terminal letters, plain labels and plain state names are interned strings.
pub type Sym = Arc<str>;

/// A tree label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// The root mark `@`.
    Root,
    Plain(Sym),
    /// A special-vertex label `(spec I Q Q' C)`.
    Special(Arc<SpecialKey>),
    Composite(Arc<Composite>),
    /// The checked mark written by the final depth-first pass.
    Box,
}

impl Label {
    pub fn plain(s: &str) -> Label {
        Label::Plain(Sym::from(s))
    }

    pub fn is_root(&self) -> bool {
        matches!(self, Label::Root)
    }

    /// True for `@` and plain labels, the alphabet `C_@` of ordinary automata.
    pub fn is_basic(&self) -> bool {
        matches!(self, Label::Root | Label::Plain(_))
    }

    pub fn as_composite(&self) -> Option<&Composite> {
        match self {
            Label::Composite(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_special(&self) -> Option<&SpecialKey> {
        match self {
            Label::Special(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_sexpr(&self) -> SExpr {
        match self {
            Label::Root => SExpr::atom("@"),
            Label::Plain(s) => SExpr::atom(&**s),
            Label::Box => SExpr::atom("box"),
            Label::Special(key) => key.to_sexpr("spec", None),
            Label::Composite(c) => c.to_sexpr(),
        }
    }

    pub fn from_sexpr(e: &SExpr) -> Result<Label, String> {
        match e {
            SExpr::Atom(a) => match a.as_str() {
                "@" => Ok(Label::Root),
                "box" => Ok(Label::Box),
                "-" => Err("`-` is not a label".into()),
                _ => Ok(Label::Plain(Sym::from(a.as_str()))),
            },
            SExpr::List(_) => match e.as_form() {
                Some(("spec", args)) => {
                    let (key, rest) = SpecialKey::from_args(args)?;
                    if !rest.is_empty() {
                        return Err("`spec` takes four arguments".into());
                    }
                    Ok(Label::Special(Arc::new(key)))
                }
                Some(("lab", args)) => Ok(Label::Composite(Arc::new(Composite::from_args(args)?))),
                _ => Err(format!("unknown label form `{e}`")),
            },
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Root => f.write_str("@"),
            Label::Plain(s) => f.write_str(s),
            Label::Box => f.write_str("box"),
            _ => write!(f, "{}", self.to_sexpr()),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Label, String> {
        Label::from_sexpr(&crate::sexpr::parse(s)?)
    }
}

/// Visit status of one block in a history column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    /// 0: not yet visited while reading the block.
    Fresh,
    /// 1: visited, last exit still pending.
    Open,
    /// 2: last exit done.
    Closed,
}

impl Status {
    pub fn digit(self) -> u8 {
        match self {
            Status::Fresh => 0,
            Status::Open => 1,
            Status::Closed => 2,
        }
    }

    pub fn from_digit(d: &str) -> Option<Status> {
        match d {
            "0" => Some(Status::Fresh),
            "1" => Some(Status::Open),
            "2" => Some(Status::Closed),
            _ => None,
        }
    }

    pub const ALL: [Status; 3] = [Status::Fresh, Status::Open, Status::Closed];
}

/// One column of a history array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    /// The `[%;%]` column.
    Percent,
    /// `[n; c]`: block status and guessed exit label (`@` or plain).
    Entry { status: Status, exit: Label },
}

impl Column {
    pub fn entry(status: Status, exit: Label) -> Column {
        Column::Entry { status, exit }
    }

    pub fn status(&self) -> Option<Status> {
        match self {
            Column::Percent => None,
            Column::Entry { status, .. } => Some(*status),
        }
    }

    pub fn exit(&self) -> Option<&Label> {
        match self {
            Column::Percent => None,
            Column::Entry { exit, .. } => Some(exit),
        }
    }
}

/// The history array: one column per hash block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistoryArray(pub Vec<Column>);

impl HistoryArray {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Column `i`, 1-based.
    pub fn col(&self, i: u32) -> &Column {
        &self.0[i as usize - 1]
    }

    /// A copy with column `i` (1-based) replaced.
    pub fn with(&self, i: u32, col: Column) -> HistoryArray {
        let mut cols = self.0.clone();
        cols[i as usize - 1] = col;
        HistoryArray(cols)
    }

    /// Index of the first non-`%` column.
    pub fn first_entry(&self) -> Option<u32> {
        self.0.iter().position(|c| *c != Column::Percent).map(|p| p as u32 + 1)
    }

    /// Membership in the root form: no `%`, every exit `@`, first status 1 or 2.
    pub fn is_root_form(&self) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|c| c.exit() == Some(&Label::Root))
            && matches!(self.0[0].status(), Some(Status::Open | Status::Closed))
    }

    /// Membership in the ordinary form: a `%` prefix, then entries with plain exits.
    pub fn is_plain_form(&self) -> bool {
        let Some(first) = self.first_entry() else { return false };
        self.0[first as usize - 1..]
            .iter()
            .all(|c| matches!(c.exit(), Some(Label::Plain(_))))
    }

    /// Every root-form array for `n` blocks.
    pub fn all_root(n: u32) -> Vec<HistoryArray> {
        let mut out = Vec::new();
        let rest = vec![Status::ALL.to_vec(); n as usize - 1];
        for first in [Status::Open, Status::Closed] {
            for tail in product(&rest) {
                let mut cols = vec![Column::entry(first, Label::Root)];
                cols.extend(tail.into_iter().map(|s| Column::entry(s, Label::Root)));
                out.push(HistoryArray(cols));
            }
        }
        out
    }

    /// Every ordinary-form array for `n` blocks over the plain labels `plain`.
    pub fn all_plain(n: u32, plain: &[Label]) -> Vec<HistoryArray> {
        let cells: Vec<Column> = Status::ALL
            .iter()
            .flat_map(|&s| plain.iter().map(move |c| Column::entry(s, c.clone())))
            .collect();
        let mut out = Vec::new();
        for first in 1..=n {
            let percent = vec![Column::Percent; first as usize - 1];
            let width = (n - first + 1) as usize;
            for tail in product(&vec![cells.clone(); width]) {
                let mut cols = percent.clone();
                cols.extend(tail);
                out.push(HistoryArray(cols));
            }
        }
        out
    }

    fn to_sexpr(&self) -> SExpr {
        let mut items = vec![SExpr::atom("h")];
        for c in &self.0 {
            items.push(match c {
                Column::Percent => SExpr::atom("%"),
                Column::Entry { status, exit } => {
                    SExpr::List(vec![SExpr::atom(status.digit().to_string()), exit.to_sexpr()])
                }
            });
        }
        SExpr::List(items)
    }

    fn from_sexpr(e: &SExpr) -> Result<HistoryArray, String> {
        let Some(("h", cols)) = e.as_form() else {
            return Err(format!("expected `(h ...)`, found `{e}`"));
        };
        cols.iter()
            .map(|c| match c {
                SExpr::Atom(a) if a == "%" => Ok(Column::Percent),
                SExpr::List(pair) if pair.len() == 2 => {
                    let status = pair[0]
                        .as_atom()
                        .and_then(Status::from_digit)
                        .ok_or_else(|| format!("bad status in `{c}`"))?;
                    let exit = Label::from_sexpr(&pair[1])?;
                    if !exit.is_basic() {
                        return Err(format!("history exit must be `@` or plain, found `{exit}`"));
                    }
                    Ok(Column::Entry { status, exit })
                }
                _ => Err(format!("bad history column `{c}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(HistoryArray)
    }
}

/// Cartesian product of the choice lists, in lexicographic order.
pub(crate) fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<T>| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// One compass coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heading {
    Child(u32),
    South,
}

/// The compass: one heading per special index `1..=N+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Compass(pub Vec<Heading>);

impl Compass {
    /// Coordinate `i`, 1-based.
    pub fn get(&self, i: u32) -> Heading {
        self.0[i as usize - 1]
    }

    fn to_sexpr(&self) -> SExpr {
        let mut items = vec![SExpr::atom("cmp")];
        items.extend(self.0.iter().map(|h| match h {
            Heading::Child(n) => SExpr::atom(n.to_string()),
            Heading::South => SExpr::atom("south"),
        }));
        SExpr::List(items)
    }

    fn from_sexpr(e: &SExpr) -> Result<Compass, String> {
        let Some(("cmp", xs)) = e.as_form() else {
            return Err(format!("expected `(cmp ...)`, found `{e}`"));
        };
        xs.iter()
            .map(|x| match x.as_atom() {
                Some("south") => Ok(Heading::South),
                Some(n) => match n.parse::<u32>() {
                    Ok(n) if n >= 1 => Ok(Heading::Child(n)),
                    _ => Err(format!("bad compass coordinate `{n}`")),
                },
                None => Err(format!("bad compass coordinate `{x}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Compass)
    }
}

/// Third component of a composite label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Third {
    Root,
    Plain(Sym),
    /// `-`: not yet written.
    Dash,
}

impl Third {
    /// The simulated label, if written.
    pub fn label(&self) -> Option<Label> {
        match self {
            Third::Root => Some(Label::Root),
            Third::Plain(s) => Some(Label::Plain(s.clone())),
            Third::Dash => None,
        }
    }

    /// Converts `@` or a plain label.
    pub fn of(label: &Label) -> Third {
        match label {
            Label::Root => Third::Root,
            Label::Plain(s) => Third::Plain(s.clone()),
            other => panic!("third component must be `@` or plain, got {other}"),
        }
    }
}

/// Set of child indices `1..=63`, kept on composite labels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChildSet(u64);

impl ChildSet {
    pub fn empty() -> ChildSet {
        ChildSet(0)
    }

    pub fn contains(self, n: u32) -> bool {
        n < 64 && self.0 & (1 << n) != 0
    }

    pub fn insert(self, n: u32) -> ChildSet {
        assert!((1..64).contains(&n), "child index out of range");
        ChildSet(self.0 | (1 << n))
    }

    pub fn remove(self, n: u32) -> ChildSet {
        ChildSet(self.0 & !(1u64 << n))
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        (1..64).filter(move |&n| self.contains(n))
    }
}

/// A composite label `(lab H compass third [kids])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composite {
    pub history: HistoryArray,
    pub compass: Compass,
    pub third: Third,
    pub kids: ChildSet,
}

impl Composite {
    /// True for the copy of the old root (history in root form).
    pub fn is_root_copy(&self) -> bool {
        self.third == Third::Root
    }

    pub fn with_history(&self, history: HistoryArray) -> Composite {
        Composite { history, ..self.clone() }
    }

    pub fn with_third(&self, third: Third) -> Composite {
        Composite { third, ..self.clone() }
    }

    pub fn with_kids(&self, kids: ChildSet) -> Composite {
        Composite { kids, ..self.clone() }
    }

    pub fn into_label(self) -> Label {
        Label::Composite(Arc::new(self))
    }

    fn to_sexpr(&self) -> SExpr {
        let third = match &self.third {
            Third::Root => SExpr::atom("@"),
            Third::Plain(s) => SExpr::atom(&**s),
            Third::Dash => SExpr::atom("-"),
        };
        let mut items = vec![SExpr::atom("lab"), self.history.to_sexpr(), self.compass.to_sexpr(), third];
        if !self.kids.is_empty() {
            let mut kids = vec![SExpr::atom("kids")];
            kids.extend(self.kids.iter().map(|n| SExpr::atom(n.to_string())));
            items.push(SExpr::List(kids));
        }
        SExpr::List(items)
    }

    fn from_args(args: &[SExpr]) -> Result<Composite, String> {
        if !(3..=4).contains(&args.len()) {
            return Err("`lab` takes three or four arguments".into());
        }
        let history = HistoryArray::from_sexpr(&args[0])?;
        let compass = Compass::from_sexpr(&args[1])?;
        let third = match &args[2] {
            SExpr::Atom(a) if a == "-" => Third::Dash,
            SExpr::Atom(a) if a == "@" => Third::Root,
            SExpr::Atom(a) if a != "box" => Third::Plain(Sym::from(a.as_str())),
            other => return Err(format!("bad third component `{other}`")),
        };
        let mut kids = ChildSet::empty();
        if let Some(k) = args.get(3) {
            let Some(("kids", ns)) = k.as_form() else {
                return Err(format!("expected `(kids ...)`, found `{k}`"));
            };
            for n in ns {
                match n.as_atom().and_then(|a| a.parse::<u32>().ok()) {
                    Some(n) if (1..64).contains(&n) => kids = kids.insert(n),
                    _ => return Err(format!("bad child index `{n}`")),
                }
            }
        }
        Ok(Composite { history, compass, third, kids })
    }
}

impl SpecialKey {
    pub(crate) fn to_sexpr(&self, head: &str, step: Option<u8>) -> SExpr {
        let mut items = vec![
            SExpr::atom(head),
            SExpr::atom(self.index.to_string()),
            self.from.to_sexpr(),
            self.to.to_sexpr(),
            self.under.to_sexpr(),
        ];
        if let Some(j) = step {
            items.push(SExpr::atom(j.to_string()));
        }
        SExpr::List(items)
    }

    /// Parses `I Q Q' C`, returning the unused remainder.
    pub(crate) fn from_args(args: &[SExpr]) -> Result<(SpecialKey, &[SExpr]), String> {
        if args.len() < 4 {
            return Err("special key needs `I Q Q' C`".into());
        }
        let index = match args[0].as_atom().and_then(|a| a.parse::<u32>().ok()) {
            Some(i) if i >= 1 => i,
            _ => return Err(format!("bad special index `{}`", args[0])),
        };
        let from = State::from_sexpr(&args[1])?;
        let to = State::from_sexpr(&args[2])?;
        let under = Label::from_sexpr(&args[3])?;
        if !under.is_basic() {
            return Err(format!("special key label must be `@` or plain, found `{under}`"));
        }
        Ok((SpecialKey { index, from, to, under }, &args[4..]))
    }
}
