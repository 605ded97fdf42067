//! Brute-force ground truth: permutation closures of finite slices and
//! formula-generated fixture languages.
//!
//! ```
//! use treestack::oracle::{cn_slice, LanguageSlice, SigmaChoice};
//! use treestack::word;
//!
//! let s = LanguageSlice::complete([word("a b c")], 3);
//! let all = cn_slice(&s, 3, &SigmaChoice::All);
//! assert_eq!(all.words.len(), 6);
//! ```

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::OracleError;
use crate::label::Sym;
use crate::runner::Word;

/// All words of a language up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSlice {
    pub words: BTreeSet<Word>,
    pub max_len: usize,
    pub complete: bool,
}

impl LanguageSlice {
    pub fn new(words: impl IntoIterator<Item = Word>, max_len: usize, complete: bool) -> LanguageSlice {
        let words: BTreeSet<Word> = words.into_iter().filter(|w| w.len() <= max_len).collect();
        LanguageSlice { words, max_len, complete }
    }

    pub fn complete(words: impl IntoIterator<Item = Word>, max_len: usize) -> LanguageSlice {
        LanguageSlice::new(words, max_len, true)
    }

    /// Words ordered by length, then lexicographically.
    pub fn sorted_words(&self) -> Vec<&Word> {
        let mut v: Vec<&Word> = self.words.iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }
}

/// A permutation of `1..=N`, stored by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Permutation, OracleError> {
        let n = images.len() as u32;
        let sorted: Vec<u32> = images.iter().copied().sorted().collect();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return Err(OracleError::BadPermutation(format!("{images:?}")));
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: u32) -> Permutation {
        Permutation((1..=n).collect())
    }

    /// Every permutation of `1..=n`, in lexicographic order.
    pub fn all(n: u32) -> Vec<Permutation> {
        (1..=n).permutations(n as usize).map(Permutation).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn image(&self, i: u32) -> u32 {
        self.0[i as usize - 1]
    }

    /// The position `p` with `σ(p) = i`.
    pub fn position(&self, i: u32) -> u32 {
        self.0.iter().position(|&x| x == i).expect("value in range") as u32 + 1
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }
}

/// Space-separated images.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

impl std::str::FromStr for Permutation {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Permutation, OracleError> {
        let images = s
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| OracleError::BadPermutation(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(images)
    }
}

/// One permutation, or all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaChoice {
    One(Permutation),
    All,
}

/// Every split of `w` into `n` possibly empty factors, as cut positions.
fn splits(len: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=len).combinations_with_replacement(n - 1).map(move |mut cuts| {
        cuts.insert(0, 0);
        cuts.push(len);
        cuts
    })
}

/// Reorders every `n`-factor split of every word by the chosen permutations.
pub fn cn_slice(slice: &LanguageSlice, n: u32, sigma: &SigmaChoice) -> LanguageSlice {
    let perms = match sigma {
        SigmaChoice::One(p) => vec![p.clone()],
        SigmaChoice::All => Permutation::all(n),
    };
    let mut words = BTreeSet::new();
    for w in &slice.words {
        for cuts in splits(w.len(), n as usize) {
            let factor = |i: u32| &w[cuts[i as usize - 1]..cuts[i as usize]];
            for p in &perms {
                let v: Word = (1..=n).flat_map(|j| factor(p.image(j)).iter().cloned()).collect();
                words.insert(v);
            }
        }
    }
    LanguageSlice { words, max_len: slice.max_len, complete: slice.complete }
}

/// The cyclic shift: `cn_slice` with two factors and both orders.
pub fn cyclic_shift_slice(slice: &LanguageSlice) -> LanguageSlice {
    cn_slice(slice, 2, &SigmaChoice::All)
}

/// Differences between two slices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SliceDiff {
    pub only_left: Vec<Word>,
    pub only_right: Vec<Word>,
    /// Set when either side is incomplete.
    pub incomplete: bool,
}

impl SliceDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

impl fmt::Display for SliceDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.only_left {
            writeln!(f, "< {}", crate::format::render_word(w))?;
        }
        for w in &self.only_right {
            writeln!(f, "> {}", crate::format::render_word(w))?;
        }
        if self.incomplete {
            writeln!(f, "! at least one slice is incomplete")?;
        }
        Ok(())
    }
}

/// Compares two slices with the same length bound.
pub fn compare_slices(a: &LanguageSlice, b: &LanguageSlice) -> Result<SliceDiff, OracleError> {
    if a.max_len != b.max_len {
        return Err(OracleError::MaxLenMismatch(a.max_len, b.max_len));
    }
    Ok(SliceDiff {
        only_left: a.words.difference(&b.words).cloned().collect(),
        only_right: b.words.difference(&a.words).cloned().collect(),
        incomplete: !(a.complete && b.complete),
    })
}

fn rep(letter: &str, n: usize) -> impl Iterator<Item = Sym> + '_ {
    std::iter::repeat_with(move || Sym::from(letter)).take(n)
}

/// Formula-generated slices: `anbn`, `anbmcndm`, `abc-star` and
/// `singleton(w)` (letters separated by spaces, or one letter per char).
pub fn fixture(name: &str, max_len: usize) -> Result<LanguageSlice, OracleError> {
    let mut words = Vec::new();
    match name {
        "anbn" => {
            for n in 1..=max_len / 2 {
                words.push(rep("a", n).chain(rep("b", n)).collect());
            }
        }
        "anbmcndm" => {
            for n in 1..=max_len / 2 {
                for m in 1..=(max_len / 2).saturating_sub(n) {
                    words.push(rep("a", n).chain(rep("b", m)).chain(rep("c", n)).chain(rep("d", m)).collect());
                }
            }
        }
        "abc-star" => {
            for n in 0..=max_len / 3 {
                words.push((0..n).flat_map(|_| ["a", "b", "c"]).map(Sym::from).collect());
            }
        }
        _ => {
            let inner = name
                .strip_prefix("singleton(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| OracleError::UnknownFixture(name.to_string()))?;
            let w: Word = if inner.contains(char::is_whitespace) {
                crate::format::parse_word(inner)
            } else {
                inner.chars().map(|c| Sym::from(c.to_string())).collect()
            };
            words.push(w);
        }
    }
    Ok(LanguageSlice::complete(words, max_len))
}
