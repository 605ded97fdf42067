//! The constructive pipeline from a base automaton for `L` to one for the
//! permutation closure `C^N(L)`.
//!
//! ```
//! use treestack::constructions::{derived_node_cap, permutation_closure};
//! use treestack::{enumerate_slice, fixtures, word, Budget};
//!
//! let base = fixtures::anbn();
//! let closure = permutation_closure(&base, 2, 4).unwrap();
//! let cap = derived_node_cap(&base, 2, 2, 1, Budget::default()).unwrap();
//! let (slice, complete) = enumerate_slice(&closure, 2, 6, Budget::default().with_node_bound(cap));
//! assert!(complete);
//! assert_eq!(slice, [word("a b"), word("b a")].into());
//! ```

use std::collections::BTreeSet;

use crate::label::Sym;
use crate::oracle::Permutation;

mod closure;
mod hashes;
mod sigma;

pub use closure::{derived_node_cap, erase_hashes, permutation_closure, union_automata, DEFAULT_PERMUTATION_CAP};
pub use hashes::{
    hash_order_dfa, hash_pipeline, lift_inverse_erasing, product_with_dfa, specialize_hashes, wrap_endmarkers, Dfa,
    HashPipeline,
};
pub use sigma::{
    build_a_sigma, phase_one_schemas, phase_three_schemas, phase_two_glue, subroutine_schemas, SchemaSet,
    SigmaContext,
};

/// The letter `#i`: `#1`..`#9`, then `#{10}` and up.
pub fn hash_letter(i: u32) -> Sym {
    if i < 10 {
        Sym::from(format!("#{i}"))
    } else {
        Sym::from(format!("#{{{i}}}"))
    }
}

/// Inverse of [`hash_letter`].
pub fn hash_index(x: &str) -> Option<u32> {
    let rest = x.strip_prefix('#')?;
    let digits = match rest.strip_prefix('{') {
        Some(inner) => inner.strip_suffix('}').filter(|d| d.parse::<u32>().ok().is_some_and(|n| n >= 10))?,
        None if rest.len() == 1 => rest,
        None => return None,
    };
    digits.parse().ok().filter(|&n| n >= 1)
}

/// A base alphabet extended by `#1..#N+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashAlphabet {
    pub base: BTreeSet<Sym>,
    pub hashes: Vec<Sym>,
}

impl HashAlphabet {
    pub fn new(base: BTreeSet<Sym>, n: u32) -> HashAlphabet {
        HashAlphabet { base, hashes: (1..=n + 1).map(hash_letter).collect() }
    }

    pub fn all(&self) -> BTreeSet<Sym> {
        self.base.iter().chain(&self.hashes).cloned().collect()
    }
}

/// Parameters shared by every stage of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineMeta {
    pub n: u32,
    /// Claimed restriction of the base.
    pub k: u32,
    /// Degree of the framed automaton before specialization.
    pub degree: u32,
    pub sigma: Permutation,
}
