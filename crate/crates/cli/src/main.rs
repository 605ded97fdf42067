//! `treestack`: validate, run and enumerate tree-stack automata, build
//! pipeline automata, and compare slices.
//!
//! Exit codes: 0 success, 1 negative answer (invalid, rejected, slices
//! differ), 2 usage or parse error, 3 budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use treestack::constructions::{
    build_a_sigma, derived_node_cap, erase_hashes, hash_pipeline, permutation_closure, PipelineMeta,
    DEFAULT_PERMUTATION_CAP,
};
use treestack::format::{
    parse_document, parse_word, render_automaton, render_descriptor, render_slice, render_trace, Document,
    PipelineDescriptor, Stage,
};
use treestack::oracle::{cn_slice, compare_slices, LanguageSlice, Permutation, SigmaChoice};
use treestack::{accepts, enumerate_witnesses, validate, Automaton, Budget, Verdict};

#[derive(Parser)]
#[command(name = "treestack", version, about = "Tree-stack automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an automaton file for undeclared symbols and bad instructions.
    Validate { file: PathBuf },
    /// Decide whether a word is accepted.
    Run {
        file: PathBuf,
        /// Letters separated by spaces; `-` is the empty word.
        word: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Print the witness run.
        #[arg(long)]
        trace: bool,
    },
    /// List every accepted word up to a length.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build the hash automaton.
    Hash {
        file: PathBuf,
        #[arg(short = 'N')]
        n: u32,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Build the erased permutation automaton for one permutation.
    Perm {
        file: PathBuf,
        #[arg(short = 'N')]
        n: u32,
        /// Images of 1..N, space separated.
        #[arg(long)]
        sigma: String,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Build the permutation closure.
    Closure {
        file: PathBuf,
        #[arg(short = 'N')]
        n: u32,
        /// Largest N accepted.
        #[arg(long, default_value_t = DEFAULT_PERMUTATION_CAP)]
        cap: u32,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Compare two slices: of two files, or of a file and the brute-force
    /// permutation closure of a base file.
    Compare {
        file: PathBuf,
        other: Option<PathBuf>,
        /// Base automaton whose slice is permuted by brute force.
        #[arg(long, conflicts_with = "other")]
        oracle: Option<PathBuf>,
        #[arg(short = 'N', requires = "oracle")]
        n: Option<u32>,
        /// One permutation; all of them when absent.
        #[arg(long, requires = "oracle")]
        sigma: Option<String>,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Restriction; defaults to the file's claimed restriction.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Defaults to a bound derived from the base for pipeline descriptors.
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    max_configs: Option<usize>,
}

/// An error with its exit code.
struct Fail(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Fail {
    fn from(e: E) -> Fail {
        Fail(2, e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

/// A loaded automaton plus what is needed to pick a node budget.
struct Loaded {
    aut: Automaton,
    /// Base automaton and N, for pipeline descriptors above the hash stage.
    pipeline: Option<(Automaton, u32)>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_automaton(path: &Path) -> Result<Automaton> {
    match load(path)? {
        Loaded { aut, pipeline: None } if aut.is_explicit() => Ok(aut),
        _ => bail!("{} is not an automaton file", path.display()),
    }
}

fn load(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    let doc = parse_document(&text).map_err(|e| anyhow!("{}:{e}", path.display()))?;
    match doc {
        Document::Automaton(aut) => Ok(Loaded { aut, pipeline: None }),
        Document::Pipeline(d) => {
            let dir = path.parent().unwrap_or(Path::new("."));
            let base = load_automaton(&dir.join(&d.base))?;
            expand(&d, base)
        }
    }
}

fn expand(d: &PipelineDescriptor, base: Automaton) -> Result<Loaded> {
    let n = d.n;
    let aut = match d.stage {
        Stage::Hash => return Ok(Loaded { aut: hash_pipeline(&base, n)?.hashed, pipeline: None }),
        Stage::Perm => {
            let sigma = d.sigma.clone().ok_or_else(|| anyhow!("perm descriptor without sigma"))?;
            perm(&base, n, sigma)?
        }
        Stage::Closure => permutation_closure(&base, n, n.max(DEFAULT_PERMUTATION_CAP))?,
    };
    Ok(Loaded { aut, pipeline: Some((base, n)) })
}

fn perm(base: &Automaton, n: u32, sigma: Permutation) -> Result<Automaton> {
    let k = base.meta.claimed_k.ok_or_else(|| anyhow!("base automaton has no `restriction` line"))?;
    let pipe = hash_pipeline(base, n)?;
    let meta = PipelineMeta { n, k, degree: pipe.degree, sigma };
    Ok(erase_hashes(&build_a_sigma(&pipe.framed, &pipe.hashed, &meta)?))
}

fn restriction(search: &SearchArgs, aut: &Automaton) -> Result<u32> {
    search
        .k
        .or(aut.meta.claimed_k)
        .ok_or_else(|| anyhow!("no restriction: pass --k or add a `restriction` line"))
}

fn budget(search: &SearchArgs, loaded: &Loaded, k: u32, max_len: usize) -> Budget {
    let mut b = Budget::default();
    if let Some(s) = search.max_steps {
        b.max_steps = s;
    }
    if let Some(c) = search.max_configs {
        b.max_configs = c;
    }
    match (search.max_nodes, &loaded.pipeline) {
        (Some(n), _) => b.with_max_nodes(n),
        (None, Some((base, n))) => match derived_node_cap(base, *n, max_len, k, b) {
            Some(cap) => b.with_node_bound(cap),
            None => b,
        },
        (None, None) => b,
    }
}

fn header(k: u32, b: &Budget) -> Vec<String> {
    vec![format!(
        "k {k} max_steps {} max_nodes {}{} max_configs {}",
        b.max_steps,
        b.max_nodes,
        if b.node_bound { " (derived)" } else { "" },
        b.max_configs
    )]
}

fn slice_of(path: &Path, max_len: usize, search: &SearchArgs) -> Result<(LanguageSlice, Vec<String>)> {
    let loaded = load(path)?;
    let k = restriction(search, &loaded.aut)?;
    let b = budget(search, &loaded, k, max_len);
    let e = enumerate_witnesses(&loaded.aut, max_len, k, b);
    Ok((LanguageSlice::new(e.words(), max_len, e.complete), header(k, &b)))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes `aut` explicitly when it materializes under the threshold,
/// otherwise the descriptor.
fn emit(aut: &Automaton, desc: PipelineDescriptor, out: Option<&Path>, threshold: u128) -> Result<()> {
    let text = match aut.materialize(threshold) {
        Ok(m) if m.transitions().is_some_and(|t| t.len() as u128 <= threshold) => render_automaton(&m),
        _ => render_descriptor(&desc),
    };
    write_out(out, &text)
}

fn descriptor(stage: Stage, file: &Path, n: u32, sigma: Option<Permutation>, aut: &Automaton) -> Result<PipelineDescriptor> {
    let base = fs::canonicalize(file).with_context(|| format!("cannot resolve {}", file.display()))?;
    Ok(PipelineDescriptor {
        stage,
        base: base.display().to_string(),
        n,
        sigma,
        claimed_k: aut.meta.claimed_k,
        degree: aut.meta.declared_degree,
    })
}

/// Transition count above which constructions are written as descriptors.
fn threshold() -> u128 {
    std::env::var("TREESTACK_THRESHOLD").ok().and_then(|v| v.parse().ok()).unwrap_or(100_000)
}

fn dispatch(cmd: Command) -> Result<u8, Fail> {
    match cmd {
        Command::Validate { file } => {
            let aut = load_automaton(&file)?;
            let report = validate(&aut);
            for d in &report.errors {
                println!("error: {d}");
            }
            for d in &report.warnings {
                println!("warning: {d}");
            }
            Ok(if report.is_ok() { 0 } else { 1 })
        }
        Command::Run { file, word, search, trace } => {
            let loaded = load(&file)?;
            let k = restriction(&search, &loaded.aut)?;
            let w = parse_word(&word);
            let b = budget(&search, &loaded, k, w.len());
            match accepts(&loaded.aut, &w, k, b)? {
                Verdict::Accepted(t) => {
                    println!("accepted ({} transitions)", t.transitions.len());
                    if trace {
                        print!("{}", render_trace(&t));
                    }
                    Ok(0)
                }
                Verdict::Rejected => {
                    println!("rejected");
                    Ok(1)
                }
                Verdict::BudgetExhausted => {
                    println!("budget exhausted");
                    Ok(3)
                }
            }
        }
        Command::Enumerate { file, max_len, search } => {
            let (slice, head) = slice_of(&file, max_len, &search)?;
            print!("{}", render_slice(&slice, &head));
            Ok(if slice.complete { 0 } else { 3 })
        }
        Command::Hash { file, n, out } => {
            let base = load_automaton(&file)?;
            let aut = hash_pipeline(&base, n)?.hashed;
            let desc = descriptor(Stage::Hash, &file, n, None, &aut)?;
            emit(&aut, desc, out.as_deref(), threshold())?;
            Ok(0)
        }
        Command::Perm { file, n, sigma, out } => {
            let base = load_automaton(&file)?;
            let sigma: Permutation = sigma.parse()?;
            if sigma.len() != n as usize {
                return Err(Fail(2, anyhow!("sigma has {} images, N is {n}", sigma.len())));
            }
            let aut = perm(&base, n, sigma.clone())?;
            let desc = descriptor(Stage::Perm, &file, n, Some(sigma), &aut)?;
            emit(&aut, desc, out.as_deref(), threshold())?;
            Ok(0)
        }
        Command::Closure { file, n, cap, out } => {
            let base = load_automaton(&file)?;
            let aut = permutation_closure(&base, n, cap)?;
            let desc = descriptor(Stage::Closure, &file, n, None, &aut)?;
            emit(&aut, desc, out.as_deref(), threshold())?;
            Ok(0)
        }
        Command::Compare { file, other, oracle, n, sigma, max_len, search } => {
            let (left, _) = slice_of(&file, max_len, &search)?;
            let right = match (other, oracle) {
                (Some(o), None) => slice_of(&o, max_len, &search)?.0,
                (None, Some(base)) => {
                    let n = n.ok_or_else(|| anyhow!("--oracle needs -N"))?;
                    let choice = match sigma {
                        Some(s) => SigmaChoice::One(s.parse()?),
                        None => SigmaChoice::All,
                    };
                    let (slice, _) = slice_of(&base, max_len, &SearchArgs { k: None, max_nodes: None, ..search.clone() })?;
                    cn_slice(&slice, n, &choice)
                }
                _ => return Err(Fail(2, anyhow!("compare needs a second file or --oracle"))),
            };
            let diff = compare_slices(&left, &right)?;
            print!("{diff}");
            Ok(if !diff.only_left.is_empty() || !diff.only_right.is_empty() {
                1
            } else if diff.incomplete {
                3
            } else {
                0
            })
        }
    }
}
