//! Exhaustive generation of small terms, and corpus files.
//!
//! Initial terms are generated up to commutativity and associativity of
//! choice: a term is `0`, or a left-nested sum of one or more prefix
//! summands listed in non-decreasing term order. `0` is never a summand,
//! since `P + 0` only adds states equivalent to those of `P` for every kind.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lts::build_lts;
use crate::parser::parse_term;
use crate::term::{Action, ProcessTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusParams {
    pub alphabet: BTreeSet<Action>,
    pub max_action_occurrences: usize,
    /// Also emit every state of each initial term's transition system.
    pub include_decorated: bool,
}

impl CorpusParams {
    pub fn new(alphabet: &[&str], max_action_occurrences: usize, include_decorated: bool) -> Result<Self> {
        let alphabet = alphabet.iter().map(|a| Action::new(a)).collect::<Result<BTreeSet<_>>>()?;
        let params = CorpusParams { alphabet, max_action_occurrences, include_decorated };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet.is_empty() {
            return Err(Error::Unsupported("corpus alphabet must not be empty".into()));
        }
        if self.max_action_occurrences == 0 {
            return Err(Error::Unsupported("corpus size bound must be at least 1".into()));
        }
        Ok(())
    }
}

/// All canonical initial terms with at most the given number of action
/// occurrences, plus their reachable states when decorated variants are
/// requested. Sorted in term order without duplicates.
pub fn corpus_generate(params: &CorpusParams) -> Result<Vec<ProcessTerm>> {
    params.validate()?;
    let max = params.max_action_occurrences;
    // by_size[k]: canonical initial terms with exactly k occurrences.
    let mut by_size: Vec<Vec<ProcessTerm>> = vec![vec![ProcessTerm::Nil]];
    // Prefix summands with their sizes, in term order within each size.
    let mut prefixes: Vec<(ProcessTerm, usize)> = Vec::new();
    for k in 1..=max {
        for a in &params.alphabet {
            for body in &by_size[k - 1] {
                prefixes.push((ProcessTerm::prefix(a.clone(), body.clone()), k));
            }
        }
        prefixes.sort();
        let mut sums = Vec::new();
        sums_of(&prefixes, 0, k, None, &mut sums);
        sums.sort();
        sums.dedup();
        by_size.push(sums);
    }
    let mut out: Vec<ProcessTerm> = by_size.into_iter().flatten().collect();
    if params.include_decorated {
        let mut states = Vec::new();
        for t in &out {
            states.extend(build_lts(t)?.states().iter().cloned());
        }
        out.extend(states);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Left-nested sums of summands `prefixes[from..]` taken in non-decreasing
/// index order with sizes adding up to exactly `remaining`.
fn sums_of(
    prefixes: &[(ProcessTerm, usize)],
    from: usize,
    remaining: usize,
    acc: Option<ProcessTerm>,
    out: &mut Vec<ProcessTerm>,
) {
    if remaining == 0 {
        out.extend(acc);
        return;
    }
    for (i, (p, size)) in prefixes.iter().enumerate().skip(from) {
        if *size > remaining {
            continue;
        }
        let next = match &acc {
            None => p.clone(),
            Some(a) => ProcessTerm::choice(a.clone(), p.clone()),
        };
        sums_of(prefixes, i, remaining - size, Some(next), out);
    }
}

/// Parses a corpus file: one term per line, blank lines and lines starting
/// with `#` ignored. Every term must be reachable.
pub fn read_corpus(text: &str) -> Result<Vec<ProcessTerm>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let t = parse_term(line)?;
        t.ensure_reachable()?;
        out.push(t);
    }
    Ok(out)
}

/// One rendered term per line.
pub fn write_corpus(terms: &[ProcessTerm]) -> String {
    terms.iter().map(|t| format!("{t}\n")).collect()
}
