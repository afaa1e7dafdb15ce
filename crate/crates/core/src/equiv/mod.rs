//! Deciding the bisimilarities.
//!
//! [`relation_fixpoint`] is the reference procedure: it transcribes the
//! clauses of each kind and removes violating pairs until nothing changes.
//! [`refine_partition`] is an independent signature-refinement oracle for the
//! nine kinds with a characterizing fragment; the two are required to agree.

mod fixpoint;
mod tau_paths;
mod partition;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

pub use fixpoint::Fixpoint;
pub use tau_paths::{
    cross_violations, cross_violations_in, stuttering_violations, stuttering_violations_in,
    stuttering_violations_ps,
};
pub use partition::{partition_classes, refine_partition};

use crate::diagnose;
use crate::error::{Error, Result};
use crate::logic::{FragmentName, Formula};
use crate::lts::{backstep, build_lts, Lts};
use crate::space::StateSpace;
use crate::term::{Action, ProcessTerm};

pub(crate) use fixpoint::violates;

/// The ten equivalences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquivKind {
    FB,
    FBps,
    RB,
    FRB,
    WFB,
    WFBps,
    WRB,
    WFRB,
    WFRBps,
    BB,
}

impl EquivKind {
    pub const ALL: [EquivKind; 10] = [
        EquivKind::FB,
        EquivKind::FBps,
        EquivKind::RB,
        EquivKind::FRB,
        EquivKind::WFB,
        EquivKind::WFBps,
        EquivKind::WRB,
        EquivKind::WFRB,
        EquivKind::WFRBps,
        EquivKind::BB,
    ];

    /// The kinds that have a characterizing fragment (all but `BB`).
    pub const CHARACTERIZED: [EquivKind; 9] = [
        EquivKind::FB,
        EquivKind::FBps,
        EquivKind::RB,
        EquivKind::FRB,
        EquivKind::WFB,
        EquivKind::WFBps,
        EquivKind::WRB,
        EquivKind::WFRB,
        EquivKind::WFRBps,
    ];

    pub fn token(self) -> &'static str {
        match self {
            EquivKind::FB => "FB",
            EquivKind::FBps => "FBps",
            EquivKind::RB => "RB",
            EquivKind::FRB => "FRB",
            EquivKind::WFB => "wFB",
            EquivKind::WFBps => "wFBps",
            EquivKind::WRB => "wRB",
            EquivKind::WFRB => "wFRB",
            EquivKind::WFRBps => "wFRBps",
            EquivKind::BB => "BB",
        }
    }

    /// Challenges include outgoing transitions.
    pub fn forward(self) -> bool {
        !matches!(self, EquivKind::RB | EquivKind::WRB)
    }

    /// Challenges include the incoming transition.
    pub fn reverse(self) -> bool {
        matches!(
            self,
            EquivKind::RB | EquivKind::FRB | EquivKind::WRB | EquivKind::WFRB | EquivKind::WFRBps
        )
    }

    pub fn weak(self) -> bool {
        matches!(
            self,
            EquivKind::WFB
                | EquivKind::WFBps
                | EquivKind::WRB
                | EquivKind::WFRB
                | EquivKind::WFRBps
                | EquivKind::BB
        )
    }

    /// Related pairs must agree on being initial.
    pub fn past_sensitive(self) -> bool {
        matches!(self, EquivKind::FBps | EquivKind::WFBps | EquivKind::WFRBps)
    }

    /// The characterizing fragment, `None` for `BB`.
    pub fn fragment(self) -> Option<FragmentName> {
        Some(match self {
            EquivKind::FB => FragmentName::FB,
            EquivKind::FBps => FragmentName::FBps,
            EquivKind::RB => FragmentName::RB,
            EquivKind::FRB => FragmentName::FRB,
            EquivKind::WFB => FragmentName::WFB,
            EquivKind::WFBps => FragmentName::WFBps,
            EquivKind::WRB => FragmentName::WRB,
            EquivKind::WFRB => FragmentName::WFRB,
            EquivKind::WFRBps => FragmentName::WFRBps,
            EquivKind::BB => return None,
        })
    }
}

impl fmt::Display for EquivKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.token())
    }
}

impl FromStr for EquivKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EquivKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown equivalence kind `{s}`")))
    }
}

/// A symmetric relation on terms, stored as unordered pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessRelation {
    pairs: BTreeSet<(ProcessTerm, ProcessTerm)>,
}

impl WitnessRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: ProcessTerm, q: ProcessTerm) {
        if p <= q {
            self.pairs.insert((p, q));
        } else {
            self.pairs.insert((q, p));
        }
    }

    pub fn contains(&self, p: &ProcessTerm, q: &ProcessTerm) -> bool {
        let key = if p <= q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
        self.pairs.contains(&key)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs with the smaller term first, in term order.
    pub fn iter(&self) -> impl Iterator<Item = &(ProcessTerm, ProcessTerm)> {
        self.pairs.iter()
    }

    /// Pairs that break a clause of `kind` with respect to this relation.
    /// Empty iff the relation is a bisimulation of that kind.
    pub fn violations(&self, kind: EquivKind) -> Result<Vec<(ProcessTerm, ProcessTerm)>> {
        let terms: Vec<&ProcessTerm> = self.pairs.iter().flat_map(|(p, q)| [p, q]).collect();
        let space = StateSpace::from_terms(terms)?;
        let ids: HashSet<(usize, usize)> = self
            .pairs
            .iter()
            .flat_map(|(p, q)| {
                let (x, y) = (space.id(p).unwrap(), space.id(q).unwrap());
                [(x, y), (y, x)]
            })
            .collect();
        let rel = |x: usize, y: usize| ids.contains(&(x, y));
        Ok(self
            .pairs
            .iter()
            .filter(|(p, q)| {
                let (x, y) = (space.id(p).unwrap(), space.id(q).unwrap());
                violates(kind, &space, x, y, rel) || violates(kind, &space, y, x, rel)
            })
            .cloned()
            .collect())
    }

    pub fn is_bisimulation(&self, kind: EquivKind) -> Result<bool> {
        Ok(self.violations(kind)?.is_empty())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.pairs
                .iter()
                .map(|(p, q)| json!([p.to_string(), q.to_string()]))
                .collect(),
        )
    }
}

/// Outcome of one equivalence query.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub kind: EquivKind,
    pub left: ProcessTerm,
    pub right: ProcessTerm,
    pub equivalent: bool,
    /// The greatest bisimulation over both systems, when equivalent.
    pub witness: Option<WitnessRelation>,
    /// A formula satisfied by exactly one side, when inequivalent (not for `BB`).
    pub distinguishing: Option<Formula>,
}

impl EquivalenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "kind": self.kind.token(),
            "left": self.left.to_string(),
            "right": self.right.to_string(),
            "equivalent": self.equivalent,
            "witness": self.witness.as_ref().map(WitnessRelation::to_json),
            "distinguishing": self.distinguishing.as_ref().map(|f| f.to_string()),
        })
    }
}

/// Greatest bisimulation of `kind` over the states of both systems.
pub fn relation_fixpoint(kind: EquivKind, l1: &Lts, l2: &Lts) -> WitnessRelation {
    let space = StateSpace::new([l1, l2]);
    let fix = Fixpoint::compute(kind, &space);
    collect_relation(&space, &fix)
}

fn collect_relation(space: &StateSpace, fix: &Fixpoint) -> WitnessRelation {
    let mut rel = WitnessRelation::new();
    for x in 0..space.len() {
        for y in x..space.len() {
            if fix.related(x, y) {
                rel.insert(space.term(x).clone(), space.term(y).clone());
            }
        }
    }
    rel
}

/// Decides `p1` against `p2` and explains the verdict.
pub fn bisimilar(kind: EquivKind, p1: &ProcessTerm, p2: &ProcessTerm) -> Result<EquivalenceReport> {
    p1.ensure_reachable()?;
    p2.ensure_reachable()?;
    let (l1, l2) = (build_lts(p1)?, build_lts(p2)?);
    let space = StateSpace::new([&l1, &l2]);
    let fix = Fixpoint::compute(kind, &space);
    let (x, y) = (space.id(p1).unwrap(), space.id(p2).unwrap());
    let equivalent = fix.related(x, y);
    let witness = equivalent.then(|| collect_relation(&space, &fix));
    let distinguishing = if equivalent || kind == EquivKind::BB {
        None
    } else {
        let mut d = diagnose::Distinguisher::new(&space, &fix)?;
        d.formula(x, y)
    };
    Ok(EquivalenceReport {
        kind,
        left: p1.clone(),
        right: p2.clone(),
        equivalent,
        witness,
        distinguishing,
    })
}

/// Labels along the backward path to the initial ancestor, most recent first.
/// The weak variant drops every `tau`.
pub fn backward_trace(p: &ProcessTerm, weak: bool) -> Result<Vec<Action>> {
    p.ensure_reachable()?;
    let mut trace = Vec::new();
    let mut cur = p.clone();
    while let Some((a, prev)) = backstep(&cur)? {
        if !(weak && a.is_tau()) {
            trace.push(a);
        }
        cur = prev;
    }
    Ok(trace)
}
