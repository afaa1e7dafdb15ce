//! Process terms of the reversible sequential calculus.
//!
//! A term is either `0`, an unexecuted prefix `a.P`, an executed prefix
//! `a!.P` (the action `a` has already fired and the forward continuation lives
//! inside `P`), or a choice `P + Q`. Executed actions stay in the syntax so
//! that every computation can be undone.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// The reserved name of the unobservable action.
pub const TAU: &str = "tau";

/// An action name. `tau` is the unique unobservable action.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(Arc<str>);

impl Action {
    /// Builds an action after checking the token grammar `[a-z][a-z0-9_]*`.
    pub fn new(name: &str) -> Result<Self, Error> {
        if is_action_token(name) {
            Ok(Action(Arc::from(name)))
        } else {
            Err(Error::InvalidAction(name.to_string()))
        }
    }

    pub fn tau() -> Self {
        Action(Arc::from(TAU))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_tau(&self) -> bool {
        &*self.0 == TAU
    }
}

pub(crate) fn is_action_token(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Abstract syntax of a reversible sequential process.
///
/// The derived ordering (`Nil < Prefix < ExecPrefix < Choice`, then fields
/// lexicographically) is the canonical term order used for every
/// deterministic listing in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTerm {
    Nil,
    Prefix(Action, Box<ProcessTerm>),
    ExecPrefix(Action, Box<ProcessTerm>),
    Choice(Box<ProcessTerm>, Box<ProcessTerm>),
}

impl ProcessTerm {
    pub fn prefix(action: Action, cont: ProcessTerm) -> Self {
        ProcessTerm::Prefix(action, Box::new(cont))
    }

    pub fn exec(action: Action, cont: ProcessTerm) -> Self {
        ProcessTerm::ExecPrefix(action, Box::new(cont))
    }

    pub fn choice(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Choice(Box::new(left), Box::new(right))
    }

    /// All actions are unexecuted.
    pub fn is_initial(&self) -> bool {
        match self {
            ProcessTerm::Nil => true,
            ProcessTerm::Prefix(_, p) => p.is_initial(),
            ProcessTerm::ExecPrefix(..) => false,
            ProcessTerm::Choice(l, r) => l.is_initial() && r.is_initial(),
        }
    }

    /// All actions along one path have been executed.
    pub fn is_final(&self) -> bool {
        match self {
            ProcessTerm::Nil => true,
            ProcessTerm::Prefix(..) => false,
            ProcessTerm::ExecPrefix(_, p) => p.is_final(),
            ProcessTerm::Choice(l, r) => {
                (l.is_final() && r.is_initial()) || (l.is_initial() && r.is_final())
            }
        }
    }

    /// Reachable from an initial term by forward transitions. Every other
    /// operation of the crate requires this of its term arguments.
    pub fn is_reachable(&self) -> bool {
        match self {
            ProcessTerm::Nil => true,
            ProcessTerm::Prefix(_, p) => p.is_initial(),
            ProcessTerm::ExecPrefix(_, p) => p.is_reachable(),
            ProcessTerm::Choice(l, r) => {
                (l.is_reachable() && r.is_initial()) || (l.is_initial() && r.is_reachable())
            }
        }
    }

    /// Locates the innermost subterm at which the reachability clauses fail,
    /// or `None` when the term is reachable.
    pub fn unreachable_subterm(&self) -> Option<&ProcessTerm> {
        match self {
            ProcessTerm::Nil => None,
            ProcessTerm::Prefix(_, p) => {
                if p.is_initial() {
                    None
                } else {
                    Some(self)
                }
            }
            ProcessTerm::ExecPrefix(_, p) => p.unreachable_subterm(),
            ProcessTerm::Choice(l, r) => match (l.is_initial(), r.is_initial()) {
                (true, true) => None,
                (true, false) => r.unreachable_subterm(),
                (false, true) => l.unreachable_subterm(),
                (false, false) => Some(self),
            },
        }
    }

    /// Fails with [`Error::Unreachable`] naming the offending subterm.
    pub fn ensure_reachable(&self) -> Result<(), Error> {
        match self.unreachable_subterm() {
            None => Ok(()),
            Some(sub) => Err(Error::Unreachable {
                term: self.to_string(),
                subterm: sub.to_string(),
            }),
        }
    }

    /// The initial term this one descends from: every `a!` becomes `a`.
    pub fn origin(&self) -> ProcessTerm {
        match self {
            ProcessTerm::Nil => ProcessTerm::Nil,
            ProcessTerm::Prefix(a, p) | ProcessTerm::ExecPrefix(a, p) => {
                ProcessTerm::prefix(a.clone(), p.origin())
            }
            ProcessTerm::Choice(l, r) => ProcessTerm::choice(l.origin(), r.origin()),
        }
    }

    /// Every action name occurring in the term, decorated or not.
    pub fn alphabet(&self) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        self.collect_actions(&mut out);
        out
    }

    fn collect_actions(&self, out: &mut BTreeSet<Action>) {
        match self {
            ProcessTerm::Nil => {}
            ProcessTerm::Prefix(a, p) | ProcessTerm::ExecPrefix(a, p) => {
                out.insert(a.clone());
                p.collect_actions(out);
            }
            ProcessTerm::Choice(l, r) => {
                l.collect_actions(out);
                r.collect_actions(out);
            }
        }
    }

    /// Number of action occurrences.
    pub fn size(&self) -> usize {
        match self {
            ProcessTerm::Nil => 0,
            ProcessTerm::Prefix(_, p) | ProcessTerm::ExecPrefix(_, p) => 1 + p.size(),
            ProcessTerm::Choice(l, r) => l.size() + r.size(),
        }
    }
}

impl fmt::Debug for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
