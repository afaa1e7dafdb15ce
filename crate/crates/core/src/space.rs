//! Indexed view of one or more transition systems.
//!
//! The decision procedures, the formula evaluator and the verification
//! harness all work over a `StateSpace`: the disjoint union of the trees of
//! several initial terms, with integer state ids, interned actions and the
//! weak (tau-saturated) move relations precomputed in both directions.
//! Equivalence of two states only depends on their own tree, so deciding over
//! the union gives the same answer as deciding each pair separately.

use std::collections::HashMap;

use crate::error::Result;
use crate::lts::{build_lts, Lts};
use crate::term::{Action, ProcessTerm};

pub type StateId = usize;
pub type ActionId = u32;

#[derive(Debug, Clone)]
pub struct StateSpace {
    terms: Vec<ProcessTerm>,
    index: HashMap<ProcessTerm, StateId>,
    initial: Vec<bool>,
    tree: Vec<usize>,
    roots: Vec<StateId>,
    heights: Vec<usize>,
    actions: Vec<Action>,
    action_ids: HashMap<Action, ActionId>,
    tau: Option<ActionId>,
    succ: Vec<Vec<(ActionId, StateId)>>,
    pred: Vec<Option<(ActionId, StateId)>>,
    tau_closure: Vec<Vec<StateId>>,
    tau_ancestors: Vec<Vec<StateId>>,
    weak_succ: Vec<Vec<(ActionId, StateId)>>,
    weak_pred: Vec<Vec<(ActionId, StateId)>>,
}

impl StateSpace {
    /// Union of the given systems. Systems sharing a root are merged.
    pub fn new<'a>(systems: impl IntoIterator<Item = &'a Lts>) -> Self {
        let mut space = StateSpace {
            terms: Vec::new(),
            index: HashMap::new(),
            initial: Vec::new(),
            tree: Vec::new(),
            roots: Vec::new(),
            heights: Vec::new(),
            actions: Vec::new(),
            action_ids: HashMap::new(),
            tau: None,
            succ: Vec::new(),
            pred: Vec::new(),
            tau_closure: Vec::new(),
            tau_ancestors: Vec::new(),
            weak_succ: Vec::new(),
            weak_pred: Vec::new(),
        };
        for lts in systems {
            if space.index.contains_key(lts.root()) {
                continue;
            }
            space.add_tree(lts);
        }
        space.saturate();
        space
    }

    /// Builds the system of every term's origin and takes their union.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = &'a ProcessTerm>) -> Result<Self> {
        let mut systems = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for t in terms {
            t.ensure_reachable()?;
            if seen.insert(t.origin()) {
                systems.push(build_lts(t)?);
            }
        }
        Ok(StateSpace::new(systems.iter()))
    }

    fn intern(&mut self, a: &Action) -> ActionId {
        if let Some(&id) = self.action_ids.get(a) {
            return id;
        }
        let id = self.actions.len() as ActionId;
        self.actions.push(a.clone());
        self.action_ids.insert(a.clone(), id);
        if a.is_tau() {
            self.tau = Some(id);
        }
        id
    }

    fn add_tree(&mut self, lts: &Lts) {
        let tree = self.roots.len();
        let base = self.terms.len();
        for s in lts.states() {
            self.index.insert(s.clone(), self.terms.len());
            self.initial.push(s.is_initial());
            self.terms.push(s.clone());
            self.tree.push(tree);
            self.succ.push(Vec::new());
            self.pred.push(None);
        }
        for t in lts.transitions() {
            let a = self.intern(&t.action);
            let s = self.index[&t.source];
            let d = self.index[&t.target];
            self.succ[s].push((a, d));
            self.pred[d] = Some((a, s));
        }
        self.roots.push(base);
        self.heights.push(lts.height());
    }

    fn saturate(&mut self) {
        let n = self.terms.len();
        let tau = self.tau;
        // States of a tree are stored parents-first, so a reverse sweep sees
        // every child's closure before its parent's.
        let mut closure: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in (0..n).rev() {
            let mut c = vec![s];
            for &(a, d) in &self.succ[s] {
                if Some(a) == tau {
                    c.extend_from_slice(&closure[d]);
                }
            }
            closure[s] = c;
        }
        let mut ancestors: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n {
            let mut c = vec![s];
            if let Some((a, p)) = self.pred[s] {
                if Some(a) == tau {
                    c.extend_from_slice(&ancestors[p]);
                }
            }
            ancestors[s] = c;
        }
        let mut weak_succ: Vec<Vec<(ActionId, StateId)>> = vec![Vec::new(); n];
        let mut weak_pred: Vec<Vec<(ActionId, StateId)>> = vec![Vec::new(); n];
        for s in 0..n {
            let mut moves = Vec::new();
            for &mid in &closure[s] {
                for &(a, d) in &self.succ[mid] {
                    if Some(a) == tau {
                        continue;
                    }
                    moves.extend(closure[d].iter().map(|&end| (a, end)));
                }
            }
            moves.sort_unstable();
            moves.dedup();
            for &(a, end) in &moves {
                weak_pred[end].push((a, s));
            }
            weak_succ[s] = moves;
        }
        for m in &mut weak_pred {
            m.sort_unstable();
            m.dedup();
        }
        self.tau_closure = closure;
        self.tau_ancestors = ancestors;
        self.weak_succ = weak_succ;
        self.weak_pred = weak_pred;
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, s: StateId) -> &ProcessTerm {
        &self.terms[s]
    }

    pub fn terms(&self) -> &[ProcessTerm] {
        &self.terms
    }

    pub fn id(&self, p: &ProcessTerm) -> Option<StateId> {
        self.index.get(p).copied()
    }

    pub fn is_initial(&self, s: StateId) -> bool {
        self.initial[s]
    }

    pub fn roots(&self) -> &[StateId] {
        &self.roots
    }

    /// Index of the tree (in insertion order) that contains `s`.
    pub fn tree_of(&self, s: StateId) -> usize {
        self.tree[s]
    }

    pub fn tree_height(&self, tree: usize) -> usize {
        self.heights[tree]
    }

    /// Every state of the tree `tree`; states of one tree are contiguous.
    pub fn tree_states(&self, tree: usize) -> std::ops::Range<StateId> {
        let start = self.roots[tree];
        let end = self.roots.get(tree + 1).copied().unwrap_or(self.terms.len());
        start..end
    }

    pub fn action(&self, a: ActionId) -> &Action {
        &self.actions[a as usize]
    }

    /// Number of distinct actions; ids run from 0 to this value.
    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn action_id(&self, a: &Action) -> Option<ActionId> {
        self.action_ids.get(a).copied()
    }

    pub fn tau(&self) -> Option<ActionId> {
        self.tau
    }

    pub fn is_tau(&self, a: ActionId) -> bool {
        Some(a) == self.tau
    }

    pub fn succ(&self, s: StateId) -> &[(ActionId, StateId)] {
        &self.succ[s]
    }

    pub fn pred(&self, s: StateId) -> Option<(ActionId, StateId)> {
        self.pred[s]
    }

    /// States `t` with `s =tau*=> t`, `s` itself first.
    pub fn tau_closure(&self, s: StateId) -> &[StateId] {
        &self.tau_closure[s]
    }

    /// States `t` with `t =tau*=> s`, `s` itself first.
    pub fn tau_ancestors(&self, s: StateId) -> &[StateId] {
        &self.tau_ancestors[s]
    }

    /// Visible weak moves `s =tau*=> --a--> =tau*=> t`.
    pub fn weak_succ(&self, s: StateId) -> &[(ActionId, StateId)] {
        &self.weak_succ[s]
    }

    /// Visible weak moves read backward: `t =tau*=> --a--> =tau*=> s`.
    pub fn weak_pred(&self, s: StateId) -> &[(ActionId, StateId)] {
        &self.weak_pred[s]
    }
}
