//! Operational semantics and the generated transition systems.
//!
//! There is a single transition relation. Going forward reads a transition
//! as outgoing from its source; going backward reads the same transition as
//! incoming to its target. Only forward transitions are stored and
//! [`backstep`] gives the reverse view.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::term::{Action, ProcessTerm};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: ProcessTerm,
    pub action: Action,
    pub target: ProcessTerm,
}

/// Forward moves of a term, without the reachability check.
fn raw_step(p: &ProcessTerm) -> Vec<(Action, ProcessTerm)> {
    match p {
        ProcessTerm::Nil => Vec::new(),
        // Act_f: only an initial continuation can be entered.
        ProcessTerm::Prefix(a, cont) => {
            if cont.is_initial() {
                vec![(a.clone(), ProcessTerm::exec(a.clone(), (**cont).clone()))]
            } else {
                Vec::new()
            }
        }
        // Act_p
        ProcessTerm::ExecPrefix(a, cont) => raw_step(cont)
            .into_iter()
            .map(|(b, next)| (b, ProcessTerm::exec(a.clone(), next)))
            .collect(),
        // Cho_l / Cho_r: the branch not taken must still be initial.
        ProcessTerm::Choice(l, r) => {
            let mut out = Vec::new();
            if r.is_initial() {
                out.extend(
                    raw_step(l)
                        .into_iter()
                        .map(|(a, next)| (a, ProcessTerm::choice(next, (**r).clone()))),
                );
            }
            if l.is_initial() {
                out.extend(
                    raw_step(r)
                        .into_iter()
                        .map(|(a, next)| (a, ProcessTerm::choice((**l).clone(), next))),
                );
            }
            out
        }
    }
}

fn raw_backstep(p: &ProcessTerm) -> Option<(Action, ProcessTerm)> {
    match p {
        ProcessTerm::Nil | ProcessTerm::Prefix(..) => None,
        ProcessTerm::ExecPrefix(a, cont) => {
            if cont.is_initial() {
                Some((a.clone(), ProcessTerm::prefix(a.clone(), (**cont).clone())))
            } else {
                raw_backstep(cont).map(|(b, prev)| (b, ProcessTerm::exec(a.clone(), prev)))
            }
        }
        ProcessTerm::Choice(l, r) => {
            if !l.is_initial() {
                raw_backstep(l).map(|(a, prev)| (a, ProcessTerm::choice(prev, (**r).clone())))
            } else if !r.is_initial() {
                raw_backstep(r).map(|(a, prev)| (a, ProcessTerm::choice((**l).clone(), prev)))
            } else {
                None
            }
        }
    }
}

/// All forward moves `p --a--> p'`, ordered by action then rendered target.
pub fn step(p: &ProcessTerm) -> Result<Vec<(Action, ProcessTerm)>> {
    p.ensure_reachable()?;
    let mut moves = raw_step(p);
    moves.sort_by_cached_key(|(a, t)| (a.clone(), t.to_string()));
    moves.dedup();
    Ok(moves)
}

/// The unique incoming transition of `p`, read backward; `None` iff `p` is
/// initial.
pub fn backstep(p: &ProcessTerm) -> Result<Option<(Action, ProcessTerm)>> {
    p.ensure_reachable()?;
    Ok(raw_backstep(p))
}

/// The finite tree-shaped transition system generated by an initial term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    root: ProcessTerm,
    /// Breadth-first from the root, children in [`step`] order.
    states: Vec<ProcessTerm>,
    transitions: Vec<Transition>,
    index: HashMap<ProcessTerm, usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Option<usize>>,
}

/// Builds the transition system of `origin(p)`, so `p` is one of its states
/// and moves undone past `p` can be redone along other branches.
pub fn build_lts(p: &ProcessTerm) -> Result<Lts> {
    p.ensure_reachable()?;
    let root = p.origin();
    let mut states = vec![root.clone()];
    let mut index = HashMap::from([(root.clone(), 0)]);
    let mut transitions = Vec::new();
    let mut succ = vec![Vec::new()];
    let mut pred = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut moves = raw_step(&states[i]);
        moves.sort_by_cached_key(|(a, t)| (a.clone(), t.to_string()));
        for (a, target) in moves {
            // The tree shape guarantees every target is new.
            debug_assert!(!index.contains_key(&target));
            let j = states.len();
            states.push(target.clone());
            index.insert(target.clone(), j);
            succ.push(Vec::new());
            pred.push(Some(transitions.len()));
            succ[i].push(transitions.len());
            transitions.push(Transition { source: states[i].clone(), action: a, target });
            queue.push_back(j);
        }
    }
    Ok(Lts { root, states, transitions, index, succ, pred })
}

impl Lts {
    pub fn root(&self) -> &ProcessTerm {
        &self.root
    }

    /// States in breadth-first order from the root.
    pub fn states(&self) -> &[ProcessTerm] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn contains(&self, p: &ProcessTerm) -> bool {
        self.index.contains_key(p)
    }

    pub fn state_index(&self, p: &ProcessTerm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn outgoing(&self, p: &ProcessTerm) -> impl Iterator<Item = &Transition> {
        let ids = self.index.get(p).map(|&i| self.succ[i].as_slice()).unwrap_or(&[]);
        ids.iter().map(move |&t| &self.transitions[t])
    }

    pub fn incoming(&self, p: &ProcessTerm) -> Option<&Transition> {
        let i = *self.index.get(p)?;
        self.pred[i].map(|t| &self.transitions[t])
    }

    /// Length of the longest forward path from the root.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.states.len()];
        for t in &self.transitions {
            let (s, d) = (self.index[&t.source], self.index[&t.target]);
            depth[d] = depth[s] + 1;
        }
        depth.into_iter().max().unwrap_or(0)
    }

    pub fn alphabet(&self) -> BTreeSet<Action> {
        self.root.alphabet()
    }
}

/// Label of a weak move: `TauStar` is `=tau*=>`, `Visible(a)` is
/// `=tau*=> --a--> =tau*=>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeakLabel {
    TauStar,
    Visible(Action),
}

#[derive(Debug, Clone)]
pub struct SaturatedLts {
    pub base: Lts,
    pub weak_forward: BTreeMap<ProcessTerm, BTreeSet<(WeakLabel, ProcessTerm)>>,
    pub weak_backward: BTreeMap<ProcessTerm, BTreeSet<(WeakLabel, ProcessTerm)>>,
}

fn tau_closure(lts: &Lts, from: usize) -> Vec<usize> {
    let mut out = vec![from];
    let mut k = 0;
    while k < out.len() {
        let s = out[k];
        for &t in &lts.succ[s] {
            if lts.transitions[t].action.is_tau() {
                out.push(lts.index[&lts.transitions[t].target]);
            }
        }
        k += 1;
    }
    out
}

/// Eager weak closure of a transition system.
pub fn weak_saturate(l: &Lts) -> SaturatedLts {
    let closures: Vec<Vec<usize>> = (0..l.states.len()).map(|s| tau_closure(l, s)).collect();
    let mut weak_forward: BTreeMap<ProcessTerm, BTreeSet<(WeakLabel, ProcessTerm)>> = BTreeMap::new();
    let mut weak_backward: BTreeMap<ProcessTerm, BTreeSet<(WeakLabel, ProcessTerm)>> = BTreeMap::new();
    for (s, closure) in closures.iter().enumerate() {
        let mut moves = BTreeSet::new();
        for &mid in closure {
            moves.insert((WeakLabel::TauStar, l.states[mid].clone()));
            for &t in &l.succ[mid] {
                let tr = &l.transitions[t];
                if tr.action.is_tau() {
                    continue;
                }
                for &end in &closures[l.index[&tr.target]] {
                    moves.insert((WeakLabel::Visible(tr.action.clone()), l.states[end].clone()));
                }
            }
        }
        for (label, target) in &moves {
            weak_backward
                .entry(target.clone())
                .or_default()
                .insert((label.clone(), l.states[s].clone()));
        }
        weak_forward.insert(l.states[s].clone(), moves);
    }
    SaturatedLts { base: l.clone(), weak_forward, weak_backward }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering. Nodes are numbered in breadth-first order and labelled
/// with their terms; the root is drawn with a double border and the
/// highlighted state, if any, is filled.
pub fn export_dot(l: &Lts, highlight: Option<&ProcessTerm>) -> Result<String> {
    let marked = match highlight {
        Some(h) => Some(l.state_index(h).ok_or_else(|| Error::UnknownState(h.to_string()))?),
        None => None,
    };
    let mut out = String::from("digraph lts {\n    rankdir=TB;\n    node [shape=box];\n");
    for (i, s) in l.states.iter().enumerate() {
        let mut attrs = format!("label=\"{}\"", dot_escape(&s.to_string()));
        if i == 0 {
            attrs.push_str(", peripheries=2");
        }
        if marked == Some(i) {
            attrs.push_str(", style=filled, fillcolor=lightblue");
        }
        writeln!(out, "    s{i} [{attrs}];").unwrap();
    }
    for t in &l.transitions {
        let (s, d) = (l.index[&t.source], l.index[&t.target]);
        writeln!(out, "    s{s} -> s{d} [label=\"{}\"];", dot_escape(t.action.name())).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
