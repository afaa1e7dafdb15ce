//! Property checkers for the stuttering and cross properties of weak
//! forward-reverse bisimilarity. Both are expected to find nothing.

use super::{EquivKind, Fixpoint};
use crate::lts::Lts;
use crate::space::{StateId, StateSpace};
use crate::term::ProcessTerm;

/// Every tau path `s0 -tau-> ... -tau-> sn` (n >= 1) inside one tree with
/// related endpoints but some intermediate state unrelated to `s0`.
/// With `noninitial_start` only paths whose first state is non-initial are
/// examined.
pub fn stuttering_violations_in(
    space: &StateSpace,
    fix: &Fixpoint,
    noninitial_start: bool,
) -> Vec<Vec<StateId>> {
    let mut out = Vec::new();
    for s0 in 0..space.len() {
        if noninitial_start && space.is_initial(s0) {
            continue;
        }
        for &sn in &space.tau_closure(s0)[1..] {
            if !fix.related(s0, sn) {
                continue;
            }
            let mut path = vec![sn];
            let mut cur = sn;
            while cur != s0 {
                cur = space.pred(cur).expect("tau path leads back to its start").1;
                path.push(cur);
            }
            path.reverse();
            if path.iter().any(|&si| !fix.related(s0, si)) {
                out.push(path);
            }
        }
    }
    out
}

fn to_terms(space: &StateSpace, paths: Vec<Vec<StateId>>) -> Vec<Vec<ProcessTerm>> {
    paths
        .into_iter()
        .map(|p| p.into_iter().map(|s| space.term(s).clone()).collect())
        .collect()
}

/// Stuttering check for weak forward-reverse bisimilarity on one system.
pub fn stuttering_violations(l: &Lts) -> Vec<Vec<ProcessTerm>> {
    let space = StateSpace::new([l]);
    let fix = Fixpoint::compute(EquivKind::WFRB, &space);
    to_terms(&space, stuttering_violations_in(&space, &fix, false))
}

/// Stuttering check for the past-sensitive variant, on chains that start at
/// a non-initial state.
pub fn stuttering_violations_ps(l: &Lts) -> Vec<Vec<ProcessTerm>> {
    let space = StateSpace::new([l]);
    let fix = Fixpoint::compute(EquivKind::WFRBps, &space);
    to_terms(&space, stuttering_violations_in(&space, &fix, true))
}

/// Quadruples `(p1', p1'', p2', p2'')` with `p1' =tau*=> p1''` in tree `t1`,
/// `p2' =tau*=> p2''` in tree `t2`, `p1' ~ p2''`, `p1'' ~ p2'` and yet
/// `p1''` unrelated to `p2''`. Vacuous unless the roots are related.
pub fn cross_violations_in(
    space: &StateSpace,
    fix: &Fixpoint,
    t1: usize,
    t2: usize,
) -> Vec<[StateId; 4]> {
    let mut out = Vec::new();
    if !fix.related(space.roots()[t1], space.roots()[t2]) {
        return out;
    }
    let tau_pairs = |t: usize| -> Vec<(StateId, StateId)> {
        space
            .tree_states(t)
            .flat_map(|p| space.tau_closure(p).iter().map(move |&q| (p, q)))
            .collect()
    };
    let right = tau_pairs(t2);
    for (p1, p1b) in tau_pairs(t1) {
        for &(p2, p2b) in &right {
            if fix.related(p1, p2b) && fix.related(p1b, p2) && !fix.related(p1b, p2b) {
                out.push([p1, p1b, p2, p2b]);
            }
        }
    }
    out
}

/// Cross check for weak forward-reverse bisimilarity on two systems.
pub fn cross_violations(l1: &Lts, l2: &Lts) -> Vec<[ProcessTerm; 4]> {
    let space = StateSpace::new([l1, l2]);
    let fix = Fixpoint::compute(EquivKind::WFRB, &space);
    let t1 = space.tree_of(space.id(l1.root()).unwrap());
    let t2 = space.tree_of(space.id(l2.root()).unwrap());
    cross_violations_in(&space, &fix, t1, t2)
        .into_iter()
        .map(|q| q.map(|s| space.term(s).clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::build_lts;
    use crate::parser::parse_term;

    fn lts(s: &str) -> Lts {
        build_lts(&parse_term(s).unwrap()).unwrap()
    }

    #[test]
    fn stuttering_examples() {
        for p in ["tau.tau.a.0", "a.0", "c.(tau.a.0 + b.0)", "tau.a.0 + a.0"] {
            assert!(stuttering_violations(&lts(p)).is_empty(), "{p}");
            assert!(stuttering_violations_ps(&lts(p)).is_empty(), "{p}");
        }
    }

    #[test]
    fn cross_examples() {
        assert!(cross_violations(&lts("tau.a.0"), &lts("a.0")).is_empty());
        assert!(cross_violations(&lts("0"), &lts("0")).is_empty());
        let p = lts("tau.a.0 + b.0");
        assert!(cross_violations(&p, &p).is_empty());
    }
}
