//! Greatest-fixpoint computation of each bisimilarity, transcribing the
//! defining clauses one by one.

use log::debug;

use super::EquivKind;
use crate::space::{StateId, StateSpace};

/// Does challenger `x` have a move that `y` cannot answer within `rel`?
///
/// This is one direction of the clauses of `kind`; a symmetric relation is a
/// bisimulation iff no pair violates them in either orientation.
pub(crate) fn violates<R>(kind: EquivKind, space: &StateSpace, x: StateId, y: StateId, rel: R) -> bool
where
    R: Fn(StateId, StateId) -> bool,
{
    if kind == EquivKind::BB {
        return violates_branching(space, x, y, &rel);
    }
    if kind.past_sensitive() && space.is_initial(x) != space.is_initial(y) {
        return true;
    }
    if kind.forward() {
        for &(a, x1) in space.succ(x) {
            let answered = if !kind.weak() {
                space.succ(y).iter().any(|&(b, y1)| b == a && rel(x1, y1))
            } else if space.is_tau(a) {
                space.tau_closure(y).iter().any(|&y1| rel(x1, y1))
            } else {
                space.weak_succ(y).iter().any(|&(b, y1)| b == a && rel(x1, y1))
            };
            if !answered {
                return true;
            }
        }
    }
    if kind.reverse() {
        if let Some((a, x0)) = space.pred(x) {
            let answered = if !kind.weak() {
                matches!(space.pred(y), Some((b, y0)) if b == a && rel(x0, y0))
            } else if space.is_tau(a) {
                space.tau_ancestors(y).iter().any(|&y0| rel(x0, y0))
            } else {
                space.weak_pred(y).iter().any(|&(b, y0)| b == a && rel(x0, y0))
            };
            if !answered {
                return true;
            }
        }
    }
    false
}

fn violates_branching<R>(space: &StateSpace, x: StateId, y: StateId, rel: &R) -> bool
where
    R: Fn(StateId, StateId) -> bool,
{
    for &(a, x1) in space.succ(x) {
        // Either an inert tau step, or y idles along tau* into a state still
        // related to x and then performs a itself.
        let inert = space.is_tau(a) && rel(x1, y);
        let answered = inert
            || space.tau_closure(y).iter().any(|&y_bar| {
                rel(x, y_bar) && space.succ(y_bar).iter().any(|&(b, y1)| b == a && rel(x1, y1))
            });
        if !answered {
            return true;
        }
    }
    false
}

const KEPT: u16 = u16::MAX;

/// The greatest bisimulation of one kind over a whole state space, together
/// with the round at which every other pair was discarded.
///
/// Round 0 discards pairs that disagree on initiality (past-sensitive kinds
/// only). Round `r >= 1` discards the pairs that violate a clause with respect
/// to the relation left after round `r - 1`, so every discarded pair has a
/// challenge all of whose answers were discarded strictly earlier.
#[derive(Debug, Clone)]
pub struct Fixpoint {
    kind: EquivKind,
    n: usize,
    removed: Vec<u16>,
    rounds: u16,
}

impl Fixpoint {
    pub fn compute(kind: EquivKind, space: &StateSpace) -> Self {
        let n = space.len();
        let mut removed = vec![KEPT; n * n];
        let mut live: Vec<(u32, u32)> = Vec::with_capacity(n * (n + 1) / 2);
        for x in 0..n {
            for y in x..n {
                if kind.past_sensitive() && space.is_initial(x) != space.is_initial(y) {
                    removed[x * n + y] = 0;
                    removed[y * n + x] = 0;
                } else if x != y {
                    live.push((x as u32, y as u32));
                }
            }
        }
        let mut round: u16 = 0;
        loop {
            round += 1;
            let rel = |a: StateId, b: StateId| removed[a * n + b] == KEPT;
            let dropped: Vec<(u32, u32)> = live
                .iter()
                .copied()
                .filter(|&(x, y)| {
                    let (x, y) = (x as usize, y as usize);
                    violates(kind, space, x, y, rel) || violates(kind, space, y, x, rel)
                })
                .collect();
            if dropped.is_empty() {
                break;
            }
            assert!(round < KEPT, "fixpoint did not converge");
            for &(x, y) in &dropped {
                let (x, y) = (x as usize, y as usize);
                removed[x * n + y] = round;
                removed[y * n + x] = round;
            }
            live.retain(|&(x, y)| removed[x as usize * n + y as usize] == KEPT);
            debug!("{kind}: round {round} dropped {} pairs, {} left", dropped.len(), live.len());
        }
        Fixpoint { kind, n, removed, rounds: round - 1 }
    }

    pub fn kind(&self) -> EquivKind {
        self.kind
    }

    pub fn related(&self, x: StateId, y: StateId) -> bool {
        self.removed[x * self.n + y] == KEPT
    }

    /// Round at which the pair was discarded, `None` if it is related.
    pub fn removed_at(&self, x: StateId, y: StateId) -> Option<u16> {
        match self.removed[x * self.n + y] {
            KEPT => None,
            r => Some(r),
        }
    }

    /// Number of refinement rounds that discarded something.
    pub fn rounds(&self) -> u16 {
        self.rounds
    }

    /// Equivalence class id of every state (smallest member id).
    pub fn classes(&self) -> Vec<StateId> {
        let mut class = vec![usize::MAX; self.n];
        for x in 0..self.n {
            if class[x] != usize::MAX {
                continue;
            }
            for (y, c) in class.iter_mut().enumerate().skip(x) {
                if self.related(x, y) {
                    *c = x;
                }
            }
        }
        class
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;
    use crate::term::ProcessTerm;

    fn t(s: &str) -> ProcessTerm {
        parse_term(s).unwrap()
    }

    fn related(kind: EquivKind, p: &str, q: &str) -> bool {
        let (p, q) = (t(p), t(q));
        let space = StateSpace::from_terms([&p, &q]).unwrap();
        let fix = Fixpoint::compute(kind, &space);
        fix.related(space.id(&p).unwrap(), space.id(&q).unwrap())
    }

    #[test]
    fn strong_examples() {
        assert!(related(EquivKind::FB, "a!.0", "0"));
        assert!(!related(EquivKind::RB, "a!.0", "0"));
        assert!(related(EquivKind::RB, "a.0", "0"));
        assert!(!related(EquivKind::FB, "a.0", "0"));
        assert!(related(EquivKind::FRB, "a.0 + a.0", "a.0"));
        assert!(!related(EquivKind::FRB, "a!.0 + c.0", "a!.0"));
    }

    #[test]
    fn rounds_are_well_founded() {
        let p = t("a.(b.0 + c.0)");
        let q = t("a.b.0 + a.c.0");
        let space = StateSpace::from_terms([&p, &q]).unwrap();
        let fix = Fixpoint::compute(EquivKind::FB, &space);
        let (x, y) = (space.id(&p).unwrap(), space.id(&q).unwrap());
        assert_eq!(fix.removed_at(x, y), Some(2));
        assert_eq!(fix.rounds(), 2);
        let classes = fix.classes();
        assert_eq!(classes[x], x);
        assert_ne!(classes[y], x);
    }

    #[test]
    fn past_sensitive_round_zero() {
        let p = t("a!.b.0");
        let q = t("b.0");
        let space = StateSpace::from_terms([&p, &q]).unwrap();
        let fix = Fixpoint::compute(EquivKind::FBps, &space);
        assert_eq!(fix.removed_at(space.id(&p).unwrap(), space.id(&q).unwrap()), Some(0));
    }
}
