//! Signature-based partition refinement, used as an independent oracle for
//! the fixpoint procedure.

use std::collections::HashMap;

use super::EquivKind;
use crate::error::{Error, Result};
use crate::lts::Lts;
use crate::space::StateSpace;
use crate::term::ProcessTerm;

// Move tags keep the four move relations apart inside one signature.
const FWD: u8 = 0;
const WEAK_FWD: u8 = 1;
const BWD: u8 = 2;
const WEAK_BWD: u8 = 3;
// Label used for `tau*` moves, distinct from every interned action.
const TAU_STAR: u32 = u32::MAX;

/// (move tag, label, target block), sorted and deduplicated.
type Signature = Vec<(u8, u32, u32)>;

/// Block number of every state of `space` under the equivalence `kind`.
pub fn partition_classes(kind: EquivKind, space: &StateSpace) -> Result<Vec<u32>> {
    if kind == EquivKind::BB {
        return Err(Error::Unsupported(
            "partition refinement is not defined for BB; use the fixpoint".into(),
        ));
    }
    let n = space.len();
    let mut block: Vec<u32> = (0..n)
        .map(|s| u32::from(kind.past_sensitive() && !space.is_initial(s)))
        .collect();
    let mut count = if kind.past_sensitive() && n > 0 { count_blocks(&block) } else { 1 };
    loop {
        let mut ids: HashMap<(u32, Signature), u32> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let sig = (block[s], signature(kind, space, &block, s));
            let fresh = ids.len() as u32;
            next.push(*ids.entry(sig).or_insert(fresh));
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            return Ok(block);
        }
        count = new_count;
    }
}

fn count_blocks(block: &[u32]) -> usize {
    let mut seen: Vec<u32> = block.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn signature(kind: EquivKind, space: &StateSpace, block: &[u32], s: usize) -> Signature {
    let mut sig = Vec::new();
    if kind.forward() {
        if kind.weak() {
            sig.extend(space.tau_closure(s).iter().map(|&t| (WEAK_FWD, TAU_STAR, block[t])));
            sig.extend(space.weak_succ(s).iter().map(|&(a, t)| (WEAK_FWD, a, block[t])));
        } else {
            sig.extend(space.succ(s).iter().map(|&(a, t)| (FWD, a, block[t])));
        }
    }
    if kind.reverse() {
        if kind.weak() {
            sig.extend(space.tau_ancestors(s).iter().map(|&t| (WEAK_BWD, TAU_STAR, block[t])));
            sig.extend(space.weak_pred(s).iter().map(|&(a, t)| (WEAK_BWD, a, block[t])));
        } else if let Some((a, t)) = space.pred(s) {
            sig.push((BWD, a, block[t]));
        }
    }
    sig.sort_unstable();
    sig.dedup();
    sig
}

/// Equivalence classes of `kind` over the states of both systems, each block
/// sorted and the blocks ordered by their smallest member.
pub fn refine_partition(kind: EquivKind, l1: &Lts, l2: &Lts) -> Result<Vec<Vec<ProcessTerm>>> {
    let space = StateSpace::new([l1, l2]);
    let classes = partition_classes(kind, &space)?;
    let mut blocks: HashMap<u32, Vec<ProcessTerm>> = HashMap::new();
    for (s, &b) in classes.iter().enumerate() {
        blocks.entry(b).or_default().push(space.term(s).clone());
    }
    let mut out: Vec<Vec<ProcessTerm>> = blocks.into_values().collect();
    for b in &mut out {
        b.sort();
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::build_lts;
    use crate::parser::parse_term;

    fn t(s: &str) -> ProcessTerm {
        parse_term(s).unwrap()
    }

    fn same_block(kind: EquivKind, p: &str, q: &str) -> bool {
        let (p, q) = (t(p), t(q));
        let blocks =
            refine_partition(kind, &build_lts(&p).unwrap(), &build_lts(&q).unwrap()).unwrap();
        blocks.iter().any(|b| b.contains(&p) && b.contains(&q))
    }

    #[test]
    fn examples() {
        let blocks = refine_partition(
            EquivKind::FB,
            &build_lts(&t("a.0 + a.0")).unwrap(),
            &build_lts(&t("a.0")).unwrap(),
        )
        .unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0], vec![t("a.0"), t("a.0 + a.0")]);
        assert!(same_block(EquivKind::FBps, "a1!.b.0", "a2!.b.0"));
        assert!(same_block(EquivKind::RB, "a.0", "0"));
        assert!(!same_block(EquivKind::FB, "a.0", "0"));
        assert!(same_block(EquivKind::WFB, "tau.a.0", "a.0"));
        assert!(!same_block(EquivKind::WFBps, "tau.a.0", "a.0"));
    }

    #[test]
    fn branching_is_rejected() {
        let l = build_lts(&t("a.0")).unwrap();
        assert!(refine_partition(EquivKind::BB, &l, &l).is_err());
    }
}
