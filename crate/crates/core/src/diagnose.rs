//! Distinguishing formulas and the brute-force check that each fragment
//! characterizes its bisimilarity.
//!
//! A distinguishing formula for an unrelated pair follows the shape of the
//! bisimulation game: one side has a move such that every answer of the other
//! side leads to an unrelated pair. The formula is that move's modality over
//! the conjunction of the formulas separating those pairs, negated when the
//! challenger is the right-hand side. Formulas are settled in order of depth,
//! so each pair gets a shallowest formula of this shape.

use std::collections::{BTreeSet, HashMap};

use log::{debug, info};
use serde_json::{json, Value};

use crate::equiv::{EquivKind, Fixpoint};
use crate::error::{Error, Result};
use crate::logic::{depth, Evaluator, Formula, FragmentSpec, Node, NodeId};
use crate::space::{ActionId, StateId, StateSpace};
use crate::term::{Action, ProcessTerm};

const UNKNOWN: u32 = u32::MAX;
// Safety net for the level loop; real runs finish within a few dozen levels.
const LEVEL_LIMIT: usize = 1 << 12;

/// Builds distinguishing formulas for all unrelated pairs of one state space.
///
/// Formulas are found level by level: level `d` settles every pair that has
/// a formula of depth `d` built from a single challenge over formulas already
/// settled at lower levels. Each pair therefore gets a formula of least depth
/// among those of this shape.
pub struct Distinguisher<'a> {
    space: &'a StateSpace,
    fix: &'a Fixpoint,
    kind: EquivKind,
    eval: Evaluator<'a>,
    /// `pos[x * n + y]`: a modal formula (or `init`) true at `x`, false at `y`.
    pos: Vec<u32>,
    /// `sep[x * n + y]`: the chosen formula true at `x`, false at `y`.
    sep: Vec<u32>,
}

impl<'a> Distinguisher<'a> {
    pub fn new(space: &'a StateSpace, fix: &'a Fixpoint) -> Result<Self> {
        let kind = fix.kind();
        if kind == EquivKind::BB {
            return Err(Error::Unsupported("no distinguishing formulas for BB".into()));
        }
        let n = space.len();
        let mut d = Distinguisher {
            space,
            fix,
            kind,
            eval: Evaluator::new(space),
            pos: vec![UNKNOWN; n * n],
            sep: vec![UNKNOWN; n * n],
        };
        if !matches!(kind, EquivKind::RB | EquivKind::WRB) {
            d.settle();
        }
        Ok(d)
    }

    /// The evaluator holding every formula built so far.
    pub fn evaluator(&self) -> &Evaluator<'a> {
        &self.eval
    }

    /// Interned formula that holds at `x` and fails at `y` (or, for the
    /// reverse kinds, holds at exactly one of them). `None` iff related.
    pub fn node(&mut self, x: StateId, y: StateId) -> Option<NodeId> {
        if self.fix.related(x, y) {
            return None;
        }
        let key = x * self.space.len() + y;
        if self.sep[key] == UNKNOWN && matches!(self.kind, EquivKind::RB | EquivKind::WRB) {
            if let Some(id) = self.trace_formula(x, y) {
                self.sep[key] = id as u32;
            }
        }
        match self.sep[key] {
            UNKNOWN => None,
            id => Some(id as NodeId),
        }
    }

    pub fn formula(&mut self, x: StateId, y: StateId) -> Option<Formula> {
        self.node(x, y).map(|id| self.eval.formula(id))
    }

    fn settled(&self, table: &[u32], key: usize, max_depth: usize) -> Option<NodeId> {
        match table[key] {
            UNKNOWN => None,
            id if self.eval.depth(id as NodeId) <= max_depth => Some(id as NodeId),
            _ => None,
        }
    }

    fn settle(&mut self) {
        let n = self.space.len();
        let mut pending: Vec<(StateId, StateId)> = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if !self.fix.related(x, y) {
                    pending.push((x, y));
                }
            }
        }
        let mut answers = Vec::new();
        let mut parts = Vec::new();
        let mut level = 1;
        while !pending.is_empty() && level <= LEVEL_LIMIT {
            for &(x, y) in &pending {
                for (a, b) in [(x, y), (y, x)] {
                    if self.pos[a * n + b] == UNKNOWN {
                        if let Some(id) = self.challenge(a, b, level, &mut answers, &mut parts) {
                            self.pos[a * n + b] = id as u32;
                        }
                    }
                }
                for (a, b) in [(x, y), (y, x)] {
                    if self.sep[a * n + b] != UNKNOWN {
                        continue;
                    }
                    let id = if let Some(p) = self.settled(&self.pos, a * n + b, level) {
                        p
                    } else if let Some(q) = self.settled(&self.pos, b * n + a, level - 1) {
                        self.eval.mk(Node::Not(q))
                    } else {
                        continue;
                    };
                    self.sep[a * n + b] = id as u32;
                }
            }
            pending.retain(|&(x, y)| self.sep[x * n + y] == UNKNOWN || self.sep[y * n + x] == UNKNOWN);
            debug!("{}: level {level}, {} pairs unsettled", self.kind, pending.len());
            level += 1;
        }
    }

    /// A formula of depth at most `limit`, true at `x` and false at `y`:
    /// `init`, or the modality of a move of `x` over the conjunction of the
    /// settled formulas separating its target from every answer of `y`.
    fn challenge(
        &mut self,
        x: StateId,
        y: StateId,
        limit: usize,
        answers: &mut Vec<StateId>,
        parts: &mut Vec<NodeId>,
    ) -> Option<NodeId> {
        let sp = self.space;
        let kind = self.kind;
        if kind.past_sensitive() && sp.is_initial(x) && !sp.is_initial(y) {
            return Some(self.eval.mk(Node::Init));
        }
        let n = sp.len();
        let mut best: Option<(Modality, ActionId, StateId, Vec<NodeId>)> = None;
        let mut try_move = |this: &Self, modality: Modality, a: ActionId, x1: StateId, answers: &[StateId]| {
            parts.clear();
            let mut deepest = 0;
            for &y1 in answers {
                match this.settled(&this.sep, x1 * n + y1, limit.saturating_sub(2)) {
                    Some(id) => {
                        deepest = deepest.max(this.eval.depth(id));
                        parts.push(id);
                    }
                    None => return,
                }
            }
            parts.sort_unstable();
            parts.dedup();
            if parts.len() > 1 {
                deepest = this.trim(parts, answers);
            }
            let body = match parts.len() {
                0 => 1,
                k => deepest + conjunction_depth(k),
            };
            if 1 + body > limit {
                return;
            }
            let better = match &best {
                None => true,
                Some((_, ba, bt, _)) => {
                    (sp.action(a), sp.term(x1).to_string()) < (sp.action(*ba), sp.term(*bt).to_string())
                }
            };
            if better {
                best = Some((modality, a, x1, parts.clone()));
            }
        };
        // Weak kinds challenge with saturated moves: a strong step is one of
        // them, and a weak move matches the weak modality just as well.
        if kind.forward() && !kind.weak() {
            for &(a, x1) in sp.succ(x) {
                answers.clear();
                answers.extend(sp.succ(y).iter().filter(|m| m.0 == a).map(|m| m.1));
                try_move(self, Modality::Strong, a, x1, answers);
            }
        }
        if kind.forward() && kind.weak() {
            if let Some(tau) = sp.tau() {
                for &x1 in &sp.tau_closure(x)[1..] {
                    try_move(self, Modality::WeakTau, tau, x1, sp.tau_closure(y));
                }
            }
            for &(a, x1) in sp.weak_succ(x) {
                try_move(self, Modality::Weak, a, x1, labelled(sp.weak_succ(y), a, answers));
            }
        }
        if kind.reverse() && !kind.weak() {
            if let Some((a, x0)) = sp.pred(x) {
                answers.clear();
                answers.extend(sp.pred(y).filter(|m| m.0 == a).map(|m| m.1));
                try_move(self, Modality::Back, a, x0, answers);
            }
        }
        if kind.reverse() && kind.weak() {
            if let Some(tau) = sp.tau() {
                for &x0 in &sp.tau_ancestors(x)[1..] {
                    try_move(self, Modality::WeakBackTau, tau, x0, sp.tau_ancestors(y));
                }
            }
            for &(a, x0) in sp.weak_pred(x) {
                try_move(self, Modality::WeakBack, a, x0, labelled(sp.weak_pred(y), a, answers));
            }
        }
        let (modality, a, _, parts) = best?;
        let body = self.eval.mk_conjunction(&parts);
        Some(self.eval.mk(modality.node(a, body)))
    }

    /// Shrinks `parts` (each true at the challenger's target) to a shallow
    /// subset that still fails at every answer. Returns its deepest member.
    fn trim(&self, parts: &mut Vec<NodeId>, answers: &[StateId]) -> usize {
        let ev = &self.eval;
        let misses = |p: NodeId, s: StateId| !ev.set(p).contains(s);
        let cost = |ps: &[NodeId]| {
            ps.iter().map(|&p| ev.depth(p)).max().unwrap_or(0) + conjunction_depth(ps.len())
        };
        let mut best = parts.clone();
        // One conjunct may already fail everywhere.
        if let Some(&p) = parts
            .iter()
            .filter(|&&p| answers.iter().all(|&s| misses(p, s)))
            .min_by_key(|&&p| ev.depth(p))
        {
            best = vec![p];
        } else {
            let mut uncovered: Vec<StateId> = answers.to_vec();
            let mut chosen = Vec::new();
            while !uncovered.is_empty() {
                let &p = parts
                    .iter()
                    .max_by_key(|&&p| {
                        let hits = uncovered.iter().filter(|&&s| misses(p, s)).count();
                        (hits, std::cmp::Reverse(ev.depth(p)))
                    })
                    .expect("every answer is covered by its own part");
                uncovered.retain(|&s| !misses(p, s));
                chosen.push(p);
            }
            chosen.sort_unstable();
            if cost(&chosen) < cost(&best) {
                best = chosen;
            }
        }
        *parts = best;
        parts.iter().map(|&p| ev.depth(p)).max().unwrap_or(0)
    }

    /// Nested backward modalities along the reverse trace, up to the first
    /// position where the traces of `x` and `y` differ.
    fn trace_formula(&mut self, x: StateId, y: StateId) -> Option<NodeId> {
        let weak = self.kind.weak();
        let (tx, ty) = (self.trace(x, weak), self.trace(y, weak));
        let k = tx.iter().zip(&ty).take_while(|(a, b)| a == b).count();
        let chain = if k < tx.len() {
            &tx[..=k]
        } else if k < ty.len() {
            &ty[..=k]
        } else {
            return None;
        };
        let mut id = self.eval.mk(Node::True);
        for &a in chain.iter().rev() {
            id = self.eval.mk(if weak { Node::WeakBack(a, id) } else { Node::Back(a, id) });
        }
        Some(id)
    }

    fn trace(&self, mut s: StateId, weak: bool) -> Vec<ActionId> {
        let mut out = Vec::new();
        while let Some((a, p)) = self.space.pred(s) {
            if !(weak && self.space.is_tau(a)) {
                out.push(a);
            }
            s = p;
        }
        out
    }
}

/// Extra depth of a balanced conjunction of `k` formulas.
fn conjunction_depth(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Targets of the `a`-labelled moves in a list sorted by label.
fn labelled<'b>(moves: &[(ActionId, StateId)], a: ActionId, buf: &'b mut Vec<StateId>) -> &'b [StateId] {
    let lo = moves.partition_point(|m| m.0 < a);
    let hi = moves.partition_point(|m| m.0 <= a);
    buf.clear();
    buf.extend(moves[lo..hi].iter().map(|m| m.1));
    buf
}

#[derive(Clone, Copy)]
enum Modality {
    Strong,
    Back,
    WeakTau,
    Weak,
    WeakBackTau,
    WeakBack,
}

impl Modality {
    fn node(self, a: ActionId, body: NodeId) -> Node {
        match self {
            Modality::Strong => Node::Strong(a, body),
            Modality::Back => Node::Back(a, body),
            Modality::WeakTau => Node::WeakTau(body),
            Modality::Weak => Node::Weak(a, body),
            Modality::WeakBackTau => Node::WeakBackTau(body),
            Modality::WeakBack => Node::WeakBack(a, body),
        }
    }
}

/// A formula of `kind`'s fragment satisfied by exactly one of `p1`, `p2`, or
/// `None` when they are equivalent. Whenever one exists it holds at `p1`
/// except for the reverse kinds, whose fragments lack negation.
pub fn distinguish(kind: EquivKind, p1: &ProcessTerm, p2: &ProcessTerm) -> Result<Option<Formula>> {
    if kind == EquivKind::BB {
        return Err(Error::Unsupported("no distinguishing formulas for BB".into()));
    }
    let space = StateSpace::from_terms([p1, p2])?;
    let fix = Fixpoint::compute(kind, &space);
    let mut d = Distinguisher::new(&space, &fix)?;
    Ok(d.formula(space.id(p1).unwrap(), space.id(p2).unwrap()))
}

/// Every formula of the fragment over `alphabet` with depth at most
/// `max_depth`, ordered by depth and then by the formula order.
///
/// Conjunctions are binary with distinct, sorted, non-`tt` operands, and no
/// double negation is produced. The weak tau modalities are always available
/// in weak fragments; strong modalities range over the whole alphabet.
pub fn enumerate_formulas(spec: &FragmentSpec, alphabet: &BTreeSet<Action>, max_depth: usize) -> Vec<Formula> {
    use crate::logic::Connective as C;
    let visible: Vec<&Action> = alphabet.iter().filter(|a| !a.is_tau()).collect();
    let mut levels: Vec<Vec<Formula>> = vec![Vec::new()];
    let mut first = vec![Formula::True];
    if spec.allows(C::Init) {
        first.push(Formula::Init);
    }
    levels.push(first);
    for d in 2..=max_depth {
        let prev = &levels[d - 1];
        let mut level = Vec::new();
        for g in prev {
            if spec.allows(C::Not) && !matches!(g, Formula::Not(_)) {
                level.push(Formula::not(g.clone()));
            }
            for a in alphabet {
                if spec.allows(C::Strong) {
                    level.push(Formula::strong(a.clone(), g.clone()));
                }
                if spec.allows(C::Back) {
                    level.push(Formula::back(a.clone(), g.clone()));
                }
            }
            if spec.allows(C::WeakTau) {
                level.push(Formula::WeakTauDiamond(Box::new(g.clone())));
            }
            if spec.allows(C::WeakBackTau) {
                level.push(Formula::WeakBackTauDiamond(Box::new(g.clone())));
            }
            for &a in &visible {
                if spec.allows(C::Weak) {
                    level.push(Formula::WeakDiamond(a.clone(), Box::new(g.clone())));
                }
                if spec.allows(C::WeakBack) {
                    level.push(Formula::WeakBackDiamond(a.clone(), Box::new(g.clone())));
                }
            }
        }
        let lower: Vec<&Formula> = levels[1..d].iter().flatten().filter(|f| **f != Formula::True).collect();
        if spec.allows(C::And) {
            for l in &lower {
                for r in &lower {
                    if l < r && (depth(l) == d - 1 || depth(r) == d - 1) {
                        level.push(Formula::and((*l).clone(), (*r).clone()));
                    }
                }
            }
        }
        if spec.allows(C::Until) {
            for l in &levels[1..d].iter().flatten().collect::<Vec<_>>() {
                for r in levels[1..d].iter().flatten() {
                    if depth(l) == d - 1 || depth(r) == d - 1 {
                        for a in alphabet {
                            level.push(Formula::until((*l).clone(), a.clone(), r.clone()));
                        }
                    }
                }
            }
        }
        level.sort();
        level.dedup();
        levels.push(level);
    }
    levels.into_iter().take(max_depth + 1).flatten().collect()
}

/// Why a pair did not agree with the characterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Equivalent, yet an enumerated fragment formula tells them apart.
    EquivalentButSplit(Formula),
    /// Inequivalent, yet no distinguishing formula was produced.
    NoFormula,
    /// The produced formula leaves the fragment.
    OutsideFragment(Formula),
    /// The produced formula holds on both sides or on neither.
    DoesNotSplit(Formula),
    /// The produced formula is deeper than `2 (h1 + h2) + 3`.
    DepthBound { formula: Formula, bound: usize },
}

impl Failure {
    pub fn direction(&self) -> &'static str {
        match self {
            Failure::EquivalentButSplit(_) => "equivalent-but-split",
            Failure::NoFormula => "no-formula",
            Failure::OutsideFragment(_) => "outside-fragment",
            Failure::DoesNotSplit(_) => "does-not-split",
            Failure::DepthBound { .. } => "depth-bound",
        }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            Failure::NoFormula => None,
            Failure::EquivalentButSplit(f)
            | Failure::OutsideFragment(f)
            | Failure::DoesNotSplit(f)
            | Failure::DepthBound { formula: f, .. } => Some(f),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Mismatch {
    pub left: ProcessTerm,
    pub right: ProcessTerm,
    pub failure: Failure,
}

#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub kind: EquivKind,
    pub corpus_id: String,
    pub pairs_checked: u64,
    pub agreements: u64,
    pub mismatches: Vec<Mismatch>,
    /// Pairs found equivalent (checked against the enumeration).
    pub equivalent_pairs: u64,
    pub formulas_enumerated: usize,
    pub max_depth: usize,
    /// Deepest distinguishing formula produced.
    pub deepest_formula: usize,
}

impl CharacterizationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let mismatches: Vec<Value> = self
            .mismatches
            .iter()
            .map(|m| {
                json!({
                    "left": m.left.to_string(),
                    "right": m.right.to_string(),
                    "direction": m.failure.direction(),
                    "formula": m.failure.formula().map(|f| f.to_string()),
                })
            })
            .collect();
        json!({
            "schema": 1,
            "kind": self.kind.token(),
            "corpus_id": self.corpus_id,
            "pairs_checked": self.pairs_checked,
            "agreements": self.agreements,
            "equivalent_pairs": self.equivalent_pairs,
            "formulas_enumerated": self.formulas_enumerated,
            "max_depth": self.max_depth,
            "deepest_formula": self.deepest_formula,
            "mismatches": mismatches,
        })
    }
}

/// FNV-1a over the rendered corpus, as a stable identifier.
fn corpus_id(terms: &[ProcessTerm]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for t in terms {
        for b in t.to_string().bytes().chain(*b"\n") {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{}-terms-{h:016x}", terms.len())
}

/// Checks, for every unordered pair of corpus terms, that equivalence under
/// `kind` coincides with agreement on the kind's fragment: equivalent pairs
/// must agree on every enumerated formula up to `max_depth`, and inequivalent
/// pairs must be split by the constructed distinguishing formula.
pub fn verify_characterization(
    kind: EquivKind,
    corpus: &[ProcessTerm],
    max_depth: usize,
) -> Result<CharacterizationReport> {
    let fragment = kind
        .fragment()
        .ok_or_else(|| Error::Unsupported("BB has no characterizing fragment".into()))?;
    let spec = FragmentSpec::of(fragment);
    let space = StateSpace::from_terms(corpus)?;
    let mut ids: Vec<StateId> = corpus.iter().map(|t| space.id(t).unwrap()).collect();
    ids.sort_unstable();
    ids.dedup();
    let m = ids.len() as u64;
    let fix = Fixpoint::compute(kind, &space);
    info!("{kind}: fixpoint over {} states after {} rounds", space.len(), fix.rounds());

    let mut mismatches = Vec::new();

    // Equivalent pairs against the enumeration, one class at a time: split
    // every class by the value of each formula and report pairs that end up
    // in different pieces.
    let alphabet: BTreeSet<Action> = corpus.iter().flat_map(|t| t.alphabet()).collect();
    let formulas = enumerate_formulas(&spec, &alphabet, max_depth);
    let class = fix.classes();
    let mut eval = Evaluator::new(&space);
    let mut piece: Vec<u32> = ids.iter().map(|&s| class[s] as u32).collect();
    let mut splitters: Vec<NodeId> = Vec::new();
    for f in &formulas {
        let id = eval.eval(f);
        let set = eval.set(id);
        let mut first: HashMap<u32, bool> = HashMap::new();
        let mut splits = false;
        for (i, &s) in ids.iter().enumerate() {
            let v = set.contains(s);
            if *first.entry(piece[i]).or_insert(v) != v {
                splits = true;
                break;
            }
        }
        if splits {
            splitters.push(id);
            let mut renumber: HashMap<(u32, bool), u32> = HashMap::new();
            for (i, &s) in ids.iter().enumerate() {
                let fresh = renumber.len() as u32 + space.len() as u32;
                piece[i] = *renumber.entry((piece[i], set.contains(s))).or_insert(fresh);
            }
        }
    }
    let mut equivalent_pairs = 0u64;
    let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &s) in ids.iter().enumerate() {
        by_class.entry(class[s]).or_default().push(i);
    }
    for members in by_class.values() {
        let k = members.len() as u64;
        equivalent_pairs += k * (k - 1) / 2;
        if splitters.is_empty() {
            continue;
        }
        for (pi, &i) in members.iter().enumerate() {
            for &j in &members[pi + 1..] {
                if piece[i] != piece[j] {
                    let (x, y) = (ids[i], ids[j]);
                    let f = splitters
                        .iter()
                        .find(|&&f| eval.set(f).contains(x) != eval.set(f).contains(y))
                        .expect("some splitter separates the pieces");
                    mismatches.push(Mismatch {
                        left: space.term(x).clone(),
                        right: space.term(y).clone(),
                        failure: Failure::EquivalentButSplit(eval.formula(*f)),
                    });
                }
            }
        }
    }
    debug!("{kind}: {} formulas enumerated, {} splitters", formulas.len(), splitters.len());

    // Inequivalent pairs against the constructed formulas.
    let mut dist = Distinguisher::new(&space, &fix)?;
    let mut deepest = 0;
    for (i, &x) in ids.iter().enumerate() {
        for &y in &ids[i + 1..] {
            if fix.related(x, y) {
                continue;
            }
            let failure = match dist.node(x, y) {
                None => Some(Failure::NoFormula),
                Some(id) => {
                    let ev = dist.evaluator();
                    let d = ev.depth(id);
                    deepest = deepest.max(d);
                    let bound = 2 * (space.tree_height(space.tree_of(x))
                        + space.tree_height(space.tree_of(y)))
                        + 3;
                    if !ev.in_fragment(id, &spec) {
                        Some(Failure::OutsideFragment(ev.formula(id)))
                    } else if ev.set(id).contains(x) == ev.set(id).contains(y) {
                        Some(Failure::DoesNotSplit(ev.formula(id)))
                    } else if d > bound {
                        Some(Failure::DepthBound { formula: ev.formula(id), bound })
                    } else {
                        None
                    }
                }
            };
            if let Some(failure) = failure {
                mismatches.push(Mismatch {
                    left: space.term(x).clone(),
                    right: space.term(y).clone(),
                    failure,
                });
            }
        }
    }
    info!(
        "{kind}: {} distinct distinguishing subformulas, deepest {deepest}",
        dist.evaluator().interned()
    );

    let pairs_checked = m * m.saturating_sub(1) / 2;
    Ok(CharacterizationReport {
        kind,
        corpus_id: corpus_id(corpus),
        pairs_checked,
        agreements: pairs_checked - mismatches.len() as u64,
        mismatches,
        equivalent_pairs,
        formulas_enumerated: formulas.len(),
        max_depth,
        deepest_formula: deepest,
    })
}
