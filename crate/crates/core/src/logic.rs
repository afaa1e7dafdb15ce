//! The modal logic: formulas, depth, fragments and satisfaction.
//!
//! Satisfaction is computed set-wise. An [`Evaluator`] interns every
//! subformula once and stores the set of states of a [`StateSpace`] where it
//! holds, so repeated and shared subformulas are evaluated a single time.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::space::{StateId, StateSpace};
use crate::term::{Action, ProcessTerm};

/// A formula of the logic.
///
/// The derived order (variant order first, then fields) is the canonical
/// formula order used by enumeration and tie-breaking.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    Init,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `<a>f`: some outgoing `a`-transition leads to `f`.
    StrongDiamond(Action, Box<Formula>),
    /// `<a!>f`: the incoming transition is labelled `a` and comes from `f`.
    BackDiamond(Action, Box<Formula>),
    /// `<<tau>>f`: some `tau*` descendant satisfies `f`.
    WeakTauDiamond(Box<Formula>),
    /// `<<a>>f` with `a` visible.
    WeakDiamond(Action, Box<Formula>),
    /// `<<tau!>>f`: some `tau*` ancestor satisfies `f`.
    WeakBackTauDiamond(Box<Formula>),
    /// `<<a!>>f` with `a` visible.
    WeakBackDiamond(Action, Box<Formula>),
    /// `until(f, a, g)`.
    Until(Box<Formula>, Action, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn strong(a: Action, f: Formula) -> Self {
        Formula::StrongDiamond(a, Box::new(f))
    }

    pub fn back(a: Action, f: Formula) -> Self {
        Formula::BackDiamond(a, Box::new(f))
    }

    /// `<<a>>f`, choosing the tau variant when `a` is tau.
    pub fn weak(a: Action, f: Formula) -> Self {
        if a.is_tau() {
            Formula::WeakTauDiamond(Box::new(f))
        } else {
            Formula::WeakDiamond(a, Box::new(f))
        }
    }

    /// `<<a!>>f`, choosing the tau variant when `a` is tau.
    pub fn weak_back(a: Action, f: Formula) -> Self {
        if a.is_tau() {
            Formula::WeakBackTauDiamond(Box::new(f))
        } else {
            Formula::WeakBackDiamond(a, Box::new(f))
        }
    }

    pub fn until(l: Formula, a: Action, r: Formula) -> Self {
        Formula::Until(Box::new(l), a, Box::new(r))
    }

    /// Conjunction of all formulas, `tt` when empty. Balanced, so depth grows
    /// logarithmically in the number of conjuncts.
    pub fn conjunction(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            n => {
                let right = fs.split_off(n / 2);
                Formula::and(Formula::conjunction(fs), Formula::conjunction(right))
            }
        }
    }

    pub fn connective(&self) -> Connective {
        match self {
            Formula::True => Connective::True,
            Formula::Init => Connective::Init,
            Formula::Not(_) => Connective::Not,
            Formula::And(..) => Connective::And,
            Formula::StrongDiamond(..) => Connective::Strong,
            Formula::BackDiamond(..) => Connective::Back,
            Formula::WeakTauDiamond(_) => Connective::WeakTau,
            Formula::WeakDiamond(..) => Connective::Weak,
            Formula::WeakBackTauDiamond(_) => Connective::WeakBackTau,
            Formula::WeakBackDiamond(..) => Connective::WeakBack,
            Formula::Until(..) => Connective::Until,
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::Init => vec![],
            Formula::Not(g)
            | Formula::StrongDiamond(_, g)
            | Formula::BackDiamond(_, g)
            | Formula::WeakTauDiamond(g)
            | Formula::WeakDiamond(_, g)
            | Formula::WeakBackTauDiamond(g)
            | Formula::WeakBackDiamond(_, g) => vec![g],
            Formula::And(l, r) | Formula::Until(l, _, r) => vec![l, r],
        }
    }

    /// The weak visible modalities never carry `tau`.
    pub fn is_well_formed(&self) -> bool {
        let own = match self {
            Formula::WeakDiamond(a, _) | Formula::WeakBackDiamond(a, _) => !a.is_tau(),
            _ => true,
        };
        own && self.children().into_iter().all(Formula::is_well_formed)
    }

    /// Actions occurring in modalities and until operators.
    pub fn actions(&self) -> BTreeSet<Action> {
        fn go(f: &Formula, out: &mut BTreeSet<Action>) {
            match f {
                Formula::StrongDiamond(a, _)
                | Formula::BackDiamond(a, _)
                | Formula::WeakDiamond(a, _)
                | Formula::WeakBackDiamond(a, _)
                | Formula::Until(_, a, _) => {
                    out.insert(a.clone());
                }
                Formula::WeakTauDiamond(_) | Formula::WeakBackTauDiamond(_) => {
                    out.insert(Action::tau());
                }
                _ => {}
            }
            for g in f.children() {
                go(g, out);
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Depth: `tt` and `init` have depth 1, every other connective adds one to
/// the deepest operand. Until is given the same treatment as conjunction.
pub fn depth(f: &Formula) -> usize {
    1 + f.children().into_iter().map(depth).max().unwrap_or(0)
}

/// One tag per connective of the logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    True,
    Init,
    Not,
    And,
    Strong,
    Back,
    WeakTau,
    Weak,
    WeakBackTau,
    WeakBack,
    Until,
}

/// The nine fragments, named by the CLI tokens of the bisimilarity each one
/// characterizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentName {
    FB,
    FBps,
    RB,
    FRB,
    WFB,
    WFBps,
    WRB,
    WFRB,
    WFRBps,
}

impl FragmentName {
    pub const ALL: [FragmentName; 9] = [
        FragmentName::FB,
        FragmentName::FBps,
        FragmentName::RB,
        FragmentName::FRB,
        FragmentName::WFB,
        FragmentName::WFBps,
        FragmentName::WRB,
        FragmentName::WFRB,
        FragmentName::WFRBps,
    ];

    pub fn token(self) -> &'static str {
        match self {
            FragmentName::FB => "FB",
            FragmentName::FBps => "FBps",
            FragmentName::RB => "RB",
            FragmentName::FRB => "FRB",
            FragmentName::WFB => "wFB",
            FragmentName::WFBps => "wFBps",
            FragmentName::WRB => "wRB",
            FragmentName::WFRB => "wFRB",
            FragmentName::WFRBps => "wFRBps",
        }
    }

    /// Conventional name of the fragment, e.g. `L_FB` or `Lτ_FRBps`.
    pub fn label(self) -> String {
        let token = self.token();
        match token.strip_prefix('w') {
            Some(rest) => format!("Lτ_{rest}"),
            None => format!("L_{token}"),
        }
    }
}

impl fmt::Display for FragmentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FragmentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FragmentName::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown fragment `{s}`")))
    }
}

/// The connectives permitted in one fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentSpec {
    pub name: FragmentName,
    pub allowed: BTreeSet<Connective>,
    /// Extension: also admit `until`. Never set by [`FragmentSpec::of`].
    pub allow_until: bool,
}

impl FragmentSpec {
    pub fn of(name: FragmentName) -> Self {
        use Connective::*;
        let allowed: &[Connective] = match name {
            FragmentName::FB => &[True, Not, And, Strong],
            FragmentName::FBps => &[True, Init, Not, And, Strong],
            FragmentName::RB => &[True, Back],
            FragmentName::FRB => &[True, Not, And, Strong, Back],
            FragmentName::WFB => &[True, Not, And, WeakTau, Weak],
            FragmentName::WFBps => &[True, Init, Not, And, WeakTau, Weak],
            FragmentName::WRB => &[True, WeakBackTau, WeakBack],
            FragmentName::WFRB => &[True, Not, And, WeakTau, Weak, WeakBackTau, WeakBack],
            FragmentName::WFRBps => &[True, Init, Not, And, WeakTau, Weak, WeakBackTau, WeakBack],
        };
        FragmentSpec { name, allowed: allowed.iter().copied().collect(), allow_until: false }
    }

    pub fn with_until(mut self) -> Self {
        self.allow_until = true;
        self
    }

    pub fn allows(&self, c: Connective) -> bool {
        if c == Connective::Until {
            self.allow_until
        } else {
            self.allowed.contains(&c)
        }
    }
}

/// Does every connective of `f` belong to the fragment?
pub fn in_fragment(f: &Formula, spec: &FragmentSpec) -> bool {
    f.is_well_formed() && connectives_within(f, spec)
}

fn connectives_within(f: &Formula, spec: &FragmentSpec) -> bool {
    spec.allows(f.connective()) && f.children().into_iter().all(|g| connectives_within(g, spec))
}

/// Does `p` satisfy `f`, evaluated in the transition system of `p`'s origin?
pub fn satisfies(p: &ProcessTerm, f: &Formula) -> Result<bool> {
    p.ensure_reachable()?;
    let space = StateSpace::from_terms([p])?;
    let mut eval = Evaluator::new(&space);
    let s = space.id(p).expect("term is a state of its own system");
    Ok(eval.holds(f, s))
}

/// Index of an interned subformula inside an [`Evaluator`].
pub type NodeId = usize;

/// Action index inside an [`Evaluator`]: the state space's own action ids,
/// followed by actions that only occur in formulas.
pub(crate) type ActIdx = u32;

/// One interned connective with interned operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    True,
    Init,
    Not(NodeId),
    And(NodeId, NodeId),
    Strong(ActIdx, NodeId),
    Back(ActIdx, NodeId),
    WeakTau(NodeId),
    Weak(ActIdx, NodeId),
    WeakBackTau(NodeId),
    WeakBack(ActIdx, NodeId),
    Until(NodeId, ActIdx, NodeId),
}

impl Node {
    fn connective(self) -> Connective {
        match self {
            Node::True => Connective::True,
            Node::Init => Connective::Init,
            Node::Not(_) => Connective::Not,
            Node::And(..) => Connective::And,
            Node::Strong(..) => Connective::Strong,
            Node::Back(..) => Connective::Back,
            Node::WeakTau(_) => Connective::WeakTau,
            Node::Weak(..) => Connective::Weak,
            Node::WeakBackTau(_) => Connective::WeakBackTau,
            Node::WeakBack(..) => Connective::WeakBack,
            Node::Until(..) => Connective::Until,
        }
    }

    fn children(self) -> [Option<NodeId>; 2] {
        match self {
            Node::True | Node::Init => [None, None],
            Node::Not(g)
            | Node::Strong(_, g)
            | Node::Back(_, g)
            | Node::WeakTau(g)
            | Node::Weak(_, g)
            | Node::WeakBackTau(g)
            | Node::WeakBack(_, g) => [Some(g), None],
            Node::And(l, r) | Node::Until(l, _, r) => [Some(l), Some(r)],
        }
    }
}

fn mask_of(spec: &FragmentSpec) -> u16 {
    let mut m = 0;
    for c in &spec.allowed {
        m |= 1 << *c as u16;
    }
    if spec.allow_until {
        m |= 1 << Connective::Until as u16;
    }
    m
}

/// Set-based model checker over a state space.
///
/// Every distinct subformula is interned once, together with its depth, the
/// connectives it uses and the set of states satisfying it.
pub struct Evaluator<'s> {
    space: &'s StateSpace,
    extra_actions: Vec<Action>,
    extra_ids: HashMap<Action, ActIdx>,
    index: HashMap<Node, NodeId>,
    nodes: Vec<Node>,
    depths: Vec<u16>,
    masks: Vec<u16>,
    sets: Vec<FixedBitSet>,
}

impl<'s> Evaluator<'s> {
    pub fn new(space: &'s StateSpace) -> Self {
        Evaluator {
            space,
            extra_actions: Vec::new(),
            extra_ids: HashMap::new(),
            index: HashMap::new(),
            nodes: Vec::new(),
            depths: Vec::new(),
            masks: Vec::new(),
            sets: Vec::new(),
        }
    }

    pub fn space(&self) -> &'s StateSpace {
        self.space
    }

    fn act(&mut self, a: &Action) -> ActIdx {
        if let Some(id) = self.space.action_id(a) {
            return id;
        }
        if let Some(&id) = self.extra_ids.get(a) {
            return id;
        }
        let id = (self.space.action_count() + self.extra_actions.len()) as ActIdx;
        self.extra_actions.push(a.clone());
        self.extra_ids.insert(a.clone(), id);
        id
    }

    fn action(&self, a: ActIdx) -> Action {
        let known = self.space.action_count();
        if (a as usize) < known {
            self.space.action(a).clone()
        } else {
            self.extra_actions[a as usize - known].clone()
        }
    }

    fn known(&self, a: ActIdx) -> bool {
        (a as usize) < self.space.action_count()
    }

    /// Interns `f` and returns the id of its satisfaction set.
    pub fn eval(&mut self, f: &Formula) -> NodeId {
        let node = match f {
            Formula::True => Node::True,
            Formula::Init => Node::Init,
            Formula::Not(g) => Node::Not(self.eval(g)),
            Formula::And(l, r) => {
                let l = self.eval(l);
                Node::And(l, self.eval(r))
            }
            Formula::StrongDiamond(a, g) => Node::Strong(self.act(a), self.eval(g)),
            Formula::BackDiamond(a, g) => Node::Back(self.act(a), self.eval(g)),
            Formula::WeakTauDiamond(g) => Node::WeakTau(self.eval(g)),
            Formula::WeakDiamond(a, g) if a.is_tau() => Node::WeakTau(self.eval(g)),
            Formula::WeakDiamond(a, g) => Node::Weak(self.act(a), self.eval(g)),
            Formula::WeakBackTauDiamond(g) => Node::WeakBackTau(self.eval(g)),
            Formula::WeakBackDiamond(a, g) if a.is_tau() => Node::WeakBackTau(self.eval(g)),
            Formula::WeakBackDiamond(a, g) => Node::WeakBack(self.act(a), self.eval(g)),
            Formula::Until(l, a, r) => {
                let l = self.eval(l);
                let a = self.act(a);
                Node::Until(l, a, self.eval(r))
            }
        };
        self.mk(node)
    }

    /// Interns a node whose operands are already interned.
    pub(crate) fn mk(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let mut depth = 0;
        let mut mask = 1u16 << node.connective() as u16;
        for c in node.children().into_iter().flatten() {
            depth = depth.max(self.depths[c]);
            mask |= self.masks[c];
        }
        let set = self.compute(node);
        let id = self.nodes.len();
        self.nodes.push(node);
        self.depths.push(depth + 1);
        self.masks.push(mask);
        self.sets.push(set);
        self.index.insert(node, id);
        id
    }

    /// Balanced conjunction of interned formulas, `tt` when empty.
    pub(crate) fn mk_conjunction(&mut self, ids: &[NodeId]) -> NodeId {
        match ids.len() {
            0 => self.mk(Node::True),
            1 => ids[0],
            n => {
                let (l, r) = ids.split_at(n / 2);
                let l = self.mk_conjunction(l);
                let r = self.mk_conjunction(r);
                self.mk(Node::And(l, r))
            }
        }
    }

    /// States satisfying the interned formula `id`.
    pub fn set(&self, id: NodeId) -> &FixedBitSet {
        &self.sets[id]
    }

    pub fn holds(&mut self, f: &Formula, s: StateId) -> bool {
        let id = self.eval(f);
        self.sets[id].contains(s)
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depths[id] as usize
    }

    /// Does the interned formula stay within the fragment?
    pub fn in_fragment(&self, id: NodeId, spec: &FragmentSpec) -> bool {
        self.masks[id] & !mask_of(spec) == 0
    }

    /// Rebuilds the formula tree of an interned node.
    pub fn formula(&self, id: NodeId) -> Formula {
        let b = |g: NodeId| Box::new(self.formula(g));
        match self.nodes[id] {
            Node::True => Formula::True,
            Node::Init => Formula::Init,
            Node::Not(g) => Formula::Not(b(g)),
            Node::And(l, r) => Formula::And(b(l), b(r)),
            Node::Strong(a, g) => Formula::StrongDiamond(self.action(a), b(g)),
            Node::Back(a, g) => Formula::BackDiamond(self.action(a), b(g)),
            Node::WeakTau(g) => Formula::WeakTauDiamond(b(g)),
            Node::Weak(a, g) => Formula::WeakDiamond(self.action(a), b(g)),
            Node::WeakBackTau(g) => Formula::WeakBackTauDiamond(b(g)),
            Node::WeakBack(a, g) => Formula::WeakBackDiamond(self.action(a), b(g)),
            Node::Until(l, a, r) => Formula::Until(b(l), self.action(a), b(r)),
        }
    }

    /// Number of distinct subformulas interned so far.
    pub fn interned(&self) -> usize {
        self.nodes.len()
    }

    fn compute(&self, node: Node) -> FixedBitSet {
        let sp = self.space;
        let n = sp.len();
        let mut out = FixedBitSet::with_capacity(n);
        let sets = &self.sets;
        let states = 0..n;
        match node {
            Node::True => out.insert_range(..),
            Node::Init => states.filter(|&s| sp.is_initial(s)).for_each(|s| out.insert(s)),
            Node::Not(g) => {
                out.insert_range(..);
                out.difference_with(&sets[g]);
            }
            Node::And(l, r) => {
                out.union_with(&sets[l]);
                out.intersect_with(&sets[r]);
            }
            Node::Strong(a, _) | Node::Back(a, _) | Node::Weak(a, _) | Node::WeakBack(a, _)
                if !self.known(a) => {}
            Node::Strong(a, g) => {
                for s in states {
                    if sp.succ(s).iter().any(|&(b, t)| b == a && sets[g].contains(t)) {
                        out.insert(s);
                    }
                }
            }
            Node::Back(a, g) => {
                for s in states {
                    if matches!(sp.pred(s), Some((b, t)) if b == a && sets[g].contains(t)) {
                        out.insert(s);
                    }
                }
            }
            Node::WeakTau(g) => {
                for s in states {
                    if sp.tau_closure(s).iter().any(|&t| sets[g].contains(t)) {
                        out.insert(s);
                    }
                }
            }
            Node::Weak(a, g) => {
                for s in states {
                    if sp.weak_succ(s).iter().any(|&(b, t)| b == a && sets[g].contains(t)) {
                        out.insert(s);
                    }
                }
            }
            Node::WeakBackTau(g) => {
                for s in states {
                    if sp.tau_ancestors(s).iter().any(|&t| sets[g].contains(t)) {
                        out.insert(s);
                    }
                }
            }
            Node::WeakBack(a, g) => {
                for s in states {
                    if sp.weak_pred(s).iter().any(|&(b, t)| b == a && sets[g].contains(t)) {
                        out.insert(s);
                    }
                }
            }
            Node::Until(l, a, r) => {
                // Children are stored after their parents, so a reverse sweep
                // decides every tau-successor first.
                for s in (0..n).rev() {
                    if !sets[l].contains(s) {
                        continue;
                    }
                    let holds = sp.succ(s).iter().any(|&(b, t)| {
                        (b == a && sets[r].contains(t)) || (sp.is_tau(b) && out.contains(t))
                    });
                    if holds {
                        out.insert(s);
                    }
                }
                if self.action(a).is_tau() {
                    out.union_with(&sets[r]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_term};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn sat(p: &str, phi: &str) -> bool {
        satisfies(&parse_term(p).unwrap(), &f(phi)).unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        assert!(sat("a!.0 + c.0", "<a!><c>tt"));
        assert!(!sat("a!.0", "<a!><c>tt"));
        assert!(!sat("a!.b.0", "init"));
        assert!(sat("a.0", "init"));
        assert!(sat("tau.a.0", "<<a>>tt"));
        assert!(sat("b!.0", "tt"));
        assert!(!sat("tau.a.0", "<a>tt"));
        assert!(sat("tau!.a.0", "<<tau!>>init"));
    }

    #[test]
    fn unreachable_is_rejected() {
        assert!(satisfies(&parse_term("b.a!.0").unwrap(), &Formula::True).is_err());
    }

    #[test]
    fn until_semantics() {
        // tau.tau.a.0: the tau path stays non-final, then a.
        assert!(sat("tau.tau.a.0", "until(~<b>tt, a, tt)"));
        assert!(!sat("tau.tau.a.0", "until(<tau>tt, a, tt)"));
        assert!(sat("tau.a.0 + b.0", "until(tt, b, tt)"));
        assert!(!sat("tau.a.0 + b.0", "until(tt, c, tt)"));
        // With tau as the action the empty path suffices.
        assert!(sat("a.0", "until(~tt, tau, <a>tt)"));
        assert!(!sat("a.0", "until(~tt, a, tt)"));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&f("tt")), 1);
        // Conjunction adds one to its deepest operand: 1 + max(2, 1).
        assert_eq!(depth(&f("<a>tt & init")), 3);
        assert_eq!(depth(&f("tt & init")), 2);
        assert_eq!(depth(&f("~<a!>tt")), 3);
        assert_eq!(depth(&f("until(tt, a, <b>tt)")), 3);
    }

    #[test]
    fn fragment_examples() {
        let rb = FragmentSpec::of(FragmentName::RB);
        assert!(in_fragment(&f("<a!>tt"), &rb));
        assert!(!in_fragment(&f("<a!>tt & tt"), &rb));
        assert!(in_fragment(&f("init & <<tau>>tt"), &FragmentSpec::of(FragmentName::WFBps)));
        assert!(!in_fragment(&f("init"), &FragmentSpec::of(FragmentName::WFB)));
        let until = f("until(tt, a, tt)");
        assert!(!in_fragment(&until, &FragmentSpec::of(FragmentName::FRB)));
        assert!(in_fragment(&until, &FragmentSpec::of(FragmentName::FRB).with_until()));
        let bad = Formula::WeakDiamond(Action::tau(), Box::new(Formula::True));
        assert!(!bad.is_well_formed());
        assert!(!in_fragment(&bad, &FragmentSpec::of(FragmentName::WFB)));
    }

    #[test]
    fn labels_and_tokens() {
        assert_eq!(FragmentName::RB.label(), "L_RB");
        assert_eq!(FragmentName::WFRBps.label(), "Lτ_FRBps");
        assert_eq!("wFBps".parse::<FragmentName>().unwrap(), FragmentName::WFBps);
    }

    #[test]
    fn conjunction_is_balanced() {
        let parts: Vec<Formula> = (0..4).map(|_| f("<a>tt")).collect();
        assert_eq!(depth(&Formula::conjunction(parts)), 4);
        assert_eq!(Formula::conjunction(vec![]), Formula::True);
    }
}
