//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use revbisim::equiv::{
    cross_violations_in, partition_classes, stuttering_violations_in, Fixpoint,
};
use revbisim::logic::Connective;
use revbisim::space::StateId;
use revbisim::{
    backstep, backward_trace, bisimilar, build_lts, corpus_generate, in_fragment, parse_formula,
    parse_term, step, verify_characterization, Action, CorpusParams, EquivKind, Formula,
    FragmentName, FragmentSpec, ProcessTerm, StateSpace,
};

const SEED: u64 = 0x5eed_2024;
const FORMULAS_PER_FRAGMENT: usize = 1000;
const VERIFY_DEPTH: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Ctx) -> Outcome);

struct Ctx {
    corpus: Vec<ProcessTerm>,
    space: StateSpace,
    /// Space ids of the corpus terms, ascending.
    ids: Vec<StateId>,
    initial: Vec<StateId>,
    fix: BTreeMap<EquivKind, Fixpoint>,
}

impl Ctx {
    fn new() -> Self {
        let params = CorpusParams::new(&["a", "b", "tau"], 4, true).unwrap();
        let corpus = corpus_generate(&params).unwrap();
        let space = StateSpace::from_terms(&corpus).unwrap();
        let mut ids: Vec<StateId> = corpus.iter().map(|t| space.id(t).unwrap()).collect();
        ids.sort_unstable();
        let initial = ids.iter().copied().filter(|&s| space.is_initial(s)).collect();
        let fix = EquivKind::ALL.into_iter().map(|k| (k, Fixpoint::compute(k, &space))).collect();
        Ctx { corpus, space, ids, initial, fix }
    }

    fn rel(&self, kind: EquivKind, x: StateId, y: StateId) -> bool {
        self.fix[&kind].related(x, y)
    }

    fn id(&self, text: &str) -> StateId {
        self.space.id(&parse_term(text).unwrap()).unwrap_or_else(|| panic!("{text} not in corpus"))
    }

    /// Unordered pairs of distinct corpus terms (or only initial ones).
    fn pairs(&self, initial_only: bool) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        let ids = if initial_only { &self.initial } else { &self.ids };
        ids.iter().enumerate().flat_map(move |(i, &x)| ids[i + 1..].iter().map(move |&y| (x, y)))
    }

    fn pair_count(&self, initial_only: bool) -> usize {
        let n = if initial_only { self.initial.len() } else { self.ids.len() };
        n * (n - 1) / 2
    }

    fn show(&self, x: StateId, y: StateId) -> String {
        format!("({}, {})", self.space.term(x), self.space.term(y))
    }
}

fn eq(kind: EquivKind, p: &str, q: &str) -> bool {
    bisimilar(kind, &parse_term(p).unwrap(), &parse_term(q).unwrap()).unwrap().equivalent
}

fn check(errors: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok && errors.len() < 10 {
        errors.push(what());
    }
}

fn verdict(errors: Vec<String>, detail: String) -> Outcome {
    if errors.is_empty() {
        Ok(detail)
    } else {
        Err(errors.join("; "))
    }
}

fn golden(_: &Ctx) -> Outcome {
    let report = revbisim::run_golden_suite().map_err(|e| e.to_string())?;
    let errors = report
        .failures()
        .map(|r| format!("{} expected {} got {}", r.claim, r.expected, r.actual))
        .collect();
    verdict(errors, format!("{} claims replayed", report.results.len()))
}

fn lts_shapes(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    for (text, states, trans) in [("a.0 + a.0", 3, 2), ("a.0", 2, 1)] {
        let l = build_lts(&parse_term(text).unwrap()).unwrap();
        let shape = (l.states().len(), l.transitions().len());
        check(&mut errors, shape == (states, trans), || format!("{text} has shape {shape:?}"));
        let a = Action::new("a").unwrap();
        check(&mut errors, l.transitions().iter().all(|t| t.action == a), || format!("{text} labels"));
    }
    let mut transitions = 0;
    let roots: Vec<&ProcessTerm> = ctx.corpus.iter().filter(|t| t.is_initial()).collect();
    for root in &roots {
        let l = build_lts(root).unwrap();
        transitions += l.transitions().len();
        // A tree: every state but the root has exactly one incoming transition.
        let mut incoming: HashMap<&ProcessTerm, usize> = HashMap::new();
        for t in l.transitions() {
            *incoming.entry(&t.target).or_default() += 1;
            // Loop property, both ways round.
            let back = backstep(&t.target).unwrap();
            check(&mut errors, back == Some((t.action.clone(), t.source.clone())), || {
                format!("undoing {} -{}-> {}", t.source, t.action, t.target)
            });
            let fwd = step(&t.source).unwrap();
            check(&mut errors, fwd.contains(&(t.action.clone(), t.target.clone())), || {
                format!("redoing {} -{}-> {}", t.source, t.action, t.target)
            });
        }
        for s in l.states() {
            let expected = usize::from(s != l.root());
            let got = incoming.get(s).copied().unwrap_or(0);
            check(&mut errors, got == expected, || format!("{s} has {got} incoming transitions"));
            check(&mut errors, (s == l.root()) == s.is_initial(), || format!("{s} initiality"));
            check(&mut errors, backstep(s).unwrap().is_none() == (s == l.root()), || {
                format!("{s} backstep")
            });
        }
    }
    verdict(errors, format!("{} systems, {transitions} transitions", roots.len()))
}

fn oracle_agreement(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    let mut disagreements = 0u64;
    for kind in EquivKind::CHARACTERIZED {
        let part = partition_classes(kind, &ctx.space).map_err(|e| e.to_string())?;
        let fix = &ctx.fix[&kind];
        for (x, y) in ctx.pairs(false) {
            if fix.related(x, y) != (part[x] == part[y]) {
                disagreements += 1;
                check(&mut errors, false, || format!("{kind} {}", ctx.show(x, y)));
            }
        }
    }
    verdict(
        errors,
        format!("9 kinds x {} pairs, {disagreements} disagreements", ctx.pair_count(false)),
    )
}

fn characterization(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    let mut summary = Vec::new();
    for kind in EquivKind::CHARACTERIZED {
        let report = verify_characterization(kind, &ctx.corpus, VERIFY_DEPTH).map_err(|e| e.to_string())?;
        summary.push(format!("{kind}:{}", report.deepest_formula));
        for m in report.mismatches.iter().take(3) {
            errors.push(format!("{kind} ({}, {}) {}", m.left, m.right, m.failure.direction()));
        }
        if report.mismatches.len() > 3 {
            errors.push(format!("{kind}: {} mismatches in total", report.mismatches.len()));
        }
    }
    verdict(
        errors,
        format!(
            "0 mismatches over {} pairs per kind at depth {VERIFY_DEPTH}; deepest distinguishing formula {}",
            ctx.pair_count(false),
            summary.join(" ")
        ),
    )
}

fn trace_collapse(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    for (kind, weak) in [(EquivKind::RB, false), (EquivKind::WRB, true)] {
        let traces: HashMap<StateId, Vec<Action>> = ctx
            .ids
            .iter()
            .map(|&s| (s, backward_trace(ctx.space.term(s), weak).unwrap()))
            .collect();
        for (x, y) in ctx.pairs(false) {
            let same = traces[&x] == traces[&y];
            check(&mut errors, ctx.rel(kind, x, y) == same, || format!("{kind} {}", ctx.show(x, y)));
        }
    }
    verdict(errors, format!("RB and wRB over {} pairs", ctx.pair_count(false)))
}

fn branching_agreement(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    let mut related = 0;
    for (x, y) in ctx.pairs(true) {
        let bb = ctx.rel(EquivKind::BB, x, y);
        related += usize::from(bb);
        check(&mut errors, bb == ctx.rel(EquivKind::WFRB, x, y), || ctx.show(x, y));
    }
    let (p, q) = ("a1!.b.0", "a2!.b.0");
    check(&mut errors, eq(EquivKind::BB, p, q), || format!("({p}, {q}) not BB"));
    check(&mut errors, !eq(EquivKind::WFRB, p, q), || format!("({p}, {q}) wFRB"));
    verdict(
        errors,
        format!(
            "{} initial pairs ({related} related); ({p}, {q}) separates the two",
            ctx.pair_count(true)
        ),
    )
}

fn tau_path_properties(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    let space = &ctx.space;
    let stutter = stuttering_violations_in(space, &ctx.fix[&EquivKind::WFRB], false);
    let stutter_ps = stuttering_violations_in(space, &ctx.fix[&EquivKind::WFRBps], true);
    for (name, v) in [("stuttering", &stutter), ("stuttering ps", &stutter_ps)] {
        check(&mut errors, v.is_empty(), || format!("{name}: {} violations", v.len()));
    }
    let fix = &ctx.fix[&EquivKind::WFRB];
    let roots = space.roots();
    let mut tree_pairs = 0;
    let mut cross = 0;
    for t1 in 0..roots.len() {
        for t2 in t1..roots.len() {
            if fix.related(roots[t1], roots[t2]) {
                tree_pairs += 1;
                cross += cross_violations_in(space, fix, t1, t2).len();
            }
        }
    }
    check(&mut errors, cross == 0, || format!("cross: {cross} violations"));
    for t in ["tau.tau.a.0", "c.(tau.a.0 + b.0)"] {
        let l = build_lts(&parse_term(t).unwrap()).unwrap();
        check(&mut errors, revbisim::stuttering_violations(&l).is_empty(), || format!("stuttering on {t}"));
        check(&mut errors, revbisim::cross_violations(&l, &l).is_empty(), || format!("cross on {t}"));
    }
    verdict(errors, format!("{} states, {tree_pairs} related system pairs", space.len()))
}

fn lattice(ctx: &Ctx) -> Outcome {
    use EquivKind::*;
    let mut errors = Vec::new();
    // (finer, coarser, initial pairs only)
    let inclusions = [
        (FRB, FB, false),
        (FRB, RB, false),
        (FBps, FB, false),
        (WFBps, WFB, false),
        (WFRBps, WFRB, false),
        (WFRB, WFB, false),
        (WFRBps, WFBps, false),
        (FB, WFB, false),
        (FBps, WFBps, false),
        (RB, WRB, false),
        (FRB, WFRB, false),
        (FB, FRB, true),
        (FBps, FRB, true),
        (FRB, FBps, true),
    ];
    for (fine, coarse, initial) in inclusions {
        for (x, y) in ctx.pairs(initial) {
            let ok = !ctx.rel(fine, x, y) || ctx.rel(coarse, x, y);
            check(&mut errors, ok, || format!("{fine} not within {coarse} at {}", ctx.show(x, y)));
        }
    }
    // (related by, not related by, pair)
    let witnesses = [
        (Some(FB), Some(FRB), "a!.0", "a!.0 + c.0"),
        (Some(RB), Some(FRB), "a!.0", "a!.0 + c.0"),
        (Some(FB), Some(RB), "a!.0", "0"),
        (Some(RB), Some(FB), "a.0", "0"),
        (Some(WFB), Some(FB), "tau.a.0", "a.0"),
        (Some(WFRB), Some(FRB), "tau.a.0", "a.0"),
        (Some(WFB), Some(WFRB), "tau.a.0 + a.0 + b.0", "tau.a.0 + b.0"),
        (Some(WFBps), Some(WFRBps), "tau.a.0 + a.0", "tau.a.0"),
        (Some(FB), None, "a!.b.0", "b.0"),
        (None, Some(FB), "a!.b.0 + c.0", "b.0 + c.0"),
        (None, Some(WFB), "tau.a.0 + b.0", "a.0 + b.0"),
    ];
    for (yes, no, p, q) in witnesses {
        if let Some(k) = yes {
            check(&mut errors, eq(k, p, q), || format!("({p}, {q}) should be {k}-related"));
        }
        if let Some(k) = no {
            check(&mut errors, !eq(k, p, q), || format!("({p}, {q}) should not be {k}-related"));
        }
    }
    // The incomparability pairs are also corpus members.
    let (x, y) = (ctx.id("a!.0"), ctx.id("0"));
    check(&mut errors, ctx.rel(FB, x, y) && !ctx.rel(RB, x, y), || "a!.0 vs 0 in corpus".into());
    verdict(
        errors,
        format!("{} inclusions over the corpus, {} named witnesses", inclusions.len(), witnesses.len()),
    )
}

/// A random formula of depth at most `budget` using only `spec`'s connectives.
fn random_formula(rng: &mut StdRng, spec: &FragmentSpec, budget: usize) -> Formula {
    const VISIBLE: [&str; 3] = ["a", "b", "c1"];
    let allowed: Vec<Connective> = spec.allowed.iter().copied().collect();
    let leaves: Vec<Connective> =
        allowed.iter().copied().filter(|c| matches!(c, Connective::True | Connective::Init)).collect();
    let pick = |rng: &mut StdRng, cs: &[Connective]| cs[rng.random_range(0..cs.len())];
    let c = if budget <= 1 { pick(rng, &leaves) } else { pick(rng, &allowed) };
    let any = |rng: &mut StdRng| {
        if rng.random_bool(0.25) {
            Action::tau()
        } else {
            Action::new(VISIBLE[rng.random_range(0..VISIBLE.len())]).unwrap()
        }
    };
    let visible = |rng: &mut StdRng| Action::new(VISIBLE[rng.random_range(0..VISIBLE.len())]).unwrap();
    let sub = |rng: &mut StdRng| Box::new(random_formula(rng, spec, budget - 1));
    match c {
        Connective::True => Formula::True,
        Connective::Init => Formula::Init,
        Connective::Not => Formula::Not(sub(rng)),
        Connective::And => {
            let l = sub(rng);
            Formula::And(l, sub(rng))
        }
        Connective::Strong => Formula::StrongDiamond(any(rng), sub(rng)),
        Connective::Back => Formula::BackDiamond(any(rng), sub(rng)),
        Connective::WeakTau => Formula::WeakTauDiamond(sub(rng)),
        Connective::Weak => Formula::WeakDiamond(visible(rng), sub(rng)),
        Connective::WeakBackTau => Formula::WeakBackTauDiamond(sub(rng)),
        Connective::WeakBack => Formula::WeakBackDiamond(visible(rng), sub(rng)),
        Connective::Until => unreachable!("plain fragments exclude until"),
    }
}

fn round_trip(ctx: &Ctx) -> Outcome {
    let mut errors = Vec::new();
    for t in &ctx.corpus {
        let back = parse_term(&t.to_string());
        check(&mut errors, back.as_ref() == Ok(t), || format!("term {t}"));
    }
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut total = 0;
    for name in FragmentName::ALL {
        let spec = FragmentSpec::of(name);
        for _ in 0..FORMULAS_PER_FRAGMENT {
            let budget = rng.random_range(1..=8);
            let f = random_formula(&mut rng, &spec, budget);
            total += 1;
            check(&mut errors, in_fragment(&f, &spec), || format!("{f} outside {name}"));
            let back = parse_formula(&f.to_string());
            check(&mut errors, back.as_ref() == Ok(&f), || format!("formula {f} in {name}"));
        }
    }
    verdict(errors, format!("{} terms, {total} formulas", ctx.corpus.len()))
}

fn main() {
    let start = Instant::now();
    let ctx = Ctx::new();
    println!(
        "corpus {{a,b,tau}} size 4 decorated: {} terms ({} initial), {} states, setup {:.1?}",
        ctx.corpus.len(),
        ctx.initial.len(),
        ctx.space.len(),
        start.elapsed()
    );
    let criteria: [Criterion; 9] = [
        ("golden examples", golden),
        ("transition system shapes and loop property", lts_shapes),
        ("fixpoint and partition refinement agree", oracle_agreement),
        ("modal characterization of all nine kinds", characterization),
        ("reverse kinds collapse to backward traces", trace_collapse),
        ("wFRB and BB agree on initial processes", branching_agreement),
        ("stuttering and cross properties", tau_path_properties),
        ("inclusion and incomparability lattice", lattice),
        ("parser round trip", round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run(&ctx);
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} ({elapsed:.1?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} ({elapsed:.1?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
