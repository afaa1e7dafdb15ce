//! The worked examples of the theory, replayed as assertions.

use serde_json::{json, Value};

use crate::equiv::{bisimilar, EquivKind};
use crate::error::Result;
use crate::lts::build_lts;
use crate::equiv::relation_fixpoint;
use crate::parser::parse_term;

/// One checked claim.
#[derive(Clone, Debug)]
pub struct GoldenResult {
    /// Which discussion of the theory the claim comes from.
    pub source: &'static str,
    pub claim: String,
    pub expected: bool,
    pub actual: bool,
}

impl GoldenResult {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug)]
pub struct GoldenReport {
    pub results: Vec<GoldenResult>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(GoldenResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GoldenResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "passed": self.passed(),
            "total": self.results.len(),
            "failures": self.failures().count(),
            "claims": self.results.iter().map(|r| json!({
                "source": r.source,
                "claim": r.claim,
                "expected": r.expected,
                "actual": r.actual,
                "verdict": if r.passed() { "pass" } else { "fail" },
            })).collect::<Vec<_>>(),
        })
    }
}

const TWO_BRANCHES: &str = "two identical branches versus one";
const STRONG_INCOMPARABLE: &str = "strong forward and reverse are incomparable";
const UNDO_REENABLES: &str = "undoing re-enables discarded alternatives";
const STRONG_PAST: &str = "strong forward bisimilarity ignores the past";
const WEAK_TAU_PREFIX: &str = "weak equivalences abstract from a leading tau";
const WEAK_FB_VS_FRB: &str = "weak forward versus weak forward-reverse on initial processes";
const WEAK_PS: &str = "past-sensitive weak equivalences";
const BRANCHING: &str = "branching versus weak forward-reverse on non-initial processes";

/// (source, kind, left, right, expected equivalence)
const EQUIVALENCE_CLAIMS: &[(&str, EquivKind, &str, &str, bool)] = &[
    (TWO_BRANCHES, EquivKind::FRB, "a.0 + a.0", "a.0", true),
    (TWO_BRANCHES, EquivKind::FB, "a.0 + a.0", "a.0", true),
    (TWO_BRANCHES, EquivKind::RB, "a.0 + a.0", "a.0", true),
    (STRONG_INCOMPARABLE, EquivKind::FB, "a!.0", "0", true),
    (STRONG_INCOMPARABLE, EquivKind::RB, "a!.0", "0", false),
    (STRONG_INCOMPARABLE, EquivKind::RB, "a.0", "0", true),
    (STRONG_INCOMPARABLE, EquivKind::FB, "a.0", "0", false),
    (UNDO_REENABLES, EquivKind::FRB, "a!.0 + c.0", "a!.0", false),
    (UNDO_REENABLES, EquivKind::FB, "a!.0 + c.0", "a!.0", true),
    (UNDO_REENABLES, EquivKind::RB, "a!.0 + c.0", "a!.0", true),
    (STRONG_PAST, EquivKind::FB, "a!.b.0", "b.0", true),
    (STRONG_PAST, EquivKind::RB, "a!.b.0", "b.0", false),
    (STRONG_PAST, EquivKind::FB, "a!.b.0 + c.0", "b.0 + c.0", false),
    (STRONG_PAST, EquivKind::FBps, "a!.b.0", "b.0", false),
    (STRONG_PAST, EquivKind::FBps, "a1!.b.0", "a2!.b.0", true),
    (STRONG_PAST, EquivKind::RB, "a1!.b.0", "a2!.b.0", false),
    (STRONG_PAST, EquivKind::RB, "a1.b.0", "a2.b.0", true),
    (STRONG_PAST, EquivKind::FBps, "a1.b.0", "a2.b.0", false),
    (WEAK_TAU_PREFIX, EquivKind::WFB, "tau.a.0", "a.0", true),
    (WEAK_TAU_PREFIX, EquivKind::WFRB, "tau.a.0", "a.0", true),
    (WEAK_TAU_PREFIX, EquivKind::FB, "tau.a.0", "a.0", false),
    (WEAK_TAU_PREFIX, EquivKind::WFB, "tau.a.0 + b.0", "a.0 + b.0", false),
    (WEAK_TAU_PREFIX, EquivKind::WFRB, "tau.a.0 + b.0", "a.0 + b.0", false),
    (WEAK_PS, EquivKind::WFBps, "tau.a.0", "a.0", false),
    (WEAK_FB_VS_FRB, EquivKind::WFB, "tau.a.0 + a.0 + b.0", "tau.a.0 + b.0", true),
    (WEAK_FB_VS_FRB, EquivKind::WFRB, "tau.a.0 + a.0 + b.0", "tau.a.0 + b.0", false),
    (WEAK_FB_VS_FRB, EquivKind::WFB, "c.(tau.a.0 + a.0 + b.0)", "c.(tau.a.0 + b.0)", true),
    (WEAK_FB_VS_FRB, EquivKind::WFRB, "c.(tau.a.0 + a.0 + b.0)", "c.(tau.a.0 + b.0)", false),
    (WEAK_PS, EquivKind::WFBps, "tau.a.0 + a.0", "tau.a.0", true),
    (WEAK_PS, EquivKind::WFRBps, "tau.a.0 + a.0", "tau.a.0", false),
    (WEAK_PS, EquivKind::WFBps, "c.(tau.a.0 + a.0 + b.0)", "c.(tau.a.0 + b.0)", true),
    (WEAK_PS, EquivKind::WFRBps, "c.(tau.a.0 + a.0 + b.0)", "c.(tau.a.0 + b.0)", false),
    (BRANCHING, EquivKind::BB, "a1!.b.0", "a2!.b.0", true),
    (BRANCHING, EquivKind::WFRB, "a1!.b.0", "a2!.b.0", false),
];

/// Replays every displayed equivalence and inequivalence.
pub fn run_golden_suite() -> Result<GoldenReport> {
    let mut results = Vec::new();
    for &(source, kind, left, right, expected) in EQUIVALENCE_CLAIMS {
        let report = bisimilar(kind, &parse_term(left)?, &parse_term(right)?)?;
        let relation = if expected { "~" } else { "!~" };
        results.push(GoldenResult {
            source,
            claim: format!("{left} {relation}{kind} {right}"),
            expected,
            actual: report.equivalent,
        });
    }

    // The bisimulation relating the two-branch process to the single branch.
    let (l1, l2) = (build_lts(&parse_term("a.0 + a.0")?)?, build_lts(&parse_term("a.0")?)?);
    let witness = relation_fixpoint(EquivKind::FRB, &l1, &l2);
    for (p, q) in [("a.0 + a.0", "a.0"), ("a!.0 + a.0", "a!.0"), ("a.0 + a!.0", "a!.0")] {
        results.push(GoldenResult {
            source: TWO_BRANCHES,
            claim: format!("FRB witness contains ({p}, {q})"),
            expected: true,
            actual: witness.contains(&parse_term(p)?, &parse_term(q)?),
        });
    }
    Ok(GoldenReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_claim_holds() {
        let report = run_golden_suite().unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(report.to_json()["total"], EQUIVALENCE_CLAIMS.len() + 3);
    }
}
