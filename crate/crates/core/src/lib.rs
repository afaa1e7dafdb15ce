//! Reversible sequential processes: terms, operational semantics, forward,
//! reverse and forward-reverse bisimilarities (strong, weak, past-sensitive
//! and branching), a modal logic characterizing them, and tools that explain
//! and cross-check every verdict.
//!
//! ```
//! use revbisim::{bisimilar, parse_term, EquivKind};
//!
//! let p = parse_term("a!.0 + c.0").unwrap();
//! let q = parse_term("a!.0").unwrap();
//! let report = bisimilar(EquivKind::FRB, &p, &q).unwrap();
//! assert!(!report.equivalent);
//! assert_eq!(report.distinguishing.unwrap().to_string(), "<a!><c>tt");
//! ```

pub mod corpus;
pub mod diagnose;
pub mod equiv;
pub mod error;
pub mod golden;
pub mod logic;
pub mod lts;
pub mod parser;
pub mod space;
pub mod term;

pub use corpus::{corpus_generate, read_corpus, CorpusParams};
pub use diagnose::{distinguish, enumerate_formulas, verify_characterization, CharacterizationReport};
pub use equiv::{
    backward_trace, bisimilar, cross_violations, refine_partition, relation_fixpoint,
    stuttering_violations, EquivKind, EquivalenceReport, WitnessRelation,
};
pub use error::{Error, Result};
pub use golden::{run_golden_suite, GoldenReport};
pub use logic::{depth, in_fragment, satisfies, Formula, FragmentName, FragmentSpec};
pub use lts::{backstep, build_lts, export_dot, step, weak_saturate, Lts, SaturatedLts, Transition};
pub use parser::{parse_formula, parse_term, render_formula, render_term, ParseError};
pub use space::StateSpace;
pub use term::{Action, ProcessTerm};
