//! Generate a small corpus and check every characterization over it.
//!
//! `cargo run --release --example corpus_check -- 3` sets the size bound.

use revbisim::{corpus_generate, verify_characterization, CorpusParams, EquivKind};

fn main() -> revbisim::Result<()> {
    let max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let corpus = corpus_generate(&CorpusParams::new(&["a", "b", "tau"], max, true)?)?;
    println!("{} terms", corpus.len());
    for kind in EquivKind::CHARACTERIZED {
        let report = verify_characterization(kind, &corpus, 3)?;
        println!(
            "{kind:<7} pairs {:>8}  equivalent {:>7}  formulas {:>5}  deepest {:>2}  {}",
            report.pairs_checked,
            report.equivalent_pairs,
            report.formulas_enumerated,
            report.deepest_formula,
            if report.passed() { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}
