//! Branching bisimilarity against weak forward-reverse bisimilarity, and the
//! stuttering and cross properties behind their agreement on initial terms.

use revbisim::{bisimilar, build_lts, cross_violations, parse_term, stuttering_violations, EquivKind};

fn main() -> revbisim::Result<()> {
    for (p, q) in [("tau.a.0 + a.0", "tau.a.0"), ("tau.(a.0 + b.0) + a.0", "tau.(a.0 + b.0)"), ("a1!.b.0", "a2!.b.0")] {
        let (p, q) = (parse_term(p)?, parse_term(q)?);
        let bb = bisimilar(EquivKind::BB, &p, &q)?.equivalent;
        let wfrb = bisimilar(EquivKind::WFRB, &p, &q)?.equivalent;
        println!("{p} | {q}: BB {bb}, wFRB {wfrb}");
    }
    let l1 = build_lts(&parse_term("tau.tau.a.0 + tau.b.0")?)?;
    let l2 = build_lts(&parse_term("tau.a.0 + tau.tau.b.0")?)?;
    println!("stuttering violations: {}", stuttering_violations(&l1).len());
    println!("cross violations: {}", cross_violations(&l1, &l2).len());
    Ok(())
}
