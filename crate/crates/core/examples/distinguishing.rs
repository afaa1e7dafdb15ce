//! Explain inequivalences with formulas of each kind's fragment.

use revbisim::{distinguish, parse_term, satisfies, EquivKind};

fn main() -> revbisim::Result<()> {
    let cases = [
        (EquivKind::FRB, "a!.0 + c.0", "a!.0"),
        (EquivKind::RB, "a!.b.0", "b.0"),
        (EquivKind::FBps, "a!.b.0", "b.0"),
        (EquivKind::WFB, "tau.a.0 + b.0", "a.0 + b.0"),
        (EquivKind::WFRB, "tau.a.0 + a.0 + b.0", "tau.a.0 + b.0"),
        (EquivKind::WFRBps, "c.(tau.a.0 + a.0 + b.0)", "c.(tau.a.0 + b.0)"),
        (EquivKind::WFRB, "a1!.b.0", "a2!.b.0"),
    ];
    for (kind, p, q) in cases {
        let (p, q) = (parse_term(p)?, parse_term(q)?);
        match distinguish(kind, &p, &q)? {
            Some(f) => {
                let side = if satisfies(&p, &f)? { "left" } else { "right" };
                println!("{kind:<7} {p} | {q}\n        {f}   (holds on the {side})");
            }
            None => println!("{kind:<7} {p} | {q}\n        equivalent"),
        }
    }
    Ok(())
}
