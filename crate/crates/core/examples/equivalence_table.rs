//! Decide every equivalence on a handful of pairs and print a table.

use revbisim::{bisimilar, parse_term, EquivKind};

const PAIRS: &[(&str, &str)] = &[
    ("a.0 + a.0", "a.0"),
    ("a!.0 + c.0", "a!.0"),
    ("a!.b.0", "b.0"),
    ("a1!.b.0", "a2!.b.0"),
    ("tau.a.0", "a.0"),
    ("tau.a.0 + a.0 + b.0", "tau.a.0 + b.0"),
];

fn main() -> revbisim::Result<()> {
    print!("{:<36}", "");
    for k in EquivKind::ALL {
        print!("{:>7}", k.token());
    }
    println!();
    for &(p, q) in PAIRS {
        let (p, q) = (parse_term(p)?, parse_term(q)?);
        print!("{:<36}", format!("{p} | {q}"));
        for k in EquivKind::ALL {
            let mark = if bisimilar(k, &p, &q)?.equivalent { "~" } else { "." };
            print!("{mark:>7}");
        }
        println!();
    }
    Ok(())
}
