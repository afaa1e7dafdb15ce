//! Evaluate formulas and check which fragments they belong to.

use revbisim::{in_fragment, parse_formula, parse_term, satisfies, FragmentName, FragmentSpec};

fn main() -> revbisim::Result<()> {
    let states = ["a.0 + tau.b.0", "a!.0 + tau.b.0", "a.0 + tau!.b.0", "a.0 + tau!.b!.0"];
    let formulas = ["<a>tt", "<<b>>tt", "<a!>tt", "<<tau!>>init", "~init & ~<b>tt", "until(tt, a, <b!>tt)"];

    for f in formulas {
        let f = parse_formula(f)?;
        let fragments: Vec<&str> = FragmentName::ALL
            .into_iter()
            .filter(|&n| in_fragment(&f, &FragmentSpec::of(n).with_until()))
            .map(FragmentName::token)
            .collect();
        println!("{f}   fragments: {}", if fragments.is_empty() { "-".into() } else { fragments.join(" ") });
        for s in states {
            println!("    {s:<18} {}", satisfies(&parse_term(s)?, &f)?);
        }
    }
    Ok(())
}
