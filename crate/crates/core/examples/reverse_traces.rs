//! Reverse bisimilarity is equality of the way back.

use revbisim::{backward_trace, bisimilar, parse_term, EquivKind};

fn main() -> revbisim::Result<()> {
    let terms = ["a!.b!.0", "a!.tau!.b!.0 + c.0", "b!.0", "tau!.b!.0", "c.0 + b!.a!.0"];
    for t in terms {
        let t = parse_term(t)?;
        let names = |weak| -> revbisim::Result<String> {
            Ok(backward_trace(&t, weak)?.iter().map(|a| a.name().to_string()).collect::<Vec<_>>().join(" "))
        };
        println!("{:<22} strong [{}]  weak [{}]", t.to_string(), names(false)?, names(true)?);
    }
    let (p, q) = (parse_term("a!.tau!.b!.0 + c.0")?, parse_term("a!.b!.0")?);
    println!("\nRB  {}", bisimilar(EquivKind::RB, &p, &q)?.equivalent);
    println!("wRB {}", bisimilar(EquivKind::WRB, &p, &q)?.equivalent);
    Ok(())
}
