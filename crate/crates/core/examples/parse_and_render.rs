//! Parse terms and formulas, inspect the predicates, render them back.

use revbisim::{parse_formula, parse_term};

fn main() -> revbisim::Result<()> {
    for text in ["a.b.0 + c.0", "a!.(b.0 + c!.0)", "tau!.a!.0 + b.0", "b.a!.0"] {
        let t = parse_term(text)?;
        println!(
            "{:<20} initial={:<5} final={:<5} reachable={}",
            t.to_string(),
            t.is_initial(),
            t.is_final(),
            t.is_reachable()
        );
    }

    let f = parse_formula("<a>(tt & ~<<tau>>~<b>tt) & init")?;
    println!("\nformula {f} has depth {}", revbisim::depth(&f));

    match parse_term("a.(b.0 +") {
        Ok(_) => unreachable!(),
        Err(e) => println!("\n{e}"),
    }
    Ok(())
}
