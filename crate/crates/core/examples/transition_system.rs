//! Build the transition system of a term and export it to Graphviz.
//!
//! Run with `cargo run --example transition_system > lts.dot`.

use revbisim::{backstep, build_lts, export_dot, parse_term, step};

fn main() -> revbisim::Result<()> {
    let p = parse_term("a.(b.0 + tau.c.0) + d.0")?;
    let l = build_lts(&p)?;
    eprintln!("{} states, {} transitions, height {}", l.states().len(), l.transitions().len(), l.height());

    // Every forward move can be undone, and undoing it leads back.
    for t in l.transitions() {
        let (a, back) = backstep(&t.target)?.expect("a target always has a past");
        assert_eq!((a, back), (t.action.clone(), t.source.clone()));
    }
    let mid = parse_term("a!.(b.0 + tau.c.0) + d.0")?;
    for (a, q) in step(&mid)? {
        eprintln!("{mid} --{a}--> {q}");
    }

    print!("{}", export_dot(&l, Some(&mid))?);
    Ok(())
}
