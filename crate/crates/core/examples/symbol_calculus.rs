//! Symbol of the perturbed operator and the first resolvent terms.
//!
//! ```text
//! cargo run --example symbol_calculus
//! ```

use nctorus::symcalc::{resolvent_terms, symbol_p};

fn main() -> nctorus::Result<()> {
    let [a2, a1, a0] = symbol_p()?;
    println!("a2 = {a2}");
    println!("a1 = {a1}");
    println!("a0 ({} terms) = {a0}", a0.len());

    let res = resolvent_terms(2)?;
    println!("\nb0 = {}", res.b[0]);
    println!("merged terms in b0, b1, b2: {:?}", res.counts());
    let b1 = res.b[1].to_string();
    println!("b1 (first terms):");
    for line in b1.lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
