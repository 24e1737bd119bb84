//! Full derivation: resolvent, radial integrand `B(r)`, curvature functional.
//!
//! ```text
//! cargo run --example derive
//! ```

use nctorus::integrate::Convention;
use nctorus::pipeline::{derive, DeriveOptions};

fn main() -> nctorus::Result<()> {
    let d = derive(DeriveOptions::default())?;
    let c = d.counts();
    println!("b0/b1/b2 terms: {:?}, B(r) terms: {}, lines: {}", c.b, c.br_terms, c.functional_lines);
    println!("derived in {:?}\n", d.elapsed);

    println!("first terms of B(r):");
    for t in d.br.iter().take(5) {
        println!("  {t}");
    }

    let text = d.functional.to_text();
    println!("\nfunctional (first lines):");
    for line in text.lines().take(6) {
        println!("  {line}");
    }

    let raw = derive(DeriveOptions { convention: Convention::Raw, flat: false })?;
    println!("\nraw convention prefactor: {}", raw.functional.prefactor);
    Ok(())
}
