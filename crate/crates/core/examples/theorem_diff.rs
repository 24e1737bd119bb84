//! Structural diff of the derived functional against the reference listing.
//!
//! ```text
//! cargo run --example theorem_diff
//! ```

use nctorus::integrate::{br_diff, golden, theorem_diff_with_evidence};
use nctorus::pipeline::{derive, DeriveOptions};

fn main() -> nctorus::Result<()> {
    let d = derive(DeriveOptions::default())?;

    let bd = br_diff(&d.br, &golden::br_ordered()?);
    println!("B(r): {} common terms, exact = {}", bd.common, bd.is_exact());

    let td = theorem_diff_with_evidence(&d.functional, &golden::theorem()?, Some(&d.br))?;
    println!("reference lines matched: {}/{}", td.matched.len(), td.golden_lines);
    for x in &td.discrepancies {
        println!("\n{:?} at line {:?}: {}", x.kind, x.golden_line, x.operands);
        println!("  reference: {}", x.golden);
        println!("  computed:  {}", x.computed);
        if let Some(j) = x.duplicate_of {
            println!("  repeats reference line {j}");
        }
        for e in x.evidence.iter().take(3) {
            println!("  from B(r): {e}");
        }
    }
    Ok(())
}
