//! Exact check that `b0 + b1 + b2` inverts `P - lambda` through order -2.
//!
//! ```text
//! cargo run --example parametrix
//! ```

use nctorus::symcalc::{check_parametrix, resolvent_terms};

fn main() -> nctorus::Result<()> {
    let res = resolvent_terms(2)?;
    let report = check_parametrix(&res)?;
    for c in &report.checks {
        println!("order {:>2}: {:>6} raw terms, residual {}", c.order, c.raw_terms, c.residual);
    }
    println!("parametrix identity holds: {}", report.passed());
    Ok(())
}
