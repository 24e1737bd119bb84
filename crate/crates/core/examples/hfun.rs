//! H-functions: closed forms against double-exponential quadrature, and
//! exact values at the commutative point.
//!
//! ```text
//! cargo run --example hfun
//! ```

use nctorus::hfun::{exact_limit, h_closed, h_quad, HIndex, CLOSED_FORMS, DEFAULT_TOL};

fn main() -> nctorus::Result<()> {
    println!("{:<12} {:>14} {:>22} {:>22} {:>10}", "index", "args", "closed", "quadrature", "rel diff");
    for m in CLOSED_FORMS {
        let idx = HIndex::new(m)?;
        let args: Vec<f64> = [0.7, 2.5][..m.len() - 1].to_vec();
        let c = h_closed(&idx, &args)?;
        let q = h_quad(&idx, &args, DEFAULT_TOL)?;
        let rel = (c.value - q.value).abs() / q.value;
        println!("{:<12} {:>14} {:>22.16} {:>22.16} {:>10.1e}", idx.to_string(), format!("{args:?}"), c.value, q.value, rel);
    }

    println!("\nat x = y = 1:");
    for m in CLOSED_FORMS {
        let idx = HIndex::new(m)?;
        println!("  {idx} = {}", exact_limit(&idx));
    }

    // no closed form: quadrature only
    let idx: HIndex = "1,1,1,1".parse()?;
    let v = h_quad(&idx, &[0.5, 1.0, 2.0], 1e-10)?;
    println!("\n{idx}(0.5, 1, 2) = {} +- {:.1e}", v.value, v.error);
    Ok(())
}
