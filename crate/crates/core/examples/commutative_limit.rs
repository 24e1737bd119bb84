//! Commutative limit of the curvature functional and its log form.
//!
//! ```text
//! cargo run --example commutative_limit
//! ```

use nctorus::hfun::commutative_limit;
use nctorus::integrate::golden;
use nctorus::ncalg::{DWord, SUM};
use nctorus::pipeline::{derive, DeriveOptions};

fn main() -> nctorus::Result<()> {
    let d = derive(DeriveOptions::default())?;
    for (label, f) in [("derived", d.functional), ("reference", golden::theorem()?)] {
        let lim = commutative_limit(&f)?;
        println!("{label}: {}", lim.poly);
        let ddk = (3, vec![DWord::k(&[SUM, SUM])]);
        println!("  k^3 [di di k] from: {}", lim.breakdown_text(&ddk));
        if let Some(log) = &lim.log {
            println!("  log form: {log}");
        }
    }
    Ok(())
}
