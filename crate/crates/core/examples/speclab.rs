//! Heat-trace fit of a truncated matrix model against the derived
//! functional. Pass `hspec` and `t12,t13,t23` to try another factor.
//!
//! ```text
//! cargo run --release --example speclab -- "0.08:cos(1,0,0);0.06:cos(0,1,0)" 0.3817,0,0
//! ```

use nctorus::pipeline::{derive, DeriveOptions};
use nctorus::speclab::{spec_run, HSpec, TGrid, Theta, TorusRep};

fn main() -> nctorus::Result<()> {
    let mut args = std::env::args().skip(1);
    let h: HSpec = args.next().as_deref().unwrap_or("0.1:cos(1,0,0)").parse()?;
    let theta: Theta = args.next().as_deref().unwrap_or("0,0,0").parse()?;
    let n = 6;

    let f = derive(DeriveOptions::default())?.functional;
    let rep = TorusRep::new(theta, n, h)?;
    println!("N = {n}, {} modes in {} blocks", rep.dim(), rep.blocks().len());
    let r = spec_run(&rep, &TGrid::default_for(n)?, &f)?;
    println!("free fit (c_-3/2, c_-1/2, c_1/2) = {:?}, residual {:.1e}", r.coeffs, r.residual);
    println!("volume: pi^3/2 tau(k^-6) = {:.10}, fitted gap {:.1e}", std::f64::consts::PI.powf(1.5) * r.volume, r.volume_gap);
    println!("c_-1/2 with volume fixed = {:.6e}", r.curvature_coeff);
    println!("tau(k^-6 S)             = {:.6e}", r.tau_curvature);
    println!("ratio                   = {:?}", r.ratio);
    Ok(())
}
