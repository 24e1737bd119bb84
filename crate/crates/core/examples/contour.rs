//! The lambda-contour constant: the two rays and the arc against their
//! closed values.
//!
//! ```text
//! cargo run --example contour
//! ```

use std::f64::consts::PI;

use nctorus::hfun::{contour_constant, contour_pieces};

fn main() {
    let p = contour_pieces(1.0);
    println!("C1 = {:.15}", p.c1);
    println!("C2 = {:.15}  (erf form {:.15})", p.c2, p.c2_erf);
    println!("C3 = {:.15}", p.c3);
    println!("total = {:.15}, -2 sqrt(pi) = {:.15}", p.total(), -2.0 * PI.sqrt());
    let c = contour_constant();
    println!("contour_constant() = {} +- {:.1e}", c.value, c.error);
}
