use num_rational::Rational64;

use crate::ncalg::Coeff;

use super::HIndex;

fn double_factorial(n: i64) -> i64 {
    (1..=n).rev().step_by(2).product()
}

/// `H_m(1, ..., 1) = B(n - 1/2, 1/2) = pi (2n-3)!! / (2n-2)!!` with `n = sum m`.
pub fn exact_limit(idx: &HIndex) -> Coeff {
    let n = idx.total() as i64;
    Coeff::new(Rational64::new(double_factorial(2 * n - 3), double_factorial(2 * n - 2)), 2)
}

pub fn limit_f64(idx: &HIndex) -> f64 {
    exact_limit(idx).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        let l = |m: &[u32]| exact_limit(&HIndex::new(m).unwrap());
        assert_eq!(l(&[1, 1]), Coeff::new(Rational64::new(1, 2), 2));
        assert_eq!(l(&[2, 1]), Coeff::new(Rational64::new(3, 8), 2));
        assert_eq!(l(&[3, 1]), Coeff::new(Rational64::new(5, 16), 2));
        assert_eq!(l(&[2, 2, 1]), Coeff::new(Rational64::new(35, 128), 2));
        assert_eq!(l(&[3, 1, 1]), l(&[2, 2, 1]));
    }
}
