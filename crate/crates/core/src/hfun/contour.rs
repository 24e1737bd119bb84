use std::f64::consts::PI;

use num_complex::Complex64;
use quadrature::double_exponential;
use serde::Serialize;

use super::HValue;

const TOL: f64 = 1e-12;

/// Maclaurin series of erf; accurate to ~1e-15 for `|z| <= 2`.
pub fn complex_erf(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut power = z; // (-1)^n z^(2n+1) / n!
    let mut sum = z;
    for n in 1..200 {
        power = -power * z2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum * (2.0 / PI.sqrt())
}

/// `e^-lambda lambda^(-1/2)` with `arg lambda = phase`.
fn integrand(r: f64, phase: f64) -> Complex64 {
    let lam = Complex64::from_polar(r, phase);
    (-lam).exp() / Complex64::from_polar(r.sqrt(), phase / 2.0)
}

fn integrate_complex(f: impl Fn(f64) -> Complex64) -> (Complex64, f64) {
    let re = double_exponential::integrate(|t| f(t).re, 0.0, 1.0, TOL);
    let im = double_exponential::integrate(|t| f(t).im, 0.0, 1.0, TOL);
    (Complex64::new(re.integral, im.integral), re.error_estimate + im.error_estimate)
}

/// Ray `r e^{i phase}`, `r` from `radius` to infinity.
fn ray(radius: f64, phase: f64) -> (Complex64, f64) {
    let dir = Complex64::from_polar(1.0, phase);
    integrate_complex(|t| {
        if t >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let r = radius + t / (1.0 - t);
        integrand(r, phase) * dir / ((1.0 - t) * (1.0 - t))
    })
}

/// Arc `radius e^{i theta}`, `theta` from `pi/4` to `7 pi/4`.
fn arc(radius: f64) -> (Complex64, f64) {
    let (a, b) = (PI / 4.0, 7.0 * PI / 4.0);
    let (v, e) = integrate_complex(|t| {
        let th = a + (b - a) * t;
        integrand(radius, th) * Complex64::new(0.0, radius) * Complex64::from_polar(1.0, th)
    });
    (v * (b - a), e * (b - a))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ContourPieces {
    pub radius: f64,
    #[serde(serialize_with = "ser_c")]
    pub c1: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub c2: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub c3: Complex64,
    /// `sqrt(pi) (erf(e^{7 i pi/8}) - erf(e^{i pi/8}))`, the arc piece at radius 1.
    #[serde(serialize_with = "ser_c")]
    pub c2_erf: Complex64,
    pub error: f64,
}

fn ser_c<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl ContourPieces {
    pub fn total(&self) -> Complex64 {
        self.c1 + self.c2 + self.c3
    }
}

/// The three pieces of the keyhole-type contour around the positive axis:
/// inbound ray at angle `pi/4`, arc of the given radius, outbound ray at `7 pi/4`.
pub fn contour_pieces(radius: f64) -> ContourPieces {
    let (out1, e1) = ray(radius, PI / 4.0);
    let (c2, e2) = arc(radius);
    let (c3, e3) = ray(radius, 7.0 * PI / 4.0);
    let c2_erf = (complex_erf(Complex64::from_polar(1.0, 7.0 * PI / 8.0))
        - complex_erf(Complex64::from_polar(1.0, PI / 8.0)))
        * PI.sqrt();
    ContourPieces { radius, c1: -out1, c2, c3, c2_erf, error: e1 + e2 + e3 }
}

/// Numeric value of the contour integral fixing the global prefactor; `-2 sqrt(pi)`.
pub fn contour_constant() -> HValue {
    let p = contour_pieces(1.0);
    let t = p.total();
    HValue { value: t.re, error: p.error + t.im.abs() }
}
