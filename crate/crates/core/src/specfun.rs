//! Special functions: Gauss ₂F₁ for real arguments z < 1 (tuned for z ≤ 0),
//! Bessel J₀/J₁/J₂ of real non-negative argument, and a principal complex
//! square root with a pinned branch on the negative real axis.

use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_EPS: f64 = 1e-16;
const SERIES_CAP: usize = 10_000;

/// Pfaff is used down to z = -3 (w = z/(z-1) ≤ 0.75); beyond that the 1/z
/// connection formula converges faster.
const PFAFF_LIMIT: f64 = -3.0;

/// Crossover between the ascending series and the Hankel asymptotic form.
pub const BESSEL_CROSSOVER: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricArgs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl HypergeometricArgs {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Plain Maclaurin series. Returns the sum and the last relative term size.
fn series(a: f64, b: f64, c: f64, z: f64) -> (f64, f64) {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || term.abs() < SERIES_EPS * sum.abs() {
            return (sum, 0.0);
        }
    }
    (sum, (term / sum).abs())
}

fn checked_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let (sum, resid) = series(a, b, c, z);
    if resid > 0.0 && resid > 1e-10 {
        return Err(Error::NoConvergence {
            what: format!("2F1({a}, {b}; {c}; {z}) series"),
            achieved: resid,
        });
    }
    Ok(sum)
}

/// ₂F₁(a, b; c; z) for real z < 1.
///
/// |z| < 0.5 uses the power series. For z ≤ -0.5 the Pfaff transformation
/// maps the argument into [1/3, 3/4]; further out on the negative axis the
/// 1/z connection formula takes over (requires b - a non-integer, which
/// holds for every combination used in this crate).
pub fn hyp2f1(args: HypergeometricArgs) -> Result<f64> {
    let HypergeometricArgs { a, b, c, z } = args;
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite 2F1 argument ({a}, {b}; {c}; {z})"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidParameter(format!(
            "2F1 parameter c = {c} is a non-positive integer"
        )));
    }
    if z >= 1.0 {
        return Err(Error::Domain(format!("2F1 argument z = {z} must be < 1")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if z.abs() < 0.5 || z > 0.0 || terminating {
        return checked_series(a, b, c, z);
    }
    if z >= PFAFF_LIMIT || is_nonpositive_integer(c - b) {
        return pfaff(a, b, c, z);
    }
    if (b - a).fract() == 0.0 {
        // Connection formula degenerates; Pfaff still converges, only slower.
        return pfaff(a, b, c, z);
    }
    Ok(inverse_z(a, b, c, z))
}

fn pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let w = z / (z - 1.0);
    let (sum, resid) = series(a, c - b, c, w);
    if resid > 1e-10 {
        return Err(Error::NoConvergence {
            what: format!("2F1({a}, {b}; {c}; {z}) Pfaff series"),
            achieved: resid,
        });
    }
    Ok((1.0 - z).powf(-a) * sum)
}

fn inverse_z(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mz = -z;
    let y = 1.0 / z;
    let t1 = gamma(c) * gamma(b - a) * recip_gamma(b) * recip_gamma(c - a);
    let t2 = gamma(c) * gamma(a - b) * recip_gamma(a) * recip_gamma(c - b);
    let mut out = 0.0;
    if t1 != 0.0 {
        out += t1 * mz.powf(-a) * series(a, a - c + 1.0, a - b + 1.0, y).0;
    }
    if t2 != 0.0 {
        out += t2 * mz.powf(-b) * series(b, b - c + 1.0, b - a + 1.0, y).0;
    }
    out
}

/// Convenience wrapper for the argument pattern -x²/(2z₀)².
pub fn f21(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    hyp2f1(HypergeometricArgs::new(a, b, c, z))
}

/// Bessel function of the first kind J_n(x) for n ∈ {0, 1, 2}, x ≥ 0.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > 2 {
        return Err(Error::InvalidParameter(format!(
            "Bessel order {order} not supported (0, 1 or 2)"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument x = {x} must be finite and >= 0")));
    }
    Ok(match order {
        0 => j0(x),
        1 => j1(x),
        _ => j2(x),
    })
}

pub fn j0(x: f64) -> f64 {
    if x < BESSEL_CROSSOVER {
        ascending(0, x)
    } else {
        hankel(0, x)
    }
}

pub fn j1(x: f64) -> f64 {
    if x < BESSEL_CROSSOVER {
        ascending(1, x)
    } else {
        hankel(1, x)
    }
}

pub fn j2(x: f64) -> f64 {
    if x < BESSEL_CROSSOVER {
        ascending(2, x)
    } else {
        hankel(2, x)
    }
}

/// J₁(x)/x with the x → 0 limit 1/2.
pub fn j1_over_x(x: f64) -> f64 {
    if x < 1e-8 {
        0.5 - x * x / 16.0
    } else {
        j1(x) / x
    }
}

fn ascending(n: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let q = -h * h;
    let mut term = match n {
        0 => 1.0,
        1 => h,
        _ => 0.5 * h * h,
    };
    let mut sum = term;
    let nf = n as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && kf > h {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion, summed until the terms stop decreasing.
fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        // k odd contributes to Q, k even to P, with alternating signs.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (n as f64 * 0.5 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Principal square root with Re(w) ≥ 0, and Im(w) ≥ 0 whenever Re(w) = 0.
///
/// `Complex64::sqrt` returns -i for (-1, -0.0); this pins it to +i.
pub fn complex_sqrt_principal(z: Complex64) -> Complex64 {
    let mut w = z.sqrt();
    if w.re < 0.0 {
        w = -w;
    }
    if w.re == 0.0 {
        w.im = w.im.abs();
        w.re = 0.0;
    }
    w
}
