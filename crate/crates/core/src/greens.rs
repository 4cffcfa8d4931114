//! Imaginary parts of the interface (reflected) Green tensor of the paired
//! slabs: closed Lorentzian forms, the k∥ quadrature they come from, and the
//! memory kernel rebuilt by integrating over frequency.
//!
//! Lengths are in units of λs = 2πc/ωs, so c = ωs/2π and k = 2πω/ωs.
//! The closed forms assume ε₁ = μ₂ = 2 and Re μ₁(ωs) = −2.

use log::warn;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::coupling::Geometry;
use crate::error::{Error, Result};
use crate::materials::{dispersion, plasma_frequency, reflection_resonant, Polarization, SlabModel};
use crate::quad::{integrate, integrate_real, Tolerance};
use crate::specfun::{f21, j0, j1_over_x};

/// Smallest e^{-2z₀κ} allowed at the k∥ cutoff.
pub const EVANESCENT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenDiagonal {
    pub im_gxx: f64,
    pub im_gzz: f64,
    pub omega: f64,
    /// false when x₂₁ = 0 (both points coincide).
    pub two_point: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Xx,
    Zz,
}

/// How κ = −iβ₁ depends on k∥ inside the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    /// κ = k∥, the z₀ ≪ λ limit in which the closed forms are exact.
    QuasiStatic,
    /// κ = √(k∥² + |k₁|²) with |k₁|² = ε₁|μ₁|k².
    Retarded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub k_max: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    pub seed_panels: usize,
    pub propagation: Propagation,
}

impl QuadratureSpec {
    /// Cutoff where e^{-2z₀k∥} reaches the evanescent floor (plus margin).
    pub fn for_geometry(geom: &Geometry) -> Self {
        let a = 2.0 * geom.z0;
        Self {
            k_max: 1.05 * (-EVANESCENT_FLOOR.ln()) / a,
            rel_tol: 1e-8,
            max_evals: 400_000,
            seed_panels: 64,
            propagation: Propagation::QuasiStatic,
        }
    }

    fn validate(&self, geom: &Geometry) -> Result<()> {
        if (-2.0 * geom.z0 * self.k_max).exp() >= EVANESCENT_FLOOR {
            return Err(Error::InvalidParameter(format!(
                "k_max = {} leaves evanescent factor above {EVANESCENT_FLOOR:e}",
                self.k_max
            )));
        }
        if !(self.rel_tol > 0.0) || self.max_evals < 15 * self.seed_panels.max(1) {
            return Err(Error::InvalidParameter("invalid quadrature tolerance or budget".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    pub value: f64,
    pub error: f64,
}

fn wavenumber(omega: f64, omega_s: f64) -> f64 {
    2.0 * PI * omega / omega_s
}

fn lorentz(omega: f64, gamma: f64, omega_s: f64) -> f64 {
    let dw = omega - omega_s;
    dw * dw + 0.25 * gamma * gamma
}

/// Im G_zz from the closed Lorentzian form; two-point when `two_point`.
pub fn green_zz_closed(geom: &Geometry, omega: f64, gamma: f64, omega_s: f64, two_point: bool) -> Result<f64> {
    geom.validate()?;
    let k = wavenumber(omega, omega_s);
    let a = 2.0 * geom.z0;
    let one = gamma * omega_s / (12.0 * PI * k * k * lorentz(omega, gamma, omega_s) * a.powi(3));
    if !two_point {
        return Ok(one);
    }
    Ok(one * f21(1.5, 2.0, 1.0, -geom.aspect())?)
}

/// Im G_xx from the closed Lorentzian form; `mu1_real` is Re μ₁(ωs).
pub fn green_xx_closed(
    geom: &Geometry,
    omega: f64,
    gamma: f64,
    omega_s: f64,
    mu1_real: f64,
    two_point: bool,
) -> Result<f64> {
    geom.validate()?;
    let k = wavenumber(omega, omega_s);
    let ks = 2.0 * PI;
    let a = 2.0 * geom.z0;
    let pref = gamma * omega_s / (24.0 * PI * k * k * lorentz(omega, gamma, omega_s) * a.powi(3));
    let q = mu1_real * (a * ks).powi(2);
    if !two_point {
        return Ok(pref * (1.0 - q));
    }
    let x = geom.aspect();
    let inner = f21(1.5, 2.0, 2.0, -x)? - 3.0 * x * f21(2.5, 3.0, 3.0, -x)? - q * f21(0.5, 1.0, 2.0, -x)?;
    Ok(pref * inner)
}

/// Both closed-form components at one frequency.
pub fn green_closed(geom: &Geometry, omega: f64, gamma: f64, omega_s: f64, mu1_real: f64) -> Result<GreenDiagonal> {
    let two_point = geom.x21 > 0.0;
    Ok(GreenDiagonal {
        im_gxx: green_xx_closed(geom, omega, gamma, omega_s, mu1_real, two_point)?,
        im_gzz: green_zz_closed(geom, omega, gamma, omega_s, two_point)?,
        omega,
        two_point,
    })
}

/// Integrand of the k∥ representation of Im G. `im_rp`, `im_rs` are the
/// imaginary parts of the interface reflection coefficients.
#[allow(clippy::too_many_arguments)]
fn integrand(
    kp: f64,
    component: Component,
    geom: &Geometry,
    k0: f64,
    eps1: f64,
    mu1: f64,
    im_rp: f64,
    im_rs: f64,
    propagation: Propagation,
) -> f64 {
    let a = 2.0 * geom.z0;
    let kappa = match propagation {
        Propagation::QuasiStatic => kp,
        Propagation::Retarded => (kp * kp + eps1 * mu1.abs() * k0 * k0).sqrt(),
    };
    let decay = (-a * kappa).exp();
    let alpha = kp * geom.x21;
    match component {
        Component::Zz => im_rp / (4.0 * PI * eps1 * k0 * k0) * kp.powi(3) / kappa * j0(alpha) * decay,
        Component::Xx => {
            let jx = j1_over_x(alpha);
            let tm = kappa * im_rp / (eps1 * k0 * k0) * (j0(alpha) - jx);
            let te = if kappa > 0.0 { mu1 * im_rs / kappa * jx } else { 0.0 };
            kp * decay * (tm + te) / (4.0 * PI)
        }
    }
}

/// Im G of the chosen component from direct k∥ integration with the
/// resonant interface reflection coefficients of `model`.
pub fn green_quadrature(
    geom: &Geometry,
    model: &SlabModel,
    omega: f64,
    component: Component,
    spec: &QuadratureSpec,
) -> Result<QuadratureValue> {
    geom.validate()?;
    spec.validate(geom)?;
    let omega_s = plasma_frequency(model)?;
    let k0 = wavenumber(omega, omega_s);
    let eps1 = model.eps_static;
    let mu1 = dispersion(model, omega)?.mu1.re;
    let im_rp = reflection_resonant(model, omega, Polarization::P)?.im;
    let im_rs = reflection_resonant(model, omega, Polarization::S)?.im;
    let tol = Tolerance {
        rel: spec.rel_tol,
        abs: 0.0,
        max_evals: spec.max_evals,
    };
    let (value, error) = integrate_real(
        |kp| integrand(kp, component, geom, k0, eps1, mu1, im_rp, im_rs, spec.propagation),
        0.0,
        spec.k_max,
        spec.seed_panels,
        tol,
    )?;
    Ok(QuadratureValue { value, error })
}

/// Kernel value rebuilt from the closed-form Green tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEstimate {
    /// Integral with the exact ω² weight.
    pub value: Complex64,
    /// Integral with ω² replaced by ωs².
    pub flat_value: Complex64,
    /// Lorentzian weight lying outside the integration window.
    pub tail_fraction: f64,
}

/// Half-width of the frequency window, in units of γ.
pub const KERNEL_WINDOW: f64 = 50.0;

/// K(τ) from the frequency integral of the dipole-projected Im G.
///
/// The dipoles point along (x̂ + ẑ)/√2, so the projection is
/// ½(Im G_xx + Im G_zz). For x₂₁ = 0 this is K₁₁; otherwise K₁₂. The
/// result should match −Ω₀²e^{−(γ/2+iδ)τ} (times U for K₁₂) with
/// δ = ωs − ωa.
#[allow(clippy::too_many_arguments)]
pub fn kernel_from_greens(
    geom: &Geometry,
    mu1_real_abs: f64,
    gamma_a: f64,
    gamma: f64,
    omega_s: f64,
    omega_a: f64,
    tau: f64,
) -> Result<KernelEstimate> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("delay tau = {tau} must be >= 0")));
    }
    if !(gamma > 0.0 && omega_s > 0.0 && omega_a > 0.0) {
        return Err(Error::InvalidParameter("gamma, omega_s and omega_a must be positive".into()));
    }
    geom.validate()?;
    let two_point = geom.x21 > 0.0;
    let mu1 = -mu1_real_abs;
    // Closed forms without the Lorentzian and 1/k² factors.
    let zz = green_zz_closed(geom, omega_s, gamma, omega_s, two_point)? * lorentz(omega_s, gamma, omega_s);
    let xx = green_xx_closed(geom, omega_s, gamma, omega_s, mu1, two_point)? * lorentz(omega_s, gamma, omega_s);
    // ω² Im G = ω²/k² · shape/L = c² · shape/L for the exact weight.
    let shape = 0.5 * (zz + xx) * (2.0 * PI).powi(2);
    let c = omega_s / (2.0 * PI);
    // p²/(πε₀ħ) = 3ΓA c³/ωa³ and the kernel carries a further 1/c².
    let pref = -3.0 * gamma_a * c / omega_a.powi(3);
    let delta = omega_s - omega_a;
    let half = KERNEL_WINDOW * gamma;
    let tol = Tolerance {
        rel: 1e-9,
        abs: 0.0,
        max_evals: 2_000_000,
    };
    let phase = |dw: f64| Complex64::new(0.0, -(dw + delta) * tau).exp();
    let lor = |dw: f64| 1.0 / (dw * dw + 0.25 * gamma * gamma);
    let seed = 64 + (4.0 * half * tau / PI) as usize;
    let exact = integrate(
        |dw| {
            let w = omega_s + dw;
            let k = 2.0 * PI * w / omega_s;
            phase(dw) * (w * w * shape / (k * k) * lor(dw))
        },
        -half,
        half,
        seed,
        tol,
    )?;
    let flat = integrate(
        |dw| {
            let w = omega_s + dw;
            let k = 2.0 * PI * w / omega_s;
            phase(dw) * (omega_s * omega_s * shape / (k * k) * lor(dw))
        },
        -half,
        half,
        seed,
        tol,
    )?;
    let tail_fraction = 1.0 - 2.0 / PI * (half / (0.5 * gamma)).atan();
    if tail_fraction > 0.01 {
        warn!("kernel window ±{KERNEL_WINDOW}γ misses {:.2}% of the Lorentzian weight", 100.0 * tail_fraction);
    }
    Ok(KernelEstimate {
        value: exact.value * pref,
        flat_value: flat.value * pref,
        tail_fraction,
    })
}
