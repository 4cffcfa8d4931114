//! Lorentz-type dispersion of the ε-negative (EN) and μ-negative (MN) slabs,
//! effective medium parameters, the interface plasma frequency and Fresnel
//! reflection coefficients.
//!
//! Slab 1 (MN) has constant ε₁ and dispersive μ₁(ω); slab 2 (EN) has
//! dispersive ε₂(ω) and constant μ₂.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabModel {
    /// ε₁ of the MN slab.
    pub eps_static: f64,
    /// μ₂ of the EN slab.
    pub mu_static: f64,
    pub omega_ep: f64,
    pub omega_mp: f64,
    pub omega_eo: f64,
    pub omega_mo: f64,
    pub gamma_e: f64,
    pub gamma_m: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPermittivityPair {
    pub eps2: Complex64,
    pub mu1: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    P,
    S,
}

impl SlabModel {
    /// Perfectly paired slabs at plasma frequency `omega_s`: ε₁ = μ₂ = 2,
    /// ωep = ωmp = √3·ωs, no resonance offset, γ = 1e-4·ωs and thick slabs.
    pub fn paired_default(omega_s: f64) -> Self {
        let wp = 3f64.sqrt() * omega_s;
        Self {
            eps_static: 2.0,
            mu_static: 2.0,
            omega_ep: wp,
            omega_mp: wp,
            omega_eo: 0.0,
            omega_mo: 0.0,
            gamma_e: 1e-4 * omega_s,
            gamma_m: 1e-4 * omega_s,
            d1: 1.0,
            d2: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(self.eps_static > 0.0 && self.mu_static > 0.0) {
            return fail("eps_static and mu_static must be positive");
        }
        if !(self.gamma_e > 0.0 && self.gamma_m > 0.0) {
            return fail("gamma_e and gamma_m must be positive");
        }
        if !(self.omega_eo >= 0.0 && self.omega_ep > self.omega_eo) {
            return fail("need omega_ep > omega_eo >= 0");
        }
        if !(self.omega_mo >= 0.0 && self.omega_mp > self.omega_mo) {
            return fail("need omega_mp > omega_mo >= 0");
        }
        if !(self.d1 >= 0.0 && self.d2 >= 0.0 && self.d1 + self.d2 > 0.0) {
            return fail("slab thicknesses must be non-negative with positive sum");
        }
        Ok(())
    }

    /// Common linewidth when γe = γm.
    pub fn gamma(&self) -> Result<f64> {
        if self.gamma_e != self.gamma_m {
            return Err(Error::Unsupported(format!(
                "gamma_e = {} differs from gamma_m = {}",
                self.gamma_e, self.gamma_m
            )));
        }
        Ok(self.gamma_e)
    }
}

fn lorentz(wp: f64, wo: f64, g: f64, w: f64) -> Complex64 {
    1.0 + wp * wp / Complex64::new(wo * wo - w * w, -w * g)
}

pub fn dispersion(model: &SlabModel, omega: f64) -> Result<ComplexPermittivityPair> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("frequency {omega} must be positive")));
    }
    Ok(ComplexPermittivityPair {
        eps2: lorentz(model.omega_ep, model.omega_eo, model.gamma_e, omega),
        mu1: lorentz(model.omega_mp, model.omega_mo, model.gamma_m, omega),
    })
}

/// Thickness-weighted averages (εr, μr) of the slab pair.
pub fn effective_medium(model: &SlabModel, omega: f64) -> Result<(Complex64, Complex64)> {
    let (d1, d2) = (model.d1, model.d2);
    if !(d1 >= 0.0 && d2 >= 0.0 && d1 + d2 > 0.0) {
        return Err(Error::InvalidParameter(
            "slab thicknesses must be non-negative with positive sum".into(),
        ));
    }
    let p = dispersion(model, omega)?;
    let d = d1 + d2;
    let eps_r = (d1 * model.eps_static + d2 * p.eps2) / d;
    let mu_r = (d1 * p.mu1 + d2 * model.mu_static) / d;
    Ok((eps_r, mu_r))
}

/// Interface plasma frequency ωs = ωep/√(1+ε₁).
pub fn plasma_frequency(model: &SlabModel) -> Result<f64> {
    if !(model.eps_static > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps_static = {} must exceed -1",
            model.eps_static
        )));
    }
    Ok(model.omega_ep / (1.0 + model.eps_static).sqrt())
}

/// z-component of the wave vector, β = √(εμω²/c² − k∥²) on the Im β ≥ 0
/// sheet so that evanescent fields decay away from the interface.
pub fn propagation_constant(eps: Complex64, mu: Complex64, k0: f64, k_par: f64) -> Complex64 {
    let b = (eps * mu * k0 * k0 - k_par * k_par).sqrt();
    if b.im < 0.0 || (b.im == 0.0 && b.re < 0.0) {
        -b
    } else {
        b
    }
}

/// Single-interface Fresnel coefficient for a wave travelling from medium i
/// into medium j.
pub fn reflection_interface(
    eps_i: Complex64,
    eps_j: Complex64,
    mu_i: Complex64,
    mu_j: Complex64,
    beta_i: Complex64,
    beta_j: Complex64,
    polarization: Polarization,
) -> Result<Complex64> {
    let (xi, xj) = match polarization {
        Polarization::P => (eps_i, eps_j),
        Polarization::S => (mu_i, mu_j),
    };
    let num = beta_i * xj - beta_j * xi;
    let den = beta_i * xj + beta_j * xi;
    if den.norm() <= 1e-14 * (num.norm() + (beta_i * xj).norm()) || den.norm() == 0.0 {
        return Err(Error::Singular(
            "vanishing reflection denominator (surface-mode pole)".into(),
        ));
    }
    Ok(num / den)
}

/// Quasi-static (large k∥) limit of the p coefficient, (εj − εi)/(εi + εj).
pub fn reflection_quasi_static(eps_i: Complex64, eps_j: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    reflection_interface(eps_i, eps_j, one, one, one, one, Polarization::P)
}

/// Three-layer coefficient i → j → k through a layer j of thickness d_j.
pub fn reflection_three_layer(
    r_ij: Complex64,
    r_jk: Complex64,
    r_ji: Complex64,
    beta_j: Complex64,
    d_j: f64,
) -> Result<Complex64> {
    let e = (Complex64::i() * 2.0 * beta_j * d_j).exp();
    let den = 1.0 - r_ji * r_jk * e;
    if den.norm() == 0.0 {
        return Err(Error::Singular("three-layer resonance".into()));
    }
    Ok((r_ij + r_jk * e) / den)
}

/// Near-resonance Lorentzian form of the EN/MN interface coefficients.
///
/// The s-wave Lorentzian uses the static permeability μ₂ of the EN slab;
/// with the paired parameters this reproduces the closed-form x-component
/// of the Green tensor, while the dispersive μ₁ (≈ −μ₂) would not.
pub fn reflection_resonant(model: &SlabModel, omega: f64, polarization: Polarization) -> Result<Complex64> {
    let gamma = model.gamma()?;
    if !(omega > model.omega_eo && omega < model.omega_ep) {
        return Err(Error::Domain(format!(
            "frequency {omega} outside the single-negative band ({}, {})",
            model.omega_eo, model.omega_ep
        )));
    }
    let ws = plasma_frequency(model)?;
    let dw = omega - ws;
    let lor = Complex64::new(dw, -0.5 * gamma) / (dw * dw + 0.25 * gamma * gamma);
    Ok(match polarization {
        Polarization::P => {
            let e1 = model.eps_static;
            1.0 - e1 * ws * lor / (e1 + 1.0)
        }
        Polarization::S => {
            let m = model.mu_static;
            -1.0 + m * ws * lor / (m + 1.0)
        }
    })
}
