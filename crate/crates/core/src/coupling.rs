//! Atom–plasmon coupling Ω₀, the inter-atom interaction function U(x₂₁, z₀)
//! and the collective couplings Ωs, Ωa.
//!
//! Lengths are measured in units of the plasma wavelength λs = 2πc/ωs.

use log::warn;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::f21;

/// Positions of the two atoms: both at height `z0` above the interface,
/// separated by `x21` along it (both in units of λs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub x21: f64,
    pub z0: f64,
    /// Absolute plasma wavelength, only used to convert reported lengths.
    pub lambda_s: f64,
}

impl Geometry {
    pub fn new(x21: f64, z0: f64) -> Self {
        Self {
            x21,
            z0,
            lambda_s: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z0 > 0.0) || !self.z0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "atom height z0 = {} must be positive (coupling diverges at the interface)",
                self.z0
            )));
        }
        if !(self.x21 >= 0.0) || !self.x21.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "separation x21 = {} must be non-negative",
                self.x21
            )));
        }
        Ok(())
    }

    /// X = x₂₁²/(2z₀)², the (negated) hypergeometric argument.
    pub fn aspect(&self) -> f64 {
        let r = self.x21 / (2.0 * self.z0);
        r * r
    }
}

/// The four numbers that fix the dynamics, all in units of the rate `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub omega0: f64,
    pub u_factor: f64,
    pub delta: f64,
    pub gamma: f64,
    /// Free-space decay rate ΓA, only meaningful in physical mode.
    pub gamma_a: Option<f64>,
}

impl CouplingParams {
    pub fn new(omega0: f64, u_factor: f64, delta: f64, gamma: f64) -> Self {
        Self {
            omega0,
            u_factor,
            delta,
            gamma,
            gamma_a: None,
        }
    }

    /// γ = 0 is accepted so that lossless limits can be run.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.omega0 >= 0.0) || !self.omega0.is_finite() {
            return bad(format!("omega0 = {} must be finite and >= 0", self.omega0));
        }
        if !(0.0..=1.0).contains(&self.u_factor) {
            return bad(format!("U = {} must lie in [0, 1]", self.u_factor));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return bad(format!("gamma = {} must be finite and >= 0", self.gamma));
        }
        if !self.delta.is_finite() {
            return bad(format!("delta = {} must be finite", self.delta));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveCouplings {
    pub omega_s: f64,
    pub omega_a: f64,
}

/// Bracket 3 + 4π²|Re μ₁|(2z₀)² shared by Ω₀ and U.
fn bracket(z0: f64, mu1_real_abs: f64) -> f64 {
    let a = 2.0 * z0;
    3.0 + 4.0 * PI * PI * mu1_real_abs * a * a
}

/// Ω₀ for atoms with free-space rate ΓA at height z₀ above the interface.
pub fn coupling_strength(geom: &Geometry, mu1_real_abs: f64, gamma_a: f64, omega_s: f64) -> Result<f64> {
    if !(geom.z0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "coupling strength diverges at z0 = {}",
            geom.z0
        )));
    }
    if !(gamma_a >= 0.0 && omega_s > 0.0) {
        return Err(Error::InvalidParameter(
            "gamma_a must be >= 0 and omega_s > 0".into(),
        ));
    }
    let a = 2.0 * geom.z0;
    Ok((omega_s * gamma_a * bracket(geom.z0, mu1_real_abs) / (64.0 * PI.powi(3) * a.powi(3))).sqrt())
}

/// U(x₂₁, z₀) before clamping.
pub fn interaction_function_raw(geom: &Geometry, mu1_real_abs: f64) -> Result<f64> {
    geom.validate()?;
    let x = geom.aspect();
    let z = -x;
    let f_half = f21(0.5, 1.0, 2.0, z)?;
    let f_322 = f21(1.5, 2.0, 2.0, z)?;
    let f_321 = f21(1.5, 2.0, 1.0, z)?;
    let f_533 = f21(2.5, 3.0, 3.0, z)?;
    let inner = f_322 + 2.0 * f_321 - 3.0 * f_half - 3.0 * x * f_533;
    Ok(f_half + inner / bracket(geom.z0, mu1_real_abs))
}

/// U(x₂₁, z₀) clamped into [0, 1]; an excursion beyond 1e-8 is logged.
pub fn interaction_function(geom: &Geometry, mu1_real_abs: f64) -> Result<f64> {
    let raw = interaction_function_raw(geom, mu1_real_abs)?;
    let clamped = raw.clamp(0.0, 1.0);
    if (raw - clamped).abs() > 1e-8 {
        warn!(
            "interaction function U = {raw:.3e} at x21 = {}, z0 = {} clamped to {clamped}",
            geom.x21, geom.z0
        );
    }
    Ok(clamped)
}

/// Ωs = Ω₀√(1+U), Ωa = Ω₀√(1−U).
pub fn collective_couplings(params: &CouplingParams) -> CollectiveCouplings {
    let u = params.u_factor;
    CollectiveCouplings {
        omega_s: params.omega0 * (1.0 + u).sqrt(),
        omega_a: params.omega0 * (1.0 - u).max(0.0).sqrt(),
    }
}

/// Interface field of a source atom at `source_x`, height `source.z0`,
/// sampled at `x`; returns Ω₀²·U(|x − source_x|, z₀) in scaled units.
pub fn field_distribution(
    source: &Geometry,
    source_x: f64,
    x: f64,
    params: &CouplingParams,
    mu1_real_abs: f64,
) -> Result<f64> {
    let g = Geometry {
        x21: (x - source_x).abs(),
        ..*source
    };
    Ok(params.omega0 * params.omega0 * interaction_function(&g, mu1_real_abs)?)
}
