//! Closed-form evolution of the single-excitation two-atom state.
//!
//! In the symmetric/antisymmetric basis the two memory equations decouple.
//! Each collective mode with coupling Ω obeys
//!
//! ```text
//! Ċ(t) = −Ω² ∫₀ᵗ e^{−2λ(t−t')} C(t') dt',   λ = (γ + 2iδ)/4,
//! ```
//!
//! whose solution is C(t) = c₀e^{−λt}[cosh Ω̃t + λ sinh(Ω̃t)/Ω̃] with
//! Ω̃ = √(λ² − Ω²). The image (plasma) amplitude is stored untilded,
//! b(t) = iΩc₀e^{−λt} sinh(Ω̃t)/Ω̃, so that every stored value is bounded.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::coupling::{collective_couplings, CouplingParams};
use crate::error::{Error, Result};
use crate::specfun::complex_sqrt_principal;

/// Relative band around u/4 treated as the critical point.
pub const CRITICAL_BAND: f64 = 1e-12;
/// |Ω̃| below this fraction of the rate scale uses the degenerate form.
pub const DEGENERATE_RABI: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Below,
    Critical,
    Above,
}

/// Joint classification of the two collective modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeClass {
    /// (a) both couplings at or below u/4.
    BothBelow,
    /// (b) Ωs above, Ωa at or below u/4.
    Mixed,
    /// (c) both above u/4.
    BothAbove,
}

impl RegimeClass {
    pub fn label(&self) -> &'static str {
        match self {
            RegimeClass::BothBelow => "a",
            RegimeClass::Mixed => "b",
            RegimeClass::BothAbove => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub mode: Option<Mode>,
    pub omega_mode: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Ω̃ = √((γ+2iδ)²/16 − Ω²), principal branch.
    pub rabi_eff: Complex64,
    /// γ/4 − Re Ω̃.
    pub rate_slow: f64,
    /// γ/4 + Re Ω̃.
    pub rate_fast: f64,
    pub regime: Regime,
}

impl ModeSolution {
    /// λ = (γ + 2iδ)/4.
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.25 * self.gamma, 0.5 * self.delta)
    }

    /// u = |γ + 2iδ|.
    pub fn u(&self) -> f64 {
        self.gamma.hypot(2.0 * self.delta)
    }

    /// Ω̄ = √(Ω² − λ²), the oscillation frequency above threshold.
    pub fn rabi_bar(&self) -> Complex64 {
        let l = self.lambda();
        complex_sqrt_principal(self.omega_mode * self.omega_mode - l * l)
    }

    fn scale(&self) -> f64 {
        self.gamma.max(self.delta.abs()).max(self.omega_mode)
    }

    pub fn is_degenerate(&self) -> bool {
        self.rabi_eff.norm() <= DEGENERATE_RABI * self.scale()
    }
}

pub fn mode_solution(omega_mode: f64, gamma: f64, delta: f64) -> Result<ModeSolution> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be finite and >= 0")));
    }
    if !(omega_mode >= 0.0 && omega_mode.is_finite()) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mode coupling {omega_mode} and detuning {delta} must be finite, coupling >= 0"
        )));
    }
    let lam = Complex64::new(0.25 * gamma, 0.5 * delta);
    let rabi_eff = complex_sqrt_principal(lam * lam - omega_mode * omega_mode);
    let u = gamma.hypot(2.0 * delta);
    let threshold = 0.25 * u;
    let regime = if (omega_mode - threshold).abs() <= CRITICAL_BAND * u {
        Regime::Critical
    } else if omega_mode > threshold {
        Regime::Above
    } else {
        Regime::Below
    };
    Ok(ModeSolution {
        mode: None,
        omega_mode,
        gamma,
        delta,
        rabi_eff,
        rate_slow: 0.25 * gamma - rabi_eff.re,
        rate_fast: 0.25 * gamma + rabi_eff.re,
        regime,
    })
}

/// Both collective mode solutions for a parameter set.
pub fn collective_modes(params: &CouplingParams) -> Result<(ModeSolution, ModeSolution)> {
    params.validate()?;
    let cc = collective_couplings(params);
    let mut s = mode_solution(cc.omega_s, params.gamma, params.delta)?;
    let mut a = mode_solution(cc.omega_a, params.gamma, params.delta)?;
    s.mode = Some(Mode::Symmetric);
    a.mode = Some(Mode::Antisymmetric);
    Ok((s, a))
}

/// sinh(w)/w for small |w|.
fn sinhc_series(w: Complex64) -> Complex64 {
    let w2 = w * w;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..30 {
        let kf = k as f64;
        term *= w2 / ((2.0 * kf) * (2.0 * kf + 1.0));
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    sum
}

/// The two propagators of a mode:
/// f(t) = e^{−λt}[cosh Ω̃t + λ sinh(Ω̃t)/Ω̃] and g(t) = e^{−λt} sinh(Ω̃t)/Ω̃,
/// so that C = c₀f, b = iΩc₀g and Ċ = −Ω²c₀g.
pub fn propagators(sol: &ModeSolution, t: f64) -> (Complex64, Complex64) {
    let lam = sol.lambda();
    let w = sol.rabi_eff;
    let decay = (-lam * t).exp();
    if sol.is_degenerate() {
        return (decay * (1.0 + lam * t), decay * t);
    }
    let wt = w * t;
    if wt.norm() <= 0.5 {
        let g = t * sinhc_series(wt);
        return (decay * (wt.cosh() + lam * g), decay * g);
    }
    if sol.regime == Regime::Above {
        let bar = sol.rabi_bar();
        let bt = bar * t;
        if bt.im.abs() < 50.0 {
            let s = bt.sin() / bar;
            return (decay * (bt.cos() + lam * s), decay * s);
        }
    }
    let grow = ((w - lam) * t).exp();
    let shrink = (-(w + lam) * t).exp();
    let r = lam / w;
    let f = 0.5 * (1.0 + r) * grow + 0.5 * (1.0 - r) * shrink;
    let g = (grow - shrink) / (2.0 * w);
    (f, g)
}

/// Collective-mode amplitude C(t) for C(0) = c0.
pub fn amplitude_mode(t: f64, sol: &ModeSolution, c0: Complex64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time t = {t} must be >= 0")));
    }
    Ok(c0 * propagators(sol, t).0)
}

/// Untilded image amplitude b(t) = iΩc₀e^{−λt} sinh(Ω̃t)/Ω̃.
pub fn image_amplitude_mode(t: f64, sol: &ModeSolution, c0: Complex64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time t = {t} must be >= 0")));
    }
    Ok(Complex64::i() * sol.omega_mode * c0 * propagators(sol, t).1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState {
    pub t: f64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub cs: Complex64,
    pub ca: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

impl AmplitudeState {
    /// State with given atomic amplitudes and empty images at t = 0.
    pub fn from_atoms(c1: Complex64, c2: Complex64) -> Self {
        Self::with_images(0.0, c1, c2, Complex64::default(), Complex64::default())
    }

    pub fn from_collective(cs: Complex64, ca: Complex64) -> Self {
        Self::from_atoms((cs + ca) * FRAC_1_SQRT_2, (cs - ca) * FRAC_1_SQRT_2)
    }

    pub fn with_images(t: f64, c1: Complex64, c2: Complex64, b1: Complex64, b2: Complex64) -> Self {
        Self {
            t,
            c1,
            c2,
            cs: (c1 + c2) * FRAC_1_SQRT_2,
            ca: (c1 - c2) * FRAC_1_SQRT_2,
            b1,
            b2,
        }
    }

    /// Atom 1 excited, atom 2 in the ground state.
    pub fn e1g2() -> Self {
        Self::from_atoms(Complex64::new(1.0, 0.0), Complex64::default())
    }

    pub fn symmetric() -> Self {
        Self::from_collective(Complex64::new(1.0, 0.0), Complex64::default())
    }

    pub fn antisymmetric() -> Self {
        Self::from_collective(Complex64::default(), Complex64::new(1.0, 0.0))
    }

    pub fn atomic_norm(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    /// |C₁|² + |C₂|² + |b₁|² + |b₂|².
    pub fn total_norm(&self) -> f64 {
        self.atomic_norm() + self.b1.norm_sqr() + self.b2.norm_sqr()
    }

    pub fn p1(&self) -> f64 {
        self.c1.norm_sqr()
    }

    pub fn p2(&self) -> f64 {
        self.c2.norm_sqr()
    }

    /// Checks that this is a valid starting state: atomic norm at most one
    /// and no image excitation.
    pub fn validate_initial(&self) -> Result<()> {
        let n = self.atomic_norm();
        if !n.is_finite() || n > 1.0 + 1e-9 {
            return Err(Error::Validation(format!(
                "initial state norm {n} exceeds 1"
            )));
        }
        if self.b1.norm() > 0.0 || self.b2.norm() > 0.0 {
            return Err(Error::Validation("initial image amplitudes must vanish".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Analytic,
    OdeOracle,
    VolterraOracle,
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::OdeOracle => "ode_oracle",
            Source::VolterraOracle => "volterra_oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub states: Vec<AmplitudeState>,
    pub source: Source,
}

impl TimeSeries {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Largest |ΔC₁|, |ΔC₂| between two series on the same grid.
    pub fn sup_distance(&self, other: &TimeSeries) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::Validation("series lengths differ".into()));
        }
        let mut d: f64 = 0.0;
        for (a, b) in self.states.iter().zip(&other.states) {
            if (a.t - b.t).abs() > 1e-9 * a.t.abs().max(1.0) {
                return Err(Error::Validation("series time grids differ".into()));
            }
            d = d.max((a.c1 - b.c1).norm()).max((a.c2 - b.c2).norm());
        }
        Ok(d)
    }
}

/// Uniform grid of `samples` points on [0, t_end].
pub fn uniform_grid(t_end: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time grid needs samples >= 2 and t_end > 0 (got {samples}, {t_end})"
        )));
    }
    let h = t_end / (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| if i + 1 == samples { t_end } else { h * i as f64 })
        .collect())
}

/// Closed-form trajectory of atoms and images on `t_grid`.
pub fn evolve(t_grid: &[f64], params: &CouplingParams, initial: &AmplitudeState) -> Result<TimeSeries> {
    initial.validate_initial()?;
    let (sym, anti) = collective_modes(params)?;
    let i = Complex64::i();
    let mut states = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time t = {t} must be >= 0")));
        }
        let (fs, gs) = propagators(&sym, t);
        let (fa, ga) = propagators(&anti, t);
        let cs = initial.cs * fs;
        let ca = initial.ca * fa;
        let bs = i * sym.omega_mode * initial.cs * gs;
        let ba = i * anti.omega_mode * initial.ca * ga;
        states.push(AmplitudeState {
            t,
            c1: (cs + ca) * FRAC_1_SQRT_2,
            c2: (cs - ca) * FRAC_1_SQRT_2,
            cs,
            ca,
            b1: (bs + ba) * FRAC_1_SQRT_2,
            b2: (bs - ba) * FRAC_1_SQRT_2,
        });
    }
    Ok(TimeSeries {
        states,
        source: Source::Analytic,
    })
}

/// Same trajectory as [`evolve`]; the image amplitudes b₁, b₂ are always
/// carried alongside the atomic ones.
pub fn image_amplitudes(t_grid: &[f64], params: &CouplingParams, initial: &AmplitudeState) -> Result<TimeSeries> {
    evolve(t_grid, params, initial)
}

/// Atom–image superpositions of both collective modes.
///
/// For a mode with amplitudes (c, b): D̃s = i·c·sin φ + b·cos φ decays as
/// e^{−(λ+Ω̃)t} and D̃a = c·cos φ − i·b·sin φ as e^{−(λ−Ω̃)t}, with
/// cos²φ = ½ + Ω̃/(2λ) and sin φ = −Ω/(2λ cos φ). G̃s, G̃a are the same
/// combinations for the antisymmetric mode (angle ψ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionPair {
    pub d_s: Complex64,
    pub d_a: Complex64,
    pub g_s: Complex64,
    pub g_a: Complex64,
    pub cos_phi_sq: Complex64,
    pub cos_psi_sq: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngle {
    pub cos_sq: Complex64,
    pub cos: Complex64,
    pub sin: Complex64,
}

pub fn mixing_angle(sol: &ModeSolution) -> Result<MixingAngle> {
    let lam = sol.lambda();
    if sol.is_degenerate() || lam.norm() == 0.0 {
        return Err(Error::Unsupported(
            "superpositions are degenerate at the critical point".into(),
        ));
    }
    let cos_sq = 0.5 + sol.rabi_eff / (2.0 * lam);
    let cos = complex_sqrt_principal(cos_sq);
    if cos.norm() == 0.0 {
        return Err(Error::Unsupported("vanishing mixing amplitude".into()));
    }
    let sin = -sol.omega_mode / (2.0 * lam * cos);
    Ok(MixingAngle { cos_sq, cos, sin })
}

/// (D̃s, D̃a) for one mode given its atom and image amplitudes.
pub fn mode_superposition(angle: &MixingAngle, c: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    (i * c * angle.sin + b * angle.cos, c * angle.cos - i * b * angle.sin)
}

/// Rebuilds the atom amplitude: c = (γ+2iδ)/(4Ω̃)·(D̃a cos φ + i D̃s sin φ).
pub fn reconstruct_amplitude(sol: &ModeSolution, angle: &MixingAngle, d_s: Complex64, d_a: Complex64) -> Complex64 {
    sol.lambda() / sol.rabi_eff * (d_a * angle.cos + Complex64::i() * d_s * angle.sin)
}

pub fn superpositions(
    sym: &ModeSolution,
    anti: &ModeSolution,
    state: &AmplitudeState,
) -> Result<SuperpositionPair> {
    let phi = mixing_angle(sym)?;
    let psi = mixing_angle(anti)?;
    let bs = (state.b1 + state.b2) * FRAC_1_SQRT_2;
    let ba = (state.b1 - state.b2) * FRAC_1_SQRT_2;
    let (d_s, d_a) = mode_superposition(&phi, state.cs, bs);
    let (g_s, g_a) = mode_superposition(&psi, state.ca, ba);
    Ok(SuperpositionPair {
        d_s,
        d_a,
        g_s,
        g_a,
        cos_phi_sq: phi.cos_sq,
        cos_psi_sq: psi.cos_sq,
    })
}

/// Regime of each mode relative to u/4; the critical point counts as below.
pub fn classify_regime(params: &CouplingParams) -> Result<RegimeClass> {
    let (s, a) = collective_modes(params)?;
    let above = |m: &ModeSolution| m.regime == Regime::Above;
    Ok(match (above(&s), above(&a)) {
        (true, true) => RegimeClass::BothAbove,
        (true, false) => RegimeClass::Mixed,
        (false, false) => RegimeClass::BothBelow,
        // Ωs ≥ Ωa, so this cannot happen.
        (false, true) => RegimeClass::Mixed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffResonant {
    pub value: Complex64,
    /// |approx − exact|/|exact| when requested.
    pub rel_error: Option<f64>,
}

/// Large-detuning form of a mode amplitude:
/// c₀{e^{−(γ−2iδ)Ω²t/(2δ²)} + (Ω²/4δ²)e^{−(γ+2iδ)t/2}}.
pub fn offresonant_amplitude(t: f64, sol: &ModeSolution, c0: Complex64, order_check: bool) -> Result<OffResonant> {
    if sol.delta == 0.0 {
        return Err(Error::Domain("off-resonant form needs delta != 0".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time t = {t} must be >= 0")));
    }
    let (g, d, w) = (sol.gamma, sol.delta, sol.omega_mode);
    let r = w * w / (d * d);
    let slow = (-Complex64::new(g, -2.0 * d) * (0.5 * r * t)).exp();
    let fast = 0.25 * r * (-Complex64::new(g, 2.0 * d) * (0.5 * t)).exp();
    let value = c0 * (slow + fast);
    let rel_error = if order_check {
        let exact = amplitude_mode(t, sol, c0)?;
        Some((value - exact).norm() / exact.norm())
    } else {
        None
    };
    Ok(OffResonant { value, rel_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, Tolerance};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mode_solution_examples() {
        let s = mode_solution(0.0, 1.0, 0.0).unwrap();
        assert!((s.rabi_eff - c(0.25, 0.0)).norm() < 1e-16);
        assert_eq!(s.regime, Regime::Below);
        let s = mode_solution(0.25, 1.0, 0.0).unwrap();
        assert_eq!(s.rabi_eff, c(0.0, 0.0));
        assert_eq!(s.regime, Regime::Critical);
        let s = mode_solution(0.705, 1.0, 0.0).unwrap();
        assert!((s.rabi_eff - c(0.0, 0.6592)).norm() < 1e-4);
        assert_eq!(s.regime, Regime::Above);
        assert!(mode_solution(0.1, -1.0, 0.0).is_err());
    }

    #[test]
    fn real_or_imaginary_at_resonance() {
        for i in 0..100 {
            let w = 0.6 * i as f64 / 99.0;
            let s = mode_solution(w, 1.0, 0.0).unwrap();
            if w < 0.25 {
                assert_eq!(s.rabi_eff.im, 0.0);
            } else if w > 0.25 {
                assert_eq!(s.rabi_eff.re, 0.0);
            }
            assert!((s.rate_slow + s.rate_fast - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn amplitude_at_zero_and_lossless_limit() {
        let s = mode_solution(0.7, 0.3, 2.0).unwrap();
        assert_eq!(amplitude_mode(0.0, &s, c(0.6, 0.8)).unwrap(), c(0.6, 0.8));
        assert!(amplitude_mode(-1.0, &s, c(1.0, 0.0)).is_err());
        let s = mode_solution(1.3, 0.0, 0.0).unwrap();
        let period = 2.0 * std::f64::consts::PI / 1.3;
        for i in 0..=1000 {
            let t = 10.0 * period * i as f64 / 1000.0;
            let v = amplitude_mode(t, &s, c(1.0, 0.0)).unwrap();
            assert!((v - c((1.3 * t).cos(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn critical_limit_matches_neighbours() {
        let crit = mode_solution(0.25, 1.0, 0.0).unwrap();
        assert!(crit.is_degenerate());
        let near = mode_solution(0.25 + 1e-7, 1.0, 0.0).unwrap();
        let below = mode_solution(0.25 - 1e-7, 1.0, 0.0).unwrap();
        for &t in &[0.1, 1.0, 5.0, 20.0, 100.0] {
            let a = amplitude_mode(t, &crit, c(1.0, 0.0)).unwrap();
            let want = (-0.25 * t).exp() * (1.0 + 0.25 * t);
            assert!((a.re - want).abs() < 1e-15 && a.im == 0.0);
            assert!((amplitude_mode(t, &near, c(1.0, 0.0)).unwrap() - a).norm() < 1e-6);
            assert!((amplitude_mode(t, &below, c(1.0, 0.0)).unwrap() - a).norm() < 1e-6);
        }
    }

    #[test]
    fn branches_agree_at_switch_points() {
        // Just inside and outside |Ω̃t| = 0.5 and the trig/exponential switch.
        for &(w, g, d) in &[(0.1, 1.0, 0.0), (0.7, 1.0, 0.0), (2.0, 1.0, 3.0), (0.3, 0.2, -1.0)] {
            let s = mode_solution(w, g, d).unwrap();
            let t0 = 0.5 / s.rabi_eff.norm();
            let a = propagators(&s, t0 * (1.0 - 1e-12));
            let b = propagators(&s, t0 * (1.0 + 1e-12));
            assert!((a.0 - b.0).norm() < 1e-10 && (a.1 - b.1).norm() < 1e-10);
        }
    }

    /// Ċ(t) + Ω² ∫₀ᵗ e^{−2λ(t−t')}C(t')dt' evaluated with adaptive quadrature.
    fn memory_residual(s: &ModeSolution, t: f64) -> f64 {
        let lam = s.lambda();
        let cdot = -s.omega_mode.powi(2) * propagators(s, t).1;
        if t == 0.0 {
            return cdot.norm();
        }
        let mem = integrate(
            |tp| (-2.0 * lam * (t - tp)).exp() * propagators(s, tp).0,
            0.0,
            t,
            4,
            Tolerance { rel: 1e-12, abs: 1e-15, max_evals: 100_000 },
        )
        .unwrap()
        .value;
        (cdot + s.omega_mode.powi(2) * mem).norm()
    }

    #[test]
    fn closed_form_solves_memory_equation() {
        let mut rng = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let w = 3.0 * next();
            let d = 10.0 * (next() - 0.5);
            let s = mode_solution(w, 1.0, d).unwrap();
            for k in 0..=10 {
                let t = 0.5 * k as f64;
                let r = memory_residual(&s, t);
                assert!(r < 1e-6 * w * w + 1e-14, "w={w} d={d} t={t} r={r}");
            }
        }
    }

    #[test]
    fn evolve_examples() {
        let grid = uniform_grid(50.0, 201).unwrap();
        let ts = evolve(&grid, &CouplingParams::new(0.15, 0.0, 0.0, 1.0), &AmplitudeState::e1g2()).unwrap();
        assert!(ts.states.iter().all(|s| s.p2() < 1e-30));
        let ts = evolve(&grid, &CouplingParams::new(0.7, 0.6, 1.0, 1.0), &AmplitudeState::symmetric()).unwrap();
        assert!(ts.states.iter().all(|s| s.ca.norm() == 0.0));
        let bad = AmplitudeState::from_atoms(c(1.0, 0.0), c(0.5, 0.0));
        assert!(matches!(evolve(&grid, &CouplingParams::new(0.1, 0.0, 0.0, 1.0), &bad), Err(Error::Validation(_))));
        let mut imaged = AmplitudeState::e1g2();
        imaged.b1 = c(0.1, 0.0);
        assert!(evolve(&grid, &CouplingParams::new(0.1, 0.0, 0.0, 1.0), &imaged).is_err());
    }

    #[test]
    fn slow_antisymmetric_rate_near_unit_u() {
        let (_, a) = collective_modes(&CouplingParams::new(0.15, 0.95, 0.0, 1.0)).unwrap();
        assert!((a.rate_slow - 0.00226).abs() < 5e-6);
    }

    #[test]
    fn images_start_empty_and_lossless_exchange_conserves() {
        let grid = uniform_grid(30.0, 301).unwrap();
        let ts = image_amplitudes(&grid, &CouplingParams::new(0.4, 1.0, 0.0, 0.0), &AmplitudeState::symmetric()).unwrap();
        assert_eq!(ts.states[0].b1, c(0.0, 0.0));
        for s in &ts.states {
            let bs = (s.b1 + s.b2) * FRAC_1_SQRT_2;
            assert!((s.cs.norm_sqr() + bs.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_derivative_matches_image_loss() {
        let p = CouplingParams::new(0.6, 0.3, 1.5, 1.0);
        let h = 1e-4;
        for k in 1..20 {
            let t = 0.5 * k as f64;
            let ts = evolve(&[t - h, t, t + h], &p, &AmplitudeState::e1g2()).unwrap();
            let d = (ts.states[2].total_norm() - ts.states[0].total_norm()) / (2.0 * h);
            let s = &ts.states[1];
            let want = -p.gamma * (s.b1.norm_sqr() + s.b2.norm_sqr());
            assert!((d - want).abs() < 1e-7, "t={t} d={d} want={want}");
        }
    }

    #[test]
    fn superposition_properties() {
        let p = CouplingParams::new(0.15, 0.5, 0.0, 1.0);
        let (s, a) = collective_modes(&p).unwrap();
        let grid = uniform_grid(40.0, 81).unwrap();
        let ts = evolve(&grid, &p, &AmplitudeState::e1g2()).unwrap();
        let phi = mixing_angle(&s).unwrap();
        assert!((phi.cos * phi.cos + phi.sin * phi.sin - 1.0).norm() < 1e-14);
        let mut log_da = Vec::new();
        for st in &ts.states {
            let sp = superpositions(&s, &a, st).unwrap();
            let rebuilt = reconstruct_amplitude(&s, &phi, sp.d_s, sp.d_a);
            assert!((rebuilt - st.cs).norm() < 1e-10);
            let psi = mixing_angle(&a).unwrap();
            assert!((reconstruct_amplitude(&a, &psi, sp.g_s, sp.g_a) - st.ca).norm() < 1e-10);
            log_da.push((st.t, sp.d_a.norm().ln()));
        }
        // ln|D̃a| is exactly linear with slope −(γ/4 − Ω̃s).
        let slope = -(0.25 - s.rabi_eff.re);
        let c0 = log_da[0].1;
        for (t, l) in log_da {
            assert!((l - (c0 + slope * t)).abs() < 1e-8);
        }
        let crit = mode_solution(0.25, 1.0, 0.0).unwrap();
        assert!(matches!(superpositions(&crit, &a, &ts.states[0]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn regime_classes() {
        let cls = |w, u| classify_regime(&CouplingParams::new(w, u, 0.0, 1.0)).unwrap();
        assert_eq!(cls(0.15, 0.95), RegimeClass::BothBelow);
        assert_eq!(cls(0.5, 0.99), RegimeClass::Mixed);
        assert_eq!(cls(25.0, 0.1), RegimeClass::BothAbove);
        let u: f64 = 0.4;
        let b1 = 0.25 / (1.0 + u).sqrt();
        let b2 = 0.25 / (1.0 - u).sqrt();
        assert_eq!(cls(b1 * (1.0 - 1e-9), u), RegimeClass::BothBelow);
        assert_eq!(cls(b1 * (1.0 + 1e-9), u), RegimeClass::Mixed);
        assert_eq!(cls(b2 * (1.0 - 1e-9), u), RegimeClass::Mixed);
        assert_eq!(cls(b2 * (1.0 + 1e-9), u), RegimeClass::BothAbove);
    }

    #[test]
    fn rate_ordering_below_threshold() {
        for i in 1..50 {
            let w = 0.17 * i as f64 / 50.0;
            let (s, a) = collective_modes(&CouplingParams::new(w, 0.7, 0.0, 1.0)).unwrap();
            assert!(a.rate_slow <= s.rate_slow + 1e-15);
            // Ω̃a ≥ Ω̃s, so the antisymmetric fast rate is the larger one.
            assert!(a.rate_fast >= s.rate_fast - 1e-15);
        }
    }

    #[test]
    fn offresonant_examples() {
        let s = mode_solution(5.0, 1.0, 50.0).unwrap();
        let v = offresonant_amplitude(0.0, &s, c(1.0, 0.0), false).unwrap();
        assert!((v.value - c(1.0 + 25.0 / 10000.0, 0.0)).norm() < 1e-15);
        for i in 0..=200 {
            let t = i as f64 / 200.0;
            let r = offresonant_amplitude(t, &s, c(1.0, 0.0), true).unwrap();
            assert!(r.rel_error.unwrap() <= 3.0 * 0.01, "t={t} err={:?}", r.rel_error);
        }
        let zero = mode_solution(5.0, 1.0, 0.0).unwrap();
        assert!(offresonant_amplitude(1.0, &zero, c(1.0, 0.0), false).is_err());
    }

    #[test]
    fn offresonant_fast_term_frequency() {
        // Fast correction oscillates as e^{−iδt}: its phase advances by δ per unit time.
        let s = mode_solution(5.0, 1.0, 50.0).unwrap();
        let slow = |t: f64| (-Complex64::new(1.0, -100.0) * (0.5 * 0.01 * t)).exp();
        let fast = |t: f64| offresonant_amplitude(t, &s, c(1.0, 0.0), false).unwrap().value - slow(t);
        let dt = 1e-3;
        let dphase = (fast(0.2 + dt) / fast(0.2)).arg() / dt;
        assert!((dphase + 50.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn dimensional_homogeneity(w in 0.0f64..3.0, d in -5.0f64..5.0, t in 0.0f64..20.0, k in 0.1f64..10.0) {
            let a = mode_solution(w, 1.0, d).unwrap();
            let b = mode_solution(k * w, k, k * d).unwrap();
            let va = amplitude_mode(t, &a, c(1.0, 0.0)).unwrap();
            let vb = amplitude_mode(t / k, &b, c(1.0, 0.0)).unwrap();
            prop_assert!((va - vb).norm() < 1e-10);
        }

        #[test]
        fn exchange_symmetry(w in 0.0f64..3.0, u in 0.0f64..=1.0, d in -5.0f64..5.0,
                             re1 in -0.7f64..0.7, im1 in -0.7f64..0.7, re2 in -0.7f64..0.7, im2 in -0.7f64..0.7) {
            let (c1, c2) = (c(re1, im1), c(re2, im2));
            prop_assume!(c1.norm_sqr() + c2.norm_sqr() <= 1.0);
            let p = CouplingParams::new(w, u, d, 1.0);
            let grid = uniform_grid(10.0, 21).unwrap();
            let x = evolve(&grid, &p, &AmplitudeState::from_atoms(c1, c2)).unwrap();
            let y = evolve(&grid, &p, &AmplitudeState::from_atoms(c2, c1)).unwrap();
            for (a, b) in x.states.iter().zip(&y.states) {
                prop_assert!((a.c1 - b.c2).norm() < 1e-12 && (a.c2 - b.c1).norm() < 1e-12);
            }
        }

        #[test]
        fn norm_never_grows(w in 0.0f64..30.0, u in 0.0f64..=1.0, d in -50.0f64..50.0) {
            let p = CouplingParams::new(w, u, d, 1.0);
            let grid = uniform_grid(10.0, 101).unwrap();
            let ts = evolve(&grid, &p, &AmplitudeState::e1g2()).unwrap();
            let mut prev = 1.0 + 1e-12;
            for s in &ts.states {
                let n = s.total_norm();
                prop_assert!(n <= prev + 1e-9);
                prev = n;
            }
        }
    }
}
