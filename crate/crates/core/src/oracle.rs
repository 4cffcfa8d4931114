//! Numerical oracles for the closed-form dynamics.
//!
//! * [`integrate_ode`]: classical RK4 on the four-amplitude linear system
//!   dC/dt = iM·B, dB/dt = −(γ/2+iδ)B + iM·C, where M is the positive
//!   square root of Ω₀²[[1, U], [U, 1]] (eigenvalues Ωs, Ωa).
//! * [`integrate_volterra`]: the memory equations
//!   Ċ = −Ω₀²K ∫₀ᵗ e^{−(γ/2+iδ)(t−t')}C(t') dt', K = [[1, U], [U, 1]],
//!   advanced with a recursive exponential accumulator and trapezoidal
//!   in-step quadrature, then Richardson-extrapolated in dt.
//!
//! Neither uses the mode decomposition of the analytic solution.

use num_complex::Complex64;

use crate::coupling::{collective_couplings, CouplingParams};
use crate::dynamics::{collective_modes, uniform_grid, AmplitudeState, Source, TimeSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSpec {
    pub dt: f64,
    pub t_end: f64,
    pub samples: usize,
    pub method_order: u32,
}

/// Largest admissible step: min(0.01/γ, 0.05/max(|Ω̃s|, |Ω̃a|, |δ|, γ)).
/// Terms involving γ are dropped when γ = 0.
pub fn max_step(params: &CouplingParams) -> Result<f64> {
    let (s, a) = collective_modes(params)?;
    let g = params.gamma;
    let rate = s.rabi_eff.norm().max(a.rabi_eff.norm()).max(params.delta.abs()).max(g);
    let mut bound = f64::INFINITY;
    if g > 0.0 {
        bound = bound.min(0.01 / g);
    }
    if rate > 0.0 {
        bound = bound.min(0.05 / rate);
    }
    if !bound.is_finite() {
        // Nothing evolves (Ω₀ = γ = δ = 0); any step is exact.
        bound = 1.0;
    }
    Ok(bound)
}

/// Largest |eigenvalue| of the linear generator, max |−λ ± Ω̃| over modes.
pub fn spectral_radius(params: &CouplingParams) -> Result<f64> {
    let (s, a) = collective_modes(params)?;
    let mut r: f64 = 0.0;
    for m in [s, a] {
        let lam = m.lambda();
        r = r.max((-lam + m.rabi_eff).norm()).max((-lam - m.rabi_eff).norm());
    }
    Ok(r)
}

impl IntegratorSpec {
    /// Step small enough for ~1e-7 accuracy of both oracles over O(10/γ).
    pub fn recommended(params: &CouplingParams, t_end: f64, samples: usize) -> Result<Self> {
        let rho = spectral_radius(params)?;
        let mut dt = max_step(params)?;
        if rho > 0.0 {
            dt = dt.min(0.004 / rho);
        }
        Ok(Self {
            dt,
            t_end,
            samples,
            method_order: 4,
        })
    }

    pub fn validate(&self, params: &CouplingParams) -> Result<()> {
        if self.method_order != 4 {
            return Err(Error::Configuration(format!(
                "method order {} unsupported (only 4)",
                self.method_order
            )));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Configuration(format!("step dt = {} must be positive", self.dt)));
        }
        let bound = max_step(params)?;
        if self.dt > bound * (1.0 + 1e-12) {
            return Err(Error::Configuration(format!(
                "step dt = {:.3e} exceeds the stability bound {:.3e}",
                self.dt, bound
            )));
        }
        Ok(())
    }

    /// Sample grid and the number of equal substeps per sample interval.
    fn schedule(&self) -> Result<(Vec<f64>, usize)> {
        let grid = uniform_grid(self.t_end, self.samples)?;
        let interval = grid[1] - grid[0];
        let sub = (interval / self.dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Ok((grid, sub))
    }
}

fn check_initial(initial: &AmplitudeState) -> Result<()> {
    initial.validate_initial()
}

type State = [Complex64; 4];

struct OdeSystem {
    m0: f64,
    m1: f64,
    kappa: Complex64,
}

impl OdeSystem {
    fn new(params: &CouplingParams) -> Self {
        let cc = collective_couplings(params);
        Self {
            m0: 0.5 * (cc.omega_s + cc.omega_a),
            m1: 0.5 * (cc.omega_s - cc.omega_a),
            kappa: Complex64::new(0.5 * params.gamma, params.delta),
        }
    }

    fn rhs(&self, y: &State) -> State {
        let i = Complex64::i();
        let [c1, c2, b1, b2] = *y;
        let mb1 = self.m0 * b1 + self.m1 * b2;
        let mb2 = self.m1 * b1 + self.m0 * b2;
        let mc1 = self.m0 * c1 + self.m1 * c2;
        let mc2 = self.m1 * c1 + self.m0 * c2;
        [
            i * mb1,
            i * mb2,
            -self.kappa * b1 + i * mc1,
            -self.kappa * b2 + i * mc2,
        ]
    }

    fn rk4(&self, y: &State, h: f64) -> State {
        let add = |a: &State, k: &State, s: f64| -> State {
            [a[0] + k[0] * s, a[1] + k[1] * s, a[2] + k[2] * s, a[3] + k[3] * s]
        };
        let k1 = self.rhs(y);
        let k2 = self.rhs(&add(y, &k1, 0.5 * h));
        let k3 = self.rhs(&add(y, &k2, 0.5 * h));
        let k4 = self.rhs(&add(y, &k3, h));
        let mut out = *y;
        for j in 0..4 {
            out[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
        out
    }
}

fn norm(y: &State) -> f64 {
    y.iter().map(|v| v.norm_sqr()).sum()
}

fn to_state(t: f64, y: &State) -> AmplitudeState {
    AmplitudeState::with_images(t, y[0], y[1], y[2], y[3])
}

/// Norm bookkeeping of an ODE run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    /// Largest single-step increase of |C|² + |B|² (≤ 0 when monotone).
    pub max_step_increase: f64,
    /// Final minus initial norm.
    pub drift: f64,
    pub steps: usize,
}

/// RK4 trajectory plus norm diagnostics.
pub fn integrate_ode_checked(
    params: &CouplingParams,
    initial: &AmplitudeState,
    spec: &IntegratorSpec,
) -> Result<(TimeSeries, NormReport)> {
    check_initial(initial)?;
    spec.validate(params)?;
    let sys = OdeSystem::new(params);
    let (grid, sub) = spec.schedule()?;
    let h = (grid[1] - grid[0]) / sub as f64;
    let mut y: State = [initial.c1, initial.c2, Complex64::default(), Complex64::default()];
    let n0 = norm(&y);
    let mut prev = n0;
    let mut max_inc = f64::NEG_INFINITY;
    let mut states = Vec::with_capacity(grid.len());
    states.push(to_state(0.0, &y));
    let mut steps = 0;
    for &t in &grid[1..] {
        for _ in 0..sub {
            y = sys.rk4(&y, h);
            let n = norm(&y);
            max_inc = max_inc.max(n - prev);
            prev = n;
            steps += 1;
        }
        if !norm(&y).is_finite() {
            return Err(Error::NoConvergence {
                what: "RK4 integration".into(),
                achieved: f64::INFINITY,
            });
        }
        states.push(to_state(t, &y));
    }
    Ok((
        TimeSeries {
            states,
            source: Source::OdeOracle,
        },
        NormReport {
            max_step_increase: max_inc,
            drift: prev - n0,
            steps,
        },
    ))
}

pub fn integrate_ode(params: &CouplingParams, initial: &AmplitudeState, spec: &IntegratorSpec) -> Result<TimeSeries> {
    integrate_ode_checked(params, initial, spec).map(|r| r.0)
}

/// Ċ from the memory accumulator, Ċ = −Ω₀²K·I.
pub fn memory_derivative(params: &CouplingParams, memory: [Complex64; 2]) -> [Complex64; 2] {
    let w2 = params.omega0 * params.omega0;
    let u = params.u_factor;
    [
        -w2 * (memory[0] + u * memory[1]),
        -w2 * (u * memory[0] + memory[1]),
    ]
}

/// Plain second-order run with `sub` substeps per sample interval.
fn volterra_pass(params: &CouplingParams, initial: &AmplitudeState, grid: &[f64], sub: usize) -> Vec<AmplitudeState> {
    let cc = collective_couplings(params);
    let m0 = 0.5 * (cc.omega_s + cc.omega_a);
    let m1 = 0.5 * (cc.omega_s - cc.omega_a);
    let h = (grid[1] - grid[0]) / sub as f64;
    let kappa = Complex64::new(0.5 * params.gamma, params.delta);
    let e = (-kappa * h).exp();
    let u = params.u_factor;
    let w2 = params.omega0 * params.omega0;
    let alpha = 0.25 * w2 * h * h;
    let half_w2h = 0.5 * w2 * h;
    // (I + αK)⁻¹ for the symmetric 2×2 K.
    let (a, b) = (1.0 + alpha, alpha * u);
    let det = a * a - b * b;
    let (ia, ib) = (a / det, -b / det);

    let mut c = [initial.c1, initial.c2];
    let mut mem = [Complex64::default(); 2];
    let i = Complex64::i();
    let image = |mem: &[Complex64; 2]| [i * (m0 * mem[0] + m1 * mem[1]), i * (m1 * mem[0] + m0 * mem[1])];
    let mut out = Vec::with_capacity(grid.len());
    out.push(AmplitudeState::with_images(0.0, c[0], c[1], Complex64::default(), Complex64::default()));
    for &t in &grid[1..] {
        for _ in 0..sub {
            // Memory part known at the start of the step.
            let p = [
                (1.0 + e) * mem[0] + 0.5 * h * e * c[0],
                (1.0 + e) * mem[1] + 0.5 * h * e * c[1],
            ];
            let rhs = [
                c[0] - half_w2h * (p[0] + u * p[1]),
                c[1] - half_w2h * (u * p[0] + p[1]),
            ];
            let next = [ia * rhs[0] + ib * rhs[1], ib * rhs[0] + ia * rhs[1]];
            mem = [
                e * mem[0] + 0.5 * h * (e * c[0] + next[0]),
                e * mem[1] + 0.5 * h * (e * c[1] + next[1]),
            ];
            c = next;
        }
        let b = image(&mem);
        out.push(AmplitudeState::with_images(t, c[0], c[1], b[0], b[1]));
    }
    out
}

/// Second-order Volterra run without extrapolation.
pub fn integrate_volterra_plain(
    params: &CouplingParams,
    initial: &AmplitudeState,
    spec: &IntegratorSpec,
) -> Result<TimeSeries> {
    check_initial(initial)?;
    spec.validate(params)?;
    let (grid, sub) = spec.schedule()?;
    Ok(TimeSeries {
        states: volterra_pass(params, initial, &grid, sub),
        source: Source::VolterraOracle,
    })
}

/// Volterra solution, Richardson-extrapolated from steps h and h/2.
///
/// The trapezoidal scheme is symmetric, so its error expands in h²; the
/// combination (4·y_{h/2} − y_h)/3 is fourth order.
pub fn integrate_volterra(
    params: &CouplingParams,
    initial: &AmplitudeState,
    spec: &IntegratorSpec,
) -> Result<TimeSeries> {
    check_initial(initial)?;
    spec.validate(params)?;
    let (grid, sub) = spec.schedule()?;
    let coarse = volterra_pass(params, initial, &grid, sub);
    let fine = volterra_pass(params, initial, &grid, 2 * sub);
    let extra = |f: Complex64, c: Complex64| (4.0 * f - c) / 3.0;
    let states = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            AmplitudeState::with_images(f.t, extra(f.c1, c.c1), extra(f.c2, c.c2), extra(f.b1, c.b1), extra(f.b2, c.b2))
        })
        .collect::<Vec<_>>();
    if states.iter().any(|s| !s.total_norm().is_finite()) {
        return Err(Error::NoConvergence {
            what: "Volterra integration".into(),
            achieved: f64::INFINITY,
        });
    }
    Ok(TimeSeries {
        states,
        source: Source::VolterraOracle,
    })
}
