//! Subcommand implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use plasmon_pair::coupling::{coupling_strength, CouplingParams, Geometry};
use plasmon_pair::dynamics::{classify_regime, evolve, uniform_grid, TimeSeries};
use plasmon_pair::greens::{
    green_quadrature, green_xx_closed, green_zz_closed, kernel_from_greens, Component, QuadratureSpec,
};
use plasmon_pair::materials::{dispersion, plasma_frequency};
use plasmon_pair::observables::ObservableSeries;
use plasmon_pair::oracle::{integrate_ode_checked, integrate_volterra, IntegratorSpec, NormReport};

use crate::config::{self, cross_product, RawConfig, Scenario, Solver};
use crate::error::{CliError, CliResult};
use crate::output::{self, atomic_write, ensure_dir, Record};
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Trajectory table plus summary record.
    Csv,
    /// Summary record only.
    SummaryOnly,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub set: Vec<String>,
}

/// Sup-norm threshold of the three-way comparison.
pub const VERIFY_TOLERANCE: f64 = 1e-6;
/// Per-step norm increase tolerated by `verify`.
pub const NORM_STEP_TOLERANCE: f64 = 1e-9;
/// Tolerances of `greens-check`.
pub const GREEN_TOLERANCE: f64 = 0.05;
pub const KERNEL_TOLERANCE: f64 = 0.02;

/// Reads `--config` or `--preset` and applies `--set` overrides. Returns
/// the configuration and a default run label.
pub fn load(opts: &RunOptions, required: bool) -> CliResult<(RawConfig, String)> {
    let (mut cfg, label) = match (&opts.config, &opts.preset) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("give either --config or --preset, not both".into()));
        }
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into());
            (RawConfig::parse(&text, &path.display().to_string())?, label)
        }
        (None, Some(name)) => {
            let p = presets::find(name).ok_or_else(|| {
                let names: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
                CliError::Validation(format!("unknown preset `{name}` (available: {})", names.join(", ")))
            })?;
            (RawConfig::parse(p.text, &format!("preset {name}"))?, name.clone())
        }
        (None, None) => (
            RawConfig {
                origin: "--set".into(),
                entries: Vec::new(),
            },
            "run".into(),
        ),
    };
    for s in &opts.set {
        cfg.set(s)?;
    }
    if required && cfg.is_empty() {
        return Err(CliError::Usage(match &opts.config {
            Some(p) => format!("{}: configuration is empty", p.display()),
            None => "no configuration given (use --config, --preset or --set)".into(),
        }));
    }
    Ok((cfg, label))
}

pub struct Trajectory {
    pub series: TimeSeries,
    pub norm: Option<NormReport>,
}

fn integrator_spec(params: &CouplingParams, t_end: f64, samples: usize, dt: Option<f64>) -> CliResult<IntegratorSpec> {
    let mut spec = IntegratorSpec::recommended(params, t_end, samples)?;
    if let Some(dt) = dt {
        spec.dt = dt;
    }
    spec.validate(params)?;
    Ok(spec)
}

pub fn run_trajectory(sc: &Scenario) -> CliResult<Trajectory> {
    let init = sc.initial.state();
    match sc.solver {
        Solver::Analytic => {
            if sc.dt.is_some() {
                warn!("oracle.dt is ignored by the analytic solver");
            }
            let grid = uniform_grid(sc.t_end, sc.samples)?;
            Ok(Trajectory {
                series: evolve(&grid, &sc.params, &init)?,
                norm: None,
            })
        }
        Solver::Ode => {
            let spec = integrator_spec(&sc.params, sc.t_end, sc.samples, sc.dt)?;
            let (series, norm) = integrate_ode_checked(&sc.params, &init, &spec)?;
            Ok(Trajectory {
                series,
                norm: Some(norm),
            })
        }
        Solver::Volterra => {
            let spec = integrator_spec(&sc.params, sc.t_end, sc.samples, sc.dt)?;
            Ok(Trajectory {
                series: integrate_volterra(&sc.params, &init, &spec)?,
                norm: None,
            })
        }
    }
}

/// Table text (when requested) and summary of one scenario.
fn simulate_one(sc: &Scenario, format: Format) -> CliResult<(Option<String>, Record)> {
    let run = run_trajectory(sc)?;
    let obs = ObservableSeries::from_series(&run.series)?;
    let summary = output::summary(sc, &run.series, &obs, run.norm.as_ref())?;
    let table = match format {
        Format::Csv => Some(output::csv_table(sc, &run.series, &obs)),
        Format::SummaryOnly => None,
    };
    Ok((table, summary))
}

fn failure_record(label: &str, err: &CliError) -> Record {
    let mut r = Record::default();
    r.push("label", label);
    r.push("status", "error");
    r.push(
        "error_kind",
        match err {
            CliError::Numerical(_) => "numerical",
            _ => "validation",
        },
    );
    r.push("message", err.to_string().replace('\n', " "));
    r
}

fn write_outputs(dir: &Path, label: &str, table: Option<&str>, summary: &Record) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(t) = table {
        let p = dir.join(format!("{label}.csv"));
        atomic_write(&p, t)?;
        written.push(p);
    }
    let p = dir.join(format!("{label}.summary"));
    atomic_write(&p, &summary.render())?;
    written.push(p);
    Ok(written)
}

pub fn simulate(opts: &RunOptions) -> CliResult<()> {
    let (cfg, label) = load(opts, true)?;
    let sc = Scenario::from_config(&cfg, &label)?;
    match simulate_one(&sc, opts.format) {
        Ok((table, summary)) => match &opts.out {
            Some(dir) => {
                ensure_dir(dir)?;
                write_outputs(dir, &sc.label, table.as_deref(), &summary)?;
                print!("{}", summary.render());
                Ok(())
            }
            None => {
                match table {
                    Some(t) => print!("{t}"),
                    None => print!("{}", summary.render()),
                }
                Ok(())
            }
        },
        Err(e) => {
            if let Some(dir) = &opts.out {
                ensure_dir(dir)?;
                atomic_write(&dir.join(format!("{}.summary", sc.label)), &failure_record(&sc.label, &e).render())?;
            }
            Err(e)
        }
    }
}

struct PointOutcome {
    values: Vec<f64>,
    label: String,
    status: Result<Record, CliError>,
}

pub fn sweep(opts: &RunOptions) -> CliResult<()> {
    let (cfg, label) = load(opts, true)?;
    let dir = opts
        .out
        .as_ref()
        .ok_or_else(|| CliError::Validation("sweep writes one file per point and needs --out".into()))?;
    let axes = cfg.axes()?;
    if axes.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no sweep axis (give a numeric key as start:stop:count or a, b, c)",
            cfg.origin
        )));
    }
    let base = config::Scenario::from_config(&cfg.pinned(&axis_firsts(&axes)), &label)?.label;
    ensure_dir(dir)?;
    let points = cross_product(&axes);
    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .enumerate()
        .map(|(i, pt)| {
            let point_label = format!("{base}_p{i:04}");
            let status = Scenario::from_config(&cfg.pinned(pt), &point_label).and_then(|mut sc| {
                sc.label = point_label.clone();
                match simulate_one(&sc, opts.format) {
                    Ok((table, summary)) => {
                        write_outputs(dir, &sc.label, table.as_deref(), &summary)?;
                        Ok(summary)
                    }
                    Err(e) => {
                        atomic_write(&dir.join(format!("{point_label}.summary")), &failure_record(&point_label, &e).render())?;
                        Err(e)
                    }
                }
            });
            PointOutcome {
                values: pt.iter().map(|(_, v)| *v).collect(),
                label: point_label,
                status,
            }
        })
        .collect();

    let mut index = String::from("point");
    for a in &axes {
        index.push(',');
        index.push_str(&a.key);
    }
    index.push_str(",status,regime,max_concurrence,summary\n");
    let mut failed = Vec::new();
    let mut worst_code = 0;
    for (i, o) in outcomes.iter().enumerate() {
        let _ = write!(index, "{i}");
        for v in &o.values {
            let _ = write!(index, ",{v}");
        }
        match &o.status {
            Ok(r) => {
                let _ = writeln!(
                    index,
                    ",ok,{},{},{}.summary",
                    r.get("regime").unwrap_or(""),
                    r.get("max_concurrence").unwrap_or(""),
                    o.label
                );
            }
            Err(e) => {
                let _ = writeln!(index, ",error,,,{}.summary", o.label);
                eprintln!("{}: {e}", o.label);
                failed.push(o.label.clone());
                worst_code = worst_code.max(e.exit_code());
            }
        }
    }
    let index_path = dir.join(format!("{base}_index.csv"));
    atomic_write(&index_path, &index)?;
    println!(
        "sweep: {} points, {} failed, index {}",
        outcomes.len(),
        failed.len(),
        index_path.display()
    );
    if failed.is_empty() {
        return Ok(());
    }
    let msg = format!("{} of {} sweep points failed: {}", failed.len(), outcomes.len(), failed.join(", "));
    Err(if worst_code == 2 {
        CliError::Numerical(msg)
    } else {
        CliError::Validation(msg)
    })
}

fn axis_firsts(axes: &[config::Axis]) -> Vec<(String, f64)> {
    axes.iter().map(|a| (a.key.clone(), a.values[0])).collect()
}

/// The bundled comparison suite: twelve sets across the three regimes, the
/// critical point and three detunings, plus one lossless set.
pub fn verify_suite() -> Vec<(String, CouplingParams)> {
    let sets: [(&str, f64, f64, f64, f64); 13] = [
        ("fig4", 0.15, 0.95, 0.0, 1.0),
        ("weak", 0.05, 0.25, 0.0, 1.0),
        ("fig5", 0.5, 0.99, 0.0, 1.0),
        ("fig12", 1.0, 0.95, 0.0, 1.0),
        ("fig6", 25.0, 0.1, 0.0, 1.0),
        ("fig7", 25.0, 0.8, 0.0, 1.0),
        ("critical", 0.25, 0.0, 0.0, 1.0),
        ("detuned5_weak", 0.15, 0.5, 5.0, 1.0),
        ("detuned5_strong", 1.0, 0.9, 5.0, 1.0),
        ("detuned50_u01", 25.0, 0.1, 50.0, 1.0),
        ("detuned50_u095", 25.0, 0.95, 50.0, 1.0),
        ("detuned50_weak", 1.0, 0.5, 50.0, 1.0),
        ("lossless", 0.8, 0.6, 2.0, 0.0),
    ];
    sets.iter()
        .map(|&(name, w, u, d, g)| (name.to_string(), CouplingParams::new(w, u, d, g)))
        .collect()
}

struct VerifyRow {
    name: String,
    regime: String,
    an_ode: f64,
    an_vol: f64,
    ode_vol: f64,
    norm: NormReport,
    lossless: bool,
}

impl VerifyRow {
    fn worst(&self) -> f64 {
        self.an_ode.max(self.an_vol).max(self.ode_vol)
    }

    fn pass(&self) -> bool {
        self.worst() <= VERIFY_TOLERANCE
            && self.norm.max_step_increase <= NORM_STEP_TOLERANCE
            && (!self.lossless || self.norm.drift.abs() < NORM_STEP_TOLERANCE)
    }
}

fn verify_set(name: &str, params: &CouplingParams, t_end: f64, samples: usize, dt: Option<f64>) -> CliResult<VerifyRow> {
    let ctx = |e: CliError| match e {
        CliError::Validation(m) => CliError::Validation(format!("set {name}: {m}")),
        CliError::Numerical(m) => CliError::Numerical(format!("set {name}: {m}")),
        other => other,
    };
    let init = plasmon_pair::dynamics::AmplitudeState::e1g2();
    let spec = integrator_spec(params, t_end, samples, dt).map_err(ctx)?;
    let grid = uniform_grid(t_end, samples).map_err(|e| ctx(e.into()))?;
    let an = evolve(&grid, params, &init).map_err(|e| ctx(e.into()))?;
    let (ode, norm) = integrate_ode_checked(params, &init, &spec).map_err(|e| ctx(e.into()))?;
    let vol = integrate_volterra(params, &init, &spec).map_err(|e| ctx(e.into()))?;
    let d = |a: &TimeSeries, b: &TimeSeries| a.sup_distance(b).map_err(|e| ctx(e.into()));
    Ok(VerifyRow {
        name: name.to_string(),
        regime: classify_regime(params).map_err(|e| ctx(e.into()))?.label().to_string(),
        an_ode: d(&an, &ode)?,
        an_vol: d(&an, &vol)?,
        ode_vol: d(&ode, &vol)?,
        norm,
        lossless: params.gamma == 0.0,
    })
}

pub fn verify(opts: &RunOptions) -> CliResult<()> {
    let (cfg, label) = load(opts, false)?;
    let dt = cfg.number("oracle.dt")?;
    let samples = cfg.integer("time.samples")?.unwrap_or(201);
    if samples < 2 {
        return Err(CliError::Validation("time.samples must be >= 2".into()));
    }
    let t_end_cfg = cfg.number("time.t_end")?;
    let sets = if cfg.has_prefix("params.") || config::mode_of(&cfg)? == config::Mode::Physical {
        let (p, _) = config::coupling_params(&cfg)?;
        vec![(cfg.text("run.label").unwrap_or(&label).to_string(), p)]
    } else {
        verify_suite()
    };
    let rows: Vec<CliResult<VerifyRow>> = sets
        .par_iter()
        .map(|(name, p)| {
            let t_end = t_end_cfg.unwrap_or(if p.gamma > 0.0 { 10.0 / p.gamma } else { 10.0 });
            verify_set(name, p, t_end, samples, dt)
        })
        .collect();
    let rows = rows.into_iter().collect::<CliResult<Vec<_>>>()?;

    let mut report = format!(
        "# three-way comparison, tolerance {VERIFY_TOLERANCE:e}; {}\n",
        output::program_versions()
    );
    report.push_str("set,regime,analytic_ode,analytic_volterra,ode_volterra,norm_max_step_increase,norm_drift,status\n");
    for r in &rows {
        let _ = writeln!(
            report,
            "{},{},{:.3e},{:.3e},{:.3e},{:.3e},{:.3e},{}",
            r.name,
            r.regime,
            r.an_ode,
            r.an_vol,
            r.ode_vol,
            r.norm.max_step_increase,
            r.norm.drift,
            if r.pass() { "pass" } else { "FAIL" }
        );
    }
    print!("{report}");
    if let Some(dir) = &opts.out {
        ensure_dir(dir)?;
        atomic_write(&dir.join("verify.csv"), &report)?;
    }
    let failing: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass())
        .map(|r| format!("{} (deviation {:.3e})", r.name, r.worst()))
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "verification failed for {}; the oracles have not converged at this step size (reduce oracle.dt)",
            failing.join(", ")
        )))
    }
}

pub fn greens_check(opts: &RunOptions) -> CliResult<()> {
    let (mut cfg, _) = load(opts, false)?;
    if cfg.is_empty() {
        cfg = RawConfig::parse(presets::find("greens").map(|p| p.text).unwrap_or(""), "preset greens")?;
    }
    let model = config::material(&cfg)?;
    let z0 = cfg.number("geometry.z0")?.unwrap_or(0.05);
    let xs = cfg.list("greens.x21")?.unwrap_or_else(|| vec![0.0, 0.1, 0.25, 0.5]);
    let deltas = cfg.list("greens.delta")?.unwrap_or_else(|| vec![0.0, 5.0]);
    let tau_points = cfg.integer("greens.tau_points")?.unwrap_or(41).max(2);
    let gamma_a = cfg.number("physical.gamma_a")?.unwrap_or(1e-6);
    let ws = plasma_frequency(&model)?;
    let gamma = model.gamma()?;
    let mu1 = dispersion(&model, ws)?.mu1.re;

    let mut report = format!(
        "# Im G at omega = omega_s = {ws}, gamma = {gamma:e}, z0 = {z0}; {}\n",
        output::program_versions()
    );
    report.push_str("x21,component,closed,quadrature,quadrature_error,rel_deviation,one_point_closed\n");
    let mut worst_green: f64 = 0.0;
    for &x21 in &xs {
        let g = Geometry::new(x21, z0);
        g.validate()?;
        let spec = QuadratureSpec::for_geometry(&g);
        let two = x21 > 0.0;
        for (name, comp) in [("zz", Component::Zz), ("xx", Component::Xx)] {
            let q = green_quadrature(&g, &model, ws, comp, &spec)?;
            let (closed, one_point) = match comp {
                Component::Zz => (
                    green_zz_closed(&g, ws, gamma, ws, two)?,
                    green_zz_closed(&Geometry::new(0.0, z0), ws, gamma, ws, false)?,
                ),
                Component::Xx => (
                    green_xx_closed(&g, ws, gamma, ws, mu1, two)?,
                    green_xx_closed(&Geometry::new(0.0, z0), ws, gamma, ws, mu1, false)?,
                ),
            };
            let rel = ((q.value - closed) / closed).abs();
            worst_green = worst_green.max(rel);
            let _ = writeln!(
                report,
                "{x21},{name},{closed:.10e},{:.10e},{:.2e},{rel:.3e},{one_point:.10e}",
                q.value, q.error
            );
        }
    }

    let g = Geometry::new(0.0, z0);
    let w0sq = coupling_strength(&g, mu1.abs(), gamma_a, ws)?.powi(2);
    report.push_str("delta_over_gamma,tau_gamma,kernel_re,kernel_im,target_re,target_im,rel_deviation\n");
    let mut worst_kernel: f64 = 0.0;
    for &dg in &deltas {
        let delta = dg * gamma;
        for i in 0..tau_points {
            let tau = 10.0 / gamma * i as f64 / (tau_points - 1) as f64;
            let k = kernel_from_greens(&g, mu1.abs(), gamma_a, gamma, ws, ws - delta, tau)?;
            let target = -w0sq * Complex64::new(-0.5 * gamma * tau, -delta * tau).exp();
            let rel = (k.value - target).norm() / target.norm();
            worst_kernel = worst_kernel.max(rel);
            let _ = writeln!(
                report,
                "{dg},{:.4},{:.8e},{:.8e},{:.8e},{:.8e},{rel:.3e}",
                tau * gamma,
                k.value.re,
                k.value.im,
                target.re,
                target.im
            );
        }
    }
    let _ = writeln!(
        report,
        "# worst Green deviation {worst_green:.3e} (limit {GREEN_TOLERANCE}), worst kernel deviation {worst_kernel:.3e} (limit {KERNEL_TOLERANCE})"
    );
    print!("{report}");
    if let Some(dir) = &opts.out {
        ensure_dir(dir)?;
        atomic_write(&dir.join("greens_check.csv"), &report)?;
    }
    if worst_green > GREEN_TOLERANCE || worst_kernel > KERNEL_TOLERANCE {
        return Err(CliError::Numerical(format!(
            "Green-function closure failed: worst deviation {worst_green:.3e}, kernel {worst_kernel:.3e}"
        )));
    }
    Ok(())
}

pub fn classify(opts: &RunOptions) -> CliResult<()> {
    let (cfg, _) = load(opts, true)?;
    let axes = cfg.axes()?;
    let text = if axes.is_empty() {
        let (p, _) = config::coupling_params(&cfg)?;
        let mut r = Record::default();
        r.push("omega0", p.omega0);
        r.push("u", p.u_factor);
        r.push("delta", p.delta);
        r.push("gamma", p.gamma);
        output::mode_record(&mut r, &p)?;
        r.render()
    } else {
        let mut t = String::new();
        for a in &axes {
            let _ = write!(t, "{},", a.key);
        }
        t.push_str("regime,omega_s,omega_a,threshold,regime_s,regime_a,rate_slow_s,rate_slow_a\n");
        for pt in cross_product(&axes) {
            let (p, _) = config::coupling_params(&cfg.pinned(&pt))?;
            let mut r = Record::default();
            output::mode_record(&mut r, &p)?;
            for (_, v) in &pt {
                let _ = write!(t, "{v},");
            }
            let cols = ["regime", "omega_s", "omega_a", "threshold", "regime_s", "regime_a", "rate_slow_s", "rate_slow_a"];
            let vals: Vec<&str> = cols.iter().map(|c| r.get(c).unwrap_or("")).collect();
            let _ = writeln!(t, "{}", vals.join(","));
        }
        t
    };
    print!("{text}");
    if let Some(dir) = &opts.out {
        ensure_dir(dir)?;
        let name = if axes.is_empty() { "classify.summary" } else { "classify.csv" };
        atomic_write(&dir.join(name), &text)?;
    }
    Ok(())
}

pub fn list_presets(show: Option<&str>) -> CliResult<()> {
    match show {
        Some(name) => {
            let p = presets::find(name).ok_or_else(|| CliError::Validation(format!("unknown preset `{name}`")))?;
            print!("{}", p.text);
        }
        None => {
            for p in presets::PRESETS {
                println!("{:<8} {}", p.name, p.description());
            }
        }
    }
    Ok(())
}
