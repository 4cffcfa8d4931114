//! `key = value` scenario files.
//!
//! One entry per line, `#` starts a comment, keys carry a dotted section
//! prefix (`params.omega0 = 0.15`). A numeric value may instead be a sweep
//! axis, written `start:stop:count` or as a comma-separated list.

use num_complex::Complex64;
use plasmon_pair::coupling::{coupling_strength, interaction_function, CouplingParams, Geometry};
use plasmon_pair::dynamics::AmplitudeState;
use plasmon_pair::materials::{dispersion, plasma_frequency, SlabModel};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Text,
    Number,
    Integer,
    Complex,
    Bool,
    List,
}

const KEYS: &[(&str, Kind)] = &[
    ("mode", Kind::Text),
    ("solver", Kind::Text),
    ("run.label", Kind::Text),
    ("initial.state", Kind::Text),
    ("initial.c1", Kind::Complex),
    ("initial.c2", Kind::Complex),
    ("params.omega0", Kind::Number),
    ("params.u", Kind::Number),
    ("params.delta", Kind::Number),
    ("params.gamma", Kind::Number),
    ("geometry.x21", Kind::Number),
    ("geometry.z0", Kind::Number),
    ("material.eps_static", Kind::Number),
    ("material.mu_static", Kind::Number),
    ("material.omega_ep", Kind::Number),
    ("material.omega_mp", Kind::Number),
    ("material.omega_eo", Kind::Number),
    ("material.omega_mo", Kind::Number),
    ("material.gamma_e", Kind::Number),
    ("material.gamma_m", Kind::Number),
    ("material.d1", Kind::Number),
    ("material.d2", Kind::Number),
    ("physical.gamma_a", Kind::Number),
    ("physical.omega_a", Kind::Number),
    ("time.t_end", Kind::Number),
    ("time.samples", Kind::Integer),
    ("oracle.dt", Kind::Number),
    ("outputs.images", Kind::Bool),
    ("greens.x21", Kind::List),
    ("greens.delta", Kind::List),
    ("greens.tau_points", Kind::Integer),
];

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, kind)| *kind)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    /// `file:line`, or `--set` for command-line overrides.
    pub location: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawConfig {
    pub origin: String,
    pub entries: Vec<Entry>,
}

impl RawConfig {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let mut cfg = RawConfig {
            origin: origin.to_string(),
            entries: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let location = format!("{origin}:{}", i + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("{location}: expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if kind_of(key).is_none() {
                return Err(CliError::Validation(format!("{location}: unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(CliError::Validation(format!("{location}: `{key}` has no value")));
            }
            if let Some(prev) = cfg.get(key) {
                return Err(CliError::Validation(format!(
                    "{location}: `{key}` already set at {}",
                    prev.location
                )));
            }
            cfg.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                location,
            });
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override, replacing any existing entry.
    pub fn set(&mut self, assignment: &str) -> CliResult<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("--set: expected key=value, got `{assignment}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if kind_of(key).is_none() {
            return Err(CliError::Validation(format!("--set: unknown key `{key}`")));
        }
        self.entries.retain(|e| e.key != key);
        self.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            location: "--set".to_string(),
        });
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn has_prefix(&self, prefix: &str) -> bool {
        self.entries.iter().any(|e| e.key.starts_with(prefix))
    }

    fn invalid(e: &Entry, msg: impl std::fmt::Display) -> CliError {
        CliError::Validation(format!("{}: `{}`: {msg}", e.location, e.key))
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.get(key).map(|e| e.value.as_str())
    }

    pub fn number(&self, key: &str) -> CliResult<Option<f64>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        if is_axis(&e.value) {
            return Err(Self::invalid(
                e,
                "sweep values are only accepted by the `sweep` and `classify` subcommands",
            ));
        }
        let v: f64 = e
            .value
            .parse()
            .map_err(|_| Self::invalid(e, format!("expected a number, got `{}`", e.value)))?;
        if !v.is_finite() {
            return Err(Self::invalid(e, "value must be finite"));
        }
        Ok(Some(v))
    }

    pub fn integer(&self, key: &str) -> CliResult<Option<usize>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        e.value
            .parse()
            .map(Some)
            .map_err(|_| Self::invalid(e, format!("expected a non-negative integer, got `{}`", e.value)))
    }

    pub fn boolean(&self, key: &str) -> CliResult<Option<bool>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        match e.value.as_str() {
            "true" | "yes" | "1" => Ok(Some(true)),
            "false" | "no" | "0" => Ok(Some(false)),
            other => Err(Self::invalid(e, format!("expected true or false, got `{other}`"))),
        }
    }

    pub fn complex(&self, key: &str) -> CliResult<Option<Complex64>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
        let parse = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
        let z = match parts.as_slice() {
            [re] => parse(re).map(|r| Complex64::new(r, 0.0)),
            [re, im] => parse(re).zip(parse(im)).map(|(r, i)| Complex64::new(r, i)),
            _ => None,
        };
        z.map(Some)
            .ok_or_else(|| Self::invalid(e, format!("expected `re` or `re, im`, got `{}`", e.value)))
    }

    pub fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Self::invalid(e, format!("bad list element `{}`", s.trim())))
            })
            .collect::<CliResult<Vec<_>>>()
            .map(Some)
    }

    /// Numeric entries whose value describes a sweep axis.
    pub fn axes(&self) -> CliResult<Vec<Axis>> {
        let mut out = Vec::new();
        for e in &self.entries {
            if kind_of(&e.key) != Some(Kind::Number) || !is_axis(&e.value) {
                continue;
            }
            out.push(Axis {
                key: e.key.clone(),
                values: parse_axis(&e.value).map_err(|m| Self::invalid(e, m))?,
            });
        }
        Ok(out)
    }

    /// Copy with the given axis keys pinned to single values.
    pub fn pinned(&self, point: &[(String, f64)]) -> RawConfig {
        let mut cfg = self.clone();
        for (key, v) in point {
            if let Some(e) = cfg.entries.iter_mut().find(|e| &e.key == key) {
                e.value = format!("{v}");
            }
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

fn is_axis(value: &str) -> bool {
    value.contains(':') || value.contains(',')
}

fn parse_axis(value: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad sweep value `{}`", s.trim()))
    };
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got `{value}`"));
        };
        let (a, b) = (num(a)?, num(b)?);
        let n: usize = n
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("sweep count `{}` must be a positive integer", n.trim()))?;
        if n == 1 {
            return Ok(vec![a]);
        }
        let step = (b - a) / (n - 1) as f64;
        return Ok((0..n).map(|i| if i + 1 == n { b } else { a + step * i as f64 }).collect());
    }
    value.split(',').map(num).collect()
}

/// Cross product of the axes, first axis slowest.
pub fn cross_product(axes: &[Axis]) -> Vec<Vec<(String, f64)>> {
    let mut points: Vec<Vec<(String, f64)>> = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push((axis.key.clone(), v));
                    q
                })
            })
            .collect();
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Dimensionless,
    Physical,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Dimensionless => "dimensionless",
            Mode::Physical => "physical",
        }
    }

    pub fn units(&self) -> &'static str {
        match self {
            Mode::Dimensionless => "rates in units of gamma, times in units of 1/gamma",
            Mode::Physical => "rates in the frequency unit of the material parameters, times in its reciprocal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Analytic,
    Ode,
    Volterra,
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::Analytic => "analytic",
            Solver::Ode => "ode",
            Solver::Volterra => "volterra",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialChoice {
    E1g2,
    Symmetric,
    Antisymmetric,
    Custom(Complex64, Complex64),
}

impl InitialChoice {
    pub fn name(&self) -> &'static str {
        match self {
            InitialChoice::E1g2 => "e1g2",
            InitialChoice::Symmetric => "sym",
            InitialChoice::Antisymmetric => "antisym",
            InitialChoice::Custom(..) => "custom",
        }
    }

    pub fn state(&self) -> AmplitudeState {
        match *self {
            InitialChoice::E1g2 => AmplitudeState::e1g2(),
            InitialChoice::Symmetric => AmplitudeState::symmetric(),
            InitialChoice::Antisymmetric => AmplitudeState::antisymmetric(),
            InitialChoice::Custom(c1, c2) => AmplitudeState::from_atoms(c1, c2),
        }
    }
}

/// Material and geometry behind a physical-mode parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSetup {
    pub geometry: Geometry,
    pub model: SlabModel,
    pub omega_s: f64,
    pub omega_a: f64,
    pub gamma_a: f64,
    /// Re μ₁ at the plasma frequency.
    pub mu1_real: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub mode: Mode,
    pub params: CouplingParams,
    pub physical: Option<PhysicalSetup>,
    pub initial: InitialChoice,
    pub t_end: f64,
    pub samples: usize,
    pub solver: Solver,
    pub dt: Option<f64>,
    pub images: bool,
}

pub const DEFAULT_SAMPLES: usize = 1001;

fn missing(cfg: &RawConfig, key: &str) -> CliError {
    CliError::Validation(format!("{}: missing required key `{key}`", cfg.origin))
}

fn located(cfg: &RawConfig, key: &str, msg: impl std::fmt::Display) -> CliError {
    match cfg.get(key) {
        Some(e) => CliError::Validation(format!("{}: `{key}`: {msg}", e.location)),
        None => CliError::Validation(format!("{}: {msg}", cfg.origin)),
    }
}

pub fn mode_of(cfg: &RawConfig) -> CliResult<Mode> {
    match cfg.text("mode") {
        None | Some("dimensionless") => Ok(Mode::Dimensionless),
        Some("physical") => Ok(Mode::Physical),
        Some(other) => Err(located(cfg, "mode", format!("expected dimensionless or physical, got `{other}`"))),
    }
}

/// Slab model from `material.*` keys on top of the paired default (ωs = 1).
pub fn material(cfg: &RawConfig) -> CliResult<SlabModel> {
    let mut m = SlabModel::paired_default(1.0);
    let fields: [(&str, &mut f64); 10] = [
        ("material.eps_static", &mut m.eps_static),
        ("material.mu_static", &mut m.mu_static),
        ("material.omega_ep", &mut m.omega_ep),
        ("material.omega_mp", &mut m.omega_mp),
        ("material.omega_eo", &mut m.omega_eo),
        ("material.omega_mo", &mut m.omega_mo),
        ("material.gamma_e", &mut m.gamma_e),
        ("material.gamma_m", &mut m.gamma_m),
        ("material.d1", &mut m.d1),
        ("material.d2", &mut m.d2),
    ];
    for (key, slot) in fields {
        if let Some(v) = cfg.number(key)? {
            *slot = v;
        }
    }
    m.validate()
        .map_err(|e| CliError::Validation(format!("{}: material: {e}", cfg.origin)))?;
    Ok(m)
}

fn physical_setup(cfg: &RawConfig) -> CliResult<(CouplingParams, PhysicalSetup)> {
    let model = material(cfg)?;
    let z0 = cfg.number("geometry.z0")?.ok_or_else(|| missing(cfg, "geometry.z0"))?;
    let x21 = cfg.number("geometry.x21")?.unwrap_or(0.0);
    let geometry = Geometry::new(x21, z0);
    geometry
        .validate()
        .map_err(|e| located(cfg, if z0 > 0.0 { "geometry.x21" } else { "geometry.z0" }, e))?;
    let gamma_a = cfg.number("physical.gamma_a")?.ok_or_else(|| missing(cfg, "physical.gamma_a"))?;
    if !(gamma_a > 0.0) {
        return Err(located(cfg, "physical.gamma_a", "must be positive"));
    }
    let omega_s = plasma_frequency(&model).map_err(|e| CliError::Validation(format!("{}: material: {e}", cfg.origin)))?;
    let gamma = model
        .gamma()
        .map_err(|e| CliError::Validation(format!("{}: material: {e}", cfg.origin)))?;
    let omega_a = cfg.number("physical.omega_a")?.unwrap_or(omega_s);
    let mu1_real = dispersion(&model, omega_s)?.mu1.re;
    let omega0 = coupling_strength(&geometry, mu1_real.abs(), gamma_a, omega_s)?;
    let u = interaction_function(&geometry, mu1_real.abs())?;
    let mut params = CouplingParams::new(omega0, u, omega_s - omega_a, gamma);
    params.gamma_a = Some(gamma_a);
    Ok((
        params,
        PhysicalSetup {
            geometry,
            model,
            omega_s,
            omega_a,
            gamma_a,
            mu1_real,
        },
    ))
}

/// Coupling parameters of either mode, with line-precise range errors.
pub fn coupling_params(cfg: &RawConfig) -> CliResult<(CouplingParams, Option<PhysicalSetup>)> {
    let mode = mode_of(cfg)?;
    if mode == Mode::Physical {
        for key in ["params.omega0", "params.u", "params.delta", "params.gamma"] {
            if cfg.get(key).is_some() {
                return Err(located(cfg, key, "not used in physical mode (derived from geometry and material)"));
            }
        }
        let (p, s) = physical_setup(cfg)?;
        return Ok((p, Some(s)));
    }
    for key in ["geometry.", "material.", "physical."] {
        if let Some(e) = cfg.entries.iter().find(|e| e.key.starts_with(key)) {
            return Err(CliError::Validation(format!(
                "{}: `{}`: only used in physical mode",
                e.location, e.key
            )));
        }
    }
    let omega0 = cfg.number("params.omega0")?.ok_or_else(|| missing(cfg, "params.omega0"))?;
    let u = cfg.number("params.u")?.ok_or_else(|| missing(cfg, "params.u"))?;
    let delta = cfg.number("params.delta")?.unwrap_or(0.0);
    let gamma = cfg.number("params.gamma")?.unwrap_or(1.0);
    if omega0 < 0.0 {
        return Err(located(cfg, "params.omega0", "must be >= 0"));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(located(cfg, "params.u", "must lie in [0, 1]"));
    }
    if gamma < 0.0 {
        return Err(located(cfg, "params.gamma", "must be >= 0"));
    }
    Ok((CouplingParams::new(omega0, u, delta, gamma), None))
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

impl Scenario {
    pub fn from_config(cfg: &RawConfig, default_label: &str) -> CliResult<Self> {
        if cfg.is_empty() {
            return Err(CliError::Validation(format!("{}: configuration is empty", cfg.origin)));
        }
        let mode = mode_of(cfg)?;
        let (params, physical) = coupling_params(cfg)?;
        let label = sanitize(cfg.text("run.label").unwrap_or(default_label));
        if label.is_empty() {
            return Err(located(cfg, "run.label", "must not be empty"));
        }
        let solver = match cfg.text("solver") {
            None | Some("analytic") => Solver::Analytic,
            Some("ode") => Solver::Ode,
            Some("volterra") => Solver::Volterra,
            Some(other) => {
                return Err(located(cfg, "solver", format!("expected analytic, ode or volterra, got `{other}`")))
            }
        };
        let initial = match cfg.text("initial.state") {
            None | Some("e1g2") => InitialChoice::E1g2,
            Some("sym") => InitialChoice::Symmetric,
            Some("antisym") => InitialChoice::Antisymmetric,
            Some("custom") => {
                let c1 = cfg.complex("initial.c1")?.ok_or_else(|| missing(cfg, "initial.c1"))?;
                let c2 = cfg.complex("initial.c2")?.ok_or_else(|| missing(cfg, "initial.c2"))?;
                let n = c1.norm_sqr() + c2.norm_sqr();
                if (n - 1.0).abs() > 1e-9 {
                    return Err(located(
                        cfg,
                        "initial.state",
                        format!("custom state has |c1|^2 + |c2|^2 = {n}, must be 1 within 1e-9"),
                    ));
                }
                InitialChoice::Custom(c1, c2)
            }
            Some(other) => {
                return Err(located(
                    cfg,
                    "initial.state",
                    format!("expected e1g2, sym, antisym or custom, got `{other}`"),
                ))
            }
        };
        if initial.name() != "custom" {
            for key in ["initial.c1", "initial.c2"] {
                if cfg.get(key).is_some() {
                    return Err(located(cfg, key, "only used with initial.state = custom"));
                }
            }
        }
        let t_end = match cfg.number("time.t_end")? {
            Some(t) => t,
            None if params.gamma > 0.0 => 10.0 / params.gamma,
            None => 10.0,
        };
        if !(t_end > 0.0) {
            return Err(located(cfg, "time.t_end", "must be > 0"));
        }
        let samples = cfg.integer("time.samples")?.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(located(cfg, "time.samples", "must be >= 2"));
        }
        let dt = cfg.number("oracle.dt")?;
        if let Some(dt) = dt {
            if !(dt > 0.0) {
                return Err(located(cfg, "oracle.dt", "must be > 0"));
            }
        }
        let images = cfg.boolean("outputs.images")?.unwrap_or(false);
        Ok(Scenario {
            label,
            mode,
            params,
            physical,
            initial,
            t_end,
            samples,
            solver,
            dt,
            images,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_sections() {
        let cfg = RawConfig::parse("# header\nparams.omega0 = 0.15 # trailing\n\nparams.u=0.95\n", "t.conf").unwrap();
        assert_eq!(cfg.entries.len(), 2);
        assert_eq!(cfg.number("params.omega0").unwrap(), Some(0.15));
        assert_eq!(cfg.get("params.u").unwrap().location, "t.conf:4");
    }

    #[test]
    fn errors_name_the_line() {
        let e = RawConfig::parse("params.u = 0.5\nparams.omga0 = 1\n", "t.conf").unwrap_err();
        assert!(e.to_string().starts_with("t.conf:2:"), "{e}");
        let e = RawConfig::parse("params.u = 0.5\nparams.u = 0.6\n", "t.conf").unwrap_err();
        assert!(e.to_string().contains("already set at t.conf:1"), "{e}");
        let cfg = RawConfig::parse("params.omega0 = 1\nparams.u = 1.5\n", "t.conf").unwrap();
        let e = Scenario::from_config(&cfg, "run").unwrap_err();
        assert!(e.to_string().starts_with("t.conf:2:"), "{e}");
    }

    #[test]
    fn sweep_axes() {
        assert_eq!(parse_axis("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_axis("0.25, 0.5,0.99").unwrap(), vec![0.25, 0.5, 0.99]);
        assert!(parse_axis("0:1").is_err());
        assert!(parse_axis("0:1:0").is_err());
        let cfg = RawConfig::parse("params.omega0 = 0.1:0.3:3\nparams.u = 0.5,0.9\n", "t").unwrap();
        let axes = cfg.axes().unwrap();
        let pts = cross_product(&axes);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![("params.omega0".to_string(), 0.1), ("params.u".to_string(), 0.9)]);
        assert!(Scenario::from_config(&cfg, "run").is_err());
        let one = cfg.pinned(&pts[5]);
        let sc = Scenario::from_config(&one, "run").unwrap();
        assert_eq!((sc.params.omega0, sc.params.u_factor), (0.3, 0.9));
    }

    #[test]
    fn custom_state_must_be_normalized() {
        let base = "params.omega0 = 1\nparams.u = 0.5\ninitial.state = custom\n";
        let ok = RawConfig::parse(&format!("{base}initial.c1 = 0.6, 0\ninitial.c2 = 0, 0.8\n"), "t").unwrap();
        let sc = Scenario::from_config(&ok, "run").unwrap();
        assert_eq!(sc.initial, InitialChoice::Custom(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)));
        let bad = RawConfig::parse(&format!("{base}initial.c1 = 0.6\ninitial.c2 = 0.6\n"), "t").unwrap();
        assert!(Scenario::from_config(&bad, "run").unwrap_err().to_string().starts_with("t:3:"));
    }

    #[test]
    fn physical_mode_derives_parameters() {
        let cfg = RawConfig::parse(
            "mode = physical\ngeometry.z0 = 0.05\ngeometry.x21 = 0\nphysical.gamma_a = 1e-6\n",
            "t",
        )
        .unwrap();
        let sc = Scenario::from_config(&cfg, "run").unwrap();
        let ph = sc.physical.unwrap();
        assert!((sc.params.u_factor - 1.0).abs() < 1e-12);
        assert_eq!(sc.params.delta, 0.0);
        assert!((ph.omega_s - 1.0).abs() < 1e-12);
        assert!((sc.params.gamma - 1e-4).abs() < 1e-18);
        let mixed = RawConfig::parse("mode = physical\nparams.u = 0.3\n", "t").unwrap();
        assert!(Scenario::from_config(&mixed, "run").unwrap_err().to_string().starts_with("t:2:"));
    }

    #[test]
    fn set_overrides() {
        let mut cfg = RawConfig::parse("params.omega0 = 1\nparams.u = 0.5\n", "t").unwrap();
        cfg.set("params.u=0.7").unwrap();
        assert_eq!(cfg.number("params.u").unwrap(), Some(0.7));
        assert!(cfg.set("nonsense=1").is_err());
    }
}
