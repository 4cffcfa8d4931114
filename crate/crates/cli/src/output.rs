//! Tables, summary records and atomic file writes.

use std::fmt::{Display, Write as _};
use std::fs;
use std::path::Path;

use plasmon_pair::coupling::collective_couplings;
use plasmon_pair::dynamics::{classify_regime, collective_modes, ModeSolution, TimeSeries};
use plasmon_pair::observables::ObservableSeries;
use plasmon_pair::oracle::NormReport;

use crate::config::Scenario;
use crate::error::{CliError, CliResult};

/// Ordered `key = value` record.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, String)>);

impl Record {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn program_versions() -> String {
    format!(
        "plasmon-pair-cli {}, plasmon-pair {}",
        env!("CARGO_PKG_VERSION"),
        plasmon_pair::VERSION
    )
}

/// Parameters, units and versions, as written above every table.
pub fn metadata(sc: &Scenario) -> Record {
    let mut r = Record::default();
    r.push("label", &sc.label);
    r.push("versions", program_versions());
    r.push("mode", sc.mode.name());
    r.push("units", sc.mode.units());
    r.push("solver", sc.solver.name());
    r.push("params.omega0", sc.params.omega0);
    r.push("params.u", sc.params.u_factor);
    r.push("params.delta", sc.params.delta);
    r.push("params.gamma", sc.params.gamma);
    if let Some(ph) = &sc.physical {
        r.push("geometry.x21", ph.geometry.x21);
        r.push("geometry.z0", ph.geometry.z0);
        r.push("physical.gamma_a", ph.gamma_a);
        r.push("physical.omega_a", ph.omega_a);
        r.push("physical.omega_s", ph.omega_s);
        r.push("physical.mu1_real", ph.mu1_real);
    }
    r.push("initial.state", sc.initial.name());
    let init = sc.initial.state();
    r.push("initial.c1", format!("{},{}", init.c1.re, init.c1.im));
    r.push("initial.c2", format!("{},{}", init.c2.re, init.c2.im));
    r.push("time.t_end", sc.t_end);
    r.push("time.samples", sc.samples);
    if let Some(dt) = sc.dt {
        r.push("oracle.dt", dt);
    }
    r
}

/// Comma-separated trajectory table headed by `# key = value` metadata.
pub fn csv_table(sc: &Scenario, series: &TimeSeries, obs: &ObservableSeries) -> String {
    let mut out = String::new();
    for (k, v) in &metadata(sc).0 {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out.push_str("t,re_c1,im_c1,re_c2,im_c2,p1,p2,concurrence");
    if sc.images {
        out.push_str(",re_b1,im_b1,re_b2,im_b2");
    }
    out.push('\n');
    for (i, s) in series.states.iter().enumerate() {
        let _ = write!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            s.t, s.c1.re, s.c1.im, s.c2.re, s.c2.im, obs.p1[i], obs.p2[i], obs.concurrence[i]
        );
        if sc.images {
            let _ = write!(out, ",{:.12e},{:.12e},{:.12e},{:.12e}", s.b1.re, s.b1.im, s.b2.re, s.b2.im);
        }
        out.push('\n');
    }
    out
}

fn regime_name(m: &ModeSolution) -> String {
    format!("{:?}", m.regime).to_lowercase()
}

/// Mode structure of a parameter set (shared by `simulate` and `classify`).
pub fn mode_record(r: &mut Record, sc_params: &plasmon_pair::coupling::CouplingParams) -> CliResult<()> {
    let cc = collective_couplings(sc_params);
    let (s, a) = collective_modes(sc_params)?;
    r.push("regime", classify_regime(sc_params)?.label());
    r.push("threshold", 0.25 * s.u());
    r.push("omega_s", cc.omega_s);
    r.push("omega_a", cc.omega_a);
    for (name, m) in [("s", &s), ("a", &a)] {
        r.push(&format!("regime_{name}"), regime_name(m));
        r.push(&format!("rabi_eff_{name}_re"), m.rabi_eff.re);
        r.push(&format!("rabi_eff_{name}_im"), m.rabi_eff.im);
        r.push(&format!("rate_slow_{name}"), m.rate_slow);
        r.push(&format!("rate_fast_{name}"), m.rate_fast);
    }
    Ok(())
}

pub fn summary(
    sc: &Scenario,
    series: &TimeSeries,
    obs: &ObservableSeries,
    norm: Option<&NormReport>,
) -> CliResult<Record> {
    let mut r = Record::default();
    r.push("label", &sc.label);
    r.push("status", "ok");
    r.push("mode", sc.mode.name());
    r.push("solver", sc.solver.name());
    r.push("source", series.source.name());
    r.push("omega0", sc.params.omega0);
    r.push("u", sc.params.u_factor);
    r.push("delta", sc.params.delta);
    r.push("gamma", sc.params.gamma);
    mode_record(&mut r, &sc.params)?;
    r.push("initial_state", sc.initial.name());
    r.push("t_end", sc.t_end);
    r.push("samples", sc.samples);
    let (imax, cmax) = obs
        .concurrence
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
    r.push("max_concurrence", cmax);
    r.push("t_max_concurrence", obs.t[imax]);
    let last = series.states.last().ok_or_else(|| CliError::Numerical("empty trajectory".into()))?;
    r.push("final_p1", last.p1());
    r.push("final_p2", last.p2());
    r.push("final_concurrence", obs.concurrence[obs.len() - 1]);
    r.push("final_atomic_norm", last.atomic_norm());
    r.push("final_total_norm", last.total_norm());
    if let Some(n) = norm {
        r.push("norm_max_step_increase", n.max_step_increase);
        r.push("norm_drift", n.drift);
        r.push("integrator_steps", n.steps);
    }
    Ok(r)
}

/// Writes via a temporary sibling and a rename, so readers never see a
/// partial file.
pub fn atomic_write(path: &Path, contents: &str) -> CliResult<()> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Validation(format!("bad output path {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents).map_err(|e| CliError::io(format!("writing {}", tmp.display()), e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(format!("renaming to {}", path.display()), e))
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))
}
