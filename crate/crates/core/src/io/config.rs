//! Flat key-value run configuration (TOML syntax, one level deep).
//!
//! Every physics parameter is a scalar, which keeps the file flat and lets
//! unknown keys be rejected outright (typo safety). `load_config` applies
//! defaults and returns both the validated config and a complete echo that
//! reproduces the run when fed back in.

use std::path::Path;

use crate::dirac::Sign;
use crate::error::Error;
use crate::hartree::ZeroModeConvention;
use crate::integrator::{Conventions, InitialData, Projection, RunConfig};
use crate::scalar::C;
use crate::scattering::{KernelSign, ProfileMode};
use crate::Result;

/// Config as loaded from disk: the run parameters plus CLI-facing output
/// switches.
#[derive(Debug, Clone)]
pub struct FileConfig {
    pub run: RunConfig<f64>,
    /// Write per-snapshot profile checkpoints under the run directory.
    pub write_profiles: bool,
}

const KNOWN_KEYS: &[&str] = &[
    "n",
    "L",
    "eps0",
    "g",
    "dt",
    "t_final",
    "snapshot_dt",
    "seed",
    "data_family",
    "data_width",
    "data_k0x",
    "data_k0y",
    "data_k0z",
    "data_spinor",
    "data_projection",
    "kernel_sign",
    "cutoff_exponent",
    "drift_weight",
    "profile_mode",
    "zero_mode",
    "mean_shift_lambda",
    "accumulate_phase",
    "phase_checkpoints",
    "record_hartree_norm",
    "dealias",
    "write_profiles",
    "sobolev_k",
];

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        key: key.into(),
        reason: reason.into(),
    }
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<FileConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::InvalidConfig {
            key: "<file>".into(),
            reason: format!("not a flat key-value document: {e}"),
        })?;
    for key in table.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::UnknownConfigKey { key: key.clone() });
        }
    }

    let get_f64 = |key: &str| -> Result<Option<f64>> {
        match table.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(_) => Err(bad(key, "expected a number")),
        }
    };
    let get_usize = |key: &str| -> Result<Option<usize>> {
        match table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as usize)),
            Some(_) => Err(bad(key, "expected a nonnegative integer")),
        }
    };
    let get_bool = |key: &str| -> Result<Option<bool>> {
        match table.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(v)) => Ok(Some(*v)),
            Some(_) => Err(bad(key, "expected a boolean")),
        }
    };
    let get_str = |key: &str| -> Result<Option<String>> {
        match table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(_) => Err(bad(key, "expected a string")),
        }
    };

    let n = get_usize("n")?.ok_or_else(|| bad("n", "required"))?;
    let box_length = get_f64("L")?.ok_or_else(|| bad("L", "required"))?;
    let mut run = RunConfig::new(n, box_length);
    if let Some(v) = get_f64("eps0")? {
        run.eps0 = v;
    }
    if let Some(v) = get_f64("g")? {
        run.coupling_g = v;
    }
    if let Some(v) = get_f64("dt")? {
        run.dt = v;
    }
    if let Some(v) = get_f64("t_final")? {
        run.t_final = v;
    }
    if let Some(v) = get_f64("snapshot_dt")? {
        run.snapshot_dt = v;
    }
    if let Some(v) = get_usize("seed")? {
        run.seed = v as u64;
    }
    if let Some(v) = get_f64("sobolev_k")? {
        run.sobolev_k = v;
    }

    let family = get_str("data_family")?.unwrap_or_else(|| "gaussian".into());
    if family != "gaussian" {
        return Err(bad("data_family", format!("unknown family `{family}`")));
    }
    let mut data = InitialData::gaussian(get_f64("data_width")?.unwrap_or(1.0));
    data.modulation = [
        get_f64("data_k0x")?.unwrap_or(0.0),
        get_f64("data_k0y")?.unwrap_or(0.0),
        get_f64("data_k0z")?.unwrap_or(0.0),
    ];
    if let Some(spec) = get_str("data_spinor")? {
        let parts: Vec<f64> = spec
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("data_spinor", "expected 8 comma-separated reals (re,im × 4)"))?;
        if parts.len() != 8 {
            return Err(bad("data_spinor", "expected 8 comma-separated reals (re,im × 4)"));
        }
        for c in 0..4 {
            data.spinor[c] = C::new(parts[2 * c], parts[2 * c + 1]);
        }
    }
    data.projection = match get_str("data_projection")?.as_deref() {
        None | Some("none") => Projection::None,
        Some("plus") => Projection::Plus,
        Some("minus") => Projection::Minus,
        Some(other) => return Err(bad("data_projection", format!("unknown projection `{other}`"))),
    };
    run.data = data;

    let mut conventions = Conventions::default();
    conventions.kernel_sign = match get_str("kernel_sign")?.as_deref() {
        None | Some("minus") => KernelSign::Minus,
        Some("plus") => KernelSign::Plus,
        Some(other) => return Err(bad("kernel_sign", format!("unknown kernel sign `{other}`"))),
    };
    if let Some(v) = get_f64("cutoff_exponent")? {
        conventions.cutoff_exponent = v;
    }
    if let Some(v) = get_f64("drift_weight")? {
        conventions.drift_weight = v;
    }
    conventions.profile_mode = match get_str("profile_mode")?.as_deref() {
        None | Some("evolving") => ProfileMode::Evolving,
        Some("frozen") => ProfileMode::Frozen,
        Some(other) => return Err(bad("profile_mode", format!("unknown profile mode `{other}`"))),
    };
    conventions.zero_mode = match get_str("zero_mode")?.as_deref() {
        None | Some("drop") => ZeroModeConvention::Drop,
        Some("mean-shift") => ZeroModeConvention::MeanFieldShift {
            lambda: get_f64("mean_shift_lambda")?.unwrap_or(1.0),
        },
        Some(other) => return Err(bad("zero_mode", format!("unknown zero-mode convention `{other}`"))),
    };
    run.conventions = conventions;

    if let Some(v) = get_bool("accumulate_phase")? {
        run.accumulate_phase = v;
    }
    if let Some(toml::Value::Array(arr)) = table.get("phase_checkpoints") {
        let mut times = vec![];
        for v in arr {
            match v {
                toml::Value::Float(f) => times.push(*f),
                toml::Value::Integer(i) => times.push(*i as f64),
                _ => return Err(bad("phase_checkpoints", "expected an array of numbers")),
            }
        }
        run.phase_checkpoints = times;
    } else if table.get("phase_checkpoints").is_some() {
        return Err(bad("phase_checkpoints", "expected an array of numbers"));
    }
    if let Some(v) = get_bool("record_hartree_norm")? {
        run.record_hartree_norm = v;
    }
    if let Some(v) = get_bool("dealias")? {
        run.dealias = v;
    }
    let write_profiles = get_bool("write_profiles")?.unwrap_or(false);

    run.validate()?;
    Ok(FileConfig { run, write_profiles })
}

/// Complete, re-runnable echo with every default made explicit.
pub fn echo_config(cfg: &FileConfig) -> String {
    let run = &cfg.run;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    let f = |v: f64| format!("{v:?}");
    kv("n", run.n.to_string());
    kv("L", f(run.box_length));
    kv("eps0", f(run.eps0));
    kv("g", f(run.coupling_g));
    kv("dt", f(run.dt));
    kv("t_final", f(run.t_final));
    kv("snapshot_dt", f(run.snapshot_dt));
    kv("seed", run.seed.to_string());
    kv("sobolev_k", f(run.sobolev_k));
    kv("data_family", "\"gaussian\"".into());
    kv("data_width", f(run.data.width));
    kv("data_k0x", f(run.data.modulation[0]));
    kv("data_k0y", f(run.data.modulation[1]));
    kv("data_k0z", f(run.data.modulation[2]));
    let spinor = run
        .data
        .spinor
        .iter()
        .flat_map(|c| [c.re, c.im])
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(",");
    kv("data_spinor", format!("\"{spinor}\""));
    kv(
        "data_projection",
        format!(
            "\"{}\"",
            match run.data.projection {
                Projection::None => "none",
                Projection::Plus => "plus",
                Projection::Minus => "minus",
            }
        ),
    );
    kv(
        "kernel_sign",
        format!("\"{}\"", run.conventions.kernel_sign.label()),
    );
    kv("cutoff_exponent", f(run.conventions.cutoff_exponent));
    kv("drift_weight", f(run.conventions.drift_weight));
    kv(
        "profile_mode",
        format!(
            "\"{}\"",
            match run.conventions.profile_mode {
                ProfileMode::Evolving => "evolving",
                ProfileMode::Frozen => "frozen",
            }
        ),
    );
    match run.conventions.zero_mode {
        ZeroModeConvention::Drop => kv("zero_mode", "\"drop\"".into()),
        ZeroModeConvention::MeanFieldShift { lambda } => {
            kv("zero_mode", "\"mean-shift\"".into());
            kv("mean_shift_lambda", f(lambda));
        }
    }
    kv("accumulate_phase", run.accumulate_phase.to_string());
    let checkpoints = run
        .phase_checkpoints
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(", ");
    kv("phase_checkpoints", format!("[{checkpoints}]"));
    kv("record_hartree_norm", run.record_hartree_norm.to_string());
    kv("dealias", run.dealias.to_string());
    kv("write_profiles", cfg.write_profiles.to_string());
    out
}

/// Reference node used when a projection is requested by sign label.
pub fn sign_from_label(label: &str) -> Option<Sign> {
    match label {
        "plus" => Some(Sign::Plus),
        "minus" => Some(Sign::Minus),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("n = 32\nL = 32.0\neps0 = 0.05\ndt = 0.02\nt_final = 16.0\n")
            .unwrap();
        assert_eq!(cfg.run.n, 32);
        assert_eq!(cfg.run.coupling_g, 1.0);
        assert_eq!(cfg.run.conventions.kernel_sign, KernelSign::Minus);
        assert_eq!(cfg.run.conventions.cutoff_exponent, 0.01);
        assert!(!cfg.write_profiles);
    }

    #[test]
    fn zero_dt_is_rejected_by_name() {
        let err = parse_config("n = 16\nL = 16.0\ndt = 0.0\nt_final = 4.0\n").unwrap_err();
        match err {
            Error::InvalidConfig { key, .. } => assert_eq!(key, "dt"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn horizon_violation_is_explained() {
        let err = parse_config("n = 16\nL = 16.0\ndt = 0.02\nt_final = 9.0\n").unwrap_err();
        match err {
            Error::InvalidConfig { key, reason } => {
                assert_eq!(key, "t_final");
                assert!(reason.contains("horizon"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("n = 16\nL = 16.0\ndt = 0.02\nt_final = 4.0\nnn = 3\n").unwrap_err();
        match err {
            Error::UnknownConfigKey { key } => assert_eq!(key, "nn"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn echo_round_trips() {
        let cfg = parse_config(
            "n = 16\nL = 16.0\neps0 = 0.07\ndt = 0.025\nt_final = 6.0\nkernel_sign = \"plus\"\nphase_checkpoints = [2.0, 4.0]\naccumulate_phase = true\n",
        )
        .unwrap();
        let echo = echo_config(&cfg);
        let again = parse_config(&echo).unwrap();
        assert_eq!(again.run.eps0, cfg.run.eps0);
        assert_eq!(again.run.dt, cfg.run.dt);
        assert_eq!(again.run.conventions.kernel_sign, KernelSign::Plus);
        assert_eq!(again.run.phase_checkpoints, vec![2.0, 4.0]);
        assert_eq!(echo_config(&again), echo);
    }
}
