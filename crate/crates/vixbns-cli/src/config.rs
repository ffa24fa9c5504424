//! Run configuration: defaults, flat key=value files, flag overrides.
//!
//! Precedence is defaults < config file < command-line flags; flag names
//! mirror config keys exactly. The fully resolved set is echoed to a
//! sidecar file by every command so a run can be reproduced from the
//! sidecar alone.

use std::path::{Path, PathBuf};

use vixbns::{MarketState, ModelParams, QuadratureSettings, Variant};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub variant: Variant,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub r: f64,
    pub tau: f64,
    pub t: f64,
    pub spot: f64,
    pub sigma_sq: f64,
    /// option maturity, config key `T`
    pub maturity: f64,
    /// strike, config key `K`
    pub k: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub k_step: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub alpha: f64,
    pub eps: f64,
    pub v_max: f64,
    pub abs_tol: f64,
    pub fft_size: usize,
    pub n_paths: usize,
    pub seed: u64,
    pub path: Option<PathBuf>,
    pub format: String,
}

impl Default for RunConfig {
    /// The estimated parameter set the experiments ship with, at-the-money
    /// strike, mid-horizon observation, and the full sweep ranges.
    fn default() -> Self {
        RunConfig {
            variant: Variant::GammaOu,
            lambda: 0.5783,
            a: 1.4338,
            b: 11.6641,
            rho: -1.2606,
            r: 0.007,
            tau: 0.0833,
            t: 0.5,
            spot: 1124.47,
            sigma_sq: 0.0145,
            maturity: 1.0,
            k: 0.18588,
            k_min: 0.12,
            k_max: 0.30,
            k_step: 0.02,
            t_min: 0.0,
            t_max: 0.98,
            t_step: 0.02,
            alpha: 1.75,
            eps: 1e-4,
            v_max: 65536.0,
            abs_tol: 1e-9,
            fft_size: 1 << 19,
            n_paths: 1_000_000,
            seed: 42,
            path: None,
            format: "csv".to_string(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    if raw.is_empty() {
        return Err(CliError::Config(format!("missing value for key `{key}`")));
    }
    raw.parse()
        .map_err(|e| CliError::Config(format!("invalid value for key `{key}`: {e}")))
}

impl RunConfig {
    /// Apply one `key=value` assignment from a config file.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), CliError> {
        match key {
            "variant" => self.variant = parse(key, raw)?,
            "lambda" => self.lambda = parse(key, raw)?,
            "a" => self.a = parse(key, raw)?,
            "b" => self.b = parse(key, raw)?,
            "rho" => self.rho = parse(key, raw)?,
            "r" => self.r = parse(key, raw)?,
            "tau" => self.tau = parse(key, raw)?,
            "t" => self.t = parse(key, raw)?,
            "spot" => self.spot = parse(key, raw)?,
            "sigma_sq" => self.sigma_sq = parse(key, raw)?,
            "T" => self.maturity = parse(key, raw)?,
            "K" => self.k = parse(key, raw)?,
            "K_min" => self.k_min = parse(key, raw)?,
            "K_max" => self.k_max = parse(key, raw)?,
            "K_step" => self.k_step = parse(key, raw)?,
            "t_min" => self.t_min = parse(key, raw)?,
            "t_max" => self.t_max = parse(key, raw)?,
            "t_step" => self.t_step = parse(key, raw)?,
            "alpha" => self.alpha = parse(key, raw)?,
            "eps" => self.eps = parse(key, raw)?,
            "v_max" => self.v_max = parse(key, raw)?,
            "abs_tol" => self.abs_tol = parse(key, raw)?,
            "fft_size" => self.fft_size = parse(key, raw)?,
            "n_paths" => self.n_paths = parse(key, raw)?,
            "seed" => self.seed = parse(key, raw)?,
            "path" => {
                if raw.is_empty() {
                    return Err(CliError::Config("missing value for key `path`".into()));
                }
                self.path = Some(PathBuf::from(raw));
            }
            "format" => {
                if raw != "csv" {
                    return Err(CliError::Config(format!(
                        "unsupported format `{raw}` (only csv)"
                    )));
                }
                self.format = raw.to_string();
            }
            other => {
                return Err(CliError::Config(format!("unknown config key `{other}`")));
            }
        }
        Ok(())
    }

    /// Load a flat key=value file; `#` starts a comment, blank lines are
    /// skipped, later assignments win.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: expected key=value, got `{line}`",
                    path.display(),
                    idx + 1
                ))
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| {
                CliError::Config(format!("{}:{}: {e}", path.display(), idx + 1))
            })?;
        }
        Ok(())
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(
            self.variant,
            self.lambda,
            self.a,
            self.b,
            self.rho,
            self.r,
            self.tau,
        )
        .map_err(CliError::Lib)
    }

    pub fn state_at(&self, t: f64) -> Result<MarketState, CliError> {
        MarketState::new(t, self.spot, self.sigma_sq).map_err(CliError::Lib)
    }

    pub fn settings(&self) -> QuadratureSettings {
        QuadratureSettings {
            v_max: self.v_max,
            abs_tol: self.abs_tol,
            fft_size: self.fft_size,
            eps: self.eps,
            ..QuadratureSettings::default()
        }
    }

    /// The full key set in file syntax, for the reproducibility sidecar.
    pub fn resolved_text(&self) -> String {
        let mut out = String::from("# resolved configuration (defaults included)\n");
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        kv("variant", self.variant.to_string());
        kv("lambda", self.lambda.to_string());
        kv("a", self.a.to_string());
        kv("b", self.b.to_string());
        kv("rho", self.rho.to_string());
        kv("r", self.r.to_string());
        kv("tau", self.tau.to_string());
        kv("t", self.t.to_string());
        kv("spot", self.spot.to_string());
        kv("sigma_sq", self.sigma_sq.to_string());
        kv("T", self.maturity.to_string());
        kv("K", self.k.to_string());
        kv("K_min", self.k_min.to_string());
        kv("K_max", self.k_max.to_string());
        kv("K_step", self.k_step.to_string());
        kv("t_min", self.t_min.to_string());
        kv("t_max", self.t_max.to_string());
        kv("t_step", self.t_step.to_string());
        kv("alpha", self.alpha.to_string());
        kv("eps", self.eps.to_string());
        kv("v_max", self.v_max.to_string());
        kv("abs_tol", self.abs_tol.to_string());
        kv("fft_size", self.fft_size.to_string());
        kv("n_paths", self.n_paths.to_string());
        kv("seed", self.seed.to_string());
        if let Some(path) = &self.path {
            kv("path", path.display().to_string());
        }
        kv("format", self.format.clone());
        out
    }
}

/// Inclusive arithmetic grid from `min` to `max` in steps of `step`.
pub fn grid(name: &str, min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !min.is_finite() || !max.is_finite() || !step.is_finite() {
        return Err(CliError::Config(format!(
            "{name} range must be finite, got [{min}, {max}] step {step}"
        )));
    }
    if min > max {
        return Err(CliError::Config(format!(
            "{name} range requires min <= max, got [{min}, {max}]"
        )));
    }
    if !(step > 0.0) {
        return Err(CliError::Config(format!(
            "{name} range requires a positive step, got {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min + step * i as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_a_valid_model() {
        let cfg = RunConfig::default();
        assert!(cfg.model().is_ok());
        assert!(cfg.state_at(cfg.t).is_ok());
    }

    #[test]
    fn unknown_key_is_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("shape", "3").is_err());
    }

    #[test]
    fn empty_value_is_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("spot", "").is_err());
    }

    #[test]
    fn grid_counts_match_the_sweep_ranges() {
        let ks = grid("strike", 0.12, 0.30, 0.02).unwrap();
        assert_eq!(ks.len(), 10);
        let ts = grid("time", 0.0, 0.98, 0.02).unwrap();
        assert_eq!(ts.len(), 50);
        assert_eq!(grid("strike", 0.2, 0.2, 0.02).unwrap(), vec![0.2]);
        assert!(grid("strike", 0.3, 0.1, 0.02).is_err());
        assert!(grid("strike", 0.1, 0.3, 0.0).is_err());
    }
}
