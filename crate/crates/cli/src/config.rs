//! Run configuration: defaults, optional key=value file, flag overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Requested eigenvalue bracket width (the f64 relative floor applies
    /// underneath).
    pub bisect_tol: f64,
    /// Acceptance scale for Juddian-point residuals.
    pub residual_tol: f64,
    /// Exclusion radius around integer poles of the G series.
    pub pole_guard: f64,
    /// Order ceiling for exact polynomial construction.
    pub exact_cap: u32,
    /// Grid density of crossing scans.
    pub scan_steps: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// 0 means all available cores.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bisect_tol: 1e-13,
            residual_tol: 1e-9,
            pole_guard: rabi_core::gfunction::DEFAULT_POLE_GUARD,
            exact_cap: rabi_core::poly::DEFAULT_EXACT_CAP,
            scan_steps: rabi_core::juddian::DEFAULT_SCAN_STEPS,
            format: Format::Csv,
            output: None,
            threads: 0,
        }
    }
}

impl RunConfig {
    /// Apply `key = value` lines from a config file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected key=value", path.display(), lineno + 1);
            };
            self.apply(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "bisect_tol" => self.bisect_tol = parse_positive(value)?,
            "residual_tol" => self.residual_tol = parse_positive(value)?,
            "pole_guard" => self.pole_guard = parse_positive(value)?,
            "exact_cap" => {
                self.exact_cap = value.parse().context("exact_cap must be an integer")?;
                if self.exact_cap < 1 {
                    bail!("exact_cap must be at least 1");
                }
            }
            "scan_steps" => {
                self.scan_steps = value.parse().context("scan_steps must be an integer")?;
                if self.scan_steps < 2 {
                    bail!("scan_steps must be at least 2");
                }
            }
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => bail!("unknown format {other:?} (expected csv or json)"),
                }
            }
            "output" => self.output = Some(PathBuf::from(value)),
            "threads" => self.threads = value.parse().context("threads must be an integer")?,
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }
}

fn parse_positive(value: &str) -> Result<f64> {
    let v: f64 = value.parse().context("expected a number")?;
    if !(v > 0.0) {
        bail!("value must be positive, got {v}");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_then_flag_overrides() {
        let dir = std::env::temp_dir().join("rabi-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\nscan_steps = 64\nformat=json\n").unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&path).unwrap();
        assert_eq!(cfg.scan_steps, 64);
        assert_eq!(cfg.format, Format::Json);
        cfg.apply("scan_steps", "512").unwrap();
        assert_eq!(cfg.scan_steps, 512);
        assert!(cfg.apply("nonsense", "1").is_err());
        assert!(cfg.apply("bisect_tol", "-1").is_err());
    }
}
