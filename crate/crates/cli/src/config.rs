//! Run configuration: a flat JSON file whose keys mirror the command-line
//! flags, with flags taking precedence.

use std::path::{Path, PathBuf};

use catenary_core::dynamics::SolverConfig;
use serde::Deserialize;

use crate::error::CliError;

/// Largest number of points a single grid description may expand to.
pub const MAX_GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<Vec<f64>>,
    pub r0: Option<Vec<f64>>,
    pub r0_grid: Option<String>,
    pub span: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub eps_unit: Option<f64>,
    pub eps_origin: Option<f64>,
    pub v_max: Option<f64>,
    pub max_samples: Option<usize>,
    pub two_sided: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: RunConfig) -> Self {
        Self {
            alpha: over.alpha.or(self.alpha),
            r0: over.r0.or(self.r0),
            r0_grid: over.r0_grid.or(self.r0_grid),
            span: over.span.or(self.span),
            rel_tol: over.rel_tol.or(self.rel_tol),
            abs_tol: over.abs_tol.or(self.abs_tol),
            eps_unit: over.eps_unit.or(self.eps_unit),
            eps_origin: over.eps_origin.or(self.eps_origin),
            v_max: over.v_max.or(self.v_max),
            max_samples: over.max_samples.or(self.max_samples),
            two_sided: over.two_sided.or(self.two_sided),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let d = SolverConfig::default();
        let cfg = SolverConfig {
            span: self.span.unwrap_or(d.span),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            eps_unit: self.eps_unit.unwrap_or(d.eps_unit),
            eps_origin: self.eps_origin.unwrap_or(d.eps_origin),
            v_max: self.v_max.unwrap_or(d.v_max),
            max_samples: self.max_samples.unwrap_or(d.max_samples),
            two_sided: self.two_sided.unwrap_or(d.two_sided),
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    pub fn alphas(&self) -> Result<Vec<f64>, CliError> {
        let a = dedup(self.alpha.clone().unwrap_or_default())?;
        if a.is_empty() {
            return Err(CliError::Usage("--alpha is required".into()));
        }
        Ok(a)
    }

    /// `r0` values and the grid, merged, sorted and de-duplicated.
    pub fn r0_values(&self) -> Result<Vec<f64>, CliError> {
        let mut v = self.r0.clone().unwrap_or_default();
        if let Some(g) = &self.r0_grid {
            v.extend(parse_grid(g)?);
        }
        let v = dedup(v)?;
        if v.is_empty() {
            return Err(CliError::Usage("--r0 or --r0-grid is required".into()));
        }
        Ok(v)
    }
}

fn dedup(mut v: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
        return Err(CliError::Usage(format!("non-finite value {bad}")));
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// `start:stop:count`, linear, or `log:start:stop:count`, geometric. Both
/// ends are included.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad grid '{text}', expected [log:]start:stop:count"));
    let parts: Vec<&str> = text.split(':').collect();
    let (log, parts) = match parts.as_slice() {
        ["log", rest @ ..] => (true, rest),
        rest => (false, rest),
    };
    let [start, stop, count] = parts else { return Err(bad()) };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() || count == 0 || count > MAX_GRID_POINTS {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(CliError::Usage(format!("log grid '{text}' needs positive ends")));
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / n;
            if i == count - 1 {
                stop
            } else if log {
                (start.ln() + t * (stop.ln() - start.ln())).exp()
            } else {
                start + t * (stop - start)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_expand_and_deduplicate() {
        assert_eq!(parse_grid("0.5:1.5:3").unwrap(), vec![0.5, 1.0, 1.5]);
        let g = parse_grid("log:0.01:1:3").unwrap();
        assert!((g[1] - 0.1).abs() < 1e-15 && g[2] == 1.0);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("log:-1:2:3").is_err());
        let cfg = RunConfig { r0: Some(vec![1.0, 0.5]), r0_grid: Some("0.5:1.5:3".into()), ..Default::default() };
        assert_eq!(cfg.r0_values().unwrap(), vec![0.5, 1.0, 1.5]);
    }

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig = serde_json::from_str(r#"{"alpha": [1.0], "span": 3.0, "rel_tol": 1e-9}"#).unwrap();
        let flags = RunConfig { span: Some(6.0), ..Default::default() };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.span, Some(6.0));
        assert_eq!(merged.rel_tol, Some(1e-9));
        assert_eq!(merged.alpha, Some(vec![1.0]));
        assert!(serde_json::from_str::<RunConfig>(r#"{"alhpa": 1}"#).is_err());
    }

    #[test]
    fn invalid_solver_values_are_usage_errors() {
        let cfg = RunConfig { rel_tol: Some(-1.0), ..Default::default() };
        assert!(matches!(cfg.solver(), Err(CliError::Usage(_))));
    }
}
