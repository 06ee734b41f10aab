//! Sweep configuration: built-in defaults, then an optional key=value config
//! file, then command-line flags, in increasing precedence.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use relchan::Rapidity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Custom,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::Fig2 => "fig2",
            Experiment::Fig3 => "fig3",
            Experiment::Fig4 => "fig4",
            Experiment::Fig5 => "fig5",
            Experiment::Custom => "custom",
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Unresolved settings collected from the config file and the flags.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub w0: Option<f64>,
    pub w1: Option<f64>,
    pub k0: Option<f64>,
    pub k1: Option<f64>,
    pub theta: Option<f64>,
    pub lambda: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_steps: Option<usize>,
    pub alpha_infinite: Option<bool>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    // Grid keys only reachable through the config file.
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_steps: Option<usize>,
    pub theta_list: Option<Vec<f64>>,
    pub w1_min: Option<f64>,
    pub w1_max: Option<f64>,
    pub w1_steps: Option<usize>,
    pub k1_list: Option<Vec<f64>>,
}

impl Overrides {
    /// Later (flag) entries win over earlier (file) ones.
    pub fn merged_over(self, base: Overrides) -> Overrides {
        Overrides {
            w0: self.w0.or(base.w0),
            w1: self.w1.or(base.w1),
            k0: self.k0.or(base.k0),
            k1: self.k1.or(base.k1),
            theta: self.theta.or(base.theta),
            lambda: self.lambda.or(base.lambda),
            lambdas: self.lambdas.or(base.lambdas),
            alpha: self.alpha.or(base.alpha),
            alpha_min: self.alpha_min.or(base.alpha_min),
            alpha_max: self.alpha_max.or(base.alpha_max),
            alpha_steps: self.alpha_steps.or(base.alpha_steps),
            alpha_infinite: self.alpha_infinite.or(base.alpha_infinite),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
            theta_min: self.theta_min.or(base.theta_min),
            theta_max: self.theta_max.or(base.theta_max),
            theta_steps: self.theta_steps.or(base.theta_steps),
            theta_list: self.theta_list.or(base.theta_list),
            w1_min: self.w1_min.or(base.w1_min),
            w1_max: self.w1_max.or(base.w1_max),
            w1_steps: self.w1_steps.or(base.w1_steps),
            k1_list: self.k1_list.or(base.k1_list),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| ConfigError(format!("{key}: cannot parse '{v}' as a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| ConfigError(format!("{key}: cannot parse '{v}' as an integer")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => err(format!("{key}: cannot parse '{other}' as a bool")),
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(|part| parse_f64(key, part))
        .collect::<Result<Vec<_>, _>>()
}

/// Parses a flat key=value file: blank lines and '#' comments are skipped,
/// unknown keys are rejected.
pub fn parse_config_file(text: &str) -> Result<Overrides, ConfigError> {
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(format!("line {}: expected key=value", lineno + 1));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }

    let mut o = Overrides::default();
    for (key, value) in map {
        match key.as_str() {
            "w0" => o.w0 = Some(parse_f64(&key, &value)?),
            "w1" => o.w1 = Some(parse_f64(&key, &value)?),
            "k0" => o.k0 = Some(parse_f64(&key, &value)?),
            "k1" => o.k1 = Some(parse_f64(&key, &value)?),
            "theta" => o.theta = Some(parse_f64(&key, &value)?),
            "lambda" => o.lambda = Some(parse_f64(&key, &value)?),
            "lambdas" => o.lambdas = Some(parse_list(&key, &value)?),
            "alpha" => o.alpha = Some(parse_f64(&key, &value)?),
            "alpha_min" => o.alpha_min = Some(parse_f64(&key, &value)?),
            "alpha_max" => o.alpha_max = Some(parse_f64(&key, &value)?),
            "alpha_steps" => o.alpha_steps = Some(parse_usize(&key, &value)?),
            "alpha_infinite" => o.alpha_infinite = Some(parse_bool(&key, &value)?),
            "tol" => o.tol = Some(parse_f64(&key, &value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            "theta_min" => o.theta_min = Some(parse_f64(&key, &value)?),
            "theta_max" => o.theta_max = Some(parse_f64(&key, &value)?),
            "theta_steps" => o.theta_steps = Some(parse_usize(&key, &value)?),
            "theta_list" => o.theta_list = Some(parse_list(&key, &value)?),
            "w1_min" => o.w1_min = Some(parse_f64(&key, &value)?),
            "w1_max" => o.w1_max = Some(parse_f64(&key, &value)?),
            "w1_steps" => o.w1_steps = Some(parse_usize(&key, &value)?),
            "k1_list" => o.k1_list = Some(parse_list(&key, &value)?),
            other => return err(format!("unknown key '{other}'")),
        }
    }
    Ok(o)
}

/// Fully resolved sweep description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub w0: f64,
    pub w1: f64,
    pub k0: f64,
    pub k1: f64,
    pub theta: f64,
    pub lambda: f64,
    pub lambdas: [f64; 4],
    pub tol: f64,
    pub out: Option<PathBuf>,
    /// Rapidity grid (fig2, fig3, custom) or the single point (fig4, fig5).
    pub alphas: Vec<Rapidity>,
    /// Swept angle grid (fig1, fig5).
    pub theta_grid: Vec<f64>,
    /// Angle curve set (fig3, fig4).
    pub theta_list: Vec<f64>,
    /// Swept width grid (fig4).
    pub w1_grid: Vec<f64>,
    /// Mean-momentum curve set (fig2).
    pub k1_list: Vec<f64>,
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn logspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let (lo, hi) = (min.ln(), max.ln());
    (0..steps)
        .map(|i| (lo + (hi - lo) * i as f64 / (steps - 1) as f64).exp())
        .collect()
}

fn check_range(name: &str, min: f64, max: f64, steps: usize) -> Result<(), ConfigError> {
    if steps < 2 {
        return err(format!("{name}: steps must be at least 2 (got {steps})"));
    }
    if !(min < max) {
        return err(format!("{name}: range [{min}, {max}] is not ordered"));
    }
    Ok(())
}

impl SweepConfig {
    pub fn resolve(experiment: Experiment, o: &Overrides) -> Result<SweepConfig, ConfigError> {
        use std::f64::consts::PI;

        let w0 = o.w0.unwrap_or(0.05);
        let w1 = o.w1.unwrap_or(6.0);
        let k0 = o.k0.unwrap_or(1.0);
        let default_k1 = if experiment == Experiment::Fig4 {
            10.0
        } else {
            50.0
        };
        let k1 = o.k1.unwrap_or(default_k1);
        let theta = o.theta.unwrap_or(PI / 8.0);
        let lambda = o.lambda.unwrap_or(0.5);
        let lambdas: [f64; 4] = match &o.lambdas {
            None => [0.25; 4],
            Some(v) => {
                if v.len() != 4 {
                    return err(format!("lambdas: expected 4 entries, got {}", v.len()));
                }
                [v[0], v[1], v[2], v[3]]
            }
        };
        let tol = o.tol.unwrap_or(1e-6);

        for (name, value) in [("w0", w0), ("w1", w1)] {
            if !(value > 0.0) || !value.is_finite() {
                return err(format!("{name} must be positive (got {value})"));
            }
        }
        if !(0.0..=1.0).contains(&lambda) {
            return err(format!("lambda must lie in [0, 1] (got {lambda})"));
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return err(format!(
                "lambdas must be probabilities summing to 1 (got {lambdas:?})"
            ));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return err(format!("tol must be positive (got {tol})"));
        }

        // Rapidity grid: 0, a log-spaced ramp, and the asymptotic endpoint.
        let alphas = if let Some(a) = o.alpha {
            if !a.is_finite() {
                return err(format!(
                    "alpha must be finite (got {a}); use alpha_infinite"
                ));
            }
            vec![Rapidity::Finite(a)]
        } else if matches!(experiment, Experiment::Fig4 | Experiment::Fig5) {
            match o.alpha_infinite {
                Some(false) => return err("fig4/fig5 need alpha or alpha_infinite=true"),
                _ => vec![Rapidity::Infinite],
            }
        } else {
            let min = o.alpha_min.unwrap_or(0.05);
            let max = o.alpha_max.unwrap_or(12.0);
            let steps = o.alpha_steps.unwrap_or(40);
            check_range("alpha", min, max, steps)?;
            if !(min > 0.0) {
                return err(format!("alpha_min must be positive (got {min})"));
            }
            let mut grid = vec![Rapidity::Finite(0.0)];
            grid.extend(logspace(min, max, steps).into_iter().map(Rapidity::Finite));
            if o.alpha_infinite.unwrap_or(true) {
                grid.push(Rapidity::Infinite);
            }
            grid
        };

        // Swept-angle grid.
        let theta_grid = match experiment {
            Experiment::Fig1 => {
                let min = o.theta_min.unwrap_or(0.0);
                let max = o.theta_max.unwrap_or(PI);
                let steps = o.theta_steps.unwrap_or(65);
                check_range("theta", min, max, steps)?;
                linspace(min, max, steps)
            }
            Experiment::Fig5 => {
                let min = o.theta_min.unwrap_or(PI / 64.0);
                let max = o.theta_max.unwrap_or(PI - PI / 64.0);
                let steps = o.theta_steps.unwrap_or(49);
                check_range("theta", min, max, steps)?;
                if !(min > 0.0 && max < PI) {
                    return err("fig5 theta grid must stay strictly inside (0, pi)");
                }
                linspace(min, max, steps)
            }
            _ => Vec::new(),
        };

        let theta_list = match &o.theta_list {
            Some(list) => list.clone(),
            None => match experiment {
                Experiment::Fig3 => vec![0.0, PI / 10.0, PI / 8.0, PI / 4.0, PI / 2.0],
                Experiment::Fig4 => vec![0.0, PI / 8.0, PI / 4.0, PI / 2.0],
                _ => Vec::new(),
            },
        };

        let w1_grid = if experiment == Experiment::Fig4 {
            let min = o.w1_min.unwrap_or(0.25);
            let max = o.w1_max.unwrap_or(12.0);
            let steps = o.w1_steps.unwrap_or(30);
            check_range("w1", min, max, steps)?;
            if !(min > 0.0) {
                return err(format!("w1_min must be positive (got {min})"));
            }
            linspace(min, max, steps)
        } else {
            Vec::new()
        };

        let k1_list = match &o.k1_list {
            Some(list) => list.clone(),
            None => vec![k1],
        };

        Ok(SweepConfig {
            experiment,
            w0,
            w1,
            k0,
            k1,
            theta,
            lambda,
            lambdas,
            tol,
            out: o.out.clone(),
            alphas,
            theta_grid,
            theta_list,
            w1_grid,
            k1_list,
        })
    }

    /// Provenance lines echoed at the top of every CSV, in fixed order.
    pub fn provenance(&self) -> Vec<(String, String)> {
        let fmt_list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut lines = vec![
            ("experiment".into(), self.experiment.name().to_string()),
            ("w0".into(), format!("{}", self.w0)),
            ("w1".into(), format!("{}", self.w1)),
            ("k0".into(), format!("{}", self.k0)),
            ("k1".into(), format!("{}", self.k1)),
            ("theta".into(), format!("{}", self.theta)),
            ("lambda".into(), format!("{}", self.lambda)),
            ("lambdas".into(), fmt_list(&self.lambdas)),
            ("tol".into(), format!("{}", self.tol)),
        ];
        let fmt_alpha = |a: &Rapidity| match a {
            Rapidity::Finite(x) => format!("{x}"),
            Rapidity::Infinite => "inf".to_string(),
        };
        match self.experiment {
            Experiment::Fig1 => {}
            Experiment::Fig4 | Experiment::Fig5 => {
                lines.push(("alpha".into(), fmt_alpha(&self.alphas[0])));
            }
            _ => {
                let alphas = self
                    .alphas
                    .iter()
                    .map(fmt_alpha)
                    .collect::<Vec<_>>()
                    .join(",");
                lines.push(("alphas".into(), alphas));
            }
        }
        if !self.theta_grid.is_empty() {
            lines.push(("theta_grid".into(), fmt_list(&self.theta_grid)));
        }
        if !self.theta_list.is_empty() {
            lines.push(("theta_list".into(), fmt_list(&self.theta_list)));
        }
        if !self.w1_grid.is_empty() {
            lines.push(("w1_grid".into(), fmt_list(&self.w1_grid)));
        }
        if self.experiment == Experiment::Fig2 {
            lines.push(("k1_list".into(), fmt_list(&self.k1_list)));
        }
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing_rejects_unknown_keys() {
        assert!(parse_config_file("w0 = 0.1\nbogus = 3\n").is_err());
        assert!(parse_config_file("just a line\n").is_err());
    }

    #[test]
    fn file_parsing_reads_values() {
        let o = parse_config_file("# comment\nw0 = 0.1\nlambdas = 0.1,0.2,0.3,0.4\n").unwrap();
        assert_eq!(o.w0, Some(0.1));
        assert_eq!(o.lambdas.as_deref(), Some(&[0.1, 0.2, 0.3, 0.4][..]));
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config_file("w0 = 0.1\nw1 = 2.0\n").unwrap();
        let flags = Overrides {
            w0: Some(0.7),
            ..Default::default()
        };
        let merged = flags.merged_over(file);
        assert_eq!(merged.w0, Some(0.7));
        assert_eq!(merged.w1, Some(2.0));
    }

    #[test]
    fn resolve_validates_probabilities() {
        let mut o = Overrides {
            lambdas: Some(vec![0.5, 0.5, 0.5, -0.5]),
            ..Default::default()
        };
        assert!(SweepConfig::resolve(Experiment::Fig3, &o).is_err());
        o.lambdas = Some(vec![0.5, 0.5]);
        assert!(SweepConfig::resolve(Experiment::Fig3, &o).is_err());
        o.lambdas = None;
        o.lambda = Some(1.5);
        assert!(SweepConfig::resolve(Experiment::Fig2, &o).is_err());
    }

    #[test]
    fn resolve_validates_ranges() {
        let o = Overrides {
            alpha_steps: Some(1),
            ..Default::default()
        };
        assert!(SweepConfig::resolve(Experiment::Fig2, &o).is_err());
        let o = Overrides {
            theta_min: Some(2.0),
            theta_max: Some(1.0),
            ..Default::default()
        };
        assert!(SweepConfig::resolve(Experiment::Fig1, &o).is_err());
    }

    #[test]
    fn fig2_defaults_match_the_standard_setup() {
        let cfg = SweepConfig::resolve(Experiment::Fig2, &Overrides::default()).unwrap();
        assert_eq!(cfg.w0, 0.05);
        assert_eq!(cfg.w1, 6.0);
        assert_eq!(cfg.k0, 1.0);
        assert_eq!(cfg.k1_list, vec![50.0]);
        assert_eq!(cfg.alphas.len(), 42); // 0, 40 log-spaced, inf
        assert_eq!(cfg.alphas[0], Rapidity::Finite(0.0));
        assert_eq!(*cfg.alphas.last().unwrap(), Rapidity::Infinite);
    }

    #[test]
    fn fig4_defaults_to_asymptotic_boost() {
        let cfg = SweepConfig::resolve(Experiment::Fig4, &Overrides::default()).unwrap();
        assert_eq!(cfg.alphas, vec![Rapidity::Infinite]);
        assert_eq!(cfg.k1, 10.0);
        assert!(!cfg.w1_grid.is_empty());
    }
}
