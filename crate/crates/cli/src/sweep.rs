//! Figure sweeps: each runner walks its grid, computes the channel
//! quantities in parallel, and renders a deterministic CSV (fixed 9-digit
//! float formatting, comment header carrying the full resolved config).

use rayon::prelude::*;

use relchan::cp_analysis::{delta2_at, delta2_crossing, delta4_at, delta4_crossing};
use relchan::spin_channel::{holevo_rest2, holevo_rest4, BoostedChannel, ChannelParams};
use relchan::{IntegrationSpec, MomentumPacket, Rapidity};

use crate::config::{Experiment, SweepConfig};

#[derive(Debug)]
pub enum RunError {
    /// Parameters rejected before any row was computed.
    Invalid(String),
    /// Sweep finished but rows failed; the partial CSV is preserved.
    Numerical { csv: String, failures: usize },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Invalid(msg) => write!(f, "invalid sweep parameters: {msg}"),
            RunError::Numerical { failures, .. } => {
                write!(f, "{failures} row(s) failed numerically")
            }
        }
    }
}

/// Fixed 9-significant-digit float formatting; the rapidity sentinel prints
/// as "inf".
pub fn fmt_g9(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.8e}")
}

fn fmt_alpha(a: &Rapidity) -> String {
    match a {
        Rapidity::Finite(x) => fmt_g9(*x),
        Rapidity::Infinite => "inf".into(),
    }
}

fn check_chi(chi: f64, limit: f64) -> Result<f64, String> {
    if chi < -1e-9 || chi > limit + 1e-9 {
        return Err(format!("chi = {chi} escapes [0, {limit}]"));
    }
    Ok(chi)
}

struct Csv {
    lines: Vec<String>,
    failures: usize,
}

impl Csv {
    fn new(cfg: &SweepConfig, columns: &str) -> Csv {
        let mut lines = Vec::new();
        for (key, value) in cfg.provenance() {
            lines.push(format!("# {key} = {value}"));
        }
        lines.push(columns.to_string());
        Csv { lines, failures: 0 }
    }

    fn push_row(&mut self, row: Result<String, String>) {
        match row {
            Ok(line) => self.lines.push(line),
            Err(msg) => {
                self.lines.push(format!("# FAILED {msg}"));
                self.failures += 1;
            }
        }
    }

    fn comment(&mut self, text: String) {
        self.lines.push(format!("# {text}"));
    }

    fn finish(self) -> Result<String, RunError> {
        let csv = self.lines.join("\n") + "\n";
        if self.failures > 0 {
            Err(RunError::Numerical {
                csv,
                failures: self.failures,
            })
        } else {
            Ok(csv)
        }
    }
}

fn packets(cfg: &SweepConfig) -> Result<(MomentumPacket, MomentumPacket), RunError> {
    let p0 = MomentumPacket::new(cfg.k0, cfg.w0).map_err(|e| RunError::Invalid(e.to_string()))?;
    let p1 = MomentumPacket::new(cfg.k1, cfg.w1).map_err(|e| RunError::Invalid(e.to_string()))?;
    Ok((p0, p1))
}

/// Rest-frame Holevo bounds against the signal angle, for both encodings.
pub fn run_fig1(cfg: &SweepConfig) -> Result<String, RunError> {
    let rows: Vec<Result<String, String>> = cfg
        .theta_grid
        .par_iter()
        .map(|&theta| {
            let chi2 = holevo_rest2(cfg.lambda, theta)
                .map_err(|e| format!("theta={theta}: {e}"))?
                .chi;
            let chi4 = holevo_rest4(cfg.lambdas, theta)
                .map_err(|e| format!("theta={theta}: {e}"))?
                .chi;
            check_chi(chi2, 1.0).map_err(|e| format!("theta={theta}: {e}"))?;
            check_chi(chi4, 2.0).map_err(|e| format!("theta={theta}: {e}"))?;
            Ok(format!(
                "{},{},{}",
                fmt_g9(theta),
                fmt_g9(chi2),
                fmt_g9(chi4)
            ))
        })
        .collect();

    let mut csv = Csv::new(cfg, "theta,chi2,chi4");
    for row in rows {
        csv.push_row(row);
    }
    csv.finish()
}

/// chi(tau') against rapidity for each configured mean momentum of the
/// second packet.
pub fn run_fig2(cfg: &SweepConfig) -> Result<String, RunError> {
    let (p0, _) = packets(cfg)?;
    let spec = IntegrationSpec::with_rel_tol(cfg.tol);

    let grid: Vec<(f64, Rapidity)> = cfg
        .k1_list
        .iter()
        .flat_map(|&k1| cfg.alphas.iter().map(move |a| (k1, *a)))
        .collect();

    let rows: Vec<Result<String, String>> = grid
        .par_iter()
        .map(|(k1, alpha)| {
            let ctx = format!("k1={k1} alpha={}", fmt_alpha(alpha));
            let p1 = MomentumPacket::new(*k1, cfg.w1).map_err(|e| format!("{ctx}: {e}"))?;
            let channel = BoostedChannel::evaluate(&p0, &p1, alpha, &spec)
                .map_err(|e| format!("{ctx}: {e}"))?;
            let report = channel
                .holevo2(cfg.lambda, cfg.theta)
                .map_err(|e| format!("{ctx}: {e}"))?;
            check_chi(report.chi, 1.0).map_err(|e| format!("{ctx}: {e}"))?;
            Ok(format!(
                "{},{},{},{},{},{},{}",
                fmt_alpha(alpha),
                fmt_g9(*k1),
                fmt_g9(report.chi),
                fmt_g9(report.ensemble_entropy),
                fmt_g9(report.conditional_entropies[0]),
                fmt_g9(report.conditional_entropies[1]),
                fmt_g9(channel.quad_error()),
            ))
        })
        .collect();

    let mut csv = Csv::new(cfg, "alpha,k1,chi,mix_entropy,s_tau0,s_tau1,quad_error");
    for row in rows {
        csv.push_row(row);
    }
    csv.finish()
}

/// chi(tilde tau') against rapidity for each configured angle.
pub fn run_fig3(cfg: &SweepConfig) -> Result<String, RunError> {
    let (p0, p1) = packets(cfg)?;
    let spec = IntegrationSpec::with_rel_tol(cfg.tol);

    // One channel evaluation per rapidity covers every angle.
    let channels: Vec<Result<BoostedChannel, String>> = cfg
        .alphas
        .par_iter()
        .map(|alpha| {
            BoostedChannel::evaluate(&p0, &p1, alpha, &spec)
                .map_err(|e| format!("alpha={}: {e}", fmt_alpha(alpha)))
        })
        .collect();

    let mut csv = Csv::new(cfg, "theta,alpha,chi,mix_entropy,s_tau0,s_tau1,quad_error");
    for &theta in &cfg.theta_list {
        for (alpha, channel) in cfg.alphas.iter().zip(channels.iter()) {
            let row = channel.as_ref().map_err(Clone::clone).and_then(|ch| {
                let ctx = format!("theta={theta} alpha={}", fmt_alpha(alpha));
                let report = ch
                    .holevo4(cfg.lambdas, theta)
                    .map_err(|e| format!("{ctx}: {e}"))?;
                check_chi(report.chi, 2.0).map_err(|e| format!("{ctx}: {e}"))?;
                let s0 = relchan::spin_channel::von_neumann_entropy2(&ch.tau0_prime())
                    .map_err(|e| format!("{ctx}: {e}"))?;
                let s1 = relchan::spin_channel::von_neumann_entropy2(&ch.tau1_prime(theta))
                    .map_err(|e| format!("{ctx}: {e}"))?;
                Ok(format!(
                    "{},{},{},{},{},{},{}",
                    fmt_g9(theta),
                    fmt_alpha(alpha),
                    fmt_g9(report.chi),
                    fmt_g9(report.ensemble_entropy),
                    fmt_g9(s0),
                    fmt_g9(s1),
                    fmt_g9(ch.quad_error()),
                ))
            });
            csv.push_row(row);
        }
    }
    csv.finish()
}

/// chi(tau') against the second packet's width, per angle, at fixed boost.
pub fn run_fig4(cfg: &SweepConfig) -> Result<String, RunError> {
    let (p0, _) = packets(cfg)?;
    let spec = IntegrationSpec::with_rel_tol(cfg.tol);
    let alpha = cfg.alphas[0];

    let channels: Vec<Result<BoostedChannel, String>> = cfg
        .w1_grid
        .par_iter()
        .map(|&w1| {
            let p1 = MomentumPacket::new(cfg.k1, w1).map_err(|e| format!("w1={w1}: {e}"))?;
            BoostedChannel::evaluate(&p0, &p1, &alpha, &spec).map_err(|e| format!("w1={w1}: {e}"))
        })
        .collect();

    let mut csv = Csv::new(cfg, "theta,w1,chi,mix_entropy,s_tau0,s_tau1,quad_error");
    for &theta in &cfg.theta_list {
        for (w1, channel) in cfg.w1_grid.iter().zip(channels.iter()) {
            let row = channel.as_ref().map_err(Clone::clone).and_then(|ch| {
                let ctx = format!("theta={theta} w1={w1}");
                let report = ch
                    .holevo2(cfg.lambda, theta)
                    .map_err(|e| format!("{ctx}: {e}"))?;
                check_chi(report.chi, 1.0).map_err(|e| format!("{ctx}: {e}"))?;
                Ok(format!(
                    "{},{},{},{},{},{},{}",
                    fmt_g9(theta),
                    fmt_g9(*w1),
                    fmt_g9(report.chi),
                    fmt_g9(report.ensemble_entropy),
                    fmt_g9(report.conditional_entropies[0]),
                    fmt_g9(report.conditional_entropies[1]),
                    fmt_g9(ch.quad_error()),
                ))
            });
            csv.push_row(row);
        }
    }
    csv.finish()
}

/// Non-CP witnesses against the angle at fixed boost, plus the bisected
/// crossing angles reported as trailing comments.
pub fn run_fig5(cfg: &SweepConfig) -> Result<String, RunError> {
    let (p0, p1) = packets(cfg)?;
    let spec = IntegrationSpec::with_rel_tol(cfg.tol);
    let alpha = cfg.alphas[0];

    let channel = BoostedChannel::evaluate(&p0, &p1, &alpha, &spec)
        .map_err(|e| RunError::Invalid(e.to_string()))?;

    let rows: Vec<Result<String, String>> = cfg
        .theta_grid
        .par_iter()
        .map(|&theta| {
            let ctx = format!("theta={theta}");
            let d2 = delta2_at(&channel, cfg.lambda, theta).map_err(|e| format!("{ctx}: {e}"))?;
            let d4 = delta4_at(&channel, cfg.lambdas, theta).map_err(|e| format!("{ctx}: {e}"))?;
            Ok(format!(
                "{},{},{},{}",
                fmt_g9(theta),
                fmt_g9(d2),
                fmt_g9(d4),
                fmt_g9(channel.quad_error()),
            ))
        })
        .collect();

    let mut csv = Csv::new(cfg, "theta,delta2,delta4,quad_error");
    for row in rows {
        csv.push_row(row);
    }

    // Crossing angles: bracket from the first grid angle to pi/2.
    let params = ChannelParams::new(alpha, p0, p1, cfg.theta, spec)
        .map_err(|e| RunError::Invalid(e.to_string()))?;
    let lo = cfg.theta_grid[0];
    let hi = std::f64::consts::FRAC_PI_2;
    match delta2_crossing(&params, cfg.lambda, (lo, hi)) {
        Ok(vartheta) => csv.comment(format!("vartheta_delta2 = {}", fmt_g9(vartheta))),
        Err(e) => csv.comment(format!("vartheta_delta2 unavailable: {e}")),
    }
    match delta4_crossing(&params, cfg.lambdas, (lo, hi)) {
        Ok(vartheta) => csv.comment(format!("vartheta_delta4 = {}", fmt_g9(vartheta))),
        Err(e) => csv.comment(format!("vartheta_delta4 unavailable: {e}")),
    }
    csv.finish()
}

/// Rapidity sweep of both encodings at the configured angle and packets.
pub fn run_custom(cfg: &SweepConfig) -> Result<String, RunError> {
    let (p0, p1) = packets(cfg)?;
    let spec = IntegrationSpec::with_rel_tol(cfg.tol);

    let rows: Vec<Result<String, String>> = cfg
        .alphas
        .par_iter()
        .map(|alpha| {
            let ctx = format!("alpha={}", fmt_alpha(alpha));
            let channel = BoostedChannel::evaluate(&p0, &p1, alpha, &spec)
                .map_err(|e| format!("{ctx}: {e}"))?;
            let two = channel
                .holevo2(cfg.lambda, cfg.theta)
                .map_err(|e| format!("{ctx}: {e}"))?;
            let four = channel
                .holevo4(cfg.lambdas, cfg.theta)
                .map_err(|e| format!("{ctx}: {e}"))?;
            check_chi(two.chi, 1.0).map_err(|e| format!("{ctx}: {e}"))?;
            check_chi(four.chi, 2.0).map_err(|e| format!("{ctx}: {e}"))?;
            Ok(format!(
                "{},{},{},{}",
                fmt_alpha(alpha),
                fmt_g9(two.chi),
                fmt_g9(four.chi),
                fmt_g9(channel.quad_error()),
            ))
        })
        .collect();

    let mut csv = Csv::new(cfg, "alpha,chi2,chi4,quad_error");
    for row in rows {
        csv.push_row(row);
    }
    csv.finish()
}

pub fn run(cfg: &SweepConfig) -> Result<String, RunError> {
    match cfg.experiment {
        Experiment::Fig1 => run_fig1(cfg),
        Experiment::Fig2 => run_fig2(cfg),
        Experiment::Fig3 => run_fig3(cfg),
        Experiment::Fig4 => run_fig4(cfg),
        Experiment::Fig5 => run_fig5(cfg),
        Experiment::Custom => run_custom(cfg),
    }
}
