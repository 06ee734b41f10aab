//! Reduced spin density operators in the boosted frame, von Neumann
//! entropies, and the Holevo bound for the two- and four-symbol encodings.
//!
//! Every matrix in scope is real symmetric. The 2x2 eigenvalues come from the
//! closed form, the 4x4 ones from cyclic Jacobi rotations; entropies are in
//! bits with the 0 log 0 = 0 convention and eigenvalues within 1e-10 of the
//! [0, 1] boundary clamped onto it.

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigenvalues, kron2, sym2_eigenvalues};
use crate::quadrature::{integral_u, integral_v, IntegrationSpec, QuadratureResult};
use crate::relativity::Rapidity;
use crate::states::{validate_probability_vector, MomentumPacket};

const EIG_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// 2x2 real symmetric spin density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    e: [[f64; 2]; 2],
}

impl DensityMatrix2 {
    /// Validates symmetry, unit trace (1e-10) and positivity (eigenvalues
    /// above -1e-10) before accepting.
    pub fn new(e: [[f64; 2]; 2]) -> Result<Self> {
        if (e[0][1] - e[1][0]).abs() > EIG_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "asymmetric off-diagonal: {} vs {}",
                e[0][1], e[1][0]
            )));
        }
        let sym = 0.5 * (e[0][1] + e[1][0]);
        let m = DensityMatrix2 {
            e: [[e[0][0], sym], [sym, e[1][1]]],
        };
        m.check()?;
        Ok(m)
    }

    /// Constructor for entries that are valid by construction.
    pub(crate) fn from_symmetric(e: [[f64; 2]; 2]) -> Self {
        debug_assert!((e[0][1] - e[1][0]).abs() <= 1e-12);
        DensityMatrix2 { e }
    }

    fn check(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let eigs = self.eigenvalues();
        if eigs[1] < -EIG_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {}",
                eigs[1]
            )));
        }
        Ok(())
    }

    pub fn as_array(&self) -> &[[f64; 2]; 2] {
        &self.e
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.e[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.e[0][0] + self.e[1][1]
    }

    /// Eigenvalues in descending order (closed form).
    pub fn eigenvalues(&self) -> [f64; 2] {
        sym2_eigenvalues(self.e[0][0], self.e[0][1], self.e[1][1])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.e[i][j] - other.e[i][j]).abs());
            }
        }
        d
    }
}

/// 4x4 real symmetric spin density matrix for the two-particle encoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    e: [[f64; 4]; 4],
}

impl DensityMatrix4 {
    pub fn new(e: [[f64; 4]; 4]) -> Result<Self> {
        let mut sym = e;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (e[i][j] - e[j][i]).abs() > EIG_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "asymmetric entry ({i},{j}): {} vs {}",
                        e[i][j], e[j][i]
                    )));
                }
                let v = 0.5 * (e[i][j] + e[j][i]);
                sym[i][j] = v;
                sym[j][i] = v;
            }
        }
        let m = DensityMatrix4 { e: sym };
        m.check()?;
        Ok(m)
    }

    pub(crate) fn from_symmetric(e: [[f64; 4]; 4]) -> Self {
        DensityMatrix4 { e }
    }

    fn check(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let eigs = self.eigenvalues();
        if eigs[3] < -EIG_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {}",
                eigs[3]
            )));
        }
        Ok(())
    }

    pub fn as_array(&self) -> &[[f64; 4]; 4] {
        &self.e
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.e[i][j]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.e[i][i]).sum()
    }

    /// Eigenvalues in descending order via cyclic Jacobi.
    pub fn eigenvalues(&self) -> [f64; 4] {
        jacobi_eigenvalues(self.e)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.e[i][j] - other.e[i][j]).abs());
            }
        }
        d
    }
}

/// Tensor product of two 2x2 density matrices.
pub fn kron(a: &DensityMatrix2, b: &DensityMatrix2) -> DensityMatrix4 {
    DensityMatrix4::from_symmetric(kron2(a.as_array(), b.as_array()))
}

/// Entropy in bits of a set of eigenvalues, with boundary clamping.
fn entropy_from_eigenvalues(eigs: &[f64]) -> Result<f64> {
    let mut trace = 0.0;
    let mut h = 0.0;
    for &raw in eigs {
        if raw < -EIG_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {raw}"
            )));
        }
        let lam = if raw < 0.0 {
            0.0
        } else if raw > 1.0 && raw < 1.0 + EIG_TOL {
            1.0
        } else {
            raw
        };
        trace += lam;
        if lam > 0.0 {
            h -= lam * lam.log2();
        }
    }
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "eigenvalues sum to {trace}"
        )));
    }
    Ok(h)
}

/// von Neumann entropy in bits of a 2x2 density matrix.
pub fn von_neumann_entropy2(rho: &DensityMatrix2) -> Result<f64> {
    entropy_from_eigenvalues(&rho.eigenvalues())
}

/// von Neumann entropy in bits of a 4x4 density matrix.
pub fn von_neumann_entropy4(rho: &DensityMatrix4) -> Result<f64> {
    entropy_from_eigenvalues(&rho.eigenvalues())
}

/// Breakdown of one Holevo-bound evaluation.
#[derive(Debug, Clone)]
pub struct HolevoReport {
    /// The bound itself, in bits.
    pub chi: f64,
    /// Entropy of the ensemble average state.
    pub ensemble_entropy: f64,
    /// Entropy of each signal state.
    pub conditional_entropies: Vec<f64>,
    /// Eigenvalues of the ensemble average state.
    pub mixture_eigenvalues: Vec<f64>,
    /// Eigenvalues of each signal state.
    pub signal_eigenvalues: Vec<Vec<f64>>,
}

fn report_from_eigenvalues(
    probs: &[f64],
    mixture_eigenvalues: Vec<f64>,
    signal_eigenvalues: Vec<Vec<f64>>,
) -> Result<HolevoReport> {
    let ensemble_entropy = entropy_from_eigenvalues(&mixture_eigenvalues)?;
    let conditional_entropies = signal_eigenvalues
        .iter()
        .map(|e| entropy_from_eigenvalues(e))
        .collect::<Result<Vec<_>>>()?;
    let chi = ensemble_entropy
        - probs
            .iter()
            .zip(conditional_entropies.iter())
            .map(|(p, s)| p * s)
            .sum::<f64>();
    Ok(HolevoReport {
        chi,
        ensemble_entropy,
        conditional_entropies,
        mixture_eigenvalues,
        signal_eigenvalues,
    })
}

/// Holevo bound chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i) for 2x2 signals.
pub fn holevo2(probs: &[f64], states: &[DensityMatrix2]) -> Result<HolevoReport> {
    if probs.len() != states.len() {
        return Err(Error::LengthMismatch {
            probs: probs.len(),
            states: states.len(),
        });
    }
    validate_probability_vector(probs)?;
    let mut mix = [[0.0; 2]; 2];
    for (p, s) in probs.iter().zip(states.iter()) {
        for i in 0..2 {
            for j in 0..2 {
                mix[i][j] += p * s.entry(i, j);
            }
        }
    }
    let mixture = DensityMatrix2::from_symmetric(mix);
    report_from_eigenvalues(
        probs,
        mixture.eigenvalues().to_vec(),
        states.iter().map(|s| s.eigenvalues().to_vec()).collect(),
    )
}

/// Holevo bound for 4x4 signals.
pub fn holevo4(probs: &[f64], states: &[DensityMatrix4]) -> Result<HolevoReport> {
    if probs.len() != states.len() {
        return Err(Error::LengthMismatch {
            probs: probs.len(),
            states: states.len(),
        });
    }
    validate_probability_vector(probs)?;
    let mut mix = [[0.0; 4]; 4];
    for (p, s) in probs.iter().zip(states.iter()) {
        for i in 0..4 {
            for j in 0..4 {
                mix[i][j] += p * s.entry(i, j);
            }
        }
    }
    let mixture = DensityMatrix4::from_symmetric(mix);
    report_from_eigenvalues(
        probs,
        mixture.eigenvalues().to_vec(),
        states.iter().map(|s| s.eigenvalues().to_vec()).collect(),
    )
}

/// Boosted reduced matrix of the spin-up signal: diag(1 - V, V).
pub fn boosted_tau0(v: f64) -> Result<DensityMatrix2> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::WeightOutOfRange {
            name: "V",
            value: v,
        });
    }
    Ok(DensityMatrix2::from_symmetric([[1.0 - v, 0.0], [0.0, v]]))
}

/// Boosted reduced matrix of the rotated signal:
/// [[A, B], [B, 1 - A]] with A = cos^2(1 - U) + sin^2 U and
/// B = cos sin (1 - 4U).
pub fn boosted_tau1(theta: f64, u: f64) -> Result<DensityMatrix2> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::WeightOutOfRange {
            name: "U",
            value: u,
        });
    }
    if !theta.is_finite() {
        return Err(Error::InvalidAngle(theta));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let a = c * c * (1.0 - u) + s * s * u;
    let b = c * s * (1.0 - 4.0 * u);
    Ok(DensityMatrix2::from_symmetric([[a, b], [b, 1.0 - a]]))
}

/// Analytic rest-frame Holevo bound of the two-symbol encoding, through the
/// mixture eigenvalues beta = 1/2 +/- sqrt(1 + 4 sin^2(theta)(lambda^2 - lambda))/2.
pub fn holevo_rest2(lambda: f64, theta: f64) -> Result<HolevoReport> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidProbability(lambda));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidAngle(theta));
    }
    let s = theta.sin();
    let disc = (1.0 + 4.0 * s * s * (lambda * lambda - lambda)).max(0.0);
    let half_root = 0.5 * disc.sqrt();
    let betas = vec![0.5 + half_root, 0.5 - half_root];
    report_from_eigenvalues(
        &[lambda, 1.0 - lambda],
        betas,
        vec![vec![1.0, 0.0], vec![1.0, 0.0]],
    )
}

/// Rest-frame Holevo bound of the four-symbol encoding; conditional
/// entropies vanish because the signals are pure products.
pub fn holevo_rest4(lambdas: [f64; 4], theta: f64) -> Result<HolevoReport> {
    validate_probability_vector(&lambdas)?;
    if !theta.is_finite() {
        return Err(Error::InvalidAngle(theta));
    }
    let (tau0, tau1) = crate::states::rest_signal_matrices(theta);
    let mixture = crate::states::mix_products(lambdas, &tau0, &tau1);
    let pure = vec![1.0, 0.0, 0.0, 0.0];
    report_from_eigenvalues(
        &lambdas,
        mixture.eigenvalues().to_vec(),
        vec![pure.clone(), pure.clone(), pure.clone(), pure],
    )
}

/// Packets, angle, rapidity, and quadrature tolerance of one channel setup.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    pub alpha: Rapidity,
    pub packet0: MomentumPacket,
    pub packet1: MomentumPacket,
    pub theta: f64,
    pub quadrature: IntegrationSpec,
}

impl ChannelParams {
    pub fn new(
        alpha: Rapidity,
        packet0: MomentumPacket,
        packet1: MomentumPacket,
        theta: f64,
        quadrature: IntegrationSpec,
    ) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidAngle(theta));
        }
        quadrature.validate()?;
        Ok(ChannelParams {
            alpha,
            packet0,
            packet1,
            theta,
            quadrature,
        })
    }
}

/// The two spin-flip weights of a channel setup, evaluated once and reused
/// across angles and source distributions (V and U do not depend on either).
#[derive(Debug, Clone, Copy)]
pub struct BoostedChannel {
    v: QuadratureResult,
    u: QuadratureResult,
}

impl BoostedChannel {
    pub fn evaluate(
        packet0: &MomentumPacket,
        packet1: &MomentumPacket,
        alpha: &Rapidity,
        spec: &IntegrationSpec,
    ) -> Result<Self> {
        Ok(BoostedChannel {
            v: integral_v(packet0, alpha, spec)?,
            u: integral_u(packet1, alpha, spec)?,
        })
    }

    pub fn for_params(params: &ChannelParams) -> Result<Self> {
        Self::evaluate(
            &params.packet0,
            &params.packet1,
            &params.alpha,
            &params.quadrature,
        )
    }

    pub fn v(&self) -> f64 {
        self.v.value
    }

    pub fn u(&self) -> f64 {
        self.u.value
    }

    /// Combined quadrature error estimate behind the two weights.
    pub fn quad_error(&self) -> f64 {
        self.v.error_estimate + self.u.error_estimate
    }

    pub fn tau0_prime(&self) -> DensityMatrix2 {
        boosted_tau0(self.v.value).expect("V validated on evaluation")
    }

    pub fn tau1_prime(&self, theta: f64) -> DensityMatrix2 {
        boosted_tau1(theta, self.u.value).expect("U validated on evaluation")
    }

    /// chi(tau') for the two-symbol source, from the eigenvalues of tau',
    /// tau0' and tau1'.
    pub fn holevo2(&self, lambda: f64, theta: f64) -> Result<HolevoReport> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidProbability(lambda));
        }
        let tau0 = self.tau0_prime();
        let tau1 = self.tau1_prime(theta);
        let mut mix = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                mix[i][j] = lambda * tau0.entry(i, j) + (1.0 - lambda) * tau1.entry(i, j);
            }
        }
        let mixture = DensityMatrix2::from_symmetric(mix);
        report_from_eigenvalues(
            &[lambda, 1.0 - lambda],
            mixture.eigenvalues().to_vec(),
            vec![tau0.eigenvalues().to_vec(), tau1.eigenvalues().to_vec()],
        )
    }

    /// chi(tilde tau') for the four-symbol source, from the 4x4 spectrum plus
    /// the closed combination of the 2x2 signal entropies.
    pub fn holevo4(&self, lambdas: [f64; 4], theta: f64) -> Result<HolevoReport> {
        validate_probability_vector(&lambdas)?;
        let tau0 = self.tau0_prime();
        let tau1 = self.tau1_prime(theta);
        let mixture = crate::states::mix_products(lambdas, &tau0, &tau1);

        let e0 = tau0.eigenvalues();
        let e1 = tau1.eigenvalues();
        let outer = |a: [f64; 2], b: [f64; 2]| -> Vec<f64> {
            vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
        };
        report_from_eigenvalues(
            &lambdas,
            mixture.eigenvalues().to_vec(),
            vec![outer(e0, e0), outer(e0, e1), outer(e1, e0), outer(e1, e1)],
        )
    }
}

/// chi(tau') of the two-symbol source after computing V and U by quadrature.
pub fn holevo_boosted2(params: &ChannelParams, lambda: f64) -> Result<HolevoReport> {
    BoostedChannel::for_params(params)?.holevo2(lambda, params.theta)
}

/// chi(tilde tau') of the four-symbol source.
pub fn holevo_boosted4(params: &ChannelParams, lambdas: [f64; 4]) -> Result<HolevoReport> {
    BoostedChannel::for_params(params)?.holevo4(lambdas, params.theta)
}

/// The four boosted product signals, in symbol order.
pub fn boosted_product_states(channel: &BoostedChannel, theta: f64) -> [DensityMatrix4; 4] {
    let tau0 = channel.tau0_prime();
    let tau1 = channel.tau1_prime(theta);
    [
        kron(&tau0, &tau0),
        kron(&tau0, &tau1),
        kron(&tau1, &tau0),
        kron(&tau1, &tau1),
    ]
}
