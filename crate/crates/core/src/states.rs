//! Rest-frame state preparation: Gaussian momentum packets, the two signal
//! spinors, analytic overlaps, and the rest-frame reduced spin matrices.
//!
//! Momenta are in units of the particle mass throughout; the mean momentum is
//! restricted to the x axis, which is what the closed forms downstream assume.

use crate::error::{Error, Result};
use crate::spin_channel::{DensityMatrix2, DensityMatrix4};

/// Normalized Gaussian momentum amplitude with mean K along x and width W,
/// both in units of the particle mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPacket {
    k: f64,
    w: f64,
}

impl MomentumPacket {
    pub fn new(k: f64, w: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::InvalidPacketMomentum(k));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidPacketWidth(w));
        }
        Ok(MomentumPacket { k, w })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Amplitude pi^(-3/4) W^(-3/2) exp(-(q - K e_x)^2 / (2 W^2)).
    pub fn value(&self, q: [f64; 3]) -> f64 {
        let dx = q[0] - self.k;
        let r2 = dx * dx + q[1] * q[1] + q[2] * q[2];
        let norm = std::f64::consts::PI.powf(-0.75) * self.w.powf(-1.5);
        norm * (-r2 / (2.0 * self.w * self.w)).exp()
    }

    /// Analytic L2 overlap with another packet,
    /// [2 W0 W1 / (W0^2 + W1^2)]^(3/2) exp(-(K0 - K1)^2 / (2 (W0^2 + W1^2))).
    pub fn overlap(&self, other: &MomentumPacket) -> f64 {
        let w2 = self.w * self.w + other.w * other.w;
        let dk = self.k - other.k;
        (2.0 * self.w * other.w / w2).powf(1.5) * (-dk * dk / (2.0 * w2)).exp()
    }
}

/// A two-spinor wave function: one Gaussian packet times a spin direction.
/// theta = 0 is the spin-up signal; the second signal carries the rotated
/// spinor (cos theta, sin theta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureSpinorState {
    pub packet: MomentumPacket,
    theta: f64,
}

impl PureSpinorState {
    pub fn new(packet: MomentumPacket, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidAngle(theta));
        }
        Ok(PureSpinorState { packet, theta })
    }

    /// The spin-up signal (theta = 0).
    pub fn up(packet: MomentumPacket) -> Self {
        PureSpinorState { packet, theta: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn spinor(&self) -> [f64; 2] {
        [self.theta.cos(), self.theta.sin()]
    }
}

/// |<s0|s1>| for the signal pair: |cos theta_1| times the packet overlap.
/// Only the pair with s0 in the spin-up form is supported.
pub fn state_overlap(s0: &PureSpinorState, s1: &PureSpinorState) -> Result<f64> {
    if s0.theta != 0.0 {
        return Err(Error::SignalNotUp(s0.theta));
    }
    Ok(s1.theta.cos().abs() * s0.packet.overlap(&s1.packet))
}

/// Two-symbol source: probability lambda of the spin-up signal.
#[derive(Debug, Clone, Copy)]
pub struct Ensemble2 {
    lambda: f64,
    pub state0: PureSpinorState,
    pub state1: PureSpinorState,
}

impl Ensemble2 {
    pub fn new(lambda: f64, state0: PureSpinorState, state1: PureSpinorState) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidProbability(lambda));
        }
        if state0.theta != 0.0 {
            return Err(Error::SignalNotUp(state0.theta));
        }
        Ok(Ensemble2 {
            lambda,
            state0,
            state1,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Four-symbol source over product states of the signal pair.
#[derive(Debug, Clone, Copy)]
pub struct Ensemble4 {
    lambdas: [f64; 4],
    pub state0: PureSpinorState,
    pub state1: PureSpinorState,
}

impl Ensemble4 {
    pub fn new(
        lambdas: [f64; 4],
        state0: PureSpinorState,
        state1: PureSpinorState,
    ) -> Result<Self> {
        validate_probability_vector(&lambdas)?;
        if state0.theta != 0.0 {
            return Err(Error::SignalNotUp(state0.theta));
        }
        Ok(Ensemble4 {
            lambdas,
            state0,
            state1,
        })
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }
}

pub(crate) fn validate_probability_vector(p: &[f64]) -> Result<()> {
    for &x in p {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidProbabilityVector(format!(
                "entry {x} outside [0, 1]"
            )));
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbabilityVector(format!(
            "entries sum to {sum}"
        )));
    }
    Ok(())
}

/// Rest-frame reduced spin matrix of a two-symbol ensemble:
/// lambda diag(1, 0) + (1 - lambda) [[cos^2, cos sin], [cos sin, sin^2]].
pub fn rest_tau(ensemble: &Ensemble2) -> DensityMatrix2 {
    rest_tau_parts(ensemble.lambda, ensemble.state1.theta)
}

pub(crate) fn rest_tau_parts(lambda: f64, theta: f64) -> DensityMatrix2 {
    let (c, s) = (theta.cos(), theta.sin());
    DensityMatrix2::from_symmetric([
        [lambda + (1.0 - lambda) * c * c, (1.0 - lambda) * c * s],
        [(1.0 - lambda) * c * s, (1.0 - lambda) * s * s],
    ])
}

/// The two rest-frame signal matrices (projectors on the up and rotated spinors).
pub(crate) fn rest_signal_matrices(theta: f64) -> (DensityMatrix2, DensityMatrix2) {
    let (c, s) = (theta.cos(), theta.sin());
    let tau0 = DensityMatrix2::from_symmetric([[1.0, 0.0], [0.0, 0.0]]);
    let tau1 = DensityMatrix2::from_symmetric([[c * c, c * s], [c * s, s * s]]);
    (tau0, tau1)
}

/// Rest-frame reduced spin matrix of the four-symbol ensemble:
/// the convex combination of the four tensor products of the signal matrices.
pub fn rest_tau4(ensemble: &Ensemble4) -> DensityMatrix4 {
    let (tau0, tau1) = rest_signal_matrices(ensemble.state1.theta);
    mix_products(ensemble.lambdas, &tau0, &tau1)
}

pub(crate) fn mix_products(
    lambdas: [f64; 4],
    tau0: &DensityMatrix2,
    tau1: &DensityMatrix2,
) -> DensityMatrix4 {
    let pairs = [(tau0, tau0), (tau0, tau1), (tau1, tau0), (tau1, tau1)];
    let mut acc = [[0.0; 4]; 4];
    for (lam, (a, b)) in lambdas.iter().zip(pairs.iter()) {
        let prod = crate::linalg::kron2(a.as_array(), b.as_array());
        for i in 0..4 {
            for j in 0..4 {
                acc[i][j] += lam * prod[i][j];
            }
        }
    }
    DensityMatrix4::from_symmetric(acc)
}
