//! Lorentz kinematics on two-spinors: the x-boost matrix, the Wigner
//! rotation, pointwise boosted spinor wave functions, and a brute-force 3D
//! quadrature oracle for the boosted reduced spin matrix.
//!
//! Orientation is pinned by the receiver-frame energy written in terms of the
//! sender-frame momentum, P0 = Q0 cosh(alpha) - Qx sinh(alpha); every formula
//! here uses that convention, which keeps the Wigner rotation unitary and the
//! boosted components normalized.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Mat2c;
use crate::spin_channel::DensityMatrix2;
use crate::states::{MomentumPacket, PureSpinorState};

/// Boost parameter: a finite rapidity, or the sentinel for the asymptotic
/// regime. The sentinel is meaningful only to the integral evaluators; the
/// pointwise kinematics below reject it because spinor norm factors diverge
/// at infinite boost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rapidity {
    Finite(f64),
    Infinite,
}

impl Rapidity {
    pub fn finite(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFiniteRapidity(alpha));
        }
        Ok(Rapidity::Finite(alpha))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rapidity::Infinite)
    }

    /// Receiver velocity v = -tanh(alpha); the sentinel maps to |v| -> 1.
    pub fn velocity(&self) -> f64 {
        match *self {
            Rapidity::Finite(a) => -a.tanh(),
            Rapidity::Infinite => -1.0,
        }
    }

    fn require_finite(&self) -> Result<f64> {
        match *self {
            Rapidity::Finite(a) => Ok(a),
            Rapidity::Infinite => Err(Error::InfiniteRapidity),
        }
    }
}

/// On-shell four-momentum in units of the particle mass: Q0 = sqrt(|q|^2 + 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    q0: f64,
    q: [f64; 3],
}

impl FourMomentum {
    /// Builds the on-shell four-momentum over a spatial momentum.
    pub fn from_spatial(q: [f64; 3]) -> Self {
        let q0 = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + 1.0).sqrt();
        FourMomentum { q0, q }
    }

    /// Checks the mass-shell relation to 1e-12 before accepting.
    pub fn new(q0: f64, q: [f64; 3]) -> Result<Self> {
        let expected = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + 1.0).sqrt();
        if (q0 - expected).abs() > 1e-12 * expected.max(1.0) {
            return Err(Error::OffShell { q0, expected });
        }
        Ok(FourMomentum { q0, q })
    }

    pub fn energy(&self) -> f64 {
        self.q0
    }

    pub fn spatial(&self) -> [f64; 3] {
        self.q
    }
}

/// The 4x4 x-boost: identity except the (t, x) block
/// [[cosh a, sinh a], [sinh a, cosh a]].
pub fn boost_matrix(alpha: &Rapidity) -> Result<[[f64; 4]; 4]> {
    let a = alpha.require_finite()?;
    let (ch, sh) = (a.cosh(), a.sinh());
    let mut m = [[0.0; 4]; 4];
    m[0][0] = ch;
    m[0][1] = sh;
    m[1][0] = sh;
    m[1][1] = ch;
    m[2][2] = 1.0;
    m[3][3] = 1.0;
    Ok(m)
}

pub fn apply_matrix4(m: &[[f64; 4]; 4], v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in m.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
    }
    out
}

/// Receiver-frame energy as a function of the sender-frame momentum.
fn receiver_energy(alpha: f64, q: &FourMomentum) -> f64 {
    q.q0 * alpha.cosh() - q.q[0] * alpha.sinh()
}

/// Wigner rotation of the spin under the x-boost, evaluated at the
/// sender-frame momentum q. Unitary for every on-shell q.
pub fn wigner_d(alpha: &Rapidity, q: &FourMomentum) -> Result<Mat2c> {
    let a = alpha.require_finite()?;
    let c = (0.5 * a).cosh();
    let s = (0.5 * a).sinh();
    let p0 = receiver_energy(a, q);
    let norm = 1.0 / ((p0 + 1.0) * (q.q0 + 1.0)).sqrt();
    let [qx, qy, qz] = q.q;
    // c (q0 + 1) I - s [qx I + i (e_x x q) . sigma], then normalized.
    let d = c * (q.q0 + 1.0) - s * qx;
    Ok(Mat2c([
        [
            Complex64::new(d, -s * qy) * norm,
            Complex64::new(s * qz, 0.0) * norm,
        ],
        [
            Complex64::new(-s * qz, 0.0) * norm,
            Complex64::new(d, s * qy) * norm,
        ],
    ]))
}

/// Boosted packet amplitudes (a, b) at the receiver-frame momentum p: the
/// up-spinor signal turns into the two-spinor (a, b) with
/// a = N f(q) [cosh(a/2)(q0 + 1) - sinh(a/2)(qx + i qy)],
/// b = -N f(q) sinh(a/2) qz,
/// N = sqrt(q0/p0) / sqrt((q0 + 1)(p0 + 1)), q the sender-frame momentum.
pub fn boosted_components(
    packet: &MomentumPacket,
    alpha: &Rapidity,
    p: [f64; 3],
) -> Result<(Complex64, Complex64)> {
    let a = alpha.require_finite()?;
    if a == 0.0 {
        return Ok((Complex64::new(packet.value(p), 0.0), Complex64::ZERO));
    }
    let p0 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + 1.0).sqrt();
    let (ch, sh) = (a.cosh(), a.sinh());
    let q0 = p0 * ch + p[0] * sh;
    let q = [p0 * sh + p[0] * ch, p[1], p[2]];
    let f = packet.value(q);
    let c = (0.5 * a).cosh();
    let s = (0.5 * a).sinh();
    let norm = (q0 / p0).sqrt() / ((q0 + 1.0) * (p0 + 1.0)).sqrt();
    let amp_a = Complex64::new(
        norm * f * (c * (q0 + 1.0) - s * q[0]),
        norm * f * (-s * q[1]),
    );
    let amp_b = Complex64::new(-norm * f * s * q[2], 0.0);
    Ok((amp_a, amp_b))
}

/// Composite Gauss-Legendre quadrature over R^3 through per-axis tangent maps
/// x_i = center_i + scale_i tan(u_i). The panel count doubles until the
/// vector-valued estimate is stable to the requested tolerance.
///
/// This is the brute-force companion to the 2D engine: it shares nothing with
/// it (different rule, different refinement) and exists to cross-check
/// closed forms and reduced matrices.
pub fn integrate_3d<const N: usize>(
    f: impl Fn([f64; 3]) -> [f64; N],
    center: [f64; 3],
    scale: [f64; 3],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<([f64; N], f64, u64)> {
    use std::f64::consts::FRAC_PI_2;

    let (nodes, weights) = gauss_legendre_20();
    let mut evaluations = 0u64;
    let mut previous: Option<[f64; N]> = None;

    let mut panels = 4usize;
    loop {
        let mut axis_nodes: [Vec<(f64, f64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for axis in 0..3 {
            let mut pts = Vec::with_capacity(panels * nodes.len());
            for p in 0..panels {
                let u0 = -FRAC_PI_2 + (p as f64) * std::f64::consts::PI / panels as f64;
                let u1 = u0 + std::f64::consts::PI / panels as f64;
                let c = 0.5 * (u0 + u1);
                let h = 0.5 * (u1 - u0);
                for (x, w) in nodes.iter().zip(weights.iter()) {
                    let u = c + h * x;
                    let cosu = u.cos();
                    let coord = center[axis] + scale[axis] * u.tan();
                    let jac = scale[axis] / (cosu * cosu);
                    pts.push((coord, w * h * jac));
                }
            }
            axis_nodes[axis] = pts;
        }

        let mut acc = [0.0; N];
        for &(x, wx) in &axis_nodes[0] {
            for &(y, wy) in &axis_nodes[1] {
                let wxy = wx * wy;
                for &(z, wz) in &axis_nodes[2] {
                    let v = f([x, y, z]);
                    evaluations += 1;
                    let w = wxy * wz;
                    for i in 0..N {
                        acc[i] += w * v[i];
                    }
                }
            }
        }

        if let Some(prev) = previous {
            let mut err = 0.0f64;
            let mut mag = 0.0f64;
            for i in 0..N {
                err = err.max((acc[i] - prev[i]).abs());
                mag = mag.max(acc[i].abs());
            }
            if err <= abs_tol.max(rel_tol * mag) {
                return Ok((acc, err, evaluations));
            }
            if panels >= 64 {
                return Err(Error::QuadratureDidNotConverge {
                    estimate: acc[0],
                    error_estimate: err,
                    evaluations,
                });
            }
        }
        previous = Some(acc);
        panels *= 2;
    }
}

/// Brute-force boosted reduced spin matrix: integrates D(q) psi(q) psi(q)^dag
/// D(q)^dag over the sender-frame momentum (the measure factors cancel
/// against the boost normalization). Hermitian with unit trace within `tol`.
pub fn boosted_density_oracle(
    state: &PureSpinorState,
    alpha: &Rapidity,
    tol: f64,
) -> Result<DensityMatrix2> {
    let a = alpha.require_finite()?;
    let packet = state.packet;
    let spinor = state.spinor();
    let c = (0.5 * a).cosh();
    let s = (0.5 * a).sinh();

    let integrand = |q: [f64; 3]| -> [f64; 4] {
        let f = packet.value(q);
        if f == 0.0 {
            return [0.0; 4];
        }
        let q0 = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + 1.0).sqrt();
        let p0 = q0 * a.cosh() - q[0] * a.sinh();
        let norm = 1.0 / ((p0 + 1.0) * (q0 + 1.0)).sqrt();
        let d = c * (q0 + 1.0) - s * q[0];
        let row0 = [
            Complex64::new(d, -s * q[1]) * norm,
            Complex64::new(s * q[2], 0.0) * norm,
        ];
        let row1 = [
            Complex64::new(-s * q[2], 0.0) * norm,
            Complex64::new(d, s * q[1]) * norm,
        ];
        let x0 = (row0[0] * spinor[0] + row0[1] * spinor[1]) * f;
        let x1 = (row1[0] * spinor[0] + row1[1] * spinor[1]) * f;
        let cross = x0 * x1.conj();
        [x0.norm_sqr(), x1.norm_sqr(), cross.re, cross.im]
    };

    let w = packet.w();
    let (vals, _err, _evals) = integrate_3d(
        integrand,
        [packet.k(), 0.0, 0.0],
        [w, w, w],
        tol * 0.1,
        tol * 1e-3,
    )?;

    let trace = vals[0] + vals[1];
    if (trace - 1.0).abs() > tol {
        return Err(Error::InvalidDensityMatrix(format!(
            "oracle trace {trace} deviates from 1 beyond tol {tol}"
        )));
    }
    if vals[3].abs() > tol {
        return Err(Error::InvalidDensityMatrix(format!(
            "oracle off-diagonal imaginary part {} beyond tol {tol}",
            vals[3]
        )));
    }
    // Renormalize the quadrature residue off the trace.
    let off = vals[2] / trace;
    Ok(DensityMatrix2::from_symmetric([
        [vals[0] / trace, off],
        [off, vals[1] / trace],
    ]))
}

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1], found by
/// Newton iteration on the Legendre polynomial.
fn gauss_legendre_20() -> (Vec<f64>, Vec<f64>) {
    let n = 20usize;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
