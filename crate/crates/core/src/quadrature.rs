//! Adaptive 2D quadrature over semi-infinite strips, plus the spin-flip
//! integrals that fill the boosted density matrices.
//!
//! The engine subdivides rectangular panels adaptively, estimating the error
//! on each panel from an embedded Gauss rule inside a 15-point Kronrod rule
//! (tensor product in 2D). Unbounded ranges are folded to finite ones with a
//! tangent substitution. Integrand closures must be side-effect-free; panels
//! are evaluated in an order chosen by the error heap.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::relativity::Rapidity;
use crate::states::MomentumPacket;

/// Tolerances and refinement cap for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct IntegrationSpec {
    /// Relative tolerance on the accumulated estimate.
    pub rel_tol: f64,
    /// Absolute floor below which the estimate is accepted regardless.
    pub abs_tol: f64,
    /// Cap on the number of panel subdivisions.
    pub max_subdivisions: usize,
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        IntegrationSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_subdivisions: 20_000,
        }
    }
}

impl IntegrationSpec {
    /// Looser tolerance used for figure sweeps, where 1e-6 is plenty.
    pub fn figure_sweep() -> Self {
        IntegrationSpec {
            rel_tol: 1e-6,
            ..Default::default()
        }
    }

    pub fn with_rel_tol(rel_tol: f64) -> Self {
        IntegrationSpec {
            rel_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidIntegrationSpec(format!(
                "rel_tol must be positive (got {})",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidIntegrationSpec(format!(
                "abs_tol must be positive (got {})",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidIntegrationSpec(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Value, error estimate, and evaluation count of one integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// One axis of the integration domain.
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    /// Finite interval [a, b].
    Interval(f64, f64),
    /// Half line [a, +inf).
    HalfLine(f64),
    /// The whole real line.
    RealLine,
}

// 15-point Kronrod nodes (nonnegative half) with the embedded 7-point Gauss
// rule sitting on the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const NODES: usize = 15;

/// Per-axis node offsets and weights on [-1, 1].
fn axis_rule() -> ([f64; NODES], [f64; NODES], [f64; NODES]) {
    let mut x = [0.0; NODES];
    let mut wk = [0.0; NODES];
    let mut wg = [0.0; NODES];
    for i in 0..7 {
        x[i] = -XGK[i];
        x[14 - i] = XGK[i];
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
    }
    x[7] = 0.0;
    wk[7] = WGK[7];
    // Gauss weights sit on nodes 1, 3, 5, 7, 9, 11, 13.
    for j in 0..3 {
        wg[2 * j + 1] = WG[j];
        wg[13 - 2 * j] = WG[j];
    }
    wg[7] = WG[3];
    (x, wk, wg)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_panel<F: Fn(f64, f64) -> f64>(
    f: &F,
    rule: &([f64; NODES], [f64; NODES], [f64; NODES]),
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
) -> Panel {
    let (xs, wk, wg) = rule;
    let cx = 0.5 * (x0 + x1);
    let hx = 0.5 * (x1 - x0);
    let cy = 0.5 * (y0 + y1);
    let hy = 0.5 * (y1 - y0);

    let mut kk = 0.0;
    let mut gg = 0.0;
    for i in 0..NODES {
        let xi = cx + hx * xs[i];
        let mut row_k = 0.0;
        let mut row_g = 0.0;
        for j in 0..NODES {
            let v = f(xi, cy + hy * xs[j]);
            row_k += wk[j] * v;
            if wg[j] != 0.0 {
                row_g += wg[j] * v;
            }
        }
        kk += wk[i] * row_k;
        if wg[i] != 0.0 {
            gg += wg[i] * row_g;
        }
    }
    let scale = hx * hy;
    let value = kk * scale;
    let error = ((kk - gg) * scale).abs().max(f64::EPSILON * value.abs());
    Panel {
        x0,
        x1,
        y0,
        y1,
        value,
        error,
    }
}

/// Adaptive 2D integral of `f` over `x_range` x `y_range`.
///
/// Unbounded axes are mapped through x = tan(u); callers with sharply
/// localized integrands should center and scale the substitution themselves
/// and pass finite intervals (the spin-flip integrals below do exactly that).
/// On failure to converge within the subdivision cap, the best estimate is
/// reported inside the error.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x_range: Domain,
    y_range: Domain,
    spec: &IntegrationSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    let (gx, ux0, ux1) = mapped_axis(x_range);
    let (gy, uy0, uy1) = mapped_axis(y_range);
    let g = |u: f64, v: f64| {
        let (x, jx) = gx(u);
        let (y, jy) = gy(v);
        let fv = f(x, y);
        if fv == 0.0 {
            0.0
        } else {
            fv * jx * jy
        }
    };

    let rule = axis_rule();
    let mut heap = BinaryHeap::new();
    let mut evaluations: u64 = 0;
    let mut total_value = 0.0;
    let mut total_error = 0.0;

    // Seed with a 4x4 grid so a symmetric integrand cannot fool a single
    // panel's error estimate.
    const SEED: usize = 4;
    for i in 0..SEED {
        for j in 0..SEED {
            let x0 = ux0 + (ux1 - ux0) * i as f64 / SEED as f64;
            let x1 = ux0 + (ux1 - ux0) * (i + 1) as f64 / SEED as f64;
            let y0 = uy0 + (uy1 - uy0) * j as f64 / SEED as f64;
            let y1 = uy0 + (uy1 - uy0) * (j + 1) as f64 / SEED as f64;
            let p = eval_panel(&g, &rule, x0, x1, y0, y1);
            evaluations += (NODES * NODES) as u64;
            total_value += p.value;
            total_error += p.error;
            heap.push(p);
        }
    }

    let mut splits = 0usize;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= tol {
            return Ok(QuadratureResult {
                value: total_value,
                error_estimate: total_error,
                evaluations,
            });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::QuadratureDidNotConverge {
                estimate: total_value,
                error_estimate: total_error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        total_value -= worst.value;
        total_error -= worst.error;
        let (a, b) = if worst.x1 - worst.x0 >= worst.y1 - worst.y0 {
            let xm = 0.5 * (worst.x0 + worst.x1);
            (
                eval_panel(&g, &rule, worst.x0, xm, worst.y0, worst.y1),
                eval_panel(&g, &rule, xm, worst.x1, worst.y0, worst.y1),
            )
        } else {
            let ym = 0.5 * (worst.y0 + worst.y1);
            (
                eval_panel(&g, &rule, worst.x0, worst.x1, worst.y0, ym),
                eval_panel(&g, &rule, worst.x0, worst.x1, ym, worst.y1),
            )
        };
        evaluations += 2 * (NODES * NODES) as u64;
        total_value += a.value + b.value;
        total_error += a.error + b.error;
        heap.push(a);
        heap.push(b);
        splits += 1;
    }
}

type AxisMap = Box<dyn Fn(f64) -> (f64, f64)>;

/// Returns (map u -> (x, dx/du), u_lo, u_hi) for the requested axis.
fn mapped_axis(range: Domain) -> (AxisMap, f64, f64) {
    use std::f64::consts::FRAC_PI_2;
    match range {
        Domain::Interval(a, b) => (Box::new(|u| (u, 1.0)), a, b),
        Domain::HalfLine(a) => (
            Box::new(move |u: f64| {
                let c = u.cos();
                (a + u.tan(), 1.0 / (c * c))
            }),
            0.0,
            FRAC_PI_2,
        ),
        Domain::RealLine => (
            Box::new(|u: f64| {
                let c = u.cos();
                (u.tan(), 1.0 / (c * c))
            }),
            -FRAC_PI_2,
            FRAC_PI_2,
        ),
    }
}

/// sinh^2(alpha/2) / (Q0 cosh(alpha) - Qx sinh(alpha) + 1), evaluated in a
/// form that never overflows and passes continuously into the infinite-
/// rapidity limit 1 / (2 (Q0 - Qx)).
fn boost_ratio(alpha: &Rapidity, q_plus: f64, q_minus: f64) -> f64 {
    match *alpha {
        Rapidity::Infinite => 1.0 / (2.0 * q_minus),
        Rapidity::Finite(a) => {
            if a >= 0.0 {
                let e = (-a).exp();
                let e2 = e * e;
                (1.0 - 2.0 * e + e2) / (2.0 * q_minus + 2.0 * e2 * q_plus + 4.0 * e)
            } else {
                let e = a.exp();
                let e2 = e * e;
                (1.0 - 2.0 * e + e2) / (2.0 * q_plus + 2.0 * e2 * q_minus + 4.0 * e)
            }
        }
    }
}

/// Shared evaluator behind `integral_v` and `integral_u`: the weight that a
/// boost moves out of a packet's original spin component.
///
/// The integrand is Qr^3 exp(-[(Qx-K)^2 + Qr^2]/W^2) / [(Q0+1)(P0+1)] with
/// Q0 = sqrt(Qx^2 + Qr^2 + 1) and P0 = Q0 cosh(alpha) - Qx sinh(alpha), the
/// sinh^2(alpha/2) prefactor folded pointwise into the P0 factor so that the
/// infinite-rapidity sentinel is the exact limit of the finite form. The
/// unbounded axes are folded with tangent maps centered on the packet, which
/// keeps the Gaussian bump resolved even for K = 50, W = 6. The result is
/// clamped to [0, 1); clamping beyond 1e-10 of noise is an error.
fn spin_flip_weight(
    packet: &MomentumPacket,
    alpha: &Rapidity,
    spec: &IntegrationSpec,
) -> Result<QuadratureResult> {
    if let Rapidity::Finite(a) = alpha {
        if *a == 0.0 {
            return Ok(QuadratureResult {
                value: 0.0,
                error_estimate: 0.0,
                evaluations: 0,
            });
        }
    }
    let k = packet.k();
    let w = packet.w();
    let prefactor = 1.0 / (std::f64::consts::PI.sqrt() * w * w * w);

    let g = |u: f64, v: f64| {
        let (tu, tv) = (u.tan(), v.tan());
        let qx = k + w * tu;
        let qr = w * tv;
        let expo = -(tu * tu + tv * tv);
        if expo < -700.0 {
            return 0.0;
        }
        let q0 = (qx * qx + qr * qr + 1.0).sqrt();
        // Cancellation-free q0 -+ qx.
        let (q_plus, q_minus) = if qx >= 0.0 {
            let p = q0 + qx;
            (p, (qr * qr + 1.0) / p)
        } else {
            let m = q0 - qx;
            ((qr * qr + 1.0) / m, m)
        };
        let ratio = boost_ratio(alpha, q_plus, q_minus);
        let (cu, cv) = (u.cos(), v.cos());
        let jac = w * w / (cu * cu * cv * cv);
        qr * qr * qr * expo.exp() / (q0 + 1.0) * ratio * jac
    };

    use std::f64::consts::FRAC_PI_2;
    let raw = integrate_2d(
        g,
        Domain::Interval(-FRAC_PI_2, FRAC_PI_2),
        Domain::Interval(0.0, FRAC_PI_2),
        spec,
    )?;
    let value = prefactor * raw.value;
    let error_estimate = prefactor * raw.error_estimate;
    if !value.is_finite() {
        return Err(Error::WeightOutOfRange {
            name: "spin-flip weight",
            value,
        });
    }
    let clamped = if value < 0.0 {
        if value < -1e-10 {
            return Err(Error::WeightOutOfRange {
                name: "spin-flip weight",
                value,
            });
        }
        0.0
    } else if value >= 1.0 {
        if value > 1.0 + 1e-10 {
            return Err(Error::WeightOutOfRange {
                name: "spin-flip weight",
                value,
            });
        }
        1.0 - f64::EPSILON
    } else {
        value
    };
    Ok(QuadratureResult {
        value: clamped,
        error_estimate,
        evaluations: raw.evaluations,
    })
}

/// Spin-flip weight of the first signal packet (the V integral).
pub fn integral_v(
    packet: &MomentumPacket,
    alpha: &Rapidity,
    spec: &IntegrationSpec,
) -> Result<QuadratureResult> {
    spin_flip_weight(packet, alpha, spec)
}

/// Spin-flip weight of the second signal packet (the U integral). Same
/// evaluator as `integral_v`, distinguished only by the packet passed in.
pub fn integral_u(
    packet: &MomentumPacket,
    alpha: &Rapidity,
    spec: &IntegrationSpec,
) -> Result<QuadratureResult> {
    spin_flip_weight(packet, alpha, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn default_spec() -> IntegrationSpec {
        IntegrationSpec::default()
    }

    #[test]
    fn gaussian_over_half_plane() {
        let r = integrate_2d(
            |x, y| (-x * x - y * y).exp(),
            Domain::RealLine,
            Domain::HalfLine(0.0),
            &default_spec(),
        )
        .unwrap();
        assert!(
            (r.value - PI / 2.0).abs() < 1e-8,
            "got {} expected {}",
            r.value,
            PI / 2.0
        );
        assert!(r.error_estimate <= 1e-8 * (PI / 2.0) + 1e-14);
    }

    #[test]
    fn cubic_weighted_gaussian() {
        // int_R e^{-x^2} dx * int_0^inf y^3 e^{-y^2} dy = sqrt(pi) * 1/2.
        let r = integrate_2d(
            |x, y| y * y * y * (-x * x - y * y).exp(),
            Domain::RealLine,
            Domain::HalfLine(0.0),
            &default_spec(),
        )
        .unwrap();
        let expect = PI.sqrt() / 2.0;
        assert!((r.value - expect).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_2d(
            |_, _| 0.0,
            Domain::RealLine,
            Domain::HalfLine(0.0),
            &default_spec(),
        )
        .unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn finite_rectangle() {
        let r = integrate_2d(
            |x, y| x * y,
            Domain::Interval(0.0, 2.0),
            Domain::Interval(0.0, 3.0),
            &default_spec(),
        )
        .unwrap();
        assert!((r.value - 9.0).abs() < 1e-10);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let spec = IntegrationSpec {
            rel_tol: 1e-13,
            abs_tol: 1e-300,
            max_subdivisions: 4,
        };
        let err = integrate_2d(
            |x, y| 1.0 / ((x * x + y * y).sqrt() + 1e-9),
            Domain::Interval(0.0, 1.0),
            Domain::Interval(0.0, 1.0),
            &spec,
        )
        .unwrap_err();
        match err {
            Error::QuadratureDidNotConverge {
                estimate,
                error_estimate,
                evaluations,
            } => {
                assert!(estimate.is_finite() && estimate > 0.0);
                assert!(error_estimate > 0.0);
                assert!(evaluations > 0);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = IntegrationSpec {
            rel_tol: -1.0,
            ..Default::default()
        };
        assert!(integrate_2d(|_, _| 0.0, Domain::RealLine, Domain::HalfLine(0.0), &spec).is_err());
    }

    #[test]
    fn flip_weight_zero_rapidity_is_exactly_zero() {
        let p = MomentumPacket::new(1.0, 0.05).unwrap();
        let r = integral_v(&p, &Rapidity::Finite(0.0), &default_spec()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.evaluations, 0);
    }

    #[test]
    fn u_shares_the_v_evaluator_bitwise() {
        let p = MomentumPacket::new(1.0, 6.0).unwrap();
        let a = Rapidity::Finite(1.5);
        let v = integral_v(&p, &a, &default_spec()).unwrap();
        let u = integral_u(&p, &a, &default_spec()).unwrap();
        assert_eq!(v.value.to_bits(), u.value.to_bits());
        assert_eq!(v.evaluations, u.evaluations);
    }

    #[test]
    fn asymptotic_branch_matches_large_rapidity() {
        let spec = default_spec();
        for (w, k) in [
            (6.0, 1.0),
            (0.05, 1.0),
            (6.0, 50.0),
            (10.0, 100.0),
            (1.0, 0.0),
        ] {
            let p = MomentumPacket::new(k, w).unwrap();
            let far = integral_v(&p, &Rapidity::Finite(20.0), &spec)
                .unwrap()
                .value;
            let inf = integral_v(&p, &Rapidity::Infinite, &spec).unwrap().value;
            assert!(
                (far - inf).abs() < 1e-6,
                "W={w} K={k}: alpha=20 gives {far}, sentinel gives {inf}"
            );
        }
    }

    #[test]
    fn wide_packet_sentinel_value_in_range() {
        let p = MomentumPacket::new(1.0, 6.0).unwrap();
        let v = integral_v(&p, &Rapidity::Infinite, &default_spec())
            .unwrap()
            .value;
        assert!(v > 0.0 && v <= 0.5, "got {v}");
    }

    #[test]
    fn narrow_packet_weight_stays_small() {
        let p = MomentumPacket::new(1.0, 0.05).unwrap();
        let v = integral_v(&p, &Rapidity::Finite(2.0), &default_spec())
            .unwrap()
            .value;
        assert!(v < 0.05, "got {v}");
        assert!(v > 0.0);
    }

    #[test]
    fn degenerate_width_is_rejected_not_propagated() {
        // 1e-300 underflows the normalization; the weight must come back as
        // an error instead of a NaN.
        let p = MomentumPacket::new(1.0, 1e-300).unwrap();
        let err = integral_v(&p, &Rapidity::Finite(1.0), &default_spec()).unwrap_err();
        assert!(matches!(err, Error::WeightOutOfRange { .. }));
    }

    #[test]
    fn positive_for_any_nonzero_rapidity() {
        let p = MomentumPacket::new(0.0, 1.0).unwrap();
        for a in [1e-3, 0.5, -0.5, 5.0, -5.0] {
            let v = integral_v(&p, &Rapidity::Finite(a), &default_spec())
                .unwrap()
                .value;
            assert!(v > 0.0 && v < 1.0, "alpha={a} gave {v}");
        }
    }

    #[test]
    fn polynomial_panels_are_exact() {
        // The 15-point Kronrod rule integrates low-degree polynomials exactly.
        let r = integrate_2d(
            |x, y| x * x * x * x * y.powi(6),
            Domain::Interval(0.0, 1.0),
            Domain::Interval(0.0, 2.0),
            &default_spec(),
        )
        .unwrap();
        assert!((r.value - 128.0 / 35.0).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn narrow_packet_matches_point_evaluation() {
        // For W -> 0 the flip weight collapses onto the packet center:
        // sinh^2(a/2) <qz^2> / ((q0+1)(p0+1)) with <qz^2> = W^2/2.
        let (w, k, a) = (0.01, 1.0, 1.0);
        let p = MomentumPacket::new(k, w).unwrap();
        let v = integral_v(&p, &Rapidity::Finite(a), &default_spec())
            .unwrap()
            .value;
        let q0 = (k * k + 1.0f64).sqrt();
        let p0 = q0 * a.cosh() - k * a.sinh();
        let approx = (0.5 * a).sinh().powi(2) * (w * w / 2.0) / ((q0 + 1.0) * (p0 + 1.0));
        assert!(
            (v - approx).abs() < 0.01 * approx,
            "quadrature {v} vs point form {approx}"
        );
    }

    #[test]
    fn mirrored_rapidity_equals_mirrored_momentum() {
        // The integrand maps (alpha -> -alpha) onto (K -> -K) by Qx reflection.
        let spec = default_spec();
        let p = MomentumPacket::new(1.0, 0.7).unwrap();
        let m = MomentumPacket::new(-1.0, 0.7).unwrap();
        let a = 1.3;
        let lhs = integral_v(&p, &Rapidity::Finite(-a), &spec).unwrap().value;
        let rhs = integral_v(&m, &Rapidity::Finite(a), &spec).unwrap().value;
        assert!((lhs - rhs).abs() < 5e-9 * lhs.max(1e-3), "{lhs} vs {rhs}");
    }

    #[test]
    fn rapidity_sign_matters_for_offset_packets() {
        let spec = default_spec();
        let p = MomentumPacket::new(1.0, 0.7).unwrap();
        let plus = integral_v(&p, &Rapidity::Finite(1.3), &spec).unwrap().value;
        let minus = integral_v(&p, &Rapidity::Finite(-1.3), &spec)
            .unwrap()
            .value;
        assert!((plus - minus).abs() > 1e-4, "{plus} vs {minus}");
    }

    #[test]
    fn monte_carlo_cross_check() {
        // Draw q from |f|^2 (a normal with per-axis variance W^2/2) and average
        // the flip kernel; agreement within 3 sigma certifies the quadrature.
        use rand::rngs::StdRng;
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};

        let (w, k, alpha) = (6.0, 50.0, 5.0);
        let p = MomentumPacket::new(k, w).unwrap();
        let v = integral_v(&p, &Rapidity::Finite(alpha), &IntegrationSpec::default())
            .unwrap()
            .value;

        let mut rng = StdRng::seed_from_u64(0x5eed);
        let sigma = w / std::f64::consts::SQRT_2;
        let n = 10_000_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let rap = Rapidity::Finite(alpha);
        for _ in 0..n {
            let gx: f64 = StandardNormal.sample(&mut rng);
            let gy: f64 = StandardNormal.sample(&mut rng);
            let gz: f64 = StandardNormal.sample(&mut rng);
            let qx = k + sigma * gx;
            let qy = sigma * gy;
            let qz = sigma * gz;
            let q0 = (qx * qx + qy * qy + qz * qz + 1.0).sqrt();
            let (q_plus, q_minus) = if qx >= 0.0 {
                let s = q0 + qx;
                (s, (qy * qy + qz * qz + 1.0) / s)
            } else {
                let m = q0 - qx;
                ((qy * qy + qz * qz + 1.0) / m, m)
            };
            let val = qz * qz / (q0 + 1.0) * boost_ratio(&rap, q_plus, q_minus);
            sum += val;
            sum_sq += val * val;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean) / n as f64;
        let sigma_mc = var.sqrt();
        assert!(
            (v - mean).abs() < 3.0 * sigma_mc,
            "quadrature {v} vs MC {mean} +/- {sigma_mc}"
        );
    }
}
