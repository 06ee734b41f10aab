//! The effective spin channel maps on their convex domains, the witnesses
//! that certify when they cannot be completely positive, the symmetric-case
//! Kraus decomposition, and the discord commutator witness.
//!
//! The maps are realized through their action on the extreme points
//! (tau_i -> tau_i'), extended convex-linearly; that determines them on the
//! whole domain, and the integral definitions are covered by the brute-force
//! oracle checks in `relativity`.

use crate::error::{Error, Result};
use crate::linalg::Mat2c;
use crate::spin_channel::{
    holevo_rest2, holevo_rest4, BoostedChannel, ChannelParams, DensityMatrix2, DensityMatrix4,
};
use crate::states::validate_probability_vector;

fn require_open_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::ThetaOutsideDomain(theta));
    }
    Ok(())
}

/// The two-symbol channel map on the convex set
/// {lambda tau0 + (1 - lambda) tau1}: the input identified by lambda goes to
/// lambda tau0' + (1 - lambda) tau1'. Defined for 0 < theta < pi, where the
/// decomposition of a domain point is unique.
pub fn channel_e(params: &ChannelParams, lambda: f64) -> Result<DensityMatrix2> {
    require_open_theta(params.theta)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidProbability(lambda));
    }
    let channel = BoostedChannel::for_params(params)?;
    Ok(mix2(
        lambda,
        &channel.tau0_prime(),
        &channel.tau1_prime(params.theta),
    ))
}

fn mix2(lambda: f64, a: &DensityMatrix2, b: &DensityMatrix2) -> DensityMatrix2 {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = lambda * a.entry(i, j) + (1.0 - lambda) * b.entry(i, j);
        }
    }
    DensityMatrix2::from_symmetric(m)
}

/// The four-symbol channel map on the convex hull of the four product
/// signals: each tau_i x tau_j goes to tau_i' x tau_j'.
pub fn channel_n(params: &ChannelParams, lambdas: [f64; 4]) -> Result<DensityMatrix4> {
    require_open_theta(params.theta)?;
    validate_probability_vector(&lambdas)?;
    let channel = BoostedChannel::for_params(params)?;
    Ok(crate::states::mix_products(
        lambdas,
        &channel.tau0_prime(),
        &channel.tau1_prime(params.theta),
    ))
}

/// chi after the map minus chi before it, for the two-symbol source. A value
/// above zero certifies that the map is not completely positive, because CP
/// maps can never increase the Holevo bound.
pub fn delta2(params: &ChannelParams, lambda: f64) -> Result<f64> {
    require_open_theta(params.theta)?;
    let channel = BoostedChannel::for_params(params)?;
    delta2_at(&channel, lambda, params.theta)
}

/// `delta2` against an already-evaluated channel; angle sweeps reuse the two
/// quadratures this way.
pub fn delta2_at(channel: &BoostedChannel, lambda: f64, theta: f64) -> Result<f64> {
    require_open_theta(theta)?;
    let after = channel.holevo2(lambda, theta)?;
    let before = holevo_rest2(lambda, theta)?;
    Ok(after.chi - before.chi)
}

/// Four-symbol analogue of `delta2`.
pub fn delta4(params: &ChannelParams, lambdas: [f64; 4]) -> Result<f64> {
    require_open_theta(params.theta)?;
    let channel = BoostedChannel::for_params(params)?;
    delta4_at(&channel, lambdas, params.theta)
}

/// Four-symbol analogue of `delta2_at`.
pub fn delta4_at(channel: &BoostedChannel, lambdas: [f64; 4], theta: f64) -> Result<f64> {
    require_open_theta(theta)?;
    let after = channel.holevo4(lambdas, theta)?;
    let before = holevo_rest4(lambdas, theta)?;
    Ok(after.chi - before.chi)
}

/// Kraus operators of the symmetric-case channel (equal packets, orthogonal
/// spins): sqrt(1 - V) I, sqrt(V/2) sigma_x, sqrt(V/2) sigma_y.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: [Mat2c; 3],
}

impl KrausSet {
    pub fn operators(&self) -> &[Mat2c; 3] {
        &self.operators
    }

    /// Largest entrywise deviation of sum Gamma^dag Gamma from the identity.
    pub fn completeness_defect(&self) -> f64 {
        let mut acc = Mat2c::zero();
        for g in &self.operators {
            acc = acc.add(&g.adjoint().mul(g));
        }
        acc.max_abs_diff(&Mat2c::identity())
    }
}

/// Builds the symmetric-case Kraus set for a given spin-flip weight V.
pub fn kraus_set(v: f64) -> Result<KrausSet> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::WeightOutOfRange {
            name: "V",
            value: v,
        });
    }
    Ok(KrausSet {
        operators: [
            Mat2c::identity().scale((1.0 - v).sqrt()),
            Mat2c::pauli_x().scale((v / 2.0).sqrt()),
            Mat2c::pauli_y().scale((v / 2.0).sqrt()),
        ],
    })
}

/// Applies sum_mu Gamma_mu rho Gamma_mu (the operators are Hermitian).
/// Trace preserving; the output of these particular operators on a real
/// symmetric input is again real symmetric.
pub fn apply_kraus(set: &KrausSet, rho: &DensityMatrix2) -> DensityMatrix2 {
    let rho_c = Mat2c::from_real(*rho.as_array());
    let mut acc = Mat2c::zero();
    for g in &set.operators {
        acc = acc.add(&g.mul(&rho_c).mul(&g.adjoint()));
    }
    debug_assert!(acc.max_imag() < 1e-14);
    let r = acc.real_part();
    let off = 0.5 * (r[0][1] + r[1][0]);
    DensityMatrix2::from_symmetric([[r[0][0], off], [off, r[1][1]]])
}

/// Hilbert-Schmidt norm of the commutator between the reduced spin state and
/// the full spin-momentum state, in closed form:
/// lambda (1 - lambda) |cos theta| * ||phi_up phi_th^dag - phi_th phi_up^dag|| * ||rho1 - rho0||,
/// with the spinor factor sqrt(2) |sin theta| and the momentum factor
/// sqrt(2 - 2 overlap^2) from the analytic packet overlap. Nonzero exactly
/// when the source actually mixes two distinct packets with spins that are
/// neither parallel nor orthogonal — which is the regime where the reduced
/// dynamics can fail to be completely positive.
pub fn discord_witness(params: &ChannelParams, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidProbability(lambda));
    }
    let theta = params.theta;
    let spinor_norm = std::f64::consts::SQRT_2 * theta.sin().abs();
    let overlap = params.packet0.overlap(&params.packet1);
    let packet_norm = (2.0 - 2.0 * overlap * overlap).max(0.0).sqrt();
    Ok(lambda * (1.0 - lambda) * theta.cos().abs() * spinor_norm * packet_norm)
}

/// Bisects the angle at which `delta2` changes sign inside `bracket`,
/// to 1e-4 rad. The channel weights are evaluated once for the whole search.
pub fn delta2_crossing(params: &ChannelParams, lambda: f64, bracket: (f64, f64)) -> Result<f64> {
    let channel = BoostedChannel::for_params(params)?;
    bisect_crossing(bracket, |theta| delta2_at(&channel, lambda, theta))
}

/// Four-symbol analogue of `delta2_crossing`.
pub fn delta4_crossing(
    params: &ChannelParams,
    lambdas: [f64; 4],
    bracket: (f64, f64),
) -> Result<f64> {
    let channel = BoostedChannel::for_params(params)?;
    bisect_crossing(bracket, |theta| delta4_at(&channel, lambdas, theta))
}

const CROSSING_TOL_RAD: f64 = 1e-4;

fn bisect_crossing(bracket: (f64, f64), f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    require_open_theta(lo)?;
    require_open_theta(hi)?;
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > CROSSING_TOL_RAD {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::IntegrationSpec;
    use crate::relativity::Rapidity;
    use crate::spin_channel::kron;
    use crate::states::MomentumPacket;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(alpha: Rapidity, theta: f64) -> ChannelParams {
        ChannelParams::new(
            alpha,
            MomentumPacket::new(1.0, 0.05).unwrap(),
            MomentumPacket::new(50.0, 6.0).unwrap(),
            theta,
            IntegrationSpec::default(),
        )
        .unwrap()
    }

    fn symmetric_params(alpha: Rapidity) -> ChannelParams {
        ChannelParams::new(
            alpha,
            MomentumPacket::new(0.0, 1.0).unwrap(),
            MomentumPacket::new(0.0, 1.0).unwrap(),
            FRAC_PI_2,
            IntegrationSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn map_endpoint_is_tau0_prime() {
        let p = params(Rapidity::Finite(1.0), PI / 8.0);
        let channel = BoostedChannel::for_params(&p).unwrap();
        let out = channel_e(&p, 1.0).unwrap();
        assert_eq!(out.max_abs_diff(&channel.tau0_prime()), 0.0);
    }

    #[test]
    fn map_is_identity_at_rest() {
        let p = params(Rapidity::Finite(0.0), PI / 8.0);
        for lambda in [0.0, 0.25, 0.5, 1.0] {
            let out = channel_e(&p, lambda).unwrap();
            let rest = crate::states::rest_tau_parts(lambda, p.theta);
            assert!(out.max_abs_diff(&rest) < 1e-15);
        }
        let out4 = channel_n(&p, [0.25; 4]).unwrap();
        let (t0, t1) = crate::states::rest_signal_matrices(p.theta);
        let rest4 = crate::states::mix_products([0.25; 4], &t0, &t1);
        assert!(out4.max_abs_diff(&rest4) < 1e-15);
    }

    #[test]
    fn map_rejects_degenerate_angles() {
        let p = params(Rapidity::Finite(1.0), 0.0);
        assert!(matches!(
            channel_e(&p, 0.5),
            Err(Error::ThetaOutsideDomain(_))
        ));
        let p = params(Rapidity::Finite(1.0), PI);
        assert!(channel_n(&p, [0.25; 4]).is_err());
    }

    #[test]
    fn four_symbol_map_endpoint() {
        let p = params(Rapidity::Finite(1.2), PI / 8.0);
        let channel = BoostedChannel::for_params(&p).unwrap();
        let out = channel_n(&p, [1.0, 0.0, 0.0, 0.0]).unwrap();
        let t0 = channel.tau0_prime();
        assert!(out.max_abs_diff(&kron(&t0, &t0)) < 1e-15);
    }

    #[test]
    fn four_symbol_uniform_is_tensor_square_of_pair_map() {
        let p = params(Rapidity::Finite(1.2), PI / 8.0);
        let out = channel_n(&p, [0.25; 4]).unwrap();
        let e_half = channel_e(&p, 0.5).unwrap();
        assert!(out.max_abs_diff(&kron(&e_half, &e_half)) < 1e-14);
    }

    #[test]
    fn delta_vanishes_at_rest() {
        let p = params(Rapidity::Finite(0.0), PI / 8.0);
        assert!(delta2(&p, 0.5).unwrap().abs() < 1e-12);
        assert!(delta4(&p, [0.25; 4]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn delta4_degenerate_source_is_zero() {
        let p = params(Rapidity::Finite(1.5), PI / 8.0);
        let d = delta4(&p, [1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(d.abs() < 1e-12, "got {d}");
    }

    #[test]
    fn delta2_orthogonal_spins_lose_information() {
        let p = params(Rapidity::Infinite, FRAC_PI_2 - 1e-9);
        let d = delta2(&p, 0.5).unwrap();
        assert!(d < 0.0, "got {d}");
    }

    #[test]
    fn kraus_zero_weight_is_identity_map() {
        let set = kraus_set(0.0).unwrap();
        let rho = DensityMatrix2::new([[0.6, 0.2], [0.2, 0.4]]).unwrap();
        let out = apply_kraus(&set, &rho);
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn kraus_completeness_any_weight() {
        for v in [0.0, 0.1, 0.25, 0.49, 0.73] {
            let set = kraus_set(v).unwrap();
            assert!(set.completeness_defect() < 1e-12, "V={v}");
        }
        assert!(kraus_set(1.0).is_err());
    }

    #[test]
    fn kraus_on_up_projector() {
        let set = kraus_set(0.2).unwrap();
        let rho = DensityMatrix2::new([[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let out = apply_kraus(&set, &rho);
        assert!((out.entry(0, 0) - 0.8).abs() < 1e-15);
        assert!((out.entry(1, 1) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn kraus_fixes_maximally_mixed() {
        for v in [0.1, 0.4, 0.8] {
            let set = kraus_set(v).unwrap();
            let rho = DensityMatrix2::new([[0.5, 0.0], [0.0, 0.5]]).unwrap();
            let out = apply_kraus(&set, &rho);
            assert!(out.max_abs_diff(&rho) < 1e-15, "V={v}");
        }
    }

    #[test]
    fn kraus_matches_channel_in_symmetric_case() {
        let p = symmetric_params(Rapidity::Finite(1.0));
        let channel = BoostedChannel::for_params(&p).unwrap();
        let set = kraus_set(channel.v()).unwrap();
        for lambda in [0.0, 0.3, 0.7, 1.0] {
            let input = crate::states::rest_tau_parts(lambda, p.theta);
            let through_kraus = apply_kraus(&set, &input);
            let through_map = channel_e(&p, lambda).unwrap();
            assert!(
                through_kraus.max_abs_diff(&through_map) < 1e-8,
                "lambda={lambda}"
            );
        }
    }

    #[test]
    fn discord_zero_cases() {
        // Identical packets.
        let p = ChannelParams::new(
            Rapidity::Finite(1.0),
            MomentumPacket::new(1.0, 0.5).unwrap(),
            MomentumPacket::new(1.0, 0.5).unwrap(),
            0.7,
            IntegrationSpec::default(),
        )
        .unwrap();
        assert_eq!(discord_witness(&p, 0.5).unwrap(), 0.0);

        // Orthogonal spins: cos(pi/2) in f64 is ~6e-17, not exactly zero.
        let p = params(Rapidity::Finite(1.0), FRAC_PI_2);
        assert!(discord_witness(&p, 0.5).unwrap() < 1e-15);

        // Parallel spins.
        let p = params(Rapidity::Finite(1.0), 0.0);
        assert_eq!(discord_witness(&p, 0.5).unwrap(), 0.0);

        // Deterministic source.
        let p = params(Rapidity::Finite(1.0), 0.7);
        assert_eq!(discord_witness(&p, 1.0).unwrap(), 0.0);
        assert_eq!(discord_witness(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn discord_matches_numeric_commutator_factors() {
        // Oracle: build the spinor commutator factor numerically and take its
        // Hilbert-Schmidt norm entry by entry.
        for theta in [0.3, PI / 4.0, 1.2, 2.5] {
            let (c, s) = (theta.cos(), theta.sin());
            // phi_up phi_th^dag - phi_th phi_up^dag
            let m = [[0.0, s], [-s, 0.0]];
            let hs: f64 = m.iter().flatten().map(|x: &f64| x * x).sum::<f64>().sqrt();
            let p = params(Rapidity::Finite(1.0), theta);
            let ov = p.packet0.overlap(&p.packet1);
            let expect = 0.25 * c.abs() * hs * (2.0 - 2.0 * ov * ov).sqrt();
            let got = discord_witness(&p, 0.5).unwrap();
            assert!((got - expect).abs() < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn discord_near_orthogonal_packets_peak_value() {
        // With the packets essentially orthogonal the witness reduces to
        // 2 lambda (1-lambda) |sin cos|; at lambda = 1/2, theta = pi/4 that
        // is 1/4.
        let p = params(Rapidity::Finite(1.0), PI / 4.0);
        let got = discord_witness(&p, 0.5).unwrap();
        assert!((got - 0.25).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn crossing_requires_sign_change() {
        let p = params(Rapidity::Finite(0.5), PI / 8.0);
        // At small rapidity delta2 is negative across the whole bracket.
        let err = delta2_crossing(&p, 0.5, (0.2, 0.9)).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

        #[test]
        fn map_is_convex_linear_and_trace_preserving(
            la in 0.0..=1.0f64,
            lb in 0.0..=1.0f64,
            t in 0.0..=1.0f64,
        ) {
            let p = params(Rapidity::Finite(1.0), PI / 8.0);
            let mixed_lambda = t * la + (1.0 - t) * lb;
            let lhs = channel_e(&p, mixed_lambda).unwrap();
            let ea = channel_e(&p, la).unwrap();
            let eb = channel_e(&p, lb).unwrap();
            let rhs = mix2(t, &ea, &eb);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
            prop_assert!((lhs.trace() - 1.0).abs() < 1e-10);
            let eigs = lhs.eigenvalues();
            prop_assert!(eigs[1] >= -1e-9);
        }
    }
}
