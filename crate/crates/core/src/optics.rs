//! Polarization states, the three-branch measurement apparatus, and
//! threshold-detector statistics for coherent light.
//!
//! A state is a two-mode coherent state `|h, v>` with real amplitudes. The
//! apparatus splits the incoming light into three branches with intensity
//! fractions `branch_weights`. Branch `k` rotates the polarization by
//! `-(phi + k*theta)` and separates it on a polarizing beam splitter, so the
//! protocol state `k` leaves no light at all in branch `k`'s vertical port.
//! Each of the six ports ends in a threshold detector.
//!
//! Splitting a coherent state on linear optics yields a product of coherent
//! states, so the six detectors click independently, each with probability
//! `1 - exp(-(mu + dark_rate))`.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of protocol states (and apparatus branches).
pub const STATE_COUNT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApparatusParams {
    /// Angle of state 0, radians.
    pub phi: f64,
    /// Angular spacing between consecutive states, radians.
    pub theta: f64,
    /// Mean photon number of a protocol state (alpha squared).
    pub mean_photon: f64,
    /// Fraction of the input intensity routed into each branch.
    pub branch_weights: [f64; 3],
    /// Detector quantum efficiency.
    pub efficiency: f64,
    /// Mean dark counts per detector per shot.
    pub dark_rate: f64,
}

impl Default for ApparatusParams {
    fn default() -> Self {
        Self {
            phi: PI / 6.7,
            theta: PI / 10.0,
            mean_photon: 20.0,
            branch_weights: [1.0 / 3.0; 3],
            efficiency: 1.0,
            dark_rate: 0.0,
        }
    }
}

impl ApparatusParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Params(msg));
        if !self.phi.is_finite() || !self.theta.is_finite() {
            return bad(format!("angles must be finite (phi = {}, theta = {})", self.phi, self.theta));
        }
        if !(self.mean_photon.is_finite() && self.mean_photon >= 0.0) {
            return bad(format!("mean_photon must be finite and >= 0, got {}", self.mean_photon));
        }
        if self.branch_weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return bad(format!("branch weights must be >= 0, got {:?}", self.branch_weights));
        }
        let total: f64 = self.branch_weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return bad(format!("branch weights must sum to 1, got {total}"));
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            return bad(format!("efficiency must lie in [0, 1], got {}", self.efficiency));
        }
        if !(self.dark_rate.is_finite() && self.dark_rate >= 0.0) {
            return bad(format!("dark_rate must be finite and >= 0, got {}", self.dark_rate));
        }
        Ok(())
    }

    /// Field amplitude alpha = sqrt(mean_photon).
    pub fn alpha(&self) -> f64 {
        self.mean_photon.sqrt()
    }

    /// Polarization angle of protocol state `k`, which is also the angle
    /// branch `k` rotates back to horizontal.
    pub fn state_angle(&self, k: usize) -> f64 {
        self.phi + k as f64 * self.theta
    }
}

/// Real amplitudes of the horizontal and vertical modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizedState {
    pub h_amp: f64,
    pub v_amp: f64,
}

impl PolarizedState {
    pub const VACUUM: Self = Self { h_amp: 0.0, v_amp: 0.0 };

    pub fn new(h_amp: f64, v_amp: f64) -> Self {
        Self { h_amp, v_amp }
    }

    /// `(alpha cos(angle), alpha sin(angle))`.
    pub fn at_angle(alpha: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { h_amp: alpha * c, v_amp: alpha * s }
    }

    pub fn mean_photon(&self) -> f64 {
        self.h_amp * self.h_amp + self.v_amp * self.v_amp
    }
}

/// Mean photon numbers arriving at the six detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchIntensities {
    pub mu_h: [f64; 3],
    pub mu_v: [f64; 3],
}

impl BranchIntensities {
    pub fn total(&self) -> f64 {
        self.mu_h.iter().chain(&self.mu_v).sum()
    }
}

/// Which detectors fired on one shot. This is everything the receiving
/// side ever learns about a commitment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClickRecord {
    pub h_click: [bool; 3],
    pub v_click: [bool; 3],
}

impl fmt::Display for ClickRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |xs: &[bool; 3]| -> String { xs.iter().map(|&b| if b { '1' } else { '0' }).collect() };
        write!(f, "h={} v={}", bits(&self.h_click), bits(&self.v_click))
    }
}

/// Protocol state `k`: `(alpha cos(phi + k theta), alpha sin(phi + k theta))`.
pub fn protocol_state(k: usize, params: &ApparatusParams) -> Result<PolarizedState> {
    if k >= STATE_COUNT {
        return Err(Error::StateIndex(k));
    }
    params.validate()?;
    Ok(PolarizedState::at_angle(params.alpha(), params.state_angle(k)))
}

/// Threshold-detector click probability for a coherent input of mean
/// photon number `mu` plus `dark_rate` dark counts.
pub fn click_probability(mu: f64, dark_rate: f64) -> Result<f64> {
    if mu.is_nan() || mu < 0.0 {
        return Err(Error::Intensity(mu));
    }
    if dark_rate.is_nan() || dark_rate < 0.0 {
        return Err(Error::Intensity(dark_rate));
    }
    Ok(-(-(mu + dark_rate)).exp_m1())
}

pub fn branch_intensities(state: PolarizedState, params: &ApparatusParams) -> Result<BranchIntensities> {
    Ok(Apparatus::new(*params)?.intensities(state))
}

pub fn sample_clicks<R: Rng + ?Sized>(
    intensities: &BranchIntensities,
    params: &ApparatusParams,
    rng: &mut R,
) -> Result<ClickRecord> {
    let mut record = ClickRecord::default();
    for k in 0..STATE_COUNT {
        record.h_click[k] = rng.gen_bool(click_probability(intensities.mu_h[k], params.dark_rate)?);
        record.v_click[k] = rng.gen_bool(click_probability(intensities.mu_v[k], params.dark_rate)?);
    }
    Ok(record)
}

/// A validated apparatus with its branch rotations precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Apparatus {
    params: ApparatusParams,
    // (cos, sin) of each branch's rotation angle.
    rotations: [(f64, f64); 3],
    // efficiency * branch weight
    gains: [f64; 3],
    // Click probabilities of the protocol states, which make up nearly
    // every measurement.
    protocol: [(PolarizedState, [f64; 3], [f64; 3]); 3],
}

impl Apparatus {
    pub fn new(params: ApparatusParams) -> Result<Self> {
        params.validate()?;
        let mut rotations = [(0.0, 0.0); 3];
        let mut gains = [0.0; 3];
        for k in 0..STATE_COUNT {
            let (s, c) = params.state_angle(k).sin_cos();
            rotations[k] = (c, s);
            gains[k] = params.efficiency * params.branch_weights[k];
        }
        let mut app = Self { params, rotations, gains, protocol: [(PolarizedState::VACUUM, [0.0; 3], [0.0; 3]); 3] };
        for k in 0..STATE_COUNT {
            let state = PolarizedState::at_angle(params.alpha(), params.state_angle(k));
            let (h, v) = app.compute_click_probabilities(state);
            app.protocol[k] = (state, h, v);
        }
        Ok(app)
    }

    pub fn params(&self) -> &ApparatusParams {
        &self.params
    }

    pub fn intensities(&self, state: PolarizedState) -> BranchIntensities {
        let mut out = BranchIntensities { mu_h: [0.0; 3], mu_v: [0.0; 3] };
        for k in 0..STATE_COUNT {
            let (c, s) = self.rotations[k];
            let h = snap(state.h_amp * c + state.v_amp * s, state);
            let v = snap(state.v_amp * c - state.h_amp * s, state);
            out.mu_h[k] = self.gains[k] * h * h;
            out.mu_v[k] = self.gains[k] * v * v;
        }
        out
    }

    /// Click probabilities of the six detectors, horizontal then vertical.
    pub fn click_probabilities(&self, state: PolarizedState) -> ([f64; 3], [f64; 3]) {
        for (known, h, v) in &self.protocol {
            if *known == state {
                return (*h, *v);
            }
        }
        self.compute_click_probabilities(state)
    }

    fn compute_click_probabilities(&self, state: PolarizedState) -> ([f64; 3], [f64; 3]) {
        let mu = self.intensities(state);
        let p = |x: f64| -(-(x + self.params.dark_rate)).exp_m1();
        (mu.mu_h.map(p), mu.mu_v.map(p))
    }

    pub fn measure<R: Rng + ?Sized>(&self, state: PolarizedState, rng: &mut R) -> ClickRecord {
        let (ph, pv) = self.click_probabilities(state);
        let mut record = ClickRecord::default();
        for k in 0..STATE_COUNT {
            record.h_click[k] = rng.gen_bool(ph[k]);
            record.v_click[k] = rng.gen_bool(pv[k]);
        }
        record
    }
}

// A rotated amplitude smaller than the rounding error of its two products is
// zero at working precision; a state aligned with a branch must leave that
// branch's vertical port exactly dark.
fn snap(x: f64, state: PolarizedState) -> f64 {
    if x.abs() <= 4.0 * f64::EPSILON * (state.h_amp.abs() + state.v_amp.abs()) {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::BinomialCount;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn defaults_are_valid() {
        let p = ApparatusParams::default();
        p.validate().unwrap();
        assert_eq!(p.mean_photon, 20.0);
        assert_eq!(p.phi, PI / 6.7);
        assert_eq!(p.theta, PI / 10.0);
    }

    #[test]
    fn rejects_bad_params() {
        let base = ApparatusParams::default();
        for p in [
            ApparatusParams { branch_weights: [0.5, 0.5, 0.5], ..base },
            ApparatusParams { branch_weights: [1.2, -0.1, -0.1], ..base },
            ApparatusParams { efficiency: 1.5, ..base },
            ApparatusParams { dark_rate: -1.0, ..base },
            ApparatusParams { mean_photon: f64::NAN, ..base },
        ] {
            assert!(matches!(p.validate(), Err(Error::Params(_))), "{p:?}");
        }
    }

    #[test]
    fn protocol_state_zero_angle() {
        let p = ApparatusParams { phi: 0.0, ..Default::default() };
        let s = protocol_state(0, &p).unwrap();
        assert_eq!(s, PolarizedState::new(20f64.sqrt(), 0.0));
    }

    #[test]
    fn protocol_state_one_at_defaults() {
        // sqrt(20) * (cos, sin)(pi/6.7 + pi/10), evaluated independently
        let s = protocol_state(1, &ApparatusParams::default()).unwrap();
        assert!((s.h_amp - 3.169_682_834_412_772).abs() < 1e-12);
        assert!((s.v_amp - 3.154_855_104_316_047).abs() < 1e-12);
    }

    #[test]
    fn protocol_states_have_paper_energy() {
        let p = ApparatusParams::default();
        for k in 0..3 {
            let s = protocol_state(k, &p).unwrap();
            assert!((s.mean_photon() - 20.0).abs() < 1e-9);
        }
        assert_eq!(protocol_state(3, &p), Err(Error::StateIndex(3)));
    }

    #[test]
    fn matched_branch_is_dark() {
        let p = ApparatusParams::default();
        for j in 0..3 {
            let mu = branch_intensities(protocol_state(j, &p).unwrap(), &p).unwrap();
            assert_eq!(mu.mu_v[j], 0.0, "branch {j}: {mu:?}");
        }
    }

    #[test]
    fn adjacent_branch_intensity_matches_rotation() {
        let p = ApparatusParams::default();
        let s = protocol_state(0, &p).unwrap();
        let mu = branch_intensities(s, &p).unwrap();
        let closed = 20.0 / 3.0 * (PI / 10.0).sin().powi(2);
        assert!((mu.mu_v[1] - closed).abs() < 1e-12);
        assert!((mu.mu_v[1] - 0.636_610_018_750).abs() < 1e-11);

        // Numeric cross-check: attenuate, then apply a 2x2 rotation matrix by
        // -(phi + theta) and read off the second component.
        let a = -(p.phi + p.theta);
        let m = [[a.cos(), -a.sin()], [a.sin(), a.cos()]];
        let w = (1.0f64 / 3.0).sqrt();
        let out_v = m[1][0] * w * s.h_amp + m[1][1] * w * s.v_amp;
        assert!((mu.mu_v[1] - out_v * out_v).abs() < 1e-12);
    }

    #[test]
    fn click_probability_values() {
        assert_eq!(click_probability(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(click_probability(1e6, 0.0).unwrap(), 1.0);
        assert!((click_probability(0.636_610_018_750, 0.0).unwrap() - 0.470_92).abs() < 1e-5);
        assert!((click_probability(0.0, 0.1).unwrap() - (1.0 - (-0.1f64).exp())).abs() < 1e-15);
        assert_eq!(click_probability(-0.1, 0.0), Err(Error::Intensity(-0.1)));
    }

    #[test]
    fn vacuum_never_clicks() {
        let p = ApparatusParams::default();
        let mu = branch_intensities(PolarizedState::VACUUM, &p).unwrap();
        let mut r = rng(1);
        for _ in 0..1000 {
            assert_eq!(sample_clicks(&mu, &p, &mut r).unwrap(), ClickRecord::default());
        }
    }

    #[test]
    fn sampled_frequency_matches_closed_form() {
        let p = ApparatusParams::default();
        let mu = branch_intensities(protocol_state(0, &p).unwrap(), &p).unwrap();
        let expected = 1.0 - (-mu.mu_v[1]).exp();
        let mut r = rng(2);
        let mut count = BinomialCount::default();
        for _ in 0..1_000_000 {
            let rec = sample_clicks(&mu, &p, &mut r).unwrap();
            assert!(!rec.v_click[0]);
            count.record(rec.v_click[1]);
        }
        assert!(count.within_sigmas(expected, 3.0), "z = {}", count.z_score(expected));
    }

    #[test]
    fn detectors_click_independently() {
        let p = ApparatusParams::default();
        let app = Apparatus::new(p).unwrap();
        let state = protocol_state(0, &p).unwrap();
        let (_, pv) = app.click_probabilities(state);
        let joint = pv[1] * pv[2];
        let mut r = rng(3);
        let mut count = BinomialCount::default();
        for _ in 0..1_000_000 {
            let rec = app.measure(state, &mut r);
            count.record(rec.v_click[1] && rec.v_click[2]);
        }
        assert!(count.within_sigmas(joint, 3.0), "z = {}", count.z_score(joint));
    }

    #[test]
    fn display_is_compact() {
        let rec = ClickRecord { h_click: [true; 3], v_click: [false, true, true] };
        assert_eq!(rec.to_string(), "h=111 v=011");
    }
}
