//! Closed-form commitment probabilities, the soundness and hiding formulas
//! of the 3-coloring protocol, and a search for the sender's best cheat
//! state.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Coloring, Permutation};
use crate::optics::{protocol_state, Apparatus, ApparatusParams, PolarizedState, STATE_COUNT};
use crate::qbc::Claim;

/// Escape probability the published soundness and hiding figures use.
pub const PAPER_ESCAPE: f64 = 0.4;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Probability(p))
    }
}

fn no_dark_counts(params: &ApparatusParams) -> Result<()> {
    if params.dark_rate > 0.0 {
        return Err(Error::DarkCounts(params.dark_rate));
    }
    Ok(())
}

/// Probability that the receiver identifies protocol state `j` with
/// certainty: both vertical detectors of the other two branches fire.
pub fn identification_probability(j: usize, params: &ApparatusParams) -> Result<f64> {
    no_dark_counts(params)?;
    let app = Apparatus::new(*params)?;
    let (_, pv) = app.click_probabilities(protocol_state(j, params)?);
    Ok((0..STATE_COUNT).filter(|&k| k != j).map(|k| pv[k]).product())
}

/// Receiver's unaided identification probability for a uniformly chosen
/// protocol state.
pub fn analytic_pb(params: &ApparatusParams) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..STATE_COUNT {
        total += identification_probability(j, params)?;
    }
    Ok(total / STATE_COUNT as f64)
}

/// Probability that sending state `sent` and claiming `claimed` passes the
/// impossibility check, i.e. the claimed branch's vertical detector stays
/// silent. Dark counts, when configured, are included.
pub fn analytic_escape(sent: usize, claimed: usize, params: &ApparatusParams) -> Result<f64> {
    let claim = Claim::new(claimed)?;
    escape_for_state(protocol_state(sent, params)?, claim, &Apparatus::new(*params)?)
}

fn escape_for_state(state: PolarizedState, claim: Claim, app: &Apparatus) -> Result<f64> {
    let mu = app.intensities(state).mu_v[claim.index()];
    Ok((-(mu + app.params().dark_rate)).exp())
}

/// Full 3x3 table, rows indexed by the sent state.
pub fn escape_matrix(params: &ApparatusParams) -> Result<[[f64; 3]; 3]> {
    let mut out = [[0.0; 3]; 3];
    for (j, row) in out.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = analytic_escape(j, k, params)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheatObjective {
    /// Mean escape over the two target claims.
    #[default]
    Average,
    /// Worst-case escape over the two target claims.
    MaxMin,
}

impl CheatObjective {
    fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            CheatObjective::Average => 0.5 * (a + b),
            CheatObjective::MaxMin => a.min(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheatReport {
    pub targets: (Claim, Claim),
    pub objective_kind: CheatObjective,
    /// Polarization angle of the best state, radians.
    pub angle: f64,
    pub best_state: PolarizedState,
    /// Escape probability of the best state for each of the three claims.
    pub escape_probs: [f64; 3],
    pub objective: f64,
}

/// Grid resolution of the coarse pass in [`optimal_cheat_state`].
pub const CHEAT_GRID_POINTS: usize = 20_001;
/// Objective values closer than this are treated as ties, broken toward the
/// smaller angle.
pub const CHEAT_TIE_TOLERANCE: f64 = 1e-9;

/// Best state on the honest-energy circle for a sender who wants to be able
/// to claim either of `targets` later.
///
/// States are `(alpha cos psi, alpha sin psi)` for `psi` in `[0, pi/2]`. A
/// dense grid locates every local maximum; each is refined by golden-section
/// search to well under 1e-6 rad.
pub fn optimal_cheat_state(
    targets: (Claim, Claim),
    params: &ApparatusParams,
    objective: CheatObjective,
) -> Result<CheatReport> {
    if targets.0 == targets.1 {
        return Err(Error::EqualTargets(targets.0.index()));
    }
    let app = Apparatus::new(*params)?;
    let eval = |psi: f64| cheat_objective(psi, targets, &app, objective);

    let step = FRAC_PI_2 / (CHEAT_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..CHEAT_GRID_POINTS).into_par_iter().map(|i| eval(i as f64 * step)).collect();

    let mut best: Option<(f64, f64)> = None;
    for i in 0..grid.len() {
        let left = if i > 0 { grid[i - 1] } else { f64::NEG_INFINITY };
        let right = grid.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if grid[i] < left || grid[i] < right {
            continue;
        }
        let lo = (i as f64 - 1.0).max(0.0) * step;
        let hi = ((i + 1) as f64 * step).min(FRAC_PI_2);
        let psi = golden_section_max(&eval, lo, hi, 1e-10);
        let value = eval(psi);
        best = match best {
            Some((b_psi, b_val)) if value <= b_val + CHEAT_TIE_TOLERANCE => {
                if value >= b_val - CHEAT_TIE_TOLERANCE && psi < b_psi {
                    Some((psi, value))
                } else {
                    Some((b_psi, b_val))
                }
            }
            _ => Some((psi, value)),
        };
    }
    let (angle, objective_value) = best.expect("grid is non-empty");
    let best_state = PolarizedState::at_angle(params.alpha(), angle);
    let mut escape_probs = [0.0; 3];
    for c in Claim::all() {
        escape_probs[c.index()] = escape_for_state(best_state, c, &app)?;
    }
    Ok(CheatReport {
        targets,
        objective_kind: objective,
        angle,
        best_state,
        escape_probs,
        objective: objective_value,
    })
}

/// Value of the cheat objective for the state at angle `psi` on the
/// honest-energy circle.
pub fn cheat_objective_at(
    psi: f64,
    targets: (Claim, Claim),
    params: &ApparatusParams,
    objective: CheatObjective,
) -> Result<f64> {
    Ok(cheat_objective(psi, targets, &Apparatus::new(*params)?, objective))
}

fn cheat_objective(psi: f64, targets: (Claim, Claim), app: &Apparatus, objective: CheatObjective) -> f64 {
    let state = PolarizedState::at_angle(app.params().alpha(), psi);
    let mu = app.intensities(state).mu_v;
    let dark = app.params().dark_rate;
    let esc = |c: Claim| (-(mu[c.index()] + dark)).exp();
    objective.combine(esc(targets.0), esc(targets.1))
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Per-round probability that a prover with one bad edge among `m` passes:
/// `1 - (1 - p_escape) / m`.
pub fn round_cheat_probability(m: u64, p_escape: f64) -> Result<f64> {
    round_cheat_probability_with_bad(m, 1, p_escape)
}

/// As [`round_cheat_probability`] with `bad` of the `m` edges monochromatic.
pub fn round_cheat_probability_with_bad(m: u64, bad: u64, p_escape: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroCount("edge count"));
    }
    if bad > m {
        return Err(Error::Config(format!("{bad} bad edges out of {m}")));
    }
    check_probability(p_escape)?;
    Ok(1.0 - bad as f64 * (1.0 - p_escape) / m as f64)
}

pub fn total_cheat_probability(m: u64, p_escape: f64, rounds: u64) -> Result<f64> {
    if rounds == 0 {
        return Err(Error::ZeroCount("rounds"));
    }
    Ok(round_cheat_probability(m, p_escape)?.powf(rounds as f64))
}

/// `exp(-(1 - p_escape) m)`, the large-`m` form of the total over `m^2`
/// rounds; `exp(-0.6 m)` at the published escape.
pub fn asymptotic_cheat_probability(m: u64, p_escape: f64) -> Result<f64> {
    check_probability(p_escape)?;
    Ok((-(1.0 - p_escape) * m as f64).exp())
}

/// `m^2 ln(1 - (1 - p)/m) + (1 - p) m`, the log-ratio of the exact `m^2`-round
/// total to its exponential approximation.
pub fn exponent_gap(m: u64, p_escape: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroCount("edge count"));
    }
    check_probability(p_escape)?;
    let m = m as f64;
    let loss = 1.0 - p_escape;
    Ok(m * m * (-loss / m).ln_1p() + loss * m)
}

/// Probability that an unaided receiver identifies all `n` colors in at
/// least one of `attempts` independent tries, each succeeding with `pb^n`.
pub fn hiding_probability(n: u32, pb: f64, attempts: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroCount("vertex count"));
    }
    if attempts == 0 {
        return Err(Error::ZeroCount("attempts"));
    }
    check_probability(pb)?;
    Ok(at_least_once(pb.powi(n as i32), attempts))
}

fn at_least_once(p: f64, attempts: u64) -> f64 {
    -(attempts as f64 * (-p).ln_1p()).exp_m1()
}

/// Per-round probability that all vertices of `coloring` are identified
/// when the prover commits a uniformly permuted copy of it. Unlike `pb^n`
/// this accounts for the fixed color multiplicities of the coloring.
pub fn full_identification_probability(coloring: &Coloring, params: &ApparatusParams) -> Result<f64> {
    let mut q = [0.0; 3];
    for (j, slot) in q.iter_mut().enumerate() {
        *slot = identification_probability(j, params)?;
    }
    let total: f64 = Permutation::ALL
        .iter()
        .map(|&p| coloring.colors().iter().map(|&c| q[p.apply(c).index()]).product::<f64>())
        .sum();
    Ok(total / Permutation::ALL.len() as f64)
}

/// [`full_identification_probability`] over `attempts` independent rounds.
pub fn hiding_probability_for_coloring(coloring: &Coloring, params: &ApparatusParams, attempts: u64) -> Result<f64> {
    if attempts == 0 {
        return Err(Error::ZeroCount("attempts"));
    }
    Ok(at_least_once(full_identification_probability(coloring, params)?, attempts))
}
