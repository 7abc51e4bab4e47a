//! The prover/verifier protocol for graph 3-coloring.
//!
//! Each round the prover commits one coherent state per vertex, the verifier
//! measures every commitment, challenges one edge, and checks the prover's
//! claims for its endpoints against the recorded clicks. The verifier
//! accepts the graph only if every round checks out.
//!
//! Commitments cross the simulated quantum channel as [`Commitment`]
//! handles. A handle can only be consumed by a measurement; the amplitudes
//! inside are not reachable from outside this crate:
//!
//! ```compile_fail
//! # use qzk::protocol::Commitment;
//! fn peek(c: &Commitment) -> f64 {
//!     c.state.h_amp
//! }
//! ```

mod batch;
mod prover;
mod verifier;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::optics::{Apparatus, ApparatusParams, ClickRecord, PolarizedState};
use crate::qbc::{verify_unveil, Claim, VerificationPolicy};

pub use batch::{run_batch, BatchSummary, RejectCounts};
pub use prover::{CheatingProver, Endpoint, HonestProver, LieStats, Prover};
pub use verifier::{verifier_check, CuriousVerifier, HonestVerifier, Verifier};

/// Random stream used by every execution.
pub type SimRng = ChaCha8Rng;

/// Stream for execution `index` of a batch seeded with `seed`. Execution 0
/// is the stream a single [`run_protocol`] call uses.
pub fn execution_rng(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// An opaque quantum state in flight from prover to verifier.
#[derive(Debug)]
pub struct Commitment {
    state: PolarizedState,
}

impl Commitment {
    pub(crate) fn new(state: PolarizedState) -> Self {
        Self { state }
    }

    /// Measure on the receiving apparatus. The state does not survive.
    pub fn measure<R: Rng + ?Sized>(self, apparatus: &Apparatus, rng: &mut R) -> ClickRecord {
        apparatus.measure(self.state, rng)
    }
}

/// One commitment per vertex, in vertex order.
#[derive(Debug)]
pub struct CommitBundle {
    commitments: Vec<Commitment>,
    // Index of the protocol state behind each handle, kept for the
    // simulation harness only.
    truth: Vec<Option<Claim>>,
}

impl CommitBundle {
    pub(crate) fn new(commitments: Vec<Commitment>, truth: Vec<Option<Claim>>) -> Self {
        debug_assert_eq!(commitments.len(), truth.len());
        Self { commitments, truth }
    }

    pub fn len(&self) -> usize {
        self.commitments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commitments.is_empty()
    }

    pub fn measure_all<R: Rng + ?Sized>(self, apparatus: &Apparatus, rng: &mut R) -> Vec<ClickRecord> {
        self.commitments.into_iter().map(|c| c.measure(apparatus, rng)).collect()
    }

    pub(crate) fn truth(&self) -> &[Option<Claim>] {
        &self.truth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Challenge {
    pub edge_index: usize,
}

/// The prover's claims for the two endpoints of the challenged edge, as raw
/// state indices. A dishonest prover may send indices outside {0, 1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unveil {
    pub claim_u: u8,
    pub claim_v: u8,
}

impl Unveil {
    pub fn new(u: Claim, v: Claim) -> Self {
        Self { claim_u: u.into(), claim_v: v.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// A claim is contradicted by the recorded clicks.
    Consistency,
    EqualClaims,
    OutOfSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTranscript {
    pub round: u64,
    pub click_records: Vec<ClickRecord>,
    /// `None` only for edgeless graphs, where no challenge can be posed.
    pub challenge: Option<Challenge>,
    pub unveil: Option<Unveil>,
    pub verdict: Verdict,
}

/// How the consistency of a false claim is decided.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EscapeMode {
    /// From the recorded clicks.
    #[default]
    Physical,
    /// A false claim passes with probability `p_escape`, drawn
    /// independently of the clicks. Truthful claims are checked physically.
    Synthetic { p_escape: f64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Defaults to `m^2` when `None`.
    pub rounds: Option<u64>,
    pub seed: u64,
    pub policy: VerificationPolicy,
    pub params: ApparatusParams,
    pub escape_mode: EscapeMode,
}

impl ProtocolConfig {
    pub fn rounds_for(&self, g: &Graph) -> Result<u64> {
        let m = g.edge_count() as u64;
        let rounds = self.rounds.unwrap_or(m * m);
        if rounds == 0 {
            return Err(Error::Config(if m == 0 {
                "an edgeless graph needs an explicit round count".into()
            } else {
                "rounds must be at least 1".into()
            }));
        }
        Ok(rounds)
    }

    fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let EscapeMode::Synthetic { p_escape } = self.escape_mode {
            if !(0.0..=1.0).contains(&p_escape) {
                return Err(Error::Probability(p_escape));
            }
        }
        Ok(())
    }
}

/// Result of one full protocol execution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Execution {
    pub accepted: bool,
    pub rounds: u64,
    pub transcripts: Vec<RoundTranscript>,
    pub observations: Observations,
}

/// Harness-side tallies that compare what the parties did against the
/// ground truth of the commitments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Observations {
    pub rejections: RejectCounts,
    /// Rounds in which the verifier identified every vertex unaided.
    pub fully_identified_rounds: u64,
    pub identifications: u64,
    pub wrong_identifications: u64,
    /// Rounds in which at least one claim disagreed with the committed state.
    pub lying_rounds: u64,
    pub lying_rounds_accepted: u64,
}

/// Runs `cfg.rounds` rounds (default `m^2`) on the random stream
/// [`execution_rng`]`(cfg.seed, 0)`.
pub fn run_protocol<P: Prover, V: Verifier>(
    g: &Graph,
    prover: &mut P,
    verifier: &mut V,
    cfg: &ProtocolConfig,
) -> Result<Execution> {
    execute(g, prover, verifier, cfg, &mut execution_rng(cfg.seed, 0), true)
}

pub(crate) fn execute<P: Prover, V: Verifier>(
    g: &Graph,
    prover: &mut P,
    verifier: &mut V,
    cfg: &ProtocolConfig,
    rng: &mut SimRng,
    keep_transcripts: bool,
) -> Result<Execution> {
    cfg.validate()?;
    let rounds = cfg.rounds_for(g)?;
    if prover.vertex_count() != g.vertex_count() {
        return Err(Error::Config(format!(
            "prover was prepared for {} vertices, graph has {}",
            prover.vertex_count(),
            g.vertex_count()
        )));
    }
    let apparatus = Apparatus::new(cfg.params)?;
    let mut transcripts = Vec::new();
    let mut obs = Observations::default();
    let mut accepted = true;

    for round in 0..rounds {
        let bundle = prover.commit(&cfg.params, rng)?;
        let truth = bundle.truth().to_vec();
        let records = verifier.receive(bundle, &apparatus, rng);

        if let Some(ids) = verifier.identifications() {
            let mut all = true;
            for (id, t) in ids.iter().zip(&truth) {
                match id {
                    Some(c) => {
                        obs.identifications += 1;
                        obs.wrong_identifications += u64::from(Some(*c) != *t);
                    }
                    None => all = false,
                }
            }
            obs.fully_identified_rounds += u64::from(all);
        }

        let (challenge, unveil, verdict) = if g.edge_count() == 0 {
            (None, None, Verdict::Accept)
        } else {
            let challenge = verifier.challenge(g, rng);
            let unveil = prover.unveil(g, challenge, rng);
            let (u, v) = g.edges()[challenge.edge_index];
            let lied = [(u, unveil.claim_u), (v, unveil.claim_v)]
                .map(|(w, claim)| truth[w].map(u8::from) != Some(claim));
            let verdict = match cfg.escape_mode {
                EscapeMode::Physical => verifier.check(g, challenge, unveil, cfg.policy),
                EscapeMode::Synthetic { p_escape } => {
                    synthetic_check(&records, (u, v), unveil, lied, p_escape, cfg.policy, rng)
                }
            };
            if lied.iter().any(|&l| l) {
                obs.lying_rounds += 1;
                obs.lying_rounds_accepted += u64::from(verdict.is_accept());
            }
            (Some(challenge), Some(unveil), verdict)
        };

        if let Verdict::Reject(reason) = verdict {
            accepted = false;
            obs.rejections.add(reason);
        }
        if keep_transcripts {
            transcripts.push(RoundTranscript { round, click_records: records, challenge, unveil, verdict });
        }
    }

    Ok(Execution { accepted, rounds, transcripts, observations: obs })
}

fn synthetic_check<R: Rng + ?Sized>(
    records: &[ClickRecord],
    (u, v): (usize, usize),
    unveil: Unveil,
    lied: [bool; 2],
    p_escape: f64,
    policy: VerificationPolicy,
    rng: &mut R,
) -> Verdict {
    if unveil.claim_u == unveil.claim_v {
        return Verdict::Reject(RejectReason::EqualClaims);
    }
    let (Ok(cu), Ok(cv)) = (Claim::try_from(unveil.claim_u), Claim::try_from(unveil.claim_v)) else {
        return Verdict::Reject(RejectReason::OutOfSet);
    };
    for ((w, claim), lie) in [(u, cu), (v, cv)].into_iter().zip(lied) {
        let ok = if lie { rng.gen_bool(p_escape) } else { verify_unveil(claim, &records[w], policy).is_accept() };
        if !ok {
            return Verdict::Reject(RejectReason::Consistency);
        }
    }
    Verdict::Accept
}
