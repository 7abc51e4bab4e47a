use rand::Rng;

use super::{Challenge, CommitBundle, RejectReason, Unveil, Verdict};
use crate::graph::Graph;
use crate::optics::{Apparatus, ClickRecord};
use crate::qbc::{discriminate_unaided, verify_unveil, Claim, VerificationPolicy};

/// The verifier's side of a round. Commitments arrive as a
/// [`CommitBundle`], which can only be measured; everything a verifier
/// knows afterwards comes from the resulting [`ClickRecord`]s.
pub trait Verifier {
    /// Measures every commitment, keeps the records, and returns a copy for
    /// the transcript.
    fn receive<R: Rng + ?Sized>(&mut self, bundle: CommitBundle, apparatus: &Apparatus, rng: &mut R) -> Vec<ClickRecord>;

    /// Step 2.
    fn challenge<R: Rng + ?Sized>(&mut self, g: &Graph, rng: &mut R) -> Challenge;

    /// Step 4.
    fn check(&mut self, g: &Graph, challenge: Challenge, unveil: Unveil, policy: VerificationPolicy) -> Verdict;

    /// Unaided identifications made this round, for verifiers that try.
    fn identifications(&self) -> Option<&[Option<Claim>]> {
        None
    }
}

/// Checks in order: distinct claims, claims inside {0, 1, 2}, then each
/// endpoint's claim against its clicks. The first failure is the reason.
pub fn verifier_check(
    unveil: Unveil,
    record_u: &ClickRecord,
    record_v: &ClickRecord,
    policy: VerificationPolicy,
) -> Verdict {
    if unveil.claim_u == unveil.claim_v {
        return Verdict::Reject(RejectReason::EqualClaims);
    }
    let (Ok(cu), Ok(cv)) = (Claim::try_from(unveil.claim_u), Claim::try_from(unveil.claim_v)) else {
        return Verdict::Reject(RejectReason::OutOfSet);
    };
    if !verify_unveil(cu, record_u, policy).is_accept() || !verify_unveil(cv, record_v, policy).is_accept() {
        return Verdict::Reject(RejectReason::Consistency);
    }
    Verdict::Accept
}

#[derive(Debug, Clone, Default)]
pub struct HonestVerifier {
    records: Vec<ClickRecord>,
}

impl Verifier for HonestVerifier {
    fn receive<R: Rng + ?Sized>(&mut self, bundle: CommitBundle, apparatus: &Apparatus, rng: &mut R) -> Vec<ClickRecord> {
        self.records = bundle.measure_all(apparatus, rng);
        self.records.clone()
    }

    fn challenge<R: Rng + ?Sized>(&mut self, g: &Graph, rng: &mut R) -> Challenge {
        Challenge { edge_index: rng.gen_range(0..g.edge_count()) }
    }

    fn check(&mut self, g: &Graph, challenge: Challenge, unveil: Unveil, policy: VerificationPolicy) -> Verdict {
        let (u, v) = g.edges()[challenge.edge_index];
        verifier_check(unveil, &self.records[u], &self.records[v], policy)
    }
}

/// Follows the protocol, and also tries to identify every vertex's color
/// from the clicks alone each round.
#[derive(Debug, Clone, Default)]
pub struct CuriousVerifier {
    inner: HonestVerifier,
    identified: Vec<Option<Claim>>,
    rounds_fully_identified: u64,
}

impl CuriousVerifier {
    /// Whether some round so far yielded every vertex.
    pub fn succeeded(&self) -> bool {
        self.rounds_fully_identified > 0
    }

    pub fn rounds_fully_identified(&self) -> u64 {
        self.rounds_fully_identified
    }
}

impl Verifier for CuriousVerifier {
    fn receive<R: Rng + ?Sized>(&mut self, bundle: CommitBundle, apparatus: &Apparatus, rng: &mut R) -> Vec<ClickRecord> {
        let records = self.inner.receive(bundle, apparatus, rng);
        self.identified = records.iter().map(discriminate_unaided).collect();
        if self.identified.iter().all(Option::is_some) {
            self.rounds_fully_identified += 1;
        }
        records
    }

    fn challenge<R: Rng + ?Sized>(&mut self, g: &Graph, rng: &mut R) -> Challenge {
        self.inner.challenge(g, rng)
    }

    fn check(&mut self, g: &Graph, challenge: Challenge, unveil: Unveil, policy: VerificationPolicy) -> Verdict {
        self.inner.check(g, challenge, unveil, policy)
    }

    fn identifications(&self) -> Option<&[Option<Claim>]> {
        Some(&self.identified)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{brute_force_3color, Graph};
    use crate::protocol::{run_protocol, HonestProver, ProtocolConfig};

    const T: bool = true;
    const F: bool = false;

    fn rec(v: [bool; 3]) -> ClickRecord {
        ClickRecord { h_click: [T; 3], v_click: v }
    }

    #[test]
    fn check_order_and_reasons() {
        let pol = VerificationPolicy::ImpossibilityOnly;
        let quiet = rec([F, F, F]);
        let eq = Unveil { claim_u: 1, claim_v: 1 };
        assert_eq!(verifier_check(eq, &quiet, &quiet, pol), Verdict::Reject(RejectReason::EqualClaims));
        let out = Unveil { claim_u: 0, claim_v: 3 };
        assert_eq!(verifier_check(out, &quiet, &quiet, pol), Verdict::Reject(RejectReason::OutOfSet));
        let ok = Unveil { claim_u: 0, claim_v: 1 };
        assert_eq!(verifier_check(ok, &rec([T, F, F]), &quiet, pol), Verdict::Reject(RejectReason::Consistency));
        assert_eq!(verifier_check(ok, &rec([F, T, T]), &rec([T, F, T]), pol), Verdict::Accept);
    }

    #[test]
    fn curious_identifications_are_correct() {
        let g = Graph::cycle(5);
        let c = brute_force_3color(&g).unwrap().unwrap();
        let mut p = HonestProver::new(&g, c).unwrap();
        let mut v = CuriousVerifier::default();
        let cfg = ProtocolConfig { rounds: Some(5000), seed: 8, ..Default::default() };
        let exec = run_protocol(&g, &mut p, &mut v, &cfg).unwrap();
        assert!(exec.accepted);
        assert!(exec.observations.identifications > 1000);
        assert_eq!(exec.observations.wrong_identifications, 0);
        assert_eq!(exec.observations.fully_identified_rounds, v.rounds_fully_identified());
        assert!(v.succeeded());
    }
}
