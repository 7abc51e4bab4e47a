use rand::Rng;
use serde::Serialize;

use super::{Challenge, CommitBundle, Commitment, Unveil};
use crate::analysis::analytic_escape;
use crate::error::{Error, Result};
use crate::graph::{best_near_coloring, is_valid_3coloring, permute_colors, Color, Coloring, Edge, Graph, Permutation};
use crate::optics::ApparatusParams;
use crate::qbc::{self, Claim};

pub trait Prover {
    fn vertex_count(&self) -> usize;

    /// Step 1: commit a state for every vertex.
    fn commit<R: Rng + ?Sized>(&mut self, params: &ApparatusParams, rng: &mut R) -> Result<CommitBundle>;

    /// Step 3: claims for the endpoints of the challenged edge.
    fn unveil<R: Rng + ?Sized>(&mut self, g: &Graph, challenge: Challenge, rng: &mut R) -> Unveil;
}

fn commit_coloring(colors: &Coloring, params: &ApparatusParams) -> Result<CommitBundle> {
    let mut handles = Vec::with_capacity(colors.len());
    let mut truth = Vec::with_capacity(colors.len());
    for &c in colors.colors() {
        handles.push(Commitment::new(qbc::commit(c.index(), params)?));
        truth.push(Some(Claim::new(c.index())?));
    }
    Ok(CommitBundle::new(handles, truth))
}

fn claim_of(c: Color) -> Claim {
    Claim::new(c.index()).expect("colors map onto valid claims")
}

/// Commits a freshly permuted proper coloring each round and answers every
/// challenge truthfully.
#[derive(Debug, Clone)]
pub struct HonestProver {
    coloring: Coloring,
    committed: Option<Coloring>,
    permutation: Permutation,
}

impl HonestProver {
    pub fn new(g: &Graph, coloring: Coloring) -> Result<Self> {
        if !is_valid_3coloring(g, &coloring)? {
            return Err(Error::InvalidColoring);
        }
        Ok(Self { coloring, committed: None, permutation: Permutation::IDENTITY })
    }

    /// Permutation drawn for the most recent round.
    pub fn last_permutation(&self) -> Permutation {
        self.permutation
    }

    pub fn committed(&self) -> Option<&Coloring> {
        self.committed.as_ref()
    }
}

impl Prover for HonestProver {
    fn vertex_count(&self) -> usize {
        self.coloring.len()
    }

    fn commit<R: Rng + ?Sized>(&mut self, params: &ApparatusParams, rng: &mut R) -> Result<CommitBundle> {
        self.permutation = Permutation::uniform(rng);
        let permuted = permute_colors(&self.coloring, self.permutation);
        let bundle = commit_coloring(&permuted, params)?;
        self.committed = Some(permuted);
        Ok(bundle)
    }

    fn unveil<R: Rng + ?Sized>(&mut self, g: &Graph, challenge: Challenge, _rng: &mut R) -> Unveil {
        let committed = self.committed.as_ref().expect("unveil follows commit");
        let (u, v) = g.edges()[challenge.edge_index];
        Unveil::new(claim_of(committed.get(u)), claim_of(committed.get(v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    U,
    V,
}

/// Counters for a cheating prover's bad-edge rounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LieStats {
    pub bad_edge_rounds: u64,
    pub lied_about_u: u64,
    pub lied_about_v: u64,
    pub lie_distance_1: u64,
    pub lie_distance_2: u64,
}

/// Commits a permuted minimum-violation coloring. On a challenged bad edge
/// it picks one endpoint uniformly and claims for it a neighbouring color
/// (angular distance 1 from the committed one); the other endpoint is
/// answered truthfully.
#[derive(Debug, Clone)]
pub struct CheatingProver {
    near: Coloring,
    bad_edges: Vec<Edge>,
    committed: Option<Coloring>,
    stats: LieStats,
}

impl CheatingProver {
    pub fn new(g: &Graph) -> Result<Self> {
        let near = best_near_coloring(g)?;
        if near.bad_edges.is_empty() {
            return Err(Error::Colorable);
        }
        Ok(Self { near: near.coloring, bad_edges: near.bad_edges, committed: None, stats: LieStats::default() })
    }

    pub fn near_coloring(&self) -> &Coloring {
        &self.near
    }

    pub fn bad_edges(&self) -> &[Edge] {
        &self.bad_edges
    }

    pub fn stats(&self) -> LieStats {
        self.stats
    }

    /// The false claim made for an endpoint committed as `committed`.
    pub fn lie_for(committed: Color) -> Color {
        match committed {
            Color::B => Color::R,
            Color::R => Color::B,
            Color::Y => Color::R,
        }
    }

    /// Escape probability of one lie, averaged over the committed color of
    /// the bad edge, which is uniform under the random permutation.
    pub fn predicted_escape(params: &ApparatusParams) -> Result<f64> {
        let mut total = 0.0;
        for c in Color::ALL {
            total += analytic_escape(c.index(), Self::lie_for(c).index(), params)?;
        }
        Ok(total / 3.0)
    }
}

impl Prover for CheatingProver {
    fn vertex_count(&self) -> usize {
        self.near.len()
    }

    fn commit<R: Rng + ?Sized>(&mut self, params: &ApparatusParams, rng: &mut R) -> Result<CommitBundle> {
        let permuted = permute_colors(&self.near, Permutation::uniform(rng));
        let bundle = commit_coloring(&permuted, params)?;
        self.committed = Some(permuted);
        Ok(bundle)
    }

    fn unveil<R: Rng + ?Sized>(&mut self, g: &Graph, challenge: Challenge, rng: &mut R) -> Unveil {
        let committed = self.committed.as_ref().expect("unveil follows commit");
        let (u, v) = g.edges()[challenge.edge_index];
        let (cu, cv) = (committed.get(u), committed.get(v));
        if cu != cv {
            return Unveil::new(claim_of(cu), claim_of(cv));
        }
        self.stats.bad_edge_rounds += 1;
        let lie = Self::lie_for(cu);
        match lie.index().abs_diff(cu.index()) {
            1 => self.stats.lie_distance_1 += 1,
            _ => self.stats.lie_distance_2 += 1,
        }
        if rng.gen_bool(0.5) {
            self.stats.lied_about_u += 1;
            Unveil::new(claim_of(lie), claim_of(cv))
        } else {
            self.stats.lied_about_v += 1;
            Unveil::new(claim_of(cu), claim_of(lie))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::brute_force_3color;
    use crate::protocol::{run_protocol, HonestVerifier, ProtocolConfig};
    use crate::stats::BinomialCount;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn honest_prover_rejects_bad_coloring() {
        let k3 = Graph::complete(3);
        let bad = Coloring::from_indices(&[0, 0, 1]).unwrap();
        assert_eq!(HonestProver::new(&k3, bad).unwrap_err(), Error::InvalidColoring);
    }

    #[test]
    fn cheating_prover_rejects_colorable_graph() {
        assert_eq!(CheatingProver::new(&Graph::cycle(5)).unwrap_err(), Error::Colorable);
    }

    #[test]
    fn honest_commitments_follow_the_permutation() {
        let g = Graph::petersen();
        let c = brute_force_3color(&g).unwrap().unwrap();
        let mut p = HonestProver::new(&g, c.clone()).unwrap();
        let params = ApparatusParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0u64; 6];
        let rounds = 6000;
        for _ in 0..rounds {
            let bundle = p.commit(&params, &mut rng).unwrap();
            let perm = p.last_permutation();
            counts[perm.ordinal()] += 1;
            for (w, t) in bundle.truth().iter().enumerate() {
                assert_eq!(t.unwrap().index(), perm.apply(c.get(w)).index());
            }
            for (i, &(u, v)) in g.edges().iter().enumerate() {
                let un = p.unveil(&g, Challenge { edge_index: i }, &mut rng);
                assert_ne!(un.claim_u, un.claim_v);
                assert_eq!(un.claim_u as usize, perm.apply(c.get(u)).index());
                assert_eq!(un.claim_v as usize, perm.apply(c.get(v)).index());
            }
        }
        for k in counts {
            let count = BinomialCount::new(k, rounds);
            assert!(count.within_sigmas(1.0 / 6.0, 3.0), "{counts:?}");
        }
    }

    #[test]
    fn lies_are_adjacent() {
        for c in Color::ALL {
            let lie = CheatingProver::lie_for(c);
            assert_ne!(lie, c);
            assert_eq!(lie.index().abs_diff(c.index()), 1);
        }
        let p = ApparatusParams::default();
        let expected = analytic_escape(0, 1, &p).unwrap();
        assert!((CheatingProver::predicted_escape(&p).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn bad_edge_endpoint_choice_is_fair() {
        let g = Graph::complete(4);
        let mut p = CheatingProver::new(&g).unwrap();
        let (bu, bv) = p.bad_edges()[0];
        let bad_index = g.edges().iter().position(|&e| e == (bu, bv)).unwrap();
        let params = ApparatusParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10_000 {
            let _ = p.commit(&params, &mut rng).unwrap();
            let un = p.unveil(&g, Challenge { edge_index: bad_index }, &mut rng);
            assert_ne!(un.claim_u, un.claim_v);
        }
        let s = p.stats();
        assert_eq!(s.bad_edge_rounds, 10_000);
        assert_eq!(s.lie_distance_1, 10_000);
        let u = BinomialCount::new(s.lied_about_u, s.bad_edge_rounds);
        assert!(u.within_sigmas(0.5, 3.0), "{s:?}");
    }

    #[test]
    fn good_edge_rounds_look_honest() {
        let g = Graph::complete(4);
        let cfg = ProtocolConfig { rounds: Some(2000), seed: 3, ..Default::default() };
        let mut p = CheatingProver::new(&g).unwrap();
        let bad = p.bad_edges()[0];
        let exec = run_protocol(&g, &mut p, &mut HonestVerifier::default(), &cfg).unwrap();
        let mut good_rounds = 0;
        for t in &exec.transcripts {
            let e = g.edges()[t.challenge.unwrap().edge_index];
            if e != bad {
                good_rounds += 1;
                assert!(t.verdict.is_accept());
            }
        }
        assert!(good_rounds > 1000);
    }
}
