//! Many independent executions, fanned out over worker threads.
//!
//! Execution `i` draws from [`execution_rng`]`(seed, i)` and only counts are
//! aggregated, so the summary does not depend on the number of threads or
//! on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use super::{execute, execution_rng, Observations, ProtocolConfig, Prover, RejectReason, Verifier};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stats::BinomialCount;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RejectCounts {
    pub consistency: u64,
    pub equal_claims: u64,
    pub out_of_set: u64,
}

impl RejectCounts {
    pub fn add(&mut self, reason: RejectReason) {
        match reason {
            RejectReason::Consistency => self.consistency += 1,
            RejectReason::EqualClaims => self.equal_claims += 1,
            RejectReason::OutOfSet => self.out_of_set += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.consistency + self.equal_claims + self.out_of_set
    }

    fn merge(self, o: Self) -> Self {
        Self {
            consistency: self.consistency + o.consistency,
            equal_claims: self.equal_claims + o.equal_claims,
            out_of_set: self.out_of_set + o.out_of_set,
        }
    }
}

impl Observations {
    fn merge(self, o: Self) -> Self {
        Self {
            rejections: self.rejections.merge(o.rejections),
            fully_identified_rounds: self.fully_identified_rounds + o.fully_identified_rounds,
            identifications: self.identifications + o.identifications,
            wrong_identifications: self.wrong_identifications + o.wrong_identifications,
            lying_rounds: self.lying_rounds + o.lying_rounds,
            lying_rounds_accepted: self.lying_rounds_accepted + o.lying_rounds_accepted,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub executions: u64,
    pub rounds_per_execution: u64,
    /// Executions in which every round was accepted.
    pub accepted: BinomialCount,
    /// Executions in which the verifier identified all vertices unaided in
    /// at least one round.
    pub fully_identified: BinomialCount,
    /// Rounds with a false claim, and how many of those were accepted.
    pub lie_escapes: BinomialCount,
    pub totals: Observations,
}

impl BatchSummary {
    fn merge(self, o: Self) -> Self {
        Self {
            executions: self.executions + o.executions,
            rounds_per_execution: self.rounds_per_execution.max(o.rounds_per_execution),
            accepted: self.accepted.merge(o.accepted),
            fully_identified: self.fully_identified.merge(o.fully_identified),
            lie_escapes: self.lie_escapes.merge(o.lie_escapes),
            totals: self.totals.merge(o.totals),
        }
    }
}

/// Runs `executions` independent protocol executions, each with fresh
/// copies of `prover` and `verifier`. `threads = None` uses the global
/// rayon pool.
pub fn run_batch<P, V>(
    g: &Graph,
    prover: &P,
    verifier: &V,
    cfg: &ProtocolConfig,
    executions: u64,
    threads: Option<usize>,
) -> Result<BatchSummary>
where
    P: Prover + Clone + Sync,
    V: Verifier + Clone + Sync,
{
    if executions == 0 {
        return Err(Error::ZeroCount("executions"));
    }
    let one = |i: u64| -> Result<BatchSummary> {
        let mut p = prover.clone();
        let mut v = verifier.clone();
        let exec = execute(g, &mut p, &mut v, cfg, &mut execution_rng(cfg.seed, i), false)?;
        let obs = exec.observations;
        let mut s = BatchSummary { executions: 1, rounds_per_execution: exec.rounds, totals: obs, ..Default::default() };
        s.accepted.record(exec.accepted);
        s.fully_identified.record(obs.fully_identified_rounds > 0);
        s.lie_escapes = BinomialCount::new(obs.lying_rounds_accepted, obs.lying_rounds);
        Ok(s)
    };
    let run = || {
        (0..executions)
            .into_par_iter()
            .map(one)
            .try_reduce(BatchSummary::default, |a, b| Ok(a.merge(b)))
    };
    match threads {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
    }
}
