//! Closed forms from `analysis` checked against simulation.

use qzk::analysis::{
    analytic_escape, analytic_pb, hiding_probability, hiding_probability_for_coloring, round_cheat_probability,
    round_cheat_probability_with_bad,
};
use qzk::graph::{brute_force_3color, Graph};
use qzk::optics::{protocol_state, Apparatus, ApparatusParams};
use qzk::protocol::{
    run_batch, CheatingProver, CuriousVerifier, EscapeMode, HonestProver, HonestVerifier, ProtocolConfig,
};
use qzk::qbc::{discriminate_unaided, verify_unveil, Claim, VerificationPolicy};
use qzk::stats::BinomialCount;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_forms_match_sampling_for_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..5 {
        let w0 = rng.gen_range(0.2..0.5);
        let w1 = rng.gen_range(0.2..0.4);
        let params = ApparatusParams {
            phi: rng.gen_range(0.0..1.0),
            theta: rng.gen_range(0.1..0.6),
            mean_photon: rng.gen_range(5.0..40.0),
            branch_weights: [w0, w1, 1.0 - w0 - w1],
            efficiency: rng.gen_range(0.5..1.0),
            dark_rate: 0.0,
        };
        let app = Apparatus::new(params).unwrap();
        let pb = analytic_pb(&params).unwrap();
        let escape = analytic_escape(0, 1, &params).unwrap();
        let (mut found, mut escaped) = (BinomialCount::default(), BinomialCount::default());
        for i in 0..1_000_000u32 {
            let j = (i % 3) as usize;
            let rec = app.measure(protocol_state(j, &params).unwrap(), &mut rng);
            found.record(discriminate_unaided(&rec).is_some());
            if j == 0 {
                escaped.record(verify_unveil(Claim::new(1).unwrap(), &rec, VerificationPolicy::ImpossibilityOnly).is_accept());
            }
        }
        // Committed states cycle deterministically, which only lowers the
        // variance below the binomial bound.
        assert!(found.within_sigmas(pb, 3.0), "{params:?}: z = {}", found.z_score(pb));
        assert!(escaped.within_sigmas(escape, 3.0), "{params:?}: z = {}", escaped.z_score(escape));
    }
}

#[test]
fn cheating_prover_escape_matches_closed_form() {
    let g = Graph::complete(4);
    let prover = CheatingProver::new(&g).unwrap();
    let cfg = ProtocolConfig { seed: 31, ..Default::default() };
    let s = run_batch(&g, &prover, &HonestVerifier::default(), &cfg, 20_000, None).unwrap();
    let p = ApparatusParams::default();
    let escape = CheatingProver::predicted_escape(&p).unwrap();
    assert!(s.lie_escapes.within_sigmas(escape, 3.0), "z = {}", s.lie_escapes.z_score(escape));
    let predicted = round_cheat_probability(6, escape).unwrap().powi(36);
    assert!(s.accepted.within_sigmas(predicted, 3.0), "z = {}", s.accepted.z_score(predicted));
}

#[test]
fn wheel_soundness_follows_bad_edge_count() {
    let g = Graph::wheel(5);
    let prover = CheatingProver::new(&g).unwrap();
    let bad = prover.bad_edges().len() as u64;
    let cfg = ProtocolConfig {
        rounds: Some(20),
        seed: 32,
        escape_mode: EscapeMode::Synthetic { p_escape: 0.4 },
        ..Default::default()
    };
    let s = run_batch(&g, &prover, &HonestVerifier::default(), &cfg, 50_000, None).unwrap();
    let predicted = round_cheat_probability_with_bad(10, bad, 0.4).unwrap().powi(20);
    assert!(s.accepted.within_sigmas(predicted, 3.0), "z = {}", s.accepted.z_score(predicted));
}

#[test]
fn single_vertex_hiding_is_pb() {
    let g = Graph::new(1, []).unwrap();
    let prover = HonestProver::new(&g, brute_force_3color(&g).unwrap().unwrap()).unwrap();
    let cfg = ProtocolConfig { rounds: Some(1), seed: 33, ..Default::default() };
    let s = run_batch(&g, &prover, &CuriousVerifier::default(), &cfg, 200_000, None).unwrap();
    let pb = analytic_pb(&cfg.params).unwrap();
    assert!(s.fully_identified.within_sigmas(pb, 3.0), "z = {}", s.fully_identified.z_score(pb));
    assert_eq!(s.totals.wrong_identifications, 0);
}

#[test]
fn path_hiding_matches_coloring_aware_formula() {
    // On a 3-vertex path the coloring BRB fixes multiplicities (2, 1, 0).
    let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let c = brute_force_3color(&g).unwrap().unwrap();
    let prover = HonestProver::new(&g, c.clone()).unwrap();
    let cfg = ProtocolConfig { seed: 34, ..Default::default() };
    let s = run_batch(&g, &prover, &CuriousVerifier::default(), &cfg, 100_000, None).unwrap();
    let exact = hiding_probability_for_coloring(&c, &cfg.params, 4).unwrap();
    assert!(s.fully_identified.within_sigmas(exact, 3.0), "z = {}", s.fully_identified.z_score(exact));
    let naive = hiding_probability(3, analytic_pb(&cfg.params).unwrap(), 4).unwrap();
    assert!((naive - exact).abs() > 1e-4);
}
