use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vmlab::gfourier::{delta_distribution_exact, tv_to_uniform};
use vmlab::harness::{random_lc_instance, run_experiment, Experiment, ExperimentConfig};
use vmlab::lcdelta::{delta_via_m, sequential_delta};
use vmlab::vminor::{is_vertex_minor, Verdict, DEFAULT_CAP};
use vmlab::Graph;

#[test]
fn graph6_round_trip_feeds_the_minor_check() {
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let parsed = Graph::from_graph6(&g.to_graph6()).unwrap();
    assert_eq!(parsed, g);
    // Complementing at 1 joins its ends.
    let h = Graph::from_edges(2, &[(0, 1)]).relabeled(vec![0, 2]).unwrap();
    let d = is_vertex_minor(&parsed, &h, DEFAULT_CAP).unwrap();
    assert_eq!(d.verdict, Verdict::True);
}

#[test]
fn exact_delta_law_matches_its_sampled_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let inst = random_lc_instance(6, 0.4, Some(3), &mut rng).unwrap();
    assert_eq!(delta_via_m(&inst).delta, sequential_delta(&inst));
    let law = delta_distribution_exact(&inst, &inst.w_graph(), 0.4).unwrap();
    let total: f64 = law.probs().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!((0.0..=1.0).contains(&tv_to_uniform(&law)));
}

#[test]
fn jsonl_records_parse_back() {
    let mut cfg = ExperimentConfig::new(Experiment::PivotPairs);
    cfg.trials = 5;
    cfg.rows = Some(9);
    let report = run_experiment(&cfg).unwrap();
    let lines: Vec<serde_json::Value> = report
        .to_jsonl()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    for (i, v) in lines.iter().enumerate() {
        assert_eq!(v["trial"], i as u64);
        assert_eq!(v["verdicts"]["certified"], true);
    }
}
