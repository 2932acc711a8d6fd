use dbr_core::characterize::oracle::oracle;
use dbr_core::characterize::{classify, locally_distance_regular, Classification, Outcome, Route};
use dbr_core::corpus::{random_connected, standard_corpus};
use dbr_core::graph::{bipartition, to_edge_list};
use dbr_core::{distance_data, generate, parse_edge_list, FamilySpec, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn corpus_classifications_follow_the_oracle() {
    for spec in standard_corpus() {
        let g = generate(&spec).unwrap();
        let report = classify(&g, DEFAULT_TOL).unwrap_or_else(|e| panic!("{spec}: {e}"));
        let dd = distance_data(&g);
        let truth = oracle(&g, &dd, bipartition(&g).ok().as_ref());
        assert_eq!(report.classification, Classification::from_flags(truth.drg, truth.dbrg), "{spec}");
    }
}

#[test]
fn random_graphs_classify_without_disagreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut seen = [0usize; 4];
    for _ in 0..300 {
        let n = rng.random_range(2..=12);
        let p = rng.random_range(0.15..=0.7);
        let g = random_connected(n, p, &mut rng);
        let report = classify(&g, DEFAULT_TOL).unwrap_or_else(|e| panic!("{}: {e}", to_edge_list(&g)));
        seen[report.classification as usize] += 1;
        // Every vertex verdict is applicable.
        let vertex = report.verdicts.iter().filter(|v| v.theorem == Route::PseudoVertex);
        assert_eq!(vertex.filter(|v| v.outcome != Outcome::NotApplicable).count(), n);
    }
    assert!(seen[Classification::Neither as usize] > 0);
}

#[test]
fn pseudo_vertex_agrees_with_plain_oracle_on_semiregular_graphs() {
    for (name, params) in [("subdivision_k4", vec![]), ("star", vec![4]), ("delorme", vec![]), ("path", vec![5])] {
        let g = generate(&FamilySpec::new(name, &params)).unwrap();
        let dd = distance_data(&g);
        let report = classify(&g, DEFAULT_TOL).unwrap();
        let semiregular = bipartition(&g).ok().and_then(|p| p.profile()).is_some() || g.regular_degree().is_some();
        for u in 0..g.n() {
            let subject = format!("vertex {u}");
            let v = report
                .verdicts
                .iter()
                .find(|v| v.theorem == Route::PseudoVertex && v.subject == subject)
                .unwrap();
            assert_eq!(v.passed(), report.oracle.weighted_locally_regular[u], "{name} {u}");
            if semiregular {
                assert_eq!(v.passed(), locally_distance_regular(&g, &dd, u).is_ok(), "{name} {u}");
            }
        }
    }
}

#[test]
fn edge_list_round_trip_preserves_classification() {
    let g = generate(&FamilySpec::new("heawood", &[])).unwrap();
    let back = parse_edge_list(&to_edge_list(&g)).unwrap();
    assert_eq!(back, g);
    assert_eq!(classify(&back, DEFAULT_TOL).unwrap().classification, Classification::Both);
}
