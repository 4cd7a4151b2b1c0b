//! Invariants over randomly generated inputs.

mod common;

use codexgraph::communities::{detect_communities, laplacian_spectrum, SpectralConfig};
use codexgraph::corpus::Corpus;
use codexgraph::graph::{components, Graph};
use codexgraph::metrics::{betweenness, degree_distribution, sample_gnm, FitWindow};
use codexgraph::pipeline::build_stage;
use codexgraph::pipeline::{communities_stage, PipelineConfig};
use codexgraph::synth::{synth_corpus, SynthSpec};
use proptest::prelude::*;

fn gnm() -> impl Strategy<Value = Graph> {
    (2usize..40, any::<u64>()).prop_flat_map(|(n, seed)| {
        (0..=n * (n - 1) / 2).prop_map(move |m| sample_gnm(n, m, seed).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cumulative_distribution_is_monotone(g in gnm()) {
        let d = degree_distribution(&g, FitWindow::default()).unwrap();
        prop_assert_eq!(d.points[0].cum_prob, 1.0);
        for w in d.points.windows(2) {
            prop_assert!(w[1].cum_prob <= w[0].cum_prob);
        }
        prop_assert_eq!(d.points.iter().map(|p| p.count).sum::<usize>(), g.n());
    }

    #[test]
    fn laplacian_spectrum_structure(g in gnm()) {
        let s = laplacian_spectrum(&g, false).unwrap();
        let core = g.induced_subgraph(&s.vertices).unwrap();
        let zeros = s.eigenvalues.iter().filter(|&&l| l.abs() < 1e-8).count();
        if core.n() > 0 {
            prop_assert_eq!(zeros, components(&core).count());
        }
        for &l in &s.eigenvalues {
            prop_assert!((-1e-9..=2.0 + 1e-9).contains(&l), "eigenvalue {}", l);
        }
        if !s.vertices.is_empty() {
            let e = s.embedding(s.vertices.len().min(4)).unwrap();
            prop_assert!(e.residuals.iter().all(|&r| r <= 1e-8));
        }
    }

    #[test]
    fn partition_covers_non_centrals(g in gnm(), centrals in 0usize..4) {
        let centrals = centrals.min(g.n());
        let config = SpectralConfig { centrals_removed: centrals, kmeans_restarts: 3, ..SpectralConfig::default() };
        let d = detect_communities(&g, &betweenness(&g), &config).unwrap();
        let p = &d.partition;
        prop_assert_eq!(p.communities.iter().map(|c| c.size).sum::<usize>(), g.n() - centrals);
        prop_assert_eq!(p.assignment.len(), g.n() - centrals);
        prop_assert_eq!(p.central_vertices.len(), centrals);
        for c in &p.communities {
            for m in &c.members {
                prop_assert_eq!(p.assignment[m], c.id);
            }
        }
        for w in p.communities.windows(2) {
            prop_assert!(w[0].size >= w[1].size);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn book_fractions_sum_to_one(books in 1usize..5, chapters in 1usize..3, seed in any::<u64>()) {
        let spec = SynthSpec { books, chapters_per_book: chapters, articles_per_chapter: 6, p_in: 0.5, p_out: 0.05, seed, ..SynthSpec::default() };
        let corpus = Corpus::from_value(&synth_corpus(&spec).unwrap().document).unwrap();
        let (_, _, core) = build_stage(&corpus).unwrap();
        prop_assume!(core.n() >= 4);
        let config = PipelineConfig { communities: SpectralConfig { centrals_removed: 1, ..SpectralConfig::default() }, ..PipelineConfig::default() };
        let d = communities_stage(&core, &corpus, &config).unwrap();
        for c in &d.partition.communities {
            let p = c.profile.as_ref().unwrap();
            prop_assert!((p.book_fractions.values().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert_eq!(p.colored, p.dominant_fraction > 0.75);
        }
    }

    #[test]
    fn config_echo_changes_with_every_field(field in 0usize..14, bump in 1u64..1000) {
        let base = PipelineConfig::default();
        let mut c = base.clone();
        let b = bump as usize;
        match field {
            0 => c.seed += bump,
            1 => c.baseline_samples += b,
            2 => c.low_degree_policy = codexgraph::metrics::LowDegreePolicy::Zero,
            3 => c.small_world.l_ratio_max += bump as f64,
            4 => c.small_world.c_ratio_min += bump as f64,
            5 => c.fit_window.k_min += b,
            6 => c.fit_window.k_max = Some(b),
            7 => c.table_size += b,
            8 => c.rich_club_k += b,
            9 => c.rich_club_threshold += bump as f64,
            10 => c.communities.centrals_removed += b,
            11 => c.communities.k = codexgraph::communities::KChoice::Fixed(b + 1),
            12 => c.communities.eigengap_max_k += b,
            _ => c.communities.weighted = true,
        }
        prop_assert_ne!(base.hash(), c.hash());
        prop_assert_ne!(serde_json::to_string(&base).unwrap(), serde_json::to_string(&c).unwrap());
    }
}

#[test]
fn kmeans_restart_count_is_echoed() {
    let mut c = PipelineConfig::default();
    let h = c.hash();
    c.communities.kmeans_restarts += 1;
    assert_ne!(h, c.hash());
}
