//! Acceptance criteria 1 to 12. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use codexgraph::citations::{extract_all, extract_references, resolve};
use codexgraph::communities::{
    cluster, detect_communities, laplacian_spectrum, spectral_embedding, KChoice, SpectralConfig,
};
use codexgraph::graph::{build_graph, components, greatest_component, Graph};
use codexgraph::metrics::{
    betweenness, characteristic_path_length, clustering_coefficient, degree_distribution,
    density_from_counts, random_baseline, rich_club_check, sample_gnm, small_world_verdict,
    FitWindow, LowDegreePolicy, SmallWorldThresholds,
};
use codexgraph::pipeline::{run_pipeline, PipelineConfig};
use common::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        // Negated so that NaN fails.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn connected_sample(n: usize, m: usize, seed: u64) -> Graph {
    greatest_component(&sample_gnm(n, m, seed).unwrap()).unwrap()
}

fn c1_density() -> Outcome {
    let d = density_from_counts(980, 2186).map_err(|e| e.to_string())?;
    // 2m / (n (n - 1)) = 4372 / 959420 = 1093 / 239855
    ensure!(d == 4372.0 / 959_420.0, "density {d} is not 4372/959420");
    ensure!(d == 1093.0 / 239_855.0, "density {d} is not 1093/239855");
    ensure!(
        (d * 10_000.0).round() / 10_000.0 == 0.0046,
        "{d} does not round to 0.0046"
    );
    Ok(format!("density = 1093/239855 = {d:.7} -> 0.0046"))
}

fn c2_baseline() -> Outcome {
    let b = random_baseline(980, 2186, 30, 20_090_327).map_err(|e| e.to_string())?;
    let c_err = (b.c_mean - 0.0046).abs() / 0.0046;
    ensure!(
        c_err <= 0.25,
        "C_mean {} is {:.1}% from 0.0046",
        b.c_mean,
        100.0 * c_err
    );
    ensure!(
        (4.2..=5.0).contains(&b.l_mean),
        "L_mean {} outside [4.2, 5.0]",
        b.l_mean
    );
    Ok(format!(
        "L_mean = {:.4} (sd {:.4}), C_mean = {:.5} (sd {:.5})",
        b.l_mean, b.l_sd, b.c_mean, b.c_sd
    ))
}

fn c3_small_world() -> Outcome {
    let v = small_world_verdict(6.78, 0.49, 4.61, 0.0046, SmallWorldThresholds::default());
    ensure!(v.is_small_world, "verdict is false");
    ensure!(v.l_ratio <= 1.5, "L ratio {}", v.l_ratio);
    ensure!(v.c_ratio >= 100.0, "C ratio {}", v.c_ratio);
    Ok(format!(
        "L ratio {:.4}, C ratio {:.2}",
        v.l_ratio, v.c_ratio
    ))
}

fn c4_betweenness() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let n = 5 + (seed as usize * 13) % 36;
        let m = (n * (2 + seed as usize % 3)).min(n * (n - 1) / 2);
        let g = sample_gnm(n, m, seed).unwrap();
        let fast = betweenness(&g);
        for (v, want) in brute_betweenness(&g).into_iter().enumerate() {
            let err = (fast.get(v) - want).abs();
            worst = worst.max(err);
            ensure!(
                err <= 1e-9,
                "seed {seed} vertex {v}: {} vs {want}",
                fast.get(v)
            );
        }
    }
    Ok(format!("50 graphs, max error {worst:.1e}"))
}

fn c5_paths() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let n = 20 + (seed as usize * 37) % 181;
        let g = connected_sample(n, 2 * n, seed);
        let l = characteristic_path_length(&g).map_err(|e| e.to_string())?;
        let c = clustering_coefficient(&g, LowDegreePolicy::Exclude).map_err(|e| e.to_string())?;
        let (bl, bc) = (brute_path_length(&g), brute_clustering(&g).unwrap_or(0.0));
        worst = worst.max((l - bl).abs()).max((c - bc).abs());
        ensure!((l - bl).abs() <= 1e-12, "seed {seed}: L {l} vs {bl}");
        ensure!((c - bc).abs() <= 1e-12, "seed {seed}: C {c} vs {bc}");
    }
    let p = petersen();
    let l = characteristic_path_length(&p).unwrap();
    let c = clustering_coefficient(&p, LowDegreePolicy::Exclude).unwrap();
    ensure!((l - 5.0 / 3.0).abs() <= 1e-9, "Petersen L = {l}");
    ensure!(c == 0.0, "Petersen C = {c}");
    Ok(format!(
        "50 graphs, max error {worst:.1e}; Petersen L = {l:.9}, C = {c}"
    ))
}

fn c6_rich_club() -> Outcome {
    let mut edges: Vec<_> = (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .collect();
    edges.extend((0..5).map(|i| (i, 5 + i)));
    let k5 = Graph::from_edges(10, &edges).unwrap();
    let club = rich_club_check(&k5, 5, 0.5).map_err(|e| e.to_string())?;
    ensure!(
        club.internal_density == 1.0 && club.is_rich_club,
        "K5 club {club:?}"
    );
    let c = minicode();
    let core = greatest_component(&build_graph(&c, &extract_all(&c)).unwrap()).unwrap();
    let club = rich_club_check(&core, 8, 0.5).map_err(|e| e.to_string())?;
    ensure!(
        club.internal_edges == 0 && !club.is_rich_club,
        "fixture club {club:?}"
    );
    Ok("K5+pendants density 1 / true; fixture top 8 internal edges 0 / false".into())
}

fn c7_recovery() -> Outcome {
    let mut agreements = Vec::new();
    for seed in 0..5 {
        let (a, _) = planted_agreement(seed, KChoice::Auto);
        ensure!(a >= 0.95, "seed {seed}: agreement {a}");
        agreements.push(format!("{a:.3}"));
    }
    for c in 2..=6 {
        for size in [3, 7, 12] {
            let g = disjoint_cliques(c, size);
            let e = spectral_embedding(&g, c, false).map_err(|e| e.to_string())?;
            let labels = cluster(&e, c, &SpectralConfig::default()).map_err(|e| e.to_string())?;
            for v in 0..g.n() {
                for w in 0..g.n() {
                    ensure!(
                        (labels[v] == labels[w]) == (v / size == w / size),
                        "{c} cliques of {size}: vertices {v}, {w} misassigned"
                    );
                }
            }
        }
    }
    Ok(format!(
        "planted agreement [{}]; cliques c = 2..6 exact",
        agreements.join(", ")
    ))
}

fn c8_laplacian() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let (n1, n2) = (10 + seed as usize % 7, 8 + seed as usize % 5);
        let a = sample_gnm(n1, n1 + 2, seed).unwrap();
        let b = sample_gnm(n2, n2, seed + 100).unwrap();
        let mut edges: Vec<_> = a.edges().map(|(u, v, _)| (u, v)).collect();
        edges.extend(b.edges().map(|(u, v, _)| (u + n1, v + n1)));
        let g = Graph::from_edges(n1 + n2, &edges).unwrap();
        let s = laplacian_spectrum(&g, false).map_err(|e| e.to_string())?;
        let core = g.induced_subgraph(&s.vertices).unwrap();
        let expected = components(&core).count();
        ensure!(expected >= 2, "seed {seed}: sample is connected");
        let zeros = s.eigenvalues.iter().filter(|l| l.abs() < 1e-8).count();
        ensure!(
            zeros == expected,
            "seed {seed}: {zeros} zero eigenvalues, {expected} components"
        );
        ensure!(
            s.eigenvalues.iter().all(|&l| l <= 2.0 + 1e-9),
            "seed {seed}: eigenvalue above 2"
        );
        let e = s.embedding(s.vertices.len()).map_err(|e| e.to_string())?;
        let r = e.residuals.iter().copied().fold(0.0, f64::max);
        worst = worst.max(r);
        ensure!(r <= 1e-8, "seed {seed}: residual {r}");
    }
    Ok(format!("20 disconnected graphs, max residual {worst:.1e}"))
}

fn c9_central_removal() -> Outcome {
    // Two 6-cliques whose only connection is vertex 12.
    let mut edges = Vec::new();
    for base in [0, 6] {
        for i in 0..6 {
            for j in i + 1..6 {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.extend([(12, 0), (12, 1), (12, 6), (12, 7)]);
    let g = Graph::from_edges(13, &edges).unwrap();
    let config = SpectralConfig {
        centrals_removed: 1,
        ..SpectralConfig::default()
    };
    let d = detect_communities(&g, &betweenness(&g), &config).map_err(|e| e.to_string())?;
    let p = &d.partition;
    ensure!(
        p.communities.len() == 2,
        "{} communities",
        p.communities.len()
    );
    ensure!(
        p.central_vertices.len() == 1 && p.central_vertices[0].vertex == "v12",
        "central {:?}",
        p.central_vertices
    );
    ensure!(
        p.central_vertices[0].adjacent_communities == [0, 1],
        "annotation {:?}",
        p.central_vertices[0]
    );
    let sides: BTreeSet<Vec<String>> = p.communities.iter().map(|c| c.members.clone()).collect();
    let want: BTreeSet<Vec<String>> = [(0..6), (6..12)]
        .into_iter()
        .map(|r| r.map(|v| format!("v{v:02}")).collect())
        .collect();
    ensure!(sides == want, "communities {sides:?}");
    Ok("2 communities, central annotated with both".into())
}

fn c10_citations() -> Outcome {
    let c = minicode();
    let targets = |id: &str| -> Result<BTreeSet<String>, String> {
        let text = c
            .get(id)
            .and_then(|n| n.text.clone())
            .ok_or(format!("{id} missing"))?;
        let r = resolve(&c, id, &extract_references(&text)).map_err(|e| e.to_string())?;
        Ok(r.resolved.into_iter().map(|x| x.target).collect())
    };
    let a = targets("L211-3")?;
    let b = targets("L222-4")?;
    ensure!(
        a == ["L211-1", "L211-2"].map(String::from).into(),
        "L211-3 -> {a:?}"
    );
    ensure!(
        b == ["L222-1", "book:1/title:3/chapter:3"]
            .map(String::from)
            .into(),
        "L222-4 -> {b:?}"
    );
    let report = extract_all(&c);
    ensure!(
        report.external_dropped.len() == 6,
        "{} external",
        report.external_dropped.len()
    );
    Ok(format!(
        "{a:?}, {b:?}; {} external references dropped",
        report.external_dropped.len()
    ))
}

fn c11_determinism() -> Outcome {
    let config: PipelineConfig =
        serde_json::from_str(&std::fs::read_to_string(fixture("minicode_config.json")).unwrap())
            .unwrap();
    let golden =
        std::fs::read_to_string(golden("minicode_report.json")).map_err(|e| e.to_string())?;
    let corpus = minicode();
    for (run, threads) in [(1, 1), (2, 1), (3, 4)] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let report = pool
            .install(|| run_pipeline(&corpus, &config))
            .map_err(|e| e.to_string())?;
        ensure!(
            report.to_json() == golden,
            "run {run} on {threads} threads differs from golden"
        );
    }
    Ok("3 runs (1, 1, 4 threads) byte-identical to golden".into())
}

fn c12_cumulative() -> Outcome {
    fn check(g: &Graph) -> Result<(), String> {
        let d = degree_distribution(g, FitWindow::default()).map_err(|e| e.to_string())?;
        ensure!(
            d.points[0].cum_prob == 1.0,
            "P(>= min degree) = {}",
            d.points[0].cum_prob
        );
        ensure!(
            d.points.windows(2).all(|w| w[1].cum_prob <= w[0].cum_prob),
            "cum_prob increases"
        );
        Ok(())
    }
    let c = minicode();
    let full = build_graph(&c, &extract_all(&c)).unwrap();
    for g in [
        greatest_component(&full).unwrap(),
        full,
        petersen(),
        disjoint_cliques(3, 4),
    ] {
        check(&g)?;
    }
    let mut runner = TestRunner::new(Config {
        cases: 50,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(
            &(2usize..120, 0usize..400, proptest::num::u64::ANY),
            |(n, m, seed)| {
                let g = sample_gnm(n, m.min(n * (n - 1) / 2), seed).unwrap();
                check(&g).map_err(proptest::test_runner::TestCaseError::fail)
            },
        )
        .map_err(|e| e.to_string())?;
    Ok("4 fixtures and 50 random graphs".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("density formula", c1_density, Duration::from_secs(1)),
        (
            "G(n,m) baseline statistics",
            c2_baseline,
            Duration::from_secs(60),
        ),
        (
            "small-world verdict",
            c3_small_world,
            Duration::from_secs(1),
        ),
        (
            "betweenness oracle",
            c4_betweenness,
            Duration::from_secs(30),
        ),
        (
            "path length and clustering oracles",
            c5_paths,
            Duration::from_secs(30),
        ),
        ("rich-club semantics", c6_rich_club, Duration::from_secs(1)),
        ("spectral recovery", c7_recovery, Duration::from_secs(60)),
        ("Laplacian structure", c8_laplacian, Duration::from_secs(30)),
        (
            "central-removal protocol",
            c9_central_removal,
            Duration::from_secs(1),
        ),
        ("citation parsing", c10_citations, Duration::from_secs(1)),
        (
            "end-to-end determinism",
            c11_determinism,
            Duration::from_secs(10),
        ),
        (
            "cumulative distribution invariants",
            c12_cumulative,
            Duration::from_secs(5),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2} {name}: {detail} [{elapsed:.2?}]",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
