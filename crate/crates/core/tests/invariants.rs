//! Cross-module properties: serialization round trips, the
//! automorphism-implies-cospectral inclusion over the exhaustive small-graph
//! corpus, resolvent series consistency, and indistinguishability of
//! cospectral pairs under every diagonal entry function.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::fs;
use walkcent_core::centrality::{self, Beta};
use walkcent_core::exact;
use walkcent_core::graph::{parse_edge_list, parse_graph6, Graph, VertexPair};
use walkcent_core::hp::pow10;
use walkcent_core::miner::{mine, MineTask, Predicate};
use walkcent_core::solver;
use walkcent_core::spectral::{self, Precision};

fn corpus_path(name: &str) -> String {
    format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn load_corpus(name: &str) -> Vec<Graph> {
    fs::read_to_string(corpus_path(name))
        .expect("corpus fixture present")
        .lines()
        .map(|l| parse_graph6(l).expect("valid corpus line"))
        .collect()
}

/// The cospectral non-automorphic fixture located by the miner over the
/// exhaustive tree corpus: the 9-vertex spider with legs 1, 2, 5.
const SPIDER_125: &str = "HsO_OC@";
const SPIDER_125_PAIR: (usize, usize) = (2, 4);

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=12).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..9, any::<bool>()).prop_flat_map(|(n, directed)| {
        let pairs: Vec<(usize, usize)> = if directed {
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect()
        } else {
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
        };
        let k = pairs.len();
        (proptest::collection::vec(proptest::option::of(arb_rational()), k)).prop_map(
            move |weights| {
                let edges: Vec<(usize, usize, BigRational)> = pairs
                    .iter()
                    .zip(weights)
                    .filter_map(|(&(u, v), w)| {
                        let w = w?;
                        if u == v && !directed {
                            return None;
                        }
                        if w.is_zero() {
                            return None;
                        }
                        Some((u, v, w))
                    })
                    .collect();
                Graph::new(n, directed, edges).expect("generated edges are valid")
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        let text = g.to_edge_list();
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn adjacency_symmetry_tracks_directedness(g in arb_graph()) {
        let a = g.adjacency_matrix();
        if !g.directed() {
            prop_assert!(a.is_symmetric());
        }
        // directed graphs may be accidentally symmetric, but an undirected
        // export must always be
    }

    #[test]
    fn graph6_round_trip(n in 1usize..15, seed in any::<u64>()) {
        // pseudo-random unweighted undirected graph
        let mut edges = Vec::new();
        let mut state = seed | 1;
        for u in 0..n {
            for v in (u + 1)..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 62 & 1 == 1 {
                    edges.push((u, v, BigRational::one()));
                }
            }
        }
        let g = Graph::new(n, false, edges).unwrap();
        let enc = g.to_graph6().unwrap();
        let back = parse_graph6(&enc).unwrap();
        prop_assert_eq!(&g, &back);
        prop_assert_eq!(back.to_graph6().unwrap(), enc);
    }

    #[test]
    fn nullspace_vectors_are_in_the_kernel(rows in proptest::collection::vec(proptest::collection::vec(arb_rational(), 4), 4)) {
        let m = exact::ExactMatrix::from_rows(rows).unwrap();
        for v in exact::rational_nullspace(&m) {
            let prod = m.mul_vec(&v);
            prop_assert!(prod.iter().all(|e| e.is_zero()));
        }
    }
}

#[test]
fn automorphism_implies_cospectral_on_small_corpus() {
    for g in load_corpus("connected_n1_7.g6") {
        let n = g.n();
        if n < 2 {
            continue;
        }
        let a = g.adjacency_matrix();
        for i in 0..n {
            for j in (i + 1)..n {
                let p = VertexPair::new(i, j, n).unwrap();
                if g.automorphism_maps(p).unwrap() {
                    assert!(
                        exact::cospectral(&a, p),
                        "automorphic pair must be cospectral: {} ({i},{j})",
                        g.to_graph6().unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn walk_regular_means_every_pair_cospectral() {
    for g in load_corpus("connected_n1_7.g6") {
        let a = g.adjacency_matrix();
        if !exact::walk_regular(&a) {
            continue;
        }
        let n = g.n();
        for i in 0..n {
            for j in (i + 1)..n {
                assert!(exact::cospectral(&a, VertexPair::new(i, j, n).unwrap()));
            }
        }
    }
}

#[test]
fn walk_regular_census_over_small_corpus() {
    // frozen from the exhaustive run; matches the vertex-transitive counts
    // at these orders (5 at n = 6: cycle, complete, complete bipartite,
    // prism, octahedron; 3 at n = 7)
    let mut per_n = [0usize; 8];
    for g in load_corpus("connected_n1_7.g6") {
        if exact::walk_regular(&g.adjacency_matrix()) {
            per_n[g.n()] += 1;
        }
    }
    assert_eq!(per_n[1..], [1, 1, 1, 2, 2, 5, 3]);
}

#[test]
fn resolvent_diagonal_matches_walk_series() {
    // diag((I - alpha A)^-1) = sum_r alpha^r [A^r]_ii, truncated at 60 terms
    let p50 = Precision::new(50).unwrap();
    let alpha = BigRational::new(BigInt::one(), BigInt::from(4));
    let tol = BigRational::new(BigInt::one(), pow10(12));
    for text in ["0 1\n1 2", "0 1\n1 2\n0 2", "0 1\n0 2\n0 3", "0 1\n1 2\n2 3\n0 3"] {
        let a = parse_edge_list(text).unwrap().adjacency_matrix();
        let report = centrality::resolvent_centrality(&a, &alpha, p50).unwrap();
        let exact_diag = report.exact_values.as_ref().unwrap();
        let walks = exact::walk_counts(&a, 60);
        for v in 0..a.n() {
            let mut acc = BigRational::one();
            let mut ap = BigRational::one();
            for r in 1..=60 {
                ap *= &alpha;
                acc += &ap * walks.count(v, r);
            }
            let diff = (&exact_diag[v] - acc).abs();
            assert!(diff < tol, "{text} v={v}: {diff}");
        }
    }
}

#[test]
fn spider_fixture_is_cospectral_but_not_automorphic() {
    let g = parse_graph6(SPIDER_125).unwrap();
    assert_eq!(g.n(), 9);
    let p = VertexPair::new(SPIDER_125_PAIR.0, SPIDER_125_PAIR.1, 9).unwrap();
    let a = g.adjacency_matrix();
    assert!(exact::cospectral(&a, p));
    assert!(!g.automorphism_maps(p).unwrap());
}

#[test]
fn cospectral_pair_indistinguishable_by_every_diagonal_entry_function() {
    let p50 = Precision::new(50).unwrap();
    let g = parse_graph6(SPIDER_125).unwrap();
    let a = g.adjacency_matrix();
    let p = VertexPair::new(SPIDER_125_PAIR.0, SPIDER_125_PAIR.1, 9).unwrap();

    let sd = spectral::decompose(&a, p50).unwrap();
    for beta in [
        BigRational::new(BigInt::one(), BigInt::from(2)),
        BigRational::one(),
        BigRational::from(BigInt::from(2)),
    ] {
        let taylor = centrality::subgraph_centrality_taylor(&a, &beta, p50).unwrap();
        assert!(taylor.same_class(p), "taylor beta={beta}");
        let spec = centrality::subgraph_centrality_spectral(
            &sd,
            &Beta::rational(beta.clone()).unwrap(),
            p50,
        )
        .unwrap();
        assert!(spec.same_class(p), "spectral beta={beta}");
    }
    let resolvent = centrality::resolvent_centrality(
        &a,
        &BigRational::new(BigInt::one(), BigInt::from(4)),
        p50,
    )
    .unwrap();
    let exact_diag = resolvent.exact_values.as_ref().unwrap();
    assert_eq!(exact_diag[p.i], exact_diag[p.j]);

    let deg = centrality::degree_centrality(&a).unwrap();
    assert_eq!(deg[p.i], deg[p.j]);

    let perron = spectral::perron_vector(&a, p50).unwrap();
    let diff = perron[p.i].sub(&perron[p.j]).abs();
    let tol = BigRational::new(BigInt::one(), pow10(40));
    assert!(diff.to_rational() < tol);

    // projector diagonals agree coordinate-wise as well
    for h in 0..sd.distinct_count() {
        let d = sd.coefficient(h, p.i).sub(sd.coefficient(h, p.j)).abs();
        assert!(d.to_rational() < p50.eps_w(), "h={h}");
    }

    // and the solver sees the pair as degenerate
    let df = solver::build_diff(&sd, &a, p).unwrap();
    assert!(df.is_degenerate());
}

#[test]
fn diff_deltas_sum_to_zero_across_corpus_sample() {
    let p50 = Precision::new(50).unwrap();
    let graphs = load_corpus("connected_n1_7.g6");
    for g in graphs.iter().step_by(97) {
        if g.n() < 3 {
            continue;
        }
        let a = g.adjacency_matrix();
        let sd = spectral::decompose(&a, p50).unwrap();
        let p = VertexPair::new(0, 1, g.n()).unwrap();
        let Ok(df) = solver::build_diff(&sd, &a, p) else {
            continue;
        };
        let sum: BigRational = df.deltas().iter().map(|d| d.to_rational()).sum();
        assert!(sum.abs() < p50.eps_w(), "{}", g.to_graph6().unwrap());
    }
}

/// Crossing fixture from the exhaustive n <= 7 sweep.
const CROSSING_FIXTURE: &str = "Eja?";

#[test]
fn pair_becomes_equivalent_exactly_at_the_located_root() {
    // end to end: refine the equalizing beta of the fixture pair, then
    // evaluate the spectral backend at that (non-exact) beta and observe
    // the pair land in one class while staying non-cospectral
    let p50 = Precision::new(50).unwrap();
    let g = parse_graph6(CROSSING_FIXTURE).unwrap();
    let a = g.adjacency_matrix();
    let pair = VertexPair::new(0, 2, g.n()).unwrap();
    assert!(!exact::cospectral(&a, pair));

    let sd = spectral::decompose(&a, p50).unwrap();
    let df = solver::build_diff(&sd, &a, pair).unwrap();
    let scan = solver::scan_roots(&df, &solver::ScanOptions::default()).unwrap();
    assert_eq!(scan.brackets.len(), 1);
    let root = solver::refine_root(&df, scan.brackets[0].clone(), p50).unwrap();

    let ctx = walkcent_core::hp::HpCtx::new(sd.scale());
    let beta = Beta::real(ctx.from_rational(&root.midpoint())).unwrap();
    let report = centrality::subgraph_centrality_spectral(&sd, &beta, p50).unwrap();
    assert!(report.same_class(pair));
    assert!(!beta.is_exact());
}

#[test]
fn scan_bracket_count_stable_under_precision_doubling_on_fixture() {
    let g = parse_graph6(CROSSING_FIXTURE).unwrap();
    let a = g.adjacency_matrix();
    let pair = VertexPair::new(0, 2, g.n()).unwrap();
    let mut counts = Vec::new();
    for digits in [50u32, 100] {
        let prec = Precision::new(digits).unwrap();
        let sd = spectral::decompose(&a, prec).unwrap();
        let df = solver::build_diff(&sd, &a, pair).unwrap();
        let scan = solver::scan_roots(&df, &solver::ScanOptions::default()).unwrap();
        counts.push(scan.brackets.len());
    }
    assert_eq!(counts[0], counts[1]);
    assert_eq!(counts[0], 1);
}

#[test]
fn miner_filters_never_reject_real_findings() {
    // n <= 6 slice of the corpus, filters on vs off
    let text = fs::read_to_string(corpus_path("connected_n1_7.g6")).unwrap();
    let small: String = text
        .lines()
        .filter(|l| !l.is_empty() && (l.as_bytes()[0] as usize) - 63 <= 6)
        .map(|l| format!("{l}\n"))
        .collect();
    let p50 = Precision::new(50).unwrap();
    let mut with_filters = MineTask::new(
        vec![Predicate::CospectralNonAuto, Predicate::WalkRegular],
        p50,
    )
    .unwrap();
    with_filters.workers = 2;
    let mut without_filters = with_filters.clone();
    without_filters.use_filters = false;
    let a = mine(&with_filters, std::io::Cursor::new(small.as_bytes())).unwrap();
    let b = mine(&without_filters, std::io::Cursor::new(small.as_bytes())).unwrap();
    assert_eq!(a.findings, b.findings);
}
