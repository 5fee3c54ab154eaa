//! Batch scanner over graph6 streams: catalogs cospectral non-automorphic
//! pairs, walk-regular graphs, crossing pairs, and regularity-beta
//! candidates, emitting re-verifiable findings in deterministic order.
//!
//! Graph enumeration itself is out of scope; the miner consumes streams
//! produced by standard enumeration tools. Work is distributed over line
//! chunks and merged back by input line number, so the output is identical
//! for every worker count.

use crate::exact::{self, rational_str};
use crate::graph::{self, Graph, VertexPair, AUTOMORPHISM_BUDGET};
use crate::solver::{self, ScanOptions};
use crate::spectral::{self, Precision};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::BufRead;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MineError {
    #[error("no predicates selected")]
    NoPredicates,
    #[error("n range {0}..={1} invalid or outside graph6 support")]
    BadRange(usize, usize),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("input: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Predicate {
    #[serde(rename = "cospectral-nonauto")]
    CospectralNonAuto,
    #[serde(rename = "walk-regular")]
    WalkRegular,
    #[serde(rename = "crossing-pair")]
    CrossingPair,
    #[serde(rename = "regularity-candidate")]
    RegularityCandidate,
}

impl Predicate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Predicate::CospectralNonAuto => "cospectral-nonauto",
            Predicate::WalkRegular => "walk-regular",
            Predicate::CrossingPair => "crossing-pair",
            Predicate::RegularityCandidate => "regularity-candidate",
        }
    }

    pub fn parse(s: &str) -> Option<Predicate> {
        match s {
            "cospectral-nonauto" => Some(Predicate::CospectralNonAuto),
            "walk-regular" => Some(Predicate::WalkRegular),
            "crossing-pair" => Some(Predicate::CrossingPair),
            "regularity-candidate" => Some(Predicate::RegularityCandidate),
            _ => None,
        }
    }
}

/// Scan configuration for one mining run.
#[derive(Debug, Clone)]
pub struct MineTask {
    pub predicates: Vec<Predicate>,
    pub n_range: (usize, usize),
    pub precision: Precision,
    pub workers: usize,
    pub scan: ScanOptions,
    /// When false, the cheap exact prefilters are bypassed (used by the
    /// filter-consistency check).
    pub use_filters: bool,
}

impl MineTask {
    pub fn new(predicates: Vec<Predicate>, precision: Precision) -> Result<Self, MineError> {
        if predicates.is_empty() {
            return Err(MineError::NoPredicates);
        }
        Ok(MineTask {
            predicates,
            n_range: (1, graph::GRAPH6_MAX_N),
            precision,
            workers: 1,
            scan: ScanOptions::default(),
            use_filters: true,
        })
    }
}

/// Witness payload, re-verifiable from the graph6 string alone.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum Witness {
    #[serde(rename = "cospectral-nonauto")]
    CospectralNonAuto {
        pair: (usize, usize),
        /// shared diagonal walk counts [A^r]_ii for r = 1..n-1
        walk_prefix: Vec<String>,
    },
    #[serde(rename = "walk-regular")]
    WalkRegular { walk_prefix: Vec<String> },
    #[serde(rename = "crossing-pair")]
    CrossingPair {
        pair: (usize, usize),
        lo: String,
        hi: String,
        precision: u32,
    },
    #[serde(rename = "regularity-candidate")]
    RegularityCandidate {
        beta_lo: String,
        beta_hi: String,
        precision: u32,
        small_height_probe_passed: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Finding {
    pub line: usize,
    pub graph6: String,
    pub predicate: Predicate,
    pub witness: Witness,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct MineSummary {
    pub graphs_processed: usize,
    pub graphs_skipped_range: usize,
    pub malformed_lines: Vec<(usize, String)>,
    pub counts: BTreeMap<String, usize>,
}

#[derive(Debug)]
pub struct MineOutcome {
    pub findings: Vec<Finding>,
    pub summary: MineSummary,
}

enum LineResult {
    Findings(Vec<Finding>),
    Skipped,
    Malformed(String),
}

fn cospectral_pairs(g: &Graph) -> Vec<VertexPair> {
    let n = g.n();
    if n < 2 {
        return Vec::new();
    }
    let a = g.adjacency_matrix();
    let table = exact::walk_counts(&a, n - 1);
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if table.row(i) == table.row(j) {
                out.push(VertexPair::new(i, j, n).unwrap());
            }
        }
    }
    out
}

fn walk_prefix_strings(g: &Graph, vertex: usize) -> Vec<String> {
    let n = g.n();
    if n < 2 {
        return Vec::new();
    }
    let a = g.adjacency_matrix();
    let table = exact::walk_counts(&a, n - 1);
    table.row(vertex).iter().map(rational_str).collect()
}

fn mine_one(task: &MineTask, line: usize, g6: &str) -> LineResult {
    let g = match graph::parse_graph6(g6) {
        Ok(g) => g,
        Err(e) => return LineResult::Malformed(e.to_string()),
    };
    if g.n() < task.n_range.0 || g.n() > task.n_range.1 {
        return LineResult::Skipped;
    }
    let mut findings = Vec::new();
    let degrees = g.degrees();
    let canonical = g6.trim().to_string();

    for &pred in &task.predicates {
        match pred {
            Predicate::WalkRegular => {
                if task.use_filters && degrees.windows(2).any(|w| w[0] != w[1]) {
                    continue;
                }
                let a = g.adjacency_matrix();
                if exact::walk_regular(&a) {
                    findings.push(Finding {
                        line,
                        graph6: canonical.clone(),
                        predicate: pred,
                        witness: Witness::WalkRegular {
                            walk_prefix: walk_prefix_strings(&g, 0),
                        },
                    });
                }
            }
            Predicate::CospectralNonAuto => {
                if task.use_filters {
                    let multiset = graph::degree_multiset(&g);
                    if multiset.values().all(|&c| c < 2) {
                        continue;
                    }
                }
                if g.n() > AUTOMORPHISM_BUDGET {
                    continue;
                }
                for pair in cospectral_pairs(&g) {
                    let auto = g.automorphism_maps(pair).unwrap_or(true);
                    if !auto {
                        findings.push(Finding {
                            line,
                            graph6: canonical.clone(),
                            predicate: pred,
                            witness: Witness::CospectralNonAuto {
                                pair: (pair.i, pair.j),
                                walk_prefix: walk_prefix_strings(&g, pair.i),
                            },
                        });
                    }
                }
            }
            Predicate::CrossingPair => {
                if g.n() < 2 {
                    continue;
                }
                let a = g.adjacency_matrix();
                let Ok(sd) = spectral::decompose(&a, task.precision) else {
                    continue;
                };
                for i in 0..g.n() {
                    for j in (i + 1)..g.n() {
                        let pair = VertexPair::new(i, j, g.n()).unwrap();
                        let Ok(df) = solver::build_diff(&sd, &a, pair) else {
                            continue;
                        };
                        if df.is_degenerate() {
                            continue;
                        }
                        let Ok(scan) = solver::scan_roots(&df, &task.scan) else {
                            continue;
                        };
                        let Some(bracket) = scan.brackets.first() else {
                            continue;
                        };
                        let Ok(root) = solver::refine_root(&df, bracket.clone(), task.precision)
                        else {
                            continue;
                        };
                        findings.push(Finding {
                            line,
                            graph6: canonical.clone(),
                            predicate: pred,
                            witness: Witness::CrossingPair {
                                pair: (pair.i, pair.j),
                                lo: root.lo.to_string(),
                                hi: root.hi.to_string(),
                                precision: task.precision.digits(),
                            },
                        });
                    }
                }
            }
            Predicate::RegularityCandidate => {
                if g.n() < 2 {
                    continue;
                }
                let a = g.adjacency_matrix();
                if exact::walk_regular(&a) {
                    continue;
                }
                let Ok(report) = solver::regularity_beta_search(&a, task.precision, &task.scan)
                else {
                    continue;
                };
                for cand in report.candidates {
                    findings.push(Finding {
                        line,
                        graph6: canonical.clone(),
                        predicate: pred,
                        witness: Witness::RegularityCandidate {
                            beta_lo: cand.root.lo.to_string(),
                            beta_hi: cand.root.hi.to_string(),
                            precision: task.precision.digits(),
                            small_height_probe_passed: cand.small_height_probe_passed,
                        },
                    });
                }
            }
        }
    }
    LineResult::Findings(findings)
}

/// Runs the selected predicates over a newline-delimited graph6 stream.
/// Findings come back ordered by input line; two runs over the same stream
/// with different worker counts produce identical outcomes.
pub fn mine(task: &MineTask, input: impl BufRead) -> Result<MineOutcome, MineError> {
    if task.predicates.is_empty() {
        return Err(MineError::NoPredicates);
    }
    if task.n_range.0 > task.n_range.1 || task.n_range.1 > graph::GRAPH6_MAX_N {
        return Err(MineError::BadRange(task.n_range.0, task.n_range.1));
    }
    let lines: Vec<(usize, String)> = input
        .lines()
        .enumerate()
        .map(|(k, l)| Ok((k + 1, l?)))
        .collect::<Result<_, std::io::Error>>()?;
    let lines: Vec<(usize, String)> = lines
        .into_iter()
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let workers = task.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| MineError::Pool(e.to_string()))?;
    let results: Vec<(usize, LineResult)> = pool.install(|| {
        lines
            .par_iter()
            .map(|(lineno, text)| (*lineno, mine_one(task, *lineno, text.trim())))
            .collect()
    });

    let mut findings = Vec::new();
    let mut summary = MineSummary::default();
    for &pred in &task.predicates {
        summary.counts.insert(pred.as_str().to_string(), 0);
    }
    for (lineno, res) in results {
        match res {
            LineResult::Findings(f) => {
                summary.graphs_processed += 1;
                for finding in f {
                    *summary
                        .counts
                        .get_mut(finding.predicate.as_str())
                        .expect("predicate registered") += 1;
                    findings.push(finding);
                }
            }
            LineResult::Skipped => summary.graphs_skipped_range += 1,
            LineResult::Malformed(msg) => summary.malformed_lines.push((lineno, msg)),
        }
    }
    Ok(MineOutcome { findings, summary })
}

/// Re-runs the predicate behind a finding from its graph6 string alone and
/// checks that the recorded witness is reproduced (exact equality for the
/// exact predicates, sign-change plus residual bound for beta witnesses).
pub fn verify_finding(f: &Finding) -> bool {
    let Ok(g) = graph::parse_graph6(&f.graph6) else {
        return false;
    };
    match &f.witness {
        Witness::CospectralNonAuto { pair, walk_prefix } => {
            let n = g.n();
            let Ok(p) = VertexPair::new(pair.0, pair.1, n) else {
                return false;
            };
            let a = g.adjacency_matrix();
            if !exact::cospectral(&a, p) {
                return false;
            }
            match g.automorphism_maps(p) {
                Ok(false) => {}
                _ => return false,
            }
            walk_prefix_strings(&g, p.i) == *walk_prefix
        }
        Witness::WalkRegular { walk_prefix } => {
            let a = g.adjacency_matrix();
            exact::walk_regular(&a) && walk_prefix_strings(&g, 0) == *walk_prefix
        }
        Witness::CrossingPair {
            pair,
            lo,
            hi,
            precision,
        } => {
            let Ok(p) = VertexPair::new(pair.0, pair.1, g.n()) else {
                return false;
            };
            let (Ok(lo), Ok(hi)) = (lo.parse(), hi.parse()) else {
                return false;
            };
            let Ok(prec) = Precision::new(*precision) else {
                return false;
            };
            verify_beta_root(&g, p, &lo, &hi, prec)
        }
        Witness::RegularityCandidate {
            beta_lo,
            beta_hi,
            precision,
            small_height_probe_passed,
        } => {
            let (Ok(lo), Ok(hi)) = (beta_lo.parse(), beta_hi.parse()) else {
                return false;
            };
            let Ok(prec) = Precision::new(*precision) else {
                return false;
            };
            verify_regularity(&g, &lo, &hi, prec, *small_height_probe_passed)
        }
    }
}

fn verify_beta_root(
    g: &Graph,
    pair: VertexPair,
    lo: &num_rational::BigRational,
    hi: &num_rational::BigRational,
    prec: Precision,
) -> bool {
    use num_traits::Signed;
    let a = g.adjacency_matrix();
    let Ok(sd) = spectral::decompose(&a, prec) else {
        return false;
    };
    let Ok(df) = solver::build_diff(&sd, &a, pair) else {
        return false;
    };
    if df.is_degenerate() {
        return false;
    }
    let ctx = df.eval_ctx(hi);
    let g_lo = df.eval_rational(&ctx, lo);
    let g_hi = df.eval_rational(&ctx, hi);
    if g_lo.signum() == 0 || g_hi.signum() == 0 || g_lo.signum() == g_hi.signum() {
        return false;
    }
    let mid = (lo + hi) / num_rational::BigRational::from(num_bigint::BigInt::from(2));
    let residual = df.eval_rational(&ctx, &mid).abs();
    let bound = num_rational::BigRational::new(
        num_bigint::BigInt::from(1),
        crate::hp::pow10(prec.digits() - 20),
    );
    residual.to_rational().abs() < bound
}

fn verify_regularity(
    g: &Graph,
    lo: &num_rational::BigRational,
    hi: &num_rational::BigRational,
    prec: Precision,
    probe_recorded: bool,
) -> bool {
    let a = g.adjacency_matrix();
    if exact::walk_regular(&a) {
        return false;
    }
    let Ok(sd) = spectral::decompose(&a, prec) else {
        return false;
    };
    let beta = (lo + hi) / num_rational::BigRational::from(num_bigint::BigInt::from(2));
    let bound = num_rational::BigRational::new(
        num_bigint::BigInt::from(1),
        crate::hp::pow10(prec.digits() - 20),
    );
    let n = g.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let pair = VertexPair::new(i, j, n).unwrap();
            let Ok(df) = solver::build_diff(&sd, &a, pair) else {
                return false;
            };
            if df.is_degenerate() {
                continue;
            }
            let ctx = df.eval_ctx(&beta);
            let r = df.eval_rational(&ctx, &beta).abs();
            if r.to_rational() >= bound {
                return false;
            }
        }
    }
    solver::small_height_rational_probe(&beta, prec) == probe_recorded
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn p50() -> Precision {
        Precision::new(50).unwrap()
    }

    #[test]
    fn walk_regular_predicate_on_tiny_stream() {
        // K_3 and P_3
        let input = Cursor::new("Bw\nBg\n");
        let task = MineTask::new(vec![Predicate::WalkRegular], p50()).unwrap();
        let out = mine(&task, input).unwrap();
        assert_eq!(out.findings.len(), 1);
        assert_eq!(out.findings[0].graph6, "Bw");
        assert_eq!(out.summary.counts["walk-regular"], 1);
        assert!(out.summary.malformed_lines.is_empty());
    }

    #[test]
    fn empty_stream_is_success() {
        let input = Cursor::new("");
        let task = MineTask::new(vec![Predicate::WalkRegular], p50()).unwrap();
        let out = mine(&task, input).unwrap();
        assert!(out.findings.is_empty());
        assert!(out.summary.malformed_lines.is_empty());
        assert_eq!(out.summary.graphs_processed, 0);
    }

    #[test]
    fn malformed_lines_logged_and_skipped() {
        let input = Cursor::new("Bw\n!!bogus\nBg\n");
        let task = MineTask::new(vec![Predicate::WalkRegular], p50()).unwrap();
        let out = mine(&task, input).unwrap();
        assert_eq!(out.summary.malformed_lines.len(), 1);
        assert_eq!(out.summary.malformed_lines[0].0, 2);
        assert_eq!(out.summary.graphs_processed, 2);
    }

    #[test]
    fn no_predicates_is_an_error() {
        assert!(matches!(
            MineTask::new(vec![], p50()),
            Err(MineError::NoPredicates)
        ));
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let stream = "Bw\nBg\nA_\nBo\nBW\n";
        let mut outs = Vec::new();
        for workers in [1usize, 2, 4] {
            let mut task = MineTask::new(
                vec![Predicate::WalkRegular, Predicate::CospectralNonAuto],
                p50(),
            )
            .unwrap();
            task.workers = workers;
            let out = mine(&task, Cursor::new(stream)).unwrap();
            outs.push(out.findings);
        }
        assert_eq!(outs[0], outs[1]);
        assert_eq!(outs[1], outs[2]);
    }

    #[test]
    fn regularity_candidate_predicate_runs_clean_on_small_graphs() {
        // P_3 is not walk-regular but has no crossing pair; K_3 is
        // walk-regular and skipped: no findings either way
        let input = Cursor::new("Bg\nBw\n");
        let task = MineTask::new(vec![Predicate::RegularityCandidate], p50()).unwrap();
        let out = mine(&task, input).unwrap();
        assert!(out.findings.is_empty());
        assert_eq!(out.summary.graphs_processed, 2);
        assert_eq!(out.summary.counts["regularity-candidate"], 0);
    }

    #[test]
    fn emitted_findings_verify_and_tampered_ones_fail() {
        let input = Cursor::new("Bw\n");
        let task = MineTask::new(vec![Predicate::WalkRegular], p50()).unwrap();
        let out = mine(&task, input).unwrap();
        let finding = &out.findings[0];
        assert!(verify_finding(finding));
        let mut tampered = finding.clone();
        tampered.witness = Witness::WalkRegular {
            walk_prefix: vec!["0".into(), "999".into()],
        };
        assert!(!verify_finding(&tampered));
    }

    #[test]
    fn tampered_pair_witness_fails() {
        // star K_{1,3} = "Cs"? use edge list and encode
        let g = crate::graph::parse_edge_list("0 1\n0 2\n0 3").unwrap();
        let g6 = g.to_graph6().unwrap();
        let finding = Finding {
            line: 1,
            graph6: g6,
            predicate: Predicate::CospectralNonAuto,
            witness: Witness::CospectralNonAuto {
                pair: (1, 2),
                walk_prefix: walk_prefix_strings(&g, 1),
            },
        };
        // leaves 1,2 ARE cospectral but they are automorphic: must fail
        assert!(!verify_finding(&finding));
    }
}
