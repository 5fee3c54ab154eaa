//! Locates the positive beta values at which two non-cospectral vertices
//! acquire equal subgraph centrality: builds the pairwise difference
//! function g(beta) = sum_h (C[h][i] - C[h][j]) e^(beta mu_h), scans a grid
//! for sign changes, and refines brackets by safeguarded bisection with
//! secant acceleration. Pairwise roots are then intersected to hunt for
//! whole-graph regularity candidates.

use crate::exact::{self, ExactMatrix};
use crate::graph::VertexPair;
use crate::hp::{pow10, Hp, HpCtx};
use crate::spectral::{self, Precision, SpectralData, SpectralError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("difference function is identically zero (exactly cospectral pair)")]
    Degenerate,
    #[error("all coefficient deltas below eps_w for a non-cospectral pair; escalate precision")]
    PrecisionTooCoarse,
    #[error("bracket has no sign change at the working precision (spurious)")]
    SpuriousBracket,
    #[error("residual stalled above the target after precision escalation")]
    ResidualStalled,
    #[error("input graph is walk-regular; the regularity search is meaningless")]
    WalkRegularInput,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Pairwise centrality difference as an exponential sum over the distinct
/// eigenvalues.
#[derive(Debug, Clone)]
pub struct DiffFunction {
    precision: Precision,
    scale: u32,
    mu: Vec<Hp>,
    delta: Vec<Hp>,
    pair: Option<VertexPair>,
    degenerate: bool,
    /// Source matrix, kept for automatic precision escalation.
    source: Option<ExactMatrix>,
}

impl DiffFunction {
    /// Direct construction for synthetic and calibration inputs; `mu` and
    /// `delta` must share one scale.
    pub fn from_parts(mu: Vec<Hp>, delta: Vec<Hp>, prec: Precision) -> Self {
        assert_eq!(mu.len(), delta.len());
        assert!(!mu.is_empty());
        let scale = mu[0].scale();
        assert!(mu.iter().chain(delta.iter()).all(|x| x.scale() == scale));
        DiffFunction {
            precision: prec,
            scale,
            mu,
            delta,
            pair: None,
            degenerate: false,
            source: None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn pair(&self) -> Option<VertexPair> {
        self.pair
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn deltas(&self) -> &[Hp] {
        &self.delta
    }

    pub fn eigenvalues(&self) -> &[Hp] {
        &self.mu
    }

    fn largest_abs_mu(&self) -> BigRational {
        self.mu
            .iter()
            .map(|m| m.to_rational().abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Context with enough headroom for e^(beta mu) magnitudes up to
    /// `beta_max`.
    pub fn eval_ctx(&self, beta_max: &BigRational) -> HpCtx {
        let arg = beta_max.abs() * self.largest_abs_mu();
        let half = &arg / BigRational::from(BigInt::from(2));
        let (d, r) = half.numer().div_rem(half.denom());
        let extra = u32::try_from(&d).unwrap_or(u32::MAX / 4) + u32::from(!r.is_zero()) + 2;
        HpCtx::new(self.scale + extra)
    }

    /// g(beta) at one point.
    pub fn eval(&self, ctx: &HpCtx, beta: &Hp) -> Hp {
        let mut acc = ctx.zero();
        for (m, d) in self.mu.iter().zip(&self.delta) {
            let arg = ctx.mul(beta, &m.rescale(ctx.scale()));
            let e = ctx.exp(&arg);
            acc = acc.add(&ctx.mul(&d.rescale(ctx.scale()), &e));
        }
        acc
    }

    pub fn eval_rational(&self, ctx: &HpCtx, beta: &BigRational) -> Hp {
        self.eval(ctx, &ctx.from_rational(beta))
    }
}

/// Builds the difference function for a vertex pair. The exact
/// cospectrality decision is consulted first: cospectral pairs come back as
/// the identically-zero marker, and a non-cospectral pair whose deltas all
/// vanish at the working tolerance is a precision error.
pub fn build_diff(
    sd: &SpectralData,
    a: &ExactMatrix,
    pair: VertexPair,
) -> Result<DiffFunction, SolverError> {
    let scale = sd.scale();
    let ctx = HpCtx::new(scale);
    let delta: Vec<Hp> = (0..sd.distinct_count())
        .map(|h| sd.coefficient(h, pair.i).sub(sd.coefficient(h, pair.j)))
        .collect();
    let mu: Vec<Hp> = sd.eigenvalues().to_vec();
    let degenerate = exact::cospectral(a, pair);
    if !degenerate {
        let eps_w = ctx.eps(sd.precision().digits() - 10);
        if delta.iter().all(|d| d.abs().cmp_val(&eps_w) == Ordering::Less) {
            return Err(SolverError::PrecisionTooCoarse);
        }
    }
    Ok(DiffFunction {
        precision: sd.precision(),
        scale,
        mu,
        delta,
        pair: Some(pair),
        degenerate,
        source: Some(a.clone()),
    })
}

/// Grid scan parameters over (0, b_max].
#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub b_max: BigRational,
    pub step: BigRational,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            b_max: BigRational::from(BigInt::from(20)),
            step: BigRational::new(BigInt::one(), BigInt::from(100)),
        }
    }
}

/// Scan result: sign-change brackets, plus grid points where |g| dipped
/// below 10^(-P/2) without a sign change (possible tangential roots, which
/// the scanner cannot bracket).
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub brackets: Vec<(BigRational, BigRational)>,
    pub near_zero_dips: Vec<BigRational>,
}

/// Evaluates g over the grid k*step for k = 1..=b_max/step and collects all
/// brackets with opposite nonzero signs. Grid values are obtained by one
/// exponential per eigenvalue and a multiplicative recurrence along the
/// grid.
pub fn scan_roots(df: &DiffFunction, opts: &ScanOptions) -> Result<ScanOutcome, SolverError> {
    if df.is_degenerate() {
        return Err(SolverError::Degenerate);
    }
    assert!(opts.step.is_positive() && opts.b_max.is_positive());
    let ctx = df.eval_ctx(&opts.b_max);
    let steps_total = {
        let q = &opts.b_max / &opts.step;
        let (d, _r) = q.numer().div_rem(q.denom());
        u64::try_from(&d).unwrap_or(0)
    };
    let zero_eps = ctx.eps(df.precision.digits());
    let dip_eps = ctx.eps(df.precision.digits() / 2);

    let step_hp = ctx.from_rational(&opts.step);
    let growth: Vec<Hp> = df
        .mu
        .iter()
        .map(|m| ctx.exp(&ctx.mul(&step_hp, &m.rescale(ctx.scale()))))
        .collect();
    let mut powers: Vec<Hp> = vec![ctx.one(); df.mu.len()];
    let deltas: Vec<Hp> = df.delta.iter().map(|d| d.rescale(ctx.scale())).collect();

    let mut brackets = Vec::new();
    let mut near_zero_dips = Vec::new();
    let mut last_sign: i32 = 0;
    let mut last_beta: Option<BigRational> = None;
    for k in 1..=steps_total {
        for (p, g) in powers.iter_mut().zip(&growth) {
            *p = ctx.mul(p, g);
        }
        let mut val = ctx.zero();
        for (d, p) in deltas.iter().zip(&powers) {
            val = val.add(&ctx.mul(d, p));
        }
        let beta = &opts.step * BigRational::from(BigInt::from(k));
        let sign = if val.abs().cmp_val(&zero_eps) == Ordering::Less {
            0
        } else {
            val.signum()
        };
        if sign == 0 || (val.abs().cmp_val(&dip_eps) == Ordering::Less && sign == last_sign) {
            near_zero_dips.push(beta.clone());
        }
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                brackets.push((last_beta.clone().unwrap(), beta.clone()));
            }
            last_sign = sign;
            last_beta = Some(beta);
        }
    }
    Ok(ScanOutcome {
        brackets,
        near_zero_dips,
    })
}

/// A refined root of a difference function.
#[derive(Debug, Clone)]
pub struct BetaRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub residual: Hp,
    pub pair: Option<VertexPair>,
    pub precision: Precision,
    /// graph6 of the source graph, when the caller tracks one.
    pub graph6: Option<String>,
}

impl BetaRoot {
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from(BigInt::from(2))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

impl Serialize for BetaRoot {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.precision.digits();
        let mut s = serializer.serialize_struct("BetaRoot", 7)?;
        s.serialize_field("precision", &p)?;
        s.serialize_field("digits", &(p + 20))?;
        let ctx = HpCtx::new(p + 20);
        s.serialize_field("lo", &ctx.from_rational(&self.lo).to_decimal_trunc(p + 20))?;
        s.serialize_field("hi", &ctx.from_rational(&self.hi).to_decimal_trunc(p + 20))?;
        s.serialize_field(
            "residual",
            &self.residual.to_decimal_trunc(self.residual.scale()),
        )?;
        s.serialize_field("pair", &self.pair.map(|q| (q.i, q.j)))?;
        s.serialize_field("graph6", &self.graph6)?;
        s.end()
    }
}

// half the contracted bracket width, so the refined interval is strictly
// inside 10^(-P+10)
fn width_target(prec: Precision) -> BigRational {
    BigRational::new(BigInt::one(), pow10(prec.digits() - 10) * 2u32)
}

fn residual_target(prec: Precision) -> BigRational {
    BigRational::new(BigInt::one(), pow10(prec.digits() - 20))
}

/// One bisection/secant pass at fixed data precision. Returns the refined
/// endpoints and midpoint residual.
fn refine_pass(
    df: &DiffFunction,
    bracket: &(BigRational, BigRational),
    prec: Precision,
) -> Result<(BigRational, BigRational, Hp), SolverError> {
    let ctx = df.eval_ctx(&bracket.1);
    let zero_eps = ctx.eps(df.precision.digits() + 5);
    let (mut lo, mut hi) = bracket.clone();
    let mut g_lo = df.eval_rational(&ctx, &lo);
    let mut g_hi = df.eval_rational(&ctx, &hi);
    let s_lo = g_lo.signum();
    let s_hi = g_hi.signum();
    if s_lo == 0
        || s_hi == 0
        || s_lo == s_hi
        || g_lo.abs().cmp_val(&zero_eps) == Ordering::Less
        || g_hi.abs().cmp_val(&zero_eps) == Ordering::Less
    {
        return Err(SolverError::SpuriousBracket);
    }
    let target = width_target(prec);
    let two = BigRational::from(BigInt::from(2));
    let mut use_secant = false;
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let cand = if use_secant {
            // secant point, clamped to the middle half of the bracket
            let gl = g_lo.to_rational();
            let gh = g_hi.to_rational();
            let denom = &gh - &gl;
            if denom.is_zero() {
                mid.clone()
            } else {
                let sec = &lo - gl * (&hi - &lo) / denom;
                let quarter = (&hi - &lo) / BigRational::from(BigInt::from(4));
                let lo_clamp = &lo + &quarter;
                let hi_clamp = &hi - &quarter;
                if sec < lo_clamp {
                    lo_clamp
                } else if sec > hi_clamp {
                    hi_clamp
                } else {
                    sec
                }
            }
        } else {
            mid.clone()
        };
        use_secant = !use_secant;
        let g_cand = df.eval_rational(&ctx, &cand);
        let s_cand = if g_cand.abs().cmp_val(&zero_eps) == Ordering::Less {
            0
        } else {
            g_cand.signum()
        };
        if s_cand == 0 {
            // residual floor reached: shrink symmetrically around cand
            let w = (&hi - &lo) / BigRational::from(BigInt::from(8));
            let new_lo = (&cand - &w).max(lo.clone());
            let new_hi = (&cand + &w).min(hi.clone());
            let g_new_lo = df.eval_rational(&ctx, &new_lo);
            let g_new_hi = df.eval_rational(&ctx, &new_hi);
            if g_new_lo.signum() == s_lo && g_new_hi.signum() == s_hi {
                lo = new_lo;
                g_lo = g_new_lo;
                hi = new_hi;
                g_hi = g_new_hi;
                continue;
            }
            break;
        }
        if s_cand == s_lo {
            lo = cand;
            g_lo = g_cand;
        } else {
            hi = cand;
            g_hi = g_cand;
        }
    }
    let mid = (&lo + &hi) / &two;
    let residual = df.eval_rational(&ctx, &mid).abs();
    Ok((lo, hi, residual))
}

/// Refines a sign-change bracket to width below 10^(-P+10) with residual
/// below 10^(-P+20). When the residual stalls and the function was built
/// from a matrix, the spectral data is rebuilt at doubled precision and the
/// refinement retried; a bracket that loses its sign change at the higher
/// precision is reported as spurious.
pub fn refine_root(
    df: &DiffFunction,
    bracket: (BigRational, BigRational),
    prec: Precision,
) -> Result<BetaRoot, SolverError> {
    if df.is_degenerate() {
        return Err(SolverError::Degenerate);
    }
    let res_target = residual_target(prec);
    let mut work = df.clone();
    let mut attempts = 0u32;
    loop {
        let (lo, hi, residual) = refine_pass(&work, &bracket, prec)?;
        let width_ok = &hi - &lo <= width_target(prec);
        if width_ok && residual.to_rational() < res_target {
            return Ok(BetaRoot {
                lo,
                hi,
                residual,
                pair: work.pair,
                precision: prec,
                graph6: None,
            });
        }
        attempts += 1;
        let (Some(a), Some(pair)) = (work.source.clone(), work.pair) else {
            return Err(SolverError::ResidualStalled);
        };
        if attempts > 2 {
            return Err(SolverError::ResidualStalled);
        }
        let doubled = Precision::new(work.precision.digits() * 2).expect(">= 30");
        let sd = spectral::decompose(&a, doubled)?;
        work = build_diff(&sd, &a, pair)?;
    }
}

/// Probe outcome: true when no rational p/q with q <= 10^4 sits within
/// 10^(-P+20) of the value. A consistency check, not a transcendence proof.
pub fn small_height_rational_probe(beta: &BigRational, prec: Precision) -> bool {
    let tol = BigRational::new(BigInt::one(), pow10(prec.digits() - 20));
    for q in 1..=10_000i64 {
        let qr = BigRational::from(BigInt::from(q));
        let scaled = beta * &qr;
        let p = scaled.round();
        let approx = p / qr;
        if (beta - approx).abs() <= tol {
            return false;
        }
    }
    true
}

/// One simultaneous-vanishing candidate from the regularity search.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityCandidate {
    pub root: BetaRoot,
    /// Largest |g| over all non-cospectral pairs at the candidate beta.
    pub max_pair_residual: String,
    pub small_height_probe_passed: bool,
}

/// Report of the graph-level regularity-beta search.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub pairs_total: usize,
    pub pairs_cospectral: usize,
    pub pairs_with_roots: usize,
    pub pair_roots: Vec<BetaRoot>,
    pub candidates: Vec<RegularityCandidate>,
    pub near_zero_dips: usize,
}

/// Hunts for beta > 0 at which every non-cospectral pair's difference
/// vanishes simultaneously within 10^(-P+20). Rejects walk-regular inputs.
pub fn regularity_beta_search(
    a: &ExactMatrix,
    prec: Precision,
    opts: &ScanOptions,
) -> Result<RegularityReport, SolverError> {
    if exact::walk_regular(a) {
        return Err(SolverError::WalkRegularInput);
    }
    let sd = spectral::decompose(a, prec)?;
    let n = a.n();
    let mut pair_roots: Vec<BetaRoot> = Vec::new();
    let mut diffs: Vec<DiffFunction> = Vec::new();
    let mut pairs_total = 0usize;
    let mut pairs_cospectral = 0usize;
    let mut dips = 0usize;
    let mut roots_by_pair: Vec<Vec<BetaRoot>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs_total += 1;
            let pair = VertexPair::new(i, j, n).expect("valid pair");
            let df = build_diff(&sd, a, pair)?;
            if df.is_degenerate() {
                pairs_cospectral += 1;
                continue;
            }
            let scan = scan_roots(&df, opts)?;
            dips += scan.near_zero_dips.len();
            let mut roots = Vec::new();
            for b in scan.brackets {
                let root = refine_root(&df, b, prec)?;
                pair_roots.push(root.clone());
                roots.push(root);
            }
            roots_by_pair.push(roots);
            diffs.push(df);
        }
    }
    let pairs_with_roots = roots_by_pair.iter().filter(|r| !r.is_empty()).count();
    let mut candidates = Vec::new();
    // simultaneous vanishing requires every non-cospectral pair to have a
    // root; seed from the pair with the fewest roots
    if !roots_by_pair.is_empty() && roots_by_pair.iter().all(|r| !r.is_empty()) {
        let seed_idx = roots_by_pair
            .iter()
            .enumerate()
            .min_by_key(|(k, r)| (r.len(), *k))
            .map(|(k, _)| k)
            .unwrap();
        let tol = residual_target(prec);
        for root in &roots_by_pair[seed_idx] {
            let beta = root.midpoint();
            let mut max_res: Option<Hp> = None;
            let mut all_pass = true;
            for df in &diffs {
                let ctx = df.eval_ctx(&beta);
                let r = df.eval_rational(&ctx, &beta).abs();
                if r.to_rational() >= tol {
                    all_pass = false;
                    break;
                }
                max_res = Some(match max_res {
                    None => r,
                    Some(m) => {
                        if r.to_rational() > m.to_rational() {
                            r
                        } else {
                            m
                        }
                    }
                });
            }
            if all_pass {
                let res = max_res.expect("at least one pair");
                candidates.push(RegularityCandidate {
                    root: root.clone(),
                    max_pair_residual: res.to_decimal_trunc(res.scale()),
                    small_height_probe_passed: small_height_rational_probe(&beta, prec),
                });
            }
        }
    }
    Ok(RegularityReport {
        pairs_total,
        pairs_cospectral,
        pairs_with_roots,
        pair_roots,
        candidates,
        near_zero_dips: dips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn p50() -> Precision {
        Precision::new(50).unwrap()
    }

    fn p60() -> Precision {
        Precision::new(60).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn path3() -> ExactMatrix {
        parse_edge_list("0 1\n1 2").unwrap().adjacency_matrix()
    }

    /// ln 2 by the exact series sum_{k>=1} 1/(k 2^k), an oracle independent
    /// of the solver and of the fixed-point exponential.
    fn ln2_oracle(digits: u32) -> BigRational {
        let mut sum = BigRational::zero();
        let mut p2 = BigInt::one();
        let terms = (digits * 7 / 2) + 16;
        for k in 1..=terms {
            p2 *= 2;
            sum += BigRational::new(BigInt::one(), BigInt::from(k) * &p2);
        }
        sum
    }

    #[test]
    fn synthetic_exp_minus_two_recovers_ln_two() {
        let ctx = HpCtx::new(90);
        let mu = vec![ctx.one(), ctx.zero()];
        let delta = vec![ctx.one(), ctx.from_int(-2)];
        let df = DiffFunction::from_parts(mu, delta, p60());
        let scan = scan_roots(&df, &ScanOptions::default()).unwrap();
        assert_eq!(scan.brackets.len(), 1);
        let root = refine_root(&df, scan.brackets[0].clone(), p60()).unwrap();
        let ln2 = ln2_oracle(80);
        let err = (root.midpoint() - ln2).abs();
        assert!(err < BigRational::new(BigInt::one(), pow10(40)), "err {err}");
        assert!(root.residual.to_rational() < BigRational::new(BigInt::one(), pow10(40)));
        assert!(root.width() < BigRational::new(BigInt::one(), pow10(50)));
    }

    #[test]
    fn synthetic_two_term_crossing_has_root_at_one() {
        // g(beta) = e^beta - e^2 e^-beta vanishes exactly at beta = 1
        let ctx = HpCtx::new(90);
        let e2 = ctx.exp(&ctx.from_int(2));
        let mu = vec![ctx.one(), ctx.from_int(-1)];
        let delta = vec![ctx.one(), e2.neg()];
        let df = DiffFunction::from_parts(mu, delta, p60());
        let scan = scan_roots(&df, &ScanOptions::default()).unwrap();
        assert_eq!(scan.brackets.len(), 1);
        let root = refine_root(&df, scan.brackets[0].clone(), p60()).unwrap();
        let err = (root.midpoint() - BigRational::one()).abs();
        assert!(err < BigRational::new(BigInt::one(), pow10(40)), "err {err}");
    }

    #[test]
    fn path_end_vs_center_never_crosses() {
        let a = path3();
        let sd = spectral::decompose(&a, p50()).unwrap();
        let pair = VertexPair::new(0, 1, 3).unwrap();
        let df = build_diff(&sd, &a, pair).unwrap();
        let scan = scan_roots(&df, &ScanOptions::default()).unwrap();
        assert!(scan.brackets.is_empty());
    }

    #[test]
    fn path_deltas_match_hand_values() {
        // C_end = (1/4, 1/2, 1/4), C_center = (1/2, 0, 1/2) over
        // mu = (sqrt2, 0, -sqrt2): delta = (-1/4, 1/2, -1/4)
        let a = path3();
        let sd = spectral::decompose(&a, p50()).unwrap();
        let df = build_diff(&sd, &a, VertexPair::new(0, 1, 3).unwrap()).unwrap();
        let expect = [rat(-1, 4), rat(1, 2), rat(-1, 4)];
        for (d, e) in df.deltas().iter().zip(&expect) {
            let err = (d.to_rational() - e).abs();
            assert!(err < BigRational::new(BigInt::one(), pow10(40)));
        }
        // deltas sum to zero
        let sum: BigRational = df.deltas().iter().map(|d| d.to_rational()).sum();
        assert!(sum.abs() < BigRational::new(BigInt::one(), pow10(40)));
    }

    #[test]
    fn cospectral_pair_is_degenerate_and_scan_rejects_it() {
        let a = path3();
        let sd = spectral::decompose(&a, p50()).unwrap();
        let df = build_diff(&sd, &a, VertexPair::new(0, 2, 3).unwrap()).unwrap();
        assert!(df.is_degenerate());
        assert_eq!(
            scan_roots(&df, &ScanOptions::default()).unwrap_err(),
            SolverError::Degenerate
        );
    }

    #[test]
    fn diff_agrees_with_taylor_backend_differences() {
        use crate::centrality::subgraph_centrality_taylor;
        let a = parse_edge_list("0 1\n0 2\n0 3").unwrap().adjacency_matrix();
        let sd = spectral::decompose(&a, p50()).unwrap();
        let pair = VertexPair::new(0, 1, 4).unwrap();
        let df = build_diff(&sd, &a, pair).unwrap();
        // fixed pseudo-random rationals in (0, 5]
        let mut seed = 1234567u64;
        let tol = BigRational::new(BigInt::one(), pow10(35));
        for _ in 0..10 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = 1 + (seed >> 33) % 500;
            let beta = rat(num as i64, 100);
            let ctx = df.eval_ctx(&beta);
            let g = df.eval_rational(&ctx, &beta).to_rational();
            let t = subgraph_centrality_taylor(&a, &beta, p50()).unwrap();
            let direct = t.values[0].to_rational() - t.values[1].to_rational();
            assert!((g - direct).abs() < tol, "beta={beta}");
        }
    }

    #[test]
    fn bracket_count_stable_under_precision_doubling() {
        let ctx = HpCtx::new(90);
        let e2 = ctx.exp(&ctx.from_int(2));
        let mu = vec![ctx.one(), ctx.from_int(-1)];
        let delta = vec![ctx.one(), e2.neg()];
        let df50 = DiffFunction::from_parts(mu.clone(), delta.clone(), p50());
        let ctx2 = HpCtx::new(150);
        let e2b = ctx2.exp(&ctx2.from_int(2));
        let df100 = DiffFunction::from_parts(
            vec![ctx2.one(), ctx2.from_int(-1)],
            vec![ctx2.one(), e2b.neg()],
            Precision::new(100).unwrap(),
        );
        let s50 = scan_roots(&df50, &ScanOptions::default()).unwrap();
        let s100 = scan_roots(&df100, &ScanOptions::default()).unwrap();
        assert_eq!(s50.brackets.len(), s100.brackets.len());
        assert_eq!(s50.brackets[0].0, s100.brackets[0].0);
    }

    #[test]
    fn spurious_bracket_detected() {
        let ctx = HpCtx::new(90);
        let mu = vec![ctx.one(), ctx.zero()];
        let delta = vec![ctx.one(), ctx.from_int(-2)];
        let df = DiffFunction::from_parts(mu, delta, p60());
        // g is positive on [1, 2]: no sign change
        let err = refine_root(&df, (rat(1, 1), rat(2, 1)), p60()).unwrap_err();
        assert_eq!(err, SolverError::SpuriousBracket);
    }

    #[test]
    fn regularity_search_on_path_finds_no_candidate() {
        let a = path3();
        let report = regularity_beta_search(&a, p50(), &ScanOptions::default()).unwrap();
        assert!(report.candidates.is_empty());
        assert_eq!(report.pairs_total, 3);
        assert_eq!(report.pairs_cospectral, 1);
    }

    #[test]
    fn regularity_search_rejects_walk_regular_input() {
        let c4 = parse_edge_list("0 1\n1 2\n2 3\n0 3").unwrap().adjacency_matrix();
        assert_eq!(
            regularity_beta_search(&c4, p50(), &ScanOptions::default()).unwrap_err(),
            SolverError::WalkRegularInput
        );
    }

    #[test]
    fn small_height_probe_flags_rationals() {
        assert!(!small_height_rational_probe(&rat(3, 7), p50()));
        // ln 2 is far from every small-denominator rational at this tolerance
        let ln2 = ln2_oracle(80);
        assert!(small_height_rational_probe(&ln2, p50()));
    }
}
