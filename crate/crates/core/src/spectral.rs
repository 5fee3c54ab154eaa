//! High-precision real spectral decomposition for symmetric rational
//! matrices: exact eigenvalue isolation with multiplicities, spectral
//! projector diagonals, and the Perron eigenvector.
//!
//! Multiplicities come from exact square-free factorization, never from
//! numerical clustering, and each distinct eigenvalue is enclosed in an
//! isolating rational interval that later stages can tighten on demand.
//! Projector diagonals are evaluated through exact rational products with
//! interval midpoints substituted for the eigenvalues, so the only error is
//! the eigenvalue enclosure width itself.

use crate::exact::{self, int_mat_mul, CharPoly, ExactMatrix};
use crate::hp::{pow10, Hp, HpCtx};
use crate::poly::{isolate_real_roots, refine_region, squarefree_decomposition, RatPoly, RootRegion};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Requested decimal precision; at least 30 digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Precision(u32);

pub const MIN_PRECISION: u32 = 30;

impl Precision {
    pub fn new(digits: u32) -> Result<Self, SpectralError> {
        if digits < MIN_PRECISION {
            return Err(SpectralError::PrecisionTooLow(digits));
        }
        Ok(Precision(digits))
    }

    pub fn digits(&self) -> u32 {
        self.0
    }

    /// Working tolerance 10^(-P+10).
    pub fn eps_w(&self) -> BigRational {
        BigRational::new(BigInt::one(), pow10(self.0 - 10))
    }

    pub fn doubled(&self) -> Precision {
        Precision(self.0 * 2)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("precision must be at least {min} digits, got {0}", min = MIN_PRECISION)]
    PrecisionTooLow(u32),
    #[error("matrix is not symmetric; spectral decomposition refused")]
    NotSymmetric,
    #[error("characteristic polynomial has non-real roots; input was not symmetric")]
    NonRealSpectrum,
    #[error("eigenvalue cluster: two isolating intervals within 10*eps_w; request higher precision")]
    EigenvalueCluster,
    #[error("spectral data carries {have} digits but {want} were requested")]
    PrecisionMismatch { have: u32, want: u32 },
    #[error("graph is disconnected; the dominant eigenvalue may be non-simple")]
    Disconnected,
    #[error("Perron vector unavailable: {0}")]
    PerronUnavailable(String),
}

/// One distinct eigenvalue: isolating interval and exact multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedEigenvalue {
    pub region: RootRegion,
    pub multiplicity: usize,
    /// Square-free polynomial whose sign changes refine this enclosure
    /// (rational roots already deflated out).
    pub factor: RatPoly,
}

/// Isolates the distinct real eigenvalues of a symmetric matrix from its
/// characteristic polynomial. Returned in descending order, each interval
/// refined to width 10^-P, pairwise disjoint.
pub fn isolate_eigenvalues(
    cp: &CharPoly,
    prec: Precision,
) -> Result<Vec<IsolatedEigenvalue>, SpectralError> {
    let poly = RatPoly::from_coeffs(cp.coeffs().to_vec());
    let n = cp.degree();
    let mut isolated = Vec::new();
    for (factor, mult) in squarefree_decomposition(&poly) {
        let iso = isolate_real_roots(&factor);
        if iso.roots.len() != factor.degree().unwrap_or(0) {
            return Err(SpectralError::NonRealSpectrum);
        }
        for region in iso.roots {
            isolated.push(IsolatedEigenvalue {
                region,
                multiplicity: mult,
                // brackets refine against the rational-root-deflated poly
                factor: iso.bracket_poly.clone(),
            });
        }
    }
    let total: usize = isolated.iter().map(|e| e.multiplicity).sum();
    if total != n {
        return Err(SpectralError::NonRealSpectrum);
    }
    refine_to_disjoint(&mut isolated, prec.digits());
    isolated.sort_by(|a, b| b.region.midpoint().cmp(&a.region.midpoint()));
    Ok(isolated)
}

/// Tightens all enclosures to width 10^-digits and keeps halving the target
/// until the intervals are pairwise disjoint.
fn refine_to_disjoint(eigs: &mut [IsolatedEigenvalue], digits: u32) {
    let mut width = BigRational::new(BigInt::one(), pow10(digits));
    loop {
        for e in eigs.iter_mut() {
            if e.region.width() > width {
                e.region = refine_region(&e.factor, &e.region, &width);
            }
        }
        let mut sorted: Vec<&RootRegion> = eigs.iter().map(|e| &e.region).collect();
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        let disjoint = sorted.windows(2).all(|w| {
            if w[0].is_exact() && w[1].is_exact() {
                w[0].lo != w[1].lo
            } else {
                w[0].hi < w[1].lo || (w[0].hi == w[1].lo && (w[0].is_exact() || w[1].is_exact()))
            }
        });
        if disjoint {
            return;
        }
        width /= BigInt::from(10u32).pow(10);
    }
}

/// Spectral decomposition data for one symmetric matrix: distinct
/// eigenvalues in descending order, multiplicities, projector diagonals,
/// and (for connected nonnegative inputs) the Perron vector.
#[derive(Debug, Clone)]
pub struct SpectralData {
    precision: Precision,
    scale: u32,
    eigenvalues: Vec<Hp>,
    intervals: Vec<RootRegion>,
    multiplicities: Vec<usize>,
    /// coeff[h][i]: diagonal entry i of the projector for eigenvalue h.
    coeff: Vec<Vec<Hp>>,
    perron: Option<Vec<Hp>>,
    n: usize,
}

impl SpectralData {
    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn distinct_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalue(&self, h: usize) -> &Hp {
        &self.eigenvalues[h]
    }

    pub fn eigenvalues(&self) -> &[Hp] {
        &self.eigenvalues
    }

    pub fn interval(&self, h: usize) -> &RootRegion {
        &self.intervals[h]
    }

    pub fn multiplicity(&self, h: usize) -> usize {
        self.multiplicities[h]
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn coefficient(&self, h: usize, vertex: usize) -> &Hp {
        &self.coeff[h][vertex]
    }

    pub fn coefficients_for_vertex(&self, vertex: usize) -> Vec<Hp> {
        self.coeff.iter().map(|row| row[vertex].clone()).collect()
    }

    pub fn perron(&self) -> Option<&[Hp]> {
        self.perron.as_deref()
    }

    /// Spectral radius upper bound from the extreme eigenvalue enclosures.
    pub fn spectral_radius_bound(&self) -> BigRational {
        let first = &self.intervals[0];
        let last = &self.intervals[self.intervals.len() - 1];
        let cands = [
            first.lo.abs(),
            first.hi.abs(),
            last.lo.abs(),
            last.hi.abs(),
        ];
        cands.into_iter().max().unwrap()
    }
}

/// Decimal digits of |q| above the decimal point (0 when |q| < 1); a cheap
/// upper bound used for scale budgeting.
fn magnitude_digits(q: &BigRational) -> u32 {
    let num_digits = q.numer().abs().to_string().len();
    let den_digits = q.denom().to_string().len();
    num_digits.saturating_sub(den_digits.saturating_sub(1)) as u32
}

/// Digits lost to division by |q| when |q| < 1 (0 otherwise).
fn deficit_digits(q: &BigRational) -> u32 {
    if q.is_zero() {
        return 0;
    }
    let num_digits = q.numer().abs().to_string().len();
    let den_digits = q.denom().to_string().len();
    (den_digits + 1).saturating_sub(num_digits) as u32
}

/// Working scale: requested digits plus guard digits plus headroom for the
/// projector product magnitudes and the eigenvalue-gap divisors.
fn working_scale(prec: Precision, a: &ExactMatrix, eigs: &[IsolatedEigenvalue]) -> u32 {
    let d = eigs.len();
    let norm = a.inf_norm();
    let mut max_abs_mu = BigRational::zero();
    for e in eigs {
        for v in [e.region.lo.abs(), e.region.hi.abs()] {
            if v > max_abs_mu {
                max_abs_mu = v;
            }
        }
    }
    let per_factor = magnitude_digits(&(norm + max_abs_mu)).max(1) + 1;
    let mag = (d.saturating_sub(1) as u32) * per_factor;
    let mut gap_deficit = 0u32;
    for h in 0..d {
        let mut acc = 0u32;
        for l in 0..d {
            if l == h {
                continue;
            }
            let gap = eigs[h].region.midpoint() - eigs[l].region.midpoint();
            acc += deficit_digits(&gap) + 1;
        }
        gap_deficit = gap_deficit.max(acc);
    }
    prec.digits() + 25 + mag + gap_deficit
}

fn integral_form(a: &ExactMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    a.integral_form()
}

/// Exact rational projector for eigenvalue `h` with interval midpoints
/// substituted for the eigenvalues: prod_{l != h} (A - mu_l I)/(mu_h - mu_l).
pub fn projector(a: &ExactMatrix, eigs: &[IsolatedEigenvalue], h: usize) -> ExactMatrix {
    let n = a.n();
    let mids: Vec<BigRational> = eigs.iter().map(|e| e.region.midpoint()).collect();
    let mut prod = ExactMatrix::identity(n);
    let mut denom = BigRational::one();
    for (l, mu) in mids.iter().enumerate() {
        if l == h {
            continue;
        }
        prod = prod.mul(&a.add_scaled_identity(&-mu.clone()));
        denom *= &mids[h] - mu;
    }
    prod.scale(&denom.recip())
}

/// Projector diagonals for all eigenvalues at once; integer matrix products
/// with a scalar denominator, converted to fixed point with one floor
/// division per entry.
fn projector_diagonals(
    a: &ExactMatrix,
    eigs: &[IsolatedEigenvalue],
    ctx: &HpCtx,
) -> Vec<Vec<Hp>> {
    let n = a.n();
    let d = eigs.len();
    let (m, den) = integral_form(a);
    let mids: Vec<BigRational> = eigs.iter().map(|e| e.region.midpoint()).collect();
    // B_l = q_l * M - p_l * den * I, so A - mu_l I = B_l / (den * q_l)
    let factors: Vec<(Vec<Vec<BigInt>>, BigInt)> = mids
        .iter()
        .map(|mu| {
            let p = mu.numer();
            let q = mu.denom();
            let mut b = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    b[i][j] = q * &m[i][j];
                    if i == j {
                        b[i][j] -= p * &den;
                    }
                }
            }
            (b, &den * q)
        })
        .collect();
    if d == 1 {
        // single distinct eigenvalue: projector is the identity
        return vec![vec![ctx.one(); n]];
    }
    // the shift factors commute, so each leave-one-out product splits into
    // a prefix and a suffix product
    let mut prefixes: Vec<Option<Vec<Vec<BigInt>>>> = Vec::with_capacity(d + 1);
    prefixes.push(None);
    for factor in factors.iter().take(d - 1) {
        let next = match prefixes.last().unwrap() {
            None => factor.0.clone(),
            Some(p) => int_mat_mul(p, &factor.0),
        };
        prefixes.push(Some(next));
    }
    let mut suffixes: Vec<Option<Vec<Vec<BigInt>>>> = vec![None; d + 1];
    for l in (1..d).rev() {
        suffixes[l] = Some(match &suffixes[l + 1] {
            None => factors[l].0.clone(),
            Some(s) => int_mat_mul(&factors[l].0, s),
        });
    }
    let mut out = Vec::with_capacity(d);
    for h in 0..d {
        let diag: Vec<BigInt> = match (&prefixes[h], &suffixes[h + 1]) {
            (Some(p), Some(s)) => (0..n)
                .map(|i| (0..n).map(|k| &p[i][k] * &s[k][i]).sum())
                .collect(),
            (Some(p), None) => (0..n).map(|i| p[i][i].clone()).collect(),
            (None, Some(s)) => (0..n).map(|i| s[i][i].clone()).collect(),
            (None, None) => unreachable!("d >= 2"),
        };
        // denominator of the leave-one-out product: the scalar matrix
        // denominators times the eigenvalue gaps, tracked as one
        // integer-over-integer pair (no normalization needed)
        let mut den_num = BigInt::one();
        let mut den_den = BigInt::one();
        for l in 0..d {
            if l == h {
                continue;
            }
            den_num *= &factors[l].1;
            let gap = &mids[h] - &mids[l];
            den_num *= gap.numer();
            den_den *= gap.denom();
        }
        out.push(
            diag.into_iter()
                .map(|e| ctx.from_int_ratio(e * &den_den, &den_num))
                .collect(),
        );
    }
    out
}

/// Builds the full spectral data from isolated eigenvalues.
pub fn coefficients(
    a: &ExactMatrix,
    eigs: &[IsolatedEigenvalue],
    prec: Precision,
) -> Result<SpectralData, SpectralError> {
    if !a.is_symmetric() {
        return Err(SpectralError::NotSymmetric);
    }
    let cluster_gap = BigRational::new(BigInt::from(10), pow10(prec.digits() - 10));
    for w in eigs.windows(2) {
        let gap = (w[0].region.midpoint() - w[1].region.midpoint()).abs();
        if gap < cluster_gap {
            return Err(SpectralError::EigenvalueCluster);
        }
    }
    let scale = working_scale(prec, a, eigs);
    let width = BigRational::new(BigInt::one(), pow10(scale + 10));
    let mut tight: Vec<IsolatedEigenvalue> = eigs.to_vec();
    for e in tight.iter_mut() {
        e.region = refine_region(&e.factor, &e.region, &width);
    }
    let ctx = HpCtx::new(scale);
    let coeff = projector_diagonals(a, &tight, &ctx);
    let eigenvalues: Vec<Hp> = tight
        .iter()
        .map(|e| ctx.from_rational(&e.region.midpoint()))
        .collect();
    Ok(SpectralData {
        precision: prec,
        scale,
        n: a.n(),
        eigenvalues,
        intervals: tight.iter().map(|e| e.region.clone()).collect(),
        multiplicities: tight.iter().map(|e| e.multiplicity).collect(),
        coeff,
        perron: None,
    })
}

fn support_connected(a: &ExactMatrix) -> bool {
    let n = a.n();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if !seen[v] && (!a.get(u, v).is_zero() || !a.get(v, u).is_zero()) {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

fn check_perron_preconditions(a: &ExactMatrix) -> Result<(), SpectralError> {
    if !a.is_symmetric() {
        return Err(SpectralError::NotSymmetric);
    }
    if !support_connected(a) {
        return Err(SpectralError::Disconnected);
    }
    for i in 0..a.n() {
        for j in 0..a.n() {
            if a.get(i, j).is_negative() {
                return Err(SpectralError::PerronUnavailable(
                    "matrix has negative entries".to_string(),
                ));
            }
        }
    }
    Ok(())
}

/// Inverse iteration against an already-refined dominant-eigenvalue
/// enclosure: one exact solve of the denominator-cleared shifted system (or
/// an exact nullspace basis when the eigenvalue is rational), normalized to
/// unit length at the given scale.
fn perron_from_region(
    a: &ExactMatrix,
    region: &RootRegion,
    scale: u32,
) -> Result<Vec<Hp>, SpectralError> {
    let n = a.n();
    let ctx = HpCtx::new(scale);
    if n == 1 {
        return Ok(vec![ctx.one()]);
    }
    let x: Vec<BigRational> = if region.is_exact() {
        let shifted = a.add_scaled_identity(&-region.lo.clone());
        let basis = exact::rational_nullspace(&shifted);
        if basis.len() != 1 {
            return Err(SpectralError::PerronUnavailable(
                "dominant eigenspace dimension is not one".to_string(),
            ));
        }
        basis.into_iter().next().unwrap()
    } else {
        // clear denominators: q D (A - p/q I) = q M - p D I with A = M/D;
        // the scaling is positive, so the solution direction is unchanged
        let (m, d) = integral_form(a);
        let mid = region.midpoint();
        let (p, q) = (mid.numer().clone(), mid.denom().clone());
        let shifted: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = &q * &m[i][j];
                        if i == j {
                            e -= &p * &d;
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let ones = vec![BigInt::one(); n];
        exact::solve_integer(&shifted, &ones).map_err(|_| {
            SpectralError::PerronUnavailable(
                "inverse iteration hit an exactly singular shift".to_string(),
            )
        })?
    };
    // normalize to unit length, orient positively
    let sum_sq: BigRational = x.iter().map(|v| v * v).sum();
    let norm = ctx
        .sqrt(&ctx.from_rational(&sum_sq))
        .expect("sum of squares is nonnegative");
    let mut v: Vec<Hp> = x
        .iter()
        .map(|xi| ctx.div(&ctx.from_rational(xi), &norm).expect("norm > 0"))
        .collect();
    let total = v.iter().fold(ctx.zero(), |acc, e| acc.add(e));
    if total.is_negative() {
        v = v.iter().map(|e| e.neg()).collect();
    }
    if v.iter().any(|e| !e.is_positive()) {
        return Err(SpectralError::PerronUnavailable(
            "entry not strictly positive at working precision".to_string(),
        ));
    }
    Ok(v)
}

/// Unit-norm dominant eigenvector with strictly positive entries, for a
/// connected symmetric matrix with nonnegative entries. Entry i is the
/// eigenvector centrality of vertex i.
///
/// Computed by one exact inverse-iteration solve against the refined
/// dominant eigenvalue (or an exact nullspace basis when the eigenvalue is
/// rational), which is independent of the projector route.
pub fn perron_vector(a: &ExactMatrix, prec: Precision) -> Result<Vec<Hp>, SpectralError> {
    check_perron_preconditions(a)?;
    let n = a.n();
    let scale = prec.digits() + 25;
    if n == 1 {
        return Ok(vec![HpCtx::new(scale).one()]);
    }
    let cp = exact::char_poly(a);
    let eigs = isolate_eigenvalues(&cp, prec)?;
    let top = &eigs[0];
    if top.multiplicity != 1 {
        return Err(SpectralError::PerronUnavailable(
            "dominant eigenvalue is not simple".to_string(),
        ));
    }
    let width = BigRational::new(BigInt::one(), pow10(scale + 10));
    let region = refine_region(&top.factor, &top.region, &width);
    perron_from_region(a, &region, scale)
}

/// Full pipeline: characteristic polynomial, isolation, projector
/// diagonals, and the Perron vector when the support is connected and the
/// entries are nonnegative.
pub fn decompose(a: &ExactMatrix, prec: Precision) -> Result<SpectralData, SpectralError> {
    let cp = exact::char_poly(a);
    let eigs = isolate_eigenvalues(&cp, prec)?;
    let mut sd = coefficients(a, &eigs, prec)?;
    let nonnegative = (0..a.n()).all(|i| (0..a.n()).all(|j| !a.get(i, j).is_negative()));
    if nonnegative && support_connected(a) && sd.multiplicities[0] == 1 {
        // the intervals are already refined to the working width
        let p = perron_from_region(a, &sd.intervals[0], sd.scale)?;
        sd.perron = Some(p);
    }
    Ok(sd)
}

impl Serialize for SpectralData {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.precision.digits();
        let mut s = serializer.serialize_struct("SpectralData", 6)?;
        s.serialize_field("precision", &p)?;
        s.serialize_field("n", &self.n)?;
        let eig: Vec<String> = self
            .eigenvalues
            .iter()
            .map(|e| e.to_decimal_trunc(p))
            .collect();
        s.serialize_field("eigenvalues", &eig)?;
        s.serialize_field("multiplicities", &self.multiplicities)?;
        let coeff: Vec<Vec<String>> = self
            .coeff
            .iter()
            .map(|row| row.iter().map(|e| e.to_decimal_trunc(p)).collect())
            .collect();
        s.serialize_field("projector_diagonals", &coeff)?;
        let perron: Option<Vec<String>> = self
            .perron
            .as_ref()
            .map(|v| v.iter().map(|e| e.to_decimal_trunc(p)).collect());
        s.serialize_field("perron", &perron)?;
        s.end()
    }
}
