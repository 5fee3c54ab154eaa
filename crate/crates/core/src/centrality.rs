//! Diagonal entry functions and their equivalence classification:
//! subgraph centrality (exact-series and spectral backends), resolvent
//! subgraph centrality, walk entropy, degree and eigenvector centralities.

use crate::exact::{self, rational_str, ExactMatrix};
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
pub enum CentralityError {
    #[error("beta must be nonzero")]
    BetaZero,
    #[error("alpha {0} outside the resolvent convergence range")]
    AlphaOutOfRange(String),
    #[error("operation requires an undirected (symmetric) matrix")]
    NotSymmetric,
    #[error("walk entropy requires a subgraph-centrality report")]
    NotSubgraphReport,
    #[error("walk entropy undefined: nonpositive subgraph-centrality value")]
    EntropyUndefined,
    #[error("equivalence classification still borderline after escalating to {0} digits")]
    EscalationExhausted(u32),
    #[error("walk table holds {have} powers but the series needs {need}")]
    WalkTableTooShallow { have: usize, need: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Exact(#[from] exact::ExactError),
}

/// Inverse-temperature parameter. Exact rationals are the supported
/// algebraic inputs; solver-produced values enter as high-precision reals
/// flagged non-exact.
#[derive(Debug, Clone)]
pub enum Beta {
    Rational(BigRational),
    Real(Hp),
}

impl Beta {
    pub fn rational(q: BigRational) -> Result<Self, CentralityError> {
        if q.is_zero() {
            return Err(CentralityError::BetaZero);
        }
        Ok(Beta::Rational(q))
    }

    pub fn real(x: Hp) -> Result<Self, CentralityError> {
        if x.is_zero() {
            return Err(CentralityError::BetaZero);
        }
        Ok(Beta::Real(x))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Beta::Rational(_))
    }

    pub fn to_hp(&self, ctx: &HpCtx) -> Hp {
        match self {
            Beta::Rational(q) => ctx.from_rational(q),
            Beta::Real(x) => x.rescale(ctx.scale()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Beta::Rational(q) => rational_str(q),
            Beta::Real(x) => format!("~{}", x.to_decimal_trunc(x.scale().min(40))),
        }
    }
}

/// Which diagonal entry function produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CentralityFn {
    #[serde(rename = "subgraph-taylor")]
    SubgraphTaylor,
    #[serde(rename = "subgraph-spectral")]
    SubgraphSpectral,
    #[serde(rename = "resolvent")]
    Resolvent,
    #[serde(rename = "degree")]
    Degree,
    #[serde(rename = "eigenvector")]
    Eigenvector,
    #[serde(rename = "entropy")]
    Entropy,
}

impl CentralityFn {
    pub fn as_str(&self) -> &'static str {
        match self {
            CentralityFn::SubgraphTaylor => "subgraph-taylor",
            CentralityFn::SubgraphSpectral => "subgraph-spectral",
            CentralityFn::Resolvent => "resolvent",
            CentralityFn::Degree => "degree",
            CentralityFn::Eigenvector => "eigenvector",
            CentralityFn::Entropy => "entropy",
        }
    }
}

/// Per-vertex values of one diagonal entry function plus the equivalence
/// partition at tolerance 10^(-P+15). Vertices whose pairwise gaps fall in
/// the band [eps_class, 10*eps_class) are flagged borderline rather than
/// silently classified.
#[derive(Debug, Clone)]
pub struct CentralityReport {
    pub function: CentralityFn,
    pub parameter: Option<String>,
    pub precision: Precision,
    pub values: Vec<Hp>,
    /// Present when the backend produced exactly-representable values
    /// (resolvent, degree).
    pub exact_values: Option<Vec<BigRational>>,
    /// Class index per vertex; classes numbered by smallest member.
    pub classes: Vec<usize>,
    pub class_members: Vec<Vec<usize>>,
    pub borderline_pairs: Vec<(usize, usize)>,
}

impl CentralityReport {
    fn build(
        function: CentralityFn,
        parameter: Option<String>,
        precision: Precision,
        values: Vec<Hp>,
        exact_values: Option<Vec<BigRational>>,
    ) -> Self {
        let (classes, class_members, borderline_pairs) = classify(&values, precision);
        CentralityReport {
            function,
            parameter,
            precision,
            values,
            exact_values,
            classes,
            class_members,
            borderline_pairs,
        }
    }

    /// Single equivalence class: every vertex shares the value.
    pub fn is_uniform(&self) -> bool {
        self.class_members.len() <= 1
    }

    pub fn same_class(&self, p: VertexPair) -> bool {
        self.classes[p.i] == self.classes[p.j]
    }

    pub fn to_csv(&self) -> String {
        let digits = self.precision.digits();
        let mut out = String::from("vertex,value,class\n");
        for (v, val) in self.values.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                v,
                val.to_decimal_trunc(digits),
                self.classes[v]
            ));
        }
        out
    }
}

impl Serialize for CentralityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.precision.digits();
        let mut s = serializer.serialize_struct("CentralityReport", 8)?;
        s.serialize_field("function", self.function.as_str())?;
        s.serialize_field("parameter", &self.parameter)?;
        s.serialize_field("precision", &p)?;
        let vals: Vec<String> = self.values.iter().map(|v| v.to_decimal_trunc(p)).collect();
        s.serialize_field("values", &vals)?;
        let exact: Option<Vec<String>> = self
            .exact_values
            .as_ref()
            .map(|v| v.iter().map(rational_str).collect());
        s.serialize_field("exact_values", &exact)?;
        s.serialize_field("classes", &self.classes)?;
        s.serialize_field("class_members", &self.class_members)?;
        s.serialize_field("borderline_pairs", &self.borderline_pairs)?;
        s.end()
    }
}

/// Groups vertices whose values agree within 10^(-P+15), chaining adjacent
/// near-equal values; returns per-vertex class ids (numbered by smallest
/// member), the member lists, and any borderline gaps.
fn classify(values: &[Hp], prec: Precision) -> (Vec<usize>, Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let n = values.len();
    if n == 0 {
        return (Vec::new(), Vec::new(), Vec::new());
    }
    let scale = values[0].scale();
    let eps_digits = prec.digits() - 15;
    let eps = HpCtx::new(scale).eps(eps_digits);
    let band = eps.mul_int(10);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].cmp_val(&values[b]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = vec![vec![order[0]]];
    let mut borderline = Vec::new();
    for w in order.windows(2) {
        let gap = values[w[1]].sub(&values[w[0]]);
        if gap.cmp_val(&eps) == Ordering::Less {
            groups.last_mut().unwrap().push(w[1]);
        } else {
            if gap.cmp_val(&band) == Ordering::Less {
                borderline.push((w[0].min(w[1]), w[0].max(w[1])));
            }
            groups.push(vec![w[1]]);
        }
    }
    for g in groups.iter_mut() {
        g.sort();
    }
    groups.sort_by_key(|g| g[0]);
    let mut classes = vec![0usize; n];
    for (idx, g) in groups.iter().enumerate() {
        for &v in g {
            classes[v] = idx;
        }
    }
    (classes, groups, borderline)
}

/// Re-derives the partition of an existing report.
pub fn classify_equivalence(report: &CentralityReport) -> Vec<Vec<usize>> {
    report.class_members.clone()
}

fn ceil_nonneg(q: &BigRational) -> BigInt {
    let (d, r) = q.numer().div_rem(q.denom());
    if r.is_zero() || q.is_negative() {
        d
    } else {
        d + 1
    }
}

/// Decimal digits needed above the point for values up to e^x.
fn exp_magnitude_digits(x: &BigRational) -> u32 {
    if !x.is_positive() {
        return 1;
    }
    // e^x < 10^(x/2): log10(e) < 1/2
    let bound = ceil_nonneg(&(x / BigRational::from(BigInt::from(2))));
    u32::try_from(&bound).unwrap_or(u32::MAX / 4) + 1
}

/// Series depth from the tail bound: the first k at which
/// (|beta| ||A||)^k / k! * e^(|beta| ||A||) drops below 10^-(P+5).
pub fn taylor_depth(a: &ExactMatrix, beta: &BigRational, prec: Precision) -> usize {
    let x = beta.abs() * a.inf_norm();
    let exp_ub =
        BigRational::from(BigInt::from(3).pow(u32::try_from(&ceil_nonneg(&x)).unwrap_or(0).max(1)));
    let threshold = BigRational::new(BigInt::one(), pow10(prec.digits() + 5));
    let mut bound = exp_ub;
    let mut k: usize = 0;
    while bound >= threshold {
        k += 1;
        bound = bound * &x / BigRational::from(BigInt::from(k));
    }
    k
}

fn taylor_sums_from_diagonals(
    diag_at: impl Fn(usize, usize) -> BigRational,
    n: usize,
    depth: usize,
    beta: &BigRational,
) -> Vec<BigRational> {
    let mut sums = vec![BigRational::one(); n];
    let mut coeff = BigRational::one(); // beta^k / k!
    for k in 1..=depth {
        coeff = coeff * beta / BigRational::from(BigInt::from(k as u64));
        for (i, s) in sums.iter_mut().enumerate() {
            let w = diag_at(i, k);
            if !w.is_zero() {
                *s += &coeff * w;
            }
        }
    }
    sums
}

fn taylor_report(
    sums: Vec<BigRational>,
    x: &BigRational,
    beta: &BigRational,
    prec: Precision,
) -> CentralityReport {
    let scale = prec.digits() + 15 + exp_magnitude_digits(x);
    let ctx = HpCtx::new(scale);
    let values = sums.iter().map(|s| ctx.from_rational(s)).collect();
    CentralityReport::build(
        CentralityFn::SubgraphTaylor,
        Some(rational_str(beta)),
        prec,
        values,
        None,
    )
}

/// Subgraph centrality by exact partial sums of the diagonal power series.
/// Valid for any square rational matrix, directed and weighted included.
/// Terms are summed exactly until the tail bound
/// (|beta| ||A||)^k / k! * e^(|beta| ||A||) drops below 10^-(P+5), then the
/// per-vertex sums are rounded once to the working scale. Matrix powers
/// stream over the denominator-cleared integer form.
pub fn subgraph_centrality_taylor(
    a: &ExactMatrix,
    beta: &BigRational,
    prec: Precision,
) -> Result<CentralityReport, CentralityError> {
    if beta.is_zero() {
        return Err(CentralityError::BetaZero);
    }
    let n = a.n();
    let depth = taylor_depth(a, beta, prec);
    let (m, den) = a.integral_form();
    // A^k = M^k / den^k: fold den into the per-term coefficient
    let scaled_beta = beta / BigRational::from(den);
    let mut diagonals: Vec<Vec<BigInt>> = Vec::with_capacity(depth);
    let mut power: Option<Vec<Vec<BigInt>>> = None;
    for _ in 0..depth {
        let next = match power {
            None => m.clone(),
            Some(p) => exact::int_mat_mul(&p, &m),
        };
        diagonals.push((0..n).map(|i| next[i][i].clone()).collect());
        power = Some(next);
    }
    let sums = taylor_sums_from_diagonals(
        |i, k| BigRational::from(diagonals[k - 1][i].clone()),
        n,
        depth,
        &scaled_beta,
    );
    let x = beta.abs() * a.inf_norm();
    Ok(taylor_report(sums, &x, beta, prec))
}

/// Taylor backend over a precomputed walk table, for callers sweeping
/// several beta values on one graph. The table must be at least
/// [`taylor_depth`] deep.
pub fn subgraph_centrality_taylor_with_walks(
    a: &ExactMatrix,
    walks: &exact::WalkTable,
    beta: &BigRational,
    prec: Precision,
) -> Result<CentralityReport, CentralityError> {
    if beta.is_zero() {
        return Err(CentralityError::BetaZero);
    }
    let depth = taylor_depth(a, beta, prec);
    if walks.r_max() < depth {
        return Err(CentralityError::WalkTableTooShallow {
            have: walks.r_max(),
            need: depth,
        });
    }
    let sums = taylor_sums_from_diagonals(
        |i, k| walks.count(i, k).clone(),
        a.n(),
        depth,
        beta,
    );
    let x = beta.abs() * a.inf_norm();
    Ok(taylor_report(sums, &x, beta, prec))
}

/// Subgraph centrality from spectral data: sum_h C[h][i] e^(beta mu_h).
pub fn subgraph_centrality_spectral(
    sd: &SpectralData,
    beta: &Beta,
    prec: Precision,
) -> Result<CentralityReport, CentralityError> {
    if sd.precision() < prec {
        return Err(CentralityError::Spectral(SpectralError::PrecisionMismatch {
            have: sd.precision().digits(),
            want: prec.digits(),
        }));
    }
    let beta_mag = match beta {
        Beta::Rational(q) => q.abs(),
        Beta::Real(x) => x.to_rational().abs(),
    };
    let mu_mag = sd.spectral_radius_bound();
    let headroom = exp_magnitude_digits(&(beta_mag * mu_mag));
    let ctx = HpCtx::new(sd.scale() + headroom);
    let b = beta.to_hp(&ctx);
    let exps: Vec<Hp> = (0..sd.distinct_count())
        .map(|h| {
            let arg = ctx.mul(&b, &sd.eigenvalue(h).rescale(ctx.scale()));
            ctx.exp(&arg)
        })
        .collect();
    let values: Vec<Hp> = (0..sd.n())
        .map(|i| {
            let mut acc = ctx.zero();
            for (h, e) in exps.iter().enumerate() {
                let c = sd.coefficient(h, i).rescale(ctx.scale());
                acc = acc.add(&ctx.mul(&c, e));
            }
            acc
        })
        .collect();
    Ok(CentralityReport::build(
        CentralityFn::SubgraphSpectral,
        Some(beta.describe()),
        prec,
        values,
        None,
    ))
}

/// Decides alpha < 1/rho(A) from eigenvalue enclosures (symmetric case) or
/// the max-row-sum bound (directed case).
fn check_resolvent_range(
    a: &ExactMatrix,
    alpha: &BigRational,
    prec: Precision,
) -> Result<(), CentralityError> {
    if !alpha.is_positive() {
        return Err(CentralityError::AlphaOutOfRange(rational_str(alpha)));
    }
    if a.is_symmetric() {
        // exact boundary case: 1/alpha is an eigenvalue
        let cp = exact::char_poly(a);
        let recip = alpha.recip();
        let mut val = BigRational::zero();
        for k in (0..=cp.degree()).rev() {
            val = val * &recip + cp.coeff(k);
        }
        if val.is_zero() {
            return Err(CentralityError::AlphaOutOfRange(rational_str(alpha)));
        }
        let mut eigs = spectral::isolate_eigenvalues(&cp, prec)?;
        loop {
            let hi_bound = eigs
                .iter()
                .flat_map(|e| [e.region.lo.abs(), e.region.hi.abs()])
                .max()
                .unwrap();
            let lo_bound = eigs
                .iter()
                .map(|e| e.region.lo.abs().min(e.region.hi.abs()))
                .max()
                .unwrap();
            if alpha * &hi_bound < BigRational::one() {
                return Ok(());
            }
            if alpha * &lo_bound >= BigRational::one() {
                return Err(CentralityError::AlphaOutOfRange(rational_str(alpha)));
            }
            for e in eigs.iter_mut() {
                let w = e.region.width() / BigRational::from(BigInt::from(1024));
                e.region = crate::poly::refine_region(&e.factor, &e.region, &w);
            }
        }
    } else {
        if alpha * a.inf_norm() < BigRational::one() {
            Ok(())
        } else {
            Err(CentralityError::AlphaOutOfRange(rational_str(alpha)))
        }
    }
}

/// Resolvent subgraph centrality: diagonal of (I - alpha A)^-1, computed by
/// exact rational inversion so the values are exact before rounding.
pub fn resolvent_centrality(
    a: &ExactMatrix,
    alpha: &BigRational,
    prec: Precision,
) -> Result<CentralityReport, CentralityError> {
    check_resolvent_range(a, alpha, prec)?;
    let n = a.n();
    let mut b = a.scale(&-alpha.clone());
    for i in 0..n {
        let cur = b.get(i, i).clone();
        b.set(i, i, cur + BigRational::one());
    }
    let inv = exact::rational_inverse(&b)?;
    let diag = inv.diagonal();
    let ctx = HpCtx::new(prec.digits() + 15);
    let values = diag.iter().map(|q| ctx.from_rational(q)).collect();
    Ok(CentralityReport::build(
        CentralityFn::Resolvent,
        Some(rational_str(alpha)),
        prec,
        values,
        Some(diag),
    ))
}

/// Exact degree centrality [A^2]_ii for undirected graphs.
pub fn degree_centrality(a: &ExactMatrix) -> Result<Vec<BigRational>, CentralityError> {
    if !a.is_symmetric() {
        return Err(CentralityError::NotSymmetric);
    }
    let table = exact::walk_counts(a, 2);
    Ok((0..a.n()).map(|i| table.count(i, 2).clone()).collect())
}

/// Degree centrality wrapped as a classified report.
pub fn degree_report(a: &ExactMatrix, prec: Precision) -> Result<CentralityReport, CentralityError> {
    let diag = degree_centrality(a)?;
    let ctx = HpCtx::new(prec.digits() + 15);
    let values = diag.iter().map(|q| ctx.from_rational(q)).collect();
    Ok(CentralityReport::build(
        CentralityFn::Degree,
        None,
        prec,
        values,
        Some(diag),
    ))
}

/// Eigenvector centrality (Perron entries) wrapped as a classified report.
pub fn eigenvector_report(
    a: &ExactMatrix,
    prec: Precision,
) -> Result<CentralityReport, CentralityError> {
    let v = spectral::perron_vector(a, prec)?;
    Ok(CentralityReport::build(
        CentralityFn::Eigenvector,
        None,
        prec,
        v,
        None,
    ))
}

/// Walk entropy of a subgraph-centrality report: Shannon entropy of the
/// normalized diagonal, plus the normalized weights and the maximality flag
/// against ln n.
pub struct EntropyReport {
    pub entropy: Hp,
    pub ln_n: Hp,
    pub maximal: bool,
    pub weights: Vec<Hp>,
    pub precision: Precision,
}

pub fn walk_entropy(
    report: &CentralityReport,
    prec: Precision,
) -> Result<EntropyReport, CentralityError> {
    if !matches!(
        report.function,
        CentralityFn::SubgraphTaylor | CentralityFn::SubgraphSpectral
    ) {
        return Err(CentralityError::NotSubgraphReport);
    }
    let scale = report.values[0].scale();
    let ctx = HpCtx::new(scale);
    if report.values.iter().any(|v| !v.is_positive()) {
        return Err(CentralityError::EntropyUndefined);
    }
    let total = report.values.iter().fold(ctx.zero(), |acc, v| acc.add(v));
    let weights: Vec<Hp> = report
        .values
        .iter()
        .map(|v| ctx.div(v, &total).expect("positive trace"))
        .collect();
    let mut entropy = ctx.zero();
    for p in &weights {
        let lp = ctx.ln(p).ok_or(CentralityError::EntropyUndefined)?;
        entropy = entropy.sub(&ctx.mul(p, &lp));
    }
    let ln_n = ctx
        .ln(&ctx.from_int(report.values.len() as i64))
        .expect("n >= 1");
    let eps = ctx.eps(prec.digits() - 15);
    let maximal = ln_n.sub(&entropy).abs().cmp_val(&eps) == Ordering::Less;
    Ok(EntropyReport {
        entropy,
        ln_n,
        maximal,
        weights,
        precision: prec,
    })
}

impl Serialize for EntropyReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.precision.digits();
        let mut s = serializer.serialize_struct("EntropyReport", 5)?;
        s.serialize_field("precision", &p)?;
        s.serialize_field("entropy", &self.entropy.to_decimal_trunc(p))?;
        s.serialize_field("ln_n", &self.ln_n.to_decimal_trunc(p))?;
        s.serialize_field("maximal", &self.maximal)?;
        let w: Vec<String> = self.weights.iter().map(|x| x.to_decimal_trunc(p)).collect();
        s.serialize_field("weights", &w)?;
        s.end()
    }
}

/// Spectral-backend subgraph classification with the borderline escalation
/// protocol: borderline gaps trigger a retry at max(200, 2P) digits; a
/// report still borderline after that is an error.
pub fn subgraph_equivalence_escalating(
    a: &ExactMatrix,
    beta: &BigRational,
    prec: Precision,
) -> Result<(CentralityReport, Precision), CentralityError> {
    let sd = spectral::decompose(a, prec)?;
    let report = subgraph_centrality_spectral(&sd, &Beta::rational(beta.clone())?, prec)?;
    if report.borderline_pairs.is_empty() {
        return Ok((report, prec));
    }
    let escalated = Precision::new(200.max(prec.digits() * 2)).expect(">= 30");
    let sd = spectral::decompose(a, escalated)?;
    let report = subgraph_centrality_spectral(&sd, &Beta::rational(beta.clone())?, escalated)?;
    if report.borderline_pairs.is_empty() {
        Ok((report, escalated))
    } else {
        Err(CentralityError::EscalationExhausted(escalated.digits()))
    }
}
