//! Univariate polynomials over exact rationals: square-free decomposition
//! and Sturm-sequence real root isolation with bisection refinement.
//!
//! Root enclosures carry exact rational endpoints, so downstream code can
//! tighten them to any width without re-running the isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial, coefficients ascending. The zero polynomial has an
/// empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    c: Vec<BigRational>,
}

impl RatPoly {
    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        RatPoly { c }
    }

    pub fn zero() -> Self {
        RatPoly { c: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn leading(&self) -> &BigRational {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for k in (0..self.c.len()).rev() {
            acc = acc * x + &self.c[k];
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.c.len() <= 1 {
            return RatPoly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * BigRational::from(BigInt::from(k)))
            .collect();
        RatPoly::from_coeffs(c)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let len = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.c.get(k).cloned().unwrap_or_else(BigRational::zero);
            let b = other.c.get(k).cloned().unwrap_or_else(BigRational::zero);
            c.push(a - b);
        }
        RatPoly::from_coeffs(c)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(c)
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut rem = self.c.clone();
        if rem.len() < d.c.len() {
            return (RatPoly::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let factor = &rem[k] / d.leading();
            if factor.is_zero() {
                continue;
            }
            quo[k - dd] = factor.clone();
            for (j, b) in d.c.iter().enumerate() {
                let delta = &factor * b;
                rem[k - dd + j] -= delta;
            }
        }
        (RatPoly::from_coeffs(quo), RatPoly::from_coeffs(rem))
    }

    /// Exact quotient; panics when the division has a remainder.
    pub fn div_exact(&self, d: &RatPoly) -> RatPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Scale to leading coefficient 1.
    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lc = self.leading().clone();
        RatPoly::from_coeffs(self.c.iter().map(|a| a / &lc).collect())
    }

    /// Scale by 1/|leading|; a positive scaling, preserving all signs.
    fn positive_normalized(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lc = self.leading().abs();
        RatPoly::from_coeffs(self.c.iter().map(|a| a / &lc).collect())
    }

    /// Strict upper bound on the absolute value of any real root.
    pub fn root_bound(&self) -> BigRational {
        let lc = self.leading().abs();
        let mut m = BigRational::zero();
        for a in &self.c[..self.c.len() - 1] {
            let r = a.abs() / &lc;
            if r > m {
                m = r;
            }
        }
        m + BigRational::one()
    }
}

/// Monic gcd by the Euclidean algorithm.
pub fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y);
        x = y;
        y = r;
    }
    if x.is_zero() {
        x
    } else {
        x.monic()
    }
}

/// Yun square-free decomposition: returns monic pairwise-coprime factors
/// with their multiplicities, so `f = lc * prod a_i^{m_i}`.
pub fn squarefree_decomposition(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Vec::new(),
    };
    let fp = f.derivative();
    let g = poly_gcd(f, &fp);
    if g.degree() == Some(0) || deg == 1 {
        return vec![(f.monic(), 1)];
    }
    let mut out = Vec::new();
    let mut b = f.div_exact(&g);
    let c = fp.div_exact(&g);
    let mut d = c.sub(&b.derivative());
    let mut i = 1usize;
    loop {
        let a = poly_gcd(&b, &d);
        if a.degree().map(|dg| dg >= 1).unwrap_or(false) {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a);
        if b.degree() == Some(0) {
            break;
        }
        let c_next = d.div_exact(&a);
        d = c_next.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Integer-cleared polynomial for fast exact sign evaluation at rationals.
struct ClearedPoly {
    ints: Vec<BigInt>,
}

impl ClearedPoly {
    fn from(p: &RatPoly) -> Self {
        let mut den = BigInt::one();
        for a in p.coeffs() {
            den = num_integer::lcm(den, a.denom().clone());
        }
        let ints = p
            .coeffs()
            .iter()
            .map(|a| a.numer() * (&den / a.denom()))
            .collect();
        ClearedPoly { ints }
    }

    /// Sign of p(num/den), den > 0. Horner with a running denominator
    /// power; no per-call allocation beyond the accumulators.
    fn sign_at(&self, num: &BigInt, den: &BigInt) -> i32 {
        if self.ints.is_empty() {
            return 0;
        }
        let d = self.ints.len() - 1;
        let mut acc = self.ints[d].clone();
        let mut dp = BigInt::one();
        for k in (0..d).rev() {
            dp *= den;
            acc = acc * num + &self.ints[k] * &dp;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    fn sign_at_rational(&self, x: &BigRational) -> i32 {
        self.sign_at(x.numer(), x.denom())
    }
}

/// Sturm chain of a square-free polynomial.
pub struct SturmChain {
    cleared: Vec<ClearedPoly>,
}

impl SturmChain {
    pub fn new(f: &RatPoly) -> Self {
        let mut seq = vec![f.positive_normalized(), f.derivative().positive_normalized()];
        loop {
            let k = seq.len();
            if seq[k - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[k - 2].div_rem(&seq[k - 1]);
            if r.is_zero() {
                break;
            }
            let neg = RatPoly::zero().sub(&r).positive_normalized();
            seq.push(neg);
        }
        SturmChain {
            cleared: seq.iter().map(ClearedPoly::from).collect(),
        }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0usize;
        let mut prev = 0i32;
        for p in &self.cleared {
            let s = p.sign_at_rational(x);
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    /// Number of distinct real roots in (a, b]; requires f(a) != 0 and
    /// f(b) != 0.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Enclosure of a single simple real root. `lo == hi` marks an exact
/// rational root; otherwise the root lies in the open interval and the
/// polynomial takes opposite nonzero signs at the endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootRegion {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootRegion {
    pub fn exact(x: BigRational) -> Self {
        RootRegion { hi: x.clone(), lo: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from(BigInt::from(2))
    }
}

/// Result of isolating the real roots of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct IsolationOutcome {
    /// Exact rational roots and sign-change brackets, sorted ascending.
    pub roots: Vec<RootRegion>,
    /// The rational-root-deflated polynomial whose sign changes define the
    /// brackets; use this (not the input) to refine them.
    pub bracket_poly: RatPoly,
}

/// Isolates every real root of a square-free polynomial. A root hit
/// exactly by a bisection point is returned as a point (deflating it and
/// restarting the scan); the rest come back as sign-change brackets of the
/// deflated polynomial.
pub fn isolate_real_roots(f: &RatPoly) -> IsolationOutcome {
    let mut exact: Vec<BigRational> = Vec::new();
    let mut work = f.clone();
    let brackets = 'restart: loop {
        match work.degree() {
            None | Some(0) => break Vec::new(),
            Some(1) => {
                exact.push(-(&work.coeffs()[0] / &work.coeffs()[1]));
                break Vec::new();
            }
            Some(_) => {}
        }
        let chain = SturmChain::new(&work);
        let cleared = ClearedPoly::from(&work);
        let bound = work.root_bound();
        let mut stack = vec![(-bound.clone(), bound.clone())];
        let mut found = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let count = chain.count_roots(&a, &b);
            if count == 0 {
                continue;
            }
            if count == 1 {
                found.push((a, b));
                continue;
            }
            let m = (&a + &b) / BigRational::from(BigInt::from(2));
            if cleared.sign_at_rational(&m) == 0 {
                exact.push(m.clone());
                let divisor = RatPoly::from_coeffs(vec![-m, BigRational::one()]);
                work = work.div_exact(&divisor);
                continue 'restart;
            }
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
        break found;
    };
    let mut out: Vec<RootRegion> = exact.into_iter().map(RootRegion::exact).collect();
    out.extend(brackets.into_iter().map(|(lo, hi)| RootRegion { lo, hi }));
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    IsolationOutcome {
        roots: out,
        bracket_poly: work,
    }
}

/// Shrinks a bracket around its root to at most `width` by sign bisection;
/// lands exactly on rational roots when a midpoint hits one.
///
/// Endpoints are kept over one shared denominator that doubles per step, so
/// the loop runs on bare integers with no rational normalization.
pub fn refine_region(f: &RatPoly, region: &RootRegion, width: &BigRational) -> RootRegion {
    if region.is_exact() {
        return region.clone();
    }
    let cleared = ClearedPoly::from(f);
    let den0 = num_integer::lcm(region.lo.denom().clone(), region.hi.denom().clone());
    let mut den = den0.clone();
    let mut lo = region.lo.numer() * (&den0 / region.lo.denom());
    let mut hi = region.hi.numer() * (&den0 / region.hi.denom());
    let sign_hi = cleared.sign_at(&hi, &den);
    if sign_hi == 0 {
        return RootRegion::exact(region.hi.clone());
    }
    // (hi - lo)/den > width  <=>  (hi - lo) * width.den > width.num * den
    while (&hi - &lo) * width.denom() > width.numer() * &den {
        let m = &lo + &hi;
        den *= 2;
        lo *= 2;
        hi *= 2;
        let s = cleared.sign_at(&m, &den);
        if s == 0 {
            return RootRegion::exact(BigRational::new(m, den));
        }
        if s == sign_hi {
            hi = m;
        } else {
            lo = m;
        }
    }
    RootRegion {
        lo: BigRational::new(lo, den.clone()),
        hi: BigRational::new(hi, den),
    }
}
