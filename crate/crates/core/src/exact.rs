//! Exact arbitrary-precision linear algebra: matrix powers and their
//! diagonals, characteristic polynomial, rational nullspace and inverse,
//! and the cospectrality / walk-regularity decisions.
//!
//! No floating-point arithmetic occurs anywhere in this module; equality of
//! walk counts is decided exactly.

use crate::graph::VertexPair;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

/// Dense square matrix over exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        ExactMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, ExactError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(ExactError::Dimension(row.len(), n));
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn diagonal(&self) -> Vec<BigRational> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// Max absolute row sum.
    pub fn inf_norm(&self) -> BigRational {
        let mut best = BigRational::zero();
        for i in 0..self.n {
            let s: BigRational = (0..self.n).map(|j| self.get(i, j).abs()).sum();
            if s > best {
                best = s;
            }
        }
        best
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = ExactMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn add_scaled_identity(&self, c: &BigRational) -> ExactMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            let cur = out.get(i, i).clone();
            out.set(i, i, cur + c);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> ExactMatrix {
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Clears denominators: returns integral M and positive den with
    /// self = M / den.
    pub fn integral_form(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let n = self.n;
        let mut den = BigInt::one();
        for e in &self.entries {
            den = den.lcm(e.denom());
        }
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = self.get(i, j);
                        e.numer() * (&den / e.denom())
                    })
                    .collect()
            })
            .collect();
        (m, den)
    }
}

/// Integer matrix product helper shared by the power-streaming paths.
pub(crate) fn int_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                let add = &a[i][k] * &b[k][j];
                out[i][j] += add;
            }
        }
    }
    out
}

/// Per-vertex closed-walk counts `[A^r]_ii` for r = 1..=r_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTable {
    n: usize,
    r_max: usize,
    /// counts[i][r-1] = [A^r]_ii
    counts: Vec<Vec<BigRational>>,
}

impl WalkTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn count(&self, vertex: usize, r: usize) -> &BigRational {
        &self.counts[vertex][r - 1]
    }

    pub fn row(&self, vertex: usize) -> &[BigRational] {
        &self.counts[vertex]
    }

    /// Sum of the diagonal at power r, i.e. trace(A^r).
    pub fn diagonal_sum(&self, r: usize) -> BigRational {
        (0..self.n).map(|i| self.count(i, r).clone()).sum()
    }
}

/// Exact diagonals of A^r for r = 1..=r_max by iterated multiplication.
pub fn walk_counts(a: &ExactMatrix, r_max: usize) -> WalkTable {
    assert!(r_max >= 1);
    let n = a.n();
    let mut counts = vec![Vec::with_capacity(r_max); n];
    let mut power = a.clone();
    for i in 0..n {
        counts[i].push(power.get(i, i).clone());
    }
    for _ in 2..=r_max {
        power = power.mul(a);
        for (i, row) in counts.iter_mut().enumerate() {
            row.push(power.get(i, i).clone());
        }
    }
    WalkTable { n, r_max, counts }
}

/// Monic characteristic polynomial det(xI - A).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    /// Coefficients from constant to leading term; length n + 1, last = 1.
    coeffs: Vec<BigRational>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of x^k.
    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(coeffs.last().map(|c| c.is_one()).unwrap_or(false));
        CharPoly { coeffs }
    }

    /// Power sums of the roots via Newton's recurrence, p_1..=p_r.
    /// Independent of any walk-count computation.
    pub fn power_sums(&self, r: usize) -> Vec<BigRational> {
        let n = self.degree();
        // e_k = (-1)^k * coeff(n - k)
        let e: Vec<BigRational> = (0..=n)
            .map(|k| {
                let c = self.coeffs[n - k].clone();
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        let mut p: Vec<BigRational> = Vec::with_capacity(r);
        for k in 1..=r {
            let mut acc = BigRational::zero();
            for i in 1..k.min(n + 1) {
                let sign = if (i - 1) % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                acc += sign * &e[i] * &p[k - 1 - i];
            }
            if k <= n {
                let sign = if (k - 1) % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                acc += sign * &e[k] * BigRational::from(BigInt::from(k));
            }
            p.push(acc);
        }
        p
    }
}

/// Faddeev-LeVerrier recurrence; exact for any square rational matrix.
pub fn char_poly(a: &ExactMatrix) -> CharPoly {
    let n = a.n();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = ExactMatrix::identity(n);
    for k in 1..=n {
        m = a.mul(&m);
        let c = -(m.trace() / BigRational::from(BigInt::from(k)));
        m = m.add_scaled_identity(&c);
        coeffs[n - k] = c;
    }
    CharPoly { coeffs }
}

/// Exact cospectrality decision: `[A^r]_ii == [A^r]_jj` for r = 1..=n-1
/// suffices, because higher powers of A are linear combinations of the
/// first n-1 powers and the identity.
pub fn cospectral(a: &ExactMatrix, p: VertexPair) -> bool {
    let n = a.n();
    if n <= 1 {
        return true;
    }
    let table = walk_counts(a, n - 1);
    table.row(p.i) == table.row(p.j)
}

/// Walk table variant for callers that already have diagonals.
pub fn cospectral_in_table(table: &WalkTable, p: VertexPair) -> bool {
    table.row(p.i) == table.row(p.j)
}

/// True iff every diagonal of A^r is constant for r = 1..=n-1.
pub fn walk_regular(a: &ExactMatrix) -> bool {
    let n = a.n();
    if n <= 1 {
        return true;
    }
    let table = walk_counts(a, n - 1);
    (1..n).all(|i| table.row(i) == table.row(0))
}

/// Exact partition of vertices into cospectrality classes, each class
/// listed by ascending vertex id and classes ordered by smallest member.
pub fn cospectral_classes(a: &ExactMatrix) -> Vec<Vec<usize>> {
    let n = a.n();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![vec![0]];
    }
    let table = walk_counts(a, n - 1);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        match classes
            .iter_mut()
            .find(|c| table.row(c[0]) == table.row(v))
        {
            Some(c) => c.push(v),
            None => classes.push(vec![v]),
        }
    }
    classes
}

/// Basis of Ker(B) in reduced-row-echelon canonical form: one vector per
/// free column f, with entry 1 at f and the negated reduced coefficients at
/// the pivot positions.
pub fn rational_nullspace(b: &ExactMatrix) -> Vec<Vec<BigRational>> {
    let n = b.n();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| b.get(i, j).clone()).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].clone();
        for j in col..n {
            m[row][j] = &m[row][j] / &inv;
        }
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..n {
                    let delta = &factor * &m[row][j];
                    m[r][j] = &m[r][j] - delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut basis = Vec::new();
    for f in 0..n {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![BigRational::zero(); n];
        v[f] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn rational_inverse(b: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
    let n = b.n();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| b.get(i, j).clone()).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Err(ExactError::Singular);
        };
        m.swap(col, pr);
        let inv = m[col][col].clone();
        for j in 0..2 * n {
            m[col][j] = &m[col][j] / &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in 0..2 * n {
                    let delta = &factor * &m[col][j];
                    m[r][j] = &m[r][j] - delta;
                }
            }
        }
    }
    let rows = m.into_iter().map(|row| row[n..].to_vec()).collect();
    ExactMatrix::from_rows(rows)
}

/// Solves an integer system exactly by fraction-free (Bareiss) elimination;
/// all intermediate values stay integral, with one rational
/// back-substitution pass at the end. Errors when the matrix is singular.
pub fn solve_integer(b: &[Vec<BigInt>], rhs: &[BigInt]) -> Result<Vec<BigRational>, ExactError> {
    let n = b.len();
    assert_eq!(rhs.len(), n);
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = b[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(pr) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Err(ExactError::Singular);
        };
        m.swap(k, pr);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from(m[i][n].clone());
        for j in (i + 1)..n {
            acc -= BigRational::from(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from(m[i][i].clone());
    }
    Ok(x)
}

/// Solves B x = rhs exactly; errors when B is singular.
pub fn solve(b: &ExactMatrix, rhs: &[BigRational]) -> Result<Vec<BigRational>, ExactError> {
    let n = b.n();
    assert_eq!(rhs.len(), n);
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| b.get(i, j).clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Err(ExactError::Singular);
        };
        m.swap(col, pr);
        let inv = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=n {
                    let delta = &factor * &m[col][j];
                    m[r][j] = &m[r][j] - delta;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn rational_str(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the "p/q" (or bare integer) form emitted by [`rational_str`].
pub fn rational_from_str(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.parse().ok()?;
            let den: BigInt = q.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => Some(BigRational::from(s.parse::<BigInt>().ok()?)),
    }
}

impl Serialize for WalkTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("WalkTable", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("r_max", &self.r_max)?;
        let rows: Vec<Vec<String>> = self
            .counts
            .iter()
            .map(|row| row.iter().map(rational_str).collect())
            .collect();
        s.serialize_field("counts", &rows)?;
        s.end()
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CharPoly", 2)?;
        s.serialize_field("degree", &self.degree())?;
        let coeffs: Vec<String> = self.coeffs.iter().map(rational_str).collect();
        s.serialize_field("coefficients_ascending", &coeffs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for WalkTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            r_max: usize,
            counts: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.counts.len() != raw.n {
            return Err(D::Error::custom("walk table row count mismatch"));
        }
        let counts = raw
            .counts
            .iter()
            .map(|row| {
                if row.len() != raw.r_max {
                    return Err(D::Error::custom("walk table column count mismatch"));
                }
                row.iter()
                    .map(|s| {
                        rational_from_str(s)
                            .ok_or_else(|| D::Error::custom("bad rational literal"))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<BigRational>>, D::Error>>()?;
        Ok(WalkTable {
            n: raw.n,
            r_max: raw.r_max,
            counts,
        })
    }
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            degree: usize,
            coefficients_ascending: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.coefficients_ascending.len() != raw.degree + 1 {
            return Err(D::Error::custom("coefficient count mismatch"));
        }
        let coeffs = raw
            .coefficients_ascending
            .iter()
            .map(|s| rational_from_str(s).ok_or_else(|| D::Error::custom("bad rational literal")))
            .collect::<Result<Vec<BigRational>, D::Error>>()?;
        if !coeffs.last().map(|c| c.is_one()).unwrap_or(false) {
            return Err(D::Error::custom("characteristic polynomial must be monic"));
        }
        Ok(CharPoly { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn rat(p: i64) -> BigRational {
        BigRational::from(BigInt::from(p))
    }

    fn rat2(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn path3() -> ExactMatrix {
        parse_edge_list("0 1\n1 2").unwrap().adjacency_matrix()
    }

    fn triangle() -> ExactMatrix {
        parse_edge_list("0 1\n1 2\n0 2").unwrap().adjacency_matrix()
    }

    #[test]
    fn walk_counts_match_hand_counts() {
        let t = walk_counts(&path3(), 3);
        assert_eq!(t.row(0), &[rat(0), rat(1), rat(0)]);
        assert_eq!(t.row(1), &[rat(0), rat(2), rat(0)]);
        assert_eq!(t.row(2), &[rat(0), rat(1), rat(0)]);

        let t = walk_counts(&triangle(), 3);
        for v in 0..3 {
            assert_eq!(t.row(v), &[rat(0), rat(2), rat(2)]);
        }
    }

    #[test]
    fn weighted_walks_square_the_weight() {
        let g = parse_edge_list("0 1 3/2").unwrap();
        let t = walk_counts(&g.adjacency_matrix(), 2);
        assert_eq!(t.row(0), &[rat(0), rat2(9, 4)]);
        assert_eq!(t.row(1), &[rat(0), rat2(9, 4)]);
    }

    #[test]
    fn char_poly_known_graphs() {
        // K_2: x^2 - 1
        let k2 = parse_edge_list("0 1").unwrap().adjacency_matrix();
        assert_eq!(char_poly(&k2).coeffs(), &[rat(-1), rat(0), rat(1)]);
        // P_3: x^3 - 2x
        assert_eq!(
            char_poly(&path3()).coeffs(),
            &[rat(0), rat(-2), rat(0), rat(1)]
        );
        // K_3: x^3 - 3x - 2
        assert_eq!(
            char_poly(&triangle()).coeffs(),
            &[rat(-2), rat(-3), rat(0), rat(1)]
        );
    }

    #[test]
    fn char_poly_matches_brute_force_determinant() {
        // oracle: det(xI - A) by cofactor expansion at several integer x,
        // then coefficients recovered by exact interpolation
        fn det(m: &Vec<Vec<BigRational>>) -> BigRational {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = BigRational::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigRational>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[r][c].clone())
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
                acc += sign * &m[0][j] * det(&minor);
            }
            acc
        }

        let a = ExactMatrix::from_rows(vec![
            vec![rat2(1, 2), rat(3), rat(0), rat(-1)],
            vec![rat(2), rat(0), rat2(-1, 3), rat(1)],
            vec![rat(0), rat(1), rat(4), rat(0)],
            vec![rat(5), rat2(2, 7), rat(0), rat(-2)],
        ])
        .unwrap();
        let cp = char_poly(&a);
        for x in -3i64..=3 {
            let xr = rat(x);
            let grid: Vec<Vec<BigRational>> = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            if i == j {
                                &xr - a.get(i, j)
                            } else {
                                -a.get(i, j).clone()
                            }
                        })
                        .collect()
                })
                .collect();
            let expect = det(&grid);
            let mut val = BigRational::zero();
            for k in (0..=4).rev() {
                val = val * &xr + cp.coeff(k);
            }
            assert_eq!(val, expect, "x = {x}");
        }
    }

    #[test]
    fn cospectral_decisions() {
        let p3 = path3();
        assert!(cospectral(&p3, VertexPair::new(0, 2, 3).unwrap()));
        assert!(!cospectral(&p3, VertexPair::new(0, 1, 3).unwrap()));

        // star K_{1,3}: leaves pairwise cospectral
        let star = parse_edge_list("0 1\n0 2\n0 3").unwrap().adjacency_matrix();
        assert!(cospectral(&star, VertexPair::new(1, 2, 4).unwrap()));
        assert!(cospectral(&star, VertexPair::new(2, 3, 4).unwrap()));
        assert!(!cospectral(&star, VertexPair::new(0, 1, 4).unwrap()));
    }

    #[test]
    fn walk_regularity_of_symmetric_graphs() {
        for n in 2..=8usize {
            let mut lines = String::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    lines.push_str(&format!("{i} {j}\n"));
                }
            }
            let kn = parse_edge_list(&lines).unwrap().adjacency_matrix();
            assert!(walk_regular(&kn), "K_{n}");
        }
        let c4 = parse_edge_list("0 1\n1 2\n2 3\n0 3").unwrap().adjacency_matrix();
        assert!(walk_regular(&c4));
        assert!(!walk_regular(&path3()));
    }

    #[test]
    fn nullspace_cases() {
        let z = ExactMatrix::zeros(2);
        assert_eq!(rational_nullspace(&z).len(), 2);

        let id = ExactMatrix::identity(3);
        assert!(rational_nullspace(&id).is_empty());

        // P_3 adjacency has kernel spanned by (1, 0, -1)
        let basis = rational_nullspace(&path3());
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // proportional to (1, 0, -1)
        assert!(v[1].is_zero());
        assert_eq!(v[0], -v[2].clone());
        assert!(!v[0].is_zero());
        // and B v = 0 exactly
        let prod = path3().mul_vec(v);
        assert!(prod.iter().all(|e| e.is_zero()));
    }

    #[test]
    fn inverse_cases() {
        let id = ExactMatrix::identity(3);
        assert_eq!(rational_inverse(&id).unwrap(), id);

        let swap = ExactMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]).unwrap();
        assert_eq!(rational_inverse(&swap).unwrap(), swap);

        let d = ExactMatrix::from_rows(vec![vec![rat(2), rat(0)], vec![rat(0), rat2(1, 2)]]).unwrap();
        let inv = rational_inverse(&d).unwrap();
        assert_eq!(inv.get(0, 0), &rat2(1, 2));
        assert_eq!(inv.get(1, 1), &rat(2));

        assert_eq!(
            rational_inverse(&ExactMatrix::zeros(2)).unwrap_err(),
            ExactError::Singular
        );

        let prod = d.mul(&inv);
        assert_eq!(prod, ExactMatrix::identity(2));
    }

    #[test]
    fn newton_power_sums_equal_traces() {
        for text in ["0 1\n1 2", "0 1\n1 2\n0 2", "0 1\n0 2\n0 3"] {
            let a = parse_edge_list(text).unwrap().adjacency_matrix();
            let n = a.n();
            let cp = char_poly(&a);
            let sums = cp.power_sums(n);
            let table = walk_counts(&a, n);
            for r in 1..=n {
                assert_eq!(sums[r - 1], table.diagonal_sum(r), "{text} r={r}");
            }
        }
    }

    #[test]
    fn walk_table_serializes_rationals_as_fraction_strings() {
        let g = parse_edge_list("0 1 3/2").unwrap();
        let t = walk_counts(&g.adjacency_matrix(), 2);
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"9/4\""), "{json}");
        assert!(json.contains("\"0\""), "{json}");
    }

    #[test]
    fn walk_table_and_char_poly_round_trip_through_json() {
        let g = parse_edge_list("0 1 3/2\n1 2\n0 2 -7/3").unwrap();
        let a = g.adjacency_matrix();
        let t = walk_counts(&a, 5);
        let back: WalkTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(t, back);
        let cp = char_poly(&a);
        let back: CharPoly = serde_json::from_str(&serde_json::to_string(&cp).unwrap()).unwrap();
        assert_eq!(cp, back);
    }
}
