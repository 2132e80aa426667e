//! Exact rational linear algebra, the hypersimplex hyperplane arrangement and
//! exact convex-hull membership.
//!
//! Nothing in this module touches floating point: chamber membership and
//! regularity are zero tests.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use itertools::Itertools;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Arithmetic is checked: an i128 overflow panics instead of wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Sign as -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.cmp(&Ratio::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n as i128)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i128)
    }
}

macro_rules! checked_op {
    ($tr:ident, $method:ident, $checked:ident, $name:literal) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(
                    self.0
                        .$checked(&rhs.0)
                        .unwrap_or_else(|| panic!("rational overflow in {}", $name)),
                )
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (*self).$method(*rhs)
            }
        }
    };
}

checked_op!(Add, add, checked_add, "add");
checked_op!(Sub, sub, checked_sub, "sub");
checked_op!(Mul, mul, checked_mul, "mul");

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(
            self.0
                .checked_div(&rhs.0)
                .unwrap_or_else(|| panic!("rational overflow in div")),
        )
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = *self + rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i128>()
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse(q)?;
                if q == 0 {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rational::new(parse(p)?, q))
            }
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for `Rational::new`.
pub fn q(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

/// Fixed-length vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().copied().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }

    fn check_len(&self, other: &RationalVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(domain(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &RationalVector) -> Result<RationalVector> {
        self.check_len(other)?;
        Ok(RationalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &RationalVector) -> Result<RationalVector> {
        self.check_len(other)?;
        Ok(RationalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, c: Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|a| *a * c).collect())
    }

    /// Parses a comma-separated list of `p/q` entries.
    pub fn parse_list(s: &str) -> Result<RationalVector> {
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
    }
}

impl std::ops::Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Affine hyperplane `sum_{i in T} x_i = 1` of the hypersimplex arrangement.
///
/// Support indices are 0-based; `Display` prints them 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    support: Vec<usize>,
    n: usize,
}

impl Hyperplane {
    pub fn new(mut support: Vec<usize>, n: usize) -> Result<Self> {
        support.sort_unstable();
        support.dedup();
        if support.len() < 2 || support.len() > n / 2 {
            return Err(domain(format!(
                "hyperplane support size {} outside [2, {}]",
                support.len(),
                n / 2
            )));
        }
        if support.iter().any(|&i| i >= n) {
            return Err(domain("hyperplane support index out of range"));
        }
        Ok(Hyperplane { support, n })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `sum_{i in T} x_i - 1`.
    pub fn evaluate(&self, x: &RationalVector) -> Result<Rational> {
        if x.len() != self.n {
            return Err(domain(format!(
                "point has length {}, arrangement expects {}",
                x.len(),
                self.n
            )));
        }
        Ok(self.support.iter().map(|&i| x[i]).sum::<Rational>() - Rational::one())
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = self.support.iter().map(|i| format!("x{}", i + 1)).join("+");
        write!(f, "{lhs}=1")
    }
}

/// Chamber identifier: one sign in {-1, 0, +1} per arrangement hyperplane,
/// in canonical arrangement order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Self {
        SignVector(signs)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// No zero entry: the point is off every hyperplane.
    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|&s| s != 0)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All hyperplanes `sum_T x = 1` with `2 <= |T| <= floor(n/2)`, ordered by
/// support size then lexicographically.
///
/// For even `n` a support of size `n/2` and its complement cut the same
/// hyperplane of the slice `sum x = 2`; only the lex-smaller one is kept.
pub fn arrangement_for_n(n: usize) -> Result<Vec<Hyperplane>> {
    if n < 4 {
        return Err(domain(format!("arrangement needs n >= 4, got {n}")));
    }
    let mut out = Vec::new();
    for size in 2..=n / 2 {
        for support in (0..n).combinations(size) {
            if 2 * size == n {
                let complement: Vec<usize> = (0..n).filter(|i| !support.contains(i)).collect();
                if complement < support {
                    continue;
                }
            }
            out.push(Hyperplane { support, n });
        }
    }
    Ok(out)
}

/// Exact sign of `sum_T x - 1` for every hyperplane.
pub fn sign_vector(x: &RationalVector, arrangement: &[Hyperplane]) -> Result<SignVector> {
    arrangement
        .iter()
        .map(|h| h.evaluate(x).map(|v| v.signum()))
        .collect::<Result<Vec<_>>>()
        .map(SignVector)
}

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// column of each nonzero row.
pub(crate) fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c];
        for v in rows[r].iter_mut() {
            *v = *v * inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for j in c..ncols {
                    let d = f * rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix given as rows.
pub fn matrix_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

fn check_same_len(s: &[RationalVector]) -> Result<usize> {
    let n = s[0].len();
    if s.iter().any(|v| v.len() != n) {
        return Err(domain("vectors of different lengths"));
    }
    Ok(n)
}

/// Rank of `{v - v0 : v in S}`; the dimension of the affine hull of `S`.
pub fn affine_rank(s: &[RationalVector]) -> Result<usize> {
    if s.is_empty() {
        return Err(domain("affine rank of an empty set"));
    }
    check_same_len(s)?;
    let v0 = &s[0];
    let rows: Vec<Vec<Rational>> = s[1..]
        .iter()
        .map(|v| v.iter().zip(v0.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Ok(matrix_rank(&rows))
}

/// General solution of `A x = b` as `particular + sum_k t_k * directions[k]`,
/// one direction per free (non-pivot) column.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    pub particular: RationalVector,
    pub directions: Vec<RationalVector>,
}

impl AffineSolution {
    /// Evaluates the solution at the given values of the free variables.
    pub fn at(&self, free_values: &[Rational]) -> RationalVector {
        assert_eq!(free_values.len(), self.free.len());
        let mut x = self.particular.clone();
        for (t, d) in free_values.iter().zip(&self.directions) {
            x = x.checked_add(&d.scale(*t)).expect("same length");
        }
        x
    }
}

/// Solves `A x = b` exactly; `None` if inconsistent.
pub fn solve_affine_system(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<AffineSolution>> {
    if a.len() != b.len() {
        return Err(domain("row count of A and b differ"));
    }
    let ncols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != ncols) {
        return Err(domain("ragged matrix"));
    }
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][ncols];
    }
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![Rational::zero(); ncols];
            d[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                d[c] = -aug[r][f];
            }
            RationalVector(d)
        })
        .collect();
    Ok(Some(AffineSolution {
        pivots,
        free,
        particular: RationalVector(particular),
        directions,
    }))
}

/// Barycentric coordinates of `x` with respect to an affinely independent set.
///
/// Returns `None` when `x` is off the affine hull. Coordinates may be negative.
pub fn affine_coordinates(x: &RationalVector, s: &[RationalVector]) -> Result<Option<Vec<Rational>>> {
    if s.is_empty() {
        return Err(domain("empty point set"));
    }
    let n = check_same_len(s)?;
    if x.len() != n {
        return Err(domain("length mismatch"));
    }
    let mut a: Vec<Vec<Rational>> = (0..n).map(|j| s.iter().map(|v| v[j]).collect()).collect();
    a.push(vec![Rational::one(); s.len()]);
    let mut b: Vec<Rational> = x.entries().to_vec();
    b.push(Rational::one());
    match solve_affine_system(&a, &b)? {
        None => Ok(None),
        Some(sol) if sol.free.is_empty() => Ok(Some(sol.particular.0)),
        Some(_) => Err(domain("point set is not affinely independent")),
    }
}

/// Outcome of an exact convex-hull membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Nonnegative weights summing to one that reproduce the point exactly.
    Member(Vec<Rational>),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// A nonnegative solution of `A y = b`, if one exists.
///
/// Phase one of the simplex method over the rationals with Bland's rule.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if a.len() != b.len() {
        return Err(domain("row count of A and b differ"));
    }
    let m = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != m) {
        return Err(domain("ragged matrix"));
    }
    let rows = a.len();
    // Columns: m variables, `rows` artificials, then the right-hand side.
    let width = m + rows + 1;
    let mut tab: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(r, (coeffs, &rhs))| {
            let mut row = vec![Rational::zero(); width];
            let flip = rhs.is_negative();
            for (j, &c) in coeffs.iter().enumerate() {
                row[j] = if flip { -c } else { c };
            }
            row[m + r] = Rational::one();
            row[width - 1] = if flip { -rhs } else { rhs };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..m + rows).collect();

    loop {
        // Reduced cost of column j for min sum(artificials).
        let entering = (0..m + rows).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let artificial_cost = if j >= m { Rational::one() } else { Rational::zero() };
            let col_sum: Rational = (0..rows)
                .filter(|&r| basis[r] >= m)
                .map(|r| tab[r][j])
                .sum();
            (artificial_cost - col_sum).is_negative()
        });
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if tab[r][e].is_positive() {
                let ratio = tab[r][width - 1] / tab[r][e];
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio || (ratio == lratio && basis[r] < basis[lr]) {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        // Phase-one objective is bounded below by zero, so a leaving row exists.
        let (l, _) = leave.expect("phase one is bounded");
        let inv = Rational::one() / tab[l][e];
        for v in tab[l].iter_mut() {
            *v = *v * inv;
        }
        for r in 0..rows {
            if r != l && !tab[r][e].is_zero() {
                let f = tab[r][e];
                for j in 0..width {
                    let d = f * tab[l][j];
                    tab[r][j] -= d;
                }
            }
        }
        basis[l] = e;
    }

    let infeasibility: Rational = (0..rows)
        .filter(|&r| basis[r] >= m)
        .map(|r| tab[r][width - 1])
        .sum();
    if !infeasibility.is_zero() {
        return Ok(None);
    }
    let mut y = vec![Rational::zero(); m];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < m {
            y[bv] = tab[r][width - 1];
        }
    }
    Ok(Some(y))
}

/// Exact test `x in conv(S)`: nonnegative weights on `S` summing to one.
pub fn convex_membership(x: &RationalVector, s: &[RationalVector]) -> Result<Membership> {
    if s.is_empty() {
        return Ok(Membership::NotMember);
    }
    let n = check_same_len(s)?;
    if x.len() != n {
        return Err(domain("length mismatch"));
    }
    let mut a: Vec<Vec<Rational>> = (0..n).map(|r| s.iter().map(|v| v[r]).collect()).collect();
    a.push(vec![Rational::one(); s.len()]);
    let mut b = x.entries().to_vec();
    b.push(Rational::one());
    Ok(match nonnegative_solution(&a, &b)? {
        Some(w) => Membership::Member(w),
        None => Membership::NotMember,
    })
}

/// Exact test `x in relint conv(S)`: strictly positive weights on every
/// point of `S`.
///
/// Writes the weights as `(1 + u_i) / s` with `u >= 0`, `s >= 0`, which turns
/// strict positivity into a plain feasibility problem.
pub fn relative_interior_membership(x: &RationalVector, s: &[RationalVector]) -> Result<bool> {
    if s.is_empty() {
        return Ok(false);
    }
    let n = check_same_len(s)?;
    if x.len() != n {
        return Err(domain("length mismatch"));
    }
    let m = s.len();
    // sum_i u_i v_i - s x = -sum_i v_i ; sum_i u_i - s = -m
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = s.iter().map(|v| v[r]).collect();
            row.push(-x[r]);
            row
        })
        .collect();
    let mut last = vec![Rational::one(); m];
    last.push(-Rational::one());
    a.push(last);
    let mut b: Vec<Rational> = (0..n).map(|r| -s.iter().map(|v| v[r]).sum::<Rational>()).collect();
    b.push(-Rational::from(m as i64));
    Ok(nonnegative_solution(&a, &b)?.is_some())
}

/// `sum_i w_i v_i`.
pub fn combine(weights: &[Rational], s: &[RationalVector]) -> RationalVector {
    let n = s.first().map_or(0, RationalVector::len);
    let mut out = RationalVector::zeros(n);
    for (w, v) in weights.iter().zip(s) {
        out = out.checked_add(&v.scale(*w)).expect("same length");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[(i128, i128)]) -> RationalVector {
        RationalVector::new(v.iter().map(|&(p, d)| q(p, d)).collect())
    }

    /// 0/1 vertex of the hypersimplex with ones at the given 1-based positions.
    fn lambda(n: usize, i: usize, j: usize) -> RationalVector {
        let mut v = RationalVector::zeros(n);
        v.0[i - 1] = Rational::one();
        v.0[j - 1] = Rational::one();
        v
    }

    #[test]
    fn rational_lowest_terms_and_format() {
        let r = q(10, -4);
        assert_eq!(r.numer(), -5);
        assert_eq!(r.denom(), 2);
        assert_eq!(r.to_string(), "-5/2");
        assert_eq!(q(6, 3).to_string(), "2");
        assert_eq!("5/9".parse::<Rational>().unwrap(), q(5, 9));
        assert_eq!("-3".parse::<Rational>().unwrap(), q(-3, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert_eq!(serde_json::to_string(&q(4, 1)).unwrap(), "\"4\"");
        let back: Rational = serde_json::from_str("\"10/15\"").unwrap();
        assert_eq!(back, q(2, 3));
    }

    #[test]
    fn vector_length_mismatch_rejected() {
        let a = rv(&[(1, 2), (1, 2)]);
        let b = rv(&[(1, 2)]);
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_sub(&b).is_err());
    }

    #[test]
    fn arrangement_sizes() {
        let a4 = arrangement_for_n(4).unwrap();
        let names: Vec<String> = a4.iter().map(|h| h.to_string()).collect();
        assert_eq!(names, ["x1+x2=1", "x1+x3=1", "x1+x4=1"]);
        assert_eq!(arrangement_for_n(5).unwrap().len(), 10);
        let a6 = arrangement_for_n(6).unwrap();
        assert_eq!(a6.len(), 25);
        assert_eq!(a6.iter().filter(|h| h.support().len() == 2).count(), 15);
        assert_eq!(a6.iter().filter(|h| h.support().len() == 3).count(), 10);
        assert!(arrangement_for_n(3).is_err());
    }

    #[test]
    fn complement_hyperplanes_coincide_on_slice() {
        // Brute force over a grid of the slice sum x = 2, n = 6: for |T| = 3
        // the two sums are 1 simultaneously and their signs are opposite.
        let n = 6;
        let d = 6;
        let mut checked = 0;
        for ks in (0..n).map(|_| 0..=d).multi_cartesian_product() {
            if ks.iter().sum::<i128>() != 2 * d {
                continue;
            }
            let x = RationalVector::new(ks.iter().map(|&k| q(k, d)).collect());
            for t in (0..n).combinations(3) {
                let s: Rational = t.iter().map(|&i| x[i]).sum::<Rational>() - Rational::one();
                let c: Rational =
                    (0..n).filter(|i| !t.contains(i)).map(|i| x[i]).sum::<Rational>() - Rational::one();
                assert_eq!(s.signum(), -c.signum());
                checked += 1;
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn sign_vector_examples() {
        let a4 = arrangement_for_n(4).unwrap();
        let half = rv(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(sign_vector(&half, &a4).unwrap().signs(), &[0, 0, 0]);
        let qm = rv(&[(1, 3), (5, 9), (5, 9), (5, 9)]);
        assert_eq!(sign_vector(&qm, &a4).unwrap().signs(), &[-1, -1, -1]);
        let qp = rv(&[(2, 3), (4, 9), (4, 9), (4, 9)]);
        assert_eq!(sign_vector(&qp, &a4).unwrap().signs(), &[1, 1, 1]);
        assert!(sign_vector(&rv(&[(1, 1), (1, 1)]), &a4).is_err());
    }

    #[test]
    fn affine_rank_examples() {
        assert_eq!(affine_rank(&[lambda(4, 1, 2)]).unwrap(), 0);
        let s = [lambda(5, 1, 2), lambda(5, 1, 3), lambda(5, 2, 3), lambda(5, 4, 5)];
        assert_eq!(affine_rank(&s).unwrap(), 3);
        let all: Vec<_> = (1..=4)
            .tuple_combinations()
            .map(|(i, j)| lambda(4, i, j))
            .collect();
        assert_eq!(affine_rank(&all).unwrap(), 3);
        assert!(affine_rank(&[]).is_err());
    }

    #[test]
    fn convex_membership_examples() {
        let s = [lambda(4, 1, 2), lambda(4, 1, 3)];
        assert_eq!(
            convex_membership(&lambda(4, 1, 2), &s).unwrap(),
            Membership::Member(vec![q(1, 1), q(0, 1)])
        );

        let s5 = [lambda(5, 1, 2), lambda(5, 1, 3), lambda(5, 2, 3), lambda(5, 4, 5)];
        let x = rv(&[(7, 10), (6, 10), (5, 10), (1, 10), (1, 10)]);
        let expected = vec![q(4, 10), q(3, 10), q(2, 10), q(1, 10)];
        // Independent check of the frozen weights by matrix-vector product.
        assert_eq!(combine(&expected, &s5), x);
        assert_eq!(convex_membership(&x, &s5).unwrap(), Membership::Member(expected));

        assert_eq!(
            convex_membership(&rv(&[(1, 1), (1, 1), (0, 1), (0, 1)]), &[lambda(4, 3, 4)]).unwrap(),
            Membership::NotMember
        );
    }

    #[test]
    fn convex_membership_with_redundant_points() {
        // Octahedron: centre is a member, with dependent vertex set.
        let all: Vec<_> = (1..=4)
            .tuple_combinations()
            .map(|(i, j)| lambda(4, i, j))
            .collect();
        let centre = rv(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        match convex_membership(&centre, &all).unwrap() {
            Membership::Member(w) => {
                assert!(w.iter().all(|x| !x.is_negative()));
                assert_eq!(w.iter().copied().sum::<Rational>(), Rational::one());
                assert_eq!(combine(&w, &all), centre);
            }
            Membership::NotMember => panic!("centre must be inside"),
        }
        let outside = rv(&[(1, 1), (1, 1), (1, 1), (-1, 1)]);
        assert_eq!(convex_membership(&outside, &all).unwrap(), Membership::NotMember);
    }

    #[test]
    fn relative_interior() {
        let tri = [lambda(4, 1, 2), lambda(4, 1, 3), lambda(4, 2, 3)];
        let centroid = rv(&[(2, 3), (2, 3), (2, 3), (0, 1)]);
        assert!(relative_interior_membership(&centroid, &tri).unwrap());
        let edge_mid = rv(&[(1, 1), (1, 2), (1, 2), (0, 1)]);
        assert!(convex_membership(&edge_mid, &tri).unwrap().is_member());
        assert!(!relative_interior_membership(&edge_mid, &tri).unwrap());
        assert!(relative_interior_membership(&tri[0], &tri[..1]).unwrap());
        // Dependent set: centre of the square 12,34,13,24 is interior.
        let square = [lambda(4, 1, 2), lambda(4, 3, 4), lambda(4, 1, 3), lambda(4, 2, 4)];
        let centre = rv(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert!(relative_interior_membership(&centre, &square).unwrap());
        assert!(!relative_interior_membership(&square[0], &square).unwrap());
    }

    #[test]
    fn affine_system_and_coordinates() {
        let s = [lambda(5, 1, 2), lambda(5, 1, 3), lambda(5, 2, 3), lambda(5, 4, 5)];
        let x = rv(&[(7, 10), (6, 10), (5, 10), (1, 10), (1, 10)]);
        assert_eq!(
            affine_coordinates(&x, &s).unwrap().unwrap(),
            vec![q(4, 10), q(3, 10), q(2, 10), q(1, 10)]
        );
        let off = rv(&[(1, 2), (1, 2), (1, 2), (1, 2), (0, 1)]);
        assert_eq!(affine_coordinates(&off, &s).unwrap(), None);
    }
}
