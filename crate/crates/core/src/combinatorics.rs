//! Exact integer formulas: binomials, monomial counts, expected dimensions
//! of Hilbert schemes of fat planes and Taylor multidegrees.
//!
//! Every count is an arbitrary-precision integer. Binomials follow the
//! vanishing convention `binom(p, q) = 0` whenever `p < q`, including for
//! negative `p`, so correction terms for degrees below the multiplicity
//! disappear without special cases.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// A non-decreasing sequence of hypersurface degrees `d_1 <= ... <= d_s`,
/// each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return usage("multidegree must have at least one entry");
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 2) {
            return usage(format!("multidegree entries must be >= 2, got {d}"));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return usage(format!(
                "multidegree must be non-decreasing, got {}",
                join(&degrees)
            ));
        }
        Ok(Multidegree(degrees))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    /// Number of equations `s`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> u32 {
        *self.0.last().expect("non-empty")
    }

    /// True when the largest degree occurs exactly once.
    pub fn max_is_unique(&self) -> bool {
        self.0.len() == 1 || self.0[self.0.len() - 2] < self.max()
    }

    /// The first `k` degrees, i.e. the multidegree of the ambient
    /// complete intersection after `len() - k` small steps.
    pub fn prefix(&self, k: usize) -> Option<Multidegree> {
        (k >= 1 && k <= self.0.len()).then(|| Multidegree(self.0[..k].to_vec()))
    }
}

impl TryFrom<Vec<u32>> for Multidegree {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Multidegree::new(v)
    }
}

impl From<Multidegree> for Vec<u32> {
    fn from(m: Multidegree) -> Self {
        m.0
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

impl std::str::FromStr for Multidegree {
    type Err = Error;

    /// Parses a comma-separated list such as `20,30`. Order is preserved.
    fn from_str(s: &str) -> Result<Self> {
        let degrees = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Usage(format!("invalid degree '{}'", part.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Multidegree::new(degrees)
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Discrete shape of a `t`-fat `r`-plane in `P^n`.
///
/// In canonical coordinates the plane is cut out by
/// `x_0^t = x_1 = ... = x_{n-r-1} = 0`; its span is the `(r+1)`-plane
/// `x_1 = ... = x_{n-r-1} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FatShape {
    pub n: u32,
    pub r: u32,
    pub t: u32,
}

impl FatShape {
    pub fn new(n: u32, r: u32, t: u32) -> Result<Self> {
        if r >= n {
            return usage(format!("plane dimension r={r} must be < n={n}"));
        }
        if t < 2 {
            return usage(format!("multiplicity t={t} must be >= 2"));
        }
        Ok(FatShape { n, r, t })
    }

    /// Number of linear equations `n - r - 1` besides `x_0^t`.
    pub fn codim_linear(&self) -> u32 {
        self.n - self.r - 1
    }
}

/// Expected dimension of the Hilbert scheme of fat planes and its parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoBreakdown {
    #[serde(with = "crate::bigint_serde")]
    pub rho: BigInt,
    /// Dimension of the flag variety of fat planes, `(r+2)(n-r) - 1`.
    #[serde(with = "crate::bigint_serde")]
    pub flag_dim: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub c: BigInt,
    #[serde(with = "crate::bigint_serde::vec")]
    pub c_per_degree: Vec<BigInt>,
}

/// Binomial coefficient with `binom(p, q) = 0` for `p < q`.
pub fn binom(p: i64, q: i64) -> Result<BigInt> {
    if q < 0 {
        return usage(format!("binomial lower index must be >= 0, got {q}"));
    }
    Ok(binom_nonneg(p, q as u64))
}

pub(crate) fn binom_nonneg(p: i64, q: u64) -> BigInt {
    if p < 0 || (p as u64) < q {
        return BigInt::zero();
    }
    let p = p as u64;
    let q = q.min(p - q);
    let mut acc = BigInt::one();
    for i in 0..q {
        acc *= p - i;
        acc /= i + 1;
    }
    acc
}

/// Number of monomials of degree `e` in `u` variables; zero for `e < 0`.
pub fn h0_monomials(u: u32, e: i64) -> Result<BigInt> {
    if u == 0 {
        return usage("variable count must be >= 1");
    }
    Ok(binom_nonneg(e + u as i64 - 1, u as u64 - 1))
}

/// Sum of [`h0_monomials`] over the entries of a degree sequence.
pub fn h0_monomials_seq(u: u32, degrees: &[i64]) -> Result<BigInt> {
    degrees
        .iter()
        .try_fold(BigInt::zero(), |acc, &e| Ok(acc + h0_monomials(u, e)?))
}

/// Dimension of the degree-`d` part of `k[x_0..x_{r+1}]/(x_0^t)`.
pub fn h0_fat(r: u32, t: u32, d: i64) -> Result<BigInt> {
    if t < 2 {
        return usage(format!("multiplicity t={t} must be >= 2"));
    }
    Ok(h0_fat_unchecked(r, t, d))
}

fn h0_fat_unchecked(r: u32, t: u32, d: i64) -> BigInt {
    let r = r as i64;
    binom_nonneg(d + r + 1, r as u64 + 1) - binom_nonneg(d - t as i64 + r + 1, r as u64 + 1)
}

/// Expected dimension of the Hilbert scheme of `t`-fat `r`-planes in a
/// complete intersection of type `dd` in `P^n`.
pub fn rho_expected(n: u32, r: u32, t: u32, dd: &Multidegree) -> Result<RhoBreakdown> {
    FatShape::new(n, r, t)?;
    if t > dd.max() {
        return usage(format!(
            "multiplicity t={t} exceeds max degree {}",
            dd.max()
        ));
    }
    if dd.len() as u32 > n - r - 1 {
        return usage(format!(
            "number of equations s={} exceeds n-r-1={}",
            dd.len(),
            n - r - 1
        ));
    }
    let degrees: Vec<i64> = dd.degrees().iter().map(|&d| d as i64).collect();
    Ok(expected_dimension(n as i64, r, t, &degrees))
}

/// Unvalidated expected-dimension formula; accepts degree 1 entries and
/// any number of equations. The Taylor-type checks evaluate it at
/// sequences that are not multidegrees.
pub fn expected_dimension(n: i64, r: u32, t: u32, degrees: &[i64]) -> RhoBreakdown {
    let ri = r as i64;
    let flag_dim = BigInt::from((ri + 2) * (n - ri) - 1);
    let c_per_degree: Vec<BigInt> = degrees.iter().map(|&d| h0_fat_unchecked(r, t, d)).collect();
    let c: BigInt = c_per_degree.iter().sum();
    RhoBreakdown {
        rho: &flag_dim - &c,
        flag_dim,
        c,
        c_per_degree,
    }
}

/// Expected dimension in the form used for covering: with `t = max(dd)`
/// occurring once, `(r+2)(n-r) - sum binom(d_i+r+1, r+1)`.
pub fn rho_covering(n: i64, r: u32, degrees: &[u32]) -> BigInt {
    let ri = r as i64;
    let sum: BigInt = degrees
        .iter()
        .map(|&d| binom_nonneg(d as i64 + ri + 1, r as u64 + 1))
        .sum();
    BigInt::from((ri + 2) * (n - ri)) - sum
}

/// Degree sequences of the Taylor components at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaylorDegrees {
    /// `(1..=d_1, ..., 1..=d_s)`, sorted.
    pub with_linear: Vec<u32>,
    /// Same with the linear terms dropped, sorted.
    pub without_linear: Vec<u32>,
}

pub fn taylor_degrees(dd: &Multidegree) -> TaylorDegrees {
    let mut with_linear: Vec<u32> = dd.degrees().iter().flat_map(|&d| 1..=d).collect();
    with_linear.sort_unstable();
    let without_linear = with_linear.iter().copied().filter(|&d| d >= 2).collect();
    TaylorDegrees {
        with_linear,
        without_linear,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec()).unwrap()
    }

    fn pascal_table(max: usize) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for p in 1..=max {
            let prev = &rows[p - 1];
            let mut row = vec![BigInt::one(); p + 1];
            for q in 1..p {
                row[q] = &prev[q - 1] + &prev[q];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binom_matches_pascal_oracle() {
        let table = pascal_table(60);
        assert_eq!(table[25][6], BigInt::from(177100));
        for p in 0..=60i64 {
            for q in 0..=p {
                assert_eq!(binom(p, q).unwrap(), table[p as usize][q as usize]);
            }
        }
        assert_eq!(binom(25, 6).unwrap(), BigInt::from(177100));
    }

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(4, 6).unwrap(), BigInt::zero());
        assert_eq!(binom(5, 0).unwrap(), BigInt::one());
        assert_eq!(binom(-3, 2).unwrap(), BigInt::zero());
        assert!(matches!(binom(5, -1), Err(Error::Usage(_))));
        // binom(36, 6) and far larger do not overflow
        assert_eq!(binom(36, 6).unwrap(), BigInt::from(1947792));
        assert_eq!(
            binom(100, 50).unwrap().to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn pascal_identity_exhaustive() {
        for p in 1..=60i64 {
            for q in 1..=p {
                assert_eq!(
                    binom(p, q).unwrap(),
                    binom(p - 1, q - 1).unwrap() + binom(p - 1, q).unwrap()
                );
            }
        }
    }

    fn count_monomials(u: u32, e: i64, x0_bound: Option<u32>) -> u64 {
        // brute force over exponent vectors
        fn rec(vars_left: u32, remaining: u32, first: bool, bound: Option<u32>) -> u64 {
            if vars_left == 1 {
                return match (first, bound) {
                    (true, Some(b)) if remaining >= b => 0,
                    _ => 1,
                };
            }
            (0..=remaining)
                .filter(|&a| !(first && bound.is_some_and(|b| a >= b)))
                .map(|a| rec(vars_left - 1, remaining - a, false, bound))
                .sum()
        }
        if e < 0 {
            return 0;
        }
        rec(u, e as u32, true, x0_bound)
    }

    #[test]
    fn h0_monomials_examples() {
        assert_eq!(count_monomials(3, 3, None), 10);
        assert_eq!(h0_monomials(3, 3).unwrap(), BigInt::from(10));
        assert_eq!(h0_monomials(4, 0).unwrap(), BigInt::one());
        assert_eq!(h0_monomials(3, -1).unwrap(), BigInt::zero());
        assert_eq!(h0_monomials_seq(3, &[2, 3]).unwrap(), BigInt::from(16));
        assert!(h0_monomials(0, 2).is_err());
    }

    #[test]
    fn h0_fat_examples() {
        assert_eq!(h0_fat(1, 2, 2).unwrap(), BigInt::from(5));
        assert_eq!(h0_fat(1, 3, 3).unwrap(), BigInt::from(9));
        assert_eq!(h0_fat(0, 2, 5).unwrap(), BigInt::from(2));
        assert_eq!(h0_fat(2, 2, -1).unwrap(), BigInt::zero());
        assert!(h0_fat(1, 1, 2).is_err());
    }

    #[test]
    fn h0_fat_agrees_with_difference_and_enumeration() {
        for r in 0..=4u32 {
            for t in 2..=6u32 {
                for d in 0..=10i64 {
                    let fat = h0_fat(r, t, d).unwrap();
                    let diff = h0_monomials(r + 2, d).unwrap()
                        - h0_monomials(r + 2, d - t as i64).unwrap();
                    assert_eq!(fat, diff);
                    assert_eq!(fat, BigInt::from(count_monomials(r + 2, d, Some(t))));
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let b = rho_expected(3, 1, 2, &md(&[2])).unwrap();
        assert_eq!(b.rho, BigInt::zero());
        assert_eq!(b.flag_dim, BigInt::from(5));
        assert_eq!(b.c, BigInt::from(5));

        let b = rho_expected(5, 0, 3, &md(&[2, 3])).unwrap();
        assert_eq!(b.rho, BigInt::from(3));
        assert_eq!(b.c_per_degree, vec![BigInt::from(3), BigInt::from(3)]);
    }

    #[test]
    fn rho_preconditions() {
        assert!(rho_expected(3, 3, 2, &md(&[2])).is_err());
        assert!(rho_expected(3, 1, 3, &md(&[2])).is_err());
        assert!(rho_expected(3, 1, 1, &md(&[2])).is_err());
        assert!(rho_expected(3, 1, 2, &md(&[2, 2])).is_err());
    }

    #[test]
    fn multidegree_validation() {
        assert!(Multidegree::new(vec![]).is_err());
        assert!(Multidegree::new(vec![1, 3]).is_err());
        assert!(Multidegree::new(vec![3, 2]).is_err());
        assert_eq!("2, 3".parse::<Multidegree>().unwrap(), md(&[2, 3]));
        assert!("2,x".parse::<Multidegree>().is_err());
        assert!(md(&[2, 3]).max_is_unique());
        assert!(!md(&[3, 3]).max_is_unique());
        assert!(md(&[3]).max_is_unique());
    }

    #[test]
    fn taylor_examples() {
        let td = taylor_degrees(&md(&[2, 3]));
        assert_eq!(td.with_linear, vec![1, 1, 2, 2, 3]);
        assert_eq!(td.without_linear, vec![2, 2, 3]);
        assert_eq!(taylor_degrees(&md(&[2])).without_linear, vec![2]);
        assert_eq!(
            taylor_degrees(&md(&[3, 3])).without_linear,
            vec![2, 2, 3, 3]
        );
    }

    fn multidegree_strategy() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(2u32..=9, 1..=4).prop_map(|mut v| {
            v.sort_unstable();
            v
        })
    }

    proptest! {
        #[test]
        fn breakdown_is_consistent(r in 0u32..5, extra in 0u32..6, degrees in multidegree_strategy(), tsel in 0u32..8) {
            let dd = Multidegree::new(degrees).unwrap();
            let n = r + dd.len() as u32 + 1 + extra;
            let t = 2 + tsel % (dd.max() - 1);
            let b = rho_expected(n, r, t, &dd).unwrap();
            prop_assert_eq!(&b.rho, &(&b.flag_dim - &b.c));
            prop_assert_eq!(&b.c, &b.c_per_degree.iter().sum::<BigInt>());
        }

        #[test]
        fn unique_max_rho_matches_covering_form(r in 0u32..5, extra in 0u32..6, degrees in multidegree_strategy()) {
            let mut degrees = degrees;
            let top = *degrees.last().unwrap() + 1;
            degrees.push(top);
            let dd = Multidegree::new(degrees).unwrap();
            let n = r + dd.len() as u32 + 1 + extra;
            let b = rho_expected(n, r, dd.max(), &dd).unwrap();
            prop_assert_eq!(b.rho, rho_covering(n as i64, r, dd.degrees()));
        }
    }
}
