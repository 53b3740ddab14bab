//! Chow-triviality bounds for complete intersections and the search over
//! recursive strategies (small steps followed by a big step or the
//! projective-space base case).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom_nonneg, rho_covering, Multidegree, RhoBreakdown};
use crate::error::{usage, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepTag {
    Small,
    Big,
    Base,
}

/// Caveats attached to a bound. Presence means the named hypothesis is
/// not met (or, for `conjectural_mode`, was waived).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisFlag {
    /// The big step was applied with a degree equal to 2.
    ElvDegreeTwoCaveat,
    /// A small step needs the consumed degree to strictly exceed the next.
    RequiresStrictTop,
    /// A small step needs the consumed degree to be at least 3.
    RequiresTGe3,
    /// Degree-2 big steps were admitted on request.
    ConjecturalMode,
    /// No strategy had all its hypotheses satisfied.
    NoAdmissibleStrategy,
    /// The closed form displayed for the second small step of a
    /// codimension-two recursion differs from the derived threshold.
    DisplayedSecondTermDiffers,
}

pub type Flags = BTreeSet<HypothesisFlag>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    #[serde(with = "crate::bigint_serde")]
    pub n: BigInt,
    pub flags: Flags,
}

/// Smallest `n` with `r * max(dd) + sum(dd) <= n`.
pub fn conjecture_bound(r: u32, dd: &Multidegree) -> BigInt {
    let sum: u64 = dd.degrees().iter().map(|&d| d as u64).sum();
    BigInt::from(r as u64 * dd.max() as u64 + sum)
}

/// `sum binom(d_i + r, r + 1)`, flagged when some degree equals 2.
pub fn elv_bound(r: u32, dd: &Multidegree) -> Bound {
    let n = dd
        .degrees()
        .iter()
        .map(|&d| binom_nonneg(d as i64 + r as i64, r as u64 + 1))
        .sum();
    let mut flags = Flags::new();
    if dd.degrees().contains(&2) {
        flags.insert(HypothesisFlag::ElvDegreeTwoCaveat);
    }
    Bound { n, flags }
}

fn small_step_flags(dd: &Multidegree) -> Flags {
    let mut flags = Flags::new();
    if !dd.max_is_unique() {
        flags.insert(HypothesisFlag::RequiresStrictTop);
    }
    if dd.max() < 3 {
        flags.insert(HypothesisFlag::RequiresTGe3);
    }
    flags
}

/// Minimal `n` satisfying the covering inequality `rho + r >= n - s`:
/// `ceil((sum binom(d_i+r+1, r+1) + r^2 + r - s) / (r+1))`.
pub fn small_step_min_n(r: u32, dd: &Multidegree) -> Bound {
    let ri = r as i64;
    let sum: BigInt = dd
        .degrees()
        .iter()
        .map(|&d| binom_nonneg(d as i64 + ri + 1, r as u64 + 1))
        .sum();
    let numerator = sum + BigInt::from(ri * ri + ri - dd.len() as i64);
    Bound {
        n: numerator.div_ceil(&BigInt::from(ri + 1)),
        flags: small_step_flags(dd),
    }
}

/// Result of the covering inequality at a given `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covering {
    pub holds: bool,
    #[serde(with = "crate::bigint_serde")]
    pub rho: BigInt,
    /// The same quantity in breakdown form, with `t = max(dd)`.
    pub breakdown: RhoBreakdown,
    pub flags: Flags,
}

/// Checks `rho + r >= n - s` with `rho = (r+2)(n-r) - sum binom(d_i+r+1, r+1)`.
pub fn covering_condition(n: u32, r: u32, dd: &Multidegree) -> Result<Covering> {
    let s = dd.len() as u32;
    if n < r + 1 || s > n - r - 1 {
        return usage(format!(
            "covering needs 1 <= s <= n-r-1, got n={n}, r={r}, s={s}"
        ));
    }
    let rho = rho_covering(n as i64, r, dd.degrees());
    let holds = &rho + BigInt::from(r) >= BigInt::from(n as i64 - s as i64);
    let degrees: Vec<i64> = dd.degrees().iter().map(|&d| d as i64).collect();
    let breakdown = crate::combinatorics::expected_dimension(n as i64, r, dd.max(), &degrees);
    let mut flags = Flags::new();
    if !dd.max_is_unique() {
        flags.insert(HypothesisFlag::RequiresStrictTop);
    }
    Ok(Covering {
        holds,
        rho,
        breakdown,
        flags,
    })
}

/// One recursive strategy: `k` small steps, each consuming the largest
/// remaining degree, then a big step (`k < s`) or the base case (`k = s`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStrategy {
    pub k: usize,
    pub steps: Vec<StepTag>,
    /// Small-step thresholds, one per small step.
    #[serde(with = "crate::bigint_serde::vec")]
    pub step_values: Vec<BigInt>,
    #[serde(with = "crate::bigint_serde")]
    pub terminal: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub value: BigInt,
    pub admissible: bool,
    pub blocking: Flags,
}

/// The displayed codimension-two recursion against its derived form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoEquationComparison {
    #[serde(with = "crate::bigint_serde")]
    pub first_term: BigInt,
    /// `ceil((binom(d_1+r+2, r+2) + r^2 + 3r) / (r+2))`.
    #[serde(with = "crate::bigint_serde")]
    pub displayed_second_term: BigInt,
    /// Threshold of the second small step, numerator `... + r^2 + 3r + 1`.
    #[serde(with = "crate::bigint_serde")]
    pub derived_second_term: BigInt,
    pub differs: bool,
}

pub fn two_equation_comparison(r: u32, dd: &Multidegree) -> Option<TwoEquationComparison> {
    if dd.len() != 2 {
        return None;
    }
    let ri = r as i64;
    let d1 = dd.degrees()[0] as i64;
    let first_term = small_step_min_n(r, dd).n;
    let top = binom_nonneg(d1 + ri + 2, r as u64 + 2);
    let displayed_second_term =
        (&top + BigInt::from(ri * ri + 3 * ri)).div_ceil(&BigInt::from(ri + 2));
    let derived_second_term = small_step_min_n(r + 1, &dd.prefix(1)?).n;
    let differs = displayed_second_term != derived_second_term;
    Some(TwoEquationComparison {
        first_term,
        displayed_second_term,
        derived_second_term,
        differs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub r: u32,
    pub dd: Multidegree,
    #[serde(with = "crate::bigint_serde")]
    pub conjecture_n: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub elv_n: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub small_step_n: BigInt,
    /// `None` when no strategy is admissible.
    #[serde(with = "crate::bigint_serde::option")]
    pub best_n: Option<BigInt>,
    pub strategy: Vec<StepTag>,
    pub hypothesis_flags: Flags,
    pub strategies: Vec<StepStrategy>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub two_equation: Option<TwoEquationComparison>,
}

fn enumerate_strategy(r: u32, dd: &Multidegree, k: usize, conjectural: bool) -> StepStrategy {
    let s = dd.len();
    let mut steps = Vec::with_capacity(k + 1);
    let mut step_values = Vec::with_capacity(k);
    let mut blocking = Flags::new();
    for level in 0..k {
        let remaining = dd.prefix(s - level).expect("level < s");
        let bound = small_step_min_n(r + level as u32, &remaining);
        blocking.extend(bound.flags);
        steps.push(StepTag::Small);
        step_values.push(bound.n);
    }
    let terminal = if k < s {
        let remaining = dd.prefix(s - k).expect("k < s");
        let big = elv_bound(r + k as u32, &remaining);
        if !conjectural {
            blocking.extend(big.flags);
        }
        steps.push(StepTag::Big);
        big.n
    } else {
        steps.push(StepTag::Base);
        BigInt::from(r as u64 + s as u64)
    };
    let value = step_values
        .iter()
        .chain(std::iter::once(&terminal))
        .max()
        .cloned()
        .expect("non-empty");
    StepStrategy {
        k,
        steps,
        step_values,
        terminal,
        value,
        admissible: blocking.is_empty(),
        blocking,
    }
}

/// Runs every bound and picks the cheapest admissible recursive strategy.
pub fn best_bound(r: u32, dd: &Multidegree, conjectural: bool) -> BoundReport {
    let strategies: Vec<StepStrategy> = (0..=dd.len())
        .map(|k| enumerate_strategy(r, dd, k, conjectural))
        .collect();
    let best = strategies
        .iter()
        .filter(|s| s.admissible)
        .min_by(|a, b| a.value.cmp(&b.value).then(b.k.cmp(&a.k)));

    let elv = elv_bound(r, dd);
    let small = small_step_min_n(r, dd);
    let mut hypothesis_flags = Flags::new();
    hypothesis_flags.extend(elv.flags.iter().copied());
    hypothesis_flags.extend(small.flags.iter().copied());
    if conjectural {
        hypothesis_flags.insert(HypothesisFlag::ConjecturalMode);
    }
    if best.is_none() {
        hypothesis_flags.insert(HypothesisFlag::NoAdmissibleStrategy);
    }
    let two_equation = two_equation_comparison(r, dd);
    if two_equation.as_ref().is_some_and(|c| c.differs) {
        hypothesis_flags.insert(HypothesisFlag::DisplayedSecondTermDiffers);
    }

    BoundReport {
        r,
        dd: dd.clone(),
        conjecture_n: conjecture_bound(r, dd),
        elv_n: elv.n,
        small_step_n: small.n,
        best_n: best.map(|s| s.value.clone()),
        strategy: best.map(|s| s.steps.clone()).unwrap_or_default(),
        hypothesis_flags,
        strategies,
        two_equation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec()).unwrap()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn conjecture_examples() {
        assert_eq!(conjecture_bound(1, &md(&[3])), int(6));
        assert_eq!(conjecture_bound(5, &md(&[20, 30])), int(200));
        assert_eq!(conjecture_bound(0, &md(&[7])), int(7));
    }

    #[test]
    fn elv_examples() {
        let b = elv_bound(5, &md(&[20, 30]));
        assert_eq!(b.n, int(177100 + 1623160));
        assert_eq!(b.n, int(1800260));
        assert!(b.flags.is_empty());
        assert_eq!(elv_bound(1, &md(&[3])).n, int(6));
        let b = elv_bound(0, &md(&[2]));
        assert_eq!(b.n, int(2));
        assert!(b.flags.contains(&HypothesisFlag::ElvDegreeTwoCaveat));
    }

    #[test]
    fn small_step_examples() {
        let b = small_step_min_n(5, &md(&[20, 30]));
        assert_eq!(b.n, int(363009));
        assert!(b.flags.is_empty());
        assert_eq!(small_step_min_n(1, &md(&[3])).n, int(6));
        assert_eq!(small_step_min_n(6, &md(&[20])).n, int(126868));
        assert_eq!(small_step_min_n(0, &md(&[2, 3])).n, int(5));

        let flags = small_step_min_n(1, &md(&[3, 3])).flags;
        assert!(flags.contains(&HypothesisFlag::RequiresStrictTop));
        let flags = small_step_min_n(1, &md(&[2])).flags;
        assert!(flags.contains(&HypothesisFlag::RequiresTGe3));
    }

    #[test]
    fn best_bound_large_example() {
        let report = best_bound(5, &md(&[20, 30]), false);
        assert_eq!(report.best_n, Some(int(363009)));
        assert_eq!(
            report.strategy,
            vec![StepTag::Small, StepTag::Small, StepTag::Base]
        );
        let values: Vec<BigInt> = report.strategies.iter().map(|s| s.value.clone()).collect();
        assert_eq!(values, vec![int(1800260), int(657800), int(363009)]);
        assert_eq!(report.strategies[1].terminal, int(657800));
        assert!(report.strategies.iter().all(|s| s.admissible));
    }

    #[test]
    fn best_bound_cubic() {
        let report = best_bound(1, &md(&[3]), false);
        assert_eq!(report.best_n, Some(int(6)));
        assert_eq!(report.strategies[0].value, int(6));
        assert_eq!(report.strategies[1].value, int(6));
        assert_eq!(report.conjecture_n, int(6));
        assert_eq!(report.elv_n, int(6));
        assert_eq!(report.small_step_n, int(6));
    }

    #[test]
    fn best_bound_blocked_strategies_are_listed() {
        let report = best_bound(0, &md(&[2, 3]), false);
        let full = &report.strategies[2];
        assert_eq!(full.step_values[0], int(5));
        assert!(!full.admissible);
        assert!(full.blocking.contains(&HypothesisFlag::RequiresTGe3));
        assert!(!report.strategies[0].admissible);
        assert_eq!(report.best_n, None);
        assert!(report
            .hypothesis_flags
            .contains(&HypothesisFlag::NoAdmissibleStrategy));

        let report = best_bound(0, &md(&[2, 3]), true);
        assert!(report.best_n.is_some());
        assert!(report
            .hypothesis_flags
            .contains(&HypothesisFlag::ConjecturalMode));
    }

    #[test]
    fn two_equation_display_against_derivation() {
        let cmp = two_equation_comparison(5, &md(&[20, 30])).unwrap();
        assert_eq!(cmp.first_term, int(363009));
        assert_eq!(cmp.displayed_second_term, int(126868));
        assert_eq!(cmp.derived_second_term, int(126868));
        assert!(!cmp.differs);
        // r=0, d_1=3: displayed (10+0)/2 = 5, derived (10+1)/2 -> 6
        let cmp = two_equation_comparison(0, &md(&[3, 4])).unwrap();
        assert_eq!(cmp.displayed_second_term, int(5));
        assert_eq!(cmp.derived_second_term, int(6));
        assert!(cmp.differs);
        assert!(two_equation_comparison(1, &md(&[3])).is_none());
    }

    #[test]
    fn covering_examples() {
        let c = covering_condition(5, 0, &md(&[2, 3])).unwrap();
        assert!(c.holds);
        assert_eq!(c.rho, int(3));
        let c = covering_condition(4, 0, &md(&[2, 3])).unwrap();
        assert!(!c.holds);
        assert_eq!(c.rho, int(1));
        assert!(covering_condition(2, 0, &md(&[2, 3])).is_err());
        let c = covering_condition(8, 1, &md(&[3, 3])).unwrap();
        assert!(c.flags.contains(&HypothesisFlag::RequiresStrictTop));
    }

    #[test]
    fn json_shape() {
        let report = best_bound(5, &md(&[20, 30]), false);
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["conjecture_n"], 200);
        assert_eq!(v["elv_n"], 1800260);
        assert_eq!(v["best_n"], 363009);
        assert_eq!(v["strategy"], serde_json::json!(["small", "small", "base"]));
        let back: BoundReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, report);
    }

    fn degrees_strategy(max_len: usize, max_deg: u32) -> impl Strategy<Value = Multidegree> {
        prop::collection::vec(2u32..=max_deg, 1..=max_len).prop_map(|mut v| {
            v.sort_unstable();
            Multidegree::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn small_step_is_exact_threshold(r in 0u32..=6, dd in degrees_strategy(4, 12)) {
            let n = small_step_min_n(r, &dd).n;
            let n: u32 = n.try_into().unwrap();
            prop_assert!(covering_condition(n, r, &dd).unwrap().holds);
            match covering_condition(n - 1, r, &dd) {
                Ok(c) => prop_assert!(!c.holds),
                Err(_) => prop_assert!(n - 1 < r + dd.len() as u32 + 1),
            }
        }

        #[test]
        fn two_equation_first_term_matches(r in 0u32..=6, d1 in 2u32..12, gap in 1u32..6) {
            let dd = md(&[d1, d1 + gap]);
            let ri = r as i64;
            let numerator = binom_nonneg(d1 as i64 + ri + 1, r as u64 + 1)
                + binom_nonneg((d1 + gap) as i64 + ri + 1, r as u64 + 1)
                + BigInt::from(ri * ri + ri - 2);
            let expected = numerator.div_ceil(&BigInt::from(ri + 1));
            prop_assert_eq!(small_step_min_n(r, &dd).n, expected);
        }

        #[test]
        fn best_never_exceeds_unflagged_elv(r in 0u32..=6, dd in degrees_strategy(4, 12)) {
            let report = best_bound(r, &dd, false);
            if elv_bound(r, &dd).flags.is_empty() {
                prop_assert!(report.best_n.clone().unwrap() <= report.elv_n);
            }
        }

        #[test]
        fn conjecture_is_below_best(r in 0u32..=6, dd in prop::collection::vec(3u32..=12, 1..=4)) {
            let mut dd = dd;
            dd.sort_unstable();
            let dd = Multidegree::new(dd).unwrap();
            let report = best_bound(r, &dd, false);
            prop_assert!(report.conjecture_n <= report.best_n.unwrap());
        }

        #[test]
        fn best_is_monotone_in_r(r in 0u32..6, dd in degrees_strategy(4, 12), conjectural in any::<bool>()) {
            let lo = best_bound(r, &dd, conjectural);
            let hi = best_bound(r + 1, &dd, conjectural);
            match (lo.best_n, hi.best_n) {
                (Some(a), Some(b)) => prop_assert!(a <= b),
                (a, b) => prop_assert_eq!(a.is_none(), b.is_none()),
            }
        }

        #[test]
        fn best_is_monotone_in_each_degree(r in 0u32..=5, dd in degrees_strategy(4, 12), idx in 0usize..4, conjectural in any::<bool>()) {
            let idx = idx % dd.len();
            let mut raised = dd.degrees().to_vec();
            raised[idx] += 1;
            prop_assume!(raised.windows(2).all(|w| w[0] <= w[1]));
            let raised = Multidegree::new(raised).unwrap();
            let lo = best_bound(r, &dd, conjectural);
            let hi = best_bound(r, &raised, conjectural);
            // every fixed strategy is monotone
            for (a, b) in lo.strategies.iter().zip(&hi.strategies) {
                prop_assert!(a.value <= b.value);
            }
            // the optimum is monotone when admissibility is unchanged
            let pattern = |rep: &BoundReport| rep.strategies.iter().map(|s| s.admissible).collect::<Vec<_>>();
            if pattern(&lo) == pattern(&hi) {
                if let (Some(a), Some(b)) = (lo.best_n, hi.best_n) {
                    prop_assert!(a <= b);
                }
            }
        }
    }
}
