//! Numerical classes of bundles on a curve and how relative Frobenius acts
//! on them.
//!
//! A bundle is modeled by its `(rank, degree)` pair. Pushforward along the
//! relative Frobenius sends `(r, d)` to `(r p, d + r (p - 1)(g - 1))`;
//! pullback sends `(r, d)` to `(r, p d)`. The canonical filtration of
//! `F^* F_* E` on a curve has gradeds `E ⊗ (Ω¹)^l` for `0 ≤ l < p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Characteristic and genus of the ambient curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveContext {
    p: i64,
    g: i64,
}

impl CurveContext {
    pub fn new(p: i64, g: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if g < 0 {
            return Err(Error::NegativeGenus(g));
        }
        Ok(CurveContext { p, g })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    /// Degree of the canonical bundle, `2g - 2`.
    pub fn canonical_degree(&self) -> i64 {
        2 * self.g - 2
    }

    /// Fails with `GenusTooSmall` unless `g ≥ 2`.
    pub fn require_genus_at_least_two(&self) -> Result<()> {
        if self.g < 2 {
            Err(Error::GenusTooSmall(self.g))
        } else {
            Ok(())
        }
    }
}

/// Same as [`CurveContext::new`].
pub fn make_context(p: i64, g: i64) -> Result<CurveContext> {
    CurveContext::new(p, g)
}

/// Trial division.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2i64;
    while k <= n / k {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawInvariants")]
pub struct BundleInvariants {
    rank: i64,
    degree: i64,
}

#[derive(Deserialize)]
struct RawInvariants {
    rank: i64,
    degree: i64,
}

impl TryFrom<RawInvariants> for BundleInvariants {
    type Error = Error;

    fn try_from(raw: RawInvariants) -> Result<Self> {
        BundleInvariants::new(raw.rank, raw.degree)
    }
}

impl BundleInvariants {
    pub fn new(rank: i64, degree: i64) -> Result<Self> {
        if rank < 1 {
            return Err(Error::InvalidRank(rank));
        }
        Ok(BundleInvariants { rank, degree })
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn slope(&self) -> Rational {
        // rank ≥ 1, so the only failure mode of `new` is unreachable here.
        Rational::new(self.degree, self.rank).expect("rank is positive")
    }

    /// Componentwise sum, as for a direct sum or an extension.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(BundleInvariants {
            rank: self.rank.checked_add(other.rank).ok_or(Error::Overflow("rank sum"))?,
            degree: self
                .degree
                .checked_add(other.degree)
                .ok_or(Error::Overflow("degree sum"))?,
        })
    }
}

pub fn slope(inv: BundleInvariants) -> Rational {
    inv.slope()
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("invariant arithmetic"))
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("invariant arithmetic"))
}

/// `(r, d) ↦ (r p, d + r (p - 1)(g - 1))`.
///
/// Defined for every genus; the stability statements that motivate it only
/// hold for `g ≥ 1`.
pub fn pushforward_invariants(inv: BundleInvariants, ctx: CurveContext) -> Result<BundleInvariants> {
    let rank = mul(inv.rank, ctx.p)?;
    let shift = mul(mul(inv.rank, ctx.p - 1)?, ctx.g - 1)?;
    BundleInvariants::new(rank, add(inv.degree, shift)?)
}

/// `(r, d) ↦ (r, p d)`.
pub fn pullback_invariants(inv: BundleInvariants, ctx: CurveContext) -> Result<BundleInvariants> {
    BundleInvariants::new(inv.rank, mul(inv.degree, ctx.p)?)
}

/// Slope of `F_* E` in closed form: `(p - 1)(2g - 2) / (2p) + μ(E) / p`.
pub fn pushforward_slope(inv: BundleInvariants, ctx: CurveContext) -> Result<Rational> {
    let p = Rational::from_integer(ctx.p);
    let two_p = Rational::from_integer(mul(2, ctx.p)?);
    let correction = Rational::from_integer(mul(ctx.p - 1, ctx.canonical_degree())?).checked_div(&two_p)?;
    correction.checked_add(&inv.slope().checked_div(&p)?)
}

/// Gradeds of the canonical filtration of `F^* F_* E`, listed from
/// `l = p - 1` down to `l = 0`; the `l`-th graded is `(r, d + l r (2g - 2))`.
///
/// For `g ≥ 2` this is descending slope order, i.e. the order of the
/// Harder-Narasimhan filtration.
pub fn canonical_filtration_profile(inv: BundleInvariants, ctx: CurveContext) -> Result<Vec<BundleInvariants>> {
    let step = mul(inv.rank, ctx.canonical_degree())?;
    (0..ctx.p)
        .rev()
        .map(|l| BundleInvariants::new(inv.rank, add(inv.degree, mul(l, step)?)?))
        .collect()
}

/// Componentwise total of a list of invariants; `None` for an empty list.
pub fn total(parts: &[BundleInvariants]) -> Result<Option<BundleInvariants>> {
    let mut iter = parts.iter();
    let Some(first) = iter.next() else {
        return Ok(None);
    };
    iter.try_fold(*first, |acc, x| acc.checked_add(x)).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inv(r: i64, d: i64) -> BundleInvariants {
        BundleInvariants::new(r, d).unwrap()
    }

    fn ctx(p: i64, g: i64) -> CurveContext {
        CurveContext::new(p, g).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn context_validation() {
        assert_eq!(make_context(2, 2).unwrap(), ctx(2, 2));
        assert_eq!(make_context(4, 2), Err(Error::NonPrimeCharacteristic(4)));
        assert_eq!(make_context(5, 0).unwrap().g(), 0);
        assert_eq!(make_context(1, 2), Err(Error::NonPrimeCharacteristic(1)));
        assert_eq!(make_context(3, -1), Err(Error::NegativeGenus(-1)));
        assert!(ctx(3, 1).require_genus_at_least_two().is_err());
        assert!(ctx(3, 2).require_genus_at_least_two().is_ok());
    }

    #[test]
    fn primality_small() {
        let primes: Vec<i64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(7919));
        assert!(!is_prime(7917));
    }

    #[test]
    fn slopes() {
        assert_eq!(slope(inv(2, 3)), q(3, 2));
        assert_eq!(slope(inv(4, 2)), q(1, 2));
        assert_eq!(slope(inv(1, -3)).to_string(), "-3/1");
        assert_eq!(BundleInvariants::new(0, 1), Err(Error::InvalidRank(0)));
    }

    #[test]
    fn pushforward_examples() {
        assert_eq!(pushforward_invariants(inv(1, 0), ctx(2, 2)).unwrap(), inv(2, 1));
        assert_eq!(pushforward_invariants(inv(3, 5), ctx(7, 1)).unwrap(), inv(21, 5));
        for (p, g, d) in [(2, 2, 0), (3, 2, 1), (5, 3, -2), (7, 4, 9)] {
            let c = ctx(p, g);
            let line = inv(1, d - (p - 1) * (g - 1));
            assert_eq!(pushforward_invariants(line, c).unwrap(), inv(p, d));
        }
    }

    #[test]
    fn pullback_examples() {
        assert_eq!(pullback_invariants(inv(2, 3), ctx(5, 2)).unwrap(), inv(2, 15));
        assert_eq!(pullback_invariants(inv(1, 0), ctx(7, 0)).unwrap(), inv(1, 0));
        assert_eq!(pullback_invariants(inv(6, 5), ctx(2, 2)).unwrap(), inv(6, 10));
    }

    #[test]
    fn pushforward_slope_examples() {
        assert_eq!(pushforward_slope(inv(1, 0), ctx(2, 2)).unwrap(), q(1, 2));
        assert_eq!(pushforward_slope(inv(2, 3), ctx(3, 2)).unwrap(), q(7, 6));
        assert_eq!(slope(inv(6, 7)), q(7, 6));
        assert_eq!(pushforward_slope(inv(3, 4), ctx(5, 1)).unwrap(), q(4, 15));
    }

    #[test]
    fn profile_examples() {
        assert_eq!(
            canonical_filtration_profile(inv(1, 0), ctx(2, 2)).unwrap(),
            vec![inv(1, 2), inv(1, 0)]
        );
        assert_eq!(
            canonical_filtration_profile(inv(4, 3), ctx(3, 1)).unwrap(),
            vec![inv(4, 3); 3]
        );
        let prof = canonical_filtration_profile(inv(2, 1), ctx(3, 2)).unwrap();
        assert_eq!(prof, vec![inv(2, 9), inv(2, 5), inv(2, 1)]);
        assert_eq!(total(&prof).unwrap(), Some(inv(6, 15)));
        let c = ctx(3, 2);
        let round = pullback_invariants(pushforward_invariants(inv(2, 1), c).unwrap(), c).unwrap();
        assert_eq!(round, inv(6, 15));
    }

    #[test]
    fn overflow_is_reported() {
        let c = ctx(3, 2);
        assert_eq!(
            pushforward_invariants(inv(i64::MAX / 2, 0), c),
            Err(Error::Overflow("invariant arithmetic"))
        );
        assert!(pullback_invariants(inv(1, i64::MAX), c).is_err());
    }

    #[test]
    fn serde_shape() {
        assert_eq!(serde_json::to_string(&inv(2, -1)).unwrap(), r#"{"rank":2,"degree":-1}"#);
        assert!(serde_json::from_str::<BundleInvariants>(r#"{"rank":0,"degree":1}"#).is_err());
    }

    fn small_prime() -> impl Strategy<Value = i64> {
        prop::sample::select(vec![2i64, 3, 5, 7, 11])
    }

    proptest! {
        #[test]
        fn slope_consistency(p in small_prime(), g in 0i64..6, r in 1i64..6, d in -20i64..20) {
            let c = ctx(p, g);
            let x = inv(r, d);
            prop_assert_eq!(pushforward_invariants(x, c).unwrap().slope(), pushforward_slope(x, c).unwrap());
        }

        #[test]
        fn profile_sum_identity(p in small_prime(), g in 0i64..6, r in 1i64..6, d in -20i64..20) {
            let c = ctx(p, g);
            let x = inv(r, d);
            let prof = canonical_filtration_profile(x, c).unwrap();
            prop_assert_eq!(prof.len() as i64, p);
            let expected = pullback_invariants(pushforward_invariants(x, c).unwrap(), c).unwrap();
            prop_assert_eq!(total(&prof).unwrap(), Some(expected));
        }

        #[test]
        fn profile_slopes_step_by_canonical_degree(p in small_prime(), g in 2i64..6, r in 1i64..6, d in -20i64..20) {
            let c = ctx(p, g);
            let prof = canonical_filtration_profile(inv(r, d), c).unwrap();
            for w in prof.windows(2) {
                let gap = w[0].slope().checked_sub(&w[1].slope()).unwrap();
                prop_assert_eq!(gap, Rational::from_integer(2 * g - 2));
            }
        }
    }
}
