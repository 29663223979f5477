//! Certified rounding of the transcendental parameter formulas.
//!
//! Quantities like `⌊q·ln n⌋` and "smallest integer exceeding `n^e`" (with
//! `q`, `e` exact rationals) are evaluated as rational intervals from series
//! with explicit tail bounds, widening the precision until the floor or the
//! comparison is unambiguous. Real-valued intermediates never decide a
//! verdict; only the certified integers do.
//!
//! Termination: for integer `n ≥ 2` and rational `q ≠ 0`, the product
//! `q·ln n` is irrational, so it is never exactly an integer and every floor
//! is eventually certified. `n^{a/b}` is rational only when `n^a` is a
//! perfect `b`-th power, which is decided exactly from the factorization of
//! `n` before any interval is computed.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};

const INITIAL_TERMS: usize = 24;
const MAX_TERMS: usize = 1 << 20;

/// Closed rational interval `[lo, hi]` enclosing a real value.
#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    fn point(v: Rat) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    /// Multiplies by an exact rational, flipping endpoints for negative
    /// factors.
    fn scale(&self, f: &Rat) -> Interval {
        if f.is_negative() {
            Interval {
                lo: &self.hi * f,
                hi: &self.lo * f,
            }
        } else {
            Interval {
                lo: &self.lo * f,
                hi: &self.hi * f,
            }
        }
    }

    fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }
}

/// `ln x` for rational `x` in `[1, 2]` via the atanh series
/// `ln x = 2·Σ y^(2j+1)/(2j+1)` with `y = (x−1)/(x+1) ≤ 1/3`.
fn ln_unit_interval(x: &Rat, terms: usize) -> Interval {
    let one = Rat::one();
    let y = (x - &one) / (x + &one);
    if y.is_zero() {
        return Interval::point(Rat::zero());
    }
    let y2 = &y * &y;
    let mut sum = Rat::zero();
    let mut pow = y.clone(); // y^(2j+1)
    for j in 0..terms {
        sum += &pow / rat_int(2 * j as i64 + 1);
        pow *= &y2;
    }
    let two = rat_int(2);
    let lo = &two * &sum;
    // tail ≤ y^(2J+1) / ((2J+1)(1−y²))
    let tail = &pow / (rat_int(2 * terms as i64 + 1) * (&one - &y2));
    let hi = &lo + &two * tail;
    Interval { lo, hi }
}

/// Enclosure of `ln n` for integer `n ≥ 1`, splitting off powers of two so
/// the series argument stays in `[1, 2]`.
pub fn ln_interval(n: u64, terms: usize) -> Interval {
    assert!(n >= 1, "ln requires n >= 1");
    if n == 1 {
        return Interval::point(Rat::zero());
    }
    let k = 63 - n.leading_zeros() as u64; // floor(log2 n)
    let mantissa = Rat::new(BigInt::from(n), BigInt::one() << k as usize);
    let ln_m = ln_unit_interval(&mantissa, terms);
    if k == 0 {
        return ln_m;
    }
    let ln2 = ln_unit_interval(&rat_int(2), terms);
    ln2.scale(&rat_int(k as i64)).add(&ln_m)
}

/// Enclosure of `e^q` for rational `q ≥ 0` via the Taylor series with an
/// explicit geometric tail bound.
fn exp_nonneg(q: &Rat, terms: usize) -> Interval {
    debug_assert!(!q.is_negative());
    if q.is_zero() {
        return Interval::point(Rat::one());
    }
    // Keep q/K ≤ 1/2 so the tail is bounded by twice the first dropped term.
    let q_ceil = q.ceil().to_integer().to_usize().unwrap_or(usize::MAX / 4);
    let k_terms = terms.max(2 * q_ceil + 8);
    let mut sum = Rat::one();
    let mut term = Rat::one();
    for k in 1..k_terms {
        term = term * q / rat_int(k as i64);
        sum += &term;
    }
    // first dropped term
    term = term * q / rat_int(k_terms as i64);
    let hi = &sum + rat_int(2) * term;
    Interval { lo: sum, hi }
}

/// Enclosure of `e^x` over the rational interval `x ∈ [lo, hi]`.
fn exp_interval(x: &Interval, terms: usize) -> Interval {
    Interval {
        lo: exp_point(&x.lo, terms).lo,
        hi: exp_point(&x.hi, terms).hi,
    }
}

fn exp_point(q: &Rat, terms: usize) -> Interval {
    if q.is_negative() {
        let pos = exp_nonneg(&-q, terms);
        // reciprocal of a positive interval
        Interval {
            lo: Rat::one() / pos.hi,
            hi: Rat::one() / pos.lo,
        }
    } else {
        exp_nonneg(q, terms)
    }
}

/// Enclosure of `n^e = exp(e·ln n)` for integer `n ≥ 1`.
pub fn pow_interval(n: u64, e: &Rat, terms: usize) -> Interval {
    exp_interval(&ln_interval(n, terms).scale(e), terms)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exact value of `n^e` when it is rational, i.e. when `n^a` is a perfect
/// `b`-th power for `e = a/b` in lowest terms. Returns `None` otherwise.
pub fn exact_pow(n: u64, e: &Rat) -> Option<Rat> {
    assert!(n >= 1);
    if n == 1 || e.is_zero() {
        return Some(Rat::one());
    }
    let a = e.numer().clone();
    let b = e.denom(); // positive, coprime with a
    let root: BigInt = if b.is_one() {
        BigInt::from(n)
    } else {
        let b_u32 = b.to_u32()?;
        let mut root = BigInt::one();
        for (p, exp) in factorize(n) {
            // gcd(a, b) = 1, so b must divide the prime exponent itself
            if exp % b_u32 != 0 {
                return None;
            }
            root *= BigInt::from(p).pow(exp / b_u32);
        }
        root
    };
    let a_abs = a.magnitude().to_u32()?;
    let powed = root.pow(a_abs);
    Some(if a.is_negative() {
        Rat::new(BigInt::one(), powed)
    } else {
        Rat::from_integer(powed)
    })
}

fn widen<T>(mut probe: impl FnMut(usize) -> Option<T>, what: &str) -> Result<T> {
    let mut terms = INITIAL_TERMS;
    while terms <= MAX_TERMS {
        if let Some(v) = probe(terms) {
            return Ok(v);
        }
        terms *= 2;
    }
    Err(Error::invalid(format!(
        "could not certify {what} within precision limit"
    )))
}

fn floor_big(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Certified `⌊q·ln n⌋` for rational `q` and integer `n ≥ 1`.
pub fn floor_times_ln(q: &Rat, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("ln requires n >= 1"));
    }
    if n == 1 || q.is_zero() {
        return Ok(BigInt::zero());
    }
    widen(
        |terms| {
            let i = ln_interval(n, terms).scale(q);
            let lo = floor_big(&i.lo);
            (lo == floor_big(&i.hi)).then_some(lo)
        },
        "floor of q*ln(n)",
    )
}

/// Certified comparison of `q·ln n` against an exact rational.
pub fn cmp_times_ln(q: &Rat, n: u64, rhs: &Rat) -> Result<Ordering> {
    if n == 0 {
        return Err(Error::invalid("ln requires n >= 1"));
    }
    if n == 1 || q.is_zero() {
        return Ok(Rat::zero().cmp(rhs));
    }
    widen(
        |terms| {
            let i = ln_interval(n, terms).scale(q);
            if i.lo > *rhs {
                Some(Ordering::Greater)
            } else if i.hi < *rhs {
                Some(Ordering::Less)
            } else {
                None
            }
        },
        "comparison of q*ln(n)",
    )
}

/// Smallest integer strictly greater than `n^e`, certified.
///
/// When `n^e` happens to be rational the answer is `⌊n^e⌋ + 1` computed
/// exactly; otherwise intervals are widened until the floor is pinned.
pub fn strictly_greater_pow(n: u64, e: &Rat) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("power base must be >= 1"));
    }
    if let Some(v) = exact_pow(n, e) {
        return Ok(floor_big(&v) + 1);
    }
    widen(
        |terms| {
            let i = pow_interval(n, e, terms);
            let lo = floor_big(&i.lo);
            (lo == floor_big(&i.hi)).then_some(lo + 1)
        },
        "floor of n^e",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn assert_contains(i: &Interval, approx: f64) {
        let lo = i.lo.to_f64().unwrap();
        let hi = i.hi.to_f64().unwrap();
        assert!(lo <= approx && approx <= hi, "{approx} not in [{lo}, {hi}]");
        assert!(hi - lo < 1e-15, "interval too wide: [{lo}, {hi}]");
    }

    #[test]
    fn ln_enclosures() {
        assert_contains(&ln_interval(2, 24), std::f64::consts::LN_2);
        assert_contains(&ln_interval(70, 24), 70f64.ln());
        assert_contains(&ln_interval(1000, 24), 1000f64.ln());
        assert_eq!(ln_interval(1, 24).lo, Rat::zero());
    }

    #[test]
    fn pow_enclosures() {
        assert_contains(&pow_interval(70, &rat(71, 140), 24), 70f64.powf(71.0 / 140.0));
        assert_contains(&pow_interval(10, &rat(-1, 2), 24), 0.1f64.sqrt());
    }

    #[test]
    fn exact_powers_detected() {
        assert_eq!(exact_pow(16, &rat(1, 2)).unwrap(), rat_int(4));
        assert_eq!(exact_pow(8, &rat(2, 3)).unwrap(), rat_int(4));
        assert_eq!(exact_pow(36, &rat(-1, 2)).unwrap(), rat(1, 6));
        assert!(exact_pow(10, &rat(1, 2)).is_none());
        assert_eq!(exact_pow(7, &rat(2, 1)).unwrap(), rat_int(49));
    }

    #[test]
    fn floor_of_scaled_ln() {
        // (69/140)^2 * ln 70 = 1.0319...
        let q = rat(69, 140) * rat(69, 140);
        assert_eq!(floor_times_ln(&q, 70).unwrap(), BigInt::from(1));
        // (9/20)^2 * ln 1000 = 1.3988...
        let q = rat(9, 20) * rat(9, 20);
        assert_eq!(floor_times_ln(&q, 1000).unwrap(), BigInt::from(1));
        // (9/20)^2 * ln 10^6 = 2.7977...
        assert_eq!(floor_times_ln(&q, 1_000_000).unwrap(), BigInt::from(2));
        // (3/20)^3 * ln 100 = 0.01554...
        let q = rat(3, 20) * rat(3, 20) * rat(3, 20);
        assert_eq!(floor_times_ln(&q, 100).unwrap(), BigInt::zero());
    }

    #[test]
    fn strict_power_bounds() {
        // 1000^(11/20) = 44.668... -> 45
        assert_eq!(
            strictly_greater_pow(1000, &rat(11, 20)).unwrap(),
            BigInt::from(45)
        );
        // 70^(71/140) = 8.624... -> 9
        assert_eq!(
            strictly_greater_pow(70, &rat(71, 140)).unwrap(),
            BigInt::from(9)
        );
        // exact case: 16^(1/2) = 4 -> 5
        assert_eq!(
            strictly_greater_pow(16, &rat(1, 2)).unwrap(),
            BigInt::from(5)
        );
        // n^0 = 1 -> 2
        assert_eq!(
            strictly_greater_pow(9, &Rat::zero()).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn ln_comparison() {
        // (69/140)^2 ln 70 > 1
        let q = rat(69, 140) * rat(69, 140);
        assert_eq!(cmp_times_ln(&q, 70, &Rat::one()).unwrap(), Ordering::Greater);
        // (3/20)^3 ln 100 < 1
        let q = rat(3, 20) * rat(3, 20) * rat(3, 20);
        assert_eq!(cmp_times_ln(&q, 100, &Rat::one()).unwrap(), Ordering::Less);
        assert_eq!(
            cmp_times_ln(&Rat::one(), 1, &Rat::zero()).unwrap(),
            Ordering::Equal
        );
    }
}
