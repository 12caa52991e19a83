//! Bijective encodings between naturals, tuples, rationals and dyadic set-reals.
//!
//! Tuples are packed with the Cantor pairing `⟨m1, m2⟩ = m2 + (m1+m2)(m1+m2+1)/2`
//! and its right-nested extension `⟨m1, …, mn⟩ = ⟨m1, ⟨m2, …, mn⟩⟩`. All
//! arithmetic is exact; there is no overflow mode.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always normalized.
pub type Rational = BigRational;

/// A non-empty tuple of naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexTuple(Vec<BigUint>);

impl IndexTuple {
    pub fn new(components: Vec<BigUint>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("index tuple must have arity >= 1".into()));
        }
        Ok(IndexTuple(components))
    }

    pub fn from_u64(components: &[u64]) -> Result<Self> {
        Self::new(components.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[BigUint] {
        &self.0
    }

    /// Components as machine integers. `None` if any component exceeds `u64`.
    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|c| c.to_u64()).collect()
    }
}

/// The two-argument Cantor pairing.
pub fn pair2(m1: &BigUint, m2: &BigUint) -> BigUint {
    let s = m1 + m2;
    let tri = (&s * (&s + 1u32)) >> 1;
    tri + m2
}

/// Inverse of [`pair2`].
pub fn unpair2(n: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8n + 1) - 1) / 2)
    let disc: BigUint = (n << 3) + 1u32;
    let w: BigUint = (disc.sqrt() - 1u32) >> 1;
    let tri = (&w * (&w + 1u32)) >> 1;
    let m2 = n - tri;
    let m1 = &w - &m2;
    (m1, m2)
}

/// `⟨t⟩_k` for the arity of `t`.
pub fn pair(t: &IndexTuple) -> BigUint {
    let comps = t.components();
    let mut acc = comps[comps.len() - 1].clone();
    for c in comps[..comps.len() - 1].iter().rev() {
        acc = pair2(c, &acc);
    }
    acc
}

/// `∐_k(n)`. Panics if `arity == 0`.
pub fn unpair(n: &BigUint, arity: usize) -> IndexTuple {
    assert!(arity >= 1, "unpair requires arity >= 1");
    let mut out = Vec::with_capacity(arity);
    let mut rest = n.clone();
    for _ in 1..arity {
        let (head, tail) = unpair2(&rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    IndexTuple(out)
}

/// Pairing of machine-sized components.
pub fn pair_u64(components: &[u64]) -> BigUint {
    pair(&IndexTuple::from_u64(components).expect("non-empty tuple"))
}

/// Two-argument pairing of machine integers; `None` on overflow.
pub fn pair2_u64(m1: u64, m2: u64) -> Option<u64> {
    let s = (m1 as u128) + (m2 as u128);
    let v = s.checked_mul(s + 1)? / 2 + m2 as u128;
    u64::try_from(v).ok()
}

/// Inverse of [`pair2_u64`].
pub fn unpair2_u64(n: u64) -> (u64, u64) {
    let disc = 8 * (n as u128) + 1;
    let mut r = (disc as f64).sqrt() as u128;
    while r * r > disc {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= disc {
        r += 1;
    }
    let w = (r - 1) / 2;
    let tri = w * (w + 1) / 2;
    let m2 = (n as u128 - tri) as u64;
    ((w as u64) - m2, m2)
}

/// `∐_k(n)` for machine-sized `n`; every component is at most `n`.
pub fn unpair_u64(n: u64, arity: usize) -> Vec<u64> {
    assert!(arity >= 1, "unpair requires arity >= 1");
    let mut out = Vec::with_capacity(arity);
    let mut rest = n;
    for _ in 1..arity {
        let (head, tail) = unpair2_u64(rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

/// First projection `ϖ1` of the inverse pairing.
pub fn varpi1(n: u64) -> u64 {
    unpair2_u64(n).0
}

/// Second projection `ϖ2` of the inverse pairing.
pub fn varpi2(n: u64) -> u64 {
    unpair2_u64(n).1
}

/// Rational notation `n ↦ (-1)^{s} p / (1 + q)` with `(s, p, q) = ∐_3(n)`.
pub fn rat_decode(n: &BigUint) -> Rational {
    let t = unpair(n, 3);
    let c = t.components();
    let num = num_bigint::BigInt::from(c[1].clone());
    let den = num_bigint::BigInt::from(&c[2] + 1u32);
    let q = Rational::new(num, den);
    if (&c[0] % 2u32).is_zero() {
        q
    } else {
        -q
    }
}

/// Canonical code of a rational: sign bit, numerator and denominator - 1 of the
/// normalized fraction.
pub fn rat_encode(q: &Rational) -> BigUint {
    let sign = if q.is_negative() { 1u32 } else { 0u32 };
    let num = q.numer().abs().to_biguint().expect("abs is non-negative");
    let den = q.denom().to_biguint().expect("denominator is positive") - 1u32;
    pair(&IndexTuple(vec![BigUint::from(sign), num, den]))
}

/// `Σ_{j < terms, member(j)} 2^{-(j+1)}`.
pub fn dyadic_value(member: impl Fn(u64) -> bool, terms: u64) -> Rational {
    let mut num = BigUint::zero();
    for j in 0..terms {
        num <<= 1;
        if member(j) {
            num += 1u32;
        }
    }
    Rational::new(num.into(), (BigUint::one() << terms as usize).into())
}

/// `x[A] = Σ_{j ∈ A} 2^{-(j+1)}` for a finite set.
pub fn dyadic_value_of_set(set: &BTreeSet<u64>) -> Rational {
    match set.iter().next_back() {
        None => Rational::zero(),
        Some(&max) => dyadic_value(|j| set.contains(&j), max + 1),
    }
}

/// `A_n[x]`: the members `m ≤ n + 2` of the infinite set `A[x]` with
/// `x = 4 Σ_{m ∈ A[x]} 2^{-m}`.
///
/// Dyadic `x` use the non-terminating expansion, so `A[x]` is always infinite.
pub fn dyadic_bits(x: &Rational, n: u64) -> Result<BTreeSet<u64>> {
    let four = Rational::from_integer(4.into());
    if !x.is_positive() || x > &four {
        return Err(Error::OutOfRange(format!("dyadic_bits needs 0 < x <= 4, got {x}")));
    }
    let mut rest = x / four;
    let mut weight = Rational::new(1.into(), 2.into());
    let mut out = BTreeSet::new();
    for m in 1..=n + 2 {
        if rest > weight {
            rest -= &weight;
            out.insert(m);
        }
        weight /= Rational::from_integer(2.into());
    }
    Ok(out)
}

/// `4 Σ_{m ∈ bits} 2^{-m}`.
pub fn dyadic_bits_value(bits: &BTreeSet<u64>) -> Rational {
    bits.iter().fold(Rational::zero(), |acc, &m| acc + Rational::new(4.into(), (BigUint::one() << m as usize).into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Brute-force inverse: scan codes until the tuple appears.
    fn scan_inverse(target: &[u64]) -> u64 {
        (0u64..).find(|&n| unpair_u64(n, target.len()) == target).unwrap()
    }

    #[test]
    fn pair_examples() {
        assert_eq!(pair_u64(&[0, 0]), BigUint::from(0u32));
        assert_eq!(pair_u64(&[1, 2]), BigUint::from(8u32));
        assert_eq!(scan_inverse(&[1, 2]), 8);
        assert_eq!(pair_u64(&[1, 0, 1]), BigUint::from(8u32));
        assert_eq!(scan_inverse(&[1, 0, 1]), 8);
        assert_eq!(pair_u64(&[7]), BigUint::from(7u32));
    }

    #[test]
    fn machine_pairing_agrees_with_big_pairing() {
        for n in (0u64..5000).chain([u64::MAX, u64::MAX - 1, 1 << 62]) {
            let (a, b) = unpair2_u64(n);
            let (ba, bb) = unpair2(&BigUint::from(n));
            assert_eq!((BigUint::from(a), BigUint::from(b)), (ba, bb));
            assert_eq!(pair2_u64(a, b), Some(n));
        }
        assert_eq!(pair2_u64(u64::MAX, 1), None);
    }

    #[test]
    fn unpair_examples() {
        assert_eq!(unpair_u64(8, 2), vec![1, 2]);
        assert_eq!(unpair_u64(0, 1), vec![0]);
        assert_eq!(unpair_u64(14, 3), vec![0, 1, 1]);
    }

    #[test]
    fn rational_notation_examples() {
        assert_eq!(rat_decode(&BigUint::from(0u32)), r(0, 1));
        assert_eq!(rat_decode(&BigUint::from(14u32)), r(1, 2));
        assert_eq!(rat_decode(&BigUint::from(4u32)), r(-1, 1));
        assert_eq!(rat_encode(&r(0, 1)), BigUint::from(0u32));
        assert_eq!(rat_encode(&r(1, 2)), BigUint::from(14u32));
        assert_eq!(rat_encode(&r(-1, 1)), BigUint::from(4u32));
    }

    #[test]
    fn dyadic_value_examples() {
        assert_eq!(dyadic_value(|j| j == 0, 8), r(1, 2));
        assert_eq!(dyadic_value(|_| false, 8), r(0, 1));
        assert_eq!(dyadic_value(|j| j % 2 == 0, 6), r(21, 32));
    }

    #[test]
    fn dyadic_value_increments() {
        let member = |j: u64| j % 3 != 1;
        for t in 0..20 {
            let step = dyadic_value(member, t + 1) - dyadic_value(member, t);
            let unit = Rational::new(1.into(), (BigUint::one() << (t + 1) as usize).into());
            assert!(step.is_zero() || step == unit);
        }
    }

    #[test]
    fn dyadic_bits_examples() {
        let set = |v: &[u64]| v.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(dyadic_bits(&r(4, 1), 3).unwrap(), set(&[1, 2, 3, 4, 5]));
        assert_eq!(dyadic_bits(&r(2, 1), 1).unwrap(), set(&[2, 3]));
        assert_eq!(dyadic_bits(&r(1, 1), 2).unwrap(), set(&[3, 4]));
        assert!(dyadic_bits(&r(0, 1), 2).is_err());
        assert!(dyadic_bits(&r(9, 2), 2).is_err());
    }

    #[test]
    fn dyadic_bits_gap() {
        // The remainder is at most the full tail 4·2^{-(n+2)}; equality happens
        // only when every later bit is set (x = 4).
        for num in 1..=64i64 {
            let x = r(num, 16);
            for n in 0..10u64 {
                let bits = dyadic_bits(&x, n).unwrap();
                let v = dyadic_bits_value(&bits);
                let gap = &x - &v;
                let tail = Rational::new(4.into(), (BigUint::one() << (n + 2) as usize).into());
                assert!(gap.is_positive(), "x={x} n={n}");
                assert!(gap <= tail, "x={x} n={n}");
            }
        }
    }
}
