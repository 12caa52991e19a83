//! Standard descriptions of computable reals.
//!
//! A [`ComputableReal`] pairs an approximation sequence `r` with a modulus `ξ`
//! such that `|x - r_{ξ(M)}| < 2^{-M}`. Derived reals produced here are always
//! reindexed to the identity modulus, so `approx(x, M)` is just `r_M`.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::encodings::Rational;

type Query = dyn Fn(&[u64]) -> Rational + Send + Sync;
type ModulusFn = dyn Fn(&[u64]) -> u64 + Send + Sync;

/// Where a sequence came from; carried for reporting only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Expression(String),
    Builtin(String),
    Program(String),
    Composite(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Expression(s) => write!(f, "expr:{s}"),
            Provenance::Builtin(s) => write!(f, "builtin:{s}"),
            Provenance::Program(s) => write!(f, "program:{s}"),
            Provenance::Composite(s) => write!(f, "composite:{s}"),
        }
    }
}

/// A pure, total map from `ℕ^arity` to exact rationals.
#[derive(Clone)]
pub struct EffectiveSequence {
    arity: usize,
    query: Arc<Query>,
    provenance: Provenance,
}

impl fmt::Debug for EffectiveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EffectiveSequence").field("arity", &self.arity).field("provenance", &self.provenance).finish()
    }
}

impl EffectiveSequence {
    pub fn new(
        arity: usize,
        provenance: Provenance,
        query: impl Fn(&[u64]) -> Rational + Send + Sync + 'static,
    ) -> Self {
        assert!(arity >= 1, "effective sequences have arity >= 1");
        EffectiveSequence { arity, query: Arc::new(query), provenance }
    }

    pub fn constant(arity: usize, value: Rational) -> Self {
        let label = format!("const {value}");
        Self::new(arity, Provenance::Composite(label), move |_| value.clone())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Panics if `index` has the wrong arity.
    pub fn at(&self, index: &[u64]) -> Rational {
        assert_eq!(index.len(), self.arity, "index arity mismatch");
        (self.query)(index)
    }

    pub fn at1(&self, i: u64) -> Rational {
        self.at(&[i])
    }

    pub fn at2(&self, i: u64, j: u64) -> Rational {
        self.at(&[i, j])
    }
}

/// A recursive modulus of convergence.
#[derive(Clone)]
pub struct Modulus(Arc<ModulusFn>);

impl Modulus {
    pub fn new(f: impl Fn(&[u64]) -> u64 + Send + Sync + 'static) -> Self {
        Modulus(Arc::new(f))
    }

    /// `ξ(…, M) = M`.
    pub fn identity() -> Self {
        Modulus::new(|idx| *idx.last().expect("modulus index is non-empty"))
    }

    pub fn at(&self, index: &[u64]) -> u64 {
        (self.0)(index)
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Modulus(..)")
    }
}

/// Standard description of a computable real.
#[derive(Clone, Debug)]
pub struct ComputableReal {
    approximations: EffectiveSequence,
    modulus: Modulus,
}

impl ComputableReal {
    pub fn new(approximations: EffectiveSequence, modulus: Modulus) -> Self {
        assert_eq!(approximations.arity(), 1, "a computable real needs an arity-1 sequence");
        ComputableReal { approximations, modulus }
    }

    /// Description whose `M`-th approximation is already within `2^{-M}`.
    pub fn from_fn(provenance: Provenance, f: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Self {
        ComputableReal::new(EffectiveSequence::new(1, provenance, move |i| f(i[0])), Modulus::identity())
    }

    pub fn constant(q: Rational) -> Self {
        ComputableReal::new(EffectiveSequence::constant(1, q), Modulus::identity())
    }

    pub fn approximations(&self) -> &EffectiveSequence {
        &self.approximations
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Rational within `2^{-M}` of the value.
    pub fn approx(&self, precision: u64) -> Rational {
        let idx = self.modulus.at(&[precision]);
        self.approximations.at1(idx)
    }

    /// Reindex to the identity modulus (`r'_M := r_{ξ(M)}`).
    pub fn normalized(&self) -> ComputableReal {
        let me = self.clone();
        let prov = Provenance::Composite(format!("normalized {}", self.approximations.provenance()));
        ComputableReal::from_fn(prov, move |m| me.approx(m))
    }
}

/// Standard description of a `k`-fold sequence of computable reals.
#[derive(Clone, Debug)]
pub struct ComputableRealSeq {
    arity: usize,
    approximations: EffectiveSequence,
    modulus: Modulus,
}

impl ComputableRealSeq {
    /// `approximations` has arity `arity + 1`; the last index is the precision
    /// index `m`, and `modulus(tm ∘ M)` selects it.
    pub fn new(arity: usize, approximations: EffectiveSequence, modulus: Modulus) -> Self {
        assert_eq!(approximations.arity(), arity + 1, "approximation arity must be k + 1");
        ComputableRealSeq { arity, approximations, modulus }
    }

    /// Sequence whose approximation at `(tm, M)` is within `2^{-M}`.
    pub fn from_fn(
        arity: usize,
        provenance: Provenance,
        f: impl Fn(&[u64], u64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        let seq = EffectiveSequence::new(arity + 1, provenance, move |idx| {
            let (tm, m) = idx.split_at(idx.len() - 1);
            f(tm, m[0])
        });
        ComputableRealSeq::new(arity, seq, Modulus::identity())
    }

    /// Exact rational sequence viewed as a sequence of computable reals.
    pub fn exact(rationals: EffectiveSequence) -> Self {
        let arity = rationals.arity();
        let prov = rationals.provenance().clone();
        ComputableRealSeq::from_fn(arity, prov, move |tm, _| rationals.at(tm))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn approximations(&self) -> &EffectiveSequence {
        &self.approximations
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn approx(&self, index: &[u64], precision: u64) -> Rational {
        assert_eq!(index.len(), self.arity, "index arity mismatch");
        let mut full = index.to_vec();
        full.push(precision);
        let m = self.modulus.at(&full);
        *full.last_mut().unwrap() = m;
        self.approximations.at(&full)
    }

    /// The computable real at `index`.
    pub fn element(&self, index: &[u64]) -> ComputableReal {
        let me = self.clone();
        let idx = index.to_vec();
        ComputableReal::from_fn(Provenance::Composite("sequence element".into()), move |m| me.approx(&idx, m))
    }
}

// ---------------------------------------------------------------------------
// Dyadic helpers

pub fn pow2(k: u64) -> BigUint {
    BigUint::one() << k as usize
}

/// `2^{-k}`.
pub fn two_pow_neg(k: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(pow2(k)))
}

/// `2^k`.
pub fn two_pow(k: u64) -> Rational {
    Rational::from_integer(BigInt::from(pow2(k)))
}

/// Nearest multiple of `2^{-bits}` (ties toward +∞); error at most `2^{-bits-1}`.
pub fn round_dyadic(q: &Rational, bits: u64) -> Rational {
    let scaled = q * two_pow(bits);
    let n = (scaled + Rational::new(1.into(), 2.into())).floor().to_integer();
    Rational::new(n, BigInt::from(pow2(bits)))
}

/// Smallest `s ≥ 0` with `2^s ≥ v` (`v ≥ 0`).
pub fn ceil_log2(v: &Rational) -> u64 {
    let mut s = 0;
    let mut p = Rational::one();
    while &p < v {
        p *= Rational::from_integer(2.into());
        s += 1;
    }
    s
}

/// `⌈log₂ k⌉` for a positive integer.
pub fn ceil_log2_int(k: &BigUint) -> u64 {
    if k <= &BigUint::one() {
        0
    } else {
        (k - 1u32).bits()
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

// ---------------------------------------------------------------------------
// Builtin constants

/// `atan(1/x)` in fixed point with `bits` fractional bits; error ≤ terms ulps.
fn atan_inv_fixed(x: u64, bits: u64) -> BigInt {
    let one = BigInt::from(pow2(bits));
    let x2 = BigInt::from(x * x);
    let mut power = &one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn pi_fixed_uncached(bits: u64) -> BigInt {
    let guard = 32;
    let w = bits + guard;
    let v = atan_inv_fixed(5, w) * 16 - atan_inv_fixed(239, w) * 4;
    // round to nearest at `bits`
    (v + (BigInt::one() << (guard - 1) as usize)) >> guard as usize
}

fn pi_cache() -> &'static Mutex<(u64, BigInt)> {
    static CACHE: OnceLock<Mutex<(u64, BigInt)>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new((0, BigInt::from(3))))
}

/// `round(π · 2^bits)` with `|π - result·2^{-bits}| < 2^{-bits}`.
pub fn pi_fixed(bits: u64) -> BigInt {
    let stored_bits = bits + 8;
    let mut guard = pi_cache().lock().expect("pi cache poisoned");
    if guard.0 < stored_bits {
        let target = stored_bits.max(guard.0 * 2).max(256);
        *guard = (target, pi_fixed_uncached(target));
    }
    let shift = guard.0 - bits;
    let half = BigInt::one() << (shift - 1) as usize;
    (&guard.1 + half) >> shift as usize
}

/// Dyadic rational within `2^{-M}` of π.
pub fn pi_approx(precision: u64) -> Rational {
    let bits = precision + 1;
    Rational::new(pi_fixed(bits), BigInt::from(pow2(bits)))
}

/// Dyadic rational within `2^{-M}` of e.
pub fn e_approx(precision: u64) -> Rational {
    let bits = precision + 16 + 64 - precision.leading_zeros() as u64;
    let one = BigInt::from(pow2(bits));
    let mut term = one.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term;
        term /= BigInt::from(k);
        k += 1;
    }
    Rational::new(sum, BigInt::from(pow2(bits)))
}

pub fn pi() -> ComputableReal {
    ComputableReal::from_fn(Provenance::Builtin("pi".into()), pi_approx)
}

pub fn e() -> ComputableReal {
    ComputableReal::from_fn(Provenance::Builtin("e".into()), e_approx)
}

pub fn zero() -> ComputableReal {
    ComputableReal::constant(Rational::zero())
}

pub fn one() -> ComputableReal {
    ComputableReal::constant(Rational::one())
}

/// Registry lookup for the names `pi`, `e`, `zero`, `one`.
pub fn builtin(name: &str) -> Option<ComputableReal> {
    match name {
        "pi" => Some(pi()),
        "e" => Some(e()),
        "zero" => Some(zero()),
        "one" => Some(one()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Operations

pub fn approx(x: &ComputableReal, precision: u64) -> Rational {
    x.approx(precision)
}

/// `α·x + β·y`, with moduli shifted by `⌈log₂(|α| + |β|)⌉`.
pub fn linear_combine(alpha: &Rational, x: &ComputableReal, beta: &Rational, y: &ComputableReal) -> ComputableReal {
    let shift = ceil_log2(&(alpha.abs() + beta.abs()));
    let (a, b) = (alpha.clone(), beta.clone());
    let (x, y) = (x.clone(), y.clone());
    ComputableReal::from_fn(Provenance::Composite("linear combination".into()), move |m| {
        let mut acc = Rational::zero();
        if !a.is_zero() {
            acc += &a * x.approx(m + shift);
        }
        if !b.is_zero() {
            acc += &b * y.approx(m + shift);
        }
        acc
    })
}

/// Exact `n`-th root of a non-negative rational, if it exists.
pub fn exact_root(q: &Rational, n: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer().to_biguint()?;
    let den = q.denom().to_biguint()?;
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    (rn.pow(n) == num && rd.pow(n) == den).then(|| Rational::new(rn.into(), rd.into()))
}

/// Lower end `s` of a dyadic cell `[s, s + 2^{-bits})` containing `q^{1/n}`.
pub fn root_floor(q: &Rational, n: u32, bits: u64) -> Rational {
    debug_assert!(!q.is_negative());
    let scale = two_pow(bits);
    // q^{1/n} ≤ 2^e with e = ⌈log₂ max(1, q)⌉ / n rounded up
    let e = ceil_log2(&q.clone().max(Rational::one())).div_ceil(n as u64);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::from(pow2(bits + e)) + 1;
    // invariant: (lo/2^bits)^n ≤ q < (hi/2^bits)^n
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        let cand = Rational::new(mid.clone(), BigInt::one()) / &scale;
        if num_traits::pow::pow(cand, n as usize) <= *q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Rational::new(lo, BigInt::from(pow2(bits)))
}

/// `|x|^{1/n}`.
///
/// When `|x|` is at least 1, a `2^{-(M+2)}` approximation of `|x|` already moves
/// the root by less than `2^{-(M+2)}`. Otherwise the approximation at `M` uses
/// `|x|` at precision `n(M+2)`, since `|a^{1/n} - b^{1/n}| ≤ |a - b|^{1/n}`.
pub fn nth_root_abs(x: &ComputableReal, n: u32) -> ComputableReal {
    assert!(n >= 1, "root degree must be positive");
    let x = x.clone();
    ComputableReal::from_fn(Provenance::Composite(format!("abs root {n}")), move |m| {
        let coarse = x.approx(m + 2).abs();
        let q =
            if &coarse - two_pow_neg(m + 2) >= Rational::one() { coarse } else { x.approx(n as u64 * (m + 2)).abs() };
        if let Some(r) = exact_root(&q, n) {
            return r;
        }
        let s = root_floor(&q, n, m + 2);
        s + two_pow_neg(m + 3)
    })
}

/// Nondecreasing lower approximants `max_{m ≤ n} (r_{ξ(m)} - 2^{-m})`.
pub fn lower_envelope(x: &ComputableReal) -> EffectiveSequence {
    let x = x.clone();
    EffectiveSequence::new(1, Provenance::Composite("lower envelope".into()), move |i| {
        (0..=i[0]).map(|m| x.approx(m) - two_pow_neg(m)).max().expect("non-empty range")
    })
}

/// Nonincreasing upper approximants `min_{m ≤ n} (r_{ξ(m)} + 2^{-m})`.
pub fn upper_envelope(x: &ComputableReal) -> EffectiveSequence {
    let x = x.clone();
    EffectiveSequence::new(1, Provenance::Composite("upper envelope".into()), move |i| {
        (0..=i[0]).map(|m| x.approx(m) + two_pow_neg(m)).min().expect("non-empty range")
    })
}

/// The pair `(r̲, r̄)`: `r̲_n` nondecreasing towards `x`, and
/// `r̄_n = min_{m ≤ n}(r_{ξ(m)} + 2^{-m}) - s_n` nonincreasing towards `x - target`,
/// where `s` is the nondecreasing sequence `upper_target`.
pub fn monotone_envelopes(
    x: &ComputableReal,
    upper_target: &EffectiveSequence,
) -> (EffectiveSequence, EffectiveSequence) {
    let lower = lower_envelope(x);
    let upper = upper_envelope(x);
    let target = upper_target.clone();
    let gap = EffectiveSequence::new(1, Provenance::Composite("upper gap".into()), move |i| upper.at(i) - target.at(i));
    (lower, gap)
}

/// Outcome of a fueled search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<W> {
    Halted(W),
    Exhausted,
}

impl<W> Search<W> {
    pub fn is_halted(&self) -> bool {
        matches!(self, Search::Halted(_))
    }
}

/// Halts with the first `n ≤ fuel` such that `r̲_n > 0`.
pub fn semidecide_positive(x: &ComputableReal, fuel: u64) -> Search<u64> {
    for n in 0..=fuel {
        if (x.approx(n) - two_pow_neg(n)).is_positive() {
            return Search::Halted(n);
        }
    }
    Search::Exhausted
}

/// Checks `|r_{ξ(M)} - r_{ξ(M')}| < 2^{-M} + 2^{-M'}` for all `M, M' ≤ bound`.
pub fn is_consistent(x: &ComputableReal, bound: u64) -> bool {
    let approxs: Vec<Rational> = (0..=bound).map(|m| x.approx(m)).collect();
    for (m, a) in approxs.iter().enumerate() {
        for (mp, b) in approxs.iter().enumerate() {
            if (a - b).abs() >= two_pow_neg(m as u64) + two_pow_neg(mp as u64) {
                return false;
            }
        }
    }
    true
}

/// Integer square-root helper used by complex magnitude bounds.
pub fn ceil_sqrt(v: &Rational) -> BigInt {
    // smallest J ≥ 0 with J² ≥ v
    if !v.is_positive() {
        return BigInt::zero();
    }
    let c = v.ceil().to_integer();
    let mut j = c.sqrt();
    while Rational::from_integer(&j * &j) < *v {
        j += 1;
    }
    while j.is_positive() && Rational::from_integer((&j - 1) * (&j - 1)) >= *v {
        j -= 1;
    }
    j
}

/// Orders two rationals by cross multiplication, which stays fast for operands
/// with very long denominators.
pub fn cmp_rational(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn to_f64(q: &Rational) -> f64 {
    // Scale down large operands so the conversion does not overflow.
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900);
    let nf = (n >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let df = (d >> shift as usize).to_f64().unwrap_or(f64::NAN);
    if df == 0.0 {
        return if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nf / df
}

pub fn is_even(k: u64) -> bool {
    k.is_even()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// 300-digit decimal expansions used as independent oracles.
    const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196";
    const E_DIGITS: &str = "2.71828182845904523536028747135266249775724709369995957496696762772407663035354759457138217852516642742746639193200305992181741359662904357290033429526059563073813232862794349076323382988075319525101901";

    fn decimal(s: &str) -> Rational {
        let (int, frac) = s.split_once('.').unwrap();
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
    }

    #[test]
    fn constant_is_exact() {
        let x = ComputableReal::constant(r(3, 7));
        assert_eq!(x.approx(20), r(3, 7));
        assert!(is_consistent(&x, 24));
    }

    #[test]
    fn builtin_constants_match_decimal_oracles() {
        let pi_ref = decimal(PI_DIGITS);
        let e_ref = decimal(E_DIGITS);
        for m in [0u64, 1, 10, 64, 300, 600] {
            assert!((pi_approx(m) - &pi_ref).abs() < two_pow_neg(m), "pi at {m}");
            assert!((e_approx(m) - &e_ref).abs() < two_pow_neg(m), "e at {m}");
        }
        assert!(is_consistent(&pi(), 24));
        assert!(is_consistent(&e(), 24));
        assert!(builtin("pi").is_some() && builtin("tau").is_none());
    }

    #[test]
    fn linear_combine_examples() {
        let x = e();
        let y = pi();
        let same = linear_combine(&r(1, 1), &x, &r(0, 1), &y);
        for m in 0..20 {
            assert_eq!(same.approx(m), x.approx(m));
        }
        let half = r(1, 2);
        let two_halves = linear_combine(&half, &one(), &half, &one());
        assert_eq!(two_halves.approx(5), r(1, 1));
        let cancel = linear_combine(&r(1, 1), &x, &r(-1, 1), &x);
        for m in 1..30 {
            assert!(cancel.approx(m).abs() < two_pow_neg(m - 1));
        }
        let mix = linear_combine(&r(3, 1), &x, &r(-5, 2), &y);
        assert!(is_consistent(&mix, 24));
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(nth_root_abs(&one(), 7).approx(10), r(1, 1));
        assert_eq!(nth_root_abs(&zero(), 3).approx(10), r(0, 1));
        let pi_sq = ComputableReal::from_fn(Provenance::Composite("pi^2".into()), |m| {
            // |π² - p²| ≤ 7|π - p| for p near π
            let p = pi_approx(m + 3);
            &p * &p
        });
        let root = nth_root_abs(&pi_sq, 2);
        let pi_ref = decimal(PI_DIGITS);
        for m in 0..=30 {
            assert!((root.approx(m) - &pi_ref).abs() < two_pow_neg(m), "M={m}");
        }
        assert!(is_consistent(&root, 20));
    }

    #[test]
    fn nth_root_power_matches_input() {
        for (num, den, n) in [(5i64, 2i64, 3u32), (-7, 3, 2), (1, 9, 5), (4, 1, 4)] {
            let x = ComputableReal::constant(r(num, den));
            let root = nth_root_abs(&x, n);
            for m in 2..=16u64 {
                let p = num_traits::pow::pow(root.approx(m), n as usize);
                let diff = (p - r(num, den).abs()).abs();
                assert!(diff < Rational::from_integer(n.into()) * two_pow_neg(m).clone() * two_pow(2));
            }
        }
    }

    #[test]
    fn envelopes_examples() {
        let target = lower_envelope(&pi());
        let (lo, hi) = monotone_envelopes(&zero(), &target);
        assert!((0..=50).all(|n| !lo.at1(n).is_positive()));
        assert!((5..=50).all(|n| hi.at1(n).is_negative()));

        let (_, hi_pi) = monotone_envelopes(&pi(), &target);
        assert!((0..=300).step_by(13).all(|n| !hi_pi.at1(n).is_negative()));

        let (lo_one, _) = monotone_envelopes(&one(), &target);
        assert!((0..=10).any(|n| lo_one.at1(n).is_positive()));
        for n in 0..30 {
            assert!(lo_one.at1(n) <= lo_one.at1(n + 1));
            assert!(hi.at1(n) >= hi.at1(n + 1));
        }
    }

    #[test]
    fn semidecide_positive_examples() {
        assert!(semidecide_positive(&one(), 10).is_halted());
        assert_eq!(semidecide_positive(&zero(), 500), Search::Exhausted);
        let tiny = ComputableReal::constant(two_pow_neg(20));
        assert_eq!(semidecide_positive(&tiny, 5), Search::Exhausted);
        match semidecide_positive(&tiny, 10_000) {
            Search::Halted(n) => {
                assert!(tiny.approx(n) - two_pow_neg(n) > Rational::zero());
                assert_eq!(n, 21);
            }
            Search::Exhausted => panic!("should halt"),
        }
    }

    #[test]
    fn dyadic_helpers() {
        assert_eq!(ceil_log2(&r(1, 1)), 0);
        assert_eq!(ceil_log2(&r(2, 1)), 1);
        assert_eq!(ceil_log2(&r(5, 2)), 2);
        assert_eq!(ceil_log2_int(&factorial(4)), 5);
        assert_eq!(round_dyadic(&r(1, 3), 2), r(1, 4));
        assert_eq!(ceil_sqrt(&r(2, 1)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&r(4, 1)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&r(0, 1)), BigInt::from(0));
    }
}
