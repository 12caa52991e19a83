//! Integrable bandlimited signals with exact piecewise-linear spectra.
//!
//! A monotone generator `r_1 ≤ r_2 ≤ …` yields the truncations
//! `f_k = seed + Σ_{m=1}^{k} m^{-2} φ_m`, where `φ_m` has the triangular spectrum
//! on `[r_m, r_{m+1}]` with peak 1 and unit L¹ norm in time. The seed term is the
//! same triangle on `[r_1/2, r_1]`, so `bw(f) = lim r_m` also for constant
//! generators.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::encodings::{unpair2_u64, Rational};
use crate::error::{Error, Result};
use crate::exact_real::{
    cmp_rational, pi_approx, pi_fixed, round_dyadic, two_pow_neg, EffectiveSequence, Provenance, Search,
};
use crate::signals::{ComplexRational, Enclosure};

// ---------------------------------------------------------------------------
// Spectra

/// Continuous piecewise-linear function, zero outside its breakpoint hull.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiecewiseLinearSpectrum {
    breakpoints: Vec<(Rational, Rational)>,
}

impl PiecewiseLinearSpectrum {
    /// Breakpoints must be strictly increasing in `ω` with nonnegative values and
    /// zero values at both ends of the hull.
    pub fn new(breakpoints: Vec<(Rational, Rational)>) -> Result<Self> {
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidArgument(format!("breakpoint {} is not strictly increasing", i + 1)));
            }
        }
        if let Some(i) = breakpoints.iter().position(|(_, v)| v.is_negative()) {
            return Err(Error::InvalidArgument(format!("breakpoint {i} has a negative value")));
        }
        let ends_zero = match (breakpoints.first(), breakpoints.last()) {
            (Some(a), Some(b)) => a.1.is_zero() && b.1.is_zero(),
            _ => true,
        };
        if !ends_zero {
            return Err(Error::InvalidArgument("spectrum must vanish at the hull ends".into()));
        }
        Ok(PiecewiseLinearSpectrum { breakpoints })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn is_zero(&self) -> bool {
        self.breakpoints.iter().all(|(_, v)| v.is_zero())
    }

    pub fn eval(&self, omega: &Rational) -> Rational {
        let bp = &self.breakpoints;
        let i = bp.partition_point(|(w, _)| w <= omega);
        if i == 0 || i == bp.len() {
            return match bp.last() {
                Some((w, v)) if w == omega => v.clone(),
                _ => Rational::zero(),
            };
        }
        let (w0, v0) = &bp[i - 1];
        let (w1, v1) = &bp[i];
        v0 + (v1 - v0) * (omega - w0) / (w1 - w0)
    }

    /// Maximum over the closed interval `[lo, hi]`.
    pub fn max_on(&self, lo: &Rational, hi: &Rational) -> Rational {
        if lo > hi {
            return Rational::zero();
        }
        self.breakpoints
            .iter()
            .filter(|(w, _)| w >= lo && w <= hi)
            .map(|(_, v)| v.clone())
            .chain([self.eval(lo), self.eval(hi)])
            .max()
            .expect("non-empty")
    }

    /// `∫ ŝ(ω) dω`, exactly.
    pub fn integral(&self) -> Rational {
        self.breakpoints
            .windows(2)
            .map(|w| (&w[1].0 - &w[0].0) * (&w[0].1 + &w[1].1) / Rational::from_integer(2.into()))
            .sum()
    }

    /// Right end of the essential support, `None` for the zero spectrum.
    pub fn support_sup(&self) -> Option<Rational> {
        self.breakpoints.windows(2).rev().find(|w| w[0].1.is_positive() || w[1].1.is_positive()).map(|w| w[1].0.clone())
    }

    /// Left end of the essential support, `None` for the zero spectrum.
    pub fn support_inf(&self) -> Option<Rational> {
        self.breakpoints.windows(2).find(|w| w[0].1.is_positive() || w[1].1.is_positive()).map(|w| w[0].0.clone())
    }
}

// ---------------------------------------------------------------------------
// Generators

/// Memoized generator sequence `m ↦ r_m`, optionally replaced by its running
/// maximum `max({r_j : j ≤ m} ∪ {0})`.
#[derive(Clone)]
pub struct B1Generator {
    name: String,
    seq: EffectiveSequence,
    running_max: bool,
    cache: Arc<Mutex<Vec<Rational>>>,
}

impl fmt::Debug for B1Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("B1Generator").field("name", &self.name).field("running_max", &self.running_max).finish()
    }
}

impl B1Generator {
    pub fn new(seq: &EffectiveSequence) -> Self {
        assert_eq!(seq.arity(), 1, "generators are simple sequences");
        B1Generator { name: seq.provenance().to_string(), seq: seq.clone(), running_max: false, cache: Arc::default() }
    }

    pub fn from_fn(name: impl Into<String>, f: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Self {
        let name = name.into();
        let seq = EffectiveSequence::new(1, Provenance::Expression(name.clone()), move |i| f(i[0]));
        B1Generator { name, seq, running_max: false, cache: Arc::default() }
    }

    /// The running maximum of `seq`, which is monotone and nonnegative.
    pub fn running_max(seq: &EffectiveSequence) -> Self {
        B1Generator { running_max: true, ..Self::new(seq) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, m: u64) -> Rational {
        let mut cache = self.cache.lock().expect("generator cache poisoned");
        while cache.len() as u64 <= m {
            let i = cache.len() as u64;
            let mut v = self.seq.at1(i);
            if self.running_max {
                let prev = cache.last().cloned().unwrap_or_else(Rational::zero);
                v = v.max(prev);
            }
            cache.push(v);
        }
        cache[m as usize].clone()
    }

    pub fn as_sequence(&self) -> EffectiveSequence {
        let g = self.clone();
        EffectiveSequence::new(1, Provenance::Expression(self.name.clone()), move |i| g.value(i[0]))
    }
}

// ---------------------------------------------------------------------------
// Signals

/// One triangle of the spectrum; `index` 0 is the seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTerm {
    pub index: u64,
    pub left: Rational,
    pub right: Rational,
    pub peak: Rational,
}

impl SpectrumTerm {
    pub fn center(&self) -> Rational {
        (&self.left + &self.right) / Rational::from_integer(2.into())
    }

    pub fn half_width(&self) -> Rational {
        (&self.right - &self.left) / Rational::from_integer(2.into())
    }
}

/// The `k`-th truncation of a synthesized signal.
#[derive(Clone, Debug)]
pub struct B1Signal {
    generator: B1Generator,
    truncation: u64,
    terms: Vec<SpectrumTerm>,
    spectrum: PiecewiseLinearSpectrum,
    tail_bound: Rational,
}

fn check_generator(gen: &B1Generator, upto: u64, allow_zero: bool) -> Result<()> {
    for m in 1..=upto {
        let v = gen.value(m);
        if v.is_negative() || (!allow_zero && v.is_zero()) {
            return Err(Error::Generator { index: m, reason: format!("value {v} is not positive") });
        }
        if m > 1 && v < gen.value(m - 1) {
            return Err(Error::Generator { index: m, reason: format!("value {v} decreases") });
        }
    }
    Ok(())
}

/// `π²/6 - Σ_{m≤k} m^{-2}`, rounded up.
pub fn tail_bound(k: u64) -> Rational {
    let pi_hi = pi_approx(64) + two_pow_neg(64);
    let head: Rational = (1..=k).map(|m| Rational::new(1.into(), BigInt::from(m) * BigInt::from(m))).sum();
    &pi_hi * &pi_hi / Rational::from_integer(6.into()) - head
}

fn build(gen: &B1Generator, k: u64, allow_zero: bool) -> Result<B1Signal> {
    check_generator(gen, k + 1, allow_zero)?;
    let mut terms = Vec::new();
    let r1 = gen.value(1);
    if r1.is_positive() {
        let left = &r1 / Rational::from_integer(2.into());
        terms.push(SpectrumTerm { index: 0, left, right: r1, peak: Rational::one() });
    }
    for m in 1..=k {
        let (a, b) = (gen.value(m), gen.value(m + 1));
        if a < b {
            let peak = Rational::new(1.into(), BigInt::from(m) * BigInt::from(m));
            terms.push(SpectrumTerm { index: m, left: a, right: b, peak });
        }
    }
    let mut points: Vec<(Rational, Rational)> = Vec::with_capacity(3 * terms.len());
    for t in &terms {
        if points.last().is_none_or(|(w, _)| w != &t.left) {
            points.push((t.left.clone(), Rational::zero()));
        }
        points.push((t.center(), t.peak.clone()));
        points.push((t.right.clone(), Rational::zero()));
    }
    let spectrum = PiecewiseLinearSpectrum::new(points)?;
    Ok(B1Signal { generator: gen.clone(), truncation: k, terms, spectrum, tail_bound: tail_bound(k) })
}

/// The `k`-th truncation for a positive, nondecreasing generator; the prefix
/// `r_1, …, r_{k+1}` is validated.
pub fn synthesize(gen: &B1Generator, k: u64) -> Result<B1Signal> {
    build(gen, k, false)
}

/// The running-maximum generator of an arbitrary sequence with finite supremum.
pub fn sigma1_to_generator(r: &EffectiveSequence) -> B1Generator {
    B1Generator::running_max(r)
}

/// The `k`-th truncation of the signal whose bandwidth is `sup r`.
pub fn sigma1_to_signal(r: &EffectiveSequence, k: u64) -> Result<B1Signal> {
    build(&sigma1_to_generator(r), k, true)
}

impl B1Signal {
    pub fn generator(&self) -> &B1Generator {
        &self.generator
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    pub fn terms(&self) -> &[SpectrumTerm] {
        &self.terms
    }

    pub fn spectrum(&self) -> &PiecewiseLinearSpectrum {
        &self.spectrum
    }

    /// Upper bound on the L¹ distance to the untruncated signal.
    pub fn tail_bound(&self) -> &Rational {
        &self.tail_bound
    }

    pub fn support_sup(&self) -> Option<Rational> {
        self.spectrum.support_sup()
    }

    /// Total L¹ norm of the terms `m = 1, …, k`, read off the spectrum.
    pub fn mass(&self) -> Rational {
        self.terms.iter().filter(|t| t.index > 0).map(|t| self.term_mass(t)).sum()
    }

    /// L¹ norm of the seed term (zero if absent).
    pub fn seed_mass(&self) -> Rational {
        self.terms.iter().filter(|t| t.index == 0).map(|t| self.term_mass(t)).sum()
    }

    /// The time-domain L¹ norm of a term equals its spectral peak.
    fn term_mass(&self, t: &SpectrumTerm) -> Rational {
        self.spectrum.eval(&t.center())
    }

    /// Bound on `sup_t |f(t) - f_k(t)|` for generators bounded by π.
    pub fn uniform_tail_slack(&self) -> Rational {
        &self.tail_bound / Rational::from_integer(4.into())
    }
}

// ---------------------------------------------------------------------------
// Time-domain evaluation

fn bit_len(v: u64) -> u64 {
    64 - v.leading_zeros() as u64
}

/// Rational within `2^{-bits}` of `sin(x)/x`.
fn sinc_unnormalized(x: &Rational, bits: u64) -> Rational {
    if x.abs() > Rational::from_integer(4.into()) {
        let (s, _) = sin_cos(x, bits + 1);
        return round_dyadic(&(s / x), bits + 1);
    }
    let p = bits + 24;
    let scale = BigInt::one() << p as usize;
    let xf = (x * Rational::from_integer(scale.clone())).round().to_integer();
    let x2 = (&xf * &xf) >> p as usize;
    let mut term = scale.clone();
    let mut sum = term.clone();
    let mut j = 1u64;
    while !term.is_zero() {
        term = -((term * &x2) >> p as usize) / BigInt::from((2 * j) * (2 * j + 1));
        sum += &term;
        j += 1;
    }
    round_dyadic(&Rational::new(sum, scale), bits + 1)
}

/// Rationals within `2^{-bits}` of `sin(x)` and `cos(x)`.
pub fn sin_cos(x: &Rational, bits: u64) -> (Rational, Rational) {
    let turns = (crate::exact_real::to_f64(x) / std::f64::consts::TAU).round() as i64;
    let p = bits + 24 + bit_len(turns.unsigned_abs());
    let scale = BigInt::one() << p as usize;
    let two_pi = pi_fixed(p + 2) << 1usize;
    let xf = (x * Rational::from_integer(scale.clone())).round().to_integer();
    let reduced = xf - ((BigInt::from(turns) * two_pi) >> 2usize);
    let mut term = scale.clone();
    let (mut s, mut c) = (BigInt::zero(), scale.clone());
    let mut n = 1u64;
    while !term.is_zero() {
        term = ((term * &reduced) >> p as usize) / BigInt::from(n);
        match n % 4 {
            1 => s += &term,
            2 => c -= &term,
            3 => s -= &term,
            _ => c += &term,
        }
        n += 1;
    }
    let s = round_dyadic(&Rational::new(s, scale.clone()), bits + 1);
    let c = round_dyadic(&Rational::new(c, scale), bits + 1);
    (s, c)
}

/// Enclosure of `f_k(t)`, or of the untruncated `f(t)` when `untruncated` is set.
pub fn eval_time(f: &B1Signal, t: &Rational, precision: u64, untruncated: bool) -> Enclosure<ComplexRational> {
    let two = Rational::from_integer(2.into());
    let multipliers: Rational = f.terms.iter().map(|term| &term.peak * term.half_width()).sum();
    let size = multipliers.ceil().to_integer().to_u64().unwrap_or(u64::MAX >> 1) + 1;
    let p = precision + 5 + bit_len(size);
    let pi = pi_approx(p + 2);
    let inv = Rational::one() / (&two * &pi);
    let mut re = Rational::zero();
    let mut im = Rational::zero();
    for term in &f.terms {
        let hw = term.half_width();
        // u(s) = 2π(sin(s/2)/(πs))² = S(s/2)²/(2π) at s = hw·t, whose transform is the unit triangle
        let s_half = &hw * t / &two;
        let sv = sinc_unnormalized(&s_half, p);
        let amplitude = round_dyadic(&(&term.peak * &hw * &sv * &sv * &inv), p + bit_len(size) + 4);
        let (sn, cs) = sin_cos(&(term.center() * t), p);
        re += &amplitude * cs;
        im += &amplitude * sn;
    }
    let mid = ComplexRational::new(round_dyadic(&re, precision + 3), round_dyadic(&im, precision + 3));
    let mut radius = two_pow_neg(precision);
    if untruncated {
        radius += f.uniform_tail_slack();
    }
    Enclosure { mid, radius }
}

// ---------------------------------------------------------------------------
// Spectral queries and semi-decision

/// Whether `q < π`.
pub fn less_than_pi(q: &Rational) -> bool {
    let mut bits = 32;
    loop {
        let p = pi_approx(bits);
        let eps = two_pow_neg(bits);
        if q < &(&p - &eps) {
            return true;
        }
        if q > &(&p + &eps) {
            return false;
        }
        bits *= 2;
    }
}

fn check_sigma(sigma: &Rational) -> Result<()> {
    if !sigma.is_positive() || !less_than_pi(sigma) {
        return Err(Error::OutOfRange(format!("σ = {sigma} must lie in (0, π)")));
    }
    Ok(())
}

/// `max { f̂(ω) : σ ≤ ω ≤ π }`, exactly.
pub fn spectrum_max_outside(f: &B1Signal, sigma: &Rational) -> Result<Rational> {
    check_sigma(sigma)?;
    let pi_hi = pi_approx(64) + two_pow_neg(64);
    let sup = f.spectrum.support_sup();
    // the spectrum vanishes on [π, π_hi] unless its support reaches past π
    let hi = match sup {
        Some(s) if less_than_pi(&s) => s,
        Some(_) => {
            let lo = pi_approx(64) - two_pow_neg(64);
            let v = f.spectrum.max_on(sigma, &lo);
            let tail = f.spectrum.max_on(&lo, &pi_hi);
            return Ok(if tail.is_zero() { v } else { v.max(f.spectrum.eval(&lo)) });
        }
        None => return Ok(Rational::zero()),
    };
    Ok(f.spectrum.max_on(sigma, &hi))
}

/// Certificate that `σ < bw(f)`: the spectrum of the truncation at `level`
/// attains `max_outside > 0` on `[σ, π]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BwWitness {
    pub level: u64,
    pub max_outside: Rational,
}

/// Scans the truncation levels `0, …, fuel` for one whose spectrum is positive
/// somewhere in `(σ, π]`.
pub fn semidecide_bw_gt(gen: &B1Generator, sigma: &Rational, fuel: u64) -> Result<Search<BwWitness>> {
    check_sigma(sigma)?;
    let positive_beyond = |left: &Rational, right: &Rational| {
        cmp_rational(right, sigma).is_gt() && cmp_rational(left, right).is_lt() && less_than_pi(left)
    };
    let mut hit = None;
    let r1 = gen.value(1);
    if positive_beyond(&(&r1 / Rational::from_integer(2.into())), &r1) {
        hit = Some(0);
    }
    let mut m = 1;
    let mut a = r1;
    while hit.is_none() && m <= fuel {
        let b = gen.value(m + 1);
        if cmp_rational(&b, &a).is_lt() {
            return Err(Error::Generator { index: m + 1, reason: "value decreases".into() });
        }
        if positive_beyond(&a, &b) {
            hit = Some(m);
        }
        a = b;
        m += 1;
    }
    let Some(level) = hit else {
        return Ok(Search::Exhausted);
    };
    let f = build(gen, level, true)?;
    Ok(Search::Halted(BwWitness { level, max_outside: spectrum_max_outside(&f, sigma)? }))
}

/// Rebuilds the witnessed truncation and checks its spectral maximum.
pub fn verify_witness(gen: &B1Generator, sigma: &Rational, w: &BwWitness) -> Result<bool> {
    let f = build(gen, w.level, true)?;
    let v = spectrum_max_outside(&f, sigma)?;
    Ok(v.is_positive() && v == w.max_outside)
}

/// The `n`-th rational of an enumeration of `(0, π) ∩ ℚ` that hits every element.
pub fn rational_below_pi(n: u64) -> Rational {
    let (a, b) = unpair2_u64(n);
    let q = Rational::new(BigInt::from(a) + 1, BigInt::from(b) + 1);
    if less_than_pi(&q) {
        q
    } else {
        Rational::one()
    }
}

/// `max Q(l)` (or 0), where `Q(l)` collects the candidates `rational_below_pi(m1)`
/// accepted by the semi-decision within `m2` levels, over `⟨m1, m2⟩ = m ≤ l`.
pub fn bw_lower_enumeration(gen: &B1Generator, fuel: u64) -> Result<Rational> {
    let mut best = Rational::zero();
    for m in 1..=fuel {
        let (m1, m2) = unpair2_u64(m);
        let q = rational_below_pi(m1);
        if q <= best {
            continue;
        }
        if semidecide_bw_gt(gen, &q, m2)?.is_halted() {
            best = q;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn geometric() -> B1Generator {
        B1Generator::from_fn("1 - 2^(-m-1)", |m| Rational::one() - two_pow_neg(m + 1))
    }

    #[test]
    fn spectrum_rejects_bad_breakpoints() {
        assert!(PiecewiseLinearSpectrum::new(vec![(r(1, 1), r(0, 1)), (r(1, 1), r(0, 1))]).is_err());
        assert!(
            PiecewiseLinearSpectrum::new(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(-1, 1)), (r(2, 1), r(0, 1))]).is_err()
        );
        assert!(PiecewiseLinearSpectrum::new(vec![(r(0, 1), r(1, 1)), (r(1, 1), r(0, 1))]).is_err());
    }

    #[test]
    fn step_generator_triangle() {
        let g = B1Generator::from_fn("step", |m| if m <= 1 { r(1, 2) } else { r(1, 1) });
        let f = synthesize(&g, 1).unwrap();
        let weighted_terms: Vec<_> = f.terms().iter().filter(|t| t.index > 0).collect();
        assert_eq!(weighted_terms.len(), 1);
        assert_eq!((weighted_terms[0].left.clone(), weighted_terms[0].right.clone()), (r(1, 2), r(1, 1)));
        assert_eq!(f.support_sup(), Some(r(1, 1)));
        assert_eq!(f.spectrum().eval(&r(3, 4)), r(1, 1));
    }

    #[test]
    fn geometric_support_and_mass() {
        let f = synthesize(&geometric(), 3).unwrap();
        assert_eq!(f.support_sup(), Some(r(31, 32)));
        assert_eq!(f.mass(), r(1, 1) + r(1, 4) + r(1, 9));
        assert_eq!(f.seed_mass(), r(1, 1));
        assert!(f.tail_bound() > &r(0, 1) && f.tail_bound() < &r(1, 3));
    }

    #[test]
    fn constant_generator_uses_seed() {
        let g = B1Generator::from_fn("c", |_| r(3, 4));
        let f = synthesize(&g, 5).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.spectrum().support_inf(), Some(r(3, 8)));
        assert_eq!(f.support_sup(), Some(r(3, 4)));
    }

    #[test]
    fn generator_validation() {
        let g = B1Generator::from_fn("bad", |m| if m == 3 { r(1, 4) } else { r(1, 2) });
        assert!(matches!(synthesize(&g, 4), Err(Error::Generator { index: 3, .. })));
        let z = B1Generator::from_fn("zero", |_| r(0, 1));
        assert!(synthesize(&z, 2).is_err());
    }

    #[test]
    fn spectrum_max_examples() {
        let g = B1Generator::from_fn("step", |m| if m <= 1 { r(1, 2) } else { r(1, 1) });
        let f = synthesize(&g, 0).unwrap();
        // seed triangle on [1/4, 1/2]
        assert_eq!(spectrum_max_outside(&f, &r(3, 8)).unwrap(), r(1, 1));
        assert_eq!(spectrum_max_outside(&f, &r(7, 16)).unwrap(), r(1, 2));
        assert_eq!(spectrum_max_outside(&f, &r(1, 2)).unwrap(), r(0, 1));
        assert!(spectrum_max_outside(&f, &r(0, 1)).is_err());
        assert!(spectrum_max_outside(&f, &r(22, 7)).is_err());
        let tri =
            PiecewiseLinearSpectrum::new(vec![(r(1, 2), r(0, 1)), (r(3, 4), r(1, 1)), (r(1, 1), r(0, 1))]).unwrap();
        assert_eq!(tri.max_on(&r(7, 8), &r(3, 1)), r(1, 2));
        assert_eq!(tri.max_on(&r(1, 2), &r(3, 1)), r(1, 1));
        assert_eq!(tri.integral(), r(1, 4));
    }

    #[test]
    fn sin_cos_accuracy() {
        for (x, s, c) in [
            (0.5f64, 0.5f64.sin(), 0.5f64.cos()),
            (-7.25, (-7.25f64).sin(), (-7.25f64).cos()),
            (100.0, 100f64.sin(), 100f64.cos()),
        ] {
            let (sa, ca) = sin_cos(&Rational::from_float(x).unwrap(), 40);
            assert!((crate::exact_real::to_f64(&sa) - s).abs() < 1e-11);
            assert!((crate::exact_real::to_f64(&ca) - c).abs() < 1e-11);
        }
        let v = sinc_unnormalized(&r(0, 1), 20);
        assert_eq!(v, r(1, 1));
        let v = crate::exact_real::to_f64(&sinc_unnormalized(&r(1, 3), 40));
        assert!((v - (1f64 / 3.0).sin() * 3.0).abs() < 1e-11);
    }

    #[test]
    fn eval_at_zero() {
        let g = B1Generator::from_fn("c", |_| r(1, 1));
        let f = synthesize(&g, 3).unwrap();
        let e = eval_time(&f, &r(0, 1), 30, false);
        // seed on [1/2, 1]: half width 1/4, value (1/4)/(2π)
        let want = 1.0 / (8.0 * std::f64::consts::PI);
        assert!((crate::exact_real::to_f64(&e.mid.re) - want).abs() < 1e-9);
        assert!(e.mid.im.abs() < two_pow_neg(30));
    }

    #[test]
    fn semidecision_geometric() {
        let g = geometric();
        let hit = semidecide_bw_gt(&g, &r(1, 4), 10).unwrap();
        let Search::Halted(w) = hit else { panic!("expected a witness") };
        assert_eq!(w.level, 0);
        assert!(verify_witness(&g, &r(1, 4), &w).unwrap());
        let Search::Halted(w) = semidecide_bw_gt(&g, &r(15, 16), 100).unwrap() else { panic!() };
        assert!(verify_witness(&g, &r(15, 16), &w).unwrap());
        assert_eq!(semidecide_bw_gt(&g, &r(1, 1), 2000).unwrap(), Search::Exhausted);
        assert_eq!(semidecide_bw_gt(&g, &r(3, 1), 50).unwrap(), Search::Exhausted);
    }

    #[test]
    fn sigma1_examples() {
        let seq = EffectiveSequence::new(1, Provenance::Expression("osc".into()), |i| match i[0] {
            0 => r(1, 2),
            1 => r(1, 4),
            _ => r(3, 4),
        });
        let g = sigma1_to_generator(&seq);
        assert_eq!((g.value(0), g.value(1), g.value(2)), (r(1, 2), r(1, 2), r(3, 4)));
        let z = sigma1_to_signal(&EffectiveSequence::constant(1, r(0, 1)), 4).unwrap();
        assert!(z.spectrum().is_zero());
        let h = EffectiveSequence::new(1, Provenance::Expression("1-1/(m+1)".into()), |i| {
            Rational::one() - Rational::new(1.into(), BigInt::from(i[0] + 1))
        });
        for k in 0..6 {
            assert_eq!(sigma1_to_signal(&h, k).unwrap().support_sup(), Some(r(1, 1) - r(1, k as i64 + 2)));
        }
    }

    #[test]
    fn rational_enumeration_bounds() {
        for n in 0..500 {
            let q = rational_below_pi(n);
            assert!(q.is_positive() && less_than_pi(&q));
        }
        assert!((0..200).any(|n| rational_below_pi(n) == r(3, 1)));
        assert!(less_than_pi(&r(314159, 100000)));
        assert!(!less_than_pi(&r(314160, 100000)));
    }

    #[test]
    fn lower_enumeration_monotone() {
        let g = B1Generator::from_fn("c", |_| r(1, 2));
        assert_eq!(bw_lower_enumeration(&g, 0).unwrap(), r(0, 1));
        let mut prev = r(0, 1);
        for l in [10u64, 50, 200, 800] {
            let v = bw_lower_enumeration(&g, l).unwrap();
            assert!(v >= prev && v < r(1, 2));
            prev = v;
        }
        assert!(prev > r(1, 4));
    }
}
