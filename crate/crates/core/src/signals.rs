//! Taylor and Weierstrass descriptions of bandlimited entire functions.
//!
//! A [`TaylorSignal`] is `f(z) = Σ a_n z^n / n!` given by a computable coefficient
//! sequence and a type bound `L` with `|a_n|^{1/n} ≤ L`. A [`WeierstrassSignal`]
//! is a double sequence of rational polynomials converging uniformly on disks.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::encodings::Rational;
use crate::error::{Error, Result};
use crate::exact_real::{
    ceil_log2_int, ceil_sqrt, factorial, nth_root_abs, pi_approx, pi_fixed, pow2, round_dyadic, two_pow_neg,
    ComputableReal, ComputableRealSeq, EffectiveSequence, Modulus, Provenance,
};
use crate::toy_machine::{decode, Corpus, CorpusEntry, HaltingCache};
use crate::zw_hierarchy::{infsup_to_limsup, limsup_shift_desc, ZWDescription};

// ---------------------------------------------------------------------------
// Complex rationals, polynomials and enclosures

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRational { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &ComplexRational) -> ComplexRational {
        ComplexRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &ComplexRational) -> ComplexRational {
        ComplexRational::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &ComplexRational) -> ComplexRational {
        if self.is_real() && o.is_real() {
            return ComplexRational::real(&self.re * &o.re);
        }
        ComplexRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, k: &Rational) -> ComplexRational {
        ComplexRational::new(&self.re * k, &self.im * k)
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `⌈|z|⌉`.
    pub fn ceil_abs(&self) -> u64 {
        ceil_sqrt(&self.norm_sqr()).to_u64().expect("evaluation point is of moderate size")
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

/// A value known to lie strictly within `radius` of `mid`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure<T> {
    pub mid: T,
    pub radius: Rational,
}

impl Enclosure<Rational> {
    pub fn contains(&self, v: &Rational) -> bool {
        (v - &self.mid).abs() < self.radius
    }
}

impl Enclosure<ComplexRational> {
    /// Whether `v` lies in the disk around `mid`.
    pub fn contains(&self, v: &ComplexRational) -> bool {
        v.sub(&self.mid).norm_sqr() < &self.radius * &self.radius
    }
}

/// Rational polynomial with trailing zero coefficients trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        RationalPolynomial::new(vec![c])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^n` (zero beyond the degree).
    pub fn coefficient(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: &ComplexRational) -> ComplexRational {
        if z.is_real() {
            return ComplexRational::real(self.eval(&z.re));
        }
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexRational::zero(), |acc, c| acc.mul(z).add(&ComplexRational::real(c.clone())))
    }
}

// ---------------------------------------------------------------------------
// Taylor signals

/// `f(z) = Σ a_n z^n / n!` with a caller-asserted type bound `L`.
#[derive(Clone, Debug)]
pub struct TaylorSignal {
    name: String,
    coefficients: ComputableRealSeq,
    type_bound: u64,
}

/// Coefficients inspected by the type-bound spot check.
pub const SPOT_CHECK_TERMS: u64 = 16;

impl TaylorSignal {
    /// Packages coefficients with a type bound after checking
    /// `|approx(a_n, 8)| ≤ L^n + 2^{-8}` for `n ≤ 16`.
    pub fn new(name: impl Into<String>, coefficients: ComputableRealSeq, type_bound: u64) -> Result<Self> {
        let s = Self::new_unchecked(name, coefficients, type_bound);
        s.spot_check()?;
        Ok(s)
    }

    pub fn new_unchecked(name: impl Into<String>, coefficients: ComputableRealSeq, type_bound: u64) -> Self {
        assert_eq!(coefficients.arity(), 1, "Taylor coefficients form a simple sequence");
        TaylorSignal { name: name.into(), coefficients, type_bound }
    }

    /// Signal with exact rational coefficients.
    pub fn from_exact(
        name: impl Into<String>,
        type_bound: u64,
        a: impl Fn(u64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        let name = name.into();
        let seq = EffectiveSequence::new(1, Provenance::Builtin(name.clone()), move |i| a(i[0]));
        TaylorSignal::new_unchecked(name, ComputableRealSeq::exact(seq), type_bound)
    }

    pub fn spot_check(&self) -> Result<()> {
        let slack = two_pow_neg(8);
        for n in 0..=SPOT_CHECK_TERMS {
            let a = self.coefficient(n, 8);
            let bound = Rational::from_integer(BigInt::from(self.type_bound).pow(n as u32)) + &slack;
            if a.abs() > bound {
                return Err(Error::TypeBound {
                    index: n,
                    detail: format!("|a_{n}| ≈ {a} exceeds {}^{n} + 2^-8", self.type_bound),
                });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn type_bound(&self) -> u64 {
        self.type_bound
    }

    pub fn coefficients(&self) -> &ComputableRealSeq {
        &self.coefficients
    }

    /// Rational within `2^{-M}` of `a_n`.
    pub fn coefficient(&self, n: u64, precision: u64) -> Rational {
        self.coefficients.approx(&[n], precision)
    }

    pub fn coefficient_real(&self, n: u64) -> ComputableReal {
        self.coefficients.element(&[n])
    }
}

pub fn zero_signal() -> TaylorSignal {
    TaylorSignal::from_exact("zero", 0, |_| Rational::zero())
}

/// The constant function 1.
pub fn one_signal() -> TaylorSignal {
    TaylorSignal::from_exact("one", 0, |n| if n == 0 { Rational::one() } else { Rational::zero() })
}

pub fn exp_signal() -> TaylorSignal {
    TaylorSignal::from_exact("exp", 1, |_| Rational::one())
}

/// `e^{cz}`, with `a_n = c^n`.
pub fn exp_scaled(c: &Rational) -> TaylorSignal {
    let bound = c.abs().ceil().to_integer().to_u64().expect("moderate scale factor");
    let c2 = c.clone();
    TaylorSignal::from_exact(format!("exp({c}z)"), bound, move |n| num_traits::pow::pow(c2.clone(), n as usize))
}

/// Polynomial `Σ_{n<len} a_n z^n / n!` from its Taylor coefficients.
pub fn polynomial_signal(a: Vec<Rational>, type_bound: u64) -> TaylorSignal {
    TaylorSignal::from_exact("polynomial", type_bound, move |n| {
        a.get(n as usize).cloned().unwrap_or_else(Rational::zero)
    })
}

/// `|π^n/(n+1) - result| < 2^{-M}` for even `n`.
fn sinc_coefficient_magnitude(n: u64, precision: u64) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let bits = precision + 3 + 2 * n + (64 - (2 * n).leading_zeros() as u64);
    let p = pi_fixed(bits);
    let mut v = p.clone();
    for _ in 1..n {
        v = (&v * &p) >> bits as usize;
    }
    let power = Rational::new(v, BigInt::from(pow2(bits)));
    round_dyadic(&(power / Rational::from_integer(BigInt::from(n + 1))), precision + 2)
}

/// `sin(πz)/(πz)`, with `a_{2k} = (-1)^k π^{2k}/(2k+1)` and odd coefficients zero.
pub fn sinc_signal() -> TaylorSignal {
    let cache: Arc<Mutex<HashMap<(u64, u64), Rational>>> = Arc::default();
    let coeffs = ComputableRealSeq::from_fn(1, Provenance::Builtin("sinc".into()), move |idx, m| {
        let n = idx[0];
        if n % 2 == 1 {
            return Rational::zero();
        }
        if let Some(v) = cache.lock().expect("sinc cache poisoned").get(&(n, m)) {
            return v.clone();
        }
        let mag = sinc_coefficient_magnitude(n, m);
        let v = if (n / 2) % 2 == 0 { mag } else { -mag };
        cache.lock().expect("sinc cache poisoned").insert((n, m), v.clone());
        v
    });
    TaylorSignal::new_unchecked("sinc", coeffs, 4)
}

/// Builtin reference signals by name: `zero`, `one`, `exp`, `sinc` and `exp:c`
/// for `e^{cz}` with a rational `c`.
pub fn builtin_signal(name: &str) -> Option<TaylorSignal> {
    match name {
        "zero" => Some(zero_signal()),
        "one" => Some(one_signal()),
        "exp" => Some(exp_signal()),
        "sinc" => Some(sinc_signal()),
        _ => {
            let c = name.strip_prefix("exp:")?;
            let q = parse_rational(c)?;
            Some(exp_scaled(&q))
        }
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits: BigInt = format!("{}{frac}", int.trim_start_matches(['-', '+'])).parse().ok()?;
        let v = Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

// ---------------------------------------------------------------------------
// Conversions

/// `K(M, J) = max{8LJ, M+2}`.
pub fn truncation_degree(type_bound: u64, precision: u64, radius: u64) -> u64 {
    (8 * type_bound * radius).max(precision + 2)
}

/// `N(M, J) = 2J + M + 2`.
pub fn coefficient_precision(precision: u64, radius: u64) -> u64 {
    2 * radius + precision + 2
}

/// `p_{M,J}(z) = Σ_{n ≤ K(M,J)} r_{n,N(M,J)}/n! · z^n`, within `2^{-M-1}` of `f`
/// on `|z| ≤ J`.
pub fn taylor_polynomial(f: &TaylorSignal, precision: u64, radius: u64) -> RationalPolynomial {
    let k = truncation_degree(f.type_bound, precision, radius);
    let n_prec = coefficient_precision(precision, radius);
    let mut fact = BigUint::one();
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    for n in 0..=k {
        if n > 0 {
            fact *= n;
        }
        let r = f.coefficient(n, n_prec);
        coeffs.push(r / Rational::from_integer(BigInt::from(fact.clone())));
    }
    RationalPolynomial::new(coeffs)
}

type PolyFn = dyn Fn(u64, u64) -> RationalPolynomial + Send + Sync;
type IndexFn = dyn Fn(u64, u64) -> u64 + Send + Sync;

/// Polynomials `p_{m1,m2}` with `|f(z) - p_{m1,m2}(z)| < 2^{-M}` whenever
/// `|z| ≤ m2` and `m1 ≥ ξ(M, m2)`.
#[derive(Clone)]
pub struct WeierstrassSignal {
    name: String,
    polys: Arc<PolyFn>,
    modulus: Arc<IndexFn>,
}

impl fmt::Debug for WeierstrassSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeierstrassSignal").field("name", &self.name).finish()
    }
}

impl WeierstrassSignal {
    pub fn new(
        name: impl Into<String>,
        polys: impl Fn(u64, u64) -> RationalPolynomial + Send + Sync + 'static,
        modulus: impl Fn(u64, u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        WeierstrassSignal { name: name.into(), polys: Arc::new(polys), modulus: Arc::new(modulus) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn poly(&self, m1: u64, m2: u64) -> RationalPolynomial {
        (self.polys)(m1, m2)
    }

    pub fn modulus(&self, precision: u64, radius: u64) -> u64 {
        (self.modulus)(precision, radius)
    }

    /// Polynomial within `2^{-M}` of the signal on `|z| ≤ J`.
    pub fn approx_poly(&self, precision: u64, radius: u64) -> RationalPolynomial {
        self.poly(self.modulus(precision, radius), radius)
    }
}

/// `p_{M,J}` with `ξ(M, J) = M`; degrees are `K(M, J)`.
pub fn taylor_to_weierstrass(f: &TaylorSignal) -> WeierstrassSignal {
    let f = f.clone();
    let name = format!("weierstrass({})", f.name);
    WeierstrassSignal::new(name, move |m, j| taylor_polynomial(&f, m, j), |m, _| m)
}

/// Recovers `a_n` as `n!` times the degree-`n` coefficient of `p_{ξ(m,1),1}`, with
/// error at most `n!·2^{-m}`; the modulus is `M + ⌈log₂ n!⌉`.
pub fn weierstrass_to_taylor(w: &WeierstrassSignal, type_bound: u64) -> TaylorSignal {
    let w2 = w.clone();
    let approximations = EffectiveSequence::new(2, Provenance::Composite(format!("taylor({})", w.name)), move |idx| {
        let (n, m) = (idx[0], idx[1]);
        let p = w2.approx_poly(m, 1);
        p.coefficient(n as usize) * Rational::from_integer(BigInt::from(factorial(n)))
    });
    let modulus = Modulus::new(|idx| idx[1] + ceil_log2_int(&factorial(idx[0])));
    let coeffs = ComputableRealSeq::new(1, approximations, modulus);
    TaylorSignal::new_unchecked(format!("taylor({})", w.name), coeffs, type_bound)
}

/// Enclosure of `f(z)` of radius `2^{-M-1}`, using `J = ⌈|z|⌉`.
pub fn eval_taylor(f: &TaylorSignal, z: &ComplexRational, precision: u64) -> Enclosure<ComplexRational> {
    let j = z.ceil_abs();
    let p = taylor_polynomial(f, precision, j);
    Enclosure { mid: p.eval_complex(z), radius: two_pow_neg(precision + 1) }
}

/// Enclosure of `f(z)` of radius `2^{-M}`.
pub fn eval_weierstrass(w: &WeierstrassSignal, z: &ComplexRational, precision: u64) -> Enclosure<ComplexRational> {
    let p = w.approx_poly(precision, z.ceil_abs());
    Enclosure { mid: p.eval_complex(z), radius: two_pow_neg(precision) }
}

// ---------------------------------------------------------------------------
// Bandwidth

/// `b_m = |a_m|^{1/m}` for `m ≥ 1` and `b_0 = 0`; `bw(f) = limsup b_m`.
pub fn bandwidth_sequence(f: &TaylorSignal) -> ComputableRealSeq {
    let f = f.clone();
    ComputableRealSeq::from_fn(1, Provenance::Composite("root sequence".into()), move |idx, m| {
        let n = idx[0];
        if n == 0 {
            return Rational::zero();
        }
        nth_root_abs(&f.coefficient_real(n), n as u32).approx(m)
    })
}

/// Order-2 upper description `b'_{m1,m2} = b_{m1+m2}` of `bw(f)`.
pub fn bandwidth_upper_desc(f: &TaylorSignal) -> ZWDescription {
    limsup_shift_desc(&bandwidth_sequence(f))
}

/// `min_{m1 ≤ T} max_{m2 ≤ T}` of the `M`-bit approximants of `b_{m1+m2}`.
pub fn bandwidth_fuel_estimate(f: &TaylorSignal, fuel: u64, precision: u64) -> Rational {
    let b = bandwidth_sequence(f);
    let values: Vec<Rational> = (0..=2 * fuel).map(|m| b.approx(&[m], precision)).collect();
    let width = fuel as usize + 1;
    let mut window: VecDeque<usize> = VecDeque::new();
    let mut best: Option<&Rational> = None;
    for (i, v) in values.iter().enumerate() {
        while window.back().is_some_and(|&j| values[j] <= *v) {
            window.pop_back();
        }
        window.push_back(i);
        if window.front().is_some_and(|&j| j + width <= i) {
            window.pop_front();
        }
        if i + 1 >= width {
            let max = &values[*window.front().expect("non-empty")];
            if best.is_none_or(|b| max < b) {
                best = Some(max);
            }
        }
    }
    best.expect("non-empty").clone()
}

// ---------------------------------------------------------------------------
// Elementary signals

/// `Σ_{k=-L}^{L} c_k sin(π(t-k))/(π(t-k))`.
#[derive(Clone, Debug)]
pub struct ElementarySignal {
    half_width: u64,
    coefficients: Vec<ComputableReal>,
}

impl ElementarySignal {
    /// `coefficients` lists `c_{-L}, …, c_L`.
    pub fn new(coefficients: Vec<ComputableReal>) -> Result<Self> {
        if coefficients.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("an elementary signal needs 2L+1 coefficients".into()));
        }
        let half_width = (coefficients.len() / 2) as u64;
        Ok(ElementarySignal { half_width, coefficients })
    }

    pub fn half_width(&self) -> u64 {
        self.half_width
    }

    /// `c_k` for `-L ≤ k ≤ L`.
    pub fn coefficient(&self, k: i64) -> Option<&ComputableReal> {
        let idx = k + self.half_width as i64;
        usize::try_from(idx).ok().and_then(|i| self.coefficients.get(i))
    }
}

/// Rational within `2^{-P}` of `sin(πu)/(πu)`.
pub fn sinc_approx(u: &Rational, precision: u64) -> Rational {
    if u.is_zero() {
        return Rational::one();
    }
    if u.is_integer() {
        return Rational::zero();
    }
    let guard = precision + 4;
    let size = u.abs().ceil().to_integer().bits();
    let x = pi_approx(guard + size) * u;
    let x2 = &x * &x;
    let tol = two_pow_neg(guard);
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut j = 0u64;
    loop {
        let decreasing = Rational::from_integer(BigInt::from(2 * j + 1)) > x.abs();
        if decreasing && term.abs() < tol {
            break;
        }
        sum += &term;
        j += 1;
        term = -term * &x2 / Rational::from_integer(BigInt::from((2 * j) * (2 * j + 1)));
    }
    round_dyadic(&sum, guard + 1)
}

/// Enclosure of `f(t)` of radius `2^{-M-1}`; exact sampling at integers.
pub fn eval_elementary(f: &ElementarySignal, t: &Rational, precision: u64) -> Enclosure<Rational> {
    let l = f.half_width as i64;
    if t.is_integer() {
        let j = t.to_integer();
        let mid = match j.to_i64().and_then(|j| f.coefficient(j)) {
            Some(c) => c.approx(precision + 1),
            None => Rational::zero(),
        };
        return Enclosure { mid, radius: two_pow_neg(precision + 1) };
    }
    let size = f.coefficients.iter().map(|c| c.approx(0).abs().ceil().to_integer() + 2).sum::<BigInt>();
    let extra = size.bits();
    let p = precision + 2 + extra;
    let mut mid = Rational::zero();
    for k in -l..=l {
        let c = f.coefficient(k).expect("index in range").approx(p);
        if c.is_zero() {
            continue;
        }
        mid += c * sinc_approx(&(t - Rational::from_integer(k.into())), p);
    }
    Enclosure { mid, radius: two_pow_neg(precision + 1) }
}

// ---------------------------------------------------------------------------
// Derived signals

/// `(1-λ)f + λ·sinc`, with type bound `max(L_f, 4)`.
pub fn mix_with_sinc(f: &TaylorSignal, lambda: &Rational) -> Result<TaylorSignal> {
    if lambda.is_negative() || lambda > &Rational::one() {
        return Err(Error::InvalidArgument(format!("mixing weight {lambda} is outside [0, 1]")));
    }
    let sinc = sinc_signal();
    let (f2, lam) = (f.clone(), lambda.clone());
    let rest = Rational::one() - lambda;
    let coeffs = ComputableRealSeq::from_fn(1, Provenance::Composite("sinc mixture".into()), move |idx, m| {
        let n = idx[0];
        let mut acc = Rational::zero();
        if !rest.is_zero() {
            acc += &rest * f2.coefficient(n, m);
        }
        if !lam.is_zero() {
            acc += &lam * sinc.coefficient(n, m);
        }
        acc
    });
    let name = format!("mix({}, sinc, {lambda})", f.name);
    Ok(TaylorSignal::new_unchecked(name, coeffs, f.type_bound.max(4)))
}

/// `f(z) = Σ (r'_m z)^m / m!` where `r'` is the limsup conversion of `r`; hence
/// `bw(f) = inf_{m1} sup_{m2} r`. Entries of `r` must lie in `[0, bound]` with
/// `bound ≤ π`.
pub fn taylor_from_pi2(r: &EffectiveSequence, bound: &Rational) -> Result<TaylorSignal> {
    if bound.is_negative() || bound > &(pi_approx(64) - two_pow_neg(64)) {
        return Err(Error::InvalidArgument(format!("bound {bound} must lie in [0, π]")));
    }
    let limsup = infsup_to_limsup(r);
    let hi = bound.clone();
    let type_bound = bound.ceil().to_integer().to_u64().expect("bound is at most π");
    Ok(TaylorSignal::from_exact("pi2 generator", type_bound, move |m| {
        let v = limsup.at1(m).max(Rational::zero()).min(hi.clone());
        num_traits::pow::pow(v, m as usize)
    }))
}

/// The family `m ↦ g_m` where `g_m` is `f` truncated at degree `k̂` when
/// `m = enumeration(k̂)` and `g_m = f` otherwise.
///
/// Stage `k` of coefficient `n` of `g_m` uses the enumeration values
/// `enumeration(0), …, enumeration(k)`; stage `k = n` is already exact.
#[derive(Clone)]
pub struct TruncationFamily {
    base: TaylorSignal,
    enumeration: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl fmt::Debug for TruncationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncationFamily").field("base", &self.base.name).finish()
    }
}

pub fn adversarial_truncation_family(
    f: &TaylorSignal,
    enumeration: impl Fn(u64) -> u64 + Send + Sync + 'static,
) -> TruncationFamily {
    TruncationFamily { base: f.clone(), enumeration: Arc::new(enumeration) }
}

impl TruncationFamily {
    /// `ξ(M, n, m) = n`.
    pub fn modulus(&self, _precision: u64, n: u64, _m: u64) -> u64 {
        n
    }

    /// Approximation of `a_n(m, k)` at precision `M`.
    pub fn stage_coefficient(&self, n: u64, m: u64, k: u64, precision: u64) -> Rational {
        let cut = (0..=k).find(|&i| (self.enumeration)(i) == m).unwrap_or(k);
        if n > cut {
            Rational::zero()
        } else {
            self.base.coefficient(n, precision)
        }
    }

    pub fn signal(&self, m: u64) -> TaylorSignal {
        let fam = self.clone();
        let coeffs =
            ComputableRealSeq::from_fn(1, Provenance::Composite(format!("truncation family {m}")), move |idx, p| {
                let n = idx[0];
                fam.stage_coefficient(n, m, fam.modulus(p, n, m), p)
            });
        TaylorSignal::new_unchecked(format!("{}[{m}]", self.base.name), coeffs, self.base.type_bound)
    }
}

// ---------------------------------------------------------------------------
// The coefficient family without a polynomial description

/// The family `f_m(z) = Σ_{n < 2^{τ(m)}} 2^{-τ(m)} z^n` for inputs `m` on which the
/// program halts after `τ(m)` steps, and `f_m = 0` otherwise, so `f_m(1) = 1_{D}(m)`.
#[derive(Clone)]
pub struct AnToPmFamily {
    runs: HaltingCache,
    entry: Option<CorpusEntry>,
}

impl fmt::Debug for AnToPmFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnToPmFamily").field("program", &self.runs.program().to_text()).finish()
    }
}

pub fn an_to_pm_family(n: &BigUint) -> AnToPmFamily {
    AnToPmFamily::with_corpus(n, &Corpus::builtin())
}

impl AnToPmFamily {
    pub fn with_corpus(n: &BigUint, corpus: &Corpus) -> Self {
        AnToPmFamily { runs: HaltingCache::new(decode(n)), entry: corpus.get(n).cloned() }
    }

    /// `h(m, k)`: the halting time on `m` if it is at most `k`, else `k`.
    pub fn h(&self, m: u64, k: u64) -> u64 {
        self.runs.halting_time_within(m, k).unwrap_or(k)
    }

    /// `r_{m1,m2,m3} = 2^{-h(m2,m3)}` if `m1 ≤ 2^{h(m2,m3)} - 1`, else 0.
    pub fn r(&self, m1: u64, m2: u64, m3: u64) -> Rational {
        let h = self.h(m2, m3);
        let inside = h >= 64 || m1 < (1u64 << h);
        if inside {
            two_pow_neg(h)
        } else {
            Rational::zero()
        }
    }

    /// `ξ(m1, m2, M) = M + 1`.
    pub fn modulus(&self, precision: u64) -> u64 {
        precision + 1
    }

    /// The limit `a_{m1,m2}` from the recorded halting time.
    pub fn limit(&self, m1: u64, m2: u64) -> Result<Rational> {
        match self.halting_time(m2)? {
            Some(t) if t >= 64 || m1 < (1u64 << t) => Ok(two_pow_neg(t)),
            _ => Ok(Rational::zero()),
        }
    }

    fn halting_time(&self, m: u64) -> Result<Option<u64>> {
        let entry =
            self.entry.as_ref().ok_or_else(|| Error::NoCertificate("the program is not in the corpus".into()))?;
        Ok(entry.halting_time(m))
    }

    /// Type bound for `f_m` from the recorded halting time: the least `L` with
    /// `L^n ≥ n!/2^τ` for `1 ≤ n < 2^τ`.
    pub fn type_bound(&self, m: u64) -> Result<u64> {
        let Some(t) = self.halting_time(m)? else {
            return Ok(0);
        };
        if t >= 20 {
            return Err(Error::OutOfRange(format!("halting time {t} is too large for evaluation")));
        }
        let mut best = 1u64;
        let mut fact = BigUint::one();
        for n in 1..(1u64 << t) {
            fact *= n;
            let need = (&fact >> t as usize) + 1u32;
            while BigUint::from(best).pow(n as u32) < need {
                best += 1;
            }
        }
        Ok(best)
    }

    /// `f_m` with coefficients `m1!·a_{m1,m}`, approximated by `m1!·r_{m1,m,m3}` at
    /// `m3 = M + 1 + ⌈log₂ m1!⌉`.
    pub fn signal(&self, m: u64) -> Result<TaylorSignal> {
        let bound = self.type_bound(m)?;
        let fam = self.clone();
        let coeffs = ComputableRealSeq::from_fn(1, Provenance::Composite(format!("an-to-pm {m}")), move |idx, p| {
            let m1 = idx[0];
            let fact = factorial(m1);
            let m3 = fam.modulus(p + ceil_log2_int(&fact));
            fam.r(m1, m, m3) * Rational::from_integer(BigInt::from(fact))
        });
        Ok(TaylorSignal::new_unchecked(format!("an-to-pm[{m}]"), coeffs, bound))
    }

    /// Enclosure of `f_m(1)`.
    pub fn eval_at_one(&self, m: u64, precision: u64) -> Result<Enclosure<ComplexRational>> {
        let f = self.signal(m)?;
        Ok(eval_taylor(&f, &ComplexRational::real(Rational::one()), precision))
    }
}
