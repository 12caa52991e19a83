#![allow(dead_code)]

use bwlab::encodings::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

// ---------------------------------------------------------------------------
// Fixed-point complex series oracles

/// Working precision of the oracles in bits; results are trusted to `2^-200`.
pub const ORACLE_BITS: u64 = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub re: BigInt,
    pub im: BigInt,
}

fn scale() -> BigInt {
    BigInt::one() << ORACLE_BITS as usize
}

fn to_fixed(x: &Rational) -> BigInt {
    (x * Rational::from_integer(scale())).floor().to_integer()
}

impl Fixed {
    pub fn from_rationals(re: &Rational, im: &Rational) -> Self {
        Fixed { re: to_fixed(re), im: to_fixed(im) }
    }

    pub fn one() -> Self {
        Fixed { re: scale(), im: BigInt::zero() }
    }

    fn add(&self, o: &Fixed) -> Fixed {
        Fixed { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn mul(&self, o: &Fixed) -> Fixed {
        let b = ORACLE_BITS as usize;
        Fixed { re: (&self.re * &o.re - &self.im * &o.im) >> b, im: (&self.re * &o.im + &self.im * &o.re) >> b }
    }

    fn div_int(&self, k: u64) -> Fixed {
        Fixed { re: &self.re / BigInt::from(k), im: &self.im / BigInt::from(k) }
    }

    fn neg(&self) -> Fixed {
        Fixed { re: -&self.re, im: -&self.im }
    }

    fn is_tiny(&self) -> bool {
        self.re.abs() < BigInt::from(2) && self.im.abs() < BigInt::from(2)
    }
}

/// `atan(1/k)` by its alternating series, in fixed point.
fn atan_inv(num: u64, den: u64) -> BigInt {
    let b = ORACLE_BITS as usize;
    let x = (BigInt::from(num) << b) / BigInt::from(den);
    let x2 = (&x * &x) >> b;
    let mut power = x.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = (&power * &x2) >> b;
        k += 1;
    }
    sum
}

/// `π = 20·atan(1/7) + 8·atan(3/79)`.
pub fn pi_fixed_oracle() -> BigInt {
    atan_inv(1, 7) * 20 + atan_inv(3, 79) * 8
}

pub fn pi_oracle() -> Rational {
    Rational::new(pi_fixed_oracle(), scale())
}

/// `Σ z^n/n!` until the terms vanish.
pub fn exp_oracle(z: &Fixed) -> Fixed {
    let mut term = Fixed::one();
    let mut sum = Fixed::one();
    let mut n = 1;
    loop {
        term = term.mul(z).div_int(n);
        if term.is_tiny() {
            return sum;
        }
        sum = sum.add(&term);
        n += 1;
    }
}

/// `sin(πz)/(πz) = Σ (-1)^k (πz)^{2k}/(2k+1)!`.
pub fn sinc_oracle(z: &Fixed) -> Fixed {
    let pi = Fixed { re: pi_fixed_oracle(), im: BigInt::zero() };
    let w = pi.mul(z);
    let minus_w2 = w.mul(&w).neg();
    let mut term = Fixed::one();
    let mut sum = Fixed::one();
    let mut k = 1;
    loop {
        term = term.mul(&minus_w2).div_int((2 * k) * (2 * k + 1));
        if term.is_tiny() {
            return sum;
        }
        sum = sum.add(&term);
        k += 1;
    }
}

/// Reference values of the test signals at `z`.
pub fn signal_oracle(name: &str, z: &Fixed) -> Fixed {
    match name {
        "exp" => exp_oracle(z),
        "exp:1/2" => exp_oracle(&z.div_int(2)),
        "sinc" => sinc_oracle(z),
        "one" => Fixed::one(),
        other => panic!("no oracle for {other}"),
    }
}

/// Horner evaluation of a rational polynomial in fixed point; for degree ≤ 96 and
/// `|z| ≤ 3` the rounding error stays below `2^-200`.
pub fn poly_fixed(coeffs: &[Rational], z: &Fixed) -> Fixed {
    let zero = Rational::zero();
    let mut acc = Fixed { re: BigInt::zero(), im: BigInt::zero() };
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&Fixed::from_rationals(c, &zero));
    }
    acc
}

/// `|p - f| < 2^{-m}` where `p` and `f` are both accurate to `2^-200`.
pub fn within(p: &Fixed, f: &Fixed, m: u64) -> bool {
    let d_re = &p.re - &f.re;
    let d_im = &p.im - &f.im;
    let slack = BigInt::one() << (ORACLE_BITS - 199) as usize;
    let bound = (BigInt::one() << (ORACLE_BITS - m) as usize) - slack;
    &d_re * &d_re + &d_im * &d_im < &bound * &bound
}

/// 200-bit enclosure midpoint of the `n`-th Taylor coefficient of sinc.
pub fn sinc_coefficient_oracle(n: u64) -> Rational {
    if n % 2 == 1 {
        return Rational::zero();
    }
    let pi = pi_oracle();
    let mut v = num_traits::pow::pow(pi, n as usize) / Rational::from_integer(BigInt::from(n + 1));
    if (n / 2) % 2 == 1 {
        v = -v;
    }
    v
}

/// Error bound of [`sinc_coefficient_oracle`] for `n ≤ 16`.
pub fn sinc_coefficient_slack() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 300usize)
}

/// `100` deterministic points in the closed disk of radius `j`.
pub fn disk_points(j: u64, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let den = 64i64;
    let lim = j as i64 * den;
    let mut out = Vec::with_capacity(100);
    while out.len() < 100 {
        if j == 0 {
            out.push((Rational::zero(), Rational::zero()));
            continue;
        }
        let (a, b) = (rng.gen_range(-lim..=lim), rng.gen_range(-lim..=lim));
        if a * a + b * b <= lim * lim {
            out.push((q(a, den), q(b, den)));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Eventually constant inf-sup corpus

/// A row that reads `before` for columns `< threshold` and `after` from then on.
#[derive(Clone, Debug)]
pub struct StepRow {
    pub before: Rational,
    pub after: Rational,
    pub threshold: u64,
}

impl StepRow {
    pub fn at(&self, col: u64) -> Rational {
        if col >= self.threshold {
            self.after.clone()
        } else {
            self.before.clone()
        }
    }

    pub fn sup(&self) -> Rational {
        if self.threshold == 0 {
            self.after.clone()
        } else {
            self.before.clone().max(self.after.clone())
        }
    }
}

/// Finitely many explicit rows followed by a repeated tail row.
#[derive(Clone, Debug)]
pub struct ZwInstance {
    pub rows: Vec<StepRow>,
    pub tail: StepRow,
}

impl ZwInstance {
    pub fn row(&self, i: u64) -> &StepRow {
        self.rows.get(i as usize).unwrap_or(&self.tail)
    }

    pub fn at(&self, i: u64, j: u64) -> Rational {
        self.row(i).at(j)
    }

    /// `inf_i sup_j`, attained among the explicit rows and the tail.
    pub fn infsup(&self) -> Rational {
        self.rows.iter().chain(std::iter::once(&self.tail)).map(StepRow::sup).min().expect("non-empty")
    }

    pub fn max_threshold(&self) -> u64 {
        self.rows.iter().chain(std::iter::once(&self.tail)).map(|r| r.threshold).max().unwrap_or(0)
    }
}

fn small_rational(rng: &mut StdRng) -> Rational {
    let b = rng.gen_range(1..=4i64);
    q(rng.gen_range(-3 * b..=3 * b), b)
}

fn random_threshold(rng: &mut StdRng) -> u64 {
    if rng.gen_bool(0.3) {
        0
    } else {
        1 << rng.gen_range(0..=6u32)
    }
}

/// 200 instances with values `a/b`, `b ≤ 4`, `|a/b| ≤ 3`; every second one puts the
/// late threshold `2^i` on row `i` and hides a large value behind it.
pub fn zw_corpus() -> Vec<ZwInstance> {
    let mut rng = StdRng::seed_from_u64(0x5eed_2e40);
    (0..200)
        .map(|n| {
            let len = rng.gen_range(1..=8usize);
            let adversarial = n % 2 == 1;
            let rows = (0..len)
                .map(|i| {
                    if adversarial {
                        let low = small_rational(&mut rng).min(q(-1, 1));
                        let high = small_rational(&mut rng).max(q(1, 2));
                        StepRow { before: low, after: high, threshold: 1 << (i as u32).min(6) }
                    } else {
                        StepRow {
                            before: small_rational(&mut rng),
                            after: small_rational(&mut rng),
                            threshold: random_threshold(&mut rng),
                        }
                    }
                })
                .collect();
            let tail = StepRow {
                before: small_rational(&mut rng),
                after: small_rational(&mut rng),
                threshold: if adversarial { 64 } else { random_threshold(&mut rng) },
            };
            ZwInstance { rows, tail }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Pairing reference

/// Pairs `(x, y)` indexed by their Cantor code, generated by walking diagonals.
pub fn cantor_table(len: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(len);
    let mut d = 0u64;
    while out.len() < len {
        for y in 0..=d {
            if out.len() == len {
                break;
            }
            out.push((d - y, y));
        }
        d += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Numeric integration

/// `∫ sin²(u)/u² du` over the real line: composite Simpson on `[-U, U]` plus the
/// bound `1/U + 1/U²` on the two discarded tails.
pub fn sinc_squared_integral_upper(u_max: f64, steps: usize) -> f64 {
    let f = |u: f64| if u == 0.0 { 1.0 } else { (u.sin() / u).powi(2) };
    let h = u_max / steps as f64;
    let mut s = f(0.0) + f(u_max);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    2.0 * s * h / 3.0 + 1.0 / u_max + 1.0 / (u_max * u_max)
}
