//! Zheng-Weihrauch descriptions and the transforms between them.
//!
//! An upper description of order `n` denotes `inf_{m1} sup_{m2} inf_{m3} …`
//! of a multi-indexed sequence of computable reals; a lower one starts with `sup`.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed};

use crate::encodings::{varpi1, varpi2, Rational};
use crate::error::{Error, Result};
use crate::exact_real::{two_pow_neg, ComputableRealSeq, EffectiveSequence, Provenance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Clone, Debug)]
pub struct ZWDescription {
    pub order: usize,
    pub direction: Direction,
    pub body: ComputableRealSeq,
}

impl ZWDescription {
    pub fn new(direction: Direction, body: ComputableRealSeq) -> Result<Self> {
        let order = body.arity();
        if order == 0 {
            return Err(Error::InvalidArgument("ZW descriptions have order >= 1".into()));
        }
        Ok(ZWDescription { order, direction, body })
    }

    pub fn upper(body: ComputableRealSeq) -> Result<Self> {
        ZWDescription::new(Direction::Upper, body)
    }

    pub fn lower(body: ComputableRealSeq) -> Result<Self> {
        ZWDescription::new(Direction::Lower, body)
    }
}

/// The rational sequence `r_tm = r'_{g(tm)} + 2^{-ϖ2(m1)}` with
/// `g'(tm) = (ϖ1(m1), m2, …, mn)` and `g(tm) = g'(tm) ∘ ξ(g'(tm), ϖ2(m1))`.
///
/// Every entry dominates `x_{g'(tm)}`, and the alternating value is preserved.
pub fn upper_zw_flatten(d: &ZWDescription) -> Result<EffectiveSequence> {
    if d.direction != Direction::Upper {
        return Err(Error::InvalidArgument("flattening needs an upper description".into()));
    }
    let body = d.body.clone();
    let prov = Provenance::Composite(format!("flattened order-{} description", d.order));
    Ok(EffectiveSequence::new(d.order, prov, move |tm| {
        let (l, k) = (varpi1(tm[0]), varpi2(tm[0]));
        let mut g = tm.to_vec();
        g[0] = l;
        body.approx(&g, k) + two_pow_neg(k)
    }))
}

/// `t_{n,j} = min_{i ≤ n} max_{k ≤ j} r_{i,k}`.
pub fn monotone_normal_form(r: &EffectiveSequence) -> EffectiveSequence {
    assert_eq!(r.arity(), 2, "monotone normal form needs a double sequence");
    let r = r.clone();
    EffectiveSequence::new(2, Provenance::Composite("monotone normal form".into()), move |idx| {
        let (n, j) = (idx[0], idx[1]);
        (0..=n).map(|i| (0..=j).map(|k| r.at2(i, k)).max().expect("non-empty")).min().expect("non-empty")
    })
}

/// `min_{m1 ≤ box} max_{m2 ≤ box} r_{m1,m2}`.
pub fn bruteforce_infsup(r: &EffectiveSequence, bound: u64) -> Rational {
    assert_eq!(r.arity(), 2, "brute force needs a double sequence");
    (0..=bound).map(|i| (0..=bound).map(|j| r.at2(i, j)).max().expect("non-empty")).min().expect("non-empty")
}

/// Fails with the first row `m1 ≤ rows` whose prefix maximum over `cols` columns
/// exceeds `bound` in absolute value; a finite-instance sanity check for inputs
/// that are supposed to have finite row suprema.
pub fn check_row_bounds(r: &EffectiveSequence, rows: u64, cols: u64, bound: &Rational) -> Result<()> {
    for i in 0..=rows {
        if (0..=cols).any(|j| &r.at2(i, j).abs() > bound) {
            return Err(Error::NonFiniteSup { row: i });
        }
    }
    Ok(())
}

/// `b'_{m1,m2} = b_{m1+m2}`, an order-2 upper description of `limsup b`.
pub fn limsup_shift_desc(b: &ComputableRealSeq) -> ZWDescription {
    assert_eq!(b.arity(), 1, "limsup shift needs a simple sequence");
    let b = b.clone();
    let body = ComputableRealSeq::from_fn(2, Provenance::Composite("limsup shift".into()), move |tm, m| {
        b.approx(&[tm[0] + tm[1]], m)
    });
    ZWDescription::upper(body).expect("order 2")
}

// ---------------------------------------------------------------------------
// 0/1 adaptive cutoff

/// Adaptive cutoff over 0/1 rows that are nondecreasing in the column index.
///
/// At stage `s` it emits 1 and increments `c` iff every row `i ≤ c` has reached 1
/// by column `s`. Since rows below `c` were confirmed earlier, only row `c` is
/// inspected.
#[derive(Clone, Debug, Default)]
pub struct BinaryCutoff {
    cutoff: u64,
    stage: u64,
    ones: u64,
}

impl BinaryCutoff {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Number of stages processed so far.
    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    /// Runs the next stage; `attained(i, s)` reports whether row `i` is 1 at column `s`.
    pub fn step(&mut self, mut attained: impl FnMut(u64, u64) -> bool) -> bool {
        let s = self.stage;
        self.stage += 1;
        if attained(self.cutoff, s) {
            self.cutoff += 1;
            self.ones += 1;
            true
        } else {
            false
        }
    }
}

fn memoized_stages<S: Send + 'static>(
    label: &str,
    state: S,
    next: impl FnMut(&mut S) -> Rational + Send + 'static,
) -> EffectiveSequence {
    let cell = Arc::new(Mutex::new((state, Vec::<Rational>::new(), next)));
    EffectiveSequence::new(1, Provenance::Composite(label.into()), move |idx| {
        let s = idx[0] as usize;
        let mut guard = cell.lock().expect("stage cache poisoned");
        let (state, out, next) = &mut *guard;
        while out.len() <= s {
            let v = next(state);
            out.push(v);
        }
        out[s].clone()
    })
}

/// The 0/1 adaptive-cutoff sequence for rows given by `r` (values 0 or 1).
pub fn binary_infsup_to_limsup(r: &EffectiveSequence) -> EffectiveSequence {
    assert_eq!(r.arity(), 2, "limsup conversion needs a double sequence");
    let r = r.clone();
    memoized_stages("adaptive cutoff", BinaryCutoff::new(), move |bc| {
        let one = bc.step(|i, s| r.at2(i, s).is_one());
        if one {
            Rational::one()
        } else {
            Rational::from_integer(0.into())
        }
    })
}

// ---------------------------------------------------------------------------
// General inf-sup to limsup

/// Number of rows inspected at stage `s`.
pub fn row_cap(s: u64) -> u64 {
    5 * s.sqrt()
}

/// Largest threshold grid index active at stage `s`.
pub fn grid_level(s: u64) -> u64 {
    s.sqrt() / 8
}

/// Largest `q ∈ G_m` with `lo < q ≤ hi`, where
/// `G_m = {a/b : 1 ≤ b ≤ m+1, |a/b| ≤ m+1}`.
pub fn grid_max_below(m: u64, lo: Option<&Rational>, hi: &Rational) -> Option<Rational> {
    let bound = BigInt::from(m + 1);
    let mut best: Option<Rational> = None;
    for b in 1..=m + 1 {
        let bb = BigInt::from(b);
        let limit = &bound * &bb;
        let a = (hi * Rational::from_integer(bb.clone())).floor().to_integer();
        let a = a.min(limit.clone());
        if a < -limit {
            continue;
        }
        let q = Rational::new(a, bb);
        if lo.is_some_and(|lo| &q <= lo) {
            continue;
        }
        if best.as_ref().is_none_or(|b| &q > b) {
            best = Some(q);
        }
    }
    best
}

/// Stage-sequential state of the general conversion.
///
/// For every grid level `k` and threshold `q ∈ G_k` there is a process whose
/// cutoff starts at row `k` and moves past row `c` once `t_{c,s} ≥ q`, where `t` is
/// the monotone normal form. A process for `q` below the inf-sup moves forever;
/// one for `q` above it is blocked once it meets a row whose supremum is smaller
/// than `q`, and only finitely many such processes ever start below that row.
/// Processes move as far as they can at every stage, so the cutoff of `(k, q)` at
/// stage `s` is `max(k, L_q(s))` with `L_q(s) = #{c ≤ cap(s) : t_{c,s} ≥ q}`. The
/// emitted value at stage `s` is the largest `q` whose process moved; when none
/// moved the previous value is repeated. Thresholds of a newly activated grid do
/// not emit on their first stage.
pub struct GeneralLimsup {
    r: EffectiveSequence,
    stage: u64,
    row_max: Vec<Rational>,
    prefix_min: Vec<Rational>,
    held: Rational,
}

impl GeneralLimsup {
    pub fn new(r: &EffectiveSequence) -> Self {
        assert_eq!(r.arity(), 2, "limsup conversion needs a double sequence");
        let held = r.at2(0, 0);
        GeneralLimsup { r: r.clone(), stage: 0, row_max: Vec::new(), prefix_min: Vec::new(), held }
    }

    /// Computes the output of the next stage.
    pub fn step(&mut self) -> Rational {
        let s = self.stage;
        self.stage += 1;
        let cap = row_cap(s) as usize;
        let old_len = self.row_max.len();
        for (i, m) in self.row_max.iter_mut().enumerate() {
            let v = self.r.at2(i as u64, s);
            if v > *m {
                *m = v;
            }
        }
        for i in old_len..=cap {
            let m = (0..=s).map(|j| self.r.at2(i as u64, j)).max().expect("non-empty");
            self.row_max.push(m);
        }
        let mut prefix: Vec<Rational> = Vec::with_capacity(cap + 1);
        for (i, m) in self.row_max.iter().enumerate() {
            let v = if i == 0 { m.clone() } else { m.clone().min(prefix[i - 1].clone()) };
            prefix.push(v);
        }
        let old_prefix = std::mem::replace(&mut self.prefix_min, prefix);
        if s == 0 {
            return self.held.clone();
        }
        let level = grid_level(s - 1) as usize;
        let mut best: Option<Rational> = None;
        for (c, hi) in self.prefix_min.iter().enumerate() {
            let lo = old_prefix.get(c);
            if lo == Some(hi) {
                continue;
            }
            for m in 0..=level.min(cap) {
                let bound = hi.clone().min(self.prefix_min[m].clone());
                if let Some(q) = grid_max_below(m as u64, lo, &bound) {
                    if best.as_ref().is_none_or(|b| &q > b) {
                        best = Some(q);
                    }
                }
            }
        }
        if let Some(q) = best {
            self.held = q;
        }
        self.held.clone()
    }
}

/// A sequence whose limsup equals `inf_{m1} sup_{m2} r` (which must be finite).
pub fn infsup_to_limsup(r: &EffectiveSequence) -> EffectiveSequence {
    memoized_stages("limsup conversion", GeneralLimsup::new(r), GeneralLimsup::step)
}

/// Maximum of `u_s` over `lo ≤ s ≤ hi`.
pub fn window_max(u: &EffectiveSequence, lo: u64, hi: u64) -> Rational {
    (lo..=hi).map(|s| u.at1(s)).max().expect("non-empty window")
}
