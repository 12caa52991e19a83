//! Hypothetical bandwidth devices and the reductions that relate them to the
//! totality and halting oracles.
//!
//! Devices cannot exist for arbitrary signals. Ground-truth backing answers only
//! for signals built here, whose bandwidth is known by construction; fuel backing
//! is a finite-budget heuristic and its outputs are flagged as advisory.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::b1_synthesis::B1Generator;
use crate::encodings::{dyadic_bits, dyadic_value_of_set, Rational};
use crate::error::{Error, Result};
use crate::exact_real::{two_pow, two_pow_neg, ComputableRealSeq, EffectiveSequence, Provenance};
use crate::signals::{bandwidth_fuel_estimate, exp_scaled, TaylorSignal};
use crate::toy_machine::{decode, Answer, Corpus, CorpusEntry, Domain, HaltingCache, Oracle, OracleKind, OracleMode};
use crate::zw_hierarchy::binary_infsup_to_limsup;

/// A signal together with its bandwidth when that is known by construction.
#[derive(Clone, Debug)]
pub struct CertifiedSignal {
    pub signal: TaylorSignal,
    pub bandwidth: Option<Rational>,
}

impl CertifiedSignal {
    pub fn new(signal: TaylorSignal, bandwidth: Rational) -> Self {
        CertifiedSignal { signal, bandwidth: Some(bandwidth) }
    }

    pub fn uncertified(signal: TaylorSignal) -> Self {
        CertifiedSignal { signal, bandwidth: None }
    }

    fn certificate(&self) -> Result<&Rational> {
        self.bandwidth
            .as_ref()
            .ok_or_else(|| Error::NoCertificate(format!("no bandwidth certificate for {}", self.signal.name())))
    }
}

/// `e^{cz}` with its bandwidth `|c|`.
pub fn certified_exp(c: &Rational) -> CertifiedSignal {
    CertifiedSignal::new(exp_scaled(c), c.abs())
}

/// Source of device answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Backing {
    GroundTruth,
    /// Fuel bandwidth estimate with budget `fuel` at `bits` bits of precision.
    Fuel {
        fuel: u64,
        bits: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeviceKind {
    Ob,
    Oa,
    Sg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Device {
    pub kind: DeviceKind,
    pub backing: Backing,
}

/// A device answer; `advisory` marks answers that are not certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviceOutput<T> {
    pub value: T,
    pub advisory: bool,
}

fn bandwidth_for(f: &CertifiedSignal, backing: Backing) -> Result<DeviceOutput<Rational>> {
    match backing {
        Backing::GroundTruth => Ok(DeviceOutput { value: f.certificate()?.clone(), advisory: false }),
        Backing::Fuel { fuel, bits } => {
            Ok(DeviceOutput { value: bandwidth_fuel_estimate(&f.signal, fuel, bits), advisory: true })
        }
    }
}

/// Packages coefficients into a signal after the type-bound spot check.
pub fn sg(a: &ComputableRealSeq, type_bound: u64) -> Result<TaylorSignal> {
    TaylorSignal::new("sg", a.clone(), type_bound)
}

/// `Ob(f) = 1` iff `bw(f) < 1/2`.
pub fn ob(f: &CertifiedSignal, backing: Backing) -> Result<DeviceOutput<u8>> {
    let bw = bandwidth_for(f, backing)?;
    let half = Rational::new(1.into(), 2.into());
    Ok(DeviceOutput { value: u8::from(bw.value < half), advisory: bw.advisory })
}

/// The comparison used by the totality reduction: 1 iff `bw(f) > 1/2`.
pub fn ob_reduction_bit(f: &CertifiedSignal, backing: Backing) -> Result<DeviceOutput<u8>> {
    let bw = bandwidth_for(f, backing)?;
    let half = Rational::new(1.into(), 2.into());
    Ok(DeviceOutput { value: u8::from(bw.value > half), advisory: bw.advisory })
}

/// `Oa(f, n) = x[A_n[bw(f)]]`, with `A[0] = ∅`.
pub fn oa(f: &CertifiedSignal, n: u64, backing: Backing) -> Result<DeviceOutput<Rational>> {
    let bw = bandwidth_for(f, backing)?;
    let value =
        if bw.value.is_positive() { dyadic_value_of_set(&dyadic_bits(&bw.value, n)?) } else { Rational::zero() };
    Ok(DeviceOutput { value, advisory: bw.advisory })
}

/// 1 iff `v·2^{n+2} - ⌊v·2^{n+1}⌋·2 = 1`.
pub fn totality_from_oa(v: &Rational, n: u64) -> u8 {
    let g = v * two_pow(n + 2) - (v * two_pow(n + 1)).floor() * Rational::from_integer(2.into());
    u8::from(g.is_one())
}

/// Membership of `n` in `S` from `v = Oa(f, n + 1)` when `bw(f) = x[S]` for an
/// infinite set `S`: since `A[x[S]] = S + 3`, the bit is the parity of `⌊v·2^{n+4}⌋`.
pub fn totality_from_oa_aligned(v: &Rational, n: u64) -> u8 {
    let k = (v * two_pow(n + 4)).floor().to_integer();
    u8::from((k % BigInt::from(2)).is_one())
}

// ---------------------------------------------------------------------------
// Totality to bandwidth

/// The signal `TM(n)`: coefficients `a_m = (r'_m)^m`, where `r'` is the 0/1
/// adaptive-cutoff sequence of the rows `Ψ(n, m1, ·)`; its bandwidth is 1 if the
/// program is total and 0 otherwise.
#[derive(Clone, Debug)]
pub struct TotalityReduction {
    index: BigUint,
    limsup: EffectiveSequence,
    total: Option<bool>,
}

pub fn totality_reduction(n: &BigUint) -> TotalityReduction {
    totality_reduction_in(n, &Corpus::builtin())
}

pub fn totality_reduction_in(n: &BigUint, corpus: &Corpus) -> TotalityReduction {
    let runs = HaltingCache::new(decode(n));
    let rows = EffectiveSequence::new(2, Provenance::Composite(format!("runtime rows of {n}")), move |i| {
        if runs.psi(i[0], i[1]) {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    TotalityReduction {
        index: n.clone(),
        limsup: binary_infsup_to_limsup(&rows),
        total: corpus.get(n).map(|e| e.total),
    }
}

/// Emission statistics of the adaptive cutoff over a stage budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmissionStats {
    pub stages: u64,
    pub ones: u64,
    pub last_one: Option<u64>,
}

impl TotalityReduction {
    pub fn index(&self) -> &BigUint {
        &self.index
    }

    /// The 0/1 sequence `r'`.
    pub fn limsup_sequence(&self) -> &EffectiveSequence {
        &self.limsup
    }

    pub fn coefficients(&self) -> ComputableRealSeq {
        let r = self.limsup.clone();
        let seq = EffectiveSequence::new(
            1,
            Provenance::Composite(format!("totality coefficients of {}", self.index)),
            move |i| num_traits::pow::pow(r.at1(i[0]), i[0] as usize),
        );
        ComputableRealSeq::exact(seq)
    }

    /// The coefficients packaged with type bound 1.
    pub fn signal(&self) -> Result<TaylorSignal> {
        sg(&self.coefficients(), 1)
    }

    /// The signal with the corpus certificate `bw ∈ {0, 1}` when available.
    pub fn certified(&self) -> Result<CertifiedSignal> {
        let signal = self.signal()?;
        Ok(match self.total {
            Some(t) => CertifiedSignal::new(signal, Rational::from_integer(BigInt::from(u8::from(t)))),
            None => CertifiedSignal::uncertified(signal),
        })
    }

    pub fn emission_stats(&self, stages: u64) -> EmissionStats {
        let mut ones = 0;
        let mut last_one = None;
        for s in 0..stages {
            if self.limsup.at1(s).is_one() {
                ones += 1;
                last_one = Some(s);
            }
        }
        EmissionStats { stages, ones, last_one }
    }
}

pub fn totality_to_signal(n: &BigUint) -> Result<CertifiedSignal> {
    totality_reduction(n).certified()
}

/// First stage from which the adaptive cutoff never emits 1 again, predicted
/// from recorded halting times; `None` for total programs.
pub fn stabilization_stage(entry: &CorpusEntry) -> Option<u64> {
    let gap = entry.domain.first_gap()?;
    let mut next = 0;
    for c in 0..gap {
        let t = entry.halting_time(c).expect("inputs below the first gap halt");
        next = next.max(t) + 1;
    }
    Some(next)
}

// ---------------------------------------------------------------------------
// Dyadic stand-ins and the halting oracle

/// `x[D] = Σ_{j ∈ D} 2^{-(j+1)}`, exactly.
pub fn dyadic_domain_value(domain: &Domain) -> Rational {
    let one = Rational::one();
    match domain {
        Domain::All => one,
        Domain::Empty => Rational::zero(),
        Domain::Multiples(p) => two_pow(*p - 1) / (two_pow(*p) - one),
        Domain::Except(e) => one - two_pow_neg(e + 1),
        Domain::Below(b) => one - two_pow_neg(*b),
        Domain::AtLeast(a) => two_pow_neg(*a),
        Domain::Finite(s) => dyadic_value_of_set(s),
    }
}

/// `e^{x[D] z}`, certified with bandwidth `x[D]`.
pub fn standin_signal(domain: &Domain) -> CertifiedSignal {
    certified_exp(&dyadic_domain_value(domain))
}

/// Monotone generator `r_l = x[{k ≤ l : Ψ(n, k, l)}]` converging to `x[D(e_n)]`.
pub fn halting_generator(n: &BigUint) -> B1Generator {
    let runs = HaltingCache::new(decode(n));
    B1Generator::from_fn(format!("halting enumeration of {n}"), move |l| {
        let set: BTreeSet<u64> = (0..=l).filter(|&k| runs.psi(k, l)).collect();
        dyadic_value_of_set(&set)
    })
}

/// `x[B_m]` with `B_m = {k ≤ m + 1 : k ∈ D(e_n)}`, asking the halting oracle of `n`.
pub fn bw_via_halting_oracle(oracle: &Oracle, m: u64) -> Result<Rational> {
    if !matches!(oracle.kind, OracleKind::Halting(_)) {
        return Err(Error::InvalidArgument("a halting oracle is required".into()));
    }
    let mut set = BTreeSet::new();
    for k in 0..=m + 1 {
        match oracle.query(&BigUint::from(k))? {
            Answer::Yes => {
                set.insert(k);
            }
            Answer::No => {}
            Answer::Exhausted => {
                return Err(Error::OracleUnavailable(format!("membership of {k} is not decided within the budget")));
            }
        }
    }
    Ok(dyadic_value_of_set(&set))
}

pub fn ground_truth_halting_oracle(n: &BigUint) -> Oracle {
    Oracle::halting(n.clone(), OracleMode::GroundTruth)
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Debug, Serialize)]
pub struct FuelEstimate {
    pub budget: u64,
    pub estimate: String,
    pub advisory_bit: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProgramReport {
    pub name: String,
    pub index: String,
    pub total: bool,
    pub prefix_length: u64,
    pub prefix_ones: u64,
    pub emissions: Vec<EmissionStats>,
    pub stabilization_stage: Option<u64>,
    pub fuel_estimates: Vec<FuelEstimate>,
    pub ob: u8,
    pub reduction_bit: u8,
    pub agrees: bool,
}

/// Runs the totality reduction on one corpus program.
pub fn program_report(entry: &CorpusEntry, budgets: &[u64], bits: u64) -> Result<ProgramReport> {
    const PREFIX: u64 = 64;
    let red = totality_reduction(&entry.index);
    let f = red.certified()?;
    let coeffs = red.coefficients();
    let prefix_ones = (0..PREFIX).filter(|&m| coeffs.approx(&[m], 0).is_one()).count() as u64;
    let emissions = budgets.iter().map(|&b| red.emission_stats(b)).collect();
    let mut fuel_estimates = Vec::new();
    for &budget in budgets {
        let est = bandwidth_fuel_estimate(&f.signal, budget, bits);
        let advisory_bit = u8::from(est > Rational::new(1.into(), 2.into()));
        fuel_estimates.push(FuelEstimate { budget, estimate: est.to_string(), advisory_bit });
    }
    let ob_bit = ob(&f, Backing::GroundTruth)?.value;
    let reduction_bit = ob_reduction_bit(&f, Backing::GroundTruth)?.value;
    Ok(ProgramReport {
        name: entry.name.clone(),
        index: entry.index.to_string(),
        total: entry.total,
        prefix_length: PREFIX,
        prefix_ones,
        emissions,
        stabilization_stage: stabilization_stage(entry),
        fuel_estimates,
        ob: ob_bit,
        reduction_bit,
        agrees: reduction_bit == u8::from(entry.total),
    })
}

/// Reports for every corpus entry, computed on all available cores.
pub fn program_reports(corpus: &Corpus, budgets: &[u64], bits: u64) -> Result<Vec<ProgramReport>> {
    let entries = corpus.entries();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(entries.len().max(1));
    let chunk = entries.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|e| program_report(e, budgets, bits)).collect::<Result<Vec<_>>>())
            })
            .collect();
        let mut out = Vec::with_capacity(entries.len());
        for h in handles {
            out.extend(h.join().expect("report worker panicked")?);
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::zero_signal;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn entry(name: &str) -> CorpusEntry {
        Corpus::builtin().by_name(name).unwrap().clone()
    }

    #[test]
    fn sg_examples() {
        assert!(sg(zero_signal().coefficients(), 0).is_ok());
        let exp = ComputableRealSeq::exact(EffectiveSequence::constant(1, r(1, 1)));
        assert!(sg(&exp, 1).is_ok());
        assert!(sg(&exp, 0).is_err());
    }

    #[test]
    fn ob_examples() {
        let zero = CertifiedSignal::new(zero_signal(), r(0, 1));
        assert_eq!(ob(&zero, Backing::GroundTruth).unwrap().value, 1);
        assert_eq!(ob(&certified_exp(&r(1, 4)), Backing::GroundTruth).unwrap().value, 1);
        let total = totality_to_signal(&entry("halt").index).unwrap();
        assert_eq!(ob(&total, Backing::GroundTruth).unwrap().value, 0);
        assert_eq!(ob_reduction_bit(&total, Backing::GroundTruth).unwrap().value, 1);
        let uncert = CertifiedSignal::uncertified(zero_signal());
        assert!(matches!(ob(&uncert, Backing::GroundTruth), Err(Error::NoCertificate(_))));
        let fuel = ob(&uncert, Backing::Fuel { fuel: 5, bits: 8 }).unwrap();
        assert!(fuel.advisory && fuel.value == 1);
    }

    #[test]
    fn totality_signal_shapes() {
        let total = totality_reduction(&entry("halt").index);
        let c = total.coefficients();
        assert!((0..40).all(|m| c.approx(&[m], 0).is_one()));
        let never = totality_reduction(&entry("loop").index);
        let c = never.coefficients();
        assert!((1..200).all(|m| c.approx(&[m], 0).is_zero()));
        let even = totality_reduction(&entry("halt-iff-even").index);
        let stats = even.emission_stats(2000);
        assert_eq!(stats.ones, 1);
        assert_eq!(Some(stats.last_one.unwrap() + 1), stabilization_stage(&entry("halt-iff-even")));
    }

    #[test]
    fn emission_counts_grow_for_total_programs() {
        let red = totality_reduction(&entry("countdown").index);
        let a = red.emission_stats(100).ones;
        let b = red.emission_stats(1000).ones;
        assert!(a < b);
    }

    #[test]
    fn oa_examples() {
        let one = certified_exp(&r(1, 1));
        assert_eq!(oa(&one, 2, Backing::GroundTruth).unwrap().value, r(3, 32));
        let four = CertifiedSignal::new(exp_scaled(&r(4, 1)), r(4, 1));
        assert_eq!(oa(&four, 1, Backing::GroundTruth).unwrap().value, r(7, 16));
        let two = CertifiedSignal::new(exp_scaled(&r(2, 1)), r(2, 1));
        assert_eq!(oa(&two, 1, Backing::GroundTruth).unwrap().value, r(3, 16));
        let zero = CertifiedSignal::new(zero_signal(), r(0, 1));
        assert_eq!(oa(&zero, 3, Backing::GroundTruth).unwrap().value, r(0, 1));
    }

    #[test]
    fn totality_formula_examples() {
        assert_eq!(totality_from_oa(&r(3, 32), 2), 0);
        assert_eq!(totality_from_oa(&r(0, 1), 5), 0);
        // g = [n+1 ∈ A] + [n+2 ∈ A]/2 for v = x[A_n]
        assert_eq!(totality_from_oa(&r(1, 16), 2), 1);
    }

    #[test]
    fn aligned_decoder_recovers_membership() {
        for d in [Domain::All, Domain::Multiples(2), Domain::Multiples(3), Domain::Except(4), Domain::AtLeast(2)] {
            let f = standin_signal(&d);
            for n in 0..=16 {
                let v = oa(&f, n + 1, Backing::GroundTruth).unwrap().value;
                assert_eq!(totality_from_oa_aligned(&v, n), u8::from(d.contains(n)), "{d} {n}");
            }
        }
    }

    #[test]
    fn dyadic_values() {
        assert_eq!(dyadic_domain_value(&Domain::Multiples(2)), r(2, 3));
        assert_eq!(dyadic_domain_value(&Domain::Except(0)), r(1, 2));
        assert_eq!(dyadic_domain_value(&Domain::Below(3)), r(7, 8));
        assert_eq!(dyadic_domain_value(&Domain::AtLeast(1)), r(1, 2));
        assert_eq!(dyadic_domain_value(&Domain::Finite([0, 2, 4].into())), r(21, 32));
        for d in [Domain::Multiples(3), Domain::Except(2), Domain::Below(5), Domain::AtLeast(3)] {
            let partial = crate::encodings::dyadic_value(|j| d.contains(j), 80);
            assert!(dyadic_domain_value(&d) - partial <= two_pow_neg(80));
        }
    }

    #[test]
    fn halting_oracle_bits() {
        for name in ["finite-0", "finite-0-2-4", "loop", "halt-iff-even"] {
            let e = entry(name);
            let bw = dyadic_domain_value(&e.domain);
            let oracle = ground_truth_halting_oracle(&e.index);
            for m in 0..=16 {
                let q = bw_via_halting_oracle(&oracle, m).unwrap();
                assert!((&bw - &q).abs() < two_pow_neg(m));
            }
        }
        let outside = crate::toy_machine::ToyProgram::parse("INC r4\nHALT").unwrap().code();
        assert!(bw_via_halting_oracle(&ground_truth_halting_oracle(&outside), 3).is_err());
        assert!(bw_via_halting_oracle(&Oracle::totality(OracleMode::GroundTruth), 3).is_err());
    }

    #[test]
    fn halting_generator_converges() {
        let e = entry("finite-0-2-4");
        let g = halting_generator(&e.index);
        let bw = dyadic_domain_value(&e.domain);
        let mut prev = r(0, 1);
        for l in 0..60 {
            let v = g.value(l);
            assert!(v >= prev && v <= bw);
            prev = v;
        }
        assert_eq!(prev, bw);
    }
}
