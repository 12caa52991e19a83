//! Batch front end. Every command writes deterministic JSON (or CSV) in which
//! rationals are exact `p/q` strings and each approximate value carries its
//! decimal rendering and a certified error radius.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::b1_synthesis::{eval_time, spectrum_max_outside, synthesize, B1Generator, B1Signal};
use crate::dsl::parse_seq_dsl;
use crate::encodings::Rational;
use crate::error::{Error, Result};
use crate::exact_real::{factorial, two_pow_neg, ComputableReal, ComputableRealSeq};
use crate::oracle_reductions::{program_reports, ProgramReport};
use crate::signals::{
    builtin_signal, eval_elementary, eval_taylor, eval_weierstrass, parse_rational, taylor_polynomial,
    taylor_to_weierstrass, weierstrass_to_taylor, ComplexRational, ElementarySignal, Enclosure, TaylorSignal,
};
use crate::toy_machine::{Corpus, RunOutcome};

#[derive(Debug, Parser)]
#[command(name = "bwlab", version, about = "Exact experiments with computable bandlimited signals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Weierstrass,
    Taylor,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a truncated integrable signal from a monotone generator.
    SynthB1 {
        /// Generator expression in m1.
        #[arg(long)]
        gen: String,
        #[arg(long)]
        k: u64,
        /// Time samples `start:end:count`.
        #[arg(long, allow_hyphen_values = true, default_value = "-8:8:17")]
        samples: String,
        #[arg(long, default_value_t = 20)]
        bits: u64,
        /// Enclose the untruncated signal instead of the truncation.
        #[arg(long)]
        untruncated: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate Taylor coefficients of a signal.
    SynthTaylor {
        #[arg(long)]
        signal: String,
        #[arg(long, default_value_t = 16)]
        terms: u64,
        #[arg(long, default_value_t = 20)]
        bits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a signal at points or on a real grid.
    Eval {
        #[arg(long)]
        signal: String,
        /// Evaluation point `re` or `re,im`; may be repeated.
        #[arg(long, allow_hyphen_values = true)]
        z: Vec<String>,
        /// Real grid `start:end:count`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value_t = 20)]
        bits: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the exact spectrum of a synthesized signal.
    Spectrum {
        #[arg(long)]
        gen: String,
        #[arg(long)]
        k: u64,
        /// Also report the spectral maximum on `[σ, π]`.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long, default_value_t = 12)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fuel estimate of the bandwidth from the coefficient roots.
    BwBounds {
        #[arg(long)]
        signal: String,
        #[arg(long, default_value_t = 100)]
        fuel: u64,
        #[arg(long, default_value_t = 16)]
        bits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the totality-to-bandwidth reduction over a program corpus.
    ReduceTotality {
        /// `default` or a corpus file.
        #[arg(long, default_value = "default")]
        corpus: String,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 8)]
        bits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every corpus program on a range of inputs.
    CorpusRun {
        #[arg(long, default_value = "default")]
        corpus: String,
        /// Inputs `0..=inputs`.
        #[arg(long, default_value_t = 8)]
        inputs: u64,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between Taylor and Weierstrass descriptions.
    Convert {
        #[arg(long)]
        signal: String,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long, default_value_t = 10)]
        bits: u64,
        #[arg(long, default_value_t = 1)]
        radius: u64,
        #[arg(long, default_value_t = 8)]
        terms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Rendering

/// `q` rounded half away from zero to `digits` decimal places.
pub fn decimal(q: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (q.abs() * Rational::from_integer(scale)).round().to_integer();
    let s = format!("{:0>width$}", scaled, width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if q.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Exact `p/q` rendering (integers without denominator).
pub fn fraction(q: &Rational) -> String {
    q.to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct Approx {
    pub exact: String,
    pub decimal: String,
    pub radius: String,
}

impl Approx {
    pub fn new(q: &Rational, radius: &Rational) -> Self {
        let digits = decimal_digits(radius);
        Approx { exact: fraction(q), decimal: decimal(q, digits), radius: fraction(radius) }
    }
}

fn decimal_digits(radius: &Rational) -> usize {
    if radius.is_zero() {
        return 20;
    }
    let mut digits = 0;
    let mut r = radius.clone();
    while r < Rational::from_integer(1.into()) && digits < 40 {
        r *= Rational::from_integer(10.into());
        digits += 1;
    }
    digits + 2
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexApprox {
    pub re: Approx,
    pub im: Approx,
}

fn complex_approx(e: &Enclosure<ComplexRational>) -> ComplexApprox {
    ComplexApprox { re: Approx::new(&e.mid.re, &e.radius), im: Approx::new(&e.mid.im, &e.radius) }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
}

fn arg_rational(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| Error::InvalidArgument(format!("{what}: `{text}` is not a rational number")))
}

/// `start:end:count` into `count` equally spaced rationals.
pub fn parse_grid(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(Error::InvalidArgument(format!("grid `{text}` must be start:end:count")));
    };
    let (a, b) = (arg_rational(a, "grid start")?, arg_rational(b, "grid end")?);
    let n: u64 = n.parse().map_err(|_| Error::InvalidArgument(format!("grid count `{n}`")))?;
    Ok(match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| &a + (&b - &a) * Rational::new(BigInt::from(i), BigInt::from(n - 1))).collect(),
    })
}

fn parse_point(text: &str) -> Result<ComplexRational> {
    match text.split_once(',') {
        Some((re, im)) => Ok(ComplexRational::new(arg_rational(re, "real part")?, arg_rational(im, "imaginary part")?)),
        None => Ok(ComplexRational::real(arg_rational(text, "point")?)),
    }
}

// ---------------------------------------------------------------------------
// Signals from the command line

/// Signal file contents.
#[derive(Clone, Debug, Deserialize)]
pub struct SignalSpec {
    pub kind: SignalKind,
    pub coefficients: String,
    #[serde(rename = "L")]
    pub type_bound: u64,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    Taylor,
    Weierstrass,
    Elementary,
}

pub enum LoadedSignal {
    Taylor(TaylorSignal),
    Weierstrass(TaylorSignal),
    Elementary(ElementarySignal),
}

impl LoadedSignal {
    fn taylor(&self) -> Result<&TaylorSignal> {
        match self {
            LoadedSignal::Taylor(f) | LoadedSignal::Weierstrass(f) => Ok(f),
            LoadedSignal::Elementary(_) => {
                Err(Error::InvalidArgument("an elementary signal has no Taylor description here".into()))
            }
        }
    }
}

fn taylor_from_text(coefficients: &str, type_bound: u64) -> Result<TaylorSignal> {
    if let Some(f) = builtin_signal(coefficients) {
        return Ok(f);
    }
    let spec = parse_seq_dsl(coefficients)?;
    spec.check(1, 32)?;
    let seq = spec.to_sequence(1)?;
    TaylorSignal::new(coefficients, ComputableRealSeq::exact(seq), type_bound)
}

/// Resolves `--signal`: a builtin name, `@file.json`, or `expr;L` for a
/// coefficient expression in `m1` with type bound `L`.
pub fn load_signal(arg: &str) -> Result<LoadedSignal> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        let spec: SignalSpec =
            serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))?;
        return signal_from_spec(&spec);
    }
    if let Some((expr, l)) = arg.rsplit_once(';') {
        let l: u64 = l.trim().parse().map_err(|_| Error::InvalidArgument(format!("type bound `{l}`")))?;
        return Ok(LoadedSignal::Taylor(taylor_from_text(expr, l)?));
    }
    builtin_signal(arg)
        .map(LoadedSignal::Taylor)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown signal `{arg}`")))
}

pub fn signal_from_spec(spec: &SignalSpec) -> Result<LoadedSignal> {
    match spec.kind {
        SignalKind::Taylor => Ok(LoadedSignal::Taylor(taylor_from_text(&spec.coefficients, spec.type_bound)?)),
        SignalKind::Weierstrass => {
            Ok(LoadedSignal::Weierstrass(taylor_from_text(&spec.coefficients, spec.type_bound)?))
        }
        SignalKind::Elementary => {
            let dsl = parse_seq_dsl(&spec.coefficients)?;
            let width = 2 * spec.type_bound;
            let cs = (0..=width).map(|i| dsl.eval(&[i]).map(ComputableReal::constant)).collect::<Result<Vec<_>>>()?;
            Ok(LoadedSignal::Elementary(ElementarySignal::new(cs)?))
        }
    }
}

fn b1_from_text(gen: &str, k: u64) -> Result<B1Signal> {
    let spec = parse_seq_dsl(gen)?;
    spec.check(1, k + 1)?;
    synthesize(&B1Generator::new(&spec.to_sequence(1)?), k)
}

fn load_corpus(arg: &str) -> Result<Arc<Corpus>> {
    if arg == "default" {
        Corpus::from_env()
    } else {
        Ok(Arc::new(Corpus::load(Path::new(arg))?))
    }
}

// ---------------------------------------------------------------------------
// Commands

#[derive(Serialize)]
struct TermOut {
    index: u64,
    left: String,
    right: String,
    peak: String,
}

#[derive(Serialize)]
struct TimeSample {
    t: String,
    value: ComplexApprox,
}

#[derive(Serialize)]
struct B1Out {
    generator: String,
    k: u64,
    support_sup: Option<String>,
    mass: String,
    seed_mass: String,
    tail_bound: String,
    untruncated: bool,
    terms: Vec<TermOut>,
    samples: Vec<TimeSample>,
}

fn cmd_synth_b1(gen: &str, k: u64, samples: &str, bits: u64, untruncated: bool, format: Format) -> Result<String> {
    let f = b1_from_text(gen, k)?;
    let points = parse_grid(samples)?;
    let values: Vec<(Rational, Enclosure<ComplexRational>)> = points
        .into_iter()
        .map(|t| {
            let e = eval_time(&f, &t, bits, untruncated);
            (t, e)
        })
        .collect();
    if format == Format::Csv {
        let mut s = String::from("t,re,im,radius\n");
        for (t, e) in &values {
            let d = decimal_digits(&e.radius);
            s += &format!(
                "{},{},{},{}\n",
                decimal(t, 6),
                decimal(&e.mid.re, d),
                decimal(&e.mid.im, d),
                decimal(&e.radius, d)
            );
        }
        return Ok(s);
    }
    json(&B1Out {
        generator: gen.to_string(),
        k,
        support_sup: f.support_sup().map(|q| fraction(&q)),
        mass: fraction(&f.mass()),
        seed_mass: fraction(&f.seed_mass()),
        tail_bound: fraction(f.tail_bound()),
        untruncated,
        terms: f
            .terms()
            .iter()
            .map(|t| TermOut {
                index: t.index,
                left: fraction(&t.left),
                right: fraction(&t.right),
                peak: fraction(&t.peak),
            })
            .collect(),
        samples: values.iter().map(|(t, e)| TimeSample { t: fraction(t), value: complex_approx(e) }).collect(),
    })
}

#[derive(Serialize)]
struct CoefficientOut {
    n: u64,
    value: Approx,
}

#[derive(Serialize)]
struct TaylorOut {
    signal: String,
    type_bound: u64,
    coefficients: Vec<CoefficientOut>,
}

fn cmd_synth_taylor(signal: &str, terms: u64, bits: u64) -> Result<String> {
    let loaded = load_signal(signal)?;
    let f = loaded.taylor()?;
    let radius = two_pow_neg(bits);
    json(&TaylorOut {
        signal: f.name().to_string(),
        type_bound: f.type_bound(),
        coefficients: (0..terms)
            .map(|n| CoefficientOut { n, value: Approx::new(&f.coefficient(n, bits), &radius) })
            .collect(),
    })
}

#[derive(Serialize)]
struct EvalPoint {
    z: String,
    value: ComplexApprox,
}

fn cmd_eval(signal: &str, zs: &[String], grid: Option<&str>, bits: u64, format: Format) -> Result<String> {
    let loaded = load_signal(signal)?;
    let mut points = zs.iter().map(|z| parse_point(z)).collect::<Result<Vec<_>>>()?;
    if let Some(g) = grid {
        points.extend(parse_grid(g)?.into_iter().map(ComplexRational::real));
    }
    let mut out = Vec::with_capacity(points.len());
    for z in points {
        let e = match &loaded {
            LoadedSignal::Taylor(f) => eval_taylor(f, &z, bits),
            LoadedSignal::Weierstrass(f) => eval_weierstrass(&taylor_to_weierstrass(f), &z, bits),
            LoadedSignal::Elementary(f) => {
                if !z.is_real() {
                    return Err(Error::InvalidArgument("elementary signals are evaluated on the real line".into()));
                }
                let e = eval_elementary(f, &z.re, bits);
                Enclosure { mid: ComplexRational::real(e.mid), radius: e.radius }
            }
        };
        out.push((z, e));
    }
    if format == Format::Csv {
        let mut s = String::from("re_z,im_z,re,im,radius\n");
        for (z, e) in &out {
            let d = decimal_digits(&e.radius);
            s += &format!(
                "{},{},{},{},{}\n",
                decimal(&z.re, 6),
                decimal(&z.im, 6),
                decimal(&e.mid.re, d),
                decimal(&e.mid.im, d),
                decimal(&e.radius, d)
            );
        }
        return Ok(s);
    }
    json(&out.iter().map(|(z, e)| EvalPoint { z: z.to_string(), value: complex_approx(e) }).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct SpectrumOut {
    generator: String,
    k: u64,
    support_sup: Option<String>,
    mass: String,
    integral: String,
    breakpoints: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_outside: Option<String>,
}

fn cmd_spectrum(gen: &str, k: u64, sigma: Option<&str>, digits: usize, format: Format) -> Result<String> {
    let f = b1_from_text(gen, k)?;
    let sigma = sigma.map(|s| arg_rational(s, "sigma")).transpose()?;
    let max_outside = sigma.as_ref().map(|s| spectrum_max_outside(&f, s)).transpose()?;
    let bp = f.spectrum().breakpoints();
    if format == Format::Csv {
        let mut s = String::from("omega,value\n");
        for (w, v) in bp {
            s += &format!("{},{}\n", decimal(w, digits), decimal(v, digits));
        }
        return Ok(s);
    }
    json(&SpectrumOut {
        generator: gen.to_string(),
        k,
        support_sup: f.support_sup().map(|q| fraction(&q)),
        mass: fraction(&f.mass()),
        integral: fraction(&f.spectrum().integral()),
        breakpoints: bp.iter().map(|(w, v)| [fraction(w), fraction(v)]).collect(),
        sigma: sigma.map(|s| fraction(&s)),
        max_outside: max_outside.map(|m| fraction(&m)),
    })
}

#[derive(Serialize)]
struct BoundsOut {
    signal: String,
    fuel: u64,
    bits: u64,
    lower: String,
    upper: String,
    estimate: Approx,
}

fn cmd_bw_bounds(signal: &str, fuel: u64, bits: u64) -> Result<String> {
    let loaded = load_signal(signal)?;
    let f = loaded.taylor()?;
    let est = crate::signals::bandwidth_fuel_estimate(f, fuel, bits);
    json(&BoundsOut {
        signal: f.name().to_string(),
        fuel,
        bits,
        lower: "0".into(),
        upper: f.type_bound().to_string(),
        estimate: Approx::new(&est, &two_pow_neg(bits)),
    })
}

#[derive(Serialize)]
struct ReductionOut {
    corpus: usize,
    budgets: Vec<u64>,
    all_agree: bool,
    programs: Vec<ProgramReport>,
}

fn cmd_reduce_totality(corpus: &str, budget: u64, bits: u64) -> Result<String> {
    let corpus = load_corpus(corpus)?;
    let mut budgets: Vec<u64> = [100, 1000, 10_000].into_iter().filter(|&b| b < budget).collect();
    budgets.push(budget);
    let programs = program_reports(&corpus, &budgets, bits)?;
    json(&ReductionOut { corpus: corpus.len(), budgets, all_agree: programs.iter().all(|p| p.agrees), programs })
}

#[derive(Serialize)]
struct RunOut {
    program: String,
    input: u64,
    halted: bool,
    steps: Option<u64>,
    output: Option<u64>,
    in_domain: bool,
}

fn cmd_corpus_run(corpus: &str, inputs: u64, fuel: u64, format: Format) -> Result<String> {
    let corpus = load_corpus(corpus)?;
    let mut rows = Vec::new();
    for e in corpus.entries() {
        for m in 0..=inputs {
            let (halted, steps, output) = match e.program.run(m, fuel) {
                RunOutcome::Halted { steps, output } => (true, Some(steps), Some(output)),
                RunOutcome::Running => (false, None, None),
            };
            rows.push(RunOut {
                program: e.name.clone(),
                input: m,
                halted,
                steps,
                output,
                in_domain: e.domain.contains(m),
            });
        }
    }
    if format == Format::Csv {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut s = String::from("program,input,halted,steps,output,in_domain\n");
        for r in &rows {
            s +=
                &format!("{},{},{},{},{},{}\n", r.program, r.input, r.halted, opt(r.steps), opt(r.output), r.in_domain);
        }
        return Ok(s);
    }
    json(&rows)
}

#[derive(Serialize)]
struct PolynomialOut {
    signal: String,
    precision: u64,
    radius: u64,
    degree: Option<usize>,
    coefficients: Vec<String>,
}

#[derive(Serialize)]
struct RecoveredOut {
    n: u64,
    value: String,
    error_bound: String,
}

#[derive(Serialize)]
struct RoundTripOut {
    signal: String,
    precision: u64,
    coefficients: Vec<RecoveredOut>,
}

fn cmd_convert(signal: &str, to: Target, bits: u64, radius: u64, terms: u64) -> Result<String> {
    let loaded = load_signal(signal)?;
    let f = loaded.taylor()?;
    match to {
        Target::Weierstrass => {
            let p = taylor_polynomial(f, bits, radius);
            json(&PolynomialOut {
                signal: f.name().to_string(),
                precision: bits,
                radius,
                degree: p.degree(),
                coefficients: p.coefficients().iter().map(fraction).collect(),
            })
        }
        Target::Taylor => {
            let back = weierstrass_to_taylor(&taylor_to_weierstrass(f), f.type_bound());
            let approximations = back.coefficients().approximations().clone();
            json(&RoundTripOut {
                signal: f.name().to_string(),
                precision: bits,
                coefficients: (0..terms)
                    .map(|n| RecoveredOut {
                        n,
                        value: fraction(&approximations.at2(n, bits)),
                        error_bound: fraction(&(Rational::from_integer(factorial(n).into()) * two_pow_neg(bits))),
                    })
                    .collect(),
            })
        }
    }
}

/// Runs one command and returns its textual output.
pub fn execute(cmd: &Command) -> Result<(String, Option<PathBuf>)> {
    let (text, out) = match cmd {
        Command::SynthB1 { gen, k, samples, bits, untruncated, format, out } => {
            (cmd_synth_b1(gen, *k, samples, *bits, *untruncated, *format)?, out)
        }
        Command::SynthTaylor { signal, terms, bits, out } => (cmd_synth_taylor(signal, *terms, *bits)?, out),
        Command::Eval { signal, z, grid, bits, format, out } => {
            (cmd_eval(signal, z, grid.as_deref(), *bits, *format)?, out)
        }
        Command::Spectrum { gen, k, sigma, digits, format, out } => {
            (cmd_spectrum(gen, *k, sigma.as_deref(), *digits, *format)?, out)
        }
        Command::BwBounds { signal, fuel, bits, out } => (cmd_bw_bounds(signal, *fuel, *bits)?, out),
        Command::ReduceTotality { corpus, budget, bits, out } => (cmd_reduce_totality(corpus, *budget, *bits)?, out),
        Command::CorpusRun { corpus, inputs, fuel, format, out } => {
            (cmd_corpus_run(corpus, *inputs, *fuel, *format)?, out)
        }
        Command::Convert { signal, to, bits, radius, terms, out } => {
            (cmd_convert(signal, *to, *bits, *radius, *terms)?, out)
        }
    };
    Ok((text, out.clone()))
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command).and_then(|(text, out)| emit(&out, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
