//! A Gödel-numbered counter machine with step-bounded evaluation.
//!
//! Programs are lists of `INC r`, `DEC r`, `JZ r t` and `HALT` instructions.
//! The input is placed in `r0` and the output is `r0` at halt. Every executed
//! instruction, `HALT` included, costs one step; running past the last
//! instruction halts.
//!
//! # Numbering
//!
//! An instruction has code `HALT ↦ 0`, `INC r ↦ 3r+1`, `DEC r ↦ 3r+2` and
//! `JZ r t ↦ 3⟨r, t⟩+3`. A program of length `ℓ` with instruction codes
//! `c_0, …, c_{ℓ-1}` has code `⟨ℓ-1, T(c_0, …, c_{ℓ-1})⟩`, where `T` of a single
//! code is the code itself and `T` of a longer list is `⟨T(left), T(right)⟩` for
//! the split at `⌊ℓ/2⌋`. Decoding is total: programs longer than
//! [`MAX_PROGRAM_LEN`] decode to `HALT`, instructions naming a register above
//! [`MAX_REGISTER`] become `HALT`, and jump targets beyond the end are clamped to
//! the end.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::encodings::{pair2, unpair2, unpair_u64, varpi1, varpi2};
use crate::error::{Error, Result};

pub const MAX_PROGRAM_LEN: usize = 1024;
pub const MAX_REGISTER: u32 = u16::MAX as u32;
/// Inputs with a recorded halting time in every corpus entry.
pub const RECORDED_INPUTS: u64 = 32;
/// Step budget used to record halting times; every domain member halts well within it.
const RECORD_FUEL: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Inc(u32),
    Dec(u32),
    Jz(u32, usize),
    Halt,
}

impl Instruction {
    pub fn code(&self) -> BigUint {
        match *self {
            Instruction::Halt => BigUint::zero(),
            Instruction::Inc(r) => BigUint::from(3 * r as u64 + 1),
            Instruction::Dec(r) => BigUint::from(3 * r as u64 + 2),
            Instruction::Jz(r, t) => pair2(&BigUint::from(r), &BigUint::from(t)) * 3u32 + 3u32,
        }
    }

    /// Decodes an instruction code for a program of length `len`.
    pub fn decode(code: &BigUint, len: usize) -> Instruction {
        if code.is_zero() {
            return Instruction::Halt;
        }
        let c = code - 1u32;
        let kind = (&c % 3u32).to_u32().expect("remainder is small");
        let v = c / 3u32;
        let reg = |x: &BigUint| x.to_u32().filter(|&r| r <= MAX_REGISTER);
        match kind {
            0 => reg(&v).map_or(Instruction::Halt, Instruction::Inc),
            1 => reg(&v).map_or(Instruction::Halt, Instruction::Dec),
            _ => {
                let (r, t) = unpair2(&v);
                let target = t.to_usize().map_or(len, |t| t.min(len));
                reg(&r).map_or(Instruction::Halt, |r| Instruction::Jz(r, target))
            }
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(r) => write!(f, "INC r{r}"),
            Instruction::Dec(r) => write!(f, "DEC r{r}"),
            Instruction::Jz(r, t) => write!(f, "JZ r{r} {t}"),
            Instruction::Halt => f.write_str("HALT"),
        }
    }
}

/// A normalized counter-machine program.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToyProgram {
    instructions: Vec<Instruction>,
}

impl ToyProgram {
    /// Builds a program, normalizing it the same way [`decode`] does.
    pub fn new(instructions: Vec<Instruction>) -> Self {
        if instructions.is_empty() || instructions.len() > MAX_PROGRAM_LEN {
            return ToyProgram { instructions: vec![Instruction::Halt] };
        }
        let len = instructions.len();
        let instructions = instructions
            .into_iter()
            .map(|ins| match ins {
                Instruction::Inc(r) | Instruction::Dec(r) | Instruction::Jz(r, _) if r > MAX_REGISTER => {
                    Instruction::Halt
                }
                Instruction::Jz(r, t) => Instruction::Jz(r, t.min(len)),
                other => other,
            })
            .collect();
        ToyProgram { instructions }
    }

    pub fn halt() -> Self {
        ToyProgram::new(vec![Instruction::Halt])
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn code(&self) -> BigUint {
        program_code(self)
    }

    /// Parses the one-instruction-per-line text format. Blank lines and text after
    /// `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            out.push(parse_instruction(line, lineno + 1)?);
        }
        if out.is_empty() {
            return Err(Error::Parse { line: 1, column: 1, message: "empty program".into() });
        }
        if out.len() > MAX_PROGRAM_LEN {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("program longer than {MAX_PROGRAM_LEN} instructions"),
            });
        }
        let len = out.len();
        if let Some((i, _)) = out.iter().enumerate().find(|(_, ins)| matches!(ins, Instruction::Jz(_, t) if *t > len)) {
            return Err(Error::Parse { line: i + 1, column: 1, message: "jump target out of range".into() });
        }
        Ok(ToyProgram::new(out))
    }

    pub fn to_text(&self) -> String {
        self.instructions.iter().map(|i| format!("{i}\n")).collect()
    }

    pub fn start(&self, input: u64) -> Execution<'_> {
        Execution::new(self, input)
    }

    pub fn run(&self, input: u64, fuel: u64) -> RunOutcome {
        let mut ex = self.start(input);
        ex.advance(fuel);
        ex.outcome()
    }

    pub fn psi(&self, input: u64, fuel: u64) -> bool {
        self.run(input, fuel).is_halted()
    }
}

impl fmt::Display for ToyProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ToyProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ToyProgram::parse(s)
    }
}

fn parse_instruction(line: &str, lineno: usize) -> Result<Instruction> {
    let err = |column: usize, message: String| Error::Parse { line: lineno, column, message };
    let mut tokens = Vec::new();
    let mut col = 0;
    for word in line.split_whitespace() {
        let start = line[col..].find(word).expect("token comes from the line") + col;
        tokens.push((start + 1, word));
        col = start + word.len();
    }
    let register = |tok: Option<&(usize, &str)>, at: usize| -> Result<u32> {
        let (c, w) = tok.ok_or_else(|| err(at, "missing register".into()))?;
        w.strip_prefix('r')
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&r| r <= MAX_REGISTER)
            .ok_or_else(|| err(*c, format!("bad register `{w}`")))
    };
    let (c0, op) = tokens[0];
    let end = line.len() + 1;
    let ins = match op {
        "HALT" => Instruction::Halt,
        "INC" => Instruction::Inc(register(tokens.get(1), end)?),
        "DEC" => Instruction::Dec(register(tokens.get(1), end)?),
        "JZ" => {
            let r = register(tokens.get(1), end)?;
            let (c, w) = tokens.get(2).ok_or_else(|| err(end, "missing jump target".into()))?;
            let t = w.parse::<usize>().map_err(|_| err(*c, format!("bad jump target `{w}`")))?;
            Instruction::Jz(r, t)
        }
        other => return Err(err(c0, format!("unknown instruction `{other}`"))),
    };
    let arity = match ins {
        Instruction::Halt => 1,
        Instruction::Inc(_) | Instruction::Dec(_) => 2,
        Instruction::Jz(..) => 3,
    };
    if let Some((c, w)) = tokens.get(arity) {
        return Err(err(*c, format!("unexpected token `{w}`")));
    }
    Ok(ins)
}

fn tree_code(codes: &[BigUint]) -> BigUint {
    if codes.len() == 1 {
        return codes[0].clone();
    }
    let (l, r) = codes.split_at(codes.len() / 2);
    pair2(&tree_code(l), &tree_code(r))
}

fn tree_decode(code: &BigUint, len: usize, out: &mut Vec<BigUint>) {
    if len == 1 {
        out.push(code.clone());
        return;
    }
    let (l, r) = unpair2(code);
    tree_decode(&l, len / 2, out);
    tree_decode(&r, len - len / 2, out);
}

pub fn program_code(p: &ToyProgram) -> BigUint {
    let codes: Vec<BigUint> = p.instructions.iter().map(Instruction::code).collect();
    pair2(&BigUint::from(codes.len() - 1), &tree_code(&codes))
}

/// Total decoding of a natural into a program.
pub fn decode(n: &BigUint) -> ToyProgram {
    let (len_minus_one, body) = unpair2(n);
    let len = match len_minus_one.to_usize() {
        Some(l) if l < MAX_PROGRAM_LEN => l + 1,
        _ => return ToyProgram::halt(),
    };
    let mut codes = Vec::with_capacity(len);
    tree_decode(&body, len, &mut codes);
    ToyProgram::new(codes.iter().map(|c| Instruction::decode(c, len)).collect())
}

/// Machine configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    pub pc: usize,
    pub registers: BTreeMap<u32, u64>,
    pub steps: u64,
}

impl MachineState {
    pub fn register(&self, r: u32) -> u64 {
        self.registers.get(&r).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunOutcome {
    Halted { steps: u64, output: u64 },
    Running,
}

impl RunOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }
}

/// A resumable run of a program on one input.
#[derive(Clone, Debug)]
pub struct Execution<'a> {
    program: &'a ToyProgram,
    state: MachineState,
    halted: bool,
}

impl<'a> Execution<'a> {
    pub fn new(program: &'a ToyProgram, input: u64) -> Self {
        let mut registers = BTreeMap::new();
        if input != 0 {
            registers.insert(0, input);
        }
        Execution { program, state: MachineState { pc: 0, registers, steps: 0 }, halted: false }
    }

    pub fn state(&self) -> &MachineState {
        &self.state
    }

    /// Executes one instruction. Returns `false` once the machine has halted.
    pub fn step(&mut self) -> bool {
        if self.halted {
            return false;
        }
        let ins = self.program.instructions.get(self.state.pc).copied().unwrap_or(Instruction::Halt);
        self.state.steps += 1;
        match ins {
            Instruction::Halt => self.halted = true,
            Instruction::Inc(r) => {
                *self.state.registers.entry(r).or_insert(0) += 1;
                self.state.pc += 1;
            }
            Instruction::Dec(r) => {
                if let Some(v) = self.state.registers.get_mut(&r) {
                    *v -= 1;
                    if *v == 0 {
                        self.state.registers.remove(&r);
                    }
                }
                self.state.pc += 1;
            }
            Instruction::Jz(r, t) => {
                self.state.pc = if self.state.register(r) == 0 { t } else { self.state.pc + 1 };
            }
        }
        true
    }

    /// Runs until halted or until `fuel` steps have been spent in total.
    pub fn advance(&mut self, fuel: u64) -> RunOutcome {
        while !self.halted && self.state.steps < fuel {
            self.step();
        }
        self.outcome()
    }

    pub fn outcome(&self) -> RunOutcome {
        if self.halted {
            RunOutcome::Halted { steps: self.state.steps, output: self.state.register(0) }
        } else {
            RunOutcome::Running
        }
    }
}

/// Runs program `n` on input `m` for at most `fuel` steps.
pub fn run_bounded(n: &BigUint, m: u64, fuel: u64) -> RunOutcome {
    decode(n).run(m, fuel)
}

/// `Ψ(n, m, k)`: program `n` halts on input `m` within `k` steps.
pub fn psi(n: &BigUint, m: u64, k: u64) -> bool {
    run_bounded(n, m, k).is_halted()
}

/// The decidable sets `G^Ψ_n` and `G^Ψ`.
#[derive(Clone, Copy, Debug)]
pub enum GPsiVariant<'a> {
    Domain(&'a ToyProgram),
    Totality,
}

/// Membership of `m` in `G^Ψ_n = {m : Ψ(n, ϖ2(m), ϖ1(m))}` or in
/// `G^Ψ = {m : Ψ([∐3 m]_3, [∐3 m]_1, [∐3 m]_2)}`.
pub fn g_psi_member(variant: GPsiVariant<'_>, m: u64) -> bool {
    match variant {
        GPsiVariant::Domain(p) => p.psi(varpi2(m), varpi1(m)),
        GPsiVariant::Totality => {
            let t = unpair_u64(m, 3);
            psi(&BigUint::from(t[2]), t[0], t[1])
        }
    }
}

// ---------------------------------------------------------------------------
// Corpus

/// Domain of a corpus program, known by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    All,
    Empty,
    Multiples(u64),
    Except(u64),
    Below(u64),
    AtLeast(u64),
    Finite(BTreeSet<u64>),
}

impl Domain {
    pub fn contains(&self, m: u64) -> bool {
        match self {
            Domain::All => true,
            Domain::Empty => false,
            Domain::Multiples(k) => m.is_multiple_of(*k),
            Domain::Except(d) => m != *d,
            Domain::Below(d) => m < *d,
            Domain::AtLeast(d) => m >= *d,
            Domain::Finite(s) => s.contains(&m),
        }
    }

    pub fn is_total(&self) -> bool {
        matches!(self, Domain::All) || matches!(self, Domain::AtLeast(0))
    }

    /// Least input outside the domain, if any.
    pub fn first_gap(&self) -> Option<u64> {
        match self {
            Domain::All => None,
            Domain::Empty => Some(0),
            Domain::Multiples(_) => Some(1),
            Domain::Except(d) => Some(*d),
            Domain::Below(d) => Some(*d),
            Domain::AtLeast(0) => None,
            Domain::AtLeast(_) => Some(0),
            Domain::Finite(s) => (0..).find(|m| !s.contains(m)),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::All => f.write_str("all"),
            Domain::Empty => f.write_str("empty"),
            Domain::Multiples(k) => write!(f, "multiples {k}"),
            Domain::Except(d) => write!(f, "except {d}"),
            Domain::Below(d) => write!(f, "below {d}"),
            Domain::AtLeast(d) => write!(f, "atleast {d}"),
            Domain::Finite(s) => {
                let items: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "finite {}", items.join(","))
            }
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad domain tag `{s}`"));
        let mut parts = s.split_whitespace();
        let head = parts.next().ok_or_else(bad)?;
        let arg = parts.next();
        let num = || arg.and_then(|a| a.parse::<u64>().ok()).ok_or_else(bad);
        let d = match head {
            "all" => Domain::All,
            "empty" => Domain::Empty,
            "multiples" => Domain::Multiples(num()?.max(1)),
            "except" => Domain::Except(num()?),
            "below" => Domain::Below(num()?),
            "atleast" => Domain::AtLeast(num()?),
            "finite" => {
                let items = arg.unwrap_or("");
                let set = items
                    .split(',')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<BTreeSet<u64>>>()?;
                Domain::Finite(set)
            }
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(d)
    }
}

/// A corpus program with its ground truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub program: ToyProgram,
    pub index: BigUint,
    pub domain: Domain,
    pub total: bool,
    /// Halting time on inputs `0..=RECORDED_INPUTS`; `None` outside the domain.
    pub halting_times: Vec<Option<u64>>,
}

impl CorpusEntry {
    fn build(name: &str, source: &str, domain: Domain) -> Self {
        let program = ToyProgram::parse(source).expect("corpus sources are well formed");
        let halting_times = (0..=RECORDED_INPUTS)
            .map(|m| {
                if !domain.contains(m) {
                    return None;
                }
                match program.run(m, RECORD_FUEL) {
                    RunOutcome::Halted { steps, .. } => Some(steps),
                    RunOutcome::Running => panic!("corpus program {name} does not halt on {m}"),
                }
            })
            .collect();
        CorpusEntry {
            name: name.to_string(),
            index: program.code(),
            total: domain.is_total(),
            program,
            domain,
            halting_times,
        }
    }

    /// Exact halting time on `m`; `None` iff `m` is outside the domain.
    pub fn halting_time(&self, m: u64) -> Option<u64> {
        if let Some(t) = self.halting_times.get(m as usize) {
            return *t;
        }
        if !self.domain.contains(m) {
            return None;
        }
        let mut ex = self.program.start(m);
        loop {
            if !ex.step() {
                return Some(ex.state().steps);
            }
        }
    }
}

/// The program corpus with by-construction ground truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    by_index: BTreeMap<BigUint, usize>,
}

/// Environment variable naming a corpus file to use instead of the built-in one.
pub const CORPUS_ENV: &str = "BWLAB_CORPUS";

fn program_text(lines: &[String]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}

/// Halts iff the input lies in `members`; every member is at most `bound`.
fn membership_source(members: &dyn Fn(u64) -> bool, bound: u64) -> String {
    let halt = 2 * (bound + 1) + 2;
    let trap = halt - 1;
    let mut lines = Vec::new();
    for i in 0..=bound {
        let target = if members(i) { halt } else { trap };
        lines.push(format!("JZ r0 {target}"));
        lines.push("DEC r0".to_string());
    }
    lines.push(format!("JZ r9 {trap}"));
    lines.push(format!("JZ r9 {trap}"));
    lines.push("HALT".to_string());
    program_text(&lines)
}

fn multiples_source(k: u64) -> String {
    let trap = 2 * k + 1;
    let halt = trap + 1;
    let mut lines = vec![format!("JZ r0 {halt}"), "DEC r0".to_string()];
    for _ in 1..k {
        lines.push(format!("JZ r0 {trap}"));
        lines.push("DEC r0".to_string());
    }
    lines.push("JZ r9 0".to_string());
    lines.push(format!("JZ r9 {trap}"));
    lines.push("HALT".to_string());
    program_text(&lines)
}

fn except_source(d: u64) -> String {
    let halt = 2 * d + 3;
    let trap = halt - 1;
    let mut lines = Vec::new();
    for _ in 0..d {
        lines.push(format!("JZ r0 {halt}"));
        lines.push("DEC r0".to_string());
    }
    lines.push(format!("JZ r0 {trap}"));
    lines.push(format!("JZ r9 {halt}"));
    lines.push(format!("JZ r9 {trap}"));
    lines.push("HALT".to_string());
    program_text(&lines)
}

fn below_source(d: u64) -> String {
    let trap = 2 * d;
    let halt = trap + 1;
    let mut lines = Vec::new();
    for _ in 0..d {
        lines.push(format!("JZ r0 {halt}"));
        lines.push("DEC r0".to_string());
    }
    lines.push(format!("JZ r9 {trap}"));
    lines.push("HALT".to_string());
    program_text(&lines)
}

fn at_least_source(d: u64) -> String {
    let trap = 2 * d + 1;
    let halt = trap + 1;
    let mut lines = Vec::new();
    for _ in 0..d {
        lines.push(format!("JZ r0 {trap}"));
        lines.push("DEC r0".to_string());
    }
    lines.push(format!("JZ r9 {halt}"));
    lines.push(format!("JZ r9 {trap}"));
    lines.push("HALT".to_string());
    program_text(&lines)
}

fn add_source(c: u64) -> String {
    let mut lines: Vec<String> = (0..c).map(|_| "INC r0".to_string()).collect();
    lines.push("HALT".to_string());
    program_text(&lines)
}

fn multiply_source(k: u64) -> String {
    // r1 := k·r0, then move r1 back into r0
    let k = k as usize;
    let done = 3 + k;
    let halt = done + 4;
    let mut lines = vec![format!("JZ r0 {done}"), "DEC r0".to_string()];
    lines.extend((0..k).map(|_| "INC r1".to_string()));
    lines.push("JZ r9 0".to_string());
    lines.push(format!("JZ r1 {halt}"));
    lines.push("DEC r1".to_string());
    lines.push("INC r0".to_string());
    lines.push(format!("JZ r9 {done}"));
    lines.push("HALT".to_string());
    program_text(&lines)
}

const COUNTDOWN_SOURCE: &str = "JZ r0 3\nDEC r0\nJZ r9 0\nHALT\n";

impl Corpus {
    pub fn new(entries: Vec<CorpusEntry>) -> Self {
        let by_index = entries.iter().enumerate().map(|(i, e)| (e.index.clone(), i)).collect();
        Corpus { entries, by_index }
    }

    /// The built-in corpus.
    pub fn builtin() -> Arc<Corpus> {
        static CORPUS: OnceLock<Arc<Corpus>> = OnceLock::new();
        CORPUS.get_or_init(|| Arc::new(Corpus::generate())).clone()
    }

    /// The corpus named by [`CORPUS_ENV`], or the built-in corpus.
    pub fn from_env() -> Result<Arc<Corpus>> {
        match std::env::var(CORPUS_ENV) {
            Ok(path) if !path.is_empty() => Ok(Arc::new(Corpus::load(Path::new(&path))?)),
            _ => Ok(Corpus::builtin()),
        }
    }

    fn generate() -> Corpus {
        let mut entries = vec![
            CorpusEntry::build("halt", "HALT\n", Domain::All),
            CorpusEntry::build("loop", "JZ r9 0\n", Domain::Empty),
            CorpusEntry::build("countdown", COUNTDOWN_SOURCE, Domain::All),
        ];
        for k in 2..=5 {
            let name = if k == 2 { "halt-iff-even".to_string() } else { format!("multiples-of-{k}") };
            entries.push(CorpusEntry::build(&name, &multiples_source(k), Domain::Multiples(k)));
        }
        for d in 0..=9 {
            entries.push(CorpusEntry::build(&format!("except-{d}"), &except_source(d), Domain::Except(d)));
        }
        for d in 1..=8 {
            entries.push(CorpusEntry::build(&format!("below-{d}"), &below_source(d), Domain::Below(d)));
        }
        for d in 1..=8 {
            entries.push(CorpusEntry::build(&format!("atleast-{d}"), &at_least_source(d), Domain::AtLeast(d)));
        }
        for c in 1..=9 {
            entries.push(CorpusEntry::build(&format!("add-{c}"), &add_source(c), Domain::All));
        }
        for k in 2..=5 {
            entries.push(CorpusEntry::build(&format!("multiply-{k}"), &multiply_source(k), Domain::All));
        }
        for set in [vec![0u64], vec![1], vec![0, 2, 4], vec![3, 7], vec![0, 1, 2, 3, 5, 8]] {
            let s: BTreeSet<u64> = set.iter().copied().collect();
            let bound = *s.iter().max().unwrap();
            let name = format!("finite-{}", set.iter().map(u64::to_string).collect::<Vec<_>>().join("-"));
            let source = membership_source(&|m| s.contains(&m), bound);
            entries.push(CorpusEntry::build(&name, &source, Domain::Finite(s)));
        }
        Corpus::new(entries)
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: &BigUint) -> Option<&CorpusEntry> {
        self.by_index.get(index).map(|&i| &self.entries[i])
    }

    pub fn by_name(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Serializes the corpus in its text format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# bwlab toy program corpus\n");
        for e in &self.entries {
            out.push_str(&format!("\n[program {}]\n", e.name));
            out.push_str(&format!("index = {}\n", e.index));
            out.push_str(&format!("domain = {}\n", e.domain));
            out.push_str(&format!("total = {}\n", e.total));
            let times: Vec<String> =
                e.halting_times.iter().map(|t| t.map_or_else(|| "-".to_string(), |t| t.to_string())).collect();
            out.push_str(&format!("times = {}\n", times.join(" ")));
            out.push_str("source:\n");
            out.push_str(&e.program.to_text());
            out.push_str("[end]\n");
        }
        out
    }

    /// Parses the text format. Each entry's index must equal the code of its source.
    pub fn parse(text: &str) -> Result<Corpus> {
        let err = |line: usize, message: String| Error::Parse { line, column: 1, message };
        let lines: Vec<&str> = text.lines().collect();
        let mut entries = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let line = lines[i].trim();
            if line.is_empty() || line.starts_with('#') {
                i += 1;
                continue;
            }
            let name = line
                .strip_prefix("[program ")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err(i + 1, format!("expected `[program NAME]`, got `{line}`")))?
                .to_string();
            let header_line = i + 1;
            i += 1;
            let mut fields = BTreeMap::new();
            while i < lines.len() && lines[i].trim() != "source:" {
                let l = lines[i].trim();
                let (k, v) =
                    l.split_once('=').ok_or_else(|| err(i + 1, format!("expected `key = value`, got `{l}`")))?;
                fields.insert(k.trim().to_string(), v.trim().to_string());
                i += 1;
            }
            i += 1;
            let src_start = i;
            while i < lines.len() && lines[i].trim() != "[end]" {
                i += 1;
            }
            if i >= lines.len() {
                return Err(err(header_line, "missing `[end]`".into()));
            }
            let source = lines[src_start..i].join("\n");
            i += 1;
            let field = |k: &str| fields.get(k).ok_or_else(|| err(header_line, format!("missing field `{k}`")));
            let program = ToyProgram::parse(&source).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse { line: line + src_start, column, message },
                other => other,
            })?;
            let index: BigUint = field("index")?.parse().map_err(|_| err(header_line, "bad index".into()))?;
            if index != program.code() {
                return Err(err(header_line, format!("index of `{name}` does not match its source")));
            }
            let domain: Domain = field("domain")?.parse()?;
            let total: bool = field("total")?.parse().map_err(|_| err(header_line, "bad total flag".into()))?;
            let halting_times = field("times")?
                .split_whitespace()
                .map(|t| if t == "-" { Ok(None) } else { t.parse::<u64>().map(Some) })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err(header_line, "bad halting-time table".into()))?;
            entries.push(CorpusEntry { name, program, index, domain, total, halting_times });
        }
        Ok(Corpus::new(entries))
    }

    pub fn load(path: &Path) -> Result<Corpus> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Corpus::parse(&text)
    }
}

// ---------------------------------------------------------------------------
// Oracles

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// `m ↦ 1_{D(e_n)}(m)`.
    Halting(BigUint),
    /// `n ↦ 1_{A_T}(n)`.
    Totality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    GroundTruth,
    Fuel(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    /// The fuel ran out before an answer could be certified.
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct Oracle {
    pub kind: OracleKind,
    pub mode: OracleMode,
    corpus: Arc<Corpus>,
}

impl Oracle {
    pub fn new(kind: OracleKind, mode: OracleMode, corpus: Arc<Corpus>) -> Self {
        Oracle { kind, mode, corpus }
    }

    pub fn halting(n: BigUint, mode: OracleMode) -> Self {
        Oracle::new(OracleKind::Halting(n), mode, Corpus::builtin())
    }

    pub fn totality(mode: OracleMode) -> Self {
        Oracle::new(OracleKind::Totality, mode, Corpus::builtin())
    }

    /// Ground-truth mode answers only for corpus programs. Fuel mode can confirm
    /// halting but never certifies a negative.
    pub fn query(&self, arg: &BigUint) -> Result<Answer> {
        let lookup = |n: &BigUint| {
            self.corpus.get(n).ok_or_else(|| Error::NoCertificate(format!("program {n} is not in the corpus")))
        };
        let yes_no = |b: bool| if b { Answer::Yes } else { Answer::No };
        match (&self.kind, self.mode) {
            (OracleKind::Halting(n), OracleMode::GroundTruth) => {
                let m = arg.to_u64().ok_or_else(|| Error::OutOfRange(format!("input {arg}")))?;
                Ok(yes_no(lookup(n)?.domain.contains(m)))
            }
            (OracleKind::Halting(n), OracleMode::Fuel(fuel)) => {
                let m = arg.to_u64().ok_or_else(|| Error::OutOfRange(format!("input {arg}")))?;
                Ok(if psi(n, m, fuel) { Answer::Yes } else { Answer::Exhausted })
            }
            (OracleKind::Totality, OracleMode::GroundTruth) => Ok(yes_no(lookup(arg)?.total)),
            (OracleKind::Totality, OracleMode::Fuel(_)) => Ok(Answer::Exhausted),
        }
    }
}

/// Incremental view of `Ψ(n, m, k)` for a fixed program: each input is simulated
/// once and resumed as `k` grows.
#[derive(Clone, Debug)]
pub struct PsiTable<'a> {
    program: &'a ToyProgram,
    runs: Vec<Execution<'a>>,
}

impl<'a> PsiTable<'a> {
    pub fn new(program: &'a ToyProgram) -> Self {
        PsiTable { program, runs: Vec::new() }
    }

    pub fn psi(&mut self, m: u64, k: u64) -> bool {
        let m = m as usize;
        while self.runs.len() <= m {
            let input = self.runs.len() as u64;
            self.runs.push(self.program.start(input));
        }
        let run = &mut self.runs[m];
        match run.outcome() {
            RunOutcome::Halted { steps, .. } => steps <= k,
            RunOutcome::Running => run.advance(k).is_halted(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct HaltRecord {
    halted: Option<u64>,
    checked: u64,
}

/// Thread-safe memo of halting times for a fixed program. Each query that needs
/// more fuel reruns the input with at least double the previous budget.
#[derive(Clone, Debug)]
pub struct HaltingCache {
    program: Arc<ToyProgram>,
    records: Arc<Mutex<HashMap<u64, HaltRecord>>>,
}

impl HaltingCache {
    pub fn new(program: ToyProgram) -> Self {
        HaltingCache { program: Arc::new(program), records: Arc::default() }
    }

    pub fn program(&self) -> &ToyProgram {
        &self.program
    }

    /// The halting time on `m` if it is at most `k`.
    pub fn halting_time_within(&self, m: u64, k: u64) -> Option<u64> {
        let mut records = self.records.lock().expect("halting cache poisoned");
        let rec = records.entry(m).or_default();
        if let Some(t) = rec.halted {
            return (t <= k).then_some(t);
        }
        if rec.checked >= k {
            return None;
        }
        let fuel = k.max(rec.checked.saturating_mul(2));
        match self.program.run(m, fuel) {
            RunOutcome::Halted { steps, .. } => {
                rec.halted = Some(steps);
                (steps <= k).then_some(steps)
            }
            RunOutcome::Running => {
                rec.checked = fuel;
                None
            }
        }
    }

    /// `Ψ(n, m, k)`.
    pub fn psi(&self, m: u64, k: u64) -> bool {
        self.halting_time_within(m, k).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::pair_u64;
    use proptest::prelude::*;

    fn idx(p: &str) -> BigUint {
        ToyProgram::parse(p).unwrap().code()
    }

    #[test]
    fn halt_program_code() {
        let n0 = idx("HALT");
        assert_eq!(n0, BigUint::zero());
        assert_eq!(decode(&n0), ToyProgram::halt());
        assert_eq!(run_bounded(&n0, 5, 1), RunOutcome::Halted { steps: 1, output: 5 });
        assert_eq!(run_bounded(&n0, 5, 0), RunOutcome::Running);
    }

    #[test]
    fn decode_is_total() {
        for n in 0u32..2000 {
            let p = decode(&BigUint::from(n));
            assert!(!p.is_empty());
            assert_eq!(decode(&p.code()), p);
        }
        let huge = BigUint::from(10u32).pow(400);
        assert!(!decode(&huge).is_empty());
    }

    #[test]
    fn normalization() {
        let p = ToyProgram::new(vec![Instruction::Jz(0, 99), Instruction::Inc(MAX_REGISTER + 1)]);
        assert_eq!(p.instructions(), &[Instruction::Jz(0, 2), Instruction::Halt]);
        assert!(ToyProgram::parse("JZ r0 9\nHALT").is_err());
    }

    #[test]
    fn parse_errors_are_positioned() {
        match ToyProgram::parse("HALT\nINC x3") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        match ToyProgram::parse("  FOO r1") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("{other:?}"),
        }
        assert!(ToyProgram::parse("HALT 3").is_err());
        assert!(ToyProgram::parse("JZ r1").is_err());
    }

    #[test]
    fn tight_loop_runs_forever() {
        let n = idx("JZ r9 0");
        assert_eq!(run_bounded(&n, 1, 10_000), RunOutcome::Running);
    }

    #[test]
    fn countdown_step_count() {
        let p = ToyProgram::parse(COUNTDOWN_SOURCE).unwrap();
        for m in 0..20u64 {
            assert_eq!(p.run(m, 1_000), RunOutcome::Halted { steps: 3 * m + 2, output: 0 });
        }
        assert!(matches!(p.run(7, 28), RunOutcome::Halted { .. }));
    }

    #[test]
    fn corpus_shape() {
        let c = Corpus::builtin();
        assert!(c.len() >= 50);
        assert!(c.by_name("halt").unwrap().total);
        assert_eq!(c.by_name("loop").unwrap().domain, Domain::Empty);
        assert_eq!(c.by_name("halt-iff-even").unwrap().domain, Domain::Multiples(2));
        let names: BTreeSet<&str> = c.entries().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), c.len());
        let indices: BTreeSet<&BigUint> = c.entries().iter().map(|e| &e.index).collect();
        assert_eq!(indices.len(), c.len());
    }

    #[test]
    fn corpus_ground_truth_matches_simulation() {
        for e in Corpus::builtin().entries() {
            for m in 0..=RECORDED_INPUTS {
                let out = e.program.run(m, 50_000);
                assert_eq!(out.is_halted(), e.domain.contains(m), "{} on {m}", e.name);
                if let RunOutcome::Halted { steps, .. } = out {
                    assert_eq!(e.halting_times[m as usize], Some(steps));
                }
            }
        }
    }

    #[test]
    fn corpus_outputs() {
        let c = Corpus::builtin();
        let add3 = &c.by_name("add-3").unwrap().program;
        assert!(matches!(add3.run(4, 100), RunOutcome::Halted { output: 7, .. }));
        let mul4 = &c.by_name("multiply-4").unwrap().program;
        assert!(matches!(mul4.run(6, 10_000), RunOutcome::Halted { output: 24, .. }));
    }

    #[test]
    fn corpus_text_round_trip() {
        let c = Corpus::builtin();
        let text = c.to_text();
        let back = Corpus::parse(&text).unwrap();
        assert_eq!(&back, c.as_ref());
        let tampered = text.replacen("index = 0", "index = 1", 1);
        assert!(Corpus::parse(&tampered).is_err());
    }

    #[test]
    fn psi_properties_on_corpus() {
        let c = Corpus::builtin();
        let even = c.by_name("halt-iff-even").unwrap();
        assert!((0..=200).any(|k| even.program.psi(2, k)));
        let lp = c.by_name("loop").unwrap();
        assert!((0..=2000).step_by(50).all(|k| !psi(&lp.index, 3, k)));
    }

    #[test]
    fn psi_table_matches_direct_runs() {
        let c = Corpus::builtin();
        let e = c.by_name("multiply-3").unwrap();
        let mut table = PsiTable::new(&e.program);
        for k in (0..400).step_by(7) {
            for m in 0..6 {
                assert_eq!(table.psi(m, k), e.program.psi(m, k));
            }
        }
    }

    #[test]
    fn g_psi_examples() {
        let c = Corpus::builtin();
        let halt = &c.by_name("halt").unwrap().program;
        let m = pair_u64(&[1, 0]).to_u64().unwrap();
        assert!(g_psi_member(GPsiVariant::Domain(halt), m));
        let lp = &c.by_name("loop").unwrap().program;
        assert!((0..500).all(|m| !g_psi_member(GPsiVariant::Domain(lp), m)));
        for m in 0..3000u64 {
            let t = unpair_u64(m, 3);
            assert_eq!(g_psi_member(GPsiVariant::Totality, m), psi(&BigUint::from(t[2]), t[0], t[1]));
        }
    }

    #[test]
    fn g_psi_characterizes_domain() {
        let c = Corpus::builtin();
        for name in ["halt-iff-even", "below-3", "finite-0-2-4", "loop"] {
            let e = c.by_name(name).unwrap();
            for j in 0..10u64 {
                let found = (0..200u64).any(|k| {
                    let m = pair_u64(&[k, j]).to_u64().unwrap();
                    g_psi_member(GPsiVariant::Domain(&e.program), m)
                });
                assert_eq!(found, e.domain.contains(j), "{name} {j}");
            }
        }
    }

    #[test]
    fn oracles() {
        let c = Corpus::builtin();
        let even = c.by_name("halt-iff-even").unwrap();
        let gt = Oracle::halting(even.index.clone(), OracleMode::GroundTruth);
        assert_eq!(gt.query(&BigUint::from(4u32)).unwrap(), Answer::Yes);
        assert_eq!(gt.query(&BigUint::from(5u32)).unwrap(), Answer::No);
        let fuel = Oracle::halting(even.index.clone(), OracleMode::Fuel(1000));
        assert_eq!(fuel.query(&BigUint::from(4u32)).unwrap(), Answer::Yes);
        assert_eq!(fuel.query(&BigUint::from(5u32)).unwrap(), Answer::Exhausted);
        let tot = Oracle::totality(OracleMode::GroundTruth);
        assert_eq!(tot.query(&even.index).unwrap(), Answer::No);
        assert_eq!(tot.query(&BigUint::zero()).unwrap(), Answer::Yes);
        let outside = idx("INC r5\nINC r5\nDEC r7\nHALT");
        assert!(c.get(&outside).is_none());
        assert!(matches!(tot.query(&outside), Err(Error::NoCertificate(_))));
    }

    fn arb_instruction(len: usize) -> impl Strategy<Value = Instruction> {
        prop_oneof![
            Just(Instruction::Halt),
            (0u32..12).prop_map(Instruction::Inc),
            (0u32..12).prop_map(Instruction::Dec),
            (0u32..12, 0..=len).prop_map(|(r, t)| Instruction::Jz(r, t)),
        ]
    }

    fn arb_program() -> impl Strategy<Value = ToyProgram> {
        (1usize..24).prop_flat_map(|len| prop::collection::vec(arb_instruction(len), len).prop_map(ToyProgram::new))
    }

    proptest! {
        #[test]
        fn code_round_trip(p in arb_program()) {
            prop_assert_eq!(decode(&p.code()), p.clone());
            prop_assert_eq!(ToyProgram::parse(&p.to_text()).unwrap(), p);
        }

        #[test]
        fn psi_is_monotone_and_deterministic(p in arb_program(), m in 0u64..8, k in 0u64..300) {
            let a = p.run(m, k);
            prop_assert_eq!(a, p.run(m, k));
            if let RunOutcome::Halted { steps, .. } = a {
                prop_assert!(steps <= k);
                prop_assert!(p.psi(m, k + 1));
            }
        }
    }
}
