//! Command-line front end for the qap toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 capacity exceeded.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qap::clifford::{intrinsic_generator_set, CliffordError, SRotationSequence};
use qap::code::{weight_one_errors, CodeError, StabilizerCode};
use qap::ftgate::{CheckReport, FaultTolerantAction, FtError, LogicalGate};
use qap::io::{parse_noise_list, parse_stabilizer_spec, CheckLine, FtBundle, IoError};
use qap::oracle::{self, DenseOperator, OracleError, MAX_DENSE_QUBITS};
use qap::partition::{PartitionError, MAX_ENUM_QUBITS};
use qap::{BitString, Spinor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Number of sampled pairs for the closure check above four qubits.
const CLOSURE_SAMPLES: usize = 10_000;
const EXHAUSTIVE_CLOSURE_QUBITS: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "qap", version, about = "Stabilizer-code partitions, encodings and fault-tolerant gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Block and coset counts, distance and syndrome table of a code.
    Partition,
    /// Encoding circuit listing.
    Encode,
    /// Build a fault-tolerant action bundle for a logical gate.
    Ftgate,
    /// Noise, syndrome measurement and correction on a bundle.
    Simulate,
    /// Cross-check a spec or a bundle against the dense oracle.
    Verify,
    /// Every coset of the partition with its conditioned halves.
    Enumerate,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunConfig {
    /// Stabilizer spec file, one generator per line.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Gate name (I, X, Y, Z, H, S, T) or JSON matrix file.
    #[arg(long, global = true)]
    pub gate: Option<String>,
    /// Fault-tolerant action bundle (JSON).
    #[arg(long, global = true)]
    pub bundle: Option<PathBuf>,
    /// Error or noise list, one event per line.
    #[arg(long, global = true)]
    pub errors: Option<PathBuf>,
    /// Number of simulation trials; defaults to one per noise line.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Capacity(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Verification(_) => EXIT_VERIFY,
            Failure::Capacity(_) => EXIT_CAPACITY,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Verification(m) => format!("verification failed: {m}"),
            Failure::Capacity(m) => format!("capacity exceeded: {m}"),
        }
    }
}

fn classify(capacity: bool, e: impl Display) -> Failure {
    if capacity {
        Failure::Capacity(e.to_string())
    } else {
        Failure::Usage(e.to_string())
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                classify(e.is_capacity(), e)
            }
        }
    )*};
}

failure_from!(IoError, CodeError, FtError, PartitionError, CliffordError);

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        classify(matches!(e, OracleError::Capacity(_)), e)
    }
}

/// Text produced by a command, and whether every check in it passed.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    run_cli(&cli, out, err)
}

pub fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = &cli.config;
    let result = match cli.command {
        Command::Partition => cmd_partition(cfg),
        Command::Encode => cmd_encode(cfg),
        Command::Ftgate => cmd_ftgate(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Enumerate => cmd_enumerate(cfg),
    };
    match result {
        Ok(o) => {
            if let Err(e) = emit(cfg, &o.text, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if o.ok {
                EXIT_OK
            } else {
                let _ = writeln!(err, "verification failed");
                EXIT_VERIFY
            }
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.message());
            f.exit_code()
        }
    }
}

fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn require<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Reads and validates a spec file; the code id is the file stem.
fn load_code(cfg: &RunConfig) -> Result<StabilizerCode, Failure> {
    let path = require(&cfg.spec, "spec")?;
    let gens = parse_stabilizer_spec(&read(path)?).map_err(|e| match e {
        IoError::Empty => Failure::Usage(format!("{}: spec file has no generators", path.display())),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })?;
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if !gens[a].commutes(&gens[b]).unwrap_or(false) {
                return Err(Failure::Usage(format!(
                    "generators {} and {} anticommute",
                    gens[a].pauli_label(),
                    gens[b].pauli_label()
                )));
            }
        }
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "code".into());
    Ok(StabilizerCode::new(id, &gens)?)
}

/// One noise event: weighted spinor terms.
type NoiseEvent = Vec<(Complex64, Spinor)>;

fn load_noise(cfg: &RunConfig) -> Result<Option<Vec<NoiseEvent>>, Failure> {
    match &cfg.errors {
        None => Ok(None),
        Some(p) => parse_noise_list(&read(p)?)
            .map(Some)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
    }
}

/// Errors named in `--errors`, or the weight-one set when the code corrects it.
fn error_set(cfg: &RunConfig, code: &StabilizerCode) -> Result<Vec<Spinor>, Failure> {
    if let Some(noise) = load_noise(cfg)? {
        let errs: Vec<Spinor> = noise.into_iter().flatten().map(|(_, s)| s).collect();
        if let Some(e) = errs.iter().find(|e| e.n() != code.n()) {
            return Err(Failure::Usage(format!("error {} has wrong qubit count", e.pauli_label())));
        }
        return Ok(errs);
    }
    default_errors(code)
}

fn default_errors(code: &StabilizerCode) -> Result<Vec<Spinor>, Failure> {
    let w1 = weight_one_errors(code.n())?;
    if code.is_correctable(&w1)?.correctable {
        Ok(w1)
    } else {
        Ok(Vec::new())
    }
}

fn load_gate(cfg: &RunConfig, k: usize) -> Result<LogicalGate, Failure> {
    let g = require(&cfg.gate, "gate")?;
    let path = Path::new(g);
    if !path.exists() {
        return Ok(LogicalGate::named(g, k)?);
    }
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{g}: {e}")))?;
    let m = DenseOperator::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|e| Complex64::new(e[0], e[1])).collect())
            .collect(),
    )
    .map_err(|e| Failure::Usage(format!("{g}: {e}")))?;
    Ok(LogicalGate::new(k, m)?)
}

fn dense_guard(n: usize) -> Result<(), Failure> {
    if n > MAX_DENSE_QUBITS {
        Err(Failure::Capacity(format!(
            "n = {n} exceeds the dense-oracle limit of {MAX_DENSE_QUBITS} qubits"
        )))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------- partition

#[derive(Serialize)]
struct SyndromeRow {
    syndrome: String,
    representative: String,
    weight_one_errors: Vec<String>,
}

#[derive(Serialize)]
struct PartitionReport {
    code_id: String,
    n: usize,
    k: usize,
    detectors: Vec<String>,
    blocks: u64,
    cosets_per_block: u64,
    elements_per_coset: u64,
    w_min: Option<usize>,
    t: usize,
    weight_one_correctable: bool,
    syndrome_table: Vec<SyndromeRow>,
}

fn cmd_partition(cfg: &RunConfig) -> Result<Output, Failure> {
    let code = load_code(cfg)?;
    let (n, k) = (code.n(), code.k());
    let m = n - k;
    let dist = code.max_correctable_t()?;
    let w1 = weight_one_errors(n)?;
    let p = code.partition();
    let syn = w1.iter().map(|e| p.syndrome(e)).collect::<Result<Vec<_>, _>>()?;
    let mu0 = BitString::zeros(2 * k).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut table = Vec::with_capacity(1 << m);
    for t in 0..(1u64 << m) {
        let tau = BitString::from_index(m, t).map_err(|e| Failure::Usage(e.to_string()))?;
        table.push(SyndromeRow {
            syndrome: tau.to_string(),
            representative: p.coset_representative(&tau, &mu0)?.pauli_label(),
            weight_one_errors: w1
                .iter()
                .zip(&syn)
                .filter(|(_, s)| **s == tau)
                .map(|(e, _)| e.pauli_label())
                .collect(),
        });
    }
    let report = PartitionReport {
        code_id: code.id().to_string(),
        n,
        k,
        detectors: code.detectors().detectors().iter().map(|d| d.pauli_label()).collect(),
        blocks: 1 << m,
        cosets_per_block: 1 << (2 * k),
        elements_per_coset: 1 << m,
        w_min: dist.w_min,
        t: dist.t,
        weight_one_correctable: code.is_correctable(&w1)?.correctable,
        syndrome_table: table,
    };
    Ok(Output::ok(to_json(&report)))
}

// ------------------------------------------------------------------ encode

fn cmd_encode(cfg: &RunConfig) -> Result<Output, Failure> {
    let code = load_code(cfg)?;
    let listing = code.encoding().listing();
    let back = SRotationSequence::parse_listing(&listing)?;
    if &back != code.encoding() {
        return Err(Failure::Verification("encoding listing does not round-trip".into()));
    }
    Ok(Output::ok(listing))
}

// ------------------------------------------------------------------ ftgate

fn check_line(name: &str, rep: &CheckReport, tol: f64) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        passed: rep.max_residual <= tol,
        max_residual: rep.max_residual,
        failures: rep.failures.clone(),
    }
}

fn failed_line(name: &str, e: impl Display) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        passed: false,
        max_residual: f64::NAN,
        failures: vec![e.to_string()],
    }
}

fn bool_line(name: &str, ok: bool, why: &str) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        passed: ok,
        max_residual: 0.0,
        failures: if ok { Vec::new() } else { vec![why.to_string()] },
    }
}

/// The checks every built action must pass.
fn action_checks(act: &FaultTolerantAction, errors: &[Spinor], tol: f64) -> Result<Vec<CheckLine>, Failure> {
    let mut lines = vec![check_line("action unitarity", &act.verify_unitarity(), tol)];
    lines.push(bool_line(
        "transfer-amplitude forms",
        act.transfer_forms_agree(),
        "composite and reduced transfer amplitudes disagree on unitarity",
    ));
    let eig = qap::ftgate::verify_eigen_invariance_with(act.code(), act.intrinsic(), tol)?;
    lines.push(check_line("eigen-invariance", &eig, tol));
    lines.push(check_line("logical action", &act.verify_logical_action()?, tol));
    lines.push(match act.verify_correction(errors) {
        Ok(r) => check_line("correction identity", &r, tol),
        Err(e) if e.is_capacity() => return Err(e.into()),
        Err(e) => failed_line("correction identity", e),
    });
    Ok(lines)
}

fn cmd_ftgate(cfg: &RunConfig) -> Result<Output, Failure> {
    let code = load_code(cfg)?;
    dense_guard(code.n())?;
    let gate = load_gate(cfg, code.k())?;
    let errors = error_set(cfg, &code)?;
    let act = FaultTolerantAction::with_defaults(&code, gate, &errors)?;
    let lines = action_checks(&act, &errors, cfg.tolerance)?;
    let ok = lines.iter().all(|l| l.passed);
    let mut bundle = FtBundle::from_action(&act);
    bundle.verification = Some(lines);
    Ok(Output {
        text: bundle.to_json(),
        ok,
    })
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct Trial {
    trial: usize,
    noise: String,
    codeword: usize,
    syndrome: String,
    correction: String,
    probability: f64,
    fidelity: f64,
    success: bool,
}

#[derive(Serialize)]
struct SimulationReport {
    code_id: String,
    seed: u64,
    trials: usize,
    successes: usize,
    failures: usize,
    success_rate: Option<f64>,
    results: Vec<Trial>,
}

fn noise_label(noise: &[(Complex64, Spinor)]) -> String {
    noise
        .iter()
        .map(|(c, s)| {
            if noise.len() == 1 && *c == Complex64::new(1.0, 0.0) {
                s.pauli_label()
            } else {
                format!("{},{} {}", c.re, c.im, s.pauli_label())
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn load_action(cfg: &RunConfig) -> Result<(FtBundle, FaultTolerantAction), Failure> {
    let path = require(&cfg.bundle, "bundle")?;
    let bundle = FtBundle::from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    dense_guard(bundle.n)?;
    let act = bundle.to_action()?;
    Ok((bundle, act))
}

fn cmd_simulate(cfg: &RunConfig) -> Result<Output, Failure> {
    let (bundle, act) = load_action(cfg)?;
    let code = act.code();
    let noise = match load_noise(cfg)? {
        Some(n) => n,
        None => weight_one_errors(code.n())?
            .into_iter()
            .map(|e| vec![(Complex64::new(1.0, 0.0), e)])
            .collect(),
    };
    if let Some(bad) = noise.iter().flatten().find(|(_, s)| s.n() != code.n()) {
        return Err(Failure::Usage(format!("error {} has wrong qubit count", bad.1.pauli_label())));
    }
    let trials = cfg.trials.unwrap_or(noise.len());
    if trials > 0 && noise.is_empty() {
        return Err(Failure::Usage("noise list is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let words = 1usize << code.k();
    let mut results = Vec::with_capacity(trials);
    for t in 0..trials {
        let event = &noise[t % noise.len()];
        let i = rng.gen_range(0..words);
        let o = act.correction_cycle(event, i, &mut rng)?;
        results.push(Trial {
            trial: t,
            noise: noise_label(event),
            codeword: i,
            syndrome: o.syndrome.to_string(),
            correction: o.correction.pauli_label(),
            probability: o.probability,
            fidelity: o.fidelity,
            success: o.fidelity >= 1.0 - cfg.tolerance,
        });
    }
    let successes = results.iter().filter(|r| r.success).count();
    let report = SimulationReport {
        code_id: bundle.code_id,
        seed: cfg.seed,
        trials,
        successes,
        failures: trials - successes,
        success_rate: (trials > 0).then(|| successes as f64 / trials as f64),
        results,
    };
    Ok(Output::ok(to_json(&report)))
}

// ------------------------------------------------------------------ verify

fn render(lines: &[CheckLine]) -> Output {
    let mut text = String::new();
    for l in lines {
        let verdict = if l.passed { "PASS" } else { "FAIL" };
        if l.max_residual.is_finite() && l.max_residual > 0.0 {
            text.push_str(&format!("{verdict} {} (max residual {:.3e})\n", l.name, l.max_residual));
        } else {
            text.push_str(&format!("{verdict} {}\n", l.name));
        }
        for f in l.failures.iter().take(5) {
            text.push_str(&format!("    {f}\n"));
        }
        if l.failures.len() > 5 {
            text.push_str(&format!("    ... {} more\n", l.failures.len() - 5));
        }
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    if failed == 0 {
        text.push_str(&format!("all {} checks passed\n", lines.len()));
    } else {
        text.push_str(&format!("{failed} of {} checks failed\n", lines.len()));
    }
    Output { text, ok: failed == 0 }
}

fn cmd_verify(cfg: &RunConfig) -> Result<Output, Failure> {
    match (&cfg.spec, &cfg.bundle) {
        (Some(_), None) => verify_spec(cfg),
        (None, Some(_)) => verify_bundle(cfg),
        _ => Err(Failure::Usage("verify needs exactly one of --spec or --bundle".into())),
    }
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> Result<Spinor, Failure> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let z = BitString::from_raw(n, rng.gen::<u64>() & mask).map_err(|e| Failure::Usage(e.to_string()))?;
    let a = BitString::from_raw(n, rng.gen::<u64>() & mask).map_err(|e| Failure::Usage(e.to_string()))?;
    Spinor::hermitian_from(z, a).map_err(|e| Failure::Usage(e.to_string()))
}

fn verify_spec(cfg: &RunConfig) -> Result<Output, Failure> {
    let tol = cfg.tolerance;
    let code = load_code(cfg)?;
    let (n, k) = (code.n(), code.k());
    let m = n - k;
    dense_guard(n)?;
    let p = code.partition();
    let mut lines = Vec::new();

    if n <= MAX_ENUM_QUBITS {
        let table = p.table()?;
        let ok = table.blocks.len() == 1 << m
            && table
                .blocks
                .iter()
                .all(|b| b.cosets.len() == 1 << (2 * k) && b.cosets.iter().all(|c| c.elements.len() == 1 << m));
        lines.push(bool_line("partition structure", ok, "block, coset or element counts are wrong"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let closure = if n <= EXHAUSTIVE_CLOSURE_QUBITS {
        let all: Vec<Spinor> = Spinor::all_hermitian(n).map_err(|e| Failure::Usage(e.to_string()))?.collect();
        p.verify_closure(all.iter().flat_map(|s| all.iter().map(move |t| (*s, *t))))?
    } else {
        let mut pairs = Vec::with_capacity(CLOSURE_SAMPLES);
        for _ in 0..CLOSURE_SAMPLES {
            pairs.push((random_hermitian(n, &mut rng)?, random_hermitian(n, &mut rng)?));
        }
        p.verify_closure(pairs)?
    };
    lines.push(CheckLine {
        name: format!(
            "coset closure ({} pairs, {} commutators)",
            closure.checked, closure.commutators
        ),
        passed: closure.passed(),
        max_residual: 0.0,
        failures: closure
            .violations
            .iter()
            .map(|v| format!("{:?} for {} and {}", v.kind, v.s.pauli_label(), v.t.pauli_label()))
            .collect(),
    });

    let intrinsic = intrinsic_generator_set(n, k)?;
    let q = code.encoding();
    let mut sym_fail = Vec::new();
    for (r, d) in code.detectors().detectors().iter().enumerate() {
        if q.transport(&intrinsic[r])? != *d {
            sym_fail.push(format!("intrinsic detector {r} is not carried onto {}", d.pauli_label()));
        }
    }
    if SRotationSequence::parse_listing(&q.listing())? != *q {
        sym_fail.push("listing does not round-trip".into());
    }
    lines.push(CheckLine {
        name: format!("encoding, symbolic ({} rotations)", q.len()),
        passed: sym_fail.is_empty(),
        max_residual: 0.0,
        failures: sym_fail,
    });

    let qm = q.matrix()?;
    let mut rep = CheckReport::default();
    let mut worst = 0.0f64;
    let mut fails = Vec::new();
    for (r, d) in code.detectors().detectors().iter().enumerate() {
        let lhs = qm.mul(&oracle::spinor_matrix(&intrinsic[r])?)?.mul(&qm.adjoint())?;
        let res = lhs.max_diff(&oracle::spinor_matrix(d)?);
        worst = worst.max(res);
        if !(res <= tol) {
            fails.push(format!("detector {}", d.pauli_label()));
        }
    }
    rep.max_residual = worst;
    rep.failures = fails;
    lines.push(check_line("encoding, dense", &rep, tol));

    let w1 = weight_one_errors(n)?;
    let mut syn_fail = Vec::new();
    for e in &w1 {
        let pulled = code.pullback(e)?;
        let intrinsic_syn = pulled.alpha().slice(0, m).map_err(|e| Failure::Usage(e.to_string()))?;
        if p.syndrome(e)? != intrinsic_syn {
            syn_fail.push(e.pauli_label());
        }
    }
    lines.push(CheckLine {
        name: "syndrome transport".into(),
        passed: syn_fail.is_empty(),
        max_residual: 0.0,
        failures: syn_fail,
    });

    let words = code.encoded_codewords()?;
    let mut worst = 0.0f64;
    for (i, w) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            let want = if i == j { oracle::C1 } else { oracle::C0 };
            worst = worst.max((oracle::inner(v, w) - want).norm());
        }
        for d in code.detectors().detectors() {
            let dw = oracle::spinor_matrix(d)?.apply(w)?;
            worst = worst.max(oracle::max_abs_diff(&dw, w));
        }
    }
    let proj = code.projector()?;
    let dim = proj.dim();
    let mut sum = DenseOperator::zeros(dim);
    for w in &words {
        for r in 0..dim {
            for c in 0..dim {
                sum.set(r, c, sum.get(r, c) + w[r] * w[c].conj());
            }
        }
    }
    worst = worst.max(sum.max_diff(&proj));
    let mut rep = CheckReport {
        failures: Vec::new(),
        max_residual: worst,
    };
    if !(worst <= tol) {
        rep.failures.push("encoded codewords do not span the stabilized subspace".into());
    }
    lines.push(check_line("codeword space", &rep, tol));

    let errors = default_errors(&code)?;
    if !errors.is_empty() {
        let mut set = vec![Spinor::identity(n).map_err(|e| Failure::Usage(e.to_string()))?];
        set.extend(errors.iter().copied());
        let mut worst = 0.0f64;
        let mut fails = Vec::new();
        for a in &set {
            let ad = oracle::spinor_matrix(&a.adjoint())?;
            for b in &set {
                let op = ad.mul(&oracle::spinor_matrix(b)?)?;
                let applied = words.iter().map(|w| op.apply(w)).collect::<Result<Vec<_>, _>>()?;
                let c00 = oracle::inner(&words[0], &applied[0]);
                let mut res = 0.0f64;
                for (i, ai) in applied.iter().enumerate() {
                    for (j, wj) in words.iter().enumerate() {
                        let want = if i == j { c00 } else { oracle::C0 };
                        res = res.max((oracle::inner(wj, ai) - want).norm());
                    }
                }
                worst = worst.max(res);
                if !(res <= tol) {
                    fails.push(format!("{} and {}", a.pauli_label(), b.pauli_label()));
                }
            }
        }
        lines.push(check_line(
            "error orthogonality, weight one",
            &CheckReport {
                failures: fails,
                max_residual: worst,
            },
            tol,
        ));
    }

    let act = FaultTolerantAction::with_defaults(&code, LogicalGate::named("I", k)?, &errors)?;
    for mut l in action_checks(&act, &errors, tol)? {
        l.name = format!("identity action: {}", l.name);
        lines.push(l);
    }
    Ok(render(&lines))
}

fn verify_bundle(cfg: &RunConfig) -> Result<Output, Failure> {
    let tol = cfg.tolerance;
    let path = require(&cfg.bundle, "bundle")?;
    let bundle = FtBundle::from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    dense_guard(bundle.n)?;
    let act = match bundle.to_action() {
        Ok(a) => a,
        Err(e) if e.is_capacity() => return Err(e.into()),
        Err(IoError::Ft(FtError::NonUnitaryTransfer(r))) => {
            let line = CheckLine {
                name: "transfer-amplitude unitarity".into(),
                passed: false,
                max_residual: r,
                failures: vec![format!("transfer amplitude is not unitary (residual {r:e})")],
            };
            return Ok(render(&[line]));
        }
        Err(IoError::Ft(e @ FtError::NonUnitaryGate(_))) => return Ok(render(&[failed_line("gate unitarity", e)])),
        Err(IoError::Code(e @ CodeError::Invalid(_))) => return Ok(render(&[failed_line("encoding", e)])),
        Err(e) => return Ok(render(&[failed_line("bundle consistency", e)])),
    };
    let mut lines = vec![bool_line(
        "transfer-amplitude unitarity",
        true,
        "",
    )];
    lines.push(bool_line(
        "stored corrections",
        bundle.corrections_match(&act),
        "correction table differs from the one implied by the output cosets",
    ));
    let errors = error_set(cfg, act.code())?;
    lines.extend(action_checks(&act, &errors, tol)?);
    Ok(render(&lines))
}

// --------------------------------------------------------------- enumerate

#[derive(Serialize)]
struct CosetEntry {
    mu: String,
    representative: String,
    epsilon_zero: Vec<String>,
    epsilon_one: Vec<String>,
}

#[derive(Serialize)]
struct BlockEntry {
    syndrome: String,
    cosets: Vec<CosetEntry>,
}

#[derive(Serialize)]
struct Enumeration {
    code_id: String,
    n: usize,
    k: usize,
    blocks: usize,
    cosets_per_block: usize,
    elements_per_coset: usize,
    partition: Vec<BlockEntry>,
}

fn cmd_enumerate(cfg: &RunConfig) -> Result<Output, Failure> {
    let code = load_code(cfg)?;
    let p = code.partition();
    let table = p.table()?;
    let mut blocks = Vec::with_capacity(table.blocks.len());
    for b in &table.blocks {
        let mut cosets = Vec::with_capacity(b.cosets.len());
        for c in &b.cosets {
            let split = p.conditioned_split(c)?;
            let labels = |v: &[Spinor]| v.iter().map(|s| s.pauli_label()).collect::<Vec<_>>();
            cosets.push(CosetEntry {
                mu: c.mu.to_string(),
                representative: c.representative.pauli_label(),
                epsilon_zero: labels(&split.halves[0]),
                epsilon_one: labels(&split.halves[1]),
            });
        }
        blocks.push(BlockEntry {
            syndrome: b.tau.to_string(),
            cosets,
        });
    }
    let report = Enumeration {
        code_id: code.id().to_string(),
        n: code.n(),
        k: code.k(),
        blocks: table.blocks.len(),
        cosets_per_block: table.blocks[0].cosets.len(),
        elements_per_coset: table.blocks[0].cosets[0].elements.len(),
        partition: blocks,
    };
    Ok(Output::ok(to_json(&report)))
}
