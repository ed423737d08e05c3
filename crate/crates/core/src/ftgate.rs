//! Fault-tolerant encoded actions `U = Q_en Û Q_en†` with `Û = Λ ⊕ Ω`.
//!
//! In the intrinsic frame the register splits as `|α⟩|i⟩`: `n - k` syndrome
//! qubits then `k` logical qubits. Block `(α, β)` of `Û` is
//!
//! `M_{αβ} = i^{ov(ξ_α, α)} (-i)^{ov(η_β, β)} x_{αβ} 𝖲_α M₀₀ 𝕊_β`
//!
//! where `𝕊_β` (phase string `η_β`) labels the input coset of block `β`,
//! `𝖲_α` (phase string `ξ_α`) the output coset of block `α`, and `ov` counts
//! common ones. Blocks mixing syndrome zero with nonzero syndromes vanish.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::clifford::CliffordError;
use crate::code::{CodeError, StabilizerCode};
use crate::gf2::BitString;
use crate::oracle::{self, DenseOperator, OracleError, C0, C1};
use crate::partition::PartitionError;
use crate::spinor::{Spinor, SpinorError};

pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FtError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("gate is not unitary (residual {0:e})")]
    NonUnitaryGate(f64),
    #[error("gate acts on {got} logical qubits, code has {expected}")]
    GateSize { expected: usize, got: usize },
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
    #[error("coset selection is missing blocks {0:?}")]
    IncompleteSelection(Vec<String>),
    #[error("transfer amplitude is not unitary (residual {0:e})")]
    NonUnitaryTransfer(f64),
    #[error("transfer amplitude has dimension {got}, expected {expected}")]
    TransferSize { expected: usize, got: usize },
    #[error("error {error} in block {block} is not in the selected input coset")]
    CosetNotSelected { error: String, block: String },
    #[error("errors {0} and {1} share block {2} but lie in different cosets")]
    ConflictingErrors(String, String, String),
    #[error("error {0} is a nontrivial logical operator")]
    LogicalError(String),
    #[error("noise weights sum to {0}, expected 1")]
    NoiseNorm(f64),
    #[error("noise terms {0} and {1} share syndrome {2}")]
    NoiseBlocks(usize, usize, String),
    #[error("no correction stored for syndrome {0}")]
    Decoding(String),
    #[error("codeword index {0} out of range")]
    Codeword(usize),
    #[error("composition mismatch in block {0}: input coset of the second action differs from output coset of the first")]
    ComposeCoset(String),
    #[error("composition phase condition fails in block {0}")]
    ComposePhase(String),
    #[error("actions belong to different codes")]
    ComposeCode,
    #[error("composition needs phase strings that do not depend on the input block")]
    CorrelatedPhases,
}

impl FtError {
    pub fn is_capacity(&self) -> bool {
        match self {
            FtError::Code(e) => e.is_capacity(),
            FtError::Oracle(e) => matches!(e, OracleError::Capacity(_)),
            _ => false,
        }
    }
}

impl From<SpinorError> for FtError {
    fn from(e: SpinorError) -> Self {
        FtError::Code(e.into())
    }
}

impl From<CliffordError> for FtError {
    fn from(e: CliffordError) -> Self {
        FtError::Code(e.into())
    }
}

impl From<PartitionError> for FtError {
    fn from(e: PartitionError) -> Self {
        FtError::Code(e.into())
    }
}

impl From<crate::gf2::Gf2Error> for FtError {
    fn from(e: crate::gf2::Gf2Error) -> Self {
        FtError::Code(e.into())
    }
}

/// `ov(a, b)` reduced mod 4.
fn ov4(a: &BitString, b: &BitString) -> u8 {
    ((a.raw() & b.raw()).count_ones() % 4) as u8
}

/// Unitary `M₀₀` on the `k` logical qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalGate {
    k: usize,
    matrix: DenseOperator,
}

impl LogicalGate {
    pub fn new(k: usize, matrix: DenseOperator) -> Result<Self, FtError> {
        if matrix.dim() != 1 << k {
            return Err(FtError::GateSize {
                expected: k,
                got: matrix.dim().trailing_zeros() as usize,
            });
        }
        let r = matrix.unitarity_residual();
        if r > TOLERANCE {
            return Err(FtError::NonUnitaryGate(r));
        }
        Ok(LogicalGate { k, matrix })
    }

    /// `I` on any `k`; `X`, `Y`, `Z`, `H`, `S`, `T` on `k = 1`.
    pub fn named(name: &str, k: usize) -> Result<Self, FtError> {
        if name.eq_ignore_ascii_case("I") {
            return LogicalGate::new(k, DenseOperator::identity(1 << k));
        }
        if k != 1 {
            return Err(FtError::UnknownGate(format!("{name} on {k} logical qubits")));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let rows = match name.to_ascii_uppercase().as_str() {
            "X" => vec![vec![C0, C1], vec![C1, C0]],
            "Y" => vec![vec![C0, c(0.0, -1.0)], vec![c(0.0, 1.0), C0]],
            "Z" => vec![vec![C1, C0], vec![C0, -C1]],
            "H" => vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]],
            "S" => vec![vec![C1, C0], vec![C0, c(0.0, 1.0)]],
            "T" => vec![vec![C1, C0], vec![C0, c(h, h)]],
            _ => return Err(FtError::UnknownGate(name.to_string())),
        };
        LogicalGate::new(1, DenseOperator::from_rows(rows)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }
}

/// One coset per block: a `k`-qubit hermitian spinor and an `(n-k)`-bit phase string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetChoice {
    pub logical: Spinor,
    pub phase: BitString,
}

impl CosetChoice {
    pub fn identity(m: usize, k: usize) -> Result<Self, FtError> {
        Ok(CosetChoice {
            logical: Spinor::identity(k)?,
            phase: BitString::zeros(m)?,
        })
    }

    /// Intrinsic hermitian spinor `(-i)^{ov} S^{phase ∘ ς}_{β ∘ κ}`.
    pub fn intrinsic_spinor(&self, beta: &BitString) -> Result<Spinor, FtError> {
        Ok(Spinor::hermitian_from(
            self.phase.concat(self.logical.zeta())?,
            beta.concat(self.logical.alpha())?,
        )?)
    }
}

/// Coset choice for every syndrome; entry 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSelection {
    m: usize,
    k: usize,
    entries: Vec<CosetChoice>,
}

impl CosetSelection {
    /// From explicit choices for nonzero syndromes; all must be present.
    pub fn new(m: usize, k: usize, choices: BTreeMap<BitString, CosetChoice>) -> Result<Self, FtError> {
        let mut entries = vec![CosetChoice::identity(m, k)?];
        let mut missing = Vec::new();
        for b in 1..(1u64 << m) {
            let beta = BitString::from_index(m, b)?;
            match choices.get(&beta) {
                Some(c) => {
                    if c.logical.n() != k || c.phase.len() != m {
                        return Err(FtError::Code(CodeError::Invalid(format!(
                            "selection entry for {beta} has wrong size"
                        ))));
                    }
                    entries.push(CosetChoice {
                        logical: c.logical.hermitian(),
                        phase: c.phase,
                    });
                }
                None => missing.push(beta.to_string()),
            }
        }
        if !missing.is_empty() {
            return Err(FtError::IncompleteSelection(missing));
        }
        Ok(CosetSelection { m, k, entries })
    }

    /// Identity coset with zero phase string in every block.
    pub fn trivial(m: usize, k: usize) -> Result<Self, FtError> {
        Ok(CosetSelection {
            m,
            k,
            entries: (0..(1usize << m))
                .map(|_| CosetChoice::identity(m, k))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Selection containing the coset of every given error; other blocks
    /// get the identity coset.
    pub fn from_errors(code: &StabilizerCode, errors: &[Spinor]) -> Result<Self, FtError> {
        let m = code.n() - code.k();
        let k = code.k();
        let mut sel = Self::trivial(m, k)?;
        let mut owner: BTreeMap<u64, Spinor> = BTreeMap::new();
        for e in errors {
            let p = code.pullback(e)?;
            let beta = p.alpha().slice(0, m)?;
            let logical = Spinor::hermitian_from(p.zeta().slice(m, k)?, p.alpha().slice(m, k)?)?;
            if beta.is_zero() {
                if !logical.is_identity_class() {
                    return Err(FtError::LogicalError(e.pauli_label()));
                }
                continue;
            }
            let idx = beta.to_index();
            match owner.get(&idx) {
                Some(prev) => {
                    if sel.entries[idx as usize].logical != logical {
                        return Err(FtError::ConflictingErrors(
                            prev.pauli_label(),
                            e.pauli_label(),
                            beta.to_string(),
                        ));
                    }
                }
                None => {
                    owner.insert(idx, *e);
                    sel.entries[idx as usize] = CosetChoice {
                        logical,
                        phase: p.zeta().slice(0, m)?,
                    };
                }
            }
        }
        Ok(sel)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, beta: &BitString) -> &CosetChoice {
        &self.entries[beta.to_index() as usize]
    }

    /// `(syndrome, choice)` for nonzero syndromes in index order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (BitString, &CosetChoice)> {
        let m = self.m;
        self.entries
            .iter()
            .enumerate()
            .skip(1)
            .map(move |(i, c)| (BitString::from_index(m, i as u64).expect("m small"), c))
    }

    /// Same coset in every block (phase strings may differ).
    pub fn same_cosets(&self, other: &Self) -> Option<BitString> {
        for (b, c) in self.iter_nonzero() {
            if other.get(&b).logical != c.logical {
                return Some(b);
            }
        }
        None
    }
}

/// Coefficients `x_{αβ}` over nonzero syndromes (row `α-1`, column `β-1`),
/// with optional block-dependent output phase strings `ξ_{αβ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferAmplitude {
    pub x: DenseOperator,
    pub correlated_phases: Option<Vec<Vec<BitString>>>,
}

impl TransferAmplitude {
    pub fn identity(m: usize) -> Self {
        TransferAmplitude {
            x: DenseOperator::identity((1usize << m) - 1),
            correlated_phases: None,
        }
    }

    /// `T̃_{αβ} = i^{ov(ξ_{αβ},α)} (-i)^{ov(η_β,β)} x_{αβ}`.
    pub fn composite(&self, p_in: &CosetSelection, p_out: &CosetSelection) -> DenseOperator {
        let d = self.x.dim();
        let m = p_in.m();
        let mut t = DenseOperator::zeros(d);
        for a in 0..d {
            let alpha = BitString::from_index(m, a as u64 + 1).expect("m small");
            for b in 0..d {
                let beta = BitString::from_index(m, b as u64 + 1).expect("m small");
                let xi = match &self.correlated_phases {
                    Some(p) => p[a][b],
                    None => p_out.get(&alpha).phase,
                };
                let eta = p_in.get(&beta).phase;
                let ph = oracle::i_pow(ov4(&xi, &alpha)) * oracle::i_pow((4 - ov4(&eta, &beta)) % 4);
                t.set(a, b, ph * self.x.get(a, b));
            }
        }
        t
    }
}

/// Pass/fail with named failures and the largest residual seen.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub failures: Vec<String>,
    pub max_residual: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn note(&mut self, r: f64, tol: f64, what: impl FnOnce() -> String) {
        if r > self.max_residual || r.is_nan() {
            self.max_residual = r;
        }
        if !(r <= tol) {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Debug)]
pub struct FaultTolerantAction {
    code: StabilizerCode,
    gate: LogicalGate,
    p_in: CosetSelection,
    p_out: CosetSelection,
    transfer: TransferAmplitude,
    intrinsic: DenseOperator,
    dense: DenseOperator,
    exact_corrections: Vec<Spinor>,
    corrections: Vec<Spinor>,
}

/// Assemble `Û` block by block.
pub fn assemble_intrinsic(
    m: usize,
    gate: &LogicalGate,
    p_in: &CosetSelection,
    p_out: &CosetSelection,
    transfer: &TransferAmplitude,
) -> Result<DenseOperator, FtError> {
    let k = gate.k();
    let n = m + k;
    if n > oracle::MAX_DENSE_QUBITS {
        return Err(OracleError::Capacity(n).into());
    }
    let bk = 1usize << k;
    let mut u = DenseOperator::zeros(1 << n);
    let put = |u: &mut DenseOperator, a: usize, b: usize, blk: &DenseOperator| {
        for r in 0..bk {
            for c in 0..bk {
                u.set(a * bk + r, b * bk + c, blk.get(r, c));
            }
        }
    };
    put(&mut u, 0, 0, gate.matrix());
    let d = (1usize << m) - 1;
    for a in 0..d {
        let alpha = BitString::from_index(m, a as u64 + 1)?;
        let out = p_out.get(&alpha);
        let s_out = oracle::spinor_matrix(&out.logical)?;
        for b in 0..d {
            let x = transfer.x.get(a, b);
            if x == C0 {
                continue;
            }
            let beta = BitString::from_index(m, b as u64 + 1)?;
            let inp = p_in.get(&beta);
            let xi = match &transfer.correlated_phases {
                Some(p) => p[a][b],
                None => out.phase,
            };
            let coef = oracle::i_pow(ov4(&xi, &alpha)) * oracle::i_pow((4 - ov4(&inp.phase, &beta)) % 4) * x;
            let blk = s_out
                .mul(gate.matrix())?
                .mul(&oracle::spinor_matrix(&inp.logical)?)?
                .scale(coef);
            put(&mut u, a + 1, b + 1, &blk);
        }
    }
    Ok(u)
}

/// Blocks of an intrinsic operator that must vanish: `(α, 0)` and `(0, β)`
/// for nonzero syndromes. Failures name the offending syndrome.
pub fn check_block_structure(m: usize, k: usize, u: &DenseOperator, tol: f64) -> CheckReport {
    let bk = 1usize << k;
    let mut rep = CheckReport::default();
    for s in 1..(1usize << m) {
        let label = BitString::from_index(m, s as u64).expect("m small");
        let mut col0 = 0.0f64;
        let mut row0 = 0.0f64;
        for r in 0..bk {
            for c in 0..bk {
                col0 = col0.max(u.get(s * bk + r, c).norm());
                row0 = row0.max(u.get(r, s * bk + c).norm());
            }
        }
        rep.note(col0, tol, || format!("block (α={label}, 0) is nonzero"));
        rep.note(row0, tol, || format!("block (0, β={label}) is nonzero"));
    }
    rep
}

impl FaultTolerantAction {
    /// Build with explicit selections and transfer amplitude.
    pub fn build(
        code: &StabilizerCode,
        gate: LogicalGate,
        p_in: CosetSelection,
        p_out: CosetSelection,
        transfer: TransferAmplitude,
    ) -> Result<Self, FtError> {
        let n = code.n();
        let k = code.k();
        let m = n - k;
        if gate.k() != k {
            return Err(FtError::GateSize {
                expected: k,
                got: gate.k(),
            });
        }
        if n > oracle::MAX_DENSE_QUBITS {
            return Err(OracleError::Capacity(n).into());
        }
        for sel in [&p_in, &p_out] {
            if sel.m() != m || sel.k() != k {
                return Err(FtError::IncompleteSelection(vec!["selection size".into()]));
            }
        }
        let d = (1usize << m) - 1;
        if transfer.x.dim() != d {
            return Err(FtError::TransferSize {
                expected: d,
                got: transfer.x.dim(),
            });
        }
        let composite = transfer.composite(&p_in, &p_out);
        let r = composite.unitarity_residual();
        if r > TOLERANCE {
            return Err(FtError::NonUnitaryTransfer(r));
        }
        let intrinsic = assemble_intrinsic(m, &gate, &p_in, &p_out, &transfer)?;
        let q = code.encoding().matrix().map_err(CodeError::from)?;
        let dense = q.mul(&intrinsic)?.mul(&q.adjoint())?;
        let mut exact_corrections = vec![Spinor::identity(n)?];
        let mut corrections = vec![Spinor::identity(n)?];
        for (alpha, out) in p_out.iter_nonzero() {
            let g = code.transport(&out.intrinsic_spinor(&alpha)?)?;
            let (tau, mu) = code.partition().lookup(&g)?;
            corrections.push(code.partition().coset_representative(&tau, &mu)?);
            exact_corrections.push(g);
        }
        Ok(FaultTolerantAction {
            code: code.clone(),
            gate,
            p_in,
            p_out,
            transfer,
            intrinsic,
            dense,
            exact_corrections,
            corrections,
        })
    }

    /// Defaults: input cosets from `errors`, output cosets equal to the
    /// input cosets, identity transfer amplitude.
    pub fn with_defaults(code: &StabilizerCode, gate: LogicalGate, errors: &[Spinor]) -> Result<Self, FtError> {
        let p_in = CosetSelection::from_errors(code, errors)?;
        let m = code.n() - code.k();
        Self::build(code, gate, p_in.clone(), p_in, TransferAmplitude::identity(m))
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn gate(&self) -> &LogicalGate {
        &self.gate
    }

    pub fn p_in(&self) -> &CosetSelection {
        &self.p_in
    }

    pub fn p_out(&self) -> &CosetSelection {
        &self.p_out
    }

    pub fn transfer(&self) -> &TransferAmplitude {
        &self.transfer
    }

    /// `Û`.
    pub fn intrinsic(&self) -> &DenseOperator {
        &self.intrinsic
    }

    /// `U = Q_en Û Q_en†`.
    pub fn dense(&self) -> &DenseOperator {
        &self.dense
    }

    /// Minimal-weight correction for each syndrome, in index order (entry 0 is `I`).
    pub fn corrections(&self) -> &[Spinor] {
        &self.corrections
    }

    /// Transported output coset spinors `Q_en F_α Q_en†`, entry 0 is `I`.
    pub fn exact_corrections(&self) -> &[Spinor] {
        &self.exact_corrections
    }

    fn m(&self) -> usize {
        self.code.n() - self.code.k()
    }

    /// `‖Û†Û - I‖`, and the same for the codeword and complement blocks.
    pub fn verify_unitarity(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        let bk = 1usize << self.code.k();
        let full = self.intrinsic.unitarity_residual();
        rep.note(full, TOLERANCE, || "intrinsic action is not unitary".into());
        let lam = self.gate.matrix.unitarity_residual();
        rep.note(lam, TOLERANCE, || "codeword block is not unitary".into());
        let d = self.intrinsic.dim() - bk;
        let mut omega = DenseOperator::zeros(d);
        for r in 0..d {
            for c in 0..d {
                omega.set(r, c, self.intrinsic.get(bk + r, bk + c));
            }
        }
        let om = omega.unitarity_residual();
        rep.note(om, TOLERANCE, || "complement block is not unitary".into());
        let u = self.dense.unitarity_residual();
        rep.note(u, TOLERANCE, || "encoded action is not unitary".into());
        rep
    }

    /// With block-independent output phases, unitarity of `T̃` and of `x`
    /// must agree.
    pub fn transfer_forms_agree(&self) -> bool {
        if self.transfer.correlated_phases.is_some() {
            return true;
        }
        let a = self.transfer.composite(&self.p_in, &self.p_out).unitarity_residual() <= TOLERANCE;
        let b = self.transfer.x.unitarity_residual() <= TOLERANCE;
        a == b
    }

    pub fn verify_eigen_invariance(&self) -> Result<CheckReport, FtError> {
        verify_eigen_invariance_with(&self.code, &self.intrinsic, TOLERANCE)
    }

    /// `U Q|0,i⟩ = Σ_j (M₀₀)_{ji} Q|0,j⟩` for every logical basis state.
    pub fn verify_logical_action(&self) -> Result<CheckReport, FtError> {
        let words = self.code.encoded_codewords()?;
        let mut rep = CheckReport::default();
        for (i, w) in words.iter().enumerate() {
            let lhs = self.dense.apply(w)?;
            let mut rhs = vec![C0; w.len()];
            for (j, wj) in words.iter().enumerate() {
                let a = self.gate.matrix.get(j, i);
                for (r, v) in rhs.iter_mut().zip(wj) {
                    *r += a * v;
                }
            }
            let res = oracle::max_abs_diff(&lhs, &rhs);
            rep.note(res, TOLERANCE, || format!("logical action differs on codeword {i}"));
        }
        Ok(rep)
    }

    /// Checks `U E|ψ⟩ = c Σ_α x_{αβ} F_α U|ψ⟩` for each error and encoded
    /// codeword, where `c` is the predicted unit phase of the error relative
    /// to the selected representative of its coset.
    pub fn verify_correction(&self, errors: &[Spinor]) -> Result<CheckReport, FtError> {
        let m = self.m();
        let k = self.code.k();
        let words = self.code.encoded_codewords()?;
        let uw: Vec<Vec<Complex64>> = words.iter().map(|w| self.dense.apply(w)).collect::<Result<_, _>>()?;
        let mut rep = CheckReport::default();
        for e in errors {
            let p = self.code.pullback(e)?;
            let beta = p.alpha().slice(0, m)?;
            let logical = Spinor::hermitian_from(p.zeta().slice(m, k)?, p.alpha().slice(m, k)?)?;
            let em = oracle::spinor_matrix(e)?;
            if beta.is_zero() {
                if !logical.is_identity_class() {
                    return Err(FtError::LogicalError(e.pauli_label()));
                }
                for (i, w) in words.iter().enumerate() {
                    let lhs = self.dense.apply(&em.apply(w)?)?;
                    let r = oracle::state_phase_residual(&uw[i], &lhs);
                    rep.note(r, TOLERANCE, || format!("{} on codeword {i}", e.pauli_label()));
                }
                continue;
            }
            let sel = self.p_in.get(&beta);
            if sel.logical != logical {
                return Err(FtError::CosetNotSelected {
                    error: e.pauli_label(),
                    block: beta.to_string(),
                });
            }
            let sign = p
                .hermitian_sign()
                .ok_or_else(|| FtError::Code(CodeError::Invalid(format!("{} is not hermitian", e.pauli_label()))))?;
            let eta = p.zeta().slice(0, m)?;
            let c = oracle::i_pow((ov4(&eta, &beta) + 4 - ov4(&sel.phase, &beta)) % 4) * (sign as f64);
            let b = beta.to_index() as usize - 1;
            for (i, w) in words.iter().enumerate() {
                let lhs = self.dense.apply(&em.apply(w)?)?;
                let mut rhs = vec![C0; w.len()];
                for a in 0..(1usize << m) - 1 {
                    let x = self.transfer.x.get(a, b);
                    if x == C0 {
                        continue;
                    }
                    let f = oracle::spinor_matrix(&self.exact_corrections[a + 1])?.apply(&uw[i])?;
                    for (r, v) in rhs.iter_mut().zip(&f) {
                        *r += c * x * v;
                    }
                }
                let res = oracle::max_abs_diff(&lhs, &rhs);
                rep.note(res, TOLERANCE, || format!("{} on codeword {i}", e.pauli_label()));
            }
        }
        Ok(rep)
    }

    /// Noise, encoded action, syndrome measurement and correction on
    /// codeword `i` (encoded basis).
    pub fn correction_cycle<R: Rng + ?Sized>(
        &self,
        noise: &[(Complex64, Spinor)],
        i: usize,
        rng: &mut R,
    ) -> Result<CycleOutcome, FtError> {
        let words = self.code.encoded_codewords()?;
        let w = words.get(i).ok_or(FtError::Codeword(i))?;
        let total: f64 = noise.iter().map(|(y, _)| y.norm_sqr()).sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(FtError::NoiseNorm(total));
        }
        let syn = noise
            .iter()
            .map(|(_, e)| self.code.partition().syndrome(e))
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..syn.len() {
            for b in a + 1..syn.len() {
                if syn[a] == syn[b] {
                    return Err(FtError::NoiseBlocks(a, b, syn[a].to_string()));
                }
            }
        }
        let mut corrupted = vec![C0; w.len()];
        for (y, e) in noise {
            let v = oracle::spinor_matrix(e)?.apply(w)?;
            for (c, x) in corrupted.iter_mut().zip(&v) {
                *c += y * x;
            }
        }
        let mut state = self.dense.apply(&corrupted)?;
        let target = self.dense.apply(w)?;
        let m = self.m();
        let mut syndrome = BitString::zeros(m)?;
        let mut probability = 1.0;
        let dim = state.len();
        for (r, d) in self.code.detectors().detectors().iter().enumerate() {
            let sv = oracle::spinor_matrix(d)?.apply(&state)?;
            let plus: Vec<Complex64> = state.iter().zip(&sv).map(|(a, b)| (a + b) * 0.5).collect();
            let p_plus = oracle::norm(&plus).powi(2);
            let u: f64 = rng.gen();
            let (kept, p) = if u < p_plus {
                (plus, p_plus)
            } else {
                syndrome.set(r, true)?;
                let minus: Vec<Complex64> = state.iter().zip(&sv).map(|(a, b)| (a - b) * 0.5).collect();
                (minus, 1.0 - p_plus)
            };
            probability *= p;
            state = oracle::normalize(&kept);
            debug_assert_eq!(state.len(), dim);
        }
        let idx = syndrome.to_index() as usize;
        let correction = *self
            .corrections
            .get(idx)
            .ok_or_else(|| FtError::Decoding(syndrome.to_string()))?;
        if idx != 0 {
            state = oracle::spinor_matrix(&correction)?.apply(&state)?;
        }
        let fidelity = oracle::inner(&target, &state).norm_sqr();
        Ok(CycleOutcome {
            syndrome,
            correction,
            probability,
            fidelity,
            success: fidelity >= 1.0 - TOLERANCE,
            state,
        })
    }

    /// `u2 · u1`: gate product, transfer-amplitude product, input cosets of
    /// `u1` and output cosets of `u2`.
    pub fn compose(u2: &Self, u1: &Self) -> Result<Self, FtError> {
        if u2.code.detectors() != u1.code.detectors() || u2.code.encoding() != u1.code.encoding() {
            return Err(FtError::ComposeCode);
        }
        if u1.transfer.correlated_phases.is_some() || u2.transfer.correlated_phases.is_some() {
            return Err(FtError::CorrelatedPhases);
        }
        if let Some(b) = u2.p_in.same_cosets(&u1.p_out) {
            return Err(FtError::ComposeCoset(b.to_string()));
        }
        for (beta, c2) in u2.p_in.iter_nonzero() {
            let c1 = u1.p_out.get(&beta);
            if ov4(&c2.phase, &beta) != ov4(&c1.phase, &beta) {
                return Err(FtError::ComposePhase(beta.to_string()));
            }
        }
        let gate = LogicalGate::new(u1.gate.k, u2.gate.matrix.mul(&u1.gate.matrix)?)?;
        let transfer = TransferAmplitude {
            x: u2.transfer.x.mul(&u1.transfer.x)?,
            correlated_phases: None,
        };
        Self::build(&u1.code, gate, u1.p_in.clone(), u2.p_out.clone(), transfer)
    }
}

/// Eigen-invariance of `Q Û Q†` on the encoded codewords for every
/// stabilizer element, plus the vanishing-block structure of `Û`.
pub fn verify_eigen_invariance_with(
    code: &StabilizerCode,
    intrinsic: &DenseOperator,
    tol: f64,
) -> Result<CheckReport, FtError> {
    let m = code.n() - code.k();
    let mut rep = check_block_structure(m, code.k(), intrinsic, tol);
    let q = code.encoding().matrix().map_err(CodeError::from)?;
    let u = q.mul(intrinsic)?.mul(&q.adjoint())?;
    let words = code.encoded_codewords()?;
    let group = code.detectors().group_elements()?;
    for (i, w) in words.iter().enumerate() {
        let uw = u.apply(w)?;
        for s in &group {
            let suw = oracle::spinor_matrix(s)?.apply(&uw)?;
            let r = oracle::max_abs_diff(&suw, &uw);
            rep.note(r, tol, || format!("stabilizer {} moves U|ψ_{i}⟩", s.pauli_label()));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleOutcome {
    pub syndrome: BitString,
    pub correction: Spinor,
    /// Probability of the observed syndrome.
    pub probability: f64,
    pub fidelity: f64,
    pub success: bool,
    pub state: Vec<Complex64>,
}
