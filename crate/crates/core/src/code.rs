//! Stabilizer codes: codewords, syndrome eigenspaces, detectability and
//! correctability, and embedding of classical linear codes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{intrinsic_generator_set, synthesize_encoding, CliffordError, SRotationSequence};
use crate::gf2::{solve, BitString, Gf2Matrix, Solution, XorBasis};
use crate::oracle::{self, DenseOperator, OracleError};
use crate::partition::{BiSubalgebra, DetectorSet, Partition, PartitionError, MAX_ENUM_QUBITS};
use crate::spinor::{Spinor, SpinorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl CodeError {
    pub fn is_capacity(&self) -> bool {
        match self {
            CodeError::Partition(e) => e.is_capacity(),
            CodeError::Clifford(e) => e.is_capacity(),
            CodeError::Oracle(e) => matches!(e, OracleError::Capacity(_)),
            _ => false,
        }
    }
}

impl From<SpinorError> for CodeError {
    fn from(e: SpinorError) -> Self {
        CodeError::Partition(e.into())
    }
}

impl From<crate::gf2::Gf2Error> for CodeError {
    fn from(e: crate::gf2::Gf2Error) -> Self {
        CodeError::Partition(e.into())
    }
}

/// A stabilizer with ordered detectors, an encoding from the intrinsic
/// frame, and the partition whose labels are carried over by that encoding.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    id: String,
    partition: Partition,
    encoding: SRotationSequence,
}

impl StabilizerCode {
    pub fn new(id: impl Into<String>, generators: &[Spinor]) -> Result<Self, CodeError> {
        let n = generators
            .first()
            .map(|g| g.n())
            .ok_or(CodeError::Partition(PartitionError::Empty))?;
        Self::with_n(id, n, generators)
    }

    pub fn with_n(id: impl Into<String>, n: usize, generators: &[Spinor]) -> Result<Self, CodeError> {
        let (c, d) = DetectorSet::from_generators(n, generators)?;
        let encoding = synthesize_encoding(&c, &d)?;
        Self::with_encoding(id, &c, &d, encoding)
    }

    /// Uses a given encoding; it must carry each intrinsic detector onto
    /// the corresponding detector exactly.
    pub fn with_encoding(
        id: impl Into<String>,
        c: &BiSubalgebra,
        d: &DetectorSet,
        encoding: SRotationSequence,
    ) -> Result<Self, CodeError> {
        let n = c.n();
        let k = c.k();
        let m = n - k;
        if encoding.n() != n && !encoding.is_empty() {
            return Err(CodeError::Invalid("encoding qubit count".into()));
        }
        let intrinsic = intrinsic_generator_set(n, k)?;
        for r in 0..m {
            if encoding.transport(&intrinsic[r])? != d.detectors()[r] {
                return Err(CodeError::Invalid(format!(
                    "encoding does not map intrinsic detector {r} onto detector {r}"
                )));
            }
        }
        let blocks = (0..m)
            .map(|r| Ok(encoding.transport(&Spinor::single(n, r, 'X')?)?))
            .collect::<Result<Vec<_>, CodeError>>()?;
        let seeds = (0..2 * k)
            .map(|j| {
                let digit = 2 * k - 1 - j;
                let s = if digit < k {
                    Spinor::single(n, m + digit, 'Z')?
                } else {
                    Spinor::single(n, m + digit - k, 'X')?
                };
                Ok(encoding.transport(&s)?)
            })
            .collect::<Result<Vec<_>, CodeError>>()?;
        let partition = Partition::with_generators(c, d, blocks, seeds)?;
        Ok(StabilizerCode {
            id: id.into(),
            partition,
            encoding,
        })
    }

    /// Code whose stabilizer is generated by Z on the first `n - k` qubits.
    pub fn intrinsic(n: usize, k: usize) -> Result<Self, CodeError> {
        let gens = intrinsic_generator_set(n, k)?;
        let (c, d) = DetectorSet::from_generators(n, &gens[..n - k])?;
        Self::with_encoding(format!("intrinsic-{n}-{k}"), &c, &d, SRotationSequence::empty(n))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn stabilizer(&self) -> &BiSubalgebra {
        self.partition.stabilizer()
    }

    pub fn detectors(&self) -> &DetectorSet {
        self.partition.detectors()
    }

    /// `Q_en`, mapping the intrinsic frame onto this code.
    pub fn encoding(&self) -> &SRotationSequence {
        &self.encoding
    }

    pub fn is_intrinsic(&self) -> bool {
        self.encoding.is_empty()
    }

    /// `Q_en† s Q_en`.
    pub fn pullback(&self, s: &Spinor) -> Result<Spinor, CodeError> {
        Ok(self.encoding.conjugate(s)?)
    }

    /// `Q_en s Q_en†`.
    pub fn transport(&self, s: &Spinor) -> Result<Spinor, CodeError> {
        Ok(self.encoding.transport(s)?)
    }

    fn dense_guard(&self) -> Result<(), CodeError> {
        if self.n() > oracle::MAX_DENSE_QUBITS {
            Err(OracleError::Capacity(self.n()).into())
        } else {
            Ok(())
        }
    }

    pub fn projector(&self) -> Result<DenseOperator, CodeError> {
        Ok(oracle::projector(self.n(), self.detectors().detectors())?)
    }

    /// Orthonormal codewords from projecting basis states in index order.
    pub fn codeword_subspace(&self) -> Result<Vec<Vec<Complex64>>, CodeError> {
        self.dense_guard()?;
        let n = self.n();
        let p = self.projector()?;
        let want = 1usize << self.k();
        let mut out: Vec<Vec<Complex64>> = Vec::new();
        for idx in 0..(1u64 << n) {
            let v = p.apply(&oracle::basis_state(n, &BitString::from_index(n, idx)?)?)?;
            let mut cand = out.clone();
            cand.push(v);
            let gs = oracle::gram_schmidt(&cand, 1e-9);
            if gs.len() > out.len() {
                out = gs;
            }
            if out.len() == want {
                break;
            }
        }
        if out.len() != want {
            return Err(CodeError::Inconsistent(format!(
                "projector rank {} differs from 2^k = {want}",
                out.len()
            )));
        }
        Ok(out)
    }

    /// `Q_en |0⟩|i⟩` for every logical basis label `i`, in index order.
    pub fn encoded_codewords(&self) -> Result<Vec<Vec<Complex64>>, CodeError> {
        self.dense_guard()?;
        let q = self.encoding.matrix()?;
        let n = self.n();
        let m = n - self.k();
        (0..(1u64 << self.k()))
            .map(|i| {
                let beta = BitString::zeros(m)?.concat(&BitString::from_index(self.k(), i)?)?;
                Ok(q.apply(&oracle::basis_state(n, &beta)?)?)
            })
            .collect()
    }

    /// Dense matrix of the block generator product for syndrome `τ`.
    pub fn block_operator(&self, tau: &BitString) -> Result<DenseOperator, CodeError> {
        let s = self.partition.coset_base(tau, &BitString::zeros(2 * self.k())?)?;
        Ok(oracle::spinor_matrix(&s)?)
    }

    /// `H_τ = S_τ H_0` for every syndrome, in index order.
    pub fn eigenspace_decomposition(&self) -> Result<Vec<(BitString, Vec<Vec<Complex64>>)>, CodeError> {
        let h0 = self.codeword_subspace()?;
        let m = self.detectors().len();
        (0..(1u64 << m))
            .map(|t| {
                let tau = BitString::from_index(m, t)?;
                let op = self.block_operator(&tau)?;
                let vs = h0.iter().map(|v| op.apply(v)).collect::<Result<Vec<_>, _>>()?;
                Ok((tau, vs))
            })
            .collect()
    }

    pub fn is_detectable(&self, errors: &[Spinor]) -> Result<DetectabilityReport, CodeError> {
        let mut offending = Vec::new();
        for e in errors {
            if self.partition.syndrome(e)?.is_zero() && !self.stabilizer().contains(e) {
                offending.push(*e);
            }
        }
        Ok(DetectabilityReport {
            detectable: offending.is_empty(),
            offending,
        })
    }

    pub fn is_correctable(&self, errors: &[Spinor]) -> Result<CorrectabilityReport, CodeError> {
        let det = self.is_detectable(errors)?;
        let labels = errors
            .iter()
            .map(|e| self.partition.lookup(e))
            .collect::<Result<Vec<_>, _>>()?;
        let mut offending_pair = None;
        'outer: for a in 0..errors.len() {
            for b in a + 1..errors.len() {
                if labels[a].0 == labels[b].0 && labels[a].1 != labels[b].1 {
                    offending_pair = Some((errors[a], errors[b]));
                    break 'outer;
                }
            }
        }
        Ok(CorrectabilityReport {
            correctable: det.detectable && offending_pair.is_none(),
            undetectable: det.offending,
            offending_pair,
        })
    }

    /// Minimum weight over the seed block outside the stabilizer, and the
    /// largest `t` with `2t + 1 ≤ w_min`. With `k = 0` there is no such
    /// spinor and `t = ⌊(n-1)/2⌋` is reported.
    pub fn max_correctable_t(&self) -> Result<Distance, CodeError> {
        let n = self.n();
        if n > MAX_ENUM_QUBITS {
            return Err(PartitionError::Capacity {
                what: "distance enumeration",
                n,
                limit: MAX_ENUM_QUBITS,
            }
            .into());
        }
        let mut w_min: Option<usize> = None;
        for s in Spinor::all_hermitian(n)? {
            if self.partition.syndrome(&s)?.is_zero() && !self.stabilizer().contains(&s) {
                let w = s.weight();
                w_min = Some(w_min.map_or(w, |m| m.min(w)));
            }
        }
        let t = match w_min {
            Some(w) => (w.max(1) - 1) / 2,
            None => n.saturating_sub(1) / 2,
        };
        Ok(Distance { w_min, t })
    }

    /// `⟨ψ_j| t s |ψ_i⟩` over the encoded codewords.
    pub fn orthogonality_probe(
        &self,
        s: &Spinor,
        t: &Spinor,
        i: &BitString,
        j: &BitString,
    ) -> Result<Complex64, CodeError> {
        let words = self.encoded_codewords()?;
        let op = oracle::spinor_matrix(t)?.mul(&oracle::spinor_matrix(s)?)?;
        let v = op.apply(&words[i.to_index() as usize])?;
        Ok(oracle::inner(&words[j.to_index() as usize], &v))
    }

    /// Report for JSON output.
    pub fn correctability_summary(&self, errors: &[Spinor]) -> Result<CorrectabilitySummary, CodeError> {
        let d = self.max_correctable_t()?;
        let r = self.is_correctable(errors)?;
        Ok(CorrectabilitySummary {
            code_id: self.id.clone(),
            t: d.t,
            w_min: d.w_min,
            offending_pairs: r
                .offending_pair
                .iter()
                .map(|(a, b)| (a.pauli_label(), b.pauli_label()))
                .collect(),
            undetectable: r.undetectable.iter().map(|s| s.pauli_label()).collect(),
        })
    }
}

/// Closed-form `⟨0,j| t s |0,i⟩` for an intrinsic code. Writing
/// `s = S^{ζ∘ς}_{τ∘κ}` and `t = S^{η∘π}_{υ∘ω}` (first `n-k` then last `k`
/// qubits), the value is `(-1)^{ζ·τ + ς·(i+κ) + π·j} δ_{υ,τ} δ_{j, i+κ+ω}`,
/// times the spinors' own phases.
pub fn intrinsic_orthogonality(
    k: usize,
    s: &Spinor,
    t: &Spinor,
    i: &BitString,
    j: &BitString,
) -> Result<Complex64, CodeError> {
    let n = s.n();
    let m = n - k;
    let part = |b: &BitString| -> Result<(BitString, BitString), CodeError> { Ok((b.slice(0, m)?, b.slice(m, k)?)) };
    let (zeta, sigma) = part(s.zeta())?;
    let (tau, kappa) = part(s.alpha())?;
    let (_eta, pi) = part(t.zeta())?;
    let (upsilon, omega) = part(t.alpha())?;
    if upsilon != tau || *j != i.add(&kappa)?.add(&omega)? {
        return Ok(oracle::C0);
    }
    let eps = zeta.dot(&tau)? ^ sigma.dot(&i.add(&kappa)?)? ^ pi.dot(j)?;
    let sign = if eps == 1 { -1.0 } else { 1.0 };
    Ok(oracle::i_pow(s.phase() + t.phase()) * sign)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectabilityReport {
    pub detectable: bool,
    pub offending: Vec<Spinor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectabilityReport {
    pub correctable: bool,
    pub undetectable: Vec<Spinor>,
    pub offending_pair: Option<(Spinor, Spinor)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Distance {
    pub w_min: Option<usize>,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectabilitySummary {
    pub code_id: String,
    pub t: usize,
    pub w_min: Option<usize>,
    pub offending_pairs: Vec<(String, String)>,
    pub undetectable: Vec<String>,
}

/// Errors tagged with their coset labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorSet {
    pub errors: Vec<(Spinor, BitString, BitString)>,
}

impl ErrorSet {
    pub fn tag(p: &Partition, errors: &[Spinor]) -> Result<Self, CodeError> {
        Ok(ErrorSet {
            errors: errors
                .iter()
                .map(|e| {
                    let (t, m) = p.lookup(e)?;
                    Ok((*e, t, m))
                })
                .collect::<Result<_, CodeError>>()?,
        })
    }

    pub fn spinors(&self) -> Vec<Spinor> {
        self.errors.iter().map(|e| e.0).collect()
    }
}

/// All single-qubit X, Y, Z errors on `n` qubits, qubit-major.
pub fn weight_one_errors(n: usize) -> Result<Vec<Spinor>, CodeError> {
    let mut out = Vec::with_capacity(3 * n);
    for q in 0..n {
        for l in ['X', 'Y', 'Z'] {
            out.push(Spinor::single(n, q, l)?);
        }
    }
    Ok(out)
}

/// Classical linear code given by its codeword subgroup `C₀ ⊂ Z₂ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingCode {
    n: usize,
    k: usize,
    subgroup: Vec<BitString>,
    basis: Vec<BitString>,
}

impl HammingCode {
    pub fn new(n: usize, subgroup: Vec<BitString>) -> Result<Self, CodeError> {
        if subgroup.iter().any(|s| s.len() != n) {
            return Err(CodeError::Invalid("codeword length".into()));
        }
        let set: std::collections::BTreeSet<BitString> = subgroup.iter().copied().collect();
        if !set.contains(&BitString::zeros(n)?) {
            return Err(CodeError::Invalid("subgroup lacks the zero string".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.add(b)?) {
                    return Err(CodeError::Invalid(format!("{a} + {b} is not in the subgroup")));
                }
            }
        }
        if !set.len().is_power_of_two() {
            return Err(CodeError::Invalid("subgroup size is not a power of two".into()));
        }
        let mut xb = XorBasis::new(n);
        let basis: Vec<BitString> = set.iter().filter(|v| xb.insert(v.raw()).is_some()).copied().collect();
        Ok(HammingCode {
            n,
            k: basis.len(),
            subgroup: set.into_iter().collect(),
            basis,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn subgroup(&self) -> &[BitString] {
        &self.subgroup
    }

    /// Parity checks: a basis of `{ξ : ξ·α = 0 for all α ∈ C₀}`.
    pub fn parity_checks(&self) -> Result<Vec<BitString>, CodeError> {
        let a = Gf2Matrix::from_rows(self.n, self.basis.clone())?;
        match solve(&a, &BitString::zeros(self.basis.len())?)? {
            Solution::Solved { null_basis, .. } => Ok(null_basis),
            Solution::Infeasible => unreachable!("homogeneous system"),
        }
    }

    /// Classical syndrome of a string against the parity checks.
    pub fn classical_syndrome(&self, beta: &BitString) -> Result<BitString, CodeError> {
        let checks = self.parity_checks()?;
        let mut s = BitString::zeros(checks.len())?;
        for (r, c) in checks.iter().enumerate() {
            s.set(r, c.dot(beta)? == 1)?;
        }
        Ok(s)
    }

    /// Minimum-weight string of each classical syndrome, in syndrome index order.
    pub fn coset_leaders(&self) -> Result<Vec<BitString>, CodeError> {
        let m = self.n - self.k;
        let mut leaders: Vec<Option<BitString>> = vec![None; 1 << m];
        let mut all: Vec<BitString> = BitString::all(self.n)?.collect();
        all.sort_by_key(|b| (b.weight(), *b));
        for b in all {
            let t = self.classical_syndrome(&b)?.to_index() as usize;
            if leaders[t].is_none() {
                leaders[t] = Some(b);
            }
        }
        Ok(leaders.into_iter().map(|l| l.expect("every syndrome occurs")).collect())
    }
}

/// A classical code embedded as a diagonal stabilizer.
#[derive(Clone, Debug)]
pub struct HammingEmbedding {
    pub stabilizer: BiSubalgebra,
    pub partition: Partition,
}

impl HammingEmbedding {
    /// `(τ, μ)` of the bit-flip spinor `S^0_β`.
    pub fn label_of_string(&self, beta: &BitString) -> Result<(BitString, BitString), CodeError> {
        let s = Spinor::new(BitString::zeros(beta.len())?, *beta, 0)?;
        Ok(self.partition.lookup(&s)?)
    }
}

pub fn hamming_embed(h: &HammingCode) -> Result<HammingEmbedding, CodeError> {
    let n = h.n();
    let gens = h
        .parity_checks()?
        .into_iter()
        .map(|xi| Ok(Spinor::new(xi, BitString::zeros(n)?, 0)?))
        .collect::<Result<Vec<_>, CodeError>>()?;
    let (c, d) = DetectorSet::from_generators(n, &gens)?;
    let partition = Partition::predecision(&c, &d)?;
    Ok(HammingEmbedding {
        stabilizer: c,
        partition,
    })
}
