//! Abelian spinor sets, syndromes, and the block/coset partition of all
//! spinors induced by a stabilizer.
//!
//! Coset labels come from a linear lookup: every spinor is reduced to the
//! seed block using one fixed generator per syndrome digit, then decomposed
//! over `2k` seed generators modulo the stabilizer. Labels therefore add
//! under bi-addition by construction.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::gf2::{BitString, Gf2Error, Gf2Matrix, Solution, XorBasis};
use crate::spinor::{Spinor, SpinorError, MAX_SYMPLECTIC_QUBITS};

/// Largest `n` for which all `4^n` spinors are enumerated.
pub const MAX_ENUM_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error("generators {0} and {1} anticommute")]
    NonAbelian(usize, usize),
    #[error("no generators given")]
    Empty,
    #[error("generator {0} has {1} qubits, expected {2}")]
    QubitCount(usize, usize, usize),
    #[error("detector {0} is not in the stabilizer")]
    NotInStabilizer(usize),
    #[error("detector {0} is not hermitian")]
    NotHermitian(usize),
    #[error("detector {0} is dependent on earlier detectors")]
    DependentDetector(usize),
    #[error("expected {expected} detectors, got {got}")]
    DetectorCount { expected: usize, got: usize },
    #[error("{what}: n = {n} exceeds limit {limit}")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("invalid generator data: {0}")]
    InvalidGenerators(String),
}

impl PartitionError {
    pub fn is_capacity(&self) -> bool {
        match self {
            PartitionError::Capacity { .. } => true,
            PartitionError::Spinor(e) => e.is_capacity(),
            _ => false,
        }
    }
}

impl From<Gf2Error> for PartitionError {
    fn from(e: Gf2Error) -> Self {
        PartitionError::Spinor(e.into())
    }
}

fn guard(what: &'static str, n: usize, limit: usize) -> Result<(), PartitionError> {
    if n > limit {
        Err(PartitionError::Capacity { what, n, limit })
    } else {
        Ok(())
    }
}

/// Abelian set of spinor classes closed under bi-addition.
#[derive(Clone, Debug)]
pub struct BiSubalgebra {
    n: usize,
    generators: Vec<Spinor>,
    redundant: Vec<usize>,
    basis: XorBasis,
}

impl BiSubalgebra {
    /// Span of the given generators. Dependent generators are dropped and
    /// listed in [`BiSubalgebra::redundant`].
    pub fn build(generators: &[Spinor]) -> Result<Self, PartitionError> {
        let first = generators.first().ok_or(PartitionError::Empty)?;
        Self::build_n(first.n(), generators)
    }

    /// As [`build`](Self::build) but allows an empty list (the trivial set `{I}`).
    pub fn build_n(n: usize, generators: &[Spinor]) -> Result<Self, PartitionError> {
        guard("symplectic operations", n, MAX_SYMPLECTIC_QUBITS)?;
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(PartitionError::QubitCount(i, g.n(), n));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes(&generators[j])? {
                    return Err(PartitionError::NonAbelian(i, j));
                }
            }
        }
        let mut basis = XorBasis::new(2 * n);
        let mut gens = Vec::new();
        let mut redundant = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            if basis.insert(g.symplectic()?).is_some() {
                gens.push(g.hermitian());
            } else {
                redundant.push(i);
            }
        }
        Ok(BiSubalgebra {
            n,
            generators: gens,
            redundant,
            basis,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank `n - k`.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn k(&self) -> usize {
        self.n - self.rank()
    }

    pub fn generators(&self) -> &[Spinor] {
        &self.generators
    }

    /// Indices of input generators that were dependent on earlier ones.
    pub fn redundant(&self) -> &[usize] {
        &self.redundant
    }

    pub fn contains(&self, s: &Spinor) -> bool {
        s.n() == self.n && s.symplectic().map(|v| self.basis.contains(v)).unwrap_or(false)
    }

    /// All `2^{n-k}` elements in hermitian form, canonical order.
    pub fn elements(&self) -> Result<Vec<Spinor>, PartitionError> {
        guard("element enumeration (rank)", self.rank(), 20)?;
        let mut out = vec![Spinor::identity(self.n)?];
        for g in &self.generators {
            let more: Vec<Spinor> = out.iter().map(|e| e.bi_add(g)).collect::<Result<_, _>>()?;
            out.extend(more);
        }
        out.sort_by(Spinor::cmp_canonical);
        Ok(out)
    }
}

/// Ordered independent hermitian members of a stabilizer, phases kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorSet {
    n: usize,
    detectors: Vec<Spinor>,
}

impl DetectorSet {
    pub fn new(c: &BiSubalgebra, detectors: Vec<Spinor>) -> Result<Self, PartitionError> {
        let mut basis = XorBasis::new(2 * c.n());
        for (i, d) in detectors.iter().enumerate() {
            if d.n() != c.n() {
                return Err(PartitionError::QubitCount(i, d.n(), c.n()));
            }
            if !d.is_hermitian() {
                return Err(PartitionError::NotHermitian(i));
            }
            if !c.contains(d) {
                return Err(PartitionError::NotInStabilizer(i));
            }
            if basis.insert(d.symplectic()?).is_none() {
                return Err(PartitionError::DependentDetector(i));
            }
        }
        if detectors.len() != c.rank() {
            return Err(PartitionError::DetectorCount {
                expected: c.rank(),
                got: detectors.len(),
            });
        }
        Ok(DetectorSet {
            n: c.n(),
            detectors,
        })
    }

    /// Stabilizer and detector set from a generator list, dropping dependent
    /// members but keeping the given signs on the rest.
    pub fn from_generators(
        n: usize,
        generators: &[Spinor],
    ) -> Result<(BiSubalgebra, Self), PartitionError> {
        let c = BiSubalgebra::build_n(n, generators)?;
        let kept: Vec<Spinor> = generators
            .iter()
            .enumerate()
            .filter(|(i, _)| !c.redundant().contains(i))
            .map(|(_, g)| *g)
            .collect();
        let d = DetectorSet::new(&c, kept)?;
        Ok((c, d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.detectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detectors.is_empty()
    }

    pub fn detectors(&self) -> &[Spinor] {
        &self.detectors
    }

    pub fn syndrome(&self, s: &Spinor) -> Result<BitString, PartitionError> {
        syndrome(s, self)
    }

    /// Every group element with its exact phase, indexed by the subset
    /// of detectors multiplied (bit r of the index, MSB first, picks detector r).
    pub fn group_elements(&self) -> Result<Vec<Spinor>, PartitionError> {
        guard("group enumeration (rank)", self.len(), 20)?;
        let m = self.len();
        let mut out = Vec::with_capacity(1 << m);
        for idx in 0..(1u64 << m) {
            let sel = BitString::from_index(m, idx)?;
            let mut acc = Spinor::identity(self.n)?;
            for r in sel.ones() {
                acc = acc.multiply(&self.detectors[r])?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Syndrome digit `r` is the symplectic product with detector `r`.
pub fn syndrome(s: &Spinor, detectors: &DetectorSet) -> Result<BitString, PartitionError> {
    let mut out = BitString::zeros(detectors.len())?;
    for (r, d) in detectors.detectors.iter().enumerate() {
        if s.sympl(d)? == 1 {
            out.set(r, true)?;
        }
    }
    Ok(out)
}

/// Generator-level description of the partition.
#[derive(Clone, Debug)]
pub struct Partition {
    stabilizer: BiSubalgebra,
    detectors: DetectorSet,
    block_generators: Vec<Spinor>,
    seed_generators: Vec<Spinor>,
    decomposer: XorBasis,
    label_shift: Spinor,
}

impl Partition {
    /// Partition labelled by the deterministic search order: generators are
    /// taken as the first spinors (by weight, then ζ, then α) that extend
    /// the span found so far.
    pub fn predecision(c: &BiSubalgebra, detectors: &DetectorSet) -> Result<Self, PartitionError> {
        let n = c.n();
        let (blocks, seeds) = if n <= MAX_ENUM_QUBITS {
            ordered_generators(c, detectors)?
        } else {
            linear_generators(c, detectors)?
        };
        Self::with_generators(c, detectors, blocks, seeds)
    }

    /// Partition with explicit generators. `block_generators[r]` must have
    /// syndrome `e_r`; `seed_generators` must be `2k` syndrome-free spinors
    /// independent modulo the stabilizer. Seed generator `j` sets coset digit
    /// `2k - 1 - j`.
    pub fn with_generators(
        c: &BiSubalgebra,
        detectors: &DetectorSet,
        block_generators: Vec<Spinor>,
        seed_generators: Vec<Spinor>,
    ) -> Result<Self, PartitionError> {
        let n = c.n();
        let m = c.rank();
        if block_generators.len() != m {
            return Err(PartitionError::InvalidGenerators(format!(
                "{} block generators for {} detectors",
                block_generators.len(),
                m
            )));
        }
        for (r, b) in block_generators.iter().enumerate() {
            if syndrome(b, detectors)? != BitString::unit(m, r)? {
                return Err(PartitionError::InvalidGenerators(format!(
                    "block generator {r} does not have syndrome e_{r}"
                )));
            }
        }
        if seed_generators.len() != 2 * c.k() {
            return Err(PartitionError::InvalidGenerators(format!(
                "{} seed generators, expected {}",
                seed_generators.len(),
                2 * c.k()
            )));
        }
        let mut decomposer = XorBasis::new(2 * n);
        for (j, g) in seed_generators.iter().enumerate() {
            if !syndrome(g, detectors)?.is_zero() {
                return Err(PartitionError::InvalidGenerators(format!(
                    "seed generator {j} has nonzero syndrome"
                )));
            }
            if decomposer.insert(g.symplectic()?).is_none() {
                return Err(PartitionError::InvalidGenerators(format!(
                    "seed generator {j} is dependent"
                )));
            }
        }
        for d in detectors.detectors() {
            if decomposer.insert(d.symplectic()?).is_none() {
                return Err(PartitionError::InvalidGenerators(
                    "seed generators meet the stabilizer".into(),
                ));
            }
        }
        let mut label_shift = Spinor::identity(n)?;
        for (r, d) in detectors.detectors().iter().enumerate() {
            if d.zeta().dot(d.alpha())? == 1 {
                label_shift = label_shift.bi_add(&block_generators[r])?;
            }
        }
        Ok(Partition {
            stabilizer: c.clone(),
            detectors: detectors.clone(),
            block_generators: block_generators.iter().map(|s| s.hermitian()).collect(),
            seed_generators: seed_generators.iter().map(|s| s.hermitian()).collect(),
            decomposer,
            label_shift,
        })
    }

    pub fn n(&self) -> usize {
        self.stabilizer.n()
    }

    pub fn k(&self) -> usize {
        self.stabilizer.k()
    }

    pub fn stabilizer(&self) -> &BiSubalgebra {
        &self.stabilizer
    }

    pub fn detectors(&self) -> &DetectorSet {
        &self.detectors
    }

    pub fn block_generators(&self) -> &[Spinor] {
        &self.block_generators
    }

    pub fn seed_generators(&self) -> &[Spinor] {
        &self.seed_generators
    }

    pub fn syndrome(&self, s: &Spinor) -> Result<BitString, PartitionError> {
        syndrome(s, &self.detectors)
    }

    /// `(τ, μ)` of the coset containing `s`.
    pub fn lookup(&self, s: &Spinor) -> Result<(BitString, BitString), PartitionError> {
        let tau = self.syndrome(s)?;
        let mut v = s.symplectic()?;
        for r in tau.ones() {
            v ^= self.block_generators[r].symplectic()?;
        }
        let combo = self
            .decomposer
            .decompose(v)
            .expect("reduced spinor lies in the seed block");
        let k2 = 2 * self.k();
        let mut mu = BitString::zeros(k2)?;
        for j in 0..k2 {
            if combo >> j & 1 == 1 {
                mu.set(k2 - 1 - j, true)?;
            }
        }
        Ok((tau, mu))
    }

    /// Some member of coset `(τ, μ)`.
    pub fn coset_base(&self, tau: &BitString, mu: &BitString) -> Result<Spinor, PartitionError> {
        let k2 = 2 * self.k();
        if tau.len() != self.detectors.len() || mu.len() != k2 {
            return Err(PartitionError::InvalidGenerators("label length".into()));
        }
        let mut s = Spinor::identity(self.n())?;
        for r in tau.ones() {
            s = s.bi_add(&self.block_generators[r])?;
        }
        for i in mu.ones() {
            s = s.bi_add(&self.seed_generators[k2 - 1 - i])?;
        }
        Ok(s)
    }

    /// All members of coset `(τ, μ)` in canonical order.
    pub fn coset_elements(&self, tau: &BitString, mu: &BitString) -> Result<Vec<Spinor>, PartitionError> {
        let base = self.coset_base(tau, mu)?;
        let mut out: Vec<Spinor> = self
            .stabilizer
            .elements()?
            .iter()
            .map(|c| base.bi_add(c))
            .collect::<Result<_, _>>()?;
        out.sort_by(Spinor::cmp_canonical);
        Ok(out)
    }

    /// Minimal element of the coset under (weight, ζ, α).
    pub fn coset_representative(&self, tau: &BitString, mu: &BitString) -> Result<Spinor, PartitionError> {
        Ok(self.coset_elements(tau, mu)?[0])
    }

    /// Conditioned-subspace label in Z₂. The stabilizer itself has label 1,
    /// and `ε(s ⋄ t) = ε(s) + ε(t) + 1 + sympl(s, t)`.
    pub fn epsilon(&self, s: &Spinor) -> Result<u8, PartitionError> {
        let q = s.zeta().dot(s.alpha())? ^ s.sympl(&self.label_shift)?;
        Ok(1 ^ q)
    }

    /// Full table of blocks and cosets (`n ≤ 8`).
    pub fn table(&self) -> Result<PartitionTable, PartitionError> {
        let n = self.n();
        guard("full partition enumeration", n, MAX_ENUM_QUBITS)?;
        let m = self.detectors.len();
        let k2 = 2 * self.k();
        let mut blocks: Vec<Block> = (0..(1u64 << m))
            .map(|t| {
                let tau = BitString::from_index(m, t).expect("m ≤ 8");
                Block {
                    tau,
                    cosets: (0..(1u64 << k2))
                        .map(|u| Coset {
                            tau,
                            mu: BitString::from_index(k2, u).expect("2k ≤ 16"),
                            representative: Spinor::identity(n).expect("n ≤ 8"),
                            elements: Vec::new(),
                        })
                        .collect(),
                }
            })
            .collect();
        for s in Spinor::all_sorted(n)? {
            let (tau, mu) = self.lookup(&s)?;
            blocks[tau.to_index() as usize].cosets[mu.to_index() as usize]
                .elements
                .push(s);
        }
        for b in blocks.iter_mut() {
            for c in b.cosets.iter_mut() {
                c.representative = c.elements[0];
            }
        }
        Ok(PartitionTable { blocks })
    }

    /// Split a coset into its two conditioned subspaces.
    pub fn conditioned_split(&self, coset: &Coset) -> Result<ConditionedSubspacePair, PartitionError> {
        let mut halves: [Vec<Spinor>; 2] = [Vec::new(), Vec::new()];
        for s in &coset.elements {
            halves[self.epsilon(s)? as usize].push(*s);
        }
        Ok(ConditionedSubspacePair {
            tau: coset.tau,
            mu: coset.mu,
            halves,
        })
    }

    /// Checks, for each pair, that the coset labels add and that the
    /// conditioned-subspace labels obey the closure rule; anticommuting
    /// pairs are the non-vanishing commutators.
    pub fn verify_closure<I>(&self, pairs: I) -> Result<ClosureReport, PartitionError>
    where
        I: IntoIterator<Item = (Spinor, Spinor)>,
    {
        let mut report = ClosureReport::default();
        for (s, t) in pairs {
            report.checked += 1;
            let (ts, ms) = self.lookup(&s)?;
            let (tt, mt) = self.lookup(&t)?;
            let st = s.bi_add(&t)?;
            let (tst, mst) = self.lookup(&st)?;
            if tst != ts.add(&tt)? || mst != ms.add(&mt)? {
                report.violations.push(ClosureViolation {
                    s,
                    t,
                    kind: ViolationKind::CosetLabel,
                });
                continue;
            }
            let anti = s.sympl(&t)?;
            if anti == 1 {
                report.commutators += 1;
            }
            let expected = self.epsilon(&s)? ^ self.epsilon(&t)? ^ 1 ^ anti;
            if self.epsilon(&st)? != expected {
                report.violations.push(ClosureViolation {
                    s,
                    t,
                    kind: ViolationKind::ConditionedLabel,
                });
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub tau: BitString,
    pub mu: BitString,
    pub representative: Spinor,
    pub elements: Vec<Spinor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub tau: BitString,
    /// Indexed by `μ` read as a binary number.
    pub cosets: Vec<Coset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    /// Indexed by `τ` read as a binary number.
    pub blocks: Vec<Block>,
}

impl PartitionTable {
    pub fn seed_block(&self) -> &Block {
        &self.blocks[0]
    }

    pub fn coset(&self, tau: &BitString, mu: &BitString) -> &Coset {
        &self.blocks[tau.to_index() as usize].cosets[mu.to_index() as usize]
    }

    pub fn cosets(&self) -> impl Iterator<Item = &Coset> {
        self.blocks.iter().flat_map(|b| b.cosets.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionedSubspacePair {
    pub tau: BitString,
    pub mu: BitString,
    /// Indexed by the label ε.
    pub halves: [Vec<Spinor>; 2],
}

impl ConditionedSubspacePair {
    /// `(larger, smaller)` half; for seed-block cosets the second is empty.
    pub fn sizes(&self) -> (usize, usize) {
        let (a, b) = (self.halves[0].len(), self.halves[1].len());
        (a.max(b), a.min(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    CosetLabel,
    ConditionedLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub s: Spinor,
    pub t: Spinor,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub checked: usize,
    /// Pairs whose commutator does not vanish.
    pub commutators: usize,
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn ordered_generators(
    c: &BiSubalgebra,
    detectors: &DetectorSet,
) -> Result<(Vec<Spinor>, Vec<Spinor>), PartitionError> {
    let n = c.n();
    let m = c.rank();
    let all = Spinor::all_sorted(n)?;
    let mut blocks: Vec<Option<Spinor>> = vec![None; m];
    let mut seeds = Vec::new();
    let mut span = XorBasis::new(2 * n);
    for g in c.generators() {
        span.insert(g.symplectic()?);
    }
    for s in &all {
        let tau = syndrome(s, detectors)?;
        if tau.weight() == 1 {
            let r = tau.ones().next().expect("weight one");
            if blocks[r].is_none() {
                blocks[r] = Some(*s);
            }
        } else if tau.is_zero() && seeds.len() < 2 * c.k() && span.insert(s.symplectic()?).is_some() {
            seeds.push(*s);
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|b| b.ok_or_else(|| PartitionError::InvalidGenerators("missing block".into())))
        .collect::<Result<_, _>>()?;
    Ok((blocks, seeds))
}

fn linear_generators(
    c: &BiSubalgebra,
    detectors: &DetectorSet,
) -> Result<(Vec<Spinor>, Vec<Spinor>), PartitionError> {
    let n = c.n();
    let m = c.rank();
    let rows = detectors
        .detectors()
        .iter()
        .map(|d| Ok(BitString::from_raw(2 * n, d.sympl_row()?)?))
        .collect::<Result<Vec<_>, PartitionError>>()?;
    let a = Gf2Matrix::from_rows(2 * n, rows)?;
    let mut blocks = Vec::with_capacity(m);
    for r in 0..m {
        let sol = crate::gf2::solve(&a, &BitString::unit(m, r)?)?;
        let x = sol
            .lex_min()
            .ok_or_else(|| PartitionError::InvalidGenerators("infeasible syndrome".into()))?;
        blocks.push(Spinor::from_symplectic(n, x.raw())?);
    }
    let null = match crate::gf2::solve(&a, &BitString::zeros(m)?)? {
        Solution::Solved { null_basis, .. } => null_basis,
        Solution::Infeasible => unreachable!("homogeneous system"),
    };
    let mut cands: Vec<Spinor> = null
        .iter()
        .map(|v| Spinor::from_symplectic(n, v.raw()))
        .collect::<Result<_, _>>()?;
    cands.sort_by(Spinor::cmp_canonical);
    let mut span = XorBasis::new(2 * n);
    for g in c.generators() {
        span.insert(g.symplectic()?);
    }
    let seeds = cands
        .into_iter()
        .filter(|s| span.insert(s.symplectic().expect("n checked")).is_some())
        .collect();
    Ok((blocks, seeds))
}

/// Every maximal abelian set containing `c`, found by adjoining commuting
/// seed-block elements one at a time. Each result is returned as a sorted
/// element list.
pub fn cartan_supersets(c: &BiSubalgebra) -> Result<Vec<Vec<Spinor>>, PartitionError> {
    guard("superset enumeration (k)", c.k(), 3)?;
    guard("superset enumeration (n)", c.n(), MAX_ENUM_QUBITS)?;
    let n = c.n();
    let all: Vec<u64> = (0..(1u64 << (2 * n))).collect();
    let start: Vec<u64> = c
        .elements()?
        .iter()
        .map(|s| s.symplectic())
        .collect::<Result<_, _>>()?;
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut stack = vec![start];
    let sympl = |a: u64, b: u64| -> u32 {
        let m = (1u64 << n) - 1;
        (((a & m) & (b >> n)) ^ ((b & m) & (a >> n))).count_ones() & 1
    };
    while let Some(mut set) = stack.pop() {
        set.sort_unstable();
        if !seen.insert(set.clone()) {
            continue;
        }
        if set.len() == 1 << n {
            found.insert(set);
            continue;
        }
        let members: std::collections::HashSet<u64> = set.iter().copied().collect();
        for &v in &all {
            if members.contains(&v) || set.iter().any(|&e| sympl(e, v) == 1) {
                continue;
            }
            let mut next = set.clone();
            next.extend(set.iter().map(|e| e ^ v));
            stack.push(next);
        }
    }
    found
        .into_iter()
        .map(|set| {
            let mut v: Vec<Spinor> = set
                .into_iter()
                .map(|x| Spinor::from_symplectic(n, x))
                .collect::<Result<_, _>>()?;
            v.sort_by(Spinor::cmp_canonical);
            Ok(v)
        })
        .collect()
}

/// Number of subgroups of index `2^k` in Z₂ⁿ found by enumeration (`n ≤ 4`).
pub fn count_subgroups_of_index(n: usize, k: usize) -> Result<usize, PartitionError> {
    guard("subgroup enumeration", n, 4)?;
    if k > n {
        return Ok(0);
    }
    let target = 1usize << (n - k);
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut stack = vec![vec![0u64]];
    while let Some(set) = stack.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        if set.len() == target {
            found.insert(set);
            continue;
        }
        for v in 0..(1u64 << n) {
            if set.contains(&v) {
                continue;
            }
            let mut next: Vec<u64> = set.clone();
            next.extend(set.iter().map(|e| e ^ v));
            next.sort_unstable();
            stack.push(next);
        }
    }
    Ok(found.len())
}

/// Gaussian binomial coefficient `[n choose m]_2`.
pub fn gaussian_binomial(n: usize, m: usize) -> u128 {
    if m > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..m {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// `∏_{s=1..k} (2^s - 1)`.
pub fn cartan_superset_formula(k: usize) -> u128 {
    (1..=k).map(|s| (1u128 << s) - 1).product()
}

/// `∏_{s=1..k} (2^s + 1)`, the number of maximal abelian supersets found
/// by enumeration.
pub fn cartan_superset_count(k: usize) -> u128 {
    (1..=k).map(|s| (1u128 << s) + 1).product()
}

/// Groups spinors by their `(τ, μ)` labels; used to compare against the table.
pub fn group_by_label(
    p: &Partition,
    spinors: &[Spinor],
) -> Result<HashMap<(BitString, BitString), Vec<Spinor>>, PartitionError> {
    let mut out: HashMap<(BitString, BitString), Vec<Spinor>> = HashMap::new();
    for s in spinors {
        out.entry(p.lookup(s)?).or_default().push(*s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> Spinor {
        Spinor::parse(s).unwrap()
    }

    fn code(gens: &[&str]) -> (BiSubalgebra, DetectorSet) {
        let g: Vec<Spinor> = gens.iter().map(|s| sp(s)).collect();
        DetectorSet::from_generators(g[0].n(), &g).unwrap()
    }

    #[test]
    fn zz_bisubalgebra() {
        let (c, _) = code(&["ZZ"]);
        assert_eq!(c.k(), 1);
        let e: Vec<String> = c.elements().unwrap().iter().map(|s| s.pauli_label()).collect();
        assert_eq!(e, vec!["II", "ZZ"]);
    }

    #[test]
    fn nonabelian_rejected() {
        let err = BiSubalgebra::build(&[sp("X"), sp("Z")]).unwrap_err();
        assert_eq!(err, PartitionError::NonAbelian(0, 1));
    }

    #[test]
    fn dependent_reported() {
        let c = BiSubalgebra::build(&[sp("ZZI"), sp("IZZ"), sp("ZIZ")]).unwrap();
        assert_eq!(c.rank(), 2);
        assert_eq!(c.redundant(), &[2]);
    }

    #[test]
    fn syndrome_xi() {
        let (_, d) = code(&["ZZ"]);
        assert_eq!(syndrome(&sp("XI"), &d).unwrap().to_string(), "1");
        assert_eq!(syndrome(&sp("ZZ"), &d).unwrap().to_string(), "0");
    }

    #[test]
    fn n1_cartan_partition() {
        let (c, d) = code(&["Z"]);
        let p = Partition::predecision(&c, &d).unwrap();
        let t = p.table().unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.blocks[0].cosets.len(), 1);
        let b1: Vec<String> = t.blocks[1].cosets[0].elements.iter().map(|s| s.pauli_label()).collect();
        assert_eq!(b1, vec!["X", "Y"]);
    }

    #[test]
    fn zz_partition_counts() {
        let (c, d) = code(&["ZZ"]);
        let p = Partition::predecision(&c, &d).unwrap();
        let t = p.table().unwrap();
        assert_eq!(t.blocks.len(), 2);
        for b in &t.blocks {
            assert_eq!(b.cosets.len(), 4);
            for cs in &b.cosets {
                assert_eq!(cs.elements.len(), 2);
            }
        }
        // first seed generator sets the last coset digit
        let (tau, mu) = p.lookup(&p.seed_generators()[0]).unwrap();
        assert!(tau.is_zero());
        assert_eq!(mu.to_string(), "01");
    }

    #[test]
    fn split_xi_coset() {
        let (c, d) = code(&["ZZ"]);
        let p = Partition::predecision(&c, &d).unwrap();
        let (tau, mu) = p.lookup(&sp("XI")).unwrap();
        let t = p.table().unwrap();
        let pair = p.conditioned_split(t.coset(&tau, &mu)).unwrap();
        assert_eq!(pair.sizes(), (1, 1));
        for cs in &t.blocks[0].cosets {
            assert_eq!(p.conditioned_split(cs).unwrap().sizes(), (2, 0));
        }
    }

    #[test]
    fn stabilizer_label_is_one() {
        let (c, d) = code(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
        let p = Partition::predecision(&c, &d).unwrap();
        for e in c.elements().unwrap() {
            assert_eq!(p.epsilon(&e).unwrap(), 1);
            let (t, m) = p.lookup(&e).unwrap();
            assert!(t.is_zero() && m.is_zero());
        }
    }

    #[test]
    fn linear_and_ordered_agree_on_structure() {
        let (c, d) = code(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
        let (b, s) = linear_generators(&c, &d).unwrap();
        let p = Partition::with_generators(&c, &d, b, s).unwrap();
        let t = p.table().unwrap();
        assert!(t.cosets().all(|cs| cs.elements.len() == 16));
    }

    #[test]
    fn formulas() {
        assert_eq!(cartan_superset_formula(0), 1);
        assert_eq!(cartan_superset_formula(2), 3);
        assert_eq!(cartan_superset_count(1), 3);
        assert_eq!(gaussian_binomial(3, 1), 7);
        assert_eq!(gaussian_binomial(4, 2), 35);
    }

    #[test]
    fn subgroup_count_matches_gaussian_binomial() {
        for n in 1..=4 {
            for k in 0..=n {
                assert_eq!(
                    count_subgroups_of_index(n, k).unwrap() as u128,
                    gaussian_binomial(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }
}
