//! Spinor rotations `R(θ) = cos θ + i sin θ · A`, their action on spinors by
//! conjugation, and synthesis of rotation sequences mapping one ordered
//! spinor set onto another.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::gf2::{solve, BitString, Gf2Matrix, XorBasis};
use crate::oracle::{rotation_matrix, DenseOperator, OracleError};
use crate::partition::{BiSubalgebra, DetectorSet, PartitionError};
use crate::spinor::{Spinor, SpinorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliffordError {
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("angle {0} has no symbolic conjugation rule; use the dense oracle")]
    NonSymbolicAngle(f64),
    #[error("rotation axis must be a non-identity spinor")]
    IdentityAxis,
    #[error("commutation profiles differ at ({0}, {1})")]
    ProfileMismatch(usize, usize),
    #[error("member {0} is dependent on earlier members")]
    Dependent(usize),
    #[error("member {0}: source and target differ in hermiticity")]
    PhaseClass(usize),
    #[error("set sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("too many members: {0} > 2n = {1}")]
    TooMany(usize, usize),
    #[error("internal: {0}")]
    Internal(String),
    #[error("encoding count overflow guard: n - k = {0} > 20")]
    CountGuard(usize),
    #[error("cannot parse rotation line {line}: {text:?}")]
    Parse { line: usize, text: String },
}

impl CliffordError {
    pub fn is_capacity(&self) -> bool {
        match self {
            CliffordError::Spinor(e) => e.is_capacity(),
            CliffordError::Partition(e) => e.is_capacity(),
            CliffordError::Oracle(e) => matches!(e, OracleError::Capacity(_)),
            CliffordError::CountGuard(_) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    /// +π/4
    P4,
    /// −π/4
    M4,
    /// +π/2
    P2,
    /// −π/2
    M2,
    /// Any other angle; dense oracle only.
    Other(f64),
}

impl Angle {
    pub fn radians(&self) -> f64 {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        match *self {
            Angle::P4 => FRAC_PI_4,
            Angle::M4 => -FRAC_PI_4,
            Angle::P2 => FRAC_PI_2,
            Angle::M2 => -FRAC_PI_2,
            Angle::Other(t) => t,
        }
    }

    pub fn negate(&self) -> Angle {
        match *self {
            Angle::P4 => Angle::M4,
            Angle::M4 => Angle::P4,
            Angle::P2 => Angle::M2,
            Angle::M2 => Angle::P2,
            Angle::Other(t) => Angle::Other(-t),
        }
    }

    pub fn tag(&self) -> Option<&'static str> {
        match self {
            Angle::P4 => Some("p4"),
            Angle::M4 => Some("m4"),
            Angle::P2 => Some("p2"),
            Angle::M2 => Some("m2"),
            Angle::Other(_) => None,
        }
    }

    pub fn from_tag(tag: &str) -> Option<Angle> {
        match tag {
            "p4" => Some(Angle::P4),
            "m4" => Some(Angle::M4),
            "p2" => Some(Angle::P2),
            "m2" => Some(Angle::M2),
            _ => None,
        }
    }

    pub const SYMBOLIC: [Angle; 4] = [Angle::P4, Angle::M4, Angle::P2, Angle::M2];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SRotation {
    axis: Spinor,
    angle: Angle,
}

impl SRotation {
    pub fn new(axis: Spinor, angle: Angle) -> Result<Self, CliffordError> {
        if axis.is_identity_class() {
            return Err(CliffordError::IdentityAxis);
        }
        Ok(SRotation {
            axis: axis.hermitian(),
            angle,
        })
    }

    pub fn axis(&self) -> &Spinor {
        &self.axis
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn inverse(&self) -> Self {
        SRotation {
            axis: self.axis,
            angle: self.angle.negate(),
        }
    }

    pub fn matrix(&self) -> Result<DenseOperator, CliffordError> {
        Ok(rotation_matrix(&self.axis, self.angle.radians())?)
    }
}

impl fmt::Display for SRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.angle.tag() {
            Some(t) => write!(f, "R {t} {}", self.axis),
            None => write!(f, "R {} {}", self.angle.radians(), self.axis),
        }
    }
}

/// `R† s R`.
pub fn conjugate(r: &SRotation, s: &Spinor) -> Result<Spinor, CliffordError> {
    if s.commutes(&r.axis)? {
        return Ok(*s);
    }
    // R† S R = cos 2θ · S + i sin 2θ · S A for anticommuting S, A
    match r.angle {
        Angle::P2 | Angle::M2 => Ok(s.neg()),
        Angle::P4 => Ok(s.multiply(&r.axis)?.times_i(1)),
        Angle::M4 => Ok(s.multiply(&r.axis)?.times_i(3)),
        Angle::Other(t) => Err(CliffordError::NonSymbolicAngle(t)),
    }
}

/// Ordered product `Q = R_1 R_2 ⋯ R_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SRotationSequence {
    n: usize,
    rotations: Vec<SRotation>,
}

impl SRotationSequence {
    pub fn empty(n: usize) -> Self {
        SRotationSequence {
            n,
            rotations: Vec::new(),
        }
    }

    pub fn new(n: usize, rotations: Vec<SRotation>) -> Result<Self, CliffordError> {
        for r in &rotations {
            if r.axis.n() != n {
                return Err(SpinorError::LengthMismatch(r.axis.n(), n).into());
            }
        }
        Ok(SRotationSequence { n, rotations })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn rotations(&self) -> &[SRotation] {
        &self.rotations
    }

    pub fn push(&mut self, r: SRotation) {
        self.rotations.push(r);
    }

    /// `Q†`.
    pub fn inverse(&self) -> Self {
        SRotationSequence {
            n: self.n,
            rotations: self.rotations.iter().rev().map(|r| r.inverse()).collect(),
        }
    }

    /// `Q† s Q`.
    pub fn conjugate(&self, s: &Spinor) -> Result<Spinor, CliffordError> {
        conjugate_seq(self, s)
    }

    /// `Q s Q†`.
    pub fn transport(&self, s: &Spinor) -> Result<Spinor, CliffordError> {
        conjugate_seq(&self.inverse(), s)
    }

    pub fn matrix(&self) -> Result<DenseOperator, CliffordError> {
        if self.n > crate::oracle::MAX_DENSE_QUBITS {
            return Err(OracleError::Capacity(self.n).into());
        }
        let mut m = DenseOperator::identity(1usize << self.n);
        for r in &self.rotations {
            m = m.mul(&r.matrix()?)?;
        }
        Ok(m)
    }

    /// One rotation per line, `R <tag> <spinor>`.
    pub fn listing(&self) -> String {
        let mut s = format!("# qubits {}\n", self.n);
        for r in &self.rotations {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses a listing; `n` is taken from the `# qubits` header or the
    /// first rotation.
    pub fn parse_listing(text: &str) -> Result<Self, CliffordError> {
        let mut n: Option<usize> = None;
        let mut rots = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(h) = line.strip_prefix("# qubits") {
                n = Some(h.trim().parse().map_err(|_| CliffordError::Parse {
                    line: i + 1,
                    text: raw.to_string(),
                })?);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || CliffordError::Parse {
                line: i + 1,
                text: raw.to_string(),
            };
            let rest = line.strip_prefix("R ").ok_or_else(bad)?.trim_start();
            let (tag, spin) = rest.split_once(char::is_whitespace).ok_or_else(bad)?;
            let angle = Angle::from_tag(tag).ok_or_else(bad)?;
            let axis = Spinor::parse(spin).map_err(|_| bad())?;
            if axis.phase() != axis.hermitian().phase() {
                return Err(bad());
            }
            rots.push(SRotation::new(axis, angle).map_err(|_| bad())?);
        }
        let n = match (n, rots.first()) {
            (Some(n), _) => n,
            (None, Some(r)) => r.axis.n(),
            (None, None) => 0,
        };
        SRotationSequence::new(n, rots)
    }
}

impl FromStr for SRotationSequence {
    type Err = CliffordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SRotationSequence::parse_listing(s)
    }
}

pub fn conjugate_seq(q: &SRotationSequence, s: &Spinor) -> Result<Spinor, CliffordError> {
    let mut out = *s;
    for r in &q.rotations {
        out = conjugate(r, &out)?;
    }
    Ok(out)
}

/// Symmetric anticommutation matrix of an ordered spinor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationProfile {
    pub entries: Vec<Vec<u8>>,
}

impl CommutationProfile {
    pub fn of(set: &[Spinor]) -> Result<Self, CliffordError> {
        let mut entries = vec![vec![0u8; set.len()]; set.len()];
        for p in 0..set.len() {
            for q in 0..set.len() {
                entries[p][q] = set[p].sympl(&set[q])?;
            }
        }
        Ok(CommutationProfile { entries })
    }

    /// First differing `(p, q)` with `p < q`.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for p in 0..self.entries.len() {
            for q in p + 1..self.entries.len() {
                if self.entries[p][q] != other.entries[p][q] {
                    return Some((p, q));
                }
            }
        }
        None
    }
}

/// Lexicographically smallest `A` with `sympl(A, c_i) = b_i` for every constraint.
fn solve_axis(n: usize, constraints: &[(Spinor, u8)]) -> Result<Spinor, CliffordError> {
    let rows = constraints
        .iter()
        .map(|(c, _)| {
            // variables are (ζ_A | α_A); sympl(A, c) = ζ_A·α_c + ζ_c·α_A
            Ok(BitString::from_raw(2 * n, c.sympl_row()?).map_err(SpinorError::from)?)
        })
        .collect::<Result<Vec<_>, CliffordError>>()?;
    let a = Gf2Matrix::from_rows(2 * n, rows).map_err(SpinorError::from)?;
    let b = BitString::from_bools(&constraints.iter().map(|(_, v)| *v == 1).collect::<Vec<_>>())
        .map_err(SpinorError::from)?;
    let x = solve(&a, &b)
        .map_err(SpinorError::from)?
        .lex_min()
        .ok_or_else(|| CliffordError::Internal("parity constraints infeasible".into()))?;
    Ok(Spinor::from_symplectic(n, x.raw())?)
}

fn check_independent(set: &[Spinor]) -> Result<(), CliffordError> {
    let n = set.first().map(|s| s.n()).unwrap_or(0);
    let mut basis = XorBasis::new(2 * n);
    for (i, s) in set.iter().enumerate() {
        if s.n() != n {
            return Err(SpinorError::LengthMismatch(s.n(), n).into());
        }
        if basis.insert(s.symplectic()?).is_none() {
            return Err(CliffordError::Dependent(i));
        }
    }
    Ok(())
}

/// Rotation sequence `Q` with `Q† S1[p] Q = S2[p]` exactly, for ordered
/// independent lists of equal commutation profile (at most `2n` members).
pub fn synthesize_map(s1: &[Spinor], s2: &[Spinor]) -> Result<SRotationSequence, CliffordError> {
    if s1.len() != s2.len() {
        return Err(CliffordError::SizeMismatch(s1.len(), s2.len()));
    }
    let Some(first) = s1.first() else {
        return Ok(SRotationSequence::empty(0));
    };
    let n = first.n();
    if s1.len() > 2 * n {
        return Err(CliffordError::TooMany(s1.len(), 2 * n));
    }
    check_independent(s1)?;
    check_independent(s2)?;
    if let Some((p, q)) = CommutationProfile::of(s1)?.first_difference(&CommutationProfile::of(s2)?) {
        return Err(CliffordError::ProfileMismatch(p, q));
    }
    for (p, (a, b)) in s1.iter().zip(s2).enumerate() {
        if a.is_hermitian() != b.is_hermitian() {
            return Err(CliffordError::PhaseClass(p));
        }
    }

    let mut q = SRotationSequence::empty(n);
    for p in 0..s1.len() {
        let t = s2[p];
        let mut c = conjugate_seq(&q, &s1[p])?;
        if c == t {
            continue;
        }
        let fixed: Vec<(Spinor, u8)> = s2[..p].iter().map(|s| (*s, 0)).collect();
        if c.same_class(&t) {
            // differs by a sign: one half-turn about an axis anticommuting with t only
            let mut cons = fixed.clone();
            cons.push((t, 1));
            let axis = solve_axis(n, &cons)?;
            q.push(SRotation::new(axis, Angle::P2)?);
            continue;
        }
        if c.commutes(&t)? {
            // make c anticommute with t without disturbing earlier members
            let mut cons = fixed.clone();
            cons.push((c, 1));
            cons.push((t, 1));
            let axis = solve_axis(n, &cons)?;
            let r = SRotation::new(axis, Angle::P4)?;
            c = conjugate(&r, &c)?;
            q.push(r);
        }
        let axis = c.bi_add(&t)?;
        let mut done = false;
        for angle in [Angle::P4, Angle::M4] {
            let r = SRotation::new(axis, angle)?;
            if conjugate(&r, &c)? == t {
                q.push(r);
                done = true;
                break;
            }
        }
        if !done {
            return Err(CliffordError::Internal(format!("no quarter turn reaches member {p}")));
        }
    }
    if q.len() > 6 * n {
        return Err(CliffordError::Internal(format!("sequence length {} exceeds 6n", q.len())));
    }
    Ok(q)
}

/// Ordered intrinsic set: `n - k` Z's on the leading qubits, then Z and X on
/// the trailing `k` qubits (X's in mirrored order), then X's on the leading
/// qubits in mirrored order. Member `n + u` pairs with member `n - u + 1`
/// (1-based) and member `n + k + l` with member `n - k - l + 1`.
pub fn intrinsic_generator_set(n: usize, k: usize) -> Result<Vec<Spinor>, CliffordError> {
    if k > n {
        return Err(CliffordError::SizeMismatch(k, n));
    }
    let m = n - k;
    let mut out = Vec::with_capacity(2 * n);
    for l in 0..m {
        out.push(Spinor::single(n, l, 'Z')?);
    }
    for u in 0..k {
        out.push(Spinor::single(n, m + u, 'Z')?);
    }
    for u in 0..k {
        out.push(Spinor::single(n, n - 1 - u, 'X')?);
    }
    for l in 0..m {
        out.push(Spinor::single(n, m - 1 - l, 'X')?);
    }
    Ok(out)
}

/// Intrinsic detectors: Z on each of the first `n - k` qubits.
pub fn intrinsic_detectors(n: usize, k: usize) -> Result<Vec<Spinor>, CliffordError> {
    Ok(intrinsic_generator_set(n, k)?.into_iter().take(n - k).collect())
}

/// Encoding `Q_en` with `Q_en Ẑ_r Q_en† = S_C[r]` for each intrinsic
/// detector `Ẑ_r`.
pub fn synthesize_encoding(c: &BiSubalgebra, detectors: &DetectorSet) -> Result<SRotationSequence, CliffordError> {
    let n = c.n();
    let intrinsic = intrinsic_detectors(n, c.k())?;
    if detectors.len() != intrinsic.len() {
        return Err(CliffordError::SizeMismatch(detectors.len(), intrinsic.len()));
    }
    let q = synthesize_map(&intrinsic, detectors.detectors())?;
    let mut q = q.inverse();
    q.n = n;
    Ok(q)
}

/// `∏_{l=0}^{m-1} (2^m - 2^l)` for `m = n - k`.
pub fn encoding_count(m: usize) -> Result<BigUint, CliffordError> {
    if m > 20 {
        return Err(CliffordError::CountGuard(m));
    }
    let mut out = BigUint::from(1u32);
    let two_m = BigUint::from(1u32) << m;
    for l in 0..m {
        out *= &two_m - (BigUint::from(1u32) << l);
    }
    Ok(out)
}

/// Number of ordered `rank`-tuples of elements of `c` that generate it.
pub fn count_ordered_generating_tuples(c: &BiSubalgebra) -> Result<u64, CliffordError> {
    let m = c.rank();
    if m > 3 {
        return Err(CliffordError::CountGuard(m));
    }
    let elems: Vec<u64> = c
        .elements()?
        .iter()
        .map(|s| s.symplectic())
        .collect::<Result<_, _>>()?;
    fn rec(elems: &[u64], basis: &XorBasis, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        elems
            .iter()
            .filter(|&&e| !basis.contains(e))
            .map(|&e| {
                let mut b = basis.clone();
                b.insert(e);
                rec(elems, &b, left - 1)
            })
            .sum()
    }
    Ok(rec(&elems, &XorBasis::new(2 * c.n()), m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> Spinor {
        Spinor::parse(s).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        let rz = |a| SRotation::new(sp("Z"), a).unwrap();
        assert_eq!(conjugate(&rz(Angle::P4), &sp("Z")).unwrap(), sp("Z"));
        assert_eq!(conjugate(&rz(Angle::P2), &sp("X")).unwrap(), sp("-X"));
        let y = conjugate(&rz(Angle::P4), &sp("X")).unwrap();
        assert!(y.same_class(&sp("Y")));
        assert!(matches!(
            conjugate(&rz(Angle::Other(0.1)), &sp("X")),
            Err(CliffordError::NonSymbolicAngle(_))
        ));
    }

    #[test]
    fn intrinsic_n2_k1() {
        let s: Vec<String> = intrinsic_generator_set(2, 1).unwrap().iter().map(|s| s.pauli_label()).collect();
        assert_eq!(s, vec!["ZI", "IZ", "IX", "XI"]);
    }

    #[test]
    fn intrinsic_pairing() {
        for n in 1..6 {
            for k in 0..=n {
                let s = intrinsic_generator_set(n, k).unwrap();
                for p in 0..2 * n {
                    for q in 0..2 * n {
                        let anti = s[p].sympl(&s[q]).unwrap() == 1;
                        assert_eq!(anti, p + q == 2 * n - 1, "n={n} k={k} p={p} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn swap_zx() {
        let q = synthesize_map(&[sp("Z"), sp("X")], &[sp("X"), sp("Z")]).unwrap();
        assert!(q.len() <= 3);
        assert_eq!(q.conjugate(&sp("Z")).unwrap(), sp("X"));
        assert_eq!(q.conjugate(&sp("X")).unwrap(), sp("Z"));
    }

    #[test]
    fn encoding_zz() {
        let (c, d) = DetectorSet::from_generators(2, &[sp("ZZ")]).unwrap();
        let q = synthesize_encoding(&c, &d).unwrap();
        assert!(q.len() <= 3);
        assert_eq!(q.transport(&sp("ZI")).unwrap(), sp("ZZ"));
        assert_eq!(q.conjugate(&sp("ZZ")).unwrap(), sp("ZI"));
    }

    #[test]
    fn counts() {
        assert_eq!(encoding_count(1).unwrap(), BigUint::from(1u32));
        assert_eq!(encoding_count(2).unwrap(), BigUint::from(6u32));
        assert_eq!(encoding_count(4).unwrap(), BigUint::from(20160u32));
        assert!(encoding_count(21).is_err());
        let (c, _) = DetectorSet::from_generators(3, &[sp("ZZI"), sp("IZZ")]).unwrap();
        assert_eq!(count_ordered_generating_tuples(&c).unwrap(), 6);
    }

    #[test]
    fn listing_roundtrip() {
        let (c, d) = DetectorSet::from_generators(5, &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(sp)).unwrap();
        let q = synthesize_encoding(&c, &d).unwrap();
        let text = q.listing();
        let back = SRotationSequence::parse_listing(&text).unwrap();
        assert_eq!(back, q);
        assert_eq!(back.listing(), text);
    }
}
