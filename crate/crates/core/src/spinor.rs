//! Phase-tagged Pauli operators in (ζ, α) form.
//!
//! `i^p S^ζ_α` acts on a qubit register as `i^p Z^ζ X^α`, so
//! `S^ζ_α |β⟩ = (-1)^{ζ·(α+β)} |α+β⟩`. Per qubit: `S^0_0 = I`, `S^1_0 = Z`,
//! `S^0_1 = X`, `S^1_1 = ZX = iY`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::gf2::{BitString, Gf2Error};

/// Largest register for operations that work on the concatenated 2n-bit vector.
pub const MAX_SYMPLECTIC_QUBITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinorError {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cannot parse spinor {0:?}")]
    Parse(String),
    #[error("{0} qubits exceeds capacity of {1}")]
    Capacity(usize, usize),
}

impl SpinorError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, SpinorError::Capacity(..))
    }
}

impl From<Gf2Error> for SpinorError {
    fn from(e: Gf2Error) -> Self {
        match e {
            Gf2Error::LengthMismatch(a, b) => SpinorError::LengthMismatch(a, b),
            Gf2Error::Capacity(n) => SpinorError::Capacity(n, crate::gf2::MAX_BITS),
            Gf2Error::Parse(s) => SpinorError::Parse(s),
            Gf2Error::Index { index, len } => {
                SpinorError::Parse(format!("index {index} out of range for {len}"))
            }
        }
    }
}

/// `i^phase · S^zeta_alpha`, phase taken mod 4.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spinor {
    zeta: BitString,
    alpha: BitString,
    phase: u8,
}

fn ov(a: &BitString, b: &BitString) -> usize {
    (a.raw() & b.raw()).count_ones() as usize
}

fn par(a: &BitString, b: &BitString) -> u8 {
    (ov(a, b) & 1) as u8
}

impl Spinor {
    pub fn new(zeta: BitString, alpha: BitString, phase: u8) -> Result<Self, SpinorError> {
        if zeta.len() != alpha.len() {
            return Err(SpinorError::LengthMismatch(zeta.len(), alpha.len()));
        }
        Ok(Spinor {
            zeta,
            alpha,
            phase: phase % 4,
        })
    }

    /// Hermitian-canonical spinor with the given exponents.
    pub fn hermitian_from(zeta: BitString, alpha: BitString) -> Result<Self, SpinorError> {
        Ok(Spinor::new(zeta, alpha, 0)?.hermitian())
    }

    pub fn identity(n: usize) -> Result<Self, SpinorError> {
        let z = BitString::zeros(n)?;
        Ok(Spinor {
            zeta: z,
            alpha: z,
            phase: 0,
        })
    }

    /// Single-qubit Z or X (or the hermitian Y) at `qubit`.
    pub fn single(n: usize, qubit: usize, letter: char) -> Result<Self, SpinorError> {
        let mut s = Spinor::identity(n)?;
        let (z, x) = match letter {
            'I' => (false, false),
            'Z' => (true, false),
            'X' => (false, true),
            'Y' => (true, true),
            _ => return Err(SpinorError::Parse(letter.to_string())),
        };
        s.zeta.set(qubit, z)?;
        s.alpha.set(qubit, x)?;
        Ok(s.hermitian())
    }

    pub fn n(&self) -> usize {
        self.zeta.len()
    }

    pub fn zeta(&self) -> &BitString {
        &self.zeta
    }

    pub fn alpha(&self) -> &BitString {
        &self.alpha
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Spinor {
            phase: phase % 4,
            ..*self
        }
    }

    /// Multiply by `i^k`.
    pub fn times_i(&self, k: u8) -> Self {
        self.with_phase(self.phase + k)
    }

    pub fn neg(&self) -> Self {
        self.times_i(2)
    }

    pub fn is_identity_class(&self) -> bool {
        self.zeta.is_zero() && self.alpha.is_zero()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (self.zeta.raw() | self.alpha.raw()).count_ones() as usize
    }

    fn check(&self, other: &Self) -> Result<(), SpinorError> {
        if self.n() != other.n() {
            Err(SpinorError::LengthMismatch(self.n(), other.n()))
        } else {
            Ok(())
        }
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self, SpinorError> {
        self.check(other)?;
        // Z^ζ X^α Z^η X^β = (-1)^{α·η} Z^{ζ+η} X^{α+β}
        let phase = self.phase as usize + other.phase as usize + 2 * par(&self.alpha, &other.zeta) as usize;
        Ok(Spinor {
            zeta: self.zeta.add(&other.zeta)?,
            alpha: self.alpha.add(&other.alpha)?,
            phase: (phase % 4) as u8,
        })
    }

    /// Symplectic form: 0 if the operators commute, 1 if they anticommute.
    pub fn sympl(&self, other: &Self) -> Result<u8, SpinorError> {
        self.check(other)?;
        Ok(par(&self.zeta, &other.alpha) ^ par(&other.zeta, &self.alpha))
    }

    pub fn commutes(&self, other: &Self) -> Result<bool, SpinorError> {
        Ok(self.sympl(other)? == 0)
    }

    /// Hermitian representative `(-i)^{ζ·α} S^ζ_α` of the same class.
    pub fn hermitian(&self) -> Self {
        let o = ov(&self.zeta, &self.alpha);
        Spinor {
            phase: ((4 - o % 4) % 4) as u8,
            ..*self
        }
    }

    /// True if the operator is hermitian, i.e. `±` the canonical form.
    pub fn is_hermitian(&self) -> bool {
        (self.phase + 4 - self.hermitian().phase) % 2 == 0
    }

    /// Sign relative to the hermitian canonical form, if hermitian.
    pub fn hermitian_sign(&self) -> Option<i8> {
        match (self.phase + 4 - self.hermitian().phase) % 4 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Exponent sum with phases discarded, returned in hermitian form.
    pub fn bi_add(&self, other: &Self) -> Result<Self, SpinorError> {
        self.check(other)?;
        Ok(Spinor {
            zeta: self.zeta.add(&other.zeta)?,
            alpha: self.alpha.add(&other.alpha)?,
            phase: 0,
        }
        .hermitian())
    }

    pub fn adjoint(&self) -> Self {
        // (Z^ζ X^α)† = X^α Z^ζ = (-1)^{ζ·α} Z^ζ X^α
        let p = (4 - self.phase as usize) + 2 * par(&self.zeta, &self.alpha) as usize;
        Spinor {
            phase: (p % 4) as u8,
            ..*self
        }
    }

    /// Same exponents, any phase.
    pub fn same_class(&self, other: &Self) -> bool {
        self.zeta == other.zeta && self.alpha == other.alpha
    }

    /// Image of a computational basis state: returns `(phase, β + α)` with
    /// the operator's action being `i^phase |β+α⟩`.
    pub fn apply_to_basis(&self, beta: &BitString) -> Result<(u8, BitString), SpinorError> {
        let out = beta.add(&self.alpha)?;
        let p = self.phase as usize + 2 * par(&self.zeta, &out) as usize;
        Ok(((p % 4) as u8, out))
    }

    /// Ordering used wherever a canonical choice among spinors is needed:
    /// weight first, then ζ, then α, lexicographically.
    pub fn order_key(&self) -> (usize, BitString, BitString) {
        (self.weight(), self.zeta, self.alpha)
    }

    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }

    /// Concatenated `(ζ | α)` vector: bit `i` is `ζ_i`, bit `n+i` is `α_i`.
    pub fn symplectic(&self) -> Result<u64, SpinorError> {
        let n = self.n();
        if n > MAX_SYMPLECTIC_QUBITS {
            return Err(SpinorError::Capacity(n, MAX_SYMPLECTIC_QUBITS));
        }
        Ok(self.zeta.raw() | (self.alpha.raw() << n))
    }

    /// Hermitian spinor from a concatenated vector.
    pub fn from_symplectic(n: usize, v: u64) -> Result<Self, SpinorError> {
        if n > MAX_SYMPLECTIC_QUBITS {
            return Err(SpinorError::Capacity(n, MAX_SYMPLECTIC_QUBITS));
        }
        let m = if n == 0 { 0 } else { (1u64 << n) - 1 };
        Spinor::hermitian_from(
            BitString::from_raw(n, v & m)?,
            BitString::from_raw(n, (v >> n) & m)?,
        )
    }

    /// The symplectic row such that `row · x = sympl(self, x)` for a
    /// concatenated vector `x`.
    pub fn sympl_row(&self) -> Result<u64, SpinorError> {
        let n = self.n();
        if n > MAX_SYMPLECTIC_QUBITS {
            return Err(SpinorError::Capacity(n, MAX_SYMPLECTIC_QUBITS));
        }
        Ok(self.alpha.raw() | (self.zeta.raw() << n))
    }

    /// Every hermitian spinor class on `n` qubits, unsorted.
    pub fn all_hermitian(n: usize) -> Result<impl Iterator<Item = Spinor>, SpinorError> {
        if n > 12 {
            return Err(SpinorError::Capacity(n, 12));
        }
        Ok((0..(1u64 << (2 * n))).map(move |v| Spinor::from_symplectic(n, v).expect("n checked")))
    }

    /// Every hermitian spinor class on `n` qubits in canonical order.
    pub fn all_sorted(n: usize) -> Result<Vec<Spinor>, SpinorError> {
        let mut v: Vec<Spinor> = Spinor::all_hermitian(n)?.collect();
        v.sort_by(Spinor::cmp_canonical);
        Ok(v)
    }

    /// Pauli-letter form with a phase prefix (`""`, `"i"`, `"-"`, `"-i"`).
    pub fn pauli_label(&self) -> String {
        // i^p Z^ζ X^α = i^{p + #Y} (product of I, X, Y, Z letters)
        let y = ov(&self.zeta, &self.alpha);
        let prefix = match (self.phase as usize + y) % 4 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        let mut s = String::from(prefix);
        for i in 0..self.n() {
            s.push(match (self.zeta.get(i), self.alpha.get(i)) {
                (false, false) => 'I',
                (true, false) => 'Z',
                (false, true) => 'X',
                (true, true) => 'Y',
            });
        }
        s
    }

    /// Parses the canonical `i^p S^{ζ}_{α}` form or a Pauli-letter string
    /// with an optional `+`, `-`, `i`, `-i` prefix.
    pub fn parse(text: &str) -> Result<Self, SpinorError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || SpinorError::Parse(text.to_string());
        if let Some(pos) = t.find("S^{") {
            let (pre, body) = t.split_at(pos);
            let phase: u8 = match pre {
                "" | "+" => 0,
                "-" => 2,
                "i" | "+i" => 1,
                "-i" => 3,
                _ => {
                    let p = pre.strip_prefix("i^").ok_or_else(err)?;
                    p.parse::<u8>().map_err(|_| err())? % 4
                }
            };
            let body = body.strip_prefix("S^{").ok_or_else(err)?;
            let (z, rest) = body.split_once("}_{").ok_or_else(err)?;
            let a = rest.strip_suffix('}').ok_or_else(err)?;
            if z.len() != a.len() {
                return Err(err());
            }
            let z = BitString::parse(z).map_err(|_| err())?;
            let a = BitString::parse(a).map_err(|_| err())?;
            return Spinor::new(z, a, phase);
        }
        let (phase, letters) = if let Some(r) = t.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else {
            (0, t.as_str())
        };
        if letters.is_empty() {
            return Err(err());
        }
        let n = letters.chars().count();
        let mut z = BitString::zeros(n)?;
        let mut a = BitString::zeros(n)?;
        let mut ys = 0u8;
        for (i, c) in letters.chars().enumerate() {
            match c {
                'I' => {}
                'Z' => z.set(i, true)?,
                'X' => a.set(i, true)?,
                'Y' => {
                    z.set(i, true)?;
                    a.set(i, true)?;
                    ys += 1;
                }
                _ => return Err(err()),
            }
        }
        // Y = -i S^1_1
        Spinor::new(z, a, (phase + 3 * (ys % 4)) % 4)
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "i^{} ", self.phase)?;
        }
        write!(f, "S^{{{}}}_{{{}}}", self.zeta, self.alpha)
    }
}

impl fmt::Debug for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.pauli_label())
    }
}

impl std::str::FromStr for Spinor {
    type Err = SpinorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Spinor::parse(s)
    }
}
