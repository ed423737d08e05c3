//! Binary strings and linear algebra over GF(2).
//!
//! Strings are indexed from the left: index 0 is the first character of the
//! printed form. Storage is a single `u64`, so lengths above 64 are rejected.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub const MAX_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("bit string length {0} exceeds capacity of {MAX_BITS}")]
    Capacity(usize),
    #[error("invalid bit string {0:?}")]
    Parse(String),
    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },
}

/// Fixed-length binary string.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    bits: u64,
}

fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitString {
    pub fn zeros(len: usize) -> Result<Self, Gf2Error> {
        if len > MAX_BITS {
            return Err(Gf2Error::Capacity(len));
        }
        Ok(BitString { len, bits: 0 })
    }

    /// Raw constructor; bit `i` of `bits` is string index `i`.
    pub fn from_raw(len: usize, bits: u64) -> Result<Self, Gf2Error> {
        if len > MAX_BITS {
            return Err(Gf2Error::Capacity(len));
        }
        Ok(BitString {
            len,
            bits: bits & mask(len),
        })
    }

    pub(crate) fn raw_unchecked(len: usize, bits: u64) -> Self {
        debug_assert!(len <= MAX_BITS);
        BitString {
            len,
            bits: bits & mask(len),
        }
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Result<Self, Gf2Error> {
        let mut b = Self::zeros(len)?;
        b.set(index, true)?;
        Ok(b)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self, Gf2Error> {
        let mut b = Self::zeros(bits.len())?;
        for (i, &v) in bits.iter().enumerate() {
            if v {
                b.bits |= 1 << i;
            }
        }
        Ok(b)
    }

    /// Numeric index with string index 0 as the most significant bit.
    pub fn to_index(&self) -> u64 {
        if self.len == 0 {
            return 0;
        }
        self.bits.reverse_bits() >> (64 - self.len)
    }

    pub fn from_index(len: usize, index: u64) -> Result<Self, Gf2Error> {
        if len > MAX_BITS {
            return Err(Gf2Error::Capacity(len));
        }
        if len == 0 {
            return Ok(BitString { len, bits: 0 });
        }
        let bits = (index << (64 - len)).reverse_bits();
        Ok(BitString {
            len,
            bits: bits & mask(len),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn raw(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, index: usize) -> bool {
        index < self.len && (self.bits >> index) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) -> Result<(), Gf2Error> {
        if index >= self.len {
            return Err(Gf2Error::Index {
                index,
                len: self.len,
            });
        }
        if value {
            self.bits |= 1 << index;
        } else {
            self.bits &= !(1 << index);
        }
        Ok(())
    }

    pub fn flip(&mut self, index: usize) -> Result<(), Gf2Error> {
        let v = self.get(index);
        self.set(index, !v)
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    fn check(&self, other: &Self) -> Result<(), Gf2Error> {
        if self.len != other.len {
            Err(Gf2Error::LengthMismatch(self.len, other.len))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.check(other)?;
        Ok(BitString {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    /// Componentwise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.check(other)?;
        Ok(BitString {
            len: self.len,
            bits: self.bits & other.bits,
        })
    }

    pub fn dot(&self, other: &Self) -> Result<u8, Gf2Error> {
        self.check(other)?;
        Ok((self.bits & other.bits).count_ones() as u8 & 1)
    }

    /// Number of positions where both strings are 1 (not reduced mod 2).
    pub fn overlap(&self, other: &Self) -> Result<usize, Gf2Error> {
        self.check(other)?;
        Ok((self.bits & other.bits).count_ones() as usize)
    }

    pub fn concat(&self, other: &Self) -> Result<Self, Gf2Error> {
        let len = self.len + other.len;
        if len > MAX_BITS {
            return Err(Gf2Error::Capacity(len));
        }
        Ok(BitString {
            len,
            bits: self.bits | (other.bits << self.len),
        })
    }

    /// Substring `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self, Gf2Error> {
        if start + len > self.len {
            return Err(Gf2Error::Index {
                index: start + len,
                len: self.len,
            });
        }
        Ok(BitString {
            len,
            bits: (self.bits >> start) & mask(len),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn parse(s: &str) -> Result<Self, Gf2Error> {
        let s = s.trim();
        if s.len() > MAX_BITS {
            return Err(Gf2Error::Capacity(s.len()));
        }
        let mut b = BitString::zeros(s.len())?;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.bits |= 1 << i,
                _ => return Err(Gf2Error::Parse(s.to_string())),
            }
        }
        Ok(b)
    }

    /// All strings of a given length in increasing index order.
    pub fn all(len: usize) -> Result<impl Iterator<Item = BitString>, Gf2Error> {
        if len >= 32 {
            return Err(Gf2Error::Capacity(len));
        }
        Ok((0..(1u64 << len)).map(move |i| BitString::from_index(len, i).expect("len checked")))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the printed form; shorter strings first.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.to_index().cmp(&other.to_index()))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl std::str::FromStr for BitString {
    type Err = Gf2Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BitString::parse(s)
    }
}

/// Dense GF(2) matrix stored as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<BitString>,
}

impl Gf2Matrix {
    pub fn new(cols: usize) -> Result<Self, Gf2Error> {
        if cols > MAX_BITS {
            return Err(Gf2Error::Capacity(cols));
        }
        Ok(Gf2Matrix {
            cols,
            rows: Vec::new(),
        })
    }

    pub fn from_rows(cols: usize, rows: Vec<BitString>) -> Result<Self, Gf2Error> {
        let mut m = Self::new(cols)?;
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: BitString) -> Result<(), Gf2Error> {
        if row.len() != self.cols {
            return Err(Gf2Error::LengthMismatch(row.len(), self.cols));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[BitString] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn mul_vec(&self, v: &BitString) -> Result<BitString, Gf2Error> {
        let mut out = BitString::zeros(self.rows.len())?;
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v)? == 1 {
                out.set(i, true)?;
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut basis = XorBasis::new(self.cols);
        self.rows
            .iter()
            .filter(|r| basis.insert(r.bits).is_some())
            .count()
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Infeasible,
    Solved {
        /// Free variables set to zero.
        particular: BitString,
        null_basis: Vec<BitString>,
    },
}

impl Solution {
    pub fn particular(&self) -> Option<&BitString> {
        match self {
            Solution::Solved { particular, .. } => Some(particular),
            Solution::Infeasible => None,
        }
    }

    /// Lexicographically smallest member of the solution set.
    pub fn lex_min(&self) -> Option<BitString> {
        let (p, null) = match self {
            Solution::Solved {
                particular,
                null_basis,
            } => (particular, null_basis),
            Solution::Infeasible => return None,
        };
        // Reduce the null space so each vector has a distinct leading (leftmost) bit
        // that no other vector touches, then clear leading bits greedily.
        let mut vs: Vec<u64> = null.iter().map(|v| v.bits).collect();
        let mut leads = Vec::new();
        let mut row = 0;
        for col in 0..p.len() {
            let bit = 1u64 << col;
            let Some(piv) = (row..vs.len()).find(|&i| vs[i] & bit != 0) else {
                continue;
            };
            vs.swap(row, piv);
            for i in 0..vs.len() {
                if i != row && vs[i] & bit != 0 {
                    vs[i] ^= vs[row];
                }
            }
            leads.push(col);
            row += 1;
        }
        let mut x = p.bits;
        for (i, &col) in leads.iter().enumerate() {
            if x & (1 << col) != 0 {
                x ^= vs[i];
            }
        }
        Some(BitString::raw_unchecked(p.len(), x))
    }
}

/// Solve `A x = b` over GF(2).
pub fn solve(a: &Gf2Matrix, b: &BitString) -> Result<Solution, Gf2Error> {
    if b.len() != a.nrows() {
        return Err(Gf2Error::LengthMismatch(b.len(), a.nrows()));
    }
    let cols = a.cols;
    let mut rows: Vec<(u64, bool)> = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.bits, b.get(i)))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let bit = 1u64 << col;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].0 & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pr = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r.0 & bit != 0 {
                r.0 ^= pr.0;
                r.1 ^= pr.1;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r.1) {
        return Ok(Solution::Infeasible);
    }
    let mut x = 0u64;
    for (i, &c) in pivots.iter().enumerate() {
        if rows[i].1 {
            x |= 1 << c;
        }
    }
    let mut null_basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = 1u64 << f;
        for (i, &c) in pivots.iter().enumerate() {
            if rows[i].0 & (1 << f) != 0 {
                v |= 1 << c;
            }
        }
        null_basis.push(BitString::raw_unchecked(cols, v));
    }
    Ok(Solution::Solved {
        particular: BitString::raw_unchecked(cols, x),
        null_basis,
    })
}

/// Incremental echelon basis that remembers how each reduced row was formed
/// from the inserted vectors, so membership queries return a decomposition.
#[derive(Clone, Debug)]
pub struct XorBasis {
    width: usize,
    // (reduced vector, combination mask over insertion indices, pivot bit)
    rows: Vec<(u64, u64, u32)>,
    inserted: usize,
}

impl XorBasis {
    pub fn new(width: usize) -> Self {
        XorBasis {
            width,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: u64) -> (u64, u64) {
        let mut combo = 0u64;
        for &(r, c, p) in &self.rows {
            if v >> p & 1 == 1 {
                v ^= r;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Insert a vector. Returns its insertion index if it was independent;
    /// dependent vectors are not recorded.
    pub fn insert(&mut self, v: u64) -> Option<usize> {
        let (r, combo) = self.reduce(v);
        if r == 0 {
            return None;
        }
        assert!(self.inserted < 64, "XorBasis holds at most 64 vectors");
        let idx = self.inserted;
        self.inserted += 1;
        let p = r.trailing_zeros();
        let c = combo ^ (1 << idx);
        // keep rows fully reduced on their pivots
        for row in self.rows.iter_mut() {
            if row.0 >> p & 1 == 1 {
                row.0 ^= r;
                row.1 ^= c;
            }
        }
        self.rows.push((r, c, p));
        Some(idx)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v).0 == 0
    }

    /// Express `v` as a sum of inserted vectors; bit `j` of the result selects
    /// the `j`-th independent insertion.
    pub fn decompose(&self, v: u64) -> Option<u64> {
        let (r, combo) = self.reduce(v);
        (r == 0).then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn add_and_dot() {
        assert_eq!(bs("101").add(&bs("011")).unwrap(), bs("110"));
        assert_eq!(bs("101").dot(&bs("111")).unwrap(), 0);
        assert_eq!(bs("101").overlap(&bs("111")).unwrap(), 2);
        assert!(bs("10").add(&bs("101")).is_err());
    }

    #[test]
    fn index_is_msb_first() {
        assert_eq!(bs("001").to_index(), 1);
        assert_eq!(bs("100").to_index(), 4);
        assert_eq!(BitString::from_index(3, 6).unwrap(), bs("110"));
        assert!(bs("011") < bs("100"));
    }

    #[test]
    fn solve_example() {
        let a = Gf2Matrix::from_rows(2, vec![bs("11")]).unwrap();
        match solve(&a, &bs("1")).unwrap() {
            Solution::Solved {
                particular,
                null_basis,
            } => {
                assert_eq!(particular, bs("10"));
                assert_eq!(null_basis, vec![bs("11")]);
            }
            Solution::Infeasible => panic!(),
        }
        let s = solve(&a, &bs("1")).unwrap();
        assert_eq!(s.lex_min().unwrap(), bs("01"));
    }

    #[test]
    fn infeasible() {
        let a = Gf2Matrix::from_rows(2, vec![bs("11"), bs("11")]).unwrap();
        assert_eq!(solve(&a, &bs("10")).unwrap(), Solution::Infeasible);
    }

    #[test]
    fn capacity() {
        assert!(matches!(BitString::zeros(65), Err(Gf2Error::Capacity(65))));
    }

    fn arb_system() -> impl Strategy<Value = (usize, Vec<u64>, u64)> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            (
                Just(c),
                proptest::collection::vec(0u64..(1 << c), r),
                0u64..(1 << r),
            )
        })
    }

    proptest! {
        #[test]
        fn solve_matches_brute_force((c, rows, b) in arb_system()) {
            let a = Gf2Matrix::from_rows(c, rows.iter().map(|&r| BitString::from_raw(c, r).unwrap()).collect()).unwrap();
            let rhs = BitString::from_raw(rows.len(), b).unwrap();
            let sols: Vec<BitString> = BitString::all(c).unwrap()
                .filter(|x| a.mul_vec(x).unwrap() == rhs).collect();
            match solve(&a, &rhs).unwrap() {
                Solution::Infeasible => prop_assert!(sols.is_empty()),
                s @ Solution::Solved { .. } => {
                    let Solution::Solved { particular, null_basis } = &s else { unreachable!() };
                    prop_assert_eq!(a.mul_vec(particular).unwrap(), rhs);
                    prop_assert_eq!(sols.len(), 1usize << null_basis.len());
                    for v in null_basis {
                        prop_assert!(a.mul_vec(v).unwrap().is_zero());
                    }
                    prop_assert_eq!(s.lex_min().unwrap(), *sols.iter().min().unwrap());
                }
            }
        }

        #[test]
        fn rank_matches_row_space(c in 1usize..7, rows in proptest::collection::vec(0u64..64, 0..8)) {
            let a = Gf2Matrix::from_rows(c, rows.iter().map(|&r| BitString::from_raw(c, r).unwrap()).collect()).unwrap();
            let mut span = std::collections::HashSet::new();
            span.insert(0u64);
            for r in a.rows() {
                let cur: Vec<u64> = span.iter().copied().collect();
                for x in cur { span.insert(x ^ r.raw()); }
            }
            prop_assert_eq!(1usize << a.rank(), span.len());
        }

        #[test]
        fn xor_basis_decomposes(vs in proptest::collection::vec(1u64..256, 1..10), q in 0u64..256) {
            let mut b = XorBasis::new(8);
            let mut kept = Vec::new();
            for v in &vs { if b.insert(*v).is_some() { kept.push(*v); } }
            if let Some(combo) = b.decompose(q) {
                let mut acc = 0;
                for (j, v) in kept.iter().enumerate() { if combo >> j & 1 == 1 { acc ^= v; } }
                prop_assert_eq!(acc, q);
            } else {
                prop_assert!(!b.contains(q));
            }
        }
    }
}
