//! Dense complex reference implementation used to cross-check the symbolic code.
//!
//! Matrices are built from literal 2×2 Pauli matrices by Kronecker products,
//! never from the symbolic multiplication rules. Basis index `Σ β_i 2^{n-1-i}`
//! puts qubit 0 in the most significant position.

use num_complex::Complex64;
use thiserror::Error;

use crate::gf2::BitString;
use crate::spinor::Spinor;

pub const MAX_DENSE_QUBITS: usize = 10;

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{0} qubits exceeds dense capacity of {MAX_DENSE_QUBITS}")]
    Capacity(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

pub fn i_pow(p: u8) -> Complex64 {
    match p % 4 {
        0 => C1,
        1 => CI,
        2 => -C1,
        _ => -CI,
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            dim,
            data: vec![C0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, OracleError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(OracleError::Dimension(r.len(), dim));
            }
            data.extend(r);
        }
        Ok(DenseOperator { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, OracleError> {
        if self.dim != other.dim {
            return Err(OracleError::Dimension(self.dim, other.dim));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == C0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut out = Self::zeros(d);
        for i in 0..a {
            for j in 0..a {
                let x = self.data[i * a + j];
                if x == C0 {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * d + j * b + l] = x * other.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, OracleError> {
        if self.dim != other.dim {
            return Err(OracleError::Dimension(self.dim, other.dim));
        }
        Ok(DenseOperator {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>, OracleError> {
        if v.len() != self.dim {
            return Err(OracleError::Dimension(v.len(), self.dim));
        }
        Ok(self
            .data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entrywise deviation.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .expect("same dim")
            .max_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Residual after removing the best single global phase, or infinity
    /// if either operator vanishes.
    pub fn phase_residual(&self, other: &Self) -> f64 {
        phase_residual(&self.data, &other.data)
    }

    pub fn equal_up_to_global_phase(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.phase_residual(other) <= tol
    }
}

fn phase_residual(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (idx, _) = a
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, x)| if x.norm() > acc.1 { (i, x.norm()) } else { acc });
    if a[idx].norm() == 0.0 {
        let m = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
        return m;
    }
    if b[idx].norm() == 0.0 {
        return f64::INFINITY;
    }
    let c = b[idx] / a[idx];
    let c = c / c.norm();
    a.iter()
        .zip(b)
        .map(|(x, y)| (x * c - y).norm())
        .fold(0.0, f64::max)
}

pub fn states_equal_up_to_global_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    phase_residual(a, b) <= tol
}

pub fn state_phase_residual(a: &[Complex64], b: &[Complex64]) -> f64 {
    phase_residual(a, b)
}

fn check_n(n: usize) -> Result<(), OracleError> {
    if n > MAX_DENSE_QUBITS {
        Err(OracleError::Capacity(n))
    } else {
        Ok(())
    }
}

fn pauli2(z: bool, x: bool) -> DenseOperator {
    let rows = match (z, x) {
        (false, false) => vec![vec![C1, C0], vec![C0, C1]],
        (true, false) => vec![vec![C1, C0], vec![C0, -C1]],
        (false, true) => vec![vec![C0, C1], vec![C1, C0]],
        // Z·X
        (true, true) => vec![vec![C0, C1], vec![-C1, C0]],
    };
    DenseOperator::from_rows(rows).expect("2x2")
}

/// Dense matrix of `i^p Z^ζ X^α`.
pub fn spinor_matrix(s: &Spinor) -> Result<DenseOperator, OracleError> {
    check_n(s.n())?;
    let mut m = DenseOperator::identity(1);
    for q in 0..s.n() {
        m = m.kron(&pauli2(s.zeta().get(q), s.alpha().get(q)));
    }
    Ok(m.scale(i_pow(s.phase())))
}

/// `cos θ · I + i sin θ · A` with `A` the hermitian form of `axis`.
pub fn rotation_matrix(axis: &Spinor, theta: f64) -> Result<DenseOperator, OracleError> {
    let a = spinor_matrix(&axis.hermitian())?;
    let d = a.dim();
    DenseOperator::identity(d)
        .scale(Complex64::new(theta.cos(), 0.0))
        .add(&a.scale(Complex64::new(0.0, theta.sin())))
}

/// `∏ (I + S_r)/2` over the given commuting hermitian generators.
pub fn projector(n: usize, generators: &[Spinor]) -> Result<DenseOperator, OracleError> {
    check_n(n)?;
    let d = 1usize << n;
    let mut p = DenseOperator::identity(d);
    for g in generators {
        let h = DenseOperator::identity(d)
            .add(&spinor_matrix(g)?)?
            .scale(Complex64::new(0.5, 0.0));
        p = p.mul(&h)?;
    }
    Ok(p)
}

pub fn basis_state(n: usize, beta: &BitString) -> Result<Vec<Complex64>, OracleError> {
    check_n(n)?;
    let mut v = vec![C0; 1 << n];
    v[beta.to_index() as usize] = C1;
    Ok(v)
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    inner(a, a).re.max(0.0).sqrt()
}

pub fn normalize(a: &[Complex64]) -> Vec<Complex64> {
    let n = norm(a);
    a.iter().map(|x| x / n).collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Orthonormalise in order, dropping vectors whose residual norm is below `tol`.
pub fn gram_schmidt(vs: &[Vec<Complex64>], tol: f64) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c = inner(u, &w);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
        if norm(&w) > tol {
            out.push(normalize(&w));
        }
    }
    out
}
