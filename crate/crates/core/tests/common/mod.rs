//! Dense reference built from Pauli letters, independent of the spinor code.

#![allow(dead_code)]

use num_complex::Complex64;
use qap::oracle::DenseOperator;

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter(l: char) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match l {
        'I' => vec![vec![o, z], vec![z, o]],
        'X' => vec![vec![z, o], vec![o, z]],
        'Y' => vec![vec![z, -i], vec![i, z]],
        'Z' => vec![vec![o, z], vec![z, -o]],
        _ => panic!("bad letter {l}"),
    }
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn scale(a: &Mat, s: Complex64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn identity(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

/// Matrix of a label such as `-iXZY`.
pub fn from_label(label: &str) -> Mat {
    let (ph, body) = if let Some(r) = label.strip_prefix("-i") {
        (c(0.0, -1.0), r)
    } else if let Some(r) = label.strip_prefix('-') {
        (c(-1.0, 0.0), r)
    } else if let Some(r) = label.strip_prefix('i') {
        (c(0.0, 1.0), r)
    } else {
        (c(1.0, 0.0), label.strip_prefix('+').unwrap_or(label))
    };
    let mut m = vec![vec![c(1.0, 0.0)]];
    for l in body.chars() {
        m = kron(&m, &letter(l));
    }
    scale(&m, ph)
}

pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `cos θ I + i sin θ A`.
pub fn rotation(a: &Mat, theta: f64) -> Mat {
    let d = a.len();
    let id = identity(d);
    (0..d)
        .map(|i| (0..d).map(|j| id[i][j] * theta.cos() + a[i][j] * c(0.0, theta.sin())).collect())
        .collect()
}

pub fn from_operator(op: &DenseOperator) -> Mat {
    op.rows()
}

pub fn apply(a: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn basis(d: usize, idx: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); d];
    v[idx] = c(1.0, 0.0);
    v
}

/// Largest `|a_i - e^{iφ} b_i|` with `φ` fixed by the largest entry of `b`.
pub fn phase_free_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let (idx, _) = b
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, x)| if x.norm() > acc.1 { (i, x.norm()) } else { acc });
    if b[idx].norm() == 0.0 {
        return a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    }
    let ph = a[idx] / b[idx];
    let ph = if ph.norm() > 0.0 { ph / ph.norm() } else { c(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x - ph * y).norm()).fold(0.0, f64::max)
}
