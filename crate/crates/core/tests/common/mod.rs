//! Plain nested-`Vec` complex matrices for oracle computations, kept apart
//! from the faer-based kernels they check.

#![allow(dead_code)]

use faer::{Mat, MatRef};
use llc_lab::C64;

pub type Dense = Vec<Vec<C64>>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(n: usize) -> Dense {
    vec![vec![c(0.0); n]; n]
}

pub fn eye(n: usize) -> Dense {
    let mut m = zeros(n);
    (0..n).for_each(|i| m[i][i] = c(1.0));
    m
}

pub fn from_mat(m: MatRef<'_, C64>) -> Dense {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn to_mat(m: &Dense) -> Mat<C64> {
    Mat::from_fn(m.len(), m[0].len(), |i, j| m[i][j])
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![c(0.0); p]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == c(0.0) {
                continue;
            }
            for j in 0..p {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

pub fn add_scaled(a: &Dense, b: &Dense, s: C64) -> Dense {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + s * y).collect()).collect()
}

pub fn dagger(a: &Dense) -> Dense {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j].conj()).collect()).collect()
}

/// `a ⊗ b` with `a` on the more significant index.
pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn pauli(kind: char) -> Dense {
    let (o, i) = (c(0.0), C64::new(0.0, 1.0));
    match kind {
        'I' => eye(2),
        'X' => vec![vec![o, c(1.0)], vec![c(1.0), o]],
        'Y' => vec![vec![o, -i], vec![i, o]],
        'Z' => vec![vec![c(1.0), o], vec![o, c(-1.0)]],
        _ => panic!("unknown Pauli {kind}"),
    }
}

/// Pauli word with `word[k]` on site `k`; site 0 is the least significant bit.
pub fn pauli_word(word: &str) -> Dense {
    word.chars().rev().fold(eye(1), |acc, ch| kron(&acc, &pauli(ch)))
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn trace(a: &Dense) -> C64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn one_norm(a: &Dense) -> f64 {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(-i h t)` by scaling and squaring a 30-term Taylor series.
pub fn expm_taylor(h: &Dense, t: f64) -> Dense {
    let n = h.len();
    let norm = one_norm(h) * t.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a: Dense = h
        .iter()
        .map(|r| r.iter().map(|x| x * C64::new(0.0, -t / 2f64.powi(squarings as i32))).collect())
        .collect();
    let mut sum = eye(n);
    let mut term = eye(n);
    for k in 1..30 {
        term = matmul(&term, &a);
        term.iter_mut().flatten().for_each(|x| *x /= k as f64);
        sum = add_scaled(&sum, &term, c(1.0));
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// Largest singular value, through faer's SVD.
pub fn spectral_norm(a: &Dense) -> f64 {
    let m = to_mat(a);
    m.singular_values().unwrap().into_iter().fold(0.0, f64::max)
}
