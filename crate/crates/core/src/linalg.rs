//! Thin wrappers over the dense kernels of `faer`, plus the qubit-indexed
//! gate application routines everything else is built on.

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::C64;

pub(crate) fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: MatRef<'_, C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::numerical(format!("hermitian eigensolver did not converge: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::numerical(format!("hermitian eigensolver did not converge: {e:?}")))
}

/// Eigen-decomposition of a real symmetric matrix.
pub fn symmetric_eigen(m: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::numerical(format!("symmetric eigensolver did not converge: {e:?}")))?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

/// Ordinary least squares `y ~ X beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquares {
    pub coef: Vec<f64>,
    pub stderr: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
}

/// Solves the normal equations through an eigen-decomposition of `X^T X`;
/// a design whose condition number exceeds `1e12` is rejected as degenerate.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if n != y.len() || k == 0 || rows.iter().any(|r| r.len() != k) {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    if n < k {
        return Err(Error::domain(format!("{n} observations cannot determine {k} coefficients")));
    }
    let gram = Mat::from_fn(k, k, |a, b| rows.iter().map(|r| r[a] * r[b]).sum::<f64>());
    let (values, vectors) = symmetric_eigen(gram.as_ref())?;
    let top = values.iter().copied().fold(0.0f64, f64::max);
    if !(top > 0.0) || values.iter().any(|&v| v <= 1e-12 * top) {
        return Err(Error::domain("degenerate least-squares design"));
    }
    let inv = Mat::from_fn(k, k, |a, b| (0..k).map(|m| vectors[(a, m)] * vectors[(b, m)] / values[m]).sum::<f64>());
    let xty: Vec<f64> = (0..k).map(|a| rows.iter().zip(y).map(|(r, yi)| r[a] * yi).sum()).collect();
    let coef: Vec<f64> = (0..k).map(|a| (0..k).map(|b| inv[(a, b)] * xty[b]).sum()).collect();
    let residuals: Vec<f64> =
        rows.iter().zip(y).map(|(r, yi)| yi - r.iter().zip(&coef).map(|(x, c)| x * c).sum::<f64>()).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = if n > k { rss / (n - k) as f64 } else { 0.0 };
    let stderr = (0..k).map(|a| (sigma2 * inv[(a, a)]).sqrt()).collect();
    Ok(LeastSquares { coef, stderr, residuals, rss })
}

/// Singular values in non-increasing order.
pub fn singular_values(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    m.singular_values()
        .map_err(|e| Error::numerical(format!("svd did not converge: {e:?}")))
}

pub fn adjoint(m: MatRef<'_, C64>) -> Mat<C64> {
    m.adjoint().to_owned()
}

/// `m` restricted to the rows and columns selected by the index lists.
pub fn submatrix(m: MatRef<'_, C64>, rows: &[usize], cols: &[usize]) -> Mat<C64> {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn max_abs_entry(m: MatRef<'_, C64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

pub fn is_finite(m: MatRef<'_, C64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
}

/// Largest entry of `m - m†` in modulus.
pub fn hermiticity_defect(m: MatRef<'_, C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `exp(-i * tau * h)` for Hermitian `h`.
pub fn unitary_exp(h: MatRef<'_, C64>, tau: f64) -> Result<Mat<C64>> {
    let (values, vectors) = hermitian_eigen(h)?;
    let phases: Vec<C64> = values.iter().map(|&e| C64::from_polar(1.0, -e * tau)).collect();
    let scaled = Mat::from_fn(vectors.nrows(), vectors.ncols(), |i, j| vectors[(i, j)] * phases[j]);
    Ok(&scaled * vectors.adjoint())
}

/// Bit masks for a set of qubit positions.
///
/// `scatter[l]` is the full index bit pattern for the local index `l`, where
/// bit `k` of `l` maps to qubit `positions[k]`.
pub(crate) fn scatter_table(positions: &[usize]) -> Vec<usize> {
    let size = 1usize << positions.len();
    (0..size)
        .map(|local| {
            positions
                .iter()
                .enumerate()
                .filter(|(k, _)| local >> k & 1 == 1)
                .fold(0usize, |acc, (_, &p)| acc | (1 << p))
        })
        .collect()
}

/// Local index of `full` restricted to `positions`.
#[cfg(test)]
pub(crate) fn gather_bits(full: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0usize, |acc, (k, &p)| acc | ((full >> p & 1) << k))
}

/// Applies `gate` (a `2^g x 2^g` matrix on the qubits at `positions`) to a
/// state vector over `n` qubits, in place.
pub(crate) fn apply_gate_vector(v: &mut [C64], gate: MatRef<'_, C64>, positions: &[usize]) {
    let local = 1usize << positions.len();
    debug_assert_eq!(gate.nrows(), local);
    let scatter = scatter_table(positions);
    let mask = scatter[local - 1];
    let mut buf = vec![czero(); local];
    for base in 0..v.len() {
        if base & mask != 0 {
            continue;
        }
        for (l, slot) in buf.iter_mut().enumerate() {
            *slot = v[base | scatter[l]];
        }
        for a in 0..local {
            let mut acc = czero();
            for (b, x) in buf.iter().enumerate() {
                acc += gate[(a, b)] * x;
            }
            v[base | scatter[a]] = acc;
        }
    }
}

/// Left-multiplies every column of `target` by `gate` on `positions`.
pub(crate) fn apply_gate_columns(target: &mut Mat<C64>, gate: MatRef<'_, C64>, positions: &[usize]) {
    for j in 0..target.ncols() {
        apply_gate_vector(target.col_as_slice_mut(j), gate, positions);
    }
}

/// `gate * target * gate†` with the gate acting on `positions`.
pub(crate) fn conjugate_local(target: &Mat<C64>, gate: MatRef<'_, C64>, positions: &[usize]) -> Mat<C64> {
    let mut left = target.clone();
    apply_gate_columns(&mut left, gate, positions);
    // (G A) G† = (G (G A)†)†
    let mut right = left.adjoint().to_owned();
    apply_gate_columns(&mut right, gate, positions);
    right.adjoint().to_owned()
}
