//! Dense complex matrices and Hermitian spectral calculus.
//!
//! Everything here is a thin layer over `nalgebra`. Eigenvalues are always
//! returned in ascending order.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Spectral calculus: `sum_k f(lambda_k) v_k v_k*`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            scaled.column_mut(k).scale_mut(w);
        }
        let out = &scaled * self.eigenvectors.adjoint();
        debug_assert_eq!(out.nrows(), d);
        hermitize(&out)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn top_eigenvector(&self) -> ComplexVector {
        let d = self.dim();
        self.eigenvectors.column(d - 1).into_owned()
    }

    /// `max |V* V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let id = ComplexMatrix::identity(self.dim(), self.dim());
        max_abs_diff(&gram, &id)
    }
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// `max_ij |a_ij - conj(a_ji)|`.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(A + A*) / 2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn niter_budget(d: usize) -> usize {
    1000 * d.max(4)
}

fn is_diagonal(m: &ComplexMatrix) -> bool {
    let d = m.nrows();
    (0..d).all(|j| (0..d).all(|i| i == j || m[(i, j)] == Complex64::new(0.0, 0.0)))
}

fn sorted_diagonal(m: &ComplexMatrix) -> (Vec<usize>, Vec<f64>) {
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| m[(a, a)].re.total_cmp(&m[(b, b)].re));
    let vals = order.iter().map(|&k| m[(k, k)].re).collect();
    (order, vals)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    if is_diagonal(m) {
        return Ok(sorted_diagonal(m).1);
    }
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNonConvergence);
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

pub fn spectral_decomposition(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    check_square(m)?;
    let d = m.nrows();
    if is_diagonal(m) {
        let (order, eigenvalues) = sorted_diagonal(m);
        let mut eigenvectors = ComplexMatrix::zeros(d, d);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors[(src, dst)] = Complex64::new(1.0, 0.0);
        }
        return Ok(SpectralDecomposition { eigenvalues, eigenvectors });
    }
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, niter_budget(d))
        .ok_or(Error::EigenNonConvergence)?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNonConvergence);
    }
    let mut eigenvectors = ComplexMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

pub fn max_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.last().copied().unwrap_or(0.0))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    let d = values.len();
    let mut m = ComplexMatrix::zeros(d, d);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = Complex64::new(v, 0.0);
    }
    m
}

/// Rank-one projector `|v><v|` (no normalization applied).
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// `<u, A v>` with the inner product antilinear in the first slot.
pub fn expectation(m: &ComplexMatrix, v: &ComplexVector) -> Complex64 {
    v.dotc(&(m * v))
}

/// Row-major CSV: each row lists `re,im` pairs.
pub fn write_matrix_csv<W: Write>(m: &ComplexMatrix, mut w: W) -> Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:e},{:e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_matrix_csv<R: BufRead>(r: R) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if nums.len() % 2 != 0 {
            return Err(Error::Parse(format!("line {}: odd number of fields", lineno + 1)));
        }
        rows.push(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    }
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: bad.len() });
    }
    let mut m = ComplexMatrix::from_element(n, n, ZERO);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, z) in row.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m)
}
