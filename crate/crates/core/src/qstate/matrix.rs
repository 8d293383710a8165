//! Dense complex matrices.
//!
//! `ComplexMatrix` is a thin newtype over `nalgebra::DMatrix<C64>` that adds
//! the predicates and small helpers the rest of the crate needs, and fixes the
//! JSON interchange format (a list of rows, each entry an `[re, im]` pair).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, numerical, Result};

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(domain!("matrix dimensions must be positive, got {rows}x{cols}"));
        }
        if entries.len() != rows * cols {
            return Err(domain!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// Stacks the given vectors as columns. All vectors must have equal length.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(domain!("cannot build a matrix from zero columns"));
        };
        let rows = first.len();
        if rows == 0 || columns.iter().any(|c| c.len() != rows) {
            return Err(domain!("columns must be non-empty and of equal length"));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    /// The unitary discrete Fourier matrix, `F[j][k] = ω^{jk} / √n`.
    pub fn fourier(n: usize) -> Self {
        let norm = 1.0 / (n as f64).sqrt();
        Self::from_fn(n, n, |j, k| root_of_unity(n, j * k) * norm)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> C64 {
        self.0.clone().determinant()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// `M^k` for square `M`.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let v = DVector::from_column_slice(v);
        (&self.0 * v).iter().copied().collect()
    }

    /// `Tr M†M`, the squared Frobenius norm.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.0.shape() != other.0.shape() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M†M − I‖_max ≤ tol`. Requires a square matrix.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.has_orthonormal_columns(tol)
    }

    /// `‖M†M − I‖_max ≤ tol` for any shape.
    pub fn has_orthonormal_columns(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.cols())) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Hermitian within `tol` and smallest eigenvalue at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let (values, _) = self.hermitian_eigen();
        values.iter().all(|&v| v >= -tol)
    }

    /// `‖MM† − M†M‖_max ≤ tol`.
    pub fn is_normal(&self, tol: f64) -> bool {
        self.is_square() && (self * &self.adjoint()).max_abs_diff(&(&self.adjoint() * self)) <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows())
            .all(|i| (0..self.cols()).all(|j| i == j || self.0[(i, j)].norm() <= tol))
    }

    /// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian part.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, Self) {
        let herm = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = Self::from_fn(self.rows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Spectral decomposition of a normal matrix via the complex Schur form.
    ///
    /// Returns eigenvalues and the unitary Schur factor whose columns are the
    /// matching eigenvectors. Fails when the triangular factor is not diagonal
    /// within `tol` relative to the matrix scale (the input was not normal).
    pub fn normal_eigen(&self, tol: f64) -> Result<(Vec<C64>, Self)> {
        if !self.is_square() {
            return Err(domain!("eigendecomposition needs a square matrix, got {}x{}", self.rows(), self.cols()));
        }
        let n = self.rows();
        let scale = self.max_abs().max(1.0);
        // Diagonal input: the standard basis is an eigenbasis, and keeping it
        // avoids arbitrary rotations inside degenerate eigenspaces.
        if self.is_diagonal(tol * scale) {
            let values = (0..n).map(|i| self.0[(i, i)]).collect();
            return Ok((values, Self::identity(n)));
        }
        let schur = Schur::try_new(self.0.clone(), f64::EPSILON, 10_000)
            .ok_or_else(|| numerical!("Schur iteration did not converge"))?;
        let (q, t) = schur.unpack();
        let off_diag = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| t[(i, j)].norm())
            .fold(0.0, f64::max);
        if off_diag > tol * scale {
            return Err(numerical!(
                "matrix is not normal: Schur off-diagonal mass {off_diag:.3e} exceeds {:.1e}",
                tol * scale
            ));
        }
        let values = (0..n).map(|i| t[(i, i)]).collect();
        Ok((values, Self(q)))
    }

    /// Singular values (descending) with left and right singular vectors,
    /// `M = U diag(s) V†`, where `U` is `rows×r` and `V` is `cols×r`, `r = min(rows, cols)`.
    pub fn svd(&self) -> (Vec<f64>, Self, Self) {
        let svd = self.0.clone().svd(true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^T");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let values = order.iter().map(|&i| svd.singular_values[i]).collect();
        let left = Self::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        let right = Self::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)].conj());
        (values, left, right)
    }

    /// Largest eigenvalue of `M†M` (squared operator norm).
    pub fn gram_spectral_norm(&self) -> f64 {
        let (values, _) = (&self.adjoint() * self).hermitian_eigen();
        values.last().copied().unwrap_or(0.0)
    }

    /// `Q` factor of a QR decomposition with the diagonal of `R` made real and positive.
    pub fn qr_unitary(&self) -> Self {
        let qr = self.0.clone().qr();
        let (q, r) = (qr.q(), qr.r());
        let phases: Vec<C64> = (0..r.nrows().min(r.ncols()))
            .map(|i| {
                let d = r[(i, i)];
                if d.norm() > 0.0 {
                    d / d.norm()
                } else {
                    C64::new(1.0, 0.0)
                }
            })
            .collect();
        Self(q) * &Self::from_diagonal(&phases)
    }
}

/// `e^{2πi k/n}`.
pub fn root_of_unity(n: usize, k: usize) -> C64 {
    let angle = 2.0 * std::f64::consts::PI * ((k % n) as f64) / n as f64;
    C64::from_polar(1.0, angle)
}

/// `⟨u|v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Extends a list of orthonormal vectors to an orthonormal basis of `C^dim`
/// by Gram–Schmidt against the standard basis.
pub fn complete_basis(vectors: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = vectors.to_vec();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut candidate = vec![C64::new(0.0, 0.0); dim];
        candidate[k] = C64::new(1.0, 0.0);
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for b in &basis {
                let overlap = inner(b, &candidate);
                for (c, bi) in candidate.iter_mut().zip(b) {
                    *c -= overlap * bi;
                }
            }
        }
        let norm = vector_norm(&candidate);
        if norm > 1e-6 {
            basis.push(candidate.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl From<DMatrix<C64>> for ComplexMatrix {
    fn from(m: DMatrix<C64>) -> Self {
        Self(m)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<&ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let entries = rows.into_iter().flatten().map(|[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(n_rows, n_cols, entries).map_err(serde::de::Error::custom)
    }
}
