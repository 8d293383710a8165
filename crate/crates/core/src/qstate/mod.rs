//! Complex linear algebra and the bipartite state/matrix correspondence.

mod matrix;
mod state;

pub use matrix::{complete_basis, inner, root_of_unity, vector_norm, ComplexMatrix};
pub use state::{
    inner_product_via_trace, matrix_from_state, me_state, schmidt, state_from_matrix, BipartiteState,
    SchmidtDecomposition,
};

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};

/// Qudit shift and clock matrices `(X, Z)` with `X = Σ|j⟩⟨j+1|` and
/// `Z = Σ ω^j |j⟩⟨j|`, `ω = e^{2πi/n}`.
pub fn generalized_pauli(n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if n < 2 {
        return Err(domain!("generalized Pauli matrices need n >= 2, got {n}"));
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let x = ComplexMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { one } else { zero });
    let z = ComplexMatrix::from_diagonal(&(0..n).map(|j| root_of_unity(n, j)).collect::<Vec<_>>());
    Ok((x, z))
}

/// The generalized Bell matrix `X^shift Z^phase`.
pub fn bell_matrix(n: usize, shift: usize, phase: usize) -> Result<ComplexMatrix> {
    let (x, z) = generalized_pauli(n)?;
    Ok(&x.pow(shift % n) * &z.pow(phase % n))
}

/// `|ME_n⟩` as a plain vector of length `n²`.
fn me_vector(n: usize) -> Vec<C64> {
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        v[j * n + j] = amp;
    }
    v
}

/// Checks `√n (I ⊗ A)|ME_n⟩ = √m (Aᵀ ⊗ I)|ME_m⟩` for an `m×n` matrix `A`.
///
/// Both sides are built from explicit Kronecker products and returned as the
/// largest entrywise deviation.
pub fn transpose_identity_check(a: &ComplexMatrix) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    let lhs: Vec<C64> = ComplexMatrix::identity(n)
        .kron(a)
        .apply(&me_vector(n))
        .into_iter()
        .map(|z| z * (n as f64).sqrt())
        .collect();
    let rhs: Vec<C64> = a
        .transpose()
        .kron(&ComplexMatrix::identity(m))
        .apply(&me_vector(m))
        .into_iter()
        .map(|z| z * (m as f64).sqrt())
        .collect();
    lhs.iter().zip(&rhs).map(|(l, r)| (l - r).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_paulis() {
        let (x, z) = generalized_pauli(2).unwrap();
        assert_eq!(x, ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
        assert!(z.max_abs_diff(&ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()) < 1e-15);
        assert!(generalized_pauli(1).is_err());
    }

    #[test]
    fn qutrit_pauli_traces_and_commutator() {
        let (x, z) = generalized_pauli(3).unwrap();
        assert!(x.trace().norm() < 1e-12);
        assert!(z.trace().norm() < 1e-12);
        let omega = root_of_unity(3, 1);
        let group_commutator = &(&(&x * &z) * &x.adjoint()) * &z.adjoint();
        assert!(group_commutator.max_abs_diff(&ComplexMatrix::identity(3).scale(omega)) < 1e-12);
    }

    #[test]
    fn pauli_algebra() {
        for n in 2..8 {
            let (x, z) = generalized_pauli(n).unwrap();
            let id = ComplexMatrix::identity(n);
            assert!(x.is_unitary(1e-12) && z.is_unitary(1e-12));
            assert!(x.pow(n).max_abs_diff(&id) < 1e-12);
            assert!(z.pow(n).max_abs_diff(&id) < 1e-12);
            let lhs = &x * &z;
            let rhs = (&z * &x).scale(root_of_unity(n, 1));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn transpose_identity_examples() {
        assert_eq!(transpose_identity_check(&ComplexMatrix::identity(3)), 0.0);
        // A = ⟨v|: the left side collapses to |v̄⟩.
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let bra = ComplexMatrix::new(1, 3, v.iter().map(|z| z.conj()).collect()).unwrap();
        assert!(transpose_identity_check(&bra) < 1e-15);
        let lhs = ComplexMatrix::identity(3).kron(&bra).apply(&me_vector(3));
        for (l, vi) in lhs.iter().zip(&v) {
            assert!((l * 3f64.sqrt() - vi.conj()).norm() < 1e-15);
        }
    }
}
