//! Bipartite pure states and the state/matrix correspondence.
//!
//! A state `|Ψ⟩ ∈ C^m ⊗ C^n` (Alice holds `C^m`, Bob holds `C^n`) is stored as
//! its amplitude vector in Alice-major order, `amplitudes[i * n + j] = ⟨i|⟨j|Ψ⟩`.
//! Alongside it we keep the `n×m` matrix `B` with `|Ψ⟩ = (I ⊗ B)|ME_m⟩`,
//! normalised so that `Tr B†B = m`. Writing `C` for the `m×n` coefficient
//! matrix of the amplitudes, `B = √m · Cᵀ`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{inner, vector_norm, ComplexMatrix};
use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<C64>,
    b_matrix: ComplexMatrix,
}

/// Schmidt form `|Ψ⟩ = Σ_k √λ_k |u_k⟩|v_k⟩`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// The weights `λ_k`, nonincreasing, summing to one.
    pub coefficients: Vec<f64>,
    /// Alice's vectors `|u_k⟩` as columns (`m × r`).
    pub left_vectors: ComplexMatrix,
    /// Bob's vectors `|v_k⟩` as columns (`n × r`).
    pub right_vectors: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// The largest Schmidt coefficient.
    pub fn lambda_max(&self) -> f64 {
        self.coefficients[0]
    }

    /// Entanglement entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        crate::bounds::shannon_bits(&self.coefficients)
    }
}

impl BipartiteState {
    /// Normalises `amplitudes` and builds the state. The vector must have
    /// length `dim_a * dim_b` and be nonzero.
    pub fn from_amplitudes(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(domain!("state dimensions must be positive, got {dim_a}x{dim_b}"));
        }
        if amplitudes.len() != dim_a * dim_b {
            return Err(domain!(
                "expected {} amplitudes for C^{dim_a} ⊗ C^{dim_b}, got {}",
                dim_a * dim_b,
                amplitudes.len()
            ));
        }
        let norm = vector_norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(domain!("amplitude vector must be nonzero and finite"));
        }
        // Leave already-normalised input bit-for-bit intact so JSON round trips are exact.
        let amplitudes: Vec<C64> = if (norm - 1.0).abs() > 4.0 * f64::EPSILON {
            amplitudes.into_iter().map(|z| z / norm).collect()
        } else {
            amplitudes
        };
        let scale = (dim_a as f64).sqrt();
        let b_matrix = ComplexMatrix::from_fn(dim_b, dim_a, |j, i| amplitudes[i * dim_b + j] * scale);
        Ok(Self { dim_a, dim_b, amplitudes, b_matrix })
    }

    /// `|Ψ⟩ = (I ⊗ B)|ME_m⟩` with `m = dim_a`, renormalised.
    ///
    /// `B` must be `n × dim_a` (Bob dimension `n = B.rows()`) and nonzero.
    pub fn from_matrix(b: &ComplexMatrix, dim_a: usize) -> Result<Self> {
        if b.cols() != dim_a {
            return Err(domain!("B has {} columns but dim_a = {dim_a}", b.cols()));
        }
        let dim_b = b.rows();
        let mut amplitudes = Vec::with_capacity(dim_a * dim_b);
        for i in 0..dim_a {
            for j in 0..dim_b {
                amplitudes.push(b.get(j, i));
            }
        }
        if b.norm_sqr() == 0.0 {
            return Err(domain!("zero matrix does not correspond to a state"));
        }
        Self::from_amplitudes(dim_a, dim_b, amplitudes)
    }

    /// A product state `|a⟩|b⟩`.
    pub fn product(alice: &[C64], bob: &[C64]) -> Result<Self> {
        let amps = alice.iter().flat_map(|a| bob.iter().map(move |b| a * b)).collect();
        Self::from_amplitudes(alice.len(), bob.len(), amps)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// The `n×m` matrix `B` with `|Ψ⟩ = (I ⊗ B)|ME_m⟩` and `Tr B†B = m`.
    pub fn b_matrix(&self) -> &ComplexMatrix {
        &self.b_matrix
    }

    /// The `m×n` coefficient matrix `C[i][j] = ⟨i|⟨j|Ψ⟩`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim_a, self.dim_b, |i, j| self.amplitudes[i * self.dim_b + j])
    }

    /// Direct amplitude inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_dims(other)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(domain!(
                "dimension mismatch: C^{}⊗C^{} vs C^{}⊗C^{}",
                self.dim_a,
                self.dim_b,
                other.dim_a,
                other.dim_b
            ));
        }
        Ok(())
    }

    /// Maximally entangled means square dims and a unitary `B`.
    pub fn is_maximally_entangled(&self, tol: f64) -> bool {
        self.dim_a == self.dim_b && self.b_matrix.is_unitary(tol)
    }

    /// Returns the same ray multiplied by a global phase.
    pub fn with_phase(&self, phase: C64) -> Self {
        let amps = self.amplitudes.iter().map(|z| z * phase).collect();
        Self::from_amplitudes(self.dim_a, self.dim_b, amps).expect("unit phase keeps a valid state")
    }

    /// Alice's reduced density matrix `Tr_B |Ψ⟩⟨Ψ| = C C†`.
    pub fn reduced_alice(&self) -> ComplexMatrix {
        let c = self.coefficient_matrix();
        &c * &c.adjoint()
    }

    /// Bob's reduced density matrix `Tr_A |Ψ⟩⟨Ψ| = Cᵀ C̄`.
    pub fn reduced_bob(&self) -> ComplexMatrix {
        let c = self.coefficient_matrix();
        &c.transpose() * &c.conj()
    }

    pub fn schmidt(&self) -> SchmidtDecomposition {
        schmidt(self)
    }
}

/// The canonical maximally entangled state `(1/√n) Σ_j |j⟩|j⟩`.
pub fn me_state(n: usize) -> Result<BipartiteState> {
    if n == 0 {
        return Err(domain!("maximally entangled state needs n >= 1"));
    }
    BipartiteState::from_matrix(&ComplexMatrix::identity(n), n)
}

/// Inverse of [`BipartiteState::from_matrix`].
pub fn state_from_matrix(b: &ComplexMatrix, dim_a: usize) -> Result<BipartiteState> {
    BipartiteState::from_matrix(b, dim_a)
}

pub fn matrix_from_state(state: &BipartiteState) -> ComplexMatrix {
    state.b_matrix().clone()
}

/// `⟨Ψ₁|Ψ₂⟩` computed as `(1/m) Tr B₁†B₂`.
pub fn inner_product_via_trace(a: &BipartiteState, b: &BipartiteState) -> Result<C64> {
    a.check_same_dims(b)?;
    let m = a.dim_a() as f64;
    Ok((&a.b_matrix().adjoint() * b.b_matrix()).trace() / m)
}

pub fn schmidt(state: &BipartiteState) -> SchmidtDecomposition {
    let (sigma, u, v) = state.coefficient_matrix().svd();
    // C = U Σ V†, so |Ψ⟩ = Σ σ_k |u_k⟩ ⊗ |conj(v_k)⟩.
    let coefficients = sigma.iter().map(|s| s * s).collect();
    SchmidtDecomposition { coefficients, left_vectors: u, right_vectors: v.conj() }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for BipartiteState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BipartiteState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        let amps = repr.amplitudes.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        BipartiteState::from_amplitudes(repr.dim_a, repr.dim_b, amps).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::generalized_pauli;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn assert_amps(state: &BipartiteState, expected: &[f64]) {
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert!((a - c(*e)).norm() < 1e-12, "{:?} vs {:?}", state.amplitudes(), expected);
        }
    }

    #[test]
    fn me_state_examples() {
        assert_amps(&me_state(2).unwrap(), &[S, 0.0, 0.0, S]);
        assert_amps(&me_state(1).unwrap(), &[1.0]);
        let s3 = me_state(3).unwrap().schmidt();
        assert!(s3.coefficients.iter().all(|&l| (l - 1.0 / 3.0).abs() < 1e-12));
        assert!(me_state(0).is_err());
        assert!(me_state(4).unwrap().b_matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn state_from_matrix_examples() {
        let id = state_from_matrix(&ComplexMatrix::identity(2), 2).unwrap();
        assert!(id.amplitudes().iter().zip(me_state(2).unwrap().amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));

        let d = ComplexMatrix::from_real(2, 2, &[2f64.sqrt(), 0.0, 0.0, 0.0]).unwrap();
        assert_amps(&state_from_matrix(&d, 2).unwrap(), &[1.0, 0.0, 0.0, 0.0]);

        // (I ⊗ X)|ME₂⟩ = (|01⟩ + |10⟩)/√2
        let (x, _) = generalized_pauli(2).unwrap();
        assert_amps(&state_from_matrix(&x, 2).unwrap(), &[0.0, S, S, 0.0]);

        assert!(state_from_matrix(&ComplexMatrix::zeros(2, 2), 2).is_err());
        assert!(state_from_matrix(&ComplexMatrix::identity(2), 3).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let (x, z) = generalized_pauli(3).unwrap();
        let me = me_state(3).unwrap();
        assert!((inner_product_via_trace(&me, &me).unwrap() - c(1.0)).norm() < 1e-12);
        let zs = state_from_matrix(&z, 3).unwrap();
        assert!(inner_product_via_trace(&me, &zs).unwrap().norm() < 1e-12);
        let xs = state_from_matrix(&x, 3).unwrap();
        assert!((inner_product_via_trace(&xs, &xs).unwrap() - c(1.0)).norm() < 1e-12);
        assert!(inner_product_via_trace(&me, &me_state(2).unwrap()).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let product = BipartiteState::from_amplitudes(2, 2, vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert!((product.schmidt().lambda_max() - 1.0).abs() < 1e-12);

        let s = BipartiteState::from_amplitudes(2, 2, vec![c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())]).unwrap();
        let coeffs = s.schmidt().coefficients;
        assert!((coeffs[0] - 0.8).abs() < 1e-12 && (coeffs[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn schmidt_vectors_rebuild_state() {
        let s = BipartiteState::from_amplitudes(
            2,
            3,
            vec![C64::new(0.3, 0.1), c(0.2), C64::new(0.0, -0.5), c(0.4), C64::new(0.1, 0.1), c(-0.3)],
        )
        .unwrap();
        let d = s.schmidt();
        let mut rebuilt = [C64::new(0.0, 0.0); 6];
        for (k, lambda) in d.coefficients.iter().enumerate() {
            for i in 0..2 {
                for j in 0..3 {
                    rebuilt[i * 3 + j] += lambda.sqrt() * d.left_vectors.get(i, k) * d.right_vectors.get(j, k);
                }
            }
        }
        assert!(rebuilt.iter().zip(s.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn reduced_states_of_me_are_maximally_mixed() {
        let me = me_state(3).unwrap();
        let mixed = ComplexMatrix::identity(3).scale(c(1.0 / 3.0));
        assert!(me.reduced_alice().max_abs_diff(&mixed) < 1e-12);
        assert!(me.reduced_bob().max_abs_diff(&mixed) < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let s = me_state(2).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: BipartiteState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<BipartiteState>(r#"{"dim_a":2,"dim_b":2,"amplitudes":[[1,0]]}"#).is_err());
    }
}
