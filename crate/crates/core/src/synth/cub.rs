use super::spec::{LabeledVector, OneWayProtocolSpec, SYNTHESIS_TOL};
use crate::ensembles::{common_unbiased_basis_check, is_prime, mub_prime, unbiasedness_violation, BasisFamily, StateEnsemble, STRUCTURAL_TOL};
use crate::error::{numerical, precondition, Result};
use crate::qstate::{inner, vector_norm, ComplexMatrix};

/// `B_i†B_j` for every ordered pair `i < j`, tagged with the pair.
fn pairwise_products(ensemble: &StateEnsemble) -> Vec<((usize, usize), ComplexMatrix)> {
    let b: Vec<&ComplexMatrix> = ensemble.states().iter().map(|s| s.b_matrix()).collect();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            out.push(((i, j), &b[i].adjoint() * b[j]));
        }
    }
    out
}

fn pair_eigenbases(ensemble: &StateEnsemble) -> Result<Vec<((usize, usize), ComplexMatrix)>> {
    pairwise_products(ensemble)
        .into_iter()
        .map(|(pair, p)| {
            let scale = p.max_abs().max(1.0);
            if !p.is_normal(1e-9 * scale) {
                return Err(precondition!("B_{}†B_{} is not normal, so it has no orthonormal eigenbasis", pair.0, pair.1));
            }
            let (_, vectors) = p.normal_eigen(1e-8)?;
            Ok((pair, vectors))
        })
        .collect()
}

/// Eigenbases of all pairwise products `B_i†B_j` (`i < j`).
pub fn pairwise_eigenbasis_family(ensemble: &StateEnsemble) -> Result<BasisFamily> {
    BasisFamily::new(pair_eigenbases(ensemble)?.into_iter().map(|(_, b)| b).collect())
}

/// Default candidates for [`find_cub`] on `C^n`: the prime-dimension MUBs
/// when `n` is prime, otherwise the Fourier and computational bases.
pub fn default_cub_candidates(n: usize) -> Vec<ComplexMatrix> {
    if is_prime(n) {
        if let Ok(family) = mub_prime(n) {
            return family.bases().to_vec();
        }
    }
    vec![ComplexMatrix::fourier(n), ComplexMatrix::identity(n)]
}

/// First candidate unbiased to every basis of `family` (within 1e-8).
pub fn find_cub(family: &BasisFamily, candidates: &[ComplexMatrix]) -> Option<ComplexMatrix> {
    candidates
        .iter()
        .find(|c| common_unbiased_basis_check(c, family, SYNTHESIS_TOL).unwrap_or(false))
        .cloned()
}

/// One-way protocol from a common unbiased basis `{b_k}` of the pairwise
/// eigenbases: `⟨b_k|B_i†B_j|b_k⟩ = Tr(B_i†B_j)/n = 0`, so Alice measures
/// `{b̄_k}` and Bob separates the orthogonal states `B_i|b_k⟩`.
pub fn synthesize_cub_protocol(ensemble: &StateEnsemble, cub: &ComplexMatrix) -> Result<OneWayProtocolSpec> {
    if !ensemble.is_orthogonal(STRUCTURAL_TOL) {
        return Err(precondition!("states are not pairwise orthogonal"));
    }
    let (m, _) = ensemble.dims();
    if cub.rows() != m || !cub.is_unitary(1e-10) {
        return Err(precondition!("the candidate is not an orthonormal basis of Alice's space C^{m}"));
    }
    for ((i, j), basis) in pair_eigenbases(ensemble)? {
        let family = BasisFamily::new(vec![basis])?;
        if let Some((_, dev)) = unbiasedness_violation(cub, &family, SYNTHESIS_TOL)? {
            return Err(precondition!(
                "basis is not unbiased to the eigenbasis of B_{i}†B_{j} (deviation {dev:.3e})"
            ));
        }
    }
    let mut bob = Vec::with_capacity(m);
    for b_k in cub.columns() {
        let mut set: Vec<LabeledVector> = Vec::new();
        for (label, state) in ensemble.states().iter().enumerate() {
            let v = state.b_matrix().apply(&b_k);
            let n = vector_norm(&v);
            if n > 1e-12 {
                set.push(LabeledVector { label, vector: v.into_iter().map(|z| z / n).collect() });
            }
        }
        for (a, u) in set.iter().enumerate() {
            for w in &set[a + 1..] {
                let overlap = inner(&u.vector, &w.vector).norm();
                if overlap > SYNTHESIS_TOL {
                    return Err(numerical!("Bob's states {} and {} overlap by {overlap:.3e}", u.label, w.label));
                }
            }
        }
        bob.push(set);
    }
    OneWayProtocolSpec::new(cub.conj(), bob)
}
