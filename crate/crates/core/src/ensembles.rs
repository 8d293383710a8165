//! Named state families: generalized Bell bases, mutually unbiased bases for
//! prime dimension, seeded random maximally entangled triples and
//! simultaneously diagonal ensembles.

use num_complex::Complex64 as C64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Error, Result};
use crate::qstate::{bell_matrix, generalized_pauli, inner, BipartiteState, ComplexMatrix};

/// Default tolerance for structural predicates.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// `k` states on a common `C^m ⊗ C^n` with prior probabilities.
#[derive(Clone, Debug, Serialize)]
pub struct StateEnsemble {
    states: Vec<BipartiteState>,
    priors: Vec<f64>,
}

impl StateEnsemble {
    pub fn new(states: Vec<BipartiteState>, priors: Vec<f64>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(domain!("an ensemble needs at least one state"));
        };
        if let Some(bad) = states.iter().find(|s| s.dims() != first.dims()) {
            return Err(domain!("all states must share dimensions: {:?} vs {:?}", first.dims(), bad.dims()));
        }
        if priors.len() != states.len() {
            return Err(domain!("{} states but {} priors", states.len(), priors.len()));
        }
        if priors.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(domain!("priors must be nonnegative"));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(domain!("priors sum to {total}, expected 1"));
        }
        let priors = priors.into_iter().map(|p| p / total).collect();
        Ok(Self { states, priors })
    }

    pub fn uniform(states: Vec<BipartiteState>) -> Result<Self> {
        let k = states.len();
        Self::new(states, vec![1.0 / k.max(1) as f64; k])
    }

    pub fn states(&self) -> &[BipartiteState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `(dim_a, dim_b)`.
    pub fn dims(&self) -> (usize, usize) {
        self.states[0].dims()
    }

    /// The matrix of inner products `⟨Ψ_i|Ψ_j⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        let k = self.len();
        ComplexMatrix::from_fn(k, k, |i, j| inner(self.states[i].amplitudes(), self.states[j].amplitudes()))
    }

    /// Largest `|⟨Ψ_i|Ψ_j⟩|` over distinct pairs.
    pub fn max_overlap(&self) -> f64 {
        let gram = self.gram();
        let k = self.len();
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| gram.get(i, j).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.max_overlap() <= tol
    }

    /// Every state has square dims and a unitary `B`.
    pub fn is_maximally_entangled(&self, tol: f64) -> bool {
        self.states.iter().all(|s| s.is_maximally_entangled(tol))
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.len() as f64;
        self.priors.iter().all(|p| (p - u).abs() <= tol)
    }

    /// The sub-ensemble on `indices`, with priors renormalised.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(domain!("index {bad} out of range for {} states", self.len()));
        }
        let states = indices.iter().map(|&i| self.states[i].clone()).collect();
        let mass: f64 = indices.iter().map(|&i| self.priors[i]).sum();
        if mass <= 0.0 {
            return Err(domain!("selected states carry zero prior mass"));
        }
        Self::new(states, indices.iter().map(|&i| self.priors[i] / mass).collect())
    }

    pub fn with_priors(&self, priors: Vec<f64>) -> Result<Self> {
        Self::new(self.states.clone(), priors)
    }

    /// Each state multiplied by a global phase (same rays).
    pub fn with_phases(&self, phases: &[C64]) -> Self {
        let states = self.states.iter().zip(phases).map(|(s, p)| s.with_phase(*p)).collect();
        Self { states, priors: self.priors.clone() }
    }
}

impl<'de> Deserialize<'de> for StateEnsemble {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            states: Vec<BipartiteState>,
            priors: Option<Vec<f64>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let result = match repr.priors {
            Some(p) => StateEnsemble::new(repr.states, p),
            None => StateEnsemble::uniform(repr.states),
        };
        result.map_err(serde::de::Error::custom)
    }
}

/// A finite family of orthonormal bases of `C^n`, each stored column-wise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisFamily {
    bases: Vec<ComplexMatrix>,
}

impl BasisFamily {
    pub fn new(bases: Vec<ComplexMatrix>) -> Result<Self> {
        if let Some(first) = bases.first() {
            let n = first.rows();
            for (idx, b) in bases.iter().enumerate() {
                if b.rows() != n || !b.is_unitary(STRUCTURAL_TOL) {
                    return Err(precondition!("basis {idx} is not a unitary {n}x{n} matrix"));
                }
            }
        }
        Ok(Self { bases })
    }

    pub fn empty() -> Self {
        Self { bases: Vec::new() }
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.bases.first().map(ComplexMatrix::rows)
    }
}

/// Label `(shift, phase)` of the Bell state `(I ⊗ X^shift Z^phase)|ME_n⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BellLabel {
    pub shift: usize,
    pub phase: usize,
}

impl BellLabel {
    pub fn new(shift: usize, phase: usize) -> Self {
        Self { shift, phase }
    }

    /// All `n²` labels in `(shift, phase)` lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        (0..n).flat_map(|m| (0..n).map(move |l| Self::new(m, l))).collect()
    }
}

impl From<(usize, usize)> for BellLabel {
    fn from((shift, phase): (usize, usize)) -> Self {
        Self::new(shift, phase)
    }
}

/// The full generalized Bell basis `BB_n`, uniform priors, in [`BellLabel::all`] order.
pub fn bell_basis(n: usize) -> Result<StateEnsemble> {
    bell_states(n, &BellLabel::all(n))
}

/// Uniform ensemble of the listed Bell states.
pub fn bell_states(n: usize, labels: &[BellLabel]) -> Result<StateEnsemble> {
    if n < 2 {
        return Err(domain!("Bell basis needs n >= 2, got {n}"));
    }
    if labels.is_empty() {
        return Err(domain!("Bell subset must be nonempty"));
    }
    let mut seen = std::collections::HashSet::new();
    let mut states = Vec::with_capacity(labels.len());
    for label in labels {
        if label.shift >= n || label.phase >= n {
            return Err(domain!("Bell label ({}, {}) out of range for n = {n}", label.shift, label.phase));
        }
        if !seen.insert(*label) {
            return Err(domain!("duplicate Bell label ({}, {})", label.shift, label.phase));
        }
        states.push(BipartiteState::from_matrix(&bell_matrix(n, label.shift, label.phase)?, n)?);
    }
    StateEnsemble::uniform(states)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Orthonormal eigenbasis of a normal matrix with columns sorted by
/// eigenvalue angle in `[0, 2π)` and phases fixed so the first nonzero
/// component of each column is real and positive.
pub(crate) fn canonical_eigenbasis(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = m.normal_eigen(1e-9)?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    let angle = |z: C64| z.arg().rem_euclid(2.0 * std::f64::consts::PI);
    order.sort_by(|&a, &b| angle(values[a]).total_cmp(&angle(values[b])));
    let columns: Vec<Vec<C64>> = order
        .iter()
        .map(|&j| {
            let col = vectors.column(j);
            let pivot = col.iter().copied().find(|z| z.norm() > 1e-8).unwrap_or(C64::new(1.0, 0.0));
            let fix = pivot.conj() / pivot.norm();
            col.into_iter().map(|z| z * fix).collect()
        })
        .collect();
    ComplexMatrix::from_columns(&columns)
}

/// The `n + 1` mutually unbiased bases of `C^n` for prime `n`: the
/// eigenbases of `Z` and of `X Z^r` for `r = 0..n`.
pub fn mub_prime(n: usize) -> Result<BasisFamily> {
    if !is_prime(n) {
        return Err(domain!("mutually unbiased bases are only built for prime n, got {n}"));
    }
    let (x, z) = generalized_pauli(n)?;
    let mut bases = vec![ComplexMatrix::identity(n)];
    for r in 0..n {
        bases.push(canonical_eigenbasis(&(&x * &z.pow(r)))?);
    }
    BasisFamily::new(bases)
}

/// True iff every column of `candidate` has overlap `|⟨b|a⟩|² = 1/n` (within
/// `tol`) with every vector of every basis in `family`.
pub fn common_unbiased_basis_check(candidate: &ComplexMatrix, family: &BasisFamily, tol: f64) -> Result<bool> {
    Ok(unbiasedness_violation(candidate, family, tol)?.is_none())
}

/// Index of the first family member that `candidate` is not unbiased to,
/// together with the offending deviation from `1/n`.
pub(crate) fn unbiasedness_violation(
    candidate: &ComplexMatrix,
    family: &BasisFamily,
    tol: f64,
) -> Result<Option<(usize, f64)>> {
    let n = candidate.rows();
    if let Some(d) = family.dim() {
        if d != n {
            return Err(domain!("candidate acts on C^{n} but the family lives in C^{d}"));
        }
    }
    let target = 1.0 / n as f64;
    for (idx, basis) in family.bases().iter().enumerate() {
        let overlaps = &candidate.adjoint() * basis;
        let worst = overlaps.entries().iter().map(|z| (z.norm_sqr() - target).abs()).fold(0.0, f64::max);
        if worst > tol {
            return Ok(Some((idx, worst)));
        }
    }
    Ok(None)
}

/// Haar-distributed `n×n` unitary: QR of a complex Gaussian matrix with the
/// diagonal of `R` phase-normalised.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let gaussian = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    });
    gaussian.qr_unitary()
}

/// Three orthogonal maximally entangled states `B_i = U A_i W` with `U, W`
/// Haar-random and `A_i` three distinct generalized Bell matrices, all drawn
/// from a ChaCha20 stream seeded with `seed`.
pub fn random_orthogonal_me_triple(n: usize, seed: u64) -> Result<StateEnsemble> {
    random_orthogonal_me_states(n, 3, seed)
}

/// `k` orthogonal maximally entangled states built like
/// [`random_orthogonal_me_triple`] (which is the `k = 3` case).
pub fn random_orthogonal_me_states(n: usize, k: usize, seed: u64) -> Result<StateEnsemble> {
    if n < 2 {
        return Err(domain!("random maximally entangled states need n >= 2, got {n}"));
    }
    if k == 0 || k > n * n {
        return Err(domain!("need 1 <= k <= n² = {}, got k = {k}", n * n));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let u = haar_unitary(n, &mut rng);
    let w = haar_unitary(n, &mut rng);
    let picks = sample(&mut rng, n * n, k);
    let states = picks
        .iter()
        .map(|p| {
            let a = bell_matrix(n, p / n, p % n)?;
            BipartiteState::from_matrix(&(&(&u * &a) * &w), n)
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::uniform(states)
}

/// The product basis `{|u_i⟩|v_j⟩}` from the columns of unitaries `u` (Alice) and `v` (Bob).
pub fn local_product_basis(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<StateEnsemble> {
    if !u.is_unitary(STRUCTURAL_TOL) || !v.is_unitary(STRUCTURAL_TOL) {
        return Err(domain!("local product basis needs unitary u and v"));
    }
    let mut states = Vec::with_capacity(u.cols() * v.cols());
    for a in u.columns() {
        for b in v.columns() {
            states.push(BipartiteState::product(&a, &b)?);
        }
    }
    StateEnsemble::uniform(states)
}

/// `{ |φ_i⟩ = Σ_j u_ij |jj⟩ }` for an `n×n` unitary `u`, uniform priors.
pub fn simultaneously_diagonal_ensemble(u: &ComplexMatrix) -> Result<StateEnsemble> {
    if !u.is_unitary(STRUCTURAL_TOL) {
        return Err(domain!("simultaneously diagonal ensemble needs a unitary u"));
    }
    let n = u.rows();
    let states = (0..n)
        .map(|i| {
            let mut amps = vec![C64::new(0.0, 0.0); n * n];
            for j in 0..n {
                amps[j * n + j] = u.get(i, j);
            }
            BipartiteState::from_amplitudes(n, n, amps)
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::uniform(states)
}

/// The computational product basis `{|i⟩|j⟩}` of `C^m ⊗ C^n`.
pub fn product_basis(dim_a: usize, dim_b: usize) -> Result<StateEnsemble> {
    if dim_a == 0 || dim_b == 0 {
        return Err(domain!("product basis needs positive dimensions"));
    }
    let states = (0..dim_a * dim_b)
        .map(|idx| {
            let mut amps = vec![C64::new(0.0, 0.0); dim_a * dim_b];
            amps[idx] = C64::new(1.0, 0.0);
            BipartiteState::from_amplitudes(dim_a, dim_b, amps)
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::uniform(states)
}

/// The JSON ensemble descriptors accepted by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleDescriptor {
    Bell {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subset: Option<Vec<(usize, usize)>>,
    },
    RandomMeTriple {
        n: usize,
        seed: u64,
    },
    RandomMeStates {
        n: usize,
        k: usize,
        seed: u64,
    },
    Simdiag {
        u: ComplexMatrix,
    },
    ProductBasis {
        dim_a: usize,
        dim_b: usize,
    },
    Explicit {
        states: Vec<BipartiteState>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        priors: Option<Vec<f64>>,
    },
}

impl EnsembleDescriptor {
    pub fn build(&self) -> Result<StateEnsemble> {
        match self {
            Self::Bell { n, subset: None } => bell_basis(*n),
            Self::Bell { n, subset: Some(labels) } => {
                bell_states(*n, &labels.iter().map(|&l| l.into()).collect::<Vec<_>>())
            }
            Self::RandomMeTriple { n, seed } => random_orthogonal_me_triple(*n, *seed),
            Self::RandomMeStates { n, k, seed } => random_orthogonal_me_states(*n, *k, *seed),
            Self::Simdiag { u } => simultaneously_diagonal_ensemble(u),
            Self::ProductBasis { dim_a, dim_b } => product_basis(*dim_a, *dim_b),
            Self::Explicit { states, priors: None } => StateEnsemble::uniform(states.clone()),
            Self::Explicit { states, priors: Some(p) } => StateEnsemble::new(states.clone(), p.clone()),
        }
    }
}

impl std::str::FromStr for EnsembleDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::me_state;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn gram_is_identity(e: &StateEnsemble, tol: f64) -> bool {
        e.gram().max_abs_diff(&ComplexMatrix::identity(e.len())) <= tol
    }

    #[test]
    fn bell_basis_examples() {
        let b2 = bell_basis(2).unwrap();
        assert_eq!(b2.len(), 4);
        // (m, l) = (1, 0) sits at index 2.
        let amps = b2.states()[2].amplitudes();
        let expected = [0.0, S, S, 0.0];
        assert!(amps.iter().zip(expected).all(|(a, e)| (a - C64::new(e, 0.0)).norm() < 1e-12));

        let b3 = bell_basis(3).unwrap();
        assert_eq!(b3.len(), 9);
        assert!(gram_is_identity(&b3, 1e-12));
        assert!(bell_basis(1).is_err());
    }

    #[test]
    fn bell_basis_orthonormal_and_maximally_entangled() {
        for n in 2..=5 {
            let b = bell_basis(n).unwrap();
            assert!(gram_is_identity(&b, 1e-12));
            assert!(b.is_maximally_entangled(1e-12));
            assert!(b.is_uniform(1e-15));
        }
    }

    #[test]
    fn bell_subset_validation() {
        assert!(bell_states(3, &[BellLabel::new(3, 0)]).is_err());
        assert!(bell_states(3, &[BellLabel::new(1, 1), BellLabel::new(1, 1)]).is_err());
        assert!(bell_states(3, &[]).is_err());
    }

    fn brute_force_mub(family: &BasisFamily) -> f64 {
        let n = family.dim().unwrap();
        let mut worst: f64 = 0.0;
        for (a, ba) in family.bases().iter().enumerate() {
            for (b, bb) in family.bases().iter().enumerate() {
                if a == b {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let ov = inner(&ba.column(i), &bb.column(j)).norm_sqr();
                        worst = worst.max((ov - 1.0 / n as f64).abs());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn mub_examples() {
        let q = mub_prime(2).unwrap();
        assert_eq!(q.len(), 3);
        assert!(brute_force_mub(&q) < 1e-10);
        assert_eq!(mub_prime(3).unwrap().len(), 4);
        assert_eq!(mub_prime(5).unwrap().len(), 6);
        for n in [2, 3, 5, 7] {
            assert!(brute_force_mub(&mub_prime(n).unwrap()) < 1e-10, "n = {n}");
        }
        assert!(mub_prime(4).is_err());
        assert!(mub_prime(1).is_err());
    }

    /// Every nonidentity `X^a Z^b` has an eigenbasis that matches one family
    /// member up to phases and column order.
    #[test]
    fn pauli_eigenbases_live_in_the_mub_family() {
        for n in [2, 3, 5] {
            let family = mub_prime(n).unwrap();
            for a in 0..n {
                for b in 0..n {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let eig = canonical_eigenbasis(&bell_matrix(n, a, b).unwrap()).unwrap();
                    let found = family.bases().iter().any(|member| {
                        let ov = &member.adjoint() * &eig;
                        // permutation pattern: each column has exactly one unit-modulus entry
                        (0..n).all(|j| {
                            let col: Vec<f64> = ov.column(j).iter().map(|z| z.norm_sqr()).collect();
                            col.iter().filter(|&&v| (v - 1.0).abs() < 1e-9).count() == 1
                                && col.iter().filter(|&&v| v < 1e-9).count() == n - 1
                        })
                    });
                    assert!(found, "eigenbasis of X^{a} Z^{b} (n = {n}) not in family");
                }
            }
        }
    }

    #[test]
    fn common_unbiased_basis_examples() {
        let comp = BasisFamily::new(vec![ComplexMatrix::identity(3)]).unwrap();
        assert!(common_unbiased_basis_check(&ComplexMatrix::fourier(3), &comp, 1e-10).unwrap());
        assert!(!common_unbiased_basis_check(&ComplexMatrix::identity(3), &comp, 1e-10).unwrap());

        let mubs = mub_prime(3).unwrap();
        for i in 0..mubs.len() {
            let rest: Vec<_> =
                mubs.bases().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b.clone()).collect();
            let rest = BasisFamily::new(rest).unwrap();
            assert!(common_unbiased_basis_check(&mubs.bases()[i], &rest, 1e-10).unwrap());
        }
        assert!(common_unbiased_basis_check(&ComplexMatrix::identity(2), &comp, 1e-10).is_err());
    }

    #[test]
    fn random_triple_examples() {
        for n in [2, 3, 4] {
            let t = random_orthogonal_me_triple(n, 11).unwrap();
            assert!(gram_is_identity(&t, 1e-12));
            assert!(t.states().iter().all(|s| s.b_matrix().is_unitary(1e-12)));
        }
        let a = random_orthogonal_me_triple(3, 1).unwrap();
        let a2 = random_orthogonal_me_triple(3, 1).unwrap();
        let b = random_orthogonal_me_triple(3, 2).unwrap();
        assert_eq!(a.states(), a2.states());
        let cross = ComplexMatrix::from_fn(3, 3, |i, j| a.states()[i].inner(&b.states()[j]).unwrap());
        assert!(cross.max_abs_diff(&ComplexMatrix::identity(3)) > 1e-3);
    }

    #[test]
    fn random_triples_many_seeds() {
        for seed in 0..200 {
            let t = random_orthogonal_me_triple(3, seed).unwrap();
            assert!(t.is_orthogonal(1e-12), "seed {seed}");
            assert!(t.is_maximally_entangled(1e-12), "seed {seed}");
        }
    }

    #[test]
    fn simdiag_examples() {
        let id = simultaneously_diagonal_ensemble(&ComplexMatrix::identity(3)).unwrap();
        for (j, s) in id.states().iter().enumerate() {
            assert!((s.amplitudes()[j * 3 + j] - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((s.schmidt().lambda_max() - 1.0).abs() < 1e-12);
        }

        let f = simultaneously_diagonal_ensemble(&ComplexMatrix::fourier(3)).unwrap();
        assert!(f.is_maximally_entangled(1e-12));
        let me = me_state(3).unwrap();
        assert!(f.states().iter().any(|s| (s.inner(&me).unwrap().norm() - 1.0).abs() < 1e-12));

        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let u = haar_unitary(4, &mut rng);
        assert!(gram_is_identity(&simultaneously_diagonal_ensemble(&u).unwrap(), 1e-12));
        let not_unitary = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(simultaneously_diagonal_ensemble(&not_unitary).is_err());
    }

    #[test]
    fn ensemble_validation() {
        let s = me_state(2).unwrap();
        assert!(StateEnsemble::new(vec![s.clone()], vec![0.5]).is_err());
        assert!(StateEnsemble::new(vec![s.clone(), s.clone()], vec![1.5, -0.5]).is_err());
        assert!(StateEnsemble::new(vec![s, me_state(3).unwrap()], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn descriptors_parse_and_build() {
        let d: EnsembleDescriptor = r#"{"kind":"bell","n":2}"#.parse().unwrap();
        assert_eq!(d.build().unwrap().len(), 4);
        let d: EnsembleDescriptor = r#"{"kind":"random_me_triple","n":3,"seed":7}"#.parse().unwrap();
        assert!(d.build().unwrap().is_maximally_entangled(1e-12));
        let d: EnsembleDescriptor = r#"{"kind":"bell","n":5,"subset":[[0,0],[1,2],[3,1]]}"#.parse().unwrap();
        assert_eq!(d.build().unwrap().len(), 3);
        assert!(r#"{"kind":"bell","n":1}"#.parse::<EnsembleDescriptor>().unwrap().build().is_err());
        assert!(r#"{"kind":"mystery"}"#.parse::<EnsembleDescriptor>().is_err());

        let e = bell_basis(2).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let explicit = format!(r#"{{"kind":"explicit",{}"#, &text[1..]);
        let back = explicit.parse::<EnsembleDescriptor>().unwrap().build().unwrap();
        assert_eq!(back.states(), e.states());
    }
}
