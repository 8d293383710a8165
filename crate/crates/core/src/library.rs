//! A fixed collection of ensemble/protocol pairs used for consistency
//! sweeps, Monte Carlo cross-checks and benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::ensembles::{
    bell_basis, bell_states, haar_unitary, local_product_basis, product_basis, random_orthogonal_me_states,
    random_orthogonal_me_triple, simultaneously_diagonal_ensemble, BellLabel, StateEnsemble,
};
use crate::error::{precondition, Result};
use crate::locc::{discard_protocol, product_state_protocol, standard_bell_protocol, two_state_protocol, LoccProtocol};
use crate::qstate::{BipartiteState, ComplexMatrix};
use crate::synth::{
    default_cub_candidates, find_cub, pairwise_eigenbasis_family, synthesize_cub_protocol,
    synthesize_three_qutrit_protocol,
};
use crate::C64;

#[derive(Clone, Debug)]
pub struct LibraryEntry {
    pub name: String,
    pub ensemble: StateEnsemble,
    pub protocol: LoccProtocol,
}

impl LibraryEntry {
    fn new(name: impl Into<String>, ensemble: StateEnsemble, protocol: LoccProtocol) -> Self {
        Self { name: name.into(), ensemble, protocol }
    }
}

/// Keep the states `kept` of `ensemble` and run `inner` (built for that sub-ensemble).
fn discarding(ensemble: &StateEnsemble, kept: &[usize], inner: impl FnOnce(&StateEnsemble) -> Result<LoccProtocol>) -> Result<LoccProtocol> {
    let sub = ensemble.select(kept)?;
    discard_protocol(&inner(&sub)?, kept, ensemble.len())
}

fn two_state_of(sub: &StateEnsemble) -> Result<LoccProtocol> {
    two_state_protocol(&sub.states()[0], &sub.states()[1])
}

fn three_qutrit_of(sub: &StateEnsemble) -> Result<LoccProtocol> {
    synthesize_three_qutrit_protocol(sub)?.to_protocol()
}

/// CUB protocol using the default candidate list.
pub fn cub_protocol(ensemble: &StateEnsemble) -> Result<LoccProtocol> {
    let family = pairwise_eigenbasis_family(ensemble)?;
    let cub = find_cub(&family, &default_cub_candidates(ensemble.dims().0))
        .ok_or_else(|| precondition!("no candidate basis is unbiased to every pairwise eigenbasis"))?;
    synthesize_cub_protocol(ensemble, &cub)?.to_protocol()
}

/// Worst-case discard constructions: the first `k` Bell states of `BB_n`,
/// keeping the first two (`n = 2`) or three (`n = 3`) and identifying those perfectly.
pub fn bell_discard_entry(n: usize, k: usize) -> Result<LibraryEntry> {
    let labels: Vec<BellLabel> = BellLabel::all(n).into_iter().take(k).collect();
    let ensemble = bell_states(n, &labels)?;
    let protocol = match n {
        2 => discarding(&ensemble, &[0, 1], two_state_of)?,
        3 => discarding(&ensemble, &[0, 1, 2], three_qutrit_of)?,
        _ => return Err(precondition!("discard entries are built for n = 2 or 3")),
    };
    Ok(LibraryEntry::new(format!("bell{n}_k{k}_discard"), ensemble, protocol))
}

fn random_pair(m: usize, n: usize, seed: u64) -> Result<StateEnsemble> {
    use rand::Rng;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut random = || -> Vec<C64> { (0..m * n).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect() };
    let a = BipartiteState::from_amplitudes(m, n, random())?;
    let raw = random();
    let overlap = crate::qstate::inner(a.amplitudes(), &raw);
    let orth: Vec<C64> = raw.iter().zip(a.amplitudes()).map(|(r, x)| r - overlap * x).collect();
    let b = BipartiteState::from_amplitudes(m, n, orth)?;
    StateEnsemble::uniform(vec![a, b])
}

/// The shipped ensemble/protocol pairs.
pub fn protocol_library() -> Result<Vec<LibraryEntry>> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push(LibraryEntry::new(format!("bell{n}_full_standard"), bell_basis(n)?, standard_bell_protocol(n, &BellLabel::all(n))?));
    }
    for n in [3usize, 5] {
        let labels: Vec<BellLabel> = (0..n).map(|s| BellLabel::new(s, (s * s) % n)).collect();
        out.push(LibraryEntry::new(format!("bell{n}_distinct_shifts"), bell_states(n, &labels)?, standard_bell_protocol(n, &labels)?));
    }
    let padded = standard_bell_protocol(3, &BellLabel::all(3))?.padded();
    out.push(LibraryEntry::new("bell3_full_standard_padded", bell_basis(3)?, padded));
    let skewed = bell_basis(2)?.with_priors(vec![0.4, 0.3, 0.2, 0.1])?;
    out.push(LibraryEntry::new("bell2_full_skewed_priors", skewed, standard_bell_protocol(2, &BellLabel::all(2))?));

    for k in 3..=4 {
        out.push(bell_discard_entry(2, k)?);
    }
    for k in 4..=9 {
        out.push(bell_discard_entry(3, k)?);
    }

    for seed in 0..5 {
        let ensemble = random_orthogonal_me_triple(3, seed)?;
        let protocol = three_qutrit_of(&ensemble)?;
        out.push(LibraryEntry::new(format!("random_triple3_seed{seed}"), ensemble, protocol));
    }
    let four = random_orthogonal_me_states(3, 4, 11)?;
    let protocol = discarding(&four, &[0, 1, 2], three_qutrit_of)?;
    out.push(LibraryEntry::new("random_me3_k4_discard", four, protocol));

    let cub_cases: [(usize, &[(usize, usize)]); 5] = [
        (3, &[(0, 0), (1, 0), (1, 1)]),
        (3, &[(0, 1), (2, 2), (1, 0)]),
        (5, &[(0, 0), (1, 2), (3, 4)]),
        (5, &[(2, 1), (4, 4), (0, 3)]),
        (7, &[(0, 0), (1, 3), (2, 5), (6, 6)]),
    ];
    for (i, (n, labels)) in cub_cases.iter().enumerate() {
        let labels: Vec<BellLabel> = labels.iter().map(|&l| l.into()).collect();
        let ensemble = bell_states(*n, &labels)?;
        let protocol = cub_protocol(&ensemble)?;
        out.push(LibraryEntry::new(format!("bell{n}_cub_{i}"), ensemble, protocol));
    }

    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    for n in 2..=4 {
        let ensemble = simultaneously_diagonal_ensemble(&haar_unitary(n, &mut rng))?;
        let protocol = synthesize_cub_protocol(&ensemble, &ComplexMatrix::fourier(n))?.to_protocol()?;
        out.push(LibraryEntry::new(format!("simdiag{n}_fourier"), ensemble, protocol));
    }

    for (m, n) in [(2, 2), (2, 3)] {
        let ensemble = product_basis(m, n)?;
        let protocol = product_state_protocol(&ensemble)?.ok_or_else(|| precondition!("product basis did not split"))?;
        out.push(LibraryEntry::new(format!("product_basis_{m}x{n}"), ensemble, protocol));
    }
    let rotated = local_product_basis(&haar_unitary(3, &mut rng), &haar_unitary(2, &mut rng))?;
    let protocol = product_state_protocol(&rotated)?.ok_or_else(|| precondition!("rotated product basis did not split"))?;
    out.push(LibraryEntry::new("rotated_product_basis_3x2", rotated, protocol));

    for (seed, (m, n)) in [(1u64, (2usize, 3usize)), (2, (3, 3))] {
        let ensemble = random_pair(m, n, seed)?;
        let protocol = two_state_of(&ensemble)?;
        out.push(LibraryEntry::new(format!("random_pair_{m}x{n}"), ensemble, protocol));
    }

    out.push(LibraryEntry::new("random_triple3_blind_guess", random_orthogonal_me_triple(3, 99)?, LoccProtocol::blind_guess(3, 3, 1)?));
    Ok(out)
}
