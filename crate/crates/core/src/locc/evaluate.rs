use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::protocol::{LoccProtocol, Party, ProtocolNode};
use crate::ensembles::StateEnsemble;
use crate::error::{domain, numerical, Result};
use crate::qstate::ComplexMatrix;

/// Branches whose (per-state) weight drops below this are not expanded.
pub const PRUNE_WEIGHT: f64 = 1e-14;

/// Per-state leaf weights must sum to one within this tolerance.
pub const CONSERVATION_TOL: f64 = 1e-10;

/// Trials per independently seeded chunk in [`simulate`].
pub const SIMULATION_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoUnit {
    #[default]
    Bits,
    Nats,
}

/// One cell of the joint distribution `P(V = state, leaf)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointEntry {
    pub state: usize,
    /// Outcome indices from the root to the leaf.
    pub path: Vec<usize>,
    pub guess: usize,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolEvaluation {
    pub success_probability: f64,
    pub mutual_information_bits: f64,
    /// Largest deviation of a per-state total leaf weight from one.
    pub conservation_error: f64,
    pub joint_table: Vec<JointEntry>,
}

impl ProtocolEvaluation {
    pub fn mutual_information(&self, unit: InfoUnit) -> f64 {
        match unit {
            InfoUnit::Bits => self.mutual_information_bits,
            InfoUnit::Nats => self.mutual_information_bits * std::f64::consts::LN_2,
        }
    }
}

/// Applies one Kraus operator to a state in matrix form (`|ψ⟩ = (I⊗B)|ME⟩`
/// up to the √m normalisation): Alice's `K` acts as `B ↦ B Kᵀ`, Bob's `L`
/// as `B ↦ L B`.
fn apply_kraus(b: &ComplexMatrix, actor: Party, op: &ComplexMatrix) -> ComplexMatrix {
    match actor {
        Party::Alice => b * &op.transpose(),
        Party::Bob => op * b,
    }
}

fn check_compatible(protocol: &LoccProtocol, ensemble: &StateEnsemble) -> Result<()> {
    if protocol.dims() != ensemble.dims() {
        return Err(domain!(
            "protocol acts on {:?} but the ensemble lives in {:?}",
            protocol.dims(),
            ensemble.dims()
        ));
    }
    if protocol.max_guess() >= ensemble.len() {
        return Err(domain!(
            "protocol guesses label {} but the ensemble has only {} states",
            protocol.max_guess(),
            ensemble.len()
        ));
    }
    Ok(())
}

fn collect_leaves(
    node: &ProtocolNode,
    b: ComplexMatrix,
    norm: f64,
    path: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, usize, f64)>,
) {
    match node {
        ProtocolNode::Guess { guess } => out.push((path.clone(), *guess, b.norm_sqr() / norm)),
        ProtocolNode::Measure { actor, povm, children } => {
            for (outcome, (op, child)) in povm.elements().iter().zip(children).enumerate() {
                let next = apply_kraus(&b, *actor, op);
                if next.norm_sqr() / norm < PRUNE_WEIGHT {
                    continue;
                }
                path.push(outcome);
                collect_leaves(child, next, norm, path, out);
                path.pop();
            }
        }
    }
}

/// Exact success probability, joint distribution and mutual information
/// `I(V; leaf)` of a protocol applied to an ensemble.
pub fn evaluate(protocol: &LoccProtocol, ensemble: &StateEnsemble) -> Result<ProtocolEvaluation> {
    check_compatible(protocol, ensemble)?;
    let m = ensemble.dims().0 as f64;
    let per_state: Vec<Vec<(Vec<usize>, usize, f64)>> = ensemble
        .states()
        .par_iter()
        .map(|state| {
            let mut out = Vec::new();
            collect_leaves(protocol.root(), state.b_matrix().clone(), m, &mut Vec::new(), &mut out);
            out
        })
        .collect();

    let mut conservation_error: f64 = 0.0;
    for leaves in &per_state {
        let total: f64 = leaves.iter().map(|l| l.2).sum();
        conservation_error = conservation_error.max((total - 1.0).abs());
    }
    if conservation_error > CONSERVATION_TOL {
        return Err(numerical!("leaf weights sum to one only within {conservation_error:.3e}"));
    }

    let mut joint_table = Vec::new();
    let mut success = 0.0;
    for (state, (leaves, &prior)) in per_state.into_iter().zip(ensemble.priors()).enumerate() {
        for (path, guess, weight) in leaves {
            let probability = prior * weight;
            if guess == state {
                success += probability;
            }
            joint_table.push(JointEntry { state, path, guess, probability });
        }
    }
    let mutual_information_bits = mutual_information_bits(&joint_table, ensemble.len());
    Ok(ProtocolEvaluation { success_probability: success, mutual_information_bits, conservation_error, joint_table })
}

fn mutual_information_bits(table: &[JointEntry], k: usize) -> f64 {
    let mut p_state = vec![0.0; k];
    let mut p_leaf: BTreeMap<&[usize], f64> = BTreeMap::new();
    for e in table {
        p_state[e.state] += e.probability;
        *p_leaf.entry(&e.path).or_default() += e.probability;
    }
    let info: f64 = table
        .iter()
        .filter(|e| e.probability > 0.0)
        .map(|e| e.probability * (e.probability / (p_state[e.state] * p_leaf[e.path.as_slice()])).log2())
        .sum();
    info.max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub seed: u64,
}

impl SimulationResult {
    /// Whether the empirical rate lies within five binomial standard
    /// deviations of `exact` (plus a 1e-9 allowance for rounding in `exact`).
    pub fn agrees_with(&self, exact: f64) -> bool {
        let p = exact.clamp(0.0, 1.0);
        let sigma = (p * (1.0 - p) / self.trials as f64).sqrt();
        (self.success_rate - exact).abs() <= 5.0 * sigma + 1e-9
    }
}

fn sample_index<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // Rounding left `u` past the end: take the last branch with weight.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

fn run_trial<R: Rng>(protocol: &LoccProtocol, ensemble: &StateEnsemble, rng: &mut R) -> bool {
    let v = sample_index(ensemble.priors(), rng);
    let mut b = ensemble.states()[v].b_matrix().clone();
    let mut node = protocol.root();
    loop {
        match node {
            ProtocolNode::Guess { guess } => return *guess == v,
            ProtocolNode::Measure { actor, povm, children } => {
                let branches: Vec<ComplexMatrix> = povm.elements().iter().map(|op| apply_kraus(&b, *actor, op)).collect();
                let weights: Vec<f64> = branches.iter().map(ComplexMatrix::norm_sqr).collect();
                let pick = sample_index(&weights, rng);
                let scale = weights[pick].sqrt();
                b = branches[pick].scale((1.0 / scale).into());
                node = &children[pick];
            }
        }
    }
}

/// Monte Carlo estimate of the success probability.
///
/// Trials are split into chunks of [`SIMULATION_CHUNK`], each driven by its
/// own ChaCha8 stream of `seed`, so the result does not depend on how rayon
/// schedules the chunks.
pub fn simulate(protocol: &LoccProtocol, ensemble: &StateEnsemble, trials: usize, seed: u64) -> Result<SimulationResult> {
    check_compatible(protocol, ensemble)?;
    if trials == 0 {
        return Err(domain!("simulation needs at least one trial"));
    }
    let chunks = trials.div_ceil(SIMULATION_CHUNK);
    let successes: usize = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let len = SIMULATION_CHUNK.min(trials - chunk * SIMULATION_CHUNK);
            (0..len).filter(|_| run_trial(protocol, ensemble, &mut rng)).count()
        })
        .sum();
    Ok(SimulationResult { trials, successes, success_rate: successes as f64 / trials as f64, seed })
}
