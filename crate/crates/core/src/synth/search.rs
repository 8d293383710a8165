use serde::Serialize;

use super::cub::{default_cub_candidates, find_cub, pairwise_eigenbasis_family, synthesize_cub_protocol};
use super::qutrit::synthesize_three_qutrit_protocol;
use crate::ensembles::StateEnsemble;
use crate::locc::{evaluate, product_state_protocol, two_state_protocol, LoccProtocol};
use crate::qstate::ComplexMatrix;

/// A protocol is accepted as perfect when it evaluates to at least `1 − PERFECT_TOL`.
pub const PERFECT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct FoundProtocol {
    pub method: &'static str,
    pub success_probability: f64,
    pub protocol: LoccProtocol,
}

fn cub_attempt(ensemble: &StateEnsemble) -> Option<LoccProtocol> {
    let family = pairwise_eigenbasis_family(ensemble).ok()?;
    let m = ensemble.dims().0;
    let mut candidates = default_cub_candidates(m);
    candidates.push(ComplexMatrix::fourier(m));
    candidates.push(ComplexMatrix::identity(m));
    let cub = find_cub(&family, &candidates)?;
    synthesize_cub_protocol(ensemble, &cub).ok()?.to_protocol().ok()
}

/// Tries every shipped construction and returns the first one that
/// evaluates to success `≥ 1 − PERFECT_TOL`.
pub fn search_perfect_protocol(ensemble: &StateEnsemble) -> Option<FoundProtocol> {
    let (m, n) = ensemble.dims();
    let states = ensemble.states();
    type Attempt<'a> = (&'static str, Box<dyn Fn() -> Option<LoccProtocol> + 'a>);
    let attempts: Vec<Attempt> = vec![
        ("single_state", Box::new(move || (states.len() == 1).then(|| LoccProtocol::blind_guess(m, n, 0).ok()).flatten())),
        ("two_state", Box::new(|| (states.len() == 2).then(|| two_state_protocol(&states[0], &states[1]).ok()).flatten())),
        ("product_splitting", Box::new(|| product_state_protocol(ensemble).ok().flatten())),
        (
            "three_qutrit",
            Box::new(|| synthesize_three_qutrit_protocol(ensemble).ok().and_then(|s| s.to_protocol().ok())),
        ),
        ("common_unbiased_basis", Box::new(|| cub_attempt(ensemble))),
    ];
    attempts.into_iter().find_map(|(method, attempt)| {
        let protocol = attempt()?;
        let eval = evaluate(&protocol, ensemble).ok()?;
        (eval.success_probability >= 1.0 - PERFECT_TOL).then_some(FoundProtocol {
            method,
            success_probability: eval.success_probability,
            protocol,
        })
    })
}
