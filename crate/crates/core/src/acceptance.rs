//! The acceptance suite: nine numerical checks, each reporting pass/fail
//! with a one-line summary. Shared by the test target and `locc selftest`.

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{entropy_bound_bits, schmidt_bound, unitary_families, unitary_family_bound, verdict, Verdict};
use crate::ensembles::{
    bell_basis, bell_states, haar_unitary, local_product_basis, mub_prime, product_basis, random_orthogonal_me_states,
    random_orthogonal_me_triple, BellLabel,
};
use crate::library::{bell_discard_entry, cub_protocol, protocol_library};
use crate::locc::{evaluate, simulate, standard_bell_protocol};
use crate::qstate::{transpose_identity_check, ComplexMatrix};
use crate::synth::synthesize_three_qutrit_protocol;
use crate::C64;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {} [{status}] {} ({:.2}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

fn timed(id: u8, name: &'static str, check: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = check();
    CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Three random orthogonal maximally entangled qutrit pairs, 200 seeds:
/// the synthesized protocol succeeds with probability ≥ 1 − 1e-9.
pub fn three_qutrit_triples() -> CriterionResult {
    timed(1, "random qutrit triples are perfectly distinguished", || {
        let outcomes: Vec<std::result::Result<f64, String>> = (0..200u64)
            .into_par_iter()
            .map(|seed| {
                let ensemble = random_orthogonal_me_triple(3, seed).map_err(|e| e.to_string())?;
                let protocol = synthesize_three_qutrit_protocol(&ensemble)
                    .and_then(|s| s.to_protocol())
                    .map_err(|e| format!("seed {seed}: {e}"))?;
                evaluate(&protocol, &ensemble).map(|e| e.success_probability).map_err(|e| format!("seed {seed}: {e}"))
            })
            .collect();
        let mut worst = f64::INFINITY;
        for (seed, outcome) in outcomes.iter().enumerate() {
            match outcome {
                Ok(p) => worst = worst.min(*p),
                Err(e) => return (false, e.clone()),
            }
            if worst < 1.0 - 1e-9 {
                return (false, format!("seed {seed}: success {worst}"));
            }
        }
        (true, format!("200 triples, min success {worst:.15}"))
    })
}

/// Subsets of `k` Bell states of `BB_n` with `k(k−1)/2 ≤ n` for
/// `n ∈ {3, 5, 7}`: a common unbiased basis from the MUB list yields a
/// perfect protocol. 50 random subsets of the largest admissible size per
/// `n` plus 10 of every smaller size.
pub fn bell_subsets_via_cub() -> CriterionResult {
    timed(2, "Bell subsets with k(k-1)/2 <= n are perfectly distinguished", || {
        let mut cases = Vec::new();
        for n in [3usize, 5, 7] {
            let kmax = (2..).take_while(|k| k * (k - 1) / 2 <= n).last().expect("k = 2 always fits");
            let mut rng = ChaCha20Rng::seed_from_u64(1000 + n as u64);
            for k in 2..=kmax {
                let count = if k == kmax { 50 } else { 10 };
                for _ in 0..count {
                    let labels: Vec<BellLabel> =
                        sample(&mut rng, n * n, k).iter().map(|p| BellLabel::new(p / n, p % n)).collect();
                    cases.push((n, labels));
                }
            }
        }
        let outcomes: Vec<std::result::Result<f64, String>> = cases
            .par_iter()
            .map(|(n, labels)| {
                let ensemble = bell_states(*n, labels).map_err(|e| e.to_string())?;
                let protocol = cub_protocol(&ensemble).map_err(|e| format!("n={n} {labels:?}: {e}"))?;
                evaluate(&protocol, &ensemble).map(|e| e.success_probability).map_err(|e| e.to_string())
            })
            .collect();
        let mut worst = f64::INFINITY;
        for ((n, labels), outcome) in cases.iter().zip(&outcomes) {
            match outcome {
                Ok(p) if *p >= 1.0 - 1e-9 => worst = worst.min(*p),
                Ok(p) => return (false, format!("n={n} {labels:?}: success {p}")),
                Err(e) => return (false, e.clone()),
            }
        }
        (true, format!("{} subsets over n in {{3,5,7}}, min success {worst:.15}", cases.len()))
    })
}

/// Standard Bell protocol on `BB_n`, `n = 2..5`: success `1/n` and `I = log₂ n`.
pub fn bell_basis_saturation() -> CriterionResult {
    timed(3, "standard protocol on the full Bell basis", || {
        let mut details = Vec::new();
        for n in 2..=5 {
            let result = bell_basis(n)
                .and_then(|e| Ok((standard_bell_protocol(n, &BellLabel::all(n))?, e)))
                .and_then(|(p, e)| evaluate(&p, &e));
            let eval = match result {
                Ok(e) => e,
                Err(e) => return (false, format!("n={n}: {e}")),
            };
            let dp = (eval.success_probability - 1.0 / n as f64).abs();
            let di = (eval.mutual_information_bits - (n as f64).log2()).abs();
            if dp > 1e-12 || di > 1e-10 {
                return (false, format!("n={n}: success {} info {}", eval.success_probability, eval.mutual_information_bits));
            }
            details.push(format!("n={n}: P={:.12} I={:.10}", eval.success_probability, eval.mutual_information_bits));
        }
        (true, details.join(", "))
    })
}

/// Discard strategies reach the exact worst-case values `2/3`, `1/2` and `3/k`.
pub fn discard_exact_values() -> CriterionResult {
    timed(4, "discard strategies hit the exact worst-case values", || {
        let mut cases = vec![(2usize, 3usize, 2.0 / 3.0), (2, 4, 0.5)];
        cases.extend((4..=9).map(|k| (3, k, 3.0 / k as f64)));
        let mut worst: f64 = 0.0;
        for (n, k, target) in cases {
            let eval = match bell_discard_entry(n, k).and_then(|e| evaluate(&e.protocol, &e.ensemble)) {
                Ok(e) => e,
                Err(e) => return (false, format!("n={n} k={k}: {e}")),
            };
            let dev = (eval.success_probability - target).abs();
            if dev > 1e-12 {
                return (false, format!("n={n} k={k}: success {} vs {target}", eval.success_probability));
            }
            worst = worst.max(dev);
        }
        (true, format!("8 ensembles, max deviation {worst:.2e}"))
    })
}

/// No library protocol beats an applicable upper bound: the Schmidt and
/// local-unitary bounds on success, and the entropy bound on `I(V; leaf)`.
pub fn bound_consistency() -> CriterionResult {
    timed(5, "library protocols respect every applicable bound", || {
        let library = match protocol_library() {
            Ok(l) => l,
            Err(e) => return (false, e.to_string()),
        };
        let mut checks = 0;
        let mut slack = f64::INFINITY;
        for entry in &library {
            let eval = match evaluate(&entry.protocol, &entry.ensemble) {
                Ok(e) => e,
                Err(e) => return (false, format!("{}: {e}", entry.name)),
            };
            let mut bounds: Vec<(&str, f64)> = Vec::new();
            if let Ok(b) = schmidt_bound(&entry.ensemble) {
                bounds.push(("schmidt", b));
            }
            for family in unitary_families(&entry.ensemble) {
                if let Ok(b) = unitary_family_bound(&entry.ensemble, family) {
                    bounds.push(("unitary family", b));
                }
            }
            for (name, bound) in bounds {
                checks += 1;
                slack = slack.min(bound - eval.success_probability);
                if eval.success_probability > bound + 1e-9 {
                    return (false, format!("{}: success {} exceeds {name} bound {bound}", entry.name, eval.success_probability));
                }
            }
            let entropy = entropy_bound_bits(&entry.ensemble);
            checks += 1;
            if eval.mutual_information_bits > entropy + 1e-9 {
                return (false, format!("{}: I = {} exceeds entropy bound {entropy}", entry.name, eval.mutual_information_bits));
            }
        }
        (true, format!("{} pairs, {checks} inequalities, min success slack {slack:.2e}", library.len()))
    })
}

/// `√n (I ⊗ A)|ME_n⟩ = √m (Aᵀ ⊗ I)|ME_m⟩` for 1000 random complex matrices.
pub fn transpose_identity_sweep() -> CriterionResult {
    timed(6, "transpose identity on random matrices", || {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let m = rng.random_range(1..=5);
            let n = rng.random_range(1..=5);
            let a = ComplexMatrix::from_fn(m, n, |_, _| {
                C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            });
            worst = worst.max(transpose_identity_check(&a));
        }
        (worst <= 1e-12, format!("1000 matrices, max deviation {worst:.2e}"))
    })
}

/// Brute-force unbiasedness of `mub_prime(n)` for `n ∈ {2, 3, 5, 7}`.
pub fn mub_verification() -> CriterionResult {
    timed(7, "prime-dimension MUBs are mutually unbiased", || {
        let mut worst: f64 = 0.0;
        for n in [2usize, 3, 5, 7] {
            let family = match mub_prime(n) {
                Ok(f) => f,
                Err(e) => return (false, format!("n={n}: {e}")),
            };
            if family.len() != n + 1 {
                return (false, format!("n={n}: {} bases", family.len()));
            }
            let bases = family.bases();
            for (i, a) in bases.iter().enumerate() {
                for b in &bases[i + 1..] {
                    for u in a.columns() {
                        for v in b.columns() {
                            let overlap = crate::qstate::inner(&u, &v).norm_sqr();
                            worst = worst.max((overlap - 1.0 / n as f64).abs());
                        }
                    }
                }
            }
        }
        (worst <= 1e-10, format!("n in {{2,3,5,7}}, max deviation from 1/n {worst:.2e}"))
    })
}

/// Verdicts on known cases.
pub fn verdict_correctness() -> CriterionResult {
    timed(8, "verdicts on known ensembles", || {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let mut cases = vec![
            ("full BB_2", bell_basis(2), Verdict::PerfectImpossible),
            ("product basis 2x2", product_basis(2, 2), Verdict::PerfectPossible),
            ("product basis 2x3", product_basis(2, 3), Verdict::PerfectPossible),
            ("product basis 3x3", product_basis(3, 3), Verdict::PerfectPossible),
            (
                "rotated product basis 3x3",
                local_product_basis(&haar_unitary(3, &mut rng), &haar_unitary(3, &mut rng)),
                Verdict::PerfectPossible,
            ),
            (
                "rotated product basis 2x4",
                local_product_basis(&haar_unitary(2, &mut rng), &haar_unitary(4, &mut rng)),
                Verdict::PerfectPossible,
            ),
        ];
        for seed in 0..5u64 {
            cases.push(("random ME qutrit triple", random_orthogonal_me_triple(3, seed), Verdict::PerfectPossible));
            cases.push(("4 random ME qutrit states", random_orthogonal_me_states(3, 4, seed), Verdict::PerfectImpossible));
        }
        let labels: Vec<BellLabel> = BellLabel::all(3).into_iter().take(4).collect();
        cases.push(("4 Bell states of BB_3", bell_states(3, &labels), Verdict::PerfectImpossible));
        let total = cases.len();
        for (name, ensemble, expected) in cases {
            let report = match ensemble.and_then(|e| verdict(&e)) {
                Ok(r) => r,
                Err(e) => return (false, format!("{name}: {e}")),
            };
            if report.verdict != expected {
                return (false, format!("{name}: got {:?}, expected {expected:?}", report.verdict));
            }
        }
        (true, format!("{total} ensembles classified as expected"))
    })
}

/// Monte Carlo with 10⁵ trials agrees with exact evaluation within 5σ for
/// every library protocol.
pub fn monte_carlo_agreement() -> CriterionResult {
    timed(9, "Monte Carlo agrees with exact evaluation", || {
        let library = match protocol_library() {
            Ok(l) => l,
            Err(e) => return (false, e.to_string()),
        };
        let mut worst_sigma: f64 = 0.0;
        for (i, entry) in library.iter().enumerate() {
            let exact = match evaluate(&entry.protocol, &entry.ensemble) {
                Ok(e) => e.success_probability,
                Err(e) => return (false, format!("{}: {e}", entry.name)),
            };
            let sim = match simulate(&entry.protocol, &entry.ensemble, 100_000, 9000 + i as u64) {
                Ok(s) => s,
                Err(e) => return (false, format!("{}: {e}", entry.name)),
            };
            if !sim.agrees_with(exact) {
                return (false, format!("{}: simulated {} vs exact {exact}", entry.name, sim.success_rate));
            }
            let sigma = (exact * (1.0 - exact) / sim.trials as f64).sqrt();
            if sigma > 0.0 {
                worst_sigma = worst_sigma.max((sim.success_rate - exact).abs() / sigma);
            }
        }
        (true, format!("{} protocols at 1e5 trials, max |z| = {worst_sigma:.2}", library.len()))
    })
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        three_qutrit_triples(),
        bell_subsets_via_cub(),
        bell_basis_saturation(),
        discard_exact_values(),
        bound_consistency(),
        transpose_identity_sweep(),
        mub_verification(),
        verdict_correctness(),
        monte_carlo_agreement(),
    ]
}
