//! Closed-form bounds on LOCC discrimination and a three-valued verdict.

use serde::{Deserialize, Serialize};

use crate::ensembles::{StateEnsemble, STRUCTURAL_TOL};
use crate::error::{domain, precondition, Result};
use crate::qstate::ComplexMatrix;
use crate::synth::search_perfect_protocol;

/// An upper bound below `1 − IMPOSSIBLE_MARGIN` rules out perfect discrimination.
pub const IMPOSSIBLE_MARGIN: f64 = 1e-12;

/// Shannon entropy in bits of a probability vector; entries below 1e-15 are dropped.
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 1e-15).map(|&x| -x * x.log2()).sum()
}

/// Von Neumann entropy in bits of a density matrix.
pub fn von_neumann_bits(rho: &ComplexMatrix) -> f64 {
    let (values, _) = rho.hermitian_eigen();
    shannon_bits(&values)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(domain!("bounds need at least two states, got k = {k}"));
    }
    Ok(())
}

/// Bounds on the worst-case success probability over `k` orthogonal
/// maximally entangled states of `C^n ⊗ C^n`.
///
/// `k = 2` is always perfect; for `n = 3` the value `3/k` is exact; for
/// `n ≤ k` the range is `[2/k, n/k]`; for `2 < k < n` only `[2/k, 1]` is known.
pub fn fme_bounds(k: usize, n: usize) -> Result<(f64, f64)> {
    check_k(k)?;
    if n < 2 || k > n * n {
        return Err(domain!("need 2 <= n and k <= n², got k = {k}, n = {n}"));
    }
    let kf = k as f64;
    Ok(match (k, n) {
        (2, _) => (1.0, 1.0),
        (_, 3) => (3.0 / kf, 3.0 / kf),
        _ if n <= k => (2.0 / kf, n as f64 / kf),
        _ => (2.0 / kf, 1.0),
    })
}

fn ceil_sqrt(k: usize) -> usize {
    (1..).find(|r| r * r >= k).expect("k is finite")
}

/// Bounds on the worst-case success probability over `k` orthogonal states
/// of `C^n ⊗ C^n`: `[2/k, ⌈√k⌉/k]`, exact for `k ≤ 4`.
pub fn f_bounds(k: usize, n: usize) -> Result<(f64, f64)> {
    check_k(k)?;
    if n < 2 || k > n * n {
        return Err(domain!("need 2 <= n and k <= n², got k = {k}, n = {n}"));
    }
    let kf = k as f64;
    Ok((2.0 / kf, ceil_sqrt(k) as f64 / kf))
}

/// Inclusion bounds for `k` orthogonal states of `C^m ⊗ C^n`, `m ≤ n`:
/// the lower bound of `f(k, n)`, and above either `f(k, m)` (when `k ≤ m²`)
/// or `n/k` (when `m² < k ≤ mn`).
pub fn f_mixed_dims_bounds(k: usize, m: usize, n: usize) -> Result<(f64, f64)> {
    check_k(k)?;
    if m == 0 || m > n {
        return Err(domain!("need 1 <= m <= n, got m = {m}, n = {n}"));
    }
    if k > m * n {
        return Err(domain!("at most mn = {} orthogonal states fit, got k = {k}", m * n));
    }
    let lower = f_bounds(k, n)?.0;
    let upper = if k <= m * m { f_bounds(k, m)?.1 } else { n as f64 / k as f64 };
    Ok((lower, upper.min(1.0)))
}

/// Bounds in bits on the worst-case mutual information for `k` uniform
/// states of `C^n ⊗ C^n`: `[2/k, log₂⌈√k⌉]`.
pub fn g_bounds_bits(k: usize, n: usize) -> Result<(f64, f64)> {
    check_k(k)?;
    if k > n * n {
        return Err(domain!("need 1 < k <= n², got k = {k}, n = {n}"));
    }
    Ok((2.0 / k as f64, (ceil_sqrt(k) as f64).log2()))
}

fn require_uniform(ensemble: &StateEnsemble, what: &str) -> Result<()> {
    if !ensemble.is_uniform(1e-12) {
        return Err(domain!("{what} assumes equally likely states; the priors are not uniform"));
    }
    Ok(())
}

/// Largest Schmidt coefficient over the ensemble.
pub fn lambda_max(ensemble: &StateEnsemble) -> f64 {
    ensemble.states().iter().map(|s| s.schmidt().lambda_max()).fold(0.0, f64::max)
}

/// `min(1, λ_M·mn/k)` for equally likely states.
pub fn schmidt_bound(ensemble: &StateEnsemble) -> Result<f64> {
    require_uniform(ensemble, "the Schmidt-coefficient bound")?;
    let (m, n) = ensemble.dims();
    Ok((lambda_max(ensemble) * (m * n) as f64 / ensemble.len() as f64).min(1.0))
}

/// Which party can map every state to every other by a local unitary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitaryFamily {
    Alice,
    Bob,
}

/// Detects ensembles `|Ψ_i⟩ = (I ⊗ U_i)|Ψ_1⟩` (equal reduced states on
/// Alice's side) or `(U_i ⊗ I)|Ψ_1⟩` (equal reduced states on Bob's side).
pub fn unitary_families(ensemble: &StateEnsemble) -> Vec<UnitaryFamily> {
    let states = ensemble.states();
    let all_equal = |f: &dyn Fn(usize) -> ComplexMatrix| {
        let first = f(0);
        (1..states.len()).all(|i| f(i).max_abs_diff(&first) <= STRUCTURAL_TOL)
    };
    let mut out = Vec::new();
    if all_equal(&|i| states[i].reduced_bob()) {
        out.push(UnitaryFamily::Alice);
    }
    if all_equal(&|i| states[i].reduced_alice()) {
        out.push(UnitaryFamily::Bob);
    }
    out
}

/// `min(1, d/k)` where `d` is the dimension of the party holding the
/// unitaries, for equally likely members of a local-unitary family.
pub fn unitary_family_bound(ensemble: &StateEnsemble, family: UnitaryFamily) -> Result<f64> {
    require_uniform(ensemble, "the local-unitary-family bound")?;
    let (m, n) = ensemble.dims();
    let d = match family {
        UnitaryFamily::Alice => m,
        UnitaryFamily::Bob => n,
    };
    Ok((d as f64 / ensemble.len() as f64).min(1.0))
}

/// `S(ρ_A) + S(ρ_B) − Σ p_i S(ρ_A^i)` in bits, an upper bound on the
/// information accessible by LOCC.
pub fn entropy_bound_bits(ensemble: &StateEnsemble) -> f64 {
    let (m, n) = ensemble.dims();
    let mut rho_a = ComplexMatrix::zeros(m, m);
    let mut rho_b = ComplexMatrix::zeros(n, n);
    let mut local = 0.0;
    for (state, &p) in ensemble.states().iter().zip(ensemble.priors()) {
        let a = state.reduced_alice();
        local += p * von_neumann_bits(&a);
        rho_a = &rho_a + &a.scale(p.into());
        rho_b = &rho_b + &state.reduced_bob().scale(p.into());
    }
    von_neumann_bits(&rho_a) + von_neumann_bits(&rho_b) - local
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    PerfectPossible,
    PerfectImpossible,
    Unknown,
}

/// A named upper bound that applies to this ensemble. `upper_bound` bounds
/// the success probability, except for `locc_entropy` where it bounds the
/// ratio of accessible information to `H(V)`; perfect discrimination needs 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub upper_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub lambda_max: f64,
    pub f_lower: Option<f64>,
    pub f_upper: Option<f64>,
    pub fme_lower: Option<f64>,
    pub fme_upper: Option<f64>,
    pub schmidt_upper: Option<f64>,
    pub entropy_upper_bits: f64,
    pub g_lower_bits: Option<f64>,
    pub g_upper_bits: Option<f64>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// The construction that achieved perfect discrimination, if any.
    pub perfect_protocol: Option<String>,
}

/// All applicable bounds for `ensemble` and the resulting verdict:
/// `PerfectImpossible` if some witness is below one, `PerfectPossible` if
/// a shipped construction evaluates to success one, `Unknown` otherwise.
pub fn verdict(ensemble: &StateEnsemble) -> Result<BoundsReport> {
    if !ensemble.is_orthogonal(STRUCTURAL_TOL) {
        return Err(precondition!(
            "bounds need orthogonal states (max |⟨ψ_i|ψ_j⟩| = {:.3e})",
            ensemble.max_overlap()
        ));
    }
    let (m, n) = ensemble.dims();
    let k = ensemble.len();
    let (small, large) = (m.min(n), m.max(n));
    let f = if small == large { f_bounds(k, large) } else { f_mixed_dims_bounds(k, small, large) }.ok();
    let fme = if m == n && ensemble.is_maximally_entangled(STRUCTURAL_TOL) { fme_bounds(k, n).ok() } else { None };
    let g = if ensemble.is_uniform(1e-12) { g_bounds_bits(k, large).ok() } else { None };
    let uniform = ensemble.is_uniform(1e-12);
    let schmidt_upper = if uniform { Some(schmidt_bound(ensemble)?) } else { None };
    let entropy_upper_bits = entropy_bound_bits(ensemble);

    let mut witnesses = Vec::new();
    if let Some(bound) = schmidt_upper {
        witnesses.push(Witness { name: "schmidt_coefficient".into(), upper_bound: bound });
    }
    if uniform {
        for family in unitary_families(ensemble) {
            let name = match family {
                UnitaryFamily::Alice => "alice_unitary_family",
                UnitaryFamily::Bob => "bob_unitary_family",
            };
            witnesses.push(Witness { name: name.into(), upper_bound: unitary_family_bound(ensemble, family)? });
        }
    }
    let h_v = shannon_bits(ensemble.priors());
    if h_v > 1e-12 {
        witnesses.push(Witness { name: "locc_entropy".into(), upper_bound: (entropy_upper_bits / h_v).min(1.0) });
    }

    for (lo, hi) in [f, fme, g].into_iter().flatten() {
        assert!(lo <= hi + 1e-15, "lower bound {lo} exceeds upper bound {hi}");
    }

    let impossible = witnesses.iter().any(|w| w.upper_bound < 1.0 - IMPOSSIBLE_MARGIN);
    let found = if impossible { None } else { search_perfect_protocol(ensemble) };
    let verdict = match (impossible, &found) {
        (true, _) => Verdict::PerfectImpossible,
        (false, Some(_)) => Verdict::PerfectPossible,
        (false, None) => Verdict::Unknown,
    };
    Ok(BoundsReport {
        k,
        m,
        n,
        lambda_max: lambda_max(ensemble),
        f_lower: f.map(|b| b.0),
        f_upper: f.map(|b| b.1),
        fme_lower: fme.map(|b| b.0),
        fme_upper: fme.map(|b| b.1),
        schmidt_upper,
        entropy_upper_bits,
        g_lower_bits: g.map(|b| b.0),
        g_upper_bits: g.map(|b| b.1),
        verdict,
        witnesses,
        perfect_protocol: found.map(|f| f.method.to_string()),
    })
}
