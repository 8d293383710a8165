//! Ready-made protocols.

use num_complex::Complex64 as C64;

use super::protocol::{LoccProtocol, Party, Povm, ProtocolNode};
use crate::ensembles::{BellLabel, StateEnsemble};
use crate::error::{domain, numerical, precondition, Result};
use crate::qstate::{complete_basis, inner, vector_norm, BipartiteState, ComplexMatrix};

/// Vectors below this norm are treated as zero when assembling measurements.
const NULL_VECTOR: f64 = 1e-12;

fn standard_basis(n: usize) -> Vec<Vec<C64>> {
    ComplexMatrix::identity(n).columns()
}

/// Both parties measure in the computational basis and infer the shift
/// `(a − b) mod n`; the guess is the lowest-indexed member of `labels` with
/// that shift (or index 0 if there is none). On `BB_n` it succeeds with
/// probability `1/n`.
pub fn standard_bell_protocol(n: usize, labels: &[BellLabel]) -> Result<LoccProtocol> {
    if n < 2 {
        return Err(domain!("Bell protocol needs n >= 2, got {n}"));
    }
    if labels.is_empty() {
        return Err(domain!("Bell label list is empty"));
    }
    let povm = Povm::projective(&standard_basis(n))?;
    let children = (0..n)
        .map(|a| {
            let leaves = (0..n)
                .map(|b| {
                    let shift = (a + n - b) % n;
                    let guess = labels.iter().position(|l| l.shift == shift).unwrap_or(0);
                    ProtocolNode::guess(guess)
                })
                .collect();
            ProtocolNode::measure(Party::Bob, povm.clone(), leaves)
        })
        .collect();
    LoccProtocol::new(n, n, ProtocolNode::measure(Party::Alice, povm, children))
}

/// Runs `inner` (written for the sub-ensemble `kept`) on a `k`-state
/// ensemble, mapping its guess `g` to `kept[g]`. States outside `kept` are
/// never guessed.
pub fn discard_protocol(inner: &LoccProtocol, kept: &[usize], k: usize) -> Result<LoccProtocol> {
    let mut seen = vec![false; k];
    for &i in kept {
        if i >= k || std::mem::replace(&mut seen[i], true) {
            return Err(domain!("kept indices must be distinct and below {k}"));
        }
    }
    if inner.max_guess() >= kept.len() {
        return Err(domain!("inner protocol guesses beyond the {} kept states", kept.len()));
    }
    Ok(inner.relabelled(|g| kept[g]))
}

/// One-way protocol: Alice measures the orthonormal basis `alice_basis`;
/// on outcome `x` Bob measures `bob_vectors[x]` (orthonormal, each tagged
/// with a guess), completed to a basis whose extra outcomes guess the
/// first label of the list (or 0).
pub fn one_way_protocol(
    alice_basis: &[Vec<C64>],
    bob_vectors: &[Vec<(usize, Vec<C64>)>],
    dim_b: usize,
) -> Result<LoccProtocol> {
    if alice_basis.len() != bob_vectors.len() {
        return Err(domain!("{} Alice outcomes but {} Bob measurements", alice_basis.len(), bob_vectors.len()));
    }
    let dim_a = alice_basis.first().map_or(0, Vec::len);
    let alice = Povm::projective(alice_basis)?;
    let mut children = Vec::with_capacity(bob_vectors.len());
    for tagged in bob_vectors {
        let vectors: Vec<Vec<C64>> = tagged.iter().map(|(_, v)| v.clone()).collect();
        let basis = complete_basis(&vectors, dim_b);
        if basis.len() != dim_b {
            return Err(numerical!("Bob's vectors could not be completed to a basis of C^{dim_b}"));
        }
        let fallback = tagged.first().map_or(0, |t| t.0);
        let leaves = (0..dim_b).map(|j| ProtocolNode::guess(tagged.get(j).map_or(fallback, |t| t.0))).collect();
        children.push(ProtocolNode::measure(Party::Bob, Povm::projective(&basis)?, leaves));
    }
    LoccProtocol::new(dim_a, dim_b, ProtocolNode::measure(Party::Alice, alice, children))
}

/// Orthonormal basis `{w_x}` of `C^d` with `⟨w_x|M|w_x⟩ = 0` for every `x`,
/// for a traceless square `M` (as columns of the returned matrix).
pub fn zero_diagonal_basis(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let d = m.rows();
    let scale = m.max_abs().max(1.0);
    if m.trace().norm() > tol * scale * d as f64 {
        return Err(precondition!("matrix is not traceless (trace {:.3e})", m.trace().norm()));
    }
    let diag_max = |w: &ComplexMatrix| {
        let t = &(&w.adjoint() * m) * w;
        (0..d).map(|i| t.get(i, i).norm()).fold(0.0, f64::max)
    };
    if diag_max(&ComplexMatrix::identity(d)) <= tol * scale {
        return Ok(ComplexMatrix::identity(d));
    }
    // Diagonalising the Hermitian part and rotating by the Fourier matrix
    // makes every real part Tr(H)/d = 0; the imaginary parts are then
    // cancelled pairwise with 2×2 rotations.
    let hermitian = (m + &m.adjoint()).scale(C64::new(0.5, 0.0));
    let (_, g) = hermitian.hermitian_eigen();
    let mut w = &g * &ComplexMatrix::fourier(d);
    for _ in 0..(4 * d + 4) {
        let t = &(&w.adjoint() * m) * &w;
        let imag: Vec<f64> = (0..d).map(|i| t.get(i, i).im).collect();
        let (j, tj) = imag.iter().copied().enumerate().fold((0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        let (k, tk) = imag.iter().copied().enumerate().fold((0, f64::MAX), |a, b| if b.1 < a.1 { b } else { a });
        if tj - tk <= tol * scale {
            break;
        }
        let s = t.get(j, k) + t.get(k, j).conj();
        let phi = if s.norm() > 1e-300 { std::f64::consts::FRAC_PI_2 - s.arg() } else { 0.0 };
        let e = C64::from_polar(1.0, phi);
        let kappa = (e * t.get(j, k) + e.conj() * t.get(k, j)).im;
        // Solve tj cos²θ + tk sin²θ + κ sinθ cosθ = 0.
        let (c0, a, b) = ((tj + tk) / 2.0, (tj - tk) / 2.0, kappa / 2.0);
        let r = a.hypot(b);
        let theta = (b.atan2(a) + (-c0 / r).clamp(-1.0, 1.0).acos()) / 2.0;
        let (sin, cos) = theta.sin_cos();
        let (wj, wk) = (w.column(j), w.column(k));
        for row in 0..d {
            w.set(row, j, wj[row] * cos + e * wk[row] * sin);
            w.set(row, k, -e.conj() * wj[row] * sin + wk[row] * cos);
        }
    }
    let residual = diag_max(&w);
    if residual > tol * scale.max(1.0) * 10.0 || !w.is_unitary(1e-9) {
        return Err(numerical!("could not zero the diagonal (residual {residual:.3e})"));
    }
    Ok(w)
}

/// Perfect one-way protocol for two orthogonal pure states.
///
/// Alice measures a basis in which both of Bob's conditional states are
/// orthogonal for every outcome; Bob then measures in that pair.
pub fn two_state_protocol(first: &BipartiteState, second: &BipartiteState) -> Result<LoccProtocol> {
    first.check_same_dims(second)?;
    let overlap = first.inner(second)?;
    if overlap.norm() > 1e-10 {
        return Err(precondition!("states are not orthogonal (|⟨ψ1|ψ2⟩| = {:.3e})", overlap.norm()));
    }
    let (dim_a, dim_b) = first.dims();
    let (c1, c2) = (first.coefficient_matrix(), second.coefficient_matrix());
    // ⟨w|conj(C1) C2ᵀ|w⟩ is the overlap of Bob's states when Alice sees conj(w).
    let m = &c1.conj() * &c2.transpose();
    let w = zero_diagonal_basis(&m, 1e-12)?;
    let (c1t, c2t) = (c1.transpose(), c2.transpose());
    let mut alice = Vec::with_capacity(dim_a);
    let mut bob = Vec::with_capacity(dim_a);
    for x in 0..dim_a {
        let wx = w.column(x);
        alice.push(wx.iter().map(|z| z.conj()).collect());
        let mut tagged = Vec::new();
        for (label, ct) in [(0, &c1t), (1, &c2t)] {
            let v = ct.apply(&wx);
            let norm = vector_norm(&v);
            if norm > NULL_VECTOR {
                tagged.push((label, v.into_iter().map(|z| z / norm).collect::<Vec<_>>()));
            }
        }
        if tagged.len() == 2 {
            let cross = inner(&tagged[0].1, &tagged[1].1).norm();
            if cross > 1e-8 {
                return Err(numerical!("Bob's conditional states overlap by {cross:.3e}"));
            }
        }
        bob.push(tagged);
    }
    one_way_protocol(&alice, &bob, dim_b)
}

struct Cluster {
    members: Vec<usize>,
    direction: Vec<C64>,
}

/// Groups vectors into classes of parallel vectors; `None` unless distinct
/// classes are mutually orthogonal.
fn orthogonal_clusters(indices: &[usize], vectors: &[Vec<C64>]) -> Option<Vec<Cluster>> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for &i in indices {
        let v = &vectors[i];
        let mut placed = false;
        for c in &mut clusters {
            let overlap = inner(&c.direction, v).norm();
            if overlap > 1.0 - 1e-9 {
                c.members.push(i);
                placed = true;
                break;
            } else if overlap > 1e-9 {
                return None;
            }
        }
        if !placed {
            clusters.push(Cluster { members: vec![i], direction: v.clone() });
        }
    }
    Some(clusters)
}

fn split_node(
    indices: &[usize],
    actor: Party,
    locals: &(Vec<Vec<C64>>, Vec<Vec<C64>>),
    dims: (usize, usize),
    stalled: bool,
) -> Option<ProtocolNode> {
    if indices.len() == 1 {
        return Some(ProtocolNode::guess(indices[0]));
    }
    let (vectors, dim) = match actor {
        Party::Alice => (&locals.0, dims.0),
        Party::Bob => (&locals.1, dims.1),
    };
    match orthogonal_clusters(indices, vectors) {
        Some(clusters) if clusters.len() > 1 => {
            let mut ops: Vec<ComplexMatrix> = clusters.iter().map(|c| super::protocol::projector(&c.direction)).collect();
            let mut children: Vec<ProtocolNode> = Vec::with_capacity(clusters.len() + 1);
            for c in &clusters {
                children.push(split_node(&c.members, actor.other(), locals, dims, false)?);
            }
            let covered = ops.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, p| &acc + p);
            let rest = &ComplexMatrix::identity(dim) - &covered;
            if rest.max_abs() > 1e-12 {
                ops.push(rest);
                children.push(ProtocolNode::guess(indices[0]));
            }
            Some(ProtocolNode::measure(actor, Povm::new(ops).ok()?, children))
        }
        _ if !stalled => {
            let child = split_node(indices, actor.other(), locals, dims, true)?;
            Some(ProtocolNode::measure(actor, Povm::identity(dim), vec![child]))
        }
        _ => None,
    }
}

/// Perfect protocol for orthogonal product states that the parties can
/// separate by alternately splitting the candidates into classes with
/// parallel (inside a class) and orthogonal (across classes) local vectors.
///
/// Returns `Ok(None)` when neither party can make progress at some stage,
/// which happens for nonlocal product bases.
pub fn product_state_protocol(ensemble: &StateEnsemble) -> Result<Option<LoccProtocol>> {
    let mut alice = Vec::with_capacity(ensemble.len());
    let mut bob = Vec::with_capacity(ensemble.len());
    for (i, state) in ensemble.states().iter().enumerate() {
        let s = state.schmidt();
        if s.lambda_max() < 1.0 - 1e-10 {
            return Err(precondition!("state {i} is entangled"));
        }
        alice.push(s.left_vectors.column(0));
        bob.push(s.right_vectors.column(0));
    }
    let indices: Vec<usize> = (0..ensemble.len()).collect();
    let dims = ensemble.dims();
    let locals = (alice, bob);
    let root = split_node(&indices, Party::Alice, &locals, dims, false);
    root.map(|r| LoccProtocol::new(dims.0, dims.1, r)).transpose()
}
