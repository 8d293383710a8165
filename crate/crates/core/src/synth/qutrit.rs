use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::spec::{LabeledVector, OneWayProtocolSpec, SYNTHESIS_TOL};
use crate::ensembles::{StateEnsemble, STRUCTURAL_TOL};
use crate::error::{numerical, precondition, Result};
use crate::qstate::{inner, root_of_unity, vector_norm, ComplexMatrix};

const TWO_PI: f64 = 2.0 * PI;

/// Angle wrapped into `(−π, π]`.
fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TWO_PI);
    if a > PI {
        a - TWO_PI
    } else {
        a
    }
}

fn angular_distance(a: C64, b: C64) -> f64 {
    wrap(a.arg() - b.arg()).abs()
}

/// Each column multiplied by a phase making its first non-negligible entry real and positive.
fn fix_column_phases(m: &ComplexMatrix) -> ComplexMatrix {
    let columns: Vec<Vec<C64>> = m
        .columns()
        .into_iter()
        .map(|col| {
            let pivot = col.iter().copied().find(|z| z.norm() > 1e-8).unwrap_or(C64::new(1.0, 0.0));
            let fix = pivot.conj() / pivot.norm();
            col.into_iter().map(|z| z * fix).collect()
        })
        .collect();
    ComplexMatrix::from_columns(&columns).expect("same shape")
}

/// Writes a traceless 3×3 unitary as `M = c Σ_i ωⁱ |e_i⟩⟨e_i|`.
///
/// The phase `c` is a cube root of `det M`; among the three roots we take
/// the one whose `e_0` has the largest weight on `|0⟩` (the principal root
/// on ties), so `Z ↦ c = 1` and `ωZ ↦ c = ω`. Eigenvalues are matched to
/// `c ωⁱ` greedily by angular distance. Eigenvector phases are fixed so
/// the first non-negligible entry is real and positive.
pub fn traceless_unitary_eigensystem(m: &ComplexMatrix) -> Result<(C64, ComplexMatrix)> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(precondition!("expected a 3x3 matrix, got {}x{}", m.rows(), m.cols()));
    }
    if !m.is_unitary(1e-10) {
        return Err(precondition!("matrix is not unitary"));
    }
    if m.trace().norm() > 1e-8 {
        return Err(precondition!("matrix is not traceless (|Tr| = {:.3e})", m.trace().norm()));
    }
    let (values, vectors) = m.normal_eigen(1e-9)?;
    for a in 0..3 {
        for b in (a + 1)..3 {
            if angular_distance(values[a], values[b]) < 1e-6 {
                return Err(numerical!("eigenvalues {a} and {b} coincide; spectrum is not equilateral"));
            }
        }
    }
    let det_arg = m.determinant().arg();
    let mut best: Option<(f64, f64, C64, [usize; 3])> = None;
    for t in 0..3 {
        let c = C64::from_polar(1.0, (det_arg + TWO_PI * t as f64) / 3.0);
        let mut taken = [false; 3];
        let mut assignment = [0usize; 3];
        for (i, slot) in assignment.iter_mut().enumerate() {
            let target = c * root_of_unity(3, i);
            let pick = (0..3)
                .filter(|&s| !taken[s])
                .min_by(|&a, &b| angular_distance(values[a], target).total_cmp(&angular_distance(values[b], target)))
                .expect("three eigenvalues");
            taken[pick] = true;
            *slot = pick;
        }
        let weight = vectors.get(0, assignment[0]).norm_sqr();
        let principal = c.arg().abs();
        let better = match best {
            None => true,
            Some((w, p, _, _)) => weight > w + 1e-9 || ((weight - w).abs() <= 1e-9 && principal < p),
        };
        if better {
            best = Some((weight, principal, c, assignment));
        }
    }
    let (_, _, c, assignment) = best.expect("three candidate roots");
    let ordered = ComplexMatrix::from_fn(3, 3, |r, i| vectors.get(r, assignment[i]));
    let e = fix_column_phases(&ordered);
    let spectrum: Vec<C64> = (0..3).map(|i| c * root_of_unity(3, i)).collect();
    let rebuilt = &(&e * &ComplexMatrix::from_diagonal(&spectrum)) * &e.adjoint();
    let error = m.max_abs_diff(&rebuilt);
    if error > 1e-9 {
        return Err(numerical!("spectrum is not c·{{1, ω, ω²}}: reconstruction error {error:.3e}"));
    }
    Ok((c, e))
}

/// Diagonal phase adjustments `U₁ = diag(1, e^{iα}, e^{iβ})`,
/// `U₂ = diag(1, e^{iγ}, e^{iδ})` turning the overlap matrix into the
/// circulant `V′ = U₁ V U₂†`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSolution {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub adjusted_overlap_matrix: ComplexMatrix,
}

impl PhaseSolution {
    /// Row phases `(0, α, β)`.
    pub fn row_phases(&self) -> [f64; 3] {
        [0.0, self.alpha, self.beta]
    }

    /// Column phases `(0, γ, δ)`.
    pub fn column_phases(&self) -> [f64; 3] {
        [0.0, self.gamma, self.delta]
    }

    /// `A_k = V′_{0k}`.
    pub fn constants(&self) -> [C64; 3] {
        [0, 1, 2].map(|k| self.adjusted_overlap_matrix.get(0, k))
    }
}

/// Largest deviation of `V` from being circulant (`V_ij` depends only on `(j − i) mod 3`).
pub fn circulant_deviation(v: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..3 {
        for j in 0..3 {
            worst = worst.max((v.get(i, j) - v.get(0, (j + 3 - i) % 3)).norm());
        }
    }
    worst
}

fn adjust(v: &ComplexMatrix, rows: [f64; 3], cols: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |i, j| v.get(i, j) * C64::from_polar(1.0, rows[i] - cols[j]))
}

/// Closed-form angles from the phases of the first two columns.
fn closed_form(v: &ComplexMatrix) -> ([f64; 3], [f64; 3]) {
    let m = |i: usize, j: usize| v.get(i, j).arg();
    let product: C64 = (0..3).map(|i| v.get(i, 1) * v.get(i, 0).conj()).product();
    let gamma = product.arg() / 3.0;
    let alpha = m(0, 0) - m(1, 1) + gamma;
    let beta = m(0, 1) - m(2, 0) - gamma;
    let delta = m(0, 2) - m(1, 0) - alpha;
    ([0.0, alpha, beta], [0.0, gamma, delta])
}

/// Angles from the one or two dominant diagonal classes, for overlap
/// matrices with vanishing entries (where some phases are undefined).
///
/// Unknowns `α₁, α₂, γ₁, γ₂` and the class phases `θ_k` satisfy
/// `α_i − γ_{i+k} − θ_k = −m_{i,i+k}` for each enforced class `k`.
fn class_solve(v: &ComplexMatrix) -> Result<([f64; 3], [f64; 3])> {
    let weight = |k: usize| v.get(0, k).norm();
    let mut classes = [0usize, 1, 2];
    classes.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)));
    let m = |i: usize, j: usize| v.get(i, j).arg();
    if weight(classes[1]) < 1e-12 {
        let k = classes[0];
        let rows = [0, 1, 2].map(|i| wrap(m(0, k) - m(i, (i + k) % 3)));
        return Ok((rows, [0.0; 3]));
    }
    // Columns: α1, α2, γ1, γ2, θ_a, θ_b.
    let mut a = DMatrix::<f64>::zeros(6, 6);
    let mut rhs = DVector::<f64>::zeros(6);
    for (slot, &k) in classes[..2].iter().enumerate() {
        for i in 0..3 {
            let row = slot * 3 + i;
            let j = (i + k) % 3;
            if i > 0 {
                a[(row, i - 1)] = 1.0;
            }
            if j > 0 {
                a[(row, 1 + j)] = -1.0;
            }
            a[(row, 4 + slot)] = -1.0;
            rhs[row] = -m(i, j);
        }
    }
    let x = a.lu().solve(&rhs).ok_or_else(|| numerical!("phase system is singular"))?;
    Ok(([0.0, wrap(x[0]), wrap(x[1])], [0.0, wrap(x[2]), wrap(x[3])]))
}

/// Rephases the bases `e` and `f` so the overlap matrix `V_ij = ⟨e_i|f_j⟩`
/// becomes circulant.
pub fn overlap_phase_normalize(e_basis: &ComplexMatrix, f_basis: &ComplexMatrix) -> Result<PhaseSolution> {
    for (name, b) in [("e", e_basis), ("f", f_basis)] {
        if b.rows() != 3 || b.cols() != 3 || !b.is_unitary(1e-10) {
            return Err(precondition!("{name} basis is not an orthonormal basis of C^3"));
        }
    }
    let v = &e_basis.adjoint() * f_basis;
    let magnitudes = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(v.get(i, j).norm_sqr(), 0.0));
    let step_one = circulant_deviation(&magnitudes);
    if step_one > 1e-8 {
        return Err(precondition!(
            "|⟨e_i|f_j⟩|² does not depend only on (j − i) mod 3 (deviation {step_one:.3e}); the states are not orthogonal"
        ));
    }
    let smallest = (0..3).map(|k| v.get(0, k).norm()).fold(f64::INFINITY, f64::min);
    let mut attempts = Vec::with_capacity(2);
    if smallest > 1e-6 {
        attempts.push(closed_form(&v));
    }
    attempts.push(class_solve(&v)?);
    let mut last = f64::INFINITY;
    for (rows, cols) in attempts {
        let rows = rows.map(wrap);
        let cols = cols.map(wrap);
        let adjusted = adjust(&v, rows, cols);
        last = circulant_deviation(&adjusted);
        if last <= 1e-9 {
            return Ok(PhaseSolution {
                gamma: cols[1],
                alpha: rows[1],
                beta: rows[2],
                delta: cols[2],
                adjusted_overlap_matrix: adjusted,
            });
        }
    }
    Err(numerical!("phase adjustment left V′ non-circulant by {last:.3e}"))
}

/// Checks the three-qutrit preconditions and returns the `B_i`.
fn unitary_triple(ensemble: &StateEnsemble) -> Result<[ComplexMatrix; 3]> {
    if ensemble.len() != 3 {
        return Err(precondition!("expected exactly 3 states, got {}", ensemble.len()));
    }
    if ensemble.dims() != (3, 3) {
        return Err(precondition!("expected states in C^3 ⊗ C^3, got {:?}", ensemble.dims()));
    }
    if !ensemble.is_maximally_entangled(STRUCTURAL_TOL) {
        return Err(precondition!("states are not all maximally entangled"));
    }
    if !ensemble.is_orthogonal(STRUCTURAL_TOL) {
        return Err(precondition!("states are not pairwise orthogonal"));
    }
    let b = |i: usize| ensemble.states()[i].b_matrix().clone();
    Ok([b(0), b(1), b(2)])
}

/// Perfect one-way protocol for three orthogonal maximally entangled
/// states of `C^3 ⊗ C^3`.
///
/// With `B₂†B₁ ∝ Σ ωⁱ|e_i⟩⟨e_i|` and `B₃†B₂ ∝ Σ ωʲ|f_j⟩⟨f_j|`, the `e_i` are
/// rephased so `⟨e_i|f_j⟩` is circulant; then for `U|x⟩ = 3^{-1/2} Σ ω^{ix}|e_i⟩`
/// the vectors `B_i U|x⟩` are orthogonal. Alice measures `{Ū|x⟩}`.
pub fn synthesize_three_qutrit_protocol(ensemble: &StateEnsemble) -> Result<OneWayProtocolSpec> {
    let [b1, b2, b3] = unitary_triple(ensemble)?;
    let (_, e) = traceless_unitary_eigensystem(&(&b2.adjoint() * &b1))?;
    let (_, f) = traceless_unitary_eigensystem(&(&b3.adjoint() * &b2))?;
    let phases = overlap_phase_normalize(&e, &f)?;
    let rows = phases.row_phases();
    let adjusted: Vec<Vec<C64>> =
        (0..3).map(|i| e.column(i).into_iter().map(|z| z * C64::from_polar(1.0, -rows[i])).collect()).collect();
    let norm = 1.0 / 3f64.sqrt();
    let u_columns: Vec<Vec<C64>> = (0..3)
        .map(|x| {
            (0..3)
                .map(|r| (0..3).map(|i| root_of_unity(3, i * x) * adjusted[i][r]).sum::<C64>() * norm)
                .collect()
        })
        .collect();
    let u = ComplexMatrix::from_columns(&u_columns)?;
    let mut bob = Vec::with_capacity(3);
    for ux in &u_columns {
        let set: Vec<LabeledVector> = [&b1, &b2, &b3]
            .iter()
            .enumerate()
            .map(|(label, b)| {
                let v = b.apply(ux);
                let n = vector_norm(&v);
                LabeledVector { label, vector: v.into_iter().map(|z| z / n).collect() }
            })
            .collect();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let overlap = inner(&set[i].vector, &set[j].vector).norm();
                if overlap > SYNTHESIS_TOL {
                    return Err(numerical!("Bob's states {i} and {j} overlap by {overlap:.3e}"));
                }
            }
        }
        bob.push(set);
    }
    OneWayProtocolSpec::new(u.conj(), bob)
}
