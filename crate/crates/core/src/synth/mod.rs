//! Explicit one-way LOCC protocols: the three-qutrit construction and the
//! common-unbiased-basis construction.

mod cub;
mod qutrit;
mod search;
mod spec;

pub use cub::{default_cub_candidates, find_cub, pairwise_eigenbasis_family, synthesize_cub_protocol};
pub use qutrit::{
    circulant_deviation, overlap_phase_normalize, synthesize_three_qutrit_protocol, traceless_unitary_eigensystem,
    PhaseSolution,
};
pub use search::{search_perfect_protocol, FoundProtocol, PERFECT_TOL};
pub use spec::{LabeledVector, OneWayProtocolSpec, SYNTHESIS_TOL};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{
        bell_states, haar_unitary, mub_prime, random_orthogonal_me_triple, simultaneously_diagonal_ensemble, BasisFamily,
        BellLabel,
    };
    use crate::locc::evaluate;
    use crate::qstate::{bell_matrix, generalized_pauli, inner, root_of_unity, ComplexMatrix};
    use crate::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn column_parallel(a: &[C64], b: &[C64]) -> bool {
        (inner(a, b).norm() - 1.0).abs() < 1e-10
    }

    #[test]
    fn eigensystem_examples() {
        let (x, z) = generalized_pauli(3).unwrap();
        let (c, e) = traceless_unitary_eigensystem(&z).unwrap();
        assert!((c - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(e.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);

        let omega = root_of_unity(3, 1);
        let (c, e) = traceless_unitary_eigensystem(&z.scale(omega)).unwrap();
        assert!((c - omega).norm() < 1e-12);
        assert!(e.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);

        let (c, e) = traceless_unitary_eigensystem(&x).unwrap();
        assert!((c - C64::new(1.0, 0.0)).norm() < 1e-12);
        let f = ComplexMatrix::fourier(3);
        for i in 0..3 {
            assert!(column_parallel(&e.column(i), &f.column(i)), "column {i}");
        }
    }

    #[test]
    fn eigensystem_rejects_bad_input() {
        assert!(matches!(traceless_unitary_eigensystem(&ComplexMatrix::identity(3)), Err(crate::Error::Precondition(_))));
        let not_unitary = ComplexMatrix::from_real(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(traceless_unitary_eigensystem(&not_unitary), Err(crate::Error::Precondition(_))));
        assert!(traceless_unitary_eigensystem(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn phase_normalize_examples() {
        let id = ComplexMatrix::identity(3);
        let same = overlap_phase_normalize(&id, &id).unwrap();
        assert!(same.adjusted_overlap_matrix.max_abs_diff(&id) < 1e-12);
        let a = same.constants();
        assert!((a[0] - C64::new(1.0, 0.0)).norm() < 1e-12 && a[1].norm() < 1e-12 && a[2].norm() < 1e-12);

        let fourier = overlap_phase_normalize(&id, &ComplexMatrix::fourier(3)).unwrap();
        for ak in fourier.constants() {
            assert!((ak.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
        assert!(circulant_deviation(&fourier.adjusted_overlap_matrix) < 1e-9);
        assert!(fourier.adjusted_overlap_matrix.is_unitary(1e-9));
    }

    #[test]
    fn phase_normalize_rejects_non_circulant_magnitudes() {
        let id = ComplexMatrix::identity(3);
        let mut f = ComplexMatrix::identity(3);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        f.set(0, 0, C64::new(s, 0.0));
        f.set(1, 0, C64::new(s, 0.0));
        f.set(0, 1, C64::new(-s, 0.0));
        f.set(1, 1, C64::new(s, 0.0));
        assert!(matches!(overlap_phase_normalize(&id, &f), Err(crate::Error::Precondition(_))));
    }

    fn random_circulant_unitary(rng: &mut ChaCha20Rng) -> ComplexMatrix {
        // Circulants are diagonalised by the Fourier matrix.
        let f = ComplexMatrix::fourier(3);
        let d: Vec<C64> = (0..3).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.3)).collect();
        &(&f * &ComplexMatrix::from_diagonal(&d)) * &f.adjoint()
    }

    #[test]
    fn phase_solver_is_idempotent_on_circulants() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for _ in 0..100 {
            let v = random_circulant_unitary(&mut rng);
            // f = V makes ⟨e_i|f_j⟩ = V_ij with e = I.
            let sol = overlap_phase_normalize(&ComplexMatrix::identity(3), &v).unwrap();
            for angle in [sol.alpha, sol.beta, sol.gamma, sol.delta] {
                let reduced = angle.rem_euclid(std::f64::consts::TAU);
                assert!(reduced.min(std::f64::consts::TAU - reduced) < 1e-9, "angle {angle}");
            }
        }
    }

    #[test]
    fn phase_solver_recovers_rephased_circulants() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        for _ in 0..100 {
            let v = random_circulant_unitary(&mut rng);
            let r: Vec<C64> = (0..3).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.3)).collect();
            let c: Vec<C64> = (0..3).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.3)).collect();
            let scrambled = &(&ComplexMatrix::from_diagonal(&r) * &v) * &ComplexMatrix::from_diagonal(&c);
            let sol = overlap_phase_normalize(&ComplexMatrix::identity(3), &scrambled).unwrap();
            assert!(circulant_deviation(&sol.adjusted_overlap_matrix) < 1e-9);
            assert!(sol.adjusted_overlap_matrix.is_unitary(1e-9));
        }
    }

    #[test]
    fn phase_solver_handles_permutation_patterns() {
        let (x, _) = generalized_pauli(3).unwrap();
        let phases = ComplexMatrix::from_diagonal(&[C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::from_polar(1.0, 0.3)]);
        let sol = overlap_phase_normalize(&ComplexMatrix::identity(3), &(&x * &phases)).unwrap();
        assert!(circulant_deviation(&sol.adjusted_overlap_matrix) < 1e-12);
    }

    fn assert_perfect(spec: &OneWayProtocolSpec, ensemble: &crate::ensembles::StateEnsemble) {
        assert!(spec.alice_basis().is_unitary(1e-10));
        assert!(spec.max_bob_overlap() <= 1e-8);
        let eval = evaluate(&spec.to_protocol().unwrap(), ensemble).unwrap();
        assert!(eval.success_probability >= 1.0 - 1e-9, "success {}", eval.success_probability);
    }

    #[test]
    fn three_qutrit_random_triples() {
        for seed in 0..200 {
            let ensemble = random_orthogonal_me_triple(3, seed).unwrap();
            let b: Vec<&ComplexMatrix> = ensemble.states().iter().map(|s| s.b_matrix()).collect();
            let (_, e) = traceless_unitary_eigensystem(&(&b[1].adjoint() * b[0])).unwrap();
            let (_, f) = traceless_unitary_eigensystem(&(&b[2].adjoint() * b[1])).unwrap();
            let v = &e.adjoint() * &f;
            let sq = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(v.get(i, j).norm_sqr(), 0.0));
            assert!(circulant_deviation(&sq) < 1e-8, "seed {seed}");
            let sol = overlap_phase_normalize(&e, &f).unwrap();
            assert!(circulant_deviation(&sol.adjusted_overlap_matrix) < 1e-9);
            let spec = synthesize_three_qutrit_protocol(&ensemble).unwrap();
            assert_perfect(&spec, &ensemble);
        }
    }

    #[test]
    fn three_qutrit_commuting_case() {
        let labels = [BellLabel::new(0, 0), BellLabel::new(0, 1), BellLabel::new(0, 2)];
        let ensemble = bell_states(3, &labels).unwrap();
        let spec = synthesize_three_qutrit_protocol(&ensemble).unwrap();
        assert_perfect(&spec, &ensemble);
        // Alice ends up in a (conjugate) Fourier-type basis: all entries of modulus 1/√3.
        for z in spec.alice_basis().entries() {
            assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn three_qutrit_all_bell_triples() {
        let all = BellLabel::all(3);
        for a in 0..9 {
            for b in (a + 1)..9 {
                for c in (b + 1)..9 {
                    let ensemble = bell_states(3, &[all[a], all[b], all[c]]).unwrap();
                    let spec = synthesize_three_qutrit_protocol(&ensemble).unwrap();
                    assert_perfect(&spec, &ensemble);
                }
            }
        }
    }

    #[test]
    fn three_qutrit_phase_perturbation() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for seed in 0..20 {
            let ensemble = random_orthogonal_me_triple(3, seed).unwrap();
            let phases: Vec<C64> = (0..3).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.3)).collect();
            let perturbed = ensemble.with_phases(&phases);
            let spec = synthesize_three_qutrit_protocol(&perturbed).unwrap();
            assert_perfect(&spec, &perturbed);
        }
    }

    #[test]
    fn three_qutrit_preconditions() {
        let ensemble = random_orthogonal_me_triple(4, 1).unwrap();
        assert!(matches!(synthesize_three_qutrit_protocol(&ensemble), Err(crate::Error::Precondition(_))));
        let two = bell_states(3, &[BellLabel::new(0, 0), BellLabel::new(1, 0)]).unwrap();
        assert!(matches!(synthesize_three_qutrit_protocol(&two), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn cub_protocol_on_bell_subsets() {
        let labels = [BellLabel::new(0, 0), BellLabel::new(1, 0), BellLabel::new(1, 1)];
        let ensemble = bell_states(3, &labels).unwrap();
        let family = pairwise_eigenbasis_family(&ensemble).unwrap();
        let mubs = mub_prime(3).unwrap();
        let cub = find_cub(&family, mubs.bases()).expect("a fourth MUB is free");
        // The products X, XZ and Z pick out three of the four MUBs; the CUB is the remaining one.
        assert!(common_unbiased_check_all(&cub, &family));
        let spec = synthesize_cub_protocol(&ensemble, &cub).unwrap();
        assert_perfect(&spec, &ensemble);
        // A basis that is one of the eigenbases fails, naming a pair.
        let err = synthesize_cub_protocol(&ensemble, &family.bases()[0]).unwrap_err();
        assert!(matches!(&err, crate::Error::Precondition(msg) if msg.contains("B_0†B_1")), "{err}");
    }

    fn common_unbiased_check_all(cub: &ComplexMatrix, family: &BasisFamily) -> bool {
        crate::ensembles::common_unbiased_basis_check(cub, family, 1e-8).unwrap()
    }

    #[test]
    fn cub_protocol_on_simultaneously_diagonal_states() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for n in 2..6 {
            let u = haar_unitary(n, &mut rng);
            let ensemble = simultaneously_diagonal_ensemble(&u).unwrap();
            let spec = synthesize_cub_protocol(&ensemble, &ComplexMatrix::fourier(n)).unwrap();
            assert_perfect(&spec, &ensemble);
        }
    }

    #[test]
    fn cub_soundness() {
        // Whenever the check passes, every ⟨b_k|B_i†B_j|b_k⟩ vanishes.
        for n in [3usize, 5] {
            let mubs = mub_prime(n).unwrap();
            let all = BellLabel::all(n);
            let mut rng = ChaCha20Rng::seed_from_u64(n as u64);
            for _ in 0..20 {
                let picks = rand::seq::index::sample(&mut rng, n * n, 3);
                let labels: Vec<BellLabel> = picks.iter().map(|p| all[p]).collect();
                let ensemble = bell_states(n, &labels).unwrap();
                let family = pairwise_eigenbasis_family(&ensemble).unwrap();
                for cand in mubs.bases() {
                    if !common_unbiased_check_all(cand, &family) {
                        continue;
                    }
                    for i in 0..3 {
                        for j in 0..3 {
                            if i == j {
                                continue;
                            }
                            let bi = bell_matrix(n, labels[i].shift, labels[i].phase).unwrap();
                            let bj = bell_matrix(n, labels[j].shift, labels[j].phase).unwrap();
                            let p = &bi.adjoint() * &bj;
                            for b in cand.columns() {
                                assert!(inner(&b, &p.apply(&b)).norm() < 1e-8);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn find_cub_examples() {
        let (_, z) = generalized_pauli(3).unwrap();
        let mubs = mub_prime(3).unwrap();
        let z_family = BasisFamily::new(vec![
            crate::ensembles::canonical_eigenbasis(&z).unwrap(),
            crate::ensembles::canonical_eigenbasis(&z.pow(2)).unwrap(),
        ])
        .unwrap();
        let found = find_cub(&z_family, mubs.bases()).unwrap();
        for entry in found.entries() {
            assert!((entry.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-10);
        }
        assert!(find_cub(&mubs, mubs.bases()).is_none());
        let first = find_cub(&BasisFamily::empty(), mubs.bases()).unwrap();
        assert_eq!(&first, &mubs.bases()[0]);
    }

    #[test]
    fn spec_json_round_trip() {
        let ensemble = random_orthogonal_me_triple(3, 5).unwrap();
        let spec = synthesize_three_qutrit_protocol(&ensemble).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        let back: OneWayProtocolSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["bob_discriminators"][0][0]["label"].is_u64());
    }
}
