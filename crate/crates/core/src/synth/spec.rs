use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{contract, Result};
use crate::locc::{one_way_protocol, LoccProtocol};
use crate::qstate::{inner, ComplexMatrix};

/// Bob vectors must be orthogonal within this tolerance.
pub const SYNTHESIS_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledVector {
    pub label: usize,
    pub vector: Vec<C64>,
}

/// A one-way protocol: Alice measures the columns of `alice_basis`; on
/// outcome `x` Bob measures `bob_discriminators[x]` and reports the label.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneWayProtocolSpec {
    alice_basis: ComplexMatrix,
    bob_discriminators: Vec<Vec<LabeledVector>>,
}

impl OneWayProtocolSpec {
    pub fn new(alice_basis: ComplexMatrix, bob_discriminators: Vec<Vec<LabeledVector>>) -> Result<Self> {
        if !alice_basis.is_unitary(1e-10) {
            return Err(contract!("Alice's measurement basis is not unitary"));
        }
        if bob_discriminators.len() != alice_basis.cols() {
            return Err(contract!(
                "{} Alice outcomes but {} Bob discriminators",
                alice_basis.cols(),
                bob_discriminators.len()
            ));
        }
        let dim_b = bob_discriminators.iter().flatten().map(|v| v.vector.len()).next().unwrap_or(1);
        for (x, set) in bob_discriminators.iter().enumerate() {
            if set.len() > dim_b || set.iter().any(|v| v.vector.len() != dim_b) {
                return Err(contract!("Bob's vectors for outcome {x} do not fit in C^{dim_b}"));
            }
            for (i, u) in set.iter().enumerate() {
                for (j, v) in set.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    let dev = (inner(&u.vector, &v.vector).norm() - target).abs();
                    if dev > SYNTHESIS_TOL {
                        return Err(contract!(
                            "Bob's vectors {i} and {j} for outcome {x} are not orthonormal (deviation {dev:.3e})"
                        ));
                    }
                }
            }
        }
        Ok(Self { alice_basis, bob_discriminators })
    }

    pub fn alice_basis(&self) -> &ComplexMatrix {
        &self.alice_basis
    }

    pub fn bob_discriminators(&self) -> &[Vec<LabeledVector>] {
        &self.bob_discriminators
    }

    pub fn dim_b(&self) -> usize {
        self.bob_discriminators.iter().flatten().map(|v| v.vector.len()).next().unwrap_or(1)
    }

    /// Largest `|⟨u|v⟩|` between distinct Bob vectors of one outcome.
    pub fn max_bob_overlap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for set in &self.bob_discriminators {
            for (i, u) in set.iter().enumerate() {
                for v in &set[i + 1..] {
                    worst = worst.max(inner(&u.vector, &v.vector).norm());
                }
            }
        }
        worst
    }

    /// The equivalent protocol tree (Bob's sets completed to full bases).
    pub fn to_protocol(&self) -> Result<LoccProtocol> {
        let alice = self.alice_basis.columns();
        let bob: Vec<Vec<(usize, Vec<C64>)>> = self
            .bob_discriminators
            .iter()
            .map(|set| set.iter().map(|v| (v.label, v.vector.clone())).collect())
            .collect();
        one_way_protocol(&alice, &bob, self.dim_b())
    }
}

impl<'de> Deserialize<'de> for OneWayProtocolSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            alice_basis: ComplexMatrix,
            bob_discriminators: Vec<Vec<LabeledVector>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        OneWayProtocolSpec::new(repr.alice_basis, repr.bob_discriminators).map_err(serde::de::Error::custom)
    }
}
