use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{contract, domain, Result};
use crate::qstate::ComplexMatrix;

/// Completeness tolerance for `Σ M†M = I`.
pub const POVM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Self {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

/// A measurement given by Kraus operators `M_i` with `Σ M_i†M_i = I`.
///
/// Operators may be rectangular: each maps the current local space (its
/// column count) into some output space (its row count), which is how
/// ancillas and projections back onto the original space are expressed.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(contract!("a POVM needs at least one element"));
        };
        let input = first.cols();
        if elements.iter().any(|e| e.cols() != input) {
            return Err(contract!("POVM elements disagree on the input dimension"));
        }
        let mut total = ComplexMatrix::zeros(input, input);
        for e in &elements {
            total = &total + &(&e.adjoint() * e);
        }
        let deviation = total.max_abs_diff(&ComplexMatrix::identity(input));
        if deviation > POVM_TOL {
            return Err(contract!("POVM is incomplete: ‖Σ M†M − I‖_max = {deviation:.3e}"));
        }
        Ok(Self { elements })
    }

    /// Rank-one projectors onto an orthonormal basis (given as vectors).
    pub fn projective(basis: &[Vec<C64>]) -> Result<Self> {
        Self::new(basis.iter().map(|v| projector(v)).collect())
    }

    /// The single-outcome identity measurement on `C^dim`.
    pub fn identity(dim: usize) -> Self {
        Self { elements: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.elements[0].cols()
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<ComplexMatrix>::deserialize(deserializer)?;
        Povm::new(elements).map_err(serde::de::Error::custom)
    }
}

/// `|v⟩⟨v|`.
pub fn projector(v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

/// A node of a finite protocol tree: either a local measurement with one
/// child per outcome, or a leaf carrying the final guess (an ensemble index).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProtocolNode {
    Measure { actor: Party, povm: Povm, children: Vec<ProtocolNode> },
    Guess { guess: usize },
}

impl ProtocolNode {
    pub fn guess(label: usize) -> Self {
        Self::Guess { guess: label }
    }

    pub fn measure(actor: Party, povm: Povm, children: Vec<ProtocolNode>) -> Self {
        Self::Measure { actor, povm, children }
    }

    fn depth(&self) -> usize {
        match self {
            Self::Guess { .. } => 0,
            Self::Measure { children, .. } => 1 + children.iter().map(Self::depth).max().unwrap_or(0),
        }
    }

    fn max_guess(&self) -> usize {
        match self {
            Self::Guess { guess } => *guess,
            Self::Measure { children, .. } => children.iter().map(Self::max_guess).max().unwrap_or(0),
        }
    }

    fn leaf_count(&self) -> usize {
        match self {
            Self::Guess { .. } => 1,
            Self::Measure { children, .. } => children.iter().map(Self::leaf_count).sum(),
        }
    }

    fn map_guesses(&self, f: &impl Fn(usize) -> usize) -> Self {
        match self {
            Self::Guess { guess } => Self::guess(f(*guess)),
            Self::Measure { actor, povm, children } => Self::Measure {
                actor: *actor,
                povm: povm.clone(),
                children: children.iter().map(|c| c.map_guesses(f)).collect(),
            },
        }
    }

    fn padded(&self, parent: Option<Party>, dims: (usize, usize)) -> Self {
        match self {
            Self::Guess { .. } => {
                let actor = parent.map_or(Party::Alice, Party::other);
                let dim = match actor {
                    Party::Alice => dims.0,
                    Party::Bob => dims.1,
                };
                Self::measure(actor, Povm::identity(dim), vec![self.clone()])
            }
            Self::Measure { actor, povm, children } => {
                let children = children
                    .iter()
                    .zip(povm.elements())
                    .map(|(child, op)| {
                        let next = match actor {
                            Party::Alice => (op.rows(), dims.1),
                            Party::Bob => (dims.0, op.rows()),
                        };
                        child.padded(Some(*actor), next)
                    })
                    .collect();
                Self::Measure { actor: *actor, povm: povm.clone(), children }
            }
        }
    }

    /// Checks outcome counts, operator shapes and actor alternation.
    fn validate(&self, parent: Option<Party>, dims: (usize, usize)) -> Result<()> {
        let Self::Measure { actor, povm, children } = self else {
            return Ok(());
        };
        if parent == Some(*actor) {
            return Err(contract!("{actor:?} measures twice in a row; insert an identity round"));
        }
        let local = match actor {
            Party::Alice => dims.0,
            Party::Bob => dims.1,
        };
        if povm.input_dim() != local {
            return Err(contract!(
                "{actor:?}'s POVM acts on dimension {} but the local space has dimension {local}",
                povm.input_dim()
            ));
        }
        if children.len() != povm.len() {
            return Err(contract!("{} POVM outcomes but {} children", povm.len(), children.len()));
        }
        for (child, op) in children.iter().zip(povm.elements()) {
            let next = match actor {
                Party::Alice => (op.rows(), dims.1),
                Party::Bob => (dims.0, op.rows()),
            };
            child.validate(Some(*actor), next)?;
        }
        Ok(())
    }
}

/// A finite-round LOCC protocol on `C^dim_a ⊗ C^dim_b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoccProtocol {
    dim_a: usize,
    dim_b: usize,
    root: ProtocolNode,
}

impl LoccProtocol {
    pub fn new(dim_a: usize, dim_b: usize, root: ProtocolNode) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(domain!("protocol dimensions must be positive"));
        }
        root.validate(None, (dim_a, dim_b))?;
        Ok(Self { dim_a, dim_b, root })
    }

    /// Guess `label` without measuring.
    pub fn blind_guess(dim_a: usize, dim_b: usize, label: usize) -> Result<Self> {
        Self::new(dim_a, dim_b, ProtocolNode::guess(label))
    }

    pub fn root(&self) -> &ProtocolNode {
        &self.root
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// Number of measurement rounds on the longest path.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    /// Largest guess label appearing at a leaf.
    pub fn max_guess(&self) -> usize {
        self.root.max_guess()
    }

    /// Replaces every leaf by a trivial identity round (by the party that
    /// did not measure last) followed by the same leaf.
    pub fn padded(&self) -> Self {
        let root = self.root.padded(None, self.dims());
        Self::new(self.dim_a, self.dim_b, root).expect("padding preserves validity")
    }

    /// Same measurements with every guess relabelled by `f`.
    pub fn relabelled(&self, f: impl Fn(usize) -> usize) -> Self {
        Self { dim_a: self.dim_a, dim_b: self.dim_b, root: self.root.map_guesses(&f) }
    }
}

impl<'de> Deserialize<'de> for LoccProtocol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim_a: usize,
            dim_b: usize,
            root: ProtocolNode,
        }
        let repr = Repr::deserialize(deserializer)?;
        LoccProtocol::new(repr.dim_a, repr.dim_b, repr.root).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize) -> Vec<Vec<C64>> {
        (0..n)
            .map(|i| (0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect()
    }

    #[test]
    fn povm_completeness() {
        assert!(Povm::projective(&basis(3)).is_ok());
        let partial = Povm::projective(&basis(3)[..2]);
        assert!(matches!(partial, Err(crate::Error::Contract(_))));
        // Rectangular Kraus operators: ⟨0| and ⟨1| map C^2 → C^1.
        let bra0 = ComplexMatrix::from_real(1, 2, &[1.0, 0.0]).unwrap();
        let bra1 = ComplexMatrix::from_real(1, 2, &[0.0, 1.0]).unwrap();
        assert!(Povm::new(vec![bra0, bra1]).is_ok());
    }

    #[test]
    fn alternation_is_enforced() {
        let p = Povm::projective(&basis(2)).unwrap();
        let inner = ProtocolNode::measure(Party::Alice, p.clone(), vec![ProtocolNode::guess(0), ProtocolNode::guess(1)]);
        let bad = ProtocolNode::measure(Party::Alice, p.clone(), vec![inner.clone(), ProtocolNode::guess(0)]);
        assert!(LoccProtocol::new(2, 2, bad).is_err());
        let good = ProtocolNode::measure(Party::Bob, p, vec![inner, ProtocolNode::guess(0)]);
        let protocol = LoccProtocol::new(2, 2, good).unwrap();
        assert_eq!(protocol.depth(), 2);
        assert_eq!(protocol.padded().depth(), 3);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let p = Povm::projective(&basis(3)).unwrap();
        let node = ProtocolNode::measure(Party::Bob, p, vec![ProtocolNode::guess(0); 3]);
        assert!(LoccProtocol::new(3, 2, node).is_err());
    }

    #[test]
    fn json_shape() {
        let p = Povm::projective(&basis(2)).unwrap();
        let node = ProtocolNode::measure(Party::Alice, p, vec![ProtocolNode::guess(0), ProtocolNode::guess(1)]);
        let protocol = LoccProtocol::new(2, 2, node).unwrap();
        let value = serde_json::to_value(&protocol).unwrap();
        assert_eq!(value["root"]["actor"], "alice");
        assert_eq!(value["root"]["children"][1]["guess"], 1);
        let back: LoccProtocol = serde_json::from_value(value).unwrap();
        assert_eq!(back, protocol);
    }
}
