//! LOCC protocol trees, their exact evaluation and Monte Carlo simulation.

mod builders;
mod evaluate;
mod protocol;

pub use builders::{
    discard_protocol, one_way_protocol, product_state_protocol, standard_bell_protocol, two_state_protocol,
    zero_diagonal_basis,
};
pub use evaluate::{
    evaluate, simulate, InfoUnit, JointEntry, ProtocolEvaluation, SimulationResult, CONSERVATION_TOL, PRUNE_WEIGHT,
    SIMULATION_CHUNK,
};
pub use protocol::{projector, LoccProtocol, Party, Povm, ProtocolNode, POVM_TOL};
