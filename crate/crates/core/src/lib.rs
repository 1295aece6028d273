//! Quantum teleportation between two quantum spin Hall insulator rings.
//!
//! Ring A emits a two-particle edge state from which a qubit is filtered;
//! ring B emits the entangled channel shared by Alice and Bob. The crate
//! builds both states from junction amplitudes and ring geometry, runs the
//! joint Bell measurement, evaluates Bob's junction-setting table and
//! scores the teleported qubit. An independent brute-force [`oracle`]
//! checks the protocol.

pub mod error;
pub mod oracle;
pub mod protocol;
pub mod ring;
pub mod sampling;
pub mod state;

pub use error::{Error, Result};
pub use protocol::{
    run_protocol, teleport_qubit, BellLabel, CorrectionMode, ProtocolOptions, ProtocolReport,
    QubitChoice,
};
pub use ring::{JunctionAmplitudes, JunctionPair, RingConfig, RingGeometry, RingPhysics};
pub use state::SpinState;
