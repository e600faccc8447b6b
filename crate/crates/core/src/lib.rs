//! Exchange-gate error budgets for spin qubits.
//!
//! Builds `SWAP^α` gates from pulsed Heisenberg exchange, propagates
//! classical control noise and `T2` dephasing into gate infidelity, and
//! decides whether a control technology can meet a fault-tolerance
//! threshold.
//!
//! * [`linalg`]: 2- and 4-dimensional complex operators, exponentials, fidelities.
//! * [`exchange`]: pulses, exchange phases and the gates they produce.
//! * [`noise`]: amplitude/timing noise, SNR conversions, the optical control map.
//! * [`decoherence`]: dephasing channels and entanglement fidelity.
//! * [`budget`]: feasibility windows, improvement factors, technology catalog.
//! * [`specfile`]: TOML spec documents.
//! * [`montecarlo`]: deterministic parallel infidelity estimation and sweeps.

pub mod budget;
pub mod decoherence;
mod error;
pub mod exchange;
pub mod linalg;
pub mod montecarlo;
pub mod noise;
pub mod specfile;

pub use error::{Error, Result};
