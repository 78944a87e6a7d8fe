//! Synthesis of CNOT-only (linear reversible) circuits from invertible GF(2)
//! matrices.
//!
//! Two cost-minimizing bidirectional methods are provided, [`aecm`] and
//! [`mcg`], together with elimination baselines, an exact-minimum oracle for
//! up to five lines, and benchmark drivers.
//!
//! ```
//! use cnot_forge::{fixtures, mcg, McgConfig};
//!
//! let m = fixtures::reference_6();
//! let result = mcg::mcg(&m, &McgConfig::default()).unwrap();
//! assert!(result.circuit.implements(&m));
//! ```

pub mod aecm;
pub mod baseline;
pub mod error;
pub mod fixtures;
pub mod gf2;
pub mod harness;
pub mod mcg;
pub mod oracle;
pub mod tiebreak;

/// Largest supported line count.
pub const MAX_LINES: usize = 64;

pub use aecm::AecmConfig;
pub use error::{Error, Result};
pub use gf2::{BitMatrix, Circuit, Cnot, CnotGate, CostModel, Side, SynthState};
pub use harness::Method;
pub use mcg::McgConfig;
pub use oracle::DistanceTable;
pub use tiebreak::TieBreak;
