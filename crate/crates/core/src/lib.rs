//! Simulation of a zero-knowledge proof of graph 3-colorability whose
//! commitments are weak coherent states measured by threshold detectors.
//!
//! * [`optics`]: protocol states, the three-branch apparatus, click sampling.
//! * [`qbc`]: commit, measure, unveil and verify for a single trit.
//! * [`analysis`]: closed-form probabilities and the cheat-state search.
//! * [`graph`]: DIMACS parsing, colorings, exhaustive solvers.
//! * [`protocol`]: prover and verifier strategies and the round loop.
//!
//! ```
//! use qzk::analysis::analytic_pb;
//! use qzk::optics::ApparatusParams;
//!
//! let pb = analytic_pb(&ApparatusParams::default()).unwrap();
//! assert!((pb - 0.3565).abs() < 1e-4);
//! ```

pub mod analysis;
pub mod error;
pub mod graph;
pub mod optics;
pub mod protocol;
pub mod qbc;
pub mod stats;

pub use error::{Error, Result};
