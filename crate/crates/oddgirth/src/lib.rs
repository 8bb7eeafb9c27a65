//! Edge colourings of complete graphs with no short monochromatic odd cycles.
//!
//! The crate has three layers:
//!
//! * **Constructions.** [`builder`] grows rooted round colourings of
//!   `K_{2^k+1}` by repeatedly doubling a base 2-colouring of `K_5`;
//!   [`product`] combines colourings into product colourings and derives
//!   lower-bound witnesses for the multicolour Ramsey numbers of odd
//!   cycles from them.
//! * **Certificates.** [`certify`] represents round partitions, the proof
//!   objects that bound the odd girth of each colour class, and verifies
//!   them against a colouring.
//! * **Ground truth.** [`girth`] computes exact odd girths and searches
//!   for fixed-length cycles without looking at any certificate, so every
//!   certified bound can be cross-checked independently.
//!
//! [`schedule`] carries the arithmetic of the construction schedule: how the
//! per-colour round parameters evolve under iteration and how fast their
//! minimum grows.
//!
//! ```
//! use oddgirth::{builder, girth};
//!
//! let base = builder::base_k5();
//! assert_eq!(base.signature(), vec![5, 5]);
//! let report = girth::colouring_odd_girth(base.colouring());
//! assert_eq!(report.overall, Some(5));
//! ```

use thiserror::Error;

pub mod builder;
pub mod certify;
pub mod colouring;
pub mod girth;
pub mod product;
pub mod schedule;

pub use builder::{BuildError, RrcColouring};
pub use certify::{CertifyError, RoundPartition, RrcCertificate, RrcReport};
pub use colouring::{Colour, ColourClass, Colouring, ColouringError, Vertex};
pub use girth::{Budget, CrCheck, GirthError, GirthReport};
pub use product::{ProductError, RamseyWitness, WitnessReport};
pub use schedule::{ScheduleError, Signature};

/// Parse failure in one of the text file formats, pinned to a line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}
