//! Property testers, permutation-structure analysis and hard instances for
//! forbidden order patterns in real-valued sequences.

pub mod bench;
pub mod distance;
pub mod entangling;
pub mod error;
pub mod forge;
pub mod oracle;
pub mod partition;
pub mod pattern;
pub mod rounds;
pub mod seqio;
pub mod template;
pub mod testers;

pub use error::{Error, Result};
pub use pattern::{PatternCopy, Permutation, Sequence, Symmetry};
