//! Exact direct and inverse spectral problems for star graphs of Stieltjes
//! strings: threads carrying point masses, joined at a central vertex.

pub mod corpus;
pub mod error;
pub mod forward;
pub mod inverse_center;
pub mod inverse_pendant;
pub mod matrixize;
pub mod model;
pub mod numeric;
pub mod par;
pub mod ratfun;
pub mod report;
pub mod roundtrip;

pub use error::{Error, Result};
pub use model::{Edge, ReconstructionPlan, Root, SpectrumPair, StarGraph};
pub use par::Execution;
pub use report::{ValidationReport, Violation};
