//! Degrees of agreement between agents reasoning over a shared argumentation
//! framework.
//!
//! The crate covers extension enumeration under five semantics, similarity
//! based degrees of satisfaction and agreement, expansion checks with
//! relaxed-monotony principles, value-based frameworks, a synthetic
//! experiment harness and the plain-text scenario format.

pub mod af;
pub mod agreement;
mod bits;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod rational;
pub mod synth;
pub mod vaf;

pub use af::{ArgFramework, ArgId, Extension, ExtensionSet, SemanticsKind};
pub use agreement::{
    AgreementScenario, Degree, DegreeKind, DegreeResult, ExtensionProfile, SimilarityKind,
};
pub use error::{Error, Result};
pub use rational::SignedDegree;

/// Search-space caps shared by every exhaustive routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest framework accepted by extension enumeration.
    pub max_args: usize,
    /// Largest topic accepted by the powerset maximization of degrees.
    pub max_topic: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_args: 22,
            max_topic: 20,
        }
    }
}
