//! Toolkit for Raven-style progressive matrices: procedural generation with
//! exact ground truth, a rule-induction solver, text prompt encodings at
//! several abstraction levels, and token-length-normalized log-probability
//! scoring against pluggable language-model backends.

pub mod domain;
pub mod oracle;

pub use domain::{
    AttrState, AttributeKind, AttributeValue, CandidateSet, ComponentRecord, EntityRecord,
    GridShape, LayoutRecord, Matrix, MatrixItem, Mode, PositionSet, PuzzleInstance, Relation,
    RelationFamily, RuleSpec, SubTask,
};
pub use oracle::{Hypothesis, Solution};
