//! Exact symbolic verification of GKLO difference-operator images for
//! shifted quantum affine symmetric pairs of split simply-laced type.
//!
//! The pipeline: [`cartan`] parses an instance, [`scalars`] provides the
//! coefficient field, [`qtorus`] the difference-operator algebra, [`gklo`]
//! builds the operators and mode tables, and [`verifier`] checks relations
//! and auxiliary identities coefficient by coefficient.

pub mod cartan;
pub mod gklo;
pub mod qtorus;
pub mod scalars;
pub mod verifier;

pub use cartan::{load_instance, load_instance_with, validate, Instance, InstanceError, ValidationReport, VertexData};
pub use scalars::{Scalar, VariableTable};
pub use verifier::{CheckReport, Status};
