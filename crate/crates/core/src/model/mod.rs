//! Semantic units, object positions, resources and the store that holds them.

mod literal;
pub mod record;
mod resource;
mod store;
mod time;
mod triple;
mod unit;
mod upri;
pub mod vocab;

pub use literal::{Datatype, Literal};
pub use resource::{Resource, ResourceKind};
pub use store::Store;
pub use time::Timestamp;
pub use triple::{Term, Triple};
pub use unit::*;
pub use upri::Upri;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid UPRI {value:?}: {reason}")]
    InvalidUpri { value: String, reason: &'static str },
    #[error("{value:?} is not a valid {datatype} literal")]
    InvalidLiteral { value: String, datatype: Datatype },
    #[error("invalid timestamp {value:?}: {reason}")]
    InvalidTimestamp { value: String, reason: String },
    #[error("{kind} resource {resource} needs a class affiliation")]
    MissingClassAffiliation { resource: Upri, kind: ResourceKind },
    #[error("statements about some-instance subjects must be marked contingent or prototypical")]
    ChoiceRequired,
    #[error("properties cannot be statement subjects")]
    PropertySubject,
}
