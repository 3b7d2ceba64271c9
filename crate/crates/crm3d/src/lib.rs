//! Metadata engine for documenting how Cultural Heritage 3D models are
//! planned, produced, derived and published, as a CIDOC CRM application
//! profile over an in-memory knowledge graph.

pub mod builder;
pub mod error;
pub mod graph;
pub mod ifc;
pub mod lineage;
pub mod log;
pub mod planning;
pub mod profile;
pub mod report;
pub mod serializer;
pub mod validator;
pub mod vocab;

pub use error::{Error, Result};
pub use graph::{KnowledgeGraph, Literal, LiteralKind, Mode, Object, Statement};
pub use profile::{load_builtin_profile, ProfileSchema};
pub use report::{Finding, Severity, ValidationReport};
