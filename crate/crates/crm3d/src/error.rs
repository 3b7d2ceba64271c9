use thiserror::Error;

/// Errors raised by schema, graph and builder operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown class: {0}")]
    UnknownClass(String),
    #[error("unknown property: {0}")]
    UnknownProperty(String),
    #[error("unknown entity: {0}")]
    UnknownEntity(String),
    #[error("unknown rule: {0}")]
    UnknownRule(String),
    #[error("duplicate id: {0}")]
    DuplicateId(String),
    #[error("duplicate iri: {0}")]
    DuplicateIri(String),
    #[error("dangling reference to {reference} in {context}")]
    DanglingReference { context: String, reference: String },
    #[error("no prefix registered for {0}")]
    UnknownPrefix(String),
    #[error("domain violation: subject {subject} of class {subject_class} is not in the domain {domain} of {property}")]
    DomainViolation {
        subject: String,
        subject_class: String,
        property: String,
        domain: String,
    },
    #[error("range violation: object {object} of class {object_class} is not in the range {range} of {property}")]
    RangeViolation {
        object: String,
        object_class: String,
        property: String,
        range: String,
    },
    #[error("property {property} expects {expected}, got {got}")]
    LiteralMismatch {
        property: String,
        expected: &'static str,
        got: &'static str,
    },
    #[error("literal {value:?} does not parse as {kind}")]
    InvalidLiteral { value: String, kind: &'static str },
    #[error("not an absolute IRI: {0}")]
    InvalidIri(String),
    #[error("entity {entity} has class {class}, expected a subclass of {expected}")]
    ClassMismatch {
        entity: String,
        class: String,
        expected: String,
    },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Step {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown term {term} at line {line}")]
    UnknownTerm { term: String, line: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
