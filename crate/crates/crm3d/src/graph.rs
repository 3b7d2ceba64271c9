//! Instance data container: typed entities plus statements, with
//! domain/range conformance checked against the governing schema.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profile::{ProfileSchema, Range};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

/// Default base used when minting iris for entities created without one.
pub const DEFAULT_BASE_IRI: &str = "http://www.example.org/crm3d/res";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralKind {
    Text,
    Integer,
    Decimal,
    Timestamp,
    IriRef,
}

impl LiteralKind {
    pub fn name(&self) -> &'static str {
        match self {
            LiteralKind::Text => "text",
            LiteralKind::Integer => "integer",
            LiteralKind::Decimal => "decimal",
            LiteralKind::Timestamp => "timestamp",
            LiteralKind::IriRef => "iri-reference",
        }
    }

    /// XSD datatype IRI; `None` for plain text.
    pub fn datatype(&self) -> Option<String> {
        match self {
            LiteralKind::Text => None,
            LiteralKind::Integer => Some(format!("{XSD}integer")),
            LiteralKind::Decimal => Some(format!("{XSD}decimal")),
            LiteralKind::Timestamp => Some(format!("{XSD}dateTime")),
            LiteralKind::IriRef => Some(format!("{XSD}anyURI")),
        }
    }

    pub fn from_datatype(iri: &str) -> Option<LiteralKind> {
        match iri.strip_prefix(XSD)? {
            "integer" => Some(LiteralKind::Integer),
            "decimal" => Some(LiteralKind::Decimal),
            "dateTime" => Some(LiteralKind::Timestamp),
            "anyURI" => Some(LiteralKind::IriRef),
            "string" => Some(LiteralKind::Text),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub value: String,
    pub kind: LiteralKind,
}

impl Literal {
    pub fn new(value: impl Into<String>, kind: LiteralKind) -> Result<Self> {
        let value = value.into();
        let ok = match kind {
            LiteralKind::Text => true,
            LiteralKind::Integer => value.parse::<i64>().is_ok(),
            LiteralKind::Decimal => value
                .parse::<f64>()
                .map(|v| v.is_finite())
                .unwrap_or(false),
            LiteralKind::Timestamp => chrono::DateTime::parse_from_rfc3339(&value).is_ok(),
            LiteralKind::IriRef => is_absolute_iri(&value),
        };
        if ok {
            Ok(Literal { value, kind })
        } else {
            Err(Error::InvalidLiteral {
                value,
                kind: kind.name(),
            })
        }
    }

    pub fn text(value: impl Into<String>) -> Self {
        Literal {
            value: value.into(),
            kind: LiteralKind::Text,
        }
    }

    pub fn timestamp(value: impl Into<String>) -> Result<Self> {
        Literal::new(value, LiteralKind::Timestamp)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Object {
    Entity(String),
    Literal(Literal),
}

impl Object {
    pub fn as_entity(&self) -> Option<&str> {
        match self {
            Object::Entity(iri) => Some(iri),
            Object::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Object::Entity(_) => None,
            Object::Literal(l) => Some(l),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Statement {
    pub subject: String,
    pub property: String,
    pub object: Object,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityRef {
    pub iri: String,
    pub class_id: String,
    pub label: Option<String>,
}

/// Strict rejects non-conformant statements at assertion time; Deferred
/// records them so the validator can report E1/E2 findings later.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strict,
    Deferred,
}

#[derive(Debug, Clone)]
pub struct KnowledgeGraph {
    pub schema: Arc<ProfileSchema>,
    pub mode: Mode,
    entities: BTreeMap<String, EntityRef>,
    statements: Vec<Statement>,
    statement_set: HashSet<Statement>,
    prefixes: BTreeMap<String, String>,
    base_iri: String,
    counters: BTreeMap<String, u64>,
}

impl KnowledgeGraph {
    pub fn new(schema: Arc<ProfileSchema>) -> Self {
        KnowledgeGraph::with_mode(schema, Mode::Strict)
    }

    pub fn with_mode(schema: Arc<ProfileSchema>, mode: Mode) -> Self {
        let mut prefixes = schema.prefixes.clone();
        prefixes.insert("rdf".into(), "http://www.w3.org/1999/02/22-rdf-syntax-ns#".into());
        prefixes.insert("rdfs".into(), "http://www.w3.org/2000/01/rdf-schema#".into());
        prefixes.insert("xsd".into(), XSD.into());
        prefixes.insert("ex".into(), "http://example.org/".into());
        prefixes.insert("aat".into(), "http://vocab.getty.edu/aat/".into());
        KnowledgeGraph {
            schema,
            mode,
            entities: BTreeMap::new(),
            statements: Vec::new(),
            statement_set: HashSet::new(),
            prefixes,
            base_iri: DEFAULT_BASE_IRI.to_string(),
            counters: BTreeMap::new(),
        }
    }

    pub fn set_base_iri(&mut self, base: impl Into<String>) {
        self.base_iri = base.into();
    }

    pub fn add_prefix(&mut self, prefix: impl Into<String>, base: impl Into<String>) {
        self.prefixes.insert(prefix.into(), base.into());
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityRef> {
        self.entities.values()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn entity(&self, iri: &str) -> Result<&EntityRef> {
        self.entities
            .get(iri)
            .ok_or_else(|| Error::UnknownEntity(iri.to_string()))
    }

    pub fn contains_entity(&self, iri: &str) -> bool {
        self.entities.contains_key(iri)
    }

    /// Expand a curie against the graph prefix table, or pass an absolute
    /// IRI through.
    pub fn expand(&self, id: &str) -> Result<String> {
        expand_with(&self.prefixes, id)
    }

    /// Mint a fresh iri `<base>/<class-localname>/<counter>`.
    pub fn mint_iri(&mut self, class_id: &str) -> String {
        let local = class_id.rsplit(':').next().unwrap_or(class_id);
        loop {
            let n = self.counters.entry(local.to_string()).or_insert(0);
            *n += 1;
            let iri = format!("{}/{}/{}", self.base_iri, local, n);
            if !self.entities.contains_key(&iri) {
                return iri;
            }
        }
    }

    pub fn create_entity(
        &mut self,
        iri: impl Into<String>,
        class_id: &str,
        label: Option<&str>,
    ) -> Result<EntityRef> {
        let iri = iri.into();
        self.schema.class(class_id)?;
        if self.entities.contains_key(&iri) {
            return Err(Error::DuplicateIri(iri));
        }
        let entity = EntityRef {
            iri: iri.clone(),
            class_id: class_id.to_string(),
            label: label.map(|l| l.to_string()),
        };
        self.entities.insert(iri, entity.clone());
        Ok(entity)
    }

    /// Create an entity with a minted iri.
    pub fn create_entity_auto(&mut self, class_id: &str, label: Option<&str>) -> Result<EntityRef> {
        let iri = self.mint_iri(class_id);
        self.create_entity(iri, class_id, label)
    }

    pub fn set_label(&mut self, iri: &str, label: &str) -> Result<()> {
        let entity = self
            .entities
            .get_mut(iri)
            .ok_or_else(|| Error::UnknownEntity(iri.to_string()))?;
        entity.label = Some(label.to_string());
        Ok(())
    }

    /// Assert an object statement. Duplicates are ignored idempotently.
    pub fn assert(&mut self, subject: &str, property: &str, object: &str) -> Result<Statement> {
        let prop = self.schema.property(property)?.clone();
        let range_class = match &prop.range {
            Range::Class(c) => c.clone(),
            Range::Literal => {
                return Err(Error::LiteralMismatch {
                    property: property.to_string(),
                    expected: "a literal object",
                    got: "an entity iri",
                })
            }
        };
        let subject_entity = self.entities.get(subject).cloned();
        let object_entity = self.entities.get(object).cloned();
        if self.mode == Mode::Strict {
            let subject_entity = subject_entity
                .as_ref()
                .ok_or_else(|| Error::UnknownEntity(subject.to_string()))?;
            let object_entity = object_entity
                .as_ref()
                .ok_or_else(|| Error::UnknownEntity(object.to_string()))?;
            if !self.schema.is_subclass_of(&subject_entity.class_id, &prop.domain)? {
                return Err(Error::DomainViolation {
                    subject: subject.to_string(),
                    subject_class: subject_entity.class_id.clone(),
                    property: property.to_string(),
                    domain: prop.domain.clone(),
                });
            }
            if !self.schema.is_subclass_of(&object_entity.class_id, &range_class)? {
                return Err(Error::RangeViolation {
                    object: object.to_string(),
                    object_class: object_entity.class_id.clone(),
                    property: property.to_string(),
                    range: range_class,
                });
            }
        }
        Ok(self.push_statement(Statement {
            subject: subject.to_string(),
            property: property.to_string(),
            object: Object::Entity(object.to_string()),
        }))
    }

    /// Assert a literal-valued statement on an annotation property.
    pub fn assert_literal(
        &mut self,
        subject: &str,
        property: &str,
        literal: Literal,
    ) -> Result<Statement> {
        let prop = self.schema.property(property)?.clone();
        if prop.range != Range::Literal {
            return Err(Error::LiteralMismatch {
                property: property.to_string(),
                expected: "an entity iri",
                got: "a literal object",
            });
        }
        let subject_entity = self.entities.get(subject).cloned();
        if self.mode == Mode::Strict {
            let subject_entity = subject_entity
                .as_ref()
                .ok_or_else(|| Error::UnknownEntity(subject.to_string()))?;
            if !self.schema.is_subclass_of(&subject_entity.class_id, &prop.domain)? {
                return Err(Error::DomainViolation {
                    subject: subject.to_string(),
                    subject_class: subject_entity.class_id.clone(),
                    property: property.to_string(),
                    domain: prop.domain.clone(),
                });
            }
        }
        Ok(self.push_statement(Statement {
            subject: subject.to_string(),
            property: property.to_string(),
            object: Object::Literal(literal),
        }))
    }

    fn push_statement(&mut self, statement: Statement) -> Statement {
        if self.statement_set.insert(statement.clone()) {
            self.statements.push(statement.clone());
        }
        statement
    }

    pub fn contains(&self, subject: &str, property: &str, object: &Object) -> bool {
        self.statement_set.contains(&Statement {
            subject: subject.to_string(),
            property: property.to_string(),
            object: object.clone(),
        })
    }

    /// Entities of a class, optionally including subclasses, in iri order.
    pub fn entities_of_class(
        &self,
        class_id: &str,
        include_subclasses: bool,
    ) -> Result<Vec<&EntityRef>> {
        self.schema.class(class_id)?;
        let mut out = Vec::new();
        for entity in self.entities.values() {
            let member = if include_subclasses {
                self.schema.is_subclass_of(&entity.class_id, class_id)?
            } else {
                entity.class_id == class_id
            };
            if member {
                out.push(entity);
            }
        }
        Ok(out)
    }

    /// Objects linked from `subject` via `property`, optionally including
    /// statements carried by its subproperties. Deterministic object order.
    pub fn objects_of(
        &self,
        subject: &str,
        property: &str,
        include_subproperties: bool,
    ) -> Result<Vec<Object>> {
        self.entity(subject)?;
        self.schema.property(property)?;
        let mut out = Vec::new();
        for st in &self.statements {
            if st.subject != subject {
                continue;
            }
            let matched = if include_subproperties {
                self.schema.is_subproperty_of(&st.property, property)?
            } else {
                st.property == property
            };
            if matched {
                out.push(st.object.clone());
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Subjects pointing at `object` via `property` (or a subproperty).
    pub fn subjects_of(
        &self,
        object: &str,
        property: &str,
        include_subproperties: bool,
    ) -> Result<Vec<String>> {
        self.schema.property(property)?;
        let mut out = Vec::new();
        for st in &self.statements {
            if st.object.as_entity() != Some(object) {
                continue;
            }
            let matched = if include_subproperties {
                self.schema.is_subproperty_of(&st.property, property)?
            } else {
                st.property == property
            };
            if matched {
                out.push(st.subject.clone());
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// True iff `entity` is an instance of `class_id` or one of its
    /// subclasses.
    pub fn is_instance_of(&self, iri: &str, class_id: &str) -> Result<bool> {
        let entity = self.entity(iri)?;
        self.schema.is_subclass_of(&entity.class_id, class_id)
    }

    /// Error unless `entity` belongs to the `class_id` family.
    pub fn expect_instance_of(&self, iri: &str, class_id: &str) -> Result<()> {
        if self.is_instance_of(iri, class_id)? {
            Ok(())
        } else {
            Err(Error::ClassMismatch {
                entity: iri.to_string(),
                class: self.entity(iri)?.class_id.clone(),
                expected: class_id.to_string(),
            })
        }
    }
}

/// RFC 3987 subset check: an absolute IRI with a scheme and no whitespace
/// or angle brackets.
pub fn is_absolute_iri(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    if scheme.is_empty() || !scheme.chars().next().unwrap().is_ascii_alphabetic() {
        return false;
    }
    if !scheme
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.')
    {
        return false;
    }
    if s.len() == colon + 1 {
        return false;
    }
    !s.chars()
        .any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"' || c.is_control())
}

/// Expand `id` against a prefix table; absolute IRIs pass through.
pub fn expand_with(prefixes: &BTreeMap<String, String>, id: &str) -> Result<String> {
    if let Some(colon) = id.find(':') {
        let prefix = &id[..colon];
        if let Some(base) = prefixes.get(prefix) {
            return Ok(format!("{}{}", base, &id[colon + 1..]));
        }
    }
    if is_absolute_iri(id) {
        Ok(id.to_string())
    } else {
        Err(Error::UnknownPrefix(id.to_string()))
    }
}

/// Contract an absolute IRI to a curie by longest-prefix match; returns the
/// input unchanged when no prefix applies.
pub fn contract_with(prefixes: &BTreeMap<String, String>, iri: &str) -> String {
    let mut best: Option<(&str, &str)> = None;
    for (prefix, base) in prefixes {
        if iri.starts_with(base.as_str()) && best.map(|(_, b)| base.len() > b.len()).unwrap_or(true)
        {
            best = Some((prefix, base));
        }
    }
    match best {
        Some((prefix, base)) => format!("{}:{}", prefix, &iri[base.len()..]),
        None => iri.to_string(),
    }
}
