//! Controlled-vocabulary snapshots: local, immutable label→concept indexes
//! used for typing entities, loaded from tab-separated files.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{is_absolute_iri, KnowledgeGraph};
use crate::profile::terms::E55;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabConcept {
    pub iri: String,
    pub preferred_label: String,
    pub alt_labels: Vec<String>,
    pub broader: Option<String>,
    pub vocabulary: String,
}

/// An immutable snapshot: concepts indexed by iri and case-folded label.
#[derive(Debug, Clone)]
pub struct VocabSnapshot {
    pub id: String,
    concepts: BTreeMap<String, VocabConcept>,
    by_label: BTreeMap<String, Vec<String>>,
}

fn fold(label: &str) -> String {
    label.trim().to_lowercase()
}

/// Parse a snapshot from its line-delimited form:
/// `iri <TAB> preferred <TAB> alt1|alt2 <TAB> broader-iri-or-empty`.
pub fn load_snapshot(id: &str, text: &str) -> Result<VocabSnapshot> {
    let mut concepts: BTreeMap<String, VocabConcept> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: index + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 || fields.len() > 4 {
            return Err(err(format!(
                "expected 2-4 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let iri = fields[0].trim().to_string();
        let preferred = fields[1].trim().to_string();
        if iri.is_empty() || preferred.is_empty() {
            return Err(err("iri and preferred label are required".into()));
        }
        let alt_labels: Vec<String> = fields
            .get(2)
            .map(|f| {
                f.split('|')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default();
        let broader = fields
            .get(3)
            .map(|f| f.trim())
            .filter(|f| !f.is_empty())
            .map(str::to_string);
        if concepts.contains_key(&iri) {
            return Err(err(format!("duplicate concept iri {iri}")));
        }
        concepts.insert(
            iri.clone(),
            VocabConcept {
                iri,
                preferred_label: preferred,
                alt_labels,
                broader,
                vocabulary: id.to_string(),
            },
        );
    }

    // broader links must resolve and be acyclic
    for concept in concepts.values() {
        if let Some(broader) = &concept.broader {
            if !concepts.contains_key(broader) {
                return Err(Error::DanglingReference {
                    context: format!("concept {}", concept.iri),
                    reference: broader.clone(),
                });
            }
        }
    }
    for start in concepts.keys() {
        let mut slow: &str = start;
        let mut fast: &str = start;
        loop {
            let Some(next) = concepts[fast].broader.as_deref() else {
                break;
            };
            fast = next;
            let Some(next) = concepts[fast].broader.as_deref() else {
                break;
            };
            fast = next;
            slow = concepts[slow].broader.as_deref().unwrap();
            if slow == fast {
                return Err(Error::InvalidArgument(format!(
                    "broader cycle through {start}"
                )));
            }
        }
    }

    let mut by_label: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for concept in concepts.values() {
        by_label
            .entry(fold(&concept.preferred_label))
            .or_default()
            .push(concept.iri.clone());
        for alt in &concept.alt_labels {
            by_label.entry(fold(alt)).or_default().push(concept.iri.clone());
        }
    }
    for iris in by_label.values_mut() {
        iris.sort();
        iris.dedup();
    }
    Ok(VocabSnapshot {
        id: id.to_string(),
        concepts,
        by_label,
    })
}

impl VocabSnapshot {
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, iri: &str) -> Option<&VocabConcept> {
        self.concepts.get(iri)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &VocabConcept> {
        self.concepts.values()
    }

    /// Case-folded exact match over preferred and alt labels, iri order.
    pub fn resolve(&self, label: &str) -> Vec<&VocabConcept> {
        self.by_label
            .get(&fold(label))
            .map(|iris| iris.iter().map(|iri| &self.concepts[iri]).collect())
            .unwrap_or_default()
    }
}

/// Materialize a concept as an E55 type entity carrying the concept iri
/// and preferred label. Idempotent per concept iri.
pub fn as_type_entity(graph: &mut KnowledgeGraph, concept: &VocabConcept) -> Result<String> {
    let iri = if is_absolute_iri(&concept.iri) || concept.iri.contains(':') {
        concept.iri.clone()
    } else {
        format!("vocab:{}", concept.iri)
    };
    if graph.contains_entity(&iri) {
        graph.expect_instance_of(&iri, E55)?;
        return Ok(iri);
    }
    graph.create_entity(iri.clone(), E55, Some(&concept.preferred_label))?;
    Ok(iri)
}
