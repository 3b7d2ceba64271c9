//! Whole-graph conformance and completeness checking.
//!
//! Rule catalog:
//!   E1  domain/range violation (statements accepted in deferred mode)
//!   E2  dangling iri reference
//!   E3  derivation cycle among 3D models
//!   W1  session not attached to any campaign
//!   W2  model creation with zero or multiple session links
//!   W3  producing activity without recorded software or operator
//!   W4  3D model without recorded provenance
//!   W5  published model unreachable from any access point
//!   W6  team without members

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, Object, Statement};
use crate::profile::terms::*;
use crate::profile::Range;
use crate::report::{Finding, Severity, ValidationReport};

const RULES: &[(&str, &str)] = &[
    (
        "E1",
        "A statement must respect the declared domain and range of its \
         property. Violations can only enter a graph through deferred-mode \
         ingestion of legacy data.",
    ),
    (
        "E2",
        "Every iri a statement mentions must resolve to a registered entity; \
         a dangling reference breaks the closure of the graph.",
    ),
    (
        "E3",
        "Derivation describes the transition from a source model to a \
         processed one, so the derivation relation must stay acyclic: no \
         model may be its own ancestor.",
    ),
    (
        "W1",
        "Sessions normally take place within a campaign; a session with no \
         incoming has-session link is allowed but probably incomplete.",
    ),
    (
        "W2",
        "A model creation is expected to sit in exactly one session; zero or \
         multiple session links are flagged because the cardinality is an \
         open modelling question, not an error.",
    ),
    (
        "W3",
        "Acquisition and derivation activities should record the software \
         used and the operator who performed them; without these the \
         provenance record is incomplete.",
    ),
    (
        "W4",
        "A 3D model with no producing activity has no recorded provenance, \
         which defeats transparent documentation of digital assets.",
    ),
    (
        "W5",
        "A model published on a hosting service should be reachable from an \
         access point, otherwise the publication record names no digital \
         location.",
    ),
    (
        "W6",
        "A team with no members (neither direct participants nor through its \
         project) documents nobody and is probably a data-entry gap.",
    ),
];

/// Human-readable rationale for a catalog rule.
pub fn explain_rule(rule_id: &str) -> Result<&'static str> {
    RULES
        .iter()
        .find(|(id, _)| *id == rule_id)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::UnknownRule(rule_id.to_string()))
}

pub fn rule_ids() -> Vec<&'static str> {
    RULES.iter().map(|(id, _)| *id).collect()
}

fn statement_subject(st: &Statement) -> String {
    match &st.object {
        Object::Entity(o) => format!("{} {} {}", st.subject, st.property, o),
        Object::Literal(l) => format!("{} {} {}", st.subject, st.property, l),
    }
}

/// Apply the full rule catalog. All outcomes are findings; the report is
/// deterministic for a given graph.
pub fn validate_graph(graph: &KnowledgeGraph) -> Result<ValidationReport> {
    let mut report = ValidationReport::new();
    let schema = &graph.schema;

    // E1/E2 over every statement
    for st in graph.statements() {
        let prop = schema.property(&st.property)?;
        let subject_entity = match graph.entity(&st.subject) {
            Ok(e) => Some(e),
            Err(_) => {
                report.push(Finding::new(
                    Severity::Error,
                    "E2",
                    statement_subject(st),
                    format!("subject {} is not a registered entity", st.subject),
                ));
                None
            }
        };
        if let Some(entity) = subject_entity {
            if !schema.is_subclass_of(&entity.class_id, &prop.domain)? {
                report.push(Finding::new(
                    Severity::Error,
                    "E1",
                    statement_subject(st),
                    format!(
                        "subject class {} is outside the domain {} of {}",
                        entity.class_id, prop.domain, st.property
                    ),
                ));
            }
        }
        if let (Object::Entity(object), Range::Class(range)) = (&st.object, &prop.range) {
            match graph.entity(object) {
                Ok(entity) => {
                    if !schema.is_subclass_of(&entity.class_id, range)? {
                        report.push(Finding::new(
                            Severity::Error,
                            "E1",
                            statement_subject(st),
                            format!(
                                "object class {} is outside the range {} of {}",
                                entity.class_id, range, st.property
                            ),
                        ));
                    }
                }
                Err(_) => {
                    report.push(Finding::new(
                        Severity::Error,
                        "E2",
                        statement_subject(st),
                        format!("object {} is not a registered entity", object),
                    ));
                }
            }
        }
    }

    // Derivation edges source -> output, composed over each activity.
    let mut derivation_edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut sources_by_activity: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut outputs_by_activity: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for st in graph.statements() {
        if let Object::Entity(object) = &st.object {
            if st.property == L21 {
                sources_by_activity.entry(&st.subject).or_default().push(object);
            } else if st.property == L22 {
                outputs_by_activity.entry(&st.subject).or_default().push(object);
            }
        }
    }
    for (activity, sources) in &sources_by_activity {
        if let Some(outputs) = outputs_by_activity.get(activity) {
            for source in sources {
                for output in outputs {
                    derivation_edges
                        .entry(source.to_string())
                        .or_default()
                        .insert(output.to_string());
                }
            }
        }
    }
    report_derivation_cycles(&derivation_edges, &mut report);

    // Per-entity completeness rules
    let mut incoming_has_session: BTreeSet<&str> = BTreeSet::new();
    let mut incoming_l11_l22: BTreeSet<&str> = BTreeSet::new();
    let mut incoming_pp50: BTreeSet<&str> = BTreeSet::new();
    let mut made_during_count: BTreeMap<&str, usize> = BTreeMap::new();
    let mut has_l23: BTreeSet<&str> = BTreeSet::new();
    let mut has_l30: BTreeSet<&str> = BTreeSet::new();
    let mut published: BTreeSet<&str> = BTreeSet::new();
    let mut team_has_p11: BTreeSet<&str> = BTreeSet::new();
    let mut teams_of_project: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut project_has_p11: BTreeSet<&str> = BTreeSet::new();
    for st in graph.statements() {
        let object = match &st.object {
            Object::Entity(o) => Some(o.as_str()),
            Object::Literal(_) => None,
        };
        match st.property.as_str() {
            p if p == HAS_SESSION => {
                if let Some(o) = object {
                    incoming_has_session.insert(o);
                }
            }
            p if p == L11 || p == L22 => {
                if let Some(o) = object {
                    incoming_l11_l22.insert(o);
                }
            }
            p if p == PP50 => {
                if let Some(o) = object {
                    incoming_pp50.insert(o);
                }
            }
            p if p == MADE_DURING => {
                *made_during_count.entry(st.subject.as_str()).or_insert(0) += 1;
            }
            p if p == L23 => {
                has_l23.insert(st.subject.as_str());
            }
            p if p == L30 => {
                has_l30.insert(st.subject.as_str());
            }
            p if p == MANAGED_BY => {
                published.insert(st.subject.as_str());
            }
            p if p == P11 => {
                project_has_p11.insert(st.subject.as_str());
                // direct membership also counts
                team_has_p11.insert(st.subject.as_str());
            }
            p if p == P14 => {
                if let Some(o) = object {
                    teams_of_project.entry(o).or_default().push(&st.subject);
                }
            }
            _ => {}
        }
    }

    for entity in graph.entities() {
        let iri = entity.iri.as_str();
        if graph.schema.is_subclass_of(&entity.class_id, SESSION)?
            && !incoming_has_session.contains(iri)
        {
            report.push(Finding::new(
                Severity::Warning,
                "W1",
                iri,
                "session is not attached to any campaign",
            ));
        }
        if graph.schema.is_subclass_of(&entity.class_id, MODEL_CREATION)? {
            let n = made_during_count.get(iri).copied().unwrap_or(0);
            if n != 1 {
                report.push(Finding::new(
                    Severity::Warning,
                    "W2",
                    iri,
                    format!("model creation has {n} session links, expected 1"),
                ));
            }
        }
        if graph.schema.is_subclass_of(&entity.class_id, MODEL_3D)? {
            if !incoming_l11_l22.contains(iri) {
                report.push(Finding::new(
                    Severity::Warning,
                    "W4",
                    iri,
                    "model has no recorded provenance (no producing activity)",
                ));
            }
            if published.contains(iri) && !incoming_pp50.contains(iri) {
                report.push(Finding::new(
                    Severity::Warning,
                    "W5",
                    iri,
                    "published model is not reachable from any access point",
                ));
            }
        }
        if graph.schema.is_subclass_of(&entity.class_id, PE34)? {
            let mut has_members = team_has_p11.contains(iri);
            if !has_members {
                if let Some(projects) = teams_of_project.get(iri) {
                    has_members = projects.iter().any(|p| project_has_p11.contains(*p));
                }
            }
            if !has_members {
                report.push(Finding::new(
                    Severity::Warning,
                    "W6",
                    iri,
                    "team has no members",
                ));
            }
        }
    }

    // W3: activities that produced something but lack software or operator
    let mut producers: BTreeSet<&str> = BTreeSet::new();
    for st in graph.statements() {
        if st.property == L11 || st.property == L22 {
            producers.insert(st.subject.as_str());
        }
    }
    for activity in producers {
        let mut missing = Vec::new();
        if !has_l23.contains(activity) {
            missing.push("software");
        }
        if !has_l30.contains(activity) {
            missing.push("operator");
        }
        if !missing.is_empty() {
            report.push(Finding::new(
                Severity::Warning,
                "W3",
                activity,
                format!("producing activity lacks {}", missing.join(" and ")),
            ));
        }
    }

    report.finalize();
    Ok(report)
}

fn report_derivation_cycles(
    edges: &BTreeMap<String, BTreeSet<String>>,
    report: &mut ValidationReport,
) {
    let reaches = |from: &str, to: &str| -> bool {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<&str> = edges
            .get(from)
            .map(|s| s.iter().map(|x| x.as_str()).collect())
            .unwrap_or_default();
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                return true;
            }
            if !seen.insert(cur) {
                continue;
            }
            if let Some(next) = edges.get(cur) {
                queue.extend(next.iter().map(|x| x.as_str()));
            }
        }
        false
    };
    let mut nodes: BTreeSet<&str> = BTreeSet::new();
    for (src, outs) in edges {
        nodes.insert(src);
        nodes.extend(outs.iter().map(|x| x.as_str()));
    }
    let cyclic: Vec<&str> = nodes.iter().copied().filter(|n| reaches(n, n)).collect();
    let mut assigned: BTreeSet<&str> = BTreeSet::new();
    for node in &cyclic {
        if assigned.contains(node) {
            continue;
        }
        let component: Vec<&str> = cyclic
            .iter()
            .copied()
            .filter(|other| reaches(node, other) && reaches(other, node))
            .collect();
        for member in &component {
            assigned.insert(member);
        }
        report.push(Finding::new(
            Severity::Error,
            "E3",
            component.first().copied().unwrap_or(node),
            format!("derivation cycle through {}", component.join(" -> ")),
        ));
    }
}
