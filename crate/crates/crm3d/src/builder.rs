//! High-level operations translating the four workflow phases (preparation,
//! data collection, data processing, publication) into graph structure, so
//! callers never hand-write triples.

use crate::error::{Error, Result};
use crate::graph::{is_absolute_iri, KnowledgeGraph, Literal, LiteralKind, Statement};
use crate::profile::terms::*;

/// Workflow phase a recorded activity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Preparation,
    DataCollection,
    DataProcessing,
    Publication,
}

impl Phase {
    pub fn concept_iri(&self) -> &'static str {
        match self {
            Phase::Preparation => PHASE_PREPARATION,
            Phase::DataCollection => PHASE_COLLECTION,
            Phase::DataProcessing => PHASE_PROCESSING,
            Phase::Publication => PHASE_PUBLICATION,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Phase::Preparation => "Preparation",
            Phase::DataCollection => "Data Collection",
            Phase::DataProcessing => "Data Processing",
            Phase::Publication => "Publication",
        }
    }
}

/// Ensure the reserved phase concept exists and return its iri.
pub fn phase_concept(graph: &mut KnowledgeGraph, phase: Phase) -> Result<String> {
    let iri = phase.concept_iri();
    if !graph.contains_entity(iri) {
        graph.create_entity(iri, E55, Some(phase.label()))?;
    }
    Ok(iri.to_string())
}

/// Record phase membership of an activity as a P2 typing.
pub fn mark_phase(graph: &mut KnowledgeGraph, activity: &str, phase: Phase) -> Result<Statement> {
    let concept = phase_concept(graph, phase)?;
    graph.assert(activity, P2, &concept)
}

/// Create a PE35 project with its PE34 team and the listed members.
/// Returns (project iri, team iri).
pub fn begin_project(
    graph: &mut KnowledgeGraph,
    name: &str,
    team_members: &[&str],
) -> Result<(String, String)> {
    for member in team_members {
        graph.entity(member)?;
    }
    let project = graph.create_entity_auto(PE35, Some(name))?;
    let team = graph.create_entity_auto(PE34, Some(&format!("{name} team")))?;
    graph.assert(&project.iri, P14, &team.iri)?;
    for member in team_members {
        graph.assert(&project.iri, P11, member)?;
    }
    Ok((project.iri, team.iri))
}

/// Link an activity to its general (E55) and/or specific (E7) purpose.
pub fn set_purpose(
    graph: &mut KnowledgeGraph,
    activity: &str,
    general_type: Option<&str>,
    specific_activity: Option<&str>,
) -> Result<Vec<Statement>> {
    if general_type.is_none() && specific_activity.is_none() {
        return Err(Error::InvalidArgument(
            "set_purpose needs a general type or a specific activity".into(),
        ));
    }
    graph.expect_instance_of(activity, E7)?;
    let mut out = Vec::new();
    if let Some(t) = general_type {
        out.push(graph.assert(activity, P21, t)?);
    }
    if let Some(a) = specific_activity {
        out.push(graph.assert(activity, P20, a)?);
    }
    Ok(out)
}

pub fn add_campaign(graph: &mut KnowledgeGraph, project: &str, label: &str) -> Result<String> {
    graph.expect_instance_of(project, PE35)?;
    let campaign = graph.create_entity_auto(CAMPAIGN, Some(label))?;
    graph.assert(project, PP43, &campaign.iri)?;
    Ok(campaign.iri)
}

pub fn add_session(
    graph: &mut KnowledgeGraph,
    campaign: &str,
    label: &str,
    begin: Option<&str>,
    end: Option<&str>,
) -> Result<String> {
    graph.expect_instance_of(campaign, CAMPAIGN)?;
    let session = graph.create_entity_auto(SESSION, Some(label))?;
    graph.assert(campaign, HAS_SESSION, &session.iri)?;
    if let Some(b) = begin {
        graph.assert_literal(&session.iri, TIMESTAMP_BEGIN, Literal::timestamp(b)?)?;
    }
    if let Some(e) = end {
        graph.assert_literal(&session.iri, TIMESTAMP_END, Literal::timestamp(e)?)?;
    }
    Ok(session.iri)
}

/// Create a 3DE1 model-creation activity inside a session.
pub fn record_model_creation(
    graph: &mut KnowledgeGraph,
    session: &str,
    label: &str,
) -> Result<String> {
    graph.expect_instance_of(session, SESSION)?;
    let creation = graph.create_entity_auto(MODEL_CREATION, Some(label))?;
    graph.assert(&creation.iri, MADE_DURING, session)?;
    Ok(creation.iri)
}

pub fn attach_documentation(
    graph: &mut KnowledgeGraph,
    activity: &str,
    document: &str,
) -> Result<Statement> {
    graph.entity(activity)?;
    graph.expect_instance_of(document, E31)?;
    graph.assert(activity, P70, document)
}

/// Record an S4 observation of `target` inside `parent_activity`.
pub fn record_observation(
    graph: &mut KnowledgeGraph,
    parent_activity: &str,
    target: &str,
    note: Option<&str>,
) -> Result<String> {
    graph.expect_instance_of(parent_activity, E7)?;
    graph.entity(target)?;
    let observation = graph.create_entity_auto(S4, None)?;
    graph.assert(parent_activity, P9, &observation.iri)?;
    graph.assert(&observation.iri, O8, target)?;
    if let Some(n) = note {
        graph.assert_literal(&observation.iri, NOTE, Literal::text(n))?;
    }
    Ok(observation.iri)
}

/// Record an acquisition activity under a 3DE1 and its output 3DE4 model.
/// Returns (activity iri, model iri).
pub fn record_acquisition(
    graph: &mut KnowledgeGraph,
    creation: &str,
    operator: &str,
    software: Option<&str>,
    sources: &[&str],
    output_label: &str,
) -> Result<(String, String)> {
    graph.expect_instance_of(creation, MODEL_CREATION)?;
    graph.expect_instance_of(operator, E21)?;
    if let Some(sw) = software {
        graph.expect_instance_of(sw, D14)?;
    }
    for source in sources {
        graph.expect_instance_of(source, E31)?;
    }
    let activity = graph.create_entity_auto(E7, Some(&format!("{output_label} acquisition")))?;
    graph.assert(creation, P9, &activity.iri)?;
    graph.assert(&activity.iri, L30, operator)?;
    if let Some(sw) = software {
        graph.assert(&activity.iri, L23, sw)?;
    }
    for source in sources {
        graph.assert(&activity.iri, P16, source)?;
    }
    let model = graph.create_entity_auto(MODEL_3D, Some(output_label))?;
    graph.assert(&activity.iri, L11, &model.iri)?;
    Ok((activity.iri, model.iri))
}

/// Optional detail for a derivation or integration step.
#[derive(Debug, Clone, Default)]
pub struct DerivationSpec<'a> {
    pub technique: Option<&'a str>,
    pub intervention_type: Option<&'a str>,
    pub format_type: Option<&'a str>,
    pub parameters: Vec<(&'a str, &'a str)>,
    pub software: Option<&'a str>,
}

fn apply_derivation_spec(
    graph: &mut KnowledgeGraph,
    activity: &str,
    model: &str,
    spec: &DerivationSpec,
) -> Result<()> {
    if let Some(t) = spec.technique {
        graph.expect_instance_of(t, E29)?;
        graph.assert(activity, P33, t)?;
    }
    if let Some(t) = spec.intervention_type {
        graph.expect_instance_of(t, E55)?;
        graph.assert(activity, P2, t)?;
    }
    if let Some(t) = spec.format_type {
        graph.expect_instance_of(t, E55)?;
        graph.assert(model, P2, t)?;
    }
    for (name, value) in &spec.parameters {
        graph.assert_literal(activity, L13, Literal::text(format!("{name}={value}")))?;
    }
    if let Some(sw) = spec.software {
        graph.expect_instance_of(sw, D14)?;
        graph.assert(activity, L23, sw)?;
    }
    Ok(())
}

// Output is freshly minted, so it cannot already be an L21-ancestor of
// itself; checked anyway so hand-edited graphs fail loudly.
fn assert_no_derivation_cycle(graph: &KnowledgeGraph, output: &str, sources: &[&str]) -> Result<()> {
    let mut stack: Vec<String> = sources.iter().map(|s| s.to_string()).collect();
    let mut seen = std::collections::BTreeSet::new();
    while let Some(cur) = stack.pop() {
        if cur == output {
            return Err(Error::InvalidArgument(format!(
                "derivation would make {output} an ancestor of itself"
            )));
        }
        if !seen.insert(cur.clone()) {
            continue;
        }
        // models that fed the activities which produced `cur`
        for producer in graph.subjects_of(&cur, L22, false)? {
            for input in graph.objects_of(&producer, L21, false)? {
                if let Some(iri) = input.as_entity() {
                    stack.push(iri.to_string());
                }
            }
        }
    }
    Ok(())
}

/// Record a D3 formal derivation from one source model.
/// Returns (activity iri, new model iri).
pub fn record_derivation(
    graph: &mut KnowledgeGraph,
    source_model: &str,
    spec: &DerivationSpec,
    output_label: &str,
) -> Result<(String, String)> {
    graph.expect_instance_of(source_model, MODEL_3D)?;
    let activity = graph.create_entity_auto(D3, Some(&format!("{output_label} derivation")))?;
    let model = graph.create_entity_auto(MODEL_3D, Some(output_label))?;
    assert_no_derivation_cycle(graph, &model.iri, &[source_model])?;
    graph.assert(&activity.iri, L21, source_model)?;
    graph.assert(&activity.iri, L22, &model.iri)?;
    apply_derivation_spec(graph, &activity.iri, &model.iri, spec)?;
    Ok((activity.iri, model.iri))
}

/// Record a D3 integrating two or more source models into a new one.
pub fn integrate(
    graph: &mut KnowledgeGraph,
    sources: &[&str],
    output_label: &str,
    spec: &DerivationSpec,
) -> Result<(String, String)> {
    if sources.len() < 2 {
        return Err(Error::InvalidArgument(
            "integrate needs at least two source models".into(),
        ));
    }
    let mut distinct = std::collections::BTreeSet::new();
    for source in sources {
        if !distinct.insert(*source) {
            return Err(Error::InvalidArgument(format!(
                "duplicate integration source {source}"
            )));
        }
        graph.expect_instance_of(source, MODEL_3D)?;
    }
    let activity = graph.create_entity_auto(D3, Some(&format!("{output_label} integration")))?;
    let model = graph.create_entity_auto(MODEL_3D, Some(output_label))?;
    assert_no_derivation_cycle(graph, &model.iri, sources)?;
    for source in sources {
        graph.assert(&activity.iri, L21, source)?;
    }
    graph.assert(&activity.iri, L22, &model.iri)?;
    apply_derivation_spec(graph, &activity.iri, &model.iri, spec)?;
    Ok((activity.iri, model.iri))
}

/// Publish a model on a hosting service with an access point.
/// Returns (service iri, access point iri).
pub fn publish_model(
    graph: &mut KnowledgeGraph,
    model: &str,
    service_label: &str,
    provider: &str,
    access_url: &str,
    viewer_software: Option<&str>,
) -> Result<(String, String)> {
    graph.expect_instance_of(model, MODEL_3D)?;
    graph.expect_instance_of(provider, E39)?;
    if !is_absolute_iri(access_url) {
        return Err(Error::InvalidIri(access_url.to_string()));
    }
    if let Some(viewer) = viewer_software {
        graph.expect_instance_of(viewer, D14)?;
    }
    let service = graph.create_entity_auto(PE2, Some(service_label))?;
    let access = graph.create_entity_auto(PE29, Some(&format!("{service_label} access point")))?;
    graph.assert(model, MANAGED_BY, &service.iri)?;
    graph.assert(&service.iri, PP2, provider)?;
    graph.assert(&service.iri, PP49, &access.iri)?;
    graph.assert(&access.iri, PP50, model)?;
    graph.assert_literal(
        &access.iri,
        NOTE,
        Literal::new(access_url, LiteralKind::IriRef)?,
    )?;
    if let Some(viewer) = viewer_software {
        let execution = graph.create_entity_auto(D10, Some(&format!("{service_label} viewer")))?;
        graph.assert(&execution.iri, L23, viewer)?;
        graph.assert(&execution.iri, L2, model)?;
    }
    Ok((service.iri, access.iri))
}
