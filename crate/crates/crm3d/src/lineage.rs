//! Provenance queries over the derivation and creation history of 3D models.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Result;
use crate::graph::KnowledgeGraph;
use crate::profile::terms::*;

/// One activity in a model's history, with everything recorded about it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProvenanceStep {
    pub activity: String,
    pub inputs: Vec<String>,
    pub output: String,
    pub software: Option<String>,
    pub technique: Option<String>,
    pub intervention_type: Option<String>,
    pub format_type: Option<String>,
    pub parameters: Vec<String>,
    pub operators: Vec<String>,
}

/// Topologically ordered provenance steps for one model, ancestors first.
#[derive(Debug, Clone, Serialize)]
pub struct DerivationChain {
    pub target: String,
    pub steps: Vec<ProvenanceStep>,
    /// Set when a cycle was found; the chain is then truncated.
    pub cycle_detected: bool,
}

fn entity_objects(graph: &KnowledgeGraph, subject: &str, property: &str) -> Result<Vec<String>> {
    Ok(graph
        .objects_of(subject, property, false)?
        .into_iter()
        .filter_map(|o| o.as_entity().map(|s| s.to_string()))
        .collect())
}

fn build_step(graph: &KnowledgeGraph, activity: &str, output: &str) -> Result<ProvenanceStep> {
    let mut inputs = entity_objects(graph, activity, L21)?;
    inputs.extend(entity_objects(graph, activity, P16)?);
    inputs.sort();
    inputs.dedup();
    let parameters = graph
        .objects_of(activity, L13, false)?
        .into_iter()
        .filter_map(|o| o.as_literal().map(|l| l.value.clone()))
        .collect();
    // format and intervention types are both P2 typings; tell them apart by
    // which node carries them, and keep phase markers out of the slot
    let phases: Vec<String> = [
        PHASE_PREPARATION,
        PHASE_COLLECTION,
        PHASE_PROCESSING,
        PHASE_PUBLICATION,
    ]
    .iter()
    .flat_map(|p| {
        let mut forms = vec![p.to_string()];
        if let Ok(expanded) = graph.expand(p) {
            forms.push(expanded);
        }
        forms
    })
    .collect();
    let format_type = entity_objects(graph, output, P2)?
        .into_iter()
        .find(|iri| !phases.contains(iri));
    let intervention_type = entity_objects(graph, activity, P2)?
        .into_iter()
        .find(|iri| !phases.contains(iri));
    Ok(ProvenanceStep {
        activity: activity.to_string(),
        inputs,
        output: output.to_string(),
        software: entity_objects(graph, activity, L23)?.into_iter().next(),
        technique: entity_objects(graph, activity, P33)?.into_iter().next(),
        intervention_type,
        format_type,
        parameters,
        operators: entity_objects(graph, activity, L30)?,
    })
}

/// Activities that produced `model`, via L11 or L22, in iri order.
fn producers(graph: &KnowledgeGraph, model: &str) -> Result<Vec<String>> {
    let mut out = graph.subjects_of(model, L22, false)?;
    out.extend(graph.subjects_of(model, L11, false)?);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Backward closure over derivation and output edges, topologically
/// ordered with a deterministic iri tie-break.
pub fn provenance_chain(graph: &KnowledgeGraph, model: &str) -> Result<DerivationChain> {
    graph.expect_instance_of(model, MODEL_3D)?;

    // collect every step reachable backwards from the target
    let mut steps: BTreeMap<(String, String), ProvenanceStep> = BTreeMap::new();
    let mut visited_models: BTreeSet<String> = BTreeSet::new();
    let mut stack = vec![model.to_string()];
    while let Some(current) = stack.pop() {
        if !visited_models.insert(current.clone()) {
            continue;
        }
        for activity in producers(graph, &current)? {
            let step = build_step(graph, &activity, &current)?;
            for input in &step.inputs {
                if graph
                    .is_instance_of(input, MODEL_3D)
                    .unwrap_or(false)
                {
                    stack.push(input.clone());
                }
            }
            steps.insert((activity, current.clone()), step);
        }
    }

    // Kahn's algorithm; a step waits for the producers of its model inputs
    let keys: Vec<(String, String)> = steps.keys().cloned().collect();
    let mut ordered = Vec::new();
    let mut placed_outputs: BTreeSet<String> = BTreeSet::new();
    let mut remaining: BTreeSet<(String, String)> = keys.iter().cloned().collect();
    loop {
        let mut progressed = false;
        // BTreeSet iteration makes the tie-break deterministic by iri
        let ready: Vec<(String, String)> = remaining
            .iter()
            .filter(|key| {
                let step = &steps[*key];
                step.inputs.iter().all(|input| {
                    placed_outputs.contains(input)
                        || !remaining.iter().any(|other| steps[other].output == *input)
                })
            })
            .cloned()
            .collect();
        for key in ready {
            let step = steps[&key].clone();
            placed_outputs.insert(step.output.clone());
            ordered.push(step);
            remaining.remove(&key);
            progressed = true;
        }
        if remaining.is_empty() || !progressed {
            break;
        }
    }
    Ok(DerivationChain {
        target: model.to_string(),
        steps: ordered,
        cycle_detected: !remaining.is_empty(),
    })
}

/// Forward transitive closure of the derivation relation, iri-sorted.
pub fn derivatives_of(graph: &KnowledgeGraph, model: &str) -> Result<Vec<String>> {
    graph.expect_instance_of(model, MODEL_3D)?;
    let mut out: BTreeSet<String> = BTreeSet::new();
    let mut stack = vec![model.to_string()];
    let mut seen: BTreeSet<String> = BTreeSet::new();
    while let Some(current) = stack.pop() {
        if !seen.insert(current.clone()) {
            continue;
        }
        for activity in graph.subjects_of(&current, L21, false)? {
            for output in entity_objects(graph, &activity, L22)? {
                if out.insert(output.clone()) {
                    stack.push(output);
                }
            }
        }
    }
    out.remove(model);
    Ok(out.into_iter().collect())
}

/// Stable human-readable rendering, one step per line.
pub fn chain_to_text(chain: &DerivationChain) -> String {
    let mut out = format!("provenance of {}\n", chain.target);
    for (index, step) in chain.steps.iter().enumerate() {
        let mut line = format!("{}. {} -> {}", index + 1, step.activity, step.output);
        if !step.inputs.is_empty() {
            line.push_str(&format!(" | inputs: {}", step.inputs.join(", ")));
        }
        if let Some(software) = &step.software {
            line.push_str(&format!(" | software: {software}"));
        }
        if let Some(technique) = &step.technique {
            line.push_str(&format!(" | technique: {technique}"));
        }
        if let Some(kind) = &step.intervention_type {
            line.push_str(&format!(" | type: {kind}"));
        }
        if let Some(format) = &step.format_type {
            line.push_str(&format!(" | format: {format}"));
        }
        if !step.parameters.is_empty() {
            line.push_str(&format!(" | parameters: {}", step.parameters.join(", ")));
        }
        if !step.operators.is_empty() {
            line.push_str(&format!(" | operators: {}", step.operators.join(", ")));
        }
        out.push_str(&line);
        out.push('\n');
    }
    if chain.cycle_detected {
        out.push_str("warning: derivation cycle detected, chain truncated\n");
    }
    out
}
