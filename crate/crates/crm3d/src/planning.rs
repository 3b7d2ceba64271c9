//! Digitisation plans built on the CRMsoc Activity Plan prototype, with a
//! fulfilment check of executed work against a plan.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, Statement};
use crate::profile::terms::*;

/// Verdict for one required activity type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Fulfilled by the named activity (first fulfilling iri in order).
    Fulfilled(String),
    Missing,
}

#[derive(Debug, Clone, Serialize)]
pub struct FulfilmentReport {
    pub plan: String,
    pub scope: String,
    pub verdicts: Vec<(String, Verdict)>,
    pub overall: bool,
}

impl FulfilmentReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "plan {} against {}: {}\n",
            self.plan,
            self.scope,
            if self.overall { "fulfilled" } else { "not fulfilled" }
        );
        for (required, verdict) in &self.verdicts {
            match verdict {
                Verdict::Fulfilled(by) => {
                    out.push_str(&format!("  {required}: fulfilled by {by}\n"))
                }
                Verdict::Missing => out.push_str(&format!("  {required}: missing\n")),
            }
        }
        out
    }
}

/// Create an activity plan requiring the given E55 types, optionally bound
/// to a planned target activity.
pub fn create_plan(
    graph: &mut KnowledgeGraph,
    label: &str,
    required_types: &[&str],
    planned_target: Option<&str>,
) -> Result<String> {
    if required_types.is_empty() {
        return Err(Error::InvalidArgument(
            "a checkable plan needs at least one required type".into(),
        ));
    }
    for t in required_types {
        graph.expect_instance_of(t, E55)?;
    }
    if let Some(target) = planned_target {
        graph.expect_instance_of(target, E7)?;
    }
    let plan = graph.create_entity_auto(ACTIVITY_PLAN, Some(label))?;
    for t in required_types {
        graph.assert(&plan.iri, REQUIRES_EVENT_OF_TYPE, t)?;
    }
    if let Some(target) = planned_target {
        graph.assert(&plan.iri, PLANNED_FOR, target)?;
    }
    Ok(plan.iri)
}

pub fn attach_assessment(
    graph: &mut KnowledgeGraph,
    plan: &str,
    document: &str,
) -> Result<Statement> {
    graph.expect_instance_of(plan, ACTIVITY_PLAN)?;
    graph.expect_instance_of(document, E31)?;
    graph.assert(plan, IS_ASSESSED_BY, document)
}

/// Activities contained in `scope`: the scope itself, its P9 descendants
/// (including subproperties such as 3DP2), and creations made during
/// contained sessions (inverse 3DP1).
pub fn contained_activities(graph: &KnowledgeGraph, scope: &str) -> Result<BTreeSet<String>> {
    graph.expect_instance_of(scope, E7)?;
    let mut collected = BTreeSet::new();
    let mut stack = vec![scope.to_string()];
    while let Some(cur) = stack.pop() {
        if !collected.insert(cur.clone()) {
            continue;
        }
        for part in graph.objects_of(&cur, P9, true)? {
            if let Some(iri) = part.as_entity() {
                stack.push(iri.to_string());
            }
        }
        if graph.is_instance_of(&cur, SESSION)? {
            for creation in graph.subjects_of(&cur, MADE_DURING, false)? {
                stack.push(creation);
            }
        }
    }
    Ok(collected)
}

/// Check whether the activities under `scope` fulfil every type the plan
/// requires. Deterministic: first fulfilling activity in iri order.
pub fn check_fulfilment(
    graph: &KnowledgeGraph,
    plan: &str,
    scope: &str,
) -> Result<FulfilmentReport> {
    graph.expect_instance_of(plan, ACTIVITY_PLAN)?;
    let activities = contained_activities(graph, scope)?;

    let mut required: Vec<String> = graph
        .objects_of(plan, REQUIRES_EVENT_OF_TYPE, false)?
        .into_iter()
        .filter_map(|o| o.as_entity().map(|s| s.to_string()))
        .collect();
    required.sort();
    required.dedup();

    let mut verdicts = Vec::new();
    let mut overall = true;
    for required_type in required {
        let mut verdict = Verdict::Missing;
        for activity in &activities {
            let typed = graph
                .objects_of(activity, P2, false)?
                .iter()
                .any(|o| o.as_entity() == Some(required_type.as_str()));
            if typed {
                verdict = Verdict::Fulfilled(activity.clone());
                break;
            }
        }
        if verdict == Verdict::Missing {
            overall = false;
        }
        verdicts.push((required_type, verdict));
    }
    Ok(FulfilmentReport {
        plan: plan.to_string(),
        scope: scope.to_string(),
        verdicts,
        overall,
    })
}
