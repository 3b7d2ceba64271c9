//! Campaign-log ingestion: turns a JSON work log (projects, campaigns,
//! sessions, creations and the steps inside them) into a knowledge graph
//! via the builder operations. The format is versioned; see
//! docs/campaign-log-schema.md.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::builder::{self, DerivationSpec, Phase};
use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;
use crate::planning;
use crate::profile::terms::P9;
use crate::profile::ProfileSchema;
use crate::report::{Finding, Severity, ValidationReport};
use std::sync::Arc;

pub const LOG_VERSION: u64 = 1;

struct Ingest {
    graph: KnowledgeGraph,
    findings: ValidationReport,
    strict: bool,
    /// output_label → model iri, for referencing models across steps
    models: BTreeMap<String, String>,
    /// campaign label → iri, for plan targets
    campaigns: BTreeMap<String, String>,
}

fn bad(path: &str, message: impl Into<String>) -> Error {
    Error::InvalidArgument(format!("{path}: {}", message.into()))
}

fn as_object<'a>(value: &'a Value, path: &str) -> Result<&'a serde_json::Map<String, Value>> {
    value.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn as_array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn req_str<'a>(obj: &'a serde_json::Map<String, Value>, key: &str, path: &str) -> Result<&'a str> {
    obj.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| bad(path, format!("missing or non-string field `{key}`")))
}

fn opt_str<'a>(
    obj: &'a serde_json::Map<String, Value>,
    key: &str,
    path: &str,
) -> Result<Option<&'a str>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.as_str())),
        Some(_) => Err(bad(path, format!("field `{key}` must be a string"))),
    }
}

fn str_list(obj: &serde_json::Map<String, Value>, key: &str, path: &str) -> Result<Vec<String>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(value) => {
            let items = as_array(value, &format!("{path}.{key}"))?;
            items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad(path, format!("`{key}` entries must be strings")))
                })
                .collect()
        }
    }
}

impl Ingest {
    fn check_keys(
        &mut self,
        obj: &serde_json::Map<String, Value>,
        allowed: &[&str],
        path: &str,
    ) -> Result<()> {
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                if self.strict {
                    return Err(bad(path, format!("unknown key `{key}`")));
                }
                self.findings.push(Finding::new(
                    Severity::Warning,
                    "L4",
                    path.to_string(),
                    format!("unknown key `{key}` ignored"),
                ));
            }
        }
        Ok(())
    }

    /// Resolve a model reference: an output label from this log, or an
    /// existing entity iri.
    fn model(&self, reference: &str, path: &str) -> Result<String> {
        if let Some(iri) = self.models.get(reference) {
            return Ok(iri.clone());
        }
        if self.graph.contains_entity(reference) {
            return Ok(reference.to_string());
        }
        Err(bad(path, format!("unknown model reference `{reference}`")))
    }

    fn register_model(&mut self, label: &str, iri: String, path: &str) -> Result<()> {
        if self.models.insert(label.to_string(), iri).is_some() {
            return Err(bad(path, format!("duplicate output label `{label}`")));
        }
        Ok(())
    }

    fn entities(&mut self, value: &Value) -> Result<()> {
        for (index, entry) in as_array(value, "entities")?.iter().enumerate() {
            let path = format!("entities[{index}]");
            let obj = as_object(entry, &path)?;
            self.check_keys(obj, &["iri", "class", "label"], &path)?;
            let iri = req_str(obj, "iri", &path)?;
            let class = req_str(obj, "class", &path)?;
            let label = opt_str(obj, "label", &path)?;
            self.graph.create_entity(iri, class, label)?;
        }
        Ok(())
    }

    fn observations(&mut self, value: &Value, parent: &str, path: &str) -> Result<()> {
        for (index, entry) in as_array(value, path)?.iter().enumerate() {
            let path = format!("{path}[{index}]");
            let obj = as_object(entry, &path)?;
            self.check_keys(obj, &["target", "note"], &path)?;
            let target = req_str(obj, "target", &path)?;
            let note = opt_str(obj, "note", &path)?;
            let observation =
                builder::record_observation(&mut self.graph, parent, target, note)?;
            builder::mark_phase(&mut self.graph, &observation, Phase::Preparation)?;
        }
        Ok(())
    }

    fn derivation_spec<'a>(
        &self,
        obj: &'a serde_json::Map<String, Value>,
        path: &str,
    ) -> Result<(DerivationSpec<'a>, Vec<(String, String)>)> {
        let mut parameters = Vec::new();
        if let Some(params) = obj.get("parameters") {
            let map = as_object(params, &format!("{path}.parameters"))?;
            for (name, value) in map {
                let value = value
                    .as_str()
                    .map(str::to_string)
                    .or_else(|| value.as_i64().map(|n| n.to_string()))
                    .or_else(|| value.as_f64().map(|n| n.to_string()))
                    .ok_or_else(|| bad(path, "parameter values must be strings or numbers"))?;
                parameters.push((name.clone(), value));
            }
        }
        let spec = DerivationSpec {
            technique: opt_str(obj, "technique", path)?,
            intervention_type: opt_str(obj, "intervention_type", path)?,
            format_type: opt_str(obj, "format_type", path)?,
            parameters: Vec::new(),
            software: opt_str(obj, "software", path)?,
        };
        Ok((spec, parameters))
    }

    fn creation(&mut self, value: &Value, session: &str, path: &str) -> Result<()> {
        let obj = as_object(value, path)?;
        self.check_keys(
            obj,
            &[
                "label",
                "documents",
                "observations",
                "acquisitions",
                "derivations",
                "integrations",
                "publications",
            ],
            path,
        )?;
        let label = req_str(obj, "label", path)?;
        let creation = builder::record_model_creation(&mut self.graph, session, label)?;
        for document in str_list(obj, "documents", path)? {
            builder::attach_documentation(&mut self.graph, &creation, &document)?;
        }
        if let Some(value) = obj.get("observations") {
            let creation = creation.clone();
            self.observations(value, &creation, &format!("{path}.observations"))?;
        }

        for (index, entry) in as_array(
            obj.get("acquisitions").unwrap_or(&Value::Array(vec![])),
            &format!("{path}.acquisitions"),
        )?
        .iter()
        .enumerate()
        {
            let path = format!("{path}.acquisitions[{index}]");
            let step = as_object(entry, &path)?;
            self.check_keys(
                step,
                &["operator", "software", "sources", "output_label"],
                &path,
            )?;
            let operator = req_str(step, "operator", &path)?;
            let software = opt_str(step, "software", &path)?;
            let sources: Vec<String> = str_list(step, "sources", &path)?;
            let source_refs: Vec<&str> = sources.iter().map(String::as_str).collect();
            let output_label = req_str(step, "output_label", &path)?;
            let (activity, model) = builder::record_acquisition(
                &mut self.graph,
                &creation,
                operator,
                software,
                &source_refs,
                output_label,
            )?;
            builder::mark_phase(&mut self.graph, &activity, Phase::DataCollection)?;
            self.register_model(output_label, model, &path)?;
        }

        for (index, entry) in as_array(
            obj.get("derivations").unwrap_or(&Value::Array(vec![])),
            &format!("{path}.derivations"),
        )?
        .iter()
        .enumerate()
        {
            let path = format!("{path}.derivations[{index}]");
            let step = as_object(entry, &path)?;
            self.check_keys(
                step,
                &[
                    "source",
                    "output_label",
                    "technique",
                    "intervention_type",
                    "format_type",
                    "parameters",
                    "software",
                ],
                &path,
            )?;
            let source = self.model(req_str(step, "source", &path)?, &path)?;
            let output_label = req_str(step, "output_label", &path)?;
            let (mut spec, parameters) = self.derivation_spec(step, &path)?;
            spec.parameters = parameters
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str()))
                .collect();
            let (activity, model) =
                builder::record_derivation(&mut self.graph, &source, &spec, output_label)?;
            self.graph.assert(&creation, P9, &activity)?;
            builder::mark_phase(&mut self.graph, &activity, Phase::DataProcessing)?;
            self.register_model(output_label, model, &path)?;
        }

        for (index, entry) in as_array(
            obj.get("integrations").unwrap_or(&Value::Array(vec![])),
            &format!("{path}.integrations"),
        )?
        .iter()
        .enumerate()
        {
            let path = format!("{path}.integrations[{index}]");
            let step = as_object(entry, &path)?;
            self.check_keys(
                step,
                &[
                    "sources",
                    "output_label",
                    "technique",
                    "intervention_type",
                    "format_type",
                    "parameters",
                    "software",
                ],
                &path,
            )?;
            let sources: Vec<String> = str_list(step, "sources", &path)?
                .iter()
                .map(|s| self.model(s, &path))
                .collect::<Result<_>>()?;
            let source_refs: Vec<&str> = sources.iter().map(String::as_str).collect();
            let output_label = req_str(step, "output_label", &path)?;
            let (mut spec, parameters) = self.derivation_spec(step, &path)?;
            spec.parameters = parameters
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str()))
                .collect();
            let (activity, model) =
                builder::integrate(&mut self.graph, &source_refs, output_label, &spec)?;
            self.graph.assert(&creation, P9, &activity)?;
            builder::mark_phase(&mut self.graph, &activity, Phase::DataProcessing)?;
            self.register_model(output_label, model, &path)?;
        }

        for (index, entry) in as_array(
            obj.get("publications").unwrap_or(&Value::Array(vec![])),
            &format!("{path}.publications"),
        )?
        .iter()
        .enumerate()
        {
            let path = format!("{path}.publications[{index}]");
            let step = as_object(entry, &path)?;
            self.check_keys(
                step,
                &["model", "service_label", "provider", "url", "viewer"],
                &path,
            )?;
            let model = self.model(req_str(step, "model", &path)?, &path)?;
            let service_label = req_str(step, "service_label", &path)?;
            let provider = req_str(step, "provider", &path)?;
            let url = req_str(step, "url", &path)?;
            let viewer = opt_str(step, "viewer", &path)?;
            builder::publish_model(
                &mut self.graph,
                &model,
                service_label,
                provider,
                url,
                viewer,
            )?;
            builder::mark_phase(&mut self.graph, session, Phase::Publication)?;
        }
        Ok(())
    }

    fn session(&mut self, value: &Value, campaign: &str, path: &str) -> Result<()> {
        let obj = as_object(value, path)?;
        self.check_keys(
            obj,
            &["label", "begin", "end", "observations", "creations"],
            path,
        )?;
        let label = req_str(obj, "label", path)?;
        let begin = opt_str(obj, "begin", path)?;
        let end = opt_str(obj, "end", path)?;
        let session = builder::add_session(&mut self.graph, campaign, label, begin, end)?;
        if let Some(value) = obj.get("observations") {
            let session = session.clone();
            self.observations(value, &session, &format!("{path}.observations"))?;
        }
        if let Some(value) = obj.get("creations") {
            for (index, entry) in as_array(value, &format!("{path}.creations"))?
                .iter()
                .enumerate()
            {
                self.creation(entry, &session, &format!("{path}.creations[{index}]"))?;
            }
        }
        Ok(())
    }

    fn campaign(&mut self, value: &Value, project: &str, path: &str) -> Result<()> {
        let obj = as_object(value, path)?;
        self.check_keys(
            obj,
            &[
                "label",
                "purpose_type",
                "purpose_activity",
                "documents",
                "sessions",
            ],
            path,
        )?;
        let label = req_str(obj, "label", path)?;
        let campaign = builder::add_campaign(&mut self.graph, project, label)?;
        self.campaigns.insert(label.to_string(), campaign.clone());
        let purpose_type = opt_str(obj, "purpose_type", path)?;
        let purpose_activity = opt_str(obj, "purpose_activity", path)?;
        if purpose_type.is_some() || purpose_activity.is_some() {
            builder::set_purpose(&mut self.graph, &campaign, purpose_type, purpose_activity)?;
        }
        for document in str_list(obj, "documents", path)? {
            builder::attach_documentation(&mut self.graph, &campaign, &document)?;
        }
        if let Some(value) = obj.get("sessions") {
            for (index, entry) in as_array(value, &format!("{path}.sessions"))?
                .iter()
                .enumerate()
            {
                self.session(entry, &campaign, &format!("{path}.sessions[{index}]"))?;
            }
        }
        Ok(())
    }

    fn plan(&mut self, value: &Value, path: &str) -> Result<()> {
        let obj = as_object(value, path)?;
        self.check_keys(obj, &["label", "required_types", "target", "assessment"], path)?;
        let label = req_str(obj, "label", path)?;
        let required: Vec<String> = str_list(obj, "required_types", path)?;
        let required_refs: Vec<&str> = required.iter().map(String::as_str).collect();
        let target = match opt_str(obj, "target", path)? {
            None => None,
            Some(reference) => Some(
                self.campaigns
                    .get(reference)
                    .cloned()
                    .or_else(|| {
                        self.graph
                            .contains_entity(reference)
                            .then(|| reference.to_string())
                    })
                    .ok_or_else(|| bad(path, format!("unknown target `{reference}`")))?,
            ),
        };
        let plan =
            planning::create_plan(&mut self.graph, label, &required_refs, target.as_deref())?;
        if let Some(document) = opt_str(obj, "assessment", path)? {
            planning::attach_assessment(&mut self.graph, &plan, document)?;
        }
        Ok(())
    }
}

/// Build a graph from a campaign log. Strict mode turns unknown keys into
/// errors; lenient mode records them as findings and continues.
pub fn ingest_log(
    text: &str,
    schema: Arc<ProfileSchema>,
    strict: bool,
) -> Result<(KnowledgeGraph, ValidationReport)> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    let obj = as_object(&root, "$")?;

    let mut ingest = Ingest {
        graph: KnowledgeGraph::new(schema),
        findings: ValidationReport::new(),
        strict,
        models: BTreeMap::new(),
        campaigns: BTreeMap::new(),
    };
    ingest.check_keys(
        obj,
        &["version", "entities", "project", "campaigns", "plans"],
        "$",
    )?;

    let version = obj
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("$", "missing numeric `version`"))?;
    if version != LOG_VERSION {
        return Err(bad("$", format!("unsupported log version {version}")));
    }

    if let Some(value) = obj.get("entities") {
        ingest.entities(value)?;
    }

    let project_obj = as_object(
        obj.get("project").ok_or_else(|| bad("$", "missing `project`"))?,
        "project",
    )?;
    ingest.check_keys(project_obj, &["name", "team"], "project")?;
    let name = req_str(project_obj, "name", "project")?;
    let team: Vec<String> = str_list(project_obj, "team", "project")?;
    let team_refs: Vec<&str> = team.iter().map(String::as_str).collect();
    let (project, _) = builder::begin_project(&mut ingest.graph, name, &team_refs)?;

    if let Some(value) = obj.get("campaigns") {
        for (index, entry) in as_array(value, "campaigns")?.iter().enumerate() {
            ingest.campaign(entry, &project, &format!("campaigns[{index}]"))?;
        }
    }
    if let Some(value) = obj.get("plans") {
        for (index, entry) in as_array(value, "plans")?.iter().enumerate() {
            ingest.plan(entry, &format!("plans[{index}]"))?;
        }
    }

    ingest.findings.finalize();
    Ok((ingest.graph, ingest.findings))
}

/// Model iris minted for the log's output labels, for test oracles.
pub fn model_labels(graph: &KnowledgeGraph) -> BTreeMap<String, String> {
    use crate::profile::terms::MODEL_3D;
    let mut out = BTreeMap::new();
    if let Ok(models) = graph.entities_of_class(MODEL_3D, true) {
        for model in models {
            if let Some(label) = &model.label {
                out.entry(label.clone()).or_insert_with(|| model.iri.clone());
            }
        }
    }
    out
}
