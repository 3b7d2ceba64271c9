//! Application-profile schema: a curated snapshot of the CIDOC CRM family
//! (CRM, CRMsci, CRMdig, CRMpe, CRMba, CRMsoc) plus the 3D profile terms,
//! with reflexive-transitive closure queries over it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::report::{Finding, Severity, ValidationReport};

/// Ontology a term was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceModel {
    Crm,
    CrmSci,
    CrmDig,
    CrmPe,
    CrmBa,
    CrmSoc,
    Crm3d,
}

impl fmt::Display for SourceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SourceModel::Crm => "CRM",
            SourceModel::CrmSci => "CRMsci",
            SourceModel::CrmDig => "CRMdig",
            SourceModel::CrmPe => "CRMpe",
            SourceModel::CrmBa => "CRMba",
            SourceModel::CrmSoc => "CRMsoc",
            SourceModel::Crm3d => "CRM3D",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct ClassDef {
    pub id: String,
    pub label: String,
    pub superclasses: Vec<String>,
    pub source_model: SourceModel,
}

/// Range of a property: a class, or a literal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Range {
    Class(String),
    Literal,
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Class(id) => f.write_str(id),
            Range::Literal => f.write_str("literal"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropertyDef {
    pub id: String,
    pub label: String,
    pub superproperties: Vec<String>,
    pub domain: String,
    pub range: Range,
    pub source_model: SourceModel,
}

/// Well-known term ids, so callers do not spell curies by hand.
pub mod terms {
    pub const E1: &str = "crm:E1";
    pub const E5: &str = "crm:E5";
    pub const E7: &str = "crm:E7";
    pub const E21: &str = "crm:E21";
    pub const E27: &str = "crm:E27";
    pub const E29: &str = "crm:E29";
    pub const E31: &str = "crm:E31";
    pub const E39: &str = "crm:E39";
    pub const E55: &str = "crm:E55";
    pub const E73: &str = "crm:E73";
    pub const E74: &str = "crm:E74";
    pub const S4: &str = "crmsci:S4";
    pub const S15: &str = "crmsci:S15";
    pub const D1: &str = "crmdig:D1";
    pub const D2: &str = "crmdig:D2";
    pub const D3: &str = "crmdig:D3";
    pub const D10: &str = "crmdig:D10";
    pub const D14: &str = "crmdig:D14";
    pub const PE2: &str = "crmpe:PE2";
    pub const PE25: &str = "crmpe:PE25";
    pub const PE29: &str = "crmpe:PE29";
    pub const PE34: &str = "crmpe:PE34";
    pub const PE35: &str = "crmpe:PE35";
    pub const B1: &str = "crmba:B1";
    pub const B2: &str = "crmba:B2";
    pub const B4: &str = "crmba:B4";
    pub const ACTIVITY_PLAN: &str = "crmsoc:ActivityPlan";
    pub const MODEL_CREATION: &str = "crm3d:3DE1";
    pub const CAMPAIGN: &str = "crm3d:3DE2";
    pub const SESSION: &str = "crm3d:3DE3";
    pub const MODEL_3D: &str = "crm3d:3DE4";
    pub const SITE_MODEL: &str = "crm3d:3DX1";
    pub const SPACE_MODEL: &str = "crm3d:3DX2";
    pub const BUILDING_MODEL: &str = "crm3d:3DX3";

    pub const P2: &str = "crm:P2";
    pub const P9: &str = "crm:P9";
    pub const P10: &str = "crm:P10";
    pub const P11: &str = "crm:P11";
    pub const P14: &str = "crm:P14";
    pub const P16: &str = "crm:P16";
    pub const P20: &str = "crm:P20";
    pub const P21: &str = "crm:P21";
    pub const P33: &str = "crm:P33";
    pub const P67: &str = "crm:P67";
    pub const P70: &str = "crm:P70";
    pub const P138: &str = "crm:P138";
    pub const O8: &str = "crmsci:O8";
    pub const L2: &str = "crmdig:L2";
    pub const L11: &str = "crmdig:L11";
    pub const L13: &str = "crmdig:L13";
    pub const L21: &str = "crmdig:L21";
    pub const L22: &str = "crmdig:L22";
    pub const L23: &str = "crmdig:L23";
    pub const L30: &str = "crmdig:L30";
    pub const PP2: &str = "crmpe:PP2";
    pub const PP4: &str = "crmpe:PP4";
    pub const PP43: &str = "crmpe:PP43";
    pub const PP49: &str = "crmpe:PP49";
    pub const PP50: &str = "crmpe:PP50";
    pub const MADE_DURING: &str = "crm3d:3DP1";
    pub const HAS_SESSION: &str = "crm3d:3DP2";
    pub const MANAGED_BY: &str = "crm3d:3DP3";
    pub const PLANNED_FOR: &str = "crmsoc:planned_for";
    pub const REQUIRES_EVENT_OF_TYPE: &str = "crmsoc:requires_event_of_type";
    pub const IS_ASSESSED_BY: &str = "crmsoc:is_assessed_by";
    pub const LABEL: &str = "crm3d:label";
    pub const NOTE: &str = "crm3d:note";
    pub const TIMESTAMP_BEGIN: &str = "crm3d:timestamp_begin";
    pub const TIMESTAMP_END: &str = "crm3d:timestamp_end";

    /// Reserved workflow-phase concept iris (E55 instances, not classes).
    pub const PHASE_PREPARATION: &str = "crm3d:phase/preparation";
    pub const PHASE_COLLECTION: &str = "crm3d:phase/collection";
    pub const PHASE_PROCESSING: &str = "crm3d:phase/processing";
    pub const PHASE_PUBLICATION: &str = "crm3d:phase/publication";
}

/// The class/property lattice plus the prefix table.
#[derive(Debug, Clone, Default)]
pub struct ProfileSchema {
    pub classes: BTreeMap<String, ClassDef>,
    pub properties: BTreeMap<String, PropertyDef>,
    pub prefixes: BTreeMap<String, String>,
}

use SourceModel::*;

type ClassRow = (&'static str, &'static str, &'static [&'static str], SourceModel);
type PropRow = (
    &'static str,
    &'static str,
    &'static [&'static str],
    &'static str,
    Option<&'static str>,
    SourceModel,
);

#[rustfmt::skip]
const BUILTIN_CLASSES: &[ClassRow] = &[
    ("crm:E1", "Entity", &[], Crm),
    ("crm:E5", "Event", &["crm:E1"], Crm),
    ("crm:E7", "Activity", &["crm:E5"], Crm),
    ("crm:E39", "Actor", &["crm:E1"], Crm),
    ("crm:E21", "Person", &["crm:E39"], Crm),
    ("crm:E27", "Site", &["crm:E1"], Crm),
    ("crm:E73", "Information Object", &["crm:E1"], Crm),
    ("crm:E29", "Design or Procedure", &["crm:E73"], Crm),
    ("crm:E31", "Document", &["crm:E73"], Crm),
    ("crm:E55", "Type", &["crm:E1"], Crm),
    ("crm:E74", "Group", &["crm:E39"], Crm),
    ("crmsci:S4", "Observation", &["crm:E7"], CrmSci),
    ("crmsci:S15", "Observable Entity", &["crm:E1"], CrmSci),
    ("crmdig:D1", "Digital Object", &["crm:E73"], CrmDig),
    ("crmdig:D2", "Digitization Process", &["crm:E7"], CrmDig),
    ("crmdig:D10", "Software Execution", &["crm:E7"], CrmDig),
    ("crmdig:D3", "Formal Derivation", &["crmdig:D10"], CrmDig),
    ("crmdig:D14", "Software", &["crmdig:D1"], CrmDig),
    ("crmpe:PE2", "Hosting Service", &["crm:E7"], CrmPe),
    ("crmpe:PE25", "RI Consortium", &["crm:E74"], CrmPe),
    ("crmpe:PE29", "Access Point", &["crm:E1"], CrmPe),
    ("crmpe:PE34", "Team", &["crm:E74"], CrmPe),
    ("crmpe:PE35", "Project", &["crm:E7"], CrmPe),
    ("crmba:B1", "Built Work", &["crm:E1"], CrmBa),
    ("crmba:B2", "Morphological Building Section", &["crmba:B1"], CrmBa),
    ("crmba:B4", "Empty Morphological Building Section", &["crmba:B2"], CrmBa),
    ("crmsoc:ActivityPlan", "Activity Plan", &["crm:E29"], CrmSoc),
    ("crm3d:3DE1", "Digital Model Creation", &["crm:E7"], Crm3d),
    ("crm3d:3DE2", "Digitisation Campaign", &["crm:E7"], Crm3d),
    ("crm3d:3DE3", "Digitisation Session", &["crm:E7"], Crm3d),
    ("crm3d:3DE4", "3D Model", &["crmdig:D1"], Crm3d),
    ("crm3d:3DX1", "Site Model", &["crm3d:3DE4"], Crm3d),
    ("crm3d:3DX2", "Space Model", &["crm3d:3DE4"], Crm3d),
    ("crm3d:3DX3", "Building Model", &["crm3d:3DE4"], Crm3d),
];

// Domains and ranges are the most specific classes present in the snapshot;
// intermediate superclasses of the source ontologies are collapsed away.
// `None` range marks an annotation property with a literal value.
#[rustfmt::skip]
const BUILTIN_PROPERTIES: &[PropRow] = &[
    ("crm:P2", "has type", &[], "crm:E1", Some("crm:E55"), Crm),
    ("crm:P9", "consists of", &[], "crm:E5", Some("crm:E5"), Crm),
    ("crm:P10", "falls within", &[], "crm:E5", Some("crm:E5"), Crm),
    ("crm:P11", "had participant", &[], "crm:E5", Some("crm:E39"), Crm),
    ("crm:P14", "carried out by", &[], "crm:E7", Some("crm:E39"), Crm),
    ("crm:P16", "used specific object", &[], "crm:E7", Some("crm:E1"), Crm),
    ("crm:P20", "has specific purpose", &[], "crm:E7", Some("crm:E5"), Crm),
    ("crm:P21", "had general purpose", &[], "crm:E7", Some("crm:E55"), Crm),
    ("crm:P33", "used specific technique", &[], "crm:E7", Some("crm:E29"), Crm),
    ("crm:P67", "refers to", &[], "crm:E73", Some("crm:E1"), Crm),
    ("crm:P70", "is documented in", &[], "crm:E1", Some("crm:E31"), Crm),
    ("crm:P138", "represents", &[], "crm:E73", Some("crm:E1"), Crm),
    ("crmsci:O8", "observed", &[], "crmsci:S4", Some("crm:E1"), CrmSci),
    ("crmdig:L2", "used as source", &[], "crmdig:D10", Some("crmdig:D1"), CrmDig),
    ("crmdig:L11", "had output", &[], "crm:E7", Some("crmdig:D1"), CrmDig),
    ("crmdig:L13", "used parameters", &[], "crm:E7", None, CrmDig),
    ("crmdig:L21", "used as derivation source", &[], "crmdig:D3", Some("crmdig:D1"), CrmDig),
    ("crmdig:L22", "created derivative", &[], "crmdig:D3", Some("crmdig:D1"), CrmDig),
    ("crmdig:L23", "used software", &[], "crm:E7", Some("crmdig:D14"), CrmDig),
    ("crmdig:L30", "has operator", &[], "crm:E7", Some("crm:E21"), CrmDig),
    ("crmpe:PP2", "provided by", &[], "crmpe:PE2", Some("crm:E39"), CrmPe),
    ("crmpe:PP4", "is hosted by", &[], "crmdig:D1", Some("crmpe:PE2"), CrmPe),
    ("crmpe:PP43", "supports activity", &[], "crmpe:PE35", Some("crm:E7"), CrmPe),
    ("crmpe:PP49", "provided access point", &[], "crmpe:PE2", Some("crmpe:PE29"), CrmPe),
    ("crmpe:PP50", "accessible at", &[], "crmpe:PE29", Some("crmdig:D1"), CrmPe),
    ("crm3d:3DP1", "was made during", &["crm:P10"], "crm3d:3DE1", Some("crm3d:3DE3"), Crm3d),
    ("crm3d:3DP2", "has session", &["crm:P9"], "crm3d:3DE2", Some("crm3d:3DE3"), Crm3d),
    ("crm3d:3DP3", "is managed by", &["crmpe:PP4"], "crm3d:3DE4", Some("crmpe:PE2"), Crm3d),
    ("crmsoc:planned_for", "planned for", &[], "crmsoc:ActivityPlan", Some("crm:E5"), CrmSoc),
    ("crmsoc:requires_event_of_type", "requires event of type", &[], "crmsoc:ActivityPlan", Some("crm:E55"), CrmSoc),
    ("crmsoc:is_assessed_by", "is assessed by", &[], "crmsoc:ActivityPlan", Some("crm:E31"), CrmSoc),
    ("crm3d:label", "label", &[], "crm:E1", None, Crm3d),
    ("crm3d:note", "note", &[], "crm:E1", None, Crm3d),
    ("crm3d:timestamp_begin", "timestamp begin", &[], "crm:E5", None, Crm3d),
    ("crm3d:timestamp_end", "timestamp end", &[], "crm:E5", None, Crm3d),
];

// The profile publishes no namespace for crm3d; placeholder base, overridable
// by rebuilding the prefix entry.
const BUILTIN_PREFIXES: &[(&str, &str)] = &[
    ("crm", "http://www.cidoc-crm.org/cidoc-crm/"),
    ("crmdig", "http://www.cidoc-crm.org/crmdig/"),
    ("crmsci", "http://www.cidoc-crm.org/crmsci/"),
    ("crmpe", "http://parthenos.d4science.org/CRMext/CRMpe/"),
    ("crmba", "http://www.cidoc-crm.org/crmba/"),
    ("crmsoc", "http://www.cidoc-crm.org/crmsoc/"),
    ("crm3d", "http://www.example.org/crm3d/"),
];

/// Build the bundled profile snapshot.
pub fn load_builtin_profile() -> ProfileSchema {
    let mut schema = ProfileSchema::default();
    for (prefix, base) in BUILTIN_PREFIXES {
        schema.prefixes.insert(prefix.to_string(), base.to_string());
    }
    for (id, label, supers, model) in BUILTIN_CLASSES {
        schema
            .register_class(ClassDef {
                id: id.to_string(),
                label: label.to_string(),
                superclasses: supers.iter().map(|s| s.to_string()).collect(),
                source_model: *model,
            })
            .expect("builtin class table is consistent");
    }
    for (id, label, supers, domain, range, model) in BUILTIN_PROPERTIES {
        schema
            .register_property(PropertyDef {
                id: id.to_string(),
                label: label.to_string(),
                superproperties: supers.iter().map(|s| s.to_string()).collect(),
                domain: domain.to_string(),
                range: match range {
                    Some(r) => Range::Class(r.to_string()),
                    None => Range::Literal,
                },
                source_model: *model,
            })
            .expect("builtin property table is consistent");
    }
    schema
}

impl ProfileSchema {
    pub fn class(&self, id: &str) -> Result<&ClassDef> {
        self.classes
            .get(id)
            .ok_or_else(|| Error::UnknownClass(id.to_string()))
    }

    pub fn property(&self, id: &str) -> Result<&PropertyDef> {
        self.properties
            .get(id)
            .ok_or_else(|| Error::UnknownProperty(id.to_string()))
    }

    /// True iff `a` = `b` or `b` is reachable from `a` via superclass links.
    pub fn is_subclass_of(&self, a: &str, b: &str) -> Result<bool> {
        self.class(a)?;
        self.class(b)?;
        Ok(self.reaches(a, b, |id| {
            self.classes.get(id).map(|c| c.superclasses.as_slice())
        }))
    }

    /// Reflexive-transitive reachability over superproperty links.
    pub fn is_subproperty_of(&self, p: &str, q: &str) -> Result<bool> {
        self.property(p)?;
        self.property(q)?;
        Ok(self.reaches(p, q, |id| {
            self.properties.get(id).map(|p| p.superproperties.as_slice())
        }))
    }

    fn reaches<'a, F>(&'a self, from: &str, to: &str, parents: F) -> bool
    where
        F: Fn(&str) -> Option<&'a [String]>,
    {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(from.to_string());
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                return true;
            }
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(ps) = parents(&cur) {
                for p in ps {
                    queue.push_back(p.clone());
                }
            }
        }
        false
    }

    /// Declared (domain, range) pair of a property.
    pub fn property_signature(&self, p: &str) -> Result<(String, Range)> {
        let def = self.property(p)?;
        Ok((def.domain.clone(), def.range.clone()))
    }

    /// All registered subproperties of `q`, including `q` itself.
    pub fn subproperties_of(&self, q: &str) -> Result<Vec<String>> {
        self.property(q)?;
        let mut out = Vec::new();
        for id in self.properties.keys() {
            if self.is_subproperty_of(id, q)? {
                out.push(id.clone());
            }
        }
        Ok(out)
    }

    pub fn register_class(&mut self, def: ClassDef) -> Result<()> {
        if self.classes.contains_key(&def.id) {
            return Err(Error::DuplicateId(def.id));
        }
        self.check_prefix(&def.id)?;
        for sup in &def.superclasses {
            if !self.classes.contains_key(sup) {
                return Err(Error::DanglingReference {
                    context: def.id.clone(),
                    reference: sup.clone(),
                });
            }
        }
        self.classes.insert(def.id.clone(), def);
        Ok(())
    }

    pub fn register_property(&mut self, def: PropertyDef) -> Result<()> {
        if self.properties.contains_key(&def.id) {
            return Err(Error::DuplicateId(def.id));
        }
        self.check_prefix(&def.id)?;
        for sup in &def.superproperties {
            if !self.properties.contains_key(sup) {
                return Err(Error::DanglingReference {
                    context: def.id.clone(),
                    reference: sup.clone(),
                });
            }
        }
        if !self.classes.contains_key(&def.domain) {
            return Err(Error::DanglingReference {
                context: def.id.clone(),
                reference: def.domain.clone(),
            });
        }
        if let Range::Class(r) = &def.range {
            if !self.classes.contains_key(r) {
                return Err(Error::DanglingReference {
                    context: def.id.clone(),
                    reference: r.clone(),
                });
            }
        }
        self.properties.insert(def.id.clone(), def);
        Ok(())
    }

    fn check_prefix(&self, id: &str) -> Result<()> {
        let prefix = id.split(':').next().unwrap_or("");
        if self.prefixes.contains_key(prefix) {
            Ok(())
        } else {
            Err(Error::UnknownPrefix(id.to_string()))
        }
    }

    /// Check internal consistency: cycles, dangling references, and
    /// subproperty signature narrowing. Findings are data, not errors.
    pub fn validate_schema(&self) -> ValidationReport {
        let mut report = ValidationReport::new();

        // Dangling references, tolerated here because tests may inject them.
        for (id, def) in &self.classes {
            for sup in &def.superclasses {
                if !self.classes.contains_key(sup) {
                    report.push(Finding::new(
                        Severity::Error,
                        "S1",
                        id.clone(),
                        format!("superclass {sup} is not registered"),
                    ));
                }
            }
        }
        for (id, def) in &self.properties {
            for sup in &def.superproperties {
                if !self.properties.contains_key(sup) {
                    report.push(Finding::new(
                        Severity::Error,
                        "S1",
                        id.clone(),
                        format!("superproperty {sup} is not registered"),
                    ));
                }
            }
            if !self.classes.contains_key(&def.domain) {
                report.push(Finding::new(
                    Severity::Error,
                    "S1",
                    id.clone(),
                    format!("domain {} is not registered", def.domain),
                ));
            }
            if let Range::Class(r) = &def.range {
                if !self.classes.contains_key(r) {
                    report.push(Finding::new(
                        Severity::Error,
                        "S1",
                        id.clone(),
                        format!("range {r} is not registered"),
                    ));
                }
            }
        }

        self.report_cycles(
            &mut report,
            "S2",
            "class hierarchy cycle",
            self.classes
                .iter()
                .map(|(id, def)| (id.clone(), def.superclasses.clone()))
                .collect(),
        );
        self.report_cycles(
            &mut report,
            "S2",
            "property hierarchy cycle",
            self.properties
                .iter()
                .map(|(id, def)| (id.clone(), def.superproperties.clone()))
                .collect(),
        );

        // A subproperty must narrow its superproperty's signature.
        for (id, def) in &self.properties {
            for sup in &def.superproperties {
                let Some(sup_def) = self.properties.get(sup) else {
                    continue;
                };
                if !self.subsumes(&def.domain, &sup_def.domain) {
                    report.push(Finding::new(
                        Severity::Error,
                        "S3",
                        id.clone(),
                        format!(
                            "domain {} is not a subclass of {} (domain of {})",
                            def.domain, sup_def.domain, sup
                        ),
                    ));
                }
                let narrowed = match (&def.range, &sup_def.range) {
                    (Range::Literal, Range::Literal) => true,
                    (Range::Class(r), Range::Class(sr)) => self.subsumes(r, sr),
                    _ => false,
                };
                if !narrowed {
                    report.push(Finding::new(
                        Severity::Error,
                        "S3",
                        id.clone(),
                        format!(
                            "range {} is not within {} (range of {})",
                            def.range, sup_def.range, sup
                        ),
                    ));
                }
            }
        }

        report.finalize();
        report
    }

    // Subclass check that shrugs off unknown ids (used while validating a
    // possibly broken schema).
    fn subsumes(&self, a: &str, b: &str) -> bool {
        self.reaches(a, b, |id| {
            self.classes.get(id).map(|c| c.superclasses.as_slice())
        })
    }

    fn report_cycles(
        &self,
        report: &mut ValidationReport,
        rule: &str,
        what: &str,
        edges: BTreeMap<String, Vec<String>>,
    ) {
        // A node is cyclic iff it reaches itself through at least one edge.
        let mut cyclic: BTreeSet<String> = BTreeSet::new();
        for (id, parents) in &edges {
            let start: Vec<String> = parents.clone();
            let mut seen = BTreeSet::new();
            let mut queue: VecDeque<String> = start.into();
            let mut hit = false;
            while let Some(cur) = queue.pop_front() {
                if &cur == id {
                    hit = true;
                    break;
                }
                if !seen.insert(cur.clone()) {
                    continue;
                }
                if let Some(ps) = edges.get(&cur) {
                    queue.extend(ps.iter().cloned());
                }
            }
            if hit {
                cyclic.insert(id.clone());
            }
        }
        // One finding per strongly connected component; subject is the
        // smallest member id.
        let mut assigned: BTreeSet<String> = BTreeSet::new();
        for id in &cyclic {
            if assigned.contains(id) {
                continue;
            }
            let mut component: Vec<String> = cyclic
                .iter()
                .filter(|other| {
                    self.mutually_reach(id, other, &edges) && self.mutually_reach(other, id, &edges)
                })
                .cloned()
                .collect();
            component.sort();
            for m in &component {
                assigned.insert(m.clone());
            }
            report.push(Finding::new(
                Severity::Error,
                rule,
                component.first().cloned().unwrap_or_else(|| id.clone()),
                format!("{what} through {}", component.join(" -> ")),
            ));
        }
    }

    fn mutually_reach(&self, from: &str, to: &str, edges: &BTreeMap<String, Vec<String>>) -> bool {
        if from == to {
            return true;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(from.to_string());
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                return true;
            }
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(ps) = edges.get(&cur) {
                queue.extend(ps.iter().cloned());
            }
        }
        false
    }

    /// Deterministic text listing of the full schema, one term per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, def) in &self.classes {
            out.push_str(&format!("class {} sub {}\n", id, def.superclasses.join(" ")));
        }
        for (id, def) in &self.properties {
            out.push_str(&format!(
                "prop {} sub {} dom {} rng {}\n",
                id,
                def.superproperties.join(" "),
                def.domain,
                def.range
            ));
        }
        out
    }

    /// Expand a curie (or pass through an absolute IRI).
    pub fn expand(&self, id: &str) -> Result<String> {
        crate::graph::expand_with(&self.prefixes, id)
    }
}
