//! ISO 10303-21 (STEP) subset parser and mapping of IFC building entities
//! into the graph: one digital model entity plus one represented real-world
//! entity per mapped record, linked by P138.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;
use crate::profile::terms::*;

/// One DATA-section instance line `#n=KEYWORD(args);`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub instance_id: u64,
    pub keyword: String,
    pub args: Vec<StepValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepValue {
    String(String),
    Number(f64),
    Reference(u64),
    Enumeration(String),
    Omitted,
    Derived,
    List(Vec<StepValue>),
}

/// Maps one IFC keyword to a digital model class and the class of the
/// real-world thing the model represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingRule {
    pub ifc_keyword: String,
    pub model_class: String,
    pub represented_class: String,
}

/// Site, building, wall and space; the keyword/represented-class pairing
/// follows the lexical correspondence of the names.
pub fn default_mapping() -> Vec<MappingRule> {
    let rule = |ifc_keyword: &str, model_class: &str, represented_class: &str| MappingRule {
        ifc_keyword: ifc_keyword.to_string(),
        model_class: model_class.to_string(),
        represented_class: represented_class.to_string(),
    };
    vec![
        rule("IFCSITE", SITE_MODEL, E27),
        rule("IFCBUILDING", BUILDING_MODEL, B1),
        rule("IFCWALL", BUILDING_MODEL, B2),
        rule("IFCSPACE", SPACE_MODEL, B4),
    ]
}

/// Parse a custom mapping file, one rule per line:
/// `IFCKEYWORD -> 3dx_class , represented_class`.
pub fn parse_mapping(text: &str, graph: &KnowledgeGraph) -> Result<Vec<MappingRule>> {
    let mut rules = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: index + 1,
            message,
        };
        let (keyword, rest) = line
            .split_once("->")
            .ok_or_else(|| err("expected `IFCKEYWORD -> class , class`".into()))?;
        let (model_class, represented_class) = rest
            .split_once(',')
            .ok_or_else(|| err("expected two comma-separated classes".into()))?;
        let rule = MappingRule {
            ifc_keyword: keyword.trim().to_uppercase(),
            model_class: model_class.trim().to_string(),
            represented_class: represented_class.trim().to_string(),
        };
        if rule.ifc_keyword.is_empty() {
            return Err(err("empty keyword".into()));
        }
        graph
            .schema
            .class(&rule.model_class)
            .and_then(|_| graph.schema.class(&rule.represented_class))
            .map_err(|e| err(e.to_string()))?;
        rules.push(rule);
    }
    Ok(rules)
}

/// Decode raw bytes as UTF-8, falling back to Latin-1. Returns the text
/// and the name of the encoding used.
pub fn decode_step_bytes(bytes: &[u8]) -> (String, &'static str) {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    match std::str::from_utf8(bytes) {
        Ok(s) => (s.to_string(), "UTF-8"),
        Err(_) => (bytes.iter().map(|&b| b as char).collect(), "Latin-1"),
    }
}

struct StepLexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    text: std::marker::PhantomData<&'a str>,
}

impl<'a> StepLexer<'a> {
    fn new(text: &'a str) -> Self {
        StepLexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            text: std::marker::PhantomData,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Step {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                // /* */ comments
                Some('/') if self.chars.get(self.pos + 1) == Some(&'*') => {
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            None => return,
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            _ => {}
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn expect(&mut self, wanted: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == wanted => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{wanted}', found '{c}'"))),
            None => Err(self.error(format!("expected '{wanted}', found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if out.is_empty() {
            return Err(self.error("expected an identifier"));
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out.parse()
            .map_err(|_| self.error("expected an instance number"))
    }

    fn string(&mut self) -> Result<String> {
        // opening quote already consumed by caller
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string")),
                Some('\'') => {
                    if self.peek() == Some('\'') {
                        self.bump();
                        out.push('\'');
                    } else {
                        return Ok(out);
                    }
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn value(&mut self) -> Result<StepValue> {
        self.skip_ws();
        match self.peek() {
            Some('\'') => {
                self.bump();
                Ok(StepValue::String(self.string()?))
            }
            Some('#') => {
                self.bump();
                Ok(StepValue::Reference(self.integer()?))
            }
            Some('$') => {
                self.bump();
                Ok(StepValue::Omitted)
            }
            Some('*') => {
                self.bump();
                Ok(StepValue::Derived)
            }
            Some('.') => {
                self.bump();
                let name = self.ident()?;
                self.expect('.')?;
                Ok(StepValue::Enumeration(name))
            }
            Some('(') => {
                self.bump();
                Ok(StepValue::List(self.value_list()?))
            }
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => {
                let mut raw = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() || "+-.eE".contains(c) {
                        raw.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                raw.parse()
                    .map(StepValue::Number)
                    .map_err(|_| self.error(format!("bad number '{raw}'")))
            }
            // typed value, e.g. IFCLABEL('x')
            Some(c) if c.is_ascii_alphabetic() => {
                self.ident()?;
                self.expect('(')?;
                let inner = self.value_list()?;
                Ok(StepValue::List(inner))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Values up to and including the closing ')'.
    fn value_list(&mut self) -> Result<Vec<StepValue>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(')') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.value()?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(')') => return Ok(out),
                Some(c) => return Err(self.error(format!("expected ',' or ')', found '{c}'"))),
                None => return Err(self.error("unterminated argument list")),
            }
        }
    }

    /// Skip a balanced `(...)` group without interpreting it (HEADER body).
    fn skip_group(&mut self) -> Result<()> {
        self.expect('(')?;
        let mut depth = 1usize;
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated group")),
                Some('\'') => {
                    self.string()?;
                }
                Some('(') => depth += 1,
                Some(')') => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                _ => {}
            }
        }
    }
}

/// Parse an ISO 10303-21 file into its DATA-section records. The HEADER
/// section must be present but its contents are skipped.
pub fn parse_step(text: &str) -> Result<Vec<StepRecord>> {
    let mut lex = StepLexer::new(text);
    lex.skip_ws();

    let magic = lex.ident()?;
    if magic != "ISO-10303-21" {
        return Err(lex.error("expected ISO-10303-21 header"));
    }
    lex.expect(';')?;

    let mut records = Vec::new();
    let mut seen_header = false;
    let mut seen_data = false;
    loop {
        lex.skip_ws();
        let section = lex.ident()?;
        match section.as_str() {
            "HEADER" => {
                lex.expect(';')?;
                seen_header = true;
                loop {
                    lex.skip_ws();
                    let kw = lex.ident()?;
                    if kw == "ENDSEC" {
                        lex.expect(';')?;
                        break;
                    }
                    lex.skip_group()?;
                    lex.expect(';')?;
                }
            }
            "DATA" => {
                lex.expect(';')?;
                seen_data = true;
                let mut seen_ids = BTreeSet::new();
                loop {
                    lex.skip_ws();
                    match lex.peek() {
                        Some('#') => {
                            lex.bump();
                            let instance_id = lex.integer()?;
                            if !seen_ids.insert(instance_id) {
                                return Err(lex
                                    .error(format!("duplicate instance id #{instance_id}")));
                            }
                            lex.expect('=')?;
                            let keyword = lex.ident()?.to_uppercase();
                            lex.expect('(')?;
                            let args = lex.value_list()?;
                            lex.expect(';')?;
                            records.push(StepRecord {
                                instance_id,
                                keyword,
                                args,
                            });
                        }
                        _ => {
                            let kw = lex.ident()?;
                            if kw == "ENDSEC" {
                                lex.expect(';')?;
                                break;
                            }
                            return Err(lex.error(format!("unexpected '{kw}' in DATA section")));
                        }
                    }
                }
            }
            "END-ISO-10303-21" => {
                lex.expect(';')?;
                break;
            }
            other => return Err(lex.error(format!("unexpected section '{other}'"))),
        }
    }
    if !seen_header {
        return Err(lex.error("missing HEADER section"));
    }
    if !seen_data {
        return Err(lex.error("missing DATA section"));
    }

    // post-parse: every #ref must resolve within the file
    let ids: BTreeSet<u64> = records.iter().map(|r| r.instance_id).collect();
    fn check_refs(value: &StepValue, ids: &BTreeSet<u64>, record: u64) -> Result<()> {
        match value {
            StepValue::Reference(target) if !ids.contains(target) => {
                Err(Error::DanglingReference {
                    context: format!("step record #{record}"),
                    reference: format!("#{target}"),
                })
            }
            StepValue::List(items) => {
                items.iter().try_for_each(|v| check_refs(v, ids, record))
            }
            _ => Ok(()),
        }
    }
    for record in &records {
        for arg in &record.args {
            check_refs(arg, &ids, record.instance_id)?;
        }
    }
    Ok(records)
}

fn render_value(value: &StepValue, out: &mut String) {
    match value {
        StepValue::String(s) => {
            let _ = write!(out, "'{}'", s.replace('\'', "''"));
        }
        StepValue::Number(n) => {
            let _ = write!(out, "{n}");
        }
        StepValue::Reference(id) => {
            let _ = write!(out, "#{id}");
        }
        StepValue::Enumeration(name) => {
            let _ = write!(out, ".{name}.");
        }
        StepValue::Omitted => out.push('$'),
        StepValue::Derived => out.push('*'),
        StepValue::List(items) => {
            out.push('(');
            for (index, item) in items.iter().enumerate() {
                if index > 0 {
                    out.push(',');
                }
                render_value(item, out);
            }
            out.push(')');
        }
    }
}

/// Render records back into a parseable file; used for round-trip checks.
pub fn render_step(records: &[StepRecord]) -> String {
    let mut out = String::from("ISO-10303-21;\nHEADER;\nENDSEC;\nDATA;\n");
    for record in records {
        let _ = write!(out, "#{}={}(", record.instance_id, record.keyword);
        for (index, arg) in record.args.iter().enumerate() {
            if index > 0 {
                out.push(',');
            }
            render_value(arg, &mut out);
        }
        out.push_str(");\n");
    }
    out.push_str("ENDSEC;\nEND-ISO-10303-21;\n");
    out
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ImportSummary {
    /// Mapped-record count per IFC keyword.
    pub mapped: BTreeMap<String, usize>,
    /// Unmapped-record count per IFC keyword.
    pub skipped: BTreeMap<String, usize>,
    pub encoding: Option<String>,
}

impl ImportSummary {
    pub fn mapped_total(&self) -> usize {
        self.mapped.values().sum()
    }

    pub fn skipped_total(&self) -> usize {
        self.skipped.values().sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (keyword, count) in &self.mapped {
            let _ = writeln!(out, "mapped {keyword}: {count}");
        }
        for (keyword, count) in &self.skipped {
            let _ = writeln!(out, "skipped {keyword}: {count}");
        }
        let _ = writeln!(
            out,
            "total: {} mapped, {} skipped",
            self.mapped_total(),
            self.skipped_total()
        );
        if let Some(encoding) = &self.encoding {
            let _ = writeln!(out, "encoding: {encoding}");
        }
        out
    }
}

/// First string argument after the GlobalId slot, used as entity name.
fn record_name(record: &StepRecord) -> Option<&str> {
    record
        .args
        .iter()
        .skip(1)
        .find_map(|arg| match arg {
            StepValue::String(s) if !s.is_empty() => Some(s.as_str()),
            _ => None,
        })
}

/// Map parsed records into the graph. For each mapped record, mints a
/// digital model entity keyed by instance id and a represented real-world
/// entity (reused across imports when an entity of the same class carries
/// the exact same label), linked via P138. When `creation` names a model
/// creation activity, a synthetic import activity under it gets L11 links
/// to all imported digital entities.
pub fn map_to_crm(
    records: &[StepRecord],
    graph: &mut KnowledgeGraph,
    mapping: &[MappingRule],
    creation: Option<&str>,
) -> Result<ImportSummary> {
    let rules: BTreeMap<&str, &MappingRule> = mapping
        .iter()
        .map(|r| (r.ifc_keyword.as_str(), r))
        .collect();
    for rule in mapping {
        graph.schema.class(&rule.model_class)?;
        graph.schema.class(&rule.represented_class)?;
    }
    if let Some(creation) = creation {
        graph.expect_instance_of(creation, MODEL_CREATION)?;
    }

    let mut summary = ImportSummary::default();
    let mut imported: Vec<String> = Vec::new();
    for record in records {
        let Some(rule) = rules.get(record.keyword.as_str()) else {
            *summary.skipped.entry(record.keyword.clone()).or_insert(0) += 1;
            continue;
        };
        let name = record_name(record);

        let digital = graph
            .create_entity_auto(&rule.model_class, name)?
            .iri;

        // reuse a represented entity of the right class with the same label
        let existing = name.and_then(|label| {
            graph
                .entities_of_class(&rule.represented_class, false)
                .ok()?
                .into_iter()
                .find(|e| e.label.as_deref() == Some(label))
                .map(|e| e.iri.clone())
        });
        let real = match existing {
            Some(iri) => iri,
            None => graph.create_entity_auto(&rule.represented_class, name)?.iri,
        };

        graph.assert(&digital, P138, &real)?;
        imported.push(digital);
        *summary.mapped.entry(record.keyword.clone()).or_insert(0) += 1;
    }

    if let Some(creation) = creation {
        if !imported.is_empty() {
            let import = graph.create_entity_auto(E7, Some("IFC import"))?.iri;
            graph.assert(creation, P9, &import)?;
            for digital in &imported {
                graph.assert(&import, L11, digital)?;
            }
        }
    }
    Ok(summary)
}
