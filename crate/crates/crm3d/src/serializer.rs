//! Deterministic serialization of a knowledge graph to N-Triples and
//! Turtle, and parsing of N-Triples back. N-Triples is the canonical
//! interchange form; Turtle is write-only sugar over the same triple set.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{
    contract_with, is_absolute_iri, KnowledgeGraph, Literal, LiteralKind, Mode, Object, RDFS_LABEL,
    RDF_TYPE,
};
use crate::profile::{ProfileSchema, Range};
use crate::report::{Finding, Severity, ValidationReport};

/// A fully expanded triple; the object keeps literal kind information.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Literal(Literal),
}

pub type Triple = (String, String, Term);

/// Expand the graph into its full triple set: one rdf:type triple per
/// entity, one rdfs:label triple per labeled entity, plus all statements.
pub fn triples_of(graph: &KnowledgeGraph) -> Result<Vec<Triple>> {
    let mut triples = BTreeSet::new();
    for entity in graph.entities() {
        let subject = graph.expand(&entity.iri)?;
        let class_iri = graph.expand(&entity.class_id)?;
        triples.insert((subject.clone(), RDF_TYPE.to_string(), Term::Iri(class_iri)));
        if let Some(label) = &entity.label {
            triples.insert((
                subject,
                RDFS_LABEL.to_string(),
                Term::Literal(Literal::text(label.clone())),
            ));
        }
    }
    for st in graph.statements() {
        let subject = graph.expand(&st.subject)?;
        let predicate = graph.expand(&st.property)?;
        let object = match &st.object {
            Object::Entity(iri) => Term::Iri(graph.expand(iri)?),
            Object::Literal(l) => Term::Literal(l.clone()),
        };
        triples.insert((subject, predicate, object));
    }
    Ok(triples.into_iter().collect())
}

fn escape_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn render_term(term: &Term) -> String {
    match term {
        Term::Iri(iri) => format!("<{iri}>"),
        Term::Literal(l) => match l.kind.datatype() {
            None => format!("\"{}\"", escape_literal(&l.value)),
            Some(dt) => format!("\"{}\"^^<{}>", escape_literal(&l.value), dt),
        },
    }
}

/// Canonical N-Triples: one triple per line, sorted by (subject,
/// predicate, object) codepoint order. An empty graph yields empty text.
pub fn to_ntriples(graph: &KnowledgeGraph) -> Result<String> {
    let triples = triples_of(graph)?;
    let mut out = String::new();
    for (s, p, o) in triples {
        out.push_str(&format!("<{s}> <{p}> {} .\n", render_term(&o)));
    }
    Ok(out)
}

fn prefixed(prefixes: &BTreeMap<String, String>, iri: &str) -> Option<String> {
    let contracted = contract_with(prefixes, iri);
    if contracted == iri {
        return None;
    }
    let (_, local) = contracted.split_once(':')?;
    // only emit a pname when the local part is safe under the Turtle grammar
    if !local.is_empty()
        && local
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
        && !local.starts_with('.')
        && !local.ends_with('.')
    {
        Some(contracted)
    } else {
        None
    }
}

/// Turtle rendering of the same triple set: prefixed names where possible,
/// subjects sorted, rdf:type first as `a`.
pub fn to_turtle(graph: &KnowledgeGraph) -> Result<String> {
    let triples = triples_of(graph)?;
    if triples.is_empty() {
        return Ok(String::new());
    }
    let prefixes = graph.prefixes();

    let mut by_subject: BTreeMap<&str, BTreeMap<&str, BTreeSet<&Term>>> = BTreeMap::new();
    for (s, p, o) in &triples {
        by_subject
            .entry(s.as_str())
            .or_default()
            .entry(p.as_str())
            .or_default()
            .insert(o);
    }

    // only declare prefixes that the document actually uses
    let mut used: BTreeSet<&str> = BTreeSet::new();
    let mut note_use = |iri: &str| {
        if let Some(pname) = prefixed(prefixes, iri) {
            let prefix = pname.split(':').next().unwrap_or("").to_string();
            if let Some((key, _)) = prefixes.get_key_value(&prefix) {
                used.insert(key.as_str());
            }
        }
    };
    for (s, p, o) in &triples {
        note_use(s);
        if p != RDF_TYPE {
            note_use(p);
        }
        match o {
            Term::Iri(iri) => note_use(iri),
            Term::Literal(l) => {
                if let Some(dt) = l.kind.datatype() {
                    note_use(&dt);
                }
            }
        }
    }

    let render = |iri: &str| match prefixed(prefixes, iri) {
        Some(pname) => pname,
        None => format!("<{iri}>"),
    };
    let render_object = |term: &Term| match term {
        Term::Iri(iri) => render(iri),
        Term::Literal(l) => match l.kind.datatype() {
            None => format!("\"{}\"", escape_literal(&l.value)),
            Some(dt) => format!("\"{}\"^^{}", escape_literal(&l.value), render(&dt)),
        },
    };

    let mut out = String::new();
    for prefix in &used {
        out.push_str(&format!("@prefix {}: <{}> .\n", prefix, prefixes[*prefix]));
    }
    if !used.is_empty() {
        out.push('\n');
    }
    for (subject, predicates) in by_subject {
        out.push_str(&render(subject));
        let mut parts: Vec<String> = Vec::new();
        // rdf:type first, as `a`
        if let Some(objects) = predicates.get(RDF_TYPE) {
            let objs: Vec<String> = objects.iter().map(|o| render_object(o)).collect();
            parts.push(format!("a {}", objs.join(", ")));
        }
        for (predicate, objects) in &predicates {
            if *predicate == RDF_TYPE {
                continue;
            }
            let objs: Vec<String> = objects.iter().map(|o| render_object(o)).collect();
            parts.push(format!("{} {}", render(predicate), objs.join(", ")));
        }
        out.push_str(&format!(" {} .\n", parts.join(" ;\n    ")));
    }
    Ok(out)
}

struct NtLine<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> NtLine<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn parse_iri(&mut self) -> Result<String> {
        if self.bump() != Some('<') {
            return Err(self.error("expected '<'"));
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == '>' {
                let iri = self.text[start..self.pos].to_string();
                self.bump();
                if !is_absolute_iri(&iri) {
                    return Err(self.error(format!("not an absolute IRI: {iri}")));
                }
                return Ok(iri);
            }
            self.bump();
        }
        Err(self.error("unterminated IRI"))
    }

    fn parse_literal(&mut self) -> Result<Literal> {
        if self.bump() != Some('"') {
            return Err(self.error("expected '\"'"));
        }
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated literal")),
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('\\') => value.push('\\'),
                    Some('"') => value.push('"'),
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    Some('u') => value.push(self.parse_unicode_escape(4)?),
                    Some('U') => value.push(self.parse_unicode_escape(8)?),
                    _ => return Err(self.error("bad escape sequence")),
                },
                Some(c) => value.push(c),
            }
        }
        let kind = if self.peek() == Some('^') {
            self.bump();
            if self.bump() != Some('^') {
                return Err(self.error("expected '^^'"));
            }
            let dt = self.parse_iri()?;
            LiteralKind::from_datatype(&dt)
                .ok_or_else(|| self.error(format!("unsupported datatype {dt}")))?
        } else {
            LiteralKind::Text
        };
        Literal::new(value, kind).map_err(|e| self.error(e.to_string()))
    }

    fn parse_unicode_escape(&mut self, digits: usize) -> Result<char> {
        let mut code = 0u32;
        for _ in 0..digits {
            let c = self.bump().ok_or_else(|| self.error("bad \\u escape"))?;
            code = code * 16 + c.to_digit(16).ok_or_else(|| self.error("bad \\u escape"))?;
        }
        char::from_u32(code).ok_or_else(|| self.error("bad \\u escape"))
    }
}

fn parse_ntriples_line(line: &str, line_no: usize) -> Result<Option<(String, String, Term)>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut cursor = NtLine {
        text: trimmed,
        pos: 0,
        line: line_no,
    };
    let subject = cursor.parse_iri()?;
    cursor.skip_ws();
    let predicate = cursor.parse_iri()?;
    cursor.skip_ws();
    let object = match cursor.peek() {
        Some('<') => Term::Iri(cursor.parse_iri()?),
        Some('"') => Term::Literal(cursor.parse_literal()?),
        Some('_') => return Err(cursor.error("blank nodes are not supported")),
        _ => return Err(cursor.error("expected an IRI or a literal object")),
    };
    cursor.skip_ws();
    if cursor.bump() != Some('.') {
        return Err(cursor.error("expected terminating '.'"));
    }
    cursor.skip_ws();
    if cursor.peek().is_some() {
        return Err(cursor.error("trailing content after '.'"));
    }
    Ok(Some((subject, predicate, object)))
}

/// Parse a whole N-Triples document into expanded triples.
pub fn parse_ntriples(text: &str) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if let Some(triple) = parse_ntriples_line(line, index + 1)? {
            out.push(triple);
        }
    }
    Ok(out)
}

/// Load a graph from N-Triples. Two-pass: rdf:type triples do not need to
/// precede use. In strict mode unknown classes or predicates are errors;
/// in lenient mode they become findings and the triple is skipped. The
/// returned graph is in deferred mode, so domain/range violations load and
/// surface through the validator.
pub fn from_ntriples(
    text: &str,
    schema: Arc<ProfileSchema>,
    strict: bool,
) -> Result<(KnowledgeGraph, ValidationReport)> {
    let mut graph = KnowledgeGraph::with_mode(schema, Mode::Deferred);
    let mut findings = ValidationReport::new();

    let mut triples: Vec<(usize, Triple)> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if let Some(triple) = parse_ntriples_line(line, index + 1)? {
            triples.push((index + 1, triple));
        }
    }

    let contract = |graph: &KnowledgeGraph, iri: &str| contract_with(graph.prefixes(), iri);

    // pass 1: entities and labels
    let mut labels: Vec<(String, String)> = Vec::new();
    for (line_no, (s, p, o)) in &triples {
        match (p.as_str(), o) {
            (RDF_TYPE, Term::Iri(class_iri)) => {
                let class_id = contract(&graph, class_iri);
                if graph.schema.class(&class_id).is_err() {
                    if strict {
                        return Err(Error::UnknownTerm {
                            term: class_iri.clone(),
                            line: *line_no,
                        });
                    }
                    findings.push(Finding::new(
                        Severity::Warning,
                        "L1",
                        s.clone(),
                        format!("unknown class {class_iri}, entity skipped"),
                    ));
                    continue;
                }
                if !graph.contains_entity(s) {
                    graph.create_entity(s.clone(), &class_id, None)?;
                }
            }
            (RDFS_LABEL, Term::Literal(l)) => labels.push((s.clone(), l.value.clone())),
            _ => {}
        }
    }
    for (iri, label) in labels {
        // labels for unknown entities fall through to pass 2 handling
        let _ = graph.set_label(&iri, &label);
    }

    // pass 2: statements
    for (line_no, (s, p, o)) in &triples {
        if p == RDF_TYPE || p == RDFS_LABEL {
            continue;
        }
        let property = contract(&graph, p);
        if graph.schema.property(&property).is_err() {
            if strict {
                return Err(Error::UnknownTerm {
                    term: p.clone(),
                    line: *line_no,
                });
            }
            findings.push(Finding::new(
                Severity::Warning,
                "L2",
                s.clone(),
                format!("unknown predicate {p}, statement skipped"),
            ));
            continue;
        }
        let range = graph.schema.property(&property)?.range.clone();
        let outcome = match (o, &range) {
            (Term::Iri(object), Range::Class(_)) => graph.assert(s, &property, object).map(|_| ()),
            (Term::Literal(l), Range::Literal) => {
                graph.assert_literal(s, &property, l.clone()).map(|_| ())
            }
            (Term::Iri(object), Range::Literal) => Err(Error::LiteralMismatch {
                property: format!("{property} (object {object})"),
                expected: "a literal object",
                got: "an entity iri",
            }),
            (Term::Literal(_), Range::Class(_)) => Err(Error::LiteralMismatch {
                property: property.clone(),
                expected: "an entity iri",
                got: "a literal object",
            }),
        };
        if let Err(e) = outcome {
            if strict {
                return Err(e);
            }
            findings.push(Finding::new(
                Severity::Warning,
                "L3",
                s.clone(),
                format!("statement skipped: {e}"),
            ));
        }
    }

    findings.finalize();
    Ok((graph, findings))
}

/// Set-level equality of two graphs under iri expansion. With no blank
/// nodes, isomorphism is plain equality of the expanded triple sets plus
/// entity classes and labels.
pub fn isomorphic(a: &KnowledgeGraph, b: &KnowledgeGraph) -> Result<bool> {
    Ok(triples_of(a)? == triples_of(b)?)
}
