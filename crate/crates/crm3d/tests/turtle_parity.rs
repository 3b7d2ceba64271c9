//! Cross-format parity check. A small, independent Turtle reader (written
//! only for this test, sharing no code with the library serializer) parses
//! the Turtle output and the resulting triples must equal the triples read
//! from the N-Triples output by an equally independent line reader.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use crm3d::graph::{KnowledgeGraph, Literal};
use crm3d::profile::{load_builtin_profile, terms::*};
use crm3d::serializer;

/// (subject, predicate, object) where a literal object is rendered as
/// `"value"^^<datatype>` and an iri object as `<iri>`.
type Triple = (String, String, String);

// ------------------------------------------------------------ tiny lexer

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Iri(String),
    Literal { value: String, datatype: Option<String> },
    Word(String), // pname, `a`, `@prefix`
    Punct(char),  // ; , .
}

fn unescape(text: &str) -> String {
    let mut out = String::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some('"') => out.push('"'),
            Some('\\') => out.push('\\'),
            Some('u') => {
                let hex: String = chars.by_ref().take(4).collect();
                out.push(char::from_u32(u32::from_str_radix(&hex, 16).unwrap()).unwrap());
            }
            Some('U') => {
                let hex: String = chars.by_ref().take(8).collect();
                out.push(char::from_u32(u32::from_str_radix(&hex, 16).unwrap()).unwrap());
            }
            other => panic!("unsupported escape {other:?}"),
        }
    }
    out
}

fn lex(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '<' {
            let end = chars[i..].iter().position(|&c| c == '>').unwrap() + i;
            tokens.push(Token::Iri(chars[i + 1..end].iter().collect()));
            i = end + 1;
        } else if c == '"' {
            let mut j = i + 1;
            let mut raw = String::new();
            while chars[j] != '"' {
                if chars[j] == '\\' {
                    raw.push(chars[j]);
                    j += 1;
                }
                raw.push(chars[j]);
                j += 1;
            }
            i = j + 1;
            // optional ^^datatype (pname or iri)
            let mut datatype = None;
            if i + 1 < chars.len() && chars[i] == '^' && chars[i + 1] == '^' {
                i += 2;
                if chars[i] == '<' {
                    let end = chars[i..].iter().position(|&c| c == '>').unwrap() + i;
                    datatype = Some(chars[i + 1..end].iter().collect());
                    i = end + 1;
                } else {
                    let start = i;
                    while i < chars.len() && !chars[i].is_whitespace() {
                        i += 1;
                    }
                    let mut word: String = chars[start..i].iter().collect();
                    // a trailing statement terminator is not part of the
                    // pname; step back so it is lexed on the next pass
                    while word.ends_with(['.', ';', ',']) {
                        word.pop();
                        i -= 1;
                    }
                    datatype = Some(word);
                }
            }
            tokens.push(Token::Literal {
                value: unescape(&raw),
                datatype,
            });
        } else if (c == '.' || c == ';' || c == ',')
            && chars
                .get(i + 1)
                .map(|n| n.is_whitespace())
                .unwrap_or(true)
        {
            tokens.push(Token::Punct(c));
            i += 1;
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            let mut word: String = chars[start..i].iter().collect();
            while word.len() > 1 && word.ends_with(['.', ';', ',']) {
                word.pop();
                i -= 1;
            }
            tokens.push(Token::Word(word));
        }
    }
    tokens
}

// ----------------------------------------------------------- tiny parser

struct TurtleReader {
    prefixes: BTreeMap<String, String>,
}

impl TurtleReader {
    fn expand(&self, term: &Token) -> String {
        match term {
            Token::Iri(iri) => iri.clone(),
            Token::Word(w) => {
                let (prefix, local) = w.split_once(':').unwrap_or_else(|| panic!("pname {w}"));
                let base = self
                    .prefixes
                    .get(prefix)
                    .unwrap_or_else(|| panic!("prefix {prefix}"));
                format!("{base}{local}")
            }
            other => panic!("not a term: {other:?}"),
        }
    }

    fn object(&self, token: &Token) -> String {
        match token {
            Token::Literal { value, datatype } => {
                let datatype = datatype
                    .as_ref()
                    .map(|d| self.expand(&pname_or_iri(d)))
                    .unwrap_or_else(|| "http://www.w3.org/2001/XMLSchema#string".to_string());
                format!("\"{value}\"^^<{datatype}>")
            }
            other => format!("<{}>", self.expand(other)),
        }
    }
}

fn pname_or_iri(text: &str) -> Token {
    Token::Word(text.to_string())
}

fn parse_turtle(text: &str) -> BTreeSet<Triple> {
    let tokens = lex(text);
    let mut reader = TurtleReader {
        prefixes: BTreeMap::new(),
    };
    let mut triples = BTreeSet::new();
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i] == Token::Word("@prefix".to_string()) {
            let Token::Word(name) = &tokens[i + 1] else {
                panic!("prefix name")
            };
            let Token::Iri(base) = &tokens[i + 2] else {
                panic!("prefix iri")
            };
            assert_eq!(tokens[i + 3], Token::Punct('.'));
            reader
                .prefixes
                .insert(name.trim_end_matches(':').to_string(), base.clone());
            i += 4;
            continue;
        }
        // one subject block
        let subject = reader.expand(&tokens[i]);
        i += 1;
        loop {
            let predicate = match &tokens[i] {
                Token::Word(w) if w == "a" => {
                    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type".to_string()
                }
                other => reader.expand(other),
            };
            i += 1;
            loop {
                triples.insert((subject.clone(), predicate.clone(), reader.object(&tokens[i])));
                i += 1;
                match &tokens[i] {
                    Token::Punct(',') => i += 1,
                    _ => break,
                }
            }
            match &tokens[i] {
                Token::Punct(';') => i += 1,
                Token::Punct('.') => {
                    i += 1;
                    break;
                }
                other => panic!("expected separator, got {other:?}"),
            }
        }
    }
    triples
}

/// Independent N-Triples line reader, used as the reference.
fn parse_nt(text: &str) -> BTreeSet<Triple> {
    let mut triples = BTreeSet::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line.strip_suffix('.').expect("terminator").trim_end();
        let close = rest.find('>').unwrap();
        let subject = rest[1..close].to_string();
        let rest = rest[close + 1..].trim_start();
        let close = rest.find('>').unwrap();
        let predicate = rest[1..close].to_string();
        let object_src = rest[close + 1..].trim();
        let object = if let Some(stripped) = object_src.strip_prefix('<') {
            format!("<{}>", stripped.strip_suffix('>').unwrap())
        } else {
            // find the closing unescaped quote
            let body = &object_src[1..];
            let mut end = 0;
            let bytes = body.as_bytes();
            while bytes[end] != b'"' {
                if bytes[end] == b'\\' {
                    end += 1;
                }
                end += 1;
            }
            let value = unescape(&body[..end]);
            let tail = &body[end + 1..];
            let datatype = match tail.strip_prefix("^^<") {
                Some(dt) => dt.strip_suffix('>').unwrap().to_string(),
                None => "http://www.w3.org/2001/XMLSchema#string".to_string(),
            };
            format!("\"{value}\"^^<{datatype}>")
        };
        triples.insert((subject, format!("{predicate}"), object));
    }
    triples
}

// ----------------------------------------------------------------- tests

fn parity(graph: &KnowledgeGraph) {
    let nt = serializer::to_ntriples(graph).unwrap();
    let ttl = serializer::to_turtle(graph).unwrap();
    let from_nt = parse_nt(&nt);
    let from_ttl = parse_turtle(&ttl);
    if from_nt != from_ttl {
        let missing: Vec<_> = from_nt.difference(&from_ttl).collect();
        let extra: Vec<_> = from_ttl.difference(&from_nt).collect();
        panic!("parity broken\nmissing from ttl: {missing:#?}\nextra in ttl: {extra:#?}");
    }
}

#[test]
fn reference_scenario_parity() {
    let log = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sample_log.json");
    let text = std::fs::read_to_string(log).unwrap();
    let (graph, _) = crm3d::log::ingest_log(&text, Arc::new(load_builtin_profile()), true).unwrap();
    parity(&graph);
}

#[test]
fn awkward_values_parity() {
    let mut graph = KnowledgeGraph::new(Arc::new(load_builtin_profile()));
    graph
        .create_entity("ex:a", E21, Some("says \"hi\",\nthen\tleaves\\"))
        .unwrap();
    graph.create_entity("ex:b", E55, Some("naïve — ※")).unwrap();
    graph.create_entity("ex:odd.name", E55, Some("dotted local")).unwrap();
    graph.create_entity("t:scheme-like", E55, None).unwrap();
    graph.create_entity("ex:s", SESSION, None).unwrap();
    graph.assert("ex:a", P2, "ex:b").unwrap();
    graph.assert("ex:s", P2, "t:scheme-like").unwrap();
    graph
        .assert_literal("ex:s", TIMESTAMP_BEGIN, Literal::timestamp("2021-04-30T09:00:00Z").unwrap())
        .unwrap();
    graph
        .assert_literal(
            "ex:a",
            NOTE,
            Literal::new("multi\nline; with, punctuation .", crm3d::graph::LiteralKind::Text)
                .unwrap(),
        )
        .unwrap();
    parity(&graph);
}
