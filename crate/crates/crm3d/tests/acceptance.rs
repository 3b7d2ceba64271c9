//! End-to-end acceptance suite. Each test covers one criterion and prints
//! a single pass line; failures abort with a descriptive panic.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crm3d::builder::{self, DerivationSpec};
use crm3d::graph::{KnowledgeGraph, Literal, LiteralKind, Mode};
use crm3d::profile::{load_builtin_profile, terms::*, ClassDef, ProfileSchema, Range, SourceModel};
use crm3d::serializer;
use crm3d::validator::{self, validate_graph};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn fresh() -> KnowledgeGraph {
    KnowledgeGraph::new(Arc::new(load_builtin_profile()))
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_1_profile_fidelity() {
    let schema = load_builtin_profile();

    // new classes: exact superclasses
    let class_rows: &[(&str, &str, &[&str])] = &[
        (MODEL_CREATION, "Digital Model Creation", &[E7]),
        (CAMPAIGN, "Digitisation Campaign", &[E7]),
        (SESSION, "Digitisation Session", &[E7]),
        (MODEL_3D, "3D Model", &[D1]),
    ];
    for (id, label, supers) in class_rows {
        let def = schema.class(id).unwrap();
        assert_eq!(def.label, *label, "{id}");
        assert_eq!(def.superclasses, supers.to_vec(), "{id}");
        assert_eq!(def.source_model, SourceModel::Crm3d, "{id}");
    }

    // new properties: exact superproperty, domain and range
    let prop_rows: &[(&str, &str, &str, &str, &str)] = &[
        (MADE_DURING, "was made during", P10, MODEL_CREATION, SESSION),
        (HAS_SESSION, "has session", P9, CAMPAIGN, SESSION),
        (MANAGED_BY, "is managed by", PP4, MODEL_3D, PE2),
    ];
    for (id, label, sup, domain, range) in prop_rows {
        let def = schema.property(id).unwrap();
        assert_eq!(def.label, *label, "{id}");
        assert_eq!(def.superproperties, vec![sup.to_string()], "{id}");
        assert_eq!(def.domain, *domain, "{id}");
        assert_eq!(def.range, Range::Class(range.to_string()), "{id}");
    }

    // exactly 7 published profile terms: 4 classes + 3 properties
    let core_classes = schema
        .classes
        .keys()
        .filter(|id| id.starts_with("crm3d:3DE"))
        .count();
    let core_props = schema
        .properties
        .keys()
        .filter(|id| id.starts_with("crm3d:3DP"))
        .count();
    assert_eq!((core_classes, core_props), (4, 3));

    // borrowed-term signatures, as published by the source ontologies
    let borrowed: &[(&str, &str, Option<&str>)] = &[
        (P2, E1, Some(E55)),
        (P9, E5, Some(E5)),
        (P10, E5, Some(E5)),
        (P11, E5, Some(E39)),
        (P14, E7, Some(E39)),
        (P16, E7, Some(E1)),
        (P20, E7, Some(E5)),
        (P21, E7, Some(E55)),
        (P33, E7, Some(E29)),
        (P67, E73, Some(E1)),
        (P70, E1, Some(E31)),
        (P138, E73, Some(E1)),
        (O8, S4, Some(E1)),
        (L2, D10, Some(D1)),
        (L11, E7, Some(D1)),
        (L13, E7, None),
        (L21, D3, Some(D1)),
        (L22, D3, Some(D1)),
        (L23, E7, Some(D14)),
        (L30, E7, Some(E21)),
        (PP2, PE2, Some(E39)),
        (PP4, D1, Some(PE2)),
        (PP43, PE35, Some(E7)),
        (PP49, PE2, Some(PE29)),
        (PP50, PE29, Some(D1)),
        (PLANNED_FOR, ACTIVITY_PLAN, Some(E5)),
        (REQUIRES_EVENT_OF_TYPE, ACTIVITY_PLAN, Some(E55)),
        (IS_ASSESSED_BY, ACTIVITY_PLAN, Some(E31)),
    ];
    for (id, domain, range) in borrowed {
        let (d, r) = schema.property_signature(id).unwrap();
        assert_eq!(d, *domain, "{id} domain");
        match range {
            Some(range) => assert_eq!(r, Range::Class(range.to_string()), "{id} range"),
            None => assert_eq!(r, Range::Literal, "{id} range"),
        }
    }

    // hierarchy facts the profile depends on
    let facts: &[(&str, &str, bool)] = &[
        (MODEL_CREATION, E7, true),
        (CAMPAIGN, E7, true),
        (SESSION, E7, true),
        (MODEL_3D, D1, true),
        (MODEL_3D, E73, true),
        (MODEL_3D, E7, false),
        (SITE_MODEL, MODEL_3D, true),
        (SPACE_MODEL, MODEL_3D, true),
        (BUILDING_MODEL, MODEL_3D, true),
        (E21, E39, true),
        (E74, E39, true),
        (S4, E7, true),
        (D3, D10, true),
        (D3, E7, true),
        (D14, D1, true),
        (B2, B1, true),
        (B4, B2, true),
        (ACTIVITY_PLAN, E29, true),
        (ACTIVITY_PLAN, E73, true),
        (PE34, E74, true),
        (PE35, E7, true),
    ];
    for (a, b, expected) in facts {
        assert_eq!(schema.is_subclass_of(a, b).unwrap(), *expected, "{a} vs {b}");
    }
    assert!(schema.is_subproperty_of(MADE_DURING, P10).unwrap());
    assert!(schema.is_subproperty_of(HAS_SESSION, P9).unwrap());
    assert!(schema.is_subproperty_of(MANAGED_BY, PP4).unwrap());
    assert!(!schema.is_subproperty_of(MADE_DURING, P9).unwrap());

    // annotation properties carry literal values
    for id in [LABEL, NOTE, TIMESTAMP_BEGIN, TIMESTAMP_END] {
        assert_eq!(schema.property(id).unwrap().range, Range::Literal, "{id}");
    }

    // the snapshot itself is consistent
    assert!(schema.validate_schema().is_empty());

    println!("ACCEPTANCE 1 profile fidelity: pass");
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_2_scenario_reproduction() {
    let log = fixture("sample_log.json");
    let (graph, findings) =
        crm3d::log::ingest_log(&log, Arc::new(load_builtin_profile()), true).unwrap();
    assert!(findings.is_empty(), "{}", findings.to_text());

    // per-property statement counts against the committed golden
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for st in graph.statements() {
        *counts.entry(st.property.clone()).or_insert(0) += 1;
    }
    *counts.entry("rdf:type".to_string()).or_insert(0) += graph.entity_count();
    let labeled = graph.entities().filter(|e| e.label.is_some()).count();
    *counts.entry("rdfs:label".to_string()).or_insert(0) += labeled;

    let mut golden: BTreeMap<String, usize> = BTreeMap::new();
    for line in fixture("golden_counts.tsv").lines() {
        if line.trim().is_empty() {
            continue;
        }
        let (prop, count) = line.split_once('\t').expect("golden line");
        golden.insert(prop.to_string(), count.trim().parse().unwrap());
    }
    assert_eq!(counts, golden);

    // validation: zero Errors
    let report = validate_graph(&graph).unwrap();
    assert_eq!(report.error_count(), 0, "{}", report.to_text());

    // serializations match the committed goldens byte for byte
    let nt = serializer::to_ntriples(&graph).unwrap();
    assert_eq!(nt, fixture("sample.nt"));
    let ttl = serializer::to_turtle(&graph).unwrap();
    assert_eq!(ttl, fixture("sample.ttl"));

    // round trip, then reproduce the committed lineage rendering
    let (loaded, load_findings) =
        serializer::from_ntriples(&nt, Arc::new(load_builtin_profile()), true).unwrap();
    assert!(load_findings.is_empty());
    assert!(serializer::isomorphic(&graph, &loaded).unwrap());
    let target = "http://www.example.org/crm3d/res/3DE4/4";
    let chain = crm3d::lineage::provenance_chain(&loaded, target).unwrap();
    assert_eq!(
        crm3d::lineage::chain_to_text(&chain),
        fixture("lineage_full_mesh.txt")
    );

    // the committed plan is fulfilled by the executed campaign
    let plan = "http://www.example.org/crm3d/res/ActivityPlan/1";
    let scope = "http://www.example.org/crm3d/res/3DE2/1";
    let fulfilment = crm3d::planning::check_fulfilment(&loaded, plan, scope).unwrap();
    assert!(fulfilment.overall, "{}", fulfilment.to_text());

    println!("ACCEPTANCE 2 scenario reproduction: pass");
}

// ---------------------------------------------------------------- criterion 3

fn random_hierarchy(rng: &mut ChaCha8Rng) -> (ProfileSchema, Vec<String>) {
    let mut schema = ProfileSchema::default();
    schema
        .prefixes
        .insert("x".to_string(), "http://x.example/".to_string());
    let n = rng.random_range(1..=50);
    let mut ids = Vec::new();
    for i in 0..n {
        let id = format!("x:C{i}");
        // supers point only at earlier classes, so the hierarchy is a DAG
        let mut supers = Vec::new();
        if i > 0 {
            for _ in 0..rng.random_range(0..=2usize) {
                supers.push(format!("x:C{}", rng.random_range(0..i)));
            }
            supers.sort();
            supers.dedup();
        }
        schema
            .register_class(ClassDef {
                id: id.clone(),
                label: format!("class {i}"),
                superclasses: supers,
                source_model: SourceModel::Crm3d,
            })
            .unwrap();
        ids.push(id);
    }
    (schema, ids)
}

/// Independent reachability oracle: plain BFS over the superclass edges.
fn bfs_oracle(schema: &ProfileSchema, from: &str, to: &str) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![from.to_string()];
    while let Some(cur) = stack.pop() {
        if cur == to {
            return true;
        }
        if !seen.insert(cur.clone()) {
            continue;
        }
        if let Some(def) = schema.classes.get(&cur) {
            stack.extend(def.superclasses.iter().cloned());
        }
    }
    false
}

#[test]
fn criterion_3_closure_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (schema, ids) = random_hierarchy(&mut rng);
        for a in &ids {
            for b in &ids {
                assert_eq!(
                    schema.is_subclass_of(a, b).unwrap(),
                    bfs_oracle(&schema, a, b),
                    "{a} vs {b}"
                );
            }
        }
    }
    println!("ACCEPTANCE 3 closure oracle: pass");
}

// ---------------------------------------------------------------- criterion 4

const LABEL_POOL: &[Option<&str>] = &[
    None,
    Some("plain"),
    Some("with \"quotes\""),
    Some("line\nbreak and\ttab"),
    Some("naïve façade — ※"),
    Some("back\\slash"),
];

fn random_graph(rng: &mut ChaCha8Rng) -> KnowledgeGraph {
    let mut graph = fresh();
    let classes = [E21, E55, E7, E74, D1, D3, D14, CAMPAIGN, SESSION, MODEL_3D, PE2, PE29];
    let n_entities = rng.random_range(4..=120);
    let mut by_index: Vec<(String, &str)> = Vec::new();
    for i in 0..n_entities {
        let class = classes[rng.random_range(0..classes.len())];
        let label = LABEL_POOL[rng.random_range(0..LABEL_POOL.len())];
        let iri = format!("ex:e{i}");
        graph.create_entity(&iri, class, label).unwrap();
        by_index.push((iri, class));
    }

    let object_props = [
        P2, P9, P11, P14, P16, L11, L21, L22, L23, L30, PP2, PP49, PP50, HAS_SESSION, MANAGED_BY,
    ];
    let literal_props = [NOTE, L13, TIMESTAMP_BEGIN];
    let schema = graph.schema.clone();
    let attempts = rng.random_range(0..=500);
    for _ in 0..attempts {
        if rng.random_bool(0.85) {
            let prop = object_props[rng.random_range(0..object_props.len())];
            let (domain, range) = schema.property_signature(prop).unwrap();
            let range = match range {
                Range::Class(c) => c,
                Range::Literal => unreachable!(),
            };
            let subjects: Vec<&String> = by_index
                .iter()
                .filter(|(_, c)| schema.is_subclass_of(c, &domain).unwrap())
                .map(|(iri, _)| iri)
                .collect();
            let objects: Vec<&String> = by_index
                .iter()
                .filter(|(_, c)| schema.is_subclass_of(c, &range).unwrap())
                .map(|(iri, _)| iri)
                .collect();
            if subjects.is_empty() || objects.is_empty() {
                continue;
            }
            let s = subjects[rng.random_range(0..subjects.len())].clone();
            let o = objects[rng.random_range(0..objects.len())].clone();
            graph.assert(&s, prop, &o).unwrap();
        } else {
            let prop = literal_props[rng.random_range(0..literal_props.len())];
            let (domain, _) = schema.property_signature(prop).unwrap();
            let subjects: Vec<&String> = by_index
                .iter()
                .filter(|(_, c)| schema.is_subclass_of(c, &domain).unwrap())
                .map(|(iri, _)| iri)
                .collect();
            if subjects.is_empty() {
                continue;
            }
            let s = subjects[rng.random_range(0..subjects.len())].clone();
            let literal = if prop == TIMESTAMP_BEGIN {
                Literal::timestamp("2021-04-30T09:00:00+02:00").unwrap()
            } else {
                Literal::new(
                    LABEL_POOL[rng.random_range(1..LABEL_POOL.len())].unwrap(),
                    LiteralKind::Text,
                )
                .unwrap()
            };
            graph.assert_literal(&s, prop, literal).unwrap();
        }
    }
    graph
}

#[test]
fn criterion_4_serialization_round_trip() {
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(4_000 + case);
        let graph = random_graph(&mut rng);

        // byte determinism: same seed, fresh build, identical output
        let mut rng2 = ChaCha8Rng::seed_from_u64(4_000 + case);
        let graph2 = random_graph(&mut rng2);
        let nt = serializer::to_ntriples(&graph).unwrap();
        assert_eq!(nt, serializer::to_ntriples(&graph2).unwrap(), "case {case}");

        let (loaded, findings) =
            serializer::from_ntriples(&nt, Arc::new(load_builtin_profile()), true).unwrap();
        assert!(findings.is_empty(), "case {case}");
        assert!(serializer::isomorphic(&graph, &loaded).unwrap(), "case {case}");
        assert_eq!(nt, serializer::to_ntriples(&loaded).unwrap(), "case {case}");
    }
    println!("ACCEPTANCE 4 serialization round trip: pass");
}

// ---------------------------------------------------------------- criterion 5

struct DerivationFixture {
    graph: KnowledgeGraph,
    models: Vec<String>,
    /// producer activity per model index, if any
    producer: BTreeMap<usize, (String, Vec<usize>)>,
}

fn random_derivations(rng: &mut ChaCha8Rng) -> DerivationFixture {
    let mut graph = fresh();
    let n = rng.random_range(2..=30);
    let mut models = Vec::new();
    for i in 0..n {
        let iri = format!("ex:m{i}");
        graph.create_entity(&iri, MODEL_3D, None).unwrap();
        models.push(iri);
    }
    let mut producer = BTreeMap::new();
    for i in 1..n {
        if rng.random_bool(0.8) {
            let activity = format!("ex:a{i}");
            graph.create_entity(&activity, D3, None).unwrap();
            let mut inputs: Vec<usize> = (0..i).collect();
            inputs.shuffle(rng);
            inputs.truncate(rng.random_range(1..=2.min(i)));
            inputs.sort();
            for input in &inputs {
                graph.assert(&activity, L21, &models[*input]).unwrap();
            }
            graph.assert(&activity, L22, &models[i]).unwrap();
            producer.insert(i, (activity, inputs));
        }
    }
    DerivationFixture {
        graph,
        models,
        producer,
    }
}

/// Exhaustive forward path enumeration from one model.
fn forward_oracle(fx: &DerivationFixture, start: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(cur) = stack.pop() {
        for (i, (_, inputs)) in &fx.producer {
            if inputs.contains(&cur) && out.insert(*i) {
                stack.push(*i);
            }
        }
    }
    out.remove(&start);
    out
}

/// Backward closure of (activity, output) steps from one model.
fn backward_oracle(fx: &DerivationFixture, start: usize) -> BTreeSet<(String, String)> {
    let mut steps = BTreeSet::new();
    let mut stack = vec![start];
    let mut seen = BTreeSet::new();
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur) {
            continue;
        }
        if let Some((activity, inputs)) = fx.producer.get(&cur) {
            steps.insert((activity.clone(), fx.models[cur].clone()));
            stack.extend(inputs.iter().copied());
        }
    }
    steps
}

#[test]
fn criterion_5_lineage_oracle() {
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5_000 + case);
        let fx = random_derivations(&mut rng);

        for (i, model) in fx.models.iter().enumerate() {
            let expected: BTreeSet<String> = forward_oracle(&fx, i)
                .into_iter()
                .map(|j| fx.models[j].clone())
                .collect();
            let got: BTreeSet<String> = crm3d::lineage::derivatives_of(&fx.graph, model)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(got, expected, "case {case} model {model}");

            let chain = crm3d::lineage::provenance_chain(&fx.graph, model).unwrap();
            assert!(!chain.cycle_detected, "case {case}");
            let got_steps: BTreeSet<(String, String)> = chain
                .steps
                .iter()
                .map(|s| (s.activity.clone(), s.output.clone()))
                .collect();
            assert_eq!(got_steps, backward_oracle(&fx, i), "case {case} model {model}");

            // topological order: each produced input appears earlier
            let mut placed: BTreeSet<&str> = BTreeSet::new();
            let in_chain: BTreeSet<&str> =
                chain.steps.iter().map(|s| s.output.as_str()).collect();
            for step in &chain.steps {
                for input in &step.inputs {
                    if in_chain.contains(input.as_str()) {
                        assert!(placed.contains(input.as_str()), "case {case}: order");
                    }
                }
                placed.insert(&step.output);
            }
        }

        // inject a cycle and require detection with truncation everywhere
        let mut fx = fx;
        let Some((&produced, (_, inputs))) = fx.producer.iter().next() else {
            continue;
        };
        let root = inputs[0];
        let back = "ex:cycle_back".to_string();
        fx.graph.create_entity(&back, D3, None).unwrap();
        fx.graph.assert(&back, L21, &fx.models[produced].clone()).unwrap();
        fx.graph.assert(&back, L22, &fx.models[root].clone()).unwrap();

        let chain = crm3d::lineage::provenance_chain(&fx.graph, &fx.models[root]).unwrap();
        assert!(chain.cycle_detected, "case {case}: cycle flag");
        let report = validate_graph(&fx.graph).unwrap();
        assert!(
            report.findings.iter().any(|f| f.rule_id == "E3"),
            "case {case}: E3 finding"
        );
        // forward closure still terminates on cyclic data
        crm3d::lineage::derivatives_of(&fx.graph, &fx.models[root]).unwrap();
    }
    println!("ACCEPTANCE 5 lineage oracle: pass");
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_6_plan_fulfilment_oracle() {
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6_000 + case);
        let mut graph = fresh();
        let n_types = rng.random_range(2..=6);
        let types: Vec<String> = (0..n_types)
            .map(|i| {
                let iri = format!("ex:t{i}");
                graph.create_entity(&iri, E55, Some(&format!("type {i}"))).unwrap();
                iri
            })
            .collect();
        let (project, _) = builder::begin_project(&mut graph, "P", &[]).unwrap();
        let campaign = builder::add_campaign(&mut graph, &project, "c").unwrap();

        // sessions with random typings
        let mut typed: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for s in 0..rng.random_range(0..=6) {
            let session =
                builder::add_session(&mut graph, &campaign, &format!("s{s}"), None, None).unwrap();
            let mut assigned = BTreeSet::new();
            for t in &types {
                if rng.random_bool(0.3) {
                    graph.assert(&session, P2, t).unwrap();
                    assigned.insert(t.clone());
                }
            }
            typed.insert(session, assigned);
        }

        let mut required: Vec<&str> = types
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .map(String::as_str)
            .collect();
        if required.is_empty() {
            required.push(&types[0]);
        }
        let plan = crm3d::planning::create_plan(&mut graph, "plan", &required, Some(&campaign))
            .unwrap();

        let check = |graph: &KnowledgeGraph,
                     typed: &BTreeMap<String, BTreeSet<String>>|
         -> BTreeMap<String, Option<String>> {
            let report = crm3d::planning::check_fulfilment(graph, &plan, &campaign).unwrap();
            // brute-force oracle: first session in iri order carrying the type
            let mut oracle_all = true;
            let mut out = BTreeMap::new();
            for (required_type, verdict) in &report.verdicts {
                let expected = typed
                    .iter()
                    .filter(|(_, ts)| ts.contains(required_type))
                    .map(|(iri, _)| iri.clone())
                    .min();
                if expected.is_none() {
                    oracle_all = false;
                }
                match (verdict, &expected) {
                    (crm3d::planning::Verdict::Fulfilled(by), Some(e)) => {
                        assert_eq!(by, e, "case {case}")
                    }
                    (crm3d::planning::Verdict::Missing, None) => {}
                    other => panic!("case {case}: mismatch {other:?}"),
                }
                out.insert(required_type.clone(), expected);
            }
            assert_eq!(report.overall, oracle_all, "case {case}");
            out
        };

        let before = check(&graph, &typed);

        // monotonicity: adding typed sessions never un-fulfils anything
        for add in 0..50 {
            let session =
                builder::add_session(&mut graph, &campaign, &format!("extra{add}"), None, None)
                    .unwrap();
            let t = &types[rng.random_range(0..types.len())];
            graph.assert(&session, P2, t).unwrap();
            typed.insert(session, BTreeSet::from([t.clone()]));
        }
        let after = check(&graph, &typed);
        for (required_type, verdict) in &before {
            if verdict.is_some() {
                assert!(
                    after.get(required_type).map(|v| v.is_some()).unwrap_or(false),
                    "case {case}: monotonicity of {required_type}"
                );
            }
        }
    }
    println!("ACCEPTANCE 6 plan fulfilment oracle: pass");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_7_ifc_import() {
    let records = crm3d::ifc::parse_step(&fixture("sample.ifc")).unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records[0].args.len(), 14);

    let mut graph = fresh();
    let summary =
        crm3d::ifc::map_to_crm(&records, &mut graph, &crm3d::ifc::default_mapping(), None)
            .unwrap();
    assert_eq!(summary.mapped_total(), 4);
    assert_eq!(summary.skipped_total(), 0);

    let p138: Vec<_> = graph
        .statements()
        .iter()
        .filter(|s| s.property == P138)
        .collect();
    assert_eq!(p138.len(), 4);
    let mut object_classes = BTreeSet::new();
    for st in &p138 {
        let subject = graph.entity(&st.subject).unwrap();
        assert!(graph.schema.is_subclass_of(&subject.class_id, MODEL_3D).unwrap());
        let object = graph.entity(st.object.as_entity().unwrap()).unwrap();
        object_classes.insert(object.class_id.clone());
    }
    let expected: BTreeSet<String> =
        [E27, B1, B2, B4].iter().map(|s| s.to_string()).collect();
    assert_eq!(object_classes, expected);

    // the three malformed fixtures are rejected with positioned errors
    match crm3d::ifc::parse_step(&fixture("bad_syntax.ifc")).unwrap_err() {
        crm3d::Error::Step { line, .. } => assert!(line >= 5, "line {line}"),
        other => panic!("bad_syntax: {other:?}"),
    }
    match crm3d::ifc::parse_step(&fixture("duplicate_id.ifc")).unwrap_err() {
        crm3d::Error::Step { line, .. } => assert_eq!(line, 6),
        other => panic!("duplicate_id: {other:?}"),
    }
    match crm3d::ifc::parse_step(&fixture("unresolved_ref.ifc")).unwrap_err() {
        crm3d::Error::DanglingReference { context, reference } => {
            assert_eq!(context, "step record #2");
            assert_eq!(reference, "#999");
        }
        other => panic!("unresolved_ref: {other:?}"),
    }

    println!("ACCEPTANCE 7 ifc import: pass");
}

// ---------------------------------------------------------------- criterion 8

fn rule_findings(graph: &KnowledgeGraph, rule: &str) -> usize {
    validate_graph(graph)
        .unwrap()
        .findings
        .iter()
        .filter(|f| f.rule_id == rule)
        .count()
}

fn deferred() -> KnowledgeGraph {
    KnowledgeGraph::with_mode(Arc::new(load_builtin_profile()), Mode::Deferred)
}

#[test]
fn criterion_8_validator_rules() {
    // determinism on the reference scenario
    let (graph, _) = crm3d::log::ingest_log(
        &fixture("sample_log.json"),
        Arc::new(load_builtin_profile()),
        true,
    )
    .unwrap();
    let a = validate_graph(&graph).unwrap();
    let b = validate_graph(&graph).unwrap();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.to_json(), b.to_json());

    assert_eq!(validator::rule_ids().len(), 9);

    // E1: reversed has-session violates domain and range / correct direction
    let mut trigger = deferred();
    trigger.create_entity("ex:c", CAMPAIGN, None).unwrap();
    trigger.create_entity("ex:s", SESSION, None).unwrap();
    trigger.assert("ex:s", HAS_SESSION, "ex:c").unwrap();
    assert!(rule_findings(&trigger, "E1") > 0);
    let mut clean = deferred();
    clean.create_entity("ex:c", CAMPAIGN, None).unwrap();
    clean.create_entity("ex:s", SESSION, None).unwrap();
    clean.assert("ex:c", HAS_SESSION, "ex:s").unwrap();
    assert_eq!(rule_findings(&clean, "E1"), 0);

    // E2: dangling object / registered object
    let mut trigger = deferred();
    trigger.create_entity("ex:c", CAMPAIGN, None).unwrap();
    trigger.assert("ex:c", HAS_SESSION, "ex:ghost").unwrap();
    assert_eq!(rule_findings(&trigger, "E2"), 1);
    assert_eq!(rule_findings(&clean, "E2"), 0);

    // E3: two-model cycle / straight chain
    let mut trigger = fresh();
    for (m, d) in [("ex:a", "ex:d1"), ("ex:b", "ex:d2")] {
        trigger.create_entity(m, MODEL_3D, None).unwrap();
        trigger.create_entity(d, D3, None).unwrap();
    }
    trigger.assert("ex:d1", L21, "ex:a").unwrap();
    trigger.assert("ex:d1", L22, "ex:b").unwrap();
    trigger.assert("ex:d2", L21, "ex:b").unwrap();
    trigger.assert("ex:d2", L22, "ex:a").unwrap();
    assert_eq!(rule_findings(&trigger, "E3"), 1);
    let mut chain = fresh();
    chain.create_entity("ex:a", MODEL_3D, None).unwrap();
    let (_, b) = builder::record_derivation(&mut chain, "ex:a", &DerivationSpec::default(), "b")
        .unwrap();
    builder::record_derivation(&mut chain, &b, &DerivationSpec::default(), "c").unwrap();
    assert_eq!(rule_findings(&chain, "E3"), 0);

    // W1: orphan session / attached session
    let mut trigger = fresh();
    trigger.create_entity("ex:s", SESSION, None).unwrap();
    assert_eq!(rule_findings(&trigger, "W1"), 1);
    assert_eq!(rule_findings(&clean, "W1"), 0);

    // W2: creation without (or with two) sessions / exactly one
    let mut trigger = fresh();
    trigger.create_entity("ex:mc", MODEL_CREATION, None).unwrap();
    assert_eq!(rule_findings(&trigger, "W2"), 1);
    trigger.create_entity("ex:s1", SESSION, None).unwrap();
    trigger.create_entity("ex:s2", SESSION, None).unwrap();
    trigger.assert("ex:mc", MADE_DURING, "ex:s1").unwrap();
    trigger.assert("ex:mc", MADE_DURING, "ex:s2").unwrap();
    assert_eq!(rule_findings(&trigger, "W2"), 1);
    let mut ok = fresh();
    ok.create_entity("ex:mc", MODEL_CREATION, None).unwrap();
    ok.create_entity("ex:s1", SESSION, None).unwrap();
    ok.assert("ex:mc", MADE_DURING, "ex:s1").unwrap();
    assert_eq!(rule_findings(&ok, "W2"), 0);

    // W3: producing activity without software or operator / with both
    let mut trigger = fresh();
    trigger.create_entity("ex:m", MODEL_3D, None).unwrap();
    trigger.create_entity("ex:act", E7, None).unwrap();
    trigger.assert("ex:act", L11, "ex:m").unwrap();
    assert_eq!(rule_findings(&trigger, "W3"), 1);
    let mut ok = fresh();
    ok.create_entity("ex:m", MODEL_3D, None).unwrap();
    ok.create_entity("ex:act", E7, None).unwrap();
    ok.create_entity("ex:sw", D14, None).unwrap();
    ok.create_entity("ex:op", E21, None).unwrap();
    ok.assert("ex:act", L11, "ex:m").unwrap();
    ok.assert("ex:act", L23, "ex:sw").unwrap();
    ok.assert("ex:act", L30, "ex:op").unwrap();
    assert_eq!(rule_findings(&ok, "W3"), 0);

    // W4: model with no producer / model with one
    let mut trigger = fresh();
    trigger.create_entity("ex:m", MODEL_3D, None).unwrap();
    assert_eq!(rule_findings(&trigger, "W4"), 1);
    assert_eq!(rule_findings(&ok, "W4"), 0);

    // W5: published model without access point / full publication
    let mut trigger = fresh();
    trigger.create_entity("ex:m", MODEL_3D, None).unwrap();
    trigger.create_entity("ex:svc", PE2, None).unwrap();
    trigger.assert("ex:m", MANAGED_BY, "ex:svc").unwrap();
    assert_eq!(rule_findings(&trigger, "W5"), 1);
    let mut ok = fresh();
    ok.create_entity("ex:m", MODEL_3D, None).unwrap();
    ok.create_entity("ex:provider", E74, None).unwrap();
    builder::publish_model(&mut ok, "ex:m", "svc", "ex:provider", "https://x.example/m", None)
        .unwrap();
    assert_eq!(rule_findings(&ok, "W5"), 0);

    // W6: team with nobody / team whose project has participants
    let mut trigger = fresh();
    trigger.create_entity("ex:team", PE34, None).unwrap();
    assert_eq!(rule_findings(&trigger, "W6"), 1);
    let mut ok = fresh();
    ok.create_entity("ex:alice", E21, None).unwrap();
    builder::begin_project(&mut ok, "P", &["ex:alice"]).unwrap();
    assert_eq!(rule_findings(&ok, "W6"), 0);

    println!("ACCEPTANCE 8 validator rules: pass");
}
