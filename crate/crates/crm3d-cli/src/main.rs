//! Batch front door over the crm3d library: ingest campaign logs, validate,
//! export, query lineage, check plans, import IFC, look up vocabulary.
//!
//! Exit codes: 0 success, 1 validation findings of Error severity,
//! 2 input or parse failure. Diagnostics go to stderr, payload to stdout
//! or the file named by `-o`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crm3d::{load_builtin_profile, serializer, validator, KnowledgeGraph, ProfileSchema};

#[derive(Parser)]
#[command(name = "crm3d", version, about = "3D digitisation metadata engine")]
struct Cli {
    /// Fail on unknown keys and terms instead of warning
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Downgrade unknown keys and terms to warnings
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Nt,
    Ttl,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a campaign-log JSON file
    Build {
        log_file: PathBuf,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "nt")]
        format: Format,
    },
    /// Validate an N-Triples graph file against the rule catalog
    Validate {
        graph_file: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Re-serialize an N-Triples graph file
    Export {
        graph_file: PathBuf,
        #[arg(long, value_enum, default_value = "nt")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the provenance chain of a 3D model
    Lineage {
        graph_file: PathBuf,
        model_iri: String,
        #[arg(long)]
        json: bool,
    },
    /// Check plan fulfilment against a scope activity
    PlanCheck {
        graph_file: PathBuf,
        plan_iri: String,
        scope_iri: String,
        #[arg(long)]
        json: bool,
    },
    /// Import IFC building entities from a STEP file into a graph
    IfcImport {
        /// Existing N-Triples graph to extend, or `-` to start empty
        graph_file: PathBuf,
        ifc_file: PathBuf,
        /// Custom mapping file (`IFCKEYWORD -> 3dx_class , represented_class`)
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "nt")]
        format: Format,
    },
    /// Controlled-vocabulary operations
    Vocab {
        #[command(subcommand)]
        command: VocabCommand,
    },
}

#[derive(Subcommand)]
enum VocabCommand {
    /// Resolve a label in a vocabulary snapshot
    Lookup {
        /// Snapshot file path, or a snapshot name under CRM3D_VOCAB_DIR
        snapshot: String,
        label: String,
        #[arg(long)]
        json: bool,
    },
}

/// Failures that map to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = std::result::Result<u8, InputError>;

fn read_file(path: &Path) -> std::result::Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write_payload(output: Option<&Path>, payload: &str) -> std::result::Result<(), InputError> {
    match output {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| InputError(format!("{}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn load_graph(
    path: &Path,
    schema: Arc<ProfileSchema>,
    strict: bool,
) -> std::result::Result<KnowledgeGraph, InputError> {
    let text = read_file(path)?;
    let (graph, findings) = serializer::from_ntriples(&text, schema, strict)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    eprint!("{}", findings.to_text());
    Ok(graph)
}

fn serialize(graph: &KnowledgeGraph, format: Format) -> std::result::Result<String, InputError> {
    Ok(match format {
        Format::Nt => serializer::to_ntriples(graph)?,
        Format::Ttl => serializer::to_turtle(graph)?,
    })
}

/// Accept either a stored iri or a curie expandable by the graph prefixes.
fn resolve_iri(graph: &KnowledgeGraph, reference: &str) -> String {
    if graph.contains_entity(reference) {
        return reference.to_string();
    }
    graph
        .expand(reference)
        .unwrap_or_else(|_| reference.to_string())
}

fn run(cli: Cli) -> CmdResult {
    let strict = !cli.lenient;
    let schema = Arc::new(load_builtin_profile());
    match cli.command {
        Command::Build {
            log_file,
            output,
            format,
        } => {
            let text = read_file(&log_file)?;
            let (graph, findings) = crm3d::log::ingest_log(&text, schema, strict)?;
            eprint!("{}", findings.to_text());
            write_payload(output.as_deref(), &serialize(&graph, format)?)?;
            Ok(0)
        }
        Command::Validate { graph_file, json } => {
            let graph = load_graph(&graph_file, schema, strict)?;
            let report = validator::validate_graph(&graph)?;
            let payload = if json { report.to_json() } else { report.to_text() };
            print!("{payload}");
            Ok(if report.error_count() > 0 { 1 } else { 0 })
        }
        Command::Export {
            graph_file,
            format,
            output,
        } => {
            let graph = load_graph(&graph_file, schema, strict)?;
            write_payload(output.as_deref(), &serialize(&graph, format)?)?;
            Ok(0)
        }
        Command::Lineage {
            graph_file,
            model_iri,
            json,
        } => {
            let graph = load_graph(&graph_file, schema, strict)?;
            let model = resolve_iri(&graph, &model_iri);
            let chain = crm3d::lineage::provenance_chain(&graph, &model)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&chain)?);
            } else {
                print!("{}", crm3d::lineage::chain_to_text(&chain));
            }
            Ok(0)
        }
        Command::PlanCheck {
            graph_file,
            plan_iri,
            scope_iri,
            json,
        } => {
            let graph = load_graph(&graph_file, schema, strict)?;
            let plan = resolve_iri(&graph, &plan_iri);
            let scope = resolve_iri(&graph, &scope_iri);
            let report = crm3d::planning::check_fulfilment(&graph, &plan, &scope)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(0)
        }
        Command::IfcImport {
            graph_file,
            ifc_file,
            mapping,
            output,
            format,
        } => {
            let mut graph = if graph_file.as_os_str() == "-" {
                KnowledgeGraph::new(schema)
            } else {
                load_graph(&graph_file, schema, strict)?
            };
            let bytes = std::fs::read(&ifc_file)
                .map_err(|e| InputError(format!("{}: {e}", ifc_file.display())))?;
            let (text, encoding) = crm3d::ifc::decode_step_bytes(&bytes);
            let records = crm3d::ifc::parse_step(&text)
                .map_err(|e| InputError(format!("{}: {e}", ifc_file.display())))?;
            let rules = match mapping {
                Some(path) => crm3d::ifc::parse_mapping(&read_file(&path)?, &graph)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?,
                None => crm3d::ifc::default_mapping(),
            };
            let mut summary = crm3d::ifc::map_to_crm(&records, &mut graph, &rules, None)?;
            summary.encoding = Some(encoding.to_string());
            eprint!("{}", summary.to_text());
            write_payload(output.as_deref(), &serialize(&graph, format)?)?;
            Ok(0)
        }
        Command::Vocab {
            command: VocabCommand::Lookup { snapshot, label, json },
        } => {
            let path = if Path::new(&snapshot).exists() {
                PathBuf::from(&snapshot)
            } else if let Ok(dir) = std::env::var("CRM3D_VOCAB_DIR") {
                Path::new(&dir).join(format!("{snapshot}.tsv"))
            } else {
                return Err(InputError(format!(
                    "snapshot `{snapshot}` not found and CRM3D_VOCAB_DIR is unset"
                )));
            };
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or(&snapshot)
                .to_string();
            let loaded = crm3d::vocab::load_snapshot(&id, &read_file(&path)?)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let concepts = loaded.resolve(&label);
            if json {
                let rendered: Vec<serde_json::Value> = concepts
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "iri": c.iri,
                            "preferred_label": c.preferred_label,
                            "alt_labels": c.alt_labels,
                            "broader": c.broader,
                            "vocabulary": c.vocabulary,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rendered)?);
            } else {
                for concept in &concepts {
                    println!("{}\t{}", concept.iri, concept.preferred_label);
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
