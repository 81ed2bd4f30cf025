use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use kgbb_core::backends::{export_pg, export_rdf, export_tables};
use kgbb_core::engine::{Engine, Ids, Provenance};
use kgbb_core::fixtures::demo_engine;
use kgbb_core::query::QuestionDraft;
use kgbb_core::spec::{build_statement_kgbb, check_spec_document, Spec, WizardAnswers};
use kgbb_core::templates::{apply_import_template, RowDiagnostic};
use kgbb_core::*;
use serde::Serialize;
use serde_json::json;

use crate::persist::{load_spec, load_store, save_store, SpecFailure};

#[derive(Debug, Parser)]
#[command(name = "kgbb", version, about = "Semantic-unit knowledge graphs driven by KGBB specifications")]
pub struct Cli {
    /// Specification file (YAML); defaults to the bundled demo specification.
    #[arg(long, env = "KGBB_SPEC", global = true)]
    pub spec: Option<PathBuf>,
    /// Store file (semantic-tables bundle as JSON); created on first write.
    #[arg(long, env = "KGBB_STORE", global = true)]
    pub store: Option<PathBuf>,
    /// Acting user for mutations.
    #[arg(long, env = "KGBB_USER", default_value = "kgbb:cli-user", global = true)]
    pub user: String,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Trig,
    PgJson,
    Tables,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks a specification and prints its diagnostics; exits 0 iff there are none.
    ValidateSpec { file: PathBuf },
    /// Creates statement units from CSV rows through an import template.
    Import {
        csv: PathBuf,
        #[arg(long)]
        template: String,
        /// KGBB instance owning the template; found by template id when omitted.
        #[arg(long)]
        kgbb: Option<String>,
        /// Identifier recorded as the source dataset.
        #[arg(long)]
        source: Option<String>,
    },
    /// Writes the store in one of the export formats; `--out -` prints to stdout.
    Export {
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answers a question given as a JSON or YAML file without storing it.
    Query {
        #[arg(long)]
        question: PathBuf,
    },
    /// Builds a statement KGBB class from wizard answers and prints it as YAML.
    Wizard { answers: PathBuf },
    /// Writes the demo data set to the store file.
    SeedDemo,
    /// Runs the HTTP service.
    Serve {
        #[arg(long, env = "KGBB_PORT", default_value_t = 8080)]
        port: u16,
    },
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn engine(cli: &Cli) -> anyhow::Result<Engine> {
    let spec = Arc::new(load_spec(cli.spec.as_deref())?);
    let store = match &cli.store {
        Some(p) => load_store(p)?,
        None => Store::default(),
    };
    Ok(Engine::with_store(spec, store, Ids::system()))
}

fn store_path(cli: &Cli) -> anyhow::Result<&Path> {
    cli.store.as_deref().context("this command needs --store or KGBB_STORE")
}

fn read_structured<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        let value: serde_json::Value = serde_yaml::from_str(&text)?;
        Ok(serde_json::from_value(value)?)
    }
}

/// Runs one command; errors are reported here so the exit status is the only result.
pub async fn run(cli: Cli) -> ExitCode {
    match dispatch(&cli).await {
        Ok(code) => code,
        Err(e) => {
            if cli.json {
                let diagnostics = e.downcast_ref::<SpecFailure>().map(|f| f.diagnostics.clone()).unwrap_or_default();
                print_json(&json!({ "error": e.to_string(), "diagnostics": diagnostics }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::FAILURE
        }
    }
}

async fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::ValidateSpec { file } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let diags = check_spec_document(&text);
            if cli.json {
                print_json(&diags);
            } else if diags.is_empty() {
                println!("{}: ok", file.display());
            } else {
                for d in &diags {
                    println!("{d}");
                }
            }
            Ok(if diags.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Import { csv, template, kgbb, source } => {
            let path = store_path(cli)?;
            let mut e = engine(cli)?;
            let report = import(&mut e, &cli.user, csv, template, kgbb.as_deref(), source.as_deref())?;
            save_store(path, e.store())?;
            if cli.json {
                print_json(&report);
            } else {
                for (row, unit) in &report.created {
                    println!("row {row}: created {unit}");
                }
                for d in &report.rejected {
                    println!("row {}: rejected [{}] {}", d.row, d.column, d.message);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { format, out } => {
            let e = engine(cli)?;
            let store = e.store();
            let text = match format {
                ExportFormat::Trig => export_rdf(store),
                ExportFormat::PgJson => serde_json::to_string_pretty(&export_pg(store))?,
                ExportFormat::Tables if out.as_os_str() == "-" => serde_json::to_string_pretty(&export_tables(store))?,
                ExportFormat::Tables => {
                    export_tables(store).write_dir(out)?;
                    return Ok(ExitCode::SUCCESS);
                }
            };
            if out.as_os_str() == "-" {
                std::io::stdout().write_all(text.as_bytes())?;
            } else {
                std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Query { question } => {
            let draft: QuestionDraft = read_structured(question)?;
            let mut e = engine(cli)?;
            let id = e.save_question(&draft, &Provenance::user(Upri::new(&cli.user)?))?;
            let answer = e.answer(&id)?;
            if cli.json {
                print_json(&answer);
            } else if answer.mode == AnswerMode::Boolean {
                println!("{}", answer.holds);
            } else {
                for u in &answer.units {
                    println!("{u}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Wizard { answers } => {
            let answers: WizardAnswers = read_structured(answers)?;
            let class = build_statement_kgbb(&answers)?;
            if cli.json {
                print_json(&class);
            } else {
                print!("{}", serde_yaml::to_string(&class)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SeedDemo => {
            let path = store_path(cli)?;
            let (e, _) = demo_engine()?;
            save_store(path, e.store())?;
            println!("{} units written to {}", e.store().units.len(), path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { port } => {
            let e = engine(cli)?;
            let state = crate::AppState::new(e, cli.store.clone());
            let listener = tokio::net::TcpListener::bind(("0.0.0.0", *port)).await?;
            tracing::info!("listening on {}", listener.local_addr()?);
            axum::serve(listener, crate::router(state))
                .with_graceful_shutdown(async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct ImportReport {
    pub created: Vec<(usize, Upri)>,
    pub rejected: Vec<RowDiagnostic>,
}

fn template_owner(spec: &Spec, template: &Upri) -> Option<Upri> {
    spec.instances.keys().find(|i| spec.statement_class(i).is_some_and(|c| c.import_template(template).is_some())).cloned()
}

/// Imports CSV rows; rows the engine refuses are reported alongside rows the template rejects.
pub fn import(e: &mut Engine, user: &str, csv: &Path, template: &str, kgbb: Option<&str>, source: Option<&str>) -> anyhow::Result<ImportReport> {
    let text = std::fs::read_to_string(csv).with_context(|| format!("reading {}", csv.display()))?;
    let template = Upri::new(template)?;
    let kgbb = match kgbb {
        Some(k) => Upri::new(k)?,
        None => match template_owner(e.spec(), &template) {
            Some(k) => k,
            None => bail!("no KGBB declares import template {template}"),
        },
    };
    let source = match source {
        Some(s) => Upri::new(s)?,
        None => Upri::new(format!("file:{}", csv.display()))?,
    };
    let batch = apply_import_template(e.store(), e.spec(), &kgbb, &template, &text, Provenance::user(Upri::new(user)?), source, &mut Ids::system())?;
    let mut report = ImportReport { created: Vec::new(), rejected: batch.rejected };
    for (row, req) in &batch.requests {
        match e.create(req, &batch.provenance) {
            Ok(c) => report.created.push((*row, c.unit)),
            Err(err) => report.rejected.push(RowDiagnostic { row: *row, column: String::new(), message: err.to_string() }),
        }
    }
    report.rejected.sort_by_key(|d| d.row);
    Ok(report)
}
