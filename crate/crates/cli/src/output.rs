use std::path::{Path, PathBuf};

use serde::Serialize;

use rxnpack::dsl::{apply_directives_report, parse_model, Applied, DslError, ModelDocument};
use rxnpack::models::builtin;
use rxnpack::sim::io::{to_json_pretty, write_atomic};
use rxnpack::sim::RNG_NAME;

use crate::CliError;

/// Overrides the base of the default output directory.
pub const OUT_DIR_ENV: &str = "RXNPACK_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "rxnpack-out";
pub const METADATA_FILE: &str = "metadata.json";

pub fn out_dir(explicit: Option<&Path>, command: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let base = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
            base.join(command)
        }
    }
}

pub struct LoadedModel {
    pub source: String,
    pub document: ModelDocument,
}

/// Reads a model file, falling back to the built-in models by name.
pub fn load_model(spec: &str) -> Result<LoadedModel, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        let document = parse_model(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        return Ok(LoadedModel { source: spec.to_string(), document });
    }
    match builtin(spec) {
        Some(document) => Ok(LoadedModel { source: spec.to_string(), document }),
        None => Err(CliError::Input(format!("{spec}: no such file or built-in model"))),
    }
}

/// Runs the document's directives and rejects networks that fail validation.
pub fn build(model: &LoadedModel) -> Result<Applied, CliError> {
    let applied = apply_directives_report(&model.document).map_err(|e| match e {
        DslError::Template(_) => CliError::Compute(format!("{}: {e}", model.source)),
        _ => CliError::Input(format!("{}: {e}", model.source)),
    })?;
    let report = applied.network.validate();
    if !report.is_clean() {
        let lines: Vec<String> = report.findings.iter().map(|f| format!("{}: {}", f.subject, f.message)).collect();
        return Err(CliError::Input(format!("{} does not validate:\n  {}", model.source, lines.join("\n  "))));
    }
    Ok(applied)
}

#[derive(Debug, Serialize)]
pub struct ModelInfo {
    pub source: String,
    pub fingerprint: String,
}

/// Everything needed to re-run a command and identify its inputs.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    /// Complete command line with every default made explicit.
    pub command: String,
    pub seed: Option<u64>,
    pub rng: &'static str,
    pub model: Option<ModelInfo>,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
}

impl Metadata {
    pub fn new(args: &[String], seed: Option<u64>, model: Option<ModelInfo>) -> Self {
        let command = std::iter::once("rxnpack".to_string()).chain(args.iter().map(|a| quote(a))).collect::<Vec<_>>().join(" ");
        Self {
            tool: "rxnpack",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            rng: RNG_NAME,
            model,
            files: Vec::new(),
            result: None,
        }
    }
}

fn quote(arg: &str) -> String {
    if !arg.is_empty() && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_./:,=+".contains(c)) {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

/// Writes the files atomically, then the metadata listing them.
pub fn write_outputs(dir: &Path, files: &[(String, String)], mut meta: Metadata) -> Result<(), CliError> {
    for (name, contents) in files {
        write_file(&dir.join(name), contents)?;
        meta.files.push(name.clone());
    }
    write_file(&dir.join(METADATA_FILE), &to_json_pretty(&meta))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    write_atomic(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}
