//! Loading specifications and persisting the store as a semantic-tables bundle.

use std::fmt;
use std::path::Path;

use anyhow::Context;
use kgbb_core::backends::{export_tables, import_tables, SemanticTables};
use kgbb_core::fixtures::DEMO_SPEC;
use kgbb_core::spec::{Diagnostic, Spec};
use kgbb_core::Store;

/// A specification that did not load, with its diagnostics.
#[derive(Debug)]
pub struct SpecFailure {
    pub source: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for SpecFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is not a valid specification", self.source)?;
        for d in &self.diagnostics {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SpecFailure {}

/// Loads the specification at `path`, or the bundled demo specification.
pub fn load_spec(path: Option<&Path>) -> anyhow::Result<Spec> {
    let (source, text) = match path {
        Some(p) => (p.display().to_string(), std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => ("bundled demo specification".to_string(), DEMO_SPEC.to_string()),
    };
    Spec::from_yaml(&text).map_err(|e| SpecFailure { source, diagnostics: e.diagnostics() }.into())
}

/// Reads a store file; a missing file is an empty store.
pub fn load_store(path: &Path) -> anyhow::Result<Store> {
    if !path.exists() {
        return Ok(Store::default());
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let bundle: SemanticTables = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    import_tables(&bundle).with_context(|| format!("loading {}", path.display()))
}

/// Writes the store through a temporary file so a crash never leaves a partial store.
pub fn save_store(path: &Path, store: &Store) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(&export_tables(store))?;
    let tmp = path.with_extension("tmp");
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}
