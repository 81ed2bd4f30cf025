//! Human-readable views of units and crosswalks to and from external formats.

mod access;
mod display;
mod import;
mod label;
mod mindmap;

pub use access::{apply_access_template, find_access_template, AccessOutput};
pub use display::{render_compound_display, DisplayDocument, RenderedSection, RenderedUnit};
pub use import::{apply_import_template, ImportBatch, RowDiagnostic};
pub use label::{
    display_input, display_resource, fill, render_category_label, render_dynamic_label, render_pipe_notation, render_unit_label,
    render_variant, statement_values,
};
pub use mindmap::{render_mind_map, MindMap, MindMapEdge, MindMapNode, NodeKind};

use crate::model::Upri;
use crate::spec::sentence::SentenceError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("placeholder {0} has no value")]
    MissingRequiredBinding(String),
    #[error("unknown KGBB {0}")]
    UnknownKgbb(Upri),
    #[error("unknown unit {0}")]
    UnknownUnit(Upri),
    #[error("{0} is not a statement unit")]
    NotAStatement(Upri),
    #[error("{0} is not a compound unit")]
    NotACompound(Upri),
    #[error("{0} has no label template")]
    NoLabelTemplate(Upri),
    #[error("unknown template {0}")]
    UnknownTemplate(Upri),
    #[error("template references unknown target {0}")]
    UnknownTarget(Upri),
    #[error("template {template} does not map required position {position}")]
    UnmappedRequiredPosition { template: Upri, position: Upri },
    #[error("template {template} does not belong to {kgbb}")]
    TemplateNotForClass { template: Upri, kgbb: Upri },
    #[error("bad term in graph pattern: {0}")]
    BadPatternTerm(String),
    #[error("input has no column {0}")]
    MissingColumn(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Sentence(#[from] SentenceError),
}
