//! Command-line frontend and HTTP service for the KGBB engine.

pub mod api;
pub mod cli;
pub mod persist;

pub use api::{router, AppState};
pub use cli::{run, Cli, Command, ExportFormat};
