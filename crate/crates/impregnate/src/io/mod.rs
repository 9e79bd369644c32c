//! Configuration, artifact writing, and plotting.

pub mod config;
pub mod output;
pub mod svg;

pub use config::{parse_config, RunConfig, VALID_KEYS};
pub use output::{check, execute, ExecuteOptions, RunReport};
pub use svg::render_svg;
