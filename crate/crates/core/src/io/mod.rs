//! Text formats for networks and configurations, and report rendering.

pub mod report;
mod text;

pub use text::{parse_configuration, parse_tbn, serialize_configuration, serialize_tbn, tbn_warnings};
