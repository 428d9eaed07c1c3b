//! File formats, report writers and parallel sweeps for `canonical-growth`,
//! plus the `cangrowth` command-line front end.

pub mod error;
pub mod io;
pub mod report;
pub mod sweep;

pub use error::{Result, ToolError};
