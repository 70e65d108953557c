//! Document formats and command implementations behind the `iptree` binary.

pub mod commands;
pub mod doc;
pub mod error;
pub mod format;
