//! Command-line plumbing for tailforge: run configuration, per-diagram jobs,
//! a content-addressed result cache and the verification suite.

pub mod cache;
pub mod config;
pub mod run;
pub mod verify;
