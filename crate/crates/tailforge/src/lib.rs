//! Exact invariants of framed link diagrams: Kauffman brackets, colored Jones
//! polynomials through Temperley-Lieb cabling, B-state analysis, stable tails
//! and Khovanov homology over the rationals.

pub mod algebra;
pub mod bstate;
pub mod corpus;
pub mod diagram;
pub mod jones;
pub mod khovanov;
pub mod tl;

mod planar;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
