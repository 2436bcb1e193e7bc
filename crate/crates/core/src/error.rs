use thiserror::Error;

use crate::subset::Subset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid source spec: {field} {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("invalid rate tuple: {0}")]
    InvalidTuple(String),

    #[error("file index {0} out of range 1..=3")]
    FileIndex(u64),

    #[error("{what} = {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: String,
        lo: String,
        hi: String,
    },

    #[error("{sublibrary} budget {requested} bits is not representable; nearest representable: {below} or {above}")]
    OffGrid {
        sublibrary: &'static str,
        requested: String,
        below: String,
        above: String,
    },

    #[error("gray-wyner decode of X{file} failed at W{subset}: {reason}")]
    GwDecode {
        file: u8,
        subset: Subset,
        reason: String,
    },

    #[error("malformed unit: {0}")]
    MalformedUnit(String),

    #[error("unresolvable: {0}")]
    Unresolvable(String),

    #[error("cache/codeword mismatch: {0}")]
    Mismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}
