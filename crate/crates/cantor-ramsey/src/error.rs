use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word of length {len} exceeds the cap of {cap} bits")]
    CapExceeded { len: usize, cap: usize },

    #[error("malformed literal: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A checked input invariant does not hold; `clause` names it.
    #[error("precondition ({clause}) violated: {detail}")]
    Precondition { clause: String, detail: String },

    /// Reached only if the implementation itself is wrong.
    #[error("internal defect: {0}")]
    Defect(String),

    #[error("H not dense near prefix {prefix}: no member found within {bound} candidates")]
    SearchExhausted { prefix: String, bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
