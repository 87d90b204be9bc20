use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("block size mismatch: {left} vs {right} bytes")]
    BlockSizeMismatch { left: usize, right: usize },

    #[error("user index {user} out of range [1,{users}]")]
    UserOutOfRange { user: u32, users: u32 },

    #[error("file index {file} out of range [1,{files}]")]
    FileOutOfRange { file: u32, files: u32 },

    #[error("invalid subfile id: {0}")]
    InvalidSubfileId(String),

    #[error("file must be {expected} bytes, got {actual}")]
    WrongFileLength { expected: usize, actual: usize },

    #[error("file size of {file_bits} bits does not split evenly: need a positive multiple of {required_bits} bits")]
    IndivisibleFileSize { file_bits: u64, required_bits: u64 },

    #[error("missing subfiles for file {file}: {ids:?}")]
    MissingSubfiles { file: u32, ids: Vec<String> },

    #[error("scheme requires N=K (got N={n}, K={k})")]
    RequiresEqualFilesUsers { n: u32, k: u32 },

    #[error("scheme requires at least 2 users (got K={0})")]
    TooFewUsers(u32),

    #[error("scheme_kk requires distinct-file (permutation) demands (got {0:?})")]
    NonPermutationDemand(Vec<u32>),

    #[error("demand vector has {got} entries, expected {expected}")]
    DemandLengthMismatch { got: usize, expected: usize },

    #[error("cache integrity error: missing entry {0}")]
    MissingCacheEntry(String),

    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("no valid file size under {cap_bits} bits: need a positive multiple of {required_bits} bits")]
    NoValidFileSize { cap_bits: u64, required_bits: u64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
