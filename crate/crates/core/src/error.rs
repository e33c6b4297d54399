use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("spoof bases must be nonzero")]
    ZeroBase,
    #[error("spoof exponents must be at least 1")]
    ZeroExponent,
    #[error("base {0} is below 2")]
    BaseBelowTwo(String),
    #[error("kappa needs at least one base")]
    EmptyBases,
    #[error("prefix bases must be sorted nondecreasing")]
    UnsortedPrefix,
    #[error("prefix has {len} bases but the target is {target}")]
    PrefixTooLong { len: usize, target: usize },
    #[error("factor count r = {0} is outside the supported range 2..=63")]
    UnsupportedR(usize),
    #[error("k = {k} is outside [{min}, {max}]")]
    KOutOfRange { k: u64, min: u64, max: u64 },
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("{a} is not a unit modulo {m}")]
    NotCoprime { a: String, m: String },
    #[error("malformed family descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("brute force over r = {r}, cap = {cap} exceeds the work limit ({reason})")]
    WorkLimit { r: usize, cap: u64, reason: String },
}
