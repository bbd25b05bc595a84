use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("argument must be positive")]
    ZeroArgument,

    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { base: u32, digit: u32 },

    #[error("empty digit list")]
    EmptyDigits,

    #[error("digit d = {d} out of range for base {base}")]
    InvalidDigit { base: u32, d: u32 },

    #[error("point (d={d}, u={u}, k={k}) invalid in base {base}: {reason}")]
    InvalidPoint {
        base: u32,
        d: u32,
        u: u32,
        k: u64,
        reason: &'static str,
    },

    #[error("sample size must be positive")]
    EmptySample,

    #[error(
        "walk from (d={d}, u=0, kappa={kappa}) exceeded {bound} steps: \
         possible cycle reached from a start vertex (implementation bug)"
    )]
    SafetyBound { d: u32, kappa: u64, bound: u64 },

    #[error("period lcm for base {base} exceeds the machine-word walk range")]
    PeriodOverflow { base: u32 },

    #[error("checkpoint {path}: {detail}")]
    Checkpoint { path: String, detail: String },

    #[error("shard request: {0}")]
    ShardRequest(String),

    #[error("internal consistency: {0}")]
    Inconsistent(String),

    #[error("checkpoint is for base {found}, expected base {expected}")]
    CheckpointBase { expected: u32, found: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
