//! Command implementations and output records behind the `symroof` binary.

pub mod commands;
pub mod figures;
pub mod parse;
pub mod record;

use std::fmt;

/// A verification check failed.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

/// Process exit code for an error: 1 for verification failures, 3 for I/O
/// errors and 2 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<VerificationFailed>() {
        1
    } else if err.chain().any(|e| e.is::<std::io::Error>()) {
        3
    } else {
        2
    }
}
