//! Re-derivation of the finite certificates: the constants `B` and `C`, the
//! small-case table, the two range certificates and the record-gap
//! arithmetic.

pub mod constants;
pub mod ranges;
pub mod records;
pub mod report;
pub mod table1;

use thiserror::Error;

use crate::densities::DensityError;
use crate::numerics::{parse_decimal, NumericsError, Rational};
use crate::primes::PrimesError;

pub use constants::{b_enclosure, c_partial_sum, enclose_c, verify_constants, ConstantEnclosure, ConstantName};
pub use ranges::{verify_range, RangeSpec};
pub use records::{nth_prime_upper_bound, record_inputs, verify_records, RecordInput, RecordName};
pub use report::{CertificateReport, Check, Relation, Value};
pub use table1::{verify_table1, TableRow, TABLE1};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("{what} needs primes up to {needed}, but the sieve stops at {limit}")]
    InsufficientSieve { what: &'static str, needed: u64, limit: u64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// A displayed decimal taken at face value.
pub(crate) fn lit(text: &str) -> Rational {
    parse_decimal(text).unwrap_or_else(|e| panic!("bad built-in literal {text}: {e}"))
}

pub(crate) fn require_sieve(what: &'static str, needed: u64, limit: u64) -> Result<(), CertificateError> {
    if limit < needed {
        Err(CertificateError::InsufficientSieve { what, needed, limit })
    } else {
        Ok(())
    }
}
