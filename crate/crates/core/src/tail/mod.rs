//! Finite content of the uniform tail `r >= 8,600,001`: the boundary
//! inequalities at `v = 15.96` and `x = 533,000` with monotonicity witnesses,
//! the `D(M)` identity, the `h(t)` bounds, and a desk-scale run of the
//! Chinese-remainder composite block.

pub mod constants;
pub mod crt;

use serde::Serialize;
use thiserror::Error;

use crate::certificates::CertificateError;
use crate::numerics::{int, log_enclosure, Interval, NumericsError, Rational};
use crate::primes::PrimesError;

pub use constants::{verify_dm_identity, verify_h_monotone, verify_tail_constants, verify_two_primes_symbolic};
pub use crt::{
    block_artifact, build_crt_block, crt_reports, scan_gap_region, two_primes_in_p_2p, CrtBlock, GapScan,
    TwoPrimes, Witness, WitnessCase, DEFAULT_CRT_CAP, SCAN_CAP,
};

/// First `r` handled by the tail argument.
pub const TAIL_START: u64 = 8_600_001;

pub(crate) const SPLIT_NOTE: &str =
    "constants are checked at the true boundary values; the composite-block logic is run at desk-scale q";

#[derive(Debug, Error)]
pub enum TailError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} is below 13, where the residue cases degenerate")]
    TooSmall(u64),
    #[error("q = {q} exceeds the desk cap {cap}")]
    OverCap { q: u64, cap: u64 },
    #[error("tail parameters need r >= {TAIL_START}, got {0}")]
    BelowTail(u64),
    #[error("region up to 8P for q = {q} is beyond direct scanning")]
    RegionTooLarge { q: u64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// `v = log r` and `x = 0.99 r / log r` for one tail index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailParameters {
    pub r: u64,
    #[serde(skip)]
    pub v: Interval,
    #[serde(skip)]
    pub x: Interval,
}

impl TailParameters {
    pub fn at(r: u64, precision: &Rational) -> Result<Self, TailError> {
        if r < TAIL_START {
            return Err(TailError::BelowTail(r));
        }
        let v = log_enclosure(&int(r), precision)?;
        let x = Interval::point(crate::certificates::lit("0.99") * int(r)).div(&v)?;
        Ok(Self { r, v, x })
    }

    /// Number of the density sequence, `k = r + 1`.
    pub fn k(&self) -> u64 {
        self.r + 1
    }
}
