//! Rigorous verifier for the finite claims behind the non-unimodality of the
//! density sequences `p -> d_k(p)`: exact density recurrences, symmetric
//! polynomial threshold certificates, outward-rounded logarithmic
//! inequalities, prime-record arithmetic and the Chinese-remainder composite
//! block construction.

pub mod certificates;
pub mod cli;
pub mod densities;
pub mod numerics;
pub mod oracle;
pub mod primes;
pub mod tail;
