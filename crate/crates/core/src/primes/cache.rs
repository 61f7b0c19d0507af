//! On-disk prime table cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes   "DVPRIMES"
//! version  u32       1
//! limit    u64       sieve bound
//! count    u64       number of primes
//! digest   32 bytes  SHA-256 of the delta payload
//! payload  count x u64, p_1 - 0, p_2 - p_1, ...
//! ```
//!
//! The cache only saves sieving time. A loaded table is revalidated by
//! digest, ordering, Miller-Rabin on sampled entries and trial division on
//! sampled integers; any failure rejects the file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::sieve::is_prime_u64;
use super::{PrimeTable, PrimesError};

const MAGIC: &[u8; 8] = b"DVPRIMES";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 8 + 8 + 32;
const SAMPLES: u64 = 4096;

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.bin"))
}

pub fn encode(table: &PrimeTable) -> Vec<u8> {
    let mut payload = Vec::with_capacity(table.len() * 8);
    let mut prev = 0u64;
    for &p in table.primes() {
        payload.extend_from_slice(&(p - prev).to_le_bytes());
        prev = p;
    }
    let digest = Sha256::digest(&payload);
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.limit().to_le_bytes());
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    out.extend_from_slice(digest.as_slice());
    out.extend_from_slice(&payload);
    out
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

pub fn decode(bytes: &[u8]) -> Result<PrimeTable, PrimesError> {
    let reject = |why: &str| PrimesError::Cache(why.to_string());
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(reject("bad magic"));
    }
    if u32::from_le_bytes(bytes[8..12].try_into().unwrap()) != VERSION {
        return Err(reject("unsupported version"));
    }
    let limit = u64_at(bytes, 12);
    let count = u64_at(bytes, 20) as usize;
    let digest = &bytes[28..60];
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != count * 8 {
        return Err(reject("payload length does not match count"));
    }
    if Sha256::digest(payload).as_slice() != digest {
        return Err(reject("digest mismatch"));
    }
    let mut primes = Vec::with_capacity(count);
    let mut acc = 0u64;
    for k in 0..count {
        let delta = u64_at(payload, 8 * k);
        if delta == 0 {
            return Err(reject("primes not strictly increasing"));
        }
        acc = acc.checked_add(delta).ok_or_else(|| reject("overflow"))?;
        primes.push(acc);
    }
    if primes.last().is_some_and(|&p| p > limit) || limit < 2 {
        return Err(reject("entries beyond recorded limit"));
    }
    let table = PrimeTable::from_parts(primes, limit);
    revalidate(&table)?;
    Ok(table)
}

/// Spot checks that catch both composite entries and missing primes.
fn revalidate(table: &PrimeTable) -> Result<(), PrimesError> {
    let n = table.len() as u64;
    let step = (n / SAMPLES).max(1);
    for k in (0..n).step_by(step as usize).chain(n.saturating_sub(64)..n) {
        let p = table.primes()[k as usize];
        if !is_prime_u64(p) {
            return Err(PrimesError::Cache(format!("entry {p} is composite")));
        }
    }
    let stride = (table.limit() / SAMPLES).max(1);
    let samples = (2..=table.limit())
        .step_by(stride as usize)
        .flat_map(|s| s..s.saturating_add(8))
        .chain(2..table.limit().min(2000));
    for n in samples.filter(|&n| n <= table.limit()) {
        if table.contains(n) != is_prime_u64(n) {
            return Err(PrimesError::Cache(format!("sample {n} disagrees")));
        }
    }
    Ok(())
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial cache.
pub fn write_cache(path: &Path, table: &PrimeTable) -> Result<(), PrimesError> {
    let tmp = path.with_extension("bin.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(table))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<PrimeTable, PrimesError> {
    decode(&fs::read(path)?)
}

/// Loads `primes-<limit>.bin` from `dir` when it validates, otherwise sieves
/// and refreshes the cache. Cache write failures are not fatal.
pub fn load_or_sieve(dir: Option<&Path>, limit: u64, cap: u64) -> Result<PrimeTable, PrimesError> {
    let Some(dir) = dir else {
        return PrimeTable::sieve_with_cap(limit, cap);
    };
    let path = cache_path(dir, limit);
    if let Ok(table) = read_cache(&path) {
        if table.limit() == limit {
            return Ok(table);
        }
    }
    let table = PrimeTable::sieve_with_cap(limit, cap)?;
    if fs::create_dir_all(dir).is_ok() {
        let _ = write_cache(&path, &table);
    }
    Ok(table)
}
