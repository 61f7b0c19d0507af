//! Desk-scale run of the composite-block construction: residues `a_p` for
//! every prime `p <= q`, a Chinese-remainder solution `a`, the block
//! `a + 2P + 1, ..., a + 2P + 2q^- - 1` with a witness for each element, and
//! the average-gap scan of `(4P, 8P]` where it is small enough to sieve.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{TailError, SPLIT_NOTE};
use crate::certificates::{CertificateReport, Check};
use crate::numerics::rational::from_biguint;
use crate::numerics::{int, log_enclosure, Rational};
use crate::primes::{is_prime_u64, range_summary, PrimeTable};

/// Largest `q` accepted unless the caller raises it.
pub const DEFAULT_CRT_CAP: u64 = 101;
/// Largest `8P` scanned directly.
pub const SCAN_CAP: u64 = 2_000_000_000;

fn decimal<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Which branch of the residue analysis supplies the witness for `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    /// `1 <= m <= q^- - 2`: a prime divisor of `q^- - m`.
    BelowPredecessor,
    /// `m = q^- - 1`: the prime `q^-`.
    PredecessorMinusOne,
    /// `m = q^-`: the prime 2.
    Predecessor,
    /// `m = q^- + 1`: the prime `q`.
    Successor,
    /// `q^- + 2 <= m <= 2q^- - 1`: a prime divisor of `m - q^-`.
    AbovePredecessor,
}

impl WitnessCase {
    fn label(self) -> &'static str {
        match self {
            WitnessCase::BelowPredecessor => "prime divisor of q^- - m",
            WitnessCase::PredecessorMinusOne => "p = q^-",
            WitnessCase::Predecessor => "p = 2",
            WitnessCase::Successor => "p = q",
            WitnessCase::AbovePredecessor => "prime divisor of m - q^-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub m: u64,
    pub case: WitnessCase,
    pub prime: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrtBlock {
    pub q: u64,
    pub q_minus: u64,
    #[serde(serialize_with = "decimal")]
    pub primorial: BigUint,
    /// `a_p` for every prime `p <= q`.
    pub residues: BTreeMap<u64, u64>,
    #[serde(serialize_with = "decimal")]
    pub a: BigUint,
    #[serde(serialize_with = "decimal")]
    pub block_start: BigUint,
    pub block_len: u64,
    pub witnesses: Vec<Witness>,
}

impl CrtBlock {
    pub fn block_end(&self) -> BigUint {
        &self.block_start + self.block_len - 1u32
    }

    pub fn element(&self, m: u64) -> BigUint {
        &self.a + &self.primorial * 2u32 + m
    }

    fn multiple_of_primorial(&self, k: u32) -> BigUint {
        &self.primorial * k
    }
}

/// Primes of `(4P, 8P]`: count, ends and smallest gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapScan {
    pub lo: u64,
    pub hi: u64,
    pub prime_count: u64,
    pub first: u64,
    pub last: u64,
    pub min_gap: u64,
    /// Lower prime of the leftmost smallest gap.
    pub min_gap_at: u64,
}

/// Evidence that `(P, 2P]` holds two primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoPrimes {
    /// Every prime of the interval was counted.
    Counted(u64),
    /// The first two primes above `P`.
    Found([u64; 2]),
    /// Too large for direct search; the symbolic bound at `log P > 20` applies.
    Symbolic,
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..).find(|d| n.is_multiple_of(*d) || d * d > n).filter(|d| n.is_multiple_of(*d)).unwrap_or(n)
}

fn classify(m: u64, q: u64, q_minus: u64) -> Witness {
    let (case, prime) = if m + 2 <= q_minus {
        (WitnessCase::BelowPredecessor, smallest_prime_factor(q_minus - m))
    } else if m + 1 == q_minus {
        (WitnessCase::PredecessorMinusOne, q_minus)
    } else if m == q_minus {
        (WitnessCase::Predecessor, 2)
    } else if m == q_minus + 1 {
        (WitnessCase::Successor, q)
    } else {
        (WitnessCase::AbovePredecessor, smallest_prime_factor(m - q_minus))
    };
    Witness { m, case, prime }
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    let g = (x as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(g.gcd, 1, "moduli must be coprime");
    g.x.rem_euclid(p as i128) as u64
}

fn rem(n: &BigUint, p: u64) -> u64 {
    (n % p).to_u64().expect("remainder below a u64 modulus")
}

/// Incremental CRT over distinct primes; returns the representative in
/// `[0, prod p)` and the product.
fn solve_crt(congruences: &[(u64, u64)]) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut modulus = BigUint::one();
    for &(p, target) in congruences {
        let current = rem(&a, p);
        let inv = mod_inverse(rem(&modulus, p), p);
        let k = ((target + p - current) % p) as u128 * inv as u128 % p as u128;
        a += &modulus * k as u64;
        modulus *= p;
    }
    (a, modulus)
}

pub fn build_crt_block(q: u64, table: &PrimeTable, cap: u64) -> Result<CrtBlock, TailError> {
    if q > cap {
        return Err(TailError::OverCap { q, cap });
    }
    if !is_prime_u64(q) {
        return Err(TailError::NotPrime(q));
    }
    if q < 13 {
        return Err(TailError::TooSmall(q));
    }
    crate::certificates::require_sieve("the composite block", q, table.limit())?;
    let idx = table.index_of(q).ok_or(TailError::NotPrime(q))?;
    let q_minus = table.prime(idx - 1)?;

    let primes: Vec<u64> = table.primes()[..idx].to_vec();
    let residues: BTreeMap<u64, u64> = primes
        .iter()
        .map(|&p| {
            let a_p = if p < q_minus {
                q_minus % p
            } else if p == q_minus {
                q_minus - 1
            } else {
                (q_minus + 1) % q
            };
            (p, a_p)
        })
        .collect();
    let congruences: Vec<(u64, u64)> = residues.iter().map(|(&p, &a_p)| (p, (p - a_p) % p)).collect();
    let (a, primorial) = solve_crt(&congruences);
    assert_eq!(primorial, table.primorial(q)?, "CRT modulus is the primorial");

    let block_len = 2 * q_minus - 1;
    let witnesses = (1..=block_len).map(|m| classify(m, q, q_minus)).collect();
    let block_start = &a + &primorial * 2u32 + 1u32;
    Ok(CrtBlock {
        q,
        q_minus,
        primorial,
        residues,
        a,
        block_start,
        block_len,
        witnesses,
    })
}

/// Primes of `(4P, 8P]`, when `8P <= SCAN_CAP`.
pub fn scan_gap_region(block: &CrtBlock) -> Result<GapScan, TailError> {
    let too_large = || TailError::RegionTooLarge { q: block.q };
    let hi = block.multiple_of_primorial(8).to_u64().filter(|&h| h <= SCAN_CAP).ok_or_else(too_large)?;
    let lo = hi / 2;
    let s = range_summary(lo + 1, hi + 1);
    match (s.first, s.last, s.min_gap) {
        (Some(first), Some(last), Some((min_gap, min_gap_at))) => Ok(GapScan {
            lo,
            hi,
            prime_count: s.count,
            first,
            last,
            min_gap,
            min_gap_at,
        }),
        _ => Err(too_large()),
    }
}

pub fn two_primes_in_p_2p(block: &CrtBlock) -> TwoPrimes {
    let Some(p) = block.primorial.to_u64() else {
        return TwoPrimes::Symbolic;
    };
    let Some(two_p) = p.checked_mul(2) else {
        return TwoPrimes::Symbolic;
    };
    if two_p <= SCAN_CAP {
        return TwoPrimes::Counted(range_summary(p + 1, two_p + 1).count);
    }
    let mut found = (p + 1..=two_p).filter(|&n| is_prime_u64(n));
    match (found.next(), found.next()) {
        (Some(s1), Some(s2)) => TwoPrimes::Found([s1, s2]),
        _ => TwoPrimes::Counted(0),
    }
}

/// Neighbouring primes of the block and the prime before the lower one,
/// when `4P` fits in 64 bits.
fn surrounding_primes(block: &CrtBlock) -> Option<(u64, u64, u64)> {
    block.multiple_of_primorial(4).to_u64()?;
    let start = block.block_start.to_u64()?;
    let end = block.block_end().to_u64()?;
    let before = (2..start).rev().find(|&n| is_prime_u64(n))?;
    let after = (end + 1..).find(|&n| is_prime_u64(n))?;
    let earlier = (2..before).rev().find(|&n| is_prime_u64(n))?;
    Some((earlier, before, after))
}

fn big(n: &BigUint) -> Rational {
    from_biguint(n)
}

fn block_report(block: &CrtBlock) -> (CertificateReport, Option<u64>) {
    let q = block.q;
    let qm = block.q_minus;
    let p = &block.primorial;
    let mut rep = CertificateReport::new(
        format!("crt.q{q}.block"),
        format!("composite block at q = {q}, q^- = {qm}: {} consecutive composites in (2P, 4P)", block.block_len),
    );
    rep.check(Check::equal("block length 2 q^- - 1", block.block_len, 2 * qm - 1));
    let solved = block
        .residues
        .iter()
        .filter(|(&pr, &a_p)| (rem(&block.a, pr) + a_p).is_multiple_of(pr))
        .count() as u64;
    rep.check(Check::equal("primes p <= q with a = -a_p mod p", solved, block.residues.len() as u64));
    rep.check(Check::less("a < P", big(&block.a), big(p)));

    let mut congruent = 0u64;
    for w in &block.witnesses {
        let a_p = block.residues[&w.prime];
        if (w.m % w.prime + w.prime - a_p).is_multiple_of(w.prime) {
            congruent += 1;
        }
        rep.check(Check::equal(
            format!("m = {}: (a + 2P + m) mod {}  ({})", w.m, w.prime, w.case.label()),
            rem(&block.element(w.m), w.prime),
            0u64,
        ));
    }
    rep.check(Check::equal("m with m = a_p mod p for its witness", congruent, block.block_len));
    let independent = (1..=block.block_len)
        .filter(|&m| {
            let n = block.element(m);
            block.residues.keys().any(|&pr| rem(&n, pr) == 0)
        })
        .count() as u64;
    rep.check(Check::equal("elements with a prime factor <= q by trial division", independent, block.block_len));
    rep.check(Check::greater("a + 2P + 1 > q, so every element is composite", big(&block.block_start), int(q)));

    let two_p = big(&block.multiple_of_primorial(2));
    let four_p = big(&block.multiple_of_primorial(4));
    rep.check(Check::greater("a + 2P + 1 > 2P", big(&block.block_start), &two_p));
    rep.check(Check::less("a + 2P + 2q^- - 1 < 4P", big(&block.block_end()), &four_p));
    rep.check(Check::greater("P >= 2 q^- q", big(p), int(2 * qm * q - 1)));

    let mut g_minus = None;
    match surrounding_primes(block) {
        Some((earlier, before, after)) => {
            let g = after - before;
            g_minus = Some(g);
            rep.check(Check::greater(format!("G_- = {after} - {before} >= 2 q^-"), g, 2 * qm - 1));
            rep.check(Check::greater("prime before the lower end of G_- exceeds P", earlier, big(p)));
        }
        None => {
            rep.note("4P exceeds 64 bits: G_- >= 2 q^- follows from the composite block alone");
        }
    }
    rep.note(SPLIT_NOTE);
    (rep, g_minus)
}

fn scan_report(block: &CrtBlock, scan: &GapScan, g_minus: Option<u64>) -> CertificateReport {
    let mut rep = CertificateReport::new(
        format!("crt.q{}.scan", block.q),
        format!("smaller later gap in (4P, 8P] = ({}, {}]", scan.lo, scan.hi),
    );
    let n = scan.prime_count;
    rep.check(Check::greater("N >= 2", n, 1u64));
    rep.check(Check::greater("s_1 > 4P", scan.first, scan.lo));
    rep.check(Check::less("s_N <= 8P", scan.last, scan.hi + 1));
    let spread = scan.last - scan.first;
    rep.check(Check::less("G_+ (N - 1) <= s_N - s_1", scan.min_gap * (n - 1), spread + 1));
    rep.check(Check::less("s_N - s_1 < 4P", spread, scan.lo));
    rep.check(Check::less(
        format!("G_+ = {} < 4P/(N - 1)", scan.min_gap),
        scan.min_gap,
        int(scan.lo) / int(n - 1),
    ));
    rep.note(format!("N = {n}, G_+ = {} at {}", scan.min_gap, scan.min_gap_at));
    rep.note("the scan covers the whole interval, so adjacent primes in it are consecutive primes");
    if let Some(g) = g_minus {
        rep.note(format!(
            "informational: G_+ {} G_- ({} vs {g}); only needed for large q",
            if scan.min_gap < g { "<" } else { ">=" },
            scan.min_gap
        ));
    }
    rep.note(SPLIT_NOTE);
    rep
}

fn two_primes_report(block: &CrtBlock, evidence: TwoPrimes, precision: &Rational) -> CertificateReport {
    let mut rep = CertificateReport::new(
        format!("crt.q{}.two-primes", block.q),
        format!("at least two primes in (P, 2P] at q = {}", block.q),
    );
    let p = big(&block.primorial);
    match evidence {
        TwoPrimes::Counted(c) => {
            rep.check(Check::greater(format!("primes in (P, 2P] = {c} >= 2"), c, 1u64));
        }
        TwoPrimes::Found([s1, s2]) => {
            rep.check(Check::greater("first prime above P", s1, &p));
            rep.check(Check::less("second prime above P is at most 2P", s2, &p * int(2) + int(1)));
            rep.check(Check::less("the two primes differ", s1, s2));
            rep.note("primality by deterministic Miller-Rabin for 64-bit integers");
        }
        TwoPrimes::Symbolic => match log_enclosure(&p, precision) {
            Ok(l) => {
                rep.check(Check::greater("log P > 20", &l, int(20)));
                rep.note("with log P > 20 the symbolic bound of tail.two-primes applies");
            }
            Err(e) => {
                rep.failed_step("log P", e);
            }
        },
    }
    rep.note(SPLIT_NOTE);
    rep
}

/// Block, two-primes and (for `8P <= SCAN_CAP`) scan claims for one `q`.
pub fn crt_reports(q: u64, table: &PrimeTable, cap: u64, precision: &Rational) -> Result<(CrtBlock, Vec<CertificateReport>), TailError> {
    let block = build_crt_block(q, table, cap)?;
    let (mut block_rep, g_minus) = block_report(&block);
    let mut reports = Vec::new();
    match scan_gap_region(&block) {
        Ok(scan) => reports.push(scan_report(&block, &scan, g_minus)),
        Err(TailError::RegionTooLarge { .. }) => {
            block_rep.note("scan of (4P, 8P] skipped: 8P is beyond direct scanning");
        }
        Err(e) => return Err(e),
    }
    reports.push(two_primes_report(&block, two_primes_in_p_2p(&block), precision));
    reports.insert(0, block_rep);
    Ok((block, reports))
}

/// Plain-text listing of the block with one witness per element.
pub fn block_artifact(block: &CrtBlock) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# composite block, q = {}, q^- = {}", block.q, block.q_minus);
    let _ = writeln!(out, "# P = {}", block.primorial);
    let _ = writeln!(out, "# a = {}", block.a);
    let _ = writeln!(out, "# m\tvalue\twitness\tcase");
    for w in &block.witnesses {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", w.m, block.element(w.m), w.prime, w.case.label());
    }
    out
}
