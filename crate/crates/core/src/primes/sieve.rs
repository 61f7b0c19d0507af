//! Segmented odd-only sieve of Eratosthenes and a parallel range summary.

use rayon::prelude::*;

/// Odd numbers covered by one segment.
const SEGMENT_ODDS: usize = 1 << 18;

/// Span of integers handed to one rayon task in [`range_summary`].
const CHUNK_SPAN: u64 = 1 << 24;

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

/// Odd primes `<= bound` by a plain sieve.
fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Calls `f` on every prime in `[lo, hi)`, in increasing order.
pub fn for_each_prime_in<F: FnMut(u64)>(lo: u64, hi: u64, mut f: F) {
    if hi <= lo {
        return;
    }
    if lo <= 2 && 2 < hi {
        f(2);
    }
    let mut seg_lo = lo.max(3) | 1;
    if seg_lo >= hi {
        return;
    }
    let base = odd_primes_up_to(isqrt(hi - 1));
    let mut candidate = vec![true; SEGMENT_ODDS];
    let span = 2 * SEGMENT_ODDS as u64;
    while seg_lo < hi {
        let seg_hi = seg_lo.saturating_add(span).min(hi);
        let count = (seg_hi - seg_lo).div_ceil(2) as usize;
        candidate[..count].fill(true);
        for &p in &base {
            let square = p * p;
            if square >= seg_hi {
                break;
            }
            let mut m = square.max(seg_lo.div_ceil(p) * p);
            if m % 2 == 0 {
                m += p;
            }
            let mut idx = ((m - seg_lo) / 2) as usize;
            while idx < count {
                candidate[idx] = false;
                idx += p as usize;
            }
        }
        for (j, _) in candidate[..count].iter().enumerate().filter(|(_, c)| **c) {
            f(seg_lo + 2 * j as u64);
        }
        seg_lo = seg_hi;
    }
}

/// Count, endpoints and smallest internal gap of the primes in a range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeSummary {
    pub count: u64,
    pub first: Option<u64>,
    pub last: Option<u64>,
    /// Smallest difference between consecutive primes of the range, with the
    /// lower prime of the first such pair.
    pub min_gap: Option<(u64, u64)>,
}

impl RangeSummary {
    fn empty() -> Self {
        Self {
            count: 0,
            first: None,
            last: None,
            min_gap: None,
        }
    }

    fn of_range(lo: u64, hi: u64) -> Self {
        let mut s = Self::empty();
        for_each_prime_in(lo, hi, |p| {
            if let Some(prev) = s.last {
                let gap = p - prev;
                if s.min_gap.is_none_or(|(g, _)| gap < g) {
                    s.min_gap = Some((gap, prev));
                }
            } else {
                s.first = Some(p);
            }
            s.last = Some(p);
            s.count += 1;
        });
        s
    }

    /// Concatenation of two adjacent ranges, `self` on the left. The gap that
    /// straddles the boundary is stitched in; ties keep the leftmost pair.
    fn merge(self, right: Self) -> Self {
        let mut min_gap = self.min_gap;
        let mut consider = |cand: Option<(u64, u64)>| {
            if let Some((g, at)) = cand {
                if min_gap.is_none_or(|(best, _)| g < best) {
                    min_gap = Some((g, at));
                }
            }
        };
        if let (Some(l), Some(f)) = (self.last, right.first) {
            consider(Some((f - l, l)));
        }
        consider(right.min_gap);
        Self {
            count: self.count + right.count,
            first: self.first.or(right.first),
            last: right.last.or(self.last),
            min_gap,
        }
    }
}

/// Summary of the primes in `[lo, hi)`, computed over independent chunks in
/// parallel and merged left to right.
pub fn range_summary(lo: u64, hi: u64) -> RangeSummary {
    if hi <= lo {
        return RangeSummary::empty();
    }
    let chunks: Vec<(u64, u64)> = (0..)
        .map(|k| lo.saturating_add(k * CHUNK_SPAN))
        .take_while(|&s| s < hi)
        .map(|s| (s, s.saturating_add(CHUNK_SPAN).min(hi)))
        .collect();
    chunks
        .par_iter()
        .map(|&(a, b)| RangeSummary::of_range(a, b))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(RangeSummary::empty(), RangeSummary::merge)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality by trial division; only meant for spot checks.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(lo: u64, hi: u64) -> Vec<u64> {
        let mut v = Vec::new();
        for_each_prime_in(lo, hi, |p| v.push(p));
        v
    }

    #[test]
    fn small_ranges() {
        assert_eq!(collect(0, 21), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(collect(2, 3), vec![2]);
        assert_eq!(collect(14, 17), Vec::<u64>::new());
        assert_eq!(collect(24, 30), vec![29]);
        assert_eq!(collect(9, 9), Vec::<u64>::new());
    }

    #[test]
    fn segmented_matches_trial_division() {
        let lo = 1_000_000 - 1234;
        let hi = lo + 3 * 2 * SEGMENT_ODDS as u64 + 17;
        let got = collect(lo, hi);
        let want: Vec<u64> = (lo..hi).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn summary_merge_stitches_boundaries() {
        let whole = RangeSummary::of_range(120_121, 240_241);
        let split = RangeSummary::of_range(120_121, 180_000).merge(RangeSummary::of_range(180_000, 240_241));
        assert_eq!(whole, split);
        assert_eq!(range_summary(120_121, 240_241), whole);
        assert_eq!(whole.min_gap.unwrap().0, 2);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), is_prime_trial(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn isqrt_exact() {
        for n in [0u64, 1, 3, 4, 15, 16, 17, 1 << 40, u64::MAX] {
            let r = isqrt(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        }
    }
}
