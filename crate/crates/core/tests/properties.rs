use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use densverify::densities::{d_k, delta, ratio, ratio_bounds, threshold_check, DensityState, SymmetricState, Verdict};
use densverify::numerics::{log_enclosure, parse_decimal, ratio as frac, Interval, Rational};
use densverify::primes::{is_prime_u64, PrimeTable};
use densverify::tail::build_crt_block;

fn table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::sieve(2_000).unwrap())
}

fn f64_of(x: &Rational) -> f64 {
    x.to_f64().unwrap()
}

fn interval(a: i64, b: i64, den: i64) -> Interval {
    Interval::new(frac(a.min(b), den), frac(a.max(b), den)).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(-1_000_000_000i64..=1_000_000_000), rng.gen_range(1i64..=1_000_000))
}

fn random_interval(rng: &mut ChaCha8Rng) -> (Interval, Rational) {
    let (a, b) = (random_rational(rng), random_rational(rng));
    let iv = Interval::new(a.clone().min(b.clone()), a.max(b)).unwrap();
    let t = frac(rng.gen_range(0u32..=1000), 1000u32);
    let x = iv.lo() + (iv.hi() - iv.lo()) * t;
    (iv, x)
}

#[test]
fn enclosures_contain_reference_values() {
    let precision = frac(1, 1_000_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1095);
    for _ in 0..100_000 {
        let n: u64 = rng.gen_range(1..=u32::MAX as u64);
        let d: u64 = rng.gen_range(1..=u32::MAX as u64);
        let iv = log_enclosure(&frac(n, d), &precision).unwrap();
        let value = (n as f64).ln() - (d as f64).ln();
        let tol = 1e-14 * value.abs().max(1.0);
        assert!(iv.width() <= precision, "width at {n}/{d}");
        assert!(
            f64_of(iv.lo()) - tol <= value && value <= f64_of(iv.hi()) + tol,
            "ln({n}/{d}) = {value} outside {iv}"
        );

        let (x_iv, x) = random_interval(&mut rng);
        let (y_iv, y) = random_interval(&mut rng);
        assert!((&x_iv + &y_iv).contains(&(&x + &y)));
        assert!((&x_iv - &y_iv).contains(&(&x - &y)));
        assert!((&x_iv * &y_iv).contains(&(&x * &y)));
        assert!(x_iv.square().contains(&(&x * &x)));
        assert!((-&x_iv).contains(&-x.clone()));
        assert!(x_iv.rounded(rng.gen_range(1..80)).contains(&x));
        match x_iv.div(&y_iv) {
            Ok(q) => assert!(q.contains(&(&x / &y))),
            Err(_) => assert!(y_iv.contains_zero()),
        }
    }
}

#[test]
fn densities_sum_to_one() {
    let mut state = DensityState::new(100);
    for i in 0..=100 {
        if i > 0 {
            state.advance_in_place(table().prime(i).unwrap());
        }
        let total: Rational = state.deltas().iter().sum();
        assert_eq!(total, Rational::one(), "i = {i}");
    }
}

proptest! {
    #[test]
    fn refinement_stays_consistent(n in 1u64..1_000_000_000, d in 1u64..1_000_000) {
        let x = frac(n, d);
        let coarse = log_enclosure(&x, &frac(1, 1_000_000)).unwrap();
        let fine = log_enclosure(&x, &frac(1, 1_000_000_000_000i64)).unwrap();
        prop_assert!(fine.lo() <= coarse.hi() && coarse.lo() <= fine.hi());
        prop_assert!(fine.width() <= frac(1, 1_000_000_000_000i64));
    }

    #[test]
    fn decimals_round_trip(n in -10_000_000_000i64..10_000_000_000, k in 0u32..12) {
        let text = if k == 0 {
            n.to_string()
        } else {
            let digits = format!("{:0>width$}", n.unsigned_abs(), width = k as usize + 1);
            let (whole, tail) = digits.split_at(digits.len() - k as usize);
            format!("{}{whole}.{tail}", if n < 0 { "-" } else { "" })
        };
        let expected = Rational::new(BigInt::from(n), BigInt::from(10u64.pow(k)));
        prop_assert_eq!(parse_decimal(&text).unwrap(), expected);
    }

    #[test]
    fn interval_arithmetic_contains_point_results(
        a in -1000i64..1000, b in -1000i64..1000, c in 1i64..1000, d in 1i64..1000,
        s in 0u32..=16, t in 0u32..=16,
    ) {
        let x_iv = interval(a, b, 7);
        let y_iv = interval(c, d, 3);
        let x = x_iv.lo() + (x_iv.hi() - x_iv.lo()) * frac(s, 16);
        let y = y_iv.lo() + (y_iv.hi() - y_iv.lo()) * frac(t, 16);
        prop_assert!((&x_iv + &y_iv).contains(&(&x + &y)));
        prop_assert!((&x_iv - &y_iv).contains(&(&x - &y)));
        prop_assert!((&x_iv * &y_iv).contains(&(&x * &y)));
        prop_assert!(x_iv.div(&y_iv).unwrap().contains(&(&x / &y)));
        prop_assert!(x_iv.square().contains(&(&x * &x)));
        prop_assert!((-&x_iv).contains(&-x.clone()));
        for bits in [4u64, 20, 60] {
            prop_assert!(x_iv.rounded(bits).encloses(&x_iv));
        }
    }

    #[test]
    fn delta_paths_agree(i in 0usize..=60, m in 0usize..=60) {
        // `delta` fails on any disagreement between its two evaluation paths
        let m = m.min(i);
        let state = DensityState::through(table(), i, m).unwrap();
        prop_assert_eq!(&delta(m, i, table()).unwrap(), state.delta(m).unwrap());
    }

    #[test]
    fn ratio_lies_in_sandwich(r in 1usize..=20, extra in 0usize..=180) {
        let i = r + extra;
        let (lower, upper) = ratio_bounds(r, i, table()).unwrap();
        let exact = ratio(r, i, table()).unwrap();
        prop_assert!(lower <= exact && exact <= upper);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newton_inequalities_hold(n in 2usize..=150) {
        let row = SymmetricState::through(table(), n, n.min(25)).unwrap().row().to_vec();
        for k in 1..row.len() - 1 {
            // e_k^2 >= e_{k-1} e_{k+1} (1 + 1/k)(1 + 1/(n-k))
            let scale = frac(k as u64 + 1, k as u64) * frac((n - k) as u64 + 1, (n - k) as u64);
            prop_assert!(&row[k] * &row[k] >= &row[k - 1] * &row[k + 1] * scale);
        }
        for r in 1..row.len() - 1 {
            prop_assert!(&row[r - 1] / &row[r] < &row[r] / &row[r + 1]);
        }
    }

    #[test]
    fn threshold_matches_density_difference(r in 1usize..=12, extra in 1usize..=150) {
        let i = r + extra;
        let verdict = threshold_check(r, i, table()).unwrap();
        let now = d_k(r + 1, i, table()).unwrap();
        let later = d_k(r + 1, i + 1, table()).unwrap();
        let expected = Verdict::from_ordering(later.cmp(&now));
        prop_assert_eq!(verdict.verdict, expected);
    }
}

fn crt_prime() -> impl Strategy<Value = u64> {
    (13u64..200).prop_filter("prime", |&q| is_prime_u64(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn crt_block_invariants(q in crt_prime()) {
        let block = build_crt_block(q, table(), 200).unwrap();
        let primes: Vec<u64> = table().primes().iter().copied().take_while(|&p| p <= q).collect();
        let primorial: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
        prop_assert_eq!(&block.primorial, &primorial);
        prop_assert_eq!(block.q_minus, primes[primes.len() - 2]);
        prop_assert_eq!(block.block_len, 2 * block.q_minus - 1);
        prop_assert!(block.a < primorial);
        for (&p, &a_p) in &block.residues {
            prop_assert!(((&block.a + a_p) % p).is_zero(), "a != -a_p mod {}", p);
        }
        prop_assert_eq!(block.witnesses.len() as u64, block.block_len);
        prop_assert_eq!(&block.block_start, &block.element(1));
        let (two_p, four_p) = (&primorial * 2u32, &primorial * 4u32);
        for w in &block.witnesses {
            let n = block.element(w.m);
            prop_assert!(n > two_p && n < four_p);
            prop_assert!(w.prime <= q);
            prop_assert!((&n % w.prime).is_zero(), "m = {} not divisible by {}", w.m, w.prime);
        }
        prop_assert_eq!(block.block_end(), block.element(block.block_len));
    }
}
