//! The eight acceptance criteria, each checked against the library and
//! against an oracle written here without the library's code paths. One
//! PASS/FAIL line per criterion is written straight to stderr so it shows up
//! in the captured test log.

use std::io::Write as _;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use densverify::certificates::constants::{C_CUTOFF, C_HI, C_LO};
use densverify::certificates::records::RECORD_SIEVE;
use densverify::certificates::{
    enclose_c, verify_constants, verify_range, verify_records, verify_table1, CertificateReport, Check, RangeSpec,
    Relation, Value, TABLE1,
};
use densverify::cli::{oracle_reports, tail_reports, CRT_DEMO_QS};
use densverify::densities::{delta, threshold_sweep};
use densverify::numerics::{default_precision, Interval};
use densverify::primes::PrimeTable;
use densverify::tail::{crt_reports, DEFAULT_CRT_CAP};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reports: &[CertificateReport]) -> Outcome {
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(format!(
            "{} failed at {:?}",
            r.claim_id,
            r.first_failure().map(|c| c.label.clone())
        )),
        None => Ok(()),
    }
}

fn strict_margins(reports: &[CertificateReport]) -> Outcome {
    for r in reports {
        for c in &r.checks {
            if c.relation != Relation::Equal && !c.margin().is_positive() {
                return Err(format!("{}: `{}` has margin {}", r.claim_id, c.label, c.margin()));
            }
        }
    }
    Ok(())
}

fn find<'a>(reports: &'a [CertificateReport], id: &str) -> Result<&'a CertificateReport, String> {
    reports.iter().find(|r| r.claim_id == id).ok_or_else(|| format!("missing claim {id}"))
}

fn check_by_label<'a>(report: &'a CertificateReport, prefix: &str) -> Result<&'a Check, String> {
    report
        .checks
        .iter()
        .find(|c| c.label.starts_with(prefix))
        .ok_or_else(|| format!("{}: no check labelled `{prefix}`", report.claim_id))
}

fn exact(v: &Value) -> Result<&BigRational, String> {
    match v {
        Value::Exact(x) => Ok(x),
        Value::Enclosure(iv) => Err(format!("expected an exact value, got {iv}")),
    }
}

fn enclosure(v: &Value) -> Result<&Interval, String> {
    match v {
        Value::Enclosure(iv) => Ok(iv),
        Value::Exact(x) => Err(format!("expected an enclosure, got {x}")),
    }
}

/// Runs `f`, adding its wall time to `clock`. Only library work counts
/// against a criterion's runtime budget.
fn timed<T>(clock: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *clock += start.elapsed();
    out
}

// ---- independent oracle ----

fn oracle_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn dec(text: &str) -> BigRational {
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits: BigInt = format!("{whole}{frac}").parse().unwrap();
    BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
}

fn weight_sum<'a>(primes: impl IntoIterator<Item = &'a u64>) -> BigRational {
    primes.into_iter().fold(BigRational::zero(), |acc, &p| acc + q(1, p as i64 - 1))
}

/// Elementary symmetric values `e_0..=e_r` of `1/(p - 1)` over `primes`.
fn symmetric_row(primes: &[u64], r: usize) -> Vec<BigRational> {
    let mut e = vec![BigRational::zero(); r + 1];
    e[0] = BigRational::one();
    for &p in primes {
        let w = q(1, p as i64 - 1);
        for m in (1..=r).rev() {
            let add = &e[m - 1] * &w;
            e[m] += add;
        }
    }
    e
}

fn f64_ln_in(iv: &Interval, value: f64, tol: f64) -> bool {
    let lo = iv.lo().to_f64().unwrap();
    let hi = iv.hi().to_f64().unwrap();
    lo - tol <= value && value <= hi + tol
}

fn is_prime_by_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// ---- criteria ----

fn table1(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let reports = timed(clock, || verify_table1(table)).map_err(|e| e.to_string())?;
    all_pass(&reports)?;
    let literal_checks = reports
        .iter()
        .filter(|r| !r.claim_id.ends_with(".order"))
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.label.starts_with("R_") && c.label.contains(" < ") != c.label.contains(" > "))
        .filter(|c| !c.label.starts_with("r /"))
        .filter(|c| matches!(c.rhs, Value::Exact(_)) && c.label.split(' ').count() == 3)
        .count();
    ensure(literal_checks == 34, || format!("{literal_checks} literal comparisons, expected 34"))?;
    let orders = reports.iter().filter(|r| r.claim_id.ends_with(".order") && r.passed()).count();
    ensure(orders == 17, || format!("{orders} ordering claims, expected 17"))?;

    let primes = oracle_primes(1153);
    for row in TABLE1.iter() {
        for (p, g, literal, descent) in [(row.a, row.g, row.descent_literal, true), (row.b, row.h, row.ascent_literal, false)] {
            let i = primes.iter().position(|&x| x == p).unwrap() + 1;
            ensure(primes[i] - p == g, || format!("gap after {p} is not {g}"))?;
            let e = symmetric_row(&primes[..i - 1], row.r);
            let ratio = &e[row.r - 1] / &e[row.r];
            let lit = dec(literal);
            let threshold = q(g as i64 + 1, 1);
            let ok = if descent {
                ratio < lit && lit < threshold
            } else {
                ratio > lit && lit > threshold
            };
            ensure(ok, || format!("oracle disagrees at r = {}, p = {p}", row.r))?;
            let kind = if descent { "descent" } else { "ascent" };
            let rep = find(&reports, &format!("table1.r{}.{kind}", row.r))?;
            let lib = exact(&check_by_label(rep, &format!("R_{}({p}^-)", row.r))?.lhs)?;
            ensure(*lib == ratio, || format!("library ratio differs at r = {}, p = {p}", row.r))?;
        }
    }
    Ok(())
}

fn ranges(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let primes = oracle_primes(31_477);
    for spec in [RangeSpec::A, RangeSpec::B] {
        let rep = timed(clock, || verify_range(&spec, table)).map_err(|e| e.to_string())?;
        all_pass(std::slice::from_ref(&rep))?;
        let below: Vec<&u64> = primes.iter().filter(|&&p| p < spec.descent).collect();
        let a_minus = weight_sum(below.iter().copied());
        let a_at = &a_minus + q(1, spec.descent as i64 - 1);
        let w = weight_sum(&primes[..spec.r_max - 1]);
        ensure(a_minus > dec(spec.a_minus_literal), || format!("A({}^-) literal", spec.descent))?;
        ensure(a_at < dec(spec.a_literal), || format!("A({}) literal", spec.descent))?;
        ensure(w < dec(spec.w_literal), || format!("W_{} literal", spec.r_max - 1))?;
        let monotone = rep.checks.iter().filter(|c| c.label.contains("increases in r")).count();
        let expected = 2 * (spec.r_max - spec.r_min);
        ensure(monotone == expected, || format!("range {}: {monotone} monotonicity checks, expected {expected}", spec.id))?;
        for r in spec.r_min..=spec.r_max {
            let upper = q(r as i64, 1) / (&a_minus - weight_sum(&primes[..r - 1]));
            let lower = q(r as i64, 1) / &a_at;
            let g = spec.ascent - spec.descent;
            let h = spec.after - spec.ascent;
            ensure(upper < q(g as i64 + 1, 1) && lower > q(h as i64 + 1, 1), || format!("oracle bound at r = {r}"))?;
        }
    }
    Ok(())
}

fn constant_c(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let reports = timed(clock, || verify_constants(table));
    all_pass(&reports)?;
    let enc = timed(clock, || enclose_c(table, C_CUTOFF)).map_err(|e| e.to_string())?;
    ensure(enc.interval.lo() > &dec(C_LO) && enc.interval.hi() < &dec(C_HI), || {
        format!("enclosure {} not inside the literal interval", enc.interval)
    })?;
    // fixed-point oracle: floor and ceiling of 10^36/(p(p-1)), summed in u128
    let scale: u128 = 10u128.pow(36);
    let (mut lo, mut hi) = (0u128, 0u128);
    for p in oracle_primes(C_CUTOFF) {
        let d = p as u128 * (p as u128 - 1);
        lo += scale / d;
        hi += scale.div_ceil(d);
    }
    let scale_q = BigRational::from_integer(BigInt::from(scale));
    let lo = BigRational::from_integer(BigInt::from(lo)) / &scale_q;
    let hi = BigRational::from_integer(BigInt::from(hi)) / &scale_q + q(1, C_CUTOFF as i64);
    ensure(lo > dec(C_LO) && hi < dec(C_HI), || "fixed-point oracle escapes the literal interval".into())?;
    ensure(enc.interval.lo() <= &hi && &lo <= enc.interval.hi(), || "library and oracle enclosures are disjoint".into())
}

fn records(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let reports = timed(clock, || verify_records(table, &default_precision())).map_err(|e| e.to_string())?;
    all_pass(&reports)?;
    strict_margins(&reports)?;
    for literal in ["13.04331036", "3.066", "152960196", "152960215", "3.9713", "11.70287735", "1112322"] {
        let value = dec(literal);
        let hit = reports.iter().flat_map(|r| r.checks.iter()).any(|c| {
            c.label.contains(literal)
                && c.holds()
                && c.margin().is_positive()
                && [&c.lhs, &c.rhs].iter().any(|v| matches!(v, Value::Exact(x) if *x == value))
        });
        ensure(hit, || format!("no certified check against {literal}"))?;
    }
    let s_t = find(&reports, "records.sT.digits")?;
    ensure(*exact(&s_t.checks[0].lhs)? == q(71_298, 1), || "s_T digit count".into())?;
    let s_l = find(&reports, "records.sL.digits")?;
    ensure(*exact(&s_l.checks[0].lhs)? == q(18_662, 1), || "s_L digit count".into())?;

    // floating-point sanity oracles, far from any rounding boundary
    let log_t = 8192.0 * 504_983_334f64.log10();
    ensure(log_t.fract() > 0.01 && log_t.fract() < 0.99 && log_t.floor() as u64 + 1 == 71_298, || "f64 s_T digits".into())?;
    let theta: f64 = oracle_primes(RECORD_SIEVE).iter().map(|&p| (p as f64).log10()).sum();
    let log_l = theta + (587.0f64 / 2310.0).log10();
    ensure(log_l.fract() > 0.01 && log_l.fract() < 0.99 && log_l.floor() as u64 + 1 == 18_662, || "f64 s_L digits".into())?;
    let n = 8_599_999f64;
    let (l, ll) = (n.ln(), n.ln().ln());
    let u = n * (l + ll - 1.0 + (ll - 2.0) / l);
    let rep = find(&reports, "records.U.upper")?;
    ensure(f64_ln_in(enclosure(&rep.checks[0].lhs)?, u, 1e-4), || format!("f64 U = {u} outside the enclosure"))
}

fn tail_suite(clock: &mut Duration) -> Outcome {
    let reports = timed(clock, || tail_reports(&default_precision()));
    all_pass(&reports)?;
    strict_margins(&reports)?;
    for id in [
        "tail.v-lower",
        "tail.x-lower",
        "tail.logx-error",
        "tail.logxhalf-error",
        "tail.theta-error",
        "tail.M-factor",
        "tail.eps-small",
        "tail.elementary-one",
        "tail.elementary-two",
        "tail.loglog-boundary",
        "tail.ascent-boundary",
    ] {
        find(&reports, id)?;
    }
    let dm = find(&reports, "tail.DM")?;
    let identities = dm.checks.iter().filter(|c| c.relation == Relation::Equal && c.holds()).count();
    ensure(identities == 15, || format!("{identities} identity samples, expected 15"))?;
    ensure(reports == tail_reports(&default_precision()), || "tail margins differ between runs".into())?;

    let samples: [(&str, &str, f64); 6] = [
        ("tail.v-lower", "log 8600001", 8_600_001f64.ln()),
        ("tail.logx-error", "1/(2 log^2 533000)", 0.5 / 533_000f64.ln().powi(2)),
        ("tail.logxhalf-error", "1/(2 log^2 266500)", 0.5 / 266_500f64.ln().powi(2)),
        ("tail.theta-error", "1.2323/log", 1.2323 / 533_000f64.ln()),
        ("tail.elementary-one", "0.44 * 15.96", 0.44 * 15.96 - 2.0 * 15.96f64.ln() - 1.3),
        ("tail.loglog-boundary", "0.2 * 15.96", 0.2 * 15.96 - (1.2f64 * 15.96).ln()),
    ];
    for (id, label, value) in samples {
        let check = check_by_label(find(&reports, id)?, label)?;
        ensure(f64_ln_in(enclosure(&check.lhs)?, value, 1e-12), || format!("{id}: f64 value {value} outside"))?;
    }
    Ok(())
}

fn oracle_equivalence(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let reports = timed(clock, || oracle_reports(table)).map_err(|e| e.to_string())?;
    all_pass(&reports)?;
    let equalities: usize = (0..=8).map(|i| find(&reports, &format!("oracle.i{i}")).map(|r| r.checks.len())).sum::<Result<_, _>>()?;
    ensure(equalities == 45, || format!("{equalities} equalities, expected 45"))?;
    let primes = oracle_primes(23);
    for i in 0..=8usize {
        let modulus: u64 = primes[..i].iter().product();
        let mut counts = vec![0u64; i + 1];
        for n in 0..modulus {
            counts[primes[..i].iter().filter(|&&p| n % p == 0).count()] += 1;
        }
        for (m, &c) in counts.iter().enumerate() {
            let lib = delta(m, i, table).map_err(|e| e.to_string())?;
            ensure(lib == q(c as i64, modulus as i64), || format!("delta_{m}({i}) differs from brute force"))?;
        }
    }
    Ok(())
}

fn sweep(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let summary = timed(clock, || threshold_sweep(table, 10, 10_000)).map_err(|e| e.to_string())?;
    ensure(summary.mismatches.is_empty(), || format!("{} mismatches", summary.mismatches.len()))?;

    // residue counts N_m(i) = delta_m(i) P_i; d_{r+1}(p_{i+1}) < d_{r+1}(p_i)
    // exactly when N_r(i) < p_{i+1} N_r(i-1)
    let primes = oracle_primes(10_007);
    let last = primes.iter().filter(|&&p| p <= 10_000).count();
    let mut counts = vec![BigUint::zero(); 12];
    counts[0] = BigUint::one();
    let (mut descents, mut ascents, mut ties, mut checked) = (0u64, 0u64, 0u64, 0u64);
    for i in 1..=last {
        let p = primes[i - 1];
        let next = primes[i];
        let before = counts.clone();
        for m in 0..counts.len() {
            counts[m] = &before[m] * (p - 1) + if m > 0 { before[m - 1].clone() } else { BigUint::zero() };
        }
        for r in 1..=10usize.min(i - 1) {
            checked += 1;
            match counts[r].cmp(&(&before[r] * next)) {
                std::cmp::Ordering::Less => descents += 1,
                std::cmp::Ordering::Greater => ascents += 1,
                std::cmp::Ordering::Equal => ties += 1,
            }
        }
    }
    ensure(
        (summary.checked, summary.descents, summary.ascents, summary.ties) == (checked, descents, ascents, ties),
        || {
            format!(
                "threshold counts {:?} vs exact-difference counts {:?}",
                (summary.checked, summary.descents, summary.ascents, summary.ties),
                (checked, descents, ascents, ties)
            )
        },
    )
}

fn crt(table: &PrimeTable, clock: &mut Duration) -> Outcome {
    let small = oracle_primes(DEFAULT_CRT_CAP);
    for qv in CRT_DEMO_QS {
        let (block, reports) = timed(clock, || crt_reports(qv, table, DEFAULT_CRT_CAP, &default_precision())).map_err(|e| e.to_string())?;
        all_pass(&reports)?;
        let upto: Vec<u64> = small.iter().copied().filter(|&p| p <= qv).collect();
        let q_minus = upto[upto.len() - 2];
        let primorial: BigUint = upto.iter().map(|&p| BigUint::from(p)).product();
        ensure(block.q_minus == q_minus && block.primorial == primorial, || format!("q = {qv}: block parameters"))?;
        ensure(block.block_len == 2 * q_minus - 1, || format!("q = {qv}: block length"))?;
        let two_p = &primorial * 2u32;
        let four_p = &primorial * 4u32;
        for m in 1..=block.block_len {
            let n = &block.a + &two_p + m;
            ensure(n > two_p && n < four_p, || format!("q = {qv}: element {m} outside (2P, 4P)"))?;
            let witness = upto.iter().find(|&&p| (&n % p).is_zero());
            ensure(witness.is_some() && n > BigUint::from(qv), || format!("q = {qv}: element {m} has no small factor"))?;
        }
        if let (Some(start), Some(end)) = (block.block_start.to_u64(), (&block.block_start + block.block_len - 1u32).to_u64()) {
            if start < 1_000_000_000 {
                let before = (2..start).rev().find(|&n| is_prime_by_trial(n)).unwrap();
                let after = (end + 1..).find(|&n| is_prime_by_trial(n)).unwrap();
                ensure(after - before >= 2 * q_minus, || format!("q = {qv}: surrounding gap {}", after - before))?;
            }
        }
        let scan = reports.iter().find(|r| r.claim_id.ends_with(".scan"));
        if qv <= 23 {
            let scan = scan.ok_or_else(|| format!("q = {qv}: scan missing"))?;
            check_by_label(scan, "G_+ (N - 1) <= s_N - s_1")?;
        } else {
            ensure(scan.is_none(), || format!("q = {qv}: unexpected scan"))?;
            ensure(reports[0].notes.iter().any(|n| n.contains("skipped")), || format!("q = {qv}: skip not stated"))?;
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let table = PrimeTable::sieve(C_CUTOFF).expect("sieve");
    type Criterion<'a> = Box<dyn Fn(&mut Duration) -> Outcome + 'a>;
    let criteria: Vec<(&str, u64, Criterion)> = vec![
        ("small-case table, 34 literal comparisons and 17 orderings", 1, Box::new(|c| table1(&table, c))),
        ("range sums and bound chains", 5, Box::new(|c| ranges(&table, c))),
        ("enclosure of C inside the displayed interval", 60, Box::new(|c| constant_c(&table, c))),
        ("record arithmetic with positive margins", 30, Box::new(|c| records(&table, c))),
        ("tail constants and the D(M) identity", 5, Box::new(tail_suite)),
        ("45 census equalities", 60, Box::new(|c| oracle_equivalence(&table, c))),
        ("threshold sweep, r <= 10, p <= 10^4", 60, Box::new(|c| sweep(&table, c))),
        ("composite blocks for q = 13, 23, 53, 101", 120, Box::new(|c| crt(&table, c))),
    ];
    let mut failures = Vec::new();
    let mut err = std::io::stderr().lock();
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let mut clock = Duration::ZERO;
        let outcome = run(&mut clock).and_then(|_| {
            ensure(clock < Duration::from_secs(*budget), || format!("took {clock:.2?}, budget {budget} s"))
        });
        let line = match &outcome {
            Ok(()) => format!("criterion {} PASS  {name}  ({clock:.2?})", n + 1),
            Err(e) => format!("criterion {} FAIL  {name}  ({clock:.2?}): {e}", n + 1),
        };
        let _ = writeln!(err, "{line}");
        if outcome.is_err() {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
