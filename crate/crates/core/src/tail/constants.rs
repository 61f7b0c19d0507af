//! Boundary inequalities of the tail. Each one is decided at `v = 15.96`,
//! `x = 533,000` or `M = L = 20` and paired with a derivative-sign or
//! monotonicity witness that carries it to the whole range.

use super::{TailError, TailParameters, SPLIT_NOTE, TAIL_START};
use crate::certificates::constants::B_HI;
use crate::certificates::lit;
use crate::certificates::nth_prime_upper_bound;
use crate::certificates::{CertificateReport, Check};
use crate::numerics::{epsilon_at_log, int, ln2_enclosure, log_enclosure, log_interval, ratio, Interval, Rational};

const V0: &str = "15.96";
const X0: u64 = 533_000;
const X0_HALF: u64 = 266_500;

fn pt(x: Rational) -> Interval {
    Interval::point(x)
}

fn claim<F>(id: &str, location: &str, build: F) -> CertificateReport
where
    F: FnOnce(&mut CertificateReport) -> Result<(), TailError>,
{
    let mut report = CertificateReport::new(id, location);
    if let Err(e) = build(&mut report) {
        report.failed_step("evaluation", e);
    }
    report.note(SPLIT_NOTE);
    report
}

/// `1/(2 log^2 y)` together with the enclosure of `log y`.
fn half_inverse_log_square(y: u64, precision: &Rational) -> Result<(Interval, Interval), TailError> {
    let l = log_enclosure(&int(y), precision)?;
    let value = l.square().scale(&int(2)).recip()?;
    Ok((value, l))
}

fn v_lower(p: &Rational) -> CertificateReport {
    claim("tail.v-lower", "uniform tail, lower bound for v = log r", |rep| {
        let v = log_enclosure(&int(TAIL_START), p)?;
        rep.check(Check::greater("log 8600001 > 15.96", &v, lit(V0)));
        rep.note("log r increases in r, so v > 15.96 for every r >= 8,600,001");
        Ok(())
    })
}

fn x_lower(p: &Rational) -> CertificateReport {
    claim("tail.x-lower", "uniform tail, lower bound for x = 0.99 r / log r", |rep| {
        let t = TailParameters::at(TAIL_START, p)?;
        rep.check(Check::greater("0.99 * 8600001 / log 8600001 > 533000", &t.x, int(X0)));
        rep.check(Check::greater("log 8600001 > 1, so (log r - 1)/log^2 r > 0 and r/log r increases", &t.v, int(1)));
        Ok(())
    })
}

fn x_half(p: &Rational) -> CertificateReport {
    claim("tail.x-half", "uniform tail, lower bound for x/2", |rep| {
        let t = TailParameters::at(TAIL_START, p)?;
        rep.check(Check::greater("x/2 > 266500", t.x.scale(&ratio(1, 2)), int(X0_HALF)));
        rep.check(Check::greater("266500 > 3275", int(X0_HALF), int(3275)));
        rep.note("the short-interval prime estimate applies above 3275 (cited analytic input)");
        Ok(())
    })
}

fn logx_error(p: &Rational) -> CertificateReport {
    claim("tail.logx-error", "uniform tail, short-interval factor at x", |rep| {
        let (value, l) = half_inverse_log_square(X0, p)?;
        rep.check(Check::less("1/(2 log^2 533000) < 0.002876", &value, lit("0.002876")));
        rep.check(Check::greater("log 533000 > 0, so 1/(2 log^2 x) decreases in x", &l, int(0)));
        Ok(())
    })
}

fn logxhalf_error(p: &Rational) -> CertificateReport {
    claim("tail.logxhalf-error", "uniform tail, short-interval factor at x/2", |rep| {
        let (value, l) = half_inverse_log_square(X0_HALF, p)?;
        rep.check(Check::less("1/(2 log^2 266500) < 0.00321", &value, lit("0.00321")));
        rep.check(Check::greater("log 266500 > 0, so 1/(2 log^2(x/2)) decreases in x", &l, int(0)));
        Ok(())
    })
}

fn theta_error(p: &Rational) -> CertificateReport {
    claim("tail.theta-error", "uniform tail, Chebyshev lower-bound error term", |rep| {
        let l = log_enclosure(&int(X0), p)?;
        let value = pt(lit("1.2323")).div(&l)?;
        rep.check(Check::less("1.2323/log 533000 < 0.1", &value, lit("0.1")));
        rep.check(Check::greater("log 533000 > 0, so 1.2323/log x decreases in x", &l, int(0)));
        rep.note("applied at q > x; the Chebyshev bounds themselves are cited analytic inputs");
        Ok(())
    })
}

fn m_factor(p: &Rational) -> CertificateReport {
    claim("tail.M-factor", "uniform tail, upper bound for log(8P) / x", |rep| {
        let (inv, l) = half_inverse_log_square(X0, p)?;
        let ln8 = log_enclosure(&int(8), p)?;
        let product = inv.add_rational(&int(1)).scale(&(int(1) + ratio(1, 36_260)));
        let total = &product + &ln8.scale(&ratio(1, X0));
        rep.check(Check::less(
            "(1 + 1/(2 log^2 533000))(1 + 1/36260) + log 8/533000 < 1.003",
            &total,
            lit("1.003"),
        ));
        rep.check(Check::greater("log 533000 > 0, so the first factor decreases in x", &l, int(0)));
        rep.check(Check::greater("log 8 > 0, so log 8/x decreases in x", &ln8, int(0)));
        Ok(())
    })
}

fn eps_small() -> CertificateReport {
    claim("tail.eps-small", "uniform tail, error functional for log y > 18.9", |rep| {
        let l = lit("18.9");
        rep.check(Check::less("eps at log y = 18.9 < 0.001", epsilon_at_log(&l), lit("0.001")));
        rep.check(Check::greater("18.9 > 0, so eps decreases in log y", l, int(0)));
        Ok(())
    })
}

fn elementary_one(p: &Rational) -> CertificateReport {
    claim("tail.elementary-one", "uniform tail, 0.44 v - 2 log v - 1.300 > 0 for v >= 15.96", |rep| {
        let v = lit(V0);
        let two_over_v = int(2) / &v;
        rep.check(Check::less("2/15.96 < 0.13", &two_over_v, lit("0.13")));
        rep.check(Check::greater("derivative 0.44 - 2/15.96 > 0", lit("0.44") - &two_over_v, int(0)));
        rep.check(Check::greater("0.13 < 0.44, so 0.44 - 2/v > 0 for v >= 15.96", lit("0.44"), lit("0.13")));
        let lv = log_enclosure(&v, p)?;
        let value = &pt(lit("0.44") * &v - lit("1.300")) - &lv.scale(&int(2));
        rep.check(Check::greater("0.44 * 15.96 - 2 log 15.96 - 1.300 > 0.18", &value, lit("0.18")));
        rep.check(Check::greater("0.18 > 0", lit("0.18"), int(0)));
        Ok(())
    })
}

fn elementary_two() -> CertificateReport {
    claim("tail.elementary-two", "uniform tail, v/(0.99(v - 1.50)) > 1.010", |rep| {
        let v = lit(V0);
        rep.check(Check::greater("15.96 > 1.50, so v/(v - 1.50) > 1", v.clone(), lit("1.50")));
        rep.check(Check::greater("1/0.99 > 1.010", int(1) / lit("0.99"), lit("1.010")));
        let at_v0 = &v / (lit("0.99") * (&v - lit("1.50")));
        rep.check(Check::greater("15.96/(0.99 * 14.46) > 1.010", at_v0, lit("1.010")));
        Ok(())
    })
}

fn ascent_boundary(p: &Rational) -> CertificateReport {
    claim("tail.ascent-boundary", "uniform tail, ascent gap: -log v + log 0.99 + 1.266 < -1.50", |rep| {
        let v = lit(V0);
        let lv = log_enclosure(&v, p)?;
        let l99 = log_enclosure(&lit("0.99"), p)?;
        let value = (&l99 - &lv).add_rational(&lit("1.266"));
        rep.check(Check::less("-log 15.96 + log 0.99 + 1.266 < -1.50", &value, lit("-1.50")));
        rep.check(Check::less("derivative -1/15.96 < 0, and -1/v < 0 for every v > 0", -(int(1) / &v), int(0)));
        Ok(())
    })
}

fn loglog_boundary(p: &Rational) -> CertificateReport {
    claim("tail.loglog-boundary", "uniform tail, descent gap: 0.2 v - log(1.2 v) > 0.23", |rep| {
        let v = lit(V0);
        let l = log_enclosure(&(lit("1.2") * &v), p)?;
        let value = &pt(lit("0.2") * &v) - &l;
        rep.check(Check::greater("0.2 * 15.96 - log(1.2 * 15.96) > 0.23", &value, lit("0.23")));
        rep.check(Check::less("1/15.96 < 0.2, so the derivative 0.2 - 1/v > 0 for v >= 15.96", int(1) / &v, lit("0.2")));
        rep.check(Check::greater("0.23 > 0, so log(1.2 v) < 0.2 v", lit("0.23"), int(0)));
        Ok(())
    })
}

fn chain(p: &Rational) -> CertificateReport {
    claim("tail.chain", "uniform tail, remaining numerical steps of the descent and ascent chains", |rep| {
        let l891 = log_enclosure(&lit("0.891"), p)?;
        let l12 = log_enclosure(&lit("1.2"), p)?;
        let descent_const = (&l891 - &l12).add_rational(&lit("-1.002"));
        rep.check(Check::equal("0.9 * 0.99 = 0.891", lit("0.9") * lit("0.99"), lit("0.891")));
        rep.check(Check::greater("log 0.891 - log 1.2 - 1.002 > -1.300", &descent_const, lit("-1.300")));
        rep.check(Check::less("1/(0.99 * 0.56) < 1.805", int(1) / (lit("0.99") * lit("0.56")), lit("1.805")));
        rep.check(Check::less("1.805 < 1.993", lit("1.805"), lit("1.993")));
        rep.check(Check::greater("2/1.00321 > 1.993", int(2) / lit("1.00321"), lit("1.993")));

        let l1003 = log_enclosure(&lit("1.003"), p)?;
        let ascent_const = l1003.add_rational(&(lit("0.262") + lit("1.001")));
        rep.check(Check::less("B_+ < 0.262", lit(B_HI), lit("0.262")));
        rep.check(Check::less("log 1.003 + 0.262 + 1.001 < 1.266", &ascent_const, lit("1.266")));
        rep.check(Check::greater("0.001 * 533000 > 1, so G_+ + 1 < 1.004 x", lit("0.001") * int(X0), int(1)));
        rep.check(Check::less("1.004 < 1.010", lit("1.004"), lit("1.010")));

        let log_p_lower = lit("0.9") * int(X0);
        rep.check(Check::greater("log P > 0.9 * 533000 > 18.9", log_p_lower.clone(), lit("18.9")));
        rep.check(Check::greater("log P > 0.9 * 533000 > 20, so L > 20 and M > 20", log_p_lower, int(20)));

        let t = TailParameters::at(TAIL_START, p)?;
        let inner = log_interval(&t.v.scale(&lit("1.2")), p)?;
        let total = &t.v + &inner;
        rep.check(Check::greater("log(1.2 r log r) = v + log(1.2 v) > 18.9 at r = 8600001", &total, lit("18.9")));
        rep.note("log(1.2 r log r) increases in r");
        Ok(())
    })
}

/// The displayed tail inequalities, one claim each, plus the remaining
/// constant steps of the two chains.
pub fn verify_tail_constants(precision: &Rational) -> Vec<CertificateReport> {
    vec![
        v_lower(precision),
        x_lower(precision),
        x_half(precision),
        logx_error(precision),
        logxhalf_error(precision),
        theta_error(precision),
        m_factor(precision),
        eps_small(),
        elementary_one(precision),
        elementary_two(),
        ascent_boundary(precision),
        loglog_boundary(precision),
        chain(precision),
    ]
}

/// `D(M) - 4/M` with `log 2` replaced by the symbol `lambda`.
fn dm_difference(m: &Rational, lambda: &Rational) -> Rational {
    let shifted = m - lambda - lit("1.1");
    int(8) / (m - int(1)) - int(4) / &shifted - int(4) / m
}

fn dm_closed_form(m: &Rational, lambda: &Rational) -> Rational {
    let shifted = m - lambda - lit("1.1");
    let numer = int(2) * ((int(9) - int(10) * lambda) * m - (int(10) * lambda + int(11)));
    numer / (int(5) * m * (m - int(1)) * shifted)
}

/// The `D(M)` closed form as an identity in `(M, lambda)`, plus the bounds
/// that turn it into `N > 4P/M + 1`.
pub fn verify_dm_identity(precision: &Rational) -> CertificateReport {
    claim("tail.DM", "uniform tail, closed form of D(M) - 4/M and its lower bound", |rep| {
        let ms = [21u64, 25, 30, 40, 100];
        let lambdas = [ratio(7, 10), ratio(69, 100), ratio(7, 11)];
        for m in ms {
            let m = int(m);
            for lambda in &lambdas {
                rep.check(Check::equal(
                    format!("M = {m}, lambda = {lambda}: D(M) - 4/M equals the closed form"),
                    dm_difference(&m, lambda),
                    dm_closed_form(&m, lambda),
                ));
            }
        }
        rep.note("cleared of denominators the identity has degree at most 2 in M and 1 in lambda, so a 5 x 3 grid decides it");

        let ln2 = ln2_enclosure(precision)?;
        let nine_minus = (-&ln2.scale(&int(10))).add_rational(&int(9));
        let ten_plus = ln2.scale(&int(10)).add_rational(&int(11));
        rep.check(Check::greater("9 - 10 log 2 > 2", &nine_minus, int(2)));
        rep.check(Check::less("10 log 2 + 11 < 18", &ten_plus, int(18)));
        let m20 = int(20);
        let shifted = (-&ln2).add_rational(&(&m20 - lit("1.1")));
        rep.check(Check::greater("20 - log 2 - 1.1 > 0, so M(M - 1)(M - log 2 - 1.1) < M^3", &shifted, int(0)));
        rep.check(Check::greater("2(2 * 20 - 18)/5 > 8, and 2(2M - 18)/5 increases in M", int(2) * (int(2) * &m20 - int(18)) / int(5), int(8)));
        let l20 = log_enclosure(&m20, precision)?;
        let e_ratio = (-&l20.scale(&int(3))).add_rational(&m20);
        rep.check(Check::greater("20 - 3 log 20 > 0, so e^M/M^3 > 1 at M = 20", &e_ratio, int(0)));
        rep.check(Check::greater("derivative 1 - 3/20 > 0, and 1 - 3/M increases in M", int(1) - ratio(3, 20), int(0)));
        rep.note("the prime-counting bounds giving N >= 8P/(M - 1) - 4P/(M - log 2 - 1.1) are cited analytic inputs");
        Ok(())
    })
}

/// `h(t) = 0.2 t - log t + 1 - (log t - 2)/t` is positive for `t >= 15.96`.
pub fn verify_h_monotone(precision: &Rational) -> CertificateReport {
    claim("tail.h", "uniform tail, nth-prime step p_{r-1} < 1.2 r log r", |rep| {
        let t = lit(V0);
        let lt = log_enclosure(&t, precision)?;
        rep.check(Check::greater("log 15.96 - 3 > -0.230", lt.add_rational(&int(-3)), lit("-0.230")));
        let t2 = &t * &t;
        let chain = lit("0.2") - int(1) / &t - lit("0.230") / &t2;
        rep.check(Check::greater("0.2 - 1/15.96 - 0.230/15.96^2 > 0", chain, int(0)));
        rep.note("(log t - 3)/t^2 is negative near 15.96; the displayed chain subtracts 0.230/15.96^2 and is checked as written");
        rep.note("for t >= 15.96, -1/t >= -1/15.96 and (log t - 3)/t^2 >= -0.230/t^2 >= -0.230/15.96^2");

        let constant = lit("0.2") * &t + int(1) + int(2) / &t;
        let h = (-&lt.scale(&(int(1) + int(1) / &t))).add_rational(&constant);
        rep.check(Check::greater("h(15.96) > 1.37", &h, lit("1.37")));
        rep.check(Check::greater("1.37 > 0, so log t - 1 + (log t - 2)/t < 0.2 t", lit("1.37"), int(0)));

        let n = TAIL_START - 1;
        let bound = nth_prime_upper_bound(n, precision)?;
        let rhs = log_enclosure(&int(TAIL_START), precision)?.scale(&(lit("1.2") * int(TAIL_START)));
        rep.check(Check::less("nth-prime bound at n = 8600000 < 1.2 * 8600001 * log 8600001", &bound, &rhs));
        rep.note("the nth-prime upper bound for n > 688383 is a cited analytic input");
        Ok(())
    })
}

/// The symbolic step showing `(P, 2P]` holds at least two primes once
/// `log P > 20`.
pub fn verify_two_primes_symbolic(precision: &Rational) -> CertificateReport {
    claim("tail.two-primes", "uniform tail, at least two primes in (P, 2P]", |rep| {
        let ln2 = ln2_enclosure(precision)?;
        let l = int(20);
        let first = pt(int(2)).div(&ln2.add_rational(&(&l - int(1))))?;
        let value = first.add_rational(&(-(int(1) / (&l - lit("1.1")))));
        rep.check(Check::greater("2/(20 + log 2 - 1) - 1/(20 - 1.1) > 1/40", &value, int(1) / (int(2) * &l)));
        // times 2L(L + log 2 - 1)(L - 1.1), the difference is this quadratic in L
        let slope = ln2.scale(&int(3)).add_rational(&lit("0.3"));
        let quadratic = (&(-&slope.scale(&l)).add_rational(&(&l * &l)) + &ln2.scale(&lit("1.1"))).add_rational(&lit("-1.1"));
        rep.check(Check::greater("20^2 - (3 log 2 + 0.3) 20 + 1.1(log 2 - 1) > 0", &quadratic, int(0)));
        rep.check(Check::less("vertex (3 log 2 + 0.3)/2 < 20, so the quadratic increases for L > 20", slope.scale(&ratio(1, 2)), &l));
        let l80 = log_enclosure(&int(80), precision)?;
        rep.check(Check::less("log 80 < 20, so e^L/(2L) > 2 at L = 20", &l80, &l));
        rep.check(Check::greater("20 > 1, so e^L/(2L) increases for L > 20", l, int(1)));
        rep.note("pi(2P) - pi(P) >= 2P/(L + log 2 - 1) - P/(L - 1.1) comes from cited prime-counting bounds");
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::report::to_text_one;
    use crate::numerics::default_precision;

    #[test]
    fn all_constant_claims_pass() {
        let p = default_precision();
        let mut reports = verify_tail_constants(&p);
        reports.push(verify_dm_identity(&p));
        reports.push(verify_h_monotone(&p));
        reports.push(verify_two_primes_symbolic(&p));
        for r in &reports {
            assert!(r.passed(), "{}", to_text_one(r));
            assert!(r.notes.iter().any(|n| n == SPLIT_NOTE));
        }
        assert_eq!(reports.len(), 16);
    }

    #[test]
    fn dm_identity_at_a_sample() {
        let m = int(21);
        let lambda = ratio(7, 10);
        assert_eq!(dm_difference(&m, &lambda), dm_closed_form(&m, &lambda));
        // a wrong closed form is caught
        assert_ne!(dm_difference(&m, &lambda), dm_closed_form(&m, &ratio(1, 2)));
    }

    #[test]
    fn margins_are_reproducible() {
        let p = default_precision();
        assert_eq!(verify_tail_constants(&p), verify_tail_constants(&p));
    }
}
