//! Self-verification: reproduces the exact words, periods, spectral values
//! and geometric equivalences, reporting each as a named check.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{compare_cps_to_inflation, inflation_consistency_check, XRange};
use crate::render::{render_diffraction, DiffractionStyle};
use crate::spectra::{
    autocorr_closed_pd, autocorr_estimates, diffraction_closed_pd, diffraction_estimate,
    enumerate_peaks, sum_rule_partial, DyadicRational, KRange, WeightedSequence,
};
use crate::symbolic::{fibonacci_number, has_period_up_to, SubstitutionRule, SymbolicSequence};
use crate::toeplitz::{limit_colour, matches_substitution, stage_min_period, BLUE, RED};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Symbolic,
    Toeplitz,
    Geometry,
    Spectra,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "symbolic" => Ok(Suite::Symbolic),
            "toeplitz" => Ok(Suite::Toeplitz),
            "geometry" => Ok(Suite::Geometry),
            "spectra" => Ok(Suite::Spectra),
            _ => Err(Error::invalid(format!("unknown suite '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, expected: impl fmt::Display, actual: impl fmt::Display, pass: bool) -> Self {
        Check {
            name: name.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }

    fn eq<T: PartialEq + fmt::Display>(name: &str, expected: T, actual: T) -> Self {
        let pass = expected == actual;
        Check::new(name, expected, actual, pass)
    }

    fn failed(name: &str, expected: impl fmt::Display, err: Error) -> Self {
        Check::new(name, expected, format!("error: {err}"), false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `name,expected,actual,pass` rows followed by an `overall` row.
    /// Commas inside values are replaced by semicolons.
    pub fn to_csv(&self) -> String {
        let clean = |s: &str| s.replace(',', ";");
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{}\n",
                clean(&c.name),
                clean(&c.expected),
                clean(&c.actual),
                if c.pass { "pass" } else { "fail" }
            ));
        }
        out.push_str(&format!(
            "overall,,,{}\n",
            if self.overall() { "pass" } else { "fail" }
        ));
        out
    }
}

pub fn run_suite(suite: Suite) -> VerifyReport {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Symbolic) {
        checks.extend(symbolic_checks());
    }
    if matches!(suite, Suite::All | Suite::Toeplitz) {
        checks.extend(toeplitz_checks());
    }
    if matches!(suite, Suite::All | Suite::Geometry) {
        checks.extend(geometry_checks());
    }
    if matches!(suite, Suite::All | Suite::Spectra) {
        checks.extend(spectra_checks());
    }
    VerifyReport { checks }
}

const PD_CHAIN: [&str; 4] = ["rb", "rbrr", "rbrrrbrb", "rbrrrbrbrbrrrbrr"];
const FIB_CHAIN: [&str; 5] = ["ℓs", "ℓsℓ", "ℓsℓℓs", "ℓsℓℓsℓsℓ", "ℓsℓℓsℓsℓℓsℓℓs"];
const GOLDEN: f64 = 1.618_033_988_749_895;

fn symbolic_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let s = SubstitutionRule::period_doubling();
    for (k, expected) in (1u32..).zip(PD_CHAIN) {
        let actual = s
            .iterate(&s.word("r").expect("builtin letter"), k)
            .map(|w| s.render(&w))
            .unwrap_or_else(|e| e.to_string());
        out.push(Check::eq(&format!("word-chain S^{k}(r)"), expected.to_string(), actual));
    }
    let f = SubstitutionRule::fibonacci();
    for (k, expected) in (1u32..).zip(FIB_CHAIN) {
        let actual = f
            .iterate(&f.word("ℓ").expect("builtin letter"), k)
            .map(|w| f.render(&w))
            .unwrap_or_else(|e| e.to_string());
        out.push(Check::eq(&format!("word-chain F^{k}(ℓ)"), expected.to_string(), actual));
    }

    let ratio = fibonacci_number(50).unwrap_or(0) as f64 / fibonacci_number(49).unwrap_or(1) as f64;
    out.push(Check::new(
        "golden-ratio f50/f49",
        format!("{GOLDEN} ± 1e-9"),
        ratio,
        (ratio - GOLDEN).abs() <= 1e-9,
    ));
    match f.pf_data() {
        Ok(pf) => out.push(Check::new(
            "golden-ratio pf eigenvalue",
            format!("{GOLDEN} ± 1e-12"),
            pf.eigenvalue,
            (pf.eigenvalue - GOLDEN).abs() <= 1e-12,
        )),
        Err(e) => out.push(Check::failed("golden-ratio pf eigenvalue", GOLDEN, e)),
    }

    let v = SymbolicSequence::one_sided_fixed_point(&f, f.letter('ℓ').expect("builtin letter"));
    match v.and_then(|v| has_period_up_to(&v, 0..10_000, 2000)) {
        Ok(p) => out.push(Check::eq(
            "fibonacci prefix 10^4 has no period ≤ 2000",
            "none".to_string(),
            p.map_or("none".to_string(), |p| p.to_string()),
        )),
        Err(e) => out.push(Check::failed("fibonacci prefix 10^4 has no period ≤ 2000", "none", e)),
    }
    out
}

fn toeplitz_checks() -> Vec<Check> {
    let mut out = Vec::new();
    match matches_substitution(-4096..4096) {
        Ok(r) => out.push(Check::new(
            "toeplitz equals S² fixed point on [-4096, 4096)",
            "0 mismatches",
            r.first_mismatch
                .map_or("0 mismatches".to_string(), |n| format!("first mismatch at {n}")),
            r.matched,
        )),
        Err(e) => out.push(Check::failed("toeplitz equals S² fixed point on [-4096, 4096)", "0 mismatches", e)),
    }
    for k in 0..=6u32 {
        let name = format!("stage {k} minimal period");
        let expected = 1u64 << (2 * k);
        match stage_min_period(k) {
            Ok(p) => out.push(Check::eq(&name, expected, p)),
            Err(e) => out.push(Check::failed(&name, expected, e)),
        }
    }
    let range = -100_000i64..=100_000;
    let colours: Vec<_> = range.clone().map(limit_colour).collect();
    let adjacent = colours.windows(2).filter(|w| w[0] == BLUE && w[1] == BLUE).count();
    out.push(Check::eq("no adjacent blues on [-1e5, 1e5]", 0, adjacent));
    let even_blue = range
        .zip(&colours)
        .filter(|(n, c)| n % 2 == 0 && **c != RED)
        .count();
    out.push(Check::eq("even positions red on [-1e5, 1e5]", 0, even_blue));
    out
}

fn geometry_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let name = "cut-and-project equals inflation on [-1000, 1000]";
    match XRange::new(-1000, 1000).and_then(|r| compare_cps_to_inflation(&r)) {
        Ok(r) => out.push(Check::new(
            name,
            "match",
            format!(
                "{} ({} vs {} points)",
                if r.matched { "match" } else { "mismatch" },
                r.cps_points,
                r.inflation_points
            ),
            r.matched,
        )),
        Err(e) => out.push(Check::failed(name, "match", e)),
    }
    let f = SubstitutionRule::fibonacci();
    let seed = f.word("ℓ").expect("builtin letter");
    let failures: Vec<u32> = (0..=10u32)
        .filter(|&k| {
            !f.iterate(&seed, k)
                .and_then(|w| inflation_consistency_check(&f, &w))
                .unwrap_or(false)
        })
        .collect();
    out.push(Check::new(
        "geometric inflation consistent for F^k(ℓ), k ≤ 10",
        "all consistent",
        if failures.is_empty() {
            "all consistent".to_string()
        } else {
            format!("inconsistent for k = {failures:?}")
        },
        failures.is_empty(),
    ));
    out
}

/// `(2/3)(1 − 2^{−(r+1)})` with `r` found by repeated halving.
fn autocorr_by_halving(m: i64) -> Rational {
    if m == 0 {
        return Rational::new(2, 3);
    }
    let (mut m, mut r) = (m as i128, 0u32);
    while m % 2 == 0 {
        m /= 2;
        r += 1;
    }
    Rational::new(2, 3) * (Rational::from_integer(1) - Rational::new(1, 1i128 << (r + 1)))
}

fn spectra_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let bad: Vec<i64> = (-1_000_000i64..=1_000_000)
        .filter(|&m| autocorr_closed_pd(m) != autocorr_by_halving(m))
        .take(5)
        .collect();
    out.push(Check::new(
        "autocorrelation closed form for |m| ≤ 1e6",
        "a(0) = 2/3; a(m) = (2/3)(1 - 2^-(r+1))",
        if bad.is_empty() { "agrees".to_string() } else { format!("differs at {bad:?}") },
        bad.is_empty() && autocorr_closed_pd(0) == Rational::new(2, 3),
    ));

    let seq = WeightedSequence::period_doubling();
    let ms: Vec<i64> = (0..=64).collect();
    match autocorr_estimates(&seq, &ms, 1 << 20) {
        Ok(est) => {
            let worst = ms
                .iter()
                .zip(&est)
                .map(|(&m, e)| (e - autocorr_closed_pd(m).to_f64().unwrap_or(f64::NAN)).abs())
                .fold(0.0, f64::max);
            out.push(Check::new(
                "autocorrelation estimate N=2^20, m in [0,64]",
                "max error ≤ 0.01",
                format!("max error {worst:.3e}"),
                worst <= 1e-2,
            ));
        }
        Err(e) => out.push(Check::failed("autocorrelation estimate N=2^20, m in [0,64]", "max error ≤ 0.01", e)),
    }

    let exact = [("0", (4, 9)), ("1", (4, 9)), ("1/2", (1, 9)), ("1/4", (1, 36)), ("3/4", (1, 36))];
    for (k, (n, d)) in exact {
        let name = format!("diffraction I({k})");
        match k.parse::<DyadicRational>() {
            Ok(kd) => out.push(Check::eq(&name, Rational::new(n, d), diffraction_closed_pd(kd))),
            Err(e) => out.push(Check::failed(&name, Rational::new(n, d), e)),
        }
    }
    for (k, (n, d)) in [("0", (4, 9)), ("1", (4, 9)), ("1/2", (1, 9)), ("3/4", (1, 36))] {
        let name = format!("diffraction estimate N=2^18 at k={k}");
        let closed = n as f64 / d as f64;
        let kq = crate::spectra::parse_rational(k).expect("literal");
        match diffraction_estimate(&seq, kq, 1 << 18) {
            Ok(est) => out.push(Check::new(
                &name,
                format!("{closed:.6} ± 0.01"),
                format!("{est:.6}"),
                (est - closed).abs() <= 1e-2,
            )),
            Err(e) => out.push(Check::failed(&name, closed, e)),
        }
    }

    let sum_bad: Vec<u32> = (0..=30u32)
        .filter(|&r| {
            sum_rule_partial(r).ok()
                != Some(Rational::new(2, 3) - Rational::new(2, 9) * Rational::new(1, 1i128 << r))
        })
        .collect();
    out.push(Check::new(
        "sum rule R = 0..30",
        "2/3 - (2/9)·2^-R",
        if sum_bad.is_empty() { "exact".to_string() } else { format!("differs at R = {sum_bad:?}") },
        sum_bad.is_empty(),
    ));

    out.push(rendering_check());
    out
}

fn rendering_check() -> Check {
    let name = "diffraction disk area ratio I(0)/I(1/2)";
    let style = DiffractionStyle {
        k_range: KRange::half_open(Rational::from_integer(0), Rational::from_integer(1)),
        max_r: 1,
        ..DiffractionStyle::default()
    };
    let peaks = match enumerate_peaks(&style.k_range, style.max_r, Rational::from_integer(0)) {
        Ok(p) => p,
        Err(e) => return Check::failed(name, 4, e),
    };
    let doc = render_diffraction(&peaks, &style);
    let radius_at = |k: f64| doc.circles().find(|c| c.0 == k).map(|c| c.2);
    let (Some(r0), Some(r1)) = (radius_at(0.0), radius_at(0.5)) else {
        return Check::new(name, 4, "missing disk", false);
    };
    let ratio = (r0 * r0) / (r1 * r1);
    let stable = doc.to_svg() == render_diffraction(&peaks, &style).to_svg();
    Check::new(
        name,
        "4 ± 1e-9, byte-identical SVG",
        format!("{ratio}, {}", if stable { "identical" } else { "differs" }),
        (ratio - 4.0).abs() <= 1e-9 && stable,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_suite_passes() {
        let r = run_suite(Suite::Symbolic);
        assert!(r.overall(), "{}", r.to_csv());
        assert_eq!(r.checks.len(), 4 + 5 + 3);
    }

    #[test]
    fn toeplitz_and_geometry_pass() {
        for suite in [Suite::Toeplitz, Suite::Geometry] {
            let r = run_suite(suite);
            assert!(r.overall(), "{}", r.to_csv());
        }
    }

    #[test]
    fn csv_shape() {
        let r = VerifyReport {
            checks: vec![Check::new("a,b", "1", "2", false)],
        };
        assert_eq!(r.to_csv(), "a;b,1,2,fail\noverall,,,fail\n");
        assert!("bogus".parse::<Suite>().is_err());
    }
}
