//! Autocorrelation and diffraction of the period-doubling sequence with
//! weights `u(r) = 1`, `u(b) = 0`.
//!
//! Closed forms return exact [`Rational`]s:
//!
//! * `a(0) = 2/3` and `a(m) = (2/3)(1 − 2^{−(r+1)})` for `m = odd·2^r`;
//! * Bragg peaks at every dyadic `k = j/2^r` (reduced), with `I(k) = 4/9`
//!   for integers and `I(k) = 1/(9·4^{r−1})` otherwise.
//!
//! The estimators in [`estimate`] approach these from finite windows.

mod estimate;

pub use estimate::{
    autocorr_csv, autocorr_estimate, autocorr_estimates, diffraction_estimate, NeumaierSum,
    WeightedSequence,
};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::Rational;

/// Largest supported denominator exponent; keeps `9·4^{r−1}` inside `i128`.
pub const MAX_DYADIC_EXPONENT: u32 = 60;

/// `m = odd·2^r`, `m ≠ 0`.
pub fn two_adic_decompose(m: i64) -> Result<(u32, i64)> {
    if m == 0 {
        return Err(Error::invalid("0 has no 2-adic decomposition"));
    }
    let r = m.trailing_zeros();
    Ok((r, m >> r))
}

pub fn autocorr_closed_pd(m: i64) -> Rational {
    let two_thirds = Rational::new(2, 3);
    match two_adic_decompose(m) {
        Err(_) => two_thirds,
        Ok((r, _)) => two_thirds * (Rational::from_integer(1) - Rational::new(1, 1i128 << (r + 1))),
    }
}

/// `numerator / 2^r` in lowest terms: the numerator is odd whenever `r ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: i64,
    r: u32,
}

impl DyadicRational {
    pub fn new(numerator: i64, r: u32) -> Result<Self> {
        if r > MAX_DYADIC_EXPONENT {
            return Err(Error::invalid(format!(
                "denominator 2^{r} exceeds 2^{MAX_DYADIC_EXPONENT}"
            )));
        }
        let shift = if numerator == 0 {
            r
        } else {
            numerator.trailing_zeros().min(r)
        };
        let r = r - shift;
        let numerator = if r == 0 && numerator == 0 { 0 } else { numerator >> shift };
        Ok(DyadicRational { numerator, r })
    }

    pub fn integer(n: i64) -> Self {
        DyadicRational { numerator: n, r: 0 }
    }

    /// Fails unless the reduced denominator is a power of two.
    pub fn from_rational(k: Rational) -> Result<Self> {
        let (num, den) = (*k.numer(), *k.denom());
        if den <= 0 || den.count_ones() != 1 {
            return Err(Error::invalid(format!("{k} is not a dyadic rational")));
        }
        let num = i64::try_from(num).map_err(|_| Error::invalid("numerator too large"))?;
        DyadicRational::new(num, den.trailing_zeros())
    }

    pub fn numerator(self) -> i64 {
        self.numerator
    }

    pub fn exponent(self) -> u32 {
        self.r
    }

    pub fn denominator(self) -> i128 {
        1i128 << self.r
    }

    pub fn value(self) -> Rational {
        Rational::new(self.numerator as i128, self.denominator())
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }

    pub fn checked_add_integer(self, n: i64) -> Result<Self> {
        let shifted = n
            .checked_mul(1i64.checked_shl(self.r).filter(|&d| d > 0).ok_or(Error::Overflow("dyadic add"))?)
            .and_then(|x| x.checked_add(self.numerator))
            .ok_or(Error::Overflow("dyadic add"))?;
        DyadicRational::new(shifted, self.r)
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator())
        }
    }
}

impl FromStr for DyadicRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DyadicRational::from_rational(parse_rational(s)?)
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::invalid(format!("cannot parse '{s}' as a rational"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffractionPeak {
    pub k: DyadicRational,
    pub intensity: Rational,
}

/// Bragg intensity at a dyadic position.
pub fn diffraction_closed_pd(k: DyadicRational) -> Rational {
    intensity_for_exponent(k.exponent())
}

fn intensity_for_exponent(r: u32) -> Rational {
    if r == 0 {
        Rational::new(4, 9)
    } else {
        Rational::new(1, 9 * (1i128 << (2 * (r - 1))))
    }
}

/// Rational interval `[lo, hi)` or `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KRange {
    pub lo: Rational,
    pub hi: Rational,
    pub hi_inclusive: bool,
}

impl KRange {
    pub fn half_open(lo: Rational, hi: Rational) -> Self {
        KRange { lo, hi, hi_inclusive: false }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        KRange { lo, hi, hi_inclusive: true }
    }

    pub fn contains(&self, k: Rational) -> bool {
        k >= self.lo && if self.hi_inclusive { k <= self.hi } else { k < self.hi }
    }
}

/// Every peak `j/2^r` with `r ≤ max_r` inside `range` and intensity at
/// least `threshold`, sorted by position.
pub fn enumerate_peaks(range: &KRange, max_r: u32, threshold: Rational) -> Result<Vec<DiffractionPeak>> {
    if max_r > MAX_DYADIC_EXPONENT {
        return Err(Error::invalid(format!("max_r must be ≤ {MAX_DYADIC_EXPONENT}")));
    }
    let mut peaks = Vec::new();
    for r in 0..=max_r {
        let intensity = intensity_for_exponent(r);
        // Intensities fall with r, so nothing further can pass.
        if intensity < threshold {
            break;
        }
        let den = 1i128 << r;
        let first = (range.lo * den).ceil().to_integer();
        let last = (range.hi * den).floor().to_integer();
        let count = last - first + 1;
        if count > 1 << 24 {
            return Err(Error::Resource(format!("more than 2^24 candidate peaks at exponent {r}")));
        }
        for j in first..=last {
            if r > 0 && j % 2 == 0 {
                continue;
            }
            let k = Rational::new(j, den);
            if !range.contains(k) {
                continue;
            }
            let j = i64::try_from(j).map_err(|_| Error::invalid("peak position too large"))?;
            peaks.push(DiffractionPeak {
                k: DyadicRational::new(j, r)?,
                intensity,
            });
        }
    }
    peaks.sort_by_key(|p| p.k);
    Ok(peaks)
}

/// `4/9 + Σ_{r=1}^{R} 2^{r−1} / (9·4^{r−1})`: the total intensity of the
/// peaks in one unit cell with exponent at most `R`.
pub fn sum_rule_partial(max_r: u32) -> Result<Rational> {
    if max_r > MAX_DYADIC_EXPONENT {
        return Err(Error::invalid(format!("R must be ≤ {MAX_DYADIC_EXPONENT}")));
    }
    let mut total = intensity_for_exponent(0);
    for r in 1..=max_r {
        total += Rational::from_integer(1i128 << (r - 1)) * intensity_for_exponent(r);
    }
    Ok(total)
}
