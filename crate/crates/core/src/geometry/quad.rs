use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;

use crate::error::{Error, Result};

pub const TAU_F64: f64 = 1.618_033_988_749_895;

/// `a + bτ ∈ Z[τ]`, with `τ² = τ + 1`.
///
/// The arithmetic operators panic on `i64` overflow; the `checked_*`
/// methods report it as [`Error::Overflow`] instead. Ordering is exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { a: 0, b: 0 };
    pub const ONE: QuadInt = QuadInt { a: 1, b: 0 };
    pub const TAU: QuadInt = QuadInt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        QuadInt { a, b }
    }

    pub const fn int(a: i64) -> Self {
        QuadInt { a, b: 0 }
    }

    /// Algebraic conjugate `τ ↦ 1 − τ`: `a + bτ ↦ (a + b) − bτ`.
    pub fn star(self) -> Self {
        self.checked_star().expect("QuadInt overflow in star")
    }

    pub fn checked_star(self) -> Result<Self> {
        let a = self.a.checked_add(self.b).ok_or(Error::Overflow("star"))?;
        let b = self.b.checked_neg().ok_or(Error::Overflow("star"))?;
        Ok(QuadInt { a, b })
    }

    pub fn checked_add(self, o: Self) -> Result<Self> {
        Ok(QuadInt {
            a: self.a.checked_add(o.a).ok_or(Error::Overflow("add"))?,
            b: self.b.checked_add(o.b).ok_or(Error::Overflow("add"))?,
        })
    }

    pub fn checked_sub(self, o: Self) -> Result<Self> {
        Ok(QuadInt {
            a: self.a.checked_sub(o.a).ok_or(Error::Overflow("sub"))?,
            b: self.b.checked_sub(o.b).ok_or(Error::Overflow("sub"))?,
        })
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(QuadInt {
            a: self.a.checked_neg().ok_or(Error::Overflow("neg"))?,
            b: self.b.checked_neg().ok_or(Error::Overflow("neg"))?,
        })
    }

    /// `(a + bτ)(c + dτ) = (ac + bd) + (ad + bc + bd)τ`.
    pub fn checked_mul(self, o: Self) -> Result<Self> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        let re = a * c + b * d;
        let im = a * d + b * c + b * d;
        Ok(QuadInt {
            a: i64::try_from(re).map_err(|_| Error::Overflow("mul"))?,
            b: i64::try_from(im).map_err(|_| Error::Overflow("mul"))?,
        })
    }

    pub fn checked_scale(self, k: i64) -> Result<Self> {
        Ok(QuadInt {
            a: self.a.checked_mul(k).ok_or(Error::Overflow("scale"))?,
            b: self.b.checked_mul(k).ok_or(Error::Overflow("scale"))?,
        })
    }

    /// Field norm `x · star(x) = a² + ab − b²`.
    pub fn norm(self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a + a * b - b * b
    }

    /// `self / other` when the quotient lies in `Z[τ]`.
    pub fn div_exact(self, other: Self) -> Option<Self> {
        let n = other.norm();
        if n == 0 {
            return None;
        }
        let (a, b) = (self.a as i128, self.b as i128);
        let s = other.star();
        let (c, d) = (s.a as i128, s.b as i128);
        let re = a * c + b * d;
        let im = a * d + b * c + b * d;
        let (qa, ra) = re.div_rem(&n);
        let (qb, rb) = im.div_rem(&n);
        if ra != 0 || rb != 0 {
            return None;
        }
        Some(QuadInt {
            a: i64::try_from(qa).ok()?,
            b: i64::try_from(qb).ok()?,
        })
    }

    /// Exact sign of `a + bτ`.
    pub fn signum(self) -> i32 {
        sign_of(2 * self.a as i128 + self.b as i128, self.b as i128)
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * TAU_F64
    }

    pub fn is_integer(self) -> bool {
        self.b == 0
    }
}

/// Sign of `p + q√5`.
pub(crate) fn sign_of(p: i128, q: i128) -> i32 {
    let (sp, sq) = (p.signum() as i32, q.signum() as i32);
    if sp == 0 || sq == 0 || sp == sq {
        return if sp != 0 { sp } else { sq };
    }
    // Opposite signs: the term of larger magnitude wins. √5 is irrational,
    // so p² = 5q² only when both vanish.
    match (p.checked_mul(p), q.checked_mul(q).and_then(|x| x.checked_mul(5))) {
        (Some(p2), Some(q2)) => {
            if p2 > q2 {
                sp
            } else {
                sq
            }
        }
        _ => sign_of_big(&BigInt::from(p), &BigInt::from(q)),
    }
}

fn sign_of_big(p: &BigInt, q: &BigInt) -> i32 {
    let (sp, sq) = (big_sign(p), big_sign(q));
    if sp == 0 || sq == 0 || sp == sq {
        return if sp != 0 { sp } else { sq };
    }
    if p * p > BigInt::from(5) * q * q {
        sp
    } else {
        sq
    }
}

fn big_sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = self.a as i128 - other.a as i128;
        let db = self.b as i128 - other.b as i128;
        sign_of(2 * da + db, db).cmp(&0)
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: Self) -> Self {
        self.checked_add(o).expect("QuadInt overflow in add")
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: Self) -> Self {
        self.checked_sub(o).expect("QuadInt overflow in sub")
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(o).expect("QuadInt overflow in mul")
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> Self {
        self.checked_neg().expect("QuadInt overflow in neg")
    }
}

impl From<i64> for QuadInt {
    fn from(a: i64) -> Self {
        QuadInt::int(a)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tau_term = |b: u64| if b == 1 { "tau".to_string() } else { format!("{b}*tau") };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) if b < 0 => write!(f, "-{}", tau_term(b.unsigned_abs())),
            (0, b) => write!(f, "{}", tau_term(b.unsigned_abs())),
            (a, b) if b < 0 => write!(f, "{a}-{}", tau_term(b.unsigned_abs())),
            (a, b) => write!(f, "{a}+{}", tau_term(b.unsigned_abs())),
        }
    }
}

impl FromStr for QuadInt {
    type Err = Error;

    /// Accepts integer combinations of `1` and `tau` (or `τ`), e.g.
    /// `3`, `-tau`, `1+2*tau`, `2 - 3tau`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse '{s}' as a+b*tau"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('τ', "tau");
        if compact.is_empty() {
            return Err(bad());
        }
        let mut total = QuadInt::ZERO;
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ if rest.len() == compact.len() => (false, rest),
                _ => return Err(bad()),
            };
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map_or(body.len(), |i| i + 1);
            let term = &body[..end];
            rest = &body[end..];
            let value = if let Some(coef) = term.strip_suffix("tau") {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c: i64 = if coef.is_empty() {
                    1
                } else {
                    coef.parse().map_err(|_| bad())?
                };
                QuadInt::new(0, c)
            } else {
                QuadInt::int(term.parse().map_err(|_| bad())?)
            };
            let value = if neg { value.checked_neg()? } else { value };
            total = total.checked_add(value)?;
        }
        Ok(total)
    }
}

/// `num / den` with `num ∈ Z[τ]` and `den > 0`: an exact range endpoint
/// that may be rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadRational {
    pub num: QuadInt,
    pub den: i64,
}

impl QuadRational {
    pub fn new(num: QuadInt, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        let (num, den) = if den < 0 { (num.checked_neg()?, den.checked_neg().ok_or(Error::Overflow("neg"))?) } else { (num, den) };
        Ok(QuadRational { num, den })
    }

    /// Exact ordering of `x` relative to `self`.
    pub fn cmp_point(&self, x: QuadInt) -> Ordering {
        // x·den − num = a + bτ, doubled: (2a + b) + b√5. |a|, |b| < 2^127.
        let a = x.a as i128 * self.den as i128 - self.num.a as i128;
        let b = x.b as i128 * self.den as i128 - self.num.b as i128;
        let sign = match a.checked_mul(2).and_then(|a2| a2.checked_add(b)) {
            Some(p) => sign_of(p, b),
            None => {
                let p = BigInt::from(a) * 2 + BigInt::from(b);
                sign_of_big(&p, &BigInt::from(b))
            }
        };
        sign.cmp(&0)
    }

    pub fn to_f64(self) -> f64 {
        self.num.to_f64() / self.den as f64
    }
}

impl From<QuadInt> for QuadRational {
    fn from(num: QuadInt) -> Self {
        QuadRational { num, den: 1 }
    }
}

impl From<i64> for QuadRational {
    fn from(a: i64) -> Self {
        QuadInt::int(a).into()
    }
}

impl FromStr for QuadRational {
    type Err = Error;

    /// `p/q`, or anything [`QuadInt`] parses.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((num, den)) => {
                let den: i64 = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad denominator in '{s}'")))?;
                QuadRational::new(num.parse()?, den)
            }
            None => Ok(s.parse::<QuadInt>()?.into()),
        }
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// Closed interval `[lo, hi]` on the physical line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XRange {
    pub lo: QuadRational,
    pub hi: QuadRational,
}

impl XRange {
    pub fn new(lo: impl Into<QuadRational>, hi: impl Into<QuadRational>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        // Requires hi·lo.den ≥ lo.num·hi.den, compared exactly.
        let l = QuadRational::new(lo.num.checked_scale(hi.den)?, 1)?;
        if l.cmp_point(hi.num.checked_scale(lo.den)?) == Ordering::Less {
            return Err(Error::invalid(format!("inverted range [{lo}, {hi}]")));
        }
        Ok(XRange { lo, hi })
    }

    pub fn contains(&self, x: QuadInt) -> bool {
        self.lo.cmp_point(x) != Ordering::Less && self.hi.cmp_point(x) != Ordering::Greater
    }

    pub fn width_f64(&self) -> f64 {
        self.hi.to_f64() - self.lo.to_f64()
    }
}

impl FromStr for XRange {
    type Err = Error;

    /// `LO..HI`, each side a [`QuadRational`].
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| Error::invalid(format!("range '{s}' is not LO..HI")))?;
        XRange::new(lo.parse::<QuadRational>()?, hi.parse::<QuadRational>()?)
    }
}
