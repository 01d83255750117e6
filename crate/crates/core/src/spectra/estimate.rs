use std::f64::consts::TAU;
use std::ops::AddAssign;

use num_traits::ToPrimitive;

use super::autocorr_closed_pd;
use crate::error::{Error, Result};
use crate::symbolic::{SubstitutionRule, SymbolicSequence};
use crate::toeplitz::RED;
use crate::Rational;

/// Kahan–Babuška (Neumaier) compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }
}

/// A letter sequence with a scattering weight per letter.
#[derive(Clone, Debug)]
pub struct WeightedSequence {
    seq: SymbolicSequence,
    weights: Vec<f64>,
}

impl WeightedSequence {
    /// Uses the weights stored in the sequence's alphabet.
    pub fn new(seq: SymbolicSequence) -> Self {
        let weights = seq.alphabet().weights();
        WeightedSequence { seq, weights }
    }

    pub fn with_weights(seq: SymbolicSequence, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != seq.alphabet().len() {
            return Err(Error::invalid("one weight per letter is required"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        Ok(WeightedSequence { seq, weights })
    }

    /// The `r|r` fixed point of `S²` with `u(r) = 1`, `u(b) = 0`.
    pub fn period_doubling() -> Self {
        let s = SubstitutionRule::period_doubling();
        let w = SymbolicSequence::two_sided_fixed_point(&s, RED, RED, 2)
            .expect("r|r is S²-stable");
        WeightedSequence::new(w)
    }

    pub fn sequence(&self) -> &SymbolicSequence {
        &self.seq
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn values(&self, lo: i64, hi: i64) -> Result<Vec<f64>> {
        Ok(self
            .seq
            .window(lo..hi)?
            .into_iter()
            .map(|id| self.weights[id.index()])
            .collect())
    }
}

fn check_n(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    i64::try_from(n)
        .ok()
        .filter(|&n| n <= 1 << 31)
        .ok_or_else(|| Error::Resource(format!("N = {n} exceeds 2^31")))
}

/// `(1/(2N+1)) Σ_{n=−N}^{N} u(w_n) u(w_{n+m})`.
pub fn autocorr_estimate(seq: &WeightedSequence, m: i64, n: u64) -> Result<f64> {
    Ok(autocorr_estimates(seq, &[m], n)?[0])
}

/// [`autocorr_estimate`] for several distances over one materialized window.
pub fn autocorr_estimates(seq: &WeightedSequence, ms: &[i64], n: u64) -> Result<Vec<f64>> {
    let n = check_n(n)?;
    let reach = ms.iter().map(|m| m.unsigned_abs()).max().unwrap_or(0);
    let reach = i64::try_from(reach)
        .ok()
        .filter(|&r| r <= 1 << 31)
        .ok_or_else(|| Error::invalid("distance too large"))?;
    let lo = -n - reach;
    let u = seq.values(lo, n + reach + 1)?;
    let base = (reach) as usize;
    let count = (2 * n + 1) as usize;
    let norm = 1.0 / count as f64;
    Ok(ms
        .iter()
        .map(|&m| {
            let shifted = (base as i64 + m) as usize;
            let mut acc = NeumaierSum::default();
            for (a, b) in u[base..base + count].iter().zip(&u[shifted..shifted + count]) {
                acc += a * b;
            }
            acc.value() * norm
        })
        .collect())
}

/// `|(1/(2N+1)) Σ_{n=−N}^{N} u(w_n) e^{−2πikn}|²`, with the phase reduced
/// exactly as `(p·n mod q)/q` for `k = p/q`.
pub fn diffraction_estimate(seq: &WeightedSequence, k: Rational, n: u64) -> Result<f64> {
    let n = check_n(n)?;
    let (p, q) = (*k.numer(), *k.denom());
    let u = seq.values(-n, n + 1)?;
    let table: Option<Vec<(f64, f64)>> = (q <= 1 << 16).then(|| {
        (0..q)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / q as f64).sin_cos();
                (c, -s)
            })
            .collect()
    });
    let mut re = NeumaierSum::default();
    let mut im = NeumaierSum::default();
    for (i, &w) in u.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let pos = -n as i128 + i as i128;
        let j = p
            .checked_mul(pos)
            .ok_or(Error::Overflow("phase"))?
            .rem_euclid(q);
        let (c, s) = match &table {
            Some(t) => t[j as usize],
            None => {
                let angle = TAU * (Rational::new(j, q)).to_f64().unwrap_or(0.0);
                let (s, c) = angle.sin_cos();
                (c, -s)
            }
        };
        re += w * c;
        im += w * s;
    }
    let norm = (2 * n + 1) as f64;
    let (x, y) = (re.value() / norm, im.value() / norm);
    Ok(x * x + y * y)
}

/// `m,closed_num,closed_den,estimate,abs_error` for `m = 0..=m_max`.
pub fn autocorr_csv(seq: &WeightedSequence, m_max: u32, n: u64) -> Result<String> {
    let ms: Vec<i64> = (0..=m_max as i64).collect();
    let est = autocorr_estimates(seq, &ms, n)?;
    let mut out = String::new();
    for (&m, e) in ms.iter().zip(est) {
        let closed = autocorr_closed_pd(m);
        let err = (e - closed.to_f64().unwrap_or(f64::NAN)).abs();
        out.push_str(&format!("{m},{},{},{e},{err}\n", closed.numer(), closed.denom()));
    }
    Ok(out)
}
