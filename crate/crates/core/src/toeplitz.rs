//! The recolouring construction of the period-doubling point set.
//!
//! Stage `P_k` starts from all-red integers and turns blue every position
//! `n ≡ 2·4^j − 1 (mod 4^{j+1})` for `j < k`. It is periodic with period
//! `4^k`, so a stage is stored as one period. The limit set `P` is queried
//! position by position through [`limit_colour`].

use std::ops::Range;

use crate::error::{Error, Result};
use crate::symbolic::{LetterId, SubstitutionRule, SymbolicSequence};

pub const RED: LetterId = LetterId(0);
pub const BLUE: LetterId = LetterId(1);

pub const MAX_STAGE: u32 = 15;
pub const MAX_PERIOD_STAGE: u32 = 8;

/// `P_k` over one period, as a bitset of blue residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToeplitzStage {
    k: u32,
    blue: Vec<u64>,
}

impl ToeplitzStage {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn period(&self) -> u64 {
        1u64 << (2 * self.k)
    }

    fn is_blue_residue(&self, r: u64) -> bool {
        self.blue[(r / 64) as usize] >> (r % 64) & 1 == 1
    }

    /// Colour at any integer position, reduced mod `4^k`.
    pub fn colour(&self, n: i64) -> LetterId {
        let r = (n as i128).rem_euclid(self.period() as i128) as u64;
        if self.is_blue_residue(r) {
            BLUE
        } else {
            RED
        }
    }

    /// Blue residues in `0..4^k`, ascending.
    pub fn blue_residues(&self) -> Vec<u64> {
        (0..self.period()).filter(|&r| self.is_blue_residue(r)).collect()
    }

    pub fn blue_count(&self) -> u64 {
        self.blue.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Colours over one period.
    pub fn colours(&self) -> Vec<LetterId> {
        (0..self.period() as i64).map(|n| self.colour(n)).collect()
    }

    pub fn as_sequence(&self) -> SymbolicSequence {
        let stage = self.clone();
        SymbolicSequence::from_fn(
            SubstitutionRule::period_doubling().alphabet().clone(),
            move |n| stage.colour(n),
        )
    }
}

pub fn stage(k: u32) -> Result<ToeplitzStage> {
    if k > MAX_STAGE {
        return Err(Error::Resource(format!(
            "stage {k} exceeds the storage cap of {MAX_STAGE}"
        )));
    }
    let period = 1u64 << (2 * k);
    let mut blue = vec![0u64; period.div_ceil(64) as usize];
    for j in 0..k {
        let modulus = 1u64 << (2 * (j + 1));
        let mut n = 2 * (1u64 << (2 * j)) - 1;
        while n < period {
            blue[(n / 64) as usize] |= 1 << (n % 64);
            n += modulus;
        }
    }
    Ok(ToeplitzStage { k, blue })
}

/// Colour of position `n` in the limit set `P`.
///
/// Checks `n ≡ 2·4^k − 1 (mod 4^{k+1})` for every `k` with
/// `4^{k+1} ≤ 4(|n| + 2)`; larger moduli cannot match because a match
/// forces `|n + 1| ≥ 2·4^k`.
pub fn limit_colour(n: i64) -> LetterId {
    let n = n as i128;
    let bound = 4 * (n.abs() + 2);
    let mut k = 0u32;
    loop {
        let modulus = 1i128 << (2 * (k + 1));
        if modulus > bound {
            return RED;
        }
        let residue = 2 * (1i128 << (2 * k)) - 1;
        if n.rem_euclid(modulus) == residue {
            return BLUE;
        }
        k += 1;
    }
}

pub fn limit_sequence() -> SymbolicSequence {
    SymbolicSequence::from_fn(
        SubstitutionRule::period_doubling().alphabet().clone(),
        limit_colour,
    )
}

/// Smallest `p | 4^k` that leaves stage `k` invariant.
pub fn stage_min_period(k: u32) -> Result<u64> {
    if k > MAX_PERIOD_STAGE {
        return Err(Error::invalid(format!(
            "stage_min_period supports k ≤ {MAX_PERIOD_STAGE}"
        )));
    }
    let st = stage(k)?;
    let period = st.period();
    let colours = st.colours();
    let min = (0..=2 * k)
        .map(|i| 1u64 << i)
        .find(|&p| {
            (0..period as usize).all(|n| colours[n] == colours[(n + p as usize) % period as usize])
        })
        .expect("the full period always works");
    Ok(min)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchReport {
    pub matched: bool,
    pub compared: u64,
    pub first_mismatch: Option<i64>,
}

/// Compares [`limit_colour`] with the two-sided fixed point of `S²` grown
/// from `r|r` over `range`.
pub fn matches_substitution(range: Range<i64>) -> Result<MatchReport> {
    let cap = 1i64 << 24;
    if range.start < -cap || range.end > cap + 1 {
        return Err(Error::invalid("range must lie within [-4^12, 4^12]"));
    }
    let s = SubstitutionRule::period_doubling();
    let w = SymbolicSequence::two_sided_fixed_point(&s, RED, RED, 2)?;
    let letters = w.window(range.clone())?;
    let first_mismatch = range
        .clone()
        .zip(&letters)
        .find(|(n, &c)| limit_colour(*n) != c)
        .map(|(n, _)| n);
    Ok(MatchReport {
        matched: first_mismatch.is_none(),
        compared: letters.len() as u64,
        first_mismatch,
    })
}

/// `<n>,<r|b>` per position.
pub fn colour_csv(seq: &SymbolicSequence, range: Range<i64>) -> Result<String> {
    let letters = seq.window(range.clone())?;
    let mut out = String::with_capacity(letters.len() * 8);
    for (n, id) in range.zip(letters) {
        out.push_str(&format!("{n},{}\n", seq.alphabet().display(id)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `n` is blue iff `n + 1 = 2^{2k+1}·odd`: an odd power of two divides
    /// `n + 1` exactly. Independent of the residue search.
    fn blue_by_valuation(n: i64) -> bool {
        let m = n as i128 + 1;
        m != 0 && m.trailing_zeros() % 2 == 1
    }

    #[test]
    fn stage_examples() {
        assert_eq!(stage(0).unwrap().blue_residues(), Vec::<u64>::new());
        assert_eq!(stage(1).unwrap().blue_residues(), vec![1]);
        assert_eq!(stage(2).unwrap().blue_residues(), vec![1, 5, 7, 9, 13]);
        assert!(matches!(stage(16), Err(Error::Resource(_))));
    }

    #[test]
    fn stage_blue_count_and_density() {
        for k in 0..=8u32 {
            let st = stage(k).unwrap();
            let expected: u64 = (1..=k).map(|j| 1u64 << (2 * (k - j))).sum();
            assert_eq!(st.blue_count(), expected, "k = {k}");
            // density (1 - 4^-k)/3, cross-multiplied
            assert_eq!(3 * st.blue_count(), st.period() - 1);
        }
    }

    #[test]
    fn stages_are_monotone() {
        for k in 0..=7u32 {
            let a = stage(k).unwrap();
            let b = stage(k + 1).unwrap();
            for n in 0..b.period() as i64 {
                if a.colour(n) == BLUE {
                    assert_eq!(b.colour(n), BLUE);
                }
            }
        }
    }

    #[test]
    fn limit_examples() {
        assert_eq!(limit_colour(1), BLUE);
        assert_eq!(limit_colour(7), BLUE);
        assert_eq!(limit_colour(31), BLUE);
        assert_eq!(limit_colour(0), RED);
        assert_eq!(limit_colour(-1), RED);
        // i64::MAX + 1 = 2^63 has odd valuation.
        assert_eq!(limit_colour(i64::MAX), BLUE);
        assert_eq!(limit_colour(i64::MIN), RED);
    }

    #[test]
    fn limit_matches_valuation_oracle() {
        for n in -100_000i64..100_000 {
            assert_eq!(limit_colour(n) == BLUE, blue_by_valuation(n), "n = {n}");
        }
        for shift in 0..62 {
            for n in [(1i64 << shift) - 1, (1i64 << shift) + 1, -(1i64 << shift) - 1] {
                assert_eq!(limit_colour(n) == BLUE, blue_by_valuation(n), "n = {n}");
            }
        }
    }

    #[test]
    fn each_blue_has_one_level() {
        for n in -5000i64..5000 {
            let hits = (0..20u32)
                .filter(|&k| {
                    let m = 1i128 << (2 * (k + 1));
                    (n as i128).rem_euclid(m) == 2 * (1i128 << (2 * k)) - 1
                })
                .count();
            assert_eq!(hits, usize::from(limit_colour(n) == BLUE));
        }
    }

    #[test]
    fn limit_agrees_with_stage_on_settled_positions() {
        let st = stage(6).unwrap();
        for n in -5000i64..5000 {
            if st.colour(n) == BLUE {
                assert_eq!(limit_colour(n), BLUE);
            }
        }
    }

    #[test]
    fn min_periods() {
        assert_eq!(stage_min_period(0).unwrap(), 1);
        assert_eq!(stage_min_period(1).unwrap(), 4);
        assert_eq!(stage_min_period(2).unwrap(), 16);
        assert!(stage_min_period(9).is_err());
    }

    #[test]
    fn substitution_match_examples() {
        for range in [0..16, -16..0, 0..4096, -4096..4096] {
            let report = matches_substitution(range.clone()).unwrap();
            assert!(report.matched, "{range:?}: {report:?}");
            assert_eq!(report.compared, (range.end - range.start) as u64);
        }
        let s = SubstitutionRule::period_doubling();
        let w = SymbolicSequence::two_sided_fixed_point(&s, RED, RED, 2).unwrap();
        assert_eq!(w.render(0..16).unwrap(), "rbrrrbrbrbrrrbrr");
        assert!(matches_substitution(-(1 << 25)..0).is_err());
    }

    #[test]
    fn csv_dump() {
        let csv = colour_csv(&limit_sequence(), -1..2).unwrap();
        assert_eq!(csv, "-1,r\n0,r\n1,b\n");
    }
}
