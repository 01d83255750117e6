use std::cmp::Ordering;

use super::QuadInt;
use crate::error::{Error, Result};
use crate::symbolic::{LetterId, SubstitutionRule};

/// Interval in internal space with exact endpoints and explicit closures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: QuadInt,
    pub hi: QuadInt,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: QuadInt, hi: QuadInt, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo >= hi {
            return Err(Error::invalid(format!("empty interval with lo = {lo}, hi = {hi}")));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    /// `(lo, hi]`
    pub fn left_open(lo: QuadInt, hi: QuadInt) -> Result<Self> {
        Interval::new(lo, hi, false, true)
    }

    pub fn contains(&self, x: QuadInt) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }
}

/// Acceptance window in internal space, partitioned into one sub-window per
/// tile type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    bounds: Interval,
    parts: Vec<(Interval, LetterId)>,
}

impl Window {
    /// Sub-windows must be listed left to right, be contiguous, and assign
    /// each shared endpoint to exactly one side.
    pub fn new(parts: Vec<(Interval, LetterId)>) -> Result<Self> {
        let (first, last) = match (parts.first(), parts.last()) {
            (Some(f), Some(l)) => (f.0, l.0),
            _ => return Err(Error::invalid("window needs at least one sub-window")),
        };
        for pair in parts.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if a.hi != b.lo {
                return Err(Error::invalid(format!(
                    "sub-windows leave a gap or overlap at {} / {}",
                    a.hi, b.lo
                )));
            }
            if a.hi_closed == b.lo_closed {
                return Err(Error::invalid(format!(
                    "shared endpoint {} must belong to exactly one sub-window",
                    a.hi
                )));
            }
        }
        Ok(Window {
            bounds: Interval {
                lo: first.lo,
                hi: last.hi,
                lo_closed: first.lo_closed,
                hi_closed: last.hi_closed,
            },
            parts,
        })
    }

    /// `(−1, τ−1]`, split as `s: (−1, τ−2]` and `ℓ: (τ−2, τ−1]`, with the
    /// letter ids of [`SubstitutionRule::fibonacci`].
    pub fn fibonacci_default() -> Self {
        let f = SubstitutionRule::fibonacci();
        let (l, s) = (f.letter('ℓ').unwrap(), f.letter('s').unwrap());
        let minus_one = QuadInt::int(-1);
        let mid = QuadInt::new(-2, 1);
        let top = QuadInt::new(-1, 1);
        Window::new(vec![
            (Interval::left_open(minus_one, mid).unwrap(), s),
            (Interval::left_open(mid, top).unwrap(), l),
        ])
        .expect("default window is valid")
    }

    pub fn bounds(&self) -> Interval {
        self.bounds
    }

    pub fn parts(&self) -> &[(Interval, LetterId)] {
        &self.parts
    }

    /// Tile type for an internal coordinate, if it is accepted.
    pub fn label(&self, internal: QuadInt) -> Option<LetterId> {
        self.parts
            .iter()
            .find(|(iv, _)| iv.contains(internal))
            .map(|&(_, id)| id)
    }

    /// The window cut down to the sub-window of `letter`.
    pub fn restrict_to(&self, letter: LetterId) -> Result<Self> {
        let part = self
            .parts
            .iter()
            .find(|(_, id)| *id == letter)
            .ok_or_else(|| Error::invalid(format!("no sub-window for letter id {}", letter.0)))?;
        Window::new(vec![*part])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_window_labels() {
        let w = Window::fibonacci_default();
        let f = SubstitutionRule::fibonacci();
        let (l, s) = (f.letter('ℓ').unwrap(), f.letter('s').unwrap());
        assert_eq!(w.label(QuadInt::ZERO), Some(l));
        assert_eq!(w.label(QuadInt::new(-1, 1)), Some(l)); // closed top
        assert_eq!(w.label(QuadInt::new(-2, 1)), Some(s)); // split point
        assert_eq!(w.label(QuadInt::int(-1)), None); // open bottom
        assert_eq!(w.label(QuadInt::new(1, -1)), Some(s)); // 1 − τ ≈ −0.618
        assert_eq!(w.label(QuadInt::int(1)), None);
    }

    #[test]
    fn invalid_windows() {
        let zero = QuadInt::ZERO;
        assert!(Interval::left_open(zero, zero).is_err());
        assert!(Interval::left_open(QuadInt::ONE, zero).is_err());
        let a = Interval::left_open(QuadInt::int(-1), zero).unwrap();
        let b = Interval::left_open(zero, QuadInt::ONE).unwrap();
        let c = Interval::new(zero, QuadInt::ONE, true, true).unwrap();
        let gap = Interval::left_open(QuadInt::ONE, QuadInt::int(2)).unwrap();
        assert!(Window::new(vec![(a, LetterId(0)), (b, LetterId(1))]).is_ok());
        assert!(Window::new(vec![(a, LetterId(0)), (c, LetterId(1))]).is_err());
        assert!(Window::new(vec![(a, LetterId(0)), (gap, LetterId(1))]).is_err());
        assert!(Window::new(vec![]).is_err());
    }
}
