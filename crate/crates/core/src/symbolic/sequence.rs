use std::fmt;
use std::ops::Range;
use std::sync::{Arc, RwLock};

use super::{Alphabet, LetterId, SubstitutionRule, Word, MAX_WORD_LEN};
use crate::error::{Error, Result};

type LetterFn = dyn Fn(i64) -> LetterId + Send + Sync;

/// A position-indexed letter source: either a substitution fixed point,
/// materialized lazily and memoized, or a pure function of the position.
///
/// Clones share the memo cache.
#[derive(Clone)]
pub struct SymbolicSequence {
    alphabet: Alphabet,
    source: Source,
}

#[derive(Clone)]
enum Source {
    FixedPoint(Arc<FixedPoint>),
    Function { two_sided: bool, f: Arc<LetterFn> },
}

/// Iterates of `rule` (already raised to the requested power) on the seed
/// letters. Each iterate extends the previous one: rightward for the right
/// half, leftward for the left half.
struct FixedPoint {
    rule: SubstitutionRule,
    right: RwLock<Word>,
    left: Option<RwLock<Word>>,
}

impl FixedPoint {
    fn ensure(&self, cache: &RwLock<Word>, len: usize) -> Result<()> {
        if cache.read().expect("sequence cache poisoned").len() >= len {
            return Ok(());
        }
        let mut w = cache.write().expect("sequence cache poisoned");
        if len as u64 > MAX_WORD_LEN {
            return Err(Error::Resource(format!(
                "position needs a prefix of length {len} > 2^32"
            )));
        }
        while w.len() < len {
            let next = self.rule.apply(&w)?;
            if next.len() <= w.len() {
                return Err(Error::NotAFixedPoint(
                    "seed iterates do not grow".to_string(),
                ));
            }
            *w = next;
        }
        Ok(())
    }

    fn right_range(&self, start: usize, end: usize, out: &mut Vec<LetterId>) -> Result<()> {
        self.ensure(&self.right, end)?;
        let w = self.right.read().expect("sequence cache poisoned");
        out.extend_from_slice(&w.letters()[start..end]);
        Ok(())
    }

    /// Positions `-end..-start`, i.e. the last `end` letters of the left
    /// word up to (not including) the last `start`.
    fn left_range(&self, start: usize, end: usize, out: &mut Vec<LetterId>) -> Result<()> {
        let cache = self.left.as_ref().expect("two-sided");
        self.ensure(cache, end)?;
        let w = cache.read().expect("sequence cache poisoned");
        let n = w.len();
        out.extend_from_slice(&w.letters()[n - end..n - start]);
        Ok(())
    }
}

impl SymbolicSequence {
    /// The one-sided fixed point `v = R v` grown from `seed`, defined on `n ≥ 0`.
    pub fn one_sided_fixed_point(rule: &SubstitutionRule, seed: LetterId) -> Result<Self> {
        if !rule.alphabet().contains(seed) {
            return Err(Error::invalid(format!("unknown seed letter id {}", seed.0)));
        }
        if rule.image(seed).first() != Some(seed) {
            return Err(Error::NotAFixedPoint(format!(
                "image of '{}' does not begin with it",
                rule.alphabet().display(seed)
            )));
        }
        if !rule.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        Ok(SymbolicSequence {
            alphabet: rule.alphabet().clone(),
            source: Source::FixedPoint(Arc::new(FixedPoint {
                rule: rule.clone(),
                right: RwLock::new(Word::from(vec![seed])),
                left: None,
            })),
        })
    }

    /// The bi-infinite word `w = R^power w` grown from the seed pair
    /// `left_seed|right_seed`, with the origin between them.
    pub fn two_sided_fixed_point(
        rule: &SubstitutionRule,
        left_seed: LetterId,
        right_seed: LetterId,
        power: u32,
    ) -> Result<Self> {
        for s in [left_seed, right_seed] {
            if !rule.alphabet().contains(s) {
                return Err(Error::invalid(format!("unknown seed letter id {}", s.0)));
            }
        }
        if !rule.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let powered = rule.power(power)?;
        let (l, r) = (powered.image(left_seed), powered.image(right_seed));
        if l.last() != Some(left_seed) || r.first() != Some(right_seed) {
            let a = rule.alphabet();
            return Err(Error::NotAFixedPoint(format!(
                "seed {}|{} is not stable under the rule to the power {power}",
                a.display(left_seed),
                a.display(right_seed)
            )));
        }
        Ok(SymbolicSequence {
            alphabet: rule.alphabet().clone(),
            source: Source::FixedPoint(Arc::new(FixedPoint {
                rule: powered,
                right: RwLock::new(Word::from(vec![right_seed])),
                left: Some(RwLock::new(Word::from(vec![left_seed]))),
            })),
        })
    }

    /// A sequence defined on all of `Z` by a pure function.
    pub fn from_fn<F>(alphabet: Alphabet, f: F) -> Self
    where
        F: Fn(i64) -> LetterId + Send + Sync + 'static,
    {
        SymbolicSequence {
            alphabet,
            source: Source::Function {
                two_sided: true,
                f: Arc::new(f),
            },
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_two_sided(&self) -> bool {
        match &self.source {
            Source::FixedPoint(fp) => fp.left.is_some(),
            Source::Function { two_sided, .. } => *two_sided,
        }
    }

    pub fn at(&self, n: i64) -> Result<LetterId> {
        Ok(self.window(n..n + 1)?[0])
    }

    /// Letters at positions `range`, in order.
    pub fn window(&self, range: Range<i64>) -> Result<Vec<LetterId>> {
        if range.start >= range.end {
            return Ok(Vec::new());
        }
        if range.start < 0 && !self.is_two_sided() {
            return Err(Error::invalid(format!(
                "position {} is left of a one-sided sequence",
                range.start
            )));
        }
        match &self.source {
            Source::Function { f, .. } => Ok(range.map(|n| f(n)).collect()),
            Source::FixedPoint(fp) => {
                let len = (range.end as i128 - range.start as i128) as usize;
                let mut out = Vec::with_capacity(len);
                if range.start < 0 {
                    let hi = range.end.min(0);
                    fp.left_range(
                        hi.unsigned_abs() as usize,
                        range.start.unsigned_abs() as usize,
                        &mut out,
                    )?;
                }
                if range.end > 0 {
                    let lo = range.start.max(0) as usize;
                    fp.right_range(lo, range.end as usize, &mut out)?;
                }
                Ok(out)
            }
        }
    }

    /// Scattering weights over `range`, using the alphabet's `u` values.
    pub fn weights(&self, range: Range<i64>) -> Result<Vec<f64>> {
        let w = self.alphabet.weights();
        Ok(self
            .window(range)?
            .into_iter()
            .map(|id| w[id.index()])
            .collect())
    }

    pub fn render(&self, range: Range<i64>) -> Result<String> {
        let letters = self.window(range)?;
        Ok(letters.iter().map(|&id| self.alphabet.display(id)).collect())
    }
}

impl fmt::Debug for SymbolicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::FixedPoint(_) => "fixed-point",
            Source::Function { .. } => "function",
        };
        f.debug_struct("SymbolicSequence")
            .field("kind", &kind)
            .field("two_sided", &self.is_two_sided())
            .finish()
    }
}

/// Smallest `p ≤ max_p` with `seq(n + p) = seq(n)` whenever both `n` and
/// `n + p` lie in `window`.
pub fn has_period_up_to(
    seq: &SymbolicSequence,
    window: Range<i64>,
    max_p: u64,
) -> Result<Option<u64>> {
    if max_p == 0 {
        return Err(Error::invalid("max_p must be positive"));
    }
    let len = (window.end as i128 - window.start as i128).max(0) as u128;
    if len < 2 * max_p as u128 {
        return Err(Error::invalid(format!(
            "window of length {len} is shorter than 2·max_p = {}",
            2 * max_p as u128
        )));
    }
    let letters = seq.window(window)?;
    Ok((1..=max_p as usize)
        .find(|&p| letters[p..].iter().zip(&letters).all(|(a, b)| a == b))
        .map(|p| p as u64))
}
