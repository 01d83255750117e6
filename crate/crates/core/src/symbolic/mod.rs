//! Alphabets, words and substitution rules.
//!
//! Letters are interned as small integer ids; the display character and the
//! scattering weight travel with the [`Alphabet`] rather than with each
//! word. A [`SubstitutionRule`] owns its alphabet, the image of every
//! letter, and the abelianized [`SubstMatrix`] computed at construction.

mod matrix;
mod parse;
mod sequence;

pub use matrix::{PfData, SubstMatrix};
pub use parse::parse_rule;
pub use sequence::{has_period_up_to, SymbolicSequence};

use std::fmt;

use crate::error::{Error, Result};

/// Words longer than this are rejected instead of materialized.
pub const MAX_WORD_LEN: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterId(pub u8);

impl LetterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Letter {
    pub id: LetterId,
    pub display: char,
    /// ASCII stand-in accepted on input, e.g. `l` for `ℓ`.
    pub alias: Option<char>,
    /// Scattering strength `u`.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    /// Builds an alphabet from `(display, weight)` pairs, assigning ids in order.
    pub fn new<I>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (char, f64)>,
    {
        let mut out: Vec<Letter> = Vec::new();
        for (i, (display, weight)) in letters.into_iter().enumerate() {
            if i > u8::MAX as usize {
                return Err(Error::invalid("alphabet has more than 256 letters"));
            }
            if out.iter().any(|l| l.display == display) {
                return Err(Error::invalid(format!("duplicate letter '{display}'")));
            }
            if !weight.is_finite() {
                return Err(Error::invalid(format!("weight of '{display}' is not finite")));
            }
            out.push(Letter {
                id: LetterId(i as u8),
                display,
                alias: None,
                weight,
            });
        }
        if out.is_empty() {
            return Err(Error::invalid("empty alphabet"));
        }
        Ok(Alphabet { letters: out })
    }

    pub(crate) fn with_alias(mut self, display: char, alias: char) -> Self {
        if let Some(l) = self.letters.iter_mut().find(|l| l.display == display) {
            l.alias = Some(alias);
        }
        self
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn get(&self, id: LetterId) -> Option<&Letter> {
        self.letters.get(id.index())
    }

    pub fn display(&self, id: LetterId) -> char {
        self.get(id).map_or('?', |l| l.display)
    }

    pub fn weight(&self, id: LetterId) -> f64 {
        self.get(id).map_or(0.0, |l| l.weight)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.letters.iter().map(|l| l.weight).collect()
    }

    pub fn set_weight(&mut self, id: LetterId, weight: f64) -> Result<()> {
        if !weight.is_finite() {
            return Err(Error::invalid("weight is not finite"));
        }
        let letter = self
            .letters
            .get_mut(id.index())
            .ok_or_else(|| Error::invalid(format!("unknown letter id {}", id.0)))?;
        letter.weight = weight;
        Ok(())
    }

    pub fn lookup(&self, c: char) -> Option<LetterId> {
        self.letters
            .iter()
            .find(|l| l.display == c || l.alias == Some(c))
            .map(|l| l.id)
    }

    pub fn letter(&self, c: char) -> Result<LetterId> {
        self.lookup(c)
            .ok_or_else(|| Error::invalid(format!("letter '{c}' is not in the alphabet")))
    }

    /// Parses a word from display characters; whitespace is ignored.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.letter(c))
            .collect::<Result<Vec<_>>>()
            .map(Word::from)
    }

    pub fn render(&self, word: &Word) -> String {
        word.iter().map(|&id| self.display(id)).collect()
    }

    pub fn contains(&self, id: LetterId) -> bool {
        id.index() < self.letters.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<LetterId>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[LetterId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LetterId> {
        self.0.iter()
    }

    pub fn push(&mut self, id: LetterId) {
        self.0.push(id);
    }

    pub fn first(&self) -> Option<LetterId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<LetterId> {
        self.0.last().copied()
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    /// Letter-count (Parikh) vector over an alphabet of `size` letters.
    pub fn counts(&self, size: usize) -> Vec<u64> {
        let mut c = vec![0u64; size];
        for id in &self.0 {
            if let Some(slot) = c.get_mut(id.index()) {
                *slot += 1;
            }
        }
        c
    }

    pub fn into_inner(self) -> Vec<LetterId> {
        self.0
    }
}

impl From<Vec<LetterId>> for Word {
    fn from(v: Vec<LetterId>) -> Self {
        Word(v)
    }
}

impl FromIterator<LetterId> for Word {
    fn from_iter<T: IntoIterator<Item = LetterId>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a LetterId;
    type IntoIter = std::slice::Iter<'a, LetterId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionRule {
    alphabet: Alphabet,
    images: Vec<Word>,
    matrix: SubstMatrix,
}

impl SubstitutionRule {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::invalid(format!(
                "{} images for an alphabet of {} letters",
                images.len(),
                alphabet.len()
            )));
        }
        for (letter, image) in alphabet.letters().iter().zip(&images) {
            if image.is_empty() {
                return Err(Error::invalid(format!(
                    "image of '{}' is empty",
                    letter.display
                )));
            }
            if let Some(bad) = image.iter().find(|id| !alphabet.contains(**id)) {
                return Err(Error::invalid(format!(
                    "image of '{}' uses unknown letter id {}",
                    letter.display, bad.0
                )));
            }
        }
        let matrix = SubstMatrix::from_images(alphabet.len(), &images);
        debug_assert!(matrix.column_sums().iter().zip(&images).all(|(&s, w)| s == w.len() as u64));
        Ok(SubstitutionRule {
            alphabet,
            images,
            matrix,
        })
    }

    /// `r ↦ rb`, `b ↦ rr` with `u(r) = 1`, `u(b) = 0`.
    pub fn period_doubling() -> Self {
        let alphabet = Alphabet::new([('r', 1.0), ('b', 0.0)]).expect("valid alphabet");
        let (r, b) = (LetterId(0), LetterId(1));
        SubstitutionRule::new(alphabet, vec![Word(vec![r, b]), Word(vec![r, r])])
            .expect("valid rule")
    }

    /// `ℓ ↦ ℓs`, `s ↦ ℓ`. Input may spell `ℓ` as `l`.
    pub fn fibonacci() -> Self {
        let alphabet = Alphabet::new([('ℓ', 1.0), ('s', 1.0)])
            .expect("valid alphabet")
            .with_alias('ℓ', 'l');
        let (l, s) = (LetterId(0), LetterId(1));
        SubstitutionRule::new(alphabet, vec![Word(vec![l, s]), Word(vec![l])])
            .expect("valid rule")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "period-doubling" => Some(Self::period_doubling()),
            "fibonacci" => Some(Self::fibonacci()),
            _ => None,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_mut(&mut self) -> &mut Alphabet {
        &mut self.alphabet
    }

    pub fn image(&self, id: LetterId) -> &Word {
        &self.images[id.index()]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn matrix(&self) -> &SubstMatrix {
        &self.matrix
    }

    pub fn letter(&self, c: char) -> Result<LetterId> {
        self.alphabet.letter(c)
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        self.alphabet.parse_word(s)
    }

    pub fn render(&self, word: &Word) -> String {
        self.alphabet.render(word)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.iter().find(|id| !self.alphabet.contains(**id)) {
            Some(bad) => Err(Error::invalid(format!("unknown letter id {}", bad.0))),
            None => Ok(()),
        }
    }

    fn image_len_of(&self, w: &Word) -> u64 {
        w.iter().map(|id| self.images[id.index()].len() as u64).sum()
    }

    /// Replaces every letter of `w` by its image.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        let len = self.image_len_of(w);
        if len > MAX_WORD_LEN {
            return Err(Error::Resource(format!("word of length {len} exceeds 2^32")));
        }
        let mut out = Vec::with_capacity(len as usize);
        for id in w {
            out.extend_from_slice(&self.images[id.index()].0);
        }
        Ok(Word(out))
    }

    /// `k`-fold application of [`apply`](Self::apply); `k = 0` returns `seed`.
    pub fn iterate(&self, seed: &Word, k: u32) -> Result<Word> {
        self.check_word(seed)?;
        // Project the length through the matrix first so oversize requests
        // fail before anything large is allocated.
        let mut counts = seed.counts(self.alphabet.len());
        for _ in 0..k {
            counts = self.matrix.apply_saturating(&counts);
            let len = counts.iter().fold(0u64, |a, &c| a.saturating_add(c));
            if len > MAX_WORD_LEN {
                return Err(Error::Resource(format!(
                    "iterate of length {len} exceeds 2^32"
                )));
            }
        }
        let mut w = seed.clone();
        for _ in 0..k {
            w = self.apply(&w)?;
        }
        Ok(w)
    }

    /// The rule `R^p`, whose images are the `p`-th iterates of single letters.
    pub fn power(&self, p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("rule power must be positive"));
        }
        let images = self
            .alphabet
            .letters()
            .iter()
            .map(|l| self.iterate(&Word(vec![l.id]), p))
            .collect::<Result<Vec<_>>>()?;
        SubstitutionRule::new(self.alphabet.clone(), images)
    }

    pub fn is_primitive(&self) -> bool {
        self.matrix.is_primitive()
    }

    pub fn pf_data(&self) -> Result<PfData> {
        self.matrix.pf_data()
    }
}

impl fmt::Display for SubstitutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (letter, image) in self.alphabet.letters().iter().zip(&self.images) {
            write!(f, "{} ->", letter.display)?;
            for id in image {
                write!(f, " {}", self.alphabet.display(*id))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `f_k` with `f_0 = 0`, `f_1 = 1`. Returns `None` past `k = 93`, where
/// the value no longer fits in a `u64`.
pub fn fibonacci_number(k: u32) -> Option<u64> {
    if k == 0 {
        return Some(0);
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..k {
        let next = a.checked_add(b)?;
        a = b;
        b = next;
    }
    Some(b)
}

/// Arbitrary-precision `f_k`.
pub fn fibonacci_big(k: u32) -> num_bigint::BigUint {
    let (mut a, mut b) = (num_bigint::BigUint::from(0u8), num_bigint::BigUint::from(1u8));
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let s = SubstitutionRule::period_doubling();
        assert_eq!(s.render(&s.apply(&s.word("r").unwrap()).unwrap()), "rb");
        assert_eq!(s.render(&s.apply(&s.word("rbrr").unwrap()).unwrap()), "rbrrrbrb");
        let f = SubstitutionRule::fibonacci();
        assert_eq!(f.render(&f.apply(&f.word("ℓsℓ").unwrap()).unwrap()), "ℓsℓℓs");
    }

    #[test]
    fn apply_rejects_unknown_letter() {
        let s = SubstitutionRule::period_doubling();
        let w = Word::from(vec![LetterId(0), LetterId(7)]);
        assert!(matches!(s.apply(&w), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn iterate_examples() {
        let s = SubstitutionRule::period_doubling();
        let r = s.word("r").unwrap();
        assert_eq!(s.render(&s.iterate(&r, 4).unwrap()), "rbrrrbrbrbrrrbrr");
        let f = SubstitutionRule::fibonacci();
        let l = f.word("l").unwrap();
        assert_eq!(f.render(&f.iterate(&l, 5).unwrap()), "ℓsℓℓsℓsℓℓsℓℓs");
        let seed = f.word("sℓs").unwrap();
        assert_eq!(f.iterate(&seed, 0).unwrap(), seed);
    }

    #[test]
    fn iterate_refuses_oversized_words() {
        let s = SubstitutionRule::period_doubling();
        let r = s.word("r").unwrap();
        assert!(matches!(s.iterate(&r, 33), Err(Error::Resource(_))));
        assert!(matches!(s.iterate(&r, 200), Err(Error::Resource(_))));
    }

    #[test]
    fn rule_validation() {
        let a = Alphabet::new([('a', 1.0), ('b', 1.0)]).unwrap();
        let err = SubstitutionRule::new(a.clone(), vec![Word::from(vec![LetterId(0)]), Word::new()]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        let err = SubstitutionRule::new(a, vec![Word::from(vec![LetterId(0)])]);
        assert!(err.is_err());
        assert!(Alphabet::new([('a', 1.0), ('a', 0.0)]).is_err());
    }

    #[test]
    fn power_matches_iterate() {
        let s = SubstitutionRule::period_doubling();
        let s2 = s.power(2).unwrap();
        assert_eq!(s.render(s2.image(LetterId(0))), "rbrr");
        assert_eq!(s.render(s2.image(LetterId(1))), "rbrb");
    }

    #[test]
    fn fibonacci_numbers() {
        let v: Vec<u64> = (0..10).map(|k| fibonacci_number(k).unwrap()).collect();
        assert_eq!(v, [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]);
        assert_eq!(fibonacci_number(93), Some(12_200_160_415_121_876_738));
        assert_eq!(fibonacci_number(94), None);
        assert_eq!(fibonacci_big(94).to_string(), "19740274219868223167");
        let ratio = fibonacci_number(50).unwrap() as f64 / fibonacci_number(49).unwrap() as f64;
        assert!((ratio - 1.618_033_988_749_895).abs() <= 1e-9);
    }

    #[test]
    fn alias_lookup() {
        let f = SubstitutionRule::fibonacci();
        assert_eq!(f.word("lsl").unwrap(), f.word("ℓsℓ").unwrap());
        assert!(f.word("x").is_err());
    }
}
