use num_integer::Roots;

use super::{word_to_point_set, QuadInt};
use crate::error::{Error, Result};
use crate::symbolic::{SubstitutionRule, Word};

/// Inflation factor and tile lengths, exactly in `Z[τ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactInflation {
    pub factor: QuadInt,
    pub lengths: Vec<QuadInt>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileLengths {
    /// Left PF eigenvector, minimum entry 1.
    pub approx: Vec<f64>,
    /// Present when λ and the lengths lie in `Z[τ]`.
    pub exact: Option<ExactInflation>,
}

pub fn natural_tile_lengths(rule: &SubstitutionRule) -> Result<TileLengths> {
    let pf = rule.pf_data()?;
    let exact = match exact_inflation(rule) {
        Ok(e) => Some(e),
        Err(Error::UnsupportedRule(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(TileLengths {
        approx: pf.lengths,
        exact,
    })
}

/// Exact PF data for one- and two-letter primitive rules whose eigenvalue
/// lies in `Z[τ]`: `λ = (t ± √D)/2` with `D` a square or five times one.
pub fn exact_inflation(rule: &SubstitutionRule) -> Result<ExactInflation> {
    if !rule.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let m = rule.matrix();
    match m.dim() {
        1 => Ok(ExactInflation {
            factor: QuadInt::int(m.get(0, 0) as i64),
            lengths: vec![QuadInt::ONE],
        }),
        2 => {
            let unsupported = || Error::UnsupportedRule("eigendata are not in Z[τ]".into());
            let get = |i, j| i64::try_from(m.get(i, j)).map_err(|_| unsupported());
            let (a, b, c, d) = (get(0, 0)?, get(0, 1)?, get(1, 0)?, get(1, 1)?);
            let t = a + d;
            let disc = (a - d) as i128 * (a - d) as i128 + 4 * b as i128 * c as i128;
            let root = disc.sqrt();
            let factor = if root * root == disc {
                // t ≡ √D (mod 2) because D ≡ t² (mod 4)
                QuadInt::int(i64::try_from((t as i128 + root) / 2).map_err(|_| unsupported())?)
            } else if disc % 5 == 0 && (disc / 5).sqrt().pow(2) == disc / 5 {
                // √D = k√5 = k(2τ − 1)
                let k = (disc / 5).sqrt();
                let k = i64::try_from(k).map_err(|_| unsupported())?;
                QuadInt::new((t - k) / 2, k)
            } else {
                return Err(unsupported());
            };
            // Left eigenvector (c, λ − a), then divide by its smaller entry.
            let l0 = QuadInt::int(c);
            let l1 = factor.checked_sub(QuadInt::int(a))?;
            let min = l0.min(l1);
            let lengths = [l0, l1]
                .iter()
                .map(|x| x.div_exact(min).ok_or_else(unsupported))
                .collect::<Result<Vec<_>>>()?;
            let (x0, x1) = (lengths[0], lengths[1]);
            let ok = x0.checked_scale(a)?.checked_add(x1.checked_scale(c)?)? == factor.checked_mul(x0)?
                && x0.checked_scale(b)?.checked_add(x1.checked_scale(d)?)? == factor.checked_mul(x1)?;
            if !ok {
                return Err(unsupported());
            }
            Ok(ExactInflation { factor, lengths })
        }
        _ => Err(Error::UnsupportedRule(
            "exact lengths are only derived for alphabets of one or two letters".into(),
        )),
    }
}

/// Scales the tiling of `word` by λ, dissects every scaled tile by the
/// rule, and checks the result against the tiling of the substituted word,
/// exactly.
pub fn inflation_consistency_check(rule: &SubstitutionRule, word: &Word) -> Result<bool> {
    let ExactInflation { factor, lengths } = exact_inflation(rule)?;
    check_with(rule, word, factor, &lengths)
}

fn check_with(rule: &SubstitutionRule, word: &Word, factor: QuadInt, lengths: &[QuadInt]) -> Result<bool> {
    let before = word_to_point_set(word, lengths, QuadInt::ZERO)?;
    let after = word_to_point_set(&rule.apply(word)?, lengths, QuadInt::ZERO)?;

    let mut points = Vec::with_capacity(after.len());
    let mut labels = Vec::with_capacity(after.labels().len());
    let pts = before.points();
    for (i, id) in word.iter().enumerate() {
        let mut cursor = factor.checked_mul(pts[i])?;
        for &piece in rule.image(*id) {
            points.push(cursor);
            labels.push(piece);
            cursor = cursor.checked_add(lengths[piece.index()])?;
        }
        if cursor != factor.checked_mul(pts[i + 1])? {
            return Ok(false);
        }
    }
    points.push(factor.checked_mul(*pts.last().expect("at least the origin"))?);
    Ok(points == after.points() && labels == after.labels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{parse_rule, Alphabet, LetterId};

    #[test]
    fn natural_lengths() {
        let f = natural_tile_lengths(&SubstitutionRule::fibonacci()).unwrap();
        let exact = f.exact.unwrap();
        assert_eq!(exact.factor, QuadInt::TAU);
        assert_eq!(exact.lengths, vec![QuadInt::TAU, QuadInt::ONE]);

        let s = natural_tile_lengths(&SubstitutionRule::period_doubling()).unwrap();
        let exact = s.exact.unwrap();
        assert_eq!(exact.factor, QuadInt::int(2));
        assert_eq!(exact.lengths, vec![QuadInt::ONE, QuadInt::ONE]);
        assert_eq!(s.approx, vec![1.0, 1.0]);

        let id = SubstitutionRule::new(
            Alphabet::new([('a', 1.0)]).unwrap(),
            vec![Word::from(vec![LetterId(0)])],
        )
        .unwrap();
        assert_eq!(natural_tile_lengths(&id).unwrap().approx, vec![1.0]);

        let diag = parse_rule("a -> a\nb -> b").unwrap();
        assert_eq!(natural_tile_lengths(&diag), Err(Error::NotPrimitive));
    }

    #[test]
    fn other_golden_rules() {
        // a → aab, b → ab has matrix [[2,1],[1,1]] = F², λ = τ².
        let rule = parse_rule("a -> aab\nb -> ab").unwrap();
        let e = exact_inflation(&rule).unwrap();
        assert_eq!(e.factor, QuadInt::new(1, 1));
        let w = rule.iterate(&rule.word("a").unwrap(), 4).unwrap();
        assert!(inflation_consistency_check(&rule, &w).unwrap());
        // Silver mean: λ = 1 + √2 is not in Z[τ].
        let silver = parse_rule("a -> aab\nb -> a").unwrap();
        assert!(matches!(exact_inflation(&silver), Err(Error::UnsupportedRule(_))));
        assert!(natural_tile_lengths(&silver).unwrap().exact.is_none());
    }

    #[test]
    fn consistency_examples() {
        let f = SubstitutionRule::fibonacci();
        assert!(inflation_consistency_check(&f, &f.word("ℓ").unwrap()).unwrap());
        assert!(inflation_consistency_check(&f, &f.word("s").unwrap()).unwrap());
        let w = f.iterate(&f.word("ℓ").unwrap(), 6).unwrap();
        assert!(inflation_consistency_check(&f, &w).unwrap());
        let s = SubstitutionRule::period_doubling();
        let w = s.iterate(&s.word("r").unwrap(), 6).unwrap();
        assert!(inflation_consistency_check(&s, &w).unwrap());
    }

    #[test]
    fn wrong_lengths_fail() {
        let f = SubstitutionRule::fibonacci();
        let w = f.iterate(&f.word("ℓ").unwrap(), 5).unwrap();
        let bad = [QuadInt::int(2), QuadInt::ONE];
        assert!(!check_with(&f, &w, QuadInt::TAU, &bad).unwrap());
        assert!(!check_with(&f, &w, QuadInt::int(2), &[QuadInt::TAU, QuadInt::ONE]).unwrap());
        assert!(check_with(&f, &w, QuadInt::TAU, &[QuadInt::TAU, QuadInt::ONE]).unwrap());
    }

    #[test]
    fn dissection_order_is_irrelevant() {
        let swapped = parse_rule("l -> s l\ns -> l").unwrap();
        let w = swapped.iterate(&swapped.word("l").unwrap(), 5).unwrap();
        assert!(inflation_consistency_check(&swapped, &w).unwrap());
    }
}
