use super::{Alphabet, SubstitutionRule, Word};
use crate::error::{Error, Result};

/// Parses the line-oriented rule format:
///
/// ```text
/// # period doubling
/// r -> r b
/// b -> r r
/// weight b 0
/// ```
///
/// Letters are ordered by their rule lines. Image tokens are
/// whitespace-separated and each token may hold several letters, so
/// `r -> rb` is accepted as well. Weights default to 1.
pub fn parse_rule(text: &str) -> Result<SubstitutionRule> {
    let mut rules: Vec<(usize, char, Vec<char>)> = Vec::new();
    let mut weights: Vec<(usize, char, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix("weight") {
            if rest.starts_with(char::is_whitespace) {
                let mut parts = rest.split_whitespace();
                let (Some(letter), Some(value), None) = (parts.next(), parts.next(), parts.next())
                else {
                    return Err(err("expected `weight <letter> <real>`".into()));
                };
                let letter = single_char(letter).ok_or_else(|| err(format!("'{letter}' is not a single letter")))?;
                let value: f64 = value
                    .parse()
                    .map_err(|_| err(format!("'{value}' is not a number")))?;
                if !value.is_finite() {
                    return Err(err("weight must be finite".into()));
                }
                weights.push((line_no, letter, value));
                continue;
            }
        }
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(err("expected `<letter> -> <image>`".into()));
        };
        let lhs = lhs.trim();
        let letter = single_char(lhs).ok_or_else(|| err(format!("'{lhs}' is not a single letter")))?;
        if rules.iter().any(|(_, c, _)| *c == letter) {
            return Err(err(format!("letter '{letter}' has two rules")));
        }
        let image: Vec<char> = rhs.chars().filter(|c| !c.is_whitespace()).collect();
        if image.is_empty() {
            return Err(err(format!("image of '{letter}' is empty")));
        }
        rules.push((line_no, letter, image));
    }

    if rules.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no rules found".into(),
        });
    }

    let mut alphabet = Alphabet::new(rules.iter().map(|(_, c, _)| (*c, 1.0)))?;
    for (line, letter, value) in weights {
        let id = alphabet.lookup(letter).ok_or_else(|| Error::Parse {
            line,
            message: format!("weight for unknown letter '{letter}'"),
        })?;
        alphabet.set_weight(id, value)?;
    }
    let images = rules
        .iter()
        .map(|(line, _, image)| {
            image
                .iter()
                .map(|&c| {
                    alphabet.lookup(c).ok_or_else(|| Error::Parse {
                        line: *line,
                        message: format!("letter '{c}' has no rule"),
                    })
                })
                .collect::<Result<Word>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SubstitutionRule::new(alphabet, images)
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}
