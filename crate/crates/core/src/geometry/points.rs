use super::QuadInt;
use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, LetterId, Word};

/// Left endpoints of tiles on the line. `labels[i]` is the type of the tile
/// starting at `points[i]`; the last point may be an unlabelled right end.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TilePointSet {
    points: Vec<QuadInt>,
    labels: Vec<LetterId>,
}

impl TilePointSet {
    pub fn new(points: Vec<QuadInt>, labels: Vec<LetterId>) -> Result<Self> {
        if labels.len() != points.len() && labels.len() + 1 != points.len() {
            return Err(Error::invalid(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("points are not strictly increasing"));
        }
        Ok(TilePointSet { points, labels })
    }

    pub fn points(&self) -> &[QuadInt] {
        &self.points
    }

    pub fn labels(&self) -> &[LetterId] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<LetterId> {
        self.labels.get(i).copied()
    }

    pub fn gaps(&self) -> Vec<QuadInt> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `m,n,a,b,label` per point, with `x = a + bτ = m + nτ`. The label
    /// column is empty for an unlabelled right end.
    pub fn to_csv(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            let label = self
                .label(i)
                .map(|id| alphabet.display(id).to_string())
                .unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{}\n", p.a, p.b, p.a, p.b, label));
        }
        out
    }

    pub fn from_csv(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |message: String| Error::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [m, n, a, b, label] = fields[..] else {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            };
            let int = |s: &str| s.parse::<i64>().map_err(|_| err(format!("'{s}' is not an integer")));
            let (m, n, a, b) = (int(m)?, int(n)?, int(a)?, int(b)?);
            if (m, n) != (a, b) {
                return Err(err("lattice and physical coordinates disagree".into()));
            }
            points.push(QuadInt::new(a, b));
            let mut chars = label.chars();
            match (chars.next(), chars.next()) {
                (None, _) => {}
                (Some(c), None) => {
                    if labels.len() + 1 != points.len() {
                        return Err(err("labelled point after an unlabelled one".into()));
                    }
                    labels.push(alphabet.letter(c).map_err(|e| err(e.to_string()))?);
                }
                _ => return Err(err(format!("'{label}' is not a single letter"))),
            }
        }
        TilePointSet::new(points, labels)
    }
}

/// Cumulative tile endpoints of `word`: `p_0 = origin`,
/// `p_{i+1} = p_i + length(word_i)`.
pub fn word_to_point_set(word: &Word, lengths: &[QuadInt], origin: QuadInt) -> Result<TilePointSet> {
    let mut points = Vec::with_capacity(word.len() + 1);
    let mut p = origin;
    points.push(p);
    for id in word {
        let len = lengths
            .get(id.index())
            .ok_or_else(|| Error::invalid(format!("no length for letter id {}", id.0)))?;
        if len.signum() <= 0 {
            return Err(Error::invalid("tile lengths must be positive"));
        }
        p = p.checked_add(*len)?;
        points.push(p);
    }
    TilePointSet::new(points, word.letters().to_vec())
}
