//! Cut-and-project description of the Fibonacci chain.
//!
//! `Z[τ]` embeds in the plane as `m + nτ ↦ (x, x*)` with `x = m + nτ` and
//! `x* = (m + n) − nτ`. A lattice point is selected when `x*` falls in the
//! window and projected to `x`; the sub-window containing `x*` fixes the
//! tile type starting there.

use std::cmp::Ordering;

use super::{QuadInt, TilePointSet, Window, XRange};
use crate::error::{Error, Result};
use crate::symbolic::{LetterId, SubstitutionRule, SymbolicSequence};

const SQRT5: f64 = 2.236_067_977_499_79;

/// Ranges wider than this are refused; the float bounding box stays exact
/// to far better than its one-unit slack well inside it.
pub const MAX_RANGE_WIDTH: f64 = 1e9;

/// A lattice point of the Minkowski embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
}

impl LatticePoint {
    pub fn physical(self) -> QuadInt {
        QuadInt::new(self.m, self.n)
    }

    pub fn internal(self) -> QuadInt {
        self.physical().star()
    }
}

/// All lattice points with `x` in `x_range` and `x*` in the closure of the
/// window's bounds, as `(point, label)`; the label is `None` when `x*`
/// sits on an excluded endpoint. Sorted by `x`.
pub fn lattice_candidates(window: &Window, x_range: &XRange) -> Result<Vec<(LatticePoint, Option<LetterId>)>> {
    if x_range.width_f64() > MAX_RANGE_WIDTH {
        return Err(Error::Resource(format!(
            "range width {} exceeds {MAX_RANGE_WIDTH}",
            x_range.width_f64()
        )));
    }
    let bounds = window.bounds();
    let (xa, xb) = (x_range.lo.to_f64(), x_range.hi.to_f64());
    let (c, d) = (bounds.lo.to_f64(), bounds.hi.to_f64());
    // x − x* = n√5, so (A − d)/√5 ≤ n ≤ (B − c)/√5.
    let n_lo = ((xa - d) / SQRT5).floor() as i64 - 1;
    let n_hi = ((xb - c) / SQRT5).ceil() as i64 + 1;
    let tau = super::TAU_F64;
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        let nf = n as f64;
        // A ≤ m + nτ ≤ B  and  c ≤ m + n(1 − τ) ≤ d.
        let m_lo = (xa - nf * tau).max(c - nf * (1.0 - tau)).floor() as i64 - 1;
        let m_hi = (xb - nf * tau).min(d - nf * (1.0 - tau)).ceil() as i64 + 1;
        for m in m_lo..=m_hi {
            let lp = LatticePoint { m, n };
            let x = lp.physical();
            if !x_range.contains(x) {
                continue;
            }
            let xs = x.checked_star()?;
            if xs < bounds.lo || xs > bounds.hi {
                continue;
            }
            out.push((lp, window.label(xs)));
        }
    }
    out.sort_by_key(|(lp, _)| lp.physical());
    Ok(out)
}

/// The model set of `window` restricted to `x_range`, labelled by sub-window.
pub fn cut_and_project(window: &Window, x_range: &XRange) -> Result<TilePointSet> {
    let (points, labels): (Vec<_>, Vec<_>) = lattice_candidates(window, x_range)?
        .into_iter()
        .filter_map(|(lp, label)| label.map(|l| (lp.physical(), l)))
        .unzip();
    TilePointSet::new(points, labels)
}

/// Fibonacci tiling from the `ℓ|ℓ` fixed point of `F²` with lengths
/// `ℓ = τ`, `s = 1` and the origin between the seeds: every tile endpoint
/// in `x_range`, each labelled by the tile starting there.
pub fn inflation_points(x_range: &XRange) -> Result<TilePointSet> {
    if x_range.width_f64() > MAX_RANGE_WIDTH {
        return Err(Error::Resource("range too wide".into()));
    }
    let f = SubstitutionRule::fibonacci();
    let l = f.letter('ℓ')?;
    let w = SymbolicSequence::two_sided_fixed_point(&f, l, l, 2)?;
    let lengths = [QuadInt::TAU, QuadInt::ONE];
    let len_of = |id: LetterId| lengths[id.index()];

    let mut right = Vec::new();
    let mut p = QuadInt::ZERO;
    let mut i = 0i64;
    let mut chunk = 256i64;
    // Walk right from the origin until past hi.
    'right: loop {
        for id in w.window(i..i + chunk)? {
            if x_range.hi.cmp_point(p) == Ordering::Greater {
                break 'right;
            }
            right.push((p, id));
            p = p.checked_add(len_of(id))?;
        }
        i += chunk;
        chunk *= 2;
    }
    let mut left = Vec::new();
    let mut p = QuadInt::ZERO;
    let mut j = 0i64;
    let mut chunk = 256i64;
    // Walk left: tile at position −k spans [p − len, p].
    'left: loop {
        let letters = w.window(j - chunk..j)?;
        for &id in letters.iter().rev() {
            let start = p.checked_sub(len_of(id))?;
            if x_range.lo.cmp_point(start) == Ordering::Less {
                break 'left;
            }
            left.push((start, id));
            p = start;
        }
        j -= chunk;
        chunk *= 2;
    }
    left.reverse();
    let (points, labels): (Vec<_>, Vec<_>) = left
        .into_iter()
        .chain(right)
        .filter(|(p, _)| x_range.contains(*p))
        .unzip();
    TilePointSet::new(points, labels)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub matched: bool,
    pub cps_points: usize,
    pub inflation_points: usize,
    /// First index where point or label differ.
    pub first_mismatch: Option<usize>,
}

/// Cut-and-project with the default window against the inflation tiling,
/// point by point and label by label.
pub fn compare_cps_to_inflation(x_range: &XRange) -> Result<CompareReport> {
    let cps = cut_and_project(&Window::fibonacci_default(), x_range)?;
    let infl = inflation_points(x_range)?;
    let first_mismatch = (0..cps.len().max(infl.len())).find(|&i| {
        cps.points().get(i) != infl.points().get(i) || cps.label(i) != infl.label(i)
    });
    Ok(CompareReport {
        matched: first_mismatch.is_none(),
        cps_points: cps.len(),
        inflation_points: infl.len(),
        first_mismatch,
    })
}
