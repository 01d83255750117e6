//! Plain-text SVG figures.
//!
//! Shapes are stored in data coordinates (the `k` axis for diffraction, the
//! physical line for point sets, `(x, x*)` for the lattice) and placed by a
//! single uniform-scale group transform, so every emitted `cx`/`cy` is the
//! `f64` image of the exact value it came from.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::geometry::{lattice_candidates, QuadInt, TilePointSet, Window, XRange};
use crate::spectra::{DiffractionPeak, KRange};
use crate::symbolic::{Alphabet, LetterId};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        fill: String,
        class: Option<&'static str>,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        stroke: String,
        width: f64,
    },
    Polygon {
        points: Vec<(f64, f64)>,
        fill: String,
        opacity: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    /// Data-space rectangle `(x_min, y_min, x_max, y_max)` mapped onto the
    /// canvas with equal scale on both axes (y up).
    pub view: (f64, f64, f64, f64),
    pub elements: Vec<Element>,
}

impl SvgDocument {
    pub fn new(view: (f64, f64, f64, f64), width: f64) -> Self {
        let (x0, y0, x1, y1) = view;
        let scale = width / (x1 - x0).max(f64::MIN_POSITIVE);
        SvgDocument {
            width,
            height: ((y1 - y0) * scale).max(1.0),
            view,
            elements: Vec::new(),
        }
    }

    pub fn circles(&self) -> impl Iterator<Item = (f64, f64, f64, &str, Option<&'static str>)> + '_ {
        self.elements.iter().filter_map(|e| match e {
            Element::Circle { cx, cy, r, fill, class } => Some((*cx, *cy, *r, fill.as_str(), *class)),
            _ => None,
        })
    }

    fn push(&mut self, e: Element) {
        self.elements.push(e);
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        self.push(Element::Line { x1, y1, x2, y2, stroke: stroke.into(), width });
    }

    fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str, class: Option<&'static str>) {
        self.push(Element::Circle { cx, cy, r, fill: fill.into(), class });
    }

    fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, fill: &str, opacity: f64) {
        self.push(Element::Polygon {
            points: vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)],
            fill: fill.into(),
            opacity,
        });
    }

    pub fn to_svg(&self) -> String {
        let (x0, _, x1, y1) = self.view;
        let scale = self.width / (x1 - x0).max(f64::MIN_POSITIVE);
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(
            s,
            r#"<g transform="matrix({scale} 0 0 {} {} {})">"#,
            -scale,
            -x0 * scale,
            y1 * scale
        );
        for e in &self.elements {
            match e {
                Element::Circle { cx, cy, r, fill, class } => {
                    let class = class.map(|c| format!(r#" class="{c}""#)).unwrap_or_default();
                    let _ = writeln!(s, r#"<circle{class} cx="{cx}" cy="{cy}" r="{r}" fill="{fill}"/>"#);
                }
                Element::Line { x1, y1, x2, y2, stroke, width } => {
                    let _ = writeln!(
                        s,
                        r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" stroke-width="{width}"/>"#
                    );
                }
                Element::Polygon { points, fill, opacity } => {
                    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x},{y}")).collect();
                    let _ = writeln!(
                        s,
                        r#"<polygon points="{}" fill="{fill}" fill-opacity="{opacity}"/>"#,
                        pts.join(" ")
                    );
                }
            }
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

/// Colour for a letter: r red, b blue, ℓ yellow, s green, others grey.
pub fn letter_colour(display: char) -> &'static str {
    match display {
        'r' => "#d62728",
        'b' => "#1f77b4",
        'ℓ' | 'l' => "#f2c12e",
        's' => "#2ca02c",
        _ => "#7f7f7f",
    }
}

const LATTICE_BLUE: &str = "#4a6fd1";
const AXIS: &str = "#000000";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffractionStyle {
    pub k_range: KRange,
    pub max_r: u32,
    /// Disk area per unit intensity.
    pub area_scale: f64,
}

impl Default for DiffractionStyle {
    /// `k ∈ [−2, 2]`, `max_r = 6`, and `I = 4/9` drawn with radius 0.05.
    fn default() -> Self {
        DiffractionStyle {
            k_range: KRange::closed(Rational::from_integer(-2), Rational::from_integer(2)),
            max_r: 6,
            area_scale: std::f64::consts::PI * 0.05 * 0.05 / (4.0 / 9.0),
        }
    }
}

/// One disk per peak, centred at `(k, 0)` with area `area_scale · I(k)`.
pub fn render_diffraction(peaks: &[DiffractionPeak], style: &DiffractionStyle) -> SvgDocument {
    let lo = style.k_range.lo.to_f64().unwrap_or(-2.0);
    let hi = style.k_range.hi.to_f64().unwrap_or(2.0);
    let pad = 0.1;
    let mut doc = SvgDocument::new((lo - pad, -0.25, hi + pad, 0.25), 1200.0);
    doc.line(lo, 0.0, hi, 0.0, AXIS, 0.002);
    for k in (lo.ceil() as i64)..=(hi.floor() as i64) {
        doc.line(k as f64, -0.02, k as f64, 0.02, AXIS, 0.002);
    }
    for p in peaks {
        let intensity = p.intensity.to_f64().unwrap_or(0.0);
        let r = (style.area_scale * intensity / std::f64::consts::PI).sqrt();
        doc.circle(p.k.to_f64(), 0.0, r, "#1f1f1f", Some("peak"));
    }
    doc
}

/// Coloured integer positions with an origin tick, like the point-set rows.
pub fn render_coloured_points(points: &[(i64, LetterId)], alphabet: &Alphabet, range: (i64, i64)) -> SvgDocument {
    let (lo, hi) = (range.0 as f64, range.1 as f64);
    let mut doc = SvgDocument::new((lo - 1.0, -1.0, hi + 1.0, 1.0), 40.0 * (hi - lo + 2.0).max(2.0));
    doc.line(lo - 0.5, 0.0, hi + 0.5, 0.0, AXIS, 0.03);
    doc.line(0.0, -0.5, 0.0, 0.5, AXIS, 0.05);
    for &(n, id) in points {
        if n < range.0 || n > range.1 {
            continue;
        }
        doc.circle(n as f64, 0.0, 0.25, letter_colour(alphabet.display(id)), Some("point"));
    }
    doc
}

/// Tiles as coloured bars between consecutive points, points as dots.
pub fn render_tiles(tiles: &TilePointSet, alphabet: &Alphabet, range: &XRange) -> SvgDocument {
    let (lo, hi) = (range.lo.to_f64(), range.hi.to_f64());
    let mut doc = SvgDocument::new((lo - 1.0, -1.0, hi + 1.0, 1.0), 60.0 * (hi - lo + 2.0).max(2.0));
    doc.line(lo - 0.5, 0.0, hi + 0.5, 0.0, AXIS, 0.02);
    doc.line(0.0, -0.5, 0.0, 0.5, AXIS, 0.04);
    let pts = tiles.points();
    for (i, pair) in pts.windows(2).enumerate() {
        if let Some(id) = tiles.label(i) {
            let colour = letter_colour(alphabet.display(id));
            doc.rect(pair[0].to_f64(), -0.15, pair[1].to_f64(), 0.15, colour, 0.8);
        }
    }
    for p in pts {
        doc.circle(p.to_f64(), 0.0, 0.12, AXIS, Some("point"));
    }
    doc
}

/// Lattice `(x, x*)`, the window bands, accepted points and their
/// projections onto a baseline below the strip.
pub fn render_cps_diagram(window: &Window, alphabet: &Alphabet, range: &XRange) -> crate::Result<SvgDocument> {
    let (lo, hi) = (range.lo.to_f64(), range.hi.to_f64());
    let bounds = window.bounds();
    let (wlo, whi) = (bounds.lo.to_f64(), bounds.hi.to_f64());
    let (ylo, yhi) = (wlo - 2.0, whi + 2.0);
    let baseline = ylo - 1.0;
    let mut doc = SvgDocument::new((lo - 1.0, baseline - 1.0, hi + 1.0, yhi + 0.5), 60.0 * (hi - lo + 2.0).max(2.0));

    for (iv, id) in window.parts() {
        let colour = letter_colour(alphabet.display(*id));
        doc.rect(lo - 0.5, iv.lo.to_f64(), hi + 0.5, iv.hi.to_f64(), colour, 0.35);
    }
    doc.line(lo - 0.5, baseline, hi + 0.5, baseline, AXIS, 0.02);

    // Every lattice point in the drawn box, from a widened window.
    let wide = crate::geometry::Interval::new(
        QuadInt::int(ylo.floor() as i64),
        QuadInt::int(yhi.ceil() as i64),
        true,
        true,
    )?;
    let all = lattice_candidates(&Window::new(vec![(wide, LetterId(0))])?, range)?;
    for (lp, _) in &all {
        let (x, xs) = (lp.physical(), lp.internal());
        if window.label(xs).is_none() {
            doc.circle(x.to_f64(), xs.to_f64(), 0.06, LATTICE_BLUE, Some("lattice"));
        }
    }
    for (lp, label) in lattice_candidates(window, range)? {
        let Some(id) = label else { continue };
        let (x, xs) = (lp.physical(), lp.internal());
        doc.circle(x.to_f64(), xs.to_f64(), 0.09, LATTICE_BLUE, Some("accepted"));
        doc.line(x.to_f64(), xs.to_f64(), x.to_f64(), baseline, "#999999", 0.01);
        doc.circle(x.to_f64(), baseline, 0.1, letter_colour(alphabet.display(id)), Some("projected"));
    }
    Ok(doc)
}
