//! Deterministic SVG diagrams of the `(b, w)` half-plane: the parabola
//! `∂U: w = b²/2`, shaded regions, lines with labels, and marked points.
//!
//! Rendering stays exact until the final step: every coordinate is
//! computed in `ℚ` and printed as a fixed-precision decimal (round half
//! to even), and elements are drawn in a canonical sorted order, so
//! identical specs produce byte-identical SVG.  The parabola itself is
//! exact: the arc of `w = b²/2` between `b₀` and `b₁` is the quadratic
//! Bézier with control points `(b₀, b₀²/2)`, `((b₀+b₁)/2, b₀b₁/2)`,
//! `(b₁, b₁²/2)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane::{PlaneLine, PlanePoint};
use crate::rat::{decimal_string, floor_sqrt, rat, rat_vec_serde, rint, Rat};
use crate::walls::Wall;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("empty {0} range: the lower endpoint must be strictly smaller")]
    EmptyRange(&'static str),
    #[error("a range needs exactly two endpoints, got {0}")]
    BadRange(usize),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("region boundary {0} is vertical; `above` needs a w-component")]
    VerticalBoundary(PlaneLine),
}

/// One drawable element.  Labels must be unique across the whole spec;
/// they double as sort keys within each element kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlotElement {
    /// The boundary parabola `w = b²/2`.
    Parabola,
    /// The locus `A·b + B·w = C`, clipped to the viewport.
    Line { line: PlaneLine, label: String },
    /// A marked point with its label beside it.
    Point { point: PlanePoint, label: String },
    /// A shaded region: everything above `above` (above the parabola
    /// when `above` is `None`, i.e. the region `U`), clipped to the
    /// viewport.
    Region {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        above: Option<PlaneLine>,
        label: String,
    },
}

impl PlotElement {
    fn sort_key(&self) -> (u8, &str) {
        match self {
            PlotElement::Region { label, .. } => (0, label),
            PlotElement::Parabola => (1, ""),
            PlotElement::Line { label, .. } => (2, label),
            PlotElement::Point { label, .. } => (3, label),
        }
    }

    fn label(&self) -> Option<&str> {
        match self {
            PlotElement::Parabola => None,
            PlotElement::Line { label, .. }
            | PlotElement::Point { label, .. }
            | PlotElement::Region { label, .. } => Some(label),
        }
    }
}

fn default_precision() -> usize {
    12
}

/// A figure description: the viewport in plane coordinates, the
/// elements to draw, and the decimal precision of the rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotSpec {
    /// `[b_min, b_max]`.
    #[serde(with = "rat_vec_serde")]
    pub b_range: Vec<Rat>,
    /// `[w_min, w_max]`.
    #[serde(with = "rat_vec_serde")]
    pub w_range: Vec<Rat>,
    pub elements: Vec<PlotElement>,
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl PlotSpec {
    pub fn validate(&self) -> Result<(), PlotError> {
        for (range, name) in [(&self.b_range, "b"), (&self.w_range, "w")] {
            if range.len() != 2 {
                return Err(PlotError::BadRange(range.len()));
            }
            if range[0] >= range[1] {
                return Err(PlotError::EmptyRange(name));
            }
        }
        let mut seen = BTreeSet::new();
        for element in &self.elements {
            if let Some(label) = element.label() {
                if !seen.insert(label) {
                    return Err(PlotError::DuplicateLabel(label.to_string()));
                }
            }
        }
        for element in &self.elements {
            if let PlotElement::Region {
                above: Some(line), ..
            } = element
            {
                if line.is_vertical() {
                    return Err(PlotError::VerticalBoundary(line.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A ready-made spec showing a list of candidate walls: the parabola,
/// the shaded region `U`, and one labeled line per wall, in a viewport
/// padded around the union of the walls' chords.
pub fn spec_from_walls(walls: &[Wall]) -> PlotSpec {
    // Fujiwara bound on the chord roots of A·b + B·w = C on w = b²/2,
    // i.e. of (B/2)·b² + A·b − C = 0: |b| ≤ 2·max(|A|/(B/2), √(|C|/(B/2))).
    let mut extent = rint(3);
    for wall in walls {
        let (a, b, c) = wall.line.coefficients();
        let a = Rat::from_integer(a.clone());
        let c = Rat::from_integer(c.clone());
        if b.is_zero() {
            // A vertical wall b = C/A has no chord; still keep it in view.
            extent = extent.max((c / a).abs());
            continue;
        }
        let half_b = (rat(1, 2) * Rat::from_integer(b.clone())).abs();
        let sqrt_term = Rat::from_integer(floor_sqrt(&((c / &half_b).abs())) + 1);
        extent = extent.max(rint(2) * (a.abs() / half_b).max(sqrt_term));
    }
    let b_lo = -extent.clone() - rint(1);
    let b_hi = extent + rint(1);
    let w_hi = (&b_lo * &b_lo).max(&b_hi * &b_hi) / rint(2);
    let w_lo = -&w_hi / rint(8);

    let mut elements = vec![
        PlotElement::Region {
            above: None,
            label: "U".to_string(),
        },
        PlotElement::Parabola,
    ];
    for wall in walls {
        elements.push(PlotElement::Line {
            line: wall.line.clone(),
            label: wall.line.to_string(),
        });
    }
    PlotSpec {
        b_range: vec![b_lo, b_hi],
        w_range: vec![w_lo, w_hi],
        elements,
        precision: default_precision(),
    }
}

const LINE_PALETTE: [&str; 6] = [
    "#b30000", "#006d2c", "#54278f", "#e6550d", "#0570b0", "#636363",
];
const REGION_PALETTE: [&str; 4] = ["#9ecae1", "#fdd0a2", "#c7e9c0", "#dadaeb"];

/// Render the spec to a complete SVG document.
pub fn render_svg(spec: &PlotSpec) -> Result<String, PlotError> {
    spec.validate()?;
    let digits = spec.precision;
    let dec = |q: &Rat| decimal_string(q, digits);

    let b0 = &spec.b_range[0];
    let b1 = &spec.b_range[1];
    let w0 = &spec.w_range[0];
    let w1 = &spec.w_range[1];
    let width = b1 - b0;
    let height = w1 - w0;
    // SVG y grows downward; plane points map through y = −w.
    let y = |w: &Rat| -w;
    let stroke = &width / rint(240);
    let radius = &width / rint(120);
    let font = &height / rint(28);

    let mut ordered: Vec<&PlotElement> = spec.elements.iter().collect();
    ordered.sort_by_key(|e| e.sort_key());

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="720" height="{}" font-family="monospace" font-size="{}">"#,
        dec(b0),
        dec(&y(w1)),
        dec(&width),
        dec(&height),
        dec(&(rint(720) * &height / &width)),
        dec(&font),
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##,
        dec(b0),
        dec(&y(w1)),
        dec(&width),
        dec(&height),
    );

    let parabola_arc = {
        let mid_b = (b0 + b1) / rint(2);
        let ctrl_w = b0 * b1 / rint(2);
        let end = |b: &Rat| b * b / rint(2);
        format!(
            "M {} {} Q {} {} {} {}",
            dec(b0),
            dec(&y(&end(b0))),
            dec(&mid_b),
            dec(&y(&ctrl_w)),
            dec(b1),
            dec(&y(&end(b1))),
        )
    };

    let mut line_index = 0usize;
    let mut region_index = 0usize;
    for element in &ordered {
        match element {
            PlotElement::Region { above, label } => {
                let fill = REGION_PALETTE[region_index % REGION_PALETTE.len()];
                region_index += 1;
                let top = y(w1);
                let boundary = match above {
                    None => parabola_arc.clone(),
                    Some(line) => {
                        let wl = |b: &Rat| {
                            line.w_at(b).expect("validated: boundary is not vertical")
                        };
                        format!(
                            "M {} {} L {} {}",
                            dec(b0),
                            dec(&y(&wl(b0))),
                            dec(b1),
                            dec(&y(&wl(b1))),
                        )
                    }
                };
                let _ = writeln!(
                    svg,
                    r#"<path d="{} L {} {} L {} {} Z" fill="{}" fill-opacity="0.35" stroke="none"/>"#,
                    boundary,
                    dec(b1),
                    dec(&top),
                    dec(b0),
                    dec(&top),
                    fill,
                );
                let label_b = b0 + &width / rint(24) + &width / rint(12) * rint(region_index as i64 - 1);
                let label_w = w1 - &height / rint(16);
                let _ = writeln!(
                    svg,
                    r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
                    dec(&label_b),
                    dec(&y(&label_w)),
                    fill,
                    escape(label),
                );
            }
            PlotElement::Parabola => {
                let _ = writeln!(
                    svg,
                    r##"<path d="{}" fill="none" stroke="#1a1a1a" stroke-width="{}"/>"##,
                    parabola_arc,
                    dec(&(&stroke * rint(2))),
                );
            }
            PlotElement::Line { line, label } => {
                let color = LINE_PALETTE[line_index % LINE_PALETTE.len()];
                line_index += 1;
                let (p, q, label_at) = if line.is_vertical() {
                    let (a, _, c) = line.coefficients();
                    let b = Rat::new(c.clone(), a.clone());
                    (
                        PlanePoint::new(b.clone(), w0.clone()),
                        PlanePoint::new(b.clone(), w1.clone()),
                        PlanePoint::new(b + &width / rint(60), w1 - &height / rint(8)),
                    )
                } else {
                    let wl = |b: &Rat| line.w_at(b).expect("line is not vertical");
                    let anchor_b = b1 - &width / rint(5);
                    (
                        PlanePoint::new(b0.clone(), wl(b0)),
                        PlanePoint::new(b1.clone(), wl(b1)),
                        PlanePoint::new(anchor_b.clone(), wl(&anchor_b) + &height / rint(40)),
                    )
                };
                let _ = writeln!(
                    svg,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"/>"#,
                    dec(&p.b),
                    dec(&y(&p.w)),
                    dec(&q.b),
                    dec(&y(&q.w)),
                    color,
                    dec(&stroke),
                );
                let _ = writeln!(
                    svg,
                    r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
                    dec(&label_at.b),
                    dec(&y(&label_at.w)),
                    color,
                    escape(label),
                );
            }
            PlotElement::Point { point, label } => {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{}" cy="{}" r="{}" fill="#000000"/>"##,
                    dec(&point.b),
                    dec(&y(&point.w)),
                    dec(&radius),
                );
                let _ = writeln!(
                    svg,
                    r##"<text x="{}" y="{}" fill="#000000">{}</text>"##,
                    dec(&(&point.b + &radius * rint(2))),
                    dec(&y(&(&point.w + &radius * rint(2)))),
                    escape(label),
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
