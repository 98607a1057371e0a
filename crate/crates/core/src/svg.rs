//! Static SVG rendering of a point set, optionally with a highlighted
//! crossing family.

use std::fmt::Write as _;

use crate::crossing::CrossingFamily;
use crate::geometry::PointSet;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

pub fn render(s: &PointSet, family: Option<&CrossingFamily>) -> String {
    let xs: Vec<f64> = s.iter().map(|p| p.x.to_f64()).collect();
    let ys: Vec<f64> = s.iter().map(|p| p.y.to_f64()).collect();
    let (min_x, max_x) = bounds(&xs);
    let (min_y, max_y) = bounds(&ys);
    let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // SVG y grows downwards.
    let project = |i: usize| {
        (
            MARGIN + (xs[i] - min_x) * scale,
            SIZE - MARGIN - (ys[i] - min_y) * scale,
        )
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if let Some(f) = family {
        writeln!(out, r#"<g stroke="crimson" stroke-width="1.5">"#).unwrap();
        for seg in f.members() {
            let (x1, y1) = project(seg.a);
            let (x2, y2) = project(seg.b);
            writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(
        out,
        r#"<g fill="black" font-family="sans-serif" font-size="10">"#
    )
    .unwrap();
    for i in 0..s.len() {
        let (x, y) = project(i);
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/>"#).unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{i}</text>"#,
            x + 4.0,
            y - 4.0
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::Segment;

    #[test]
    fn renders_points_and_family() {
        let s = PointSet::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let f = CrossingFamily::new(vec![Segment::new(0, 2), Segment::new(1, 3)]);
        let svg = render(&s, Some(&f));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<line").count(), 2);
        assert!(svg.contains(r#"cx="24.00" cy="456.00""#));
        assert_eq!(render(&s, None).matches("<line").count(), 0);
    }

    #[test]
    fn single_point() {
        let s = PointSet::from_ints(&[(5, 5)]);
        assert_eq!(render(&s, None).matches("<circle").count(), 1);
    }
}
