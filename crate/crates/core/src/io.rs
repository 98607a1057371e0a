//! Text formats: point sets, witness families and geometric graphs.
//!
//! Point-set file: `#` lines are comments, the first other line is the
//! point count `n`, followed by `n` lines `X Y` where each coordinate is a
//! signed integer or a rational `p/q`. Blank lines are ignored.
//!
//! A graph file is a point-set block followed by a line `edges` and one
//! `a b` line per edge. A witness file starts with `k = <value>` followed
//! by one `a b` line per segment.

use std::fmt::Write as _;
use std::path::Path;

use crate::crossing::{CrossingFamily, Segment};
use crate::error::{Error, Result};
use crate::geometry::{Coord, Point, PointSet};
use crate::thrackle::GeometricGraph;

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_pointset_lines<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<PointSet> {
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing point count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::parse(line, format!("expected point count, found {header:?}")))?;
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, text) = lines.next().ok_or_else(|| {
            Error::parse(0, format!("expected {n} points, found {}", points.len()))
        })?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                line,
                format!("expected \"X Y\", found {text:?}"),
            ));
        }
        let x: Coord = fields[0]
            .parse()
            .map_err(|e: String| Error::parse(line, e))?;
        let y: Coord = fields[1]
            .parse()
            .map_err(|e: String| Error::parse(line, e))?;
        points.push(Point::new(x, y));
    }
    Ok(PointSet::new(points))
}

pub fn parse_pointset(text: &str) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let s = parse_pointset_lines(&mut lines)?;
    if let Some((line, extra)) = lines.next() {
        return Err(Error::parse(
            line,
            format!("unexpected content after points: {extra:?}"),
        ));
    }
    Ok(s)
}

pub fn format_pointset(s: &PointSet) -> String {
    let mut out = String::new();
    writeln!(out, "{}", s.len()).unwrap();
    for p in s {
        writeln!(out, "{} {}", p.x, p.y).unwrap();
    }
    out
}

/// Like [`format_pointset`] with leading `#` comment lines.
pub fn format_pointset_with_comments(s: &PointSet, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    out.push_str(&format_pointset(s));
    out
}

pub fn load_pointset(path: impl AsRef<Path>) -> Result<PointSet> {
    parse_pointset(&std::fs::read_to_string(path)?)
}

pub fn save_pointset(s: &PointSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_pointset(s))?;
    Ok(())
}

fn parse_pair(line: usize, text: &str) -> Result<Segment> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let idx = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::parse(line, format!("invalid index {t:?}")))
    };
    if fields.len() != 2 {
        return Err(Error::parse(
            line,
            format!("expected \"a b\", found {text:?}"),
        ));
    }
    let (a, b) = (idx(fields[0])?, idx(fields[1])?);
    if a == b {
        return Err(Error::parse(line, format!("loop edge {a} {b}")));
    }
    Ok(Segment::new(a, b))
}

pub fn format_witness(f: &CrossingFamily) -> String {
    let mut out = format!("k = {}\n", f.len());
    for s in f.members() {
        writeln!(out, "{s}").unwrap();
    }
    out
}

pub fn parse_witness(text: &str) -> Result<CrossingFamily> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing \"k = <value>\" line"))?;
    let k: usize = header
        .strip_prefix("k")
        .and_then(|r| r.trim_start().strip_prefix('='))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected \"k = <value>\", found {header:?}")))?;
    let members = lines
        .map(|(l, t)| parse_pair(l, t))
        .collect::<Result<Vec<_>>>()?;
    if members.len() != k {
        return Err(Error::parse(
            line,
            format!("header says k = {k}, found {} segments", members.len()),
        ));
    }
    Ok(CrossingFamily::new(members))
}

pub fn parse_graph(text: &str) -> Result<GeometricGraph> {
    let mut lines = content_lines(text);
    let s = parse_pointset_lines(&mut lines)?;
    let mut edges = Vec::new();
    match lines.next() {
        None => {}
        Some((_, "edges")) => {
            for (line, t) in lines {
                let e = parse_pair(line, t)?;
                if e.b >= s.len() {
                    return Err(Error::parse(line, format!("edge {e} out of range")));
                }
                edges.push(e);
            }
        }
        Some((line, t)) => {
            return Err(Error::parse(
                line,
                format!("expected \"edges\", found {t:?}"),
            ))
        }
    }
    GeometricGraph::new(s, edges)
}

pub fn format_graph(g: &GeometricGraph) -> String {
    let mut out = format_pointset(g.points());
    out.push_str("edges\n");
    for e in g.edges() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<GeometricGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_pointset("# a set\n3\n\n0 0\n# mid\n1/2 -3\n  4 5  \n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.point(1).x, Coord::new(1, 2).unwrap());
        assert_eq!(format_pointset(&s), "3\n0 0\n1/2 -3\n4 5\n");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_pointset("2\n0 0\nx y z\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_pointset("2\n0 0\n1 q\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(
            parse_pointset("two\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_pointset("3\n0 0\n1 1\n").is_err());
        assert!(matches!(
            parse_pointset("1\n0 0\n1 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn witness_round_trip() {
        let f = CrossingFamily::new(vec![Segment::new(3, 1), Segment::new(0, 2)]);
        let text = format_witness(&f);
        assert_eq!(text, "k = 2\n0 2\n1 3\n");
        assert_eq!(parse_witness(&text).unwrap(), f);
        assert!(parse_witness("k = 3\n0 2\n").is_err());
        assert!(parse_witness("k 3\n").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let text = "3\n0 0\n1 0\n0 1\nedges\n0 1\n1 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(format_graph(&g), text);
        assert!(parse_graph("2\n0 0\n1 0\nedges\n0 5\n").is_err());
        assert!(parse_graph("2\n0 0\n1 0\nvertices\n").is_err());
        assert_eq!(parse_graph("2\n0 0\n1 0\n").unwrap().edges().len(), 0);
    }

    proptest! {
        #[test]
        fn pointset_round_trip(coords in proptest::collection::vec((-1000i64..1000, 1i64..50, -1000i64..1000, 1i64..50), 0..20)) {
            let s: PointSet = coords
                .iter()
                .map(|&(a, b, c, d)| Point::new(Coord::new(a, b).unwrap(), Coord::new(c, d).unwrap()))
                .collect();
            prop_assert_eq!(parse_pointset(&format_pointset(&s)).unwrap(), s);
        }
    }
}
