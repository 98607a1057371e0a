//! Exact planar primitives over arbitrary-precision rationals.
//!
//! Every predicate here is evaluated exactly. Integer coordinates that fit
//! in `i64` take a checked `i128` path and fall back to big integers on
//! overflow, rational coordinates always go through `BigRational`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::crossing::Segment;
use crate::error::{Error, Result};

/// Exact rational coordinate, always kept in reduced form with a positive
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord(BigRational);

impl Coord {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        Ok(Coord(BigRational::new(num.into(), den)))
    }

    pub fn integer(v: i64) -> Self {
        Coord(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Coord(BigRational::zero())
    }

    pub fn one() -> Self {
        Coord(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coord(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The coordinate as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Lossy conversion for display purposes only (plots).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Coord {
        Coord(self.0.abs())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Coord {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse_int = |t: &str| -> std::result::Result<BigInt, String> {
            let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("invalid number {s:?}"));
            }
            let t = t.strip_prefix('+').unwrap_or(t);
            t.parse::<BigInt>()
                .map_err(|e| format!("invalid number {s:?}: {e}"))
        };
        match s.split_once('/') {
            None => Ok(Coord(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let p = parse_int(p)?;
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(format!("zero denominator in {s:?}"));
                }
                Ok(Coord(BigRational::new(p, q)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait<&Coord> for &Coord {
            type Output = Coord;
            fn $method(self, rhs: &Coord) -> Coord {
                Coord(std::ops::$trait::$method(&self.0, &rhs.0))
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point {
            x: Coord::integer(x),
            y: Coord::integer(y),
        }
    }

    fn as_i64(&self) -> Option<(i64, i64)> {
        Some((self.x.to_i64()?, self.y.to_i64()?))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An ordered point configuration. Point `i` keeps label `i` for the
/// lifetime of the set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Self {
        PointSet { points }
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Self {
        PointSet {
            points: coords
                .iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn push(&mut self, p: Point) {
        self.points.push(p);
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Integer coordinates of every point, if all of them are `i64` integers.
    pub fn to_i64_coords(&self) -> Option<Vec<(i64, i64)>> {
        self.points.iter().map(Point::as_i64).collect()
    }

    /// Orientation of the labelled triple `(i, j, k)`.
    pub fn orientation(&self, i: usize, j: usize, k: usize) -> Orientation {
        orientation(&self.points[i], &self.points[j], &self.points[k])
    }

    /// First collinear triple in lexicographic order, if any.
    pub fn first_collinear_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.orientation(i, j, k) == Orientation::Collinear {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn ensure_general_position(&self) -> Result<()> {
        match self.first_collinear_triple() {
            Some((i, j, k)) => Err(Error::NotGeneralPosition(i, j, k)),
            None => Ok(()),
        }
    }

    pub(crate) fn check_segment(&self, s: Segment) -> Result<()> {
        if s.a >= self.len() || s.b >= self.len() {
            return Err(Error::InvalidSegment {
                a: s.a,
                b: s.b,
                n: self.len(),
            });
        }
        Ok(())
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        PointSet {
            points: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    pub fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Orientation::CounterClockwise,
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    /// +1, -1 or 0.
    pub fn sign(self) -> i8 {
        match self {
            Orientation::CounterClockwise => 1,
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        Orientation::from_ordering(s.cmp(&0))
    }

    pub fn reverse(self) -> Self {
        Orientation::from_sign(-self.sign())
    }
}

/// Sign of the determinant `|q - p, r - p|`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    if let (Some(p), Some(q), Some(r)) = (p.as_i64(), q.as_i64(), r.as_i64()) {
        if let Some(o) = orientation_i64_checked(p, q, r) {
            return o;
        }
        return orientation_bigint(p, q, r);
    }
    let (ux, uy) = (&q.x - &p.x, &q.y - &p.y);
    let (vx, vy) = (&r.x - &p.x, &r.y - &p.y);
    let det = &(&ux * &vy) - &(&uy * &vx);
    Orientation::from_ordering(det.as_rational().cmp(&BigRational::zero()))
}

fn orientation_i64_checked(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Option<Orientation> {
    let ux = q.0 as i128 - p.0 as i128;
    let uy = q.1 as i128 - p.1 as i128;
    let vx = r.0 as i128 - p.0 as i128;
    let vy = r.1 as i128 - p.1 as i128;
    let det = ux.checked_mul(vy)?.checked_sub(uy.checked_mul(vx)?)?;
    Some(Orientation::from_ordering(det.cmp(&0)))
}

fn orientation_bigint(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Orientation {
    let b = |v: i64| BigInt::from(v);
    let ux = b(q.0) - b(p.0);
    let uy = b(q.1) - b(p.1);
    let vx = b(r.0) - b(p.0);
    let vy = b(r.1) - b(p.1);
    let det = ux * vy - uy * vx;
    Orientation::from_ordering(det.cmp(&BigInt::zero()))
}

/// Orientation for integer points with a small coordinate range (search grid).
#[inline]
pub fn orientation_i64(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Orientation {
    orientation_i64_checked(p, q, r).unwrap_or_else(|| orientation_bigint(p, q, r))
}

/// Whether the relative interiors of `s1` and `s2` intersect.
///
/// Segments sharing an endpoint never cross. Collinear configurations count
/// as non-crossing.
pub fn segments_cross(s: &PointSet, s1: Segment, s2: Segment) -> Result<bool> {
    s.check_segment(s1)?;
    s.check_segment(s2)?;
    if s1.shares_endpoint(s2) {
        return Ok(false);
    }
    Ok(cross_by(|i, j, k| s.orientation(i, j, k), s1, s2))
}

/// Crossing test in terms of an arbitrary orientation oracle on labels.
#[inline]
pub(crate) fn cross_by(
    mut orient: impl FnMut(usize, usize, usize) -> Orientation,
    s1: Segment,
    s2: Segment,
) -> bool {
    use Orientation::Collinear;
    let (a, b, c, d) = (s1.a, s1.b, s2.a, s2.b);
    let abc = orient(a, b, c);
    let abd = orient(a, b, d);
    if abc == Collinear || abd == Collinear || abc == abd {
        return false;
    }
    let cda = orient(c, d, a);
    let cdb = orient(c, d, b);
    cda != Collinear && cdb != Collinear && cda != cdb
}

pub fn is_general_position(s: &PointSet) -> bool {
    s.first_collinear_triple().is_none()
}

fn has_distinct_coordinates(pts: &[Point]) -> bool {
    let mut xs: Vec<&Coord> = pts.iter().map(|p| &p.x).collect();
    let mut ys: Vec<&Coord> = pts.iter().map(|p| &p.y).collect();
    xs.sort();
    ys.sort();
    xs.windows(2).all(|w| w[0] != w[1]) && ys.windows(2).all(|w| w[0] != w[1])
}

pub fn has_distinct_xy(s: &PointSet) -> bool {
    has_distinct_coordinates(&s.points)
}

fn shear(pts: &[Point], t: &Coord) -> Vec<Point> {
    pts.iter()
        .map(|p| Point {
            x: &p.x + &(t * &p.y),
            y: &p.y + &(t * &p.x),
        })
        .collect()
}

/// Maps the set by `(x, y) -> (x + t*y, y + t*x)` for the first `t` in
/// `1/2, 1/4, ...` that makes all x- and all y-coordinates pairwise distinct.
///
/// The determinant `1 - t^2` is positive, so every triple keeps its
/// orientation. Sets that already have distinct coordinates are returned
/// unchanged.
pub fn normalize_coordinates(s: &PointSet) -> PointSet {
    normalize_with_parameter(s).0
}

/// As [`normalize_coordinates`], also returning the shear parameter used
/// (zero for the identity).
pub fn normalize_with_parameter(s: &PointSet) -> (PointSet, Coord) {
    if has_distinct_coordinates(&s.points) {
        return (s.clone(), Coord::zero());
    }
    let two = Coord::integer(2);
    let mut t = Coord::new(1, 2).expect("nonzero");
    loop {
        let mapped = shear(&s.points, &t);
        if has_distinct_coordinates(&mapped) {
            return (PointSet::new(mapped), t);
        }
        // Only finitely many t collide; duplicate points are the one
        // input for which no t works.
        assert!(
            t.denom().bits() < 4096,
            "normalize_coordinates: input contains duplicate points"
        );
        t = &t / &two;
    }
}

/// `n` points in convex position on the parabola `y = x^2`, `x = 0..n`.
pub fn convex_position(n: usize) -> PointSet {
    (0..n as i64).map(|i| Point::from_ints(i, i * i)).collect()
}
