//! Planar primitives and predicates shared by the triangulation, router and tiler.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Relative tolerance for collinearity and coincidence tests.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| Point::new(self.x / n, self.y / n))
    }

    /// Coordinate magnitude used to scale absolute tolerances.
    pub fn magnitude(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn approx_eq(self, other: Point, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol && (self.y - other.y).abs() <= tol
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Raw cross product `(b - a) x (c - a)`.
#[inline]
pub fn cross3(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Sign of `(b - a) x (c - a)`: `+1` for a left turn, `-1` for a right turn,
/// `0` when the three points are collinear within [`EPS_GEOM`].
///
/// The tolerance is relative to the lengths of both legs, so the predicate
/// measures the sine of the turn angle and is independent of world scale.
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let cr = cross3(a, b, c);
    let tol = EPS_GEOM * (b - a).norm() * (c - a).norm();
    if cr > tol {
        1
    } else if cr < -tol {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    /// Builds a rectangle from two opposite corners in any order.
    pub fn from_corners(a: Point, b: Point) -> Self {
        Self {
            min: Point::new(a.x.min(b.x), a.y.min(b.y)),
            max: Point::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    pub fn from_center(center: Point, width: f64, height: f64) -> Self {
        let h = Point::new(0.5 * width, 0.5 * height);
        Self {
            min: center - h,
            max: center + h,
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(self.max)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    /// Closed containment.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_strictly(&self, p: Point) -> bool {
        p.x > self.min.x && p.x < self.max.x && p.y > self.min.y && p.y < self.max.y
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    /// True when the interiors intersect (touching boxes do not overlap).
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min.x < other.max.x
            && other.min.x < self.max.x
            && self.min.y < other.max.y
            && other.min.y < self.max.y
    }

    /// Closed intersection test.
    pub fn intersects(&self, other: &Rect) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }

    /// Chebyshev gap between two boxes; zero when they touch or overlap.
    pub fn gap(&self, other: &Rect) -> f64 {
        let gx = (other.min.x - self.max.x).max(self.min.x - other.max.x);
        let gy = (other.min.y - self.max.y).max(self.min.y - other.max.y);
        gx.max(gy).max(0.0)
    }

    pub fn inflate(&self, d: f64) -> Rect {
        Rect {
            min: self.min - Point::new(d, d),
            max: self.max + Point::new(d, d),
        }
    }

    /// Scales the box about its own center.
    pub fn scaled(&self, s: f64) -> Rect {
        Rect::from_center(self.center(), self.width() * s, self.height() * s)
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn bounding<I: IntoIterator<Item = Point>>(points: I) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect {
            min: first,
            max: first,
        };
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    /// Distance from `p` to the rectangle boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        if self.contains(p) {
            (p.x - self.min.x)
                .min(self.max.x - p.x)
                .min(p.y - self.min.y)
                .min(self.max.y - p.y)
        } else {
            let dx = (self.min.x - p.x).max(p.x - self.max.x).max(0.0);
            let dy = (self.min.y - p.y).max(p.y - self.max.y).max(0.0);
            dx.hypot(dy)
        }
    }

    /// Liang–Barsky clip of segment `a -> b`; returns the parameter interval
    /// inside the closed rectangle.
    pub fn clip_segment(&self, a: Point, b: Point) -> Option<(f64, f64)> {
        let d = b - a;
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        let checks = [
            (-d.x, a.x - self.min.x),
            (d.x, self.max.x - a.x),
            (-d.y, a.y - self.min.y),
            (d.y, self.max.y - a.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
        (t0 <= t1).then_some((t0, t1))
    }
}

/// An ordered chain of at least two points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn segment(a: Point, b: Point) -> Self {
        Self {
            vertices: vec![a, b],
        }
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn length(&self) -> f64 {
        polyline_length(&self.vertices)
    }

    /// Point at half the arc length.
    pub fn midpoint(&self) -> Point {
        point_at_arc_length(&self.vertices, 0.5 * self.length())
    }

    /// Removes consecutive vertices that coincide within the relative tolerance.
    pub fn dedup(&mut self) {
        let scale = self
            .vertices
            .iter()
            .fold(1.0_f64, |m, p| m.max(p.magnitude()));
        let tol = EPS_GEOM * scale;
        self.vertices.dedup_by(|b, a| a.approx_eq(*b, tol));
    }
}

pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

pub fn point_at_arc_length(points: &[Point], target: f64) -> Point {
    let mut acc = 0.0;
    for w in points.windows(2) {
        let len = w[0].dist(w[1]);
        if acc + len >= target && len > 0.0 {
            return w[0].lerp(w[1], ((target - acc) / len).clamp(0.0, 1.0));
        }
        acc += len;
    }
    *points.last().expect("non-empty polyline")
}

/// Distance from `p` to the closed segment `a b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    pub vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn bbox(&self) -> Rect {
        Rect::bounding(self.vertices.iter().copied()).expect("polygon has vertices")
    }

    fn scale(&self) -> f64 {
        let b = self.bbox();
        b.width().max(b.height()).max(b.min.magnitude()).max(b.max.magnitude())
    }

    /// Closed containment with the relative tolerance.
    pub fn contains(&self, p: Point) -> bool {
        let tol = EPS_GEOM * self.scale();
        self.edges().all(|(a, b)| signed_distance_left(a, b, p) >= -tol)
    }

    /// Strict containment: `p` lies at least the tolerance inside every side.
    pub fn contains_strictly(&self, p: Point) -> bool {
        let tol = EPS_GEOM * self.scale();
        self.edges().all(|(a, b)| signed_distance_left(a, b, p) > tol)
    }

    /// Exhaustive convexity and orientation check over all vertex triples.
    pub fn is_convex_ccw(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.area() <= 0.0 {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i < j && j < k {
                        let o = orient(self.vertices[i], self.vertices[j], self.vertices[k]);
                        if o < 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Parameter interval of segment `a -> b` that lies inside the closed polygon.
    pub fn clip_segment(&self, a: Point, b: Point) -> Option<(f64, f64)> {
        let d = b - a;
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for (p, q) in self.edges() {
            let e = q - p;
            // Inside half-plane: e x (x - p) >= 0.
            let num = e.cross(a - p);
            let den = e.cross(d);
            if den == 0.0 {
                if num < 0.0 {
                    return None;
                }
            } else {
                let t = -num / den;
                if den > 0.0 {
                    t0 = t0.max(t);
                } else {
                    t1 = t1.min(t);
                }
            }
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }

    /// True when the open segment `a b` passes through the polygon interior.
    /// Grazing contact along the boundary or through a corner is allowed.
    pub fn segment_hits_interior(&self, a: Point, b: Point) -> bool {
        let Some((t0, t1)) = self.clip_segment(a, b) else {
            return false;
        };
        let len = a.dist(b);
        if len == 0.0 || (t1 - t0) * len <= EPS_GEOM * self.scale() {
            return false;
        }
        self.contains_strictly(a.lerp(b, 0.5 * (t0 + t1)))
    }
}

fn signed_distance_left(a: Point, b: Point, p: Point) -> f64 {
    let len = a.dist(b);
    if len == 0.0 {
        return p.dist(a);
    }
    cross3(a, b, p) / len
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection {
    None,
    /// Interiors cross at a single point.
    Proper(Point),
    /// The segments meet at a point that is an endpoint of at least one of them.
    Touch(Point),
    /// Collinear segments sharing a sub-segment.
    Overlap(Point, Point),
}

impl SegmentIntersection {
    pub fn point(&self) -> Option<Point> {
        match *self {
            SegmentIntersection::None => None,
            SegmentIntersection::Proper(p) | SegmentIntersection::Touch(p) => Some(p),
            SegmentIntersection::Overlap(p, _) => Some(p),
        }
    }
}

fn lex_lt(a: Point, b: Point) -> bool {
    (a.x, a.y) < (b.x, b.y)
}

/// Intersection of segments `p1 p2` and `q1 q2`, classified as crossing,
/// endpoint touch, or collinear overlap. Symmetric in the order of the
/// segments and of each segment's endpoints.
pub fn segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> SegmentIntersection {
    // Canonical ordering makes the computed point independent of argument order.
    let (p1, p2) = if lex_lt(p2, p1) { (p2, p1) } else { (p1, p2) };
    let (q1, q2) = if lex_lt(q2, q1) { (q2, q1) } else { (q1, q2) };
    let ((p1, p2), (q1, q2)) = if lex_lt(q1, p1) || (q1 == p1 && lex_lt(q2, p2)) {
        ((q1, q2), (p1, p2))
    } else {
        ((p1, p2), (q1, q2))
    };

    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);

    if o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0 {
        // Collinear: project onto the dominant axis.
        let d = p2 - p1;
        let key = |p: Point| if d.x.abs() >= d.y.abs() { p.x } else { p.y };
        let (pa, pb) = (key(p1).min(key(p2)), key(p1).max(key(p2)));
        let (qa, qb) = (key(q1).min(key(q2)), key(q1).max(key(q2)));
        let lo = pa.max(qa);
        let hi = pb.min(qb);
        if lo > hi {
            return SegmentIntersection::None;
        }
        let pick = |v: f64| -> Point {
            [p1, p2, q1, q2]
                .into_iter()
                .find(|&p| key(p) == v)
                .expect("bound comes from an endpoint")
        };
        let a = pick(lo);
        let b = pick(hi);
        return if lo == hi {
            SegmentIntersection::Touch(a)
        } else {
            SegmentIntersection::Overlap(a, b)
        };
    }

    if o1 * o2 > 0 || o3 * o4 > 0 {
        return SegmentIntersection::None;
    }
    if o1 == 0 && on_segment(p1, p2, q1) {
        return SegmentIntersection::Touch(q1);
    }
    if o2 == 0 && on_segment(p1, p2, q2) {
        return SegmentIntersection::Touch(q2);
    }
    if o3 == 0 && on_segment(q1, q2, p1) {
        return SegmentIntersection::Touch(p1);
    }
    if o4 == 0 && on_segment(q1, q2, p2) {
        return SegmentIntersection::Touch(p2);
    }
    if o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0 {
        return SegmentIntersection::None;
    }
    let d = p2 - p1;
    let e = q2 - q1;
    let t = (q1 - p1).cross(e) / d.cross(e);
    SegmentIntersection::Proper(p1 + d * t)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("padding must be positive, got {0}")]
    NonPositivePadding(f64),
    #[error("corner cut must be at least 1")]
    ZeroCornerCut,
}

/// Offsets `bbox` outward by `padding`, approximating each rounded corner by
/// `corner_cut` chords (one chord = a single 45 degree chamfer).
pub fn inflate_box_to_polygon(
    bbox: Rect,
    padding: f64,
    corner_cut: usize,
) -> Result<ConvexPolygon, GeometryError> {
    if padding.is_nan() || padding <= 0.0 {
        return Err(GeometryError::NonPositivePadding(padding));
    }
    if corner_cut == 0 {
        return Err(GeometryError::ZeroCornerCut);
    }
    // Corners in counterclockwise order with the starting angle of their arc.
    let corners = [
        (Point::new(bbox.max.x, bbox.min.y), -0.5),
        (bbox.max, 0.0),
        (Point::new(bbox.min.x, bbox.max.y), 0.5),
        (bbox.min, 1.0),
    ];
    let mut vertices = Vec::with_capacity(4 * (corner_cut + 1));
    for (c, start) in corners {
        for k in 0..=corner_cut {
            let angle = std::f64::consts::PI * (start + 0.5 * k as f64 / corner_cut as f64);
            // Exact axis directions keep flat sides axis-aligned.
            let (s, co) = match k {
                0 => axis_dir(start),
                k if k == corner_cut => axis_dir(start + 0.5),
                _ => angle.sin_cos(),
            };
            vertices.push(Point::new(c.x + padding * co, c.y + padding * s));
        }
    }
    let scale = bbox.max.magnitude().max(bbox.min.magnitude()).max(padding);
    let tol = EPS_GEOM * scale;
    vertices.dedup_by(|b, a| a.approx_eq(*b, tol));
    if vertices.len() > 1 && vertices[0].approx_eq(*vertices.last().unwrap(), tol) {
        vertices.pop();
    }
    Ok(ConvexPolygon { vertices })
}

/// `(sin, cos)` for multiples of a half turn / 2.
fn axis_dir(half_turns: f64) -> (f64, f64) {
    let q = (half_turns * 2.0).rem_euclid(4.0).round() as i32;
    match q {
        0 => (0.0, 1.0),
        1 => (1.0, 0.0),
        2 => (0.0, -1.0),
        _ => (-1.0, 0.0),
    }
}
