//! Planar convex polygons: normalization, Minkowski sums, Steiner points,
//! Hausdorff distances and half-plane clipping.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Vec2 = [f64; 2];

#[inline]
pub(crate) fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub(crate) fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub(crate) fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

fn extent(points: &[Vec2]) -> f64 {
    points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max)
}

/// Compact convex polygon with counterclockwise vertices in strictly convex
/// position. One vertex is a point and two vertices are a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl Polygon {
    /// Validates and normalizes a vertex cycle: duplicate and collinear
    /// vertices are dropped and clockwise input is reversed. Non-convex
    /// cycles are rejected.
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSet("polygon has no vertices".into()));
        }
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidSet("polygon has non-finite coordinates".into()));
        }
        let tol = 1e-12 * (1.0 + extent(&points));
        normalize_cycle(points, tol).map(|vertices| Self { vertices })
    }

    pub fn point(p: Vec2) -> Self {
        Self { vertices: vec![p] }
    }

    /// Convex hull of an arbitrary point cloud (monotone chain).
    pub fn hull(points: &[Vec2]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSet("empty point set".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() < 3 {
            return Self::new(pts);
        }
        let mut lower: Vec<Vec2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && cross(sub(lower[lower.len() - 1], lower[lower.len() - 2]), sub(p, lower[lower.len() - 1])) <= 0.0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Vec2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(sub(upper[upper.len() - 1], upper[upper.len() - 2]), sub(p, upper[upper.len() - 1])) <= 0.0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn support(&self, u: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(*v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact Steiner point: vertices weighted by their exterior angles over `2π`.
    pub fn steiner(&self) -> Vec2 {
        let n = self.vertices.len();
        match n {
            1 => self.vertices[0],
            2 => {
                let [a, b] = [self.vertices[0], self.vertices[1]];
                [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
            }
            _ => {
                let mut s = [0.0; 2];
                for i in 0..n {
                    let prev = self.vertices[(i + n - 1) % n];
                    let cur = self.vertices[i];
                    let next = self.vertices[(i + 1) % n];
                    let e0 = sub(cur, prev);
                    let e1 = sub(next, cur);
                    let turn = cross(e0, e1).atan2(dot(e0, e1));
                    let w = turn / (2.0 * PI);
                    s[0] += w * cur[0];
                    s[1] += w * cur[1];
                }
                s
            }
        }
    }

    pub fn translate(&self, v: Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| add(*p, v)).collect(),
        }
    }

    /// Scaling by `lambda >= 0`; zero collapses to the origin.
    pub fn scale(&self, lambda: f64) -> Self {
        if lambda == 0.0 {
            return Self::point([0.0, 0.0]);
        }
        Self {
            vertices: self.vertices.iter().map(|p| [lambda * p[0], lambda * p[1]]).collect(),
        }
    }

    /// Minkowski sum by merging edge sequences sorted by angle.
    pub fn minkowski(&self, other: &Self) -> Self {
        if self.len() == 1 {
            return other.translate(self.vertices[0]);
        }
        if other.len() == 1 {
            return self.translate(other.vertices[0]);
        }
        let a = rotate_to_bottom(&self.vertices);
        let b = rotate_to_bottom(&other.vertices);
        let ea = edges(&a);
        let eb = edges(&b);
        let mut out = Vec::with_capacity(ea.len() + eb.len() + 1);
        let mut p = add(a[0], b[0]);
        out.push(p);
        let (mut i, mut j) = (0, 0);
        while i < ea.len() || j < eb.len() {
            let take_a = if i == ea.len() {
                false
            } else if j == eb.len() {
                true
            } else {
                edge_angle(ea[i]) <= edge_angle(eb[j])
            };
            let e = if take_a {
                i += 1;
                ea[i - 1]
            } else {
                j += 1;
                eb[j - 1]
            };
            p = add(p, e);
            out.push(p);
        }
        out.pop();
        let tol = 1e-12 * (1.0 + extent(&out));
        let vertices = simplify_convex(out, tol);
        Self { vertices }
    }

    /// `Σ_i w_i P_i` for nonnegative weights, by sorting all scaled edges by angle once.
    pub fn weighted_sum<'a>(terms: impl IntoIterator<Item = (f64, &'a Polygon)>) -> Self {
        let mut start = [0.0, 0.0];
        let mut all_edges: Vec<Vec2> = Vec::new();
        for (w, p) in terms {
            let v = rotate_to_bottom(&p.vertices);
            start = [start[0] + w * v[0][0], start[1] + w * v[0][1]];
            if v.len() > 1 && w > 0.0 {
                all_edges.extend(edges(&v).into_iter().map(|e| [w * e[0], w * e[1]]));
            }
        }
        all_edges.sort_by(|a, b| edge_angle(*a).total_cmp(&edge_angle(*b)));
        let mut out = Vec::with_capacity(all_edges.len() + 1);
        let mut p = start;
        out.push(p);
        for e in all_edges {
            p = add(p, e);
            out.push(p);
        }
        out.pop();
        let tol = 1e-12 * (1.0 + extent(&out));
        Self { vertices: simplify_convex(out, tol) }
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        self.distance_to(p) <= tol
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_to(&self, p: Vec2) -> f64 {
        let v = &self.vertices;
        match v.len() {
            1 => norm(sub(p, v[0])),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| cross(sub(v[(i + 1) % n], v[i]), sub(p, v[i])) >= 0.0);
                if inside {
                    0.0
                } else {
                    (0..n)
                        .map(|i| segment_distance(p, v[i], v[(i + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// One-sided Hausdorff excess `sup_{a ∈ self} dist(a, other)`.
    pub fn excess_over(&self, other: &Self) -> f64 {
        self.vertices
            .iter()
            .map(|p| other.distance_to(*p))
            .fold(0.0, f64::max)
    }

    pub fn hausdorff(&self, other: &Self) -> f64 {
        self.excess_over(other).max(other.excess_over(self))
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(norm(sub(v[i], v[j])));
            }
        }
        d
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }
}

/// Intersection of the half-planes `<u_j, y> <= b_j + slack`, starting from
/// a bounding square. Returns `None` when the intersection is empty.
pub(crate) fn intersect_halfplanes(normals: &[Vec2], offsets: &[f64], slack: f64) -> Option<Vec<Vec2>> {
    let r = 4.0 * (1.0 + offsets.iter().map(|b| b.abs()).fold(0.0, f64::max));
    let mut poly = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
    for (u, b) in normals.iter().zip(offsets) {
        poly = clip(&poly, *u, b + slack);
        if poly.is_empty() {
            return None;
        }
    }
    Some(poly)
}

/// Simplifies the output of [`intersect_halfplanes`] into a normalized polygon.
pub(crate) fn polygon_from_clip(points: Vec<Vec2>, tol: f64) -> Polygon {
    let vertices = simplify_convex(points, tol);
    Polygon { vertices }
}

fn clip(poly: &[Vec2], u: Vec2, c: f64) -> Vec<Vec2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = dot(u, p) - c;
        let fq = dot(u, q) - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return norm(sub(p, a));
    }
    let t = (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

fn signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>() * 0.5
}

fn rotate_to_bottom(v: &[Vec2]) -> Vec<Vec2> {
    let start = (0..v.len())
        .min_by(|&i, &j| v[i][1].total_cmp(&v[j][1]).then(v[i][0].total_cmp(&v[j][0])))
        .unwrap_or(0);
    v[start..].iter().chain(v[..start].iter()).copied().collect()
}

fn edges(v: &[Vec2]) -> Vec<Vec2> {
    let n = v.len();
    (0..n).map(|i| sub(v[(i + 1) % n], v[i])).collect()
}

fn edge_angle(e: Vec2) -> f64 {
    let t = e[1].atan2(e[0]);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

fn dedup_cycle(points: Vec<Vec2>, tol: f64) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_none_or(|q| norm(sub(p, *q)) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && norm(sub(out[0], out[out.len() - 1])) <= tol {
        out.pop();
    }
    out
}

/// Extreme points of an (approximately) collinear point set.
fn segment_hull(points: &[Vec2]) -> Vec<Vec2> {
    let (mut i0, mut j0, mut best) = (0, 0, -1.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = norm(sub(points[i], points[j]));
            if d > best {
                best = d;
                i0 = i;
                j0 = j;
            }
        }
    }
    if i0 == j0 {
        vec![points[0]]
    } else {
        vec![points[i0], points[j0]]
    }
}

/// Cleanup for vertex cycles that are convex and counterclockwise up to
/// round-off (clipping and edge merging output).
fn simplify_convex(points: Vec<Vec2>, tol: f64) -> Vec<Vec2> {
    let mut v = dedup_cycle(points, tol);
    if v.len() <= 2 {
        return v;
    }
    let mut changed = true;
    while changed && v.len() > 2 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            let base = sub(next, prev);
            let len = norm(base);
            let height = if len > 0.0 { cross(sub(cur, prev), base) / len } else { 0.0 };
            let along = if len > 0.0 { dot(sub(cur, prev), base) / len } else { 0.0 };
            // remove vertices that are (numerically) on or inside the chord;
            // a collinear vertex beyond either end is an extreme point
            if height <= tol && along >= -tol && along <= len + tol {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    if v.len() == 2 && norm(sub(v[0], v[1])) <= tol {
        v.truncate(1);
    }
    v
}

fn normalize_cycle(points: Vec<Vec2>, tol: f64) -> Result<Vec<Vec2>> {
    let mut v = dedup_cycle(points, tol);
    if v.len() <= 2 {
        return Ok(v);
    }
    let area = signed_area(&v);
    let perimeter: f64 = (0..v.len()).map(|i| norm(sub(v[(i + 1) % v.len()], v[i]))).sum();
    if area.abs() <= tol * perimeter {
        let seg = segment_hull(&v);
        if seg.len() == 2 {
            let dir = sub(seg[1], seg[0]);
            let len = norm(dir);
            let off = v.iter().map(|p| (cross(dir, sub(*p, seg[0])) / len).abs()).fold(0.0, f64::max);
            if off > tol {
                return Err(Error::InvalidSet("polygon vertices are not in convex position".into()));
            }
        }
        return Ok(seg);
    }
    if area < 0.0 {
        v.reverse();
    }
    // drop collinear vertices lying between their neighbours
    let mut changed = true;
    while changed && v.len() > 2 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            let e0 = sub(cur, prev);
            let e1 = sub(next, cur);
            let base = norm(sub(next, prev));
            if base > 0.0 && (cross(e0, e1) / base).abs() <= tol && dot(e0, e1) > 0.0 {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    let n = v.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e0 = sub(v[i], v[(i + n - 1) % n]);
        let e1 = sub(v[(i + 1) % n], v[i]);
        let c = cross(e0, e1);
        if c <= 0.0 {
            return Err(Error::InvalidSet(format!("polygon is not convex at vertex {i}")));
        }
        turning += c.atan2(dot(e0, e1));
    }
    if (turning - 2.0 * PI).abs() > 1e-6 {
        return Err(Error::InvalidSet("polygon winds more than once".into()));
    }
    Ok(v)
}
