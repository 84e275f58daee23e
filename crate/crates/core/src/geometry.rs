//! Floating-point geometry primitives on projected scenes: closest points between
//! segments and intersection of planar convex polygons split into triangles.

use crate::error::{Error, Result};
use crate::projection::Point3;

/// Tolerance for degeneracy and coincidence tests, in scene units.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Clearance {
    pub distance: f64,
    /// Closest point on the first segment.
    pub on_a: Point3,
    /// Closest point on the second segment.
    pub on_b: Point3,
}

/// Minimum distance between closed segments `[a0, a1]` and `[b0, b1]` with the
/// points realizing it.
pub fn segment_clearance(a0: &Point3, a1: &Point3, b0: &Point3, b1: &Point3) -> Result<Clearance> {
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let r = a0 - b0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    if a <= EPS_GEOM * EPS_GEOM || e <= EPS_GEOM * EPS_GEOM {
        return Err(Error::Degenerate("segment shorter than tolerance"));
    }
    let b = d1.dot(&d2);
    let c = d1.dot(&r);
    let f = d2.dot(&r);
    let denom = a * e - b * b;
    // parallel segments: any s works, take the start of the first
    let mut s = if denom > 1e-14 * a * e {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    let on_a = a0 + d1 * s;
    let on_b = b0 + d2 * t;
    Ok(Clearance {
        distance: (on_a - on_b).norm(),
        on_a,
        on_b,
    })
}

pub fn point_segment_distance(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn unit_normal(t: &[Point3; 3]) -> Option<Point3> {
    let n = (t[1] - t[0]).cross(&(t[2] - t[0]));
    let len = n.norm();
    (len > EPS_GEOM).then(|| n / len)
}

/// Intersection of two triangles, returned as points whose convex hull is the
/// intersection: empty, one or two points for a transverse contact, or a polygon when
/// the triangles are coplanar. The flag reports coplanarity.
pub fn triangle_intersection(t1: &[Point3; 3], t2: &[Point3; 3]) -> Result<(Vec<Point3>, bool)> {
    intersect_with_slack(t1, t2, EPS_GEOM)
}

/// `slack` widens the clipping triangle; without it a contact that merely grazes a
/// corner clips down to that corner instead of a sliver of length `slack / sin(angle)`.
fn intersect_with_slack(
    t1: &[Point3; 3],
    t2: &[Point3; 3],
    slack: f64,
) -> Result<(Vec<Point3>, bool)> {
    let n1 = unit_normal(t1).ok_or(Error::Degenerate("triangle"))?;
    let n2 = unit_normal(t2).ok_or(Error::Degenerate("triangle"))?;

    let dist1 = t1.map(|p| n2.dot(&(p - t2[0])));
    if dist1.iter().all(|d| d.abs() <= EPS_GEOM) {
        return Ok((clip_coplanar(t1, t2, &n2, slack), true));
    }
    if dist1.iter().all(|&d| d > EPS_GEOM) || dist1.iter().all(|&d| d < -EPS_GEOM) {
        return Ok((Vec::new(), false));
    }
    let dist2 = t2.map(|p| n1.dot(&(p - t1[0])));
    if dist2.iter().all(|&d| d > EPS_GEOM) || dist2.iter().all(|&d| d < -EPS_GEOM) {
        return Ok((Vec::new(), false));
    }

    // t1 cut by the plane of t2
    let mut cut: Vec<Point3> = Vec::with_capacity(3);
    for i in 0..3 {
        if dist1[i].abs() <= EPS_GEOM {
            cut.push(t1[i]);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let (di, dj) = (dist1[i], dist1[j]);
        if (di > EPS_GEOM && dj < -EPS_GEOM) || (di < -EPS_GEOM && dj > EPS_GEOM) {
            let u = di / (di - dj);
            cut.push(t1[i] + (t1[j] - t1[i]) * u);
        }
    }
    let (p, q) = farthest_pair(&cut);
    Ok((clip_segment(&p, &q, t2, &n2, slack), false))
}

fn farthest_pair(pts: &[Point3]) -> (Point3, Point3) {
    let mut best = (pts[0], pts[0], 0.0);
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = (a - b).norm_squared();
            if d > best.2 {
                best = (*a, *b, d);
            }
        }
    }
    (best.0, best.1)
}

/// Inward in-plane normals of a triangle's edges, paired with the edge start.
fn edge_planes(t: &[Point3; 3], n: &Point3) -> [(Point3, Point3); 3] {
    [0, 1, 2].map(|k| {
        let edge = t[(k + 1) % 3] - t[k];
        let m = n.cross(&edge).normalize();
        (m, t[k])
    })
}

/// Clips the segment `[p, q]` (lying in the plane of `t`) to the triangle.
fn clip_segment(p: &Point3, q: &Point3, t: &[Point3; 3], n: &Point3, slack: f64) -> Vec<Point3> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (m, origin) in edge_planes(t, n) {
        let g0 = m.dot(&(p - origin)) + slack;
        let g1 = m.dot(&(q - origin)) + slack;
        if g0 < 0.0 && g1 < 0.0 {
            return Vec::new();
        }
        if g0 < 0.0 {
            lo = lo.max(g0 / (g0 - g1));
        } else if g1 < 0.0 {
            hi = hi.min(g0 / (g0 - g1));
        }
        if lo > hi {
            return Vec::new();
        }
    }
    let at = |u: f64| p + (q - p) * u;
    vec![at(lo), at(hi)]
}

/// Sutherland-Hodgman clip of `subject` by the triangle `clip`, both in one plane.
fn clip_coplanar(subject: &[Point3; 3], clip: &[Point3; 3], n: &Point3, slack: f64) -> Vec<Point3> {
    let mut poly: Vec<Point3> = subject.to_vec();
    for (m, origin) in edge_planes(clip, n) {
        if poly.is_empty() {
            break;
        }
        let side = |p: &Point3| m.dot(&(p - origin)) + slack;
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            let (sa, sb) = (side(&a), side(&b));
            if sa >= 0.0 {
                out.push(a);
            }
            if (sa >= 0.0) != (sb >= 0.0) {
                out.push(a + (b - a) * (sa / (sa - sb)));
            }
        }
        poly = out;
    }
    poly
}

/// Area of a planar polygon given in boundary order.
pub fn polygon_area(poly: &[Point3]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = Point3::zeros();
    for i in 0..poly.len() {
        acc += poly[i].cross(&poly[(i + 1) % poly.len()]);
    }
    0.5 * acc.norm()
}

fn quad_triangles(q: &[Point3; 4]) -> [[Point3; 3]; 2] {
    [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
}

fn bbox(q: &[Point3; 4]) -> (Point3, Point3) {
    q.iter().fold(
        (
            Point3::repeat(f64::INFINITY),
            Point3::repeat(f64::NEG_INFINITY),
        ),
        |(lo, hi), p| (lo.inf(p), hi.sup(p)),
    )
}

pub fn check_quad(q: &[Point3; 4]) -> Result<()> {
    for t in quad_triangles(q) {
        if unit_normal(&t).is_none() {
            return Err(Error::Degenerate("collinear face corners"));
        }
    }
    Ok(())
}

/// Whether two projected quadrilaterals intersect.
///
/// Faces sharing a complex edge never count. Otherwise each quad is split along its
/// 0-2 diagonal and the triangle pairs are tested; a transverse contact counts, a
/// coplanar contact counts when its overlap area exceeds the tolerance. When the faces
/// share a complex vertex, contact confined to that vertex's image is ignored.
pub fn faces_intersect(
    a: &[Point3; 4],
    b: &[Point3; 4],
    share_edge: bool,
    shared_vertex: Option<Point3>,
) -> Result<bool> {
    if share_edge {
        return Ok(false);
    }
    check_quad(a)?;
    check_quad(b)?;
    // evaluate in a canonical argument order so the verdict is exactly symmetric
    let (a, b) = if lex_less(b, a) { (b, a) } else { (a, b) };
    let (alo, ahi) = bbox(a);
    let (blo, bhi) = bbox(b);
    for k in 0..3 {
        if alo[k] > bhi[k] + EPS_GEOM || blo[k] > ahi[k] + EPS_GEOM {
            return Ok(false);
        }
    }
    let slack = if shared_vertex.is_some() {
        0.0
    } else {
        EPS_GEOM
    };
    for ta in quad_triangles(a) {
        for tb in quad_triangles(b) {
            let (pts, coplanar) = intersect_with_slack(&ta, &tb, slack)?;
            if pts.is_empty() {
                continue;
            }
            let hit = if coplanar {
                polygon_area(&pts) > EPS_GEOM
            } else {
                match shared_vertex {
                    Some(v) => pts.iter().any(|p| (p - v).norm() > EPS_GEOM),
                    None => true,
                }
            };
            if hit {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn lex_less(a: &[Point3; 4], b: &[Point3; 4]) -> bool {
    for (p, q) in a.iter().zip(b) {
        for k in 0..3 {
            if p[k] != q[k] {
                return p[k] < q[k];
            }
        }
    }
    false
}
