//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use cubesurf::cell::{boundary_cells, full_skeleton, CellCode};
use cubesurf::projection::{EmbeddingState, Point3, ProjectionConstants};
use nalgebra::{Matrix3, Rotation3, Unit};
use rand::Rng;

// ---------------------------------------------------------------------------
// segments

fn lerp(a: &Point3, b: &Point3, t: f64) -> Point3 {
    a + (b - a) * t
}

fn grid_min(
    a0: &Point3,
    a1: &Point3,
    b0: &Point3,
    b1: &Point3,
    s: (f64, f64),
    t: (f64, f64),
    n: usize,
) -> (f64, f64, f64) {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let bs: Vec<Point3> = (0..n)
        .map(|j| lerp(b0, b1, t.0 + (t.1 - t.0) * j as f64 / (n - 1) as f64))
        .collect();
    for i in 0..n {
        let u = s.0 + (s.1 - s.0) * i as f64 / (n - 1) as f64;
        let p = lerp(a0, a1, u);
        for (j, q) in bs.iter().enumerate() {
            let d = (p - q).norm_squared();
            if d < best.0 {
                best = (d, u, t.0 + (t.1 - t.0) * j as f64 / (n - 1) as f64);
            }
        }
    }
    best
}

/// Minimum distance over an `n x n` parameter grid, refined once by a second grid
/// spanning the neighbouring cells of the coarse minimum.
pub fn grid_clearance(a0: &Point3, a1: &Point3, b0: &Point3, b1: &Point3, n: usize) -> f64 {
    let (d, s, t) = grid_min(a0, a1, b0, b1, (0.0, 1.0), (0.0, 1.0), n);
    let h = 1.0 / (n - 1) as f64;
    let s_range = ((s - h).max(0.0), (s + h).min(1.0));
    let t_range = ((t - h).max(0.0), (t + h).min(1.0));
    let (d2, _, _) = grid_min(a0, a1, b0, b1, s_range, t_range, 201);
    d.min(d2).sqrt()
}

pub fn random_point(rng: &mut impl Rng, half: f64) -> Point3 {
    Point3::new(
        rng.random_range(-half..half),
        rng.random_range(-half..half),
        rng.random_range(-half..half),
    )
}

pub fn random_unit(rng: &mut impl Rng) -> Point3 {
    loop {
        let p = random_point(rng, 1.0);
        let n = p.norm();
        if n > 0.1 && n <= 1.0 {
            return p / n;
        }
    }
}

// ---------------------------------------------------------------------------
// quads

/// Random convex planar quad in cyclic order: a unit square under a mild planar
/// projective map, placed in a random plane.
pub fn random_quad(rng: &mut impl Rng) -> [Point3; 4] {
    let c = random_point(rng, 0.5);
    let (u, v) = random_frame(rng);
    random_quad_in_plane(rng, &c, &u, &v)
}

pub fn random_frame(rng: &mut impl Rng) -> (Point3, Point3) {
    let u = random_unit(rng);
    let mut v = random_unit(rng);
    v -= u * u.dot(&v);
    while v.norm() < 0.1 {
        v = random_unit(rng);
        v -= u * u.dot(&v);
    }
    (u, v.normalize())
}

pub fn random_quad_in_plane(rng: &mut impl Rng, c: &Point3, u: &Point3, v: &Point3) -> [Point3; 4] {
    let size = rng.random_range(0.4..1.0);
    let shear = rng.random_range(-0.5..0.5);
    let stretch = rng.random_range(0.5..1.5);
    let (alpha, beta) = (rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
    let (ox, oy) = (rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
    [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)].map(|(x, y)| {
        let h = 1.0 + alpha * x + beta * y;
        let (x, y) = (x / h, y / h);
        let (x, y) = (x + shear * y, stretch * y);
        c + u * (size * x + ox) + v * (size * y + oy)
    })
}

fn quad_normal(q: &[Point3; 4]) -> Point3 {
    ((q[1] - q[0]).cross(&(q[2] - q[0])) + (q[2] - q[0]).cross(&(q[3] - q[0]))).normalize()
}

fn tri_area(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

/// Uniform random point of a convex quad.
pub fn sample_quad(rng: &mut impl Rng, q: &[Point3; 4]) -> Point3 {
    let w0 = tri_area(&q[0], &q[1], &q[2]);
    let w1 = tri_area(&q[0], &q[2], &q[3]);
    let (a, b, c) = if rng.random_range(0.0..w0 + w1) < w0 {
        (q[0], q[1], q[2])
    } else {
        (q[0], q[2], q[3])
    };
    let (mut r1, mut r2): (f64, f64) = (rng.random(), rng.random());
    if r1 + r2 > 1.0 {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
    }
    a + (b - a) * r1 + (c - a) * r2
}

/// In-plane containment with every edge cleared by at least `margin`.
fn inside_with_margin(p: &Point3, q: &[Point3; 4], n: &Point3, margin: f64) -> bool {
    (0..4).all(|i| {
        let e = q[(i + 1) % 4] - q[i];
        n.cross(&e).normalize().dot(&(p - q[i])) >= margin
    })
}

fn point_segment(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let d = b - a;
    let t = ((p - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn point_quad_distance(p: &Point3, q: &[Point3; 4]) -> f64 {
    let n = quad_normal(q);
    let h = n.dot(&(p - q[0]));
    let foot = p - n * h;
    if inside_with_margin(&foot, q, &n, 0.0) {
        return h.abs();
    }
    (0..4)
        .map(|i| point_segment(p, &q[i], &q[(i + 1) % 4]))
        .fold(f64::INFINITY, f64::min)
}

/// Sampling verdict on whether two quads meet.
///
/// `Some(true)`: two samples of one quad lie strictly on opposite sides of the other
/// quad's plane with both feet strictly inside it, so the chord between them crosses
/// it (or, for coplanar quads, a sample lies strictly inside both). `Some(false)`: every
/// sample is farther than `clear` from the other quad, which exceeds the sampling gap.
/// `None` otherwise.
pub fn quad_oracle(
    rng: &mut impl Rng,
    a: &[Point3; 4],
    b: &[Point3; 4],
    samples: usize,
    clear: f64,
) -> Option<bool> {
    let margin = 1e-6;
    let mut nearest = f64::INFINITY;
    for (x, y) in [(a, b), (b, a)] {
        let n = quad_normal(y);
        let coplanar = quad_normal(x).cross(&n).norm() < 1e-9 && n.dot(&(x[0] - y[0])).abs() < 1e-9;
        let (mut above, mut below) = (false, false);
        for _ in 0..samples {
            let p = sample_quad(rng, x);
            let h = n.dot(&(p - y[0]));
            let foot = p - n * h;
            if inside_with_margin(&foot, y, &n, margin) {
                if coplanar {
                    return Some(true);
                }
                above |= h > margin;
                below |= h < -margin;
                if above && below {
                    return Some(true);
                }
            }
            nearest = nearest.min(point_quad_distance(&p, y));
        }
    }
    (nearest > clear).then_some(false)
}

// ---------------------------------------------------------------------------
// projection

pub fn random_state(rng: &mut impl Rng, k: &ProjectionConstants) -> EmbeddingState {
    let mut phi = [0.0; 10];
    for a in phi.iter_mut() {
        *a = rng.random_range(0.0..TAU);
    }
    let d5 = k.min_d5() + rng.random_range(0.0..4.0);
    let d4 = k.min_d4(d5) + rng.random_range(0.0..8.0);
    EmbeddingState::new(d5, d4, phi)
}

/// Orthographic shadow: centered coordinates, first three kept.
pub fn orthographic(v: &CellCode) -> Point3 {
    let x = v.vertex_coords();
    let c = |i: usize| x.get(i).map_or(0.0, |t| t - 0.5);
    Point3::new(c(0), c(1), c(2))
}

pub fn random_rigid_motion(rng: &mut impl Rng) -> (Matrix3<f64>, Point3) {
    let axis = Unit::new_normalize(random_unit(rng));
    let r = Rotation3::from_axis_angle(&axis, rng.random_range(0.0..TAU));
    (*r.matrix(), random_point(rng, 5.0))
}

// ---------------------------------------------------------------------------
// surfaces

/// Connected closed surfaces among all subsets of the 2-cells of `Q^n`, checked
/// directly from cell containment.
pub fn brute_force_closed_surfaces(n: usize) -> Vec<Vec<CellCode>> {
    let all: Vec<CellCode> = full_skeleton(n, 2).unwrap().into_iter().collect();
    assert!(all.len() <= 20, "brute force only for tiny cubes");
    let mut out = Vec::new();
    for mask in 1u32..(1 << all.len()) {
        let faces: Vec<CellCode> = (0..all.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| all[i])
            .collect();
        if is_closed_connected(&faces) {
            out.push(faces);
        }
    }
    out
}

fn is_closed_connected(faces: &[CellCode]) -> bool {
    let mut edge_faces: BTreeMap<CellCode, Vec<usize>> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for e in boundary_cells(f, 1).unwrap() {
            edge_faces.entry(e).or_default().push(i);
        }
    }
    if edge_faces.values().any(|v| v.len() != 2) {
        return false;
    }
    // faces around each vertex must form one cycle under edge adjacency
    let mut vertex_faces: BTreeMap<CellCode, BTreeSet<usize>> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for v in boundary_cells(f, 0).unwrap() {
            vertex_faces.entry(v).or_default().insert(i);
        }
    }
    for (v, around) in &vertex_faces {
        let links: Vec<(usize, usize)> = edge_faces
            .iter()
            .filter(|(e, _)| e.contains(v))
            .map(|(_, fs)| (fs[0], fs[1]))
            .collect();
        if !one_component(around, &links) {
            return false;
        }
    }
    let everything: BTreeSet<usize> = (0..faces.len()).collect();
    let links: Vec<(usize, usize)> = edge_faces.values().map(|fs| (fs[0], fs[1])).collect();
    one_component(&everything, &links)
}

fn one_component(nodes: &BTreeSet<usize>, links: &[(usize, usize)]) -> bool {
    let Some(&start) = nodes.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &(a, b) in links {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == nodes.len()
}
