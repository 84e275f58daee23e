//! Embedding states and the projection pipeline `R^5 -> R^4 -> R^3`.
//!
//! A vertex of the complex is centered on the origin, rotated by ten plane rotations,
//! then sent through two pinhole projections. Each pinhole has its camera on the last
//! coordinate axis at distance `d` from the origin, looking at the origin, and maps
//! `p` to `c * p_head / (d - p_last)`, where `c` is the camera-to-screen distance.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::{SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::cell::CellCode;
use crate::complex::CubicalComplex;
use crate::error::{Error, Result};

pub type Matrix5 = SMatrix<f64, 5, 5>;
pub type Vector5 = SVector<f64, 5>;
pub type Point3 = Vector3<f64>;

/// Half-diagonal of the centered unit 5-cube.
pub const WORLD_RADIUS: f64 = 1.118_033_988_749_895; // sqrt(5) / 2
pub const GUARD_MARGIN: f64 = 0.1;
pub const DENOM_FLOOR: f64 = 1e-6;

/// Rotation planes in composition order.
pub const PLANES: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// Where the screen distance `c` is measured from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScreenFrom {
    #[default]
    Camera,
    Origin,
}

impl FromStr for ScreenFrom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "camera" => Ok(ScreenFrom::Camera),
            "origin" => Ok(ScreenFrom::Origin),
            other => Err(Error::InvalidConfig(format!(
                "screen_from must be `camera` or `origin`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConstants {
    pub c5: f64,
    pub c4: f64,
    #[serde(default)]
    pub screen_from: ScreenFrom,
}

impl Default for ProjectionConstants {
    fn default() -> Self {
        ProjectionConstants {
            c5: 1.0,
            c4: 10.0,
            screen_from: ScreenFrom::Camera,
        }
    }
}

impl ProjectionConstants {
    /// Camera-to-screen distance for a camera at `d` and configured screen distance `c`.
    fn focal(&self, d: f64, c: f64) -> f64 {
        match self.screen_from {
            ScreenFrom::Camera => c,
            ScreenFrom::Origin => d - c,
        }
    }

    pub fn min_d5(&self) -> f64 {
        self.c5 + WORLD_RADIUS + GUARD_MARGIN
    }

    /// Smallest admissible `d4` given `d5`: the 4D image of the centered cube lies in a
    /// ball of radius `focal * R / (d5 - R)`; the camera must clear it by the margin.
    pub fn min_d4(&self, d5: f64) -> f64 {
        let image_radius = self.focal(d5, self.c5) * WORLD_RADIUS / (d5 - WORLD_RADIUS);
        let floor = image_radius + GUARD_MARGIN;
        match self.screen_from {
            ScreenFrom::Camera => floor,
            ScreenFrom::Origin => floor.max(self.c4 + GUARD_MARGIN),
        }
    }
}

/// Camera distances and the ten rotation angles, one per coordinate plane in
/// [`PLANES`] order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingState {
    pub d5: f64,
    pub d4: f64,
    pub phi: [f64; 10],
}

impl EmbeddingState {
    pub fn new(d5: f64, d4: f64, phi: [f64; 10]) -> Self {
        EmbeddingState { d5, d4, phi }
    }

    /// The state as a point of `R^12`: `(d5, d4, phi_1, ..., phi_10)`.
    pub fn to_vector(&self) -> [f64; 12] {
        let mut v = [0.0; 12];
        v[0] = self.d5;
        v[1] = self.d4;
        v[2..].copy_from_slice(&self.phi);
        v
    }

    pub fn from_vector(v: &[f64; 12]) -> Self {
        let mut phi = [0.0; 10];
        phi.copy_from_slice(&v[2..]);
        EmbeddingState {
            d5: v[0],
            d4: v[1],
            phi,
        }
    }

    pub fn is_valid(&self, k: &ProjectionConstants) -> bool {
        self.d5.is_finite()
            && self.d4.is_finite()
            && self.phi.iter().all(|a| a.is_finite())
            && self.d5 >= k.min_d5()
            && self.d4 >= k.min_d4(self.d5)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// Reads either the single-line text record or the JSON object form.
    pub fn parse_any(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let s: EmbeddingState = serde_json::from_str(t)?;
            Ok(s)
        } else {
            t.parse()
        }
    }
}

impl fmt::Display for EmbeddingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi: Vec<String> = self.phi.iter().map(|a| format!("{a:?}")).collect();
        write!(f, "d5={:?} d4={:?} phi={}", self.d5, self.d4, phi.join(","))
    }
}

impl FromStr for EmbeddingState {
    type Err = Error;

    /// `d5=<float> d4=<float> phi=<f1>,...,<f10>`
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse {
            line: 1,
            message: m,
        };
        let (mut d5, mut d4, mut phi) = (None, None, None);
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{token}`")))?;
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| bad(format!("`{v}` in `{key}`: {e}")))
            };
            match key {
                "d5" => d5 = Some(num(value)?),
                "d4" => d4 = Some(num(value)?),
                "phi" => {
                    let angles = value.split(',').map(num).collect::<Result<Vec<f64>>>()?;
                    let arr: [f64; 10] = angles.try_into().map_err(|v: Vec<f64>| {
                        bad(format!("phi needs 10 angles, got {}", v.len()))
                    })?;
                    phi = Some(arr);
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(EmbeddingState {
            d5: d5.ok_or_else(|| bad("missing d5".into()))?,
            d4: d4.ok_or_else(|| bad("missing d4".into()))?,
            phi: phi.ok_or_else(|| bad("missing phi".into()))?,
        })
    }
}

pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid rounds tiny negatives up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Reduces every angle into `[0, 2*pi)`; distances are untouched.
pub fn wrap_state(s: &EmbeddingState) -> EmbeddingState {
    EmbeddingState {
        phi: s.phi.map(wrap_angle),
        ..*s
    }
}

/// Plane rotation taking `e_i` to `cos * e_i + sin * e_j`.
pub fn givens(i: usize, j: usize, angle: f64) -> Matrix5 {
    let (s, c) = angle.sin_cos();
    let mut g = Matrix5::identity();
    g[(i, i)] = c;
    g[(j, j)] = c;
    g[(j, i)] = s;
    g[(i, j)] = -s;
    g
}

/// Composition of the ten plane rotations, the (0,1) rotation applied first.
pub fn rotation_matrix(phi: &[f64; 10]) -> Matrix5 {
    PLANES
        .iter()
        .zip(phi)
        .fold(Matrix5::identity(), |acc, (&(i, j), &a)| {
            givens(i, j, a) * acc
        })
}

/// Pinhole projection dropping the last coordinate: `q_i = c * p_i / (d - p_last)`.
pub fn perspective_project(p: &[f64], d: f64, c: f64) -> Result<Vec<f64>> {
    let (&last, head) = p.split_last().ok_or(Error::Degenerate("empty point"))?;
    let denom = d - last;
    if denom.is_nan() || denom < DENOM_FLOOR {
        return Err(Error::BehindCamera {
            vertex: None,
            margin: denom,
        });
    }
    Ok(head.iter().map(|x| c * x / denom).collect())
}

/// Centered position of a vertex in `R^5`. Coordinates beyond the vertex's ambient
/// dimension are zero after centering.
pub fn centered_coords(vertex: &CellCode) -> Vector5 {
    let mut p = Vector5::zeros();
    for (i, x) in vertex.vertex_coords().into_iter().enumerate().take(5) {
        p[i] = x - 0.5;
    }
    p
}

/// Projected vertex positions of a complex, index-aligned with `complex.vertices()`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedScene {
    vertices: Vec<CellCode>,
    points: Vec<Point3>,
}

impl ProjectedScene {
    /// Scene from explicit points, one per complex vertex.
    pub fn from_points(complex: &CubicalComplex, points: Vec<Point3>) -> Result<Self> {
        if points.len() != complex.vertices().len() {
            return Err(Error::InvalidConfig(format!(
                "scene has {} points for {} vertices",
                points.len(),
                complex.vertices().len()
            )));
        }
        Ok(ProjectedScene {
            vertices: complex.vertices().to_vec(),
            points,
        })
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn vertices(&self) -> &[CellCode] {
        &self.vertices
    }

    pub fn point_of(&self, vertex: &CellCode) -> Option<Point3> {
        self.vertices
            .binary_search(vertex)
            .ok()
            .map(|i| self.points[i])
    }

    /// Corners of face `f` in the face's cyclic order.
    pub fn face_corners(&self, complex: &CubicalComplex, f: usize) -> [Point3; 4] {
        complex.face_vertices(f).map(|v| self.points[v])
    }

    pub fn edge_segment(&self, complex: &CubicalComplex, e: usize) -> [Point3; 2] {
        complex.edge_vertices(e).map(|v| self.points[v])
    }

    /// Axis-aligned bounding box diagonal length.
    pub fn bbox_diagonal(&self) -> f64 {
        let mut lo = Point3::repeat(f64::INFINITY);
        let mut hi = Point3::repeat(f64::NEG_INFINITY);
        for p in &self.points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if self.points.is_empty() {
            0.0
        } else {
            (hi - lo).norm()
        }
    }

    pub fn map_points(&self, f: impl Fn(&Point3) -> Point3) -> Self {
        ProjectedScene {
            vertices: self.vertices.clone(),
            points: self.points.iter().map(f).collect(),
        }
    }
}

/// Centers, rotates and projects every vertex of `complex`.
pub fn apply_state(
    complex: &CubicalComplex,
    state: &EmbeddingState,
    k: &ProjectionConstants,
) -> Result<ProjectedScene> {
    if complex.ambient_dim() > 5 {
        return Err(Error::InvalidDimension(complex.ambient_dim()));
    }
    let s = wrap_state(state);
    let m = rotation_matrix(&s.phi);
    let rotated: Vec<Vector5> = complex
        .vertices()
        .iter()
        .map(|v| m * centered_coords(v))
        .collect();
    if !s.is_valid(k) {
        // name the vertex nearest the 5D camera
        let worst = rotated
            .iter()
            .enumerate()
            .max_by(|a, b| a.1[4].total_cmp(&b.1[4]))
            .map(|(i, _)| complex.vertices()[i]);
        let margin = if s.d5 < k.min_d5() {
            s.d5 - k.min_d5()
        } else {
            s.d4 - k.min_d4(s.d5)
        };
        return Err(Error::BehindCamera {
            vertex: worst,
            margin,
        });
    }
    let f5 = k.focal(s.d5, k.c5);
    let f4 = k.focal(s.d4, k.c4);
    let mut points = Vec::with_capacity(rotated.len());
    for (i, p) in rotated.iter().enumerate() {
        let name = |e: Error| match e {
            Error::BehindCamera { margin, .. } => Error::BehindCamera {
                vertex: Some(complex.vertices()[i]),
                margin,
            },
            other => other,
        };
        let q4 = perspective_project(p.as_slice(), s.d5, f5).map_err(name)?;
        let q3 = perspective_project(&q4, s.d4, f4).map_err(name)?;
        points.push(Point3::new(q3[0], q3[1], q3[2]));
    }
    Ok(ProjectedScene {
        vertices: complex.vertices().to_vec(),
        points,
    })
}
