//! Printable meshes of a projected complex, and their binary STL and OBJ encodings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cell::CellCode;
use crate::complex::CubicalComplex;
use crate::error::{Error, Result};
use crate::geometry::EPS_GEOM;
use crate::projection::{Point3, ProjectedScene};

pub const STL_HEADER: &[u8] = b"cubesurf binary stl";

/// Cross-section of an edge beam. Both profiles have inradius `r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamProfile {
    #[default]
    Square,
    Octagon,
}

impl BeamProfile {
    fn sides(self) -> usize {
        match self {
            BeamProfile::Square => 4,
            BeamProfile::Octagon => 8,
        }
    }

    /// Triangles per beam: two per side plus two fans closing the ends.
    pub fn triangles_per_beam(self) -> usize {
        let k = self.sides();
        2 * k + 2 * (k - 2)
    }
}

impl FromStr for BeamProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(BeamProfile::Square),
            "octagon" => Ok(BeamProfile::Octagon),
            other => Err(Error::InvalidConfig(format!(
                "unknown beam profile `{other}` (expected square or octagon)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleSource {
    Edge(CellCode),
    Face(CellCode),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub vertices: [Point3; 3],
    pub source: TriangleSource,
}

impl Triangle {
    /// Unit normal by the right-hand rule on the vertex order.
    pub fn normal(&self) -> Point3 {
        let [a, b, c] = self.vertices;
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        if len > 0.0 {
            n / len
        } else {
            Point3::zeros()
        }
    }

    pub fn area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        0.5 * (b - a).cross(&(c - a)).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamOptions {
    pub r: f64,
    pub profile: BeamProfile,
    /// Also emit a slab of thickness `r` for every face.
    pub panels: bool,
}

impl BeamOptions {
    pub fn new(r: f64) -> Self {
        BeamOptions {
            r,
            profile: BeamProfile::Square,
            panels: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BeamMesh {
    pub triangles: Vec<Triangle>,
}

/// Two unit vectors completing `u` to a right-handed frame `(v, w, u)`.
fn frame(u: &Point3) -> (Point3, Point3) {
    let axis = if u.x.abs() <= u.y.abs() && u.x.abs() <= u.z.abs() {
        Point3::x()
    } else if u.y.abs() <= u.z.abs() {
        Point3::y()
    } else {
        Point3::z()
    };
    let v = axis.cross(u).normalize();
    let w = u.cross(&v);
    (v, w)
}

/// Closed prism around the segment `[a, b]` with the given profile and inradius `r`.
pub fn beam_triangles(
    a: &Point3,
    b: &Point3,
    r: f64,
    profile: BeamProfile,
) -> Result<Vec<[Point3; 3]>> {
    let axis = b - a;
    let len = axis.norm();
    if len <= EPS_GEOM {
        return Err(Error::Degenerate("zero-length beam"));
    }
    let u = axis / len;
    let (v, w) = frame(&u);
    let k = profile.sides();
    let step = std::f64::consts::TAU / k as f64;
    let circumradius = r / (step / 2.0).cos();
    let ring: Vec<Point3> = (0..k)
        .map(|i| {
            let t = step * (i as f64 + 0.5);
            (v * t.cos() + w * t.sin()) * circumradius
        })
        .collect();
    let lo: Vec<Point3> = ring.iter().map(|p| a + p).collect();
    let hi: Vec<Point3> = ring.iter().map(|p| b + p).collect();
    let mut out = Vec::with_capacity(profile.triangles_per_beam());
    for i in 0..k {
        let j = (i + 1) % k;
        out.push([lo[i], lo[j], hi[j]]);
        out.push([lo[i], hi[j], hi[i]]);
    }
    for i in 1..k - 1 {
        out.push([hi[0], hi[i], hi[i + 1]]);
        out.push([lo[0], lo[i + 1], lo[i]]);
    }
    Ok(out)
}

/// Slab of half-thickness `h` around a planar quad given in cyclic order.
fn panel_triangles(q: &[Point3; 4], h: f64) -> Option<Vec<[Point3; 3]>> {
    let n = (q[1] - q[0]).cross(&(q[2] - q[0])) + (q[2] - q[0]).cross(&(q[3] - q[0]));
    let len = n.norm();
    if len <= EPS_GEOM {
        return None;
    }
    let n = n / len * h;
    let top = q.map(|p| p + n);
    let bot = q.map(|p| p - n);
    let mut out = vec![
        [top[0], top[1], top[2]],
        [top[0], top[2], top[3]],
        [bot[0], bot[2], bot[1]],
        [bot[0], bot[3], bot[2]],
    ];
    for i in 0..4 {
        let j = (i + 1) % 4;
        out.push([bot[i], bot[j], top[j]]);
        out.push([bot[i], top[j], top[i]]);
    }
    Some(out)
}

impl BeamMesh {
    /// One beam per edge, in edge order, then one panel per face when requested.
    pub fn build(
        scene: &ProjectedScene,
        complex: &CubicalComplex,
        opts: &BeamOptions,
    ) -> Result<Self> {
        if !(opts.r.is_finite() && opts.r > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "beam radius must be positive, got {}",
                opts.r
            )));
        }
        let mut triangles = Vec::new();
        for (e, &code) in complex.edges().iter().enumerate() {
            let [a, b] = scene.edge_segment(complex, e);
            let tris = beam_triangles(&a, &b, opts.r, opts.profile)
                .map_err(|_| Error::DegenerateEdge(code))?;
            for t in tris {
                let t = Triangle {
                    vertices: t,
                    source: TriangleSource::Edge(code),
                };
                if t.area() <= EPS_GEOM {
                    return Err(Error::DegenerateEdge(code));
                }
                triangles.push(t);
            }
        }
        if opts.panels {
            for (f, &code) in complex.faces().iter().enumerate() {
                let q = scene.face_corners(complex, f);
                let tris = panel_triangles(&q, opts.r / 2.0).ok_or(Error::DegenerateFace(code))?;
                for t in tris {
                    let t = Triangle {
                        vertices: t,
                        source: TriangleSource::Face(code),
                    };
                    if t.area() <= EPS_GEOM {
                        return Err(Error::DegenerateFace(code));
                    }
                    triangles.push(t);
                }
            }
        }
        Ok(BeamMesh { triangles })
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Binary STL: zero-padded 80-byte header, little-endian triangle count, then
    /// normal, three vertices and a zero attribute word per triangle.
    pub fn to_stl_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(84 + 50 * self.len());
        let mut header = [0u8; 80];
        header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
        out.extend_from_slice(&header);
        out.extend_from_slice(&(self.len() as u32).to_le_bytes());
        for t in &self.triangles {
            let n = t.normal();
            for p in std::iter::once(&n).chain(t.vertices.iter()) {
                for k in 0..3 {
                    out.extend_from_slice(&(p[k] as f32).to_le_bytes());
                }
            }
            out.extend_from_slice(&[0, 0]);
        }
        out
    }

    /// OBJ text with shared vertices merged on exact coordinates.
    pub fn to_obj(&self) -> String {
        let mut index: HashMap<[u64; 3], usize> = HashMap::new();
        let mut verts = String::new();
        let mut faces = String::new();
        for t in &self.triangles {
            let mut ids = [0usize; 3];
            for (slot, p) in ids.iter_mut().zip(&t.vertices) {
                let key = [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()];
                let next = index.len() + 1;
                *slot = *index.entry(key).or_insert_with(|| {
                    let _ = writeln!(verts, "v {:?} {:?} {:?}", p.x, p.y, p.z);
                    next
                });
            }
            let _ = writeln!(faces, "f {} {} {}", ids[0], ids[1], ids[2]);
        }
        verts + &faces
    }
}

/// OBJ text of the projected complex itself: a `v` line per vertex, an `f` line per
/// face in cyclic corner order, an `l` line per edge.
pub fn scene_to_obj(scene: &ProjectedScene, complex: &CubicalComplex) -> String {
    let mut out = String::new();
    for p in scene.points() {
        let _ = writeln!(out, "v {:?} {:?} {:?}", p.x, p.y, p.z);
    }
    for f in 0..complex.faces().len() {
        let [a, b, c, d] = complex.face_vertices(f).map(|v| v + 1);
        let _ = writeln!(out, "f {a} {b} {c} {d}");
    }
    for e in 0..complex.edges().len() {
        let [a, b] = complex.edge_vertices(e).map(|v| v + 1);
        let _ = writeln!(out, "l {a} {b}");
    }
    out
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(bytes)?;
    file.flush()?;
    Ok(())
}

pub fn write_stl_binary(mesh: &BeamMesh, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &mesh.to_stl_bytes())
}

pub fn write_obj(mesh: &BeamMesh, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), mesh.to_obj().as_bytes())
}

pub fn write_scene_obj(
    scene: &ProjectedScene,
    complex: &CubicalComplex,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_bytes(path.as_ref(), scene_to_obj(scene, complex).as_bytes())
}
