//! Two-dimensional cubical complexes: a set of 2-cells of `Q^n` together with the edges
//! and vertices they span and precomputed incidence tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::cell::{parse_cell, CellCode};
use crate::error::{Error, Result};

/// Immutable after construction. Cells are kept sorted in cell order, so indices are
/// stable for a given face set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalComplex {
    n: usize,
    faces: Vec<CellCode>,
    edges: Vec<CellCode>,
    vertices: Vec<CellCode>,
    /// Corners in cyclic order (0,0) (1,0) (1,1) (0,1) over the face's two free axes.
    face_vertices: Vec<[usize; 4]>,
    /// `face_edges[f][k]` joins corners `k` and `k + 1`.
    face_edges: Vec<[usize; 4]>,
    edge_vertices: Vec<[usize; 2]>,
    edge_faces: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
}

/// Per-cell incidence counts `F_e`, `F_v` and `E_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceCardinalities {
    pub faces_per_edge: BTreeMap<CellCode, usize>,
    pub faces_per_vertex: BTreeMap<CellCode, usize>,
    pub edges_per_vertex: BTreeMap<CellCode, usize>,
}

impl CubicalComplex {
    /// Builds a complex from its faces, inferring the ambient dimension.
    pub fn build<I: IntoIterator<Item = CellCode>>(faces: I) -> Result<Self> {
        let faces: Vec<CellCode> = faces.into_iter().collect();
        let n = faces.first().ok_or(Error::EmptyComplex)?.ambient_dim();
        Self::with_dimension(n, faces)
    }

    /// Builds a complex in `Q^n`; an empty face set is allowed.
    pub fn with_dimension<I: IntoIterator<Item = CellCode>>(n: usize, faces: I) -> Result<Self> {
        if !(1..=crate::cell::MAX_DIM).contains(&n) {
            return Err(Error::InvalidDimension(n));
        }
        let mut fs = Vec::new();
        for f in faces {
            if f.ambient_dim() != n {
                return Err(Error::MixedAmbient {
                    cell: f,
                    found: f.ambient_dim(),
                    expected: n,
                });
            }
            if f.dimension() != 2 {
                return Err(Error::MixedDimension(f));
            }
            fs.push(f);
        }
        fs.sort();
        fs.dedup();

        let mut corner_cells = Vec::with_capacity(fs.len());
        let mut edge_cells = Vec::with_capacity(fs.len());
        for f in &fs {
            let (corners, sides) = face_cycle(f);
            corner_cells.push(corners);
            edge_cells.push(sides);
        }
        let mut vertices: Vec<CellCode> = corner_cells.iter().flatten().copied().collect();
        vertices.sort();
        vertices.dedup();
        let mut edges: Vec<CellCode> = edge_cells.iter().flatten().copied().collect();
        edges.sort();
        edges.dedup();

        let vidx = |c: &CellCode| vertices.binary_search(c).expect("vertex present");
        let eidx = |c: &CellCode| edges.binary_search(c).expect("edge present");

        let face_vertices: Vec<[usize; 4]> =
            corner_cells.iter().map(|cs| cs.map(|c| vidx(&c))).collect();
        let face_edges: Vec<[usize; 4]> =
            edge_cells.iter().map(|es| es.map(|e| eidx(&e))).collect();
        let edge_vertices: Vec<[usize; 2]> = edges
            .iter()
            .map(|e| {
                let axis = e.free_axes()[0];
                [
                    vidx(&e.fix_axis(axis, false)),
                    vidx(&e.fix_axis(axis, true)),
                ]
            })
            .collect();

        let mut edge_faces = vec![Vec::new(); edges.len()];
        let mut vertex_faces = vec![Vec::new(); vertices.len()];
        for (fi, (es, vs)) in face_edges.iter().zip(&face_vertices).enumerate() {
            for &e in es {
                edge_faces[e].push(fi);
            }
            for &v in vs {
                vertex_faces[v].push(fi);
            }
        }
        let mut vertex_edges = vec![Vec::new(); vertices.len()];
        for (ei, vs) in edge_vertices.iter().enumerate() {
            for &v in vs {
                vertex_edges[v].push(ei);
            }
        }

        Ok(CubicalComplex {
            n,
            faces: fs,
            edges,
            vertices,
            face_vertices,
            face_edges,
            edge_vertices,
            edge_faces,
            vertex_edges,
            vertex_faces,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[CellCode] {
        &self.faces
    }

    pub fn edges(&self) -> &[CellCode] {
        &self.edges
    }

    pub fn vertices(&self) -> &[CellCode] {
        &self.vertices
    }

    pub fn face_index(&self, c: &CellCode) -> Option<usize> {
        self.faces.binary_search(c).ok()
    }

    pub fn edge_index(&self, c: &CellCode) -> Option<usize> {
        self.edges.binary_search(c).ok()
    }

    pub fn vertex_index(&self, c: &CellCode) -> Option<usize> {
        self.vertices.binary_search(c).ok()
    }

    pub fn face_vertices(&self, f: usize) -> [usize; 4] {
        self.face_vertices[f]
    }

    pub fn face_edges(&self, f: usize) -> [usize; 4] {
        self.face_edges[f]
    }

    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        self.edge_vertices[e]
    }

    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    /// Common edge of two faces, if any.
    pub fn shared_edge(&self, f: usize, g: usize) -> Option<usize> {
        let ge = self.face_edges[g];
        self.face_edges[f].iter().copied().find(|e| ge.contains(e))
    }

    /// Common vertex of two faces sharing exactly one vertex.
    pub fn shared_vertex(&self, f: usize, g: usize) -> Option<usize> {
        let gv = self.face_vertices[g];
        let mut common = self.face_vertices[f]
            .iter()
            .copied()
            .filter(|v| gv.contains(v));
        let first = common.next();
        match common.next() {
            Some(_) => None,
            None => first,
        }
    }

    pub fn incidence_counts(&self) -> IncidenceCardinalities {
        IncidenceCardinalities {
            faces_per_edge: self
                .edges
                .iter()
                .zip(&self.edge_faces)
                .map(|(e, fs)| (*e, fs.len()))
                .collect(),
            faces_per_vertex: self
                .vertices
                .iter()
                .zip(&self.vertex_faces)
                .map(|(v, fs)| (*v, fs.len()))
                .collect(),
            edges_per_vertex: self
                .vertices
                .iter()
                .zip(&self.vertex_edges)
                .map(|(v, es)| (*v, es.len()))
                .collect(),
        }
    }

    /// Face-adjacency components (faces adjacent iff they share an edge), each sorted.
    pub fn face_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.faces.len()];
        let mut out = Vec::new();
        for start in 0..self.faces.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(f) = stack.pop() {
                comp.push(f);
                for &e in &self.face_edges[f] {
                    for &g in &self.edge_faces[e] {
                        if !seen[g] {
                            seen[g] = true;
                            stack.push(g);
                        }
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.face_components().len() == 1
    }

    /// Serializes to the one-cell-per-line text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for f in &self.faces {
            let _ = writeln!(s, "{f}");
        }
        s
    }

    /// Parses the text format: one face per line, `#` comments, blank lines skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut faces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let len = *n.get_or_insert(line.chars().count());
            let cell = parse_cell(line, len).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            if cell.dimension() != 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("`{line}` must contain exactly two '*'"),
                });
            }
            faces.push(cell);
        }
        let n = n.ok_or(Error::EmptyComplex)?;
        Self::with_dimension(n, faces)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Corners in cyclic order and the edges between consecutive corners.
fn face_cycle(face: &CellCode) -> ([CellCode; 4], [CellCode; 4]) {
    let axes = face.free_axes();
    let (a, b) = (axes[0], axes[1]);
    let corner = |x: bool, y: bool| face.fix_axis(a, x).fix_axis(b, y);
    let corners = [
        corner(false, false),
        corner(true, false),
        corner(true, true),
        corner(false, true),
    ];
    let sides = [
        face.fix_axis(b, false),
        face.fix_axis(a, true),
        face.fix_axis(b, true),
        face.fix_axis(a, false),
    ];
    (corners, sides)
}

/// The six square faces bounding a 3-cell.
pub fn cube_boundary(cube: &CellCode) -> Result<CubicalComplex> {
    let faces = crate::cell::boundary_cells(cube, 2)?;
    CubicalComplex::build(faces)
}
