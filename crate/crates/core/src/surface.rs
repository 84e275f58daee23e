//! Closed-surface recognition and topological classification.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cell::CellCode;
use crate::complex::CubicalComplex;
use crate::error::{Error, Result};

/// The link graph at a vertex: nodes are the incident edges, and two edges are linked
/// when a face of the complex contains both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFigure {
    pub vertex: CellCode,
    pub nodes: Vec<CellCode>,
    /// Pairs of node indices, one per witnessing face.
    pub links: Vec<(usize, usize)>,
}

impl VertexFigure {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(a, b) in &self.links {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.nodes.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.links {
                let next = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A single cycle through every node. Two faces of a cubical complex never share two
    /// edges at a vertex, so at least three nodes are required.
    pub fn is_cycle(&self) -> bool {
        self.nodes.len() >= 3 && self.degrees().into_iter().all(|d| d == 2) && self.is_connected()
    }
}

pub fn vertex_figure(complex: &CubicalComplex, vertex: &CellCode) -> Result<VertexFigure> {
    let v = complex
        .vertex_index(vertex)
        .ok_or(Error::NotAVertex(*vertex))?;
    let edge_ids = complex.vertex_edges(v);
    let nodes: Vec<CellCode> = edge_ids.iter().map(|&e| complex.edges()[e]).collect();
    let node_of = |e: usize| {
        edge_ids
            .iter()
            .position(|&x| x == e)
            .expect("incident edge")
    };
    let mut links = Vec::new();
    for &f in complex.vertex_faces(v) {
        let fv = complex.face_vertices(f);
        let fe = complex.face_edges(f);
        let k = fv.iter().position(|&x| x == v).expect("corner");
        // edges entering and leaving corner k
        let (a, b) = (node_of(fe[(k + 3) % 4]), node_of(fe[k]));
        links.push((a.min(b), a.max(b)));
    }
    links.sort_unstable();
    Ok(VertexFigure {
        vertex: *vertex,
        nodes,
        links,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedSurfaceReport {
    pub closed: bool,
    pub empty: bool,
    /// Edges whose face count differs from two, with that count.
    pub edge_violations: Vec<(CellCode, usize)>,
    /// Vertices whose vertex figure is not a single cycle.
    pub vertex_violations: Vec<CellCode>,
}

pub fn is_closed_surface(complex: &CubicalComplex) -> ClosedSurfaceReport {
    if complex.is_empty() {
        return ClosedSurfaceReport {
            empty: true,
            ..Default::default()
        };
    }
    let edge_violations: Vec<(CellCode, usize)> = complex
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(i, e)| {
            let k = complex.edge_faces(i).len();
            (k != 2).then_some((*e, k))
        })
        .collect();
    let vertex_violations: Vec<CellCode> = complex
        .vertices()
        .iter()
        .filter(|v| {
            !vertex_figure(complex, v)
                .expect("vertex of the complex")
                .is_cycle()
        })
        .copied()
        .collect();
    ClosedSurfaceReport {
        closed: edge_violations.is_empty() && vertex_violations.is_empty(),
        empty: false,
        edge_violations,
        vertex_violations,
    }
}

pub fn euler_characteristic(complex: &CubicalComplex) -> i64 {
    complex.vertices().len() as i64 - complex.edges().len() as i64 + complex.faces().len() as i64
}

/// Direction (+1 forward, -1 backward) in which face `f`'s cyclic corner order runs
/// along edge `e`, relative to the edge's 0 -> 1 orientation.
fn edge_direction(complex: &CubicalComplex, f: usize, e: usize) -> i8 {
    let fv = complex.face_vertices(f);
    let k = complex
        .face_edges(f)
        .iter()
        .position(|&x| x == e)
        .expect("edge of face");
    let [lo, _] = complex.edge_vertices(e);
    if fv[k] == lo {
        1
    } else {
        -1
    }
}

/// Attempts to orient every face so that faces sharing an edge traverse it in opposite
/// directions. Returns the orientation signs if one exists.
pub fn orientation(complex: &CubicalComplex) -> Result<Option<Vec<i8>>> {
    if !is_closed_surface(complex).closed {
        return Err(Error::NotAClosedSurface);
    }
    let nf = complex.faces().len();
    let mut sign = vec![0i8; nf];
    for start in 0..nf {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for e in complex.face_edges(f) {
                let df = edge_direction(complex, f, e) * sign[f];
                for &g in complex.edge_faces(e) {
                    if g == f {
                        continue;
                    }
                    let needed = -df * edge_direction(complex, g, e);
                    if sign[g] == 0 {
                        sign[g] = needed;
                        queue.push_back(g);
                    } else if sign[g] != needed {
                        return Ok(None);
                    }
                }
            }
        }
    }
    Ok(Some(sign))
}

pub fn is_orientable(complex: &CubicalComplex) -> Result<bool> {
    Ok(orientation(complex)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub connected: bool,
    pub closed: bool,
    /// Populated for closed complexes.
    pub orientable: Option<bool>,
    pub euler_characteristic: i64,
    /// Populated for connected closed orientable surfaces.
    pub genus: Option<i64>,
    /// Populated for connected closed non-orientable surfaces.
    pub demigenus: Option<i64>,
}

impl SurfaceClass {
    /// Human-readable name for the common small cases.
    pub fn name(&self) -> String {
        match (self.genus, self.demigenus) {
            (Some(0), _) => "sphere".into(),
            (Some(1), _) => "torus".into(),
            (Some(g), _) => format!("genus-{g} surface"),
            (_, Some(1)) => "projective plane".into(),
            (_, Some(2)) => "Klein bottle".into(),
            (_, Some(k)) => format!("demigenus-{k} surface"),
            _ => "not a connected closed surface".into(),
        }
    }
}

pub fn classify(complex: &CubicalComplex) -> SurfaceClass {
    let connected = !complex.is_empty() && complex.is_connected();
    let closed = is_closed_surface(complex).closed;
    let chi = euler_characteristic(complex);
    let orientable = if closed {
        Some(is_orientable(complex).expect("closed surface"))
    } else {
        None
    };
    let (genus, demigenus) = match (connected, orientable) {
        (true, Some(true)) => (Some((2 - chi) / 2), None),
        (true, Some(false)) => (None, Some(2 - chi)),
        _ => (None, None),
    };
    SurfaceClass {
        connected,
        closed,
        orientable,
        euler_characteristic: chi,
        genus,
        demigenus,
    }
}
