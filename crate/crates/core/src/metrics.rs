//! Self-intersection measures of a projected complex: intersecting face pairs, edge
//! pairs closer than a beam width, and the total pairwise edge clearance.

use serde::{Deserialize, Serialize};

use crate::cell::CellCode;
use crate::complex::CubicalComplex;
use crate::error::{Error, Result};
use crate::geometry::{faces_intersect, segment_clearance};
use crate::projection::ProjectedScene;

/// Beam radius `r`; edge pairs closer than `2r` overlap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthConfig {
    r: f64,
}

impl WidthConfig {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(WidthConfig { r })
        } else {
            Err(Error::InvalidConfig(format!(
                "beam radius must be positive, got {r}"
            )))
        }
    }

    /// Default radius: 2% of the scene's bounding-box diagonal.
    pub fn relative_to(scene: &ProjectedScene) -> Result<Self> {
        Self::new(0.02 * scene.bbox_diagonal())
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub sigma: usize,
    pub overlaps: usize,
    pub total_clearance: f64,
    pub face_pairs: Vec<[CellCode; 2]>,
    pub edge_pairs: Vec<[CellCode; 2]>,
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

#[derive(Clone, Copy, Debug)]
struct FacePair {
    f: usize,
    g: usize,
    shared_vertex: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
struct EdgePair {
    e: usize,
    h: usize,
    adjacent: bool,
}

/// Pair lists of a complex, precomputed once and reused across states.
#[derive(Clone, Debug)]
pub struct MetricsPlan {
    face_pairs: Vec<FacePair>,
    edge_pairs: Vec<EdgePair>,
    /// Count edge pairs sharing a vertex towards the overlap total.
    pub count_adjacent_edges: bool,
}

impl MetricsPlan {
    pub fn new(complex: &CubicalComplex) -> Self {
        let nf = complex.faces().len();
        let mut face_pairs = Vec::new();
        for f in 0..nf {
            for g in f + 1..nf {
                if complex.shared_edge(f, g).is_none() {
                    face_pairs.push(FacePair {
                        f,
                        g,
                        shared_vertex: complex.shared_vertex(f, g),
                    });
                }
            }
        }
        let ne = complex.edges().len();
        let mut edge_pairs = Vec::with_capacity(ne * ne.saturating_sub(1) / 2);
        for e in 0..ne {
            let ev = complex.edge_vertices(e);
            for h in e + 1..ne {
                let hv = complex.edge_vertices(h);
                edge_pairs.push(EdgePair {
                    e,
                    h,
                    adjacent: ev.iter().any(|v| hv.contains(v)),
                });
            }
        }
        MetricsPlan {
            face_pairs,
            edge_pairs,
            count_adjacent_edges: false,
        }
    }

    pub fn face_intersections(
        &self,
        scene: &ProjectedScene,
        complex: &CubicalComplex,
    ) -> Result<Vec<(usize, usize)>> {
        let mut hits = Vec::new();
        for fp in &self.face_pairs {
            let a = scene.face_corners(complex, fp.f);
            let b = scene.face_corners(complex, fp.g);
            let shared = fp.shared_vertex.map(|v| scene.points()[v]);
            let hit = faces_intersect(&a, &b, false, shared).map_err(|e| match e {
                Error::Degenerate(_) => {
                    let bad = if crate::geometry::check_quad(&a).is_err() {
                        fp.f
                    } else {
                        fp.g
                    };
                    Error::DegenerateFace(complex.faces()[bad])
                }
                other => other,
            })?;
            if hit {
                hits.push((fp.f, fp.g));
            }
        }
        Ok(hits)
    }

    /// Overlapping edge pairs at radius `r` and the total clearance `L`.
    pub fn edge_measures(
        &self,
        scene: &ProjectedScene,
        complex: &CubicalComplex,
        width: &WidthConfig,
    ) -> Result<(Vec<(usize, usize)>, f64)> {
        let threshold = 2.0 * width.r();
        let mut overlapping = Vec::new();
        let mut total = 0.0;
        for ep in &self.edge_pairs {
            if ep.adjacent {
                if self.count_adjacent_edges {
                    overlapping.push((ep.e, ep.h));
                }
                continue;
            }
            let [a0, a1] = scene.edge_segment(complex, ep.e);
            let [b0, b1] = scene.edge_segment(complex, ep.h);
            let c = segment_clearance(&a0, &a1, &b0, &b1).map_err(|_| {
                let bad = if (a1 - a0).norm() <= crate::geometry::EPS_GEOM {
                    ep.e
                } else {
                    ep.h
                };
                Error::DegenerateEdge(complex.edges()[bad])
            })?;
            total += c.distance;
            if c.distance < threshold {
                overlapping.push((ep.e, ep.h));
            }
        }
        Ok((overlapping, total))
    }

    pub fn report(
        &self,
        scene: &ProjectedScene,
        complex: &CubicalComplex,
        width: &WidthConfig,
    ) -> Result<MetricsReport> {
        let faces = self.face_intersections(scene, complex)?;
        let (edges, total) = self.edge_measures(scene, complex, width)?;
        let fc = complex.faces();
        let ec = complex.edges();
        Ok(MetricsReport {
            sigma: faces.len(),
            overlaps: edges.len(),
            total_clearance: total,
            face_pairs: faces.into_iter().map(|(f, g)| [fc[f], fc[g]]).collect(),
            edge_pairs: edges.into_iter().map(|(e, h)| [ec[e], ec[h]]).collect(),
        })
    }
}

/// `Sigma_C`: face pairs whose projections intersect, skipping pairs sharing an edge.
pub fn face_intersections(
    scene: &ProjectedScene,
    complex: &CubicalComplex,
) -> Result<(usize, Vec<[CellCode; 2]>)> {
    let hits = MetricsPlan::new(complex).face_intersections(scene, complex)?;
    let fc = complex.faces();
    Ok((
        hits.len(),
        hits.into_iter().map(|(f, g)| [fc[f], fc[g]]).collect(),
    ))
}

/// `o_w`: non-adjacent edge pairs whose clearance is strictly below `2r`.
pub fn edge_overlaps(
    scene: &ProjectedScene,
    complex: &CubicalComplex,
    width: &WidthConfig,
) -> Result<(usize, Vec<[CellCode; 2]>)> {
    let (pairs, _) = MetricsPlan::new(complex).edge_measures(scene, complex, width)?;
    let ec = complex.edges();
    Ok((
        pairs.len(),
        pairs.into_iter().map(|(e, h)| [ec[e], ec[h]]).collect(),
    ))
}

/// `L`: sum of clearances over all edge pairs (adjacent pairs contribute zero).
pub fn total_clearance(scene: &ProjectedScene, complex: &CubicalComplex) -> Result<f64> {
    let width = WidthConfig::new(1.0)?;
    Ok(MetricsPlan::new(complex)
        .edge_measures(scene, complex, &width)?
        .1)
}
