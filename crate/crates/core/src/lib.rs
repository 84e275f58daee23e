//! Two-dimensional cubical complexes in the n-cube: closed-surface recognition and
//! classification, surface search, projection from `R^5` to `R^3`, self-intersection
//! metrics, an embedding optimizer, and mesh export for 3D printing.

pub mod cell;
pub mod complex;
pub mod error;
pub mod export;
pub mod geometry;
pub mod metrics;
pub mod optimizer;
pub mod projection;
pub mod search;
pub mod surface;
pub mod symmetry;

pub use cell::{boundary_cells, full_skeleton, parse_cell, CellCode, Symbol};
pub use complex::{cube_boundary, CubicalComplex, IncidenceCardinalities};
pub use error::{Error, Result};
pub use export::{BeamMesh, BeamOptions, BeamProfile};
pub use metrics::{MetricsPlan, MetricsReport, WidthConfig};
pub use optimizer::{optimize, AgentKind, AgentPolicy, Budget, MdpEnv, RewardConfig, SignMode};
pub use projection::{
    apply_state, rotation_matrix, wrap_state, EmbeddingState, ProjectedScene, ProjectionConstants,
};
pub use search::{enumerate_closed_surfaces, SearchConfig, SearchMode, SurfaceTarget};
pub use surface::{
    classify, euler_characteristic, is_closed_surface, is_orientable, vertex_figure,
    ClosedSurfaceReport, SurfaceClass, VertexFigure,
};
pub use symmetry::{canonical_signature, CubeSymmetry};
