//! Backtracking search for connected closed cubical surfaces inside `Q^n`.
//!
//! A surface is grown from a seed face. At every node the search picks the open edge
//! (an edge lying in exactly one chosen face) with the fewest admissible closing faces
//! and branches over them. A face is admissible when none of its edges already lies in
//! two chosen faces and no vertex figure it touches has closed into a cycle while other
//! links remain at that vertex. Each surface is reached along exactly one branch, since
//! the face closing the selected edge is determined by the surface.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cell::{full_skeleton, CellCode};
use crate::complex::CubicalComplex;
use crate::error::{Error, Result};
use crate::surface::{classify, SurfaceClass};
use crate::symmetry::{signature_with_group, CubeSymmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized { seed: u64 },
}

/// Filter on the classification of a found surface. Unset fields match anything.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTarget {
    pub orientable: Option<bool>,
    pub euler_characteristic: Option<i64>,
    pub min_faces: Option<usize>,
}

impl SurfaceTarget {
    pub fn sphere() -> Self {
        Self::closed(true, 2)
    }

    pub fn torus() -> Self {
        Self::closed(true, 0)
    }

    pub fn projective_plane() -> Self {
        Self::closed(false, 1)
    }

    pub fn klein_bottle() -> Self {
        Self::closed(false, 0)
    }

    fn closed(orientable: bool, chi: i64) -> Self {
        SurfaceTarget {
            orientable: Some(orientable),
            euler_characteristic: Some(chi),
            min_faces: None,
        }
    }

    pub fn matches(&self, class: &SurfaceClass, faces: usize) -> bool {
        self.orientable.is_none_or(|o| class.orientable == Some(o))
            && self
                .euler_characteristic
                .is_none_or(|chi| class.euler_characteristic == chi)
            && self.min_faces.is_none_or(|m| faces >= m)
    }
}

impl FromStr for SurfaceTarget {
    type Err = Error;

    /// Accepts `sphere`, `torus`, `projective-plane`, `klein-bottle`, or a comma list of
    /// `orientable=BOOL`, `chi=INT`, `min-faces=INT`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidConfig(format!("target `{s}`: {m}"));
        match s.trim().to_ascii_lowercase().as_str() {
            "sphere" => return Ok(Self::sphere()),
            "torus" => return Ok(Self::torus()),
            "projective-plane" | "rp2" => return Ok(Self::projective_plane()),
            "klein-bottle" | "klein" => return Ok(Self::klein_bottle()),
            _ => {}
        }
        let mut t = SurfaceTarget::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "orientable" => {
                    t.orientable = Some(value.trim().parse().map_err(|e| bad(format!("{e}")))?)
                }
                "chi" => {
                    t.euler_characteristic =
                        Some(value.trim().parse().map_err(|e| bad(format!("{e}")))?)
                }
                "min-faces" => {
                    t.min_faces = Some(value.trim().parse().map_err(|e| bad(format!("{e}")))?)
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub max_faces: usize,
    pub mode: SearchMode,
    pub target: Option<SurfaceTarget>,
    /// Randomized mode: number of independent restarts.
    pub restarts: usize,
    /// Randomized mode: search nodes allowed per restart.
    pub node_budget: usize,
    /// Randomized mode: stop after this many distinct matches.
    pub max_results: usize,
    /// Permits exhaustive mode for `n >= 5` (long-running).
    pub allow_large_exhaustive: bool,
}

impl SearchConfig {
    pub fn new(n: usize, max_faces: usize, mode: SearchMode) -> Self {
        SearchConfig {
            n,
            max_faces,
            mode,
            target: None,
            restarts: 200,
            node_budget: 20_000,
            max_results: 1,
            allow_large_exhaustive: false,
        }
    }

    pub fn with_target(mut self, target: SurfaceTarget) -> Self {
        self.target = Some(target);
        self
    }
}

/// Exhaustive mode returns one representative per isomorphism class, ordered by face
/// count then canonical signature. Randomized mode returns up to `max_results` distinct
/// matches in discovery order.
pub fn enumerate_closed_surfaces(cfg: &SearchConfig) -> Result<Vec<CubicalComplex>> {
    match cfg.mode {
        SearchMode::Exhaustive => {
            if cfg.n >= 5 && !cfg.allow_large_exhaustive {
                return Err(Error::ExhaustiveTooLarge(cfg.n));
            }
            exhaustive(cfg)
        }
        SearchMode::Randomized { seed } => randomized(cfg, seed),
    }
}

fn exhaustive(cfg: &SearchConfig) -> Result<Vec<CubicalComplex>> {
    let lattice = Lattice::new(cfg.n)?;
    let group = CubeSymmetry::all(cfg.n);
    let mut found: BTreeMap<(usize, String), CubicalComplex> = BTreeMap::new();
    let mut search = Backtrack::new(&lattice, cfg.max_faces, None);
    // The symmetry group is transitive on 2-cells, so every class has a member
    // containing face 0.
    search.run_from(0, &mut |faces: &[CellCode]| {
        let complex = CubicalComplex::with_dimension(cfg.n, faces.iter().copied())
            .expect("faces of the lattice");
        let class = classify(&complex);
        if cfg
            .target
            .as_ref()
            .is_none_or(|t| t.matches(&class, faces.len()))
        {
            let sig = signature_with_group(complex.faces(), &group);
            found.entry((faces.len(), sig)).or_insert(complex);
        }
        true
    });
    Ok(found.into_values().collect())
}

fn randomized(cfg: &SearchConfig, seed: u64) -> Result<Vec<CubicalComplex>> {
    let lattice = Lattice::new(cfg.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CubicalComplex> = Vec::new();
    for _ in 0..cfg.restarts {
        let start = rng.random_range(0..lattice.faces.len());
        let mut search = Backtrack::new(&lattice, cfg.max_faces, Some(&mut rng));
        search.node_limit = cfg.node_budget;
        search.run_from(start, &mut |faces: &[CellCode]| {
            let complex = CubicalComplex::with_dimension(cfg.n, faces.iter().copied())
                .expect("faces of the lattice");
            let class = classify(&complex);
            if cfg
                .target
                .as_ref()
                .is_none_or(|t| t.matches(&class, faces.len()))
                && !out.iter().any(|c| c.faces() == complex.faces())
            {
                out.push(complex);
            }
            out.len() < cfg.max_results
        });
        if out.len() >= cfg.max_results {
            break;
        }
    }
    if out.is_empty() {
        Err(Error::BudgetExceeded {
            restarts: cfg.restarts,
        })
    } else {
        Ok(out)
    }
}

/// Incidence tables of the full 2-skeleton of `Q^n`.
struct Lattice {
    faces: Vec<CellCode>,
    face_edges: Vec<[usize; 4]>,
    face_vertices: Vec<[usize; 4]>,
    edge_faces: Vec<Vec<usize>>,
    /// Per vertex: (face, edge, edge) links of its full vertex figure.
    vertex_links: Vec<Vec<(usize, usize, usize)>>,
    vertex_edges: Vec<Vec<usize>>,
}

impl Lattice {
    fn new(n: usize) -> Result<Self> {
        let full = CubicalComplex::with_dimension(n, full_skeleton(n, 2)?)?;
        let nf = full.faces().len();
        let nv = full.vertices().len();
        let mut vertex_links = vec![Vec::new(); nv];
        for f in 0..nf {
            let fv = full.face_vertices(f);
            let fe = full.face_edges(f);
            for k in 0..4 {
                vertex_links[fv[k]].push((f, fe[(k + 3) % 4], fe[k]));
            }
        }
        Ok(Lattice {
            faces: full.faces().to_vec(),
            face_edges: (0..nf).map(|f| full.face_edges(f)).collect(),
            face_vertices: (0..nf).map(|f| full.face_vertices(f)).collect(),
            edge_faces: (0..full.edges().len())
                .map(|e| full.edge_faces(e).to_vec())
                .collect(),
            vertex_links,
            vertex_edges: (0..nv).map(|v| full.vertex_edges(v).to_vec()).collect(),
        })
    }
}

struct Backtrack<'a, 'r> {
    lattice: &'a Lattice,
    max_faces: usize,
    rng: Option<&'r mut ChaCha8Rng>,
    in_set: Vec<bool>,
    chosen: Vec<usize>,
    edge_count: Vec<u8>,
    nodes: usize,
    node_limit: usize,
}

impl<'a, 'r> Backtrack<'a, 'r> {
    fn new(lattice: &'a Lattice, max_faces: usize, rng: Option<&'r mut ChaCha8Rng>) -> Self {
        Backtrack {
            lattice,
            max_faces,
            rng,
            in_set: vec![false; lattice.faces.len()],
            chosen: Vec::new(),
            edge_count: vec![0; lattice.edge_faces.len()],
            nodes: 0,
            node_limit: usize::MAX,
        }
    }

    /// Calls `visit` with the sorted face list of every closed surface reached from
    /// `start`; `visit` returns false to stop.
    fn run_from(&mut self, start: usize, visit: &mut dyn FnMut(&[CellCode]) -> bool) {
        if self.max_faces == 0 {
            return;
        }
        self.add(start);
        self.descend(visit);
        self.remove(start);
    }

    fn add(&mut self, f: usize) {
        self.in_set[f] = true;
        self.chosen.push(f);
        for e in self.lattice.face_edges[f] {
            self.edge_count[e] += 1;
        }
    }

    fn remove(&mut self, f: usize) {
        self.in_set[f] = false;
        let popped = self.chosen.pop();
        debug_assert_eq!(popped, Some(f));
        for e in self.lattice.face_edges[f] {
            self.edge_count[e] -= 1;
        }
    }

    fn addable(&self, f: usize) -> bool {
        !self.in_set[f]
            && self.lattice.face_edges[f]
                .iter()
                .all(|&e| self.edge_count[e] < 2)
    }

    /// Rejects a vertex whose figure contains a closed cycle next to other links.
    fn vertex_ok(&self, v: usize) -> bool {
        let edges = &self.lattice.vertex_edges[v];
        let local = |e: usize| edges.iter().position(|&x| x == e).expect("edge at vertex");
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut used = vec![false; edges.len()];
        let mut links = Vec::new();
        for &(f, a, b) in &self.lattice.vertex_links[v] {
            if self.in_set[f] {
                let (a, b) = (local(a), local(b));
                used[a] = true;
                used[b] = true;
                links.push(a);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut node_count = vec![0usize; edges.len()];
        let mut link_count = vec![0usize; edges.len()];
        for i in (0..edges.len()).filter(|&i| used[i]) {
            let r = find(&mut parent, i);
            node_count[r] += 1;
        }
        for a in links {
            let r = find(&mut parent, a);
            link_count[r] += 1;
        }
        let components = node_count.iter().filter(|&&c| c > 0).count();
        let has_cycle =
            (0..edges.len()).any(|r| node_count[r] > 0 && link_count[r] >= node_count[r]);
        !(has_cycle && components > 1)
    }

    fn descend(&mut self, visit: &mut dyn FnMut(&[CellCode]) -> bool) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return false;
        }
        let mut open: Vec<Vec<usize>> = Vec::new();
        for e in 0..self.edge_count.len() {
            if self.edge_count[e] != 1 {
                continue;
            }
            let cands: Vec<usize> = self.lattice.edge_faces[e]
                .iter()
                .copied()
                .filter(|&f| self.addable(f))
                .collect();
            if cands.is_empty() {
                return true;
            }
            open.push(cands);
        }
        let fewest = open.iter().map(Vec::len).min();
        let best = fewest.map(|m| {
            let mut tied: Vec<Vec<usize>> = open.into_iter().filter(|c| c.len() == m).collect();
            let pick = match self.rng.as_deref_mut() {
                Some(rng) => rng.random_range(0..tied.len()),
                None => 0,
            };
            tied.swap_remove(pick)
        });
        let Some(mut cands) = best else {
            let mut faces: Vec<CellCode> =
                self.chosen.iter().map(|&f| self.lattice.faces[f]).collect();
            faces.sort_unstable();
            return visit(&faces);
        };
        if self.chosen.len() >= self.max_faces {
            return true;
        }
        if let Some(rng) = self.rng.as_deref_mut() {
            cands.shuffle(rng);
        }
        for f in cands {
            self.add(f);
            let ok = self.lattice.face_vertices[f]
                .iter()
                .all(|&v| self.vertex_ok(v));
            let keep_going = !ok || self.descend(visit);
            self.remove(f);
            if !keep_going {
                return false;
            }
        }
        true
    }
}
