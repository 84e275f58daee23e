mod common;

use common::*;
use cubesurf::cell::parse_cell;
use cubesurf::complex::{cube_boundary, CubicalComplex};
use cubesurf::geometry::{faces_intersect, segment_clearance};
use cubesurf::metrics::{
    edge_overlaps, face_intersections, total_clearance, MetricsPlan, WidthConfig,
};
use cubesurf::projection::{
    apply_state, EmbeddingState, Point3, ProjectedScene, ProjectionConstants,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn clearance_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..150 {
        let [a0, a1, b0, b1] = [0; 4].map(|_| random_point(&mut rng, 1.0));
        let exact = segment_clearance(&a0, &a1, &b0, &b1).unwrap();
        let grid = grid_clearance(&a0, &a1, &b0, &b1, 1001);
        // the exact minimum can never exceed a sampled one
        assert!(exact.distance <= grid + 1e-12);
        assert!(((exact.on_a - exact.on_b).norm() - exact.distance).abs() < 1e-12);
        worst = worst.max(grid - exact.distance);
    }
    assert!(worst < 1e-4, "max error {worst}");
}

#[test]
fn faces_intersect_matches_sampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut decided, mut hits) = (0, 0);
    while decided < 150 {
        let a = random_quad(&mut rng);
        let b = random_quad(&mut rng);
        let Some(expected) = quad_oracle(&mut rng, &a, &b, 4000, 0.1) else {
            continue;
        };
        let got = faces_intersect(&a, &b, false, None).unwrap();
        assert_eq!(got, expected, "{a:?} {b:?}");
        assert_eq!(faces_intersect(&b, &a, false, None).unwrap(), got);
        decided += 1;
        hits += got as usize;
    }
    assert!(hits > 20 && hits < 130, "unbalanced sample: {hits}");
}

#[test]
fn coplanar_quads_match_sampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut decided = 0;
    while decided < 80 {
        let c = random_point(&mut rng, 0.5);
        let (u, v) = random_frame(&mut rng);
        let a = random_quad_in_plane(&mut rng, &c, &u, &v);
        let shift = u * rng.random_range(-1.0..1.0);
        let b = random_quad_in_plane(&mut rng, &(c + shift), &u, &v);
        let Some(expected) = quad_oracle(&mut rng, &a, &b, 4000, 0.1) else {
            continue;
        };
        assert_eq!(faces_intersect(&a, &b, false, None).unwrap(), expected);
        decided += 1;
    }
}

fn cube_scene(state: &EmbeddingState) -> (CubicalComplex, ProjectedScene) {
    let cube = cube_boundary(&parse_cell("***00", 5).unwrap()).unwrap();
    let scene = apply_state(&cube, state, &ProjectionConstants::default()).unwrap();
    (cube, scene)
}

#[test]
fn total_clearance_matches_pairwise_sum() {
    let (cube, _) = cube_scene(&EmbeddingState::new(3.0, 6.0, [0.0; 10]));
    let pts: Vec<Point3> = cube.vertices().iter().map(orthographic).collect();
    let scene = ProjectedScene::from_points(&cube, pts.clone()).unwrap();
    let mut expected = 0.0;
    let seg = |e: usize| cube.edge_vertices(e).map(|v| pts[v]);
    for e in 0..cube.edges().len() {
        for h in e + 1..cube.edges().len() {
            let ([a0, a1], [b0, b1]) = (seg(e), seg(h));
            expected += grid_clearance(&a0, &a1, &b0, &b1, 101);
        }
    }
    assert!((total_clearance(&scene, &cube).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn measures_invariant_under_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let k = ProjectionConstants::default();
    let torus = CubicalComplex::from_text(
        "00**\n01**\n0*0*\n0*1*\n10**\n11**\n1*0*\n1*1*\n*0*0\n*0*1\n*1*0\n*1*1\n**00\n**01\n**10\n**11\n",
    )
    .unwrap();
    for _ in 0..20 {
        let s = random_state(&mut rng, &k);
        let scene = apply_state(&torus, &s, &k).unwrap();
        let (rot, shift) = random_rigid_motion(&mut rng);
        let moved = scene.map_points(|p| rot * p + shift);
        let w = WidthConfig::relative_to(&scene).unwrap();
        let plan = MetricsPlan::new(&torus);
        let a = plan.report(&scene, &torus, &w).unwrap();
        let b = plan.report(&moved, &torus, &w).unwrap();
        assert_eq!(a.sigma, b.sigma);
        assert_eq!(a.overlaps, b.overlaps);
        assert!((a.total_clearance - b.total_clearance).abs() < 1e-9 * a.total_clearance.max(1.0));
    }
}

#[test]
fn overlaps_monotone_in_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = ProjectionConstants::default();
    let (cube, _) = cube_scene(&EmbeddingState::new(3.0, 6.0, [0.0; 10]));
    for _ in 0..10 {
        let scene = apply_state(&cube, &random_state(&mut rng, &k), &k).unwrap();
        let mut last = 0;
        for i in 1..40 {
            let w = WidthConfig::new(0.01 * i as f64 * scene.bbox_diagonal()).unwrap();
            let (o, _) = edge_overlaps(&scene, &cube, &w).unwrap();
            assert!(o >= last);
            last = o;
        }
    }
}

#[test]
fn constructed_crossing_pair_counts_once() {
    // two 2-cells of Q^5 with no common vertex
    let pair = CubicalComplex::build([
        parse_cell("**000", 5).unwrap(),
        parse_cell("11*1*", 5).unwrap(),
    ])
    .unwrap();
    let k = ProjectionConstants::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut found = 0;
    for _ in 0..20_000 {
        let s = random_state(&mut rng, &k);
        let scene = apply_state(&pair, &s, &k).unwrap();
        let a = scene.face_corners(&pair, 0);
        let b = scene.face_corners(&pair, 1);
        let scale = scene.bbox_diagonal();
        let norm = |q: [Point3; 4]| q.map(|p| p / scale);
        if quad_oracle(&mut rng, &norm(a), &norm(b), 4000, 0.05) == Some(true) {
            let (sigma, pairs) = face_intersections(&scene, &pair).unwrap();
            assert_eq!(sigma, 1);
            assert_eq!(pairs.len(), 1);
            found += 1;
            if found == 3 {
                return;
            }
        }
    }
    panic!("no crossing state found");
}
