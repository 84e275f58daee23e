//! Acceptance gate. One line per criterion; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use cubesurf::cell::full_skeleton;
use cubesurf::complex::{cube_boundary, CubicalComplex};
use cubesurf::export::{scene_to_obj, BeamMesh, BeamOptions, BeamProfile};
use cubesurf::geometry::{faces_intersect, segment_clearance};
use cubesurf::optimizer::{
    optimize, reward_r1, reward_r2, reward_r3, reward_r4, AgentPolicy, Budget, RewardConfig,
    SignMode,
};
use cubesurf::projection::{
    apply_state, centered_coords, rotation_matrix, EmbeddingState, Matrix5, ProjectionConstants,
};
use cubesurf::search::{enumerate_closed_surfaces, SearchConfig, SearchMode, SurfaceTarget};
use cubesurf::surface::classify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn skeleton_counts() -> Outcome {
    let t = Instant::now();
    let counts: Vec<usize> = (0..3).map(|k| full_skeleton(5, k).unwrap().len()).collect();
    let pass = counts == [32, 80, 80] && within(t.elapsed(), Duration::from_secs(1));
    outcome(pass, format!("V/E/F = {counts:?}"))
}

fn cube_boundaries_are_spheres() -> Outcome {
    let t = Instant::now();
    let cubes = full_skeleton(5, 3).unwrap();
    let spheres = cubes
        .iter()
        .filter(|c| {
            let k = classify(&cube_boundary(c).unwrap());
            k.connected
                && k.closed
                && k.orientable == Some(true)
                && k.euler_characteristic == 2
                && k.genus == Some(0)
        })
        .count();
    let pass = cubes.len() == 40 && spheres == 40 && within(t.elapsed(), Duration::from_secs(1));
    outcome(
        pass,
        format!("{spheres} of {} boundaries are spheres", cubes.len()),
    )
}

fn q3_census() -> Outcome {
    let t = Instant::now();
    let oracle = brute_force_closed_surfaces(3);
    let found =
        enumerate_closed_surfaces(&SearchConfig::new(3, 6, SearchMode::Exhaustive)).unwrap();
    let same = found.len() == oracle.len()
        && found
            .iter()
            .zip(&oracle)
            .all(|(c, o)| c.faces() == o.as_slice());
    let pass = oracle.len() == 1 && same && within(t.elapsed(), Duration::from_secs(1));
    outcome(
        pass,
        format!(
            "search {} / brute force {} over 64 subsets",
            found.len(),
            oracle.len()
        ),
    )
}

fn tesseract_surfaces() -> Vec<CubicalComplex> {
    enumerate_closed_surfaces(&SearchConfig::new(4, 24, SearchMode::Exhaustive)).unwrap()
}

fn tesseract_bound(found: &[CubicalComplex]) -> Outcome {
    let classes: Vec<_> = found.iter().map(classify).collect();
    let tori = classes
        .iter()
        .filter(|k| k.orientable == Some(true) && k.euler_characteristic == 0)
        .count();
    let high = classes.iter().filter(|k| k.genus.unwrap_or(0) >= 2).count();
    outcome(
        tori >= 1 && high == 0,
        format!(
            "{} classes, {tori} orientable with chi 0, {high} of genus >= 2",
            found.len()
        ),
    )
}

fn penteract_bounds() -> Outcome {
    let (mut max_g, mut max_k, mut bad) = (0, 0, 0);
    for seed in 0..10_000 {
        let found =
            enumerate_closed_surfaces(&SearchConfig::new(5, 80, SearchMode::Randomized { seed }))
                .unwrap();
        for c in &found {
            let k = classify(c);
            if !(k.connected && k.closed) {
                bad += 1;
            }
            max_g = max_g.max(k.genus.unwrap_or(0));
            max_k = max_k.max(k.demigenus.unwrap_or(0));
        }
    }
    outcome(
        bad == 0 && max_g <= 5 && max_k <= 8,
        format!("10000 seeds: max genus {max_g}, max demigenus {max_k}, {bad} invalid"),
    )
}

fn geometry_kernel() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let [a0, a1, b0, b1] = [0; 4].map(|_| random_point(&mut rng, 1.0));
        let exact = segment_clearance(&a0, &a1, &b0, &b1).unwrap().distance;
        worst = worst.max((grid_clearance(&a0, &a1, &b0, &b1, 1001) - exact).abs());
    }
    let (mut decided, mut disagree, mut skipped) = (0, 0, 0);
    while decided < 500 {
        let a = random_quad(&mut rng);
        let b = random_quad(&mut rng);
        match quad_oracle(&mut rng, &a, &b, 4000, 0.1) {
            Some(expected) => {
                decided += 1;
                if faces_intersect(&a, &b, false, None).unwrap() != expected {
                    disagree += 1;
                }
            }
            None => skipped += 1,
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst < 1e-4 && disagree == 0 && within(elapsed, Duration::from_secs(30)),
        format!(
            "clearance max error {worst:.2e}; quads {disagree} disagreements in 500 ({skipped} near-boundary skipped); {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn rotation_projection() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let k = ProjectionConstants::default();
    let all = CubicalComplex::build(full_skeleton(5, 2).unwrap()).unwrap();
    let verts = all.vertices().to_vec();
    let (mut orth, mut iso, mut planar) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let s = random_state(&mut rng, &k);
        let m = rotation_matrix(&s.phi);
        orth = orth.max((m.transpose() * m - Matrix5::identity()).abs().max());
        orth = orth.max((m.determinant() - 1.0).abs());
        for _ in 0..10 {
            let a = centered_coords(&verts[rng.random_range(0..verts.len())]);
            let b = centered_coords(&verts[rng.random_range(0..verts.len())]);
            iso = iso.max(((m * a - m * b).norm() - (a - b).norm()).abs());
        }
        let scene = apply_state(&all, &s, &k).unwrap();
        for f in 0..all.faces().len() {
            let q = scene.face_corners(&all, f);
            let (a, b, c) = (q[1] - q[0], q[2] - q[0], q[3] - q[0]);
            planar = planar.max(a.cross(&b).dot(&c).abs() / (a.norm() * b.norm() * c.norm()));
        }
    }
    let elapsed = t.elapsed();
    outcome(
        orth < 1e-9 && iso < 1e-9 && planar < 1e-7 && within(elapsed, Duration::from_secs(10)),
        format!(
            "orthogonality {orth:.1e}, isometry {iso:.1e}, coplanarity {planar:.1e}; {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn reward_fidelity() -> Outcome {
    let v = |sigma_prop| RewardConfig {
        sigma_prop,
        sign_mode: SignMode::Verbatim,
        ..Default::default()
    };
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    let checks = [
        close(reward_r1(4, 0, &v(0)), 10.0),
        close(reward_r1(10, 12, &v(0)), 0.2),
        close(reward_r2(0, 5, 3, &v(3)), 10.0),
        close(reward_r2(19, 15, 0, &v(0)), -4.0 / 19.0),
        close(reward_r2(19, 15, 4, &v(3)), 0.0),
        close(reward_r3(100.0, 90.0, SignMode::Verbatim).unwrap(), 0.1),
        close(reward_r3(42.0, 42.0, SignMode::Verbatim).unwrap(), 0.0),
        close(
            reward_r4(90.0, &[100.0, 95.0, 97.0], SignMode::Verbatim),
            1.0,
        ),
        close(reward_r4(95.0, &[100.0, 95.0], SignMode::Verbatim), 0.0),
        close(reward_r4(95.0, &[], SignMode::Verbatim), 0.0),
    ];
    let ok = checks.iter().filter(|&&c| c).count();
    outcome(
        ok == checks.len(),
        format!("{ok}/{} substitution examples", checks.len()),
    )
}

fn seeded_runs(c: &CubicalComplex, sigma_prop: usize, budget: Budget) -> (usize, Vec<String>) {
    let k = ProjectionConstants::default();
    let reward = RewardConfig {
        sigma_prop,
        ..Default::default()
    };
    let mut reached = 0;
    let mut lines = Vec::new();
    for seed in 0..5 {
        let policy = AgentPolicy {
            seed,
            ..Default::default()
        };
        let res = optimize(c, None, &policy, budget, &reward, &k).unwrap();
        let first = &res.log[0];
        let m = res.best_measures;
        if m.sigma <= sigma_prop && m.overlaps == 0 {
            reached += 1;
        }
        lines.push(format!(
            "seed {seed}: {}/{} -> {}/{} in {} steps",
            first.sigma,
            first.overlaps,
            m.sigma,
            m.overlaps,
            res.log.len()
        ));
    }
    (reached, lines)
}

fn torus_optimization(found: &[CubicalComplex]) -> Outcome {
    let Some(torus) = found.iter().find(|c| classify(c).genus == Some(1)) else {
        return outcome(false, "no torus from search");
    };
    let t = Instant::now();
    let (reached, lines) = seeded_runs(
        torus,
        0,
        Budget {
            episodes: 40,
            steps: 500,
        },
    );
    outcome(
        reached >= 1,
        format!(
            "{}-face torus, {reached}/5 seeds reach 0/0 (sigma/overlaps); {}; {:.1} s",
            torus.faces().len(),
            lines.join("; "),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn projective_plane_optimization() -> Outcome {
    let cfg = SearchConfig::new(5, 80, SearchMode::Randomized { seed: 1 })
        .with_target(SurfaceTarget::projective_plane());
    let rp2 = enumerate_closed_surfaces(&cfg).unwrap().remove(0);
    let t = Instant::now();
    let (reached, lines) = seeded_runs(
        &rp2,
        3,
        Budget {
            episodes: 100,
            steps: 500,
        },
    );
    outcome(
        reached >= 1,
        format!(
            "{}-face projective plane, {reached}/5 seeds reach sigma <= 3 with no overlaps; {}; {:.1} s",
            rp2.faces().len(),
            lines.join("; "),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn export_integrity(found: &[CubicalComplex]) -> Outcome {
    let k = ProjectionConstants::default();
    let s = EmbeddingState::new(3.2, 4.0, [0.4, 1.1, 2.9, 0.3, 5.0, 1.7, 0.2, 3.3, 4.4, 0.9]);
    let mut sizes_ok = true;
    let mut round_trip = true;
    let cube = cube_boundary(&cubesurf::cell::parse_cell("***00", 5).unwrap()).unwrap();
    let cube_scene = apply_state(&cube, &s, &k).unwrap();
    let wire = BeamMesh::build(&cube_scene, &cube, &BeamOptions::new(0.01)).unwrap();
    for c in std::iter::once(&cube).chain(found) {
        let scene = apply_state(c, &s, &k).unwrap();
        for profile in [BeamProfile::Square, BeamProfile::Octagon] {
            for panels in [false, true] {
                let mesh = BeamMesh::build(
                    &scene,
                    c,
                    &BeamOptions {
                        r: 0.01,
                        profile,
                        panels,
                    },
                )
                .unwrap();
                let bytes = mesh.to_stl_bytes();
                sizes_ok &= bytes.len() == 84 + 50 * mesh.len()
                    && u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize == mesh.len();
            }
        }
        let parsed: Vec<f64> = scene_to_obj(&scene, c)
            .lines()
            .filter_map(|l| l.strip_prefix("v "))
            .flat_map(|l| l.split_whitespace().map(|x| x.parse::<f64>().unwrap()))
            .collect();
        let expected: Vec<f64> = scene
            .points()
            .iter()
            .flat_map(|p| [p.x, p.y, p.z])
            .collect();
        round_trip &= parsed == expected;
    }
    outcome(
        sizes_ok && round_trip && wire.len() == 144,
        format!(
            "STL size formula {}, cube wireframe {} triangles, OBJ round trip {}",
            if sizes_ok { "holds" } else { "violated" },
            wire.len(),
            if round_trip { "exact" } else { "inexact" }
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let tesseract = tesseract_surfaces();
    let criteria: Vec<Criterion> = vec![
        ("hypercube combinatorics", Box::new(skeleton_counts)),
        (
            "closed-surface oracle",
            Box::new(cube_boundaries_are_spheres),
        ),
        ("Q^3 census", Box::new(q3_census)),
        ("tesseract bound", Box::new(|| tesseract_bound(&tesseract))),
        ("Q^5 bounds", Box::new(penteract_bounds)),
        ("geometry kernel", Box::new(geometry_kernel)),
        ("rotation/projection", Box::new(rotation_projection)),
        ("reward fidelity", Box::new(reward_fidelity)),
        (
            "optimization outcome (torus)",
            Box::new(|| torus_optimization(&tesseract)),
        ),
        (
            "non-orientable target",
            Box::new(projective_plane_optimization),
        ),
        (
            "export integrity",
            Box::new(|| export_integrity(&tesseract)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {name}: {} ({} ms)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_millis()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
