//! Acceptance criteria, one pass/fail line each. Run with
//! `cargo test -p knotglue-cli --test acceptance -- --nocapture` to see the
//! report.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use knotglue::certifier::{certify_slope_sets, map_slope_set, twist_scan, BAND_CAVEAT};
use knotglue::farey::{distance, intersection_number, GluingMatrix, Slope};
use knotglue::genus::{lower_bounds, GenusInputs};
use knotglue::normal::{
    check_admissible, enumerate_vertex_surfaces, CoordMode, NormalCoordinateVector, SlopeSet, SurfaceContext,
};
use knotglue::triangulation::validate;
use knotglue::{parse_triangulation, Triangulation};
use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::{bfs_distance, bfs_distances, brute_force_slopes, corpus, corpus_dir, slopes_up_to};

fn random_slope(rng: &mut StdRng, bound: i64) -> Slope {
    loop {
        if let Ok(s) = Slope::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)) {
            return s;
        }
    }
}

fn random_matrix(rng: &mut StdRng, steps: usize) -> GluingMatrix {
    let gens = [
        GluingMatrix::new(1, 1, 0, 1).unwrap(),
        GluingMatrix::new(1, -1, 0, 1).unwrap(),
        GluingMatrix::new(1, 0, 1, 1).unwrap(),
        GluingMatrix::new(1, 0, -1, 1).unwrap(),
        GluingMatrix::new(0, 1, 1, 0).unwrap(),
    ];
    (0..steps).fold(GluingMatrix::IDENTITY, |m, _| {
        m.compose(&gens[rng.gen_range(0..gens.len())]).unwrap()
    })
}

fn random_set(rng: &mut StdRng, bound: i64) -> SlopeSet {
    let n = rng.gen_range(1..=5);
    SlopeSet::from_slopes((0..n).map(|_| random_slope(rng, bound)), &[CoordMode::Normal])
}

fn within(limit: Duration, start: Instant) {
    let took = start.elapsed();
    assert!(took < limit, "took {took:?}, limit {limit:?}");
}

fn criterion_1() {
    let start = Instant::now();
    let tri = parse_triangulation("tets 1").unwrap();
    let vs = enumerate_vertex_surfaces(&tri, CoordMode::Normal).unwrap();
    within(Duration::from_secs(1), start);
    assert_eq!(vs.len(), 7);
    let unit = |v: &NormalCoordinateVector| {
        let nonzero: Vec<usize> = (0..7).filter(|&i| v.coords[i] != 0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(v.coords[nonzero[0]], 1);
        nonzero[0]
    };
    let mut positions: Vec<usize> = vs.iter().map(unit).collect();
    positions.sort();
    assert_eq!(positions, (0..7).collect::<Vec<_>>());
    assert_eq!(vs.iter().filter(|v| (0..4).any(|i| v.coords[i] != 0)).count(), 4);
    assert_eq!(vs.iter().filter(|v| (4..7).any(|i| v.coords[i] != 0)).count(), 3);
}

fn criterion_2() {
    let start = Instant::now();
    let tri = corpus("solid_torus.tri");
    let r = validate(&tri);
    assert!(r.orientable);
    assert_eq!(r.vertex_count, 1);
    assert_eq!(r.boundary_components.len(), 1);
    assert_eq!(r.boundary_components[0].genus, 1);
    let vertex = knotglue::normal::boundary_slope_set(&tri, &[CoordMode::Normal])
        .unwrap()
        .slopes;
    let brute = brute_force_slopes(&tri, CoordMode::Normal, 6);
    assert!(!vertex.is_empty());
    assert_eq!(vertex, brute);
    within(Duration::from_secs(10), start);
}

fn criterion_3() {
    let start = Instant::now();
    let slopes = slopes_up_to(30);
    for &x in &slopes {
        let dist = bfs_distances(x, 120);
        for &y in &slopes {
            assert_eq!(Some(&distance(x, y)), dist.get(&y), "{x} {y}");
        }
    }
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let (x, y, z) = (
            random_slope(&mut rng, 50),
            random_slope(&mut rng, 50),
            random_slope(&mut rng, 50),
        );
        let (dxy, dyz, dxz) = (distance(x, y), distance(y, z), distance(x, z));
        assert_eq!(dxy, distance(y, x));
        assert_eq!(dxy == 0, x == y);
        assert!(dxz <= dxy + dyz);
        let m = random_matrix(&mut rng, 12);
        assert_eq!(distance(m.apply(x).unwrap(), m.apply(y).unwrap()), dxy);
    }
    within(Duration::from_secs(60), start);
}

fn criterion_4() {
    let slopes = slopes_up_to(20);
    for &x in &slopes {
        for &y in &slopes {
            assert_eq!(distance(x, y) == 1, intersection_number(x, y) == 1, "{x} {y}");
        }
    }
}

/// Pull back by Cramer's rule and take BFS distances pair by pair.
fn oracle_min_distance(dx: &SlopeSet, dy: &SlopeSet, phi: &GluingMatrix) -> u32 {
    let det = phi.a * phi.d - phi.b * phi.c;
    let mut best = u32::MAX;
    for y in dy.iter() {
        let (p, q) = (y.p(), y.q());
        let pulled = Slope::from_class((phi.d * p - phi.b * q) * det, (-phi.c * p + phi.a * q) * det).unwrap();
        for x in dx.iter() {
            let bound = 4 * [x.p(), x.q(), pulled.p(), pulled.q()]
                .iter()
                .map(|v| v.abs())
                .max()
                .unwrap()
                .max(2);
            best = best.min(bfs_distance(*x, pulled, bound).unwrap());
        }
    }
    best
}

fn criterion_5() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..100 {
        let (dx, dy) = (random_set(&mut rng, 8), random_set(&mut rng, 8));
        let phi = random_matrix(&mut rng, 4);
        let r = certify_slope_sets(&dx, &dy, &phi).unwrap();
        let d = oracle_min_distance(&dx, &dy, &phi);
        assert_eq!(r.min_distance, d);
        assert_eq!(r.sufficiently_complicated, d >= 2);
        assert_eq!(r.theorem_consequence.is_some(), r.sufficiently_complicated);
        if r.sufficiently_complicated {
            assert!(r.coverage_caveats.iter().any(|c| c == BAND_CAVEAT));
        }

        let b = random_matrix(&mut rng, 6);
        let moved = map_slope_set(&b, &dx).unwrap();
        let r_b = certify_slope_sets(&moved, &dy, &phi.compose(&b.inverse()).unwrap()).unwrap();
        assert_eq!(
            (r_b.min_distance, r_b.sufficiently_complicated),
            (r.min_distance, r.sufficiently_complicated)
        );
        assert_eq!(
            certify_slope_sets(&dy, &dx, &phi.inverse()).unwrap().min_distance,
            r.min_distance
        );
    }
}

fn criterion_6() {
    let inf = SlopeSet::from_slopes([Slope::INFINITY], &[CoordMode::Normal]);
    let r = twist_scan(&inf, &inf, &GluingMatrix::IDENTITY, Slope::ZERO, -50..=50).unwrap();
    // The pulled-back slope meets 1/0 in |n| points.
    let derived: Vec<i64> = (-50..=50i64).filter(|n| n.abs() < 2).collect();
    assert_eq!(r.failures, derived);
    assert_eq!(r.failures, vec![-1, 0, 1]);

    let mut rng = StdRng::seed_from_u64(44);
    let mut done = 0;
    while done < 20 {
        let (dx, dy) = (random_set(&mut rng, 5), random_set(&mut rng, 5));
        let base = random_matrix(&mut rng, 3);
        let twist = random_slope(&mut rng, 3);
        // A twist whose slope lies in Δ(X) or base⁻¹Δ(Y) fixes the configuration.
        let base_image = map_slope_set(&base.inverse(), &dy).unwrap();
        if dx.slopes.contains(&twist) || base_image.slopes.contains(&twist) {
            continue;
        }
        let small = twist_scan(&dx, &dy, &base, twist, -50..=50).unwrap();
        let large = twist_scan(&dx, &dy, &base, twist, -100..=100).unwrap();
        assert_eq!(small.failures, large.failures, "{twist} {base}");
        assert!(small.failures.iter().all(|n| (-50..=50).contains(n)));
        done += 1;
    }
}

fn corpus_triangulations() -> Vec<(String, Triangulation)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".tri"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), corpus(&n))).collect()
}

fn criterion_7() {
    let mut compatible_pairs = 0;
    for (name, tri) in corpus_triangulations() {
        assert!(tri.tet_count() <= 3, "{name}");
        let ctx = SurfaceContext::new(&tri);
        let normal = enumerate_vertex_surfaces(&tri, CoordMode::Normal).unwrap();
        let octagonal = enumerate_vertex_surfaces(&tri, CoordMode::Octagonal).unwrap();
        for v in &normal {
            let s = ctx.summarize(v).unwrap();
            for k in 2..=4u64 {
                let sk = ctx.summarize(&v.scaled(k)).unwrap();
                assert_eq!(sk.euler_characteristic, k as i64 * s.euler_characteristic, "{name}");
                assert_eq!(sk.slope, s.slope, "{name}");
            }
        }
        // Normal with normal, and normal with octagonal (at most one octagon).
        let mut pairs: Vec<(&NormalCoordinateVector, NormalCoordinateVector, &NormalCoordinateVector)> = Vec::new();
        for (i, u) in normal.iter().enumerate() {
            for w in &normal[i..] {
                pairs.push((u, u.clone(), w));
            }
        }
        for u in &normal {
            for w in &octagonal {
                pairs.push((u, u.to_octagonal(), w));
            }
        }
        for (u, lifted, w) in pairs {
            let sum = lifted.add(w);
            if check_admissible(&tri, &sum).is_err() {
                continue;
            }
            let Ok(ss) = ctx.summarize(&sum) else { continue };
            compatible_pairs += 1;
            let (su, sw) = (ctx.summarize(u).unwrap(), ctx.summarize(w).unwrap());
            assert_eq!(
                ss.euler_characteristic,
                su.euler_characteristic + sw.euler_characteristic,
                "{name}"
            );
            if su.slope.is_some() && su.slope == sw.slope {
                assert_eq!(ss.slope, su.slope, "{name}");
            }
        }
    }
    assert!(compatible_pairs > 0);
}

fn criterion_8() {
    let mut rng = StdRng::seed_from_u64(5);
    let frac = |n: i64, d: i64| Ratio::new(n, d);
    for _ in 0..1000 {
        let (x, y, f) = (
            rng.gen_range(0..40u64),
            rng.gen_range(0..40u64),
            rng.gen_range(0..40u64),
        );
        let (hx, hy, tx, ty) = (
            rng.gen_range(0..40u64),
            rng.gen_range(0..40u64),
            rng.gen_range(0..40u64),
            rng.gen_range(0..40u64),
        );
        let closed = rng.gen_bool(0.5);
        let r = lower_bounds(&GenusInputs {
            g_x: Some(x),
            g_y: Some(y),
            g_f: Some(f),
            h_x: Some(hx),
            h_y: Some(hy),
            t_x: Some(tx),
            t_y: Some(ty),
            closed,
            ..Default::default()
        })
        .unwrap();
        let (x, y, f) = (x as i64, y as i64, f as i64);
        assert_eq!(r.upper_amalgamation, (x + y >= f).then_some(x + y - f));
        assert_eq!(r.lower_genus, Some(frac(x + y - 2 * f, 2)));
        assert_eq!(r.lower_handle, Some(frac((hx + hy) as i64, 2)));
        assert_eq!(r.lower_tunnel, closed.then(|| frac((tx + ty) as i64, 2)));
        if let Some(u) = r.upper_amalgamation {
            assert!(r.lower_genus.unwrap() <= Ratio::from_integer(u));
        }
    }
}

fn criterion_9() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let (x, y) = (corpus_dir().join("layered3b.tri"), corpus_dir().join("solid_torus.tri"));
    let p = |q: &Path| q.to_str().unwrap().to_string();
    let invocations: Vec<Vec<String>> = vec![
        vec!["slopes".into(), p(&x), "--json".into()],
        vec!["slopes".into(), p(&x)],
        vec![
            "certify".into(),
            p(&x),
            p(&y),
            "--gluing".into(),
            "1,2;1,3".into(),
            "--json".into(),
        ],
        vec!["certify".into(), p(&x), p(&y), "--gluing".into(), "0,1;1,0".into()],
    ];
    let run = |args: &[String]| {
        let o = Command::new(env!("CARGO_BIN_EXE_knotglue"))
            .args(args)
            .env("KNOTGLUE_CACHE_DIR", &cache)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        o.stdout
    };
    for args in &invocations {
        let cold = run(args);
        let warm = run(args);
        let again = run(args);
        assert_eq!(cold, warm, "{args:?}");
        assert_eq!(warm, again, "{args:?}");
    }
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 9] = [
        ("single tetrahedron has 7 vertex solutions", criterion_1),
        ("solid torus validates; slopes match brute force", criterion_2),
        ("Farey distance matches BFS; metric and equivariance", criterion_3),
        ("distance one iff intersection number one", criterion_4),
        ("certifier verdict, covariance and symmetry", criterion_5),
        ("twist scan failures", criterion_6),
        ("Euler characteristic linearity and slope scaling", criterion_7),
        ("genus calculators", criterion_8),
        ("determinism and cache transparency", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {name} ({:.2?})", i + 1, start.elapsed());
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
