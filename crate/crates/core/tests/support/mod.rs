//! Independent oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use knotglue::farey::Slope;
use knotglue::normal::{matching_equations, CoordMode, NormalCoordinateVector, SurfaceContext};
use knotglue::{parse_triangulation, Triangulation};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(name: &str) -> Triangulation {
    let text = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
    parse_triangulation(&text).unwrap()
}

/// Knot-manifold-shaped corpus entries, smallest first.
pub const KNOT_CORPUS: &[&str] = &[
    "solid_torus.tri",
    "layered2a.tri",
    "layered2b.tri",
    "layered3a.tri",
    "layered3b.tri",
];

/// Every admissible solution of the matching equations with all coordinates
/// in `0..=bound`, found by depth-first search with interval pruning.
pub fn brute_force_solutions(tri: &Triangulation, mode: CoordMode, bound: u64) -> Vec<NormalCoordinateVector> {
    let block = mode.block();
    let dim = block * tri.tet_count();
    let eqs: Vec<Vec<i64>> = matching_equations(tri, mode)
        .into_iter()
        .filter(|r| r.iter().any(|&a| a != 0))
        .collect();

    // Assign variables tetrahedron by tetrahedron so equations close early.
    let order: Vec<usize> = (0..dim).collect();
    let mut last_use = vec![0usize; eqs.len()];
    for (e, row) in eqs.iter().enumerate() {
        last_use[e] = order.iter().rposition(|&i| row[i] != 0).unwrap_or(0);
    }

    let mut out = Vec::new();
    let mut x = vec![0u64; dim];
    search(0, &order, &eqs, &last_use, bound, block, mode, &mut x, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    order: &[usize],
    eqs: &[Vec<i64>],
    last_use: &[usize],
    bound: u64,
    block: usize,
    mode: CoordMode,
    x: &mut Vec<u64>,
    out: &mut Vec<NormalCoordinateVector>,
) {
    if depth == order.len() {
        if x.iter().any(|&c| c != 0) {
            let v = NormalCoordinateVector::new(mode, x.clone());
            if mode == CoordMode::Normal || v.octagon_total() == 1 {
                out.push(v);
            }
        }
        return;
    }
    let i = order[depth];
    let local = i % block;
    let base = i - local;
    for value in 0..=bound {
        if value > 0 && local >= 4 {
            // One quadrilateral or octagon type per tetrahedron.
            if (4..block).any(|j| j != local && x[base + j] != 0) {
                break;
            }
            if local >= 7 {
                if value > 1 {
                    break;
                }
                let octagons: u64 = x.chunks(block).map(|b| b[7..].iter().sum::<u64>()).sum();
                if octagons > 0 {
                    break;
                }
            }
        }
        x[i] = value;
        let feasible = eqs.iter().enumerate().all(|(e, row)| {
            if last_use[e] > depth {
                // Interval test on the unassigned tail.
                let mut lo = 0i64;
                let mut hi = 0i64;
                for (d, &j) in order.iter().enumerate() {
                    let a = row[j];
                    if d <= depth {
                        lo += a * x[j] as i64;
                        hi += a * x[j] as i64;
                    } else if a > 0 {
                        hi += a * bound as i64;
                    } else {
                        lo += a * bound as i64;
                    }
                }
                lo <= 0 && 0 <= hi
            } else {
                row.iter().zip(x.iter()).map(|(&a, &c)| a * c as i64).sum::<i64>() == 0
            }
        });
        if feasible {
            search(depth + 1, order, eqs, last_use, bound, block, mode, x, out);
        }
    }
    x[i] = 0;
}

pub fn brute_force_slopes(tri: &Triangulation, mode: CoordMode, bound: u64) -> BTreeSet<Slope> {
    let ctx = SurfaceContext::new(tri);
    brute_force_solutions(tri, mode, bound)
        .iter()
        .filter_map(|v| ctx.summarize(v).unwrap().slope)
        .collect()
}

pub fn normalize(p: i64, q: i64) -> Option<Slope> {
    Slope::from_class(p, q)
}

/// All Farey neighbours of `s` with both coordinates bounded by `bound`.
fn neighbours(s: Slope, bound: i64) -> Vec<Slope> {
    let (p, q) = (s.p(), s.q());
    // Particular solution of p*y - q*x = 1.
    let (g, a, b) = ext_gcd(p, q);
    debug_assert_eq!(g.abs(), 1);
    // p*a + q*b = g  =>  x = -b*g, y = a*g solves p*y - q*x = 1.
    let (x0, y0) = (-b * g, a * g);
    let mut out = Vec::new();
    let step = p.abs().max(q.abs());
    let reach = 2 * bound / step + 2;
    let k0 = if p.abs() >= q.abs() { -x0 / p } else { -y0 / q };
    for k in (k0 - reach)..=(k0 + reach) {
        let (x, y) = (x0 + k * p, y0 + k * q);
        if x.abs() <= bound && y.abs() <= bound {
            if let Some(t) = normalize(x, y) {
                out.push(t);
            }
        }
    }
    out
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Breadth-first distances from `source` in the Farey graph restricted to
/// slopes with `|p|, |q| <= bound`.
pub fn bfs_distances(source: Slope, bound: i64) -> HashMap<Slope, u32> {
    let mut dist = HashMap::new();
    dist.insert(source, 0u32);
    let mut queue = VecDeque::from([source]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for t in neighbours(s, bound) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                e.insert(d + 1);
                queue.push_back(t);
            }
        }
    }
    dist
}

pub fn bfs_distance(x: Slope, y: Slope, bound: i64) -> Option<u32> {
    bfs_distances(x, bound).get(&y).copied()
}

/// All normalized slopes with `|p|, |q| <= bound`.
pub fn slopes_up_to(bound: i64) -> Vec<Slope> {
    let mut out = BTreeSet::new();
    for p in -bound..=bound {
        for q in 0..=bound {
            if let Some(s) = normalize(p, q) {
                if num_gcd(p, q) == 1 {
                    out.insert(s);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

/// Knot-manifold-shaped triangulations obtained by gluing one new
/// tetrahedron's faces 2 and 3 onto the two boundary faces of `base`.
pub fn layer_once(base: &Triangulation) -> Vec<Triangulation> {
    use knotglue::triangulation::{validate, Gluing};
    use knotglue::Perm4;
    let perms: Vec<Perm4> = (0..256u32)
        .filter_map(|i| Perm4::new([(i & 3) as u8, (i >> 2 & 3) as u8, (i >> 4 & 3) as u8, (i >> 6) as u8]))
        .collect();
    let n = base.tet_count();
    let faces: Vec<(usize, u8)> = base.boundary_faces().collect();
    let mut out = Vec::new();
    for &p in &perms {
        for &q in &perms {
            let mut gluings = base.gluings().to_vec();
            gluings.push(Gluing {
                tet_a: n,
                face_a: 2,
                tet_b: faces[0].0,
                face_b: faces[0].1,
                perm: p,
            });
            gluings.push(Gluing {
                tet_a: n,
                face_a: 3,
                tet_b: faces[1].0,
                face_b: faces[1].1,
                perm: q,
            });
            if let Ok(t) = Triangulation::new(n + 1, gluings) {
                if validate(&t).is_knot_manifold_shaped {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A random gluing pattern on `n` tetrahedra; some faces stay unglued.
pub fn random_triangulation(seed: u64, n: usize) -> Triangulation {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut slots: Vec<(usize, u8)> = (0..n).flat_map(|t| (0..4u8).map(move |f| (t, f))).collect();
    slots.shuffle(&mut rng);
    let pairs = rng.gen_range(0..=slots.len() / 2);
    let mut gluings = Vec::new();
    for k in 0..pairs {
        let (ta, fa) = slots[2 * k];
        let (tb, fb) = slots[2 * k + 1];
        let mut rest_a: Vec<u8> = (0..4).filter(|&v| v != fa).collect();
        let mut rest_b: Vec<u8> = (0..4).filter(|&v| v != fb).collect();
        rest_a.sort();
        rest_b.shuffle(&mut rng);
        let mut images = [0u8; 4];
        images[fa as usize] = fb;
        for (a, b) in rest_a.into_iter().zip(rest_b) {
            images[a as usize] = b;
        }
        gluings.push(knotglue::triangulation::Gluing {
            tet_a: ta,
            face_a: fa,
            tet_b: tb,
            face_b: fb,
            perm: knotglue::Perm4::new(images).unwrap(),
        });
    }
    Triangulation::new(n, gluings).unwrap()
}
