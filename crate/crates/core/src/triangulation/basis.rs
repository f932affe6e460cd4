use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{validate, BoundaryComplex, Triangulation};
use crate::util::DisjointSets;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a one-vertex triangulation with a single torus boundary component")]
pub struct NotAKnotManifold;

/// A basis `(mu, lambda)` of the first homology of the boundary torus, as
/// integer 1-cycles over the boundary edges (canonical edge directions).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryBasis {
    pub mu: Vec<i64>,
    pub lambda: Vec<i64>,
    /// Algebraic intersection number of `mu` with `lambda`; always ±1.
    pub intersection: i64,
}

/// Builds the boundary basis of a knot-manifold-shaped triangulation.
///
/// Tree-cotree decomposition of the boundary torus: a breadth-first
/// spanning tree of the 1-skeleton (lowest edge ids first) is contracted,
/// then a spanning tree of the dual graph is removed (highest edge ids
/// first). The two edges left over close up into loops at the contracted
/// vertex; their fundamental cycles are `mu` and `lambda`. On a one-vertex,
/// two-triangle torus this gives edges 0 and 1.
pub fn boundary_basis(tri: &Triangulation) -> Result<BoundaryBasis, NotAKnotManifold> {
    if !validate(tri).is_knot_manifold_shaped {
        return Err(NotAKnotManifold);
    }
    let boundary = BoundaryComplex::new(tri);
    basis_from_complex(&boundary).ok_or(NotAKnotManifold)
}

pub(crate) fn basis_from_complex(b: &BoundaryComplex) -> Option<BoundaryBasis> {
    let [component] = b.components.as_slice() else {
        return None;
    };
    if !component.orientable || component.genus() != 1 {
        return None;
    }
    let edge_count = b.edges.len();
    let ends = |e: usize| {
        let s = b.edges[e][0];
        (b.vertex_at(s.triangle, s.start), b.vertex_at(s.triangle, s.end))
    };

    let mut adjacent: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); b.vertex_count];
    for e in 0..edge_count {
        let (u, v) = ends(e);
        if u != v {
            adjacent[u].push((e, v, 1));
            adjacent[v].push((e, u, -1));
        }
    }
    // parent[v] = (edge, +1 if the edge points from parent to v, parent)
    let mut parent: Vec<Option<(usize, i64, usize)>> = vec![None; b.vertex_count];
    let mut in_tree = vec![false; edge_count];
    let mut order = vec![0usize];
    let mut reached = vec![false; b.vertex_count];
    reached[0] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &(e, v, sign) in &adjacent[u] {
            if !reached[v] {
                reached[v] = true;
                parent[v] = Some((e, sign, u));
                in_tree[e] = true;
                order.push(v);
            }
        }
    }
    if order.len() != b.vertex_count {
        return None;
    }

    let mut faces = DisjointSets::new(b.triangles.len());
    let mut generators = Vec::new();
    for e in (0..edge_count).rev() {
        if in_tree[e] {
            continue;
        }
        let [s0, s1] = b.edges[e];
        if faces.find(s0.triangle) != faces.find(s1.triangle) {
            faces.union(s0.triangle, s1.triangle);
        } else {
            generators.push(e);
        }
    }
    generators.reverse();
    let [g_mu, g_lambda] = generators.as_slice() else {
        return None;
    };

    // Rotation at the contracted vertex.
    let rotations = b.vertex_rotations();
    let mut rotation_at: Vec<Vec<(usize, u8)>> = vec![Vec::new(); b.vertex_count];
    for r in rotations {
        let (e, end) = r[0];
        let (u, v) = ends(e);
        rotation_at[if end == 0 { u } else { v }] = r;
    }
    let mut merged = std::mem::take(&mut rotation_at[0]);
    for &v in &order[1..] {
        let (e, sign, _) = parent[v]?;
        let (parent_end, child_end) = if sign > 0 { (0u8, 1u8) } else { (1, 0) };
        merged = contract(&merged, &rotation_at[v], (e, parent_end), (e, child_end))?;
    }

    let to_root = |mut v: usize| {
        let mut c = vec![0i64; edge_count];
        while let Some((e, sign, p)) = parent[v] {
            c[e] -= sign;
            v = p;
        }
        c
    };
    let cycle = |e: usize| {
        let (u, v) = ends(e);
        let (cu, cv) = (to_root(u), to_root(v));
        let mut c: Vec<i64> = cu.iter().zip(&cv).map(|(a, b)| b - a).collect();
        c[e] += 1;
        c
    };
    let intersection = loop_intersection(&merged, *g_mu, *g_lambda);
    if intersection.abs() != 1 {
        return None;
    }
    Some(BoundaryBasis {
        mu: cycle(*g_mu),
        lambda: cycle(*g_lambda),
        intersection,
    })
}

/// Rotation after contracting the edge with ends `a` (in `ru`) and `b` (in `rv`).
fn contract(ru: &[(usize, u8)], rv: &[(usize, u8)], a: (usize, u8), b: (usize, u8)) -> Option<Vec<(usize, u8)>> {
    let i = ru.iter().position(|&x| x == a)?;
    let j = rv.iter().position(|&x| x == b)?;
    let mut out = Vec::with_capacity(ru.len() + rv.len() - 2);
    out.extend((1..ru.len()).map(|k| ru[(i + k) % ru.len()]));
    out.extend((1..rv.len()).map(|k| rv[(j + k) % rv.len()]));
    Some(out)
}

/// Algebraic intersection of two loop edges at a common vertex, read off the
/// cyclic order of their ends around that vertex: ±1 when the ends
/// interleave, 0 otherwise.
pub(crate) fn loop_intersection(rotation: &[(usize, u8)], a: usize, b: usize) -> i64 {
    let len = rotation.len();
    let pos = |end: (usize, u8)| rotation.iter().position(|&x| x == end);
    let (Some(a0), Some(a1), Some(b0), Some(b1)) = (pos((a, 0)), pos((a, 1)), pos((b, 0)), pos((b, 1))) else {
        return 0;
    };
    let span = (a1 + len - a0) % len;
    let inside = |p: usize| {
        let d = (p + len - a0) % len;
        d > 0 && d < span
    };
    match (inside(b0), inside(b1)) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}
