//! Reconstruction of the embedded surface described by a coordinate vector.
//!
//! Inside a tetrahedron, the arcs cutting off corner `c` of face `f` are
//! stacked outward from `c`: first the triangles about `c`, then the
//! quadrilaterals (or the octagon). An arc at position `j` meets both edges
//! of `f` through `c` at position `j` counted from `c`. Pieces are glued
//! along arcs with equal positions across each face identification.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{check_admissible, on_zero_side, partner, CoordMode, NormalCoordinateVector, NormalError};
use crate::farey::Slope;
use crate::perm::{edge_index, face_vertices};
use crate::triangulation::basis::basis_from_complex;
use crate::triangulation::{validate, BoundaryBasis, BoundaryComplex, Triangulation};
use crate::util::DisjointSets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryStatus {
    /// No boundary curves.
    Closed,
    /// Every boundary curve is null-homologous on the boundary torus.
    Inessential,
    /// Boundary curves carry a slope.
    Essential,
    /// The triangulation has no torus boundary basis; slopes are undefined.
    NoTorusBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub class: CoordMode,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub connected_components: usize,
    pub boundary_curve_count: usize,
    pub boundary: BoundaryStatus,
    pub slope: Option<Slope>,
}

/// Per-triangulation data reused across many vectors.
pub struct SurfaceContext<'a> {
    tri: &'a Triangulation,
    boundary: BoundaryComplex,
    basis: Option<BoundaryBasis>,
}

pub fn surface_properties(tri: &Triangulation, v: &NormalCoordinateVector) -> Result<SurfaceSummary, NormalError> {
    SurfaceContext::new(tri).summarize(v)
}

/// Index of points and arcs of one vector.
struct Layout<'v> {
    v: &'v NormalCoordinateVector,
    point_offset: Vec<usize>,
    arc_offset: Vec<usize>,
    points: usize,
    arcs: usize,
}

impl<'v> Layout<'v> {
    fn new(tets: usize, v: &'v NormalCoordinateVector) -> Self {
        let mut point_offset = Vec::with_capacity(6 * tets + 1);
        let mut acc = 0usize;
        for t in 0..tets {
            for &(a, b) in &crate::perm::EDGE_VERTICES {
                point_offset.push(acc);
                acc += v.edge_weight(t, a, b) as usize;
            }
        }
        let points = acc;
        let mut arc_offset = Vec::with_capacity(16 * tets);
        acc = 0;
        for t in 0..tets {
            for f in 0..4u8 {
                for c in 0..4u8 {
                    arc_offset.push(acc);
                    if c != f {
                        acc += v.arcs_at(t, f, c) as usize;
                    }
                }
            }
        }
        Layout {
            v,
            point_offset,
            arc_offset,
            points,
            arcs: acc,
        }
    }

    /// Point on edge `{x, y}` of `tet`, `pos` steps from `x`.
    fn point(&self, tet: usize, x: u8, y: u8, pos: usize) -> usize {
        let w = self.v.edge_weight(tet, x, y) as usize;
        debug_assert!(pos < w);
        let from_lo = if x < y { pos } else { w - 1 - pos };
        self.point_offset[6 * tet + edge_index(x, y)] + from_lo
    }

    fn arc(&self, tet: usize, f: u8, c: u8, j: usize) -> usize {
        self.arc_offset[16 * tet + 4 * f as usize + c as usize] + j
    }

    /// The two endpoints of an arc, on edges `{c, x}` and `{c, y}` with `x < y`.
    fn arc_ends(&self, tet: usize, f: u8, c: u8, j: usize) -> [(u8, usize); 2] {
        let others: Vec<u8> = (0..4u8).filter(|&u| u != f && u != c).collect();
        [
            (others[0], self.point(tet, c, others[0], j)),
            (others[1], self.point(tet, c, others[1], j)),
        ]
    }
}

/// An arc together with the face it lies in.
#[derive(Clone, Copy)]
struct ArcRef {
    tet: usize,
    face: u8,
    corner: u8,
    pos: usize,
}

impl<'a> SurfaceContext<'a> {
    pub fn new(tri: &'a Triangulation) -> Self {
        let boundary = BoundaryComplex::new(tri);
        let basis = if validate(tri).is_knot_manifold_shaped {
            basis_from_complex(&boundary)
        } else {
            None
        };
        SurfaceContext { tri, boundary, basis }
    }

    pub fn basis(&self) -> Option<&BoundaryBasis> {
        self.basis.as_ref()
    }

    pub fn summarize(&self, v: &NormalCoordinateVector) -> Result<SurfaceSummary, NormalError> {
        check_admissible(self.tri, v)?;
        let tets = self.tri.tet_count();
        let layout = Layout::new(tets, v);

        // Pieces as lists of arcs.
        let mut arc_info: Vec<ArcRef> = Vec::with_capacity(layout.arcs);
        for t in 0..tets {
            for f in 0..4u8 {
                for c in 0..4u8 {
                    if c == f {
                        continue;
                    }
                    for j in 0..v.arcs_at(t, f, c) as usize {
                        debug_assert_eq!(arc_info.len(), layout.arc(t, f, c, j));
                        arc_info.push(ArcRef {
                            tet: t,
                            face: f,
                            corner: c,
                            pos: j,
                        });
                    }
                }
            }
        }
        let pieces = pieces(&layout, tets);

        // Orient each piece by walking around its boundary.
        let mut arc_owner = vec![usize::MAX; layout.arcs];
        let mut arc_dir = vec![(0usize, 0usize); layout.arcs];
        for (pi, arcs) in pieces.iter().enumerate() {
            let ends: Vec<[usize; 2]> = arcs
                .iter()
                .map(|&a| {
                    let r = arc_info[a];
                    let [(_, p), (_, q)] = layout.arc_ends(r.tet, r.face, r.corner, r.pos);
                    [p, q]
                })
                .collect();
            let mut used = vec![false; arcs.len()];
            let mut current = 0;
            let mut from = ends[0][0];
            for _ in 0..arcs.len() {
                used[current] = true;
                let to = if ends[current][0] == from {
                    ends[current][1]
                } else {
                    ends[current][0]
                };
                arc_owner[arcs[current]] = pi;
                arc_dir[arcs[current]] = (from, to);
                from = to;
                match (0..arcs.len()).find(|&k| !used[k] && ends[k].contains(&to)) {
                    Some(k) => current = k,
                    None => break,
                }
            }
            debug_assert!(used.iter().all(|&u| u));
        }
        debug_assert!(arc_owner.iter().all(|&o| o != usize::MAX));

        // Glue across faces.
        let mut point_sets = DisjointSets::new(layout.points);
        let mut piece_links: Vec<Vec<(usize, i8)>> = vec![Vec::new(); pieces.len()];
        let mut glued_arcs = 0usize;
        for g in self.tri.gluings() {
            let p = g.perm;
            for (a, b) in edge_pairs(g.face_a) {
                let w = v.edge_weight(g.tet_a, a, b);
                debug_assert_eq!(w, v.edge_weight(g.tet_b, p.apply(a), p.apply(b)));
                for k in 0..w as usize {
                    point_sets.union(
                        layout.point(g.tet_a, a, b, k),
                        layout.point(g.tet_b, p.apply(a), p.apply(b), k),
                    );
                }
            }
            for c in face_vertices(g.face_a) {
                let pc = p.apply(c);
                let n = v.arcs_at(g.tet_a, g.face_a, c) as usize;
                for j in 0..n {
                    let arc_a = layout.arc(g.tet_a, g.face_a, c, j);
                    let arc_b = layout.arc(g.tet_b, g.face_b, pc, j);
                    glued_arcs += 1;
                    let (start_a, _) = arc_dir[arc_a];
                    let image = layout
                        .arc_ends(g.tet_a, g.face_a, c, j)
                        .iter()
                        .find(|(_, pt)| *pt == start_a)
                        .map(|&(x, _)| layout.point(g.tet_b, pc, p.apply(x), j))
                        .expect("arc start is an endpoint");
                    // Traversing the shared arc the same way means opposite orientations.
                    let rel: i8 = if arc_dir[arc_b].0 == image { -1 } else { 1 };
                    let (pa, pb) = (arc_owner[arc_a], arc_owner[arc_b]);
                    piece_links[pa].push((pb, rel));
                    piece_links[pb].push((pa, rel));
                }
            }
        }
        let (point_class, vertex_count) = point_sets.labels();
        let edge_count = layout.arcs - glued_arcs;
        let euler_characteristic = vertex_count as i64 - edge_count as i64 + pieces.len() as i64;

        let (connected_components, orientable) = components_and_orientability(&piece_links);

        // Boundary curves run along arcs in boundary faces.
        let boundary_arcs: Vec<usize> = (0..layout.arcs)
            .filter(|&a| self.tri.is_boundary_face(arc_info[a].tet, arc_info[a].face))
            .collect();
        let curves = self.boundary_curves(&layout, &arc_info, &boundary_arcs, &point_class);
        let boundary_curve_count = curves.len();

        let (boundary, slope) = if curves.is_empty() {
            (BoundaryStatus::Closed, None)
        } else if let Some(basis) = &self.basis {
            let mut slope: Option<Slope> = None;
            for cocycle in &curves {
                let pair = |cycle: &[i64]| -> i64 { cycle.iter().zip(cocycle).map(|(a, b)| a * b).sum() };
                let (p, q) = (pair(&basis.lambda), -pair(&basis.mu));
                if let Some(s) = Slope::from_class(p, q) {
                    match slope {
                        Some(prev) if prev != s => {
                            return Err(NormalError::InadmissibleVector(format!(
                                "boundary curves with distinct slopes {prev} and {s}"
                            )))
                        }
                        _ => slope = Some(s),
                    }
                }
            }
            match slope {
                Some(s) => (BoundaryStatus::Essential, Some(s)),
                None => (BoundaryStatus::Inessential, None),
            }
        } else {
            (BoundaryStatus::NoTorusBoundary, None)
        };

        Ok(SurfaceSummary {
            class: v.mode,
            euler_characteristic,
            orientable,
            connected_components,
            boundary_curve_count,
            boundary,
            slope,
        })
    }

    /// Traces each boundary curve and returns its signed crossing counts with
    /// the boundary edges (a 1-cocycle on the boundary surface).
    fn boundary_curves(
        &self,
        layout: &Layout<'_>,
        arc_info: &[ArcRef],
        boundary_arcs: &[usize],
        point_class: &[usize],
    ) -> Vec<Vec<i64>> {
        let ends = |a: usize| {
            let r = arc_info[a];
            layout.arc_ends(r.tet, r.face, r.corner, r.pos)
        };
        let mut at_point: HashMap<usize, Vec<usize>> = HashMap::new();
        for &a in boundary_arcs {
            for (_, p) in ends(a) {
                at_point.entry(point_class[p]).or_default().push(a);
            }
        }
        let mut visited: HashMap<usize, bool> = boundary_arcs.iter().map(|&a| (a, false)).collect();
        let mut curves = Vec::new();
        for &start in boundary_arcs {
            if visited[&start] {
                continue;
            }
            let mut cocycle = vec![0i64; self.boundary.edges.len()];
            let mut arc = start;
            let mut entry = 0usize;
            loop {
                visited.insert(arc, true);
                let r = arc_info[arc];
                let e = ends(arc);
                let (exit_vertex, exit_point) = e[1 - entry];
                if let Some(tb) = self.boundary.triangle_index(r.tet, r.face) {
                    let (id, sign) = self.boundary.edge_of(tb, r.corner, exit_vertex);
                    let (s, t) = if sign > 0 {
                        (r.corner, exit_vertex)
                    } else {
                        (exit_vertex, r.corner)
                    };
                    cocycle[id] -= self.boundary.direction(tb, s, t) as i64;
                }
                let class = point_class[exit_point];
                let next = at_point[&class].iter().copied().find(|&b| b != arc).unwrap_or(arc);
                if next == start || visited[&next] {
                    break;
                }
                let ne = ends(next);
                entry = if point_class[ne[0].1] == class { 0 } else { 1 };
                arc = next;
            }
            curves.push(cocycle);
        }
        curves
    }
}

fn edge_pairs(f: u8) -> [(u8, u8); 3] {
    let [a, b, c] = face_vertices(f);
    [(a, b), (a, c), (b, c)]
}

/// Arc lists of every piece, tetrahedron by tetrahedron.
fn pieces(layout: &Layout<'_>, tets: usize) -> Vec<Vec<usize>> {
    let v = layout.v;
    let mut out = Vec::new();
    for t in 0..tets {
        for corner in 0..4u8 {
            for copy in 0..v.triangle(t, corner) as usize {
                out.push(
                    (0..4u8)
                        .filter(|&f| f != corner)
                        .map(|f| layout.arc(t, f, corner, copy))
                        .collect(),
                );
            }
        }
        for k in 0..3 {
            let count = v.quad(t, k) as usize;
            for copy in 0..count {
                out.push(
                    (0..4u8)
                        .map(|f| {
                            let c = partner(k, f);
                            let offset = if on_zero_side(k, c) { copy } else { count - 1 - copy };
                            layout.arc(t, f, c, v.triangle(t, c) as usize + offset)
                        })
                        .collect(),
                );
            }
            for _ in 0..v.octagon(t, k) {
                let mut arcs = Vec::with_capacity(8);
                for f in 0..4u8 {
                    for c in 0..4u8 {
                        if c != f && c != partner(k, f) {
                            arcs.push(layout.arc(t, f, c, v.triangle(t, c) as usize));
                        }
                    }
                }
                out.push(arcs);
            }
        }
    }
    out
}

fn components_and_orientability(links: &[Vec<(usize, i8)>]) -> (usize, bool) {
    let n = links.len();
    let mut sign = vec![0i8; n];
    let mut components = 0;
    let mut orientable = true;
    for seed in 0..n {
        if sign[seed] != 0 {
            continue;
        }
        components += 1;
        sign[seed] = 1;
        let mut stack = vec![seed];
        while let Some(p) = stack.pop() {
            for &(q, rel) in &links[p] {
                let want = sign[p] * rel;
                if sign[q] == 0 {
                    sign[q] = want;
                    stack.push(q);
                } else if sign[q] != want {
                    orientable = false;
                }
            }
        }
    }
    (components, orientable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::parse_triangulation;

    fn vector(mode: CoordMode, coords: &[u64]) -> NormalCoordinateVector {
        NormalCoordinateVector::new(mode, coords.to_vec())
    }

    #[test]
    fn single_triangle_is_a_disk() {
        let tri = parse_triangulation("tets 1\n").unwrap();
        let s = surface_properties(&tri, &vector(CoordMode::Normal, &[1, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(s.euler_characteristic, 1);
        assert_eq!(s.connected_components, 1);
        assert!(s.orientable);
        assert_eq!(s.boundary_curve_count, 1);
        assert_eq!(s.boundary, BoundaryStatus::NoTorusBoundary);
    }

    #[test]
    fn octagon_and_quad_disks() {
        let tri = parse_triangulation("tets 1\n").unwrap();
        for coords in [[0, 0, 0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 0, 0, 1]] {
            let mode = CoordMode::Octagonal;
            if coords[4] == 1 {
                let s = surface_properties(&tri, &vector(CoordMode::Normal, &coords[..7])).unwrap();
                assert_eq!(s.euler_characteristic, 1);
                continue;
            }
            let s = surface_properties(&tri, &vector(mode, &coords)).unwrap();
            assert_eq!(s.euler_characteristic, 1);
            assert_eq!(s.boundary_curve_count, 1);
        }
    }

    #[test]
    fn doubling_doubles_counts() {
        let tri = parse_triangulation("tets 1\n").unwrap();
        let v = vector(CoordMode::Normal, &[1, 2, 0, 1, 0, 3, 0]);
        let s1 = surface_properties(&tri, &v).unwrap();
        let s2 = surface_properties(&tri, &v.scaled(2)).unwrap();
        assert_eq!(s1.connected_components, 7);
        assert_eq!(s2.euler_characteristic, 2 * s1.euler_characteristic);
        assert_eq!(s2.boundary_curve_count, 2 * s1.boundary_curve_count);
    }

    #[test]
    fn rejects_inadmissible_vectors() {
        let tri = parse_triangulation("tets 1\n").unwrap();
        let err = surface_properties(&tri, &vector(CoordMode::Normal, &[0, 0, 0, 0, 1, 1, 0])).unwrap_err();
        assert!(matches!(err, NormalError::InadmissibleVector(_)));
        let err = surface_properties(&tri, &vector(CoordMode::Normal, &[0; 7])).unwrap_err();
        assert!(matches!(err, NormalError::InadmissibleVector(_)));
        let err = surface_properties(&tri, &vector(CoordMode::Octagonal, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0])).unwrap_err();
        assert!(matches!(err, NormalError::InadmissibleVector(_)));
    }
}
