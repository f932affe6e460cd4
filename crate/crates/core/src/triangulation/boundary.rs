//! The triangulated boundary surface assembled from unglued faces.

use std::collections::HashMap;

use super::Triangulation;
use crate::perm::face_vertices;
use crate::util::DisjointSets;

/// One side of a boundary edge: the boundary triangle it lies in and the two
/// tetrahedron-local vertex labels of its endpoints, listed in the edge's
/// canonical direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeSide {
    pub triangle: usize,
    pub start: u8,
    pub end: u8,
}

#[derive(Clone, Debug)]
pub struct BoundaryComplex {
    /// Boundary triangles as `(tet, face)`, in increasing order.
    pub triangles: Vec<(usize, u8)>,
    /// Each boundary edge and its two sides. The first side's `start < end`.
    pub edges: Vec<[EdgeSide; 2]>,
    /// Per triangle and local edge slot: `(edge id, sign)`, where the sign is
    /// +1 when the slot's low-to-high direction is the canonical one.
    slots: Vec<[(usize, i8); 3]>,
    /// Vertex class of each triangle corner, indexed by local slot 0..3.
    corner_vertex: Vec<[usize; 3]>,
    pub vertex_count: usize,
    /// +1/-1 orientation of each triangle; consistent within an orientable
    /// component.
    pub orientation: Vec<i8>,
    pub component_of: Vec<usize>,
    pub components: Vec<SurfaceComponent>,
    index: HashMap<(usize, u8), usize>,
    /// Edges whose two sides coincide.
    pub folded_edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub orientable: bool,
}

impl SurfaceComponent {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.triangles as i64
    }

    /// Orientable genus, or the number of cross-caps when non-orientable.
    pub fn genus(&self) -> u64 {
        let deficit = 2 - self.euler_characteristic();
        if self.orientable {
            (deficit / 2).max(0) as u64
        } else {
            deficit.max(0) as u64
        }
    }
}

/// Slot of edge `{a, b}` within the face opposite `f`: pairs of
/// `face_vertices(f)` in the order (v0v1, v0v2, v1v2).
pub(crate) fn edge_slot(f: u8, a: u8, b: u8) -> usize {
    let [v0, v1, _] = face_vertices(f);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if lo == v0 {
        if hi == v1 {
            0
        } else {
            1
        }
    } else {
        debug_assert_eq!(lo, v1);
        2
    }
}

fn slot_vertices(f: u8, slot: usize) -> (u8, u8) {
    let [v0, v1, v2] = face_vertices(f);
    match slot {
        0 => (v0, v1),
        1 => (v0, v2),
        _ => (v1, v2),
    }
}

fn corner_slot(f: u8, v: u8) -> usize {
    face_vertices(f).iter().position(|&x| x == v).expect("vertex on face")
}

impl BoundaryComplex {
    pub fn new(tri: &Triangulation) -> Self {
        let triangles: Vec<(usize, u8)> = tri.boundary_faces().collect();
        let index: HashMap<(usize, u8), usize> = triangles.iter().enumerate().map(|(i, &tf)| (tf, i)).collect();

        let mut slots = vec![[(usize::MAX, 0i8); 3]; triangles.len()];
        let mut edges: Vec<[EdgeSide; 2]> = Vec::new();
        let mut folded_edges = Vec::new();
        for (ti, &(tet, face)) in triangles.iter().enumerate() {
            for slot in 0..3 {
                if slots[ti][slot].0 != usize::MAX {
                    continue;
                }
                let (a, b) = slot_vertices(face, slot);
                let (ptet, pface, pa, pb) = walk_around_edge(tri, tet, face, a, b);
                let pti = index[&(ptet, pface)];
                let pslot = edge_slot(pface, pa, pb);
                let id = edges.len();
                let first = EdgeSide {
                    triangle: ti,
                    start: a,
                    end: b,
                };
                let second = EdgeSide {
                    triangle: pti,
                    start: pa,
                    end: pb,
                };
                if pti == ti && pslot == slot {
                    folded_edges.push(id);
                }
                slots[ti][slot] = (id, 1);
                slots[pti][pslot] = (id, if pa < pb { 1 } else { -1 });
                edges.push([first, second]);
            }
        }

        // Corner identification along shared edges.
        let mut corners = DisjointSets::new(3 * triangles.len());
        for [s1, s2] in &edges {
            let f1 = triangles[s1.triangle].1;
            let f2 = triangles[s2.triangle].1;
            corners.union(
                3 * s1.triangle + corner_slot(f1, s1.start),
                3 * s2.triangle + corner_slot(f2, s2.start),
            );
            corners.union(
                3 * s1.triangle + corner_slot(f1, s1.end),
                3 * s2.triangle + corner_slot(f2, s2.end),
            );
        }
        let (corner_labels, vertex_count) = corners.labels();
        let corner_vertex: Vec<[usize; 3]> = (0..triangles.len())
            .map(|t| [corner_labels[3 * t], corner_labels[3 * t + 1], corner_labels[3 * t + 2]])
            .collect();

        // Components and orientations by breadth-first search across edges.
        let mut neighbours: Vec<Vec<(usize, usize)>> = vec![Vec::new(); triangles.len()];
        for (id, [s1, s2]) in edges.iter().enumerate() {
            neighbours[s1.triangle].push((s2.triangle, id));
            if s1.triangle != s2.triangle {
                neighbours[s2.triangle].push((s1.triangle, id));
            }
        }
        let mut orientation = vec![0i8; triangles.len()];
        let mut component_of = vec![usize::MAX; triangles.len()];
        let mut component_orientable = Vec::new();
        for seed in 0..triangles.len() {
            if component_of[seed] != usize::MAX {
                continue;
            }
            let comp = component_orientable.len();
            let mut orientable = true;
            component_of[seed] = comp;
            orientation[seed] = 1;
            let mut queue = vec![seed];
            while let Some(t) = queue.pop() {
                for &(u, id) in &neighbours[t] {
                    let [s1, s2] = edges[id];
                    // Required: the two sides are traversed in opposite directions.
                    let (this, other) = if s1.triangle == t { (s1, s2) } else { (s2, s1) };
                    let d_this = ccw_direction(triangles[t].1, orientation[t], this.start, this.end);
                    let want = -d_this * ccw_direction(triangles[u].1, 1, other.start, other.end);
                    if component_of[u] == usize::MAX {
                        component_of[u] = comp;
                        orientation[u] = want;
                        queue.push(u);
                    } else if orientation[u] != want {
                        orientable = false;
                    }
                }
            }
            component_orientable.push(orientable);
        }

        let mut components: Vec<SurfaceComponent> = component_orientable
            .iter()
            .map(|&orientable| SurfaceComponent {
                triangles: 0,
                edges: 0,
                vertices: 0,
                orientable,
            })
            .collect();
        for t in 0..triangles.len() {
            components[component_of[t]].triangles += 1;
        }
        for [s1, _] in &edges {
            components[component_of[s1.triangle]].edges += 1;
        }
        let mut vertex_component = vec![usize::MAX; vertex_count];
        for t in 0..triangles.len() {
            for &v in &corner_vertex[t] {
                vertex_component[v] = component_of[t];
            }
        }
        for &c in &vertex_component {
            components[c].vertices += 1;
        }

        BoundaryComplex {
            triangles,
            edges,
            slots,
            corner_vertex,
            vertex_count,
            orientation,
            component_of,
            components,
            index,
            folded_edges,
        }
    }

    pub fn triangle_index(&self, tet: usize, face: u8) -> Option<usize> {
        self.index.get(&(tet, face)).copied()
    }

    /// `(edge id, sign)` of edge `{a, b}` in boundary triangle `t`; the sign is
    /// +1 when `a -> b` is the edge's canonical direction.
    pub fn edge_of(&self, t: usize, a: u8, b: u8) -> (usize, i8) {
        let face = self.triangles[t].1;
        let (id, sign) = self.slots[t][edge_slot(face, a, b)];
        (id, if a < b { sign } else { -sign })
    }

    /// Vertex class of the corner of triangle `t` at local vertex `v`.
    pub fn vertex_at(&self, t: usize, v: u8) -> usize {
        self.corner_vertex[t][corner_slot(self.triangles[t].1, v)]
    }

    /// +1 if the oriented boundary of triangle `t` runs from `a` to `b`.
    pub fn direction(&self, t: usize, a: u8, b: u8) -> i8 {
        ccw_direction(self.triangles[t].1, self.orientation[t], a, b)
    }

    /// Cyclic orders of half-edge ends around each boundary vertex. A
    /// half-edge end is `(edge id, 0 for the canonical start, 1 for the end)`.
    pub fn vertex_rotations(&self) -> Vec<Vec<(usize, u8)>> {
        let mut succ: HashMap<(usize, u8), (usize, u8)> = HashMap::new();
        for (t, &(_, face)) in self.triangles.iter().enumerate() {
            for v in face_vertices(face) {
                let others: Vec<u8> = face_vertices(face).into_iter().filter(|&x| x != v).collect();
                let (x, y) = (others[0], others[1]);
                // Turning positively around v inside t goes from edge vx to vy
                // when the triangle's boundary runs v -> x.
                let (from, to) = if self.direction(t, v, x) > 0 { (x, y) } else { (y, x) };
                succ.insert(self.end_at(t, v, from), self.end_at(t, v, to));
            }
        }
        let mut keys: Vec<(usize, u8)> = succ.keys().copied().collect();
        keys.sort();
        let mut seen = std::collections::HashSet::new();
        let mut cycles = Vec::new();
        for k in keys {
            if seen.contains(&k) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = k;
            while seen.insert(cur) {
                cycle.push(cur);
                match succ.get(&cur) {
                    Some(&n) => cur = n,
                    None => break,
                }
            }
            cycles.push(cycle);
        }
        cycles
    }

    fn end_at(&self, t: usize, v: u8, other: u8) -> (usize, u8) {
        let (id, sign) = self.edge_of(t, v, other);
        (id, if sign > 0 { 0 } else { 1 })
    }

    /// Whether edge `e` is a loop at a single boundary vertex.
    pub fn is_loop(&self, e: usize) -> bool {
        let s = self.edges[e][0];
        self.vertex_at(s.triangle, s.start) == self.vertex_at(s.triangle, s.end)
    }
}

fn ccw_direction(face: u8, orientation: i8, a: u8, b: u8) -> i8 {
    let [v0, v1, v2] = face_vertices(face);
    let forward = matches!((a, b), (x, y) if (x, y) == (v0, v1) || (x, y) == (v1, v2) || (x, y) == (v2, v0));
    if forward {
        orientation
    } else {
        -orientation
    }
}

/// Follows the faces around edge `{a, b}` starting from boundary face
/// `(tet, face)` until the other boundary face containing it is reached.
/// Returns that face and the images of `a` and `b`.
fn walk_around_edge(tri: &Triangulation, tet: usize, face: u8, a: u8, b: u8) -> (usize, u8, u8, u8) {
    let (mut t, mut entered, mut a, mut b) = (tet, face, a, b);
    // The walk is reversible and starts at a boundary face, so it cannot
    // cycle; it visits each (tetrahedron, face, ordered edge) state at most once.
    for _ in 0..=(48 * tri.tet_count()) {
        let next = (0..4u8)
            .find(|&v| v != a && v != b && v != entered)
            .expect("four vertices");
        match tri.link(t, next) {
            None => return (t, next, a, b),
            Some(link) => {
                t = link.tet;
                entered = link.face;
                a = link.perm.apply(a);
                b = link.perm.apply(b);
            }
        }
    }
    unreachable!("walk around a boundary edge must end on the boundary")
}
