use serde::{Deserialize, Serialize};

use super::{BoundaryComplex, Triangulation};
use crate::perm::{edge_index, EDGE_VERTICES};
use crate::util::DisjointSets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexLocation {
    Boundary,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryComponentInfo {
    pub genus: u64,
    pub orientable: bool,
    pub euler_characteristic: i64,
    pub triangles: usize,
}

/// Combinatorial findings about a triangulation. Irreducibility and
/// boundary incompressibility are not decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub orientable: bool,
    pub vertex_count: usize,
    pub vertex_locations: Vec<VertexLocation>,
    pub boundary_components: Vec<BoundaryComponentInfo>,
    pub is_knot_manifold_shaped: bool,
    pub diagnostics: Vec<String>,
}

pub fn validate(tri: &Triangulation) -> ValidationReport {
    let mut diagnostics = Vec::new();

    let orientable = orientation_assignment(tri).is_some();
    if !orientable {
        diagnostics.push("triangulation is not orientable".to_string());
    }

    let corner_class = corner_classes(tri);
    let vertex_count = corner_class.iter().max().map_or(0, |m| m + 1);

    let boundary = BoundaryComplex::new(tri);
    let mut vertex_locations = vec![VertexLocation::Interior; vertex_count];
    for &(tet, face) in &boundary.triangles {
        for v in 0..4u8 {
            if v != face {
                vertex_locations[corner_class[4 * tet + v as usize]] = VertexLocation::Boundary;
            }
        }
    }
    // Class numbering depends on tetrahedron labels; only the multiset is reported.
    vertex_locations.sort();
    for place in [VertexLocation::Boundary, VertexLocation::Interior] {
        let k = vertex_locations.iter().filter(|&&l| l == place).count();
        if k > 0 {
            let (noun, verb) = if k == 1 {
                ("vertex", "lies")
            } else {
                ("vertices", "lie")
            };
            let place = match place {
                VertexLocation::Interior => "in the interior",
                VertexLocation::Boundary => "on the boundary",
            };
            diagnostics.push(format!("{k} {noun} {verb} {place}"));
        }
    }

    let reversed_edge = has_reversed_edge(tri);
    if reversed_edge {
        diagnostics.push("an edge is identified with itself in reverse".to_string());
    }
    let bad_links = bad_vertex_links(tri, &corner_class, &boundary.triangles);
    if bad_links > 0 {
        diagnostics.push(format!(
            "{bad_links} vertex link(s) are neither disks nor spheres; not a 3-manifold triangulation"
        ));
    }
    if !boundary.folded_edges.is_empty() {
        diagnostics.push(format!(
            "{} boundary edge(s) are folded onto themselves",
            boundary.folded_edges.len()
        ));
    }
    let boundary_vertices = vertex_locations
        .iter()
        .filter(|l| **l == VertexLocation::Boundary)
        .count();
    if boundary.vertex_count != boundary_vertices {
        diagnostics.push(format!(
            "boundary surface has {} vertices but {} vertex classes meet the boundary; some vertex link is not a disk",
            boundary.vertex_count, boundary_vertices
        ));
    }

    let mut boundary_components: Vec<BoundaryComponentInfo> = boundary
        .components
        .iter()
        .map(|c| BoundaryComponentInfo {
            genus: c.genus(),
            orientable: c.orientable,
            euler_characteristic: c.euler_characteristic(),
            triangles: c.triangles,
        })
        .collect();
    boundary_components.sort();
    if boundary_components.is_empty() {
        diagnostics.push("triangulation is closed (no boundary)".to_string());
    }
    for (i, c) in boundary_components.iter().enumerate() {
        let kind = match (c.orientable, c.genus) {
            (true, 0) => "a sphere".to_string(),
            (true, 1) => "a torus".to_string(),
            (true, g) => format!("an orientable surface of genus {g}"),
            (false, k) => format!("a non-orientable surface with {k} cross-caps"),
        };
        diagnostics.push(format!("boundary component {i} is {kind}"));
    }
    if boundary_components.len() == 1 && boundary_components[0].genus == 0 && boundary_components[0].orientable {
        diagnostics.push("boundary is a sphere".to_string());
    }

    let is_knot_manifold_shaped = orientable
        && !reversed_edge
        && bad_links == 0
        && vertex_count == 1
        && boundary_components.len() == 1
        && boundary_components[0].orientable
        && boundary_components[0].genus == 1;
    if !is_knot_manifold_shaped {
        let mut why = Vec::new();
        if !orientable {
            why.push("not orientable".to_string());
        }
        if reversed_edge || bad_links > 0 {
            why.push("not a manifold".to_string());
        }
        if vertex_count != 1 {
            why.push(format!("{vertex_count} vertices"));
        }
        if boundary_components.len() != 1 {
            why.push(format!("{} boundary components", boundary_components.len()));
        } else if !(boundary_components[0].orientable && boundary_components[0].genus == 1) {
            why.push("boundary is not a torus".to_string());
        }
        diagnostics.push(format!(
            "not a one-vertex knot-manifold triangulation: {}",
            why.join(", ")
        ));
    }
    diagnostics.push("irreducibility and boundary incompressibility are not checked".to_string());

    ValidationReport {
        orientable,
        vertex_count,
        vertex_locations,
        boundary_components,
        is_knot_manifold_shaped,
        diagnostics,
    }
}

/// Vertex class of every tetrahedron corner, indexed `4 * tet + vertex`.
pub fn corner_classes(tri: &Triangulation) -> Vec<usize> {
    let mut corners = DisjointSets::new(4 * tri.tet_count());
    for g in tri.gluings() {
        for v in 0..4u8 {
            if v != g.face_a {
                corners.union(4 * g.tet_a + v as usize, 4 * g.tet_b + g.perm.apply(v) as usize);
            }
        }
    }
    corners.labels().0
}

/// A ±1 orientation per tetrahedron such that every gluing reverses
/// orientation, if one exists.
pub(crate) fn orientation_assignment(tri: &Triangulation) -> Option<Vec<i8>> {
    let n = tri.tet_count();
    let mut sign = vec![0i8; n];
    for seed in 0..n {
        if sign[seed] != 0 {
            continue;
        }
        sign[seed] = 1;
        let mut stack = vec![seed];
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                let Some(link) = tri.link(t, f) else { continue };
                // An odd gluing permutation joins equally oriented tetrahedra.
                let want = -sign[t] * link.perm.sign();
                if sign[link.tet] == 0 {
                    sign[link.tet] = want;
                    stack.push(link.tet);
                } else if sign[link.tet] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}

/// Number of vertex classes whose link is not a disk (boundary vertices) or
/// a sphere (interior vertices), judged by its Euler characteristic. The
/// link of a vertex class is connected, so `χ = 1` with nonempty boundary
/// means a disk and `χ = 2` means a sphere.
fn bad_vertex_links(tri: &Triangulation, corner_class: &[usize], boundary_triangles: &[(usize, u8)]) -> usize {
    let n = tri.tet_count();
    let classes = corner_class.iter().max().map_or(0, |m| m + 1);
    // Link vertices are ends of tetrahedron edges: ordered pairs (v, w).
    let pair = |t: usize, v: u8, w: u8| 16 * t + 4 * v as usize + w as usize;
    let mut ends = DisjointSets::new(16 * n);
    for g in tri.gluings() {
        for v in (0..4u8).filter(|&v| v != g.face_a) {
            for w in (0..4u8).filter(|&w| w != g.face_a && w != v) {
                ends.union(pair(g.tet_a, v, w), pair(g.tet_b, g.perm.apply(v), g.perm.apply(w)));
            }
        }
    }
    let mut triangles = vec![0i64; classes];
    let mut boundary_edges = vec![0i64; classes];
    let mut link_vertices = vec![std::collections::BTreeSet::new(); classes];
    for t in 0..n {
        for v in 0..4u8 {
            let c = corner_class[4 * t + v as usize];
            triangles[c] += 1;
            for w in (0..4u8).filter(|&w| w != v) {
                link_vertices[c].insert(ends.find(pair(t, v, w)));
            }
        }
    }
    for &(t, f) in boundary_triangles {
        for v in (0..4u8).filter(|&v| v != f) {
            boundary_edges[corner_class[4 * t + v as usize]] += 1;
        }
    }
    (0..classes)
        .filter(|&c| {
            let edges = (3 * triangles[c] + boundary_edges[c]) / 2;
            let chi = link_vertices[c].len() as i64 - edges + triangles[c];
            let expected = if boundary_edges[c] > 0 { 1 } else { 2 };
            chi != expected
        })
        .count()
}

/// Whether some edge class contains a tetrahedron edge in both directions.
fn has_reversed_edge(tri: &Triangulation) -> bool {
    let n = tri.tet_count();
    // Direction parity relative to a representative; BFS over tet-edges.
    let mut parity = vec![i8::MAX; 6 * n];
    for seed in 0..6 * n {
        if parity[seed] != i8::MAX {
            continue;
        }
        parity[seed] = 1;
        let mut stack = vec![seed];
        while let Some(node) = stack.pop() {
            let (tet, e) = (node / 6, node % 6);
            let (a, b) = EDGE_VERTICES[e];
            for f in 0..4u8 {
                if f == a || f == b {
                    continue;
                }
                let Some(link) = tri.link(tet, f) else { continue };
                let (pa, pb) = (link.perm.apply(a), link.perm.apply(b));
                let other = 6 * link.tet + edge_index(pa, pb);
                let want = if pa < pb { parity[node] } else { -parity[node] };
                if parity[other] == i8::MAX {
                    parity[other] = want;
                    stack.push(other);
                } else if parity[other] != want {
                    return true;
                }
            }
        }
    }
    false
}
