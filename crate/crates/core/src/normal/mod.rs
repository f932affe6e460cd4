//! Normal and octagonal almost normal surfaces in standard coordinates.
//!
//! Each tetrahedron carries 4 triangle types (triangle `v` cuts off vertex
//! `v`), 3 quadrilateral types and, in octagonal coordinates, 3 octagon
//! types. Quadrilateral type `k` separates `{0, k+1}` from the other two
//! vertices; octagon type `k` meets the two edges `{0, k+1}` and its
//! complement twice each and the other four edges once.

mod enumerate;
mod slopes;
mod surface;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::face_vertices;
use crate::triangulation::{NotAKnotManifold, Triangulation};

pub use enumerate::{
    enumerate_vertex_surfaces, enumerate_vertex_surfaces_with, extreme_rays, EnumerationOptions, DEFAULT_RAY_CAP,
};
pub use slopes::{boundary_slope_set, boundary_slope_set_using, boundary_slope_set_with, SlopeSet, SurfaceClass};
pub use surface::{surface_properties, BoundaryStatus, SurfaceContext, SurfaceSummary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalError {
    #[error("inadmissible vector: {0}")]
    InadmissibleVector(String),
    #[error(
        "resource limit exceeded: {rays} intermediate rays (cap {cap}) after {processed} of {total} equations; enumeration is partial"
    )]
    ResourceLimit {
        cap: usize,
        rays: usize,
        processed: usize,
        total: usize,
    },
    #[error("coordinate does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    NotAKnotManifold(#[from] NotAKnotManifold),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordMode {
    Normal,
    Octagonal,
}

impl CoordMode {
    /// Coordinates per tetrahedron.
    pub fn block(self) -> usize {
        match self {
            CoordMode::Normal => 7,
            CoordMode::Octagonal => 10,
        }
    }
}

/// The vertex paired with `v` by quadrilateral/octagon type `k`.
pub(crate) fn partner(k: usize, v: u8) -> u8 {
    let pair = k as u8 + 1;
    match v {
        0 => pair,
        x if x == pair => 0,
        x => 6 - pair - x,
    }
}

/// Whether `v` lies on the same side as vertex 0 for type `k`.
pub(crate) fn on_zero_side(k: usize, v: u8) -> bool {
    v == 0 || v == k as u8 + 1
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NormalCoordinateVector {
    pub mode: CoordMode,
    pub coords: Vec<u64>,
}

impl NormalCoordinateVector {
    pub fn new(mode: CoordMode, coords: Vec<u64>) -> Self {
        NormalCoordinateVector { mode, coords }
    }

    pub fn tet_count(&self) -> usize {
        self.coords.len() / self.mode.block()
    }

    pub fn triangle(&self, tet: usize, v: u8) -> u64 {
        self.coords[self.mode.block() * tet + v as usize]
    }

    pub fn quad(&self, tet: usize, k: usize) -> u64 {
        self.coords[self.mode.block() * tet + 4 + k]
    }

    pub fn octagon(&self, tet: usize, k: usize) -> u64 {
        match self.mode {
            CoordMode::Normal => 0,
            CoordMode::Octagonal => self.coords[10 * tet + 7 + k],
        }
    }

    pub fn octagon_total(&self) -> u64 {
        (0..self.tet_count())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .map(|(t, k)| self.octagon(t, k))
            .sum()
    }

    pub fn scaled(&self, k: u64) -> Self {
        NormalCoordinateVector {
            mode: self.mode,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Re-expresses a normal vector in octagonal coordinates (no octagons).
    pub fn to_octagonal(&self) -> Self {
        match self.mode {
            CoordMode::Octagonal => self.clone(),
            CoordMode::Normal => {
                let mut coords = Vec::with_capacity(self.tet_count() * 10);
                for block in self.coords.chunks(7) {
                    coords.extend_from_slice(block);
                    coords.extend_from_slice(&[0, 0, 0]);
                }
                NormalCoordinateVector {
                    mode: CoordMode::Octagonal,
                    coords,
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = if self.mode == other.mode {
            (self.clone(), other.clone())
        } else {
            (self.to_octagonal(), other.to_octagonal())
        };
        NormalCoordinateVector {
            mode: a.mode,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    /// Number of pieces of a tetrahedron meeting face `f` in an arc that
    /// cuts off corner `c`.
    pub(crate) fn arcs_at(&self, tet: usize, f: u8, c: u8) -> u64 {
        let mut n = self.triangle(tet, c);
        for k in 0..3 {
            if partner(k, f) == c {
                n += self.quad(tet, k);
            } else {
                n += self.octagon(tet, k);
            }
        }
        n
    }

    /// Number of points in which the surface meets edge `{a, b}` of `tet`.
    pub(crate) fn edge_weight(&self, tet: usize, a: u8, b: u8) -> u64 {
        let mut w = self.triangle(tet, a) + self.triangle(tet, b);
        for k in 0..3 {
            if partner(k, a) == b {
                w += 2 * self.octagon(tet, k);
            } else {
                w += self.quad(tet, k) + self.octagon(tet, k);
            }
        }
        w
    }
}

/// Matching equations: for every gluing and every corner of the glued face,
/// the arcs cutting off that corner agree on both sides. Three rows per
/// gluing, each of length `block * tet_count`.
pub fn matching_equations(tri: &Triangulation, mode: CoordMode) -> Vec<Vec<i64>> {
    let block = mode.block();
    let dim = block * tri.tet_count();
    let mut rows = Vec::with_capacity(3 * tri.gluings().len());
    for g in tri.gluings() {
        for c in face_vertices(g.face_a) {
            let mut row = vec![0i64; dim];
            add_arc_coefficients(&mut row, block, mode, g.tet_a, g.face_a, c, 1);
            add_arc_coefficients(&mut row, block, mode, g.tet_b, g.face_b, g.perm.apply(c), -1);
            rows.push(row);
        }
    }
    rows
}

fn add_arc_coefficients(row: &mut [i64], block: usize, mode: CoordMode, tet: usize, f: u8, c: u8, sign: i64) {
    let base = block * tet;
    row[base + c as usize] += sign;
    for k in 0..3 {
        if partner(k, f) == c {
            row[base + 4 + k] += sign;
        } else if mode == CoordMode::Octagonal {
            row[base + 7 + k] += sign;
        }
    }
}

/// Support condition shared by enumeration pruning and final filtering: at
/// most one quadrilateral or octagon type per tetrahedron and, in octagonal
/// coordinates, at most one octagon coordinate in the whole vector.
pub(crate) fn support_admissible(mode: CoordMode, support: impl Fn(usize) -> bool, tets: usize) -> bool {
    let block = mode.block();
    let mut octagons = 0;
    for t in 0..tets {
        let base = block * t;
        let mut discs = 0;
        for i in 4..block {
            if support(base + i) {
                discs += 1;
                if i >= 7 {
                    octagons += 1;
                }
            }
        }
        if discs > 1 {
            return false;
        }
    }
    octagons <= 1
}

/// Full admissibility: dimensions, quadrilateral/octagon constraints, a
/// single octagon of coefficient one in octagonal coordinates, and the
/// matching equations.
pub fn check_admissible(tri: &Triangulation, v: &NormalCoordinateVector) -> Result<(), NormalError> {
    let bad = |m: String| Err(NormalError::InadmissibleVector(m));
    if v.coords.len() != v.mode.block() * tri.tet_count() {
        return bad(format!(
            "expected {} coordinates, found {}",
            v.mode.block() * tri.tet_count(),
            v.coords.len()
        ));
    }
    if v.coords.iter().all(|&c| c == 0) {
        return bad("zero vector".into());
    }
    if !support_admissible(v.mode, |i| v.coords[i] != 0, tri.tet_count()) {
        return bad("more than one quadrilateral or octagon type in a tetrahedron".into());
    }
    if v.mode == CoordMode::Octagonal && v.octagon_total() != 1 {
        return bad(format!("octagon count is {}, expected exactly 1", v.octagon_total()));
    }
    for (i, row) in matching_equations(tri, v.mode).iter().enumerate() {
        let s: i128 = row.iter().zip(&v.coords).map(|(&a, &x)| a as i128 * x as i128).sum();
        if s != 0 {
            return bad(format!("matching equation {i} fails"));
        }
    }
    Ok(())
}

/// Triangle coordinates of the link of a vertex class (normal coordinates).
pub fn vertex_link(tri: &Triangulation, vertex_class: usize) -> NormalCoordinateVector {
    let classes = crate::triangulation::corner_classes(tri);
    let n = tri.tet_count();
    let mut coords = vec![0u64; 7 * n];
    for t in 0..n {
        for v in 0..4 {
            if classes[4 * t + v] == vertex_class {
                coords[7 * t + v] = 1;
            }
        }
    }
    NormalCoordinateVector::new(CoordMode::Normal, coords)
}
