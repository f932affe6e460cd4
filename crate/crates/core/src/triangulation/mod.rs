//! Triangulations of compact 3-manifolds built from tetrahedra with face
//! identifications.
//!
//! Faces are named by the vertex they are opposite to. A gluing of face `fa`
//! of tetrahedron `ta` to face `fb` of tetrahedron `tb` is recorded together
//! with a permutation of `{0, 1, 2, 3}` that carries the vertices of `fa` onto
//! those of `fb` (and therefore sends `fa` to `fb`). Unglued faces form the
//! boundary.

pub(crate) mod basis;
mod boundary;
mod validate;

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::perm::Perm4;

pub use basis::{boundary_basis, BoundaryBasis, NotAKnotManifold};
pub use boundary::{BoundaryComplex, EdgeSide};
pub use validate::{corner_classes, validate, BoundaryComponentInfo, ValidationReport, VertexLocation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("tetrahedron {tet} face {face} is glued more than once")]
    FaceGluedTwice { tet: usize, face: u8 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("degenerate permutation {perm}: {reason}")]
    DegeneratePermutation { perm: String, reason: String },
    #[error("tetrahedron {tet} face {face} is glued to itself")]
    SelfGluing { tet: usize, face: u8 },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<TriangulationError>,
    },
}

impl TriangulationError {
    /// Strips the line annotation added by the parser.
    pub fn root(&self) -> &TriangulationError {
        match self {
            TriangulationError::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}

/// One face identification, stored with the lexicographically smaller
/// `(tet, face)` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gluing {
    pub tet_a: usize,
    pub face_a: u8,
    pub tet_b: usize,
    pub face_b: u8,
    pub perm: Perm4,
}

impl Gluing {
    fn canonical(self) -> Gluing {
        if (self.tet_b, self.face_b) < (self.tet_a, self.face_a) {
            Gluing {
                tet_a: self.tet_b,
                face_a: self.face_b,
                tet_b: self.tet_a,
                face_b: self.face_a,
                perm: self.perm.inverse(),
            }
        } else {
            self
        }
    }
}

/// Where a face leads: the glued `(tet, face)` and the vertex permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceLink {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    tet_count: usize,
    gluings: Vec<Gluing>,
    links: Vec<[Option<FaceLink>; 4]>,
}

impl Triangulation {
    pub fn new(tet_count: usize, gluings: impl IntoIterator<Item = Gluing>) -> Result<Self, TriangulationError> {
        if tet_count == 0 {
            return Err(TriangulationError::IndexOutOfRange(
                "a triangulation needs at least one tetrahedron".into(),
            ));
        }
        let mut links: Vec<[Option<FaceLink>; 4]> = vec![[None; 4]; tet_count];
        let mut stored = Vec::new();
        for g in gluings {
            check_gluing(tet_count, &g)?;
            for (tet, face) in [(g.tet_a, g.face_a), (g.tet_b, g.face_b)] {
                if links[tet][face as usize].is_some() {
                    return Err(TriangulationError::FaceGluedTwice { tet, face });
                }
            }
            links[g.tet_a][g.face_a as usize] = Some(FaceLink {
                tet: g.tet_b,
                face: g.face_b,
                perm: g.perm,
            });
            links[g.tet_b][g.face_b as usize] = Some(FaceLink {
                tet: g.tet_a,
                face: g.face_a,
                perm: g.perm.inverse(),
            });
            stored.push(g.canonical());
        }
        stored.sort();
        Ok(Triangulation {
            tet_count,
            gluings: stored,
            links,
        })
    }

    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    /// Gluings in canonical order.
    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn link(&self, tet: usize, face: u8) -> Option<FaceLink> {
        self.links[tet][face as usize]
    }

    pub fn is_boundary_face(&self, tet: usize, face: u8) -> bool {
        self.links[tet][face as usize].is_none()
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        (0..self.tet_count)
            .flat_map(|t| (0..4u8).map(move |f| (t, f)))
            .filter(|&(t, f)| self.is_boundary_face(t, f))
    }

    /// Canonical text form; reparses to an equal triangulation.
    pub fn to_text(&self) -> String {
        let mut out = format!("tets {}\n", self.tet_count);
        for g in &self.gluings {
            out.push_str(&format!(
                "glue {} {} {} {} {}\n",
                g.tet_a, g.face_a, g.tet_b, g.face_b, g.perm
            ));
        }
        out
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    /// Renames tetrahedron `i` to `relabel[i]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Self, TriangulationError> {
        assert_eq!(relabel.len(), self.tet_count);
        Triangulation::new(
            self.tet_count,
            self.gluings.iter().map(|g| Gluing {
                tet_a: relabel[g.tet_a],
                tet_b: relabel[g.tet_b],
                ..*g
            }),
        )
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_gluing(tet_count: usize, g: &Gluing) -> Result<(), TriangulationError> {
    for (tet, face) in [(g.tet_a, g.face_a), (g.tet_b, g.face_b)] {
        if tet >= tet_count {
            return Err(TriangulationError::IndexOutOfRange(format!(
                "tetrahedron {tet} (only {tet_count} tetrahedra)"
            )));
        }
        if face > 3 {
            return Err(TriangulationError::IndexOutOfRange(format!(
                "face {face} (faces are 0..3)"
            )));
        }
    }
    if g.tet_a == g.tet_b && g.face_a == g.face_b {
        return Err(TriangulationError::SelfGluing {
            tet: g.tet_a,
            face: g.face_a,
        });
    }
    if g.perm.apply(g.face_a) != g.face_b {
        return Err(TriangulationError::DegeneratePermutation {
            perm: g.perm.to_string(),
            reason: format!(
                "must send the vertex opposite face {} to the vertex opposite face {}",
                g.face_a, g.face_b
            ),
        });
    }
    Ok(())
}

/// Parses the line-oriented triangulation format:
///
/// ```text
/// # comment
/// tets N
/// glue tA fA tB fB p0p1p2p3
/// ```
///
/// A face is written either as the single vertex it is opposite to (`0`..`3`)
/// or as its three vertices (`123`).
pub fn parse_triangulation(text: &str) -> Result<Triangulation, TriangulationError> {
    let mut tet_count: Option<usize> = None;
    let mut gluings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(&(col, head)) = tokens.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| TriangulationError::Syntax {
            line: line_no,
            column,
            message,
        };
        match head {
            "tets" => {
                if tet_count.is_some() {
                    return Err(syntax(col, "duplicate `tets` statement".into()));
                }
                if tokens.len() != 2 {
                    return Err(syntax(col, "expected `tets N`".into()));
                }
                let (c, tok) = tokens[1];
                let n = tok
                    .parse::<usize>()
                    .map_err(|_| syntax(c, format!("expected a tetrahedron count, found `{tok}`")))?;
                tet_count = Some(n);
            }
            "glue" => {
                let Some(n) = tet_count else {
                    return Err(syntax(col, "`glue` before `tets`".into()));
                };
                if tokens.len() != 6 {
                    return Err(syntax(col, "expected `glue tA fA tB fB perm`".into()));
                }
                let tet = |(c, tok): (usize, &str)| {
                    tok.parse::<usize>()
                        .map_err(|_| syntax(c, format!("expected a tetrahedron index, found `{tok}`")))
                };
                let tet_a = tet(tokens[1])?;
                let face_a = parse_face(tokens[2]).map_err(|(c, m)| syntax(c, m))?;
                let tet_b = tet(tokens[3])?;
                let face_b = parse_face(tokens[4]).map_err(|(c, m)| syntax(c, m))?;
                let (pc, ptok) = tokens[5];
                let perm = parse_perm(ptok).ok_or_else(|| TriangulationError::AtLine {
                    line: line_no,
                    source: Box::new(TriangulationError::DegeneratePermutation {
                        perm: ptok.to_string(),
                        reason: format!("column {pc}: not a permutation of 0123"),
                    }),
                })?;
                let g = Gluing {
                    tet_a,
                    face_a,
                    tet_b,
                    face_b,
                    perm,
                };
                check_gluing(n, &g).map_err(|e| TriangulationError::AtLine {
                    line: line_no,
                    source: Box::new(e),
                })?;
                gluings.push((line_no, g));
            }
            other => {
                return Err(syntax(col, format!("unknown statement `{other}`")));
            }
        }
    }

    let Some(n) = tet_count else {
        return Err(TriangulationError::Syntax {
            line: 1,
            column: 1,
            message: "missing `tets N` statement".into(),
        });
    };
    // Report duplicate faces against the line that reuses them.
    let mut used = vec![[false; 4]; n];
    for (line, g) in &gluings {
        for (tet, face) in [(g.tet_a, g.face_a), (g.tet_b, g.face_b)] {
            if used[tet][face as usize] {
                return Err(TriangulationError::AtLine {
                    line: *line,
                    source: Box::new(TriangulationError::FaceGluedTwice { tet, face }),
                });
            }
            used[tet][face as usize] = true;
        }
    }
    Triangulation::new(n, gluings.into_iter().map(|(_, g)| g))
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_face((col, tok): (usize, &str)) -> Result<u8, (usize, String)> {
    let digits: Vec<u8> = tok.bytes().map(|b| b.wrapping_sub(b'0')).collect();
    let bad = || (col, format!("expected a face (0..3 or three vertices), found `{tok}`"));
    match digits.as_slice() {
        [f] if *f <= 3 => Ok(*f),
        [a, b, c] if *a <= 3 && *b <= 3 && *c <= 3 && a != b && b != c && a != c => Ok(6 - a - b - c),
        _ => Err(bad()),
    }
}

fn parse_perm(tok: &str) -> Option<Perm4> {
    let bytes = tok.as_bytes();
    if bytes.len() != 4 {
        return None;
    }
    let mut images = [0u8; 4];
    for (i, b) in bytes.iter().enumerate() {
        images[i] = b.checked_sub(b'0')?;
    }
    Perm4::new(images)
}
