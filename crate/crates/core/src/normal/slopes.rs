use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_vertex_surfaces_with, EnumerationOptions};
use super::surface::SurfaceContext;
use super::{CoordMode, NormalCoordinateVector, NormalError};
use crate::farey::Slope;
use crate::triangulation::{validate, NotAKnotManifold, Triangulation};

/// Surface classes that can be enumerated; octagonal means almost normal
/// surfaces with exactly one octagon.
pub type SurfaceClass = CoordMode;

/// A finite set of slopes, with the vertex surfaces realizing each one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSet {
    pub slopes: BTreeSet<Slope>,
    /// Vector identifiers such as `normal#3`: class and index in the sorted
    /// enumeration output.
    #[serde(default)]
    pub provenance: BTreeMap<Slope, Vec<String>>,
    #[serde(default)]
    pub classes_covered: BTreeSet<SurfaceClass>,
}

impl SlopeSet {
    /// A set with no provenance, as injected from outside.
    pub fn from_slopes(slopes: impl IntoIterator<Item = Slope>, classes: &[SurfaceClass]) -> Self {
        SlopeSet {
            slopes: slopes.into_iter().collect(),
            provenance: BTreeMap::new(),
            classes_covered: classes.iter().copied().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Slope> + Clone {
        self.slopes.iter()
    }
}

pub fn boundary_slope_set(tri: &Triangulation, classes: &[SurfaceClass]) -> Result<SlopeSet, NormalError> {
    boundary_slope_set_with(tri, classes, &EnumerationOptions::default())
}

pub fn boundary_slope_set_with(
    tri: &Triangulation,
    classes: &[SurfaceClass],
    options: &EnumerationOptions,
) -> Result<SlopeSet, NormalError> {
    boundary_slope_set_using(tri, classes, |mode| enumerate_vertex_surfaces_with(tri, mode, options))
}

/// As [`boundary_slope_set`], with vertex surfaces supplied by `enumerate`
/// (for example from a cache).
pub fn boundary_slope_set_using(
    tri: &Triangulation,
    classes: &[SurfaceClass],
    enumerate: impl Fn(CoordMode) -> Result<Vec<NormalCoordinateVector>, NormalError>,
) -> Result<SlopeSet, NormalError> {
    if !validate(tri).is_knot_manifold_shaped {
        return Err(NotAKnotManifold.into());
    }
    let context = SurfaceContext::new(tri);
    let classes: BTreeSet<SurfaceClass> = classes.iter().copied().collect();
    let mut set = SlopeSet {
        classes_covered: classes.clone(),
        ..SlopeSet::default()
    };
    for &mode in &classes {
        let label = match mode {
            CoordMode::Normal => "normal",
            CoordMode::Octagonal => "octagonal",
        };
        for (i, v) in enumerate(mode)?.iter().enumerate() {
            if let Some(s) = context.summarize(v)?.slope {
                set.slopes.insert(s);
                set.provenance.entry(s).or_default().push(format!("{label}#{i}"));
            }
        }
    }
    Ok(set)
}
