//! Deciding whether a boundary gluing is sufficiently complicated: the Farey
//! distance between `Δ(X)` and `φ⁻¹(Δ(Y))` is at least two.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::farey::{set_distance, FareyError, GluingMatrix, Slope};
use crate::normal::{boundary_slope_set_with, CoordMode, EnumerationOptions, NormalError, SlopeSet, SurfaceClass};
use crate::triangulation::Triangulation;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const BAND_CAVEAT: &str = "band-type almost normal surfaces (a band along the boundary torus) have no coordinate encoding and are not enumerated; the verdict holds relative to classes_covered only";

const TUBE_CAVEAT: &str = "tube-type almost normal surfaces are not enumerated separately; their boundary slopes are those of the underlying normal pieces";
const VERTEX_CAVEAT: &str = "slope sets are computed from vertex solutions only";
const HYPOTHESIS_CAVEAT: &str = "irreducibility and boundary incompressibility of X and Y are assumed, not checked";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "X",
            Side::Y => "Y",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("{0}: not a one-vertex triangulation with a single torus boundary component")]
    NotAKnotManifold(Side),
    #[error("{0}: boundary slope set is empty; no verdict")]
    EmptyDelta(Side),
    #[error("{side}: {source}")]
    Normal { side: Side, source: NormalError },
    #[error(transparent)]
    Farey(#[from] FareyError),
    #[error("empty twist range {0}..{1}")]
    EmptyRange(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputsDigest {
    /// `triangulations` or `slope_sets`.
    pub source: String,
    pub x: String,
    pub y: String,
    pub gluing: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub schema_version: u32,
    pub gluing: GluingMatrix,
    pub delta_x: SlopeSet,
    pub delta_y: SlopeSet,
    /// `φ⁻¹(Δ(Y))` in the boundary basis of X.
    pub pulled_back: SlopeSet,
    pub min_distance: u32,
    pub witness_pair: (Slope, Slope),
    pub sufficiently_complicated: bool,
    pub classes_covered: BTreeSet<SurfaceClass>,
    pub verdict: String,
    pub theorem_consequence: Option<String>,
    pub coverage_caveats: Vec<String>,
    pub inputs_digest: InputsDigest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistScanResult {
    pub schema_version: u32,
    pub twist_slope: Slope,
    pub base_matrix: GluingMatrix,
    pub range: (i64, i64),
    pub failures: Vec<i64>,
    pub all_large_n_pass: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn slope_set_digest(s: &SlopeSet) -> String {
    let text: Vec<String> = s.slopes.iter().map(|x| x.to_string()).collect();
    sha256_hex(text.join(" ").as_bytes())
}

/// Image of a slope set under a matrix, keeping provenance.
pub fn map_slope_set(m: &GluingMatrix, set: &SlopeSet) -> Result<SlopeSet, FareyError> {
    let mut out = SlopeSet {
        classes_covered: set.classes_covered.clone(),
        ..SlopeSet::default()
    };
    for &s in &set.slopes {
        let t = m.apply(s)?;
        out.slopes.insert(t);
        if let Some(ids) = set.provenance.get(&s) {
            out.provenance.entry(t).or_default().extend(ids.iter().cloned());
        }
    }
    Ok(out)
}

/// Minimal distance between `delta_x` and `phi⁻¹(delta_y)`.
fn distance_stage(
    delta_x: &SlopeSet,
    delta_y: &SlopeSet,
    phi: &GluingMatrix,
) -> Result<(SlopeSet, u32, (Slope, Slope)), CertifyError> {
    if delta_x.is_empty() {
        return Err(CertifyError::EmptyDelta(Side::X));
    }
    if delta_y.is_empty() {
        return Err(CertifyError::EmptyDelta(Side::Y));
    }
    let pulled_back = map_slope_set(&phi.inverse(), delta_y)?;
    let d = set_distance(delta_x.iter(), pulled_back.iter())?;
    Ok((pulled_back, d.distance, d.witness))
}

/// The verdict from given slope sets; no enumeration.
pub fn certify_slope_sets(
    delta_x: &SlopeSet,
    delta_y: &SlopeSet,
    phi: &GluingMatrix,
) -> Result<CertificationReport, CertifyError> {
    let digest = InputsDigest {
        source: "slope_sets".into(),
        x: slope_set_digest(delta_x),
        y: slope_set_digest(delta_y),
        gluing: sha256_hex(phi.to_string().as_bytes()),
    };
    build_report(delta_x.clone(), delta_y.clone(), phi, digest)
}

pub fn certify(
    tri_x: &Triangulation,
    tri_y: &Triangulation,
    phi: &GluingMatrix,
    classes: &[SurfaceClass],
) -> Result<CertificationReport, CertifyError> {
    certify_with(tri_x, tri_y, phi, classes, &EnumerationOptions::default())
}

pub fn certify_with(
    tri_x: &Triangulation,
    tri_y: &Triangulation,
    phi: &GluingMatrix,
    classes: &[SurfaceClass],
    options: &EnumerationOptions,
) -> Result<CertificationReport, CertifyError> {
    certify_using(tri_x, tri_y, phi, |tri| boundary_slope_set_with(tri, classes, options))
}

/// As [`certify`], with slope sets computed by `delta`.
pub fn certify_using(
    tri_x: &Triangulation,
    tri_y: &Triangulation,
    phi: &GluingMatrix,
    delta: impl Fn(&Triangulation) -> Result<SlopeSet, NormalError>,
) -> Result<CertificationReport, CertifyError> {
    let delta = |tri: &Triangulation, side: Side| {
        delta(tri).map_err(|e| match e {
            NormalError::NotAKnotManifold(_) => CertifyError::NotAKnotManifold(side),
            source => CertifyError::Normal { side, source },
        })
    };
    let delta_x = delta(tri_x, Side::X)?;
    let delta_y = delta(tri_y, Side::Y)?;
    let digest = InputsDigest {
        source: "triangulations".into(),
        x: tri_x.digest(),
        y: tri_y.digest(),
        gluing: sha256_hex(phi.to_string().as_bytes()),
    };
    build_report(delta_x, delta_y, phi, digest)
}

fn build_report(
    delta_x: SlopeSet,
    delta_y: SlopeSet,
    phi: &GluingMatrix,
    inputs_digest: InputsDigest,
) -> Result<CertificationReport, CertifyError> {
    let (pulled_back, min_distance, witness_pair) = distance_stage(&delta_x, &delta_y, phi)?;
    let sufficiently_complicated = min_distance >= 2;
    let classes_covered: BTreeSet<SurfaceClass> = delta_x
        .classes_covered
        .intersection(&delta_y.classes_covered)
        .copied()
        .collect();
    let class_names: Vec<&str> = classes_covered
        .iter()
        .map(|c| match c {
            CoordMode::Normal => "normal",
            CoordMode::Octagonal => "octagonal",
        })
        .collect();
    let scope = format!("relative to classes_covered {{{}}}", class_names.join(", "));
    let verdict = if sufficiently_complicated {
        format!("sufficiently complicated {scope}")
    } else {
        format!("not sufficiently complicated {scope}")
    };
    let theorem_consequence = sufficiently_complicated.then(|| {
        format!(
            "if X and Y are knot manifolds and the enumerated classes exhaust their boundary slopes, then X ∪_φ Y has no strongly irreducible Heegaard splittings ({scope})"
        )
    });

    let mut coverage_caveats = vec![BAND_CAVEAT.to_string(), TUBE_CAVEAT.to_string()];
    if !classes_covered.contains(&CoordMode::Octagonal) {
        coverage_caveats.push("octagonal almost normal surfaces are not covered".to_string());
    }
    if !classes_covered.contains(&CoordMode::Normal) {
        coverage_caveats.push("normal surfaces are not covered".to_string());
    }
    coverage_caveats.push(VERTEX_CAVEAT.to_string());
    coverage_caveats.push(HYPOTHESIS_CAVEAT.to_string());

    Ok(CertificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        gluing: *phi,
        delta_x,
        delta_y,
        pulled_back,
        min_distance,
        witness_pair,
        sufficiently_complicated,
        classes_covered,
        verdict,
        theorem_consequence,
        coverage_caveats,
        inputs_digest,
    })
}

/// Evaluates the gluings `base · Tⁿ` for every `n` in `range`, where `T` is
/// the Dehn twist about `twist`.
pub fn twist_scan(
    delta_x: &SlopeSet,
    delta_y: &SlopeSet,
    base: &GluingMatrix,
    twist: Slope,
    range: RangeInclusive<i64>,
) -> Result<TwistScanResult, CertifyError> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Err(CertifyError::EmptyRange(lo, hi));
    }
    if delta_x.is_empty() || delta_y.is_empty() {
        return Err(FareyError::EmptySet.into());
    }
    let t = GluingMatrix::dehn_twist(twist)?;
    let mut failures = Vec::new();
    for n in range {
        let phi = base.compose(&t.pow(n)?)?;
        let (_, d, _) = distance_stage(delta_x, delta_y, &phi)?;
        if d < 2 {
            failures.push(n);
        }
    }
    let all_large_n_pass = failures.first() != Some(&lo) && failures.last() != Some(&hi);
    Ok(TwistScanResult {
        schema_version: REPORT_SCHEMA_VERSION,
        twist_slope: twist,
        base_matrix: *base,
        range: (lo, hi),
        failures,
        all_large_n_pass,
    })
}
