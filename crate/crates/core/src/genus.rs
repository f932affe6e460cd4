//! Genus, handle-number and tunnel-number inequalities for `M = X ∪_F Y`.
//!
//! Hypotheses that cannot be checked here (smallness, incompressibility,
//! `M` closed with `F` connected) are passed in as flags by the caller.

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub const BOUNDS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("g(X) + g(Y) - g(F) = {0} is negative; inputs are inconsistent with a genus-g(F) gluing")]
    NegativeResult(i64),
    #[error("no complete pair of inputs: give g_x, g_y and g_f, or h_x and h_y, or t_x and t_y")]
    NoInputs,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusInputs {
    pub g_x: Option<u64>,
    pub g_y: Option<u64>,
    pub g_f: Option<u64>,
    pub h_x: Option<u64>,
    pub h_y: Option<u64>,
    pub t_x: Option<u64>,
    pub t_y: Option<u64>,
    pub chi: Option<i64>,
    /// `M` is closed and `F` is connected.
    pub closed: bool,
    /// `X` has a single boundary component or `H_X` meets every one.
    pub meets_all: bool,
}

fn ratio_text<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub schema_version: u32,
    pub upper_amalgamation: Option<i64>,
    #[serde(serialize_with = "ratio_text")]
    pub lower_handle: Option<Ratio<i64>>,
    #[serde(serialize_with = "ratio_text")]
    pub lower_tunnel: Option<Ratio<i64>>,
    #[serde(serialize_with = "ratio_text")]
    pub lower_genus: Option<Ratio<i64>>,
    /// Johannson's earlier bound `(g(X) + g(Y) - 2g(F)) / 5`, for comparison.
    #[serde(serialize_with = "ratio_text")]
    pub johannson_reference: Option<Ratio<i64>>,
    pub handle_from_chi: Option<i64>,
    pub tunnel_from_chi: Option<i64>,
    pub consistency: bool,
    pub notes: Vec<String>,
}

pub fn amalgamation_upper(g_x: u64, g_y: u64, g_f: u64) -> Result<i64, GenusError> {
    let v = g_x as i64 + g_y as i64 - g_f as i64;
    if v < 0 {
        return Err(GenusError::NegativeResult(v));
    }
    Ok(v)
}

/// `(h, t)` upper bounds `1 - χ(H_X)`; the tunnel bound needs `meets_all`.
pub fn handle_bound_from_surface(chi: i64, meets_all: bool) -> (i64, Option<i64>) {
    let h = 1 - chi;
    (h, meets_all.then_some(h))
}

fn half(a: u64, b: u64) -> Ratio<i64> {
    Ratio::new(a as i64 + b as i64, 2)
}

pub fn lower_bounds(inputs: &GenusInputs) -> Result<BoundsReport, GenusError> {
    let mut notes = Vec::new();
    let genus = match (inputs.g_x, inputs.g_y, inputs.g_f) {
        (Some(x), Some(y), Some(f)) => Some((x, y, f)),
        _ => None,
    };
    let handles = inputs.h_x.zip(inputs.h_y);
    let tunnels = inputs.t_x.zip(inputs.t_y);
    if genus.is_none() && handles.is_none() && tunnels.is_none() && inputs.chi.is_none() {
        return Err(GenusError::NoInputs);
    }

    let mut upper_amalgamation = None;
    let mut consistency = true;
    if let Some((x, y, f)) = genus {
        match amalgamation_upper(x, y, f) {
            Ok(u) => upper_amalgamation = Some(u),
            Err(e) => {
                notes.push(e.to_string());
                consistency = false;
            }
        }
    }
    let lower_genus = genus.map(|(x, y, f)| Ratio::new(x as i64 + y as i64 - 2 * f as i64, 2));
    let johannson_reference = genus.map(|(x, y, f)| Ratio::new(x as i64 + y as i64 - 2 * f as i64, 5));
    let lower_handle = handles.map(|(a, b)| half(a, b));
    let lower_tunnel = match tunnels {
        Some((a, b)) if inputs.closed => Some(half(a, b)),
        Some(_) => {
            notes.push("tunnel bound withheld: requires M closed and F connected (--closed)".into());
            None
        }
        None => None,
    };
    let (handle_from_chi, tunnel_from_chi) = match inputs.chi {
        Some(chi) => {
            let (h, t) = handle_bound_from_surface(chi, inputs.meets_all);
            if t.is_none() {
                notes.push(
                    "tunnel bound from χ withheld: requires a single boundary component or H_X meeting every one (--meets-all)"
                        .into(),
                );
            }
            (Some(h), t)
        }
        None => (None, None),
    };
    if let Some(u) = upper_amalgamation {
        let u = Ratio::from_integer(u);
        for l in [lower_genus, lower_handle, lower_tunnel].into_iter().flatten() {
            if l > u {
                consistency = false;
            }
        }
    }
    notes.push("smallness and incompressibility hypotheses are assumed, not checked".into());

    Ok(BoundsReport {
        schema_version: BOUNDS_SCHEMA_VERSION,
        upper_amalgamation,
        lower_handle,
        lower_tunnel,
        lower_genus,
        johannson_reference,
        handle_from_chi,
        tunnel_from_chi,
        consistency,
        notes,
    })
}
