use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use knotglue::cache::EnumerationCache;
use knotglue::certifier::{self, CertificationReport, CertifyError, TwistScanResult};
use knotglue::farey::{distance, intersection_number, FareyError, GluingMatrix, Slope};
use knotglue::genus::{lower_bounds, BoundsReport, GenusError, GenusInputs};
use knotglue::normal::{
    boundary_slope_set_using, enumerate_vertex_surfaces_with, CoordMode, EnumerationOptions, NormalError, SlopeSet,
};
use knotglue::triangulation::{validate, ValidationReport};
use knotglue::{parse_triangulation, Triangulation};
use serde::Serialize;
use serde_json::{json, Value};

const OUTPUT_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "knotglue",
    version,
    about = "Boundary slopes, Farey distances and gluing certificates for knot manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a triangulation is a one-vertex triangulation of a knot manifold
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Boundary slopes of vertex normal (and almost normal) surfaces
    Slopes {
        file: PathBuf,
        #[command(flatten)]
        enumeration: EnumerationArgs,
        #[arg(long)]
        json: bool,
    },
    /// Distance between two slopes in the Farey graph
    FareyDist {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a gluing is sufficiently complicated
    Certify {
        /// Triangulation of X, or a slope-set JSON file
        x: PathBuf,
        /// Triangulation of Y, or a slope-set JSON file
        y: PathBuf,
        /// Matrix `a,b;c,d` from the boundary basis of X to that of Y
        #[arg(long, allow_hyphen_values = true)]
        gluing: String,
        #[command(flatten)]
        enumeration: EnumerationArgs,
        #[arg(long)]
        json: bool,
    },
    /// Certify the gluings base·Tⁿ for a range of Dehn twist powers n
    TwistScan {
        /// Slope set of X: a slope-set JSON file or a list like `1/0,2/1`
        #[arg(long, allow_hyphen_values = true)]
        dx: String,
        #[arg(long, allow_hyphen_values = true)]
        dy: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1,0;0,1")]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: String,
        /// Inclusive range `LO..HI`
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long)]
        json: bool,
    },
    /// Genus, handle-number and tunnel-number bounds for X ∪_F Y
    GenusBounds {
        #[arg(long)]
        gx: Option<u64>,
        #[arg(long)]
        gy: Option<u64>,
        #[arg(long)]
        gf: Option<u64>,
        #[arg(long)]
        hx: Option<u64>,
        #[arg(long)]
        hy: Option<u64>,
        #[arg(long)]
        tx: Option<u64>,
        #[arg(long)]
        ty: Option<u64>,
        /// Assert that M is closed and F connected
        #[arg(long)]
        closed: bool,
        /// Euler characteristic of a surface H_X
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
        /// Assert that X has one boundary component or H_X meets every one
        #[arg(long)]
        meets_all: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct EnumerationArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "normal,octagonal")]
    classes: Vec<Class>,
    /// Maximum number of intermediate rays during enumeration
    #[arg(long, default_value_t = EnumerationOptions::default().ray_cap)]
    ray_cap: usize,
    /// Neither read nor write the enumeration cache
    #[arg(long)]
    no_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Normal,
    Octagonal,
}

impl EnumerationArgs {
    fn classes(&self) -> Vec<CoordMode> {
        let mut out: Vec<CoordMode> = self
            .classes
            .iter()
            .map(|c| match c {
                Class::Normal => CoordMode::Normal,
                Class::Octagonal => CoordMode::Octagonal,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn slope_set(&self, tri: &Triangulation) -> Result<SlopeSet, NormalError> {
        let options = EnumerationOptions {
            ray_cap: self.ray_cap,
            ..EnumerationOptions::default()
        };
        let cache = if self.no_cache {
            None
        } else {
            EnumerationCache::from_env()
        };
        boundary_slope_set_using(tri, &self.classes(), |mode| match &cache {
            Some(c) => c.enumerate(tri, mode, &options),
            None => enumerate_vertex_surfaces_with(tri, mode, &options),
        })
    }
}

enum Failure {
    Domain(String),
    Input(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Input(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<FareyError> for Failure {
    fn from(e: FareyError) -> Self {
        match e {
            FareyError::InvalidMatrix(_) | FareyError::EmptySet => Failure::Domain(e.to_string()),
            FareyError::Syntax(..) | FareyError::NotPrimitive(..) => Failure::Input(e.to_string()),
            FareyError::Overflow => Failure::Resource(e.to_string()),
        }
    }
}

impl From<NormalError> for Failure {
    fn from(e: NormalError) -> Self {
        match e {
            NormalError::ResourceLimit { .. } | NormalError::Overflow => Failure::Resource(e.to_string()),
            NormalError::NotAKnotManifold(_) | NormalError::InadmissibleVector(_) => Failure::Domain(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::NotAKnotManifold(_) | CertifyError::EmptyDelta(_) => Failure::Domain(e.to_string()),
            CertifyError::Normal { side, source } => match Failure::from(source) {
                Failure::Domain(m) => Failure::Domain(format!("{side}: {m}")),
                Failure::Input(m) => Failure::Input(format!("{side}: {m}")),
                Failure::Resource(m) => Failure::Resource(format!("{side}: {m}")),
            },
            CertifyError::Farey(e) => e.into(),
            CertifyError::EmptyRange(..) => Failure::Input(e.to_string()),
        }
    }
}

impl From<GenusError> for Failure {
    fn from(e: GenusError) -> Self {
        match e {
            GenusError::NoInputs => Failure::Input(e.to_string()),
            GenusError::NegativeResult(_) => Failure::Domain(e.to_string()),
        }
    }
}

/// JSON with keys sorted at every level, so parsing and re-rendering gives
/// the same bytes.
fn canonical_json(value: &impl Serialize, command: &str) -> String {
    let mut v = serde_json::to_value(value).expect("report serializes");
    if let Value::Object(map) = &mut v {
        map.entry("schema_version").or_insert(json!(OUTPUT_SCHEMA_VERSION));
        map.insert("command".into(), json!(command));
    }
    let sorted: Value = serde_json::from_str(&v.to_string()).expect("valid json");
    serde_json::to_string_pretty(&sorted).expect("json renders")
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_triangulation(path: &Path) -> Result<Triangulation, Failure> {
    parse_triangulation(&read_file(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_slope(s: &str) -> Result<Slope, Failure> {
    Ok(s.parse::<Slope>()?)
}

fn parse_matrix(s: &str) -> Result<GluingMatrix, Failure> {
    Ok(s.parse::<GluingMatrix>()?)
}

/// A slope-set file, or an inline comma-separated list of slopes.
fn parse_slope_set(arg: &str) -> Result<SlopeSet, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return slope_set_file(path);
    }
    let slopes = arg
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_slope)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SlopeSet::from_slopes(slopes, &[]))
}

fn slope_set_file(path: &Path) -> Result<SlopeSet, Failure> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| Failure::Input(format!("{}: not a slope-set file: {e}", path.display())))
}

fn looks_like_json(path: &Path) -> Result<bool, Failure> {
    Ok(read_file(path)?.trim_start().starts_with('{'))
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Input(format!("cannot parse range `{s}`: expected LO..HI"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let n = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    Ok((n(lo)?, n(hi)?))
}

fn slope_list<'a>(slopes: impl Iterator<Item = &'a Slope>) -> String {
    let v: Vec<String> = slopes.map(|s| s.to_string()).collect();
    if v.is_empty() {
        "(none)".into()
    } else {
        v.join(", ")
    }
}

fn class_names(set: &SlopeSet) -> String {
    let v: Vec<&str> = set
        .classes_covered
        .iter()
        .map(|c| match c {
            CoordMode::Normal => "normal",
            CoordMode::Octagonal => "octagonal",
        })
        .collect();
    v.join(", ")
}

fn render_validation(r: &ValidationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "orientable: {}", r.orientable);
    let _ = writeln!(out, "vertices: {}", r.vertex_count);
    for (i, c) in r.boundary_components.iter().enumerate() {
        let _ = writeln!(
            out,
            "boundary component {i}: genus {}, {}, {} triangles",
            c.genus,
            if c.orientable { "orientable" } else { "non-orientable" },
            c.triangles
        );
    }
    let _ = writeln!(out, "knot manifold shaped: {}", r.is_knot_manifold_shaped);
    out
}

fn render_slopes(s: &SlopeSet) -> String {
    let mut out = format!("classes: {}\n", class_names(s));
    for slope in &s.slopes {
        let ids = s.provenance.get(slope).map(|v| v.join(" ")).unwrap_or_default();
        let _ = writeln!(out, "{slope}\t{ids}");
    }
    out
}

fn render_report(r: &CertificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gluing: {}", r.gluing);
    let _ = writeln!(out, "delta_x: {}", slope_list(r.delta_x.iter()));
    let _ = writeln!(out, "delta_y: {}", slope_list(r.delta_y.iter()));
    let _ = writeln!(out, "pulled_back: {}", slope_list(r.pulled_back.iter()));
    let _ = writeln!(
        out,
        "min_distance: {} (witness {}, {})",
        r.min_distance, r.witness_pair.0, r.witness_pair.1
    );
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(c) = &r.theorem_consequence {
        let _ = writeln!(out, "consequence: {c}");
    }
    let _ = writeln!(out, "caveats:");
    for c in &r.coverage_caveats {
        let _ = writeln!(out, "  - {c}");
    }
    out
}

fn render_scan(r: &TwistScanResult) -> String {
    let failures: Vec<String> = r.failures.iter().map(|n| n.to_string()).collect();
    format!(
        "twist: {}\nbase: {}\nrange: {}..{}\nfailures: {}\nall_large_n_pass: {}\n",
        r.twist_slope,
        r.base_matrix,
        r.range.0,
        r.range.1,
        if failures.is_empty() {
            "(none)".into()
        } else {
            failures.join(" ")
        },
        r.all_large_n_pass
    )
}

fn render_bounds(r: &BoundsReport) -> String {
    let mut out = String::new();
    let mut line = |name: &str, v: Option<String>| {
        if let Some(v) = v {
            let _ = writeln!(out, "{name}: {v}");
        }
    };
    line("upper_amalgamation", r.upper_amalgamation.map(|v| v.to_string()));
    line("lower_genus", r.lower_genus.map(|v| v.to_string()));
    line("lower_handle", r.lower_handle.map(|v| v.to_string()));
    line("lower_tunnel", r.lower_tunnel.map(|v| v.to_string()));
    line("johannson_reference", r.johannson_reference.map(|v| v.to_string()));
    line("handle_from_chi", r.handle_from_chi.map(|v| v.to_string()));
    line("tunnel_from_chi", r.tunnel_from_chi.map(|v| v.to_string()));
    line("consistency", Some(r.consistency.to_string()));
    out
}

/// A closed stdout (as in `| head`) is not an error.
fn emit<T: Serialize>(json: bool, command: &str, value: &T, text: impl FnOnce(&T) -> String) {
    let out = if json {
        canonical_json(value, command) + "\n"
    } else {
        text(value)
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file, json } => {
            let tri = read_triangulation(&file)?;
            let r = validate(&tri);
            emit(json, "validate", &r, render_validation);
            for d in &r.diagnostics {
                eprintln!("{d}");
            }
            if !r.is_knot_manifold_shaped {
                return Err(Failure::Domain(format!("{}: not knot-manifold shaped", file.display())));
            }
        }
        Command::Slopes {
            file,
            enumeration,
            json,
        } => {
            let tri = read_triangulation(&file)?;
            let set = enumeration.slope_set(&tri)?;
            emit(json, "slopes", &set, render_slopes);
        }
        Command::FareyDist { x, y, json } => {
            let (x, y) = (parse_slope(&x)?, parse_slope(&y)?);
            let d = distance(x, y);
            let value = json!({
                "x": x,
                "y": y,
                "distance": d,
                "intersection_number": intersection_number(x, y).to_string(),
            });
            emit(json, "farey-dist", &value, |_| format!("{d}\n"));
        }
        Command::Certify {
            x,
            y,
            gluing,
            enumeration,
            json,
        } => {
            let phi = parse_matrix(&gluing)?;
            let report = match (looks_like_json(&x)?, looks_like_json(&y)?) {
                (true, true) => certifier::certify_slope_sets(&slope_set_file(&x)?, &slope_set_file(&y)?, &phi)?,
                (false, false) => {
                    let (tx, ty) = (read_triangulation(&x)?, read_triangulation(&y)?);
                    certifier::certify_using(&tx, &ty, &phi, |t| enumeration.slope_set(t))?
                }
                _ => {
                    return Err(Failure::Input(
                        "give two triangulation files or two slope-set files, not one of each".into(),
                    ))
                }
            };
            emit(json, "certify", &report, render_report);
        }
        Command::TwistScan {
            dx,
            dy,
            base,
            twist,
            range,
            json,
        } => {
            let (dx, dy) = (parse_slope_set(&dx)?, parse_slope_set(&dy)?);
            let (base, twist) = (parse_matrix(&base)?, parse_slope(&twist)?);
            let (lo, hi) = parse_range(&range)?;
            let r = certifier::twist_scan(&dx, &dy, &base, twist, lo..=hi)?;
            emit(json, "twist-scan", &r, render_scan);
        }
        Command::GenusBounds {
            gx,
            gy,
            gf,
            hx,
            hy,
            tx,
            ty,
            closed,
            chi,
            meets_all,
            json,
        } => {
            let r = lower_bounds(&GenusInputs {
                g_x: gx,
                g_y: gy,
                g_f: gf,
                h_x: hx,
                h_y: hy,
                t_x: tx,
                t_y: ty,
                chi,
                closed,
                meets_all,
            })?;
            for n in &r.notes {
                eprintln!("note: {n}");
            }
            emit(json, "genus-bounds", &r, render_bounds);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
