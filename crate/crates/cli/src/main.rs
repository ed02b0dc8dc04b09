use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ccsurvive::audit::{run_audit, AuditConfig, AuditKind};
use ccsurvive::diagram::IntersectionDiagram;
use ccsurvive::graph::{distance, geodesics, Budget, ComplexKind, GeodesicPath};
use ccsurvive::normal::{tighten, CanonicalCode, CurveFile, NormalCurve, RawCurve};
use ccsurvive::registry::{generator, load_surface, load_surface_json};
use ccsurvive::surface::{HalfEdge, Surface};
use ccsurvive::survival::{behrstock_order, distance_formula, survival_path_between, Verdict, DEFAULT_M, FORMULA_MIN_K, ORDER_MIN_K};
use ccsurvive::twist::dehn_twist;
use ccsurvive::witness::{is_surviving, project, projection_distance, witness_of, Witness, WitnessFile};
use ccsurvive::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "ccsurvive", version, about = "Curves, projections and survival paths on marked punctured surfaces")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Total edge weight of enumerated curves
    #[arg(long, global = true, default_value_t = 20)]
    budget: u64,

    /// Largest number of curves an enumeration may hold
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_MAX_CURVES)]
    max_curves: usize,

    /// Seed for sampled commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Explicit surface descriptor (JSON) used in place of the registry
    #[arg(long, global = true)]
    surface_file: Option<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Surface registry queries
    Surface {
        #[command(subcommand)]
        command: SurfaceCommand,
    },
    /// Curve operations
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// Whether a curve survives filling in the marked point
    Surviving { curve: String },
    /// The witness a curve bounds, if any
    Witness { curve: String },
    /// Projection of a curve to a witness
    Project {
        #[arg(long)]
        witness: String,
        curve: String,
    },
    /// Projection distance to a witness, or to the whole surface without one
    #[command(name = "dW")]
    Dw {
        #[arg(long)]
        witness: Option<String>,
        a: String,
        b: String,
    },
    /// Distance in a curve graph
    Dist {
        /// full, surv, or witness:<witness or curve>
        #[arg(long, default_value = "full")]
        complex: String,
        a: String,
        b: String,
    },
    /// Geodesics in a curve graph
    Geodesics {
        #[arg(long, default_value = "full")]
        complex: String,
        #[arg(long, default_value_t = 256)]
        max_paths: usize,
        a: String,
        b: String,
    },
    /// Survival path between two surviving curves
    Path { a: String, b: String },
    /// Distance formula bounds
    Formula {
        #[arg(long, default_value_t = FORMULA_MIN_K)]
        k: u32,
        #[arg(long = "m", alias = "M", default_value_t = DEFAULT_M)]
        m: u32,
        a: String,
        b: String,
    },
    /// Order on witnesses with large projection
    Order {
        #[arg(long, default_value_t = ORDER_MIN_K)]
        k: u32,
        a: String,
        b: String,
    },
    /// Seeded audits
    Audit {
        kind: AuditKind,
        #[arg(long, default_value = "S06")]
        surface: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long = "m", alias = "M", default_value_t = DEFAULT_M)]
        m: u32,
        /// Twist-word length of sampled curves
        #[arg(long, default_value_t = 2)]
        steps: usize,
    },
}

#[derive(Subcommand)]
enum SurfaceCommand {
    /// Triangulation summary
    Info { surface: String },
}

#[derive(Subcommand)]
enum CurveCommand {
    /// Normal form of corner counts or of a closed walk
    Tighten { curve: String },
    /// Geometric intersection number and crossings
    Intersect { a: String, b: String },
    /// Image of a curve under a power of a Dehn twist
    Twist {
        #[arg(long)]
        along: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
        target: String,
    },
}

/// Everything that determines a run, embedded in every report.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    command: String,
    surface: Option<String>,
    seed: u64,
    budget: Budget,
    m: Option<u32>,
    k: Option<u32>,
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Report {
    version: &'static str,
    config: RunConfig,
    result: Value,
}

/// Curve input: corner counts or a closed walk of exit half-edges.
#[derive(Deserialize)]
struct CurveInput {
    surface: String,
    corner_counts: Option<Vec<[u32; 3]>>,
    walk: Option<Vec<HalfEdge>>,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

struct Context {
    common: Common,
    surface: Option<Surface>,
}

impl Context {
    fn surface(&mut self, id: &str) -> Result<&Surface, Failure> {
        if self.surface.as_ref().map(|s| s.id() != id).unwrap_or(true) {
            let s = match &self.common.surface_file {
                Some(path) => {
                    let s = load_surface_json(&read(path)?)?;
                    if s.id() != id {
                        return Err(Error::UnknownSurface(id.to_string()).into());
                    }
                    s
                }
                None => load_surface(id)?,
            };
            self.surface = Some(s);
        }
        Ok(self.surface.as_ref().expect("loaded above"))
    }

    fn budget(&self) -> Budget {
        Budget { weight: self.common.budget, max_curves: self.common.max_curves }
    }

    /// A curve from a JSON file, or `SURFACE:NAME` for a named generator.
    fn curve(&mut self, arg: &str) -> Result<NormalCurve, Failure> {
        let path = Path::new(arg);
        if !path.exists() {
            if let Some((id, name)) = arg.split_once(':') {
                let s = self.surface(id)?;
                return Ok(generator(s, name)?);
            }
            return Err(Failure::Usage(format!("`{arg}` is neither a file nor SURFACE:NAME")));
        }
        let value = unwrap_report(read_json(path)?, "curve");
        let input: CurveInput = serde_json::from_value(value).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        let raw = match (input.corner_counts, input.walk) {
            (Some(c), None) => RawCurve::Corners(c),
            (None, Some(w)) => RawCurve::Walk(w),
            _ => return Err(Failure::Usage(format!("{arg}: give exactly one of corner_counts and walk"))),
        };
        let s = self.surface(&input.surface)?;
        Ok(tighten(s, &raw)?)
    }

    /// A witness from a witness file, or from a curve bounding one.
    fn witness(&mut self, arg: &str) -> Result<Witness, Failure> {
        let path = Path::new(arg);
        if path.exists() {
            if let Ok(file) = serde_json::from_value::<WitnessFile>(unwrap_report(read_json(path)?, "witness")) {
                let s = self.surface(&file.boundary.surface)?;
                return Ok(file.to_witness(s)?);
            }
        }
        let c = self.curve(arg)?;
        let s = self.surface(c.surface_id())?;
        Ok(Witness::from_boundary(s, &c)?)
    }

    fn complex(&mut self, arg: &str) -> Result<ComplexKind, Failure> {
        match arg {
            "full" => Ok(ComplexKind::Full),
            "surv" => Ok(ComplexKind::Surviving),
            _ => match arg.strip_prefix("witness:") {
                Some(w) => Ok(ComplexKind::Witness(self.witness(w)?)),
                None => Err(Failure::Usage(format!("--complex: unknown value `{arg}`"))),
            },
        }
    }

    /// The surface of the curves in the current command.
    fn surface_of(&mut self, c: &NormalCurve) -> Result<Surface, Failure> {
        Ok(self.surface(c.surface_id())?.clone())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Accepts either a bare document or a report of this tool holding it under
/// `result.<field>`.
fn unwrap_report(value: Value, field: &str) -> Value {
    match value.get("result").and_then(|r| r.get(field)) {
        Some(inner) => inner.clone(),
        None => value,
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn curve_json(c: &NormalCurve) -> Value {
    json!({ "curve": CurveFile::from_curve(c), "code": c.code() })
}

fn codes(vs: &[NormalCurve]) -> Vec<CanonicalCode> {
    vs.iter().map(|c| c.code().clone()).collect()
}

fn path_json(p: &GeodesicPath) -> Value {
    json!(codes(&p.vertices))
}

fn run(ctx: &mut Context, command: &Command) -> Outcome {
    let budget = ctx.budget();
    let ok = |v: Value| Ok((v, false));
    match command {
        Command::Surface { command: SurfaceCommand::Info { surface } } => {
            let s = ctx.surface(surface)?;
            ok(to_value(&s.descriptor_summary()))
        }
        Command::Curve { command } => match command {
            CurveCommand::Tighten { curve } => {
                let c = ctx.curve(curve)?;
                let s = ctx.surface_of(&c)?;
                let mut v = curve_json(&c);
                v["classification"] = to_value(&c.classify(&s));
                v["edge_weights"] = json!(c.weights());
                ok(v)
            }
            CurveCommand::Intersect { a, b } => {
                let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
                let s = ctx.surface_of(&a)?;
                let d = IntersectionDiagram::new(&s, &a, &b)?;
                ok(json!({ "count": d.count(), "crossings": d.crossings() }))
            }
            CurveCommand::Twist { along, power, target } => {
                let (along, target) = (ctx.curve(along)?, ctx.curve(target)?);
                let s = ctx.surface_of(&along)?;
                ok(curve_json(&dehn_twist(&s, &along, *power, &target)?))
            }
        },
        Command::Surviving { curve } => {
            let c = ctx.curve(curve)?;
            let s = ctx.surface_of(&c)?;
            ok(json!({ "surviving": is_surviving(&s, &c)?, "code": c.code() }))
        }
        Command::Witness { curve } => {
            let c = ctx.curve(curve)?;
            let s = ctx.surface_of(&c)?;
            ok(json!({ "witness": witness_of(&s, &c)?.map(|w| w.to_file(&s)) }))
        }
        Command::Project { witness, curve } => {
            let w = ctx.witness(witness)?;
            let c = ctx.curve(curve)?;
            let s = ctx.surface_of(&c)?;
            let p = project(&s, &w, &c)?;
            let curves: Vec<CurveFile> = p.curves().iter().map(CurveFile::from_curve).collect();
            ok(json!({ "codes": p.codes(), "curves": curves }))
        }
        Command::Dw { witness, a, b } => {
            let w = witness.as_deref().map(|w| ctx.witness(w)).transpose()?;
            let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
            let s = ctx.surface_of(&a)?;
            ok(to_value(&projection_distance(&s, w.as_ref(), &a, &b, budget)?))
        }
        Command::Dist { complex, a, b } => {
            let kind = ctx.complex(complex)?;
            let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
            let s = ctx.surface_of(&a)?;
            ok(to_value(&distance(&s, &a, &b, &kind, budget)?))
        }
        Command::Geodesics { complex, max_paths, a, b } => {
            let kind = ctx.complex(complex)?;
            let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
            let s = ctx.surface_of(&a)?;
            let set = geodesics(&s, &a, &b, &kind, budget, *max_paths)?;
            let paths: Vec<Value> = set.paths.iter().map(path_json).collect();
            ok(json!({
                "distance": set.distance,
                "exhaustive": set.exhaustive,
                "truncated": set.truncated,
                "paths": paths,
            }))
        }
        Command::Path { a, b } => {
            let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
            let s = ctx.surface_of(&a)?;
            let p = survival_path_between(&s, &a, &b, budget)?;
            let segments: Vec<Value> = p
                .segments
                .iter()
                .map(|seg| {
                    json!({
                        "index": seg.index,
                        "witness": seg.witness.to_file(&s),
                        "geodesic": path_json(&seg.geodesic),
                        "exact": seg.exact,
                    })
                })
                .collect();
            ok(json!({
                "main": path_json(&p.main),
                "segments": segments,
                "flattened": p.flattened_codes(),
                "length": p.len(),
            }))
        }
        Command::Formula { k, m, a, b } => {
            let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
            let s = ctx.surface_of(&a)?;
            let f = distance_formula(&s, &a, &b, *k, *m, budget)?;
            Ok((to_value(&f), f.verdict == Verdict::Violation))
        }
        Command::Order { k, a, b } => {
            let (a, b) = (ctx.curve(a)?, ctx.curve(b)?);
            let s = ctx.surface_of(&a)?;
            match behrstock_order(&s, &a, &b, *k, budget) {
                Ok(o) => ok(to_value(&o)),
                Err(Error::OrderViolation(msg)) => Ok((json!({ "violation": msg }), true)),
                Err(e) => Err(e.into()),
            }
        }
        Command::Audit { kind, surface, n, m, steps } => {
            let s = ctx.surface(surface)?.clone();
            let config = AuditConfig { seed: ctx.common.seed, n: *n, budget, m: *m, steps: *steps };
            let r = run_audit(&s, *kind, config)?;
            let violated = !r.violations.is_empty();
            Ok((to_value(&r), violated))
        }
    }
}

fn config_of(common: &Common, command: &Command) -> RunConfig {
    let (name, surface, m, k) = match command {
        Command::Surface { command: SurfaceCommand::Info { surface } } => ("surface info", Some(surface.clone()), None, None),
        Command::Curve { command } => match command {
            CurveCommand::Tighten { .. } => ("curve tighten", None, None, None),
            CurveCommand::Intersect { .. } => ("curve intersect", None, None, None),
            CurveCommand::Twist { .. } => ("curve twist", None, None, None),
        },
        Command::Surviving { .. } => ("surviving", None, None, None),
        Command::Witness { .. } => ("witness", None, None, None),
        Command::Project { .. } => ("project", None, None, None),
        Command::Dw { .. } => ("dW", None, None, None),
        Command::Dist { .. } => ("dist", None, None, None),
        Command::Geodesics { .. } => ("geodesics", None, None, None),
        Command::Path { .. } => ("path", None, None, None),
        Command::Formula { k, m, .. } => ("formula", None, Some(*m), Some(*k)),
        Command::Order { k, .. } => ("order", None, None, Some(*k)),
        Command::Audit { kind, surface, m, .. } => {
            let name = match kind {
                AuditKind::Slim => "audit slim",
                AuditKind::Qg => "audit qg",
                AuditKind::Bgit => "audit bgit",
                AuditKind::Triples => "audit triples",
            };
            (name, Some(surface.clone()), Some(*m), None)
        }
    };
    RunConfig {
        command: name.to_string(),
        surface,
        seed: common.seed,
        budget: Budget { weight: common.budget, max_curves: common.max_curves },
        m,
        k,
        out: common.out.clone(),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("CCSURVIVE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second initialisation can only fail inside tests; the first one wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let mut config = config_of(&cli.common, &cli.command);
    let mut ctx = Context { common: cli.common.clone(), surface: None };
    let (result, violated) = match run(&mut ctx, &cli.command) {
        Ok(x) => x,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Core(e)) => {
            eprintln!("{}", json!({ "error": e.code(), "message": e.to_string() }));
            return ExitCode::from(match e {
                Error::Undecided(_) | Error::WitnessGeodesicUndecided(_) | Error::BudgetTooLarge(_) => EXIT_UNDECIDED,
                _ => EXIT_USAGE,
            });
        }
    };
    if config.surface.is_none() {
        config.surface = ctx.surface.as_ref().map(|s| s.id().to_string());
    }
    let report = Report { version: env!("CARGO_PKG_VERSION"), config, result };
    let text = serde_json::to_string(&report).expect("reports serialize") + "\n";
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if violated { EXIT_VIOLATION } else { 0 })
}
