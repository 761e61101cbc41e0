use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ptc_core::duality::{degree, dual_subdivision, intersect};
use ptc_core::enumeration::{count_with_seed, weighted_count, CycleChoice};
use ptc_core::jacobi::{caterpillar_cycle, lie_cycle, relation_rank, Cycle};
use ptc_core::json::*;
use ptc_core::marked::MarkedType;
use ptc_core::moduli::{count_rigid_types, enumerate_rigid_types, multiplicity};
use ptc_core::neumann::realize;
use ptc_core::recursion::recursive_count;
use ptc_core::scalar::set_float_tolerance;
use ptc_core::search::curves_through;
use ptc_core::svg::{curve_svg, curves_svg};
use ptc_core::weights::{lie_weight, Weight, WeightMode};
use ptc_core::{AbstractCurve, DeltaSet, PlaneCurve, Scalar, Vec2};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (json schema 1)");

#[derive(Parser)]
#[command(name = "ptc", version = VERSION, about = "Pseudotropical plane curves and refined curve counts")]
struct Cli {
    /// Use floating-point scalars instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,
    /// Relative tolerance of float comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads; computations currently run on one thread.
    #[arg(long, global = true, env = "PTC_THREADS", default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Clone)]
struct ModeArgs {
    /// Evaluate quantum numbers at this ħ.
    #[arg(long, conflicts_with = "laurent")]
    hbar: Option<f64>,
    /// Exact Laurent polynomials in y = e^{πiħ}.
    #[arg(long)]
    laurent: bool,
}

impl ModeArgs {
    fn mode(&self) -> WeightMode {
        if self.laurent {
            WeightMode::Laurent
        } else {
            WeightMode::Hbar(self.hbar.unwrap_or(0.0))
        }
    }
}

#[derive(Args, Clone)]
struct CurveArgs {
    /// Plane curve JSON.
    #[arg(long, conflicts_with_all = ["graph", "delta"])]
    curve: Option<PathBuf>,
    /// Abstract curve JSON, realized with `--delta`.
    #[arg(long, requires = "delta")]
    graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    delta: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Realize a metric graph with leg slopes as a plane curve.
    Realize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        delta: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Position of the root vertex, as "x,y".
        #[arg(long, default_value = "0,0")]
        at: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Dual polygon, dual subdivision and degree of a plane curve.
    Dualize {
        #[command(flatten)]
        input: CurveArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Intersection points and the Bézout check for two plane curves.
    Intersect {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
    },
    /// Rigid marked types with n legs.
    Types {
        #[arg(long)]
        n: usize,
        /// Also print each type's multiplicity for this Δ-set.
        #[arg(long)]
        delta: Option<PathBuf>,
    },
    /// Rigid curves with legs Δ through n − 1 points.
    Through {
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Jacobi space dimensions, or a cycle check for a Δ-set.
    Jacobi {
        #[arg(long, required_unless_present = "delta")]
        n: Option<usize>,
        #[arg(long)]
        delta: Option<PathBuf>,
        /// Check the caterpillar cycle for legs "s,t" instead of the Lie cycle.
        #[arg(long)]
        caterpillar: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Vertex weight and multiplicity of one type.
    Weight {
        #[arg(long)]
        delta: PathBuf,
        /// Type key as printed by `types`.
        #[arg(long = "type")]
        key: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Weighted count of curves through seeded or given points.
    Count {
        #[arg(long)]
        delta: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// "lie" or "caterpillar:s,t".
        #[arg(long, default_value = "lie")]
        cycle: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use these points instead of a seeded configuration.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Divide by |Aut Δ|.
        #[arg(long)]
        normalize: bool,
        /// Also list the realized types.
        #[arg(long)]
        verbose: bool,
    },
    /// The refined invariant by the recursion.
    Recurse {
        #[arg(long)]
        delta: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Top-level direction ξ₀ as "x,y".
        #[arg(long)]
        xi0: Option<String>,
        /// Report the ordered-leg count without dividing by |Aut Δ|.
        #[arg(long)]
        no_normalize: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Realize { .. } => "realize",
            Command::Dualize { .. } => "dualize",
            Command::Intersect { .. } => "intersect",
            Command::Types { .. } => "types",
            Command::Through { .. } => "through",
            Command::Jacobi { .. } => "jacobi",
            Command::Weight { .. } => "weight",
            Command::Count { .. } => "count",
            Command::Recurse { .. } => "recurse",
        }
    }
}

/// What a subcommand produces: JSON, and the table rendering of it.
struct Output {
    json: Value,
    table: Vec<String>,
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load<T>(path: &Path, parse: impl Fn(&Value) -> ptc_core::Result<T>) -> anyhow::Result<T> {
    parse(&read_json(path)?).with_context(|| format!("in {}", path.display()))
}

fn parse_pair<S: Scalar>(text: &str) -> anyhow::Result<Vec2<S>> {
    let (x, y) = text.split_once(',').ok_or_else(|| anyhow!("expected \"x,y\", found {text:?}"))?;
    Ok(Vec2::new(S::parse_scalar(x.trim())?, S::parse_scalar(y.trim())?))
}

fn parse_st(text: &str) -> anyhow::Result<(usize, usize)> {
    let (s, t) = text.split_once(',').ok_or_else(|| anyhow!("expected \"s,t\", found {text:?}"))?;
    Ok((s.trim().parse()?, t.trim().parse()?))
}

fn write_svg(path: &Option<PathBuf>, svg: impl FnOnce() -> String) -> anyhow::Result<()> {
    if let Some(p) = path {
        fs::write(p, svg()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn pair_text<S: Scalar>(p: &Vec2<S>) -> String {
    format!("{} {}", p.x.to_text(), p.y.to_text())
}

fn load_curve<S: Scalar>(input: &CurveArgs) -> anyhow::Result<PlaneCurve<S>> {
    match (&input.curve, &input.graph, &input.delta) {
        (Some(c), _, _) => load(c, plane_curve_from_json),
        (None, Some(g), Some(d)) => {
            let g: AbstractCurve<S> = load(g, graph_from_json)?;
            let d: DeltaSet<S> = load(d, delta_from_json)?;
            Ok(realize(&g, &d, 0, &Vec2::zero())?)
        }
        _ => bail!("give --curve, or --graph with --delta"),
    }
}

fn weight_output(value: &Weight, extra: Value) -> Output {
    let mut json = json!({ "value": weight_to_json(value) });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Output { json, table: vec![value.to_string()] }
}

fn run<S: Scalar>(cmd: &Command) -> anyhow::Result<Output> {
    Ok(match cmd {
        Command::Realize { graph, delta, root, at, svg } => {
            let g: AbstractCurve<S> = load(graph, graph_from_json)?;
            let d: DeltaSet<S> = load(delta, delta_from_json)?;
            let c = realize(&g, &d, *root, &parse_pair(at)?)?;
            write_svg(svg, || curve_svg(&c, dual_subdivision(&c).ok().as_ref()))?;
            let mut table: Vec<String> =
                c.positions.iter().enumerate().map(|(v, p)| format!("vertex {v}: {}", pair_text(p))).collect();
            table.extend(c.slopes.iter().enumerate().map(|(k, u)| format!("edge {k} slope: {}", pair_text(u))));
            Output { json: plane_curve_to_json(&c), table }
        }
        Command::Dualize { input, svg } => {
            let c: PlaneCurve<S> = load_curve(input)?;
            let sub = dual_subdivision(&c)?;
            let deg = degree(&c)?;
            write_svg(svg, || curve_svg(&c, Some(&sub)))?;
            let mut json = subdivision_to_json(&sub);
            json["degree"] = json!(deg.value);
            json["degree_squared"] = scalar_to_json(&deg.squared);
            let mut table = vec![
                format!("area {}", sub.outer.area().to_text()),
                format!("degree {}", deg.exact.map_or(deg.value.to_string(), |d| d.to_text())),
                format!("outer {}", sub.outer.vertices.iter().map(pair_text).collect::<Vec<_>>().join(", ")),
            ];
            for (i, (_, p)) in sub.cells.iter().enumerate() {
                table.push(format!("cell {i}: area {}", p.area().to_text()));
            }
            Output { json, table }
        }
        Command::Intersect { first, second } => {
            let a: PlaneCurve<S> = load(first, plane_curve_from_json)?;
            let b: PlaneCurve<S> = load(second, plane_curve_from_json)?;
            let r = intersect(&a, &b)?;
            let mut table: Vec<String> =
                r.points.iter().map(|p| format!("point {}: I = {}", pair_text(&p.point), p.multiplicity.to_text())).collect();
            table.push(format!("total {}", r.total.to_text()));
            table.push(format!("mixed area {}", r.mixed_area.to_text()));
            table.push(format!("degrees {} {}", r.degrees[0].value, r.degrees[1].value));
            table.push(format!(
                "bezout {} (equality {}, homothetic {})",
                if r.report.ok() { "ok" } else { "FAILED" },
                r.report.equality,
                r.report.homothetic
            ));
            Output { json: intersection_to_json(&r), table }
        }
        Command::Types { n, delta } => {
            let types = enumerate_rigid_types(*n)?;
            let d: Option<DeltaSet<S>> = delta.as_ref().map(|p| load(p, delta_from_json)).transpose()?;
            let mut rows = Vec::with_capacity(types.len());
            let mut table = Vec::with_capacity(types.len());
            for t in &types {
                let key = t.key_string();
                match &d {
                    Some(d) => {
                        let m = multiplicity(t, d);
                        table.push(format!("{key}  {}", m.to_text()));
                        rows.push(json!({ "type": key, "multiplicity": scalar_to_json(&m) }));
                    }
                    None => {
                        table.push(key.clone());
                        rows.push(json!({ "type": key }));
                    }
                }
            }
            Output { json: json!({ "n": n, "count": count_rigid_types(*n).to_string(), "types": rows }), table }
        }
        Command::Through { delta, points, svg } => {
            let d: DeltaSet<S> = load(delta, delta_from_json)?;
            let pts: Vec<Vec2<S>> = load(points, points_from_json)?;
            let sols = curves_through(&d, &pts)?;
            write_svg(svg, || {
                let curves: Vec<_> = sols.iter().filter_map(|s| s.realize(&d).ok()).collect();
                curves_svg(&curves, &pts)
            })?;
            let table = sols
                .iter()
                .map(|s| {
                    let lengths: Vec<String> = s.lengths.iter().map(|l| l.to_text()).collect();
                    format!("{}  mult {}  lengths {}", s.ty.key_string(), multiplicity(&s.ty, &d).to_text(), lengths.join(" "))
                })
                .collect();
            Output { json: json!({ "solutions": sols.iter().map(solution_to_json).collect::<Vec<_>>() }), table }
        }
        Command::Jacobi { n, delta: None, .. } => {
            let n = n.expect("clap requires --n without --delta");
            let dims = relation_rank(n)?;
            let mut json = json!({
                "n": dims.n,
                "generators": dims.generators,
                "relations": dims.relations,
                "rank": dims.rank,
                "dimension": dims.dimension,
            });
            let mut table = vec![
                format!("generators {}", dims.generators),
                format!("relations {}", dims.relations),
                format!("rank {}", dims.rank),
                format!("dimension {}", dims.dimension),
            ];
            if let Some(r) = &dims.rigid {
                json["rigid"] =
                    json!({ "types": r.types, "faces": r.faces, "mp_classes": r.mp_classes, "dimension": r.dimension });
                table.push(format!("rigid model: {} types, {} faces, dimension {}", r.types, r.faces, r.dimension));
            }
            Output { json, table }
        }
        Command::Jacobi { delta: Some(delta), caterpillar, mode, .. } => {
            let d: DeltaSet<S> = load(delta, delta_from_json)?;
            let mut z: Cycle = match caterpillar {
                Some(st) => {
                    let (s, t) = parse_st(st)?;
                    caterpillar_cycle(&d, s, t)?
                }
                None => lie_cycle(&d, mode.mode())?,
            };
            let report = z.verify();
            let violations: Vec<Value> =
                report.violations.iter().map(|v| json!({ "members": v.members, "residual": v.residual })).collect();
            let mut table = vec![format!(
                "cycle {} ({} relations checked)",
                if report.ok { "verified" } else { "FAILED" },
                report.relations_checked
            )];
            table.extend(report.violations.iter().map(|v| format!("violation: residual {}", v.residual)));
            Output {
                json: json!({ "ok": report.ok, "relations_checked": report.relations_checked, "violations": violations }),
                table,
            }
        }
        Command::Weight { delta, key, mode } => {
            let d: DeltaSet<S> = load(delta, delta_from_json)?;
            let t = MarkedType::parse_key(key)?;
            let w = lie_weight(&t, &d, mode.mode())?;
            let m = multiplicity(&t, &d);
            let mut out = weight_output(&w, json!({ "multiplicity": scalar_to_json(&m) }));
            out.table.push(format!("multiplicity {}", m.to_text()));
            out
        }
        Command::Count { delta, mode, cycle, seed, points, normalize, verbose } => {
            let d: DeltaSet<S> = load(delta, delta_from_json)?;
            let z = match cycle.as_str() {
                "lie" => CycleChoice::Lie(mode.mode()),
                other => match other.strip_prefix("caterpillar:") {
                    Some(st) => {
                        let (s, t) = parse_st(st)?;
                        CycleChoice::Caterpillar { s, t }
                    }
                    None => bail!("unknown cycle {other:?}; use \"lie\" or \"caterpillar:s,t\""),
                },
            };
            let mut r = match points {
                Some(p) => weighted_count(&d, &z, &load(p, points_from_json)?)?,
                None => count_with_seed(&d, &z, *seed)?,
            };
            if *normalize {
                r.value = r.value.div_int(r.aut);
                r.normalized = true;
            }
            let mut table = vec![r.value.to_string()];
            if *verbose {
                table.extend(r.ledger.iter().map(|e| format!("{}  {}", e.key, e.coefficient)));
            }
            Output { json: count_to_json(&r), table }
        }
        Command::Recurse { delta, mode, xi0, no_normalize } => {
            let d: DeltaSet<S> = load(delta, delta_from_json)?;
            let xi0: Option<Vec2<S>> = xi0.as_deref().map(parse_pair).transpose()?;
            let mut value = recursive_count(&d, xi0.as_ref(), mode.mode())?;
            let aut = d.aut_size();
            if !no_normalize {
                value = value.div_int(aut);
            }
            weight_output(&value, json!({ "normalized": !no_normalize, "aut": aut }))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = (|| {
        if !(cli.tol > 0.0 && cli.tol.is_finite()) {
            bail!("--tol must be a positive number");
        }
        if cli.threads == 0 {
            bail!("the thread count must be positive");
        }
        set_float_tolerance(cli.tol);
        if cli.float {
            run::<f64>(&cli.command)
        } else {
            run::<ptc_core::Rational>(&cli.command)
        }
    })();
    match result {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n",
                Format::Table => out.table.iter().map(|l| format!("{l}\n")).collect(),
            };
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("{}", json!({ "subcommand": name, "error": "Io", "message": e.to_string() }));
                    ExitCode::FAILURE
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            let causes: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            let kind = e.chain().find_map(|c| c.downcast_ref::<ptc_core::Error>()).map(|e| e.kind()).unwrap_or_else(|| {
                if e.chain().any(|c| c.is::<std::io::Error>()) {
                    "Io"
                } else if e.chain().any(|c| c.is::<serde_json::Error>()) {
                    "Parse"
                } else {
                    "Usage"
                }
            });
            let diag = json!({ "subcommand": name, "error": kind, "message": causes.join(": ") });
            eprintln!("{diag}");
            ExitCode::FAILURE
        }
    }
}
